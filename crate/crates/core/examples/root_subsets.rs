//! Comparing root sets and recovering the saturation from roots.

use toric_roots::cli::fixtures;
use toric_roots::cone::IntBox;
use toric_roots::roots::{reconstruct_saturation_from_roots, root_set, root_subset};

fn main() {
    let search = IntBox::cube(2, 10);
    let pairs = [("s1", "s2"), ("s2", "s1"), ("s1prime", "s2prime"), ("s2prime", "s1prime"), ("fig3", "fig4"), ("fig4", "fig3")];
    for (a, b) in pairs {
        let ra = root_set(&fixtures::load(a)).unwrap();
        let rb = root_set(&fixtures::load(b)).unwrap();
        println!("R({a}) <= R({b}): {:?}", root_subset(&ra, &rb, &search).unwrap());
    }

    for name in ["s1", "s1prime", "fig4"] {
        let rec = reconstruct_saturation_from_roots(&root_set(&fixtures::load(name)).unwrap()).unwrap();
        println!("{name}: normals {:?}, recovered rays {:?}, unresolved {:?}", rec.normals, rec.cone.rays(), rec.rays_without_roots);
    }
}
