//! Demazure roots of normal and non-normal semigroups.

use toric_roots::cli::fixtures;
use toric_roots::cone::IntBox;
use toric_roots::lattice::LatticeVector;
use toric_roots::roots::{is_root, root_set, roots_in_box, RootCheck};

fn main() {
    let bx = IntBox::from_bounds(&[(-3, 8), (-3, 8)]).unwrap_or_else(|e| panic!("{e}"));
    for name in ["s1", "s1prime", "fig3", "fig4"] {
        let s = fixtures::load(name);
        let roots = roots_in_box(&s, &bx).unwrap();
        let alphas: Vec<String> = roots.iter().map(|w| format!("{}@{}", w.alpha, w.ray)).collect();
        println!("{name}: {} roots in {bx}: {}", roots.len(), alphas.join(" "));
    }

    let fig4 = fixtures::load("fig4");
    for a in [[2, 3], [0, -1], [-1, 1]] {
        match is_root(&fig4, &LatticeVector::from_i64s(&a)).unwrap() {
            RootCheck::Accepted(w) => println!("{:?} is a root for {}", a, w.ray),
            RootCheck::Rejected(r) => println!("{:?} rejected; candidate rays {:?}, violations {:?}", a, r.candidate_rays, r.violations),
        }
    }

    let rs = root_set(&fixtures::load("s1prime")).unwrap();
    for slice in &rs.per_ray {
        println!("ray {}: exceptions {:?}", slice.ray, slice.exceptions);
    }
}
