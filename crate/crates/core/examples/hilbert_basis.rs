//! Hilbert bases of saturated cones.

use toric_roots::cone::Cone;
use toric_roots::hilbert::hilbert_basis;
use toric_roots::lattice::LatticeVector;

fn main() {
    let v = |x: &[i64]| LatticeVector::from_i64s(x);
    let cones = [
        ("(1,0),(1,2)", Cone::from_generators(&[v(&[1, 0]), v(&[1, 2])], 2).unwrap()),
        ("(1,0),(3,4)", Cone::from_generators(&[v(&[1, 0]), v(&[3, 4])], 2).unwrap()),
        ("(0,1),(5,-7)", Cone::from_generators(&[v(&[0, 1]), v(&[5, -7])], 2).unwrap()),
        ("cone over a square", Cone::from_generators(&[v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])], 3).unwrap()),
        ("(1,0,0),(0,1,0),(1,1,2)", Cone::from_generators(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 2])], 3).unwrap()),
    ];
    for (name, c) in &cones {
        let hb = hilbert_basis(c).unwrap();
        println!("{name}: {} elements", hb.len());
        for h in hb {
            println!("  {h}");
        }
    }
}
