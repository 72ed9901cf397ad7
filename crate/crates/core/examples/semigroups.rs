//! The three representations, membership, holes and saturation.

use num_bigint::BigInt;
use toric_roots::cone::{Cone, IntBox};
use toric_roots::lattice::LatticeVector;
use toric_roots::semigroup::{APFamily, AffineSemigroup};

fn main() {
    let v = |x: &[i64]| LatticeVector::from_i64s(x);

    let s = AffineSemigroup::generated(vec![v(&[1, 0]), v(&[1, 2]), v(&[2, 1]), v(&[0, 3])]).unwrap_or_else(|e| panic!("{e}"));
    println!("generated: saturated {}, dual rays {:?}", s.is_saturated(), s.dual_rays());
    println!("saturation Hilbert basis {:?}", s.saturation_hilbert_basis());
    println!("hole structure {:?}", s.hole_structure().unwrap());
    println!("holes in the box: {:?}", s.holes_within(&IntBox::from_bounds(&[(0, 4), (0, 4)]).unwrap()));

    let cone = Cone::from_generators(&[v(&[1, 0]), v(&[1, 2])], 2).unwrap();
    let fam = APFamily::new(v(&[1, 2]), v(&[2, 4])).unwrap();
    let sp = AffineSemigroup::hole_patched(cone.clone(), vec![], vec![fam]).unwrap();
    println!("hole-patched: certificate {:?}", sp.closure_certificate());
    for m in [[1, 2], [2, 4], [3, 6], [5, 10], [3, 2]] {
        println!("  {:?} member: {}", m, sp.member(&v(&m)));
    }
    let irr = sp.irreducibles(Some(&BigInt::from(12))).unwrap();
    println!("irreducibles up to grading 12 (complete: {}): {:?}", irr.complete, irr.elements);

    match AffineSemigroup::hole_patched(cone, vec![v(&[2, 2])], vec![]) {
        Ok(_) => println!("closed"),
        Err(e) => println!("rejected: {e}"),
    }

    let bad = AffineSemigroup::generated(vec![v(&[1, 0])]);
    println!("a ray alone: {:?}", bad.err().map(|e| e.to_string()));
}
