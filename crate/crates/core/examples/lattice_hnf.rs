//! Hermite normal form, kernels and sublattice membership.

use num_bigint::BigInt;
use toric_roots::lattice::{hermite_normal_form, kernel_basis, minimal_embedding, IntMatrix, LatticeVector, Sublattice};

fn main() {
    let a = IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let hnf = hermite_normal_form(&a);
    println!("H = {:?}", hnf.h);
    println!("U = {:?}", hnf.u);
    println!("rank {}, pivots {:?}, det A = {}", hnf.rank, hnf.pivots, a.determinant().unwrap());

    let rows = [LatticeVector::from_i64s(&[1, 2, 3]), LatticeVector::from_i64s(&[2, 4, 7])];
    for k in kernel_basis(&rows, 3) {
        println!("kernel vector {k}");
    }

    let l = Sublattice::spanned_by(&[LatticeVector::from_i64s(&[2, 0]), LatticeVector::from_i64s(&[1, 3])], 2).unwrap();
    println!("index of the sublattice: {:?}", l.index());
    for v in [[3, 3], [1, 0]] {
        let v = LatticeVector::from_i64s(&v);
        println!("{v} in L: {} (coordinates {:?})", l.contains(&v), l.coordinates(&v));
    }

    // generators living in a plane of Z^3
    let gens = [LatticeVector::from_i64s(&[1, 1, 0]), LatticeVector::from_i64s(&[1, 2, 1])];
    let emb = minimal_embedding(&gens).unwrap();
    println!("minimal embedding has rank {}", emb.rank());
    let y = LatticeVector::new(vec![BigInt::from(1), BigInt::from(1)]);
    println!("lift of {y}: {}", emb.lift(&y));
}
