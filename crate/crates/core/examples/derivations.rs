//! Homogeneous locally nilpotent derivations on the semigroup algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use toric_roots::algebra::{
    check_locally_nilpotent, exponentiate, generators_of, iterate, leibniz_defect, Derivation, DemazureDerivation,
    SemigroupAlgebra, SquaredWeightMap,
};
use toric_roots::cli::fixtures;
use toric_roots::lattice::LatticeVector;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn main() {
    let s = fixtures::load("fig4");
    let v = |x: &[i64]| LatticeVector::from_i64s(x);
    let d = DemazureDerivation::new(&s, v(&[2, 3]), v(&[4, -3])).unwrap_or_else(|e| panic!("{e}"));
    let alg = SemigroupAlgebra::new(s.clone());

    let f = alg.element([(v(&[3, 0]), q(1)), (v(&[4, 3]), q(-2))]).unwrap();
    let g = alg.element([(v(&[2, 0]), q(3))]).unwrap();
    println!("f = {f}");
    for k in 0..5 {
        println!("d^{k} f = {}", iterate(&d, &f, k));
    }
    println!("Leibniz defect on (f, g): {}", leibniz_defect(&d, &f, &g));
    println!("nilpotency index on generators: {:?}", check_locally_nilpotent(&d, &generators_of(&s), 64));

    let t = BigRational::new(BigInt::from(1), BigInt::from(2));
    let lhs = exponentiate(&d, &t, &f.mul(&g), 64).unwrap();
    let rhs = exponentiate(&d, &t, &f, 64).unwrap().mul(&exponentiate(&d, &t, &g, 64).unwrap());
    println!("exp(t d) is multiplicative: {}", lhs == rhs);

    let bad = SquaredWeightMap(d.clone());
    println!("squared weight map Leibniz defect: {}", leibniz_defect(&bad, &f, &g));
    println!("bad map on x^(3,0): {}", bad.on_monomial(&v(&[3, 0])));

    match DemazureDerivation::new(&s, v(&[1, 1]), v(&[0, 1])) {
        Ok(_) => println!("accepted"),
        Err(e) => println!("not a root: {e}"),
    }
}
