//! Rays, facets and duals via double description.

use toric_roots::cone::Cone;
use toric_roots::lattice::LatticeVector;

fn show(name: &str, c: &Cone) {
    println!("{name}: rays {:?}, lineality {:?}, facets {:?}", c.rays(), c.lineality(), c.facets());
}

fn main() {
    let v = |x: &[i64]| LatticeVector::from_i64s(x);
    let sigma = Cone::from_generators(&[v(&[1, 0]), v(&[1, 1]), v(&[1, 2])], 2).unwrap();
    show("sigma", &sigma);
    show("dual", &sigma.dual());
    println!("double dual equals sigma: {}", sigma.dual().dual() == sigma);

    let square = Cone::from_generators(&[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])], 3).unwrap();
    show("square pyramid", &square);
    show("its dual", &square.dual());

    let half = Cone::from_inequalities(&[v(&[0, 1])], 2).unwrap();
    show("half-plane", &half);
    println!("pointed {}, default grading {:?}", half.is_pointed(), sigma.default_grading().unwrap());
}
