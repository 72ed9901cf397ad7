//! Sorting saturated semigroups into the three cases.

use toric_roots::classify::{classify, Case};
use toric_roots::cli::fixtures;
use toric_roots::cone::Cone;
use toric_roots::lattice::LatticeVector;
use toric_roots::semigroup::AffineSemigroup;

fn main() {
    let v = |x: &[i64]| LatticeVector::from_i64s(x);
    let mut cases = vec![
        ("torus", fixtures::load("torus")),
        ("quadrant", fixtures::load("quadrant")),
        ("s1", fixtures::load("s1")),
        ("fig3", fixtures::load("fig3")),
    ];
    let half = Cone::from_generators(&[v(&[1, 0]), v(&[-1, 0]), v(&[1, 2])], 2).unwrap();
    cases.push(("half-plane", AffineSemigroup::saturated(half).unwrap()));
    let wedge = Cone::from_generators(&[v(&[1, 0, 0]), v(&[-1, 0, 0]), v(&[0, 1, 0]), v(&[0, 1, 2])], 3).unwrap();
    cases.push(("line times s1", AffineSemigroup::saturated(wedge).unwrap()));

    for (name, s) in &cases {
        let c = classify(s).unwrap_or_else(|e| panic!("{name}: {e}"));
        match &c.case {
            Case::Torus { rank } => println!("{name}: torus of rank {rank}"),
            Case::SplitsOffAffineLine { split_vector, split_ray, complement } => println!(
                "{name}: splits off a line along {split_vector} (ray {split_ray}); complement has cone {:?}",
                complement.cone().rays()
            ),
            Case::General { is_degenerate, unit_rank } => {
                println!("{name}: general, degenerate {is_degenerate}, unit rank {unit_rank}")
            }
        }
        println!("  Hilbert basis size {}, smooth {}", c.hilbert_basis_size, c.smooth);
    }

    println!("non-saturated input: {:?}", classify(&fixtures::load("s1prime")).err().map(|e| e.to_string()));
}
