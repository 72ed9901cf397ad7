//! Searching for hole sets that keep the roots of a saturated semigroup.

use num_bigint::BigInt;
use toric_roots::classify::{explore_same_roots, ExploreBudget, ExploreResult};
use toric_roots::cli::fixtures;

fn main() {
    let fig3 = fixtures::load("fig3");
    for g in [4, 8, 12] {
        let budget = ExploreBudget { max_grading: BigInt::from(g), ..ExploreBudget::default() };
        let r: ExploreResult = explore_same_roots(&fig3, &budget).unwrap_or_else(|e| panic!("{e}"));
        println!("grading <= {g}: {} hole sets {}, exhausted {}, {} nodes", r.hole_sets.len(), ExploreResult::LABEL, r.exhausted, r.nodes);
        for h in r.hole_sets.iter().take(6) {
            println!("  {h:?}");
        }
    }
    let r = explore_same_roots(&fixtures::load("quadrant"), &ExploreBudget::default()).unwrap();
    println!("quadrant: {:?}", r.hole_sets);
}
