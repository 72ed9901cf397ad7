//! Distinct non-normal semigroups sharing the roots of a normal one.

use toric_roots::classify::{emit_sl_family, verify_family};
use toric_roots::cli::fixtures;
use toric_roots::cone::IntBox;
use toric_roots::roots::{root_set, root_subset};

fn main() {
    let base = fixtures::load("s1");
    for k in [0, 1] {
        let fam = emit_sl_family(&base, k, 3).unwrap_or_else(|e| panic!("{e}"));
        println!("k = {k}: base cone {:?}", fam.base.cone().rays());
        for m in &fam.members {
            println!("  l = {}: holes {:?}, missing witness {}", m.l, m.core.finite_holes(), m.witness);
        }
        println!("  family check: {:?}", verify_family(&fam));
    }

    let fam = emit_sl_family(&base, 0, 3).unwrap();
    let rb = root_set(&fam.base).unwrap();
    let search = IntBox::cube(2, 8);
    for m in &fam.members {
        let rm = root_set(&m.semigroup).unwrap();
        println!(
            "l = {}: R(S_l) <= R(S) {:?}, R(S) <= R(S_l) {:?}",
            m.l,
            root_subset(&rm, &rb, &search).unwrap(),
            root_subset(&rb, &rm, &search).unwrap()
        );
    }

    println!("quadrant: {:?}", emit_sl_family(&fixtures::load("quadrant"), 0, 2).err().map(|e| e.to_string()));
}
