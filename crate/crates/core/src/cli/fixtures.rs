//! The bundled example semigroups.

use crate::cli::wire::SemigroupSpec;
use crate::semigroup::AffineSemigroup;

pub const NAMES: [&str; 8] = ["s1", "s2", "s1prime", "s2prime", "fig3", "fig4", "quadrant", "torus"];

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "s1" => include_str!("../../fixtures/s1.json"),
        "s2" => include_str!("../../fixtures/s2.json"),
        "s1prime" => include_str!("../../fixtures/s1prime.json"),
        "s2prime" => include_str!("../../fixtures/s2prime.json"),
        "fig3" => include_str!("../../fixtures/fig3.json"),
        "fig4" => include_str!("../../fixtures/fig4.json"),
        "quadrant" => include_str!("../../fixtures/quadrant.json"),
        "torus" => include_str!("../../fixtures/torus.json"),
        _ => return None,
    })
}

/// Panics on an unknown name; the bundled files are valid.
pub fn load(name: &str) -> AffineSemigroup {
    let t = text(name).unwrap_or_else(|| panic!("no fixture {name}"));
    SemigroupSpec::parse(t).and_then(|s| s.build()).expect("bundled fixtures are valid")
}

pub fn all() -> Vec<(&'static str, AffineSemigroup)> {
    NAMES.iter().map(|n| (*n, load(n))).collect()
}
