//! JSON semigroup specs and random instances.

use toric_roots::cli::random::Generator;
use toric_roots::cli::wire::SemigroupSpec;

fn main() {
    let text = r#"{"rank": 2, "representation": {"kind": "hole_patched",
        "cone_generators": [[1, 0], [1, 2]], "hole_rays": [{"base": [1, 2], "step": [2, 4]}]}}"#;
    let spec = SemigroupSpec::parse(text).unwrap();
    let s = spec.build().unwrap();
    println!("parsed: cone rays {:?}, families {:?}", s.cone().rays(), s.hole_families());
    println!("canonical: {}", SemigroupSpec::of(&s).to_value());

    for bad in [
        r#"{"rank": 2, "representation": {"kind": "generated", "generators": [[1, 0, 0]]}}"#,
        r#"{"rank": 2, "representation": {"kind": "hole_patched", "cone_generators": [[1, 0], [0, 1]], "finite_holes": [[1, 1]]}}"#,
        r#"{"rank": 2}"#,
    ] {
        let err = SemigroupSpec::parse(bad).and_then(|s| s.build()).unwrap_err();
        println!("{}: {err}", err.kind());
    }

    let mut g = Generator::new(3);
    for _ in 0..4 {
        let s = g.instance();
        println!("random: {}", SemigroupSpec::of(&s).to_value());
    }
}
