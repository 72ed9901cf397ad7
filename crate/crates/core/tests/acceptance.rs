//! Acceptance criteria 1-9. Prints one line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use sha2::{Digest, Sha256};

use toric_roots::classify::{classify, emit_sl_family, verify_family, Case, ClassifyError};
use toric_roots::cli::fixtures;
use toric_roots::cli::random::Generator;
use toric_roots::cli::verify::{self, Options};
use toric_roots::cli::{execute, EXIT_OK};
use toric_roots::cone::{Cone, IntBox};
use toric_roots::hilbert::hilbert_basis;
use toric_roots::lattice::LatticeVector;
use toric_roots::roots::{root_set, root_subset, roots_in_box, SubsetVerdict};
use toric_roots::semigroup::AffineSemigroup;

const SEED: u64 = 7;

// runtime limits per criterion
const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_3: Duration = Duration::from_secs(30);
const LIMIT_4: Duration = Duration::from_secs(30);
const LIMIT_5: Duration = Duration::from_secs(60);
const LIMIT_6: Duration = Duration::from_secs(60);
const LIMIT_7: Duration = Duration::from_secs(10);
const LIMIT_8: Duration = Duration::from_secs(5);
const LIMIT_9: Duration = Duration::from_secs(120);

type Check = Result<(), String>;

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(c)
}

fn lvs(cs: &[&[i64]]) -> Vec<LatticeVector> {
    cs.iter().map(|c| lv(c)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn box_roots(s: &AffineSemigroup, bx: &IntBox) -> Result<Vec<LatticeVector>, String> {
    Ok(roots_in_box(s, bx).map_err(|e| e.to_string())?.into_iter().map(|w| w.alpha).collect())
}

fn both_ways(a: &AffineSemigroup, b: &AffineSemigroup) -> Check {
    let (ra, rb) = (root_set(a).map_err(|e| e.to_string())?, root_set(b).map_err(|e| e.to_string())?);
    let bx = IntBox::cube(2, 8);
    let ab = root_subset(&ra, &rb, &bx).map_err(|e| e.to_string())?;
    let ba = root_subset(&rb, &ra, &bx).map_err(|e| e.to_string())?;
    ensure(ab == SubsetVerdict::ProvenSubset && ba == SubsetVerdict::ProvenSubset, || format!("verdicts {ab:?} / {ba:?}"))
}

fn bottom_row(hi: i64) -> Vec<LatticeVector> {
    (0..=hi).map(|k| lv(&[k, -1])).collect()
}

fn criterion_1() -> Check {
    let a = fixtures::load("s1prime");
    let b = fixtures::load("s2prime");
    let bx = IntBox::from_bounds(&[(-1, 8), (-2, 1)]).unwrap();
    for s in [&a, &b] {
        let r = box_roots(s, &bx)?;
        ensure(r == bottom_row(8), || format!("box roots {r:?}"))?;
    }
    both_ways(&a, &b)?;
    let ha = a.saturation_hilbert_basis().to_vec();
    let hb = b.saturation_hilbert_basis().to_vec();
    ensure(ha == lvs(&[&[1, 0], &[1, 1], &[1, 2]]), || format!("first basis {ha:?}"))?;
    ensure(hb == lvs(&[&[1, 0], &[1, 1], &[1, 2], &[1, 3]]), || format!("second basis {hb:?}"))?;
    ensure(ha != hb, || "saturations coincide".into())
}

fn criterion_2() -> Check {
    let sat = fixtures::load("fig3");
    let s = fixtures::load("fig4");
    ensure(s.finite_holes() == lvs(&[&[1, 0], &[1, 1], &[3, 2], &[3, 3], &[3, 4], &[5, 6]]).as_slice(), || "holes".into())?;
    ensure(s.cone() == sat.cone(), || "different saturation".into())?;
    both_ways(&s, &sat)?;
    let mut expected = bottom_row(8);
    expected.extend(lvs(&[&[2, 3], &[5, 7]]));
    expected.sort();
    let bx = IntBox::from_bounds(&[(-3, 8), (-3, 8)]).unwrap();
    for t in [&s, &sat] {
        let r = box_roots(t, &bx)?;
        ensure(r == expected, || format!("box roots {r:?}"))?;
    }
    Ok(())
}

fn suite(r: verify::Report) -> Check {
    ensure(r.passed() && r.checks > 0, || {
        format!("{} checks, first failure {:?}", r.checks, r.failures.first().map(|f| (&f.instance, &f.message)))
    })
}

fn criterion_3() -> Check {
    suite(verify::prop36(&Options::new(SEED, 200)))
}

fn criterion_4() -> Check {
    suite(verify::famous_remark(&Options::new(SEED, 100)))
}

fn criterion_5() -> Check {
    let r = verify::subset_lemma(&Options::new(SEED, 100));
    ensure(r.instances == 101, || format!("{} pairs", r.instances))?;
    let s1 = root_set(&fixtures::load("s1")).unwrap();
    let s2 = root_set(&fixtures::load("s2")).unwrap();
    let v = root_subset(&s1, &s2, &IntBox::cube(2, 8)).unwrap();
    ensure(v == SubsetVerdict::ProvenNotSubset { alpha: lv(&[1, 3]) }, || format!("{v:?}"))?;
    suite(r)
}

/// All irreducibles of `C ∩ Z^d` by enumeration: every irreducible lies in
/// the half-open parallelepiped of some `d` rays, so its grading is below
/// the sum of the `d` largest ray gradings.
fn brute_force_irreducibles(c: &Cone) -> Vec<LatticeVector> {
    let d = c.dim();
    let u = c.default_grading().unwrap();
    let mut g: Vec<BigInt> = c.rays().iter().map(|r| r.dot(&u)).collect();
    g.sort();
    g.reverse();
    let bound: BigInt = g.iter().take(d).sum();
    // vertices of {x ∈ C : <x,u> <= bound} are bound/<r,u>·r
    let mut reach = vec![0i64; d];
    for r in c.rays() {
        let scale = &bound / r.dot(&u) + 1;
        for (i, x) in r.coords().iter().enumerate() {
            let v: BigInt = x * &scale;
            reach[i] = reach[i].max(v.abs().to_i64().unwrap());
        }
    }
    let lo: Vec<i64> = reach.iter().map(|r| -r).collect();
    let bx = IntBox::new(LatticeVector::from_i64s(&lo), LatticeVector::from_i64s(&reach)).unwrap();
    let mut pts: Vec<LatticeVector> =
        c.enumerate_lattice_points(&bx).into_iter().filter(|p| !p.is_zero() && p.dot(&u) <= bound).collect();
    pts.sort_by(|a, b| a.dot(&u).cmp(&b.dot(&u)).then_with(|| a.cmp(b)));
    let mut irr: Vec<LatticeVector> = Vec::new();
    for x in pts {
        if !irr.iter().any(|h| c.contains(&(&x - h))) {
            irr.push(x);
        }
    }
    irr.sort();
    irr
}

fn criterion_6() -> Check {
    let mut g = Generator::new(SEED);
    for i in 0..50 {
        let rank = if i % 2 == 0 { 2 } else { 3 };
        let c = g.cone(rank);
        let s = AffineSemigroup::saturated(c.clone()).unwrap();
        let hb = s.saturation_hilbert_basis().to_vec();
        let oracle = brute_force_irreducibles(&c);
        ensure(hb == oracle, || format!("cone {:?}: {hb:?} vs {oracle:?}", c.rays()))?;
        ensure(hilbert_basis(&c).unwrap() == hb, || "basis differs between entry points".into())?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    suite(verify::algebra(&Options::new(SEED, 8)))?;
    let mut bad = Options::new(SEED, 8);
    bad.corrupt_derivation = true;
    let r = verify::algebra(&bad);
    ensure(!r.passed() && r.failures.iter().any(|f| f.message.contains("Leibniz")), || "corrupted map passed".into())
}

fn criterion_8() -> Check {
    let sat = |cs: &[&[i64]]| AffineSemigroup::saturated(Cone::from_generators(&lvs(cs), 2).unwrap()).unwrap();
    let z2 = AffineSemigroup::saturated(Cone::full(2)).unwrap();
    ensure(classify(&z2).unwrap().case == Case::Torus { rank: 2 }, || "Z^2".into())?;
    match classify(&sat(&[&[1, 0], &[0, 1], &[0, -1]])).unwrap().case {
        Case::SplitsOffAffineLine { split_vector, split_ray, .. } => {
            ensure(split_vector == lv(&[1, 0]) && split_ray == lv(&[1, 0]), || format!("{split_vector} {split_ray}"))?
        }
        other => return Err(format!("half plane: {other:?}")),
    }
    let quadrant = fixtures::load("quadrant");
    ensure(matches!(classify(&quadrant).unwrap().case, Case::SplitsOffAffineLine { .. }), || "quadrant".into())?;
    let s1 = fixtures::load("s1");
    let c = classify(&s1).unwrap();
    ensure(c.case == Case::General { is_degenerate: false, unit_rank: 0 } && !c.smooth, || format!("{c:?}"))?;
    let f = emit_sl_family(&s1, 0, 2).map_err(|e| e.to_string())?;
    ensure(f.members.len() == 2, || "two members".into())?;
    for m in &f.members {
        ensure(!m.semigroup.is_saturated() && m.semigroup.cone() == s1.cone(), || format!("member l={}", m.l))?;
    }
    verify_family(&f)?;
    ensure(matches!(emit_sl_family(&quadrant, 0, 2), Err(ClassifyError::Hypothesis(_))), || "quadrant accepted".into())
}

fn criterion_9() -> Check {
    let runs: Vec<Vec<String>> = vec![
        vec!["analyze", "@fig4"],
        vec!["roots", "@fig3", "--box=-3..8,-3..8"],
        vec!["figure", "@fig4", "--box=-1..7,-2..8", "--render", "svg"],
        vec!["figure", "@s1prime", "--box=-1..7,-1..7"],
        vec!["verify", "prop36", "--seed", "7", "--instances", "40"],
        vec!["verify", "subset-lemma", "--seed", "7", "--instances", "20"],
        vec!["classify", "@s1", "--emit-sl", "2"],
        vec!["explore", "@fig3"],
    ]
    .into_iter()
    .map(|a| std::iter::once("toric-roots").chain(a).map(String::from).collect())
    .collect();
    let digest = || -> Result<Vec<Vec<u8>>, String> {
        runs.iter()
            .map(|args| {
                let out = execute(args.clone());
                ensure(out.code == EXIT_OK, || format!("{args:?} exited {}", out.code))?;
                Ok(Sha256::digest(out.stdout.as_bytes()).to_vec())
            })
            .collect()
    };
    let first = digest()?;
    let second = digest()?;
    ensure(first == second, || "outputs differ between runs".into())?;
    let distinct: BTreeSet<&Vec<u8>> = first.iter().collect();
    ensure(distinct.len() == first.len(), || "distinct commands gave identical bytes".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 9] = [
        ("non-normal pair: equal roots, different saturations", LIMIT_1, criterion_1),
        ("hole set keeps every root of its saturation", LIMIT_2, criterion_2),
        ("roots of S are roots of the saturation (200 random)", LIMIT_3, criterion_3),
        ("facet shifts of roots, nonempty root slices", LIMIT_4, criterion_4),
        ("root inclusion both ways iff equal cones (100 pairs)", LIMIT_5, criterion_5),
        ("Hilbert basis equals brute-force irreducibles (50 cones)", LIMIT_6, criterion_6),
        ("derivation identities and negative control", LIMIT_7, criterion_7),
        ("classifier trichotomy and S_l family", LIMIT_8, criterion_8),
        ("byte-identical repeated output", LIMIT_9, criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let verdict = match (&result, took <= *limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (took {took:.2?}, limit {limit:?})"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {}: {verdict} - {name} [{took:.2?}]", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
