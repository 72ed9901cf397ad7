//! Seeded property suites over fixtures and random instances.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::{
    check_locally_nilpotent, exponentiate, generators_of, leibniz_defect, AlgebraElement, DemazureDerivation, Derivation,
    SquaredWeightMap,
};
use crate::classify::{classify, emit_sl_family, verify_family, Case, ClassifyError};
use crate::cli::fixtures;
use crate::cli::random::Generator;
use crate::cli::wire::SemigroupSpec;
use crate::cone::{Cone, IntBox, SliceSearch};
use crate::lattice::LatticeVector;
use crate::roots::{is_root, reconstruct_saturation_from_roots, root_set, root_subset, roots_in_box, SubsetVerdict};
use crate::semigroup::AffineSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Prop36,
    FamousRemark,
    SubsetLemma,
    Normalization,
    SlFamily,
    Algebra,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Prop36, Suite::FamousRemark, Suite::SubsetLemma, Suite::Normalization, Suite::SlFamily, Suite::Algebra];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop36 => "prop36",
            Suite::FamousRemark => "famous-remark",
            Suite::SubsetLemma => "subset-lemma",
            Suite::Normalization => "normalization",
            Suite::SlFamily => "sl-family",
            Suite::Algebra => "algebra",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub instances: usize,
    /// Replace the derivation by a map that breaks the Leibniz rule.
    pub corrupt_derivation: bool,
}

impl Options {
    pub fn new(seed: u64, instances: usize) -> Self {
        Options { seed, instances, corrupt_derivation: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub instance: String,
    pub message: String,
    pub spec: Option<SemigroupSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let failure = |f: &Failure| {
            json!({
                "instance": f.instance,
                "message": f.message,
                "spec": f.spec.as_ref().map(SemigroupSpec::to_value),
            })
        };
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "instances": self.instances,
            "checks": self.checks,
            "passed": self.passed(),
            "counterexample": self.failures.first().map(failure),
            "failures": self.failures.iter().map(failure).collect::<Vec<_>>(),
        })
    }
}

/// Worker count: `TORIC_ROOTS_THREADS` when set, else the available parallelism.
pub fn threads() -> usize {
    std::env::var("TORIC_ROOTS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Map in parallel, keeping input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let n = threads().min(items.len()).max(1);
    if n == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(n);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| scope.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Per-instance outcome: number of checks and failure messages.
type Outcome = (usize, Vec<String>);

fn search_box(s: &AffineSemigroup) -> IntBox {
    if s.dim() == 2 {
        IntBox::cube(2, 5)
    } else {
        IntBox::cube(s.dim(), 3)
    }
}

fn collect(suite: Suite, opts: &Options, labelled: Vec<(String, Option<&AffineSemigroup>, Outcome)>) -> Report {
    let mut checks = 0;
    let mut failures = Vec::new();
    let instances = labelled.len();
    for (label, s, (c, msgs)) in labelled {
        checks += c;
        for message in msgs {
            failures.push(Failure { instance: label.clone(), message, spec: s.map(SemigroupSpec::of) });
        }
    }
    Report { suite, seed: opts.seed, instances, checks, failures }
}

fn run_on(suite: Suite, opts: &Options, named: &[(String, AffineSemigroup)], f: impl Fn(&AffineSemigroup) -> Outcome + Sync) -> Report {
    let outcomes = par_map(named, |(_, s)| f(s));
    let labelled = named.iter().zip(outcomes).map(|((l, s), o)| (l.clone(), Some(s), o)).collect();
    collect(suite, opts, labelled)
}

fn random_instances(g: &mut Generator, n: usize, make: impl Fn(&mut Generator) -> AffineSemigroup) -> Vec<(String, AffineSemigroup)> {
    (0..n).map(|i| (format!("random#{i}"), make(g))).collect()
}

pub fn run(suite: Suite, opts: &Options) -> Report {
    match suite {
        Suite::Prop36 => prop36(opts),
        Suite::FamousRemark => famous_remark(opts),
        Suite::SubsetLemma => subset_lemma(opts),
        Suite::Normalization => normalization(opts),
        Suite::SlFamily => sl_family(opts),
        Suite::Algebra => algebra(opts),
    }
}

/// Every root of `S` found in the box is a root of the saturation with the same ray.
pub fn prop36(opts: &Options) -> Report {
    let mut g = Generator::new(opts.seed);
    let named = random_instances(&mut g, opts.instances, Generator::instance);
    run_on(Suite::Prop36, opts, &named, |s| {
        let (sat, _) = s.saturation();
        let mut out = (0, Vec::new());
        let roots = match roots_in_box(s, &search_box(s)) {
            Ok(r) => r,
            Err(e) => return (1, vec![e.to_string()]),
        };
        for w in roots {
            out.0 += 1;
            let ok = is_root(&sat, &w.alpha).ok().and_then(|c| c.witness().cloned()).is_some_and(|v| v.qualifying_rays.contains(&w.ray));
            if !ok {
                out.1.push(format!("{} is a root of S for {} but not of the saturation", w.alpha, w.ray));
            }
        }
        out
    })
}

/// (i) `α + m` stays a root for `ρ` when `m ∈ S ∩ ρ^⊥`; (ii) every ray of a
/// saturated pointed cone has a root.
pub fn famous_remark(opts: &Options) -> Report {
    let mut g = Generator::new(opts.seed);
    let mut named: Vec<(String, AffineSemigroup)> = fixtures::all().into_iter().map(|(n, s)| (n.to_string(), s)).collect();
    named.extend(random_instances(&mut g, opts.instances, Generator::instance));
    let shift = run_on(Suite::FamousRemark, opts, &named, |s| {
        let bx = search_box(s);
        let small = IntBox::cube(s.dim(), 2);
        let mut out = (0, Vec::new());
        let Ok(roots) = roots_in_box(s, &bx) else { return (1, vec!["root enumeration failed".into()]) };
        for rho in s.dual_rays() {
            let facet: Vec<LatticeVector> = small.points().filter(|m| m.dot(&rho) == BigInt::from(0) && s.member(m)).collect();
            for w in roots.iter().filter(|w| w.qualifying_rays.contains(&rho)) {
                for m in &facet {
                    out.0 += 1;
                    let shifted = &w.alpha + m;
                    let ok = is_root(s, &shifted).ok().and_then(|c| c.witness().cloned()).is_some_and(|v| v.qualifying_rays.contains(&rho));
                    if !ok {
                        out.1.push(format!("{} is a root for {} but {} + {} is not", w.alpha, rho, w.alpha, m));
                    }
                }
            }
        }
        out
    });
    let saturated = random_instances(&mut g, opts.instances, |g| {
        let r = g.rank();
        g.saturated(r)
    });
    let nonempty = run_on(Suite::FamousRemark, opts, &saturated, |s| {
        let mut out = (0, Vec::new());
        let Ok(rs) = root_set(s) else { return (1, vec!["root set failed".into()]) };
        for slice in &rs.per_ray {
            out.0 += 1;
            match slice.slice.find_point(8) {
                SliceSearch::Found(a) if is_root(s, &a).is_ok_and(|c| c.is_accepted()) => {}
                other => out.1.push(format!("no root found for ray {}: {other:?}", slice.ray)),
            }
        }
        out
    });
    merge(Suite::FamousRemark, opts, vec![shift, nonempty])
}

fn merge(suite: Suite, opts: &Options, parts: Vec<Report>) -> Report {
    let mut r = Report { suite, seed: opts.seed, instances: 0, checks: 0, failures: Vec::new() };
    for p in parts {
        r.instances += p.instances;
        r.checks += p.checks;
        r.failures.extend(p.failures);
    }
    r
}

/// Root sets of saturated semigroups nest exactly when the cones agree,
/// so unequal cones must fail the inclusion in both directions.
pub fn subset_lemma(opts: &Options) -> Report {
    let mut g = Generator::new(opts.seed);
    let mut pairs: Vec<(String, AffineSemigroup, AffineSemigroup)> = Vec::new();
    for i in 0..opts.instances {
        let rank = g.rank();
        let a = g.saturated(rank);
        let b = if g.gen_range(0, 4) == 0 {
            // the same cone, presented with a redundant generator
            let mut gens = a.cone().rays().to_vec();
            let sum = gens.iter().fold(LatticeVector::zero(rank), |acc, r| &acc + r);
            gens.push(sum);
            AffineSemigroup::saturated(Cone::from_generators(&gens, rank).expect("same cone")).expect("full-dimensional")
        } else {
            g.saturated(rank)
        };
        pairs.push((format!("pair#{i}"), a, b));
    }
    let outcomes = par_map(&pairs, |(_, a, b)| {
        let bx = IntBox::cube(a.dim(), if a.dim() == 2 { 8 } else { 4 });
        let (Ok(ra), Ok(rb)) = (root_set(a), root_set(b)) else { return (1, vec!["root set failed".to_string()]) };
        let ab = root_subset(&ra, &rb, &bx);
        let ba = root_subset(&rb, &ra, &bx);
        let proven = |v: &Result<SubsetVerdict, _>| matches!(v, Ok(SubsetVerdict::ProvenSubset));
        let equal = a.cone() == b.cone();
        // one inclusion already forces equality
        let consistent = if equal { proven(&ab) && proven(&ba) } else { !proven(&ab) && !proven(&ba) };
        if consistent {
            (2, vec![])
        } else {
            (2, vec![format!("cones equal: {equal}, verdicts {ab:?} / {ba:?}")])
        }
    });
    let mut labelled: Vec<(String, Option<&AffineSemigroup>, Outcome)> =
        pairs.iter().zip(outcomes).map(|((l, a, _), o)| (l.clone(), Some(a), o)).collect();
    let s1 = fixtures::load("s1");
    let s2 = fixtures::load("s2");
    let directed = match (root_set(&s1), root_set(&s2)) {
        (Ok(r1), Ok(r2)) => {
            let v = root_subset(&r1, &r2, &IntBox::cube(2, 8));
            let expected = SubsetVerdict::ProvenNotSubset { alpha: LatticeVector::from_i64s(&[1, 3]) };
            let back = root_subset(&r2, &r1, &IntBox::cube(2, 8));
            let mut msgs = Vec::new();
            if v.as_ref().ok() != Some(&expected) {
                msgs.push(format!("s1 ⊆ s2 should fail at (1,3), got {v:?}"));
            }
            if back.as_ref().ok() == Some(&SubsetVerdict::ProvenSubset) {
                msgs.push("s2 ⊆ s1 should not be proven".to_string());
            }
            (2, msgs)
        }
        _ => (1, vec!["root set failed".to_string()]),
    };
    labelled.push(("s1/s2".to_string(), Some(&s1), directed));
    collect(Suite::SubsetLemma, opts, labelled)
}

/// Equal nonempty root sets against a saturated semigroup force that
/// semigroup to be the saturation.
pub fn normalization(opts: &Options) -> Report {
    let mut g = Generator::new(opts.seed);
    let mut pairs: Vec<(String, AffineSemigroup, AffineSemigroup)> = Vec::new();
    for i in 0..opts.instances {
        let s = g.instance();
        let t = if g.gen_range(0, 1) == 0 { s.saturation().0 } else { g.saturated(s.dim()) };
        pairs.push((format!("random#{i}"), s, t));
    }
    pairs.push(("fig4/fig3".to_string(), fixtures::load("fig4"), fixtures::load("fig3")));
    let outcomes = par_map(&pairs, |(_, s, t)| {
        let bx = IntBox::cube(s.dim(), if s.dim() == 2 { 8 } else { 4 });
        let (Ok(rs), Ok(rt)) = (root_set(s), root_set(t)) else { return (1, vec!["root set failed".to_string()]) };
        let (Ok(a), Ok(b)) = (root_subset(&rs, &rt, &bx), root_subset(&rt, &rs, &bx)) else {
            return (1, vec!["comparison failed".to_string()]);
        };
        let mut msgs = Vec::new();
        let mut checks = 1;
        let nonempty = !roots_in_box(t, &bx).unwrap_or_default().is_empty();
        if a == SubsetVerdict::ProvenSubset && b == SubsetVerdict::ProvenSubset && nonempty && s.cone() != t.cone() {
            msgs.push("equal root sets but the saturated side is not the saturation".to_string());
        }
        if let Ok(rec) = reconstruct_saturation_from_roots(&rs) {
            if rec.rays_without_roots.is_empty() {
                checks += 1;
                if &rec.cone != s.cone() {
                    msgs.push(format!("roots reconstruct the wrong cone {:?}", rec.normals));
                }
            }
        }
        (checks, msgs)
    });
    let mut labelled: Vec<(String, Option<&AffineSemigroup>, Outcome)> =
        pairs.iter().zip(outcomes).map(|((l, s, _), o)| (l.clone(), Some(s), o)).collect();
    // both non-saturated: equal roots, different saturations
    let a = fixtures::load("s1prime");
    let b = fixtures::load("s2prime");
    let bx = IntBox::cube(2, 8);
    let same = match (root_set(&a), root_set(&b)) {
        (Ok(ra), Ok(rb)) => {
            root_subset(&ra, &rb, &bx).ok() == Some(SubsetVerdict::ProvenSubset)
                && root_subset(&rb, &ra, &bx).ok() == Some(SubsetVerdict::ProvenSubset)
        }
        _ => false,
    };
    let msgs = if same && a.cone() != b.cone() { vec![] } else { vec!["s1prime/s2prime should share roots but not saturations".to_string()] };
    labelled.push(("s1prime/s2prime".to_string(), Some(&a), (1, msgs)));
    collect(Suite::Normalization, opts, labelled)
}

/// The `S_l` family is valid on general non-degenerate input and refused otherwise.
pub fn sl_family(opts: &Options) -> Report {
    let mut g = Generator::new(opts.seed);
    let mut named = random_instances(&mut g, opts.instances, |g| g.saturated(2));
    named.push(("s1".to_string(), fixtures::load("s1").saturation().0));
    named.push(("quadrant".to_string(), fixtures::load("quadrant")));
    run_on(Suite::SlFamily, opts, &named, |s| {
        let Ok(c) = classify(s) else { return (1, vec!["classification failed".to_string()]) };
        let general = matches!(c.case, Case::General { is_degenerate: false, .. });
        let mut msgs = Vec::new();
        let mut checks = 1;
        for k in [0, 1] {
            match emit_sl_family(s, k, 2) {
                Ok(f) if general => {
                    checks += f.members.len();
                    if let Err(e) = verify_family(&f) {
                        msgs.push(e);
                    }
                }
                Err(ClassifyError::Hypothesis(_)) if !general => {}
                Ok(_) => msgs.push(format!("family emitted for {:?}", c.case)),
                Err(e) => msgs.push(format!("k={k}: {e}")),
            }
        }
        (checks, msgs)
    })
}

fn small_elements(g: &mut Generator, s: &AffineSemigroup, count: usize) -> Vec<AlgebraElement> {
    let mut pts = s.points_up_to(&BigInt::from(4)).unwrap_or_default();
    pts.retain(|p| s.member(p));
    if pts.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let terms = (0..2).map(|_| {
                let m = pts[g.gen_range(0, pts.len() as i64 - 1) as usize].clone();
                (m, BigRational::new(g.gen_range(-3, 3).into(), g.gen_range(1, 3).into()))
            });
            AlgebraElement::from_terms(terms)
        })
        .collect()
}

/// Leibniz rule, `exp(tD)` multiplicative, `exp(sD)exp(tD) = exp((s+t)D)`
/// and the nilpotency bound, on every fixture root in a small box.
pub fn algebra(opts: &Options) -> Report {
    let mut g = Generator::new(opts.seed);
    let limit = 64;
    let mut labelled = Vec::new();
    let fx = fixtures::all();
    for (name, s) in &fx {
        let mut checks = 0;
        let mut msgs = Vec::new();
        let ws = roots_in_box(s, &IntBox::cube(s.dim(), 3)).unwrap_or_default();
        let gens = generators_of(s);
        for w in ws {
            for rho in &w.qualifying_rays {
                let Ok(d) = DemazureDerivation::new(s, w.alpha.clone(), rho.clone()) else { continue };
                let corrupt = SquaredWeightMap(d.clone());
                let map: &dyn Derivation = if opts.corrupt_derivation { &corrupt } else { &d };
                let els = small_elements(&mut g, s, 2 * opts.instances.clamp(1, 8));
                for pair in els.chunks(2) {
                    let [a, b] = pair else { continue };
                    checks += 3;
                    let defect = leibniz_defect(map, a, b);
                    if !defect.is_zero() {
                        msgs.push(format!("Leibniz fails for D = ∂_{} (ray {}): a = {a}, b = {b}, defect {defect}", w.alpha, rho));
                        continue;
                    }
                    let t = BigRational::new(g.gen_range(-3, 3).into(), g.gen_range(1, 2).into());
                    let u = BigRational::new(g.gen_range(-3, 3).into(), g.gen_range(1, 2).into());
                    let ex = |x: &AlgebraElement, t: &BigRational| exponentiate(map, t, x, limit);
                    match (ex(&a.mul(b), &t), ex(a, &t), ex(b, &t)) {
                        (Ok(ab), Ok(ea), Ok(eb)) if ab == ea.mul(&eb) => {}
                        other => msgs.push(format!("exp is not multiplicative at t = {t} for a = {a}, b = {b}: {:?}", other.0.err())),
                    }
                    let lhs = ex(a, &u).and_then(|x| ex(&x, &t));
                    let rhs = ex(a, &(&t + &u));
                    if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() {
                        msgs.push(format!("exp group law fails at s = {u}, t = {t} for a = {a}"));
                    }
                }
                checks += 1;
                if let Err(e) = check_locally_nilpotent(&d, &gens, limit) {
                    msgs.push(e.to_string());
                }
            }
        }
        labelled.push((name.to_string(), Some(s), (checks, msgs)));
    }
    collect(Suite::Algebra, opts, labelled)
}
