//! Demazure roots of affine semigroups.
//!
//! An element `α` is a root with distinguished ray `ρ` (a primitive facet
//! normal) when `<α, ρ> = -1` and `m + α ∈ S` for every `m ∈ S` with
//! `<m, ρ> > 0`. All decisions here are exact:
//!
//! * saturated: the other facet normals pair nonnegatively with `α`;
//! * generated: the second condition only needs checking on generators,
//!   since any `m` with `<m, ρ> > 0` is a generator of that kind plus an
//!   element of `S`;
//! * hole-patched: a violation is a hole `h` with `h - α ∈ S`, which for
//!   arithmetic families is one-dimensional periodic arithmetic in the
//!   family index.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cone::{Cone, ConeError, IntBox, SlicePolyhedron, SliceSearch};
use crate::lattice::{kernel_basis, LatticeError, LatticeVector};
use crate::semigroup::{multiple_of, APFamily, AffineSemigroup, HoleStructure, Representation, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("root sets live in lattices of different rank ({0} vs {1})")]
    IncomparableLattices(usize, usize),
    #[error("the root set is empty, so no facet normal can be recovered")]
    EmptyRootSet,
}

/// `m ∈ S` with `<m, ρ> > 0` but `m + α ∉ S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub ray: LatticeVector,
    pub m: LatticeVector,
    pub sum: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootWitness {
    pub alpha: LatticeVector,
    /// The first qualifying ray.
    pub ray: LatticeVector,
    /// Every ray for which both conditions hold.
    pub qualifying_rays: Vec<LatticeVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootRejection {
    pub alpha: LatticeVector,
    /// Dual rays pairing to -1 with `α`.
    pub candidate_rays: Vec<LatticeVector>,
    /// At least one violation per candidate ray, when one could be exhibited.
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootCheck {
    Accepted(RootWitness),
    Rejected(RootRejection),
}

impl RootCheck {
    pub fn is_accepted(&self) -> bool {
        matches!(self, RootCheck::Accepted(_))
    }

    pub fn witness(&self) -> Option<&RootWitness> {
        match self {
            RootCheck::Accepted(w) => Some(w),
            RootCheck::Rejected(_) => None,
        }
    }
}

/// Saturated criterion: exactly one dual ray pairs to -1, the others to at least 0.
pub fn is_root_saturated(s: &AffineSemigroup, alpha: &LatticeVector) -> Option<RootWitness> {
    let rays = s.dual_rays();
    let minus: Vec<&LatticeVector> = rays.iter().filter(|r| alpha.dot(r) == -BigInt::one()).collect();
    if minus.len() != 1 {
        return None;
    }
    let rho = minus[0];
    rays.iter()
        .all(|r| r == rho || !alpha.dot(r).is_negative())
        .then(|| RootWitness { alpha: alpha.clone(), ray: rho.clone(), qualifying_rays: vec![rho.clone()] })
}

/// Decide whether `α` is a Demazure root of `S`.
pub fn is_root(s: &AffineSemigroup, alpha: &LatticeVector) -> Result<RootCheck, RootError> {
    if alpha.dim() != s.dim() {
        return Err(SemigroupError::DimensionMismatch { expected: s.dim(), found: alpha.dim() }.into());
    }
    let rays = s.dual_rays();
    let candidates: Vec<LatticeVector> = rays.iter().filter(|r| alpha.dot(r) == -BigInt::one()).cloned().collect();
    let mut qualifying = Vec::new();
    let mut violations = Vec::new();
    for rho in &candidates {
        if let Some(other) = rays.iter().find(|r| *r != rho && alpha.dot(r).is_negative()) {
            violations.extend(facet_violation(s, alpha, rho, other));
            continue;
        }
        let found = match s.representation() {
            Representation::Saturated { .. } => None,
            Representation::Generated { gens } => gens
                .iter()
                .filter(|g| g.dot(rho).is_positive())
                .map(|g| (g, g + alpha))
                .find(|(_, x)| !s.member(x))
                .map(|(g, x)| Violation { ray: rho.clone(), m: g.clone(), sum: x }),
            Representation::HolePatched { finite_holes, hole_families, .. } => finite_holes
                .iter()
                .find_map(|h| {
                    let m = h - alpha;
                    s.member(&m).then(|| Violation { ray: rho.clone(), m, sum: h.clone() })
                })
                .or_else(|| {
                    hole_families.iter().find_map(|f| {
                        family_violation(s, f, alpha).map(|k| {
                            let h = f.member(&k);
                            Violation { ray: rho.clone(), m: &h - alpha, sum: h }
                        })
                    })
                }),
        };
        match found {
            Some(v) => violations.push(v),
            None => qualifying.push(rho.clone()),
        }
    }
    if qualifying.is_empty() {
        return Ok(RootCheck::Rejected(RootRejection { alpha: alpha.clone(), candidate_rays: candidates, violations }));
    }
    Ok(RootCheck::Accepted(RootWitness { alpha: alpha.clone(), ray: qualifying[0].clone(), qualifying_rays: qualifying }))
}

/// `<α, ρ> = -1` but `<α, ρ'> < 0`: a multiple of a ray of the facet `ρ'`
/// off the hyperplane `ρ^⊥` is sent outside the cone.
fn facet_violation(s: &AffineSemigroup, alpha: &LatticeVector, rho: &LatticeVector, other: &LatticeVector) -> Option<Violation> {
    let r = s.cone().rays().iter().find(|r| r.dot(other).is_zero() && r.dot(rho).is_positive())?;
    let mut t = BigInt::one();
    // a multiple of every ray lies in S
    loop {
        let m = r.scale(&t);
        if s.member(&m) {
            return Some(Violation { ray: rho.clone(), sum: &m + alpha, m });
        }
        t += 1;
    }
}

/// Pieces of `{k >= 0 : c + k·s is a hole}`.
#[derive(Default)]
struct KSet {
    points: BTreeSet<BigInt>,
    /// `{start + j·period : j >= 0}`
    progressions: Vec<(BigInt, BigInt)>,
}

impl KSet {
    fn contains(&self, k: &BigInt) -> bool {
        self.points.contains(k) || self.progressions.iter().any(|(a, p)| k >= a && (k - a).is_multiple_of(p))
    }
}

/// Smallest `k` such that `h_k - α` lies in `S`, where `h_k` runs over the family.
fn family_violation(s: &AffineSemigroup, f: &APFamily, alpha: &LatticeVector) -> Option<BigInt> {
    let c = &f.base - alpha;
    let step = &f.step;
    // c + k·step in the cone: each facet gives a lower bound since step is in the cone
    let mut lo = BigInt::zero();
    for n in s.cone().facets() {
        let a = step.dot(n);
        let b = c.dot(n);
        if a.is_zero() {
            if b.is_negative() {
                return None;
            }
        } else {
            lo = lo.max(crate::lattice::div_ceil(&(-b), &a));
        }
    }
    let mut ks = KSet::default();
    for h in s.finite_holes() {
        if let Some(k) = multiple_of(step, &(h - &c)) {
            if !k.is_negative() {
                ks.points.insert(k);
            }
        }
    }
    let dir = step.primitive().expect("nonzero step");
    let p = multiple_of(&dir, step).expect("multiple of its primitive");
    for g in s.hole_families() {
        match multiple_of(&dir, &g.step) {
            Some(q) => {
                // parallel: g.base + j·q·dir = c + k·p·dir with j >= 0
                let Some(t) = multiple_of(&dir, &(&g.base - &c)) else { continue };
                if let Some((start, period)) = parallel_solutions(&p, &q, &t) {
                    ks.progressions.push((start, period));
                }
            }
            None => {
                if let Some(k) = crossing(&c, step, &g.base, &g.step) {
                    ks.points.insert(k);
                }
            }
        }
    }
    let period = ks.progressions.iter().fold(BigInt::one(), |l, (_, p)| l.lcm(p));
    let settle = ks
        .points
        .iter()
        .map(|k| k + 1)
        .chain(ks.progressions.iter().map(|(a, _)| a.clone()))
        .fold(lo.clone(), |m, x| m.max(x));
    let top = settle + period;
    let mut k = lo;
    while k <= top {
        if !ks.contains(&k) {
            debug_assert!(s.member(&(&c + &step.scale(&k))));
            return Some(k);
        }
        k += 1;
    }
    None
}

/// `k >= 0` with `k·p - j·q = t` for some `j >= 0`, as a progression; `p, q > 0`.
fn parallel_solutions(p: &BigInt, q: &BigInt, t: &BigInt) -> Option<(BigInt, BigInt)> {
    let g = p.gcd(q);
    if !t.is_multiple_of(&g) {
        return None;
    }
    let (p1, q1, t1) = (p / &g, q / &g, t / &g);
    // k ≡ t1 · p1^{-1} (mod q1)
    let e = p1.extended_gcd(&q1);
    let k0 = (&t1 * &e.x).mod_floor(&q1);
    // j >= 0 means k·p >= t
    let least = crate::lattice::div_ceil(t, p).max(BigInt::zero());
    let shift = (&least - &k0).div_floor(&q1);
    let mut start = &k0 + &shift * &q1;
    if start < least {
        start += &q1;
    }
    Some((start, q1))
}

/// The unique `k >= 0` with `c + k·s = b + j·t` for some `j >= 0`, when `s` and `t` are independent.
fn crossing(c: &LatticeVector, s: &LatticeVector, b: &LatticeVector, t: &LatticeVector) -> Option<BigInt> {
    let d = c.dim();
    let rhs = b - c;
    for i in 0..d {
        for i2 in i + 1..d {
            // k·s - j·t = rhs on coordinates i, i2
            let det = &s[i] * (-&t[i2]) - (-&t[i]) * &s[i2];
            if det.is_zero() {
                continue;
            }
            let kn = &rhs[i] * (-&t[i2]) - (-&t[i]) * &rhs[i2];
            let jn = &s[i] * &rhs[i2] - &rhs[i] * &s[i2];
            if !kn.is_multiple_of(&det) || !jn.is_multiple_of(&det) {
                return None;
            }
            let (k, j) = (kn / &det, jn / &det);
            if k.is_negative() || j.is_negative() {
                return None;
            }
            return (&s.scale(&k) - &t.scale(&j) == rhs).then_some(k);
        }
    }
    None
}

/// Exceptions removed from the saturated slice of one ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exceptions {
    None,
    /// Exactly these slice points are not roots.
    Finite(Vec<LatticeVector>),
    /// No slice point is a root.
    All,
    /// Possibly infinite; membership is decided pointwise by [`is_root`].
    Symbolic,
}

#[derive(Debug, Clone)]
pub struct RaySlice {
    pub ray: LatticeVector,
    /// Roots of the saturation with this distinguished ray.
    pub slice: SlicePolyhedron,
    pub exceptions: Exceptions,
}

#[derive(Debug, Clone)]
pub struct RootSet {
    source: AffineSemigroup,
    pub per_ray: Vec<RaySlice>,
    /// Box within which an enumeration was carried out, when the description is not symbolic-exact.
    pub certified_box: Option<IntBox>,
}

impl RootSet {
    pub fn source(&self) -> &AffineSemigroup {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn contains(&self, alpha: &LatticeVector) -> bool {
        is_root(&self.source, alpha).map(|c| c.is_accepted()).unwrap_or(false)
    }

    /// Whether every exception set is explicit.
    pub fn is_explicit(&self) -> bool {
        self.per_ray.iter().all(|r| !matches!(r.exceptions, Exceptions::Symbolic))
    }

    pub fn slice_for(&self, ray: &LatticeVector) -> Option<&RaySlice> {
        self.per_ray.iter().find(|r| &r.ray == ray)
    }

    pub fn in_box(&self, bx: &IntBox) -> Vec<RootWitness> {
        roots_in_box(&self.source, bx).unwrap_or_default()
    }
}

fn slice_of(s: &AffineSemigroup, rho: &LatticeVector) -> SlicePolyhedron {
    let others = s.dual_rays().into_iter().filter(|r| r != rho).collect();
    SlicePolyhedron::new(rho.clone(), -BigInt::one(), others)
}

/// Slice points `α` with `h - α ∈ S` for some finite hole `h`.
fn finite_exceptions(s: &AffineSemigroup, holes: &[LatticeVector], slice: &SlicePolyhedron) -> Result<Vec<LatticeVector>, RootError> {
    let mut w = LatticeVector::zero(s.dim());
    for f in s.cone().facets() {
        w = &w + f;
    }
    let mut out = BTreeSet::new();
    for h in holes {
        // m = h - α pairs to <h,ρ>+1 with ρ and at most <h,ρ'> with the others
        let bound = h.dot(&w) + 1;
        for m in s.cone().points_with_grading_at_most(&w, &bound)? {
            let alpha = h - &m;
            if slice.contains(&alpha) && s.member(&m) {
                out.insert(alpha);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The cone ray carrying a family whose base and step both lie on it.
fn family_ray(s: &AffineSemigroup, f: &APFamily) -> Option<LatticeVector> {
    let r = f.step.primitive().ok()?;
    (s.cone().rays().contains(&r) && multiple_of(&r, &f.base).is_some()).then_some(r)
}

/// Exceptions on the slice of `ρ` for holes `finite` plus families on the
/// rays `family_rays`. A family on `r` meets the slice only through `α`
/// with `<α, ρ''> = 0` for every facet `ρ''` through `r`: when `<r, ρ> > 0`
/// that forces `α = -r`; when `<r, ρ> = 0` in rank 2 every slice point is
/// hit by the cofinitely many non-holes `(c + kp)·r - α`.
fn slice_exceptions(
    s: &AffineSemigroup,
    rho: &LatticeVector,
    slice: &SlicePolyhedron,
    finite: &[LatticeVector],
    family_rays: &[LatticeVector],
) -> Result<Exceptions, RootError> {
    if family_rays.iter().any(|r| r.dot(rho).is_zero()) {
        return Ok(if s.dim() == 2 { Exceptions::All } else { Exceptions::Symbolic });
    }
    if finite.is_empty() && family_rays.is_empty() {
        return Ok(Exceptions::None);
    }
    let mut out: BTreeSet<LatticeVector> = finite_exceptions(s, finite, slice)?.into_iter().collect();
    for r in family_rays {
        let alpha = -r;
        if slice.contains(&alpha) && !is_root(s, &alpha)?.is_accepted() {
            out.insert(alpha);
        }
    }
    Ok(Exceptions::Finite(out.into_iter().collect()))
}

pub fn root_set(s: &AffineSemigroup) -> Result<RootSet, RootError> {
    let holes: Option<(Vec<LatticeVector>, Vec<LatticeVector>)> = match s.representation() {
        Representation::Saturated { .. } => Some((Vec::new(), Vec::new())),
        Representation::HolePatched { finite_holes, hole_families, .. } => {
            let rays: Option<Vec<LatticeVector>> = hole_families.iter().map(|f| family_ray(s, f)).collect();
            rays.map(|r| (finite_holes.clone(), r))
        }
        Representation::Generated { .. } => match s.is_pointed().then(|| s.hole_structure()).transpose()? {
            Some(HoleStructure::Finite(h)) => Some((h, Vec::new())),
            _ => None,
        },
    };
    let mut per_ray = Vec::new();
    for rho in s.dual_rays() {
        let slice = slice_of(s, &rho);
        let exceptions = match &holes {
            Some((h, r)) => slice_exceptions(s, &rho, &slice, h, r)?,
            None => Exceptions::Symbolic,
        };
        per_ray.push(RaySlice { ray: rho, slice, exceptions });
    }
    Ok(RootSet { source: s.clone(), per_ray, certified_box: None })
}

/// Every root in the box, sorted by `α`.
pub fn roots_in_box(s: &AffineSemigroup, bx: &IntBox) -> Result<Vec<RootWitness>, RootError> {
    let mut candidates = BTreeSet::new();
    for rho in s.dual_rays() {
        candidates.extend(slice_of(s, &rho).lattice_points(bx));
    }
    let mut out = Vec::new();
    for alpha in candidates {
        if let RootCheck::Accepted(w) = is_root(s, &alpha)? {
            out.push(w);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetVerdict {
    ProvenSubset,
    ProvenNotSubset { alpha: LatticeVector },
    /// No counterexample inside the region, and no proof beyond it.
    CertifiedWithinBox { region: IntBox },
}

/// Compare `A ⊆ B` as root sets. Counterexamples are searched in `search`.
pub fn root_subset(a: &RootSet, b: &RootSet, search: &IntBox) -> Result<SubsetVerdict, RootError> {
    if a.dim() != b.dim() {
        return Err(RootError::IncomparableLattices(a.dim(), b.dim()));
    }
    if proves_subset(a, b) {
        return Ok(SubsetVerdict::ProvenSubset);
    }
    let mut best: Option<LatticeVector> = None;
    for rs in &a.per_ray {
        for alpha in rs.slice.lattice_points(search) {
            if best.as_ref().is_some_and(|x| &alpha >= x) {
                break;
            }
            if a.contains(&alpha) && !b.contains(&alpha) {
                best = Some(alpha);
                break;
            }
        }
    }
    Ok(match best {
        Some(alpha) => SubsetVerdict::ProvenNotSubset { alpha },
        None => SubsetVerdict::CertifiedWithinBox { region: search.clone() },
    })
}

fn proves_subset(a: &RootSet, b: &RootSet) -> bool {
    a.per_ray.iter().all(|ra| {
        if ra.exceptions == Exceptions::All || ra.slice.find_point(2) == SliceSearch::Empty {
            return true;
        }
        let Some(rb) = b.slice_for(&ra.ray) else { return false };
        if !rb.slice.inequality_normals.iter().all(|n| ra.slice.lattice_implies(n)) {
            return false;
        }
        match &rb.exceptions {
            Exceptions::None => true,
            Exceptions::Finite(e) => e.iter().all(|x| !ra.slice.contains(x) || !a.contains(x)),
            Exceptions::All | Exceptions::Symbolic => false,
        }
    })
}

/// Facet normals recovered from the affine hulls of root slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub cone: Cone,
    pub normals: Vec<LatticeVector>,
    /// Rays whose slice yielded too few roots to span a hyperplane.
    pub rays_without_roots: Vec<LatticeVector>,
}

/// Recover the facet normals of the saturation: for each ray key, roots are
/// collected in growing boxes until their differences span a hyperplane,
/// whose primitive normal `p` gives `ρ = -<α, p>·p`.
pub fn reconstruct_saturation_from_roots(r: &RootSet) -> Result<Reconstruction, RootError> {
    let d = r.dim();
    let mut normals = Vec::new();
    let mut missing = Vec::new();
    for rs in &r.per_ray {
        let mut found = None;
        let mut radius = 2i64;
        while radius <= 32 && found.is_none() {
            let roots: Vec<LatticeVector> =
                rs.slice.lattice_points(&IntBox::cube(d, radius)).into_iter().filter(|a| r.contains(a)).collect();
            if let Some(first) = roots.first() {
                let diffs: Vec<LatticeVector> = roots[1..].iter().map(|x| x - first).collect();
                let ker = kernel_basis(&diffs, d);
                if ker.len() == 1 {
                    let p = ker[0].primitive()?;
                    let c = first.dot(&p);
                    found = Some(if c.is_positive() { -&p } else { p });
                }
            }
            radius *= 2;
        }
        match found {
            Some(n) => normals.push(n),
            None => missing.push(rs.ray.clone()),
        }
    }
    if normals.is_empty() {
        return Err(RootError::EmptyRootSet);
    }
    normals.sort();
    let cone = Cone::from_inequalities(&normals, d)?;
    Ok(Reconstruction { cone, normals, rays_without_roots: missing })
}
