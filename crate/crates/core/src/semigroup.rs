//! Affine semigroups in `Z^d` given by generators, by a cone, or by a cone
//! with holes removed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cone::{parallelepiped_points, Cone, ConeError, IntBox, LinealitySplit};
use crate::hilbert::hilbert_basis;
use crate::lattice::{minimal_embedding, Embedding, IntMatrix, LatticeError, LatticeVector, Sublattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("expected a point of dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no generators given")]
    NoGenerators,
    #[error("the cone is not full-dimensional; re-embed the generators first")]
    NotFullDimensional,
    #[error("operation needs a pointed semigroup")]
    NotPointed,
    #[error("hole {0} lies outside the cone")]
    HoleOutsideCone(LatticeVector),
    #[error("0 cannot be a hole")]
    ZeroHole,
    #[error("holes need a pointed cone")]
    HolesInNonPointedCone,
    #[error("an arithmetic family needs a nonzero step")]
    ZeroStep,
    #[error("family step {0} leaves the cone")]
    StepOutsideCone(LatticeVector),
    #[error("not closed under addition: {a} + {b} = {hole} is a hole")]
    NotClosed { hole: LatticeVector, a: LatticeVector, b: LatticeVector },
    #[error("{0} is not a dual ray")]
    NotADualRay(LatticeVector),
    #[error("every multiple of the ray {0} is a hole, so the result is not finitely generated")]
    RayRemoved(LatticeVector),
    #[error("the Hilbert basis is only known up to a grading bound")]
    IncompleteHilbertBasis,
}

/// `{base + k·step : k >= 0}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct APFamily {
    pub base: LatticeVector,
    pub step: LatticeVector,
}

impl APFamily {
    pub fn new(base: LatticeVector, step: LatticeVector) -> Result<Self, SemigroupError> {
        if base.dim() != step.dim() {
            return Err(SemigroupError::DimensionMismatch { expected: base.dim(), found: step.dim() });
        }
        if step.is_zero() {
            return Err(SemigroupError::ZeroStep);
        }
        Ok(APFamily { base, step })
    }

    pub fn member(&self, k: &BigInt) -> LatticeVector {
        &self.base + &self.step.scale(k)
    }

    /// `k` with `x = base + k·step`, if any.
    pub fn index_of(&self, x: &LatticeVector) -> Option<BigInt> {
        let k = multiple_of(&self.step, &(x - &self.base))?;
        (!k.is_negative()).then_some(k)
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.index_of(x).is_some()
    }
}

/// `t` with `x = t·v`, if `x` is an integer multiple of `v != 0`.
pub(crate) fn multiple_of(v: &LatticeVector, x: &LatticeVector) -> Option<BigInt> {
    let j = (0..v.dim()).find(|&j| !v[j].is_zero())?;
    let (t, r) = x[j].div_rem(&v[j]);
    if !r.is_zero() {
        return None;
    }
    (v.scale(&t) == *x).then_some(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Representation {
    Generated { gens: Vec<LatticeVector> },
    Saturated { cone: Cone },
    HolePatched { cone: Cone, finite_holes: Vec<LatticeVector>, hole_families: Vec<APFamily> },
}

/// How closure of a hole-patched semigroup was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureCertificate {
    /// `true` when every splitting of every hole was checked.
    pub exact: bool,
    /// Grading up to which family holes off the cone's rays were checked.
    pub bound: Option<BigInt>,
}

/// Irreducible elements, with a flag telling whether the list is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasis {
    pub elements: Vec<LatticeVector>,
    pub complete: bool,
    /// Grading bound of the search when `complete` is false.
    pub grading_bound: Option<BigInt>,
}

/// Unit group `S ∩ -S` and, when available, the pointed quotient.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub basis: Vec<LatticeVector>,
    pub split: Option<LinealitySplit>,
    pub pointed_part: Option<AffineSemigroup>,
}

impl UnitGroup {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Hole structure of a generated semigroup relative to its saturation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HoleStructure {
    Finite(Vec<LatticeVector>),
    /// Some class `q + N·r` of the saturation avoids the semigroup entirely.
    Infinite { witness: LatticeVector, direction: LatticeVector },
}

#[derive(Debug, Default)]
struct Caches {
    membership: Mutex<HashMap<LatticeVector, bool>>,
    saturation_hb: OnceLock<Vec<LatticeVector>>,
    irreducibles: OnceLock<HilbertBasis>,
}

/// An affine semigroup in ambient coordinates `Z^dim`, with full-dimensional cone.
#[derive(Debug, Clone)]
pub struct AffineSemigroup {
    dim: usize,
    repr: Representation,
    cone: Cone,
    grading: LatticeVector,
    units: Option<Sublattice>,
    closure: Option<ClosureCertificate>,
    caches: Arc<Caches>,
}

impl PartialEq for AffineSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
    }
}

impl Eq for AffineSemigroup {}

fn grading_of(cone: &Cone) -> LatticeVector {
    let mut s = LatticeVector::zero(cone.dim());
    for f in cone.facets() {
        s = &s + f;
    }
    s.primitive().unwrap_or(s)
}

fn check_dims(vs: &[LatticeVector], dim: usize) -> Result<(), SemigroupError> {
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(SemigroupError::DimensionMismatch { expected: dim, found: v.dim() }),
        None => Ok(()),
    }
}

fn lcm_all<'a>(xs: impl Iterator<Item = &'a BigInt>) -> BigInt {
    xs.fold(BigInt::one(), |l, x| l.lcm(x))
}

impl AffineSemigroup {
    fn build(dim: usize, repr: Representation, cone: Cone) -> Self {
        let grading = grading_of(&cone);
        AffineSemigroup { dim, repr, cone, grading, units: None, closure: None, caches: Arc::default() }
    }

    /// Monoid generated by `gens` in ambient `Z^d`; the cone must be full-dimensional.
    pub fn generated(gens: Vec<LatticeVector>) -> Result<Self, SemigroupError> {
        let dim = gens.first().ok_or(SemigroupError::NoGenerators)?.dim();
        check_dims(&gens, dim)?;
        let set: BTreeSet<LatticeVector> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let gens: Vec<LatticeVector> = set.into_iter().collect();
        let cone = Cone::from_generators(&gens, dim)?;
        if !cone.is_full_dimensional() {
            return Err(SemigroupError::NotFullDimensional);
        }
        let mut s = AffineSemigroup::build(dim, Representation::Generated { gens: gens.clone() }, cone);
        let unit_gens: Vec<LatticeVector> = gens.iter().filter(|g| g.dot(&s.grading).is_zero()).cloned().collect();
        if !unit_gens.is_empty() {
            s.units = Some(Sublattice::spanned_by(&unit_gens, dim)?);
        }
        Ok(s)
    }

    /// Re-embed `gens` into the group they generate, then build the generated semigroup there.
    pub fn generated_minimal(gens: &[LatticeVector]) -> Result<(Self, Embedding), SemigroupError> {
        if gens.is_empty() {
            return Err(SemigroupError::NoGenerators);
        }
        let emb = minimal_embedding(gens)?;
        let s = AffineSemigroup::generated(emb.gens.clone())?;
        Ok((s, emb))
    }

    /// `cone ∩ Z^d`.
    pub fn saturated(cone: Cone) -> Result<Self, SemigroupError> {
        if !cone.is_full_dimensional() {
            return Err(SemigroupError::NotFullDimensional);
        }
        let dim = cone.dim();
        Ok(AffineSemigroup::build(dim, Representation::Saturated { cone: cone.clone() }, cone))
    }

    /// `(cone ∩ Z^d)` minus the given holes; closure under addition is validated.
    pub fn hole_patched(
        cone: Cone,
        finite_holes: Vec<LatticeVector>,
        hole_families: Vec<APFamily>,
    ) -> Result<Self, SemigroupError> {
        if !cone.is_full_dimensional() {
            return Err(SemigroupError::NotFullDimensional);
        }
        let dim = cone.dim();
        check_dims(&finite_holes, dim)?;
        for f in &hole_families {
            check_dims(&[f.base.clone(), f.step.clone()], dim)?;
        }
        let finite: BTreeSet<LatticeVector> = finite_holes.into_iter().collect();
        let mut families: Vec<APFamily> = hole_families.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        families.retain(|f| !f.step.is_zero() || !finite.contains(&f.base));
        if (!finite.is_empty() || !families.is_empty()) && !cone.is_pointed() {
            return Err(SemigroupError::HolesInNonPointedCone);
        }
        for h in finite.iter().chain(families.iter().map(|f| &f.base)) {
            if h.is_zero() {
                return Err(SemigroupError::ZeroHole);
            }
            if !cone.contains(h) {
                return Err(SemigroupError::HoleOutsideCone(h.clone()));
            }
        }
        for f in &families {
            if f.step.is_zero() {
                return Err(SemigroupError::ZeroStep);
            }
            if !cone.contains(&f.step) {
                return Err(SemigroupError::StepOutsideCone(f.step.clone()));
            }
        }
        let repr = Representation::HolePatched {
            cone: cone.clone(),
            finite_holes: finite.into_iter().collect(),
            hole_families: families,
        };
        let mut s = AffineSemigroup::build(dim, repr, cone);
        s.closure = Some(s.validate_closure()?);
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank of the ambient lattice.
    pub fn rank(&self) -> usize {
        self.dim
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// Primitive sum of the facet normals: positive off the lineality space.
    pub fn grading(&self) -> &LatticeVector {
        &self.grading
    }

    pub fn closure_certificate(&self) -> Option<&ClosureCertificate> {
        self.closure.as_ref()
    }

    pub fn is_pointed(&self) -> bool {
        self.cone.is_pointed()
    }

    /// Whether the semigroup generates all of `Z^d` as a group.
    pub fn is_minimally_embedded(&self) -> bool {
        match &self.repr {
            Representation::Generated { gens } => {
                let sub = Sublattice::spanned_by(gens, self.dim).expect("dims");
                sub.rank() == self.dim && sub.index().is_some_and(|i| i.is_one())
            }
            // a full-dimensional saturated cone contains a lattice basis; holes
            // never remove all of one since x and x + e generate the same group
            _ => true,
        }
    }

    pub fn finite_holes(&self) -> &[LatticeVector] {
        match &self.repr {
            Representation::HolePatched { finite_holes, .. } => finite_holes,
            _ => &[],
        }
    }

    pub fn hole_families(&self) -> &[APFamily] {
        match &self.repr {
            Representation::HolePatched { hole_families, .. } => hole_families,
            _ => &[],
        }
    }

    fn check_point(&self, m: &LatticeVector) -> Result<(), SemigroupError> {
        if m.dim() != self.dim {
            return Err(SemigroupError::DimensionMismatch { expected: self.dim, found: m.dim() });
        }
        Ok(())
    }

    pub fn contains(&self, m: &LatticeVector) -> Result<bool, SemigroupError> {
        self.check_point(m)?;
        Ok(self.member(m))
    }

    /// Membership for a point of the right dimension.
    pub fn member(&self, m: &LatticeVector) -> bool {
        match &self.repr {
            Representation::Saturated { cone } => cone.contains(m),
            Representation::HolePatched { .. } => self.cone.contains(m) && !self.is_hole_listed(m),
            Representation::Generated { gens } => self.generated_member(gens, m),
        }
    }

    /// Whether `m` is one of the listed holes (hole-patched form only).
    fn is_hole_listed(&self, m: &LatticeVector) -> bool {
        match &self.repr {
            Representation::HolePatched { finite_holes, hole_families, .. } => {
                finite_holes.binary_search(m).is_ok() || hole_families.iter().any(|f| f.contains(m))
            }
            _ => false,
        }
    }

    fn generated_member(&self, gens: &[LatticeVector], m: &LatticeVector) -> bool {
        if !self.cone.contains(m) {
            return false;
        }
        let g = m.dot(&self.grading);
        if g.is_zero() {
            return m.is_zero() || self.units.as_ref().is_some_and(|u| u.contains(m));
        }
        if let Some(&b) = self.caches.membership.lock().expect("membership cache").get(m) {
            return b;
        }
        let found = gens.iter().any(|h| {
            let w = h.dot(&self.grading);
            w.is_positive() && w <= g && self.generated_member(gens, &(m - h))
        });
        self.caches.membership.lock().expect("membership cache").insert(m.clone(), found);
        found
    }

    /// Saturated semigroup of the same cone, with its Hilbert basis.
    pub fn saturation(&self) -> (AffineSemigroup, HilbertBasis) {
        let sat = AffineSemigroup::saturated(self.cone.clone()).expect("full-dimensional");
        let hb = HilbertBasis { elements: self.saturation_hilbert_basis().to_vec(), complete: true, grading_bound: None };
        (sat, hb)
    }

    pub fn saturation_hilbert_basis(&self) -> &[LatticeVector] {
        self.caches.saturation_hb.get_or_init(|| hilbert_basis(&self.cone).expect("cone is valid"))
    }

    pub fn is_saturated(&self) -> bool {
        match &self.repr {
            Representation::Saturated { .. } => true,
            Representation::HolePatched { finite_holes, hole_families, .. } => {
                finite_holes.is_empty() && hole_families.is_empty()
            }
            Representation::Generated { .. } => self.saturation_hilbert_basis().iter().all(|h| self.member(h)),
        }
    }

    /// Facet normals of the cone: the rays of the dual semigroup.
    pub fn dual_rays(&self) -> Vec<LatticeVector> {
        self.cone.facets().to_vec()
    }

    /// Generators of the face `ρ^⊥ ∩ S`.
    pub fn facet(&self, rho: &LatticeVector) -> Result<Vec<LatticeVector>, SemigroupError> {
        if !self.cone.facets().contains(rho) {
            return Err(SemigroupError::NotADualRay(rho.clone()));
        }
        match &self.repr {
            Representation::Saturated { .. } => Ok(hilbert_basis(&self.cone.face(rho)?)?),
            Representation::Generated { gens } => {
                let face: Vec<LatticeVector> = gens.iter().filter(|g| g.dot(rho).is_zero()).cloned().collect();
                Ok(self.irreducible_among(&face))
            }
            Representation::HolePatched { .. } => {
                Ok(self.irreducibles(None)?.elements.into_iter().filter(|h| h.dot(rho).is_zero()).collect())
            }
        }
    }

    pub fn holes_within(&self, bx: &IntBox) -> Vec<LatticeVector> {
        bx.points().filter(|p| self.cone.contains(p) && !self.member(p)).collect()
    }

    /// Whether `x` lies in the saturation but not in `S`.
    pub fn is_hole(&self, x: &LatticeVector) -> bool {
        self.cone.contains(x) && !self.member(x)
    }

    /// Members of S with grading at most `bound`, sorted (pointed only).
    pub fn points_up_to(&self, bound: &BigInt) -> Result<Vec<LatticeVector>, SemigroupError> {
        if !self.is_pointed() {
            return Err(SemigroupError::NotPointed);
        }
        Ok(self.cone.points_with_grading_at_most(&self.grading, bound)?.into_iter().filter(|p| self.member(p)).collect())
    }

    fn max_grading(&self, vs: &[LatticeVector]) -> BigInt {
        vs.iter().map(|v| v.dot(&self.grading)).max().unwrap_or_else(BigInt::zero)
    }

    /// Generators that are not a generator plus a nonzero element (modulo units).
    fn irreducible_among(&self, gens: &[LatticeVector]) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = gens
            .iter()
            .filter(|g| g.dot(&self.grading).is_positive())
            .filter(|g| {
                !gens.iter().any(|h| {
                    let r = *g - h;
                    h.dot(&self.grading).is_positive() && r.dot(&self.grading).is_positive() && self.member(&r)
                })
            })
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Irreducible elements of a pointed semigroup.
    ///
    /// Complete except for hole-patched semigroups with arithmetic families,
    /// which are searched up to grading `bound` (default: twice the largest
    /// hole-base grading plus the largest saturation basis grading).
    pub fn irreducibles(&self, bound: Option<&BigInt>) -> Result<HilbertBasis, SemigroupError> {
        if !self.is_pointed() {
            return Err(SemigroupError::NotPointed);
        }
        if bound.is_none() {
            if let Some(hb) = self.caches.irreducibles.get() {
                return Ok(hb.clone());
            }
        }
        let hb = match &self.repr {
            Representation::Saturated { .. } => {
                HilbertBasis { elements: self.saturation_hilbert_basis().to_vec(), complete: true, grading_bound: None }
            }
            Representation::Generated { gens } => {
                HilbertBasis { elements: self.irreducible_among(gens), complete: true, grading_bound: None }
            }
            Representation::HolePatched { finite_holes, hole_families, .. } => {
                let gb = self.max_grading(self.saturation_hilbert_basis());
                let mut heights: Vec<LatticeVector> = finite_holes.clone();
                for f in hole_families {
                    heights.push(&f.base + &f.step);
                }
                let default = self.max_grading(&heights) * 2 + &gb;
                let complete = hole_families.is_empty();
                let b = match bound {
                    Some(b) if !complete => b.clone().max(gb.clone()),
                    _ => default,
                };
                let mut pts = self.points_up_to(&b)?;
                pts.retain(|p| !p.is_zero());
                pts.sort_by(|a, c| a.dot(&self.grading).cmp(&c.dot(&self.grading)).then_with(|| a.cmp(c)));
                let mut irr: Vec<LatticeVector> = Vec::new();
                for x in &pts {
                    if !irr.iter().any(|y| {
                        let r = x - y;
                        r.dot(&self.grading).is_positive() && self.member(&r)
                    }) {
                        irr.push(x.clone());
                    }
                }
                irr.sort();
                HilbertBasis { elements: irr, complete, grading_bound: (!complete).then_some(b) }
            }
        };
        if bound.is_none() {
            let _ = self.caches.irreducibles.set(hb.clone());
        }
        Ok(hb)
    }

    fn complete_irreducibles(&self) -> Result<Vec<LatticeVector>, SemigroupError> {
        let hb = self.irreducibles(None)?;
        if !hb.complete {
            return Err(SemigroupError::IncompleteHilbertBasis);
        }
        Ok(hb.elements)
    }

    /// Maximal Hilbert-decomposition length of each member with grading at most `bound`.
    fn decomposition_lengths(&self, bound: &BigInt) -> Result<BTreeMap<LatticeVector, usize>, SemigroupError> {
        let hb = self.complete_irreducibles()?;
        let mut pts = self.points_up_to(bound)?;
        pts.sort_by(|a, c| a.dot(&self.grading).cmp(&c.dot(&self.grading)).then_with(|| a.cmp(c)));
        let mut f: BTreeMap<LatticeVector, usize> = BTreeMap::new();
        for x in pts {
            if x.is_zero() {
                f.insert(x, 0);
                continue;
            }
            let best = hb.iter().filter_map(|h| f.get(&(&x - h)).map(|v| v + 1)).max();
            // every nonzero member has some decomposition; the lower grading
            // piece is always already in the table
            f.insert(x, best.expect("members decompose over the Hilbert basis"));
        }
        Ok(f)
    }

    /// `(H_l, Ĥ_l)`: members of maximal decomposition length exactly `l`, and
    /// of length between 1 and `l`.
    pub fn decomposables(&self, l: usize) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>), SemigroupError> {
        let hb = self.complete_irreducibles()?;
        let bound = self.max_grading(&hb) * BigInt::from(l);
        let f = self.decomposition_lengths(&bound)?;
        let exact: Vec<LatticeVector> = f.iter().filter(|(_, &v)| v == l).map(|(k, _)| k.clone()).collect();
        let upto: Vec<LatticeVector> = f.iter().filter(|(_, &v)| v >= 1 && v <= l).map(|(k, _)| k.clone()).collect();
        Ok((exact, upto))
    }

    /// `S_l = S ∖ Ĥ_l`.
    pub fn sl_subsemigroup(&self, l: usize) -> Result<AffineSemigroup, SemigroupError> {
        if l == 0 {
            return Ok(self.clone());
        }
        if !self.is_pointed() {
            return Err(SemigroupError::NotPointed);
        }
        match &self.repr {
            Representation::Generated { .. } => {
                // elements of length > l are generated by those of length l+1 ..= 2l+1
                let hb = self.complete_irreducibles()?;
                let bound = self.max_grading(&hb) * BigInt::from(2 * l + 1);
                let f = self.decomposition_lengths(&bound)?;
                let gens: Vec<LatticeVector> =
                    f.into_iter().filter(|(_, v)| *v > l && *v <= 2 * l + 1).map(|(k, _)| k).collect();
                AffineSemigroup::generated(gens)
            }
            Representation::Saturated { cone } | Representation::HolePatched { cone, .. } => {
                let (_, hat) = self.decomposables(l)?;
                let mut holes: Vec<LatticeVector> = self.finite_holes().to_vec();
                holes.extend(hat);
                AffineSemigroup::hole_patched(cone.clone(), holes, self.hole_families().to_vec())
            }
        }
    }

    pub fn unit_group(&self) -> UnitGroup {
        match &self.repr {
            Representation::Generated { gens } => {
                let basis = self.units.as_ref().map(|u| u.basis()).unwrap_or_default();
                let lin = Sublattice::spanned_by(self.cone.lineality(), self.dim).expect("dims");
                let saturated_units = basis.len() == lin.rank()
                    && self.units.as_ref().is_none_or(|u| u.index() == lin.index());
                let (split, pointed_part) = if saturated_units {
                    let split = LinealitySplit::new(&self.cone).expect("valid cone");
                    let projected: Vec<LatticeVector> = gens
                        .iter()
                        .map(|g| split.project(g))
                        .filter(|g| !g.is_zero())
                        .collect();
                    let part = if projected.is_empty() {
                        AffineSemigroup::saturated(split.pointed.clone()).ok()
                    } else {
                        AffineSemigroup::generated(projected).ok()
                    };
                    (Some(split), part)
                } else {
                    (None, None)
                };
                UnitGroup { basis, split, pointed_part }
            }
            _ => {
                let split = LinealitySplit::new(&self.cone).expect("valid cone");
                let part = AffineSemigroup::saturated(split.pointed.clone()).ok();
                UnitGroup { basis: self.cone.lineality().to_vec(), split: Some(split), pointed_part: part }
            }
        }
    }

    fn validate_closure(&self) -> Result<ClosureCertificate, SemigroupError> {
        let finite = self.finite_holes();
        let families = self.hole_families();
        if finite.is_empty() && families.is_empty() {
            return Ok(ClosureCertificate { exact: true, bound: None });
        }
        // families lying on a ray of the cone are decided on that ray
        let mut on_ray: BTreeMap<LatticeVector, Vec<&APFamily>> = BTreeMap::new();
        let mut off_ray: Vec<&APFamily> = Vec::new();
        for f in families {
            match self.cone.rays().iter().find(|r| multiple_of(r, &f.base).is_some() && multiple_of(r, &f.step).is_some()) {
                Some(r) => on_ray.entry(r.clone()).or_default().push(f),
                None => off_ray.push(f),
            }
        }
        for (r, fams) in &on_ray {
            self.validate_ray(r, fams)?;
        }
        let gb = self.max_grading(self.saturation_hilbert_basis());
        let mut bound = None;
        let mut to_check: Vec<LatticeVector> = finite.to_vec();
        if !off_ray.is_empty() {
            let heights: Vec<LatticeVector> = off_ray.iter().map(|f| &f.base + &f.step).chain(finite.iter().cloned()).collect();
            let b = self.max_grading(&heights) * 2 + &gb;
            for f in &off_ray {
                let w = f.step.dot(&self.grading);
                let mut k = BigInt::zero();
                loop {
                    let h = f.member(&k);
                    if h.dot(&self.grading) > b {
                        break;
                    }
                    to_check.push(h);
                    k += 1;
                    if w.is_zero() {
                        break;
                    }
                }
            }
            bound = Some(b);
        }
        let top = self.max_grading(&to_check);
        let pts = self.cone.points_with_grading_at_most(&self.grading, &top)?;
        for h in &to_check {
            let gh = h.dot(&self.grading);
            for a in &pts {
                let ga = a.dot(&self.grading);
                if a.is_zero() || ga >= gh {
                    continue;
                }
                let b = h - a;
                if self.cone.contains(&b) && !self.is_hole_listed(a) && !self.is_hole_listed(&b) {
                    return Err(SemigroupError::NotClosed { hole: h.clone(), a: a.clone(), b });
                }
            }
        }
        Ok(ClosureCertificate { exact: off_ray.is_empty(), bound })
    }

    /// Exact check on the ray `N·r`: the non-hole multiples are closed under addition.
    fn validate_ray(&self, r: &LatticeVector, fams: &[&APFamily]) -> Result<(), SemigroupError> {
        let mut points: BTreeSet<BigInt> = BTreeSet::new();
        let mut aps: Vec<(BigInt, BigInt)> = Vec::new();
        for h in self.finite_holes() {
            if let Some(t) = multiple_of(r, h) {
                points.insert(t);
            }
        }
        for f in fams {
            let b = multiple_of(r, &f.base).expect("on ray");
            let s = multiple_of(r, &f.step).expect("on ray");
            aps.push((b, s));
        }
        let is_hole = |t: &BigInt| {
            points.contains(t) || aps.iter().any(|(b, s)| t >= b && (t - b).is_multiple_of(s))
        };
        let k = points.iter().chain(aps.iter().map(|(b, _)| b)).max().cloned().unwrap_or_else(BigInt::zero) + 1;
        let p = lcm_all(aps.iter().map(|(_, s)| s));
        let top = &k + &p * 2;
        let mut members = Vec::new();
        let mut t = BigInt::one();
        while t <= top {
            if !is_hole(&t) {
                members.push(t.clone());
            }
            t += 1;
        }
        if members.is_empty() {
            return Err(SemigroupError::RayRemoved(r.clone()));
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i..] {
                let c = a + b;
                if is_hole(&c) {
                    return Err(SemigroupError::NotClosed { hole: r.scale(&c), a: r.scale(a), b: r.scale(b) });
                }
            }
        }
        Ok(())
    }

    /// Decide whether a generated pointed semigroup misses only finitely
    /// many points of its saturation, listing them when it does.
    pub fn hole_structure(&self) -> Result<HoleStructure, SemigroupError> {
        let Representation::Generated { gens } = &self.repr else {
            let holes = self.finite_holes().to_vec();
            return match self.hole_families().first() {
                None => Ok(HoleStructure::Finite(holes)),
                Some(f) => Ok(HoleStructure::Infinite { witness: f.base.clone(), direction: f.step.clone() }),
            };
        };
        if !self.is_pointed() {
            return Err(SemigroupError::NotPointed);
        }
        let d = self.dim;
        // smallest multiple of each ray inside S
        let mut scaled: BTreeMap<LatticeVector, LatticeVector> = BTreeMap::new();
        for r in self.cone.rays() {
            let mut t = BigInt::one();
            loop {
                let v = r.scale(&t);
                if self.member(&v) {
                    scaled.insert(r.clone(), v);
                    break;
                }
                t += 1;
            }
        }
        let mut localized: BTreeMap<LatticeVector, AffineSemigroup> = BTreeMap::new();
        let mut holes: BTreeSet<LatticeVector> = BTreeSet::new();
        for simplex in self.cone.triangulate()? {
            let sr: Vec<LatticeVector> = simplex.iter().map(|r| scaled[r].clone()).collect();
            for q in parallelepiped_points(&sr)? {
                let mut limits = Vec::with_capacity(d);
                for v in &sr {
                    let loc = match localized.get(v) {
                        Some(l) => l,
                        None => {
                            let mut g = gens.clone();
                            g.push(-v);
                            localized.insert(v.clone(), AffineSemigroup::generated(g)?);
                            &localized[v]
                        }
                    };
                    if !loc.member(&q) {
                        return Ok(HoleStructure::Infinite { witness: q, direction: v.clone() });
                    }
                    let mut t = BigInt::zero();
                    let mut x = q.clone();
                    while !self.member(&x) {
                        t += 1;
                        x = &x + v;
                    }
                    limits.push(t);
                }
                if limits.iter().all(|t| t.is_zero()) {
                    continue;
                }
                let hi: Vec<BigInt> = limits.iter().map(|t| (t - BigInt::one()).max(BigInt::zero())).collect();
                let bx = IntBox::new(LatticeVector::zero(d), LatticeVector::new(hi)).expect("nonnegative");
                let m = IntMatrix::from_vectors(&sr, d)?;
                for n in bx.points() {
                    if n.coords().iter().zip(&limits).any(|(ni, t)| ni >= t) {
                        continue;
                    }
                    let x = &q + &m.left_mul(&n);
                    if !self.member(&x) {
                        holes.insert(x);
                    }
                }
            }
        }
        Ok(HoleStructure::Finite(holes.into_iter().collect()))
    }

    /// Equivalent hole-patched form of a generated semigroup with finitely many holes.
    pub fn to_hole_patched(&self) -> Result<Option<AffineSemigroup>, SemigroupError> {
        match &self.repr {
            Representation::Generated { .. } => match self.hole_structure()? {
                HoleStructure::Finite(holes) => Ok(Some(AffineSemigroup::hole_patched(self.cone.clone(), holes, vec![])?)),
                HoleStructure::Infinite { .. } => Ok(None),
            },
            Representation::HolePatched { .. } => Ok(Some(self.clone())),
            Representation::Saturated { cone } => Ok(Some(AffineSemigroup::hole_patched(cone.clone(), vec![], vec![])?)),
        }
    }
}
