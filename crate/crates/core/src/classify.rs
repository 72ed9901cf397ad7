//! Torus / `A^1 × Z` / general trichotomy for saturated semigroups, the
//! `S_l` family, and a bounded search for hole sets keeping all roots.
//!
//! Split test. On the pointed part `P`, look for a Hilbert basis element
//! `h` and a dual ray `ρ` with `<h, ρ> = 1` and `<h, ρ'> = 0` for the other
//! rays. If found, `x ↦ (<x, ρ>, x - <x, ρ>·h)` identifies `P` with
//! `N × (ρ^⊥ ∩ P)`: the second part pairs to zero with `ρ` and to
//! `<x, ρ'> >= 0` with the others. Conversely a product `N × P'` has
//! `h = e_1` and `ρ = e_1^*` with this pattern.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cone::{Cone, ConeError, IntBox, LinealitySplit};
use crate::hilbert::hilbert_basis;
use crate::lattice::{kernel_basis, LatticeError, LatticeVector, Sublattice};
use crate::roots::{root_set, root_subset, RootError, SubsetVerdict};
use crate::semigroup::{AffineSemigroup, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("classification needs a saturated semigroup")]
    NotSaturated,
    #[error("the family needs a non-degenerate semigroup without an affine-line factor; got the {} case", .0.case.name())]
    Hypothesis(Box<Classification>),
    #[error("the explorer needs a pointed semigroup of rank at most 3")]
    ExplorerInput,
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case {
    Torus { rank: usize },
    SplitsOffAffineLine { split_vector: LatticeVector, split_ray: LatticeVector, complement: AffineSemigroup },
    General { is_degenerate: bool, unit_rank: usize },
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::Torus { .. } => "torus",
            Case::SplitsOffAffineLine { .. } => "splits_off_affine_line",
            Case::General { .. } => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub case: Case,
    pub unit_rank: usize,
    /// Size of the Hilbert basis of the pointed part.
    pub hilbert_basis_size: usize,
    /// The pointed part is generated by a lattice basis.
    pub smooth: bool,
}

pub fn classify(s: &AffineSemigroup) -> Result<Classification, ClassifyError> {
    if !s.is_saturated() {
        return Err(ClassifyError::NotSaturated);
    }
    let cone = s.cone();
    let n = cone.dim();
    let u = cone.lineality().len();
    if u == n {
        return Ok(Classification { case: Case::Torus { rank: n }, unit_rank: u, hilbert_basis_size: 0, smooth: true });
    }
    let split = LinealitySplit::new(cone)?;
    let pointed = &split.pointed;
    let hb = hilbert_basis(pointed)?;
    let smooth = hb.len() == n - u;
    let rays = pointed.facets();
    let units = (u > 0).then(|| Sublattice::spanned_by(cone.lineality(), n)).transpose()?;
    for h in &hb {
        for rho in rays {
            let pattern = rays.iter().all(|r| {
                let p = h.dot(r);
                if r == rho {
                    p.is_one()
                } else {
                    p.is_zero()
                }
            });
            if !pattern {
                continue;
            }
            debug_assert!(hb.iter().all(|b| pointed.contains(&(b - &h.scale(&b.dot(rho))))));
            let lifted = split.lift_pointed(h);
            let split_vector = units.as_ref().map_or(lifted.clone(), |l| l.reduce(&lifted));
            let split_ray = split.lift_functional(rho);
            let complement = face_semigroup(cone, &split_ray)?;
            return Ok(Classification {
                case: Case::SplitsOffAffineLine { split_vector, split_ray, complement },
                unit_rank: u,
                hilbert_basis_size: hb.len(),
                smooth,
            });
        }
    }
    Ok(Classification {
        case: Case::General { is_degenerate: u > 0, unit_rank: u },
        unit_rank: u,
        hilbert_basis_size: hb.len(),
        smooth,
    })
}

/// `ρ^⊥ ∩ S` as a saturated semigroup in coordinates of the lattice `ρ^⊥ ∩ Z^n`.
fn face_semigroup(cone: &Cone, rho: &LatticeVector) -> Result<AffineSemigroup, ClassifyError> {
    let n = cone.dim();
    let basis = kernel_basis(std::slice::from_ref(rho), n);
    let sub = Sublattice::spanned_by(&basis, n)?;
    let face = cone.face(rho)?;
    let local: Vec<LatticeVector> = face.generators().iter().map(|g| sub.coordinates(g).expect("face lies in ρ^⊥")).collect();
    let c = Cone::from_generators(&local, n - 1)?;
    Ok(AffineSemigroup::saturated(c)?)
}

#[derive(Debug, Clone)]
pub struct SlMember {
    pub l: usize,
    pub semigroup: AffineSemigroup,
    /// `S_l` itself, before the unit block is prepended.
    pub core: AffineSemigroup,
    /// A point of the saturation missing from this member.
    pub witness: LatticeVector,
}

#[derive(Debug, Clone)]
pub struct SlFamily {
    pub base: AffineSemigroup,
    pub k: usize,
    pub members: Vec<SlMember>,
}

/// Prepend `k` unit coordinates.
fn pad_vector(v: &LatticeVector, k: usize) -> LatticeVector {
    LatticeVector::zero(k).concat(v)
}

fn unit_block(k: usize, n: usize) -> Vec<LatticeVector> {
    (0..k).flat_map(|i| [LatticeVector::unit(n, i), -&LatticeVector::unit(n, i)]).collect()
}

/// `{Z^k × S_l}` for `l = 1..=big_l`, refusing degenerate or split input.
pub fn emit_sl_family(s: &AffineSemigroup, k: usize, big_l: usize) -> Result<SlFamily, ClassifyError> {
    let c = classify(s)?;
    if !matches!(c.case, Case::General { is_degenerate: false, .. }) {
        return Err(ClassifyError::Hypothesis(Box::new(c)));
    }
    let sat = AffineSemigroup::saturated(s.cone().clone())?;
    let n = s.dim() + k;
    let base = if k == 0 {
        sat.clone()
    } else {
        let mut gens = unit_block(k, n);
        gens.extend(sat.saturation_hilbert_basis().iter().map(|h| pad_vector(h, k)));
        AffineSemigroup::saturated(Cone::from_generators(&gens, n)?)?
    };
    let mut members = Vec::new();
    for l in 1..=big_l {
        let sl = sat.sl_subsemigroup(l)?;
        let witness = sat
            .saturation_hilbert_basis()
            .iter()
            .find(|h| !sl.member(h))
            .map(|h| pad_vector(h, k))
            .expect("the Hilbert basis is removed for l >= 1");
        let semigroup = if k == 0 {
            sl.clone()
        } else {
            let mut gens = unit_block(k, n);
            gens.extend(sl.irreducibles(None)?.elements.iter().map(|h| pad_vector(h, k)));
            AffineSemigroup::generated(gens)?
        };
        members.push(SlMember { l, semigroup, core: sl, witness });
    }
    Ok(SlFamily { base, k, members })
}

/// Re-check every member: closure on all pairs up to twice the largest
/// hole grading, same cone, a missing witness, agreement of the padded
/// semigroup with `Z^k × S_l`, and pairwise distinct hole sets.
pub fn verify_family(f: &SlFamily) -> Result<(), String> {
    for m in &f.members {
        let (s, core) = (&m.semigroup, &m.core);
        if s.cone() != f.base.cone() {
            return Err(format!("member l={} has a different saturation", m.l));
        }
        if s.member(&m.witness) || !f.base.member(&m.witness) {
            return Err(format!("member l={} has a bad witness {}", m.l, m.witness));
        }
        let u = core.grading();
        let top = core.finite_holes().iter().map(|h| h.dot(u)).max().unwrap_or_default();
        let pts = core.points_up_to(&(&top * 2 + 1)).map_err(|e| e.to_string())?;
        for a in &pts {
            for b in &pts {
                if !core.member(&(a + b)) {
                    return Err(format!("member l={} is not closed: {a} + {b}", m.l));
                }
            }
        }
        let mut probes: Vec<LatticeVector> = pts.clone();
        probes.extend(core.finite_holes().iter().cloned());
        for p in &probes {
            for t in IntBox::cube(f.k, 1).points() {
                if s.member(&t.concat(p)) != core.member(p) {
                    return Err(format!("member l={} disagrees with its core at {p}", m.l));
                }
            }
        }
    }
    for (i, a) in f.members.iter().enumerate() {
        for b in &f.members[i + 1..] {
            let (ha, hb) = (a.core.finite_holes(), b.core.finite_holes());
            let witness = ha.iter().find(|h| !hb.contains(h)).or_else(|| hb.iter().find(|h| !ha.contains(h)));
            match witness {
                Some(w) if a.core.member(w) != b.core.member(w) => {}
                _ => return Err(format!("members l={} and l={} coincide", a.l, b.l)),
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreBudget {
    /// Largest grading of a candidate hole.
    pub max_grading: BigInt,
    pub max_nodes: usize,
    pub max_results: usize,
}

impl Default for ExploreBudget {
    fn default() -> Self {
        ExploreBudget { max_grading: BigInt::from(12), max_nodes: 200_000, max_results: 256 }
    }
}

#[derive(Debug, Clone)]
pub struct ExploreResult {
    /// Hole sets found, the empty set first, in lexicographic order.
    pub hole_sets: Vec<Vec<LatticeVector>>,
    pub semigroups: Vec<AffineSemigroup>,
    /// The search visited every node of the restricted candidate space.
    pub exhausted: bool,
    pub nodes: usize,
}

impl ExploreResult {
    pub const LABEL: &'static str = "found within budget";
}

struct Search<'a> {
    sat: &'a AffineSemigroup,
    candidates: Vec<LatticeVector>,
    index: BTreeMap<LatticeVector, usize>,
    /// For each candidate, the points forced into the hole set with it.
    forced: Vec<Option<Vec<usize>>>,
    budget: &'a ExploreBudget,
    nodes: usize,
    found: Vec<Vec<usize>>,
    cut: bool,
}

/// Finite hole sets `H` of grading at most the budget such that `S ∖ H`
/// is a semigroup with the same roots as `S`.
///
/// Candidates are decided in increasing grading. Including a hole `h`
/// forces every `h - α ∈ S` for roots `α` of `S` into the hole set
/// (otherwise `α` stops being a root), and a hole is kept only if every
/// splitting `h = a + b` already contains a hole.
pub fn explore_same_roots(s: &AffineSemigroup, budget: &ExploreBudget) -> Result<ExploreResult, ClassifyError> {
    if !s.is_pointed() || s.dim() > 3 || !s.is_saturated() {
        return Err(ClassifyError::ExplorerInput);
    }
    let sat = AffineSemigroup::saturated(s.cone().clone())?;
    let u = sat.grading().clone();
    let mut candidates: Vec<LatticeVector> =
        sat.points_up_to(&budget.max_grading)?.into_iter().filter(|p| !p.is_zero()).collect();
    candidates.sort_by(|a, b| a.dot(&u).cmp(&b.dot(&u)).then_with(|| a.cmp(b)));
    let index: BTreeMap<LatticeVector, usize> = candidates.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut search = Search { sat: &sat, candidates, index, forced: Vec::new(), budget, nodes: 0, found: Vec::new(), cut: false };
    search.forced = (0..search.candidates.len()).map(|i| search.root_closure(i)).collect();
    let mut holes = BTreeSet::new();
    let mut excluded = BTreeSet::new();
    search.descend(0, &mut holes, &mut excluded);

    let mut hole_sets: Vec<Vec<LatticeVector>> = search
        .found
        .iter()
        .map(|h| {
            let mut v: Vec<LatticeVector> = h.iter().map(|&i| search.candidates[i].clone()).collect();
            v.sort();
            v
        })
        .collect();
    hole_sets.sort();
    hole_sets.dedup();
    let reference = root_set(&sat)?;
    let window = IntBox::cube(sat.dim(), 8);
    let mut semigroups = Vec::new();
    let mut kept = Vec::new();
    for h in hole_sets {
        let t = AffineSemigroup::hole_patched(sat.cone().clone(), h.clone(), vec![])?;
        let rs = root_set(&t)?;
        let both = root_subset(&rs, &reference, &window)? == SubsetVerdict::ProvenSubset
            && root_subset(&reference, &rs, &window)? == SubsetVerdict::ProvenSubset;
        if both {
            semigroups.push(t);
            kept.push(h);
        }
    }
    Ok(ExploreResult { hole_sets: kept, semigroups, exhausted: !search.cut, nodes: search.nodes })
}

impl Search<'_> {
    /// Indices forced along with candidate `i`, or `None` if that closure
    /// leaves the budget or reaches 0.
    fn root_closure(&self, i: usize) -> Option<Vec<usize>> {
        let mut w = LatticeVector::zero(self.sat.dim());
        for f in self.sat.cone().facets() {
            w = &w + f;
        }
        let rays = self.sat.dual_rays();
        let mut seen = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            let h = &self.candidates[j];
            let bound = h.dot(&w) + 1;
            for m in self.sat.cone().points_with_grading_at_most(&w, &bound).ok()? {
                let alpha = h - &m;
                let is_root = rays.iter().any(|rho| {
                    alpha.dot(rho) == -BigInt::one()
                        && rays.iter().all(|r| r == rho || !alpha.dot(r).is_negative())
                });
                if !is_root {
                    continue;
                }
                if m.is_zero() {
                    return None;
                }
                let k = *self.index.get(&m)?;
                if seen.insert(k) {
                    stack.push(k);
                }
            }
        }
        Some(seen.into_iter().collect())
    }

    /// Every splitting of candidate `i` into two nonzero points meets the hole set.
    fn splittings_hit(&self, i: usize, holes: &BTreeSet<usize>) -> bool {
        let h = &self.candidates[i];
        let g = h.dot(self.sat.grading());
        for (j, a) in self.candidates.iter().enumerate() {
            if a.dot(self.sat.grading()) >= g {
                break;
            }
            let b = h - a;
            if !self.sat.cone().contains(&b) || b.is_zero() {
                continue;
            }
            let bi = self.index.get(&b).copied();
            if !holes.contains(&j) && !bi.is_some_and(|k| holes.contains(&k)) {
                return false;
            }
        }
        true
    }

    fn descend(&mut self, i: usize, holes: &mut BTreeSet<usize>, excluded: &mut BTreeSet<usize>) {
        if self.cut {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes || self.found.len() >= self.budget.max_results {
            self.cut = true;
            return;
        }
        if i == self.candidates.len() {
            self.found.push(holes.iter().copied().collect());
            return;
        }
        if holes.contains(&i) {
            if self.splittings_hit(i, holes) {
                self.descend(i + 1, holes, excluded);
            }
            return;
        }
        // leave the point in S
        excluded.insert(i);
        self.descend(i + 1, holes, excluded);
        excluded.remove(&i);
        // remove it, with everything its roots force
        let Some(forced) = self.forced[i].clone() else { return };
        if forced.iter().any(|k| excluded.contains(k)) {
            return;
        }
        let added: Vec<usize> = forced.iter().copied().filter(|k| holes.insert(*k)).collect();
        if self.splittings_hit(i, holes) {
            self.descend(i + 1, holes, excluded);
        }
        for k in added {
            holes.remove(&k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntMatrix;
    use proptest::prelude::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn lvs(cs: &[&[i64]]) -> Vec<LatticeVector> {
        cs.iter().map(|c| lv(c)).collect()
    }

    fn sat(cs: &[&[i64]]) -> AffineSemigroup {
        AffineSemigroup::saturated(Cone::from_generators(&lvs(cs), cs[0].len()).unwrap()).unwrap()
    }

    #[test]
    fn trichotomy() {
        let z2 = AffineSemigroup::saturated(Cone::full(2)).unwrap();
        assert_eq!(classify(&z2).unwrap().case, Case::Torus { rank: 2 });
        let half = sat(&[&[1, 0], &[0, 1], &[0, -1]]);
        match classify(&half).unwrap().case {
            Case::SplitsOffAffineLine { split_vector, split_ray, complement } => {
                assert_eq!(split_vector, lv(&[1, 0]));
                assert_eq!(split_ray, lv(&[1, 0]));
                assert_eq!(classify(&complement).unwrap().case, Case::Torus { rank: 1 });
            }
            other => panic!("{other:?}"),
        }
        let quadrant = AffineSemigroup::saturated(Cone::orthant(2)).unwrap();
        assert!(matches!(classify(&quadrant).unwrap().case, Case::SplitsOffAffineLine { .. }));
        let s1 = sat(&[&[1, 0], &[1, 2]]);
        let c = classify(&s1).unwrap();
        assert_eq!(c.case, Case::General { is_degenerate: false, unit_rank: 0 });
        assert!(!c.smooth);
        let g = AffineSemigroup::generated(lvs(&[&[1, 0], &[1, 2]])).unwrap();
        assert_eq!(classify(&g), Err(ClassifyError::NotSaturated));
        let line = AffineSemigroup::saturated(Cone::orthant(1)).unwrap();
        assert!(matches!(classify(&line).unwrap().case, Case::SplitsOffAffineLine { .. }));
    }

    fn kind(c: &Classification) -> (u8, usize, usize, bool) {
        let k = match c.case {
            Case::Torus { .. } => 0,
            Case::SplitsOffAffineLine { .. } => 1,
            Case::General { is_degenerate: false, .. } => 2,
            Case::General { is_degenerate: true, .. } => 3,
        };
        (k, c.unit_rank, c.hilbert_basis_size, c.smooth)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn unimodular_invariance(
            gs in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..5),
            ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
        ) {
            let gs: Vec<LatticeVector> = gs.iter().map(|g| lv(g)).collect();
            let c = Cone::from_generators(&gs, 3).unwrap();
            prop_assume!(c.is_full_dimensional());
            let mut m = IntMatrix::identity(3);
            for (i, j, t) in ops {
                if i != j {
                    let rows: Vec<LatticeVector> = (0..3)
                        .map(|r| if r == i { &m.row(i) + &m.row(j).scale(&BigInt::from(t)) } else { m.row(r) })
                        .collect();
                    m = IntMatrix::from_vectors(&rows, 3).unwrap();
                }
            }
            let moved: Vec<LatticeVector> = gs.iter().map(|g| m.left_mul(g)).collect();
            let a = classify(&AffineSemigroup::saturated(c).unwrap()).unwrap();
            let b = classify(&AffineSemigroup::saturated(Cone::from_generators(&moved, 3).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(kind(&a), kind(&b));
        }
    }

    #[test]
    fn degenerate_general_case() {
        // Z × cone((1,0),(1,2))
        let s = sat(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 1, 2]]);
        let c = classify(&s).unwrap();
        assert_eq!(c.case, Case::General { is_degenerate: true, unit_rank: 1 });
        assert!(matches!(emit_sl_family(&s, 0, 1), Err(ClassifyError::Hypothesis(_))));
    }

    #[test]
    fn sl_family() {
        let s1 = sat(&[&[1, 0], &[1, 2]]);
        let f = emit_sl_family(&s1, 0, 2).unwrap();
        assert_eq!(f.members.len(), 2);
        assert_eq!(f.members[0].semigroup.finite_holes(), lvs(&[&[1, 0], &[1, 1], &[1, 2]]).as_slice());
        for m in &f.members {
            assert!(!m.semigroup.is_saturated());
            assert_eq!(m.semigroup.cone(), s1.cone());
        }
        verify_family(&f).unwrap();
        let padded = emit_sl_family(&s1, 1, 2).unwrap();
        assert_eq!(padded.base.dim(), 3);
        verify_family(&padded).unwrap();
        let quadrant = AffineSemigroup::saturated(Cone::orthant(2)).unwrap();
        assert!(matches!(emit_sl_family(&quadrant, 0, 2), Err(ClassifyError::Hypothesis(_))));
        let line = AffineSemigroup::saturated(Cone::orthant(1)).unwrap();
        assert!(matches!(emit_sl_family(&line, 3, 2), Err(ClassifyError::Hypothesis(_))));
    }

    #[test]
    fn explorer_finds_figure_four() {
        let t = sat(&[&[1, 0], &[3, 4]]);
        let r = explore_same_roots(&t, &ExploreBudget::default()).unwrap();
        let fig4 = lvs(&[&[1, 0], &[1, 1], &[3, 2], &[3, 3], &[3, 4], &[5, 6]]);
        assert!(r.hole_sets.contains(&fig4), "{:?}", r.hole_sets);
        assert_eq!(r.hole_sets[0], Vec::<LatticeVector>::new());
    }

    #[test]
    fn explorer_trivial_cases() {
        let q = AffineSemigroup::saturated(Cone::orthant(2)).unwrap();
        let r = explore_same_roots(&q, &ExploreBudget::default()).unwrap();
        assert_eq!(r.hole_sets, vec![Vec::<LatticeVector>::new()]);
        let t = sat(&[&[1, 0], &[3, 4]]);
        let zero = ExploreBudget { max_grading: BigInt::zero(), ..ExploreBudget::default() };
        let r = explore_same_roots(&t, &zero).unwrap();
        assert_eq!(r.hole_sets, vec![Vec::<LatticeVector>::new()]);
        assert!(r.exhausted);
    }
}
