//! Rational polyhedral cones in `Q^d` with both descriptions kept exact.
//!
//! A [`Cone`] stores its generator side (lineality basis plus primitive
//! rays) and its inequality side (primitive facet normals plus a basis of
//! implicit equations). Both sides are computed by incremental double
//! description over the integers and put in canonical form: rays are
//! projected orthogonally off the lineality space, primitivized and sorted;
//! subspaces are stored by their echelon lattice basis. Two cones are equal
//! iff their canonical data are equal, and `dual` just swaps the two sides.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    complete_basis, hermite_normal_form, kernel_basis, saturated_span, IntMatrix, LatticeError, LatticeVector,
    Sublattice,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("box bounds violate lo <= hi in coordinate {0}")]
    InvertedBox(usize),
    #[error("operation needs a pointed cone")]
    NotPointed,
    #[error("operation needs a full-dimensional cone")]
    NotFullDimensional,
    #[error("grading vector is not strictly positive on the cone")]
    BadGrading,
}

/// Rectangular window `lo <= x <= hi` of lattice points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntBox {
    lo: LatticeVector,
    hi: LatticeVector,
}

impl IntBox {
    pub fn new(lo: LatticeVector, hi: LatticeVector) -> Result<Self, ConeError> {
        if lo.dim() != hi.dim() {
            return Err(LatticeError::DimensionMismatch { expected: lo.dim(), found: hi.dim() }.into());
        }
        if let Some(i) = (0..lo.dim()).find(|&i| lo[i] > hi[i]) {
            return Err(ConeError::InvertedBox(i));
        }
        Ok(IntBox { lo, hi })
    }

    pub fn from_bounds(bounds: &[(i64, i64)]) -> Result<Self, ConeError> {
        let lo = LatticeVector::from_i64s(&bounds.iter().map(|b| b.0).collect::<Vec<_>>());
        let hi = LatticeVector::from_i64s(&bounds.iter().map(|b| b.1).collect::<Vec<_>>());
        IntBox::new(lo, hi)
    }

    /// The cube `[-r, r]^d`.
    pub fn cube(dim: usize, r: i64) -> Self {
        IntBox::from_bounds(&vec![(-r, r); dim]).expect("symmetric bounds")
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &LatticeVector {
        &self.lo
    }

    pub fn hi(&self) -> &LatticeVector {
        &self.hi
    }

    pub fn count(&self) -> BigInt {
        (0..self.dim()).map(|i| &self.hi[i] - &self.lo[i] + 1).product()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.dim() == self.dim() && (0..self.dim()).all(|i| self.lo[i] <= v[i] && v[i] <= self.hi[i])
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &IntBox) -> IntBox {
        let lo = (0..self.dim()).map(|i| self.lo[i].clone().min(other.lo[i].clone())).collect();
        let hi = (0..self.dim()).map(|i| self.hi[i].clone().max(other.hi[i].clone())).collect();
        IntBox { lo: LatticeVector::new(lo), hi: LatticeVector::new(hi) }
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints { bx: self, next: Some(self.lo.clone().into_coords()) }
    }
}

impl std::fmt::Display for IntBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}..{}", self.lo[i], self.hi[i])?;
        }
        Ok(())
    }
}

pub struct BoxPoints<'a> {
    bx: &'a IntBox,
    next: Option<Vec<BigInt>>,
}

impl Iterator for BoxPoints<'_> {
    type Item = LatticeVector;
    fn next(&mut self) -> Option<LatticeVector> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let d = succ.len();
        let mut i = d;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.bx.hi[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = self.bx.lo[i].clone();
        }
        Some(LatticeVector::new(cur))
    }
}

/// `{y : <a, y> >= 0 for all constraints a}` as (lineality basis, rays).
fn double_description(constraints: &[LatticeVector], dim: usize) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let mut lin: Vec<LatticeVector> = (0..dim).map(|i| LatticeVector::unit(dim, i)).collect();
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut processed: Vec<&LatticeVector> = Vec::new();

    for a in constraints {
        if a.is_zero() {
            continue;
        }
        if let Some(p) = lin.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l0 = lin.remove(p);
            let mut s0 = a.dot(&l0);
            if s0.is_negative() {
                l0 = -&l0;
                s0 = -s0;
            }
            let project = |v: LatticeVector| {
                let s = a.dot(&v);
                if s.is_zero() {
                    v
                } else {
                    (&v.scale(&s0) - &l0.scale(&s)).primitive().expect("independent of pivot")
                }
            };
            lin = lin.into_iter().map(project).collect();
            rays = rays.into_iter().map(project).collect();
            rays.push(l0.primitive().expect("nonzero"));
        } else {
            let signs: Vec<BigInt> = rays.iter().map(|r| a.dot(r)).collect();
            if signs.iter().all(|s| !s.is_negative()) {
                processed.push(a);
                continue;
            }
            let zero_sets: Vec<Vec<bool>> =
                rays.iter().map(|r| processed.iter().map(|c| c.dot(r).is_zero()).collect()).collect();
            let mut next: Vec<LatticeVector> = Vec::new();
            for (r, s) in rays.iter().zip(&signs) {
                if !s.is_negative() {
                    next.push(r.clone());
                }
            }
            for (i, si) in signs.iter().enumerate() {
                if !si.is_positive() {
                    continue;
                }
                for (j, sj) in signs.iter().enumerate() {
                    if !sj.is_negative() {
                        continue;
                    }
                    let common: Vec<bool> =
                        zero_sets[i].iter().zip(&zero_sets[j]).map(|(x, y)| *x && *y).collect();
                    let adjacent = (0..rays.len()).all(|k| {
                        k == i || k == j || !common.iter().zip(&zero_sets[k]).all(|(c, z)| !*c || *z)
                    });
                    if adjacent {
                        let v = &rays[j].scale(si) - &rays[i].scale(sj);
                        next.push(v.primitive().expect("adjacent rays are independent"));
                    }
                }
            }
            let mut seen = BTreeSet::new();
            next.retain(|v| seen.insert(v.clone()));
            rays = next;
        }
        processed.push(a);
    }
    (lin, rays)
}

fn canonical_subspace(vs: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    if vs.is_empty() {
        return Vec::new();
    }
    saturated_span(vs, dim)
}

/// Project rays orthogonally off the lineality space, primitivize, dedupe, sort.
fn canonical_rays(rays: &[LatticeVector], lineality: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out = BTreeSet::new();
    let gram = if lineality.is_empty() {
        None
    } else {
        let k = lineality.len();
        let rows = (0..k).map(|i| (0..k).map(|j| lineality[i].dot(&lineality[j])).collect()).collect();
        Some(IntMatrix::new(rows, k).expect("square").adjugate().expect("square"))
    };
    for r in rays {
        let v = match &gram {
            None => r.clone(),
            Some((adj, det)) => {
                let c = LatticeVector::new(lineality.iter().map(|l| l.dot(r)).collect());
                let w = adj.mul_vec(&c);
                let mut v = r.scale(det);
                for (wi, l) in w.coords().iter().zip(lineality) {
                    v = &v - &l.scale(wi);
                }
                v
            }
        };
        if !v.is_zero() {
            out.insert(v.primitive().expect("nonzero"));
        }
    }
    out.into_iter().collect()
}

/// Exact rational polyhedral cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    dim: usize,
    lineality: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
}

impl Cone {
    /// The cone generated by `gens` inside `Q^dim`; `gens` may be empty.
    pub fn from_generators(gens: &[LatticeVector], dim: usize) -> Result<Cone, ConeError> {
        check_dims(gens, dim)?;
        let (dual_lin, dual_rays) = double_description(gens, dim);
        let equations = canonical_subspace(&dual_lin, dim);
        let facets = canonical_rays(&dual_rays, &equations);
        Ok(Cone::from_h_canonical(facets, equations, dim))
    }

    /// `{x : <x, a> >= 0}` for each given normal.
    pub fn from_inequalities(normals: &[LatticeVector], dim: usize) -> Result<Cone, ConeError> {
        check_dims(normals, dim)?;
        let (lin, rays) = double_description(normals, dim);
        let lineality = canonical_subspace(&lin, dim);
        let rays = canonical_rays(&rays, &lineality);
        Ok(Cone::from_v_canonical(rays, lineality, dim))
    }

    fn from_h_canonical(facets: Vec<LatticeVector>, equations: Vec<LatticeVector>, dim: usize) -> Cone {
        let mut cons = facets.clone();
        for e in &equations {
            cons.push(e.clone());
            cons.push(-e);
        }
        let (lin, rays) = double_description(&cons, dim);
        let lineality = canonical_subspace(&lin, dim);
        let rays = canonical_rays(&rays, &lineality);
        Cone { dim, lineality, rays, facets, equations }
    }

    fn from_v_canonical(rays: Vec<LatticeVector>, lineality: Vec<LatticeVector>, dim: usize) -> Cone {
        let mut gens = rays.clone();
        for l in &lineality {
            gens.push(l.clone());
            gens.push(-l);
        }
        let (dual_lin, dual_rays) = double_description(&gens, dim);
        let equations = canonical_subspace(&dual_lin, dim);
        let facets = canonical_rays(&dual_rays, &equations);
        Cone { dim, lineality, rays, facets, equations }
    }

    /// The whole space `Q^dim`.
    pub fn full(dim: usize) -> Cone {
        Cone::from_inequalities(&[], dim).expect("no constraints")
    }

    /// The quadrant `Q_{>=0}^dim`.
    pub fn orthant(dim: usize) -> Cone {
        let units: Vec<_> = (0..dim).map(|i| LatticeVector::unit(dim, i)).collect();
        Cone::from_generators(&units, dim).expect("units")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive extremal rays, canonical (orthogonal to the lineality space).
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    /// Primitive facet normals, canonical modulo the implicit equations.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    /// Every defining inequality, equations contributing both signs; sorted.
    pub fn inequalities(&self) -> Vec<LatticeVector> {
        let mut out: BTreeSet<LatticeVector> = self.facets.iter().cloned().collect();
        for e in &self.equations {
            out.insert(e.clone());
            out.insert(-e);
        }
        out.into_iter().collect()
    }

    /// All generators: rays and both signs of the lineality basis.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(-l);
        }
        out
    }

    pub fn dual(&self) -> Cone {
        Cone {
            dim: self.dim,
            lineality: self.equations.clone(),
            rays: self.facets.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        x.dim() == self.dim
            && self.facets.iter().all(|f| !x.dot(f).is_negative())
            && self.equations.iter().all(|e| x.dot(e).is_zero())
    }

    /// Face cut out by a valid inequality `normal`.
    pub fn face(&self, normal: &LatticeVector) -> Result<Cone, ConeError> {
        let mut gens: Vec<LatticeVector> = self.rays.iter().filter(|r| r.dot(normal).is_zero()).cloned().collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(-l);
        }
        Cone::from_generators(&gens, self.dim)
    }

    /// Primitive sum of the facet normals, strictly positive on every
    /// nonzero point of a pointed full-dimensional cone.
    pub fn default_grading(&self) -> Result<LatticeVector, ConeError> {
        if !self.is_pointed() {
            return Err(ConeError::NotPointed);
        }
        if !self.is_full_dimensional() {
            return Err(ConeError::NotFullDimensional);
        }
        let mut s = LatticeVector::zero(self.dim);
        for f in &self.facets {
            s = &s + f;
        }
        if s.is_zero() {
            // dimension 0 cone in Q^0
            return Ok(s);
        }
        Ok(s.primitive()?)
    }

    pub fn enumerate_lattice_points(&self, bx: &IntBox) -> Vec<LatticeVector> {
        bx.points().filter(|p| self.contains(p)).collect()
    }

    /// Pulling triangulation of a pointed cone into simplicial cones given
    /// by their rays.
    pub fn triangulate(&self) -> Result<Vec<Vec<LatticeVector>>, ConeError> {
        if !self.is_pointed() {
            return Err(ConeError::NotPointed);
        }
        Ok(pulling_triangulation(&self.rays, self.dim))
    }

    /// Lattice points `x` of a pointed full-dimensional cone with
    /// `<x, grading> <= bound`, sorted.
    pub fn points_with_grading_at_most(
        &self,
        grading: &LatticeVector,
        bound: &BigInt,
    ) -> Result<Vec<LatticeVector>, ConeError> {
        if !self.is_full_dimensional() {
            return Err(ConeError::NotFullDimensional);
        }
        if self.dim == 0 {
            return Ok(vec![LatticeVector::zero(0)]);
        }
        if self.rays.iter().any(|r| !r.dot(grading).is_positive()) {
            return Err(ConeError::BadGrading);
        }
        let mut out = BTreeSet::new();
        if bound.is_negative() {
            return Ok(Vec::new());
        }
        for simplex in self.triangulate()? {
            let weights: Vec<BigInt> = simplex.iter().map(|r| r.dot(grading)).collect();
            for q in parallelepiped_points(&simplex)? {
                let g0 = q.dot(grading);
                if &g0 > bound {
                    continue;
                }
                let budget = bound - &g0;
                extend_by_multiples(&q, &simplex, &weights, 0, &budget, &mut out);
            }
        }
        Ok(out.into_iter().collect())
    }
}

fn extend_by_multiples(
    base: &LatticeVector,
    rays: &[LatticeVector],
    weights: &[BigInt],
    i: usize,
    budget: &BigInt,
    out: &mut BTreeSet<LatticeVector>,
) {
    if i == rays.len() {
        out.insert(base.clone());
        return;
    }
    let mut cur = base.clone();
    let mut left = budget.clone();
    loop {
        extend_by_multiples(&cur, rays, weights, i + 1, &left, out);
        left -= &weights[i];
        if left.is_negative() {
            break;
        }
        cur = &cur + &rays[i];
    }
}

fn check_dims(vs: &[LatticeVector], dim: usize) -> Result<(), ConeError> {
    for v in vs {
        if v.dim() != dim {
            return Err(LatticeError::DimensionMismatch { expected: dim, found: v.dim() }.into());
        }
    }
    Ok(())
}

fn rank_of(vs: &[LatticeVector], dim: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    hermite_normal_form(&IntMatrix::from_vectors(vs, dim).expect("dims")).rank
}

fn pulling_triangulation(rays: &[LatticeVector], dim: usize) -> Vec<Vec<LatticeVector>> {
    let k = rank_of(rays, dim);
    if k == 0 {
        return vec![Vec::new()];
    }
    if rays.len() == k {
        return vec![rays.to_vec()];
    }
    let apex = &rays[0];
    let cone = Cone::from_generators(rays, dim).expect("dims");
    let mut out = Vec::new();
    for f in cone.facets() {
        if apex.dot(f).is_zero() {
            continue;
        }
        let face: Vec<LatticeVector> = rays.iter().filter(|r| r.dot(f).is_zero()).cloned().collect();
        for mut simplex in pulling_triangulation(&face, dim) {
            simplex.insert(0, apex.clone());
            out.push(simplex);
        }
    }
    out
}

/// Lattice points of the half-open parallelepiped `{sum l_i r_i : 0 <= l_i < 1}`
/// of a full-dimensional simplicial cone, including 0.
pub fn parallelepiped_points(simplex: &[LatticeVector]) -> Result<Vec<LatticeVector>, ConeError> {
    let d = simplex.first().map_or(0, |r| r.dim());
    if simplex.len() != d {
        return Err(ConeError::NotFullDimensional);
    }
    if d == 0 {
        return Ok(vec![LatticeVector::zero(0)]);
    }
    let v = IntMatrix::from_vectors(simplex, d)?;
    let (adj, det) = v.adjugate()?;
    if det.is_zero() {
        return Err(ConeError::NotFullDimensional);
    }
    let hnf = hermite_normal_form(&v);
    let diag: Vec<BigInt> = (0..d).map(|i| hnf.h.get(i, hnf.pivots[i]).clone()).collect();
    let reps = IntBox::new(LatticeVector::zero(d), LatticeVector::new(diag.iter().map(|x| x - 1).collect()))?;
    let mut out = Vec::new();
    for c in reps.points() {
        // c = lambda · V with lambda = c · adj / det
        let num = adj.left_mul(&c);
        let mut x = c.clone();
        for (n, r) in num.coords().iter().zip(simplex) {
            let fl = n.div_floor(&det);
            if !fl.is_zero() {
                x = &x - &r.scale(&fl);
            }
        }
        out.push(x);
    }
    out.sort();
    Ok(out)
}

/// Affine lattice slice `{a : <a, level_normal> = level, <a, n> >= 0 for n in inequality_normals}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlicePolyhedron {
    pub level_normal: LatticeVector,
    pub level: BigInt,
    pub inequality_normals: Vec<LatticeVector>,
}

/// Outcome of searching a slice for a lattice point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceSearch {
    Found(LatticeVector),
    Empty,
    /// Rationally nonempty with a degenerate recession cone, and no lattice
    /// point within the searched radius.
    Unknown,
}

impl SlicePolyhedron {
    pub fn new(level_normal: LatticeVector, level: BigInt, inequality_normals: Vec<LatticeVector>) -> Self {
        SlicePolyhedron { level_normal, level, inequality_normals }
    }

    pub fn dim(&self) -> usize {
        self.level_normal.dim()
    }

    pub fn contains(&self, a: &LatticeVector) -> bool {
        a.dim() == self.dim()
            && a.dot(&self.level_normal) == self.level
            && self.inequality_normals.iter().all(|n| !a.dot(n).is_negative())
    }

    /// Lattice points in the box, lexicographic.
    pub fn lattice_points(&self, bx: &IntBox) -> Vec<LatticeVector> {
        let d = self.dim();
        let Some(j) = (0..d).rev().find(|&j| !self.level_normal[j].is_zero()) else {
            return if self.level.is_zero() {
                bx.points().filter(|p| self.contains(p)).collect()
            } else {
                Vec::new()
            };
        };
        // iterate the other coordinates and solve for coordinate j
        let others: Vec<usize> = (0..d).filter(|&i| i != j).collect();
        let sub = IntBox {
            lo: LatticeVector::new(others.iter().map(|&i| bx.lo[i].clone()).collect()),
            hi: LatticeVector::new(others.iter().map(|&i| bx.hi[i].clone()).collect()),
        };
        let cj = &self.level_normal[j];
        let mut out = Vec::new();
        for p in sub.points() {
            let partial: BigInt = others.iter().zip(p.coords()).map(|(&i, x)| x * &self.level_normal[i]).sum();
            let (q, r) = (&self.level - partial).div_rem(cj);
            if !r.is_zero() || q < bx.lo[j] || q > bx.hi[j] {
                continue;
            }
            let mut coords = p.into_coords();
            coords.insert(j, q);
            let a = LatticeVector::new(coords);
            if self.inequality_normals.iter().all(|n| !a.dot(n).is_negative()) {
                out.push(a);
            }
        }
        out.sort();
        out
    }

    /// Particular solution of the level equation and a basis of the
    /// direction lattice; `None` when the level is unreachable.
    fn parametrize(&self) -> Option<(LatticeVector, Vec<LatticeVector>)> {
        let d = self.dim();
        if self.level_normal.is_zero() {
            return if self.level.is_zero() {
                Some((LatticeVector::zero(d), (0..d).map(|i| LatticeVector::unit(d, i)).collect()))
            } else {
                None
            };
        }
        let col = IntMatrix::from_vectors(std::slice::from_ref(&self.level_normal), d).ok()?.transpose();
        let hnf = hermite_normal_form(&col);
        let g = hnf.h.get(0, 0).clone();
        let (q, r) = self.level.div_rem(&g);
        if !r.is_zero() {
            return None;
        }
        let base = hnf.u.row(0).scale(&q);
        let dirs = (1..d).map(|i| hnf.u.row(i)).collect();
        Some((base, dirs))
    }

    /// Exact emptiness test with witness, falling back to a bounded search
    /// of the given radius only for degenerate slices.
    pub fn find_point(&self, radius: i64) -> SliceSearch {
        let Some((base, dirs)) = self.parametrize() else {
            return SliceSearch::Empty;
        };
        let k = dirs.len();
        // a · t >= b in the parameters t
        let rows: Vec<(Vec<BigInt>, BigInt)> = self
            .inequality_normals
            .iter()
            .map(|n| (dirs.iter().map(|d| d.dot(n)).collect(), -base.dot(n)))
            .collect();
        let lift = |t: &[BigInt]| {
            let mut a = base.clone();
            for (ti, d) in t.iter().zip(&dirs) {
                a = &a + &d.scale(ti);
            }
            a
        };
        let Some(x0) = rational_feasible_point(&rows, k) else {
            return SliceSearch::Empty;
        };
        let strict: Vec<(Vec<BigInt>, BigInt)> = rows.iter().map(|(a, _)| (a.clone(), BigInt::one())).collect();
        if let Some(w) = rational_feasible_point(&strict, k) {
            let den = w.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let w: Vec<BigInt> = w.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
            let spread = rows
                .iter()
                .map(|(a, _)| a.iter().map(|x| x.abs()).sum::<BigInt>())
                .max()
                .unwrap_or_else(BigInt::zero);
            let t: Vec<BigInt> = x0.iter().zip(&w).map(|(x, wi)| x.floor().to_integer() + &spread * wi).collect();
            let a = lift(&t);
            debug_assert!(self.contains(&a));
            return SliceSearch::Found(a);
        }
        let center: Vec<BigInt> = x0.iter().map(|x| x.floor().to_integer()).collect();
        let bx = IntBox {
            lo: LatticeVector::new(center.iter().map(|c| c - radius).collect()),
            hi: LatticeVector::new(center.iter().map(|c| c + radius).collect()),
        };
        for t in bx.points() {
            let a = lift(t.coords());
            if self.contains(&a) {
                return SliceSearch::Found(a);
            }
        }
        SliceSearch::Unknown
    }

    /// Sufficient certificate that `<a, normal> >= 0` on every lattice point:
    /// the rational system with `<a, normal> <= -1` added is infeasible.
    pub fn lattice_implies(&self, normal: &LatticeVector) -> bool {
        let Some((base, dirs)) = self.parametrize() else {
            return true;
        };
        let mut rows: Vec<(Vec<BigInt>, BigInt)> = self
            .inequality_normals
            .iter()
            .map(|n| (dirs.iter().map(|d| d.dot(n)).collect(), -base.dot(n)))
            .collect();
        rows.push((dirs.iter().map(|d| -d.dot(normal)).collect(), base.dot(normal) + 1));
        rational_feasible_point(&rows, dirs.len()).is_none()
    }
}

/// Fourier–Motzkin feasibility of `{t in Q^k : a · t >= b}`, returning a
/// feasible point.
pub fn rational_feasible_point(rows: &[(Vec<BigInt>, BigInt)], k: usize) -> Option<Vec<BigRational>> {
    type Row = (Vec<BigRational>, BigRational);
    let to_q = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut systems: Vec<Vec<Row>> = Vec::with_capacity(k + 1);
    let mut cur: Vec<Row> = rows.iter().map(|(a, b)| (a.iter().map(to_q).collect(), to_q(b))).collect();
    for var in (0..k).rev() {
        systems.push(cur.clone());
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for r in cur {
            match r.0[var].cmp(&BigRational::zero()) {
                std::cmp::Ordering::Greater => pos.push(r),
                std::cmp::Ordering::Less => neg.push(r),
                std::cmp::Ordering::Equal => keep.push(r),
            }
        }
        for p in &pos {
            for n in &neg {
                let cp = -n.0[var].clone();
                let cn = p.0[var].clone();
                let a: Vec<BigRational> = p.0.iter().zip(&n.0).map(|(x, y)| x * &cp + y * &cn).collect();
                let b = &p.1 * &cp + &n.1 * &cn;
                keep.push(normalize_row(a, b));
            }
        }
        let mut seen = BTreeSet::new();
        keep.retain(|r| seen.insert(format!("{:?}", r)));
        cur = keep;
    }
    // all variables eliminated: 0 >= b
    if cur.iter().any(|(_, b)| b.is_positive()) {
        return None;
    }
    let mut t: Vec<BigRational> = vec![BigRational::zero(); k];
    for var in 0..k {
        let sys = &systems[k - 1 - var];
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for (a, b) in sys {
            let rest: BigRational = (0..var).map(|i| &a[i] * &t[i]).sum();
            let c = &a[var];
            if c.is_zero() {
                continue;
            }
            let v = (b - rest) / c;
            if c.is_positive() {
                lower = Some(lower.map_or(v.clone(), |l| l.max(v)));
            } else {
                upper = Some(upper.map_or(v.clone(), |u| u.min(v)));
            }
        }
        t[var] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u,
            (None, None) => BigRational::zero(),
        };
    }
    Some(t)
}

fn normalize_row(a: Vec<BigRational>, b: BigRational) -> (Vec<BigRational>, BigRational) {
    let scale = a.iter().chain(std::iter::once(&b)).map(|x| x.abs()).filter(|x| !x.is_zero()).max();
    match scale {
        Some(s) => (a.into_iter().map(|x| x / &s).collect(), b / s),
        None => (a, b),
    }
}

/// Unimodular coordinates splitting off the lineality lattice of a cone:
/// `x = v · y` (columns of `v`), the first `k` new coordinates spanning the
/// lineality space.
#[derive(Debug, Clone)]
pub struct LinealitySplit {
    pub unit_rank: usize,
    /// `x = v · y`
    pub v: IntMatrix,
    /// `y = u · x`
    pub u: IntMatrix,
    /// The cone in the trailing `dim - unit_rank` coordinates.
    pub pointed: Cone,
}

impl LinealitySplit {
    pub fn new(cone: &Cone) -> Result<Self, ConeError> {
        let n = cone.dim();
        let lin = cone.lineality().to_vec();
        let k = lin.len();
        let (v, u) = complete_basis(&lin, n);
        // inequality normals transform by v^T
        let vt = v.transpose();
        let normals: Vec<LatticeVector> = cone
            .inequalities()
            .iter()
            .map(|f| {
                let g = vt.mul_vec(f);
                debug_assert!(g.coords()[..k].iter().all(Zero::is_zero));
                LatticeVector::new(g.coords()[k..].to_vec())
            })
            .collect();
        let pointed = Cone::from_inequalities(&normals, n - k)?;
        Ok(LinealitySplit { unit_rank: k, v, u, pointed })
    }

    /// Old coordinates of a point of the pointed part (leading unit coordinates zero).
    pub fn lift_pointed(&self, y: &LatticeVector) -> LatticeVector {
        let full = LatticeVector::zero(self.unit_rank).concat(y);
        self.v.mul_vec(&full)
    }

    /// Pointed-part coordinates of an old point, dropping the unit block.
    pub fn project(&self, x: &LatticeVector) -> LatticeVector {
        let y = self.u.mul_vec(x);
        LatticeVector::new(y.coords()[self.unit_rank..].to_vec())
    }

    /// Old coordinates of a functional on the pointed part.
    pub fn lift_functional(&self, f: &LatticeVector) -> LatticeVector {
        let full = LatticeVector::zero(self.unit_rank).concat(f);
        self.u.transpose().mul_vec(&full)
    }
}

/// Lattice basis of `span ∩ Z^n` for a list of points, echelon form.
pub fn lattice_of_span(vs: &[LatticeVector], n: usize) -> Sublattice {
    Sublattice::spanned_by(&saturated_span(vs, n), n).expect("dims")
}

/// Kernel helper re-exported for callers working with functionals.
pub fn orthogonal_lattice(vs: &[LatticeVector], n: usize) -> Vec<LatticeVector> {
    kernel_basis(vs, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn lvs(cs: &[&[i64]]) -> Vec<LatticeVector> {
        cs.iter().map(|c| lv(c)).collect()
    }

    #[test]
    fn cone_from_generators_examples() {
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[1, 1], &[1, 2]]), 2).unwrap();
        assert_eq!(c.rays(), lvs(&[&[1, 0], &[1, 2]]).as_slice());
        assert_eq!(c.facets(), lvs(&[&[0, 1], &[2, -1]]).as_slice());

        let c = Cone::from_generators(&lvs(&[&[1, 0], &[3, 4]]), 2).unwrap();
        assert_eq!(c.rays(), lvs(&[&[1, 0], &[3, 4]]).as_slice());
        assert_eq!(c.facets(), lvs(&[&[0, 1], &[4, -3]]).as_slice());

        let c = Cone::from_generators(&lvs(&[&[1, 0], &[-1, 0]]), 2).unwrap();
        assert_eq!(c.lineality(), lvs(&[&[1, 0]]).as_slice());
        assert!(c.rays().is_empty());
        assert_eq!(c.inequalities(), lvs(&[&[0, -1], &[0, 1]]));
        assert!(!c.is_pointed());
    }

    #[test]
    fn dual_examples() {
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[1, 2]]), 2).unwrap();
        assert_eq!(c.dual(), Cone::from_generators(&lvs(&[&[0, 1], &[2, -1]]), 2).unwrap());
        let c = Cone::from_generators(&lvs(&[&[0, 1], &[4, -3]]), 2).unwrap();
        assert_eq!(c.dual(), Cone::from_generators(&lvs(&[&[1, 0], &[3, 4]]), 2).unwrap());
        let full = Cone::full(2);
        let zero = Cone::from_generators(&[], 2).unwrap();
        assert_eq!(full.dual(), zero);
        assert!(zero.is_pointed());
        assert_eq!(zero.dual(), full);
    }

    #[test]
    fn pointedness() {
        assert!(Cone::from_generators(&lvs(&[&[1, 0], &[1, 2]]), 2).unwrap().is_pointed());
        assert!(!Cone::from_generators(&lvs(&[&[1, 0], &[-1, 0]]), 2).unwrap().is_pointed());
        assert!(Cone::from_generators(&[], 2).unwrap().is_pointed());
    }

    #[test]
    fn enumeration_examples() {
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[1, 2]]), 2).unwrap();
        let pts = c.enumerate_lattice_points(&IntBox::from_bounds(&[(0, 2), (0, 2)]).unwrap());
        assert_eq!(pts, lvs(&[&[0, 0], &[1, 0], &[1, 1], &[1, 2], &[2, 0], &[2, 1], &[2, 2]]));

        let apex = IntBox::from_bounds(&[(0, 0), (0, 0), (0, 0)]).unwrap();
        assert_eq!(Cone::orthant(3).enumerate_lattice_points(&apex), vec![LatticeVector::zero(3)]);

        let c = Cone::from_generators(&lvs(&[&[1, 0], &[3, 4]]), 2).unwrap();
        let pts = c.enumerate_lattice_points(&IntBox::from_bounds(&[(0, 3), (0, 4)]).unwrap());
        assert!(pts.contains(&lv(&[3, 4])));
        assert!(!pts.contains(&lv(&[2, 3])));
    }

    #[test]
    fn slice_examples() {
        let p = SlicePolyhedron::new(lv(&[2, -1]), BigInt::from(-1), lvs(&[&[0, 1]]));
        let bx = IntBox::from_bounds(&[(-2, 3), (-2, 3)]).unwrap();
        assert_eq!(p.lattice_points(&bx), lvs(&[&[0, 1], &[1, 3]]));

        let p = SlicePolyhedron::new(lv(&[0, 1]), BigInt::from(-1), lvs(&[&[2, -1]]));
        let bx = IntBox::from_bounds(&[(-1, 3), (-1, 0)]).unwrap();
        assert_eq!(p.lattice_points(&bx), lvs(&[&[0, -1], &[1, -1], &[2, -1], &[3, -1]]));

        let p = SlicePolyhedron::new(lv(&[0, 1]), BigInt::from(-1), lvs(&[&[0, 1]]));
        assert!(p.lattice_points(&bx).is_empty());
        assert_eq!(p.find_point(5), SliceSearch::Empty);
    }

    #[test]
    fn slice_find_point_is_exact() {
        let p = SlicePolyhedron::new(lv(&[4, -3]), BigInt::from(-1), lvs(&[&[0, 1]]));
        match p.find_point(0) {
            SliceSearch::Found(a) => assert!(p.contains(&a)),
            other => panic!("expected a point, got {other:?}"),
        }
        // a hyperplane with no lattice point at level 1
        let p = SlicePolyhedron::new(lv(&[2, 4]), BigInt::from(1), vec![]);
        assert_eq!(p.find_point(3), SliceSearch::Empty);
        assert!(p.lattice_implies(&lv(&[1, 0])));
    }

    #[test]
    fn triangulation_and_parallelepiped() {
        let c = Cone::from_generators(&lvs(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]), 3).unwrap();
        let t = c.triangulate().unwrap();
        assert_eq!(t.len(), 2);
        let pp = parallelepiped_points(&lvs(&[&[1, 0], &[1, 2]])).unwrap();
        assert_eq!(pp, lvs(&[&[0, 0], &[1, 1]]));
    }

    #[test]
    fn graded_points_match_box_scan() {
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[3, 4]]), 2).unwrap();
        let u = c.default_grading().unwrap();
        let b = BigInt::from(6);
        let fast = c.points_with_grading_at_most(&u, &b).unwrap();
        let slow: Vec<_> = c
            .enumerate_lattice_points(&IntBox::cube(2, 40))
            .into_iter()
            .filter(|p| p.dot(&u) <= b)
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn lineality_split() {
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[0, 1], &[0, -1]]), 2).unwrap();
        let s = LinealitySplit::new(&c).unwrap();
        assert_eq!(s.unit_rank, 1);
        assert_eq!(s.pointed.rays().len(), 1);
        let r = s.lift_pointed(&s.pointed.rays()[0]);
        assert!(c.contains(&r) && !c.contains(&-&r));
    }
}
