//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Row vectors throughout: a matrix acts on the left of the vectors stored in
//! its rows, and the Hermite normal form is row style (echelon, positive
//! pivots, entries above each pivot reduced into `[0, pivot)`).

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the zero vector has no primitive representative")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("generators span the zero lattice")]
    ZeroLattice,
    #[error("matrix rows have inconsistent lengths")]
    Ragged,
    #[error("matrix is not square")]
    NotSquare,
}

/// An element of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Coordinates as `i64`, when every coordinate fits.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Standard dot product; panics on dimension mismatch (see [`pairing`]
    /// for the checked form).
    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        assert_eq!(self.dim(), other.dim(), "dot product of vectors of different dimension");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive(&self) -> Result<LatticeVector, LatticeError> {
        primitive(self)
    }

    /// Divide every coordinate exactly by `d`. Panics if `d` does not divide.
    pub fn div_exact(&self, d: &BigInt) -> LatticeVector {
        LatticeVector(
            self.0
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "inexact division");
                    q
                })
                .collect(),
        )
    }

    /// Concatenate coordinates.
    pub fn concat(&self, other: &LatticeVector) -> LatticeVector {
        let mut c = self.0.clone();
        c.extend(other.0.iter().cloned());
        LatticeVector(c)
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector::from_i64s(&v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector::from_i64s(&v)
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), rhs.dim());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), rhs.dim());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

/// Dense integer matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, LatticeError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LatticeError::Ragged);
        }
        Ok(IntMatrix { rows, cols })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        IntMatrix { rows, cols }
    }

    pub fn from_vectors(vs: &[LatticeVector], cols: usize) -> Result<Self, LatticeError> {
        for v in vs {
            if v.dim() != cols {
                return Err(LatticeError::DimensionMismatch { expected: cols, found: v.dim() });
            }
        }
        Ok(IntMatrix { rows: vs.iter().map(|v| v.coords().to_vec()).collect(), cols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix { rows, cols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.rows[i].clone())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        self.rows.iter().map(|r| LatticeVector(r.clone())).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        IntMatrix { rows, cols: self.rows.len() }
    }

    /// `v · self` for a row vector `v`.
    pub fn left_mul(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(v.dim(), self.nrows());
        let mut out = vec![BigInt::zero(); self.cols];
        for (c, row) in v.coords().iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        LatticeVector(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(v.dim(), self.cols);
        LatticeVector(self.rows.iter().map(|r| r.iter().zip(v.coords()).map(|(a, b)| a * b).sum()).collect())
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        let n = self.nrows();
        if n != self.cols {
            return Err(LatticeError::NotSquare);
        }
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn rank(&self) -> usize {
        hermite_normal_form(self).rank
    }

    /// Adjugate and determinant of a square matrix: `adj · self = det · I`.
    pub fn adjugate(&self) -> Result<(IntMatrix, BigInt), LatticeError> {
        let n = self.nrows();
        if n != self.cols {
            return Err(LatticeError::NotSquare);
        }
        let det = self.determinant()?;
        if n == 1 {
            return Ok((IntMatrix::identity(1), det));
        }
        let mut adj = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| self.rows[r][c].clone()).collect())
                    .collect();
                let m = IntMatrix { rows: minor, cols: n - 1 }.determinant()?;
                // adj[j][i] = (-1)^{i+j} M_ij
                adj[j][i] = if (i + j) % 2 == 0 { m } else { -m };
            }
        }
        Ok((IntMatrix { rows: adj, cols: n }, det))
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.nrows());
        let rows = self.rows.iter().map(|r| rhs.left_mul(&LatticeVector(r.clone())).0).collect();
        IntMatrix { rows, cols: rhs.cols }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", LatticeVector(r.clone()))?;
        }
        write!(f, "]")
    }
}

/// Result of [`hermite_normal_form`]: `h = u · a` with `u` unimodular.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Hnf {
    /// The nonzero rows of `h`: an echelon basis of the row lattice.
    pub fn basis(&self) -> Vec<LatticeVector> {
        (0..self.rank).map(|i| self.h.row(i)).collect()
    }
}

fn combine_rows(rows: &mut [Vec<BigInt>], r: usize, i: usize, x: &BigInt, y: &BigInt, a: &BigInt, b: &BigInt) {
    // (row_r, row_i) <- (x row_r + y row_i, -b row_r + a row_i), determinant x a + y b = 1
    let (top, rest) = rows.split_at_mut(i);
    let rr = &mut top[r];
    let ri = &mut rest[0];
    for (p, q) in rr.iter_mut().zip(ri.iter_mut()) {
        let np = x * &*p + y * &*q;
        let nq = a * &*q - b * &*p;
        *p = np;
        *q = nq;
    }
}

/// Row-style Hermite normal form.
pub fn hermite_normal_form(a: &IntMatrix) -> Hnf {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.rows.clone();
    let mut u = IntMatrix::identity(m).rows;
    let mut r = 0;
    let mut pivots = Vec::new();
    for j in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h[i][j].is_zero() {
                continue;
            }
            let eg = h[r][j].extended_gcd(&h[i][j]);
            let a_ = &h[r][j] / &eg.gcd;
            let b_ = &h[i][j] / &eg.gcd;
            combine_rows(&mut h, r, i, &eg.x, &eg.y, &a_, &b_);
            combine_rows(&mut u, r, i, &eg.x, &eg.y, &a_, &b_);
        }
        if h[r][j].is_zero() {
            continue;
        }
        if h[r][j].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][j].div_floor(&h[r][j]);
            if q.is_zero() {
                continue;
            }
            let (top, rest) = h.split_at_mut(r);
            for (x, y) in top[i].iter_mut().zip(&rest[0]) {
                *x -= &q * y;
            }
            let (top, rest) = u.split_at_mut(r);
            for (x, y) in top[i].iter_mut().zip(&rest[0]) {
                *x -= &q * y;
            }
        }
        pivots.push(j);
        r += 1;
    }
    Hnf { h: IntMatrix { rows: h, cols: n }, u: IntMatrix { rows: u, cols: m }, rank: r, pivots }
}

pub fn primitive(v: &LatticeVector) -> Result<LatticeVector, LatticeError> {
    let g = v.content();
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.div_exact(&g))
}

pub fn pairing(m: &LatticeVector, u: &LatticeVector) -> Result<BigInt, LatticeError> {
    if m.dim() != u.dim() {
        return Err(LatticeError::DimensionMismatch { expected: m.dim(), found: u.dim() });
    }
    Ok(m.dot(u))
}

/// Coordinates of `v` in the echelon basis produced by [`hermite_normal_form`],
/// or `None` when `v` is not in the row lattice.
pub fn solve_in_echelon(hnf: &Hnf, v: &LatticeVector) -> Option<LatticeVector> {
    let mut rest = v.clone();
    let mut coeffs = Vec::with_capacity(hnf.rank);
    for (k, &p) in hnf.pivots.iter().enumerate() {
        let piv = hnf.h.get(k, p);
        let (q, r) = rest[p].div_rem(piv);
        if !r.is_zero() {
            return None;
        }
        rest = &rest - &hnf.h.row(k).scale(&q);
        coeffs.push(q);
    }
    if rest.is_zero() {
        Some(LatticeVector::new(coeffs))
    } else {
        None
    }
}

/// Lattice spanned by a list of vectors, kept in echelon form for membership
/// queries.
#[derive(Debug, Clone)]
pub struct Sublattice {
    dim: usize,
    hnf: Hnf,
}

impl Sublattice {
    pub fn spanned_by(vs: &[LatticeVector], dim: usize) -> Result<Self, LatticeError> {
        let m = IntMatrix::from_vectors(vs, dim)?;
        let hnf = if vs.is_empty() {
            Hnf { h: IntMatrix { rows: vec![], cols: dim }, u: IntMatrix::identity(0), rank: 0, pivots: vec![] }
        } else {
            hermite_normal_form(&m)
        };
        Ok(Sublattice { dim, hnf })
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Vec<LatticeVector> {
        self.hnf.basis()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        solve_in_echelon(&self.hnf, v).is_some()
    }

    pub fn coordinates(&self, v: &LatticeVector) -> Option<LatticeVector> {
        solve_in_echelon(&self.hnf, v)
    }

    /// Reduce `v` modulo the lattice: pivot coordinates land in `[0, pivot)`.
    pub fn reduce(&self, v: &LatticeVector) -> LatticeVector {
        let mut rest = v.clone();
        for (k, &p) in self.hnf.pivots.iter().enumerate() {
            let q = rest[p].div_floor(self.hnf.h.get(k, p));
            if !q.is_zero() {
                rest = &rest - &self.hnf.h.row(k).scale(&q);
            }
        }
        rest
    }

    /// Index in `Z^dim` when full rank; `None` otherwise.
    pub fn index(&self) -> Option<BigInt> {
        if self.hnf.rank != self.dim {
            return None;
        }
        Some((0..self.dim).map(|k| self.hnf.h.get(k, self.hnf.pivots[k]).clone()).product())
    }
}

/// Integer basis of the right kernel `{x in Z^n : rows · x = 0}`. Always a
/// basis of a saturated sublattice.
pub fn kernel_basis(rows: &[LatticeVector], n: usize) -> Vec<LatticeVector> {
    if rows.is_empty() || rows.iter().all(LatticeVector::is_zero) {
        return (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    }
    // kernel of A equals the left kernel of A^T; U · A^T = H, zero rows of H
    // pick out the left kernel.
    let at = IntMatrix::from_vectors(rows, n).expect("checked dims").transpose();
    let hnf = hermite_normal_form(&at);
    let mut basis: Vec<LatticeVector> = (hnf.rank..n).map(|i| hnf.u.row(i)).collect();
    if !basis.is_empty() {
        let canon = Sublattice::spanned_by(&basis, n).expect("dims");
        basis = canon.basis();
    }
    basis
}

/// Basis (echelon) of `span(vs) ∩ Z^n`.
pub fn saturated_span(vs: &[LatticeVector], n: usize) -> Vec<LatticeVector> {
    let k = kernel_basis(vs, n);
    if k.len() == n {
        return Vec::new();
    }
    kernel_basis(&k, n)
}

/// Output of [`minimal_embedding`].
#[derive(Debug, Clone)]
pub struct Embedding {
    /// Generators re-expressed in coordinates of `basis`.
    pub gens: Vec<LatticeVector>,
    /// Rows form a basis of the group generated by the input (old coordinates).
    pub basis: IntMatrix,
}

impl Embedding {
    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// Old coordinates of a point given in new coordinates.
    pub fn lift(&self, v: &LatticeVector) -> LatticeVector {
        self.basis.left_mul(v)
    }
}

/// Re-embed generators into the group they generate.
pub fn minimal_embedding(gens: &[LatticeVector]) -> Result<Embedding, LatticeError> {
    let n = gens.first().ok_or(LatticeError::EmptyInput)?.dim();
    let m = IntMatrix::from_vectors(gens, n)?;
    let hnf = hermite_normal_form(&m);
    if hnf.rank == 0 {
        return Err(LatticeError::ZeroLattice);
    }
    let new_gens = gens
        .iter()
        .map(|g| solve_in_echelon(&hnf, g).expect("generator lies in its own lattice"))
        .collect();
    let basis = IntMatrix::from_vectors(&hnf.basis(), n)?;
    Ok(Embedding { gens: new_gens, basis })
}

/// Unimodular `v` (columns) whose first `k` columns span the saturated
/// sublattice with the given basis, together with `v^{-1}`.
pub fn complete_basis(sub: &[LatticeVector], n: usize) -> (IntMatrix, IntMatrix) {
    if sub.is_empty() {
        return (IntMatrix::identity(n), IntMatrix::identity(n));
    }
    // U · B^T = [T; 0] with T invertible over Z when the sublattice is
    // saturated, so B^T = U^{-1}[T; 0] and the first k columns of U^{-1}
    // span the same lattice as B.
    let bt = IntMatrix::from_vectors(sub, n).expect("dims").transpose();
    let hnf = hermite_normal_form(&bt);
    let u = hnf.u;
    let (adj, det) = u.adjugate().expect("square");
    let inv = if det.is_one() {
        adj
    } else {
        IntMatrix { rows: adj.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect(), cols: adj.cols }
    };
    (inv, u)
}

/// Ceiling division for a positive divisor.
pub fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn brute_row_space_rank(rows: &[&[i64]]) -> usize {
        // rank over Q by float-free fraction elimination on small inputs
        let m = IntMatrix::from_i64_rows(rows);
        let n = m.ncols();
        let mut best = 0;
        // largest nonsingular square minor
        let r = m.nrows();
        for size in 1..=r.min(n) {
            let rows_idx: Vec<Vec<usize>> = subsets(r, size);
            let cols_idx: Vec<Vec<usize>> = subsets(n, size);
            'outer: for ri in &rows_idx {
                for ci in &cols_idx {
                    let sub: Vec<Vec<BigInt>> =
                        ri.iter().map(|&i| ci.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                    if !IntMatrix::new(sub, size).unwrap().determinant().unwrap().is_zero() {
                        best = size;
                        break 'outer;
                    }
                }
            }
        }
        best
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    #[test]
    fn hnf_examples() {
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]);
        let r = hermite_normal_form(&a);
        assert_eq!(r.h, a);
        assert_eq!(r.u, IntMatrix::identity(2));

        let a = IntMatrix::from_i64_rows(&[&[2], &[3]]);
        let r = hermite_normal_form(&a);
        assert_eq!(r.h, IntMatrix::from_i64_rows(&[&[1], &[0]]));
        assert_eq!(&r.u * &a, r.h);

        let a = IntMatrix::from_i64_rows(&[&[1, 0], &[1, 1], &[1, 2]]);
        let r = hermite_normal_form(&a);
        assert_eq!(r.basis(), vec![lv(&[1, 0]), lv(&[0, 1])]);
        assert_eq!(r.rank, brute_row_space_rank(&[&[1, 0], &[1, 1], &[1, 2]]));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&lv(&[2, 4])).unwrap(), lv(&[1, 2]));
        assert_eq!(primitive(&lv(&[4, -3])).unwrap(), lv(&[4, -3]));
        assert_eq!(primitive(&lv(&[0, -6])).unwrap(), lv(&[0, -1]));
        assert_eq!(primitive(&lv(&[0, 0])), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&lv(&[2, 3]), &lv(&[4, -3])).unwrap(), BigInt::from(-1));
        assert_eq!(pairing(&lv(&[1, 0]), &lv(&[0, 1])).unwrap(), BigInt::zero());
        assert_eq!(pairing(&lv(&[5, 7]), &lv(&[0, 0])).unwrap(), BigInt::zero());
        assert!(matches!(
            pairing(&lv(&[1]), &lv(&[1, 2])),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minimal_embedding_examples() {
        let e = minimal_embedding(&[lv(&[2, 0]), lv(&[0, 2])]).unwrap();
        assert_eq!(e.gens, vec![lv(&[1, 0]), lv(&[0, 1])]);
        assert_eq!(e.basis, IntMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]));

        let e = minimal_embedding(&[lv(&[2]), lv(&[3])]).unwrap();
        assert_eq!(e.gens, vec![lv(&[2]), lv(&[3])]);
        assert_eq!(e.basis, IntMatrix::from_i64_rows(&[&[1]]));

        let gens = vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[1, 2])];
        let e = minimal_embedding(&gens).unwrap();
        assert_eq!(e.gens, gens);

        assert_eq!(minimal_embedding(&[lv(&[0, 0])]).unwrap_err(), LatticeError::ZeroLattice);
        assert_eq!(minimal_embedding(&[]).unwrap_err(), LatticeError::EmptyInput);
    }

    #[test]
    fn kernel_and_saturation() {
        let k = kernel_basis(&[lv(&[1, 1, 1])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(v.dot(&lv(&[1, 1, 1])).is_zero());
        }
        let s = saturated_span(&[lv(&[2, 2, 0])], 3);
        assert_eq!(s, vec![lv(&[1, 1, 0])]);
        assert_eq!(saturated_span(&[lv(&[1, 0]), lv(&[0, 3])], 2), vec![lv(&[1, 0]), lv(&[0, 1])]);
        assert!(saturated_span(&[lv(&[0, 0])], 2).is_empty());
    }

    #[test]
    fn complete_basis_is_unimodular() {
        let (v, vinv) = complete_basis(&[lv(&[0, 1, 1])], 3);
        assert_eq!(&v * &vinv, IntMatrix::identity(3));
        let first: Vec<BigInt> = (0..3).map(|i| v.get(i, 0).clone()).collect();
        let first = LatticeVector::new(first);
        assert!(first == lv(&[0, 1, 1]) || first == lv(&[0, -1, -1]));
    }

    #[test]
    fn adjugate_identity() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2, 0], &[3, -1, 4], &[0, 5, 2]]);
        let (adj, det) = a.adjugate().unwrap();
        let p = &adj * &a;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(p.get(i, j), &want);
            }
        }
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
    }

    proptest! {
        #[test]
        fn hnf_is_unimodular_transform(rows in small_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = IntMatrix::from_i64_rows(&refs);
            let r = hermite_normal_form(&a);
            prop_assert_eq!(&r.u * &a, r.h.clone());
            prop_assert_eq!(r.u.determinant().unwrap().abs(), BigInt::one());
            prop_assert_eq!(r.rank, brute_row_space_rank(&refs));
            for (k, &p) in r.pivots.iter().enumerate() {
                prop_assert!(r.h.get(k, p).is_positive());
                for i in 0..k {
                    prop_assert!(!r.h.get(i, p).is_negative() && r.h.get(i, p) < r.h.get(k, p));
                }
                for i in k + 1..r.h.nrows() {
                    prop_assert!(r.h.get(i, p).is_zero());
                }
            }
        }

        #[test]
        fn primitive_is_scale_invariant(v in prop::collection::vec(-20i64..21, 1..5), k in 1i64..8) {
            let v = LatticeVector::from_i64s(&v);
            prop_assume!(!v.is_zero());
            let p = primitive(&v).unwrap();
            prop_assert_eq!(primitive(&v.scale(&BigInt::from(k))).unwrap(), p.clone());
            prop_assert!(p.content().is_one());
        }

        #[test]
        fn minimal_embedding_generates_everything(rows in small_matrix()) {
            let gens: Vec<LatticeVector> = rows.iter().map(|r| LatticeVector::from_i64s(r)).collect();
            prop_assume!(gens.iter().any(|g| !g.is_zero()));
            let e = minimal_embedding(&gens).unwrap();
            let d = e.rank();
            let lat = Sublattice::spanned_by(&e.gens, d).unwrap();
            prop_assert_eq!(lat.index(), Some(BigInt::one()));
            for (g, g2) in gens.iter().zip(&e.gens) {
                prop_assert_eq!(&e.lift(g2), g);
            }
            let again = minimal_embedding(&e.gens).unwrap();
            prop_assert_eq!(again.basis.determinant().unwrap().abs(), BigInt::one());
        }
    }
}
