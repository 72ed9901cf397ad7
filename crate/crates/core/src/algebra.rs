//! The semigroup algebra `k[S]` over exact rationals and the homogeneous
//! locally nilpotent derivations `∂_α(χ^m) = <m, ρ>·χ^{m+α}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::LatticeVector;
use crate::roots::{is_root, RootError};
use crate::semigroup::AffineSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("exponent {0} lies outside the semigroup")]
    ExponentOutsideS(LatticeVector),
    #[error("{alpha} is not a root with distinguished ray {ray}")]
    NotARoot { alpha: LatticeVector, ray: LatticeVector },
    #[error("the derivation vanishes on every generator")]
    Trivial,
    #[error("iterates of the generator {generator} did not vanish within {limit} steps")]
    NotNilpotent { generator: LatticeVector, limit: usize },
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Finite sum of rational multiples of monomials `χ^m`, sorted by exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<LatticeVector, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn monomial(m: LatticeVector) -> Self {
        AlgebraElement::term(m, BigRational::one())
    }

    pub fn term(m: LatticeVector, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElement { terms }
    }

    /// `c·χ^0`.
    pub fn scalar(c: BigRational, dim: usize) -> Self {
        AlgebraElement::term(LatticeVector::zero(dim), c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LatticeVector, BigRational)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: LatticeVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &LatticeVector) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    /// Convolution product; exponents add.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m + n, a * b);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·χ^{m}")?;
        }
        Ok(())
    }
}

/// `k[S]` with membership checks on exponents.
#[derive(Debug, Clone)]
pub struct SemigroupAlgebra {
    s: AffineSemigroup,
}

impl SemigroupAlgebra {
    pub fn new(s: AffineSemigroup) -> Self {
        SemigroupAlgebra { s }
    }

    pub fn semigroup(&self) -> &AffineSemigroup {
        &self.s
    }

    pub fn check(&self, a: &AlgebraElement) -> Result<(), AlgebraError> {
        match a.terms().find(|(m, _)| m.dim() != self.s.dim() || !self.s.member(m)) {
            Some((m, _)) => Err(AlgebraError::ExponentOutsideS(m.clone())),
            None => Ok(()),
        }
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (LatticeVector, BigRational)>) -> Result<AlgebraElement, AlgebraError> {
        let a = AlgebraElement::from_terms(terms);
        self.check(&a)?;
        Ok(a)
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let p = a.mul(b);
        self.check(&p)?;
        Ok(p)
    }
}

/// A linear map on `k[S]` given on monomials.
pub trait Derivation {
    fn on_monomial(&self, m: &LatticeVector) -> AlgebraElement;

    fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in a.terms() {
            out = out.add(&self.on_monomial(m).scale(c));
        }
        out
    }
}

/// `∂_α` for a root `α` with distinguished ray `ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemazureDerivation {
    pub alpha: LatticeVector,
    pub ray: LatticeVector,
}

impl DemazureDerivation {
    /// Validates that `(α, ρ)` is a root of `S` and that `∂_α` is not zero on `S`.
    pub fn new(s: &AffineSemigroup, alpha: LatticeVector, ray: LatticeVector) -> Result<Self, AlgebraError> {
        let ok = is_root(s, &alpha)?.witness().is_some_and(|w| w.qualifying_rays.contains(&ray));
        if !ok {
            return Err(AlgebraError::NotARoot { alpha, ray });
        }
        let gens = generators_of(s);
        if gens.iter().all(|g| g.dot(&ray).is_zero()) {
            return Err(AlgebraError::Trivial);
        }
        Ok(DemazureDerivation { alpha, ray })
    }
}

impl Derivation for DemazureDerivation {
    fn on_monomial(&self, m: &LatticeVector) -> AlgebraElement {
        AlgebraElement::term(m + &self.alpha, BigRational::from_integer(m.dot(&self.ray)))
    }
}

/// `χ^m ↦ <m, ρ>²·χ^{m+α}`: has the degree of `∂_α` but breaks the Leibniz rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredWeightMap(pub DemazureDerivation);

impl Derivation for SquaredWeightMap {
    fn on_monomial(&self, m: &LatticeVector) -> AlgebraElement {
        let w = m.dot(&self.0.ray);
        AlgebraElement::term(m + &self.0.alpha, BigRational::from_integer(&w * &w))
    }
}

/// Generators used for algebra-level checks: the irreducibles when
/// available, else the saturation's Hilbert basis filtered to `S`.
pub fn generators_of(s: &AffineSemigroup) -> Vec<LatticeVector> {
    match s.irreducibles(None) {
        Ok(hb) => hb.elements,
        Err(_) => s.saturation_hilbert_basis().iter().filter(|h| s.member(h)).cloned().collect(),
    }
}

pub fn iterate(d: &dyn Derivation, a: &AlgebraElement, k: usize) -> AlgebraElement {
    let mut x = a.clone();
    for _ in 0..k {
        if x.is_zero() {
            break;
        }
        x = d.apply(&x);
    }
    x
}

/// `Σ t^k/k!·∂^k(a)`, failing if the iterates have not vanished after `limit` steps.
pub fn exponentiate(d: &dyn Derivation, t: &BigRational, a: &AlgebraElement, limit: usize) -> Result<AlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero();
    let mut x = a.clone();
    let mut coeff = BigRational::one();
    for k in 0..=limit {
        if x.is_zero() {
            return Ok(out);
        }
        out = out.add(&x.scale(&coeff));
        x = d.apply(&x);
        coeff = coeff * t / BigRational::from_integer(BigInt::from(k + 1));
    }
    if x.is_zero() {
        return Ok(out);
    }
    let generator = a.terms().next().map(|(m, _)| m.clone()).unwrap_or_else(|| LatticeVector::zero(0));
    Err(AlgebraError::NotNilpotent { generator, limit })
}

/// `D(ab) - D(a)·b - a·D(b)`.
pub fn leibniz_defect(d: &dyn Derivation, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    d.apply(&a.mul(b)).sub(&d.apply(a).mul(b)).sub(&a.mul(&d.apply(b)))
}

/// Checks `∂^i(χ^g) = 0` for some `i <= <g, ρ> + 1` on every generator;
/// returns the largest such `i`.
pub fn check_locally_nilpotent(
    d: &DemazureDerivation,
    gens: &[LatticeVector],
    max_iter: usize,
) -> Result<usize, AlgebraError> {
    let mut worst = 0;
    for g in gens {
        let w = g.dot(&d.ray);
        let allowed = if w.is_negative() { 1 } else { usize::try_from(&w + 1).unwrap_or(usize::MAX) }.min(max_iter);
        let mut x = AlgebraElement::monomial(g.clone());
        let mut i = 0;
        while !x.is_zero() && i < allowed {
            x = d.apply(&x);
            i += 1;
        }
        if !x.is_zero() {
            return Err(AlgebraError::NotNilpotent { generator: g.clone(), limit: allowed });
        }
        worst = worst.max(i);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn x(m: &[i64]) -> AlgebraElement {
        AlgebraElement::monomial(lv(m))
    }

    fn s1() -> AffineSemigroup {
        AffineSemigroup::saturated(Cone::from_generators(&[lv(&[1, 0]), lv(&[1, 2])], 2).unwrap()).unwrap()
    }

    fn line() -> AffineSemigroup {
        AffineSemigroup::saturated(Cone::orthant(1)).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let alg = SemigroupAlgebra::new(s1());
        assert_eq!(alg.multiply(&x(&[1, 0]), &x(&[1, 2])).unwrap(), x(&[2, 2]));
        let t = q(3, 2);
        let a = x(&[1]).add(&AlgebraElement::scalar(t.clone(), 1));
        let sq = a.mul(&a);
        let expect = x(&[2]).add(&x(&[1]).scale(&(&t * q(2, 1)))).add(&AlgebraElement::scalar(&t * &t, 1));
        assert_eq!(sq, expect);
        let one = AlgebraElement::scalar(BigRational::one(), 2);
        assert_eq!(one.mul(&x(&[1, 1])), x(&[1, 1]));
        assert!(alg.multiply(&x(&[0, 1]), &one).is_err());
    }

    #[test]
    fn derivation_examples() {
        let d = DemazureDerivation::new(&s1(), lv(&[0, 1]), lv(&[2, -1])).unwrap();
        assert_eq!(d.apply(&x(&[1, 0])), x(&[1, 1]).scale(&q(2, 1)));
        assert!(d.apply(&x(&[1, 2])).is_zero());
        assert_eq!(iterate(&d, &x(&[1, 0]), 2), x(&[1, 2]).scale(&q(2, 1)));
        assert_eq!(iterate(&d, &x(&[1, 1]), 2), AlgebraElement::zero());
        assert_eq!(iterate(&d, &x(&[1, 1]), 0), x(&[1, 1]));
        let dx = DemazureDerivation::new(&line(), lv(&[-1]), lv(&[1])).unwrap();
        assert_eq!(dx.apply(&x(&[2])), x(&[1]).scale(&q(2, 1)));
        assert!(DemazureDerivation::new(&s1(), lv(&[1, 0]), lv(&[2, -1])).is_err());
    }

    #[test]
    fn exponential_examples() {
        let dx = DemazureDerivation::new(&line(), lv(&[-1]), lv(&[1])).unwrap();
        let t = q(-1, 2);
        assert_eq!(exponentiate(&dx, &t, &x(&[1]), 8).unwrap(), x(&[1]).add(&AlgebraElement::scalar(t.clone(), 1)));
        let shifted = x(&[1]).add(&AlgebraElement::scalar(t.clone(), 1));
        assert_eq!(exponentiate(&dx, &t, &x(&[2]), 8).unwrap(), shifted.mul(&shifted));
        let a = x(&[3]).add(&x(&[1]));
        assert_eq!(exponentiate(&dx, &BigRational::zero(), &a, 8).unwrap(), a);
    }

    #[test]
    fn nilpotency_and_negative_control() {
        let s = s1();
        let d = DemazureDerivation::new(&s, lv(&[0, 1]), lv(&[2, -1])).unwrap();
        let gens = generators_of(&s);
        assert!(check_locally_nilpotent(&d, &gens, 16).unwrap() <= 3);
        let bad = SquaredWeightMap(d.clone());
        let defect = leibniz_defect(&bad, &x(&[1, 0]), &x(&[1, 0]));
        assert!(!defect.is_zero());
        assert!(leibniz_defect(&d, &x(&[1, 0]), &x(&[1, 1])).is_zero());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::cone::{Cone, IntBox};
    use crate::roots::roots_in_box;
    use proptest::prelude::*;

    fn setting() -> (AffineSemigroup, Vec<LatticeVector>, Vec<DemazureDerivation>) {
        let c = Cone::from_generators(&[LatticeVector::from_i64s(&[1, 0]), LatticeVector::from_i64s(&[3, 4])], 2).unwrap();
        let s = AffineSemigroup::hole_patched(
            c,
            [[1, 0], [1, 1], [3, 2], [3, 3], [3, 4], [5, 6]].iter().map(|m| LatticeVector::from_i64s(m)).collect(),
            vec![],
        )
        .unwrap();
        let pts = s.points_up_to(&BigInt::from(6)).unwrap();
        let ds = roots_in_box(&s, &IntBox::cube(2, 6))
            .unwrap()
            .into_iter()
            .map(|w| DemazureDerivation::new(&s, w.alpha, w.ray).unwrap())
            .collect();
        (s, pts, ds)
    }

    fn element(pts: Vec<LatticeVector>) -> impl Strategy<Value = AlgebraElement> {
        prop::collection::vec((prop::sample::select(pts), -3i64..=3, 1i64..=2), 1..=5).prop_map(|ts| {
            AlgebraElement::from_terms(ts.into_iter().map(|(m, n, d)| (m, BigRational::new(BigInt::from(n), BigInt::from(d)))))
        })
    }

    fn scalar() -> impl Strategy<Value = BigRational> {
        prop::sample::select(vec![(1, 1), (-1, 1), (1, 2), (-1, 2), (3, 1)])
            .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn leibniz_and_automorphism(
            (a, b, i, t, u) in {
                let (_, pts, ds) = setting();
                (element(pts.clone()), element(pts), 0..ds.len(), scalar(), scalar())
            }
        ) {
            let (s, _, ds) = setting();
            let alg = SemigroupAlgebra::new(s);
            let d = &ds[i];
            prop_assert!(leibniz_defect(d, &a, &b).is_zero());
            let ab = alg.multiply(&a, &b).unwrap();
            let lhs = exponentiate(d, &t, &ab, 64).unwrap();
            let rhs = exponentiate(d, &t, &a, 64).unwrap().mul(&exponentiate(d, &t, &b, 64).unwrap());
            prop_assert_eq!(&lhs, &rhs);
            alg.check(&lhs).unwrap();
            let composed = exponentiate(d, &u, &exponentiate(d, &t, &a, 64).unwrap(), 64).unwrap();
            prop_assert_eq!(composed, exponentiate(d, &(&t + &u), &a, 64).unwrap());
            for (m, _) in a.terms() {
                for (n, _) in d.on_monomial(m).terms() {
                    prop_assert_eq!(n, &(m + &d.alpha));
                }
            }
        }
    }
}
