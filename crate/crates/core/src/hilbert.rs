//! Hilbert bases of saturated semigroups `C ∩ Z^d`.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::cone::{parallelepiped_points, Cone, ConeError, LinealitySplit};
use crate::lattice::{saturated_span, IntMatrix, LatticeVector, Sublattice};

/// Minimal generating set of `C ∩ Z^d`, sorted. Units appear with both signs.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<LatticeVector>, ConeError> {
    let d = cone.dim();
    if !cone.is_full_dimensional() {
        let gens = cone.generators();
        if gens.is_empty() {
            return Ok(Vec::new());
        }
        let span = Sublattice::spanned_by(&saturated_span(&gens, d), d)?;
        let basis = span.basis();
        let local: Vec<LatticeVector> =
            gens.iter().map(|g| span.coordinates(g).expect("generator lies in its span")).collect();
        let inner = Cone::from_generators(&local, basis.len())?;
        let embed = IntMatrix::from_vectors(&basis, d)?;
        let mut out: Vec<LatticeVector> = hilbert_basis(&inner)?.iter().map(|y| embed.left_mul(y)).collect();
        out.sort();
        return Ok(out);
    }
    if !cone.is_pointed() {
        let split = LinealitySplit::new(cone)?;
        let units = Sublattice::spanned_by(cone.lineality(), d)?;
        let mut out = BTreeSet::new();
        for l in cone.lineality() {
            out.insert(l.clone());
            out.insert(-l);
        }
        for y in hilbert_basis(&split.pointed)? {
            out.insert(units.reduce(&split.lift_pointed(&y)));
        }
        return Ok(out.into_iter().collect());
    }
    pointed_hilbert_basis(cone)
}

fn pointed_hilbert_basis(cone: &Cone) -> Result<Vec<LatticeVector>, ConeError> {
    if cone.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut candidates: BTreeSet<LatticeVector> = cone.rays().iter().cloned().collect();
    for simplex in cone.triangulate()? {
        for q in parallelepiped_points(&simplex)? {
            if !q.is_zero() {
                candidates.insert(q);
            }
        }
    }
    let u = cone.default_grading()?;
    let mut by_grade: Vec<LatticeVector> = candidates.into_iter().collect();
    by_grade.sort_by(|a, b| a.dot(&u).cmp(&b.dot(&u)).then_with(|| a.cmp(b)));
    let mut basis: Vec<LatticeVector> = Vec::new();
    for x in &by_grade {
        let reducible = basis.iter().any(|y| {
            let r = x - y;
            r.dot(&u).is_positive() && cone.contains(&r)
        });
        if !reducible {
            basis.push(x.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::IntBox;
    use proptest::prelude::*;

    fn lvs(cs: &[&[i64]]) -> Vec<LatticeVector> {
        cs.iter().map(|c| LatticeVector::from_i64s(c)).collect()
    }

    #[test]
    fn small_examples() {
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[1, 2]]), 2).unwrap();
        assert_eq!(hilbert_basis(&c).unwrap(), lvs(&[&[1, 0], &[1, 1], &[1, 2]]));
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[3, 4]]), 2).unwrap();
        assert_eq!(hilbert_basis(&c).unwrap(), lvs(&[&[1, 0], &[1, 1], &[3, 4]]));
        let c = Cone::from_generators(&lvs(&[&[1, 0], &[0, 1], &[0, -1]]), 2).unwrap();
        assert_eq!(hilbert_basis(&c).unwrap(), lvs(&[&[0, -1], &[0, 1], &[1, 0]]));
        assert_eq!(hilbert_basis(&Cone::full(1)).unwrap(), lvs(&[&[-1], &[1]]));
        // a ray inside Z^2
        let c = Cone::from_generators(&lvs(&[&[2, 4]]), 2).unwrap();
        assert_eq!(hilbert_basis(&c).unwrap(), lvs(&[&[1, 2]]));
    }

    /// Exact membership in the monoid generated by `gens`, by descent on a
    /// grading strictly positive on every generator.
    fn generated(gens: &[LatticeVector], x: &LatticeVector, u: &LatticeVector) -> bool {
        if x.is_zero() {
            return true;
        }
        if !x.dot(u).is_positive() {
            return false;
        }
        gens.iter().any(|g| generated(gens, &(x - g), u))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn generates_and_is_minimal(gs in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2..4)) {
            let gs: Vec<LatticeVector> = gs.iter().map(|g| LatticeVector::from_i64s(g)).collect();
            let c = Cone::from_generators(&gs, 2).unwrap();
            prop_assume!(c.is_pointed() && c.is_full_dimensional());
            let hb = hilbert_basis(&c).unwrap();
            let u = c.default_grading().unwrap();
            for p in c.enumerate_lattice_points(&IntBox::cube(2, 4)) {
                prop_assert!(generated(&hb, &p, &u), "{} not generated", p);
            }
            for (i, h) in hb.iter().enumerate() {
                let rest: Vec<LatticeVector> =
                    hb.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
                prop_assert!(!generated(&rest, h, &u), "{} redundant", h);
            }
        }
    }
}
