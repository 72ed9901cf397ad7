//! Seeded random instances: pointed full-dimensional cones of rank 2 or 3
//! with primitive rays in `[-6, 6]`, and semigroups built on them.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::lattice::LatticeVector;
use crate::semigroup::{APFamily, AffineSemigroup};

pub const COORD: i64 = 6;

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rank(&mut self) -> usize {
        if self.rng.gen_bool(0.5) {
            2
        } else {
            3
        }
    }

    fn primitive(&mut self, rank: usize) -> LatticeVector {
        loop {
            let v = LatticeVector::new((0..rank).map(|_| BigInt::from(self.rng.gen_range(-COORD..=COORD))).collect());
            if let Ok(p) = v.primitive() {
                if p == v {
                    return p;
                }
            }
        }
    }

    pub fn cone(&mut self, rank: usize) -> Cone {
        loop {
            let k = self.rng.gen_range(rank..=rank + 1);
            let rays: Vec<LatticeVector> = (0..k).map(|_| self.primitive(rank)).collect();
            let Ok(c) = Cone::from_generators(&rays, rank) else { continue };
            if c.is_pointed() && c.is_full_dimensional() {
                return c;
            }
        }
    }

    pub fn saturated(&mut self, rank: usize) -> AffineSemigroup {
        AffineSemigroup::saturated(self.cone(rank)).expect("full-dimensional")
    }

    /// `HB ∖ {h} ∪ {2h, 3h}` for a random Hilbert basis element `h`.
    pub fn generated(&mut self, rank: usize) -> AffineSemigroup {
        let s = self.saturated(rank);
        let hb = s.saturation_hilbert_basis().to_vec();
        let h = hb.choose(&mut self.rng).expect("nonempty").clone();
        let mut gens: Vec<LatticeVector> = hb.into_iter().filter(|g| g != &h).collect();
        gens.push(h.scale(&BigInt::from(2)));
        gens.push(h.scale(&BigInt::from(3)));
        AffineSemigroup::generated(gens).expect("same cone")
    }

    /// The saturation minus `Ĥ_l` for `l` in `0..=1`, or minus the multiples
    /// of one ray not divisible by `q`, or both.
    pub fn hole_patched(&mut self, rank: usize) -> AffineSemigroup {
        loop {
            let s = self.saturated(rank);
            let mode = self.rng.gen_range(0..3);
            let holes = if mode != 1 {
                let l = self.rng.gen_range(0..=1);
                s.sl_subsemigroup(l).expect("saturated input").finite_holes().to_vec()
            } else {
                Vec::new()
            };
            let families = if mode != 0 {
                let r = s.cone().rays().choose(&mut self.rng).expect("pointed").clone();
                let q = self.rng.gen_range(2i64..=3);
                (1..q).map(|t| APFamily::new(r.scale(&BigInt::from(t)), r.scale(&BigInt::from(q))).expect("same dim")).collect()
            } else {
                Vec::new()
            };
            if let Ok(t) = AffineSemigroup::hole_patched(s.cone().clone(), holes, families) {
                return t;
            }
        }
    }

    /// A Generated or HolePatched instance of rank 2 or 3.
    pub fn instance(&mut self) -> AffineSemigroup {
        let rank = self.rank();
        if self.rng.gen_bool(0.5) {
            self.generated(rank)
        } else {
            self.hole_patched(rank)
        }
    }

    pub fn gen_range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::wire::SemigroupSpec;

    #[test]
    fn seeded_and_valid() {
        let a: Vec<SemigroupSpec> = {
            let mut g = Generator::new(7);
            (0..6).map(|_| SemigroupSpec::of(&g.instance())).collect()
        };
        let b: Vec<SemigroupSpec> = {
            let mut g = Generator::new(7);
            (0..6).map(|_| SemigroupSpec::of(&g.instance())).collect()
        };
        assert_eq!(a, b);
        for s in &a {
            let t = s.build().unwrap();
            assert!(t.is_pointed() && t.cone().is_full_dimensional());
        }
    }
}
