//! JSON wire format for semigroups and report values.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::cone::{Cone, ConeError};
use crate::lattice::LatticeVector;
use crate::semigroup::{APFamily, AffineSemigroup, Representation, SemigroupError};

/// An integer that is written as a JSON number when it fits in `i64` and
/// as a decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WireInt(pub BigInt);

impl Serialize for WireInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for WireInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = WireInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<WireInt, E> {
                Ok(WireInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<WireInt, E> {
                Ok(WireInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<WireInt, E> {
                v.parse().map(WireInt).map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub type WireVector = Vec<WireInt>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleRaySpec {
    pub base: WireVector,
    pub step: WireVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepresentationSpec {
    Generated {
        generators: Vec<WireVector>,
    },
    Saturated {
        cone_generators: Vec<WireVector>,
    },
    HolePatched {
        cone_generators: Vec<WireVector>,
        #[serde(default)]
        finite_holes: Vec<WireVector>,
        #[serde(default)]
        hole_rays: Vec<HoleRaySpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupSpec {
    pub rank: usize,
    pub representation: RepresentationSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    Json(String),
    RankMismatch { expected: usize, found: usize },
    Invalid(SemigroupError),
}

impl SpecError {
    /// Short machine-readable reason.
    pub fn kind(&self) -> &'static str {
        match self {
            SpecError::Json(_) => "malformed_json",
            SpecError::RankMismatch { .. } => "rank_mismatch",
            SpecError::Invalid(e) => match e {
                SemigroupError::NotClosed { .. } => "not_closed",
                SemigroupError::NotFullDimensional => "not_full_dimensional",
                SemigroupError::HolesInNonPointedCone => "holes_in_non_pointed_cone",
                SemigroupError::HoleOutsideCone(_) => "hole_outside_cone",
                SemigroupError::StepOutsideCone(_) => "step_outside_cone",
                SemigroupError::RayRemoved(_) => "ray_removed",
                SemigroupError::NoGenerators => "no_generators",
                _ => "invalid_semigroup",
            },
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            SpecError::Json(m) => write!(f, "{m}"),
            SpecError::RankMismatch { expected, found } => {
                write!(f, "rank is {expected} but a vector has {found} coordinates")
            }
            SpecError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<SemigroupError> for SpecError {
    fn from(e: SemigroupError) -> Self {
        SpecError::Invalid(e)
    }
}

impl From<ConeError> for SpecError {
    fn from(e: ConeError) -> Self {
        SpecError::Invalid(SemigroupError::Cone(e))
    }
}

pub fn to_wire(v: &LatticeVector) -> WireVector {
    v.coords().iter().cloned().map(WireInt).collect()
}

fn from_wire(v: &[WireInt], rank: usize) -> Result<LatticeVector, SpecError> {
    if v.len() != rank {
        return Err(SpecError::RankMismatch { expected: rank, found: v.len() });
    }
    Ok(LatticeVector::new(v.iter().map(|x| x.0.clone()).collect()))
}

fn from_wire_all(vs: &[WireVector], rank: usize) -> Result<Vec<LatticeVector>, SpecError> {
    vs.iter().map(|v| from_wire(v, rank)).collect()
}

fn sorted_wire(vs: &[LatticeVector]) -> Vec<WireVector> {
    let mut vs = vs.to_vec();
    vs.sort();
    vs.iter().map(to_wire).collect()
}

impl SemigroupSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))
    }

    pub fn build(&self) -> Result<AffineSemigroup, SpecError> {
        let n = self.rank;
        match &self.representation {
            RepresentationSpec::Generated { generators } => Ok(AffineSemigroup::generated(from_wire_all(generators, n)?)?),
            RepresentationSpec::Saturated { cone_generators } => {
                Ok(AffineSemigroup::saturated(Cone::from_generators(&from_wire_all(cone_generators, n)?, n)?)?)
            }
            RepresentationSpec::HolePatched { cone_generators, finite_holes, hole_rays } => {
                let cone = Cone::from_generators(&from_wire_all(cone_generators, n)?, n)?;
                let families = hole_rays
                    .iter()
                    .map(|f| Ok(APFamily::new(from_wire(&f.base, n)?, from_wire(&f.step, n)?)?))
                    .collect::<Result<Vec<_>, SpecError>>()?;
                Ok(AffineSemigroup::hole_patched(cone, from_wire_all(finite_holes, n)?, families)?)
            }
        }
    }

    /// Canonical spec: sorted vector lists, cones given by their rays and lineality.
    pub fn of(s: &AffineSemigroup) -> Self {
        let representation = match s.representation() {
            Representation::Generated { gens } => RepresentationSpec::Generated { generators: sorted_wire(gens) },
            Representation::Saturated { cone } => RepresentationSpec::Saturated { cone_generators: sorted_wire(&cone.generators()) },
            Representation::HolePatched { cone, finite_holes, hole_families } => RepresentationSpec::HolePatched {
                cone_generators: sorted_wire(&cone.generators()),
                finite_holes: sorted_wire(finite_holes),
                hole_rays: hole_families.iter().map(|f| HoleRaySpec { base: to_wire(&f.base), step: to_wire(&f.step) }).collect(),
            },
        };
        SemigroupSpec { rank: s.dim(), representation }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("specs serialize")
    }
}

pub fn vector(v: &LatticeVector) -> Value {
    json!(to_wire(v))
}

pub fn vectors(vs: &[LatticeVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

pub fn integer(x: &BigInt) -> Value {
    json!(WireInt(x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip() {
        let text = r#"{"rank":2,"representation":{"kind":"hole_patched","cone_generators":[[1,2],[1,0]],"hole_rays":[{"base":[1,2],"step":[2,4]}]}}"#;
        let spec = SemigroupSpec::parse(text).unwrap();
        let s = spec.build().unwrap();
        let canon = SemigroupSpec::of(&s);
        assert_eq!(canon.build().unwrap(), s);
        let again = SemigroupSpec::parse(&serde_json::to_string(&canon).unwrap()).unwrap();
        assert_eq!(again, canon);
    }

    #[test]
    fn errors_are_named() {
        assert_eq!(SemigroupSpec::parse("{").unwrap_err().kind(), "malformed_json");
        let bad = SemigroupSpec::parse(r#"{"rank":3,"representation":{"kind":"generated","generators":[[1,0]]}}"#).unwrap();
        assert_eq!(bad.build().unwrap_err().kind(), "rank_mismatch");
        let open = SemigroupSpec::parse(
            r#"{"rank":2,"representation":{"kind":"hole_patched","cone_generators":[[1,0],[0,1]],"finite_holes":[[1,1]]}}"#,
        )
        .unwrap();
        assert_eq!(open.build().unwrap_err().kind(), "not_closed");
    }

    #[test]
    fn big_integers_are_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = serde_json::to_string(&WireInt(big.clone())).unwrap();
        assert_eq!(v, "\"123456789012345678901234567890\"");
        let back: WireInt = serde_json::from_str(&v).unwrap();
        assert_eq!(back.0, big);
        assert_eq!(serde_json::to_string(&WireInt(BigInt::from(-3))).unwrap(), "-3");
    }
}
