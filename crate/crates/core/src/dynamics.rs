//! Restriction and induction of spherical and special parameters between a
//! vertex-transitive group and its type-preserving index-2 subgroup, and the
//! change of reference vertex for groups with two vertex orbits.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, q, qi, Q};

fn check_degree(d: usize) -> Result<i64> {
    if d < 3 {
        return Err(Error::InvalidDegree(d));
    }
    Ok(d as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictResult {
    Single {
        #[serde(with = "rat::serde_q")]
        gamma: Q,
    },
    /// The restriction splits as the two exceptional representations `pi_v + pi_v'`.
    ExceptionalPair,
}

/// A square root, exact when the radicand is the square of a rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtValue {
    pub value: f64,
    #[serde(with = "opt_q")]
    pub exact: Option<Q>,
}

impl SqrtValue {
    pub fn of(x: &Q) -> SqrtValue {
        SqrtValue {
            value: rat::to_f64(x).sqrt(),
            exact: rat::exact_sqrt(x),
        }
    }

    pub fn neg(&self) -> SqrtValue {
        SqrtValue {
            value: -self.value,
            exact: self.exact.as_ref().map(|x| -x),
        }
    }
}

mod opt_q {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&crate::rat::fmt(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::rat::parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InduceResult {
    Pair {
        alpha_minus: SqrtValue,
        alpha_plus: SqrtValue,
    },
    /// Induction of an exceptional representation gives the parameter 0.
    ExceptionalImage {
        #[serde(with = "rat::serde_q")]
        alpha: Q,
    },
}

/// Parameter of the restriction to the type-preserving subgroup.
pub fn restrict_to_plus(d: usize, alpha: &Q) -> Result<RestrictResult> {
    let d = check_degree(d)?;
    if alpha.abs() > Q::one() {
        return Err(Error::OutOfDomain(format!(
            "alpha = {} is outside [-1, 1]",
            rat::fmt(alpha)
        )));
    }
    if alpha.is_zero() {
        return Ok(RestrictResult::ExceptionalPair);
    }
    Ok(RestrictResult::Single {
        gamma: (qi(d) * alpha * alpha - qi(1)) / qi(d - 1),
    })
}

/// Parameters of the two summands of the induced representation.
pub fn induce_from_plus(d: usize, gamma: &Q) -> Result<InduceResult> {
    let d = check_degree(d)?;
    let lo = q(-1, d - 1);
    if gamma < &lo || gamma > &Q::one() {
        return Err(Error::OutOfDomain(format!(
            "gamma = {} is outside [{}, 1]",
            rat::fmt(gamma),
            rat::fmt(&lo)
        )));
    }
    if gamma == &lo {
        return Ok(InduceResult::ExceptionalImage { alpha: Q::zero() });
    }
    let plus = SqrtValue::of(&(qi(d - 1) * gamma / qi(d) + q(1, d)));
    Ok(InduceResult::Pair {
        alpha_minus: plus.neg(),
        alpha_plus: plus,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseChange {
    #[serde(with = "rat::serde_q")]
    pub alpha_vprime: Q,
    /// The input was `-1/(d'-1)`, the parameter of the exceptional
    /// representation `pi_v`; the output is then only the limiting value.
    pub exceptional_endpoint: bool,
}

fn affine(d: i64, e: i64, alpha: &Q) -> Q {
    q(d * (e - 1), e * (d - 1)) * alpha + q(d - e, e * (d - 1))
}

/// Converts the parameter read at `v` (degree `d`) into the parameter read at
/// the neighbour `v'` (degree `dprime`). Accepts the closed interval so the
/// endpoint correspondence can be checked; the exceptional endpoint is flagged.
pub fn base_change(d: usize, dprime: usize, alpha_v: &Q) -> Result<BaseChange> {
    let d = check_degree(d)?;
    let e = check_degree(dprime)?;
    let lo = q(-1, e - 1);
    if alpha_v < &lo || alpha_v > &Q::one() {
        return Err(Error::OutOfDomain(format!(
            "alpha_v = {} is outside [{}, 1]",
            rat::fmt(alpha_v),
            rat::fmt(&lo)
        )));
    }
    Ok(BaseChange {
        alpha_vprime: affine(d, e, alpha_v),
        exceptional_endpoint: alpha_v == &lo,
    })
}

/// [`base_change`] restricted to non-exceptional parameters.
pub fn base_change_strict(d: usize, dprime: usize, alpha_v: &Q) -> Result<Q> {
    let b = base_change(d, dprime, alpha_v)?;
    if b.exceptional_endpoint {
        return Err(Error::OutOfDomain(
            "the exceptional representation pi_v has no v'-parameter".into(),
        ));
    }
    Ok(b.alpha_vprime)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialRep {
    /// The special representation of the type-preserving subgroup.
    Sigma,
    SigmaPlus,
    SigmaMinus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialDynamics {
    pub induce: Vec<(SpecialRep, Vec<SpecialRep>)>,
    pub restrict: Vec<(SpecialRep, SpecialRep)>,
}

pub fn special_dynamics(d: usize) -> Result<SpecialDynamics> {
    check_degree(d)?;
    Ok(SpecialDynamics {
        induce: vec![(SpecialRep::Sigma, vec![SpecialRep::SigmaPlus, SpecialRep::SigmaMinus])],
        restrict: vec![
            (SpecialRep::SigmaPlus, SpecialRep::Sigma),
            (SpecialRep::SigmaMinus, SpecialRep::Sigma),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherical::{spherical_sequence, GroupKind};

    #[test]
    fn restrict_examples() {
        assert_eq!(
            restrict_to_plus(4, &qi(1)).unwrap(),
            RestrictResult::Single { gamma: qi(1) }
        );
        assert_eq!(
            restrict_to_plus(4, &q(1, 2)).unwrap(),
            RestrictResult::Single { gamma: qi(0) }
        );
        assert_eq!(restrict_to_plus(4, &qi(0)).unwrap(), RestrictResult::ExceptionalPair);
        assert!(restrict_to_plus(4, &q(3, 2)).is_err());
    }

    #[test]
    fn restriction_is_phi_of_tau_squared() {
        for d in 3..7usize {
            for a in [q(1, 3), q(-2, 5), q(7, 8)] {
                let phi = spherical_sequence(GroupKind::VertexTransitive { d }, &a, 2).unwrap();
                assert_eq!(
                    restrict_to_plus(d, &a).unwrap(),
                    RestrictResult::Single { gamma: phi[2].clone() }
                );
            }
        }
    }

    #[test]
    fn induce_examples() {
        match induce_from_plus(4, &qi(0)).unwrap() {
            InduceResult::Pair {
                alpha_minus,
                alpha_plus,
            } => {
                assert_eq!(alpha_plus.exact, Some(q(1, 2)));
                assert_eq!(alpha_minus.exact, Some(q(-1, 2)));
            }
            r => panic!("{r:?}"),
        }
        assert_eq!(
            induce_from_plus(4, &q(-1, 3)).unwrap(),
            InduceResult::ExceptionalImage { alpha: qi(0) }
        );
        assert!(induce_from_plus(4, &q(-1, 2)).is_err());
        match induce_from_plus(5, &q(1, 2)).unwrap() {
            InduceResult::Pair { alpha_plus, .. } => {
                assert!(alpha_plus.exact.is_none());
                assert!((alpha_plus.value - (0.6f64).sqrt()).abs() < 1e-15);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn base_change_examples() {
        assert_eq!(base_change(4, 6, &qi(1)).unwrap().alpha_vprime, qi(1));
        let b = base_change(4, 6, &q(-1, 5)).unwrap();
        assert_eq!(b.alpha_vprime, q(-1, 3));
        assert!(b.exceptional_endpoint);
        assert!(base_change_strict(4, 6, &q(-1, 5)).is_err());
        assert_eq!(base_change_strict(5, 5, &q(2, 7)).unwrap(), q(2, 7));
        assert!(base_change(4, 6, &q(-1, 4)).is_err());
    }

    #[test]
    fn special_table() {
        let t = special_dynamics(3).unwrap();
        assert_eq!(t.restrict.len(), 2);
        assert!(special_dynamics(2).is_err());
    }
}
