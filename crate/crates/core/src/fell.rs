//! A finite model of the dual space restricted to spherical and special
//! points, with placeholder cuspidal points.
//!
//! Every non-cuspidal point carries an anchor in the parameter interval: a
//! sequence of spherical points `Spherical(alpha_n)` converges to a point
//! exactly when `alpha_n` tends to that point's anchor. Two distinct points
//! cannot be separated by open sets exactly when they share an anchor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, q, qi, Q};
use crate::spherical::{param_interval, GroupKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualPoint {
    Spherical {
        #[serde(with = "rat::serde_q")]
        alpha: Q,
    },
    ExceptionalV,
    ExceptionalVprime,
    SpecialPlus,
    SpecialMinus,
    SpecialSigma,
    Cuspidal {
        id: u32,
    },
}

impl fmt::Display for DualPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualPoint::Spherical { alpha } if alpha == &qi(1) => write!(f, "trivial"),
            DualPoint::Spherical { alpha } => write!(f, "spherical({})", rat::fmt(alpha)),
            DualPoint::ExceptionalV => write!(f, "pi_v"),
            DualPoint::ExceptionalVprime => write!(f, "pi_v'"),
            DualPoint::SpecialPlus => write!(f, "sigma+"),
            DualPoint::SpecialMinus => write!(f, "sigma-"),
            DualPoint::SpecialSigma => write!(f, "sigma"),
            DualPoint::Cuspidal { id } => write!(f, "cuspidal({id})"),
        }
    }
}

impl DualPoint {
    pub fn is_spherical(&self) -> bool {
        matches!(self, DualPoint::Spherical { .. })
    }

    pub fn is_cuspidal(&self) -> bool {
        matches!(self, DualPoint::Cuspidal { .. })
    }
}

fn is_vt(kind: GroupKind) -> bool {
    matches!(kind, GroupKind::VertexTransitive { .. })
}

/// Whether `alpha` labels an irreducible spherical point of the model.
fn spherical_param(kind: GroupKind, alpha: &Q) -> Result<bool> {
    let i = param_interval(kind)?;
    Ok(i.contains(alpha) && (is_vt(kind) || alpha != &i.lo))
}

/// Parameter a sequence of spherical points must approach to converge to `p`;
/// `None` for cuspidal points.
pub fn anchor(kind: GroupKind, p: &DualPoint) -> Result<Option<Q>> {
    let lo = param_interval(kind)?.lo;
    let bad = || Err(Error::KindMismatch(format!("{p} does not exist for {kind:?}")));
    Ok(match (p, is_vt(kind)) {
        (DualPoint::Spherical { alpha }, _) => {
            if !spherical_param(kind, alpha)? {
                return bad();
            }
            Some(alpha.clone())
        }
        (DualPoint::SpecialPlus, true) => Some(qi(-1)),
        (DualPoint::SpecialMinus, true) => Some(qi(1)),
        (DualPoint::SpecialSigma, false) => Some(qi(1)),
        (DualPoint::ExceptionalV | DualPoint::ExceptionalVprime, false) => Some(lo),
        (DualPoint::Cuspidal { .. }, _) => None,
        _ => return bad(),
    })
}

/// Points that are not spherical and not cuspidal.
pub fn non_spherical_points(kind: GroupKind) -> Vec<DualPoint> {
    if is_vt(kind) {
        vec![DualPoint::SpecialPlus, DualPoint::SpecialMinus]
    } else {
        vec![
            DualPoint::ExceptionalV,
            DualPoint::ExceptionalVprime,
            DualPoint::SpecialSigma,
        ]
    }
}

/// All limits of `Spherical(alpha_n)` as `alpha_n -> alpha_star`.
pub fn limit_set(kind: GroupKind, alpha_star: &Q) -> Result<BTreeSet<DualPoint>> {
    let i = param_interval(kind)?;
    if !i.contains(alpha_star) {
        return Err(Error::OutOfDomain(format!(
            "alpha* = {} is outside [{}, {}]",
            rat::fmt(alpha_star),
            rat::fmt(&i.lo),
            rat::fmt(&i.hi)
        )));
    }
    let mut out = BTreeSet::new();
    if spherical_param(kind, alpha_star)? {
        out.insert(DualPoint::Spherical {
            alpha: alpha_star.clone(),
        });
    }
    for p in non_spherical_points(kind) {
        if anchor(kind, &p)?.as_ref() == Some(alpha_star) {
            out.insert(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualModel {
    pub kind: GroupKind,
    pub cuspidal_ids: Vec<u32>,
    /// Cuspidal points are taken to be integrable and square-integrable.
    pub cuspidal_assumption: bool,
    pub points: Vec<DualPoint>,
}

/// Builds the model with `cuspidal_count` placeholder cuspidal points and the
/// spherical points at the parameters `lo + k (hi - lo) / 8`.
pub fn dual_model(kind: GroupKind, cuspidal_count: u32) -> Result<DualModel> {
    let i = param_interval(kind)?;
    let mut points = Vec::new();
    for k in 0..=8 {
        let alpha = &i.lo + (&i.hi - &i.lo) * q(k, 8);
        if spherical_param(kind, &alpha)? {
            points.push(DualPoint::Spherical { alpha });
        }
    }
    if !points.iter().any(|p| p == &DualPoint::Spherical { alpha: qi(0) }) && spherical_param(kind, &qi(0))? {
        points.push(DualPoint::Spherical { alpha: qi(0) });
    }
    points.extend(non_spherical_points(kind));
    points.extend((0..cuspidal_count).map(|id| DualPoint::Cuspidal { id }));
    points.sort();
    Ok(DualModel {
        kind,
        cuspidal_ids: (0..cuspidal_count).collect(),
        cuspidal_assumption: true,
        points,
    })
}

impl DualModel {
    pub fn with_assumption(mut self, holds: bool) -> Self {
        self.cuspidal_assumption = holds;
        self
    }

    pub fn anchor(&self, p: &DualPoint) -> Result<Option<Q>> {
        anchor(self.kind, p)
    }

    /// Closure of `{p}` inside the model.
    pub fn closure(&self, p: &DualPoint) -> Result<BTreeSet<DualPoint>> {
        // only varying spherical sequences have several limits, so points are closed
        self.anchor(p)?;
        Ok(BTreeSet::from([p.clone()]))
    }

    pub fn closure_relation(&self) -> Result<BTreeMap<DualPoint, BTreeSet<DualPoint>>> {
        self.points.iter().map(|p| Ok((p.clone(), self.closure(p)?))).collect()
    }

    /// `{p}` is open: no spherical sequence converges to it.
    pub fn is_open_singleton(&self, p: &DualPoint) -> Result<bool> {
        Ok(match self.anchor(p)? {
            None => self.cuspidal_assumption,
            Some(_) => false,
        })
    }

    /// Distinct points that no pair of disjoint open sets separates.
    pub fn non_hausdorff_pairs(&self) -> Result<Vec<(DualPoint, DualPoint)>> {
        let mut out = Vec::new();
        let pts = self.all_points_with_limits()?;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                let (x, y) = (self.anchor(a)?, self.anchor(b)?);
                if x.is_some() && x == y {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        Ok(out)
    }

    fn all_points_with_limits(&self) -> Result<Vec<DualPoint>> {
        let mut set: BTreeSet<DualPoint> = self.points.iter().cloned().collect();
        for p in non_spherical_points(self.kind) {
            set.extend(limit_set(self.kind, &self.anchor(&p)?.unwrap())?);
        }
        Ok(set.into_iter().collect())
    }

    /// Points that cannot be separated from the trivial representation.
    pub fn cortex(&self) -> Result<BTreeSet<DualPoint>> {
        limit_set(self.kind, &qi(1))
    }

    /// Complement of the special and exceptional points.
    pub fn dense_open_subset(&self) -> Vec<DualPoint> {
        let removed = non_spherical_points(self.kind);
        self.points.iter().filter(|p| !removed.contains(p)).cloned().collect()
    }

    /// Every removed point is a limit of spherical points, so the subset is dense;
    /// it is open because finitely many closed points were removed.
    pub fn dense_open_subset_is_dense(&self) -> Result<bool> {
        for p in non_spherical_points(self.kind) {
            let a = self.anchor(&p)?.unwrap();
            if !limit_set(self.kind, &a)?.contains(&p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let closure: BTreeMap<String, Vec<String>> = self
            .closure_relation()?
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|p| p.to_string()).collect()))
            .collect();
        let pairs: Vec<[String; 2]> = self
            .non_hausdorff_pairs()?
            .into_iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        Ok(serde_json::json!({
            "kind": self.kind,
            "cuspidal_assumption": self.cuspidal_assumption,
            "points": self.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "closure_relation": closure,
            "non_hausdorff_pairs": pairs,
            "cortex": self.cortex()?.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "dense_open_subset": self.dense_open_subset().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }))
    }
}

/// The two non-Hausdorff pairs of `kind`.
pub fn non_hausdorff_pairs(kind: GroupKind) -> Result<Vec<(DualPoint, DualPoint)>> {
    dual_model(kind, 0)?.non_hausdorff_pairs()
}

pub fn cortex(kind: GroupKind) -> Result<BTreeSet<DualPoint>> {
    dual_model(kind, 0)?.cortex()
}
