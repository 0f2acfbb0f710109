//! Special functions: the `Fix(e)`-bi-invariant functions annihilated by
//! averaging over vertex stabilizers, their defining relations and their
//! L2 norms.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::haar::{edge_coset_measure, CosetFamily, CosetTag};
use crate::rat::{self, pow, q, qi, Q};
use crate::tree::{Transitivity, TreeParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    /// Vertex-transitive, even under edge inversions.
    VtPlus,
    /// Vertex-transitive, odd under edge inversions.
    VtMinus,
    /// The unique special function of a group with two vertex orbits.
    TwoOrbitSigma,
}

impl SpecialKind {
    fn check(self, params: &TreeParams) -> Result<()> {
        let want = match self {
            SpecialKind::VtPlus | SpecialKind::VtMinus => Transitivity::VertexTransitive,
            SpecialKind::TwoOrbitSigma => Transitivity::TwoOrbits,
        };
        if params.transitivity() != want {
            return Err(Error::KindMismatch(format!("{self:?} needs a {want:?} group")));
        }
        Ok(())
    }

    fn epsilon(self) -> i64 {
        match self {
            SpecialKind::VtMinus => -1,
            _ => 1,
        }
    }
}

/// Values of a special function on double-coset representatives, `|n| <= depth`.
///
/// Two-orbit tables use `v` = the parity-0 endpoint (degree `d0`), `d' = d1`;
/// `tau_m_kv[m]` is the value at `tau^m k_v` and `tau_negm_kv[m]` the value at
/// `tau^-(m-1) k_v`, both for `1 <= m <= depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialTable {
    pub kind: SpecialKind,
    pub params: TreeParams,
    pub depth: u32,
    pub tau: BTreeMap<i64, Q>,
    pub tau_h: BTreeMap<i64, Q>,
    pub tau_m_kv: BTreeMap<u32, Q>,
    pub tau_negm_kv: BTreeMap<u32, Q>,
}

impl SpecialTable {
    pub fn value(&self, tag: CosetTag) -> Option<&Q> {
        match tag.normalized() {
            CosetTag::EdgeCoset(n) => self.tau.get(&n),
            CosetTag::EdgeCosetInversion(n) => self.tau_h.get(&n),
            CosetTag::EdgeCosetKv(m) => self.tau_m_kv.get(&(m as u32)),
            CosetTag::EdgeCosetKvNeg(m) => self.tau_negm_kv.get(&m),
            CosetTag::VertexCoset(_) => None,
        }
    }

    /// Every tabulated coset with its value.
    pub fn entries(&self) -> Vec<(CosetTag, Q)> {
        let mut out: Vec<(CosetTag, Q)> = self
            .tau
            .iter()
            .map(|(&n, v)| (CosetTag::EdgeCoset(n), v.clone()))
            .collect();
        out.extend(
            self.tau_h
                .iter()
                .map(|(&n, v)| (CosetTag::EdgeCosetInversion(n), v.clone())),
        );
        out.extend(
            self.tau_m_kv
                .iter()
                .map(|(&m, v)| (CosetTag::EdgeCosetKv(m as i64), v.clone())),
        );
        out.extend(
            self.tau_negm_kv
                .iter()
                .map(|(&m, v)| (CosetTag::EdgeCosetKvNeg(m), v.clone())),
        );
        out
    }

    pub fn to_json(&self) -> Value {
        fn obj<K: ToString>(m: &BTreeMap<K, Q>) -> Value {
            Value::Object(
                m.iter()
                    .map(|(k, v)| (k.to_string(), Value::String(rat::fmt(v))))
                    .collect(),
            )
        }
        let mut v = json!({
            "kind": self.kind,
            "params": self.params,
            "depth": self.depth,
            "tau_n": obj(&self.tau),
        });
        match self.kind {
            SpecialKind::TwoOrbitSigma => {
                v["tau_m_kv"] = obj(&self.tau_m_kv);
                v["tau_negm_kv"] = obj(&self.tau_negm_kv);
            }
            _ => v["tau_n_h"] = obj(&self.tau_h),
        }
        v
    }
}

/// Tabulates the special function of `kind` up to `|n| <= n_max`, with `phi(1) = 1`.
pub fn special_sequence(kind: SpecialKind, params: &TreeParams, n_max: u32) -> Result<SpecialTable> {
    kind.check(params)?;
    let mut t = SpecialTable {
        kind,
        params: *params,
        depth: n_max,
        tau: BTreeMap::new(),
        tau_h: BTreeMap::new(),
        tau_m_kv: BTreeMap::new(),
        tau_negm_kv: BTreeMap::new(),
    };
    let n_max = n_max as i64;
    match kind {
        SpecialKind::VtPlus | SpecialKind::VtMinus => {
            let d = params.d0() as i64;
            let eps = kind.epsilon();
            let r = q(-1, d - 1);
            for n in -n_max..=n_max {
                let base = pow(&r, n.abs());
                // the inversion contributes eps once per odd exponent
                let sign_tau = if n.rem_euclid(2) == 1 { eps } else { 1 };
                let sign_tau_h = if n.rem_euclid(2) == 0 { eps } else { 1 };
                t.tau.insert(n, &base * qi(sign_tau));
                t.tau_h.insert(n, &base * qi(sign_tau_h));
            }
        }
        SpecialKind::TwoOrbitSigma => {
            let (d, e) = (params.d0() as i64, params.d1() as i64);
            let ratio = q(1, (d - 1) * (e - 1));
            for n in -n_max..=n_max {
                t.tau.insert(n, pow(&ratio, n.abs()));
            }
            for m in 1..=n_max {
                t.tau_m_kv.insert(m as u32, -(pow(&ratio, m - 1) / qi(e - 1)));
                t.tau_negm_kv.insert(m as u32, -(pow(&ratio, m - 1) / qi(d - 1)));
            }
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub holds: bool,
    /// Name of the first failing relation and the index `n` where it fails.
    pub first_failure: Option<(String, i64)>,
}

/// Checks the normalization and the averaging identities at both endpoints
/// of the reference edge for every `1 <= n <= depth`.
pub fn verify_defining_relations(t: &SpecialTable) -> RelationReport {
    let fail = |name: &str, n: i64| RelationReport {
        holds: false,
        first_failure: Some((name.to_string(), n)),
    };
    let get = |m: &BTreeMap<i64, Q>, k: i64| m.get(&k).cloned();
    if t.tau.get(&0) != Some(&Q::one()) {
        return fail("phi(1) = 1", 0);
    }
    match t.kind {
        SpecialKind::VtPlus | SpecialKind::VtMinus => {
            if t.tau_h.get(&0) != Some(&qi(t.kind.epsilon())) {
                return fail("phi(h) = epsilon", 0);
            }
            let d1 = qi(t.params.d0() as i64 - 1);
            for n in 1..=t.depth as i64 {
                let rel: [(&str, Option<Q>, Option<Q>); 4] = [
                    (
                        "(d-1) phi(tau^n) + phi(tau^(n-1) h) = 0",
                        get(&t.tau, n),
                        get(&t.tau_h, n - 1),
                    ),
                    (
                        "(d-1) phi(tau^-n h) + phi(tau^-(n-1)) = 0",
                        get(&t.tau_h, -n),
                        get(&t.tau, -(n - 1)),
                    ),
                    (
                        "(d-1) phi(tau^n h) + phi(tau^(n-1)) = 0",
                        get(&t.tau_h, n),
                        get(&t.tau, n - 1),
                    ),
                    (
                        "(d-1) phi(tau^-n) + phi(tau^-(n-1) h) = 0",
                        get(&t.tau, -n),
                        get(&t.tau_h, -(n - 1)),
                    ),
                ];
                for (name, a, b) in rel {
                    match (a, b) {
                        (Some(a), Some(b)) if (&d1 * &a + &b).is_zero() => {}
                        _ => return fail(name, n),
                    }
                }
            }
        }
        SpecialKind::TwoOrbitSigma => {
            let d1 = qi(t.params.d0() as i64 - 1);
            let e1 = qi(t.params.d1() as i64 - 1);
            let kv = |m: i64| t.tau_m_kv.get(&(m as u32)).cloned();
            let kvn = |m: i64| t.tau_negm_kv.get(&(m as u32)).cloned();
            for n in 1..=t.depth as i64 {
                let rel: [(&str, &Q, Option<Q>, Option<Q>); 4] = [
                    // averaging over Fix(v)
                    ("(d-1) phi(tau^n) + phi(tau^n k_v) = 0", &d1, get(&t.tau, n), kv(n)),
                    (
                        "(d-1) phi(tau^-(n-1) k_v) + phi(tau^-(n-1)) = 0",
                        &d1,
                        kvn(n),
                        get(&t.tau, -(n - 1)),
                    ),
                    // averaging over Fix(v')
                    (
                        "(d'-1) phi(tau^n k_v) + phi(tau^(n-1)) = 0",
                        &e1,
                        kv(n),
                        get(&t.tau, n - 1),
                    ),
                    (
                        "(d'-1) phi(tau^-n) + phi(tau^-(n-1) k_v) = 0",
                        &e1,
                        get(&t.tau, -n),
                        kvn(n),
                    ),
                ];
                for (name, c, a, b) in rel {
                    match (a, b) {
                        (Some(a), Some(b)) if (c * &a + &b).is_zero() => {}
                        _ => return fail(name, n),
                    }
                }
            }
        }
    }
    RelationReport {
        holds: true,
        first_failure: None,
    }
}

/// Sum of `|phi|^2 * mu` over the double cosets with index up to `n_max`,
/// with `mu(Fix(e)) = 1`.
pub fn l2_partial(kind: SpecialKind, params: &TreeParams, n_max: u32) -> Result<Q> {
    let t = special_sequence(kind, params, n_max)?;
    let mut acc = Q::zero();
    for (tag, v) in t.entries() {
        let mu = edge_coset_measure(&CosetFamily { params: *params, tag })?.value;
        acc += &v * &v * mu;
    }
    Ok(acc)
}

/// Limit of [`l2_partial`] as the index bound grows.
pub fn l2_closed_form(kind: SpecialKind, params: &TreeParams) -> Result<Q> {
    kind.check(params)?;
    let (d, e) = (params.d0() as i64, params.d1() as i64);
    Ok(match kind {
        SpecialKind::VtPlus | SpecialKind::VtMinus => q(2 * d, d - 2),
        SpecialKind::TwoOrbitSigma => {
            let r = q(1, (d - 1) * (e - 1));
            let one = Q::one();
            ((&one + &r) + q(1, d - 1) + q(1, e - 1)) / (one - r)
        }
    })
}

/// Constant `C` with `l2_closed_form - l2_partial(N) <= C r^N`, where `r` is
/// the decay ratio returned alongside.
pub fn l2_tail_bound(kind: SpecialKind, params: &TreeParams) -> Result<(Q, Q)> {
    kind.check(params)?;
    let (d, e) = (params.d0() as i64, params.d1() as i64);
    Ok(match kind {
        SpecialKind::VtPlus | SpecialKind::VtMinus => {
            let r = q(1, d - 1);
            (qi(4) * &r / (Q::one() - &r), r)
        }
        SpecialKind::TwoOrbitSigma => {
            let r = q(1, (d - 1) * (e - 1));
            ((qi(2) * &r + q(1, d - 1) + q(1, e - 1)) / (Q::one() - &r), r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vt(d: usize) -> TreeParams {
        TreeParams::vertex_transitive(d).unwrap()
    }

    #[test]
    fn vt_small_values() {
        let t = special_sequence(SpecialKind::VtMinus, &vt(3), 2).unwrap();
        assert_eq!(t.tau[&1], q(1, 2));
        assert_eq!(t.tau[&-1], q(1, 2));
        assert_eq!(t.tau[&2], q(1, 4));
        assert_eq!(t.tau_h[&0], qi(-1));
        assert_eq!(t.tau_h[&1], q(-1, 2));
        let p = special_sequence(SpecialKind::VtPlus, &vt(3), 2).unwrap();
        assert_eq!(p.tau[&1], q(-1, 2));
        assert_eq!(p.tau_h[&0], qi(1));
    }

    #[test]
    fn two_orbit_small_values() {
        let p = TreeParams::two_orbits(3, 4).unwrap();
        let t = special_sequence(SpecialKind::TwoOrbitSigma, &p, 2).unwrap();
        assert_eq!(t.tau[&1], q(1, 6));
        assert_eq!(t.tau_m_kv[&1], q(-1, 3));
        assert_eq!(t.tau_m_kv[&2], q(-1, 18));
        assert_eq!(t.tau_negm_kv[&1], q(-1, 2));
        assert_eq!(t.tau_negm_kv[&2], q(-1, 12));
    }

    #[test]
    fn relations_hold_and_detect_perturbation() {
        for (k, p) in [
            (SpecialKind::VtPlus, vt(3)),
            (SpecialKind::VtMinus, vt(5)),
            (SpecialKind::TwoOrbitSigma, TreeParams::two_orbits(3, 5).unwrap()),
        ] {
            let mut t = special_sequence(k, &p, 8).unwrap();
            assert!(verify_defining_relations(&t).holds);
            *t.tau.get_mut(&1).unwrap() += q(1, 1000);
            let r = verify_defining_relations(&t);
            assert!(!r.holds);
            assert_eq!(r.first_failure.unwrap().1, 1);
        }
    }

    #[test]
    fn kind_mismatch() {
        assert!(special_sequence(SpecialKind::TwoOrbitSigma, &vt(3), 2).is_err());
        assert!(special_sequence(SpecialKind::VtPlus, &TreeParams::two_orbits(3, 3).unwrap(), 2).is_err());
    }

    #[test]
    fn l2_values() {
        assert_eq!(l2_partial(SpecialKind::VtPlus, &vt(3), 0).unwrap(), qi(2));
        assert_eq!(l2_closed_form(SpecialKind::VtPlus, &vt(3)).unwrap(), qi(6));
        let p = TreeParams::two_orbits(3, 3).unwrap();
        assert_eq!(l2_partial(SpecialKind::TwoOrbitSigma, &p, 0).unwrap(), qi(1));
        // tau^0, tau^(+-1) at 1/4 each, and the two m = 1 families at 1/2 each
        assert_eq!(
            l2_partial(SpecialKind::TwoOrbitSigma, &p, 1).unwrap(),
            qi(1) + q(2, 4) + q(1, 2) + q(1, 2)
        );
    }

    #[test]
    fn json_keys() {
        let t = special_sequence(SpecialKind::TwoOrbitSigma, &TreeParams::two_orbits(3, 3).unwrap(), 1).unwrap();
        let j = t.to_json();
        assert_eq!(j["tau_m_kv"]["1"], "-1/2");
        assert!(j.get("tau_n_h").is_none());
    }
}
