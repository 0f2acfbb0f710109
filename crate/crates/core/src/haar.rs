//! Haar measures of double cosets, normalized by a vertex or an edge
//! stabilizer, and a brute-force check of the coset decomposition on a ball.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, Q};
use crate::tree::{
    enumerate_automorphisms, sphere_count, Ball, BallAutomorphism, CenterSpec, Parity, Transitivity, TreeParams,
    VertexId,
};

pub fn sphere_size(params: &TreeParams, parity: Parity, n: usize) -> BigUint {
    sphere_count(params, parity, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// The stabilizer of a vertex has measure 1.
    FixVertex,
    /// The stabilizer of an edge has measure 1.
    FixEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureValue {
    #[serde(with = "rat::serde_q")]
    pub value: Q,
    pub normalization: Normalization,
}

/// Double-coset families. For two-orbit groups `v` is the parity-0 endpoint
/// of the reference edge; `EdgeCosetKvNeg(m)` stands for `tau^-(m-1) k_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetTag {
    VertexCoset(u32),
    EdgeCoset(i64),
    EdgeCosetInversion(i64),
    EdgeCosetKv(i64),
    EdgeCosetKvNeg(u32),
}

impl CosetTag {
    pub fn family_name(&self) -> &'static str {
        match self {
            CosetTag::VertexCoset(_) => "vertex_coset",
            CosetTag::EdgeCoset(_) => "edge_coset",
            CosetTag::EdgeCosetInversion(_) => "edge_coset_inversion",
            CosetTag::EdgeCosetKv(_) => "edge_coset_kv",
            CosetTag::EdgeCosetKvNeg(_) => "edge_coset_kv_neg",
        }
    }

    pub fn index(&self) -> i64 {
        match *self {
            CosetTag::VertexCoset(n) | CosetTag::EdgeCosetKvNeg(n) => n as i64,
            CosetTag::EdgeCoset(n) | CosetTag::EdgeCosetInversion(n) | CosetTag::EdgeCosetKv(n) => n,
        }
    }

    /// Rewrites `EdgeCosetKv(n)` with `n <= 0` as `EdgeCosetKvNeg(1 - n)`.
    pub fn normalized(self) -> CosetTag {
        match self {
            CosetTag::EdgeCosetKv(n) if n <= 0 => CosetTag::EdgeCosetKvNeg((1 - n) as u32),
            t => t,
        }
    }
}

impl fmt::Display for CosetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family_name(), self.index())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetFamily {
    pub params: TreeParams,
    pub tag: CosetTag,
}

fn int(n: BigUint) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

fn upow(b: usize, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(b), e as usize)
}

/// `mu(Fix(v) tau^n Fix(v))` with `mu(Fix(v)) = 1`, `v` of parity `parity`.
pub fn vertex_coset_measure(params: &TreeParams, parity: Parity, n: usize) -> MeasureValue {
    let step = match params.transitivity() {
        Transitivity::VertexTransitive => 1,
        Transitivity::TwoOrbits => 2,
    };
    MeasureValue {
        value: int(sphere_size(params, parity, n * step)),
        normalization: Normalization::FixVertex,
    }
}

/// Measure of an edge double coset with `mu(Fix(e)) = 1`.
pub fn edge_coset_measure(family: &CosetFamily) -> Result<MeasureValue> {
    let p = &family.params;
    let (a, b) = (p.d0() - 1, p.d1() - 1);
    let value = match (p.transitivity(), family.tag.normalized()) {
        (_, CosetTag::VertexCoset(_)) => {
            return Err(Error::KindMismatch("vertex cosets use vertex_coset_measure".into()));
        }
        (Transitivity::VertexTransitive, CosetTag::EdgeCoset(n) | CosetTag::EdgeCosetInversion(n)) => {
            upow(a, n.unsigned_abs())
        }
        (Transitivity::TwoOrbits, CosetTag::EdgeCoset(n)) => upow(a * b, n.unsigned_abs()),
        (Transitivity::TwoOrbits, CosetTag::EdgeCosetKv(m)) => upow(b, m as u64) * upow(a, m as u64 - 1),
        (Transitivity::TwoOrbits, CosetTag::EdgeCosetKvNeg(m)) => {
            if m == 0 {
                return Err(Error::OutOfDomain("edge_coset_kv_neg needs m >= 1".into()));
            }
            upow(a, m as u64) * upow(b, m as u64 - 1)
        }
        (t, tag) => {
            return Err(Error::KindMismatch(format!("{tag} does not occur for {t:?} groups")));
        }
    };
    Ok(MeasureValue {
        value: int(value),
        normalization: Normalization::FixEdge,
    })
}

/// Any family, measured with its natural normalization (vertex families use a parity-0 vertex).
pub fn measure(family: &CosetFamily) -> Result<MeasureValue> {
    match family.tag {
        CosetTag::VertexCoset(n) => Ok(vertex_coset_measure(&family.params, Parity::Zero, n as usize)),
        _ => edge_coset_measure(family),
    }
}

/// Families with index up to `n_max`, in a fixed order.
pub fn families(params: &TreeParams, n_max: u32) -> Vec<CosetTag> {
    let n = n_max as i64;
    let mut out: Vec<CosetTag> = (0..=n_max).map(CosetTag::VertexCoset).collect();
    out.extend((-n..=n).map(CosetTag::EdgeCoset));
    match params.transitivity() {
        Transitivity::VertexTransitive => out.extend((-n..=n).map(CosetTag::EdgeCosetInversion)),
        Transitivity::TwoOrbits => {
            out.extend((1..=n).map(CosetTag::EdgeCosetKv));
            out.extend((1..=n_max).map(CosetTag::EdgeCosetKvNeg));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub family: String,
    pub n: i64,
    pub measure_numerator: String,
    pub measure_denominator: String,
    pub normalization: Normalization,
}

pub fn measure_rows(params: &TreeParams, n_max: u32) -> Result<Vec<MeasureRow>> {
    families(params, n_max)
        .into_iter()
        .map(|tag| {
            let m = measure(&CosetFamily { params: *params, tag })?;
            Ok(MeasureRow {
                family: tag.family_name().into(),
                n: tag.index(),
                measure_numerator: m.value.numer().to_string(),
                measure_denominator: m.value.denom().to_string(),
                normalization: m.normalization,
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[MeasureRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetClassReport {
    pub tag: CosetTag,
    pub representative: String,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub measure: MeasureValue,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    /// Order of the stabilizer of the ball's centre within the ball group.
    pub group_order: usize,
    pub classes: Vec<CosetClassReport>,
    pub total_elements: usize,
    #[serde(with = "rat::serde_q")]
    pub total_measure: Q,
    /// Every orbit carries a single family and every family is a single orbit.
    pub partition_ok: bool,
    pub all_match: bool,
}

/// Family of the ball vertex or oriented ball edge, relative to the ball's centre.
fn vertex_tag(ball: &Ball, w: VertexId) -> Option<CosetTag> {
    let d = ball.depth(w);
    match ball.params().transitivity() {
        Transitivity::VertexTransitive => Some(CosetTag::VertexCoset(d as u32)),
        Transitivity::TwoOrbits if d.is_multiple_of(2) => Some(CosetTag::VertexCoset((d / 2) as u32)),
        Transitivity::TwoOrbits => None,
    }
}

/// `(x, y)` is a ball edge; `x` nearer the centre unless it is the central edge.
fn edge_tag(ball: &Ball, x: VertexId, y: VertexId) -> CosetTag {
    let (far, outward) = if ball.depth(x) < ball.depth(y) || (ball.depth(x) == ball.depth(y) && x < y) {
        (y, true)
    } else {
        (x, false)
    };
    let side_b = ball.node(far).path[0] == 1;
    let k = ball.depth(far) as i64;
    match ball.params().transitivity() {
        Transitivity::VertexTransitive => {
            // central edge is oriented 0 -> 1; outward on side 1 and inward on side 0 follow it
            let n = if side_b || k == 0 { k } else { -k };
            let along = if k == 0 { outward } else { outward == side_b };
            if along {
                CosetTag::EdgeCoset(n)
            } else {
                CosetTag::EdgeCosetInversion(n)
            }
        }
        Transitivity::TwoOrbits => {
            if k % 2 == 0 {
                CosetTag::EdgeCoset(if side_b { k / 2 } else { -k / 2 })
            } else if side_b {
                CosetTag::EdgeCosetKv((k + 1) / 2)
            } else {
                CosetTag::EdgeCosetKvNeg(((k + 1) / 2) as u32)
            }
        }
    }
}

/// Classifies vertices (vertex-centred ball) or edges (edge-centred ball;
/// oriented for vertex-transitive groups) into orbits of the centre's
/// stabilizer and compares orbit sizes with the measure formulas.
pub fn verify_coset_partition(ball: &Ball, cap: u64) -> Result<PartitionReport> {
    let type_preserving = ball.params().transitivity() == Transitivity::TwoOrbits;
    let group: Vec<BallAutomorphism> = enumerate_automorphisms(ball, type_preserving, cap)?
        .into_iter()
        .filter(|g| g.fixes_all(&ball.roots()))
        .collect();
    // elements are encoded as vertex pairs; vertices use (w, w)
    let (elements, tags, normalization): (Vec<(VertexId, VertexId)>, Vec<CosetTag>, Normalization) = match ball.center()
    {
        CenterSpec::Vertex { .. } => {
            let mut els = Vec::new();
            let mut tags = Vec::new();
            for w in ball.vertices() {
                if let Some(t) = vertex_tag(ball, w) {
                    els.push((w, w));
                    tags.push(t);
                }
            }
            (els, tags, Normalization::FixVertex)
        }
        CenterSpec::Edge => {
            let mut els = Vec::new();
            for (a, b) in ball.edges() {
                els.push((a, b));
                if ball.params().transitivity() == Transitivity::VertexTransitive {
                    els.push((b, a));
                }
            }
            let tags = els.iter().map(|&(a, b)| edge_tag(ball, a, b)).collect();
            (els, tags, Normalization::FixEdge)
        }
    };
    let index: HashMap<(VertexId, VertexId), usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut seen = vec![false; elements.len()];
    let mut per_tag: BTreeMap<CosetTag, Vec<usize>> = BTreeMap::new();
    let mut partition_ok = true;
    let mut classes = Vec::new();
    for i in 0..elements.len() {
        if seen[i] {
            continue;
        }
        let (a, b) = elements[i];
        let mut orbit = Vec::new();
        for g in &group {
            let j = index[&(g.apply(a), g.apply(b))];
            if !seen[j] {
                seen[j] = true;
                orbit.push(j);
            }
        }
        if orbit.iter().any(|&j| tags[j] != tags[i]) {
            partition_ok = false;
        }
        per_tag.entry(tags[i]).or_default().push(orbit.len());
        let stabilizer_order = group.iter().filter(|g| g.apply(a) == a && g.apply(b) == b).count();
        let m = match tags[i] {
            CosetTag::VertexCoset(n) => vertex_coset_measure(ball.params(), ball.parity(0), n as usize),
            t => edge_coset_measure(&CosetFamily {
                params: *ball.params(),
                tag: t,
            })?,
        };
        debug_assert_eq!(m.normalization, normalization);
        let matches = m.value == rat::qi(orbit.len() as i64) && orbit.len() * stabilizer_order == group.len();
        classes.push(CosetClassReport {
            tag: tags[i],
            representative: if a == b {
                ball.addr_string(a)
            } else {
                format!("{}->{}", ball.addr_string(a), ball.addr_string(b))
            },
            orbit_size: orbit.len(),
            stabilizer_order,
            measure: m,
            matches,
        });
    }
    if per_tag.values().any(|v| v.len() != 1) {
        partition_ok = false;
    }
    classes.sort_by_key(|c| c.tag);
    let total_measure = classes.iter().fold(Q::zero(), |acc, c| acc + &c.measure.value);
    let all_match = classes.iter().all(|c| c.matches);
    Ok(PartitionReport {
        group_order: group.len(),
        total_elements: elements.len(),
        total_measure,
        partition_ok,
        all_match,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::DEFAULT_ENUM_CAP;

    fn fam(params: TreeParams, tag: CosetTag) -> Q {
        edge_coset_measure(&CosetFamily { params, tag }).unwrap().value
    }

    #[test]
    fn sphere_sizes() {
        let p = TreeParams::vertex_transitive(3).unwrap();
        let s: Vec<u64> = (0..4)
            .map(|n| sphere_size(&p, Parity::Zero, n).try_into().unwrap())
            .collect();
        assert_eq!(s, vec![1, 3, 6, 12]);
        let p = TreeParams::two_orbits(3, 4).unwrap();
        assert_eq!(sphere_size(&p, Parity::Zero, 2), BigUint::from(9u32));
        assert_eq!(sphere_size(&p, Parity::One, 2), BigUint::from(8u32));
    }

    #[test]
    fn edge_measures() {
        let vt = TreeParams::vertex_transitive(3).unwrap();
        assert_eq!(fam(vt, CosetTag::EdgeCoset(-3)), rat::qi(8));
        assert_eq!(fam(vt, CosetTag::EdgeCosetInversion(2)), rat::qi(4));
        let two = TreeParams::two_orbits(3, 4).unwrap();
        assert_eq!(fam(two, CosetTag::EdgeCoset(-1)), rat::qi(6));
        assert_eq!(fam(two, CosetTag::EdgeCosetKv(2)), rat::qi(9 * 2));
        assert_eq!(fam(two, CosetTag::EdgeCosetKvNeg(2)), rat::qi(4 * 3));
        assert_eq!(
            fam(two, CosetTag::EdgeCosetKv(-1)),
            fam(two, CosetTag::EdgeCosetKvNeg(2))
        );
        assert!(edge_coset_measure(&CosetFamily {
            params: two,
            tag: CosetTag::EdgeCosetInversion(0)
        })
        .is_err());
        assert!(edge_coset_measure(&CosetFamily {
            params: vt,
            tag: CosetTag::EdgeCosetKv(1)
        })
        .is_err());
        assert!(edge_coset_measure(&CosetFamily {
            params: vt,
            tag: CosetTag::VertexCoset(1)
        })
        .is_err());
    }

    #[test]
    fn vertex_partition_three_regular() {
        let b = Ball::new(
            TreeParams::vertex_transitive(3).unwrap(),
            CenterSpec::Vertex { parity: Parity::Zero },
            2,
        )
        .unwrap();
        let r = verify_coset_partition(&b, DEFAULT_ENUM_CAP).unwrap();
        let sizes: Vec<usize> = r.classes.iter().map(|c| c.orbit_size).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        assert!(r.partition_ok && r.all_match);
        assert_eq!(r.total_measure, rat::qi(10));
    }

    #[test]
    fn edge_partitions() {
        for params in [
            TreeParams::vertex_transitive(3).unwrap(),
            TreeParams::two_orbits(3, 4).unwrap(),
            TreeParams::two_orbits(4, 3).unwrap(),
        ] {
            let r = if params.transitivity() == Transitivity::VertexTransitive {
                3
            } else {
                2
            };
            let b = Ball::new(params, CenterSpec::Edge, r).unwrap();
            let r = verify_coset_partition(&b, DEFAULT_ENUM_CAP).unwrap();
            assert!(r.partition_ok, "{params:?}");
            assert!(r.all_match, "{params:?}: {:?}", r.classes);
            assert_eq!(r.total_measure, rat::qi(r.total_elements as i64));
        }
        let b = Ball::new(TreeParams::vertex_transitive(3).unwrap(), CenterSpec::Edge, 2).unwrap();
        let r = verify_coset_partition(&b, DEFAULT_ENUM_CAP).unwrap();
        for t in [0, 1] {
            assert!(r.classes.iter().any(|c| c.tag == CosetTag::EdgeCoset(t)));
            assert!(r.classes.iter().any(|c| c.tag == CosetTag::EdgeCosetInversion(t)));
        }
    }

    #[test]
    fn csv_rows() {
        let rows = measure_rows(&TreeParams::two_orbits(3, 3).unwrap(), 1).unwrap();
        let csv = rows_to_csv(&rows).unwrap();
        assert!(csv.starts_with("family,n,measure_numerator,measure_denominator,normalization\n"));
        assert!(csv.contains("edge_coset_kv,1,2,1,fix_edge"));
    }
}
