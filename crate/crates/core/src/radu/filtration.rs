//! Generic subtrees, their depths, and product-set checks among pointwise
//! stabilizers inside the automorphism group of a ball.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{enumerate_automorphisms, pointwise_stabilizer, Ball, BallAutomorphism, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenericSubtree {
    BallAroundVertex { r: usize },
    BallAroundEdge { r: usize },
}

impl GenericSubtree {
    pub fn validate(self) -> Result<()> {
        match self {
            GenericSubtree::BallAroundVertex { r: 0 } => Err(Error::Precondition(
                "a vertex ball in the filtration needs r >= 1".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn radius(self) -> usize {
        match self {
            GenericSubtree::BallAroundVertex { r } | GenericSubtree::BallAroundEdge { r } => r,
        }
    }

    /// The shape one step lower in the filtration.
    pub fn predecessor(self) -> Option<GenericSubtree> {
        match self {
            GenericSubtree::BallAroundVertex { r } => Some(GenericSubtree::BallAroundEdge { r: r - 1 }),
            GenericSubtree::BallAroundEdge { r: 0 } => None,
            GenericSubtree::BallAroundEdge { r } => Some(GenericSubtree::BallAroundVertex { r }),
        }
    }
}

pub fn filtration_depth(s: GenericSubtree) -> Result<usize> {
    s.validate()?;
    Ok(match s {
        GenericSubtree::BallAroundVertex { r } => 2 * r - 1,
        GenericSubtree::BallAroundEdge { r } => 2 * r,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementCenter {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

/// A generic subtree placed inside a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub center: PlacementCenter,
    pub r: usize,
}

impl Placement {
    pub fn vertex(v: VertexId, r: usize) -> Placement {
        Placement {
            center: PlacementCenter::Vertex(v),
            r,
        }
    }

    pub fn edge(a: VertexId, b: VertexId, r: usize) -> Placement {
        Placement {
            center: PlacementCenter::Edge(a, b),
            r,
        }
    }

    pub fn shape(&self) -> GenericSubtree {
        match self.center {
            PlacementCenter::Vertex(_) => GenericSubtree::BallAroundVertex { r: self.r },
            PlacementCenter::Edge(..) => GenericSubtree::BallAroundEdge { r: self.r },
        }
    }

    fn anchors(&self) -> Vec<VertexId> {
        match self.center {
            PlacementCenter::Vertex(v) => vec![v],
            PlacementCenter::Edge(a, b) => vec![a, b],
        }
    }

    /// Deepest ball depth reached by the subtree in the tree.
    fn reach(&self, ball: &Ball) -> usize {
        self.anchors().iter().map(|&a| ball.depth(a)).max().unwrap() + self.r
    }

    fn check(&self, ball: &Ball, margin: usize) -> Result<()> {
        let anchors = self.anchors();
        if anchors.iter().any(|&a| a >= ball.len()) {
            return Err(Error::AddressOutsideBall(format!("{self:?}")));
        }
        if let PlacementCenter::Edge(a, b) = self.center {
            if ball.distance(a, b) != 1 {
                return Err(Error::Precondition(format!(
                    "{} and {} are not adjacent",
                    ball.addr_string(a),
                    ball.addr_string(b)
                )));
            }
        }
        if self.reach(ball) + margin > ball.radius() {
            return Err(Error::InsufficientRadius(format!(
                "{} needs radius {} but the ball has {}",
                self.describe(ball),
                self.reach(ball) + margin,
                ball.radius()
            )));
        }
        Ok(())
    }

    /// Ball vertices of the subtree; errors unless it lies entirely in the ball.
    pub fn vertices(&self, ball: &Ball) -> Result<Vec<VertexId>> {
        self.check(ball, 0)?;
        let anchors = self.anchors();
        Ok(ball
            .vertices()
            .filter(|&w| anchors.iter().any(|&a| ball.distance(a, w) <= self.r))
            .collect())
    }

    pub fn describe(&self, ball: &Ball) -> String {
        match self.center {
            PlacementCenter::Vertex(v) => format!("B({}, {})", addr(ball, v), self.r),
            PlacementCenter::Edge(a, b) => format!("B({{{}, {}}}, {})", addr(ball, a), addr(ball, b), self.r),
        }
    }
}

fn addr(ball: &Ball, v: VertexId) -> String {
    let s = ball.addr_string(v);
    if s.is_empty() {
        "root".into()
    } else {
        s
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Every placement of `shape` that fits in the ball: vertices in id order, then edges.
pub fn placements(ball: &Ball, shape: GenericSubtree) -> Vec<Placement> {
    let mut out = Vec::new();
    match shape {
        GenericSubtree::BallAroundVertex { r } => {
            out.extend(ball.vertices().map(|v| Placement::vertex(v, r)));
        }
        GenericSubtree::BallAroundEdge { r } => {
            out.extend(ball.edges().into_iter().map(|(a, b)| Placement::edge(a, b, r)));
        }
    }
    out.retain(|p| p.check(ball, 0).is_ok());
    out
}

fn restrictions(group: &[BallAutomorphism], support: &[VertexId]) -> HashSet<Vec<VertexId>> {
    group
        .iter()
        .map(|g| support.iter().map(|&x| g.apply(x)).collect())
        .collect()
}

/// Whether every `g` in `target` factors as `a ∘ b` with `a ∈ left`, `b ∈ right`,
/// where `right` is the pointwise stabilizer of `support`.
fn in_product(target: &[BallAutomorphism], left: &[BallAutomorphism], support: &[VertexId]) -> bool {
    // a⁻¹g fixes `support` exactly when g and a agree on it
    let keys = restrictions(left, support);
    target
        .iter()
        .all(|g| keys.contains(&support.iter().map(|&x| g.apply(x)).collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub u: String,
    pub v: String,
    pub depth: usize,
    pub witness: Option<String>,
    #[serde(skip)]
    pub witness_placement: Option<Placement>,
    pub candidates_checked: usize,
}

/// Searches for `W` one step below `U` in the filtration with
/// `Fix(U) ⊆ Fix(W) ⊆ Fix(V)·Fix(U)`, using the full automorphism group of the ball.
pub fn check_factorization_i(ball: &Ball, u: &Placement, v: &Placement, cap: u64) -> Result<FactorizationReport> {
    let group = enumerate_automorphisms(ball, false, cap)?;
    check_factorization_in(ball, &group, u, v)
}

pub fn check_factorization_in(
    ball: &Ball,
    group: &[BallAutomorphism],
    u: &Placement,
    v: &Placement,
) -> Result<FactorizationReport> {
    let depth = filtration_depth(u.shape())?;
    filtration_depth(v.shape())?;
    if depth < 1 {
        return Err(Error::Precondition("U must have depth at least 1".into()));
    }
    let uv = u.vertices(ball)?;
    let vv = v.vertices(ball)?;
    let in_u: HashSet<VertexId> = uv.iter().copied().collect();
    if vv.iter().all(|x| in_u.contains(x)) {
        return Err(Error::Precondition(format!(
            "{} lies inside {}",
            v.describe(ball),
            u.describe(ball)
        )));
    }
    let fix_u = pointwise_stabilizer(group, &uv);
    let fix_v = pointwise_stabilizer(group, &vv);
    let shape = u.shape().predecessor().expect("depth >= 1 has a predecessor");
    let mut checked = 0;
    for w in placements(ball, shape) {
        checked += 1;
        let wv = w.vertices(ball)?;
        if !fix_u.iter().all(|g| g.fixes_all(&wv)) {
            continue;
        }
        let fix_w = pointwise_stabilizer(group, &wv);
        if in_product(&fix_w, &fix_v, &uv) {
            return Ok(FactorizationReport {
                u: u.describe(ball),
                v: v.describe(ball),
                depth,
                witness: Some(w.describe(ball)),
                witness_placement: Some(w),
                candidates_checked: checked,
            });
        }
    }
    Ok(FactorizationReport {
        u: u.describe(ball),
        v: v.describe(ball),
        depth,
        witness: None,
        witness_placement: None,
        candidates_checked: checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpkReport {
    pub k: usize,
    pub edge: String,
    pub stabilizer_order: usize,
    pub left_order: usize,
    pub right_order: usize,
    /// `Fix(e^(k-1)) ⊆ left · right`
    pub covered: bool,
    /// `left · right ⊆ Fix(e^(k-1))`
    pub contained: bool,
    pub holds: bool,
}

/// `Fix(e^(k-1)) = [Fix(T_a) ∩ Fix(e^(k-1))] · [Fix(T_b) ∩ Fix(e^(k-1))]` in the ball group,
/// where `T_a`, `T_b` are the two half-trees cut out by `e = {a, b}`.
pub fn check_ipk(ball: &Ball, k: usize, e: (VertexId, VertexId), cap: u64) -> Result<IpkReport> {
    let group = enumerate_automorphisms(ball, false, cap)?;
    check_ipk_in(ball, &group, k, e)
}

pub fn check_ipk_in(ball: &Ball, group: &[BallAutomorphism], k: usize, e: (VertexId, VertexId)) -> Result<IpkReport> {
    if k == 0 {
        return Err(Error::Precondition("IP_k needs k >= 1".into()));
    }
    let nbhd = Placement::edge(e.0, e.1, k - 1);
    nbhd.check(ball, 1)?;
    let core = nbhd.vertices(ball)?;
    let half = |near: VertexId, far: VertexId| -> Vec<VertexId> {
        let mut s: Vec<VertexId> = ball
            .vertices()
            .filter(|&w| ball.distance(w, near) < ball.distance(w, far))
            .collect();
        s.extend(core.iter().copied());
        s.sort_unstable();
        s.dedup();
        s
    };
    let (ha, hb) = (half(e.0, e.1), half(e.1, e.0));
    let fix_core = pointwise_stabilizer(group, &core);
    let left = pointwise_stabilizer(group, &ha);
    let right = pointwise_stabilizer(group, &hb);
    let covered = in_product(&fix_core, &left, &hb);
    let contained = left.iter().all(|a| right.iter().all(|b| a.compose(b).fixes_all(&core)));
    Ok(IpkReport {
        k,
        edge: format!("{{{}, {}}}", addr(ball, e.0), addr(ball, e.1)),
        stabilizer_order: fix_core.len(),
        left_order: left.len(),
        right_order: right.len(),
        covered,
        contained,
        holds: covered && contained,
    })
}
