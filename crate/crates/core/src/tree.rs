//! Finite balls in a (d0,d1)-semi-regular tree, their automorphism groups,
//! distances and horocycle displacement.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of automorphisms materialized by [`enumerate_automorphisms`].
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Largest ball (in vertices) that [`Ball::new`] will build.
pub const MAX_BALL_VERTICES: u128 = 2_000_000;

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Parity {
    Zero,
    One,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Zero => Parity::One,
            Parity::One => Parity::Zero,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Parity {
        if i.is_multiple_of(2) {
            Parity::Zero
        } else {
            Parity::One
        }
    }

    /// Parity reached after `steps` edges.
    pub fn shift(self, steps: usize) -> Parity {
        Parity::from_index(self.index() + steps)
    }
}

impl From<Parity> for u8 {
    fn from(p: Parity) -> u8 {
        p as u8
    }
}

impl TryFrom<u8> for Parity {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Parity::Zero),
            1 => Ok(Parity::One),
            _ => Err(format!("parity must be 0 or 1, got {v}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transitivity {
    VertexTransitive,
    TwoOrbits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct TreeParams {
    d0: usize,
    d1: usize,
    transitivity: Transitivity,
}

#[derive(Deserialize)]
struct RawParams {
    d0: usize,
    d1: usize,
    transitivity: Transitivity,
}

impl TryFrom<RawParams> for TreeParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        TreeParams::new(r.d0, r.d1, r.transitivity)
    }
}

impl TreeParams {
    pub fn new(d0: usize, d1: usize, transitivity: Transitivity) -> Result<Self> {
        for d in [d0, d1] {
            if d < 3 {
                return Err(Error::InvalidDegree(d));
            }
        }
        if transitivity == Transitivity::VertexTransitive && d0 != d1 {
            return Err(Error::UnequalDegrees { d0, d1 });
        }
        Ok(TreeParams { d0, d1, transitivity })
    }

    pub fn vertex_transitive(d: usize) -> Result<Self> {
        Self::new(d, d, Transitivity::VertexTransitive)
    }

    pub fn two_orbits(d0: usize, d1: usize) -> Result<Self> {
        Self::new(d0, d1, Transitivity::TwoOrbits)
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn transitivity(&self) -> Transitivity {
        self.transitivity
    }

    pub fn degree(&self, p: Parity) -> usize {
        match p {
            Parity::Zero => self.d0,
            Parity::One => self.d1,
        }
    }
}

/// Number of tree vertices at distance `n` from a vertex of parity `p`.
pub fn sphere_count(params: &TreeParams, p: Parity, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let mut acc = BigUint::from(params.degree(p));
    for j in 1..n {
        acc *= params.degree(p.shift(j)) - 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSpec {
    Vertex {
        parity: Parity,
    },
    /// Edge joining a parity-0 endpoint (address `0`) to a parity-1 endpoint (address `1`).
    Edge,
}

/// Path address of a ball vertex; `0/2/1` means child 0, then child 2, then child 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexAddr(pub Vec<u32>);

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join("/"))
    }
}

impl FromStr for VertexAddr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Ok(VertexAddr(Vec::new()));
        }
        t.split('/')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::MalformedAddress(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexAddr)
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub path: Vec<u32>,
    pub parity: Parity,
    pub parent: Option<VertexId>,
    pub children: Vec<VertexId>,
    pub depth: usize,
}

/// A ball `B(v, r)` or `B(e, r)`; vertex ids follow breadth-first order.
#[derive(Clone, Debug)]
pub struct Ball {
    params: TreeParams,
    center: CenterSpec,
    radius: usize,
    nodes: Vec<Node>,
    lookup: HashMap<Vec<u32>, VertexId>,
}

pub fn ball_size(params: &TreeParams, center: CenterSpec, radius: usize) -> BigUint {
    match center {
        CenterSpec::Vertex { parity } => (0..=radius).map(|n| sphere_count(params, parity, n)).sum(),
        CenterSpec::Edge => {
            let mut total = BigUint::from(0u32);
            for p in [Parity::Zero, Parity::One] {
                let mut layer = BigUint::one();
                total += &layer;
                for k in 1..=radius {
                    layer *= params.degree(p.shift(k - 1)) - 1;
                    total += &layer;
                }
            }
            total
        }
    }
}

impl Ball {
    pub fn new(params: TreeParams, center: CenterSpec, radius: usize) -> Result<Ball> {
        let size = ball_size(&params, center, radius);
        if size.to_u128().is_none_or(|s| s > MAX_BALL_VERTICES) {
            return Err(Error::Precondition(format!("ball would have {size} vertices")));
        }
        let mut nodes: Vec<Node> = Vec::new();
        match center {
            CenterSpec::Vertex { parity } => nodes.push(Node {
                path: vec![],
                parity,
                parent: None,
                children: vec![],
                depth: 0,
            }),
            CenterSpec::Edge => {
                for side in 0..2u32 {
                    nodes.push(Node {
                        path: vec![side],
                        parity: Parity::from_index(side as usize),
                        parent: None,
                        children: vec![],
                        depth: 0,
                    });
                }
            }
        }
        let mut head = 0;
        while head < nodes.len() {
            let (depth, parity, is_root) = {
                let n = &nodes[head];
                (n.depth, n.parity, n.parent.is_none())
            };
            if depth < radius {
                let deg = params.degree(parity);
                let k = if is_root && matches!(center, CenterSpec::Vertex { .. }) {
                    deg
                } else {
                    deg - 1
                };
                for c in 0..k {
                    let mut path = nodes[head].path.clone();
                    path.push(c as u32);
                    let id = nodes.len();
                    nodes.push(Node {
                        path,
                        parity: parity.flip(),
                        parent: Some(head),
                        children: vec![],
                        depth: depth + 1,
                    });
                    nodes[head].children.push(id);
                }
            }
            head += 1;
        }
        let lookup = nodes.iter().enumerate().map(|(i, n)| (n.path.clone(), i)).collect();
        Ok(Ball {
            params,
            center,
            radius,
            nodes,
            lookup,
        })
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn center(&self) -> CenterSpec {
        self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, v: VertexId) -> &Node {
        &self.nodes[v]
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.nodes.len()
    }

    pub fn parity(&self, v: VertexId) -> Parity {
        self.nodes[v].parity
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.nodes[v].depth
    }

    /// Degree of `v` in the tree (not in the ball).
    pub fn tree_degree(&self, v: VertexId) -> usize {
        self.params.degree(self.parity(v))
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.nodes[v].depth < self.radius
    }

    /// Ids of the center vertex, or of the two edge endpoints.
    pub fn roots(&self) -> Vec<VertexId> {
        match self.center {
            CenterSpec::Vertex { .. } => vec![0],
            CenterSpec::Edge => vec![0, 1],
        }
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.nodes[v].children
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let n = &self.nodes[v];
        let mut out = Vec::with_capacity(n.children.len() + 1);
        match n.parent {
            Some(p) => out.push(p),
            None => {
                if self.center == CenterSpec::Edge {
                    out.push(1 - v);
                }
            }
        }
        out.extend_from_slice(&n.children);
        out
    }

    /// All ball edges as (nearer, farther) pairs; the central edge comes first when present.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        if self.center == CenterSpec::Edge {
            out.push((0, 1));
        }
        for v in self.vertices() {
            for &c in &self.nodes[v].children {
                out.push((v, c));
            }
        }
        out
    }

    pub fn addr(&self, v: VertexId) -> VertexAddr {
        VertexAddr(self.nodes[v].path.clone())
    }

    pub fn addr_string(&self, v: VertexId) -> String {
        self.addr(v).to_string()
    }

    pub fn vertex(&self, addr: &VertexAddr) -> Result<VertexId> {
        self.lookup
            .get(&addr.0)
            .copied()
            .ok_or_else(|| Error::AddressOutsideBall(addr.to_string()))
    }

    pub fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        self.vertex(&s.parse()?)
    }

    pub fn distance(&self, a: VertexId, b: VertexId) -> usize {
        let pa = &self.nodes[a].path;
        let pb = &self.nodes[b].path;
        let l = common_prefix(pa, pb);
        match self.center {
            CenterSpec::Edge if l == 0 => pa.len() + pb.len() - 1,
            _ => pa.len() + pb.len() - 2 * l,
        }
    }

    fn ancestor_at_len(&self, v: VertexId, len: usize) -> VertexId {
        let mut x = v;
        while self.nodes[x].path.len() > len {
            x = self.nodes[x].parent.expect("ancestor above root");
        }
        x
    }

    /// Vertices on the geodesic from `a` to `b`, both ends included.
    pub fn path_between(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let pa = &self.nodes[a].path;
        let pb = &self.nodes[b].path;
        let l = common_prefix(pa, pb);
        let (top_a, top_b) = if self.center == CenterSpec::Edge && l == 0 {
            (self.ancestor_at_len(a, 1), self.ancestor_at_len(b, 1))
        } else {
            let m = self.ancestor_at_len(a, l);
            (m, m)
        };
        let mut up = vec![a];
        let mut x = a;
        while x != top_a {
            x = self.nodes[x].parent.unwrap();
            up.push(x);
        }
        let mut down = vec![b];
        let mut y = b;
        while y != top_b {
            y = self.nodes[y].parent.unwrap();
            down.push(y);
        }
        if top_a == top_b {
            down.pop();
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// Ball vertices within distance `r` of `x`.
    pub fn within(&self, x: VertexId, r: usize) -> Vec<VertexId> {
        self.vertices().filter(|&w| self.distance(x, w) <= r).collect()
    }

    pub fn sphere(&self, x: VertexId, r: usize) -> Vec<VertexId> {
        self.vertices().filter(|&w| self.distance(x, w) == r).collect()
    }

    pub fn to_json(&self) -> BallJson {
        BallJson {
            params: self.params,
            center: self.center,
            radius: self.radius,
            vertices: self
                .vertices()
                .map(|v| VertexJson {
                    addr: self.addr_string(v),
                    parity: self.parity(v),
                    depth: self.depth(v),
                })
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [self.addr_string(a), self.addr_string(b)])
                .collect(),
        }
    }
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VertexJson {
    pub addr: String,
    pub parity: Parity,
    pub depth: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BallJson {
    pub params: TreeParams,
    pub center: CenterSpec,
    pub radius: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[String; 2]>,
}

/// An automorphism of a ball, stored as the image of every vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallAutomorphism {
    image: Vec<VertexId>,
}

impl BallAutomorphism {
    pub fn identity(ball: &Ball) -> Self {
        BallAutomorphism {
            image: ball.vertices().collect(),
        }
    }

    /// Builds from an image array after checking that it is a graph automorphism of `ball`.
    pub fn from_images(ball: &Ball, image: Vec<VertexId>) -> Result<Self> {
        if image.len() != ball.len() {
            return Err(Error::NotAPermutation(format!(
                "expected {} images, got {}",
                ball.len(),
                image.len()
            )));
        }
        let mut seen = vec![false; image.len()];
        for &y in &image {
            if y >= image.len() || seen[y] {
                return Err(Error::NotAPermutation("image array is not a bijection".into()));
            }
            seen[y] = true;
        }
        for (a, b) in ball.edges() {
            if ball.distance(image[a], image[b]) != 1 {
                return Err(Error::NotAPermutation(format!(
                    "edge {}-{} is not mapped to an edge",
                    ball.addr_string(a),
                    ball.addr_string(b)
                )));
            }
        }
        Ok(BallAutomorphism { image })
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.image[v]
    }

    pub fn images(&self) -> &[VertexId] {
        &self.image
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &BallAutomorphism) -> BallAutomorphism {
        BallAutomorphism {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> BallAutomorphism {
        let mut inv = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            inv[w] = v;
        }
        BallAutomorphism { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn fixes(&self, v: VertexId) -> bool {
        self.image[v] == v
    }

    pub fn fixes_all(&self, vs: &[VertexId]) -> bool {
        vs.iter().all(|&v| self.fixes(v))
    }

    pub fn is_type_preserving(&self, ball: &Ball) -> bool {
        ball.vertices().all(|v| ball.parity(v) == ball.parity(self.image[v]))
    }

    pub fn to_json(&self, ball: &Ball) -> BTreeMap<String, String> {
        ball.vertices()
            .map(|v| (ball.addr_string(v), ball.addr_string(self.image[v])))
            .collect()
    }

    pub fn from_json(ball: &Ball, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut image = vec![usize::MAX; ball.len()];
        for (k, v) in map {
            image[ball.parse_vertex(k)?] = ball.parse_vertex(v)?;
        }
        if let Some(v) = image.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NotAPermutation(format!("no image for {}", ball.addr_string(v))));
        }
        Self::from_images(ball, image)
    }
}

/// Canonical labels of rooted subtrees (equal labels iff isomorphic).
fn subtree_labels(ball: &Ball) -> Vec<usize> {
    let mut labels = vec![0usize; ball.len()];
    let mut intern: HashMap<Vec<usize>, usize> = HashMap::new();
    for v in ball.vertices().rev() {
        let mut key: Vec<usize> = ball.children(v).iter().map(|&c| labels[c]).collect();
        key.sort_unstable();
        let next = intern.len();
        labels[v] = *intern.entry(key).or_insert(next);
    }
    labels
}

fn edge_swap_allowed(ball: &Ball, labels: &[usize], type_preserving: bool) -> bool {
    ball.center() == CenterSpec::Edge && !type_preserving && labels[0] == labels[1]
}

/// Order of the ball automorphism group, from child-class multiplicities.
pub fn automorphism_group_order(ball: &Ball, type_preserving: bool) -> BigUint {
    let labels = subtree_labels(ball);
    let mut order = BigUint::one();
    for v in ball.vertices() {
        for (_, group) in &ball.children(v).iter().map(|&c| labels[c]).sorted().chunk_by(|&l| l) {
            for k in 1..=group.count() {
                order *= k;
            }
        }
    }
    if edge_swap_allowed(ball, &labels, type_preserving) {
        order *= 2u32;
    }
    order
}

/// All automorphisms of `ball` (type-preserving ones only when requested),
/// in a deterministic order with the identity first.
pub fn enumerate_automorphisms(ball: &Ball, type_preserving: bool, cap: u64) -> Result<Vec<BallAutomorphism>> {
    let predicted = automorphism_group_order(ball, type_preserving);
    if predicted > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            predicted: predicted.to_string(),
            cap,
        });
    }
    let labels = subtree_labels(ball);
    let internal = ball.vertices().take_while(|&v| !ball.children(v).is_empty()).count();
    let mut out = Vec::with_capacity(predicted.to_usize().unwrap_or(0));
    let mut image = vec![usize::MAX; ball.len()];
    let mut starts: Vec<Vec<VertexId>> = vec![ball.roots()];
    if edge_swap_allowed(ball, &labels, type_preserving) {
        starts.push(vec![1, 0]);
    }
    for start in starts {
        for (r, &s) in ball.roots().iter().zip(&start) {
            image[*r] = s;
        }
        extend(ball, &labels, internal, 0, &mut image, &mut out);
    }
    Ok(out)
}

fn extend(
    ball: &Ball,
    labels: &[usize],
    internal: usize,
    k: usize,
    image: &mut Vec<VertexId>,
    out: &mut Vec<BallAutomorphism>,
) {
    if k == internal {
        out.push(BallAutomorphism { image: image.clone() });
        return;
    }
    let src = ball.children(k);
    let dst = ball.children(image[k]);
    for perm in dst.iter().copied().permutations(dst.len()) {
        if src.iter().zip(&perm).any(|(&a, &b)| labels[a] != labels[b]) {
            continue;
        }
        for (&a, &b) in src.iter().zip(&perm) {
            image[a] = b;
        }
        extend(ball, labels, internal, k + 1, image, out);
    }
}

/// Elements of `group` fixing every vertex of `fixed`.
pub fn pointwise_stabilizer(group: &[BallAutomorphism], fixed: &[VertexId]) -> Vec<BallAutomorphism> {
    group.iter().filter(|g| g.fixes_all(fixed)).cloned().collect()
}

/// A boundary ray leaving the ball through the root, described by the child
/// indices it follows; missing indices are 0. For edge-centred balls the
/// first index selects the endpoint the ray starts from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRay {
    pub prefix: Vec<u32>,
}

impl BoundaryRay {
    /// The ray's vertex at ball depth `k`.
    pub fn vertex_at(&self, ball: &Ball, k: usize) -> Result<VertexId> {
        let len = match ball.center() {
            CenterSpec::Vertex { .. } => k,
            CenterSpec::Edge => k + 1,
        };
        let path: Vec<u32> = (0..len).map(|i| self.prefix.get(i).copied().unwrap_or(0)).collect();
        ball.vertex(&VertexAddr(path))
    }
}

/// Horocycle displacement `d(w, u) - d(w', u)`, where `u` is the point where the
/// rays from `w` and `w'` towards the boundary point `ray` merge.
pub fn horocycle_delta(ball: &Ball, w: VertexId, w2: VertexId, ray: &BoundaryRay) -> Result<i64> {
    let segment: Vec<VertexId> = (0..=ball.radius())
        .map(|k| ray.vertex_at(ball, k))
        .collect::<Result<_>>()?;
    let project = |x: VertexId| -> VertexId {
        // nearest point of the in-ball ray segment
        *segment.iter().min_by_key(|&&s| ball.distance(x, s)).unwrap()
    };
    let (p, p2) = (project(w), project(w2));
    let u = if p != p2 {
        if ball.depth(p) > ball.depth(p2) {
            p
        } else {
            p2
        }
    } else {
        let d = ball.distance(w, w2);
        *ball
            .path_between(w, p)
            .iter()
            .find(|&&x| ball.distance(w, x) + ball.distance(x, w2) == d)
            .ok_or_else(|| Error::InsufficientRadius("rays do not merge inside the ball".into()))?
    };
    Ok(ball.distance(w, u) as i64 - ball.distance(w2, u) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vt(d: usize) -> TreeParams {
        TreeParams::vertex_transitive(d).unwrap()
    }

    fn vball(d: usize, r: usize) -> Ball {
        Ball::new(vt(d), CenterSpec::Vertex { parity: Parity::Zero }, r).unwrap()
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(vball(3, 0).len(), 1);
        assert_eq!(vball(3, 2).len(), 10);
        assert_eq!(vball(3, 3).len(), 22);
        let p = TreeParams::two_orbits(3, 4).unwrap();
        assert_eq!(
            Ball::new(p, CenterSpec::Vertex { parity: Parity::Zero }, 2)
                .unwrap()
                .len(),
            13
        );
        assert_eq!(Ball::new(p, CenterSpec::Edge, 1).unwrap().len(), 2 + 2 + 3);
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(TreeParams::vertex_transitive(2), Err(Error::InvalidDegree(2)));
        assert!(TreeParams::new(3, 4, Transitivity::VertexTransitive).is_err());
    }

    #[test]
    fn automorphism_orders_match_independent_count() {
        // 3-regular, r=2: root permutes 3 children, each child permutes 2: 3! * 2^3
        assert_eq!(
            enumerate_automorphisms(&vball(3, 2), false, DEFAULT_ENUM_CAP)
                .unwrap()
                .len(),
            48
        );
        // r=3 adds 6 more pairs of leaves
        let g = enumerate_automorphisms(&vball(3, 3), false, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(g.len() as u64, factorial(3) * 2u64.pow(3) * 2u64.pow(6));
        assert_eq!(g.len(), 3072);
        assert!(g[0].is_identity());
        assert_eq!(enumerate_automorphisms(&vball(3, 1), false, 100).unwrap().len(), 6);
        assert_eq!(enumerate_automorphisms(&vball(3, 0), false, 100).unwrap().len(), 1);
        assert_eq!(
            automorphism_group_order(&vball(4, 2), false),
            BigUint::from(24u32 * 6u32.pow(4))
        );
    }

    #[test]
    fn edge_balls_swap_only_when_allowed() {
        let b = Ball::new(vt(3), CenterSpec::Edge, 1).unwrap();
        assert_eq!(enumerate_automorphisms(&b, false, 100).unwrap().len(), 8);
        assert_eq!(enumerate_automorphisms(&b, true, 100).unwrap().len(), 4);
        let p = TreeParams::two_orbits(3, 4).unwrap();
        let b = Ball::new(p, CenterSpec::Edge, 1).unwrap();
        assert_eq!(enumerate_automorphisms(&b, false, 100).unwrap().len(), 2 * 6);
    }

    #[test]
    fn cap_is_enforced_before_enumeration() {
        match enumerate_automorphisms(&vball(3, 3), false, 1000) {
            Err(Error::CapExceeded { predicted, .. }) => assert_eq!(predicted, "3072"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn enumerated_elements_are_distinct_automorphisms() {
        let b = vball(3, 2);
        let g = enumerate_automorphisms(&b, false, 1000).unwrap();
        let set: std::collections::HashSet<_> = g.iter().collect();
        assert_eq!(set.len(), g.len());
        for x in &g {
            assert!(BallAutomorphism::from_images(&b, x.images().to_vec()).is_ok());
        }
    }

    #[test]
    fn stabilizer_of_neighbor() {
        let b = vball(3, 2);
        let g = enumerate_automorphisms(&b, false, 1000).unwrap();
        let w = b.parse_vertex("0").unwrap();
        // fixing the center and one neighbour: swap the other two branches, and flip pairs below
        assert_eq!(pointwise_stabilizer(&g, &[0, w]).len(), 48 / 3);
        let s = pointwise_stabilizer(&[g[0].clone()], &[0]);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn distances_by_walking() {
        for b in [
            vball(3, 3),
            Ball::new(TreeParams::two_orbits(3, 4).unwrap(), CenterSpec::Edge, 2).unwrap(),
        ] {
            // breadth-first search oracle
            for s in b.vertices() {
                let mut dist = vec![usize::MAX; b.len()];
                dist[s] = 0;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(x) = queue.pop_front() {
                    for y in b.neighbors(x) {
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            queue.push_back(y);
                        }
                    }
                }
                for t in b.vertices() {
                    assert_eq!(b.distance(s, t), dist[t]);
                    let p = b.path_between(s, t);
                    assert_eq!(p.len(), dist[t] + 1);
                    assert!(p.windows(2).all(|w| b.distance(w[0], w[1]) == 1));
                }
            }
        }
    }

    #[test]
    fn horocycle_examples() {
        let b = vball(3, 3);
        let ray = BoundaryRay::default();
        let v0 = b.parse_vertex("0").unwrap();
        let v1 = b.parse_vertex("1").unwrap();
        let root = 0;
        assert_eq!(horocycle_delta(&b, root, v0, &ray).unwrap(), 1);
        assert_eq!(horocycle_delta(&b, v0, root, &ray).unwrap(), -1);
        assert_eq!(horocycle_delta(&b, root, v1, &ray).unwrap(), -1);
        assert_eq!(horocycle_delta(&b, v1, v0, &ray).unwrap(), 2);
        assert_eq!(horocycle_delta(&b, v0, v0, &ray).unwrap(), 0);
    }

    #[test]
    fn json_round_trip() {
        let b = vball(3, 2);
        let g = enumerate_automorphisms(&b, false, 1000).unwrap();
        for x in g.iter().take(10) {
            let j = x.to_json(&b);
            assert_eq!(&BallAutomorphism::from_json(&b, &j).unwrap(), x);
        }
        let s = serde_json::to_string(&b.to_json()).unwrap();
        let back: BallJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b.to_json());
        assert!("0/x".parse::<VertexAddr>().is_err());
        assert!(matches!(b.parse_vertex("0/5"), Err(Error::AddressOutsideBall(_))));
    }
}
