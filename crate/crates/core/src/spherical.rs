//! Spherical functions: the two-step recursion along an axis, radial Gram
//! matrices on finite balls, positive-definiteness checks and the
//! principal-series parametrization.

use std::ops::{Add, Div, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, q, Q};
use crate::tree::{Ball, CenterSpec, Parity, Transitivity};

/// Dense real matrix used for kernels.
pub type Matrix = DMatrix<f64>;

/// The group acting on the tree, seen from a reference vertex of degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    VertexTransitive { d: usize },
    TwoOrbits { d: usize, dprime: usize },
}

impl GroupKind {
    pub fn validate(&self) -> Result<()> {
        let ds: &[usize] = match self {
            GroupKind::VertexTransitive { d } => &[*d],
            GroupKind::TwoOrbits { d, dprime } => &[*d, *dprime],
        };
        for &d in ds {
            if d < 3 {
                return Err(Error::InvalidDegree(d));
            }
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        match *self {
            GroupKind::VertexTransitive { d } | GroupKind::TwoOrbits { d, .. } => d,
        }
    }

    /// Edges between consecutive points of a translation axis through same-type vertices.
    pub fn step(&self) -> usize {
        match self {
            GroupKind::VertexTransitive { .. } => 1,
            GroupKind::TwoOrbits { .. } => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedInterval<T> {
    pub lo: T,
    pub hi: T,
}

impl ClosedInterval<Q> {
    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl ClosedInterval<f64> {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }
}

/// Values of `alpha` for which the spherical function is positive definite.
pub fn param_interval(kind: GroupKind) -> Result<ClosedInterval<Q>> {
    kind.validate()?;
    Ok(match kind {
        GroupKind::VertexTransitive { .. } => ClosedInterval {
            lo: q(-1, 1),
            hi: q(1, 1),
        },
        GroupKind::TwoOrbits { dprime, .. } => ClosedInterval {
            lo: q(-1, dprime as i64 - 1),
            hi: q(1, 1),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalParam {
    pub kind: GroupKind,
    #[serde(with = "rat::serde_q")]
    pub alpha: Q,
}

impl SphericalParam {
    pub fn in_interval(&self) -> Result<bool> {
        Ok(param_interval(self.kind)?.contains(&self.alpha))
    }
}

/// Number types the recursion can run in.
pub trait Scalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> {
    fn from_i64(n: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Q {
    fn from_i64(n: i64) -> Self {
        rat::qi(n)
    }
    fn to_f64(&self) -> f64 {
        rat::to_f64(self)
    }
}

/// Coefficients `(a, b)` of `phi(n) = a * phi(n-1) - b * phi(n-2)`.
pub fn recursion_coefficients<T: Scalar>(kind: GroupKind, alpha: &T) -> (T, T) {
    let c = T::from_i64;
    match kind {
        GroupKind::VertexTransitive { d } => {
            let d = d as i64;
            (c(d) / c(d - 1) * alpha.clone(), c(1) / c(d - 1))
        }
        GroupKind::TwoOrbits { d, dprime } => {
            let (d, e) = (d as i64, dprime as i64);
            let a = c(d) * alpha.clone() / c(d - 1) - c(e - 2) / c((e - 1) * (d - 1));
            (a, c(1) / c((e - 1) * (d - 1)))
        }
    }
}

/// `phi(tau^0), ..., phi(tau^n)` for the spherical function with parameter `alpha`.
pub fn spherical_sequence<T: Scalar>(kind: GroupKind, alpha: &T, n: usize) -> Result<Vec<T>> {
    kind.validate()?;
    let (a, b) = recursion_coefficients(kind, alpha);
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::from_i64(1));
    if n >= 1 {
        out.push(alpha.clone());
    }
    for k in 2..=n {
        let next = a.clone() * out[k - 1].clone() - b.clone() * out[k - 2].clone();
        out.push(next);
    }
    Ok(out)
}

fn check_ball_kind(ball: &Ball, kind: GroupKind) -> Result<Parity> {
    kind.validate()?;
    let parity = match ball.center() {
        CenterSpec::Vertex { parity } => parity,
        CenterSpec::Edge => {
            return Err(Error::Precondition(
                "radial Gram matrices need a vertex-centred ball".into(),
            ))
        }
    };
    let p = ball.params();
    let ok = match kind {
        GroupKind::VertexTransitive { d } => p.transitivity() == Transitivity::VertexTransitive && p.d0() == d,
        GroupKind::TwoOrbits { d, dprime } => {
            p.transitivity() == Transitivity::TwoOrbits && p.degree(parity) == d && p.degree(parity.flip()) == dprime
        }
    };
    if !ok {
        return Err(Error::KindMismatch(format!(
            "{kind:?} does not describe the ball's tree"
        )));
    }
    Ok(parity)
}

/// Vertices of `ball` carrying the radial kernel: all of them for a
/// vertex-transitive group, those of the centre's type otherwise.
pub fn kernel_vertices(ball: &Ball, kind: GroupKind) -> Result<Vec<usize>> {
    let parity = check_ball_kind(ball, kind)?;
    Ok(match kind {
        GroupKind::VertexTransitive { .. } => ball.vertices().collect(),
        GroupKind::TwoOrbits { .. } => ball.vertices().filter(|&v| ball.parity(v) == parity).collect(),
    })
}

/// Matrix `[phi(d(x, y))]` over [`kernel_vertices`], with values computed
/// exactly and rounded once.
pub fn radial_gram(ball: &Ball, kind: GroupKind, alpha: &Q) -> Result<DMatrix<f64>> {
    let vs = kernel_vertices(ball, kind)?;
    let step = kind.step();
    let phi: Vec<f64> = spherical_sequence(kind, alpha, 2 * ball.radius() / step)?
        .iter()
        .map(rat::to_f64)
        .collect();
    Ok(DMatrix::from_fn(vs.len(), vs.len(), |i, j| {
        phi[ball.distance(vs[i], vs[j]) / step]
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

pub fn psd_check(m: &DMatrix<f64>, tol: f64) -> Result<PsdVerdict> {
    if !m.is_square() {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = m.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Precondition("matrix is not symmetric".into()));
            }
        }
    }
    if m.nrows() == 0 {
        return Ok(PsdVerdict {
            is_psd: true,
            min_eigenvalue: 0.0,
        });
    }
    let min = SymmetricEigen::new(m.clone()).eigenvalues.min();
    Ok(PsdVerdict {
        is_psd: min >= -tol,
        min_eigenvalue: min,
    })
}

/// `alpha` of the principal-series representation with parameter `s`, `|s| = 1`.
pub fn principal_param(kind: GroupKind, s: Complex64) -> Result<f64> {
    kind.validate()?;
    if (s.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::OutOfDomain(format!("|s| = {} is not 1", s.norm())));
    }
    Ok(match kind {
        GroupKind::VertexTransitive { d } => {
            let d = d as f64;
            2.0 * (d - 1.0).sqrt() / d * s.re
        }
        GroupKind::TwoOrbits { d, dprime } => {
            let (d, e) = (d as f64, dprime as f64);
            2.0 * (d - 1.0).sqrt() / (d * (e - 1.0).sqrt()) * (s * s).re + (e - 2.0) / (d * (e - 1.0))
        }
    })
}

pub fn principal_interval(kind: GroupKind) -> Result<ClosedInterval<f64>> {
    kind.validate()?;
    Ok(match kind {
        GroupKind::VertexTransitive { d } => {
            let r = 2.0 * (d as f64 - 1.0).sqrt() / d as f64;
            ClosedInterval { lo: -r, hi: r }
        }
        GroupKind::TwoOrbits { d, dprime } => {
            let (d, e) = (d as f64, dprime as f64);
            let r = 2.0 * (d - 1.0).sqrt() / (d * (e - 1.0).sqrt());
            let c = (e - 2.0) / (d * (e - 1.0));
            ClosedInterval { lo: c - r, hi: c + r }
        }
    })
}

/// Exact principal-interval endpoints when they are rational.
pub fn principal_interval_exact(kind: GroupKind) -> Result<Option<ClosedInterval<Q>>> {
    kind.validate()?;
    let (radius_sq, c) = match kind {
        GroupKind::VertexTransitive { d } => {
            let d = d as i64;
            (q(4 * (d - 1), d * d), q(0, 1))
        }
        GroupKind::TwoOrbits { d, dprime } => {
            let (d, e) = (d as i64, dprime as i64);
            (q(4 * (d - 1), d * d * (e - 1)), q(e - 2, d * (e - 1)))
        }
    };
    Ok(rat::exact_sqrt(&radius_sq).map(|r| ClosedInterval {
        lo: &c - &r,
        hi: &c + &r,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TreeParams;

    fn vt(d: usize) -> GroupKind {
        GroupKind::VertexTransitive { d }
    }

    #[test]
    fn first_terms() {
        // d = 3, alpha = 1/3: phi2 = (3/2)(1/3)(1/3) - 1/2 = -1/3
        let s = spherical_sequence(vt(3), &q(1, 3), 3).unwrap();
        assert_eq!(s[0], q(1, 1));
        assert_eq!(s[1], q(1, 3));
        assert_eq!(s[2], q(-1, 3));
        // phi3 = (3/2)(1/3)(-1/3) - (1/2)(1/3) = -1/6 - 1/6
        assert_eq!(s[3], q(-1, 3));
        let one = spherical_sequence(GroupKind::TwoOrbits { d: 3, dprime: 4 }, &q(1, 1), 6).unwrap();
        assert!(one.iter().all(|x| *x == q(1, 1)));
    }

    #[test]
    fn float_and_exact_agree() {
        let k = GroupKind::TwoOrbits { d: 4, dprime: 6 };
        let e = spherical_sequence(k, &q(3, 7), 30).unwrap();
        let f = spherical_sequence(k, &(3.0 / 7.0), 30).unwrap();
        for (a, b) in e.iter().zip(&f) {
            assert!((rat::to_f64(a) - b).abs() < 1e-12);
        }
    }

    #[test]
    fn intervals() {
        assert_eq!(
            param_interval(GroupKind::TwoOrbits { d: 4, dprime: 6 }).unwrap().lo,
            q(-1, 5)
        );
        let p = principal_interval_exact(GroupKind::TwoOrbits { d: 4, dprime: 4 })
            .unwrap()
            .unwrap();
        assert_eq!((p.lo, p.hi), (q(-1, 3), q(2, 3)));
        assert!(principal_interval_exact(vt(4)).unwrap().is_none());
        assert!(param_interval(vt(2)).is_err());
    }

    #[test]
    fn gram_shape_and_kind_checks() {
        let b = Ball::new(
            TreeParams::vertex_transitive(3).unwrap(),
            CenterSpec::Vertex { parity: Parity::Zero },
            2,
        )
        .unwrap();
        let m = radial_gram(&b, vt(3), &q(1, 2)).unwrap();
        assert_eq!(m.nrows(), 10);
        assert!(radial_gram(&b, vt(4), &q(0, 1)).is_err());
        let p = TreeParams::two_orbits(3, 4).unwrap();
        let b = Ball::new(p, CenterSpec::Vertex { parity: Parity::One }, 2).unwrap();
        let m = radial_gram(&b, GroupKind::TwoOrbits { d: 4, dprime: 3 }, &q(1, 2)).unwrap();
        assert_eq!(m.nrows(), 1 + 4 * 2);
    }

    #[test]
    fn psd_rejects_bad_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert_eq!(psd_check(&m, 1e-9), Err(Error::NonFinite));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(psd_check(&m, 1e-9).is_err());
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.05, 1.05, 1.0]);
        let v = psd_check(&m, 1e-9).unwrap();
        assert!(!v.is_psd);
        assert!((v.min_eigenvalue + 0.05).abs() < 1e-12);
    }

    #[test]
    fn principal_rejects_non_unit() {
        assert!(principal_param(vt(3), Complex64::new(0.5, 0.0)).is_err());
        assert!((principal_param(vt(4), Complex64::new(1.0, 0.0)).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
