//! Harmonic analysis on thick semi-regular trees.
//!
//! The crate models finite balls of a `(d0, d1)`-semi-regular tree together
//! with their automorphism groups, and computes spherical functions, the
//! special (square-integrable) spherical functions, Haar measures of double
//! cosets, the dual-space parameter dynamics and a finite model of the Fell
//! topology. The [`radu`] module works with legal colorings, local actions
//! and the sign-type subgroups of the automorphism group.

pub mod dynamics;
pub mod error;
pub mod fell;
pub mod haar;
pub mod perm;
pub mod radu;
pub mod rat;
pub mod special;
pub mod spherical;
pub mod tree;

pub use error::{Error, Result};
