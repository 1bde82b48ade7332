//! Reconstruction of bounded, possibly discontinuous functions from segment
//! integral data.
//!
//! Given integrals of an unknown function over chained segments of an
//! interval, plus the locations of its jump discontinuities, this crate builds
//! a globally smooth rational approximant: low-degree polynomials fitted to
//! the integral data over small windows of consecutive segments
//! ([`histopoly`]), blended by multinode inverse-distance weights that form a
//! smooth partition of unity ([`shepard`]). The windows come from an
//! equal-length covering of each jump-free region ([`covering`]), so the blend
//! never reaches across a discontinuity.
//!
//! [`operator`] assembles the pieces into an evaluable [`QuasiHistopolant`];
//! [`bench`] holds the reproducible accuracy studies and their reference
//! anchors; [`io`] reads and writes the CSV/JSON data formats used by the
//! `histoshep` binary.

pub mod bench;
pub mod covering;
pub mod grid;
pub mod histopoly;
pub mod io;
mod linalg;
pub mod operator;
pub mod quad;
pub mod shepard;

pub use covering::Covering;
pub use grid::{ContinuityPartition, GridMetrics, SegmentGrid};
pub use histopoly::{LocalHistopolant, ScaledChebyshevPoly};
pub use operator::{BuildParams, QuasiHistopolant};
pub use shepard::{Placement, ShepardNodes, WeightVector};
