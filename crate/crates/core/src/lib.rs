//! Curvature engine for Riemannian metrics given on coordinate charts or on
//! invariant Lie-group frames.
//!
//! Chart metrics are written as expression trees and differentiated with
//! second-order forward jets; frame metrics are evaluated over exact
//! rationals. On top of both sits a checker for the Gray curvature identities
//! of almost Hermitian structures (`K1`..`K3`) and their almost contact
//! counterparts (`G1`..`G3`), together with the usual contact-geometry
//! classification tests and the constructions (metric cones, warped products,
//! hypersurfaces, circle submersions) that relate them.
//!
//! Curvature sign convention used everywhere:
//! `R_{XY}Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z` and
//! `R(X,Y,Z,W) = -g(R_{XY}Z, W)`, so that `R(X,Y,X,Y)` is the sectional
//! curvature of an orthonormal pair.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chart;
pub mod constructions;
pub mod error;
pub mod expr;
pub mod frame;
pub mod geometry;
pub mod identities;
pub mod jet;
pub mod linalg;
pub mod scalar;
pub mod structures;

pub use chart::{sample, Chart, Interval, SampleSet, TensorField, Valence};
pub use error::{Error, Result};
pub use expr::{parse_expr, Expr};
pub use frame::{heisenberg_h21, FrameGeometry};
pub use jet::{Jet1, Jet2, MAX_DIM};
pub use scalar::Rational;
pub use structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact};
