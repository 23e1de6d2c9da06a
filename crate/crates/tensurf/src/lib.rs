//! Numerical differential geometry of parametric hypersurfaces in three- and
//! four-dimensional Euclidean space, with a verification harness for the
//! structural equations (Gauss, Codazzi, Weingarten) and the classical
//! integral identities of closed surfaces and bounded patches.
//!
//! The crate is organized around a small set of building blocks:
//!
//! * [`tensor`] — fixed-size kernels: vectors, small matrices, permutation
//!   symbols, the generalized cross product.
//! * [`surface`] — pointwise geometry of a parametric surface (bases,
//!   metric, normal, curvature tensor and invariants) plus boundary frames.
//! * [`chart`] — curvilinear ambient coordinate systems and their checks.
//! * [`quadrature`] — Gauss-Legendre / periodic-trapezoid tensor rules,
//!   boundary rules, and the enclosed-volume oracle.
//! * [`zoo`] — analytic test surfaces with exact jets and closed forms.
//! * [`identities`] — evaluation of both sides of every integral identity,
//!   producing structured pass/fail reports.
//! * [`report`] — JSON / CSV / table emission of those reports.
//! * [`cli`] — the `tensurf` command-line runner.

// Index loops in this crate mirror tensor index structure on fixed-size
// arrays; iterator rewrites would obscure which index is which.
#![allow(clippy::needless_range_loop)]

pub mod chart;
pub mod cli;
pub mod error;
pub mod identities;
pub mod quadrature;
pub mod report;
pub mod surface;
pub mod tensor;
pub mod zoo;

pub use error::{GeomError, Result};
pub use surface::{GeometrySample, ParametricSurface};
pub use tensor::{Matrix, Vector};
