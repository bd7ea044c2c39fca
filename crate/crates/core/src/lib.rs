//! Schwarzian derivatives of planar harmonic mappings on the unit disk.
//!
//! The crate is layered bottom-up:
//!
//! - [`jets`]: third-order complex Taylor jets (forward-mode differentiation);
//! - [`maps`]: holomorphic evaluators, Möbius maps and harmonic maps `h + conj(g)`;
//! - [`schwarzian`]: pre-Schwarzian, Schwarzian, hyperbolic derivative and the
//!   sampled Schwarzian norm;
//! - [`criteria`]: Schwarz–Pick lemma gap and two sampled univalence criteria;
//! - [`geometry`]: Jacobian, injectivity scans, boundary curves and SVG output;
//! - [`description`]: the JSON map-description format;
//! - [`suites`]: seeded randomized verification suites.

// `!(x < 1.0)` also rejects NaN, which is the intent at every domain check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod description;
pub mod error;
pub mod geometry;
pub mod jets;
pub mod maps;
pub mod quadrature;
pub mod schwarzian;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64;
