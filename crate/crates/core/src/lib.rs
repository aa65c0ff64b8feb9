//! Corrected high-order `L_k` convolution quadrature for the subdiffusion
//! equation `D_t^α u − Δu = f`, `0 < α < 1`, with a Caputo time derivative.
//!
//! The crate is organised bottom-up:
//!
//! * [`special_functions`] – gamma, Dirichlet eta, Riemann zeta and three
//!   polylogarithm backends (direct series, singular expansion, τ₈ rational
//!   approximant).
//! * [`lk_weights`] – the `L_k` weights `ω^(k)_j` (explicit closed form,
//!   generic ρ-form and a quadrature oracle), the correction coefficient
//!   tables and the generating symbol `δ^α(ξ)`.
//! * [`stability`] – boundary-locus and τ₈ sector checks of the symbol and
//!   an empirical fit of its expansion order.
//! * [`spatial`] – Chebyshev–Gauss–Lobatto collocation and the Dirichlet
//!   Laplacian.
//! * [`timestepper`] – the standard and corrected `L_k` schemes.
//! * [`harness`] – the nonsmooth-data example, discrete norms, convergence
//!   rates and refinement studies.

// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values are quoted at full oracle precision
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod error;
pub mod harness;
pub mod lk_weights;
pub mod spatial;
pub mod special_functions;
pub mod stability;
pub mod timestepper;

pub use error::{Error, Result};
