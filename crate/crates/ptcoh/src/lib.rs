//! Coherent states for the PT-symmetric Scarf I potential.
//!
//! The library builds the model's eigenfunctions with a CPT-orthonormal phase
//! convention, constructs Gazeau-Klauder and minimal coherent states on top of
//! them, and certifies the identities those constructions are supposed to
//! satisfy (orthonormality, completeness, moment problems, temporal stability,
//! overlaps) by independent numerical routes.
//!
//! Module layering, bottom up:
//!
//! * [`quadrature`]: double-exponential integration on finite intervals and
//!   the half line. No dependencies on the rest of the crate.
//! * [`specfun`]: complex log-gamma, Jacobi polynomials with complex
//!   parameters, modified Bessel I and K. K reuses the quadrature engine.
//! * [`model`]: the Scarf I potential, spectrum, weights and eigenfunctions.
//! * [`coherent`]: Gazeau-Klauder and minimal coherent state coefficients,
//!   evaluation, evolution and overlaps.
//! * [`verify`]: the checks, each comparing an analytic claim against an
//!   independently computed quantity, reported with residual and tolerance.
//! * [`cli`]: config, CSV formatting and the `ptcoh` command implementations.

// negated float comparisons (`!(x > 0.0)`) are deliberate throughout: they
// route NaN into the rejecting branch, which a `partial_cmp` rewrite would
// obscure
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coherent;
pub mod model;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use model::ScarfIModel;
