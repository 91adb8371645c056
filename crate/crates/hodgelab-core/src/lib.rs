//! Exact computational Hermitian geometry on finite-dimensional models of
//! compact complex manifolds.
//!
//! The crate provides a bigraded exterior algebra with exact Gaussian
//! rational (or float / Fourier) coefficients, invariant Lie-group and
//! Fourier-torus models supplying `del`, `delbar` and integration, metric
//! machinery (Hodge star, Lefschetz operators, inner products), the full
//! twisted operator suite with dual-route adjoints, quotient cohomology
//! (de Rham, Dolbeault, Bott-Chern, Aeppli) with exactness certificates,
//! the balanced/Gauduchon analysis layer, and a randomized identity
//! verification harness.
//!
//! The library is `no_std`-compatible (with `alloc`); the companion CLI
//! crate carries IO, manifests and report formats.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

macro_rules! fmt_debug_as_display {
    () => {
        fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
            core::fmt::Display::fmt(self, f)
        }
    };
}

pub mod analysis;
pub mod basis;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod form;
pub mod identity;
pub mod lefschetz;
pub mod linalg;
pub mod metric;
pub mod model;
pub mod operators;
pub mod rng;
pub mod scalar;
pub mod star;

pub use error::{AlgebraError, EngineError};
pub use form::Form;
pub use metric::Metric;
pub use model::{Model, ValidationReport};
pub use scalar::{GaussianRational, RingKind, Scalar};
