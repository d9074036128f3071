//! The automorphism 2-group 𝔸ₙ± of the T-duality 2-group TD_n, in exact arithmetic.
//!
//! Layers, bottom up: [`intlinalg`] (integer matrices, phases in ℚ/ℤ),
//! [`groups`] (O±(n,n,ℤ)), [`twogroup`] (objects, morphisms, the section
//! and multiplicators), [`kinvariant`] (the 3-cocycle m and its 2-torsion
//! witness), [`crossedmod`] (TD_n and crossed intertwiners) and [`tdcorr`]
//! (T-duality cocycles and the action on them).

pub mod crossedmod;
pub mod error;
pub mod groups;
pub mod intlinalg;
pub mod json;
pub mod kinvariant;
pub mod rng;
pub mod suites;
pub mod tdcorr;
pub mod twogroup;

pub use error::{Error, Result, Violation};
