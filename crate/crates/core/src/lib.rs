//! Certified Riemann–Stieltjes integration of bounded functions against
//! integrators of the form `G(x) = c + ∫_a^x g`.
//!
//! The integral `∫_a^b f dG` exists exactly when the product `f·g` is
//! Riemann integrable, and then equals `∫_a^b f·g dx`. This crate decides
//! that integrability with Darboux sums over exact range oracles, returns
//! midpoint–radius enclosures of the resulting integrals, and ships a
//! harness that checks the surrounding identities and error bounds on a
//! corpus of catalog functions.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod harness;
pub mod integrator;
pub mod numeric;
pub mod partition;
pub mod sums;

pub use catalog::{
    build_handle, oscillation, product_handle, FunctionHandle, FunctionSpec, Interval, TagKind,
};
pub use error::{Error, Result};
