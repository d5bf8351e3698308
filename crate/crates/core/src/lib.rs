//! Numerical toolkit for weighted composition operators
//! `W_{ψ,φ} f = ψ·(f∘φ)` acting between high-order growth spaces on the
//! unit ball of `C^N`.

pub mod criteria;
pub mod config;
pub mod error;
pub mod mobius;
pub mod multiindex;
pub mod paperlab;
pub mod quadrature;
pub mod quantities;
pub mod ray;
pub mod report;
pub mod verify;
pub mod sampling;
pub mod symbols;
pub mod weights;

pub use error::{Error, Result};
