//! Holomorphic symbols: sparse polynomials, one-coordinate gap series and
//! polynomial self-maps, with exact radial and partial calculus.

mod format;
mod poly;
mod selfmap;
mod series;

use num_complex::Complex64;

pub use format::{SymbolSpec, TermSpec};
pub use poly::{MultiPoly, DEFAULT_TERM_CAP};
pub use selfmap::{SelfMap, SelfMapEvidence};
pub use series::{GapSeries, LacunarySeries, DEFAULT_LACUNARY_K, DEFAULT_LACUNARY_Q};

use crate::error::Result;

/// A scalar symbol `ψ` or test function `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Poly(MultiPoly),
    Series(GapSeries),
}

impl Symbol {
    pub fn dim(&self) -> usize {
        match self {
            Symbol::Poly(p) => p.dim(),
            Symbol::Series(s) => s.dim(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.radial_eval(0, z)
    }

    pub fn radial_eval(&self, n: u32, z: &[Complex64]) -> Result<Complex64> {
        match self {
            Symbol::Poly(p) => Ok(p.radial_eval(n, z)),
            Symbol::Series(s) => s.radial_eval(n, z),
        }
    }

    /// `R^(k) f(z)` for `k = 0..=order`.
    pub fn radial_jet(&self, z: &[Complex64], order: u32) -> Result<Vec<Complex64>> {
        (0..=order).map(|k| self.radial_eval(k, z)).collect()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        match self {
            Symbol::Poly(p) => Some(p),
            Symbol::Series(_) => None,
        }
    }
}

impl From<MultiPoly> for Symbol {
    fn from(p: MultiPoly) -> Self {
        Symbol::Poly(p)
    }
}

impl From<GapSeries> for Symbol {
    fn from(s: GapSeries) -> Self {
        Symbol::Series(s)
    }
}

/// A holomorphic map `B → C^N` evaluated pointwise.
pub trait PointMap: Send + Sync {
    fn dim(&self) -> usize;

    fn apply(&self, z: &[Complex64]) -> Vec<Complex64>;

    /// `jets[l][k] = R^(k) φ_{l+1}(z)` for `k = 0..=order`. The default uses
    /// ray differencing; implementors with closed forms override it.
    fn radial_jets(&self, z: &[Complex64], order: u32) -> Vec<Vec<Complex64>> {
        crate::ray::radial_jets(&|w: &[Complex64]| self.apply(w), z, order)
    }
}

/// `φ ∘ γ` for two point maps.
pub struct Composed<'a> {
    pub outer: &'a dyn PointMap,
    pub inner: &'a dyn PointMap,
}

impl PointMap for Composed<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.outer.apply(&self.inner.apply(z))
    }
}
