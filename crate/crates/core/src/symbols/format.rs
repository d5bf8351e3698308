//! Text format for symbols: TOML tables with an explicit `kind`.
//!
//! ```toml
//! kind = "poly"
//! dim = 2
//! [[terms]]
//! exp = [2, 1]
//! re = 1.0
//! im = 0.0
//! ```
//!
//! Floats are written in shortest round-trip form, so parsing a written spec
//! reproduces every coefficient bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GapSeries, LacunarySeries, MultiPoly, Symbol, DEFAULT_LACUNARY_K};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub exp: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymbolSpec {
    Poly {
        dim: usize,
        #[serde(default)]
        terms: Vec<TermSpec>,
    },
    Lacunary {
        dim: usize,
        p: usize,
        q: u64,
        alpha: f64,
        #[serde(default = "default_truncation")]
        truncation: u32,
        /// Number of term-wise integrations in `z_p` applied to the series.
        #[serde(default)]
        antiderivative: u32,
    },
}

fn default_truncation() -> u32 {
    DEFAULT_LACUNARY_K
}

impl SymbolSpec {
    pub fn from_poly(p: &MultiPoly) -> Self {
        SymbolSpec::Poly {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(e, c)| TermSpec { exp: e.clone(), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn from_lacunary(l: &LacunarySeries, antiderivative: u32) -> Self {
        SymbolSpec::Lacunary {
            dim: l.dim,
            p: l.p,
            q: l.q,
            alpha: l.alpha,
            truncation: l.truncation,
            antiderivative,
        }
    }

    pub fn to_poly(&self) -> Result<MultiPoly> {
        match self {
            SymbolSpec::Poly { dim, terms } => MultiPoly::from_terms(
                *dim,
                terms.iter().map(|t| (t.exp.clone(), Complex64::new(t.re, t.im))),
            ),
            SymbolSpec::Lacunary { .. } => {
                Err(Error::InvalidInput("expected a polynomial symbol".into()))
            }
        }
    }

    pub fn to_symbol(&self) -> Result<Symbol> {
        match self {
            SymbolSpec::Poly { .. } => self.to_poly().map(Symbol::Poly),
            SymbolSpec::Lacunary { dim, p, q, alpha, truncation, antiderivative } => {
                let base: GapSeries =
                    LacunarySeries::new(*dim, *p, *q, *alpha, *truncation)?.series();
                Ok(Symbol::Series(base.antiderivative_p(*antiderivative)))
            }
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
