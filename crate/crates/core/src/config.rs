//! Run configuration in TOML.
//!
//! ```toml
//! [run]
//! n = 1
//! m = 1
//! max_m = 14
//! dirs = 256
//! seed = 20240601
//!
//! [weights.nu]
//! kind = "standard"
//! alpha = 1.0
//! [weights.mu]
//! kind = "unit"
//!
//! [symbol]
//! p = 1
//! [symbol.psi]
//! kind = "poly"
//! dim = 2
//! terms = [{ exp = [0, 0], re = 1.0 }]
//! [[symbol.phi.components]]
//! kind = "poly"
//! dim = 2
//! terms = [{ exp = [1, 0], re = 0.5 }]
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::criteria::theorems::{CriterionConfig, Theorem, MAX_DIRS_CAP, MAX_LEVEL_CAP};
use crate::error::{Error, Result};
use crate::quantities::SymbolPair;
use crate::sampling::DEFAULT_SEED;
use crate::symbols::{SelfMap, SymbolSpec};
use crate::weights::{RadialWeight, WeightSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n: u32,
    pub m: u32,
    #[serde(default)]
    pub n0: Option<u32>,
    #[serde(default = "default_max_m")]
    pub max_m: u32,
    #[serde(default = "default_dirs")]
    pub dirs: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_theorems")]
    pub theorems: Vec<String>,
}

fn default_max_m() -> u32 {
    14
}

fn default_dirs() -> usize {
    256
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_theorems() -> Vec<String> {
    ["A1", "A2", "C1", "C2"].iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    pub nu: WeightSpec,
    pub mu: WeightSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSection {
    pub components: Vec<SymbolSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSection {
    pub p: usize,
    pub psi: SymbolSpec,
    pub phi: PhiSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub weights: WeightsSection,
    pub symbol: SymbolSection,
    #[serde(default)]
    pub out: Option<String>,
}

/// Built-in configurations by name.
pub const BUILTINS: [(&str, &str); 2] = [
    ("contraction", include_str!("../configs/contraction.toml")),
    ("identity-singular", include_str!("../configs/identity-singular.toml")),
];

/// Line and column (both 1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().trim().to_string();
            match e.span() {
                Some(span) => {
                    let (line, col) = line_col(text, span.start);
                    Error::Parse(format!("line {line}, column {col}: {msg}"))
                }
                None => Error::Parse(msg),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let text = BUILTINS
            .iter()
            .find(|b| b.0 == name)
            .map(|b| b.1)
            .ok_or_else(|| Error::InvalidInput(format!("no built-in config `{name}`")))?;
        Self::parse(text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.symbol.phi.components.len()
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("φ needs at least one component".into()));
        }
        if self.symbol.p == 0 || self.symbol.p > dim {
            return Err(Error::InvalidInput(format!("p = {} outside 1..={dim}", self.symbol.p)));
        }
        if self.run.max_m < 6 || self.run.max_m > MAX_LEVEL_CAP {
            return Err(Error::Resource(format!("max_m = {} outside 6..={MAX_LEVEL_CAP}", self.run.max_m)));
        }
        if self.run.dirs > MAX_DIRS_CAP {
            return Err(Error::Resource(format!("{} directions exceed the cap {MAX_DIRS_CAP}", self.run.dirs)));
        }
        self.theorems()?;
        Ok(())
    }

    pub fn theorems(&self) -> Result<Vec<Theorem>> {
        self.run
            .theorems
            .iter()
            .map(|t| match t.as_str() {
                "A1" => Ok(Theorem::A1),
                "A2" => Ok(Theorem::A2),
                "C1" => Ok(Theorem::C1),
                "C2" => Ok(Theorem::C2),
                other => Err(Error::InvalidInput(format!("unknown theorem `{other}`"))),
            })
            .collect()
    }

    pub fn weights(&self) -> Result<(RadialWeight, RadialWeight)> {
        Ok((self.weights.nu.build()?, self.weights.mu.build()?))
    }

    pub fn pair(&self) -> Result<SymbolPair> {
        let comps = self.symbol.phi.components.iter().map(SymbolSpec::to_poly).collect::<Result<Vec<_>>>()?;
        let phi = SelfMap::new(comps)?;
        SymbolPair::new(self.symbol.psi.to_symbol()?, Arc::new(phi), self.symbol.p)
    }

    pub fn criterion_config(&self) -> CriterionConfig {
        CriterionConfig {
            n: self.run.n,
            m: self.run.m,
            n0: self.run.n0,
            max_m: self.run.max_m,
            dirs: self.run.dirs,
            seed: self.run.seed,
            ..CriterionConfig::default()
        }
    }
}
