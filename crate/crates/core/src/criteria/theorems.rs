//! Boundedness (A1, A2) and compactness (C1, C2) criteria for
//! `W_{ψ,φ}` from sampled traces of the `ℬ`-quantities.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use super::trace::{RadialTrace, Thresholds, TraceClass};
use crate::error::{Error, Result};
use crate::quantities::{script_b, SymbolPair, Variant};
use crate::sampling::{geometric_radii, norm, SamplingGrid, DEFAULT_SEED};
use crate::weights::{delta_norm, finiteness_at_one, Finiteness, RadialWeight};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `H^(n+m)_ν → H^(n)_μ` boundedness
    A1,
    /// `H^(n)_ν → H^(n+m)_μ` boundedness
    A2,
    /// `H^(n+m)_ν → H^(n)_μ` compactness
    C1,
    /// `H^(n)_ν → H^(n+m)_μ` compactness
    C2,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::A1 => "A1",
            Theorem::A2 => "A2",
            Theorem::C1 => "C1",
            Theorem::C2 => "C2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    BoundedEvidence,
    DivergentEvidence,
    CompactEvidence,
    NotCompactEvidence,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Set over which the compactness suprema are restricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// `{|φ_p(z)| > r}`
    Component,
    /// `{|φ(z)| > r}`
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionConfig {
    pub n: u32,
    pub m: u32,
    pub n0: Option<u32>,
    /// Deepest level `m` of the radii `1 - 2^{-m}`; traces start at 3.
    pub max_m: u32,
    pub dirs: usize,
    pub seed: u64,
    pub thresholds: Thresholds,
    /// Restriction for C1 (default: component).
    pub c1_restriction: Restriction,
    /// Restriction for C2 (default: full map).
    pub c2_restriction: Restriction,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        Self {
            n: 1,
            m: 1,
            n0: None,
            max_m: 14,
            dirs: 256,
            seed: DEFAULT_SEED,
            thresholds: Thresholds::default(),
            c1_restriction: Restriction::Component,
            c2_restriction: Restriction::Full,
        }
    }
}

pub const MAX_LEVEL_CAP: u32 = 40;
pub const MAX_DIRS_CAP: usize = 1 << 16;
/// Extra geometric levels sampled beyond the deepest compactness threshold.
pub const RESTRICTION_OVERSHOOT: u32 = 2;
/// Uniform radii added to the compactness sample.
pub const RESTRICTION_UNIFORM: usize = 32;

impl CriterionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_m < 6 || self.max_m > MAX_LEVEL_CAP {
            return Err(Error::InvalidInput(format!("max_m = {} outside 6..={MAX_LEVEL_CAP}", self.max_m)));
        }
        if self.dirs > MAX_DIRS_CAP {
            return Err(Error::Resource(format!("{} directions exceed the cap {MAX_DIRS_CAP}", self.dirs)));
        }
        Ok(())
    }

    fn grid(&self, dim: usize) -> SamplingGrid {
        SamplingGrid::standard(dim, geometric_radii(3, self.max_m), self.dirs, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub theorem: Theorem,
    pub traces: Vec<RadialTrace>,
    pub classes: Vec<TraceClass>,
    pub verdict: Verdict,
    pub norm_estimate: Option<f64>,
    pub n0: Option<u32>,
    pub seed: u64,
    pub thresholds: Thresholds,
}

/// One sampled quantity family: a name, an index, and the value at `z`.
struct Family {
    names: Vec<(String, usize)>,
}

fn a1_values(pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, n: u32, m: u32, js: &[usize], z: &[C]) -> Result<Vec<f64>> {
    let psi_jet = pair.psi.radial_jet(z, n)?;
    let jets = pair.phi.radial_jets(z, n);
    let fp = jets[pair.p - 1][0].norm();
    let mz = mu.value(norm(z));
    js.iter()
        .map(|&j| {
            if j as u32 > n {
                return Ok(0.0);
            }
            let b = script_b(&psi_jet, &jets, n, j, Variant::Component(pair.p))?.norm();
            Ok(if b == 0.0 { 0.0 } else { mz * b * delta_norm(nu, n + m - j as u32, fp)? })
        })
        .collect()
}

fn a2_values(pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, n: u32, m: u32, z: &[C]) -> Result<Vec<f64>> {
    let order = n + m;
    let psi_jet = pair.psi.radial_jet(z, order)?;
    let jets = pair.phi.radial_jets(z, order);
    let fp = jets[pair.p - 1][0].norm();
    let mz = mu.value(norm(z));
    let mut out = Vec::with_capacity((n + m + 1) as usize);
    for j in 0..=n as usize {
        let b = script_b(&psi_jet, &jets, order, j, Variant::Component(pair.p))?.norm();
        out.push(if b == 0.0 { 0.0 } else { mz * b * delta_norm(nu, n - j as u32, fp)? });
    }
    for k in 1..=m {
        let b = script_b(&psi_jet, &jets, order, (n + k) as usize, Variant::Component(pair.p))?.norm();
        out.push(if b == 0.0 { 0.0 } else { mz * b / (nu.value(fp) * (1.0 - fp * fp).powi(k as i32)) });
    }
    Ok(out)
}

fn a2_family(n: u32, m: u32) -> Family {
    let mut names: Vec<(String, usize)> = (0..=n as usize).map(|j| ("script_b_delta".to_string(), j)).collect();
    names.extend((1..=m as usize).map(|k| ("singular".to_string(), k)));
    Family { names }
}

/// Sup over directions at each radius of every quantity.
fn directional_sup_traces(
    grid: &SamplingGrid,
    family: &Family,
    values: &(dyn Fn(&[C]) -> Result<Vec<f64>> + Sync),
) -> Result<Vec<RadialTrace>> {
    let rows: Vec<Vec<f64>> = grid
        .radii
        .par_iter()
        .map(|&r| {
            let mut sup = vec![0.0f64; family.names.len()];
            for d in &grid.directions {
                for (s, v) in sup.iter_mut().zip(values(&SamplingGrid::point(r, d))?) {
                    *s = if v.is_nan() { f64::NAN } else { s.max(v) };
                }
            }
            Ok(sup)
        })
        .collect::<Result<_>>()?;
    Ok(family
        .names
        .iter()
        .enumerate()
        .map(|(q, (name, j))| RadialTrace::new(name.clone(), *j, grid.radii.clone(), rows.iter().map(|row| row[q]).collect()))
        .collect())
}

/// Restricted suprema `sup_{|φ_*(z)| > r_m} Q(z)` at each threshold `r_m`,
/// over a sample that extends past the deepest threshold.
fn restricted_sup_traces(
    pair: &SymbolPair,
    cfg: &CriterionConfig,
    restriction: Restriction,
    family: &Family,
    values: &(dyn Fn(&[C]) -> Result<Vec<f64>> + Sync),
) -> Result<Vec<RadialTrace>> {
    let thresholds = geometric_radii(3, cfg.max_m);
    let mut radii: Vec<f64> = (0..RESTRICTION_UNIFORM).map(|i| i as f64 / RESTRICTION_UNIFORM as f64).collect();
    radii.extend(geometric_radii(1, cfg.max_m + RESTRICTION_OVERSHOOT));
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    let grid = SamplingGrid::standard(pair.dim(), radii, cfg.dirs, cfg.seed);
    let samples: Vec<Vec<(f64, Vec<f64>)>> = grid
        .radii
        .par_iter()
        .map(|&r| {
            grid.directions
                .iter()
                .map(|d| {
                    let z = SamplingGrid::point(r, d);
                    let image = pair.phi.apply(&z);
                    let key = match restriction {
                        Restriction::Component => image[pair.p - 1].norm(),
                        Restriction::Full => norm(&image),
                    };
                    Ok((key, values(&z)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<&(f64, Vec<f64>)> = samples.iter().flatten().collect();
    Ok(family
        .names
        .iter()
        .enumerate()
        .map(|(q, (name, j))| {
            let vals = thresholds
                .iter()
                .map(|&t| flat.iter().filter(|s| s.0 > t).map(|s| s.1[q]).fold(0.0, f64::max))
                .collect();
            RadialTrace::new(name.clone(), *j, thresholds.clone(), vals)
        })
        .collect())
}

fn boundedness_verdict(classes: &[TraceClass]) -> Verdict {
    if classes.iter().any(|c| *c == TraceClass::Divergent) {
        Verdict::DivergentEvidence
    } else if classes.iter().all(|c| matches!(c, TraceClass::Bounded | TraceClass::Vanishing)) {
        Verdict::BoundedEvidence
    } else {
        Verdict::Inconclusive
    }
}

fn compactness_verdict(traces: &[RadialTrace], classes: &[TraceClass], th: &Thresholds) -> Verdict {
    if classes.iter().all(|c| *c == TraceClass::Vanishing) {
        return Verdict::CompactEvidence;
    }
    let stalls = traces.iter().zip(classes).any(|(t, c)| match c {
        TraceClass::Divergent => true,
        TraceClass::Bounded => t.last() > th.vanishing && t.slope() >= -th.bounded_slope,
        _ => false,
    });
    if stalls {
        Verdict::NotCompactEvidence
    } else {
        Verdict::Inconclusive
    }
}

fn finish(theorem: Theorem, traces: Vec<RadialTrace>, cfg: &CriterionConfig, norm_estimate: Option<f64>, n0: Option<u32>) -> CriterionReport {
    let classes: Vec<TraceClass> = traces.iter().map(|t| t.classify(&cfg.thresholds)).collect();
    let verdict = match theorem {
        Theorem::A1 | Theorem::A2 => boundedness_verdict(&classes),
        Theorem::C1 | Theorem::C2 => compactness_verdict(&traces, &classes, &cfg.thresholds),
    };
    CriterionReport { theorem, traces, classes, verdict, norm_estimate, n0, seed: cfg.seed, thresholds: cfg.thresholds }
}

/// Traces of `sup_dir μ|ℬ_j^n(ψ;φ_p)|·‖δ_{φ_p(z)}^{H^(n+m-j)_ν}‖`,
/// `j = 0..=n`, and the norm representative
/// `|ψ(0)|·‖δ_{φ(0)}^{H^(n+m)_ν}‖ + Σ_j sup`.
pub fn boundedness_a1(pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, cfg: &CriterionConfig) -> Result<CriterionReport> {
    cfg.validate()?;
    let (n, m) = (cfg.n, cfg.m);
    let js: Vec<usize> = (0..=n as usize).collect();
    let family = Family { names: js.iter().map(|&j| ("script_b_delta".to_string(), j)).collect() };
    let traces = directional_sup_traces(&cfg.grid(pair.dim()), &family, &|z| a1_values(pair, nu, mu, n, m, &js, z))?;
    let origin = vec![C::new(0.0, 0.0); pair.dim()];
    let head = pair.psi.eval(&origin)?.norm() * delta_norm(nu, n + m, norm(&pair.phi.apply(&origin)))?;
    let norm_estimate = head + traces.iter().map(|t| t.sup()).sum::<f64>();
    Ok(finish(Theorem::A1, traces, cfg, Some(norm_estimate), None))
}

/// Traces of `sup_dir μ|ℬ_j^{n+m}(ψ;φ_p)|·‖δ_{φ_p(z)}^{H^(n-j)_ν}‖` for
/// `j = 0..=n` and of the singular factors
/// `sup_dir μ|ℬ_{n+k}^{n+m}(ψ;φ_p)| / (ν(φ_p)(1-|φ_p|²)^k)` for `k = 1..=m`.
pub fn boundedness_a2(pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, cfg: &CriterionConfig) -> Result<CriterionReport> {
    cfg.validate()?;
    let (n, m) = (cfg.n, cfg.m);
    let traces = directional_sup_traces(&cfg.grid(pair.dim()), &a2_family(n, m), &|z| a2_values(pair, nu, mu, n, m, z))?;
    let origin = vec![C::new(0.0, 0.0); pair.dim()];
    let head = pair.psi.eval(&origin)?.norm() * delta_norm(nu, n, pair.phi.apply(&origin)[pair.p - 1].norm())?;
    let norm_estimate = head + traces.iter().map(|t| t.sup()).sum::<f64>();
    Ok(finish(Theorem::A2, traces, cfg, Some(norm_estimate), None))
}

/// `I^{base-n0+1}_ν(1) < ∞ = I^{base-n0}_ν(1)`
pub fn pattern_holds(nu: &RadialWeight, base: u32, n0: u32) -> Result<bool> {
    let hi = base as i64 - n0 as i64;
    if hi < 0 {
        return Ok(false);
    }
    let finite_above = matches!(finiteness_at_one(nu, hi + 1)?, Finiteness::Finite { .. });
    Ok(finite_above && finiteness_at_one(nu, hi)? == Finiteness::Divergent)
}

/// The supplied `n0` if it matches the finiteness pattern, otherwise the
/// first matching `n0 ∈ 0..=n+1` when none was supplied.
pub fn resolve_n0(nu: &RadialWeight, base: u32, n: u32, supplied: Option<u32>) -> Result<u32> {
    match supplied {
        Some(k) => {
            if k <= n + 1 && pattern_holds(nu, base, k)? {
                Ok(k)
            } else {
                Err(Error::HypothesisMismatch {
                    max: n + 1,
                    detail: format!(": supplied n0 = {k} does not satisfy I^{{{}}}(1) < ∞ = I^{{{}}}(1)", base as i64 - k as i64 + 1, base as i64 - k as i64),
                })
            }
        }
        None => {
            for k in 0..=n + 1 {
                if pattern_holds(nu, base, k)? {
                    return Ok(k);
                }
            }
            Err(Error::HypothesisMismatch { max: n + 1, detail: String::new() })
        }
    }
}

/// Restricted-sup traces for `j = n0..=n+1` of
/// `μ|ℬ_j^n(ψ;φ_p)|·‖δ_{φ_p(z)}^{H^(n+m-j)_ν}‖`; compact iff all vanish.
pub fn compactness_c1(pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, cfg: &CriterionConfig) -> Result<CriterionReport> {
    cfg.validate()?;
    let (n, m) = (cfg.n, cfg.m);
    let n0 = resolve_n0(nu, n + m, n, cfg.n0)?;
    let js: Vec<usize> = (n0 as usize..=n as usize + 1).collect();
    let family = Family { names: js.iter().map(|&j| ("restricted_script_b_delta".to_string(), j)).collect() };
    let traces = restricted_sup_traces(pair, cfg, cfg.c1_restriction, &family, &|z| a1_values(pair, nu, mu, n, m, &js, z))?;
    Ok(finish(Theorem::C1, traces, cfg, None, Some(n0)))
}

/// Restricted-sup traces of the A2 family; compact iff all vanish.
pub fn compactness_c2(pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, cfg: &CriterionConfig) -> Result<CriterionReport> {
    cfg.validate()?;
    let (n, m) = (cfg.n, cfg.m);
    let n0 = resolve_n0(nu, n, n, cfg.n0)?;
    let mut family = a2_family(n, m);
    for name in family.names.iter_mut() {
        name.0 = format!("restricted_{}", name.0);
    }
    let traces = restricted_sup_traces(pair, cfg, cfg.c2_restriction, &family, &|z| a2_values(pair, nu, mu, n, m, z))?;
    Ok(finish(Theorem::C2, traces, cfg, None, Some(n0)))
}

pub fn run(theorem: Theorem, pair: &SymbolPair, nu: &RadialWeight, mu: &RadialWeight, cfg: &CriterionConfig) -> Result<CriterionReport> {
    match theorem {
        Theorem::A1 => boundedness_a1(pair, nu, mu, cfg),
        Theorem::A2 => boundedness_a2(pair, nu, mu, cfg),
        Theorem::C1 => compactness_c1(pair, nu, mu, cfg),
        Theorem::C2 => compactness_c2(pair, nu, mu, cfg),
    }
}
