//! The classes `H^(n)_{μ,+}` and `H^(n)_{μ,0}`, the `(n, μ)`-condition and
//! the `λ`-scan for restricted infima.

use num_complex::Complex64;
use rayon::prelude::*;

use super::trace::{RadialTrace, Thresholds, TraceClass};
use crate::error::{Error, Result};
use crate::quantities::{radial_of_psi_times_power, script_b, SymbolPair, Variant};
use crate::sampling::{coordinate_directions, geometric_radii, norm, sphere_directions, SamplingGrid};
use crate::symbols::Symbol;
use crate::weights::RadialWeight;

type C = Complex64;

/// Deepest geometric level used for polynomial-type membership tests.
pub const POLY_MAX_LEVEL: u32 = 52;

/// Radii at which a membership trace is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiiPlan {
    /// `1 - 2^{-m}`, `m = lo..=hi`
    Geometric { lo: u32, hi: u32 },
    /// `per_window` radii inside each window
    /// `1 - q^{-k} <= |z| <= 1 - q^{-(k+span)}`, `k = k_lo..=k_hi`.
    GapWindows { q: u64, k_lo: u32, k_hi: u32, per_window: usize, span: f64 },
}

impl RadiiPlan {
    pub fn radii(&self) -> Vec<f64> {
        match *self {
            RadiiPlan::Geometric { lo, hi } => geometric_radii(lo, hi),
            RadiiPlan::GapWindows { q, k_lo, k_hi, per_window, span } => gap_window_radii(q, k_lo, k_hi, per_window, span),
        }
    }
}

/// Radii spread geometrically in `1 - |z|` across each gap window.
pub fn gap_window_radii(q: u64, k_lo: u32, k_hi: u32, per_window: usize, span: f64) -> Vec<f64> {
    let qf = q as f64;
    let mut out = Vec::new();
    for k in k_lo..=k_hi {
        for i in 0..per_window {
            let e = k as f64 + span * i as f64 / (per_window.max(2) - 1) as f64;
            out.push(1.0 - qf.powf(-e));
        }
    }
    out
}

/// Directions used for membership: low-discrepancy plus coordinate phases
/// for polynomial symbols; the phases of `e_p` alone for one-coordinate
/// gap series.
pub fn membership_directions(f: &Symbol, dir_count: usize, seed: u64) -> Vec<Vec<C>> {
    match f {
        Symbol::Poly(p) => {
            let mut d = sphere_directions(p.dim(), dir_count, seed);
            d.extend(coordinate_directions(p.dim()));
            d
        }
        Symbol::Series(s) => coordinate_directions(s.dim())
            .into_iter()
            .filter(|d| d[s.coordinate() - 1].norm() > 0.5)
            .collect(),
    }
}

/// Default radii plan for a symbol.
pub fn default_plan(f: &Symbol) -> RadiiPlan {
    match f {
        Symbol::Poly(_) => RadiiPlan::Geometric { lo: 3, hi: POLY_MAX_LEVEL },
        Symbol::Series(_) => RadiiPlan::Geometric { lo: 3, hi: 14 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Plus,
    Zero,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub class: Membership,
    pub inf_trace: RadialTrace,
    pub sup_trace: RadialTrace,
}

/// Classifies `ω(|z|)|R^(n) f(z)|` from its directional inf/sup traces, with
/// `eval(z) = R^(n) f(z)`.
pub fn membership_class(
    eval: &(dyn Fn(&[C]) -> Result<C> + Sync),
    w: &RadialWeight,
    grid: &SamplingGrid,
    th: &Thresholds,
) -> Result<MembershipReport> {
    let rows: Vec<(f64, f64)> = grid
        .radii
        .par_iter()
        .map(|&r| {
            let wr = w.value(r);
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for d in &grid.directions {
                let v = wr * eval(&SamplingGrid::point(r, d))?.norm();
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Ok((lo, hi))
        })
        .collect::<Result<_>>()?;
    let inf_trace = RadialTrace::new("inf", 0, grid.radii.clone(), rows.iter().map(|x| x.0).collect());
    let sup_trace = RadialTrace::new("sup", 0, grid.radii.clone(), rows.iter().map(|x| x.1).collect());
    Ok(MembershipReport { class: classify_membership(&inf_trace, &sup_trace, th), inf_trace, sup_trace })
}

fn classify_membership(inf: &RadialTrace, sup: &RadialTrace, th: &Thresholds) -> Membership {
    let n = inf.values.len();
    if n >= 3 && inf.values[n - 3..].iter().all(|&v| v >= th.plus) {
        return Membership::Plus;
    }
    let tail = &sup.values[sup.values.len().saturating_sub(3)..];
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    if tail.iter().all(|&v| v == 0.0)
        || (sup.last() <= th.zero && decreasing)
        || sup.slope() <= th.zero_slope
    {
        return Membership::Zero;
    }
    Membership::Neither
}

/// Membership of a symbol `f` in the `n`-th order classes.
pub fn symbol_membership(f: &Symbol, w: &RadialWeight, n: u32, plan: &RadiiPlan, dir_count: usize, seed: u64, th: &Thresholds) -> Result<MembershipReport> {
    let grid = SamplingGrid::new(f.dim(), plan.radii(), membership_directions(f, dir_count, seed), seed);
    membership_class(&|z: &[C]| f.radial_eval(n, z), w, &grid, th)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub n: u32,
    pub psi: MembershipReport,
    /// `(j, class of ψ·φ_p^j)` for `j = 1..=n`
    pub products: Vec<(u32, MembershipReport)>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.psi.class == Membership::Plus && self.products.iter().all(|(_, r)| r.class == Membership::Zero)
    }
}

/// The `(n, μ)`-condition: `ψ ∈ H_{μ,+}` and `ψ φ_p^j ∈ H_{μ,0}` for
/// `j = 1..=n`.
pub fn condition_n_mu(pair: &SymbolPair, w: &RadialWeight, n: u32, plan: &RadiiPlan, dir_count: usize, seed: u64, th: &Thresholds) -> Result<ConditionReport> {
    let grid = SamplingGrid::new(pair.dim(), plan.radii(), membership_directions(&pair.psi, dir_count, seed), seed);
    let psi = membership_class(&|z: &[C]| pair.psi.radial_eval(n, z), w, &grid, th)?;
    let products = (1..=n)
        .map(|j| {
            membership_class(&|z: &[C]| radial_of_psi_times_power(pair, n, j, z), w, &grid, th).map(|r| (j, r))
        })
        .collect::<Result<_>>()?;
    Ok(ConditionReport { n, psi, products })
}

/// Evidence that `ψ φ_p^i ∈ H^(n)_μ` for `i = 0..=i_max`: the class of the
/// sup trace of `μ|R^(n)(ψ φ_p^i)|`.
pub fn products_in_space(pair: &SymbolPair, w: &RadialWeight, n: u32, i_max: u32, plan: &RadiiPlan, dir_count: usize, seed: u64, th: &Thresholds) -> Result<Vec<(u32, TraceClass)>> {
    let grid = SamplingGrid::new(pair.dim(), plan.radii(), membership_directions(&pair.psi, dir_count, seed), seed);
    (0..=i_max)
        .map(|i| {
            let rep = membership_class(&|z: &[C]| radial_of_psi_times_power(pair, n, i, z), w, &grid, th)?;
            Ok((i, rep.sup_trace.classify(th)))
        })
        .collect()
}

pub const LAMBDA_SCAN: [f64; 5] = [0.5, 0.75, 0.9, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaReport {
    pub lambda: f64,
    /// Restricted directional infimum over the last three usable radii.
    pub inf: f64,
    pub trace: RadialTrace,
}

/// Smallest `λ` in the scan for which the directional infimum of
/// `μ(z)|ℬ_j^n(ψ;φ_p)(z)|` over `{|φ_p(z)| > λ}` stays `>= ε_+` at the last
/// three radii where the restriction is nonempty.
pub fn lemma_inf_lambda(pair: &SymbolPair, w: &RadialWeight, n: u32, j: usize, plan: &RadiiPlan, dir_count: usize, seed: u64, th: &Thresholds) -> Result<LambdaReport> {
    if j as u32 > n {
        return Err(Error::InvalidInput(format!("j = {j} exceeds n = {n}")));
    }
    let grid = SamplingGrid::new(pair.dim(), plan.radii(), membership_directions(&pair.psi, dir_count, seed), seed);
    // (|φ_p(z)|, μ|ℬ_j^n|) per radius and direction
    let samples: Vec<Vec<(f64, f64)>> = grid
        .radii
        .par_iter()
        .map(|&r| {
            grid.directions
                .iter()
                .map(|d| {
                    let z = SamplingGrid::point(r, d);
                    let psi_jet = pair.psi.radial_jet(&z, n)?;
                    let jets = pair.phi.radial_jets(&z, n);
                    let b = script_b(&psi_jet, &jets, n, j, Variant::Component(pair.p))?;
                    Ok((jets[pair.p - 1][0].norm(), w.value(norm(&z)) * b.norm()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for &lambda in &LAMBDA_SCAN {
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (r, row) in grid.radii.iter().zip(&samples) {
            let inf = row.iter().filter(|s| s.0 > lambda).map(|s| s.1).fold(f64::INFINITY, f64::min);
            if inf.is_finite() {
                radii.push(*r);
                values.push(inf);
            }
        }
        if values.len() >= 3 && values[values.len() - 3..].iter().all(|&v| v >= th.plus) {
            let inf = values[values.len() - 3..].iter().copied().fold(f64::INFINITY, f64::min);
            return Ok(LambdaReport { lambda, inf, trace: RadialTrace::new("restricted_inf", j, radii, values) });
        }
    }
    Err(Error::NoLambda(format!("no λ in {LAMBDA_SCAN:?} keeps the restricted infimum >= {}", th.plus)))
}
