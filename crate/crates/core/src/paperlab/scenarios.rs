//! Scenario registry: each scenario builds its data, runs the checks and
//! diffs the observations against its stated expected outcomes.

use std::sync::Arc;

use num_complex::Complex64;

use super::lacunary::{lacunary_lowerbound_check, minimal_working_q};
use super::lemmas::{lemma31_transfer_check, lemma32_cgamma_check, symmetric_grid, TransferWeight};
use super::maps::{quadratic_shift_map, rotated_diagonal_map, shifted_half_map, DiscAutomorphismMap};
use crate::criteria::membership::{condition_n_mu, lemma_inf_lambda, symbol_membership, Membership, RadiiPlan};
use crate::criteria::stilde::{point_covered, stilde_membership, StildeConfig};
use crate::criteria::trace::Thresholds;
use crate::error::{Error, Result};
use crate::mobius::MobiusMap;
use crate::quantities::SymbolPair;
use crate::sampling::DEFAULT_SEED;
use crate::symbols::{Composed, LacunarySeries, PointMap, SelfMap, Symbol};
use crate::weights::RadialWeight;

type C = Complex64;

/// One expected-versus-observed comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub agrees: bool,
}

impl Check {
    fn flag(name: &str, expected: bool, observed: bool) -> Self {
        Self {
            name: name.into(),
            expected: yes_no(expected).into(),
            observed: yes_no(observed).into(),
            agrees: expected == observed,
        }
    }

    fn value(name: &str, expected: impl Into<String>, observed: impl Into<String>, agrees: bool) -> Self {
        Self { name: name.into(), expected: expected.into(), observed: observed.into(), agrees }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub id: String,
    /// The expected outcome is contradicted by a reproducible counterexample.
    pub disputed: bool,
    pub checks: Vec<Check>,
    /// Numbers recorded alongside the checks.
    pub notes: Vec<String>,
}

impl ScenarioOutcome {
    /// Checks whose observation disagrees with the expectation.
    pub fn diff(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.agrees).collect()
    }

    pub fn diff_empty(&self) -> bool {
        self.checks.iter().all(|c| c.agrees)
    }
}

pub struct Scenario {
    pub id: &'static str,
    pub summary: &'static str,
    pub disputed: bool,
    run: fn() -> Result<ScenarioOutcome>,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("id", &self.id).field("disputed", &self.disputed).finish()
    }
}

impl Scenario {
    pub fn run(&self) -> Result<ScenarioOutcome> {
        (self.run)()
    }
}

pub fn registry() -> Vec<Scenario> {
    vec![
        Scenario { id: "stilde-ex1", summary: "½(z₁+½, z₂/2): S̃₁ yes, S*₁ no, −i/2 missed", disputed: false, run: stilde_ex1 },
        Scenario { id: "stilde-ex2", summary: "(1/5)(3z₁, (3/2)z₂²+i, z₃): S̃₂ yes, S*₂ no, −i/2 missed", disputed: true, run: stilde_ex2 },
        Scenario { id: "stilde-ex3", summary: "(e^{iθ_k} a_k z_k): S̃_p yes, S*_p no", disputed: false, run: stilde_ex3 },
        Scenario { id: "lacunary-ratio", summary: "a_k n_k^{1−α} = q^{α/2} in logs", disputed: false, run: lacunary_ratio },
        Scenario { id: "lacunary-plus", summary: "iterated antiderivative of the gap series is in H_{μ,+}^(2)", disputed: false, run: lacunary_plus },
        Scenario { id: "lacunary-ex2-plus", summary: "gap series with a disc automorphism in z_p: ψ ∈ H_{μ,+}^(2)", disputed: false, run: lacunary_ex2_plus },
        Scenario { id: "lacunary-lowerbound", summary: "|Rψ̃| >= ¼(1−|z|)^{-α} on the gap windows for q large", disputed: false, run: lacunary_lowerbound },
        Scenario { id: "lemma31-transfer", summary: "sup h‖δ_φ‖ bounded by M^j_p", disputed: false, run: lemma31_transfer },
        Scenario { id: "lemma32-cgamma", summary: "C_γ bounded on H^(n)_ω with bounded inverse", disputed: false, run: lemma32_cgamma },
        Scenario { id: "example1-antiderivative", summary: "R^(n)ψ = Rψ̃·z_p^{n−1} for the iterated antiderivative", disputed: true, run: example1_antiderivative },
        Scenario { id: "example1-products", summary: "ψ·z_p^j ∈ H_{μ,0}^(n) for j = 1..n", disputed: true, run: example1_products },
        Scenario { id: "example1-lambda", summary: "inf over |φ_p| > λ of μ|ℬ_j^n| positive for j = 0..n", disputed: false, run: example1_lambda },
    ]
}

pub fn scenario_ids() -> Vec<&'static str> {
    registry().iter().map(|s| s.id).collect()
}

pub fn run_scenario(id: &str) -> Result<ScenarioOutcome> {
    registry()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownScenario(id.into()))?
        .run()
}

fn outcome(id: &str, disputed: bool, checks: Vec<Check>, notes: Vec<String>) -> Result<ScenarioOutcome> {
    Ok(ScenarioOutcome { id: id.into(), disputed, checks, notes })
}

fn stilde_checks(phi: &dyn PointMap, p: usize, missed: Option<C>) -> (Vec<Check>, Vec<String>) {
    let cfg = StildeConfig::default();
    let ev = stilde_membership(phi, p, &cfg);
    let mut checks = vec![Check::flag("stilde", true, ev.stilde), Check::flag("star", false, ev.star)];
    if let Some(x) = missed {
        let hit = point_covered(phi, p, x, cfg.cover_tol, &cfg);
        checks.push(Check::flag(&format!("covers {x}"), false, hit));
    }
    let notes = vec![
        format!("sup|φ_{p}| = {:.6}", ev.sup_component),
        format!("sup|φ| = {:.6}", ev.sup_full),
        format!("min|φ| = {:.3e}", ev.min_full),
        format!("disc coverage = {:.4}", ev.coverage),
    ];
    (checks, notes)
}

fn stilde_ex1() -> Result<ScenarioOutcome> {
    let (c, n) = stilde_checks(&shifted_half_map(), 1, Some(C::new(0.0, -0.5)));
    outcome("stilde-ex1", false, c, n)
}

fn stilde_ex2() -> Result<ScenarioOutcome> {
    let (c, mut n) = stilde_checks(&quadratic_shift_map(), 2, Some(C::new(0.0, -0.5)));
    n.push("exact values: sup|φ| = √10/5 at z = e₁, sup|φ₂| = 1/2".into());
    outcome("stilde-ex2", true, c, n)
}

fn stilde_ex3() -> Result<ScenarioOutcome> {
    let map = rotated_diagonal_map(&[C::new(0.6, 0.0), C::new(0.0, 0.3)], &[0.4, 1.1])?;
    let (c, n) = stilde_checks(&map, 1, Some(C::new(0.0, -0.7)));
    outcome("stilde-ex3", false, c, n)
}

fn lacunary_ratio() -> Result<ScenarioOutcome> {
    let l = LacunarySeries::new(1, 1, 10, 0.5, 8)?;
    let target = l.alpha / 2.0 * (l.q as f64).ln();
    let err = (0..=l.truncation)
        .map(|k| (l.coefficient(k).ln() + (1.0 - l.alpha) * (l.exponent(k) as f64).ln() - target).abs())
        .fold(0.0, f64::max);
    let checks = vec![Check::value("max |ln(a_k n_k^{1−α}) − (α/2) ln q|", "<= 1e-12", format!("{err:.3e}"), err <= 1e-12)];
    outcome("lacunary-ratio", false, checks, vec![])
}

/// The iterated antiderivative of the given order in `z_p` of the gap series
/// with `q = 10`, `α = 1/2`, `K = 8`.
pub fn example1_psi(dim: usize, p: usize, order: u32) -> Result<Symbol> {
    Ok(Symbol::Series(LacunarySeries::new(dim, p, 10, 0.5, 8)?.series().antiderivative_p(order)))
}

fn window_plan(span: f64) -> RadiiPlan {
    RadiiPlan::GapWindows { q: 10, k_lo: 2, k_hi: 6, per_window: 4, span }
}

fn lacunary_plus() -> Result<ScenarioOutcome> {
    let n = 2;
    let psi = example1_psi(2, 1, n - 1)?;
    let mu = RadialWeight::standard(0.5)?;
    let rep = symbol_membership(&psi, &mu, n, &window_plan(0.5), 0, DEFAULT_SEED, &Thresholds::default())?;
    let checks = vec![Check::value("membership", "Plus", format!("{:?}", rep.class), rep.class == Membership::Plus)];
    let notes = vec![format!("inf trace = {:?}", rep.inf_trace.values)];
    outcome("lacunary-plus", false, checks, notes)
}

fn lacunary_ex2_plus() -> Result<ScenarioOutcome> {
    let n = 2;
    let psi = Symbol::Series(LacunarySeries::new(2, 1, 10, 0.5, 8)?.series());
    let mu = RadialWeight::standard(0.5)?;
    let phi = DiscAutomorphismMap::new(2, 1, C::new(0.5, 0.2))?;
    let rep = symbol_membership(&psi, &mu, n, &window_plan(1.5), 0, DEFAULT_SEED, &Thresholds::default())?;
    let cfg = StildeConfig { disc_radii: 128, disc_phases: 512, ..StildeConfig::default() };
    let ev = stilde_membership(&phi, 1, &cfg);
    let checks = vec![
        Check::value("membership", "Plus", format!("{:?}", rep.class), rep.class == Membership::Plus),
        Check::flag("star", true, ev.star),
    ];
    let notes = vec![format!("inf trace = {:?}", rep.inf_trace.values), format!("disc coverage = {:.4}", ev.coverage)];
    outcome("lacunary-ex2-plus", false, checks, notes)
}

fn lacunary_lowerbound() -> Result<ScenarioOutcome> {
    let q = minimal_working_q(0.5, 1)?;
    let pinned = lacunary_lowerbound_check(0.5, 10, 8, 1)?;
    let spot = pinned.spot_check;
    let checks = vec![
        Check::value("some q >= 10 gives positive margins on every window", "yes", match q {
            Some(q) => format!("yes (q = {q})"),
            None => "no".into(),
        }, q.is_some()),
        Check::value("(1 − 10^{-3})^{10³+1} >= 1/3", "yes", format!("{spot:.6}"), spot >= 1.0 / 3.0),
    ];
    let notes = pinned
        .windows
        .iter()
        .map(|w| format!("q = 10, k = {}: sampled margin {:.4e}, certified {:.4e}, tail/Q1 {:.2e}", w.k, w.margin, w.certified, w.tail_ratio()))
        .collect();
    outcome("lacunary-lowerbound", false, checks, notes)
}

fn lemma31_transfer() -> Result<ScenarioOutcome> {
    let nu = RadialWeight::standard(1.0)?;
    let half = SelfMap::scaled_identity(2, 0.5);
    let a = lemma31_transfer_check(&half, 1, &nu, &TransferWeight::Unit, 1, 12, 32, DEFAULT_SEED)?;
    let phi = shifted_half_map();
    let gamma = MobiusMap::new(vec![C::new(-0.5, 0.0), C::new(0.0, 0.0)])?;
    let comp = Composed { outer: &phi, inner: &gamma };
    let h = TransferWeight::Shifted(RadialWeight::standard(0.5)?);
    let b = lemma31_transfer_check(&comp, 1, &nu, &h, 1, 12, 32, DEFAULT_SEED)?;
    let strong = RadialWeight::standard(3.0)?;
    let id = SelfMap::identity(2);
    let c = lemma31_transfer_check(&id, 1, &strong, &TransferWeight::Unit, 1, 12, 32, DEFAULT_SEED)?;
    let checks = [("half identity", &a), ("recentred example map", &b), ("identity, strongly vanishing ν", &c)]
        .iter()
        .map(|(name, r)| Check::value(name, "bounded", format!("sup ratio {:.4}", r.sup_ratio()), r.bounded()))
        .collect();
    let notes = vec![format!("identity sides at m = 12: {:.4e} / {:.4e}", c.levels.last().map_or(0.0, |l| l.lhs), c.levels.last().map_or(0.0, |l| l.rhs))];
    outcome("lemma31-transfer", false, checks, notes)
}

fn lemma32_cgamma() -> Result<ScenarioOutcome> {
    let w = RadialWeight::standard(1.0)?;
    let grid = symmetric_grid(2, 10, 16, DEFAULT_SEED);
    let unitary = lemma32_cgamma_check(&MobiusMap::new(vec![C::new(0.0, 0.0); 2])?, &w, 1, 3, &grid)?;
    let shifted = lemma32_cgamma_check(&MobiusMap::new(vec![C::new(0.3, 0.0), C::new(0.0, 0.0)])?, &w, 1, 3, &grid)?;
    let unit_err = (unitary.forward() - 1.0).abs().max((unitary.inverse() - 1.0).abs());
    let checks = vec![
        Check::value("α = 0 ratio", "1", format!("|ratio − 1| = {unit_err:.2e}"), unit_err <= 1e-12),
        Check::value("α = 0.3e₁ ratios", "finite and stable", format!("{:.4} / {:.4}", shifted.forward(), shifted.inverse()), shifted.stable()),
        Check::value("round trip f∘γ∘γ", "ratio 1", format!("|ratio − 1| = {:.2e}", shifted.round_trip), shifted.round_trip <= 1e-9),
    ];
    let notes = shifted.by_degree.iter().map(|(d, f, i)| format!("degree <= {d}: {f:.6} / {i:.6}")).collect();
    outcome("lemma32-cgamma", false, checks, notes)
}

fn example1_antiderivative() -> Result<ScenarioOutcome> {
    let n = 3;
    let base = LacunarySeries::new(1, 1, 10, 0.5, 8)?.series();
    let z = [C::from_polar(1.0 - 10f64.powf(-3.25), 0.7)];
    let rhs = base.radial_eval(1, &z)? * z[0].powu(n - 1);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for order in [n - 2, n - 1] {
        let psi = base.antiderivative_p(order);
        let lhs = psi.radial_eval(n, &z)?;
        let rel = (lhs - rhs).norm() / rhs.norm();
        checks.push(Check::value(&format!("order {order}: R^(n)ψ = Rψ̃·z_p^{{n−1}}"), "exact", format!("relative gap {rel:.3e}"), rel <= 1e-10));
        notes.push(format!("n = {n}, |z| = {:.6}, order {order}: |lhs| = {:.6e}, |rhs| = {:.6e}", z[0].norm(), lhs.norm(), rhs.norm()));
    }
    outcome("example1-antiderivative", true, checks, notes)
}

fn example1_pair(n: u32) -> Result<SymbolPair> {
    SymbolPair::new(example1_psi(2, 1, n - 1)?, Arc::new(SelfMap::identity(2)), 1)
}

fn example1_products() -> Result<ScenarioOutcome> {
    let n = 2;
    let pair = example1_pair(n)?;
    let mu = RadialWeight::standard(0.5)?;
    let rep = condition_n_mu(&pair, &mu, n, &window_plan(0.5), 0, DEFAULT_SEED, &Thresholds::default())?;
    let mut checks = vec![Check::value("ψ", "Plus", format!("{:?}", rep.psi.class), rep.psi.class == Membership::Plus)];
    let mut notes = Vec::new();
    for (j, r) in &rep.products {
        checks.push(Check::value(&format!("ψ·z_p^{j}"), "Zero", format!("{:?}", r.class), r.class == Membership::Zero));
        notes.push(format!("ψ·z_p^{j} sup trace = {:?}", r.sup_trace.values));
    }
    outcome("example1-products", true, checks, notes)
}

fn example1_lambda() -> Result<ScenarioOutcome> {
    let n = 2;
    let pair = example1_pair(n)?;
    let mu = RadialWeight::standard(0.5)?;
    let th = Thresholds::default();
    let mut checks = Vec::new();
    for j in 0..=n as usize {
        let obs = lemma_inf_lambda(&pair, &mu, n, j, &window_plan(0.5), 0, DEFAULT_SEED, &th);
        let observed = match &obs {
            Ok(r) => format!("λ = {}", r.lambda),
            Err(e) => e.to_string(),
        };
        checks.push(Check::value(&format!("j = {j}"), "some λ < 1", observed, obs.is_ok()));
    }
    outcome("example1-lambda", false, checks, vec![])
}
