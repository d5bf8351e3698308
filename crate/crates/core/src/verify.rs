//! Property suites run by `verify`: the calculus identities checked against
//! exact symbolic oracles on a seeded random corpus, and the scenario suite.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobius::{inner, MobiusMap};
use crate::multiindex::WeakComposition;
use crate::paperlab::{registry, ScenarioOutcome};
use crate::quantities::{
    close, exact_multinomial, faa_di_bruno_radial_with, psi_phi_power_expansion, Coefficient, SymbolPair,
};
use crate::symbols::{MultiPoly, SelfMap, SymbolSpec, DEFAULT_TERM_CAP};
use crate::weights::{nested_integral, RadialWeight};

type C = Complex64;

pub const IDENTITY_TOL: f64 = 1e-10;
pub const MODULUS_TOL: f64 = 1e-12;
/// Below this magnitude errors are measured absolutely.
pub const ABS_FLOOR: f64 = 1e-12;
pub const DEFAULT_CASES: usize = 200;
pub const DEFAULT_POINTS: usize = 20;
pub const MOBIUS_SAMPLES: usize = 1000;
pub const VERIFY_SEED: u64 = 0x5eed_0f_1d;

pub const CSV_HEADER: &str = "suite,check,cases,failures,max_error,tolerance,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Examples,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "examples" => Ok(Suite::Examples),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!("unknown suite `{other}` (identities, examples, all)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A scenario whose expected outcome is contradicted by a recorded counterexample.
    Disputed,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Disputed => "disputed",
        })
    }
}

/// A failing instance, serializable as TOML.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub case: usize,
    pub n: u32,
    /// `[re, im]` per coordinate.
    pub point: Vec<[f64; 2]>,
    pub expected: [f64; 2],
    pub observed: [f64; 2],
    pub error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<SymbolSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<SymbolSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub phi: Vec<SymbolSpec>,
}

impl Counterexample {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    /// Free-form explanation (scenario diffs).
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{:e},{:e},{}",
                c.suite, c.name, c.cases, c.failures, c.max_error, c.tolerance, c.status
            );
        }
        out
    }
}

#[derive(Clone, Copy)]
pub struct VerifyOptions<'a> {
    pub cases: usize,
    pub points: usize,
    pub seed: u64,
    /// Chain-rule coefficient; replaced by a corrupted one for fault injection.
    pub coefficient: &'a Coefficient,
}

impl Default for VerifyOptions<'_> {
    fn default() -> Self {
        Self { cases: DEFAULT_CASES, points: DEFAULT_POINTS, seed: VERIFY_SEED, coefficient: &exact_multinomial }
    }
}

/// `C^n_k + 1` whenever `k` has two or more nonzero parts.
pub fn corrupted_multinomial(n: u32, k: &WeakComposition) -> Result<u64> {
    let c = exact_multinomial(n, k)?;
    Ok(if k.parts().iter().filter(|&&p| p > 0).count() >= 2 { c + 1 } else { c })
}

/// One corpus entry: `f`, `ψ` and `φ` on `B_N`, an order `n`, a power `j0 <= n`
/// of the distinguished coordinate `p`, and evaluation points.
#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub n: u32,
    pub j0: u32,
    pub p: usize,
    pub f: MultiPoly,
    pub psi: MultiPoly,
    pub phi: SelfMap,
    pub points: Vec<Vec<C>>,
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, deg: u32, max_terms: usize) -> MultiPoly {
    let n_terms = rng.random_range(1..=max_terms);
    let terms = (0..n_terms).map(|_| {
        let mut exp = vec![0u32; dim];
        for _ in 0..rng.random_range(0..=deg) {
            exp[rng.random_range(0..dim)] += 1;
        }
        (exp, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    });
    MultiPoly::from_terms(dim, terms).expect("exponents match the dimension")
}

/// A point with `|z| <= rmax`, direction uniform on the sphere.
pub fn random_ball_point(rng: &mut ChaCha8Rng, dim: usize, rmax: f64) -> Vec<C> {
    loop {
        let v: Vec<C> = (0..dim)
            .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let nv = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-3 && nv <= 1.0 {
            let r = rmax * rng.random_range(0.0..1.0f64).powf(1.0 / (2 * dim) as f64);
            return v.iter().map(|c| c * (r / nv)).collect();
        }
    }
}

/// Seeded corpus with `N <= 3`, degrees `<= 3` and `n <= 4`.
pub fn corpus(cases: usize, points: usize, seed: u64) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases)
        .map(|_| {
            let dim = rng.random_range(1..=3usize);
            let n = rng.random_range(0..=4u32);
            let f = random_poly(&mut rng, dim, 3, 5);
            let psi = random_poly(&mut rng, dim, 3, 4);
            let comps = (0..dim).map(|_| random_poly(&mut rng, dim, 3, 4)).collect();
            let phi = SelfMap::new(comps).expect("nonempty");
            let j0 = rng.random_range(0..=n);
            let p = rng.random_range(1..=dim);
            let points = (0..points).map(|_| random_ball_point(&mut rng, dim, 0.95)).collect();
            CorpusCase { n, j0, p, f, psi, phi, points }
        })
        .collect()
}

fn error(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(ABS_FLOOR)
}

struct Tally {
    name: &'static str,
    tol: f64,
    cases: usize,
    failures: usize,
    max_error: f64,
    first: Option<Counterexample>,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, tol, cases: 0, failures: 0, max_error: 0.0, first: None }
    }

    fn record(&mut self, expected: C, observed: C, cx: impl FnOnce(f64) -> Counterexample) {
        self.cases += 1;
        let e = error(expected, observed);
        self.max_error = self.max_error.max(e);
        if !close(expected, observed, self.tol, ABS_FLOOR) {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(cx(e));
            }
        }
    }

    /// Absolute deviation `dev` of a unit-scale quantity.
    fn record_deviation(&mut self, dev: f64, cx: impl FnOnce(f64) -> Counterexample) {
        self.cases += 1;
        self.max_error = self.max_error.max(dev);
        if !(dev <= self.tol) {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(cx(dev));
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            suite: "identities",
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            max_error: self.max_error,
            tolerance: self.tol,
            status: if self.failures == 0 { Status::Pass } else { Status::Fail },
            counterexample: self.first,
            detail: String::new(),
        }
    }
}

fn pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

fn point(z: &[C]) -> Vec<[f64; 2]> {
    z.iter().map(|&c| pair(c)).collect()
}

fn base_cx(check: &str, case: usize, c: &CorpusCase, z: &[C], expected: C, observed: C, e: f64) -> Counterexample {
    Counterexample {
        check: check.into(),
        case,
        n: c.n,
        point: point(z),
        expected: pair(expected),
        observed: pair(observed),
        error: e,
        p: None,
        j0: None,
        f: Some(SymbolSpec::from_poly(&c.f)),
        psi: None,
        phi: c.phi.components().iter().map(SymbolSpec::from_poly).collect(),
    }
}

/// Chain rule, product rule and power expansion against exact symbolic
/// composition and radial differentiation.
pub fn calculus_checks(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut fdb = Tally::new("faa-di-bruno", IDENTITY_TOL);
    let mut prod = Tally::new("product-rule", IDENTITY_TOL);
    let mut power = Tally::new("psi-phi-power", IDENTITY_TOL);
    for (ci, c) in corpus(opts.cases, opts.points, opts.seed).iter().enumerate() {
        let composed = c.f.compose(c.phi.components(), DEFAULT_TERM_CAP)?;
        let product = c.psi.mul_capped(&composed, DEFAULT_TERM_CAP)?;
        let powered = c.psi.mul(&c.phi.component(c.p).pow(c.j0));
        let sp = SymbolPair::new(c.psi.clone().into(), std::sync::Arc::new(c.phi.clone()), c.p)?;
        for z in &c.points {
            let exact = composed.radial_eval(c.n, z);
            let got = faa_di_bruno_radial_with(&c.f, &c.phi, c.n, z, opts.coefficient)?;
            fdb.record(exact, got, |e| base_cx("faa-di-bruno", ci, c, z, exact, got, e));

            let psi_jet: Vec<C> = (0..=c.n).map(|k| c.psi.radial_eval(k, z)).collect();
            let mut got = C::new(0.0, 0.0);
            for i in 0..=c.n {
                let b = crate::multiindex::binomial(c.n as u64, i as u64)? as f64;
                got += psi_jet[(c.n - i) as usize]
                    * faa_di_bruno_radial_with(&c.f, &c.phi, i, z, opts.coefficient)?
                    * b;
            }
            let exact = product.radial_eval(c.n, z);
            prod.record(exact, got, |e| Counterexample {
                psi: Some(SymbolSpec::from_poly(&c.psi)),
                ..base_cx("product-rule", ci, c, z, exact, got, e)
            });

            let exact = powered.radial_eval(c.n, z);
            let got = psi_phi_power_expansion(&sp, c.n, c.j0, z)?.binomial;
            power.record(exact, got, |e| Counterexample {
                p: Some(c.p),
                j0: Some(c.j0),
                f: None,
                psi: Some(SymbolSpec::from_poly(&c.psi)),
                ..base_cx("psi-phi-power", ci, c, z, exact, got, e)
            });
        }
    }
    Ok(vec![fdb.finish(), prod.finish(), power.finish()])
}

/// `1 − |γ_α(z)|² = (1−|α|²)(1−|z|²)/|1−⟨z,α⟩|²`, `γ_α∘γ_α = id`,
/// `γ_α(0) = α` and `γ_α(α) = 0` on seeded `(α, z)`.
pub fn mobius_checks(samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modulus = Tally::new("mobius-modulus", MODULUS_TOL);
    let mut invol = Tally::new("mobius-involution", IDENTITY_TOL);
    let mut ends = Tally::new("mobius-endpoints", MODULUS_TOL);
    for case in 0..samples {
        let dim = rng.random_range(1..=3usize);
        let alpha = random_ball_point(&mut rng, dim, 0.95);
        let z = random_ball_point(&mut rng, dim, 0.99);
        let g = MobiusMap::new(alpha.clone())?;
        let cx = |check: &str, expected: C, observed: C, e: f64| Counterexample {
            check: check.into(),
            case,
            n: 0,
            point: point(&z),
            expected: pair(expected),
            observed: pair(observed),
            error: e,
            p: None,
            j0: None,
            f: None,
            psi: None,
            phi: Vec::new(),
        };
        let gz = g.apply(&z);
        let lhs = 1.0 - gz.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let z2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let rhs = (1.0 - g.center_norm_sqr()) * (1.0 - z2) / (C::new(1.0, 0.0) - inner(&z, &alpha)).norm_sqr();
        modulus.record(C::new(rhs, 0.0), C::new(lhs, 0.0), |e| cx("mobius-modulus", C::new(rhs, 0.0), C::new(lhs, 0.0), e));

        let back = g.apply(&gz);
        let dev = back.iter().zip(&z).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        invol.record_deviation(dev, |e| cx("mobius-involution", C::new(0.0, 0.0), C::new(dev, 0.0), e));

        let zero = vec![C::new(0.0, 0.0); dim];
        let d0 = g.apply(&zero).iter().zip(&alpha).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let d1 = g.apply(&alpha).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let dev = d0.max(d1);
        ends.record_deviation(dev, |e| cx("mobius-endpoints", C::new(0.0, 0.0), C::new(dev, 0.0), e));
    }
    Ok(vec![modulus.finish(), invol.finish(), ends.finish()])
}

/// Collapsed `I^k` for `ω ≡ 1` against `r^k / k!`, `k = 1..=3`.
pub fn unit_weight_checks() -> Result<Vec<CheckResult>> {
    let w = RadialWeight::unit();
    let mut t = Tally::new("unit-weight-collapse", MODULUS_TOL);
    for k in 1..=3u32 {
        for r in [0.25f64, 0.5, 0.9] {
            let exact = r.powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
            let got = nested_integral(&w, k, r)?;
            t.record(C::new(exact, 0.0), C::new(got, 0.0), |e| Counterexample {
                check: "unit-weight-collapse".into(),
                case: k as usize,
                n: k,
                point: vec![[r, 0.0]],
                expected: [exact, 0.0],
                observed: [got, 0.0],
                error: e,
                p: None,
                j0: None,
                f: None,
                psi: None,
                phi: Vec::new(),
            });
        }
    }
    Ok(vec![t.finish()])
}

pub fn scenario_result(o: &ScenarioOutcome) -> CheckResult {
    let diff = o.diff();
    let status = match (diff.is_empty(), o.disputed) {
        (true, _) => Status::Pass,
        (false, true) => Status::Disputed,
        (false, false) => Status::Fail,
    };
    let detail = diff
        .iter()
        .map(|c| format!("{}: expected {}, observed {}", c.name, c.expected, c.observed))
        .collect::<Vec<_>>()
        .join("; ");
    CheckResult {
        suite: "examples",
        name: o.id.clone(),
        cases: o.checks.len(),
        failures: diff.len(),
        max_error: 0.0,
        tolerance: 0.0,
        status,
        counterexample: None,
        detail,
    }
}

pub fn example_checks() -> Result<Vec<CheckResult>> {
    registry().iter().map(|s| Ok(scenario_result(&s.run()?))).collect()
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(calculus_checks(opts)?);
        checks.extend(mobius_checks(MOBIUS_SAMPLES, opts.seed)?);
        checks.extend(unit_weight_checks()?);
    }
    if matches!(suite, Suite::Examples | Suite::All) {
        checks.extend(example_checks()?);
    }
    Ok(VerifyReport { checks })
}
