//! Normal radial weights, their (W1)/(W2) certification on a grid, the
//! iterated integrals `I^k_ω`, and the point-evaluation norm
//! representatives `1/ω` and `1 + I^n_ω`.
//!
//! All norm values are `≍`-representatives: comparison constants are
//! normalised to 1.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant of `(t, ω(t))`
/// knots, extended past the last knot by the power law in `1 - t` through
/// the last two knots.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    t: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
    tail_power: f64,
}

impl MonotoneCubic {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("tabulated weight needs >= 2 points".into()));
        }
        let (t, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
        if t.windows(2).any(|w| w[1] <= w[0]) || t[0] < 0.0 || *t.last().unwrap() >= 1.0 {
            return Err(Error::InvalidInput(
                "tabulated abscissae must increase strictly inside [0, 1)".into(),
            ));
        }
        if y.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("tabulated weight values must be positive".into()));
        }
        let n = t.len();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (t[i + 1] - t[i])).collect();
        let mut m = vec![0.0; n];
        m[0] = delta[0];
        m[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            m[i] = if delta[i - 1] * delta[i] <= 0.0 { 0.0 } else { 0.5 * (delta[i - 1] + delta[i]) };
        }
        for i in 0..n - 1 {
            if delta[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            let (a, b) = (m[i] / delta[i], m[i + 1] / delta[i]);
            let s = a * a + b * b;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                m[i] = tau * a * delta[i];
                m[i + 1] = tau * b * delta[i];
            }
        }
        let (tl, tp) = (t[n - 1], t[n - 2]);
        let tail_power = (y[n - 1] / y[n - 2]).ln() / ((1.0 - tl) / (1.0 - tp)).ln();
        Ok(Self { t, y, slopes: m, tail_power })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.y[0];
        }
        if x >= self.t[n - 1] {
            return self.y[n - 1] * ((1.0 - x) / (1.0 - self.t[n - 1])).powf(self.tail_power);
        }
        let i = self.t.partition_point(|&v| v <= x) - 1;
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let (h00, h10) = (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s);
        let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        h00 * self.y[i] + h10 * h * self.slopes[i] + h01 * self.y[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

#[derive(Clone)]
pub enum Profile {
    /// `(1 - t²)^α`
    Standard { alpha: f64 },
    /// `ω ≡ 1`; not a normal weight, used as a quadrature reference.
    Unit,
    Tabulated(MonotoneCubic),
    Custom { name: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Standard { alpha } => write!(f, "Standard({alpha})"),
            Profile::Unit => write!(f, "Unit"),
            Profile::Tabulated(_) => write!(f, "Tabulated"),
            Profile::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialWeight {
    pub profile: Profile,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
}

impl RadialWeight {
    pub fn new(profile: Profile, a: f64, b: f64, delta: f64) -> Result<Self> {
        if !(0.0 < a && a < b) || !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidInput(format!(
                "normality witnesses need 0 < a < b and 0 <= δ < 1 (got a={a}, b={b}, δ={delta})"
            )));
        }
        Ok(Self { profile, a, b, delta })
    }

    /// `(1 - t²)^α` with witnesses `a = α/2`, `b = 2α`, `δ = 1/3`.
    ///
    /// `(1+t)^α (1-t)^{α/2}` increases on `[0, 1/3)`, so `δ = 1/3` is the
    /// smallest threshold for which (W1) holds with `a = α/2`.
    pub fn standard(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidInput("standard weight needs alpha > 0".into()));
        }
        Self::new(Profile::Standard { alpha }, alpha / 2.0, 2.0 * alpha, 1.0 / 3.0)
    }

    pub fn unit() -> Self {
        Self { profile: Profile::Unit, a: 0.5, b: 1.0, delta: 0.0 }
    }

    pub fn custom(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static, a: f64, b: f64, delta: f64) -> Result<Self> {
        Self::new(Profile::Custom { name: name.into(), f: Arc::new(f) }, a, b, delta)
    }

    pub fn value(&self, t: f64) -> f64 {
        match &self.profile {
            Profile::Standard { alpha } => ((1.0 - t) * (1.0 + t)).powf(*alpha),
            Profile::Unit => 1.0,
            Profile::Tabulated(c) => c.eval(t),
            Profile::Custom { f, .. } => f(t),
        }
    }

    pub fn label(&self) -> String {
        match &self.profile {
            Profile::Standard { alpha } => format!("(1-|z|^2)^{alpha}"),
            Profile::Unit => "1".into(),
            Profile::Tabulated(_) => "tabulated".into(),
            Profile::Custom { name, .. } => name.clone(),
        }
    }
}

/// Weight description used by configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightSpec {
    Standard { alpha: f64 },
    Unit,
    Tabulated { points: Vec<[f64; 2]>, a: f64, b: f64, #[serde(default)] delta: f64 },
}

impl WeightSpec {
    pub fn build(&self) -> Result<RadialWeight> {
        match self {
            WeightSpec::Standard { alpha } => RadialWeight::standard(*alpha),
            WeightSpec::Unit => Ok(RadialWeight::unit()),
            WeightSpec::Tabulated { points, a, b, delta } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
                RadialWeight::new(Profile::Tabulated(MonotoneCubic::new(&pts)?), *a, *b, *delta)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Normality certification

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    W1Monotone,
    W1Limit,
    W2Monotone,
    W2Limit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    pub t1: f64,
    pub t2: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub violations: Vec<Violation>,
    /// Fitted slopes of `ln(ω/(1-t)^a)` and `ln(ω/(1-t)^b)` per unit `m`
    /// over the last geometric points `t_m = 1 - 2^{-m}`.
    pub w1_tail_slope: f64,
    pub w2_tail_slope: f64,
    pub grid_points: usize,
}

impl NormalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
    pub fn fails(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

const GEOMETRIC_LEVELS: u32 = 52;
const LIMIT_SLOPE: f64 = 0.01;
const MONOTONE_SLACK: f64 = 1e-12;

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Grid check of (W1) and (W2): monotonicity of `ω/(1-t)^a` and
/// `ω/(1-t)^b` on the geometric points `1 - 2^{-m}` and `grid_size`
/// uniform points of `[δ, 1)`, and the limit trends from the fitted tail
/// slopes.
pub fn certify_normal(w: &RadialWeight, grid_size: usize) -> Result<NormalityReport> {
    if grid_size < 64 {
        return Err(Error::InvalidInput("certification grid needs >= 64 points".into()));
    }
    let mut ts: Vec<f64> = (0..grid_size)
        .map(|i| w.delta + (1.0 - w.delta) * i as f64 / grid_size as f64)
        .collect();
    let geo: Vec<(u32, f64)> = (1..=GEOMETRIC_LEVELS)
        .map(|m| (m, 1.0 - 0.5f64.powi(m as i32)))
        .filter(|&(_, t)| t >= w.delta)
        .collect();
    ts.extend(geo.iter().map(|g| g.1));
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();

    let ga = |t: f64| w.value(t) / (1.0 - t).powf(w.a);
    let gb = |t: f64| w.value(t) / (1.0 - t).powf(w.b);
    let mut violations = Vec::new();
    for (cond, g, decreasing) in [
        (Condition::W1Monotone, &ga as &dyn Fn(f64) -> f64, true),
        (Condition::W2Monotone, &gb as &dyn Fn(f64) -> f64, false),
    ] {
        for pair in ts.windows(2) {
            let (v1, v2) = (g(pair[0]), g(pair[1]));
            let bad = if decreasing {
                v2 > v1 * (1.0 + MONOTONE_SLACK)
            } else {
                v2 < v1 * (1.0 - MONOTONE_SLACK)
            };
            if bad {
                violations.push(Violation { condition: cond, t1: pair[0], t2: pair[1], v1, v2 });
                break;
            }
        }
    }

    let tail: Vec<&(u32, f64)> = geo.iter().rev().take(8).collect();
    let xs: Vec<f64> = tail.iter().map(|g| g.0 as f64).collect();
    let la: Vec<f64> = tail.iter().map(|g| ga(g.1).ln()).collect();
    let lb: Vec<f64> = tail.iter().map(|g| gb(g.1).ln()).collect();
    let (sa, sb) = (fitted_slope(&xs, &la), fitted_slope(&xs, &lb));
    let (first, last) = (tail.last().unwrap().1, tail[0].1);
    if !(sa <= -LIMIT_SLOPE || ga(last) <= 1e-12) {
        violations.push(Violation { condition: Condition::W1Limit, t1: first, t2: last, v1: ga(first), v2: ga(last) });
    }
    if !(sb >= LIMIT_SLOPE || gb(last) >= 1e12) {
        violations.push(Violation { condition: Condition::W2Limit, t1: first, t2: last, v1: gb(first), v2: gb(last) });
    }
    Ok(NormalityReport { violations, w1_tail_slope: sa, w2_tail_slope: sb, grid_points: ts.len() })
}

// ---------------------------------------------------------------------------
// Iterated integrals

pub const NESTED_REL_TOL: f64 = 1e-9;

/// `I^k_ω(r)` through the Cauchy collapse
/// `∫_0^r (r-t)^{k-1}/(k-1)! · dt/ω(t)`.
pub fn nested_integral(w: &RadialWeight, k: u32, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("nested integral order must be >= 1".into()));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("nested integral radius {r} outside [0, 1)")));
    }
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let kernel = |t: f64| (r - t).powi(k as i32 - 1) / fact / w.value(t);
    integrate(&kernel, 0.0, r, QuadConfig { rel_tol: NESTED_REL_TOL, ..QuadConfig::default() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Finiteness {
    Finite { limit: f64 },
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinitenessReport {
    pub k: u32,
    pub verdict: Finiteness,
    /// `(m, I^k(1 - 2^{-m}))`
    pub values: Vec<(u32, f64)>,
    pub log_slope: f64,
    pub extrapolates: Vec<f64>,
}

pub const FINITE_LEVELS: (u32, u32) = (3, 16);
pub const CAUCHY_TOL: f64 = 1e-6;
pub const DIVERGENCE_SLOPE: f64 = 0.2;
/// Increment ratio at or above which growth is read as logarithmic divergence.
pub const LOG_DIVERGENCE_RATIO: f64 = 0.99;

fn aitken(v: &[f64]) -> Vec<f64> {
    v.windows(3)
        .map(|w| {
            let (d1, d2) = (w[1] - w[0], w[2] - w[1]);
            let den = d2 - d1;
            if den == 0.0 || !den.is_finite() {
                w[2]
            } else {
                w[2] - d2 * d2 / den
            }
        })
        .collect()
}

fn agree(v: &[f64], tol: f64) -> bool {
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let scale = v.last().map(|x| x.abs()).unwrap_or(0.0).max(f64::MIN_POSITIVE);
    (hi - lo) <= tol * scale
}

/// Evidence on whether `I^k_ω(1) < ∞`, from `I^k_ω(1 - 2^{-m})`, `m = 3..=16`.
///
/// * `Divergent`: fitted slope of `ln I` per unit `m` over the last 4 points
///   is `>= 0.2`, or the increments stop shrinking (ratio `>= 0.99`,
///   logarithmic growth).
/// * `Finite`: the last 4 raw values, or the last 4 two-pass Aitken
///   extrapolates of a sequence with shrinking increments, agree to `1e-6`.
/// * otherwise `Inconclusive`.
pub fn integral_at_one_finite(w: &RadialWeight, k: u32) -> Result<FinitenessReport> {
    if k == 0 {
        return Err(Error::InvalidInput("finiteness order must be >= 1".into()));
    }
    let (lo, hi) = FINITE_LEVELS;
    let values: Vec<(u32, f64)> = (lo..=hi)
        .map(|m| nested_integral(w, k, 1.0 - 0.5f64.powi(m as i32)).map(|v| (m, v)))
        .collect::<Result<_>>()?;
    let v: Vec<f64> = values.iter().map(|x| x.1).collect();
    let last4 = &v[v.len() - 4..];
    let xs: Vec<f64> = values[values.len() - 4..].iter().map(|x| x.0 as f64).collect();
    let logs: Vec<f64> = last4.iter().map(|x| x.ln()).collect();
    let log_slope = fitted_slope(&xs, &logs);

    let inc: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let ratios: Vec<f64> = inc.windows(2).map(|w| w[1] / w[0]).collect();
    let tail_ratios = &ratios[ratios.len() - 3..];
    let extrapolates = aitken(&aitken(&v));

    let verdict = if log_slope >= DIVERGENCE_SLOPE {
        Finiteness::Divergent
    } else if agree(last4, CAUCHY_TOL) {
        Finiteness::Finite { limit: *v.last().unwrap() }
    } else if tail_ratios.iter().all(|&q| q >= LOG_DIVERGENCE_RATIO) {
        Finiteness::Divergent
    } else if tail_ratios.iter().all(|&q| q > 0.0 && q < 1.0)
        && agree(&extrapolates[extrapolates.len() - 4..], CAUCHY_TOL)
    {
        Finiteness::Finite { limit: *extrapolates.last().unwrap() }
    } else {
        Finiteness::Inconclusive
    };
    Ok(FinitenessReport { k, verdict, values, log_slope, extrapolates })
}

/// `I^k_ω(1)` verdict with the conventions `I^0_ω(1) = ∞` (since `ω → 0`)
/// and negative orders rejected.
pub fn finiteness_at_one(w: &RadialWeight, k: i64) -> Result<Finiteness> {
    match k {
        k if k < 0 => Err(Error::InvalidInput(format!("negative integral order {k}"))),
        0 => Ok(Finiteness::Divergent),
        k => Ok(integral_at_one_finite(w, k as u32)?.verdict),
    }
}

/// `‖δ_z‖` representative on `H^(n)_ω` at `|z| = r`: `1/ω(r)` for `n = 0`,
/// `1 + I^n_ω(r)` otherwise.
pub fn delta_norm(w: &RadialWeight, n: u32, r: f64) -> Result<f64> {
    if n == 0 {
        Ok(1.0 / w.value(r))
    } else {
        Ok(1.0 + nested_integral(w, n, r)?)
    }
}
