//! Window-by-window lower bound for `|R^(n) ψ̃|` on the gap windows.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbols::LacunarySeries;

/// Radial levels per window edge and phases per level.
pub const WINDOW_LEVELS: usize = 9;
pub const WINDOW_PHASES: usize = 720;

/// Candidate ratios scanned by [`minimal_working_q`].
pub const Q_CANDIDATES: [u64; 16] = [10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 150, 200, 300, 500, 1000];

#[derive(Debug, Clone, PartialEq)]
pub struct WindowMargin {
    pub k: u32,
    /// `min |R^(n) ψ̃(z)| − ¼ (1−|z|)^{-α}` over the sampled window points.
    pub margin: f64,
    /// The same margin divided by `¼ (1−|z|)^{-α}` at the worst point.
    pub relative: f64,
    /// Phase-free lower bound: `min (max_d (|t_d| − Σ_{i≠d} |t_i|) − tail) − ¼ (1−|z|)^{-α}`
    /// with `t_i = a_i n_i^n z_p^{n_i}`.
    pub certified: f64,
    /// `|z_p|` and `|z|` at the worst point.
    pub worst_zp: f64,
    pub worst_z: f64,
    pub worst_phase: f64,
    /// `Q₁, Q₂, Q₃` at the worst point (`Q₃` includes the truncation tail).
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    /// Claimed bounds `Q₁ >= q1_floor`, `Q₂ <= q2_ceiling`.
    pub q1_floor: f64,
    pub q2_ceiling: f64,
    /// Neglected terms `Σ_{k>K}` at the outer window radius.
    pub tail: f64,
}

impl WindowMargin {
    /// Positive at every sampled point.
    pub fn positive(&self) -> bool {
        self.margin > 0.0
    }

    /// Positive at every point of the window, whatever the phase.
    pub fn certified_positive(&self) -> bool {
        self.certified > 0.0
    }

    pub fn tail_ratio(&self) -> f64 {
        self.tail / self.q1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub alpha: f64,
    pub q: u64,
    pub truncation: u32,
    pub n: u32,
    /// Window span: `½` for `n = 1`, `3/2` otherwise.
    pub span: f64,
    pub windows: Vec<WindowMargin>,
    /// `(1 − q^{-3})^{q³+1}`
    pub spot_check: f64,
}

impl LowerBoundReport {
    pub fn all_positive(&self) -> bool {
        !self.windows.is_empty() && self.windows.iter().all(WindowMargin::positive)
    }

    pub fn all_certified(&self) -> bool {
        !self.windows.is_empty() && self.windows.iter().all(WindowMargin::certified_positive)
    }

    /// Whether the truncation tail stays within 1% of `Q₁` in every window.
    pub fn tail_dominated(&self) -> bool {
        self.windows.iter().all(|w| w.tail_ratio() <= 0.01)
    }

    pub fn min_margin(&self) -> f64 {
        self.windows.iter().map(|w| w.margin).fold(f64::INFINITY, f64::min)
    }
}

fn level_radius(q: f64, e: f64) -> f64 {
    1.0 - q.powf(-e)
}

/// Margins on windows `k = 2..=K−2` of
/// `1 − q^{-k} <= |z_p| <= |z| <= 1 − q^{-(k+span)}`.
pub fn lacunary_lowerbound_check(alpha: f64, q: u64, truncation: u32, n: u32) -> Result<LowerBoundReport> {
    if q < 10 {
        return Err(Error::InvalidInput("the lower bound is only claimed for q >= 10".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("order n must be >= 1".into()));
    }
    if truncation < 4 {
        return Err(Error::InvalidInput("truncation K must be >= 4 to leave a window".into()));
    }
    let lac = LacunarySeries::new(1, 1, q, alpha, truncation)?;
    let series = lac.series();
    let qf = q as f64;
    let span = if n == 1 { 0.5 } else { 1.5 };
    let term = |i: u32, r: f64| lac.coefficient(i) * (lac.exponent(i) as f64).powi(n as i32) * r.powf(lac.exponent(i) as f64);
    let mut windows = Vec::new();
    for k in 2..=truncation - 2 {
        let levels: Vec<f64> = (0..WINDOW_LEVELS)
            .map(|i| k as f64 + span * i as f64 / (WINDOW_LEVELS - 1) as f64)
            .collect();
        let mut worst: Option<(f64, f64, f64, f64, f64)> = None;
        let mut certified = f64::INFINITY;
        for (a, &ep) in levels.iter().enumerate() {
            let rp = level_radius(qf, ep);
            let terms: Vec<f64> = (0..=truncation).map(|i| term(i, rp)).collect();
            let total: f64 = terms.iter().sum();
            let lead = terms.iter().copied().fold(0.0, f64::max);
            let floor = 2.0 * lead - total - lac.tail_bound(rp, n);
            for &ez in &levels[a..] {
                certified = certified.min(floor - 0.25 * (1.0 - level_radius(qf, ez)).powf(-alpha));
            }
            for t in 0..WINDOW_PHASES {
                let theta = std::f64::consts::TAU * (t as f64 + 0.5) / WINDOW_PHASES as f64;
                let value = series.radial_eval_coordinate(n, Complex64::from_polar(rp, theta)).norm();
                for &ez in &levels[a..] {
                    let rz = level_radius(qf, ez);
                    let target = 0.25 * (1.0 - rz).powf(-alpha);
                    let margin = value - target;
                    if worst.is_none_or(|w| margin < w.0) {
                        worst = Some((margin, target, rp, rz, theta));
                    }
                }
            }
        }
        let (margin, target, rp, rz, theta) = worst.expect("nonempty window");
        let nk = lac.exponent(k) as f64;
        let q1 = lac.coefficient(k) * nk.powi(n as i32) * rp.powf(nk + 1.0);
        let q2 = (0..k).map(|i| term(i, rz)).sum::<f64>();
        let q3 = (k + 1..=truncation).map(|i| term(i, rz)).sum::<f64>() + lac.tail_bound(rz, n);
        let (q1_floor, q2_ceiling) = if n == 1 {
            let s = qf.powf((k as f64 + 0.5) * alpha);
            (s / 3.0, s / (qf.powf(alpha) - 1.0))
        } else {
            let s = qf.powf((k as f64 + 1.0) * (n as f64 - 1.0) + (k as f64 + 1.5) * alpha);
            (s / 3.0, s / (qf.powf(n as f64 + alpha - 1.0) - 1.0))
        };
        windows.push(WindowMargin {
            k,
            margin,
            relative: margin / target,
            certified,
            worst_zp: rp,
            worst_z: rz,
            worst_phase: theta,
            q1,
            q2,
            q3,
            q1_floor,
            q2_ceiling,
            tail: lac.tail_bound(level_radius(qf, k as f64 + span), n),
        });
    }
    let q3k = qf.powi(3);
    Ok(LowerBoundReport {
        alpha,
        q,
        truncation,
        n,
        span,
        windows,
        spot_check: (1.0 - 1.0 / q3k).powf(q3k + 1.0),
    })
}

/// Largest usable truncation for `q`, capped at 8: `q^K` must fit in `u64`.
pub fn truncation_for(q: u64) -> u32 {
    ((62.0 / (q as f64).log2()).floor() as u32).min(8)
}

/// First candidate `q` whose windows all have certified positive margins.
pub fn minimal_working_q(alpha: f64, n: u32) -> Result<Option<u64>> {
    for &q in &Q_CANDIDATES {
        let k = truncation_for(q);
        if k < 4 {
            break;
        }
        if lacunary_lowerbound_check(alpha, q, k, n)?.all_certified() {
            return Ok(Some(q));
        }
    }
    Ok(None)
}
