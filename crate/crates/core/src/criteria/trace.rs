//! Radial traces `r_m ↦ value` and their evidence classification.

use crate::sampling::radius_level;

/// Classification thresholds. Every report prints them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Bounded when the fitted slope is at most this.
    pub bounded_slope: f64,
    /// Divergent when the fitted slope is at least this and the tail increases.
    pub divergent_slope: f64,
    /// Vanishing when the last value is at most this and the tail decreases.
    pub vanishing: f64,
    /// `H_{μ,+}` lower level for the directional infimum.
    pub plus: f64,
    /// `H_{μ,0}` upper level for the directional supremum.
    pub zero: f64,
    /// `H_{μ,0}` is also granted when the supremum decays at least this fast.
    pub zero_slope: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { bounded_slope: 0.05, divergent_slope: 0.2, vanishing: 1e-4, plus: 1e-3, zero: 1e-4, zero_slope: -0.2 }
    }
}

impl Thresholds {
    pub fn describe(&self) -> String {
        format!(
            "bounded: slope<={}; divergent: slope>={} increasing; vanishing: last<={} decreasing; plus: inf>={}; zero: sup<={} decreasing or slope<={}",
            self.bounded_slope, self.divergent_slope, self.vanishing, self.plus, self.zero, self.zero_slope
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceClass {
    Vanishing,
    Bounded,
    Divergent,
    Inconclusive,
}

/// Points used for the slope fit.
pub const FIT_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialTrace {
    pub quantity: String,
    pub j: usize,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialTrace {
    pub fn new(quantity: impl Into<String>, j: usize, radii: Vec<f64>, values: Vec<f64>) -> Self {
        Self { quantity: quantity.into(), j, radii, values }
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn last(&self) -> f64 {
        *self.values.last().unwrap_or(&f64::NAN)
    }

    /// Fitted `d ln(value) / d ln(1/(1-r))` over the last four points;
    /// `-∞` when the last value is zero.
    pub fn slope(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return f64::NAN;
        }
        if self.last() == 0.0 {
            return f64::NEG_INFINITY;
        }
        let start = n.saturating_sub(FIT_POINTS);
        let pts: Vec<(f64, f64)> = (start..n)
            .filter(|&i| self.values[i] > 0.0)
            .map(|i| (radius_level(self.radii[i]) * std::f64::consts::LN_2, self.values[i].ln()))
            .collect();
        if pts.len() < 2 {
            return f64::NAN;
        }
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        num / den
    }

    fn tail(&self, len: usize) -> &[f64] {
        &self.values[self.values.len().saturating_sub(len)..]
    }

    pub fn classify(&self, th: &Thresholds) -> TraceClass {
        if self.values.len() < 3 {
            return TraceClass::Inconclusive;
        }
        let t3 = self.tail(3);
        if t3.iter().all(|&v| v == 0.0) {
            return TraceClass::Vanishing;
        }
        if self.last() <= th.vanishing && t3.windows(2).all(|w| w[1] < w[0]) {
            return TraceClass::Vanishing;
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return TraceClass::Divergent;
        }
        let s = self.slope();
        if s >= th.divergent_slope && self.tail(FIT_POINTS).windows(2).all(|w| w[1] > w[0]) {
            return TraceClass::Divergent;
        }
        if s <= th.bounded_slope {
            return TraceClass::Bounded;
        }
        TraceClass::Inconclusive
    }

    /// Exact check that the trace never increases.
    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::geometric_radii;

    fn trace(f: impl Fn(f64) -> f64) -> RadialTrace {
        let radii = geometric_radii(3, 14);
        let values = radii.iter().map(|&r| f(r)).collect();
        RadialTrace::new("q", 0, radii, values)
    }

    #[test]
    fn power_law_slopes() {
        let th = Thresholds::default();
        let t = trace(|r| (1.0 - r).powf(-0.5));
        assert!((t.slope() - 0.5).abs() < 1e-9);
        assert_eq!(t.classify(&th), TraceClass::Divergent);
        let b = trace(|r| 2.0 - r);
        assert_eq!(b.classify(&th), TraceClass::Bounded);
        let v = trace(|r| 1.0 - r);
        assert_eq!(v.classify(&th), TraceClass::Vanishing);
        assert_eq!(trace(|_| 0.0).classify(&th), TraceClass::Vanishing);
        assert_eq!(trace(|_| 0.0).slope(), f64::NEG_INFINITY);
        // logarithmic growth sits between the two slope thresholds
        let l = trace(|r| (1.0 / (1.0 - r)).ln());
        assert!(l.slope() > 0.05 && l.slope() < 0.2);
        assert_eq!(l.classify(&th), TraceClass::Inconclusive);
    }

    #[test]
    fn overflow_is_divergent() {
        let mut t = trace(|_| 1.0);
        *t.values.last_mut().unwrap() = f64::INFINITY;
        assert_eq!(t.classify(&Thresholds::default()), TraceClass::Divergent);
    }
}
