use num_complex::Complex64;

use crate::error::{Error, Result};

/// A truncated power series in the single coordinate `z_p`:
/// `Σ c_k z_p^{e_k}` with strictly increasing exponents and real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    dim: usize,
    p: usize,
    terms: Vec<(u64, f64)>,
}

impl GapSeries {
    pub fn new(dim: usize, p: usize, mut terms: Vec<(u64, f64)>) -> Result<Self> {
        if p == 0 || p > dim {
            return Err(Error::InvalidInput(format!("coordinate {p} outside 1..={dim}")));
        }
        terms.retain(|t| t.1 != 0.0);
        terms.sort_by_key(|t| t.0);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("duplicate exponent in gap series".into()));
        }
        Ok(Self { dim, p, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coordinate(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &[(u64, f64)] {
        &self.terms
    }

    fn check_domain(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::InvalidInput("point dimension mismatch".into()));
        }
        let norm2: f64 = z.iter().map(|w| w.norm_sqr()).sum();
        if norm2 >= 1.0 {
            return Err(Error::Domain(format!(
                "series evaluated at |z| = {} >= 1",
                norm2.sqrt()
            )));
        }
        Ok(z[self.p - 1])
    }

    /// `Σ c_k e_k^n z_p^{e_k}`; `n = 0` is plain evaluation.
    pub fn radial_eval(&self, n: u32, z: &[Complex64]) -> Result<Complex64> {
        let zp = self.check_domain(z)?;
        Ok(self.radial_eval_coordinate(n, zp))
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.radial_eval(0, z)
    }

    pub(crate) fn radial_eval_coordinate(&self, n: u32, zp: Complex64) -> Complex64 {
        let r = zp.norm();
        if r == 0.0 {
            return self
                .terms
                .iter()
                .find(|t| t.0 == 0)
                .map(|t| if n == 0 { Complex64::new(t.1, 0.0) } else { Complex64::new(0.0, 0.0) })
                .unwrap_or_default();
        }
        let (lr, theta) = (r.ln(), zp.arg());
        let mut acc = Complex64::new(0.0, 0.0);
        for &(e, c) in &self.terms {
            if n > 0 && e == 0 {
                continue;
            }
            let ef = e as f64;
            let modulus = (ef * lr).exp();
            if modulus == 0.0 {
                continue;
            }
            let phase = reduced_phase(e, theta);
            acc += Complex64::from_polar(c * ef.powi(n as i32) * modulus, phase);
        }
        acc
    }

    /// Term-wise repeated integration in `z_p`:
    /// `c z^m ↦ c / ((m+1)⋯(m+order)) z^{m+order}`.
    pub fn antiderivative_p(&self, order: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let denom: f64 = (1..=order as u64).map(|t| (m + t) as f64).product();
                (m + order as u64, c / denom)
            })
            .collect();
        Self { dim: self.dim, p: self.p, terms }
    }

    /// Multiply by `z_p^j`.
    pub fn shift(&self, j: u32) -> Self {
        let terms = self.terms.iter().map(|&(m, c)| (m + j as u64, c)).collect();
        Self { dim: self.dim, p: self.p, terms }
    }
}

/// `e·θ` reduced modulo `2π`, splitting `e` to limit the rounding of large products.
fn reduced_phase(e: u64, theta: f64) -> f64 {
    use std::f64::consts::TAU;
    if e < (1 << 20) {
        return (e as f64 * theta) % TAU;
    }
    let hi = e >> 20;
    let lo = e & ((1 << 20) - 1);
    let step = ((1u64 << 20) as f64 * theta) % TAU;
    ((hi as f64 * step) % TAU + lo as f64 * theta) % TAU
}

/// The gap series `Σ_{k=0}^{K} a_k z_p^{q^k}` with `a_k = q^{k(α-1)+α/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LacunarySeries {
    pub dim: usize,
    pub p: usize,
    pub q: u64,
    pub alpha: f64,
    pub truncation: u32,
}

pub const DEFAULT_LACUNARY_Q: u64 = 10;
pub const DEFAULT_LACUNARY_K: u32 = 8;

impl LacunarySeries {
    pub fn new(dim: usize, p: usize, q: u64, alpha: f64, truncation: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput("lacunary ratio q must be >= 2".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidInput("lacunary alpha must lie in (0, 1)".into()));
        }
        if p == 0 || p > dim {
            return Err(Error::InvalidInput(format!("coordinate {p} outside 1..={dim}")));
        }
        if (truncation as f64) * (q as f64).log2() >= 63.0 {
            return Err(Error::Overflow(format!("q^{truncation} does not fit in u64")));
        }
        Ok(Self { dim, p, q, alpha, truncation })
    }

    pub fn exponent(&self, k: u32) -> u64 {
        self.q.pow(k)
    }

    pub fn coefficient(&self, k: u32) -> f64 {
        (self.q as f64).powf(k as f64 * (self.alpha - 1.0) + self.alpha / 2.0)
    }

    pub fn series(&self) -> GapSeries {
        let terms = (0..=self.truncation).map(|k| (self.exponent(k), self.coefficient(k))).collect();
        GapSeries::new(self.dim, self.p, terms).expect("validated lacunary parameters")
    }

    /// Bound on the neglected terms of `R^(n)` of the series at radius `r`:
    /// `Σ_{k>K} a_k n_k^n r^{n_k}`.
    pub fn tail_bound(&self, r: f64, n: u32) -> f64 {
        let lr = r.ln();
        let qf = self.q as f64;
        let mut acc = 0.0;
        for k in self.truncation + 1..self.truncation + 40 {
            let ln_exp = k as f64 * qf.ln();
            let ln_term = (k as f64 * (self.alpha - 1.0) + self.alpha / 2.0) * qf.ln()
                + n as f64 * ln_exp
                + ln_exp.exp() * lr;
            let term = ln_term.exp();
            acc += term;
            if term < 1e-300 || !ln_exp.exp().is_finite() {
                break;
            }
        }
        acc
    }
}
