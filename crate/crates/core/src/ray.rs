//! Radial derivatives of pointwise maps by differencing along rays.
//!
//! With `t = e^s`, `R^k g(z) = d^k/ds^k g(e^s z)|_{s=0}`. The k-th derivative
//! is approximated by the central stencil
//! `δ_h^k g = Σ_i (-1)^i C(k,i) g(e^{(k/2 - i) h} z) / h^k` (error `O(h²)`),
//! followed by one Richardson step on `h, h/2`.

use num_complex::Complex64;

fn binom(k: u32, i: u32) -> f64 {
    (0..i).fold(1.0, |acc, t| acc * (k - t) as f64 / (t + 1) as f64)
}

/// Step used for the k-th derivative.
pub fn stencil_step(k: u32) -> f64 {
    if k <= 1 {
        1e-4
    } else {
        f64::EPSILON.powf(1.0 / (k as f64 + 4.0))
    }
}

/// Plain central difference of order `k` at step `h` (no extrapolation).
pub fn central_difference(
    g: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    z: &[Complex64],
    k: u32,
    h: f64,
) -> Vec<Complex64> {
    let mut acc: Option<Vec<Complex64>> = None;
    for i in 0..=k {
        let s = (k as f64 / 2.0 - i as f64) * h;
        let scale = s.exp();
        let w: Vec<Complex64> = z.iter().map(|v| v * scale).collect();
        let coef = if i % 2 == 0 { 1.0 } else { -1.0 } * binom(k, i);
        let val = g(&w);
        match acc.as_mut() {
            None => acc = Some(val.into_iter().map(|v| v * coef).collect()),
            Some(a) => a.iter_mut().zip(val).for_each(|(x, v)| *x += v * coef),
        }
    }
    let hk = h.powi(k as i32);
    acc.unwrap().into_iter().map(|v| v / hk).collect()
}

/// `R^k g(z)` with one Richardson step.
pub fn radial_derivative(
    g: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    z: &[Complex64],
    k: u32,
) -> Vec<Complex64> {
    if k == 0 {
        return g(z);
    }
    let h = stencil_step(k);
    let coarse = central_difference(g, z, k, h);
    let fine = central_difference(g, z, k, h / 2.0);
    fine.iter().zip(&coarse).map(|(f, c)| (f * 4.0 - c) / 3.0).collect()
}

/// `jets[l][k] = R^k g_l(z)` for `k = 0..=order`.
pub fn radial_jets(
    g: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    z: &[Complex64],
    order: u32,
) -> Vec<Vec<Complex64>> {
    let per_order: Vec<Vec<Complex64>> = (0..=order).map(|k| radial_derivative(g, z, k)).collect();
    let comps = per_order[0].len();
    (0..comps).map(|l| per_order.iter().map(|v| v[l]).collect()).collect()
}

/// Contour nodes used by [`contour_jets`].
pub const CONTOUR_NODES: usize = 64;

/// `jets[l][k] = R^k g_l(z)` from the trapezoidal Cauchy integral
/// `k!/(M ρ^k) Σ_j g(e^{ρ ω_j} z) ω_j^{-k}` on the circle `|s| = ρ`.
/// `g(e^s z)` must be holomorphic on `|s| <= ρ`; the error decays like
/// `(ρ/ρ_max)^M`.
pub fn contour_jets(
    g: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    z: &[Complex64],
    order: u32,
    rho: f64,
) -> Vec<Vec<Complex64>> {
    let m = CONTOUR_NODES;
    let samples: Vec<(Complex64, Vec<Complex64>)> = (0..m)
        .map(|j| {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
            let scale = (w * rho).exp();
            let pt: Vec<Complex64> = z.iter().map(|v| v * scale).collect();
            (w, g(&pt))
        })
        .collect();
    let comps = samples[0].1.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); order as usize + 1]; comps];
    let mut fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            fact *= k as f64;
        }
        let norm = fact / (m as f64 * rho.powi(k as i32));
        for (w, vals) in &samples {
            let wk = w.powi(-(k as i32));
            for (l, v) in vals.iter().enumerate() {
                out[l][k as usize] += v * wk * norm;
            }
        }
    }
    out
}

/// Half the largest admissible contour radius for a map holomorphic on the
/// open ball: `e^ρ |z| < 1`.
pub fn ball_contour_radius(z: &[Complex64]) -> f64 {
    let r = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if r == 0.0 {
        1.0
    } else {
        (0.5 * (-r.ln())).min(1.0)
    }
}
