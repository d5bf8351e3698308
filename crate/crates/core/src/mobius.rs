//! The involutive automorphisms `γ_α` of the unit ball.
//!
//! `γ_α(z) = (α - P_α z - s_α Q_α z) / (1 - ⟨z, α⟩)` with `P_α` the
//! orthogonal projection onto `[α]`, `Q_α = I - P_α`, `s_α = √(1 - |α|²)`,
//! and `γ_0(z) = -z`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ray;
use crate::sampling::{self, norm, SamplingGrid};
use crate::symbols::PointMap;
use crate::weights::RadialWeight;

type C = Complex64;

/// `⟨z, w⟩ = Σ z_i w̄_i`
pub fn inner(z: &[C], w: &[C]) -> C {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub const NEAR_POLE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap {
    alpha: Vec<C>,
    s: f64,
    norm2: f64,
}

impl MobiusMap {
    pub fn new(alpha: Vec<C>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidInput("Möbius center needs dimension >= 1".into()));
        }
        let norm2: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        if !(norm2 < 1.0) {
            return Err(Error::Domain(format!("Möbius center |α|² = {norm2} must be < 1")));
        }
        Ok(Self { alpha, s: (1.0 - norm2).sqrt(), norm2 })
    }

    pub fn center(&self) -> &[C] {
        &self.alpha
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn center_norm_sqr(&self) -> f64 {
        self.norm2
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    fn is_origin(&self) -> bool {
        self.norm2 == 0.0
    }

    /// `P_α(z) + s_α Q_α(z)`
    fn linear_part(&self, z: &[C]) -> Vec<C> {
        let c = inner(z, &self.alpha) / self.norm2;
        z.iter()
            .zip(&self.alpha)
            .map(|(zi, ai)| {
                let p = ai * c;
                p + (zi - p) * self.s
            })
            .collect()
    }

    pub fn apply(&self, z: &[C]) -> Vec<C> {
        if self.is_origin() {
            return z.iter().map(|v| -v).collect();
        }
        let den = C::new(1.0, 0.0) - inner(z, &self.alpha);
        self.linear_part(z)
            .iter()
            .zip(&self.alpha)
            .map(|(b, a)| (a - b) / den)
            .collect()
    }

    /// `apply` restricted to the open ball, refusing points with
    /// `|1 - ⟨z, α⟩| < 1e-12`.
    pub fn apply_checked(&self, z: &[C]) -> Result<Vec<C>> {
        if z.len() != self.dim() {
            return Err(Error::InvalidInput(format!("point has {} coordinates, map has {}", z.len(), self.dim())));
        }
        if !(norm(z) < 1.0) {
            return Err(Error::Domain(format!("|z| = {} is not inside the ball", norm(z))));
        }
        let gap = (C::new(1.0, 0.0) - inner(z, &self.alpha)).norm();
        if gap < NEAR_POLE {
            return Err(Error::Domain(format!("near pole: |1 - <z,α>| = {gap:e}")));
        }
        Ok(self.apply(z))
    }

    /// `R^k γ(z)` in closed form. Along the ray `t ↦ γ(tz)` with
    /// `B = P_α z + s_α Q_α z` and `c = ⟨z, α⟩`,
    /// `R^k γ(z) = (α c - B) · A_k(c) / (1 - c)^{k+1}` for `k >= 1`, where
    /// `A_k` is the Eulerian polynomial.
    pub fn radial_derivative_exact(&self, z: &[C], k: u32) -> Vec<C> {
        if k == 0 {
            return self.apply(z);
        }
        if self.is_origin() {
            return z.iter().map(|v| -v).collect();
        }
        let c = inner(z, &self.alpha);
        let one = C::new(1.0, 0.0);
        let eul = eulerian(k).iter().rev().fold(C::new(0.0, 0.0), |acc, &a| acc * c + a as f64);
        let factor = eul / (one - c).powi(k as i32 + 1);
        self.linear_part(z)
            .iter()
            .zip(&self.alpha)
            .map(|(b, a)| (a * c - b) * factor)
            .collect()
    }

    /// `max |γ(γ(z)) - z|` over `samples` seeded points with `|z| <= 0.99`.
    pub fn involution_check(&self, samples: usize, seed: u64) -> Result<f64> {
        if samples == 0 {
            return Err(Error::InvalidInput("involution check needs >= 1 sample".into()));
        }
        let dirs = sampling::sphere_directions(self.dim(), samples, seed);
        Ok(dirs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let r = 0.99 * sampling::radical_inverse(i as u64 + 1, 2);
                let z: Vec<C> = d.iter().map(|v| v * r).collect();
                deviation(&self.apply(&self.apply(&z)), &z)
            })
            .fold(0.0, f64::max))
    }

    /// `sup |R^k γ|` over the grid, by ray differencing.
    pub fn radial_derivative_sup(&self, k: u32, grid: &SamplingGrid) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidInput("derivative order must be >= 1".into()));
        }
        let g = |w: &[C]| self.apply(w);
        Ok(grid
            .points()
            .map(|z| norm(&ray::radial_derivative(&g, &z, k)))
            .fold(0.0, f64::max))
    }

    /// `|γ_p(z)|² <= A_p² + A² |z'_p|²` with `z' = γ(γ_p(z) e_p)`, at every
    /// grid point. `p` is 1-based.
    pub fn component_bound_check(&self, p: usize, grid: &SamplingGrid) -> Result<ComponentBound> {
        if p == 0 || p > self.dim() {
            return Err(Error::InvalidInput(format!("coordinate {p} out of 1..={}", self.dim())));
        }
        if self.is_origin() {
            return Err(Error::InvalidInput("component bound needs α != 0".into()));
        }
        let a = self.norm2.sqrt();
        let ap2 = 2.0 * self.alpha[p - 1].norm_sqr() / (a * (1.0 + a));
        let a2 = (1.0 - a) / (1.0 + a);
        let mut max_excess = f64::NEG_INFINITY;
        for z in grid.points() {
            let gp = self.apply(&z)[p - 1];
            let mut e = vec![C::new(0.0, 0.0); self.dim()];
            e[p - 1] = gp;
            let zp = self.apply(&e)[p - 1];
            max_excess = max_excess.max(gp.norm_sqr() - (ap2 + a2 * zp.norm_sqr()));
        }
        Ok(ComponentBound { ap2, a2, max_excess })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentBound {
    pub ap2: f64,
    pub a2: f64,
    /// `max (|γ_p(z)|² - A_p² - A²|z'_p|²)`; `<= 0` when the bound holds.
    pub max_excess: f64,
}

impl ComponentBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_excess <= tol
    }
    /// `A_p² + A²`
    pub fn constant_sum(&self) -> f64 {
        self.ap2 + self.a2
    }
}

fn deviation(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Coefficients `A(k, 0..k)` of the Eulerian polynomial `A_k`, with
/// `Σ_j j^k u^j = u A_k(u) / (1 - u)^{k+1}`.
pub fn eulerian(k: u32) -> Vec<u64> {
    let mut row = vec![1u64];
    for n in 2..=k as u64 {
        let mut next = vec![0u64; n as usize];
        for m in 0..n as usize {
            let keep = if m < row.len() { (m as u64 + 1) * row[m] } else { 0 };
            let shift = if m >= 1 && m - 1 < row.len() { (n - m as u64) * row[m - 1] } else { 0 };
            next[m] = keep + shift;
        }
        row = next;
    }
    row
}

impl PointMap for MobiusMap {
    fn dim(&self) -> usize {
        self.alpha.len()
    }
    fn apply(&self, z: &[C]) -> Vec<C> {
        MobiusMap::apply(self, z)
    }
    fn radial_jets(&self, z: &[C], order: u32) -> Vec<Vec<C>> {
        let per: Vec<Vec<C>> = (0..=order).map(|k| self.radial_derivative_exact(z, k)).collect();
        (0..self.dim()).map(|l| per.iter().map(|v| v[l]).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioTrace {
    pub radii: Vec<f64>,
    /// `ν(|z|) / ν(|γ(z)|)`
    pub ratios: Vec<f64>,
    /// `ν(|z_p|) / ν(|γ_p(z)|)`
    pub coordinate_ratios: Vec<f64>,
}

impl RatioTrace {
    pub fn sup(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
    pub fn coordinate_sup(&self) -> f64 {
        self.coordinate_ratios.iter().copied().fold(0.0, f64::max)
    }
    pub fn last(&self) -> f64 {
        *self.ratios.last().unwrap_or(&f64::NAN)
    }
    pub fn is_decreasing(&self) -> bool {
        self.ratios.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Samples `ν(z)/ν(γ(z))` along the ray `r·direction` (unit direction) at
/// the given radii; the coordinate ratio uses coordinate `p` (1-based).
pub fn weight_ratio_trend(
    w: &RadialWeight,
    gamma: &MobiusMap,
    direction: &[C],
    p: usize,
    radii: &[f64],
) -> Result<RatioTrace> {
    if p == 0 || p > gamma.dim() || direction.len() != gamma.dim() {
        return Err(Error::InvalidInput("ratio trace: coordinate or direction mismatch".into()));
    }
    let mut trace = RatioTrace { radii: radii.to_vec(), ratios: Vec::new(), coordinate_ratios: Vec::new() };
    for &r in radii {
        let z: Vec<C> = direction.iter().map(|v| v * r).collect();
        let g = gamma.apply_checked(&z)?;
        trace.ratios.push(w.value(norm(&z)) / w.value(norm(&g)));
        trace.coordinate_ratios.push(w.value(z[p - 1].norm()) / w.value(g[p - 1].norm()));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn half_e1() -> MobiusMap {
        MobiusMap::new(vec![c(0.5, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn fixes_center_swaps_origin() {
        let g = MobiusMap::new(vec![c(0.3, -0.2), c(0.1, 0.4), c(0.0, 0.2)]).unwrap();
        assert!(deviation(&g.apply(&[c(0.0, 0.0); 3]), g.center()) < 1e-15);
        assert!(norm(&g.apply(g.center())) < 1e-15);
        assert!((g.s() * g.s() + g.center_norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn origin_center_is_negation() {
        let g = MobiusMap::new(vec![c(0.0, 0.0); 2]).unwrap();
        let z = [c(0.2, 0.1), c(-0.3, 0.5)];
        assert_eq!(g.apply(&z), vec![-z[0], -z[1]]);
        assert_eq!(g.involution_check(50, 1).unwrap(), 0.0);
        for k in 1..4 {
            assert_eq!(g.radial_derivative_exact(&z, k), vec![-z[0], -z[1]]);
        }
    }

    #[test]
    fn rejects_bad_centers_and_points() {
        assert!(MobiusMap::new(vec![c(1.0, 0.0)]).is_err());
        assert!(MobiusMap::new(vec![]).is_err());
        assert!(half_e1().apply_checked(&[c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn involution_to_tolerance() {
        assert!(half_e1().involution_check(100, 7).unwrap() <= 1e-10);
        let g = MobiusMap::new(vec![c(0.4, 0.3), c(-0.2, 0.5)]).unwrap();
        let dirs = sampling::sphere_directions(2, 64, 3);
        for d in dirs {
            let z: Vec<C> = d.iter().map(|v| v * 0.999).collect();
            assert!(deviation(&g.apply(&g.apply(&z)), &z) <= 1e-8);
        }
    }

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian(1), vec![1]);
        assert_eq!(eulerian(3), vec![1, 4, 1]);
        assert_eq!(eulerian(5), vec![1, 26, 66, 26, 1]);
    }

    #[test]
    fn closed_form_matches_ray_stencil() {
        let g = MobiusMap::new(vec![c(0.3, 0.1), c(-0.2, 0.25)]).unwrap();
        let z = [c(0.4, -0.3), c(0.1, 0.5)];
        let f = |w: &[C]| g.apply(w);
        for k in 1..=4 {
            let (a, b) = (g.radial_derivative_exact(&z, k), ray::radial_derivative(&f, &z, k));
            assert!(deviation(&a, &b) < 1e-6 * norm(&a).max(1.0), "k={k}");
        }
    }

    #[test]
    fn sup_of_first_derivative() {
        let g0 = MobiusMap::new(vec![c(0.0, 0.0); 2]).unwrap();
        let grid = SamplingGrid::closed_ball(2, 32, 16, 1);
        let s = g0.radial_derivative_sup(1, &grid).unwrap();
        assert!(s > 0.99 && s <= 1.0 + 1e-8);

        let g = MobiusMap::new(vec![c(0.3, 0.0), c(0.0, 0.0)]).unwrap();
        let coarse = g.radial_derivative_sup(1, &SamplingGrid::closed_ball(2, 16, 32, 1)).unwrap();
        let fine = g.radial_derivative_sup(1, &SamplingGrid::closed_ball(2, 64, 128, 1)).unwrap();
        assert!(coarse.is_finite() && (coarse - fine).abs() <= 0.02 * fine, "{coarse} vs {fine}");
        // exact value on the closed ball: |α|·... attained at z = e1
        let e1 = g.radial_derivative_exact(&[c(1.0 - 1e-9, 0.0), c(0.0, 0.0)], 1);
        assert!(fine <= norm(&e1) * (1.0 + 1e-6));
    }

    #[test]
    fn ratio_is_one_for_origin_center() {
        let w = RadialWeight::standard(1.0).unwrap();
        let g = MobiusMap::new(vec![c(0.0, 0.0); 2]).unwrap();
        let radii = sampling::geometric_radii(1, 12);
        let t = weight_ratio_trend(&w, &g, &[c(1.0, 0.0), c(0.0, 0.0)], 1, &radii).unwrap();
        assert!(t.ratios.iter().all(|&r| r == 1.0));
    }

    #[test]
    fn ratio_along_center_ray() {
        // ν = 1-|z|², α = 0.5 e1, z = r e1: γ(z) = (0.5 - r)/(1 - 0.5 r) e1 and
        // the ratio is (1 - r²)(1 - 0.5r)² / ((1 - 0.25)(1 - r²)) = (1-0.5r)²/0.75.
        let w = RadialWeight::standard(1.0).unwrap();
        let radii = sampling::geometric_radii(1, 12);
        let t = weight_ratio_trend(&w, &half_e1(), &[c(1.0, 0.0), c(0.0, 0.0)], 1, &radii).unwrap();
        for (r, v) in radii.iter().zip(&t.ratios) {
            let expect = (1.0 - 0.5 * r).powi(2) / 0.75;
            assert!((v - expect).abs() < 1e-6 * expect, "r={r}: {v} vs {expect}");
        }
        assert!(t.is_decreasing());
        assert!(t.coordinate_sup().is_finite());
    }

    #[test]
    fn component_bound_holds_only_on_the_axis() {
        let grid = SamplingGrid::closed_ball(2, 16, 64, 5);
        // α on the e1 axis: the bound holds but the constant is exactly 1.
        let axis = half_e1().component_bound_check(1, &grid).unwrap();
        assert!(axis.holds(1e-12), "{axis:?}");
        assert!((axis.constant_sum() - 1.0).abs() < 1e-15);

        // Generic α: an explicit witness breaks the bound.
        let alpha = [c(0.3, 0.1), c(0.2, -0.1)];
        let g = MobiusMap::new(alpha.to_vec()).unwrap();
        let b = g.component_bound_check(1, &grid).unwrap();
        assert!(b.max_excess > 0.1, "{b:?}");
        // Independent evaluation at z = (-0.928 - 0.137i, 0.319 - 0.056i).
        let direct = |z: [C; 2]| -> [C; 2] {
            let n2 = 0.15;
            let cc = z[0] * alpha[0].conj() + z[1] * alpha[1].conj();
            let s = (1.0f64 - n2).sqrt();
            let f = |i: usize| {
                let pz = alpha[i] * cc / n2;
                (alpha[i] - pz - (z[i] - pz) * s) / (1.0 - cc)
            };
            [f(0), f(1)]
        };
        let z = [c(-0.92785416, -0.1370231), c(0.31938554, -0.05621956)];
        let gp = direct(z)[0];
        let zp = g.apply(&[gp, c(0.0, 0.0)]);
        assert!(deviation(&direct([zp[0], zp[1]]), &[gp, c(0.0, 0.0)]) < 1e-12);
        let a = 0.15f64.sqrt();
        let bound = 2.0 * alpha[0].norm_sqr() / (a * (1.0 + a)) + (1.0 - a) / (1.0 + a) * zp[0].norm_sqr();
        assert!(gp.norm_sqr() - bound > 0.2);
    }

    proptest! {
        #[test]
        fn modulus_identity(ar in prop::collection::vec(-0.5f64..0.5, 6), zr in prop::collection::vec(-0.55f64..0.55, 6)) {
            let alpha: Vec<C> = ar.chunks(2).map(|p| c(p[0], p[1])).collect();
            let z: Vec<C> = zr.chunks(2).map(|p| c(p[0], p[1])).collect();
            prop_assume!(norm(&alpha) < 1.0 && norm(&z) < 1.0);
            let g = MobiusMap::new(alpha.clone()).unwrap();
            let img = g.apply(&z);
            let lhs = 1.0 - norm(&img).powi(2);
            let a2: f64 = alpha.iter().map(|v| v.norm_sqr()).sum();
            let rhs = (1.0 - a2) * (1.0 - norm(&z).powi(2)) / (c(1.0, 0.0) - inner(&z, &alpha)).norm_sqr();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300) + 1e-15);
            prop_assert!(norm(&img) < 1.0);
        }

        #[test]
        fn involution_everywhere(ar in prop::collection::vec(-0.5f64..0.5, 4), zr in prop::collection::vec(-0.7f64..0.7, 4)) {
            let alpha: Vec<C> = ar.chunks(2).map(|p| c(p[0], p[1])).collect();
            let z: Vec<C> = zr.chunks(2).map(|p| c(p[0], p[1])).collect();
            prop_assume!(norm(&alpha) < 1.0 && norm(&z) <= 0.99);
            let g = MobiusMap::new(alpha).unwrap();
            prop_assert!(deviation(&g.apply(&g.apply(&z)), &z) <= 1e-10);
        }
    }
}
