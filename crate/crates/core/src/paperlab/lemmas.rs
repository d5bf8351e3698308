//! Sample-scale checks of the transfer estimate for point evaluations and of
//! the boundedness of `C_γ` on the growth spaces.

use num_complex::Complex64;
use rayon::prelude::*;

use super::maps::ContourJets;
use crate::error::{Error, Result};
use crate::mobius::MobiusMap;
use crate::multiindex::enumerate_weak_compositions;
use crate::quantities::faa_di_bruno_radial;
use crate::sampling::{coordinate_directions, geometric_radii, norm, radius_level, sphere_directions, SamplingGrid};
use crate::symbols::{Composed, MultiPoly, PointMap};
use crate::weights::{delta_norm, RadialWeight};

type C = Complex64;

/// The auxiliary factor `h` of the transfer estimate.
#[derive(Debug, Clone)]
pub enum TransferWeight {
    /// `h ≡ 1`
    Unit,
    /// `h(z) = 1 + ω(|z|)/ω(0)`
    Shifted(RadialWeight),
}

impl TransferWeight {
    pub fn value(&self, z: &[C]) -> f64 {
        match self {
            TransferWeight::Unit => 1.0,
            TransferWeight::Shifted(w) => 1.0 + w.value(norm(z)) / w.value(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferLevel {
    pub m: u32,
    /// `sup h(z) ‖δ_{φ(z)}‖` over grid points with radius level `<= m`.
    pub lhs: f64,
    /// `M^j_p = sup h(w) ‖δ_{φ_p(w)}‖` over the same points.
    pub rhs: f64,
}

impl TransferLevel {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub j: u32,
    pub levels: Vec<TransferLevel>,
}

impl TransferReport {
    pub fn sup_ratio(&self) -> f64 {
        self.levels.iter().map(TransferLevel::ratio).fold(0.0, f64::max)
    }

    /// The ratio neither grows across the last levels nor becomes infinite.
    pub fn bounded(&self) -> bool {
        let r: Vec<f64> = self.levels.iter().map(TransferLevel::ratio).collect();
        if r.iter().any(|v| !v.is_finite()) || r.len() < 2 {
            return false;
        }
        let tail = &r[r.len().saturating_sub(4)..];
        let (lo, hi) = tail.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        hi <= lo * 1.05
    }
}

/// Radii used by the transfer check: 16 uniform plus `1 − 2^{-m}`, `m = 1..=max_m`.
fn transfer_grid(dim: usize, max_m: u32, dirs: usize, seed: u64) -> SamplingGrid {
    SamplingGrid::dense_open_ball(dim, 16, max_m, dirs, seed)
}

/// Compares `sup h ‖δ_{φ(z)}‖` with `M^j_p` on grids truncated at levels
/// `4..=max_m`, where `‖δ_w‖` is the `H^(j)_ν` point-evaluation representative.
pub fn lemma31_transfer_check(
    phi: &dyn PointMap,
    p: usize,
    nu: &RadialWeight,
    h: &TransferWeight,
    j: u32,
    max_m: u32,
    dirs: usize,
    seed: u64,
) -> Result<TransferReport> {
    if p == 0 || p > phi.dim() {
        return Err(Error::InvalidInput(format!("coordinate {p} outside 1..={}", phi.dim())));
    }
    if max_m < 5 {
        return Err(Error::InvalidInput("max_m must be >= 5".into()));
    }
    let origin = vec![C::new(0.0, 0.0); phi.dim()];
    if norm(&phi.apply(&origin)) > 1e-12 {
        return Err(Error::InvalidInput("the transfer estimate needs φ(0) = 0".into()));
    }
    let grid = transfer_grid(phi.dim(), max_m, dirs, seed);
    // (level, h·δ(|φ|), h·δ(|φ_p|)) per point
    let rows: Vec<(f64, f64, f64)> = grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|z| {
            let w = phi.apply(z);
            let hz = h.value(z);
            let level = radius_level(norm(z));
            Ok((level, hz * delta_norm(nu, j, norm(&w))?, hz * delta_norm(nu, j, w[p - 1].norm())?))
        })
        .collect::<Result<_>>()?;
    let levels = (4..=max_m)
        .map(|m| {
            let (lhs, rhs) = rows
                .iter()
                .filter(|r| r.0 <= m as f64 + 1e-9)
                .fold((0.0f64, 0.0f64), |(a, b), r| (a.max(r.1), b.max(r.2)));
            TransferLevel { m, lhs, rhs }
        })
        .collect();
    Ok(TransferReport { j, levels })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgammaReport {
    /// `(degree cap, max ‖f∘γ‖/‖f‖, max ‖f‖/‖f∘γ‖)` over corpus prefixes.
    pub by_degree: Vec<(u32, f64, f64)>,
    /// `max |‖f∘γ∘γ‖/‖f‖ − 1|` over the corpus.
    pub round_trip: f64,
}

impl CgammaReport {
    pub fn forward(&self) -> f64 {
        self.by_degree.last().map_or(f64::NAN, |x| x.1)
    }

    pub fn inverse(&self) -> f64 {
        self.by_degree.last().map_or(f64::NAN, |x| x.2)
    }

    /// Both ratios finite and the last two corpus prefixes within 25%.
    pub fn stable(&self) -> bool {
        let d = &self.by_degree;
        if d.iter().any(|x| !x.1.is_finite() || !x.2.is_finite()) {
            return false;
        }
        d.len() < 2 || {
            let (a, b) = (&d[d.len() - 2], &d[d.len() - 1]);
            b.1 <= 1.25 * a.1 && b.2 <= 1.25 * a.2
        }
    }
}

/// Monomials `z^β` with `1 <= |β| <= max_degree`, plus `1 + z₁`.
pub fn monomial_corpus(dim: usize, max_degree: u32) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::one(dim).add(&MultiPoly::coordinate(dim, 1))];
    for d in 1..=max_degree {
        for exp in enumerate_weak_compositions(d, dim) {
            out.push(MultiPoly::monomial(exp.parts().to_vec(), C::new(1.0, 0.0)));
        }
    }
    out
}

/// Sampling grid closed under `z ↦ −z`.
pub fn symmetric_grid(dim: usize, max_m: u32, dirs: usize, seed: u64) -> SamplingGrid {
    let mut d = sphere_directions(dim, dirs, seed);
    d.extend(coordinate_directions(dim));
    let neg: Vec<Vec<C>> = d.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    d.extend(neg);
    let mut radii: Vec<f64> = (0..16).map(|i| i as f64 / 16.0).collect();
    radii.extend(geometric_radii(1, max_m));
    radii.sort_by(|a, b| a.total_cmp(b));
    radii.dedup();
    SamplingGrid::new(dim, radii, d, seed)
}

/// `|f(φ(0))| + sup_grid ω(|z|) |R^(n)(f∘φ)(z)|`
pub fn composed_graded_norm(f: &MultiPoly, phi: &dyn PointMap, w: &RadialWeight, n: u32, grid: &SamplingGrid) -> Result<f64> {
    let origin = vec![C::new(0.0, 0.0); f.dim()];
    let pts: Vec<Vec<C>> = grid.points().collect();
    let sup = pts
        .par_iter()
        .map(|z| Ok(w.value(norm(z)) * faa_di_bruno_radial(f, phi, n, z)?.norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(f.eval(&phi.apply(&origin)).norm() + sup)
}

fn poly_graded_norm(f: &MultiPoly, w: &RadialWeight, n: u32, grid: &SamplingGrid) -> f64 {
    let origin = vec![C::new(0.0, 0.0); f.dim()];
    let sup = grid.points().map(|z| w.value(norm(&z)) * f.radial_eval(n, &z).norm()).fold(0.0, f64::max);
    f.eval(&origin).norm() + sup
}

/// Ratios `‖f∘γ‖/‖f‖` and their inverses on the graded norm of `H^(n)_ω`,
/// over corpus prefixes of growing degree, plus the involution round trip.
pub fn lemma32_cgamma_check(
    gamma: &MobiusMap,
    w: &RadialWeight,
    n: u32,
    max_degree: u32,
    grid: &SamplingGrid,
) -> Result<CgammaReport> {
    let corpus = monomial_corpus(gamma.dim(), max_degree);
    let twice = Composed { outer: gamma, inner: gamma };
    let twice = ContourJets(&twice);
    let mut by_degree = Vec::new();
    let (mut fwd, mut inv, mut round_trip) = (0.0f64, 0.0f64, 0.0f64);
    let mut cap = 1;
    for f in &corpus {
        let base = poly_graded_norm(f, w, n, grid);
        let moved = composed_graded_norm(f, gamma, w, n, grid)?;
        let back = composed_graded_norm(f, &twice, w, n, grid)?;
        if f.degree() > cap {
            by_degree.push((cap, fwd, inv));
            cap = f.degree();
        }
        fwd = fwd.max(moved / base);
        inv = inv.max(base / moved);
        round_trip = round_trip.max((back / base - 1.0).abs());
    }
    by_degree.push((cap, fwd, inv));
    Ok(CgammaReport { by_degree, round_trip })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paperlab::maps::shifted_half_map;
    use crate::symbols::SelfMap;

    #[test]
    fn half_identity_transfers_with_ratio_one() {
        let nu = RadialWeight::standard(1.0).unwrap();
        let rep =
            lemma31_transfer_check(&SelfMap::scaled_identity(2, 0.5), 1, &nu, &TransferWeight::Unit, 1, 10, 32, 1).unwrap();
        assert!(rep.bounded());
        assert!(rep.sup_ratio() <= 1.0 + 1e-12);
        // oracle: both sides are 1 + atanh(1/2 · r_max)
        let last = rep.levels.last().unwrap();
        let r = 0.5 * (1.0 - 0.5f64.powi(10));
        assert!((last.lhs - (1.0 + r.atanh())).abs() < 1e-8);
    }

    #[test]
    fn recentred_example_map_transfers() {
        let phi = shifted_half_map();
        let gamma = MobiusMap::new(vec![C::new(-0.5, 0.0), C::new(0.0, 0.0)]).unwrap();
        let comp = Composed { outer: &phi, inner: &gamma };
        let nu = RadialWeight::standard(1.0).unwrap();
        let h = TransferWeight::Shifted(RadialWeight::standard(0.5).unwrap());
        let rep = lemma31_transfer_check(&comp, 1, &nu, &h, 1, 12, 32, 1).unwrap();
        assert!(rep.bounded(), "{:?}", rep.levels);
    }

    #[test]
    fn unitary_mobius_preserves_norms() {
        let gamma = MobiusMap::new(vec![C::new(0.0, 0.0); 2]).unwrap();
        let w = RadialWeight::standard(1.0).unwrap();
        let grid = symmetric_grid(2, 10, 16, 2);
        let rep = lemma32_cgamma_check(&gamma, &w, 1, 3, &grid).unwrap();
        assert!((rep.forward() - 1.0).abs() < 1e-12 && (rep.inverse() - 1.0).abs() < 1e-12, "{rep:?}");
        assert!(rep.round_trip < 1e-9, "{}", rep.round_trip);
    }

    #[test]
    fn shifted_mobius_ratios_are_finite_and_round_trip() {
        let gamma = MobiusMap::new(vec![C::new(0.3, 0.0), C::new(0.0, 0.0)]).unwrap();
        let w = RadialWeight::standard(1.0).unwrap();
        let grid = symmetric_grid(2, 10, 16, 2);
        let rep = lemma32_cgamma_check(&gamma, &w, 1, 3, &grid).unwrap();
        assert!(rep.stable(), "{rep:?}");
        assert!(rep.forward() > 1.0 && rep.inverse() >= 1.0 / rep.forward());
        assert!(rep.round_trip < 1e-9, "{}", rep.round_trip);
    }
}
