//! Grid evidence for `φ ∈ S̃_p` (`0 ∈ φ(B)` and
//! `sup |φ_p| = sup |φ|`) and for `φ ∈ S*_p` (`φ_p(B)` covers the disc).

use num_complex::Complex64;

use crate::sampling::{norm, sphere_directions, SamplingGrid};
use crate::symbols::PointMap;

type C = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct StildeConfig {
    pub radial_steps: usize,
    pub dirs: usize,
    pub seed: u64,
    /// Agreement tolerance for the two suprema.
    pub sup_tol: f64,
    /// `0 ∈ φ(B)` is accepted when `min |φ|` is at most this.
    pub origin_tol: f64,
    /// A disc mesh point counts as covered within this distance.
    pub cover_tol: f64,
    pub random_points: usize,
    /// Radii and phases of the coordinate-disc sample `r e^{iθ} e_q`.
    pub disc_radii: usize,
    pub disc_phases: usize,
}

impl Default for StildeConfig {
    fn default() -> Self {
        Self {
            radial_steps: 64,
            dirs: 64,
            seed: crate::sampling::DEFAULT_SEED,
            sup_tol: 1e-3,
            origin_tol: 1e-2,
            cover_tol: 0.06,
            random_points: 4096,
            disc_radii: 32,
            disc_phases: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StildeEvidence {
    pub p: usize,
    pub sup_component: f64,
    pub sup_full: f64,
    pub min_full: f64,
    /// Fraction of the disc mesh covered by sampled `φ_p` values.
    pub coverage: f64,
    /// First uncovered mesh point, if any.
    pub uncovered: Option<C>,
    pub stilde: bool,
    pub star: bool,
}

/// Disc mesh for the covering probe: radii `0.1..=0.9` by `0.1`, 32 phases.
pub fn disc_mesh() -> Vec<C> {
    (1..=9)
        .flat_map(|i| (0..32).map(move |k| C::from_polar(i as f64 / 10.0, std::f64::consts::TAU * k as f64 / 32.0)))
        .collect()
}

fn sample_points(dim: usize, cfg: &StildeConfig) -> Vec<Vec<C>> {
    let grid = SamplingGrid::closed_ball(dim, cfg.radial_steps, cfg.dirs, cfg.seed);
    let mut pts: Vec<Vec<C>> = grid.points().collect();
    for q in 0..dim {
        for i in 0..cfg.disc_radii {
            for k in 0..cfg.disc_phases {
                let mut z = vec![C::new(0.0, 0.0); dim];
                z[q] = C::from_polar(
                    i as f64 / cfg.disc_radii as f64,
                    std::f64::consts::TAU * k as f64 / cfg.disc_phases as f64,
                );
                pts.push(z);
            }
        }
    }
    let dirs = sphere_directions(dim, cfg.random_points, cfg.seed.wrapping_add(1));
    for (i, d) in dirs.iter().enumerate() {
        let u = crate::sampling::radical_inverse(i as u64 + 1, 3);
        pts.push(SamplingGrid::point(u.powf(1.0 / (2 * dim) as f64), d));
    }
    pts
}

pub fn stilde_membership(phi: &dyn PointMap, p: usize, cfg: &StildeConfig) -> StildeEvidence {
    let pts = sample_points(phi.dim(), cfg);
    let images: Vec<Vec<C>> = pts.iter().map(|z| phi.apply(z)).collect();
    let sup_component = images.iter().map(|w| w[p - 1].norm()).fold(0.0, f64::max);
    let sup_full = images.iter().map(|w| norm(w)).fold(0.0, f64::max);
    let min_full = images.iter().map(|w| norm(w)).fold(f64::INFINITY, f64::min);
    let comps: Vec<C> = images.iter().map(|w| w[p - 1]).collect();
    let mesh = disc_mesh();
    let covered: Vec<bool> = mesh.iter().map(|x| covers(&comps, *x, cfg.cover_tol)).collect();
    let count = covered.iter().filter(|&&c| c).count();
    let uncovered = mesh.iter().zip(&covered).find(|(_, c)| !**c).map(|(x, _)| *x);
    let stilde = (sup_full - sup_component).abs() <= cfg.sup_tol && min_full <= cfg.origin_tol;
    StildeEvidence {
        p,
        sup_component,
        sup_full,
        min_full,
        coverage: count as f64 / mesh.len() as f64,
        uncovered,
        stilde,
        star: count == mesh.len(),
    }
}

/// Whether some sampled value lies within `tol` of `x`.
pub fn covers(values: &[C], x: C, tol: f64) -> bool {
    values.iter().any(|v| (v - x).norm() <= tol)
}

/// Whether `x` is hit by `φ_p` on the sample, within `tol`.
pub fn point_covered(phi: &dyn PointMap, p: usize, x: C, tol: f64, cfg: &StildeConfig) -> bool {
    let pts = sample_points(phi.dim(), cfg);
    let comps: Vec<C> = pts.iter().map(|z| phi.apply(z)[p - 1]).collect();
    covers(&comps, x, tol)
}
