//! Deterministic sampling of the ball: radii `1 - 2^{-m}` times directions
//! drawn from a scrambled Halton sequence on the real `2N`-sphere, plus the
//! coordinate directions `e^{iπk/4} e_p`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
pub const COORDINATE_PHASES: usize = 8;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut acc = 0.0;
    while i > 0 {
        acc += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    acc
}

/// `count` unit vectors in `C^dim` from a Cranley–Patterson rotated Halton
/// sequence pushed through Box–Muller.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    assert!(2 * dim <= PRIMES.len(), "dimension too large for the Halton table");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..2 * dim).map(|_| rng.random::<f64>()).collect();
    (1..=count as u64)
        .map(|i| {
            let u: Vec<f64> = (0..2 * dim)
                .map(|d| (radical_inverse(i, PRIMES[d]) + shift[d]).fract())
                .collect();
            let mut v: Vec<Complex64> = (0..dim)
                .map(|c| {
                    let (u1, u2) = (1.0 - u[2 * c], u[2 * c + 1]);
                    let rad = (-2.0 * u1.ln()).sqrt();
                    let ang = std::f64::consts::TAU * u2;
                    Complex64::new(rad * ang.cos(), rad * ang.sin())
                })
                .collect();
            let norm = v.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter_mut().for_each(|w| *w /= norm);
            } else {
                v[0] = Complex64::new(1.0, 0.0);
            }
            v
        })
        .collect()
}

pub fn coordinate_directions(dim: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(dim * COORDINATE_PHASES);
    for p in 0..dim {
        for k in 0..COORDINATE_PHASES {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[p] = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / COORDINATE_PHASES as f64);
            out.push(v);
        }
    }
    out
}

/// `r_m = 1 - 2^{-m}` for `m = lo..=hi`.
pub fn geometric_radii(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|m| 1.0 - 0.5f64.powi(m as i32)).collect()
}

/// `-log2(1 - r)`, the trace abscissa.
pub fn radius_level(r: f64) -> f64 {
    -(1.0 - r).log2()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    pub dim: usize,
    pub radii: Vec<f64>,
    pub directions: Vec<Vec<Complex64>>,
    pub seed: u64,
}

impl SamplingGrid {
    pub fn new(dim: usize, radii: Vec<f64>, directions: Vec<Vec<Complex64>>, seed: u64) -> Self {
        Self { dim, radii, directions, seed }
    }

    /// Low-discrepancy directions plus coordinate directions at the given radii.
    pub fn standard(dim: usize, radii: Vec<f64>, dir_count: usize, seed: u64) -> Self {
        let mut directions = sphere_directions(dim, dir_count, seed);
        directions.extend(coordinate_directions(dim));
        Self { dim, radii, directions, seed }
    }

    /// Uniform radii `0, 1/k, ..., 1` including the unit sphere.
    pub fn closed_ball(dim: usize, radial_steps: usize, dir_count: usize, seed: u64) -> Self {
        let radii = (0..=radial_steps).map(|i| i as f64 / radial_steps as f64).collect();
        Self::standard(dim, radii, dir_count, seed)
    }

    /// Uniform radii on `[0, 1)` merged with the geometric radii up to `max_m`.
    pub fn dense_open_ball(dim: usize, uniform: usize, max_m: u32, dir_count: usize, seed: u64) -> Self {
        let mut radii: Vec<f64> = (0..uniform).map(|i| i as f64 / uniform as f64).collect();
        radii.extend(geometric_radii(1, max_m));
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        radii.dedup();
        Self::standard(dim, radii, dir_count, seed)
    }

    pub fn point(r: f64, dir: &[Complex64]) -> Vec<Complex64> {
        dir.iter().map(|w| w * r).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Complex64>> + '_ {
        self.radii
            .iter()
            .flat_map(move |&r| self.directions.iter().map(move |d| Self::point(r, d)))
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_deterministic() {
        let a = sphere_directions(3, 64, 7);
        let b = sphere_directions(3, 64, 7);
        assert_eq!(a, b);
        for d in &a {
            assert!((norm(d) - 1.0).abs() < 1e-14);
        }
        assert_ne!(a, sphere_directions(3, 64, 8));
    }

    #[test]
    fn halton_first_values() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn grid_shapes() {
        let g = SamplingGrid::standard(2, geometric_radii(3, 5), 10, 1);
        assert_eq!(g.directions.len(), 10 + 2 * COORDINATE_PHASES);
        assert_eq!(g.points().count(), 3 * g.directions.len());
        assert!((radius_level(geometric_radii(7, 7)[0]) - 7.0).abs() < 1e-12);
    }
}
