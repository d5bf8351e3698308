//! Concrete self-maps of the worked examples.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ray::{ball_contour_radius, contour_jets};
use crate::symbols::{MultiPoly, PointMap, SelfMap};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `½(z₁ + ½, z₂/2)` on `C²`.
pub fn shifted_half_map() -> SelfMap {
    let z1 = MultiPoly::coordinate(2, 1).add(&MultiPoly::constant(2, c(0.5, 0.0))).scale(c(0.5, 0.0));
    let z2 = MultiPoly::coordinate(2, 2).scale(c(0.25, 0.0));
    SelfMap::new(vec![z1, z2]).expect("two components on C^2")
}

/// `(1/5)(3z₁, (3/2)z₂² + i, z₃)` on `C³`.
pub fn quadratic_shift_map() -> SelfMap {
    let z1 = MultiPoly::coordinate(3, 1).scale(c(0.6, 0.0));
    let z2 = MultiPoly::coordinate(3, 2)
        .pow(2)
        .scale(c(0.3, 0.0))
        .add(&MultiPoly::constant(3, c(0.0, 0.2)));
    let z3 = MultiPoly::coordinate(3, 3).scale(c(0.2, 0.0));
    SelfMap::new(vec![z1, z2, z3]).expect("three components on C^3")
}

/// `(e^{iθ₁} a₁ z₁, …, e^{iθ_N} a_N z_N)`.
pub fn rotated_diagonal_map(a: &[C], phases: &[f64]) -> Result<SelfMap> {
    if a.len() != phases.len() || a.is_empty() {
        return Err(Error::InvalidInput("need one phase per coefficient".into()));
    }
    if a.iter().map(|v| v.norm_sqr()).sum::<f64>() >= 1.0 {
        return Err(Error::Domain("coefficient vector must lie in the ball".into()));
    }
    let n = a.len();
    let comps = a
        .iter()
        .zip(phases)
        .enumerate()
        .map(|(l, (al, th))| MultiPoly::coordinate(n, l + 1).scale(al * C::from_polar(1.0, *th)))
        .collect();
    SelfMap::new(comps)
}

/// `φ_p(z) = (z_p − a)/(1 − z_p ā)` and `φ_l(z) = κ z_l` for `l ≠ p`, with
/// `κ² < (1−|a|)/(1+|a|)` so that `φ(B) ⊂ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscAutomorphismMap {
    pub dim: usize,
    pub p: usize,
    pub a: C,
    pub kappa: f64,
}

impl DiscAutomorphismMap {
    pub fn new(dim: usize, p: usize, a: C) -> Result<Self> {
        if p == 0 || p > dim {
            return Err(Error::InvalidInput(format!("coordinate {p} outside 1..={dim}")));
        }
        if a.norm() >= 1.0 {
            return Err(Error::Domain("disc automorphism needs |a| < 1".into()));
        }
        let kappa = 0.9 * ((1.0 - a.norm()) / (1.0 + a.norm())).sqrt();
        Ok(Self { dim, p, a, kappa })
    }
}

impl PointMap for DiscAutomorphismMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, z: &[C]) -> Vec<C> {
        z.iter()
            .enumerate()
            .map(|(l, v)| {
                if l + 1 == self.p {
                    (v - self.a) / (C::new(1.0, 0.0) - v * self.a.conj())
                } else {
                    v * self.kappa
                }
            })
            .collect()
    }
}

/// Wraps a map holomorphic on the ball and supplies its radial jets by the
/// contour rule instead of the ray stencil.
pub struct ContourJets<'a>(pub &'a dyn PointMap);

impl PointMap for ContourJets<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, z: &[C]) -> Vec<C> {
        self.0.apply(z)
    }

    fn radial_jets(&self, z: &[C], order: u32) -> Vec<Vec<C>> {
        contour_jets(&|w: &[C]| self.0.apply(w), z, order, ball_contour_radius(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{norm, SamplingGrid};

    #[test]
    fn example_maps_send_the_ball_into_itself() {
        let g2 = SamplingGrid::closed_ball(2, 16, 64, 3);
        assert!(shifted_half_map().evidence(&g2).maps_into_ball());
        let g3 = SamplingGrid::closed_ball(3, 16, 64, 3);
        assert!(quadratic_shift_map().evidence(&g3).maps_into_ball());
        let d = rotated_diagonal_map(&[c(0.6, 0.0), c(0.0, 0.3)], &[0.4, 1.1]).unwrap();
        assert!(d.evidence(&g2).maps_into_ball());
        let m = DiscAutomorphismMap::new(2, 1, c(0.5, 0.2)).unwrap();
        for z in g2.points().filter(|z| norm(z) < 1.0) {
            assert!(norm(&m.apply(&z)) < 1.0);
        }
    }

    #[test]
    fn shifted_half_map_vanishes_at_its_zero() {
        let w = shifted_half_map().apply(&[c(-0.5, 0.0), c(0.0, 0.0)]);
        assert_eq!(norm(&w), 0.0);
    }
}
