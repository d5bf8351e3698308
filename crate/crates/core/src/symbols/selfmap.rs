use num_complex::Complex64;

use super::poly::MultiPoly;
use super::PointMap;
use crate::error::{Error, Result};
use crate::sampling::SamplingGrid;

/// A polynomial map `φ = (φ_1, ..., φ_N)` of the ball into itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMap {
    components: Vec<MultiPoly>,
}

/// Sampled sup of `|φ|` over a grid of the closed ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfMapEvidence {
    pub sup_norm: f64,
    pub margin: f64,
}

impl SelfMapEvidence {
    /// `margin >= 0` up to rounding. The identity sits exactly at margin 0.
    pub fn maps_into_ball(&self) -> bool {
        self.margin >= -1e-12
    }
}

impl SelfMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let n = components.len();
        if n == 0 || components.iter().any(|c| c.dim() != n) {
            return Err(Error::InvalidInput(
                "self-map needs N components, each a polynomial on C^N".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn identity(dim: usize) -> Self {
        Self { components: (1..=dim).map(|p| MultiPoly::coordinate(dim, p)).collect() }
    }

    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        Self {
            components: (1..=dim)
                .map(|p| MultiPoly::coordinate(dim, p).scale(Complex64::new(s, 0.0)))
                .collect(),
        }
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, p: usize) -> &MultiPoly {
        &self.components[p - 1]
    }

    pub fn evidence(&self, grid: &SamplingGrid) -> SelfMapEvidence {
        let sup_norm = grid
            .points()
            .map(|z| self.apply(&z).iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        SelfMapEvidence { sup_norm, margin: 1.0 - sup_norm }
    }
}

impl PointMap for SelfMap {
    fn dim(&self) -> usize {
        self.components.len()
    }

    fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    fn radial_jets(&self, z: &[Complex64], order: u32) -> Vec<Vec<Complex64>> {
        self.components
            .iter()
            .map(|c| (0..=order).map(|k| c.radial_eval(k, z)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_on_the_boundary_of_admissibility() {
        let grid = SamplingGrid::closed_ball(2, 16, 32, 1);
        let ev = SelfMap::identity(2).evidence(&grid);
        assert!((ev.sup_norm - 1.0).abs() < 1e-12);
        assert!(ev.maps_into_ball());
        let half = SelfMap::scaled_identity(2, 0.5).evidence(&grid);
        assert!((half.margin - 0.5).abs() < 1e-12);
        let big = SelfMap::scaled_identity(2, 1.5).evidence(&grid);
        assert!(!big.maps_into_ball());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SelfMap::new(vec![MultiPoly::coordinate(2, 1)]).is_err());
    }

    #[test]
    fn exact_jets() {
        let phi = SelfMap::scaled_identity(2, 0.5);
        let z = [Complex64::new(0.2, 0.1), Complex64::new(0.0, 0.3)];
        let jets = phi.radial_jets(&z, 3);
        for k in 0..=3 {
            assert_eq!(jets[1][k], z[1] * 0.5);
        }
    }
}
