use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::CoordinateTuple;

/// Default cap on the number of stored terms produced by composition.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// Sparse polynomial on `C^N` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `z_p` (1-based).
    pub fn coordinate(dim: usize, p: usize) -> Self {
        let mut exp = vec![0; dim];
        exp[p - 1] = 1;
        Self::monomial(exp, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(exp: Vec<u32>, c: Complex64) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Self::zero(dim);
        for (exp, c) in terms {
            if exp.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "exponent {exp:?} does not match dimension {dim}"
                )));
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Complex64) {
        use std::collections::btree_map::Entry;
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dim, "point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let mut m = *c;
            for (zi, &e) in z.iter().zip(exp) {
                if e > 0 {
                    m *= zi.powu(e);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, usize::MAX).expect("uncapped product")
    }

    pub fn mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
                if out.terms.len() > cap {
                    return Err(Error::Resource(format!("term count exceeds cap {cap}")));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Iterated partial derivative `∂^j / ∂z_{l_1} ... ∂z_{l_j}`.
    pub fn partial(&self, l: &CoordinateTuple) -> Self {
        let mut out = self.clone();
        for &idx in l.entries() {
            out = out.partial_once(idx - 1);
        }
        out
    }

    fn partial_once(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[axis] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[axis] -= 1;
            out.add_term(ne, c * e[axis] as f64);
        }
        out
    }

    /// `R^(n) f`, using `R^(n) z^β = |β|^n z^β`.
    pub fn radial(&self, n: u32) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            out.add_term(e.clone(), c * (deg as f64).powi(n as i32));
        }
        out
    }

    /// `R^(n) f (z)` without materialising the derivative.
    pub fn radial_eval(&self, n: u32, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let deg: u32 = exp.iter().sum();
            if n > 0 && deg == 0 {
                continue;
            }
            let mut m = c * (deg as f64).powi(n as i32);
            for (zi, &e) in z.iter().zip(exp) {
                if e > 0 {
                    m *= zi.powu(e);
                }
            }
            acc += m;
        }
        acc
    }

    /// `f ∘ φ` for polynomial components, with a cap on intermediate terms.
    pub fn compose(&self, components: &[MultiPoly], cap: usize) -> Result<Self> {
        if components.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "composition needs {} components, got {}",
                self.dim,
                components.len()
            )));
        }
        let inner = components.first().map(|c| c.dim).unwrap_or(0);
        if components.iter().any(|c| c.dim != inner) {
            return Err(Error::InvalidInput("component dimensions disagree".into()));
        }
        // powers[l][e] = φ_l^e, built lazily.
        let mut powers: Vec<Vec<MultiPoly>> =
            components.iter().map(|c| vec![MultiPoly::one(c.dim)]).collect();
        let mut out = Self::zero(inner);
        for (exp, c) in &self.terms {
            let mut term = MultiPoly::constant(inner, *c);
            for (l, &e) in exp.iter().enumerate() {
                while powers[l].len() <= e as usize {
                    let next = powers[l].last().unwrap().mul_capped(&components[l], cap)?;
                    powers[l].push(next);
                }
                if e > 0 {
                    term = term.mul_capped(&powers[l][e as usize], cap)?;
                }
            }
            out = out.add(&term);
            if out.terms.len() > cap {
                return Err(Error::Resource(format!("term count exceeds cap {cap}")));
            }
        }
        Ok(out)
    }
}
