//! The expansion machinery for `R^(n)(ψ·(f∘φ))`: graded norms, the
//! higher-order chain rule, the quantities `𝔅_{i,j}` and `ℬ_j^n`, and the
//! operator `W_{ψ,φ}` itself.
//!
//! All norm values are `≍`-representatives (constants normalised to 1).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::{self, enumerate_compositions, enumerate_coordinate_tuples, CoordinateTuple, WeakComposition};
use crate::sampling::{norm, SamplingGrid};
use crate::symbols::{MultiPoly, PointMap, SelfMap, Symbol};
use crate::weights::{delta_norm, RadialWeight};

type C = Complex64;

/// Coefficient function `C^n_k` (injectable so that fault injection can
/// corrupt it).
pub type Coefficient = dyn Fn(u32, &WeakComposition) -> Result<u64> + Sync;

pub fn exact_multinomial(n: u32, k: &WeakComposition) -> Result<u64> {
    multiindex::multinomial(n, k)
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|t| t as f64).product()
}

/// Multiplier, self-map and distinguished coordinate `p` (1-based).
#[derive(Clone)]
pub struct SymbolPair {
    pub psi: Symbol,
    pub phi: Arc<dyn PointMap>,
    pub p: usize,
}

impl std::fmt::Debug for SymbolPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolPair").field("psi", &self.psi).field("dim", &self.phi.dim()).field("p", &self.p).finish()
    }
}

impl SymbolPair {
    pub fn new(psi: Symbol, phi: Arc<dyn PointMap>, p: usize) -> Result<Self> {
        if psi.dim() != phi.dim() {
            return Err(Error::InvalidInput(format!("ψ lives in C^{}, φ in C^{}", psi.dim(), phi.dim())));
        }
        if p == 0 || p > phi.dim() {
            return Err(Error::InvalidInput(format!("coordinate p = {p} out of 1..={}", phi.dim())));
        }
        Ok(Self { psi, phi, p })
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }
}

/// `|f(0)| + sup_grid ω(|z|)|R^(n) f(z)|`
pub fn graded_norm(f: &Symbol, w: &RadialWeight, n: u32, grid: &SamplingGrid) -> Result<f64> {
    let origin = vec![C::new(0.0, 0.0); f.dim()];
    let mut sup = 0.0f64;
    for z in grid.points() {
        sup = sup.max(w.value(norm(&z)) * f.radial_eval(n, &z)?.norm());
    }
    Ok(f.eval(&origin)?.norm() + sup)
}

/// `R^(n)(f∘φ)(z)` by the higher-order chain rule
/// `Σ_j Σ_{l ∈ L_j} ∂^j f(φ(z))/∂z_l · Σ_{k ∈ K_{n,j}} (C^n_k / j!) Π_t R^(k_t) φ_{l_t}(z)`.
///
/// The `1/j!` accounts for the `j!` orderings of the blocks of each set
/// partition of `{1..n}`.
pub fn faa_di_bruno_radial(f: &MultiPoly, phi: &dyn PointMap, n: u32, z: &[C]) -> Result<C> {
    faa_di_bruno_radial_with(f, phi, n, z, &exact_multinomial)
}

pub fn faa_di_bruno_radial_with(f: &MultiPoly, phi: &dyn PointMap, n: u32, z: &[C], coef: &Coefficient) -> Result<C> {
    if n == 0 {
        return Ok(f.eval(&phi.apply(z)));
    }
    let dim = phi.dim();
    let jets = phi.radial_jets(z, n);
    let w: Vec<C> = jets.iter().map(|j| j[0]).collect();
    let mut total = C::new(0.0, 0.0);
    for j in 1..=n as usize {
        let comps = enumerate_compositions(n, j);
        let weights: Vec<f64> = comps
            .iter()
            .map(|k| coef(n, &k.as_weak()).map(|c| c as f64 / factorial(j)))
            .collect::<Result<_>>()?;
        for l in enumerate_coordinate_tuples(j, dim) {
            let d = f.partial(&l).eval(&w);
            if d == C::new(0.0, 0.0) {
                continue;
            }
            let inner: C = comps
                .iter()
                .zip(&weights)
                .map(|(k, c)| {
                    k.parts()
                        .iter()
                        .zip(l.entries())
                        .fold(C::new(*c, 0.0), |acc, (&kt, &lt)| acc * jets[lt - 1][kt as usize])
                })
                .sum();
            total += d * inner;
        }
    }
    Ok(total)
}

/// `R^(n)(ψ·(f∘φ))(z) = Σ_i C(n,i) R^(n-i)ψ(z) R^(i)(f∘φ)(z)`
pub fn product_rule_radial(psi: &Symbol, f: &MultiPoly, phi: &dyn PointMap, n: u32, z: &[C]) -> Result<C> {
    let psi_jet = psi.radial_jet(z, n)?;
    let mut total = C::new(0.0, 0.0);
    for i in 0..=n {
        let b = multiindex::binomial(n as u64, i as u64)? as f64;
        total += psi_jet[(n - i) as usize] * faa_di_bruno_radial(f, phi, i, z)? * b;
    }
    Ok(total)
}

/// Which `φ_*` the quantities are built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `φ`, summing over all `l ∈ L_j`.
    Full,
    /// `φ_p` alone (1-based).
    Component(usize),
}

/// `𝔅_{i,j}(φ_*(z)) = Σ_{k ∈ K_{i,j}} Σ_{l ∈ L_j} C^i_k Π_t R^(k_t) φ_{l_t}(z)`
/// (full) or `Σ_{k ∈ K_{i,j}} C^i_k Π_t R^(k_t) φ_p(z)` (component), from a
/// jet table `jets[l][k]` of order `>= i`. Zero when `i < j`.
///
/// The sum over `L_j` of a product factorises into the product of the
/// coordinate sums, which is what the full variant evaluates.
pub fn frak_b(jets: &[Vec<C>], i: u32, j: usize, variant: Variant) -> Result<C> {
    frak_b_with(jets, i, j, variant, &exact_multinomial)
}

pub fn frak_b_with(jets: &[Vec<C>], i: u32, j: usize, variant: Variant, coef: &Coefficient) -> Result<C> {
    if j == 0 {
        return Err(Error::InvalidInput("𝔅_{i,j} needs j >= 1".into()));
    }
    let row: Vec<C> = match variant {
        Variant::Full => (0..=i as usize).map(|k| jets.iter().map(|jl| jl[k]).sum()).collect(),
        Variant::Component(p) => {
            let jp = jets.get(p.wrapping_sub(1)).ok_or_else(|| Error::InvalidInput(format!("component {p} missing")))?;
            jp[..=i as usize].to_vec()
        }
    };
    let mut total = C::new(0.0, 0.0);
    for k in enumerate_compositions(i, j) {
        let c = coef(i, &k.as_weak())? as f64;
        total += k.parts().iter().fold(C::new(c, 0.0), |acc, &kt| acc * row[kt as usize]);
    }
    Ok(total)
}

/// `ℬ_j^n(ψ; φ_*)(z) = Σ_{i=j}^n C(n,i) R^(n-i)ψ(z) 𝔅_{i,j}(φ_*(z))` for
/// `j >= 1`, and `R^(n)ψ(z)` for `j = 0`. Zero for `j > n`.
pub fn script_b(psi_jet: &[C], jets: &[Vec<C>], n: u32, j: usize, variant: Variant) -> Result<C> {
    if j == 0 {
        return Ok(psi_jet[n as usize]);
    }
    let mut total = C::new(0.0, 0.0);
    for i in j as u32..=n {
        let b = multiindex::binomial(n as u64, i as u64)? as f64;
        total += psi_jet[(n - i) as usize] * frak_b(jets, i, j, variant)? * b;
    }
    Ok(total)
}

/// `𝔅` and `ℬ` values at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTable {
    pub n: u32,
    /// `frak_full[i][j]` for `1 <= j <= i <= n` (other slots zero).
    pub frak_full: Vec<Vec<C>>,
    pub frak_component: Vec<Vec<C>>,
    /// `script_full[j]` for `j = 0..=n`.
    pub script_full: Vec<C>,
    pub script_component: Vec<C>,
}

impl ExpansionTable {
    pub fn build(pair: &SymbolPair, n: u32, z: &[C]) -> Result<Self> {
        let psi_jet = pair.psi.radial_jet(z, n)?;
        let jets = pair.phi.radial_jets(z, n);
        Self::from_jets(&psi_jet, &jets, n, pair.p)
    }

    pub fn from_jets(psi_jet: &[C], jets: &[Vec<C>], n: u32, p: usize) -> Result<Self> {
        let size = n as usize + 1;
        let zero = C::new(0.0, 0.0);
        let mut frak_full = vec![vec![zero; size]; size];
        let mut frak_component = vec![vec![zero; size]; size];
        for i in 1..=n {
            for j in 1..=i as usize {
                frak_full[i as usize][j] = frak_b(jets, i, j, Variant::Full)?;
                frak_component[i as usize][j] = frak_b(jets, i, j, Variant::Component(p))?;
            }
        }
        let mut script_full = vec![zero; size];
        let mut script_component = vec![zero; size];
        for j in 0..size {
            script_full[j] = script_b(psi_jet, jets, n, j, Variant::Full)?;
            script_component[j] = script_b(psi_jet, jets, n, j, Variant::Component(p))?;
        }
        Ok(Self { n, frak_full, frak_component, script_full, script_component })
    }
}

/// Right-hand sides of the expansion of `R^(n)(ψ φ_p^{j0})(z)` in powers of
/// `φ_p`: the unweighted sum `Σ_i ℬ^n_{j0-i}(ψ;φ_p) φ_p^i` and the
/// binomially weighted sum `Σ_i C(j0,i) ℬ^n_{j0-i}(ψ;φ_p) φ_p^i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerExpansion {
    pub unweighted: C,
    pub binomial: C,
}

pub fn psi_phi_power_expansion(pair: &SymbolPair, n: u32, j0: u32, z: &[C]) -> Result<PowerExpansion> {
    let psi_jet = pair.psi.radial_jet(z, n)?;
    let jets = pair.phi.radial_jets(z, n);
    let fp = jets[pair.p - 1][0];
    let mut out = PowerExpansion { unweighted: C::new(0.0, 0.0), binomial: C::new(0.0, 0.0) };
    for i in 0..=j0 {
        let j = (j0 - i) as usize;
        let b = if j as u32 > n { C::new(0.0, 0.0) } else { script_b(&psi_jet, &jets, n, j, Variant::Component(pair.p))? };
        let term = b * fp.powu(i);
        out.unweighted += term;
        out.binomial += term * multiindex::binomial(j0 as u64, i as u64)? as f64;
    }
    Ok(out)
}

/// `R^(n)(ψ φ_p^{j})(z)` through the binomially weighted expansion.
pub fn radial_of_psi_times_power(pair: &SymbolPair, n: u32, j: u32, z: &[C]) -> Result<C> {
    Ok(psi_phi_power_expansion(pair, n, j, z)?.binomial)
}

/// Exact `ψ·(f∘φ)`.
pub fn apply_operator(psi: &MultiPoly, phi: &SelfMap, f: &MultiPoly, cap: usize) -> Result<MultiPoly> {
    if psi.dim() != phi.components().len() || f.dim() != phi.components().len() {
        return Err(Error::InvalidInput("dimension mismatch between ψ, φ and f".into()));
    }
    psi.mul_capped(&f.compose(phi.components(), cap)?, cap)
}

/// `|∂^j f(z)/∂z_l|` over the bound representative:
/// `‖δ_z^{H^(n-j)_ω}‖·‖f‖` when `j <= n`, and `‖f‖ / (ω(z)(1-|z|²)^{j-n})`
/// when `j > n`. `f_norm` is `‖f‖_{H^(n)_ω}`.
pub fn partial_bound_check(f: &MultiPoly, w: &RadialWeight, n: u32, l: &CoordinateTuple, z: &[C], f_norm: f64) -> Result<f64> {
    let j = l.order() as u32;
    let d = f.partial(l).eval(z).norm();
    if d == 0.0 {
        return Ok(0.0);
    }
    if !(f_norm > 0.0) {
        return Err(Error::InvalidInput("partial bound needs a positive norm".into()));
    }
    let r = norm(z);
    if j <= n {
        Ok(d / (delta_norm(w, n - j, r)? * f_norm))
    } else {
        let k = (j - n) as i32;
        Ok(d * w.value(r) * (1.0 - r * r).powi(k) / f_norm)
    }
}

/// Both sides of the dominance estimate at `z`:
/// `μ(z)|R^(n)(W_{ψ,φ} f)(z)|` and
/// `Σ_j μ(z)|ℬ_j^n(ψ;φ)(z)|·‖δ_{φ(z)}^{H^(n+m-j)_ν}‖·‖f‖`.
pub fn dominance_sides(
    pair: &SymbolPair,
    f: &MultiPoly,
    nu: &RadialWeight,
    mu: &RadialWeight,
    n: u32,
    m: u32,
    z: &[C],
    f_norm: f64,
) -> Result<(f64, f64)> {
    let r = norm(z);
    let lhs = mu.value(r) * product_rule_radial(&pair.psi, f, pair.phi.as_ref(), n, z)?.norm();
    let psi_jet = pair.psi.radial_jet(z, n)?;
    let jets = pair.phi.radial_jets(z, n);
    let image = norm(&jets.iter().map(|j| j[0]).collect::<Vec<_>>());
    let mut rhs = 0.0;
    for j in 0..=n as usize {
        let b = script_b(&psi_jet, &jets, n, j, Variant::Full)?.norm();
        rhs += mu.value(r) * b * delta_norm(nu, n + m - j as u32, image)? * f_norm;
    }
    Ok((lhs, rhs))
}

/// `|a - b| <= tol · max(|a|, |b|, floor)`
pub fn close(a: C, b: C, tol: f64, floor: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(floor)
}
