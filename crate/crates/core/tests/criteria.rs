use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hgrowth::config::RunConfig;
use hgrowth::criteria::theorems::{run, CriterionConfig, Theorem, Verdict};
use hgrowth::quantities::{dominance_sides, graded_norm, SymbolPair};
use hgrowth::report::{analyze, TheoremOutcome};
use hgrowth::sampling::SamplingGrid;
use hgrowth::symbols::{MultiPoly, SelfMap, Symbol};
use hgrowth::weights::RadialWeight;

type C = Complex64;

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, deg: u32, scale: f64) -> MultiPoly {
    let terms: Vec<(Vec<u32>, C)> = (0..rng.random_range(1..=4))
        .map(|_| {
            let mut exp = vec![0u32; dim];
            for _ in 0..rng.random_range(0..=deg) {
                exp[rng.random_range(0..dim)] += 1;
            }
            (exp, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
        })
        .collect();
    MultiPoly::from_terms(dim, terms).unwrap()
}

/// Keeps `sup_B |φ| <= 0.8` by bounding the coefficient mass of each component.
fn contracted(p: MultiPoly, dim: usize) -> MultiPoly {
    let mass: f64 = p.terms().map(|(_, c)| c.norm()).sum();
    let target = 0.8 / (dim as f64).sqrt();
    if mass > target {
        p.scale(C::new(target / mass, 0.0))
    } else {
        p
    }
}

/// Largest `LHS / RHS` of the dominance estimate over a seeded corpus, on
/// grids reaching radius `1 − 2^{-max_m}`.
fn dominance_constant(max_m: u32) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(410);
    let (nu, mu) = (RadialWeight::standard(1.0).unwrap(), RadialWeight::standard(1.0).unwrap());
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let dim = rng.random_range(1..=2usize);
        let n = rng.random_range(1..=2u32);
        let m = 1;
        let comps: Vec<MultiPoly> = (0..dim).map(|_| contracted(random_poly(&mut rng, dim, 2, 1.0), dim)).collect();
        let pair = SymbolPair::new(random_poly(&mut rng, dim, 2, 1.0).into(), Arc::new(SelfMap::new(comps).unwrap()), 1).unwrap();
        let f = random_poly(&mut rng, dim, 3, 1.0);
        let grid = SamplingGrid::dense_open_ball(dim, 8, max_m, 24, 5);
        let f_norm = graded_norm(&Symbol::Poly(f.clone()), &nu, n + m, &grid).unwrap();
        for z in grid.points() {
            let (lhs, rhs) = dominance_sides(&pair, &f, &nu, &mu, n, m, &z, f_norm).unwrap();
            if rhs > 0.0 {
                worst = worst.max(lhs / rhs);
            } else {
                assert!(lhs <= 1e-12, "lhs {lhs} with vanishing right-hand side");
            }
        }
    }
    worst
}

#[test]
fn dominance_ratio_is_bounded_by_one_constant_over_the_corpus() {
    let (near, far) = (dominance_constant(8), dominance_constant(16));
    assert!(far.is_finite() && far <= 10.0, "corpus constant {far}");
    assert!(far <= 1.5 * near, "constant grows toward the boundary: {near} -> {far}");
}

#[test]
fn restricted_traces_are_nonincreasing() {
    for name in ["contraction", "identity-singular"] {
        for o in analyze(&RunConfig::builtin(name).unwrap()).unwrap() {
            let TheoremOutcome::Report(r) = o else { continue };
            for t in r.traces.iter().filter(|t| t.quantity.starts_with("restricted")) {
                assert!(t.radii.windows(2).all(|w| w[0] < w[1]));
                assert!(
                    t.values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)),
                    "{name} {} {} j={}",
                    r.theorem,
                    t.quantity,
                    t.j
                );
            }
        }
    }
}

#[test]
fn compact_evidence_sends_normalized_powers_to_zero() {
    let cfg = RunConfig::builtin("contraction").unwrap();
    let (nu, mu) = cfg.weights().unwrap();
    let pair = cfg.pair().unwrap();
    let ccfg = cfg.criterion_config();
    assert_eq!(run(Theorem::C1, &pair, &nu, &mu, &ccfg).unwrap().verdict, Verdict::CompactEvidence);
    let (n, m) = (cfg.run.n, cfg.run.m);
    let grid = SamplingGrid::dense_open_ball(2, 16, 12, 32, 3);
    let phi: Vec<MultiPoly> = cfg.symbol.phi.components.iter().map(|c| c.to_poly().unwrap()).collect();
    let psi = cfg.symbol.psi.to_poly().unwrap();
    let trace: Vec<f64> = [2u32, 4, 8, 16, 32]
        .iter()
        .map(|&s| {
            let f = MultiPoly::monomial(vec![s, 0], C::new(1.0, 0.0));
            let fs = f.scale(C::new(1.0 / graded_norm(&Symbol::Poly(f.clone()), &nu, n + m, &grid).unwrap(), 0.0));
            let wf = psi.mul(&fs.compose(&phi, 1 << 16).unwrap());
            graded_norm(&Symbol::Poly(wf), &mu, n, &grid).unwrap()
        })
        .collect();
    assert!(trace.windows(2).all(|w| w[1] < w[0]), "{trace:?}");
    assert!(*trace.last().unwrap() < 1e-6, "{trace:?}");
}

#[test]
fn verdicts_do_not_depend_on_thread_scheduling() {
    let cfg = RunConfig::builtin("identity-singular").unwrap();
    let (nu, mu) = cfg.weights().unwrap();
    let pair = cfg.pair().unwrap();
    let ccfg = CriterionConfig { dirs: 64, ..cfg.criterion_config() };
    let a = run(Theorem::A2, &pair, &nu, &mu, &ccfg).unwrap();
    let b = std::thread::spawn({
        let pair = pair.clone();
        move || run(Theorem::A2, &pair, &nu, &mu, &ccfg).unwrap()
    })
    .join()
    .unwrap();
    assert_eq!(a, b);
}
