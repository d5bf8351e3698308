//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hgrowth::config::RunConfig;
use hgrowth::criteria::theorems::{Theorem, Verdict};
use hgrowth::mobius::MobiusMap;
use hgrowth::paperlab::{lacunary_lowerbound_check, minimal_working_q, run_scenario};
use hgrowth::quantities::{faa_di_bruno_radial, product_rule_radial, psi_phi_power_expansion, SymbolPair};
use hgrowth::report::{analyze, csv, TheoremOutcome};
use hgrowth::sampling::{geometric_radii, SamplingGrid};
use hgrowth::symbols::{LacunarySeries, MultiPoly};
use hgrowth::verify::{corpus, random_ball_point, CorpusCase};
use hgrowth::weights::{integral_at_one_finite, nested_integral, Finiteness, RadialWeight};

type C = Complex64;

const CORPUS_SEED: u64 = 0xacc_e97;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---------------------------------------------------------------------------
// Oracles

/// Coefficients in `λ` of a polynomial in one variable.
type Uni = Vec<C>;

fn uni_mul(a: &[C], b: &[C]) -> Uni {
    let mut out = vec![C::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `λ ↦ p(λz)`
fn restrict(p: &MultiPoly, z: &[C]) -> Uni {
    let mut out = vec![C::new(0.0, 0.0); p.degree() as usize + 1];
    for (exp, c) in p.terms() {
        let mono: C = exp.iter().zip(z).map(|(&e, v)| v.powu(e)).product();
        out[exp.iter().sum::<u32>() as usize] += c * mono;
    }
    out
}

/// `λ ↦ f(u_1(λ), …, u_N(λ))`
fn compose_uni(f: &MultiPoly, comps: &[Uni]) -> Uni {
    let mut out = vec![C::new(0.0, 0.0)];
    for (exp, c) in f.terms() {
        let mut term = vec![*c];
        for (u, &e) in comps.iter().zip(exp) {
            for _ in 0..e {
                term = uni_mul(&term, u);
            }
        }
        if term.len() > out.len() {
            out.resize(term.len(), C::new(0.0, 0.0));
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
    }
    out
}

/// `R^(n) g(z) = Σ_k k^n c_k` where `g(λz) = Σ_k c_k λ^k`.
fn radial_from_uni(u: &[C], n: u32) -> C {
    u.iter().enumerate().map(|(k, c)| c * (k as f64).powi(n as i32)).sum()
}

/// `λ ↦ ψ(λz)·f(φ(λz))`
fn restrict_operator(psi: &MultiPoly, phi: &[MultiPoly], f: &MultiPoly, z: &[C]) -> Uni {
    let comps: Vec<Uni> = phi.iter().map(|p| restrict(p, z)).collect();
    uni_mul(&restrict(psi, z), &compose_uni(f, &comps))
}

fn rel_err(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-12)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Depth-`k` iterated integral `∫_0^r ∫_0^{t_1} ⋯ ∫_0^{t_{k-1}} dt_k/ω(t_k)`
/// by nested Gauss–Legendre.
fn nested_oracle(w: &dyn Fn(f64) -> f64, k: u32, r: f64, gl: &[(f64, f64)]) -> f64 {
    gl.iter()
        .map(|&(x, wt)| {
            let t = 0.5 * r * (x + 1.0);
            let inner = if k == 1 { 1.0 / w(t) } else { nested_oracle(w, k - 1, t, gl) };
            0.5 * r * wt * inner
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Criteria

fn c1_faa_di_bruno(cases: &[CorpusCase]) -> Outcome {
    let start = Instant::now();
    let (mut worst, mut count) = (0.0f64, 0usize);
    for c in cases {
        for z in &c.points {
            let comps: Vec<Uni> = c.phi.components().iter().map(|p| restrict(p, z)).collect();
            let exact = radial_from_uni(&compose_uni(&c.f, &comps), c.n);
            let got = faa_di_bruno_radial(&c.f, &c.phi, c.n, z).unwrap();
            worst = worst.max(rel_err(exact, got));
            count += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-10 && t <= Duration::from_secs(60),
        format!("{} pairs x 20 points ({count} evaluations): max relative error {worst:.2e} (tol 1e-10), {t:.2?} (limit 60 s)", cases.len()),
    )
}

fn c2_product_rule(cases: &[CorpusCase]) -> Outcome {
    let mut worst = 0.0f64;
    for c in cases {
        let psi = c.psi.clone().into();
        for z in &c.points {
            let exact = radial_from_uni(&restrict_operator(&c.psi, c.phi.components(), &c.f, z), c.n);
            let got = product_rule_radial(&psi, &c.f, &c.phi, c.n, z).unwrap();
            worst = worst.max(rel_err(exact, got));
        }
    }
    outcome(worst <= 1e-10, format!("R^(n)(psi*(f o phi)) on {} pairs: max relative error {worst:.2e} (tol 1e-10)", cases.len()))
}

fn c3_power_identity(cases: &[CorpusCase]) -> Outcome {
    let (mut unweighted, mut binomial) = (0.0f64, 0.0f64);
    let mut first_bad: Option<(u32, u32, f64)> = None;
    for c in cases {
        let pair = SymbolPair::new(c.psi.clone().into(), std::sync::Arc::new(c.phi.clone()), c.p).unwrap();
        let fp: &MultiPoly = c.phi.component(c.p);
        for z in &c.points {
            let power = compose_uni(&MultiPoly::monomial(vec![c.j0], C::new(1.0, 0.0)), &[restrict(fp, z)]);
            let exact = radial_from_uni(&uni_mul(&restrict(&c.psi, z), &power), c.n);
            let e = psi_phi_power_expansion(&pair, c.n, c.j0, z).unwrap();
            let ep = rel_err(exact, e.unweighted);
            if ep > 1e-10 && first_bad.is_none() {
                first_bad = Some((c.n, c.j0, ep));
            }
            unweighted = unweighted.max(ep);
            binomial = binomial.max(rel_err(exact, e.binomial));
        }
    }
    let mut detail = format!(
        "sum_i B^n_(j0-i) phi_p^i vs R^(n)(psi phi_p^j0), j0 <= n <= 4: max relative error {unweighted:.2e} (tol 1e-10)"
    );
    if let Some((n, j0, e)) = first_bad {
        detail.push_str(&format!(
            "; first violation n = {n}, j0 = {j0}, error {e:.2e}; the binomially weighted sum sum_i C(j0,i) B^n_(j0-i) phi_p^i matches to {binomial:.2e}"
        ));
    }
    outcome(unweighted <= 1e-10, detail)
}

fn c4_mobius() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut modulus, mut invol, mut ends) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let dim = rng.random_range(1..=3usize);
        let alpha = random_ball_point(&mut rng, dim, 0.95);
        let z = random_ball_point(&mut rng, dim, 0.99);
        let g = MobiusMap::new(alpha.clone()).unwrap();
        let gz = g.apply(&z);
        let a2: f64 = alpha.iter().map(|v| v.norm_sqr()).sum();
        let z2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        let za: C = z.iter().zip(&alpha).map(|(x, y)| x * y.conj()).sum();
        let lhs = 1.0 - gz.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let rhs = (1.0 - a2) * (1.0 - z2) / (C::new(1.0, 0.0) - za).norm_sqr();
        modulus = modulus.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
        let back = g.apply(&gz);
        invol = invol.max(back.iter().zip(&z).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt());
        let zero = vec![C::new(0.0, 0.0); dim];
        let d0 = g.apply(&zero).iter().zip(&alpha).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let d1 = g.apply(&alpha).iter().map(|v| v.norm()).fold(0.0, f64::max);
        ends = ends.max(d0).max(d1);
    }
    outcome(
        modulus <= 1e-12 && invol <= 1e-10 && ends <= 1e-12,
        format!(
            "1000 (alpha, z): modulus identity {modulus:.2e} (tol 1e-12), involution {invol:.2e} (tol 1e-10), gamma(0) = alpha and gamma(alpha) = 0 within {ends:.2e} (tol 1e-12)"
        ),
    )
}

fn c5_nested() -> Outcome {
    let gl = gauss_legendre(40);
    let weights: Vec<(&str, RadialWeight)> = vec![
        ("(1-t^2)^0.25", RadialWeight::standard(0.25).unwrap()),
        ("(1-t^2)^1", RadialWeight::standard(1.0).unwrap()),
        ("(1-t^2)^2.5", RadialWeight::standard(2.5).unwrap()),
        ("(1-t)log(e/(1-t))", RadialWeight::custom("log", |t: f64| (1.0 - t) * (1.0 - (1.0 - t).ln()), 0.5, 2.0, 0.0).unwrap()),
        ("(1-t)(1+t/2)", RadialWeight::custom("lin", |t: f64| (1.0 - t) * (1.0 + 0.5 * t), 0.5, 2.0, 0.0).unwrap()),
    ];
    let mut worst = 0.0f64;
    for (_, w) in &weights {
        for r in [0.3, 0.6, 0.9] {
            for k in 1..=3 {
                let exact = nested_oracle(&|t| w.value(t), k, r, &gl);
                let got = nested_integral(w, k, r).unwrap();
                worst = worst.max((got - exact).abs() / exact.abs());
            }
        }
    }
    let unit = RadialWeight::unit();
    let mut unit_worst = 0.0f64;
    for r in [0.3f64, 0.6, 0.9] {
        for k in 1..=3u32 {
            let exact = r.powi(k as i32) / (1..=k).product::<u32>() as f64;
            unit_worst = unit_worst.max((nested_integral(&unit, k, r).unwrap() - exact).abs() / exact);
        }
    }
    outcome(
        worst <= 1e-6 && unit_worst <= 1e-12,
        format!(
            "{} weights x 3 radii x k <= 3: max relative error {worst:.2e} (tol 1e-6); omega = 1 vs r^k/k!: {unit_worst:.2e} (tol 1e-12)",
            weights.len()
        ),
    )
}

fn c6_finiteness() -> Outcome {
    // ∫_0^1 (1-t²)^{-α} dt = √π Γ(1-α) / (2 Γ(3/2-α)) for α < 1, = ∞ for α >= 1.
    // Γ(3/4) = 1.2254167024651776, Γ(5/4) = 0.9064024770554771.
    let closed = [
        (0.25, Some(PI.sqrt() * 1.2254167024651776 / (2.0 * 0.9064024770554771))),
        (0.5, Some(PI / 2.0)),
        (1.5, None),
        (2.0, None),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (alpha, expect) in closed {
        let rep = integral_at_one_finite(&RadialWeight::standard(alpha).unwrap(), 1).unwrap();
        let (good, text) = match (&rep.verdict, expect) {
            (Finiteness::Finite { limit }, Some(v)) => (true, format!("alpha {alpha}: Finite (limit {limit:.6}, closed form {v:.6})")),
            (Finiteness::Divergent, None) => (true, format!("alpha {alpha}: Divergent")),
            (other, _) => (false, format!("alpha {alpha}: {other:?}")),
        };
        ok &= good;
        parts.push(text);
    }
    outcome(ok, parts.join("; "))
}

fn c7_lacunary_ratio() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [0.25, 0.5, 0.9] {
        let lac = LacunarySeries::new(1, 1, 10, alpha, 8).unwrap();
        for k in 0..=8 {
            let lhs = lac.coefficient(k).ln() + (1.0 - alpha) * (lac.exponent(k) as f64).ln();
            worst = worst.max((lhs - 0.5 * alpha * 10f64.ln()).abs());
        }
    }
    outcome(worst <= 1e-12, format!("q = 10, k <= 8, alpha in {{0.25, 0.5, 0.9}}: max |ln(a_k n_k^(1-alpha)) - ln q^(alpha/2)| = {worst:.2e} (tol 1e-12)"))
}

fn c8_lower_bound() -> Outcome {
    let start = Instant::now();
    let rep = lacunary_lowerbound_check(0.5, 10, 8, 1).unwrap();
    let t = start.elapsed();
    let windows: Vec<String> = rep
        .windows
        .iter()
        .map(|w| format!("k={} margin {:.3e} (tail/Q1 {:.1e})", w.k, w.margin, w.tail_ratio()))
        .collect();
    let pass = rep.all_positive() && rep.tail_dominated() && t <= Duration::from_secs(30);
    let mut detail = format!("q = 10, alpha = 1/2, K = 8: {}; {t:.2?} (limit 30 s)", windows.join(", "));
    if !rep.all_positive() {
        let q = minimal_working_q(0.5, 1).unwrap();
        detail.push_str(&format!(
            "; the negative margins are reproduced by direct summation at the worst phase; smallest ratio with certified margins: q = {}",
            q.map_or("none <= 1000".into(), |q| q.to_string())
        ));
    }
    outcome(pass, detail)
}

fn c9_scenarios() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in ["stilde-ex1", "stilde-ex2", "stilde-ex3"] {
        let o = run_scenario(id).unwrap();
        ok &= o.diff_empty();
        if o.diff_empty() {
            parts.push(format!("{id}: diff empty"));
        } else {
            let diff: Vec<String> =
                o.diff().iter().map(|c| format!("{} expected {} observed {}", c.name, c.expected, c.observed)).collect();
            parts.push(format!("{id}: diff [{}] ({})", diff.join(", "), o.notes.join(", ")));
        }
    }
    outcome(ok, parts.join("; "))
}

fn verdicts(outcomes: &[TheoremOutcome]) -> Vec<(Theorem, Option<Verdict>)> {
    outcomes
        .iter()
        .map(|o| match o {
            TheoremOutcome::Report(r) => (r.theorem, Some(r.verdict)),
            TheoremOutcome::Skipped { theorem, .. } => (*theorem, None),
        })
        .collect()
}

fn verdict_of(v: &[(Theorem, Option<Verdict>)], t: Theorem) -> Option<Verdict> {
    v.iter().find(|x| x.0 == t).and_then(|x| x.1)
}

fn c10_sanity() -> Outcome {
    let start = Instant::now();
    let con = verdicts(&analyze(&RunConfig::builtin("contraction").unwrap()).unwrap());
    let sing = verdicts(&analyze(&RunConfig::builtin("identity-singular").unwrap()).unwrap());
    let t = start.elapsed();
    let pass = verdict_of(&con, Theorem::A1) == Some(Verdict::BoundedEvidence)
        && verdict_of(&con, Theorem::A2) == Some(Verdict::BoundedEvidence)
        && verdict_of(&con, Theorem::C1) == Some(Verdict::CompactEvidence)
        && verdict_of(&con, Theorem::C2) == Some(Verdict::CompactEvidence)
        && verdict_of(&sing, Theorem::A2) == Some(Verdict::DivergentEvidence)
        && verdict_of(&sing, Theorem::C2) == Some(Verdict::NotCompactEvidence)
        && t <= Duration::from_secs(300);
    let show = |v: &[(Theorem, Option<Verdict>)]| {
        v.iter()
            .map(|(t, x)| format!("{t} {}", x.map_or("Skipped".into(), |x| x.to_string())))
            .collect::<Vec<_>>()
            .join(", ")
    };
    outcome(pass, format!("contraction: {}; identity-singular: {}; {t:.2?} (limit 300 s)", show(&con), show(&sing)))
}

/// `|f(0)| + sup_grid ω|R^(k) f|`
fn oracle_norm(f: &MultiPoly, w: &RadialWeight, k: u32, grid: &SamplingGrid) -> f64 {
    let origin = vec![C::new(0.0, 0.0); f.dim()];
    let sup = grid
        .points()
        .map(|z| w.value(z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()) * radial_from_uni(&restrict(f, &z), k).norm())
        .fold(0.0, f64::max);
    f.eval(&origin).norm() + sup
}

fn random_probe(rng: &mut ChaCha8Rng, dim: usize) -> MultiPoly {
    let terms: Vec<(Vec<u32>, C)> = (0..rng.random_range(1..=6))
        .map(|_| {
            let mut exp = vec![0u32; dim];
            for _ in 0..rng.random_range(0..=6) {
                exp[rng.random_range(0..dim)] += 1;
            }
            (exp, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        })
        .collect();
    MultiPoly::from_terms(dim, terms).unwrap()
}

fn c11_probe() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["contraction", "identity-singular"] {
        let cfg = RunConfig::builtin(name).unwrap();
        let (nu, mu) = cfg.weights().unwrap();
        let psi = cfg.symbol.psi.to_poly().unwrap();
        let phi: Vec<MultiPoly> = cfg.symbol.phi.components.iter().map(|c| c.to_poly().unwrap()).collect();
        let (n, m) = (cfg.run.n, cfg.run.m);
        let grid = SamplingGrid::dense_open_ball(cfg.dim(), 16, 10, 64, 11);
        let outcomes = analyze(&cfg).unwrap();
        for o in &outcomes {
            let TheoremOutcome::Report(r) = o else { continue };
            if r.verdict != Verdict::BoundedEvidence {
                continue;
            }
            let (dom, tgt) = match r.theorem {
                Theorem::A1 => (n + m, n),
                Theorem::A2 => (n, n + m),
                _ => continue,
            };
            let norm_a = r.norm_estimate.unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1100);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let f = random_probe(&mut rng, cfg.dim());
                let fnorm = oracle_norm(&f, &nu, dom, &grid);
                let sup = grid
                    .points()
                    .map(|z| mu.value(z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()) * radial_from_uni(&restrict_operator(&psi, &phi, &f, &z), tgt).norm())
                    .fold(0.0, f64::max);
                worst = worst.max(sup / fnorm);
            }
            ok &= worst <= 10.0 * norm_a;
            parts.push(format!("{name} {}: max probe ratio {worst:.3} vs 10 x norm {norm_a:.3}", r.theorem));
        }
    }
    // φ = identity, ψ ≡ 1 on H^(1)_ν → H^(2)_μ with ν = μ = 1 − t²; probe f = −log(1 − z₁),
    // Rf = z₁/(1 − z₁), R²f = z₁/(1 − z₁)².
    let cfg = RunConfig::builtin("identity-singular").unwrap();
    let (nu, mu) = cfg.weights().unwrap();
    let pair = cfg.pair().unwrap();
    let probe_z = [C::new(0.3, 0.2), C::new(-0.1, 0.4)];
    let is_identity = pair.psi.eval(&probe_z).unwrap() == C::new(1.0, 0.0) && pair.phi.apply(&probe_z) == probe_z;
    let levels = geometric_radii(1, 30);
    let fnorm = levels.iter().map(|&r| nu.value(r) * r / (1.0 - r)).fold(0.0, f64::max);
    let trace: Vec<f64> = geometric_radii(3, cfg.run.max_m)
        .iter()
        .map(|&r| mu.value(r) * r / ((1.0 - r) * (1.0 - r)) / fnorm)
        .collect();
    let growing = trace.windows(2).all(|w| w[1] > w[0]) && trace.last().unwrap() / trace[0] >= 100.0;
    ok &= is_identity && growing;
    parts.push(format!(
        "identity-singular A2 probe -log(1-z1): ratio trace {:.3} -> {:.3e} over m = 3..{}",
        trace[0],
        trace.last().unwrap(),
        cfg.run.max_m
    ));
    outcome(ok, parts.join("; "))
}

fn c12_determinism() -> Outcome {
    let mut ok = true;
    let mut rows = 0;
    for name in ["contraction", "identity-singular"] {
        let cfg = RunConfig::builtin(name).unwrap();
        let run = || -> Vec<String> {
            analyze(&cfg)
                .unwrap()
                .iter()
                .filter_map(|o| match o {
                    TheoremOutcome::Report(r) => Some(csv(r)),
                    TheoremOutcome::Skipped { .. } => None,
                })
                .collect()
        };
        let (a, b) = (run(), run());
        rows += a.iter().map(|s| s.lines().count()).sum::<usize>();
        ok &= a == b && a.iter().all(|s| s.lines().count() > 1);
    }
    outcome(ok, format!("two runs per built-in config, fixed seed: CSVs byte-identical ({rows} lines compared)"))
}

fn main() {
    let cases = corpus(200, 20, CORPUS_SEED);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("chain-rule oracle equivalence", Box::new(|| c1_faa_di_bruno(&cases))),
        ("product-rule equivalence", Box::new(|| c2_product_rule(&cases))),
        ("psi phi_p power identity (unweighted sum)", Box::new(|| c3_power_identity(&cases))),
        ("Mobius identities", Box::new(c4_mobius)),
        ("nested-integral collapse", Box::new(c5_nested)),
        ("finiteness classifier", Box::new(c6_finiteness)),
        ("lacunary ratio", Box::new(c7_lacunary_ratio)),
        ("lacunary lower bound at q = 10", Box::new(c8_lower_bound)),
        ("S-tilde scenario suite", Box::new(c9_scenarios)),
        ("criterion sanity", Box::new(c10_sanity)),
        ("theorem-consistency probe", Box::new(c11_probe)),
        ("determinism", Box::new(c12_determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: {} of 12 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
