//! Criterion runs from a [`RunConfig`] and their on-disk reports: one CSV
//! per theorem, a text summary, and one SVG plot per traced quantity.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::criteria::theorems::{run, CriterionReport, Theorem};
use crate::criteria::trace::RadialTrace;
use crate::error::{Error, Result};
use crate::sampling::radius_level;

pub const CSV_HEADER: &str = "quantity,j,m,r,value,slope";

/// Result of one theorem: a report, or the reason it could not be run.
#[derive(Debug, Clone, PartialEq)]
pub enum TheoremOutcome {
    Report(CriterionReport),
    Skipped { theorem: Theorem, reason: String },
}

/// Runs every theorem of the configuration. Hypothesis mismatches are
/// recorded as skipped; resource and input errors abort.
pub fn analyze(cfg: &RunConfig) -> Result<Vec<TheoremOutcome>> {
    let pair = cfg.pair()?;
    let (nu, mu) = cfg.weights()?;
    let ccfg = cfg.criterion_config();
    ccfg.validate()?;
    cfg.theorems()?
        .into_iter()
        .map(|t| match run(t, &pair, &nu, &mu, &ccfg) {
            Ok(r) => Ok(TheoremOutcome::Report(r)),
            Err(e @ Error::HypothesisMismatch { .. }) => Ok(TheoremOutcome::Skipped { theorem: t, reason: e.to_string() }),
            Err(e) => Err(e),
        })
        .collect()
}

/// `d ln(value) / d ln(1/(1−r))` between consecutive samples.
fn local_slopes(t: &RadialTrace) -> Vec<Option<f64>> {
    (0..t.values.len())
        .map(|i| {
            if i == 0 {
                return None;
            }
            let (v0, v1) = (t.values[i - 1], t.values[i]);
            let dx = (radius_level(t.radii[i]) - radius_level(t.radii[i - 1])) * std::f64::consts::LN_2;
            (v0 > 0.0 && v1 > 0.0 && dx > 0.0).then(|| (v1 / v0).ln() / dx)
        })
        .collect()
}

pub fn trace_label(theorem: Theorem, t: &RadialTrace) -> String {
    format!("{theorem}.{}", t.quantity)
}

pub fn csv(report: &CriterionReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for t in &report.traces {
        let label = trace_label(report.theorem, t);
        for ((r, v), s) in t.radii.iter().zip(&t.values).zip(local_slopes(t)) {
            let slope = s.map(|s| format!("{s:e}")).unwrap_or_default();
            let _ = writeln!(out, "{label},{},{},{r},{v:e},{slope}", t.j, radius_level(*r));
        }
    }
    out
}

pub fn summary(name: &str, cfg: &RunConfig, outcomes: &[TheoremOutcome]) -> String {
    let th = cfg.criterion_config().thresholds;
    let mut out = String::new();
    let _ = writeln!(out, "config: {name}");
    let _ = writeln!(out, "seed: {}", cfg.run.seed);
    let _ = writeln!(out, "thresholds: {}", th.describe());
    let _ = writeln!(
        out,
        "dimension: {}, p = {}, n = {}, m = {}, max_m = {}, dirs = {}",
        cfg.dim(),
        cfg.symbol.p,
        cfg.run.n,
        cfg.run.m,
        cfg.run.max_m,
        cfg.run.dirs
    );
    for o in outcomes {
        match o {
            TheoremOutcome::Skipped { theorem, reason } => {
                let _ = writeln!(out, "{theorem}: Skipped | {reason}");
            }
            TheoremOutcome::Report(r) => {
                let mut line = format!("{}: {}", r.theorem, r.verdict);
                if let Some(n0) = r.n0 {
                    let _ = write!(line, " | n0 = {n0}");
                }
                if let Some(v) = r.norm_estimate {
                    let _ = write!(line, " | norm estimate = {v:e}");
                }
                let _ = writeln!(out, "{line} | seed = {} | thresholds: {}", r.seed, r.thresholds.describe());
                for (t, c) in r.traces.iter().zip(&r.classes) {
                    let _ = writeln!(
                        out,
                        "  {} j={}: {c:?} (sup {:e}, last {:e}, slope {:e})",
                        t.quantity,
                        t.j,
                        t.sup(),
                        t.last(),
                        t.slope()
                    );
                }
            }
        }
    }
    out
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const MARGIN: f64 = 56.0;

/// `log10(value)` against `−log₂(1−r)`; nonpositive values are dropped.
pub fn svg(title: &str, t: &RadialTrace) -> String {
    let pts: Vec<(f64, f64)> = t
        .radii
        .iter()
        .zip(&t.values)
        .filter(|(_, v)| **v > 0.0 && v.is_finite())
        .map(|(r, v)| (radius_level(*r), v.log10()))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(out, "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>", SVG_W / 2.0, escape(title));
    let (x0, x1) = (MARGIN, SVG_W - 16.0);
    let (y0, y1) = (SVG_H - MARGIN, 40.0);
    let _ = writeln!(out, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>");
    let _ = writeln!(out, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>");
    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">-log2(1-r)</text>", (x0 + x1) / 2.0, SVG_H - 16.0);
    let _ = writeln!(out, "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">log10(value)</text>", (y0 + y1) / 2.0, (y0 + y1) / 2.0);
    if !pts.is_empty() {
        let (mut lx, mut hx, mut ly, mut hy) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            lx = lx.min(x);
            hx = hx.max(x);
            ly = ly.min(y);
            hy = hy.max(y);
        }
        if hx - lx < 1e-12 {
            hx = lx + 1.0;
        }
        if hy - ly < 1e-12 {
            ly -= 0.5;
            hy += 0.5;
        }
        let sx = |x: f64| x0 + (x - lx) / (hx - lx) * (x1 - x0);
        let sy = |y: f64| y0 + (y - ly) / (hy - ly) * (y1 - y0);
        let poly: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(out, "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"{}\"/>", poly.join(" "));
        for &(x, y) in &pts {
            let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#1f4e9c\"/>", sx(x), sy(y));
        }
        for (v, y) in [(ly, y0), (hy, y1)] {
            let _ = writeln!(out, "<text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{v:.2}</text>", x0 - 4.0, y + 4.0);
        }
        for (v, x) in [(lx, x0), (hx, x1)] {
            let _ = writeln!(out, "<text x=\"{x:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{v:.1}</text>", y0 + 16.0);
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn file_stem(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Writes `<T>.csv` per theorem, `summary.txt`, and one SVG per trace into
/// `dir`; returns the written paths in order.
pub fn write_reports(dir: &Path, name: &str, cfg: &RunConfig, outcomes: &[TheoremOutcome]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for o in outcomes {
        if let TheoremOutcome::Report(r) = o {
            let p = dir.join(format!("{}.csv", r.theorem));
            write_atomic(&p, &csv(r))?;
            written.push(p);
            for t in &r.traces {
                let label = trace_label(r.theorem, t);
                let p = dir.join(format!("{}_j{}.svg", file_stem(&label), t.j));
                write_atomic(&p, &svg(&format!("{label} j={}", t.j), t))?;
                written.push(p);
            }
        }
    }
    let p = dir.join("summary.txt");
    write_atomic(&p, &summary(name, cfg, outcomes))?;
    written.push(p);
    Ok(written)
}
