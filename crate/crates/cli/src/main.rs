use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hgrowth::config::{RunConfig, BUILTINS};
use hgrowth::paperlab::{registry, run_scenario, ScenarioOutcome};
use hgrowth::report::{analyze, summary, write_atomic, write_reports};
use hgrowth::verify::{corrupted_multinomial, run_suite, Suite, VerifyOptions, DEFAULT_CASES, VERIFY_SEED};
use hgrowth::Error;

#[derive(Parser)]
#[command(name = "hgrowth", version, about = "Evidence for boundedness and compactness of weighted composition operators on high-order growth spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the criteria of a configuration and write CSV, SVG and summary reports.
    Analyze(AnalyzeArgs),
    /// Run a property suite: identities, examples or all.
    Verify(VerifyArgs),
    /// List or run the worked-example scenarios.
    Scenarios(ScenarioArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Config file, or the name of a built-in config.
    #[arg(long)]
    config: String,
    /// Output directory; defaults to the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n0: Option<u32>,
    #[arg(long)]
    max_m: Option<u32>,
    #[arg(long)]
    dirs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Directory for `verify.csv` and, on failure, `counterexample.toml`.
    #[arg(long, default_value = "verify-report")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CASES)]
    cases: usize,
    #[arg(long, default_value_t = VERIFY_SEED)]
    seed: u64,
    /// Replace the chain-rule multinomial by a corrupted one.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScenarioArgs {
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "ID")]
    run: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::UnknownScenario(_) => 2,
        Error::Resource(_) => 3,
        _ => 4,
    }
}

fn load_config(arg: &str) -> hgrowth::Result<RunConfig> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return RunConfig::parse(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        });
    }
    if BUILTINS.iter().any(|b| b.0 == arg) {
        return RunConfig::builtin(arg);
    }
    let names: Vec<&str> = BUILTINS.iter().map(|b| b.0).collect();
    Err(Error::Parse(format!("`{arg}` is neither a readable file nor a built-in config ({})", names.join(", "))))
}

fn cmd_analyze(a: &AnalyzeArgs) -> hgrowth::Result<()> {
    let mut cfg = load_config(&a.config)?;
    if a.n0.is_some() {
        cfg.run.n0 = a.n0;
    }
    if let Some(m) = a.max_m {
        cfg.run.max_m = m;
    }
    if let Some(d) = a.dirs {
        cfg.run.dirs = d;
    }
    if let Some(s) = a.seed {
        cfg.run.seed = s;
    }
    cfg.validate()?;
    let out = a
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .ok_or_else(|| Error::InvalidInput("no output directory: pass --out or set `out` in the config".into()))?;
    let outcomes = analyze(&cfg)?;
    write_reports(&out, &a.config, &cfg, &outcomes)?;
    print!("{}", summary(&a.config, &cfg, &outcomes));
    println!("reports written to {}", out.display());
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> hgrowth::Result<bool> {
    let suite: Suite = a.suite.parse()?;
    let mut opts = VerifyOptions { cases: a.cases, seed: a.seed, ..VerifyOptions::default() };
    if a.inject_fault {
        opts.coefficient = &corrupted_multinomial;
    }
    let rep = run_suite(suite, &opts)?;
    std::fs::create_dir_all(&a.out)?;
    write_atomic(&a.out.join("verify.csv"), &rep.csv())?;
    for c in &rep.checks {
        let mut line = format!("{:<8} {}/{}", c.status, c.suite, c.name);
        if c.tolerance > 0.0 {
            line.push_str(&format!(" ({} cases, max error {:e}, tolerance {:e})", c.cases, c.max_error, c.tolerance));
        }
        if !c.detail.is_empty() {
            line.push_str(&format!(" | {}", c.detail));
        }
        println!("{line}");
    }
    match rep.first_failure() {
        None => Ok(true),
        Some(f) => {
            eprintln!("first failing check: {}/{}", f.suite, f.name);
            if let Some(cx) = &f.counterexample {
                let text = cx.to_toml()?;
                write_atomic(&a.out.join("counterexample.toml"), &text)?;
                eprint!("{text}");
            } else {
                eprintln!("{}", f.detail);
            }
            Ok(false)
        }
    }
}

fn print_outcome(o: &ScenarioOutcome) {
    println!("{}{}", o.id, if o.disputed { " (disputed)" } else { "" });
    for c in &o.checks {
        let mark = if c.agrees { "ok" } else { "DIFF" };
        println!("  [{mark}] {}: expected {}, observed {}", c.name, c.expected, c.observed);
    }
    for n in &o.notes {
        println!("  note: {n}");
    }
    println!("  diff: {}", if o.diff_empty() { "empty".to_string() } else { format!("{} check(s)", o.diff().len()) });
}

fn cmd_scenarios(a: &ScenarioArgs) -> hgrowth::Result<()> {
    if a.list {
        for s in registry() {
            println!("{:<24} {}{}", s.id, s.summary, if s.disputed { " [disputed]" } else { "" });
        }
        return Ok(());
    }
    let id = a.run.as_deref().expect("clap enforces --list or --run");
    print_outcome(&run_scenario(id)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Scenarios(a) => cmd_scenarios(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
