use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sasaki::cli::{exit_code_for, run, Command, FamilyKind, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "sasaki", version, about = "Transverse Monge-Ampère, Sasaki-Ricci flow and energy functionals on S^3 -> CP^1")]
struct Cli {
    /// JSON config file; flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for artifacts and the manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base potential over the round structure, e.g. "0.3*(1-x^2)".
    #[arg(long, global = true, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Override a tolerance, e.g. `--tol residual=1e-9`.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tolerances: Vec<(String, f64)>,
    /// Run sweeps on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve the continuity equation at one parameter t.
    Solve {
        #[arg(long)]
        t: Option<f64>,
    },
    /// Follow the continuity path and report its diagnostics.
    Path(PathArgs),
    /// Run the Sasaki-Ricci flow and its smoothing monitors.
    Flow(FlowArgs),
    /// Evaluate J and F along a one-parameter family.
    Scan {
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, alias = "params", value_delimiter = ',')]
        lambdas: Vec<f64>,
    },
    /// Two-stage ε-pinching: continuity path, then flow.
    Pinch {
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Lowest axisymmetric eigenvalues of the basic Laplacian.
    Spectrum {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Constant-curvature contractions and the m = 1 |Q|² field.
    Curvature {
        #[arg(long)]
        m_max: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Every invariant suite, with pass counts in the manifest.
    VerifyAll {
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct PathArgs {
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    records: Option<usize>,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[arg(long)]
    ds: Option<f64>,
    #[arg(long)]
    s_end: Option<f64>,
    #[arg(long)]
    record_every: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Mobius,
    LegendreBump,
    Linear,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v: f64 = v.parse().map_err(|e| format!("{v:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn build_config(cli: Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    set(&mut cfg.grid_n, cli.grid_n);
    set(&mut cfg.seed, cli.seed);
    set(&mut cfg.output, cli.out);
    if cli.psi.is_some() {
        cfg.psi = cli.psi;
    }
    for (k, v) in cli.tolerances {
        cfg.tolerances.insert(k, v);
    }
    if cli.sequential {
        cfg.parallel = false;
    }
    let apply_flow = |cfg: &mut RunConfig, f: FlowArgs| {
        set(&mut cfg.ds, f.ds);
        set(&mut cfg.s_end, f.s_end);
        set(&mut cfg.record_every, f.record_every);
    };
    match cli.command {
        None if cli.config.is_none() => bail!("no command given (use --help)"),
        None => {}
        Some(Cmd::Solve { t }) => {
            cfg.command = Command::Solve;
            set(&mut cfg.t, t);
        }
        Some(Cmd::Path(p)) => {
            cfg.command = Command::Path;
            set(&mut cfg.t_start, p.t_start);
            set(&mut cfg.t_end, p.t_end);
            set(&mut cfg.records, p.records);
        }
        Some(Cmd::Flow(f)) => {
            cfg.command = Command::Flow;
            apply_flow(&mut cfg, f);
        }
        Some(Cmd::Scan { family, lambdas }) => {
            cfg.command = Command::Scan;
            if let Some(f) = family {
                cfg.family = match f {
                    Family::Mobius => FamilyKind::Mobius,
                    Family::LegendreBump => FamilyKind::LegendreBump,
                    Family::Linear => FamilyKind::Linear,
                };
            }
            if !lambdas.is_empty() {
                cfg.params = lambdas;
            }
        }
        Some(Cmd::Pinch { eps, flow }) => {
            cfg.command = Command::Pinch;
            set(&mut cfg.eps, eps);
            apply_flow(&mut cfg, flow);
        }
        Some(Cmd::Spectrum { k }) => {
            cfg.command = Command::Spectrum;
            set(&mut cfg.spectrum_k, k);
        }
        Some(Cmd::Curvature { m_max, c }) => {
            cfg.command = Command::Curvature;
            set(&mut cfg.m_max, m_max);
            set(&mut cfg.c, c);
        }
        Some(Cmd::VerifyAll { samples }) => {
            cfg.command = Command::VerifyAll;
            set(&mut cfg.samples, samples);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            for s in &outcome.manifest.suites {
                println!("{:<24} {}/{}", s.name, s.passed, s.total);
            }
            println!("artifacts in {}", cfg.output.display());
            if outcome.ok() {
                ExitCode::SUCCESS
            } else {
                for f in outcome.failures() {
                    eprintln!("violated: {f}");
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
