use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use lkcq::harness::{run_convergence_study, run_single, ExperimentConfig, NormKind, Scheme};
use lkcq::lk_weights::{weights_explicit, SchemeParams};
use lkcq::spatial::cgl_grid;
use lkcq::stability::{
    boundary_locus, sector_check_tau8, ContourSpec, LocusReport, DEFAULT_TRUNCATION,
};
use lkcq::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lkcq",
    version,
    about = "Corrected L_k convolution quadrature for subdiffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the CQ weights ω_0..ω_{M−1} as CSV `j,omega`.
    Weights {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        terms: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the symbol and write CSV `re_z,im_z,re_symbol,im_symbol,arg`;
    /// a JSON summary goes to stdout.
    Stability {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Method::Locus)]
        method: Method,
        /// Unit-circle samples for `locus`, samples per ray for `tau8`.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        /// Truncation of the unit-circle series.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        trunc: usize,
        /// Contour half-angle in units of π.
        #[arg(long, default_value_t = 0.51)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.01)]
        tau: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one run from a JSON config and write CSV `x,u` on all nodes.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a refinement study and write the report as JSON.
    Converge {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160,320")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, value_enum, default_value_t = NormArg::Cc)]
        norm: NormArg,
        #[arg(long = "T", default_value_t = 1.0)]
        t_final: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Locus,
    Tau8,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Standard,
    Corrected,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Cc,
    Rms,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Standard => Scheme::Standard,
            SchemeArg::Corrected => Scheme::Corrected,
        }
    }
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Cc => NormKind::ClenshawCurtis,
            NormArg::Rms => NormKind::Rms,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    k: usize,
    alpha: f64,
    #[serde(rename = "T", default = "one")]
    t_final: f64,
    #[serde(rename = "N")]
    n_steps: usize,
    nodes: usize,
    scheme: Scheme,
    #[serde(default = "example1")]
    problem: String,
}

fn one() -> f64 {
    1.0
}

fn example1() -> String {
    "example1".into()
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_weights(k: usize, alpha: f64, terms: usize, out: &Path) -> Result<()> {
    let w = weights_explicit(SchemeParams::new(k, alpha)?, terms)?;
    let mut f = create(out)?;
    writeln!(f, "j,omega").map_err(io)?;
    for (j, omega) in w.omegas().iter().enumerate() {
        writeln!(f, "{j},{}", num(*omega)).map_err(io)?;
    }
    f.flush().map_err(io)
}

fn write_locus(report: &LocusReport, out: &Path) -> Result<()> {
    let mut f = create(out)?;
    writeln!(f, "re_z,im_z,re_symbol,im_symbol,arg").map_err(io)?;
    for s in &report.samples {
        writeln!(
            f,
            "{},{},{},{},{}",
            num(s.point.re),
            num(s.point.im),
            num(s.symbol.re),
            num(s.symbol.im),
            num(s.arg)
        )
        .map_err(io)?;
    }
    f.flush().map_err(io)
}

#[allow(clippy::too_many_arguments)]
fn stability(
    k: usize,
    alpha: f64,
    method: Method,
    samples: usize,
    trunc: usize,
    theta: f64,
    kappa: f64,
    tau: f64,
    out: &Path,
) -> Result<()> {
    let params = SchemeParams::new(k, alpha)?;
    let report = match method {
        Method::Locus => boundary_locus(params, samples, trunc)?,
        Method::Tau8 => {
            let contour = ContourSpec::new(theta * PI, kappa, tau, samples, (samples / 4).max(2))?;
            sector_check_tau8(params, &contour)?
        }
    };
    write_locus(&report, out)?;
    let summary = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    println!("{summary}");
    Ok(())
}

fn solve(config: &Path, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
    let cfg: SolveConfig = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    if cfg.problem != "example1" {
        return Err(Error::Config(format!("unknown problem {:?}", cfg.problem)));
    }
    let exp = ExperimentConfig {
        k: cfg.k,
        alpha: cfg.alpha,
        t_final: cfg.t_final,
        n_list: vec![cfg.n_steps],
        nodes: cfg.nodes,
        scheme: cfg.scheme,
        norm: NormKind::ClenshawCurtis,
    };
    let grid = cgl_grid(cfg.nodes)?;
    let history = run_single(&exp, cfg.n_steps)?;
    let mut f = create(out)?;
    writeln!(f, "x,u").map_err(io)?;
    let p = grid.degree();
    for (i, &x) in grid.nodes().iter().enumerate() {
        let u = if i == 0 || i == p {
            0.0
        } else {
            history.u_final[i - 1]
        };
        writeln!(f, "{},{}", num(x), num(u)).map_err(io)?;
    }
    f.flush().map_err(io)
}

fn converge(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let report = run_convergence_study(cfg)?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    let mut f = create(out)?;
    writeln!(f, "{text}").map_err(io)?;
    f.flush().map_err(io)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Weights {
            k,
            alpha,
            terms,
            out,
        } => write_weights(k, alpha, terms, &out),
        Command::Stability {
            k,
            alpha,
            method,
            samples,
            trunc,
            theta,
            kappa,
            tau,
            out,
        } => stability(k, alpha, method, samples, trunc, theta, kappa, tau, &out),
        Command::Solve { config, out } => solve(&config, &out),
        Command::Converge {
            k,
            alpha,
            scheme,
            n_list,
            nodes,
            norm,
            t_final,
            out,
        } => {
            let cfg = ExperimentConfig {
                k,
                alpha,
                t_final,
                n_list,
                nodes,
                scheme: scheme.into(),
                norm: norm.into(),
            };
            converge(&cfg, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
