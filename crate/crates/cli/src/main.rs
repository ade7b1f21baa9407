//! `frac-hardy`: sharp constants, boundary weights and Hardy inequality checks
//! from the command line.
//!
//! Exit codes: 0 all checks pass, 1 an inequality is violated, 2 usage or
//! parameter error, 3 numerical non-convergence.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frac_hardy::hardy::WeightKind;
use frac_hardy::Error;

use crate::config::{parse_domain, parse_family, CommandName, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "frac-hardy", version, about = "Numerical checks of sharp fractional Hardy inequalities")]
#[command(subcommand_required = true, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print kappa, the sphere integral and (with --p) the L^p constant.
    Constants(Common),
    /// Dump boundary weights on a sample lattice as CSV.
    Weight(Common),
    /// Check an inequality on a trial family and emit reports.
    Verify(Common),
    /// Run the acceptance matrix at reduced resolution.
    Selftest(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Domain JSON, inline or a file path.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Lattice spacing (trial functions, or the weight sample grid).
    #[arg(long)]
    h: Option<f64>,
    #[arg(long = "sphere-res")]
    sphere_res: Option<usize>,
    /// Weight kind, e.g. M_ALPHA or one_d_two_sided.
    #[arg(long)]
    kind: Option<String>,
    /// `bumps`, `sharpness[:K]`, or a family JSON document.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; reports also get a CSV next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; never changes the output.
    #[arg(long)]
    workers: Option<usize>,
    /// Scales the theoretical constant (negative controls).
    #[arg(long = "constant-scale")]
    constant_scale: Option<f64>,
    /// Load the run description from a canonical config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the canonical config and exit.
    #[arg(long = "print-config")]
    print_config: bool,
    /// Emit JSON instead of aligned text (constants).
    #[arg(long)]
    json: bool,
    /// Run the selftest at full acceptance resolution.
    #[arg(long)]
    full: bool,
}

fn build_config(name: CommandName, c: &Common) -> Result<RunConfig, Error> {
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let cfg = RunConfig::from_json(&text)?;
        if cfg.command != name {
            return Err(Error::Parameter(format!("config is for {:?}, not {name:?}", cfg.command)));
        }
        return Ok(cfg);
    }
    let mut cfg = RunConfig::new(name);
    cfg.domain = c.domain.as_deref().map(parse_domain).transpose()?;
    cfg.n = c.n;
    cfg.alpha = c.alpha;
    cfg.p = c.p;
    cfg.h = c.h;
    cfg.sphere_res = c.sphere_res;
    cfg.kind = c.kind.as_deref().map(str::parse::<WeightKind>).transpose()?;
    cfg.family = c.family.as_deref().map(parse_family).transpose()?;
    cfg.out = c.out.clone();
    if let Some(t) = c.tol {
        cfg.tol = t;
    }
    if let Some(s) = c.constant_scale {
        cfg.constant_scale = s;
    }
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence(_) | Error::QuadratureResolution(_) | Error::Resolution(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Cmd::Constants(c) => (CommandName::Constants, c),
        Cmd::Weight(c) => (CommandName::Weight, c),
        Cmd::Verify(c) => (CommandName::Verify, c),
        Cmd::Selftest(c) => (CommandName::Selftest, c),
    };
    let run = || -> Result<u8, Error> {
        let cfg = build_config(name, common)?;
        if common.print_config {
            print!("{}", cfg.to_canonical_json());
            return Ok(0);
        }
        let workers = commands::workers(common.workers)?;
        match name {
            CommandName::Constants => commands::constants(&cfg, common.json),
            CommandName::Weight => commands::weight(&cfg, &workers),
            CommandName::Verify => commands::verify(&cfg, &workers),
            CommandName::Selftest => commands::selftest(&cfg, &workers, common.full),
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("frac-hardy: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
