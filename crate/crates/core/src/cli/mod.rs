//! The `hpt` command line: configuration, JSON reports and commands.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails,
//! 2 for usage or input errors.

mod commands;
pub mod config;
pub mod dec;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_check_dec, cmd_export, cmd_gaussian, cmd_homotopy, cmd_verify, read_manifest, write_manifest, ExportConfig,
    FieldChoice, HomotopyConfig, VerifyConfig,
};
pub use report::Report;

use crate::hrv::Lemma;
use crate::Result;
use config::ConfigFile;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hpt", version, about = "Homotopy probability checks for fluid data on the flat 3-torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// key = value configuration file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// leave out the timings section so reports can be compared byte for byte
    #[arg(long, global = true)]
    pub omit_timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exterior-calculus identities on seeded random forms
    CheckDec {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// negative control: replace δ by −δ
        #[arg(long)]
        flip_codifferential_sign: bool,
    },
    /// Build a lemma homotopy from a fluid state and check it
    Verify {
        #[command(flatten)]
        common: Common,
        /// abc, shear, taylor-green or transport
        #[arg(long)]
        field: Option<String>,
        /// read the state from a manifest of field files instead
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long = "A")]
        a: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        amplitude: Option<f64>,
        /// mass, vorticity or euler
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// multiply the density by (1 + t)
        #[arg(long)]
        perturb_density: bool,
    },
    /// Exact moments of the homotopy Gaussian
    Gaussian {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Density homotopy between two equal-mass log-densities
    Homotopy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f0: Option<PathBuf>,
        #[arg(long)]
        f1: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write a shipped field as field files plus a manifest
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        field: Option<String>,
        #[arg(long = "A")]
        a: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        /// output directory
        #[arg(long)]
        dir: PathBuf,
    },
}

fn load(common: &Common) -> Result<ConfigFile> {
    match &common.config {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn field_choice(
    file: &ConfigFile,
    field: Option<String>,
    abc: [Option<f64>; 3],
    amplitude: Option<f64>,
) -> Result<Option<FieldChoice>> {
    let Some(name) = file.resolve_opt(field, "field")? else { return Ok(None) };
    let [a, b, c] = abc;
    Ok(Some(FieldChoice {
        name,
        a: file.resolve(a, "A", 1.0)?,
        b: file.resolve(b, "B", 1.0)?,
        c: file.resolve(c, "C", 1.0)?,
        amplitude: file.resolve(amplitude, "amplitude", 1.0)?,
    }))
}

fn dispatch(command: Command) -> Result<(Report, Common)> {
    match command {
        Command::CheckDec { common, n, kmax, samples, seed, flip_codifferential_sign } => {
            let file = load(&common)?;
            let defaults = dec::DecConfig::default();
            let cfg = dec::DecConfig {
                n: file.resolve(n, "n", defaults.n)?,
                kmax: file.resolve(kmax, "kmax", defaults.kmax)?,
                samples: file.resolve(samples, "samples", defaults.samples)?,
                seed: file.resolve(seed, "seed", defaults.seed)?,
                flip_codifferential_sign,
            };
            Ok((cmd_check_dec(&cfg)?, common))
        }
        Command::Verify { common, field, manifest, a, b, c, amplitude, lemma, n, dt, t_end, tol, perturb_density } => {
            let file = load(&common)?;
            let lemma: Lemma = file
                .resolve_opt(lemma, "lemma")?
                .ok_or_else(|| crate::Error::Precondition("--lemma is required".into()))?
                .parse()?;
            let cfg = VerifyConfig {
                field: field_choice(&file, field, [a, b, c], amplitude)?,
                manifest: file.resolve_opt(manifest, "manifest")?,
                lemma,
                n: file.resolve(n, "n", 32)?,
                dt: file.resolve(dt, "dt", 1.0 / 64.0)?,
                t_end: file.resolve(t_end, "t-end", 1.0)?,
                tol: file.resolve(tol, "tol", crate::hrv::DEFAULT_TOLERANCE)?,
                perturb_density: perturb_density || file.get("perturb-density")?.unwrap_or(false),
            };
            Ok((cmd_verify(&cfg)?, common))
        }
        Command::Gaussian { common, n_max } => {
            let file = load(&common)?;
            Ok((cmd_gaussian(file.resolve(n_max, "n-max", 10)?)?, common))
        }
        Command::Homotopy { common, f0, f1, samples, tol } => {
            let file = load(&common)?;
            let missing = |k: &str| crate::Error::Precondition(format!("--{k} is required"));
            let cfg = HomotopyConfig {
                f0: file.resolve_opt(f0, "f0")?.ok_or_else(|| missing("f0"))?,
                f1: file.resolve_opt(f1, "f1")?.ok_or_else(|| missing("f1"))?,
                samples: file.resolve(samples, "samples", 11)?,
                tol: file.resolve(tol, "tol", crate::hrv::DEFAULT_TOLERANCE)?,
            };
            Ok((cmd_homotopy(&cfg)?, common))
        }
        Command::Export { common, field, a, b, c, amplitude, n, dt, t_end, dir } => {
            let file = load(&common)?;
            let cfg = ExportConfig {
                field: field_choice(&file, field, [a, b, c], amplitude)?
                    .ok_or_else(|| crate::Error::Precondition("--field is required".into()))?,
                n: file.resolve(n, "n", 32)?,
                dt: file.resolve(dt, "dt", 1.0 / 64.0)?,
                t_end: file.resolve(t_end, "t-end", 1.0)?,
                dir,
            };
            Ok((cmd_export(&cfg)?, common))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(cli.command) {
        Ok((mut report, common)) => {
            if common.omit_timings {
                report.timings = None;
            }
            if let Err(e) = report.write(common.out.as_deref()) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            if report.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
