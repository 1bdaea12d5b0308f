//! Argument parsing and output emission.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, IntensityRequest, OracleSuite, WfKind};
use crate::config::{EntropyBaseSpec, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::record::{csv_string, sig9, sig9_opt};

#[derive(Debug, Parser)]
#[command(
    name = "bragg-ent",
    version,
    about = "Electron density matrices after elastic scattering on finite-mass lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build γ from a config and report purity, entropy, contrast and τ.
    Rho(RhoArgs),
    /// Decoherence times over masses × σ₀ × |q|.
    Tau(TauArgs),
    /// Real-space intensity I(r) along a line.
    Intensity(IntensityArgs),
    /// Convergence of the CM characteristic function to its Gaussian limit.
    Clt(CltArgs),
    /// Compare the quadrature oracle with the closed forms for Gaussian atoms.
    OracleCompare(OracleCompareArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct PhysicsOverrides {
    /// Overrides `entropy_base` in the config.
    #[arg(long, value_enum)]
    pub entropy_base: Option<EntropyBaseSpec>,
    /// Free-drift time in seconds; overrides `drift_time_s`.
    #[arg(long, allow_negative_numbers = true)]
    pub drift_time: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub physics: PhysicsOverrides,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TauArgs {
    /// The three benchmark scatterers at σ₀ = 3 pm, |q| = 10 nm⁻¹.
    #[arg(long, conflicts_with_all = ["masses", "sigma0s", "qs"])]
    pub paper: bool,
    /// Total masses in amu.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub masses: Option<Vec<f64>>,
    /// CM widths in pm.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub sigma0s: Option<Vec<f64>>,
    /// Momentum-transfer moduli in nm⁻¹.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub qs: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IntensityArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Start of the scan in nm.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r_min: f64,
    /// End of the scan in nm (default: one fringe period).
    #[arg(long, allow_negative_numbers = true)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 257)]
    pub samples: usize,
    /// Scan direction `x,y,z` (default: along q₁ - q₀).
    #[arg(long, value_delimiter = ',', num_args = 3, allow_negative_numbers = true)]
    pub direction: Option<Vec<f64>>,
    /// Also report the fringe contrast (two-beam configs only).
    #[arg(long)]
    pub contrast: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub drift_time: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CltArgs {
    #[arg(long, value_enum)]
    pub wf: WfKind,
    /// Atom counts.
    #[arg(long = "n", value_delimiter = ',', num_args = 1.., default_value = "1,2,4,8")]
    pub n: Vec<usize>,
    /// Fixed k·σ₀.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k_sigma: f64,
    /// Standard deviation of the single-atom density in pm.
    #[arg(long, default_value_t = 10.0)]
    pub sigma_pm: f64,
    #[arg(long, default_value_t = 8)]
    pub max_atoms: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleCompareArgs {
    /// Compare on this config's lattice and beams instead of the built-in chains.
    #[arg(long, conflicts_with_all = ["n", "sigma_pm", "spacing_nm", "g_per_nm"])]
    pub config: Option<PathBuf>,
    #[arg(long = "n", value_delimiter = ',', num_args = 1..)]
    pub n: Option<Vec<usize>>,
    /// Atomic σ in pm.
    #[arg(long)]
    pub sigma_pm: Option<f64>,
    #[arg(long)]
    pub spacing_nm: Option<f64>,
    /// |G| in nm⁻¹.
    #[arg(long)]
    pub g_per_nm: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json_string<T: serde::Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn load_with_overrides(path: &Path, physics: &PhysicsOverrides) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(b) = physics.entropy_base {
        cfg.entropy_base = Some(b);
    }
    if let Some(t) = physics.drift_time {
        cfg.drift_time_s = Some(t);
    }
    Ok(cfg)
}

/// Flag, then config, then the per-command default.
fn resolve_output(args: &OutputArgs, cfg: Option<&RunConfig>, default: Format) -> (Format, Option<PathBuf>) {
    let spec = cfg.and_then(|c| c.output.as_ref());
    let format = args.format.or(spec.and_then(|o| o.format)).unwrap_or(default);
    let path = args.out.clone().or(spec.and_then(|o| o.path.clone()));
    (format, path)
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Rho(a) => {
            let cfg = load_with_overrides(&a.config, &a.physics)?;
            let record = commands::rho(&cfg)?;
            let (format, path) = resolve_output(&a.output, Some(&cfg), Format::Json);
            let text = match format {
                Format::Json => record.to_json()?,
                Format::Csv => record.to_csv()?,
            };
            emit(path.as_deref(), &text)
        }
        Command::Tau(a) => {
            let rows = if a.paper {
                commands::tau_benchmarks()
            } else {
                match (&a.masses, &a.sigma0s, &a.qs) {
                    (Some(m), Some(s), Some(q)) => commands::tau_sweep(m, s, q)?,
                    _ => {
                        return Err(CliError::Config(
                            "tau needs --paper or all of --masses, --sigma0s and --qs".into(),
                        ))
                    }
                }
            };
            let (format, path) = resolve_output(&a.output, None, Format::Csv);
            let text = match format {
                Format::Json => json_string(&rows)?,
                Format::Csv => csv_string(
                    &["mass_amu", "sigma0_pm", "q_per_nm", "tau_s", "status"],
                    rows.iter().map(|r| {
                        [
                            sig9(r.mass_amu),
                            sig9(r.sigma0_pm),
                            sig9(r.q_per_nm),
                            sig9_opt(r.tau_s),
                            r.status.name().to_string(),
                        ]
                    }),
                )?,
            };
            emit(path.as_deref(), &text)
        }
        Command::Intensity(a) => {
            let physics = PhysicsOverrides { entropy_base: None, drift_time: a.drift_time };
            let cfg = load_with_overrides(&a.config, &physics)?;
            let req = IntensityRequest {
                r_min_nm: a.r_min,
                r_max_nm: a.r_max,
                samples: a.samples,
                direction: a.direction.map(|d| [d[0], d[1], d[2]]),
                contrast: a.contrast,
            };
            let profile = commands::intensity(&cfg, &req)?;
            let (format, path) = resolve_output(&a.output, Some(&cfg), Format::Csv);
            let text = match format {
                Format::Json => json_string(&profile)?,
                Format::Csv => {
                    if let Some(c) = profile.contrast {
                        eprintln!("contrast: {}", sig9(c));
                    }
                    csv_string(
                        &["r_nm", "intensity"],
                        profile.r_nm.iter().zip(&profile.intensity).map(|(r, i)| [sig9(*r), sig9(*i)]),
                    )?
                }
            };
            emit(path.as_deref(), &text)
        }
        Command::Clt(a) => {
            let rows = commands::clt(a.wf, &a.n, a.k_sigma, a.sigma_pm, a.max_atoms)?;
            if a.wf == WfKind::Gaussian {
                eprintln!("note: Gaussian atoms have an exactly Gaussian CM state; deviations are quadrature noise");
            }
            let (format, path) = resolve_output(&a.output, None, Format::Csv);
            let text = match format {
                Format::Json => json_string(&rows)?,
                Format::Csv => csv_string(
                    &["n", "k_sigma0", "deviation"],
                    rows.iter().map(|r| [r.n.to_string(), sig9(r.k_sigma0), sig9(r.deviation)]),
                )?,
            };
            emit(path.as_deref(), &text)
        }
        Command::OracleCompare(a) => {
            let (rows, cfg) = match &a.config {
                Some(path) => {
                    let cfg = RunConfig::load(path)?;
                    (commands::oracle_compare_config(&cfg)?, Some(cfg))
                }
                None => {
                    let suite = OracleSuite {
                        n_values: a.n.clone().unwrap_or_else(|| vec![1, 2, 4]),
                        sigma_pm: a.sigma_pm.unwrap_or(12.0),
                        spacing_nm: a.spacing_nm.unwrap_or(0.2),
                        g_per_nm: a.g_per_nm.unwrap_or(10.0),
                    };
                    (commands::oracle_compare_suite(&suite)?, None)
                }
            };
            let max = |f: fn(&commands::OracleComparison) -> f64| rows.iter().map(f).fold(0.0, f64::max);
            eprintln!(
                "max deviation: {} from the asymptotic form, {} from the exact Gaussian product state",
                sig9(max(|r| r.vs_asymptotic)),
                sig9(max(|r| r.vs_exact_gaussian))
            );
            let (format, path) = resolve_output(&a.output, cfg.as_ref(), Format::Csv);
            let text = match format {
                Format::Json => json_string(&rows)?,
                Format::Csv => csv_string(
                    &["n", "transfers_per_nm", "vs_asymptotic", "vs_exact_gaussian"],
                    rows.iter().map(|r| {
                        [
                            r.n.to_string(),
                            r.transfers_per_nm.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(";"),
                            sig9(r.vs_asymptotic),
                            sig9(r.vs_exact_gaussian),
                        ]
                    }),
                )?,
            };
            emit(path.as_deref(), &text)
        }
    }
}
