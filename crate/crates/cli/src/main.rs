//! `pdiv`: rate timelines, region maps and verification sweeps as CSV.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pdiv_core::divisibility::{classify_timeline, linspace, DEFAULT_TOL};
use pdiv_core::jaynes_cummings::DEFAULT_SERIES_TOL;
use pdiv_core::sweep::{region_map, run_equivalence_sweep, run_trace_norm_oracle};
use pdiv_core::table::{read_tabulated, write_region, write_timeline};
use pdiv_core::{EternalNm, JCParams, JaynesCummings, LossyCavity, RateModel};

use config::FileConfig;

#[derive(Parser)]
#[command(version, about = "Divisibility classification of two-level open-system dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rates and CP/P/BLP flags on a time grid.
    Timeline(TimelineArgs),
    /// Classification of the (Gamma, gamma_plus) plane at fixed gamma_minus.
    Region(RegionArgs),
    /// Monte Carlo cross-check of the P-divisibility criteria.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// TOML file with keys named like the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelName {
    EternalNm,
    LossyCavity,
    Jc,
    Tabulated,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    Cold,
    Hot,
    Weak,
}

#[derive(Args)]
struct TimelineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    /// Jaynes-Cummings parameter set to start from (default cold).
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, allow_negative_numbers = true)]
    omega_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta_b: Option<f64>,
    #[arg(long)]
    series_tol: Option<f64>,
    /// Lossy-cavity decay rate (constant).
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Lossy-cavity Lamb shift S (constant); omega = S/2.
    #[arg(long, allow_negative_numbers = true)]
    s_shift: Option<f64>,
    /// Timeline CSV to interpolate for `--model tabulated`.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Integrator step; validated but not used by the timeline columns.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_negative_numbers = true)]
    gamma_minus: Option<f64>,
    /// Gamma axis as `LO,HI`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    decoherence_range: Option<Vec<f64>>,
    /// gamma_plus axis as `LO,HI`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma_plus_range: Option<Vec<f64>>,
    /// Cells per axis.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Offset added to the Kossakowski minimum (self-test).
    #[arg(long, allow_negative_numbers = true)]
    perturb: Option<f64>,
    /// Also run the sampled trace-norm oracle with this many operators per rate sample.
    #[arg(long)]
    oracle_ops: Option<usize>,
}

/// Invalid flag or config values; reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn load_config(common: &Common) -> anyhow::Result<FileConfig> {
    FileConfig::load(common.config.as_deref()).map_err(|e| usage(format!("{e:#}")))
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn check_tol(tol: f64) -> anyhow::Result<f64> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(usage(format!("--tol must be a non-negative number, got {tol}")))
    }
}

fn jc_params(a: &TimelineArgs, c: &FileConfig) -> anyhow::Result<JCParams> {
    let preset = match a.preset {
        Some(p) => p,
        None => match c.preset.as_deref() {
            Some(s) => Preset::from_str(s, false).map_err(|_| usage(format!("unknown preset {s:?}")))?,
            None => Preset::Cold,
        },
    };
    let base = match preset {
        Preset::Cold => JCParams::cold_mode(),
        Preset::Hot => JCParams::hot_mode(),
        Preset::Weak => JCParams::weak_coupling(),
    };
    let p = JCParams {
        omega_b: pick(a.omega_b, c.omega_b, base.omega_b),
        delta: pick(a.delta, c.delta, base.delta),
        g: pick(a.g, c.g, base.g),
        beta_b: pick(a.beta_b, c.beta_b, base.beta_b),
        series_tol: pick(a.series_tol, c.series_tol, DEFAULT_SERIES_TOL),
        ..base
    };
    p.validate().map_err(|e| usage(e.to_string()))?;
    Ok(p)
}

/// Default horizon per preset, long enough to show several sign changes.
fn jc_default_t_max(p: &JCParams) -> f64 {
    if p.g > 0.0 {
        (2.0 / p.g).max(20.0)
    } else {
        20.0
    }
}

fn run_timeline(a: TimelineArgs) -> anyhow::Result<()> {
    let c = load_config(&a.common)?;
    let model = match a.model {
        Some(m) => m,
        None => match c.model.as_deref() {
            Some(s) => ModelName::from_str(s, false).map_err(|_| usage(format!("unknown model {s:?}")))?,
            None => return Err(usage("--model is required")),
        },
    };
    let points = pick(a.points, c.points, 2001);
    if points < 2 {
        return Err(usage(format!("--points must be at least 2, got {points}")));
    }
    let tol = check_tol(pick(a.tol, c.tol, DEFAULT_TOL))?;
    let step = pick(a.step, c.step, 1e-3);
    if !(step > 0.0 && step.is_finite()) {
        return Err(usage(format!("--step must be positive, got {step}")));
    }
    let t_max_given = a.t_max.or(c.t_max);
    if let Some(t) = t_max_given {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage(format!("--t-max must be positive, got {t}")));
        }
    }

    let (boxed, preamble, t0, t_max): (Box<dyn RateModel>, String, f64, f64) = match model {
        ModelName::EternalNm => (
            Box::new(EternalNm),
            "t dimensionless\nmodel eternal-nm".into(),
            0.0,
            t_max_given.unwrap_or(10.0),
        ),
        ModelName::LossyCavity => {
            let gamma = pick(a.gamma, c.gamma, 1.0);
            let shift = pick(a.s_shift, c.s_shift, 0.0);
            if !(gamma.is_finite() && shift.is_finite()) {
                return Err(usage("--gamma and --s-shift must be finite"));
            }
            (
                Box::new(LossyCavity::constant(gamma, shift)),
                format!("t dimensionless\nmodel lossy-cavity gamma={gamma} s_shift={shift}"),
                0.0,
                t_max_given.unwrap_or(10.0),
            )
        }
        ModelName::Jc => {
            let p = jc_params(&a, &c)?;
            let jc = JaynesCummings::new(p).map_err(|e| usage(e.to_string()))?;
            (
                Box::new(jc),
                format!(
                    "t in units of 1/omega_A\nmodel jc omega_b={} delta={} g={} beta_b={} series_tol={}",
                    p.omega_b, p.delta, p.g, p.beta_b, p.series_tol
                ),
                0.0,
                t_max_given.unwrap_or_else(|| jc_default_t_max(&p)),
            )
        }
        ModelName::Tabulated => {
            let path = a
                .table
                .clone()
                .or(c.table.clone())
                .ok_or_else(|| usage("--table is required for --model tabulated"))?;
            let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
            let tab = read_tabulated(file).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let (lo, hi) = tab.domain();
            let t_max = t_max_given.unwrap_or(hi);
            if t_max > hi || t_max <= lo {
                return Err(usage(format!("--t-max {t_max} outside table range ({lo}, {hi}]")));
            }
            (
                Box::new(tab),
                format!("t in units of the input table\nmodel tabulated {}", path.display()),
                lo,
                t_max,
            )
        }
    };

    let grid = linspace(t0, t_max, points);
    let rows = classify_timeline(boxed.as_ref(), &grid, tol)?;
    let mut out = open_out(a.common.out.as_deref().or(c.out.as_deref()))?;
    write_timeline(&mut out, &preamble, &rows)?;
    out.flush()?;
    Ok(())
}

fn range(flag: Option<Vec<f64>>, file: Option<[f64; 2]>, default: [f64; 2], name: &str) -> anyhow::Result<(f64, f64)> {
    let r = match flag {
        Some(v) if v.len() == 2 => [v[0], v[1]],
        Some(v) => return Err(usage(format!("--{name} takes LO,HI, got {} values", v.len()))),
        None => file.unwrap_or(default),
    };
    if !(r[0].is_finite() && r[1].is_finite() && r[0] < r[1]) {
        return Err(usage(format!("--{name} needs finite LO < HI, got {},{}", r[0], r[1])));
    }
    Ok((r[0], r[1]))
}

fn run_region(a: RegionArgs) -> anyhow::Result<()> {
    let c = load_config(&a.common)?;
    let gm = pick(a.gamma_minus, c.gamma_minus, 0.0);
    if !gm.is_finite() {
        return Err(usage("--gamma-minus must be finite"));
    }
    let gr = range(a.decoherence_range, c.decoherence_range, [-0.5, 2.5], "decoherence-range")?;
    let gpr = range(a.gamma_plus_range, c.gamma_plus_range, [-0.5, 3.0], "gamma-plus-range")?;
    let res = pick(a.resolution, c.resolution, 400);
    if res < 2 {
        return Err(usage(format!("--resolution must be at least 2, got {res}")));
    }
    let tol = check_tol(pick(a.tol, c.tol, DEFAULT_TOL))?;
    let cells = region_map(gm, gr, gpr, (res, res), tol);
    let mut out = open_out(a.common.out.as_deref().or(c.out.as_deref()))?;
    write_region(&mut out, &format!("gamma_minus = {gm}"), &cells)?;
    out.flush()?;
    Ok(())
}

fn run_sweep(a: SweepArgs) -> anyhow::Result<()> {
    let c = load_config(&a.common)?;
    let n = pick(a.samples, c.samples, 100_000);
    if n == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let seed = pick(a.seed, c.seed, 0);
    let perturb = pick(a.perturb, c.perturb, 0.0);
    if !perturb.is_finite() {
        return Err(usage("--perturb must be finite"));
    }
    let r = run_equivalence_sweep(n, seed, perturb);
    let mut out = open_out(a.common.out.as_deref().or(c.out.as_deref()))?;
    writeln!(out, "samples = {}", r.samples)?;
    writeln!(out, "seed = {seed}")?;
    writeln!(out, "perturb = {perturb}")?;
    writeln!(out, "boundary_excluded = {}", r.boundary_excluded)?;
    writeln!(out, "disagreements = {}", r.disagreements)?;
    writeln!(out, "implication_violations = {}", r.implication_violations)?;
    writeln!(out, "closest_call = {}", r.closest_call)?;
    if let Some(w) = r.worst_disagreement {
        writeln!(
            out,
            "worst_disagreement = gamma_plus {} gamma_minus {} Gamma {}: relaxation {} kossakowski {} radius {}",
            w.rates.gamma_plus, w.rates.gamma_minus, w.rates.decoherence, w.relaxation, w.kossakowski, w.radius
        )?;
    }
    if let Some(ops) = a.oracle_ops.or(c.oracle_ops) {
        if ops == 0 {
            return Err(usage("--oracle-ops must be at least 1"));
        }
        let o = run_trace_norm_oracle(n, ops, seed);
        writeln!(out, "oracle_operators = {ops}")?;
        writeln!(out, "oracle_boundary_excluded = {}", o.boundary_excluded)?;
        writeln!(out, "oracle_disagreements = {}", o.disagreements)?;
        writeln!(out, "oracle_worst_passing_margin = {}", o.worst_passing_margin)?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Timeline(a) => run_timeline(a),
        Command::Region(a) => run_region(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
