//! `secrelay` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::af_secrecy::{SecrecyResult, af_secrecy_capacity};
use crate::channel_model::{ChannelRealization, DerivedParams, PowerBudget, Strategy, db_to_linear, derive_params};
use crate::converse_bound::genie_upper_bound;
use crate::df_secrecy::df_secrecy_capacity;
use crate::fading_sim::ergodic_sweep;
use crate::fractional_solver::RatioQuadraticProblem;
use crate::search::DEFAULT_GRID_POINTS;
use crate::verify::{self, DEFAULT_DRAWS, VerifyConfig};

pub use config::{MonteCarloSettings, parse_config};
pub use output::{fmt_f64, write_montecarlo_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

/// Seed used when neither `--seed` nor `SECRELAY_SEED` is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "secrelay", version, about = "Secrecy capacity of AF/DF relay wiretap channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity, optimal relay gain and consumed power for one channel.
    Compute(ComputeArgs),
    /// Capacity versus relay power for a fixed channel, as CSV.
    Sweep(SweepArgs),
    /// Ergodic capacity and relay power over Rayleigh fading, as CSV.
    Montecarlo(MonteCarloArgs),
    /// Randomized oracle and invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Af,
    Df,
    Both,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Af => vec![Strategy::AmplifyForward],
            StrategyArg::Df => vec![Strategy::DecodeForward],
            StrategyArg::Both => vec![Strategy::AmplifyForward, Strategy::DecodeForward],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Csv,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Source-relay gain as `re,im` or `re`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    hr: Option<Complex64>,
    /// Relay-destination gain as `re,im` or `re`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    hd: Option<Complex64>,
    /// Relay-eavesdropper gain as `re,im` or `re`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    he: Option<Complex64>,
    /// Source power (watts, or dBW with --db).
    #[arg(long, allow_hyphen_values = true)]
    ps: Option<f64>,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[arg(long, value_enum, default_value = "af")]
    strategy: StrategyArg,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Relay peak power (watts, or dBW with --db).
    #[arg(long, allow_hyphen_values = true)]
    pr: f64,
    /// Read power flags in dBW.
    #[arg(long)]
    db: bool,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "af")]
    strategy: StrategyArg,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pr_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pr_max: f64,
    #[arg(long, allow_hyphen_values = true)]
    pr_step: f64,
    /// Interpret the P_r range and step in dBW; the CSV still reports watts.
    #[arg(long)]
    db: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MonteCarloArgs {
    /// key=value configuration file; flags given explicitly override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    var_hr: Option<f64>,
    #[arg(long)]
    var_he: Option<f64>,
    /// One or more relay-destination variances, comma separated.
    #[arg(long, value_delimiter = ',')]
    var_hd: Option<Vec<f64>>,
    /// Source power in dBW.
    #[arg(long, allow_hyphen_values = true)]
    ps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pr_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pr_max: Option<f64>,
    #[arg(long)]
    pr_points: Option<usize>,
    /// Space the P_r grid uniformly in dBW between --pr-min and --pr-max (given in dBW).
    #[arg(long)]
    db: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    draws: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid_points: usize,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// Parses `re,im` or a bare real.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("'{p}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re or re,im; got '{s}'")),
    }
}

#[derive(Debug)]
struct UsageError(String);

type CliResult<T> = Result<T, UsageError>;

impl From<crate::Error> for UsageError {
    fn from(e: crate::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        UsageError(format!("i/o error: {e}"))
    }
}

/// Resolved channel: the channel gains (actual or canonical) plus derived params.
struct ResolvedChannel {
    channel: ChannelRealization,
    params: DerivedParams,
    p_s: f64,
}

fn resolve_channel(args: &ChannelArgs, db: bool) -> CliResult<ResolvedChannel> {
    let direct = [args.alpha, args.beta, args.mu];
    let gains = [args.hr, args.hd, args.he];
    let any_direct = direct.iter().any(Option::is_some);
    let any_gain = gains.iter().any(Option::is_some) || args.ps.is_some();
    match (any_direct, any_gain) {
        (true, true) => Err(UsageError(
            "give either --alpha/--beta/--mu or --hr/--hd/--he/--ps, not both".into(),
        )),
        (false, false) => Err(UsageError(
            "channel missing: give --alpha --beta --mu or --hr --hd --he --ps".into(),
        )),
        (true, false) => {
            let [Some(alpha), Some(beta), Some(mu)] = direct else {
                return Err(UsageError("--alpha, --beta and --mu must all be given".into()));
            };
            let params = DerivedParams::new(alpha, beta, mu)?;
            // Canonical gains with the same alpha, beta, mu: h_r = 1, P_s = mu - 1.
            let channel = ChannelRealization::real(1.0, alpha.sqrt(), beta.sqrt())?;
            Ok(ResolvedChannel { channel, params, p_s: mu - 1.0 })
        }
        (false, true) => {
            let (Some(h_r), Some(h_d), Some(h_e), Some(ps)) = (args.hr, args.hd, args.he, args.ps) else {
                return Err(UsageError("--hr, --hd, --he and --ps must all be given".into()));
            };
            let p_s = if db { db_to_linear(ps) } else { ps };
            let channel = ChannelRealization::new(h_r, h_d, h_e)?;
            let params = derive_params(&channel, &PowerBudget::new(p_s, 0.0)?)?;
            Ok(ResolvedChannel { channel, params, p_s })
        }
    }
}

fn capacity(strategy: Strategy, params: &DerivedParams, pb: &PowerBudget) -> SecrecyResult {
    match strategy {
        Strategy::AmplifyForward => af_secrecy_capacity(params, pb),
        Strategy::DecodeForward => df_secrecy_capacity(params, pb),
    }
}

fn open_output<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| UsageError(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(stdout),
    })
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(UsageError(format!("--{name} must be finite")))
    }
}

fn cmd_compute(args: ComputeArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let strategy = match args.strategy {
        StrategyArg::Af => Strategy::AmplifyForward,
        StrategyArg::Df => Strategy::DecodeForward,
        StrategyArg::Both => return Err(UsageError("compute takes --strategy af or df".into())),
    };
    let resolved = resolve_channel(&args.channel, args.db)?;
    let pr = finite("pr", args.pr)?;
    let p_r = if args.db { db_to_linear(pr) } else { pr };
    let pb = PowerBudget::new(resolved.p_s, p_r)?;
    let result = capacity(strategy, &resolved.params, &pb);

    let (branch, bound) = match strategy {
        Strategy::AmplifyForward => {
            let sol = RatioQuadraticProblem::for_af(&resolved.params, &pb).lambda_hat_closed_form()?;
            let bound = genie_upper_bound(&resolved.channel, &resolved.params, &pb)?;
            (Some(sol.branch), Some(bound.bound_value))
        }
        Strategy::DecodeForward => (None, None),
    };

    let mut out = open_output(&args.out, stdout)?;
    let p = &resolved.params;
    let fields: Vec<(&str, String)> = vec![
        ("strategy", strategy.label().to_string()),
        ("alpha", fmt_f64(p.alpha)),
        ("beta", fmt_f64(p.beta)),
        ("mu", fmt_f64(p.mu)),
        ("p_r", fmt_f64(p_r)),
        ("capacity", fmt_f64(result.capacity)),
        ("x_hat", fmt_f64(result.x_hat)),
        ("consumed_power", fmt_f64(result.consumed_power)),
        ("solver_branch", branch.map(|b| b.label().to_string()).unwrap_or_default()),
        ("genie_bound", bound.map(fmt_f64).unwrap_or_default()),
    ];
    match args.format {
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            write!(out, "{}\n{}\n", header.join(","), row.join(","))?;
        }
        Format::Pretty => {
            for (k, v) in fields.iter().filter(|(_, v)| !v.is_empty()) {
                writeln!(out, "{k:<16}{v}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn sweep_grid(lo: f64, hi: f64, step: f64) -> CliResult<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(UsageError(format!("--pr-step must be positive, got {step}")));
    }
    if !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(UsageError(format!("need finite --pr-min <= --pr-max, got {lo} and {hi}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| lo + step * k as f64).collect())
}

fn cmd_sweep(args: SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let resolved = resolve_channel(&args.channel, args.db)?;
    let grid = sweep_grid(args.pr_min, args.pr_max, args.pr_step)?;
    let grid: Vec<f64> = if args.db { grid.into_iter().map(db_to_linear).collect() } else { grid };
    if grid.iter().any(|p| *p < 0.0) {
        return Err(UsageError("relay power must be nonnegative".into()));
    }
    let strategies = args.strategy.strategies();
    let mut out = open_output(&args.out, stdout)?;
    writeln!(out, "strategy,p_r,capacity,x_hat,consumed_power")?;
    for &p_r in &grid {
        let pb = PowerBudget::new(resolved.p_s, p_r)?;
        for &s in &strategies {
            let r = capacity(s, &resolved.params, &pb);
            writeln!(
                out,
                "{},{},{},{},{}",
                s.label(),
                fmt_f64(p_r),
                fmt_f64(r.capacity),
                fmt_f64(r.x_hat),
                fmt_f64(r.consumed_power)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var("SECRELAY_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| UsageError(format!("SECRELAY_SEED='{s}' is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn cmd_montecarlo(args: MonteCarloArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut settings = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => MonteCarloSettings::default(),
    };
    if settings.seed.is_none() {
        settings.seed = env_seed()?;
    }
    macro_rules! take {
        ($field:ident) => {
            if let Some(v) = args.$field.clone() {
                settings.$field = v;
            }
        };
    }
    take!(var_hr);
    take!(var_he);
    take!(var_hd);
    take!(pr_min);
    take!(pr_max);
    take!(pr_points);
    if let Some(v) = args.ps {
        settings.p_s_dbw = v;
    }
    if let Some(v) = args.samples {
        settings.n_samples = v;
    }
    if let Some(v) = args.seed {
        settings.seed = Some(v);
    }
    if let Some(v) = &args.strategies {
        settings.strategies = v.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    }
    settings.db |= args.db;

    let configs = settings.ensembles()?;
    let mut rows = Vec::new();
    for cfg in &configs {
        rows.push((cfg.var_hd, ergodic_sweep(cfg)?));
    }
    let mut out = open_output(&args.out, stdout)?;
    write_montecarlo_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    if args.draws == 0 {
        return Err(UsageError("--draws must be at least 1".into()));
    }
    if args.grid_points < 2 {
        return Err(UsageError("--grid-points must be at least 2".into()));
    }
    let seed = match args.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let cfg = VerifyConfig { draws: args.draws, seed, grid_points: args.grid_points, inject_fault: args.inject_fault };
    writeln!(stdout, "seed {seed}, {} draws, {} grid points", cfg.draws, cfg.grid_points)?;
    let reports = verify::run_all(&cfg)?;
    let mut all = true;
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(stdout, "{verdict} {} ({} cases)", r.name, r.cases)?;
        for m in &r.metrics {
            let mark = if m.passed() { "ok " } else { "BAD" };
            writeln!(stdout, "  {mark} {:<36} worst {:.3e}  tol {:.0e}", m.name, m.worst, m.tolerance)?;
        }
        all &= r.passed();
    }
    writeln!(stdout, "{}", if all { "all suites passed" } else { "verification FAILED" })?;
    Ok(all)
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{rendered}") } else { write!(stdout, "{rendered}") };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Compute(a) => cmd_compute(a, stdout).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a, stdout).map(|_| true),
        Command::Montecarlo(a) => cmd_montecarlo(a, stdout).map(|_| true),
        Command::Verify(a) => cmd_verify(a, stdout),
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFY_FAILED,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_flag_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("-1,2").unwrap(), Complex64::new(-1.0, 2.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn sweep_grid_includes_endpoint() {
        let g = sweep_grid(0.0, 2.0, 0.1).unwrap();
        assert_eq!(g.len(), 21);
        assert!((g[20] - 2.0).abs() < 1e-12);
        assert!(sweep_grid(0.0, 1.0, 0.0).is_err());
        assert!(sweep_grid(0.0, 1.0, -0.5).is_err());
        assert!(sweep_grid(2.0, 1.0, 0.5).is_err());
    }
}
