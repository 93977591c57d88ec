//! Command-line front end: scenario configuration with flag / environment /
//! config-file precedence, curve and sweep generation, analytic-vs-MC
//! comparison, and CSV/JSON emission.
//!
//! Units at the boundary are degrees and kilometers; everything internal is
//! radians. Numeric CSV output uses a fixed 12-significant-digit scientific
//! format with LF line endings, so identical configs produce byte-identical
//! files.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distribution::{
    analytic_cdf_curve, contact_angle_domain, domain_grid, Convention, SplitSolver,
};
use crate::error::Error;
use crate::geometry::{GeometryConfig, RelayScenario};
use crate::montecarlo::{empirical_cdf, slice_area_estimate, McConfig};
use crate::outage::{
    min_hops_for_outage_target, multi_relay_outage, single_relay_outage, DEFAULT_MAX_HOPS,
};

/// Environment variable prefix for config overrides, e.g.
/// `LEO_RELAY_DISTANCE_KM=2500`.
pub const ENV_PREFIX: &str = "LEO_RELAY_";

/// Sup-gap level above which `compare` flags the analytic/empirical
/// discrepancy in its summary metadata.
pub const COMPARE_GAP_THRESHOLD: f64 = 0.03;

#[derive(Parser, Debug)]
#[command(
    name = "leo-relay",
    version,
    about = "Conditional contact angle distributions and relay outage analysis \
             for LEO satellite-relayed links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analytic CDF of the conditional contact angle over its domain.
    Cdf(CdfCmd),
    /// Single-relay outage probability over a distance sweep.
    Outage(OutageCmd),
    /// Multi-relay bent-pipe outage over a hop-count sweep.
    Multihop(MultihopCmd),
    /// Empirical CDF from the seeded Monte-Carlo simulator.
    Simulate(SimulateCmd),
    /// Analytic and empirical CDFs side by side with gap summary.
    Compare(CompareCmd),
    /// Cap-slice area, analytic and optionally Monte-Carlo estimated.
    Area(AreaCmd),
}

/// Scenario, Monte-Carlo and output options shared by all subcommands.
/// Precedence: flags override environment variables override config-file
/// values override the built-in defaults.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Flat `key = value` config file mirroring the flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub earth_radius_km: Option<f64>,
    /// Constellation altitude; sugar for shell radius = earth radius + h.
    #[arg(long)]
    pub altitude_km: Option<f64>,
    /// Orbital-shell radius; mutually exclusive with --altitude-km.
    #[arg(long)]
    pub shell_radius_km: Option<f64>,
    /// Transmitter cap maximum dome angle, degrees.
    #[arg(long)]
    pub theta_m1_deg: Option<f64>,
    /// Receiver cap maximum dome angle, degrees.
    #[arg(long)]
    pub theta_m2_deg: Option<f64>,
    /// Endpoint chord distance, km.
    #[arg(long)]
    pub distance_km: Option<f64>,
    #[arg(long)]
    pub n_sat: Option<u32>,
    #[arg(long)]
    pub grid_size: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub chunk_size: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct CdfCmd {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Default)]
pub struct OutageCmd {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 500.0)]
    pub d_min_km: f64,
    #[arg(long, default_value_t = 8000.0)]
    pub d_max_km: f64,
    #[arg(long, default_value_t = 40)]
    pub d_steps: usize,
}

#[derive(Args, Debug, Default)]
pub struct MultihopCmd {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest hop count in the emitted sweep.
    #[arg(long, default_value_t = 16)]
    pub hops: u32,
    /// Target outage: also report the smallest hop count achieving it.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Search cap for the epsilon mode.
    #[arg(long, default_value_t = DEFAULT_MAX_HOPS)]
    pub max_hops: u32,
}

#[derive(Args, Debug, Default)]
pub struct SimulateCmd {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Default)]
pub struct CompareCmd {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Default)]
pub struct AreaCmd {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Cap maximum dome angle, degrees.
    #[arg(long)]
    pub theta_d_deg: f64,
    /// Slice dome angle, degrees.
    #[arg(long)]
    pub theta_o_deg: f64,
    /// Sphere radius; defaults to the resolved shell radius.
    #[arg(long)]
    pub radius_km: Option<f64>,
    /// Also run the hit-count Monte-Carlo estimate and report the gap.
    #[arg(long)]
    pub with_mc: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConventionArg {
    #[default]
    Defective,
    Normalized,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverArg {
    #[default]
    ClosedForm,
    RootSolve,
}

/// A failed command, classified by exit code: 2 for user or configuration
/// errors, 3 for internal invariant failures.
#[derive(Debug)]
pub enum CliError {
    User(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::User(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::User(msg) | CliError::Internal(msg) => msg,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Invariant(_) => CliError::Internal(err.to_string()),
            _ => CliError::User(err.to_string()),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: RelayScenario,
    pub grid_size: usize,
    pub mc: McConfig,
    pub format: FormatArg,
    pub convention: Convention,
    pub solver: SplitSolver,
    pub output: Option<PathBuf>,
}

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::User(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::User(format!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Looks a key up in the environment (prefixed, uppercased) and then the
/// config file.
fn lookup(file: &HashMap<String, String>, key: &str) -> Option<String> {
    std::env::var(format!("{ENV_PREFIX}{}", key.to_uppercase()))
        .ok()
        .or_else(|| file.get(key).cloned())
}

fn resolve<T: FromStr + Copy>(
    flag: Option<T>,
    key: &str,
    file: &HashMap<String, String>,
    default: T,
) -> Result<T, CliError> {
    if let Some(value) = flag {
        return Ok(value);
    }
    match lookup(file, key) {
        Some(raw) => raw
            .parse()
            .map_err(|_| CliError::User(format!("cannot parse `{raw}` for {key}"))),
        None => Ok(default),
    }
}

impl CommonArgs {
    /// Resolves the full run configuration. Defaults are the paper's
    /// baseline: 550 km altitude, 45 degree dome angles, d = 3000 km,
    /// 3000 satellites.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };

        let earth = resolve(self.earth_radius_km, "earth_radius_km", &file, 6371.0)?;
        let altitude_given =
            self.altitude_km.is_some() || lookup(&file, "altitude_km").is_some();
        let shell_given =
            self.shell_radius_km.is_some() || lookup(&file, "shell_radius_km").is_some();
        if altitude_given && shell_given {
            return Err(CliError::User(
                "give exactly one of --altitude-km and --shell-radius-km".into(),
            ));
        }
        let shell = if shell_given {
            resolve(self.shell_radius_km, "shell_radius_km", &file, 0.0)?
        } else {
            earth + resolve(self.altitude_km, "altitude_km", &file, 550.0)?
        };
        let geometry = GeometryConfig::new(earth, shell)?;

        let theta_m1_deg = resolve(self.theta_m1_deg, "theta_m1_deg", &file, 45.0)?;
        let theta_m2_deg = resolve(self.theta_m2_deg, "theta_m2_deg", &file, 45.0)?;
        let distance = resolve(self.distance_km, "distance_km", &file, 3000.0)?;
        let n_sat = resolve(self.n_sat, "n_sat", &file, 3000)?;
        let scenario = RelayScenario::new(
            geometry,
            theta_m1_deg.to_radians(),
            theta_m2_deg.to_radians(),
            distance,
            n_sat,
        )?;

        let grid_size = resolve(self.grid_size, "grid_size", &file, 100)?;
        if grid_size < 2 {
            return Err(CliError::User(format!(
                "grid_size must be at least 2, got {grid_size}"
            )));
        }
        let mc = McConfig {
            trials: resolve(self.trials, "trials", &file, 200_000)?,
            seed: resolve(self.seed, "seed", &file, 42)?,
            chunk_size: resolve(self.chunk_size, "chunk_size", &file, 4096)?,
        };
        mc.validate()?;

        let format = match self.format {
            Some(f) => f,
            None => match lookup(&file, "format").as_deref() {
                Some("csv") => FormatArg::Csv,
                Some("json") => FormatArg::Json,
                Some(other) => {
                    return Err(CliError::User(format!("unknown format `{other}`")));
                }
                None => FormatArg::Csv,
            },
        };
        let convention = match self.convention {
            Some(ConventionArg::Defective) => Convention::Defective,
            Some(ConventionArg::Normalized) => Convention::Normalized,
            None => match lookup(&file, "convention").as_deref() {
                Some("defective") => Convention::Defective,
                Some("normalized") => Convention::Normalized,
                Some(other) => {
                    return Err(CliError::User(format!("unknown convention `{other}`")));
                }
                None => Convention::Defective,
            },
        };
        let solver = match self.solver {
            Some(SolverArg::ClosedForm) => SplitSolver::ClosedForm,
            Some(SolverArg::RootSolve) => SplitSolver::RootSolve,
            None => match lookup(&file, "solver").as_deref() {
                Some("closed-form") => SplitSolver::ClosedForm,
                Some("root-solve") => SplitSolver::RootSolve,
                Some(other) => {
                    return Err(CliError::User(format!("unknown solver `{other}`")));
                }
                None => SplitSolver::ClosedForm,
            },
        };

        Ok(RunConfig {
            scenario,
            grid_size,
            mc,
            format,
            convention,
            solver,
            output: self.output.clone(),
        })
    }
}

/// Twelve significant digits, locale-independent.
pub fn fmt_sig(x: f64) -> String {
    format!("{:.11e}", x)
}

/// A rendered result: metadata, column names, numeric rows.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub format: FormatArg,
    pub output: Option<PathBuf>,
}

impl Artifact {
    pub fn render(&self) -> String {
        match self.format {
            FormatArg::Csv => self.render_csv(),
            FormatArg::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.meta {
            out.push_str(&format!("# {key} = {value}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let data: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .zip(row)
                    .map(|(&col, &x)| (col.to_string(), serde_json::json!(x)))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            })
            .collect();
        let doc = serde_json::json!({ "meta": meta, "data": data });
        let mut text = serde_json::to_string_pretty(&doc).expect("json serialization");
        text.push('\n');
        text
    }
}

fn base_meta(config: &RunConfig) -> Vec<(String, String)> {
    let s = &config.scenario;
    vec![
        ("tool".into(), format!("leo-relay {}", env!("CARGO_PKG_VERSION"))),
        ("earth_radius_km".into(), fmt_sig(s.geometry.earth_radius_km)),
        ("shell_radius_km".into(), fmt_sig(s.geometry.shell_radius_km)),
        ("altitude_km".into(), fmt_sig(s.geometry.altitude_km())),
        ("theta_m1_deg".into(), fmt_sig(s.theta_m1_rad.to_degrees())),
        ("theta_m2_deg".into(), fmt_sig(s.theta_m2_rad.to_degrees())),
        ("distance_km".into(), fmt_sig(s.distance_km)),
        ("n_sat".into(), s.n_sat.to_string()),
        (
            "convention".into(),
            match config.convention {
                Convention::Defective => "defective".into(),
                Convention::Normalized => "normalized".into(),
            },
        ),
        (
            "solver".into(),
            match config.solver {
                SplitSolver::ClosedForm => "closed-form".into(),
                SplitSolver::RootSolve => "root-solve".into(),
            },
        ),
    ]
}

fn mc_meta(mc: &McConfig) -> Vec<(String, String)> {
    vec![
        ("trials".into(), mc.trials.to_string()),
        ("seed".into(), mc.seed.to_string()),
        ("chunk_size".into(), mc.chunk_size.to_string()),
    ]
}

pub fn cmd_cdf(cmd: &CdfCmd) -> Result<Artifact, CliError> {
    let config = cmd.common.resolve()?;
    let curve = analytic_cdf_curve(
        &config.scenario,
        config.grid_size,
        config.convention,
        config.solver,
    )?;
    curve.validate()?;
    let rows = curve
        .points
        .iter()
        .map(|&(theta, p)| vec![theta, theta.to_degrees(), p])
        .collect();
    Ok(Artifact {
        meta: base_meta(&config),
        columns: vec!["theta_rad", "theta_deg", "cdf"],
        rows,
        format: config.format,
        output: config.output,
    })
}

pub fn cmd_outage(cmd: &OutageCmd) -> Result<Artifact, CliError> {
    let config = cmd.common.resolve()?;
    if cmd.d_steps < 2 || cmd.d_max_km <= cmd.d_min_km {
        return Err(CliError::User(
            "need d_steps >= 2 and d_max_km > d_min_km".into(),
        ));
    }
    let mut rows = Vec::with_capacity(cmd.d_steps);
    let mut monotone = true;
    let mut prev = -1.0;
    for i in 0..cmd.d_steps {
        let d = cmd.d_min_km
            + (cmd.d_max_km - cmd.d_min_km) * i as f64 / (cmd.d_steps - 1) as f64;
        let scenario = RelayScenario {
            distance_km: d,
            ..config.scenario
        };
        let out = crate::outage::single_relay_outage_with(&scenario, config.solver)?;
        if out.probability + 1e-12 < prev {
            monotone = false;
        }
        prev = out.probability;
        rows.push(vec![d, out.probability]);
    }
    let mut meta = base_meta(&config);
    meta.push(("monotone_nondecreasing_in_d".into(), monotone.to_string()));
    Ok(Artifact {
        meta,
        columns: vec!["d_km", "p_outage"],
        rows,
        format: config.format,
        output: config.output,
    })
}

pub fn cmd_multihop(cmd: &MultihopCmd) -> Result<Artifact, CliError> {
    let config = cmd.common.resolve()?;
    if cmd.hops == 0 {
        return Err(CliError::User("hops must be at least 1".into()));
    }
    let sweep_top = match cmd.epsilon {
        Some(_) => cmd.max_hops,
        None => cmd.hops,
    };
    let mut rows = Vec::new();
    for n_hops in 1..=sweep_top {
        let out = multi_relay_outage(&config.scenario, n_hops)?;
        rows.push(vec![n_hops as f64, out.probability]);
    }
    let mut meta = base_meta(&config);
    if let Some(epsilon) = cmd.epsilon {
        let found = min_hops_for_outage_target(&config.scenario, epsilon, cmd.max_hops)?;
        meta.push(("epsilon".into(), fmt_sig(epsilon)));
        meta.push((
            "min_hops".into(),
            found.map_or("none".into(), |n| n.to_string()),
        ));
    }
    let single = single_relay_outage(&config.scenario)?;
    meta.push(("single_relay_outage".into(), fmt_sig(single.probability)));
    Ok(Artifact {
        meta,
        columns: vec!["n_hops", "p_outage"],
        rows,
        format: config.format,
        output: config.output,
    })
}

pub fn cmd_simulate(cmd: &SimulateCmd) -> Result<Artifact, CliError> {
    let config = cmd.common.resolve()?;
    let domain = contact_angle_domain(&config.scenario)?;
    let grid = domain_grid(&domain, config.grid_size);
    let curve = empirical_cdf(&config.scenario, &config.mc, &grid, config.convention)?;
    curve.validate()?;
    let rows = curve
        .points
        .iter()
        .map(|&(theta, p)| vec![theta, theta.to_degrees(), p])
        .collect();
    let mut meta = base_meta(&config);
    meta.extend(mc_meta(&config.mc));
    Ok(Artifact {
        meta,
        columns: vec!["theta_rad", "theta_deg", "cdf_mc"],
        rows,
        format: config.format,
        output: config.output,
    })
}

pub fn cmd_compare(cmd: &CompareCmd) -> Result<Artifact, CliError> {
    let config = cmd.common.resolve()?;
    let analytic = analytic_cdf_curve(
        &config.scenario,
        config.grid_size,
        config.convention,
        config.solver,
    )?;
    analytic.validate()?;
    let grid: Vec<f64> = analytic.points.iter().map(|&(theta, _)| theta).collect();
    let empirical = empirical_cdf(&config.scenario, &config.mc, &grid, config.convention)?;
    empirical.validate()?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut sup_gap = 0.0_f64;
    for (&(theta, fa), &(_, fe)) in analytic.points.iter().zip(&empirical.points) {
        let gap = (fa - fe).abs();
        sup_gap = sup_gap.max(gap);
        rows.push(vec![theta, theta.to_degrees(), fa, fe, gap]);
    }
    // KS statistic on a finer grid than the emitted one; same samples, so
    // the empirical curve only needs re-counting.
    let domain = contact_angle_domain(&config.scenario)?;
    let fine_grid = domain_grid(&domain, 4 * config.grid_size);
    let fine_emp = empirical_cdf(&config.scenario, &config.mc, &fine_grid, config.convention)?;
    let mut ks = 0.0_f64;
    for &(theta, fe) in &fine_emp.points {
        let fa = match config.convention {
            Convention::Defective => crate::distribution::conditional_contact_cdf_with(
                &config.scenario,
                theta,
                config.solver,
            )?,
            Convention::Normalized => crate::distribution::conditional_contact_cdf_normalized_with(
                &config.scenario,
                theta,
                config.solver,
            )?,
        };
        ks = ks.max((fa - fe).abs());
    }

    let mut meta = base_meta(&config);
    meta.extend(mc_meta(&config.mc));
    meta.push(("sup_gap".into(), fmt_sig(sup_gap)));
    meta.push(("ks_stat".into(), fmt_sig(ks)));
    // Worst-case binomial standard error scale at p = 1/2.
    meta.push((
        "mc_std_error_scale".into(),
        fmt_sig((0.25 / config.mc.trials as f64).sqrt()),
    ));
    meta.push(("gap_threshold".into(), fmt_sig(COMPARE_GAP_THRESHOLD)));
    meta.push((
        "threshold_exceeded".into(),
        (sup_gap > COMPARE_GAP_THRESHOLD).to_string(),
    ));
    Ok(Artifact {
        meta,
        columns: vec!["theta_rad", "theta_deg", "cdf_analytic", "cdf_mc", "abs_gap"],
        rows,
        format: config.format,
        output: config.output,
    })
}

pub fn cmd_area(cmd: &AreaCmd) -> Result<Artifact, CliError> {
    let config = cmd.common.resolve()?;
    let theta_d = cmd.theta_d_deg.to_radians();
    let theta_o = cmd.theta_o_deg.to_radians();
    let radius = cmd
        .radius_km
        .unwrap_or(config.scenario.geometry.shell_radius_km);
    let analytic = crate::geometry::cap_slice_area(theta_d, theta_o, radius)?;
    let mut meta = base_meta(&config);
    let (columns, row) = if cmd.with_mc {
        let estimate = slice_area_estimate(theta_d, theta_o, radius, &config.mc)?;
        meta.extend(mc_meta(&config.mc));
        let rel_gap = if estimate.estimate != 0.0 {
            (analytic - estimate.estimate).abs() / estimate.estimate
        } else {
            0.0
        };
        (
            vec![
                "theta_d_rad",
                "theta_o_rad",
                "area_analytic_km2",
                "area_mc_km2",
                "area_mc_std_error_km2",
                "rel_gap",
            ],
            vec![theta_d, theta_o, analytic, estimate.estimate, estimate.std_error, rel_gap],
        )
    } else {
        (
            vec!["theta_d_rad", "theta_o_rad", "area_analytic_km2"],
            vec![theta_d, theta_o, analytic],
        )
    };
    Ok(Artifact {
        meta,
        columns,
        rows: vec![row],
        format: config.format,
        output: config.output,
    })
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli) -> Result<Artifact, CliError> {
    match &cli.command {
        Command::Cdf(cmd) => cmd_cdf(cmd),
        Command::Outage(cmd) => cmd_outage(cmd),
        Command::Multihop(cmd) => cmd_multihop(cmd),
        Command::Simulate(cmd) => cmd_simulate(cmd),
        Command::Compare(cmd) => cmd_compare(cmd),
        Command::Area(cmd) => cmd_area(cmd),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common_with(f: impl FnOnce(&mut CommonArgs)) -> CommonArgs {
        let mut args = CommonArgs::default();
        f(&mut args);
        args
    }

    #[test]
    fn defaults_are_paper_baseline() {
        let config = CommonArgs::default().resolve().unwrap();
        assert_eq!(config.scenario.geometry.earth_radius_km, 6371.0);
        assert_eq!(config.scenario.geometry.shell_radius_km, 6921.0);
        assert_eq!(config.scenario.distance_km, 3000.0);
        assert_eq!(config.scenario.n_sat, 3000);
        assert_eq!(config.scenario.theta_m1_rad, 45.0_f64.to_radians());
        assert_eq!(config.mc.seed, 42);
    }

    #[test]
    fn altitude_shell_exclusive() {
        let args = common_with(|a| {
            a.altitude_km = Some(550.0);
            a.shell_radius_km = Some(6921.0);
        });
        let err = args.resolve().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = std::env::temp_dir().join("leo_relay_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "distance_km = 2000\nn_sat = 777\n# comment\n").unwrap();
        let args = common_with(|a| {
            a.config = Some(path.clone());
            a.n_sat = Some(1234);
        });
        let config = args.resolve().unwrap();
        assert_eq!(config.scenario.distance_km, 2000.0);
        assert_eq!(config.scenario.n_sat, 1234);
    }

    #[test]
    fn malformed_config_rejected() {
        let dir = std::env::temp_dir().join("leo_relay_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        std::fs::write(&path, "distance_km\n").unwrap();
        let args = common_with(|a| a.config = Some(path.clone()));
        assert_eq!(args.resolve().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn infeasible_cdf_is_user_error() {
        let cmd = CdfCmd {
            common: common_with(|a| {
                a.theta_m1_deg = Some(11.0);
                a.theta_m2_deg = Some(11.0);
            }),
        };
        let err = cmd_cdf(&cmd).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().contains("arcsin"), "{}", err.message());
    }

    #[test]
    fn csv_rendering_is_stable() {
        let artifact = Artifact {
            meta: vec![("k".into(), "v".into())],
            columns: vec!["a", "b"],
            rows: vec![vec![1.0, 0.5]],
            format: FormatArg::Csv,
            output: None,
        };
        assert_eq!(
            artifact.render(),
            "# k = v\na,b\n1.00000000000e0,5.00000000000e-1\n"
        );
    }

    #[test]
    fn multihop_first_row_equals_single_relay() {
        let cmd = MultihopCmd {
            common: common_with(|a| a.distance_km = Some(6000.0)),
            hops: 4,
            epsilon: None,
            max_hops: DEFAULT_MAX_HOPS,
        };
        let artifact = cmd_multihop(&cmd).unwrap();
        let single = single_relay_outage(&cmd.common.resolve().unwrap().scenario).unwrap();
        assert_eq!(artifact.rows[0][1], single.probability);
    }

    #[test]
    fn area_command_matches_library() {
        let cmd = AreaCmd {
            common: CommonArgs::default(),
            theta_d_deg: 45.0,
            theta_o_deg: 22.5,
            radius_km: Some(6921.0),
            with_mc: false,
        };
        let artifact = cmd_area(&cmd).unwrap();
        let direct = crate::geometry::cap_slice_area(
            45.0_f64.to_radians(),
            22.5_f64.to_radians(),
            6921.0,
        )
        .unwrap();
        assert_eq!(artifact.rows[0][2], direct);
    }
}
