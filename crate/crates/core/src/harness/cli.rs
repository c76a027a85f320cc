//! Command line front end. Exit codes: 0 success, 1 usage or input error,
//! 2 infeasible, 3 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{
    read_results_csv, report, scenario_for_run, snapshot_graphs, summarize, write_summary_csv, ExperimentConfig,
    HarnessError, SnapshotStatus, SolverMode, SummaryRow, SUMMARY_FILE,
};
use crate::netgraph::build_grid;
use crate::radio::coverage_radii_for;
use crate::scenario::save_scenario;
use crate::solvers::{solve_dmlp, solve_milp, DecisionRecord, DecisionStatus, SolveError};
use crate::uprmodel::{PrevPlacement, SolveConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const DECISION_FILE: &str = "decision.json";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Parser)]
#[command(name = "uavrelay", version, about = "Joint UAV relay placement and routing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a scenario and write it as JSON.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Scenario file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one snapshot and write its decision record.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SingleSolver::Dmlp)]
        solver: SingleSolver,
        /// Snapshot index.
        #[arg(long, default_value_t = 0)]
        snapshot: usize,
        /// Comma-separated previously occupied site indices; enables the
        /// relocation constraints.
        #[arg(long, value_delimiter = ',')]
        prev: Option<Vec<usize>>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every snapshot of one or more seeded scenarios.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        solver: Option<SolverMode>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, value_enum)]
        timing: Option<Switch>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate existing results files into a summary.
    Report {
        #[arg(required = true)]
        results: Vec<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the A2G and A2A coverage radii.
    Radii {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SingleSolver {
    Milp,
    Dmlp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Grid(usize, usize);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected RxC, got {s:?}"))?;
    let r: usize = r.trim().parse().map_err(|e| format!("rows: {e}"))?;
    let c: usize = c.trim().parse().map_err(|e| format!("cols: {e}"))?;
    if r == 0 || c == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok(Grid(r, c))
}

/// Overrides applied on top of the config file.
#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario file to use instead of generating one.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    clusters: Option<usize>,
    /// Candidate grid as RxC, e.g. 10x10.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<Grid>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// A2G link capacity, Mbps.
    #[arg(long)]
    capacity_a2g: Option<f64>,
    /// A2A link capacity, Mbps.
    #[arg(long)]
    capacity_a2a: Option<f64>,
    #[arg(long)]
    snapshots: Option<usize>,
    #[arg(long)]
    redraw_demand_each_snapshot: bool,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = &self.scenario {
            cfg.scenario_file = Some(s.clone());
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.clusters {
            cfg.clusters.count = v;
        }
        if let Some(Grid(r, c)) = self.grid {
            cfg.region.grid_rows = r;
            cfg.region.grid_cols = c;
        }
        if let Some(v) = self.nmax {
            cfg.solve.n_max = v;
        }
        if let Some(v) = self.phi {
            cfg.solve.phi = v;
        }
        if let Some(v) = self.alpha {
            cfg.solve.alpha = v;
        }
        if let Some(v) = self.capacity_a2g {
            cfg.capacity.cap_a2g = v;
        }
        if let Some(v) = self.capacity_a2a {
            cfg.capacity.cap_a2a = v;
        }
        if let Some(v) = self.snapshots {
            cfg.mobility.num_snapshots = v;
        }
        if self.redraw_demand_each_snapshot {
            cfg.mobility.redraw_demand_each_snapshot = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &HarnessError) -> i32 {
    match e {
        HarnessError::Solve(SolveError::Infeasible) => EXIT_INFEASIBLE,
        HarnessError::Solve(SolveError::ResourceLimit(_)) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(dir.to_path_buf(), e))?;
    }
    std::fs::write(path, text).map_err(|e| HarnessError::Io(path.to_path_buf(), e))
}

fn print_summary(out: &mut dyn Write, summary: &[SummaryRow]) {
    for s in summary {
        let _ = writeln!(
            out,
            "{:<6} runs={} snapshots={} failed={} uavs={:.3} supported={:.4} relocation={:.3} objective={:.6} lp_calls={:.2}",
            s.solver.as_str(),
            s.runs,
            s.snapshots,
            s.failed,
            s.mean_uav_count,
            s.mean_supported_fraction,
            s.mean_relocation,
            s.mean_objective,
            s.mean_lp_calls
        );
    }
}

fn generate(common: &Common, out_path: &Path, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let cfg = common.resolve()?;
    let scenario = scenario_for_run(&cfg, cfg.seed)?;
    if let Some(dir) = out_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(dir.to_path_buf(), e))?;
    }
    save_scenario(&scenario, out_path)?;
    let _ = writeln!(
        out,
        "wrote {} ({} clusters, {} snapshots)",
        out_path.display(),
        scenario.num_clusters(),
        scenario.snapshots.len()
    );
    Ok(EXIT_OK)
}

fn solve(
    common: &Common,
    solver: SingleSolver,
    t: usize,
    prev_sites: Option<&[usize]>,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let cfg = common.resolve()?;
    let scenario = scenario_for_run(&cfg, cfg.seed)?;
    let grid = build_grid(&scenario.region, cfg.region.grid_rows, cfg.region.grid_cols)?;
    let radii = coverage_radii_for(&scenario.propagation, &cfg.propagation.budget)?;
    let (ng, dg) = snapshot_graphs(&cfg, &scenario, &grid, &radii, t)?;
    let mut scfg = cfg.solve_config(scenario.mobility.uav_reach());
    let prev = match prev_sites {
        Some(sites) => {
            let n = ng.num_sites();
            let mut x = vec![false; n];
            for &s in sites {
                *x.get_mut(s).ok_or_else(|| HarnessError::Config(format!("site {s} not on the {n} site grid")))? = true;
            }
            Some(PrevPlacement::new(x, &ng.sites, scfg.vmax_times_dt)?)
        }
        None => {
            scfg = SolveConfig { mobility_enabled: false, ..scfg };
            None
        }
    };
    let decision = match solver {
        SingleSolver::Milp => solve_milp(&ng, &dg, &scfg, prev.as_ref())?,
        SingleSolver::Dmlp => {
            let p = prev.clone().unwrap_or_else(|| PrevPlacement::empty(&ng.sites, scfg.vmax_times_dt));
            solve_dmlp(&ng, &dg, &scfg, &p)?
        }
    };
    let mut record = DecisionRecord::new(&decision, &ng, &dg);
    if !cfg.output.timing {
        record.wall_time_s = 0.0;
    }
    let dir = out_dir.map(Path::to_path_buf).unwrap_or(cfg.output.dir.clone());
    let path = dir.join(DECISION_FILE);
    write_file(&path, &record.to_json())?;
    let _ = writeln!(
        out,
        "{} t={} uavs={} sites={:?} supported={:.4} objective={:.6} lp_calls={} -> {}",
        record.solver.as_str(),
        t,
        record.uav_count,
        decision.sites(),
        record.supported_fraction,
        record.objective,
        record.lp_calls,
        path.display()
    );
    Ok(if decision.status == DecisionStatus::NodeLimit { EXIT_RESOURCE } else { EXIT_OK })
}

fn simulate(
    common: &Common,
    solver: Option<SolverMode>,
    runs: Option<usize>,
    timing: Option<Switch>,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let mut cfg = common.resolve()?;
    if let Some(s) = solver {
        cfg.solve.solver = s;
    }
    if let Some(r) = runs {
        cfg.runs = r;
    }
    if let Some(t) = timing {
        cfg.output.timing = matches!(t, Switch::On);
    }
    if let Some(d) = out_dir {
        cfg.output.dir = d.to_path_buf();
    }
    cfg.validate()?;
    let metrics = super::run_experiment(&cfg)?;
    let summary = report(&metrics, &cfg.output.dir)?;
    write_file(&cfg.output.dir.join(CONFIG_FILE), &cfg.to_toml())?;
    print_summary(out, &summary);
    let code = if metrics.iter().any(|m| m.status == SnapshotStatus::Infeasible) {
        EXIT_INFEASIBLE
    } else if metrics.iter().any(|m| matches!(m.status, SnapshotStatus::ResourceLimit | SnapshotStatus::NodeLimit)) {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    };
    Ok(code)
}

fn aggregate(files: &[PathBuf], out_dir: &Path, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let mut metrics = Vec::new();
    for f in files {
        metrics.extend(read_results_csv(f)?);
    }
    if metrics.is_empty() {
        return Err(HarnessError::Config("results files hold no rows".into()));
    }
    let summary = summarize(&metrics);
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::Io(out_dir.to_path_buf(), e))?;
    let path = out_dir.join(SUMMARY_FILE);
    let file = std::fs::File::create(&path).map_err(|e| HarnessError::Io(path.clone(), e))?;
    write_summary_csv(&summary, file)?;
    print_summary(out, &summary);
    Ok(EXIT_OK)
}

fn radii(config: Option<&Path>, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let cfg = match config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let r = coverage_radii_for(&cfg.propagation.params, &cfg.propagation.budget)?;
    let _ = writeln!(out, "R1 (A2G) = {:.1} m  budget {:.1} dB", r.r1_a2g, r.loss_budget_a2g);
    let _ = writeln!(out, "R2 (A2A) = {:.1} m  budget {:.1} dB", r.r2_a2a, r.loss_budget_a2a);
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Generate { common, out: path } => generate(common, path, out),
        Command::Solve { common, solver, snapshot, prev, out: dir } => {
            solve(common, *solver, *snapshot, prev.as_deref(), dir.as_deref(), out)
        }
        Command::Simulate { common, solver, runs, timing, out: dir } => {
            simulate(common, *solver, *runs, *timing, dir.as_deref(), out)
        }
        Command::Report { results, out: dir } => aggregate(results, dir, out),
        Command::Radii { config } => radii(config.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("10x10"), Ok(Grid(10, 10)));
        assert_eq!(parse_grid("3X4"), Ok(Grid(3, 4)));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("33").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["uavrelay", "solve", "--bogus"], &mut o, &mut e), EXIT_USAGE);
        assert!(String::from_utf8(e).unwrap().contains("--bogus"));
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["uavrelay", "--help"], &mut o, &mut e), EXIT_OK);
        assert!(String::from_utf8(o).unwrap().contains("simulate"));
    }

    #[test]
    fn radii_defaults() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["uavrelay", "radii"], &mut o, &mut e), EXIT_OK);
        let text = String::from_utf8(o).unwrap();
        assert!(text.contains("R1 (A2G) = 2233.2 m"), "{text}");
        assert!(text.contains("R2 (A2A) = 3772.2 m"), "{text}");
    }
}
