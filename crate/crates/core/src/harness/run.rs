use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, HarnessError, SolverMode};
use crate::netgraph::{build_demand_graph, build_grid, build_network_graph, CandidateGrid, DemandGraph, NetworkGraph};
use crate::radio::{coverage_radii_for, CoverageRadii};
use crate::scenario::{generate_scenario, load_scenario, Scenario};
use crate::solvers::{
    solve_dmlp, solve_milp, solve_with_fixed_placement, DecisionStatus, PlacementDecision, SolveError, SolverKind,
};
use crate::uprmodel::{PrevPlacement, SolveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotStatus {
    Complete,
    /// Branch and bound stopped at its node budget; the incumbent is reported.
    NodeLimit,
    StoppedInfeasible,
    Infeasible,
    /// Node budget exhausted before any incumbent was found.
    ResourceLimit,
}

impl From<DecisionStatus> for SnapshotStatus {
    fn from(s: DecisionStatus) -> Self {
        match s {
            DecisionStatus::Complete => SnapshotStatus::Complete,
            DecisionStatus::NodeLimit => SnapshotStatus::NodeLimit,
            DecisionStatus::StoppedInfeasible => SnapshotStatus::StoppedInfeasible,
        }
    }
}

/// One row of the results table. Failed snapshots carry NaN objective and
/// zero counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMetrics {
    pub run_seed: u64,
    pub t: usize,
    pub solver: SolverKind,
    pub uav_count: usize,
    pub supported_fraction: f64,
    pub relocation: f64,
    pub objective: f64,
    pub lp_calls: usize,
    pub wall_time_s: f64,
    pub status: SnapshotStatus,
}

/// A solved snapshot together with the previous placement it was solved
/// against, so callers can audit it.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: usize,
    pub solver: SolverKind,
    /// `None` at the first snapshot, where no relocation terms apply.
    pub prev: Option<PrevPlacement>,
    pub decision: Option<PlacementDecision>,
    pub metrics: SnapshotMetrics,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub run_seed: u64,
    pub scenario: Scenario,
    pub grid: CandidateGrid,
    pub radii: CoverageRadii,
    pub solve: SolveConfig,
    /// Ordered by snapshot, then chain (`milp`, `dmlp`, `static`).
    pub steps: Vec<StepRecord>,
}

impl RunTrace {
    pub fn metrics(&self) -> Vec<SnapshotMetrics> {
        self.steps.iter().map(|s| s.metrics.clone()).collect()
    }

    pub fn step(&self, t: usize, solver: SolverKind) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.t == t && s.solver == solver)
    }
}

/// Scenario for one run: the configured file, or a fresh one from `run_seed`.
pub fn scenario_for_run(cfg: &ExperimentConfig, run_seed: u64) -> Result<Scenario, HarnessError> {
    match &cfg.scenario_file {
        Some(path) => Ok(load_scenario(path)?),
        None => Ok(generate_scenario(&cfg.generate_config(), &cfg.propagation.params, run_seed)?),
    }
}

/// Network and demand graphs of snapshot `t`.
pub fn snapshot_graphs(
    cfg: &ExperimentConfig,
    scenario: &Scenario,
    grid: &CandidateGrid,
    radii: &CoverageRadii,
    t: usize,
) -> Result<(NetworkGraph, DemandGraph), HarnessError> {
    let snap = scenario
        .snapshots
        .get(t)
        .ok_or_else(|| HarnessError::Config(format!("snapshot {t} not in scenario ({} snapshots)", scenario.snapshots.len())))?;
    let ng = build_network_graph(snap, grid, radii, &cfg.capacity, &scenario.propagation)?;
    Ok((ng, build_demand_graph(snap)))
}

fn chains(mode: SolverMode) -> &'static [SolverKind] {
    match mode {
        SolverMode::Milp => &[SolverKind::Milp],
        SolverMode::Dmlp => &[SolverKind::Dmlp],
        SolverMode::Static => &[SolverKind::Static],
        SolverMode::Both => &[SolverKind::Milp, SolverKind::Dmlp],
        SolverMode::All => &[SolverKind::Milp, SolverKind::Dmlp, SolverKind::Static],
    }
}

fn metrics_of(run_seed: u64, t: usize, solver: SolverKind, dg: &DemandGraph, d: &PlacementDecision, timing: bool) -> SnapshotMetrics {
    SnapshotMetrics {
        run_seed,
        t,
        solver,
        uav_count: d.uav_count(),
        supported_fraction: d.supported_fraction(dg),
        relocation: d.z_value,
        objective: d.objective,
        lp_calls: d.lp_calls,
        wall_time_s: if timing { d.wall_time } else { 0.0 },
        status: d.status.into(),
    }
}

fn failed(run_seed: u64, t: usize, solver: SolverKind, status: SnapshotStatus) -> SnapshotMetrics {
    SnapshotMetrics {
        run_seed,
        t,
        solver,
        uav_count: 0,
        supported_fraction: 0.0,
        relocation: 0.0,
        objective: f64::NAN,
        lp_calls: 0,
        wall_time_s: 0.0,
        status,
    }
}

/// Solves every snapshot of `scenario` with each configured chain. Snapshot
/// `t` is solved against the chain's placement at `t - 1` (the last
/// successful one if `t - 1` failed); the first snapshot has no relocation
/// terms. The static chain solves the first snapshot exactly, then keeps
/// that placement and only re-routes flows.
pub fn run_on_scenario(cfg: &ExperimentConfig, scenario: Scenario, run_seed: u64) -> Result<RunTrace, HarnessError> {
    let grid = build_grid(&scenario.region, cfg.region.grid_rows, cfg.region.grid_cols)?;
    let radii = coverage_radii_for(&scenario.propagation, &cfg.propagation.budget)?;
    let solve = cfg.solve_config(scenario.mobility.uav_reach());
    solve.validate()?;
    let first = SolveConfig { mobility_enabled: false, ..solve };
    let timing = cfg.output.timing;

    let graphs = (0..scenario.snapshots.len())
        .map(|t| snapshot_graphs(cfg, &scenario, &grid, &radii, t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut steps = Vec::new();
    for &kind in chains(cfg.solve.solver) {
        let mut last: Option<Vec<bool>> = None;
        for (t, (ng, dg)) in graphs.iter().enumerate() {
            let prev = match (&last, t) {
                (Some(x), t) if t > 0 => Some(PrevPlacement::new(x.clone(), &ng.sites, solve.vmax_times_dt)?),
                _ => None,
            };
            let result = match (kind, &prev) {
                (SolverKind::Milp, None) | (SolverKind::Static, None) => solve_milp(ng, dg, &first, None),
                (SolverKind::Milp, Some(p)) => solve_milp(ng, dg, &solve, Some(p)),
                (SolverKind::Dmlp, None) => solve_dmlp(ng, dg, &first, &PrevPlacement::empty(&ng.sites, solve.vmax_times_dt)),
                (SolverKind::Dmlp, Some(p)) => solve_dmlp(ng, dg, &solve, p),
                (SolverKind::Static, Some(p)) => solve_with_fixed_placement(ng, dg, &solve, Some(p), &p.x_prev),
            };
            let (decision, metrics) = match result {
                Ok(mut d) => {
                    d.solver = kind;
                    let m = metrics_of(run_seed, t, kind, dg, &d, timing);
                    // the static chain never moves off its first placement
                    if kind != SolverKind::Static || last.is_none() {
                        last = Some(d.x.clone());
                    }
                    (Some(d), m)
                }
                Err(SolveError::Infeasible) => (None, failed(run_seed, t, kind, SnapshotStatus::Infeasible)),
                Err(SolveError::ResourceLimit(_)) => (None, failed(run_seed, t, kind, SnapshotStatus::ResourceLimit)),
                Err(e) => return Err(e.into()),
            };
            steps.push(StepRecord { t, solver: kind, prev, decision, metrics });
        }
    }
    let order = |k: SolverKind| chains(SolverMode::All).iter().position(|&c| c == k);
    steps.sort_by_key(|s| (s.t, order(s.solver)));
    Ok(RunTrace { run_seed, scenario, grid, radii, solve, steps })
}

/// Metrics of one run: scenario resolution plus [`run_on_scenario`].
pub fn run_snapshot_sequence(cfg: &ExperimentConfig, run_seed: u64) -> Result<Vec<SnapshotMetrics>, HarnessError> {
    let scenario = scenario_for_run(cfg, run_seed)?;
    Ok(run_on_scenario(cfg, scenario, run_seed)?.metrics())
}

/// Metrics of every configured run, in seed order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SnapshotMetrics>, HarnessError> {
    let mut all = Vec::new();
    for seed in cfg.run_seeds() {
        all.extend(run_snapshot_sequence(cfg, seed)?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: SolverMode) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.clusters.count = 2;
        cfg.region.grid_rows = 3;
        cfg.region.grid_cols = 3;
        cfg.mobility.num_snapshots = 3;
        cfg.solve.n_max = 3;
        cfg.solve.solver = mode;
        cfg
    }

    #[test]
    fn rows_are_ordered_by_snapshot_then_chain() {
        let trace = run_on_scenario(&small(SolverMode::All), scenario_for_run(&small(SolverMode::All), 1).unwrap(), 1).unwrap();
        let keys: Vec<(usize, SolverKind)> = trace.steps.iter().map(|s| (s.t, s.solver)).collect();
        assert_eq!(keys.len(), 9);
        assert_eq!(keys[0], (0, SolverKind::Milp));
        assert_eq!(keys[1], (0, SolverKind::Dmlp));
        assert_eq!(keys[2], (0, SolverKind::Static));
        assert_eq!(keys[8], (2, SolverKind::Static));
        assert!(trace.steps.iter().filter(|s| s.t == 0).all(|s| s.prev.is_none()));
    }

    #[test]
    fn static_chain_keeps_its_first_placement() {
        let cfg = small(SolverMode::All);
        let trace = run_on_scenario(&cfg, scenario_for_run(&cfg, 4).unwrap(), 4).unwrap();
        let x0 = trace.step(0, SolverKind::Static).unwrap().decision.as_ref().unwrap().x.clone();
        assert_eq!(x0, trace.step(0, SolverKind::Milp).unwrap().decision.as_ref().unwrap().x);
        for t in 1..3 {
            let s = trace.step(t, SolverKind::Static).unwrap();
            assert_eq!(s.decision.as_ref().unwrap().x, x0);
            assert_eq!(s.metrics.relocation, 0.0);
            assert_eq!(s.metrics.lp_calls, 1);
        }
    }

    #[test]
    fn timing_off_zeroes_wall_time() {
        let cfg = small(SolverMode::Dmlp);
        let m = run_snapshot_sequence(&cfg, 2).unwrap();
        assert!(m.iter().all(|r| r.wall_time_s == 0.0));
        let mut timed = cfg.clone();
        timed.output.timing = true;
        assert!(run_snapshot_sequence(&timed, 2).unwrap().iter().any(|r| r.wall_time_s > 0.0));
    }

    #[test]
    fn frozen_world_is_a_fixed_point() {
        let mut cfg = small(SolverMode::Dmlp);
        cfg.mobility.speed_min = 0.0;
        cfg.mobility.speed_max = 0.0;
        cfg.mobility.num_snapshots = 4;
        let m = run_snapshot_sequence(&cfg, 5).unwrap();
        let strip = |r: &SnapshotMetrics| SnapshotMetrics { t: 0, ..r.clone() };
        assert!(m.iter().all(|r| strip(r) == strip(&m[0])), "{m:#?}");
    }
}
