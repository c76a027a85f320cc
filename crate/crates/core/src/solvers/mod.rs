//! Exact branch-and-bound and the iterative LP rounding heuristic, both
//! producing [`PlacementDecision`] values, plus an independent audit.

mod dmlp;
mod milp;
mod record;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpcore::{LpError, LpSolution};
use crate::netgraph::DemandGraph;
use crate::uprmodel::{ModelError, PrevPlacement, SolveConfig, UprVariables};

pub use dmlp::solve_dmlp;
pub use milp::{solve_milp, solve_with_fixed_placement};
pub use record::DecisionRecord;
pub use verify::{verify_decision, AuditReport};

/// Value above which an LP placement counts as nonzero.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("model is infeasible")]
    Infeasible,
    #[error("node limit {0} reached without a feasible placement")]
    ResourceLimit(u64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Milp,
    Dmlp,
    Static,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Milp => "milp",
            SolverKind::Dmlp => "dmlp",
            SolverKind::Static => "static",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionStatus {
    /// Proven optimal (branch and bound) or ran to completion (DM-LP).
    Complete,
    /// Branch and bound hit its node budget; the incumbent is returned.
    NodeLimit,
    /// DM-LP met an infeasible reduced LP and kept the last feasible iterate.
    StoppedInfeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementDecision {
    pub x: Vec<bool>,
    /// `flows[k][e]`, Mbps.
    pub flows: Vec<Vec<f64>>,
    /// Per-commodity unsupported traffic, Mbps.
    pub unsupported: Vec<f64>,
    pub z_value: f64,
    pub objective: f64,
    pub solver: SolverKind,
    pub status: DecisionStatus,
    pub lp_calls: usize,
    pub wall_time: f64,
    /// DM-LP: optimum of every reduced LP in solve order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lp_objectives: Vec<f64>,
}

impl PlacementDecision {
    pub fn uav_count(&self) -> usize {
        self.x.iter().filter(|&&b| b).count()
    }

    pub fn sites(&self) -> Vec<usize> {
        self.x.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    /// Delivered share of the total demand; 1 when there is no demand.
    pub fn supported_fraction(&self, dg: &DemandGraph) -> f64 {
        let total = dg.total_demand();
        if total <= 0.0 {
            return 1.0;
        }
        let unsupported: f64 = self.unsupported.iter().sum();
        ((total - unsupported) / total).clamp(0.0, 1.0)
    }
}

/// `max_u |x_u - x_prev_u|`, zero without a previous placement.
pub fn relocation(x: &[bool], prev: Option<&PrevPlacement>) -> f64 {
    match prev {
        Some(p) if x.iter().zip(&p.x_prev).any(|(a, b)| a != b) => 1.0,
        _ => 0.0,
    }
}

/// Objective of a binary placement with the given unsupported traffic.
pub fn decision_objective(
    cfg: &SolveConfig,
    dg: &DemandGraph,
    x: &[bool],
    unsupported: &[f64],
    z_value: f64,
    mobility: bool,
) -> f64 {
    let count = x.iter().filter(|&&b| b).count() as f64;
    let y: f64 = unsupported.iter().sum();
    let mut obj = cfg.placement_weight() * count + cfg.unsupported_weight(dg.total_demand()) * y;
    if mobility {
        obj += cfg.alpha * z_value;
    }
    obj
}

fn mobility_active(cfg: &SolveConfig, prev: Option<&PrevPlacement>) -> bool {
    cfg.mobility_enabled && prev.is_some()
}

/// Builds a decision from an LP solution whose placement is `x`.
#[allow(clippy::too_many_arguments)]
fn decision_from(
    sol: &LpSolution,
    vars: &UprVariables,
    x: Vec<bool>,
    cfg: &SolveConfig,
    dg: &DemandGraph,
    prev: Option<&PrevPlacement>,
    solver: SolverKind,
    status: DecisionStatus,
) -> PlacementDecision {
    let flows = vars.f.iter().map(|col| col.iter().map(|&v| sol.value(v).max(0.0)).collect()).collect();
    let unsupported: Vec<f64> = vars
        .y
        .iter()
        .zip(&dg.commodities)
        .map(|(&v, c)| sol.value(v).clamp(0.0, c.demand))
        .collect();
    let mobility = mobility_active(cfg, prev);
    let z_value = if mobility { relocation(&x, prev) } else { 0.0 };
    let objective = decision_objective(cfg, dg, &x, &unsupported, z_value, mobility);
    PlacementDecision {
        x,
        flows,
        unsupported,
        z_value,
        objective,
        solver,
        status,
        lp_calls: 0,
        wall_time: 0.0,
        lp_objectives: Vec::new(),
    }
}
