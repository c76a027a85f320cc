use serde::{Deserialize, Serialize};

use super::{decision_objective, PlacementDecision};
use crate::netgraph::{DemandGraph, NetworkGraph};
use crate::uprmodel::{PrevPlacement, SolveConfig};

/// Largest violation of every constraint family, recomputed from graph data
/// and the decision alone. All entries are `>= 0`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Flow on an edge whose tail site is not placed.
    pub gate_tail: f64,
    /// Flow on an edge whose head site is not placed.
    pub gate_head: f64,
    pub uav_budget: f64,
    pub conservation: f64,
    pub capacity: f64,
    pub flow_sign: f64,
    pub unsupported_range: f64,
    /// Shape mismatches between the decision and the graphs.
    pub shape: f64,
    /// Previously occupied sites with no placed site in reach.
    pub reachability: f64,
    /// `max_u |x_u - x_prev_u| - z`.
    pub relocation: f64,
    /// Recomputed objective.
    pub objective: f64,
    /// Recomputed `sum(TD - y) / sum(TD)`.
    pub supported_fraction: f64,
}

impl AuditReport {
    pub fn families(&self) -> [(&'static str, f64); 10] {
        [
            ("gate_tail", self.gate_tail),
            ("gate_head", self.gate_head),
            ("uav_budget", self.uav_budget),
            ("conservation", self.conservation),
            ("capacity", self.capacity),
            ("flow_sign", self.flow_sign),
            ("unsupported_range", self.unsupported_range),
            ("shape", self.shape),
            ("reachability", self.reachability),
            ("relocation", self.relocation),
        ]
    }

    pub fn max_violation(&self) -> f64 {
        self.families().iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> (&'static str, f64) {
        self.families().into_iter().fold(("none", 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }
}

fn bump(slot: &mut f64, v: f64) {
    if v > *slot {
        *slot = v;
    }
}

/// Re-evaluates every constraint family directly. Reach sets are rebuilt
/// from site coordinates and `cfg.vmax_times_dt`; only `prev.x_prev` is read.
pub fn verify_decision(
    decision: &PlacementDecision,
    ng: &NetworkGraph,
    dg: &DemandGraph,
    cfg: &SolveConfig,
    prev: Option<&PrevPlacement>,
) -> AuditReport {
    let mut r = AuditReport::default();
    let k_count = dg.commodities.len();
    let n_sites = ng.sites.len();
    let m = ng.ch_positions.len();
    if decision.x.len() != n_sites
        || decision.unsupported.len() != k_count
        || decision.flows.len() != k_count
        || decision.flows.iter().any(|f| f.len() != ng.edges.len())
    {
        r.shape = f64::INFINITY;
        return r;
    }
    let placed = |node: usize| -> Option<f64> { node.checked_sub(m).map(|s| if decision.x[s] { 1.0 } else { 0.0 }) };

    for (k, c) in dg.commodities.iter().enumerate() {
        let f = &decision.flows[k];
        let mut net = vec![0.0; m + n_sites];
        for (e, edge) in ng.edges.iter().enumerate() {
            if let Some(x) = placed(edge.from) {
                bump(&mut r.gate_tail, f[e] - x * edge.capacity);
            }
            if let Some(x) = placed(edge.to) {
                bump(&mut r.gate_head, f[e] - x * edge.capacity);
            }
            bump(&mut r.flow_sign, -f[e]);
            net[edge.from] += f[e];
            net[edge.to] -= f[e];
        }
        let y = decision.unsupported[k];
        bump(&mut r.unsupported_range, -y);
        bump(&mut r.unsupported_range, y - c.demand);
        for (u, &out) in net.iter().enumerate() {
            let want = if u == c.src {
                c.demand - y
            } else if u == c.dst {
                -(c.demand - y)
            } else {
                0.0
            };
            bump(&mut r.conservation, (out - want).abs());
        }
    }
    for (e, edge) in ng.edges.iter().enumerate() {
        let load: f64 = decision.flows.iter().map(|f| f[e]).sum();
        bump(&mut r.capacity, load - edge.capacity);
    }
    let count = decision.x.iter().filter(|&&b| b).count();
    bump(&mut r.uav_budget, count as f64 - cfg.n_max as f64);

    let mobility = cfg.mobility_enabled && prev.is_some();
    if let Some(p) = prev.filter(|_| cfg.mobility_enabled) {
        if p.x_prev.len() != n_sites {
            r.shape = f64::INFINITY;
            return r;
        }
        for (i, _) in p.x_prev.iter().enumerate().filter(|(_, &b)| b) {
            let covered = (0..n_sites).any(|j| decision.x[j] && ng.sites[i].dist(&ng.sites[j]) <= cfg.vmax_times_dt);
            bump(&mut r.reachability, if covered { 0.0 } else { 1.0 });
        }
        let moved = decision.x.iter().zip(&p.x_prev).map(|(&a, &b)| if a != b { 1.0 } else { 0.0 }).fold(0.0, f64::max);
        bump(&mut r.relocation, moved - decision.z_value);
    }

    let total = dg.total_demand();
    let y_sum: f64 = decision.unsupported.iter().sum();
    r.supported_fraction = if total > 0.0 { (total - y_sum) / total } else { 1.0 };
    r.objective = decision_objective(cfg, dg, &decision.x, &decision.unsupported, decision.z_value, mobility);
    r
}
