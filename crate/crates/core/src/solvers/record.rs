use serde::{Deserialize, Serialize};

use super::{DecisionStatus, PlacementDecision, SolverKind};
use crate::netgraph::{DemandGraph, NetworkGraph};

/// Flows below this are omitted from records.
const FLOW_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommodityRecord {
    /// 1-based cluster ids.
    pub src: usize,
    pub dst: usize,
    pub demand_mbps: f64,
    pub supported_mbps: f64,
    pub unsupported_mbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub commodity: usize,
    pub from: String,
    pub to: String,
    pub kind: String,
    pub mbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub solver: SolverKind,
    pub status: DecisionStatus,
    pub objective: f64,
    pub uav_count: usize,
    pub supported_fraction: f64,
    pub relocation: f64,
    pub lp_calls: usize,
    pub wall_time_s: f64,
    /// Chosen site indices with coordinates.
    pub sites: Vec<(usize, f64, f64)>,
    pub commodities: Vec<CommodityRecord>,
    pub flows: Vec<FlowRecord>,
}

fn node_label(ng: &NetworkGraph, node: usize) -> String {
    match ng.node_site(node) {
        Some(s) => format!("site{s}"),
        None => format!("ch{}", node + 1),
    }
}

impl DecisionRecord {
    pub fn new(d: &PlacementDecision, ng: &NetworkGraph, dg: &DemandGraph) -> Self {
        let sites = d.sites().into_iter().map(|s| (s, ng.sites[s].x, ng.sites[s].y)).collect();
        let commodities = dg
            .commodities
            .iter()
            .zip(&d.unsupported)
            .map(|(c, &y)| CommodityRecord {
                src: c.src + 1,
                dst: c.dst + 1,
                demand_mbps: c.demand,
                supported_mbps: c.demand - y,
                unsupported_mbps: y,
            })
            .collect();
        let mut flows = Vec::new();
        for (k, col) in d.flows.iter().enumerate() {
            for (e, &v) in col.iter().enumerate() {
                if v > FLOW_EPS {
                    let edge = &ng.edges[e];
                    flows.push(FlowRecord {
                        commodity: k,
                        from: node_label(ng, edge.from),
                        to: node_label(ng, edge.to),
                        kind: edge.kind.as_str().to_string(),
                        mbps: v,
                    });
                }
            }
        }
        DecisionRecord {
            solver: d.solver,
            status: d.status,
            objective: d.objective,
            uav_count: d.uav_count(),
            supported_fraction: d.supported_fraction(dg),
            relocation: d.z_value,
            lp_calls: d.lp_calls,
            wall_time_s: d.wall_time,
            sites,
            commodities,
            flows,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}
