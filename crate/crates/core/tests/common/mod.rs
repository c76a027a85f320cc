//! Shared instance builders and a brute-force placement oracle.
//!
//! The oracle enumerates every binary placement and prices each one with a
//! plain arc-flow LP built here from the graph data, so it shares nothing
//! with the production model builder beyond the LP engine itself.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uavrelay::lpcore::{solve_lp, LpModel, Relation};
use uavrelay::netgraph::{
    build_demand_graph, build_grid, build_network_graph, CapacityModel, DemandGraph, NetworkGraph,
};
use uavrelay::radio::{coverage_radii, PropagationParams};
use uavrelay::scenario::{generate_scenario, GenerateConfig, MobilityConfig, Region, Scenario};
use uavrelay::uprmodel::{PrevPlacement, SolveConfig};

pub struct Instance {
    pub scenario: Scenario,
    pub ng: NetworkGraph,
    pub dg: DemandGraph,
}

/// One-snapshot instance: `m` clusters of radius 500 m in a square region,
/// `rows x cols` candidate sites, equal A2G and A2A capacities.
pub fn instance(m: usize, rows: usize, cols: usize, side: f64, cap: f64, seed: u64) -> Instance {
    let params = PropagationParams::default();
    let cfg = GenerateConfig {
        region: Region { width: side, height: side },
        num_clusters: m,
        cluster_radius: 500.0,
        mobility: MobilityConfig { num_snapshots: 1, ..Default::default() },
        ..Default::default()
    };
    let scenario = generate_scenario(&cfg, &params, seed).unwrap();
    let grid = build_grid(&scenario.region, rows, cols).unwrap();
    let radii = coverage_radii(&params, 110.0, 110.0).unwrap();
    let capm = CapacityModel { cap_a2g: cap, cap_a2a: cap, ..Default::default() };
    let ng = build_network_graph(&scenario.snapshots[0], &grid, &radii, &capm, &params).unwrap();
    let dg = build_demand_graph(&scenario.snapshots[0]);
    Instance { scenario, ng, dg }
}

/// A previous placement of `count` distinct random sites.
pub fn random_prev(n_sites: usize, count: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![false; n_sites];
    let mut placed = 0;
    while placed < count.min(n_sites) {
        let s = rng.random_range(0..n_sites);
        if !x[s] {
            x[s] = true;
            placed += 1;
        }
    }
    x
}

pub fn prev_placement(ng: &NetworkGraph, x: Vec<bool>, cfg: &SolveConfig) -> PrevPlacement {
    PrevPlacement::new(x, &ng.sites, cfg.vmax_times_dt).unwrap()
}

#[derive(Debug, Clone)]
pub struct OracleBest {
    pub objective: f64,
    pub x: Vec<bool>,
    pub unsupported: f64,
    pub supported_fraction: f64,
}

/// Minimum unsupported traffic when only the sites in `x` may relay, or
/// `None` if the flow LP fails.
pub fn routed_unsupported(ng: &NetworkGraph, dg: &DemandGraph, x: &[bool]) -> Option<f64> {
    let m = ng.ch_positions.len();
    let usable = |node: usize| node < m || x[node - m];
    let mut lp = LpModel::new();
    let mut cap_rows: Vec<Vec<(uavrelay::lpcore::VarId, f64)>> = vec![Vec::new(); ng.edges.len()];
    let mut ys = Vec::new();
    for (k, c) in dg.commodities.iter().enumerate() {
        let y = lp.add_variable(format!("y{k}"), 0.0, c.demand, 1.0).unwrap();
        ys.push(y);
        let mut balance: Vec<Vec<(uavrelay::lpcore::VarId, f64)>> = vec![Vec::new(); m + x.len()];
        for (e, edge) in ng.edges.iter().enumerate() {
            if !(usable(edge.from) && usable(edge.to)) {
                continue;
            }
            let f = lp.add_variable(format!("f{k}_{e}"), 0.0, f64::INFINITY, 0.0).unwrap();
            balance[edge.from].push((f, 1.0));
            balance[edge.to].push((f, -1.0));
            cap_rows[e].push((f, 1.0));
        }
        // out - in = TD - y at the source, y - TD at the sink
        for (u, mut row) in balance.into_iter().enumerate() {
            let rhs = if u == c.src {
                row.push((y, 1.0));
                c.demand
            } else if u == c.dst {
                row.push((y, -1.0));
                -c.demand
            } else {
                0.0
            };
            if !row.is_empty() {
                lp.add_constraint(format!("b{k}_{u}"), row, Relation::Eq, rhs).unwrap();
            }
        }
    }
    for (e, row) in cap_rows.into_iter().enumerate() {
        if !row.is_empty() {
            lp.add_constraint(format!("c{e}"), row, Relation::Le, ng.edges[e].capacity).unwrap();
        }
    }
    let sol = solve_lp(&lp).ok()?;
    sol.is_optimal().then(|| ys.iter().map(|&y| sol.value(y)).sum())
}

/// Exhaustive optimum over every placement with at most `n_max` UAVs that
/// keeps a placed site within reach of each previously occupied site.
pub fn enumerate(ng: &NetworkGraph, dg: &DemandGraph, cfg: &SolveConfig, prev: Option<&[bool]>) -> Option<OracleBest> {
    let n = ng.sites.len();
    assert!(n <= 16, "enumeration over {n} sites");
    let total: f64 = dg.commodities.iter().map(|c| c.demand).sum();
    let w_x = if cfg.n_max > 0 { cfg.phi / cfg.n_max as f64 } else { 0.0 };
    let w_y = if total > 0.0 { (1.0 - cfg.phi) / total } else { 0.0 };
    let mobility = cfg.mobility_enabled && prev.is_some();
    let mut best: Option<OracleBest> = None;
    for mask in 0u32..(1 << n) {
        let count = mask.count_ones() as usize;
        if count > cfg.n_max {
            continue;
        }
        let x: Vec<bool> = (0..n).map(|s| mask >> s & 1 == 1).collect();
        let mut z = 0.0;
        if mobility {
            let p = prev.unwrap();
            let served = (0..n)
                .filter(|&i| p[i])
                .all(|i| (0..n).any(|j| x[j] && ng.sites[i].dist(&ng.sites[j]) <= cfg.vmax_times_dt));
            if !served {
                continue;
            }
            if x != p {
                z = 1.0;
            }
        }
        let Some(y) = routed_unsupported(ng, dg, &x) else { continue };
        let obj = w_x * count as f64 + w_y * y + if mobility { cfg.alpha * z } else { 0.0 };
        if best.as_ref().is_none_or(|b| obj < b.objective - 1e-12) {
            let frac = if total > 0.0 { (total - y) / total } else { 1.0 };
            best = Some(OracleBest { objective: obj, x, unsupported: y, supported_fraction: frac });
        }
    }
    best
}
