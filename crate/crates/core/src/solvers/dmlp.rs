use std::time::Instant;

use super::{decision_from, DecisionStatus, PlacementDecision, SolveError, SolverKind, INTEGRALITY_TOL};
use crate::lpcore::{solve_with, LpSolution, SolveOptions};
use crate::netgraph::{DemandGraph, NetworkGraph};
use crate::uprmodel::{build_full, PrevPlacement, SolveConfig};

/// First index attaining the maximum of `value` over `candidates`.
fn argmax(candidates: impl IntoIterator<Item = usize>, value: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for c in candidates {
        let v = value(c);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((c, v));
        }
    }
    best.map(|(c, _)| c)
}

/// Iterative LP rounding: solve the relaxation, pin the most promising site
/// to 1, re-solve, until the next pick is (numerically) zero, the UAV budget
/// is used up, or every site is pinned.
///
/// A pick is made among the best reachable sites of previously occupied
/// locations whose reach set holds no pinned site yet; only when every such
/// location is served does the pick range over all unpinned sites.
pub fn solve_dmlp(
    ng: &NetworkGraph,
    dg: &DemandGraph,
    cfg: &SolveConfig,
    prev: &PrevPlacement,
) -> Result<PlacementDecision, SolveError> {
    let start = Instant::now();
    let (mut model, vars) = build_full(ng, dg, cfg, Some(prev))?;
    let n = vars.x.len();
    let solve = |model: &_, sol: Option<&LpSolution>| {
        solve_with(model, &SolveOptions { warm_start: sol.and_then(|s| s.basis.as_ref()), ..Default::default() })
    };

    let mut sol = solve(&model, None)?;
    let mut lp_calls = 1;
    if !sol.is_optimal() {
        return Err(SolveError::Infeasible);
    }
    let mut trace = vec![sol.objective];
    let mut fixed = vec![false; n];
    let mut n_fixed = 0usize;
    let mut status = DecisionStatus::Complete;

    while n_fixed < cfg.n_max && n_fixed < n {
        let xv = |s: usize| sol.value(vars.x[s]);
        let reach_ok = cfg.mobility_enabled;
        let s_set: Vec<usize> = if reach_ok {
            prev.occupied()
                .filter(|&v| !prev.reach_sets[v].iter().any(|&j| fixed[j]))
                .filter_map(|v| argmax(prev.reach_sets[v].iter().copied(), xv))
                .collect()
        } else {
            Vec::new()
        };
        let pick = if s_set.is_empty() {
            argmax((0..n).filter(|&s| !fixed[s]), xv)
        } else {
            argmax(s_set.iter().copied(), xv)
        };
        let Some(u) = pick else { break };
        if xv(u) <= INTEGRALITY_TOL {
            break;
        }
        model.set_bounds(vars.x[u], 1.0, 1.0)?;
        let next = solve(&model, Some(&sol))?;
        lp_calls += 1;
        if !next.is_optimal() {
            status = DecisionStatus::StoppedInfeasible;
            model.set_bounds(vars.x[u], 0.0, 1.0)?;
            break;
        }
        fixed[u] = true;
        n_fixed += 1;
        trace.push(next.objective);
        sol = next;
    }

    let mut d = decision_from(&sol, &vars, fixed, cfg, dg, Some(prev), SolverKind::Dmlp, status);
    d.lp_calls = lp_calls;
    d.lp_objectives = trace;
    d.wall_time = start.elapsed().as_secs_f64();
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::{build_demand_graph, build_network_graph, CandidateGrid, CapacityModel};
    use crate::radio::{CoverageRadii, PropagationParams};
    use crate::scenario::{Point, Snapshot};
    use crate::solvers::solve_milp;

    fn instance(sites: Vec<Point>, chs: Vec<Point>, td: Vec<Vec<f64>>) -> (NetworkGraph, DemandGraph) {
        let snap = Snapshot { t: 0, ch_positions: chs, td, motion: vec![] };
        let grid = CandidateGrid { rows: 1, cols: sites.len(), sites };
        let radii = CoverageRadii { r1_a2g: 2214.0, r2_a2a: 3774.0, loss_budget_a2g: 110.0, loss_budget_a2a: 110.0 };
        let ng = build_network_graph(&snap, &grid, &radii, &CapacityModel::default(), &PropagationParams::default()).unwrap();
        (ng, build_demand_graph(&snap))
    }

    #[test]
    fn single_site_matches_milp() {
        let (ng, dg) = instance(
            vec![Point::new(1000.0, 0.0)],
            vec![Point::new(0.0, 0.0), Point::new(2000.0, 0.0)],
            vec![vec![0.0, 0.2], vec![0.0, 0.0]],
        );
        let cfg = SolveConfig { n_max: 3, ..Default::default() };
        let prev = PrevPlacement::empty(&ng.sites, cfg.vmax_times_dt);
        let a = solve_dmlp(&ng, &dg, &cfg, &prev).unwrap();
        let b = solve_milp(&ng, &dg, &cfg, Some(&prev)).unwrap();
        assert_eq!(a.x, b.x);
        assert!((a.objective - b.objective).abs() < 1e-9);
        assert!(a.lp_calls <= cfg.n_max + 1);
    }

    #[test]
    fn no_demand_stops_after_one_call() {
        let (ng, dg) = instance(
            vec![Point::new(1000.0, 0.0), Point::new(2000.0, 0.0)],
            vec![Point::new(0.0, 0.0), Point::new(2000.0, 0.0)],
            vec![vec![0.0; 2]; 2],
        );
        let cfg = SolveConfig::default();
        let d = solve_dmlp(&ng, &dg, &cfg, &PrevPlacement::empty(&ng.sites, 1375.0)).unwrap();
        assert_eq!(d.lp_calls, 1);
        assert_eq!(d.uav_count(), 0);
    }

    #[test]
    fn previous_sites_keep_coverage() {
        let sites: Vec<Point> = (0..5).map(|i| Point::new(1000.0 * i as f64, 1000.0)).collect();
        let (ng, dg) = instance(sites, vec![Point::new(0.0, 0.0), Point::new(4000.0, 0.0)], vec![vec![0.0, 0.2], vec![0.0, 0.0]]);
        let cfg = SolveConfig { n_max: 4, ..Default::default() };
        let prev = PrevPlacement::new(vec![false, false, true, false, false], &ng.sites, 1375.0).unwrap();
        let d = solve_dmlp(&ng, &dg, &cfg, &prev).unwrap();
        assert!(d.x[1] || d.x[2] || d.x[3]);
        assert!(d.lp_objectives.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        assert!(d.lp_calls <= cfg.n_max + 1);
    }
}
