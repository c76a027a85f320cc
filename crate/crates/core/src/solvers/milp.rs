use std::time::Instant;

use super::{decision_from, DecisionStatus, PlacementDecision, SolveError, SolverKind, INTEGRALITY_TOL};
use crate::lpcore::{solve_with, Basis, LpModel, LpSolution, SolveOptions};
use crate::netgraph::{DemandGraph, NetworkGraph};
use crate::uprmodel::{build_full, PrevPlacement, SolveConfig, UprVariables};

/// Slack below the incumbent a node bound must reach to be explored.
const PRUNE_TOL: f64 = 1e-9;

struct Node {
    /// `(site, value)` pairs fixed along the path from the root.
    fixings: Vec<(usize, bool)>,
    bound: f64,
    basis: Option<Basis>,
}

fn apply_fixings(model: &mut LpModel, vars: &UprVariables, fixings: &[(usize, bool)]) {
    for &v in &vars.x {
        model.set_bounds(v, 0.0, 1.0).expect("unit bounds");
    }
    for &(s, val) in fixings {
        let b = if val { 1.0 } else { 0.0 };
        model.set_bounds(vars.x[s], b, b).expect("binary fix");
    }
}

/// Site whose LP value is closest to 1/2 among the fractional ones; ties go
/// to the lowest index.
fn most_fractional(sol: &LpSolution, vars: &UprVariables) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (s, &v) in vars.x.iter().enumerate() {
        let val = sol.value(v);
        if val.min(1.0 - val) > INTEGRALITY_TOL {
            let score = (val - 0.5).abs();
            if best.is_none_or(|(_, b)| score < b) {
                best = Some((s, score));
            }
        }
    }
    best.map(|(s, _)| s)
}

fn solve_node(model: &LpModel, basis: Option<&Basis>) -> Result<LpSolution, SolveError> {
    Ok(solve_with(model, &SolveOptions { warm_start: basis, ..Default::default() })?)
}

/// Globally optimal binary placement by depth-first branch and bound on the
/// most fractional placement column, up branch first, pruning nodes whose
/// LP bound cannot beat the incumbent.
pub fn solve_milp(
    ng: &NetworkGraph,
    dg: &DemandGraph,
    cfg: &SolveConfig,
    prev: Option<&PrevPlacement>,
) -> Result<PlacementDecision, SolveError> {
    let start = Instant::now();
    let (mut model, vars) = build_full(ng, dg, cfg, prev)?;
    let mut lp_calls = 0usize;
    let mut nodes = 0u64;
    let mut incumbent: Option<(f64, Vec<bool>, LpSolution)> = None;
    let mut stack = vec![Node { fixings: Vec::new(), bound: f64::NEG_INFINITY, basis: None }];
    let mut hit_limit = false;

    while let Some(node) = stack.pop() {
        if let Some((inc, _, _)) = &incumbent {
            if node.bound >= inc - PRUNE_TOL {
                continue;
            }
        }
        if nodes >= cfg.node_limit {
            hit_limit = true;
            break;
        }
        nodes += 1;
        apply_fixings(&mut model, &vars, &node.fixings);
        let sol = solve_node(&model, node.basis.as_ref())?;
        lp_calls += 1;
        if !sol.is_optimal() {
            continue;
        }
        if let Some((inc, _, _)) = &incumbent {
            if sol.objective >= inc - PRUNE_TOL {
                continue;
            }
        }
        match most_fractional(&sol, &vars) {
            None => {
                let x: Vec<bool> = vars.x.iter().map(|&v| sol.value(v) > 0.5).collect();
                let exact = vars.x.iter().all(|&v| {
                    let val = sol.value(v);
                    val == 0.0 || val == 1.0
                });
                let sol = if exact {
                    sol
                } else {
                    // pin the rounded placement so flows respect it exactly
                    let fix: Vec<(usize, bool)> = x.iter().copied().enumerate().collect();
                    apply_fixings(&mut model, &vars, &fix);
                    let polished = solve_node(&model, sol.basis.as_ref())?;
                    lp_calls += 1;
                    if polished.is_optimal() {
                        polished
                    } else {
                        sol
                    }
                };
                if incumbent.as_ref().is_none_or(|(inc, _, _)| sol.objective < *inc) {
                    incumbent = Some((sol.objective, x, sol));
                }
            }
            Some(s) => {
                let mut down = node.fixings.clone();
                down.push((s, false));
                let mut up = node.fixings;
                up.push((s, true));
                stack.push(Node { fixings: down, bound: sol.objective, basis: sol.basis.clone() });
                stack.push(Node { fixings: up, bound: sol.objective, basis: sol.basis });
            }
        }
    }

    let Some((_, x, sol)) = incumbent else {
        return Err(if hit_limit { SolveError::ResourceLimit(cfg.node_limit) } else { SolveError::Infeasible });
    };
    let status = if hit_limit { DecisionStatus::NodeLimit } else { DecisionStatus::Complete };
    let mut d = decision_from(&sol, &vars, x, cfg, dg, prev, SolverKind::Milp, status);
    d.lp_calls = lp_calls;
    d.wall_time = start.elapsed().as_secs_f64();
    Ok(d)
}

/// Routes traffic over a given placement: one LP with every placement
/// column pinned.
pub fn solve_with_fixed_placement(
    ng: &NetworkGraph,
    dg: &DemandGraph,
    cfg: &SolveConfig,
    prev: Option<&PrevPlacement>,
    x: &[bool],
) -> Result<PlacementDecision, SolveError> {
    let start = Instant::now();
    let (mut model, vars) = build_full(ng, dg, cfg, prev)?;
    if x.len() != vars.x.len() {
        return Err(crate::uprmodel::ModelError::ReachMismatch { expected: vars.x.len(), got: x.len() }.into());
    }
    let fix: Vec<(usize, bool)> = x.iter().copied().enumerate().collect();
    apply_fixings(&mut model, &vars, &fix);
    let sol = solve_node(&model, None)?;
    if !sol.is_optimal() {
        return Err(SolveError::Infeasible);
    }
    let mut d = decision_from(&sol, &vars, x.to_vec(), cfg, dg, prev, SolverKind::Static, DecisionStatus::Complete);
    d.lp_calls = 1;
    d.wall_time = start.elapsed().as_secs_f64();
    Ok(d)
}
