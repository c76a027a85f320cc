//! Placement-and-routing models over a network graph and a demand graph.
//!
//! Columns: `x_s` per site, `f_k_e` per (commodity, edge), `y_k` per
//! commodity, and `z` when relocation is modelled. Placement columns are
//! always emitted relaxed to `[0, 1]`; integrality belongs to the solvers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpcore::{LpError, LpModel, Relation, VarId};
use crate::netgraph::{DemandGraph, NetworkGraph};
use crate::scenario::Point;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("inconsistent graphs: {0}")]
    Inconsistent(String),
    #[error("invalid solve configuration: {0}")]
    InvalidConfig(String),
    #[error("previous placement covers {got} sites, model has {expected}")]
    ReachMismatch { expected: usize, got: usize },
    #[error("site {0} does not exist")]
    UnknownSite(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    pub n_max: usize,
    pub phi: f64,
    pub alpha: f64,
    pub mobility_enabled: bool,
    /// UAV reach per snapshot, m.
    pub vmax_times_dt: f64,
    /// Branch-and-bound node budget.
    pub node_limit: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { n_max: 10, phi: 0.1, alpha: 0.05, mobility_enabled: true, vmax_times_dt: 55.0 * 25.0, node_limit: 1_000_000 }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(ModelError::InvalidConfig(format!("phi {} outside [0, 1]", self.phi)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(ModelError::InvalidConfig(format!("alpha {}", self.alpha)));
        }
        if !(self.vmax_times_dt >= 0.0 && self.vmax_times_dt.is_finite()) {
            return Err(ModelError::InvalidConfig(format!("reach {}", self.vmax_times_dt)));
        }
        Ok(())
    }

    /// Objective weight of one placed UAV. With `n_max = 0` no UAV can be
    /// placed and the weight only needs to be finite.
    pub fn placement_weight(&self) -> f64 {
        if self.n_max == 0 {
            self.phi
        } else {
            self.phi / self.n_max as f64
        }
    }

    /// Objective weight of one Mbps of unsupported traffic; zero when there
    /// is no demand at all.
    pub fn unsupported_weight(&self, total_demand: f64) -> f64 {
        if total_demand > 0.0 {
            (1.0 - self.phi) / total_demand
        } else {
            0.0
        }
    }
}

/// Previous placement and the sites reachable from each site in one
/// snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevPlacement {
    pub x_prev: Vec<bool>,
    pub reach_sets: Vec<Vec<usize>>,
}

impl PrevPlacement {
    /// `reach_sets[i] = { j : |s_i - s_j| <= reach }`, ascending.
    pub fn new(x_prev: Vec<bool>, sites: &[Point], reach: f64) -> Result<Self, ModelError> {
        if x_prev.len() != sites.len() {
            return Err(ModelError::ReachMismatch { expected: sites.len(), got: x_prev.len() });
        }
        let reach_sets = sites
            .iter()
            .map(|a| (0..sites.len()).filter(|&j| a.dist(&sites[j]) <= reach).collect())
            .collect();
        Ok(PrevPlacement { x_prev, reach_sets })
    }

    /// First-snapshot placement: no UAV deployed yet.
    pub fn empty(sites: &[Point], reach: f64) -> Self {
        Self::new(vec![false; sites.len()], sites, reach).expect("lengths agree")
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.x_prev.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UprVariables {
    pub x: Vec<VarId>,
    /// `f[k][e]`.
    pub f: Vec<Vec<VarId>>,
    pub y: Vec<VarId>,
    pub z: Option<VarId>,
}

impl UprVariables {
    pub fn num_columns(&self) -> usize {
        self.x.len() + self.f.iter().map(Vec::len).sum::<usize>() + self.y.len() + usize::from(self.z.is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStats {
    pub rows: usize,
    pub cols: usize,
    pub nonzeros: usize,
}

pub fn model_stats(model: &LpModel) -> ModelStats {
    ModelStats { rows: model.num_rows(), cols: model.num_vars(), nonzeros: model.num_nonzeros() }
}

/// `(rows, cols)` of [`build_upr`] output, from graph sizes alone.
pub fn expected_upr_size(ng: &NetworkGraph, dg: &DemandGraph) -> (usize, usize) {
    let k = dg.commodities.len();
    let e = ng.edges.len();
    let site_endpoints: usize = ng
        .edges
        .iter()
        .map(|ed| usize::from(ng.node_site(ed.from).is_some()) + usize::from(ng.node_site(ed.to).is_some()))
        .sum();
    let rows = k * site_endpoints + 1 + k * ng.num_nodes() + e;
    let cols = ng.num_sites() + e * k + k;
    (rows, cols)
}

fn check_consistent(ng: &NetworkGraph, dg: &DemandGraph) -> Result<(), ModelError> {
    if dg.num_ch != ng.num_ch() {
        return Err(ModelError::Inconsistent(format!("{} CHs in demand graph, {} in network graph", dg.num_ch, ng.num_ch())));
    }
    for c in &dg.commodities {
        if c.src >= ng.num_ch() || c.dst >= ng.num_ch() || c.src == c.dst {
            return Err(ModelError::Inconsistent(format!("commodity {} -> {} is not a CH pair", c.src, c.dst)));
        }
        if !(c.demand > 0.0 && c.demand.is_finite()) {
            return Err(ModelError::Inconsistent(format!("commodity {} -> {} has demand {}", c.src, c.dst, c.demand)));
        }
    }
    if ng.edges.iter().any(|e| ng.node_site(e.from).is_none() && ng.node_site(e.to).is_none()) {
        return Err(ModelError::Inconsistent("CH-to-CH edge".into()));
    }
    Ok(())
}

/// The relaxed placement-and-routing model without mobility terms.
pub fn build_upr(ng: &NetworkGraph, dg: &DemandGraph, cfg: &SolveConfig) -> Result<(LpModel, UprVariables), ModelError> {
    cfg.validate()?;
    check_consistent(ng, dg)?;
    let total = dg.total_demand();
    let wx = cfg.placement_weight();
    let wy = cfg.unsupported_weight(total);
    let mut m = LpModel::new();

    let x: Vec<VarId> = (0..ng.num_sites()).map(|s| m.add_variable(format!("x_{s}"), 0.0, 1.0, wx)).collect::<Result<_, _>>()?;
    let mut f = Vec::with_capacity(dg.commodities.len());
    for k in 0..dg.commodities.len() {
        let col: Vec<VarId> = (0..ng.edges.len())
            .map(|e| m.add_variable(format!("f_{k}_{e}"), 0.0, f64::INFINITY, 0.0))
            .collect::<Result<_, _>>()?;
        f.push(col);
    }
    let y: Vec<VarId> = dg
        .commodities
        .iter()
        .enumerate()
        .map(|(k, c)| m.add_variable(format!("y_{k}"), 0.0, c.demand, wy))
        .collect::<Result<_, _>>()?;

    // flow only through placed sites, at both ends of A2A links
    for (k, fk) in f.iter().enumerate() {
        for (e, edge) in ng.edges.iter().enumerate() {
            if let Some(s) = ng.node_site(edge.from) {
                m.add_constraint(format!("gate_tail_{k}_{e}"), vec![(fk[e], 1.0), (x[s], -edge.capacity)], Relation::Le, 0.0)?;
            }
            if let Some(s) = ng.node_site(edge.to) {
                m.add_constraint(format!("gate_head_{k}_{e}"), vec![(fk[e], 1.0), (x[s], -edge.capacity)], Relation::Le, 0.0)?;
            }
        }
    }

    m.add_constraint("uav_budget", x.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, cfg.n_max as f64)?;

    for (k, c) in dg.commodities.iter().enumerate() {
        for u in 0..ng.num_nodes() {
            let mut coeffs: Vec<(VarId, f64)> = ng.out_edges[u].iter().map(|&e| (f[k][e], 1.0)).collect();
            coeffs.extend(ng.in_edges[u].iter().map(|&e| (f[k][e], -1.0)));
            let rhs = if u == c.src {
                coeffs.push((y[k], 1.0));
                c.demand
            } else if u == c.dst {
                coeffs.push((y[k], -1.0));
                -c.demand
            } else {
                0.0
            };
            m.add_constraint(format!("flow_{k}_{u}"), coeffs, Relation::Eq, rhs)?;
        }
    }

    for (e, edge) in ng.edges.iter().enumerate() {
        let coeffs = f.iter().map(|col| (col[e], 1.0)).collect();
        m.add_constraint(format!("cap_{e}"), coeffs, Relation::Le, edge.capacity)?;
    }

    Ok((m, UprVariables { x, f, y, z: None }))
}

/// Adds reachability rows for previously occupied sites and the relocation
/// indicator `z >= |x_u - x_prev_u|` with cost `alpha`.
pub fn add_mobility(
    mut model: LpModel,
    vars: &UprVariables,
    prev: &PrevPlacement,
    cfg: &SolveConfig,
) -> Result<(LpModel, UprVariables), ModelError> {
    let n = vars.x.len();
    if prev.x_prev.len() != n || prev.reach_sets.len() != n {
        return Err(ModelError::ReachMismatch { expected: n, got: prev.x_prev.len().min(prev.reach_sets.len()) });
    }
    if let Some(&j) = prev.reach_sets.iter().flatten().find(|&&j| j >= n) {
        return Err(ModelError::UnknownSite(j));
    }
    if vars.z.is_some() {
        return Err(ModelError::Inconsistent("mobility terms already present".into()));
    }
    let z = model.add_variable("z", 0.0, f64::INFINITY, cfg.alpha)?;
    for i in prev.occupied() {
        let coeffs = prev.reach_sets[i].iter().map(|&j| (vars.x[j], 1.0)).collect();
        model.add_constraint(format!("reach_{i}"), coeffs, Relation::Ge, 1.0)?;
    }
    for (u, &xu) in vars.x.iter().enumerate() {
        let p = if prev.x_prev[u] { 1.0 } else { 0.0 };
        model.add_constraint(format!("move_up_{u}"), vec![(xu, 1.0), (z, -1.0)], Relation::Le, p)?;
        model.add_constraint(format!("move_down_{u}"), vec![(xu, -1.0), (z, -1.0)], Relation::Le, -p)?;
    }
    let mut vars = vars.clone();
    vars.z = Some(z);
    Ok((model, vars))
}

/// Base model plus mobility terms when enabled.
pub fn build_full(
    ng: &NetworkGraph,
    dg: &DemandGraph,
    cfg: &SolveConfig,
    prev: Option<&PrevPlacement>,
) -> Result<(LpModel, UprVariables), ModelError> {
    let (model, vars) = build_upr(ng, dg, cfg)?;
    match prev {
        Some(p) if cfg.mobility_enabled => add_mobility(model, &vars, p, cfg),
        _ => Ok((model, vars)),
    }
}

/// The relaxation with `x_u` pinned to 1 for every `u` in `fixed`.
pub fn build_reduced(model: &LpModel, vars: &UprVariables, fixed: &[usize]) -> Result<LpModel, ModelError> {
    let mut out = model.clone();
    for &u in fixed {
        let id = *vars.x.get(u).ok_or(ModelError::UnknownSite(u))?;
        out.set_bounds(id, 1.0, 1.0)?;
    }
    Ok(out)
}
