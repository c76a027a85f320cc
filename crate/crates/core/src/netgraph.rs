//! Candidate-site grid, demand graph and capacitated network graph.
//!
//! Node numbering: CHs first (`0..M`, in cluster order), then sites
//! (`M..M+S`, in grid order).

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radio::{a2a_path_loss, a2g_path_loss, CoverageRadii, PropagationParams, RadioError};
use crate::scenario::{Point, Region, Snapshot};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("grid dimensions must be positive, got {rows} x {cols}")]
    ZeroGrid { rows: usize, cols: usize },
    #[error("invalid capacity model: {0}")]
    InvalidCapacity(String),
    #[error("coverage radii must be positive")]
    InvalidRadii,
    #[error(transparent)]
    Radio(#[from] RadioError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateGrid {
    pub sites: Vec<Point>,
    pub rows: usize,
    pub cols: usize,
}

impl CandidateGrid {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Row-major lattice with half-cell margins: site `(r, c)` sits at
/// `((c + 0.5) * w / cols, (r + 0.5) * h / rows)`.
pub fn build_grid(region: &Region, rows: usize, cols: usize) -> Result<CandidateGrid, GraphError> {
    if rows == 0 || cols == 0 {
        return Err(GraphError::ZeroGrid { rows, cols });
    }
    let dx = region.width / cols as f64;
    let dy = region.height / rows as f64;
    let sites = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| Point::new((c as f64 + 0.5) * dx, (r as f64 + 0.5) * dy)))
        .collect();
    Ok(CandidateGrid { sites, rows, cols })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Commodity {
    /// Source CH, 0-based.
    pub src: usize,
    /// Destination CH, 0-based.
    pub dst: usize,
    /// Mbps, strictly positive.
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandGraph {
    pub num_ch: usize,
    pub commodities: Vec<Commodity>,
}

impl DemandGraph {
    pub fn total_demand(&self) -> f64 {
        self.commodities.iter().map(|c| c.demand).sum()
    }
}

/// One commodity per positive off-diagonal TD entry, row-major.
pub fn build_demand_graph(snapshot: &Snapshot) -> DemandGraph {
    let m = snapshot.td.len();
    let mut commodities = Vec::new();
    for (i, row) in snapshot.td.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j && v > 0.0 {
                commodities.push(Commodity { src: i, dst: j, demand: v });
            }
        }
    }
    DemandGraph { num_ch: m, commodities }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkKind {
    /// CH to site.
    #[serde(rename = "A2G-up")]
    A2gUp,
    /// Site to CH.
    #[serde(rename = "A2G-down")]
    A2gDown,
    #[serde(rename = "A2A")]
    A2a,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::A2gUp => "A2G-up",
            LinkKind::A2gDown => "A2G-down",
            LinkKind::A2a => "A2A",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: LinkKind,
    pub capacity: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMode {
    #[default]
    Constant,
    Shannon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CapacityModel {
    pub mode: CapacityMode,
    pub cap_a2g: f64,
    pub cap_a2a: f64,
    pub bandwidth_hz: f64,
}

impl Default for CapacityModel {
    fn default() -> Self {
        CapacityModel { mode: CapacityMode::Constant, cap_a2g: 5.0, cap_a2a: 5.0, bandwidth_hz: 1e6 }
    }
}

impl CapacityModel {
    pub fn validate(&self) -> Result<(), GraphError> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        match self.mode {
            CapacityMode::Constant if !(ok(self.cap_a2g) && ok(self.cap_a2a)) => {
                Err(GraphError::InvalidCapacity(format!("capacities {} / {}", self.cap_a2g, self.cap_a2a)))
            }
            CapacityMode::Shannon if !ok(self.bandwidth_hz) => {
                Err(GraphError::InvalidCapacity(format!("bandwidth {}", self.bandwidth_hz)))
            }
            _ => Ok(()),
        }
    }
}

/// Shannon rate in Mbps with `SNR_dB = snr_min + budget - loss`, i.e. the
/// SNR sits exactly at threshold where the loss meets the budget.
pub fn shannon_capacity(params: &PropagationParams, bandwidth_hz: f64, budget_db: f64, loss_db: f64) -> f64 {
    let snr = 10f64.powf((params.snr_min + budget_db - loss_db) / 10.0);
    bandwidth_hz * (1.0 + snr).log2() / 1e6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGraph {
    pub ch_positions: Vec<Point>,
    pub sites: Vec<Point>,
    pub edges: Vec<Edge>,
    /// Edge indices leaving each node.
    pub out_edges: Vec<Vec<usize>>,
    /// Edge indices entering each node.
    pub in_edges: Vec<Vec<usize>>,
}

impl NetworkGraph {
    pub fn num_ch(&self) -> usize {
        self.ch_positions.len()
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_ch() + self.num_sites()
    }

    pub fn site_node(&self, site: usize) -> usize {
        self.num_ch() + site
    }

    /// Site index of `node`, or `None` for a CH.
    pub fn node_site(&self, node: usize) -> Option<usize> {
        node.checked_sub(self.num_ch())
    }

    pub fn count_kind(&self, kind: LinkKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }
}

/// Edges: for each CH (in order) and each site within `R1` horizontally,
/// the up link then the down link; then for each site pair `s < t` within
/// `R2`, `s -> t` then `t -> s`. Thresholds are inclusive.
pub fn build_network_graph(
    snapshot: &Snapshot,
    grid: &CandidateGrid,
    radii: &CoverageRadii,
    capmodel: &CapacityModel,
    params: &PropagationParams,
) -> Result<NetworkGraph, GraphError> {
    if !(radii.r1_a2g > 0.0 && radii.r2_a2a > 0.0) {
        return Err(GraphError::InvalidRadii);
    }
    capmodel.validate()?;
    let m = snapshot.ch_positions.len();
    let cap = |kind: LinkKind, d: f64| -> Result<f64, GraphError> {
        Ok(match (capmodel.mode, kind) {
            (CapacityMode::Constant, LinkKind::A2a) => capmodel.cap_a2a,
            (CapacityMode::Constant, _) => capmodel.cap_a2g,
            (CapacityMode::Shannon, LinkKind::A2a) => {
                shannon_capacity(params, capmodel.bandwidth_hz, radii.loss_budget_a2a, a2a_path_loss(params, d)?)
            }
            (CapacityMode::Shannon, _) => {
                shannon_capacity(params, capmodel.bandwidth_hz, radii.loss_budget_a2g, a2g_path_loss(params, d)?)
            }
        })
    };
    let mut edges = Vec::new();
    for (i, ch) in snapshot.ch_positions.iter().enumerate() {
        for (s, site) in grid.sites.iter().enumerate() {
            let d = ch.dist(site);
            if d <= radii.r1_a2g {
                let c = cap(LinkKind::A2gUp, d)?;
                edges.push(Edge { from: i, to: m + s, kind: LinkKind::A2gUp, capacity: c, distance: d });
                edges.push(Edge { from: m + s, to: i, kind: LinkKind::A2gDown, capacity: c, distance: d });
            }
        }
    }
    for s in 0..grid.sites.len() {
        for t in s + 1..grid.sites.len() {
            let d = grid.sites[s].dist(&grid.sites[t]);
            if d <= radii.r2_a2a {
                let c = cap(LinkKind::A2a, d)?;
                edges.push(Edge { from: m + s, to: m + t, kind: LinkKind::A2a, capacity: c, distance: d });
                edges.push(Edge { from: m + t, to: m + s, kind: LinkKind::A2a, capacity: c, distance: d });
            }
        }
    }
    let n = m + grid.sites.len();
    let mut out_edges = vec![Vec::new(); n];
    let mut in_edges = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        out_edges[e.from].push(k);
        in_edges[e.to].push(k);
    }
    Ok(NetworkGraph { ch_positions: snapshot.ch_positions.clone(), sites: grid.sites.clone(), edges, out_edges, in_edges })
}

/// Edge list as CSV: `u,v,kind,capacity_mbps,distance_m`.
pub fn write_edges_csv<W: Write>(graph: &NetworkGraph, out: W) -> Result<(), GraphError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["u", "v", "kind", "capacity_mbps", "distance_m"])?;
    for e in &graph.edges {
        w.write_record([
            e.from.to_string(),
            e.to.to_string(),
            e.kind.as_str().to_string(),
            e.capacity.to_string(),
            e.distance.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
