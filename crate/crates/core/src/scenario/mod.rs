//! Ground-network scenarios: clustered cluster heads, UE-level demand,
//! inter-cluster aggregation and per-snapshot CH motion.

mod io;
mod mobility;

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radio::PropagationParams;
use crate::rng::{substream, Stream};

pub use io::{load_scenario, save_scenario, scenario_from_json, scenario_to_json, SCHEMA_VERSION};
pub use mobility::{advance_snapshot, initial_snapshot};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario configuration: {0}")]
    InvalidConfig(String),
    #[error("region {width} x {height} m cannot hold a cluster disc of radius {radius} m")]
    RegionTooSmall { width: f64, height: f64, radius: f64 },
    #[error("UE {0} does not belong to any cluster")]
    OrphanUe(usize),
    #[error("malformed scenario file: {0}")]
    Malformed(String),
    #[error("scenario schema mismatch: {0}")]
    Schema(String),
    #[error("unsupported scenario version {0}")]
    UnsupportedVersion(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub width: f64,
    pub height: f64,
}

impl Default for Region {
    fn default() -> Self {
        Region { width: 10_000.0, height: 10_000.0 }
    }
}

impl Region {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err(ScenarioError::InvalidConfig(format!("region {} x {}", self.width, self.height)));
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        Point::new(rng.random_range(0.0..=self.width), rng.random_range(0.0..=self.height))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// 1-based.
    pub id: usize,
    pub ch: Point,
    pub ues: Vec<Point>,
    pub radius: f64,
}

/// How Bernoulli flows are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandPairing {
    /// Every ordered inter-cluster UE pair is a candidate flow.
    #[default]
    UePair,
    /// Every ordered CH pair is a candidate flow, carried by each cluster's
    /// first UE.
    ChPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrafficGenConfig {
    pub flow_prob: f64,
    pub demand_levels: Vec<f64>,
    pub rng_seed: u64,
    pub pairing: DemandPairing,
}

impl Default for TrafficGenConfig {
    fn default() -> Self {
        TrafficGenConfig { flow_prob: 0.04, demand_levels: vec![0.2, 0.4, 0.6], rng_seed: 0, pairing: DemandPairing::UePair }
    }
}

impl TrafficGenConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(0.0..=1.0).contains(&self.flow_prob) {
            return Err(ScenarioError::InvalidConfig(format!("flow probability {}", self.flow_prob)));
        }
        if self.demand_levels.is_empty() || self.demand_levels.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(ScenarioError::InvalidConfig("demand levels must be non-empty and positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MobilityConfig {
    pub speed_min: f64,
    pub speed_max: f64,
    pub snapshot_duration: f64,
    pub uav_vmax: f64,
    pub num_snapshots: usize,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        MobilityConfig { speed_min: 5.0, speed_max: 40.0, snapshot_duration: 25.0, uav_vmax: 55.0, num_snapshots: 20 }
    }
}

impl MobilityConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        // zero speeds are accepted as a frozen-world configuration
        if !(self.speed_min >= 0.0 && self.speed_min <= self.speed_max && self.speed_max.is_finite()) {
            return Err(ScenarioError::InvalidConfig(format!("speed range [{}, {}]", self.speed_min, self.speed_max)));
        }
        if !(self.snapshot_duration > 0.0 && self.snapshot_duration.is_finite()) {
            return Err(ScenarioError::InvalidConfig(format!("snapshot duration {}", self.snapshot_duration)));
        }
        if !(self.uav_vmax >= 0.0 && self.uav_vmax.is_finite()) {
            return Err(ScenarioError::InvalidConfig(format!("UAV speed {}", self.uav_vmax)));
        }
        Ok(())
    }

    /// Distance a UAV can cover in one snapshot.
    pub fn uav_reach(&self) -> f64 {
        self.uav_vmax * self.snapshot_duration
    }
}

/// Random-waypoint state of one CH.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Motion {
    pub waypoint: Point,
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: usize,
    pub ch_positions: Vec<Point>,
    /// Inter-cluster demand in Mbps, zero diagonal.
    pub td: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub motion: Vec<Motion>,
}

impl Snapshot {
    pub fn total_demand(&self) -> f64 {
        self.td.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandPair {
    pub src: usize,
    pub dst: usize,
    pub mbps: f64,
}

/// Sparse UE-to-UE demand, keyed by global UE index (clusters in order,
/// UEs in order within each cluster).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<DemandPair>", into = "Vec<DemandPair>")]
pub struct UeDemandMatrix {
    pub entries: BTreeMap<(usize, usize), f64>,
}

impl From<Vec<DemandPair>> for UeDemandMatrix {
    fn from(pairs: Vec<DemandPair>) -> Self {
        UeDemandMatrix { entries: pairs.into_iter().map(|p| ((p.src, p.dst), p.mbps)).collect() }
    }
}

impl From<UeDemandMatrix> for Vec<DemandPair> {
    fn from(d: UeDemandMatrix) -> Self {
        d.entries.into_iter().map(|((src, dst), mbps)| DemandPair { src, dst, mbps }).collect()
    }
}

impl UeDemandMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, src: usize, dst: usize, mbps: f64) {
        self.entries.insert((src, dst), mbps);
    }
}

/// Cluster index (0-based) of every global UE index.
pub fn ue_owners(clusters: &[Cluster]) -> Vec<usize> {
    clusters.iter().enumerate().flat_map(|(k, c)| std::iter::repeat_n(k, c.ues.len())).collect()
}

/// Places `m` clusters: parents uniform over the positions whose disc fits
/// in the region, Poisson(`density_mean`) UEs (at least one) uniform in the
/// disc, CH at the parent point.
pub fn generate_clusters(
    region: &Region,
    m: usize,
    density_mean: f64,
    radius: f64,
    seed: u64,
) -> Result<Vec<Cluster>, ScenarioError> {
    region.validate()?;
    if m == 0 {
        return Err(ScenarioError::InvalidConfig("at least one cluster is required".into()));
    }
    if !(radius >= 0.0 && radius.is_finite()) || !(density_mean >= 0.0 && density_mean.is_finite()) {
        return Err(ScenarioError::InvalidConfig(format!("radius {radius}, density {density_mean}")));
    }
    if 2.0 * radius >= region.width.min(region.height) {
        return Err(ScenarioError::RegionTooSmall { width: region.width, height: region.height, radius });
    }
    let poisson = if density_mean > 0.0 { Some(Poisson::new(density_mean).expect("positive mean")) } else { None };
    let mut rng = substream(seed, Stream::Clusters, 0);
    let mut clusters = Vec::with_capacity(m);
    for id in 1..=m {
        let ch = Point::new(
            rng.random_range(radius..=region.width - radius),
            rng.random_range(radius..=region.height - radius),
        );
        let count = poisson.map_or(1, |p| (p.sample(&mut rng) as usize).max(1));
        let ues = (0..count)
            .map(|_| {
                let rho = radius * rng.random::<f64>().sqrt();
                let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                Point::new(ch.x + rho * theta.cos(), ch.y + rho * theta.sin())
            })
            .collect();
        clusters.push(Cluster { id, ch, ues, radius });
    }
    Ok(clusters)
}

/// Bernoulli flows with uniformly drawn levels; intra-cluster pairs never
/// carry demand.
pub fn generate_demand(clusters: &[Cluster], cfg: &TrafficGenConfig) -> Result<UeDemandMatrix, ScenarioError> {
    generate_demand_at(clusters, cfg, 0)
}

/// Demand draw number `index` from the same seed, used when demand is
/// redrawn every snapshot.
pub fn generate_demand_at(
    clusters: &[Cluster],
    cfg: &TrafficGenConfig,
    index: u64,
) -> Result<UeDemandMatrix, ScenarioError> {
    cfg.validate()?;
    if clusters.iter().any(|c| c.ues.is_empty()) {
        return Err(ScenarioError::InvalidConfig("cluster without UEs".into()));
    }
    let mut rng = substream(cfg.rng_seed, Stream::Demand, index);
    let mut d = UeDemandMatrix::default();
    let draw = |rng: &mut rand_chacha::ChaCha8Rng, d: &mut UeDemandMatrix, u: usize, v: usize| {
        if rng.random_bool(cfg.flow_prob) {
            let level = cfg.demand_levels[rng.random_range(0..cfg.demand_levels.len())];
            d.insert(u, v, level);
        }
    };
    match cfg.pairing {
        DemandPairing::UePair => {
            let owner = ue_owners(clusters);
            for u in 0..owner.len() {
                for v in 0..owner.len() {
                    if owner[u] != owner[v] {
                        draw(&mut rng, &mut d, u, v);
                    }
                }
            }
        }
        DemandPairing::ChPair => {
            let mut first = Vec::with_capacity(clusters.len());
            let mut acc = 0;
            for c in clusters {
                first.push(acc);
                acc += c.ues.len();
            }
            for i in 0..clusters.len() {
                for j in 0..clusters.len() {
                    if i != j {
                        draw(&mut rng, &mut d, first[i], first[j]);
                    }
                }
            }
        }
    }
    Ok(d)
}

/// `TD[i][j] = sum of D[u][v]` over `u` in cluster `i`, `v` in cluster `j`.
pub fn aggregate_td(clusters: &[Cluster], d: &UeDemandMatrix) -> Result<Vec<Vec<f64>>, ScenarioError> {
    let owner = ue_owners(clusters);
    let m = clusters.len();
    let mut td = vec![vec![0.0; m]; m];
    for (&(u, v), &mbps) in &d.entries {
        let i = *owner.get(u).ok_or(ScenarioError::OrphanUe(u))?;
        let j = *owner.get(v).ok_or(ScenarioError::OrphanUe(v))?;
        if i != j {
            td[i][j] += mbps;
        }
    }
    Ok(td)
}

/// Everything needed to synthesize a scenario from one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerateConfig {
    pub region: Region,
    pub num_clusters: usize,
    pub density_mean: f64,
    pub cluster_radius: f64,
    pub traffic: TrafficGenConfig,
    pub mobility: MobilityConfig,
    pub redraw_demand_each_snapshot: bool,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            region: Region::default(),
            num_clusters: 4,
            density_mean: 10.0,
            cluster_radius: 1000.0,
            traffic: TrafficGenConfig::default(),
            mobility: MobilityConfig::default(),
            redraw_demand_each_snapshot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficRecord {
    #[serde(flatten)]
    pub config: TrafficGenConfig,
    pub pairs: UeDemandMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub version: u64,
    pub region: Region,
    pub propagation: PropagationParams,
    pub clusters: Vec<Cluster>,
    pub traffic: TrafficRecord,
    pub mobility: MobilityConfig,
    pub snapshots: Vec<Snapshot>,
}

impl Scenario {
    /// Structural checks shared by the generator and the loader.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::Schema(msg));
        self.region.validate().map_err(|e| ScenarioError::Schema(e.to_string()))?;
        let m = self.clusters.len();
        if m == 0 {
            return bad("no clusters".into());
        }
        for (k, c) in self.clusters.iter().enumerate() {
            if c.id != k + 1 {
                return bad(format!("cluster ids must be 1..{m} in order, found {} at position {k}", c.id));
            }
            if c.ues.is_empty() {
                return bad(format!("cluster {} has no UEs", c.id));
            }
            let tol = 1e-9 * c.radius.max(1.0);
            if c.ues.iter().any(|u| u.dist(&c.ch) > c.radius + tol) {
                return bad(format!("cluster {} has a UE outside its radius", c.id));
            }
        }
        let n_ues: usize = self.clusters.iter().map(|c| c.ues.len()).sum();
        if let Some((&(u, v), _)) = self.traffic.pairs.entries.iter().find(|(&(u, v), _)| u >= n_ues || v >= n_ues) {
            return bad(format!("demand pair ({u}, {v}) references an unknown UE"));
        }
        for (k, s) in self.snapshots.iter().enumerate() {
            if s.t != k {
                return bad(format!("snapshot {k} carries index {}", s.t));
            }
            if s.ch_positions.len() != m || s.td.len() != m || s.td.iter().any(|r| r.len() != m) {
                return bad(format!("snapshot {k} dimensions do not match {m} clusters"));
            }
            if !s.motion.is_empty() && s.motion.len() != m {
                return bad(format!("snapshot {k} motion state has wrong length"));
            }
            if s.ch_positions.iter().any(|p| !self.region.contains(p)) {
                return bad(format!("snapshot {k} has a CH outside the region"));
            }
            for (i, row) in s.td.iter().enumerate() {
                if row[i] != 0.0 || row.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
                    return bad(format!("snapshot {k} TD row {i} is invalid"));
                }
            }
        }
        Ok(())
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }
}

/// Clusters, one demand draw and `mobility.num_snapshots` snapshots, all
/// derived from `seed`.
pub fn generate_scenario(
    cfg: &GenerateConfig,
    propagation: &PropagationParams,
    seed: u64,
) -> Result<Scenario, ScenarioError> {
    cfg.mobility.validate()?;
    if cfg.mobility.num_snapshots == 0 {
        return Err(ScenarioError::InvalidConfig("at least one snapshot is required".into()));
    }
    let clusters = generate_clusters(&cfg.region, cfg.num_clusters, cfg.density_mean, cfg.cluster_radius, seed)?;
    let traffic = TrafficGenConfig { rng_seed: seed, ..cfg.traffic.clone() };
    let pairs = generate_demand(&clusters, &traffic)?;
    let td = aggregate_td(&clusters, &pairs)?;
    let mut snapshots = vec![initial_snapshot(&clusters, td, &cfg.mobility, &cfg.region, seed)];
    for t in 1..cfg.mobility.num_snapshots {
        let mut next = advance_snapshot(&snapshots[t - 1], &cfg.mobility, &cfg.region, seed);
        if cfg.redraw_demand_each_snapshot {
            next.td = aggregate_td(&clusters, &generate_demand_at(&clusters, &traffic, t as u64)?)?;
        }
        snapshots.push(next);
    }
    let scenario = Scenario {
        version: SCHEMA_VERSION,
        region: cfg.region,
        propagation: *propagation,
        clusters,
        traffic: TrafficRecord { config: traffic, pairs },
        mobility: cfg.mobility,
        snapshots,
    };
    scenario.validate()?;
    Ok(scenario)
}
