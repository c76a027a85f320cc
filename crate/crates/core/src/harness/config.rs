use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::netgraph::CapacityModel;
use crate::radio::{BudgetMode, PropagationParams};
use crate::scenario::{DemandPairing, GenerateConfig, MobilityConfig, Region, TrafficGenConfig};
use crate::uprmodel::SolveConfig;

/// Which placement chains a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    Milp,
    Dmlp,
    /// MILP at the first snapshot, then that placement frozen with flows
    /// re-optimized per snapshot.
    Static,
    /// `milp` and `dmlp`.
    #[default]
    Both,
    /// `milp`, `dmlp` and `static`.
    All,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PropagationSection {
    #[serde(flatten)]
    pub params: PropagationParams,
    pub budget: BudgetMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSection {
    pub width: f64,
    pub height: f64,
    pub grid_rows: usize,
    pub grid_cols: usize,
}

impl Default for RegionSection {
    fn default() -> Self {
        let r = Region::default();
        RegionSection { width: r.width, height: r.height, grid_rows: 10, grid_cols: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSection {
    pub count: usize,
    /// Mean UEs per cluster.
    pub density_mean: f64,
    pub radius: f64,
}

impl Default for ClusterSection {
    fn default() -> Self {
        let g = GenerateConfig::default();
        ClusterSection { count: g.num_clusters, density_mean: g.density_mean, radius: g.cluster_radius }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficSection {
    pub flow_prob: f64,
    pub demand_levels: Vec<f64>,
    pub pairing: DemandPairing,
}

impl Default for TrafficSection {
    fn default() -> Self {
        let t = TrafficGenConfig::default();
        TrafficSection { flow_prob: t.flow_prob, demand_levels: t.demand_levels, pairing: t.pairing }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobilitySection {
    pub speed_min: f64,
    pub speed_max: f64,
    pub snapshot_duration: f64,
    pub uav_vmax: f64,
    pub num_snapshots: usize,
    pub redraw_demand_each_snapshot: bool,
}

impl Default for MobilitySection {
    fn default() -> Self {
        let m = MobilityConfig::default();
        MobilitySection {
            speed_min: m.speed_min,
            speed_max: m.speed_max,
            snapshot_duration: m.snapshot_duration,
            uav_vmax: m.uav_vmax,
            num_snapshots: m.num_snapshots,
            redraw_demand_each_snapshot: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSection {
    pub solver: SolverMode,
    pub n_max: usize,
    pub phi: f64,
    pub alpha: f64,
    pub mobility_enabled: bool,
    pub node_limit: u64,
}

impl Default for SolveSection {
    fn default() -> Self {
        let s = SolveConfig::default();
        SolveSection {
            solver: SolverMode::default(),
            n_max: s.n_max,
            phi: s.phi,
            alpha: s.alpha,
            mobility_enabled: s.mobility_enabled,
            node_limit: s.node_limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Record measured wall times; off keeps output byte-reproducible.
    pub timing: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("results"), timing: false }
    }
}

/// One experiment: where scenarios come from, how they are solved, where
/// results go. Run `r` uses seed `seed + r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Solve this scenario (every run) instead of generating one per seed.
    pub scenario_file: Option<PathBuf>,
    pub seed: u64,
    pub runs: usize,
    pub propagation: PropagationSection,
    pub region: RegionSection,
    pub clusters: ClusterSection,
    pub traffic: TrafficSection,
    pub mobility: MobilitySection,
    pub capacity: CapacityModel,
    pub solve: SolveSection,
    pub output: OutputSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario_file: None,
            seed: 0,
            runs: 1,
            propagation: PropagationSection::default(),
            region: RegionSection::default(),
            clusters: ClusterSection::default(),
            traffic: TrafficSection::default(),
            mobility: MobilitySection::default(),
            capacity: CapacityModel::default(),
            solve: SolveSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `scenario_file` is resolved against
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.to_path_buf(), e))?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(f), Some(dir)) = (&cfg.scenario_file, path.parent()) {
            if f.is_relative() {
                cfg.scenario_file = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be at least 1".into()));
        }
        if self.region.grid_rows == 0 || self.region.grid_cols == 0 {
            return Err(HarnessError::Config("grid needs at least one row and column".into()));
        }
        if self.mobility.num_snapshots == 0 {
            return Err(HarnessError::Config("at least one snapshot is required".into()));
        }
        self.propagation.params.validate()?;
        self.capacity.validate()?;
        self.solve_config(self.mobility_config().uav_reach()).validate()?;
        self.generate_config().mobility.validate()?;
        self.generate_config().traffic.validate()?;
        Ok(())
    }

    pub fn mobility_config(&self) -> MobilityConfig {
        let m = &self.mobility;
        MobilityConfig {
            speed_min: m.speed_min,
            speed_max: m.speed_max,
            snapshot_duration: m.snapshot_duration,
            uav_vmax: m.uav_vmax,
            num_snapshots: m.num_snapshots,
        }
    }

    pub fn generate_config(&self) -> GenerateConfig {
        GenerateConfig {
            region: Region { width: self.region.width, height: self.region.height },
            num_clusters: self.clusters.count,
            density_mean: self.clusters.density_mean,
            cluster_radius: self.clusters.radius,
            traffic: TrafficGenConfig {
                flow_prob: self.traffic.flow_prob,
                demand_levels: self.traffic.demand_levels.clone(),
                rng_seed: self.seed,
                pairing: self.traffic.pairing,
            },
            mobility: self.mobility_config(),
            redraw_demand_each_snapshot: self.mobility.redraw_demand_each_snapshot,
        }
    }

    /// Solver settings with the UAV reach of the scenario being solved.
    pub fn solve_config(&self, reach: f64) -> SolveConfig {
        SolveConfig {
            n_max: self.solve.n_max,
            phi: self.solve.phi,
            alpha: self.solve.alpha,
            mobility_enabled: self.solve.mobility_enabled,
            vmax_times_dt: reach,
            node_limit: self.solve.node_limit,
        }
    }

    pub fn run_seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.runs as u64).map(|r| self.seed.wrapping_add(r))
    }
}
