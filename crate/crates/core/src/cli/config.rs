use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::chain::ScheduleKind;
use crate::estimators::ScalingModel;
use crate::graphs::{
    build_binary_tree, build_complete, build_dumbbell, build_lattice, build_star, build_zary_tree, Cut, Graph,
};
use crate::oracle::EntropyUnit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Otoc,
    EntBound,
    OracleVerify,
    ScalingSuite,
    ScheduleCompare,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Otoc => "otoc",
            ExperimentKind::EntBound => "ent_bound",
            ExperimentKind::OracleVerify => "oracle_verify",
            ExperimentKind::ScalingSuite => "scaling_suite",
            ExperimentKind::ScheduleCompare => "schedule_compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFamily {
    BinaryTree,
    ZaryTree,
    Lattice,
    Dumbbell,
    Complete,
    Star,
    EdgeList,
}

/// A graph family and its size parameters. Only the fields the family uses
/// may be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub family: GraphFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl GraphSpec {
    pub fn family(family: GraphFamily) -> Self {
        GraphSpec {
            family,
            depth: None,
            z: None,
            dims: None,
            m: None,
            n: None,
            path: None,
        }
    }

    fn fields(&self) -> [(&'static str, bool); 6] {
        [
            ("depth", self.depth.is_some()),
            ("z", self.z.is_some()),
            ("dims", self.dims.is_some()),
            ("m", self.m.is_some()),
            ("n", self.n.is_some()),
            ("path", self.path.is_some()),
        ]
    }

    /// Fields the family requires, in the order they are checked.
    fn required(family: GraphFamily) -> &'static [&'static str] {
        match family {
            GraphFamily::BinaryTree => &["depth"],
            GraphFamily::ZaryTree => &["z", "depth"],
            GraphFamily::Lattice => &["dims"],
            GraphFamily::Dumbbell => &["m"],
            GraphFamily::Complete | GraphFamily::Star => &["n"],
            GraphFamily::EdgeList => &["path"],
        }
    }

    /// Checks the field set; `scanned` names a field supplied by a scaling
    /// suite instead of the config.
    pub fn validate(&self, scanned: Option<&str>) -> Result<(), CliError> {
        let required = Self::required(self.family);
        for (name, present) in self.fields() {
            let needed = required.contains(&name);
            let is_scanned = scanned == Some(name);
            if is_scanned && present {
                return Err(CliError::config(
                    format!("graph.{name}"),
                    "is supplied by scaling.values and must be omitted",
                ));
            }
            if needed && !present && !is_scanned {
                return Err(CliError::config(format!("graph.{name}"), "is required for this family"));
            }
            if !needed && present {
                return Err(CliError::config(
                    format!("graph.{name}"),
                    format!("is not used by family {:?}", self.family),
                ));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Graph, CliError> {
        self.validate(None)?;
        let g = match self.family {
            GraphFamily::BinaryTree => build_binary_tree(self.depth.unwrap())?,
            GraphFamily::ZaryTree => build_zary_tree(self.z.unwrap(), self.depth.unwrap())?,
            GraphFamily::Lattice => build_lattice(self.dims.as_ref().unwrap())?,
            GraphFamily::Dumbbell => build_dumbbell(self.m.unwrap())?,
            GraphFamily::Complete => build_complete(self.n.unwrap())?,
            GraphFamily::Star => build_star(self.n.unwrap())?,
            GraphFamily::EdgeList => {
                let path = self.path.as_ref().unwrap();
                let text =
                    fs::read_to_string(path).map_err(|e| CliError::config("graph.path", format!("{path}: {e}")))?;
                Graph::from_edge_list(&text, false)?
            }
        };
        Ok(g)
    }

    /// The family's natural bipartition, if it has one.
    pub fn default_cut(&self, g: &Graph) -> Option<Cut> {
        match self.family {
            GraphFamily::BinaryTree => Cut::tree_left_subtree(g, 2).ok(),
            GraphFamily::ZaryTree => Cut::tree_left_subtree(g, self.z?).ok(),
            GraphFamily::Lattice => Cut::lattice_half(self.dims.as_ref()?).ok(),
            GraphFamily::Dumbbell => Cut::dumbbell_half(g).ok(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSelection {
    FarthestPair,
    Explicit,
}

fn farthest_pair() -> PairSelection {
    PairSelection::FarthestPair
}

fn poisson() -> ScheduleKind {
    ScheduleKind::PoissonRateOne
}

fn parameter_axis() -> ScalingAxis {
    ScalingAxis::Parameter
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    #[serde(default = "farthest_pair")]
    pub selection: PairSelection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<usize>,
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec {
            selection: PairSelection::FarthestPair,
            x: None,
            y: None,
        }
    }
}

impl PairSpec {
    fn validate(&self) -> Result<(), CliError> {
        match (self.selection, self.x, self.y) {
            (PairSelection::FarthestPair, None, None) | (PairSelection::Explicit, Some(_), Some(_)) => Ok(()),
            (PairSelection::FarthestPair, _, _) => Err(CliError::config(
                "pair.x",
                "x and y are only allowed with selection = \"explicit\"",
            )),
            (PairSelection::Explicit, _, _) => Err(CliError::config("pair.x", "explicit selection needs both x and y")),
        }
    }

    pub fn resolve(&self, g: &Graph) -> Result<(usize, usize), CliError> {
        match (self.x, self.y) {
            (Some(x), Some(y)) => {
                for (name, v) in [("pair.x", x), ("pair.y", y)] {
                    if v >= g.num_vertices() {
                        return Err(CliError::config(
                            name,
                            format!("vertex {v} out of range for {} vertices", g.num_vertices()),
                        ));
                    }
                }
                Ok((x, y))
            }
            _ => Ok(g.farthest_pair()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutKind {
    TreeLeftSubtree,
    DumbbellHalf,
    LatticeHalf,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutSpec {
    pub kind: CutKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<usize>>,
}

impl CutSpec {
    fn validate(&self, graph: &GraphSpec) -> Result<(), CliError> {
        let family_ok = match self.kind {
            CutKind::TreeLeftSubtree => matches!(graph.family, GraphFamily::BinaryTree | GraphFamily::ZaryTree),
            CutKind::DumbbellHalf => graph.family == GraphFamily::Dumbbell,
            CutKind::LatticeHalf => graph.family == GraphFamily::Lattice,
            CutKind::Explicit => true,
        };
        if !family_ok {
            return Err(CliError::config(
                "cut.kind",
                format!("{:?} does not apply to {:?}", self.kind, graph.family),
            ));
        }
        if (self.kind == CutKind::Explicit) != self.vertices.is_some() {
            return Err(CliError::config(
                "cut.vertices",
                "required for kind = \"explicit\" and not allowed otherwise",
            ));
        }
        Ok(())
    }

    pub fn resolve(&self, graph: &GraphSpec, g: &Graph) -> Result<Cut, CliError> {
        Ok(match self.kind {
            CutKind::TreeLeftSubtree => Cut::tree_left_subtree(g, graph.z.unwrap_or(2))?,
            CutKind::DumbbellHalf => Cut::dumbbell_half(g)?,
            CutKind::LatticeHalf => Cut::lattice_half(graph.dims.as_deref().unwrap_or(&[]))?,
            CutKind::Explicit => Cut::new(g.num_vertices(), self.vertices.clone().unwrap_or_default())?,
        })
    }
}

/// Gate schedule and sampling grid. The horizon is either absolute or a
/// multiple of the `x`-`y` distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    #[serde(default = "poisson")]
    pub kind: ScheduleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_times: Option<Vec<f64>>,
}

pub const DEFAULT_HORIZON_FACTOR: f64 = 20.0;
pub const DEFAULT_SAMPLE_COUNT: f64 = 400.0;

impl Default for ScheduleSpec {
    fn default() -> Self {
        ScheduleSpec {
            kind: ScheduleKind::PoissonRateOne,
            horizon: None,
            horizon_factor: None,
            sample_step: None,
            sample_times: None,
        }
    }
}

impl ScheduleSpec {
    fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => Err(CliError::config(
                format!("schedule.{name}"),
                format!("must be positive and finite, got {x}"),
            )),
            _ => Ok(()),
        };
        positive("horizon", self.horizon)?;
        positive("horizon_factor", self.horizon_factor)?;
        positive("sample_step", self.sample_step)?;
        if self.horizon.is_some() && self.horizon_factor.is_some() {
            return Err(CliError::config(
                "schedule.horizon_factor",
                "give either horizon or horizon_factor",
            ));
        }
        if let Some(times) = &self.sample_times {
            if self.sample_step.is_some() {
                return Err(CliError::config(
                    "schedule.sample_times",
                    "give either sample_times or sample_step",
                ));
            }
            if times.is_empty() || times.iter().any(|t| !t.is_finite() || *t < 0.0) {
                return Err(CliError::config(
                    "schedule.sample_times",
                    "must be a non-empty list of times >= 0",
                ));
            }
            if times.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::config("schedule.sample_times", "must be strictly increasing"));
            }
            if let Some(h) = self.horizon {
                if times.last().is_some_and(|&t| t > h) {
                    return Err(CliError::config("schedule.sample_times", "extend past the horizon"));
                }
            }
        }
        Ok(())
    }

    /// Horizon for a pair at `distance` when none is given explicitly.
    pub fn resolve_horizon(&self, distance: usize) -> f64 {
        if let Some(h) = self.horizon {
            return h;
        }
        if let Some(t) = self.sample_times.as_ref().and_then(|t| t.last()) {
            if self.horizon_factor.is_none() {
                return *t;
            }
        }
        self.horizon_factor.unwrap_or(DEFAULT_HORIZON_FACTOR) * distance.max(1) as f64
    }

    pub fn resolve_times(&self, horizon: f64) -> Vec<f64> {
        match &self.sample_times {
            Some(t) => t.iter().copied().filter(|&x| x <= horizon).collect(),
            None => {
                let step = self.sample_step.unwrap_or(horizon / DEFAULT_SAMPLE_COUNT);
                crate::estimators::uniform_sample_times(horizon, step)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingAxis {
    /// The family parameter itself (depth, side length, clique size).
    Parameter,
    /// Vertex count.
    Vertices,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSpec {
    pub values: Vec<usize>,
    pub model: ScalingModel,
    #[serde(default = "parameter_axis")]
    pub axis: ScalingAxis,
    /// Number of lattice dimensions when the family is `lattice`; every side
    /// takes the scanned value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_dim: Option<usize>,
}

impl ScalingSpec {
    /// Name of the graph field each value replaces.
    pub fn scanned_field(family: GraphFamily) -> Option<&'static str> {
        match family {
            GraphFamily::BinaryTree | GraphFamily::ZaryTree => Some("depth"),
            GraphFamily::Lattice => Some("dims"),
            GraphFamily::Dumbbell => Some("m"),
            GraphFamily::Complete | GraphFamily::Star => Some("n"),
            GraphFamily::EdgeList => None,
        }
    }

    pub fn graph_at(&self, base: &GraphSpec, value: usize) -> Result<GraphSpec, CliError> {
        let mut spec = base.clone();
        match base.family {
            GraphFamily::BinaryTree | GraphFamily::ZaryTree => {
                spec.depth =
                    Some(u32::try_from(value).map_err(|_| CliError::config("scaling.values", "depth too large"))?)
            }
            GraphFamily::Lattice => spec.dims = Some(vec![value; self.lattice_dim.unwrap_or(1)]),
            GraphFamily::Dumbbell => spec.m = Some(value),
            GraphFamily::Complete | GraphFamily::Star => spec.n = Some(value),
            GraphFamily::EdgeList => return Err(CliError::config("graph.family", "edge lists cannot be scanned")),
        }
        Ok(spec)
    }

    fn validate(&self, graph: &GraphSpec) -> Result<(), CliError> {
        let field = Self::scanned_field(graph.family)
            .ok_or_else(|| CliError::config("graph.family", "edge lists cannot be scanned"))?;
        graph.validate(Some(field))?;
        if self.values.len() < 4 {
            return Err(CliError::config("scaling.values", "a fit needs at least 4 values"));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config("scaling.values", "must be strictly increasing"));
        }
        match (graph.family == GraphFamily::Lattice, self.lattice_dim) {
            (true, Some(d)) if d >= 1 => Ok(()),
            (true, _) => Err(CliError::config(
                "scaling.lattice_dim",
                "required (>= 1) for lattice scans",
            )),
            (false, Some(_)) => Err(CliError::config(
                "scaling.lattice_dim",
                "only used with family = \"lattice\"",
            )),
            (false, None) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    /// Haar circuit samples for the Pauli-weight comparison.
    pub circuits: u64,
    /// Length of the fixed edge sequence for that comparison.
    pub gates: usize,
    /// Circuits sampled for the entropy-increment check.
    pub entropy_circuits: u64,
    /// Gates per entropy circuit; defaults to `4·E`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy_gates: Option<usize>,
    pub entropy_unit: EntropyUnit,
}

impl Default for OracleSpec {
    fn default() -> Self {
        OracleSpec {
            circuits: 10_000,
            gates: 8,
            entropy_circuits: 100,
            entropy_gates: None,
            entropy_unit: EntropyUnit::Nats,
        }
    }
}

/// A complete experiment description. Unknown keys are rejected and every
/// field is validated before anything runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub master_seed: u64,
    pub output_dir: String,
    pub local_dim: u32,
    pub num_traj: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_fraction: Option<f64>,
    pub plots: bool,
    pub graph: GraphSpec,
    #[serde(default)]
    pub pair: PairSpec,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<CutSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// A runnable configuration for `kind` with modest sizes.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let mut cfg = ExperimentConfig {
            kind,
            master_seed: 1,
            output_dir: format!("out/{}", kind.name()),
            local_dim: 2,
            num_traj: 10_000,
            threshold_fraction: None,
            plots: true,
            graph: GraphSpec {
                depth: Some(5),
                ..GraphSpec::family(GraphFamily::BinaryTree)
            },
            pair: PairSpec::default(),
            schedule: ScheduleSpec::default(),
            cut: None,
            scaling: None,
            oracle: None,
        };
        match kind {
            ExperimentKind::Otoc | ExperimentKind::ScheduleCompare => {}
            ExperimentKind::EntBound => cfg.num_traj = 200,
            ExperimentKind::OracleVerify => {
                cfg.graph = GraphSpec {
                    dims: Some(vec![4]),
                    ..GraphSpec::family(GraphFamily::Lattice)
                };
                cfg.oracle = Some(OracleSpec::default());
            }
            ExperimentKind::ScalingSuite => {
                cfg.graph = GraphSpec::family(GraphFamily::BinaryTree);
                cfg.schedule.horizon_factor = Some(4.0);
                cfg.scaling = Some(ScalingSpec {
                    values: (3..=8).collect(),
                    model: ScalingModel::Linear,
                    axis: ScalingAxis::Parameter,
                    lattice_dim: None,
                });
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(2..=65_535).contains(&self.local_dim) {
            return Err(CliError::config(
                "local_dim",
                format!("must be in 2..=65535, got {}", self.local_dim),
            ));
        }
        if self.num_traj == 0 {
            return Err(CliError::config("num_traj", "must be at least 1"));
        }
        if self.output_dir.trim().is_empty() {
            return Err(CliError::config("output_dir", "must not be empty"));
        }
        if let Some(f) = self.threshold_fraction {
            if !(f > 0.0 && f < 1.0) {
                return Err(CliError::config(
                    "threshold_fraction",
                    format!("must be in (0, 1), got {f}"),
                ));
            }
        }
        self.pair.validate()?;
        self.schedule.validate()?;
        if let Some(cut) = &self.cut {
            cut.validate(&self.graph)?;
        }
        let scan = self.kind == ExperimentKind::ScalingSuite;
        match (&self.scaling, scan) {
            (Some(s), true) => s.validate(&self.graph)?,
            (None, true) => {
                return Err(CliError::config(
                    "scaling",
                    "section required for kind = \"scaling_suite\"",
                ))
            }
            (Some(_), false) => return Err(CliError::config("scaling", "only used with kind = \"scaling_suite\"")),
            (None, false) => self.graph.validate(None)?,
        }
        if scan && self.pair.selection == PairSelection::Explicit {
            return Err(CliError::config(
                "pair.selection",
                "scaling suites always use the farthest pair",
            ));
        }
        if self.oracle.is_some() != (self.kind == ExperimentKind::OracleVerify) {
            return Err(CliError::config(
                "oracle",
                "section required for, and only used with, kind = \"oracle_verify\"",
            ));
        }
        if scan && self.schedule.horizon.is_some() {
            return Err(CliError::config(
                "schedule.horizon",
                "scaling suites take horizon_factor instead",
            ));
        }
        if scan && self.schedule.sample_times.is_some() {
            return Err(CliError::config(
                "schedule.sample_times",
                "scaling suites take sample_step instead",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        for kind in [
            ExperimentKind::Otoc,
            ExperimentKind::EntBound,
            ExperimentKind::OracleVerify,
            ExperimentKind::ScalingSuite,
            ExperimentKind::ScheduleCompare,
        ] {
            let cfg = ExperimentConfig::default_for(kind);
            cfg.validate().unwrap();
            assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut text = ExperimentConfig::default_for(ExperimentKind::Otoc).to_toml();
        text = text.replace("plots = true", "plots = true\nbogus = 3");
        assert!(ExperimentConfig::from_toml(&text).is_err());
        let text = ExperimentConfig::default_for(ExperimentKind::Otoc)
            .to_toml()
            .replace("depth = 5", "depth = 5\nwidth = 2");
        let err = ExperimentConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("width"), "{err}");
    }

    #[test]
    fn field_level_messages() {
        let mut cfg = ExperimentConfig::default_for(ExperimentKind::Otoc);
        cfg.graph.m = Some(3);
        assert!(cfg.validate().unwrap_err().to_string().contains("graph.m"));

        let mut cfg = ExperimentConfig::default_for(ExperimentKind::Otoc);
        cfg.pair.x = Some(1);
        assert!(cfg.validate().unwrap_err().to_string().contains("pair.x"));

        let mut cfg = ExperimentConfig::default_for(ExperimentKind::Otoc);
        cfg.local_dim = 1;
        assert!(cfg.validate().unwrap_err().to_string().contains("local_dim"));

        let mut cfg = ExperimentConfig::default_for(ExperimentKind::ScalingSuite);
        cfg.graph.depth = Some(3);
        assert!(cfg.validate().unwrap_err().to_string().contains("graph.depth"));

        let mut cfg = ExperimentConfig::default_for(ExperimentKind::Otoc);
        cfg.cut = Some(CutSpec {
            kind: CutKind::DumbbellHalf,
            vertices: None,
        });
        assert!(cfg.validate().unwrap_err().to_string().contains("cut.kind"));
    }

    #[test]
    fn horizon_resolution() {
        let mut s = ScheduleSpec::default();
        assert_eq!(s.resolve_horizon(3), 60.0);
        assert_eq!(s.resolve_horizon(0), 20.0);
        s.horizon_factor = Some(2.0);
        assert_eq!(s.resolve_horizon(3), 6.0);
        s.horizon_factor = None;
        s.sample_times = Some(vec![0.5, 1.5]);
        assert_eq!(s.resolve_horizon(10), 1.5);
        assert_eq!(s.resolve_times(1.5), vec![0.5, 1.5]);
        let s = ScheduleSpec {
            sample_step: Some(0.5),
            ..ScheduleSpec::default()
        };
        assert_eq!(s.resolve_times(1.0), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn scanned_graphs() {
        let cfg = ExperimentConfig::default_for(ExperimentKind::ScalingSuite);
        let scaling = cfg.scaling.as_ref().unwrap();
        let spec = scaling.graph_at(&cfg.graph, 4).unwrap();
        assert_eq!(spec.build().unwrap().num_vertices(), 31);

        let base = GraphSpec::family(GraphFamily::Lattice);
        let s = ScalingSpec {
            values: vec![2, 3, 4, 5],
            model: ScalingModel::Power,
            axis: ScalingAxis::Vertices,
            lattice_dim: Some(2),
        };
        s.validate(&base).unwrap();
        assert_eq!(s.graph_at(&base, 3).unwrap().build().unwrap().num_vertices(), 9);
    }
}
