//! Experiment configuration: JSON schema, validation, and builders for
//! graphs and operator factories.

use std::path::PathBuf;

use serde::Deserialize;

use hgfrft_core::filtering::FrequencyRegion;
use hgfrft_core::graph::{Graph, ShiftKind};
use hgfrft_core::signals::ChirpSpec;
use hgfrft_core::transform::OperatorFactory;

use crate::CliError;

/// Top-level experiment configuration. Unknown fields are rejected.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Graph-side (vertex domain) graph.
    #[serde(default)]
    pub graph: Option<GraphSource>,
    /// Shift operator for the graph side (default: laplacian).
    #[serde(default)]
    pub shift: Option<ShiftKind>,
    /// Hilbert grid size; selects the m-point DFT unless `hilbert_graph` is
    /// given.
    #[serde(default)]
    pub m: Option<usize>,
    /// Optional graph realizing the Hilbert side (its vertex count must
    /// match `m` when both are given).
    #[serde(default)]
    pub hilbert_graph: Option<GraphSource>,
    /// Shift kind for `hilbert_graph` (default: the graph-side shift).
    #[serde(default)]
    pub hilbert_shift: Option<ShiftKind>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub experiment: Option<ExperimentParams>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Where a graph comes from: a named builtin or an edge-list CSV.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSource {
    Builtin(BuiltinGraph),
    EdgeList { path: PathBuf },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BuiltinGraph {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
        #[serde(default)]
        directed: bool,
    },
    Product {
        left: Box<BuiltinGraph>,
        right: Box<BuiltinGraph>,
    },
    RandomGeometric {
        n: usize,
        radius: f64,
        seed: u64,
    },
}

/// Per-command parameters, tagged by experiment kind.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentParams {
    Transform {
        signal: PathBuf,
    },
    Inverse {
        spectrum: PathBuf,
    },
    PartialH {
        signal: PathBuf,
    },
    PartialG {
        signal: PathBuf,
    },
    FilterBandpass {
        signal: PathBuf,
        region: FrequencyRegion,
    },
    Convolve {
        g: PathBuf,
        f: PathBuf,
    },
    SampleGreedy {
        support: FrequencyRegion,
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        signal: Option<PathBuf>,
    },
    Recover {
        plan: PathBuf,
        samples: PathBuf,
    },
    GridSearch {
        signal: PathBuf,
        support_size: usize,
        #[serde(default)]
        noise_sigma: Option<f64>,
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        alpha_range: Option<(f64, f64)>,
        #[serde(default)]
        beta_range: Option<(f64, f64)>,
        #[serde(default)]
        coarse_step: Option<f64>,
        #[serde(default)]
        fine_step: Option<f64>,
    },
    ProductDemo {},
    ChirpDemo {
        #[serde(default)]
        chirp: Option<ChirpSpec>,
        #[serde(default)]
        vertices: Option<usize>,
        #[serde(default)]
        vertex: Option<usize>,
        #[serde(default)]
        alpha_range: Option<(f64, f64)>,
        #[serde(default)]
        alpha_step: Option<f64>,
    },
    Heat {
        s: f64,
        t_horizon: usize,
        #[serde(default)]
        initial: Option<PathBuf>,
        #[serde(default)]
        impulse_at: Option<usize>,
    },
    Wave {
        s: f64,
        t_horizon: usize,
        #[serde(default)]
        initial: Option<PathBuf>,
        #[serde(default)]
        impulse_at: Option<usize>,
    },
    Compactness {
        #[serde(default)]
        signal: Option<PathBuf>,
        #[serde(default)]
        s: Option<f64>,
        #[serde(default)]
        impulse_at: Option<usize>,
        #[serde(default)]
        percentile_step: Option<f64>,
    },
    GenGraph {},
}

pub fn config_error(msg: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        msg: msg.into(),
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| config_error(format!("invalid config {}: {e}", path.display())))
}

fn build_builtin(spec: &BuiltinGraph) -> Result<Graph, CliError> {
    match spec {
        BuiltinGraph::Path { n } => Ok(Graph::path(*n)?),
        BuiltinGraph::Cycle { n, directed } => Ok(Graph::cycle(*n, *directed)?),
        BuiltinGraph::Product { left, right } => {
            let l = build_builtin(left)?;
            let r = build_builtin(right)?;
            Ok(l.cartesian_product(&r)?)
        }
        BuiltinGraph::RandomGeometric { n, radius, seed } => {
            Ok(Graph::random_geometric(*n, *radius, *seed)?.graph)
        }
    }
}

pub fn build_graph(source: &GraphSource) -> Result<Graph, CliError> {
    match source {
        GraphSource::Builtin(b) => build_builtin(b),
        GraphSource::EdgeList { path } => Ok(Graph::from_edge_list(path)?),
    }
}

impl ExperimentConfig {
    pub fn graph_shift(&self) -> ShiftKind {
        self.shift.unwrap_or(ShiftKind::Laplacian)
    }

    pub fn require_graph(&self) -> Result<Graph, CliError> {
        let source = self
            .graph
            .as_ref()
            .ok_or_else(|| config_error("config is missing the graph source"))?;
        build_graph(source)
    }

    /// Graph-side operator factory.
    pub fn graph_factory(&self) -> Result<OperatorFactory, CliError> {
        let graph = self.require_graph()?;
        Ok(OperatorFactory::gft(&graph, self.graph_shift())?)
    }

    /// Hilbert-side operator factory: the m-point DFT, or a graph transform
    /// when `hilbert_graph` is configured.
    pub fn hilbert_factory(&self) -> Result<OperatorFactory, CliError> {
        match &self.hilbert_graph {
            Some(source) => {
                let graph = build_graph(source)?;
                if let Some(m) = self.m {
                    if m != graph.n() {
                        return Err(config_error(format!(
                            "m = {m} does not match the hilbert graph's {} vertices",
                            graph.n()
                        )));
                    }
                }
                let shift = self.hilbert_shift.unwrap_or_else(|| self.graph_shift());
                Ok(OperatorFactory::gft(&graph, shift)?)
            }
            None => {
                let m = self
                    .m
                    .ok_or_else(|| config_error("config is missing the hilbert grid size m"))?;
                Ok(OperatorFactory::dft(m)?)
            }
        }
    }

    /// Both factories, with the joint dimension checked against the cap.
    pub fn factories(&self) -> Result<(OperatorFactory, OperatorFactory), CliError> {
        let fh = self.hilbert_factory()?;
        let fg = self.graph_factory()?;
        let joint = fh.dim() * fg.dim();
        if joint > hgfrft_core::max_joint_dim() {
            return Err(config_error(format!(
                "joint dimension {joint} exceeds the cap {} (HGFRFT_MAX_DIM)",
                hgfrft_core::max_joint_dim()
            )));
        }
        Ok((fh, fg))
    }

    pub fn orders(&self) -> Result<(f64, f64), CliError> {
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(config_error("config is missing alpha or beta")),
        }
    }
}
