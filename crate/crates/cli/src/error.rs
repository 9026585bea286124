use std::path::PathBuf;

use clustering_games::equilibria::SearchError;
use clustering_games::experiments::ExperimentError;
use clustering_games::generators::GenError;
use clustering_games::io::IoError;
use clustering_games::shapley::ShapleyError;
use clustering_games::topology::TopologyError;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source}")]
    Game {
        path: Option<PathBuf>,
        source: IoError,
    },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Shapley(#[from] ShapleyError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn game(path: &std::path::Path, source: IoError) -> Self {
        CliError::Game {
            path: Some(path.to_path_buf()),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Game { source, .. } => source.kind(),
            CliError::Search(e) => e.kind(),
            CliError::Shapley(e) => e.kind(),
            CliError::Gen(e) => e.kind(),
            CliError::Topology(_) => "ChromaticCapExceeded",
            CliError::Experiment(e) => e.kind(),
            CliError::Output { .. } => "FileError",
        }
    }

    /// 2 for cap exceedances, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        let cap = match self {
            CliError::Search(e) => e.is_cap(),
            CliError::Topology(TopologyError::ChromaticCapExceeded { .. }) => true,
            CliError::Gen(GenError::Topology(_)) => true,
            CliError::Experiment(ExperimentError::Search(e)) => e.is_cap(),
            CliError::Experiment(ExperimentError::Gen(GenError::Topology(_))) => true,
            _ => false,
        };
        if cap {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({"error": self.kind(), "message": self.to_string()});
        if let CliError::Game { path, source } = self {
            if let Some(path) = path {
                out["file"] = json!(path.display().to_string());
            }
            if let Some(edge) = source.edge() {
                out["edge"] = json!(edge);
            }
            if let Some(node) = source.node() {
                out["node"] = json!(node);
            }
        }
        if let CliError::Output { path, .. } = self {
            out["file"] = json!(path.display().to_string());
        }
        out
    }
}
