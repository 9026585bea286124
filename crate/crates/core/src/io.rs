//! JSON game files.
//!
//! ```json
//! {"n": 2, "colors": 2,
//!  "edges": [{"u": 0, "v": 1, "kind": "coord", "w": "3/2", "alpha": ["1/1", "3/1"]}],
//!  "strategy_sets": [[1, 2], [2]],
//!  "preferences": [{"1": "5/1"}, {}]}
//! ```
//!
//! Rationals are `"p/q"` strings or JSON integers; decimal numbers are
//! rejected. `alpha` defaults to an equal split. Serialization is canonical:
//! symmetric games omit `strategy_sets`, zero preferences are dropped, and an
//! optional `meta` object is carried through unchanged.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::model::{ClusteringGame, Color, DistributionRule, Edge, EdgeKind, Graph, ModelError};
use crate::rational::{Rational, RationalLiteral};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub w: RationalLiteral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[RationalLiteral; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGame {
    pub n: usize,
    pub colors: usize,
    pub edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_sets: Option<Vec<Vec<Color>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<Vec<BTreeMap<String, RationalLiteral>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read or write {path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed game JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("preference key {key:?} of node {node} is not a color")]
    BadColorKey { node: usize, key: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl IoError {
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::File { .. } => "FileError",
            IoError::Json(_) => "MalformedJson",
            IoError::BadColorKey { .. } => "BadColorKey",
            IoError::Model(e) => e.kind(),
        }
    }

    pub fn edge(&self) -> Option<usize> {
        match self {
            IoError::Model(e) => e.edge(),
            _ => None,
        }
    }

    pub fn node(&self) -> Option<usize> {
        match self {
            IoError::BadColorKey { node, .. } => Some(*node),
            IoError::Model(e) => e.node(),
            _ => None,
        }
    }
}

/// A game together with the free-form `meta` object of its file.
#[derive(Debug, Clone, PartialEq)]
pub struct GameDocument {
    pub game: ClusteringGame,
    pub meta: Option<serde_json::Value>,
}

impl GameDocument {
    pub fn new(game: ClusteringGame) -> Self {
        GameDocument { game, meta: None }
    }

    pub fn with_meta(game: ClusteringGame, meta: serde_json::Value) -> Self {
        GameDocument {
            game,
            meta: Some(meta),
        }
    }

    pub fn to_json(&self) -> String {
        let mut raw = to_raw(&self.game);
        raw.meta = self.meta.clone();
        let mut text = serde_json::to_string_pretty(&raw).expect("game serializes");
        text.push('\n');
        text
    }
}

/// Validates a raw description into a game.
pub fn build_game(raw: &RawGame) -> Result<ClusteringGame, IoError> {
    let edges = raw
        .edges
        .iter()
        .map(|e| Edge {
            u: e.u,
            v: e.v,
            kind: e.kind,
            weight: e.w.0.clone(),
        })
        .collect();
    let graph = Graph::new(raw.n, edges)?;
    let shares = raw
        .edges
        .iter()
        .map(|e| match &e.alpha {
            Some([a, b]) => (a.0.clone(), b.0.clone()),
            None => (Rational::one(), Rational::one()),
        })
        .collect();
    let rule = DistributionRule::new(shares)?;
    let preferences = match &raw.preferences {
        None => None,
        Some(maps) => {
            let mut out = Vec::with_capacity(maps.len());
            for (node, map) in maps.iter().enumerate() {
                let mut parsed = BTreeMap::new();
                for (key, value) in map {
                    let color: Color = key.trim().parse().map_err(|_| IoError::BadColorKey {
                        node,
                        key: key.clone(),
                    })?;
                    parsed.insert(color, value.0.clone());
                }
                out.push(parsed);
            }
            Some(out)
        }
    };
    Ok(ClusteringGame::new(
        graph,
        raw.colors,
        raw.strategy_sets.clone(),
        rule,
        preferences,
    )?)
}

/// Canonical raw form of a game (without `meta`).
pub fn to_raw(game: &ClusteringGame) -> RawGame {
    let equal = (Rational::one(), Rational::one());
    let edges = game
        .graph()
        .edges()
        .iter()
        .zip(game.rule().shares())
        .map(|(e, share)| RawEdge {
            u: e.u,
            v: e.v,
            kind: e.kind,
            w: RationalLiteral(e.weight.clone()),
            alpha: (share != &equal).then(|| {
                [
                    RationalLiteral(share.0.clone()),
                    RationalLiteral(share.1.clone()),
                ]
            }),
        })
        .collect();
    let strategy_sets = (!game.is_symmetric()).then(|| game.strategy_sets().to_vec());
    let preferences = (!game.has_zero_preferences()).then(|| {
        game.preferences()
            .iter()
            .map(|map| {
                map.iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c.to_string(), RationalLiteral(v.clone())))
                    .collect()
            })
            .collect()
    });
    RawGame {
        n: game.node_count(),
        colors: game.colors(),
        edges,
        strategy_sets,
        preferences,
        meta: None,
    }
}

pub fn parse_game(text: &str) -> Result<GameDocument, IoError> {
    let raw: RawGame = serde_json::from_str(text)?;
    let game = build_game(&raw)?;
    Ok(GameDocument {
        game,
        meta: raw.meta,
    })
}

pub fn game_to_json(game: &ClusteringGame) -> String {
    GameDocument::new(game.clone()).to_json()
}

pub fn read_game_file(path: &Path) -> Result<GameDocument, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_game(&text)
}

pub fn write_game_file(path: &Path, doc: &GameDocument) -> Result<(), IoError> {
    std::fs::write(path, doc.to_json()).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_minimal_game() {
        let doc = parse_game(r#"{"n":2,"colors":2,"edges":[{"u":0,"v":1,"kind":"coord","w":1}]}"#)
            .unwrap();
        assert!(doc.game.is_symmetric());
        assert_eq!(doc.game.graph().edge(0).weight, int(1));
    }

    #[test]
    fn rejects_decimal_weight() {
        let err =
            parse_game(r#"{"n":2,"colors":2,"edges":[{"u":0,"v":1,"kind":"coord","w":0.5}]}"#);
        assert!(matches!(err, Err(IoError::Json(_))));
    }

    #[test]
    fn zero_share_sum_is_reported_with_edge() {
        let err = parse_game(
            r#"{"n":3,"colors":2,"edges":[{"u":0,"v":1,"kind":"coord","w":1},
                {"u":1,"v":2,"kind":"anti","w":1,"alpha":[0,0]}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.kind(), "ZeroShareSum");
        assert_eq!(err.edge(), Some(1));
    }

    #[test]
    fn empty_strategy_set_is_reported_with_node() {
        let err =
            parse_game(r#"{"n":2,"colors":2,"edges":[],"strategy_sets":[[1],[]]}"#).unwrap_err();
        assert_eq!(err.kind(), "EmptyStrategySet");
        assert_eq!(err.node(), Some(1));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = r#"{"n":3,"colors":3,"edges":[
            {"u":0,"v":1,"kind":"coord","w":"3/2","alpha":["1/1","3/1"]},
            {"u":1,"v":2,"kind":"anti","w":2}],
            "strategy_sets":[[1,2],[1,2,3],[3]],
            "preferences":[{"2":"1/3"},{},{"3":0}],
            "meta":{"construction":"test","seed":4}}"#;
        let doc = parse_game(text).unwrap();
        let once = doc.to_json();
        let again = parse_game(&once).unwrap().to_json();
        assert_eq!(once, again);
        assert_eq!(doc.game.preference(0, 2), ratio(1, 3));
        assert!(once.contains("\"3/2\""));
    }
}
