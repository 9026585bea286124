//! Game instances: graphs, distribution rules, strategy sets, preferences,
//! strategy profiles, and the exact utility / welfare functions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{Extended, Rational};

/// Colors are the integers `1..=c`.
pub type Color = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    #[serde(rename = "coord")]
    Coordination,
    #[serde(rename = "anti")]
    AntiCoordination,
}

impl EdgeKind {
    /// Whether an edge of this kind pays out when its endpoints play `a` and `b`.
    #[inline]
    pub fn satisfied(self, a: Color, b: Color) -> bool {
        match self {
            EdgeKind::Coordination => a == b,
            EdgeKind::AntiCoordination => a != b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub weight: Rational,
}

impl Edge {
    pub fn coordination(u: usize, v: usize, weight: Rational) -> Self {
        Edge {
            u,
            v,
            kind: EdgeKind::Coordination,
            weight,
        }
    }

    pub fn anti(u: usize, v: usize, weight: Rational) -> Self {
        Edge {
            u,
            v,
            kind: EdgeKind::AntiCoordination,
            weight,
        }
    }

    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("edge {edge}: node {node} is out of range")]
    NodeOutOfRange { edge: usize, node: usize },
    #[error("edge {edge}: self-loop at node {node}")]
    SelfLoop { edge: usize, node: usize },
    #[error("edge {edge}: duplicate of edge {first} on {{{u}, {v}}}")]
    DuplicateEdge {
        edge: usize,
        first: usize,
        u: usize,
        v: usize,
    },
    #[error("edge {edge}: negative weight")]
    NegativeWeight { edge: usize },
    #[error("edge {edge}: negative share")]
    NegativeShare { edge: usize },
    #[error("edge {edge}: both shares are zero")]
    ZeroShareSum { edge: usize },
    #[error("distribution rule has {found} entries but the graph has {expected} edges")]
    RuleSizeMismatch { expected: usize, found: usize },
    #[error("a game needs at least two colors, got {colors}")]
    TooFewColors { colors: usize },
    #[error("expected {expected} per-node entries, found {found}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("node {node}: empty strategy set")]
    EmptyStrategySet { node: usize },
    #[error("node {node}: color {color} is outside 1..={colors}")]
    ColorOutOfRange {
        node: usize,
        color: Color,
        colors: usize,
    },
    #[error("node {node}: preference for color {color} which is not in its strategy set")]
    PreferenceOutsideStrategySet { node: usize, color: Color },
    #[error("node {node}: negative preference for color {color}")]
    NegativePreference { node: usize, color: Color },
    #[error("node {node}: color {color} is not in its strategy set")]
    ColorNotAllowed { node: usize, color: Color },
}

impl ModelError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            ModelError::EmptyGraph => "EmptyGraph",
            ModelError::NodeOutOfRange { .. } => "NodeOutOfRange",
            ModelError::SelfLoop { .. } => "SelfLoop",
            ModelError::DuplicateEdge { .. } => "DuplicateEdge",
            ModelError::NegativeWeight { .. } => "NegativeWeight",
            ModelError::NegativeShare { .. } => "NegativeShare",
            ModelError::ZeroShareSum { .. } => "ZeroShareSum",
            ModelError::RuleSizeMismatch { .. } => "RuleSizeMismatch",
            ModelError::TooFewColors { .. } => "TooFewColors",
            ModelError::NodeCountMismatch { .. } => "NodeCountMismatch",
            ModelError::EmptyStrategySet { .. } => "EmptyStrategySet",
            ModelError::ColorOutOfRange { .. } => "ColorOutOfRange",
            ModelError::PreferenceOutsideStrategySet { .. } => "PreferenceOutsideStrategySet",
            ModelError::NegativePreference { .. } => "NegativePreference",
            ModelError::ColorNotAllowed { .. } => "ColorNotAllowed",
        }
    }

    pub fn edge(&self) -> Option<usize> {
        match self {
            ModelError::NodeOutOfRange { edge, .. }
            | ModelError::SelfLoop { edge, .. }
            | ModelError::DuplicateEdge { edge, .. }
            | ModelError::NegativeWeight { edge }
            | ModelError::NegativeShare { edge }
            | ModelError::ZeroShareSum { edge } => Some(*edge),
            _ => None,
        }
    }

    pub fn node(&self) -> Option<usize> {
        match self {
            ModelError::NodeOutOfRange { node, .. }
            | ModelError::SelfLoop { node, .. }
            | ModelError::EmptyStrategySet { node }
            | ModelError::ColorOutOfRange { node, .. }
            | ModelError::PreferenceOutsideStrategySet { node, .. }
            | ModelError::NegativePreference { node, .. }
            | ModelError::ColorNotAllowed { node, .. } => Some(*node),
            _ => None,
        }
    }
}

/// Undirected simple graph with weighted coordination / anti-coordination edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    // (neighbor, edge index), sorted by neighbor
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::EmptyGraph);
        }
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut adjacency = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            for node in [e.u, e.v] {
                if node >= n {
                    return Err(ModelError::NodeOutOfRange { edge: idx, node });
                }
            }
            if e.u == e.v {
                return Err(ModelError::SelfLoop {
                    edge: idx,
                    node: e.u,
                });
            }
            if e.weight.is_negative() {
                return Err(ModelError::NegativeWeight { edge: idx });
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if let Some(&first) = seen.get(&key) {
                return Err(ModelError::DuplicateEdge {
                    edge: idx,
                    first,
                    u: key.0,
                    v: key.1,
                });
            }
            seen.insert(key, idx);
            adjacency[e.u].push((e.v, idx));
            adjacency[e.v].push((e.u, idx));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
        })
    }

    /// Unit-weight coordination edges on the given pairs.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self, ModelError> {
        Graph::new(
            n,
            pairs
                .iter()
                .map(|&(u, v)| Edge::coordination(u, v, Rational::one()))
                .collect(),
        )
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// `(neighbor, edge index)` pairs sorted by neighbor id.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency
            .get(u)?
            .binary_search_by_key(&v, |&(nbr, _)| nbr)
            .ok()
            .map(|pos| self.adjacency[u][pos].1)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e.u, e.v))
    }

    /// Same topology and kinds with new weights (one per edge).
    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Self, ModelError> {
        assert_eq!(weights.len(), self.edges.len(), "one weight per edge");
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, w)| Edge {
                weight: w,
                ..e.clone()
            })
            .collect();
        Graph::new(self.n, edges)
    }

    /// Same topology and weights, every edge of the given kind.
    pub fn with_kind(&self, kind: EdgeKind) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { kind, ..e.clone() })
            .collect();
        Graph {
            n: self.n,
            edges,
            adjacency: self.adjacency.clone(),
        }
    }

    /// Number of edges with both endpoints in `nodes` (a node-membership mask).
    pub fn induced_edge_count(&self, members: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| members[e.u] && members[e.v])
            .count()
    }

    pub fn edge_mix(&self) -> EdgeMix {
        let coord = self.edges.iter().any(|e| e.kind == EdgeKind::Coordination);
        let anti = self
            .edges
            .iter()
            .any(|e| e.kind == EdgeKind::AntiCoordination);
        match (coord, anti) {
            (false, false) => EdgeMix::Empty,
            (true, false) => EdgeMix::Coordination,
            (false, true) => EdgeMix::AntiCoordination,
            (true, true) => EdgeMix::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeMix {
    Empty,
    Coordination,
    AntiCoordination,
    Mixed,
}

/// Split parameters `(α_uv, α_vu)` for every edge, in edge order and in the
/// orientation the edge was stored with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionRule {
    shares: Vec<(Rational, Rational)>,
}

impl DistributionRule {
    pub fn equal_split(edge_count: usize) -> Self {
        DistributionRule {
            shares: vec![(Rational::one(), Rational::one()); edge_count],
        }
    }

    pub fn new(shares: Vec<(Rational, Rational)>) -> Result<Self, ModelError> {
        for (idx, (a, b)) in shares.iter().enumerate() {
            if a.is_negative() || b.is_negative() {
                return Err(ModelError::NegativeShare { edge: idx });
            }
            if a.is_zero() && b.is_zero() {
                return Err(ModelError::ZeroShareSum { edge: idx });
            }
        }
        Ok(DistributionRule { shares })
    }

    /// Weighted Shapley shares `α_ij = γ_i` on every edge.
    pub fn from_node_weights(graph: &Graph, gamma: &[Rational]) -> Result<Self, ModelError> {
        DistributionRule::new(
            graph
                .edges()
                .iter()
                .map(|e| (gamma[e.u].clone(), gamma[e.v].clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn shares(&self) -> &[(Rational, Rational)] {
        &self.shares
    }

    /// `α_{node, other}` on edge `idx`.
    pub fn alpha(&self, edge: &Edge, idx: usize, node: usize) -> &Rational {
        if node == edge.u {
            &self.shares[idx].0
        } else {
            &self.shares[idx].1
        }
    }

    /// Fraction `α_ij / (α_ij + α_ji)` of edge `idx` that goes to `node`.
    pub fn fraction(&self, edge: &Edge, idx: usize, node: usize) -> Rational {
        let (a, b) = &self.shares[idx];
        let mine = if node == edge.u { a } else { b };
        mine / (a + b)
    }

    pub fn is_positive(&self) -> bool {
        self.shares
            .iter()
            .all(|(a, b)| a.is_positive() && b.is_positive())
    }

    pub fn is_equal_split(&self) -> bool {
        self.shares.iter().all(|(a, b)| a == b)
    }
}

/// Maximum over edges of the larger-to-smaller share ratio; infinite as soon as
/// one share is zero. An empty rule has disparity 1.
pub fn max_disparity(rule: &DistributionRule) -> Extended {
    let mut best = Rational::one();
    for (a, b) in rule.shares() {
        if a.is_zero() || b.is_zero() {
            return Extended::Infinite;
        }
        let r = if a > b { a / b } else { b / a };
        if r > best {
            best = r;
        }
    }
    Extended::Finite(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameWarning {
    /// A player with a single color in a game that has anti-coordination edges.
    SingletonStrategySetWithAntiEdges { node: usize },
}

impl fmt::Display for GameWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameWarning::SingletonStrategySetWithAntiEdges { node } => write!(
                f,
                "node {node} has a single color while the game has anti-coordination edges"
            ),
        }
    }
}

/// A validated clustering game instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringGame {
    graph: Graph,
    colors: usize,
    strategy_sets: Vec<Vec<Color>>,
    rule: DistributionRule,
    preferences: Vec<BTreeMap<Color, Rational>>,
    symmetric: bool,
}

impl ClusteringGame {
    /// Validates and assembles a game. `None` strategy sets mean every player
    /// may use all `colors`; `None` preferences mean all zero. Preference maps
    /// may omit colors (read as zero) but may not mention colors outside `S_i`.
    pub fn new(
        graph: Graph,
        colors: usize,
        strategy_sets: Option<Vec<Vec<Color>>>,
        rule: DistributionRule,
        preferences: Option<Vec<BTreeMap<Color, Rational>>>,
    ) -> Result<Self, ModelError> {
        let n = graph.node_count();
        if colors < 2 {
            return Err(ModelError::TooFewColors { colors });
        }
        if rule.len() != graph.edge_count() {
            return Err(ModelError::RuleSizeMismatch {
                expected: graph.edge_count(),
                found: rule.len(),
            });
        }
        let strategy_sets = match strategy_sets {
            None => vec![(1..=colors).collect::<Vec<_>>(); n],
            Some(sets) => {
                if sets.len() != n {
                    return Err(ModelError::NodeCountMismatch {
                        expected: n,
                        found: sets.len(),
                    });
                }
                let mut out = Vec::with_capacity(n);
                for (node, mut set) in sets.into_iter().enumerate() {
                    if set.is_empty() {
                        return Err(ModelError::EmptyStrategySet { node });
                    }
                    if let Some(&color) = set.iter().find(|&&c| c == 0 || c > colors) {
                        return Err(ModelError::ColorOutOfRange {
                            node,
                            color,
                            colors,
                        });
                    }
                    set.sort_unstable();
                    set.dedup();
                    out.push(set);
                }
                out
            }
        };
        let preferences = match preferences {
            None => strategy_sets
                .iter()
                .map(|set| set.iter().map(|&c| (c, Rational::zero())).collect())
                .collect(),
            Some(prefs) => {
                if prefs.len() != n {
                    return Err(ModelError::NodeCountMismatch {
                        expected: n,
                        found: prefs.len(),
                    });
                }
                let mut out = Vec::with_capacity(n);
                for (node, map) in prefs.into_iter().enumerate() {
                    let set = &strategy_sets[node];
                    for (&color, value) in &map {
                        if color == 0 || color > colors {
                            return Err(ModelError::ColorOutOfRange {
                                node,
                                color,
                                colors,
                            });
                        }
                        if set.binary_search(&color).is_err() {
                            return Err(ModelError::PreferenceOutsideStrategySet { node, color });
                        }
                        if value.is_negative() {
                            return Err(ModelError::NegativePreference { node, color });
                        }
                    }
                    let full: BTreeMap<Color, Rational> = set
                        .iter()
                        .map(|&c| (c, map.get(&c).cloned().unwrap_or_else(Rational::zero)))
                        .collect();
                    out.push(full);
                }
                out
            }
        };
        let symmetric = strategy_sets.iter().all(|s| s.len() == colors);
        Ok(ClusteringGame {
            graph,
            colors,
            strategy_sets,
            rule,
            preferences,
            symmetric,
        })
    }

    /// Symmetric game with an equal-split rule and no preferences.
    pub fn plain(graph: Graph, colors: usize) -> Result<Self, ModelError> {
        let rule = DistributionRule::equal_split(graph.edge_count());
        ClusteringGame::new(graph, colors, None, rule, None)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn strategy_set(&self, node: usize) -> &[Color] {
        &self.strategy_sets[node]
    }

    pub fn strategy_sets(&self) -> &[Vec<Color>] {
        &self.strategy_sets
    }

    pub fn rule(&self) -> &DistributionRule {
        &self.rule
    }

    pub fn preferences(&self) -> &[BTreeMap<Color, Rational>] {
        &self.preferences
    }

    /// `q_i(color)`; zero for colors outside `S_i`.
    pub fn preference(&self, node: usize, color: Color) -> Rational {
        self.preferences[node]
            .get(&color)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn edge_mix(&self) -> EdgeMix {
        self.graph.edge_mix()
    }

    pub fn has_zero_preferences(&self) -> bool {
        self.preferences
            .iter()
            .all(|m| m.values().all(Zero::is_zero))
    }

    /// Number of strategy profiles, saturating at `u128::MAX`.
    pub fn profile_space_size(&self) -> u128 {
        self.strategy_sets
            .iter()
            .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
            .unwrap_or(u128::MAX)
    }

    pub fn warnings(&self) -> Vec<GameWarning> {
        if self
            .graph
            .edges()
            .iter()
            .all(|e| e.kind == EdgeKind::Coordination)
        {
            return Vec::new();
        }
        self.strategy_sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.len() == 1)
            .map(|(node, _)| GameWarning::SingletonStrategySetWithAntiEdges { node })
            .collect()
    }

    /// The same game with every weight and preference multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self, ModelError> {
        let weights = self
            .graph
            .edges()
            .iter()
            .map(|e| &e.weight * factor)
            .collect();
        let graph = self.graph.with_weights(weights)?;
        let prefs = self
            .preferences
            .iter()
            .map(|m| m.iter().map(|(&c, v)| (c, v * factor)).collect())
            .collect();
        ClusteringGame::new(
            graph,
            self.colors,
            Some(self.strategy_sets.clone()),
            self.rule.clone(),
            Some(prefs),
        )
    }
}

/// One color per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyProfile(Vec<Color>);

impl StrategyProfile {
    pub fn new(choices: Vec<Color>) -> Self {
        StrategyProfile(choices)
    }

    /// Every player on the same color.
    pub fn uniform(n: usize, color: Color) -> Self {
        StrategyProfile(vec![color; n])
    }

    pub fn choices(&self) -> &[Color] {
        &self.0
    }

    pub fn color(&self, node: usize) -> Color {
        self.0[node]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(&self, node: usize, color: Color) -> Self {
        let mut next = self.0.clone();
        next[node] = color;
        StrategyProfile(next)
    }

    pub fn validate(&self, game: &ClusteringGame) -> Result<(), ModelError> {
        if self.0.len() != game.node_count() {
            return Err(ModelError::NodeCountMismatch {
                expected: game.node_count(),
                found: self.0.len(),
            });
        }
        for (node, &color) in self.0.iter().enumerate() {
            if game.strategy_set(node).binary_search(&color).is_err() {
                return Err(ModelError::ColorNotAllowed { node, color });
            }
        }
        Ok(())
    }
}

impl From<Vec<Color>> for StrategyProfile {
    fn from(v: Vec<Color>) -> Self {
        StrategyProfile(v)
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `u_i(s)`: preference at the chosen color plus the player's share of every
/// satisfied incident edge.
pub fn utility(game: &ClusteringGame, s: &StrategyProfile, node: usize) -> Rational {
    let graph = game.graph();
    let mine = s.color(node);
    let mut total = game.preference(node, mine);
    for &(other, idx) in graph.neighbors(node) {
        let edge = graph.edge(idx);
        if edge.kind.satisfied(mine, s.color(other)) && !edge.weight.is_zero() {
            total += game.rule().fraction(edge, idx, node) * &edge.weight;
        }
    }
    total
}

/// Utilitarian welfare `Σ_i u_i(s)`.
pub fn social_welfare(game: &ClusteringGame, s: &StrategyProfile) -> Rational {
    (0..game.node_count()).map(|i| utility(game, s, i)).sum()
}

/// Welfare computed as preferences plus full weights of satisfied edges.
pub fn welfare_by_edges(game: &ClusteringGame, s: &StrategyProfile) -> Rational {
    let prefs: Rational = (0..game.node_count())
        .map(|i| game.preference(i, s.color(i)))
        .sum();
    let edges: Rational = game
        .graph()
        .edges()
        .iter()
        .filter(|e| e.kind.satisfied(s.color(e.u), s.color(e.v)))
        .map(|e| e.weight.clone())
        .sum();
    prefs + edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn single_edge(kind: EdgeKind, w: i64, shares: (i64, i64)) -> ClusteringGame {
        let graph = Graph::new(
            2,
            vec![Edge {
                u: 0,
                v: 1,
                kind,
                weight: int(w),
            }],
        )
        .unwrap();
        let rule = DistributionRule::new(vec![(int(shares.0), int(shares.1))]).unwrap();
        ClusteringGame::new(graph, 2, None, rule, None).unwrap()
    }

    #[test]
    fn minimal_game_is_symmetric_coordination() {
        let game = single_edge(EdgeKind::Coordination, 1, (1, 1));
        assert!(game.is_symmetric());
        assert_eq!(game.edge_mix(), EdgeMix::Coordination);
        assert!(game.rule().is_equal_split());
        assert!(game.warnings().is_empty());
    }

    #[test]
    fn rejects_invalid_inputs() {
        let e = |u, v| Edge::coordination(u, v, int(1));
        assert_eq!(
            Graph::new(2, vec![e(0, 1), e(1, 0)]).unwrap_err(),
            ModelError::DuplicateEdge {
                edge: 1,
                first: 0,
                u: 0,
                v: 1
            }
        );
        assert_eq!(
            Graph::new(2, vec![e(1, 1)]).unwrap_err(),
            ModelError::SelfLoop { edge: 0, node: 1 }
        );
        assert_eq!(
            Graph::new(2, vec![Edge::coordination(0, 1, int(-1))]).unwrap_err(),
            ModelError::NegativeWeight { edge: 0 }
        );
        assert_eq!(
            DistributionRule::new(vec![(int(0), int(0))]).unwrap_err(),
            ModelError::ZeroShareSum { edge: 0 }
        );
        let graph = Graph::new(2, vec![e(0, 1)]).unwrap();
        let rule = DistributionRule::equal_split(1);
        assert_eq!(
            ClusteringGame::new(
                graph.clone(),
                2,
                Some(vec![vec![1], vec![]]),
                rule.clone(),
                None
            )
            .unwrap_err(),
            ModelError::EmptyStrategySet { node: 1 }
        );
        assert_eq!(
            ClusteringGame::new(graph, 2, Some(vec![vec![1], vec![3]]), rule, None).unwrap_err(),
            ModelError::ColorOutOfRange {
                node: 1,
                color: 3,
                colors: 2
            }
        );
    }

    #[test]
    fn warns_on_singleton_sets_with_anti_edges() {
        let graph = Graph::new(2, vec![Edge::anti(0, 1, int(1))]).unwrap();
        let game = ClusteringGame::new(
            graph,
            2,
            Some(vec![vec![1], vec![1, 2]]),
            DistributionRule::equal_split(1),
            None,
        )
        .unwrap();
        assert_eq!(
            game.warnings(),
            vec![GameWarning::SingletonStrategySetWithAntiEdges { node: 0 }]
        );
    }

    #[test]
    fn utility_examples() {
        let game = single_edge(EdgeKind::Coordination, 2, (1, 1));
        let s = StrategyProfile::new(vec![1, 1]);
        assert_eq!(utility(&game, &s, 0), int(1));
        assert_eq!(utility(&game, &s, 1), int(1));

        let game = single_edge(EdgeKind::Coordination, 4, (1, 3));
        assert_eq!(utility(&game, &s, 0), int(1));
        assert_eq!(utility(&game, &s, 1), int(3));

        let graph = Graph::new(2, vec![Edge::anti(0, 1, int(2))]).unwrap();
        let prefs = vec![BTreeMap::from([(1, int(5))]), BTreeMap::new()];
        let game = ClusteringGame::new(
            graph,
            2,
            None,
            DistributionRule::equal_split(1),
            Some(prefs),
        )
        .unwrap();
        let s = StrategyProfile::new(vec![1, 2]);
        assert_eq!(utility(&game, &s, 0), int(6));
    }

    #[test]
    fn triangle_welfare() {
        let graph = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let game = ClusteringGame::plain(graph, 3).unwrap();
        let same = StrategyProfile::uniform(3, 1);
        let distinct = StrategyProfile::new(vec![1, 2, 3]);
        assert_eq!(social_welfare(&game, &same), int(3));
        assert_eq!(social_welfare(&game, &distinct), int(0));
        assert_eq!(welfare_by_edges(&game, &same), int(3));
    }

    #[test]
    fn disparity_examples() {
        assert_eq!(
            max_disparity(&DistributionRule::equal_split(3)),
            Extended::Finite(int(1))
        );
        let rule = DistributionRule::new(vec![(int(1), int(1)), (int(1), int(3))]).unwrap();
        assert_eq!(max_disparity(&rule), Extended::Finite(int(3)));
        let rule = DistributionRule::new(vec![(int(1), int(1)), (int(0), int(1))]).unwrap();
        assert_eq!(max_disparity(&rule), Extended::Infinite);
        let rule = DistributionRule::new(vec![(ratio(3, 2), int(1))]).unwrap();
        assert_eq!(max_disparity(&rule), Extended::Finite(ratio(3, 2)));
    }

    #[test]
    fn profile_validation() {
        let game = single_edge(EdgeKind::Coordination, 1, (1, 1));
        assert!(StrategyProfile::new(vec![1, 2]).validate(&game).is_ok());
        assert_eq!(
            StrategyProfile::new(vec![1, 3])
                .validate(&game)
                .unwrap_err(),
            ModelError::ColorNotAllowed { node: 1, color: 3 }
        );
    }
}
