//! Counterexample games built from a violation witness.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Zero};

use super::{classify_rule, cycle_alpha, positive, ShapleyError, Violation};
use crate::model::{ClusteringGame, Color, DistributionRule, EdgeKind, Graph};
use crate::rational::{pow, Rational};

/// A cycle `nodes[0] → nodes[1] → … → nodes[0]` with `edges[i]` leaving
/// `nodes[i]` forward, and the weight put on each of its edges.
struct WeightedCycle {
    nodes: Vec<usize>,
    edges: Vec<usize>,
    weights: Vec<Rational>,
}

impl WeightedCycle {
    /// `(forward share·w, backward share·w)` of position `i`.
    fn gains(&self, graph: &Graph, rule: &DistributionRule, i: usize) -> (Rational, Rational) {
        let h = self.nodes.len();
        let v = self.nodes[i];
        let prev = (i + h - 1) % h;
        let fwd = rule.fraction(graph.edge(self.edges[i]), self.edges[i], v) * &self.weights[i];
        let bwd =
            rule.fraction(graph.edge(self.edges[prev]), self.edges[prev], v) * &self.weights[prev];
        (fwd, bwd)
    }

    fn graph_weights(&self, graph: &Graph) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); graph.edge_count()];
        for (pos, &idx) in self.edges.iter().enumerate() {
            w[idx] = self.weights[pos].clone();
        }
        w
    }

    fn total(&self) -> Rational {
        self.weights.iter().sum()
    }
}

/// Balanced weights along the cycle, each position scaled by `(1+ε)^i`. A
/// position whose backward share is zero restarts the chain at 1.
fn chain_weights(
    graph: &Graph,
    rule: &DistributionRule,
    nodes: &[usize],
    edges: &[usize],
    eps: &Rational,
) -> Vec<Rational> {
    let h = nodes.len();
    let mut base = vec![Rational::one(); h];
    for i in 1..h {
        let v = nodes[i];
        let back = rule.fraction(graph.edge(edges[i - 1]), edges[i - 1], v);
        let fwd = rule.fraction(graph.edge(edges[i]), edges[i], v);
        if !back.is_zero() {
            base[i] = back * &base[i - 1] / fwd;
        }
    }
    let step = Rational::one() + eps;
    base.into_iter()
        .enumerate()
        .map(|(i, w)| w * pow(&step, i + 1))
        .collect()
}

/// Largest `ε = 2^{-j}` with `(1+ε)^n·α(H) < 1`.
fn pick_epsilon(n: usize, alpha_h: &Rational) -> Rational {
    let mut eps = Rational::one();
    while pow(&(Rational::one() + &eps), n) * alpha_h >= Rational::one() {
        eps /= Rational::from_integer(2.into());
    }
    eps
}

fn inconsistent_cycle(
    graph: &Graph,
    rule: &DistributionRule,
    violation: &Violation,
) -> Result<WeightedCycle, ShapleyError> {
    let Violation::InconsistentCycle { nodes, edges, .. } = violation else {
        return Err(ShapleyError::NoInconsistentCycle);
    };
    if !violation.replays(graph, rule) {
        return Err(ShapleyError::StaleViolation);
    }
    let (mut nodes, mut edges) = (nodes.clone(), edges.clone());
    let mut alpha_h = cycle_alpha(graph, rule, &nodes, &edges);
    if alpha_h > Rational::one() {
        // reverse the orientation: nodes[0], nodes[h−1], …, nodes[1]
        nodes[1..].reverse();
        edges.reverse();
        alpha_h = alpha_h.recip();
    }
    let eps = pick_epsilon(graph.node_count(), &alpha_h);
    let weights = chain_weights(graph, rule, &nodes, &edges, &eps);
    Ok(WeightedCycle {
        nodes,
        edges,
        weights,
    })
}

fn zero_share_cycle(
    graph: &Graph,
    rule: &DistributionRule,
    violation: &Violation,
) -> Result<WeightedCycle, ShapleyError> {
    let Violation::DigraphCycle {
        components,
        edges: arcs,
    } = violation
    else {
        return Err(ShapleyError::NoDigraphCycle);
    };
    if !violation.replays(graph, rule) {
        return Err(ShapleyError::StaleViolation);
    }
    let cls = classify_rule(graph, rule);
    let t = components.len();
    // arc s: zero side i_s in components[s], positive side j_s in components[s+1]
    let ends: Vec<(usize, usize)> = arcs
        .iter()
        .map(|&idx| {
            let e = graph.edge(idx);
            if rule.shares()[idx].0.is_zero() {
                (e.u, e.v)
            } else {
                (e.v, e.u)
            }
        })
        .collect();
    // walk i_0 ⇝ j_{t−1} inside components[0], step to i_{t−1}, and so on
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut s = 0;
    for _ in 0..t {
        let entry = ends[s].0;
        let back = (s + t - 1) % t;
        let exit = ends[back].1;
        let (path_nodes, path_edges) = component_path(graph, rule, &cls.component_of, entry, exit);
        nodes.extend(path_nodes);
        edges.extend(path_edges);
        edges.push(arcs[back]);
        s = back;
    }
    let weights = chain_weights(graph, rule, &nodes, &edges, &Rational::one());
    Ok(WeightedCycle {
        nodes,
        edges,
        weights,
    })
}

/// Shortest path over positive-share edges, as nodes and connecting edges.
fn component_path(
    graph: &Graph,
    rule: &DistributionRule,
    component_of: &[usize],
    from: usize,
    to: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; graph.node_count()];
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(u, idx) in graph.neighbors(v) {
            if !seen[u] && positive(rule, idx) && component_of[u] == component_of[from] {
                seen[u] = true;
                prev.insert(u, (v, idx));
                queue.push_back(u);
            }
        }
    }
    let mut nodes = vec![to];
    let mut edges = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, idx) = prev[&cur];
        edges.push(idx);
        nodes.push(p);
        cur = p;
    }
    nodes.reverse();
    edges.reverse();
    (nodes, edges)
}

fn two_color_game(
    graph: &Graph,
    rule: &DistributionRule,
    cycle: &WeightedCycle,
    colors: usize,
) -> Result<ClusteringGame, ShapleyError> {
    if colors < 2 {
        return Err(ShapleyError::TooFewColors { needed: 2, colors });
    }
    let weighted = graph.with_weights(cycle.graph_weights(graph))?;
    let k = cycle.total();
    let prefs: Vec<BTreeMap<Color, Rational>> = (0..graph.node_count())
        .map(|_| BTreeMap::from([(1, k.clone()), (2, k.clone())]))
        .collect();
    Ok(ClusteringGame::new(
        weighted,
        colors,
        None,
        rule.clone(),
        Some(prefs),
    )?)
}

/// Game on `graph` whose best-response graph has a cycle: only the violating
/// cycle carries weight and every player strictly prefers satisfying its
/// forward cycle edge. Digraph cycles go through
/// [`build_zero_share_cycle_game`].
pub fn build_br_cycle_game(
    graph: &Graph,
    rule: &DistributionRule,
    violation: &Violation,
    colors: usize,
) -> Result<ClusteringGame, ShapleyError> {
    let cycle = match violation {
        Violation::InconsistentCycle { .. } => inconsistent_cycle(graph, rule, violation)?,
        Violation::DigraphCycle { .. } => zero_share_cycle(graph, rule, violation)?,
    };
    two_color_game(graph, rule, &cycle, colors)
}

/// Same as [`build_br_cycle_game`] for a cycle of the component digraph: the
/// cycle is traversed so that every zero share falls on a backward edge.
pub fn build_zero_share_cycle_game(
    graph: &Graph,
    rule: &DistributionRule,
    violation: &Violation,
    colors: usize,
) -> Result<ClusteringGame, ShapleyError> {
    let cycle = zero_share_cycle(graph, rule, violation)?;
    two_color_game(graph, rule, &cycle, colors)
}

/// Coordination game without a pure Nash equilibrium. The first three cycle
/// players get big-M preferences on rotating color pairs (the top color of
/// each carries an extra `δ`). Any further players are relays over colors
/// 1..=3 with small offsets `0, 2λ, λ`: a relay follows its forward neighbor
/// unless that means color 1 while the backward neighbor plays color 2.
pub fn build_no_pne_game(
    graph: &Graph,
    rule: &DistributionRule,
    violation: &Violation,
    colors: usize,
) -> Result<ClusteringGame, ShapleyError> {
    if colors < 3 {
        return Err(ShapleyError::TooFewColors { needed: 3, colors });
    }
    let cycle = match violation {
        Violation::InconsistentCycle { .. } => inconsistent_cycle(graph, rule, violation)?,
        Violation::DigraphCycle { .. } => zero_share_cycle(graph, rule, violation)?,
    };
    if let Some(&edge) = cycle
        .edges
        .iter()
        .find(|&&idx| graph.edge(idx).kind != EdgeKind::Coordination)
    {
        return Err(ShapleyError::NotCoordinationCycle { edge });
    }
    let half = Rational::new(1.into(), 2.into());
    // forward minus backward gain, positive at every position
    let margins: Vec<(Rational, Rational)> = (0..cycle.nodes.len())
        .map(|i| {
            let (fwd, bwd) = cycle.gains(graph, rule, i);
            (&fwd - bwd, fwd)
        })
        .collect();
    let big_m = cycle.total() + Rational::one();
    let delta = margins[..3]
        .iter()
        .map(|(d, _)| d * &half)
        .min()
        .expect("cycle has three players");
    let top = &big_m + &delta;
    // (color with M + δ, color with M) for the first three players
    let table: [(Color, Color); 3] = [(3, 1), (1, 2), (2, 3)];
    let mut prefs: Vec<BTreeMap<Color, Rational>> = vec![BTreeMap::new(); graph.node_count()];
    for (pos, &v) in cycle.nodes.iter().enumerate() {
        prefs[v] = match table.get(pos) {
            Some(&(hi, lo)) => BTreeMap::from([(hi, top.clone()), (lo, big_m.clone())]),
            None => {
                // λ strictly between D/2 and min(D, f/2)
                let (d, fwd) = &margins[pos];
                let upper = d.clone().min(fwd * &half);
                let lambda = (d * &half + upper) * &half;
                BTreeMap::from([
                    (1, big_m.clone()),
                    (2, &big_m + &lambda + &lambda),
                    (3, &big_m + &lambda),
                ])
            }
        };
    }
    let weighted = graph.with_weights(cycle.graph_weights(graph))?;
    Ok(ClusteringGame::new(
        weighted,
        colors,
        None,
        rule.clone(),
        Some(prefs),
    )?)
}
