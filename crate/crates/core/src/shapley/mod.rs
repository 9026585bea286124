//! Generalized weighted Shapley rules: classification with a certificate or a
//! violation witness, the weighted potential, and the counterexample games
//! built from violations.

mod construct;

pub use construct::{build_br_cycle_game, build_no_pne_game, build_zero_share_cycle_game};

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use num_traits::{One, Zero};

use crate::model::{ClusteringGame, DistributionRule, Graph, ModelError, StrategyProfile};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapleyError {
    #[error("violation is not an inconsistent cycle")]
    NoInconsistentCycle,
    #[error("violation is not a cycle of the component digraph")]
    NoDigraphCycle,
    #[error("gamma has a zero or negative entry at node {node}")]
    NotWeightedShapley { node: usize },
    #[error("edge {edge}: shares do not match gamma")]
    GammaMismatch { edge: usize },
    #[error("construction needs at least {needed} colors, got {colors}")]
    TooFewColors { needed: usize, colors: usize },
    #[error("edge {edge} on the cycle is not a coordination edge")]
    NotCoordinationCycle { edge: usize },
    #[error("violation does not match the graph and rule")]
    StaleViolation,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ShapleyError {
    pub fn kind(&self) -> &'static str {
        match self {
            ShapleyError::NoInconsistentCycle => "NoInconsistentCycle",
            ShapleyError::NoDigraphCycle => "NoDigraphCycle",
            ShapleyError::NotWeightedShapley { .. } => "NotWeightedShapley",
            ShapleyError::GammaMismatch { .. } => "GammaMismatch",
            ShapleyError::TooFewColors { .. } => "TooFewColors",
            ShapleyError::NotCoordinationCycle { .. } => "NotCoordinationCycle",
            ShapleyError::StaleViolation => "StaleViolation",
            ShapleyError::Model(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Directed cycle `components[0] → components[1] → … → components[0]` in
    /// the component digraph; `edges[t]` realizes the arc leaving
    /// `components[t]` and gives its endpoint in that component a zero share.
    /// A single component is a self-loop.
    DigraphCycle {
        components: Vec<usize>,
        edges: Vec<usize>,
    },
    /// Closed walk `nodes[0], …, nodes[h−1], nodes[0]` over positive-share
    /// edges; `edges[i]` joins `nodes[i]` and `nodes[i+1]`. `alpha_h` is
    /// `Π α_{p_{i+1} p_i} / Π α_{p_i p_{i+1}}` in this orientation.
    InconsistentCycle {
        nodes: Vec<usize>,
        edges: Vec<usize>,
        alpha_h: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `sigma[i]` is the position of node `i`; `gamma` is fixed to 1 at the
    /// lowest id of every component.
    Gws {
        sigma: Vec<usize>,
        gamma: Vec<Rational>,
    },
    Violation(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapleyClassification {
    /// Positive-share components, each sorted, ordered by lowest node.
    pub components: Vec<Vec<usize>>,
    /// Component index of every node.
    pub component_of: Vec<usize>,
    pub verdict: Verdict,
}

impl ShapleyClassification {
    pub fn is_gws(&self) -> bool {
        matches!(self.verdict, Verdict::Gws { .. })
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.verdict {
            Verdict::Violation(v) => Some(v),
            Verdict::Gws { .. } => None,
        }
    }
}

fn positive(rule: &DistributionRule, idx: usize) -> bool {
    let (a, b) = &rule.shares()[idx];
    !a.is_zero() && !b.is_zero()
}

/// `α(H)` of a closed walk in the given orientation.
pub fn cycle_alpha(
    graph: &Graph,
    rule: &DistributionRule,
    nodes: &[usize],
    edges: &[usize],
) -> Rational {
    let h = nodes.len();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for i in 0..h {
        let (p, q) = (nodes[i], nodes[(i + 1) % h]);
        let e = graph.edge(edges[i]);
        num *= rule.alpha(e, edges[i], q);
        den *= rule.alpha(e, edges[i], p);
    }
    num / den
}

pub fn classify_rule(graph: &Graph, rule: &DistributionRule) -> ShapleyClassification {
    let n = graph.node_count();
    assert_eq!(rule.len(), graph.edge_count(), "one share pair per edge");

    // positive components with a BFS tree each
    let mut component_of = vec![usize::MAX; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut gamma = vec![Rational::zero(); n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if component_of[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        component_of[root] = id;
        gamma[root] = Rational::one();
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(u, idx) in graph.neighbors(v) {
                if component_of[u] != usize::MAX || !positive(rule, idx) {
                    continue;
                }
                let e = graph.edge(idx);
                component_of[u] = id;
                parent[u] = Some((v, idx));
                depth[u] = depth[v] + 1;
                gamma[u] = &gamma[v] * rule.alpha(e, idx, u) / rule.alpha(e, idx, v);
                members.push(u);
                queue.push_back(u);
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let verdict = |v: Verdict| ShapleyClassification {
        components: components.clone(),
        component_of: component_of.clone(),
        verdict: v,
    };

    // non-tree positive edges, lexicographic by endpoint pair
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&idx| {
        let e = graph.edge(idx);
        (component_of[e.u], e.u.min(e.v), e.u.max(e.v))
    });
    for &idx in &order {
        if !positive(rule, idx) {
            continue;
        }
        let e = graph.edge(idx);
        if parent[e.u].map(|p| p.1) == Some(idx) || parent[e.v].map(|p| p.1) == Some(idx) {
            continue;
        }
        if &gamma[e.u] * &rule.shares()[idx].1 == &gamma[e.v] * &rule.shares()[idx].0 {
            continue;
        }
        let (a, b) = (e.u.min(e.v), e.u.max(e.v));
        let (nodes, edges) = tree_cycle(&parent, &depth, a, b, idx);
        let alpha_h = cycle_alpha(graph, rule, &nodes, &edges);
        return verdict(Verdict::Violation(Violation::InconsistentCycle {
            nodes,
            edges,
            alpha_h,
        }));
    }

    // component digraph, one realizing edge per arc
    let r = components.len();
    let mut arcs: BTreeMap<(usize, usize), ((usize, usize), usize)> = BTreeMap::new();
    for (idx, e) in graph.edges().iter().enumerate() {
        let (a, b) = &rule.shares()[idx];
        let from_to = if a.is_zero() {
            (e.u, e.v)
        } else if b.is_zero() {
            (e.v, e.u)
        } else {
            continue;
        };
        let key = (component_of[from_to.0], component_of[from_to.1]);
        let lex = (e.u.min(e.v), e.u.max(e.v));
        let entry = arcs.entry(key).or_insert((lex, idx));
        if lex < entry.0 {
            *entry = (lex, idx);
        }
    }
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
    for (&(a, b), &(_, idx)) in &arcs {
        out[a].push((b, idx));
    }
    if let Some((comps, edges)) = digraph_cycle(&out) {
        return verdict(Verdict::Violation(Violation::DigraphCycle {
            components: comps,
            edges,
        }));
    }

    // σ: components in topological order (smallest id first), nodes by id
    let mut indegree = vec![0usize; r];
    for list in &out {
        for &(b, _) in list {
            indegree[b] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..r).filter(|&c| indegree[c] == 0).map(Reverse).collect();
    let mut sigma = vec![0usize; n];
    let mut next = 0;
    while let Some(Reverse(c)) = ready.pop() {
        for &v in &components[c] {
            sigma[v] = next;
            next += 1;
        }
        for &(b, _) in &out[c] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    debug_assert_eq!(next, n);
    verdict(Verdict::Gws { sigma, gamma })
}

/// Cycle through tree paths `a → lca → b` closed by edge `idx` from `b` to `a`.
fn tree_cycle(
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
    a: usize,
    b: usize,
    idx: usize,
) -> (Vec<usize>, Vec<usize>) {
    let (mut x, mut y) = (a, b);
    let mut up: Vec<(usize, usize)> = Vec::new();
    let mut down: Vec<(usize, usize)> = Vec::new();
    while x != y {
        if depth[x] >= depth[y] {
            let (p, e) = parent[x].expect("non-root");
            up.push((x, e));
            x = p;
        } else {
            let (p, e) = parent[y].expect("non-root");
            down.push((y, e));
            y = p;
        }
    }
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for &(v, e) in &up {
        nodes.push(v);
        edges.push(e);
    }
    nodes.push(x);
    for &(v, e) in down.iter().rev() {
        edges.push(e);
        nodes.push(v);
    }
    edges.push(idx);
    (nodes, edges)
}

/// First directed cycle found by DFS from the lowest component.
fn digraph_cycle(out: &[Vec<(usize, usize)>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let r = out.len();
    let mut state = vec![0u8; r];
    for root in 0..r {
        if state[root] != 0 {
            continue;
        }
        // (node, next arc position, arc used to enter)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, usize::MAX)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            let (v, pos) = (top.0, top.1);
            if pos == out[v].len() {
                state[v] = 2;
                stack.pop();
                continue;
            }
            top.1 += 1;
            let (b, idx) = out[v][pos];
            match state[b] {
                0 => {
                    state[b] = 1;
                    stack.push((b, 0, idx));
                }
                1 => {
                    let start = stack
                        .iter()
                        .position(|f| f.0 == b)
                        .expect("gray node on stack");
                    let comps: Vec<usize> = stack[start..].iter().map(|f| f.0).collect();
                    let mut edges: Vec<usize> = stack[start + 1..].iter().map(|f| f.2).collect();
                    edges.push(idx);
                    return Some((comps, edges));
                }
                _ => {}
            }
        }
    }
    None
}

/// Re-checks a certificate edge by edge.
pub fn verify_certificate(
    graph: &Graph,
    rule: &DistributionRule,
    sigma: &[usize],
    gamma: &[Rational],
) -> bool {
    graph.edges().iter().enumerate().all(|(idx, e)| {
        let (a, b) = &rule.shares()[idx];
        if a.is_zero() {
            sigma[e.u] < sigma[e.v]
        } else if b.is_zero() {
            sigma[e.v] < sigma[e.u]
        } else {
            a * &gamma[e.v] == b * &gamma[e.u]
        }
    })
}

impl Violation {
    /// Whether the witness is a genuine obstruction for `(graph, rule)`.
    pub fn replays(&self, graph: &Graph, rule: &DistributionRule) -> bool {
        match self {
            Violation::InconsistentCycle {
                nodes,
                edges,
                alpha_h,
            } => {
                closed_walk(graph, nodes, edges)
                    && edges.iter().all(|&idx| positive(rule, idx))
                    && cycle_alpha(graph, rule, nodes, edges) == *alpha_h
                    && !alpha_h.is_one()
            }
            Violation::DigraphCycle { components, edges } => {
                let cls = classify_rule(graph, rule);
                let t = components.len();
                t > 0
                    && edges.len() == t
                    && (0..t).all(|s| {
                        let Some(e) = edges.get(s).map(|&idx| graph.edge(idx)) else {
                            return false;
                        };
                        let (a, b) = &rule.shares()[edges[s]];
                        let (zero_side, other) = if a.is_zero() {
                            (e.u, e.v)
                        } else if b.is_zero() {
                            (e.v, e.u)
                        } else {
                            return false;
                        };
                        cls.component_of[zero_side] == components[s]
                            && cls.component_of[other] == components[(s + 1) % t]
                    })
            }
        }
    }
}

fn closed_walk(graph: &Graph, nodes: &[usize], edges: &[usize]) -> bool {
    let h = nodes.len();
    h >= 3
        && edges.len() == h
        && (0..h).all(|i| {
            edges[i] < graph.edge_count() && {
                let e = graph.edge(edges[i]);
                let (p, q) = (nodes[i], nodes[(i + 1) % h]);
                (e.u == p && e.v == q) || (e.u == q && e.v == p)
            }
        })
}

/// `Φ(s) = Σ q_i(s_i)/γ_i + Σ_{satisfied e} w_e/(γ_i + γ_j)`; every unilateral
/// deviation of `i` changes `u_i` by exactly `γ_i·ΔΦ`.
pub fn potential_value(
    game: &ClusteringGame,
    gamma: &[Rational],
    s: &StrategyProfile,
) -> Result<Rational, ShapleyError> {
    let graph = game.graph();
    assert_eq!(gamma.len(), game.node_count(), "one weight per node");
    if let Some(node) = gamma.iter().position(|g| g <= &Rational::zero()) {
        return Err(ShapleyError::NotWeightedShapley { node });
    }
    let rule = game.rule();
    for (idx, e) in graph.edges().iter().enumerate() {
        let (a, b) = &rule.shares()[idx];
        if a * &gamma[e.v] != b * &gamma[e.u] {
            return Err(ShapleyError::GammaMismatch { edge: idx });
        }
    }
    let mut phi = Rational::zero();
    for (i, g) in gamma.iter().enumerate() {
        phi += game.preference(i, s.color(i)) / g;
    }
    for e in graph.edges() {
        if e.kind.satisfied(s.color(e.u), s.color(e.v)) {
            phi += &e.weight / (&gamma[e.u] + &gamma[e.v]);
        }
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{utility, Edge};
    use crate::rational::int;

    fn triangle() -> Graph {
        Graph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn equal_split_is_gws_with_unit_gamma() {
        let g = triangle();
        let rule = DistributionRule::equal_split(3);
        let cls = classify_rule(&g, &rule);
        let Verdict::Gws { sigma, gamma } = &cls.verdict else {
            panic!("expected GWS")
        };
        assert!(gamma.iter().all(|x| x.is_one()));
        assert!(verify_certificate(&g, &rule, sigma, gamma));
    }

    #[test]
    fn inconsistent_triangle() {
        let g = triangle();
        // fractions 1/2, 1/2 and 1/3 for the first endpoint
        let rule =
            DistributionRule::new(vec![(int(1), int(1)), (int(1), int(1)), (int(1), int(2))])
                .unwrap();
        let cls = classify_rule(&g, &rule);
        let v = cls.violation().expect("violation");
        assert!(matches!(v, Violation::InconsistentCycle { .. }));
        assert!(v.replays(&g, &rule));
    }

    #[test]
    fn zero_share_self_loop() {
        let g = Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let rule = DistributionRule::new(vec![
            (int(1), int(1)),
            (int(1), int(1)),
            (int(1), int(1)),
            (int(0), int(1)),
        ])
        .unwrap();
        let cls = classify_rule(&g, &rule);
        let v = cls.violation().expect("violation");
        assert_eq!(
            v,
            &Violation::DigraphCycle {
                components: vec![0],
                edges: vec![3]
            }
        );
        assert!(v.replays(&g, &rule));
    }

    #[test]
    fn zero_shares_ordered_by_sigma() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let rule = DistributionRule::new(vec![(int(1), int(0)), (int(0), int(1))]).unwrap();
        let cls = classify_rule(&g, &rule);
        let Verdict::Gws { sigma, gamma } = &cls.verdict else {
            panic!("expected GWS")
        };
        assert_eq!(cls.components.len(), 3);
        assert!(verify_certificate(&g, &rule, sigma, gamma));
    }

    #[test]
    fn potential_on_single_edge() {
        let g = Graph::new(2, vec![Edge::coordination(0, 1, int(4))]).unwrap();
        let gamma = vec![int(1), int(3)];
        let rule = DistributionRule::from_node_weights(&g, &gamma).unwrap();
        let game = ClusteringGame::new(g, 2, None, rule, None).unwrap();
        let s = StrategyProfile::new(vec![2, 1]);
        let t = s.with(0, 1);
        let du = utility(&game, &t, 0) - utility(&game, &s, 0);
        let dphi = potential_value(&game, &gamma, &t).unwrap()
            - potential_value(&game, &gamma, &s).unwrap();
        assert_eq!(du, int(1));
        assert_eq!(dphi, int(1));
        assert_eq!(
            potential_value(&game, &[int(0), int(1)], &s),
            Err(ShapleyError::NotWeightedShapley { node: 0 })
        );
        assert_eq!(
            potential_value(&game, &[int(1), int(1)], &s),
            Err(ShapleyError::GammaMismatch { edge: 0 })
        );
    }
}
