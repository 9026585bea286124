//! Explicit instances whose equilibrium / optimum ratio meets a bound.
//!
//! Every builder returns the intended equilibrium profile and, when known in
//! closed form, an optimal profile. Nothing here checks the equilibrium; the
//! callers verify it with the equilibria module.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;

use super::GenError;
use crate::model::{ClusteringGame, Color, DistributionRule, Edge, Graph, StrategyProfile};
use crate::rational::{format_rational, int, Rational};
use crate::topology::{
    chromatic_number, max_subgraph_density, maximum_matching, EdgeFilter, TopologyError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub game: ClusteringGame,
    pub equilibrium: StrategyProfile,
    pub optimum: Option<StrategyProfile>,
    /// Construction name and parameters, for the `meta` key of game files.
    pub meta: serde_json::Value,
}

fn reweighted(graph: &Graph, weight: impl Fn(&Edge) -> Rational) -> Graph {
    let edges = graph
        .edges()
        .iter()
        .map(|e| Edge::coordination(e.u, e.v, weight(e)))
        .collect();
    Graph::new(graph.node_count(), edges).expect("same topology")
}

/// `K_{l,r}` where every node prefers its private color and the shared color
/// `c_0` equally, with shares `(γ_l, γ_r)`. Private colors are `1..=l` on the
/// left and `l+1..=l+r` on the right; `c_0 = l + r + 1`.
pub fn bipartite_tightness_instance(
    l: usize,
    r: usize,
    gamma_l: &Rational,
    gamma_r: &Rational,
) -> Result<Construction, GenError> {
    if l == 0 || r == 0 {
        return Err(GenError::InvalidParams("both sides need a node".into()));
    }
    if gamma_l <= &Rational::zero() || gamma_r <= &Rational::zero() {
        return Err(GenError::InvalidParams(
            "node weights must be positive".into(),
        ));
    }
    let graph = super::complete_bipartite(l, r);
    let rule = DistributionRule::new(vec![(gamma_l.clone(), gamma_r.clone()); l * r])?;
    let sum = gamma_l + gamma_r;
    let (left, right) = (gamma_l / &sum, gamma_r / &sum);
    let c0 = l + r + 1;
    let prefs: Vec<BTreeMap<Color, Rational>> = (0..l + r)
        .map(|v| {
            let value = if v < l { left.clone() } else { right.clone() };
            BTreeMap::from([(v + 1, value.clone()), (c0, value)])
        })
        .collect();
    let game = ClusteringGame::new(graph, c0, None, rule, Some(prefs))?;
    Ok(Construction {
        game,
        equilibrium: StrategyProfile::new((1..=l + r).collect()),
        optimum: Some(StrategyProfile::uniform(l + r, c0)),
        meta: json!({
            "construction": "bipartite-tightness",
            "l": l, "r": r,
            "gamma_l": format_rational(gamma_l), "gamma_r": format_rational(gamma_r),
        }),
    })
}

/// Weight 2 on `E[S]` and 0 elsewhere; node `S[i]` prefers colors `i+1` and
/// `c_0 = |S| + 1` at 1. Nodes outside `S` play `c_0`.
pub fn density_lb_instance(graph: &Graph, subset: &[usize]) -> Result<Construction, GenError> {
    let mut members: Vec<usize> = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    let n = graph.node_count();
    if members.is_empty() || members.iter().any(|&v| v >= n) {
        return Err(GenError::InvalidParams(
            "subset must be a nonempty set of nodes".into(),
        ));
    }
    let mut inside = vec![false; n];
    for &v in &members {
        inside[v] = true;
    }
    let weighted = reweighted(graph, |e| {
        if inside[e.u] && inside[e.v] {
            int(2)
        } else {
            Rational::zero()
        }
    });
    let c0 = members.len() + 1;
    let colors = c0.max(2);
    let mut prefs: Vec<BTreeMap<Color, Rational>> = vec![BTreeMap::new(); n];
    let mut eq = vec![c0; n];
    for (i, &v) in members.iter().enumerate() {
        prefs[v] = BTreeMap::from([(i + 1, Rational::one()), (c0, Rational::one())]);
        eq[v] = i + 1;
    }
    let rule = DistributionRule::equal_split(graph.edge_count());
    let game = ClusteringGame::new(weighted, colors, None, rule, Some(prefs))?;
    Ok(Construction {
        game,
        equilibrium: StrategyProfile::new(eq),
        optimum: Some(StrategyProfile::uniform(n, c0)),
        meta: json!({"construction": "density-lb", "subset": members}),
    })
}

/// Where the matching of [`matching_lb_instance`] is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingBlock {
    /// Node set of a maximum-density subgraph.
    Densest,
    /// The first `⌈c/4⌉` nodes (all of them when `c ≥ 4n`).
    Prefix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingInstance {
    pub construction: Construction,
    pub block: Vec<usize>,
    /// Edges induced by the block in the input graph.
    pub block_edges: usize,
    /// The matching `e_1, …, e_q`.
    pub matching: Vec<(usize, usize)>,
    /// `|E[V_M]|`.
    pub matched_induced_edges: usize,
}

impl MatchingInstance {
    /// `|E[V_M]| / (2q)`.
    pub fn lower_bound(&self) -> Rational {
        Rational::new(
            (self.matched_induced_edges as i64).into(),
            (2 * self.matching.len() as i64).into(),
        )
    }
}

pub fn prefix_block(n: usize, c: usize) -> Vec<usize> {
    if c >= 4 * n {
        return (0..n).collect();
    }
    (0..c.div_ceil(4)).collect()
}

/// A matching `M` of at most `c` edges inside the block gets weight 2, the
/// other edges of `E[V_M]` weight 1, everything else 0. Both endpoints of
/// `e_i` play color `i`; unmatched nodes play `q + 1` when `q < c`, else 1.
pub fn matching_lb_instance(
    graph: &Graph,
    c: usize,
    block: MatchingBlock,
) -> Result<MatchingInstance, GenError> {
    if c < 2 {
        return Err(GenError::InvalidParams("need at least two colors".into()));
    }
    let n = graph.node_count();
    let nodes = match block {
        MatchingBlock::Densest => max_subgraph_density(graph, EdgeFilter::All).witness,
        MatchingBlock::Prefix => prefix_block(n, c),
    };
    let mut in_block = vec![false; n];
    for &v in &nodes {
        in_block[v] = true;
    }
    let block_pairs: Vec<(usize, usize)> = graph
        .pairs()
        .filter(|&(u, v)| in_block[u] && in_block[v])
        .collect();
    let block_edges = block_pairs.len();
    let sub = Graph::unweighted(n, &block_pairs).expect("subgraph of a simple graph");
    let mut matching = maximum_matching(&sub);
    if matching.is_empty() {
        return Err(GenError::MatchingEmpty);
    }
    matching.truncate(c);
    let q = matching.len();

    let mut matched = vec![false; n];
    let mut eq = vec![if q < c { q + 1 } else { 1 }; n];
    let mut in_m = BTreeMap::new();
    for (i, &(u, v)) in matching.iter().enumerate() {
        matched[u] = true;
        matched[v] = true;
        eq[u] = i + 1;
        eq[v] = i + 1;
        in_m.insert((u, v), ());
    }
    let weighted = reweighted(graph, |e| {
        let key = (e.u.min(e.v), e.u.max(e.v));
        if in_m.contains_key(&key) {
            int(2)
        } else if matched[e.u] && matched[e.v] {
            int(1)
        } else {
            Rational::zero()
        }
    });
    let matched_induced_edges = graph
        .edges()
        .iter()
        .filter(|e| matched[e.u] && matched[e.v])
        .count();
    let rule = DistributionRule::equal_split(graph.edge_count());
    let game = ClusteringGame::new(weighted, c, None, rule, None)?;
    let block_name = match block {
        MatchingBlock::Densest => "densest",
        MatchingBlock::Prefix => "prefix",
    };
    Ok(MatchingInstance {
        construction: Construction {
            game,
            equilibrium: StrategyProfile::new(eq),
            optimum: Some(StrategyProfile::uniform(n, 1)),
            meta: json!({"construction": "matching-lb", "c": c, "block": block_name}),
        },
        block: nodes,
        block_edges,
        matching,
        matched_induced_edges,
    })
}

/// Node colored `i` by an optimal proper coloring may play `i` or the shared
/// color `χ + 1`; unit coordination weights, no preferences. The coloring
/// itself is an equilibrium with welfare 0.
pub fn chromatic_lb_instance(graph: &Graph, cap: usize) -> Result<Construction, GenError> {
    let n = graph.node_count();
    if n > cap {
        return Err(TopologyError::ChromaticCapExceeded { n, cap }.into());
    }
    let coloring = chromatic_number(graph);
    let shared = coloring.chromatic_number + 1;
    let sets: Vec<Vec<Color>> = coloring.colors.iter().map(|&c| vec![c, shared]).collect();
    let weighted = reweighted(graph, |_| Rational::one());
    let rule = DistributionRule::equal_split(graph.edge_count());
    let game = ClusteringGame::new(weighted, shared, Some(sets), rule, None)?;
    Ok(Construction {
        game,
        equilibrium: StrategyProfile::new(coloring.colors),
        optimum: Some(StrategyProfile::uniform(n, shared)),
        meta: json!({"construction": "chromatic-lb", "chromatic_number": shared - 1}),
    })
}

/// The same shape with only `c` colors: node colored `i` may play
/// `((i − 1) mod (c − 1)) + 1` or `c`. With `c < χ` every profile keeps an edge
/// satisfied, so the price of anarchy is finite.
pub fn chromatic_restricted_instance(
    graph: &Graph,
    c: usize,
    cap: usize,
) -> Result<Construction, GenError> {
    if c < 2 {
        return Err(GenError::InvalidParams("need at least two colors".into()));
    }
    let n = graph.node_count();
    if n > cap {
        return Err(TopologyError::ChromaticCapExceeded { n, cap }.into());
    }
    let coloring = chromatic_number(graph);
    let folded: Vec<Color> = coloring
        .colors
        .iter()
        .map(|&i| (i - 1) % (c - 1) + 1)
        .collect();
    let sets: Vec<Vec<Color>> = folded.iter().map(|&i| vec![i, c]).collect();
    let weighted = reweighted(graph, |_| Rational::one());
    let rule = DistributionRule::equal_split(graph.edge_count());
    let game = ClusteringGame::new(weighted, c, Some(sets), rule, None)?;
    Ok(Construction {
        game,
        equilibrium: StrategyProfile::new(folded),
        optimum: Some(StrategyProfile::uniform(n, c)),
        meta: json!({"construction": "chromatic-restricted", "c": c}),
    })
}

/// Three colors `a = 1`, `b = 2`, `c = 3`. The lowest-id node `i` of maximum
/// degree and its `k − 1` lowest-id neighbors may play `{a, b}`, everyone else
/// `{a, c}`. Edges from `i` to those neighbors weigh 1, `i`'s other edges `ε`,
/// the rest 0. The profile puts `b` on the chosen nodes and `c` elsewhere.
pub fn degree_lb_instance(
    graph: &Graph,
    epsilon: &Rational,
    k: usize,
) -> Result<Construction, GenError> {
    if k < 2 {
        return Err(GenError::InvalidParams("k must be at least 2".into()));
    }
    if epsilon < &Rational::one() {
        return Err(GenError::InvalidParams("epsilon must be at least 1".into()));
    }
    let n = graph.node_count();
    let max_degree = graph.max_degree();
    if max_degree < k {
        return Err(GenError::DegreeTooSmall { max_degree, k });
    }
    let center = (0..n)
        .find(|&v| graph.degree(v) == max_degree)
        .expect("some node attains Δ");
    let chosen: Vec<usize> = graph
        .neighbors(center)
        .iter()
        .take(k - 1)
        .map(|&(u, _)| u)
        .collect();
    let mut special = vec![false; n];
    special[center] = true;
    for &u in &chosen {
        special[u] = true;
    }
    let weighted = reweighted(graph, |e| {
        if e.u != center && e.v != center {
            Rational::zero()
        } else if special[e.u] && special[e.v] {
            Rational::one()
        } else {
            epsilon.clone()
        }
    });
    let sets: Vec<Vec<Color>> = special
        .iter()
        .map(|&s| if s { vec![1, 2] } else { vec![1, 3] })
        .collect();
    let eq: Vec<Color> = special.iter().map(|&s| if s { 2 } else { 3 }).collect();
    let rule = DistributionRule::equal_split(graph.edge_count());
    let game = ClusteringGame::new(weighted, 3, Some(sets), rule, None)?;
    Ok(Construction {
        game,
        equilibrium: StrategyProfile::new(eq),
        optimum: Some(StrategyProfile::uniform(n, 1)),
        meta: json!({
            "construction": "degree-lb", "epsilon": format_rational(epsilon), "k": k,
            "center": center, "chosen": chosen,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{is_epsilon_k_equilibrium, EquilibriumParams};
    use crate::generators::{complete, star, triangle};
    use crate::model::social_welfare;
    use crate::rational::ratio;

    fn ratio_of(c: &Construction) -> Rational {
        social_welfare(&c.game, c.optimum.as_ref().unwrap())
            / social_welfare(&c.game, &c.equilibrium)
    }

    #[test]
    fn bipartite_ratio() {
        let c = bipartite_tightness_instance(2, 3, &int(1), &int(1)).unwrap();
        assert!(
            is_epsilon_k_equilibrium(&c.game, &c.equilibrium, &EquilibriumParams::nash())
                .unwrap()
                .is_yes()
        );
        assert_eq!(ratio_of(&c), ratio(17, 5));
    }

    #[test]
    fn density_triangle() {
        let c = density_lb_instance(&triangle(), &[0, 1, 2]).unwrap();
        assert!(
            is_epsilon_k_equilibrium(&c.game, &c.equilibrium, &EquilibriumParams::nash())
                .unwrap()
                .is_yes()
        );
        assert_eq!(ratio_of(&c), int(3));
    }

    #[test]
    fn matching_on_k4() {
        let m = matching_lb_instance(&complete(4), 2, MatchingBlock::Densest).unwrap();
        assert_eq!(m.matching.len(), 2);
        assert_eq!(m.lower_bound(), ratio(6, 4));
        let c = &m.construction;
        assert!(
            is_epsilon_k_equilibrium(&c.game, &c.equilibrium, &EquilibriumParams::nash())
                .unwrap()
                .is_yes()
        );
        assert!(ratio_of(c) >= m.lower_bound());
        assert_eq!(prefix_block(60, 16), vec![0, 1, 2, 3]);
        assert_eq!(prefix_block(60, 4), vec![0]);
        assert_eq!(prefix_block(3, 40), vec![0, 1, 2]);
        let empty = Graph::unweighted(3, &[]).unwrap();
        assert_eq!(
            matching_lb_instance(&empty, 2, MatchingBlock::Densest),
            Err(GenError::MatchingEmpty)
        );
    }

    #[test]
    fn chromatic_triangle_has_zero_welfare_equilibrium() {
        let c = chromatic_lb_instance(&triangle(), 20).unwrap();
        assert_eq!(c.game.colors(), 4);
        assert!(
            is_epsilon_k_equilibrium(&c.game, &c.equilibrium, &EquilibriumParams::nash())
                .unwrap()
                .is_yes()
        );
        assert!(social_welfare(&c.game, &c.equilibrium).is_zero());
    }

    #[test]
    fn degree_star() {
        let c = degree_lb_instance(&star(5), &int(1), 2).unwrap();
        let params = EquilibriumParams::new(int(1), 2).unwrap();
        assert!(is_epsilon_k_equilibrium(&c.game, &c.equilibrium, &params)
            .unwrap()
            .is_yes());
        assert_eq!(social_welfare(&c.game, &c.equilibrium), int(1));
        assert_eq!(ratio_of(&c), int(5));
        assert_eq!(
            degree_lb_instance(&star(1), &int(1), 2),
            Err(GenError::DegreeTooSmall {
                max_degree: 1,
                k: 2
            })
        );
    }
}
