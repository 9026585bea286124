use std::fmt;

use num_traits::One;

use super::density::{max_subgraph_density, EdgeFilter};
use crate::model::{max_disparity, ClusteringGame, EdgeMix};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Value(Rational),
    /// The game misses a hypothesis of the bound; the reason names it.
    NotApplicable(String),
}

impl BoundValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            BoundValue::Value(v) => Some(v),
            BoundValue::NotApplicable(_) => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Value(v) => f.write_str(&format_rational(v)),
            BoundValue::NotApplicable(reason) => write!(f, "not applicable ({reason})"),
        }
    }
}

/// Price-of-anarchy bounds for one game and `(ε, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoaBounds {
    /// `1 + (1 + ᾱ)·ρ(G)`: symmetric, positive rule, pure equilibria.
    pub density: BoundValue,
    /// `1 + 2ρ(G)`: symmetric, equal split, pure equilibria.
    pub equal_split: BoundValue,
    /// `5 + 2ρ(G[E_c])`: symmetric, equal split, pure equilibria.
    pub refined: BoundValue,
    /// `4 + 3ᾱ`: as `density`, on a graph declared planar.
    pub planar: BoundValue,
    /// `2εΔ(G)`: coordination edges, equal split, no preferences, `k ≥ 2`.
    pub degree_upper: BoundValue,
    /// `ε·max{1, Δ/(k−1) − 1}`: worst case over games on the same graph.
    pub degree_lower: BoundValue,
}

impl PoaBounds {
    pub fn named(&self) -> [(&'static str, &BoundValue); 6] {
        [
            ("density", &self.density),
            ("equal_split", &self.equal_split),
            ("refined", &self.refined),
            ("planar", &self.planar),
            ("degree_upper", &self.degree_upper),
            ("degree_lower", &self.degree_lower),
        ]
    }

    /// Smallest applicable upper bound.
    pub fn tightest_upper(&self) -> Option<&Rational> {
        [
            &self.density,
            &self.equal_split,
            &self.refined,
            &self.planar,
            &self.degree_upper,
        ]
        .into_iter()
        .filter_map(BoundValue::value)
        .min()
    }
}

fn require(conditions: &[(bool, &str)]) -> Option<String> {
    conditions
        .iter()
        .find(|(ok, _)| !ok)
        .map(|(_, reason)| reason.to_string())
}

pub fn topological_poa_bounds(
    game: &ClusteringGame,
    epsilon: &Rational,
    k: usize,
    planar: bool,
) -> PoaBounds {
    let graph = game.graph();
    let rule = game.rule();
    let rho = max_subgraph_density(graph, EdgeFilter::All).value;
    let rho_c = max_subgraph_density(graph, EdgeFilter::CoordinationOnly).value;
    let disparity = max_disparity(rule);
    let pure = epsilon.is_one();
    let symmetric = game.is_symmetric();
    let positive = rule.is_positive();
    let equal = rule.is_equal_split();

    let gate = |conds: &[(bool, &str)], value: &dyn Fn() -> Rational| match require(conds) {
        Some(reason) => BoundValue::NotApplicable(reason),
        None => BoundValue::Value(value()),
    };
    let base = [
        (pure, "epsilon is not 1"),
        (symmetric, "strategy sets are restricted"),
    ];
    let alpha_bar = || {
        disparity
            .finite()
            .cloned()
            .expect("positive rule has finite disparity")
    };

    let density = gate(
        &[base[0], base[1], (positive, "some share is zero")],
        &|| Rational::one() + (Rational::one() + alpha_bar()) * &rho,
    );
    let equal_split = gate(
        &[base[0], base[1], (equal, "rule is not equal split")],
        &|| Rational::one() + int(2) * &rho,
    );
    let refined = gate(
        &[base[0], base[1], (equal, "rule is not equal split")],
        &|| int(5) + int(2) * &rho_c,
    );
    let planar_bound = gate(
        &[
            (planar, "graph not declared planar"),
            base[0],
            base[1],
            (positive, "some share is zero"),
        ],
        &|| int(4) + int(3) * alpha_bar(),
    );

    let coordination = matches!(game.edge_mix(), EdgeMix::Coordination);
    let degree_conds = [
        (
            coordination,
            "not a coordination game with at least one edge",
        ),
        (equal, "rule is not equal split"),
        (game.has_zero_preferences(), "preferences are not all zero"),
        (k >= 2, "k is below 2"),
    ];
    let delta = int(graph.max_degree() as i64);
    let degree_upper = gate(&degree_conds, &|| int(2) * epsilon * &delta);
    let degree_lower = gate(&degree_conds, &|| {
        let spread = &delta / int(k as i64 - 1) - Rational::one();
        epsilon * spread.max(Rational::one())
    });

    PoaBounds {
        density,
        equal_split,
        refined,
        planar: planar_bound,
        degree_upper,
        degree_lower,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DistributionRule, Graph};
    use crate::rational::ratio;

    #[test]
    fn triangle_equal_split() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let game = ClusteringGame::plain(g, 3).unwrap();
        let b = topological_poa_bounds(&game, &int(1), 1, false);
        assert_eq!(b.density.value(), Some(&int(3)));
        assert_eq!(b.equal_split.value(), Some(&int(3)));
        assert_eq!(b.refined.value(), Some(&int(7)));
        assert!(b.degree_upper.value().is_none());
    }

    #[test]
    fn complete_bipartite_with_disparity_three() {
        let mut pairs = vec![];
        for u in 0..3 {
            for v in 3..7 {
                pairs.push((u, v));
            }
        }
        let g = Graph::unweighted(7, &pairs).unwrap();
        let rule = DistributionRule::new(vec![(int(1), int(3)); 12]).unwrap();
        let game = ClusteringGame::new(g, 3, None, rule, None).unwrap();
        let b = topological_poa_bounds(&game, &int(1), 1, false);
        assert_eq!(b.density.value(), Some(&ratio(55, 7)));
    }

    #[test]
    fn zero_share_blocks_density_bound() {
        let g = Graph::unweighted(2, &[(0, 1)]).unwrap();
        let rule = DistributionRule::new(vec![(int(0), int(1))]).unwrap();
        let game = ClusteringGame::new(g, 2, None, rule, None).unwrap();
        let b = topological_poa_bounds(&game, &int(1), 1, false);
        assert!(matches!(b.density, BoundValue::NotApplicable(_)));
    }
}
