//! Seeded random games on a given graph and random strategy sets.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{stream_rng, GenError};
use crate::model::{ClusteringGame, Color, DistributionRule, Edge, EdgeKind, Graph};
use crate::rational::{ratio, Rational};

const STREAM_KINDS: u64 = 1;
const STREAM_WEIGHTS: u64 = 2;
const STREAM_RULE: u64 = 3;
const STREAM_PREFS: u64 = 4;
const STREAM_SETS: u64 = 5;

/// Values `k / denom` for `k` uniform in `min_numer..=max_numer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalRange {
    pub min_numer: i64,
    pub max_numer: i64,
    pub denom: i64,
}

impl RationalRange {
    pub fn new(min_numer: i64, max_numer: i64, denom: i64) -> Result<Self, GenError> {
        if denom <= 0 || min_numer < 0 || min_numer > max_numer {
            return Err(GenError::InvalidParams(format!(
                "bad rational range {min_numer}..={max_numer} over {denom}"
            )));
        }
        Ok(RationalRange {
            min_numer,
            max_numer,
            denom,
        })
    }

    pub fn unit() -> Self {
        RationalRange {
            min_numer: 1,
            max_numer: 1,
            denom: 1,
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        ratio(
            rng.random_range(self.min_numer..=self.max_numer),
            self.denom,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFamily {
    EqualSplit,
    /// Independent shares in `1..=4` on both sides of every edge.
    RandomPositive,
    /// Node weights `γ_i` in `1..=4`, shares `α_ij = γ_i`.
    WeightedShapley,
    /// As `RandomPositive`, but each edge zeroes one side with probability 1/3.
    WithZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindMix {
    /// Kinds of the input graph.
    Keep,
    AllCoordination,
    AllAnti,
    /// Each edge anti-coordination with probability 1/2.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomGameConfig {
    pub colors: usize,
    pub weights: RationalRange,
    /// `None` for zero preferences.
    pub preferences: Option<RationalRange>,
    pub rule: RuleFamily,
    pub kinds: KindMix,
    /// `None` for a symmetric game.
    pub strategy_sets: Option<StrategySetDistribution>,
}

impl RandomGameConfig {
    /// Unit weights, no preferences, equal split, symmetric.
    pub fn plain(colors: usize) -> Self {
        RandomGameConfig {
            colors,
            weights: RationalRange::unit(),
            preferences: None,
            rule: RuleFamily::EqualSplit,
            kinds: KindMix::Keep,
            strategy_sets: None,
        }
    }
}

pub fn random_game(
    graph: &Graph,
    config: &RandomGameConfig,
    seed: u64,
) -> Result<ClusteringGame, GenError> {
    let n = graph.node_count();
    let mut kinds_rng = stream_rng(seed, STREAM_KINDS);
    let mut weights_rng = stream_rng(seed, STREAM_WEIGHTS);
    let edges: Vec<Edge> = graph
        .edges()
        .iter()
        .map(|e| {
            let kind = match config.kinds {
                KindMix::Keep => e.kind,
                KindMix::AllCoordination => EdgeKind::Coordination,
                KindMix::AllAnti => EdgeKind::AntiCoordination,
                KindMix::Mixed => {
                    if kinds_rng.random_bool(0.5) {
                        EdgeKind::AntiCoordination
                    } else {
                        EdgeKind::Coordination
                    }
                }
            };
            let weight = config.weights.sample(&mut weights_rng);
            Edge {
                u: e.u,
                v: e.v,
                weight,
                kind,
            }
        })
        .collect();
    let graph = Graph::new(n, edges)?;

    let mut rule_rng = stream_rng(seed, STREAM_RULE);
    let share = |rng: &mut ChaCha8Rng| Rational::from_integer(rng.random_range(1..=4i64).into());
    let rule = match config.rule {
        RuleFamily::EqualSplit => DistributionRule::equal_split(graph.edge_count()),
        RuleFamily::RandomPositive => DistributionRule::new(
            (0..graph.edge_count())
                .map(|_| (share(&mut rule_rng), share(&mut rule_rng)))
                .collect(),
        )?,
        RuleFamily::WeightedShapley => {
            let gamma: Vec<Rational> = (0..n).map(|_| share(&mut rule_rng)).collect();
            DistributionRule::from_node_weights(&graph, &gamma)?
        }
        RuleFamily::WithZeros => DistributionRule::new(
            (0..graph.edge_count())
                .map(|_| {
                    let (a, b) = (share(&mut rule_rng), share(&mut rule_rng));
                    match rule_rng.random_range(0..6u8) {
                        0 => (Rational::zero(), b),
                        1 => (a, Rational::zero()),
                        _ => (a, b),
                    }
                })
                .collect(),
        )?,
    };

    let sets = match &config.strategy_sets {
        Some(dist) => Some(random_strategy_sets(n, config.colors, dist, seed)?),
        None => None,
    };
    let preferences = match &config.preferences {
        Some(range) => {
            let mut rng = stream_rng(seed, STREAM_PREFS);
            let prefs: Vec<BTreeMap<Color, Rational>> = (0..n)
                .map(|v| {
                    let colors: Vec<Color> = match &sets {
                        Some(sets) => sets[v].clone(),
                        None => (1..=config.colors).collect(),
                    };
                    colors
                        .into_iter()
                        .map(|c| (c, range.sample(&mut rng)))
                        .collect()
                })
                .collect();
            Some(prefs)
        }
        None => None,
    };
    Ok(ClusteringGame::new(
        graph,
        config.colors,
        sets,
        rule,
        preferences,
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategySetDistribution {
    /// Uniform over the `2^c − 1` nonempty subsets of `[c]`.
    UniformNonemptySubsets { c: usize },
    /// `{1, i}` with `i` uniform in `2..=c`: two sets always share color 1,
    /// yet a player avoiding color 1 meets nobody.
    PairWithCommon { c: usize },
    /// Explicit sets with integer weights.
    Custom(Vec<(Vec<Color>, u32)>),
}

impl StrategySetDistribution {
    pub fn colors(&self) -> usize {
        match self {
            StrategySetDistribution::UniformNonemptySubsets { c }
            | StrategySetDistribution::PairWithCommon { c } => *c,
            StrategySetDistribution::Custom(sets) => sets
                .iter()
                .flat_map(|(s, _)| s.iter().copied())
                .max()
                .unwrap_or(0),
        }
    }

    /// Exact probability that two independent draws intersect.
    pub fn common_probability(&self) -> Rational {
        match self {
            StrategySetDistribution::UniformNonemptySubsets { c } => {
                let c = *c as u32;
                let total = (1i128 << c) - 1;
                let disjoint = 3i128.pow(c) - (1i128 << (c + 1)) + 1;
                let r = |v: i128| Rational::from_integer(v.into());
                Rational::one() - r(disjoint) / r(total * total)
            }
            StrategySetDistribution::PairWithCommon { .. } => Rational::one(),
            StrategySetDistribution::Custom(sets) => {
                let total: u64 = sets.iter().map(|(_, w)| *w as u64).sum();
                let mut hit = 0u64;
                for (a, wa) in sets {
                    for (b, wb) in sets {
                        if a.iter().any(|x| b.contains(x)) {
                            hit += *wa as u64 * *wb as u64;
                        }
                    }
                }
                ratio(hit as i64, (total * total) as i64)
            }
        }
    }

    /// Common-color constant the family guarantees, if any. Uniform subsets
    /// meet any fixed color with probability at least `2^{c−1}/(2^c − 1)`,
    /// which is above one half; the pair family guarantees nothing for a
    /// player that avoids color 1.
    pub fn claimed_d0(&self) -> Option<Rational> {
        match self {
            StrategySetDistribution::UniformNonemptySubsets { c } => {
                let c = *c as u32;
                Some(ratio(1i64 << (c - 1), (1i64 << c) - 1))
            }
            StrategySetDistribution::PairWithCommon { .. } => None,
            StrategySetDistribution::Custom(_) => None,
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: &str| Err(GenError::InvalidParams(msg.into()));
        match self {
            StrategySetDistribution::UniformNonemptySubsets { c } if *c == 0 || *c > 30 => {
                bad("uniform subsets need 1 ≤ c ≤ 30")
            }
            StrategySetDistribution::PairWithCommon { c } if *c < 2 => {
                bad("pair family needs c ≥ 2")
            }
            StrategySetDistribution::Custom(sets)
                if sets.is_empty()
                    || sets.iter().all(|(_, w)| *w == 0)
                    || sets.iter().any(|(s, _)| s.is_empty() || s.contains(&0)) =>
            {
                bad("custom family needs nonempty sets of positive colors and a positive weight")
            }
            _ => Ok(()),
        }
    }
}

pub fn random_strategy_sets(
    n: usize,
    c: usize,
    dist: &StrategySetDistribution,
    seed: u64,
) -> Result<Vec<Vec<Color>>, GenError> {
    dist.validate()?;
    if dist.colors() > c {
        return Err(GenError::InvalidParams(format!(
            "distribution uses {} colors, game has {c}",
            dist.colors()
        )));
    }
    let mut rng = stream_rng(seed, STREAM_SETS);
    let sets = (0..n)
        .map(|_| match dist {
            StrategySetDistribution::UniformNonemptySubsets { c } => {
                let mask = rng.random_range(1..(1u64 << c));
                (1..=*c).filter(|i| mask >> (i - 1) & 1 == 1).collect()
            }
            StrategySetDistribution::PairWithCommon { c } => vec![1, rng.random_range(2..=*c)],
            StrategySetDistribution::Custom(sets) => {
                let total: u64 = sets.iter().map(|(_, w)| *w as u64).sum();
                let mut pick = rng.random_range(0..total);
                let mut chosen = &sets[0].0;
                for (set, w) in sets {
                    if pick < *w as u64 {
                        chosen = set;
                        break;
                    }
                    pick -= *w as u64;
                }
                let mut out = chosen.clone();
                out.sort_unstable();
                out.dedup();
                out
            }
        })
        .collect();
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};
    use crate::rational::int;

    #[test]
    fn same_seed_same_game() {
        let config = RandomGameConfig {
            colors: 3,
            weights: RationalRange::new(1, 5, 2).unwrap(),
            preferences: Some(RationalRange::new(0, 3, 1).unwrap()),
            rule: RuleFamily::WithZeros,
            kinds: KindMix::Mixed,
            strategy_sets: Some(StrategySetDistribution::UniformNonemptySubsets { c: 3 }),
        };
        let g = cycle(6);
        assert_eq!(
            random_game(&g, &config, 9).unwrap(),
            random_game(&g, &config, 9).unwrap()
        );
        assert_ne!(
            random_game(&g, &config, 9).unwrap(),
            random_game(&g, &config, 10).unwrap()
        );
    }

    #[test]
    fn all_anti_kind() {
        let config = RandomGameConfig {
            kinds: KindMix::AllAnti,
            ..RandomGameConfig::plain(2)
        };
        let game = random_game(&path(4), &config, 1).unwrap();
        assert!(game
            .graph()
            .edges()
            .iter()
            .all(|e| e.kind == EdgeKind::AntiCoordination));
    }

    #[test]
    fn uniform_common_probability() {
        // c = 1: one set; c = 2: {1},{2},{1,2} → disjoint ordered pairs 2 of 9
        assert_eq!(
            StrategySetDistribution::UniformNonemptySubsets { c: 1 }.common_probability(),
            int(1)
        );
        assert_eq!(
            StrategySetDistribution::UniformNonemptySubsets { c: 2 }.common_probability(),
            ratio(7, 9)
        );
        let sets = random_strategy_sets(
            5,
            1,
            &StrategySetDistribution::UniformNonemptySubsets { c: 1 },
            3,
        )
        .unwrap();
        assert!(sets.iter().all(|s| s == &vec![1]));
    }

    #[test]
    fn pair_family_has_no_claim() {
        let dist = StrategySetDistribution::PairWithCommon { c: 5 };
        assert_eq!(dist.claimed_d0(), None);
        let sets = random_strategy_sets(20, 5, &dist, 0).unwrap();
        assert!(sets.iter().all(|s| s.len() == 2 && s[0] == 1 && s[1] >= 2));
    }
}
