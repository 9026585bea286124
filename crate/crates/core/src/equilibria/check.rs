use std::collections::BTreeSet;

use super::compiled::{CompiledGame, Epsilon};
use super::{EquilibriumParams, SearchError};
use crate::model::{utility, ClusteringGame, Color, StrategyProfile};
use crate::rational::{Extended, Rational};

/// A coalition together with a joint deviation that makes every member
/// strictly better off by more than the factor `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    pub coalition: Vec<usize>,
    pub deviation: Vec<Color>,
    /// `u_j(s') / u_j(s)` per member; infinite when `u_j(s) = 0`.
    pub improvement: Vec<Extended>,
}

impl DeviationWitness {
    pub fn apply(&self, s: &StrategyProfile) -> StrategyProfile {
        let mut choices = s.choices().to_vec();
        for (&node, &color) in self.coalition.iter().zip(&self.deviation) {
            choices[node] = color;
        }
        StrategyProfile::new(choices)
    }

    /// Recomputes utilities and confirms the strict improvement of every member.
    pub fn replays(&self, game: &ClusteringGame, s: &StrategyProfile, epsilon: &Rational) -> bool {
        let deviated = self.apply(s);
        !self.coalition.is_empty()
            && self
                .coalition
                .iter()
                .all(|&j| utility(game, &deviated, j) > epsilon * utility(game, s, j))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquilibriumCheck {
    Yes,
    No(DeviationWitness),
}

impl EquilibriumCheck {
    pub fn is_yes(&self) -> bool {
        matches!(self, EquilibriumCheck::Yes)
    }
}

/// Colors maximizing player `i`'s utility against `s_{-i}`, ascending.
pub fn best_responses(game: &ClusteringGame, s: &StrategyProfile, i: usize) -> Vec<Color> {
    let mut best: Option<Rational> = None;
    let mut out = Vec::new();
    for &c in game.strategy_set(i) {
        let u = utility(game, &s.with(i, c), i);
        match &best {
            Some(b) if &u < b => {}
            Some(b) if &u == b => out.push(c),
            _ => {
                best = Some(u);
                out.clear();
                out.push(c);
            }
        }
    }
    out
}

pub fn is_epsilon_k_equilibrium(
    game: &ClusteringGame,
    s: &StrategyProfile,
    params: &EquilibriumParams,
) -> Result<EquilibriumCheck, SearchError> {
    s.validate(game)?;
    if params.k > game.node_count() {
        return Err(SearchError::InvalidParams(format!(
            "k = {} exceeds n = {}",
            params.k,
            game.node_count()
        )));
    }
    let cg = CompiledGame::new(game)?;
    let eps = Epsilon::new(&params.epsilon);
    let coalitions = connected_coalitions(&cg, params.k);
    let mut profile = s.choices().to_vec();
    let utils: Vec<i128> = (0..cg.n).map(|i| cg.utility(&profile, i)).collect();
    Ok(
        match find_deviation(&cg, &mut profile, &utils, &eps, &coalitions) {
            None => EquilibriumCheck::Yes,
            Some((coalition, deviation)) => {
                let mut deviated = s.choices().to_vec();
                for (&j, &c) in coalition.iter().zip(&deviation) {
                    deviated[j] = c;
                }
                let improvement = coalition
                    .iter()
                    .map(|&j| {
                        let new = cg.to_rational(cg.utility(&deviated, j));
                        Extended::quotient(&new, &cg.to_rational(utils[j]))
                    })
                    .collect();
                EquilibriumCheck::No(DeviationWitness {
                    coalition,
                    deviation,
                    improvement,
                })
            }
        },
    )
}

/// Connected node sets of size `2..=k` in the graph of payoff-relevant edges,
/// ordered by size and then lexicographically.
///
/// A profitable deviation by a disconnected coalition restricts to a profitable
/// deviation by any of its connected parts, so only connected ones are needed.
pub(crate) fn connected_coalitions(cg: &CompiledGame, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: BTreeSet<Vec<usize>> = (0..cg.n).map(|i| vec![i]).collect();
    for _ in 2..=k {
        let mut next = BTreeSet::new();
        for set in &layer {
            for &m in set {
                for inc in &cg.inc[m] {
                    if let Err(pos) = set.binary_search(&inc.other) {
                        let mut grown = set.clone();
                        grown.insert(pos, inc.other);
                        next.insert(grown);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// First profitable deviation: unilateral moves by node id and color, then
/// coalitions in the order produced by [`connected_coalitions`], each joint
/// deviation in lexicographic order. `profile` is restored before returning.
pub(crate) fn find_deviation(
    cg: &CompiledGame,
    profile: &mut [Color],
    utils: &[i128],
    eps: &Epsilon,
    coalitions: &[Vec<usize>],
) -> Option<(Vec<usize>, Vec<Color>)> {
    for i in 0..cg.n {
        for &c in &cg.sets[i] {
            if c != profile[i] && eps.improves(cg.utility_with(profile, i, c), utils[i]) {
                return Some((vec![i], vec![c]));
            }
        }
    }
    coalitions
        .iter()
        .find_map(|members| coalition_deviation(cg, profile, utils, eps, members))
}

fn coalition_deviation(
    cg: &CompiledGame,
    profile: &mut [Color],
    utils: &[i128],
    eps: &Epsilon,
    members: &[usize],
) -> Option<(Vec<usize>, Vec<Color>)> {
    let original: Vec<Color> = members.iter().map(|&m| profile[m]).collect();
    let mut pos = vec![0usize; members.len()];
    let mut found = None;
    'outer: loop {
        for (t, &m) in members.iter().enumerate() {
            profile[m] = cg.sets[m][pos[t]];
        }
        let changed = members
            .iter()
            .zip(&original)
            .any(|(&m, &c)| profile[m] != c);
        if changed
            && members
                .iter()
                .all(|&m| eps.improves(cg.utility(profile, m), utils[m]))
        {
            found = Some((
                members.to_vec(),
                members.iter().map(|&m| profile[m]).collect(),
            ));
            break;
        }
        for t in (0..members.len()).rev() {
            pos[t] += 1;
            if pos[t] < cg.sets[members[t]].len() {
                continue 'outer;
            }
            pos[t] = 0;
        }
        break;
    }
    for (&m, &c) in members.iter().zip(&original) {
        profile[m] = c;
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DistributionRule, Edge, Graph};
    use crate::rational::int;

    fn single_edge(kind_anti: bool) -> ClusteringGame {
        let e = if kind_anti {
            Edge::anti(0, 1, int(1))
        } else {
            Edge::coordination(0, 1, int(1))
        };
        ClusteringGame::plain(Graph::new(2, vec![e]).unwrap(), 2).unwrap()
    }

    #[test]
    fn best_response_follows_neighbor() {
        let game = single_edge(false);
        let s = StrategyProfile::new(vec![2, 1]);
        assert_eq!(best_responses(&game, &s, 0), vec![1]);
    }

    #[test]
    fn isolated_node_ties() {
        let game = ClusteringGame::plain(Graph::new(1, vec![]).unwrap(), 2).unwrap();
        assert_eq!(
            best_responses(&game, &StrategyProfile::new(vec![1]), 0),
            vec![1, 2]
        );
    }

    #[test]
    fn anti_edges_push_to_third_color() {
        let graph =
            Graph::new(3, vec![Edge::anti(0, 1, int(1)), Edge::anti(0, 2, int(1))]).unwrap();
        let game =
            ClusteringGame::new(graph, 3, None, DistributionRule::equal_split(2), None).unwrap();
        let s = StrategyProfile::new(vec![1, 1, 2]);
        assert_eq!(best_responses(&game, &s, 0), vec![3]);
    }

    #[test]
    fn coalition_needs_all_members_to_gain() {
        let graph = Graph::new(2, vec![Edge::coordination(0, 1, int(2))]).unwrap();
        let game = ClusteringGame::new(
            graph,
            3,
            Some(vec![vec![1, 3], vec![2, 3]]),
            DistributionRule::equal_split(1),
            None,
        )
        .unwrap();
        // neither can gain alone from (1,2), so it is a (1,1)-equilibrium
        let s = StrategyProfile::new(vec![1, 2]);
        assert!(
            is_epsilon_k_equilibrium(&game, &s, &EquilibriumParams::nash())
                .unwrap()
                .is_yes()
        );
        let params = EquilibriumParams::new(int(1), 2).unwrap();
        match is_epsilon_k_equilibrium(&game, &s, &params).unwrap() {
            EquilibriumCheck::No(w) => {
                assert_eq!(w.coalition, vec![0, 1]);
                assert_eq!(w.deviation, vec![3, 3]);
                assert!(w.improvement.iter().all(Extended::is_infinite));
            }
            EquilibriumCheck::Yes => panic!("expected joint deviation"),
        }
    }
}
