use super::compiled::CompiledGame;
use super::{to_profile, SearchError, SearchLimits};
use crate::model::{ClusteringGame, Color, StrategyProfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BrGraphResult {
    Acyclic,
    /// Profiles along a directed cycle of strict best-response moves; the
    /// last entry repeats the first.
    Cycle(Vec<StrategyProfile>),
}

impl BrGraphResult {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, BrGraphResult::Acyclic)
    }
}

const WHITE: u8 = 0;
const GRAY: u8 = 1;
const BLACK: u8 = 2;

/// Depth-first search over the best-response graph: profiles are visited in
/// lexicographic order and moves in (player, color) order.
pub fn br_graph_acyclic(
    game: &ClusteringGame,
    limits: &SearchLimits,
) -> Result<BrGraphResult, SearchError> {
    limits.check_space(game)?;
    let cg = CompiledGame::new(game)?;
    let space = cg.space() as usize;
    let mut state = vec![WHITE; space];
    let mut profile = vec![0; cg.n];

    // (profile index, successors, next successor to try)
    let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    for root in 0..space {
        if state[root] != WHITE {
            continue;
        }
        state[root] = GRAY;
        stack.push((root, successors(&cg, root, &mut profile), 0));
        while let Some((node, succ, next)) = stack.last_mut() {
            if *next == succ.len() {
                state[*node] = BLACK;
                stack.pop();
                continue;
            }
            let target = succ[*next];
            *next += 1;
            match state[target] {
                WHITE => {
                    state[target] = GRAY;
                    let succ = successors(&cg, target, &mut profile);
                    stack.push((target, succ, 0));
                }
                GRAY => {
                    let start = stack
                        .iter()
                        .position(|f| f.0 == target)
                        .expect("gray node on stack");
                    let mut cycle: Vec<StrategyProfile> = stack[start..]
                        .iter()
                        .map(|f| {
                            cg.decode(f.0 as u128, &mut profile);
                            to_profile(&profile)
                        })
                        .collect();
                    cycle.push(cycle[0].clone());
                    return Ok(BrGraphResult::Cycle(cycle));
                }
                _ => {}
            }
        }
    }
    Ok(BrGraphResult::Acyclic)
}

fn successors(cg: &CompiledGame, index: usize, profile: &mut [Color]) -> Vec<usize> {
    cg.decode(index as u128, profile);
    let mut out = Vec::new();
    for i in 0..cg.n {
        let current = profile[i];
        let cur_u = cg.utility(profile, i);
        let utils: Vec<i128> = cg.sets[i]
            .iter()
            .map(|&c| cg.utility_with(profile, i, c))
            .collect();
        let best = *utils.iter().max().expect("nonempty strategy set");
        if best <= cur_u {
            continue;
        }
        let cur_pos = cg.sets[i].binary_search(&current).expect("color in set") as i128;
        let stride = cg.stride(i) as i128;
        for (pos, &u) in utils.iter().enumerate() {
            if u == best {
                out.push((index as i128 + (pos as i128 - cur_pos) * stride) as usize);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DistributionRule, Graph};
    use crate::rational::int;

    #[test]
    fn single_player_is_acyclic() {
        let prefs = vec![[(1, int(1)), (2, int(3))].into_iter().collect()];
        let game = ClusteringGame::new(
            Graph::new(1, vec![]).unwrap(),
            2,
            None,
            DistributionRule::equal_split(0),
            Some(prefs),
        )
        .unwrap();
        assert!(br_graph_acyclic(&game, &SearchLimits::default())
            .unwrap()
            .is_acyclic());
    }

    #[test]
    fn equal_split_triangle_is_acyclic() {
        let game =
            ClusteringGame::plain(Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(), 3)
                .unwrap();
        assert!(br_graph_acyclic(&game, &SearchLimits::default())
            .unwrap()
            .is_acyclic());
    }
}
