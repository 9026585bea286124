use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::compiled::CompiledGame;
use super::{to_profile, SearchError};
use crate::model::{ClusteringGame, Color, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerPolicy {
    /// Scan players cyclically, starting after the last mover.
    RoundRobin,
    /// Always move the improving player with the smallest id.
    LowestImprovingId,
    /// Uniform improving player, uniform best response.
    SeededRandom(u64),
}

#[derive(Debug, Clone)]
pub struct Scheduler {
    policy: SchedulerPolicy,
    cursor: usize,
    rng: Option<ChaCha8Rng>,
}

impl Scheduler {
    pub fn new(policy: SchedulerPolicy) -> Self {
        let rng = match policy {
            SchedulerPolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Scheduler {
            policy,
            cursor: 0,
            rng,
        }
    }

    pub fn policy(&self) -> SchedulerPolicy {
        self.policy
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BrStep {
    Moved {
        player: usize,
        from: Color,
        to: Color,
        profile: StrategyProfile,
    },
    Stable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BrDynamicsResult {
    Converged {
        profile: StrategyProfile,
        steps: usize,
    },
    /// Profiles visited around the cycle; the last entry repeats the first.
    CycleFound { profiles: Vec<StrategyProfile> },
    StepLimit {
        profile: StrategyProfile,
        steps: usize,
    },
}

/// Best-response dynamics over a fixed game.
pub struct Dynamics {
    cg: CompiledGame,
    scheduler: Scheduler,
}

impl Dynamics {
    pub fn new(game: &ClusteringGame, policy: SchedulerPolicy) -> Result<Self, SearchError> {
        Ok(Dynamics {
            cg: CompiledGame::new(game)?,
            scheduler: Scheduler::new(policy),
        })
    }

    /// Strictly improving best responses of `player`, ascending; empty if none.
    fn improving(&self, profile: &[Color], player: usize) -> Vec<Color> {
        let cg = &self.cg;
        let current = cg.utility(profile, player);
        let utils: Vec<(Color, i128)> = cg.sets[player]
            .iter()
            .map(|&c| (c, cg.utility_with(profile, player, c)))
            .collect();
        let best = utils.iter().map(|&(_, u)| u).max().unwrap_or(current);
        if best <= current {
            return Vec::new();
        }
        utils
            .into_iter()
            .filter(|&(_, u)| u == best)
            .map(|(c, _)| c)
            .collect()
    }

    /// One strict best-response move, or `None` at a pure Nash equilibrium.
    fn step_raw(&mut self, profile: &[Color]) -> Option<(usize, Color)> {
        let n = self.cg.n;
        match self.scheduler.policy {
            SchedulerPolicy::LowestImprovingId => {
                (0..n).find_map(|i| self.improving(profile, i).first().map(|&c| (i, c)))
            }
            SchedulerPolicy::RoundRobin => {
                for offset in 0..n {
                    let i = (self.scheduler.cursor + offset) % n;
                    if let Some(&c) = self.improving(profile, i).first() {
                        self.scheduler.cursor = (i + 1) % n;
                        return Some((i, c));
                    }
                }
                None
            }
            SchedulerPolicy::SeededRandom(_) => {
                let movers: Vec<(usize, Vec<Color>)> = (0..n)
                    .map(|i| (i, self.improving(profile, i)))
                    .filter(|(_, b)| !b.is_empty())
                    .collect();
                if movers.is_empty() {
                    return None;
                }
                let rng = self.scheduler.rng.as_mut().expect("seeded scheduler");
                let (i, options) = &movers[rng.random_range(0..movers.len())];
                Some((*i, options[rng.random_range(0..options.len())]))
            }
        }
    }

    pub fn step(&mut self, s: &StrategyProfile) -> BrStep {
        match self.step_raw(s.choices()) {
            None => BrStep::Stable,
            Some((player, to)) => BrStep::Moved {
                player,
                from: s.color(player),
                to,
                profile: s.with(player, to),
            },
        }
    }

    /// Iterates until stable, a repeated profile, or `max_steps` moves.
    pub fn run(&mut self, start: &StrategyProfile, max_steps: usize) -> BrDynamicsResult {
        let mut profile = start.choices().to_vec();
        let mut trail: Vec<Vec<Color>> = vec![profile.clone()];
        let mut seen: HashMap<Vec<Color>, usize> = HashMap::from([(profile.clone(), 0)]);
        for steps in 0..max_steps {
            match self.step_raw(&profile) {
                None => {
                    return BrDynamicsResult::Converged {
                        profile: to_profile(&profile),
                        steps,
                    }
                }
                Some((player, to)) => {
                    profile[player] = to;
                    // any closed walk of strict moves is a best-response cycle
                    if let Some(&first) = seen.get(&profile) {
                        let mut profiles: Vec<StrategyProfile> =
                            trail[first..].iter().map(|p| to_profile(p)).collect();
                        profiles.push(to_profile(&profile));
                        return BrDynamicsResult::CycleFound { profiles };
                    }
                    seen.entry(profile.clone()).or_insert(trail.len());
                    trail.push(profile.clone());
                }
            }
        }
        BrDynamicsResult::StepLimit {
            profile: to_profile(&profile),
            steps: max_steps,
        }
    }
}

/// One best-response move from `s` under `scheduler`.
pub fn br_step(
    game: &ClusteringGame,
    s: &StrategyProfile,
    scheduler: &mut Scheduler,
) -> Result<BrStep, SearchError> {
    s.validate(game)?;
    let mut dynamics = Dynamics {
        cg: CompiledGame::new(game)?,
        scheduler: scheduler.clone(),
    };
    let step = dynamics.step(s);
    *scheduler = dynamics.scheduler;
    Ok(step)
}

pub fn run_dynamics(
    game: &ClusteringGame,
    start: &StrategyProfile,
    policy: SchedulerPolicy,
    max_steps: usize,
) -> Result<BrDynamicsResult, SearchError> {
    start.validate(game)?;
    Ok(Dynamics::new(game, policy)?.run(start, max_steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, Graph};
    use crate::rational::int;

    #[test]
    fn mismatched_edge_moves_player_zero() {
        let graph = Graph::new(2, vec![Edge::coordination(0, 1, int(1))]).unwrap();
        let game = ClusteringGame::plain(graph, 2).unwrap();
        let mut scheduler = Scheduler::new(SchedulerPolicy::RoundRobin);
        let s = StrategyProfile::new(vec![1, 2]);
        let step = br_step(&game, &s, &mut scheduler).unwrap();
        assert_eq!(
            step,
            BrStep::Moved {
                player: 0,
                from: 1,
                to: 2,
                profile: StrategyProfile::new(vec![2, 2])
            }
        );
        let next = StrategyProfile::new(vec![2, 2]);
        assert_eq!(
            br_step(&game, &next, &mut scheduler).unwrap(),
            BrStep::Stable
        );
    }

    #[test]
    fn dynamics_converge_on_coordination_path() {
        let graph = Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let game = ClusteringGame::plain(graph, 3).unwrap();
        let start = StrategyProfile::new(vec![1, 2, 3, 1]);
        for policy in [
            SchedulerPolicy::RoundRobin,
            SchedulerPolicy::LowestImprovingId,
            SchedulerPolicy::SeededRandom(7),
        ] {
            match run_dynamics(&game, &start, policy, 100).unwrap() {
                BrDynamicsResult::Converged { .. } => {}
                other => panic!("{policy:?}: {other:?}"),
            }
        }
    }
}
