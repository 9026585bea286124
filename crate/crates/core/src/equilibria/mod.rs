//! Exact equilibrium machinery: (ε,k)-equilibrium checks, enumeration, social
//! optimum, price of anarchy, best-response dynamics and best-response graph
//! cycle detection.

mod brgraph;
mod check;
pub(crate) mod compiled;
mod dynamics;
mod search;

use std::fmt;

use num_traits::One;

use crate::model::{ClusteringGame, ModelError, StrategyProfile};
use crate::rational::{format_rational, Rational};

pub use brgraph::{br_graph_acyclic, BrGraphResult};
pub use check::{best_responses, is_epsilon_k_equilibrium, DeviationWitness, EquilibriumCheck};
pub use dynamics::{
    br_step, run_dynamics, BrDynamicsResult, BrStep, Dynamics, Scheduler, SchedulerPolicy,
};
pub use search::{
    enumerate_equilibria, price_of_anarchy, social_optimum, worst_equilibrium, PoaReport, PoaValue,
};

pub const DEFAULT_PROFILE_CAP: u128 = 10_000_000;
pub const DEFAULT_COALITION_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search space of {size} profiles exceeds the cap of {cap}")]
    SearchSpaceExceeded { size: u128, cap: u128 },
    #[error("coalition size {k} exceeds the cap of {cap}")]
    CoalitionCapExceeded { k: usize, cap: usize },
    #[error("invalid equilibrium parameters: {0}")]
    InvalidParams(String),
    #[error("payoff magnitudes are too large for exact integer search")]
    Overflow,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl SearchError {
    pub fn kind(&self) -> &'static str {
        match self {
            SearchError::SearchSpaceExceeded { .. } => "SearchSpaceExceeded",
            SearchError::CoalitionCapExceeded { .. } => "CoalitionCapExceeded",
            SearchError::InvalidParams(_) => "InvalidParams",
            SearchError::Overflow => "Overflow",
            SearchError::Model(e) => e.kind(),
        }
    }

    /// Cap exceedances are reported with their own exit status by the CLI.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            SearchError::SearchSpaceExceeded { .. } | SearchError::CoalitionCapExceeded { .. }
        )
    }
}

/// `ε ≥ 1` and coalition size bound `k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumParams {
    pub epsilon: Rational,
    pub k: usize,
}

impl EquilibriumParams {
    pub fn new(epsilon: Rational, k: usize) -> Result<Self, SearchError> {
        if epsilon < Rational::one() {
            return Err(SearchError::InvalidParams(format!(
                "epsilon must be at least 1, got {}",
                format_rational(&epsilon)
            )));
        }
        if k == 0 {
            return Err(SearchError::InvalidParams("k must be at least 1".into()));
        }
        Ok(EquilibriumParams { epsilon, k })
    }

    /// Pure Nash equilibrium: `ε = 1`, `k = 1`.
    pub fn nash() -> Self {
        EquilibriumParams {
            epsilon: Rational::one(),
            k: 1,
        }
    }

    pub(crate) fn validate(
        &self,
        game: &ClusteringGame,
        limits: &SearchLimits,
    ) -> Result<(), SearchError> {
        let n = game.node_count();
        if self.k > n {
            return Err(SearchError::InvalidParams(format!(
                "k = {} exceeds n = {n}",
                self.k
            )));
        }
        if self.k > limits.max_coalition {
            return Err(SearchError::CoalitionCapExceeded {
                k: self.k,
                cap: limits.max_coalition,
            });
        }
        Ok(())
    }
}

impl fmt::Display for EquilibriumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.epsilon), self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_profiles: u128,
    pub max_coalition: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_profiles: DEFAULT_PROFILE_CAP,
            max_coalition: DEFAULT_COALITION_CAP,
        }
    }
}

impl SearchLimits {
    pub fn with_profiles(max_profiles: u128) -> Self {
        SearchLimits {
            max_profiles,
            ..Default::default()
        }
    }

    pub(crate) fn check_space(&self, game: &ClusteringGame) -> Result<(), SearchError> {
        let size = game.profile_space_size();
        if size > self.max_profiles {
            return Err(SearchError::SearchSpaceExceeded {
                size,
                cap: self.max_profiles,
            });
        }
        Ok(())
    }
}

pub(crate) fn to_profile(colors: &[usize]) -> StrategyProfile {
    StrategyProfile::new(colors.to_vec())
}
