//! Random graphs, random games, fixed graph families and the explicit
//! lower-bound / tightness instances.
//!
//! Randomness: every consumer derives its own 64-bit seed from a user seed and
//! a stream tag with [`derive_seed`] (SplitMix64 finalizer) and draws from a
//! ChaCha8 generator seeded with it. Streams never share state, so adding a
//! draw to one stream leaves every other stream unchanged.

mod constructions;
mod families;
mod random;

pub use constructions::{
    bipartite_tightness_instance, chromatic_lb_instance, chromatic_restricted_instance,
    degree_lb_instance, density_lb_instance, matching_lb_instance, prefix_block, Construction,
    MatchingBlock, MatchingInstance,
};
pub use families::{
    complete, complete_bipartite, cycle, grid, mixed_triangle, path, petersen, star, theta,
    triangle,
};
pub use random::{
    random_game, random_strategy_sets, KindMix, RandomGameConfig, RationalRange, RuleFamily,
    StrategySetDistribution,
};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Graph, ModelError};
use crate::rational::{format_rational, to_f64, Rational};
use crate::topology::TopologyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("graph has no edge to match")]
    MatchingEmpty,
    #[error("maximum degree {max_degree} does not exceed k − 1 = {}", .k - 1)]
    DegreeTooSmall { max_degree: usize, k: usize },
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl GenError {
    pub fn kind(&self) -> &'static str {
        match self {
            GenError::InvalidParams(_) => "InvalidParams",
            GenError::MatchingEmpty => "MatchingEmpty",
            GenError::DegreeTooSmall { .. } => "DegreeTooSmall",
            GenError::Topology(_) => "ChromaticCapExceeded",
            GenError::Model(e) => e.kind(),
        }
    }
}

/// SplitMix64 output for `seed` advanced by `stream + 1` steps.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regime {
    /// `p = d/n`.
    Sparse { d: Rational },
    /// `p = d`.
    Dense { d: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnpParams {
    pub n: usize,
    pub regime: Regime,
    pub seed: u64,
}

impl GnpParams {
    pub fn sparse(n: usize, d: Rational, seed: u64) -> Result<Self, GenError> {
        GnpParams {
            n,
            regime: Regime::Sparse { d },
            seed,
        }
        .validated()
    }

    pub fn dense(n: usize, d: Rational, seed: u64) -> Result<Self, GenError> {
        GnpParams {
            n,
            regime: Regime::Dense { d },
            seed,
        }
        .validated()
    }

    fn validated(self) -> Result<Self, GenError> {
        if self.n == 0 {
            return Err(GenError::InvalidParams("n must be positive".into()));
        }
        let p = self.p();
        if p.is_negative() || p > Rational::one() {
            return Err(GenError::InvalidParams(format!(
                "edge probability {} is outside [0, 1]",
                format_rational(&p)
            )));
        }
        Ok(self)
    }

    pub fn p(&self) -> Rational {
        match &self.regime {
            Regime::Sparse { d } => d / Rational::from_integer((self.n as i64).into()),
            Regime::Dense { d } => d.clone(),
        }
    }
}

/// `G(n, p)` with unit-weight coordination edges. Pairs are visited in
/// lexicographic order and the gaps between chosen pairs are drawn as
/// geometric variables from one ChaCha8 stream, so sparse graphs cost
/// `O(n + m)` draws.
pub fn gen_gnp(params: &GnpParams) -> Graph {
    let n = params.n;
    let p = params.p();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if p.is_one() {
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
    } else if !p.is_zero() {
        let total = (n as u64) * (n as u64 - 1) / 2;
        let log_q = libm::log(1.0 - to_f64(&p));
        let mut rng = stream_rng(params.seed, 0);
        let mut index: u64 = 0;
        let (mut u, mut row_end) = (0usize, (n - 1) as u64);
        loop {
            // 1 − U lies in (0, 1], so the logarithm is finite
            let draw: f64 = 1.0 - rng.random::<f64>();
            let skip = (libm::log(draw) / log_q).floor();
            let Some(skip) = skip.to_u64() else { break };
            index = match index.checked_add(skip) {
                Some(i) if i < total => i,
                _ => break,
            };
            while index >= row_end {
                u += 1;
                row_end += (n - 1 - u) as u64;
            }
            let v = n - (row_end - index) as usize;
            pairs.push((u, v));
            index += 1;
            if index >= total {
                break;
            }
        }
    }
    Graph::unweighted(n, &pairs).expect("distinct in-range pairs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn extreme_probabilities() {
        let empty = gen_gnp(&GnpParams::dense(7, int(0), 1).unwrap());
        assert_eq!(empty.edge_count(), 0);
        let full = gen_gnp(&GnpParams::dense(7, int(1), 1).unwrap());
        assert_eq!(full.edge_count(), 21);
    }

    #[test]
    fn same_seed_same_graph() {
        let params = GnpParams::sparse(200, int(3), 42).unwrap();
        let a = gen_gnp(&params);
        let b = gen_gnp(&params);
        assert_eq!(a, b);
        let c = gen_gnp(&GnpParams::sparse(200, int(3), 43).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn pair_decoding_covers_last_pair() {
        // p close to one: almost every pair, including (n−2, n−1)
        let g = gen_gnp(&GnpParams::dense(30, ratio(999, 1000), 5).unwrap());
        assert!(g.edge_count() > 400);
        assert!(g.edges().iter().all(|e| e.u < e.v && e.v < 30));
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(GnpParams::dense(5, ratio(3, 2), 0).is_err());
        assert!(GnpParams::sparse(2, int(3), 0).is_err());
    }
}
