use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::{trial_seed, Cell, ExperimentError, ExperimentReport, Row};
use crate::equilibria::{
    enumerate_equilibria, is_epsilon_k_equilibrium, price_of_anarchy, social_optimum,
    EquilibriumParams, PoaValue, SearchLimits,
};
use crate::generators::{
    degree_lb_instance, density_lb_instance, derive_seed, gen_gnp, matching_lb_instance,
    prefix_block, random_game, random_strategy_sets, GnpParams, KindMix, MatchingBlock,
    RandomGameConfig, RationalRange, RuleFamily, StrategySetDistribution,
};
use crate::model::{social_welfare, utility, ClusteringGame, DistributionRule, StrategyProfile};
use crate::rational::{format_rational, int, ratio, Extended, Rational};
use crate::topology::{max_subgraph_density, topological_poa_bounds, EdgeFilter};

// sub-streams of a trial seed
const GAME_STREAM: u64 = 100;
const SETS_STREAM: u64 = 200;

/// Runs `trial(key, t, seed)` for every key and trial index in parallel and
/// returns the rows in `(key, t)` order.
fn run_trials<F>(
    keys: &[usize],
    trials: usize,
    seed_of: impl Fn(usize, usize) -> u64 + Sync,
    trial: F,
) -> Result<Vec<Row>, ExperimentError>
where
    F: Fn(usize, usize, u64) -> Result<Vec<Cell>, ExperimentError> + Sync,
{
    let tasks: Vec<(usize, usize)> = keys
        .iter()
        .flat_map(|&k| (0..trials).map(move |t| (k, t)))
        .collect();
    tasks
        .par_iter()
        .map(|&(key, t)| {
            let seed = seed_of(key, t);
            let start = Instant::now();
            let values = trial(key, t, seed)?;
            Ok(Row {
                key,
                trial: t,
                seed,
                values,
                millis: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

fn rat(v: &Rational) -> Cell {
    Cell::Rat(v.clone())
}

fn count(v: usize) -> Cell {
    Cell::Int(v as i64)
}

/// Sparse regime: `ρ(G)` and `1 + 2ρ` for every trial; at `n ≤ exact_max_n`
/// also the exact PoA of the density instance on the `ρ` witness and of random
/// equal-split games, each checked against `1 + 2ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoaConfig {
    pub ns: Vec<usize>,
    pub d: Rational,
    pub trials: usize,
    pub seed: u64,
    pub exact_max_n: usize,
    pub random_games: usize,
    pub colors: usize,
    pub limits: SearchLimits,
}

impl Default for SparsePoaConfig {
    fn default() -> Self {
        SparsePoaConfig {
            ns: vec![8, 200, 400, 800],
            d: int(2),
            trials: 50,
            seed: 0,
            exact_max_n: 10,
            random_games: 2,
            colors: 3,
            limits: SearchLimits::with_profiles(u128::MAX),
        }
    }
}

pub fn run_sparse_poa(config: &SparsePoaConfig) -> Result<ExperimentReport, ExperimentError> {
    let columns = vec![
        "edges",
        "rho",
        "bound",
        "lb_poa",
        "lb_tight",
        "random_poa",
        "within_bound",
    ];
    let game_config = RandomGameConfig {
        colors: config.colors,
        weights: RationalRange::new(1, 4, 1)?,
        preferences: Some(RationalRange::new(0, 2, 1)?),
        rule: RuleFamily::EqualSplit,
        kinds: KindMix::AllCoordination,
        strategy_sets: None,
    };
    let nash = EquilibriumParams::nash();
    let rows = run_trials(
        &config.ns,
        config.trials,
        |n, t| trial_seed(config.seed, n, t),
        |n, _, seed| {
            let graph = gen_gnp(&GnpParams::sparse(n, config.d.clone(), seed)?);
            let density = max_subgraph_density(&graph, EdgeFilter::All);
            let bound = Rational::one() + int(2) * &density.value;
            let mut row = vec![count(graph.edge_count()), rat(&density.value), rat(&bound)];
            if n > config.exact_max_n {
                row.extend([Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing]);
                return Ok(row);
            }
            let lb = density_lb_instance(&graph, &density.witness)?;
            let lb_poa = price_of_anarchy(&lb.game, &nash, &config.limits)?.value;
            let mut ok = lb_poa.at_most(&bound);
            let mut worst: Option<PoaValue> = None;
            for g in 0..config.random_games {
                let game = random_game(
                    &graph,
                    &game_config,
                    derive_seed(seed, GAME_STREAM + g as u64),
                )?;
                let poa = price_of_anarchy(&game, &nash, &config.limits)?.value;
                ok &= poa.at_most(&bound);
                worst = Some(match worst {
                    Some(w) if poa_le(&poa, &w) => w,
                    _ => poa,
                });
            }
            row.extend([
                Cell::Poa(lb_poa.clone()),
                Cell::Bool(lb_poa == PoaValue::Finite(bound.clone())),
                worst.map_or(Cell::Missing, Cell::Poa),
                Cell::Bool(ok),
            ]);
            Ok(row)
        },
    )?;
    Ok(ExperimentReport {
        experiment: "sparse-poa".into(),
        seed: config.seed,
        key_name: "n",
        params: json!({
            "ns": config.ns, "d": format_rational(&config.d), "trials": config.trials,
            "exact_max_n": config.exact_max_n, "random_games": config.random_games, "colors": config.colors,
        }),
        columns,
        rows,
    })
}

/// Order with `NoEquilibrium < Finite < Infinite`.
fn poa_le(a: &PoaValue, b: &PoaValue) -> bool {
    let rank = |v: &PoaValue| match v {
        PoaValue::NoEquilibrium => 0,
        PoaValue::Finite(_) => 1,
        PoaValue::Infinite => 2,
    };
    match (a, b) {
        (PoaValue::Finite(x), PoaValue::Finite(y)) => x <= y,
        _ => rank(a) <= rank(b),
    }
}

/// Dense regime: one `G(n, d)` per trial, the matching construction for every
/// `c` in `cs` on that graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoaConfig {
    pub n: usize,
    pub d: Rational,
    pub cs: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for DensePoaConfig {
    fn default() -> Self {
        DensePoaConfig {
            n: 60,
            d: ratio(1, 2),
            cs: vec![8, 16, 24],
            trials: 100,
            seed: 0,
        }
    }
}

pub fn run_dense_poa(config: &DensePoaConfig) -> Result<ExperimentReport, ExperimentError> {
    let columns = vec![
        "edges",
        "q",
        "matched_induced_edges",
        "lower_bound",
        "eq_welfare",
        "opt_welfare",
        "ratio",
        "ratio_per_c",
        "is_nash",
        "ratio_ok",
        "prefix_block_edges",
    ];
    let n = config.n;
    let nash = EquilibriumParams::nash();
    let rows = run_trials(
        &config.cs,
        config.trials,
        |_, t| trial_seed(config.seed, n, t),
        |c, _, seed| {
            if c > n {
                return Err(crate::generators::GenError::InvalidParams(format!(
                    "c = {c} exceeds n = {n}"
                ))
                .into());
            }
            let graph = gen_gnp(&GnpParams::dense(n, config.d.clone(), seed)?);
            let inst = matching_lb_instance(&graph, c, MatchingBlock::Densest)?;
            let built = &inst.construction;
            let is_nash =
                is_epsilon_k_equilibrium(&built.game, &built.equilibrium, &nash)?.is_yes();
            let eq = social_welfare(&built.game, &built.equilibrium);
            // every weight is a non-negative coordination weight, so one shared color is optimal
            let opt = social_welfare(
                &built.game,
                built
                    .optimum
                    .as_ref()
                    .expect("matching instance has an optimum"),
            );
            let ratio = Extended::quotient(&opt, &eq);
            let lower = inst.lower_bound();
            let ratio_ok = ratio >= Extended::Finite(lower.clone());
            let per_c = ratio.to_f64() / c as f64;
            let block = prefix_block(n, c);
            let mut in_block = vec![false; n];
            for &v in &block {
                in_block[v] = true;
            }
            Ok(vec![
                count(graph.edge_count()),
                count(inst.matching.len()),
                count(inst.matched_induced_edges),
                rat(&lower),
                rat(&eq),
                rat(&opt),
                Cell::Ext(ratio),
                Cell::Float(per_c),
                Cell::Bool(is_nash),
                Cell::Bool(ratio_ok),
                count(graph.induced_edge_count(&in_block)),
            ])
        },
    )?;
    Ok(ExperimentReport {
        experiment: "dense-poa".into(),
        seed: config.seed,
        key_name: "c",
        params: json!({
            "n": n, "d": format_rational(&config.d), "cs": config.cs, "trials": config.trials,
        }),
        columns,
        rows,
    })
}

/// Maximum degree of `G(n, d/n)` and its `ln n / ln ln n` normalization; at
/// small `n` also the exact `(ε,k)`-PoA of random asymmetric equal-split
/// coordination games against `2εΔ`, and the degree construction's ratio
/// against `ε(Δ/(k−1) − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeScalingConfig {
    pub ns: Vec<usize>,
    pub d: Rational,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: Rational,
    pub k: usize,
    pub exact_max_n: usize,
    pub colors: usize,
    pub random_games: usize,
    pub limits: SearchLimits,
}

impl Default for DegreeScalingConfig {
    fn default() -> Self {
        DegreeScalingConfig {
            ns: vec![7, 1_000, 10_000, 100_000],
            d: int(3),
            trials: 30,
            seed: 0,
            epsilon: int(1),
            k: 2,
            exact_max_n: 8,
            colors: 3,
            random_games: 1,
            limits: SearchLimits::with_profiles(u128::MAX),
        }
    }
}

pub fn run_degree_scaling(
    config: &DegreeScalingConfig,
) -> Result<ExperimentReport, ExperimentError> {
    let columns = vec![
        "edges",
        "delta",
        "scaled_delta",
        "upper",
        "lower",
        "random_poa",
        "within_upper",
        "lb_ratio",
        "lb_is_equilibrium",
        "lb_ok",
    ];
    let params = EquilibriumParams::new(config.epsilon.clone(), config.k)?;
    let game_config = RandomGameConfig {
        colors: config.colors,
        weights: RationalRange::new(1, 4, 1)?,
        preferences: None,
        rule: RuleFamily::EqualSplit,
        kinds: KindMix::AllCoordination,
        strategy_sets: Some(StrategySetDistribution::UniformNonemptySubsets { c: config.colors }),
    };
    let eps = &config.epsilon;
    let k = config.k;
    let rows = run_trials(
        &config.ns,
        config.trials,
        |n, t| trial_seed(config.seed, n, t),
        |n, _, seed| {
            let graph = gen_gnp(&GnpParams::sparse(n, config.d.clone(), seed)?);
            let delta = graph.max_degree();
            let ln = (n as f64).ln();
            let scaled = if n >= 3 {
                Cell::Float(delta as f64 * ln.ln() / ln)
            } else {
                Cell::Missing
            };
            let delta_r = int(delta as i64);
            let upper = int(2) * eps * &delta_r;
            let spread = &delta_r / int(k as i64 - 1) - Rational::one();
            let lower = eps * spread.clone().max(Rational::one());
            let mut row = vec![
                count(graph.edge_count()),
                count(delta),
                scaled,
                rat(&upper),
                rat(&lower),
            ];
            if n > config.exact_max_n {
                row.extend([
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                ]);
                return Ok(row);
            }
            let mut worst: Option<PoaValue> = None;
            let mut within = None;
            for g in 0..config.random_games {
                let game = random_game(
                    &graph,
                    &game_config,
                    derive_seed(seed, GAME_STREAM + g as u64),
                )?;
                let poa = price_of_anarchy(&game, &params, &config.limits)?.value;
                // the bound needs at least one edge
                if let Some(b) = topological_poa_bounds(&game, eps, k, false)
                    .degree_upper
                    .value()
                {
                    within = Some(within.unwrap_or(true) && poa.at_most(b));
                }
                worst = Some(match worst {
                    Some(w) if poa_le(&poa, &w) => w,
                    _ => poa,
                });
            }
            row.push(worst.map_or(Cell::Missing, Cell::Poa));
            row.push(within.map_or(Cell::Missing, Cell::Bool));
            if delta + 1 > k {
                let lb = degree_lb_instance(&graph, eps, k)?;
                let is_eq = is_epsilon_k_equilibrium(&lb.game, &lb.equilibrium, &params)?.is_yes();
                let (_, opt) = social_optimum(&lb.game, &config.limits)?;
                let ratio = Extended::quotient(&opt, &social_welfare(&lb.game, &lb.equilibrium));
                let target = Extended::Finite(eps * &spread);
                let ok = ratio >= target;
                row.extend([Cell::Ext(ratio), Cell::Bool(is_eq), Cell::Bool(ok)]);
            } else {
                row.extend([Cell::Missing, Cell::Missing, Cell::Missing]);
            }
            Ok(row)
        },
    )?;
    Ok(ExperimentReport {
        experiment: "degree-scaling".into(),
        seed: config.seed,
        key_name: "n",
        params: json!({
            "ns": config.ns, "d": format_rational(&config.d), "trials": config.trials,
            "epsilon": format_rational(eps), "k": k, "exact_max_n": config.exact_max_n,
            "colors": config.colors, "random_games": config.random_games,
        }),
        columns,
        rows,
    })
}

/// Strategy-set family of the common-color run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetFamily {
    /// Uniform nonempty subsets of `[c]`.
    Uniform { c: usize },
    /// `{1, i}` with `i` uniform in `2..=n+1`, on `n + 1` colors.
    SharedPlusPrivate,
}

impl SetFamily {
    fn distribution(&self, n: usize) -> StrategySetDistribution {
        match *self {
            SetFamily::Uniform { c } => StrategySetDistribution::UniformNonemptySubsets { c },
            SetFamily::SharedPlusPrivate => {
                StrategySetDistribution::PairWithCommon { c: (n + 1).max(2) }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonColorConfig {
    pub ns: Vec<usize>,
    pub d: Rational,
    pub family: SetFamily,
    pub epsilon: Rational,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Exact PoA and the pairwise inequality only up to this size.
    pub exact_max_n: usize,
    pub limits: SearchLimits,
}

impl Default for CommonColorConfig {
    fn default() -> Self {
        CommonColorConfig {
            ns: vec![6, 8, 10],
            d: int(2),
            family: SetFamily::Uniform { c: 3 },
            epsilon: int(1),
            k: 2,
            trials: 300,
            seed: 0,
            exact_max_n: 10,
            limits: SearchLimits::with_profiles(u128::MAX),
        }
    }
}

/// Unit-weight equal-split coordination games with random strategy sets.
/// Besides the exact `(ε,k)`-PoA, every equilibrium is checked for
/// `u_i + u_j ≥ 1/(2ε)` on each edge whose endpoints share a color. For the
/// shared-plus-private family the profile where everybody avoids color 1 is
/// evaluated at every size.
pub fn run_common_color(config: &CommonColorConfig) -> Result<ExperimentReport, ExperimentError> {
    let columns = vec![
        "edges",
        "colors",
        "common_edges",
        "common_pair_fraction",
        "poa",
        "pair_inequality",
        "avoid_is_equilibrium",
        "avoid_ratio",
        "avoid_inverse",
    ];
    let params = EquilibriumParams::new(config.epsilon.clone(), config.k)?;
    let half_over_eps = ratio(1, 2) / &config.epsilon;
    let rows = run_trials(
        &config.ns,
        config.trials,
        |n, t| trial_seed(config.seed, n, t),
        |n, _, seed| {
            let graph = gen_gnp(&GnpParams::sparse(n, config.d.clone(), seed)?);
            let dist = config.family.distribution(n);
            let c = match config.family {
                SetFamily::Uniform { c } => c.max(2),
                SetFamily::SharedPlusPrivate => (n + 1).max(2),
            };
            let sets = random_strategy_sets(n, c, &dist, derive_seed(seed, SETS_STREAM))?;
            let shares = |a: usize, b: usize| sets[a].iter().any(|x| sets[b].contains(x));
            let common_edges: Vec<(usize, usize)> =
                graph.pairs().filter(|&(u, v)| shares(u, v)).collect();
            let node_pairs = n * n.saturating_sub(1) / 2;
            let sharing_pairs = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| shares(u, v))
                .count();
            let fraction = if node_pairs == 0 {
                Cell::Missing
            } else {
                rat(&ratio(sharing_pairs as i64, node_pairs as i64))
            };
            let rule = DistributionRule::equal_split(graph.edge_count());
            let game = ClusteringGame::new(graph.clone(), c, Some(sets.clone()), rule, None)
                .map_err(crate::generators::GenError::from)?;
            let mut row = vec![
                count(graph.edge_count()),
                count(c),
                count(common_edges.len()),
                fraction,
            ];

            if n <= config.exact_max_n {
                let equilibria = enumerate_equilibria(&game, &params, &config.limits)?;
                let (_, opt) = social_optimum(&game, &config.limits)?;
                let worst = equilibria.iter().map(|s| social_welfare(&game, s)).min();
                let poa = match worst {
                    None => PoaValue::NoEquilibrium,
                    Some(_) if opt.is_zero() => PoaValue::Finite(Rational::one()),
                    Some(w) if w.is_zero() => PoaValue::Infinite,
                    Some(w) => PoaValue::Finite(&opt / w),
                };
                let holds = equilibria
                    .iter()
                    .all(|s| pair_inequality(&game, s, &common_edges, &half_over_eps));
                row.extend([Cell::Poa(poa), Cell::Bool(holds)]);
            } else {
                row.extend([Cell::Missing, Cell::Missing]);
            }

            if config.family == SetFamily::SharedPlusPrivate {
                let avoid = StrategyProfile::new(
                    sets.iter().map(|s| *s.last().expect("nonempty")).collect(),
                );
                let is_eq = is_epsilon_k_equilibrium(&game, &avoid, &params)?.is_yes();
                let welfare = social_welfare(&game, &avoid);
                // everybody may play color 1, so the optimum satisfies every edge
                let opt = int(graph.edge_count() as i64);
                let inverse = if opt.is_zero() {
                    Cell::Missing
                } else {
                    rat(&(&welfare / &opt))
                };
                row.extend([
                    Cell::Bool(is_eq),
                    Cell::Ext(Extended::quotient(&opt, &welfare)),
                    inverse,
                ]);
            } else {
                row.extend([Cell::Missing, Cell::Missing, Cell::Missing]);
            }
            Ok(row)
        },
    )?;
    let family = match config.family {
        SetFamily::Uniform { c } => {
            let dist = StrategySetDistribution::UniformNonemptySubsets { c };
            json!({
                "name": "uniform", "c": c,
                "common_probability": format_rational(&dist.common_probability()),
                "claimed_d0": dist.claimed_d0().map(|v| format_rational(&v)),
            })
        }
        SetFamily::SharedPlusPrivate => json!({"name": "shared-plus-private", "claimed_d0": null}),
    };
    Ok(ExperimentReport {
        experiment: "common-color".into(),
        seed: config.seed,
        key_name: "n",
        params: json!({
            "ns": config.ns, "d": format_rational(&config.d), "family": family,
            "epsilon": format_rational(&config.epsilon), "k": config.k, "trials": config.trials,
            "exact_max_n": config.exact_max_n,
        }),
        columns,
        rows,
    })
}

fn pair_inequality(
    game: &ClusteringGame,
    s: &StrategyProfile,
    edges: &[(usize, usize)],
    target: &Rational,
) -> bool {
    edges
        .iter()
        .all(|&(u, v)| utility(game, s, u) + utility(game, s, v) >= *target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_rows_are_reproducible_and_bounded() {
        let config = SparsePoaConfig {
            ns: vec![6, 30],
            trials: 4,
            seed: 7,
            random_games: 1,
            ..Default::default()
        };
        let a = run_sparse_poa(&config).unwrap();
        let b = run_sparse_poa(&config).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.rows.len(), 8);
        assert!(a.failures("within_bound").is_empty());
        assert!(a.failures("lb_tight").is_empty());
        assert_eq!(a.cells(30, "lb_poa"), vec![&Cell::Missing; 4]);
    }

    #[test]
    fn empty_graphs_have_unit_poa() {
        let config = SparsePoaConfig {
            ns: vec![5],
            d: int(0),
            trials: 3,
            random_games: 1,
            ..Default::default()
        };
        let report = run_sparse_poa(&config).unwrap();
        for cell in report.cells(5, "lb_poa") {
            assert_eq!(cell, &Cell::Poa(PoaValue::Finite(int(1))));
        }
        assert!(report.floats(5, "rho").iter().all(|&r| r == 0.0));
    }

    #[test]
    fn dense_complete_graph_prefix_block() {
        let config = DensePoaConfig {
            n: 12,
            d: int(1),
            cs: vec![3, 8],
            trials: 2,
            seed: 1,
        };
        let report = run_dense_poa(&config).unwrap();
        assert!(report.failures("is_nash").is_empty());
        assert!(report.failures("ratio_ok").is_empty());
        // ⌈3/4⌉ = 1 node, ⌈8/4⌉ = 2 nodes
        assert!(report
            .floats(3, "prefix_block_edges")
            .iter()
            .all(|&e| e == 0.0));
        assert!(report
            .floats(8, "prefix_block_edges")
            .iter()
            .all(|&e| e == 1.0));
    }

    #[test]
    fn degree_rows_small() {
        let config = DegreeScalingConfig {
            ns: vec![6, 50],
            trials: 3,
            seed: 2,
            ..Default::default()
        };
        let report = run_degree_scaling(&config).unwrap();
        assert!(report.failures("within_upper").is_empty());
        assert!(report.failures("lb_is_equilibrium").is_empty());
        assert!(report.failures("lb_ok").is_empty());
    }

    #[test]
    fn common_color_small() {
        let config = CommonColorConfig {
            ns: vec![5],
            trials: 5,
            seed: 3,
            ..Default::default()
        };
        let report = run_common_color(&config).unwrap();
        assert!(report.failures("pair_inequality").is_empty());
        let avoid = CommonColorConfig {
            ns: vec![6],
            k: 1,
            family: SetFamily::SharedPlusPrivate,
            trials: 5,
            seed: 3,
            ..Default::default()
        };
        let report = run_common_color(&avoid).unwrap();
        assert!(report.failures("avoid_is_equilibrium").is_empty());
    }
}
