use clustering_games::equilibria::{
    enumerate_equilibria, price_of_anarchy, run_dynamics, BrDynamicsResult, EquilibriumParams,
    PoaValue, SchedulerPolicy, SearchLimits,
};
use clustering_games::generators::{
    gen_gnp, random_game, GnpParams, KindMix, RandomGameConfig, RationalRange, RuleFamily,
    StrategySetDistribution,
};
use clustering_games::model::{
    social_welfare, utility, welfare_by_edges, ClusteringGame, Graph, StrategyProfile,
};
use clustering_games::rational::{int, ratio, Rational};
use clustering_games::shapley::{classify_rule, verify_certificate, Verdict};
use clustering_games::topology::{
    chromatic_number, max_subgraph_density, maximum_matching, EdgeFilter,
};
use proptest::prelude::*;

fn graph(n: usize, seed: u64) -> Graph {
    gen_gnp(&GnpParams::dense(n, ratio(1, 2), seed).unwrap())
}

fn rule_family() -> impl Strategy<Value = RuleFamily> {
    prop_oneof![
        Just(RuleFamily::EqualSplit),
        Just(RuleFamily::RandomPositive),
        Just(RuleFamily::WeightedShapley),
        Just(RuleFamily::WithZeros),
    ]
}

fn kinds() -> impl Strategy<Value = KindMix> {
    prop_oneof![
        Just(KindMix::AllCoordination),
        Just(KindMix::AllAnti),
        Just(KindMix::Mixed)
    ]
}

fn game(n: usize, seed: u64, rule: RuleFamily, kinds: KindMix, asym: bool) -> ClusteringGame {
    let config = RandomGameConfig {
        colors: 3,
        weights: RationalRange::new(0, 6, 2).unwrap(),
        preferences: Some(RationalRange::new(0, 4, 3).unwrap()),
        rule,
        kinds,
        strategy_sets: asym.then_some(StrategySetDistribution::UniformNonemptySubsets { c: 3 }),
    };
    random_game(&graph(n, seed), &config, seed).unwrap()
}

fn profile(game: &ClusteringGame, picks: &[usize]) -> StrategyProfile {
    StrategyProfile::new(
        (0..game.node_count())
            .map(|i| {
                let set = game.strategy_set(i);
                set[picks[i] % set.len()]
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn welfare_is_sum_of_utilities(n in 1usize..7, seed: u64, rule in rule_family(), kinds in kinds(),
                                   asym: bool, picks in prop::collection::vec(0usize..3, 7)) {
        let g = game(n, seed, rule, kinds, asym);
        let s = profile(&g, &picks);
        let total: Rational = (0..n).map(|i| utility(&g, &s, i)).sum();
        prop_assert_eq!(&total, &social_welfare(&g, &s));
        prop_assert_eq!(total, welfare_by_edges(&g, &s));
    }

    #[test]
    fn scaling_keeps_equilibria(n in 1usize..6, seed: u64, rule in rule_family(), kinds in kinds(), num in 1i64..5, den in 1i64..5) {
        let g = game(n, seed, rule, kinds, false);
        let params = EquilibriumParams::nash();
        let limits = SearchLimits::default();
        let a = enumerate_equilibria(&g, &params, &limits).unwrap();
        let b = enumerate_equilibria(&g.scaled(&ratio(num, den)).unwrap(), &params, &limits).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn poa_at_least_one(n in 1usize..6, seed: u64, rule in rule_family(), kinds in kinds(), asym: bool) {
        let g = game(n, seed, rule, kinds, asym);
        let poa = price_of_anarchy(&g, &EquilibriumParams::nash(), &SearchLimits::default()).unwrap();
        if let PoaValue::Finite(v) = &poa.value {
            prop_assert!(v >= &int(1));
        }
        if let Some(w) = &poa.worst_welfare {
            prop_assert!(w <= &poa.optimum_welfare);
        }
    }

    #[test]
    fn more_tolerance_more_equilibria(n in 2usize..6, seed: u64, rule in rule_family(), kinds in kinds()) {
        let g = game(n, seed, rule, kinds, false);
        let limits = SearchLimits::default();
        let nash = enumerate_equilibria(&g, &EquilibriumParams::nash(), &limits).unwrap();
        let loose = enumerate_equilibria(&g, &EquilibriumParams::new(int(2), 1).unwrap(), &limits).unwrap();
        let strong = enumerate_equilibria(&g, &EquilibriumParams::new(int(1), 2).unwrap(), &limits).unwrap();
        prop_assert!(nash.iter().all(|s| loose.contains(s)));
        prop_assert!(strong.iter().all(|s| nash.contains(s)));
    }

    #[test]
    fn classification_is_certified(n in 1usize..8, seed: u64, rule in rule_family()) {
        let g = game(n, seed, rule, KindMix::AllCoordination, false);
        let class = classify_rule(g.graph(), g.rule());
        match &class.verdict {
            Verdict::Gws { sigma, gamma } => prop_assert!(verify_certificate(g.graph(), g.rule(), sigma, gamma)),
            Verdict::Violation(v) => prop_assert!(v.replays(g.graph(), g.rule())),
        }
        if rule == RuleFamily::WeightedShapley || rule == RuleFamily::EqualSplit {
            prop_assert!(class.is_gws());
        }
    }

    #[test]
    fn shapley_dynamics_converge(n in 1usize..8, seed: u64, kinds in kinds(), start in prop::collection::vec(0usize..3, 8), policy_seed: u64) {
        let g = game(n, seed, RuleFamily::WeightedShapley, kinds, true);
        let s = profile(&g, &start);
        for policy in [SchedulerPolicy::RoundRobin, SchedulerPolicy::LowestImprovingId, SchedulerPolicy::SeededRandom(policy_seed)] {
            let result = run_dynamics(&g, &s, policy, 100_000).unwrap();
            prop_assert!(matches!(result, BrDynamicsResult::Converged { .. }), "{:?}", result);
        }
    }

    #[test]
    fn topology_sandwiches(n in 1usize..12, seed: u64) {
        let g = graph(n, seed);
        let rho = max_subgraph_density(&g, EdgeFilter::All).value;
        prop_assert!(rho >= ratio(g.edge_count() as i64, n as i64));
        prop_assert!(rho <= ratio(n as i64 - 1, 2));
        let m = maximum_matching(&g).len();
        prop_assert!(2 * m <= n);
        prop_assert!(g.edge_count() == 0 || m >= 1);
        let chi = chromatic_number(&g).chromatic_number;
        prop_assert!(chi <= g.max_degree() + 1);
        prop_assert!(rho <= int(g.max_degree() as i64) / int(2));
    }
}
