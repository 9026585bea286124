//! Exhaustive searches over the profile space.
//!
//! Equilibrium searches assign colors to nodes in id order and prune a partial
//! profile as soon as some assigned node has a unilateral deviation that wins
//! no matter how the unassigned nodes play. Minimum-welfare searches also prune
//! on a welfare lower bound: at an equilibrium every player earns at least
//! `1/ε` of each alternative. Leaves are checked against the full `(ε,k)`
//! condition, so results are exact. The space is split into lexicographic
//! blocks evaluated in parallel and merged in order.

use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::check::{connected_coalitions, find_deviation};
use super::compiled::{CompiledGame, Epsilon};
use super::{to_profile, EquilibriumParams, SearchError, SearchLimits};
use crate::model::{ClusteringGame, Color, StrategyProfile};
use crate::rational::{format_rational, Rational};

// Aim for at least this many independent blocks when splitting the search.
const MIN_BLOCKS: u128 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PoaValue {
    Finite(Rational),
    Infinite,
    NoEquilibrium,
}

impl PoaValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            PoaValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// `None` when the equilibrium set is empty; infinity maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            PoaValue::Finite(v) => Some(crate::rational::to_f64(v)),
            PoaValue::Infinite => Some(f64::INFINITY),
            PoaValue::NoEquilibrium => None,
        }
    }

    /// True when the value is at most `bound` (an infinite PoA never is).
    pub fn at_most(&self, bound: &Rational) -> bool {
        match self {
            PoaValue::Finite(v) => v <= bound,
            PoaValue::Infinite => false,
            PoaValue::NoEquilibrium => true,
        }
    }
}

impl fmt::Display for PoaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoaValue::Finite(v) => f.write_str(&format_rational(v)),
            PoaValue::Infinite => f.write_str("inf"),
            PoaValue::NoEquilibrium => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoaReport {
    pub value: PoaValue,
    /// Lexicographically smallest equilibrium of minimum welfare.
    pub worst_equilibrium: Option<StrategyProfile>,
    pub worst_welfare: Option<Rational>,
    pub optimum: StrategyProfile,
    pub optimum_welfare: Rational,
}

/// All `(ε,k)`-equilibria in lexicographic order.
pub fn enumerate_equilibria(
    game: &ClusteringGame,
    params: &EquilibriumParams,
    limits: &SearchLimits,
) -> Result<Vec<StrategyProfile>, SearchError> {
    params.validate(game, limits)?;
    limits.check_space(game)?;
    let cg = CompiledGame::new(game)?;
    let search = EqSearch::new(&cg, params);
    let blocks = search.blocks();
    let found: Vec<Vec<Vec<Color>>> = blocks
        .par_iter()
        .map(|prefix| {
            let mut sink = Sink::collect();
            search.run(prefix, &mut sink);
            sink.found
        })
        .collect();
    Ok(found
        .into_iter()
        .flatten()
        .map(StrategyProfile::new)
        .collect())
}

/// Minimum-welfare `(ε,k)`-equilibrium (lexicographically smallest among
/// ties) and its welfare, or `None` when no equilibrium exists.
pub fn worst_equilibrium(
    game: &ClusteringGame,
    params: &EquilibriumParams,
    limits: &SearchLimits,
) -> Result<Option<(StrategyProfile, Rational)>, SearchError> {
    params.validate(game, limits)?;
    limits.check_space(game)?;
    let cg = CompiledGame::new(game)?;
    Ok(min_welfare_equilibrium(&cg, params).map(|(p, w)| (to_profile(&p), cg.to_rational(w))))
}

/// Lexicographically smallest welfare maximizer, by branch and bound.
pub fn social_optimum(
    game: &ClusteringGame,
    limits: &SearchLimits,
) -> Result<(StrategyProfile, Rational), SearchError> {
    limits.check_space(game)?;
    let cg = CompiledGame::new(game)?;
    let (p, w) = optimum(&cg);
    Ok((to_profile(&p), cg.to_rational(w)))
}

pub fn price_of_anarchy(
    game: &ClusteringGame,
    params: &EquilibriumParams,
    limits: &SearchLimits,
) -> Result<PoaReport, SearchError> {
    params.validate(game, limits)?;
    limits.check_space(game)?;
    let cg = CompiledGame::new(game)?;
    let (opt, opt_w) = optimum(&cg);
    let worst = min_welfare_equilibrium(&cg, params);
    let opt_welfare = cg.to_rational(opt_w);
    let value = match &worst {
        None => PoaValue::NoEquilibrium,
        Some(_) if opt_w == 0 => PoaValue::Finite(Rational::one()),
        Some((_, 0)) => PoaValue::Infinite,
        Some((_, w)) => PoaValue::Finite(&opt_welfare / cg.to_rational(*w)),
    };
    Ok(PoaReport {
        value,
        worst_welfare: worst.as_ref().map(|(_, w)| cg.to_rational(*w)),
        worst_equilibrium: worst.map(|(p, _)| to_profile(&p)),
        optimum: to_profile(&opt),
        optimum_welfare: opt_welfare,
    })
}

fn min_welfare_equilibrium(
    cg: &CompiledGame,
    params: &EquilibriumParams,
) -> Option<(Vec<Color>, i128)> {
    let search = EqSearch::new(cg, params);
    let shared = AtomicI64::new(i64::MAX);
    let blocks = search.blocks();
    let results: Vec<Option<(i128, Vec<Color>)>> = blocks
        .par_iter()
        .map(|prefix| {
            let mut sink = Sink::minimum(&shared);
            search.run(prefix, &mut sink);
            sink.best
        })
        .collect();
    let mut best: Option<(i128, Vec<Color>)> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| r.0 < b.0) {
            best = Some(r);
        }
    }
    best.map(|(w, p)| (p, w))
}

struct Sink<'a> {
    collect: bool,
    found: Vec<Vec<Color>>,
    best: Option<(i128, Vec<Color>)>,
    shared: Option<&'a AtomicI64>,
}

impl<'a> Sink<'a> {
    fn collect() -> Self {
        Sink {
            collect: true,
            found: Vec::new(),
            best: None,
            shared: None,
        }
    }

    fn minimum(shared: &'a AtomicI64) -> Self {
        Sink {
            collect: false,
            found: Vec::new(),
            best: None,
            shared: Some(shared),
        }
    }

    fn prunes(&self, lower_bound: i128) -> bool {
        if self.collect {
            return false;
        }
        if let Some((b, _)) = &self.best {
            if lower_bound >= *b {
                return true;
            }
        }
        // strict against other blocks so equal-welfare ties stay deterministic
        let shared = self.shared.map_or(i64::MAX, |s| s.load(Ordering::Relaxed));
        shared != i64::MAX && lower_bound > shared as i128
    }

    fn done(&self) -> bool {
        !self.collect && matches!(self.best, Some((0, _)))
    }

    fn accept(&mut self, profile: &[Color], welfare: i128) {
        if self.collect {
            self.found.push(profile.to_vec());
            return;
        }
        if self.best.as_ref().is_none_or(|(b, _)| welfare < *b) {
            self.best = Some((welfare, profile.to_vec()));
            if let (Some(shared), Ok(w)) = (self.shared, i64::try_from(welfare)) {
                shared.fetch_min(w, Ordering::Relaxed);
            }
        }
    }
}

struct EqSearch<'a> {
    cg: &'a CompiledGame,
    eps: Epsilon,
    // ε = p/q with small terms, for ceil(d / ε)
    eps_ratio: Option<(i128, i128)>,
    coalitions: Vec<Vec<usize>>,
}

impl<'a> EqSearch<'a> {
    fn new(cg: &'a CompiledGame, params: &EquilibriumParams) -> Self {
        use num_traits::ToPrimitive;
        let eps_ratio = match (
            params.epsilon.numer().to_i64(),
            params.epsilon.denom().to_i64(),
        ) {
            (Some(p), Some(q)) if p < (1 << 30) && q < (1 << 30) => Some((p as i128, q as i128)),
            _ => None,
        };
        EqSearch {
            cg,
            eps: Epsilon::new(&params.epsilon),
            eps_ratio,
            coalitions: if params.k >= 2 {
                connected_coalitions(cg, params.k)
            } else {
                Vec::new()
            },
        }
    }

    /// Color prefixes for the first few nodes, in lexicographic order.
    fn blocks(&self) -> Vec<Vec<Color>> {
        let mut depth = 0;
        let mut count: u128 = 1;
        while depth < self.cg.n && count < MIN_BLOCKS {
            count *= self.cg.sets[depth].len() as u128;
            depth += 1;
        }
        let mut blocks = vec![Vec::new()];
        for i in 0..depth {
            blocks = blocks
                .into_iter()
                .flat_map(|p| {
                    self.cg.sets[i].iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        blocks
    }

    fn run(&self, prefix: &[Color], sink: &mut Sink) {
        let n = self.cg.n;
        let mut profile = vec![0; n];
        let mut lb = vec![0i128; n];
        self.dfs(0, prefix, &mut profile, &mut lb, 0, sink);
    }

    /// `None` if node `i` surely deviates; otherwise its utility lower bound at
    /// any completion that is an equilibrium. Nodes `< depth` are assigned.
    fn node_bound(&self, profile: &[Color], depth: usize, i: usize) -> Option<i128> {
        let cg = self.cg;
        let cur = profile[i];
        let mut lo = cg.pref[i][cur];
        let mut hi = lo;
        for inc in &cg.inc[i] {
            if inc.other < depth {
                if (profile[inc.other] == cur) == inc.coordination {
                    lo += inc.gain;
                    hi += inc.gain;
                }
            } else {
                hi += inc.gain;
            }
        }
        let mut bound = lo;
        for &c in &cg.sets[i] {
            if c == cur {
                continue;
            }
            let mut d = cg.pref[i][c];
            for inc in &cg.inc[i] {
                if inc.other < depth && (profile[inc.other] == c) == inc.coordination {
                    d += inc.gain;
                }
            }
            if self.eps.improves(d, hi) {
                return None;
            }
            if let Some((p, q)) = self.eps_ratio {
                let need = (d * q + p - 1).div_euclid(p);
                bound = bound.max(need);
            }
        }
        Some(bound)
    }

    fn dfs(
        &self,
        depth: usize,
        prefix: &[Color],
        profile: &mut [Color],
        lb: &mut [i128],
        lb_total: i128,
        sink: &mut Sink,
    ) -> bool {
        let cg = self.cg;
        if depth == cg.n {
            if !self.coalitions.is_empty() {
                let utils: Vec<i128> = (0..cg.n).map(|i| cg.utility(profile, i)).collect();
                if find_deviation(cg, profile, &utils, &self.eps, &self.coalitions).is_some() {
                    return false;
                }
            }
            sink.accept(profile, cg.welfare(profile));
            return sink.done();
        }
        let choices: &[Color] = if depth < prefix.len() {
            std::slice::from_ref(&prefix[depth])
        } else {
            &cg.sets[depth]
        };
        let mut saved: Vec<(usize, i128)> = Vec::with_capacity(cg.inc[depth].len() + 1);
        for &c in choices {
            profile[depth] = c;
            saved.clear();
            let mut total = lb_total;
            let mut feasible = true;
            let mut touched = std::iter::once(depth)
                .chain(
                    cg.inc[depth]
                        .iter()
                        .map(|inc| inc.other)
                        .filter(|&j| j < depth),
                )
                .collect::<Vec<_>>();
            touched.dedup();
            for &j in &touched {
                match self.node_bound(profile, depth + 1, j) {
                    None => {
                        feasible = false;
                        break;
                    }
                    Some(b) => {
                        saved.push((j, lb[j]));
                        total += b - if j == depth { 0 } else { lb[j] };
                        lb[j] = b;
                    }
                }
            }
            let stop = feasible
                && !sink.prunes(total)
                && self.dfs(depth + 1, prefix, profile, lb, total, sink);
            for &(j, old) in saved.iter().rev() {
                lb[j] = old;
            }
            if stop {
                return true;
            }
        }
        false
    }
}

fn optimum(cg: &CompiledGame) -> (Vec<Color>, i128) {
    let n = cg.n;
    let max_pref: Vec<i128> = (0..n)
        .map(|i| cg.sets[i].iter().map(|&c| cg.pref[i][c]).max().unwrap_or(0))
        .collect();
    // earlier[t]: edges from t to already assigned nodes
    let mut earlier: Vec<Vec<(usize, bool, i128)>> = vec![Vec::new(); n];
    // rest[d]: optimistic payoff still available once nodes < d are fixed
    let mut rest = vec![0i128; n + 1];
    for &(u, v, coord, w) in &cg.edges {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        earlier[hi].push((lo, coord, w));
        for r in rest.iter_mut().take(hi + 1) {
            *r += w;
        }
    }
    for d in (0..n).rev() {
        rest[d] += max_pref[d..].iter().sum::<i128>();
    }

    struct Bb<'b> {
        cg: &'b CompiledGame,
        earlier: Vec<Vec<(usize, bool, i128)>>,
        rest: Vec<i128>,
        profile: Vec<Color>,
        best: Option<(i128, Vec<Color>)>,
    }

    impl Bb<'_> {
        fn go(&mut self, depth: usize, partial: i128) {
            if depth == self.cg.n {
                if self.best.as_ref().is_none_or(|(b, _)| partial > *b) {
                    self.best = Some((partial, self.profile.clone()));
                }
                return;
            }
            let sets = &self.cg.sets[depth];
            for idx in 0..sets.len() {
                let c = sets[idx];
                let mut gain = self.cg.pref[depth][c];
                for &(j, coord, w) in &self.earlier[depth] {
                    if (self.profile[j] == c) == coord {
                        gain += w;
                    }
                }
                let upper = partial + gain + self.rest[depth + 1];
                if self.best.as_ref().is_some_and(|(b, _)| upper <= *b) {
                    continue;
                }
                self.profile[depth] = c;
                self.go(depth + 1, partial + gain);
            }
        }
    }

    let mut bb = Bb {
        cg,
        earlier,
        rest,
        profile: vec![0; n],
        best: None,
    };
    bb.go(0, 0);
    let (w, p) = bb.best.expect("profile space is nonempty");
    debug_assert_eq!(cg.welfare(&p), w);
    debug_assert!(!cg.is_zero_scale() || w.is_zero());
    (p, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{social_welfare, DistributionRule, Edge, Graph};
    use crate::rational::{int, ratio};

    fn edge_game(anti: bool) -> ClusteringGame {
        let e = if anti {
            Edge::anti(0, 1, int(1))
        } else {
            Edge::coordination(0, 1, int(1))
        };
        ClusteringGame::plain(Graph::new(2, vec![e]).unwrap(), 2).unwrap()
    }

    #[test]
    fn single_coordination_edge() {
        let game = edge_game(false);
        let eqs = enumerate_equilibria(&game, &EquilibriumParams::nash(), &SearchLimits::default())
            .unwrap();
        assert_eq!(
            eqs,
            vec![
                StrategyProfile::new(vec![1, 1]),
                StrategyProfile::new(vec![2, 2])
            ]
        );
        let report =
            price_of_anarchy(&game, &EquilibriumParams::nash(), &SearchLimits::default()).unwrap();
        assert_eq!(report.value, PoaValue::Finite(int(1)));
    }

    #[test]
    fn single_anti_edge_optimum() {
        let (s, w) = social_optimum(&edge_game(true), &SearchLimits::default()).unwrap();
        assert_eq!(s, StrategyProfile::new(vec![1, 2]));
        assert_eq!(w, int(1));
    }

    #[test]
    fn space_cap_is_enforced() {
        let game = edge_game(false);
        let err = enumerate_equilibria(
            &game,
            &EquilibriumParams::nash(),
            &SearchLimits::with_profiles(3),
        );
        assert!(matches!(
            err,
            Err(SearchError::SearchSpaceExceeded { size: 4, cap: 3 })
        ));
    }

    #[test]
    fn optimum_matches_exhaustive_welfare() {
        let graph = Graph::new(
            4,
            vec![
                Edge::coordination(0, 1, int(3)),
                Edge::anti(1, 2, int(2)),
                Edge::coordination(2, 3, ratio(1, 2)),
                Edge::anti(0, 3, int(1)),
            ],
        )
        .unwrap();
        let prefs = vec![
            [(2, int(4))].into_iter().collect(),
            Default::default(),
            [(1, int(1))].into_iter().collect(),
            Default::default(),
        ];
        let game = ClusteringGame::new(
            graph,
            2,
            None,
            DistributionRule::equal_split(4),
            Some(prefs),
        )
        .unwrap();
        let (_, w) = social_optimum(&game, &SearchLimits::default()).unwrap();
        let best = (0..16u32)
            .map(|mask| {
                let profile = (0..4).map(|i| 1 + ((mask >> i) & 1) as usize).collect();
                social_welfare(&game, &StrategyProfile::new(profile))
            })
            .max()
            .unwrap();
        assert_eq!(w, best);
    }
}
