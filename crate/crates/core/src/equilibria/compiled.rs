//! Integer payoff tables for exhaustive search.
//!
//! Every share-weighted edge payoff and every preference is multiplied by the
//! least common multiple of their denominators, so utilities become exact
//! `i128` values and comparisons need no rational arithmetic. Values are
//! bounded so that sums and the `ε` cross-multiplication never overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::SearchError;
use crate::model::{ClusteringGame, Color, EdgeKind};
use crate::rational::Rational;

// Keeps Σ payoffs well inside i128 after multiplying by an ε numerator.
const MAGNITUDE_LIMIT: i128 = 1 << 96;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Incidence {
    pub other: usize,
    pub gain: i128,
    pub coordination: bool,
}

/// `ε = numer / denom` in lowest terms.
#[derive(Debug, Clone)]
pub(crate) struct Epsilon {
    numer: BigInt,
    denom: BigInt,
    small: Option<(i128, i128)>,
}

impl Epsilon {
    pub fn new(eps: &Rational) -> Self {
        let numer = eps.numer().clone();
        let denom = eps.denom().clone();
        let small = match (numer.to_i64(), denom.to_i64()) {
            (Some(p), Some(q)) if p.unsigned_abs() < (1 << 30) && q < (1 << 30) => {
                Some((p as i128, q as i128))
            }
            _ => None,
        };
        Epsilon {
            numer,
            denom,
            small,
        }
    }

    /// `new > ε · old`.
    #[inline]
    pub fn improves(&self, new: i128, old: i128) -> bool {
        match self.small {
            Some((p, q)) => new * q > old * p,
            None => BigInt::from(new) * &self.denom > BigInt::from(old) * &self.numer,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledGame {
    pub n: usize,
    scale: BigInt,
    pub sets: Vec<Vec<Color>>,
    // pref[i][color], index 0 unused
    pub pref: Vec<Vec<i128>>,
    pub inc: Vec<Vec<Incidence>>,
    // (u, v, coordination, full scaled weight)
    pub edges: Vec<(usize, usize, bool, i128)>,
    // stride of each node in the mixed-radix profile index
    strides: Vec<u128>,
    space: u128,
}

impl CompiledGame {
    pub fn new(game: &ClusteringGame) -> Result<Self, SearchError> {
        let graph = game.graph();
        let rule = game.rule();
        let n = game.node_count();

        let mut gains: Vec<(Rational, Rational, Rational)> = Vec::with_capacity(graph.edge_count());
        let mut lcm = BigInt::one();
        for (idx, e) in graph.edges().iter().enumerate() {
            let gu = rule.fraction(e, idx, e.u) * &e.weight;
            let gv = rule.fraction(e, idx, e.v) * &e.weight;
            lcm = lcm.lcm(gu.denom()).lcm(gv.denom()).lcm(e.weight.denom());
            gains.push((gu, gv, e.weight.clone()));
        }
        for map in game.preferences() {
            for v in map.values() {
                lcm = lcm.lcm(v.denom());
            }
        }
        let scale = lcm;
        let scaled = |v: &Rational| -> Result<i128, SearchError> {
            let x = v * Rational::from_integer(scale.clone());
            debug_assert!(x.is_integer());
            x.to_integer()
                .to_i128()
                .filter(|x| x.abs() < MAGNITUDE_LIMIT)
                .ok_or(SearchError::Overflow)
        };

        let mut inc = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(graph.edge_count());
        let mut total: i128 = 0;
        for (e, (gu, gv, w)) in graph.edges().iter().zip(&gains) {
            let coordination = e.kind == EdgeKind::Coordination;
            let (su, sv, sw) = (scaled(gu)?, scaled(gv)?, scaled(w)?);
            total = total.checked_add(sw).ok_or(SearchError::Overflow)?;
            if sw == 0 {
                continue;
            }
            inc[e.u].push(Incidence {
                other: e.v,
                gain: su,
                coordination,
            });
            inc[e.v].push(Incidence {
                other: e.u,
                gain: sv,
                coordination,
            });
            edges.push((e.u, e.v, coordination, sw));
        }

        let mut pref = Vec::with_capacity(n);
        for map in game.preferences() {
            let mut row = vec![0i128; game.colors() + 1];
            let mut best = 0i128;
            for (&c, v) in map {
                row[c] = scaled(v)?;
                best = best.max(row[c]);
            }
            total = total.checked_add(best).ok_or(SearchError::Overflow)?;
            pref.push(row);
        }
        if total >= MAGNITUDE_LIMIT {
            return Err(SearchError::Overflow);
        }

        let sets: Vec<Vec<Color>> = game.strategy_sets().to_vec();
        let mut strides = vec![1u128; n];
        let mut space: u128 = 1;
        for i in (0..n).rev() {
            strides[i] = space;
            space = space.saturating_mul(sets[i].len() as u128);
        }
        Ok(CompiledGame {
            n,
            scale,
            sets,
            pref,
            inc,
            edges,
            strides,
            space,
        })
    }

    pub fn space(&self) -> u128 {
        self.space
    }

    pub fn to_rational(&self, v: i128) -> Rational {
        Rational::new(BigInt::from(v), self.scale.clone())
    }

    #[inline]
    pub fn utility_with(&self, profile: &[Color], node: usize, color: Color) -> i128 {
        let mut u = self.pref[node][color];
        for inc in &self.inc[node] {
            let other = profile[inc.other];
            if (other == color) == inc.coordination {
                u += inc.gain;
            }
        }
        u
    }

    #[inline]
    pub fn utility(&self, profile: &[Color], node: usize) -> i128 {
        self.utility_with(profile, node, profile[node])
    }

    pub fn welfare(&self, profile: &[Color]) -> i128 {
        let prefs: i128 = (0..self.n).map(|i| self.pref[i][profile[i]]).sum();
        let edges: i128 = self
            .edges
            .iter()
            .filter(|&&(u, v, coord, _)| (profile[u] == profile[v]) == coord)
            .map(|e| e.3)
            .sum();
        prefs + edges
    }

    /// Colors of the profile with lexicographic rank `index` (node 0 most significant).
    pub fn decode(&self, mut index: u128, out: &mut [Color]) {
        for i in 0..self.n {
            let pos = index / self.strides[i];
            index %= self.strides[i];
            out[i] = self.sets[i][pos as usize];
        }
    }

    #[cfg(test)]
    pub fn encode(&self, profile: &[Color]) -> u128 {
        (0..self.n)
            .map(|i| {
                let pos = self.sets[i]
                    .binary_search(&profile[i])
                    .expect("color in strategy set");
                pos as u128 * self.strides[i]
            })
            .sum()
    }

    pub fn stride(&self, node: usize) -> u128 {
        self.strides[node]
    }

    #[cfg(test)]
    /// Advances `profile` to the next one in lexicographic order; false on wrap.
    pub fn advance(&self, profile: &mut [Color]) -> bool {
        for i in (0..self.n).rev() {
            let set = &self.sets[i];
            let pos = set
                .binary_search(&profile[i])
                .expect("color in strategy set");
            if pos + 1 < set.len() {
                profile[i] = set[pos + 1];
                return true;
            }
            profile[i] = set[0];
        }
        false
    }

    pub fn is_zero_scale(&self) -> bool {
        self.scale.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{utility, DistributionRule, Edge, Graph, StrategyProfile};
    use crate::rational::{int, ratio};

    #[test]
    fn integer_utilities_match_rational_ones() {
        let graph = Graph::new(
            3,
            vec![
                Edge::coordination(0, 1, ratio(3, 2)),
                Edge::anti(1, 2, ratio(2, 3)),
                Edge::coordination(0, 2, int(5)),
            ],
        )
        .unwrap();
        let rule = DistributionRule::new(vec![
            (int(1), int(2)),
            (int(0), int(1)),
            (ratio(1, 3), int(1)),
        ])
        .unwrap();
        let prefs = vec![
            [(1, ratio(1, 7))].into_iter().collect(),
            [(2, int(1))].into_iter().collect(),
            Default::default(),
        ];
        let game = ClusteringGame::new(graph, 2, None, rule, Some(prefs)).unwrap();
        let cg = CompiledGame::new(&game).unwrap();
        let mut profile = vec![1; 3];
        let mut count = 0;
        loop {
            let s = StrategyProfile::new(profile.clone());
            for i in 0..3 {
                assert_eq!(
                    cg.to_rational(cg.utility(&profile, i)),
                    utility(&game, &s, i)
                );
            }
            assert_eq!(cg.decode_vec(cg.encode(&profile)), profile);
            count += 1;
            if !cg.advance(&mut profile) {
                break;
            }
        }
        assert_eq!(count, 8);
    }

    impl CompiledGame {
        fn decode_vec(&self, index: u128) -> Vec<Color> {
            let mut out = vec![0; self.n];
            self.decode(index, &mut out);
            out
        }
    }

    #[test]
    fn epsilon_comparison() {
        let eps = Epsilon::new(&ratio(3, 2));
        assert!(eps.improves(4, 2));
        assert!(!eps.improves(3, 2));
        assert!(eps.improves(1, 0));
        assert!(!eps.improves(0, 0));
    }
}
