//! Exact maximum subgraph density `max_S |E[S]| / |S|`.
//!
//! For a guess `g = a/b`, `max_S (b·|E[S]| − a·|S|)` equals `b·m` minus the
//! minimum cut of the network source → edge (capacity `b`), edge → both
//! endpoints (unbounded), node → sink (capacity `a`). The density is a
//! fraction `a/b` with `b ≤ n`, so a binary search over those candidates finds
//! it exactly; the witness is the source side of the cut at the largest
//! candidate below the answer.

use num_integer::Integer;

use super::flow::Dinic;
use crate::model::{EdgeKind, Graph};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFilter {
    All,
    CoordinationOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    pub value: Rational,
    /// Sorted node ids attaining the value.
    pub witness: Vec<usize>,
}

pub fn max_subgraph_density(graph: &Graph, filter: EdgeFilter) -> Density {
    let n = graph.node_count();
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .filter(|e| filter == EdgeFilter::All || e.kind == EdgeKind::Coordination)
        .map(|e| (e.u, e.v))
        .collect();
    let m = edges.len();
    if m == 0 {
        return Density {
            value: ratio(0, 1),
            witness: vec![0],
        };
    }

    // fractions a/b, b ≤ n, a ≤ min(m, b(b−1)/2), reduced and ascending
    let mut candidates: Vec<(u64, u64)> = Vec::new();
    for b in 1..=n as u64 {
        let top = (m as u64).min(b * (b - 1) / 2);
        for a in 0..=top {
            let g = a.gcd(&b);
            candidates.push((a / g, b / g));
        }
    }
    candidates.sort_unstable_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    candidates.dedup();

    // first candidate with "density > g" false
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    debug_assert!(exceeds(n, &edges, candidates[0]).is_some());
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if exceeds(n, &edges, candidates[mid]).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = candidates[hi];
    let witness = exceeds(n, &edges, candidates[lo]).expect("predecessor is exceeded");
    let value = ratio(a as i64, b as i64);
    debug_assert_eq!(
        ratio(induced(&edges, &witness) as i64, witness.len() as i64),
        value
    );
    Density { value, witness }
}

/// Some subset with density strictly above `a/b`, if one exists.
fn exceeds(n: usize, edges: &[(usize, usize)], (a, b): (u64, u64)) -> Option<Vec<usize>> {
    let m = edges.len();
    let source = m + n;
    let sink = source + 1;
    let mut net = Dinic::new(m + n + 2);
    let unbounded = (b as i64) * (m as i64) + 1;
    for (idx, &(u, v)) in edges.iter().enumerate() {
        net.add_edge(source, idx, b as i64);
        net.add_edge(idx, m + u, unbounded);
        net.add_edge(idx, m + v, unbounded);
    }
    for node in 0..n {
        net.add_edge(m + node, sink, a as i64);
    }
    let cut = net.max_flow(source, sink);
    if (b as i64) * (m as i64) - cut <= 0 {
        return None;
    }
    let side = net.source_side(source);
    Some((0..n).filter(|&v| side[m + v]).collect())
}

fn induced(edges: &[(usize, usize)], nodes: &[usize]) -> usize {
    edges
        .iter()
        .filter(|(u, v)| nodes.binary_search(u).is_ok() && nodes.binary_search(v).is_ok())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_with_pendant() {
        let g = Graph::unweighted(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let d = max_subgraph_density(&g, EdgeFilter::All);
        assert_eq!(d.value, ratio(1, 1));
    }

    #[test]
    fn empty_graph_is_zero() {
        let g = Graph::unweighted(3, &[]).unwrap();
        let d = max_subgraph_density(&g, EdgeFilter::All);
        assert_eq!(d.value, ratio(0, 1));
        assert_eq!(d.witness.len(), 1);
    }

    #[test]
    fn clique_beats_sparse_part() {
        let mut pairs = vec![];
        for u in 0..4 {
            for v in u + 1..4 {
                pairs.push((u, v));
            }
        }
        pairs.extend([(4, 5), (5, 6), (3, 4)]);
        let g = Graph::unweighted(7, &pairs).unwrap();
        let d = max_subgraph_density(&g, EdgeFilter::All);
        assert_eq!(d.value, ratio(3, 2));
        assert_eq!(d.witness, vec![0, 1, 2, 3]);
    }
}
