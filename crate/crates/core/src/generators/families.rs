//! Fixed graph families with unit-weight coordination edges.

use crate::model::{Edge, Graph};
use crate::rational::int;

fn build(n: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::unweighted(n, pairs).expect("family graphs are simple")
}

pub fn triangle() -> Graph {
    build(3, &[(0, 1), (1, 2), (0, 2)])
}

pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    build(n, &pairs)
}

/// Cycle `0 − 1 − … − (n−1) − 0`; needs `n ≥ 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs three nodes");
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &pairs)
}

pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &pairs)
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    let pairs: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    build(leaves + 1, &pairs)
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes `i − (i+5)`.
pub fn petersen() -> Graph {
    let mut pairs = Vec::new();
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5));
        pairs.push((i, i + 5));
        pairs.push((5 + i, 5 + (i + 2) % 5));
    }
    build(10, &pairs)
}

/// `rows × cols` grid, node `r·cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                pairs.push((v, v + 1));
            }
            if r + 1 < rows {
                pairs.push((v, v + cols));
            }
        }
    }
    build(rows * cols, &pairs)
}

/// `K_{l,r}`: left nodes `0..l`, right nodes `l..l+r`.
pub fn complete_bipartite(l: usize, r: usize) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..l {
        for v in l..l + r {
            pairs.push((u, v));
        }
    }
    build(l + r, &pairs)
}

/// Two hubs 0 and 1 joined by three internally disjoint paths with the given
/// numbers of inner nodes; at most one path may be a direct edge.
pub fn theta(inner: [usize; 3]) -> Graph {
    assert!(
        inner.iter().filter(|&&k| k == 0).count() <= 1,
        "only one direct hub edge"
    );
    let mut pairs = Vec::new();
    let mut next = 2;
    for &k in &inner {
        let mut prev = 0;
        for _ in 0..k {
            pairs.push((prev, next));
            prev = next;
            next += 1;
        }
        pairs.push((prev, 1));
    }
    build(next, &pairs)
}

/// Triangle whose edges `{0,1}` and `{2,0}` are anti-coordination and `{1,2}`
/// coordination; every choice of weights, shares and preferences on it has a
/// pure Nash equilibrium.
pub fn mixed_triangle() -> Graph {
    Graph::new(
        3,
        vec![
            Edge::anti(0, 1, int(1)),
            Edge::coordination(1, 2, int(1)),
            Edge::anti(2, 0, int(1)),
        ],
    )
    .expect("simple triangle")
}
