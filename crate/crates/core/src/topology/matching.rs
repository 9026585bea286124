//! Maximum cardinality matching on general graphs (Edmonds' blossom algorithm).

use std::collections::VecDeque;

use crate::model::Graph;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn contract(&mut self, v: usize, u: usize) {
        let n = self.adj.len();
        let b = self.lca(v, u);
        self.in_blossom.fill(false);
        self.mark_path(v, b, u);
        self.mark_path(u, b, v);
        for i in 0..n {
            if self.in_blossom[self.base[i]] {
                self.base[i] = b;
                if !self.used[i] {
                    self.used[i] = true;
                    self.queue.push_back(i);
                }
            }
        }
    }

    /// Endpoint of an augmenting path from `root`, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    self.contract(v, to);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }
}

/// A maximum matching as sorted `(u, v)` pairs with `u < v`.
pub fn maximum_matching(graph: &Graph) -> Vec<(usize, usize)> {
    let n = graph.node_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().map(|&(u, _)| u).collect())
        .collect();
    let mut state = Blossom {
        adj: &adj,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    // greedy start
    for v in 0..n {
        if state.mate[v] == NONE {
            if let Some(&u) = adj[v].iter().find(|&&u| state.mate[u] == NONE) {
                state.mate[v] = u;
                state.mate[u] = v;
            }
        }
    }
    for root in 0..n {
        if state.mate[root] != NONE {
            continue;
        }
        if let Some(mut v) = state.find_path(root) {
            while v != NONE {
                let pv = state.parent[v];
                let ppv = state.mate[pv];
                state.mate[v] = pv;
                state.mate[pv] = v;
                v = ppv;
            }
        }
    }
    (0..n)
        .filter(|&v| state.mate[v] != NONE && v < state.mate[v])
        .map(|v| (v, state.mate[v]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_cycle_and_blossom() {
        let c5 = Graph::unweighted(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(maximum_matching(&c5).len(), 2);
        // triangle with two pendants forces a blossom contraction
        let g = Graph::unweighted(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (0, 4), (1, 5)]).unwrap();
        assert_eq!(maximum_matching(&g).len(), 3);
    }
}
