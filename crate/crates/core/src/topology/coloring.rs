//! Exact chromatic number by DSATUR branch and bound.

use crate::model::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub chromatic_number: usize,
    /// Proper coloring with colors `1..=chromatic_number`, indexed by node.
    pub colors: Vec<usize>,
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    colors: Vec<usize>,
    best: Vec<usize>,
    best_count: usize,
    lower: usize,
}

impl Search<'_> {
    fn saturation(&self, v: usize) -> usize {
        let mut seen: Vec<usize> = self.adj[v]
            .iter()
            .map(|&u| self.colors[u])
            .filter(|&c| c > 0)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    fn pick(&self) -> Option<usize> {
        (0..self.adj.len())
            .filter(|&v| self.colors[v] == 0)
            .max_by_key(|&v| (self.saturation(v), self.adj[v].len(), std::cmp::Reverse(v)))
    }

    fn go(&mut self, used: usize) -> bool {
        if used >= self.best_count {
            return false;
        }
        let Some(v) = self.pick() else {
            self.best = self.colors.clone();
            self.best_count = used;
            return used <= self.lower;
        };
        for c in 1..=(used + 1).min(self.best_count - 1) {
            if self.adj[v].iter().any(|&u| self.colors[u] == c) {
                continue;
            }
            self.colors[v] = c;
            let done = self.go(used.max(c));
            self.colors[v] = 0;
            if done {
                return true;
            }
        }
        false
    }
}

pub fn chromatic_number(graph: &Graph) -> Coloring {
    let n = graph.node_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().map(|&(u, _)| u).collect())
        .collect();
    let lower = if graph.edge_count() > 0 { 2 } else { 1 };
    let mut search = Search {
        adj: &adj,
        colors: vec![0; n],
        best: (1..=n).collect(),
        best_count: n + 1,
        lower,
    };
    search.go(0);
    Coloring {
        chromatic_number: search.best_count,
        colors: search.best,
    }
}

pub fn is_proper(graph: &Graph, colors: &[usize]) -> bool {
    graph.pairs().all(|(u, v)| colors[u] != colors[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let c5 = Graph::unweighted(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let col = chromatic_number(&c5);
        assert_eq!(col.chromatic_number, 3);
        assert!(is_proper(&c5, &col.colors));
        let single = Graph::unweighted(1, &[]).unwrap();
        assert_eq!(chromatic_number(&single).chromatic_number, 1);
        let k4 = Graph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(chromatic_number(&k4).chromatic_number, 4);
    }
}
