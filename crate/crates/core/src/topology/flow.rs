use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

/// Dinic's maximum flow on integer capacities.
#[derive(Debug, Clone)]
pub(crate) struct Dinic {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc {
            to,
            cap,
            rev: rev_from,
        });
        self.adj[to].push(Arc {
            to: from,
            cap: 0,
            rev: rev_to,
        });
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for a in &self.adj[v] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let i = self.iter[v];
            let Arc { to, cap, rev } = self.adj[v][i];
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.adj[v][i].cap -= d;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual network (source side of a min cut).
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for a in &self.adj[v] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_network() {
        let mut d = Dinic::new(6);
        for &(u, v, c) in &[
            (0, 1, 10),
            (0, 2, 10),
            (1, 3, 4),
            (1, 4, 8),
            (2, 4, 9),
            (3, 5, 10),
            (4, 3, 6),
            (4, 5, 10),
        ] {
            d.add_edge(u, v, c);
        }
        assert_eq!(d.max_flow(0, 5), 19);
        let side = d.source_side(0);
        assert!(side[0] && !side[5]);
    }
}
