//! Graph parameters behind the price-of-anarchy bounds: maximum subgraph
//! density (all edges and coordination edges only), maximum degree, chromatic
//! number and maximum matching, plus the bounds built from them.

mod bounds;
mod coloring;
mod density;
mod flow;
mod matching;

pub use bounds::{topological_poa_bounds, BoundValue, PoaBounds};
pub use coloring::{chromatic_number, is_proper, Coloring};
pub use density::{max_subgraph_density, Density, EdgeFilter};
pub use matching::maximum_matching;

use crate::model::Graph;

pub const DEFAULT_CHROMATIC_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("chromatic number requested for n = {n}, above the cap of {cap}")]
    ChromaticCapExceeded { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyOptions {
    pub chromatic: bool,
    pub chromatic_cap: usize,
}

impl Default for TopologyOptions {
    fn default() -> Self {
        TopologyOptions {
            chromatic: true,
            chromatic_cap: DEFAULT_CHROMATIC_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyStats {
    pub density: Density,
    pub coord_density: Density,
    pub max_degree: usize,
    pub chromatic: Option<Coloring>,
    pub matching: Vec<(usize, usize)>,
}

impl TopologyStats {
    pub fn matching_size(&self) -> usize {
        self.matching.len()
    }
}

pub fn compute_topology_stats(
    graph: &Graph,
    options: &TopologyOptions,
) -> Result<TopologyStats, TopologyError> {
    let n = graph.node_count();
    let chromatic = if options.chromatic {
        if n > options.chromatic_cap {
            return Err(TopologyError::ChromaticCapExceeded {
                n,
                cap: options.chromatic_cap,
            });
        }
        Some(chromatic_number(graph))
    } else {
        None
    };
    Ok(TopologyStats {
        density: max_subgraph_density(graph, EdgeFilter::All),
        coord_density: max_subgraph_density(graph, EdgeFilter::CoordinationOnly),
        max_degree: graph.max_degree(),
        chromatic,
        matching: maximum_matching(graph),
    })
}

/// Nodes covered by a set of edges, sorted.
pub fn covered_nodes(edges: &[(usize, usize)]) -> Vec<usize> {
    let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_statistics() {
        let g = Graph::unweighted(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let stats = compute_topology_stats(&g, &TopologyOptions::default()).unwrap();
        assert_eq!(stats.max_degree, 5);
        assert_eq!(stats.chromatic.as_ref().unwrap().chromatic_number, 2);
        assert_eq!(stats.matching_size(), 1);
    }

    #[test]
    fn chromatic_cap() {
        let g = Graph::unweighted(4, &[]).unwrap();
        let options = TopologyOptions {
            chromatic: true,
            chromatic_cap: 3,
        };
        assert_eq!(
            compute_topology_stats(&g, &options),
            Err(TopologyError::ChromaticCapExceeded { n: 4, cap: 3 })
        );
    }
}
