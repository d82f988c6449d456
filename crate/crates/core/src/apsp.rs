//! All-pairs shortest paths over unweighted graphs.
//!
//! BFS from each source is exact for unit edge weights and cheaper than
//! Johnson's algorithm, which the more general weighted setting would need.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Hop distance marking an unreachable pair.
pub const UNREACHABLE: u32 = u32::MAX;

/// Symmetric n x n matrix of hop distances with a sentinel for unreachable
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn is_reachable(&self, i: usize, j: usize) -> bool {
        self.get(i, j) != UNREACHABLE
    }

    /// Ideal spring lengths for the Kamada-Kawai energy: finite hop counts
    /// as reals, with unreachable pairs substituted by `2 * (n - 1)` so the
    /// energy stays well-defined on disconnected graphs.
    pub fn ideal_lengths(&self) -> Vec<f64> {
        let substitute = 2.0 * (self.n.saturating_sub(1)) as f64;
        self.data
            .iter()
            .map(|&d| {
                if d == UNREACHABLE {
                    substitute
                } else {
                    f64::from(d)
                }
            })
            .collect()
    }
}

/// Exact unweighted hop distances via BFS from every source.
pub fn shortest_paths(g: &Graph) -> DistanceMatrix {
    let n = g.node_count();
    let mut data = vec![UNREACHABLE; n * n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        let row = &mut data[source * n..(source + 1) * n];
        row[source] = 0;
        queue.clear();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in g.neighbors(u) {
                let v = v as usize;
                if row[v] == UNREACHABLE {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceMatrix { n, data }
}
