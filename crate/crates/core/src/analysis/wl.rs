//! 1-WL (color refinement) equality check.

use std::collections::BTreeMap;

use crate::graph::Graph;

/// Stable color histogram of 1-WL refinement: sorted (color class size)
/// multiset after the partition stops changing. Two graphs refined jointly
/// are 1-WL-indistinguishable iff their histograms match.
fn joint_refinement(g1: &Graph, g2: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n1 = g1.node_count();
    let n2 = g2.node_count();
    let mut colors1 = vec![0u64; n1];
    let mut colors2 = vec![0u64; n2];

    let rounds = n1 + n2;
    for _ in 0..rounds {
        // Signature: own color plus the sorted multiset of neighbor colors.
        let sig = |g: &Graph, colors: &[u64], u: usize| {
            let mut neigh: Vec<u64> = g.neighbors(u).iter().map(|&v| colors[v as usize]).collect();
            neigh.sort_unstable();
            (colors[u], neigh)
        };
        let sigs1: Vec<_> = (0..n1).map(|u| sig(g1, &colors1, u)).collect();
        let sigs2: Vec<_> = (0..n2).map(|u| sig(g2, &colors2, u)).collect();

        // Shared relabeling so color ids stay comparable across both graphs.
        let mut palette: BTreeMap<&(u64, Vec<u64>), u64> = BTreeMap::new();
        for s in sigs1.iter().chain(sigs2.iter()) {
            let next = palette.len() as u64;
            palette.entry(s).or_insert(next);
        }
        let new1: Vec<u64> = sigs1.iter().map(|s| palette[s]).collect();
        let new2: Vec<u64> = sigs2.iter().map(|s| palette[s]).collect();
        if new1 == colors1 && new2 == colors2 {
            break;
        }
        colors1 = new1;
        colors2 = new2;
    }

    (histogram(&colors1), histogram(&colors2))
}

fn histogram(colors: &[u64]) -> Vec<usize> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in colors {
        *counts.entry(c).or_insert(0) += 1;
    }
    counts.into_iter().flat_map(|(c, n)| [c as usize, n]).collect()
}

/// True when 1-WL color refinement cannot tell the two graphs apart.
pub fn wl_indistinguishable(g1: &Graph, g2: &Graph) -> bool {
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let (h1, h2) = joint_refinement(g1, g2);
    h1 == h2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::builtin_wl_pair;
    use crate::graph::parse_edge_list;

    #[test]
    fn triangle_vs_path_distinguished() {
        let t = parse_edge_list("0 1\n1 2\n0 2\n", "t").unwrap().graph;
        let p = parse_edge_list("n=3\n0 1\n1 2\n", "p").unwrap().graph;
        assert!(!wl_indistinguishable(&t, &p));
    }

    #[test]
    fn graph_is_indistinguishable_from_itself() {
        let t = parse_edge_list("0 1\n1 2\n0 2\n", "t").unwrap().graph;
        assert!(wl_indistinguishable(&t, &t));
    }

    #[test]
    fn isomorphic_relabeling_is_indistinguishable() {
        let a = parse_edge_list("0 1\n1 2\n2 3\n3 0\n0 2\n", "a").unwrap().graph;
        let b = parse_edge_list("3 2\n2 1\n1 0\n0 3\n3 1\n", "b").unwrap().graph;
        assert!(wl_indistinguishable(&a, &b));
    }

    #[test]
    fn cycle_pair_c6_vs_two_c3() {
        // The classic 1-WL blind spot: a 6-cycle vs two triangles.
        let c6 = parse_edge_list("0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n", "c6").unwrap().graph;
        let cc = parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n", "cc").unwrap().graph;
        assert!(wl_indistinguishable(&c6, &cc));
    }

    #[test]
    fn builtin_pair_is_wl_indistinguishable() {
        let (decalin, bicyclopentyl) = builtin_wl_pair();
        assert!(wl_indistinguishable(&decalin, &bicyclopentyl));
    }
}
