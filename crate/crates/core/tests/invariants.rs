//! Cross-module invariants: rigid-motion and permutation symmetries,
//! round-trip formats, statistical behavior of the random pieces.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use del_core::analysis::{energy_curve, gtw_distribution, kolmogorov_survival, Kde};
use del_core::features::{
    edge_lengths, feature_tensor, read_features, write_features,
};
use del_core::graph::{parse_edge_list, Dataset, Graph};
use del_core::layout::{random_layout, Layout, LayoutAlgorithm, LayoutParams, Positions};
use del_core::sampler::{sample_ensemble, LayoutEnsemble, SampleConfig};

fn arbitrary_edges(n: usize) -> impl Strategy<Value = Vec<(u32, u32)>> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| ((u + 1)..n as u32).map(move |v| (u, v)))
        .collect();
    proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
}

proptest! {
    /// Canonical edge order is a pure function of the edge set: shuffling
    /// the input lines (and flipping endpoint order) changes nothing.
    #[test]
    fn canonical_order_ignores_input_order(
        edges in arbitrary_edges(8),
        seed in any::<u64>(),
    ) {
        prop_assume!(!edges.is_empty());
        let doc: String = edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect();
        let base = parse_edge_list(&format!("n=8\n{doc}"), "g").unwrap().graph;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = edges.clone();
        for i in (1..shuffled.len()).rev() {
            let j = rng.gen_range(0..=i);
            shuffled.swap(i, j);
        }
        let doc2: String = shuffled
            .iter()
            .map(|(u, v)| if rng.gen_bool(0.5) { format!("{v} {u}\n") } else { format!("{u} {v}\n") })
            .collect();
        let other = parse_edge_list(&format!("n=8\n{doc2}"), "g").unwrap().graph;
        prop_assert_eq!(base, other);
    }

    /// Rotating and translating a layout leaves edge lengths unchanged to
    /// 1e-9 relative.
    #[test]
    fn edge_lengths_rigid_motion_invariant(
        edges in arbitrary_edges(6),
        theta in -std::f64::consts::PI..std::f64::consts::PI,
        tx in -10.0f64..10.0,
        ty in -10.0f64..10.0,
        seed in any::<u64>(),
    ) {
        prop_assume!(!edges.is_empty());
        let g = Graph::new(6, edges, "g").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Positions::uniform(6, 2, 1.0, &mut rng);
        let (s, c) = theta.sin_cos();
        let moved: Vec<f64> = (0..6)
            .flat_map(|i| {
                let r = p.row(i);
                vec![c * r[0] - s * r[1] + tx, s * r[0] + c * r[1] + ty]
            })
            .collect();
        let layout = |pos| Layout {
            positions: pos,
            seed: 0,
            iterations_run: 0,
            final_energy: 0.0,
            algorithm: LayoutAlgorithm::FruchtermanReingold,
        };
        let a = edge_lengths(&layout(p), &g, 0).unwrap();
        let b = edge_lengths(&layout(Positions::from_rows(6, 2, moved).unwrap()), &g, 0).unwrap();
        for (x, y) in a.lengths.iter().zip(&b.lengths) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    /// Relabeling nodes and permuting layout rows accordingly yields the
    /// same multiset of edge lengths.
    #[test]
    fn edge_lengths_permutation_consistent(
        edges in arbitrary_edges(6),
        seed in any::<u64>(),
    ) {
        prop_assume!(!edges.is_empty());
        let g = Graph::new(6, edges.clone(), "g").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Positions::uniform(6, 2, 1.0, &mut rng);

        let mut perm: Vec<usize> = (0..6).collect();
        for i in (1..6).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let permuted_edges: Vec<(u32, u32)> = edges
            .iter()
            .map(|&(u, v)| (perm[u as usize] as u32, perm[v as usize] as u32))
            .collect();
        let gp = Graph::new(6, permuted_edges, "g").unwrap();
        let mut moved = vec![0.0; 12];
        for i in 0..6 {
            moved[perm[i] * 2..perm[i] * 2 + 2].copy_from_slice(p.row(i));
        }
        let layout = |pos| Layout {
            positions: pos,
            seed: 0,
            iterations_run: 0,
            final_energy: 0.0,
            algorithm: LayoutAlgorithm::FruchtermanReingold,
        };
        let mut a = edge_lengths(&layout(p), &g, 0).unwrap().lengths;
        let mut b = edge_lengths(&layout(Positions::from_rows(6, 2, moved).unwrap()), &gp, 0)
            .unwrap()
            .lengths;
        a.sort_unstable_by(f64::total_cmp);
        b.sort_unstable_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    /// Feature files survive a write/read cycle bit-exactly.
    #[test]
    fn delf_round_trip(
        edges in arbitrary_edges(7),
        k in 1usize..5,
        seed in any::<u64>(),
    ) {
        prop_assume!(!edges.is_empty());
        let g = Graph::new(7, edges, "rt#0").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layouts: Vec<Layout> = (0..k)
            .map(|_| Layout {
                positions: Positions::uniform(7, 2, 5.0, &mut rng),
                seed: rng.gen(),
                iterations_run: 3,
                final_energy: rng.gen_range(-10.0..10.0),
                algorithm: LayoutAlgorithm::FruchtermanReingold,
            })
            .collect();
        let ens = LayoutEnsemble {
            graph_id: "rt#0".into(),
            layouts,
            traces: vec![],
        };
        let tensor = feature_tensor(&ens, &g).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.delf");
        write_features(&path, std::slice::from_ref(&tensor)).unwrap();
        let back = read_features(&path).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(&back[0], &tensor);
    }

    /// On 2D-realizable inputs, classical MDS reproduces the distances; in
    /// particular no embedded distance exceeds the largest input distance
    /// beyond 1e-6 relative.
    #[test]
    fn mds_respects_realizable_distances(
        points in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..9),
    ) {
        let k = points.len();
        let mut raw = vec![0.0; k * k];
        let mut max_raw = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                raw[i * k + j] = (dx * dx + dy * dy).sqrt();
                max_raw = max_raw.max(raw[i * k + j]);
            }
        }
        prop_assume!(max_raw > 1e-6);
        let d = del_core::analysis::LayoutDistanceMatrix::from_raw(k, raw).unwrap();
        let emb = del_core::analysis::classical_mds(&d).unwrap();
        let max_input = 1.0; // normalized
        for i in 0..k {
            for j in (i + 1)..k {
                let got = emb.distance(i, j);
                prop_assert!(got <= max_input * (1.0 + 1e-6));
                prop_assert!((got - d.get(i, j)).abs() <= 1e-6 * d.get(i, j).max(1e-9));
            }
        }
    }

    /// KDE densities are non-negative and integrate to 1 within 1e-3 on the
    /// extended grid.
    #[test]
    fn kde_normalization(samples in proptest::collection::vec(-50.0f64..50.0, 1..40)) {
        let kde = Kde::fit(&samples, None).unwrap();
        let h = kde.bandwidth();
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min) - 5.0 * h;
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5.0 * h;
        let grid = kde.grid(lo, hi, 4096);
        let mut integral = 0.0;
        for w in grid.windows(2) {
            prop_assert!(w[0].1 >= 0.0);
            integral += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
        }
        prop_assert!((integral - 1.0).abs() < 1e-3, "integral {}", integral);
    }
}

/// One-sample KS check that random_layout coordinates are uniform on the
/// initialization box.
#[test]
fn random_layout_coordinates_are_uniform() {
    let g = Graph::new(25, vec![(0, 1)], "u").unwrap();
    let params = LayoutParams {
        init_box: 1.0,
        ..LayoutParams::default()
    };
    let mut draws = Vec::with_capacity(10_000);
    let mut seed = 0u64;
    while draws.len() < 10_000 {
        let layout = random_layout(&g, &params, seed).unwrap();
        draws.extend_from_slice(layout.positions.as_slice());
        seed += 1;
    }
    draws.truncate(10_000);
    draws.sort_unstable_by(f64::total_cmp);
    let n = draws.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in draws.iter().enumerate() {
        let cdf = ((x + 1.0) / 2.0).clamp(0.0, 1.0);
        d = d.max((cdf - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - cdf).abs());
    }
    let sqrt_n = n.sqrt();
    let p = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    assert!(p > 0.01, "uniformity rejected: D = {d:.4}, p = {p:.4}");
}

/// Decalin has 10 nodes and 11 edges, so its default feature tensor is
/// 11 x 8.
#[test]
fn decalin_feature_tensor_shape() {
    let (decalin, _) = del_core::analysis::builtin_wl_pair();
    let cfg = SampleConfig::default();
    let ens = sample_ensemble(&decalin, &cfg).unwrap();
    let t = feature_tensor(&ens, &decalin).unwrap();
    assert_eq!(t.edge_count(), 11);
    assert_eq!(t.layout_count(), 8);
}

/// An edgeless graph yields the all-zero GTW distribution; the bandwidth
/// floor keeps the KDE well-defined.
#[test]
fn degenerate_gtw_distribution_is_handled() {
    let g = Graph::new(3, Vec::<(u32, u32)>::new(), "empty").unwrap();
    let cfg = SampleConfig {
        layout_params: LayoutParams {
            iterations: 5,
            ..LayoutParams::default()
        },
        ..SampleConfig::default()
    };
    let dist = gtw_distribution(&g, 10, &cfg).unwrap();
    assert!(dist.samples.iter().all(|&v| v == 0.0));
    assert_eq!(dist.summary.min, 0.0);
    assert_eq!(dist.summary.max, 0.0);
    assert_eq!(dist.summary.mode, 0.0);
    assert_eq!(dist.bandwidth(), del_core::analysis::BANDWIDTH_FLOOR);
}

fn random_sparse(n: usize, m: usize, rng: &mut ChaCha8Rng, id: &str) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    while edges.len() < m {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    Graph::new(n, edges.into_iter().collect::<Vec<_>>(), id).unwrap()
}

fn complete_graph(n: usize, id: &str) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges, id).unwrap()
}

/// Sparse graphs converge below the random-initialization energy; dense
/// complete graphs overshoot upward first and then decline (the two curve
/// shapes the energy diagnostics are meant to expose).
#[test]
fn energy_curve_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let sparse: Vec<Graph> = (0..8)
        .map(|i| {
            let n = rng.gen_range(14..=22);
            random_sparse(n, (1.2 * n as f64) as usize, &mut rng, &format!("s#{i}"))
        })
        .collect();
    let ds = Dataset {
        name: "sparse".into(),
        graphs: sparse,
    };
    let cfg = SampleConfig {
        layouts_per_graph: 2,
        ..SampleConfig::default()
    };
    let curve = energy_curve(&ds, &cfg, 50).unwrap();
    assert_eq!(curve.len(), 51);
    assert!(
        curve[50] < curve[0],
        "sparse curve should end below start: {} vs {}",
        curve[50],
        curve[0]
    );

    let dense = Dataset {
        name: "k8".into(),
        graphs: (0..5).map(|i| complete_graph(8, &format!("k8#{i}"))).collect(),
    };
    let curve = energy_curve(&dense, &cfg, 50).unwrap();
    let peak = curve
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        peak > curve[0],
        "dense curve should rise before settling: peak {peak} vs start {}",
        curve[0]
    );
    assert!(curve[50] < peak, "dense curve should decline after its peak");
}
