//! Expressivity and diagnostics toolkit: graph total weights with their KDE,
//! layout-distance matrices with MDS, energy curves, and the built-in
//! 1-WL-indistinguishable graph pair.

mod distance;
mod kde;
mod mds;
mod stats;
mod wl;

pub use distance::{layout_distance_matrix, LayoutDistanceMatrix};
pub use kde::{Kde, BANDWIDTH_FLOOR};
pub use mds::{classical_mds, MdsEmbedding};
pub use stats::{kolmogorov_survival, ks_two_sample};
pub use wl::wl_indistinguishable;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{edge_lengths, EdgeLengthVector};
use crate::graph::{Dataset, Graph};
use crate::sampler::{layout_seed, sample_dataset, sample_ensemble, SampleConfig};

/// Two-sample KS p-value below which two GTW distributions count as
/// distinguishable.
pub const DISTINGUISH_P: f64 = 0.01;

/// Two-sample KS p-value above which two runs on the same graph count as
/// stable (indistinguishable).
pub const STABILITY_P: f64 = 0.05;

/// Grid resolution used to locate the KDE mode.
pub const KDE_MODE_GRID: usize = 512;

/// Graph total weight of one layout: the sum over the full symmetric edge
/// length matrix, i.e. twice the sum over undirected edges.
pub fn gtw(lengths: &EdgeLengthVector) -> f64 {
    2.0 * lengths.lengths.iter().sum::<f64>()
}

/// Min, max, and KDE mode of a GTW sample set.
#[derive(Debug, Clone, Serialize)]
pub struct GtwSummary {
    pub min: f64,
    pub max: f64,
    pub mode: f64,
}

/// GTW samples from repeated layout sampling plus a Gaussian KDE over them.
#[derive(Debug, Clone)]
pub struct GtwDistribution {
    pub graph_id: String,
    pub samples: Vec<f64>,
    pub kde: Kde,
    pub summary: GtwSummary,
}

impl GtwDistribution {
    pub fn bandwidth(&self) -> f64 {
        self.kde.bandwidth()
    }
}

/// Sample `n_samples` independent layouts of `g` and collect the GTW of each,
/// with a KDE fit and its grid mode on `[min - 3h, max + 3h]`.
pub fn gtw_distribution(g: &Graph, n_samples: usize, cfg: &SampleConfig) -> Result<GtwDistribution> {
    if n_samples < 2 {
        return Err(Error::Config(format!(
            "GTW distribution needs at least 2 samples, got {n_samples}"
        )));
    }
    let cfg = SampleConfig {
        layouts_per_graph: n_samples,
        ..cfg.clone()
    };
    let ens = sample_ensemble(g, &cfg)?;
    let samples: Vec<f64> = ens
        .layouts
        .iter()
        .enumerate()
        .map(|(i, layout)| Ok(gtw(&edge_lengths(layout, g, i)?)))
        .collect::<Result<_>>()?;
    let kde = Kde::fit(&samples, None)?;
    let min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let h = kde.bandwidth();
    // The grid argmax can land half a grid step outside the sample range;
    // the summary contract keeps the mode inside [min, max].
    let mode = kde
        .mode_on_grid(min - 3.0 * h, max + 3.0 * h, KDE_MODE_GRID)
        .clamp(min, max);
    Ok(GtwDistribution {
        graph_id: g.graph_id().to_string(),
        samples,
        kde,
        summary: GtwSummary { min, max, mode },
    })
}

/// Mean energy per iteration across all graphs and sampled layouts. Traces
/// that converge early are extended with their final energy. The result has
/// `iterations + 1` entries, index 0 being the random initialization.
pub fn energy_curve(ds: &Dataset, cfg: &SampleConfig, iterations: usize) -> Result<Vec<f64>> {
    if iterations == 0 {
        return Err(Error::Config("energy curve needs iterations >= 1".into()));
    }
    let cfg = SampleConfig {
        layout_params: crate::layout::LayoutParams {
            iterations,
            ..cfg.layout_params.clone()
        },
        ..cfg.clone()
    };
    let ensembles = sample_dataset(ds, &cfg)?;
    let mut sums = vec![0.0; iterations + 1];
    let mut count = 0usize;
    for ens in &ensembles {
        for trace in &ens.traces {
            count += 1;
            for (t, slot) in sums.iter_mut().enumerate() {
                let value = trace.0.get(t).copied().unwrap_or_else(|| trace.last());
                *slot += value;
            }
        }
    }
    if count == 0 {
        return Err(Error::Config("energy curve needs a non-empty dataset".into()));
    }
    Ok(sums.into_iter().map(|s| s / count as f64).collect())
}

/// Decalin and Bicyclopentyl: ten nodes and eleven edges each, identical
/// degree sequences, indistinguishable under 1-WL color refinement.
///
/// Decalin fuses two hexagons along a shared edge; Bicyclopentyl joins two
/// pentagons by a bridge edge.
pub fn builtin_wl_pair() -> (Graph, Graph) {
    let decalin = Graph::new(
        10,
        vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (0, 5), // shared edge
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 9),
            (0, 9),
        ],
        "decalin",
    )
    .expect("static graph");
    let bicyclopentyl = Graph::new(
        10,
        vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 4),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 9),
            (5, 9),
            (0, 5), // bridge
        ],
        "bicyclopentyl",
    )
    .expect("static graph");
    (decalin, bicyclopentyl)
}

/// One graph's entry in an expressivity report.
#[derive(Debug, Clone, Serialize)]
pub struct GraphGtwReport {
    pub graph_id: String,
    pub n_samples: usize,
    pub kde_bandwidth: f64,
    pub summary: GtwSummary,
    /// Run-to-run KS between this graph's GTW samples under two independent
    /// base seeds; high p means the sampler is stable on this graph.
    pub ks_self_statistic: f64,
    pub ks_self_p: f64,
}

/// Machine-readable outcome of the expressivity analysis on a graph pair.
#[derive(Debug, Clone, Serialize)]
pub struct ExpressivityReport {
    pub graphs: Vec<GraphGtwReport>,
    pub wl_indistinguishable: bool,
    pub ks_between_statistic: f64,
    pub ks_between_p: f64,
    /// `ks_between_p < DISTINGUISH_P`.
    pub distinguishable: bool,
    /// Run-to-run p above `STABILITY_P` for both graphs.
    pub stable: bool,
}

impl ExpressivityReport {
    pub fn passed(&self) -> bool {
        self.distinguishable && self.stable
    }

    /// Multi-line human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for g in &self.graphs {
            out.push_str(&format!(
                "{}: {} samples, gtw min {:.4} max {:.4} mode {:.4}, run-to-run KS p {:.4}\n",
                g.graph_id, g.n_samples, g.summary.min, g.summary.max, g.summary.mode, g.ks_self_p
            ));
        }
        out.push_str(&format!(
            "between: KS statistic {:.4}, p {:.3e} -> {}\n",
            self.ks_between_statistic,
            self.ks_between_p,
            if self.distinguishable {
                "distinguishable"
            } else {
                "not distinguishable"
            }
        ));
        out.push_str(&format!(
            "1-WL indistinguishable: {}; stability: {}\n",
            self.wl_indistinguishable,
            if self.stable { "ok" } else { "failed" }
        ));
        out
    }
}

/// Full GTW distributions backing an [`ExpressivityReport`].
pub struct ExpressivityOutput {
    pub report: ExpressivityReport,
    pub distributions: Vec<GtwDistribution>,
}

/// Run the expressivity analysis on the built-in Decalin/Bicyclopentyl pair.
pub fn expressivity_report(cfg: &SampleConfig, n_samples: usize) -> Result<ExpressivityOutput> {
    let (a, b) = builtin_wl_pair();
    expressivity_report_for(&a, &b, cfg, n_samples)
}

/// Expressivity analysis for an arbitrary graph pair: GTW distributions per
/// graph, the KS separation between them, and per-graph run-to-run stability
/// across two independent base seeds.
pub fn expressivity_report_for(
    g1: &Graph,
    g2: &Graph,
    cfg: &SampleConfig,
    n_samples: usize,
) -> Result<ExpressivityOutput> {
    let second_seed = layout_seed(cfg.base_seed, "expressivity-rerun", 1);
    let rerun_cfg = SampleConfig {
        base_seed: second_seed,
        ..cfg.clone()
    };

    let mut graphs = Vec::with_capacity(2);
    let mut distributions = Vec::with_capacity(2);
    for g in [g1, g2] {
        let dist = gtw_distribution(g, n_samples, cfg)?;
        let rerun = gtw_distribution(g, n_samples, &rerun_cfg)?;
        let (ks_self_statistic, ks_self_p) = ks_two_sample(&dist.samples, &rerun.samples);
        graphs.push(GraphGtwReport {
            graph_id: g.graph_id().to_string(),
            n_samples,
            kde_bandwidth: dist.bandwidth(),
            summary: dist.summary.clone(),
            ks_self_statistic,
            ks_self_p,
        });
        distributions.push(dist);
    }

    let (ks_between_statistic, ks_between_p) =
        ks_two_sample(&distributions[0].samples, &distributions[1].samples);
    let distinguishable = ks_between_p < DISTINGUISH_P;
    let stable = graphs.iter().all(|g| g.ks_self_p > STABILITY_P);
    let report = ExpressivityReport {
        graphs,
        wl_indistinguishable: wl_indistinguishable(g1, g2),
        ks_between_statistic,
        ks_between_p,
        distinguishable,
        stable,
    };
    Ok(ExpressivityOutput {
        report,
        distributions,
    })
}
