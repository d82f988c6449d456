//! Reproducible sampling of layout ensembles.
//!
//! Every layout draws its seed from a fixed 64-bit hash mix of
//! `(base_seed, graph_id, layout_index)`, so results are byte-identical
//! regardless of thread count, scheduling, or graph order.

use rayon::prelude::*;

use crate::error::{Error, Result, SampleFailure};
use crate::graph::{Dataset, Graph};
use crate::layout::{fr_layout, kk_layout, EnergyTrace, Layout, LayoutAlgorithm, LayoutParams};

/// How many worker threads the sampler may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThreadBudget {
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone)]
pub struct SampleConfig {
    /// Layouts drawn per graph (k).
    pub layouts_per_graph: usize,
    pub base_seed: u64,
    pub layout_params: LayoutParams,
    pub thread_budget: ThreadBudget,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            layouts_per_graph: 8,
            base_seed: 42,
            layout_params: LayoutParams::default(),
            thread_budget: ThreadBudget::Auto,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layouts_per_graph == 0 {
            return Err(Error::Config("layouts_per_graph must be >= 1".into()));
        }
        if let ThreadBudget::Fixed(0) = self.thread_budget {
            return Err(Error::Config("thread budget must be >= 1".into()));
        }
        self.layout_params.validate()
    }
}

/// The k layouts (and their energy traces) sampled for one graph.
#[derive(Debug, Clone)]
pub struct LayoutEnsemble {
    pub graph_id: String,
    pub layouts: Vec<Layout>,
    pub traces: Vec<EnergyTrace>,
}

impl LayoutEnsemble {
    pub fn len(&self) -> usize {
        self.layouts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layouts.is_empty()
    }
}

/// Deterministic per-layout seed: FNV-1a over the tuple followed by a
/// splitmix64 finalizer. Keyed by graph id, not dataset position.
pub fn layout_seed(base_seed: u64, graph_id: &str, layout_index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(&base_seed.to_le_bytes());
    eat(graph_id.as_bytes());
    eat(&layout_index.to_le_bytes());
    splitmix64(h)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn run_layout(g: &Graph, params: &LayoutParams, seed: u64) -> Result<(Layout, EnergyTrace)> {
    match params.algorithm {
        LayoutAlgorithm::KamadaKawai => kk_layout(g, params, seed),
        _ => fr_layout(g, params, seed),
    }
}

fn with_pool<T: Send>(budget: ThreadBudget, job: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = match budget {
        ThreadBudget::Auto => 0,
        ThreadBudget::Fixed(n) => n,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("failed to build thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// Draw `k` independent layouts for one graph.
pub fn sample_ensemble(g: &Graph, cfg: &SampleConfig) -> Result<LayoutEnsemble> {
    cfg.validate()?;
    let results = with_pool(cfg.thread_budget, || {
        (0..cfg.layouts_per_graph)
            .into_par_iter()
            .map(|i| {
                let seed = layout_seed(cfg.base_seed, g.graph_id(), i as u64);
                run_layout(g, &cfg.layout_params, seed)
            })
            .collect::<Vec<_>>()
    })?;
    collect_ensemble(g.graph_id(), results)
}

fn collect_ensemble(
    graph_id: &str,
    results: Vec<Result<(Layout, EnergyTrace)>>,
) -> Result<LayoutEnsemble> {
    let mut layouts = Vec::with_capacity(results.len());
    let mut traces = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok((layout, trace)) => {
                layouts.push(layout);
                traces.push(trace);
            }
            Err(error) => failures.push(SampleFailure {
                graph_id: graph_id.to_string(),
                layout_index: i,
                error: Box::new(error),
            }),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Sampling(failures));
    }
    Ok(LayoutEnsemble {
        graph_id: graph_id.to_string(),
        layouts,
        traces,
    })
}

/// Sample every graph of a dataset, preserving dataset order. Tasks run
/// concurrently across (graph, layout) pairs; per-graph failures are
/// collected and reported together.
pub fn sample_dataset(ds: &Dataset, cfg: &SampleConfig) -> Result<Vec<LayoutEnsemble>> {
    cfg.validate()?;
    let k = cfg.layouts_per_graph;
    let results: Vec<Result<(Layout, EnergyTrace)>> = with_pool(cfg.thread_budget, || {
        let tasks: Vec<(usize, usize)> = (0..ds.graphs.len())
            .flat_map(|gi| (0..k).map(move |li| (gi, li)))
            .collect();
        tasks
            .into_par_iter()
            .map(|(gi, li)| {
                let g = &ds.graphs[gi];
                let seed = layout_seed(cfg.base_seed, g.graph_id(), li as u64);
                run_layout(g, &cfg.layout_params, seed)
            })
            .collect()
    })?;

    let mut ensembles = Vec::with_capacity(ds.graphs.len());
    let mut failures = Vec::new();
    for (gi, chunk) in results.chunks(k).enumerate() {
        let graph_id = ds.graphs[gi].graph_id();
        let mut layouts = Vec::with_capacity(k);
        let mut traces = Vec::with_capacity(k);
        for (li, result) in chunk.iter().enumerate() {
            match result {
                Ok((layout, trace)) => {
                    layouts.push(layout.clone());
                    traces.push(trace.clone());
                }
                Err(error) => failures.push(SampleFailure {
                    graph_id: graph_id.to_string(),
                    layout_index: li,
                    error: Box::new(clone_error(error)),
                }),
            }
        }
        ensembles.push(LayoutEnsemble {
            graph_id: graph_id.to_string(),
            layouts,
            traces,
        });
    }
    if !failures.is_empty() {
        return Err(Error::Sampling(failures));
    }
    Ok(ensembles)
}

// Error is not Clone (it can wrap io::Error); rebuild the message instead.
fn clone_error(e: &Error) -> Error {
    match e {
        Error::NumericDegeneracy(m) => Error::NumericDegeneracy(m.clone()),
        Error::Config(m) => Error::Config(m.clone()),
        other => Error::Format(other.to_string()),
    }
}
