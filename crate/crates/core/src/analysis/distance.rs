//! Pairwise distances between the layouts of one ensemble.

use crate::error::{Error, Result};
use crate::features::edge_lengths;
use crate::graph::Graph;
use crate::sampler::LayoutEnsemble;

/// k x k symmetric matrix of layout distances, normalized to `[0, 1]`
/// (the diagonal pins the minimum at zero, so normalization divides by the
/// largest distance; an all-identical ensemble yields all zeros).
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutDistanceMatrix {
    k: usize,
    values: Vec<f64>,
}

impl LayoutDistanceMatrix {
    /// Normalize a raw row-major k x k distance matrix.
    pub fn from_raw(k: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != k * k {
            return Err(Error::Mismatch(format!(
                "expected {} entries for a {k} x {k} matrix, got {}",
                k * k,
                values.len()
            )));
        }
        let max = values.iter().cloned().fold(0.0f64, f64::max);
        if max > 0.0 {
            for v in &mut values {
                *v /= max;
            }
        }
        Ok(LayoutDistanceMatrix { k, values })
    }

    pub fn layout_count(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Distance between layouts i and j: the mean over edges of the absolute
/// difference of edge lengths, then normalized over the whole matrix.
pub fn layout_distance_matrix(ens: &LayoutEnsemble, g: &Graph) -> Result<LayoutDistanceMatrix> {
    let k = ens.len();
    if k < 2 {
        return Err(Error::Config(format!(
            "layout distances need at least 2 layouts, got {k}"
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::Mismatch(format!(
            "layout distance is undefined for the edgeless graph {}",
            g.graph_id()
        )));
    }
    let m = g.edge_count() as f64;
    let lengths: Vec<Vec<f64>> = ens
        .layouts
        .iter()
        .enumerate()
        .map(|(i, layout)| edge_lengths(layout, g, i).map(|lv| lv.lengths))
        .collect::<Result<_>>()?;

    let mut raw = vec![0.0; k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            let d: f64 = lengths[i]
                .iter()
                .zip(&lengths[j])
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / m;
            raw[i * k + j] = d;
            raw[j * k + i] = d;
        }
    }
    LayoutDistanceMatrix::from_raw(k, raw)
}
