//! Classical (Torgerson) multidimensional scaling.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::analysis::distance::LayoutDistanceMatrix;
use crate::error::{Error, Result};

/// 2D embedding of a distance matrix plus the fraction of (positive)
/// eigenvalue mass the two kept axes capture.
#[derive(Debug, Clone)]
pub struct MdsEmbedding {
    pub coords: Vec<[f64; 2]>,
    pub variance_fraction: f64,
}

impl MdsEmbedding {
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.coords[i], self.coords[j]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }
}

/// Torgerson double-centering followed by an eigendecomposition; the top two
/// non-negative eigenpairs give coordinates. Deterministic, no iteration.
pub fn classical_mds(d: &LayoutDistanceMatrix) -> Result<MdsEmbedding> {
    let k = d.layout_count();
    if k < 2 {
        return Err(Error::Config(format!(
            "MDS needs at least 2 points, got {k}"
        )));
    }

    // B = -1/2 * J D^2 J with J = I - (1/k) 1 1^T.
    let d2 = DMatrix::from_fn(k, k, |i, j| {
        let v = d.get(i, j);
        v * v
    });
    let ones = DMatrix::from_element(k, k, 1.0 / k as f64);
    let j = DMatrix::identity(k, k) - ones;
    let b = -0.5 * (&j * d2 * &j);

    let eigen = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));

    let positive_sum: f64 = eigen.eigenvalues.iter().filter(|&&v| v > 0.0).sum();
    let mut kept_sum = 0.0;
    let mut coords = vec![[0.0; 2]; k];
    for (axis, &idx) in order.iter().take(2).enumerate() {
        let lambda = eigen.eigenvalues[idx];
        if lambda <= 0.0 {
            continue;
        }
        kept_sum += lambda;
        let scale = lambda.sqrt();
        let v = eigen.eigenvectors.column(idx);
        for (i, c) in coords.iter_mut().enumerate() {
            c[axis] = scale * v[i];
        }
    }
    let variance_fraction = if positive_sum > 0.0 {
        kept_sum / positive_sum
    } else {
        // Degenerate all-zero input: the (empty) distance structure is
        // represented perfectly.
        1.0
    };
    Ok(MdsEmbedding {
        coords,
        variance_fraction,
    })
}
