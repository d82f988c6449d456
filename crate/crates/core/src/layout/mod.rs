//! Energy functions, forces, and single-layout optimization.
//!
//! Three energy models share one optimization loop:
//!
//! * Fruchterman-Reingold: attraction `d^2` along edges, repulsion `1/d`
//!   between all pairs — the `(2, -1)` point of the generalized model.
//! * The generalized `(a, r)` model with attraction `d^a` and repulsion
//!   `d^r` (LinLog is `(0, -1)`, ForceAtlas `(1, -1)`).
//! * Kamada-Kawai: all-pairs springs with ideal lengths from shortest-path
//!   distances, minimized one node at a time by Newton-Raphson.
//!
//! Every optimizer is deterministic given `(graph, params, seed)` and can
//! inject Gaussian noise scaled by `sqrt(noise_scale)` to sample from the
//! Boltzmann distribution over configurations instead of descending to a
//! single minimum.

mod energy;
mod forces;
mod fr;
mod kk;

pub use energy::{ar_energy, fr_energy, kk_delta, kk_energy};
pub use forces::ar_forces;
pub use fr::{fr_layout, fr_layout_from, langevin_step, random_layout};
pub use kk::kk_layout;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which energy model drives the optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayoutAlgorithm {
    FruchtermanReingold,
    KamadaKawai,
    ArModel,
}

impl LayoutAlgorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            LayoutAlgorithm::FruchtermanReingold => "fr",
            LayoutAlgorithm::KamadaKawai => "kk",
            LayoutAlgorithm::ArModel => "ar",
        }
    }
}

/// All sampler/optimizer knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub algorithm: LayoutAlgorithm,
    /// Layout dimension, >= 2.
    pub dim: usize,
    /// Iteration budget: force steps for FR/AR, outer sweeps for KK.
    pub iterations: usize,
    pub k_attr: f64,
    pub k_rep: f64,
    /// Attraction exponent of the (a, r) model; ignored by FR (fixed 2).
    pub a_exp: f64,
    /// Repulsion exponent of the (a, r) model; ignored by FR (fixed -1).
    pub r_exp: f64,
    /// Initial step size; decays geometrically by `cooling` each iteration.
    pub step_size: f64,
    /// Fraction of the step size retained per iteration, in (0, 1].
    pub cooling: f64,
    /// Langevin temperature; 0 = deterministic descent.
    pub noise_scale: f64,
    /// Uniform spring strength of the Kamada-Kawai energy.
    pub kk_spring_k: f64,
    /// Convergence threshold on the largest per-node gradient norm.
    pub kk_tolerance: f64,
    /// Half-width of the uniform random initialization box.
    pub init_box: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            algorithm: LayoutAlgorithm::FruchtermanReingold,
            dim: 2,
            iterations: 50,
            k_attr: 1.0,
            k_rep: 1.0,
            a_exp: 2.0,
            r_exp: -1.0,
            step_size: 0.1,
            cooling: 0.95,
            noise_scale: 0.0,
            kk_spring_k: 1.0,
            kk_tolerance: 1e-4,
            init_box: 1.0,
        }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Config(format!("dim must be >= 2, got {}", self.dim)));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        for (name, value) in [
            ("k_attr", self.k_attr),
            ("k_rep", self.k_rep),
            ("step_size", self.step_size),
            ("kk_spring_k", self.kk_spring_k),
            ("kk_tolerance", self.kk_tolerance),
            ("init_box", self.init_box),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if !self.cooling.is_finite() || self.cooling <= 0.0 || self.cooling > 1.0 {
            return Err(Error::Config(format!(
                "cooling must be in (0, 1], got {}",
                self.cooling
            )));
        }
        if !self.noise_scale.is_finite() || self.noise_scale < 0.0 {
            return Err(Error::Config(format!(
                "noise_scale must be >= 0, got {}",
                self.noise_scale
            )));
        }
        if !self.a_exp.is_finite() || !self.r_exp.is_finite() {
            return Err(Error::Config("a_exp and r_exp must be finite".into()));
        }
        Ok(())
    }

    /// Force-law exponents: FR is pinned to `(2, -1)`, the AR model uses the
    /// configured pair.
    pub fn exponents(&self) -> (f64, f64) {
        match self.algorithm {
            LayoutAlgorithm::FruchtermanReingold => (2.0, -1.0),
            _ => (self.a_exp, self.r_exp),
        }
    }
}

/// Node positions: an n x d matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl Positions {
    pub fn zeros(n: usize, dim: usize) -> Self {
        Positions {
            n,
            dim,
            data: vec![0.0; n * dim],
        }
    }

    pub fn from_rows(n: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * dim {
            return Err(Error::Mismatch(format!(
                "expected {} coordinates for {n} x {dim} positions, got {}",
                n * dim,
                data.len()
            )));
        }
        Ok(Positions { n, dim, data })
    }

    /// Uniform initialization in `[-half_width, half_width]^dim`.
    pub fn uniform(n: usize, dim: usize, half_width: f64, rng: &mut ChaCha8Rng) -> Self {
        let data = (0..n * dim)
            .map(|_| rng.gen_range(-half_width..=half_width))
            .collect();
        Positions { n, dim, data }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distance_squared(i, j).sqrt()
    }

    pub fn distance_squared(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.row(i), self.row(j));
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let d = x - y;
                d * d
            })
            .sum()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// One steady-state configuration with its provenance.
#[derive(Debug, Clone)]
pub struct Layout {
    pub positions: Positions,
    pub seed: u64,
    pub iterations_run: usize,
    pub final_energy: f64,
    pub algorithm: LayoutAlgorithm,
}

/// Total energy per iteration; index 0 is the initial random configuration,
/// so the length is `iterations_run + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace(pub Vec<f64>);

impl EnergyTrace {
    pub fn initial(&self) -> f64 {
        self.0[0]
    }

    pub fn last(&self) -> f64 {
        *self.0.last().expect("trace is never empty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
