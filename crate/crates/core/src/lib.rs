//! Distributional edge layouts for graph learning.
//!
//! Force-directed layout algorithms define explicit energy surfaces over
//! node configurations; sampling those surfaces with noisy gradient descent
//! (Langevin dynamics under the Boltzmann distribution) yields a
//! *distribution* of steady-state layouts per graph rather than a single
//! drawing. This crate samples such layout ensembles reproducibly, converts
//! them into per-edge length features for edge-aware graph learning, and
//! ships the analysis toolkit around them: graph-total-weight distributions
//! with kernel density estimates, layout-distance matrices with classical
//! MDS, energy curves, and a 1-WL expressivity harness.
//!
//! The `del` binary wires the pipeline end to end; see the crate README.

pub mod analysis;
pub mod apsp;
pub mod archive;
pub mod error;
pub mod features;
pub mod graph;
pub mod layout;
pub mod sampler;

pub use error::{Error, Result};
