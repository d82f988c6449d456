//! Force evaluation for the spring-electrical family.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::{LayoutParams, Positions};

/// Magnitude of the seeded offset applied to resolve coincident nodes.
pub(crate) const JITTER: f64 = 1e-6;

/// `d^e` with exact fast paths for the exponents the stock models use, so
/// the FR and AR code paths produce identical bits at `(2, -1)`.
#[inline]
fn dist_pow(d: f64, e: f64) -> f64 {
    if e == 2.0 {
        d * d
    } else if e == 1.0 {
        d
    } else if e == 0.0 {
        1.0
    } else if e == -1.0 {
        1.0 / d
    } else if e == -2.0 {
        1.0 / (d * d)
    } else {
        d.powf(e)
    }
}

pub(crate) fn potential(d: f64, e: f64) -> f64 {
    // Antiderivative of d^e, so that force = -dU/dd exactly.
    if e == -1.0 {
        d.ln()
    } else {
        dist_pow(d, e + 1.0) / (e + 1.0)
    }
}

/// Net force matrix (n x d, row-major) of the (a, r) model:
/// attraction `k_attr * d^a` toward each neighbor along every edge, repulsion
/// `k_rep * d^r` away from every other node. With `(a, r) = (2, -1)` this is
/// exactly the negative gradient of the Fruchterman-Reingold energy.
///
/// Per-node contributions are accumulated in value-sorted order, which makes
/// the result independent of node numbering: relabeling the graph permutes
/// the forces bit-for-bit.
pub fn ar_forces(p: &Positions, g: &Graph, params: &LayoutParams) -> Result<Vec<f64>> {
    let (a_exp, r_exp) = params.exponents();
    let n = p.node_count();
    let dim = p.dim();
    debug_assert_eq!(n, g.node_count());

    let mut forces = vec![0.0; n * dim];
    let mut contributions: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1) * 2);
    let mut term = vec![0.0; dim];

    for i in 0..n {
        contributions.clear();
        let pi = p.row(i);
        for &j in g.neighbors(i) {
            let j = j as usize;
            let d = p.distance(i, j);
            if d == 0.0 {
                return Err(Error::NumericDegeneracy(format!(
                    "coincident nodes {i} and {j} during force evaluation"
                )));
            }
            // Attraction toward the neighbor: k_attr * d^a * unit(i -> j).
            let scale = params.k_attr * dist_pow(d, a_exp) / d;
            let pj = p.row(j);
            for k in 0..dim {
                term[k] = scale * (pj[k] - pi[k]);
            }
            contributions.push(term.clone());
        }
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = p.distance(i, j);
            if d == 0.0 {
                return Err(Error::NumericDegeneracy(format!(
                    "coincident nodes {i} and {j} during force evaluation"
                )));
            }
            // Repulsion away from j: k_rep * d^r * unit(j -> i).
            let scale = params.k_rep * dist_pow(d, r_exp) / d;
            let pj = p.row(j);
            for k in 0..dim {
                term[k] = scale * (pi[k] - pj[k]);
            }
            contributions.push(term.clone());
        }
        contributions.sort_unstable_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let row = &mut forces[i * dim..(i + 1) * dim];
        for c in &contributions {
            for k in 0..dim {
                row[k] += c[k];
            }
        }
    }
    Ok(forces)
}

/// Nudge the later-indexed node of every coincident pair by a seeded uniform
/// offset so the force law stays finite. Returns an error if a pair is still
/// coincident afterwards.
pub(crate) fn resolve_coincidences(p: &mut Positions, rng: &mut ChaCha8Rng) -> Result<()> {
    let n = p.node_count();
    let dim = p.dim();
    for pass in 0..2 {
        let mut any = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if p.distance_squared(i, j) == 0.0 {
                    if pass == 1 {
                        return Err(Error::NumericDegeneracy(format!(
                            "nodes {i} and {j} coincident after jitter"
                        )));
                    }
                    any = true;
                    let row = p.row_mut(j);
                    for v in row.iter_mut().take(dim) {
                        *v += rng.gen_range(-JITTER..=JITTER);
                    }
                }
            }
        }
        if !any {
            return Ok(());
        }
    }
    Ok(())
}
