//! Kamada-Kawai layout via per-node Newton-Raphson.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::apsp::shortest_paths;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::energy::{
    kk_delta, kk_energy, kk_node_energy, kk_node_gradient, kk_node_hessian, kk_newton_direction,
};
use crate::layout::forces::resolve_coincidences;
use crate::layout::{EnergyTrace, Layout, LayoutParams, Positions};

const INNER_NEWTON_STEPS: usize = 50;
const BACKTRACK_LIMIT: usize = 40;

/// Kamada-Kawai optimization: ideal spring lengths come from shortest-path
/// distances (with the finite substitute on disconnected pairs). Each outer
/// sweep picks the node with the largest gradient norm and minimizes the
/// energy over its position with safeguarded Newton-Raphson; a damped
/// gradient step covers indefinite Hessians, and every move is backtracked
/// until it does not increase the energy, so the per-sweep trace is
/// non-increasing.
pub fn kk_layout(g: &Graph, params: &LayoutParams, seed: u64) -> Result<(Layout, EnergyTrace)> {
    params.validate()?;
    let n = g.node_count();
    let ideal = shortest_paths(g).ideal_lengths();
    let spring_k = params.kk_spring_k;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Positions::uniform(n, params.dim, params.init_box, &mut rng);
    resolve_coincidences(&mut p, &mut rng)?;

    let mut trace = vec![kk_energy(&p, &ideal, spring_k)];
    let mut sweeps = 0;
    for _ in 0..params.iterations {
        let (m, delta_max) = (0..n)
            .map(|m| (m, kk_delta(&p, &ideal, spring_k, m)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("graph has at least one node");
        if delta_max < params.kk_tolerance {
            break;
        }
        minimize_node(&mut p, &ideal, spring_k, m, params.kk_tolerance, &mut rng)?;
        sweeps += 1;
        trace.push(kk_energy(&p, &ideal, spring_k));
    }

    if !p.all_finite() {
        return Err(Error::NumericDegeneracy(
            "non-finite position after Kamada-Kawai sweep".into(),
        ));
    }
    let final_energy = *trace.last().unwrap();
    Ok((
        Layout {
            positions: p,
            seed,
            iterations_run: sweeps,
            final_energy,
            algorithm: params.algorithm,
        },
        EnergyTrace(trace),
    ))
}

/// Inner Newton loop over one node's position.
fn minimize_node(
    p: &mut Positions,
    ideal: &[f64],
    spring_k: f64,
    m: usize,
    tolerance: f64,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let dim = p.dim();
    for _ in 0..INNER_NEWTON_STEPS {
        separate_node(p, m, rng)?;
        let grad = kk_node_gradient(p, ideal, spring_k, m);
        let delta: f64 = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        if delta < tolerance {
            return Ok(());
        }
        let hessian = kk_node_hessian(p, ideal, spring_k, m);
        let direction = kk_newton_direction(&hessian, &grad);

        // Backtrack until the local energy does not increase.
        let before = kk_node_energy(p, ideal, spring_k, m);
        let original: Vec<f64> = p.row(m).to_vec();
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..BACKTRACK_LIMIT {
            let row = p.row_mut(m);
            for k in 0..dim {
                row[k] = original[k] + lambda * direction[k];
            }
            if p.all_finite() && kk_node_energy(p, ideal, spring_k, m) <= before {
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !moved {
            p.row_mut(m).copy_from_slice(&original);
            return Ok(());
        }
    }
    Ok(())
}

/// Jitter node `m` if it sits exactly on another node.
fn separate_node(p: &mut Positions, m: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    use rand::Rng;
    let n = p.node_count();
    let dim = p.dim();
    for _ in 0..2 {
        let coincident = (0..n).any(|j| j != m && p.distance_squared(m, j) == 0.0);
        if !coincident {
            return Ok(());
        }
        let row = p.row_mut(m);
        for v in row.iter_mut().take(dim) {
            *v += rng.gen_range(-super::forces::JITTER..=super::forces::JITTER);
        }
    }
    if (0..n).any(|j| j != m && p.distance_squared(m, j) == 0.0) {
        return Err(Error::NumericDegeneracy(format!(
            "node {m} coincident after jitter"
        )));
    }
    Ok(())
}
