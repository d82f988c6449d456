//! Noisy gradient-descent layout for the spring-electrical models.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::energy::ar_energy;
use crate::layout::forces::{ar_forces, resolve_coincidences};
use crate::layout::{EnergyTrace, Layout, LayoutAlgorithm, LayoutParams, Positions};

/// One Langevin update: `P' = P + step * forces(P) + sqrt(noise_scale) * eps`
/// with `eps` i.i.d. standard normal per coordinate. With `noise_scale = 0`
/// this is a plain gradient step and the RNG is left untouched.
///
/// The force displacement of each node is clamped to norm `init_box` per
/// step: near-coincident initial pairs produce repulsion large enough to
/// send the raw update into a diverging oscillation, and bounding the travel
/// distance per iteration removes that failure mode without moving any
/// equilibrium. The noise term is never clamped.
pub fn langevin_step(
    p: &Positions,
    g: &Graph,
    params: &LayoutParams,
    step: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Positions> {
    let mut next = p.clone();
    resolve_coincidences(&mut next, rng)?;
    let forces = ar_forces(&next, g, params)?;
    let dim = next.dim();
    let max_travel = params.init_box;
    let noise_std = params.noise_scale.sqrt();
    let normal = StandardNormal;
    for i in 0..next.node_count() {
        let f = &forces[i * dim..(i + 1) * dim];
        let travel = step * f.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = if travel > max_travel {
            step * max_travel / travel
        } else {
            step
        };
        let row = next.row_mut(i);
        for k in 0..dim {
            row[k] += scale * f[k];
        }
    }
    if noise_std > 0.0 {
        for value in next.as_mut_slice().iter_mut() {
            let eps: f64 = normal.sample(rng);
            *value += noise_std * eps;
        }
    }
    if !next.all_finite() {
        return Err(Error::NumericDegeneracy(
            "non-finite position after update step".into(),
        ));
    }
    Ok(next)
}

/// Full layout run: uniform random initialization from `seed`, then
/// `iterations` Langevin steps with geometrically cooled step size
/// `step_size * cooling^t`. The trace records the energy after every
/// iteration, index 0 being the initial configuration.
pub fn fr_layout(g: &Graph, params: &LayoutParams, seed: u64) -> Result<(Layout, EnergyTrace)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = Positions::uniform(g.node_count(), params.dim, params.init_box, &mut rng);
    fr_layout_with_rng(g, params, init, seed, &mut rng)
}

/// Like [`fr_layout`] but starting from caller-provided positions; the seed
/// only feeds jitter and noise draws.
pub fn fr_layout_from(
    g: &Graph,
    params: &LayoutParams,
    init: Positions,
    seed: u64,
) -> Result<(Layout, EnergyTrace)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fr_layout_with_rng(g, params, init, seed, &mut rng)
}

fn fr_layout_with_rng(
    g: &Graph,
    params: &LayoutParams,
    init: Positions,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(Layout, EnergyTrace)> {
    if init.node_count() != g.node_count() {
        return Err(Error::Mismatch(format!(
            "initial positions hold {} nodes, graph has {}",
            init.node_count(),
            g.node_count()
        )));
    }
    let mut p = init;
    resolve_coincidences(&mut p, rng)?;
    let mut trace = Vec::with_capacity(params.iterations + 1);
    trace.push(ar_energy(&p, g, params)?);
    let mut step = params.step_size;
    for _ in 0..params.iterations {
        p = langevin_step(&p, g, params, step, rng)?;
        trace.push(ar_energy(&p, g, params)?);
        step *= params.cooling;
    }
    let final_energy = *trace.last().unwrap();
    Ok((
        Layout {
            positions: p,
            seed,
            iterations_run: params.iterations,
            final_energy,
            algorithm: params.algorithm,
        },
        EnergyTrace(trace),
    ))
}

/// Uniform random layout in the initialization box: the "random distance"
/// baseline and the initializer for every optimizer.
pub fn random_layout(g: &Graph, params: &LayoutParams, seed: u64) -> Result<Layout> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Positions::uniform(g.node_count(), params.dim, params.init_box, &mut rng);
    resolve_coincidences(&mut p, &mut rng)?;
    let final_energy = match params.algorithm {
        LayoutAlgorithm::KamadaKawai => {
            let ideal = crate::apsp::shortest_paths(g).ideal_lengths();
            crate::layout::energy::kk_energy(&p, &ideal, params.kk_spring_k)
        }
        _ => ar_energy(&p, g, params)?,
    };
    Ok(Layout {
        positions: p,
        seed,
        iterations_run: 0,
        final_energy,
        algorithm: params.algorithm,
    })
}
