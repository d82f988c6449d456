//! Energy functions and their analytic gradients.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::forces::potential;
use crate::layout::{LayoutParams, Positions};

/// Total (a, r)-model energy: the exact antiderivative of the force law, so
/// that force = -gradient holds pointwise.
///
/// `E = k_attr * sum_edges U(d, a) - k_rep * sum_pairs U(d, r)` where
/// `U(d, e) = d^(e+1) / (e+1)` and `U(d, -1) = ln d`.
pub fn ar_energy(p: &Positions, g: &Graph, params: &LayoutParams) -> Result<f64> {
    let (a_exp, r_exp) = params.exponents();
    let n = p.node_count();
    let mut attraction = 0.0;
    for &(u, v) in g.edges() {
        let d = p.distance(u as usize, v as usize);
        if d == 0.0 {
            return Err(Error::NumericDegeneracy(format!(
                "coincident nodes {u} and {v} during energy evaluation"
            )));
        }
        attraction += potential(d, a_exp);
    }
    let mut repulsion = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = p.distance(i, j);
            if d == 0.0 {
                return Err(Error::NumericDegeneracy(format!(
                    "coincident nodes {i} and {j} during energy evaluation"
                )));
            }
            repulsion += potential(d, r_exp);
        }
    }
    Ok(params.k_attr * attraction - params.k_rep * repulsion)
}

/// Fruchterman-Reingold energy: `k_attr * sum_edges d^3 / 3 -
/// k_rep * sum_pairs ln d`. Its negative gradient is the FR force exactly.
pub fn fr_energy(p: &Positions, g: &Graph, params: &LayoutParams) -> Result<f64> {
    let fr = LayoutParams {
        algorithm: crate::layout::LayoutAlgorithm::FruchtermanReingold,
        ..params.clone()
    };
    ar_energy(p, g, &fr)
}

/// Kamada-Kawai spring energy over all node pairs:
/// `E = sum_{i<j} 1/2 * k * (d_ij - l_ij)^2`.
///
/// `ideal` is a row-major n x n matrix of ideal lengths; unreachable pairs
/// must already carry their finite substitute.
pub fn kk_energy(p: &Positions, ideal: &[f64], spring_k: f64) -> f64 {
    let n = p.node_count();
    debug_assert_eq!(ideal.len(), n * n);
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = p.distance(i, j);
            let diff = d - ideal[i * n + j];
            total += 0.5 * spring_k * diff * diff;
        }
    }
    total
}

/// Energy restricted to the springs touching node `m`; cheap objective for
/// the per-node line search inside the KK optimizer.
pub(crate) fn kk_node_energy(p: &Positions, ideal: &[f64], spring_k: f64, m: usize) -> f64 {
    let n = p.node_count();
    let mut total = 0.0;
    for j in 0..n {
        if j == m {
            continue;
        }
        let diff = p.distance(m, j) - ideal[m * n + j];
        total += 0.5 * spring_k * diff * diff;
    }
    total
}

/// Gradient of the KK energy with respect to node `m`'s position. Pairs at
/// exactly zero distance contribute nothing (the direction is undefined
/// there); the optimizer jitters such configurations before stepping.
pub(crate) fn kk_node_gradient(p: &Positions, ideal: &[f64], spring_k: f64, m: usize) -> Vec<f64> {
    let n = p.node_count();
    let dim = p.dim();
    let mut grad = vec![0.0; dim];
    let pm = p.row(m);
    for j in 0..n {
        if j == m {
            continue;
        }
        let d = p.distance(m, j);
        if d == 0.0 {
            continue;
        }
        let scale = spring_k * (d - ideal[m * n + j]) / d;
        let pj = p.row(j);
        for k in 0..dim {
            grad[k] += scale * (pm[k] - pj[k]);
        }
    }
    grad
}

/// `Delta_m`: Euclidean norm of the energy gradient at node `m` (Newton's
/// node-selection score, generalized to any dimension).
pub fn kk_delta(p: &Positions, ideal: &[f64], spring_k: f64, m: usize) -> f64 {
    kk_node_gradient(p, ideal, spring_k, m)
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// Hessian of the KK energy with respect to node `m`'s position:
/// `sum_j k * [(1 - l/d) I + (l / d^3) u u^T]` with `u = p_m - p_j`.
pub(crate) fn kk_node_hessian(
    p: &Positions,
    ideal: &[f64],
    spring_k: f64,
    m: usize,
) -> DMatrix<f64> {
    let n = p.node_count();
    let dim = p.dim();
    let mut h = DMatrix::zeros(dim, dim);
    let pm = p.row(m);
    for j in 0..n {
        if j == m {
            continue;
        }
        let d = p.distance(m, j);
        if d == 0.0 {
            continue;
        }
        let l = ideal[m * n + j];
        let diag = spring_k * (1.0 - l / d);
        let outer = spring_k * l / (d * d * d);
        let pj = p.row(j);
        for a in 0..dim {
            let ua = pm[a] - pj[a];
            h[(a, a)] += diag;
            for b in 0..dim {
                let ub = pm[b] - pj[b];
                h[(a, b)] += outer * ua * ub;
            }
        }
    }
    h
}

/// Newton direction for node `m`: solve `H delta = -g` when the Hessian is
/// positive definite, otherwise fall back to steepest descent.
pub(crate) fn kk_newton_direction(h: &DMatrix<f64>, grad: &[f64]) -> Vec<f64> {
    let g = DVector::from_column_slice(grad);
    if let Some(chol) = h.clone().cholesky() {
        let step = chol.solve(&(-&g));
        if step.iter().all(|v| v.is_finite()) {
            return step.iter().copied().collect();
        }
    }
    grad.iter().map(|v| -v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, Graph};
    use crate::layout::forces::ar_forces;
    use crate::layout::LayoutAlgorithm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_nodes_unit_distance() {
        let g = parse_edge_list("0 1\n", "p2").unwrap().graph;
        let p = Positions::from_rows(2, 2, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let e = fr_energy(&p, &g, &LayoutParams::default()).unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn edgeless_energy_decreases_when_scaled_up() {
        let g = Graph::new(3, Vec::<(u32, u32)>::new(), "e").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Positions::uniform(3, 2, 1.0, &mut rng);
        let scaled = Positions::from_rows(3, 2, p.as_slice().iter().map(|v| v * 2.0).collect())
            .unwrap();
        let params = LayoutParams::default();
        let e1 = fr_energy(&p, &g, &params).unwrap();
        let e2 = fr_energy(&scaled, &g, &params).unwrap();
        assert!(e2 < e1);
    }

    fn random_well_separated(
        n: usize,
        dim: usize,
        rng: &mut ChaCha8Rng,
    ) -> Positions {
        loop {
            let p = Positions::uniform(n, dim, 1.0, rng);
            let mut min_d = f64::INFINITY;
            for i in 0..n {
                for j in (i + 1)..n {
                    min_d = min_d.min(p.distance(i, j));
                }
            }
            if min_d > 0.15 {
                return p;
            }
        }
    }

    fn finite_difference_force(
        p: &Positions,
        g: &Graph,
        params: &LayoutParams,
        energy: impl Fn(&Positions) -> f64,
    ) -> Vec<f64> {
        let _ = (g, params);
        let n = p.node_count();
        let dim = p.dim();
        let h = 1e-6;
        let mut fd = vec![0.0; n * dim];
        let mut work = p.clone();
        for (i, slot) in fd.iter_mut().enumerate() {
            let orig = work.as_slice()[i];
            work.as_mut_slice()[i] = orig + h;
            let e_plus = energy(&work);
            work.as_mut_slice()[i] = orig - h;
            let e_minus = energy(&work);
            work.as_mut_slice()[i] = orig;
            *slot = -(e_plus - e_minus) / (2.0 * h);
        }
        fd
    }

    #[test]
    fn fr_force_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..20 {
            let n = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, edges, "rnd").unwrap();
            let p = random_well_separated(n, 2, &mut rng);
            let params = LayoutParams::default();
            let analytic = ar_forces(&p, &g, &params).unwrap();
            let fd = finite_difference_force(&p, &g, &params, |q| {
                fr_energy(q, &g, &params).unwrap()
            });
            let err: f64 = analytic
                .iter()
                .zip(&fd)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let scale: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-9);
            assert!(err / scale < 1e-4, "trial {trial}: rel err {}", err / scale);
        }
    }

    #[test]
    fn ar_force_matches_finite_differences_for_linlog() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = parse_edge_list("0 1\n1 2\n2 3\n3 0\n", "c4").unwrap().graph;
        let params = LayoutParams {
            algorithm: LayoutAlgorithm::ArModel,
            a_exp: 0.0,
            r_exp: -1.0,
            k_attr: 1.3,
            k_rep: 0.7,
            ..LayoutParams::default()
        };
        for _ in 0..10 {
            let p = random_well_separated(4, 2, &mut rng);
            let analytic = ar_forces(&p, &g, &params).unwrap();
            let fd = finite_difference_force(&p, &g, &params, |q| {
                ar_energy(q, &g, &params).unwrap()
            });
            for (a, b) in analytic.iter().zip(&fd) {
                assert!((a - b).abs() / b.abs().max(1e-6) < 1e-4);
            }
        }
    }

    #[test]
    fn kk_energy_zero_at_ideal() {
        let p = Positions::from_rows(2, 2, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let ideal = vec![0.0, 1.0, 1.0, 0.0];
        assert_eq!(kk_energy(&p, &ideal, 1.0), 0.0);
    }

    #[test]
    fn kk_energy_two_nodes_stretched() {
        let p = Positions::from_rows(2, 2, vec![0.0, 0.0, 2.0, 0.0]).unwrap();
        let ideal = vec![0.0, 1.0, 1.0, 0.0];
        assert!((kk_energy(&p, &ideal, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kk_energy_scales_quadratically() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = Positions::uniform(4, 2, 1.0, &mut rng);
        let ideal: Vec<f64> = (0..16)
            .map(|i| if i % 5 == 0 { 0.0 } else { 1.0 + (i % 3) as f64 })
            .collect();
        // Symmetrize.
        let mut sym = ideal.clone();
        for i in 0..4 {
            for j in 0..4 {
                sym[i * 4 + j] = ideal[(i.min(j)) * 4 + i.max(j)];
            }
        }
        let doubled_ideal: Vec<f64> = sym.iter().map(|v| 2.0 * v).collect();
        let doubled_p =
            Positions::from_rows(4, 2, p.as_slice().iter().map(|v| 2.0 * v).collect()).unwrap();
        let e1 = kk_energy(&p, &sym, 1.0);
        let e2 = kk_energy(&doubled_p, &doubled_ideal, 1.0);
        assert!((e2 - 4.0 * e1).abs() < 1e-12 * e1.abs().max(1.0));
    }

    #[test]
    fn kk_delta_two_nodes_stretched() {
        let p = Positions::from_rows(2, 2, vec![0.0, 0.0, 2.0, 0.0]).unwrap();
        let ideal = vec![0.0, 1.0, 1.0, 0.0];
        assert!((kk_delta(&p, &ideal, 1.0, 0) - 1.0).abs() < 1e-12);
        assert!((kk_delta(&p, &ideal, 1.0, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kk_delta_zero_at_minimum() {
        // Unit equilateral triangle realizes ideal distances exactly.
        let h = 3.0_f64.sqrt() / 2.0;
        let p = Positions::from_rows(3, 2, vec![0.0, 0.0, 1.0, 0.0, 0.5, h]).unwrap();
        let ideal = vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0];
        for m in 0..3 {
            assert!(kk_delta(&p, &ideal, 1.0, m) < 1e-12);
        }
    }

    #[test]
    fn kk_delta_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = rng.gen_range(3..=8);
            let p = random_well_separated(n, 2, &mut rng);
            let mut ideal = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let l = rng.gen_range(0.5..2.5);
                    ideal[i * n + j] = l;
                    ideal[j * n + i] = l;
                }
            }
            let spring_k = rng.gen_range(0.5..2.0);
            for m in 0..n {
                let analytic = kk_delta(&p, &ideal, spring_k, m);
                let h = 1e-6;
                let mut fd_sq = 0.0;
                let mut work = p.clone();
                for k in 0..2 {
                    let idx = m * 2 + k;
                    let orig = work.as_slice()[idx];
                    work.as_mut_slice()[idx] = orig + h;
                    let e_plus = kk_energy(&work, &ideal, spring_k);
                    work.as_mut_slice()[idx] = orig - h;
                    let e_minus = kk_energy(&work, &ideal, spring_k);
                    work.as_mut_slice()[idx] = orig;
                    let g = (e_plus - e_minus) / (2.0 * h);
                    fd_sq += g * g;
                }
                let fd = fd_sq.sqrt();
                assert!(
                    (analytic - fd).abs() / fd.max(1e-9) < 1e-4,
                    "node {m}: analytic {analytic}, fd {fd}"
                );
            }
        }
    }

    #[test]
    fn energies_invariant_under_rigid_motion() {
        let g = parse_edge_list("0 1\n1 2\n0 2\n", "t").unwrap().graph;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = Positions::uniform(3, 2, 1.0, &mut rng);
        let ideal = vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0];
        let params = LayoutParams::default();
        let theta: f64 = 0.83;
        let (s, c) = theta.sin_cos();
        let moved: Vec<f64> = (0..3)
            .flat_map(|i| {
                let r = p.row(i);
                vec![c * r[0] - s * r[1] + 5.0, s * r[0] + c * r[1] - 2.0]
            })
            .collect();
        let q = Positions::from_rows(3, 2, moved).unwrap();
        let e0 = fr_energy(&p, &g, &params).unwrap();
        let e1 = fr_energy(&q, &g, &params).unwrap();
        assert!((e0 - e1).abs() <= 1e-9 * e0.abs().max(1.0));
        let k0 = kk_energy(&p, &ideal, 1.0);
        let k1 = kk_energy(&q, &ideal, 1.0);
        assert!((k0 - k1).abs() <= 1e-9 * k0.abs().max(1.0));
    }
}
