//! Two-sample Kolmogorov-Smirnov test.

/// Two-sample KS statistic and asymptotic p-value.
///
/// The statistic is the supremum distance between the two empirical CDFs;
/// the p-value uses the Kolmogorov asymptotic survival function with the
/// small-sample correction `lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D`,
/// `ne = n1*n2/(n1+n2)`. Identical samples return exactly `(0, 1)`.
///
/// # Panics
/// Panics if either sample set is empty.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs non-empty samples");
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);

    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        let diff = (i as f64 / na - j as f64 / nb).abs();
        d = d.max(diff);
    }

    if d == 0.0 {
        return (0.0, 1.0);
    }
    let ne = na * nb / (na + nb);
    let sqrt_ne = ne.sqrt();
    let lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    (d, kolmogorov_survival(lambda))
}

/// Kolmogorov survival function `Q(lambda) = 2 sum_j (-1)^(j-1)
/// exp(-2 j^2 lambda^2)`, clamped to `[0, 1]`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut previous_term = f64::INFINITY;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        sum += sign * term;
        if term <= 1e-12 * sum.abs() || term >= previous_term {
            return (2.0 * sum).clamp(0.0, 1.0);
        }
        previous_term = term;
        sign = -sign;
    }
    // The series converges too slowly only for tiny lambda, where Q ~ 1.
    1.0
}
