//! Nearest point of a polytope given by its vertices (Wolfe's algorithm).

use super::{lstsq_min_norm, RealMatrix, RealVector, Tolerances};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct HullPoint {
    /// Nearest point of the hull to the query.
    pub point: RealVector,
    /// Convex weights on the input points (sparse support).
    pub weights: Vec<(usize, f64)>,
    pub distance: f64,
    pub iterations: usize,
}

/// Euclidean distance from `q` to `conv(points)`.
pub fn hull_distance(points: &[RealVector], q: &RealVector, tol: &Tolerances) -> Result<f64> {
    Ok(nearest_point_in_hull(points, q, tol)?.distance)
}

pub fn nearest_point_in_hull(
    points: &[RealVector],
    q: &RealVector,
    tol: &Tolerances,
) -> Result<HullPoint> {
    let first = points
        .first()
        .ok_or_else(|| Error::Parameter("hull of an empty point set".into()))?;
    let d = first.len();
    if q.len() != d || points.iter().any(|p| p.len() != d) {
        return Err(Error::Dimension("points and query differ in dimension".into()));
    }

    let shifted: Vec<RealVector> = points.iter().map(|p| p - q).collect();
    let scale = shifted.iter().map(|p| p.norm_squared()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Ok(HullPoint {
            point: q.clone(),
            weights: vec![(0, 1.0)],
            distance: 0.0,
            iterations: 0,
        });
    }
    let stop = 1e-30 * scale;
    let gap_tol = 1e-13 * scale;
    let weight_eps = 1e-14;

    let start = (0..shifted.len())
        .min_by(|&a, &b| shifted[a].norm_squared().total_cmp(&shifted[b].norm_squared()))
        .unwrap();
    let mut support = vec![start];
    let mut lambda = vec![1.0];
    let mut x = shifted[start].clone();
    let mut iterations = 0;

    while iterations < tol.max_iter {
        iterations += 1;
        let xx = x.norm_squared();
        if xx <= stop {
            break;
        }
        let (j, best) = shifted
            .iter()
            .enumerate()
            .map(|(i, p)| (i, x.dot(p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - best <= gap_tol || support.contains(&j) {
            break;
        }
        support.push(j);
        lambda.push(0.0);

        loop {
            let mu = affine_minimizer(&shifted, &support);
            if mu.iter().all(|&m| m > weight_eps) {
                lambda = mu;
                break;
            }
            // Move from lambda towards mu until the first weight hits zero.
            let mut theta = 1.0_f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= weight_eps {
                    let denom = l - m;
                    if denom > 0.0 {
                        theta = theta.min(l / denom);
                    }
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            let mut k = 0;
            let before = support.len();
            while k < support.len() {
                if lambda[k] <= weight_eps {
                    support.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            if support.len() == before {
                // roundoff kept every weight positive: drop the smallest one
                let (kmin, _) = lambda
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .unwrap();
                support.remove(kmin);
                lambda.remove(kmin);
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            if support.len() == 1 {
                break;
            }
        }
        x = combine(&shifted, &support, &lambda);
    }

    let point = &x + q;
    Ok(HullPoint {
        distance: x.norm(),
        point,
        weights: support.into_iter().zip(lambda).collect(),
        iterations,
    })
}

fn combine(points: &[RealVector], support: &[usize], weights: &[f64]) -> RealVector {
    let mut x = RealVector::zeros(points[0].len());
    for (&i, &w) in support.iter().zip(weights) {
        x.axpy(w, &points[i], 1.0);
    }
    x
}

/// Weights summing to one that minimise `‖Σ μ_i p_i‖` over the affine hull.
///
/// Parametrised as `p_0 + Σ t_i (p_i − p_0)` and solved as a least-squares
/// problem in `t`, which stays well conditioned near the optimum.
fn affine_minimizer(points: &[RealVector], support: &[usize]) -> Vec<f64> {
    let k = support.len();
    let p0 = &points[support[0]];
    let d = p0.len();
    let mut dirs = RealMatrix::zeros(d, k - 1);
    for (c, &i) in support.iter().skip(1).enumerate() {
        dirs.set_column(c, &(&points[i] - p0));
    }
    let t = lstsq_min_norm(&dirs, &(-p0), 1e-13).x;
    let mut mu = Vec::with_capacity(k);
    mu.push(1.0 - t.sum());
    mu.extend(t.iter().copied());
    mu
}
