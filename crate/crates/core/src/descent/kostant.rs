use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::cartan::standard_cartan;
use crate::error::{Error, Result};
use crate::liealg::{Algebra, AlgebraElement, Family};
use crate::numkernel::{hull_distance, DenseMatrix, RealVector};

#[derive(Debug, Clone, Serialize)]
pub struct KostantReport {
    pub samples: usize,
    pub orbit_size: usize,
    pub max_distance: f64,
    pub zero_distance: f64,
    pub all_in_hull: bool,
    pub zero_in_hull: bool,
}

/// Haar-distributed element of SU(n): QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`, then det normalised.
pub fn haar_special_unitary(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let z = DenseMatrix::from_fn(n, n, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let fix = (det.conj() / det.norm()).powf(1.0 / n as f64);
    q * fix
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Projections of `u x u⁻¹` onto the diagonal Cartan lie in the convex hull
/// of the Weyl orbit (coordinate permutations), which also contains `0`.
pub fn kostant_projection_check(
    alg: &Algebra,
    x: &AlgebraElement,
    samples: usize,
    seed: u64,
) -> Result<KostantReport> {
    let d = alg.descriptor();
    if d.family != Family::Su || d.n > 5 {
        return Err(Error::Parameter(format!(
            "convexity check runs on su(n), n <= 5; got {d}"
        )));
    }
    let tol = alg.tolerances();
    let c = standard_cartan(alg)?;
    let xc = alg.coords(x)?;
    if (&xc - c.space.project(&xc)).norm() > tol.tol_residual * xc.norm().max(1.0) {
        return Err(Error::Parameter("element is not in the diagonal Cartan".into()));
    }
    let n = d.n;
    let to_cartan = |m: &DenseMatrix| -> RealVector {
        let diag = DenseMatrix::from_diagonal(&DVector::from_fn(n, |i, _| m[(i, i)]));
        c.space.coordinates(&alg.coords_of_matrix(&diag))
    };
    let orbit: Vec<RealVector> = permutations(n)
        .iter()
        .map(|p| {
            let m = DenseMatrix::from_fn(n, n, |i, j| if i == j { x.matrix()[(p[i], p[i])] } else { Complex64::new(0.0, 0.0) });
            to_cartan(&m)
        })
        .collect();
    let zero_distance = hull_distance(&orbit, &RealVector::zeros(c.dim()), tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_distance = 0.0_f64;
    for _ in 0..samples {
        let u = haar_special_unitary(n, &mut rng);
        let moved = &u * x.matrix() * u.adjoint();
        max_distance = max_distance.max(hull_distance(&orbit, &to_cartan(&moved), tol)?);
    }
    let bound = 1e-7;
    Ok(KostantReport {
        samples,
        orbit_size: orbit.len(),
        max_distance,
        zero_distance,
        all_in_hull: max_distance < bound,
        zero_in_hull: zero_distance < bound,
    })
}
