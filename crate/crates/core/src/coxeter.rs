//! Coxeter-element lifts in su(m) and the bracket-image statements built on
//! them: `C ⊆ [N, L]`, and a regular `a` with `[N, L] ⊆ [a, L]`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::CartanSub;
use crate::error::{Error, Result};
use crate::json::matrix_to_json;
use crate::liealg::{Algebra, AlgebraDescriptor, AlgebraElement, Family};
use crate::numkernel::{frobenius, lstsq_min_norm, mat_exp, DenseMatrix, RealMatrix, RealVector, Subspace, ONE, ZERO};

/// Residual norms and verdicts of one check.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueReport {
    pub operation: String,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
}

impl ResidueReport {
    pub fn new(operation: &str) -> Self {
        Self {
            operation: operation.to_string(),
            residuals: BTreeMap::new(),
            verdicts: BTreeMap::new(),
        }
    }

    pub fn residual(&mut self, name: &str, value: f64) -> &mut Self {
        self.residuals.insert(name.to_string(), value.max(0.0));
        self
    }

    pub fn verdict(&mut self, name: &str, ok: bool) -> &mut Self {
        self.verdicts.insert(name.to_string(), ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }
}

#[derive(Debug, Clone)]
pub struct CoxeterLift {
    pub parent: AlgebraDescriptor,
    /// Element of the torus normalizer whose class is a Coxeter element.
    pub n_mat: DenseMatrix,
    pub g_mat: DenseMatrix,
    pub d: DenseMatrix,
    pub lambda: AlgebraElement,
    pub big_n: AlgebraElement,
    /// Whether Λ had to be permuted to satisfy `exp(Λ) = D` entrywise.
    pub lambda_reordered: bool,
}

impl CoxeterLift {
    pub fn m(&self) -> usize {
        self.parent.n
    }

    /// `n = g D g⁻¹`, `exp Λ = D`, `exp N = n`, `N = g Λ g⁻¹` and `N ∈ su(m)`.
    pub fn residuals(&self) -> Result<ResidueReport> {
        let tol = 1e-9;
        let g = &self.g_mat;
        let mut r = ResidueReport::new("coxeter_lift");
        let gdg = frobenius(&(&self.n_mat - g * &self.d * g.adjoint()));
        let exp_lambda = frobenius(&(mat_exp(self.lambda.matrix())? - &self.d));
        let exp_n = frobenius(&(mat_exp(self.big_n.matrix())? - &self.n_mat));
        let n_def = frobenius(&(self.big_n.matrix() - g * self.lambda.matrix() * g.adjoint()));
        let member = self.parent.membership_residual(self.big_n.matrix());
        r.residual("n_eq_gDg_inv", gdg)
            .residual("exp_lambda_eq_d", exp_lambda)
            .residual("exp_n_eq_n", exp_n)
            .residual("n_eq_g_lambda_g_inv", n_def)
            .residual("n_in_su", member)
            .verdict("n_eq_gDg_inv", gdg < tol)
            .verdict("exp_lambda_eq_d", exp_lambda < tol)
            .verdict("exp_n_eq_n", exp_n < tol)
            .verdict("n_eq_g_lambda_g_inv", n_def < tol)
            .verdict("n_in_su", member < tol);
        Ok(r)
    }

    pub fn to_json(&self) -> Result<Value> {
        Ok(json!({
            "m": self.m(),
            "n_mat": matrix_to_json(&self.n_mat),
            "g": matrix_to_json(&self.g_mat),
            "D": matrix_to_json(&self.d),
            "Lambda": matrix_to_json(self.lambda.matrix()),
            "N": matrix_to_json(self.big_n.matrix()),
            "lambda_reordered": self.lambda_reordered,
            "residuals": self.residuals()?,
        }))
    }
}

fn diag(entries: &[Complex64]) -> DenseMatrix {
    DenseMatrix::from_diagonal(&DVector::from_row_slice(entries))
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Explicit lift for odd and even `m`, with Λ listed in the printed order.
pub fn coxeter_lift_su(alg: &Algebra) -> Result<CoxeterLift> {
    let desc = alg.descriptor();
    if desc.family != Family::Su {
        return Err(Error::Parameter(format!("Coxeter lifts are built for su(m), got {desc}")));
    }
    let m = desc.n;
    if m < 2 {
        return Err(Error::Parameter(format!("m = {m} < 2")));
    }
    let k = m / 2;
    let s = 1.0 / (m as f64).sqrt();
    let mut n_mat = DenseMatrix::zeros(m, m);
    for i in 1..m {
        n_mat[(i, i - 1)] = ONE;
    }
    let (g, d, lam): (DenseMatrix, Vec<Complex64>, Vec<Complex64>) = if m % 2 == 1 {
        n_mat[(0, m - 1)] = ONE;
        let c = 2.0 * PI / m as f64;
        let g = DenseMatrix::from_fn(m, m, |a, b| cis(c * (a * b % m) as f64) * s);
        let d = (0..m).map(|j| cis(-c * j as f64)).collect();
        let mut lam = vec![ZERO];
        lam.extend((1..=k).map(|j| Complex64::new(0.0, -(j as f64) * c)));
        lam.extend((1..=k).rev().map(|j| Complex64::new(0.0, j as f64 * c)));
        (g, d, lam)
    } else {
        n_mat[(0, m - 1)] = -ONE;
        let dk = PI / m as f64;
        let g = DenseMatrix::from_fn(m, m, |a, b| cis(dk * (a * (2 * b + 1) % (2 * m)) as f64) * s);
        let d = (0..m).map(|j| cis(-((2 * j + 1) as f64) * dk)).collect();
        let mut lam: Vec<Complex64> = (0..k)
            .map(|j| Complex64::new(0.0, -((2 * j + 1) as f64) * dk))
            .collect();
        lam.extend((0..k).rev().map(|j| Complex64::new(0.0, (2 * j + 1) as f64 * dk)));
        (g, d, lam)
    };
    let (lam, lambda_reordered) = match_logarithms(&lam, &d)?;
    let d = diag(&d);
    let lambda = alg.element(diag(&lam))?;
    let big_n = alg.element(&g * lambda.matrix() * g.adjoint())?;
    Ok(CoxeterLift {
        parent: desc,
        n_mat,
        g_mat: g,
        d,
        lambda,
        big_n,
        lambda_reordered,
    })
}

/// Permutes `lam` so that `exp(lam_j) = d_j`; reports whether a change was needed.
fn match_logarithms(lam: &[Complex64], d: &[Complex64]) -> Result<(Vec<Complex64>, bool)> {
    let close = |l: &Complex64, z: &Complex64| (l.exp() - z).norm() < 1e-12;
    if lam.iter().zip(d).all(|(l, z)| close(l, z)) {
        return Ok((lam.to_vec(), false));
    }
    let mut pool: Vec<Option<Complex64>> = lam.iter().copied().map(Some).collect();
    let mut out = Vec::with_capacity(d.len());
    for z in d {
        let slot = pool
            .iter_mut()
            .find(|l| l.is_some_and(|l| close(&l, z)))
            .ok_or_else(|| Error::Structure("no logarithm of D matches".into()))?;
        out.push(slot.take().expect("matched slot"));
    }
    Ok((out, true))
}

/// `Ad(n)` restricted to `C`, in the orthonormal basis of `C`, together with
/// the invariance residual `‖(I − P_C) Ad(n) B_C‖`.
pub fn restricted_action(alg: &Algebra, n_mat: &DenseMatrix, c: &CartanSub) -> (RealMatrix, f64) {
    let ad = alg.adjoint_action_matrix(n_mat);
    let b = c.space.basis();
    let moved = &ad * b;
    let inside = b.transpose() * &moved;
    let leak = (&moved - b * &inside).norm();
    (inside, leak)
}

/// `|det(Ad(n)|_C − I)|` and `min |λ − 1|` over the spectrum of `Ad(n)|_C`.
pub fn coxeter_fixed_point_check(alg: &Algebra, lift: &CoxeterLift, c: &CartanSub) -> Result<ResidueReport> {
    if c.parent != alg.descriptor() || lift.parent != alg.descriptor() {
        return Err(Error::ParentMismatch {
            left: alg.descriptor().to_string(),
            right: c.parent.to_string(),
        });
    }
    let tol = alg.tolerances().tol_residual;
    let (a, leak) = restricted_action(alg, &lift.n_mat, c);
    if leak > tol {
        return Err(Error::Normalizer { residual: leak });
    }
    let k = a.nrows();
    let det = (&a - RealMatrix::identity(k, k)).determinant().abs();
    let gap = a
        .complex_eigenvalues()
        .iter()
        .map(|z| (z - Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    let mut r = ResidueReport::new("coxeter_fixed_point_check");
    r.residual("invariance", leak)
        .residual("abs_det", det)
        .residual("min_eigen_gap", gap)
        .verdict("no_fixed_points", det > tol);
    Ok(r)
}

/// Solutions `y(x)` of `[N, y] = x` for every basis element `x` of `C`.
#[derive(Debug, Clone)]
pub struct BracketImage {
    pub report: ResidueReport,
    pub witnesses: Vec<AlgebraElement>,
}

pub fn cartan_in_bracket_image(alg: &Algebra, c: &CartanSub, big_n: &AlgebraElement) -> Result<BracketImage> {
    let tol = alg.tolerances();
    let ad = alg.ad_matrix(big_n)?;
    let mut worst = 0.0_f64;
    let mut witnesses = Vec::new();
    for x in c.space.vectors() {
        let sol = lstsq_min_norm(&ad, &x, tol.tol_zero);
        worst = worst.max(sol.residual);
        witnesses.push(alg.from_coords(&sol.x));
    }
    let mut report = ResidueReport::new("cartan_in_bracket_image");
    report
        .residual("max_residual", worst)
        .verdict("contained", worst < tol.tol_residual);
    Ok(BracketImage { report, witnesses })
}

/// `‖(I − P_b) P_a‖₂`, zero iff `a ⊆ b`.
pub fn containment(a: &Subspace, b: &Subspace) -> Result<f64> {
    a.containment_residual(b)
}

/// Regular `a ∈ Z(N)`, so `Z(a) ⊆ Z(N)` and `[N, L] ⊆ [a, L]`.
pub fn strengthen_to_regular(alg: &Algebra, big_n: &AlgebraElement, seed: u64) -> Result<AlgebraElement> {
    let tol = alg.tolerances();
    let z = alg.centralizer(big_n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tol.max_iter {
        let a = alg.random_in_subspace(&z, &mut rng);
        if alg.is_regular(&a)? {
            return Ok(a);
        }
    }
    Err(Error::SearchFailure {
        what: "regular element in the centralizer".into(),
        iterations: tol.max_iter,
    })
}

/// Post-conditions of [`strengthen_to_regular`] plus `C ⊆ [a, L]`.
pub fn regular_strengthening_report(
    alg: &Algebra,
    big_n: &AlgebraElement,
    a: &AlgebraElement,
    c: &CartanSub,
) -> Result<ResidueReport> {
    let tol = alg.tolerances().tol_residual;
    let za = alg.centralizer(a)?;
    let zn = alg.centralizer(big_n)?;
    let img_a = alg.ad_image(a)?;
    let img_n = alg.ad_image(big_n)?;
    let z_res = containment(&za, &zn)?;
    let img_res = containment(&img_n, &img_a)?;
    let c_res = containment(&c.space, &img_a)?;
    let regular = alg.is_regular(a)?;
    let mut r = ResidueReport::new("strengthen_to_regular");
    r.residual("centralizer_containment", z_res)
        .residual("image_containment", img_res)
        .residual("cartan_in_image", c_res)
        .verdict("regular", regular)
        .verdict("centralizer_containment", z_res < tol)
        .verdict("image_containment", img_res < tol)
        .verdict("cartan_in_image", c_res < tol);
    Ok(r)
}

/// Minimal-norm `b` with `[a, b] = x`.
pub fn solve_bracket(alg: &Algebra, a: &AlgebraElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    let tol = alg.tolerances();
    let ad = alg.ad_matrix(a)?;
    let rhs: RealVector = alg.coords(x)?;
    let sol = lstsq_min_norm(&ad, &rhs, tol.tol_zero);
    let b = alg.from_coords(&sol.x);
    let residual = alg.norm(&alg.bracket(a, &b)?.sub(x)?);
    if residual > tol.tol_residual * alg.norm(x).max(1.0) {
        return Err(Error::Infeasible { residual });
    }
    Ok(b)
}
