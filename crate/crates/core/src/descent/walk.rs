use serde::Serialize;
use serde_json::{json, Value};

use super::roots::RootBasis;
use crate::error::{Error, Result};
use crate::json::matrix_to_json;
use crate::liealg::{Algebra, AlgebraElement};
use crate::numkernel::{identity, mat_exp, DenseMatrix};

#[derive(Debug, Clone, Serialize)]
pub struct DescentStep {
    pub root: usize,
    /// Parameter `t` of the rotation `exp(t·v_a)`.
    pub angle: f64,
    pub axis: String,
    pub before: f64,
    pub after: f64,
    /// Squared `ĥ_a`-coordinate removed by the step.
    pub h_component_sq: f64,
}

impl DescentStep {
    pub fn decrement_residual(&self) -> f64 {
        (self.before * self.before - self.after * self.after - self.h_component_sq).abs()
    }
}

#[derive(Debug, Clone)]
pub struct DescentTrace {
    pub steps: Vec<DescentStep>,
    /// Accumulated conjugator, `x_final = g x g⁻¹`.
    pub g: DenseMatrix,
    pub iterations: usize,
    pub initial_cartan_norm: f64,
}

impl DescentTrace {
    pub fn final_cartan_norm(&self) -> f64 {
        self.steps.last().map_or(self.initial_cartan_norm, |s| s.after)
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.steps.iter().all(|s| s.after < s.before)
    }

    pub fn max_decrement_residual(&self) -> f64 {
        self.steps
            .iter()
            .map(DescentStep::decrement_residual)
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "iterations": self.iterations,
            "initial_cartan_norm": self.initial_cartan_norm,
            "final_cartan_norm": self.final_cartan_norm(),
            "steps": self.steps,
            "g": matrix_to_json(&self.g),
        })
    }
}

/// One SU(2) rotation in `S_a = span(ĥ_a, u_a, v_a)` removing the
/// `ĥ_a`-coordinate of `x`. Returns `g`, `g x g⁻¹` and the removed coordinate.
pub fn su2_reduce_step(
    alg: &Algebra,
    roots: &RootBasis,
    x: &AlgebraElement,
    a: usize,
) -> Result<(DenseMatrix, AlgebraElement, f64, f64)> {
    let root = roots
        .roots
        .get(a)
        .ok_or_else(|| Error::Parameter(format!("root index {a} out of range")))?;
    let xc = alg.coords(x)?;
    let beta = xc.dot(&root.h_hat_coords);
    let gamma = xc.dot(&root.u_coords);
    if beta == 0.0 {
        return Ok((identity(alg.matrix_size()), x.clone(), 0.0, 0.0));
    }
    // ad(v)ĥ = κu and ad(v)u = −κĥ, so the ĥ-coordinate of exp(t ad v)x
    // is β cos κt − γ sin κt
    let phase = if gamma == 0.0 {
        beta.signum() * std::f64::consts::FRAC_PI_2
    } else {
        (beta / gamma).atan()
    };
    let t = phase / root.kappa;
    let g = mat_exp(&root.v.matrix().map(|z| z * t))?;
    let moved = alg.conjugate(&g, x)?;
    Ok((g, moved, t, beta))
}

/// Greedy descent into `C⊥` until `‖proj_C x‖ ≤ target`.
pub fn descend_to_complement_with(
    alg: &Algebra,
    roots: &RootBasis,
    x: &AlgebraElement,
    target: f64,
) -> Result<(DenseMatrix, AlgebraElement, DescentTrace)> {
    let max_iter = alg.tolerances().max_iter;
    let mut g = identity(alg.matrix_size());
    let mut cur = x.clone();
    let mut c_norm = roots.cartan_component(&alg.coords(x)?).norm();
    let mut trace = DescentTrace {
        steps: Vec::new(),
        g: g.clone(),
        iterations: 0,
        initial_cartan_norm: c_norm,
    };
    while c_norm > target {
        if trace.iterations >= max_iter {
            trace.g = g;
            return Err(Error::NonConvergence { trace: Box::new(trace) });
        }
        let xc = alg.coords(&cur)?;
        let (a, _) = roots
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, xc.dot(&r.h_hat_coords).abs()))
            .max_by(|p, q| p.1.total_cmp(&q.1))
            .ok_or_else(|| Error::Decomposition("no roots to rotate with".into()))?;
        let (step_g, next, t, beta) = su2_reduce_step(alg, roots, &cur, a)?;
        let after = roots.cartan_component(&alg.coords(&next)?).norm();
        trace.steps.push(DescentStep {
            root: a,
            angle: t,
            axis: format!("v[{a}]"),
            before: c_norm,
            after,
            h_component_sq: beta * beta,
        });
        trace.iterations += 1;
        g = step_g * g;
        cur = next;
        c_norm = after;
    }
    trace.g = g.clone();
    Ok((g, cur, trace))
}

/// [`descend_to_complement_with`] at the default target `tol_residual · max(1, ‖x‖)`.
pub fn descend_to_complement(
    alg: &Algebra,
    roots: &RootBasis,
    x: &AlgebraElement,
) -> Result<(DenseMatrix, AlgebraElement, DescentTrace)> {
    let target = alg.tolerances().tol_residual * alg.norm(x).max(1.0);
    descend_to_complement_with(alg, roots, x, target)
}
