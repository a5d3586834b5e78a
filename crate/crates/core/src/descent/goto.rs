use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::roots::{root_space_decomposition, RootBasis};
use super::walk::{descend_to_complement_with, DescentTrace};
use crate::cartan::{orthogonal_cartan, regular_element, standard_cartan, CartanSub, Provenance};
use crate::coxeter::{coxeter_lift_su, solve_bracket, strengthen_to_regular, ResidueReport};
use crate::error::{Error, Result};
use crate::json::matrix_to_json;
use crate::liealg::{Algebra, AlgebraElement, Family};
use crate::numkernel::{eig_skew, DenseMatrix, SkewKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Descent,
    Coxeter,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Descent => "descent",
            Strategy::Coxeter => "coxeter",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "descent" => Ok(Strategy::Descent),
            "coxeter" => Ok(Strategy::Coxeter),
            other => Err(Error::Parameter(format!("unknown strategy '{other}'"))),
        }
    }
}

/// `x = [a, b]` with `a` regular.
#[derive(Debug, Clone)]
pub struct GotoWitness {
    pub a: AlgebraElement,
    pub b: AlgebraElement,
    pub residual: f64,
    pub a_regular: bool,
    pub strategy: Strategy,
    /// Present for the descent strategy.
    pub trace: Option<DescentTrace>,
}

impl GotoWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "a": matrix_to_json(self.a.matrix()),
            "b": matrix_to_json(self.b.matrix()),
            "residual": self.residual,
            "a_regular": self.a_regular,
            "strategy": self.strategy,
            "descent_iterations": self.trace.as_ref().map(|t| t.iterations),
        })
    }
}

/// Per-algebra state for repeated factorizations: the Cartan, its roots and
/// a fixed regular `a` with the target set inside `[a, L]`.
#[derive(Debug, Clone)]
pub struct GotoSolver {
    pub strategy: Strategy,
    pub cartan: CartanSub,
    pub roots: Option<RootBasis>,
    pub a: AlgebraElement,
}

impl GotoSolver {
    pub fn new(alg: &Algebra, strategy: Strategy, seed: u64) -> Result<Self> {
        let cartan = standard_cartan(alg)?;
        match strategy {
            Strategy::Descent => {
                let roots = root_space_decomposition(alg, &cartan)?;
                let a = regular_element(alg, &cartan, seed)?;
                Ok(Self {
                    strategy,
                    cartan,
                    roots: Some(roots),
                    a,
                })
            }
            Strategy::Coxeter => {
                if alg.descriptor().family != Family::Su {
                    return Err(Error::Parameter(format!(
                        "the coxeter strategy needs su(n), got {}",
                        alg.descriptor()
                    )));
                }
                let lift = coxeter_lift_su(alg)?;
                let a = strengthen_to_regular(alg, &lift.big_n, seed)?;
                Ok(Self {
                    strategy,
                    cartan,
                    roots: None,
                    a,
                })
            }
        }
    }

    pub fn factorize(&self, alg: &Algebra, x: &AlgebraElement) -> Result<GotoWitness> {
        let scale = alg.norm(x).max(1.0);
        let (g, moved, trace) = match &self.roots {
            Some(roots) => {
                // land well inside the solve tolerance
                let target = 1e-2 * alg.tolerances().tol_residual * scale;
                let (g, moved, trace) = descend_to_complement_with(alg, roots, x, target)?;
                (g, moved, Some(trace))
            }
            None => {
                let g = diagonalizer(alg, x)?;
                let moved = alg.conjugate(&g, x)?;
                (g, moved, None)
            }
        };
        let b_moved = solve_bracket(alg, &self.a, &moved)?;
        let gi = g.adjoint();
        let a = alg.conjugate(&gi, &self.a)?;
        let b = alg.conjugate(&gi, &b_moved)?;
        let residual = alg.norm(&alg.bracket(&a, &b)?.sub(x)?);
        let a_regular = alg.is_regular(&a)?;
        if residual > alg.tolerances().tol_residual * scale {
            return Err(Error::Infeasible { residual });
        }
        Ok(GotoWitness {
            a,
            b,
            residual,
            a_regular,
            strategy: self.strategy,
            trace,
        })
    }
}

/// Special unitary `g` with `g x g⁻¹` diagonal, for `x ∈ su(n)`.
fn diagonalizer(alg: &Algebra, x: &AlgebraElement) -> Result<DenseMatrix> {
    let e = eig_skew(x.matrix(), SkewKind::SkewHermitian, alg.tolerances().tol_residual)?;
    let mut v = e.eigenvectors;
    let det = v.determinant();
    let phase = det.conj() / det.norm();
    for r in 0..v.nrows() {
        v[(r, 0)] *= phase;
    }
    Ok(v.adjoint())
}

pub fn goto_factorize(alg: &Algebra, x: &AlgebraElement, strategy: Strategy, seed: u64) -> Result<GotoWitness> {
    GotoSolver::new(alg, strategy, seed)?.factorize(alg, x)
}

/// `x ⊥ Z(a)` for a witness `x = [a, b]`, the easy half of the
/// "bracket with a regular element iff orthogonal to a Cartan" equivalence.
pub fn witness_orthogonality(alg: &Algebra, x: &AlgebraElement, w: &GotoWitness) -> Result<f64> {
    let z = alg.centralizer(&w.a)?;
    Ok(z.coordinates(&alg.coords(x)?).norm())
}

/// Regular `b ⊥ a` with `Z(a) ⊥ Z(b)`, so `[a, L] + [b, L] = L`.
pub fn one_and_half_span(alg: &Algebra, a: &AlgebraElement, seed: u64) -> Result<AlgebraElement> {
    if !alg.is_regular(a)? {
        return Err(Error::Parameter("element is not regular".into()));
    }
    let c = CartanSub::from_subspace(alg, alg.centralizer(a)?, Provenance::Custom);
    let partner = orthogonal_cartan(alg, &c)?;
    regular_element(alg, &partner, seed)
}

pub fn span_report(alg: &Algebra, a: &AlgebraElement, b: &AlgebraElement) -> Result<ResidueReport> {
    let tol = alg.tolerances().tol_residual;
    let inner = alg.inner(a, b)?.abs();
    let za = alg.centralizer(a)?;
    let zb = alg.centralizer(b)?;
    let cross = za.max_cross_inner(&zb)?;
    let sum = alg.ad_image(a)?.sum_dim(&alg.ad_image(b)?, alg.tolerances().tol_zero)?;
    let b_regular = alg.is_regular(b)?;
    let mut r = ResidueReport::new("one_and_half_span");
    r.residual("inner", inner)
        .residual("centralizer_cross_inner", cross)
        .residual("sum_dim_deficit", (alg.dim() - sum) as f64)
        .verdict("orthogonal", inner < tol)
        .verdict("centralizers_orthogonal", cross < tol)
        .verdict("spans", sum == alg.dim())
        .verdict("b_regular", b_regular);
    Ok(r)
}
