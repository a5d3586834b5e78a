use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::CartanSub;
use crate::error::{Error, Result};
use crate::liealg::{Algebra, AlgebraDescriptor, AlgebraElement};
use crate::numkernel::{eig_skew, from_real, RealMatrix, RealVector, SkewKind};

/// A positive root with its root-space frame.
#[derive(Debug, Clone)]
pub struct Root {
    /// `α(c_i)` on the orthonormal Cartan basis.
    pub alpha: RealVector,
    /// `α(h*)` for the generic element used in the construction.
    pub theta: f64,
    /// `[u, v] ∈ C`.
    pub h: AlgebraElement,
    pub u: AlgebraElement,
    pub v: AlgebraElement,
    /// `‖h_α‖`, the angular speed of `ad(v)` on the `(ĥ, u)` plane.
    pub kappa: f64,
    pub(crate) u_coords: RealVector,
    pub(crate) v_coords: RealVector,
    pub(crate) h_hat_coords: RealVector,
}

#[derive(Debug, Clone)]
pub struct RootBasis {
    pub parent: AlgebraDescriptor,
    pub cartan: CartanSub,
    pub generic: AlgebraElement,
    pub roots: Vec<Root>,
}

/// Worst residuals of the root-space relations.
#[derive(Debug, Clone, Serialize)]
pub struct RootRelations {
    /// `[h, u] = α(h) v` over the Cartan basis.
    pub h_u: f64,
    /// `[h, v] = −α(h) u`.
    pub h_v: f64,
    /// `[u, v]` lies in `C` and equals the dual of `α`.
    pub u_v: f64,
    /// `C` and all root-space frames are mutually orthonormal.
    pub orthogonality: f64,
    pub positive_roots: usize,
    pub expected_positive_roots: usize,
    pub min_alpha_of_h: f64,
}

impl RootRelations {
    pub fn max_residual(&self) -> f64 {
        self.h_u.max(self.h_v).max(self.u_v).max(self.orthogonality)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() < tol
            && self.positive_roots == self.expected_positive_roots
            && self.min_alpha_of_h > 0.0
    }
}

impl RootBasis {
    pub fn rank(&self) -> usize {
        self.cartan.dim()
    }

    /// Orthogonal projection onto `C`, in algebra coordinates.
    pub fn cartan_component(&self, coords: &RealVector) -> RealVector {
        self.cartan.space.project(coords)
    }

    pub fn relations(&self, alg: &Algebra) -> Result<RootRelations> {
        let cs = self.cartan.elements(alg);
        let ads = cs.iter().map(|c| alg.ad_matrix(c)).collect::<Result<Vec<_>>>()?;
        let (mut h_u, mut h_v, mut u_v) = (0.0_f64, 0.0_f64, 0.0_f64);
        let mut min_alpha = f64::INFINITY;
        for r in &self.roots {
            for (i, ad) in ads.iter().enumerate() {
                let a = r.alpha[i];
                h_u = h_u.max((ad * &r.u_coords - &r.v_coords * a).norm());
                h_v = h_v.max((ad * &r.v_coords + &r.u_coords * a).norm());
            }
            let h = alg.coords(&alg.bracket(&r.u, &r.v)?)?;
            let in_c = self.cartan.space.coordinates(&h);
            let outside = (&h - self.cartan.space.basis() * &in_c).norm();
            u_v = u_v.max(outside).max((&in_c - &r.alpha).norm());
            min_alpha = min_alpha.min(r.alpha.dot(&in_c));
        }
        let rank = self.rank();
        let mut frame = RealMatrix::zeros(alg.dim(), rank + 2 * self.roots.len());
        frame.columns_mut(0, rank).copy_from(self.cartan.space.basis());
        for (j, r) in self.roots.iter().enumerate() {
            frame.set_column(rank + 2 * j, &r.u_coords);
            frame.set_column(rank + 2 * j + 1, &r.v_coords);
        }
        let k = frame.ncols();
        let orthogonality = (frame.transpose() * &frame - RealMatrix::identity(k, k)).amax();
        Ok(RootRelations {
            h_u,
            h_v,
            u_v,
            orthogonality,
            positive_roots: self.roots.len(),
            expected_positive_roots: (alg.dim() - rank) / 2,
            min_alpha_of_h: if self.roots.is_empty() { 1.0 } else { min_alpha },
        })
    }
}

/// Relative spacing below which two root values count as clustered.
const CLUSTER_GAP: f64 = 1e-6;

/// `L = C ⊕ Σ L_α` from the real canonical form of `ad(h*)`, `h*` generic in `C`.
pub fn root_space_decomposition(alg: &Algebra, c: &CartanSub) -> Result<RootBasis> {
    if c.parent != alg.descriptor() {
        return Err(Error::ParentMismatch {
            left: alg.descriptor().to_string(),
            right: c.parent.to_string(),
        });
    }
    let rank = alg.rank();
    if c.dim() != rank {
        return Err(Error::Decomposition(format!(
            "subspace has dimension {} but the rank is {rank}",
            c.dim()
        )));
    }
    let tol = alg.tolerances();
    let mut rng = ChaCha8Rng::seed_from_u64(0x2007);
    let mut last = String::new();
    for attempt in 0..tol.max_iter.max(1) {
        let h = if attempt == 0 {
            let w = RealVector::from_fn(rank, |i, _| 1.0 / (i + 1) as f64);
            alg.from_coords(&(c.space.basis() * w))
        } else {
            alg.random_in_subspace(&c.space, &mut rng)
        };
        match decompose_at(alg, c, &h) {
            Ok(rb) => return Ok(rb),
            Err(e) => last = e.to_string(),
        }
        if attempt >= 64 {
            break;
        }
    }
    Err(Error::Decomposition(format!("no generic element found ({last})")))
}

fn decompose_at(alg: &Algebra, c: &CartanSub, h: &AlgebraElement) -> Result<RootBasis> {
    let tol = alg.tolerances();
    let rank = c.dim();
    let ad = alg.ad_matrix(h)?;
    let eig = eig_skew(&from_real(&ad), SkewKind::RealSkewSymmetric, tol.tol_residual)?;
    let schur = eig.schur.expect("real form requested");
    let theta = &schur.theta;
    let expected = (alg.dim() - rank) / 2;
    if schur.kernel_dim != rank || theta.len() != expected {
        return Err(Error::Decomposition("generic element is not regular".into()));
    }
    if let Some(&top) = theta.first() {
        let clustered = theta.windows(2).any(|w| w[0] - w[1] <= CLUSTER_GAP * top)
            || theta.last().is_some_and(|&t| t <= CLUSTER_GAP * top);
        if clustered {
            return Err(Error::Decomposition("root values cluster".into()));
        }
    }
    let kernel = schur.kernel();
    let ker_space = crate::numkernel::orthonormalize(
        &kernel.column_iter().map(|v| v.into_owned()).collect::<Vec<_>>(),
        alg.dim(),
        tol.tol_zero,
    )?;
    if ker_space.distance(&c.space)? > tol.tol_residual {
        return Err(Error::Decomposition("kernel of ad(h*) differs from C".into()));
    }

    let cs = c.elements(alg);
    let ads = cs.iter().map(|x| alg.ad_matrix(x)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::with_capacity(theta.len());
    for (j, &th) in theta.iter().enumerate() {
        let (p, _) = schur.plane(j);
        let u_coords = p.normalize();
        let v_coords = (&ad * &u_coords / th).normalize();
        let alpha = RealVector::from_iterator(rank, ads.iter().map(|a| (a * &u_coords).dot(&v_coords)));
        let u = alg.from_coords(&u_coords);
        let v = alg.from_coords(&v_coords);
        let h_el = alg.bracket(&u, &v)?;
        let h_coords = alg.coords(&h_el)?;
        let kappa = h_coords.norm();
        if kappa <= tol.tol_zero {
            return Err(Error::Decomposition("degenerate root vector".into()));
        }
        roots.push(Root {
            alpha,
            theta: th,
            h: h_el,
            u,
            v,
            kappa,
            u_coords,
            v_coords,
            h_hat_coords: h_coords / kappa,
        });
    }
    Ok(RootBasis {
        parent: alg.descriptor(),
        cartan: c.clone(),
        generic: h.clone(),
        roots,
    })
}
