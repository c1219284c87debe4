//! Crossed products `M ⋊ G` of a matrix algebra by a finite group action.
//!
//! The carrier is `C^{|G|} ⊗ C^n`, group slot first. `π_α(A)` is block
//! diagonal with blocks `α^{g⁻¹}(A)` and `U_g = L_g ⊗ 1` permutes blocks.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::{bicommutant_check, invariance_residual, BicommutantReport, StarAlgebra};
use crate::error::{Error, Result};
use crate::galois::{galois_map, CommutantKind, GaloisReport};
use crate::groups::{FiniteGroup, Subgroup};
use crate::numerics::matrix::*;
use crate::numerics::{Subspace, Tolerance};
use crate::representations::UnitaryRep;

/// A group action on the base algebra.
#[derive(Clone, Debug)]
pub enum Action {
    /// `α^g = Ad(U_g)` for a unitary representation on the base space.
    Ad(UnitaryRep),
    /// `α^g` as a matrix on the coordinates of the base algebra's
    /// orthonormal basis, one per group element.
    Table { group: Arc<FiniteGroup>, maps: Vec<ComplexMatrix> },
}

impl Action {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            Action::Ad(rep) => rep.group(),
            Action::Table { group, .. } => group,
        }
    }

    /// The table of an inner action on `base`.
    pub fn table_of(base: &StarAlgebra, rep: &UnitaryRep) -> Action {
        let basis = base.basis_matrices();
        let maps = rep
            .matrices()
            .iter()
            .map(|u| coordinate_matrix(base, &basis, |b| conjugate_by(u, b)))
            .collect();
        Action::Table { group: rep.group().clone(), maps }
    }
}

fn coordinate_matrix(base: &StarAlgebra, basis: &[ComplexMatrix], f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let d = basis.len();
    let mut out = zeros(d, d);
    for (l, b) in basis.iter().enumerate() {
        let image = f(b);
        for (k, bk) in basis.iter().enumerate() {
            out[(k, l)] = hs_inner(bk, &image);
        }
    }
    debug_assert_eq!(d, base.dim());
    out
}

#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub base: StarAlgebra,
    pub action: Action,
    pub carrier_dim: usize,
    /// `U_g = L_g ⊗ 1` on the carrier.
    pub u: UnitaryRep,
    pub algebra: StarAlgebra,
    pub bicommutant: BicommutantReport,
    base_basis: Vec<ComplexMatrix>,
}

/// Build `M ⋊_α G`: validate the action, form `π_α` and `U`, generate the
/// algebra and run the bicommutant self-test.
pub fn crossed_product(base: &StarAlgebra, action: Action, tol: &Tolerance) -> Result<CrossedProduct> {
    let n = base.ambient_dim();
    let group = action.group().clone();
    let base_basis = base.basis_matrices();
    validate_action(base, &base_basis, &action, tol)?;
    let regular = UnitaryRep::regular(group.clone());
    let id = identity(n);
    let u_mats = regular.matrices().iter().map(|l| kron(l, &id)).collect();
    let u = UnitaryRep::new(group.clone(), u_mats, tol)?;
    let mut cp = CrossedProduct {
        base: base.clone(),
        action,
        carrier_dim: n * group.order(),
        u,
        algebra: StarAlgebra::scalars(1),
        bicommutant: BicommutantReport::default(),
        base_basis,
    };
    // covariance makes span{π(a) U_g} closed under products and adjoints
    let represented: Vec<ComplexMatrix> = cp.base_basis.iter().map(|a| cp.pi_alpha(a)).collect();
    let spanning: Vec<ComplexMatrix> =
        represented.iter().flat_map(|p| cp.u.matrices().iter().map(move |u| p * u)).collect();
    let basis = Subspace::span(&vec_columns(&spanning, cp.carrier_dim * cp.carrier_dim), tol)?;
    cp.algebra = StarAlgebra::from_subspace(cp.carrier_dim, basis, tol)?;
    cp.bicommutant = bicommutant_check(&cp.algebra, tol)?;
    Ok(cp)
}

fn validate_action(base: &StarAlgebra, basis: &[ComplexMatrix], action: &Action, tol: &Tolerance) -> Result<()> {
    let eps = tol.threshold(1.0).max(1e-10);
    match action {
        Action::Ad(rep) => {
            if rep.dim() != base.ambient_dim() {
                return Err(Error::DimensionMismatch { expected: base.ambient_dim(), found: rep.dim() });
            }
            let mats: Vec<&ComplexMatrix> = rep.matrices().iter().collect();
            let r = invariance_residual(base, &mats);
            if r > eps {
                return Err(Error::NotInvariantAlgebra { residual: r });
            }
        }
        Action::Table { group, maps } => {
            let d = base.dim();
            if maps.len() != group.order() {
                return Err(Error::DimensionMismatch { expected: group.order(), found: maps.len() });
            }
            if let Some(m) = maps.iter().find(|m| m.nrows() != d || m.ncols() != d) {
                return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
            }
            let e = group.identity();
            if distance(&maps[e], &identity(d)) > eps {
                return Err(Error::InvalidInput("the identity does not act trivially".into()));
            }
            for a in 0..group.order() {
                for b in 0..group.order() {
                    let r = distance(&(&maps[a] * &maps[b]), &maps[group.mul(a, b)]);
                    if r > eps {
                        return Err(Error::NotAHomomorphism { a, b, residual: r });
                    }
                }
            }
            let apply = |g: usize, x: &ComplexMatrix| apply_table(basis, &maps[g], x);
            for g in 0..group.order() {
                for x in basis {
                    let r = distance(&apply(g, &adjoint(x)), &adjoint(&apply(g, x)));
                    if r > eps {
                        return Err(Error::InvalidInput(format!("α of element {g} does not preserve adjoints (residual {r:.3e})")));
                    }
                    for y in basis {
                        let r = distance(&apply(g, &(x * y)), &(apply(g, x) * apply(g, y)));
                        if r > eps {
                            return Err(Error::InvalidInput(format!("α of element {g} is not multiplicative (residual {r:.3e})")));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn apply_table(basis: &[ComplexMatrix], map: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.nrows();
    let coords: Vec<_> = basis.iter().map(|b| hs_inner(b, x)).collect();
    let mut out = zeros(n, n);
    for (k, bk) in basis.iter().enumerate() {
        let mut c = ZERO;
        for (l, cl) in coords.iter().enumerate() {
            c += map[(k, l)] * cl;
        }
        axpy(&mut out, c, bk);
    }
    out
}

impl CrossedProduct {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    /// `α^g(A)`.
    pub fn alpha(&self, g: usize, a: &ComplexMatrix) -> ComplexMatrix {
        match &self.action {
            Action::Ad(rep) => conjugate_by(rep.matrix(g), a),
            Action::Table { maps, .. } => apply_table(&self.base_basis, &maps[g], a),
        }
    }

    /// `π_α(A) = ⊕_g α^{g⁻¹}(A)`.
    pub fn pi_alpha(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let g = self.group();
        let blocks: Vec<ComplexMatrix> = (0..g.order()).map(|h| self.alpha(g.inv(h), a)).collect();
        block_diag(&blocks)
    }

    /// `π_α(M)` as an algebra on the carrier.
    pub fn represented_base(&self, tol: &Tolerance) -> Result<StarAlgebra> {
        let images: Vec<ComplexMatrix> = self.base_basis.iter().map(|a| self.pi_alpha(a)).collect();
        StarAlgebra::from_matrices(self.carrier_dim, &images, tol)
    }

    /// Largest `‖U_g π_α(A) U_g* − π_α(α^g(A))‖` with `U_g` taken from
    /// `u_mats`, over group elements and base basis elements.
    pub fn covariance_residual_with(&self, u_mats: &[ComplexMatrix]) -> f64 {
        (0..self.group().order())
            .into_par_iter()
            .map(|g| {
                self.base_basis
                    .iter()
                    .map(|a| distance(&conjugate_by(&u_mats[g], &self.pi_alpha(a)), &self.pi_alpha(&self.alpha(g, a))))
                    .fold(0.0, f64::max)
            })
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Covariance residual of the pair `(π_α, U)`.
pub fn covariance_check(cp: &CrossedProduct) -> f64 {
    cp.covariance_residual_with(cp.u.matrices())
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackRow {
    pub subgroup: Subgroup,
    pub dim: usize,
    pub pullback_id: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossedGaloisReport {
    pub crossed: GaloisReport,
    /// `N ∩ π_α(M)` for each fixed algebra `N` of the crossed analysis.
    pub pullbacks: Vec<PullbackRow>,
    pub pullback_injective: bool,
}

/// Spatial Galois analysis of `(M ⋊ G, Ad U)` with the pull-backs into the
/// represented base.
pub fn crossed_galois(cp: &CrossedProduct, tol: &Tolerance) -> Result<CrossedGaloisReport> {
    let crossed = galois_map(&cp.algebra, &cp.u, CommutantKind::Spatial, tol)?;
    let base = cp.represented_base(tol)?;
    let pulled: Vec<StarAlgebra> =
        crossed.fixed_algebras.par_iter().map(|n| n.intersection(&base, tol)).collect::<Result<_>>()?;
    // intern pull-backs
    let mut ids: Vec<usize> = Vec::with_capacity(pulled.len());
    let mut reps: Vec<usize> = Vec::new();
    for (k, p) in pulled.iter().enumerate() {
        let mut found = None;
        for (id, &r) in reps.iter().enumerate() {
            if pulled[r].dim() == p.dim() && subspace_same(pulled[r].basis(), p.basis(), tol) {
                found = Some(id);
                break;
            }
        }
        ids.push(found.unwrap_or_else(|| {
            reps.push(k);
            reps.len() - 1
        }));
    }
    let pullbacks: Vec<PullbackRow> = crossed
        .rows
        .iter()
        .map(|row| PullbackRow {
            subgroup: row.subgroup.clone(),
            dim: pulled[row.fixed_id].dim(),
            pullback_id: ids[row.fixed_id],
        })
        .collect();
    let pullback_injective = {
        let mut seen: Vec<usize> = pullbacks.iter().map(|p| p.pullback_id).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == pullbacks.len()
    };
    Ok(CrossedGaloisReport { crossed, pullbacks, pullback_injective })
}

fn subspace_same(a: &Subspace, b: &Subspace, tol: &Tolerance) -> bool {
    crate::numerics::subspace_equal(a, b, tol).unwrap_or(false)
}
