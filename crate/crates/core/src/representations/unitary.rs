use std::sync::Arc;

use faer::Col;

use crate::error::{Error, Result};
use crate::groups::{same_group, FiniteGroup, GroupFunction, Subgroup};
use crate::numerics::matrix::*;
use crate::numerics::{c64, inverse, matrix_real_power, Tolerance};

/// A homomorphism from a finite group into the unitary `dim x dim` matrices.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<ComplexMatrix>,
}

impl UnitaryRep {
    /// Validate unitarity, the homomorphism law and `matrix(e) = 1`.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self> {
        let dim = check_shapes(&group, &matrices)?;
        let thr = tol.threshold(dim as f64);
        for (g, m) in matrices.iter().enumerate() {
            let residual = unitary_residual(m);
            if residual > thr {
                return Err(Error::NotUnitary { element: g, residual });
            }
        }
        check_homomorphism(&group, &matrices, thr)?;
        Ok(UnitaryRep { group, dim, matrices })
    }

    /// Skip validation; for matrices that are unitary and multiplicative by
    /// construction.
    pub(crate) fn from_parts(group: Arc<FiniteGroup>, matrices: Vec<ComplexMatrix>) -> Self {
        let dim = matrices.first().map_or(0, |m| m.nrows());
        UnitaryRep { group, dim, matrices }
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![identity(dim); group.order()];
        UnitaryRep { group, dim, matrices }
    }

    /// Left-regular representation on `C^|G|`: `L_g δ_h = δ_{gh}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = zeros(n, n);
                for h in 0..n {
                    m[(group.mul(g, h), h)] = ONE;
                }
                m
            })
            .collect();
        UnitaryRep { group, dim: n, matrices }
    }

    /// Permutation matrices `P_g e_i = e_{perm_g(i)}`.
    pub fn from_permutations(group: Arc<FiniteGroup>, perms: &[Vec<usize>], tol: &Tolerance) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), found: perms.len() });
        }
        let n = perms.first().map_or(0, Vec::len);
        let mut matrices = Vec::with_capacity(perms.len());
        for p in perms {
            if p.len() != n || p.iter().any(|&i| i >= n) {
                return Err(Error::InvalidInput(format!("{p:?} is not a permutation of 0..{n}")));
            }
            let mut m = zeros(n, n);
            for (i, &pi) in p.iter().enumerate() {
                m[(pi, i)] = ONE;
            }
            matrices.push(m);
        }
        Self::new(group, matrices, tol)
    }

    /// One-dimensional representation from a character with unit-modulus
    /// values.
    pub fn from_scalars(group: Arc<FiniteGroup>, values: &[c64], tol: &Tolerance) -> Result<Self> {
        let matrices = values.iter().map(|&v| diag(&[v])).collect();
        Self::new(group, matrices, tol)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    /// Matrices of the members of `h`, in member order.
    pub fn restricted(&self, h: &Subgroup) -> Vec<&ComplexMatrix> {
        h.members().iter().map(|&g| &self.matrices[g]).collect()
    }

    /// `w* U_g w` for an isometry `w`; the caller guarantees that the range of
    /// `w` is invariant.
    pub fn compress(&self, w: &ComplexMatrix) -> UnitaryRep {
        let matrices = self.matrices.iter().map(|m| w.adjoint() * m * w).collect();
        UnitaryRep { group: self.group.clone(), dim: w.ncols(), matrices }
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::ParentMismatch);
        }
        let matrices =
            self.matrices.iter().zip(&other.matrices).map(|(a, b)| block_diag(&[a.clone(), b.clone()])).collect();
        Ok(UnitaryRep { group: self.group.clone(), dim: self.dim + other.dim, matrices })
    }

    pub fn tensor(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::ParentMismatch);
        }
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| kron(a, b)).collect();
        Ok(UnitaryRep { group: self.group.clone(), dim: self.dim * other.dim, matrices })
    }

    /// Largest `‖U_a U_b − U_{ab}‖_F` over all pairs.
    pub fn homomorphism_residual(&self) -> f64 {
        let n = self.group.order();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let d = distance(&(&self.matrices[a] * &self.matrices[b]), &self.matrices[self.group.mul(a, b)]);
                worst = worst.max(d);
            }
        }
        worst
    }
}

fn check_shapes(group: &FiniteGroup, matrices: &[ComplexMatrix]) -> Result<usize> {
    if matrices.len() != group.order() {
        return Err(Error::DimensionMismatch { expected: group.order(), found: matrices.len() });
    }
    let dim = matrices[0].nrows();
    for m in matrices {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: m.ncols().max(m.nrows()) });
        }
        if !is_finite(m) {
            return Err(Error::InvalidInput("representation matrix has non-finite entries".into()));
        }
    }
    Ok(dim)
}

fn check_homomorphism(group: &FiniteGroup, matrices: &[ComplexMatrix], thr: f64) -> Result<()> {
    let n = group.order();
    for a in 0..n {
        for b in 0..n {
            let ab = group.mul(a, b);
            let target = &matrices[ab];
            let residual = distance(&(&matrices[a] * &matrices[b]), target);
            if residual > thr * (1.0 + frobenius(target)) {
                return Err(Error::NotAHomomorphism { a, b, residual });
            }
        }
    }
    Ok(())
}

/// Turn a representation by invertible matrices into an equivalent unitary
/// one: with `P = (1/|G|) Σ_g α_g* α_g`, the matrices `P^{1/2} α_g P^{-1/2}`
/// are unitary.
pub fn unitarize(group: Arc<FiniteGroup>, matrices: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<UnitaryRep> {
    let dim = check_shapes(&group, &matrices)?;
    for (g, m) in matrices.iter().enumerate() {
        if inverse(m, tol).is_none() {
            return Err(Error::SingularMatrix { element: g });
        }
    }
    let scale = matrices.iter().map(frobenius).fold(1.0, f64::max);
    check_homomorphism(&group, &matrices, tol.threshold(scale * scale))?;

    let mut gram = zeros(dim, dim);
    for m in &matrices {
        gram += m.adjoint() * m;
    }
    let gram = scale_real(&gram, 1.0 / group.order() as f64);
    let root = matrix_real_power(&gram, 0.5, tol)?;
    let inv_root = matrix_real_power(&gram, -0.5, tol)?;
    let out = matrices.iter().map(|m| &root * m * &inv_root).collect();
    Ok(UnitaryRep::from_parts(group, out))
}

/// The operator `K_u = (1/|G|) Σ_g (U_g u)(U_g u)*`, which lies in the
/// commutant of the representation.
pub fn weyl_operator(rep: &UnitaryRep, u: &[c64]) -> Result<ComplexMatrix> {
    if u.len() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: u.len() });
    }
    if u.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let u = Col::from_fn(u.len(), |i| u[i]);
    let n = rep.dim();
    let mut k = zeros(n, n);
    for m in rep.matrices() {
        let v = m * &u;
        k += &v * v.adjoint();
    }
    Ok(scale_real(&k, 1.0 / rep.group().order() as f64))
}

/// `χ(g) = tr U_g`.
pub fn character(rep: &UnitaryRep) -> GroupFunction {
    GroupFunction::from_fn(rep.group().clone(), |g| trace(rep.matrix(g)))
}

/// `(1/|G|) Σ_g χ1(g) conj(χ2(g))`
pub fn character_inner(chi1: &GroupFunction, chi2: &GroupFunction) -> Result<c64> {
    chi1.inner(chi2)
}

/// Matrix coefficients `D_ij(g) = U_g[i, j]`, indexed `[i][j]`.
pub fn matrix_coefficients(rep: &UnitaryRep) -> Vec<Vec<GroupFunction>> {
    let d = rep.dim();
    (0..d)
        .map(|i| (0..d).map(|j| GroupFunction::from_fn(rep.group().clone(), |g| rep.matrix(g)[(i, j)])).collect())
        .collect()
}

/// `Σ_g μ(g) U_g`, a homomorphism from the measure algebra under the
/// measure convention.
pub fn measure_rep(mu: &GroupFunction, carrier: &UnitaryRep) -> Result<ComplexMatrix> {
    if !same_group(mu.group(), carrier.group()) {
        return Err(Error::ParentMismatch);
    }
    let mut out = zeros(carrier.dim(), carrier.dim());
    for (g, &w) in mu.values().iter().enumerate() {
        if w != ZERO {
            axpy(&mut out, w, carrier.matrix(g));
        }
    }
    Ok(out)
}
