use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use super::c64;
use super::matrix::*;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Absolute and relative thresholds for every rank decision in the crate.
///
/// A rank-revealing pivot `s` counts as zero when `s <= abs_eps + rel_eps * scale`,
/// where `scale` is the largest pivot of the operator in question (or a
/// caller-supplied natural scale, whichever is larger).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_eps: 1e-12, rel_eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        if !(abs_eps > 0.0 && rel_eps > 0.0 && abs_eps.is_finite() && rel_eps.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be strictly positive, got abs={abs_eps}, rel={rel_eps}"
            )));
        }
        Ok(Tolerance { abs_eps, rel_eps })
    }

    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_eps * scale
    }
}

#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` belongs to `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        v * diag_real(&self.values) * v.adjoint()
    }

    /// Group consecutive eigenvalues whose gap is at most `gap`.
    pub fn clusters(&self, gap: f64) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] > gap {
                if k > start {
                    out.push(start..k);
                }
                start = k;
            }
        }
        out
    }

    /// Columns `range` of the eigenvector matrix.
    pub fn vectors_of(&self, range: std::ops::Range<usize>) -> ComplexMatrix {
        self.vectors.get(.., range).to_owned()
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues, each
/// eigenvector's largest-magnitude entry made real positive.
pub fn hermitian_eig(a: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEig> {
    if !is_square(a) {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    let residual = hermitian_residual(a);
    if residual > tol.threshold(frobenius(a)) {
        return Err(Error::NotHermitian { residual });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(HermitianEig { values: vec![], vectors: zeros(0, 0) });
    }
    let sym = scale_real(&(a + a.adjoint()), 0.5);
    let evd = sym.self_adjoint_eigen(Side::Lower).map_err(|_| Error::NoConvergence)?;
    let values: Vec<f64> = (0..n).map(|k| evd.S()[k].re).collect();
    let mut vectors = evd.U().to_owned();
    for k in 0..n {
        fix_phase(&mut vectors, k);
    }
    Ok(HermitianEig { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    let sym = scale_real(&(a + a.adjoint()), 0.5);
    sym.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)
}

/// Column-pivoted QR of `a`: orthogonal factor and the number of leading
/// pivots above the threshold measured against `max(largest pivot, scale)`.
/// Rank decisions go through pivoted QR rather than the SVD because faer's
/// SVD can misplace directions inside highly degenerate spectra, which are
/// the norm for group-invariant operators.
fn pivoted_rank(a: &ComplexMatrix, tol: &Tolerance, scale: f64, full_q: bool) -> (ComplexMatrix, usize) {
    if a.norm_max() == 0.0 {
        // faer's Householder step divides by the column norm
        let q = identity(a.nrows());
        let q = if full_q { q } else { q.get(.., 0..a.nrows().min(a.ncols())).to_owned() };
        return (q, 0);
    }
    let qr = a.col_piv_qr();
    let r = qr.R();
    let k = r.nrows().min(r.ncols());
    let pivots: Vec<f64> = (0..k).map(|i| r[(i, i)].norm()).collect();
    let top = pivots.first().copied().unwrap_or(0.0);
    let thr = tol.threshold(top.max(scale));
    let rank = pivots.iter().take_while(|&&x| x > thr).count();
    let q = if full_q { qr.compute_Q() } else { qr.compute_thin_Q() };
    (q, rank)
}

/// Numerical rank under the crate's rank rule.
pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0);
    }
    Ok(pivoted_rank(a, tol, 0.0, false).1)
}

/// Orthonormal basis of `{x : a x = 0}`.
pub fn nullspace(a: &ComplexMatrix, tol: &Tolerance) -> Result<Subspace> {
    nullspace_scaled(a, tol, 0.0)
}

/// As [`nullspace`], with the relative threshold measured against
/// `max(largest pivot, scale)`. Callers pass the natural size of the
/// operator so that an exactly-zero map is not judged against its own noise.
pub fn nullspace_scaled(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<Subspace> {
    let cols = a.ncols();
    if cols == 0 {
        return Ok(Subspace::empty(0));
    }
    if a.nrows() == 0 {
        return Ok(Subspace::full(cols));
    }
    // the kernel is the orthogonal complement of the row space
    let (q, r) = pivoted_rank(&adjoint(a), tol, scale, true);
    Ok(Subspace::from_orthonormal(q.get(.., r..cols).to_owned()))
}

/// Orthonormal basis of the column space of `a`, rank decided against
/// `max(largest pivot, scale)`.
pub fn range_scaled(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<Subspace> {
    let rows = a.nrows();
    if a.ncols() == 0 || rows == 0 {
        return Ok(Subspace::empty(rows));
    }
    let (q, r) = pivoted_rank(a, tol, scale, false);
    Ok(Subspace::from_orthonormal(q.get(.., 0..r).to_owned()))
}

/// Apply a scalar function to the spectrum of a positive-definite matrix.
pub fn positive_function(
    p: &ComplexMatrix,
    tol: &Tolerance,
    f: impl Fn(f64) -> c64,
) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(p, tol)?;
    let max = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(&min) = eig.values.first() {
        if min <= tol.threshold(max) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
    }
    let d: Vec<c64> = eig.values.iter().map(|&l| f(l)).collect();
    Ok(&eig.vectors * diag(&d) * eig.vectors.adjoint())
}

/// `p^{it}` for positive-definite `p`.
pub fn matrix_imaginary_power(p: &ComplexMatrix, t: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    positive_function(p, tol, |l| {
        let phase = t * l.ln();
        c64::new(phase.cos(), phase.sin())
    })
}

/// `p^s` for positive-definite `p` and real `s`.
pub fn matrix_real_power(p: &ComplexMatrix, s: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    positive_function(p, tol, |l| cr(l.powf(s)))
}

/// Inverse of a general square matrix, `None` when singular at tolerance.
pub fn inverse(a: &ComplexMatrix, tol: &Tolerance) -> Option<ComplexMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return None;
    }
    let s = a.singular_values().ok()?;
    let smax = s.first().copied().unwrap_or(0.0);
    if s.last().copied().unwrap_or(0.0) <= tol.threshold(smax) {
        return None;
    }
    let lu = a.partial_piv_lu();
    use faer::linalg::solvers::DenseSolveCore;
    Some(lu.inverse())
}

/// Real symmetric eigendecomposition for the realified operators of the
/// modular module.
pub fn real_symmetric_eig(a: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = a.nrows();
    let sym = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let evd = sym.self_adjoint_eigen(Side::Lower).map_err(|_| Error::NoConvergence)?;
    Ok(((0..n).map(|k| evd.S()[k]).collect(), evd.U().to_owned()))
}
