use faer::{Col, ColRef};

use super::c64;
use super::linalg::{nullspace_scaled, range_scaled, Tolerance};
use super::matrix::*;
use crate::error::{Error, Result};

/// A linear subspace of `C^ambient_dim`, stored as a matrix whose columns are
/// an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn empty(ambient_dim: usize) -> Self {
        Subspace { basis: zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { basis: identity(ambient_dim) }
    }

    /// Wrap columns that are already orthonormal.
    pub fn from_orthonormal(basis: ComplexMatrix) -> Self {
        debug_assert!(
            basis.ncols() == 0 || (basis.adjoint() * &basis - identity(basis.ncols())).norm_l2() < 1e-8,
            "basis is not orthonormal"
        );
        Subspace { basis }
    }

    /// Span of the columns of `vectors`. Directions whose singular value is
    /// below the rank threshold (relative to the largest column norm) are
    /// dropped.
    pub fn span(vectors: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let scale = max_column_norm(vectors);
        range_scaled(vectors, tol, scale)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn vector(&self, k: usize) -> ColRef<'_, c64> {
        self.basis.col(k)
    }

    /// Orthogonal projection of a vector.
    pub fn project(&self, v: ColRef<'_, c64>) -> Col<c64> {
        let coeffs = self.basis.adjoint() * v;
        &self.basis * coeffs
    }

    /// Coordinates of `v` in the stored basis.
    pub fn coordinates(&self, v: ColRef<'_, c64>) -> Col<c64> {
        self.basis.adjoint() * v
    }

    /// Distance from `v` to the subspace.
    pub fn residual_vector(&self, v: ColRef<'_, c64>) -> f64 {
        (v - self.project(v)).norm_l2()
    }

    /// Largest distance of a unit basis vector of `other` to `self`; zero iff
    /// `other ⊆ self` in exact arithmetic.
    pub fn containment_residual(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        if other.dim() == 0 {
            return Ok(0.0);
        }
        if self.dim() == 0 {
            return Ok(1.0);
        }
        let b = other.basis();
        let r = b - &self.basis * (self.basis.adjoint() * b);
        Ok((0..r.ncols()).map(|j| r.col(j).norm_l2()).fold(0.0, f64::max))
    }

    pub fn contains(&self, other: &Subspace, tol: &Tolerance) -> Result<bool> {
        Ok(self.containment_residual(other)? <= tol.threshold(1.0))
    }

    /// Symmetric residual used for equality; `None` when dimensions differ.
    pub fn equality_residual(&self, other: &Subspace) -> Result<Option<f64>> {
        self.check_ambient(other)?;
        if self.dim() != other.dim() {
            return Ok(None);
        }
        Ok(Some(self.containment_residual(other)?.max(other.containment_residual(self)?)))
    }

    pub fn equals(&self, other: &Subspace, tol: &Tolerance) -> Result<bool> {
        Ok(matches!(self.equality_residual(other)?, Some(r) if r <= tol.threshold(1.0)))
    }

    /// `self ∩ other`, as the kernel of `Q1 - Q2 Q2* Q1` mapped through `Q1`.
    pub fn intersection(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::empty(self.ambient_dim()));
        }
        let q1 = &self.basis;
        let q2 = &other.basis;
        let d = q1 - q2 * (q2.adjoint() * q1);
        let ker = nullspace_scaled(&d, tol, 1.0)?;
        Ok(Subspace::from_orthonormal(q1 * ker.basis()))
    }

    /// Span of `self` together with the columns of `vectors`. Returns the new
    /// subspace and the added orthonormal directions.
    pub fn extend(&self, vectors: &ComplexMatrix, tol: &Tolerance) -> Result<(Subspace, ComplexMatrix)> {
        if vectors.nrows() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: vectors.nrows() });
        }
        let scale = max_column_norm(vectors);
        if vectors.ncols() == 0 || scale == 0.0 {
            return Ok((self.clone(), zeros(self.ambient_dim(), 0)));
        }
        // two rounds of projection keep the new directions orthogonal to
        // working precision
        let q = &self.basis;
        let mut r = vectors - q * (q.adjoint() * vectors);
        r = &r - q * (q.adjoint() * &r);
        let added = range_scaled(&r, tol, scale)?;
        let mut added_basis = added.basis().clone();
        if self.dim() > 0 && added_basis.ncols() > 0 {
            added_basis = &added_basis - q * (q.adjoint() * &added_basis);
            added_basis = Subspace::span(&added_basis, tol)?.basis;
        }
        let n = self.ambient_dim();
        let k = self.dim();
        let mut merged = zeros(n, k + added_basis.ncols());
        for j in 0..k {
            for i in 0..n {
                merged[(i, j)] = q[(i, j)];
            }
        }
        for j in 0..added_basis.ncols() {
            for i in 0..n {
                merged[(i, k + j)] = added_basis[(i, j)];
            }
        }
        Ok((Subspace { basis: merged }, added_basis))
    }

    pub fn orthogonal_complement(&self, tol: &Tolerance) -> Result<Subspace> {
        if self.dim() == 0 {
            return Ok(Subspace::full(self.ambient_dim()));
        }
        nullspace_scaled(&adjoint(&self.basis), tol, 1.0)
    }

    /// Orthogonal projector `Q Q*`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: other.ambient_dim() });
        }
        Ok(())
    }
}

fn max_column_norm(m: &ComplexMatrix) -> f64 {
    (0..m.ncols()).map(|j| m.col(j).norm_l2()).fold(0.0, f64::max)
}

pub fn subspace_equal(s1: &Subspace, s2: &Subspace, tol: &Tolerance) -> Result<bool> {
    s1.equals(s2, tol)
}

/// `inner ⊆ outer`.
pub fn subspace_contains(outer: &Subspace, inner: &Subspace, tol: &Tolerance) -> Result<bool> {
    outer.contains(inner, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_of(cols: &[&[f64]]) -> Subspace {
        let n = cols[0].len();
        let m = faer::Mat::from_fn(n, cols.len(), |i, j| cr(cols[j][i]));
        Subspace::span(&m, &Tolerance::default()).unwrap()
    }

    #[test]
    fn equality_examples() {
        let t = Tolerance::default();
        let e1 = span_of(&[&[1.0, 0.0]]);
        let e2 = span_of(&[&[0.0, 1.0]]);
        assert!(subspace_equal(&e1, &e1, &t).unwrap());
        assert!(!subspace_equal(&e1, &e2, &t).unwrap());
        let plane_a = span_of(&[&[1.0, 1.0], &[1.0, -1.0]]);
        let plane_b = span_of(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(subspace_equal(&plane_a, &plane_b, &t).unwrap());
        assert!(subspace_contains(&plane_a, &e1, &t).unwrap());
        assert!(!subspace_contains(&e1, &plane_a, &t).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(subspace_equal(&a, &b, &Tolerance::default()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn intersection_of_planes_in_c3() {
        let t = Tolerance::default();
        let xy = span_of(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let yz = span_of(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let i = xy.intersection(&yz, &t).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.equals(&span_of(&[&[0.0, 1.0, 0.0]]), &t).unwrap());
    }

    #[test]
    fn extend_adds_only_new_directions() {
        let t = Tolerance::default();
        let xy = span_of(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let v = faer::Mat::from_fn(3, 2, |i, j| cr([[1.0, 1.0], [2.0, 0.0], [0.0, 3.0]][i][j]));
        let (s, added) = xy.extend(&v, &t).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(added.ncols(), 1);
        assert!(s.equals(&Subspace::full(3), &t).unwrap());
        let (same, none) = s.extend(&v, &t).unwrap();
        assert_eq!(same.dim(), 3);
        assert_eq!(none.ncols(), 0);
    }

    #[test]
    fn complement_dimension() {
        let t = Tolerance::default();
        let xy = span_of(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let c = xy.orthogonal_complement(&t).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(xy.intersection(&c, &t).unwrap().dim() == 0);
    }
}
