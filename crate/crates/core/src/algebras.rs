//! Unital *-subalgebras of `M_n`, stored as orthonormal bases of the
//! `n²`-dimensional matrix space under the Hilbert-Schmidt inner product.
//!
//! Commutants are computed as kernels of stacked commutator maps. To keep
//! those kernels small, the unknown is first restricted to the commutant of
//! one generic Hermitian element `H`, which in the eigenbasis of `H` is
//! spanned by matrix units inside its eigenvalue clusters; the remaining
//! constraints are solved on that reduced space only.

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::numerics::matrix::*;
use crate::numerics::random::{normal, seeded_rng, Rng};
use crate::numerics::{c64, hermitian_eig, nullspace_scaled, Subspace, Tolerance};
use crate::representations::UnitaryRep;

/// Seed of the generic elements drawn internally. Results do not depend on
/// it beyond rounding.
const GENERIC_SEED: u64 = 0x6a09_e667_f3bc_c908;
/// Attempts at splitting the center before giving up.
const CENTER_ATTEMPTS: usize = 8;
/// Relative eigenvalue gap below which generic elements are considered to
/// have a repeated eigenvalue.
const CLUSTER_GAP: f64 = 1e-7;
/// Number of generic constraint matrices used when the generators span an
/// algebra.
const GENERIC_CONSTRAINTS: usize = 2;

#[derive(Clone, Debug)]
pub struct StarAlgebra {
    n: usize,
    basis: Subspace,
    contains_identity: bool,
}

impl StarAlgebra {
    pub fn full(n: usize) -> Self {
        StarAlgebra { n, basis: Subspace::full(n * n), contains_identity: true }
    }

    pub fn scalars(n: usize) -> Self {
        let e = scale_real(&identity(n), 1.0 / (n as f64).sqrt());
        let basis = Subspace::from_orthonormal(vec_columns(&[e], n * n));
        StarAlgebra { n, basis, contains_identity: true }
    }

    /// Diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        let units: Vec<ComplexMatrix> = (0..n).map(|i| unit(n, i, i)).collect();
        let basis = Subspace::from_orthonormal(vec_columns(&units, n * n));
        StarAlgebra { n, basis, contains_identity: true }
    }

    /// `⊕_i M_{d_i}` along the diagonal of `M_n`, `n = Σ d_i`.
    pub fn block_diagonal(dims: &[usize]) -> Self {
        let n: usize = dims.iter().sum();
        let mut units = Vec::new();
        let mut off = 0;
        for &d in dims {
            for j in 0..d {
                for i in 0..d {
                    units.push(unit(n, off + i, off + j));
                }
            }
            off += d;
        }
        let basis = Subspace::from_orthonormal(vec_columns(&units, n * n));
        StarAlgebra { n, basis, contains_identity: true }
    }

    /// Wrap a subspace of `M_n`, verifying the algebra axioms.
    pub fn from_subspace(n: usize, basis: Subspace, tol: &Tolerance) -> Result<Self> {
        if basis.ambient_dim() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: basis.ambient_dim() });
        }
        let alg = Self::wrap(n, basis);
        let residual = alg.closure_residual()?;
        if residual > tol.threshold(1.0) * 1e3 {
            return Err(Error::InvalidInput(format!("subspace is not a *-algebra (residual {residual:.3e})")));
        }
        if !alg.contains_identity {
            return Err(Error::InvalidInput("subspace does not contain the identity".into()));
        }
        Ok(alg)
    }

    /// Span of `matrices`, verified to be a unital *-algebra.
    pub fn from_matrices(n: usize, matrices: &[ComplexMatrix], tol: &Tolerance) -> Result<Self> {
        check_sizes(n, matrices)?;
        let span = Subspace::span(&vec_columns(matrices, n * n), tol)?;
        Self::from_subspace(n, span, tol)
    }

    pub(crate) fn wrap(n: usize, basis: Subspace) -> Self {
        let id = scale_real(&identity(n), 1.0 / (n as f64).sqrt());
        let contains_identity = basis.residual_vector(vec(&id).as_ref()) < 1e-8;
        StarAlgebra { n, basis, contains_identity }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Subspace {
        &self.basis
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.n
    }

    pub fn basis_matrix(&self, k: usize) -> ComplexMatrix {
        unvec(self.basis.vector(k), self.n)
    }

    /// Orthonormal (Hilbert-Schmidt) basis as matrices.
    pub fn basis_matrices(&self) -> Vec<ComplexMatrix> {
        (0..self.dim()).map(|k| self.basis_matrix(k)).collect()
    }

    /// Hilbert-Schmidt orthogonal projection onto the algebra.
    pub fn project(&self, a: &ComplexMatrix) -> ComplexMatrix {
        unvec(self.basis.project(vec(a).as_ref()).as_ref(), self.n)
    }

    /// `‖a − P(a)‖_F / max(‖a‖_F, 1)`
    pub fn membership_residual(&self, a: &ComplexMatrix) -> f64 {
        self.basis.residual_vector(vec(a).as_ref()) / frobenius(a).max(1.0)
    }

    pub fn contains_matrix(&self, a: &ComplexMatrix, tol: &Tolerance) -> bool {
        self.membership_residual(a) <= tol.threshold(1.0)
    }

    /// Residual of `other ⊆ self`.
    pub fn containment_residual(&self, other: &StarAlgebra) -> Result<f64> {
        self.basis.containment_residual(&other.basis)
    }

    pub fn contains(&self, other: &StarAlgebra, tol: &Tolerance) -> Result<bool> {
        self.basis.contains(&other.basis, tol)
    }

    pub fn equals(&self, other: &StarAlgebra, tol: &Tolerance) -> Result<bool> {
        self.basis.equals(&other.basis, tol)
    }

    /// Symmetric residual; `None` when dimensions differ.
    pub fn equality_residual(&self, other: &StarAlgebra) -> Result<Option<f64>> {
        self.basis.equality_residual(&other.basis)
    }

    pub fn intersection(&self, other: &StarAlgebra, tol: &Tolerance) -> Result<StarAlgebra> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        Ok(Self::wrap(self.n, self.basis.intersection(&other.basis, tol)?))
    }

    /// Largest distance of products, adjoints and the identity from the
    /// span, tested on a fixed panel of generic elements.
    pub fn closure_residual(&self) -> Result<f64> {
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let mut rng = seeded_rng(GENERIC_SEED ^ 1);
        let mut worst = 0.0f64;
        for _ in 0..3 {
            let x = self.generic_element(&mut rng);
            let y = self.generic_element(&mut rng);
            worst = worst.max(self.membership_residual(&(&x * &y)));
            worst = worst.max(self.membership_residual(&x.adjoint().to_owned()));
        }
        Ok(worst)
    }

    /// Random complex combination of the basis with unit-variance weights.
    pub(crate) fn generic_element(&self, rng: &mut Rng) -> ComplexMatrix {
        let d = self.dim();
        let w = faer::Col::from_fn(d, |_| c64::new(normal(rng), normal(rng)) / (2.0 * d as f64).sqrt());
        unvec((self.basis.basis() * w).as_ref(), self.n)
    }

    /// Random Hermitian element.
    pub(crate) fn generic_hermitian(&self, rng: &mut Rng) -> ComplexMatrix {
        let x = self.generic_element(rng);
        scale_real(&(&x + x.adjoint()), 0.5)
    }
}

fn check_sizes(n: usize, mats: &[ComplexMatrix]) -> Result<()> {
    for m in mats {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.nrows().max(m.ncols()) });
        }
    }
    Ok(())
}

/// The smallest unital *-algebra containing `gens`: the span of `1`, the
/// generators and their adjoints is grown by right multiplication with the
/// generators until no new direction appears.
pub fn algebra_from_generators(gens: &[ComplexMatrix], n: usize, tol: &Tolerance) -> Result<StarAlgebra> {
    check_sizes(n, gens)?;
    let mut seed = vec![identity(n)];
    for g in gens {
        seed.push(g.clone());
        seed.push(adjoint(g));
    }
    let letters_space = Subspace::span(&vec_columns(&seed[1..], n * n), tol)?;
    let letters: Vec<ComplexMatrix> = (0..letters_space.dim()).map(|k| unvec(letters_space.vector(k), n)).collect();
    let (mut span, added) = Subspace::empty(n * n).extend(&vec_columns(&seed, n * n), tol)?;
    let mut frontier: Vec<ComplexMatrix> = (0..added.ncols()).map(|k| unvec(added.col(k), n)).collect();
    let max_steps = n * n;
    for _ in 0..max_steps {
        if frontier.is_empty() || span.dim() == n * n {
            return Ok(StarAlgebra::wrap(n, span));
        }
        // batches keep the candidate block no wider than the ambient space
        let per_batch = (n * n / letters.len().max(1)).max(1);
        let mut next_frontier = Vec::new();
        for chunk in frontier.chunks(per_batch) {
            if span.dim() == n * n {
                break;
            }
            let products: Vec<ComplexMatrix> = chunk.iter().flat_map(|f| letters.iter().map(move |l| f * l)).collect();
            let (next, added) = span.extend(&vec_columns(&products, n * n), tol)?;
            span = next;
            next_frontier.extend((0..added.ncols()).map(|k| unvec(added.col(k), n)));
        }
        frontier = next_frontier;
    }
    if frontier.is_empty() || span.dim() == n * n {
        return Ok(StarAlgebra::wrap(n, span));
    }
    Err(Error::ClosureDidNotStabilise { steps: max_steps })
}

/// Commutant `A′ = {X : XB = BX for all B ∈ A}`.
pub fn commutant(a: &StarAlgebra, tol: &Tolerance) -> Result<StarAlgebra> {
    commutant_impl(&a.basis_matrices(), a.ambient_dim(), true, tol)
}

/// Commutant of the *-closed set generated by `gens` (the generators and
/// their adjoints).
pub fn commutant_of(gens: &[ComplexMatrix], n: usize, tol: &Tolerance) -> Result<StarAlgebra> {
    check_sizes(n, gens)?;
    commutant_impl(gens, n, false, tol)
}

/// As [`commutant_of`] for generators whose span is already a *-algebra
/// (group images, algebra bases). A few generic elements of the span then
/// have the same commutant as the whole set.
pub fn commutant_of_span(gens: &[ComplexMatrix], n: usize, tol: &Tolerance) -> Result<StarAlgebra> {
    check_sizes(n, gens)?;
    commutant_impl(gens, n, true, tol)
}

fn commutant_impl(gens: &[ComplexMatrix], n: usize, spans_algebra: bool, tol: &Tolerance) -> Result<StarAlgebra> {
    // letters: an orthonormal basis of the traceless part of span{gens, gens*}
    let mut all = Vec::with_capacity(2 * gens.len());
    let id = identity(n);
    for g in gens {
        let c = trace(g) / n as f64;
        let mut t = g.clone();
        axpy(&mut t, -c, &id);
        all.push(adjoint(&t));
        all.push(t);
    }
    let letters = Subspace::span(&vec_columns(&all, n * n), tol)?;
    if letters.dim() == 0 {
        return Ok(StarAlgebra::full(n));
    }
    let mut rng = seeded_rng(GENERIC_SEED);
    let letter_alg = StarAlgebra { n, basis: letters, contains_identity: false };

    let pivot = letter_alg.generic_hermitian(&mut rng);
    let mut constraints: Vec<ComplexMatrix> = Vec::new();
    if spans_algebra && letter_alg.dim() > 2 * GENERIC_CONSTRAINTS {
        for _ in 0..GENERIC_CONSTRAINTS {
            let x = letter_alg.generic_element(&mut rng);
            constraints.push(adjoint(&x));
            constraints.push(x);
        }
    } else {
        constraints = letter_alg.basis_matrices();
    }
    solve_commutant(n, &pivot, &constraints, tol)
}

/// Kernel of `X ↦ [K, X]` over all constraints `K`, restricted to the
/// commutant of the Hermitian `pivot`, which must commute with the solution
/// set.
fn solve_commutant(n: usize, pivot: &ComplexMatrix, constraints: &[ComplexMatrix], tol: &Tolerance) -> Result<StarAlgebra> {
    let eig = hermitian_eig(pivot, tol)?;
    let spread = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let clusters = eig.clusters(CLUSTER_GAP * spread);
    let v = &eig.vectors;
    let mut cols: Vec<(usize, usize)> = Vec::new();
    for c in &clusters {
        for b in c.clone() {
            for a in c.clone() {
                cols.push((a, b));
            }
        }
    }
    let p = cols.len();
    let rotated: Vec<ComplexMatrix> = constraints.iter().map(|k| v.adjoint() * k * v).collect();
    let scale = rotated.iter().map(frobenius).fold(0.0, f64::max);
    let mut c = zeros(n * n * rotated.len(), p);
    for (ki, k) in rotated.iter().enumerate() {
        let base = ki * n * n;
        for (col, &(a, b)) in cols.iter().enumerate() {
            // [K, E_ab] = K E_ab − E_ab K: column b gets K[:, a], row a loses K[b, :]
            for r in 0..n {
                c[(base + r + b * n, col)] += k[(r, a)];
            }
            for cc in 0..n {
                c[(base + a + cc * n, col)] -= k[(b, cc)];
            }
        }
    }
    let ker = nullspace_scaled(&c, tol, scale)?;
    // back to the standard basis: X = V Y V*
    let mut out = zeros(n * n, ker.dim());
    for j in 0..ker.dim() {
        let mut y = zeros(n, n);
        for (col, &(a, b)) in cols.iter().enumerate() {
            y[(a, b)] = ker.basis()[(col, j)];
        }
        let x = v * y * v.adjoint();
        for jj in 0..n {
            for ii in 0..n {
                out[(ii + jj * n, j)] = x[(ii, jj)];
            }
        }
    }
    Ok(StarAlgebra::wrap(n, Subspace::from_orthonormal(out)))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BicommutantReport {
    pub holds: bool,
    pub dim: usize,
    pub commutant_dim: usize,
    pub bicommutant_dim: usize,
    /// Symmetric subspace residual between `A` and `A″`; 1 when the
    /// dimensions differ.
    pub residual: f64,
}

/// `A″ = A`.
pub fn bicommutant_check(a: &StarAlgebra, tol: &Tolerance) -> Result<BicommutantReport> {
    let c = commutant(a, tol)?;
    let cc = commutant(&c, tol)?;
    let residual = a.equality_residual(&cc)?.unwrap_or(1.0);
    Ok(BicommutantReport {
        holds: residual <= tol.threshold(1.0),
        dim: a.dim(),
        commutant_dim: c.dim(),
        bicommutant_dim: cc.dim(),
        residual,
    })
}

/// `A′ ∩ M`, for `A ⊆ M`.
pub fn relative_commutant(a: &StarAlgebra, m: &StarAlgebra, tol: &Tolerance) -> Result<StarAlgebra> {
    let residual = m.containment_residual(a)?;
    if residual > tol.threshold(1.0) {
        return Err(Error::NotContained { residual });
    }
    commutant(a, tol)?.intersection(m, tol)
}

/// `Z(M) = M ∩ M′`.
pub fn center(m: &StarAlgebra, tol: &Tolerance) -> Result<StarAlgebra> {
    commutant(m, tol)?.intersection(m, tol)
}

pub fn is_factor(m: &StarAlgebra, tol: &Tolerance) -> Result<bool> {
    Ok(center(m, tol)?.dim() == 1)
}

/// One summand `M_size ⊗ 1_multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Block {
    pub size: usize,
    pub multiplicity: usize,
}

/// `U* M U = ⊕_i M_{n_i} ⊗ 1_{m_i}`, blocks in increasing `(n_i, m_i)`.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    pub blocks: Vec<Block>,
    pub unitary: ComplexMatrix,
}

impl BlockStructure {
    pub fn summary(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.size, b.multiplicity)).collect()
    }

    /// Distance of `U* x U` from the block pattern: the part outside the
    /// diagonal blocks plus the deviation of each block from `y ⊗ 1_m`.
    pub fn block_form_residual(&self, x: &ComplexMatrix) -> f64 {
        let y = self.unitary.adjoint() * x * &self.unitary;
        let reassembled = self.block_form_of(&y);
        distance(&y, &reassembled)
    }

    /// Project a matrix in the adapted basis onto the block pattern.
    fn block_form_of(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let mut parts = Vec::new();
        let mut off = 0;
        for b in &self.blocks {
            let (s, m) = (b.size, b.multiplicity);
            // average the m diagonal copies of each entry
            let small = Mat::from_fn(s, s, |i, j| {
                let mut acc = ZERO;
                for k in 0..m {
                    acc += y[(off + i * m + k, off + j * m + k)];
                }
                acc / m as f64
            });
            parts.push(kron(&small, &identity(m)));
            off += s * m;
        }
        block_diag(&parts)
    }

    /// The small matrices `y_i` with `U* x U = ⊕ y_i ⊗ 1`.
    pub fn components(&self, x: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let y = self.unitary.adjoint() * x * &self.unitary;
        let mut out = Vec::new();
        let mut off = 0;
        for b in &self.blocks {
            let (s, m) = (b.size, b.multiplicity);
            out.push(Mat::from_fn(s, s, |i, j| {
                let mut acc = ZERO;
                for k in 0..m {
                    acc += y[(off + i * m + k, off + j * m + k)];
                }
                acc / m as f64
            }));
            off += s * m;
        }
        out
    }
}

/// Type-I decomposition of a unital *-algebra.
///
/// The minimal central projections are the eigenprojections of a generic
/// Hermitian element of the center. Inside each central block a generic
/// Hermitian element of `M` has `n_i` eigenvalues of multiplicity `m_i`; a
/// generic element then aligns the eigenspaces into matrix units.
pub fn block_structure(m: &StarAlgebra, tol: &Tolerance) -> Result<BlockStructure> {
    if !m.contains_identity() {
        return Err(Error::InvalidInput("block structure needs a unital algebra".into()));
    }
    let n = m.ambient_dim();
    let z = center(m, tol)?;
    let mut rng = seeded_rng(GENERIC_SEED ^ 2);
    let mut last = String::new();
    for _ in 0..CENTER_ATTEMPTS {
        match try_block_structure(m, &z, &mut rng, tol) {
            Ok(mut parts) => {
                parts.sort_by(|a, b| a.0.cmp(&b.0));
                let blocks: Vec<Block> = parts.iter().map(|p| p.0).collect();
                let mut u = zeros(n, n);
                let mut col = 0;
                for (_, w) in &parts {
                    for j in 0..w.ncols() {
                        for i in 0..n {
                            u[(i, col)] = w[(i, j)];
                        }
                        col += 1;
                    }
                }
                return Ok(BlockStructure { blocks, unitary: u });
            }
            Err(detail) => last = detail,
        }
    }
    Err(Error::CenterSplitFailed { attempts: CENTER_ATTEMPTS, detail: last })
}

fn try_block_structure(
    m: &StarAlgebra,
    z: &StarAlgebra,
    rng: &mut Rng,
    tol: &Tolerance,
) -> std::result::Result<Vec<(Block, ComplexMatrix)>, String> {
    let zh = z.generic_hermitian(rng);
    let eig = hermitian_eig(&zh, tol).map_err(|e| e.to_string())?;
    let spread = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let clusters = eig.clusters(CLUSTER_GAP * spread);
    if clusters.len() != z.dim() {
        return Err(format!("center of dimension {} split into {} blocks", z.dim(), clusters.len()));
    }
    let h = m.generic_hermitian(rng);
    let y = m.generic_element(rng);
    let mut parts = Vec::new();
    let mut total = 0;
    for c in clusters {
        let w = eig.vectors_of(c);
        let hi = w.adjoint() * &h * &w;
        let e = hermitian_eig(&hi, tol).map_err(|e| e.to_string())?;
        let spread = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let sub = e.clusters(CLUSTER_GAP * spread);
        let size = sub.len();
        let mult = sub[0].len();
        if sub.iter().any(|r| r.len() != mult) {
            return Err("unequal eigenvalue multiplicities inside a central block".into());
        }
        let yi = w.adjoint() * &y * &w;
        let first = e.vectors_of(sub[0].clone());
        let mut adapted = zeros(w.nrows(), w.ncols());
        for (a, r) in sub.iter().enumerate() {
            let ya = e.vectors_of(r.clone());
            let aligned = if a == 0 {
                ya
            } else {
                let t = ya.adjoint() * &yi * &first;
                let norm = frobenius(&t) / (mult as f64).sqrt();
                if norm < 1e-8 {
                    return Err("generic element has a vanishing block entry".into());
                }
                scale_real(&(&ya * t), 1.0 / norm)
            };
            let cols = &w * aligned;
            for k in 0..mult {
                // a-major ordering: column a·m + k
                for i in 0..w.nrows() {
                    adapted[(i, a * mult + k)] = cols[(i, k)];
                }
            }
        }
        total += size * size;
        parts.push((Block { size, multiplicity: mult }, adapted));
    }
    if total != m.dim() {
        return Err(format!("blocks account for dimension {total}, algebra has {}", m.dim()));
    }
    Ok(parts)
}

/// Largest `‖U_h X U_h* − P_M(U_h X U_h*)‖` over `h` and basis elements.
pub fn invariance_residual(m: &StarAlgebra, mats: &[&ComplexMatrix]) -> f64 {
    if m.is_full() {
        return 0.0;
    }
    let basis = m.basis_matrices();
    let mut worst = 0.0f64;
    for u in mats {
        for x in &basis {
            worst = worst.max(m.membership_residual(&conjugate_by(u, x)));
        }
    }
    worst
}

/// `M^H = {A ∈ M : U_h A U_h* = A}`, the commutant of `{U_h}` intersected
/// with `M`.
pub fn fixed_point_algebra(m: &StarAlgebra, rep: &UnitaryRep, h: &Subgroup, tol: &Tolerance) -> Result<StarAlgebra> {
    if rep.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), found: rep.dim() });
    }
    let mats = rep.restricted(h);
    let residual = invariance_residual(m, &mats);
    if residual > tol.threshold(1.0) * 1e3 {
        return Err(Error::NotInvariantAlgebra { residual });
    }
    let gens: Vec<ComplexMatrix> = mats.into_iter().cloned().collect();
    commutant_of_span(&gens, m.ambient_dim(), tol)?.intersection(m, tol)
}

/// `(1/|H|) Σ_h U_h A U_h*` over the listed unitaries.
pub fn average_conjugates(a: &ComplexMatrix, mats: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut out = zeros(a.nrows(), a.ncols());
    for u in mats {
        out += conjugate_by(u, a);
    }
    scale_real(&out, 1.0 / mats.len() as f64)
}

/// `A^G = (1/|G|) Σ_g U_g A U_g*`.
pub fn averaging_projection(a: &ComplexMatrix, rep: &UnitaryRep) -> ComplexMatrix {
    let mats: Vec<&ComplexMatrix> = rep.matrices().iter().collect();
    average_conjugates(a, &mats)
}

/// `A = A^G + (A − A^G)` with the remainder annihilated by invariant states.
#[derive(Clone, Debug)]
pub struct AveragingReport {
    pub fixed: ComplexMatrix,
    pub remainder: ComplexMatrix,
    /// `|tr(ρ (A − A^G))|` for each supplied density.
    pub state_residuals: Vec<f64>,
    /// `‖(A^G)^G − A^G‖_F`
    pub idempotence_residual: f64,
}

pub fn averaging_decomposition(a: &ComplexMatrix, rep: &UnitaryRep, invariant_densities: &[ComplexMatrix]) -> AveragingReport {
    let fixed = averaging_projection(a, rep);
    let remainder = a - &fixed;
    let state_residuals = invariant_densities.iter().map(|rho| trace(&(rho * &remainder)).norm()).collect();
    let idempotence_residual = distance(&averaging_projection(&fixed, rep), &fixed);
    AveragingReport { fixed, remainder, state_residuals, idempotence_residual }
}
