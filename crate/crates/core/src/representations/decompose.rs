use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::GroupFunction;
use crate::numerics::matrix::*;
use crate::numerics::random::{random_hermitian, seeded_rng, Rng};
use crate::numerics::{hermitian_eig, Tolerance};

use super::table::IrrepTable;
use super::unitary::{character, character_inner, UnitaryRep};

/// Eigenvalue gap, relative to the spectral scale, below which two
/// eigenvalues of the averaged operator are treated as one.
pub const COLLISION_GAP: f64 = 1e-8;
/// Fresh samples drawn before a split is declared failed.
pub const MAX_RESAMPLES: usize = 8;

/// An irreducible invariant subspace: its isometry and its compressed
/// representation.
pub(crate) struct Component {
    pub isometry: ComplexMatrix,
    pub rep: UnitaryRep,
    pub character: GroupFunction,
}

/// Split `rep` into irreducible invariant subspaces.
///
/// Averaging a random Hermitian `H` over the group gives an element of the
/// commutant; its eigenspaces are invariant, and for a generic sample each is
/// irreducible. A piece whose character norm exceeds one is split again with a
/// fresh sample.
pub(crate) fn split_irreducible(rep: &UnitaryRep, rng: &mut Rng, tol: &Tolerance) -> Result<Vec<Component>> {
    let mut out = Vec::new();
    split_into(rep, identity(rep.dim()), rng, tol, &mut out)?;
    Ok(out)
}

fn split_into(
    full: &UnitaryRep,
    isometry: ComplexMatrix,
    rng: &mut Rng,
    tol: &Tolerance,
    out: &mut Vec<Component>,
) -> Result<()> {
    let sub = full.compress(&isometry);
    let chi = character(&sub);
    let norm = character_inner(&chi, &chi)?.re;
    if (norm - 1.0).abs() < 1e-6 {
        out.push(Component { isometry, rep: sub, character: chi });
        return Ok(());
    }
    if norm < 1.0 - 1e-6 {
        return Err(Error::DecompositionFailed(format!("invariant subspace with character norm {norm}")));
    }
    let k = sub.dim();
    for _ in 0..MAX_RESAMPLES {
        let h = random_hermitian(rng, k);
        let mut avg = zeros(k, k);
        for m in sub.matrices() {
            avg += m * &h * m.adjoint();
        }
        let avg = scale_real(&avg, 1.0 / sub.group().order() as f64);
        let eig = hermitian_eig(&avg, tol)?;
        let scale = eig.values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let clusters = eig.clusters(COLLISION_GAP * scale);
        if clusters.len() < 2 {
            continue;
        }
        // every piece must be at most the size that a genuine split allows;
        // a piece that is still reducible triggers its own resampling
        for r in clusters {
            let w = &isometry * eig.vectors_of(r);
            split_into(full, w, rng, tol, out)?;
        }
        return Ok(());
    }
    Err(Error::DecompositionFailed(format!(
        "no splitting sample for a {k}-dimensional reducible piece after {MAX_RESAMPLES} attempts"
    )))
}

/// Isotypic decomposition of a representation against the irrep table of its
/// group.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub source: UnitaryRep,
    /// `(irrep index, multiplicity)`, by increasing irrep index, nonzero
    /// multiplicities only.
    pub blocks: Vec<(usize, usize)>,
    /// Unitary whose columns are adapted bases of the irreducible copies,
    /// ordered by irrep index; `W* U_g W` is block diagonal with blocks equal
    /// to the table irreps.
    pub intertwiner: ComplexMatrix,
    pub table: Arc<IrrepTable>,
}

impl Decomposition {
    pub fn multiplicity(&self, irrep: usize) -> usize {
        self.blocks.iter().find(|b| b.0 == irrep).map_or(0, |b| b.1)
    }

    /// `Σ m_σ²`, the dimension of the commutant of the source.
    pub fn commutant_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.1 * b.1).sum()
    }

    /// The expected block-diagonal image of element `g`.
    pub fn block_form(&self, g: usize) -> ComplexMatrix {
        let mut blocks = Vec::new();
        for &(s, m) in &self.blocks {
            for _ in 0..m {
                blocks.push(self.table.irreps[s].matrix(g).clone());
            }
        }
        block_diag(&blocks)
    }

    /// Largest `‖W* U_g W − block_form(g)‖_F`.
    pub fn residual(&self) -> f64 {
        let w = &self.intertwiner;
        (0..self.source.group().order())
            .map(|g| distance(&(w.adjoint() * self.source.matrix(g) * w), &self.block_form(g)))
            .fold(0.0, f64::max)
    }
}

/// Decompose into table irreps. Deterministic for a fixed seed.
pub fn decompose(rep: &UnitaryRep, seed: u64, tol: &Tolerance) -> Result<Decomposition> {
    let table = IrrepTable::for_group(rep.group())?;
    decompose_with(rep, &table, seed, tol)
}

pub fn decompose_with(rep: &UnitaryRep, table: &Arc<IrrepTable>, seed: u64, tol: &Tolerance) -> Result<Decomposition> {
    let mut rng = seeded_rng(seed);
    let components = split_irreducible(rep, &mut rng, tol)?;
    let mut by_irrep: Vec<Vec<ComplexMatrix>> = vec![Vec::new(); table.irreps.len()];
    for c in &components {
        let s = table.match_character(&c.character).ok_or_else(|| {
            Error::DecompositionFailed("irreducible component matches no table character".into())
        })?;
        let w = intertwiner(&c.rep, &table.irreps[s])?;
        by_irrep[s].push(&c.isometry * w);
    }

    let n = rep.dim();
    let mut w = zeros(n, n);
    let mut col = 0;
    let mut blocks = Vec::new();
    for (s, copies) in by_irrep.iter().enumerate() {
        if copies.is_empty() {
            continue;
        }
        blocks.push((s, copies.len()));
        for c in copies {
            for j in 0..c.ncols() {
                for i in 0..n {
                    w[(i, col)] = c[(i, j)];
                }
                col += 1;
            }
        }
    }
    if col != n {
        return Err(Error::DecompositionFailed(format!("components span {col} of {n} dimensions")));
    }
    let chi = character(rep);
    let commutant = character_inner(&chi, &chi)?.re;
    let squares: usize = blocks.iter().map(|b| b.1 * b.1).sum();
    if (commutant - squares as f64).abs() > 1e-6 {
        return Err(Error::DecompositionFailed(format!(
            "multiplicities give commutant dimension {squares}, character gives {commutant}"
        )));
    }
    Ok(Decomposition { source: rep.clone(), blocks, intertwiner: w, table: table.clone() })
}

/// A unitary `W` with `a(g) W = W b(g)` for equivalent irreducible `a`, `b`.
///
/// `Σ_g a(g) E_ij b(g)*` intertwines for every matrix unit; by Schur it is a
/// multiple of a unitary, and the unit with the largest result is used.
pub(crate) fn intertwiner(a: &UnitaryRep, b: &UnitaryRep) -> Result<ComplexMatrix> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
    }
    let mut best = (0.0, zeros(d, d));
    for i in 0..d {
        for j in 0..d {
            let mut w = zeros(d, d);
            for g in 0..a.group().order() {
                let am = a.matrix(g);
                let bm = b.matrix(g);
                // a(g) E_ij b(g)* = a(g)[:, i] (b(g)[:, j])*
                w += am.get(.., i..i + 1) * bm.get(.., j..j + 1).adjoint();
            }
            let f = frobenius(&w);
            if f > best.0 * (1.0 + 1e-12) {
                best = (f, w);
            }
        }
    }
    if best.0 < 1e-8 {
        return Err(Error::DecompositionFailed("representations are not equivalent".into()));
    }
    let c = best.0 / (d as f64).sqrt();
    Ok(scale_real(&best.1, 1.0 / c))
}
