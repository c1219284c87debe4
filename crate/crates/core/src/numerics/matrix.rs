//! Dense complex matrices and the small vocabulary of helpers the rest of the
//! crate speaks in.
//!
//! Matrices are `faer::Mat<c64>`. Vectorisation (`vec`/`unvec`) is column-major,
//! which makes the Hilbert-Schmidt inner product of two matrices the ordinary
//! inner product of their vectorisations.

use faer::{Col, Mat};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::c64;
use crate::error::{Error, Result};

pub type ComplexMatrix = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

#[inline]
pub fn cr(re: f64) -> c64 {
    c64::new(re, 0.0)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> ComplexMatrix {
    Mat::identity(n, n)
}

/// Matrix unit `e_{ij}` of size `n`.
pub fn unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(i, j)] = ONE;
    m
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { cr(values[i]) } else { ZERO })
}

pub fn diag(values: &[c64]) -> ComplexMatrix {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
}

/// Build from row-major nested real entries; handy in tests and fixtures.
pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    Mat::from_fn(r, c, |i, j| cr(rows[i][j]))
}

pub fn from_rows(rows: &[Vec<c64>]) -> ComplexMatrix {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    Mat::from_fn(r, c, |i, j| rows[i][j])
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint().to_owned()
}

pub fn scale(m: &ComplexMatrix, s: c64) -> ComplexMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn scale_real(m: &ComplexMatrix, s: f64) -> ComplexMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

/// `a += s * b`
pub fn axpy(a: &mut ComplexMatrix, s: c64, b: &ComplexMatrix) {
    debug_assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            a[(i, j)] += s * b[(i, j)];
        }
    }
}

pub fn trace(m: &ComplexMatrix) -> c64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// Frobenius norm.
pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.norm_l2()
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match m.singular_values() {
        Ok(s) => s.first().copied().unwrap_or(0.0),
        Err(_) => frobenius(m),
    }
}

pub fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm_l2()
}

/// Hilbert-Schmidt inner product `tr(a* b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> c64 {
    let mut acc = ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)].conj() * b[(i, j)];
        }
    }
    acc
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// `u a u*`
pub fn conjugate_by(u: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    u * a * u.adjoint()
}

pub fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).norm_l2()
}

pub fn unitary_residual(m: &ComplexMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    (m.adjoint() * m - identity(m.nrows())).norm_l2()
}

pub fn is_square(m: &ComplexMatrix) -> bool {
    m.nrows() == m.ncols()
}

/// Column-major vectorisation.
pub fn vec(m: &ComplexMatrix) -> Col<c64> {
    let r = m.nrows();
    Col::from_fn(r * m.ncols(), |k| m[(k % r, k / r)])
}

/// Inverse of [`vec`] for square `n x n` matrices.
pub fn unvec(v: faer::ColRef<'_, c64>, n: usize) -> ComplexMatrix {
    debug_assert_eq!(v.nrows(), n * n);
    Mat::from_fn(n, n, |i, j| v[j * n + i])
}

/// Stack the vectorisations of `mats` as columns.
pub fn vec_columns(mats: &[ComplexMatrix], len: usize) -> ComplexMatrix {
    let mut out = zeros(len, mats.len());
    for (c, m) in mats.iter().enumerate() {
        let r = m.nrows();
        for k in 0..len {
            out[(k, c)] = m[(k % r, k / r)];
        }
    }
    out
}

pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(n, m);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for j in 0..b.ncols() {
            for i in 0..b.nrows() {
                out[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
        r0 += b.nrows();
        c0 += b.ncols();
    }
    out
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
}

/// Multiply a column in place so that its largest-magnitude entry is real
/// and positive. Ties go to the lowest index.
pub fn fix_phase(m: &mut ComplexMatrix, col: usize) {
    let mut best = 0usize;
    let mut best_abs = -1.0f64;
    for i in 0..m.nrows() {
        let a = m[(i, col)].norm();
        if a > best_abs * (1.0 + 1e-12) + 1e-300 {
            best = i;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let phase = m[(best, col)].conj() / best_abs;
    for i in 0..m.nrows() {
        m[(i, col)] *= phase;
    }
}

/// JSON shape of a matrix: explicit dimensions plus row-major `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixObject {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

/// Accepted input shapes: the canonical object, or nested rows of `[re, im]`
/// (or plain real numbers).
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Object(MatrixObject),
    Rows(Vec<Vec<Entry>>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(&self) -> c64 {
        match *self {
            Entry::Pair([re, im]) => c64::new(re, im),
            Entry::Real(re) => cr(re),
        }
    }
}

fn matrix_from_input(input: MatrixInput) -> Result<ComplexMatrix> {
    let m = match input {
        MatrixInput::Object(o) => {
            if o.entries.len() != o.rows * o.cols {
                return Err(Error::InvalidInput(format!(
                    "matrix has {} entries, expected rows*cols = {}",
                    o.entries.len(),
                    o.rows * o.cols
                )));
            }
            Mat::from_fn(o.rows, o.cols, |i, j| {
                let [re, im] = o.entries[i * o.cols + j];
                c64::new(re, im)
            })
        }
        MatrixInput::Rows(rows) => {
            let r = rows.len();
            let c = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|row| row.len() != c) {
                return Err(Error::InvalidInput("ragged matrix rows".into()));
            }
            Mat::from_fn(r, c, |i, j| rows[i][j].value())
        }
    };
    if !is_finite(&m) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(m)
}

fn matrix_to_object(m: &ComplexMatrix) -> MatrixObject {
    let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            entries.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    MatrixObject { rows: m.nrows(), cols: m.ncols(), entries }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(matrix_to_object(m)).expect("matrix serialises")
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<ComplexMatrix> {
    let input: MatrixInput = serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidInput(format!("bad matrix: {e}")))?;
    matrix_from_input(input)
}

/// `#[serde(with = "serde_matrix")]` for a single matrix field.
pub mod serde_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_object(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let input = MatrixInput::deserialize(d)?;
        matrix_from_input(input).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "serde_matrix_vec")]` for a list of matrices.
pub mod serde_matrix_vec {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[ComplexMatrix], s: S) -> Result<S::Ok, S::Error> {
        let objs: Vec<MatrixObject> = ms.iter().map(matrix_to_object).collect();
        objs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ComplexMatrix>, D::Error> {
        let inputs = Vec::<MatrixInput>::deserialize(d)?;
        inputs
            .into_iter()
            .map(|i| matrix_from_input(i).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "serde_opt_matrix")]` for an optional matrix.
pub mod serde_opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<ComplexMatrix>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref().map(matrix_to_object).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<ComplexMatrix>, D::Error> {
        Option::<MatrixInput>::deserialize(d)?
            .map(|i| matrix_from_input(i).map_err(serde::de::Error::custom))
            .transpose()
    }
}
