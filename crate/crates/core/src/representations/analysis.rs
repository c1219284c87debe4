use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{same_group, GroupFunction};
use crate::numerics::matrix::*;
use crate::numerics::{c64, rank, Tolerance};

use super::decompose::intertwiner;
use super::table::IrrepTable;
use super::unitary::{character, character_inner, UnitaryRep};

/// Coefficient inner products `(1/|G|) Σ_g D¹_ij(g) conj(D²_kl(g))` for two
/// irreducible representations, compared against the orthogonality relations.
#[derive(Clone, Debug)]
pub struct SchurReport {
    pub dims: (usize, usize),
    pub equivalent: bool,
    /// Row `i·d1 + j`, column `k·d2 + l`.
    pub values: ComplexMatrix,
    pub expected: ComplexMatrix,
    pub max_residual: f64,
}

impl SchurReport {
    pub fn matches(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

/// Irreducibility is tested by `⟨χ, χ⟩ = 1`.
pub fn schur_check(rep1: &UnitaryRep, rep2: &UnitaryRep) -> Result<SchurReport> {
    if !same_group(rep1.group(), rep2.group()) {
        return Err(Error::ParentMismatch);
    }
    let (c1, c2) = (character(rep1), character(rep2));
    for c in [&c1, &c2] {
        let norm = character_inner(c, c)?.re;
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NotIrreducible { norm });
        }
    }
    let (d1, d2) = (rep1.dim(), rep2.dim());
    let order = rep1.group().order() as f64;
    let mut values = zeros(d1 * d1, d2 * d2);
    for g in 0..rep1.group().order() {
        let (a, b) = (rep1.matrix(g), rep2.matrix(g));
        for i in 0..d1 {
            for j in 0..d1 {
                let x = a[(i, j)];
                for k in 0..d2 {
                    for l in 0..d2 {
                        values[(i * d1 + j, k * d2 + l)] += x * b[(k, l)].conj();
                    }
                }
            }
        }
    }
    let values = scale_real(&values, 1.0 / order);

    let equivalent = character_inner(&c1, &c2)?.norm() > 0.5;
    let mut expected = zeros(d1 * d1, d2 * d2);
    if equivalent {
        // with rep1 W = W rep2 the value is W_ik conj(W_jl) / d; W = 1 for
        // identical matrices
        let w = intertwiner(rep1, rep2)?;
        let d = d1 as f64;
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d2 {
                    for l in 0..d2 {
                        expected[(i * d1 + j, k * d2 + l)] = w[(i, k)] * w[(j, l)].conj() / d;
                    }
                }
            }
        }
    }
    let max_residual = max_abs_entry(&(&values - &expected));
    Ok(SchurReport { dims: (d1, d2), equivalent, values, expected, max_residual })
}

pub(crate) fn max_abs_entry(m: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// One member `√d_σ D^σ_jk` of the Peter-Weyl basis.
#[derive(Clone, Debug)]
pub struct PeterWeylFunction {
    pub irrep: usize,
    pub row: usize,
    pub col: usize,
    pub function: GroupFunction,
}

pub fn peter_weyl_basis(table: &IrrepTable) -> Result<Vec<PeterWeylFunction>> {
    table.check_complete()?;
    let mut out = Vec::with_capacity(table.group.order());
    for (s, rep) in table.irreps.iter().enumerate() {
        let d = rep.dim();
        let root = (d as f64).sqrt();
        for j in 0..d {
            for k in 0..d {
                let function = GroupFunction::from_fn(table.group.clone(), |g| rep.matrix(g)[(j, k)] * root);
                out.push(PeterWeylFunction { irrep: s, row: j, col: k, function });
            }
        }
    }
    Ok(out)
}

/// Largest entry of `Gram − I` for the Peter-Weyl basis under the normalised
/// inner product `(1/|G|) Σ_g x(g) conj(y(g))`.
pub fn peter_weyl_residual(table: &IrrepTable) -> Result<f64> {
    let basis = peter_weyl_basis(table)?;
    let n = table.group.order();
    let cols: Vec<ComplexMatrix> =
        basis.iter().map(|b| faer::Mat::from_fn(n, 1, |g, _| b.function.value(g))).collect();
    let m = faer::Mat::from_fn(n, basis.len(), |g, c| cols[c][(g, 0)]);
    let gram = scale_real(&(m.adjoint() * &m), 1.0 / n as f64);
    // the adjoint puts the conjugate on the first argument; the residual is
    // symmetric under that
    Ok(max_abs_entry(&(gram - identity(basis.len()))))
}

/// `f̂(σ) = Σ_g f(g) σ(g)`, one block per irrep.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierBlocks {
    pub blocks: Vec<ComplexMatrix>,
}

pub fn fourier(table: &IrrepTable, f: &GroupFunction) -> Result<FourierBlocks> {
    if !same_group(&table.group, f.group()) {
        return Err(Error::ParentMismatch);
    }
    table.check_complete()?;
    let blocks = table
        .irreps
        .iter()
        .map(|rep| {
            let mut b = zeros(rep.dim(), rep.dim());
            for (g, &w) in f.values().iter().enumerate() {
                axpy(&mut b, w, rep.matrix(g));
            }
            b
        })
        .collect();
    Ok(FourierBlocks { blocks })
}

/// `f(g) = (1/|G|) Σ_σ d_σ tr(σ(g)* f̂(σ))`
pub fn inverse_fourier(table: &IrrepTable, blocks: &FourierBlocks) -> Result<GroupFunction> {
    table.check_complete()?;
    if blocks.blocks.len() != table.len() {
        return Err(Error::DimensionMismatch { expected: table.len(), found: blocks.blocks.len() });
    }
    for (b, rep) in blocks.blocks.iter().zip(&table.irreps) {
        if b.nrows() != rep.dim() || b.ncols() != rep.dim() {
            return Err(Error::DimensionMismatch { expected: rep.dim(), found: b.nrows() });
        }
    }
    let n = table.group.order() as f64;
    Ok(GroupFunction::from_fn(table.group.clone(), |g| {
        let mut s = ZERO;
        for (b, rep) in blocks.blocks.iter().zip(&table.irreps) {
            // tr(σ(g)* B) = Σ_ij conj(σ(g)_ij) B_ij
            let m = rep.matrix(g);
            let mut tr = ZERO;
            for j in 0..b.ncols() {
                for i in 0..b.nrows() {
                    tr += m[(i, j)].conj() * b[(i, j)];
                }
            }
            s += tr * rep.dim() as f64;
        }
        s / n
    }))
}

/// `|(1/|G|) Σ_g |f(g)|² − Σ_σ (d_σ/|G|²) ‖f̂(σ)‖²_HS|`
pub fn plancherel_residual(table: &IrrepTable, f: &GroupFunction) -> Result<f64> {
    let fb = fourier(table, f)?;
    let n = table.group.order() as f64;
    let lhs: f64 = f.values().iter().map(c64::norm_sqr).sum::<f64>() / n;
    let rhs: f64 = fb
        .blocks
        .iter()
        .zip(&table.irreps)
        .map(|(b, rep)| rep.dim() as f64 * frobenius(b).powi(2))
        .sum::<f64>()
        / (n * n);
    Ok((lhs - rhs).abs())
}

/// Properness of a representation and the split of the irreps into those
/// that occur in it and those that do not.
#[derive(Clone, Debug, Serialize)]
pub struct ProperReport {
    pub proper: bool,
    /// Rank of the flattened image matrices.
    pub image_rank: usize,
    pub multiplicities: Vec<usize>,
    /// Irreps occurring with nonzero multiplicity.
    pub present: Vec<usize>,
    /// Irreps absent from the representation.
    pub absent: Vec<usize>,
}

/// Proper iff the matrices `π(g)` are linearly independent, i.e. `μ ↦ Σ μ(g) π(g)`
/// is injective.
pub fn is_proper(pi: &UnitaryRep, tol: &Tolerance) -> Result<ProperReport> {
    let table = IrrepTable::for_group(pi.group())?;
    let d = pi.dim();
    let flat = vec_columns(pi.matrices(), d * d);
    let image_rank = rank(&flat, tol)?;
    let chi = character(pi);
    let mut multiplicities = Vec::with_capacity(table.len());
    for c in &table.characters {
        let m = character_inner(&chi, c)?.re;
        multiplicities.push(m.round().max(0.0) as usize);
    }
    let present = (0..table.len()).filter(|&s| multiplicities[s] > 0).collect();
    let absent = (0..table.len()).filter(|&s| multiplicities[s] == 0).collect();
    Ok(ProperReport { proper: image_rank == pi.group().order(), image_rank, multiplicities, present, absent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::groups::{convolve, Convention};
    use crate::numerics::random::{random_complex, seeded_rng};

    fn table(name: &str) -> std::sync::Arc<IrrepTable> {
        IrrepTable::for_group(&fixtures::by_name(name).unwrap().group).unwrap()
    }

    #[test]
    fn schur_examples() {
        let t = table("Z2");
        let r = schur_check(&t.irreps[1], &t.irreps[1]).unwrap();
        assert!((r.values[(0, 0)] - ONE).norm() < 1e-15);
        let r = schur_check(&t.irreps[0], &t.irreps[1]).unwrap();
        assert!(r.values[(0, 0)].norm() < 1e-15 && !r.equivalent);

        let t = table("S3");
        let r = schur_check(&t.irreps[2], &t.irreps[2]).unwrap();
        assert!((r.values[(0, 0)] - cr(0.5)).norm() < 1e-12);
        assert!(r.matches(1e-10));
        for row in 0..4 {
            for col in 0..4 {
                let want = if row == col { 0.5 } else { 0.0 };
                assert!((r.values[(row, col)] - cr(want)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn schur_rejects_reducible() {
        let s3 = fixtures::symmetric(3).group;
        let reg = UnitaryRep::regular(s3.clone());
        let t = table("S3");
        assert!(matches!(schur_check(&reg, &t.irreps[0]), Err(Error::NotIrreducible { .. })));
    }

    #[test]
    fn schur_on_equivalent_but_rotated_irreps() {
        let t = table("D4");
        let mut rng = seeded_rng(9);
        let u = crate::numerics::random::random_unitary(&mut rng, 2);
        let rotated = t.irreps[4].compress(&u);
        let r = schur_check(&t.irreps[4], &rotated).unwrap();
        assert!(r.equivalent && r.matches(1e-10));
    }

    #[test]
    fn peter_weyl_on_z2_is_the_two_point_transform() {
        let t = table("Z2");
        let b = peter_weyl_basis(&t).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].function.values(), &[ONE, ONE]);
        assert_eq!(b[1].function.values(), &[ONE, -ONE]);
    }

    #[test]
    fn fourier_of_delta_identity() {
        for fx in fixtures::all() {
            let t = IrrepTable::for_group(&fx.group).unwrap();
            let f = fourier(&t, &GroupFunction::delta(fx.group.clone(), 0)).unwrap();
            for (b, rep) in f.blocks.iter().zip(&t.irreps) {
                assert!(distance(b, &identity(rep.dim())) < 1e-15);
            }
        }
    }

    #[test]
    fn fourier_round_trip_plancherel_and_convolution() {
        let mut rng = seeded_rng(17);
        for fx in fixtures::all() {
            let t = IrrepTable::for_group(&fx.group).unwrap();
            let n = fx.group.order();
            let rand_fn = |rng: &mut _| {
                let v = random_complex(rng, n, 1);
                GroupFunction::new(fx.group.clone(), (0..n).map(|g| v[(g, 0)]).collect()).unwrap()
            };
            let x = rand_fn(&mut rng);
            let y = rand_fn(&mut rng);
            let back = inverse_fourier(&t, &fourier(&t, &x).unwrap()).unwrap();
            assert!(back.max_abs_diff(&x) < 1e-10, "{}", fx.name);
            assert!(plancherel_residual(&t, &x).unwrap() < 1e-10, "{}", fx.name);
            let xy = fourier(&t, &convolve(&x, &y, Convention::Measure).unwrap()).unwrap();
            let fx_ = fourier(&t, &x).unwrap();
            let fy = fourier(&t, &y).unwrap();
            for s in 0..t.len() {
                assert!(distance(&xy.blocks[s], &(&fx_.blocks[s] * &fy.blocks[s])) < 1e-10);
            }
        }
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let t = table("S3");
        let partial = IrrepTable { group: t.group.clone(), irreps: t.irreps[..2].to_vec(), characters: t.characters[..2].to_vec() };
        assert!(matches!(peter_weyl_basis(&partial), Err(Error::IncompleteTable { sum: 2, order: 6 })));
    }

    #[test]
    fn properness_examples() {
        let tol = Tolerance::default();
        let s3 = fixtures::symmetric(3);
        let reg = UnitaryRep::regular(s3.group.clone());
        let r = is_proper(&reg, &tol).unwrap();
        assert!(r.proper && r.absent.is_empty() && r.present == vec![0, 1, 2]);

        let z2 = fixtures::cyclic(2).group;
        let r = is_proper(&UnitaryRep::trivial(z2, 1), &tol).unwrap();
        assert!(!r.proper);
        assert_eq!(r.absent, vec![1]);

        let perm = UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &tol).unwrap();
        let r = is_proper(&perm, &tol).unwrap();
        assert!(!r.proper);
        assert_eq!(r.image_rank, 5);
        assert_eq!(r.absent, vec![1]);
        assert_eq!(r.multiplicities, vec![1, 0, 1]);
    }
}
