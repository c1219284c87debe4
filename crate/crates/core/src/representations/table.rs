use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupFunction};
use crate::numerics::matrix::*;
use crate::numerics::random::{normal, seeded_rng};
use crate::numerics::{c64, hermitian_eig, Tolerance};

use super::decompose::{split_irreducible, MAX_RESAMPLES};
use super::unitary::{character, UnitaryRep};

const REGULAR_SEED: u64 = 0x9e37_79b9_7f4a_7c15;
const CANONICAL_SEED: u64 = 0x2545_f491_4f6c_dd1d;
/// Two character values closer than this are the same value.
const CHARACTER_EQ: f64 = 1e-6;

/// A complete set of pairwise inequivalent irreducible unitary
/// representations of a finite group.
///
/// Irreps are sorted by dimension, then by character values compared
/// element by element in descending order, so the trivial representation is
/// always first. Each irrep is put in a canonical basis, so equal groups give
/// equal tables.
#[derive(Clone, Debug)]
pub struct IrrepTable {
    pub group: Arc<FiniteGroup>,
    pub irreps: Vec<UnitaryRep>,
    pub characters: Vec<GroupFunction>,
}

type Cache = RwLock<HashMap<Vec<Vec<usize>>, Arc<IrrepTable>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl IrrepTable {
    /// Memoized table for `group`, computed on first use with the default
    /// tolerance.
    pub fn for_group(group: &Arc<FiniteGroup>) -> Result<Arc<IrrepTable>> {
        if let Some(t) = cache().read().expect("irrep cache poisoned").get(group.table()) {
            return Ok(t.clone());
        }
        let table = Arc::new(IrrepTable::compute(group, &Tolerance::default())?);
        let mut w = cache().write().expect("irrep cache poisoned");
        Ok(w.entry(group.table().to_vec()).or_insert(table).clone())
    }

    /// Decompose the regular representation and keep one canonical copy of
    /// each character.
    pub fn compute(group: &Arc<FiniteGroup>, tol: &Tolerance) -> Result<IrrepTable> {
        let regular = UnitaryRep::regular(group.clone());
        let mut rng = seeded_rng(REGULAR_SEED);
        let components = split_irreducible(&regular, &mut rng, tol)?;
        let mut found: Vec<(UnitaryRep, GroupFunction)> = Vec::new();
        for c in components {
            if !found.iter().any(|(_, chi)| characters_equal(chi, &c.character)) {
                let rep = canonical_basis(&c.rep, tol)?;
                let chi = character(&rep);
                found.push((rep, chi));
            }
        }
        found.sort_by(|a, b| a.0.dim().cmp(&b.0.dim()).then_with(|| compare_characters_desc(&a.1, &b.1)));
        let (irreps, characters): (Vec<_>, Vec<_>) = found.into_iter().unzip();
        let table = IrrepTable { group: group.clone(), irreps, characters };
        table.check_complete()?;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(UnitaryRep::dim).collect()
    }

    pub fn check_complete(&self) -> Result<()> {
        let sum: usize = self.irreps.iter().map(|r| r.dim() * r.dim()).sum();
        if sum != self.group.order() {
            return Err(Error::IncompleteTable { sum, order: self.group.order() });
        }
        Ok(())
    }

    /// Index of the irrep whose character equals `chi`.
    pub fn match_character(&self, chi: &GroupFunction) -> Option<usize> {
        self.characters.iter().position(|c| characters_equal(c, chi))
    }
}

fn characters_equal(a: &GroupFunction, b: &GroupFunction) -> bool {
    a.max_abs_diff(b) < CHARACTER_EQ
}

fn compare_characters_desc(a: &GroupFunction, b: &GroupFunction) -> Ordering {
    for (x, y) in a.values().iter().zip(b.values()) {
        if (x.re - y.re).abs() > CHARACTER_EQ {
            return y.re.partial_cmp(&x.re).unwrap_or(Ordering::Equal);
        }
        if (x.im - y.im).abs() > CHARACTER_EQ {
            return y.im.partial_cmp(&x.im).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// Put an irreducible representation into a basis that depends only on its
/// equivalence class: the eigenbasis of a fixed generic Hermitian element of
/// its image, with phases chosen so the first row of a fixed generic element
/// is real and positive.
fn canonical_basis(rep: &UnitaryRep, tol: &Tolerance) -> Result<UnitaryRep> {
    let d = rep.dim();
    if d == 1 {
        // one-dimensional: snap values onto the unit circle
        let mats = rep.matrices().iter().map(|m| diag(&[m[(0, 0)] / m[(0, 0)].norm()])).collect();
        return Ok(exact_identity(UnitaryRep::from_parts(rep.group().clone(), mats)));
    }
    let mut rng = seeded_rng(CANONICAL_SEED);
    for _ in 0..MAX_RESAMPLES {
        let mut k = zeros(d, d);
        let mut probe = zeros(d, d);
        for m in rep.matrices() {
            let (a, b) = (normal(&mut rng), normal(&mut rng));
            let herm = scale_real(&(m + m.adjoint()), 0.5);
            let skew = scale(&(m - m.adjoint()), c64::new(0.0, 0.5));
            k += scale_real(&herm, a) + scale_real(&skew, b);
            let (p, q) = (normal(&mut rng), normal(&mut rng));
            axpy(&mut probe, c64::new(p, q), m);
        }
        let eig = hermitian_eig(&k, tol)?;
        let spread = eig.values.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        if eig.values.windows(2).any(|w| w[1] - w[0] < 1e-6 * spread) {
            continue;
        }
        let v = &eig.vectors;
        let probe = v.adjoint() * &probe * v;
        if (1..d).any(|j| probe[(0, j)].norm() < 1e-6 * frobenius(&probe)) {
            continue;
        }
        let phases: Vec<c64> =
            (0..d).map(|j| if j == 0 { ONE } else { probe[(0, j)].conj() / probe[(0, j)].norm() }).collect();
        // (V D)* P (V D) has (0, j) entry P'_0j D_jj = |P'_0j|
        let vd = v * diag(&phases);
        return Ok(exact_identity(rep.compress(&vd)));
    }
    Err(Error::DecompositionFailed("no generic element found for the canonical basis".into()))
}

fn exact_identity(rep: UnitaryRep) -> UnitaryRep {
    let e = rep.group().identity();
    let mut mats = rep.matrices().to_vec();
    mats[e] = identity(rep.dim());
    UnitaryRep::from_parts(rep.group().clone(), mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::representations::unitary::character_inner;

    #[test]
    fn dims_of_fixture_tables() {
        let expect: [(&str, &[usize]); 8] = [
            ("Z2", &[1, 1]),
            ("Z4", &[1, 1, 1, 1]),
            ("Z6", &[1, 1, 1, 1, 1, 1]),
            ("S3", &[1, 1, 2]),
            ("D4", &[1, 1, 1, 1, 2]),
            ("Q8", &[1, 1, 1, 1, 2]),
            ("A4", &[1, 1, 1, 3]),
            ("S4", &[1, 1, 2, 3, 3]),
        ];
        for (name, dims) in expect {
            let fx = fixtures::by_name(name).unwrap();
            let t = IrrepTable::for_group(&fx.group).unwrap();
            assert_eq!(t.dims(), dims, "{name}");
        }
    }

    #[test]
    fn trivial_first_and_characters_orthonormal() {
        for fx in fixtures::all() {
            let t = IrrepTable::for_group(&fx.group).unwrap();
            assert!(t.characters[0].values().iter().all(|v| (v - ONE).norm() < 1e-12));
            for (a, ca) in t.characters.iter().enumerate() {
                for (b, cb) in t.characters.iter().enumerate() {
                    let ip = character_inner(ca, cb).unwrap();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - cr(want)).norm() < 1e-10, "{} {a} {b}", fx.name);
                }
            }
        }
    }

    #[test]
    fn canonical_form_independent_of_starting_basis() {
        let s4 = fixtures::symmetric(4).group;
        let t = IrrepTable::for_group(&s4).unwrap();
        let mut rng = seeded_rng(42);
        for rep in &t.irreps {
            let u = crate::numerics::random::random_unitary(&mut rng, rep.dim());
            let moved = rep.compress(&u);
            let canon = canonical_basis(&moved, &Tolerance::default()).unwrap();
            for g in 0..s4.order() {
                assert!(distance(canon.matrix(g), rep.matrix(g)) < 1e-9, "dim {} g {g} {:?} {:?}", rep.dim(), canon.matrix(g), rep.matrix(g));
            }
        }
    }

    #[test]
    fn recomputation_is_bitwise_stable() {
        let g = fixtures::alternating4().group;
        let a = IrrepTable::compute(&g, &Tolerance::default()).unwrap();
        let b = IrrepTable::compute(&g, &Tolerance::default()).unwrap();
        for (x, y) in a.irreps.iter().zip(&b.irreps) {
            assert_eq!(x.matrices(), y.matrices());
        }
    }
}
