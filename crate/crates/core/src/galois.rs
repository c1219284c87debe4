//! Subgroups versus fixed-point algebras: for an action `Ad π` of a finite
//! group on a matrix algebra `M`, compute `H ↦ M^H` over the whole subgroup
//! lattice and check the correspondence properties.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::{commutant, fixed_point_algebra, invariance_residual, relative_commutant, StarAlgebra};
use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::numerics::matrix::*;
use crate::numerics::{Subspace, Tolerance};
use crate::representations::{is_proper, IrrepTable, ProperReport, UnitaryRep};

/// Which commutant closes fixed algebras.
///
/// `Inner`: the action is implemented by unitaries inside `M`, and the check
/// is `(M^H)^≀≀ = M^H` with relative commutants `X^≀ = X′ ∩ M`.
/// `Spatial`: the unitaries act on the underlying space but need not lie in
/// `M`; the check uses ordinary commutants, `(M^H)″ ∩ M = M^H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommutantKind {
    Inner,
    Spatial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl Violation {
    pub fn new(check: &str, detail: impl Into<String>) -> Self {
        Violation { check: check.to_string(), detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisRow {
    pub subgroup: Subgroup,
    pub fixed_dim: usize,
    /// Rows with equal fixed algebras share an id.
    pub fixed_id: usize,
    pub closure_verified: bool,
    pub closure_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub group_order: usize,
    pub action_dim: usize,
    pub ambient_dim: usize,
    pub kind: CommutantKind,
    pub rows: Vec<GaloisRow>,
    /// Subgroup equivalence classes as row indices.
    pub equivalence_classes: Vec<Vec<usize>>,
    pub distinct_fixed_algebras: usize,
    pub injective: bool,
    pub anti_monotone: bool,
    /// Largest containment residual over inclusions `H1 ⊆ H2`.
    pub anti_monotone_residual: f64,
    pub proper: ProperReport,
    /// Pairs of distinct subgroups (row indices) with equal fixed algebras.
    pub collisions: Vec<(usize, usize)>,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub fixed_algebras: Vec<StarAlgebra>,
}

/// Run the correspondence over every subgroup of the acting group.
pub fn galois_map(m: &StarAlgebra, pi: &UnitaryRep, kind: CommutantKind, tol: &Tolerance) -> Result<GaloisReport> {
    if pi.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), found: pi.dim() });
    }
    let group = pi.group().clone();
    let all: Vec<&ComplexMatrix> = pi.matrices().iter().collect();
    let residual = invariance_residual(m, &all);
    if residual > tol.threshold(1.0) * 1e3 {
        return Err(Error::NotInvariantAlgebra { residual });
    }
    let subgroups = group.enumerate_subgroups()?;

    let computed: Vec<(StarAlgebra, f64)> = subgroups
        .par_iter()
        .map(|h| {
            let fixed = fixed_point_algebra(m, pi, h, tol)?;
            let closed = match kind {
                CommutantKind::Inner => {
                    let rc = relative_commutant(&fixed, m, tol)?;
                    relative_commutant(&rc, m, tol)?
                }
                CommutantKind::Spatial => commutant(&commutant(&fixed, tol)?, tol)?.intersection(m, tol)?,
            };
            let r = fixed.equality_residual(&closed)?.unwrap_or(1.0);
            Ok((fixed, r))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let threshold = tol.threshold(1.0);

    // intern fixed algebras: compare only within equal dimension
    let mut ids = Vec::with_capacity(computed.len());
    let mut reps: Vec<usize> = Vec::new();
    for (i, (f, _)) in computed.iter().enumerate() {
        let mut found = None;
        for (id, &r) in reps.iter().enumerate() {
            let other = &computed[r].0;
            if other.dim() == f.dim() && f.equals(other, tol)? {
                found = Some(id);
                break;
            }
        }
        ids.push(found.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }

    let rows: Vec<GaloisRow> = subgroups
        .iter()
        .zip(&computed)
        .zip(&ids)
        .map(|((h, (f, r)), &id)| GaloisRow {
            subgroup: h.clone(),
            fixed_dim: f.dim(),
            fixed_id: id,
            closure_verified: *r <= threshold,
            closure_residual: *r,
        })
        .collect();
    for row in rows.iter().filter(|r| !r.closure_verified) {
        violations.push(Violation::new(
            "closure",
            format!("fixed algebra of {} differs from its double commutant (residual {:.3e})", row.subgroup, row.closure_residual),
        ));
    }

    // anti-monotonicity over every inclusion
    let pairs: Vec<(usize, usize)> = (0..subgroups.len())
        .flat_map(|a| (0..subgroups.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && subgroups[a].is_subgroup_of(&subgroups[b]))
        .collect();
    let residuals: Vec<f64> = pairs
        .par_iter()
        .map(|&(small, big)| computed[small].0.containment_residual(&computed[big].0))
        .collect::<Result<Vec<_>>>()?;
    let mut anti_monotone_residual = 0.0f64;
    for (&(small, big), &r) in pairs.iter().zip(&residuals) {
        anti_monotone_residual = anti_monotone_residual.max(r);
        if r > threshold {
            violations.push(Violation::new(
                "anti_monotone",
                format!("{} ⊆ {} but the fixed algebras are not reversed (residual {r:.3e})", subgroups[small], subgroups[big]),
            ));
        }
    }
    let anti_monotone = anti_monotone_residual <= threshold;

    // bottom: the trivial subgroup fixes everything
    if let Some(pos) = subgroups.iter().position(Subgroup::is_trivial) {
        if !computed[pos].0.equals(m, tol)? {
            violations.push(Violation::new("bottom", "fixed algebra of the trivial subgroup is not the whole algebra"));
        }
    }

    let mut collisions = Vec::new();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if rows[a].fixed_id == rows[b].fixed_id {
                collisions.push((a, b));
            }
        }
    }
    let injective = collisions.is_empty();

    let proper = is_proper(pi, tol)?;
    let table = IrrepTable::for_group(&group)?;
    let present: Vec<&UnitaryRep> = proper.present.iter().map(|&s| &table.irreps[s]).collect();
    let equivalence_classes = classes_by_span(&subgroups, &present, tol)?;

    // equal within classes; distinct across classes when M is everything
    for class in &equivalence_classes {
        if class.iter().any(|&r| rows[r].fixed_id != rows[class[0]].fixed_id) {
            violations.push(Violation::new(
                "equivalence",
                format!("equivalent subgroups {:?} have different fixed algebras", class.iter().map(|&r| rows[r].subgroup.members().to_vec()).collect::<Vec<_>>()),
            ));
        }
    }
    if m.is_full() {
        for (i, ca) in equivalence_classes.iter().enumerate() {
            for cb in &equivalence_classes[i + 1..] {
                if rows[ca[0]].fixed_id == rows[cb[0]].fixed_id {
                    violations.push(Violation::new(
                        "injectivity",
                        format!("inequivalent subgroups {} and {} share a fixed algebra", rows[ca[0]].subgroup, rows[cb[0]].subgroup),
                    ));
                }
            }
        }
    }
    if proper.proper && m.is_full() && !injective {
        violations.push(Violation::new("injectivity", "proper action on a full algebra but H ↦ M^H is not injective"));
    }

    Ok(GaloisReport {
        group_order: group.order(),
        action_dim: pi.dim(),
        ambient_dim: m.dim(),
        kind,
        rows,
        equivalence_classes,
        distinct_fixed_algebras: reps.len(),
        injective,
        anti_monotone,
        anti_monotone_residual,
        proper,
        collisions,
        violations,
        fixed_algebras: computed.into_iter().map(|c| c.0).collect(),
    })
}

/// Partition of subgroups (indices into `subgroups`): `H1 ~ H2` iff
/// `span σ(H1) = span σ(H2)` where `σ` is the direct sum of the listed
/// irreps.
///
/// The spans are compared jointly rather than irrep by irrep: in a
/// one-dimensional irrep every subgroup spans `C`, so the separate comparison
/// would identify `{e}` with every subgroup of an abelian group, while the
/// joint span is exactly `span π(H)` and determines the fixed algebra.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupEquivalence {
    pub classes: Vec<Vec<usize>>,
}

pub fn subgroup_equivalence(subgroups: &[Subgroup], irreps: &[&UnitaryRep], tol: &Tolerance) -> Result<SubgroupEquivalence> {
    Ok(SubgroupEquivalence { classes: classes_by_span(subgroups, irreps, tol)? })
}

fn classes_by_span(subgroups: &[Subgroup], irreps: &[&UnitaryRep], tol: &Tolerance) -> Result<Vec<Vec<usize>>> {
    let len: usize = irreps.iter().map(|s| s.dim() * s.dim()).sum();
    let flat = |g: usize| {
        let mut v = Vec::with_capacity(len);
        for s in irreps {
            let m = s.matrix(g);
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    v.push(m[(i, j)]);
                }
            }
        }
        v
    };
    let spans: Vec<Subspace> = subgroups
        .iter()
        .map(|h| {
            let cols: Vec<Vec<_>> = h.members().iter().map(|&g| flat(g)).collect();
            let m = faer::Mat::from_fn(len, cols.len(), |i, j| cols[j][i]);
            Subspace::span(&m, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if spans[i].equals(&spans[class[0]], tol)? {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    Ok(classes)
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub fixed_dim: usize,
    pub relative_commutant_dim: usize,
}

/// `(M^G)′ ∩ M = C·1`.
pub fn is_minimal_action(m: &StarAlgebra, pi: &UnitaryRep, tol: &Tolerance) -> Result<MinimalityReport> {
    let fixed = fixed_point_algebra(m, pi, &pi.group().whole(), tol)?;
    let rc = relative_commutant(&fixed, m, tol)?;
    Ok(MinimalityReport { minimal: rc.dim() == 1, fixed_dim: fixed.dim(), relative_commutant_dim: rc.dim() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn z2_diagonal_action() {
        let z2 = fixtures::cyclic(2).group;
        let rep = UnitaryRep::new(z2, vec![identity(2), diag_real(&[1.0, -1.0])], &t()).unwrap();
        let r = galois_map(&StarAlgebra::full(2), &rep, CommutantKind::Inner, &t()).unwrap();
        assert_eq!(r.rows.iter().map(|x| x.fixed_dim).collect::<Vec<_>>(), vec![4, 2]);
        assert!(r.injective && r.anti_monotone && r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn s3_regular_is_injective() {
        let s3 = fixtures::symmetric(3).group;
        let reg = UnitaryRep::regular(s3);
        let r = galois_map(&StarAlgebra::full(6), &reg, CommutantKind::Inner, &t()).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.distinct_fixed_algebras, 6);
        assert!(r.proper.proper && r.injective && r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.rows.iter().all(|x| x.closure_verified));
        // pairwise distinctness from scratch
        for a in 0..6 {
            for b in a + 1..6 {
                assert!(!r.fixed_algebras[a].equals(&r.fixed_algebras[b], &t()).unwrap());
            }
        }
    }

    #[test]
    fn s3_permutation_rep_hides_the_sign() {
        let s3 = fixtures::symmetric(3);
        let p = UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &t()).unwrap();
        let r = galois_map(&StarAlgebra::full(3), &p, CommutantKind::Inner, &t()).unwrap();
        assert!(!r.proper.proper);
        assert_eq!(r.proper.absent, vec![1]);
        assert!(r.anti_monotone && r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn equivalence_examples() {
        let s3 = fixtures::symmetric(3).group;
        let subs = s3.enumerate_subgroups().unwrap();
        let table = IrrepTable::for_group(&s3).unwrap();
        let all: Vec<&UnitaryRep> = table.irreps.iter().collect();
        let e = subgroup_equivalence(&subs, &all, &t()).unwrap();
        assert_eq!(e.classes.len(), subs.len());
        let triv = subgroup_equivalence(&subs, &all[..1], &t()).unwrap();
        assert_eq!(triv.classes.len(), 1);
        let two = subgroup_equivalence(&subs[1..4], &all[2..], &t()).unwrap();
        assert_eq!(two.classes.len(), 3);
        // in the sign irrep alone every span is C
        let sign = subgroup_equivalence(&subs, &all[1..2], &t()).unwrap();
        assert_eq!(sign.classes.len(), 1);
    }

    #[test]
    fn equivalence_classes_are_singletons_with_every_irrep() {
        for fx in fixtures::all() {
            let subs = fx.group.enumerate_subgroups().unwrap();
            let table = IrrepTable::for_group(&fx.group).unwrap();
            let all: Vec<&UnitaryRep> = table.irreps.iter().collect();
            let e = subgroup_equivalence(&subs, &all, &t()).unwrap();
            assert_eq!(e.classes.len(), subs.len(), "{}", fx.name);
        }
    }

    #[test]
    fn minimality_examples() {
        // Ad of the Pauli matrices is an action of Z2 x Z2 on M2; it is
        // implemented by the 2-dimensional irrep of D4, whose image is
        // {±1, ±X, ±Z, ±XZ}
        let d4 = fixtures::dihedral(4).group;
        let table = IrrepTable::for_group(&d4).unwrap();
        let r = is_minimal_action(&StarAlgebra::full(2), &table.irreps[4], &t()).unwrap();
        assert!(!r.minimal && r.fixed_dim == 1 && r.relative_commutant_dim == 4);

        let s3 = fixtures::symmetric(3);
        let p = UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &t()).unwrap();
        let r = is_minimal_action(&StarAlgebra::full(3), &p, &t()).unwrap();
        // span{1, all-ones}′ is the 1 + 4 dimensional algebra of the permutations
        assert!(!r.minimal && r.fixed_dim == 2 && r.relative_commutant_dim == 5);

        let z1 = fixtures::cyclic(1).group;
        let triv = UnitaryRep::trivial(z1, 2);
        let r = is_minimal_action(&StarAlgebra::diagonal(2), &triv, &t()).unwrap();
        assert!(!r.minimal && r.relative_commutant_dim == 2);
    }
}
