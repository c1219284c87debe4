use ncgalois::algebras::{
    algebra_from_generators, block_structure, center, commutant, fixed_point_algebra, relative_commutant, StarAlgebra,
};
use ncgalois::fixtures;
use ncgalois::galois::{galois_map, CommutantKind};
use ncgalois::numerics::matrix::*;
use ncgalois::numerics::random::{random_complex, random_unitary, seeded_rng};
use ncgalois::numerics::{nullspace, rank, range_scaled};
use ncgalois::representations::decompose;
use ncgalois::{Tolerance, UnitaryRep};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

/// `W (⊕ M_s ⊗ 1_m) W*` generated by two random elements.
fn conjugated_blocks(blocks: &[(usize, usize)], seed: u64) -> StarAlgebra {
    let mut rng = seeded_rng(seed);
    let n: usize = blocks.iter().map(|&(s, m)| s * m).sum();
    let w = random_unitary(&mut rng, n);
    let gens: Vec<ComplexMatrix> = (0..2)
        .map(|_| {
            let parts: Vec<ComplexMatrix> =
                blocks.iter().map(|&(s, m)| kron(&random_complex(&mut rng, s, s), &identity(m))).collect();
            conjugate_by(&w, &block_diag(&parts))
        })
        .collect();
    algebra_from_generators(&gens, n, &tol()).unwrap()
}

fn block_list() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((1usize..4, 1usize..3), 1..4).prop_filter("ambient at most 9", |b| {
        b.iter().map(|&(s, m)| s * m).sum::<usize>() <= 9
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn block_algebra_dimensions(blocks in block_list(), seed in any::<u64>()) {
        let a = conjugated_blocks(&blocks, seed);
        let dim: usize = blocks.iter().map(|&(s, _)| s * s).sum();
        let comm: usize = blocks.iter().map(|&(_, m)| m * m).sum();
        prop_assert_eq!(a.dim(), dim);
        let c = commutant(&a, &tol()).unwrap();
        prop_assert_eq!(c.dim(), comm);
        prop_assert!(commutant(&c, &tol()).unwrap().equals(&a, &tol()).unwrap());
        prop_assert_eq!(center(&a, &tol()).unwrap().dim(), blocks.len());
        let mut found = block_structure(&a, &tol()).unwrap().summary();
        let mut want = blocks.clone();
        found.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(found, want);
    }

    #[test]
    fn rank_plus_nullity(rows in 1usize..12, cols in 1usize..12, r in 0usize..6, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let r = r.min(rows).min(cols);
        let a = &random_complex(&mut rng, rows, r) * &random_complex(&mut rng, r, cols);
        let k = nullspace(&a, &tol()).unwrap();
        prop_assert_eq!(rank(&a, &tol()).unwrap(), r);
        prop_assert_eq!(k.dim(), cols - r);
        prop_assert!(k.dim() == 0 || frobenius(&(&a * k.basis())) < 1e-9);
    }
}

#[test]
fn span_of_a_star_closed_basis_and_its_adjoints_keeps_its_rank() {
    // orthonormal bases of invariant algebras doubled with their adjoints give
    // highly degenerate spectra; the rank must still come out exact
    let g = fixtures::alternating4().group;
    let rep = UnitaryRep::regular(g.clone());
    let h = g.subgroup(&[0, 3]).unwrap();
    let f = fixed_point_algebra(&StarAlgebra::full(12), &rep, &h, &tol()).unwrap();
    assert_eq!(f.dim(), 72);
    let mut cols = f.basis_matrices();
    cols.extend(f.basis_matrices().iter().map(adjoint));
    let span = range_scaled(&vec_columns(&cols, 144), &tol(), 1.0).unwrap();
    assert_eq!(span.dim(), 72);
    assert_eq!(relative_commutant(&f, &StarAlgebra::full(12), &tol()).unwrap().dim(), 2);
}

#[test]
fn fixed_algebra_dimension_matches_restricted_multiplicities() {
    for fx in fixtures::all().into_iter().take(6) {
        let rep = UnitaryRep::regular(fx.group.clone());
        let n = rep.dim();
        for h in fx.group.enumerate_subgroups().unwrap() {
            let f = fixed_point_algebra(&StarAlgebra::full(n), &rep, &h, &tol()).unwrap();
            // the regular rep restricted to H is |G|/|H| copies of H's regular rep
            assert_eq!(f.dim(), n * n / h.order(), "{} |H| = {}", fx.name, h.order());
        }
    }
}

#[test]
fn fixed_algebra_of_permutation_action_from_decomposition() {
    let s3 = fixtures::symmetric(3);
    let rep = UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &tol()).unwrap();
    let d = decompose(&rep, 4, &tol()).unwrap();
    let f = fixed_point_algebra(&StarAlgebra::full(3), &rep, &s3.group.whole(), &tol()).unwrap();
    assert_eq!(f.dim(), d.commutant_dim());
    assert_eq!(f.dim(), 2);
}

#[test]
fn inner_correspondence_is_injective_for_small_regular_reps() {
    for name in ["Z4", "S3", "D4", "Q8", "A4"] {
        let g = fixtures::by_name(name).unwrap().group;
        let rep = UnitaryRep::regular(g.clone());
        let r = galois_map(&StarAlgebra::full(rep.dim()), &rep, CommutantKind::Inner, &tol()).unwrap();
        assert!(r.injective && r.anti_monotone, "{name}");
        assert!(r.rows.iter().all(|row| row.closure_verified), "{name}");
        assert_eq!(r.distinct_fixed_algebras, r.rows.len(), "{name}");
    }
}
