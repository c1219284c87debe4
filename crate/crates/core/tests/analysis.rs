use ncgalois::algebras::StarAlgebra;
use ncgalois::crossed::{covariance_check, crossed_product, Action};
use ncgalois::fixtures;
use ncgalois::modular::{kms_check, modular_flow, modular_report};
use ncgalois::ncprob::{
    average_state, conditional_expectation, convergence_check, martingale_from, verify_cond_exp_axioms,
};
use ncgalois::numerics::matrix::*;
use ncgalois::numerics::random::{random_complex, random_density, seeded_rng};
use ncgalois::{Filtration, IrrepTable, State, Tolerance, UnitaryRep};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn s3_permutation() -> UnitaryRep {
    let s3 = fixtures::symmetric(3);
    UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modular_relations_hold_for_random_faithful_states(n in 2usize..5, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let phi = State::new(random_density(&mut rng, n)).unwrap();
        prop_assume!(phi.min_eigenvalue() > 1e-3);
        let r = modular_report(&StarAlgebra::full(n), &phi, seed, &tol()).unwrap();
        prop_assert!(r.violations.is_empty(), "{:?}", r.violations);
        prop_assert_eq!(r.gns_dim, n * n);
    }

    #[test]
    fn modular_flow_is_a_one_parameter_group(seed in any::<u64>(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(&mut rng, 3);
        prop_assume!(hermitian_eigenvalues_min(&rho) > 1e-3);
        let a = random_complex(&mut rng, 3, 3);
        let once = modular_flow(&rho, s + t, &a, &tol()).unwrap();
        let twice = modular_flow(&rho, s, &modular_flow(&rho, t, &a, &tol()).unwrap(), &tol()).unwrap();
        prop_assert!(distance(&once, &twice) < 1e-9 * frobenius(&a).max(1.0));
        let b = random_complex(&mut rng, 3, 3);
        prop_assert!(kms_check(&rho, &a, &b, 1.0, &tol()).unwrap() < 1e-9);
    }

    #[test]
    fn conditional_expectations_satisfy_their_axioms(seed in any::<u64>()) {
        let rep = s3_permutation();
        let psi = State::new(random_density(&mut seeded_rng(seed), 3)).unwrap();
        let phi = average_state(&psi, &rep).unwrap();
        for h in rep.group().enumerate_subgroups().unwrap() {
            let r = verify_cond_exp_axioms(&rep, &h, &phi, 20, seed, &tol()).unwrap();
            prop_assert!(r.all_passed(), "{:?}", r.axioms);
        }
    }
}

fn hermitian_eigenvalues_min(m: &ComplexMatrix) -> f64 {
    ncgalois::numerics::hermitian_eigenvalues(m).unwrap()[0]
}

#[test]
fn conditional_expectation_onto_the_whole_group_averages() {
    let rep = s3_permutation();
    let e11 = unit(3, 0, 0);
    let whole = rep.group().whole();
    let e = conditional_expectation(&e11, &rep, &whole);
    // average of the three diagonal units
    assert!(distance(&e, &scale_real(&identity(3), 1.0 / 3.0)) < 1e-14);
}

#[test]
fn martingale_moments_increase_towards_the_source() {
    let s3 = fixtures::symmetric(3).group;
    let rep = s3_permutation();
    let a3 = s3.enumerate_subgroups().unwrap().into_iter().find(|h| h.order() == 3).unwrap();
    let chain = vec![s3.whole(), a3, s3.trivial_subgroup()];
    let filtration = Filtration::new(&StarAlgebra::full(3), &rep, chain, &tol()).unwrap();
    let mart = martingale_from(&unit(3, 0, 0), &filtration, &rep).unwrap();
    assert!(mart.tower_residual(&rep) < 1e-12);
    let report = convergence_check(&mart, &State::tracial(3), &rep);
    assert!(report.violations.is_empty());
    assert!(report.nondecreasing && report.ends_at_trivial);
    let want = [1.0 / 9.0, 1.0 / 9.0, 1.0 / 3.0];
    for (got, want) in report.moments.iter().zip(want) {
        assert!((got - want).abs() < 1e-14, "{:?}", report.moments);
    }
}

#[test]
fn decreasing_chain_is_required() {
    let s3 = fixtures::symmetric(3).group;
    let rep = s3_permutation();
    let chain = vec![s3.trivial_subgroup(), s3.whole()];
    assert!(Filtration::new(&StarAlgebra::full(3), &rep, chain, &tol()).is_err());
}

#[test]
fn crossed_products_of_inner_actions_are_covariant() {
    for fx in fixtures::all().into_iter().take(7) {
        let table = IrrepTable::for_group(&fx.group).unwrap();
        let irrep = table.irreps.last().unwrap().clone();
        let d = irrep.dim();
        let cp = crossed_product(&StarAlgebra::full(d), Action::Ad(irrep), &tol()).unwrap();
        assert!(covariance_check(&cp) < 1e-10, "{}", fx.name);
        assert_eq!(cp.algebra.dim(), fx.group.order() * d * d, "{}", fx.name);
        assert!(cp.bicommutant.holds, "{}", fx.name);
    }
}

#[test]
fn non_invariant_base_is_rejected() {
    let z2 = fixtures::cyclic(2).group;
    let x = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let rep = UnitaryRep::new(z2, vec![identity(2), x], &tol()).unwrap();
    let base = StarAlgebra::from_matrices(2, &[identity(2), diag_real(&[1.0, 2.0])], &tol()).unwrap();
    assert!(crossed_product(&base, Action::Ad(rep.clone()), &tol()).is_ok());
    let off = StarAlgebra::from_matrices(2, &[identity(2), from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])], &tol()).unwrap();
    assert!(crossed_product(&off, Action::Ad(rep), &tol()).is_err());
}
