//! Non-commutative probability on matrix algebras: states as densities,
//! Haar-averaged conditional expectations onto fixed-point algebras,
//! independence, subgroup filtrations and martingales.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::{average_conjugates, fixed_point_algebra, StarAlgebra};
use crate::error::{Error, Result};
use crate::galois::Violation;
use crate::groups::Subgroup;
use crate::numerics::matrix::*;
use crate::numerics::random::{random_complex, seeded_rng};
use crate::numerics::{c64, hermitian_eigenvalues, inverse, Tolerance};
use crate::representations::UnitaryRep;

/// Eigenvalue floor for faithfulness.
pub const FAITHFUL_EPS: f64 = 1e-10;
/// Pass threshold for the conditional-expectation axioms.
pub const AXIOM_EPS: f64 = 1e-9;

/// A state `φ(A) = tr(ρA)` given by its density.
#[derive(Clone, Debug)]
pub struct State {
    density: ComplexMatrix,
    min_eigenvalue: f64,
}

impl State {
    /// Validate trace one, Hermiticity and positivity.
    pub fn new(density: ComplexMatrix) -> Result<Self> {
        if !is_square(&density) {
            return Err(Error::InvalidState("density is not square".into()));
        }
        let tr = trace(&density);
        if (tr - ONE).norm() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {} + {}i, not 1", tr.re, tr.im)));
        }
        let h = hermitian_residual(&density);
        if h > 1e-10 {
            return Err(Error::InvalidState(format!("density is not Hermitian (residual {h:.3e})")));
        }
        let ev = hermitian_eigenvalues(&density)?;
        let min_eigenvalue = ev.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -1e-12 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eigenvalue:.3e}")));
        }
        Ok(State { density, min_eigenvalue })
    }

    /// Normalised trace.
    pub fn tracial(n: usize) -> Self {
        State { density: scale_real(&identity(n), 1.0 / n as f64), min_eigenvalue: 1.0 / n as f64 }
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    pub fn dim(&self) -> usize {
        self.density.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn is_faithful(&self) -> bool {
        self.min_eigenvalue > FAITHFUL_EPS
    }

    /// `φ(A) = tr(ρA)`
    pub fn apply(&self, a: &ComplexMatrix) -> c64 {
        let mut s = ZERO;
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                s += self.density[(i, k)] * a[(k, i)];
            }
        }
        s
    }

    /// Largest `|φ(U A U*) − φ(A)|` over the given unitaries and matrix units.
    pub fn invariance_residual(&self, mats: &[&ComplexMatrix]) -> f64 {
        let mut worst = 0.0f64;
        for u in mats {
            // invariance of tr(ρ ·) under Ad u means u* ρ u = ρ
            worst = worst.max(distance(&(u.adjoint() * &self.density * *u), &self.density));
        }
        worst
    }
}

/// `(M, φ)` with `φ` faithful.
#[derive(Clone, Debug)]
pub struct NCProbSpace {
    pub algebra: StarAlgebra,
    pub state: State,
}

impl NCProbSpace {
    pub fn new(algebra: StarAlgebra, state: State) -> Result<Self> {
        if state.dim() != algebra.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: algebra.ambient_dim(), found: state.dim() });
        }
        if !state.is_faithful() {
            return Err(Error::NotFaithful { min_eigenvalue: state.min_eigenvalue() });
        }
        Ok(NCProbSpace { algebra, state })
    }
}

/// Density `(1/|G|) Σ_g U_g* ρ U_g`, the state `φ ∘ (average of Ad U_g)`.
pub fn average_state(psi: &State, rep: &UnitaryRep) -> Result<State> {
    if psi.dim() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: psi.dim() });
    }
    let mut rho = zeros(psi.dim(), psi.dim());
    for u in rep.matrices() {
        rho += u.adjoint() * psi.density() * u;
    }
    let rho = scale_real(&rho, 1.0 / rep.group().order() as f64);
    // symmetrize away rounding before validation
    State::new(scale_real(&(&rho + rho.adjoint()), 0.5))
}

/// `E_H(A) = (1/|H|) Σ_{h ∈ H} U_h A U_h*`
pub fn conditional_expectation(a: &ComplexMatrix, rep: &UnitaryRep, h: &Subgroup) -> ComplexMatrix {
    average_conjugates(a, &rep.restricted(h))
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub name: String,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CondExpReport {
    pub subgroup: Subgroup,
    pub panel_size: usize,
    pub axioms: Vec<AxiomResult>,
    pub violations: Vec<Violation>,
}

impl CondExpReport {
    pub fn axiom(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

/// Names of the checked properties, in report order.
pub const AXIOMS: [&str; 5] = ["contraction", "idempotence", "state_preservation", "bimodule", "schwarz"];

/// Evaluate `E_H` on the matrix units and `random` seeded random matrices of
/// unit Frobenius norm:
/// contraction `‖E(A)‖ ≤ ‖A‖` in operator norm, identity on `M^H` (and
/// `E∘E = E`), `φ∘E = φ`, the `M^H`-bimodule property and the Schwarz
/// inequality `E(X)*E(X) ≤ E(X*X)`. The ambient algebra is all of `M_n`.
pub fn verify_cond_exp_axioms(
    rep: &UnitaryRep,
    h: &Subgroup,
    phi: &State,
    random: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<CondExpReport> {
    let n = rep.dim();
    if phi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: phi.dim() });
    }
    let fixed = fixed_point_algebra(&StarAlgebra::full(n), rep, h, tol)?;
    let fixed_basis = fixed.basis_matrices();
    let mut panel: Vec<ComplexMatrix> = (0..n).flat_map(|i| (0..n).map(move |j| unit(n, i, j))).collect();
    let mut rng = seeded_rng(seed);
    for _ in 0..random {
        let a = random_complex(&mut rng, n, n);
        let f = frobenius(&a);
        panel.push(scale_real(&a, 1.0 / f));
    }
    let e = |a: &ComplexMatrix| conditional_expectation(a, rep, h);

    let mut contraction = 0.0f64;
    let mut idempotence = 0.0f64;
    let mut state = 0.0f64;
    let mut bimodule = 0.0f64;
    let mut schwarz = 0.0f64;
    for x in &panel {
        let ex = e(x);
        contraction = contraction.max(op_norm(&ex) - op_norm(x));
        idempotence = idempotence.max(distance(&e(&ex), &ex));
        state = state.max((phi.apply(&ex) - phi.apply(x)).norm());
        let gap = e(&(x.adjoint() * x)) - ex.adjoint() * &ex;
        let ev = hermitian_eigenvalues(&scale_real(&(&gap + gap.adjoint()), 0.5))?;
        schwarz = schwarz.max(-ev.first().copied().unwrap_or(0.0));
    }
    for b in &fixed_basis {
        idempotence = idempotence.max(distance(&e(b), b));
    }
    // bimodule on fixed basis pairs against a slice of the panel
    for a in fixed_basis.iter().take(6) {
        for b in fixed_basis.iter().rev().take(6) {
            for x in panel.iter().step_by(7) {
                let lhs = e(&(a * x * b));
                let rhs = a * e(x) * b;
                bimodule = bimodule.max(distance(&lhs, &rhs));
            }
        }
    }

    let values = [contraction.max(0.0), idempotence, state, bimodule, schwarz.max(0.0)];
    let mut axioms = Vec::new();
    let mut violations = Vec::new();
    for (name, &v) in AXIOMS.iter().zip(&values) {
        let passed = v < AXIOM_EPS;
        if !passed {
            violations.push(Violation::new(name, format!("max residual {v:.3e} on subgroup {h}")));
        }
        axioms.push(AxiomResult { name: name.to_string(), max_residual: v, passed });
    }
    Ok(CondExpReport { subgroup: h.clone(), panel_size: panel.len(), axioms, violations })
}

/// φ-preserving conditional expectation onto a subalgebra `N`, realised as
/// the orthogonal projection for `⟨X, Y⟩ = φ(X*Y)`.
pub fn state_projection(n_alg: &StarAlgebra, phi: &State, x: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let basis = n_alg.basis_matrices();
    let d = basis.len();
    let gram = faer::Mat::from_fn(d, d, |i, j| phi.apply(&(basis[i].adjoint() * &basis[j])));
    let ginv = inverse(&gram, tol).ok_or(Error::NotFaithful { min_eigenvalue: phi.min_eigenvalue() })?;
    let rhs: Vec<c64> = basis.iter().map(|b| phi.apply(&(b.adjoint() * x))).collect();
    let mut out = zeros(x.nrows(), x.ncols());
    for i in 0..d {
        let mut c = ZERO;
        for (j, r) in rhs.iter().enumerate() {
            c += ginv[(i, j)] * r;
        }
        axpy(&mut out, c, &basis[i]);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub commute: bool,
    pub factorizes: bool,
    pub independent: bool,
    pub e_independent: bool,
    /// `independent ⇒ e_independent`
    pub implication_holds: bool,
    pub commutation_residual: f64,
    pub factorization_residual: f64,
    pub e_residual: f64,
}

/// Independence of two subalgebras under `φ`, tested on basis pairs:
/// commutation and `φ(ab) = φ(a)φ(b)`. `E`-independence uses the
/// φ-preserving projection onto `common` (scalars when `None`) and tests
/// `E(ab) = E(a)E(b)`.
pub fn independence_check(
    a1: &StarAlgebra,
    a2: &StarAlgebra,
    phi: &State,
    common: Option<&StarAlgebra>,
    tol: &Tolerance,
) -> Result<IndependenceReport> {
    let n = a1.ambient_dim();
    let scalars = StarAlgebra::scalars(n);
    let common = common.unwrap_or(&scalars);
    let b1 = a1.basis_matrices();
    let b2 = a2.basis_matrices();
    let mut commutation = 0.0f64;
    let mut factorization = 0.0f64;
    let mut e_res = 0.0f64;
    let e1: Vec<ComplexMatrix> = b1.iter().map(|x| state_projection(common, phi, x, tol)).collect::<Result<_>>()?;
    let e2: Vec<ComplexMatrix> = b2.iter().map(|x| state_projection(common, phi, x, tol)).collect::<Result<_>>()?;
    for (x, ex) in b1.iter().zip(&e1) {
        for (y, ey) in b2.iter().zip(&e2) {
            commutation = commutation.max(frobenius(&commutator(x, y)));
            let xy = x * y;
            factorization = factorization.max((phi.apply(&xy) - phi.apply(x) * phi.apply(y)).norm());
            e_res = e_res.max(distance(&state_projection(common, phi, &xy, tol)?, &(ex * ey)));
        }
    }
    let thr = AXIOM_EPS;
    let commute = commutation < thr;
    let factorizes = factorization < thr;
    let independent = commute && factorizes;
    let e_independent = e_res < thr;
    Ok(IndependenceReport {
        commute,
        factorizes,
        independent,
        e_independent,
        implication_holds: !independent || e_independent,
        commutation_residual: commutation,
        factorization_residual: factorization,
        e_residual: e_res,
    })
}

/// Decreasing subgroup chain `H_0 ⊇ H_1 ⊇ … ⊇ H_T` and the increasing
/// fixed-point algebras `M^{H_t}`.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub chain: Vec<Subgroup>,
    pub algebras: Vec<StarAlgebra>,
    /// Whether the last algebra is the whole ambient algebra; a finite
    /// filtration exhausts `M` only then.
    pub top_is_ambient: bool,
}

impl Filtration {
    pub fn new(m: &StarAlgebra, rep: &UnitaryRep, chain: Vec<Subgroup>, tol: &Tolerance) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::InvalidInput("empty subgroup chain".into()));
        }
        for w in chain.windows(2) {
            if !w[1].is_subgroup_of(&w[0]) {
                return Err(Error::InvalidInput(format!("chain is not decreasing: {} ⊄ {}", w[1], w[0])));
            }
        }
        let algebras: Vec<StarAlgebra> =
            chain.par_iter().map(|h| fixed_point_algebra(m, rep, h, tol)).collect::<Result<_>>()?;
        for w in algebras.windows(2) {
            let r = w[1].containment_residual(&w[0])?;
            if r > tol.threshold(1.0) {
                return Err(Error::NotContained { residual: r });
            }
        }
        let top_is_ambient = algebras.last().map(|a| a.equals(m, tol)).transpose()?.unwrap_or(false);
        Ok(Filtration { chain, algebras, top_is_ambient })
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Martingale {
    pub source: ComplexMatrix,
    pub elements: Vec<ComplexMatrix>,
    pub filtration: Filtration,
}

/// `X_t = E_{H_t}(X)`.
pub fn martingale_from(x: &ComplexMatrix, filtration: &Filtration, rep: &UnitaryRep) -> Result<Martingale> {
    if x.nrows() != rep.dim() || x.ncols() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: x.nrows() });
    }
    let elements = filtration.chain.par_iter().map(|h| conditional_expectation(x, rep, h)).collect();
    Ok(Martingale { source: x.clone(), elements, filtration: filtration.clone() })
}

impl Martingale {
    /// Largest `‖E_{H_s}(X_t) − X_s‖_F` over `s < t`.
    pub fn tower_residual(&self, rep: &UnitaryRep) -> f64 {
        let mut worst = 0.0f64;
        let chain = &self.filtration.chain;
        for s in 0..chain.len() {
            for t in s + 1..chain.len() {
                let lhs = conditional_expectation(&self.elements[t], rep, &chain[s]);
                worst = worst.max(distance(&lhs, &self.elements[s]));
            }
        }
        worst
    }

    /// Largest distance of `X_t` from `M^{H_t}`.
    pub fn adaptedness_residual(&self) -> f64 {
        self.elements.iter().zip(&self.filtration.algebras).map(|(x, a)| a.membership_residual(x)).fold(0.0, f64::max)
    }
}

/// Largest `‖E_{H_s}(E_{H_t}(X)) − E_{H_s}(X)‖_F` over `s < t` and `count`
/// seeded random `X` of unit Frobenius norm.
pub fn tower_residual_random(filtration: &Filtration, rep: &UnitaryRep, count: usize, seed: u64) -> f64 {
    let n = rep.dim();
    let mut rng = seeded_rng(seed);
    let xs: Vec<ComplexMatrix> = (0..count)
        .map(|_| {
            let a = random_complex(&mut rng, n, n);
            let f = frobenius(&a);
            scale_real(&a, 1.0 / f)
        })
        .collect();
    let chain = &filtration.chain;
    xs.par_iter()
        .map(|x| {
            let mut worst = 0.0f64;
            for s in 0..chain.len() {
                let es = conditional_expectation(x, rep, &chain[s]);
                for t in s + 1..chain.len() {
                    let et = conditional_expectation(x, rep, &chain[t]);
                    worst = worst.max(distance(&conditional_expectation(&et, rep, &chain[s]), &es));
                }
            }
            worst
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    /// `φ(X_t* X_t)` along the chain.
    pub moments: Vec<f64>,
    pub nondecreasing: bool,
    /// `‖X_T − X‖_F`.
    pub final_residual: f64,
    pub ends_at_trivial: bool,
    pub state_invariance_residual: f64,
    pub violations: Vec<Violation>,
}

/// Monotone second moments and the terminal value of the martingale.
pub fn convergence_check(mart: &Martingale, phi: &State, rep: &UnitaryRep) -> ConvergenceReport {
    let mut violations = Vec::new();
    let top = &mart.filtration.chain[0];
    let inv = phi.invariance_residual(&rep.restricted(top));
    if inv > AXIOM_EPS {
        violations.push(Violation::new("state_invariance", format!("state is not invariant under {top} (residual {inv:.3e})")));
    }
    let moments: Vec<f64> = mart.elements.iter().map(|x| phi.apply(&(x.adjoint() * x)).re).collect();
    let mut nondecreasing = true;
    for (t, w) in moments.windows(2).enumerate() {
        if w[1] < w[0] - 1e-10 {
            nondecreasing = false;
            violations.push(Violation::new("monotone_moments", format!("moment drops from {} to {} at t = {}", w[0], w[1], t + 1)));
        }
    }
    let last = mart.elements.last().expect("nonempty chain");
    let final_residual = distance(last, &mart.source);
    let ends_at_trivial = mart.filtration.chain.last().is_some_and(Subgroup::is_trivial);
    if ends_at_trivial && final_residual >= 1e-10 {
        violations.push(Violation::new("terminal", format!("chain ends at the trivial subgroup but ‖X_T − X‖ = {final_residual:.3e}")));
    }
    ConvergenceReport { moments, nondecreasing, final_residual, ends_at_trivial, state_invariance_residual: inv, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numerics::random::random_density;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn s3_perm() -> UnitaryRep {
        let s3 = fixtures::symmetric(3);
        UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &t()).unwrap()
    }

    fn a3(rep: &UnitaryRep) -> Subgroup {
        rep.group().enumerate_subgroups().unwrap().into_iter().find(|h| h.order() == 3).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(State::new(diag_real(&[0.5, 0.5])).unwrap().is_faithful());
        assert!(!State::new(diag_real(&[1.0, 0.0])).unwrap().is_faithful());
        assert!(matches!(State::new(diag_real(&[0.5, 0.6])), Err(Error::InvalidState(_))));
        assert!(matches!(State::new(diag_real(&[1.5, -0.5])), Err(Error::InvalidState(_))));
        let not_faithful = State::new(diag_real(&[1.0, 0.0])).unwrap();
        assert!(matches!(NCProbSpace::new(StarAlgebra::full(2), not_faithful), Err(Error::NotFaithful { .. })));
    }

    #[test]
    fn averaging_states() {
        let p = s3_perm();
        let pure = State::new(unit(3, 0, 0)).unwrap();
        let avg = average_state(&pure, &p).unwrap();
        assert!(distance(avg.density(), &scale_real(&identity(3), 1.0 / 3.0)) < 1e-15);
        let inv = State::tracial(3);
        assert!(distance(average_state(&inv, &p).unwrap().density(), inv.density()) < 1e-15);
        let mut rng = seeded_rng(1);
        let psi = State::new(random_density(&mut rng, 3)).unwrap();
        let avg = average_state(&psi, &p).unwrap();
        assert!(avg.is_faithful());
        let mats: Vec<&ComplexMatrix> = p.matrices().iter().collect();
        assert!(avg.invariance_residual(&mats) < 1e-14);
    }

    #[test]
    fn conditional_expectation_examples() {
        let p = s3_perm();
        let g = p.group().clone();
        let x = unit(3, 0, 0);
        assert!(distance(&conditional_expectation(&x, &p, &g.trivial_subgroup()), &x) < 1e-15);
        let e = conditional_expectation(&x, &p, &a3(&p));
        assert!(distance(&e, &scale_real(&identity(3), 1.0 / 3.0)) < 1e-15);
        for h in g.enumerate_subgroups().unwrap() {
            assert!(distance(&conditional_expectation(&identity(3), &p, &h), &identity(3)) < 1e-15);
        }
    }

    #[test]
    fn axioms_on_m3() {
        let p = s3_perm();
        let mut rng = seeded_rng(2);
        let phi = average_state(&State::new(random_density(&mut rng, 3)).unwrap(), &p).unwrap();
        for h in p.group().enumerate_subgroups().unwrap() {
            let r = verify_cond_exp_axioms(&p, &h, &phi, 100, 9, &t()).unwrap();
            assert!(r.all_passed(), "{h}: {:?}", r.axioms);
        }
    }

    #[test]
    fn non_invariant_state_breaks_state_preservation() {
        let p = s3_perm();
        let phi = State::new(diag_real(&[0.5, 0.3, 0.2])).unwrap();
        let r = verify_cond_exp_axioms(&p, &a3(&p), &phi, 20, 9, &t()).unwrap();
        assert!(!r.axiom("state_preservation").unwrap().passed);
        assert!(r.axiom("contraction").unwrap().passed);
    }

    fn tensor_factors() -> (StarAlgebra, StarAlgebra) {
        let left: Vec<ComplexMatrix> = (0..2).flat_map(|i| (0..2).map(move |j| kron(&unit(2, i, j), &identity(2)))).collect();
        let right: Vec<ComplexMatrix> = (0..2).flat_map(|i| (0..2).map(move |j| kron(&identity(2), &unit(2, i, j)))).collect();
        (StarAlgebra::from_matrices(4, &left, &t()).unwrap(), StarAlgebra::from_matrices(4, &right, &t()).unwrap())
    }

    #[test]
    fn product_state_is_independent() {
        let (a, b) = tensor_factors();
        let mut rng = seeded_rng(4);
        let rho = kron(&random_density(&mut rng, 2), &random_density(&mut rng, 2));
        let r = independence_check(&a, &b, &State::new(rho).unwrap(), None, &t()).unwrap();
        assert!(r.independent && r.e_independent && r.implication_holds, "{r:?}");
    }

    #[test]
    fn entangled_state_is_not() {
        let (a, b) = tensor_factors();
        let bell = faer::Mat::from_fn(4, 1, |i, _| if i == 0 || i == 3 { cr(0.5f64.sqrt()) } else { ZERO });
        let rho = scale_real(&(&bell * bell.adjoint()), 0.9) + scale_real(&identity(4), 0.025);
        let phi = State::new(rho).unwrap();
        assert!(phi.is_faithful());
        let r = independence_check(&a, &b, &phi, None, &t()).unwrap();
        assert!(r.commute && !r.factorizes && !r.independent);
    }

    #[test]
    fn diagonal_with_itself() {
        let d = StarAlgebra::diagonal(2);
        let phi = State::new(diag_real(&[0.3, 0.7])).unwrap();
        let r = independence_check(&d, &d, &phi, None, &t()).unwrap();
        assert!(r.commute && !r.factorizes);
    }

    #[test]
    fn martingale_example() {
        let p = s3_perm();
        let g = p.group().clone();
        let chain = vec![g.whole(), a3(&p), g.trivial_subgroup()];
        let f = Filtration::new(&StarAlgebra::full(3), &p, chain, &t()).unwrap();
        assert!(f.top_is_ambient);
        let m = martingale_from(&unit(3, 0, 0), &f, &p).unwrap();
        let third = scale_real(&identity(3), 1.0 / 3.0);
        assert!(distance(&m.elements[0], &third) < 1e-15);
        assert!(distance(&m.elements[1], &third) < 1e-15);
        assert!(distance(&m.elements[2], &unit(3, 0, 0)) < 1e-15);
        assert!(m.tower_residual(&p) < 1e-12 && m.adaptedness_residual() < 1e-12);
        let r = convergence_check(&m, &State::tracial(3), &p);
        let want = [1.0 / 9.0, 1.0 / 9.0, 1.0 / 3.0];
        for (a, b) in r.moments.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(r.nondecreasing && r.final_residual == 0.0 && r.violations.is_empty());
        assert!(tower_residual_random(&f, &p, 50, 3) < 1e-12);
    }

    #[test]
    fn constant_martingale() {
        let p = s3_perm();
        let g = p.group().clone();
        let f = Filtration::new(&StarAlgebra::full(3), &p, vec![g.whole(), a3(&p)], &t()).unwrap();
        assert!(!f.top_is_ambient);
        let x = faer::Mat::from_fn(3, 3, |_, _| ONE);
        let m = martingale_from(&x, &f, &p).unwrap();
        assert!(m.elements.iter().all(|e| distance(e, &x) < 1e-14));
        let r = convergence_check(&m, &State::tracial(3), &p);
        assert!((r.moments[0] - r.moments[1]).abs() < 1e-14);
    }

    #[test]
    fn increasing_chain_is_rejected() {
        let p = s3_perm();
        let g = p.group().clone();
        let chain = vec![g.trivial_subgroup(), g.whole()];
        assert!(matches!(Filtration::new(&StarAlgebra::full(3), &p, chain, &t()), Err(Error::InvalidInput(_))));
    }
}
