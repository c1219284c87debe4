//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p ncgalois-cli --test acceptance`; set `UPDATE_GOLDEN=1` to
//! rewrite the golden reports.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use ncgalois::algebras::{algebra_from_generators, block_structure, bicommutant_check, StarAlgebra};
use ncgalois::crossed::{covariance_check, crossed_product, Action};
use ncgalois::fixtures;
use ncgalois::galois::{galois_map, CommutantKind};
use ncgalois::groups::{FiniteGroup, Subgroup};
use ncgalois::modular::modular_report;
use ncgalois::ncprob::{
    average_state, convergence_check, martingale_from, tower_residual_random, verify_cond_exp_axioms, Filtration, State,
};
use ncgalois::numerics::matrix::*;
use ncgalois::numerics::random::{normal, random_complex, random_density, random_unitary, seeded_rng};
use ncgalois::representations::{peter_weyl_residual, schur_check, IrrepTable};
use ncgalois::{Tolerance, UnitaryRep};

const PETER_WEYL_EPS: f64 = 1e-10;
const PETER_WEYL_SECONDS: f64 = 10.0;
const SCHUR_EPS: f64 = 1e-10;
const BICOMMUTANT_EPS: f64 = 1e-9;
const BICOMMUTANT_CASES: u64 = 200;
const GALOIS_S4_SECONDS: f64 = 60.0;
const AXIOM_EPS: f64 = 1e-9;
const TOWER_EPS: f64 = 1e-9;
const TERMINAL_EPS: f64 = 1e-10;
const MODULAR_EPS: f64 = 1e-9;
const MODULAR_STATES: u64 = 50;
const KMS_EPS: f64 = 1e-10;
const KMS_OFF_MIN: f64 = 1e-3;
const COVARIANCE_EPS: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn peter_weyl() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for fx in fixtures::all() {
        let table = IrrepTable::compute(&fx.group, &tol()).expect("irrep table");
        let sum: usize = table.dims().iter().map(|d| d * d).sum();
        if sum != fx.group.order() {
            failures.push(format!("{}: sum of squares {sum}", fx.name));
        }
        worst = worst.max(peter_weyl_residual(&table).expect("peter-weyl"));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && worst < PETER_WEYL_EPS && secs < PETER_WEYL_SECONDS;
    outcome(pass, format!("max orthonormality residual {worst:.2e}, {secs:.2}s {failures:?}"))
}

fn schur() -> Outcome {
    let mut worst = 0.0f64;
    let mut wrong_equivalence = 0;
    let mut pairs = 0;
    for fx in fixtures::all() {
        let table = IrrepTable::for_group(&fx.group).expect("irrep table");
        for (a, ra) in table.irreps.iter().enumerate() {
            for (b, rb) in table.irreps.iter().enumerate() {
                let r = schur_check(ra, rb).expect("schur");
                if r.equivalent != (a == b) {
                    wrong_equivalence += 1;
                }
                worst = worst.max(r.max_residual);
                pairs += 1;
            }
        }
    }
    outcome(worst < SCHUR_EPS && wrong_equivalence == 0, format!("{pairs} irrep pairs, max residual {worst:.2e}"))
}

/// A random algebra `W (⊕ M_s ⊗ 1_m) W*` with `Σ s·m = n`, generated by
/// two random elements. Returns the generated algebra and `Σ s²`.
fn random_block_algebra(seed: u64) -> (StarAlgebra, usize) {
    let mut rng = seeded_rng(seed);
    let n = 1 + (seed as usize % 6);
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = 1 + (normal(&mut rng).abs() * 1.5) as usize % left;
        let m = 1 + (normal(&mut rng).abs() * 1.5) as usize % (left / s);
        blocks.push((s, m));
        left -= s * m;
    }
    let w = random_unitary(&mut rng, n);
    let mut gens = Vec::new();
    for _ in 0..2 {
        let parts: Vec<ComplexMatrix> =
            blocks.iter().map(|&(s, m)| kron(&random_complex(&mut rng, s, s), &identity(m))).collect();
        gens.push(conjugate_by(&w, &block_diag(&parts)));
    }
    let alg = algebra_from_generators(&gens, n, &tol()).expect("generated algebra");
    (alg, blocks.iter().map(|&(s, _)| s * s).sum())
}

fn bicommutant() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for seed in 0..BICOMMUTANT_CASES {
        let (alg, expected_dim) = random_block_algebra(seed);
        let r = bicommutant_check(&alg, &tol()).expect("bicommutant");
        worst = worst.max(r.residual);
        if !r.holds || alg.dim() != expected_dim {
            failures.push(seed);
        }
    }
    let pass = failures.is_empty() && worst < BICOMMUTANT_EPS;
    outcome(pass, format!("{BICOMMUTANT_CASES} algebras, max residual {worst:.2e}, failing seeds {failures:?}"))
}

fn galois_inner() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for fx in fixtures::all() {
        let start = Instant::now();
        let rep = UnitaryRep::regular(fx.group.clone());
        let r = galois_map(&StarAlgebra::full(rep.dim()), &rep, CommutantKind::Inner, &tol()).expect("galois");
        let secs = start.elapsed().as_secs_f64();
        let closure = r.rows.iter().all(|row| row.closure_verified);
        let ok = r.injective && r.anti_monotone && closure && (fx.name != "S4" || secs < GALOIS_S4_SECONDS);
        pass &= ok;
        lines.push(format!("{} {} subgroups {secs:.1}s{}", fx.name, r.rows.len(), if ok { "" } else { " FAIL" }));
    }
    outcome(pass, lines.join(", "))
}

fn s3_permutation() -> UnitaryRep {
    let s3 = fixtures::symmetric(3);
    UnitaryRep::from_permutations(s3.group.clone(), s3.permutations.as_ref().unwrap(), &tol()).unwrap()
}

fn conditional_expectations() -> Outcome {
    let rep = s3_permutation();
    let phi = average_state(&State::new(random_density(&mut seeded_rng(11), 3)).unwrap(), &rep).unwrap();
    let mut worst = 0.0f64;
    let mut all = true;
    for h in rep.group().enumerate_subgroups().unwrap() {
        let r = verify_cond_exp_axioms(&rep, &h, &phi, 100, 5, &tol()).expect("axioms");
        all &= r.all_passed();
        worst = r.axioms.iter().map(|a| a.max_residual).fold(worst, f64::max);
    }
    // a non-invariant state must break state preservation for a nontrivial subgroup
    let skewed = State::new(diag_real(&[0.5, 0.3, 0.2])).unwrap();
    let a3 = rep.group().enumerate_subgroups().unwrap().into_iter().find(|h| h.order() == 3).unwrap();
    let neg = verify_cond_exp_axioms(&rep, &a3, &skewed, 100, 5, &tol()).expect("axioms");
    let flagged = !neg.axiom("state_preservation").unwrap().passed;
    outcome(all && worst < AXIOM_EPS && flagged, format!("max residual {worst:.2e}, non-invariant state flagged: {flagged}"))
}

/// Longest chain found by repeatedly taking a largest proper subgroup.
fn maximal_chain(g: &FiniteGroup) -> Vec<Subgroup> {
    let subs = g.enumerate_subgroups().unwrap();
    let mut chain = vec![g.whole()];
    while !chain.last().unwrap().is_trivial() {
        let cur = chain.last().unwrap();
        let next = subs
            .iter()
            .filter(|h| h.order() < cur.order() && h.is_subgroup_of(cur))
            .max_by_key(|h| h.order())
            .unwrap()
            .clone();
        chain.push(next);
    }
    chain
}

fn martingales() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["S3", "D4", "S4"] {
        let g = fixtures::by_name(name).unwrap().group;
        let rep = UnitaryRep::regular(g.clone());
        let n = rep.dim();
        let chain = maximal_chain(&g);
        let f = Filtration::new(&StarAlgebra::full(n), &rep, chain, &tol()).expect("filtration");
        let phi = average_state(&State::new(random_density(&mut seeded_rng(7), n)).unwrap(), &rep).unwrap();
        let x = random_complex(&mut seeded_rng(8), n, n);
        let m = martingale_from(&x, &f, &rep).unwrap();
        let conv = convergence_check(&m, &phi, &rep);
        let tower = m.tower_residual(&rep).max(tower_residual_random(&f, &rep, 10, 9));
        let ok = f.len() >= 3
            && tower < TOWER_EPS
            && conv.nondecreasing
            && conv.ends_at_trivial
            && conv.final_residual < TERMINAL_EPS
            && conv.violations.is_empty();
        pass &= ok;
        lines.push(format!(
            "{name} chain {} tower {tower:.1e} terminal {:.1e}{}",
            f.len(),
            conv.final_residual,
            if ok { "" } else { " FAIL" }
        ));
    }
    outcome(pass, lines.join(", "))
}

fn modular() -> Outcome {
    let mut worst_identity = 0.0f64;
    let mut worst_tt = 0.0f64;
    let mut worst_kms = 0.0f64;
    let mut min_kms_off = f64::INFINITY;
    let mut worst_cocycle = 0.0f64;
    for seed in 0..MODULAR_STATES {
        let n = 2 + (seed as usize % 3);
        let phi = State::new(random_density(&mut seeded_rng(1000 + seed), n)).unwrap();
        let r = modular_report(&StarAlgebra::full(n), &phi, seed, &tol()).expect("modular report");
        for x in r.identities.iter().chain(&r.structure).chain(r.closed_form.iter().flatten()) {
            worst_identity = worst_identity.max(x.residual);
        }
        worst_tt = r.flow_invariance.iter().map(|(_, v)| *v).fold(worst_tt.max(r.jmj_in_commutant), f64::max);
        let kms = |beta: f64| r.kms.iter().find(|(b, _)| *b == beta).unwrap().1;
        worst_kms = worst_kms.max(kms(1.0));
        min_kms_off = min_kms_off.min(kms(2.0));
        worst_cocycle = worst_cocycle.max(r.cocycle.max_residual());
    }
    let pass = worst_identity < MODULAR_EPS
        && worst_tt < MODULAR_EPS
        && worst_kms < KMS_EPS
        && min_kms_off > KMS_OFF_MIN
        && worst_cocycle < MODULAR_EPS;
    outcome(
        pass,
        format!(
            "identities {worst_identity:.1e}, JMJ/flow {worst_tt:.1e}, KMS(1) {worst_kms:.1e}, min KMS(2) {min_kms_off:.1e}, cocycle {worst_cocycle:.1e}"
        ),
    )
}

fn crossed() -> Outcome {
    let mut worst = 0.0f64;
    for fx in fixtures::all() {
        let table = IrrepTable::for_group(&fx.group).unwrap();
        let irrep = table.irreps.last().unwrap().clone();
        let base = StarAlgebra::full(irrep.dim());
        let cp = crossed_product(&base, Action::Ad(irrep), &tol()).expect("crossed product");
        worst = worst.max(covariance_check(&cp));
    }
    let z2 = fixtures::cyclic(2).group;
    let swap = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let rep = UnitaryRep::new(z2, vec![identity(2), swap], &tol()).unwrap();
    let cp = crossed_product(&StarAlgebra::diagonal(2), Action::Ad(rep), &tol()).unwrap();
    worst = worst.max(covariance_check(&cp));
    let blocks = block_structure(&cp.algebra, &tol()).unwrap().summary();
    let factor = blocks.len() == 1;
    outcome(worst < COVARIANCE_EPS && factor, format!("max covariance residual {worst:.2e}, swap crossed product blocks {blocks:?}"))
}

struct GoldenCase {
    name: &'static str,
    args: &'static [&'static str],
}

const GOLDEN: &[GoldenCase] = &[
    GoldenCase { name: "analyze_group_s4", args: &["analyze-group", "S4"] },
    GoldenCase { name: "irreps_s3", args: &["irreps", "S3"] },
    GoldenCase { name: "irreps_q8_file", args: &["irreps", "groups/Q8.json"] },
    GoldenCase { name: "decompose_s3", args: &["decompose", "s3_permutation.json", "--seed", "2"] },
    GoldenCase { name: "galois_s3", args: &["galois", "galois_s3_regular.json"] },
    GoldenCase { name: "modular_m3", args: &["modular", "modular_m3.json", "--seed", "3"] },
    GoldenCase { name: "crossed_swap", args: &["crossed", "crossed_diagonal_swap.json"] },
    GoldenCase { name: "martingale_s3", args: &["martingale", "martingale_s3.json", "--seed", "1"] },
];

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run_cli(args: &[&str], threads: usize) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncgalois"))
        .args(args)
        .current_dir(fixtures_dir())
        .env("NCGALOIS_FIXTURES", fixtures_dir())
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("run ncgalois");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 report"))
}

fn golden() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for case in GOLDEN {
        let (code1, one) = run_cli(case.args, 1);
        let (code4, four) = run_cli(case.args, 4);
        let (_, again) = run_cli(case.args, 4);
        let path = dir.join(format!("{}.json", case.name));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &one).unwrap();
        }
        let stored = std::fs::read_to_string(&path).unwrap_or_default();
        if code1 != 0 || code4 != 0 || one != four || four != again || one != stored {
            bad.push(case.name);
        }
    }
    outcome(bad.is_empty(), format!("{} reports, 1 and 4 threads, mismatches {bad:?}", GOLDEN.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 Peter-Weyl completeness", peter_weyl),
        ("2 Schur orthogonality", schur),
        ("3 bicommutant self-test", bicommutant),
        ("4 Galois correspondence, inner case", galois_inner),
        ("5 conditional-expectation axioms", conditional_expectations),
        ("6 martingales on subgroup chains", martingales),
        ("7 modular suite", modular),
        ("8 crossed products", crossed),
        ("9 CLI golden determinism", golden),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {name}: {} [{:.2}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
