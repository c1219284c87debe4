//! Finite-dimensional Tomita-Takesaki theory.
//!
//! The GNS space of `(M, φ)` is `M` itself with `⟨A, B⟩ = φ(A*B)`. Vectors
//! are stored in coordinates that are orthonormal for that inner product.
//! The anti-linear operators `S`, `F`, `J` act on the realification
//! `y ↦ (Re y, Im y)`, so every modular object is a real `2d × 2d` matrix.
//!
//! Flow convention: `σ^t(A) = ρ^{it} A ρ^{-it}`. Under it the KMS condition
//! holds at `β = 1`.

use faer::Mat;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::{commutant, StarAlgebra};
use crate::error::{Error, Result};
use crate::galois::Violation;
use crate::ncprob::State;
use crate::numerics::linalg::real_symmetric_eig;
use crate::numerics::matrix::*;
use crate::numerics::random::{random_complex, random_density, seeded_rng};
use crate::numerics::{c64, hermitian_eig, inverse, matrix_imaginary_power, matrix_real_power, positive_function, Tolerance};

pub type RealMatrix = Mat<f64>;

/// Times at which flow invariance and cocycle identities are sampled.
pub const T_GRID: [f64; 7] = [-2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0];
/// Inverse temperatures reported by [`modular_report`].
pub const KMS_BETAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const CONVENTION: &str = "sigma^t(A) = rho^{it} A rho^{-it}; KMS holds at beta = 1";

/// Realification of a complex-linear map `y ↦ L y`.
pub fn realify_linear(l: &ComplexMatrix) -> RealMatrix {
    let (r, c) = (l.nrows(), l.ncols());
    Mat::from_fn(2 * r, 2 * c, |i, j| {
        let v = l[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

/// Realification of an anti-linear map `y ↦ K conj(y)`.
pub fn realify_antilinear(k: &ComplexMatrix) -> RealMatrix {
    let (r, c) = (k.nrows(), k.ncols());
    Mat::from_fn(2 * r, 2 * c, |i, j| {
        let v = k[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) => v.re,
            (false, false) => -v.re,
            _ => v.im,
        }
    })
}

/// Inverse of [`realify_linear`]; meaningful only for complex-linear maps.
pub fn complexify(r: &RealMatrix) -> ComplexMatrix {
    let d = r.nrows() / 2;
    faer::Mat::from_fn(d, r.ncols() / 2, |i, j| c64::new(r[(i, j)], r[(i + d, j)]))
}

/// Multiplication by `i` on the realification.
fn imaginary_unit(d: usize) -> RealMatrix {
    realify_linear(&scale(&identity(d), c64::new(0.0, 1.0)))
}

fn real_dist(a: &RealMatrix, b: &RealMatrix) -> f64 {
    (a - b).norm_l2()
}

fn real_identity(n: usize) -> RealMatrix {
    Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
}

fn conj(m: &ComplexMatrix) -> ComplexMatrix {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].conj())
}

/// GNS space of a state restricted to a unital *-subalgebra.
#[derive(Clone, Debug)]
pub struct GNSSpace {
    pub algebra: StarAlgebra,
    pub state: State,
    /// `G_kl = φ(B_k* B_l)` for the algebra's orthonormal basis `B_k`.
    pub gram: ComplexMatrix,
    /// `G^{1/2}`: Hilbert–Schmidt coordinates to GNS-orthonormal ones.
    sqrt_gram: ComplexMatrix,
    inv_sqrt_gram: ComplexMatrix,
    basis: Vec<ComplexMatrix>,
    /// The vector of the identity.
    pub cyclic: ComplexMatrix,
}

/// Build the GNS space of `φ` on `m`.
pub fn gns(m: &StarAlgebra, phi: &State, tol: &Tolerance) -> Result<GNSSpace> {
    if phi.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), found: phi.dim() });
    }
    if !m.contains_identity() {
        return Err(Error::InvalidInput("GNS needs a unital algebra".into()));
    }
    let basis = m.basis_matrices();
    let d = basis.len();
    let gram = faer::Mat::from_fn(d, d, |k, l| phi.apply(&(basis[k].adjoint() * &basis[l])));
    let gram = scale_real(&(&gram + gram.adjoint()), 0.5);
    let eig = hermitian_eig(&gram, tol)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min <= crate::ncprob::FAITHFUL_EPS {
        return Err(Error::NotFaithful { min_eigenvalue: min });
    }
    let sqrt_gram = positive_function(&gram, tol, |l| cr(l.sqrt()))?;
    let inv_sqrt_gram = positive_function(&gram, tol, |l| cr(1.0 / l.sqrt()))?;
    let mut space = GNSSpace {
        algebra: m.clone(),
        state: phi.clone(),
        gram,
        sqrt_gram,
        inv_sqrt_gram,
        basis,
        cyclic: zeros(d, 1),
    };
    space.cyclic = space.vector_of(&identity(m.ambient_dim()));
    Ok(space)
}

impl GNSSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Hilbert–Schmidt coordinates of `a` in the algebra basis.
    fn hs_coordinates(&self, a: &ComplexMatrix) -> ComplexMatrix {
        faer::Mat::from_fn(self.dim(), 1, |k, _| hs_inner(&self.basis[k], a))
    }

    /// The vector `A ξ` in orthonormal coordinates.
    pub fn vector_of(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &self.sqrt_gram * self.hs_coordinates(a)
    }

    /// Matrix of `X ↦ f(X)` in orthonormal coordinates for a complex-linear
    /// `f` mapping the algebra into itself.
    fn linear_map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
        let d = self.dim();
        let mut hs = zeros(d, d);
        for (l, b) in self.basis.iter().enumerate() {
            let col = self.hs_coordinates(&f(b));
            for k in 0..d {
                hs[(k, l)] = col[(k, 0)];
            }
        }
        &self.sqrt_gram * hs * &self.inv_sqrt_gram
    }

    /// Matrix `K` with `f(X) = K conj(y)` for an anti-linear `f`.
    fn antilinear_map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
        let d = self.dim();
        let mut hs = zeros(d, d);
        for (l, b) in self.basis.iter().enumerate() {
            let col = self.hs_coordinates(&f(b));
            for k in 0..d {
                hs[(k, l)] = col[(k, 0)];
            }
        }
        &self.sqrt_gram * hs * conj(&self.inv_sqrt_gram)
    }

    /// Left multiplication by `a` on the GNS space.
    pub fn left(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.linear_map(|x| a * x)
    }

    /// Largest failure of `π(AB) = π(A)π(B)` and `π(A*) = π(A)*` on basis
    /// pairs.
    pub fn homomorphism_residual(&self) -> f64 {
        let lefts: Vec<ComplexMatrix> = self.basis.iter().map(|b| self.left(b)).collect();
        let mut worst = 0.0f64;
        for (a, la) in self.basis.iter().zip(&lefts) {
            worst = worst.max(distance(&self.left(&adjoint(a)), &adjoint(la)));
            for (b, lb) in self.basis.iter().zip(&lefts) {
                worst = worst.max(distance(&self.left(&(a * b)), &(la * lb)));
            }
        }
        worst
    }

    /// The left-multiplication image of `M` as an algebra on the GNS space.
    pub fn represented_algebra(&self, tol: &Tolerance) -> Result<StarAlgebra> {
        let lefts: Vec<ComplexMatrix> = self.basis.iter().map(|b| self.left(b)).collect();
        StarAlgebra::from_matrices(self.dim(), &lefts, tol)
    }
}

/// `S`, `F`, `Δ`, `J` on the realified GNS space.
#[derive(Clone, Debug)]
pub struct ModularData {
    pub s: RealMatrix,
    pub f: RealMatrix,
    pub delta: RealMatrix,
    pub j: RealMatrix,
    pub delta_sqrt: RealMatrix,
    pub delta_inv_sqrt: RealMatrix,
    pub rho: ComplexMatrix,
    /// The left-multiplication image of `M` and its commutant on the GNS space.
    pub represented: StarAlgebra,
    pub commutant: StarAlgebra,
}

/// `S` from `Aξ ↦ A*ξ`, `F` independently from `A'ξ ↦ A'*ξ` over the
/// commutant, then `Δ = S*S` and `J = S Δ^{-1/2}`.
pub fn tomita(gns: &GNSSpace, tol: &Tolerance) -> Result<ModularData> {
    let d = gns.dim();
    let s = realify_antilinear(&gns.antilinear_map(adjoint));
    let represented = gns.represented_algebra(tol)?;
    let comm = commutant(&represented, tol)?;
    if comm.dim() != d {
        return Err(Error::DecompositionFailed(format!("commutant has dimension {} on a {d}-dimensional GNS space", comm.dim())));
    }
    let cs = comm.basis_matrices();
    let x = faer::Mat::from_fn(d, d, |i, k| (&cs[k] * &gns.cyclic)[(i, 0)]);
    let y = faer::Mat::from_fn(d, d, |i, k| (cs[k].adjoint() * &gns.cyclic)[(i, 0)]);
    let x_inv = inverse(&x, tol).ok_or_else(|| Error::DecompositionFailed("cyclic vector is not separating".into()))?;
    let f = realify_antilinear(&(y * conj(&x_inv)));

    let delta = s.transpose() * &s;
    let (values, vectors) = real_symmetric_eig(&delta)?;
    if let Some(&min) = values.first() {
        if min <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
    }
    let spectral = |g: fn(f64) -> f64| {
        let dg = Mat::from_fn(values.len(), values.len(), |i, j| if i == j { g(values[i]) } else { 0.0 });
        &vectors * dg * vectors.transpose()
    };
    let delta_sqrt = spectral(f64::sqrt);
    let delta_inv_sqrt = spectral(|v| 1.0 / v.sqrt());
    let j = &s * &delta_inv_sqrt;
    Ok(ModularData {
        s,
        f,
        delta,
        j,
        delta_sqrt,
        delta_inv_sqrt,
        rho: gns.state.density().clone(),
        represented,
        commutant: comm,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub name: String,
    pub residual: f64,
}

fn residual(name: &str, residual: f64) -> Residual {
    Residual { name: name.to_string(), residual }
}

/// Names of the modular relations, in report order.
pub const IDENTITIES: [&str; 8] = [
    "delta_eq_fs",
    "s_inverse_eq_s",
    "j_squared_eq_1",
    "j_self_adjoint",
    "delta_inv_sqrt_eq_j_delta_sqrt_j",
    "f_eq_j_delta_inv_sqrt",
    "sf_eq_delta_inverse",
    "s_eq_delta_inv_sqrt_j",
];

impl ModularData {
    pub fn delta_inverse(&self) -> RealMatrix {
        &self.delta_inv_sqrt * &self.delta_inv_sqrt
    }

    /// Residuals of the eight relations between `S`, `F`, `Δ`, `J`.
    pub fn identities(&self) -> Vec<Residual> {
        let n = self.s.nrows();
        let one = real_identity(n);
        let (s, f, delta, j) = (&self.s, &self.f, &self.delta, &self.j);
        let values = [
            real_dist(delta, &(f * s)),
            real_dist(&(s * s), &one),
            real_dist(&(j * j), &one),
            real_dist(j, &j.transpose().to_owned()),
            real_dist(&self.delta_inv_sqrt, &(j * &self.delta_sqrt * j)),
            real_dist(f, &(j * &self.delta_inv_sqrt)),
            real_dist(&(s * f), &self.delta_inverse()),
            real_dist(s, &(&self.delta_inv_sqrt * j)),
        ];
        IDENTITIES.iter().zip(values).map(|(n, v)| residual(n, v)).collect()
    }

    /// Linearity of `Δ`, anti-linearity and orthogonality of `J`,
    /// anti-linearity of `S` and `F`, and `S = JΔ^{1/2}`.
    pub fn structure(&self) -> Vec<Residual> {
        let n = self.s.nrows();
        let i = imaginary_unit(n / 2);
        let anti = |x: &RealMatrix| (x * &i + &i * x).norm_l2();
        vec![
            residual("delta_linear", (&self.delta * &i - &i * &self.delta).norm_l2()),
            residual("s_antilinear", anti(&self.s)),
            residual("f_antilinear", anti(&self.f)),
            residual("j_antilinear", anti(&self.j)),
            residual("j_isometric", real_dist(&(self.j.transpose() * &self.j), &real_identity(n))),
            residual("polar_decomposition", real_dist(&self.s, &(&self.j * &self.delta_sqrt))),
        ]
    }

    /// Compare with `Δ(A) = ρAρ^{-1}` and `J(A) = ρ^{1/2}A*ρ^{-1/2}`,
    /// which describe the full-matrix case.
    pub fn closed_form_residuals(&self, gns: &GNSSpace, tol: &Tolerance) -> Result<(f64, f64)> {
        let rho_inv = inverse(&self.rho, tol).ok_or(Error::NotPositiveDefinite { min_eigenvalue: 0.0 })?;
        let half = matrix_real_power(&self.rho, 0.5, tol)?;
        let neg_half = matrix_real_power(&self.rho, -0.5, tol)?;
        let delta = realify_linear(&gns.linear_map(|x| &self.rho * x * &rho_inv));
        let j = realify_antilinear(&gns.antilinear_map(|x| &half * x.adjoint() * &neg_half));
        Ok((real_dist(&delta, &self.delta), real_dist(&j, &self.j)))
    }

    /// `Δ^{it}` as a complex matrix on the GNS space.
    pub fn delta_power(&self, t: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
        let d = complexify(&self.delta);
        matrix_imaginary_power(&scale_real(&(&d + d.adjoint()), 0.5), t, tol)
    }

    /// Largest distance of `J π(B_k) J` from the commutant.
    pub fn jmj_residual(&self) -> f64 {
        self.represented
            .basis_matrices()
            .iter()
            .map(|l| {
                let conj_l = complexify(&(&self.j * realify_linear(l) * &self.j));
                self.commutant.membership_residual(&conj_l)
            })
            .fold(0.0, f64::max)
    }

    /// Largest distance of `Δ^{it} π(B_k) Δ^{-it}` from `π(M)`, per time.
    pub fn flow_invariance(&self, times: &[f64], tol: &Tolerance) -> Result<Vec<(f64, f64)>> {
        let basis = self.represented.basis_matrices();
        times
            .par_iter()
            .map(|&t| {
                let u = self.delta_power(t, tol)?;
                let worst = basis
                    .iter()
                    .map(|l| self.represented.membership_residual(&conjugate_by(&u, l)))
                    .fold(0.0, f64::max);
                Ok((t, worst))
            })
            .collect()
    }
}

/// `σ^t(A) = ρ^{it} A ρ^{-it}`.
pub fn modular_flow(rho: &ComplexMatrix, t: f64, a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let u = matrix_imaginary_power(rho, t, tol)?;
    Ok(conjugate_by(&u, a))
}

/// `|ω(σ^{iβ/2}(A) σ^{-iβ/2}(B)) − ω(BA)|`, with the analytic continuation
/// `σ^{iβ/2}(A) = ρ^{-β/2} A ρ^{β/2}`.
pub fn kms_check(rho: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix, beta: f64, tol: &Tolerance) -> Result<f64> {
    let plus = matrix_real_power(rho, beta / 2.0, tol)?;
    let minus = matrix_real_power(rho, -beta / 2.0, tol)?;
    let sa = &minus * a * &plus;
    let sb = &plus * b * &minus;
    Ok((trace(&(rho * sa * sb)) - trace(&(rho * b * a))).norm())
}

/// Largest `‖σ^t(A) − A‖` over the time grid, next to `‖[ρ, A]‖`; the
/// first vanishes exactly when the second does.
pub fn centralizer_check(rho: &ComplexMatrix, a: &ComplexMatrix, tol: &Tolerance) -> Result<(f64, f64)> {
    let mut worst = 0.0f64;
    for t in T_GRID {
        worst = worst.max(distance(&modular_flow(rho, t, a, tol)?, a));
    }
    Ok((worst, frobenius(&commutator(rho, a))))
}

/// Connes cocycle `(Dφ2 : Dφ1)_t = ρ2^{it} ρ1^{-it}`.
pub fn connes_cocycle(rho1: &ComplexMatrix, rho2: &ComplexMatrix, t: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(matrix_imaginary_power(rho2, t, tol)? * matrix_imaginary_power(rho1, -t, tol)?)
}

/// Cocycle read off the balanced weight: the `(2,1)` block of the modular
/// flow of `diag(ρ1, ρ2)/2` applied to the matrix unit `e21 ⊗ 1`.
pub fn balanced_weight_cocycle(rho1: &ComplexMatrix, rho2: &ComplexMatrix, t: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    let n = rho1.nrows();
    let doubled = scale_real(&block_diag(&[rho1.clone(), rho2.clone()]), 0.5);
    let e21 = kron(&unit(2, 1, 0), &identity(n));
    let flowed = modular_flow(&doubled, t, &e21, tol)?;
    Ok(flowed.get(n..2 * n, 0..n).to_owned())
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub intertwining: f64,
    pub cocycle: f64,
    pub inverse: f64,
    pub chain_rule: f64,
    pub balanced_weight: f64,
    pub unitarity: f64,
}

impl CocycleReport {
    pub fn max_residual(&self) -> f64 {
        [self.intertwining, self.cocycle, self.inverse, self.chain_rule, self.balanced_weight, self.unitarity]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Check the cocycle relations over the time grid:
/// intertwining `σ2^t(A) = Γ_t σ1^t(A) Γ_t*` on `witnesses`,
/// `Γ_{s+t} = Γ_s σ1^s(Γ_t)`, `(Dφ1:Dφ2)_t = (Dφ2:Dφ1)_t*`,
/// `(Dφ3:Dφ1)_t = (Dφ3:Dφ2)_t (Dφ2:Dφ1)_t` and the balanced-weight value.
pub fn cocycle_report(
    rho1: &ComplexMatrix,
    rho2: &ComplexMatrix,
    rho3: &ComplexMatrix,
    witnesses: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<CocycleReport> {
    let per_t: Vec<[f64; 6]> = T_GRID
        .par_iter()
        .map(|&t| -> Result<[f64; 6]> {
            let g = connes_cocycle(rho1, rho2, t, tol)?;
            let mut inter = 0.0f64;
            for a in witnesses {
                let lhs = modular_flow(rho2, t, a, tol)?;
                let rhs = conjugate_by(&g, &modular_flow(rho1, t, a, tol)?);
                inter = inter.max(distance(&lhs, &rhs));
            }
            let mut coc = 0.0f64;
            for s in T_GRID {
                let lhs = connes_cocycle(rho1, rho2, s + t, tol)?;
                let rhs = connes_cocycle(rho1, rho2, s, tol)? * modular_flow(rho1, s, &g, tol)?;
                coc = coc.max(distance(&lhs, &rhs));
            }
            let inv = distance(&connes_cocycle(rho2, rho1, t, tol)?, &adjoint(&g));
            let chain = distance(&connes_cocycle(rho1, rho3, t, tol)?, &(connes_cocycle(rho2, rho3, t, tol)? * &g));
            let balanced = distance(&balanced_weight_cocycle(rho1, rho2, t, tol)?, &g);
            Ok([inter, coc, inv, chain, balanced, unitary_residual(&g)])
        })
        .collect::<Result<_>>()?;
    let col = |k: usize| per_t.iter().map(|r| r[k]).fold(0.0, f64::max);
    Ok(CocycleReport {
        intertwining: col(0),
        cocycle: col(1),
        inverse: col(2),
        chain_rule: col(3),
        balanced_weight: col(4),
        unitarity: col(5),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularReport {
    pub convention: String,
    pub gns_dim: usize,
    pub gram_min_eigenvalue: f64,
    pub homomorphism_residual: f64,
    pub identities: Vec<Residual>,
    pub structure: Vec<Residual>,
    /// Only for the full matrix algebra.
    pub closed_form: Option<Vec<Residual>>,
    pub jmj_in_commutant: f64,
    pub flow_invariance: Vec<(f64, f64)>,
    pub kms: Vec<(f64, f64)>,
    pub cocycle: CocycleReport,
    pub violations: Vec<Violation>,
}

/// Pass threshold used for the violation list.
pub const MODULAR_EPS: f64 = 1e-9;

/// Full modular analysis of `(m, φ)` with seeded KMS witnesses and cocycle
/// partner states.
pub fn modular_report(m: &StarAlgebra, phi: &State, seed: u64, tol: &Tolerance) -> Result<ModularReport> {
    let space = gns(m, phi, tol)?;
    let data = tomita(&space, tol)?;
    let n = m.ambient_dim();
    let mut rng = seeded_rng(seed);
    let a = m.project(&random_complex(&mut rng, n, n));
    let b = m.project(&random_complex(&mut rng, n, n));
    let rho = phi.density();
    let kms = KMS_BETAS.iter().map(|&beta| Ok((beta, kms_check(rho, &a, &b, beta, tol)?))).collect::<Result<Vec<_>>>()?;
    let rho2 = random_density(&mut rng, n);
    let rho3 = random_density(&mut rng, n);
    let cocycle = cocycle_report(rho, &rho2, &rho3, &[a.clone(), b.clone()], tol)?;
    let closed_form = if m.is_full() {
        let (d, j) = data.closed_form_residuals(&space, tol)?;
        Some(vec![residual("delta", d), residual("j", j)])
    } else {
        None
    };
    let identities = data.identities();
    let structure = data.structure();
    let jmj = data.jmj_residual();
    let flow = data.flow_invariance(&T_GRID, tol)?;
    let hom = space.homomorphism_residual();

    let mut violations = Vec::new();
    let mut flag = |name: &str, v: f64| {
        if !(v < MODULAR_EPS) {
            violations.push(Violation::new(name, format!("residual {v:.3e}")));
        }
    };
    flag("gns_homomorphism", hom);
    for r in identities.iter().chain(&structure).chain(closed_form.iter().flatten()) {
        flag(&r.name, r.residual);
    }
    flag("jmj_in_commutant", jmj);
    for (t, v) in &flow {
        flag(&format!("flow_invariance(t={t})"), *v);
    }
    flag("kms(beta=1)", kms[1].1);
    flag("cocycle", cocycle.max_residual());

    Ok(ModularReport {
        convention: CONVENTION.to_string(),
        gns_dim: space.dim(),
        gram_min_eigenvalue: hermitian_eig(&space.gram, tol)?.values[0],
        homomorphism_residual: hom,
        identities,
        structure,
        closed_form,
        jmj_in_commutant: jmj,
        flow_invariance: flow,
        kms,
        cocycle,
        violations,
    })
}
