use ncgalois::algebras::{block_structure, center, StarAlgebra};
use ncgalois::crossed::{covariance_check, crossed_galois, crossed_product, Action};
use ncgalois::galois::{galois_map, CommutantKind, Violation};
use ncgalois::groups::Subgroup;
use ncgalois::io::{self, AlgebraSpec, GroupRef, RepRef, StateSpec};
use ncgalois::modular::modular_report;
use ncgalois::ncprob::{convergence_check, martingale_from, tower_residual_random, verify_cond_exp_axioms, Filtration};
use ncgalois::numerics::matrix::{matrix_from_json, matrix_to_json};
use ncgalois::representations::{decompose, peter_weyl_residual, schur_check, IrrepTable};
use ncgalois::{c64, Error};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Command, Context, Failure};

/// Pass threshold for the orthogonality checks in `irreps`.
const ORTHOGONALITY_EPS: f64 = 1e-10;
/// Pass threshold for covariance in `crossed`.
const COVARIANCE_EPS: f64 = 1e-10;
/// Pass threshold for martingale and decomposition residuals.
const RESIDUAL_EPS: f64 = 1e-9;
/// Random elements added to the conditional-expectation panel by default.
const DEFAULT_PANEL: usize = 100;

type Outcome = Result<(Value, Vec<Violation>), Failure>;

pub fn dispatch(cmd: &Command, ctx: &mut Context) -> Outcome {
    match cmd {
        Command::AnalyzeGroup { group } => analyze_group(group, ctx),
        Command::Irreps { group } => irreps(group, ctx),
        Command::Decompose { representation } => decompose_cmd(representation, ctx),
        Command::Galois { spec } => galois(spec, ctx),
        Command::Modular { spec } => modular(spec, ctx),
        Command::Crossed { spec } => crossed(spec, ctx),
        Command::Martingale { spec } => martingale(spec, ctx),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serialises")
}

fn complex(z: c64) -> Value {
    json!([z.re, z.im])
}

fn check(violations: &mut Vec<Violation>, name: &str, value: f64, eps: f64) {
    if !(value < eps) {
        violations.push(Violation::new(name, format!("residual {value:.3e} exceeds {eps:.0e}")));
    }
}

fn spec<T: serde::de::DeserializeOwned>(name: &str, ctx: &mut Context) -> Result<T, Failure> {
    Ok(ctx.resolver.read_json(name)?)
}

fn analyze_group(name: &str, ctx: &mut Context) -> Outcome {
    let (g, _) = ctx.resolver.group(&GroupRef::Name(name.to_string()))?;
    let subgroups = g.enumerate_subgroups()?;
    let rows: Vec<Value> = subgroups
        .iter()
        .map(|h| json!({"members": h.members(), "order": h.order(), "normal": g.is_normal(h)}))
        .collect();
    let labels: Vec<String> = g.elements().map(|x| g.label(x)).collect();
    let body = json!({
        "order": g.order(),
        "abelian": g.is_abelian(),
        "identity": g.identity(),
        "labels": labels,
        "inverses": g.elements().map(|x| g.inv(x)).collect::<Vec<_>>(),
        "element_orders": g.elements().map(|x| g.element_order(x)).collect::<Vec<_>>(),
        "conjugacy_classes": g.conjugacy_classes(),
        "subgroup_count": subgroups.len(),
        "subgroups": rows,
    });
    Ok((body, Vec::new()))
}

fn irreps(name: &str, ctx: &mut Context) -> Outcome {
    let (g, _) = ctx.resolver.group(&GroupRef::Name(name.to_string()))?;
    let table = IrrepTable::compute(&g, &ctx.tol)?;
    let pw = peter_weyl_residual(&table)?;
    let mut schur = 0.0f64;
    for a in &table.irreps {
        for b in &table.irreps {
            schur = schur.max(schur_check(a, b)?.max_residual);
        }
    }
    let dims = table.dims();
    let sum: usize = dims.iter().map(|d| d * d).sum();
    let mut violations = Vec::new();
    if sum != g.order() {
        violations.push(Violation::new("completeness", format!("sum of squared dimensions {sum} != order {}", g.order())));
    }
    check(&mut violations, "peter_weyl_orthonormality", pw, ORTHOGONALITY_EPS);
    check(&mut violations, "schur_orthogonality", schur, ORTHOGONALITY_EPS);
    let irreps: Vec<Value> = table
        .irreps
        .iter()
        .zip(&table.characters)
        .map(|(rep, chi)| {
            json!({
                "dim": rep.dim(),
                "character": chi.values().iter().map(|&z| complex(z)).collect::<Vec<_>>(),
                "matrices": rep.matrices().iter().map(matrix_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let body = json!({
        "order": g.order(),
        "dims": dims,
        "sum_of_squares": sum,
        "peter_weyl_residual": pw,
        "schur_residual": schur,
        "irreps": irreps,
    });
    Ok((body, violations))
}

fn decompose_cmd(name: &str, ctx: &mut Context) -> Outcome {
    let rep = ctx.resolver.representation(&RepRef::Path(name.to_string()), &ctx.tol)?;
    let d = decompose(&rep, ctx.seed()?, &ctx.tol)?;
    let residual = d.residual();
    let mut violations = Vec::new();
    check(&mut violations, "block_form", residual, RESIDUAL_EPS);
    let blocks: Vec<Value> = d
        .blocks
        .iter()
        .map(|&(irrep, mult)| json!({"irrep": irrep, "irrep_dim": d.table.irreps[irrep].dim(), "multiplicity": mult}))
        .collect();
    let body = json!({
        "dim": rep.dim(),
        "irrep_dims": d.table.dims(),
        "blocks": blocks,
        "commutant_dim": d.commutant_dim(),
        "residual": residual,
    });
    Ok((body, violations))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaloisSpec {
    representation: RepRef,
    #[serde(default)]
    algebra: Option<AlgebraSpec>,
    #[serde(default)]
    kind: Option<String>,
}

fn galois(name: &str, ctx: &mut Context) -> Outcome {
    let s: GaloisSpec = spec(name, ctx)?;
    let rep = ctx.resolver.representation(&s.representation, &ctx.tol)?;
    let m = match &s.algebra {
        Some(a) => io::algebra(a, &ctx.tol)?,
        None => StarAlgebra::full(rep.dim()),
    };
    let kind = match s.kind.as_deref() {
        None | Some("inner") => CommutantKind::Inner,
        Some("spatial") => CommutantKind::Spatial,
        Some(k) => return Err(Failure::invalid(format!("unknown commutant kind {k}"))),
    };
    let r = galois_map(&m, &rep, kind, &ctx.tol)?;
    let violations = r.violations.clone();
    let mut body = to_value(&r);
    body["algebra_dim"] = json!(m.dim());
    Ok((body, violations))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModularSpec {
    algebra: AlgebraSpec,
    state: StateSpec,
}

fn modular(name: &str, ctx: &mut Context) -> Outcome {
    let s: ModularSpec = spec(name, ctx)?;
    let m = io::algebra(&s.algebra, &ctx.tol)?;
    let phi = io::state(&s.state, m.ambient_dim())?;
    let r = modular_report(&m, &phi, ctx.seed()?, &ctx.tol)?;
    Ok((to_value(&r), r.violations.clone()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossedSpec {
    base: AlgebraSpec,
    group: GroupRef,
    action: String,
    /// For `"ad"`: one unitary per group element.
    #[serde(default)]
    unitaries: Option<Vec<Value>>,
    /// For `"ad"`: a representation file instead of explicit unitaries.
    #[serde(default)]
    representation: Option<RepRef>,
    /// For `"table"`: one automorphism matrix per group element, acting on
    /// coordinates in the base algebra's orthonormal basis.
    #[serde(default)]
    maps: Option<Vec<Value>>,
}

fn matrices(values: &[Value]) -> Result<Vec<ncgalois::ComplexMatrix>, Failure> {
    Ok(values.iter().map(matrix_from_json).collect::<Result<Vec<_>, Error>>()?)
}

fn crossed(name: &str, ctx: &mut Context) -> Outcome {
    let s: CrossedSpec = spec(name, ctx)?;
    let base = io::algebra(&s.base, &ctx.tol)?;
    let (group, _) = ctx.resolver.group(&s.group)?;
    let action = match (s.action.as_str(), &s.unitaries, &s.representation, &s.maps) {
        ("ad", Some(us), None, None) => {
            Action::Ad(ncgalois::UnitaryRep::new(group.clone(), matrices(us)?, &ctx.tol)?)
        }
        ("ad", None, Some(r), None) => {
            let rep = ctx.resolver.representation(r, &ctx.tol)?;
            if rep.group().table() != group.table() {
                return Err(Error::ParentMismatch.into());
            }
            Action::Ad(rep)
        }
        ("table", None, None, Some(ms)) => Action::Table { group: group.clone(), maps: matrices(ms)? },
        ("ad", ..) => return Err(Failure::invalid("action \"ad\" needs exactly one of \"unitaries\" and \"representation\"")),
        ("table", ..) => return Err(Failure::invalid("action \"table\" needs \"maps\" only")),
        (a, ..) => return Err(Failure::invalid(format!("unknown action {a}"))),
    };
    let cp = crossed_product(&base, action, &ctx.tol)?;
    let cov = covariance_check(&cp);
    let blocks = block_structure(&cp.algebra, &ctx.tol)?;
    let centre = center(&cp.algebra, &ctx.tol)?;
    let galois = crossed_galois(&cp, &ctx.tol)?;
    let mut violations = Vec::new();
    check(&mut violations, "covariance", cov, COVARIANCE_EPS);
    if !cp.bicommutant.holds {
        violations.push(Violation::new("bicommutant", format!("residual {:.3e}", cp.bicommutant.residual)));
    }
    violations.extend(galois.crossed.violations.iter().cloned());
    let body = json!({
        "base_dim": base.dim(),
        "carrier_dim": cp.carrier_dim,
        "algebra_dim": cp.algebra.dim(),
        "covariance_residual": cov,
        "bicommutant": to_value(&cp.bicommutant),
        "center_dim": centre.dim(),
        "is_factor": centre.dim() == 1,
        "blocks": blocks.summary(),
        "galois": to_value(&galois),
    });
    Ok((body, violations))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MartingaleSpec {
    representation: RepRef,
    /// Decreasing subgroup chain as member lists.
    chain: Vec<Vec<usize>>,
    x: Value,
    state: StateSpec,
    #[serde(default)]
    algebra: Option<AlgebraSpec>,
    #[serde(default)]
    panel: Option<usize>,
}

fn martingale(name: &str, ctx: &mut Context) -> Outcome {
    let s: MartingaleSpec = spec(name, ctx)?;
    let seed = ctx.seed()?;
    let rep = ctx.resolver.representation(&s.representation, &ctx.tol)?;
    let n = rep.dim();
    let m = match &s.algebra {
        Some(a) => io::algebra(a, &ctx.tol)?,
        None => StarAlgebra::full(n),
    };
    let chain: Vec<Subgroup> = s.chain.iter().map(|h| io::subgroup(rep.group(), h)).collect::<Result<_, Error>>()?;
    let x = matrix_from_json(&s.x)?;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.nrows() }.into());
    }
    let r = m.membership_residual(&x);
    if r > ctx.tol.threshold(1.0) {
        return Err(Error::NotContained { residual: r }.into());
    }
    let phi = io::state(&s.state, n)?;
    let filtration = Filtration::new(&m, &rep, chain, &ctx.tol)?;
    let mart = martingale_from(&x, &filtration, &rep)?;
    let conv = convergence_check(&mart, &phi, &rep);
    let tower = mart.tower_residual(&rep);
    let tower_random = tower_residual_random(&filtration, &rep, 20, seed);
    let adapted = mart.adaptedness_residual();
    let mut violations = conv.violations.clone();
    check(&mut violations, "tower", tower, RESIDUAL_EPS);
    check(&mut violations, "tower_random", tower_random, RESIDUAL_EPS);
    check(&mut violations, "adaptedness", adapted, RESIDUAL_EPS);
    let mut axioms = Vec::new();
    if m.is_full() {
        for h in &filtration.chain {
            let rep_h = verify_cond_exp_axioms(&rep, h, &phi, s.panel.unwrap_or(DEFAULT_PANEL), seed, &ctx.tol)?;
            violations.extend(rep_h.violations.iter().cloned());
            axioms.push(to_value(&rep_h));
        }
    }
    let body = json!({
        "dim": n,
        "fixed_dims": filtration.algebras.iter().map(StarAlgebra::dim).collect::<Vec<_>>(),
        "top_is_ambient": filtration.top_is_ambient,
        "elements": mart.elements.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "convergence": to_value(&conv),
        "tower_residual": tower,
        "tower_residual_random": tower_random,
        "adaptedness_residual": adapted,
        "axioms": axioms,
    });
    Ok((body, violations))
}
