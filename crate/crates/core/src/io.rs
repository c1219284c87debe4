//! File formats: groups, representations, algebras and states, with
//! references that resolve to files or built-in fixtures.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebras::{algebra_from_generators, StarAlgebra};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::groups::{group_from_table, FiniteGroup, Subgroup};
use crate::ncprob::State;
use crate::numerics::matrix::*;
use crate::numerics::random::{random_density, seeded_rng};
use crate::numerics::Tolerance;
use crate::representations::UnitaryRep;

/// `{"order": n, "mult_table": [[...]], "labels": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub mult_table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile { order: g.order(), mult_table: g.table().to_vec(), labels: g.labels().map(<[String]>::to_vec) }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.mult_table.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: self.mult_table.len() });
        }
        let g = group_from_table(self.mult_table.clone())?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }
}

/// A group given inline or by name: a file path, or a built-in fixture.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Inline(GroupFile),
}

/// A representation: explicit matrices, or a named construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub group: GroupRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Value>>,
    /// `"regular"`, `"permutation"` or `"trivial"` when `matrices` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepRef {
    Path(String),
    Inline(RepFile),
}

/// `{"kind": "full" | "diagonal" | "scalars", "n": n}`,
/// `{"kind": "blocks", "dims": [...]}` or
/// `{"kind": "generated", "n": n, "generators": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Value>>,
}

/// `"tracial"`, `{"random": seed}` or a density matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Random { random: u64 },
    Density(Value),
}

/// Resolves names against search directories, then built-in fixtures.
/// Every file read, and every built-in group used, is recorded with its
/// bytes so reports can hash their inputs.
#[derive(Clone, Debug, Default)]
pub struct Resolver {
    pub search: Vec<PathBuf>,
    pub loaded: Vec<(String, Vec<u8>)>,
}

impl Resolver {
    pub fn new(search: Vec<PathBuf>) -> Self {
        Resolver { search, loaded: Vec::new() }
    }

    fn locate(&self, name: &str) -> Option<PathBuf> {
        let direct = Path::new(name);
        if direct.is_absolute() {
            return direct.is_file().then(|| direct.to_path_buf());
        }
        for dir in &self.search {
            for candidate in [dir.join(name), dir.join(format!("{name}.json"))] {
                if candidate.is_file() {
                    return Some(candidate);
                }
            }
        }
        direct.is_file().then(|| direct.to_path_buf())
    }

    /// Read a file and remember it for hashing.
    pub fn read(&mut self, name: &str) -> Result<Vec<u8>> {
        let path = self.locate(name).ok_or_else(|| Error::InvalidInput(format!("file not found: {name}")))?;
        let bytes = fs::read(&path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        self.loaded.push((name.to_string(), bytes.clone()));
        Ok(bytes)
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, name: &str) -> Result<T> {
        let bytes = self.read(name)?;
        serde_json::from_slice(&bytes).map_err(|e| Error::InvalidInput(format!("{name}: {e}")))
    }

    /// A group reference; file lookup wins over fixture names. Returns the
    /// permutation images when the group is a built-in permutation fixture.
    pub fn group(&mut self, r: &GroupRef) -> Result<(Arc<FiniteGroup>, Option<Vec<Vec<usize>>>)> {
        match r {
            GroupRef::Inline(f) => Ok((Arc::new(f.to_group()?), None)),
            GroupRef::Name(name) => {
                if self.locate(name).is_some() {
                    let f: GroupFile = self.read_json(name)?;
                    return Ok((Arc::new(f.to_group()?), None));
                }
                let fx = fixtures::by_name(name).ok_or_else(|| Error::InvalidInput(format!("unknown group {name}")))?;
                let canonical = serde_json::to_vec(&GroupFile::from_group(&fx.group)).expect("group serialises");
                self.loaded.push((format!("builtin:{name}"), canonical));
                Ok((fx.group, fx.permutations))
            }
        }
    }

    pub fn representation(&mut self, r: &RepRef, tol: &Tolerance) -> Result<UnitaryRep> {
        let file = match r {
            RepRef::Inline(f) => f.clone(),
            RepRef::Path(p) => self.read_json(p)?,
        };
        let (group, perms) = self.group(&file.group)?;
        let rep = match (&file.matrices, file.kind.as_deref()) {
            (Some(ms), None) => {
                let mats = ms.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                if mats.len() != group.order() {
                    return Err(Error::DimensionMismatch { expected: group.order(), found: mats.len() });
                }
                UnitaryRep::new(group, mats, tol)?
            }
            (None, Some("regular")) => UnitaryRep::regular(group),
            (None, Some("permutation")) => {
                let perms = perms.ok_or_else(|| Error::InvalidInput("group has no permutation images".into()))?;
                UnitaryRep::from_permutations(group, &perms, tol)?
            }
            (None, Some("trivial")) => UnitaryRep::trivial(group, file.dim.unwrap_or(1)),
            (None, Some(k)) => return Err(Error::InvalidInput(format!("unknown representation kind {k}"))),
            _ => return Err(Error::InvalidInput("give exactly one of \"matrices\" and \"kind\"".into())),
        };
        if let Some(d) = file.dim {
            if d != rep.dim() {
                return Err(Error::DimensionMismatch { expected: d, found: rep.dim() });
            }
        }
        Ok(rep)
    }
}

pub fn algebra(spec: &AlgebraSpec, tol: &Tolerance) -> Result<StarAlgebra> {
    let need_n = || spec.n.ok_or_else(|| Error::InvalidInput(format!("algebra kind {} needs \"n\"", spec.kind)));
    match spec.kind.as_str() {
        "full" => Ok(StarAlgebra::full(need_n()?)),
        "diagonal" => Ok(StarAlgebra::diagonal(need_n()?)),
        "scalars" => Ok(StarAlgebra::scalars(need_n()?)),
        "blocks" => {
            let dims = spec.dims.as_ref().ok_or_else(|| Error::InvalidInput("blocks need \"dims\"".into()))?;
            Ok(StarAlgebra::block_diagonal(dims))
        }
        "generated" => {
            let n = need_n()?;
            let gens = spec.generators.as_ref().ok_or_else(|| Error::InvalidInput("need \"generators\"".into()))?;
            let gens = gens.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
            if let Some(g) = gens.iter().find(|g| g.nrows() != n || g.ncols() != n) {
                return Err(Error::DimensionMismatch { expected: n, found: g.nrows() });
            }
            algebra_from_generators(&gens, n, tol)
        }
        k => Err(Error::InvalidInput(format!("unknown algebra kind {k}"))),
    }
}

pub fn state(spec: &StateSpec, n: usize) -> Result<State> {
    let s = match spec {
        StateSpec::Named(name) if name == "tracial" => State::tracial(n),
        StateSpec::Named(name) => return Err(Error::InvalidInput(format!("unknown state {name}"))),
        StateSpec::Random { random } => State::new(random_density(&mut seeded_rng(*random), n))?,
        StateSpec::Density(v) => State::new(matrix_from_json(v)?)?,
    };
    if s.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
    }
    Ok(s)
}

pub fn subgroup(group: &FiniteGroup, members: &[usize]) -> Result<Subgroup> {
    if let Some(&g) = members.iter().find(|&&g| g >= group.order()) {
        return Err(Error::NotASubgroup(format!("element {g} is outside the group")));
    }
    group.subgroup(members)
}

/// The JSON form of a representation with inline group.
pub fn representation_to_json(rep: &UnitaryRep) -> Value {
    serde_json::json!({
        "group": GroupFile::from_group(rep.group()),
        "dim": rep.dim(),
        "matrices": rep.matrices().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}
