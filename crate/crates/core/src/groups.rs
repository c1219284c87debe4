//! Finite groups given by multiplication tables, their subgroup lattice and
//! conjugacy classes, and complex functions on them under convolution.
//!
//! The Haar measure of a finite group is the uniform weight `1/|G|`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::c64;
use crate::numerics::matrix::{cr, ZERO};

/// Largest group order accepted by [`FiniteGroup::enumerate_subgroups`].
pub const DEFAULT_SUBGROUP_BOUND: usize = 48;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.mult == other.mult
    }
}

impl Eq for FiniteGroup {}

/// Validate a multiplication table and build the group.
pub fn group_from_table(mult: Vec<Vec<usize>>) -> Result<FiniteGroup> {
    let n = mult.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty multiplication table".into()));
    }
    for (a, row) in mult.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput(format!("row {a} has length {}, expected {n}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidInput(format!("row {a} contains out-of-range entry {bad}")));
        }
    }

    // Latin square: every row and column is a permutation.
    for a in 0..n {
        let mut seen = vec![usize::MAX; n];
        for b in 0..n {
            let v = mult[a][b];
            if seen[v] != usize::MAX {
                return Err(Error::NotLatinSquare {
                    witness: [a, seen[v], b],
                    detail: format!("row {a} repeats value {v} in columns {} and {b}", seen[v]),
                });
            }
            seen[v] = b;
        }
    }
    for b in 0..n {
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            let v = mult[a][b];
            if seen[v] != usize::MAX {
                return Err(Error::NotLatinSquare {
                    witness: [seen[v], a, b],
                    detail: format!("column {b} repeats value {v} in rows {} and {a}", seen[v]),
                });
            }
            seen[v] = a;
        }
    }

    let identity = (0..n)
        .find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g))
        .ok_or_else(|| {
            // witness: the left identity of row 0's column pattern, where it fails
            let e = (0..n).find(|&e| mult[e][0] == 0).unwrap_or(0);
            let g = (0..n).find(|&g| mult[e][g] != g || mult[g][e] != g).unwrap_or(0);
            Error::NoIdentity { witness: [e, g, mult[e][g]] }
        })?;

    let mut inverse = vec![0; n];
    for g in 0..n {
        match (0..n).find(|&h| mult[g][h] == identity && mult[h][g] == identity) {
            Some(h) => inverse[g] = h,
            None => {
                let h = (0..n).find(|&h| mult[g][h] == identity).unwrap_or(0);
                return Err(Error::NoInverse { witness: [g, h, mult[h][g]] });
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            let ab = mult[a][b];
            for c in 0..n {
                if mult[ab][c] != mult[a][mult[b][c]] {
                    return Err(Error::NotAssociative { witness: [a, b, c] });
                }
            }
        }
    }

    Ok(FiniteGroup { mult, identity, inverse, labels: None })
}

impl FiniteGroup {
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        group_from_table(mult)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// `h g h^{-1}`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|h| self.conjugate(g, h)).collect();
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Index of the conjugacy class of every element.
    pub fn class_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.order()];
        for (k, class) in self.conjugacy_classes().iter().enumerate() {
            for &g in class {
                map[g] = k;
            }
        }
        map
    }

    /// Validate that `members` forms a subgroup.
    pub fn subgroup(&self, members: &[usize]) -> Result<Subgroup> {
        let n = self.order();
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.iter().any(|&g| g >= n) {
            return Err(Error::NotASubgroup(format!("{members:?} has out-of-range elements")));
        }
        if !set.contains(&self.identity) {
            return Err(Error::NotASubgroup(format!("{members:?} lacks the identity")));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(Error::NotASubgroup(format!("{members:?} is not closed under inverses")));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("{members:?} is not closed under products")));
                }
            }
        }
        Ok(Subgroup { members: set.into_iter().collect() })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: self.elements().collect() }
    }

    /// Subgroup generated by `generators`.
    pub fn generated(&self, generators: &[usize]) -> Subgroup {
        Subgroup { members: mask_members(self.closure_mask(mask_of(generators))) }
    }

    fn closure_mask(&self, gens: u128) -> u128 {
        let gen_list = mask_members(gens);
        let mut mask = 1u128 << self.identity;
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &s in &gen_list {
                let y = self.mul(x, s);
                if mask & (1 << y) == 0 {
                    mask |= 1 << y;
                    queue.push(y);
                }
            }
        }
        mask
    }

    /// All subgroups, each once, sorted by (order, member list).
    pub fn enumerate_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.enumerate_subgroups_bounded(DEFAULT_SUBGROUP_BOUND)
    }

    /// Subgroups are built by closing joins of cyclic subgroups until no new
    /// subgroup appears; every subgroup is the join of the cyclic subgroups of
    /// its elements, so the search is complete.
    pub fn enumerate_subgroups_bounded(&self, bound: usize) -> Result<Vec<Subgroup>> {
        let n = self.order();
        if n > bound || n > 128 {
            return Err(Error::OrderBoundExceeded { order: n, bound: bound.min(128) });
        }
        let cyclic: BTreeSet<u128> = (0..n).map(|g| self.closure_mask(1 << g)).collect();
        let mut all = cyclic.clone();
        let mut frontier: Vec<u128> = cyclic.iter().copied().collect();
        while !frontier.is_empty() {
            let mut fresh = BTreeSet::new();
            for &a in &frontier {
                for &c in &cyclic {
                    if a & c == c {
                        continue;
                    }
                    let j = self.closure_mask(a | c);
                    if !all.contains(&j) {
                        fresh.insert(j);
                    }
                }
            }
            all.extend(fresh.iter().copied());
            frontier = fresh.into_iter().collect();
        }
        let mut subgroups: Vec<Subgroup> = all.into_iter().map(|m| Subgroup { members: mask_members(m) }).collect();
        subgroups.sort();
        Ok(subgroups)
    }

    /// True iff `h` is a union of conjugacy classes.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.members.iter().all(|&x| (0..self.order()).all(|g| h.contains(self.conjugate(x, g))))
    }
}

fn mask_of(elements: &[usize]) -> u128 {
    elements.iter().fold(0u128, |m, &g| m | (1 << g))
}

fn mask_members(mask: u128) -> Vec<usize> {
    (0..128).filter(|&g| mask & (1 << g) != 0).collect()
}

/// A subgroup as its sorted member list. Ordering is by size, then
/// lexicographically by members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.members.len(), &self.members).cmp(&(other.members.len(), &other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members)
    }
}

/// Which normalisation a convolution uses.
///
/// `Measure` treats values as point masses: `(x * y)(g) = Σ_h x(h) y(h⁻¹g)`,
/// with `δ_e` as unit. `Function` integrates against normalised Haar measure
/// and carries an extra `1/|G|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Measure,
    Function,
}

/// A complex function (equivalently, a measure) on a finite group.
#[derive(Clone, Debug)]
pub struct GroupFunction {
    group: Arc<FiniteGroup>,
    values: Vec<c64>,
}

impl PartialEq for GroupFunction {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GroupFunction {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<c64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), found: values.len() });
        }
        Ok(GroupFunction { group, values })
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(usize) -> c64) -> Self {
        let values = group.elements().map(f).collect();
        GroupFunction { group, values }
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        Self::from_fn(group, |_| ZERO)
    }

    pub fn delta(group: Arc<FiniteGroup>, g: usize) -> Self {
        Self::from_fn(group, |h| if h == g { cr(1.0) } else { ZERO })
    }

    pub fn constant(group: Arc<FiniteGroup>, value: c64) -> Self {
        Self::from_fn(group, |_| value)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[c64] {
        &self.values
    }

    pub fn value(&self, g: usize) -> c64 {
        self.values[g]
    }

    /// `∫ f dg` against normalised Haar measure.
    pub fn haar_integral(&self) -> c64 {
        self.values.iter().sum::<c64>() / self.group.order() as f64
    }

    /// `(1/|G|) Σ_g x(g) conj(y(g))`
    pub fn inner(&self, other: &GroupFunction) -> Result<c64> {
        self.check_parent(other)?;
        let s: c64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s / self.group.order() as f64)
    }

    pub fn max_abs_diff(&self, other: &GroupFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.check_parent(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GroupFunction { group: self.group.clone(), values })
    }

    pub fn scaled(&self, s: c64) -> GroupFunction {
        GroupFunction { group: self.group.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    pub(crate) fn check_parent(&self, other: &GroupFunction) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }
}

/// `(x ⋆ y)(g) = w Σ_h x(h) y(h⁻¹ g)` with `w = 1` for measures and `1/|G|`
/// for functions.
pub fn convolve(x: &GroupFunction, y: &GroupFunction, convention: Convention) -> Result<GroupFunction> {
    x.check_parent(y)?;
    let g = &x.group;
    let n = g.order();
    let mut out = vec![ZERO; n];
    for h in 0..n {
        let xh = x.values[h];
        if xh == ZERO {
            continue;
        }
        let hinv = g.inv(h);
        for (k, slot) in out.iter_mut().enumerate() {
            *slot += xh * y.values[g.mul(hinv, k)];
        }
    }
    if convention == Convention::Function {
        for v in &mut out {
            *v /= n as f64;
        }
    }
    Ok(GroupFunction { group: g.clone(), values: out })
}

/// `x*(g) = conj(x(g⁻¹))`
pub fn involute(x: &GroupFunction) -> GroupFunction {
    let g = &x.group;
    GroupFunction::from_fn(g.clone(), |k| x.values[g.inv(k)].conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn z2_table() {
        let g = group_from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn repeated_row_is_not_latin() {
        let err = group_from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::NotLatinSquare { .. }), "{err:?}");
    }

    #[test]
    fn latin_square_without_identity() {
        // x*y = -(x+y) mod 3 is a quasigroup with no identity
        let t: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (6 - x - y) % 3).collect()).collect();
        assert!(matches!(group_from_table(t), Err(Error::NoIdentity { .. })));
    }

    #[test]
    fn loop_that_is_not_associative() {
        // smallest non-associative loop (order 5)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(group_from_table(t), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn s3_from_brute_force_composition() {
        let s3 = fixtures::symmetric(3);
        assert_eq!(s3.group.order(), 6);
        // identity is the identity permutation and every product matches
        // composing the permutations directly
        let perms = s3.permutations.as_ref().unwrap();
        assert_eq!(perms[s3.group.identity()], vec![0, 1, 2]);
        for a in 0..6 {
            for b in 0..6 {
                let composed: Vec<usize> = (0..3).map(|i| perms[a][perms[b][i]]).collect();
                assert_eq!(perms[s3.group.mul(a, b)], composed);
            }
        }
    }

    /// Brute-force oracle: test every subset for closure.
    fn subgroups_by_subsets(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut out = Vec::new();
        for mask in 1u64..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if g.subgroup(&members).is_ok() {
                out.push(members);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    #[test]
    fn subgroup_enumeration_matches_subset_oracle() {
        for fx in [fixtures::cyclic(2), fixtures::symmetric(3), fixtures::cyclic(6), fixtures::quaternion(), fixtures::dihedral(4)] {
            let found: Vec<Vec<usize>> =
                fx.group.enumerate_subgroups().unwrap().iter().map(|h| h.members().to_vec()).collect();
            assert_eq!(found, subgroups_by_subsets(&fx.group), "{}", fx.name);
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(fixtures::cyclic(2).group.enumerate_subgroups().unwrap().len(), 2);
        let s3 = fixtures::symmetric(3).group.enumerate_subgroups().unwrap();
        assert_eq!(s3.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![1, 2, 2, 2, 3, 6]);
        let z6 = fixtures::cyclic(6).group.enumerate_subgroups().unwrap();
        assert_eq!(z6.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(fixtures::symmetric(4).group.enumerate_subgroups().unwrap().len(), 30);
        assert_eq!(fixtures::alternating4().group.enumerate_subgroups().unwrap().len(), 10);
    }

    #[test]
    fn order_bound() {
        let z = fixtures::cyclic(50);
        assert!(matches!(z.group.enumerate_subgroups(), Err(Error::OrderBoundExceeded { .. })));
        assert_eq!(z.group.enumerate_subgroups_bounded(64).unwrap().len(), 6);
    }

    #[test]
    fn lagrange_holds_on_fixtures() {
        for fx in fixtures::all() {
            for h in fx.group.enumerate_subgroups().unwrap() {
                assert_eq!(fx.group.order() % h.order(), 0, "{}", fx.name);
            }
        }
    }

    #[test]
    fn conjugacy_classes_and_normality() {
        let z6 = fixtures::cyclic(6).group;
        assert!(z6.conjugacy_classes().iter().all(|c| c.len() == 1));
        let s3 = fixtures::symmetric(3).group;
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let subs = s3.enumerate_subgroups().unwrap();
        assert!(!s3.is_normal(&subs[1]));
        assert!(s3.is_normal(&subs[4]));
        assert_eq!(subs[4].order(), 3);
    }

    #[test]
    fn convolution_examples() {
        let z2 = fixtures::cyclic(2).group;
        let x = GroupFunction::new(z2.clone(), vec![cr(1.0), cr(2.0)]).unwrap();
        let y = GroupFunction::new(z2.clone(), vec![cr(3.0), cr(4.0)]).unwrap();
        let f = convolve(&x, &y, Convention::Function).unwrap();
        assert_eq!(f.values(), &[cr(5.5), cr(5.0)]);
        let e = GroupFunction::delta(z2.clone(), 0);
        assert_eq!(convolve(&e, &y, Convention::Measure).unwrap(), y);

        let s3 = fixtures::symmetric(3).group;
        for a in 0..6 {
            for b in 0..6 {
                let d = convolve(
                    &GroupFunction::delta(s3.clone(), a),
                    &GroupFunction::delta(s3.clone(), b),
                    Convention::Measure,
                )
                .unwrap();
                assert_eq!(d, GroupFunction::delta(s3.clone(), s3.mul(a, b)));
            }
        }
    }

    #[test]
    fn parent_mismatch() {
        let a = GroupFunction::delta(fixtures::cyclic(2).group, 0);
        let b = GroupFunction::delta(fixtures::cyclic(3).group, 0);
        assert_eq!(convolve(&a, &b, Convention::Measure), Err(Error::ParentMismatch));
    }
}
