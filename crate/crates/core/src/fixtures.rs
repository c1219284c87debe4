//! Built-in small groups used by tests, benches and the CLI.
//!
//! Permutation groups list their elements in lexicographic order of the
//! permutation images, so the identity is always element 0. Products compose
//! right to left: `(p q)(i) = p(q(i))`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::groups::FiniteGroup;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    /// Permutation images for permutation groups, indexed like the group.
    pub permutations: Option<Vec<Vec<usize>>>,
}

/// Names accepted by [`by_name`], in the order returned by [`all`].
pub const NAMES: [&str; 8] = ["Z2", "Z4", "Z6", "S3", "D4", "Q8", "A4", "S4"];

pub fn all() -> Vec<Fixture> {
    NAMES.iter().map(|n| by_name(n).expect("listed fixture")).collect()
}

/// Look up a fixture by name: `Zn`, `Sn`, `Dn`, `A4`, `Q8`, `V4`.
pub fn by_name(name: &str) -> Option<Fixture> {
    let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match name {
        "Q8" => Some(quaternion()),
        "A4" => Some(alternating4()),
        "V4" => Some(klein4()),
        _ => {
            if let Some(n) = parse("Z").filter(|&n| (1..=128).contains(&n)) {
                Some(cyclic(n))
            } else if let Some(n) = parse("S").filter(|&n| (1..=5).contains(&n)) {
                Some(symmetric(n))
            } else if let Some(n) = parse("D").filter(|&n| (3..=64).contains(&n)) {
                Some(dihedral(n))
            } else {
                None
            }
        }
    }
}

/// Close a set of permutations under composition and build the group.
pub fn permutation_group(name: &str, generators: &[Vec<usize>]) -> Fixture {
    let degree = generators.first().map_or(1, Vec::len);
    let id: Vec<usize> = (0..degree).collect();
    let mut elements: BTreeSet<Vec<usize>> = BTreeSet::from([id]);
    let mut frontier: Vec<Vec<usize>> = elements.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for s in generators {
            let q = compose(&p, s);
            if elements.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let perms: Vec<Vec<usize>> = elements.into_iter().collect();
    let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
    let mult = perms.iter().map(|p| perms.iter().map(|q| index(&compose(p, q))).collect()).collect();
    let labels = perms.iter().map(|p| p.iter().map(usize::to_string).collect::<Vec<_>>().join("")).collect();
    let group = FiniteGroup::from_table(mult)
        .and_then(|g| g.with_labels(labels))
        .expect("permutation composition is a group");
    Fixture { name: name.to_string(), group: Arc::new(group), permutations: Some(perms) }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn shift(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|i| (i + k) % n).collect()
}

pub fn cyclic(n: usize) -> Fixture {
    if n == 1 {
        return permutation_group("Z1", &[vec![0]]);
    }
    permutation_group(&format!("Z{n}"), &[shift(n, 1)])
}

pub fn symmetric(n: usize) -> Fixture {
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
        gens.push(shift(n, 1));
    } else {
        gens.push((0..n).collect());
    }
    permutation_group(&format!("S{n}"), &gens)
}

pub fn alternating4() -> Fixture {
    permutation_group("A4", &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]])
}

/// Symmetries of the regular n-gon acting on its vertices; order 2n.
pub fn dihedral(n: usize) -> Fixture {
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    permutation_group(&format!("D{n}"), &[shift(n, 1), reflection])
}

pub fn klein4() -> Fixture {
    permutation_group("V4", &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

/// Quaternion group, elements ordered `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion() -> Fixture {
    // unit product table on (1, i, j, k): (sign, index)
    const UNIT: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let decode = |g: usize| (if g % 2 == 0 { 1i8 } else { -1 }, g / 2);
    let mult = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, ua) = decode(a);
                    let (sb, ub) = decode(b);
                    let (s, u) = UNIT[ua][ub];
                    2 * u + usize::from(sa * sb * s < 0)
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    let group = FiniteGroup::from_table(mult).and_then(|g| g.with_labels(labels)).expect("Q8 table");
    Fixture { name: "Q8".into(), group: Arc::new(group), permutations: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let orders: Vec<usize> = all().iter().map(|f| f.group.order()).collect();
        assert_eq!(orders, vec![2, 4, 6, 6, 8, 8, 12, 24]);
        assert_eq!(klein4().group.order(), 4);
    }

    #[test]
    fn identity_is_first() {
        for f in all() {
            assert_eq!(f.group.identity(), 0, "{}", f.name);
        }
    }

    #[test]
    fn abelian_exactly_where_expected() {
        for f in all() {
            let expect = matches!(f.name.as_str(), "Z2" | "Z4" | "Z6");
            assert_eq!(f.group.is_abelian(), expect, "{}", f.name);
        }
    }

    #[test]
    fn quaternion_structure() {
        let q = quaternion().group;
        // single involution -1, six elements of order 4
        let orders: Vec<usize> = q.elements().map(|g| q.element_order(g)).collect();
        assert_eq!(orders, vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(q.enumerate_subgroups().unwrap().len(), 6);
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("Z5").unwrap().group.order(), 5);
        assert_eq!(by_name("D5").unwrap().group.order(), 10);
        assert!(by_name("X3").is_none());
    }
}
