//! Permutations of `{0,…,n−1}` and permutation groups given by explicit
//! element lists.
//!
//! Composition follows the functional convention: `p.compose(&q)` applies `q`
//! first and then `p`. Text I/O uses 1-based disjoint-cycle notation such as
//! `(1,2,4,3)`; the identity renders as `()`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{labels_to_blocks, UnionFind};

/// Default bound on the number of elements [`closure`] will materialize.
pub const DEFAULT_GROUP_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image {0:?} is not a bijection of 0..{len}", len = .0.len())]
    NotBijection(Vec<usize>),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("group too large: more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("group action is not transitive")]
    Intransitive,
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A bijection of `{0,…,n−1}`; `image[i]` is where `i` is sent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    image: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = PermError;

    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Perm::new(image)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.image
    }
}

pub(crate) fn is_bijection(image: &[usize]) -> bool {
    let n = image.len();
    let mut seen = vec![false; n];
    for &v in image {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl Perm {
    pub fn new(image: Vec<usize>) -> Result<Self, PermError> {
        if is_bijection(&image) {
            Ok(Perm { image })
        } else {
            Err(PermError::NotBijection(image))
        }
    }

    /// Caller guarantees `image` is a bijection.
    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(is_bijection(&image));
        Perm { image }
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            image: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(PermError::Parse(format!(
                        "cycles {cycles:?} are not disjoint on 0..{n}"
                    )));
                }
                touched[a] = true;
                image[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::new(image)
    }

    /// The `n`-cycle `i ↦ i+1 mod n`.
    pub fn shift(n: usize) -> Self {
        Perm {
            image: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// Parses 1-based cycle notation, e.g. `"(1,6,3)(2,9,8)"` or `"()"`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, PermError> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles = Vec::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {text:?}")))?;
            let inner = &body[..close];
            if !inner.is_empty() {
                let cycle = inner
                    .split(',')
                    .map(|tok| match tok.parse::<usize>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(PermError::Parse(format!("bad label {tok:?} in {text:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                cycles.push(cycle);
            }
            rest = &body[close + 1..];
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Perm { image: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        lengths
    }

    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type()
            .into_iter()
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Relabels by `pi`: returns `pi ∘ self ∘ pi⁻¹`.
    pub fn conjugate_by(&self, pi: &Perm) -> Perm {
        let mut image = vec![0; self.degree()];
        for (i, &v) in self.image.iter().enumerate() {
            image[pi.image[i]] = pi.image[v];
        }
        Perm { image }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `p ∘ q`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm, PermError> {
    p.compose(q)
}

pub fn cycle_type(p: &Perm) -> Vec<usize> {
    p.cycle_type()
}

fn check_degrees(degree: usize, gens: &[Perm]) -> Result<(), PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    Ok(())
}

/// A finite permutation group stored as its full element list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in breadth-first order from the identity (index 0).
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.generators).expect("generators share the group degree")
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() <= 1
    }

    /// The subgroup fixing `point`, generated by (and listed as) its elements.
    pub fn stabilizer(&self, point: usize) -> PermGroup {
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| g.apply(point) == point)
            .cloned()
            .collect();
        PermGroup::from_closed_elements(self.degree, elements.clone(), elements)
    }

    /// Wraps an element list already known to be a group (identity first).
    fn from_closed_elements(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        PermGroup {
            degree,
            generators,
            elements,
            index,
        }
    }
}

/// The group generated by `gens`, enumerated breadth-first from the identity
/// with generators applied in the given order.
pub fn closure(degree: usize, gens: &[Perm]) -> Result<PermGroup, PermError> {
    closure_with_cap(degree, gens, DEFAULT_GROUP_CAP)
}

pub fn closure_with_cap(degree: usize, gens: &[Perm], cap: usize) -> Result<PermGroup, PermError> {
    check_degrees(degree, gens)?;
    let identity = Perm::identity(degree);
    let mut index: HashMap<Perm, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for s in gens {
            let h = elements[i].compose_unchecked(s);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(PermError::GroupTooLarge { cap });
                }
                index.insert(h.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
    }
    Ok(PermGroup {
        degree,
        generators: gens.to_vec(),
        elements,
        index,
    })
}

/// Orbits of the group generated by `gens`, as sorted blocks ordered by least point.
pub fn orbits(degree: usize, gens: &[Perm]) -> Result<Vec<Vec<usize>>, PermError> {
    check_degrees(degree, gens)?;
    let mut uf = UnionFind::new(degree);
    for g in gens {
        for x in 0..degree {
            uf.union(x, g.apply(x));
        }
    }
    Ok(labels_to_blocks(&uf.class_labels()))
}

/// Finest partition invariant under `gens` in which every seeded pair shares a class.
fn minimal_block_labels(degree: usize, gens: &[Perm], seeds: &[(usize, usize)]) -> Vec<usize> {
    let mut uf = UnionFind::new(degree);
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for &(a, b) in seeds {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        for g in gens {
            let (ga, gb) = (g.apply(a), g.apply(b));
            if uf.union(ga, gb) {
                queue.push_back((ga, gb));
            }
        }
    }
    uf.class_labels()
}

fn label_pairs(labels: &[usize]) -> Vec<(usize, usize)> {
    let mut first: HashMap<usize, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for (x, &c) in labels.iter().enumerate() {
        match first.get(&c) {
            Some(&r) => pairs.push((r, x)),
            None => {
                first.insert(c, x);
            }
        }
    }
    pairs
}

/// Every nontrivial system of imprimitivity of the transitive group generated
/// by `gens`. Empty exactly when the action is primitive.
///
/// Minimal blocks are seeded by each pair `{0, b}`; the remaining systems are
/// joins of those, so the set is closed under pairwise joins.
pub fn block_systems(degree: usize, gens: &[Perm]) -> Result<Vec<Vec<Vec<usize>>>, PermError> {
    if orbits(degree, gens)?.len() > 1 {
        return Err(PermError::Intransitive);
    }
    let nontrivial = |labels: &Vec<usize>| labels.iter().any(|&c| c != 0);
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for b in 1..degree {
        let labels = minimal_block_labels(degree, gens, &[(0, b)]);
        if nontrivial(&labels) && seen.insert(labels.clone()) {
            found.push(labels);
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let mut seeds = label_pairs(&found[i]);
            seeds.extend(label_pairs(&found[j]));
            let joined = minimal_block_labels(degree, gens, &seeds);
            if nontrivial(&joined) && seen.insert(joined.clone()) {
                found.push(joined);
            }
        }
        i += 1;
    }
    let mut systems: Vec<Vec<Vec<usize>>> = found.iter().map(|l| labels_to_blocks(l)).collect();
    systems.sort_by(|a, b| a[0].len().cmp(&b[0].len()).then_with(|| a.cmp(b)));
    Ok(systems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = p(3, "(1,2)");
        let b = p(3, "(2,3)");
        assert_eq!(compose(&a, &b).unwrap().image(), &[1, 2, 0]);
        assert_eq!(compose(&b, &a).unwrap().image(), &[2, 0, 1]);
        assert_eq!(compose(&Perm::identity(3), &a).unwrap(), a);
        assert!(compose(&a, &a.inverse()).unwrap().is_identity());
        assert_eq!(
            compose(&a, &Perm::identity(4)),
            Err(PermError::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn cycle_text_round_trip() {
        let q = p(4, "(1,2,4,3)");
        assert_eq!(q.image(), &[1, 3, 0, 2]);
        assert_eq!(q.to_string(), "(1,2,4,3)");
        assert_eq!(Perm::identity(5).to_string(), "()");
        assert_eq!(p(5, "()"), Perm::identity(5));
        assert!(Perm::parse_cycles(3, "(1,4)").is_err());
        assert!(Perm::parse_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Perm::parse_cycles(3, "1,2").is_err());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Perm::identity(4).cycle_type(), vec![1, 1, 1, 1]);
        assert_eq!(p(4, "(1,2,4,3)").cycle_type(), vec![4]);
        assert_eq!(p(4, "(1,2)(3,4)").cycle_type(), vec![2, 2]);
        assert_eq!(p(6, "(1,2)(3,4,5)").order(), 6);
    }

    #[test]
    fn closure_orders() {
        assert_eq!(closure(2, &[p(2, "(1,2)")]).unwrap().order(), 2);
        let d4 = closure(4, &[p(4, "(1,2,3,4)"), p(4, "(1,3)")]).unwrap();
        assert_eq!(d4.order(), 8);
        assert!(d4.elements()[0].is_identity());
        assert!(!d4.is_abelian());
        assert_eq!(closure(5, &[]).unwrap().order(), 1);
        assert_eq!(
            closure_with_cap(4, &[p(4, "(1,2,3,4)"), p(4, "(1,2)")], 10).unwrap_err(),
            PermError::GroupTooLarge { cap: 10 }
        );
    }

    #[test]
    fn orbits_basic() {
        assert_eq!(
            orbits(3, &[Perm::identity(3)]).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            orbits(3, &[p(3, "(1,2)")]).unwrap(),
            vec![vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn block_systems_of_dihedral_and_cyclic() {
        assert!(block_systems(3, &[p(3, "(1,2,3)")]).unwrap().is_empty());
        let systems = block_systems(4, &[p(4, "(1,2,3,4)"), p(4, "(1,3)")]).unwrap();
        assert_eq!(systems, vec![vec![vec![0, 2], vec![1, 3]]]);
        // Z/6 acting regularly has block systems for each proper nontrivial subgroup.
        let systems = block_systems(6, &[Perm::shift(6)]).unwrap();
        assert_eq!(systems.len(), 2);
        assert_eq!(
            block_systems(3, &[p(3, "(1,2)")]).unwrap_err(),
            PermError::Intransitive
        );
    }

    #[test]
    fn stabilizer_index_is_orbit_length() {
        let d4 = closure(4, &[p(4, "(1,2,3,4)"), p(4, "(1,3)")]).unwrap();
        let stab = d4.stabilizer(0);
        assert_eq!(stab.order(), 2);
        assert!(stab.elements().iter().all(|g| g.apply(0) == 0));
    }
}
