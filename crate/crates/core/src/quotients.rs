//! Congruences and quotient solutions, simplicity, isomorphism and canonical
//! forms, chain invariants, dynamical extensions and the covering on 𝒢.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{labels_to_blocks, normalize_labels, UnionFind};
use crate::perm::{Perm, PermError, PermGroup};
use crate::solution::{Solution, SolutionError, Witness};

/// Default bound on `n` for [`all_congruences`].
pub const DEFAULT_LATTICE_POINT_CAP: usize = 64;
/// Bound on the number of congruences [`all_congruences`] will materialize.
pub const DEFAULT_LATTICE_SIZE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuotientError {
    #[error("simplicity needs at least two points")]
    TooSmall,
    #[error("solution is decomposable")]
    Decomposable,
    #[error("{n} points exceeds the cap of {cap}")]
    TooManyPoints { n: usize, cap: usize },
    #[error("congruence lattice has more than {0} elements")]
    LatticeTooLarge(usize),
    #[error("partition is not a congruence: fails at {0}")]
    NotCongruence(Witness),
    #[error("partition has {got} points, solution has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("no chain of quotients ends at a simple solution")]
    NoChain,
    #[error("cocycle identity fails at (i,j,k,r,s,t) = {0:?}")]
    Cocycle([usize; 6]),
    #[error("cocycle table has wrong shape")]
    CocycleShape,
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A partition of the points compatible with every σ-map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Congruence {
    /// Wraps a label vector; labels are renumbered by first appearance.
    /// Does not check compatibility.
    pub fn from_labels(labels: &[usize]) -> Self {
        let class_of = normalize_labels(labels);
        let num_classes = class_of.iter().copied().max().map_or(0, |m| m + 1);
        Congruence {
            class_of,
            num_classes,
        }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn full(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        labels_to_blocks(&self.class_of)
    }

    pub fn is_discrete(&self) -> bool {
        self.num_classes == self.n()
    }

    pub fn is_full(&self) -> bool {
        self.num_classes <= 1
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut map = vec![usize::MAX; self.num_classes];
        for (&a, &b) in self.class_of.iter().zip(&other.class_of) {
            if map[a] == usize::MAX {
                map[a] = b;
            } else if map[a] != b {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CongruenceFile {
            n: self.n(),
            classes: self.classes(),
        })
        .expect("serializable")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CongruenceFile {
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
}

impl Serialize for Congruence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CongruenceFile {
            n: self.n(),
            classes: self.classes(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Congruence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = CongruenceFile::deserialize(deserializer)?;
        crate::partition::blocks_to_labels(file.n, &file.classes)
            .map(|l| Congruence::from_labels(&l))
            .ok_or_else(|| serde::de::Error::custom("classes do not partition 0..n"))
    }
}

/// Smallest congruence identifying every seeded pair, by union-find closure
/// under `x~x' ⇒ σ_x(y) ~ σ_{x'}(y)` and `y~y' ⇒ σ_x(y) ~ σ_x(y')`.
fn congruence_closure(s: &Solution, seeds: impl IntoIterator<Item = (usize, usize)>) -> Congruence {
    let n = s.n();
    let mut uf = UnionFind::new(n);
    let mut queue = VecDeque::new();
    for (a, b) in seeds {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        let (sa, sb) = (s.sigma(a), s.sigma(b));
        for y in 0..n {
            let (u, v) = (sa.apply(y), sb.apply(y));
            if uf.union(u, v) {
                queue.push_back((u, v));
            }
        }
        for x in 0..n {
            let sx = s.sigma(x);
            let (u, v) = (sx.apply(a), sx.apply(b));
            if uf.union(u, v) {
                queue.push_back((u, v));
            }
        }
    }
    Congruence::from_labels(&uf.class_labels())
}

pub fn principal_congruence(s: &Solution, a: usize, b: usize) -> Congruence {
    congruence_closure(s, [(a, b)])
}

/// Smallest congruence containing both.
pub fn join(s: &Solution, c: &Congruence, d: &Congruence) -> Congruence {
    let pairs = |labels: &[usize]| {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            match first.get(&l) {
                Some(&r) => out.push((r, x)),
                None => {
                    first.insert(l, x);
                }
            }
        }
        out
    };
    let mut seeds = pairs(&c.class_of);
    seeds.extend(pairs(&d.class_of));
    congruence_closure(s, seeds)
}

/// First `(x, y)` where the partition is incompatible with σ: some `x'~x`,
/// `y'~y` has `σ_x(y)` and `σ_{x'}(y')` in different classes.
pub fn compatibility_witness(s: &Solution, labels: &[usize]) -> Option<Witness> {
    let n = s.n();
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut table = vec![usize::MAX; k * k];
    for x in 0..n {
        for y in 0..n {
            let cell = &mut table[labels[x] * k + labels[y]];
            let v = labels[s.sigma(x).apply(y)];
            if *cell == usize::MAX {
                *cell = v;
            } else if *cell != v {
                return Some(Witness::Pair(x, y));
            }
        }
    }
    None
}

pub fn is_congruence(s: &Solution, labels: &[usize]) -> bool {
    labels.len() == s.n() && compatibility_witness(s, labels).is_none()
}

/// The full congruence lattice, ordered by number of classes descending and
/// then by class vector.
pub fn all_congruences(s: &Solution) -> Result<Vec<Congruence>, QuotientError> {
    all_congruences_with_caps(s, DEFAULT_LATTICE_POINT_CAP, DEFAULT_LATTICE_SIZE_CAP)
}

pub fn all_congruences_with_caps(
    s: &Solution,
    point_cap: usize,
    size_cap: usize,
) -> Result<Vec<Congruence>, QuotientError> {
    let n = s.n();
    if n > point_cap {
        return Err(QuotientError::TooManyPoints { n, cap: point_cap });
    }
    let mut seen: HashSet<Congruence> = HashSet::new();
    let mut principals = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = principal_congruence(s, a, b);
            if seen.insert(c.clone()) {
                principals.push(c);
            }
        }
    }
    // Every congruence is the join of the principal ones it contains.
    let mut found: Vec<Congruence> = principals.clone();
    let mut i = 0;
    while i < found.len() {
        for p in &principals {
            if p.refines(&found[i]) {
                continue;
            }
            let joined = join(s, &found[i], p);
            if seen.insert(joined.clone()) {
                if seen.len() > size_cap {
                    return Err(QuotientError::LatticeTooLarge(size_cap));
                }
                found.push(joined);
            }
        }
        i += 1;
    }
    let discrete = Congruence::discrete(n);
    if seen.insert(discrete.clone()) {
        found.push(discrete);
    }
    let full = Congruence::full(n);
    if seen.insert(full.clone()) {
        found.push(full);
    }
    found.sort_by(|a, b| {
        b.num_classes
            .cmp(&a.num_classes)
            .then_with(|| a.class_of.cmp(&b.class_of))
    });
    Ok(found)
}

/// The induced solution on the classes of `c` and the class map.
pub fn quotient(s: &Solution, c: &Congruence) -> Result<(Solution, Vec<usize>), QuotientError> {
    if c.n() != s.n() {
        return Err(QuotientError::SizeMismatch {
            expected: s.n(),
            got: c.n(),
        });
    }
    let q = s
        .quotient_by_labels(&c.class_of)
        .map_err(QuotientError::NotCongruence)?;
    if s.is_indecomposable() {
        let mut sizes = vec![0usize; c.num_classes];
        for &l in &c.class_of {
            sizes[l] += 1;
        }
        assert!(
            sizes.iter().all(|&z| z == sizes[0]),
            "fibers of an epimorphism from an indecomposable solution have equal size"
        );
    }
    Ok((q, c.class_of.clone()))
}

/// Decides simplicity. When not simple, also returns a congruence that is
/// neither discrete nor full.
pub fn is_simple(s: &Solution) -> Result<(bool, Option<Congruence>), QuotientError> {
    let n = s.n();
    if n < 2 {
        return Err(QuotientError::TooSmall);
    }
    if n == 2 {
        return Ok((true, None));
    }
    let orbits = s.orbits();
    if orbits.len() > 1 {
        // A union of orbits against its complement is always compatible.
        let mut labels = vec![1; n];
        for &x in &orbits[0] {
            labels[x] = 0;
        }
        return Ok((false, Some(Congruence::from_labels(&labels))));
    }
    // Classes of a congruence on an indecomposable solution are blocks, so a
    // proper one contains a pair through 0.
    for b in 1..n {
        let c = principal_congruence(s, 0, b);
        if !c.is_full() {
            return Ok((false, Some(c)));
        }
    }
    Ok((true, None))
}

fn point_fingerprints(s: &Solution) -> Vec<(usize, Vec<usize>, usize, usize)> {
    let n = s.n();
    let orbits = s.orbits();
    let mut orbit_size = vec![0; n];
    for o in &orbits {
        for &x in o {
            orbit_size[x] = o.len();
        }
    }
    let mut fixed_by = vec![0; n];
    for y in 0..n {
        for x in 0..n {
            if s.sigma(y).apply(x) == x {
                fixed_by[x] += 1;
            }
        }
    }
    (0..n)
        .map(|x| {
            let sx = s.sigma(x);
            let mut len = 1;
            let mut y = sx.apply(x);
            while y != x {
                y = sx.apply(y);
                len += 1;
            }
            (len, sx.cycle_type(), fixed_by[x], orbit_size[x])
        })
        .collect()
}

struct IsoSearch<'a> {
    s: &'a Solution,
    t: &'a Solution,
    fs: Vec<usize>,
    ft: Vec<usize>,
    f: Vec<usize>,
    finv: Vec<usize>,
    trail: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl IsoSearch<'_> {
    fn assign(&mut self, x: usize, y: usize, queue: &mut Vec<usize>) -> bool {
        match (self.f[x], self.finv[y]) {
            (NONE, NONE) if self.fs[x] == self.ft[y] => {
                self.f[x] = y;
                self.finv[y] = x;
                self.trail.push(x);
                queue.push(x);
                true
            }
            (fx, _) => fx == y,
        }
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(a) = queue.pop() {
            let a2 = self.f[a];
            let assigned: Vec<usize> = self.trail.clone();
            for b in assigned {
                let b2 = self.f[b];
                let forced = [
                    (self.s.sigma(a).apply(b), self.t.sigma(a2).apply(b2)),
                    (self.s.sigma(b).apply(a), self.t.sigma(b2).apply(a2)),
                    (self.s.sigma_inv(a).apply(b), self.t.sigma_inv(a2).apply(b2)),
                    (self.s.sigma_inv(b).apply(a), self.t.sigma_inv(b2).apply(a2)),
                ];
                for (x, y) in forced {
                    if !self.assign(x, y, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().unwrap();
            self.finv[self.f[x]] = NONE;
            self.f[x] = NONE;
        }
    }

    fn search(&mut self) -> bool {
        let Some(x) = self.f.iter().position(|&v| v == NONE) else {
            return true;
        };
        let n = self.f.len();
        for y in 0..n {
            if self.finv[y] != NONE || self.fs[x] != self.ft[y] {
                continue;
            }
            let mark = self.trail.len();
            let mut queue = Vec::new();
            if self.assign(x, y, &mut queue) && self.propagate(queue) && self.search() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// `f` is an isomorphism `s → t`: `f(σ_x(y)) = σ'_{f(x)}(f(y))`.
pub fn is_isomorphism(s: &Solution, t: &Solution, f: &[usize]) -> bool {
    let n = s.n();
    n == t.n()
        && f.len() == n
        && crate::perm::is_bijection(f)
        && (0..n).all(|x| (0..n).all(|y| f[s.sigma(x).apply(y)] == t.sigma(f[x]).apply(f[y])))
}

/// A bijection `f` with `f σ_x f⁻¹ = σ'_{f(x)}`, if one exists.
pub fn find_isomorphism(s: &Solution, t: &Solution) -> Option<Vec<usize>> {
    let n = s.n();
    if n != t.n() {
        return None;
    }
    let (ps, pt) = (point_fingerprints(s), point_fingerprints(t));
    let mut sorted_s = ps.clone();
    let mut sorted_t = pt.clone();
    sorted_s.sort();
    sorted_t.sort();
    if sorted_s != sorted_t {
        return None;
    }
    let ids: HashMap<_, usize> = sorted_s
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, fp)| (fp, i))
        .collect();
    let mut search = IsoSearch {
        s,
        t,
        fs: ps.iter().map(|fp| ids[fp]).collect(),
        ft: pt.iter().map(|fp| ids[fp]).collect(),
        f: vec![NONE; n],
        finv: vec![NONE; n],
        trail: Vec::new(),
    };
    if search.search() {
        let f = search.f;
        assert!(is_isomorphism(s, t, &f), "isomorphism search returned a non-isomorphism");
        Some(f)
    } else {
        None
    }
}

struct Canon<'a> {
    s: &'a Solution,
    n: usize,
    rank: Vec<usize>,
    label: Vec<usize>,
    point: Vec<usize>,
    cur: Vec<usize>,
    best: Option<Vec<usize>>,
    best_points: Vec<usize>,
}

impl Canon<'_> {
    fn cell(&mut self, r: usize, c: usize) -> usize {
        let v = self.s.sigma(self.point[r]).apply(self.point[c]);
        if self.label[v] == NONE {
            self.label[v] = self.point.len();
            self.point.push(v);
        }
        self.label[v]
    }

    /// Fills shell `k` (cells `(i,k)` for `i<k`, then `(k,j)` for `j≤k`) and
    /// recurses. Returns true when `best` was replaced.
    fn shell(&mut self, k: usize, mut less: bool) -> bool {
        let mark = self.point.len();
        let mut alive = true;
        for idx in 0..2 * k + 1 {
            let (r, c) = if idx < k { (idx, k) } else { (k, idx - k) };
            let v = self.cell(r, c);
            self.cur.push(v);
            if !less {
                if let Some(best) = &self.best {
                    let b = best[self.cur.len() - 1];
                    if v > b {
                        alive = false;
                        break;
                    }
                    less = v < b;
                }
            }
        }
        let updated = alive && self.descend(k + 1, less);
        self.cur.truncate(k * k);
        for p in self.point.drain(mark..) {
            self.label[p] = NONE;
        }
        updated
    }

    fn descend(&mut self, k: usize, mut less: bool) -> bool {
        if k == self.n {
            if less || self.best.is_none() {
                self.best = Some(self.cur.clone());
                self.best_points = self.point.clone();
                return true;
            }
            return false;
        }
        if self.point.len() > k {
            return self.shell(k, less);
        }
        let min_rank = (0..self.n)
            .filter(|&x| self.label[x] == NONE)
            .map(|x| self.rank[x])
            .min()
            .expect("an unlabeled point remains");
        let mut updated = false;
        for x in 0..self.n {
            if self.label[x] != NONE || self.rank[x] != min_rank {
                continue;
            }
            self.label[x] = k;
            self.point.push(x);
            if self.shell(k, less) {
                updated = true;
                // The current prefix now equals the new best.
                less = false;
            }
            self.point.pop();
            self.label[x] = NONE;
        }
        updated
    }
}

/// Canonical σ-table and the relabeling `old point ↦ new point` producing it.
///
/// Cells are compared in shell order (for each `k`: column `k` above the
/// diagonal, then row `k` up to the diagonal); a point not yet named when it
/// first appears as a value takes the next free name, so only the point that
/// receives name `k` when none is forced is branched on. Branch candidates
/// are restricted to the smallest class of an isomorphism-invariant point
/// fingerprint. Isomorphic solutions get equal tables.
pub fn canonical_labeling(s: &Solution) -> (Vec<Vec<usize>>, Perm) {
    let n = s.n();
    let fps = point_fingerprints(s);
    let mut sorted = fps.clone();
    sorted.sort();
    sorted.dedup();
    let rank = fps
        .iter()
        .map(|fp| sorted.binary_search(fp).expect("present"))
        .collect();
    let mut canon = Canon {
        s,
        n,
        rank,
        label: vec![NONE; n],
        point: Vec::with_capacity(n),
        cur: Vec::with_capacity(n * n),
        best: None,
        best_points: Vec::new(),
    };
    canon.descend(0, false);
    let cells = canon.best.expect("search reaches a leaf");
    let mut table = vec![vec![0; n]; n];
    let mut it = cells.into_iter();
    for k in 0..n {
        for i in 0..k {
            table[i][k] = it.next().unwrap();
        }
        for j in 0..=k {
            table[k][j] = it.next().unwrap();
        }
    }
    let mut relabel = vec![0; n];
    for (new, &old) in canon.best_points.iter().enumerate() {
        relabel[old] = new;
    }
    (table, Perm::new(relabel).expect("labels form a bijection"))
}

pub fn canonical_form(s: &Solution) -> Vec<Vec<usize>> {
    canonical_labeling(s).0
}

/// Proper quotients with more than one point, one per isomorphism class.
fn proper_quotients(s: &Solution) -> Result<Vec<Solution>, QuotientError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in all_congruences(s)? {
        if c.is_discrete() || c.is_full() {
            continue;
        }
        let (q, _) = quotient(s, &c)?;
        if seen.insert(canonical_form(&q)) {
            out.push(q);
        }
    }
    Ok(out)
}

fn composition_rec(
    s: &Solution,
    memo: &mut HashMap<Vec<Vec<usize>>, usize>,
) -> Result<usize, QuotientError> {
    let key = canonical_form(s);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let value = if is_simple(s)?.0 {
        1
    } else {
        let mut best = 0;
        for q in proper_quotients(s)? {
            best = best.max(1 + composition_rec(&q, memo)?);
        }
        best
    };
    memo.insert(key, value);
    Ok(value)
}

/// Longest chain of strictly shrinking epimorphic images ending at a simple
/// solution. Intermediate solutions are not required to be indecomposable
/// beyond what quotients of indecomposable solutions already are.
pub fn composition_length(s: &Solution) -> Result<usize, QuotientError> {
    if !s.is_indecomposable() {
        return Err(QuotientError::Decomposable);
    }
    if s.n() < 2 {
        return Err(QuotientError::NoChain);
    }
    composition_rec(s, &mut HashMap::new())
}

fn primitive_rec(
    s: &Solution,
    memo: &mut HashMap<Vec<Vec<usize>>, Option<usize>>,
) -> Result<Option<usize>, QuotientError> {
    let key = canonical_form(s);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let mut best = s.is_primitive().then_some(1);
    for q in proper_quotients(s)? {
        if let Some(k) = primitive_rec(&q, memo)? {
            best = best.max(Some(k + 1));
        }
    }
    memo.insert(key, best);
    Ok(best)
}

/// Longest chain of strictly shrinking epimorphic images, all of size > 1,
/// ending at a primitive solution; `None` when no such chain exists.
pub fn primitive_level(s: &Solution) -> Result<Option<usize>, QuotientError> {
    if !s.is_indecomposable() {
        return Err(QuotientError::Decomposable);
    }
    if s.n() < 2 {
        return Ok(None);
    }
    primitive_rec(s, &mut HashMap::new())
}

/// A dynamical cocycle `α: Y×Y×S → Sym(S)`; `maps[(i·|Y| + j)·|S| + r]`
/// is `α_{(i,j)}(r, ·)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    pub y_size: usize,
    pub s_size: usize,
    pub maps: Vec<Perm>,
}

impl Cocycle {
    pub fn constant(y_size: usize, s_size: usize, p: &Perm) -> Self {
        Cocycle {
            y_size,
            s_size,
            maps: vec![p.clone(); y_size * y_size * s_size],
        }
    }

    #[inline]
    pub fn apply(&self, i: usize, j: usize, r: usize, s: usize) -> usize {
        self.maps[(i * self.y_size + j) * self.s_size + r].apply(s)
    }

    pub fn map_mut(&mut self, i: usize, j: usize, r: usize) -> &mut Perm {
        &mut self.maps[(i * self.y_size + j) * self.s_size + r]
    }

    /// First `(i,j,k,r,s,t)` violating the cocycle identity over `y_dot`.
    pub fn violation(&self, y_dot: &[Vec<usize>]) -> Option<[usize; 6]> {
        let (ny, ns) = (self.y_size, self.s_size);
        for i in 0..ny {
            for j in 0..ny {
                for k in 0..ny {
                    let (ij, ik, ji, jk) = (y_dot[i][j], y_dot[i][k], y_dot[j][i], y_dot[j][k]);
                    for r in 0..ns {
                        for s in 0..ns {
                            for t in 0..ns {
                                let lhs = self.apply(ij, ik, self.apply(i, j, r, s), self.apply(i, k, r, t));
                                let rhs = self.apply(ji, jk, self.apply(j, i, s, r), self.apply(j, k, s, t));
                                if lhs != rhs {
                                    return Some([i, j, k, r, s, t]);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// The extension `S ×_α Y` as a solution, with points `(s, i) ↦ i·|S| + s`,
/// and the projection onto `Y`, checked to be an epimorphism.
pub fn dynamical_extension(
    y_dot: &[Vec<usize>],
    alpha: &Cocycle,
) -> Result<(Solution, Vec<usize>), QuotientError> {
    let base = Solution::from_cycle_set(y_dot.to_vec())?;
    let (ny, ns) = (alpha.y_size, alpha.s_size);
    if ny != y_dot.len()
        || alpha.maps.len() != ny * ny * ns
        || alpha.maps.iter().any(|p| p.degree() != ns)
    {
        return Err(QuotientError::CocycleShape);
    }
    if let Some(w) = alpha.violation(y_dot) {
        return Err(QuotientError::Cocycle(w));
    }
    let n = ny * ns;
    let mut dot = vec![vec![0; n]; n];
    for i in 0..ny {
        for s in 0..ns {
            for j in 0..ny {
                for t in 0..ns {
                    dot[i * ns + s][j * ns + t] = y_dot[i][j] * ns + alpha.apply(i, j, s, t);
                }
            }
        }
    }
    let sol = Solution::from_cycle_set(dot)?;
    let proj: Vec<usize> = (0..n).map(|x| x / ns).collect();
    for x in 0..n {
        for y in 0..n {
            assert_eq!(
                proj[sol.sigma(x).apply(y)],
                base.sigma(proj[x]).apply(proj[y]),
                "projection is an epimorphism"
            );
        }
    }
    Ok((sol, proj))
}

/// Quotient cycle-set table, cocycle and the point map of [`extract_cocycle`].
pub type ExtractedCocycle = (Vec<Vec<usize>>, Cocycle, Vec<usize>);

/// Writes `s` as a dynamical extension of its quotient by `c`, whose fibers
/// must have equal size. Fiber points are identified with `0..|S|` in
/// increasing order. Returns the quotient cycle set, the cocycle and the
/// map `(s, i) ↦` original point.
pub fn extract_cocycle(
    s: &Solution,
    c: &Congruence,
) -> Result<ExtractedCocycle, QuotientError> {
    let (q, _) = quotient(s, c)?;
    let fibers = c.classes();
    let ns = fibers[0].len();
    if fibers.iter().any(|f| f.len() != ns) {
        return Err(QuotientError::CocycleShape);
    }
    let ny = fibers.len();
    let mut index_in_fiber = vec![0; s.n()];
    for f in &fibers {
        for (k, &x) in f.iter().enumerate() {
            index_in_fiber[x] = k;
        }
    }
    let dot = s.to_cycle_set();
    let mut maps = Vec::with_capacity(ny * ny * ns);
    for i in 0..ny {
        for j in 0..ny {
            for r in 0..ns {
                let image: Vec<usize> = (0..ns)
                    .map(|t| index_in_fiber[dot[fibers[i][r]][fibers[j][t]]])
                    .collect();
                maps.push(Perm::new(image)?);
            }
        }
    }
    let mut embed = vec![0; s.n()];
    for i in 0..ny {
        for r in 0..ns {
            embed[i * ns + r] = fibers[i][r];
        }
    }
    Ok((
        q.to_cycle_set(),
        Cocycle {
            y_size: ny,
            s_size: ns,
            maps,
        },
        embed,
    ))
}

/// The solution `c_{x,𝒢}` on `𝒢(X,r)` (points are indices into the group's
/// element list) and the epimorphism `p(g) = g⁻¹(x)`.
pub fn covering_solution(
    s: &Solution,
    x: usize,
) -> Result<(Solution, Vec<usize>, PermGroup), QuotientError> {
    if !s.is_indecomposable() {
        return Err(QuotientError::Decomposable);
    }
    let group = s.permutation_group()?;
    let elems = group.elements();
    let m = elems.len();
    let idx = |p: &Perm| group.index_of(p).expect("closed under composition");
    let p_map: Vec<usize> = elems.iter().map(|g| g.inverse().apply(x)).collect();
    let table: Vec<Vec<usize>> = (0..m)
        .map(|g| {
            let right = s.sigma_inv(p_map[g]);
            (0..m).map(|h| idx(&elems[h].compose_unchecked(right))).collect()
        })
        .collect();
    let cover = Solution::from_table(table)?;
    for g in 0..m {
        for h in 0..m {
            let a = s.sigma(p_map[g]).apply(p_map[h]);
            let second = idx(&elems[g].compose_unchecked(s.sigma(a)));
            assert_eq!(cover.gamma(h, g), second, "second component of the covering map");
            assert_eq!(
                p_map[cover.sigma(g).apply(h)],
                s.sigma(p_map[g]).apply(p_map[h]),
                "p is a homomorphism"
            );
        }
    }
    Ok((cover, p_map, group))
}

/// Stabilizer of `x` in `𝒢(X,r)`.
pub fn fundamental_group(s: &Solution, x: usize) -> Result<PermGroup, QuotientError> {
    if !s.is_indecomposable() {
        return Err(QuotientError::Decomposable);
    }
    Ok(s.permutation_group()?.stabilizer(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::all_set_partitions;

    fn perm_solution(p: Perm) -> Solution {
        Solution::from_perms(vec![p.clone(); p.degree()]).unwrap()
    }

    fn trivial(n: usize) -> Solution {
        perm_solution(Perm::identity(n))
    }

    #[test]
    fn principal_congruence_of_equal_points_is_discrete() {
        let s = perm_solution(Perm::shift(4));
        assert!(principal_congruence(&s, 2, 2).is_discrete());
        // In the 4-cycle, identifying 0 and 2 gives the parity classes.
        assert_eq!(principal_congruence(&s, 0, 2).classes(), vec![vec![0, 2], vec![1, 3]]);
        assert!(principal_congruence(&s, 0, 1).is_full());
    }

    #[test]
    fn lattice_matches_brute_force() {
        for s in [trivial(3), perm_solution(Perm::shift(4)), perm_solution(Perm::shift(5))] {
            let brute: Vec<Congruence> = all_set_partitions(s.n())
                .into_iter()
                .filter(|l| is_congruence(&s, l))
                .map(|l| Congruence::from_labels(&l))
                .collect();
            let mut lattice = all_congruences(&s).unwrap();
            let mut b = brute.clone();
            lattice.sort();
            b.sort();
            assert_eq!(lattice, b);
        }
        assert_eq!(all_congruences(&trivial(2)).unwrap().len(), 2);
    }

    #[test]
    fn simplicity_of_cycles() {
        assert!(is_simple(&perm_solution(Perm::shift(5))).unwrap().0);
        let (simple, witness) = is_simple(&perm_solution(Perm::shift(4))).unwrap();
        assert!(!simple);
        assert_eq!(witness.unwrap().num_classes(), 2);
        assert_eq!(is_simple(&trivial(1)), Err(QuotientError::TooSmall));
        assert!(is_simple(&trivial(2)).unwrap().0);
        let (simple, witness) = is_simple(&trivial(3)).unwrap();
        assert!(!simple);
        assert_eq!(witness.unwrap().num_classes(), 2);
    }

    #[test]
    fn quotient_rejects_non_congruence() {
        let s = perm_solution(Perm::shift(4));
        let bad = Congruence::from_labels(&[0, 0, 1, 1]);
        assert!(matches!(quotient(&s, &bad), Err(QuotientError::NotCongruence(_))));
        let (q, f) = quotient(&s, &Congruence::full(4)).unwrap();
        assert_eq!(q.n(), 1);
        assert_eq!(f, vec![0; 4]);
        let (q, _) = quotient(&s, &Congruence::discrete(4)).unwrap();
        assert_eq!(q, s);
    }

    #[test]
    fn isomorphism_and_canonical_form_agree_on_cycles() {
        let a = perm_solution(Perm::shift(4));
        let b = perm_solution(Perm::parse_cycles(4, "(1,3,2,4)").unwrap());
        let c = perm_solution(Perm::parse_cycles(4, "(1,2)(3,4)").unwrap());
        let f = find_isomorphism(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &f));
        assert!(find_isomorphism(&a, &c).is_none());
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&c));
        let (table, pi) = canonical_labeling(&a);
        assert_eq!(a.relabel(&pi).table(), table);
    }

    #[test]
    fn chain_invariants_of_prime_square_cycle() {
        let s = perm_solution(Perm::shift(9));
        assert_eq!(composition_length(&s).unwrap(), 2);
        assert_eq!(primitive_level(&s).unwrap(), Some(2));
        let p = perm_solution(Perm::shift(3));
        assert_eq!(composition_length(&p).unwrap(), 1);
        assert_eq!(primitive_level(&p).unwrap(), Some(1));
        assert_eq!(composition_length(&trivial(3)), Err(QuotientError::Decomposable));
    }

    #[test]
    fn constant_identity_cocycle_over_trivial_base() {
        let y_dot = vec![vec![0, 1], vec![0, 1]];
        let alpha = Cocycle::constant(2, 2, &Perm::identity(2));
        let (sol, proj) = dynamical_extension(&y_dot, &alpha).unwrap();
        assert_eq!(sol.n(), 4);
        assert!(!sol.is_indecomposable());
        assert_eq!(proj, vec![0, 0, 1, 1]);
    }

    #[test]
    fn cocycle_round_trip_on_four_cycle() {
        let s = perm_solution(Perm::shift(4));
        let (_, witness) = is_simple(&s).unwrap();
        let c = witness.unwrap();
        let (y_dot, alpha, embed) = extract_cocycle(&s, &c).unwrap();
        let (ext, _) = dynamical_extension(&y_dot, &alpha).unwrap();
        assert!(is_isomorphism(&ext, &s, &embed));
    }

    #[test]
    fn covering_of_prime_cycle_is_isomorphic() {
        let s = perm_solution(Perm::shift(5));
        let (cover, p, group) = covering_solution(&s, 0).unwrap();
        assert_eq!(group.order(), 5);
        assert!(is_isomorphism(&cover, &s, &p));
        assert_eq!(fundamental_group(&s, 0).unwrap().order(), 1);
    }

    #[test]
    fn congruence_json() {
        let c = Congruence::from_labels(&[1, 0, 1]);
        assert_eq!(c.to_json(), r#"{"n":3,"classes":[[0,2],[1]]}"#);
        let back: Congruence = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
