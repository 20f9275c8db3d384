//! Finite left braces stored as explicit operation tables.
//!
//! `a∘(b+c) + a = a∘b + a∘c`, with `λ_a(b) = −a + a∘b`. Element `0` of the
//! additive group is also the multiplicative identity.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{gcd, is_unit};
use crate::perm::{closure_with_cap, Perm, PermError, PermGroup, DEFAULT_GROUP_CAP};
use crate::quotients::{find_isomorphism, is_isomorphism};
use crate::solution::{Solution, SolutionError};

/// Tables at most this large get an exhaustive triple scan, so the reported
/// witness is the lexicographically first one.
const FULL_SCAN_ORDER: usize = 64;

/// Largest asymmetric product expanded into tables.
pub const ASYM_TABLE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BraceViolation {
    AddNotLatin { row: usize },
    AddNoIdentity,
    AddNotAssociative(usize, usize, usize),
    AddNotCommutative(usize, usize),
    MulNotLatin { row: usize },
    MulNoIdentity,
    MulNotAssociative(usize, usize, usize),
    IdentityMismatch { zero: usize, one: usize },
    /// `a∘(b+c) + a ≠ a∘b + a∘c`.
    BraceLaw(usize, usize, usize),
}

impl fmt::Display for BraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraceViolation::AddNotLatin { row } => write!(f, "addition row {row} is not a bijection"),
            BraceViolation::AddNoIdentity => write!(f, "addition has no identity"),
            BraceViolation::AddNotAssociative(a, b, c) => {
                write!(f, "addition not associative at ({a},{b},{c})")
            }
            BraceViolation::AddNotCommutative(a, b) => write!(f, "addition not commutative at ({a},{b})"),
            BraceViolation::MulNotLatin { row } => write!(f, "multiplication row {row} is not a bijection"),
            BraceViolation::MulNoIdentity => write!(f, "multiplication has no identity"),
            BraceViolation::MulNotAssociative(a, b, c) => {
                write!(f, "multiplication not associative at ({a},{b},{c})")
            }
            BraceViolation::IdentityMismatch { zero, one } => {
                write!(f, "additive identity {zero} differs from multiplicative identity {one}")
            }
            BraceViolation::BraceLaw(a, b, c) => write!(f, "brace law fails at ({a},{b},{c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BraceError {
    #[error("operation tables must be square, of equal positive order, with entries in range")]
    Shape,
    #[error("{0}")]
    Invalid(BraceViolation),
    #[error("subset is not an ideal")]
    NotIdeal,
    #[error("group has more than {cap} elements")]
    Cap { cap: usize },
    #[error("order {order} exceeds the table cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("n must be at least 2, got {0}")]
    Bounds(usize),
    #[error("expected {expected} entries in j, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("j_{i} = {value} is not reduced modulo n")]
    OutOfRange { i: usize, value: usize },
    #[error("j_{i} != j_{{-{i}}}")]
    Asymmetric { i: usize },
    #[error("determinant overflow")]
    Overflow,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

impl From<PermError> for BraceError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::GroupTooLarge { cap } => BraceError::Cap { cap },
            other => BraceError::Solution(SolutionError::Perm(other)),
        }
    }
}

fn latin_rows(t: &[Vec<usize>]) -> Option<usize> {
    let n = t.len();
    let mut seen = vec![0usize; n];
    for (r, row) in t.iter().enumerate() {
        for &v in row {
            if seen[v] == r + 1 {
                return Some(r);
            }
            seen[v] = r + 1;
        }
    }
    None
}

fn latin_cols(t: &[Vec<usize>]) -> Option<usize> {
    let n = t.len();
    let mut seen = vec![0usize; n];
    for c in 0..n {
        for row in t {
            let v = row[c];
            if seen[v] == c + 1 {
                return Some(c);
            }
            seen[v] = c + 1;
        }
    }
    None
}

fn find_identity(t: &[Vec<usize>]) -> Option<usize> {
    let n = t.len();
    (0..n).find(|&e| (0..n).all(|x| t[e][x] == x && t[x][e] == x))
}

/// Greedy generating set: every element is a left-nested product of
/// generators, starting from `e`.
fn generators(t: &[Vec<usize>], e: usize) -> Vec<usize> {
    let n = t.len();
    let mut gens = Vec::new();
    let mut inside = vec![false; n];
    inside[e] = true;
    let mut members = vec![e];
    for x in 0..n {
        if inside[x] {
            continue;
        }
        gens.push(x);
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(h) = queue.pop_front() {
            for &s in &gens {
                let k = t[h][s];
                if !inside[k] {
                    inside[k] = true;
                    members.push(k);
                    queue.push_back(k);
                }
            }
        }
    }
    gens
}

/// First `(a,b,c)` with `(ab)c ≠ a(bc)`. Small tables are scanned in full;
/// larger ones only with `b` ranging over generators, which suffices since
/// the middle elements satisfying the identity form a closed subset.
fn associativity_witness(t: &[Vec<usize>], e: usize) -> Option<(usize, usize, usize)> {
    let n = t.len();
    let middles: Vec<usize> = if n <= FULL_SCAN_ORDER {
        (0..n).collect()
    } else {
        generators(t, e)
    };
    if n <= FULL_SCAN_ORDER {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        return None;
    }
    for &b in &middles {
        for a in 0..n {
            let ab = t[a][b];
            for c in 0..n {
                if t[ab][c] != t[a][t[b][c]] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BraceFile", into = "BraceFile")]
pub struct LeftBrace {
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    neg: Vec<usize>,
    inv: Vec<usize>,
}

/// Interchange form `{"order", "add", "mul"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraceFile {
    pub order: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl From<LeftBrace> for BraceFile {
    fn from(b: LeftBrace) -> Self {
        BraceFile {
            order: b.order(),
            add: b.add,
            mul: b.mul,
        }
    }
}

impl TryFrom<BraceFile> for LeftBrace {
    type Error = BraceError;

    fn try_from(f: BraceFile) -> Result<Self, Self::Error> {
        if f.add.len() != f.order {
            return Err(BraceError::Shape);
        }
        validate_brace(f.add, f.mul)
    }
}

/// Checks the group axioms for both tables, the shared identity and the
/// brace law, returning the first violation.
pub fn validate_brace(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<LeftBrace, BraceError> {
    let n = add.len();
    let square = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|&v| v < n));
    if n == 0 || !square(&add) || !square(&mul) {
        return Err(BraceError::Shape);
    }
    let fail = |v| Err(BraceError::Invalid(v));
    if let Some(row) = latin_rows(&add).or_else(|| latin_cols(&add)) {
        return fail(BraceViolation::AddNotLatin { row });
    }
    let Some(zero) = find_identity(&add) else {
        return fail(BraceViolation::AddNoIdentity);
    };
    for a in 0..n {
        for b in a + 1..n {
            if add[a][b] != add[b][a] {
                return fail(BraceViolation::AddNotCommutative(a, b));
            }
        }
    }
    if let Some((a, b, c)) = associativity_witness(&add, zero) {
        return fail(BraceViolation::AddNotAssociative(a, b, c));
    }
    if let Some(row) = latin_rows(&mul).or_else(|| latin_cols(&mul)) {
        return fail(BraceViolation::MulNotLatin { row });
    }
    let Some(one) = find_identity(&mul) else {
        return fail(BraceViolation::MulNoIdentity);
    };
    if let Some((a, b, c)) = associativity_witness(&mul, one) {
        return fail(BraceViolation::MulNotAssociative(a, b, c));
    }
    if zero != one {
        return fail(BraceViolation::IdentityMismatch { zero, one });
    }
    let inverse_in = |t: &Vec<Vec<usize>>| {
        let mut inv = vec![0; n];
        for (a, row) in t.iter().enumerate() {
            inv[a] = row.iter().position(|&v| v == zero).expect("latin");
        }
        inv
    };
    let neg = inverse_in(&add);
    let inv = inverse_in(&mul);
    // a∘(b+c) + a = a∘b + a∘c; for larger tables c ranges over additive
    // generators, enough because each λ_a is then additive.
    let cs: Vec<usize> = if n <= FULL_SCAN_ORDER {
        (0..n).collect()
    } else {
        generators(&add, zero)
    };
    for a in 0..n {
        for b in 0..n {
            for &c in &cs {
                if add[mul[a][add[b][c]]][a] != add[mul[a][b]][mul[a][c]] {
                    return fail(BraceViolation::BraceLaw(a, b, c));
                }
            }
        }
    }
    Ok(LeftBrace {
        add,
        mul,
        zero,
        neg,
        inv,
    })
}

/// Result of checking the minimal-ideal statement on a permutation brace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCheck {
    pub order: usize,
    pub star_order: usize,
    pub star_is_ideal: bool,
    /// `B² = ⟨σ_x − σ_y⟩₊`.
    pub star_is_differences: bool,
    pub quotient_trivial: bool,
    pub quotient_cyclic: bool,
    pub socle_trivial: bool,
    /// No nonzero ideal lies strictly inside `B²`.
    pub star_minimal: bool,
}

impl IdealCheck {
    pub fn holds(&self) -> bool {
        self.star_is_ideal
            && self.star_is_differences
            && self.quotient_trivial
            && self.quotient_cyclic
            && self.socle_trivial
            && self.star_minimal
    }
}

impl LeftBrace {
    /// `(Z/(n), +, +)`.
    pub fn trivial_cyclic(n: usize) -> Self {
        let t: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        validate_brace(t.clone(), t).expect("trivial brace")
    }

    pub fn order(&self) -> usize {
        self.add.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.add[self.neg[a]][self.mul[a][b]]
    }

    pub fn lambda_perm(&self, a: usize) -> Perm {
        Perm::new((0..self.order()).map(|b| self.lambda(a, b)).collect()).expect("λ_a is bijective")
    }

    /// `a∗b = −a + a∘b − b`.
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.sub(self.lambda(a, b), b)
    }

    pub fn additive_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.zero {
            x = self.add[x][a];
            k += 1;
        }
        k
    }

    pub fn multiplicative_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.zero {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    pub fn is_trivial(&self) -> bool {
        self.add == self.mul
    }

    pub fn is_additively_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.additive_order(a) == self.order())
    }

    /// `{a : λ_a = id}`.
    pub fn socle(&self) -> Vec<usize> {
        let n = self.order();
        let gens = generators(&self.add, self.zero);
        let soc: Vec<usize> = (0..n)
            .filter(|&a| gens.iter().all(|&g| self.lambda(a, g) == g))
            .collect();
        debug_assert!(soc.iter().all(|&a| (0..n).all(|b| self.lambda(a, b) == b)));
        soc
    }

    /// Smallest additive subgroup containing `elements`.
    pub fn additive_closure(&self, elements: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.zero] = true;
        let mut members = vec![self.zero];
        let mut queue = VecDeque::new();
        for &x in elements {
            if !inside[x] {
                inside[x] = true;
                members.push(x);
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            for i in 0..members.len() {
                let y = self.add[members[i]][x];
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// `B² = ⟨a∗b⟩₊`.
    pub fn star_ideal(&self) -> Result<Vec<usize>, BraceError> {
        let n = self.order();
        let mut stars: Vec<usize> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.star(a, b)).collect();
        stars.sort_unstable();
        stars.dedup();
        let ideal = self.additive_closure(&stars);
        if !self.is_ideal(&ideal) {
            return Err(BraceError::Inconsistent("B² is not an ideal".into()));
        }
        Ok(ideal)
    }

    /// Additive subgroup, `λ`-invariant and normal in `(B,∘)`.
    pub fn is_ideal(&self, subset: &[usize]) -> bool {
        let n = self.order();
        let mut inside = vec![false; n];
        for &x in subset {
            if x >= n {
                return false;
            }
            inside[x] = true;
        }
        if !inside[self.zero] {
            return false;
        }
        subset.iter().all(|&x| subset.iter().all(|&y| inside[self.add[x][y]]))
            && (0..n).all(|a| {
                subset.iter().all(|&x| {
                    inside[self.lambda(a, x)] && inside[self.mul[self.mul[a][x]][self.inv[a]]]
                })
            })
    }

    /// Smallest ideal containing `elements`.
    pub fn ideal_generated_by(&self, elements: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut inside = vec![false; n];
        let mut members = Vec::new();
        let mut queue = VecDeque::new();
        let mut found: Vec<usize> = std::iter::once(self.zero).chain(elements.iter().copied()).collect();
        loop {
            for x in found.drain(..) {
                if !inside[x] {
                    inside[x] = true;
                    members.push(x);
                    queue.push_back(x);
                }
            }
            let Some(x) = queue.pop_front() else { break };
            found.extend(members.iter().map(|&y| self.add[y][x]));
            for a in 0..n {
                found.push(self.lambda(a, x));
                found.push(self.mul[self.mul[a][x]][self.inv[a]]);
            }
        }
        members.sort_unstable();
        members
    }

    /// `B/I` on additive cosets, numbered by least representative. Also
    /// returns the coset of each element.
    pub fn quotient(&self, ideal: &[usize]) -> Result<(LeftBrace, Vec<usize>), BraceError> {
        if !self.is_ideal(ideal) {
            return Err(BraceError::NotIdeal);
        }
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for b in 0..n {
            if class[b] == usize::MAX {
                for &i in ideal {
                    class[self.add[b][i]] = reps.len();
                }
                reps.push(b);
            }
        }
        let k = reps.len();
        let table = |t: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            reps.iter().map(|&a| reps.iter().map(|&b| class[t[a][b]]).collect()).collect()
        };
        let q = validate_brace(table(&self.add), table(&self.mul))?;
        debug_assert_eq!(q.order(), k);
        Ok((q, class))
    }

    /// `r_B(a,b) = (λ_a(b), λ⁻¹_{λ_a(b)}(a))`.
    pub fn associated_solution(&self) -> Result<Solution, BraceError> {
        let n = self.order();
        let table = (0..n).map(|a| (0..n).map(|b| self.lambda(a, b)).collect()).collect();
        Ok(Solution::from_table(table)?)
    }

    /// Subbrace generated by `x`.
    pub fn subbrace_generated_by(&self, x: usize) -> Vec<usize> {
        let n = self.order();
        let mut inside = vec![false; n];
        let mut members = Vec::new();
        let mut queue = VecDeque::new();
        for start in [self.zero, x] {
            if !inside[start] {
                inside[start] = true;
                members.push(start);
                queue.push_back(start);
            }
        }
        while let Some(z) = queue.pop_front() {
            let mut found = vec![self.neg[z], self.inv[z]];
            for &y in &members {
                found.extend([self.add[z][y], self.mul[z][y], self.mul[y][z]]);
            }
            for w in found {
                if !inside[w] {
                    inside[w] = true;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        members
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, BraceError> {
        serde_json::from_str(text).map_err(|e| BraceError::Json(e.to_string()))
    }
}

/// Indecomposable solution on `X = {λ_a(x) : a ∈ B(x)}`, with `B(x)` the
/// subbrace generated by `x`. Returns the solution and the elements of `X`.
pub fn orbit_solution(b: &LeftBrace, x: usize) -> Result<(Solution, Vec<usize>), BraceError> {
    let sub = b.subbrace_generated_by(x);
    let mut points: Vec<usize> = sub.iter().map(|&a| b.lambda(a, x)).collect();
    points.sort_unstable();
    points.dedup();
    let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut table = Vec::with_capacity(points.len());
    for &y in &points {
        let mut row = Vec::with_capacity(points.len());
        for &z in &points {
            let Some(&i) = pos.get(&b.lambda(y, z)) else {
                return Err(BraceError::Inconsistent("orbit not closed under λ".into()));
            };
            row.push(i);
        }
        table.push(row);
    }
    let s = Solution::from_table(table)?;
    if !s.is_indecomposable() {
        return Err(BraceError::Inconsistent("orbit solution is decomposable".into()));
    }
    Ok((s, points))
}

/// Element invariants preserved by brace isomorphisms.
fn signature(b: &LeftBrace) -> Vec<(usize, usize, usize)> {
    (0..b.order())
        .map(|a| {
            let fixed = (0..b.order()).filter(|&y| b.lambda(a, y) == y).count();
            (b.additive_order(a), b.multiplicative_order(a), fixed)
        })
        .collect()
}

/// A bijection `f` with `f(a+b) = f(a)+f(b)` and `f(a∘b) = f(a)∘f(b)`.
pub fn find_brace_isomorphism(b: &LeftBrace, c: &LeftBrace) -> Option<Vec<usize>> {
    let n = b.order();
    if c.order() != n {
        return None;
    }
    let (sb, sc) = (signature(b), signature(c));
    let (mut xs, mut ys) = (sb.clone(), sc.clone());
    xs.sort_unstable();
    ys.sort_unstable();
    if xs != ys {
        return None;
    }
    let gens = generators(&b.mul, b.zero);
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    f[b.zero] = c.zero;
    used[c.zero] = true;
    let mut members = vec![b.zero];
    if search_iso(b, c, &sb, &sc, &gens, 0, &mut f, &mut used, &mut members) {
        Some(f)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search_iso(
    b: &LeftBrace,
    c: &LeftBrace,
    sb: &[(usize, usize, usize)],
    sc: &[(usize, usize, usize)],
    gens: &[usize],
    k: usize,
    f: &mut Vec<usize>,
    used: &mut Vec<bool>,
    members: &mut Vec<usize>,
) -> bool {
    if k == gens.len() {
        return members.len() == b.order();
    }
    let g = gens[k];
    for cand in 0..c.order() {
        if used[cand] || sc[cand] != sb[g] {
            continue;
        }
        let saved = members.len();
        let mut assigned = Vec::new();
        if extend(b, c, gens, k, g, cand, f, used, members, &mut assigned)
            && search_iso(b, c, sb, sc, gens, k + 1, f, used, members)
        {
            return true;
        }
        for a in assigned {
            used[f[a]] = false;
            f[a] = usize::MAX;
        }
        members.truncate(saved);
    }
    false
}

/// Extends `f` from the subgroup generated by `gens[..k]` to the one
/// generated by `gens[..=k]`, checking both operations on the way.
#[allow(clippy::too_many_arguments)]
fn extend(
    b: &LeftBrace,
    c: &LeftBrace,
    gens: &[usize],
    k: usize,
    g: usize,
    image: usize,
    f: &mut [usize],
    used: &mut [bool],
    members: &mut Vec<usize>,
    assigned: &mut Vec<usize>,
) -> bool {
    let set = |x: usize, y: usize, f: &mut [usize], used: &mut [bool], members: &mut Vec<usize>, assigned: &mut Vec<usize>| -> Option<bool> {
        if f[x] != usize::MAX {
            return Some(f[x] == y);
        }
        if used[y] {
            return Some(false);
        }
        f[x] = y;
        used[y] = true;
        members.push(x);
        assigned.push(x);
        None
    };
    if set(g, image, f, used, members, assigned) == Some(false) {
        return false;
    }
    let start = members.len() - assigned.len();
    let mut queue: VecDeque<usize> = members.iter().copied().collect();
    while let Some(h) = queue.pop_front() {
        for &s in &gens[..=k] {
            let x = b.mul[h][s];
            let y = c.mul[f[h]][f[s]];
            match set(x, y, f, used, members, assigned) {
                Some(false) => return false,
                Some(true) => {}
                None => queue.push_back(x),
            }
        }
    }
    // additivity on pairs involving a new element
    for i in start..members.len() {
        let x = members[i];
        for &y in members.iter() {
            let s = b.add[x][y];
            if f[s] != usize::MAX && f[s] != c.add[f[x]][f[y]] {
                return false;
            }
        }
    }
    true
}

/// `B/soc(B)` against the permutation brace of `r_B`.
pub fn socle_quotient_check(b: &LeftBrace) -> Result<bool, BraceError> {
    let (q, _) = b.quotient(&b.socle())?;
    let g = permutation_brace(&b.associated_solution()?)?;
    Ok(find_brace_isomorphism(&q, &g.brace).is_some())
}

/// The brace on the permutation group `𝒢(X,r) = ⟨σ_x⟩`.
#[derive(Debug, Clone)]
pub struct PermutationBrace {
    pub brace: LeftBrace,
    pub group: PermGroup,
    /// Element index of `σ_x`.
    pub sigma_index: Vec<usize>,
}

pub fn permutation_brace(s: &Solution) -> Result<PermutationBrace, BraceError> {
    permutation_brace_with_cap(s, DEFAULT_GROUP_CAP)
}

/// Addition comes from `g + σ_x = g∘σ_{g⁻¹(x)}`: a breadth-first search from
/// the identity writes each element as an additive word in the `σ_x`, and
/// `g + h` folds the word of `h` onto `g`.
pub fn permutation_brace_with_cap(s: &Solution, cap: usize) -> Result<PermutationBrace, BraceError> {
    let n = s.n();
    let group = closure_with_cap(n, s.sigmas(), cap)?;
    let m = group.order();
    let elements = group.elements();
    let idx = |p: &Perm| group.index_of(p).expect("closed under composition");
    let sigma_index: Vec<usize> = s.sigmas().iter().map(idx).collect();
    let identity = idx(&Perm::identity(n));
    let inverses: Vec<Perm> = elements.iter().map(Perm::inverse).collect();
    // step[g][x] = g + σ_x
    let step: Vec<Vec<usize>> = (0..m)
        .map(|g| {
            (0..n)
                .map(|x| idx(&elements[g].compose_unchecked(s.sigma(inverses[g].apply(x)))))
                .collect()
        })
        .collect();
    let mut parent = vec![usize::MAX; m];
    let mut letter = vec![usize::MAX; m];
    let mut order = vec![identity];
    parent[identity] = identity;
    let mut head = 0;
    while head < order.len() {
        let h = order[head];
        head += 1;
        for x in 0..n {
            let k = step[h][x];
            if parent[k] == usize::MAX {
                parent[k] = h;
                letter[k] = x;
                order.push(k);
            }
        }
    }
    if order.len() != m {
        return Err(BraceError::Inconsistent(format!(
            "the σ_x generate {} of {m} elements additively",
            order.len()
        )));
    }
    let mut add = vec![vec![usize::MAX; m]; m];
    for g in 0..m {
        add[g][identity] = g;
        for &h in &order[1..] {
            add[g][h] = step[add[g][parent[h]]][letter[h]];
        }
    }
    for g in 0..m {
        for h in 0..m {
            for x in 0..n {
                if step[add[g][h]][x] != add[g][step[h][x]] {
                    return Err(BraceError::Inconsistent(format!(
                        "(g+h)+σ_x ≠ g+(h+σ_x) at g={g}, h={h}, x={x}"
                    )));
                }
            }
        }
    }
    let mul: Vec<Vec<usize>> = (0..m)
        .map(|g| (0..m).map(|h| idx(&elements[g].compose_unchecked(&elements[h]))).collect())
        .collect();
    let brace = validate_brace(add, mul)?;
    for g in 0..m {
        for x in 0..n {
            if brace.lambda(g, sigma_index[x]) != sigma_index[elements[g].apply(x)] {
                return Err(BraceError::Inconsistent(format!("λ_g(σ_x) ≠ σ_g(x) at g={g}, x={x}")));
            }
        }
    }
    Ok(PermutationBrace {
        brace,
        group,
        sigma_index,
    })
}

/// Minimal-ideal check on `𝒢(X,r)`: `𝒢²` is an ideal generated by the
/// differences `σ_x − σ_y`, `𝒢/𝒢²` is trivial and cyclic, the socle is zero,
/// and no nonzero ideal sits strictly inside `𝒢²`.
pub fn ideal_check(s: &Solution) -> Result<IdealCheck, BraceError> {
    let pb = permutation_brace(s)?;
    let b = &pb.brace;
    let star = b.star_ideal()?;
    let diffs: Vec<usize> = pb
        .sigma_index
        .iter()
        .flat_map(|&x| pb.sigma_index.iter().map(move |&y| (x, y)))
        .map(|(x, y)| b.sub(x, y))
        .collect();
    let (q, _) = b.quotient(&star)?;
    let minimal = star
        .iter()
        .filter(|&&a| a != b.zero())
        .all(|&a| b.ideal_generated_by(&[a]) == star);
    Ok(IdealCheck {
        order: b.order(),
        star_order: star.len(),
        star_is_ideal: b.is_ideal(&star),
        star_is_differences: b.additive_closure(&diffs) == star,
        quotient_trivial: q.is_trivial(),
        quotient_cyclic: q.is_additively_cyclic(),
        socle_trivial: b.socle() == vec![b.zero()],
        star_minimal: minimal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymmetricParams {
    pub n: usize,
    pub j: Vec<usize>,
}

impl AsymmetricParams {
    pub fn new(n: usize, j: Vec<usize>) -> Result<Self, BraceError> {
        if n < 2 {
            return Err(BraceError::Bounds(n));
        }
        if j.len() != n {
            return Err(BraceError::BadLength {
                expected: n,
                got: j.len(),
            });
        }
        if let Some((i, &value)) = j.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(BraceError::OutOfRange { i, value });
        }
        if let Some(i) = (0..n).find(|&i| j[i] != j[(n - i) % n]) {
            return Err(BraceError::Asymmetric { i });
        }
        Ok(AsymmetricParams { n, j })
    }

    /// Row `a` of the circulant matrix: `M_{a,c} = j_{c−a}`.
    pub fn circulant(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        (0..n).map(|a| (0..n).map(|c| self.j[(c + n - a) % n]).collect()).collect()
    }

    pub fn determinant(&self) -> Result<i128, BraceError> {
        let m: Vec<Vec<i128>> = self
            .circulant()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as i128).collect())
            .collect();
        bareiss_determinant(m)
    }

    /// The form is non-singular when the determinant is a unit of `Z/(n)`.
    pub fn is_nonsingular(&self) -> Result<bool, BraceError> {
        let d = self.determinant()?.rem_euclid(self.n as i128) as usize;
        Ok(is_unit(d, self.n))
    }

    pub fn rows_distinct(&self) -> bool {
        let m = self.circulant();
        (0..self.n).all(|a| (a + 1..self.n).all(|c| m[a] != m[c]))
    }

    pub fn generates(&self) -> bool {
        self.j.iter().fold(self.n, |g, &x| gcd(g, x)) == 1
    }
}

/// Fraction-free elimination; exact over the integers.
pub fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> Result<i128, BraceError> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for jj in k + 1..n {
                let a = m[i][jj].checked_mul(m[k][k]).ok_or(BraceError::Overflow)?;
                let b = m[i][k].checked_mul(m[k][jj]).ok_or(BraceError::Overflow)?;
                m[i][jj] = a.checked_sub(b).ok_or(BraceError::Overflow)? / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// `(Z/(n))ⁿ ⋊ Z/(n)` with `(u,i)∘(v,j) = (u + α(i)v, i+j)` and
/// `(u,i) + (v,j) = (u+v, i+j+b(u,v))`, where `α(i)e_m = e_{i+m}` and `b`
/// has the circulant matrix of `j`.
///
/// Element `(u,i)` has index `(Σ u_m nᵐ)·n + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymmetricBrace {
    params: AsymmetricParams,
    order: usize,
}

impl AsymmetricBrace {
    pub fn new(params: AsymmetricParams) -> Self {
        let order = params.n.pow(params.n as u32 + 1);
        AsymmetricBrace { params, order }
    }

    pub fn params(&self) -> &AsymmetricParams {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn encode(&self, u: &[usize], i: usize) -> usize {
        let n = self.params.n;
        u.iter().rev().fold(0, |acc, &c| acc * n + c) * n + i
    }

    pub fn decode(&self, a: usize) -> (Vec<usize>, usize) {
        let n = self.params.n;
        let i = a % n;
        let mut rest = a / n;
        let u = (0..n)
            .map(|_| {
                let c = rest % n;
                rest /= n;
                c
            })
            .collect();
        (u, i)
    }

    /// `x_{ij} = (e_i, j)`.
    pub fn x(&self, i: usize, j: usize) -> usize {
        let n = self.params.n;
        n.pow(i as u32) * n + j
    }

    fn form(&self, u: &[usize], v: &[usize]) -> usize {
        let n = self.params.n;
        let mut s = 0;
        for a in 0..n {
            if u[a] == 0 {
                continue;
            }
            for c in 0..n {
                s += u[a] * self.params.j[(c + n - a) % n] * v[c];
            }
        }
        s % n
    }

    fn alpha(&self, i: usize, v: &[usize]) -> Vec<usize> {
        let n = self.params.n;
        let mut w = vec![0; n];
        for (m, &c) in v.iter().enumerate() {
            w[(m + i) % n] = c;
        }
        w
    }

    pub fn add_elems(&self, a: usize, b: usize) -> usize {
        let n = self.params.n;
        let ((u, i), (v, j)) = (self.decode(a), self.decode(b));
        let w: Vec<usize> = u.iter().zip(&v).map(|(x, y)| (x + y) % n).collect();
        self.encode(&w, (i + j + self.form(&u, &v)) % n)
    }

    pub fn mul_elems(&self, a: usize, b: usize) -> usize {
        let n = self.params.n;
        let ((u, i), (v, j)) = (self.decode(a), self.decode(b));
        let av = self.alpha(i, &v);
        let w: Vec<usize> = u.iter().zip(&av).map(|(x, y)| (x + y) % n).collect();
        self.encode(&w, (i + j) % n)
    }

    /// `λ_{(u,i)}(v,j) = (α(i)v, j − b(u, α(i)v))`.
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        let n = self.params.n;
        let ((u, i), (v, j)) = (self.decode(a), self.decode(b));
        let av = self.alpha(i, &v);
        let t = (j + n - self.form(&u, &av)) % n;
        self.encode(&av, t)
    }

    /// Additive generators `(e_m, 0)` and `(0, 1)`.
    pub fn additive_generators(&self) -> Vec<usize> {
        let n = self.params.n;
        let mut g: Vec<usize> = (0..n).map(|m| n.pow(m as u32) * n).collect();
        g.push(1);
        g
    }

    /// `{a : λ_a = id}`, tested on additive generators. Walks the elements
    /// in index order without materializing tables.
    pub fn socle(&self) -> Vec<usize> {
        let n = self.params.n;
        let gens: Vec<(Vec<usize>, usize)> = self.additive_generators().into_iter().map(|g| self.decode(g)).collect();
        let mut out = Vec::new();
        let mut u = vec![0usize; n];
        let mut av = vec![0usize; n];
        for code in 0..self.order / n {
            for i in 0..n {
                let fixes = gens.iter().all(|(v, j)| {
                    for (m, &c) in v.iter().enumerate() {
                        av[(m + i) % n] = c;
                    }
                    av == *v && (j + n - self.form(&u, &av)) % n == *j
                });
                if fixes {
                    out.push(code * n + i);
                }
            }
            for c in u.iter_mut() {
                *c += 1;
                if *c < n {
                    break;
                }
                *c = 0;
            }
        }
        out
    }

    /// Restriction of `r_B` to `X = {x_{ij}}`, with `x_{ij}` as point `i·n + j`.
    pub fn restricted_solution(&self) -> Result<Solution, BraceError> {
        let n = self.params.n;
        let mut index = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                index.insert(self.x(i, j), i * n + j);
            }
        }
        let mut table = vec![vec![0; n * n]; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let y = self.lambda(self.x(i, j), self.x(k, l));
                        table[i * n + j][k * n + l] = *index
                            .get(&y)
                            .ok_or_else(|| BraceError::Inconsistent("X is not λ-closed".into()))?;
                    }
                }
            }
        }
        Ok(Solution::from_table(table)?)
    }

    pub fn to_brace(&self) -> Result<LeftBrace, BraceError> {
        if self.order > ASYM_TABLE_CAP {
            return Err(BraceError::TooLarge {
                order: self.order,
                cap: ASYM_TABLE_CAP,
            });
        }
        let decoded: Vec<(Vec<usize>, usize)> = (0..self.order).map(|a| self.decode(a)).collect();
        let n = self.params.n;
        let mut add = vec![vec![0; self.order]; self.order];
        let mut mul = vec![vec![0; self.order]; self.order];
        for a in 0..self.order {
            let (u, i) = &decoded[a];
            for b in 0..self.order {
                let (v, j) = &decoded[b];
                let w: Vec<usize> = u.iter().zip(v).map(|(x, y)| (x + y) % n).collect();
                add[a][b] = self.encode(&w, (i + j + self.form(u, v)) % n);
                let av = self.alpha(*i, v);
                let w: Vec<usize> = u.iter().zip(&av).map(|(x, y)| (x + y) % n).collect();
                mul[a][b] = self.encode(&w, (i + j) % n);
            }
        }
        validate_brace(add, mul)
    }
}

/// The asymmetric product as tables, the indices of `x_{ij}` (at position
/// `i·n + j`), and whether the form is non-singular.
#[derive(Debug, Clone)]
pub struct AsymmetricProduct {
    pub brace: LeftBrace,
    pub x: Vec<usize>,
    pub nonsingular: bool,
}

pub fn asymmetric_product(p: &AsymmetricParams) -> Result<AsymmetricProduct, BraceError> {
    let s = AsymmetricBrace::new(p.clone());
    let brace = s.to_brace()?;
    let n = p.n;
    let x = (0..n * n).map(|k| s.x(k / n, k % n)).collect();
    Ok(AsymmetricProduct {
        brace,
        x,
        nonsingular: p.is_nonsingular()?,
    })
}

/// A unit `a` of `Z/(n)` with `a·a_i = c_{a·i}` for all `i`. When one exists
/// the map `x_{ij} ↦ x_{ai,aj}` is checked to be an isomorphism of the
/// restricted solutions. When none exists and both forms are non-singular,
/// the solutions are checked to be non-isomorphic.
pub fn asym_solution_iso(a: &AsymmetricParams, c: &AsymmetricParams) -> Result<Option<usize>, BraceError> {
    let n = a.n;
    if c.n != n {
        return Err(BraceError::BadLength {
            expected: n,
            got: c.n,
        });
    }
    let sa = AsymmetricBrace::new(a.clone()).restricted_solution()?;
    let sc = AsymmetricBrace::new(c.clone()).restricted_solution()?;
    let unit = (1..n)
        .filter(|&u| is_unit(u, n))
        .find(|&u| (0..n).all(|i| u * a.j[i] % n == c.j[u * i % n]));
    match unit {
        Some(u) => {
            let h: Vec<usize> = (0..n * n).map(|k| (u * (k / n) % n) * n + u * (k % n) % n).collect();
            if !is_isomorphism(&sa, &sc, &h) {
                return Err(BraceError::Inconsistent(format!("x_ij ↦ x_(ai,aj) fails for a = {u}")));
            }
        }
        None => {
            if a.is_nonsingular()? && c.is_nonsingular()? && find_isomorphism(&sa, &sc).is_some() {
                return Err(BraceError::Inconsistent(
                    "non-singular forms without a unit give isomorphic solutions".into(),
                ));
            }
        }
    }
    Ok(unit)
}

/// Every symmetric `j`-vector of length `n`.
pub fn symmetric_vectors(n: usize) -> Vec<Vec<usize>> {
    let free = n / 2 + 1;
    let mut out = Vec::new();
    let total = n.pow(free as u32);
    for code in 0..total {
        let mut c = code;
        let mut half = vec![0; free];
        for h in half.iter_mut() {
            *h = c % n;
            c /= n;
        }
        out.push((0..n).map(|i| half[i.min(n - i)]).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_brace() {
        let b = LeftBrace::trivial_cyclic(4);
        assert!((0..4).all(|a| b.lambda_perm(a).is_identity()));
        assert_eq!(b.socle(), vec![0, 1, 2, 3]);
        assert_eq!(b.star_ideal().unwrap(), vec![0]);
        let (q, _) = b.quotient(&[0, 1, 2, 3]).unwrap();
        assert_eq!(q.order(), 1);
        let (q, _) = b.quotient(&[0]).unwrap();
        assert_eq!(q, b);
        let s = b.associated_solution().unwrap();
        assert!(s.sigmas().iter().all(Perm::is_identity));
    }

    #[test]
    fn brace_law_witness() {
        // Z/(6) addition with S_3 multiplication, elements in lexicographic order
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let add: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        let mul: Vec<Vec<usize>> = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let c: Vec<usize> = (0..3).map(|i| perms[a][perms[b][i]]).collect();
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut first = None;
        'outer: for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    if add[mul[a][add[b][c]]][a] != add[mul[a][b]][mul[a][c]] {
                        first = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let (a, b, c) = first.unwrap();
        assert_eq!(
            validate_brace(add, mul).unwrap_err(),
            BraceError::Invalid(BraceViolation::BraceLaw(a, b, c))
        );
    }

    #[test]
    fn determinant() {
        let m = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        assert_eq!(bareiss_determinant(m).unwrap(), 2);
        let m = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(bareiss_determinant(m).unwrap(), 6);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(bareiss_determinant(m).unwrap(), -1);
    }

    #[test]
    fn symmetric_vector_count() {
        assert_eq!(symmetric_vectors(2).len(), 4);
        assert_eq!(symmetric_vectors(3).len(), 9);
        assert_eq!(symmetric_vectors(4).len(), 64);
        assert!(symmetric_vectors(5).iter().all(|j| AsymmetricParams::new(5, j.clone()).is_ok()));
    }

    #[test]
    fn json_round_trip() {
        let b = LeftBrace::trivial_cyclic(3);
        let text = b.to_json();
        assert!(text.starts_with("{\"order\":3"));
        assert_eq!(LeftBrace::from_json(&text).unwrap(), b);
    }
}
