//! Isomorph-free enumeration of solutions of a given order.
//!
//! The search runs over cycle-set tables `x·y = σ_x⁻¹(y)`: rows are
//! bijections and `(x·y)·(x·z) = (y·x)·(y·z)` is checked as soon as all six
//! entries of an instance are known. Row 0 is fixed to one representative
//! per cycle type and position of `0`, so every class is reached; dedup goes
//! through [`canonical_form`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{block_form, is_prime, mult_order, p2_solution, BlockFormData};
use crate::perm::Perm;
use crate::quotients::{canonical_form, find_isomorphism, is_simple, QuotientError};
use crate::solution::Solution;

pub const CHECKPOINT_VERSION: u32 = 1;

/// Largest order searched without constraints, unless `stretch` is set.
pub const MAX_UNCONSTRAINED: usize = 7;
/// Largest order searched with `stretch` set.
pub const MAX_STRETCH: usize = 9;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Indecomposable,
    Irretractable,
    SquareFree,
    Simple,
    /// Block shape on `(Z/(p))²`; requires `n = p²`.
    BlockForm(usize),
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Indecomposable => write!(f, "indecomposable"),
            Constraint::Irretractable => write!(f, "irretractable"),
            Constraint::SquareFree => write!(f, "square_free"),
            Constraint::Simple => write!(f, "simple"),
            Constraint::BlockForm(p) => write!(f, "block_form({p})"),
        }
    }
}

impl FromStr for Constraint {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match t.as_str() {
            "indecomposable" => Constraint::Indecomposable,
            "irretractable" => Constraint::Irretractable,
            "square_free" | "squarefree" => Constraint::SquareFree,
            "simple" => Constraint::Simple,
            _ => {
                let p = t
                    .strip_prefix("block_form")
                    .map(|r| r.trim_matches(|c| c == '(' || c == ')' || c == '=' || c == ':'))
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| CensusError::Infeasible(format!("unknown constraint {s:?}")))?;
                Constraint::BlockForm(p)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CensusError {
    #[error("infeasible census: {0}")]
    Infeasible(String),
    #[error("checkpoint unreadable: {0}")]
    Checkpoint(String),
    #[error("checkpoint version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("checkpoint was written for a different census")]
    SpecMismatch,
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

impl From<io::Error> for CensusError {
    fn from(e: io::Error) -> Self {
        CensusError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusSpec {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    /// Work items are the consistent tables with this many rows filled.
    pub split_depth: usize,
    /// Items per checkpoint write.
    pub chunk: usize,
    /// Allows unconstrained orders up to [`MAX_STRETCH`].
    pub stretch: bool,
    /// Stop after this many items, leaving the checkpoint behind.
    pub stop_after: Option<usize>,
}

impl CensusSpec {
    pub fn new(n: usize) -> Self {
        CensusSpec {
            n,
            constraints: Vec::new(),
            jobs: 0,
            checkpoint: None,
            split_depth: 2,
            chunk: 64,
            stretch: false,
            stop_after: None,
        }
    }

    pub fn with_constraints(mut self, c: &[Constraint]) -> Self {
        self.constraints = c.to_vec();
        self
    }

    fn requires(&self, c: Constraint) -> bool {
        self.constraints.contains(&c)
    }

    fn block_prime(&self) -> Option<usize> {
        self.constraints.iter().find_map(|c| match c {
            Constraint::BlockForm(p) => Some(*p),
            _ => None,
        })
    }

    fn key(&self) -> SpecKey {
        let mut constraints = self.constraints.clone();
        constraints.sort();
        constraints.dedup();
        SpecKey {
            n: self.n,
            constraints,
            split_depth: self.split_depth,
        }
    }

    pub fn check(&self) -> Result<(), CensusError> {
        if self.n == 0 {
            return Err(CensusError::Infeasible("n must be positive".into()));
        }
        if self.split_depth == 0 || self.chunk == 0 {
            return Err(CensusError::Infeasible("split depth and chunk must be positive".into()));
        }
        if let Some(p) = self.block_prime() {
            if p * p != self.n {
                return Err(CensusError::Infeasible(format!("block_form({p}) needs n = {}", p * p)));
            }
            if !matches!(p, 2 | 3) {
                return Err(CensusError::Infeasible(format!("block_form({p}) is out of reach; p must be 2 or 3")));
            }
            return Ok(());
        }
        let cap = if self.stretch { MAX_STRETCH } else { MAX_UNCONSTRAINED };
        if self.n > cap {
            return Err(CensusError::Infeasible(format!("n = {} exceeds {cap}", self.n)));
        }
        Ok(())
    }
}

/// The part of the spec a checkpoint must agree with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecKey {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub split_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub indecomposable: bool,
    pub irretractable: bool,
    pub square_free: bool,
    pub simple: bool,
}

/// `σ_{(i,j)}(k,l) = (tk+j, t(l − j_{tk+j−i}))` parameters matching a class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareParams {
    pub t: usize,
    pub j: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// Canonical σ-table.
    pub key: Vec<Vec<usize>>,
    pub flags: Flags,
    /// Raw tables found for this class.
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SquareParams>,
}

impl CensusRecord {
    pub fn solution(&self) -> Solution {
        Solution::from_table(self.key.clone()).expect("census keys are solutions")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    spec: SpecKey,
    split_depth: usize,
    next_item: usize,
    records: Vec<(Vec<Vec<usize>>, usize)>,
}

pub fn flags_of(s: &Solution) -> Result<Flags, CensusError> {
    let simple = match is_simple(s) {
        Ok((v, _)) => v,
        Err(QuotientError::TooSmall) => false,
        Err(e) => return Err(e.into()),
    };
    Ok(Flags {
        indecomposable: s.is_indecomposable(),
        irretractable: s.is_irretractable(),
        square_free: s.is_square_free(),
        simple,
    })
}

fn cheap_filter(spec: &CensusSpec, s: &Solution) -> bool {
    (!spec.requires(Constraint::Indecomposable) || s.is_indecomposable())
        && (!spec.requires(Constraint::Irretractable) || s.is_irretractable())
        && (!spec.requires(Constraint::SquareFree) || s.is_square_free())
}

/// Row-0 representatives: the cycle of `0` is `(0 1 … c−1)`, the other
/// cycles follow in descending length on consecutive points.
pub fn row0_representatives(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for parts in partitions(n) {
        let mut distinct = parts.clone();
        distinct.dedup();
        for &c in &distinct {
            let mut rest = parts.clone();
            let pos = rest.iter().position(|&x| x == c).unwrap();
            rest.remove(pos);
            let mut row = vec![0; n];
            let mut start = 0;
            for len in std::iter::once(c).chain(rest) {
                for k in 0..len {
                    row[start + k] = start + (k + 1) % len;
                }
                start += len;
            }
            out.push(row);
        }
    }
    out
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partial cycle-set table with row inverses and an undo trail. Squares
/// are kept pairwise distinct, so complete tables are non-degenerate.
#[derive(Clone)]
struct Partial {
    n: usize,
    t: Vec<usize>,
    inv: Vec<usize>,
    diag: Vec<usize>,
    filled: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial {
            n,
            t: vec![UNSET; n * n],
            inv: vec![UNSET; n * n],
            diag: vec![UNSET; n],
            filled: vec![0; n],
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, x: usize, y: usize) -> usize {
        self.t[x * self.n + y]
    }

    /// Sets `x·y = v` unless that clashes with the row or the squares.
    fn assign(&mut self, x: usize, y: usize, v: usize) -> bool {
        let n = self.n;
        let cur = self.t[x * n + y];
        if cur != UNSET {
            return cur == v;
        }
        if self.inv[x * n + v] != UNSET || (x == y && self.diag[v] != UNSET) {
            return false;
        }
        self.t[x * n + y] = v;
        self.inv[x * n + v] = y;
        if x == y {
            self.diag[v] = x;
        }
        self.filled[x] += 1;
        self.trail.push(x * n + y);
        self.queue.push(x * n + y);
        true
    }

    fn undo(&mut self, mark: usize) {
        let n = self.n;
        self.queue.clear();
        while self.trail.len() > mark {
            let cell = self.trail.pop().unwrap();
            let (x, y) = (cell / n, cell % n);
            let v = self.t[cell];
            self.t[cell] = UNSET;
            self.inv[x * n + v] = UNSET;
            if x == y {
                self.diag[v] = UNSET;
            }
            self.filled[x] -= 1;
        }
    }

    /// `(a·b)·(a·c) = (b·a)·(b·c)`: checked when both sides are known,
    /// forced when exactly one is.
    #[inline]
    fn instance(&mut self, a: usize, b: usize, c: usize) -> bool {
        let (ab, ac, ba, bc) = (self.get(a, b), self.get(a, c), self.get(b, a), self.get(b, c));
        if ab == UNSET || ac == UNSET || ba == UNSET || bc == UNSET {
            return true;
        }
        match (self.get(ab, ac), self.get(ba, bc)) {
            (UNSET, UNSET) => true,
            (l, UNSET) => self.assign(ba, bc, l),
            (UNSET, r) => self.assign(ab, ac, r),
            (l, r) => l == r,
        }
    }

    /// Drains the queue; false on a contradiction.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some(cell) = self.queue.pop() {
            let (x, y) = (cell / n, cell % n);
            for u in 0..n {
                for c in 0..n {
                    if !self.instance(x, u, c) || !self.instance(u, x, c) {
                        return false;
                    }
                }
            }
            for a in 0..n {
                // (x,y) as the left outer cell of (a, b, c), then the right one
                let (b, c) = (self.inv[a * n + x], self.inv[a * n + y]);
                if b != UNSET && c != UNSET && !self.instance(a, b, c) {
                    return false;
                }
                let (b, c) = (self.inv[a * n + x], self.inv[a * n + y]);
                if b != UNSET && c != UNSET && !self.instance(b, a, c) {
                    return false;
                }
            }
            if self.filled[x] == n - 1 {
                let y = (0..n).find(|&y| self.get(x, y) == UNSET).unwrap();
                let v = (0..n).find(|&v| self.inv[x * n + v] == UNSET).unwrap();
                if !self.assign(x, y, v) {
                    return false;
                }
            }
        }
        true
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        self.t.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// A search subtree: the propagated table once the first rows are filled.
#[derive(Debug, Clone)]
struct Item {
    cells: Vec<usize>,
}

fn seed(n: usize, cells: &[usize]) -> Option<Partial> {
    let mut p = Partial::new(n);
    for (i, &v) in cells.iter().enumerate() {
        if v != UNSET && !(p.assign(i / n, i % n, v) && p.propagate()) {
            return None;
        }
    }
    Some(p)
}

/// Branches on the first open cell in row-major order; `leaf` sees every
/// consistent table whose first `to` rows are complete.
fn fill(p: &mut Partial, cell: usize, to: usize, leaf: &mut dyn FnMut(&Partial)) {
    let n = p.n;
    let Some(cell) = (cell..to * n).find(|&c| p.t[c] == UNSET) else {
        leaf(p);
        return;
    };
    let (x, y) = (cell / n, cell % n);
    for v in 0..n {
        if p.inv[x * n + v] != UNSET {
            continue;
        }
        let mark = p.trail.len();
        if p.assign(x, y, v) && p.propagate() {
            fill(p, cell + 1, to, leaf);
        }
        p.undo(mark);
    }
}

fn work_items(n: usize, depth: usize) -> Vec<Item> {
    let depth = depth.clamp(1, n);
    let mut items = Vec::new();
    for row0 in row0_representatives(n) {
        let mut cells = vec![UNSET; n * n];
        cells[..n].copy_from_slice(&row0);
        let Some(mut p) = seed(n, &cells) else {
            continue;
        };
        fill(&mut p, n, depth, &mut |q| items.push(Item { cells: q.t.clone() }));
    }
    items
}

fn run_item(spec: &CensusSpec, item: &Item) -> HashMap<Vec<Vec<usize>>, usize> {
    let n = spec.n;
    let mut found = HashMap::new();
    let Some(mut p) = seed(n, &item.cells) else {
        return found;
    };
    fill(&mut p, 0, n, &mut |q| {
        let s = Solution::from_cycle_set(q.rows()).expect("complete consistent table");
        if cheap_filter(spec, &s) {
            *found.entry(canonical_form(&s)).or_insert(0) += 1;
        }
    });
    found
}

fn load_checkpoint(path: &Path, key: &SpecKey) -> Result<Option<Checkpoint>, CensusError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if text.trim().is_empty() {
        return Ok(None);
    }
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CensusError::Checkpoint(e.to_string()))?;
    let version = value.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if version != CHECKPOINT_VERSION {
        return Err(CensusError::Version {
            found: version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let cp: Checkpoint = serde_json::from_value(value).map_err(|e| CensusError::Checkpoint(e.to_string()))?;
    if cp.spec != *key || cp.split_depth != key.split_depth {
        return Err(CensusError::SpecMismatch);
    }
    Ok(Some(cp))
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<(), CensusError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(cp).expect("serializable"))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Outcome of a possibly interrupted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusRun {
    Complete(Vec<CensusRecord>),
    /// Stopped early; the checkpoint holds the frontier.
    Interrupted { next_item: usize, total_items: usize },
}

/// All classes satisfying the constraints, ordered by key.
pub fn enumerate(spec: &CensusSpec) -> Result<Vec<CensusRecord>, CensusError> {
    match run(spec)? {
        CensusRun::Complete(r) => Ok(r),
        CensusRun::Interrupted { .. } => Err(CensusError::Infeasible("run was stopped early".into())),
    }
}

pub fn run(spec: &CensusSpec) -> Result<CensusRun, CensusError> {
    spec.check()?;
    if let Some(p) = spec.block_prime() {
        let mut records = enumerate_block_form(p)?;
        records.retain(|r| filter_flags(spec, &r.flags));
        return Ok(CensusRun::Complete(records));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| CensusError::Io(e.to_string()))?;
    pool.install(|| run_search(spec))
}

fn run_search(spec: &CensusSpec) -> Result<CensusRun, CensusError> {
    let key = spec.key();
    let items = work_items(spec.n, spec.split_depth);
    let mut counts: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
    let mut next = 0;
    if let Some(path) = &spec.checkpoint {
        if let Some(cp) = load_checkpoint(path, &key)? {
            next = cp.next_item;
            counts.extend(cp.records);
        }
    }
    let mut processed = 0;
    while next < items.len() {
        if spec.stop_after.is_some_and(|s| processed >= s) {
            return Ok(CensusRun::Interrupted {
                next_item: next,
                total_items: items.len(),
            });
        }
        let end = (next + spec.chunk).min(items.len());
        let parts: Vec<HashMap<Vec<Vec<usize>>, usize>> =
            items[next..end].par_iter().map(|it| run_item(spec, it)).collect();
        for part in parts {
            for (k, c) in part {
                *counts.entry(k).or_insert(0) += c;
            }
        }
        processed += end - next;
        next = end;
        if let Some(path) = &spec.checkpoint {
            save_checkpoint(
                path,
                &Checkpoint {
                    version: CHECKPOINT_VERSION,
                    spec: key.clone(),
                    split_depth: spec.split_depth,
                    next_item: next,
                    records: counts.iter().map(|(k, &c)| (k.clone(), c)).collect(),
                },
            )?;
        }
    }
    let entries: Vec<(Vec<Vec<usize>>, usize)> = counts.into_iter().collect();
    let records: Result<Vec<Option<CensusRecord>>, CensusError> = entries
        .into_par_iter()
        .map(|(key, count)| {
            let s = Solution::from_table(key.clone()).expect("census keys are solutions");
            let flags = flags_of(&s)?;
            Ok(filter_flags(spec, &flags).then_some(CensusRecord {
                key,
                flags,
                count,
                params: None,
            }))
        })
        .collect();
    Ok(CensusRun::Complete(records?.into_iter().flatten().collect()))
}

fn filter_flags(spec: &CensusSpec, f: &Flags) -> bool {
    spec.constraints.iter().all(|c| match c {
        Constraint::Indecomposable => f.indecomposable,
        Constraint::Irretractable => f.irretractable,
        Constraint::SquareFree => f.square_free,
        Constraint::Simple => f.simple,
        Constraint::BlockForm(_) => true,
    })
}

pub fn write_jsonl<W: Write>(records: &[CensusRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl(text: &str) -> Result<Vec<CensusRecord>, CensusError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| CensusError::Checkpoint(e.to_string())))
        .collect()
}

/// Every table with bijective rows, filtered at the leaves: the
/// cross-check for the propagating search. Feasible for `n ≤ 4`.
pub fn naive_enumerate(n: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = all_perms(n);
    let mut keys = std::collections::BTreeSet::new();
    let mut choice = vec![0usize; n];
    loop {
        let dot: Vec<Vec<usize>> = choice.iter().map(|&c| perms[c].clone()).collect();
        if let Ok(s) = Solution::from_cycle_set(dot) {
            keys.insert(canonical_form(&s));
        }
        let mut k = 0;
        loop {
            if k == n {
                return keys.into_iter().collect();
            }
            choice[k] += 1;
            if choice[k] < perms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Indecomposable irretractable solutions of block shape on `(Z/(p))²`, up
/// to isomorphism, each annotated with matching square-family parameters.
pub fn enumerate_block_form(p: usize) -> Result<Vec<CensusRecord>, CensusError> {
    if !matches!(p, 2 | 3) {
        return Err(CensusError::Infeasible(format!("block_form({p}) is out of reach")));
    }
    let perms: Vec<Perm> = all_perms(p).into_iter().map(|v| Perm::new(v).unwrap()).collect();
    let mut counts: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
    let mut sigma_idx = vec![0usize; p];
    loop {
        let sigma: Vec<Perm> = sigma_idx.iter().map(|&i| perms[i].clone()).collect();
        let distinct = (0..p).all(|a| (a + 1..p).all(|b| sigma_idx[a] != sigma_idx[b]));
        if distinct && crate::perm::orbits(p, &sigma).map(|o| o.len() == 1).unwrap_or(false) {
            for data in block_d_search(p, &sigma, &perms) {
                if let Some(s) = block_form(&data).solution() {
                    *counts.entry(canonical_form(s)).or_insert(0) += 1;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == p {
                return annotate(p, counts);
            }
            sigma_idx[k] += 1;
            if sigma_idx[k] < perms.len() {
                break;
            }
            sigma_idx[k] = 0;
            k += 1;
        }
    }
}

/// Symmetric `d` tables compatible with `σ`: condition 2 filters each
/// `d_{i,k}` on its own, condition 4 is checked once its four entries exist.
fn block_d_search(p: usize, sigma: &[Perm], perms: &[Perm]) -> Vec<BlockFormData> {
    let sinv: Vec<Perm> = sigma.iter().map(Perm::inverse).collect();
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (i..p).map(move |k| (i, k))).collect();
    let pair_of = |i: usize, k: usize| pairs.iter().position(|&q| q == (i.min(k), i.max(k))).unwrap();
    let cond2 = |d: &Perm| {
        let di = d.inverse();
        (0..p).all(|j| {
            (0..p).all(|l| {
                sigma[j].compose(&sigma[di.apply(l)]).unwrap() == sigma[l].compose(&sigma[di.apply(j)]).unwrap()
            })
        })
    };
    let candidates: Vec<Vec<usize>> = pairs
        .iter()
        .map(|_| (0..perms.len()).filter(|&c| cond2(&perms[c])).collect())
        .collect();
    // condition-4 instances bucketed by the last pair they need
    let mut buckets: Vec<Vec<[usize; 5]>> = vec![Vec::new(); pairs.len()];
    for i in 0..p {
        for k in 0..p {
            for w in 0..p {
                for j in 0..p {
                    for l in 0..p {
                        let q = [
                            pair_of(i, w),
                            pair_of(sinv[j].apply(k), sinv[j].apply(w)),
                            pair_of(k, w),
                            pair_of(sinv[l].apply(i), sinv[l].apply(w)),
                        ];
                        buckets[*q.iter().max().unwrap()].push([i, k, w, j, l]);
                    }
                }
            }
        }
    }
    let search = DSearch {
        p,
        sigma,
        sinv: &sinv,
        perms,
        candidates: &candidates,
        buckets: &buckets,
        pair_of: &pair_of,
    };
    let mut out = Vec::new();
    search.go(0, &mut vec![0; pairs.len()], &mut out);
    out
}

struct DSearch<'a> {
    p: usize,
    sigma: &'a [Perm],
    sinv: &'a [Perm],
    perms: &'a [Perm],
    candidates: &'a [Vec<usize>],
    buckets: &'a [Vec<[usize; 5]>],
    pair_of: &'a dyn Fn(usize, usize) -> usize,
}

impl DSearch<'_> {
    fn go(&self, depth: usize, chosen: &mut Vec<usize>, out: &mut Vec<BlockFormData>) {
        let (p, perms, sinv) = (self.p, self.perms, self.sinv);
        if depth == self.candidates.len() {
            let d = (0..p * p)
                .map(|ik| perms[chosen[(self.pair_of)(ik / p, ik % p)]].clone())
                .collect();
            out.push(BlockFormData {
                y_size: p,
                z_size: p,
                sigma: self.sigma.to_vec(),
                d,
            });
            return;
        }
        for &c in &self.candidates[depth] {
            chosen[depth] = c;
            let d = |i: usize, k: usize| &perms[chosen[(self.pair_of)(i, k)]];
            let ok = self.buckets[depth].iter().all(|&[i, k, w, j, l]| {
                let lhs = d(i, w).compose(d(sinv[j].apply(k), sinv[j].apply(w))).unwrap();
                let rhs = d(k, w).compose(d(sinv[l].apply(i), sinv[l].apply(w))).unwrap();
                lhs == rhs
            });
            if ok {
                self.go(depth + 1, chosen, out);
            }
        }
    }
}

/// Square-family parameters `(t, j)` admissible at prime `p`.
pub fn prime_square_parameters(p: usize) -> Vec<SquareParams> {
    let mut out = Vec::new();
    if !is_prime(p) {
        return out;
    }
    for t in 1..p {
        if mult_order(t, p).is_multiple_of(2) {
            continue;
        }
        let total = p.pow(p as u32);
        for code in 0..total {
            let mut c = code;
            let j: Vec<usize> = (0..p)
                .map(|_| {
                    let v = c % p;
                    c /= p;
                    v
                })
                .collect();
            if p2_solution(p, t, &j).is_ok() {
                out.push(SquareParams { t, j });
            }
        }
    }
    out
}

fn annotate(p: usize, counts: BTreeMap<Vec<Vec<usize>>, usize>) -> Result<Vec<CensusRecord>, CensusError> {
    let params = prime_square_parameters(p);
    let sols: Vec<Solution> = params
        .iter()
        .map(|q| p2_solution(p, q.t, &q.j).expect("admissible"))
        .collect();
    counts
        .into_iter()
        .map(|(key, count)| {
            let s = Solution::from_table(key.clone()).expect("census keys are solutions");
            let flags = flags_of(&s)?;
            let params = sols
                .iter()
                .position(|t| find_isomorphism(&s, t).is_some())
                .map(|i| params[i].clone());
            Ok(CensusRecord {
                key,
                flags,
                count,
                params,
            })
        })
        .collect()
}
