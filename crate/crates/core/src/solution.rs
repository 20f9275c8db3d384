//! Finite involutive non-degenerate solutions stored as their σ-tables.
//!
//! A solution on `{0,…,n−1}` is given by one permutation `σ_x` per point and
//! `r(x,y) = (σ_x(y), σ⁻¹_{σ_x(y)}(x))`. The cycle-set view uses
//! `x·y = σ_x⁻¹(y)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{self, closure_with_cap, is_bijection, Perm, PermError, PermGroup};

/// A point tuple on which some axiom fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Row `x` of the table is not a bijection.
    Row(usize),
    Pair(usize, usize),
    Triple(usize, usize, usize),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Row(x) => write!(f, "row {x}"),
            Witness::Pair(x, y) => write!(f, "pair ({x},{y})"),
            Witness::Triple(x, y, z) => write!(f, "triple ({x},{y},{z})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub involutive: bool,
    pub nondegenerate: bool,
    pub ybe: bool,
    pub failing_witness: Option<Witness>,
}

impl SolutionReport {
    pub fn is_valid(&self) -> bool {
        self.involutive && self.nondegenerate && self.ybe
    }
}

/// The table itself is malformed, as opposed to failing an axiom.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has length {len}, expected {n}")]
    Ragged { row: usize, len: usize, n: usize },
    #[error("entry {value} at ({row},{col}) is out of range for n = {n}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("declared n = {declared} but table has {actual} rows")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("{0} labels given for {1} points")]
    Labels(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolutionError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("axiom failure at {}", .0.failing_witness.map_or("?".to_string(), |w| w.to_string()))]
    Axiom(SolutionReport),
    #[error("cycle-set law fails at {0}")]
    CycleSetLaw(Witness),
    #[error("row {0} of the cycle-set table is not a bijection")]
    CycleSetRow(usize),
    #[error("square map is not injective: {0}·{0} = {1}·{1}")]
    DegenerateSquares(usize, usize),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn check_format(table: &[Vec<usize>]) -> Result<usize, FormatError> {
    let n = table.len();
    if n == 0 {
        return Err(FormatError::Empty);
    }
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != n {
            return Err(FormatError::Ragged {
                row,
                len: entries.len(),
                n,
            });
        }
        if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(FormatError::OutOfRange {
                row,
                col,
                value,
                n,
            });
        }
    }
    Ok(n)
}

/// Row-table view used by the checkers; rows are assumed bijective.
struct Table<'a> {
    rows: &'a [Vec<usize>],
    inv: Vec<Vec<usize>>,
}

impl<'a> Table<'a> {
    fn new(rows: &'a [Vec<usize>]) -> Self {
        let inv = rows
            .iter()
            .map(|row| {
                let mut inv = vec![0; row.len()];
                for (i, &v) in row.iter().enumerate() {
                    inv[v] = i;
                }
                inv
            })
            .collect();
        Table { rows, inv }
    }

    #[inline]
    fn r(&self, x: usize, y: usize) -> (usize, usize) {
        let u = self.rows[x][y];
        (u, self.inv[u][x])
    }

    fn first_non_involutive(&self) -> Option<Witness> {
        let n = self.rows.len();
        for x in 0..n {
            for y in 0..n {
                let (u, v) = self.r(x, y);
                if self.r(u, v) != (x, y) {
                    return Some(Witness::Pair(x, y));
                }
            }
        }
        None
    }

    fn first_braid_failure(&self) -> Option<Witness> {
        let n = self.rows.len();
        for x in 0..n {
            for y in 0..n {
                let (a, b) = self.r(x, y);
                for z in 0..n {
                    // r12 r23 r12
                    let (b1, c1) = self.r(b, z);
                    let (a1, b2) = self.r(a, b1);
                    // r23 r12 r23
                    let (p, q) = self.r(y, z);
                    let (s, p1) = self.r(x, p);
                    let (p2, q1) = self.r(p1, q);
                    if (a1, b2, c1) != (s, p2, q1) {
                        return Some(Witness::Triple(x, y, z));
                    }
                }
            }
        }
        None
    }

    /// First `(x,y,z)` with `σ_x σ_{σ_x⁻¹(y)}(z) ≠ σ_y σ_{σ_y⁻¹(x)}(z)`.
    fn first_sigma_identity_failure(&self) -> Option<Witness> {
        let n = self.rows.len();
        for x in 0..n {
            for y in 0..n {
                let a = &self.rows[self.inv[x][y]];
                let b = &self.rows[self.inv[y][x]];
                for z in 0..n {
                    if self.rows[x][a[z]] != self.rows[y][b[z]] {
                        return Some(Witness::Triple(x, y, z));
                    }
                }
            }
        }
        None
    }
}

fn first_non_bijective_row(table: &[Vec<usize>]) -> Option<usize> {
    table.iter().position(|row| !is_bijection(row))
}

/// Braid relation by direct evaluation of `r₁₂r₂₃r₁₂` and `r₂₃r₁₂r₂₃` on every triple.
/// Requires bijective rows.
pub fn ybe_by_triples(table: &[Vec<usize>]) -> Option<Witness> {
    Table::new(table).first_braid_failure()
}

/// Braid relation via `σ_x σ_{σ_x⁻¹(y)} = σ_y σ_{σ_y⁻¹(x)}`. Requires bijective rows.
pub fn ybe_by_sigma_identity(table: &[Vec<usize>]) -> Option<Witness> {
    Table::new(table).first_sigma_identity_failure()
}

/// Above this size only the σ-identity checker runs.
pub const DUAL_CHECK_LIMIT: usize = 256;

/// Checks a candidate σ-table.
///
/// The second coordinate map is not checked for bijectivity on its own: it is
/// determined by σ, and for finite tables it follows from the other axioms
/// (asserted in debug builds).
pub fn validate(table: &[Vec<usize>]) -> Result<SolutionReport, FormatError> {
    check_format(table)?;
    if let Some(x) = first_non_bijective_row(table) {
        return Ok(SolutionReport {
            involutive: false,
            nondegenerate: false,
            ybe: false,
            failing_witness: Some(Witness::Row(x)),
        });
    }
    let t = Table::new(table);
    let invol = t.first_non_involutive();
    let ident = t.first_sigma_identity_failure();
    let braid = if table.len() <= DUAL_CHECK_LIMIT {
        let braid = t.first_braid_failure();
        assert_eq!(
            braid.is_none(),
            ident.is_none(),
            "braid checkers disagree on {table:?}"
        );
        braid
    } else {
        ident
    };
    if invol.is_none() && braid.is_none() {
        debug_assert!((0..table.len()).all(|y| {
            let image: Vec<usize> = (0..table.len()).map(|x| t.r(x, y).1).collect();
            is_bijection(&image)
        }));
    }
    Ok(SolutionReport {
        involutive: invol.is_none(),
        nondegenerate: true,
        ybe: braid.is_none(),
        failing_witness: invol.or(braid),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    sigma: Vec<Perm>,
    sigma_inv: Vec<Perm>,
    labels: Option<Vec<String>>,
}

impl Solution {
    /// Validates `table` and builds the solution.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, SolutionError> {
        let report = validate(&table)?;
        if !report.is_valid() {
            return Err(SolutionError::Axiom(report));
        }
        Ok(Self::from_valid_table(table))
    }

    pub fn from_perms(sigma: Vec<Perm>) -> Result<Self, SolutionError> {
        Self::from_table(sigma.into_iter().map(Vec::from).collect())
    }

    /// Caller guarantees the table is a valid solution.
    pub(crate) fn from_valid_table(table: Vec<Vec<usize>>) -> Self {
        let sigma: Vec<Perm> = table.into_iter().map(Perm::from_image_unchecked).collect();
        let sigma_inv = sigma.iter().map(Perm::inverse).collect();
        Solution {
            sigma,
            sigma_inv,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, FormatError> {
        if labels.len() != self.n() {
            return Err(FormatError::Labels(labels.len(), self.n()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of `x`: its label, or the 1-based index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => (x + 1).to_string(),
        }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self, x: usize) -> &Perm {
        &self.sigma[x]
    }

    pub fn sigma_inv(&self, x: usize) -> &Perm {
        &self.sigma_inv[x]
    }

    pub fn sigmas(&self) -> &[Perm] {
        &self.sigma
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.sigma.iter().map(|p| p.image().to_vec()).collect()
    }

    /// `γ_y(x) = σ⁻¹_{σ_x(y)}(x)`.
    pub fn gamma(&self, y: usize, x: usize) -> usize {
        self.sigma_inv[self.sigma[x].apply(y)].apply(x)
    }

    pub fn apply_r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma[x].apply(y), self.gamma(y, x))
    }

    pub fn report(&self) -> SolutionReport {
        validate(&self.table()).expect("stored table is well formed")
    }

    pub fn permutation_group(&self) -> Result<PermGroup, PermError> {
        self.permutation_group_with_cap(perm::DEFAULT_GROUP_CAP)
    }

    pub fn permutation_group_with_cap(&self, cap: usize) -> Result<PermGroup, PermError> {
        closure_with_cap(self.n(), &self.sigma, cap)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        perm::orbits(self.n(), &self.sigma).expect("σ rows share the degree")
    }

    pub fn is_indecomposable(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Block systems of the σ-group; empty for decomposable solutions.
    pub fn block_systems(&self) -> Vec<Vec<Vec<usize>>> {
        perm::block_systems(self.n(), &self.sigma).unwrap_or_default()
    }

    /// Transitive with no nontrivial block system; false when decomposable.
    pub fn is_primitive(&self) -> bool {
        self.is_indecomposable() && self.block_systems().is_empty()
    }

    pub fn is_irretractable(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.sigma.iter().all(|s| seen.insert(s))
    }

    pub fn is_square_free(&self) -> bool {
        (0..self.n()).all(|x| self.sigma[x].apply(x) == x)
    }

    /// Quotient by the relation `σ_x = σ_y`, with the class map.
    pub fn retract(&self) -> (Solution, Vec<usize>) {
        let mut ids: HashMap<&Perm, usize> = HashMap::new();
        let labels: Vec<usize> = self
            .sigma
            .iter()
            .map(|s| {
                let next = ids.len();
                *ids.entry(s).or_insert(next)
            })
            .collect();
        let quotient = self
            .quotient_by_labels(&labels)
            .expect("σ-equality is a congruence");
        (quotient, labels)
    }

    /// Least `k` with `|Retᵏ| = 1`; a single point has level 0.
    pub fn multipermutation_level(&self) -> Option<usize> {
        let mut current = self.clone();
        let mut level = 0;
        loop {
            if current.n() == 1 {
                return Some(level);
            }
            let (next, _) = current.retract();
            if next.n() == current.n() {
                return None;
            }
            current = next;
            level += 1;
        }
    }

    /// Induced solution on the classes of `labels` (numbered `0..k` by first
    /// appearance). Returns a witness pair `(x, y)` where the induced map is
    /// not well defined.
    pub(crate) fn quotient_by_labels(
        &self,
        labels: &[usize],
    ) -> Result<Solution, Witness> {
        let n = self.n();
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut rep = vec![usize::MAX; k];
        for (x, &c) in labels.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = x;
            }
        }
        let table: Vec<Vec<usize>> = (0..k)
            .map(|c| (0..k).map(|d| labels[self.sigma[rep[c]].apply(rep[d])]).collect())
            .collect();
        for x in 0..n {
            for y in 0..n {
                if labels[self.sigma[x].apply(y)] != table[labels[x]][labels[y]] {
                    return Err(Witness::Pair(x, y));
                }
            }
        }
        let report = validate(&table).expect("quotient table is well formed");
        assert!(report.is_valid(), "quotient of a solution is a solution");
        Ok(Solution::from_valid_table(table))
    }

    /// The isomorphic copy with point `x` renamed `pi(x)`.
    pub fn relabel(&self, pi: &Perm) -> Solution {
        let n = self.n();
        let mut table = vec![Vec::new(); n];
        for x in 0..n {
            table[pi.apply(x)] = self.sigma[x].conjugate_by(pi).image().to_vec();
        }
        Solution::from_valid_table(table)
    }

    /// `x·y = σ_x⁻¹(y)`.
    pub fn to_cycle_set(&self) -> Vec<Vec<usize>> {
        self.sigma_inv.iter().map(|p| p.image().to_vec()).collect()
    }

    pub fn from_cycle_set(dot: Vec<Vec<usize>>) -> Result<Self, SolutionError> {
        let n = check_format(&dot)?;
        if let Some(x) = first_non_bijective_row(&dot) {
            return Err(SolutionError::CycleSetRow(x));
        }
        if let Some(w) = first_cycle_set_violation(&dot) {
            return Err(SolutionError::CycleSetLaw(w));
        }
        let mut owner = vec![usize::MAX; n];
        for x in 0..n {
            let sq = dot[x][x];
            if owner[sq] != usize::MAX {
                return Err(SolutionError::DegenerateSquares(owner[sq], x));
            }
            owner[sq] = x;
        }
        let table = dot
            .into_iter()
            .map(|row| Perm::from_image_unchecked(row).inverse().into())
            .collect();
        Self::from_table(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SolutionFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, SolutionError> {
        let file: SolutionFile =
            serde_json::from_str(text).map_err(|e| SolutionError::Json(e.to_string()))?;
        Solution::try_from(file)
    }

    pub fn cycle_set_json(&self) -> String {
        serde_json::to_string(&CycleSetFile {
            n: self.n(),
            dot: self.to_cycle_set(),
        })
        .expect("serializable")
    }

    pub fn from_cycle_set_json(text: &str) -> Result<Self, SolutionError> {
        let file: CycleSetFile =
            serde_json::from_str(text).map_err(|e| SolutionError::Json(e.to_string()))?;
        if file.dot.len() != file.n {
            return Err(FormatError::SizeMismatch {
                declared: file.n,
                actual: file.dot.len(),
            }
            .into());
        }
        Solution::from_cycle_set(file.dot)
    }
}

/// First triple violating `(x·y)·(x·z) = (y·x)·(y·z)`.
pub fn first_cycle_set_violation(dot: &[Vec<usize>]) -> Option<Witness> {
    let n = dot.len();
    for x in 0..n {
        for y in 0..n {
            let (xy, yx) = (dot[x][y], dot[y][x]);
            for z in 0..n {
                if dot[xy][dot[x][z]] != dot[yx][dot[y][z]] {
                    return Some(Witness::Triple(x, y, z));
                }
            }
        }
    }
    None
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.n() {
            writeln!(f, "σ_{} = {}", self.label(x), self.sigma[x])?;
        }
        Ok(())
    }
}

/// On-disk form: `{"n": .., "sigma": [[..]..], "labels": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleSetFile {
    pub n: usize,
    pub dot: Vec<Vec<usize>>,
}

impl From<&Solution> for SolutionFile {
    fn from(s: &Solution) -> Self {
        SolutionFile {
            n: s.n(),
            sigma: s.table(),
            labels: s.labels.clone(),
        }
    }
}

impl TryFrom<SolutionFile> for Solution {
    type Error = SolutionError;

    fn try_from(file: SolutionFile) -> Result<Self, Self::Error> {
        if file.sigma.len() != file.n {
            return Err(FormatError::SizeMismatch {
                declared: file.n,
                actual: file.sigma.len(),
            }
            .into());
        }
        let s = Solution::from_table(file.sigma)?;
        match file.labels {
            Some(labels) => Ok(s.with_labels(labels)?),
            None => Ok(s),
        }
    }
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SolutionFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = SolutionFile::deserialize(deserializer)?;
        Solution::try_from(file).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial(n: usize) -> Solution {
        Solution::from_table(vec![(0..n).collect(); n]).unwrap()
    }

    fn cyclic(n: usize) -> Solution {
        Solution::from_perms(vec![Perm::shift(n); n]).unwrap()
    }

    #[test]
    fn trivial_solution_is_valid_and_flips() {
        let s = trivial(3);
        assert!(s.report().is_valid());
        assert_eq!(s.apply_r(0, 2), (2, 0));
        assert_eq!(s.gamma(1, 2), 2);
        assert!(!s.is_indecomposable());
        assert!(s.is_square_free());
        assert_eq!(s.permutation_group().unwrap().order(), 1);
        assert_eq!(s.multipermutation_level(), Some(1));
        assert_eq!(s.retract().0.n(), 1);
    }

    #[test]
    fn non_solution_reports_braid_failure() {
        let report = validate(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(report.involutive);
        assert!(!report.ybe);
        assert!(matches!(report.failing_witness, Some(Witness::Triple(..))));
    }

    #[test]
    fn format_errors_are_distinct() {
        assert_eq!(validate(&[]), Err(FormatError::Empty));
        assert!(matches!(
            validate(&[vec![0, 1], vec![0]]),
            Err(FormatError::Ragged { row: 1, .. })
        ));
        assert!(matches!(
            validate(&[vec![0, 2], vec![0, 1]]),
            Err(FormatError::OutOfRange { value: 2, .. })
        ));
        let report = validate(&[vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(report.failing_witness, Some(Witness::Row(0)));
        assert!(!report.nondegenerate);
    }

    #[test]
    fn permutation_solution_formula() {
        let s = cyclic(5);
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(s.apply_r(x, y), ((y + 1) % 5, (x + 4) % 5));
            }
        }
        assert!(s.is_indecomposable());
        assert!(s.is_primitive());
        assert_eq!(s.multipermutation_level(), Some(1));
        assert!(!s.is_irretractable());
        assert_eq!(trivial(1).multipermutation_level(), Some(0));
    }

    #[test]
    fn cycle_set_round_trip() {
        let s = cyclic(4);
        let dot = s.to_cycle_set();
        assert_eq!(dot[0], vec![3, 0, 1, 2]);
        assert_eq!(Solution::from_cycle_set(dot).unwrap(), s);
        assert_eq!(trivial(3).to_cycle_set(), vec![vec![0, 1, 2]; 3]);
    }

    #[test]
    fn cycle_set_rejections() {
        // Bijective rows that break the law.
        let bad = vec![vec![1, 0, 2], vec![0, 1, 2], vec![0, 1, 2]];
        let err = Solution::from_cycle_set(bad.clone()).unwrap_err();
        let SolutionError::CycleSetLaw(Witness::Triple(x, y, z)) = err else {
            panic!("expected a law violation, got {err:?}");
        };
        assert_ne!(bad[bad[x][y]][bad[x][z]], bad[bad[y][x]][bad[y][z]]);
    }

    #[test]
    fn json_round_trip_and_labels() {
        let s = cyclic(3)
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let text = s.to_json();
        assert_eq!(
            text,
            r#"{"n":3,"sigma":[[1,2,0],[1,2,0],[1,2,0]],"labels":["a","b","c"]}"#
        );
        assert_eq!(Solution::from_json(&text).unwrap(), s);
        assert!(matches!(
            Solution::from_json(r#"{"n":2,"sigma":[[1,0],[0,1]]}"#),
            Err(SolutionError::Axiom(_))
        ));
        assert!(matches!(
            Solution::from_json("{"),
            Err(SolutionError::Json(_))
        ));
        let cs = Solution::from_cycle_set_json(&s.cycle_set_json()).unwrap();
        assert_eq!(cs.table(), s.table());
    }

    #[test]
    fn relabel_preserves_validity() {
        let s = cyclic(4);
        let pi = Perm::parse_cycles(4, "(1,3)").unwrap();
        let t = s.relabel(&pi);
        assert!(t.report().is_valid());
        assert_eq!(t.sigma(0), &Perm::parse_cycles(4, "(1,2,3,4)").unwrap().conjugate_by(&pi));
    }
}
