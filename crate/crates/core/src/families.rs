//! Parameterized constructions of solutions and the explicit fixtures.
//!
//! Product sets `Y × Z` are encoded row-major: `(i, j) ↦ i·|Z| + j`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{self, Perm};
use crate::solution::{validate, Solution, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("t = {t} is not a unit modulo {n}")]
    NotUnit { t: usize, n: usize },
    #[error("expected {expected} parameters, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("modulus must be at least 2, got {0}")]
    Bounds(usize),
    #[error("j_{i} != j_{{-{i}}}")]
    Asymmetric { i: usize },
    #[error("orbit condition fails at i = {i}, s = {s}")]
    OrbitCondition { i: usize, s: usize },
    #[error("no k makes j_(i+k) - j_k a unit, for i = {i}")]
    NoUnitShift { i: usize },
    #[error("j_(i+k) = j_k for every k, with i = {i}")]
    PeriodicJ { i: usize },
    #[error("the j_i do not generate Z/({0})")]
    NotGenerating(usize),
    #[error("j is constant")]
    ConstantJ,
    #[error("multiplicative order {order} of t = {t} is even, so the hypotheses force j to be constant")]
    EvenOrder { t: usize, order: usize },
    #[error("the construction violates the axioms at {0}")]
    NotASolution(Witness),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_unit(a: usize, n: usize) -> bool {
    gcd(a % n, n) == 1
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Multiplicative order of a unit `t` modulo `n`.
pub fn mult_order(t: usize, n: usize) -> usize {
    let mut x = t % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * t % n;
        k += 1;
    }
    k
}

#[inline]
fn sub(a: usize, b: usize, n: usize) -> usize {
    (a + n - b % n) % n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareFamilyParams {
    pub n: usize,
    pub t: usize,
    pub j: Vec<usize>,
}

/// Which parameter criterion covers a square-family instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareCriterion {
    /// General `t`, with `j_{i+k} − j_k` a unit for some `k` per nonzero `i`.
    UnitShift,
    /// `t = 1`, non-periodic `j` generating `Z/(n)`.
    Generating,
    /// `n` prime, `j` non-constant.
    PrimeSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    pub applicable: Vec<SquareCriterion>,
    pub indecomposable_irretractable: bool,
    pub simple_guaranteed: bool,
    pub notes: Vec<String>,
}

impl fmt::Display for Claims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "applicable constructions: {:?}", self.applicable)?;
        writeln!(
            f,
            "indecomposable and irretractable: {}",
            self.indecomposable_irretractable
        )?;
        writeln!(f, "simplicity guaranteed: {}", self.simple_guaranteed)?;
        for note in &self.notes {
            writeln!(f, "  {note}")?;
        }
        Ok(())
    }
}

impl SquareFamilyParams {
    pub fn new(n: usize, t: usize, j: Vec<usize>) -> Self {
        SquareFamilyParams { n, t, j }
    }

    fn check_shape(&self) -> Result<(), FamilyError> {
        if self.n < 2 {
            return Err(FamilyError::Bounds(self.n));
        }
        if self.j.len() != self.n {
            return Err(FamilyError::BadLength {
                expected: self.n,
                got: self.j.len(),
            });
        }
        if !is_unit(self.t, self.n) {
            return Err(FamilyError::NotUnit {
                t: self.t,
                n: self.n,
            });
        }
        Ok(())
    }

    fn jv(&self, i: usize) -> usize {
        self.j[i % self.n] % self.n
    }

    pub fn check_symmetric(&self) -> Result<(), FamilyError> {
        let n = self.n;
        match (0..n).find(|&i| self.jv(i) != self.jv((n - i) % n)) {
            Some(i) => Err(FamilyError::Asymmetric { i }),
            None => Ok(()),
        }
    }

    /// `j_{tˢi} = tˢ j_i − (tˢ−1) j_0`, for `s` below the order of `t`.
    pub fn check_orbit(&self) -> Result<(), FamilyError> {
        let n = self.n;
        let ord = mult_order(self.t, n);
        let mut ts = 1 % n;
        for s in 0..ord {
            for i in 0..n {
                let lhs = self.jv(ts * i);
                let rhs = sub(ts * self.jv(i), sub(ts, 1, n) * self.jv(0), n);
                if lhs != rhs {
                    return Err(FamilyError::OrbitCondition { i, s });
                }
            }
            ts = ts * self.t % n;
        }
        Ok(())
    }

    pub fn check_unit_shift(&self) -> Result<(), FamilyError> {
        let n = self.n;
        for i in 1..n {
            if !(0..n).any(|k| is_unit(sub(self.jv(i + k), self.jv(k), n), n)) {
                return Err(FamilyError::NoUnitShift { i });
            }
        }
        Ok(())
    }

    pub fn check_aperiodic(&self) -> Result<(), FamilyError> {
        let n = self.n;
        for i in 1..n {
            if (0..n).all(|k| self.jv(i + k) == self.jv(k)) {
                return Err(FamilyError::PeriodicJ { i });
            }
        }
        Ok(())
    }

    pub fn check_generating(&self) -> Result<(), FamilyError> {
        if self.j.iter().fold(self.n, |g, &x| gcd(g, x % self.n)) == 1 {
            Ok(())
        } else {
            Err(FamilyError::NotGenerating(self.n))
        }
    }

    /// `j_0 − j_i` is a unit for every nonzero `i`.
    pub fn diagonal_units(&self) -> bool {
        (1..self.n).all(|i| is_unit(sub(self.jv(0), self.jv(i), self.n), self.n))
    }

    /// `j_i − j_k` is a unit whenever `j_i ≠ j_k`.
    pub fn difference_units(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|k| self.jv(i) == self.jv(k) || is_unit(sub(self.jv(i), self.jv(k), n), n))
        })
    }

    fn is_constant(&self) -> bool {
        self.j.iter().all(|&x| x % self.n == self.jv(0))
    }

    /// Which constructions cover these parameters. Errors name the failing
    /// hypothesis of the construction closest to the parameters.
    pub fn claims(&self) -> Result<Claims, FamilyError> {
        self.check_shape()?;
        self.check_symmetric()?;
        let general = self.check_orbit().and_then(|_| self.check_unit_shift());
        let generating = if self.t % self.n == 1 % self.n {
            self.check_aperiodic().and_then(|_| self.check_generating())
        } else {
            general.clone()
        };
        let prime = if is_prime(self.n) {
            self.check_orbit().and_then(|_| {
                if self.is_constant() {
                    Err(FamilyError::ConstantJ)
                } else {
                    Ok(())
                }
            })
        } else {
            Err(FamilyError::NotPrime(self.n))
        };
        let mut applicable = Vec::new();
        let mut notes = Vec::new();
        let mut simple = false;
        if general.is_ok() {
            applicable.push(SquareCriterion::UnitShift);
            let (i, ii) = (self.diagonal_units(), self.difference_units());
            notes.push(format!("unit-shift construction: (i) {i}, (ii) {ii}"));
            simple |= i && ii;
        }
        if self.t % self.n == 1 % self.n && generating.is_ok() {
            applicable.push(SquareCriterion::Generating);
            let d = self.diagonal_units();
            notes.push(format!("generating construction: j_0 - j_i units {d}"));
            simple |= d;
        }
        if prime.is_ok() {
            applicable.push(SquareCriterion::PrimeSquare);
            notes.push("prime modulus with non-constant j".to_string());
            simple = true;
        }
        if applicable.is_empty() {
            return Err(if self.t % self.n == 1 % self.n {
                generating.unwrap_err()
            } else {
                general.unwrap_err()
            });
        }
        Ok(Claims {
            applicable,
            indecomposable_irretractable: true,
            simple_guaranteed: simple,
            notes,
        })
    }
}

/// `σ_{(i,j)}(k,l) = (tk+j, t(l − j_{tk+j−i}))` on `(Z/(n))²`, without
/// checking any hypothesis on the parameters.
pub fn square_table(n: usize, t: usize, j: &[usize]) -> Vec<Vec<usize>> {
    let mut table = vec![vec![0; n * n]; n * n];
    for i in 0..n {
        for jj in 0..n {
            let row = &mut table[i * n + jj];
            for k in 0..n {
                let a = (t * k + jj) % n;
                let shift = j[sub(a, i, n)] % n;
                for l in 0..n {
                    row[k * n + l] = a * n + t * sub(l, shift, n) % n;
                }
            }
        }
    }
    table
}

pub fn square_solution(p: &SquareFamilyParams) -> Result<(Solution, Claims), FamilyError> {
    let claims = p.claims()?;
    let s = Solution::from_table(square_table(p.n, p.t, &p.j))
        .expect("covered parameters give a solution");
    Ok((s, claims))
}

/// Square family at prime modulus `p`; always simple when accepted.
pub fn p2_solution(p: usize, t: usize, j: &[usize]) -> Result<Solution, FamilyError> {
    if !is_prime(p) {
        return Err(FamilyError::NotPrime(p));
    }
    if t.is_multiple_of(p) {
        return Err(FamilyError::NotUnit { t, n: p });
    }
    let params = SquareFamilyParams::new(p, t, j.to_vec());
    params.check_shape()?;
    params.check_symmetric()?;
    let order = mult_order(t, p);
    if order.is_multiple_of(2) {
        return Err(FamilyError::EvenOrder { t, order });
    }
    params.check_orbit()?;
    if params.is_constant() {
        return Err(FamilyError::ConstantJ);
    }
    Ok(square_solution(&params)?.0)
}

/// `σ_j(k) = 2k + j` and `d_{u,v}` on `Z/(7)` from the table on the
/// differences `{0,1,2,4}`; the remaining differences `3, 5, 6` are the
/// negatives of `4, 2, 1` and follow from `d_{k,k+a} = d_{k+a,k}`.
pub fn p7_example_data() -> BlockFormData {
    let p = 7;
    let listed = [0usize, 1, 2, 4];
    let d_a0 = |a: usize| Perm::new((0..p).map(|l| 2 * sub(l, a, p) % p).collect()).unwrap();
    let mut d = Vec::with_capacity(p * p);
    for u in 0..p {
        for v in 0..p {
            let a = if listed.contains(&sub(u, v, p)) {
                sub(u, v, p)
            } else {
                sub(v, u, p)
            };
            debug_assert!(listed.contains(&a));
            d.push(d_a0(a));
        }
    }
    let sigma = (0..p)
        .map(|j| Perm::new((0..p).map(|k| (2 * k + j) % p).collect()).unwrap())
        .collect();
    BlockFormData {
        y_size: p,
        z_size: p,
        sigma,
        d,
    }
}

/// The `j`-vector matching [`p7_example_data`] under `d_{i,k}(l) = t(l − j_{k−i})`.
pub fn p7_example_j() -> Vec<usize> {
    vec![0, 1, 2, 4, 4, 2, 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangularFamilyParams {
    pub m: usize,
    pub n: usize,
}

/// `σ_{(i,j)}(k,l) = (k + j/n, l + n·δ_{i,k+j/n})` on `Z/(mn) × (nZ)/(mn)`,
/// with `j/n` the representative in `0..m`. The second coordinate `l` is
/// stored as `l/n ∈ 0..m`, so `(i, l) ↦ i·m + l/n`.
pub fn rectangular_table(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mn = m * n;
    let size = mn * m;
    let mut table = vec![vec![0; size]; size];
    for i in 0..mn {
        for jq in 0..m {
            let row = &mut table[i * m + jq];
            for k in 0..mn {
                let a = (k + jq) % mn;
                let bump = usize::from(a == i);
                for lq in 0..m {
                    row[k * m + lq] = a * m + (lq + bump) % m;
                }
            }
        }
    }
    table
}

/// The rectangular table as a solution, if it is one.
///
/// Every row is a bijection and `σ_{(1,n)}` is a single `nm²`-cycle, but
/// the braid relation fails: `j ↦ j/n` is not additive modulo `mn`, so
/// `σ_j σ_{l−n} ≠ σ_l σ_{j−n}` as soon as exactly one of `j, l` is `0`.
/// The failing triple is returned.
pub fn rectangular_solution(p: &RectangularFamilyParams) -> Result<Solution, FamilyError> {
    let (m, n) = (p.m, p.n);
    if m < 2 {
        return Err(FamilyError::Bounds(m));
    }
    if n < 2 {
        return Err(FamilyError::Bounds(n));
    }
    let table = rectangular_table(m, n);
    let long = Perm::new(table[m + 1].clone()).expect("rows are bijections");
    assert_eq!(long.cycle_type(), vec![n * m * m], "σ_(1,n) is one full cycle");
    let report = validate(&table).expect("well-formed table");
    match report.failing_witness {
        Some(w) => Err(FamilyError::NotASolution(w)),
        None => Ok(Solution::from_table(table).expect("validated")),
    }
}

/// `r(x,y) = (σ(y), σ⁻¹(x))`.
pub fn permutation_solution(sigma: &Perm) -> Solution {
    let n = sigma.degree();
    Solution::from_perms(vec![sigma.clone(); n]).expect("permutation solutions are solutions")
}

/// Inputs of the block-form criterion on `Y × Z`.
///
/// `sigma[j]` acts on `Y` for `j ∈ Z`; `d[i·|Y| + k]` acts on `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFormData {
    pub y_size: usize,
    pub z_size: usize,
    pub sigma: Vec<Perm>,
    pub d: Vec<Perm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockCondition {
    Shape,
    FTransitive,
    WTransitive,
    /// Closed form of the second coordinate of `r`.
    Cond1,
    /// `σ_j σ_{d⁻¹_{i,k}(l)} = σ_l σ_{d⁻¹_{k,i}(j)}`.
    Cond2,
    /// `d_{i,k} = d_{k,i}`.
    Cond3,
    /// `d_{i,w} d_{σ_j⁻¹(k),σ_j⁻¹(w)} = d_{k,w} d_{σ_l⁻¹(i),σ_l⁻¹(w)}`.
    Cond4,
    /// `σ_j ≠ σ_l` for `j ≠ l`.
    DistinctSigma,
    /// Rows `k ↦ d_{i,k}` are pairwise distinct.
    DistinctD,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockViolation {
    pub condition: BlockCondition,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockFormOutcome {
    Accepted(Solution),
    Rejected(Vec<BlockViolation>),
}

impl BlockFormOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            BlockFormOutcome::Accepted(s) => Some(s),
            BlockFormOutcome::Rejected(_) => None,
        }
    }

    pub fn violated(&self) -> Vec<BlockCondition> {
        match self {
            BlockFormOutcome::Accepted(_) => Vec::new(),
            BlockFormOutcome::Rejected(v) => v.iter().map(|x| x.condition).collect(),
        }
    }
}

impl BlockFormData {
    #[inline]
    pub fn d_at(&self, i: usize, k: usize) -> &Perm {
        &self.d[i * self.y_size + k]
    }

    /// `σ_{(i,j)}(k,l) = (σ_j(k), d_{i,σ_j(k)}(l))` as a row table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let (ny, nz) = (self.y_size, self.z_size);
        let mut table = vec![vec![0; ny * nz]; ny * nz];
        for i in 0..ny {
            for j in 0..nz {
                let row = &mut table[i * nz + j];
                for k in 0..ny {
                    let a = self.sigma[j].apply(k);
                    let d = self.d_at(i, a);
                    for l in 0..nz {
                        row[k * nz + l] = a * nz + d.apply(l);
                    }
                }
            }
        }
        table
    }

    fn shape_ok(&self) -> bool {
        self.y_size >= 2
            && self.z_size >= 2
            && self.sigma.len() == self.z_size
            && self.sigma.iter().all(|p| p.degree() == self.y_size)
            && self.d.len() == self.y_size * self.y_size
            && self.d.iter().all(|p| p.degree() == self.z_size)
    }

    /// Every violated condition, each with its first witness.
    pub fn violations(&self) -> Vec<BlockViolation> {
        let mut out = Vec::new();
        if !self.shape_ok() {
            out.push(BlockViolation {
                condition: BlockCondition::Shape,
                witness: vec![],
            });
            return out;
        }
        let (ny, nz) = (self.y_size, self.z_size);
        let mut push = |condition, witness: Option<Vec<usize>>| {
            if let Some(witness) = witness {
                out.push(BlockViolation { condition, witness });
            }
        };
        let f_orbits = perm::orbits(ny, &self.sigma).expect("shape checked");
        push(BlockCondition::FTransitive, (f_orbits.len() > 1).then(|| f_orbits[1].clone()));
        let w_orbits = perm::orbits(nz, &self.d).expect("shape checked");
        push(BlockCondition::WTransitive, (w_orbits.len() > 1).then(|| w_orbits[1].clone()));

        let sigma_inv: Vec<Perm> = self.sigma.iter().map(Perm::inverse).collect();
        let d_inv: Vec<Perm> = self.d.iter().map(Perm::inverse).collect();
        let di = |i: usize, k: usize| &d_inv[i * ny + k];

        let table = self.table();
        let sol_inv = |x: usize, y: usize| table[x].iter().position(|&v| v == y).unwrap();
        push(BlockCondition::Cond1, first4(ny, nz, |i, j, k, l| {
            let (a, b) = (self.sigma[j].apply(k), self.d_at(i, self.sigma[j].apply(k)).apply(l));
            let via_gamma = sol_inv(a * nz + b, i * nz + j);
            let closed = sigma_inv[b].apply(i) * nz + di(a, i).apply(j);
            via_gamma != closed
        }));
        push(BlockCondition::Cond2, {
            let mut w = None;
            'outer: for i in 0..ny {
                for k in 0..ny {
                    for j in 0..nz {
                        for l in 0..nz {
                            let lhs = self.sigma[j].compose_unchecked(&self.sigma[di(i, k).apply(l)]);
                            let rhs = self.sigma[l].compose_unchecked(&self.sigma[di(k, i).apply(j)]);
                            if lhs != rhs {
                                w = Some(vec![i, k, j, l]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            w
        });
        push(BlockCondition::Cond3, {
            let mut w = None;
            'outer: for i in 0..ny {
                for k in i + 1..ny {
                    if self.d_at(i, k) != self.d_at(k, i) {
                        w = Some(vec![i, k]);
                        break 'outer;
                    }
                }
            }
            w
        });
        push(BlockCondition::Cond4, {
            let mut w = None;
            'outer: for i in 0..ny {
                for k in 0..ny {
                    for wp in 0..ny {
                        for j in 0..nz {
                            let lhs = self.d_at(i, wp).compose_unchecked(
                                self.d_at(sigma_inv[j].apply(k), sigma_inv[j].apply(wp)),
                            );
                            for l in 0..nz {
                                let rhs = self.d_at(k, wp).compose_unchecked(
                                    self.d_at(sigma_inv[l].apply(i), sigma_inv[l].apply(wp)),
                                );
                                if lhs != rhs {
                                    w = Some(vec![i, k, wp, j, l]);
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            w
        });
        push(BlockCondition::DistinctSigma, {
            let mut w = None;
            'outer: for j in 0..nz {
                for l in j + 1..nz {
                    if self.sigma[j] == self.sigma[l] {
                        w = Some(vec![j, l]);
                        break 'outer;
                    }
                }
            }
            w
        });
        push(BlockCondition::DistinctD, {
            let mut w = None;
            'outer: for i in 0..ny {
                for i2 in i + 1..ny {
                    if (0..ny).all(|k| self.d_at(i, k) == self.d_at(i2, k)) {
                        w = Some(vec![i, i2]);
                        break 'outer;
                    }
                }
            }
            w
        });
        out
    }
}

fn first4(ny: usize, nz: usize, bad: impl Fn(usize, usize, usize, usize) -> bool) -> Option<Vec<usize>> {
    for i in 0..ny {
        for j in 0..nz {
            for k in 0..ny {
                for l in 0..nz {
                    if bad(i, j, k, l) {
                        return Some(vec![i, j, k, l]);
                    }
                }
            }
        }
    }
    None
}

/// Accepts exactly when the block data give an indecomposable irretractable
/// solution; otherwise lists every violated condition.
pub fn block_form(data: &BlockFormData) -> BlockFormOutcome {
    let violations = data.violations();
    if !violations.is_empty() {
        return BlockFormOutcome::Rejected(violations);
    }
    let table = data.table();
    let report = validate(&table).expect("well-formed table");
    assert!(report.is_valid(), "block-form conditions imply the axioms");
    BlockFormOutcome::Accepted(Solution::from_table(table).expect("validated"))
}

/// `σ_j(k) = tk + j`, `d_{i,k}(l) = t(l − j_{k−i})`: the block data behind
/// [`square_table`].
pub fn square_block_data(n: usize, t: usize, j: &[usize]) -> BlockFormData {
    let sigma = (0..n)
        .map(|jj| Perm::new((0..n).map(|k| (t * k + jj) % n).collect()).unwrap())
        .collect();
    let mut d = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let shift = j[sub(k, i, n)] % n;
            d.push(Perm::new((0..n).map(|l| t * sub(l, shift, n) % n).collect()).unwrap());
        }
    }
    BlockFormData {
        y_size: n,
        z_size: n,
        sigma,
        d,
    }
}

pub const FIXTURE_NAMES: [&str; 6] = ["examp1", "examp2", "nine_r1", "nine_r2", "nine_r3", "exnonsimple"];

const EXAMP1: [&str; 4] = ["(2,3)", "(1,4)", "(1,2,4,3)", "(1,3,4,2)"];
const EXAMP2: [&str; 4] = ["(1,2)", "(3,1,4,2)", "(2,4,1,3)", "(3,4)"];
const NINE_R1: [&str; 9] = [
    "(1,6,7,9,2,5,4,8,3)",
    "(1,2,5,9,8,3,4,6,7)",
    "(1,6,5,9,2,3,4,8,7)",
    "(1,5,8,9,3,6,4,7,2)",
    "(1,3,6,9,7,2,4,5,8)",
    "(1,5,6,9,3,2,4,7,8)",
    "(1,4,9)(2,6,8)",
    "(1,4,9)(3,5,7)",
    "(2,6,8)(3,5,7)",
];
const NINE_R2: [&str; 9] = [
    "(1,6,3)",
    "(1,2,7,6,8,4,3,9,5)",
    "(1,5,9,6,7,2,3,4,8)",
    "(1,7,2,6,4,8,3,5,9)",
    "(4,5,7)",
    "(1,9,5,6,2,7,3,8,4)",
    "(1,9,7,6,2,4,3,8,5)",
    "(1,5,2,6,7,8,3,4,9)",
    "(2,8,9)",
];
const NINE_R3: [&str; 9] = [
    "(1,6,3)(2,9,8)(4,7,5)",
    "(1,2,5,3,9,4,6,8,7)",
    "(1,4,2,3,7,9,6,5,8)",
    "(1,7,9,3,5,8,6,4,2)",
    "(1,3,6)(2,9,8)(4,5,7)",
    "(1,8,7,3,2,5,6,9,4)",
    "(1,8,5,3,2,4,6,9,7)",
    "(1,4,9,3,7,8,6,5,2)",
    "(1,3,6)(2,8,9)(4,7,5)",
];

fn from_cycle_strings(cycles: &[&str]) -> Solution {
    let n = cycles.len();
    let sigma = cycles
        .iter()
        .map(|c| Perm::parse_cycles(n, c).expect("fixture cycles parse"))
        .collect();
    let labels = (1..=n).map(|x| x.to_string()).collect();
    Solution::from_perms(sigma)
        .expect("fixture is a solution")
        .with_labels(labels)
        .expect("one label per point")
}

/// `σ_{(i,j)}(k,l) = (k+j, l−3+2δ_{k+j−i,0})` on `(Z/(6))²`.
fn exnonsimple() -> Solution {
    let n = 6;
    let mut table = vec![vec![0; n * n]; n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = (k + j) % n;
                let delta = if a == i { 2 } else { 0 };
                for l in 0..n {
                    table[i * n + j][k * n + l] = a * n + (l + n - 3 + delta) % n;
                }
            }
        }
    }
    let labels = (0..n * n).map(|x| format!("({},{})", x / n, x % n)).collect();
    Solution::from_table(table)
        .expect("fixture is a solution")
        .with_labels(labels)
        .expect("one label per point")
}

pub fn fixture(name: &str) -> Result<Solution, FamilyError> {
    Ok(match name {
        "examp1" => from_cycle_strings(&EXAMP1),
        "examp2" => from_cycle_strings(&EXAMP2),
        "nine_r1" => from_cycle_strings(&NINE_R1),
        "nine_r2" => from_cycle_strings(&NINE_R2),
        "nine_r3" => from_cycle_strings(&NINE_R3),
        "exnonsimple" => exnonsimple(),
        other => return Err(FamilyError::UnknownFixture(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for name in FIXTURE_NAMES {
            let s = fixture(name).unwrap();
            assert!(s.report().is_valid(), "{name}");
        }
        assert!(fixture("nope").is_err());
        let r2 = fixture("nine_r2").unwrap();
        assert_eq!(r2.sigma(0).to_string(), "(1,6,3)");
        assert_eq!(r2.sigma(8).to_string(), "(2,8,9)");
        assert_eq!(fixture("exnonsimple").unwrap().n(), 36);
    }

    #[test]
    fn exnonsimple_is_a_square_family_member() {
        let (s, claims) = square_solution(&SquareFamilyParams::new(6, 1, vec![1, 3, 3, 3, 3, 3])).unwrap();
        assert_eq!(s.table(), fixture("exnonsimple").unwrap().table());
        assert!(claims.indecomposable_irretractable);
        assert!(!claims.simple_guaranteed);
        assert_eq!(claims.applicable, vec![SquareCriterion::Generating]);
    }

    #[test]
    fn parameter_rejections() {
        let bad = |n, t, j: Vec<usize>| square_solution(&SquareFamilyParams::new(n, t, j)).unwrap_err();
        assert_eq!(bad(3, 1, vec![0, 1, 2]), FamilyError::Asymmetric { i: 1 });
        assert_eq!(bad(4, 2, vec![0, 1, 0, 1]), FamilyError::NotUnit { t: 2, n: 4 });
        assert_eq!(bad(3, 1, vec![1, 1, 1]), FamilyError::PeriodicJ { i: 1 });
        assert_eq!(bad(4, 1, vec![0, 2, 0, 2]), FamilyError::PeriodicJ { i: 2 });
        assert_eq!(bad(2, 1, vec![0]), FamilyError::BadLength { expected: 2, got: 1 });
        assert_eq!(
            p2_solution(5, 4, &[0, 1, 1, 1, 1]).unwrap_err(),
            FamilyError::EvenOrder { t: 4, order: 2 }
        );
        assert_eq!(p2_solution(4, 1, &[0, 1, 0, 1]).unwrap_err(), FamilyError::NotPrime(4));
        assert_eq!(p2_solution(3, 1, &[2, 2, 2]).unwrap_err(), FamilyError::ConstantJ);
    }

    #[test]
    fn square_family_matches_block_data() {
        let j = [0, 1, 2, 4, 4, 2, 1];
        assert_eq!(square_block_data(7, 2, &j).table(), square_table(7, 2, &j));
        assert_eq!(p7_example_data().table(), square_table(7, 2, &p7_example_j()));
        assert!(block_form(&p7_example_data()).solution().is_some());
    }

    #[test]
    fn block_form_diagnostics() {
        let mut data = square_block_data(3, 1, &[0, 1, 1]);
        assert!(block_form(&data).solution().is_some());
        data.d[1] = Perm::identity(3);
        assert!(block_form(&data).violated().contains(&BlockCondition::Cond3));
        let constant = BlockFormData {
            sigma: vec![Perm::shift(3); 3],
            ..square_block_data(3, 1, &[0, 1, 1])
        };
        assert!(block_form(&constant).violated().contains(&BlockCondition::DistinctSigma));
    }

    #[test]
    fn rectangular_tables_break_the_braid_relation() {
        for (m, n) in [(2, 2), (2, 3), (3, 2)] {
            let table = rectangular_table(m, n);
            assert_eq!(table.len(), m * m * n);
            let long = Perm::new(table[m + 1].clone()).unwrap();
            assert_eq!(long.cycle_type(), vec![n * m * m]);
            let err = rectangular_solution(&RectangularFamilyParams { m, n }).unwrap_err();
            assert!(matches!(err, FamilyError::NotASolution(Witness::Triple(..))));
        }
        assert_eq!(
            rectangular_solution(&RectangularFamilyParams { m: 1, n: 3 }).unwrap_err(),
            FamilyError::Bounds(1)
        );
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(1, 5), 1);
        assert!(is_unit(5, 6) && !is_unit(4, 6));
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }
}
