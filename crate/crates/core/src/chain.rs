//! The Res-Ind chain `P = P_down P_up` on `Y_n(T^)`: exact matrices,
//! the explicit entry formula, verification suites and a single-step sampler.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::characters::{eigenvalue, wreath_normalized_character, ClassType};
use crate::diagram::{plancherel_probability, MultiDiagram, YoungDiagram};
use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;
use crate::scalar::{fmt_rational, ExactComplex};

/// Default largest `n` for which [`ChainMatrices::build`] enumerates states.
pub const DEFAULT_STATE_CAP: usize = 8;

/// Sparse exact matrix stored as one ordered map per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub cols: usize,
    rows: Vec<BTreeMap<usize, BigRational>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: vec![BTreeMap::new(); rows],
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.rows[i]
            .get(&j)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, BigRational> {
        &self.rows[i]
    }

    pub fn row_sum(&self, i: usize) -> BigRational {
        self.rows[i].values().cloned().sum()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.num_rows(), other.cols);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in other.row(*k) {
                    *acc.entry(*j).or_insert_with(BigRational::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[i] = acc;
        }
        out
    }

    /// `M v` for a complex vector.
    pub fn apply(&self, v: &[ExactComplex]) -> Vec<ExactComplex> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().fold(
                    ExactComplex::new(BigRational::zero(), BigRational::zero()),
                    |acc, (j, a)| acc + v[*j].clone() * a.clone(),
                )
            })
            .collect()
    }
}

/// Exact transition matrices of the chain for one `(n, T)`.
#[derive(Debug, Clone)]
pub struct ChainMatrices {
    pub n: usize,
    pub table: FiniteGroupTable,
    /// `Y_n(T^)` in [`MultiDiagram::enumerate`] order.
    pub states: Vec<MultiDiagram>,
    /// `Y_{n-1}(T^)`, the intermediate states.
    pub lower_states: Vec<MultiDiagram>,
    pub p_down: SparseMatrix,
    pub p_up: SparseMatrix,
    pub p: SparseMatrix,
    pub stationary: Vec<BigRational>,
}

impl ChainMatrices {
    pub fn build(n: usize, table: &FiniteGroupTable) -> Result<Self> {
        Self::build_with_cap(n, table, DEFAULT_STATE_CAP)
    }

    pub fn build_with_cap(n: usize, table: &FiniteGroupTable, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        if n == 0 {
            return Err(Error::InvalidArgument("the chain needs n >= 1".into()));
        }
        table.require_exact()?;
        let k = table.num_irreps();
        let states = MultiDiagram::enumerate(n, k);
        let lower_states = MultiDiagram::enumerate(n - 1, k);
        let index: HashMap<&MultiDiagram, usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let lower_index: HashMap<&MultiDiagram, usize> = lower_states
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let dims: Vec<BigInt> = states.iter().map(|s| s.dim(table)).collect();
        let lower_dims: Vec<BigInt> = lower_states.iter().map(|s| s.dim(table)).collect();
        let nt = BigInt::from(n as u64 * table.order());

        let mut p_down = SparseMatrix::zeros(states.len(), lower_states.len());
        for (i, lambda) in states.iter().enumerate() {
            for (nu, zeta) in lambda.cells() {
                let j = lower_index[&nu];
                let v = BigRational::new(
                    BigInt::from(table.dim(zeta)) * &lower_dims[j],
                    dims[i].clone(),
                );
                p_down.set(i, j, v);
            }
        }
        let mut p_up = SparseMatrix::zeros(lower_states.len(), states.len());
        for (j, nu) in lower_states.iter().enumerate() {
            for (mu, zeta) in nu.covers() {
                let i = index[&mu];
                let v = BigRational::new(
                    BigInt::from(table.dim(zeta)) * &dims[i],
                    &nt * &lower_dims[j],
                );
                p_up.set(j, i, v);
            }
        }
        let p = p_down.mul(&p_up);
        let stationary = states
            .iter()
            .map(|s| plancherel_probability(s, table))
            .collect();
        Ok(ChainMatrices {
            n,
            table: table.clone(),
            states,
            lower_states,
            p_down,
            p_up,
            p,
            stationary,
        })
    }

    pub fn state_index(&self, lambda: &MultiDiagram) -> Option<usize> {
        self.states.iter().position(|s| s == lambda)
    }

    /// Rows of `P_down`, `P_up` and `P` that do not sum to one.
    pub fn stochasticity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, m, labels) in [
            ("P_down", &self.p_down, &self.states),
            ("P_up", &self.p_up, &self.lower_states),
            ("P", &self.p, &self.states),
        ] {
            for i in 0..m.num_rows() {
                let s = m.row_sum(i);
                if !s.is_one() {
                    out.push(format!(
                        "{name} row {} sums to {}",
                        labels[i],
                        fmt_rational(&s)
                    ));
                }
            }
        }
        out
    }
}

fn ratio(a: BigInt, b: BigInt) -> BigRational {
    BigRational::new(a, b)
}

/// `mu` is `lambda` with exactly one box removed.
fn is_removal(lambda: &YoungDiagram, mu: &YoungDiagram) -> bool {
    lambda.size() == mu.size() + 1 && contains(lambda, mu)
}

fn contains(big: &YoungDiagram, small: &YoungDiagram) -> bool {
    small.length() <= big.length() && small.parts().iter().zip(big.parts()).all(|(s, b)| s <= b)
}

/// Largest diagram contained in both.
fn intersection(a: &YoungDiagram, b: &YoungDiagram) -> YoungDiagram {
    YoungDiagram::new(
        a.parts()
            .iter()
            .zip(b.parts())
            .map(|(x, y)| *x.min(y))
            .collect(),
    )
}

/// `P_{lambda mu}` from the four-case piecewise formula. The diagonal case
/// counts the removable corners of each entry.
pub fn explicit_entry(
    lambda: &MultiDiagram,
    mu: &MultiDiagram,
    table: &FiniteGroupTable,
) -> Result<BigRational> {
    let n = lambda.size();
    if mu.size() != n || lambda.num_entries() != mu.num_entries() {
        return Err(Error::SizeMismatch(format!(
            "|lambda| = {n}, |mu| = {}",
            mu.size()
        )));
    }
    let order = BigInt::from(table.order());
    let nb = BigInt::from(n);
    let dim2 = |z: usize| BigInt::from(table.dim(z) * table.dim(z));
    if lambda == mu {
        let total: BigInt = (0..lambda.num_entries())
            .map(|z| dim2(z) * BigInt::from(lambda.entry(z).removable_cells().len()))
            .sum();
        return Ok(ratio(total, nb * order));
    }
    let differing: Vec<usize> = (0..lambda.num_entries())
        .filter(|&z| lambda.entry(z) != mu.entry(z))
        .collect();
    match differing.as_slice() {
        [z] => {
            let (l, m) = (lambda.entry(*z), mu.entry(*z));
            if l.size() != m.size() || intersection(l, m).size() + 1 != l.size() {
                return Ok(BigRational::zero());
            }
            Ok(ratio(m.hook_dim() * dim2(*z), l.hook_dim() * nb * order))
        }
        [a, b] => {
            let (zeta, eta) = if is_removal(lambda.entry(*a), mu.entry(*a)) {
                (*a, *b)
            } else {
                (*b, *a)
            };
            let (lz, mz, le, me) = (
                lambda.entry(zeta),
                mu.entry(zeta),
                lambda.entry(eta),
                mu.entry(eta),
            );
            if !is_removal(lz, mz) || !is_removal(me, le) {
                return Ok(BigRational::zero());
            }
            let num = BigInt::from(lz.size()) * mz.hook_dim() * me.hook_dim() * dim2(eta);
            let den = nb * BigInt::from(me.size()) * lz.hook_dim() * le.hook_dim() * order;
            Ok(ratio(num, den))
        }
        _ => Ok(BigRational::zero()),
    }
}

/// Outcome of an exact verification: how many identities were checked and which failed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerifyReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// Checks `M(lambda) P_{lambda mu} = M(mu) P_{mu lambda}` for every pair.
pub fn verify_detailed_balance(cm: &ChainMatrices) -> VerifyReport {
    verify_detailed_balance_of(&cm.p, &cm.stationary, &cm.states)
}

/// Detailed balance of an arbitrary matrix against `weights`.
pub fn verify_detailed_balance_of(
    p: &SparseMatrix,
    weights: &[BigRational],
    states: &[MultiDiagram],
) -> VerifyReport {
    let mut report = VerifyReport::new("detailed balance");
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let lhs = &weights[i] * p.get(i, j);
            let rhs = &weights[j] * p.get(j, i);
            report.check(lhs == rhs, || {
                format!(
                    "pair ({}, {}): {} != {}",
                    states[i],
                    states[j],
                    fmt_rational(&lhs),
                    fmt_rational(&rhs)
                )
            });
        }
    }
    report
}

/// Checks `P v_rho = (1 - (k - m_1(rho_e))/n) v_rho` for every class type with `k <= n`.
pub fn verify_spectrum(cm: &ChainMatrices) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("eigen-identity");
    for k in 0..=cm.n {
        for rho in ClassType::enumerate(k, cm.table.num_classes()) {
            let v = cm
                .states
                .iter()
                .map(|l| wreath_normalized_character(l, &rho, &cm.table))
                .collect::<Result<Vec<_>>>()?;
            let pv = cm.p.apply(&v);
            let ev = eigenvalue(&rho, cm.n);
            let ok = pv.iter().zip(&v).all(|(a, b)| *a == b.clone() * ev.clone());
            report.check(ok, || {
                format!("class type {} (eigenvalue {})", rho, fmt_rational(&ev))
            });
        }
    }
    Ok(report)
}

/// Checks that the piecewise formula reproduces `P_down P_up` entrywise.
pub fn verify_explicit_entries(cm: &ChainMatrices) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("explicit entries");
    for (i, l) in cm.states.iter().enumerate() {
        for (j, m) in cm.states.iter().enumerate() {
            let e = explicit_entry(l, m, &cm.table)?;
            let p = cm.p.get(i, j);
            report.check(e == p, || {
                format!(
                    "({l}, {m}): formula {} vs product {}",
                    fmt_rational(&e),
                    fmt_rational(&p)
                )
            });
        }
    }
    Ok(report)
}

/// Exact removal law `P_down(lambda, .)` via hook ratios: entry `zeta` with
/// probability `|lambda^zeta|/n`, then a corner with `dim(nu - c)/dim(nu)`.
pub fn removal_distribution(lambda: &MultiDiagram) -> Vec<(MultiDiagram, BigRational)> {
    let n = BigInt::from(lambda.size());
    let mut out = Vec::new();
    for (z, e) in lambda.entries().iter().enumerate() {
        let pz = BigRational::new(BigInt::from(e.size()), n.clone());
        for (row, w) in e.removal_weights::<BigRational>() {
            let mut nu = lambda.clone();
            nu.entry_mut(z).remove_box(row);
            out.push((nu, pz.clone() * w));
        }
    }
    out
}

/// Exact insertion law `P_up(nu, .)`: entry `eta` with `(dim eta)^2/|T|`,
/// then an addable cell by the transition measure of `nu^eta`.
pub fn insertion_distribution(
    nu: &MultiDiagram,
    table: &FiniteGroupTable,
) -> Vec<(MultiDiagram, BigRational)> {
    let weights = table.plancherel_weights();
    let mut out = Vec::new();
    for (z, e) in nu.entries().iter().enumerate() {
        for (row, w) in e.addition_weights::<BigRational>() {
            let mut mu = nu.clone();
            mu.entry_mut(z).add_box(row);
            out.push((mu, weights[z].clone() * w));
        }
    }
    out
}

/// The row `P(lambda, .)` assembled from the sampler's factorization.
pub fn step_distribution(
    lambda: &MultiDiagram,
    table: &FiniteGroupTable,
) -> BTreeMap<MultiDiagram, BigRational> {
    let mut out: BTreeMap<MultiDiagram, BigRational> = BTreeMap::new();
    for (nu, p) in removal_distribution(lambda) {
        for (mu, q) in insertion_distribution(&nu, table) {
            *out.entry(mu).or_insert_with(BigRational::zero) += p.clone() * q;
        }
    }
    out
}

fn pick<R: Rng + ?Sized>(weights: impl Iterator<Item = f64> + Clone, rng: &mut R) -> usize {
    let total: f64 = weights.clone().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            last = i;
        }
        acc += w;
        if u < acc {
            return i;
        }
    }
    last
}

/// One Res-Ind transition in place: remove a box by `P_down`, add one by `P_up`.
/// Works for any `n` without enumerating states.
pub fn step_in_place<R: Rng + ?Sized>(lambda: &mut MultiDiagram, plancherel: &[f64], rng: &mut R) {
    if lambda.size() == 0 {
        return;
    }
    let sizes: Vec<f64> = lambda.entries().iter().map(|e| e.size() as f64).collect();
    let z = pick(sizes.iter().copied(), rng);
    let weights = lambda.entry(z).removal_weights::<f64>();
    let c = pick(weights.iter().map(|(_, w)| *w), rng);
    lambda.entry_mut(z).remove_box(weights[c].0);

    let z = pick(plancherel.iter().copied(), rng);
    let weights = lambda.entry(z).addition_weights::<f64>();
    let c = pick(weights.iter().map(|(_, w)| *w), rng);
    lambda.entry_mut(z).add_box(weights[c].0);
}

/// One Res-Ind transition.
pub fn step<R: Rng + ?Sized>(
    lambda: &MultiDiagram,
    table: &FiniteGroupTable,
    rng: &mut R,
) -> MultiDiagram {
    let mut out = lambda.clone();
    step_in_place(&mut out, &table.plancherel_weights_as::<f64>(), rng);
    out
}
