//! Young diagrams, multi-diagrams, dimensions, branching and profiles.
//!
//! Contents are `column - row` (0-indexed), so the profile is drawn in the
//! Russian convention: valleys sit at the contents of addable cells and peaks
//! at the contents of removable cells.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;
use crate::measure::AtomicMeasure;
use crate::scalar::{factorial, Scalar};

/// An integer partition stored as weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    /// Sorts the parts into weakly decreasing order and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        YoungDiagram { parts }
    }

    pub fn empty() -> Self {
        YoungDiagram { parts: Vec::new() }
    }

    /// `rows x cols` rectangle.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        Self::new(vec![cols; rows])
    }

    /// The `k x k` square with `k = floor(sqrt n)`, the remaining `n - k^2 <= 2k`
    /// boxes placed in at most two extra rows of length at most `k`.
    pub fn near_square(n: usize) -> Self {
        let mut k = (n as f64).sqrt() as usize;
        while k * k > n {
            k -= 1;
        }
        while (k + 1) * (k + 1) <= n {
            k += 1;
        }
        let mut parts = vec![k; k];
        let mut rest = n - k * k;
        while rest > 0 {
            let row = rest.min(k.max(1));
            parts.push(row);
            rest -= row;
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows `l(nu)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `m_j(nu)`: number of parts equal to `j`.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.parts.iter().filter(|&&p| p == j).count()
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.parts.first().copied().unwrap_or(0);
        YoungDiagram {
            parts: (0..cols)
                .map(|c| self.parts.iter().filter(|&&p| p > c).count())
                .collect(),
        }
    }

    /// Rows in which a box can be appended, with the new cell's content.
    pub fn addable_cells(&self) -> Vec<(usize, i64)> {
        let mut cells = Vec::new();
        for row in 0..=self.parts.len() {
            let len = self.parts.get(row).copied().unwrap_or(0);
            let above = if row == 0 {
                usize::MAX
            } else {
                self.parts[row - 1]
            };
            if len < above {
                cells.push((row, len as i64 - row as i64));
            }
        }
        cells
    }

    /// Rows whose last box can be removed, with that cell's content.
    pub fn removable_cells(&self) -> Vec<(usize, i64)> {
        let mut cells = Vec::new();
        for (row, &len) in self.parts.iter().enumerate() {
            let below = self.parts.get(row + 1).copied().unwrap_or(0);
            if len > below {
                cells.push((row, len as i64 - 1 - row as i64));
            }
        }
        cells
    }

    /// Appends a box to `row`; the caller guarantees the row is addable.
    pub fn with_box_added(&self, row: usize) -> Self {
        let mut parts = self.parts.clone();
        if row == parts.len() {
            parts.push(1);
        } else {
            parts[row] += 1;
        }
        debug_assert!(row == 0 || parts[row - 1] >= parts[row]);
        YoungDiagram { parts }
    }

    /// Removes the last box of `row`; the caller guarantees the row is removable.
    pub fn with_box_removed(&self, row: usize) -> Self {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.pop();
        }
        YoungDiagram { parts }
    }

    pub fn add_box(&mut self, row: usize) {
        if row == self.parts.len() {
            self.parts.push(1);
        } else {
            self.parts[row] += 1;
        }
    }

    pub fn remove_box(&mut self, row: usize) {
        self.parts[row] -= 1;
        if self.parts[row] == 0 {
            self.parts.pop();
        }
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn hook_dim(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (i, &len) in self.parts.iter().enumerate() {
            for j in 0..len {
                let hook = (len - j - 1) + (conj.parts[j] - i - 1) + 1;
                hooks *= BigInt::from(hook);
            }
        }
        factorial(self.size() as u64) / hooks
    }

    /// Valley and peak contents `x_1 < y_1 < ... < y_{r-1} < x_r`.
    pub fn interlacing(&self) -> InterlacingCoords<i64> {
        let mut x: Vec<i64> = self.addable_cells().into_iter().map(|(_, c)| c).collect();
        let mut y: Vec<i64> = self.removable_cells().into_iter().map(|(_, c)| c).collect();
        x.sort_unstable();
        y.sort_unstable();
        InterlacingCoords { x, y }
    }

    /// Kerov transition measure, exact: masses at addable contents.
    pub fn transition_measure<S: Scalar>(&self) -> AtomicMeasure<S> {
        self.interlacing()
            .map(|&v| S::from_i64(v))
            .transition_measure()
    }

    /// `dim(nu - c) / dim(nu)` for each removable cell, keyed by row.
    pub fn removal_weights<S: Scalar>(&self) -> Vec<(usize, S)> {
        let n = self.size();
        if n == 0 {
            return Vec::new();
        }
        let coords = self.interlacing().map(|&v| S::from_i64(v));
        let cells = self.removable_cells();
        let nf = S::from_i64(n as i64);
        cells
            .into_iter()
            .map(|(row, content)| {
                let yk = S::from_i64(content);
                let mut num = S::one();
                for x in &coords.x {
                    num = num * (yk.clone() - x.clone());
                }
                let mut den = S::one();
                for y in &coords.y {
                    if *y != yk {
                        den = den * (yk.clone() - y.clone());
                    }
                }
                (row, -(num / den) / nf.clone())
            })
            .collect()
    }

    /// `dim(nu + c) / ((|nu|+1) dim(nu))` for each addable cell, keyed by row.
    pub fn addition_weights<S: Scalar>(&self) -> Vec<(usize, S)> {
        let coords = self.interlacing().map(|&v| S::from_i64(v));
        self.addable_cells()
            .into_iter()
            .map(|(row, content)| (row, coords.mass_at(&S::from_i64(content))))
            .collect()
    }

    /// Profile `nu(x) = sum |x - x_i| - sum |x - y_j|`.
    pub fn profile(&self, x: f64) -> f64 {
        self.interlacing().map(|&v| v as f64).profile(x)
    }

    /// Rescaled profile `(1/sqrt n) nu(sqrt n x)` sampled on `grid`.
    pub fn rescaled_profile(&self, n: usize, grid: &[f64]) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidArgument("rescaling needs n >= 1".into()));
        }
        let s = (n as f64).sqrt();
        let coords = self.interlacing().map(|&v| v as f64 / s);
        Ok(grid.iter().map(|&x| coords.profile(x)).collect())
    }

    /// All partitions of `n` in reverse lexicographic order: `(n), (n-1,1), ..., (1^n)`.
    pub fn partitions(n: usize) -> Vec<YoungDiagram> {
        fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
            if remaining == 0 {
                out.push(YoungDiagram {
                    parts: prefix.clone(),
                });
                return;
            }
            for p in (1..=remaining.min(max)).rev() {
                prefix.push(p);
                rec(remaining - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses `"3,2,1"`; `""`, `"-"`, `"0"` and `"()"` give the empty diagram.
impl FromStr for YoungDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if s.is_empty() || s == "-" || s == "0" || s == "∅" {
            return Ok(YoungDiagram::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let p: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad part `{tok}` in diagram `{s}`")))?;
            parts.push(p);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "parts of `{s}` are not weakly decreasing"
            )));
        }
        Ok(YoungDiagram::new(parts))
    }
}

/// Interlacing valleys `x` and peaks `y` of a (possibly rescaled) rectangular diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingCoords<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Clone> InterlacingCoords<S> {
    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> InterlacingCoords<T> {
        InterlacingCoords {
            x: self.x.iter().map(&f).collect(),
            y: self.y.iter().map(&f).collect(),
        }
    }
}

impl<S: Scalar> InterlacingCoords<S> {
    /// Checks `x_1 < y_1 < ... < y_{r-1} < x_r`.
    pub fn new(x: Vec<S>, y: Vec<S>) -> Result<Self> {
        if x.len() != y.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "need one more valley than peaks, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        for i in 0..y.len() {
            if !(x[i] < y[i] && y[i] < x[i + 1]) {
                return Err(Error::InvalidArgument(
                    "coordinates do not interlace".into(),
                ));
            }
        }
        Ok(InterlacingCoords { x, y })
    }

    /// `prod_j (x - y_j) / prod_{i != k} (x - x_i)` at valley `x = x_k`.
    fn mass_at(&self, xk: &S) -> S {
        let mut num = S::one();
        for y in &self.y {
            num = num * (xk.clone() - y.clone());
        }
        let mut den = S::one();
        for x in &self.x {
            if x != xk {
                den = den * (xk.clone() - x.clone());
            }
        }
        num / den
    }

    /// Partial-fraction masses of `prod (z - y_j) / prod (z - x_i)`.
    pub fn transition_measure(&self) -> AtomicMeasure<S> {
        AtomicMeasure::new(self.x.iter().map(|xk| (xk.clone(), self.mass_at(xk))))
    }

    pub fn profile(&self, t: f64) -> f64 {
        let a: f64 = self.x.iter().map(|v| (t - v.to_float()).abs()).sum();
        let b: f64 = self.y.iter().map(|v| (t - v.to_float()).abs()).sum();
        a - b
    }
}

/// A tuple of Young diagrams indexed by the irreps of `T` (table order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDiagram {
    entries: Vec<YoungDiagram>,
}

impl MultiDiagram {
    pub fn new(entries: Vec<YoungDiagram>) -> Self {
        MultiDiagram { entries }
    }

    pub fn empty(num_irreps: usize) -> Self {
        MultiDiagram {
            entries: vec![YoungDiagram::empty(); num_irreps],
        }
    }

    pub fn entries(&self) -> &[YoungDiagram] {
        &self.entries
    }

    pub fn entry(&self, zeta: usize) -> &YoungDiagram {
        &self.entries[zeta]
    }

    pub fn entry_mut(&mut self, zeta: usize) -> &mut YoungDiagram {
        &mut self.entries[zeta]
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Total number of boxes.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.size()).sum()
    }

    /// `dim lambda = n!/prod |l^z|! * prod (dim z)^{|l^z|} dim l^z`.
    pub fn dim(&self, table: &FiniteGroupTable) -> BigInt {
        let mut out = factorial(self.size() as u64);
        for e in &self.entries {
            out /= factorial(e.size() as u64);
        }
        for (z, e) in self.entries.iter().enumerate() {
            out *= BigInt::from(table.dim(z)).pow(e.size() as u32) * e.hook_dim();
        }
        out
    }

    /// Every `mu` with `self -> mu` by adding one box, with the entry index.
    pub fn covers(&self) -> Vec<(MultiDiagram, usize)> {
        let mut out = Vec::new();
        for (z, e) in self.entries.iter().enumerate() {
            for (row, _) in e.addable_cells() {
                let mut m = self.clone();
                m.entries[z] = e.with_box_added(row);
                out.push((m, z));
            }
        }
        out
    }

    /// Every `nu` with `nu -> self`, with the entry index.
    pub fn cells(&self) -> Vec<(MultiDiagram, usize)> {
        let mut out = Vec::new();
        for (z, e) in self.entries.iter().enumerate() {
            for (row, _) in e.removable_cells() {
                let mut m = self.clone();
                m.entries[z] = e.with_box_removed(row);
                out.push((m, z));
            }
        }
        out
    }

    /// Parses `"zeta1:3,2;zeta2:1"` using irrep labels (or indices) of `table`.
    /// Unlisted entries are empty. For a one-irrep table a bare `"3,2"` is accepted.
    pub fn parse(s: &str, table: &FiniteGroupTable) -> Result<Self> {
        let mut out = MultiDiagram::empty(table.num_irreps());
        let s = s.trim();
        if s.is_empty() {
            return Ok(out);
        }
        if !s.contains(':') {
            if table.num_irreps() == 1 {
                out.entries[0] = s.parse()?;
                return Ok(out);
            }
            return Err(Error::Parse(format!(
                "multi-diagram `{s}` needs `label:parts` entries for a table with {} irreps",
                table.num_irreps()
            )));
        }
        for item in s.split(';').map(str::trim).filter(|i| !i.is_empty()) {
            let (label, parts) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("entry `{item}` lacks `label:`")))?;
            let label = label.trim();
            let z = table
                .irrep_index(label)
                .or_else(|| {
                    label
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i < table.num_irreps())
                })
                .ok_or_else(|| Error::Parse(format!("unknown irrep `{label}`")))?;
            out.entries[z] = parts.parse()?;
        }
        Ok(out)
    }

    pub fn display_with(&self, table: &FiniteGroupTable) -> String {
        self.entries
            .iter()
            .enumerate()
            .map(|(z, e)| format!("{}:{}", table.irreps()[z].label, e))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// `Y_n(T^)` in the fixed state order: entry sizes in reverse lexicographic
    /// order (the first entry largest first), then the entries' partitions in
    /// reverse lexicographic order, the first entry varying slowest.
    pub fn enumerate(n: usize, num_irreps: usize) -> Vec<MultiDiagram> {
        fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 1 {
                return vec![vec![n]];
            }
            let mut out = Vec::new();
            for first in (0..=n).rev() {
                for mut rest in compositions(n - first, k - 1) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let mut out = Vec::new();
        for sizes in compositions(n, num_irreps) {
            let mut acc: Vec<Vec<YoungDiagram>> = vec![Vec::new()];
            for &s in &sizes {
                let parts = YoungDiagram::partitions(s);
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for prefix in &acc {
                    for p in &parts {
                        let mut v = prefix.clone();
                        v.push(p.clone());
                        next.push(v);
                    }
                }
                acc = next;
            }
            out.extend(acc.into_iter().map(MultiDiagram::new));
        }
        out
    }
}

impl fmt::Display for MultiDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("({e})")).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Plancherel probability `(dim lambda)^2 / (n! |T|^n)`.
pub fn plancherel_probability(lambda: &MultiDiagram, table: &FiniteGroupTable) -> BigRational {
    let n = lambda.size();
    let d = lambda.dim(table);
    let den = factorial(n as u64) * BigInt::from(table.order()).pow(n as u32);
    BigRational::new(&d * &d, den)
}

/// `int (nu(x) - |x|) dx` evaluated exactly from the interlacing coordinates.
pub fn profile_area(coords: &InterlacingCoords<f64>) -> f64 {
    // sum x_i^2 - sum y_j^2 equals twice the box count for integer diagrams
    let sx: f64 = coords.x.iter().map(|v| v * v).sum();
    let sy: f64 = coords.y.iter().map(|v| v * v).sum();
    sx - sy
}
