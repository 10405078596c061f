//! Exact characters: Murnaghan–Nakayama for `S_n`, the normalized
//! characters `Sigma_tau`, and normalized irreducible characters of `S_n(T)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::diagram::{MultiDiagram, YoungDiagram};
use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;
use crate::scalar::{factorial, falling_factorial, ExactComplex};

/// Largest number of rows of a class type accepted by
/// [`wreath_normalized_character`]; the row assignment sum has `|T^|^rows` terms.
pub const MAX_ROWS: usize = 8;

/// `chi^nu_rho` by border-strip removal on beta-numbers.
pub fn mn_character(nu: &YoungDiagram, rho: &YoungDiagram) -> Result<BigInt> {
    if nu.size() != rho.size() {
        return Err(Error::SizeMismatch(format!(
            "|{nu}| = {} but |{rho}| = {}",
            nu.size(),
            rho.size()
        )));
    }
    let mut memo = HashMap::new();
    Ok(mn_rec(nu.parts().to_vec(), rho.parts(), &mut memo))
}

fn mn_rec(
    parts: Vec<usize>,
    rho: &[usize],
    memo: &mut HashMap<(Vec<usize>, usize), BigInt>,
) -> BigInt {
    let Some((&r, rest)) = rho.split_first() else {
        return BigInt::one();
    };
    let key = (parts, rho.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let parts = &key.0;
    let l = parts.len();
    let beta: Vec<usize> = parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (l - 1 - i))
        .collect();
    let mut total = BigInt::zero();
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let new_parts: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(j, &c)| c - (l - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        let v = mn_rec(new_parts, rest, memo);
        if crossed % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// `Sigma_tau(nu) = |nu|^{down |tau|} chi^nu_{(tau, 1^{|nu|-|tau|})} / dim nu`, zero when `|nu| < |tau|`.
pub fn sigma(tau: &YoungDiagram, nu: &YoungDiagram) -> BigRational {
    let (k, n) = (tau.size(), nu.size());
    if n < k {
        return BigRational::zero();
    }
    let mut padded = tau.parts().to_vec();
    padded.extend(std::iter::repeat_n(1, n - k));
    let chi = mn_character(nu, &YoungDiagram::new(padded)).expect("sizes agree by construction");
    BigRational::new(falling_factorial(n as u64, k as u64) * chi, nu.hook_dim())
}

/// `Sigma_k(nu) = Sigma_{(k)}(nu)`.
pub fn sigma_k(k: usize, nu: &YoungDiagram) -> BigRational {
    sigma(&YoungDiagram::new(vec![k]), nu)
}

/// Conjugacy-class type of `S_k(T)`: one Young diagram per class of `T`.
/// The embedded type in `S_n(T)` pads the identity entry with `1^{n-k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassType {
    entries: Vec<YoungDiagram>,
}

impl ClassType {
    pub fn new(entries: Vec<YoungDiagram>) -> Self {
        ClassType { entries }
    }

    /// The `(theta, k)`-cycle type `(k)_theta`.
    pub fn cycle(k: usize, theta: usize, num_classes: usize) -> Self {
        let mut entries = vec![YoungDiagram::empty(); num_classes];
        entries[theta] = YoungDiagram::new(vec![k]);
        ClassType { entries }
    }

    pub fn entries(&self) -> &[YoungDiagram] {
        &self.entries
    }

    /// `k = sum_theta |rho_theta|`.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.size()).sum()
    }

    /// `(class, length)` for every row, rows of equal length kept distinct.
    pub fn rows(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(theta, e)| e.parts().iter().map(move |&len| (theta, len)))
            .collect()
    }

    /// `l(rho)`.
    pub fn num_rows(&self) -> usize {
        self.entries.iter().map(|e| e.length()).sum()
    }

    /// `m_1(rho_{e_T})`; the identity class is index 0.
    pub fn fixed_points(&self) -> usize {
        self.entries.first().map_or(0, |e| e.multiplicity(1))
    }

    /// `iota_{n,k} rho`.
    pub fn embed(&self, n: usize) -> Result<ClassType> {
        let k = self.size();
        if n < k {
            return Err(Error::InvalidArgument(format!(
                "cannot embed a type of size {k} into n = {n}"
            )));
        }
        let mut out = self.clone();
        let mut parts = out.entries[0].parts().to_vec();
        parts.extend(std::iter::repeat_n(1, n - k));
        out.entries[0] = YoungDiagram::new(parts);
        Ok(out)
    }

    /// `Y_k([T])` in the same order as [`MultiDiagram::enumerate`].
    pub fn enumerate(k: usize, num_classes: usize) -> Vec<ClassType> {
        MultiDiagram::enumerate(k, num_classes)
            .into_iter()
            .map(|m| ClassType {
                entries: m.entries().to_vec(),
            })
            .collect()
    }

    /// Number of elements of `S_n(T)` of this type (`n = self.size()`),
    /// `n! |T|^n / prod_theta prod_j (j |T| / |C_theta|)^{m_j} m_j!`.
    pub fn class_size(&self, table: &FiniteGroupTable) -> BigRational {
        let n = self.size();
        let order = BigInt::from(table.order());
        let group = factorial(n as u64) * order.pow(n as u32);
        let mut centralizer = BigRational::one();
        for (theta, e) in self.entries.iter().enumerate() {
            let cs = BigInt::from(table.class_size(theta));
            let max = e.parts().first().copied().unwrap_or(0);
            for j in 1..=max {
                let m = e.multiplicity(j);
                let base = BigRational::new(BigInt::from(j) * &order, cs.clone());
                for _ in 0..m {
                    centralizer *= base.clone();
                }
                centralizer *= BigRational::from_integer(factorial(m as u64));
            }
        }
        BigRational::from_integer(group) / centralizer
    }

    pub fn display_with(&self, table: &FiniteGroupTable) -> String {
        self.entries
            .iter()
            .enumerate()
            .map(|(t, e)| format!("{}:{}", table.classes()[t].label, e))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses `"label:parts;label:parts"` with class labels (or indices).
    pub fn parse(s: &str, table: &FiniteGroupTable) -> Result<Self> {
        let mut entries = vec![YoungDiagram::empty(); table.num_classes()];
        for item in s.split(';').map(str::trim).filter(|i| !i.is_empty()) {
            let (label, parts) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("class entry `{item}` lacks `label:`")))?;
            let label = label.trim();
            let theta = table
                .class_index(label)
                .or_else(|| {
                    label
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i < table.num_classes())
                })
                .ok_or_else(|| Error::Parse(format!("unknown class `{label}`")))?;
            entries[theta] = parts.parse()?;
        }
        Ok(ClassType { entries })
    }
}

impl fmt::Display for ClassType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "({e})")?;
        }
        Ok(())
    }
}

fn exact_powi(z: &ExactComplex, k: usize) -> ExactComplex {
    let mut acc = ExactComplex::new(BigRational::one(), BigRational::zero());
    for _ in 0..k {
        acc *= z.clone();
    }
    acc
}

/// `chi^lambda_{iota_{n,k} rho} / dim lambda` with `n = |lambda|`, summing over
/// all maps from the rows of `rho` to the irreps of `T`.
pub fn wreath_normalized_character(
    lambda: &MultiDiagram,
    rho: &ClassType,
    table: &FiniteGroupTable,
) -> Result<ExactComplex> {
    let n = lambda.size();
    let k = rho.size();
    if k > n {
        return Err(Error::SizeMismatch(format!(
            "class type of size {k} exceeds n = {n}"
        )));
    }
    if lambda.num_entries() != table.num_irreps() || rho.entries().len() != table.num_classes() {
        return Err(Error::SizeMismatch(
            "diagram or class type does not match the table".into(),
        ));
    }
    let rows = rho.rows();
    if rows.len() > MAX_ROWS {
        return Err(Error::TooManyRows {
            rows: rows.len(),
            cap: MAX_ROWS,
        });
    }
    let irreps = table.num_irreps();
    let mut sigma_cache: HashMap<(usize, Vec<usize>), BigRational> = HashMap::new();
    let mut total = ExactComplex::new(BigRational::zero(), BigRational::zero());
    let mut assign = vec![0usize; rows.len()];
    'outer: loop {
        let mut term = ExactComplex::new(BigRational::one(), BigRational::zero());
        for zeta in 0..irreps {
            let lengths: Vec<usize> = rows
                .iter()
                .zip(&assign)
                .filter(|(_, &a)| a == zeta)
                .map(|((_, len), _)| *len)
                .collect();
            if lengths.is_empty() {
                continue;
            }
            let tau = YoungDiagram::new(lengths);
            if tau.size() > lambda.entry(zeta).size() {
                term = ExactComplex::zero();
                break;
            }
            let s = sigma_cache
                .entry((zeta, tau.parts().to_vec()))
                .or_insert_with(|| sigma(&tau, lambda.entry(zeta)))
                .clone();
            let d = BigRational::from_integer(BigInt::from(table.dim(zeta)).pow(tau.size() as u32));
            let mut factor = ExactComplex::new(s / d, BigRational::zero());
            for theta in 0..table.num_classes() {
                let count = rows
                    .iter()
                    .zip(&assign)
                    .filter(|((t, _), &a)| *t == theta && a == zeta)
                    .count();
                if count > 0 {
                    factor *= exact_powi(table.value(zeta, theta), count);
                }
            }
            term *= factor;
        }
        total += term;
        for slot in assign.iter_mut() {
            *slot += 1;
            if *slot < irreps {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    let norm = BigRational::from_integer(falling_factorial(n as u64, k as u64));
    Ok(ExactComplex::new(total.re / norm.clone(), total.im / norm))
}

/// Single-cycle case `(1/n^{down k}) sum_zeta chi^zeta_theta / (dim zeta)^k Sigma_k(lambda^zeta)`.
pub fn cycle_character(
    lambda: &MultiDiagram,
    k: usize,
    theta: usize,
    table: &FiniteGroupTable,
) -> Result<ExactComplex> {
    let n = lambda.size();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "cycle length {k} must lie in 1..={n}"
        )));
    }
    if theta >= table.num_classes() {
        return Err(Error::InvalidArgument(format!(
            "class index {theta} out of range"
        )));
    }
    let mut total = ExactComplex::new(BigRational::zero(), BigRational::zero());
    for zeta in 0..table.num_irreps() {
        let s = sigma_k(k, lambda.entry(zeta));
        if s.is_zero() {
            continue;
        }
        let d = BigRational::from_integer(BigInt::from(table.dim(zeta)).pow(k as u32));
        total += table.value(zeta, theta).clone() * (s / d);
    }
    let norm = BigRational::from_integer(falling_factorial(n as u64, k as u64));
    Ok(ExactComplex::new(total.re / norm.clone(), total.im / norm))
}

/// Eigenvalue `1 - (k - m_1(rho_{e_T}))/n` attached to the character column of `rho`.
pub fn eigenvalue(rho: &ClassType, n: usize) -> BigRational {
    BigRational::one()
        - BigRational::new(
            BigInt::from(rho.size() - rho.fixed_points()),
            BigInt::from(n),
        )
}

/// Normalized character table of `S_n(T)`: rows are `Y_n(T^)`, columns `Y_n([T])`.
pub struct NormalizedCharacterTable {
    pub irreps: Vec<MultiDiagram>,
    pub classes: Vec<ClassType>,
    pub values: Vec<Vec<ExactComplex>>,
}

pub fn normalized_character_table(
    n: usize,
    table: &FiniteGroupTable,
) -> Result<NormalizedCharacterTable> {
    let irreps = MultiDiagram::enumerate(n, table.num_irreps());
    let classes = ClassType::enumerate(n, table.num_classes());
    let values = irreps
        .iter()
        .map(|l| {
            classes
                .iter()
                .map(|rho| wreath_normalized_character(l, rho, table))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    Ok(NormalizedCharacterTable {
        irreps,
        classes,
        values,
    })
}
