//! Character tables of the finite group `T`.
//!
//! Values are stored as complex rationals. Tables whose characters are not
//! rational complex numbers (e.g. `cyclic(3)`) hold the nearest binary
//! rationals and carry `exact = false`; exact suites reject them.

use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ExactComplex, Scalar};

/// Orthogonality tolerance used for tables with rounded character values.
pub const INEXACT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub label: String,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Irrep {
    pub label: String,
    pub dim: u64,
}

/// Character table of `T`: rows are irreducible representations, columns
/// conjugacy classes. The identity class is always column 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupTable {
    name: String,
    classes: Vec<ConjugacyClass>,
    irreps: Vec<Irrep>,
    values: Vec<Vec<ExactComplex>>,
    exact: bool,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn cq(re: i64, im: i64) -> ExactComplex {
    Complex::new(q(re), q(im))
}

impl FiniteGroupTable {
    /// Assembles a table and validates it. Exactness is detected: exact
    /// orthogonality is tried first, then the rounded check.
    pub fn new(
        name: impl Into<String>,
        classes: Vec<ConjugacyClass>,
        irreps: Vec<Irrep>,
        values: Vec<Vec<ExactComplex>>,
    ) -> Result<Self> {
        let mut table = FiniteGroupTable {
            name: name.into(),
            classes,
            irreps,
            values,
            exact: true,
        };
        table.check_shape()?;
        if table.row_orthogonality_exact().is_err() {
            table.exact = false;
        }
        table.validate()?;
        Ok(table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }
    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn num_irreps(&self) -> usize {
        self.irreps.len()
    }
    pub fn is_exact(&self) -> bool {
        self.exact
    }
    /// `|T|`.
    pub fn order(&self) -> u64 {
        self.classes.iter().map(|c| c.size).sum()
    }
    pub fn dim(&self, irrep: usize) -> u64 {
        self.irreps[irrep].dim
    }
    pub fn class_size(&self, class: usize) -> u64 {
        self.classes[class].size
    }
    /// `chi^zeta_theta`.
    pub fn value(&self, irrep: usize, class: usize) -> &ExactComplex {
        &self.values[irrep][class]
    }
    pub fn value_f64(&self, irrep: usize, class: usize) -> Complex<f64> {
        let v = &self.values[irrep][class];
        Complex::new(
            ToPrimitive::to_f64(&v.re).unwrap_or(f64::NAN),
            ToPrimitive::to_f64(&v.im).unwrap_or(f64::NAN),
        )
    }
    pub fn irrep_index(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|i| i.label == label)
    }
    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn require_exact(&self) -> Result<()> {
        if self.exact {
            Ok(())
        } else {
            Err(Error::InexactTable(self.name.clone()))
        }
    }

    /// Plancherel weights `(dim zeta)^2 / |T|`, in irrep order.
    pub fn plancherel_weights(&self) -> Vec<BigRational> {
        let order = BigInt::from(self.order());
        self.irreps
            .iter()
            .map(|ir| BigRational::new(BigInt::from(ir.dim * ir.dim), order.clone()))
            .collect()
    }

    pub fn plancherel_weights_as<S: Scalar>(&self) -> Vec<S> {
        let order = self.order() as i64;
        self.irreps
            .iter()
            .map(|ir| S::from_ratio((ir.dim * ir.dim) as i64, order))
            .collect()
    }

    fn check_shape(&self) -> Result<()> {
        if self.classes.is_empty() {
            return Err(Error::InvalidTable("table has no conjugacy classes".into()));
        }
        if self.classes.len() != self.irreps.len() {
            return Err(Error::InvalidTable(format!(
                "number of classes ({}) != number of irreps ({})",
                self.classes.len(),
                self.irreps.len()
            )));
        }
        if self.values.len() != self.irreps.len()
            || self
                .values
                .iter()
                .any(|row| row.len() != self.classes.len())
        {
            return Err(Error::InvalidTable(
                "values must be an irreps x classes matrix".into(),
            ));
        }
        if self.order() > 64 {
            return Err(Error::InvalidTable(format!(
                "group order {} exceeds the supported maximum 64",
                self.order()
            )));
        }
        Ok(())
    }

    /// Checks every invariant; errors name the identity that fails.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if self.classes[0].size != 1 {
            return Err(Error::InvalidTable(format!(
                "identity class must be listed first with size 1 (found `{}` of size {})",
                self.classes[0].label, self.classes[0].size
            )));
        }
        if let Some(c) = self.classes.iter().find(|c| c.size == 0) {
            return Err(Error::InvalidTable(format!(
                "class `{}` has size 0",
                c.label
            )));
        }
        if let Some(ir) = self.irreps.iter().find(|i| i.dim == 0) {
            return Err(Error::InvalidTable(format!(
                "irrep `{}` has dimension 0",
                ir.label
            )));
        }
        let order = self.order();
        let dim_sq: u64 = self.irreps.iter().map(|i| i.dim * i.dim).sum();
        if dim_sq != order {
            return Err(Error::InvalidTable(format!(
                "sum of squared dimensions {dim_sq} != group order {order}"
            )));
        }
        for (z, ir) in self.irreps.iter().enumerate() {
            if self.values[z][0] != cq(ir.dim as i64, 0) {
                return Err(Error::InvalidTable(format!(
                    "character of `{}` at the identity is not its dimension {}",
                    ir.label, ir.dim
                )));
            }
        }
        if self.exact {
            self.row_orthogonality_exact()?;
            self.column_orthogonality_exact()?;
        } else {
            self.orthogonality_approx()?;
        }
        Ok(())
    }

    fn row_orthogonality_exact(&self) -> Result<()> {
        let order = q(self.order() as i64);
        for z in 0..self.irreps.len() {
            for e in z..self.irreps.len() {
                let mut acc = ExactComplex::zero();
                for (t, class) in self.classes.iter().enumerate() {
                    let term = &self.values[z][t] * self.values[e][t].conj();
                    acc += term.scale(q(class.size as i64));
                }
                let want = if z == e {
                    Complex::new(order.clone(), q(0))
                } else {
                    ExactComplex::zero()
                };
                if acc != want {
                    return Err(Error::InvalidTable(format!(
                        "row orthogonality fails for irreps `{}` and `{}`",
                        self.irreps[z].label, self.irreps[e].label
                    )));
                }
            }
        }
        Ok(())
    }

    fn column_orthogonality_exact(&self) -> Result<()> {
        for a in 0..self.classes.len() {
            for b in a..self.classes.len() {
                let mut acc = ExactComplex::zero();
                for z in 0..self.irreps.len() {
                    acc += &self.values[z][a] * self.values[z][b].conj();
                }
                let want = if a == b {
                    Complex::new(
                        BigRational::new(
                            BigInt::from(self.order()),
                            BigInt::from(self.classes[a].size),
                        ),
                        q(0),
                    )
                } else {
                    ExactComplex::zero()
                };
                if acc != want {
                    return Err(Error::InvalidTable(format!(
                        "column orthogonality fails for classes `{}` and `{}`",
                        self.classes[a].label, self.classes[b].label
                    )));
                }
            }
        }
        Ok(())
    }

    fn orthogonality_approx(&self) -> Result<()> {
        let order = self.order() as f64;
        for z in 0..self.irreps.len() {
            for e in z..self.irreps.len() {
                let mut acc = Complex::new(0.0, 0.0);
                for (t, class) in self.classes.iter().enumerate() {
                    acc += self.value_f64(z, t) * self.value_f64(e, t).conj() * class.size as f64;
                }
                let want = if z == e { order } else { 0.0 };
                if (acc - Complex::new(want, 0.0)).norm() > INEXACT_TOLERANCE * order {
                    return Err(Error::InvalidTable(format!(
                        "row orthogonality fails for irreps `{}` and `{}` (tolerance {INEXACT_TOLERANCE})",
                        self.irreps[z].label, self.irreps[e].label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Built-in tables: `trivial`, `cyclic(k)` (k <= 12), `s3`, `dihedral(4)`.
    /// Accepted spellings include `cyclic2`, `z2`, `c2`, `dihedral4`, `d4`.
    pub fn builtin(name: &str) -> Result<Self> {
        let key: String = name
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')' && *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "trivial" | "1" | "c1" | "z1" | "cyclic1" => Self::cyclic(1),
            "s3" | "sym3" => Ok(Self::s3()),
            "dihedral4" | "d4" | "d8" => Ok(Self::dihedral4()),
            _ => {
                let digits = key
                    .strip_prefix("cyclic")
                    .or_else(|| key.strip_prefix('z'))
                    .or_else(|| key.strip_prefix('c'));
                match digits.and_then(|d| d.parse::<u32>().ok()) {
                    Some(k) if (1..=12).contains(&k) => Self::cyclic(k),
                    _ => Err(Error::UnknownGroup(name.to_string())),
                }
            }
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial table")
    }

    /// `Z/k`. Values `exp(2 pi i jl/k)`; only fourth roots of unity are exact.
    pub fn cyclic(k: u32) -> Result<Self> {
        if !(1..=12).contains(&k) {
            return Err(Error::UnknownGroup(format!("cyclic({k})")));
        }
        let name = if k == 1 {
            "trivial".to_string()
        } else {
            format!("cyclic({k})")
        };
        let classes = (0..k)
            .map(|l| ConjugacyClass {
                label: if l == 0 { "e".into() } else { format!("g{l}") },
                size: 1,
            })
            .collect();
        let irreps = (0..k)
            .map(|j| Irrep {
                label: if j == 0 {
                    "1".into()
                } else {
                    format!("chi{j}")
                },
                dim: 1,
            })
            .collect();
        let values = (0..k)
            .map(|j| (0..k).map(|l| root_of_unity((j * l) % k, k)).collect())
            .collect();
        Self::new(name, classes, irreps, values)
    }

    pub fn s3() -> Self {
        let classes = vec![
            ConjugacyClass {
                label: "e".into(),
                size: 1,
            },
            ConjugacyClass {
                label: "transposition".into(),
                size: 3,
            },
            ConjugacyClass {
                label: "3-cycle".into(),
                size: 2,
            },
        ];
        let irreps = vec![
            Irrep {
                label: "trivial".into(),
                dim: 1,
            },
            Irrep {
                label: "sign".into(),
                dim: 1,
            },
            Irrep {
                label: "standard".into(),
                dim: 2,
            },
        ];
        let values = vec![
            vec![cq(1, 0), cq(1, 0), cq(1, 0)],
            vec![cq(1, 0), cq(-1, 0), cq(1, 0)],
            vec![cq(2, 0), cq(0, 0), cq(-1, 0)],
        ];
        Self::new("s3", classes, irreps, values).expect("S3 table")
    }

    /// Symmetry group of the square (order 8).
    pub fn dihedral4() -> Self {
        let classes = vec![
            ConjugacyClass {
                label: "e".into(),
                size: 1,
            },
            ConjugacyClass {
                label: "r2".into(),
                size: 1,
            },
            ConjugacyClass {
                label: "r".into(),
                size: 2,
            },
            ConjugacyClass {
                label: "s".into(),
                size: 2,
            },
            ConjugacyClass {
                label: "sr".into(),
                size: 2,
            },
        ];
        let irreps = vec![
            Irrep {
                label: "A1".into(),
                dim: 1,
            },
            Irrep {
                label: "A2".into(),
                dim: 1,
            },
            Irrep {
                label: "B1".into(),
                dim: 1,
            },
            Irrep {
                label: "B2".into(),
                dim: 1,
            },
            Irrep {
                label: "E".into(),
                dim: 2,
            },
        ];
        let row = |v: [i64; 5]| v.iter().map(|&x| cq(x, 0)).collect::<Vec<_>>();
        let values = vec![
            row([1, 1, 1, 1, 1]),
            row([1, 1, 1, -1, -1]),
            row([1, 1, -1, 1, -1]),
            row([1, 1, -1, -1, 1]),
            row([2, -2, 0, 0, 0]),
        ];
        Self::new("dihedral(4)", classes, irreps, values).expect("D4 table")
    }

    /// Parses and validates a table file (JSON schema documented in the README).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("group table: {e}")))?;
        let mut values = Vec::with_capacity(file.values.len());
        for row in &file.values {
            let mut parsed = Vec::with_capacity(row.len());
            for entry in row {
                let re = entry[0].rational(&entry[1])?;
                let im = entry[2].rational(&entry[3])?;
                parsed.push(Complex::new(re, im));
            }
            values.push(parsed);
        }
        let table = Self::new(file.name, file.classes, file.irreps, values)?;
        if table.order() != file.order {
            return Err(Error::InvalidTable(format!(
                "declared order {} != sum of class sizes {}",
                file.order,
                table.order()
            )));
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            name: self.name.clone(),
            order: self.order(),
            classes: self.classes.clone(),
            irreps: self.irreps.clone(),
            values: self
                .values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| {
                            [
                                IntLit::from(v.re.numer()),
                                IntLit::from(v.re.denom()),
                                IntLit::from(v.im.numer()),
                                IntLit::from(v.im.denom()),
                            ]
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }
}

fn root_of_unity(m: u32, k: u32) -> ExactComplex {
    if (4 * m).is_multiple_of(k) {
        return match (4 * m) / k {
            0 => cq(1, 0),
            1 => cq(0, 1),
            2 => cq(-1, 0),
            _ => cq(0, -1),
        };
    }
    let angle = 2.0 * std::f64::consts::PI * m as f64 / k as f64;
    Complex::new(
        <BigRational as Scalar>::from_float(angle.cos()),
        <BigRational as Scalar>::from_float(angle.sin()),
    )
}

#[derive(Debug, Serialize, Deserialize)]
struct TableFile {
    name: String,
    order: u64,
    classes: Vec<ConjugacyClass>,
    irreps: Vec<Irrep>,
    values: Vec<Vec<[IntLit; 4]>>,
}

/// JSON integer, or a decimal string for values outside `i64`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum IntLit {
    Small(i64),
    Big(String),
}

impl IntLit {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntLit::Small(v) => Ok(BigInt::from(*v)),
            IntLit::Big(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("integer `{s}`: {e}"))),
        }
    }

    fn rational(&self, den: &IntLit) -> Result<BigRational> {
        let d = den.to_bigint()?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator in character value".into()));
        }
        Ok(BigRational::new(self.to_bigint()?, d))
    }
}

impl From<&BigInt> for IntLit {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => IntLit::Small(x),
            None => IntLit::Big(v.to_string()),
        }
    }
}

/// Sum of the Plancherel weights; `1` for every valid table.
pub fn plancherel_total(table: &FiniteGroupTable) -> BigRational {
    table
        .plancherel_weights()
        .into_iter()
        .fold(BigRational::zero(), |a, b| a + b)
}
