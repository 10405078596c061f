//! Characters of the infinite wreath product `S_inf(T)` through Thoma
//! parameters, their Thoma measures, and the `sqrt n` scaling families that
//! feed initial data into the evolution.

use num_complex::Complex;
use num_integer::Roots;

use crate::characters::ClassType;
use crate::error::{Error, Result};
use crate::evolution::{EnsemblePreset, PresetKind, PresetParams};
use crate::freeprob::CumulantSeq;
use crate::group::FiniteGroupTable;
use crate::levy::{levy_to_r, LevyMeasure};
use crate::measure::AtomicMeasure;
use crate::scalar::{complex_from_exact, Scalar};

/// A weakly decreasing non-negative sequence, either finite or geometric
/// (`first * ratio^{i-1}` for `i >= 1`).
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSeq<S> {
    Finite(Vec<S>),
    Geometric { first: S, ratio: S },
}

impl<S: Scalar> ParamSeq<S> {
    pub fn empty() -> Self {
        ParamSeq::Finite(Vec::new())
    }

    /// `sum_i x_i^j` for `j >= 1`.
    pub fn power_sum(&self, j: u32) -> S {
        match self {
            ParamSeq::Finite(v) => v.iter().fold(S::zero(), |acc, x| acc + x.powi(j)),
            ParamSeq::Geometric { first, ratio } => first.powi(j) / (S::one() - ratio.powi(j)),
        }
    }

    /// Largest entry.
    pub fn leading(&self) -> S {
        match self {
            ParamSeq::Finite(v) => v.first().cloned().unwrap_or_else(S::zero),
            ParamSeq::Geometric { first, .. } => first.clone(),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        match self {
            ParamSeq::Finite(v) => {
                if v.iter().any(|x| *x < S::zero()) {
                    return Err(Error::Constraint(format!(
                        "{name} entries must be non-negative"
                    )));
                }
                if v.windows(2).any(|w| w[0] < w[1]) {
                    return Err(Error::Constraint(format!(
                        "{name} must be weakly decreasing"
                    )));
                }
            }
            ParamSeq::Geometric { first, ratio } => {
                if *first < S::zero() || *ratio < S::zero() || *ratio >= S::one() {
                    return Err(Error::Constraint(format!(
                        "{name}: geometric tail needs first >= 0 and 0 <= ratio < 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `(alpha, beta, c)` for one irrep.
#[derive(Debug, Clone, PartialEq)]
pub struct ThomaComponent<S> {
    pub alpha: ParamSeq<S>,
    pub beta: ParamSeq<S>,
    pub c: S,
}

/// Thoma parameter `omega`, one component per irrep of `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThomaParam<S> {
    pub components: Vec<ThomaComponent<S>>,
}

impl<S: Scalar> ThomaParam<S> {
    pub fn new(components: Vec<ThomaComponent<S>>) -> Result<Self> {
        let p = ThomaParam { components };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = if S::EXACT {
            S::zero()
        } else {
            S::from_float(1e-12)
        };
        let mut total = S::zero();
        for (i, comp) in self.components.iter().enumerate() {
            comp.alpha.validate(&format!("alpha of irrep {i}"))?;
            comp.beta.validate(&format!("beta of irrep {i}"))?;
            if comp.c < S::zero() {
                return Err(Error::Constraint(format!(
                    "c_zeta >= 0 violated for irrep {i}"
                )));
            }
            let used = comp.alpha.power_sum(1) + comp.beta.power_sum(1);
            if used > comp.c.clone() * (S::one() + tol.clone()) + tol.clone() {
                return Err(Error::Constraint(format!(
                    "sum of alpha and beta <= c_zeta violated for irrep {i} ({:?} > {:?})",
                    used.to_float(),
                    comp.c.to_float()
                )));
            }
            total = total + comp.c.clone();
        }
        if (total.clone() - S::one()).abs() > tol {
            return Err(Error::Constraint(format!(
                "sum of c_zeta = 1 violated (sum = {})",
                total.to_float()
            )));
        }
        Ok(())
    }

    /// `p_1 = c`, `p_j = sum alpha^j + (-1)^{j-1} sum beta^j`.
    pub fn power_sum(&self, zeta: usize, j: u32) -> S {
        let comp = &self.components[zeta];
        match j {
            0 => S::zero(),
            1 => comp.c.clone(),
            _ => {
                let b = comp.beta.power_sum(j);
                let b = if j.is_multiple_of(2) { -b } else { b };
                comp.alpha.power_sum(j) + b
            }
        }
    }

    pub fn to_f64(&self) -> ThomaParam<f64> {
        let conv = |s: &ParamSeq<S>| match s {
            ParamSeq::Finite(v) => ParamSeq::Finite(v.iter().map(|x| x.to_float()).collect()),
            ParamSeq::Geometric { first, ratio } => ParamSeq::Geometric {
                first: first.to_float(),
                ratio: ratio.to_float(),
            },
        };
        ThomaParam {
            components: self
                .components
                .iter()
                .map(|c| ThomaComponent {
                    alpha: conv(&c.alpha),
                    beta: conv(&c.beta),
                    c: c.c.to_float(),
                })
                .collect(),
        }
    }
}

/// `f_omega(rho) = prod_rows (sum_zeta p_j^zeta chi^zeta_theta / (dim zeta)^j)`.
/// Rows of length 1 in the identity class contribute `sum_zeta c_zeta = 1`.
pub fn character_value<S: Scalar>(
    omega: &ThomaParam<S>,
    rho: &ClassType,
    table: &FiniteGroupTable,
) -> Result<Complex<S>> {
    if S::EXACT {
        table.require_exact()?;
    }
    if omega.components.len() != table.num_irreps() || rho.entries().len() != table.num_classes() {
        return Err(Error::SizeMismatch(
            "Thoma parameter, class type and table disagree".into(),
        ));
    }
    let mut value = Complex::new(S::one(), S::zero());
    for (theta, j) in rho.rows() {
        let mut factor = Complex::new(S::zero(), S::zero());
        for zeta in 0..table.num_irreps() {
            let chi: Complex<S> = complex_from_exact(table.value(zeta, theta));
            let scale = omega.power_sum(zeta, j as u32)
                / S::from_i64(table.dim(zeta) as i64).powi(j as u32);
            factor = factor + chi * scale;
        }
        value = value * factor;
    }
    Ok(value)
}

/// Geometric family of atoms `x_i = first * ratio^{i-1}` carrying mass `x_i`,
/// placed at `sign * x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricAtoms<S> {
    pub first: S,
    pub ratio: S,
    pub negative: bool,
}

/// `sum alpha_i delta_{alpha_i} + sum beta_i delta_{-beta_i} + (c - sum(alpha + beta)) delta_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThomaMeasure<S> {
    pub atoms: AtomicMeasure<S>,
    pub tails: Vec<GeometricAtoms<S>>,
}

impl<S: Scalar> ThomaMeasure<S> {
    pub fn moment(&self, m: u32) -> S {
        let mut total = self.atoms.moment(m);
        for tail in &self.tails {
            let v = tail.first.powi(m + 1) / (S::one() - tail.ratio.powi(m + 1));
            total = total + if tail.negative && m % 2 == 1 { -v } else { v };
        }
        total
    }

    pub fn total_mass(&self) -> S {
        self.moment(0)
    }

    /// `M_m` of the dilation `x -> factor * x`.
    pub fn dilated_moment(&self, factor: &S, m: u32) -> S {
        self.moment(m) * factor.powi(m)
    }

    /// Finite atomic version; geometric tails cut after `terms` atoms.
    pub fn truncated(&self, terms: usize) -> AtomicMeasure<S> {
        let mut atoms = self.atoms.atoms().to_vec();
        for tail in &self.tails {
            let mut x = tail.first.clone();
            for _ in 0..terms {
                atoms.push((
                    if tail.negative { -x.clone() } else { x.clone() },
                    x.clone(),
                ));
                x = x * tail.ratio.clone();
            }
        }
        AtomicMeasure::new(atoms)
    }
}

pub fn thoma_measure<S: Scalar>(omega: &ThomaParam<S>) -> Vec<ThomaMeasure<S>> {
    omega
        .components
        .iter()
        .map(|comp| {
            let mut atoms = Vec::new();
            let mut tails = Vec::new();
            for (seq, negative) in [(&comp.alpha, false), (&comp.beta, true)] {
                match seq {
                    ParamSeq::Finite(v) => atoms.extend(
                        v.iter()
                            .map(|x| (if negative { -x.clone() } else { x.clone() }, x.clone())),
                    ),
                    ParamSeq::Geometric { first, ratio } => tails.push(GeometricAtoms {
                        first: first.clone(),
                        ratio: ratio.clone(),
                        negative,
                    }),
                }
            }
            let rest = comp.c.clone() - comp.alpha.power_sum(1) - comp.beta.power_sum(1);
            atoms.push((S::zero(), rest));
            ThomaMeasure {
                atoms: AtomicMeasure::new(atoms),
                tails,
            }
        })
        .collect()
}

/// `sqrt n` as a scalar, exact for perfect squares.
fn sqrt_of<S: Scalar>(n: u64) -> S {
    let root = n.sqrt();
    if root * root == n {
        S::from_i64(root as i64)
    } else {
        S::from_float((n as f64).sqrt())
    }
}

/// The ensembles as `n`-indexed families of Thoma parameters:
/// P1 uses `alpha = beta = 0`, `c = (dim zeta)^2/|T|`; P2 puts `N = round(r sqrt n)`
/// equal atoms `a/N` (and `N' = round(r' sqrt n)` atoms `b/N'`); P3 uses
/// `alpha_i = a(1-q)q^{i-1}` with `1 - q = 1/(r sqrt n)` (and likewise with `r'`).
#[derive(Debug, Clone)]
pub struct ThomaFamily {
    pub preset: EnsemblePreset,
}

impl ThomaFamily {
    pub fn new(
        kind: PresetKind,
        params: Option<PresetParams>,
        table: FiniteGroupTable,
    ) -> Result<Self> {
        Ok(ThomaFamily {
            preset: EnsemblePreset::new(kind, params, table)?,
        })
    }

    pub fn kind(&self) -> PresetKind {
        self.preset.kind
    }

    pub fn table(&self) -> &FiniteGroupTable {
        &self.preset.table
    }

    /// `N = round(r sqrt n)`, at least 1.
    pub fn atom_count(r: f64, n: u64) -> usize {
        ((r * (n as f64).sqrt()).round() as usize).max(1)
    }

    /// `omega^{(n)}`.
    pub fn param<S: Scalar>(&self, n: u64) -> Result<ThomaParam<S>> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "families are indexed by n >= 1".into(),
            ));
        }
        let table = self.table();
        let components = match &self.preset.params {
            None => table
                .plancherel_weights_as::<S>()
                .into_iter()
                .map(|c| ThomaComponent {
                    alpha: ParamSeq::empty(),
                    beta: ParamSeq::empty(),
                    c,
                })
                .collect(),
            Some(p) => {
                let root: S = sqrt_of(n);
                (0..table.num_irreps())
                    .map(|z| {
                        let (a, b, c) = (
                            S::from_float(p.a[z]),
                            S::from_float(p.b[z]),
                            S::from_float(p.c[z]),
                        );
                        let seq = |weight: S, r: f64| -> Result<ParamSeq<S>> {
                            if weight.is_zero() {
                                return Ok(ParamSeq::empty());
                            }
                            match self.kind() {
                                PresetKind::P2 => {
                                    let count = Self::atom_count(r, n);
                                    Ok(ParamSeq::Finite(vec![
                                        weight / S::from_i64(count as i64);
                                        count
                                    ]))
                                }
                                _ => {
                                    let one_minus_q = S::one() / (S::from_float(r) * root.clone());
                                    if one_minus_q >= S::one() {
                                        return Err(Error::Constraint(format!(
                                            "r sqrt(n) > 1 violated (r = {r}, n = {n})"
                                        )));
                                    }
                                    Ok(ParamSeq::Geometric {
                                        first: weight * one_minus_q.clone(),
                                        ratio: S::one() - one_minus_q,
                                    })
                                }
                            }
                        };
                        Ok(ThomaComponent {
                            alpha: seq(a, p.r)?,
                            beta: seq(b, p.r_prime)?,
                            c,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        ThomaParam::new(components)
    }

    /// `f_0^{(n)}(rho)` for a class type embedded in `S_n(T)`.
    pub fn character<S: Scalar>(&self, n: u64, rho: &ClassType) -> Result<Complex<S>> {
        character_value(&self.param::<S>(n)?, rho, self.table())
    }

    /// `n^{(k-1)/2} f_0^{(n)}((k)_theta)`.
    pub fn scaled_cycle_character(&self, n: u64, k: usize, theta: usize) -> Result<Complex<f64>> {
        let rho = ClassType::cycle(k, theta, self.table().num_classes());
        let v = self.character::<f64>(n, &rho)?;
        Ok(v * (n as f64).powf((k as f64 - 1.0) / 2.0))
    }

    /// `lim n^{(k-1)/2} f_0^{(n)}((k)_theta) = sum_zeta M_{k-1}(l_0^zeta) chi^zeta_theta / (dim zeta)^k`.
    pub fn cycle_character_limit(&self, k: usize, theta: usize) -> Result<Complex<f64>> {
        let table = self.table();
        let mut total = Complex::new(0.0, 0.0);
        for (zeta, l) in rescaled_levy_limit(self).iter().enumerate() {
            let m = l.moment(k as u32 - 1)?;
            total += table.value_f64(zeta, theta) * (m / (table.dim(zeta) as f64).powi(k as i32));
        }
        Ok(total)
    }
}

/// Weak limit of the Thoma measures dilated by `sqrt n`.
pub fn rescaled_levy_limit(family: &ThomaFamily) -> Vec<LevyMeasure> {
    (0..family.table().num_irreps())
        .map(|z| family.preset.levy0(z))
        .collect()
}

/// `R_1 = 0`, `R_{k+1} = M_{k-1}(l_0)` from the limiting Lévy measures.
pub fn initial_cumulants_from_family(
    family: &ThomaFamily,
    order: usize,
) -> Result<Vec<CumulantSeq<f64>>> {
    rescaled_levy_limit(family)
        .iter()
        .map(|l| levy_to_r(l, order, 0.0))
        .collect()
}
