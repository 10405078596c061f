//! Macroscopic evolution of the per-irrep free cumulants, R-transforms and
//! Lévy measures, plus the three closed-form ensembles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freeprob::{stieltjes_from_cumulants, CumulantSeq, RSeries, C64};
use crate::group::FiniteGroupTable;
use crate::levy::{levy_to_r, LevyMeasure};
use crate::pausing::{a_half_stable_gaussian, a_limit, LimitClock};
use crate::quad::{
    gaussian_density, integrate_to_infinity, integrate_vec_to_infinity, QuadOptions,
};
use crate::scalar::Scalar;

pub use crate::levy::{levy_flow_exponential, levy_flow_stable};

/// Clock of the limiting evolution. Stable flows exist only for exponent 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvolutionClock {
    Exponential { mean: f64 },
    StableHalf,
}

impl EvolutionClock {
    pub fn limit_clock(&self) -> LimitClock {
        match *self {
            EvolutionClock::Exponential { mean } => LimitClock::Diffusive { mean },
            EvolutionClock::StableHalf => LimitClock::Stable { alpha: 0.5 },
        }
    }

    /// `a_1(t), .., a_K(t)`.
    pub fn a_values(&self, t: f64, order: usize) -> Result<Vec<f64>> {
        if t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "time must be non-negative, got {t}"
            )));
        }
        (1..=order)
            .map(|k| match *self {
                EvolutionClock::Exponential { mean } => Ok((-(k as f64) * t / mean).exp()),
                EvolutionClock::StableHalf => a_half_stable_gaussian(k, t),
            })
            .collect()
    }
}

/// Initial data of the limiting evolution: one cumulant sequence (and
/// optionally a Lévy measure) per irreducible representation of `T`.
#[derive(Debug, Clone)]
pub struct EvolutionSpec {
    pub table: FiniteGroupTable,
    pub clock: EvolutionClock,
    pub initial: Vec<CumulantSeq<f64>>,
    pub levy: Option<Vec<LevyMeasure>>,
}

impl EvolutionSpec {
    pub fn new(
        table: FiniteGroupTable,
        clock: EvolutionClock,
        initial: Vec<CumulantSeq<f64>>,
    ) -> Result<Self> {
        let spec = EvolutionSpec {
            table,
            clock,
            initial,
            levy: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_levy(mut self, levy: Vec<LevyMeasure>) -> Result<Self> {
        if levy.len() != self.table.num_irreps() {
            return Err(Error::SizeMismatch(format!(
                "{} Lévy measures for {} irreps",
                levy.len(),
                self.table.num_irreps()
            )));
        }
        self.levy = Some(levy);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if let EvolutionClock::Exponential { mean } = self.clock {
            if !(mean > 0.0 && mean.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "mean waiting time must be positive, got {mean}"
                )));
            }
        }
        if self.initial.len() != self.table.num_irreps() {
            return Err(Error::SizeMismatch(format!(
                "{} cumulant sequences for {} irreps",
                self.initial.len(),
                self.table.num_irreps()
            )));
        }
        for (i, c) in self.initial.iter().enumerate() {
            if c.get(1).abs() > 1e-12 {
                return Err(Error::Constraint(format!(
                    "R_1 must vanish, irrep {i} has {}",
                    c.get(1)
                )));
            }
        }
        let total: f64 = self.initial.iter().map(|c| c.get(2)).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Constraint(format!(
                "R_2 summed over irreps must be 1, got {total}"
            )));
        }
        Ok(())
    }

    /// `(dim zeta)^2 / |T|` per irrep.
    pub fn sigma2(&self) -> Vec<f64> {
        self.table.plancherel_weights_as::<f64>()
    }

    pub fn order(&self) -> usize {
        self.initial.iter().map(|c| c.order()).max().unwrap_or(0)
    }
}

/// The cumulant flow for one irrep over any scalar; `a[k-1] = a_k(t)`.
pub fn evolve_cumulants_with<S: Scalar>(
    initial: &CumulantSeq<S>,
    sigma2: &S,
    a: &[S],
) -> CumulantSeq<S> {
    let order = initial.order().max(2).min(a.len() + 1);
    let mut out = CumulantSeq::zeros(order);
    if a.is_empty() {
        return out;
    }
    out.set(
        2,
        (S::one() - a[0].clone()) * sigma2.clone() + a[0].clone() * initial.get(2),
    );
    for k in 2..order {
        out.set(k + 1, a[k - 1].clone() * initial.get(k + 1));
    }
    out
}

pub fn evolve_cumulants(spec: &EvolutionSpec, t: f64) -> Result<Vec<CumulantSeq<f64>>> {
    let order = spec.order();
    let a = spec.clock.a_values(t, order.saturating_sub(1))?;
    Ok(spec
        .initial
        .iter()
        .zip(spec.sigma2())
        .map(|(c, s2)| evolve_cumulants_with(&c.truncated(order.max(2)), &s2, &a))
        .collect())
}

/// Same flow, with `a_k(t)` from the general limit formula for any clock.
pub fn evolve_cumulants_clock(
    spec: &EvolutionSpec,
    t: f64,
    clock: LimitClock,
) -> Result<Vec<CumulantSeq<f64>>> {
    let order = spec.order();
    let a = (1..order)
        .map(|k| a_limit(k, t, clock))
        .collect::<Result<Vec<_>>>()?;
    Ok(spec
        .initial
        .iter()
        .zip(spec.sigma2())
        .map(|(c, s2)| evolve_cumulants_with(&c.truncated(order.max(2)), &s2, &a))
        .collect())
}

/// Series substitution `R(t, w) = (1 - c) sigma2 w + R(0, c w)` over any scalar.
pub fn r_series_exponential<S: Scalar>(initial: &RSeries<S>, sigma2: &S, c: &S) -> RSeries<S> {
    let coeffs = initial.coefficients();
    let mut out: Vec<S> = Vec::with_capacity(coeffs.len().max(2));
    let mut power = S::one();
    for v in coeffs {
        out.push(v.clone() * power.clone());
        power = power * c.clone();
    }
    if out.len() < 2 {
        out.resize(2, S::zero());
    }
    out[1] = out[1].clone() + (S::one() - c.clone()) * sigma2.clone();
    RSeries::from_coefficients(out)
}

pub fn r_transform_exponential(spec: &EvolutionSpec, t: f64) -> Result<Vec<RSeries<f64>>> {
    let EvolutionClock::Exponential { mean } = spec.clock else {
        return Err(Error::InvalidArgument(
            "exponential R-transform needs an exponential clock".into(),
        ));
    };
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time must be non-negative, got {t}"
        )));
    }
    let c = (-t / mean).exp();
    Ok(spec
        .initial
        .iter()
        .zip(spec.sigma2())
        .map(|(r0, s2)| r_series_exponential(&RSeries::from_cumulants(r0.clone()), &s2, &c))
        .collect())
}

/// Gaussian average over `u` of `(1 - e^{-sqrt t |u|}) sigma2 w + R(0, e^{-sqrt t |u|} w)`,
/// taken coefficientwise by adaptive quadrature in one vector pass.
pub fn r_transform_stable(spec: &EvolutionSpec, t: f64) -> Result<Vec<RSeries<f64>>> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time must be non-negative, got {t}"
        )));
    }
    let order = spec.order().max(2);
    let st = t.sqrt();
    let sigma2 = spec.sigma2();
    let mut out = Vec::with_capacity(spec.initial.len());
    for (r0, s2) in spec.initial.iter().zip(sigma2) {
        let r0 = r0.truncated(order);
        let values = integrate_vec_to_infinity(
            |u, buf| {
                let e = (-st * u).exp();
                let weight = 2.0 * gaussian_density(u);
                let mut power = 1.0;
                for (k, slot) in buf.iter_mut().enumerate() {
                    *slot = weight * r0.get(k + 1) * power;
                    power *= e;
                }
                buf[1] += weight * (1.0 - e) * s2;
            },
            order,
            0.0,
            QuadOptions {
                abs_tol: 1e-14,
                rel_tol: 1e-13,
                max_intervals: 4000,
            },
        )?;
        out.push(RSeries::from_coefficients(values));
    }
    Ok(out)
}

/// Taylor coefficients `f_0 .. f_{K-1}` of an analytic `f` from the trapezoid
/// rule on the circle `|w| = radius`.
pub fn taylor_coefficients<F>(f: F, order: usize, radius: f64, nodes: usize) -> Result<Vec<f64>>
where
    F: Fn(C64) -> Result<C64>,
{
    if !(radius > 0.0) || nodes < 2 * order {
        return Err(Error::InvalidArgument(
            "contour needs a positive radius and at least 2K nodes".into(),
        ));
    }
    let values = (0..nodes)
        .map(|j| f(C64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..order)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                acc += v * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / nodes as f64);
            }
            acc.re / nodes as f64 / radius.powi(k as i32)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresetKind {
    P1,
    P2,
    P3,
}

impl std::str::FromStr for PresetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(PresetKind::P1),
            "P2" => Ok(PresetKind::P2),
            "P3" => Ok(PresetKind::P3),
            other => Err(Error::Parse(format!(
                "unknown preset `{other}`, expected P1, P2 or P3"
            ))),
        }
    }
}

/// Parameters of the second and third ensembles. `a`, `b`, `c` are indexed by irrep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetParams {
    pub r: f64,
    pub r_prime: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl PresetParams {
    pub fn validate(&self, table: &FiniteGroupTable) -> Result<()> {
        let n = table.num_irreps();
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c)] {
            if v.len() != n {
                return Err(Error::Constraint(format!(
                    "`{name}` has {} entries, the group has {n} irreps",
                    v.len()
                )));
            }
        }
        if !(self.r > 0.0) {
            return Err(Error::Constraint(format!(
                "r > 0 violated (r = {})",
                self.r
            )));
        }
        if self.b.iter().any(|&b| b > 0.0) && !(self.r_prime > 0.0) {
            return Err(Error::Constraint(format!(
                "r' > 0 violated (r' = {})",
                self.r_prime
            )));
        }
        for i in 0..n {
            let (a, b, c) = (self.a[i], self.b[i], self.c[i]);
            if !(a > 0.0) {
                return Err(Error::Constraint(format!(
                    "a_zeta > 0 violated for irrep {i} (a = {a})"
                )));
            }
            if !(b >= 0.0) {
                return Err(Error::Constraint(format!(
                    "b_zeta >= 0 violated for irrep {i} (b = {b})"
                )));
            }
            if !(c > 0.0) {
                return Err(Error::Constraint(format!(
                    "c_zeta > 0 violated for irrep {i} (c = {c})"
                )));
            }
            if a + b > c * (1.0 + 1e-12) {
                return Err(Error::Constraint(format!(
                    "a_zeta + b_zeta <= c_zeta violated for irrep {i} ({a} + {b} > {c})"
                )));
            }
        }
        let total: f64 = self.c.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Constraint(format!(
                "sum of c_zeta = 1 violated (sum = {total})"
            )));
        }
        Ok(())
    }

    /// Same `a, b, c` for a group with one irrep.
    pub fn single(r: f64, r_prime: f64, a: f64, b: f64, c: f64) -> Self {
        PresetParams {
            r,
            r_prime,
            a: vec![a],
            b: vec![b],
            c: vec![c],
        }
    }
}

/// One of the three ensembles together with every closed form of its evolution.
#[derive(Debug, Clone)]
pub struct EnsemblePreset {
    pub kind: PresetKind,
    pub table: FiniteGroupTable,
    pub params: Option<PresetParams>,
    sigma2: Vec<f64>,
}

/// Closed form of the half-stable Lévy measure of the second or third ensemble:
/// an atom at 0 plus a density on `(-b/r', 0) u (0, a/r)`.
#[derive(Debug, Clone)]
pub struct StableLevyClosedForm {
    pub kind: PresetKind,
    pub t: f64,
    pub delta0: f64,
    pub right_end: f64,
    pub left_end: f64,
    r: f64,
    r_prime: f64,
}

impl StableLevyClosedForm {
    pub fn density(&self, x: f64) -> f64 {
        if self.t == 0.0 {
            return 0.0;
        }
        let st = self.t.sqrt();
        let (scale, end) = if x > 0.0 && x < self.right_end {
            (self.r, self.right_end)
        } else if x < 0.0 && x > -self.left_end {
            (self.r_prime, self.left_end)
        } else {
            return 0.0;
        };
        let log = (end / x.abs()).ln();
        match self.kind {
            PresetKind::P2 => {
                (2.0 / (PI * self.t)).sqrt() * scale * (-log * log / (2.0 * self.t)).exp()
            }
            PresetKind::P3 => scale * libm::erf(log / st / std::f64::consts::SQRT_2),
            PresetKind::P1 => 0.0,
        }
    }

    /// `int x^j l(dx)`, the density integrated in the variable `s = log(end/|x|)`.
    pub fn moment(&self, j: u32) -> Result<f64> {
        let mut total = if j == 0 { self.delta0 } else { 0.0 };
        for (end, sign) in [(self.right_end, 1.0), (self.left_end, -1.0)] {
            if end <= 0.0 {
                continue;
            }
            let v = integrate_to_infinity(
                |s| {
                    let x = sign * end * (-s).exp();
                    self.density(x) * x.powi(j as i32) * x.abs()
                },
                0.0,
                QuadOptions {
                    abs_tol: 1e-14,
                    rel_tol: 1e-12,
                    max_intervals: 4000,
                },
            )?;
            total += v;
        }
        Ok(total)
    }

    pub fn moments(&self, j: usize) -> Result<Vec<f64>> {
        (0..=j as u32).map(|i| self.moment(i)).collect()
    }
}

impl EnsemblePreset {
    pub fn new(
        kind: PresetKind,
        params: Option<PresetParams>,
        table: FiniteGroupTable,
    ) -> Result<Self> {
        let params = match kind {
            PresetKind::P1 => None,
            _ => {
                let p = params.ok_or_else(|| {
                    Error::Constraint(format!("{kind:?} needs parameters r, r', a, b, c"))
                })?;
                p.validate(&table)?;
                Some(p)
            }
        };
        let sigma2 = table.plancherel_weights_as::<f64>();
        Ok(EnsemblePreset {
            kind,
            table,
            params,
            sigma2,
        })
    }

    pub fn sigma2(&self, zeta: usize) -> f64 {
        self.sigma2[zeta]
    }

    fn abc(&self, zeta: usize) -> (f64, f64, f64, f64, f64) {
        let p = self.params.as_ref().expect("parametrized preset");
        (p.a[zeta], p.b[zeta], p.c[zeta], p.r, p.r_prime)
    }

    /// Radius of convergence of `R(0, .)` around 0.
    pub fn convergence_radius(&self, zeta: usize) -> f64 {
        match self.kind {
            PresetKind::P1 => f64::INFINITY,
            _ => {
                let (a, b, _, r, rp) = self.abc(zeta);
                let right = r / a;
                let left = if b > 0.0 { rp / b } else { f64::INFINITY };
                right.min(left)
            }
        }
    }

    /// Initial Lévy measure.
    pub fn levy0(&self, zeta: usize) -> LevyMeasure {
        match self.kind {
            PresetKind::P1 => LevyMeasure::atom(0.0, self.sigma2[zeta]),
            PresetKind::P2 => {
                let (a, b, c, r, rp) = self.abc(zeta);
                let mut l = LevyMeasure::atom(a / r, a);
                if b > 0.0 {
                    l = l.with_atom(-b / rp, b);
                }
                if c - a - b > 0.0 {
                    l = l.with_atom(0.0, c - a - b);
                }
                l
            }
            PresetKind::P3 => {
                let (a, b, c, r, rp) = self.abc(zeta);
                let mut l = LevyMeasure::zero().with_uniform(0.0, a / r, r);
                if b > 0.0 {
                    l = l.with_uniform(-b / rp, 0.0, rp);
                }
                if c - a - b > 0.0 {
                    l = l.with_atom(0.0, c - a - b);
                }
                l
            }
        }
    }

    /// Exponential-clock R-transform at `w`, with `e = e^{-t/m}` (`e = 1` gives the initial one).
    fn r_scaled(&self, zeta: usize, e: f64, w: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let s2 = self.sigma2[zeta];
        match self.kind {
            PresetKind::P1 => w * s2,
            PresetKind::P2 => {
                let (a, b, c, r, rp) = self.abc(zeta);
                let mut v =
                    w * ((1.0 - e) * s2 + (c - a - b) * e) + w * (a * e) / (one - w * (a / r * e));
                if b > 0.0 {
                    v += w * (b * e) / (one + w * (b / rp * e));
                }
                v
            }
            PresetKind::P3 => {
                let (a, b, c, r, rp) = self.abc(zeta);
                let mut v =
                    w * ((1.0 - e) * s2 + (c - a - b) * e) - (one - w * (a * e / r)).ln() * r;
                if b > 0.0 {
                    v += (one + w * (b * e / rp)).ln() * rp;
                }
                v
            }
        }
    }

    /// `R(0, w)`.
    pub fn r0(&self, zeta: usize, w: C64) -> C64 {
        self.r_scaled(zeta, 1.0, w)
    }

    /// `R(t, w)` for the exponential clock with mean `m`.
    pub fn r_exponential(&self, zeta: usize, t: f64, m: f64, w: C64) -> C64 {
        self.r_scaled(zeta, (-t / m).exp(), w)
    }

    /// `R(t, w)` for the half-stable clock, a Gaussian average of the exponential form.
    pub fn r_stable(&self, zeta: usize, t: f64, w: C64) -> Result<C64> {
        let st = t.sqrt();
        let v = integrate_vec_to_infinity(
            |u, buf| {
                let z = self.r_scaled(zeta, (-st * u).exp(), w) * (2.0 * gaussian_density(u));
                buf[0] = z.re;
                buf[1] = z.im;
            },
            2,
            0.0,
            QuadOptions {
                abs_tol: 1e-14,
                rel_tol: 1e-13,
                max_intervals: 4000,
            },
        )?;
        Ok(C64::new(v[0], v[1]))
    }

    /// Initial cumulants `R_1 .. R_K` read off the closed-form series.
    pub fn initial_cumulants(&self, zeta: usize, order: usize) -> CumulantSeq<f64> {
        let mut r = vec![0.0; order];
        if order >= 2 {
            r[1] = match self.kind {
                PresetKind::P1 => self.sigma2[zeta],
                _ => self.abc(zeta).2,
            };
        }
        if self.kind != PresetKind::P1 {
            let (a, b, _, r_, rp) = self.abc(zeta);
            for k in 2..order {
                let kk = k as i32;
                let right = a / r_;
                let left = if b > 0.0 { -b / rp } else { 0.0 };
                r[k] = match self.kind {
                    PresetKind::P2 => a * right.powi(kk - 1) + b * left.powi(kk - 1),
                    _ => r_ * right.powi(kk) / k as f64 - rp * left.powi(kk) / k as f64,
                };
            }
        }
        CumulantSeq::new(r)
    }

    /// Coefficients of the exponential-clock closed form by contour integration.
    pub fn exponential_coefficients(
        &self,
        zeta: usize,
        t: f64,
        m: f64,
        order: usize,
    ) -> Result<CumulantSeq<f64>> {
        let radius = 0.5 * self.convergence_radius(zeta).min(2.0);
        taylor_coefficients(
            |w| Ok(self.r_exponential(zeta, t, m, w)),
            order,
            radius,
            64.max(4 * order),
        )
        .map(CumulantSeq::new)
    }

    /// Coefficients of the half-stable closed form by contour integration.
    pub fn stable_coefficients(
        &self,
        zeta: usize,
        t: f64,
        order: usize,
    ) -> Result<CumulantSeq<f64>> {
        let radius = 0.5 * self.convergence_radius(zeta).min(2.0);
        taylor_coefficients(
            |w| self.r_stable(zeta, t, w),
            order,
            radius,
            64.max(4 * order),
        )
        .map(CumulantSeq::new)
    }

    /// Exponential-clock Lévy measure written directly from the closed form.
    pub fn levy_exponential(&self, zeta: usize, t: f64, m: f64) -> LevyMeasure {
        let e = (-t / m).exp();
        let s2 = self.sigma2[zeta];
        match self.kind {
            PresetKind::P1 => LevyMeasure::atom(0.0, s2),
            PresetKind::P2 => {
                let (a, b, c, r, rp) = self.abc(zeta);
                let mut l = LevyMeasure::atom(0.0, (1.0 - e) * s2 + (c - a - b) * e)
                    .with_atom(a / r * e, a * e);
                if b > 0.0 {
                    l = l.with_atom(-b / rp * e, b * e);
                }
                l
            }
            PresetKind::P3 => {
                let (a, b, c, r, rp) = self.abc(zeta);
                let mut l = LevyMeasure::atom(0.0, (1.0 - e) * s2 + (c - a - b) * e).with_uniform(
                    0.0,
                    a / r * e,
                    r,
                );
                if b > 0.0 {
                    l = l.with_uniform(-b / rp * e, 0.0, rp);
                }
                l
            }
        }
    }

    /// Half-stable Lévy measure written directly from the closed form.
    pub fn levy_stable(&self, zeta: usize, t: f64) -> Result<StableLevyClosedForm> {
        let s2 = self.sigma2[zeta];
        let (a, b, c, r, rp) = match self.kind {
            PresetKind::P1 => (0.0, 0.0, s2, 1.0, 1.0),
            _ => self.abc(zeta),
        };
        let st = t.sqrt();
        let delta0 = if t == 0.0 {
            c - a - b
        } else {
            2.0 * integrate_to_infinity(
                |u| {
                    let e = (-st * u).exp();
                    gaussian_density(u) * ((1.0 - e) * s2 + (c - a - b) * e)
                },
                0.0,
                QuadOptions::abs(1e-14),
            )?
        };
        Ok(StableLevyClosedForm {
            kind: self.kind,
            t,
            delta0,
            right_end: if self.kind == PresetKind::P1 {
                0.0
            } else {
                a / r
            },
            left_end: if b > 0.0 { b / rp } else { 0.0 },
            r,
            r_prime: rp,
        })
    }

    /// Generic evolution data for this ensemble: cumulants up to `order` and initial Lévy measures.
    pub fn spec(&self, clock: EvolutionClock, order: usize) -> Result<EvolutionSpec> {
        let k = self.table.num_irreps();
        let initial = (0..k).map(|z| self.initial_cumulants(z, order)).collect();
        EvolutionSpec::new(self.table.clone(), clock, initial)?
            .with_levy((0..k).map(|z| self.levy0(z)).collect())
    }
}

/// Convenience wrapper: validated preset plus its generic evolution data.
pub fn ensemble_preset(
    kind: PresetKind,
    params: Option<PresetParams>,
    table: &FiniteGroupTable,
    clock: EvolutionClock,
    order: usize,
) -> Result<(EvolutionSpec, EnsemblePreset)> {
    let preset = EnsemblePreset::new(kind, params, table.clone())?;
    Ok((preset.spec(clock, order)?, preset))
}

/// Generic Lévy flow of every irrep of `spec` under its clock.
pub fn levy_flow(spec: &EvolutionSpec, t: f64) -> Result<Vec<LevyMeasure>> {
    let levy = spec
        .levy
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("evolution spec carries no Lévy measures".into()))?;
    levy.iter()
        .zip(spec.sigma2())
        .map(|(l, s2)| match spec.clock {
            EvolutionClock::Exponential { mean } => levy_flow_exponential(l, t, mean, s2),
            EvolutionClock::StableHalf => levy_flow_stable(l, t, s2),
        })
        .collect()
}

/// Cumulants of the flowed Lévy measures, `R_{k+1}(t) = M_{k-1}(l_t)`.
pub fn levy_flow_cumulants(
    spec: &EvolutionSpec,
    t: f64,
    order: usize,
) -> Result<Vec<CumulantSeq<f64>>> {
    levy_flow(spec, t)?
        .iter()
        .map(|l| levy_to_r(l, order, 0.0))
        .collect()
}

/// Residual of
/// `dG/dt = (1/(m G) - sigma2 G / m) dG/dz + G/m`
/// for irrep `zeta`, with `G(t, z)` from truncated evolved cumulants and
/// central differences of step `h` in `t` and `z`.
pub fn pde_residual(spec: &EvolutionSpec, zeta: usize, t: f64, z: C64, h: f64) -> Result<C64> {
    let EvolutionClock::Exponential { mean } = spec.clock else {
        return Err(Error::InvalidArgument(
            "the PDE check needs an exponential clock".into(),
        ));
    };
    if z.im < 0.1 {
        return Err(Error::InvalidArgument(format!(
            "the PDE check needs Im z >= 0.1, got {}",
            z.im
        )));
    }
    if !(h > 0.0) || t < h {
        return Err(Error::InvalidArgument(format!(
            "need 0 < h <= t, got h = {h}, t = {t}"
        )));
    }
    let sigma2 = spec.sigma2()[zeta];
    let g_at = |time: f64, point: C64| -> Result<C64> {
        let c = evolve_cumulants(spec, time)?;
        stieltjes_from_cumulants(&c[zeta], point)
    };
    let g = g_at(t, z)?;
    let dt = (g_at(t + h, z)? - g_at(t - h, z)?) / (2.0 * h);
    let dz = (g_at(t, z + h)? - g_at(t, z - h)?) / (2.0 * h);
    let rhs = (g.inv() / mean - g * (sigma2 / mean)) * dz + g / mean;
    Ok(dt - rhs)
}
