//! Free cumulants, R-transforms and Stieltjes transforms.
//!
//! `CumulantSeq` holds `R_1 .. R_K`. `RSeries` exposes the R-transform in the
//! convention `R(w) = sum_{k>=0} R_{k+1} w^k`, which is the one every closed
//! form in this crate uses; `RSeries::shifted_coefficient` gives the
//! `sum_{k>=1} R_k w^k` convention.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;
use crate::scalar::{complex_from_exact, Scalar};

pub type C64 = Complex<f64>;

/// Truncated free cumulant sequence `R_1 .. R_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSeq<S> {
    r: Vec<S>,
}

impl<S: Scalar> CumulantSeq<S> {
    /// `values[0]` is `R_1`.
    pub fn new(values: Vec<S>) -> Self {
        CumulantSeq { r: values }
    }

    pub fn zeros(order: usize) -> Self {
        CumulantSeq {
            r: vec![S::zero(); order],
        }
    }

    /// Semicircle law with mean 0 and the given variance.
    pub fn semicircle(variance: S, order: usize) -> Self {
        let mut c = Self::zeros(order.max(2));
        c.r[1] = variance;
        c.r.truncate(order);
        c
    }

    pub fn order(&self) -> usize {
        self.r.len()
    }

    /// `R_k`, 1-indexed; zero beyond the truncation order.
    pub fn get(&self, k: usize) -> S {
        if k == 0 || k > self.r.len() {
            S::zero()
        } else {
            self.r[k - 1].clone()
        }
    }

    pub fn set(&mut self, k: usize, value: S) {
        if k > self.r.len() {
            self.r.resize(k, S::zero());
        }
        self.r[k - 1] = value;
    }

    pub fn values(&self) -> &[S] {
        &self.r
    }

    pub fn truncated(&self, order: usize) -> Self {
        let mut r = self.r.clone();
        r.resize(order, S::zero());
        CumulantSeq { r }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CumulantSeq<T> {
        CumulantSeq {
            r: self.r.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> CumulantSeq<f64> {
        self.map(|v| v.to_float())
    }

    /// Moments `M_1 .. M_K` of the law with these cumulants.
    pub fn moments(&self) -> Vec<S> {
        cumulants_to_moments(self)
    }
}

/// Free compression by a projection of trace `ratio`: `R_k -> ratio^{k-1} R_k`.
pub fn compress<S: Scalar>(c: &CumulantSeq<S>, ratio: S) -> Result<CumulantSeq<S>> {
    if !(ratio > S::zero() && ratio <= S::one()) {
        return Err(Error::InvalidArgument(format!(
            "compression ratio must lie in (0, 1], got {:?}",
            ratio
        )));
    }
    let mut factor = S::one();
    let mut out = Vec::with_capacity(c.order());
    for v in c.values() {
        out.push(v.clone() * factor.clone());
        factor = factor * ratio.clone();
    }
    Ok(CumulantSeq::new(out))
}

/// Free additive convolution: cumulants add.
pub fn convolve<S: Scalar>(a: &CumulantSeq<S>, b: &CumulantSeq<S>) -> CumulantSeq<S> {
    let order = a.order().max(b.order());
    CumulantSeq::new((1..=order).map(|k| a.get(k) + b.get(k)).collect())
}

/// Multiplies truncated power series (coefficient 0 first), keeping degrees `<= max_deg`.
fn series_mul<S: Scalar>(a: &[S], b: &[S], max_deg: usize) -> Vec<S> {
    let mut out = vec![S::zero(); max_deg + 1];
    for (i, x) in a.iter().enumerate().take(max_deg + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(max_deg + 1 - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Free cumulants from moments `M_1 .. M_K` via
/// `M_n = sum_k R_k [z^{n-k}] M(z)^k`, `M(z) = sum_i M_i z^i`.
pub fn moments_to_cumulants<S: Scalar>(moments: &[S]) -> CumulantSeq<S> {
    let order = moments.len();
    let mut series = Vec::with_capacity(order + 1);
    series.push(S::one());
    series.extend(moments.iter().cloned());
    // powers[k] = M(z)^k truncated
    let mut powers: Vec<Vec<S>> = vec![{
        let mut p = vec![S::zero(); order + 1];
        p[0] = S::one();
        p
    }];
    for k in 1..=order {
        let next = series_mul(&powers[k - 1], &series, order);
        powers.push(next);
    }
    let mut r: Vec<S> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = moments[n - 1].clone();
        for k in 1..n {
            acc = acc - r[k - 1].clone() * powers[k][n - k].clone();
        }
        r.push(acc);
    }
    CumulantSeq::new(r)
}

/// Moments `M_1 .. M_K` from free cumulants `R_1 .. R_K`.
pub fn cumulants_to_moments<S: Scalar>(c: &CumulantSeq<S>) -> Vec<S> {
    let order = c.order();
    let mut m = vec![S::one()];
    // powers[k][d] filled up to the current degree
    let mut powers: Vec<Vec<S>> = (0..=order)
        .map(|_| {
            let mut p = vec![S::zero(); order + 1];
            p[0] = S::one();
            p
        })
        .collect();
    for n in 1..=order {
        let mut mn = S::zero();
        for k in 1..=n {
            mn = mn + c.get(k) * powers[k][n - k].clone();
        }
        m.push(mn);
        // extend every power to degree n
        for k in 1..=order {
            let mut acc = S::zero();
            for j in 0..=n {
                acc = acc + powers[k - 1][j].clone() * m[n - j].clone();
            }
            powers[k][n] = acc;
        }
    }
    m.remove(0);
    m
}

/// Truncated R-transform `R(w) = sum_{k>=0} R_{k+1} w^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RSeries<S> {
    cumulants: CumulantSeq<S>,
}

impl<S: Scalar> RSeries<S> {
    pub fn from_cumulants(cumulants: CumulantSeq<S>) -> Self {
        RSeries { cumulants }
    }

    /// `coeffs[k]` is the coefficient of `w^k`.
    pub fn from_coefficients(coeffs: Vec<S>) -> Self {
        RSeries {
            cumulants: CumulantSeq::new(coeffs),
        }
    }

    /// Coefficient of `w^k` in `sum_{k>=0} R_{k+1} w^k`.
    pub fn coefficient(&self, k: usize) -> S {
        self.cumulants.get(k + 1)
    }

    /// Coefficient of `w^k` in `w R(w) = sum_{k>=1} R_k w^k`.
    pub fn shifted_coefficient(&self, k: usize) -> S {
        self.cumulants.get(k)
    }

    pub fn coefficients(&self) -> &[S] {
        self.cumulants.values()
    }

    pub fn cumulants(&self) -> &CumulantSeq<S> {
        &self.cumulants
    }

    pub fn into_cumulants(self) -> CumulantSeq<S> {
        self.cumulants
    }
}

/// An R-transform that can be evaluated off the real axis.
pub trait RTransform {
    /// `R(w) = sum_{k>=0} R_{k+1} w^k` (or its analytic continuation).
    fn eval(&self, w: C64) -> C64;
    fn derivative(&self, w: C64) -> C64;
    /// `(mean, variance)`, used to seed the inversion.
    fn first_cumulants(&self) -> (f64, f64);
}

impl RTransform for CumulantSeq<f64> {
    fn eval(&self, w: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for v in self.values().iter().rev() {
            acc = acc * w + v;
        }
        acc
    }

    fn derivative(&self, w: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, v) in self.values().iter().enumerate().skip(1).rev() {
            acc = acc * w + v * k as f64;
        }
        acc
    }

    fn first_cumulants(&self) -> (f64, f64) {
        (self.get(1), self.get(2))
    }
}

impl RTransform for RSeries<f64> {
    fn eval(&self, w: C64) -> C64 {
        self.cumulants.eval(w)
    }
    fn derivative(&self, w: C64) -> C64 {
        self.cumulants.derivative(w)
    }
    fn first_cumulants(&self) -> (f64, f64) {
        self.cumulants.first_cumulants()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StieltjesOptions {
    pub min_imag: f64,
    pub tolerance: f64,
    pub max_newton: usize,
}

impl Default for StieltjesOptions {
    fn default() -> Self {
        StieltjesOptions {
            min_imag: 1e-3,
            tolerance: 1e-12,
            max_newton: 100,
        }
    }
}

fn solver_error(z: C64, reason: impl Into<String>) -> Error {
    Error::Solver {
        re: z.re,
        im: z.im,
        reason: reason.into(),
    }
}

/// Newton on `f(G) = R(G) + 1/G - z` with damping; returns the root or `None`.
fn newton<R: RTransform + ?Sized>(
    r: &R,
    z: C64,
    mut g: C64,
    opts: &StieltjesOptions,
) -> Option<C64> {
    let residual = |g: C64| r.eval(g) + g.inv() - z;
    let tol = opts.tolerance * (1.0 + z.norm());
    let mut f = residual(g);
    for _ in 0..opts.max_newton {
        if f.norm() < tol {
            return Some(g);
        }
        let df = r.derivative(g) - (g * g).inv();
        if df.norm() == 0.0 || !df.is_finite() {
            return None;
        }
        let step = f / df;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let candidate = g - step * lambda;
            if candidate.norm() > 0.0 && candidate.is_finite() {
                let fc = residual(candidate);
                if fc.norm() < f.norm() || fc.norm() < tol {
                    g = candidate;
                    f = fc;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    if f.norm() < tol {
        Some(g)
    } else {
        None
    }
}

/// Cauchy-Stieltjes transform `G(z)` of the law whose R-transform is `r`,
/// found by inverting `z = R(G) + 1/G` along a path coming down from
/// `Re z + i Y` with `Y` large.
pub fn stieltjes<R: RTransform + ?Sized>(r: &R, z: C64, opts: &StieltjesOptions) -> Result<C64> {
    if z.im < opts.min_imag {
        return Err(solver_error(
            z,
            format!("Im z below the minimum {}", opts.min_imag),
        ));
    }
    let (mean, var) = r.first_cumulants();
    let scale = 1.0 + mean.abs() + var.abs().sqrt();
    let start_im = z.im.max(20.0 * scale + (z.re - mean).abs());
    let mut current = C64::new(z.re, start_im);
    let mut g = newton(r, current, (current - mean).inv(), opts)
        .ok_or_else(|| solver_error(current, "no convergence at the start of the path"))?;
    let mut step = 0.25;
    while current != z {
        // geometric descent of the imaginary part
        let target_im = (current.im * (1.0 - step)).max(z.im);
        let next = C64::new(z.re, target_im);
        match newton(r, next, g, opts) {
            Some(g_next) if g_next.im <= 1e-300 => {
                g = g_next;
                current = next;
                step = (step * 1.5).min(0.5);
            }
            _ => {
                step *= 0.5;
                if step < 1e-6 {
                    return Err(solver_error(z, "continuation step underflow"));
                }
            }
        }
    }
    Ok(g)
}

/// `G(z)` from truncated cumulants.
pub fn stieltjes_from_cumulants(c: &CumulantSeq<f64>, z: C64) -> Result<C64> {
    stieltjes(c, z, &StieltjesOptions::default())
}

/// Class-side sequence `gamma^theta_{k+1} = sum_zeta chi^zeta_theta / (dim zeta)^k R^zeta_{k+1}`.
pub fn dualize_to_classes<S: Scalar>(
    table: &FiniteGroupTable,
    k: u32,
    per_irrep: &[Complex<S>],
) -> Vec<Complex<S>> {
    (0..table.num_classes())
        .map(|theta| {
            let mut acc = Complex::new(S::zero(), S::zero());
            for (zeta, r) in per_irrep.iter().enumerate() {
                let chi: Complex<S> = complex_from_exact(table.value(zeta, theta));
                let d = S::from_i64(table.dim(zeta) as i64).powi(k);
                acc = acc + chi * r.clone() / d;
            }
            acc
        })
        .collect()
}

/// Irrep-side sequence `R^zeta_{k+1} = sum_theta gamma^theta |C_theta|/|T| conj(chi^zeta_theta) (dim zeta)^k`.
pub fn dualize_to_irreps<S: Scalar>(
    table: &FiniteGroupTable,
    k: u32,
    per_class: &[Complex<S>],
) -> Vec<Complex<S>> {
    let order = table.order() as i64;
    (0..table.num_irreps())
        .map(|zeta| {
            let d = S::from_i64(table.dim(zeta) as i64).powi(k);
            let mut acc = Complex::new(S::zero(), S::zero());
            for (theta, g) in per_class.iter().enumerate() {
                let chi: Complex<S> = complex_from_exact(table.value(zeta, theta));
                let weight = S::from_ratio(table.class_size(theta) as i64, order);
                acc = acc + g.clone() * chi.conj() * weight;
            }
            acc * d
        })
        .collect()
}
