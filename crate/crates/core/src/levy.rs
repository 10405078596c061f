//! Free Lévy measures `l` with `R(w) = R_1 + int w / (1 - x w) l(dx)`, so that
//! `R_{k+1} = M_{k-1}(l)`, and their flows under the two clocks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::freeprob::{CumulantSeq, RTransform};
use crate::measure::AtomicMeasure;
use crate::pausing::a_half_stable_gaussian;
use crate::quad::{
    gaussian_central_mass, gaussian_density, integrate, integrate_to_infinity,
    integrate_vec_to_infinity, QuadOptions,
};
use crate::scalar::Scalar;

type C64 = Complex<f64>;

/// A density component of a Lévy measure. Every piece lives on one side of 0.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityPiece {
    /// `height * 1_{(lo, hi)}(x) dx`.
    Uniform { lo: f64, hi: f64, height: f64 },
    /// Half-stable smearing of `mass * delta_location` at time `t`:
    /// density `(mass/|L|) sqrt(2/(pi t)) exp(-(log(L/x))^2 / (2t))` between 0 and `L`.
    SmearedAtom { location: f64, mass: f64, t: f64 },
    /// Half-stable smearing of a uniform piece at time `t`:
    /// density `height * P(log(a/|x|)^+ / sqrt t < |Y| < log(b/|x|) / sqrt t)`, with `a < b` the
    /// absolute endpoints.
    SmearedUniform {
        lo: f64,
        hi: f64,
        height: f64,
        t: f64,
    },
}

fn abs_range(lo: f64, hi: f64) -> (f64, f64) {
    let (a, b) = (lo.abs(), hi.abs());
    (a.min(b), a.max(b))
}

fn uniform_r(lo: f64, hi: f64, height: f64, w: C64) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let value = ((one - w * lo).ln() - (one - w * hi).ln()) * height;
    let deriv = height * (hi - lo) / ((one - w * hi) * (one - w * lo));
    (value, deriv)
}

impl DensityPiece {
    /// Interval carrying the density.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            DensityPiece::Uniform { lo, hi, .. } | DensityPiece::SmearedUniform { lo, hi, .. } => {
                if hi > 0.0 && matches!(self, DensityPiece::SmearedUniform { .. }) {
                    (0.0, hi)
                } else if matches!(self, DensityPiece::SmearedUniform { .. }) {
                    (lo, 0.0)
                } else {
                    (lo, hi)
                }
            }
            DensityPiece::SmearedAtom { location, .. } => (location.min(0.0), location.max(0.0)),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        let (s0, s1) = self.support();
        if !(x > s0 && x < s1) {
            return 0.0;
        }
        match *self {
            DensityPiece::Uniform { height, .. } => height,
            DensityPiece::SmearedAtom { location, mass, t } => {
                let l = (location / x).ln();
                mass / location.abs()
                    * (2.0 / (std::f64::consts::PI * t)).sqrt()
                    * (-l * l / (2.0 * t)).exp()
            }
            DensityPiece::SmearedUniform { lo, hi, height, t } => {
                let (a, b) = abs_range(lo, hi);
                let ax = x.abs();
                let st = t.sqrt();
                let upper = gaussian_central_mass((b / ax).ln() / st);
                let lower = gaussian_central_mass((a / ax).ln() / st);
                height * (upper - lower)
            }
        }
    }

    /// `int x^j` against the piece.
    pub fn moment(&self, j: u32) -> Result<f64> {
        match *self {
            DensityPiece::Uniform { lo, hi, height } => {
                Ok(height * (hi.powi(j as i32 + 1) - lo.powi(j as i32 + 1)) / (j as f64 + 1.0))
            }
            DensityPiece::SmearedAtom { location, mass, t } => {
                // x = L exp(-sqrt(t) w) turns the log-normal density into 2 phi(w) dw * mass / |L| * |x|
                let st = t.sqrt();
                let v = integrate_to_infinity(
                    |w| 2.0 * gaussian_density(w) * (-(j as f64 + 1.0) * st * w).exp(),
                    0.0,
                    QuadOptions::abs(1e-13),
                )?;
                Ok(mass * location.powi(j as i32) * v)
            }
            DensityPiece::SmearedUniform { lo, hi, .. } => {
                let (a, b) = abs_range(lo, hi);
                let sign = if hi > 0.0 { 1.0 } else { -1.0 };
                let f = |r: f64| (sign * r).powi(j as i32) * self.density(sign * r);
                let opts = QuadOptions {
                    abs_tol: 1e-13,
                    rel_tol: 1e-12,
                    max_intervals: 4000,
                };
                Ok(integrate(f, 0.0, a, opts)? + integrate(f, a, b, opts)?)
            }
        }
    }

    pub fn mass(&self) -> Result<f64> {
        self.moment(0)
    }

    /// Contribution `(int w/(1-xw) dl, int 1/(1-xw)^2 dl)` to `R(w)` and `R'(w)`.
    pub fn r_contribution(&self, w: C64) -> Result<(C64, C64)> {
        match *self {
            DensityPiece::Uniform { lo, hi, height } => Ok(uniform_r(lo, hi, height, w)),
            DensityPiece::SmearedAtom { location, mass, t } => {
                let st = t.sqrt();
                let one = C64::new(1.0, 0.0);
                let v = integrate_vec_to_infinity(
                    |u, out| {
                        let c = (-st * u).exp();
                        let p = 2.0 * gaussian_density(u) * mass * c;
                        let d = one - w * (c * location);
                        let val = w / d * p;
                        let der = (d * d).inv() * p;
                        out.copy_from_slice(&[val.re, val.im, der.re, der.im]);
                    },
                    4,
                    0.0,
                    QuadOptions::abs(1e-13),
                )?;
                Ok((C64::new(v[0], v[1]), C64::new(v[2], v[3])))
            }
            DensityPiece::SmearedUniform { lo, hi, height, t } => {
                let st = t.sqrt();
                let v = integrate_vec_to_infinity(
                    |u, out| {
                        let c = (-st * u).exp();
                        let p = 2.0 * gaussian_density(u);
                        let (val, der) = uniform_r(c * lo, c * hi, height, w);
                        out.copy_from_slice(&[p * val.re, p * val.im, p * der.re, p * der.im]);
                    },
                    4,
                    0.0,
                    QuadOptions::abs(1e-13),
                )?;
                Ok((C64::new(v[0], v[1]), C64::new(v[2], v[3])))
            }
        }
    }
}

/// Finite measure with atoms and density pieces, compactly supported.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyMeasure {
    pub atoms: AtomicMeasure<f64>,
    pub pieces: Vec<DensityPiece>,
}

impl LevyMeasure {
    pub fn zero() -> Self {
        LevyMeasure {
            atoms: AtomicMeasure::zero(),
            pieces: Vec::new(),
        }
    }

    pub fn atom(location: f64, mass: f64) -> Self {
        LevyMeasure {
            atoms: AtomicMeasure::new([(location, mass)]),
            pieces: Vec::new(),
        }
    }

    pub fn from_atoms(atoms: AtomicMeasure<f64>) -> Self {
        LevyMeasure {
            atoms,
            pieces: Vec::new(),
        }
    }

    /// Adds `height dx` on `(lo, hi)`, split at 0 when needed.
    pub fn with_uniform(mut self, lo: f64, hi: f64, height: f64) -> Self {
        if lo < 0.0 && hi > 0.0 {
            return self
                .with_uniform(lo, 0.0, height)
                .with_uniform(0.0, hi, height);
        }
        if hi > lo && height != 0.0 {
            self.pieces.push(DensityPiece::Uniform { lo, hi, height });
        }
        self
    }

    pub fn with_atom(mut self, location: f64, mass: f64) -> Self {
        let mut atoms = self.atoms.atoms().to_vec();
        atoms.push((location, mass));
        self.atoms = AtomicMeasure::new(atoms);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.atoms().is_empty() && self.pieces.is_empty()
    }

    pub fn moment(&self, j: u32) -> Result<f64> {
        let mut total = self.atoms.moment(j);
        for p in &self.pieces {
            total += p.moment(j)?;
        }
        Ok(total)
    }

    /// `M_0 .. M_j`.
    pub fn moments(&self, j: usize) -> Result<Vec<f64>> {
        (0..=j as u32).map(|i| self.moment(i)).collect()
    }

    pub fn total_mass(&self) -> Result<f64> {
        self.moment(0)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.density(x)).sum()
    }

    /// Smallest interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        let mut lo: f64 = 0.0;
        let mut hi: f64 = 0.0;
        for (x, _) in self.atoms.atoms() {
            lo = lo.min(*x);
            hi = hi.max(*x);
        }
        for p in &self.pieces {
            let (a, b) = p.support();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }
}

/// Cumulants `R_1 = r1` and `R_{k+1} = M_{k-1}(l)` up to order `K`.
pub fn levy_to_r(l: &LevyMeasure, order: usize, r1: f64) -> Result<CumulantSeq<f64>> {
    let mut r = vec![0.0; order];
    if order > 0 {
        r[0] = r1;
    }
    for (k, slot) in r.iter_mut().enumerate().skip(1) {
        *slot = l.moment(k as u32 - 1)?;
    }
    Ok(CumulantSeq::new(r))
}

/// Exponential clock on an atomic Lévy measure over any scalar:
/// `l_t = (1 - c) sigma2 delta_0 + c l_0(dx / c)` with `c = e^{-t/m}`.
pub fn flow_atoms_exponential<S: Scalar>(
    l0: &AtomicMeasure<S>,
    c: S,
    sigma2: S,
) -> AtomicMeasure<S> {
    let mut atoms: Vec<(S, S)> = l0
        .atoms()
        .iter()
        .map(|(x, m)| (x.clone() * c.clone(), m.clone() * c.clone()))
        .collect();
    atoms.push((S::zero(), (S::one() - c) * sigma2));
    AtomicMeasure::new(atoms)
}

/// Exponential clock `l_t(dx) = (1 - e^{-t/m}) sigma2 delta_0 + e^{-t/m} l_0(e^{t/m} dx)`.
pub fn levy_flow_exponential(
    l0: &LevyMeasure,
    t: f64,
    mean: f64,
    sigma2: f64,
) -> Result<LevyMeasure> {
    if t < 0.0 || mean <= 0.0 {
        return Err(Error::InvalidArgument(
            "exponential flow needs t >= 0 and m > 0".into(),
        ));
    }
    let c = (-t / mean).exp();
    let atoms = flow_atoms_exponential(&l0.atoms, c, sigma2);
    let pieces = l0
        .pieces
        .iter()
        .map(|p| match *p {
            DensityPiece::Uniform { lo, hi, height } => Ok(DensityPiece::Uniform {
                lo: c * lo,
                hi: c * hi,
                height,
            }),
            _ => Err(Error::Unsupported(
                "exponential flow of a smeared piece".into(),
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LevyMeasure { atoms, pieces })
}

/// Half-stable clock: `(1 - a_1(t)) sigma2 delta_0` plus the log-normal smearing of `l_0`.
pub fn levy_flow_stable(l0: &LevyMeasure, t: f64, sigma2: f64) -> Result<LevyMeasure> {
    if t < 0.0 {
        return Err(Error::InvalidArgument("stable flow needs t >= 0".into()));
    }
    if t == 0.0 {
        return Ok(l0.clone());
    }
    let a1 = a_half_stable_gaussian(1, t)?;
    let mut atoms = vec![(0.0, (1.0 - a1) * sigma2)];
    let mut pieces = Vec::new();
    for &(location, mass) in l0.atoms.atoms() {
        if location == 0.0 {
            atoms.push((0.0, mass * a1));
        } else {
            pieces.push(DensityPiece::SmearedAtom { location, mass, t });
        }
    }
    for p in &l0.pieces {
        match *p {
            DensityPiece::Uniform { lo, hi, height } => {
                pieces.push(DensityPiece::SmearedUniform { lo, hi, height, t })
            }
            _ => {
                return Err(Error::Unsupported(
                    "stable flow of an already smeared piece".into(),
                ))
            }
        }
    }
    Ok(LevyMeasure {
        atoms: AtomicMeasure::new(atoms),
        pieces,
    })
}

/// Closed-form R-transform `R(w) = r1 + int w/(1 - xw) l(dx)`, valid off the
/// real axis where truncated series diverge.
#[derive(Debug, Clone)]
pub struct LevyRTransform {
    pub r1: f64,
    pub levy: LevyMeasure,
    variance: f64,
}

impl LevyRTransform {
    pub fn new(levy: LevyMeasure, r1: f64) -> Result<Self> {
        let variance = levy.total_mass()?;
        Ok(LevyRTransform { r1, levy, variance })
    }

    fn both(&self, w: C64) -> (C64, C64) {
        let one = C64::new(1.0, 0.0);
        let mut value = C64::new(self.r1, 0.0);
        let mut deriv = C64::new(0.0, 0.0);
        for &(x, m) in self.levy.atoms.atoms() {
            let d = one - w * x;
            value += w / d * m;
            deriv += (d * d).inv() * m;
        }
        for p in &self.levy.pieces {
            let (v, d) = p
                .r_contribution(w)
                .unwrap_or((C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0)));
            value += v;
            deriv += d;
        }
        (value, deriv)
    }
}

impl RTransform for LevyRTransform {
    fn eval(&self, w: C64) -> C64 {
        self.both(w).0
    }
    fn derivative(&self, w: C64) -> C64 {
        self.both(w).1
    }
    fn first_cumulants(&self) -> (f64, f64) {
        (self.r1, self.variance)
    }
}
