//! Pausing-time laws, renewal counting, `a(k, n, s)` and its scaling limits `a_k(t)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{gaussian_density, integrate_to_infinity, QuadOptions};

/// Law `psi` of the IID waiting times between chain jumps; `psi({0}) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PausingTime {
    Exponential {
        mean: f64,
    },
    Gamma {
        shape: f64,
        scale: f64,
    },
    /// Characteristic function `exp(-|u|^alpha (1 - i tan(pi alpha/2) sgn u))`,
    /// equivalently Laplace transform `exp(-lambda^alpha / cos(pi alpha/2))`.
    OneSidedStable {
        alpha: f64,
    },
}

impl PausingTime {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            PausingTime::Exponential { mean } => mean > 0.0 && mean.is_finite(),
            PausingTime::Gamma { shape, scale } => {
                shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()
            }
            PausingTime::OneSidedStable { alpha } => alpha > 0.0 && alpha < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "invalid pausing time {self:?}"
            )))
        }
    }

    /// Mean waiting time, `None` for stable laws.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            PausingTime::Exponential { mean } => Some(mean),
            PausingTime::Gamma { shape, scale } => Some(shape * scale),
            PausingTime::OneSidedStable { .. } => None,
        }
    }

    /// The time scale `tau_n` that goes with this law: `n` for finite mean, `n^{1/alpha}` otherwise.
    pub fn clock_mode(&self) -> ClockMode {
        match *self {
            PausingTime::OneSidedStable { alpha } => ClockMode::Stable { alpha },
            _ => ClockMode::Diffusive,
        }
    }

    /// `E[exp(-lambda epsilon)]`.
    pub fn laplace(&self, lambda: f64) -> f64 {
        match *self {
            PausingTime::Exponential { mean } => 1.0 / (1.0 + lambda * mean),
            PausingTime::Gamma { shape, scale } => (1.0 + lambda * scale).powf(-shape),
            PausingTime::OneSidedStable { alpha } => {
                (-lambda.powf(alpha) / (PI * alpha / 2.0).cos()).exp()
            }
        }
    }
}

/// Macroscopic time scaling `s = t tau_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ClockMode {
    /// `tau_n = n`.
    Diffusive,
    /// `tau_n = n^{1/alpha}`.
    Stable { alpha: f64 },
}

impl ClockMode {
    pub fn tau(&self, n: usize) -> f64 {
        match *self {
            ClockMode::Diffusive => n as f64,
            ClockMode::Stable { alpha } => (n as f64).powf(1.0 / alpha),
        }
    }
}

/// Parameters of the limit `a_k(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LimitClock {
    /// `e^{-kt/m}`.
    Diffusive { mean: f64 },
    /// One-sided stable law of exponent `alpha`.
    Stable { alpha: f64 },
}

impl LimitClock {
    pub fn from_pausing(dist: &PausingTime) -> Self {
        match *dist {
            PausingTime::OneSidedStable { alpha } => LimitClock::Stable { alpha },
            other => LimitClock::Diffusive {
                mean: other.mean().expect("finite mean"),
            },
        }
    }
}

/// One waiting time.
pub fn sample_waiting<R: Rng + ?Sized>(dist: &PausingTime, rng: &mut R) -> f64 {
    match *dist {
        PausingTime::Exponential { mean } => {
            Exp::new(1.0 / mean).expect("validated mean").sample(rng)
        }
        PausingTime::Gamma { shape, scale } => Gamma::new(shape, scale)
            .expect("validated gamma")
            .sample(rng),
        PausingTime::OneSidedStable { alpha: 0.5 } => {
            let z: f64 = StandardNormal.sample(rng);
            1.0 / (z * z)
        }
        PausingTime::OneSidedStable { alpha } => {
            // Kanter's representation of the law with Laplace transform exp(-lambda^alpha),
            // rescaled to exp(-lambda^alpha / cos(pi alpha / 2)).
            let u = rng.random::<f64>() * PI;
            let w: f64 = Exp::new(1.0).expect("rate 1").sample(rng);
            let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
            let b = (((1.0 - alpha) * u).sin() / w).powf((1.0 - alpha) / alpha);
            let scale = (1.0 / (PI * alpha / 2.0).cos()).powf(1.0 / alpha);
            scale * a * b
        }
    }
}

/// Renewal process started at time 0; counts jumps up to increasing times.
#[derive(Debug, Clone)]
pub struct RenewalClock {
    dist: PausingTime,
    now: f64,
    next_jump: f64,
}

impl RenewalClock {
    pub fn new<R: Rng + ?Sized>(dist: PausingTime, rng: &mut R) -> Self {
        let first = sample_waiting(&dist, rng);
        RenewalClock {
            dist,
            now: 0.0,
            next_jump: first,
        }
    }

    /// Number of jumps in `(now, s]`; `s` must not decrease between calls.
    pub fn advance_to<R: Rng + ?Sized>(&mut self, s: f64, rng: &mut R) -> u64 {
        debug_assert!(s >= self.now);
        let mut jumps = 0;
        while self.next_jump <= s {
            jumps += 1;
            self.next_jump += sample_waiting(&self.dist, rng);
        }
        self.now = s;
        jumps
    }
}

/// One sample of `N_s`.
pub fn count_jumps<R: Rng + ?Sized>(dist: &PausingTime, s: f64, rng: &mut R) -> u64 {
    if s <= 0.0 {
        return 0;
    }
    RenewalClock::new(*dist, rng).advance_to(s, rng)
}

/// Estimate with its standard error; the error is zero for closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

/// `a(k, n, s) = E[(1 - k/n)^{N_s}]`. Closed form `exp(-ks/(nm))` for the
/// exponential law, Monte Carlo over `samples` renewal paths otherwise.
pub fn a_exact<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    s: f64,
    dist: &PausingTime,
    samples: usize,
    rng: &mut R,
) -> Result<Estimate> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "a(k, n, s) needs k <= n, got k = {k}, n = {n}"
        )));
    }
    if n == 0 || s < 0.0 {
        return Err(Error::InvalidArgument(
            "a(k, n, s) needs n >= 1 and s >= 0".into(),
        ));
    }
    if k == 0 || s == 0.0 {
        return Ok(Estimate {
            value: 1.0,
            std_err: 0.0,
        });
    }
    let q = 1.0 - k as f64 / n as f64;
    if let PausingTime::Exponential { mean } = *dist {
        return Ok(Estimate {
            value: (-(k as f64) * s / (n as f64 * mean)).exp(),
            std_err: 0.0,
        });
    }
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "Monte Carlo needs at least 2 samples".into(),
        ));
    }
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let v = q.powf(count_jumps(dist, s, rng) as f64);
        sum += v;
        sum2 += v * v;
    }
    let m = sum / samples as f64;
    let var = (sum2 / samples as f64 - m * m).max(0.0) * samples as f64 / (samples - 1) as f64;
    Ok(Estimate {
        value: m,
        std_err: (var / samples as f64).sqrt(),
    })
}

/// `a_k(t) = lim_n a(k, n, t tau_n)`.
pub fn a_limit(k: usize, t: f64, clock: LimitClock) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    if t < 0.0 {
        return Err(Error::InvalidArgument("a_k(t) needs t >= 0".into()));
    }
    match clock {
        LimitClock::Diffusive { mean } => Ok((-(k as f64) * t / mean).exp()),
        LimitClock::Stable { alpha } => a_limit_stable(k, t, alpha),
    }
}

/// `(sin pi a / pi a) int_0^inf exp(-t (k u cos(pi a/2))^{1/a}) / (u^2 + 2u cos(pi a) + 1) du`.
pub fn a_limit_stable(k: usize, t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "stable exponent {alpha} outside (0, 1)"
        )));
    }
    let c = (PI * alpha / 2.0).cos();
    let cpa = (PI * alpha).cos();
    let pref = (PI * alpha).sin() / (PI * alpha);
    let integral = integrate_to_infinity(
        |u| (-t * (k as f64 * u * c).powf(1.0 / alpha)).exp() / (u * u + 2.0 * u * cpa + 1.0),
        0.0,
        QuadOptions::abs(1e-12),
    )?;
    Ok(pref * integral)
}

/// Half-stable case `(2/pi) int_0^inf exp(-t k^2 u^2 / 2) / (u^2 + 1) du`.
pub fn a_half_stable(k: usize, t: f64) -> Result<f64> {
    let kk = k as f64;
    let integral = integrate_to_infinity(
        |u| (-t * kk * kk * u * u / 2.0).exp() / (u * u + 1.0),
        0.0,
        QuadOptions::abs(1e-12),
    )?;
    Ok(2.0 / PI * integral)
}

/// Gaussian-smoothing form of the half-stable limit:
/// `(1/sqrt(2 pi t)) int exp(-x^2/(2t)) exp(-k|x|) dx = E[exp(-k sqrt(t) |Y|)]`.
pub fn a_half_stable_gaussian(k: usize, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    let s = t.sqrt() * k as f64;
    Ok(2.0
        * integrate_to_infinity(
            |y| gaussian_density(y) * (-s * y).exp(),
            0.0,
            QuadOptions::abs(1e-13),
        )?)
}
