//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at the odd Kronrod nodes (indices 1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn abs(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            ..Default::default()
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

fn gk15<F: FnMut(f64, &mut [f64])>(
    f: &mut F,
    dim: usize,
    a: f64,
    b: f64,
    buf: &mut [f64],
) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    f(center, buf);
    for d in 0..dim {
        kronrod[d] = WGK[7] * buf[d];
        gauss[d] = WG[3] * buf[d];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        f(center - dx, buf);
        let lo: Vec<f64> = buf.to_vec();
        f(center + dx, buf);
        for d in 0..dim {
            let s = lo[d] + buf[d];
            kronrod[d] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[d] += WG[j / 2] * s;
            }
        }
    }
    let mut error: f64 = 0.0;
    for d in 0..dim {
        kronrod[d] *= half;
        gauss[d] *= half;
        error = error.max((kronrod[d] - gauss[d]).abs());
    }
    Segment {
        a,
        b,
        value: kronrod,
        error,
    }
}

/// Integrates a vector-valued function over `[a, b]`; the error estimate is
/// the max over components.
pub fn integrate_vec<F>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(f64, &mut [f64]),
{
    if a == b {
        return Ok((vec![0.0; dim], 0.0));
    }
    let mut buf = vec![0.0; dim];
    let mut segments = vec![gk15(&mut f, dim, a, b, &mut buf)];
    loop {
        let mut total = vec![0.0; dim];
        let mut err = 0.0;
        for s in &segments {
            for d in 0..dim {
                total[d] += s.value[d];
            }
            err += s.error;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if err <= opts.abs_tol.max(opts.rel_tol * scale) {
            return Ok((total, err));
        }
        if !err.is_finite() {
            return Err(Error::Quadrature(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {err:.3e} above tolerance after {} intervals on [{a}, {b}]",
                segments.len()
            )));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::Quadrature(format!("interval collapsed near {mid}")));
        }
        segments.push(gk15(&mut f, dim, seg.a, mid, &mut buf));
        segments.push(gk15(&mut f, dim, mid, seg.b, &mut buf));
    }
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    integrate_vec(|x, out| out[0] = f(x), 1, a, b, opts).map(|(v, _)| v[0])
}

/// `int_a^inf f(u) du` through `u = a + tan(theta)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    opts: QuadOptions,
) -> Result<f64> {
    integrate(
        |theta| {
            let c = theta.cos();
            let v = f(a + theta.tan()) / (c * c);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        opts,
    )
}

pub fn integrate_vec_to_infinity<F>(
    mut f: F,
    dim: usize,
    a: f64,
    opts: QuadOptions,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]),
{
    integrate_vec(
        |theta, out| {
            let c = theta.cos();
            f(a + theta.tan(), out);
            for v in out.iter_mut() {
                *v /= c * c;
                if !v.is_finite() {
                    *v = 0.0;
                }
            }
        },
        dim,
        0.0,
        std::f64::consts::FRAC_PI_2,
        opts,
    )
    .map(|(v, _)| v)
}

/// Standard normal density.
pub fn gaussian_density(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `P(|Y| < b)` for standard normal `Y`; zero for `b <= 0`.
pub fn gaussian_central_mass(b: f64) -> f64 {
    if b <= 0.0 {
        0.0
    } else {
        libm::erf(b / std::f64::consts::SQRT_2)
    }
}
