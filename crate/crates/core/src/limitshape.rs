//! Limit shapes from transition measures.
//!
//! Densities come from Stieltjes inversion. Continuous diagrams come from the
//! Markov transform: with `z = x + i eps`, the function
//! `(2/pi) arctan(x/eps) + (2/pi) Im log(z G(z))` is exactly the Poisson
//! smoothing of `omega'`, so integrating it from the right edge and
//! extrapolating in `eps` recovers `omega`. Finitely atomic measures take the
//! exact rectangular route through interlacing coordinates instead.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::diagram::InterlacingCoords;
use crate::error::{Error, Result};
use crate::evolution::{evolve_cumulants, levy_flow, EvolutionSpec};
use crate::freeprob::{stieltjes, CumulantSeq, RTransform, StieltjesOptions, C64};
use crate::levy::LevyRTransform;
use crate::measure::AtomicMeasure;

/// Default `eps` schedule for Stieltjes inversion.
pub const DEFAULT_EPS: [f64; 3] = [0.05, 0.025, 0.0125];
/// `-eps Im G` above this value marks an atom candidate.
pub const ATOM_THRESHOLD: f64 = 0.02;
/// Most negative density tolerated before the data is flagged.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-3;
/// Largest tolerated deviation of the reconstructed mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-2;

/// Uniform grid on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo < hi) || points < 2 {
            return Err(Error::InvalidArgument(format!(
                "bad grid [{lo}, {hi}] with {points} points"
            )));
        }
        Ok(Grid { lo, hi, points })
    }

    /// 400 points over the support inflated by 10% on each side.
    pub fn around_support(lo: f64, hi: f64) -> Result<Self> {
        let pad = 0.1 * (hi - lo).max(1e-3);
        Grid::new(lo - pad, hi + pad, 400)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| self.lo + i as f64 * self.step())
            .collect()
    }

    fn refined(&self, factor: usize) -> Grid {
        Grid {
            points: (self.points - 1) * factor + 1,
            ..*self
        }
    }
}

/// A continuous diagram sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousDiagram {
    pub x: Vec<f64>,
    pub omega: Vec<f64>,
    pub support: (f64, f64),
}

impl ContinuousDiagram {
    pub fn from_fn(grid: &Grid, support: (f64, f64), f: impl Fn(f64) -> f64) -> Self {
        let x = grid.values();
        let omega = x.iter().map(|&v| f(v)).collect();
        ContinuousDiagram { x, omega, support }
    }

    /// `max (|omega(x_{i+1}) - omega(x_i)| - |x_{i+1} - x_i|)`, at most 0 for a 1-Lipschitz profile.
    pub fn lipschitz_excess(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.omega.windows(2))
            .map(|(x, w)| (w[1] - w[0]).abs() - (x[1] - x[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max |omega(x) - |x||` over grid points outside the support.
    pub fn outside_deviation(&self) -> f64 {
        let (a, b) = self.support;
        self.x
            .iter()
            .zip(&self.omega)
            .filter(|(x, _)| **x < a || **x > b)
            .map(|(x, w)| (w - x.abs()).abs())
            .fold(0.0, f64::max)
    }

    /// `int (omega - |x|) dx / 2`, which equals `R_2` of the transition measure.
    pub fn half_area(&self) -> f64 {
        let f: Vec<f64> = self
            .x
            .iter()
            .zip(&self.omega)
            .map(|(x, w)| w - x.abs())
            .collect();
        trapezoid(&self.x, &f) / 2.0
    }

    pub fn sup_distance(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.x
            .iter()
            .zip(&self.omega)
            .map(|(x, w)| (w - f(*x)).abs())
            .fold(0.0, f64::max)
    }

    /// Checks the Lipschitz bound (up to `tol`) and `omega = |x|` outside the support.
    pub fn check(&self, tol: f64) -> Result<()> {
        let lip = self.lipschitz_excess();
        if lip > tol {
            return Err(Error::Constraint(format!(
                "profile not 1-Lipschitz: excess {lip:.3e}"
            )));
        }
        let out = self.outside_deviation();
        if out > tol {
            return Err(Error::Constraint(format!(
                "profile differs from |x| outside the support by {out:.3e}"
            )));
        }
        Ok(())
    }
}

/// Vershik-Kerov-Logan-Shepp curve for the semicircle of variance `v`.
pub fn vkls(x: f64, variance: f64) -> f64 {
    let s = variance.sqrt();
    let u = x / s;
    if u.abs() >= 2.0 {
        x.abs()
    } else {
        s * 2.0 / PI * (u * (u / 2.0).asin() + (4.0 - u * u).sqrt())
    }
}

fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    x.windows(2)
        .zip(f.windows(2))
        .map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1]))
        .sum()
}

/// Two-point Richardson step for an `O(eps)` error: `(e0 f1 - e1 f0)/(e0 - e1)`.
fn richardson(e0: f64, f0: &[f64], e1: f64, f1: &[f64]) -> Vec<f64> {
    f0.iter()
        .zip(f1)
        .map(|(a, b)| (e0 * b - e1 * a) / (e0 - e1))
        .collect()
}

fn check_schedule(eps: &[f64]) -> Result<()> {
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument(
            "eps schedule must be non-empty and positive".into(),
        ));
    }
    Ok(())
}

/// Density estimate on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    /// Trapezoid integral of the density over the grid.
    pub mass: f64,
    pub min_density: f64,
    /// Set when the density dips below `-NEGATIVITY_TOLERANCE` or its mass
    /// misses 1 by more than `MASS_TOLERANCE`: the cumulant data is not a
    /// probability law at this truncation (or the grid misses the support).
    pub not_a_probability: bool,
    /// Local maxima of `-eps Im G` above [`ATOM_THRESHOLD`] at the smallest `eps`.
    pub atom_candidates: Vec<f64>,
}

/// `(1/pi) Im G(x + i eps)` with the sign fixed so densities are positive,
/// Richardson-extrapolated over the last two `eps`.
pub fn density_from_g<G>(g: G, grid: &Grid, eps: &[f64]) -> Result<DensityEstimate>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    check_schedule(eps)?;
    let x = grid.values();
    let sample = |e: f64| -> Result<Vec<f64>> {
        x.par_iter()
            .map(|&xv| g(C64::new(xv, e)).map(|v| -v.im / PI))
            .collect()
    };
    let e_last = eps[eps.len() - 1];
    let finest = sample(e_last)?;
    let density = if eps.len() == 1 {
        finest.clone()
    } else {
        let e0 = eps[eps.len() - 2];
        richardson(e0, &sample(e0)?, e_last, &finest)
    };
    let mass = trapezoid(&x, &density);
    let min_density = density.iter().copied().fold(f64::INFINITY, f64::min);
    // pi eps f(x) = -eps Im G(x + i eps) is near the atom mass at an atom
    let q: Vec<f64> = finest.iter().map(|f| PI * e_last * f).collect();
    let atom_candidates = (0..x.len())
        .filter(|&i| {
            q[i] >= ATOM_THRESHOLD
                && (i == 0 || q[i] >= q[i - 1])
                && (i + 1 == x.len() || q[i] > q[i + 1])
        })
        .map(|i| x[i])
        .collect();
    Ok(DensityEstimate {
        x,
        density,
        mass,
        min_density,
        not_a_probability: min_density < -NEGATIVITY_TOLERANCE
            || (mass - 1.0).abs() > MASS_TOLERANCE,
        atom_candidates,
    })
}

pub fn density_from_r<R: RTransform + Sync + ?Sized>(
    r: &R,
    grid: &Grid,
    eps: &[f64],
) -> Result<DensityEstimate> {
    let opts = StieltjesOptions {
        min_imag: eps.iter().copied().fold(f64::INFINITY, f64::min).min(1e-3),
        ..Default::default()
    };
    density_from_g(|z| stieltjes(r, z, &opts), grid, eps)
}

/// Density of the law with the given (truncated) free cumulants.
pub fn density_from_cumulants(
    c: &CumulantSeq<f64>,
    grid: &Grid,
    eps: &[f64],
) -> Result<DensityEstimate> {
    density_from_r(c, grid, eps)
}

/// Unwraps `arg` values so that consecutive samples differ by less than `pi`,
/// anchoring the last sample on the principal branch.
fn unwrap_phase(x: &[f64], phase: &mut [f64]) -> Result<()> {
    for i in (0..phase.len().saturating_sub(1)).rev() {
        let next = phase[i + 1];
        let mut v = phase[i];
        while v - next > PI {
            v -= 2.0 * PI;
        }
        while next - v > PI {
            v += 2.0 * PI;
        }
        if (v - next).abs() > 0.5 * PI {
            return Err(Error::Branch(x[i]));
        }
        phase[i] = v;
    }
    Ok(())
}

/// `omega` on `grid` from `G` by the smoothed Markov transform at one `eps`.
fn omega_at_eps<G>(g: &G, fine: &[f64], eps: f64) -> Result<Vec<f64>>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    let mut phase = fine
        .par_iter()
        .map(|&x| {
            let z = C64::new(x, eps);
            g(z).map(|v| (z * v).arg())
        })
        .collect::<Result<Vec<f64>>>()?;
    unwrap_phase(fine, &mut phase)?;
    let slope: Vec<f64> = fine
        .iter()
        .zip(&phase)
        .map(|(x, p)| 2.0 / PI * ((x / eps).atan() + p))
        .collect();
    // integrate from the right end, where omega(x) = |x|
    let n = fine.len();
    let mut omega = vec![0.0; n];
    omega[n - 1] = fine[n - 1].abs();
    for i in (0..n - 1).rev() {
        omega[i] = omega[i + 1] - 0.5 * (fine[i + 1] - fine[i]) * (slope[i] + slope[i + 1]);
    }
    Ok(omega)
}

/// Atoms of the measure behind `g`, found where `-eps Im G` exceeds
/// [`ATOM_THRESHOLD`] and confirmed by a stable residue as `eps -> 0`.
pub fn detect_atoms<G>(g: &G, grid: &Grid, eps: f64) -> Vec<(f64, f64)>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    let h = grid.step();
    let e1 = eps.max(2.0 * h);
    let x = grid.values();
    let q: Vec<f64> = x
        .par_iter()
        .map(|&xv| g(C64::new(xv, e1)).map(|v| -e1 * v.im).unwrap_or(0.0))
        .collect();
    let mut atoms = Vec::new();
    for i in 0..x.len() {
        let left = if i > 0 { q[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < x.len() {
            q[i + 1]
        } else {
            f64::NEG_INFINITY
        };
        if q[i] < ATOM_THRESHOLD || q[i] < left || q[i] <= right {
            continue;
        }
        if let Some(atom) = confirm_atom(g, x[i] - h, x[i] + h, e1) {
            atoms.push(atom);
        }
    }
    atoms
}

fn confirm_atom<G>(g: &G, mut a: f64, mut b: f64, scale: f64) -> Option<(f64, f64)>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    let e2 = scale * 1e-6;
    let q = |x: f64| {
        g(C64::new(x, e2))
            .map(|v| -v.im)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let ratio = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - ratio * (b - a), a + ratio * (b - a));
    let (mut qc, mut qd) = (q(c), q(d));
    for _ in 0..200 {
        if b - a < e2 * 1e-4 {
            break;
        }
        if qc > qd {
            b = d;
            d = c;
            qd = qc;
            c = b - ratio * (b - a);
            qc = q(c);
        } else {
            a = c;
            c = d;
            qc = qd;
            d = a + ratio * (b - a);
            qd = q(d);
        }
    }
    let x0 = 0.5 * (a + b);
    let mass = |e: f64| g(C64::new(x0, e)).map(|v| -e * v.im).ok();
    let (m1, m2) = (mass(e2)?, mass(10.0 * e2)?);
    if m1 > 0.0 && (m1 - m2).abs() <= 1e-3 * m1 {
        Some((x0, m1))
    } else {
        None
    }
}

/// Valleys (the atoms) and peaks (the zeros of `G` between consecutive atoms)
/// of the rectangular diagram whose transition measure is `m`.
pub fn rectangular_inverse(m: &AtomicMeasure<f64>) -> Result<InterlacingCoords<f64>> {
    let atoms: Vec<(f64, f64)> = m
        .atoms()
        .iter()
        .copied()
        .filter(|(_, w)| *w > 0.0)
        .collect();
    if atoms.is_empty() {
        return Err(Error::InvalidArgument(
            "empty measure has no diagram".into(),
        ));
    }
    let g = |x: f64| atoms.iter().map(|(a, w)| w / (x - a)).sum::<f64>();
    let mut peaks = Vec::with_capacity(atoms.len() - 1);
    for pair in atoms.windows(2) {
        // G decreases from +inf to -inf between consecutive poles
        let (mut lo, mut hi) = (pair[0].0, pair[1].0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        peaks.push(0.5 * (lo + hi));
    }
    InterlacingCoords::new(atoms.iter().map(|a| a.0).collect(), peaks)
}

/// Diagram of a finitely atomic transition measure.
pub fn diagram_from_atomic(m: &AtomicMeasure<f64>, grid: &Grid) -> Result<ContinuousDiagram> {
    let coords = rectangular_inverse(m)?;
    let support = (coords.x[0], *coords.x.last().expect("non-empty"));
    Ok(ContinuousDiagram::from_fn(grid, support, |x| {
        coords.profile(x)
    }))
}

/// Options for [`diagram_from_measure`].
#[derive(Debug, Clone)]
pub struct ShapeOptions {
    pub eps: Vec<f64>,
    /// Internal refinement of the grid for the cumulative integral.
    pub refine: usize,
    pub detect_atoms: bool,
}

impl Default for ShapeOptions {
    fn default() -> Self {
        ShapeOptions {
            eps: DEFAULT_EPS.to_vec(),
            refine: 2,
            detect_atoms: true,
        }
    }
}

/// Continuous diagram of the measure whose Stieltjes transform is `g`. The
/// grid must extend past the support on the right.
pub fn diagram_from_measure<G>(g: G, grid: &Grid, opts: &ShapeOptions) -> Result<ContinuousDiagram>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    check_schedule(&opts.eps)?;
    let e_min = opts.eps.iter().copied().fold(f64::INFINITY, f64::min);
    if opts.detect_atoms {
        let atoms = detect_atoms(&g, grid, e_min);
        let mass: f64 = atoms.iter().map(|a| a.1).sum();
        if !atoms.is_empty() && (mass - 1.0).abs() < 1e-6 {
            return diagram_from_atomic(&AtomicMeasure::new(atoms), grid);
        }
    }
    let refine = opts.refine.max(1);
    let fine = grid.refined(refine).values();
    let omega = if opts.eps.len() == 1 {
        omega_at_eps(&g, &fine, opts.eps[0])?
    } else {
        let (e0, e1) = (opts.eps[opts.eps.len() - 2], opts.eps[opts.eps.len() - 1]);
        richardson(
            e0,
            &omega_at_eps(&g, &fine, e0)?,
            e1,
            &omega_at_eps(&g, &fine, e1)?,
        )
    };
    let x: Vec<f64> = fine.iter().step_by(refine).copied().collect();
    let omega: Vec<f64> = omega.iter().step_by(refine).copied().collect();
    let support = estimate_support(&x, &omega);
    Ok(ContinuousDiagram { x, omega, support })
}

/// Smallest interval outside of which `omega` is within `1e-3` of `|x|`.
fn estimate_support(x: &[f64], omega: &[f64]) -> (f64, f64) {
    let inside: Vec<f64> = x
        .iter()
        .zip(omega)
        .filter(|(x, w)| (*w - x.abs()).abs() > 1e-3)
        .map(|(x, _)| *x)
        .collect();
    match (inside.first(), inside.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0.0, 0.0),
    }
}

/// Rough support bound of a law from its Lévy measure or cumulants:
/// `2 sqrt(R_2)` plus the reach of the Lévy measure.
pub fn support_half_width(cumulants: &CumulantSeq<f64>, levy_reach: f64) -> f64 {
    let spread = (3..=cumulants.order())
        .map(|k| cumulants.get(k).abs().powf(1.0 / (k as f64 - 2.0)))
        .fold(0.0, f64::max);
    2.0 * cumulants.get(2).max(0.0).sqrt() + 2.0 * spread.max(levy_reach) + 1e-3
}

/// Averaged limit shape of every irrep at time `t`. Uses the closed-form
/// Lévy R-transform when the spec carries Lévy measures, the truncated
/// cumulant series otherwise.
pub fn shapes_at_time(
    spec: &EvolutionSpec,
    t: f64,
    grid: Option<Grid>,
) -> Result<Vec<ContinuousDiagram>> {
    let cumulants = evolve_cumulants(spec, t)?;
    let levy = match &spec.levy {
        Some(_) => Some(levy_flow(spec, t)?),
        None => None,
    };
    let opts = ShapeOptions::default();
    let sopts = StieltjesOptions {
        min_imag: 1e-3,
        ..Default::default()
    };
    let mut out = Vec::with_capacity(cumulants.len());
    for (zeta, c) in cumulants.iter().enumerate() {
        let reach = levy.as_ref().map_or(0.0, |l| {
            let (a, b) = l[zeta].support();
            a.abs().max(b.abs())
        });
        let grid = match grid {
            Some(g) => g,
            None => {
                let w = support_half_width(c, reach);
                Grid::around_support(-w, w)?
            }
        };
        if c.get(2) <= 1e-14 {
            out.push(ContinuousDiagram::from_fn(&grid, (0.0, 0.0), f64::abs));
            continue;
        }
        let diagram = match &levy {
            Some(l) => {
                let r = LevyRTransform::new(l[zeta].clone(), c.get(1))?;
                diagram_from_measure(|z| stieltjes(&r, z, &sopts), &grid, &opts)?
            }
            None => diagram_from_measure(|z| stieltjes(c, z, &sopts), &grid, &opts)?,
        };
        out.push(diagram);
    }
    Ok(out)
}
