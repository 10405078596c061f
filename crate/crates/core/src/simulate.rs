//! Monte Carlo engine for the continuous-time chain `X_s = Z_{N_s}`.
//!
//! Every sample owns a ChaCha stream selected by its index, so results do not
//! depend on how samples are scheduled across workers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{step_in_place, ChainMatrices};
use crate::diagram::{MultiDiagram, YoungDiagram};
use crate::error::{Error, Result};
use crate::freeprob::moments_to_cumulants;
use crate::group::FiniteGroupTable;
use crate::pausing::{ClockMode, PausingTime, RenewalClock};

/// Largest cumulant shift `K` (cumulants `R_2 .. R_{K+1}` are reported).
pub const MAX_ORDER: usize = 8;

/// Initial law `M_0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Ensemble {
    Delta(MultiDiagram),
    Plancherel,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub n: usize,
    pub table: FiniteGroupTable,
    pub ensemble: Ensemble,
    pub pausing: PausingTime,
    pub clock: ClockMode,
    pub t_grid: Vec<f64>,
    pub samples: usize,
    /// Report `R_2 .. R_{K+1}`.
    pub order: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.pausing.validate()?;
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.order == 0 || self.order > MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "cumulant order must lie in 1..={MAX_ORDER}"
            )));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument(
                "t-grid must be non-empty with finite t >= 0".into(),
            ));
        }
        if self.t_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(
                "t-grid must be non-decreasing".into(),
            ));
        }
        if let Ensemble::Delta(l) = &self.ensemble {
            if l.size() != self.n || l.num_entries() != self.table.num_irreps() {
                return Err(Error::SizeMismatch(format!(
                    "initial diagram has {} boxes over {} entries, expected {} over {}",
                    l.size(),
                    l.num_entries(),
                    self.n,
                    self.table.num_irreps()
                )));
            }
        }
        Ok(())
    }

    /// `tau_n`.
    pub fn tau(&self) -> f64 {
        self.clock.tau(self.n)
    }
}

/// Mean and standard error of one estimand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub se: f64,
}

/// Estimates for one `(t, zeta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub t: f64,
    pub zeta: String,
    /// `|X^zeta| / n`.
    pub size: Stat,
    /// Scaled free cumulants `R_2 .. R_{K+1}` of the rescaled entry.
    pub cumulants: Vec<Stat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub n: usize,
    pub group: String,
    pub samples: usize,
    pub seed: u64,
    pub order: usize,
    pub rows: Vec<SimRow>,
}

impl SimReport {
    pub fn row(&self, t: f64, zeta: &str) -> Option<&SimRow> {
        self.rows.iter().find(|r| r.t == t && r.zeta == zeta)
    }

    /// `R_j` estimate, `j >= 2`.
    pub fn cumulant(&self, t: f64, zeta: &str, j: usize) -> Option<Stat> {
        self.row(t, zeta)
            .and_then(|r| r.cumulants.get(j.checked_sub(2)?).copied())
    }
}

/// The RNG stream of sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Grows a Plancherel-distributed diagram of size `n` box by box, each box
/// placed by the transition measure of the current shape.
pub fn plancherel_growth<R: Rng + ?Sized>(n: usize, rng: &mut R) -> YoungDiagram {
    let mut nu = YoungDiagram::empty();
    for _ in 0..n {
        let weights = nu.addition_weights::<f64>();
        let u = rng.random::<f64>();
        let mut acc = 0.0;
        let mut row = weights.last().map(|w| w.0).unwrap_or(0);
        for (r, w) in &weights {
            acc += w;
            if u < acc {
                row = *r;
                break;
            }
        }
        nu.add_box(row);
    }
    nu
}

/// One draw from the initial ensemble.
pub fn sample_initial<R: Rng + ?Sized>(
    ensemble: &Ensemble,
    n: usize,
    table: &FiniteGroupTable,
    rng: &mut R,
) -> MultiDiagram {
    match ensemble {
        Ensemble::Delta(l) => l.clone(),
        Ensemble::Plancherel => {
            let weights = table.plancherel_weights_as::<f64>();
            let mut sizes = vec![0usize; weights.len()];
            for _ in 0..n {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                let mut pick = weights.len() - 1;
                for (z, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = z;
                        break;
                    }
                }
                sizes[pick] += 1;
            }
            MultiDiagram::new(
                sizes
                    .into_iter()
                    .map(|s| plancherel_growth(s, rng))
                    .collect(),
            )
        }
    }
}

/// `X_{t tau_n}` started from `lambda0`.
pub fn run_ct<R: Rng + ?Sized>(
    lambda0: &MultiDiagram,
    t: f64,
    config: &SimConfig,
    rng: &mut R,
) -> MultiDiagram {
    let mut state = lambda0.clone();
    let plancherel = config.table.plancherel_weights_as::<f64>();
    let mut clock = RenewalClock::new(config.pausing, rng);
    let jumps = clock.advance_to(t * config.tau(), rng);
    for _ in 0..jumps {
        step_in_place(&mut state, &plancherel, rng);
    }
    state
}

/// Free cumulants `R_1 .. R_order` of the transition measure of `nu` rescaled by `1/sqrt(n)`.
pub fn rescaled_cumulants(nu: &YoungDiagram, n: usize, order: usize) -> Vec<f64> {
    let s = (n as f64).sqrt();
    let m = nu.transition_measure::<f64>().scaled(1.0 / s);
    moments_to_cumulants(&m.moments(order)[1..])
        .values()
        .to_vec()
}

/// Per-sample observations: `[t][zeta]` -> (size fraction, `R_2 .. R_{K+1}`).
type Observation = Vec<Vec<(f64, Vec<f64>)>>;

fn observe(state: &MultiDiagram, n: usize, order: usize) -> Vec<(f64, Vec<f64>)> {
    state
        .entries()
        .iter()
        .map(|e| {
            let r = rescaled_cumulants(e, n, order + 1);
            (e.size() as f64 / n as f64, r[1..].to_vec())
        })
        .collect()
}

fn run_sample(config: &SimConfig, index: usize) -> Observation {
    let mut rng = sample_rng(config.seed, index as u64);
    let mut state = sample_initial(&config.ensemble, config.n, &config.table, &mut rng);
    let plancherel = config.table.plancherel_weights_as::<f64>();
    let mut clock = RenewalClock::new(config.pausing, &mut rng);
    let tau = config.tau();
    config
        .t_grid
        .iter()
        .map(|&t| {
            let jumps = clock.advance_to(t * tau, &mut rng);
            for _ in 0..jumps {
                step_in_place(&mut state, &plancherel, &mut rng);
            }
            observe(&state, config.n, config.order)
        })
        .collect()
}

fn stat(values: impl Iterator<Item = f64> + Clone, count: usize) -> Stat {
    let n = count as f64;
    let mean = values.clone().sum::<f64>() / n;
    if count < 2 {
        return Stat { mean, se: 0.0 };
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Stat {
        mean,
        se: (var / n).sqrt(),
    }
}

/// Runs all samples in parallel on the current rayon pool and aggregates in sample order.
pub fn estimate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let observations: Vec<Observation> = (0..config.samples)
        .into_par_iter()
        .map(|i| run_sample(config, i))
        .collect();
    let mut rows = Vec::new();
    for (ti, &t) in config.t_grid.iter().enumerate() {
        for (z, irrep) in config.table.irreps().iter().enumerate() {
            let size = stat(observations.iter().map(|o| o[ti][z].0), config.samples);
            let cumulants = (0..config.order)
                .map(|j| stat(observations.iter().map(|o| o[ti][z].1[j]), config.samples))
                .collect();
            rows.push(SimRow {
                t,
                zeta: irrep.label.clone(),
                size,
                cumulants,
            });
        }
    }
    Ok(SimReport {
        n: config.n,
        group: config.table.name().to_string(),
        samples: config.samples,
        seed: config.seed,
        order: config.order,
        rows,
    })
}

/// [`estimate`] on a dedicated pool of `workers` threads.
pub fn estimate_with_workers(config: &SimConfig, workers: usize) -> Result<SimReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| estimate(config))
}

/// `E[|X_s^zeta|/n]` for the exponential clock computed from the law
/// `M_s = sum_j Pois(j; s/m) M_0 P^j`, summed until the Poisson tail is below `1e-15`.
pub fn expected_sizes_by_series(
    cm: &ChainMatrices,
    initial: &[f64],
    s: f64,
    mean: f64,
) -> Result<Vec<f64>> {
    if initial.len() != cm.states.len() {
        return Err(Error::SizeMismatch(
            "initial law does not match the state space".into(),
        ));
    }
    let dense: Vec<Vec<(usize, f64)>> = (0..cm.states.len())
        .map(|i| {
            cm.p.row(i)
                .iter()
                .map(|(j, v)| (*j, num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN)))
                .collect()
        })
        .collect();
    let lambda = s / mean;
    let mut weight = (-lambda).exp();
    let mut tail = 1.0 - weight;
    let mut law = initial.to_vec();
    let mut acc: Vec<f64> = law.iter().map(|p| p * weight).collect();
    let mut j = 0usize;
    while tail > 1e-15 {
        j += 1;
        if j > 100_000 {
            return Err(Error::InvalidArgument(
                "Poisson series did not converge".into(),
            ));
        }
        let mut next = vec![0.0; law.len()];
        for (i, row) in dense.iter().enumerate() {
            for (k, p) in row {
                next[*k] += law[i] * p;
            }
        }
        law = next;
        weight *= lambda / j as f64;
        tail -= weight;
        for (a, p) in acc.iter_mut().zip(&law) {
            *a += p * weight;
        }
    }
    let n = cm.n as f64;
    Ok((0..cm.table.num_irreps())
        .map(|z| {
            cm.states
                .iter()
                .zip(&acc)
                .map(|(st, p)| p * st.entry(z).size() as f64 / n)
                .sum()
        })
        .collect())
}
