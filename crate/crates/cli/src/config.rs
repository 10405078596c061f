//! Run configuration: TOML file values overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use resind::evolution::{EvolutionClock, PresetKind, PresetParams};
use resind::pausing::PausingTime;
use resind::simulate::Ensemble;
use resind::{FiniteGroupTable, MultiDiagram, YoungDiagram};
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "RESIND_SEED";

/// Either `"0,0.5,1"` or `[0, 0.5, 1]` in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Text(String),
    List(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub group: Option<String>,
    pub group_file: Option<PathBuf>,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub clock: ClockSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub t_grid: Option<Grid>,
    pub order: Option<usize>,
    pub initial: Option<String>,
    pub points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockSection {
    pub pausing: Option<String>,
    pub mean: Option<f64>,
    pub alpha: Option<f64>,
    pub shape: Option<f64>,
    pub scale: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub preset: Option<String>,
    pub r: Option<f64>,
    pub r_prime: Option<f64>,
    pub a: Option<Vec<f64>>,
    pub b: Option<Vec<f64>>,
    pub c: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config `{}`", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config `{}`", path.display()))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed (default 0).
    #[arg(long, global = true, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Worker threads for sample-parallel work (default: available cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory, created if missing (default `resind-out`).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Builtin group: trivial, cyclic(k), s3, dihedral(4).
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// JSON character table file, used instead of `--group`.
    #[arg(long, global = true)]
    pub group_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Number of boxes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated macroscopic times, e.g. `0,0.5,1`.
    #[arg(long)]
    pub t_grid: Option<String>,
    /// Cumulant order K (R_2 .. R_{K+1} are reported).
    #[arg(long)]
    pub order: Option<usize>,
    /// `plancherel`, `square`, or a multi-diagram such as `1:3,1;chi1:2`.
    #[arg(long)]
    pub initial: Option<String>,
    /// Grid points for shape curves.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ClockArgs {
    /// Waiting-time law: exponential, gamma or stable.
    #[arg(long)]
    pub pausing: Option<String>,
    /// Mean of the exponential law.
    #[arg(long)]
    pub mean: Option<f64>,
    /// Exponent of the one-sided stable law.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gamma shape.
    #[arg(long)]
    pub shape: Option<f64>,
    /// Gamma scale.
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PresetArgs {
    /// Ensemble preset: p1, p2 or p3.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub r_prime: Option<f64>,
    /// Comma-separated a_zeta, one per irrep.
    #[arg(long)]
    pub a: Option<String>,
    /// Comma-separated b_zeta.
    #[arg(long)]
    pub b: Option<String>,
    /// Comma-separated c_zeta.
    #[arg(long)]
    pub c: Option<String>,
}

pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .with_context(|| format!("{what}: `{s}` is not a number"))
        })
        .collect()
}

/// The initial law of a simulation or evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Plancherel,
    Diagram(MultiDiagram),
}

/// Fully resolved settings, echoed back by commands that write files.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub seed: u64,
    pub workers: usize,
    pub output: PathBuf,
    pub group: String,
    pub n: usize,
    pub samples: usize,
    pub t_grid: Vec<f64>,
    pub order: usize,
    pub initial: String,
    pub points: usize,
    pub pausing: PausingTime,
    pub preset: String,
    pub preset_params: Option<PresetParams>,
    #[serde(skip)]
    pub table: FiniteGroupTable,
}

pub struct Sources<'a> {
    pub global: &'a GlobalArgs,
    pub run: Option<&'a RunArgs>,
    pub clock: Option<&'a ClockArgs>,
    pub preset: Option<&'a PresetArgs>,
}

impl Resolved {
    pub fn from_sources(src: Sources<'_>) -> Result<Self> {
        let file = match &src.global.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let g = src.global;
        let run = src.run.cloned().unwrap_or_default();
        let clock = src.clock.cloned().unwrap_or_default();
        let preset = src.preset.cloned().unwrap_or_default();

        // flag file > flag name > config file > config name
        let table = if let Some(path) = &g.group_file {
            FiniteGroupTable::load(path)?
        } else if let Some(name) = &g.group {
            FiniteGroupTable::builtin(name)?
        } else if let Some(path) = &file.group_file {
            FiniteGroupTable::load(path)?
        } else if let Some(name) = &file.group {
            FiniteGroupTable::builtin(name)?
        } else {
            FiniteGroupTable::trivial()
        };

        let t_grid = match (&run.t_grid, &file.run.t_grid) {
            (Some(t), _) => parse_list(t, "t-grid")?,
            (None, Some(Grid::Text(t))) => parse_list(t, "t-grid")?,
            (None, Some(Grid::List(v))) => v.clone(),
            (None, None) => vec![0.0, 0.5, 1.0],
        };

        let kind = clock
            .pausing
            .or(file.clock.pausing)
            .unwrap_or_else(|| "exponential".into());
        let mean = clock.mean.or(file.clock.mean).unwrap_or(1.0);
        let pausing = match kind.to_ascii_lowercase().as_str() {
            "exponential" | "exp" => PausingTime::Exponential { mean },
            "gamma" => PausingTime::Gamma {
                shape: clock.shape.or(file.clock.shape).unwrap_or(1.0),
                scale: clock.scale.or(file.clock.scale).unwrap_or(1.0),
            },
            "stable" => PausingTime::OneSidedStable {
                alpha: clock.alpha.or(file.clock.alpha).unwrap_or(0.5),
            },
            other => bail!("unknown pausing law `{other}` (expected exponential, gamma or stable)"),
        };
        pausing.validate()?;

        let preset_name = preset
            .preset
            .or(file.ensemble.preset)
            .unwrap_or_else(|| "p1".into());
        let kind: PresetKind = preset_name.parse()?;
        let list = |flag: &Option<String>,
                    file: &Option<Vec<f64>>,
                    what: &str|
         -> Result<Option<Vec<f64>>> {
            match (flag, file) {
                (Some(t), _) => parse_list(t, what).map(Some),
                (None, Some(v)) => Ok(Some(v.clone())),
                (None, None) => Ok(None),
            }
        };
        let preset_params = match kind {
            PresetKind::P1 => None,
            _ => {
                let k = table.num_irreps();
                let a =
                    list(&preset.a, &file.ensemble.a, "a")?.context("preset p2/p3 needs `a`")?;
                let c =
                    list(&preset.c, &file.ensemble.c, "c")?.context("preset p2/p3 needs `c`")?;
                let b = list(&preset.b, &file.ensemble.b, "b")?.unwrap_or_else(|| vec![0.0; k]);
                let params = PresetParams {
                    r: preset
                        .r
                        .or(file.ensemble.r)
                        .context("preset p2/p3 needs `r`")?,
                    r_prime: preset.r_prime.or(file.ensemble.r_prime).unwrap_or(1.0),
                    a,
                    b,
                    c,
                };
                params.validate(&table)?;
                Some(params)
            }
        };

        let resolved = Resolved {
            seed: g.seed.or(file.seed).unwrap_or(0),
            workers: g
                .workers
                .or(file.workers)
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            output: g
                .output
                .clone()
                .or(file.output)
                .unwrap_or_else(|| PathBuf::from("resind-out")),
            group: table.name().to_string(),
            n: run.n.or(file.run.n).unwrap_or(100),
            samples: run.samples.or(file.run.samples).unwrap_or(200),
            t_grid,
            order: run.order.or(file.run.order).unwrap_or(4),
            initial: run
                .initial
                .or(file.run.initial)
                .unwrap_or_else(|| "plancherel".into()),
            points: run.points.or(file.run.points).unwrap_or(400),
            pausing,
            preset: preset_name.to_ascii_lowercase(),
            preset_params,
            table,
        };
        resolved.validate()?;
        Ok(resolved)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("n must be positive");
        }
        if self.workers == 0 {
            bail!("workers must be positive");
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            bail!("t-grid must hold finite non-negative times");
        }
        if self.points < 2 {
            bail!("points must be at least 2");
        }
        Ok(())
    }

    pub fn preset_kind(&self) -> PresetKind {
        self.preset.parse().expect("validated on resolution")
    }

    pub fn initial(&self) -> Result<Initial> {
        match self.initial.trim().to_ascii_lowercase().as_str() {
            "plancherel" => Ok(Initial::Plancherel),
            "square" => {
                let mut entries = vec![YoungDiagram::empty(); self.table.num_irreps()];
                entries[0] = YoungDiagram::near_square(self.n);
                Ok(Initial::Diagram(MultiDiagram::new(entries)))
            }
            _ => {
                let d = MultiDiagram::parse(&self.initial, &self.table)?;
                if d.size() != self.n {
                    bail!("initial diagram has {} boxes but n = {}", d.size(), self.n);
                }
                Ok(Initial::Diagram(d))
            }
        }
    }

    pub fn ensemble(&self) -> Result<Ensemble> {
        Ok(match self.initial()? {
            Initial::Plancherel => Ensemble::Plancherel,
            Initial::Diagram(d) => Ensemble::Delta(d),
        })
    }

    /// Clock of the limiting flows; stable flows exist only for exponent 1/2.
    pub fn evolution_clock(&self) -> Result<EvolutionClock> {
        match self.pausing {
            PausingTime::OneSidedStable { alpha: 0.5 } => Ok(EvolutionClock::StableHalf),
            PausingTime::OneSidedStable { alpha } => {
                bail!("limit flows are implemented for the stable exponent 1/2 only, got {alpha}")
            }
            other => Ok(EvolutionClock::Exponential {
                mean: other.mean().expect("finite mean"),
            }),
        }
    }
}
