use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use resind::chain::{verify_spectrum, ChainMatrices};
use resind::characters::{normalized_character_table, wreath_normalized_character, ClassType};
use resind::evolution::{
    ensemble_preset, evolve_cumulants_clock, levy_flow, EvolutionClock, EvolutionSpec,
};
use resind::limitshape::{shapes_at_time, support_half_width, Grid};
use resind::pausing::{a_exact, a_limit, LimitClock};
use resind::scalar::{fmt_exact_complex, fmt_rational};
use resind::simulate::{
    estimate_with_workers, rescaled_cumulants, sample_rng, SimConfig, SimReport,
};
use resind::thoma::{thoma_measure, ThomaFamily};
use resind::verify::{run_all, VerifyConfig};
use resind::{CumulantSeq, FiniteGroupTable, MultiDiagram};
use serde::Serialize;

use crate::config::{GlobalArgs, Initial, Resolved};
use crate::output::{ensure_dir, shape_svg, write_csv, write_text};

pub fn verify(global: &GlobalArgs, n: Option<usize>, inject_fault: bool) -> Result<ExitCode> {
    let table = match (&global.group_file, &global.group) {
        (Some(path), _) => Some(FiniteGroupTable::load(path)?),
        (None, Some(name)) => Some(FiniteGroupTable::builtin(name)?),
        (None, None) => None,
    };
    let mut config = match (table, n) {
        (Some(t), n) => VerifyConfig::single(t, n.unwrap_or(5))?,
        (None, Some(n)) => {
            let mut c = VerifyConfig::default();
            for (t, cap) in &mut c.targets {
                *cap = if t.num_irreps() <= 2 { n } else { n.min(3) };
            }
            c
        }
        (None, None) => VerifyConfig::default(),
    };
    config.inject_fault = inject_fault;
    let summary = run_all(&config)?;
    for r in &summary.reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status}  {}  ({} checks)", r.name, r.checked);
        for f in r.failures.iter().take(5) {
            println!("      {f}");
        }
        if r.failures.len() > 5 {
            println!("      ... {} more", r.failures.len() - 5);
        }
    }
    let failed = summary.failed().count();
    println!("{} identities, {} failed", summary.reports.len(), failed);
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[derive(Serialize)]
struct SimCsvRow<'a> {
    t: f64,
    zeta: &'a str,
    quantity: String,
    mean: f64,
    se: f64,
}

#[derive(Serialize)]
struct ComparisonRow<'a> {
    t: f64,
    zeta: &'a str,
    quantity: String,
    mc_mean: f64,
    mc_se: f64,
    theory: f64,
    z_score: f64,
}

fn sim_rows(report: &SimReport) -> Vec<SimCsvRow<'_>> {
    let mut out = Vec::new();
    for row in &report.rows {
        out.push(SimCsvRow {
            t: row.t,
            zeta: &row.zeta,
            quantity: "size".into(),
            mean: row.size.mean,
            se: row.size.se,
        });
        for (j, s) in row.cumulants.iter().enumerate() {
            out.push(SimCsvRow {
                t: row.t,
                zeta: &row.zeta,
                quantity: format!("R{}", j + 2),
                mean: s.mean,
                se: s.se,
            });
        }
    }
    out
}

/// Initial scaled cumulants `R_1 .. R_{order}` per irrep.
fn initial_cumulants(cfg: &Resolved, order: usize) -> Result<Vec<CumulantSeq<f64>>> {
    let sigma2 = cfg.table.plancherel_weights_as::<f64>();
    Ok(match cfg.initial()? {
        Initial::Plancherel => sigma2
            .iter()
            .map(|s| {
                let mut c = CumulantSeq::zeros(order);
                c.set(2, *s);
                c
            })
            .collect(),
        Initial::Diagram(d) => d
            .entries()
            .iter()
            .map(|e| CumulantSeq::new(rescaled_cumulants(e, cfg.n, order)))
            .collect(),
    })
}

fn limit_spec(cfg: &Resolved, order: usize) -> Result<EvolutionSpec> {
    let clock = match cfg.evolution_clock() {
        Ok(c) => c,
        // a_k(t) for other exponents comes from the general limit formula
        Err(_) => EvolutionClock::StableHalf,
    };
    Ok(EvolutionSpec::new(
        cfg.table.clone(),
        clock,
        initial_cumulants(cfg, order)?,
    )?)
}

fn limit_cumulants(cfg: &Resolved, spec: &EvolutionSpec, t: f64) -> Result<Vec<CumulantSeq<f64>>> {
    Ok(evolve_cumulants_clock(
        spec,
        t,
        LimitClock::from_pausing(&cfg.pausing),
    )?)
}

pub fn simulate(cfg: &Resolved, compare: bool) -> Result<ExitCode> {
    ensure_dir(&cfg.output)?;
    println!("{}", serde_json::to_string_pretty(cfg)?);
    let sim = SimConfig {
        n: cfg.n,
        table: cfg.table.clone(),
        ensemble: cfg.ensemble()?,
        pausing: cfg.pausing,
        clock: cfg.pausing.clock_mode(),
        t_grid: cfg.t_grid.clone(),
        samples: cfg.samples,
        order: cfg.order,
        seed: cfg.seed,
    };
    let report = estimate_with_workers(&sim, cfg.workers)?;
    let csv = write_csv(&cfg.output, "simulate.csv", &sim_rows(&report))?;
    let json = write_text(
        &cfg.output,
        "simulate.json",
        &serde_json::to_string_pretty(&report)?,
    )?;
    println!("wrote {} and {}", csv.display(), json.display());
    if compare {
        let spec = limit_spec(cfg, cfg.order + 1)?;
        let mut rows = Vec::new();
        for &t in &cfg.t_grid {
            let theory = limit_cumulants(cfg, &spec, t)?;
            for (z, irrep) in cfg.table.irreps().iter().enumerate() {
                let row = report
                    .row(t, &irrep.label)
                    .context("missing simulation row")?;
                let mut push = |quantity: String, mc: resind::simulate::Stat, th: f64| {
                    let diff = (mc.mean - th).abs();
                    let z_score = if mc.se > 0.0 {
                        diff / mc.se
                    } else if diff < 1e-12 {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    rows.push(ComparisonRow {
                        t,
                        zeta: &irrep.label,
                        quantity,
                        mc_mean: mc.mean,
                        mc_se: mc.se,
                        theory: th,
                        z_score,
                    });
                };
                push("size".into(), row.size, theory[z].get(2));
                for (j, s) in row.cumulants.iter().enumerate() {
                    push(format!("R{}", j + 2), *s, theory[z].get(j + 2));
                }
            }
        }
        let path = write_csv(&cfg.output, "comparison.csv", &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ARow {
    t: f64,
    k: usize,
    a_limit: f64,
    a_finite: f64,
    a_finite_se: f64,
}

pub fn theory_a(cfg: &Resolved) -> Result<ExitCode> {
    ensure_dir(&cfg.output)?;
    let clock = LimitClock::from_pausing(&cfg.pausing);
    let tau = cfg.pausing.clock_mode().tau(cfg.n);
    let mut rng = sample_rng(cfg.seed, 0);
    let mut rows = Vec::new();
    for &t in &cfg.t_grid {
        for k in 1..=(cfg.order + 1).min(cfg.n) {
            let finite = a_exact(
                k,
                cfg.n,
                t * tau,
                &cfg.pausing,
                cfg.samples.max(2),
                &mut rng,
            )?;
            rows.push(ARow {
                t,
                k,
                a_limit: a_limit(k, t, clock)?,
                a_finite: finite.value,
                a_finite_se: finite.std_err,
            });
        }
    }
    let path = write_csv(&cfg.output, "theory_a.csv", &rows)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CumulantRow<'a> {
    t: f64,
    zeta: &'a str,
    k: usize,
    value: f64,
}

pub fn theory_evolve(cfg: &Resolved) -> Result<ExitCode> {
    ensure_dir(&cfg.output)?;
    let spec = limit_spec(cfg, cfg.order + 1)?;
    let mut rows = Vec::new();
    for &t in &cfg.t_grid {
        let c = limit_cumulants(cfg, &spec, t)?;
        for (z, irrep) in cfg.table.irreps().iter().enumerate() {
            for k in 1..=cfg.order + 1 {
                rows.push(CumulantRow {
                    t,
                    zeta: &irrep.label,
                    k,
                    value: c[z].get(k),
                });
            }
        }
    }
    let path = write_csv(&cfg.output, "theory_evolve.csv", &rows)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EnsembleRow<'a> {
    t: f64,
    zeta: &'a str,
    k: usize,
    closed_form: f64,
    generic: f64,
}

#[derive(Serialize)]
struct LevyRow<'a> {
    t: f64,
    zeta: &'a str,
    j: usize,
    moment: f64,
}

#[derive(Serialize)]
struct ThomaRow<'a> {
    n: u64,
    zeta: &'a str,
    j: usize,
    power_sum: f64,
    dilated_moment: f64,
    limit_moment: f64,
}

pub fn theory_ensemble(cfg: &Resolved) -> Result<ExitCode> {
    ensure_dir(&cfg.output)?;
    let clock = cfg.evolution_clock()?;
    let order = cfg.order + 1;
    let (spec, preset) = ensemble_preset(
        cfg.preset_kind(),
        cfg.preset_params.clone(),
        &cfg.table,
        clock,
        order,
    )?;
    let labels: Vec<&str> = cfg
        .table
        .irreps()
        .iter()
        .map(|i| i.label.as_str())
        .collect();
    let (mut cumulants, mut levy) = (Vec::new(), Vec::new());
    for &t in &cfg.t_grid {
        let generic = resind::evolution::evolve_cumulants(&spec, t)?;
        let flowed = levy_flow(&spec, t)?;
        for (z, label) in labels.iter().enumerate() {
            let closed = match clock {
                EvolutionClock::Exponential { mean } => {
                    preset.exponential_coefficients(z, t, mean, order)?
                }
                EvolutionClock::StableHalf => preset.stable_coefficients(z, t, order)?,
            };
            for k in 1..=order {
                cumulants.push(EnsembleRow {
                    t,
                    zeta: label,
                    k,
                    closed_form: closed.get(k),
                    generic: generic[z].get(k),
                });
            }
            for j in 0..order.saturating_sub(1) {
                levy.push(LevyRow {
                    t,
                    zeta: label,
                    j,
                    moment: flowed[z].moment(j as u32)?,
                });
            }
        }
    }
    let a = write_csv(&cfg.output, "ensemble_cumulants.csv", &cumulants)?;
    let b = write_csv(&cfg.output, "ensemble_levy.csv", &levy)?;
    println!("wrote {} and {}", a.display(), b.display());

    let family = ThomaFamily::new(
        cfg.preset_kind(),
        cfg.preset_params.clone(),
        cfg.table.clone(),
    )?;
    let n = cfg.n as u64;
    let omega = family.param::<f64>(n)?;
    let taus = thoma_measure(&omega);
    let root = (n as f64).sqrt();
    let mut rows = Vec::new();
    for (z, label) in labels.iter().enumerate() {
        let comp = &omega.components[z];
        println!(
            "omega(n = {n}) {label}: c = {:.6}, alpha_1 = {:.6e}, beta_1 = {:.6e}",
            comp.c,
            comp.alpha.leading(),
            comp.beta.leading()
        );
        let limit = preset.levy0(z);
        for j in 1..=order {
            rows.push(ThomaRow {
                n,
                zeta: label,
                j,
                power_sum: omega.power_sum(z, j as u32),
                dilated_moment: taus[z].dilated_moment(&root, j as u32 - 1),
                limit_moment: limit.moment(j as u32 - 1)?,
            });
        }
    }
    let path = write_csv(&cfg.output, "thoma.csv", &rows)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ShapeRow<'a> {
    zeta: &'a str,
    t: f64,
    x: f64,
    omega: f64,
}

pub fn shape(cfg: &Resolved, svg: bool) -> Result<ExitCode> {
    ensure_dir(&cfg.output)?;
    let clock = cfg.evolution_clock()?;
    let (spec, _) = ensemble_preset(
        cfg.preset_kind(),
        cfg.preset_params.clone(),
        &cfg.table,
        clock,
        cfg.order + 1,
    )?;
    let labels: Vec<&str> = cfg
        .table
        .irreps()
        .iter()
        .map(|i| i.label.as_str())
        .collect();
    let mut all = Vec::new();
    for &t in &cfg.t_grid {
        // one grid for every irrep at this time, wide enough for the widest support
        let cumulants = resind::evolution::evolve_cumulants(&spec, t)?;
        let flowed = levy_flow(&spec, t)?;
        let w = cumulants
            .iter()
            .zip(&flowed)
            .map(|(c, l)| {
                let (a, b) = l.support();
                support_half_width(c, a.abs().max(b.abs()))
            })
            .fold(1.0, f64::max);
        let grid = Grid::new(-1.1 * w, 1.1 * w, cfg.points)?;
        for (z, d) in shapes_at_time(&spec, t, Some(grid))?
            .into_iter()
            .enumerate()
        {
            all.push((z, t, d));
        }
    }
    let rows: Vec<ShapeRow> = all
        .iter()
        .flat_map(|(z, t, d)| {
            let zeta = labels[*z];
            d.x.iter().zip(&d.omega).map(move |(&x, &omega)| ShapeRow {
                zeta,
                t: *t,
                x,
                omega,
            })
        })
        .collect();
    let path = write_csv(&cfg.output, "shape.csv", &rows)?;
    println!("wrote {}", path.display());
    if svg {
        let curves: Vec<(String, _)> = all
            .iter()
            .map(|(z, t, d)| (format!("{} t={t}", labels[*z]), d))
            .collect();
        let path = write_text(&cfg.output, "shape.svg", &shape_svg(&curves))?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn characters(cfg: &Resolved, lambda: Option<&str>) -> Result<ExitCode> {
    cfg.table.require_exact()?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["irrep", "class_type", "normalized_character"])?;
    match lambda {
        Some(text) => {
            let l = MultiDiagram::parse(text, &cfg.table)?;
            for k in 0..=l.size() {
                for rho in ClassType::enumerate(k, cfg.table.num_classes()) {
                    let v = wreath_normalized_character(&l, &rho, &cfg.table)?;
                    w.write_record([
                        l.display_with(&cfg.table),
                        rho.display_with(&cfg.table),
                        fmt_exact_complex(&v),
                    ])?;
                }
            }
        }
        None => {
            let t = normalized_character_table(cfg.n, &cfg.table)?;
            for (l, row) in t.irreps.iter().zip(&t.values) {
                for (rho, v) in t.classes.iter().zip(row) {
                    w.write_record([
                        l.display_with(&cfg.table),
                        rho.display_with(&cfg.table),
                        fmt_exact_complex(v),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn spectrum(cfg: &Resolved) -> Result<ExitCode> {
    let cm = ChainMatrices::build(cfg.n, &cfg.table)?;
    let report = verify_spectrum(&cm)?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["class_type", "k", "fixed_points", "eigenvalue"])?;
    for k in 0..=cfg.n {
        for rho in ClassType::enumerate(k, cfg.table.num_classes()) {
            let ev = resind::characters::eigenvalue(&rho, cfg.n);
            w.write_record([
                rho.display_with(&cfg.table),
                k.to_string(),
                rho.fixed_points().to_string(),
                fmt_rational(&ev),
            ])?;
        }
    }
    w.flush()?;
    eprintln!(
        "eigen-identity over {} states: {} ({} checks)",
        cm.states.len(),
        if report.passed() { "PASS" } else { "FAIL" },
        report.checked
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

pub fn tables(global: &GlobalArgs) -> Result<ExitCode> {
    if global.group.is_some() || global.group_file.is_some() {
        let table = match (&global.group_file, &global.group) {
            (Some(path), _) => FiniteGroupTable::load(path)?,
            (None, Some(name)) => FiniteGroupTable::builtin(name)?,
            (None, None) => bail!("no group given"),
        };
        println!("{}", table.to_json());
        return Ok(ExitCode::SUCCESS);
    }
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["name", "order", "classes", "irreps", "exact"])?;
    for name in [
        "trivial",
        "cyclic(2)",
        "cyclic(3)",
        "cyclic(4)",
        "s3",
        "dihedral(4)",
    ] {
        let t = FiniteGroupTable::builtin(name)?;
        w.write_record([
            t.name().to_string(),
            t.order().to_string(),
            t.num_classes().to_string(),
            t.num_irreps().to_string(),
            t.is_exact().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
