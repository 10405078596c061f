//! `resind`: exact verification, simulation, theory curves and limit shapes
//! for Res-Ind chains on multi-diagrams.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ClockArgs, GlobalArgs, PresetArgs, Resolved, RunArgs, Sources};

#[derive(Parser)]
#[command(
    name = "resind",
    version,
    about = "Res-Ind chains on multi-diagrams and their limit shapes"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact invariant suites; exits with status 1 if any identity fails.
    Verify {
        /// Largest n for the chain and character suites.
        #[arg(long)]
        n: Option<usize>,
        /// Test hook: corrupt one transition probability.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Monte Carlo estimates of sizes and scaled cumulants (CSV + JSON).
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clock: ClockArgs,
        /// Skip the comparison with the limit theory.
        #[arg(long)]
        no_compare: bool,
    },
    /// Limit theory curves.
    Theory {
        #[command(subcommand)]
        which: Theory,
    },
    /// Limit shapes of a preset ensemble (CSV and SVG).
    Shape {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clock: ClockArgs,
        #[command(flatten)]
        preset: PresetArgs,
        /// Do not write the SVG.
        #[arg(long)]
        no_svg: bool,
    },
    /// Normalized wreath characters as CSV on stdout.
    Characters {
        #[arg(long)]
        n: Option<usize>,
        /// A single multi-diagram, e.g. `1:2,1;chi1:1`.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Eigenvalues of the exact chain, checked against the character columns.
    Spectrum {
        #[arg(long)]
        n: Option<usize>,
    },
    /// List builtin tables, or print the selected table as JSON.
    Tables,
}

#[derive(Subcommand)]
enum Theory {
    /// `a_k(t)` in the limit and at finite n.
    A {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clock: ClockArgs,
    },
    /// Cumulant flow from an initial diagram or the Plancherel ensemble.
    Evolve {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clock: ClockArgs,
    },
    /// Closed-form ensembles: cumulants, Lévy moments and Thoma parameters.
    Ensemble {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clock: ClockArgs,
        #[command(flatten)]
        preset: PresetArgs,
    },
}

fn resolve(
    global: &GlobalArgs,
    run: Option<&RunArgs>,
    clock: Option<&ClockArgs>,
    preset: Option<&PresetArgs>,
) -> anyhow::Result<Resolved> {
    Resolved::from_sources(Sources {
        global,
        run,
        clock,
        preset,
    })
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { n, inject_fault } => commands::verify(g, *n, *inject_fault),
        Command::Simulate {
            run,
            clock,
            no_compare,
        } => commands::simulate(&resolve(g, Some(run), Some(clock), None)?, !no_compare),
        Command::Theory { which } => match which {
            Theory::A { run, clock } => {
                commands::theory_a(&resolve(g, Some(run), Some(clock), None)?)
            }
            Theory::Evolve { run, clock } => {
                commands::theory_evolve(&resolve(g, Some(run), Some(clock), None)?)
            }
            Theory::Ensemble { run, clock, preset } => {
                commands::theory_ensemble(&resolve(g, Some(run), Some(clock), Some(preset))?)
            }
        },
        Command::Shape {
            run,
            clock,
            preset,
            no_svg,
        } => commands::shape(&resolve(g, Some(run), Some(clock), Some(preset))?, !no_svg),
        Command::Characters { n, lambda } => {
            let run = RunArgs {
                n: n.or(Some(3)),
                ..Default::default()
            };
            commands::characters(&resolve(g, Some(&run), None, None)?, lambda.as_deref())
        }
        Command::Spectrum { n } => {
            let run = RunArgs {
                n: n.or(Some(3)),
                ..Default::default()
            };
            commands::spectrum(&resolve(g, Some(&run), None, None)?)
        }
        Command::Tables => commands::tables(g),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
