use std::io::{stdout, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cosserat_rod::bench::cases::{Bend45Params, CaseId};
use cosserat_rod::bench::config::{parse_config, Increments};
use cosserat_rod::bench::io::{write_csv, write_csv_file};
use cosserat_rod::bench::runs::*;
use cosserat_rod::solver::{min_increment_search, newton_solve, SolverConfig, DEFAULT_SEARCH_CAP};
use cosserat_rod::{Error, Result};

// println! panics when stdout is a closed pipe
macro_rules! out {
    ($($t:tt)*) => {
        writeln!(stdout(), $($t)*)?
    };
}

#[derive(Parser)]
#[command(name = "rod", version, about = "Static Cosserat rod finite elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a TOML file.
    Solve {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a benchmark study and write its CSV files.
    Bench {
        case: CaseId,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the convergence or load-increment table of a benchmark.
    Converge { case: CaseId },
    /// Print Newton iteration statistics of a benchmark.
    Stats { case: CaseId },
}

fn solve(config: &Path, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config)?;
    let (problem, cfg, increments) = parse_config(&text)?.build()?;
    let x0 = problem.initial_state();
    let n = match increments {
        Increments::Fixed(n) => n,
        Increments::Auto => min_increment_search(&problem, &x0, &cfg, DEFAULT_SEARCH_CAP)?,
    };
    let sol = newton_solve(&problem, &x0, &SolverConfig { n_increments: n, ..cfg })?;
    let x = sol.final_state();
    std::fs::create_dir_all(out)?;
    write_csv_file(&out.join("centerline.csv"), &centerline_rows(&problem, x, PROFILE_SAMPLES)?)?;
    write_csv_file(&out.join("stress.csv"), &stress_rows(&problem, x, PROFILE_SAMPLES)?)?;
    write_csv_file(&out.join("newton.csv"), &newton_rows(&sol.report))?;
    let (mean, _) = sol.report.iteration_stats();
    out!("converged: {n} increments, {mean:.2} iterations per increment");
    Ok(())
}

fn converge(case: CaseId) -> Result<()> {
    match case {
        CaseId::Bend45 => {
            let cfg = Bend45Config::default();
            let study = run_bend45(&cfg)?;
            for &rho in &cfg.rhos {
                out!("# rho = {rho:e}");
                if let Some(note) = Bend45Params::for_rho(rho)?.tolerance_note() {
                    out!("# note: {note}");
                }
                write_csv(stdout(), &study.convergence_rows(rho))?;
                for &family in &cfg.families {
                    match study.slope(rho, family) {
                        Some(s) => out!("# slope {family}: {s:.3}"),
                        None => out!("# slope {family}: n/a"),
                    }
                }
            }
            Ok(())
        }
        CaseId::Helix => write_csv(stdout(), &run_helix(&HelixConfig::default())?.increments_rows()),
        CaseId::HelicalRollup => {
            let study = run_helical_rollup(&RollupConfig::default())?;
            for (family, run) in &study.runs {
                let min = run.as_ref().ok().and_then(|r| r.min_increments.clone()).and_then(|m| m.ok());
                match min {
                    Some(n) => out!("{family},{n}"),
                    None => out!("{family},"),
                }
            }
            Ok(())
        }
        _ => Err(Error::Config(format!("case '{case}' has no convergence study"))),
    }
}

fn stats(case: CaseId) -> Result<()> {
    match case {
        CaseId::Helix => write_csv(stdout(), &run_helix(&HelixConfig::default())?.stats_rows()),
        CaseId::HelicalRollup => {
            let study = run_helical_rollup(&RollupConfig { search: false, ..Default::default() })?;
            let rows: Vec<_> = study
                .runs
                .iter()
                .filter_map(|(f, r)| r.as_ref().ok().map(|r| newton_stats_row(*f, f64::NAN, &r.report)))
                .collect();
            write_csv(stdout(), &rows)
        }
        CaseId::Ring => {
            let cfg = RingConfig::default();
            let study = run_ring(&cfg)?;
            write_csv(stdout(), &[newton_stats_row(cfg.family, f64::NAN, &study.report)])
        }
        _ => Err(Error::Config(format!("case '{case}' has no Newton statistics"))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { config, out } => solve(&config, &out),
        Command::Bench { case, out } => {
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(case.to_string()));
            for path in run_case(case, &dir)? {
                out!("{}", path.display());
            }
            Ok(())
        }
        Command::Converge { case } => converge(case),
        Command::Stats { case } => stats(case),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::FAILURE
        }
    }
}
