use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polydual::analysis::{evaluate_lower, evaluate_upper, hypothesis_report, verify_main_theorem, SubsetMode};
use polydual::converter::{dual_family_oracle, DEFAULT_MAX_ITER, DEFAULT_ORACLE_BOUND};
use polydual::harness::{run_experiment, Shape, TrialConfig};
use polydual::reorder::{locate_strictly_next, make_selection, reorder_to_position, Enumeration};
use polydual::{dual_family, iterate_until_cycle, Family, Vector};

/// Exact duality of polytope families: dual families, cycles, hypothesis
/// checks and seeded experiments.
#[derive(Parser)]
#[command(name = "polydual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dual family.
    Dualize {
        /// Family JSON file, or `-` for stdin.
        family: PathBuf,
        /// Use the exhaustive reference enumeration (small ground sets only).
        #[arg(long)]
        oracle: bool,
    },
    /// Iterate the dual until a family repeats; prints the trajectory.
    Iterate {
        family: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Move one point of a compatible enumeration to a later position.
    Reorder {
        family: PathBuf,
        /// Starting direction, e.g. `1,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// 1-based position of the point to move.
        #[arg(long)]
        from: usize,
        /// 1-based target position; defaults to the next one.
        #[arg(long)]
        to: Option<usize>,
    },
    /// Report the extreme-point and minimal-subset hypotheses.
    Check { family: PathBuf },
    /// Compute three successive duals and check the predicted structure.
    VerifyTheorem {
        family: PathBuf,
        /// Require only the subsets some ray isolates at the bottom.
        #[arg(long)]
        h2_prime: bool,
    },
    /// Evaluate the family as a min-max (upper) or max-min (lower) function.
    Eval {
        family: PathBuf,
        #[arg(long, value_enum)]
        mode: EvalMode,
        /// Point of evaluation, e.g. `2,3/4`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Run a seeded batch of iterations and write a report.
    Experiment {
        #[arg(long, value_enum, default_value = "random")]
        shape: Shape,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "dim", default_value_t = 2)]
        dimension: usize,
        /// Upper bound on points per trial (on intervals for `interval1d`).
        #[arg(long, default_value_t = 6)]
        points: usize,
        /// Bound on coordinate numerators.
        #[arg(long, default_value_t = 8)]
        coord_bound: i64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Leave out timings so equal runs give identical output.
        #[arg(long)]
        canonical_output: bool,
        /// Where `report.json`, `summary.csv` and `counterexamples/` go.
        #[arg(long, default_value = "experiment-out")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Upper,
    Lower,
}

fn read_family(path: &Path) -> anyhow::Result<Family> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Family::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct ReorderOutput<'a> {
    direction: &'a Vector,
    order: &'a [usize],
    next_steps: usize,
    adjustments: usize,
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Dualize { family, oracle } => {
            let f = read_family(&family)?;
            let d = if oracle {
                dual_family_oracle(&f, DEFAULT_ORACLE_BOUND)?
            } else {
                dual_family(&f)?
            };
            print_json(&d.to_json_value())?;
        }
        Command::Iterate { family, max_iter } => {
            let f = read_family(&family)?;
            print_json(&iterate_until_cycle(&f, max_iter)?)?;
        }
        Command::Reorder {
            family,
            direction,
            from,
            to,
        } => {
            let f = read_family(&family)?;
            let d: Vector = direction.parse()?;
            let g = f.ground();
            let sel = make_selection(g)?;
            let e = Enumeration::compatible(g, &d)?;
            let out = match to {
                None => locate_strictly_next(g, &e, from, &sel)?,
                Some(p) => reorder_to_position(g, &e, from, p, &sel)?,
            };
            print_json(&ReorderOutput {
                direction: out.direction(),
                order: &out.enumeration.order,
                next_steps: out.next_steps,
                adjustments: out.adjustments,
            })?;
        }
        Command::Check { family } => {
            let f = read_family(&family)?;
            print_json(&hypothesis_report(&f))?;
        }
        Command::VerifyTheorem { family, h2_prime } => {
            let f = read_family(&family)?;
            let mode = if h2_prime {
                SubsetMode::BottomSubsets
            } else {
                SubsetMode::AllSubsets
            };
            let report = verify_main_theorem(&f, mode)?;
            print_json(&report)?;
            if !report.passed {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Eval { family, mode, at } => {
            let f = read_family(&family)?;
            let x: Vector = at.parse()?;
            let v = match mode {
                EvalMode::Upper => evaluate_upper(&f, &x)?,
                EvalMode::Lower => evaluate_lower(&f, &x)?,
            };
            println!("{v}");
        }
        Command::Experiment {
            shape,
            trials,
            seed,
            dimension,
            points,
            coord_bound,
            max_iter,
            canonical_output,
            out_dir,
        } => {
            let cfg = TrialConfig {
                shape,
                dimension,
                points,
                coord_bound,
                trials,
                seed,
                max_iter,
            };
            let report = run_experiment(&cfg, canonical_output)?;
            std::fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let json = serde_json::to_string_pretty(&report)?;
            std::fs::write(out_dir.join("report.json"), &json)?;
            std::fs::write(out_dir.join("summary.csv"), report.to_csv()?)?;
            for entry in &report.counterexamples {
                if let Some(cert) = &entry.certificate {
                    cert.write_to(&out_dir.join("counterexamples"), &format!("trial-{}", entry.trial))?;
                }
            }
            println!("{json}");
            if report.errors > 0 || !report.theorem_failures.is_empty() {
                bail!(
                    "{} trials failed, {} theorem checks failed",
                    report.errors,
                    report.theorem_failures.len()
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
