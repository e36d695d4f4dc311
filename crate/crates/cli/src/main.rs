use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oscillab_cli::error::{EXIT_OK, EXIT_VERIFICATION};
use oscillab_cli::simulate::cmd_simulate;
use oscillab_cli::spectrum::cmd_spectrum;
use oscillab_cli::suites::{format_table, run_suite, Suite, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "oscillab", version, about = "Deformed and nonstandard oscillators: scenarios, spectra, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the trajectory CSV and invariant report
    Simulate { config: PathBuf },
    /// Compare the ladder spectrum with the discretized Hamiltonian
    Spectrum { config: PathBuf },
    /// Run a verification suite and print a pass/fail table
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate { config } => cmd_simulate(&config).map(|r| {
            for inv in &r.invariants {
                println!(
                    "{:<6} initial {:>24}  max_abs_drift {:.3e}  max_rel_drift {:.3e}",
                    inv.invariant, inv.initial, inv.max_abs_drift, inv.max_rel_drift
                );
            }
            println!("termination {} at t = {}", r.termination, r.t_end);
        }),
        Command::Spectrum { config } => cmd_spectrum(&config).map(|d| {
            for (n, e) in d.numeric.iter().enumerate() {
                match d.ladder.get(n) {
                    Some(l) => println!("n={n:<3} numeric {e:<22} ladder {l:<22} abs_diff {:.3e}", d.abs_diff[n]),
                    None => println!("n={n:<3} numeric {e}"),
                }
            }
        }),
        Command::Verify { suite, seed, jobs } => {
            let outcomes = run_suite(suite, seed, jobs);
            print!("{}", format_table(&outcomes));
            let ok = outcomes.iter().all(|o| o.passed());
            return ExitCode::from(if ok { EXIT_OK } else { EXIT_VERIFICATION });
        }
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("oscillab: {e}");
            e.to_exit()
        }
    }
}
