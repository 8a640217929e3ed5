use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use smc_mmle_cli::commands::{cmd_compare, cmd_oracle, cmd_run, load_config, Overrides};
use smc_mmle_cli::output::full;

#[derive(Parser)]
#[command(name = "smc-mmle", version, about = "Mirror descent SMC for maximum marginal likelihood")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the single algorithm of a configuration file.
    Run(RunArgs),
    /// Run every algorithm of a configuration file on the same data.
    Compare(RunArgs),
    /// Run a named check against an exact reference.
    Oracle {
        /// toy-recursion, sbm-enumeration, rate-sweep or ratio-identity
        check: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn configure_threads() {
    let Ok(v) = std::env::var("SMC_MMLE_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Err(_) => eprintln!("ignoring SMC_MMLE_THREADS={v:?}: not a number"),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => {
            let overrides = Overrides { seed: a.seed, out: a.out, reps: a.reps };
            load_config(&a.config, &overrides).and_then(|c| cmd_run(&c).map(|rows| (c, rows))).map(|(c, rows)| {
                for r in rows {
                    println!(
                        "{} rep {} seed {}: theta = [{}] after {} iterations",
                        r.algorithm,
                        r.replication,
                        r.seed,
                        r.theta.iter().map(|t| full(*t)).collect::<Vec<_>>().join(", "),
                        r.iterations
                    );
                }
                println!("wrote {}", c.run.out.display());
            })
        }
        Command::Compare(a) => {
            let overrides = Overrides { seed: a.seed, out: a.out, reps: a.reps };
            load_config(&a.config, &overrides)
                .and_then(|c| cmd_compare(&c).map(|rows| (c, rows)))
                .map(|(c, rows)| println!("{} runs, wrote {}", rows.len(), c.run.out.join("comparison.csv").display()))
        }
        Command::Oracle { check, seed } => cmd_oracle(&check, seed).map(|report| println!("{report}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
