use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evs_lab::report::{exit_code, render, run_suite, Format, RunConfig, Suite};

/// Exact checks of exponential vector space laws and set properties.
#[derive(Parser, Debug)]
#[command(name = "evs-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Sample budget per check (corpora and pair counts are capped separately).
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, env = "EVS_LAB_SEED", default_value_t = 42)]
    seed: u64,
    /// text or jsonlines
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Exit 0 even when audit or local-base findings are Refuted.
    #[arg(long, global = true)]
    findings_ok: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A1-A6 and the partial-order laws, with planted faults where shipped.
    Axioms { instance: String },
    /// Closure laws for absorbing and balanced sets; decisions for --input sets.
    Sets {
        instance: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Radial check with explicit separating sets.
    Radial { instance: String },
    /// Boundedness laws and decisions for --input sets.
    Bounded {
        instance: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Local-base conditions for the family in --input, one set per line.
    Localbase {
        instance: String,
        #[arg(long)]
        input: PathBuf,
        /// Also include every [0,1/m), m >= 1, in the family.
        #[arg(long)]
        reciprocal_tail: bool,
    },
    /// Finest-topology audit of the generators in --input.
    Audit {
        #[arg(long)]
        input: PathBuf,
    },
    /// identity, doubling, cone-axis:n or squaring.
    Morphism { name: String },
    /// Every suite available for the instance.
    All { instance: String },
}

fn config(cli: Cli) -> RunConfig {
    let mut reciprocal_tail = false;
    let (suite, target, input) = match cli.command {
        Command::Axioms { instance } => (Suite::Axioms, instance, None),
        Command::Sets { instance, input } => (Suite::Sets, instance, input),
        Command::Radial { instance } => (Suite::Radial, instance, None),
        Command::Bounded { instance, input } => (Suite::Bounded, instance, input),
        Command::Localbase { instance, input, reciprocal_tail: tail } => {
            reciprocal_tail = tail;
            (Suite::Localbase, instance, Some(input))
        }
        Command::Audit { input } => (Suite::Audit, "halfline".into(), Some(input)),
        Command::Morphism { name } => (Suite::Morphism, name, None),
        Command::All { instance } => (Suite::All, instance, None),
    };
    RunConfig {
        suite,
        target,
        budget: cli.opts.budget,
        seed: cli.opts.seed,
        input,
        format: cli.opts.format,
        findings_ok: cli.opts.findings_ok,
        reciprocal_tail,
    }
}

fn main() -> ExitCode {
    let config = config(Cli::parse());
    match run_suite(&config) {
        Ok(records) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = out.write_all(render(&records, config.format).as_bytes());
            ExitCode::from(exit_code(&records, config.findings_ok) as u8)
        }
        Err(e) => {
            eprintln!("evs-lab: {e}");
            ExitCode::from(2)
        }
    }
}
