//! Library side of the command-line harness: run configuration, trace CSV
//! IO, and the subcommand implementations. `main.rs` is a thin wrapper so
//! that integration tests can drive everything in-process.

pub mod analyze;
pub mod config;
pub mod run;
pub mod trace;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "bounce",
    about = "Sample-efficient black-box minimization over combinatorial, continuous, and mixed spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an optimization study and write one trace row per evaluation.
    Run(run::RunArgs),
    /// Aggregate trace files into a mean best-value curve with standard
    /// errors.
    Analyze(analyze::AnalyzeArgs),
    /// Probability calculators and sampling simulators for dictionary-based
    /// embeddings.
    Prob(ProbArgs),
}

#[derive(clap::Args, Debug)]
pub struct ProbArgs {
    #[command(subcommand)]
    pub command: ProbCommand,
}

#[derive(Subcommand, Debug)]
pub enum ProbCommand {
    /// Probability that a random dictionary contains an all-equal binary
    /// point.
    ZeroSequency {
        /// Problem dimensionality D.
        #[arg(long)]
        d: usize,
        /// Dictionary size m.
        #[arg(long)]
        m: usize,
    },
    /// Probability that a random dictionary contains a constant categorical
    /// point.
    AllCategory {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        /// Categories per variable.
        #[arg(long)]
        tau: u32,
    },
    /// Simulate the floor-based category allocation and report per-category
    /// frequencies as CSV.
    BiasHist {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tau: u32,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the unbiased largest-remainder allocation instead.
        #[arg(long)]
        largest_remainder: bool,
        /// Write the histogram CSV here instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

pub fn prob_command(args: &ProbArgs) -> anyhow::Result<String> {
    use bounce::analysis;
    match &args.command {
        ProbCommand::ZeroSequency { d, m } => {
            Ok(format!("{:.6}\n", analysis::p_zero_sequency(*d, *m)))
        }
        ProbCommand::AllCategory { d, m, tau } => {
            anyhow::ensure!(*tau >= 2, "tau must be at least 2");
            Ok(format!("{:.6e}\n", analysis::p_all_one_category(*d, *m, *tau)))
        }
        ProbCommand::BiasHist {
            d,
            tau,
            trials,
            seed,
            largest_remainder,
            output,
        } => {
            anyhow::ensure!(*tau >= 2, "tau must be at least 2");
            anyhow::ensure!(*trials >= 1, "trials must be at least 1");
            let allocation = if *largest_remainder {
                analysis::Allocation::LargestRemainder
            } else {
                analysis::Allocation::Floor
            };
            let hist = analysis::rounding_bias_histogram(*d, *tau, *trials, *seed, allocation);
            let mut out = String::from("category,count,frequency,std_error\n");
            let freqs = hist.frequencies();
            let errs = hist.std_errors();
            for (i, ((count, freq), err)) in
                hist.counts.iter().zip(&freqs).zip(&errs).enumerate()
            {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    count,
                    trace::format_float(*freq),
                    trace::format_float(*err)
                ));
            }
            if let Some(path) = output {
                std::fs::write(path, &out)?;
                Ok(format!("wrote {}\n", path.display()))
            } else {
                Ok(out)
            }
        }
    }
}
