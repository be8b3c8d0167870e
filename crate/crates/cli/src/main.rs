//! Command-line entry point. Exit codes: 0 on success, 1 when a command's
//! checks fail, 2 on usage or configuration errors.

use clap::{Parser, Subcommand};
use oqam_eq_cli::config::RunConfig;
use oqam_eq_cli::experiments::{
    run_ber_block, run_mmse_sweep, run_nlms, run_timing, run_verify, CommandOutput,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "oqam-eq", version, about = "Equalizer experiments for offset-QAM links")]
struct Cli {
    /// Configuration file (TOML key-value document); defaults apply otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Trial-count override: channel draws for verify and mmse-sweep,
    /// adaptive runs for nlms, repetitions for timing, and minimum frames
    /// per point for ber-block.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run the output-equivalence and MMSE identity suites.
    Verify,
    /// Average-MMSE sweep over the SNR grid.
    MmseSweep,
    /// Monte Carlo bit error rate of the three block equalizers.
    BerBlock,
    /// Wall-clock comparison of the widely linear and real-only block solves.
    Timing,
    /// Adaptive NLMS convergence and payload BER study.
    Nlms,
}

fn effective_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.display().to_string();
    }
    if let Some(trials) = cli.trials {
        if trials == 0 {
            return Err("--trials must be >= 1".into());
        }
        match cli.command {
            Command::Verify | Command::MmseSweep => cfg.channels = trials,
            Command::Nlms => cfg.nlms_runs = trials,
            Command::Timing => cfg.timing_reps = trials,
            Command::BerBlock => cfg.min_bits = (trials * cfg.two_nu) as u64,
        }
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn write_outputs(cfg: &RunConfig, out: &CommandOutput) -> std::io::Result<()> {
    let dir = PathBuf::from(&cfg.out_dir);
    std::fs::create_dir_all(&dir)?;
    for (name, content) in &out.files {
        std::fs::write(dir.join(name), content)?;
        println!("wrote {}", dir.join(name).display());
    }
    std::fs::write(dir.join("report.txt"), &out.report)?;
    println!("wrote {}", dir.join("report.txt").display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match effective_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Verify => run_verify(&cfg).map(|(_, out)| out),
        Command::MmseSweep => run_mmse_sweep(&cfg).map(|(_, out)| out),
        Command::BerBlock => run_ber_block(&cfg).map(|(_, out)| out),
        Command::Timing => run_timing(&cfg).map(|(_, out)| out),
        Command::Nlms => run_nlms(&cfg).map(|(_, out)| out),
    };
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_outputs(&cfg, &out) {
        eprintln!("error writing outputs: {e}");
        return ExitCode::from(1);
    }
    print!("{}", out.report);
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
