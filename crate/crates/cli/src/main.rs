// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! `qpde`: run the PDE-to-circuit pipeline from a problem file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qpde::pipeline::{self, Mode, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "qpde", version, about = "Compile, simulate and check linear PDEs with Robin boundaries")]
struct Cli {
    /// Problem file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Execution mode, overriding the problem file.
    #[arg(long, global = true, value_name = "matrix|circuit")]
    mode: Option<Mode>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Evolution times, overriding the problem file.
    #[arg(long, global = true, value_delimiter = ',', value_name = "T,..")]
    times: Option<Vec<f64>>,
    /// Log progress (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Assemble the finite-difference system and write it under `discretize/`.
    Discretize,
    /// Build the Hamiltonian block-encoding and write it under `encode/`.
    Encode,
    /// Evolve to every requested time and write the recovered vectors.
    Evolve,
    /// Evolve, run the forward-Euler reference and write solutions and metrics.
    Compare,
    /// Write gate counts, formula values and classical cost estimates.
    Resources,
}

fn execute(cli: &Cli) -> qpde::Result<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| qpde::Error::Config("--config <path> is required".into()).at("config"))?;
    let mut cfg = RunConfig::from_path(path, &cli.out)?;
    if let Some(mode) = cli.mode {
        cfg = cfg.with_mode(mode);
    }
    if let Some(times) = &cli.times {
        cfg.file.run.times = times.clone();
    }
    cfg.validate().map_err(|e| e.at("config"))?;
    match cli.command {
        Command::Discretize => {
            let d = pipeline::discretize(&cfg)?;
            pipeline::write_discretization(&cfg, &d)?;
            println!("{} grid points, generator nnz {}", d.system.dim(), d.generator.nnz());
        }
        Command::Encode => {
            let d = pipeline::discretize(&cfg)?;
            let enc = pipeline::encode(&cfg, &d)?;
            pipeline::write_encoding(&cfg, &enc)?;
            let r = enc.resource_report();
            println!(
                "{} qubits, alpha {:.6e}, {} one-qubit gates, {} CNOTs",
                enc.handle.circuit().qubit_count(),
                r.alpha,
                r.one_qubit,
                r.cnot
            );
        }
        Command::Evolve => {
            let d = pipeline::discretize(&cfg)?;
            let enc = match cfg.mode() {
                Mode::Circuit => Some(pipeline::encode(&cfg, &d)?),
                Mode::Matrix => None,
            };
            for &t in &cfg.file.run.times {
                let ev = pipeline::evolve(&cfg, &d, enc.as_ref(), t)?;
                pipeline::write_evolution(&cfg, &d, &ev)?;
                println!("t = {t}: success probability {:.6e}", ev.success_probability());
            }
        }
        Command::Compare => {
            let summary = pipeline::run(&cfg)?;
            for m in &summary.metrics {
                println!(
                    "t = {}: fidelity {:.8}, mse {:.6e}, success probability {:.6e}",
                    m.t, m.fidelity, m.mse, m.success_probability
                );
            }
        }
        Command::Resources => {
            let d = pipeline::discretize(&cfg)?;
            let enc = pipeline::encode(&cfg, &d)?;
            let res = pipeline::resources(&cfg, &d, Some(&enc))?;
            pipeline::write_resources(&cfg, &res)?;
            print!("{}", pipeline::resources_text(&res));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpde: {e}");
            ExitCode::FAILURE
        }
    }
}
