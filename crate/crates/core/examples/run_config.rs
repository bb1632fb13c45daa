// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Run a problem file end to end: `cargo run --example run_config -- <file> <out>`.

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().ok_or("usage: run_config <problem file> <out dir>")?;
    let out = args.next().unwrap_or_else(|| "out".into());
    let cfg = qpde::pipeline::RunConfig::from_path(&path, out)?;
    let summary = qpde::pipeline::run(&cfg)?;
    for m in &summary.metrics {
        println!("t = {}: fidelity {:.8}, mse {:.3e}, success {:.3e}", m.t, m.fidelity, m.mse, m.success_probability);
    }
    Ok(())
}
