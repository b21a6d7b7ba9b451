//! Ranks every coupling depth k1 of an (n, k | k1) code family by block
//! failure probability, including the uncoupled baseline k1 = 0.
//!
//! Run with: cargo run --release --example parameter_sweep

use pumprob::{parameter_sweep, CodeMode, Result};

fn main() -> Result<()> {
    let rows = parameter_sweep(15, 5, &[0.3, 0.5], 0..=5, 100, 50)?;
    println!("n = 15, k = 5, sorted by ascending failure probability");
    println!(
        "{:>3}  {:>4}  {:>16}  {:>5}  {:>22}",
        "k1", "p", "radii", "mode", "failure"
    );
    for row in rows {
        let tau01 = row
            .radii
            .tau_01
            .map_or("inf".to_string(), |v| v.to_string());
        println!(
            "{:>3}  {:>4}  ({:>2},{:>2},{:>2},{:>3})  {:>5}  {:>22.15e}",
            row.k1,
            row.p,
            row.radii.tau_alpha,
            row.radii.tau_0,
            row.radii.tau_1,
            tau01,
            match row.mode {
                None => "ind",
                Some(CodeMode::Pum) => "pum",
                Some(CodeMode::Um) => "um",
            },
            row.failure
        );
    }
    Ok(())
}
