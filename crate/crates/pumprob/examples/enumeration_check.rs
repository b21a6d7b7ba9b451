//! Cross-checks the closed-form success probability against brute-force
//! enumeration of all 4^L weight-class assignments for a short sequence.
//!
//! Run with: cargo run --release --example enumeration_check

use pumprob::{
    enumerate_exact_success_profile, mds_radii, pum_block_success, threshold_probabilities,
    CodeMode, Result, WeightDistribution,
};

fn main() -> Result<()> {
    let len = 8;
    let radii = mds_radii(15, 5, 2)?;
    let dist = WeightDistribution::binomial(15, 0.45)?;
    let tp = threshold_probabilities(&dist, &radii)?;

    let enumerated = enumerate_exact_success_profile(&tp, len, CodeMode::Pum)?;
    println!("PUM, L = {len}, binomial(15, 0.45), radii (8, 10, 10, 12)");
    println!("{:>3}  {:>20}  {:>20}  {:>9}", "t", "closed form", "enumeration", "|diff|");
    for t in 1..=len {
        let analytic = pum_block_success(&tp, t, len, false)?.p_success;
        let exact = enumerated[t - 1];
        println!(
            "{t:>3}  {analytic:>20.15}  {exact:>20.15}  {:>9.2e}",
            (analytic - exact).abs()
        );
    }
    Ok(())
}
