//! Success probability as a function of the coding delay L - t in the
//! streaming scenario, where no terminating zero block exists and future
//! blocks beyond the delay horizon are unavailable.
//!
//! Run with: cargo run --release --example streaming_delay

use pumprob::{
    mds_radii, pum_block_success, threshold_probabilities, Result, WeightDistribution,
};

fn main() -> Result<()> {
    let len = 100;
    let radii = mds_radii(15, 5, 2)?;
    let dist = WeightDistribution::binomial(15, 0.5)?;
    let tp = threshold_probabilities(&dist, &radii)?;

    let terminated = pum_block_success(&tp, 50, len, false)?.p_failure;
    println!("PUM (15,5|2), binomial(15, 0.5), L = {len}");
    println!("terminated-sequence failure at t = 50: {terminated:.15}\n");
    println!("{:>6}  {:>20}  {:>12}", "delay", "streaming failure", "penalty");
    for delay in [0usize, 1, 2, 3, 5, 10, 20, 50] {
        let t = len - delay;
        let streaming = pum_block_success(&tp, t, len, true)?.p_failure;
        println!(
            "{delay:>6}  {streaming:>20.15}  {:>12.3e}",
            streaming - terminated
        );
    }
    Ok(())
}
