//! Monte-Carlo estimates of the block failure probability against the exact
//! closed form, with 95% Wilson confidence intervals.
//!
//! Run with: cargo run --release --example monte_carlo_check

use pumprob::{
    mds_radii, monte_carlo_success, threshold_probabilities, um_block_success, CodeMode, Result,
    WeightDistribution,
};

fn main() -> Result<()> {
    let (len, t, trials, seed) = (100, 50, 1_000_000u64, 42u64);
    let radii = mds_radii(15, 5, 5)?; // (15,5) UM code

    println!("UM code, {trials} trials per point, seed {seed}");
    println!("{:>4}  {:>12}  {:>26}  {:>12}", "p", "estimate", "95% interval", "exact");
    for i in 3..=7 {
        let p = i as f64 / 10.0;
        let dist = WeightDistribution::binomial(15, p)?;
        let tp = threshold_probabilities(&dist, &radii)?;
        let exact = um_block_success(&tp, t, len, false)?.p_failure;
        let report = monte_carlo_success(&dist, &radii, len, t, CodeMode::Um, trials, seed);
        let estimate = 1.0 - report.estimate;
        let (lo, hi) = (1.0 - report.ci_high, 1.0 - report.ci_low);
        println!("{p:>4}  {estimate:>12.6}  [{lo:>11.6}, {hi:>11.6}]  {exact:>12.6}");
    }
    Ok(())
}
