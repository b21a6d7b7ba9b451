//! Exact block failure probabilities of the (15,5|2) PUM code and the (15,5)
//! UM code over a binomial(15, p) channel, next to the independent
//! block-code baseline.
//!
//! Run with: cargo run --release --example exact_failure_curve

use pumprob::{
    independent_block_failure, mds_radii, pum_block_success, threshold_probabilities,
    um_block_success, Result, WeightDistribution,
};

fn main() -> Result<()> {
    let (len, t) = (100, 50);
    let pum_radii = mds_radii(15, 5, 2)?; // tau = (8, 10, 10, 12)
    let um_radii = mds_radii(15, 5, 5)?; // tau = (5, 10, 10, inf)

    println!("{:>4}  {:>22}  {:>22}  {:>22}", "p", "failure_pum", "failure_um", "failure_ind");
    for i in 2..=7 {
        let p = i as f64 / 10.0;
        let dist = WeightDistribution::binomial(15, p)?;
        let pum = pum_block_success(&threshold_probabilities(&dist, &pum_radii)?, t, len, false)?;
        let um = um_block_success(&threshold_probabilities(&dist, &um_radii)?, t, len, false)?;
        let ind = independent_block_failure(&dist, &pum_radii);
        println!(
            "{p:>4}  {:>22.15e}  {:>22.15e}  {:>22.15e}",
            pum.p_failure, um.p_failure, ind
        );
    }

    println!("\nMain (length-independent) failure terms at p = 0.5:");
    let dist = WeightDistribution::binomial(15, 0.5)?;
    let pum = pum_block_success(&threshold_probabilities(&dist, &pum_radii)?, t, len, false)?;
    let um = um_block_success(&threshold_probabilities(&dist, &um_radii)?, t, len, false)?;
    println!("  PUM: {:.15}  (boundary remainder {:.3e})", pum.p_failure_main, pum.remainder);
    println!("  UM:  {:.15}  (boundary remainder {:.3e})", um.p_failure_main, um.remainder);
    Ok(())
}
