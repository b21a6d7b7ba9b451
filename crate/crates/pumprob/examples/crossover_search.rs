//! Finds the channel parameter p' below which the convolutional scheme beats
//! independent block coding of the same rate, and a tail-bound-certified
//! lower bound on p'.
//!
//! Run with: cargo run --release --example crossover_search

use pumprob::{
    bound_crossover_lower_bound, crossover_bound_ratios, crossover_point, mds_radii, CodeMode,
    Result,
};

fn main() -> Result<()> {
    for (label, k1, mode) in [("PUM (15,5|2)", 2, CodeMode::Pum), ("UM  (15,5)", 5, CodeMode::Um)] {
        let radii = mds_radii(15, 5, k1)?;
        let result = crossover_point(15, &radii, mode, 100, 50)?;
        let bound = bound_crossover_lower_bound(15, &radii, mode);
        println!("{label}:");
        println!("  crossover p'           = {:.9}", result.p_prime);
        println!(
            "  certified lower bound  = {}",
            bound.map_or("n/a".into(), |b| format!("{b:.3}"))
        );
        println!("  all grid sign changes  = {:?}", result.sign_changes);
        let (um_ratio, pum_ratio) = crossover_bound_ratios(15, 0.05, &radii)?;
        println!(
            "  ratio bounds at p=0.05 = um {:?}, pum {:?}",
            um_ratio.value(),
            pum_ratio.value()
        );
    }
    Ok(())
}
