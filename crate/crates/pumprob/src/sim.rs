//! Sampling of error-weight sequences, the 4-step candidate-propagation
//! automaton, Monte-Carlo estimation, and exact enumeration for short
//! sequences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::CodeMode;
use crate::channel::{DecodingRadii, ThresholdProbabilities, WeightDistribution};
use crate::error::{Error, Result};

/// Per-block error weights of one transmitted sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequence(pub Vec<usize>);

impl WeightSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `flags[t-1]` is true when the sent codeword of block `t` ends up among the
/// decoder's candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFlags(pub Vec<bool>);

/// Counter-based 64-bit seed derivation (SplitMix64 finalizer). Per-trial
/// seeds depend only on `(master, index)`, so results are identical no matter
/// how trials are scheduled across threads.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn cumulative(dist: &WeightDistribution) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(dist.n() + 1);
    let mut acc = 0.0;
    for &q in dist.pmf() {
        acc += q;
        cdf.push(acc);
    }
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

fn draw_weight(cdf: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    match cdf.iter().position(|&c| u < c) {
        Some(w) => w,
        None => cdf.len() - 1,
    }
}

/// Draws `len` i.i.d. weights from `dist` by inverse-CDF sampling.
pub fn sample_weight_sequence(
    dist: &WeightDistribution,
    len: usize,
    rng: &mut impl Rng,
) -> WeightSequence {
    let cdf = cumulative(dist);
    WeightSequence((0..len).map(|_| draw_weight(&cdf, rng)).collect())
}

/// Least fixed point of the candidate-propagation rules.
///
/// Block `t` is found iff its weight is within `tau_alpha` (Step 1), within
/// `tau_0`/`tau_1` with a found left/right neighbor (Steps 2/3), or within
/// `tau_01` with both neighbors found (Step 4). The virtual blocks 0 and L+1
/// are always found. Flags only flip false -> true, so alternating
/// forward/backward sweeps converge within L+1 passes.
pub fn candidate_automaton(weights: &WeightSequence, radii: &DecodingRadii) -> CandidateFlags {
    let len = weights.len();
    let w = &weights.0;
    let mut found = vec![false; len + 2];
    found[0] = true;
    found[len + 1] = true;
    for t in 1..=len {
        found[t] = w[t - 1] <= radii.tau_alpha;
    }
    let within_01 = |weight: usize| match radii.tau_01 {
        Some(t01) => weight <= t01,
        None => true,
    };
    loop {
        let mut changed = false;
        let sweep = |t: usize, found: &mut Vec<bool>| {
            if found[t] {
                return false;
            }
            let weight = w[t - 1];
            let hit = (weight <= radii.tau_0 && found[t - 1])
                || (weight <= radii.tau_1 && found[t + 1])
                || (within_01(weight) && found[t - 1] && found[t + 1]);
            if hit {
                found[t] = true;
            }
            hit
        };
        for t in 1..=len {
            changed |= sweep(t, &mut found);
        }
        for t in (1..=len).rev() {
            changed |= sweep(t, &mut found);
        }
        if !changed {
            break;
        }
    }
    CandidateFlags(found[1..=len].to_vec())
}

/// Whether information block `t` is recovered. PUM needs block `t` itself; UM
/// recovers it from block `t` or `t+1` (block L+1 counts as found since the
/// final information block is fixed to zero).
pub fn block_success(flags: &CandidateFlags, t: usize, mode: CodeMode) -> bool {
    let len = flags.0.len();
    assert!(t >= 1 && t <= len, "t = {t} outside 1..={len}");
    match mode {
        CodeMode::Pum => flags.0[t - 1],
        CodeMode::Um => flags.0[t - 1] || (t == len || flags.0[t]),
    }
}

/// Result of a Monte-Carlo estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
}

/// Two-sided Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let ph = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (ph + z2 / (2.0 * n)) / denom;
    let half = z / denom * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// z for a two-sided 95% interval.
pub const Z_95: f64 = 1.959963984540054;
/// z for a two-sided 99% interval.
pub const Z_99: f64 = 2.5758293035489004;
/// z for a two-sided 99.7% interval.
pub const Z_997: f64 = 2.9677379253417833;

/// Estimates `P(block t succeeds)` over independent trials.
///
/// Trial `i` draws its randomness from `mix_seed(master_seed, i)`, so the
/// report is bit-identical for any execution order or worker count.
pub fn monte_carlo_success(
    dist: &WeightDistribution,
    radii: &DecodingRadii,
    len: usize,
    t: usize,
    mode: CodeMode,
    trials: u64,
    master_seed: u64,
) -> MonteCarloReport {
    assert!(trials >= 1);
    assert!(t >= 1 && t <= len);
    let cdf = cumulative(dist);
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, i));
            let weights =
                WeightSequence((0..len).map(|_| draw_weight(&cdf, &mut rng)).collect());
            let flags = candidate_automaton(&weights, radii);
            block_success(&flags, t, mode) as u64
        })
        .sum();
    let estimate = successes as f64 / trials as f64;
    let (ci_low, ci_high) = wilson_interval(successes, trials, Z_95);
    MonteCarloReport {
        trials,
        successes,
        estimate,
        ci_low,
        ci_high,
        master_seed,
    }
}

/// Exact success probability of every block position by enumerating all
/// assignments of the four weight classes to the `len` blocks.
///
/// Entry `t-1` is `P(information block t is recovered)`. Runs the automaton
/// on class labels directly (the rules only compare against the radii, so the
/// class determines the outcome), collapsing `n^L` weight patterns to `4^L`.
pub fn enumerate_exact_success_profile(
    tp: &ThresholdProbabilities,
    len: usize,
    mode: CodeMode,
) -> Result<Vec<f64>> {
    if len == 0 || len > 12 {
        return Err(Error::InvalidParameter(format!(
            "enumeration supports 1 <= L <= 12, got {len}"
        )));
    }
    if mode == CodeMode::Um && tp.p_d > 1e-12 {
        return Err(Error::NotUmConfiguration(tp.p_d));
    }
    let class_prob = [tp.p_a, tp.p_b, tp.p_c, tp.p_d];
    let active: Vec<usize> = (0..4).filter(|&c| class_prob[c] > 0.0).collect();

    let mut sums = vec![0.0f64; len];
    let mut comps = vec![0.0f64; len];
    let mut digits = vec![0usize; len];
    let mut classes = vec![active[0]; len];

    loop {
        let mut prob = 1.0;
        for &c in &classes {
            prob *= class_prob[c];
        }
        if prob > 0.0 {
            let flags = class_automaton(&classes);
            for t in 1..=len {
                let ok = match mode {
                    CodeMode::Pum => flags[t],
                    CodeMode::Um => flags[t] || flags[t + 1],
                };
                if ok {
                    let y = prob - comps[t - 1];
                    let s = sums[t - 1] + y;
                    comps[t - 1] = (s - sums[t - 1]) - y;
                    sums[t - 1] = s;
                }
            }
        }
        // Odometer over the active classes.
        let mut pos = 0;
        loop {
            if pos == len {
                return Ok(sums);
            }
            digits[pos] += 1;
            if digits[pos] < active.len() {
                classes[pos] = active[digits[pos]];
                break;
            }
            digits[pos] = 0;
            classes[pos] = active[0];
            pos += 1;
        }
    }
}

/// Exact success probability of block `t`; see
/// [`enumerate_exact_success_profile`].
pub fn enumerate_exact_success(
    tp: &ThresholdProbabilities,
    len: usize,
    t: usize,
    mode: CodeMode,
) -> Result<f64> {
    if t < 1 || t > len {
        return Err(Error::InvalidParameter(format!("t = {t} outside 1..={len}")));
    }
    Ok(enumerate_exact_success_profile(tp, len, mode)?[t - 1])
}

/// Automaton on class labels: a = Step 1, a/b = chain steps, a/b/c = Step 4.
/// Returns flags indexed 0..=len+1 with true virtual boundaries.
fn class_automaton(classes: &[usize]) -> Vec<bool> {
    let len = classes.len();
    let mut found = vec![false; len + 2];
    found[0] = true;
    found[len + 1] = true;
    for t in 1..=len {
        found[t] = classes[t - 1] == 0;
    }
    loop {
        let mut changed = false;
        for t in (1..=len).chain((1..=len).rev()) {
            if found[t] {
                continue;
            }
            let c = classes[t - 1];
            if (c <= 1 && (found[t - 1] || found[t + 1]))
                || (c <= 2 && found[t - 1] && found[t + 1])
            {
                found[t] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    found
}
