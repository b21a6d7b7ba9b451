//! Closed-form and recursive success probabilities of the 4-step candidate
//! decoder, the independent-block baseline, the streaming variant, crossover
//! search, and parameter sweeps.
//!
//! All failure probabilities are assembled from complement quantities
//! (`1 - Q_t` etc.) so that values down to 1e-30 keep full relative accuracy;
//! `1 - P_t` computed naively would lose everything below ~1e-16.

use crate::channel::{threshold_probabilities, DecodingRadii, ThresholdProbabilities, WeightDistribution};
use crate::channel::{tail_bound_lower, tail_bound_upper};
use crate::error::{Error, Result};

/// Which success rule applies: PUM recovers `i_t` iff block `t` is found,
/// UM recovers it from block `t` or block `t+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeMode {
    Pum,
    Um,
}

/// Below this, the closed forms' `1/(1-p_b)` factors are unreliable and the
/// direct recursion is used instead.
const PB_DEGENERATE_GUARD: f64 = 1e-9;

/// Fixed point of the forward/backward recursion, `p_a / (1 - p_b)`, clamped
/// to [0, 1] near the degenerate `p_b = 1` boundary.
fn fixed_point(tp: &ThresholdProbabilities) -> f64 {
    let one_minus_pb = 1.0 - tp.p_b;
    if one_minus_pb <= 0.0 {
        1.0
    } else {
        (tp.p_a / one_minus_pb).min(1.0)
    }
}

/// `Q_t`: probability that block `t` is found individually or in forward
/// direction. `Q_0 = 1` by the known-boundary convention.
pub fn forward_chain_prob(tp: &ThresholdProbabilities, t: usize) -> f64 {
    if t == 0 {
        return 1.0;
    }
    if 1.0 - tp.p_b < PB_DEGENERATE_GUARD {
        let mut q = tp.p_a + tp.p_b;
        for _ in 1..t {
            q = tp.p_a + tp.p_b * q;
        }
        return q;
    }
    let a = fixed_point(tp);
    let rho = (1.0 - tp.p_a - tp.p_b) / (1.0 - tp.p_b);
    a + tp.p_b.powi(t as i32) * rho
}

/// `Y_t`: probability that block `t` is found individually or in backward
/// direction, with the terminating block known (`Y_{L+1} = 1`).
pub fn backward_chain_prob(tp: &ThresholdProbabilities, t: usize, len: usize) -> f64 {
    assert!(t >= 1 && t <= len + 1, "t = {t} outside 1..={}", len + 1);
    if t == len + 1 {
        return 1.0;
    }
    if 1.0 - tp.p_b < PB_DEGENERATE_GUARD {
        let mut y = tp.p_a + tp.p_b;
        for _ in t..len {
            y = tp.p_a + tp.p_b * y;
        }
        return y;
    }
    let a = fixed_point(tp);
    let rho = (1.0 - tp.p_a - tp.p_b) / (1.0 - tp.p_b);
    a + tp.p_b.powi((len - t + 1) as i32) * rho
}

/// Streaming variant of `Y_t`: the last information block is unknown, so the
/// chain starts from decoding the final block in the weakest code
/// (`Y_L = p_a`) and approaches `p_a / (1 - p_b)` from below.
pub fn backward_chain_prob_streaming(tp: &ThresholdProbabilities, t: usize, len: usize) -> f64 {
    assert!(t >= 1 && t <= len + 1, "t = {t} outside 1..={}", len + 1);
    if t == len + 1 {
        // No block beyond L ever becomes known in the streaming setting.
        return 0.0;
    }
    if 1.0 - tp.p_b < PB_DEGENERATE_GUARD {
        let mut y = tp.p_a;
        for _ in t..len {
            y = tp.p_a + tp.p_b * y;
        }
        return y;
    }
    let a = fixed_point(tp);
    a * (1.0 - tp.p_b.powi((len - t + 1) as i32))
}

/// The forward and backward chain values for every block of a sequence.
#[derive(Debug, Clone)]
pub struct ChainProbabilityProfile {
    pub len: usize,
    pub q_values: Vec<f64>,
    pub y_values: Vec<f64>,
}

impl ChainProbabilityProfile {
    pub fn new(tp: &ThresholdProbabilities, len: usize, streaming: bool) -> Self {
        let q_values = (1..=len).map(|t| forward_chain_prob(tp, t)).collect();
        let y_values = (1..=len)
            .map(|t| {
                if streaming {
                    backward_chain_prob_streaming(tp, t, len)
                } else {
                    backward_chain_prob(tp, t, len)
                }
            })
            .collect();
        Self {
            len,
            q_values,
            y_values,
        }
    }
}

/// Success probability of one block split into the position-independent main
/// term and the boundary remainder.
#[derive(Debug, Clone, Copy)]
pub struct BlockSuccessResult {
    pub p_success: f64,
    pub p_main_term: f64,
    /// Non-negative for the standard boundary conventions; may be negative
    /// in the streaming variant, where the backward chain is weaker.
    pub remainder: f64,
    /// `1 - p_success`, assembled in complement space (accurate for tiny values).
    pub p_failure: f64,
    /// `1 - p_main_term`, same treatment.
    pub p_failure_main: f64,
}

/// PUM block success: found in Step 1, via one neighbor chain, or sandwiched
/// between two recovered neighbors.
pub fn pum_block_success(
    tp: &ThresholdProbabilities,
    t: usize,
    len: usize,
    streaming: bool,
) -> Result<BlockSuccessResult> {
    if t < 1 || t > len {
        return Err(Error::InvalidParameter(format!("t = {t} outside 1..={len}")));
    }
    let (a, rho, degenerate) = chain_params(tp);

    // Complements of Q_{t-1} and Y_{t+1}; both boundary conventions
    // (Q_0 = 1, Y_{L+1} = 1 known, streaming Y_{L+1} = 0) fall out of the
    // closed forms at exponents 0.
    let (q_prev_bar, y_next_bar) = if degenerate {
        let q = forward_chain_prob(tp, t - 1);
        let y = if streaming {
            backward_chain_prob_streaming(tp, t + 1, len)
        } else {
            backward_chain_prob(tp, t + 1, len)
        };
        (1.0 - q, 1.0 - y)
    } else {
        let b = rho * tp.p_b.powi((t - 1) as i32);
        let q_bar = rho - b;
        let y_bar = if streaming {
            1.0 - a * (1.0 - tp.p_b.powi((len - t) as i32))
        } else {
            rho - rho * tp.p_b.powi((len - t) as i32)
        };
        (q_bar, y_bar)
    };
    let q_prev = 1.0 - q_prev_bar;

    // 1 - P_t = p_b (1-Q)(1-Y) + p_c (1 - QY) + p_d.
    let p_failure = tp.p_b * q_prev_bar * y_next_bar
        + tp.p_c * (q_prev_bar + q_prev * y_next_bar)
        + tp.p_d;
    let p_success = 1.0 - p_failure;

    // Main term with both chains at the fixed point A.
    let p_failure_main = tp.p_b * (1.0 - a) * (1.0 - a) + tp.p_c * (1.0 - a) * (1.0 + a) + tp.p_d;
    let p_main_term = 1.0 - p_failure_main;

    // Remainder in the explicit A, B, C decomposition; C is negative in the
    // streaming case.
    let remainder = if degenerate {
        p_success - p_main_term
    } else {
        let b = rho * tp.p_b.powi((t - 1) as i32);
        let c = if streaming {
            -a * tp.p_b.powi((len - t) as i32)
        } else {
            rho * tp.p_b.powi((len - t) as i32)
        };
        tp.p_b * (b + c - a * (b + c) - b * c) + tp.p_c * (a * (b + c) + b * c)
    };

    Ok(BlockSuccessResult {
        p_success,
        p_main_term,
        remainder,
        p_failure,
        p_failure_main,
    })
}

/// UM block success: the information block is recovered from block `t` or
/// block `t+1`. Requires `p_d = 0` (tau_01 = infinity).
///
/// At `t = L` only the forward chain applies and the result is `Q_L`.
pub fn um_block_success(
    tp: &ThresholdProbabilities,
    t: usize,
    len: usize,
    streaming: bool,
) -> Result<BlockSuccessResult> {
    if tp.p_d > 1e-12 {
        return Err(Error::NotUmConfiguration(tp.p_d));
    }
    if t < 1 || t > len {
        return Err(Error::InvalidParameter(format!("t = {t} outside 1..={len}")));
    }
    let (a, rho, degenerate) = chain_params(tp);

    if t == len {
        let p_success = forward_chain_prob(tp, len);
        let p_main_term = if degenerate { p_success } else { a };
        let remainder = p_success - p_main_term;
        return Ok(BlockSuccessResult {
            p_success,
            p_main_term,
            remainder,
            p_failure: 1.0 - p_success,
            p_failure_main: 1.0 - p_main_term,
        });
    }

    let (q_bar, y_next_bar, b, c) = if degenerate {
        let q = forward_chain_prob(tp, t);
        let y = if streaming {
            backward_chain_prob_streaming(tp, t + 1, len)
        } else {
            backward_chain_prob(tp, t + 1, len)
        };
        (1.0 - q, 1.0 - y, 0.0, 0.0)
    } else {
        let b = rho * tp.p_b.powi(t as i32);
        let c = if streaming {
            -a * tp.p_b.powi((len - t) as i32)
        } else {
            rho * tp.p_b.powi((len - t) as i32)
        };
        (rho - b, 1.0 - a - c, b, c)
    };

    // 1 - P_t = (1 - Q_t)(1 - Y_{t+1}).
    let p_failure = q_bar * y_next_bar;
    let p_success = 1.0 - p_failure;
    // Main term 1 - (p_c / (1 - p_b))^2 = 1 - rho^2.
    let p_failure_main = rho * rho;
    let p_main_term = 1.0 - p_failure_main;
    let remainder = if degenerate {
        p_success - p_main_term
    } else {
        (1.0 - a) * (b + c) - b * c
    };

    Ok(BlockSuccessResult {
        p_success,
        p_main_term,
        remainder,
        p_failure,
        p_failure_main,
    })
}

fn chain_params(tp: &ThresholdProbabilities) -> (f64, f64, bool) {
    let degenerate = 1.0 - tp.p_b < PB_DEGENERATE_GUARD;
    if degenerate {
        (1.0, 0.0, true)
    } else {
        let a = fixed_point(tp);
        let rho = (1.0 - tp.p_a - tp.p_b) / (1.0 - tp.p_b);
        (a, rho, false)
    }
}

/// Success probability of an independent block code with decoding radius
/// `tau_0`: `p_a + p_b`.
pub fn independent_block_success(tp: &ThresholdProbabilities) -> f64 {
    tp.p_a + tp.p_b
}

/// Failure of the independent baseline, computed as the weight tail beyond
/// `tau_0` (accurate for small p, unlike `1 - (p_a + p_b)`).
pub fn independent_block_failure(dist: &WeightDistribution, radii: &DecodingRadii) -> f64 {
    dist.tail_probability((radii.tau_0 + 1).min(dist.n() + 1))
}

/// Outcome of the crossover search over the binomial channel family.
#[derive(Debug, Clone)]
pub struct CrossoverResult {
    /// Smallest p' such that the (P)UM scheme beats the independent code for
    /// all p < p'. Equal to 1 when it wins on the whole grid.
    pub p_prime: f64,
    /// Every sign change of `P_t - P_ind` located on the scan grid.
    pub sign_changes: Vec<f64>,
}

/// Locates the crossover channel parameter p' for a binomial(n, p) channel by
/// a sign-change scan on a 1e-3 grid followed by bisection to 1e-9.
///
/// Gaps within 1e-14 of zero count as wins: where the two failure
/// probabilities agree to machine precision (e.g. when the chain never loses
/// to the baseline), their difference is pure rounding noise and must not
/// produce spurious crossovers.
pub fn crossover_point(
    n: usize,
    radii: &DecodingRadii,
    mode: CodeMode,
    len: usize,
    t: usize,
) -> Result<CrossoverResult> {
    let gap = |p: f64| -> Result<f64> {
        let dist = WeightDistribution::binomial(n, p)?;
        let tp = threshold_probabilities(&dist, radii)?;
        let fail = match mode {
            CodeMode::Pum => pum_block_success(&tp, t, len, false)?.p_failure,
            CodeMode::Um => um_block_success(&tp, t, len, false)?.p_failure,
        };
        Ok(independent_block_failure(&dist, radii) - fail)
    };

    let wins = |g: f64| g > -1e-14;

    const STEP: f64 = 1e-3;
    let grid: Vec<f64> = (1..1000).map(|i| i as f64 * STEP).collect();
    let values: Vec<f64> = grid.iter().map(|&p| gap(p)).collect::<Result<_>>()?;

    if values.iter().all(|&g| !wins(g)) {
        return Err(Error::NoCrossoverFound);
    }

    let mut sign_changes = Vec::new();
    for i in 0..grid.len() - 1 {
        if wins(values[i]) != wins(values[i + 1]) {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                if wins(gap(mid)?) == wins(values[i]) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            sign_changes.push(0.5 * (lo + hi));
        }
    }

    let p_prime = match sign_changes.first() {
        Some(&root) if wins(values[0]) => root,
        Some(_) => return Err(Error::NoCrossoverFound),
        None => 1.0,
    };
    if p_prime < 1.0 && !wins(gap(p_prime / 2.0)?) {
        return Err(Error::InvalidParameter(format!(
            "crossover sanity check failed: no advantage at p'/2 = {}",
            p_prime / 2.0
        )));
    }
    Ok(CrossoverResult {
        p_prime,
        sign_changes,
    })
}

/// A ratio bound value; `Vacuous` marks a non-positive derived lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioBound {
    Finite(f64),
    Vacuous,
}

impl RatioBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            RatioBound::Finite(v) => Some(*v),
            RatioBound::Vacuous => None,
        }
    }
}

/// Upper bounds on the two crossover ratios, obtained componentwise from the
/// binomial tail bounds.
///
/// Returns `(um_ratio_bound, pum_ratio_bound)` where the UM ratio is
/// `p_c / (1-p_b)^2` and the PUM ratio is `p_b (p_c+p_d)^2 / (p_c p_a^2)`;
/// each drops below 1 only where the scheme provably beats the baseline.
pub fn crossover_bound_ratios(
    n: usize,
    p: f64,
    radii: &DecodingRadii,
) -> Result<(RatioBound, RatioBound)> {
    let ub_alpha = tail_bound_upper(n, p, radii.tau_alpha + 1)?;
    let ub_zero = tail_bound_upper(n, p, radii.tau_0 + 1)?;
    let lb_zero = tail_bound_lower(n, p, radii.tau_0 + 1)?;
    let ub_past_01 = match radii.tau_01 {
        Some(t01) if t01 < n => tail_bound_upper(n, p, t01 + 1)?,
        _ => 0.0, // tau_01 = infinity or beyond n: P(X > tau_01) = 0.
    };

    let lb_a = 1.0 - ub_alpha; // p_a >= 1 - P(X > tau_alpha)
    let um = if lb_a <= 0.0 {
        RatioBound::Vacuous
    } else {
        RatioBound::Finite(ub_zero / (lb_a * lb_a))
    };

    let lb_c = lb_zero - ub_past_01; // p_c >= P(X > tau_0) - P(X > tau_01)
    let pum = if lb_a <= 0.0 || lb_c <= 0.0 {
        RatioBound::Vacuous
    } else {
        RatioBound::Finite(ub_alpha * ub_zero * ub_zero / (lb_c * lb_a * lb_a))
    };

    Ok((um, pum))
}

/// Largest scanned p up to which the mode's ratio bound stays below 1,
/// i.e. a tail-bound-certified lower bound on the crossover point p'.
pub fn bound_crossover_lower_bound(n: usize, radii: &DecodingRadii, mode: CodeMode) -> Option<f64> {
    const STEP: f64 = 1e-3;
    let mut last_good = None;
    for i in 1..1000 {
        let p = i as f64 * STEP;
        let bound = match crossover_bound_ratios(n, p, radii) {
            Ok((um, pum)) => match mode {
                CodeMode::Um => um,
                CodeMode::Pum => pum,
            },
            Err(_) => break,
        };
        match bound {
            RatioBound::Finite(v) if v < 1.0 => last_good = Some(p),
            _ => break,
        }
    }
    last_good
}

/// One evaluated design point of a parameter sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub k1: usize,
    pub p: f64,
    pub radii: DecodingRadii,
    pub mode: Option<CodeMode>,
    pub failure: f64,
}

/// Decoding radii implied by MDS constituent codes: `tau_alpha = n-k-k1`,
/// `tau_0 = tau_1 = n-k`, `tau_01 = n-k+k1` (infinite in the UM case k1 = k).
pub fn mds_radii(n: usize, k: usize, k1: usize) -> Result<DecodingRadii> {
    if k > n || k1 > k.min(n - k) {
        return Err(Error::InvalidParameter(format!(
            "need k <= n and k1 <= min(k, n-k), got n={n} k={k} k1={k1}"
        )));
    }
    if k1 == 0 {
        // Uncoupled code: every radius collapses to n-k.
        return DecodingRadii::from_parts(n - k, n - k, n - k, Some(n - k));
    }
    if k1 == k {
        DecodingRadii::new(n - 2 * k, n - k, None)
    } else {
        DecodingRadii::new(n - k - k1, n - k, Some(n - k + k1))
    }
}

/// Evaluates the block failure probability for every `(k1, p)` combination
/// with MDS-derived radii and returns the rows sorted by ascending failure.
pub fn parameter_sweep(
    n: usize,
    k: usize,
    p_grid: &[f64],
    k1_range: impl IntoIterator<Item = usize>,
    len: usize,
    t: usize,
) -> Result<Vec<SweepRow>> {
    let k1_values: Vec<usize> = k1_range.into_iter().collect();
    if k1_values.is_empty() {
        return Err(Error::InvalidParameter("empty k1 range".into()));
    }
    let mut rows = Vec::new();
    for &k1 in &k1_values {
        let radii = mds_radii(n, k, k1)?;
        for &p in p_grid {
            let dist = WeightDistribution::binomial(n, p)?;
            let (mode, failure) = if k1 == 0 {
                (None, independent_block_failure(&dist, &radii))
            } else {
                let tp = threshold_probabilities(&dist, &radii)?;
                if k1 == k {
                    (
                        Some(CodeMode::Um),
                        um_block_success(&tp, t, len, false)?.p_failure,
                    )
                } else {
                    (
                        Some(CodeMode::Pum),
                        pum_block_success(&tp, t, len, false)?.p_failure,
                    )
                }
            };
            rows.push(SweepRow {
                k1,
                p,
                radii,
                mode,
                failure,
            });
        }
    }
    rows.sort_by(|a, b| {
        a.failure
            .total_cmp(&b.failure)
            .then(a.k1.cmp(&b.k1))
            .then(a.p.total_cmp(&b.p))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{threshold_probabilities, DecodingRadii, WeightDistribution};

    fn tp(p_a: f64, p_b: f64, p_c: f64, p_d: f64) -> ThresholdProbabilities {
        ThresholdProbabilities::new(p_a, p_b, p_c, p_d).unwrap()
    }

    fn figure_pum_tp(p: f64) -> ThresholdProbabilities {
        let dist = WeightDistribution::binomial(15, p).unwrap();
        let radii = DecodingRadii::new(8, 10, Some(12)).unwrap();
        threshold_probabilities(&dist, &radii).unwrap()
    }

    fn figure_um_tp(p: f64) -> ThresholdProbabilities {
        let dist = WeightDistribution::binomial(15, p).unwrap();
        let radii = DecodingRadii::new(5, 10, None).unwrap();
        threshold_probabilities(&dist, &radii).unwrap()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn forward_chain_base_case() {
        let tp = tp(0.6, 0.3, 0.05, 0.05);
        assert!((forward_chain_prob(&tp, 1) - (0.6 + 0.3)).abs() < 1e-15);
    }

    #[test]
    fn forward_chain_collapses_without_propagation() {
        let tp = tp(0.7, 0.0, 0.2, 0.1);
        for t in 1..20 {
            assert!((forward_chain_prob(&tp, t) - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn forward_chain_matches_recursion_unrolling() {
        let tp = tp(0.6, 0.3, 0.05, 0.05);
        // Independent oracle: unroll Q_t = p_a + p_b Q_{t-1}, Q_1 = p_a + p_b.
        let mut q = 0.6 + 0.3;
        for _ in 1..4 {
            q = 0.6 + 0.3 * q;
        }
        assert!((forward_chain_prob(&tp, 4) - q).abs() < 1e-14);
    }

    #[test]
    fn backward_chain_base_case_and_recursion() {
        let tp = tp(0.6, 0.3, 0.05, 0.05);
        assert!((backward_chain_prob(&tp, 10, 10) - 0.9).abs() < 1e-15);
        let mut y = 0.9;
        for _ in 7..10 {
            y = 0.6 + 0.3 * y;
        }
        assert!((backward_chain_prob(&tp, 7, 10) - y).abs() < 1e-14);
        let tp0 = tp_fn_pb_zero();
        assert!((backward_chain_prob(&tp0, 3, 10) - tp0.p_a).abs() < 1e-15);
    }

    fn tp_fn_pb_zero() -> ThresholdProbabilities {
        tp(0.7, 0.0, 0.2, 0.1)
    }

    #[test]
    fn streaming_chain_base_case_and_recursion() {
        let tp = tp(0.5, 0.25, 0.2, 0.05);
        assert!((backward_chain_prob_streaming(&tp, 20, 20) - 0.5).abs() < 1e-15);
        // Recursion with base Y_L = p_a.
        let mut y = 0.5;
        for _ in 10..20 {
            y = 0.5 + 0.25 * y;
        }
        assert!((backward_chain_prob_streaming(&tp, 10, 20) - y).abs() < 1e-14);
        assert!(
            (backward_chain_prob_streaming(&tp_fn_pb_zero(), 3, 10) - 0.7).abs() < 1e-15
        );
    }

    #[test]
    fn closed_forms_match_recursion_over_random_corpus() {
        // 1e4 random (p_a, p_b) pairs, every t <= 50.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let p_a = next();
            let p_b = next() * (1.0 - p_a);
            let rest = 1.0 - p_a - p_b;
            let tp = tp(p_a, p_b, rest * 0.5, rest * 0.5);
            let len = 50;
            let mut q = p_a + p_b;
            let mut y = vec![0.0; len + 2];
            y[len] = p_a + p_b;
            for t in (1..len).rev() {
                y[t] = p_a + p_b * y[t + 1];
            }
            for (t, &y_t) in y.iter().enumerate().take(len + 1).skip(1) {
                assert!(
                    (forward_chain_prob(&tp, t) - q).abs() < 1e-12,
                    "Q mismatch at p_a={p_a} p_b={p_b} t={t}"
                );
                assert!(
                    (backward_chain_prob(&tp, t, len) - y_t).abs() < 1e-12,
                    "Y mismatch at p_a={p_a} p_b={p_b} t={t}"
                );
                q = p_a + p_b * q;
            }
        }
    }

    #[test]
    fn chains_lower_bounded_by_fixed_point() {
        let tp = tp(0.6, 0.3, 0.05, 0.05);
        let a = 0.6 / 0.7;
        let profile = ChainProbabilityProfile::new(&tp, 30, false);
        for (&q, &y) in profile.q_values.iter().zip(&profile.y_values) {
            assert!(q >= a - 1e-12);
            assert!(y >= a - 1e-12);
        }
    }

    #[test]
    fn streaming_chain_stays_below_fixed_point() {
        for (p_a, p_b) in [(0.5, 0.25), (0.1, 0.85), (0.9, 0.05)] {
            let rest = 1.0 - p_a - p_b;
            let tp = tp(p_a, p_b, rest, 0.0);
            let a = p_a / (1.0 - p_b);
            for t in 1..=40 {
                assert!(backward_chain_prob_streaming(&tp, t, 40) <= a + 1e-12);
            }
        }
    }

    #[test]
    fn pum_success_reproduces_published_value_at_half() {
        let tp = figure_pum_tp(0.5);
        let r = pum_block_success(&tp, 50, 100, false).unwrap();
        assert!(rel_err(r.p_failure, 0.0135612992270332) < 1e-9);
    }

    #[test]
    fn pum_success_is_one_when_step1_always_succeeds() {
        let r = pum_block_success(&tp(1.0, 0.0, 0.0, 0.0), 3, 10, false).unwrap();
        assert_eq!(r.p_success, 1.0);
        assert_eq!(r.p_failure, 0.0);
    }

    #[test]
    fn pum_result_is_consistent() {
        for p in [0.1, 0.3, 0.5, 0.7] {
            let tp = figure_pum_tp(p);
            for (t, len) in [(1, 8), (4, 8), (8, 8), (50, 100)] {
                let r = pum_block_success(&tp, t, len, false).unwrap();
                assert!(r.remainder >= -1e-12, "negative remainder at p={p} t={t}");
                assert!((r.p_success - (r.p_main_term + r.remainder)).abs() < 1e-12);
                assert!((0.0..=1.0).contains(&r.p_success));
                assert!((r.p_failure - (1.0 - r.p_success)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pum_boundary_blocks_use_known_neighbors() {
        // At t = 1 the closed form must reduce to Q_0 = 1; same at t = L
        // with Y_{L+1} = 1.
        let tp = figure_pum_tp(0.4);
        let len = 12;
        let y2 = backward_chain_prob(&tp, 2, len);
        let expect = tp.p_a + tp.p_b * (1.0 + y2 - y2) + tp.p_c * y2;
        let r = pum_block_success(&tp, 1, len, false).unwrap();
        assert!((r.p_success - expect).abs() < 1e-14);

        let q_prev = forward_chain_prob(&tp, len - 1);
        let expect_last = tp.p_a + tp.p_b * (q_prev + 1.0 - q_prev) + tp.p_c * q_prev;
        let r_last = pum_block_success(&tp, len, len, false).unwrap();
        assert!((r_last.p_success - expect_last).abs() < 1e-14);
    }

    #[test]
    fn remainder_decays_geometrically() {
        let tp = figure_pum_tp(0.3);
        let len = 30;
        for t in 2..len / 2 {
            let prev = pum_block_success(&tp, t - 1, len, false).unwrap().remainder;
            let cur = pum_block_success(&tp, t, len, false).unwrap().remainder;
            // The tolerance absorbs the backward-chain term, whose relative
            // size is p_b^(L - 2t) and maximal just before the middle.
            assert!(cur <= tp.p_b * prev * (1.0 + 1e-4) + 1e-300);
            assert!(cur <= 2.0 * tp.p_b.powi((t - 1).min(len - t) as i32));
        }
    }

    #[test]
    fn um_reproduces_published_main_term_at_half() {
        let tp = figure_um_tp(0.5);
        let r = um_block_success(&tp, 50, 100, false).unwrap();
        assert!(rel_err(r.p_failure_main, 0.0794773140435064) < 1e-9);
        // The position-dependent value sits slightly below the main-term
        // failure (delta >= 0) but within the boundary remainder of it.
        assert!(r.remainder >= 0.0 && r.remainder < 2e-6);
        assert!((r.p_success - (r.p_main_term + r.remainder)).abs() < 1e-12);
    }

    #[test]
    fn um_success_is_one_without_failures_beyond_tau0() {
        let r = um_block_success(&tp(0.7, 0.3, 0.0, 0.0), 5, 10, false).unwrap();
        assert!((r.p_main_term - 1.0).abs() < 1e-15);
        assert!((r.p_success - 1.0).abs() < 1e-15);
    }

    #[test]
    fn um_rejects_pum_configuration() {
        match um_block_success(&tp(0.6, 0.2, 0.1, 0.1), 3, 10, false) {
            Err(Error::NotUmConfiguration(_)) => {}
            other => panic!("expected NotUmConfiguration, got {other:?}"),
        }
    }

    #[test]
    fn um_final_block_is_forward_chain_only() {
        let tp = figure_um_tp(0.4);
        let r = um_block_success(&tp, 10, 10, false).unwrap();
        assert!((r.p_success - forward_chain_prob(&tp, 10)).abs() < 1e-14);
        assert!(r.remainder >= -1e-12);
    }

    #[test]
    fn independent_baseline() {
        assert_eq!(independent_block_success(&tp(1.0, 0.0, 0.0, 0.0)), 1.0);
        let dist = WeightDistribution::binomial(15, 0.5).unwrap();
        let radii = DecodingRadii::new(8, 10, Some(12)).unwrap();
        let tp = threshold_probabilities(&dist, &radii).unwrap();
        // Partial binomial sum oracle: P(X <= 10) = 0.940765380859375 exactly.
        assert!(rel_err(independent_block_success(&tp), 0.940765380859375) < 1e-13);
        assert!(
            rel_err(independent_block_failure(&dist, &radii), 1.0 - 0.940765380859375) < 1e-12
        );
        // UM configuration: baseline success is 1 - p_c.
        let um = figure_um_tp(0.5);
        assert!((independent_block_success(&um) - (1.0 - um.p_c)).abs() < 1e-14);
    }

    #[test]
    fn streaming_remainder_may_be_negative_but_result_consistent() {
        let tp = figure_pum_tp(0.5);
        let r = pum_block_success(&tp, 98, 100, true).unwrap();
        assert!((r.p_success - (r.p_main_term + r.remainder)).abs() < 1e-12);
        assert!(r.p_success <= r.p_main_term + 1e-12);
    }

    #[test]
    fn crossover_exists_for_both_reference_codes() {
        let pum_radii = DecodingRadii::new(8, 10, Some(12)).unwrap();
        let res = crossover_point(15, &pum_radii, CodeMode::Pum, 100, 50).unwrap();
        assert!(res.p_prime > 0.0 && res.p_prime < 1.0);

        let um_radii = DecodingRadii::new(5, 10, None).unwrap();
        let res_um = crossover_point(15, &um_radii, CodeMode::Um, 100, 50).unwrap();
        assert!(res_um.p_prime > 0.0);
    }

    #[test]
    fn crossover_handles_degenerate_radii() {
        // tau_alpha = tau_0 means p_b = 0; the scheme never loses to the
        // baseline, so the scan reports p' = 1 rather than crashing.
        let radii = DecodingRadii::from_parts(10, 10, 10, Some(12)).unwrap();
        let res = crossover_point(15, &radii, CodeMode::Pum, 100, 50).unwrap();
        assert_eq!(res.p_prime, 1.0);
    }

    #[test]
    fn ratio_bounds_dominate_exact_ratios() {
        let radii = DecodingRadii::new(8, 10, Some(12)).unwrap();
        let (um, pum) = crossover_bound_ratios(15, 0.05, &radii).unwrap();
        let dist = WeightDistribution::binomial(15, 0.05).unwrap();
        let tp = threshold_probabilities(&dist, &radii).unwrap();
        let exact_um = tp.p_c / ((1.0 - tp.p_b) * (1.0 - tp.p_b));
        let exact_pum =
            tp.p_b * (tp.p_c + tp.p_d) * (tp.p_c + tp.p_d) / (tp.p_c * tp.p_a * tp.p_a);
        assert!(um.value().unwrap() >= exact_um);
        assert!(pum.value().unwrap() >= exact_pum);
        assert!(um.value().unwrap() < 1.0);
        assert!(pum.value().unwrap() < 1.0);
    }

    #[test]
    fn um_ratio_bound_vanishes_for_small_p() {
        let radii = DecodingRadii::new(5, 10, None).unwrap();
        let mut prev = f64::INFINITY;
        for p in [0.2, 0.1, 0.05, 0.02, 0.01] {
            let (um, _) = crossover_bound_ratios(15, p, &radii).unwrap();
            let v = um.value().unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-15);
    }

    #[test]
    fn bound_lower_bound_stays_below_exact_crossover() {
        for (radii, mode) in [
            (DecodingRadii::new(8, 10, Some(12)).unwrap(), CodeMode::Pum),
            (DecodingRadii::new(5, 10, None).unwrap(), CodeMode::Um),
        ] {
            let lb = bound_crossover_lower_bound(15, &radii, mode).unwrap();
            let exact = crossover_point(15, &radii, mode, 100, 50).unwrap().p_prime;
            assert!(lb > 0.0 && lb <= exact, "lb {lb} vs p' {exact}");
        }
    }

    #[test]
    fn sweep_reproduces_reference_radii() {
        let radii = mds_radii(15, 5, 2).unwrap();
        assert_eq!(
            (radii.tau_alpha, radii.tau_0, radii.tau_1, radii.tau_01),
            (8, 10, 10, Some(12))
        );
        let um = mds_radii(15, 5, 5).unwrap();
        assert_eq!((um.tau_alpha, um.tau_0, um.tau_01), (5, 10, None));
        assert!(mds_radii(15, 5, 6).is_err());
    }

    #[test]
    fn sweep_k1_zero_equals_independent_baseline() {
        let rows = parameter_sweep(15, 5, &[0.3], 0..=5, 100, 50).unwrap();
        let dist = WeightDistribution::binomial(15, 0.3).unwrap();
        let base = dist.tail_probability(11);
        let row0 = rows.iter().find(|r| r.k1 == 0).unwrap();
        assert!((row0.failure - base).abs() < 1e-15);
        assert!(rows.windows(2).all(|w| w[0].failure <= w[1].failure));
        assert!(parameter_sweep(15, 5, &[0.3], std::iter::empty(), 100, 50).is_err());
    }
}
