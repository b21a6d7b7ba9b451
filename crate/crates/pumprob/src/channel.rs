//! Per-block error-weight distributions of memoryless channels, the four
//! threshold probabilities cut by the decoding radii, and binomial tail bounds.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Probability mass function of the error weight of a single block.
///
/// Index `w` holds `P(X = w)` for `w = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    n: usize,
    pmf: Vec<f64>,
}

impl WeightDistribution {
    /// Wraps an explicit pmf over weights `0..=n` (`n = pmf.len() - 1`).
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.len() < 2 {
            return Err(Error::InvalidParameter(
                "pmf must cover weights 0..=n with n >= 1".into(),
            ));
        }
        if pmf.iter().any(|&q| !(0.0..=1.0).contains(&q)) {
            return Err(Error::InvalidParameter(
                "pmf entries must lie in [0, 1]".into(),
            ));
        }
        let sum = kahan_sum(pmf.iter().copied());
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "pmf sums to {sum}, expected 1 within 1e-12"
            )));
        }
        Ok(Self {
            n: pmf.len() - 1,
            pmf,
        })
    }

    /// Binomial error weight: each of the `n` positions flips independently
    /// with probability `p`.
    ///
    /// Evaluated in log space with a log-factorial table and renormalized so
    /// the pmf sums to exactly 1; stays accurate for tail values far below
    /// the f64 underflow of naive factorial ratios.
    pub fn binomial(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("block length n must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "error probability p = {p} outside [0, 1]"
            )));
        }
        let mut pmf = vec![0.0; n + 1];
        if p == 0.0 {
            pmf[0] = 1.0;
            return Ok(Self { n, pmf });
        }
        if p == 1.0 {
            pmf[n] = 1.0;
            return Ok(Self { n, pmf });
        }
        let ln_fact = ln_factorial_table(n);
        let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
        for (w, entry) in pmf.iter_mut().enumerate() {
            let ln_pmf = ln_fact[n] - ln_fact[w] - ln_fact[n - w]
                + w as f64 * ln_p
                + (n - w) as f64 * ln_q;
            *entry = ln_pmf.exp();
        }
        let sum = kahan_sum(pmf.iter().copied());
        for entry in &mut pmf {
            *entry /= sum;
        }
        Ok(Self { n, pmf })
    }

    /// All mass on a single weight. Mostly useful for tests and degenerate channels.
    pub fn point_mass(n: usize, weight: usize) -> Result<Self> {
        if n == 0 || weight > n {
            return Err(Error::InvalidParameter(format!(
                "point mass weight {weight} outside 0..={n}"
            )));
        }
        let mut pmf = vec![0.0; n + 1];
        pmf[weight] = 1.0;
        Ok(Self { n, pmf })
    }

    /// Reads a distribution from CSV with header `weight,probability` and one
    /// row per weight 0..=n.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        {
            let headers = rdr.headers()?;
            if headers.len() != 2 || &headers[0] != "weight" || &headers[1] != "probability" {
                return Err(Error::InvalidParameter(
                    "expected CSV header `weight,probability`".into(),
                ));
            }
        }
        let mut rows: Vec<(usize, f64)> = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let w: usize = record[0]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad weight `{}`", &record[0])))?;
            let q: f64 = record[1]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad probability `{}`", &record[1])))?;
            rows.push((w, q));
        }
        rows.sort_by_key(|&(w, _)| w);
        for (i, &(w, _)) in rows.iter().enumerate() {
            if w != i {
                return Err(Error::InvalidParameter(format!(
                    "weights must cover 0..=n exactly once, missing or duplicate at {i}"
                )));
            }
        }
        Self::new(rows.into_iter().map(|(_, q)| q).collect())
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// `P(X >= tau)`; `tau = 0` gives 1, `tau = n + 1` gives 0.
    ///
    /// Summed from the top so that tiny tail terms are not swallowed by the bulk.
    pub fn tail_probability(&self, tau: usize) -> f64 {
        assert!(tau <= self.n + 1, "tau = {tau} outside 0..={}", self.n + 1);
        kahan_sum(self.pmf[tau.min(self.n + 1)..].iter().rev().copied())
    }

    /// `P(lo <= X <= hi)` with `hi` clipped to `n`; empty when `lo > hi`.
    pub fn interval_probability(&self, lo: usize, hi: usize) -> f64 {
        let hi = hi.min(self.n);
        if lo > hi {
            return 0.0;
        }
        kahan_sum(self.pmf[lo..=hi].iter().copied())
    }
}

/// The four decoding radii of the constituent codes.
///
/// `tau_01 = None` encodes the unit-memory case where the innermost code has
/// dimension zero and corrects arbitrarily many erasures once both neighbors
/// are known (tau_01 = infinity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodingRadii {
    pub tau_alpha: usize,
    pub tau_0: usize,
    pub tau_1: usize,
    pub tau_01: Option<usize>,
}

impl DecodingRadii {
    /// Standard configuration: `tau_alpha < tau_0 = tau_1 < tau_01`.
    pub fn new(tau_alpha: usize, tau_0: usize, tau_01: Option<usize>) -> Result<Self> {
        if tau_alpha >= tau_0 {
            return Err(Error::InvalidParameter(format!(
                "radii must satisfy tau_alpha < tau_0, got {tau_alpha} >= {tau_0}"
            )));
        }
        if let Some(t01) = tau_01 {
            if tau_0 >= t01 {
                return Err(Error::InvalidParameter(format!(
                    "radii must satisfy tau_0 < tau_01, got {tau_0} >= {t01}"
                )));
            }
        }
        Ok(Self {
            tau_alpha,
            tau_0,
            tau_1: tau_0,
            tau_01,
        })
    }

    /// Relaxed constructor allowing equal radii and `tau_1 != tau_0`.
    ///
    /// Needed for degenerate parameter scans and for the codec's conservative
    /// radii, where the concrete backward code is weaker than `C_0`.
    pub fn from_parts(
        tau_alpha: usize,
        tau_0: usize,
        tau_1: usize,
        tau_01: Option<usize>,
    ) -> Result<Self> {
        if tau_alpha > tau_0 || tau_alpha > tau_1 {
            return Err(Error::InvalidParameter(
                "tau_alpha may not exceed tau_0 or tau_1".into(),
            ));
        }
        if let Some(t01) = tau_01 {
            if tau_0 > t01 || tau_1 > t01 {
                return Err(Error::InvalidParameter(
                    "tau_01 may not be smaller than tau_0 or tau_1".into(),
                ));
            }
        }
        Ok(Self {
            tau_alpha,
            tau_0,
            tau_1,
            tau_01,
        })
    }

    pub fn is_um(&self) -> bool {
        self.tau_01.is_none()
    }
}

/// `(p_a, p_b, p_c, p_d)`: the probabilities of the error weight landing in the
/// four intervals cut by the radii. They always sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdProbabilities {
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
    pub p_d: f64,
}

impl ThresholdProbabilities {
    pub fn new(p_a: f64, p_b: f64, p_c: f64, p_d: f64) -> Result<Self> {
        for (name, v) in [("p_a", p_a), ("p_b", p_b), ("p_c", p_c), ("p_d", p_d)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
            }
        }
        let sum = p_a + p_b + p_c + p_d;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "threshold probabilities sum to {sum}, expected 1 within 1e-12"
            )));
        }
        Ok(Self { p_a, p_b, p_c, p_d })
    }
}

/// Splits the weight distribution along the radii. Requires `tau_0 = tau_1`;
/// radii beyond `n` are clipped (weights cannot exceed `n`).
pub fn threshold_probabilities(
    dist: &WeightDistribution,
    radii: &DecodingRadii,
) -> Result<ThresholdProbabilities> {
    if radii.tau_0 != radii.tau_1 {
        return Err(Error::InvalidParameter(
            "threshold probabilities are only defined for tau_0 = tau_1".into(),
        ));
    }
    let n = dist.n();
    let p_a = dist.interval_probability(0, radii.tau_alpha);
    let p_b = dist.interval_probability(radii.tau_alpha + 1, radii.tau_0);
    let (p_c, p_d) = match radii.tau_01 {
        Some(t01) => (
            dist.interval_probability(radii.tau_0 + 1, t01),
            if t01 >= n {
                0.0
            } else {
                dist.interval_probability(t01 + 1, n)
            },
        ),
        None => (dist.interval_probability(radii.tau_0 + 1, n), 0.0),
    };
    ThresholdProbabilities::new(p_a, p_b, p_c, p_d)
}

/// Chernoff-type upper bound on the binomial tail `P(X >= tau)` for `tau > pn`.
///
/// `exp(-tau*ln(tau/np) - (n-tau)*ln((n-tau)/(n(1-p))))`, with the second term
/// taken as 0 at `tau = n`, where the bound collapses to the exact value `p^n`.
pub fn tail_bound_upper(n: usize, p: f64, tau: usize) -> Result<f64> {
    tail_bound_exponent(n, p, tau).map(f64::exp)
}

/// Matching lower bound: the upper bound divided by `sqrt(2n)`.
pub fn tail_bound_lower(n: usize, p: f64, tau: usize) -> Result<f64> {
    Ok(tail_bound_upper(n, p, tau)? / (2.0 * n as f64).sqrt())
}

fn tail_bound_exponent(n: usize, p: f64, tau: usize) -> Result<f64> {
    if n == 0 || !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail bound needs n >= 1 and 0 < p < 1, got n = {n}, p = {p}"
        )));
    }
    if tau > n {
        return Err(Error::InvalidParameter(format!(
            "tail bound needs tau <= n, got tau = {tau}, n = {n}"
        )));
    }
    let nf = n as f64;
    let pn = p * nf;
    let tf = tau as f64;
    if tf <= pn {
        return Err(Error::BoundNotApplicable { tau, pn });
    }
    // 0*ln(0) := 0 at tau = n.
    let second = if tau == n {
        0.0
    } else {
        (nf - tf) * ((nf - tf) / (nf * (1.0 - p))).ln()
    };
    Ok(-(tf * (tf / pn).ln()) - second)
}

pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    let mut acc = 0.0;
    let mut comp = 0.0;
    for (i, entry) in table.iter_mut().enumerate().skip(1) {
        let y = (i as f64).ln() - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        *entry = acc;
    }
    table
}
