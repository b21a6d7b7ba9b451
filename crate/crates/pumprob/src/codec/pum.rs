//! Reed-Solomon-based (P)UM codes over GF(2^m): generator construction,
//! sequence encoding, erasure transmission, and the 4-step erasure decoder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf::GfField;
use super::matrix::{solve_left, Matrix};
use crate::channel::DecodingRadii;
use crate::error::{Error, Result};
use crate::sim::{candidate_automaton, mix_seed, WeightSequence};

/// One information block, split into the coupled fragment `i*` (k1 symbols)
/// and the local fragment `i^` (k - k1 symbols).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoBlock {
    pub i_star: Vec<u16>,
    pub i_diamond: Vec<u16>,
}

impl InfoBlock {
    pub fn zero(k: usize, k1: usize) -> Self {
        Self {
            i_star: vec![0; k1],
            i_diamond: vec![0; k - k1],
        }
    }
}

/// Set of erased positions within a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern(Vec<usize>);

impl ErasurePattern {
    pub fn new(mut positions: Vec<usize>, n: usize) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if positions.iter().any(|&p| p >= n) {
            return Err(Error::InvalidParameter(format!("erasure position beyond n = {n}")));
        }
        Ok(Self(positions))
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }
}

/// A partial unit memory code built from Reed-Solomon evaluation vectors.
///
/// The three generator blocks are monomial evaluations at `n` consecutive
/// powers of the primitive element: degrees `0..k-k1` form `G^` (the code
/// C_01), degrees `k-k1..k` form `G*_t`, and degrees `k..k+k1` form
/// `G*_{t-1}`. Stacking them gives RS codes C_0(n,k), C_01(n,k-k1) and
/// C_alpha(n,k+k1); C_1 is a k-dimensional subcode of C_alpha with guaranteed
/// erasure radius only n-k-k1.
#[derive(Debug, Clone)]
pub struct PumCode {
    field: GfField,
    n: usize,
    k: usize,
    k1: usize,
    g_star_t: Matrix,
    g_diamond: Matrix,
    g_star_prev: Matrix,
    g_c0: Matrix,
    g_c1: Matrix,
    g_alpha: Matrix,
}

/// Per-block candidate: the decoded codeword with its unique fragment
/// decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub codeword: Vec<u16>,
    pub i_star: Vec<u16>,
    pub i_diamond: Vec<u16>,
    pub i_star_prev: Vec<u16>,
}

/// Options for the sequence decoder; Step 3 can be disabled to restrict the
/// decoder to the MDS step codes.
#[derive(Debug, Clone, Copy)]
pub struct DecodeOptions {
    pub enable_backward: bool,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        Self {
            enable_backward: true,
        }
    }
}

/// Outcome of decoding one received sequence.
#[derive(Debug, Clone)]
pub struct SequenceDecode {
    pub candidates: Vec<Vec<Candidate>>,
    /// Step-3 attempts/successes on blocks whose erasure weight exceeds the
    /// guaranteed C_1 radius but is within tau_0 (the radius gap region).
    pub step3_gap_attempts: u64,
    pub step3_gap_successes: u64,
}

/// One simulated transmission of the concrete codec.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub weights: Vec<usize>,
    pub codec_success: Vec<bool>,
    pub automaton_prediction: Vec<bool>,
    pub recovered: Vec<Option<InfoBlock>>,
    pub step3_gap_attempts: u64,
    pub step3_gap_successes: u64,
}

impl PumCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    pub fn g_star_t(&self) -> &Matrix {
        &self.g_star_t
    }

    pub fn g_diamond(&self) -> &Matrix {
        &self.g_diamond
    }

    pub fn g_star_prev(&self) -> &Matrix {
        &self.g_star_prev
    }

    /// Erasure radii actually guaranteed by this construction. The backward
    /// code C_1 is not MDS here, so tau_1 drops to n-k-k1.
    pub fn conservative_radii(&self) -> DecodingRadii {
        let tau_alpha = self.n - self.k - self.k1;
        let tau_0 = self.n - self.k;
        let tau_01 = if self.k1 < self.k {
            Some(self.n - self.k + self.k1)
        } else {
            None
        };
        DecodingRadii::from_parts(tau_alpha, tau_0, tau_alpha, tau_01)
            .expect("construction parameters always give valid radii")
    }
}

/// Builds the Reed-Solomon-based `(n, k | k1)` PUM code over GF(2^m).
pub fn build_rs_pum_code(n: usize, k: usize, k1: usize, m: u32) -> Result<PumCode> {
    let field = GfField::new(m)?;
    if n > field.order() - 1 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} exceeds 2^{m} - 1 = {}",
            field.order() - 1
        )));
    }
    if k > n || k1 > k.min(n - k) || k == 0 || k1 == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n and 1 <= k1 <= min(k, n-k), got n={n} k={k} k1={k1}"
        )));
    }
    if k + k1 > n {
        return Err(Error::InvalidParameter(format!("k + k1 = {} exceeds n = {n}", k + k1)));
    }

    // Evaluation points: n consecutive powers of the primitive element.
    let alpha = field.primitive_element();
    let points: Vec<u16> = (0..n).map(|i| field.pow(alpha, i)).collect();
    let monomial_rows = |degrees: std::ops::Range<usize>| -> Matrix {
        Matrix::from_rows(
            degrees
                .map(|d| points.iter().map(|&x| field.pow(x, d)).collect())
                .collect(),
        )
    };
    let g_diamond = monomial_rows(0..k - k1);
    let g_star_t = monomial_rows(k - k1..k);
    let g_star_prev = monomial_rows(k..k + k1);

    let g_c0 = Matrix::vstack(&[&g_star_t, &g_diamond]);
    let g_c1 = Matrix::vstack(&[&g_diamond, &g_star_prev]);
    let g_alpha = Matrix::vstack(&[&g_star_t, &g_diamond, &g_star_prev]);

    // Re-verify the trivial-intersection structure by rank.
    let checks = [
        (g_c0.rank(&field), k, "rank [G*_t; G^]"),
        (g_c1.rank(&field), k, "rank [G^; G*_{t-1}]"),
        (
            Matrix::vstack(&[&g_star_t, &g_star_prev]).rank(&field),
            2 * k1,
            "rank [G*_t; G*_{t-1}]",
        ),
        (g_alpha.rank(&field), k + k1, "rank full stack"),
    ];
    for (got, want, what) in checks {
        if got != want {
            return Err(Error::InvalidParameter(format!("{what} = {got}, expected {want}")));
        }
    }

    Ok(PumCode {
        field,
        n,
        k,
        k1,
        g_star_t,
        g_diamond,
        g_star_prev,
        g_c0,
        g_c1,
        g_alpha,
    })
}

/// Encodes information blocks for t = 1..L-1 (the boundary blocks i_0 and
/// i_L are zero) into L codeword blocks.
///
/// Each block is computed from the three-fragment relation and cross-checked
/// against the equivalent `i_t G_0 + i_{t-1} G_1` form.
pub fn encode_sequence(code: &PumCode, info: &[InfoBlock]) -> Result<Vec<Vec<u16>>> {
    for block in info {
        if block.i_star.len() != code.k1 || block.i_diamond.len() != code.k - code.k1 {
            return Err(Error::InvalidParameter("information block dimension mismatch".into()));
        }
    }
    let zero = InfoBlock::zero(code.k, code.k1);
    let len = info.len() + 1;
    let mut codewords = Vec::with_capacity(len);
    for t in 1..=len {
        let cur = if t <= info.len() { &info[t - 1] } else { &zero };
        let prev = if t >= 2 { &info[t - 2] } else { &zero };

        let mut c = code.g_star_t.left_mul(&code.field, &cur.i_star);
        for (a, b) in c
            .iter_mut()
            .zip(code.g_diamond.left_mul(&code.field, &cur.i_diamond))
        {
            *a = code.field.add(*a, b);
        }
        for (a, b) in c
            .iter_mut()
            .zip(code.g_star_prev.left_mul(&code.field, &prev.i_star))
        {
            *a = code.field.add(*a, b);
        }

        // G_0 = [G*_t; G^], G_1 = [G*_{t-1}; 0]: the stacked form must agree.
        let i_t: Vec<u16> = cur.i_star.iter().chain(&cur.i_diamond).copied().collect();
        let mut check = code.g_c0.left_mul(&code.field, &i_t);
        for (a, b) in check
            .iter_mut()
            .zip(code.g_star_prev.left_mul(&code.field, &prev.i_star))
        {
            *a = code.field.add(*a, b);
        }
        assert_eq!(c, check, "fragment and stacked encodings disagree");
        codewords.push(c);
    }
    Ok(codewords)
}

/// Marks the pattern's positions of a codeword block as erased.
pub fn erase(block: &[u16], pattern: &ErasurePattern) -> Vec<Option<u16>> {
    let mut received: Vec<Option<u16>> = block.iter().map(|&v| Some(v)).collect();
    for &pos in pattern.positions() {
        received[pos] = None;
    }
    received
}

/// Solves for the unknown information fragment of one step code.
///
/// `known` is the already-determined contribution to subtract from the
/// received block. Succeeds iff the generator restricted to the surviving
/// positions keeps full row rank.
pub fn erasure_decode_in_code(
    field: &GfField,
    received: &[Option<u16>],
    generator: &Matrix,
    known: &[u16],
) -> Result<Vec<u16>> {
    assert_eq!(received.len(), generator.cols());
    assert_eq!(known.len(), generator.cols());
    let surviving: Vec<usize> = (0..received.len()).filter(|&i| received[i].is_some()).collect();
    let mut restricted = Matrix::zeros(generator.rows(), surviving.len());
    let mut rhs = Vec::with_capacity(surviving.len());
    for (j, &pos) in surviving.iter().enumerate() {
        for r in 0..generator.rows() {
            restricted.set(r, j, generator.get(r, pos));
        }
        rhs.push(field.add(received[pos].expect("surviving position"), known[pos]));
    }
    solve_left(field, &restricted, &rhs)
}

/// Runs decoding Steps 1-4 on a received sequence until no new candidates
/// appear and returns the per-block candidate sets.
pub fn decode_sequence(
    code: &PumCode,
    received: &[Vec<Option<u16>>],
    options: DecodeOptions,
) -> Result<SequenceDecode> {
    let len = received.len();
    let field = &code.field;
    let zeros = vec![0u16; code.n];
    let mut candidates: Vec<Vec<Candidate>> = vec![Vec::new(); len];
    let weights: Vec<usize> = received
        .iter()
        .map(|block| block.iter().filter(|s| s.is_none()).count())
        .collect();
    let radii = code.conservative_radii();
    let mut step3_gap_attempts = 0;
    let mut step3_gap_successes = 0;

    let split = |x: &[u16]| -> (Vec<u16>, Vec<u16>, Vec<u16>) {
        // Fragment order follows the C_alpha generator stack.
        let (star, rest) = x.split_at(code.k1);
        let (diamond, prev) = rest.split_at(code.k - code.k1);
        (star.to_vec(), diamond.to_vec(), prev.to_vec())
    };
    let push_candidate = |set: &mut Vec<Candidate>, cand: Candidate| -> bool {
        if set.iter().any(|c| c.codeword == cand.codeword) {
            false
        } else {
            set.push(cand);
            true
        }
    };
    // The boundary information fragments i*_0 and i*_L are known zeros.
    let known_star = |candidates: &[Vec<Candidate>], block: isize, from_prev: bool| -> Vec<Vec<u16>> {
        if block < 0 || block as usize >= len {
            return vec![vec![0u16; code.k1]];
        }
        candidates[block as usize]
            .iter()
            .map(|c| {
                if from_prev {
                    c.i_star.clone()
                } else {
                    c.i_star_prev.clone()
                }
            })
            .collect()
    };

    // Step 1: every block independently in C_alpha.
    for (t, block) in received.iter().enumerate() {
        if let Ok(x) = filtered_decode(field, block, &code.g_alpha, &zeros)? {
            let codeword = code.g_alpha.left_mul(field, &x);
            let (i_star, i_diamond, i_star_prev) = split(&x);
            push_candidate(
                &mut candidates[t],
                Candidate {
                    codeword,
                    i_star,
                    i_diamond,
                    i_star_prev,
                },
            );
        }
    }

    // Steps 2-4 repeated until a full pass adds nothing.
    loop {
        let mut changed = false;

        // Step 2, forward: candidates of block t-1 supply i*_{t-1}.
        for t in 0..len {
            for star_prev in known_star(&candidates, t as isize - 1, true) {
                let known = code.g_star_prev.left_mul(field, &star_prev);
                if let Ok(x) = filtered_decode(field, &received[t], &code.g_c0, &known)? {
                    let (star, diamond) = x.split_at(code.k1);
                    let full: Vec<u16> = star
                        .iter()
                        .chain(diamond)
                        .chain(&star_prev)
                        .copied()
                        .collect();
                    let codeword = code.g_alpha.left_mul(field, &full);
                    changed |= push_candidate(
                        &mut candidates[t],
                        Candidate {
                            codeword,
                            i_star: star.to_vec(),
                            i_diamond: diamond.to_vec(),
                            i_star_prev: star_prev.clone(),
                        },
                    );
                }
            }
        }

        // Step 3, backward: candidates of block t+1 carry i*_t.
        if options.enable_backward {
            for t in (0..len).rev() {
                for star_cur in known_star(&candidates, t as isize + 1, false) {
                    let known = code.g_star_t.left_mul(field, &star_cur);
                    let gap = weights[t] > radii.tau_1 && weights[t] <= radii.tau_0;
                    if gap {
                        step3_gap_attempts += 1;
                    }
                    if let Ok(x) = filtered_decode(field, &received[t], &code.g_c1, &known)? {
                        if gap {
                            step3_gap_successes += 1;
                        }
                        let (diamond, star_prev) = x.split_at(code.k - code.k1);
                        let full: Vec<u16> = star_cur
                            .iter()
                            .chain(diamond)
                            .chain(star_prev)
                            .copied()
                            .collect();
                        let codeword = code.g_alpha.left_mul(field, &full);
                        changed |= push_candidate(
                            &mut candidates[t],
                            Candidate {
                                codeword,
                                i_star: star_cur.clone(),
                                i_diamond: diamond.to_vec(),
                                i_star_prev: star_prev.to_vec(),
                            },
                        );
                    }
                }
            }
        }

        // Step 4: both neighbor fragments known.
        for t in 0..len {
            for star_prev in known_star(&candidates, t as isize - 1, true) {
                for star_cur in known_star(&candidates, t as isize + 1, false) {
                    let mut known = code.g_star_prev.left_mul(field, &star_prev);
                    for (a, b) in known
                        .iter_mut()
                        .zip(code.g_star_t.left_mul(field, &star_cur))
                    {
                        *a = field.add(*a, b);
                    }
                    if let Ok(diamond) =
                        filtered_decode(field, &received[t], &code.g_diamond, &known)?
                    {
                        let full: Vec<u16> = star_cur
                            .iter()
                            .chain(&diamond)
                            .chain(&star_prev)
                            .copied()
                            .collect();
                        let codeword = code.g_alpha.left_mul(field, &full);
                        changed |= push_candidate(
                            &mut candidates[t],
                            Candidate {
                                codeword,
                                i_star: star_cur.clone(),
                                i_diamond: diamond,
                                i_star_prev: star_prev.clone(),
                            },
                        );
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }

    Ok(SequenceDecode {
        candidates,
        step3_gap_attempts,
        step3_gap_successes,
    })
}

/// Decode attempt that treats rank deficiency as a normal failure (`Ok(Err)`
/// collapsed to `Ok(None)`-style) but propagates inconsistent systems, which
/// signal an implementation bug.
#[allow(clippy::type_complexity)]
fn filtered_decode(
    field: &GfField,
    received: &[Option<u16>],
    generator: &Matrix,
    known: &[u16],
) -> Result<std::result::Result<Vec<u16>, ()>> {
    match erasure_decode_in_code(field, received, generator, known) {
        Ok(x) => Ok(Ok(x)),
        Err(Error::RankDeficient { .. }) => Ok(Err(())),
        Err(other) => Err(other),
    }
}

/// Samples information, encodes, erases positions i.i.d. with probability
/// `p`, decodes, and compares against the abstract automaton on the same
/// erasure weights with the conservative radii.
pub fn end_to_end_trial(
    code: &PumCode,
    p: f64,
    len: usize,
    master_seed: u64,
    trial_index: u64,
) -> Result<TrialRecord> {
    if !(0.0..=1.0).contains(&p) || len < 1 {
        return Err(Error::InvalidParameter(format!("bad trial parameters p={p} len={len}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, trial_index));
    let mask = (code.field.order() - 1) as u16;
    let info: Vec<InfoBlock> = (1..len)
        .map(|_| InfoBlock {
            i_star: (0..code.k1).map(|_| rng.gen::<u16>() & mask).collect(),
            i_diamond: (0..code.k - code.k1).map(|_| rng.gen::<u16>() & mask).collect(),
        })
        .collect();
    let codewords = encode_sequence(code, &info)?;

    let mut received = Vec::with_capacity(len);
    let mut weights = Vec::with_capacity(len);
    for block in &codewords {
        let positions: Vec<usize> = (0..code.n).filter(|_| rng.gen::<f64>() < p).collect();
        let pattern = ErasurePattern::new(positions, code.n)?;
        weights.push(pattern.weight());
        received.push(erase(block, &pattern));
    }

    let decoded = decode_sequence(code, &received, DecodeOptions::default())?;
    let codec_success: Vec<bool> = (0..len)
        .map(|t| {
            decoded.candidates[t]
                .iter()
                .any(|c| c.codeword == codewords[t])
        })
        .collect();
    let recovered: Vec<Option<InfoBlock>> = (0..len)
        .map(|t| {
            decoded.candidates[t]
                .iter()
                .find(|c| c.codeword == codewords[t])
                .map(|c| InfoBlock {
                    i_star: c.i_star.clone(),
                    i_diamond: c.i_diamond.clone(),
                })
        })
        .collect();

    let prediction = candidate_automaton(
        &WeightSequence(weights.clone()),
        &code.conservative_radii(),
    );

    Ok(TrialRecord {
        weights,
        codec_success,
        automaton_prediction: prediction.0,
        recovered,
        step3_gap_attempts: decoded.step3_gap_attempts,
        step3_gap_successes: decoded.step3_gap_successes,
    })
}
