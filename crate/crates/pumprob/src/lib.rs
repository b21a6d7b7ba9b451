//! Exact and simulated decoding success probabilities for (partial) unit
//! memory convolutional codes in memoryless channels.
//!
//! The crate has four layers:
//!
//! - [`channel`]: error-weight distributions, decoding radii, the four
//!   threshold probabilities they induce, and Chernoff-type tail bounds;
//! - [`analytic`]: closed-form block success/failure probabilities of the
//!   4-step candidate decoder (including the streaming variant), crossover
//!   search against independent block coding, and parameter sweeps;
//! - [`sim`]: the candidate-propagation automaton, seeded Monte-Carlo
//!   estimation, and exact enumeration for short sequences;
//! - [`codec`]: a concrete Reed-Solomon-based (P)UM code over GF(2^m) with a
//!   full erasure decoder, used to validate the abstract model end to end.
//!
//! The [`cli`] module wires everything into a batch front-end; see the
//! `examples/` directory for library-level entry points.

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod error;
pub mod sim;

pub use analytic::{
    backward_chain_prob, backward_chain_prob_streaming, bound_crossover_lower_bound,
    crossover_bound_ratios, crossover_point, forward_chain_prob, independent_block_failure,
    independent_block_success, mds_radii, parameter_sweep, pum_block_success, um_block_success,
    BlockSuccessResult, ChainProbabilityProfile, CodeMode, CrossoverResult, RatioBound, SweepRow,
};
pub use channel::{
    tail_bound_lower, tail_bound_upper, threshold_probabilities, DecodingRadii,
    ThresholdProbabilities, WeightDistribution,
};
pub use codec::{build_rs_pum_code, GfField, InfoBlock, Matrix, PumCode};
pub use error::{Error, Result};
pub use sim::{
    block_success, candidate_automaton, enumerate_exact_success,
    enumerate_exact_success_profile, mix_seed, monte_carlo_success, sample_weight_sequence,
    wilson_interval, CandidateFlags, MonteCarloReport, WeightSequence,
};
