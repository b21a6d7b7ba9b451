//! Concrete Reed-Solomon-based (P)UM codec over an erasure channel.

pub mod gf;
pub mod matrix;
pub mod pum;

pub use gf::{primitive_poly, GfField};
pub use matrix::{solve_left, Matrix};
pub use pum::{
    build_rs_pum_code, decode_sequence, encode_sequence, end_to_end_trial, erase,
    erasure_decode_in_code, Candidate, DecodeOptions, ErasurePattern, InfoBlock, PumCode,
    SequenceDecode, TrialRecord,
};
