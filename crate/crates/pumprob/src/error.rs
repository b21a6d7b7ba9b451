use thiserror::Error;

/// Errors produced by the probability, simulation, and codec layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Chernoff-type tail bounds require tau > p*n.
    #[error("bound not applicable: tau = {tau} must exceed p*n = {pn}")]
    BoundNotApplicable { tau: usize, pn: f64 },

    /// A derived lower bound came out non-positive, so the ratio bound says nothing.
    #[error("bound vacuous: derived lower bound {0} is not positive")]
    BoundVacuous(f64),

    #[error("not a unit-memory configuration: p_d = {0} must be 0")]
    NotUmConfiguration(f64),

    #[error("no crossover found: the scheme never beats the independent code on the scan grid")]
    NoCrossoverFound,

    /// Erasure decoding failure: the surviving columns do not determine the information word.
    #[error("rank deficient: {have} independent columns available, {need} needed")]
    RankDeficient { have: usize, need: usize },

    /// An erasure-channel linear system disagreed on a known position. This cannot
    /// happen in a correct implementation and must abort the trial.
    #[error("inconsistent system: erasure decoding produced a contradictory equation")]
    InconsistentSystem,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
