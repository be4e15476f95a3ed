use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} outside the open interval (-1, 1)")]
    OutOfRange { value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no seed bound for degree {0}")]
    MissingSeed(u32),

    #[error("no admissible factorization of {target}+1 hits the seed table")]
    NoWitness { target: u32 },

    #[error("integration failed at t = {t}: {reason} (last state {state:?})")]
    IntegrationFailure {
        t: f64,
        state: [f64; 2],
        reason: String,
    },

    #[error("no return to the section within t_max = {t_max}")]
    NoReturn { t_max: f64 },

    #[error(
        "field is tangent to the section at {point:?} (normal component {normal_component:e})"
    )]
    DegenerateCrossing {
        point: [f64; 2],
        normal_component: f64,
    },

    #[error("cycle search failed after {iterations} iterations (residual {residual:e})")]
    SearchFailure { iterations: usize, residual: f64 },

    #[error("lift failed on rectangles {failed:?} ({found} of {expected} cycles found)")]
    PartialLift {
        failed: Vec<(usize, usize)>,
        found: usize,
        expected: usize,
    },
}
