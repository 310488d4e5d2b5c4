use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("balanced-or-reversed potential: V(1) = {v1} is not negative")]
    BalancedPotential { v1: f64 },
    #[error("structural condition `{condition}` fails at u = {at}")]
    Structure { condition: &'static str, at: f64 },
    #[error("root solve failed: {0}")]
    Root(&'static str),
    #[error("blow-up guard: max u = {max} exceeds {limit} at t = {t}")]
    BlowUp { max: f64, limit: f64, t: f64 },
    #[error("weighted overflow guard: c·L = {cl} exceeds {limit}")]
    WeightOverflow { cl: f64, limit: f64 },
    #[error("field does not belong to the weighted class: tail {tail} at x = {x}")]
    WeightedTail { tail: f64, x: f64 },
    #[error("advection guard: c·dt/dx = {value} exceeds {limit}")]
    Advection { value: f64, limit: f64 },
    #[error("energy unbounded below: E = {energy} under floor {floor}")]
    EnergyUnbounded { energy: f64, floor: f64 },
    #[error("insufficient samples: {0}")]
    InsufficientSamples(&'static str),
    #[error("bracket does not straddle: both ends {0}")]
    Bracket(&'static str),
    #[error("degenerate peak: V'(θ*) vanishes")]
    DegeneratePeak,
    #[error("family is not monotone in λ near λ = {lambda}")]
    NotMonotone { lambda: f64 },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
