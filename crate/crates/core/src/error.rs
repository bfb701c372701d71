use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("invalid parameter {name} = {value}: must be {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("path-loss exponent alpha = {alpha} must exceed 2 (interference diverges otherwise)")]
    DivergentPathLoss { alpha: f64 },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
    #[error("quadrature did not converge: best value {value:e}, error estimate {err_estimate:e}")]
    NonConvergence { value: f64, err_estimate: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("ASE is not unimodal in p: {maxima} interior local maxima on the coarse grid")]
    NonUnimodalObjective { maxima: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("window radius {radius} km must exceed the link distance {d} km")]
    WindowTooSmall { radius: f64, d: f64 },
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: u64, got: u64 },
}
