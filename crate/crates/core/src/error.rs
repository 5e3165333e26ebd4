use thiserror::Error;

/// Invalid model parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("kappa must be positive and finite, got {0}")]
    Kappa(f64),
    #[error("horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("coupling {name} must be non-negative and finite, got {value}")]
    Coupling { name: &'static str, value: f64 },
    #[error("decay rate {name} must be non-negative and finite, got {value}")]
    Decay { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("relative slope must be positive and finite, got {0}")]
    Slope(f64),
}

/// Failures of the time propagators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("initial state has squared norm {0}, expected 1")]
    InitialNorm(f64),
    #[error("initial density matrix is not a valid state: {0}")]
    InitialDensity(String),
    #[error("tolerance {0:e} outside [1e-12, 1e-4]")]
    Tolerance(f64),
    #[error("non-finite state encountered at t = {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Errors while reading run or sweep configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("duplicate key {0:?}")]
    DuplicateKey(String),
    #[error("invalid value {value:?} for key {key:?}: {reason}")]
    Value { key: String, value: String, reason: String },
    #[error("missing key {0:?}")]
    Missing(String),
    #[error("unknown figure preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Top-level error for the command layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
