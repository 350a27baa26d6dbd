use thiserror::Error;

/// Broad failure classes. Each maps onto a process exit code and an FFI status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Domain,
    Convergence,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Domain => 3,
            ErrorKind::Convergence => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Config => "config",
            ErrorKind::Domain => "domain",
            ErrorKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OmitError {
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("detuning policy could not be resolved: {0}")]
    Derivation(String),

    #[error("no physical steady state in [0, r0) at n = {n}; real roots: {roots:?}")]
    SteadyStateDomain { n: f64, roots: Vec<f64> },

    #[error("response denominator vanishes at delta = {delta} rad/s (|den| = {magnitude:e}, scale = {scale:e})")]
    Singularity {
        delta: f64,
        magnitude: f64,
        scale: f64,
    },

    #[error("tuning-point formula outside its domain: beta = {beta}, kappa = {kappa}, gamma_m = {gamma_m}")]
    FormulaDomain { beta: f64, kappa: f64, gamma_m: f64 },

    #[error(
        "integration diverged at t = {t:e} s; last finite state [q, p, Re c, Im c] = {last:?}"
    )]
    Divergence { t: f64, last: [f64; 4] },

    #[error("integration step size underflow at t = {t:e} s (h = {h:e} s)")]
    StepUnderflow { t: f64, h: f64 },

    #[error("trajectory not settled: relative drift {drift:e} exceeds {limit:e}")]
    NotSettled { drift: f64, limit: f64 },

    #[error("width {width} rad/s outside attainable range [{min}, {max}] rad/s")]
    OutOfRange { width: f64, min: f64, max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl OmitError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            OmitError::InvalidParams(_)
            | OmitError::Config(_)
            | OmitError::InvalidArgument(_)
            | OmitError::Io(_) => ErrorKind::Config,
            OmitError::Derivation(_)
            | OmitError::SteadyStateDomain { .. }
            | OmitError::Singularity { .. }
            | OmitError::FormulaDomain { .. }
            | OmitError::OutOfRange { .. } => ErrorKind::Domain,
            OmitError::Divergence { .. }
            | OmitError::StepUnderflow { .. }
            | OmitError::NotSettled { .. } => ErrorKind::Convergence,
        }
    }
}

impl From<std::io::Error> for OmitError {
    fn from(e: std::io::Error) -> Self {
        OmitError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, OmitError>;
