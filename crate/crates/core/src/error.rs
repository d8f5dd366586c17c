use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("zero symbol")]
    ZeroSymbol,
    #[error("symbol is not Fredholm: |f| = {min_modulus:e} at theta = {witness_theta}")]
    NotFredholm { witness_theta: f64, min_modulus: f64 },
    #[error("grid of {grid} points too coarse: phase step {step} at theta = {theta}")]
    GridTooCoarse { grid: usize, step: f64, theta: f64 },
    #[error("no clean singular-value gap around {sigma_tol:e} (sigma = {sigma:e})")]
    Inconclusive { sigma_tol: f64, sigma: f64 },
    #[error("coefficients outside the regime of this construction: {0}")]
    WrongRegime(String),
    #[error("energy {energy} within {gap:e} of eigenvalue {eigenvalue}")]
    DegenerateFermi { energy: f64, eigenvalue: f64, gap: f64 },
    #[error("flux origin ({x}, {y}) coincides with a lattice site")]
    OriginOnSite { x: f64, y: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
