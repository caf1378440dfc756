use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e} exceeds {tol:.1e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("matrix is not unitary: max deviation of U*U^dag from I is {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("eigensolver limited to dimension {max}, got {got}")]
    EigenDimension { max: usize, got: usize },

    #[error("not a valid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("state has an eigenvalue {value:.3e} below the -{tol:.1e} floor")]
    NegativeEigenvalue { value: f64, tol: f64 },

    #[error("witness reference state is not pure (purity {purity})")]
    WitnessReferenceNotPure { purity: f64 },

    #[error("covariance matrix is indefinite: eigenvalue {value:.3e} below clip tolerance")]
    IndefiniteCovariance { value: f64 },

    #[error("quadrature resolution {got} below minimum {min}")]
    ResolutionTooSmall { got: usize, min: usize },

    #[error("quadrature produced a non-finite value at tau={tau}")]
    QuadratureNonFinite { tau: f64 },

    #[error("time grid must be strictly ascending and non-negative")]
    BadTimeGrid,

    #[error("witness does not change sign for tau <= {limit:.1e}; parameters are quasi-static")]
    NoSeparabilityCrossing { limit: f64 },

    #[error("Monte-Carlo run needs at least {min} trajectories, got {got}")]
    TooFewTrajectories { got: usize, min: usize },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("config line {line}: expected `key = value`, got `{text}`")]
    ConfigSyntax { line: usize, text: String },

    #[error("unknown config key `{key}`")]
    UnknownKey { key: String },

    #[error("missing required config key `{key}`")]
    MissingKey { key: &'static str },

    #[error("config key `{key}`: {reason}")]
    BadValue { key: String, reason: String },

    #[error("unknown preset `{name}` (expected fig2..fig9)")]
    UnknownPreset { name: String },

    #[error("writing `{path}` failed: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
