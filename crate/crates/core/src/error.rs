use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("subsystem dimensions {dims:?} do not multiply to matrix dimension {dim}")]
    BadFactorization { dims: Vec<usize>, dim: usize },

    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid subsystem selection {indices:?} for {count} factors")]
    InvalidSubsystems { indices: Vec<usize>, count: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state does not have unit trace (trace {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("state is not Bell-diagonal (max off-diagonal {off_diagonal:e})")]
    NotBellDiagonal { off_diagonal: f64 },

    #[error("canonical angles ({0}, {1}, {2}) violate pi/4 >= xi_x >= xi_y >= |xi_z| >= 0")]
    CanonicalOrder(f64, f64, f64),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("branch weight {0} is not positive")]
    NonPositiveWeight(f64),

    #[error("channel has no branches")]
    EmptyChannel,

    #[error("branch {0} is not of the CNOT class (not a combination of I and XX)")]
    NotCnotClass(usize),

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
}
