use crate::qcore::QubitLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit label {0} appears more than once")]
    LabelCollision(QubitLabel),
    #[error("qubit label {0} is not part of the register")]
    UnknownLabel(QubitLabel),
    #[error("invalid qubit label {0}: labels start at 1")]
    InvalidLabel(u32),
    #[error("new ordering is not a permutation of the register")]
    NotAPermutation,
    #[error("register of {0} qubits exceeds the cap of {cap}", cap = crate::qcore::MAX_QUBITS)]
    RegisterTooLarge(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator acts on {expected} qubits but {got} targets were given")]
    ArityMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("Kraus operators are not complete (max deviation {0:e})")]
    IncompleteKraus(f64),
    #[error("measurement basis is not orthonormal: {0}")]
    NonOrthonormalBasis(String),
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("metric does not vanish inside [{lo}, {hi}] (values {f_lo:e} and {f_hi:e})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("state is mixed (purity {0}); a pure state is required")]
    MixedState(f64),
    #[error("unknown outcome label {0:?}")]
    UnknownOutcome(String),
    #[error("numerical invariant violated: {0}")]
    Invariant(String),
    #[error("table error: {0}")]
    Table(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that signal a broken numerical invariant rather than
    /// bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::Invariant(_)
                | Error::NotUnitary(_)
                | Error::IncompleteKraus(_)
                | Error::NonOrthonormalBasis(_)
                | Error::InvalidDensityMatrix(_)
                | Error::NotNormalized(_)
        )
    }

    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
