use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register list is empty")]
    EmptyLayout,
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),
    #[error("register `{0}` has zero width")]
    ZeroWidth(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("register `{0}` is not assigned a value")]
    MissingAssignment(String),
    #[error("value {value} does not fit in register `{register}` of width {width}")]
    ValueOutOfRange {
        register: String,
        value: usize,
        width: usize,
    },
    #[error("bit {bit} is outside register `{register}` of width {width}")]
    UnknownQubit {
        register: String,
        bit: usize,
        width: usize,
    },
    #[error("registers `{0}` and `{1}` have different widths")]
    WidthMismatch(String, String),
    #[error("registers overlap: `{0}`")]
    OverlappingRegisters(String),
    #[error("target register `{0}` must be a single qubit")]
    TargetNotSingleQubit(String),
    #[error("control and target are the same qubit")]
    SameQubit,
    #[error("amplitude vector has length {got}, layout needs {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("selected branch is empty (weight {0:e})")]
    EmptyBranch(f64),
    #[error("measured qubit is in superposition inside the labeled sector; supply an rng")]
    UnresolvedMeasurement,
    #[error("matrix is all zeros")]
    ZeroMatrix,
    #[error("matrix dimensions must be at least 1")]
    EmptyMatrix,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("registers outside the payload are not in a single basis state (residual {0:e})")]
    NonProductSector(f64),
    #[error("expected {expected} encoding")]
    WrongScheme { expected: &'static str },
    #[error("payload weight {payload} plus garbage weight {garbage} is not 1")]
    WeightMismatch { payload: f64, garbage: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("gate needs at least one control")]
    NoControls,
}

pub type Result<T> = std::result::Result<T, Error>;
