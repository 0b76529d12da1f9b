//! State-vector simulation of controlled-measurement garbage removal.
//!
//! The crate simulates pure states over named qubit registers and implements
//! the circuits built on them: the zero-controlled labeling of a garbage
//! branch, the controlled measurement that extracts the labeled branch with
//! certainty, the row-sum pipeline, Hermitian conjugation on the
//! real/imaginary (RCM) encoding, and the final stages of inner product,
//! matrix addition, multiplication, determinant phase, inversion and the
//! linear-system contraction. A small classical [`oracle`] provides ground
//! truth for all of them.
//!
//! Everything is generic over the scalar type through [`Real`]; the aliases
//! below fix it to `f64`, which is what the tolerances are calibrated for.

pub mod algorithms;
pub mod encode;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod measure;
pub mod oracle;
pub mod qstate;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use measure::Outcome;
pub use qstate::{Qubit, RegisterLayout};
pub use scalar::{Amp, Real};

/// Complex amplitude in double precision.
pub type C64 = num_complex::Complex<f64>;
pub type State = qstate::PureState<f64>;
pub type CMatrix = matrix::Matrix<f64>;
pub type Encoded = encode::EncodedMatrix<f64>;
pub type Decoded = encode::DecodedResult<f64>;
pub type Measured = measure::MeasureResult<f64>;
pub type Labeled = algorithms::LabeledState<f64>;
pub type Report = algorithms::PipelineReport<f64>;
