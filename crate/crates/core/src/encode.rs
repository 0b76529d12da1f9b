//! Amplitude encodings of complex matrices.
//!
//! * [`Scheme::Rc`]: `Σ a_ij |i>_R |j>_C`, complex amplitudes.
//! * [`Scheme::Rcm`]: `Σ a_ijm |i>_R |j>_C |m>_M` with `a_ij = a_ij0 + i a_ij1`,
//!   real amplitudes, the extra qubit `M` separating real and imaginary parts.
//!
//! Both normalize to unit norm and keep the Frobenius norm as `scale`.
//! Dimensions are zero-padded up to powers of two; decoding crops back.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::qstate::{PureState, RegisterLayout};
use crate::scalar::{c, czero, Amp, Real};

/// Residual above which a decode is rejected.
pub const DECODE_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rc,
    Rcm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedMatrix<T> {
    pub state: PureState<T>,
    pub scheme: Scheme,
    pub rows: usize,
    pub cols: usize,
    /// Frobenius norm of the source matrix.
    pub scale: T,
    pub row_register: String,
    pub col_register: String,
}

/// A matrix (or column vector) read back out of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedResult<T> {
    /// Entries scaled by `known_scale` when present, unit Frobenius norm otherwise.
    pub matrix: Matrix<T>,
    pub known_scale: Option<T>,
    /// State mass not represented in `matrix`.
    pub residual: T,
}

impl<T: Real> DecodedResult<T> {
    /// Unit-Frobenius-norm direction of the result.
    pub fn direction(&self) -> Matrix<T> {
        self.matrix.normalized()
    }
}

/// Qubits needed to index `n` values (at least one).
pub fn index_width(n: usize) -> usize {
    n.max(2).next_power_of_two().trailing_zeros() as usize
}

fn check_matrix<T: Real>(m: &Matrix<T>) -> Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(())
}

pub fn encode_rc<T: Real>(matrix: &Matrix<T>) -> Result<EncodedMatrix<T>> {
    encode_rc_named(matrix, "R", "C")
}

/// RC encoding with custom register names.
pub fn encode_rc_named<T: Real>(
    matrix: &Matrix<T>,
    row: &str,
    col: &str,
) -> Result<EncodedMatrix<T>> {
    check_matrix(matrix)?;
    let (wr, wc) = (index_width(matrix.rows()), index_width(matrix.cols()));
    let layout = RegisterLayout::new(&[(row, wr), (col, wc)])?;
    let scale = matrix.frobenius_norm();
    let inv = scale.recip();
    let mut amps = vec![czero(); layout.dim()];
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            amps[(i << wc) | j] = matrix[(i, j)].scale(inv);
        }
    }
    Ok(EncodedMatrix {
        state: PureState::normalized(layout, amps)?,
        scheme: Scheme::Rc,
        rows: matrix.rows(),
        cols: matrix.cols(),
        scale,
        row_register: row.to_string(),
        col_register: col.to_string(),
    })
}

/// RCM encoding. `R` and `C` get the same width so that they can be swapped.
pub fn encode_rcm<T: Real>(matrix: &Matrix<T>) -> Result<EncodedMatrix<T>> {
    check_matrix(matrix)?;
    let w = index_width(matrix.rows()).max(index_width(matrix.cols()));
    let layout = RegisterLayout::new(&[("R", w), ("C", w), ("M", 1)])?;
    let scale = matrix.frobenius_norm();
    let inv = scale.recip();
    let mut amps = vec![czero(); layout.dim()];
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            let a = matrix[(i, j)];
            let base = ((i << w) | j) << 1;
            amps[base] = c(a.re * inv, T::zero());
            amps[base | 1] = c(a.im * inv, T::zero());
        }
    }
    Ok(EncodedMatrix {
        state: PureState::normalized(layout, amps)?,
        scheme: Scheme::Rcm,
        rows: matrix.rows(),
        cols: matrix.cols(),
        scale,
        row_register: "R".into(),
        col_register: "C".into(),
    })
}

/// Basis value of the non-payload registers carrying the most weight, that
/// weight, and the total norm.
fn dominant_sector<T: Real>(state: &PureState<T>, payload_mask: usize) -> (usize, T, T) {
    let mut weights: BTreeMap<usize, T> = BTreeMap::new();
    let mut total = T::zero();
    for (i, a) in state.amplitudes().iter().enumerate() {
        let w = a.norm_sqr();
        total += w;
        if w > T::zero() {
            let e = weights.entry(i & !payload_mask).or_insert(T::zero());
            *e += w;
        }
    }
    let (key, weight) =
        weights.into_iter().fold(
            (0, T::zero()),
            |best, (k, w)| if w > best.1 { (k, w) } else { best },
        );
    (key, weight, total)
}

fn finish_decode<T: Real>(
    entries: Matrix<T>,
    sector_weight: T,
    total: T,
    scale: Option<T>,
) -> Result<DecodedResult<T>> {
    let kept = crate::scalar::norm_sqr(entries.data());
    let residual = (total - kept).max(T::zero()) / total;
    if residual > T::lit(DECODE_RESIDUAL) || sector_weight == T::zero() {
        return Err(Error::NonProductSector(residual.as_f64()));
    }
    let unit = entries.scaled_real(kept.sqrt().recip());
    Ok(DecodedResult {
        matrix: match scale {
            Some(s) => unit.scaled_real(s),
            None => unit,
        },
        known_scale: scale,
        residual,
    })
}

/// Reads `|i>_row |j>_col` amplitudes out of a state whose other registers sit
/// in a single basis state. With `col = None` the result is a column vector.
pub fn decode_registers<T: Real>(
    state: &PureState<T>,
    row: &str,
    col: Option<&str>,
    rows: usize,
    cols: usize,
    scale: Option<T>,
) -> Result<DecodedResult<T>> {
    let layout = state.layout();
    let (rs, rw) = layout.span(row)?;
    let (cs, cw, cmask) = match col {
        Some(name) => {
            let (s, w) = layout.span(name)?;
            (s, w, layout.register_mask(name)?)
        }
        None => (0, 0, 0),
    };
    if rows > 1 << rw || cols > 1 << cw {
        return Err(Error::ShapeMismatch(format!(
            "{rows}x{cols} does not fit registers of widths {rw} and {cw}"
        )));
    }
    let payload = layout.register_mask(row)? | cmask;
    let (key, sector_weight, total) = dominant_sector(state, payload);
    let mut entries = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            entries[(i, j)] = state.amplitudes()[key | (i << rs) | (j << cs)];
        }
    }
    finish_decode(entries, sector_weight, total, scale)
}

/// Decodes with an explicit shape and optional scale.
pub fn decode_rc_state<T: Real>(
    state: &PureState<T>,
    rows: usize,
    cols: usize,
    scale: Option<T>,
) -> Result<DecodedResult<T>> {
    decode_registers(state, "R", Some("C"), rows, cols, scale)
}

/// Inverse of [`encode_rc`]; reproduces the source matrix including scale.
pub fn decode_rc<T: Real>(encoded: &EncodedMatrix<T>) -> Result<DecodedResult<T>> {
    if encoded.scheme != Scheme::Rc {
        return Err(Error::WrongScheme { expected: "RC" });
    }
    decode_registers(
        &encoded.state,
        &encoded.row_register,
        Some(&encoded.col_register),
        encoded.rows,
        encoded.cols,
        Some(encoded.scale),
    )
}

/// RCM decoding of a raw state: `a_ij = amp(i,j,0) + i·amp(i,j,1)`.
pub fn decode_rcm_state<T: Real>(
    state: &PureState<T>,
    rows: usize,
    cols: usize,
    scale: Option<T>,
) -> Result<DecodedResult<T>> {
    let layout = state.layout();
    let (rs, rw) = layout.span("R")?;
    let (cs, cw) = layout.span("C")?;
    let (ms, _) = layout.span("M")?;
    if rows > 1 << rw || cols > 1 << cw {
        return Err(Error::ShapeMismatch(format!(
            "{rows}x{cols} does not fit registers of widths {rw} and {cw}"
        )));
    }
    let payload =
        layout.register_mask("R")? | layout.register_mask("C")? | layout.register_mask("M")?;
    let (key, sector_weight, total) = dominant_sector(state, payload);
    let amps = state.amplitudes();
    let mut kept = T::zero();
    let mut entries = Matrix::zeros(rows, cols);
    let imag = c(T::zero(), T::one());
    for i in 0..rows {
        for j in 0..cols {
            let base = key | (i << rs) | (j << cs);
            let (re, im) = (amps[base], amps[base | (1 << ms)]);
            kept = kept + re.norm_sqr() + im.norm_sqr();
            entries[(i, j)] = re + imag * im;
        }
    }
    let residual = (total - kept).max(T::zero()) / total;
    if residual > T::lit(DECODE_RESIDUAL) || sector_weight == T::zero() {
        return Err(Error::NonProductSector(residual.as_f64()));
    }
    let unit = entries.scaled_real(kept.sqrt().recip());
    Ok(DecodedResult {
        matrix: match scale {
            Some(s) => unit.scaled_real(s),
            None => unit,
        },
        known_scale: scale,
        residual,
    })
}

pub fn decode_rcm<T: Real>(encoded: &EncodedMatrix<T>) -> Result<DecodedResult<T>> {
    if encoded.scheme != Scheme::Rcm {
        return Err(Error::WrongScheme { expected: "RCM" });
    }
    decode_rcm_state(
        &encoded.state,
        encoded.rows,
        encoded.cols,
        Some(encoded.scale),
    )
}

/// Cosine-style agreement `|<u,v>| / (‖u‖‖v‖)` between two flattened matrices.
pub fn alignment<T: Real>(u: &[Amp<T>], v: &[Amp<T>]) -> T {
    let dot: Amp<T> = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let nu = crate::scalar::norm_sqr(u).sqrt();
    let nv = crate::scalar::norm_sqr(v).sqrt();
    dot.norm() / (nu * nv)
}
