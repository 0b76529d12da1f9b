//! Circuits built from the primitives.
//!
//! Every pipeline ends the same way: a state whose useful branch is tagged by
//! a label ancilla (`|1>` on the label, garbage on `|0>`) gets a fresh ancilla
//! `A2`, a CNOT from the label onto `A2`, and then the controlled measurement
//! `M_{label, A2}`. The labeled branch comes out with certainty; its weight,
//! and with it the overall normalization, is only visible in
//! [`PipelineReport::branch_weight`].
//!
//! The row-sum pipeline builds its labeled state with gates. The application
//! stages (inner product through linear contraction) start from their labeled
//! state written down directly in closed form by [`prepare_labeled_state`],
//! with a random garbage component.

use rand::Rng;
use rayon::prelude::*;

use crate::encode::{decode_registers, index_width, DecodedResult, EncodedMatrix, Scheme};
use crate::error::{Error, Result};
use crate::gates::{
    apply_single, cnot, controlled_on_zero_flip, hadamard_register, mcx_decomposition_count,
    swap_registers, SingleQubitGate,
};
use crate::matrix::Matrix;
use crate::measure::{controlled_measure, measure_sampled, MeasureResult, Outcome, EMPTY_BRANCH};
use crate::oracle;
use crate::qstate::{PureState, Qubit, RegisterLayout};
use crate::rng::{gaussian_amplitudes, trial_rng};
use crate::scalar::{c, czero, norm_sqr, Amp, Real};

/// Name of the ancilla added for the controlled measurement.
pub const MEASURED_ANCILLA: &str = "A2";

/// Condition estimates at or above this are rejected by [`matrix_inverse`].
pub const MAX_CONDITION: f64 = 1e8;

/// How the final ancilla readout is performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasureMode {
    /// Controlled measurement: always returns the labeled branch if it exists.
    #[default]
    Ideal,
    /// Plain Born-rule measurement of `A2`, failing with the garbage weight.
    Sampled { seed: u64 },
}

/// A state with a useful branch on `label = 1` and garbage on `label = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState<T> {
    pub state: PureState<T>,
    pub label_ancilla: String,
    pub payload_registers: Vec<String>,
    pub garbage_weight: T,
}

impl<T: Real> LabeledState<T> {
    /// Squared norm of the `label = 1` sector.
    pub fn labeled_weight(&self) -> Result<T> {
        let (_, sector) = self.state.sector(&self.label_ancilla, 1)?;
        Ok(norm_sqr(&sector))
    }

    /// Checks the weight bookkeeping and that every non-payload register is in
    /// a single basis state inside the labeled sector. Returns the mass of the
    /// labeled sector that violates the latter.
    pub fn check(&self) -> Result<T> {
        let labeled = self.labeled_weight()?;
        if (labeled + self.garbage_weight - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::WeightMismatch {
                payload: labeled.as_f64(),
                garbage: self.garbage_weight.as_f64(),
            });
        }
        if labeled <= T::lit(EMPTY_BRANCH) {
            return Ok(T::zero());
        }
        let layout = self.state.layout();
        let label = layout.register_mask(&self.label_ancilla)?;
        let mut payload = label;
        for r in &self.payload_registers {
            payload |= layout.register_mask(r)?;
        }
        let mut per_key = std::collections::BTreeMap::<usize, T>::new();
        for (i, a) in self.state.amplitudes().iter().enumerate() {
            if i & label != 0 {
                let e = per_key.entry(i & !payload).or_insert(T::zero());
                *e += a.norm_sqr();
            }
        }
        let best = per_key.values().fold(T::zero(), |m, &w| m.max(w));
        let impurity = (labeled - best) / labeled;
        if impurity > T::lit(1e-10) {
            return Err(Error::NonProductSector(impurity.as_f64()));
        }
        Ok(impurity)
    }
}

/// Final-stage output of a pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum PipelineResult<T> {
    /// Matrix or column vector, scaled to the represented object when its
    /// norm is recoverable.
    Matrix(DecodedResult<T>),
    /// Unit-modulus complex number.
    Phase(Amp<T>),
    /// Nothing extracted: no labeled branch, or the sampled readout failed.
    Absent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport<T> {
    pub outcome: Outcome,
    /// Squared norm of the labeled branch, i.e. the success probability of a
    /// plain measurement of the label.
    pub branch_weight: T,
    /// Norm of the represented object, recovered from `branch_weight`. For
    /// the row sum this is the normalization of the encoded state's row sums.
    pub recovered_norm: Option<T>,
    /// Serial depth of the gates executed after state preparation.
    pub gate_depth: usize,
    pub result: PipelineResult<T>,
    /// Multiplier applied to the closed-form labeled amplitudes.
    pub prep_scale: Option<T>,
    /// State right before the measurement.
    pub pre_measure: PureState<T>,
    pub final_state: PureState<T>,
}

impl<T: Real> PipelineReport<T> {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::One
    }

    pub fn decoded(&self) -> Option<&DecodedResult<T>> {
        match &self.result {
            PipelineResult::Matrix(d) => Some(d),
            _ => None,
        }
    }

    pub fn phase(&self) -> Option<Amp<T>> {
        match self.result {
            PipelineResult::Phase(p) => Some(p),
            _ => None,
        }
    }
}

/// Adds `A2` and copies the label onto it.
pub fn attach_measured_ancilla<T: Real>(labeled: &LabeledState<T>) -> Result<PureState<T>> {
    let s = labeled.state.add_ancilla(MEASURED_ANCILLA, 1)?;
    cnot(
        &s,
        &Qubit::from(labeled.label_ancilla.as_str()),
        &Qubit::from(MEASURED_ANCILLA),
    )
}

struct FinalStage<T> {
    pre_measure: PureState<T>,
    measured: MeasureResult<T>,
    labeled_weight: T,
}

fn final_stage<T: Real>(labeled: &LabeledState<T>, mode: MeasureMode) -> Result<FinalStage<T>> {
    let labeled_weight = labeled.labeled_weight()?;
    let pre_measure = attach_measured_ancilla(labeled)?;
    let measured = match mode {
        MeasureMode::Ideal => controlled_measure(
            &pre_measure,
            &Qubit::from(labeled.label_ancilla.as_str()),
            &Qubit::from(MEASURED_ANCILLA),
        )?,
        MeasureMode::Sampled { seed } => measure_sampled(
            &pre_measure,
            &Qubit::from(MEASURED_ANCILLA),
            &mut trial_rng(seed, 0),
        )?,
    };
    Ok(FinalStage {
        pre_measure,
        measured,
        labeled_weight,
    })
}

fn report<T: Real>(
    stage: FinalStage<T>,
    gate_depth: usize,
    prep_scale: Option<T>,
    extract: impl FnOnce(&PureState<T>, T) -> Result<(PipelineResult<T>, Option<T>)>,
) -> Result<PipelineReport<T>> {
    let FinalStage {
        pre_measure,
        measured,
        labeled_weight,
    } = stage;
    let (result, recovered_norm) = if measured.outcome == Outcome::One {
        extract(&measured.post_state, labeled_weight)?
    } else {
        (PipelineResult::Absent, None)
    };
    Ok(PipelineReport {
        outcome: measured.outcome,
        branch_weight: if measured.outcome == Outcome::NotMeasured {
            T::zero()
        } else {
            labeled_weight
        },
        recovered_norm,
        gate_depth,
        result,
        prep_scale,
        pre_measure,
        final_state: measured.post_state,
    })
}

// ---------------------------------------------------------------------------
// Row sum

/// `|χ2>`: Hadamards on the column register, then a flip of the label `A1`
/// where the column register reads zero. The labeled branch is
/// `2^{-n_C/2} Σ_i (Σ_j a_ij) |i>|0>|1>`.
pub fn label_row_sums<T: Real>(encoded: &EncodedMatrix<T>) -> Result<LabeledState<T>> {
    if encoded.scheme != Scheme::Rc {
        return Err(Error::WrongScheme { expected: "RC" });
    }
    let summed = encoded.col_register.as_str();
    let s = hadamard_register(&encoded.state, summed)?;
    let s = controlled_on_zero_flip(&s.add_ancilla("A1", 1)?, summed, "A1")?;
    let (_, sector) = s.sector("A1", 1)?;
    Ok(LabeledState {
        garbage_weight: T::one() - norm_sqr(&sector),
        state: s,
        label_ancilla: "A1".into(),
        payload_registers: vec![encoded.row_register.clone()],
    })
}

/// Depth of the row-sum circuit: one layer of parallel Hadamards, the
/// zero-controlled flip, and the CNOT onto `A2`.
pub fn row_sum_depth(n_summed: usize) -> Result<usize> {
    Ok(1 + mcx_decomposition_count(n_summed)?.depth + 1)
}

/// Normalized row sums `Σ_j a_ij` of an RC-encoded matrix.
///
/// The decoded result carries the row sums of the source matrix (encoded
/// scale times the recovered normalization `C`).
pub fn row_sum<T: Real>(
    encoded: &EncodedMatrix<T>,
    mode: MeasureMode,
) -> Result<PipelineReport<T>> {
    let labeled = label_row_sums(encoded)?;
    let n_summed = encoded.state.layout().width(&encoded.col_register)?;
    let stage = final_stage(&labeled, mode)?;
    report(stage, row_sum_depth(n_summed)?, None, |post, p| {
        let cnorm = (p * T::lit(2f64.powi(n_summed as i32))).sqrt();
        let decoded = decode_registers(
            post,
            &encoded.row_register,
            None,
            encoded.rows,
            1,
            Some(encoded.scale * cnorm),
        )?;
        Ok((PipelineResult::Matrix(decoded), Some(cnorm)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    /// Width of the summed register.
    pub n_r: usize,
    /// Probability that a plain measurement of `A2` finds the labeled branch.
    pub analytic_p: f64,
    pub empirical_p: f64,
    /// Binomial standard deviation of `empirical_p`.
    pub sigma: f64,
    pub controlled_success_rate: f64,
    pub trials: usize,
}

impl BenchRow {
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.empirical_p - self.analytic_p).abs() <= k * self.sigma
    }
}

/// Compares plain measurement of `A2` on the row-sum `|χ3>` (repeated
/// `trials` times, trial `t` on rng stream `t`) with the controlled
/// measurement.
pub fn naive_success_bench<T: Real>(
    encoded: &EncodedMatrix<T>,
    trials: usize,
    master_seed: u64,
) -> Result<BenchRow> {
    if trials == 0 {
        return Err(Error::ShapeMismatch("trials must be at least 1".into()));
    }
    let labeled = label_row_sums(encoded)?;
    let chi3 = attach_measured_ancilla(&labeled)?;
    let analytic_p = labeled.labeled_weight()?.as_f64();
    let a2 = Qubit::from(MEASURED_ANCILLA);
    let hits = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            measure_sampled(&chi3, &a2, &mut trial_rng(master_seed, t))
                .map(|r| usize::from(r.outcome == Outcome::One))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let controlled = controlled_measure(&chi3, &Qubit::from("A1"), &a2)?;
    Ok(BenchRow {
        n_r: encoded.state.layout().width(&encoded.col_register)?,
        analytic_p,
        empirical_p: hits as f64 / trials as f64,
        sigma: (analytic_p * (1.0 - analytic_p) / trials as f64).sqrt(),
        controlled_success_rate: if controlled.outcome == Outcome::One {
            1.0
        } else {
            0.0
        },
        trials,
    })
}

// ---------------------------------------------------------------------------
// Hermitian conjugation

/// `W = SWAP(R, C) · Z_M` on an RCM encoding. Unitary; no measurement.
pub fn hermitian_conjugate<T: Real>(encoded: &EncodedMatrix<T>) -> Result<EncodedMatrix<T>> {
    if encoded.scheme != Scheme::Rcm {
        return Err(Error::WrongScheme { expected: "RCM" });
    }
    let s = apply_single(&encoded.state, &Qubit::from("M"), SingleQubitGate::Z)?;
    let s = swap_registers(&s, "R", "C")?;
    Ok(EncodedMatrix {
        state: s,
        rows: encoded.cols,
        cols: encoded.rows,
        ..encoded.clone()
    })
}

// ---------------------------------------------------------------------------
// Closed-form labeled states

/// Writes `Σ payload_k |k>|1>_label + √w |g>|0>_label` with a seeded random
/// unit garbage state `|g>`. `payload` is indexed by the global basis index of
/// `layout`; the label is appended as the least significant qubit.
pub fn prepare_labeled_state<T: Real, R: Rng + ?Sized>(
    payload: &[Amp<T>],
    layout: &RegisterLayout,
    payload_registers: &[&str],
    label_ancilla: &str,
    garbage_weight: T,
    rng: &mut R,
) -> Result<LabeledState<T>> {
    if payload.len() != layout.dim() {
        return Err(Error::LengthMismatch {
            expected: layout.dim(),
            got: payload.len(),
        });
    }
    let pw = norm_sqr(payload);
    let mismatch = || Error::WeightMismatch {
        payload: pw.as_f64(),
        garbage: garbage_weight.as_f64(),
    };
    if pw > T::one() + T::lit(1e-12) || garbage_weight < T::zero() {
        return Err(mismatch());
    }
    if (pw + garbage_weight - T::one()).abs() > T::lit(1e-10) {
        return Err(mismatch());
    }
    for r in payload_registers {
        layout.width(r)?;
    }
    let full = layout.with_appended(label_ancilla, 1)?;
    let mut amps = vec![czero(); full.dim()];
    for (k, a) in payload.iter().enumerate() {
        amps[(k << 1) | 1] = *a;
    }
    if garbage_weight > T::zero() {
        let g = gaussian_amplitudes::<T, R>(layout.dim(), rng);
        let k = (garbage_weight / norm_sqr(&g)).sqrt();
        for (i, a) in g.iter().enumerate() {
            amps[i << 1] = a.scale(k);
        }
    }
    Ok(LabeledState {
        state: PureState::from_amplitudes(full, amps)?,
        label_ancilla: label_ancilla.to_string(),
        payload_registers: payload_registers.iter().map(|s| s.to_string()).collect(),
        garbage_weight,
    })
}

/// Smallest exponent `e >= base` with `norm_sq / 2^e <= 1`; the labeled
/// amplitudes are then scaled by `2^{-e/2}`.
fn power_of_two_scale<T: Real>(norm_sq: T, base: usize) -> T {
    let mut e = base as i32;
    while norm_sq.as_f64() / 2f64.powi(e) > 1.0 {
        e += 1;
    }
    T::lit(2f64.powi(-e).sqrt())
}

/// Resolves the preparation multiplier and builds the labeled state.
#[allow(clippy::too_many_arguments)]
fn prepare_scaled<T: Real>(
    unscaled: Vec<Amp<T>>,
    layout: &RegisterLayout,
    payload_registers: &[&str],
    label: &str,
    base_exponent: usize,
    prep: Option<T>,
    garbage_seed: u64,
) -> Result<(LabeledState<T>, T)> {
    let norm_sq = norm_sqr(&unscaled);
    let scale = prep.unwrap_or_else(|| power_of_two_scale(norm_sq, base_exponent));
    let payload: Vec<Amp<T>> = unscaled.iter().map(|a| a.scale(scale)).collect();
    let w = T::one() - norm_sqr(&payload);
    let w = if w.abs() < T::lit(1e-15) {
        T::zero()
    } else {
        w
    };
    let labeled = prepare_labeled_state(
        &payload,
        layout,
        payload_registers,
        label,
        w,
        &mut trial_rng(garbage_seed, u64::MAX),
    )?;
    Ok((labeled, scale))
}

fn seed_of(mode: MeasureMode) -> u64 {
    match mode {
        MeasureMode::Ideal => 0,
        MeasureMode::Sampled { seed } => seed,
    }
}

/// Reads the single labeled amplitude, which after the measurement is a pure phase.
fn read_phase<T: Real>(post: &PureState<T>, assignment: &[(&str, usize)]) -> Result<Amp<T>> {
    let a = post.amplitude_of(assignment)?;
    Ok(a / a.norm())
}

fn normalized_vec<T: Real>(v: &[Amp<T>]) -> (Vec<Amp<T>>, T) {
    let n = norm_sqr(v).sqrt();
    if n == T::zero() {
        (v.to_vec(), n)
    } else {
        (v.iter().map(|a| a.scale(n.recip())).collect(), n)
    }
}

// ---------------------------------------------------------------------------
// Inner product

/// Phase of the bilinear product `<Ψ2*|Ψ1> = Σ_j ψ2_j ψ1_j`.
///
/// Registers `S1, S2` (n qubits each), `A`, `B1`; label `B2`. The labeled term
/// is `<Ψ2*|Ψ1> 2^{-3n/2} |0>|0>|0>|1>` for the normalized inputs.
pub fn inner_product_phase<T: Real>(
    psi1: &[Amp<T>],
    psi2: &[Amp<T>],
    mode: MeasureMode,
    prep: Option<T>,
) -> Result<PipelineReport<T>> {
    if psi1.len() != psi2.len() || psi1.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}",
            psi1.len(),
            psi2.len()
        )));
    }
    let n = index_width(psi1.len());
    let (u, n1) = normalized_vec(psi1);
    let (v, n2) = normalized_vec(psi2);
    let bil = oracle::bilinear(&u, &v)?;
    let layout = RegisterLayout::new(&[("S1", n), ("S2", n), ("A", 1), ("B1", 1)])?;
    let mut unscaled = vec![czero(); layout.dim()];
    unscaled[layout.index_of(&[("S1", 0), ("S2", 0), ("A", 0), ("B1", 1)])?] = bil;
    let (labeled, scale) = prepare_scaled(
        unscaled,
        &layout,
        &["S1", "S2", "A"],
        "B2",
        3 * n,
        prep,
        seed_of(mode),
    )?;
    let stage = final_stage(&labeled, mode)?;
    report(stage, 1, Some(scale), |post, p| {
        let phase = read_phase(
            post,
            &[
                ("S1", 0),
                ("S2", 0),
                ("A", 0),
                ("B1", 1),
                ("B2", 1),
                (MEASURED_ANCILLA, 1),
            ],
        )?;
        Ok((
            PipelineResult::Phase(phase),
            Some(n1 * n2 * p.sqrt() / scale),
        ))
    })
}

// ---------------------------------------------------------------------------
// Matrix addition

/// Direction of `A1 + A2`, stored in registers `R1, C1`.
///
/// The pair is normalized jointly; the labeled amplitudes are
/// `(s/2)(a1_jl + a2_jl)` with `s = 1` unless `prep` overrides `s/2`.
pub fn matrix_add<T: Real>(
    a1: &Matrix<T>,
    a2: &Matrix<T>,
    mode: MeasureMode,
    prep: Option<T>,
) -> Result<PipelineReport<T>> {
    if a1.shape() != a2.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} + {:?}",
            a1.shape(),
            a2.shape()
        )));
    }
    let joint = (a1.frobenius_norm().powi(2) + a2.frobenius_norm().powi(2)).sqrt();
    if joint == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    let (rows, cols) = a1.shape();
    let (wr, wc) = (index_width(rows), index_width(cols));
    let layout = RegisterLayout::new(&[
        ("R1", wr),
        ("C1", wc),
        ("D1", 1),
        ("R2", wr),
        ("C2", wc),
        ("D2", 1),
        ("B1", 1),
    ])?;
    let sum = oracle::add(a1, a2)?;
    let mut unscaled = vec![czero(); layout.dim()];
    for j in 0..rows {
        for l in 0..cols {
            let k = layout.index_of(&[
                ("R1", j),
                ("C1", l),
                ("D1", 0),
                ("R2", 0),
                ("C2", 0),
                ("D2", 0),
                ("B1", 1),
            ])?;
            unscaled[k] = sum[(j, l)].scale(joint.recip());
        }
    }
    let (labeled, scale) = prepare_scaled(
        unscaled,
        &layout,
        &["R1", "C1"],
        "B2",
        2,
        prep,
        seed_of(mode),
    )?;
    let stage = final_stage(&labeled, mode)?;
    report(stage, 1, Some(scale), |post, p| {
        let g = joint * p.sqrt() / scale;
        let d = decode_registers(post, "R1", Some("C1"), rows, cols, Some(g))?;
        Ok((PipelineResult::Matrix(d), Some(g)))
    })
}

// ---------------------------------------------------------------------------
// Matrix multiplication

/// Direction of `A1 · A2` (`N×K` times `K×M`), stored in registers `R1, C2`.
///
/// Registers `R1, C1, R2, C2, A, B1`; label `B2`. Labeled amplitudes are
/// `2^{-3k/2} Σ_j a1_{j1 j} a2_{j l1}` for the normalized factors, with
/// `k` the width of the contracted index.
pub fn matrix_mul<T: Real>(
    a1: &Matrix<T>,
    a2: &Matrix<T>,
    mode: MeasureMode,
    prep: Option<T>,
) -> Result<PipelineReport<T>> {
    if a1.cols() != a2.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} * {:?}",
            a1.shape(),
            a2.shape()
        )));
    }
    let (n1, n2) = (a1.frobenius_norm(), a2.frobenius_norm());
    if n1 == T::zero() || n2 == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    let (rows, inner, cols) = (a1.rows(), a1.cols(), a2.cols());
    let k = index_width(inner);
    let (wr, wc) = (index_width(rows), index_width(cols));
    let layout = RegisterLayout::new(&[
        ("R1", wr),
        ("C1", k),
        ("R2", k),
        ("C2", wc),
        ("A", 1),
        ("B1", 1),
    ])?;
    let prod = oracle::mul(&a1.normalized(), &a2.normalized())?;
    let mut unscaled = vec![czero(); layout.dim()];
    for j1 in 0..rows {
        for l1 in 0..cols {
            let idx = layout.index_of(&[
                ("R1", j1),
                ("C1", 0),
                ("R2", 0),
                ("C2", l1),
                ("A", 0),
                ("B1", 1),
            ])?;
            unscaled[idx] = prod[(j1, l1)];
        }
    }
    let (labeled, scale) = prepare_scaled(
        unscaled,
        &layout,
        &["R1", "C2"],
        "B2",
        3 * k,
        prep,
        seed_of(mode),
    )?;
    let stage = final_stage(&labeled, mode)?;
    report(stage, 1, Some(scale), |post, p| {
        let g = n1 * n2 * p.sqrt() / scale;
        let d = decode_registers(post, "R1", Some("C2"), rows, cols, Some(g))?;
        Ok((PipelineResult::Matrix(d), Some(g)))
    })
}

// ---------------------------------------------------------------------------
// Determinant phase

/// `det(A) / |det(A)|`.
///
/// Registers `S, A`; label `B`. The labeled coefficient is `λ det(A)` with
/// `λ = 2^{-Ñ/2}`, `Ñ >= N` the smallest exponent keeping the branch weight
/// at most one, unless `prep` fixes `λ`. The magnitude `|det A|` survives
/// only in `branch_weight`.
pub fn determinant_phase<T: Real>(
    a: &Matrix<T>,
    mode: MeasureMode,
    prep: Option<T>,
) -> Result<PipelineReport<T>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "determinant of {:?}",
            a.shape()
        )));
    }
    let det = oracle::det_lu(a)?;
    let n = index_width(a.rows());
    let layout = RegisterLayout::new(&[("S", n), ("A", 1)])?;
    let mut unscaled = vec![czero(); layout.dim()];
    unscaled[0] = det;
    let (labeled, scale) = prepare_scaled(
        unscaled,
        &layout,
        &["S"],
        "B",
        a.rows(),
        prep,
        seed_of(mode),
    )?;
    let stage = final_stage(&labeled, mode)?;
    report(stage, 1, Some(scale), |post, p| {
        let phase = read_phase(post, &[("S", 0), ("A", 0), ("B", 1), (MEASURED_ANCILLA, 1)])?;
        Ok((PipelineResult::Phase(phase), Some(p.sqrt() / scale)))
    })
}

// ---------------------------------------------------------------------------
// Matrix inverse

/// `A^{-1}` read from registers `R` (row `j`) and `C` (column `i`).
///
/// Registers `S, R, C, A`; label `B`. Labeled amplitudes are
/// `-q det(A) A^{-1}_{ji} λ` with `q = 1` and `A^{-1}` taken from the
/// Gauss–Jordan oracle. The state therefore carries the global phase
/// `-det/|det|`, which is divided out of the decoded matrix.
pub fn matrix_inverse<T: Real>(
    a: &Matrix<T>,
    mode: MeasureMode,
    prep: Option<T>,
) -> Result<PipelineReport<T>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::ShapeMismatch(format!("inverse of {:?}", a.shape())));
    }
    let inv = oracle::inverse_gj(a)?;
    if inv.condition_estimate >= T::lit(MAX_CONDITION) {
        return Err(Error::IllConditioned(inv.condition_estimate.as_f64()));
    }
    let det = oracle::det_lu(a)?;
    if det.norm() == T::zero() {
        return Err(Error::Singular);
    }
    let size = a.rows();
    let n = index_width(size);
    let layout = RegisterLayout::new(&[("S", n), ("R", n), ("C", n), ("A", 1)])?;
    let coeff = -det;
    let mut unscaled = vec![czero(); layout.dim()];
    for j in 0..size {
        for i in 0..size {
            let idx = layout.index_of(&[("S", 0), ("R", j), ("C", i), ("A", 0)])?;
            unscaled[idx] = coeff * inv.value[(j, i)];
        }
    }
    let (labeled, scale) = prepare_scaled(
        unscaled,
        &layout,
        &["R", "C"],
        "B",
        size + n,
        prep,
        seed_of(mode),
    )?;
    let stage = final_stage(&labeled, mode)?;
    let unphase = (coeff / coeff.norm()).conj();
    report(stage, 1, Some(scale), |post, p| {
        let g = p.sqrt() / (scale * det.norm());
        let d = decode_registers(post, "R", Some("C"), size, size, Some(g))?;
        let d = DecodedResult {
            matrix: d.matrix.scaled(unphase),
            ..d
        };
        Ok((PipelineResult::Matrix(d), Some(g)))
    })
}

// ---------------------------------------------------------------------------
// Linear-system contraction

/// Direction of `x = a · b`, stored in register `R`.
///
/// Registers `R, C, b, B`; label `Bt`. The labeled branch is
/// `2^{-n/2} Σ_{j1} (Σ_j a_{j1 j} b_j) |j1>|0>|0>|0>` for the normalized
/// inputs; the garbage sits on `Bt = 0`.
pub fn linear_stage<T: Real>(
    a: &Matrix<T>,
    b: &[Amp<T>],
    mode: MeasureMode,
    prep: Option<T>,
) -> Result<PipelineReport<T>> {
    if a.cols() != b.len() || a.rows() == 0 || b.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} matrix against vector of length {}",
            a.shape(),
            b.len()
        )));
    }
    let (an, bn) = (a.frobenius_norm(), norm_sqr(b).sqrt());
    if an == T::zero() || bn == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    let rows = a.rows();
    let (wr, wk) = (index_width(rows), index_width(b.len()));
    let layout = RegisterLayout::new(&[("R", wr), ("C", wk), ("b", wk), ("B", 1)])?;
    let (bu, _) = normalized_vec(b);
    let x = oracle::contract(&a.normalized(), &bu)?;
    let mut unscaled = vec![czero(); layout.dim()];
    for (j1, xj) in x.iter().enumerate() {
        unscaled[layout.index_of(&[("R", j1), ("C", 0), ("b", 0), ("B", 0)])?] = *xj;
    }
    let (labeled, scale) = prepare_scaled(
        unscaled,
        &layout,
        &["R"],
        "Bt",
        wr.max(wk),
        prep,
        seed_of(mode),
    )?;
    let stage = final_stage(&labeled, mode)?;
    report(stage, 1, Some(scale), |post, p| {
        let g = an * bn * p.sqrt() / scale;
        let d = decode_registers(post, "R", None, rows, 1, Some(g))?;
        Ok((PipelineResult::Matrix(d), Some(g)))
    })
}

/// Real-valued helper for building examples.
pub fn real_vector<T: Real>(v: &[f64]) -> Vec<Amp<T>> {
    v.iter().map(|&x| c(T::lit(x), T::zero())).collect()
}
