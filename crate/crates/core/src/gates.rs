//! Unitary operations used by the circuits, and a gate-count model for the
//! multi-controlled flip that dominates circuit depth.

use crate::error::{Error, Result};
use crate::qstate::{PureState, Qubit};
use crate::scalar::Real;

/// Single-qubit gates applied by [`apply_single`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleQubitGate {
    H,
    X,
    Z,
}

fn butterfly_h<T: Real>(amps: &mut [crate::Amp<T>], mask: usize) {
    let h = T::FRAC_1_SQRT_2();
    for i in 0..amps.len() {
        if i & mask == 0 {
            let j = i | mask;
            let (a, b) = (amps[i], amps[j]);
            amps[i] = (a + b).scale(h);
            amps[j] = (a - b).scale(h);
        }
    }
}

fn flip<T>(amps: &mut [crate::Amp<T>], mask: usize, when: impl Fn(usize) -> bool) {
    for i in 0..amps.len() {
        if i & mask == 0 && when(i) {
            amps.swap(i, i | mask);
        }
    }
}

/// `H_R`: a Hadamard on every qubit of the register.
pub fn hadamard_register<T: Real>(state: &PureState<T>, register: &str) -> Result<PureState<T>> {
    let layout = state.layout();
    let width = layout.width(register)?;
    let mut amps = state.amplitudes().to_vec();
    for bit in 0..width {
        butterfly_h(&mut amps, layout.qubit_mask(&Qubit::new(register, bit))?);
    }
    Ok(PureState::from_parts(layout.clone(), amps))
}

pub fn apply_single<T: Real>(
    state: &PureState<T>,
    qubit: &Qubit,
    gate: SingleQubitGate,
) -> Result<PureState<T>> {
    let layout = state.layout();
    let mask = layout.qubit_mask(qubit)?;
    let mut amps = state.amplitudes().to_vec();
    match gate {
        SingleQubitGate::H => butterfly_h(&mut amps, mask),
        SingleQubitGate::X => flip(&mut amps, mask, |_| true),
        SingleQubitGate::Z => amps
            .iter_mut()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .for_each(|(_, a)| *a = -*a),
    }
    Ok(PureState::from_parts(layout.clone(), amps))
}

/// Exchanges the contents of two equal-width registers.
pub fn swap_registers<T: Real>(state: &PureState<T>, a: &str, b: &str) -> Result<PureState<T>> {
    let layout = state.layout();
    let (sa, wa) = layout.span(a)?;
    let (sb, wb) = layout.span(b)?;
    if wa != wb {
        return Err(Error::WidthMismatch(a.to_string(), b.to_string()));
    }
    if a == b {
        return Ok(state.clone());
    }
    let field = (1usize << wa) - 1;
    let keep = !((field << sa) | (field << sb));
    let src = state.amplitudes();
    let mut amps = src.to_vec();
    for (i, amp) in src.iter().enumerate() {
        let va = (i >> sa) & field;
        let vb = (i >> sb) & field;
        amps[(i & keep) | (vb << sa) | (va << sb)] = *amp;
    }
    Ok(PureState::from_parts(layout.clone(), amps))
}

/// Flips the 1-qubit `target` on exactly those basis states where `control`
/// reads all zeros: `|0><0|_C ⊗ X + (I - |0><0|_C) ⊗ I`.
pub fn controlled_on_zero_flip<T: Real>(
    state: &PureState<T>,
    control: &str,
    target: &str,
) -> Result<PureState<T>> {
    let layout = state.layout();
    let control_mask = layout.register_mask(control)?;
    if layout.width(target)? != 1 {
        return Err(Error::TargetNotSingleQubit(target.to_string()));
    }
    if control == target {
        return Err(Error::OverlappingRegisters(control.to_string()));
    }
    let target_mask = layout.register_mask(target)?;
    let mut amps = state.amplitudes().to_vec();
    flip(&mut amps, target_mask, |i| i & control_mask == 0);
    Ok(PureState::from_parts(layout.clone(), amps))
}

/// Flips `target` where `control` is |1>.
pub fn cnot<T: Real>(
    state: &PureState<T>,
    control: &Qubit,
    target: &Qubit,
) -> Result<PureState<T>> {
    let layout = state.layout();
    let cm = layout.qubit_mask(control)?;
    let tm = layout.qubit_mask(target)?;
    if cm == tm {
        return Err(Error::SameQubit);
    }
    let mut amps = state.amplitudes().to_vec();
    flip(&mut amps, tm, |i| i & cm != 0);
    Ok(PureState::from_parts(layout.clone(), amps))
}

/// Gate tally for a multi-controlled X decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCount {
    pub n_controls: usize,
    /// X gates for zero-control conjugation plus, for one control, the CNOT.
    pub single_qubit_gates: usize,
    pub toffoli_gates: usize,
    /// Serial depth: every gate is one layer.
    pub depth: usize,
}

/// Cost of the zero-controlled flip on `n_controls` qubits.
///
/// The zero controls are conjugated with X on both sides (`2n` gates). The
/// flip itself is a Toffoli ladder over clean work ancillas: `2(n-1) - 1`
/// Toffolis for `n >= 2`, a lone CNOT for `n = 1`.
pub fn mcx_decomposition_count(n_controls: usize) -> Result<GateCount> {
    if n_controls == 0 {
        return Err(Error::NoControls);
    }
    let x_conjugation = 2 * n_controls;
    let (cnots, toffoli_gates) = if n_controls == 1 {
        (1, 0)
    } else {
        (0, (2 * (n_controls - 1)).saturating_sub(1).max(1))
    };
    let single_qubit_gates = x_conjugation + cnots;
    Ok(GateCount {
        n_controls,
        single_qubit_gates,
        toffoli_gates,
        depth: single_qubit_gates + toffoli_gates,
    })
}
