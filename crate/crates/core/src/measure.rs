//! Projective measurement, post-selection and the controlled measurement
//! `M_{A1 A2} = |1><1|_{A1} ⊗ M_{A2} + |0><0|_{A1} ⊗ I`.
//!
//! The controlled measurement is non-unitary. It is simulated as a
//! deterministic projection onto the `A1 = 1` sector followed by a readout of
//! `A2` inside that sector. When the sector is empty the state is returned
//! untouched.

use rand::Rng;

use crate::error::{Error, Result};
use crate::qstate::{PureState, Qubit};
use crate::rng::unit_interval;
use crate::scalar::{czero, Real};

/// Branches with squared norm at or below this are treated as absent.
pub const EMPTY_BRANCH: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Zero,
    One,
    /// The controlled measurement found no labeled term and did nothing.
    NotMeasured,
}

impl Outcome {
    fn from_bit(bit: bool) -> Self {
        if bit {
            Outcome::One
        } else {
            Outcome::Zero
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            Outcome::Zero => Some(0),
            Outcome::One => Some(1),
            Outcome::NotMeasured => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult<T> {
    /// Renormalized post-measurement state; the input itself for `NotMeasured`.
    pub post_state: PureState<T>,
    pub outcome: Outcome,
    /// Squared norm of the selected branch before renormalization.
    pub branch_weight: T,
}

fn weight_where<T: Real>(state: &PureState<T>, pred: impl Fn(usize) -> bool) -> T {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| pred(*i))
        .fold(T::zero(), |s, (_, a)| s + a.norm_sqr())
}

/// Keeps the amplitudes satisfying `pred`, zeroes the rest and renormalizes.
fn project<T: Real>(state: &PureState<T>, weight: T, pred: impl Fn(usize) -> bool) -> PureState<T> {
    let inv = weight.sqrt().recip();
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if pred(i) { a.scale(inv) } else { czero() })
        .collect();
    PureState::from_parts(state.layout().clone(), amps)
}

fn bit_pred(mask: usize, bit: bool) -> impl Fn(usize) -> bool {
    move |i| (i & mask != 0) == bit
}

/// Born-rule measurement of one qubit in the computational basis.
pub fn measure_sampled<T: Real, R: Rng + ?Sized>(
    state: &PureState<T>,
    qubit: &Qubit,
    rng: &mut R,
) -> Result<MeasureResult<T>> {
    let mask = state.layout().qubit_mask(qubit)?;
    let total = state.norm_sqr();
    let p1 = weight_where(state, bit_pred(mask, true)) / total;
    let u: T = unit_interval(rng);
    let bit = u < p1;
    let weight = if bit { p1 } else { T::one() - p1 };
    Ok(MeasureResult {
        post_state: project(state, weight * total, bit_pred(mask, bit)),
        outcome: Outcome::from_bit(bit),
        branch_weight: weight,
    })
}

/// Deterministically keeps the `qubit == bit` branch.
pub fn postselect<T: Real>(
    state: &PureState<T>,
    qubit: &Qubit,
    bit: u8,
) -> Result<MeasureResult<T>> {
    let mask = state.layout().qubit_mask(qubit)?;
    let bit = bit != 0;
    let weight = weight_where(state, bit_pred(mask, bit));
    if weight <= T::lit(EMPTY_BRANCH) {
        return Err(Error::EmptyBranch(weight.as_f64()));
    }
    Ok(MeasureResult {
        post_state: project(state, weight, bit_pred(mask, bit)),
        outcome: Outcome::from_bit(bit),
        branch_weight: weight,
    })
}

enum Readout {
    Sector,
    Fixed(bool),
    Mixed { p_one: f64 },
}

fn controlled_readout<T: Real>(
    state: &PureState<T>,
    control: &Qubit,
    measured: &Qubit,
) -> Result<(usize, usize, Readout)> {
    let layout = state.layout();
    let cm = layout.qubit_mask(control)?;
    let mm = layout.qubit_mask(measured)?;
    if cm == mm {
        return Err(Error::SameQubit);
    }
    let eps = T::lit(EMPTY_BRANCH);
    let w1 = weight_where(state, |i| i & cm != 0 && i & mm != 0);
    let w0 = weight_where(state, |i| i & cm != 0 && i & mm == 0);
    let readout = if w0 + w1 <= eps {
        Readout::Sector
    } else if w0 <= eps {
        Readout::Fixed(true)
    } else if w1 <= eps {
        Readout::Fixed(false)
    } else {
        Readout::Mixed {
            p_one: (w1 / (w0 + w1)).as_f64(),
        }
    };
    Ok((cm, mm, readout))
}

fn finish<T: Real>(state: &PureState<T>, cm: usize, mm: usize, bit: bool) -> MeasureResult<T> {
    let pred = move |i: usize| i & cm != 0 && (i & mm != 0) == bit;
    let weight = weight_where(state, pred);
    MeasureResult {
        post_state: project(state, weight, pred),
        outcome: Outcome::from_bit(bit),
        branch_weight: weight,
    }
}

fn unchanged<T: Real>(state: &PureState<T>) -> MeasureResult<T> {
    MeasureResult {
        post_state: state.clone(),
        outcome: Outcome::NotMeasured,
        branch_weight: T::zero(),
    }
}

/// Controlled measurement of `measured` conditioned on `control = 1`.
///
/// Succeeds whenever the labeled sector is non-empty, however small its
/// weight. Returns [`Error::UnresolvedMeasurement`] if `measured` is in a
/// genuine superposition inside that sector; use
/// [`controlled_measure_with_rng`] for such states.
pub fn controlled_measure<T: Real>(
    state: &PureState<T>,
    control: &Qubit,
    measured: &Qubit,
) -> Result<MeasureResult<T>> {
    let (cm, mm, readout) = controlled_readout(state, control, measured)?;
    match readout {
        Readout::Sector => Ok(unchanged(state)),
        Readout::Fixed(bit) => Ok(finish(state, cm, mm, bit)),
        Readout::Mixed { .. } => Err(Error::UnresolvedMeasurement),
    }
}

/// As [`controlled_measure`], sampling `measured` when it is not fixed.
pub fn controlled_measure_with_rng<T: Real, R: Rng + ?Sized>(
    state: &PureState<T>,
    control: &Qubit,
    measured: &Qubit,
    rng: &mut R,
) -> Result<MeasureResult<T>> {
    let (cm, mm, readout) = controlled_readout(state, control, measured)?;
    match readout {
        Readout::Sector => Ok(unchanged(state)),
        Readout::Fixed(bit) => Ok(finish(state, cm, mm, bit)),
        Readout::Mixed { p_one } => Ok(finish(state, cm, mm, rng.random::<f64>() < p_one)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{cnot, controlled_on_zero_flip, hadamard_register};
    use crate::qstate::RegisterLayout;
    use crate::rng::{random_state, trial_rng};
    use crate::scalar::{c, cone, Amp};

    fn one() -> RegisterLayout {
        RegisterLayout::new(&[("q", 1)]).unwrap()
    }

    fn plus() -> PureState<f64> {
        let r = 0.5f64.sqrt();
        PureState::from_amplitudes(one(), vec![c(r, 0.0), c(r, 0.0)]).unwrap()
    }

    /// |χ3> for a random S (2 qubits) x R (2 qubits) state.
    fn chi3(seed: u64) -> (PureState<f64>, PureState<f64>) {
        let l = RegisterLayout::new(&[("S", 2), ("R", 2)]).unwrap();
        let chi0 = random_state::<f64, _>(&l, &mut trial_rng(seed, 0));
        let s = hadamard_register(&chi0, "R").unwrap();
        let s = controlled_on_zero_flip(&s.add_ancilla("A1", 1).unwrap(), "R", "A1").unwrap();
        let s = cnot(&s.add_ancilla("A2", 1).unwrap(), &"A1".into(), &"A2".into()).unwrap();
        (chi0, s)
    }

    #[test]
    fn sampled_certain_outcome() {
        let s = PureState::<f64>::basis(one(), &[("q", 1)]).unwrap();
        let r = measure_sampled(&s, &"q".into(), &mut trial_rng(0, 0)).unwrap();
        assert_eq!(r.outcome, Outcome::One);
        assert_eq!(r.branch_weight, 1.0);
        assert_eq!(r.post_state, s);
    }

    #[test]
    fn sampled_frequency_born_rule() {
        let s = plus();
        let trials = 10_000u64;
        let ones = (0..trials)
            .filter(|&t| {
                measure_sampled(&s, &"q".into(), &mut trial_rng(5, t))
                    .unwrap()
                    .outcome
                    == Outcome::One
            })
            .count() as f64;
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((ones / trials as f64 - 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn sampled_single_column_probability() {
        // column 5 of an S(1) x R(3) matrix; row sums collapse to that column
        let l = RegisterLayout::new(&[("S", 1), ("R", 3)]).unwrap();
        let mut amps = vec![Amp::<f64>::new(0.0, 0.0); 16];
        amps[5] = c(0.6, 0.0);
        amps[8 + 5] = c(0.0, 0.8);
        let chi0 = PureState::from_amplitudes(l, amps).unwrap();
        let s = hadamard_register(&chi0, "R").unwrap();
        let s = controlled_on_zero_flip(&s.add_ancilla("A1", 1).unwrap(), "R", "A1").unwrap();
        let p1 = s
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| i & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>();
        assert!((p1 - 0.125).abs() < 1e-15);
        let r = measure_sampled(&s, &"A1".into(), &mut trial_rng(0, 1)).unwrap();
        let expect = if r.outcome == Outcome::One {
            0.125
        } else {
            0.875
        };
        assert!((r.branch_weight - expect).abs() < 1e-15);
    }

    #[test]
    fn postselect_examples() {
        let r = postselect(&plus(), &"q".into(), 1).unwrap();
        assert_eq!(r.post_state.amplitudes(), &[czero(), cone()]);
        assert!((r.branch_weight - 0.5).abs() < 1e-15);

        let zero = PureState::<f64>::basis(one(), &[("q", 0)]).unwrap();
        assert!(matches!(
            postselect(&zero, &"q".into(), 1),
            Err(Error::EmptyBranch(_))
        ));
    }

    #[test]
    fn postselect_chi3_gives_row_sums() {
        let (chi0, s) = chi3(3);
        let r = postselect(&s, &"A2".into(), 1).unwrap();
        let sums: Vec<Amp<f64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| chi0.amplitude_of(&[("S", i), ("R", j)]).unwrap())
                    .sum()
            })
            .collect();
        let norm = sums.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for (i, sum) in sums.iter().enumerate() {
            let got = r
                .post_state
                .amplitude_of(&[("S", i), ("R", 0), ("A1", 1), ("A2", 1)])
                .unwrap();
            assert!((got - sum / norm).norm() < 1e-12);
        }
    }

    #[test]
    fn controlled_measure_small_weight_succeeds() {
        let l = RegisterLayout::new(&[("S", 2), ("A1", 1), ("A2", 1)]).unwrap();
        let mut amps = vec![czero::<f64>(); l.dim()];
        let alpha = 0.1;
        amps[l.index_of(&[("S", 0), ("A1", 1), ("A2", 1)]).unwrap()] = c(alpha, 0.0);
        let beta = (1.0 - alpha * alpha).sqrt() / 3f64.sqrt();
        for s in 1..4 {
            amps[l.index_of(&[("S", s), ("A1", 0), ("A2", 0)]).unwrap()] = c(beta, 0.0);
        }
        let st = PureState::from_amplitudes(l.clone(), amps).unwrap();
        let r = controlled_measure(&st, &"A1".into(), &"A2".into()).unwrap();
        assert_eq!(r.outcome, Outcome::One);
        assert!((r.branch_weight - 0.01).abs() < 1e-15);
        let expect = PureState::basis(l, &[("S", 0), ("A1", 1), ("A2", 1)]).unwrap();
        assert!(r.post_state.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn controlled_measure_leaves_unlabeled_state_alone() {
        let l = RegisterLayout::new(&[("S", 2), ("A1", 1), ("A2", 1)]).unwrap();
        let g = random_state::<f64, _>(
            &RegisterLayout::new(&[("S", 2)]).unwrap(),
            &mut trial_rng(1, 0),
        );
        let st = g
            .add_ancilla("A1", 1)
            .unwrap()
            .add_ancilla("A2", 1)
            .unwrap();
        assert_eq!(st.layout(), &l);
        let r = controlled_measure(&st, &"A1".into(), &"A2".into()).unwrap();
        assert_eq!(r.outcome, Outcome::NotMeasured);
        assert_eq!(r.branch_weight, 0.0);
        assert_eq!(r.post_state, st);
        assert_eq!(
            controlled_measure(&st, &"A1".into(), &"A1".into()),
            Err(Error::SameQubit)
        );
    }

    #[test]
    fn controlled_measure_reports_row_sum_weight() {
        for seed in 0..10 {
            let (chi0, s) = chi3(seed);
            let r = controlled_measure(&s, &"A1".into(), &"A2".into()).unwrap();
            assert_eq!(r.outcome, Outcome::One);
            let expected: f64 = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| chi0.amplitude_of(&[("S", i), ("R", j)]).unwrap())
                        .sum::<Amp<f64>>()
                        .norm_sqr()
                })
                .sum::<f64>()
                / 4.0;
            assert!((r.branch_weight - expected).abs() < 1e-10);
            let ps = postselect(&s, &"A2".into(), 1).unwrap();
            assert!(ps.post_state.max_abs_diff(&r.post_state) < 1e-12);
        }
    }

    #[test]
    fn post_state_forgets_labeled_scale() {
        // rescaling the labeled branch against the garbage changes the weight only
        let (_, s) = chi3(9);
        let rescale = |k: f64| {
            let amps: Vec<_> = s
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| if i & 2 != 0 { a.scale(k) } else { *a })
                .collect();
            PureState::normalized(s.layout().clone(), amps).unwrap()
        };
        let a = controlled_measure(&rescale(1.0), &"A1".into(), &"A2".into()).unwrap();
        let b = controlled_measure(&rescale(0.01), &"A1".into(), &"A2".into()).unwrap();
        assert!(a.post_state.max_abs_diff(&b.post_state) < 1e-12);
        assert!((a.branch_weight - b.branch_weight).abs() > 1e-3);
    }

    #[test]
    fn mixed_sector_needs_rng() {
        let l = RegisterLayout::new(&[("A1", 1), ("A2", 1)]).unwrap();
        let r = 0.5f64.sqrt();
        let st =
            PureState::from_amplitudes(l, vec![czero(), czero(), c(r, 0.0), c(r, 0.0)]).unwrap();
        assert_eq!(
            controlled_measure(&st, &"A1".into(), &"A2".into()),
            Err(Error::UnresolvedMeasurement)
        );
        let m = controlled_measure_with_rng(&st, &"A1".into(), &"A2".into(), &mut trial_rng(0, 0))
            .unwrap();
        assert!(m.outcome != Outcome::NotMeasured);
        assert!((m.branch_weight - 0.5).abs() < 1e-15);
        assert!((m.post_state.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
