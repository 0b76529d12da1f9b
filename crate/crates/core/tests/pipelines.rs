use ctrlmeas::algorithms::{
    self, attach_measured_ancilla, hermitian_conjugate, label_row_sums, prepare_labeled_state,
    row_sum, MeasureMode, PipelineResult,
};
use ctrlmeas::encode::{decode_rc, decode_rcm, encode_rc, encode_rcm};
use ctrlmeas::matrix::Matrix;
use ctrlmeas::measure::controlled_measure;
use ctrlmeas::rng::{gaussian_amplitudes, trial_rng};
use ctrlmeas::{oracle, CMatrix, Error, Outcome, Qubit, RegisterLayout, C64};
use rand::Rng;

fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_vec(rows, cols, gaussian_amplitudes(rows * cols, rng)).unwrap()
}

fn unit(z: C64) -> C64 {
    z / z.norm()
}

#[test]
fn applications_match_oracle_on_odd_shapes() {
    for seed in 0..100u64 {
        let mut rng = trial_rng(11, seed);
        let (n, k, m) = (
            rng.random_range(1..=5),
            rng.random_range(1..=5),
            rng.random_range(1..=5),
        );
        let a = random(n, k, &mut rng);
        let b = random(k, m, &mut rng);
        let a2 = random(n, k, &mut rng);
        let sq = random(n, n, &mut rng);
        let v = gaussian_amplitudes::<f64, _>(k, &mut rng);
        let w = gaussian_amplitudes::<f64, _>(k, &mut rng);
        let mode = MeasureMode::Ideal;

        let r = algorithms::matrix_add(&a, &a2, mode, None).unwrap();
        let exact = oracle::add(&a, &a2).unwrap();
        assert!(
            r.decoded().unwrap().matrix.max_abs_diff(&exact)
                < 1e-10 * exact.frobenius_norm().max(1.0)
        );

        let r = algorithms::matrix_mul(&a, &b, mode, None).unwrap();
        let exact = oracle::mul(&a, &b).unwrap();
        assert!(
            r.decoded().unwrap().matrix.max_abs_diff(&exact)
                < 1e-10 * exact.frobenius_norm().max(1.0)
        );

        let r = algorithms::linear_stage(&a, &v, mode, None).unwrap();
        let exact = CMatrix::column(&oracle::contract(&a, &v).unwrap());
        assert!(
            r.decoded().unwrap().matrix.max_abs_diff(&exact)
                < 1e-10 * exact.frobenius_norm().max(1.0)
        );

        let r = algorithms::inner_product_phase(&v, &w, mode, None).unwrap();
        let z = oracle::bilinear(&v, &w).unwrap();
        assert!((r.phase().unwrap() - unit(z)).norm() < 1e-10);
        assert!((r.recovered_norm.unwrap() - z.norm()).abs() < 1e-10 * z.norm().max(1.0));

        let r = algorithms::determinant_phase(&sq, mode, None).unwrap();
        let d = oracle::det_lu(&sq).unwrap();
        assert!((r.phase().unwrap() - unit(d)).norm() < 1e-10);
        assert!((r.recovered_norm.unwrap() - d.norm()).abs() < 1e-9 * d.norm().max(1.0));

        match algorithms::matrix_inverse(&sq, mode, None) {
            Ok(r) => {
                let x = &r.decoded().unwrap().matrix;
                let resid = oracle::mul(x, &sq)
                    .unwrap()
                    .max_abs_diff(&Matrix::identity(n));
                assert!(resid < 1e-8, "seed {seed}: {resid}");
            }
            Err(Error::IllConditioned(_)) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}

#[test]
fn recovered_norms_are_consistent() {
    let a = CMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
    let r = algorithms::matrix_mul(&a, &a, MeasureMode::Ideal, None).unwrap();
    assert!(
        (r.recovered_norm.unwrap() - oracle::mul(&a, &a).unwrap().frobenius_norm()).abs() < 1e-12
    );
    let r = row_sum(&encode_rc(&a).unwrap(), MeasureMode::Ideal).unwrap();
    let d = r.decoded().unwrap();
    assert!(
        d.matrix
            .max_abs_diff(&CMatrix::column(&oracle::row_sums(&a)))
            < 1e-12
    );
}

#[test]
fn hermitian_conjugate_rectangular_and_fixed_points() {
    for seed in 0..50u64 {
        let mut rng = trial_rng(12, seed);
        let (r, c) = (rng.random_range(1..=7), rng.random_range(1..=7));
        let a = random(r, c, &mut rng);
        let h = hermitian_conjugate(&encode_rcm(&a).unwrap()).unwrap();
        assert_eq!((h.rows, h.cols), (c, r));
        assert!(decode_rcm(&h).unwrap().matrix.max_abs_diff(&a.adjoint()) < 1e-12);

        let herm = oracle::add(&random(3, 3, &mut rng), &Matrix::zeros(3, 3)).unwrap();
        let herm = oracle::add(&herm, &herm.adjoint()).unwrap();
        let enc = encode_rcm(&herm).unwrap();
        assert!(
            hermitian_conjugate(&enc)
                .unwrap()
                .state
                .max_abs_diff(&enc.state)
                < 1e-15
        );
    }
    let rc = encode_rc(&CMatrix::identity(2)).unwrap();
    assert_eq!(
        hermitian_conjugate(&rc),
        Err(Error::WrongScheme { expected: "RCM" })
    );
}

#[test]
fn determinant_phase_forgets_magnitude() {
    let mut rng = trial_rng(13, 0);
    let a = random(3, 3, &mut rng).scaled_real(0.3);
    let base = algorithms::determinant_phase(&a, MeasureMode::Ideal, Some(0.01)).unwrap();
    for c in [0.2, 0.5, 2.0, 4.0] {
        let r = algorithms::determinant_phase(&a.scaled_real(c), MeasureMode::Ideal, Some(0.01))
            .unwrap();
        assert!((r.phase().unwrap() - base.phase().unwrap()).norm() < 1e-12);
        let ratio = r.branch_weight / base.branch_weight;
        assert!((ratio / c.powi(6) - 1.0).abs() < 1e-12);
    }
    // Odd size: c < 0 flips the phase.
    let neg =
        algorithms::determinant_phase(&a.scaled_real(-1.0), MeasureMode::Ideal, None).unwrap();
    assert!((neg.phase().unwrap() + base.phase().unwrap()).norm() < 1e-12);
}

#[test]
fn labeled_state_bookkeeping() {
    let layout = RegisterLayout::new(&[("R", 1), ("C", 1)]).unwrap();
    let mut payload = vec![C64::new(0.0, 0.0); 4];
    payload[1] = C64::new(0.6, 0.0);
    let mut rng = trial_rng(14, 0);
    let l = prepare_labeled_state(&payload, &layout, &["R"], "A1", 0.64, &mut rng).unwrap();
    assert!((l.labeled_weight().unwrap() - 0.36).abs() < 1e-12);
    assert!(l.check().unwrap() < 1e-15);
    let mut mixed = payload.clone();
    mixed[0] = C64::new(0.6, 0.0);
    let l2 = prepare_labeled_state(&mixed, &layout, &["R"], "A1", 0.28, &mut rng).unwrap();
    assert!(matches!(l2.check(), Err(Error::NonProductSector(_))));
    let err = prepare_labeled_state(&payload, &layout, &["R"], "A1", 0.5, &mut rng).unwrap_err();
    assert!(matches!(err, Error::WeightMismatch { .. }));
    let err = prepare_labeled_state(&payload, &layout, &["Q"], "A1", 0.64, &mut rng).unwrap_err();
    assert!(matches!(err, Error::UnknownRegister(_)));

    let chi3 = attach_measured_ancilla(&l).unwrap();
    let m = controlled_measure(&chi3, &Qubit::from("A1"), &Qubit::from("A2")).unwrap();
    assert_eq!(m.outcome, Outcome::One);
    assert!((m.branch_weight - 0.36).abs() < 1e-12);
    assert!(
        (m.post_state
            .amplitude_of(&[("R", 0), ("C", 1), ("A1", 1), ("A2", 1)])
            .unwrap()
            .re
            - 1.0)
            .abs()
            < 1e-12
    );
}

#[test]
fn sampled_mode_matches_born_rule() {
    let a = CMatrix::from_real(&[&[1.0, 0.0, 0.0, 0.0], &[2.0, 0.0, 0.0, 0.0]]).unwrap();
    let enc = encode_rc(&a).unwrap();
    let p = label_row_sums(&enc).unwrap().labeled_weight().unwrap();
    assert!((p - 0.25).abs() < 1e-15);
    let trials = 2000;
    let hits = (0..trials)
        .filter(|&s| {
            row_sum(&enc, MeasureMode::Sampled { seed: s })
                .unwrap()
                .succeeded()
        })
        .count();
    let q = hits as f64 / trials as f64;
    assert!(
        (q - p).abs() < 4.0 * (p * (1.0 - p) / trials as f64).sqrt(),
        "{q}"
    );

    let failed = (0..50)
        .map(|s| row_sum(&enc, MeasureMode::Sampled { seed: s }).unwrap())
        .find(|r| !r.succeeded())
        .unwrap();
    assert_eq!(failed.outcome, Outcome::Zero);
    assert_eq!(failed.result, PipelineResult::Absent);
}

#[test]
fn single_precision_pipeline() {
    let a = Matrix::<f32>::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
    let enc = encode_rc(&a).unwrap();
    assert!(decode_rc(&enc).unwrap().matrix.max_abs_diff(&a) < 1e-5);
    let r = row_sum(&enc, MeasureMode::Ideal).unwrap();
    let d = r.decoded().unwrap();
    assert!((d.matrix[(0, 0)].re - 3.0).abs() < 1e-4);
    assert!((d.matrix[(1, 0)].re - 7.0).abs() < 1e-4);
    let p = algorithms::determinant_phase(&a, MeasureMode::Ideal, None).unwrap();
    assert!((p.phase().unwrap().re + 1.0).abs() < 1e-5);
}
