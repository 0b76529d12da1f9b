//! Reproducible randomness.
//!
//! Every Monte-Carlo trial draws from its own ChaCha8 stream: the master seed
//! fixes the key and the trial index selects the stream, so trial `k` sees
//! the same numbers no matter which thread runs it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::qstate::{PureState, RegisterLayout};
use crate::scalar::{c, Amp, Real};

/// Stream `trial` of the generator keyed by `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Uniform draw in `[0, 1)`.
pub fn unit_interval<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.random::<f64>())
}

/// `n` i.i.d. standard complex Gaussian amplitudes (unnormalized).
pub fn gaussian_amplitudes<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Amp<T>> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(T::lit(re), T::lit(im))
        })
        .collect()
}

/// Haar-random pure state on `layout`.
pub fn random_state<T: Real, R: Rng + ?Sized>(
    layout: &RegisterLayout,
    rng: &mut R,
) -> PureState<T> {
    loop {
        let amps = gaussian_amplitudes(layout.dim(), rng);
        if let Ok(s) = PureState::normalized(layout.clone(), amps) {
            return s;
        }
    }
}
