//! Inputs shared by the criterion benches.

use std::sync::Arc;

use num_complex::Complex64;
use primeframe::{find_generator, idft, Domain, PrimeContext, Signal, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn context(p: u64) -> Arc<PrimeContext> {
    find_generator(p).expect("bench primes are prime")
}

/// Dense random time-domain signal, reproducible from `seed`.
pub fn random_signal(ctx: &Arc<PrimeContext>, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Signal::from_fn(ctx, Domain::Time, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Window whose spectrum is nonzero at 0 and at one point of every coset of `subgroup`.
pub fn admissible_window(subgroup: &Subgroup, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = subgroup.context();
    let mut spectrum = vec![Complex64::new(0.0, 0.0); ctx.len()];
    spectrum[0] = Complex64::new(1.0, 0.0);
    for coset in subgroup.cosets() {
        let l = coset[rng.gen_range(0..coset.len())];
        spectrum[l as usize] = Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-1.0..1.0));
    }
    idft(&Signal::new(ctx, spectrum, Domain::Frequency).expect("length matches"))
}

/// Subgroup with the median divisor as its order.
pub fn middle_subgroup(ctx: &Arc<PrimeContext>) -> Subgroup {
    let divisors = ctx.divisors();
    Subgroup::of_order(ctx, divisors[divisors.len() / 2]).expect("divisor")
}
