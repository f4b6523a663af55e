#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use primeframe::{dft, idft, Domain, PrimeContext, Signal, Subgroup, DEFAULT_TAU};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_signal(ctx: &Arc<PrimeContext>, rng: &mut ChaCha8Rng) -> Signal {
    Signal::from_fn(ctx, Domain::Time, |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Complex sample with modulus in `[0.5, 1.5]`, so "nonzero" is never marginal.
pub fn random_nonzero(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Time-domain window whose spectrum is nonzero exactly on `support`.
pub fn window_with_support(ctx: &Arc<PrimeContext>, support: &[u64], rng: &mut ChaCha8Rng) -> Signal {
    let mut v = vec![c(0.0, 0.0); ctx.len()];
    for &l in support {
        v[l as usize] = random_nonzero(rng);
    }
    idft(&Signal::new(ctx, v, Domain::Frequency).unwrap())
}

/// Window whose spectrum keeps each frequency independently with probability `density`.
/// Never returns the zero window.
pub fn sparse_window(ctx: &Arc<PrimeContext>, density: f64, rng: &mut ChaCha8Rng) -> Signal {
    loop {
        let support: Vec<u64> = (0..ctx.p()).filter(|_| rng.gen_bool(density)).collect();
        if !support.is_empty() {
            return window_with_support(ctx, &support, rng);
        }
    }
}

/// Sparse window that satisfies both frame conditions for `subgroup`: the DC
/// sample, one random frequency per coset, plus extras kept with probability `density`.
pub fn sparse_admissible_window(subgroup: &Subgroup, density: f64, rng: &mut ChaCha8Rng) -> Signal {
    let mut support = vec![0u64];
    for coset in subgroup.cosets() {
        support.push(coset[rng.gen_range(0..coset.len())]);
    }
    support.extend((1..subgroup.p()).filter(|_| rng.gen_bool(density)));
    support.sort_unstable();
    support.dedup();
    let y = window_with_support(subgroup.context(), &support, rng);
    debug_assert!(primeframe::frame_conditions(&dft(&y), subgroup, DEFAULT_TAU).unwrap().is_frame);
    y
}

pub fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| primeframe::zmod::is_prime(k)).collect()
}
