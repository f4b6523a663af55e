//! Length-`p` complex signals and the unitary prime-length DFT.
//!
//! The transform is the direct `O(p²)` sum against the context's twiddle
//! table; the product `k·ℓ` is reduced exactly mod `p` before lookup so no
//! phase error accumulates along a row.

mod io;

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zmod::PrimeContext;

pub use io::{format_complex, parse_complex};

/// Default relative zero threshold for support tests.
pub const DEFAULT_TAU: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Time,
    #[serde(rename = "freq")]
    Frequency,
}

impl Domain {
    pub fn flipped(self) -> Self {
        match self {
            Domain::Time => Domain::Frequency,
            Domain::Frequency => Domain::Time,
        }
    }
}

/// A signal `x: Z_p → C`.
///
/// The domain tag is metadata; nothing in the algebra checks it.
#[derive(Debug, Clone)]
pub struct Signal {
    ctx: Arc<PrimeContext>,
    values: Vec<Complex64>,
    domain: Domain,
}

impl PartialEq for Signal {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p() && self.domain == other.domain && self.values == other.values
    }
}

impl Signal {
    pub fn new(ctx: &Arc<PrimeContext>, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.len() != ctx.len() {
            return Err(Error::LengthMismatch { expected: ctx.len(), found: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { ctx: ctx.clone(), values, domain })
    }

    pub(crate) fn from_parts(ctx: &Arc<PrimeContext>, values: Vec<Complex64>, domain: Domain) -> Self {
        debug_assert_eq!(values.len(), ctx.len());
        Self { ctx: ctx.clone(), values, domain }
    }

    pub fn zeros(ctx: &Arc<PrimeContext>, domain: Domain) -> Self {
        Self::from_parts(ctx, vec![Complex64::new(0.0, 0.0); ctx.len()], domain)
    }

    /// Unit impulse at `k`.
    pub fn delta(ctx: &Arc<PrimeContext>, k: u64, domain: Domain) -> Self {
        let mut s = Self::zeros(ctx, domain);
        s.values[(k % ctx.p()) as usize] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_fn(ctx: &Arc<PrimeContext>, domain: Domain, f: impl FnMut(usize) -> Complex64) -> Self {
        Self::from_parts(ctx, (0..ctx.len()).map(f).collect(), domain)
    }

    pub fn context(&self) -> &Arc<PrimeContext> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Entry at `k mod p`.
    pub fn at(&self, k: u64) -> Complex64 {
        self.values[(k % self.ctx.p()) as usize]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_parts(&self.ctx, self.values.iter().map(|v| v * factor).collect(), self.domain)
    }

    pub fn norm2_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.norm2_sq().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `⟨self, other⟩ = Σ self(g)·conj(other(g))`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.same_context(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum())
    }

    /// Absolute threshold below which an entry counts as zero: `τ·max(1, ‖x‖_∞)`.
    pub fn zero_threshold(&self, tau: f64) -> f64 {
        tau * self.norm_inf().max(1.0)
    }

    pub fn is_nonzero_at(&self, k: u64, tau: f64) -> bool {
        self.at(k).norm() > self.zero_threshold(tau)
    }

    /// `‖x‖_0` at zero tolerance `τ`.
    pub fn support_count(&self, tau: f64) -> usize {
        let thr = self.zero_threshold(tau);
        self.values.iter().filter(|v| v.norm() > thr).count()
    }

    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub(crate) fn same_context(&self, other: &Signal) -> Result<()> {
        if self.ctx.p() != other.ctx.p() {
            return Err(Error::ContextMismatch { left: self.ctx.p(), right: other.ctx.p() });
        }
        Ok(())
    }
}

fn transform(x: &Signal, inverse: bool) -> Signal {
    let ctx = x.context();
    let p = ctx.len();
    let tw = ctx.twiddles();
    let scale = 1.0 / (p as f64).sqrt();
    let values = (0..p)
        .map(|l| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for v in &x.values {
                let w = tw[idx];
                acc += v * if inverse { w.conj() } else { w };
                idx += l;
                if idx >= p {
                    idx -= p;
                }
            }
            acc * scale
        })
        .collect();
    Signal::from_parts(ctx, values, x.domain.flipped())
}

/// `x̂(ℓ) = p^{-1/2} Σ_k x(k) e^{-2πiℓk/p}`.
pub fn dft(x: &Signal) -> Signal {
    transform(x, false)
}

/// `x(k) = p^{-1/2} Σ_ℓ x̂(ℓ) e^{2πiℓk/p}`.
pub fn idft(x: &Signal) -> Signal {
    transform(x, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::find_generator;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dft_of_impulse_is_flat() {
        let ctx = find_generator(7).unwrap();
        let d = dft(&Signal::delta(&ctx, 0, Domain::Time));
        assert_eq!(d.domain(), Domain::Frequency);
        for v in d.values() {
            assert!((v - c(1.0 / 7f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dft_of_constant_is_impulse() {
        let ctx = find_generator(7).unwrap();
        let ones = Signal::from_fn(&ctx, Domain::Time, |_| c(1.0, 0.0));
        let d = dft(&ones);
        assert!((d.at(0) - c(7f64.sqrt(), 0.0)).norm() < 1e-14);
        for l in 1..7 {
            assert!(d.at(l).norm() < 1e-14);
        }
    }

    #[test]
    fn idft_of_sparse_spectrum_matches_printed_window() {
        let ctx = find_generator(7).unwrap();
        let yh =
            Signal::new(&ctx, [1., 1., 0., 1., 0., 0., 0.].iter().map(|&r| c(r, 0.0)).collect(), Domain::Frequency)
                .unwrap();
        let y = idft(&yh);
        assert_eq!(y.domain(), Domain::Time);
        assert!((y.at(0) - c(1.1339, 0.0)).norm() < 5e-5);
        assert!((y.at(1) - c(0.2731, 0.4595)).norm() < 1e-4);
    }

    #[test]
    fn round_trips() {
        let ctx = find_generator(11).unwrap();
        let d0 = Signal::delta(&ctx, 0, Domain::Time);
        assert!(idft(&dft(&d0)).max_abs_diff(&d0) < 1e-12);
        let z = Signal::zeros(&ctx, Domain::Frequency);
        assert_eq!(idft(&z).values(), z.values());
    }

    #[test]
    fn support_and_inner() {
        let ctx = find_generator(7).unwrap();
        let yh =
            Signal::new(&ctx, [1., 1., 0., 1., 0., 0., 0.].iter().map(|&r| c(r, 0.0)).collect(), Domain::Frequency)
                .unwrap();
        assert_eq!(yh.support_count(DEFAULT_TAU), 3);
        let ip = yh.inner(&yh).unwrap();
        assert!((ip.re - yh.norm2_sq()).abs() < 1e-15 && ip.im == 0.0);

        // floating noise below the threshold is not support
        let y = idft(&yh);
        assert_eq!(dft(&y).support_count(DEFAULT_TAU), 3);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Signal::zeros(&find_generator(7).unwrap(), Domain::Time);
        let b = Signal::zeros(&find_generator(11).unwrap(), Domain::Time);
        assert_eq!(a.inner(&b).unwrap_err(), Error::ContextMismatch { left: 7, right: 11 });
    }

    #[test]
    fn construction_checks() {
        let ctx = find_generator(5).unwrap();
        assert_eq!(
            Signal::new(&ctx, vec![c(0.0, 0.0); 4], Domain::Time).unwrap_err(),
            Error::LengthMismatch { expected: 5, found: 4 }
        );
        let mut v = vec![c(0.0, 0.0); 5];
        v[3] = c(f64::NAN, 0.0);
        assert_eq!(Signal::new(&ctx, v, Domain::Time).unwrap_err(), Error::NonFinite { index: 3 });
    }
}
