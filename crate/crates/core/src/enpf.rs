//! Equal-norm Parseval windows by per-coset rescaling of the window spectrum.
//!
//! The pipeline is `ŷ → ŷ' = ŷ∘σ → ŷ'' = D(M,y)ŷ' → ŷ_σ(σ(ℓ)) = ŷ''(ℓ) → y_σ`.
//! `σ` lists the frequencies coset by coset, so `D(M,y)` is block diagonal
//! with a scalar `R'` on the DC sample and a scalar `R_t` on the `M` samples
//! of coset `H_t`. The scales set `|ŷ_σ(0)|² = 1/(pM)` and the spectral mass
//! of every coset to `1/p`, which makes the system `W(y_σ, M × Z_p)` Parseval.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Condition, Error, Result};
use crate::frames::frame_conditions;
use crate::spectral::{dft, idft, Signal};
use crate::zmod::Subgroup;

/// The permutation `σ` of `Z_p` grouping frequencies by coset:
/// `σ(0) = 0` and `σ(tM + r + 1) = ε^{t + r·a}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaPermutation {
    pub forward: Vec<u64>,
    pub inverse: Vec<u64>,
}

impl SigmaPermutation {
    pub fn new(subgroup: &Subgroup) -> Self {
        let ctx = subgroup.context();
        let p = ctx.p();
        let order = subgroup.order();
        let a = subgroup.index();
        let mut forward = vec![0u64; p as usize];
        let mut inverse = vec![0u64; p as usize];
        for l in 1..p {
            let t = (l - 1) / order;
            let r = l - t * order - 1;
            let v = ctx.power(t + r * a);
            forward[l as usize] = v;
            inverse[v as usize] = l;
        }
        Self { forward, inverse }
    }

    pub fn apply(&self, l: u64) -> u64 {
        self.forward[l as usize]
    }

    pub fn invert(&self, v: u64) -> u64 {
        self.inverse[v as usize]
    }
}

/// Diagonal of `D(M, y)`, stored per block: `R'` on the DC sample and `R_t`
/// on the `M` samples of coset `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSpec {
    pub r_prime: f64,
    pub r: Vec<f64>,
}

impl ScalingSpec {
    /// `R' = 1/(√(pM)·|ŷ(0)|)`, `R_t = 1/√(p·Σ_{w ∈ H_t} |ŷ(w)|²)`.
    ///
    /// Fails when `y_hat` violates either admissibility condition at
    /// tolerance `tau`.
    pub fn new(y_hat: &Signal, subgroup: &Subgroup, tau: f64) -> Result<Self> {
        let verdict = frame_conditions(y_hat, subgroup, tau)?;
        if let Some(c) = verdict.failure {
            return Err(Error::Inadmissible(c));
        }
        let p = subgroup.p() as f64;
        let order = subgroup.order() as f64;
        let r_prime = 1.0 / ((p * order).sqrt() * y_hat.at(0).norm());
        let r = subgroup
            .cosets()
            .iter()
            .enumerate()
            .map(|(t, coset)| {
                let mass: f64 = coset.iter().map(|&w| y_hat.at(w).norm_sqr()).sum();
                if mass > 0.0 {
                    Ok(1.0 / (p * mass).sqrt())
                } else {
                    Err(Error::Inadmissible(Condition::EmptyCoset(t)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if r_prime.is_finite() {
            Ok(Self { r_prime, r })
        } else {
            Err(Error::Inadmissible(Condition::DcZero))
        }
    }

    /// Scale applied at position `ℓ` of the permuted spectrum.
    pub fn factor_at(&self, l: u64, order: u64) -> f64 {
        if l == 0 {
            self.r_prime
        } else {
            self.r[((l - 1) / order) as usize]
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnpfResult {
    /// `ŷ' = ŷ∘σ`.
    pub y_hat_prime: Signal,
    /// `ŷ'' = D(M, y)ŷ'`.
    pub y_hat_double_prime: Signal,
    /// `ŷ_σ` with `ŷ_σ(σ(ℓ)) = ŷ''(ℓ)`.
    pub y_hat_sigma: Signal,
    /// The Parseval window, `idft(ŷ_σ)`.
    pub y_sigma: Signal,
    pub scaling: ScalingSpec,
    pub sigma: SigmaPermutation,
}

impl EnpfResult {
    /// All four signals in the signal text format, each under a `[name]`
    /// line, followed by a `[scales]` block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, s) in [
            ("y_hat_prime", &self.y_hat_prime),
            ("y_hat_double_prime", &self.y_hat_double_prime),
            ("y_hat_sigma", &self.y_hat_sigma),
            ("y_sigma", &self.y_sigma),
        ] {
            writeln!(out, "[{name}]").unwrap();
            out.push_str(&s.to_text());
        }
        out.push_str("[scales]\n");
        writeln!(out, "Rprime={:?}", self.scaling.r_prime).unwrap();
        for (t, r) in self.scaling.r.iter().enumerate() {
            writeln!(out, "R[{t}]={r:?}").unwrap();
        }
        out
    }
}

/// Builds the equal-norm Parseval window for the time-domain window `y` and
/// subgroup `M`. Admissibility is checked here regardless of what the caller
/// has already verified.
pub fn construct_enpf(y: &Signal, subgroup: &Subgroup, tau: f64) -> Result<EnpfResult> {
    if y.p() != subgroup.p() {
        return Err(Error::ContextMismatch { left: y.p(), right: subgroup.p() });
    }
    let ctx = y.context();
    let order = subgroup.order();
    let y_hat = dft(y);
    let scaling = ScalingSpec::new(&y_hat, subgroup, tau)?;
    let sigma = SigmaPermutation::new(subgroup);

    let y_hat_prime = Signal::from_fn(ctx, y_hat.domain(), |l| y_hat.at(sigma.apply(l as u64)));
    let y_hat_double_prime =
        Signal::from_fn(ctx, y_hat.domain(), |l| y_hat_prime.values()[l] * scaling.factor_at(l as u64, order));
    let y_hat_sigma = Signal::from_fn(ctx, y_hat.domain(), |j| y_hat_double_prime.at(sigma.invert(j as u64)));
    let y_sigma = idft(&y_hat_sigma);

    Ok(EnpfResult { y_hat_prime, y_hat_double_prime, y_hat_sigma, y_sigma, scaling, sigma })
}
