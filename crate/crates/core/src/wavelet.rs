//! Translation, modulation and cyclic dilation on `C^p`, the wavelet group
//! `W_p = U_p ⋉ Z_p`, and wavelet systems `{T_k D_m y : m ∈ M, k ∈ Z_p}`.
//!
//! Dilation follows `D_m x(k) = x(m_p·k)` with `m_p` the inverse of `m`.
//! Some of the literature uses `x(m·k)` instead, which is `D_{m_p}` here.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{dft, Signal};
use crate::zmod::{mul_mod, PrimeContext, Subgroup};

/// `T_k x(s) = x(s - k)`.
pub fn translate(x: &Signal, k: u64) -> Signal {
    let p = x.p();
    let k = k % p;
    Signal::from_fn(x.context(), x.domain(), |s| x.at(s as u64 + p - k))
}

/// `M_ℓ x(s) = e^{-2πiℓs/p} x(s)`.
pub fn modulate(x: &Signal, l: u64) -> Signal {
    let p = x.p();
    let tw = x.context().twiddles();
    Signal::from_fn(x.context(), x.domain(), |s| x.values()[s] * tw[mul_mod(l % p, s as u64, p) as usize])
}

/// `D_m x(k) = x(m_p·k)`.
pub fn dilate(x: &Signal, m: u64) -> Result<Signal> {
    let p = x.p();
    let mp = x.context().inverse(m)?;
    Ok(Signal::from_fn(x.context(), x.domain(), |k| x.at(mul_mod(mp, k as u64, p))))
}

/// An element `(m, k)` of `W_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub m: u64,
    pub k: u64,
}

impl GroupElement {
    pub fn new(ctx: &PrimeContext, m: u64, k: u64) -> Result<Self> {
        let p = ctx.p();
        if m.is_multiple_of(p) {
            return Err(Error::NotInvertible { m: 0, p });
        }
        Ok(Self { m: m % p, k: k % p })
    }

    pub fn identity() -> Self {
        Self { m: 1, k: 0 }
    }

    /// `(m, k) ⋉ (m', k') = (m·m', k + m·k')`.
    pub fn compose(self, other: Self, ctx: &PrimeContext) -> Self {
        let p = ctx.p();
        Self { m: mul_mod(self.m, other.m, p), k: (self.k + mul_mod(self.m, other.k, p)) % p }
    }

    /// `(m, k)^{-1} = (m_p, m_p·(p - k))`.
    pub fn inverse(self, ctx: &PrimeContext) -> Self {
        let p = ctx.p();
        let mp = ctx.inverse(self.m).expect("group elements carry a unit");
        Self { m: mp, k: mul_mod(mp, (p - self.k) % p, p) }
    }

    /// `T_k D_m x`.
    pub fn act(self, x: &Signal) -> Signal {
        translate(&dilate(x, self.m).expect("group elements carry a unit"), self.k)
    }
}

/// All `p(p - 1)` elements of `W_p`, ordered by `(m, k)`.
pub fn group_elements(ctx: &PrimeContext) -> Vec<GroupElement> {
    let p = ctx.p();
    (1..p).flat_map(|m| (0..p).map(move |k| GroupElement { m, k })).collect()
}

/// The system `W(y, M × Z_p)`.
#[derive(Debug, Clone)]
pub struct WaveletSystem {
    window: Signal,
    window_hat: Signal,
    subgroup: Subgroup,
}

impl WaveletSystem {
    /// `window` is taken as a time-domain signal.
    pub fn new(window: Signal, subgroup: Subgroup) -> Result<Self> {
        if window.p() != subgroup.p() {
            return Err(Error::ContextMismatch { left: window.p(), right: subgroup.p() });
        }
        if window.norm2() <= crate::spectral::DEFAULT_TAU {
            return Err(Error::ZeroWindow);
        }
        let window_hat = dft(&window);
        Ok(Self { window, window_hat, subgroup })
    }

    pub fn context(&self) -> &Arc<PrimeContext> {
        self.subgroup.context()
    }

    pub fn window(&self) -> &Signal {
        &self.window
    }

    /// DFT of the window.
    pub fn window_hat(&self) -> &Signal {
        &self.window_hat
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Number of system vectors, `M·p`.
    pub fn vector_count(&self) -> usize {
        self.subgroup.order() as usize * self.context().len()
    }

    /// Index set `M × Z_p` in coefficient-table order: subgroup elements
    /// ascending, then `k` ascending.
    pub fn index_set(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let p = self.context().p();
        self.subgroup.elements().iter().flat_map(move |&m| (0..p).map(move |k| GroupElement { m, k }))
    }

    fn check_member(&self, g: GroupElement) -> Result<()> {
        if !self.subgroup.contains(g.m) {
            return Err(Error::NotInSubgroup { m: g.m, order: self.subgroup.order() });
        }
        Ok(())
    }

    /// `T_k D_m y`.
    pub fn system_vector(&self, g: GroupElement) -> Result<Signal> {
        self.check_member(g)?;
        Ok(g.act(&self.window))
    }

    /// `⟨x, T_k D_m y⟩` by direct inner product.
    pub fn coefficient(&self, x: &Signal, g: GroupElement) -> Result<Complex64> {
        x.same_context(&self.window)?;
        x.inner(&self.system_vector(g)?)
    }

    /// `⟨x, T_k D_m y⟩` as `√p · F_p(x̂ · conj(D_m y)^)(p - k)`.
    pub fn coefficient_via_fourier(&self, x: &Signal, g: GroupElement) -> Result<Complex64> {
        x.same_context(&self.window)?;
        self.check_member(g)?;
        let p = self.context().p();
        let x_hat = dft(x);
        let dy_hat = dft(&dilate(&self.window, g.m)?);
        let product =
            Signal::from_fn(self.context(), x_hat.domain(), |l| x_hat.values()[l] * dy_hat.values()[l].conj());
        let at = ((p - g.k) % p) as usize;
        Ok(dft(&product).values()[at] * (p as f64).sqrt())
    }

    /// The analysis operator applied to `x`: every coefficient `⟨x, T_k D_m y⟩`.
    pub fn all_coefficients(&self, x: &Signal) -> Result<CoefficientTable> {
        x.same_context(&self.window)?;
        let p = self.context().len();
        let xs = x.values();
        let mut data = Vec::with_capacity(self.vector_count());
        for &m in self.subgroup.elements() {
            let w = dilate(&self.window, m)?;
            let w = w.values();
            for k in 0..p {
                // Σ_s x(s)·conj(w(s - k))
                let mut acc = Complex64::new(0.0, 0.0);
                for (s, xv) in xs.iter().enumerate() {
                    acc += xv * w[(s + p - k) % p].conj();
                }
                data.push(acc);
            }
        }
        Ok(CoefficientTable { elements: self.subgroup.elements().to_vec(), p, data })
    }
}

/// Coefficients `⟨x, T_k D_m y⟩`, one row per subgroup element (ascending),
/// one column per translation `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    elements: Vec<u64>,
    p: usize,
    data: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn rows(&self) -> usize {
        self.elements.len()
    }

    pub fn cols(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row_elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn get(&self, row: usize, k: usize) -> Complex64 {
        self.data[row * self.p + k]
    }

    pub fn lookup(&self, g: GroupElement) -> Option<Complex64> {
        let row = self.elements.binary_search(&g.m).ok()?;
        Some(self.get(row, g.k as usize))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// `Σ |⟨x, T_k D_m y⟩|²`.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }
}
