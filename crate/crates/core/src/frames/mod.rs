//! Frame analysis of wavelet systems `W(y, M × Z_p)`.
//!
//! Two independent routes are kept side by side. The brute-force route builds
//! the frame operator `S = Σ v v*` and reads the optimal bounds off its
//! spectrum. The closed-form route evaluates the coefficient energy and the
//! frame criterion from the window spectrum grouped by cosets of `M`.

mod characterize;
pub mod jacobi;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Condition, Error, Result};
use crate::spectral::{dft, format_complex, Signal, DEFAULT_TAU};
use crate::wavelet::{dilate, translate, WaveletSystem};
use crate::zmod::{mul_mod, Subgroup};

pub use characterize::{characterize_subgroups, CharacterizationResult, CharacterizationStatus, DivisorTest};
pub use jacobi::{hermitian_eigen, ComplexMatrix, EigenDiagnostics, HermitianEigen};

/// Absolute threshold on the eigenvalues of the frame operator of the
/// unit-norm window.
pub const DEFAULT_FRAME_TOL: f64 = 1e-8;

/// `S = Σ_{m ∈ M, k ∈ Z_p} (T_k D_m y)(T_k D_m y)*`, accumulated in
/// coefficient-table order. Defined for any window, including zero.
pub fn frame_operator_of(window: &Signal, subgroup: &Subgroup) -> Result<ComplexMatrix> {
    if window.p() != subgroup.p() {
        return Err(Error::ContextMismatch { left: window.p(), right: subgroup.p() });
    }
    let mut s = ComplexMatrix::zeros(window.context().len());
    for &m in subgroup.elements() {
        let w = dilate(window, m)?;
        for k in 0..window.p() {
            s.add_outer(translate(&w, k).values());
        }
    }
    Ok(s)
}

pub fn frame_operator(sys: &WaveletSystem) -> ComplexMatrix {
    frame_operator_of(sys.window(), sys.subgroup()).expect("system invariants hold")
}

/// Optimal frame bounds and classification of a wavelet system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_equal_norm: bool,
    /// Vector count over dimension, `M·p / p = M`.
    pub redundancy: u64,
    pub vector_count: usize,
    pub tolerance_used: f64,
}

impl FrameReport {
    /// `key=value` lines, one per field.
    pub fn to_text(&self) -> String {
        format!(
            "lower_bound={:?}\nupper_bound={:?}\nis_frame={}\nis_tight={}\nis_parseval={}\nis_equal_norm={}\nredundancy={}\nvector_count={}\ntolerance_used={:?}\n",
            self.lower_bound,
            self.upper_bound,
            self.is_frame,
            self.is_tight,
            self.is_parseval,
            self.is_equal_norm,
            self.redundancy,
            self.vector_count,
            self.tolerance_used
        )
    }
}

pub fn analyze(sys: &WaveletSystem) -> Result<FrameReport> {
    analyze_with(sys, DEFAULT_FRAME_TOL)
}

/// Spectral analysis with frame tolerance `tau_frame`.
///
/// Decisions are taken on the frame operator of the unit-norm copy of the
/// window; the reported bounds are scaled back by `‖y‖₂²`.
pub fn analyze_with(sys: &WaveletSystem, tau_frame: f64) -> Result<FrameReport> {
    let norm_sq = sys.window().norm2_sq();
    let unit = sys.window().scaled(1.0 / norm_sq.sqrt());
    let s = frame_operator_of(&unit, sys.subgroup())?;
    let eig = hermitian_eigen(&s)?;
    let (a, b) = (eig.min().max(0.0), eig.max().max(0.0));

    let is_frame = a > tau_frame;
    let is_tight = is_frame && (a - b).abs() <= tau_frame * b;
    let lower_bound = a * norm_sq;
    let upper_bound = b * norm_sq;
    let is_parseval = is_tight && (lower_bound - 1.0).abs() <= tau_frame;

    let norms: Vec<f64> = sys.index_set().map(|g| g.act(sys.window()).norm2()).collect();
    let (lo, hi) = norms.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let is_equal_norm = hi - lo <= tau_frame * hi;

    Ok(FrameReport {
        lower_bound,
        upper_bound,
        is_frame,
        is_tight,
        is_parseval,
        is_equal_norm,
        redundancy: sys.subgroup().order(),
        vector_count: sys.vector_count(),
        tolerance_used: tau_frame,
    })
}

/// `γ_ℓ(y, M) = Σ_{m ∈ M} |ŷ(mℓ)|²`.
pub fn gamma(sys: &WaveletSystem, l: u64) -> f64 {
    let p = sys.context().p();
    let yh = sys.window_hat();
    sys.subgroup().elements().iter().map(|&m| yh.at(mul_mod(m, l, p)).norm_sqr()).sum()
}

/// Coefficient energy `Σ_{m,k} |⟨x, T_k D_m y⟩|²` from the three-term form:
/// the DC term, the `ℓ ∈ M` term, and `Σ_{ℓ ∈ U_p \ M} γ_ℓ |x̂(ℓ)|²`.
pub fn norm_formula_ffs(x: &Signal, sys: &WaveletSystem) -> Result<f64> {
    x.same_context(sys.window())?;
    let p = sys.context().p();
    let sg = sys.subgroup();
    let xh = dft(x);
    let yh = sys.window_hat();

    let dc = sg.order() as f64 * yh.at(0).norm_sqr() * xh.at(0).norm_sqr();
    let y_on_m: f64 = sg.elements().iter().map(|&m| yh.at(m).norm_sqr()).sum();
    let x_on_m: f64 = sg.elements().iter().map(|&l| xh.at(l).norm_sqr()).sum();
    let rest: f64 = (1..p).filter(|&l| !sg.contains(l)).map(|l| gamma(sys, l) * xh.at(l).norm_sqr()).sum();
    Ok(p as f64 * (dc + y_on_m * x_on_m + rest))
}

/// Coefficient energy from the coset form
/// `p(M|x̂(0)|²|ŷ(0)|² + Σ_t (Σ_{H_t}|x̂|²)(Σ_{H_t}|ŷ|²))`.
pub fn norm_formula_coset(x: &Signal, sys: &WaveletSystem) -> Result<f64> {
    x.same_context(sys.window())?;
    let p = sys.context().p();
    let sg = sys.subgroup();
    let xh = dft(x);
    let yh = sys.window_hat();
    let mass = |s: &Signal, coset: &[u64]| coset.iter().map(|&l| s.at(l).norm_sqr()).sum::<f64>();

    let dc = sg.order() as f64 * xh.at(0).norm_sqr() * yh.at(0).norm_sqr();
    let cosets: f64 = sg.cosets().iter().map(|h| mass(&xh, h) * mass(yh, h)).sum();
    Ok(p as f64 * (dc + cosets))
}

/// A nonzero spectral sample `ŷ(ε^t·m_t)` certifying coset `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub coset: usize,
    /// `m_t ∈ M`.
    pub element: u64,
    /// `ε^t·m_t`.
    pub frequency: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameVerdict {
    pub is_frame: bool,
    /// One witness per coset when `is_frame`; empty otherwise.
    pub witnesses: Vec<Witness>,
    /// First failing condition when not a frame.
    pub failure: Option<Condition>,
    pub tolerance_used: f64,
}

/// Frame test from the window spectrum: `ŷ(0) ≠ 0` and every coset `H_t`
/// carries a `τ`-nonzero sample.
pub fn frame_conditions(window_hat: &Signal, subgroup: &Subgroup, tau: f64) -> Result<FrameVerdict> {
    if window_hat.p() != subgroup.p() {
        return Err(Error::ContextMismatch { left: window_hat.p(), right: subgroup.p() });
    }
    if window_hat.support_count(tau) == 0 {
        return Err(Error::ZeroWindow);
    }
    let fail = |c| FrameVerdict { is_frame: false, witnesses: Vec::new(), failure: Some(c), tolerance_used: tau };
    if !window_hat.is_nonzero_at(0, tau) {
        return Ok(fail(Condition::DcZero));
    }
    let p = subgroup.p();
    let eps_t = |t: usize| subgroup.context().power(t as u64);
    let mut witnesses = Vec::with_capacity(subgroup.cosets().len());
    for (t, coset) in subgroup.cosets().iter().enumerate() {
        match coset.iter().find(|&&l| window_hat.is_nonzero_at(l, tau)) {
            Some(&frequency) => {
                // m_t = ε^{-t}·frequency
                let element = mul_mod(subgroup.context().inverse(eps_t(t))?, frequency, p);
                witnesses.push(Witness { coset: t, element, frequency });
            }
            None => return Ok(fail(Condition::EmptyCoset(t))),
        }
    }
    Ok(FrameVerdict { is_frame: true, witnesses, failure: None, tolerance_used: tau })
}

pub fn frame_criterion(sys: &WaveletSystem, tau: f64) -> Result<FrameVerdict> {
    frame_conditions(sys.window_hat(), sys.subgroup(), tau)
}

/// The `a × M` matrix of DFT samples arranged by cosets:
/// entry `(t, r)` is `ŷ(ε^{t + r·a})`.
#[derive(Debug, Clone, PartialEq)]
pub struct YMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
    frequencies: Vec<u64>,
    dc: Complex64,
    scale: f64,
}

impl YMatrix {
    pub fn from_spectrum(window_hat: &Signal, subgroup: &Subgroup) -> Self {
        let rows = subgroup.index() as usize;
        let cols = subgroup.order() as usize;
        let frequencies: Vec<u64> = subgroup.cosets().iter().flatten().copied().collect();
        let entries = frequencies.iter().map(|&l| window_hat.at(l)).collect();
        Self { rows, cols, entries, frequencies, dc: window_hat.at(0), scale: window_hat.norm_inf().max(1.0) }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, t: usize, r: usize) -> Complex64 {
        self.entries[t * self.cols + r]
    }

    /// The frequency `ε^{t + r·a}` sampled at `(t, r)`.
    pub fn frequency(&self, t: usize, r: usize) -> u64 {
        self.frequencies[t * self.cols + r]
    }

    /// `ŷ(0)`, which sits outside the matrix proper.
    pub fn dc(&self) -> Complex64 {
        self.dc
    }

    pub fn is_zero(&self, t: usize, r: usize, tau: f64) -> bool {
        self.entry(t, r).norm() <= tau * self.scale
    }

    pub fn row_is_nonzero(&self, t: usize, tau: f64) -> bool {
        (0..self.cols).any(|r| !self.is_zero(t, r, tau))
    }

    pub fn nonzero_rows(&self, tau: f64) -> usize {
        (0..self.rows).filter(|&t| self.row_is_nonzero(t, tau)).count()
    }

    /// `true` where the entry is `τ`-nonzero.
    pub fn support_pattern(&self, tau: f64) -> Vec<Vec<bool>> {
        (0..self.rows).map(|t| (0..self.cols).map(|r| !self.is_zero(t, r, tau)).collect()).collect()
    }

    /// Grid rendering; `τ`-zero entries print as `·`.
    pub fn render(&self, tau: f64) -> String {
        let cells: Vec<String> = (0..self.rows * self.cols)
            .map(|i| {
                let (t, r) = (i / self.cols, i % self.cols);
                if self.is_zero(t, r, tau) {
                    "·".to_string()
                } else {
                    format_complex(self.entry(t, r), 4)
                }
            })
            .collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str("[ ");
            out.push_str(&line.join("  "));
            out.push_str(" ]\n");
        }
        out
    }
}

impl fmt::Display for YMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(DEFAULT_TAU))
    }
}

pub fn y_matrix(sys: &WaveletSystem) -> YMatrix {
    YMatrix::from_spectrum(sys.window_hat(), sys.subgroup())
}
