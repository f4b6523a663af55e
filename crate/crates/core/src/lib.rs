//! Finite wavelet frames over prime fields.
//!
//! Signals live on `Z_p` for a prime `p`. A window `y` and a multiplicative
//! subgroup `M ≤ U_p` define the wavelet system `{T_k D_m y : m ∈ M, k ∈ Z_p}`.
//! This crate decides when such a system is a frame, computes its optimal
//! bounds by brute force, characterizes all frame-forming subgroups for a
//! window, and rescales admissible windows into equal-norm Parseval frames.
//!
//! ```
//! use num_complex::Complex64;
//! use primeframe::{construct_enpf, find_generator, idft, Domain, Signal, Subgroup, DEFAULT_TAU};
//!
//! let ctx = find_generator(7).unwrap();
//! let spectrum = [1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0].map(|v| Complex64::new(v, 0.0));
//! let y = idft(&Signal::new(&ctx, spectrum.to_vec(), Domain::Frequency).unwrap());
//! let m = Subgroup::of_order(&ctx, 3).unwrap();
//! let enpf = construct_enpf(&y, &m, DEFAULT_TAU).unwrap();
//! assert!((enpf.y_sigma.norm2_sq() - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod enpf;
pub mod error;
pub mod frames;
pub mod spectral;
pub mod wavelet;
pub mod zmod;

pub use enpf::{construct_enpf, EnpfResult, ScalingSpec, SigmaPermutation};
pub use error::{Condition, Error, Result};
pub use frames::{
    analyze, analyze_with, characterize_subgroups, frame_conditions, frame_criterion, frame_operator,
    frame_operator_of, hermitian_eigen, norm_formula_coset, norm_formula_ffs, y_matrix, CharacterizationResult,
    CharacterizationStatus, ComplexMatrix, FrameReport, FrameVerdict, Witness, YMatrix, DEFAULT_FRAME_TOL,
};
pub use spectral::{dft, idft, Domain, Signal, DEFAULT_TAU};
pub use wavelet::{dilate, modulate, translate, CoefficientTable, GroupElement, WaveletSystem};
pub use zmod::{find_generator, mod_inverse, PrimeContext, Subgroup};
