//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.
//!
//! Each rotation first removes the phase of the pivot `h = |h|e^{iφ}` with
//! `diag(1, e^{-iφ})`, then applies the classical real rotation to the
//! resulting real symmetric 2×2 block. Iteration stops once the off-diagonal
//! Frobenius mass is at most `1e-12·‖S‖_F`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const OFF_DIAGONAL_RTOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// `self += v·v*`.
    pub fn add_outer(&mut self, v: &[Complex64]) {
        assert_eq!(v.len(), self.n);
        for (i, vi) in v.iter().enumerate() {
            let row = &mut self.data[i * self.n..(i + 1) * self.n];
            for (dst, vj) in row.iter_mut().zip(v) {
                *dst += vi * vj.conj();
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |S - S*|` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        self.data.chunks(self.n).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `x* S x`, real part.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(sx, xi)| (xi.conj() * sx).re).sum()
    }

    /// Solves `S z = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` when the matrix is numerically singular.
    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut a = self.data.clone();
        let mut z = b.to_vec();
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))?;
            if a[pivot * n + col].norm() <= 1e-14 * scale {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                z.swap(col, pivot);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
                let zc = z[col];
                z[r] -= f * zc;
            }
        }
        for col in (0..n).rev() {
            let mut acc = z[col];
            for j in col + 1..n {
                acc -= a[col * n + j] * z[j];
            }
            z[col] = acc / a[col * n + col];
        }
        Some(z)
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// State of the solver when it stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDiagnostics {
    pub sweeps: usize,
    pub off_diagonal: f64,
    pub threshold: f64,
}

impl fmt::Display for EigenDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} sweeps, off-diagonal mass {:.3e} above threshold {:.3e}",
            self.sweeps, self.off_diagonal, self.threshold
        )
    }
}

/// Eigenvalues ascending, with matching unit eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub diagnostics: EigenDiagnostics,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|r| self.vectors[(r, i)]).collect()
    }
}

/// Real Jacobi rotation `(c, s)` annihilating the off-diagonal of `[[a, h], [h, b]]`.
fn rotation(a: f64, b: f64, h: f64) -> (f64, f64) {
    let theta = (b - a) / (2.0 * h);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

pub fn hermitian_eigen(s: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = s.dim();
    let mut a = s.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_RTOL * s.frobenius_norm();

    let mut sweeps = 0;
    let mut off = a.off_diagonal_norm();
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNoConvergence(EigenDiagnostics { sweeps, off_diagonal: off, threshold }));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let h = a[(p, q)];
                let habs = h.norm();
                if habs == 0.0 {
                    continue;
                }
                let phase = h / habs; // e^{iφ}
                let (c, sn) = rotation(a[(p, p)].re, a[(q, q)].re, habs);
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(sn, 0.0);
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * c;

                // A ← A J
                for k in 0..n {
                    let (ap, aq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = ap * jpp + aq * jqp;
                    a[(k, q)] = ap * jpq + aq * jqq;
                }
                // A ← J* A
                for k in 0..n {
                    let (ap, aq) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * ap + jqp.conj() * aq;
                    a[(q, k)] = jpq.conj() * ap + jqq.conj() * aq;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                // V ← V J
                for k in 0..n {
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * jpp + vq * jqp;
                    v[(k, q)] = vp * jpq + vq * jqq;
                }
            }
        }
        off = a.off_diagonal_norm();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors, diagnostics: EigenDiagnostics { sweeps, off_diagonal: off, threshold } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-2.0..2.0), 0.0);
            for j in i + 1..n {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[2, 1-i], [1+i, 3]]: λ = (5 ± √(1 + 8)) / 2 = 1, 4
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = c(2.0, 0.0);
        m[(0, 1)] = c(1.0, -1.0);
        m[(1, 0)] = c(1.0, 1.0);
        m[(1, 1)] = c(3.0, 0.0);
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn eigenpairs_reconstruct_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 7, 13, 20] {
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eigen(&m).unwrap();
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let tr: f64 = e.values.iter().sum();
            assert!((tr - m.trace().re).abs() < 1e-10);
            for i in 0..n {
                let v = e.vector(i);
                let mv = m.apply(&v);
                let resid: f64 = mv.iter().zip(&v).map(|(a, b)| (a - b * e.values[i]).norm_sqr()).sum::<f64>().sqrt();
                assert!(resid < 1e-10, "n={n} i={i} resid={resid}");
                let nrm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                assert!((nrm - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_and_diagonal_inputs() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(4)).unwrap();
        assert_eq!(e.values, vec![0.0; 4]);
        assert_eq!(e.diagnostics.sweeps, 0);
        let mut d = ComplexMatrix::zeros(3);
        d[(0, 0)] = c(3.0, 0.0);
        d[(1, 1)] = c(-1.0, 0.0);
        d[(2, 2)] = c(2.0, 0.0);
        assert_eq!(hermitian_eigen(&d).unwrap().values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn solve_inverts_well_conditioned_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut m = random_hermitian(9, &mut rng);
        for i in 0..9 {
            m[(i, i)] += c(10.0, 0.0);
        }
        let b: Vec<_> = (0..9).map(|_| c(rng.gen(), rng.gen())).collect();
        let z = m.solve(&b).unwrap();
        let back = m.apply(&z);
        for (x, y) in back.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!(ComplexMatrix::zeros(3).solve(&[c(1.0, 0.0); 3]).is_none());
    }
}
