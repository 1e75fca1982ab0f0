//! Small dense complex linear-algebra helpers.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cabs, creal, lit, CMatrix, CVector, Real};

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

/// `(m + m^dagger) / 2`
pub fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()) * creal(lit::<T>(0.5))
}

/// Largest entrywise modulus.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    max_abs(&(a - b))
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.diagonal()
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

pub fn require_square<T: Real>(m: &CMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Integer square root of `d`, if `d` is a perfect square.
pub fn exact_sqrt(d: usize) -> Result<usize> {
    let r = (d as f64).sqrt().round() as usize;
    if r * r == d {
        Ok(r)
    } else {
        Err(Error::NotPerfectSquare(d))
    }
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut v: Vec<T> = SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Magnitude below which an eigenvalue of a unit-trace matrix of size `dim`
/// is indistinguishable from round-off.
pub fn spectral_noise_floor<T: Real>(dim: usize) -> T {
    T::default_epsilon() * lit::<T>(64.0 * dim.max(1) as f64)
}

/// Partial trace of an `(n*m) x (n*m)` matrix on `C^n (x) C^m`.
/// `trace_first` removes the `n` factor, otherwise the `m` factor is removed.
pub fn partial_trace_raw<T: Real>(
    m: &CMatrix<T>,
    n: usize,
    k: usize,
    trace_first: bool,
) -> CMatrix<T> {
    if trace_first {
        CMatrix::from_fn(k, k, |b, d| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, a| {
                acc + m[(a * k + b, a * k + d)]
            })
        })
    } else {
        CMatrix::from_fn(n, n, |a, c| {
            (0..k).fold(Complex::new(T::zero(), T::zero()), |acc, b| {
                acc + m[(a * k + b, c * k + b)]
            })
        })
    }
}

/// Permutation `|a b c d> <- |a c b d>` for local dimensions `(n, m)`:
/// maps `C^n (x) C^n (x) C^m (x) C^m` onto `C^n (x) C^m (x) C^n (x) C^m`.
pub fn middle_swap<T: Real>(n: usize, m: usize) -> CMatrix<T> {
    let d = n * n * m * m;
    let mut u = CMatrix::zeros(d, d);
    for a in 0..n {
        for b in 0..m {
            for c in 0..n {
                for e in 0..m {
                    let row = ((a * m + b) * n + c) * m + e;
                    let col = ((a * n + c) * m + b) * m + e;
                    u[(row, col)] = Complex::new(T::one(), T::zero());
                }
            }
        }
    }
    u
}

/// `|v><v|` for a column vector.
pub fn outer<T: Real>(v: &CVector<T>) -> CMatrix<T> {
    v * v.adjoint()
}

/// `max|U^dagger U - 1|`
pub fn unitarity_residual<T: Real>(u: &CMatrix<T>) -> T {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}
