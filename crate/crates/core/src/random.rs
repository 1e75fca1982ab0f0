//! Seeded random ensembles: Ginibre matrices, Haar isometries and unitaries,
//! random pure and mixed states, and flat Dirichlet weights.
//!
//! Every generator draws `f64` variates from a ChaCha8 stream and converts
//! them to the working scalar, so a seed yields the same ensemble member at
//! any precision (up to rounding).

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::scalar::{cabs, creal, lit, CMatrix, CVector, Real};
use crate::states::{DensityMatrix, PureState};

/// Deterministic generator for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(
        lit(re * std::f64::consts::FRAC_1_SQRT_2),
        lit(im * std::f64::consts::FRAC_1_SQRT_2),
    )
}

/// Matrix of i.i.d. standard complex Gaussian entries, filled row by row.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = complex_normal(rng);
        }
    }
    m
}

/// Haar-distributed `rows x cols` isometry (`rows >= cols`): orthonormalized
/// Ginibre columns with the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_isometry<T: Real, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> CMatrix<T> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = ginibre::<T, R>(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..cols {
        let d = r[(c, c)];
        let norm = cabs(d);
        if norm > T::zero() {
            let phase = d / creal(norm);
            for row in 0..rows {
                q[(row, c)] *= phase;
            }
        }
    }
    q
}

pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    haar_isometry(n, n, rng)
}

/// Uniformly (Fubini–Study) distributed pure state.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState<T> {
    let v: CVector<T> = CVector::from_fn(n, |_, _| complex_normal(rng));
    PureState::normalized(v).expect("Gaussian vector is non-zero")
}

/// Hilbert–Schmidt random mixed state `G G^dagger / tr(G G^dagger)`.
pub fn random_density<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    let w = &g * g.adjoint();
    let tr = w.diagonal().iter().fold(T::zero(), |acc, z| acc + z.re);
    DensityMatrix::from_trusted(w / creal(tr))
}

/// Point drawn uniformly from the probability simplex with `k` vertices.
pub fn flat_dirichlet<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;

    #[test]
    fn haar_isometry_is_an_isometry() {
        let mut rng = seeded_rng(3, 0);
        for (rows, cols) in [(2, 2), (6, 2), (16, 4)] {
            let v = haar_isometry::<f64, _>(rows, cols, &mut rng);
            assert!(unitarity_residual(&v) < 1e-13);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = ginibre::<f64, _>(2, 2, &mut seeded_rng(9, 1));
        let b = ginibre::<f64, _>(2, 2, &mut seeded_rng(9, 1));
        let c = ginibre::<f64, _>(2, 2, &mut seeded_rng(9, 2));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn dirichlet_lands_on_simplex() {
        let mut rng = seeded_rng(1, 0);
        for _ in 0..100 {
            let b = flat_dirichlet(4, &mut rng);
            assert!(b.iter().all(|&x| x >= 0.0));
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }
}
