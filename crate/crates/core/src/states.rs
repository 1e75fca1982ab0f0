//! Density matrices, pure states, and the Rényi / von Neumann / Tsallis
//! entropy functionals.
//!
//! All entropies are computed in nats from the spectrum of the Hermitian part
//! of the state and converted on request. Eigenvalues in `[-tol_psd, 0)` and
//! those below the spectral noise floor are treated as exact zeros.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, hermitian_part, identity, kron, max_abs, max_abs_diff,
    outer, partial_trace_raw, require_square, spectral_noise_floor, trace, unitarity_residual,
};
use crate::scalar::{cabs, creal, epsilon_of, lit, to_f64, CMatrix, CVector, Real};

/// Validation thresholds, stored as `f64` and converted on use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub norm: f64,
    pub psd: f64,
    /// Kraus-rank counting threshold on Choi-state eigenvalues.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            trace: 1e-10,
            norm: 1e-10,
            psd: 1e-9,
            rank: 1e-9,
        }
    }
}

impl Tolerances {
    /// Default tolerances, widened to a multiple of the scalar's epsilon
    /// when the scalar is coarser than `f64`.
    pub fn for_scalar<T: Real>() -> Self {
        let floor = 1e3 * epsilon_of::<T>();
        let d = Tolerances::default();
        Tolerances {
            herm: d.herm.max(floor),
            trace: d.trace.max(floor),
            norm: d.norm.max(floor),
            psd: d.psd.max(floor),
            rank: d.rank.max(floor),
        }
    }
}

/// Logarithm base used when reporting an entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Base {
    #[default]
    Natural,
    Two,
}

impl Base {
    /// Converts a value in nats into this base.
    pub fn from_nats<T: Real>(self, nats: T) -> T {
        match self {
            Base::Natural => nats,
            Base::Two => nats / T::ln_2(),
        }
    }
}

/// Rényi order `q >= 0` together with the reporting base.
/// `q == 1` selects the von Neumann entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOrder<T> {
    q: T,
    base: Base,
}

impl<T: Real> EntropyOrder<T> {
    pub fn new(q: T, base: Base) -> Result<Self> {
        if !(q >= T::zero()) || !q.is_finite() {
            return Err(Error::OutOfRange {
                name: "q",
                value: to_f64(q),
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(EntropyOrder { q, base })
    }

    /// Natural-log Rényi order `q`. Panics on negative or non-finite `q`.
    pub fn renyi(q: T) -> Self {
        Self::new(q, Base::Natural).expect("Rényi order must be finite and non-negative")
    }

    pub fn von_neumann() -> Self {
        EntropyOrder {
            q: T::one(),
            base: Base::Natural,
        }
    }

    pub fn with_base(self, base: Base) -> Self {
        EntropyOrder { base, ..self }
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn is_von_neumann(&self) -> bool {
        self.q == T::one()
    }
}

/// Which tensor factor to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::for_scalar::<T>())
    }

    /// Validates Hermiticity, unit trace and positivity, in that order.
    /// The stored matrix is the Hermitian part of the input.
    pub fn with_tolerances(matrix: CMatrix<T>, tol: &Tolerances) -> Result<Self> {
        require_square(&matrix)?;
        let herm_residual = to_f64(max_abs_diff(&matrix, &matrix.adjoint()));
        if !(herm_residual <= tol.herm) {
            return Err(Error::NotHermitian {
                residual: herm_residual,
            });
        }
        let matrix = hermitian_part(&matrix);
        let tr = trace(&matrix);
        let trace_residual = to_f64(cabs(tr - creal(T::one())));
        if !(trace_residual <= tol.trace) {
            return Err(Error::TraceNotUnit {
                residual: trace_residual,
            });
        }
        let min_eigenvalue = hermitian_eigenvalues(&matrix)
            .first()
            .copied()
            .map(to_f64)
            .unwrap_or(0.0);
        if !(min_eigenvalue >= -tol.psd) {
            return Err(Error::NegativeEigenvalue { min_eigenvalue });
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wraps a matrix already known to be a state, keeping only its Hermitian part.
    pub(crate) fn from_trusted(matrix: CMatrix<T>) -> Self {
        DensityMatrix {
            matrix: hermitian_part(&matrix),
        }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let w = creal(T::one() / lit::<T>(n as f64));
        DensityMatrix {
            matrix: identity::<T>(n) * w,
        }
    }

    /// Diagonal state from a probability vector.
    pub fn from_diagonal(probabilities: &[T]) -> Result<Self> {
        let n = probabilities.len();
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                creal(probabilities[i])
            } else {
                creal(T::zero())
            }
        });
        Self::new(m)
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        DensityMatrix {
            matrix: outer(&psi.amplitudes),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// Spectrum in descending order with round-off zeros clamped to `0`.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v = clamp_spectrum(hermitian_eigenvalues(&self.matrix), self.dim());
        v.reverse();
        v
    }

    /// `tr rho^2`
    pub fn purity(&self) -> T {
        self.matrix
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Kronecker product `self (x) other`.
    pub fn tensor(&self, other: &DensityMatrix<T>) -> DensityMatrix<T> {
        DensityMatrix {
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    /// Partial trace of a state on `C^n (x) C^m` with `dims = (n, m)`.
    pub fn partial_trace(
        &self,
        which: Subsystem,
        dims: (usize, usize),
    ) -> Result<DensityMatrix<T>> {
        let (n, m) = dims;
        if n * m != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                found: self.dim(),
            });
        }
        Ok(DensityMatrix {
            matrix: partial_trace_raw(&self.matrix, n, m, which == Subsystem::First),
        })
    }

    /// State with the off-diagonal entries removed.
    pub fn diagonal_part(&self) -> DensityMatrix<T> {
        let n = self.dim();
        DensityMatrix {
            matrix: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    creal(self.matrix[(i, i)].re)
                } else {
                    creal(T::zero())
                }
            }),
        }
    }
}

/// Unit vector in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: CVector<T>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: CVector<T>) -> Result<Self> {
        let tol = Tolerances::for_scalar::<T>();
        let residual = to_f64((amplitudes.norm() - T::one()).abs());
        if !(residual <= tol.norm) {
            return Err(Error::NotNormalized { residual });
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(amplitudes: CVector<T>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: "zero vector cannot be normalized".into(),
            });
        }
        Ok(PureState {
            amplitudes: amplitudes / creal(norm),
        })
    }

    /// Computational basis vector `|i>` in `C^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = CVector::zeros(n);
        v[i] = creal(T::one());
        PureState { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }

    pub fn tensor(&self, other: &PureState<T>) -> PureState<T> {
        PureState {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }
}

/// Clamps round-off negatives and sub-noise-floor magnitudes to zero.
pub(crate) fn clamp_spectrum<T: Real>(mut values: Vec<T>, dim: usize) -> Vec<T> {
    let floor = spectral_noise_floor::<T>(dim);
    for v in values.iter_mut() {
        if *v < floor {
            *v = T::zero();
        }
    }
    values
}

/// Rényi entropy in nats of a probability vector; `q == 1` gives Shannon.
/// Round-off below zero is reported as zero.
pub fn renyi_of_spectrum<T: Real>(p: &[T], q: T) -> T {
    if q == T::one() {
        return shannon_of_spectrum(p);
    }
    let s = p
        .iter()
        .filter(|&&x| x > T::zero())
        .fold(T::zero(), |acc, &x| acc + x.powf(q));
    (s.ln() / (T::one() - q)).max(T::zero())
}

/// Shannon entropy in nats; zero entries contribute zero.
pub fn shannon_of_spectrum<T: Real>(p: &[T]) -> T {
    p.iter()
        .filter(|&&x| x > T::zero())
        .fold(T::zero(), |acc, &x| acc - x * x.ln())
        .max(T::zero())
}

/// `S_q(rho) = log(tr rho^q) / (1 - q)`; `q == 1` routes to the von Neumann entropy.
pub fn renyi_entropy<T: Real>(rho: &DensityMatrix<T>, order: EntropyOrder<T>) -> T {
    let nats = renyi_of_spectrum(&rho.eigenvalues(), order.q());
    order.base().from_nats(nats)
}

/// `S(rho) = -tr rho log rho`
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>, base: Base) -> T {
    base.from_nats(shannon_of_spectrum(&rho.eigenvalues()))
}

/// `T_q(rho) = (tr rho^q - 1) / (1 - q)` for `q > 0`, `q != 1`.
pub fn tsallis_entropy<T: Real>(rho: &DensityMatrix<T>, q: T) -> Result<T> {
    if q == T::one() {
        return Err(Error::InvalidParameter {
            name: "q",
            reason: "Tsallis entropy is undefined at q = 1; use the von Neumann entropy".into(),
        });
    }
    if !(q > T::zero()) || !q.is_finite() {
        return Err(Error::OutOfRange {
            name: "q",
            value: to_f64(q),
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let s = rho
        .eigenvalues()
        .iter()
        .filter(|&&x| x > T::zero())
        .fold(T::zero(), |acc, &x| acc + x.powf(q));
    Ok((s - T::one()) / (T::one() - q))
}

/// `(U (x) 1) |phi_+>` with `|phi_+> = n^{-1/2} sum_i |ii>`.
pub fn maximally_entangled<T: Real>(
    n: usize,
    local_unitary: Option<&CMatrix<T>>,
) -> Result<PureState<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "dimension must be at least 1".into(),
        });
    }
    let amp = creal(T::one() / lit::<T>(n as f64).sqrt());
    let mut v = CVector::zeros(n * n);
    for i in 0..n {
        v[i * n + i] = amp;
    }
    if let Some(u) = local_unitary {
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.nrows(),
            });
        }
        let residual = to_f64(unitarity_residual(u));
        if !(residual <= Tolerances::for_scalar::<T>().norm) {
            return Err(Error::NotUnitary { residual });
        }
        v = kron(u, &identity(n)) * v;
    }
    Ok(PureState { amplitudes: v })
}

/// Canonical purification `sum_i sqrt(p_i) |e_i> (x) |i>` on system (x) reference.
pub fn purify<T: Real>(rho: &DensityMatrix<T>) -> PureState<T> {
    let n = rho.dim();
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let values = clamp_spectrum(values, n);
    let mut v = CVector::zeros(n * n);
    for (k, p) in values.iter().enumerate() {
        let w = p.sqrt();
        for a in 0..n {
            v[a * n + k] = vectors[(a, k)] * creal(w);
        }
    }
    let norm = v.norm();
    PureState {
        amplitudes: v / creal(norm),
    }
}

/// Largest deviation of either reduced state of `psi` on `C^n (x) C^n` from `1/n`.
pub fn maximal_entanglement_residual<T: Real>(psi: &PureState<T>, n: usize) -> Result<T> {
    if psi.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: psi.dim(),
        });
    }
    let rho = psi.projector();
    let target = DensityMatrix::<T>::maximally_mixed(n);
    let a = rho.partial_trace(Subsystem::Second, (n, n))?;
    let b = rho.partial_trace(Subsystem::First, (n, n))?;
    Ok(max_abs_diff(a.matrix(), target.matrix()).max(max_abs_diff(b.matrix(), target.matrix())))
}

/// Entrywise distance helper for states.
pub fn state_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> T {
    max_abs(&(a.matrix() - b.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn diag(p: &[f64]) -> CMatrix<f64> {
        let n = p.len();
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C::new(p[i], 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn make_density_accepts_valid_states() {
        let rho = DensityMatrix::new(diag(&[0.5, 0.5])).unwrap();
        assert_eq!(rho.eigenvalues(), vec![0.5, 0.5]);
        assert!(DensityMatrix::new(diag(&[0.75, 0.25])).is_ok());
    }

    #[test]
    fn make_density_names_the_violated_invariant() {
        match DensityMatrix::new(diag(&[1.5, -0.5])) {
            Err(Error::NegativeEigenvalue { min_eigenvalue }) => {
                assert_abs_diff_eq!(min_eigenvalue, -0.5, epsilon = 1e-14)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            DensityMatrix::new(diag(&[0.5, 0.6])),
            Err(Error::TraceNotUnit { .. })
        ));
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = C::new(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(CMatrix::<f64>::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn tensor_of_diagonal_states() {
        let a = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityMatrix::<f64>::maximally_mixed(2);
        let ab = a.tensor(&b);
        assert!(max_abs_diff(ab.matrix(), &diag(&[0.5, 0.5, 0.0, 0.0])) < 1e-15);
        let mm = b.tensor(&b);
        assert!(state_distance(&mm, &DensityMatrix::maximally_mixed(4)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let phi = maximally_entangled::<f64>(2, None).unwrap();
        let reduced = phi
            .projector()
            .partial_trace(Subsystem::Second, (2, 2))
            .unwrap();
        assert!(state_distance(&reduced, &DensityMatrix::maximally_mixed(2)) < 1e-15);
        let mm = DensityMatrix::<f64>::maximally_mixed(4);
        for which in [Subsystem::First, Subsystem::Second] {
            let r = mm.partial_trace(which, (2, 2)).unwrap();
            assert!(state_distance(&r, &DensityMatrix::maximally_mixed(2)) < 1e-15);
        }
        assert!(matches!(
            mm.partial_trace(Subsystem::First, (3, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn renyi_and_von_neumann_reference_values() {
        let mm = DensityMatrix::<f64>::maximally_mixed(2);
        for q in [0.0, 0.5, 2.0, 3.0] {
            assert_abs_diff_eq!(
                renyi_entropy(&mm, EntropyOrder::renyi(q)),
                2f64.ln(),
                epsilon = 1e-14
            );
        }
        let pure = PureState::<f64>::basis(3, 1).projector();
        assert_abs_diff_eq!(
            renyi_entropy(&pure, EntropyOrder::renyi(2.0)),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            von_neumann_entropy(&pure, Base::Natural),
            0.0,
            epsilon = 1e-14
        );

        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        // -ln(9/16 + 1/16)
        assert_abs_diff_eq!(
            renyi_entropy(&rho, EntropyOrder::renyi(2.0)),
            -(10.0f64 / 16.0).ln(),
            epsilon = 1e-14
        );
        let vn = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert_abs_diff_eq!(
            von_neumann_entropy(&rho, Base::Natural),
            vn,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(vn, 0.5623351446188083, epsilon = 1e-15);
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix::<f64>::maximally_mixed(5), Base::Natural),
            5f64.ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn order_one_is_von_neumann() {
        let rho = DensityMatrix::from_diagonal(&[0.6, 0.3, 0.1]).unwrap();
        assert_eq!(
            renyi_entropy(&rho, EntropyOrder::renyi(1.0)),
            von_neumann_entropy(&rho, Base::Natural)
        );
        assert!(EntropyOrder::<f64>::new(-0.5, Base::Natural).is_err());
    }

    #[test]
    fn base_two_divides_by_ln2() {
        let rho = DensityMatrix::from_diagonal(&[0.6, 0.3, 0.1]).unwrap();
        let nats = von_neumann_entropy(&rho, Base::Natural);
        assert_eq!(
            von_neumann_entropy(&rho, Base::Two),
            nats / std::f64::consts::LN_2
        );
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix::<f64>::maximally_mixed(4), Base::Two),
            2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn tsallis_values_and_errors() {
        let pure = PureState::<f64>::basis(2, 0).projector();
        assert_abs_diff_eq!(tsallis_entropy(&pure, 2.0).unwrap(), 0.0, epsilon = 1e-15);
        let mm = DensityMatrix::<f64>::maximally_mixed(2);
        assert_abs_diff_eq!(tsallis_entropy(&mm, 2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(tsallis_entropy(&mm, 1.0).is_err());
        assert!(tsallis_entropy(&mm, 0.0).is_err());
    }

    #[test]
    fn maximally_entangled_states() {
        let phi = maximally_entangled::<f64>(2, None).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [h, 0.0, 0.0, h];
        for (a, e) in phi.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, 0.0);
        }
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[
                C::new(0.0, 0.0),
                C::new(1.0, 0.0),
                C::new(1.0, 0.0),
                C::new(0.0, 0.0),
            ],
        );
        let flipped = maximally_entangled(2, Some(&x)).unwrap();
        let expected = [0.0, h, h, 0.0];
        for (a, e) in flipped.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
        }
        for n in [2, 3, 4] {
            let psi = maximally_entangled::<f64>(n, None).unwrap();
            assert!(maximal_entanglement_residual(&psi, n).unwrap() < 1e-15);
        }
        let not_unitary = CMatrix::from_row_slice(
            2,
            2,
            &[
                C::new(1.0, 0.0),
                C::new(1.0, 0.0),
                C::new(0.0, 0.0),
                C::new(1.0, 0.0),
            ],
        );
        assert!(matches!(
            maximally_entangled(2, Some(&not_unitary)),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn purification_reduces_to_the_state() {
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let psi = purify(&rho);
        let back = psi
            .projector()
            .partial_trace(Subsystem::Second, (3, 3))
            .unwrap();
        assert!(state_distance(&back, &rho) < 1e-14);
    }

    #[test]
    fn f32_states_work_with_scaled_tolerances() {
        let rho = DensityMatrix::<f32>::from_diagonal(&[0.75, 0.25]).unwrap();
        let s = renyi_entropy(&rho, EntropyOrder::renyi(2.0f32));
        assert!((s - 0.47000363f32).abs() < 1e-5);
    }
}
