//! Quantum channels in Kraus, superoperator and Choi–Jamiołkowski form.
//!
//! The Jamiołkowski state of a channel on `C^n` lives on
//! `output (x) reference`:
//!
//! ```text
//! sigma = (Phi (x) id)(|phi_+><phi_+|),   D = n * sigma
//! <ab| D |cd> = Phi(|b><d|)_{ac}
//! ```
//!
//! so tracing out the first (output) factor gives `1/n` for every
//! trace-preserving map, and tracing out the second gives `Phi(1/n)`.
//! Matrices are vectorized row by row: `vec(rho)[i*n + j] = rho_ij`.

use crate::error::{Error, Result};
use crate::linalg::{
    exact_sqrt, hermitian_eigen, identity, kron, max_abs_diff, outer, partial_trace_raw,
    require_square, unitarity_residual,
};
use crate::random::{haar_isometry, seeded_rng};
use crate::scalar::{cplx, creal, lit, to_f64, CMatrix, CVector, Real};
use crate::states::{
    clamp_spectrum, purify, renyi_entropy, von_neumann_entropy, Base, DensityMatrix, EntropyOrder,
    PureState, Subsystem, Tolerances,
};

/// Completely positive, trace-preserving map given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    dim: usize,
    operators: Vec<CMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Validates shapes and the completeness relation `sum K^dagger K = 1`.
    pub fn new(operators: Vec<CMatrix<T>>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| Error::InvalidParameter {
            name: "operators",
            reason: "at least one Kraus operator is required".into(),
        })?;
        let dim = require_square(first)?;
        for k in &operators {
            let d = require_square(k)?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d,
                });
            }
        }
        let channel = KrausChannel { dim, operators };
        let residual = to_f64(channel.completeness_residual());
        if !(residual <= Tolerances::for_scalar::<T>().norm) {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(channel)
    }

    pub(crate) fn from_trusted(dim: usize, operators: Vec<CMatrix<T>>) -> Self {
        KrausChannel { dim, operators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.operators
    }

    /// Number of stored operators (an upper bound on the Kraus rank).
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `max|sum K^dagger K - 1|`
    pub fn completeness_residual(&self) -> T {
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, k| {
                acc + k.adjoint() * k
            });
        max_abs_diff(&sum, &identity(self.dim))
    }

    /// `sum K m K^dagger` on a raw matrix of matching size.
    pub(crate) fn apply_matrix(&self, m: &CMatrix<T>) -> CMatrix<T> {
        self.operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, k| {
                acc + k * m * k.adjoint()
            })
    }

    /// `(Phi (x) id_k)(m)` for `m` on `C^n (x) C^k`.
    pub(crate) fn apply_with_ancilla(&self, m: &CMatrix<T>, k: usize) -> CMatrix<T> {
        let id = identity::<T>(k);
        let d = self.dim * k;
        self.operators.iter().fold(CMatrix::zeros(d, d), |acc, op| {
            let big = kron(op, &id);
            acc + &big * m * big.adjoint()
        })
    }

    /// Output state for a pure input, `sum K |psi><psi| K^dagger`.
    pub(crate) fn apply_pure(&self, psi: &CVector<T>) -> CMatrix<T> {
        self.operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, k| {
                let v = k * psi;
                acc + outer(&v)
            })
    }
}

pub fn apply<T: Real>(
    channel: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    if rho.dim() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix::from_trusted(
        channel.apply_matrix(rho.matrix()),
    ))
}

/// `sigma^Phi` on `output (x) reference` together with the channel dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct JamiolkowskiState<T: Real> {
    dim: usize,
    sigma: DensityMatrix<T>,
}

impl<T: Real> JamiolkowskiState<T> {
    /// Accepts a state on `C^n (x) C^n` whose reference marginal is `1/n`.
    pub fn new(sigma: DensityMatrix<T>) -> Result<Self> {
        let dim = exact_sqrt(sigma.dim())?;
        let state = JamiolkowskiState { dim, sigma };
        let residual = to_f64(state.trace_preservation_residual());
        if !(residual <= Tolerances::for_scalar::<T>().trace) {
            return Err(Error::ChoiNotTracePreserving { residual });
        }
        Ok(state)
    }

    /// Builds from an unnormalized dynamical matrix `D = n sigma`.
    pub fn from_choi_matrix(d: CMatrix<T>) -> Result<Self> {
        let n = exact_sqrt(require_square(&d)?)?;
        let sigma = match DensityMatrix::new(d / creal(lit::<T>(n as f64))) {
            Err(Error::NegativeEigenvalue { min_eigenvalue }) => {
                return Err(Error::NotCompletelyPositive { min_eigenvalue })
            }
            other => other?,
        };
        Self::new(sigma)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> &DensityMatrix<T> {
        &self.sigma
    }

    /// Dynamical (Choi) matrix `D = n sigma`.
    pub fn choi_matrix(&self) -> CMatrix<T> {
        self.sigma.matrix() * creal(lit::<T>(self.dim as f64))
    }

    /// Spectrum of `sigma`, descending.
    pub fn spectrum(&self) -> Vec<T> {
        self.sigma.eigenvalues()
    }

    /// Number of eigenvalues of `sigma` above `tol`.
    pub fn kraus_rank(&self, tol: T) -> usize {
        self.spectrum().iter().filter(|&&x| x > tol).count()
    }

    /// Smallest eigenvalue of `sigma` before clamping (complete-positivity witness).
    pub fn min_eigenvalue(&self) -> T {
        crate::linalg::hermitian_eigenvalues(self.sigma.matrix())[0]
    }

    /// `max|tr_out sigma - 1/n|` (trace-preservation witness).
    pub fn trace_preservation_residual(&self) -> T {
        let n = self.dim;
        let reduced = partial_trace_raw(self.sigma.matrix(), n, n, true);
        max_abs_diff(&reduced, DensityMatrix::<T>::maximally_mixed(n).matrix())
    }

    /// `tr_ref sigma = Phi(1/n)`.
    pub fn output_marginal(&self) -> DensityMatrix<T> {
        self.sigma
            .partial_trace(Subsystem::Second, (self.dim, self.dim))
            .expect("sigma has dimension n^2")
    }
}

/// `sigma^Phi = (Phi (x) id)(|phi_+><phi_+|)`.
pub fn choi<T: Real>(channel: &KrausChannel<T>) -> JamiolkowskiState<T> {
    let n = channel.dim();
    let phi = crate::states::maximally_entangled::<T>(n, None).expect("n >= 1");
    let sigma = channel.apply_with_ancilla(&outer(phi.amplitudes()), n);
    JamiolkowskiState {
        dim: n,
        sigma: DensityMatrix::from_trusted(sigma),
    }
}

/// Matrix of a channel on vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperoperatorMatrix<T: Real> {
    dim: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> SuperoperatorMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `unvec(Phi_hat vec(m))`
    pub fn apply(&self, m: &CMatrix<T>) -> CMatrix<T> {
        unvectorize(&(&self.matrix * vectorize(m)), self.dim)
    }
}

/// Row-major vectorization.
pub fn vectorize<T: Real>(m: &CMatrix<T>) -> CVector<T> {
    let (r, c) = m.shape();
    CVector::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

pub fn unvectorize<T: Real>(v: &CVector<T>, n: usize) -> CMatrix<T> {
    CMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

/// `<ij| Phi_hat |kl> = Phi(|k><l|)_{ij}`.
pub fn superoperator<T: Real>(channel: &KrausChannel<T>) -> SuperoperatorMatrix<T> {
    let n = channel.dim();
    let mut matrix = CMatrix::zeros(n * n, n * n);
    for k in 0..n {
        for l in 0..n {
            let mut unit = CMatrix::zeros(n, n);
            unit[(k, l)] = creal(T::one());
            let image = channel.apply_matrix(&unit);
            for i in 0..n {
                for j in 0..n {
                    matrix[(i * n + j, k * n + l)] = image[(i, j)];
                }
            }
        }
    }
    SuperoperatorMatrix { dim: n, matrix }
}

/// Index permutation `R(M)_{(a,b),(c,d)} = M_{(a,c),(b,d)}`; an involution
/// that maps the superoperator matrix to the dynamical matrix and back.
pub fn reshuffle<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    let d = require_square(m)?;
    let n = exact_sqrt(d)?;
    Ok(CMatrix::from_fn(d, d, |row, col| {
        let (a, b) = (row / n, row % n);
        let (c, e) = (col / n, col % n);
        m[(a * n + c, b * n + e)]
    }))
}

/// Kraus operators `sqrt(n mu_k) unvec(v_k)` from the eigenpairs of `sigma`
/// with `mu_k` above the rank tolerance.
pub fn kraus_from_choi<T: Real>(state: &JamiolkowskiState<T>) -> KrausChannel<T> {
    let n = state.dim();
    let rank_tol: T = lit(Tolerances::for_scalar::<T>().rank);
    let (values, vectors) = hermitian_eigen(state.sigma().matrix());
    let scale = lit::<T>(n as f64);
    let mut operators = Vec::new();
    for (idx, &mu) in values.iter().enumerate().rev() {
        if mu <= rank_tol {
            continue;
        }
        let w = creal((scale * mu).sqrt());
        operators.push(CMatrix::from_fn(n, n, |a, b| vectors[(a * n + b, idx)] * w));
    }
    KrausChannel::from_trusted(n, operators)
}

/// Channel `Phi1 (x) Phi2` with operators `K (x) L`.
pub fn tensor_channels<T: Real>(
    first: &KrausChannel<T>,
    second: &KrausChannel<T>,
) -> KrausChannel<T> {
    let mut operators = Vec::with_capacity(first.len() * second.len());
    for k in first.operators() {
        for l in second.operators() {
            operators.push(kron(k, l));
        }
    }
    KrausChannel::from_trusted(first.dim() * second.dim(), operators)
}

/// `outer ∘ inner`, i.e. `inner` acts first.
pub fn compose<T: Real>(
    outer_map: &KrausChannel<T>,
    inner: &KrausChannel<T>,
) -> Result<KrausChannel<T>> {
    if outer_map.dim() != inner.dim() {
        return Err(Error::DimensionMismatch {
            expected: inner.dim(),
            found: outer_map.dim(),
        });
    }
    let mut operators = Vec::with_capacity(outer_map.len() * inner.len());
    for l in outer_map.operators() {
        for k in inner.operators() {
            operators.push(l * k);
        }
    }
    Ok(KrausChannel::from_trusted(inner.dim(), operators))
}

pub fn identity_channel<T: Real>(n: usize) -> KrausChannel<T> {
    KrausChannel::from_trusted(n, vec![identity(n)])
}

/// `rho -> U rho U^dagger`
pub fn unitary_channel<T: Real>(u: CMatrix<T>) -> Result<KrausChannel<T>> {
    let n = require_square(&u)?;
    let residual = to_f64(unitarity_residual(&u));
    if !(residual <= Tolerances::for_scalar::<T>().norm) {
        return Err(Error::NotUnitary { residual });
    }
    Ok(KrausChannel::from_trusted(n, vec![u]))
}

/// Allowed interval `[-1/(n^2-1), 1]` for the depolarizing parameter.
pub fn depolarizing_interval(n: usize) -> (f64, f64) {
    let n2 = (n * n) as f64;
    (-1.0 / (n2 - 1.0), 1.0)
}

pub(crate) fn check_depolarizing_args<T: Real>(n: usize, lambda: T) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "depolarizing channels need n >= 2".into(),
        });
    }
    let (lo, hi) = depolarizing_interval(n);
    let x = to_f64(lambda);
    let slack = 1e-12;
    if !(x >= lo - slack && x <= hi + slack) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: x,
            lo,
            hi,
        });
    }
    Ok(())
}

/// `rho -> lambda rho + (1 - lambda) 1/n`, with Kraus operators taken from
/// the eigendecomposition of its Jamiołkowski state
/// `lambda |phi_+><phi_+| + (1 - lambda) 1/n^2`.
pub fn depolarizing<T: Real>(n: usize, lambda: T) -> Result<KrausChannel<T>> {
    check_depolarizing_args(n, lambda)?;
    let phi = crate::states::maximally_entangled::<T>(n, None)?;
    let n2 = lit::<T>((n * n) as f64);
    let sigma = outer(phi.amplitudes()) * creal(lambda)
        + identity::<T>(n * n) * creal((T::one() - lambda) / n2);
    let state = JamiolkowskiState {
        dim: n,
        sigma: DensityMatrix::from_trusted(sigma),
    };
    Ok(kraus_from_choi(&state))
}

pub fn completely_depolarizing<T: Real>(n: usize) -> KrausChannel<T> {
    depolarizing(n, T::zero()).expect("lambda = 0 is always admissible")
}

/// Identity and the three Pauli matrices `X, Y, Z`.
pub fn pauli_matrices<T: Real>() -> [CMatrix<T>; 4] {
    let o = T::zero();
    let l = T::one();
    [
        CMatrix::from_row_slice(2, 2, &[creal(l), creal(o), creal(o), creal(l)]),
        CMatrix::from_row_slice(2, 2, &[creal(o), creal(l), creal(l), creal(o)]),
        CMatrix::from_row_slice(2, 2, &[creal(o), cplx(o, -l), cplx(o, l), creal(o)]),
        CMatrix::from_row_slice(2, 2, &[creal(l), creal(o), creal(o), creal(-l)]),
    ]
}

/// Validates a probability 4-vector.
pub(crate) fn check_simplex<T: Real>(name: &'static str, w: &[T]) -> Result<()> {
    let tol = Tolerances::for_scalar::<T>().trace;
    for &x in w {
        if !(to_f64(x) >= -tol) {
            return Err(Error::OutOfRange {
                name,
                value: to_f64(x),
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let sum = to_f64(w.iter().fold(T::zero(), |acc, &x| acc + x));
    if !((sum - 1.0).abs() <= tol) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("weights sum to {sum}, not 1"),
        });
    }
    Ok(())
}

/// `rho -> sum_i b_i sigma_i rho sigma_i` with `(sigma_0..3) = (1, X, Y, Z)`.
/// Zero weights contribute no operator.
pub fn pauli_channel<T: Real>(b: [T; 4]) -> Result<KrausChannel<T>> {
    check_simplex("pauli weight", &b)?;
    let operators = pauli_matrices::<T>()
        .into_iter()
        .zip(b)
        .filter(|(_, w)| *w > T::zero())
        .map(|(s, w)| s * creal(w.sqrt()))
        .collect();
    Ok(KrausChannel::from_trusted(2, operators))
}

/// `rho -> diag(rho)` with projectors `|i><i|` as Kraus operators.
pub fn coarse_graining<T: Real>(n: usize) -> Result<KrausChannel<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "coarse graining needs n >= 2".into(),
        });
    }
    let operators = (0..n)
        .map(|i| {
            let mut p = CMatrix::zeros(n, n);
            p[(i, i)] = creal(T::one());
            p
        })
        .collect();
    Ok(KrausChannel::from_trusted(n, operators))
}

/// Random channel of Kraus rank `rank`: the `n x n` blocks of a Haar-random
/// `(n * rank) x n` isometry. Deterministic in `(n, rank, seed)`.
pub fn random_channel<T: Real>(n: usize, rank: usize, seed: u64) -> Result<KrausChannel<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "dimension must be at least 1".into(),
        });
    }
    if rank == 0 || rank > n * n {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
            lo: 1.0,
            hi: (n * n) as f64,
        });
    }
    let mut rng = seeded_rng(seed, 0);
    let v = haar_isometry::<T, _>(n * rank, n, &mut rng);
    let operators = (0..rank)
        .map(|alpha| v.rows(alpha * n, n).into_owned())
        .collect();
    Ok(KrausChannel::from_trusted(n, operators))
}

/// `S^map_q(Phi) = S_q(sigma^Phi)`.
pub fn map_entropy<T: Real>(channel: &KrausChannel<T>, order: EntropyOrder<T>) -> T {
    renyi_entropy(choi(channel).sigma(), order)
}

/// Entropy of `(Phi (x) id)(|psi><psi|)` for a purification `psi` of the
/// input on `C^n (x) C^ref_dim`.
pub fn exchange_entropy_of_purification<T: Real>(
    channel: &KrausChannel<T>,
    psi: &PureState<T>,
    ref_dim: usize,
    base: Base,
) -> Result<T> {
    if psi.dim() != channel.dim() * ref_dim {
        return Err(Error::DimensionMismatch {
            expected: channel.dim() * ref_dim,
            found: psi.dim(),
        });
    }
    let out = channel.apply_with_ancilla(&outer(psi.amplitudes()), ref_dim);
    Ok(von_neumann_entropy(&DensityMatrix::from_trusted(out), base))
}

/// Exchange entropy `S(varsigma(Phi, rho))` via the canonical purification.
pub fn exchange_entropy<T: Real>(
    channel: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
    base: Base,
) -> Result<T> {
    if rho.dim() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: rho.dim(),
        });
    }
    let psi = purify(rho);
    exchange_entropy_of_purification(channel, &psi, rho.dim(), base)
}

/// Eigenvalues of a Hermitian matrix with round-off zeros clamped, descending.
pub(crate) fn sorted_spectrum<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut v = clamp_spectrum(crate::linalg::hermitian_eigenvalues(m), m.nrows());
    v.reverse();
    v
}
