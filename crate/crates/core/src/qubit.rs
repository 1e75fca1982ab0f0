//! Qubit channels in Bloch form and the tetrahedron of Pauli channels.
//!
//! Unital qubit channels act on Bloch vectors as `w -> t + diag(lambda) w`
//! (with `t = 0`). Their Choi spectra `v` are Pauli weights, and after the
//! symmetry reduction to `|lambda_1| <= |lambda_2| <= |lambda_3|` they fill the
//! tetrahedron `K` spanned by
//!
//! ```text
//! W1 = (1, 0, 0, 0)           A  identity
//! W2 = (1/2, 1/2, 0, 0)       B  coarse graining
//! W3 = (1/3, 1/3, 1/3, 0)     C
//! W4 = (1/4, 1/4, 1/4, 1/4)   D  completely depolarizing
//! ```
//!
//! Pauli weights `b` are indexed `(1, X, Y, Z)`; the Choi spectrum `v` in the
//! order used here is `(b_0, b_3, b_2, b_1)`.

use rayon::prelude::*;

use crate::channels::JamiolkowskiState;
use crate::channels::{check_simplex, choi, pauli_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::min_output::{
    depolarizing_curve, min_output_entropy, qubit_pauli_min_output_q2, MinOutOptions,
};
use crate::random::{flat_dirichlet, seeded_rng};
use crate::scalar::{cplx, creal, lit, to_f64, CMatrix, Real};
use crate::states::{renyi_entropy, renyi_of_spectrum, DensityMatrix, EntropyOrder, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams<T> {
    pub lambda: [T; 3],
    pub t: [T; 3],
}

impl<T: Real> BlochParams<T> {
    pub fn unital(lambda: [T; 3]) -> Self {
        BlochParams {
            lambda,
            t: [T::zero(); 3],
        }
    }
}

/// Barycentric coordinates in `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraWeights<T> {
    pub a: [T; 4],
}

impl<T: Real> TetraWeights<T> {
    pub fn new(a: [T; 4]) -> Result<Self> {
        check_simplex("tetrahedron weight", &a)?;
        Ok(TetraWeights { a })
    }

    pub fn vertex(i: usize) -> Self {
        let mut a = [T::zero(); 4];
        a[i] = T::one();
        TetraWeights { a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiSpectrumQubit<T> {
    pub v: [T; 4],
}

/// Normalized Choi matrix of a Bloch-form channel, not necessarily positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitChoi<T: Real> {
    pub matrix: CMatrix<T>,
    pub min_eigenvalue: T,
    pub completely_positive: bool,
}

impl<T: Real> QubitChoi<T> {
    /// Validated Jamiolkowski state, failing when the map is not CP.
    pub fn into_state(self) -> Result<JamiolkowskiState<T>> {
        JamiolkowskiState::from_choi_matrix(self.matrix * creal(lit::<T>(2.0)))
    }
}

/// Choi state of `w -> t + diag(lambda) w`, output factor first.
pub fn choi_qubit<T: Real>(p: &BlochParams<T>) -> QubitChoi<T> {
    let [l1, l2, l3] = p.lambda;
    let [t1, t2, t3] = p.t;
    let one = T::one();
    let z = creal(T::zero());
    let q = lit::<T>(0.25);
    let r = |x: T| creal(x * q);
    let tm = cplx(t1 * q, -t2 * q);
    let tp = cplx(t1 * q, t2 * q);
    #[rustfmt::skip]
    let entries = [
        r(one + l3 + t3), z, tm, r(l1 + l2),
        z, r(one - l3 + t3), r(l1 - l2), tm,
        tp, r(l1 - l2), r(one - l3 - t3), z,
        r(l1 + l2), tp, z, r(one + l3 - t3),
    ];
    let matrix = CMatrix::from_row_slice(4, 4, &entries);
    let min_eigenvalue = hermitian_eigenvalues(&matrix)[0];
    let tol = lit::<T>(Tolerances::for_scalar::<T>().psd);
    QubitChoi {
        completely_positive: min_eigenvalue >= -tol,
        min_eigenvalue,
        matrix,
    }
}

pub fn spectrum_from_lambda<T: Real>(lambda: [T; 3]) -> ChoiSpectrumQubit<T> {
    let [l1, l2, l3] = lambda;
    let one = T::one();
    let q = lit::<T>(0.25);
    ChoiSpectrumQubit {
        v: [
            (one + l1 + l2 + l3) * q,
            (one - l1 - l2 + l3) * q,
            (one - l1 + l2 - l3) * q,
            (one + l1 - l2 - l3) * q,
        ],
    }
}

pub fn lambda_from_spectrum<T: Real>(s: &ChoiSpectrumQubit<T>) -> [T; 3] {
    let [v1, v2, v3, v4] = s.v;
    [v1 - v2 - v3 + v4, v1 - v2 + v3 - v4, v1 + v2 - v3 - v4]
}

/// Bloch axes of the Pauli channel with weights `b` on `(1, X, Y, Z)`.
pub fn lambda_from_pauli<T: Real>(b: [T; 4]) -> [T; 3] {
    let [b0, b1, b2, b3] = b;
    [b0 + b1 - b2 - b3, b0 - b1 + b2 - b3, b0 - b1 - b2 + b3]
}

pub fn pauli_from_lambda<T: Real>(lambda: [T; 3]) -> [T; 4] {
    let [v1, v2, v3, v4] = spectrum_from_lambda(lambda).v;
    [v1, v4, v3, v2]
}

/// Representative of `lambda` in `K`: entries sorted by modulus, the two
/// largest made non-negative and the sign of the product kept on the smallest.
pub fn canonicalize<T: Real>(lambda: [T; 3]) -> [T; 3] {
    let mut l = lambda;
    l.sort_by(|a, b| {
        a.abs()
            .partial_cmp(&b.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let negative = (l[0] < T::zero()) ^ (l[1] < T::zero()) ^ (l[2] < T::zero());
    let l0 = if negative { -l[0].abs() } else { l[0].abs() };
    [l0, l[1].abs(), l[2].abs()]
}

/// Coordinates in `K` of the canonical representative of `lambda`.
pub fn weights_from_lambda<T: Real>(lambda: [T; 3]) -> Result<TetraWeights<T>> {
    let [l1, l2, l3] = canonicalize(lambda);
    let half = lit::<T>(0.5);
    let raw = [
        (l1 + l2) * half,
        l3 - l2,
        lit::<T>(1.5) * (l2 - l1),
        T::one() + l1 - l2 - l3,
    ];
    let tol = lit::<T>(Tolerances::for_scalar::<T>().psd);
    let min = raw.iter().copied().fold(T::one(), |m, x| m.min(x));
    if !(min >= -tol) {
        return Err(Error::OutsideTetrahedron {
            min_weight: to_f64(min),
        });
    }
    Ok(TetraWeights {
        a: raw.map(|x| x.max(T::zero())),
    })
}

/// Choi spectrum `V = sum_i a_i W_i`.
pub fn spectrum_from_weights<T: Real>(w: &TetraWeights<T>) -> ChoiSpectrumQubit<T> {
    let [a1, a2, a3, a4] = w.a;
    let half = lit::<T>(0.5);
    let third = T::one() / lit(3.0);
    let quarter = lit::<T>(0.25);
    let v4 = a4 * quarter;
    let v3 = a3 * third + v4;
    let v2 = a2 * half + v3;
    ChoiSpectrumQubit {
        v: [a1 + v2, v2, v3, v4],
    }
}

pub fn lambda_from_weights<T: Real>(w: &TetraWeights<T>) -> [T; 3] {
    lambda_from_spectrum(&spectrum_from_weights(w))
}

/// `S_2^min` at a point of `K`: `-log((9 + (1 + 2a_1 + 2a_2 - a_4)^2) / 18)`.
pub fn min_output_from_weights<T: Real>(w: &TetraWeights<T>) -> T {
    let [a1, a2, _, a4] = w.a;
    let two = lit::<T>(2.0);
    let s = T::one() + two * a1 + two * a2 - a4;
    -((lit::<T>(9.0) + s * s) / lit(18.0)).ln()
}

/// Entropy flavour used for tetrahedron plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyKind {
    Renyi2,
    VonNeumann,
}

impl EntropyKind {
    pub fn order<T: Real>(self) -> EntropyOrder<T> {
        match self {
            EntropyKind::Renyi2 => EntropyOrder::renyi(lit(2.0)),
            EntropyKind::VonNeumann => EntropyOrder::von_neumann(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EntropyKind::Renyi2 => "renyi2",
            EntropyKind::VonNeumann => "von_neumann",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    /// Dephasing channels, `S_2^min = 0`.
    AB,
    AC,
    /// Depolarizing channels with `lambda >= 0`.
    AD,
    BC,
    /// Diagonal Choi matrices.
    BD,
    /// Depolarizing channels with `lambda <= 0`.
    CD,
}

impl Edge {
    pub const ALL: [Edge; 6] = [Edge::AB, Edge::AC, Edge::AD, Edge::BC, Edge::BD, Edge::CD];

    pub fn label(self) -> &'static str {
        match self {
            Edge::AB => "AB",
            Edge::AC => "AC",
            Edge::AD => "AD",
            Edge::BC => "BC",
            Edge::BD => "BD",
            Edge::CD => "CD",
        }
    }

    /// Indices of the two vertices among `A, B, C, D`.
    pub fn vertices(self) -> (usize, usize) {
        match self {
            Edge::AB => (0, 1),
            Edge::AC => (0, 2),
            Edge::AD => (0, 3),
            Edge::BC => (1, 2),
            Edge::BD => (1, 3),
            Edge::CD => (2, 3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub edge: Edge,
    /// Pauli weights of the channel at this point.
    pub b: [T; 4],
    pub s_map: T,
    pub s_min: T,
}

fn check_edge_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "need at least two samples per edge".into(),
        });
    }
    Ok(())
}

fn edge_weights<T: Real>(edge: Edge, k: usize, samples: usize) -> TetraWeights<T> {
    let (from, to) = edge.vertices();
    let t = lit::<T>(k as f64 / (samples - 1) as f64);
    let mut a = [T::zero(); 4];
    a[from] = T::one() - t;
    a[to] = t;
    TetraWeights { a }
}

/// Rényi-2 images of the edges AB, AD and BD of `K`, each sampled at
/// `samples` equally spaced edge parameters from the first vertex to the second.
pub fn boundary_curves<T: Real>(samples: usize) -> Result<Vec<CurvePoint<T>>> {
    check_edge_samples(samples)?;
    let two = lit::<T>(2.0);
    let mut out = Vec::with_capacity(3 * samples);
    for edge in [Edge::AB, Edge::AD, Edge::BD] {
        for k in 0..samples {
            let w = edge_weights::<T>(edge, k, samples);
            let spec = spectrum_from_weights(&w);
            let s_map = renyi_of_spectrum(&spec.v, two);
            let s_min = match edge {
                Edge::AB => T::zero(),
                Edge::AD => depolarizing_curve(2, s_map)?,
                _ => min_output_from_weights(&w),
            };
            out.push(CurvePoint {
                edge,
                b: pauli_from_lambda(lambda_from_spectrum(&spec)),
                s_map,
                s_min,
            });
        }
    }
    Ok(out)
}

/// All six edges of `K` in the chosen entropy plane. Rényi-2 minimal output
/// entropies use the closed form, von Neumann ones the numeric minimizer.
pub fn tetrahedron_edges<T: Real>(
    samples: usize,
    kind: EntropyKind,
    options: &MinOutOptions,
) -> Result<Vec<CurvePoint<T>>> {
    check_edge_samples(samples)?;
    let order = kind.order::<T>();
    Edge::ALL
        .iter()
        .flat_map(|&edge| (0..samples).map(move |k| (edge, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(edge, k)| {
            let w = edge_weights::<T>(edge, k, samples);
            let spec = spectrum_from_weights(&w);
            let b = pauli_from_lambda(lambda_from_spectrum(&spec));
            let s_min = match kind {
                EntropyKind::Renyi2 => min_output_from_weights(&w),
                EntropyKind::VonNeumann => {
                    min_output_entropy(&pauli_channel(b)?, order, options)?.value
                }
            };
            Ok(CurvePoint {
                edge,
                b,
                s_map: renyi_of_spectrum(&spec.v, order.q()),
                s_min,
            })
        })
        .collect()
}

/// A vertical slice of a scatter lying entirely below the chord joining two
/// of its points, so that the scatter is not the sample of a convex set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordWitness<T> {
    pub slice_lo: T,
    pub slice_hi: T,
    pub points_in_slice: usize,
    /// Smallest `chord(s_map) - s_min` over the slice.
    pub min_gap: T,
}

/// Splits the span between `p` and `q` into `slices` vertical slices and
/// returns the non-empty slice whose points clear the chord `pq` by the
/// widest margin, provided that margin exceeds `margin`.
pub fn chord_witness<T: Real>(
    points: &[(T, T)],
    p: (T, T),
    q: (T, T),
    slices: usize,
    margin: T,
) -> Option<ChordWitness<T>> {
    let (p, q) = if p.0 <= q.0 { (p, q) } else { (q, p) };
    let width = q.0 - p.0;
    if slices == 0 || !(width > T::zero()) {
        return None;
    }
    let chord = |x: T| p.1 + (q.1 - p.1) * (x - p.0) / width;
    let step = width / lit::<T>(slices as f64);
    let mut best: Option<ChordWitness<T>> = None;
    // the end slices touch the chord endpoints themselves
    for k in 1..slices.saturating_sub(1) {
        let lo = p.0 + step * lit::<T>(k as f64);
        let hi = lo + step;
        let inside: Vec<&(T, T)> = points.iter().filter(|(x, _)| *x >= lo && *x < hi).collect();
        if inside.is_empty() {
            continue;
        }
        let min_gap = inside
            .iter()
            .map(|(x, y)| chord(*x) - *y)
            .reduce(|m, g| m.min(g))
            .expect("slice is non-empty");
        if min_gap > margin && best.is_none_or(|b| min_gap > b.min_gap) {
            best = Some(ChordWitness {
                slice_lo: lo,
                slice_hi: hi,
                points_in_slice: inside.len(),
                min_gap,
            });
        }
    }
    best
}

/// `(s_map, s_min)` of the vertices `A, B, C, D` in the chosen plane.
pub fn vertex_points<T: Real>(kind: EntropyKind) -> [(T, T); 4] {
    let order = kind.order::<T>();
    [0, 1, 2, 3].map(|i| {
        let w = TetraWeights::<T>::vertex(i);
        let spec = spectrum_from_weights(&w);
        let r = lambda_from_spectrum(&spec)
            .iter()
            .fold(T::zero(), |m, l| m.max(l.abs()));
        let half = lit::<T>(0.5);
        let out = [(T::one() + r) * half, (T::one() - r) * half];
        (
            renyi_of_spectrum(&spec.v, order.q()),
            renyi_of_spectrum(&out, order.q()),
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraSample<T> {
    pub index: usize,
    pub b: [T; 4],
    pub s_map: T,
    pub s_min: T,
}

/// `count` Pauli channels with weights drawn from the flat Dirichlet
/// distribution; sample `i` uses stream `i` of `seed`.
pub fn sample_tetrahedron<T: Real>(
    count: usize,
    seed: u64,
    kind: EntropyKind,
) -> Result<Vec<TetraSample<T>>> {
    sample_tetrahedron_with(count, seed, kind, &MinOutOptions::default().with_seed(seed))
}

/// As [`sample_tetrahedron`], with explicit options for the numeric
/// minimizer used by the von Neumann flavour.
pub fn sample_tetrahedron_with<T: Real>(
    count: usize,
    seed: u64,
    kind: EntropyKind,
    options: &MinOutOptions,
) -> Result<Vec<TetraSample<T>>> {
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: "need at least one sample".into(),
        });
    }
    (0..count)
        .into_par_iter()
        .map(|index| {
            let mut rng = seeded_rng(seed, index as u64);
            let p = flat_dirichlet(4, &mut rng);
            let b = [lit(p[0]), lit(p[1]), lit(p[2]), lit(p[3])];
            let order = kind.order::<T>();
            let s_map = renyi_of_spectrum(&b, order.q());
            let s_min = match kind {
                EntropyKind::Renyi2 => qubit_pauli_min_output_q2(lambda_from_pauli(b))?,
                EntropyKind::VonNeumann => {
                    let channel = pauli_channel(b)?;
                    min_output_entropy(&channel, order, options)?.value
                }
            };
            Ok(TetraSample {
                index,
                b,
                s_map,
                s_min,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalBound<T> {
    pub s_sigma: T,
    pub s_diag: T,
    /// `S_q(diag sigma) - S_q(sigma)`
    pub slack: T,
    pub holds: bool,
}

/// Compares `S_q` of the Choi state with that of its diagonal part.
pub fn classical_bound_check<T: Real>(
    channel: &KrausChannel<T>,
    q: T,
) -> Result<ClassicalBound<T>> {
    if !(q >= T::one()) {
        return Err(Error::OutOfRange {
            name: "q",
            value: to_f64(q),
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let order = EntropyOrder::renyi(q);
    let sigma = choi(channel).sigma().clone();
    let diag: DensityMatrix<T> = sigma.diagonal_part();
    let s_sigma = renyi_entropy(&sigma, order);
    let s_diag = renyi_entropy(&diag, order);
    let slack = s_diag - s_sigma;
    let tol = lit::<T>(1e-12).max(T::default_epsilon() * lit(1e3));
    Ok(ClassicalBound {
        s_sigma,
        s_diag,
        slack,
        holds: slack >= -tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{coarse_graining, identity_channel};
    use approx::assert_abs_diff_eq;

    const THIRD: f64 = 1.0 / 3.0;

    fn close4(a: [f64; 4], b: [f64; 4], eps: f64) {
        for i in 0..4 {
            assert_abs_diff_eq!(a[i], b[i], epsilon = eps);
        }
    }

    #[test]
    fn choi_examples() {
        let id = choi_qubit(&BlochParams::unital([1.0, 1.0, 1.0]));
        assert!(id.completely_positive);
        let phi = choi(&identity_channel::<f64>(2));
        assert!(crate::linalg::max_abs_diff(&id.matrix, phi.sigma().matrix()) < 1e-15);

        let bad = choi_qubit(&BlochParams::unital([1.0, 1.0, -1.0]));
        assert!(!bad.completely_positive);
        assert_abs_diff_eq!(bad.min_eigenvalue, -0.5, epsilon = 1e-12);
        assert!(bad.into_state().is_err());

        let cg = choi_qubit(&BlochParams::unital([0.0, 0.0, 1.0]));
        assert!(cg.completely_positive);
        let expected = choi(&coarse_graining::<f64>(2).unwrap());
        assert!(crate::linalg::max_abs_diff(&cg.matrix, expected.sigma().matrix()) < 1e-15);
    }

    #[test]
    fn choi_with_translation_matches_a_channel() {
        // amplitude damping with gamma = 0.36: lambda = (0.8, 0.8, 0.64), t = (0, 0, 0.36)
        let g: f64 = 0.36;
        let k0 = CMatrix::from_row_slice(
            2,
            2,
            &[creal(1.0), creal(0.0), creal(0.0), creal((1.0 - g).sqrt())],
        );
        let k1 =
            CMatrix::from_row_slice(2, 2, &[creal(0.0), creal(g.sqrt()), creal(0.0), creal(0.0)]);
        let ch = KrausChannel::new(vec![k0, k1]).unwrap();
        let s = (1.0 - g).sqrt();
        let q = choi_qubit(&BlochParams {
            lambda: [s, s, 1.0 - g],
            t: [0.0, 0.0, g],
        });
        assert!(crate::linalg::max_abs_diff(&q.matrix, choi(&ch).sigma().matrix()) < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        close4(
            spectrum_from_lambda([1.0, 1.0, 1.0]).v,
            [1.0, 0.0, 0.0, 0.0],
            1e-15,
        );
        close4(
            spectrum_from_lambda([0.0, 0.0, 1.0]).v,
            [0.5, 0.5, 0.0, 0.0],
            1e-15,
        );
        close4(
            spectrum_from_lambda([-THIRD, THIRD, THIRD]).v,
            [THIRD, THIRD, THIRD, 0.0],
            1e-15,
        );
        close4(
            spectrum_from_lambda([1.0, 1.0, -1.0]).v,
            [0.5, -0.5, 0.5, 0.5],
            1e-15,
        );
    }

    #[test]
    fn weights_examples() {
        close4(
            weights_from_lambda([1.0, 1.0, 1.0]).unwrap().a,
            [1.0, 0.0, 0.0, 0.0],
            1e-15,
        );
        close4(
            weights_from_lambda([0.0, 0.0, 1.0]).unwrap().a,
            [0.0, 1.0, 0.0, 0.0],
            1e-15,
        );
        close4(
            weights_from_lambda([-THIRD, THIRD, THIRD]).unwrap().a,
            [0.0, 0.0, 1.0, 0.0],
            1e-15,
        );
        assert!(matches!(
            weights_from_lambda([1.0, 1.0, -1.0]),
            Err(Error::OutsideTetrahedron { .. })
        ));
    }

    #[test]
    fn lambda_from_weights_examples() {
        let l = lambda_from_weights(&TetraWeights::<f64>::vertex(3));
        for x in l {
            assert_abs_diff_eq!(x, 0.0, epsilon = 1e-15);
        }
        let l = lambda_from_weights(&TetraWeights::<f64>::vertex(0));
        for x in l {
            assert_abs_diff_eq!(x, 1.0, epsilon = 1e-15);
        }
        // V = (3/4, 1/4, 0, 0)
        let w = TetraWeights::new([0.5, 0.5, 0.0, 0.0]).unwrap();
        let l = lambda_from_weights(&w);
        assert_abs_diff_eq!(l[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(l[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(l[2], 1.0, epsilon = 1e-15);
        close4(weights_from_lambda(l).unwrap().a, w.a, 1e-12);
    }

    #[test]
    fn min_output_from_weights_examples() {
        assert_abs_diff_eq!(
            min_output_from_weights(&TetraWeights::<f64>::vertex(0)),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            min_output_from_weights(&TetraWeights::<f64>::vertex(3)),
            2f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            min_output_from_weights(&TetraWeights::<f64>::vertex(1)),
            0.0,
            epsilon = 1e-15
        );
        let w = TetraWeights::new([0.1, 0.2, 0.3, 0.4]).unwrap();
        let direct = qubit_pauli_min_output_q2(lambda_from_weights(&w)).unwrap();
        assert_abs_diff_eq!(min_output_from_weights(&w), direct, epsilon = 1e-12);
    }

    #[test]
    fn pauli_lambda_conversions() {
        let b = [0.4, 0.3, 0.2, 0.1];
        let l = lambda_from_pauli(b);
        close4(pauli_from_lambda(l), b, 1e-15);
        // spectrum of the Choi state equals the weights
        let ch = pauli_channel(b).unwrap();
        let mut spec = choi(&ch).spectrum();
        spec.sort_by(|x, y| y.partial_cmp(x).unwrap());
        close4([spec[0], spec[1], spec[2], spec[3]], b, 1e-12);
        let mut v = spectrum_from_lambda(l).v;
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        close4(v, b, 1e-15);
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize([1.0, -0.5, 0.25]), [-0.25, 0.5, 1.0]);
        assert_eq!(canonicalize([-1.0, -0.5, 0.25]), [0.25, 0.5, 1.0]);
        assert_eq!(canonicalize([0.0, -0.5, -1.0]), [0.0, 0.5, 1.0]);
    }

    #[test]
    fn boundary_corners() {
        let pts = boundary_curves::<f64>(11).unwrap();
        let ln2 = 2f64.ln();
        let has = |e: Edge, x: f64, y: f64| {
            pts.iter()
                .any(|p| p.edge == e && (p.s_map - x).abs() < 1e-12 && (p.s_min - y).abs() < 1e-12)
        };
        assert!(has(Edge::AB, 0.0, 0.0));
        assert!(has(Edge::AB, ln2, 0.0));
        assert!(has(Edge::AD, 0.0, 0.0));
        assert!(has(Edge::AD, 2.0 * ln2, ln2));
        assert!(has(Edge::BD, ln2, 0.0));
        assert!(has(Edge::BD, 2.0 * ln2, ln2));
        assert!(boundary_curves::<f64>(1).is_err());
        // AD via the weights formula agrees with the depolarizing curve
        for p in pts.iter().filter(|p| p.edge == Edge::AD) {
            let w = weights_from_lambda(lambda_from_pauli(p.b)).unwrap();
            assert_abs_diff_eq!(min_output_from_weights(&w), p.s_min, epsilon = 1e-12);
        }
    }

    #[test]
    fn renyi2_samples_lie_below_depolarizing_curve() {
        let s = sample_tetrahedron::<f64>(500, 3, EntropyKind::Renyi2).unwrap();
        assert_eq!(s.len(), 500);
        for p in &s {
            assert!(p.s_min <= depolarizing_curve(2, p.s_map).unwrap() + 1e-12);
            assert_eq!(p.index, s.iter().position(|x| x.index == p.index).unwrap());
        }
        let again = sample_tetrahedron::<f64>(500, 3, EntropyKind::Renyi2).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn von_neumann_samples_match_binary_entropy() {
        let s = sample_tetrahedron::<f64>(12, 9, EntropyKind::VonNeumann).unwrap();
        for p in &s {
            let r = lambda_from_pauli(p.b)
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()));
            let (u, d) = ((1.0 + r) / 2.0, (1.0 - r) / 2.0);
            let h = -u * u.ln() - if d > 0.0 { d * d.ln() } else { 0.0 };
            assert_abs_diff_eq!(p.s_min, h, epsilon = 1e-8);
        }
    }

    #[test]
    fn classical_bound_examples() {
        let cg = classical_bound_check(&coarse_graining::<f64>(2).unwrap(), 2.0).unwrap();
        assert_abs_diff_eq!(cg.slack, 0.0, epsilon = 1e-15);
        let id = classical_bound_check(&identity_channel::<f64>(2), 2.0).unwrap();
        assert_abs_diff_eq!(id.s_sigma, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(id.slack, 2f64.ln(), epsilon = 1e-12);
        assert!(classical_bound_check(&identity_channel::<f64>(2), 0.5).is_err());
    }

    #[test]
    fn six_edges_contain_the_vertices() {
        let opts = MinOutOptions::default().with_starts(4);
        for kind in [EntropyKind::Renyi2, EntropyKind::VonNeumann] {
            let pts = tetrahedron_edges::<f64>(5, kind, &opts).unwrap();
            assert_eq!(pts.len(), 30);
            for (i, v) in vertex_points::<f64>(kind).iter().enumerate() {
                for e in Edge::ALL
                    .iter()
                    .filter(|e| e.vertices().0 == i || e.vertices().1 == i)
                {
                    assert!(pts.iter().any(|p| p.edge == *e
                        && (p.s_map - v.0).abs() < 1e-9
                        && (p.s_min - v.1).abs() < 1e-8));
                }
            }
        }
        let [_, _, c, _] = vertex_points::<f64>(EntropyKind::Renyi2);
        assert_abs_diff_eq!(c.0, 3f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.1, (9.0f64 / 5.0).ln(), epsilon = 1e-15);
    }

    #[test]
    fn chord_witness_detects_a_dent() {
        // a V-shaped upper boundary
        let pts: Vec<(f64, f64)> = (0..=100)
            .map(|i| {
                let x = i as f64 / 100.0;
                (x, (x - 0.5).abs())
            })
            .collect();
        let w = chord_witness(&pts, (0.0, 0.5), (1.0, 0.5), 10, 1e-9).unwrap();
        assert!(w.slice_lo <= 0.5 && 0.5 < w.slice_hi);
        // a concave cap admits no witness
        let cap: Vec<(f64, f64)> = pts.iter().map(|&(x, _)| (x, x * (1.0 - x))).collect();
        assert!(chord_witness(&cap, (0.0, 0.0), (1.0, 0.0), 10, 1e-9).is_none());
    }

    #[test]
    fn von_neumann_scatter_is_not_convex() {
        let [_, _, c, d] = vertex_points::<f64>(EntropyKind::VonNeumann);
        let mut pts: Vec<(f64, f64)> = sample_tetrahedron::<f64>(400, 1, EntropyKind::Renyi2)
            .unwrap()
            .iter()
            .map(|s| {
                let r = lambda_from_pauli(s.b)
                    .iter()
                    .fold(0.0f64, |m, x| m.max(x.abs()));
                let out = [(1.0 + r) / 2.0, (1.0 - r) / 2.0];
                (renyi_of_spectrum(&s.b, 1.0), renyi_of_spectrum(&out, 1.0))
            })
            .collect();
        pts.push(c);
        pts.push(d);
        assert!(chord_witness(&pts, c, d, 8, 1e-6).is_some());
        // the Rényi-2 plane shows no such dent along CD
        let [_, _, c2, d2] = vertex_points::<f64>(EntropyKind::Renyi2);
        let pts2: Vec<(f64, f64)> =
            tetrahedron_edges::<f64>(50, EntropyKind::Renyi2, &MinOutOptions::default())
                .unwrap()
                .iter()
                .map(|p| (p.s_map, p.s_min))
                .collect();
        assert!(chord_witness(&pts2, c2, d2, 8, 1e-6).is_none());
    }
}
