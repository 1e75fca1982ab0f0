//! Additivity of the map entropy, entropy bounds for product channels on
//! maximally entangled inputs, and the region `R` in the plane of Rényi-2 map
//! entropies.

use rayon::prelude::*;

use crate::channels::{apply, choi, map_entropy, sorted_spectrum, tensor_channels, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{kron, max_abs_diff, middle_swap};
use crate::min_output::depolarizing_curve;
use crate::scalar::{lit, to_f64, Real};
use crate::states::{maximal_entanglement_residual, renyi_entropy, EntropyOrder, PureState};

/// `|S^map_q(Phi1 (x) Phi2) - S^map_q(Phi1) - S^map_q(Phi2)|`, in nats.
pub fn verify_map_additivity<T: Real>(
    first: &KrausChannel<T>,
    second: &KrausChannel<T>,
    q: T,
) -> T {
    let order = EntropyOrder::renyi(q);
    let joint = map_entropy(&tensor_channels(first, second), order);
    (joint - map_entropy(first, order) - map_entropy(second, order)).abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationReport<T> {
    /// Largest gap between the sorted spectra of the two Choi matrices.
    pub spectral_distance: T,
    /// `max|U (D1 (x) D2) U^dagger - D12|`, when `U` was built.
    pub entrywise_distance: Option<T>,
}

/// Largest `n * m` for which the index swap is materialized.
pub const MAX_SWAP_PRODUCT: usize = 16;

/// Compares the Choi matrix of `Phi1 (x) Phi2` with the product of the Choi
/// matrices, which differ by swapping the two middle tensor factors.
pub fn permutation_equivalence<T: Real>(
    first: &KrausChannel<T>,
    second: &KrausChannel<T>,
) -> PermutationReport<T> {
    let (n, m) = (first.dim(), second.dim());
    let joint = choi(&tensor_channels(first, second)).choi_matrix();
    let product = kron(&choi(first).choi_matrix(), &choi(second).choi_matrix());
    let spectral_distance = sorted_spectrum(&joint)
        .iter()
        .zip(sorted_spectrum(&product))
        .fold(T::zero(), |acc, (a, b)| acc.max((*a - b).abs()));
    let entrywise_distance = (n * m <= MAX_SWAP_PRODUCT).then(|| {
        let u = middle_swap::<T>(n, m);
        max_abs_diff(&(&u * product * u.adjoint()), &joint)
    });
    PermutationReport {
        spectral_distance,
        entrywise_distance,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport<T> {
    pub lower: T,
    pub value: T,
    /// `None` for one-sided bounds.
    pub upper: Option<T>,
    /// `value - lower`
    pub slack_low: T,
    /// `upper - value`
    pub slack_high: Option<T>,
}

impl<T: Real> BoundReport<T> {
    fn new(lower: T, value: T, upper: Option<T>) -> Self {
        BoundReport {
            lower,
            value,
            upper,
            slack_low: value - lower,
            slack_high: upper.map(|u| u - value),
        }
    }

    pub fn holds(&self, tol: T) -> bool {
        self.slack_low >= -tol && self.slack_high.is_none_or(|s| s >= -tol)
    }
}

/// Residual accepted for maximal entanglement of a test input.
const ENTANGLEMENT_TOL: f64 = 1e-9;

fn product_output<T: Real>(
    first: &KrausChannel<T>,
    second: &KrausChannel<T>,
    psi: &PureState<T>,
) -> Result<crate::states::DensityMatrix<T>> {
    let n = first.dim();
    if second.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: second.dim(),
        });
    }
    let residual = to_f64(maximal_entanglement_residual(psi, n)?);
    let tol = ENTANGLEMENT_TOL.max(1e3 * crate::scalar::epsilon_of::<T>());
    if !(residual <= tol) {
        return Err(Error::NotMaximallyEntangled { residual });
    }
    apply(&tensor_channels(first, second), &psi.projector())
}

/// `|S^map(Phi1) - S^map(Phi2)| <= S((Phi1 (x) Phi2)(psi)) <= S^map(Phi1) + S^map(Phi2)`
/// for maximally entangled `psi` (von Neumann entropies, nats).
pub fn lindblad_bounds<T: Real>(
    first: &KrausChannel<T>,
    second: &KrausChannel<T>,
    psi: &PureState<T>,
) -> Result<BoundReport<T>> {
    let out = product_output(first, second, psi)?;
    let order = EntropyOrder::von_neumann();
    let s1 = map_entropy(first, order);
    let s2 = map_entropy(second, order);
    let value = renyi_entropy(&out, order);
    Ok(BoundReport::new((s1 - s2).abs(), value, Some(s1 + s2)))
}

/// `-log(1 - |e^{-s1} - e^{-s2}|)` with Rényi-2 map entropies `s1, s2`.
pub fn tsallis_bound_value<T: Real>(s1: T, s2: T) -> T {
    -(T::one() - ((-s1).exp() - (-s2).exp()).abs()).ln()
}

/// Rényi-2 output entropy of a maximally entangled input against the lower
/// bound [`tsallis_bound_value`] of the two map entropies.
pub fn tsallis_lower_bound<T: Real>(
    first: &KrausChannel<T>,
    second: &KrausChannel<T>,
    psi: &PureState<T>,
) -> Result<BoundReport<T>> {
    let out = product_output(first, second, psi)?;
    let order = EntropyOrder::renyi(lit(2.0));
    let lower = tsallis_bound_value(map_entropy(first, order), map_entropy(second, order));
    Ok(BoundReport::new(lower, renyi_entropy(&out, order), None))
}

fn check_map_entropy<T: Real>(name: &'static str, s: T, dim: usize) -> Result<()> {
    let hi = 2.0 * (dim as f64).ln();
    let x = to_f64(s);
    if dim < 1 || !(x >= -1e-12 && x <= hi + 1e-12) {
        return Err(Error::OutOfRange {
            name,
            value: x,
            lo: 0.0,
            hi,
        });
    }
    Ok(())
}

/// `1 - ((nm+1)/(nm)) |e^{-s1} - e^{-s2}| <= e^{-(s1+s2)}`; equality counts as inside.
pub fn region_condition<T: Real>(s1: T, s2: T, n: usize, m: usize) -> Result<bool> {
    check_map_entropy("s1", s1, n)?;
    check_map_entropy("s2", s2, m)?;
    let nm = lit::<T>((n * m) as f64);
    let lhs = T::one() - (nm + T::one()) / nm * ((-s1).exp() - (-s2).exp()).abs();
    Ok(lhs <= (-(s1 + s2)).exp())
}

/// Both sides of the comparison behind `R`: the Rényi-2 Tsallis lower bound on
/// maximally entangled inputs, and `S_2^min` of the `nm`-dimensional
/// depolarizing channel whose map entropy is `s1 + s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionWitness<T> {
    pub tsallis_lower: T,
    pub depolarizing_min: T,
}

pub fn region_witness<T: Real>(s1: T, s2: T, n: usize, m: usize) -> Result<RegionWitness<T>> {
    check_map_entropy("s1", s1, n)?;
    check_map_entropy("s2", s2, m)?;
    Ok(RegionWitness {
        tsallis_lower: tsallis_bound_value(s1, s2),
        depolarizing_min: depolarizing_curve(n * m, s1 + s2)?,
    })
}

/// `log(n^2 (n^2 + 2) / (n^2 (n^2 + 1) + 1)) / (2 log n)`
pub fn alpha<T: Real>(n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "slope defined for n >= 2".into(),
        });
    }
    let n2 = lit::<T>((n * n) as f64);
    let num = n2 * (n2 + lit(2.0));
    let den = n2 * (n2 + T::one()) + T::one();
    Ok((num / den).ln() / (lit::<T>(2.0) * lit::<T>(n as f64).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint<T> {
    pub s1: T,
    pub s2: T,
    pub n: usize,
    pub m: usize,
    pub in_region: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceLine {
    Diagonal,
    Alpha,
}

impl ReferenceLine {
    pub fn label(self) -> &'static str {
        match self {
            ReferenceLine::Diagonal => "diagonal",
            ReferenceLine::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePoint<T> {
    pub line: ReferenceLine,
    pub n: usize,
    pub s1: T,
    pub s2: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionScan<T> {
    /// Row-major over `s1`, then `s2`.
    pub points: Vec<RegionPoint<T>>,
    pub lines: Vec<LinePoint<T>>,
}

/// Evaluates [`region_condition`] on a `grid x grid` lattice over
/// `[0, 2 log n] x [0, 2 log m]`, endpoints included, together with the
/// diagonal and the line of slope `alpha(n)` through the origin.
pub fn region_scan<T: Real>(n: usize, m: usize, grid: usize) -> Result<RegionScan<T>> {
    if grid < 2 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "need at least two grid points per axis".into(),
        });
    }
    if n < 2 || m < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "dimensions must be at least 2".into(),
        });
    }
    let axis = |d: usize| -> Vec<T> {
        let top = lit::<T>(2.0) * lit::<T>(d as f64).ln();
        (0..grid)
            .map(|i| {
                if i == grid - 1 {
                    top
                } else {
                    top * lit::<T>(i as f64) / lit::<T>((grid - 1) as f64)
                }
            })
            .collect()
    };
    let xs = axis(n);
    let ys = axis(m);
    let points = (0..grid * grid)
        .into_par_iter()
        .map(|k| {
            let (s1, s2) = (xs[k / grid], ys[k % grid]);
            region_condition(s1, s2, n, m).map(|in_region| RegionPoint {
                s1,
                s2,
                n,
                m,
                in_region,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let slope = alpha::<T>(n)?;
    let diag_end = if n <= m { &xs } else { &ys };
    let mut lines: Vec<LinePoint<T>> = diag_end
        .iter()
        .map(|&s| LinePoint {
            line: ReferenceLine::Diagonal,
            n,
            s1: s,
            s2: s,
        })
        .collect();
    lines.extend(xs.iter().map(|&s| LinePoint {
        line: ReferenceLine::Alpha,
        n,
        s1: s,
        s2: slope * s,
    }));
    Ok(RegionScan { points, lines })
}
