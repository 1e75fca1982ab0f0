//! Minimal output entropy.
//!
//! Closed forms for depolarizing and Pauli qubit channels, and a multi-start
//! local search over pure inputs for arbitrary channels. The numeric value is
//! the best local minimum found, hence an upper bound on the true minimum.
//!
//! The search works on the real embedding of the unit sphere in `C^n`:
//! projected gradient descent of `S_q(Phi(|x><x|))` with a Barzilai–Borwein
//! trial step, Armijo backtracking and renormalization after every step.
//! The gradient is exact for `q = 2` and a central difference otherwise.

use rayon::prelude::*;

use crate::channels::{check_depolarizing_args, choi, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::qubit::spectrum_from_lambda;
use crate::random::{random_pure_state, seeded_rng};
use crate::scalar::{creal, lit, to_f64, CMatrix, CVector, Real};
use crate::states::{
    clamp_spectrum, renyi_entropy, renyi_of_spectrum, EntropyOrder, PureState, Tolerances,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinOutOptions {
    pub starts: usize,
    pub seed: u64,
    /// Stop a start once the accepted step is shorter than this.
    pub tol_opt: f64,
    pub max_iter: usize,
}

impl Default for MinOutOptions {
    fn default() -> Self {
        MinOutOptions {
            starts: 32,
            seed: 0,
            tol_opt: 1e-12,
            max_iter: 10_000,
        }
    }
}

impl MinOutOptions {
    pub fn with_seed(self, seed: u64) -> Self {
        MinOutOptions { seed, ..self }
    }

    pub fn with_starts(self, starts: usize) -> Self {
        MinOutOptions { starts, ..self }
    }
}

/// Best local minimum of the output entropy over pure inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MinOutResult<T: Real> {
    /// Output entropy at `argmin`, in the requested base.
    pub value: T,
    pub argmin: PureState<T>,
    pub starts_used: usize,
    /// Whether the winning start met the step-size criterion.
    pub converged: bool,
    /// `tr Phi(|argmin><argmin|)^2`
    pub best_purity: T,
    /// Index of the winning start.
    pub best_start: usize,
}

struct StartOutcome<T: Real> {
    nats: T,
    x: CVector<T>,
    converged: bool,
}

/// Entropy (nats) of the normalized output for input `x`.
fn output_entropy<T: Real>(channel: &KrausChannel<T>, x: &CVector<T>, q: T) -> T {
    let rho = channel.apply_pure(x);
    let norm2 = x.norm_squared();
    let rho = rho / creal(norm2);
    if q == lit(2.0) {
        let purity = rho.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        return -purity.ln();
    }
    let spectrum = clamp_spectrum(hermitian_eigenvalues(&rho), rho.nrows());
    renyi_of_spectrum(&spectrum, q)
}

/// Entropy and its gradient (complex form, tangent to the sphere) at unit `x`.
fn value_and_gradient<T: Real>(channel: &KrausChannel<T>, x: &CVector<T>, q: T) -> (T, CVector<T>) {
    let g = if q == lit(2.0) {
        // f = tr rho^2, df = 4 Re<G x, dx> with G = sum K^dagger rho K; S = -ln f.
        let rho = channel.apply_pure(x);
        let purity = rho.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        let n = channel.dim();
        let big_g = channel
            .operators()
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| acc + k.adjoint() * &rho * k);
        let grad = (&big_g * x) * creal(lit::<T>(-4.0) / purity);
        let v = -purity.ln();
        return (v, project(x, grad));
    } else {
        finite_difference_gradient(channel, x, q)
    };
    (output_entropy(channel, x, q), project(x, g))
}

fn finite_difference_gradient<T: Real>(
    channel: &KrausChannel<T>,
    x: &CVector<T>,
    q: T,
) -> CVector<T> {
    let h: T = T::default_epsilon().powf(lit(1.0 / 3.0));
    let two_h = h + h;
    let mut grad = CVector::zeros(x.len());
    for i in 0..x.len() {
        for imaginary in [false, true] {
            let delta = if imaginary {
                num_complex::Complex::new(T::zero(), h)
            } else {
                creal(h)
            };
            let mut plus = x.clone();
            plus[i] += delta;
            let mut minus = x.clone();
            minus[i] -= delta;
            let d =
                (output_entropy(channel, &plus, q) - output_entropy(channel, &minus, q)) / two_h;
            if imaginary {
                grad[i].im = d;
            } else {
                grad[i].re = d;
            }
        }
    }
    grad
}

/// Removes the radial component `Re<x, g> x`.
fn project<T: Real>(x: &CVector<T>, g: CVector<T>) -> CVector<T> {
    let radial = x.dotc(&g).re;
    g - x * creal(radial)
}

fn real_dot<T: Real>(a: &CVector<T>, b: &CVector<T>) -> T {
    a.dotc(b).re
}

fn normalize<T: Real>(v: CVector<T>) -> CVector<T> {
    let n = v.norm();
    v / creal(n)
}

fn run_start<T: Real>(
    channel: &KrausChannel<T>,
    q: T,
    options: &MinOutOptions,
    start: usize,
) -> StartOutcome<T> {
    let mut rng = seeded_rng(options.seed, start as u64);
    let mut x = random_pure_state::<T, _>(channel.dim(), &mut rng)
        .amplitudes()
        .clone();
    let tol: T = lit(options.tol_opt);
    let armijo: T = lit(1e-4);
    let (mut value, mut grad) = value_and_gradient(channel, &x, q);
    let mut step_len = T::one();
    let mut converged = false;

    for _ in 0..options.max_iter {
        let gnorm2 = grad.norm_squared();
        let gnorm = gnorm2.sqrt();
        if gnorm <= tol {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut t = step_len;
        while t * gnorm >= tol {
            let candidate = normalize(&x - &grad * creal(t));
            let v = output_entropy(channel, &candidate, q);
            if v <= value - armijo * t * gnorm2 {
                accepted = Some(candidate);
                break;
            }
            t *= lit(0.5);
        }
        let Some(next) = accepted else {
            converged = true;
            break;
        };
        let (next_value, next_grad) = value_and_gradient(channel, &next, q);
        let s = &next - &x;
        let y = &next_grad - &grad;
        let sy = real_dot(&s, &y);
        let moved = s.norm();
        step_len = if sy > T::zero() {
            (s.norm_squared() / sy).min(lit(1e6)).max(lit(1e-10))
        } else {
            (t + t).min(lit(1e6))
        };
        x = next;
        value = next_value;
        grad = next_grad;
        if moved < tol {
            converged = true;
            break;
        }
    }
    StartOutcome {
        nats: value,
        x,
        converged,
    }
}

/// Multi-start search for `min_psi S_q(Phi(|psi><psi|))`.
///
/// Start `k` is drawn Haar-uniformly from stream `k` of `options.seed`, so a
/// run with more starts extends (never replaces) the starts of a shorter run.
/// The winner is the lowest value, ties going to the lowest start index.
pub fn min_output_entropy<T: Real>(
    channel: &KrausChannel<T>,
    order: EntropyOrder<T>,
    options: &MinOutOptions,
) -> Result<MinOutResult<T>> {
    if options.starts == 0 {
        return Err(Error::InvalidParameter {
            name: "starts",
            reason: "at least one start is required".into(),
        });
    }
    let q = order.q();
    let outcomes: Vec<StartOutcome<T>> = (0..options.starts)
        .into_par_iter()
        .map(|k| run_start(channel, q, options, k))
        .collect();
    let (best_start, best) = outcomes
        .iter()
        .enumerate()
        .fold(None::<(usize, &StartOutcome<T>)>, |acc, (k, o)| match acc {
            Some((_, b)) if b.nats <= o.nats => acc,
            _ => Some((k, o)),
        })
        .expect("at least one start");

    let argmin = PureState::normalized(best.x.clone())?;
    let output = crate::channels::apply(channel, &argmin.projector())?;
    Ok(MinOutResult {
        value: renyi_entropy(&output, order),
        best_purity: output.purity(),
        argmin,
        starts_used: options.starts,
        converged: best.converged,
        best_start,
    })
}

/// `S_2^min` of the depolarizing channel: `-log((1 + (n-1) lambda^2) / n)`.
pub fn depolarizing_min_output_q2<T: Real>(n: usize, lambda: T) -> Result<T> {
    check_depolarizing_args(n, lambda)?;
    let nf = lit::<T>(n as f64);
    Ok(-((T::one() + (nf - T::one()) * lambda * lambda) / nf).ln())
}

/// `S_2^map` of the depolarizing channel: `-log((1 + (n^2-1) lambda^2) / n^2)`.
pub fn depolarizing_map_q2<T: Real>(n: usize, lambda: T) -> Result<T> {
    check_depolarizing_args(n, lambda)?;
    let n2 = lit::<T>((n * n) as f64);
    Ok(-((T::one() + (n2 - T::one()) * lambda * lambda) / n2).ln())
}

/// `S_2^min` of the depolarizing channel as a function of its `S_2^map`:
/// `-log((1 + n e^{-s_map}) / (n + 1))`.
pub fn depolarizing_curve<T: Real>(n: usize, s_map: T) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "depolarizing channels need n >= 2".into(),
        });
    }
    let nf = lit::<T>(n as f64);
    let hi = to_f64(lit::<T>(2.0) * nf.ln());
    let x = to_f64(s_map);
    if !(x >= -1e-12 && x <= hi + 1e-12) {
        return Err(Error::OutOfRange {
            name: "s_map",
            value: x,
            lo: 0.0,
            hi,
        });
    }
    Ok(-((T::one() + nf * (-s_map).exp()) / (nf + T::one())).ln())
}

/// `S_2^min` of a Pauli (unital) qubit channel with Bloch axes `lambda`:
/// `-log((1 + max|lambda_i|^2) / 2)`.
pub fn qubit_pauli_min_output_q2<T: Real>(lambda: [T; 3]) -> Result<T> {
    let v = spectrum_from_lambda(lambda);
    let tol = Tolerances::for_scalar::<T>().psd;
    if let Some(&min) =
        v.v.iter()
            .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
    {
        if !(to_f64(min) >= -tol) {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: to_f64(min),
            });
        }
    }
    let longest = lambda.iter().fold(T::zero(), |acc, l| acc.max(l.abs()));
    Ok(-((T::one() + longest * longest) / lit(2.0)).ln())
}

/// Outcome of testing `tr Phi(psi)^2 <= 1 - eps  =>  tr sigma^2 <= 1 - eps (n+1)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop1Report<T> {
    pub epsilon: T,
    pub sigma_purity: T,
    /// `1 - eps (n + 1) / n`
    pub bound: T,
    /// `bound - tr sigma^2`
    pub slack: T,
    pub pass: bool,
}

/// Checks the purity implication using `eps = 1 - best_purity` from a
/// `q = 2` search result.
pub fn check_prop1<T: Real>(
    channel: &KrausChannel<T>,
    result: &MinOutResult<T>,
    tol_ineq: T,
) -> Prop1Report<T> {
    let n = lit::<T>(channel.dim() as f64);
    let epsilon = T::one() - result.best_purity;
    let sigma_purity = choi(channel).sigma().purity();
    let bound = T::one() - epsilon * (n + T::one()) / n;
    let slack = bound - sigma_purity;
    Prop1Report {
        epsilon,
        sigma_purity,
        bound,
        slack,
        pass: slack >= -tol_ineq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, identity_channel, pauli_channel, random_channel};
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_has_zero_min_output() {
        let r = min_output_entropy(
            &identity_channel::<f64>(3),
            EntropyOrder::renyi(2.0),
            &MinOutOptions::default().with_starts(4),
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.best_purity, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn depolarizing_qutrit_matches_closed_form() {
        let ch = depolarizing::<f64>(3, 0.5).unwrap();
        let r = min_output_entropy(
            &ch,
            EntropyOrder::renyi(2.0),
            &MinOutOptions::default().with_starts(4),
        )
        .unwrap();
        // -ln((1 + 2/4) / 3) = ln 2
        assert_abs_diff_eq!(r.value, 2f64.ln(), epsilon = 1e-10);
        assert_abs_diff_eq!(
            depolarizing_min_output_q2(3, 0.5).unwrap(),
            2f64.ln(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn dephasing_pauli_has_pure_fixed_point() {
        let ch = pauli_channel::<f64>([0.5, 0.5, 0.0, 0.0]).unwrap();
        let r =
            min_output_entropy(&ch, EntropyOrder::renyi(2.0), &MinOutOptions::default()).unwrap();
        assert!(r.value >= 0.0 && r.value < 1e-10, "{}", r.value);
    }

    #[test]
    fn result_value_is_reproducible_from_argmin() {
        let ch = random_channel::<f64>(3, 2, 5).unwrap();
        for q in [0.5, 1.0, 2.0, 3.0] {
            let order = EntropyOrder::renyi(q);
            let r =
                min_output_entropy(&ch, order, &MinOutOptions::default().with_starts(6)).unwrap();
            let out = crate::channels::apply(&ch, &r.argmin.projector()).unwrap();
            assert_abs_diff_eq!(r.value, renyi_entropy(&out, order), epsilon = 1e-10);
            assert!(r.value >= 0.0, "q={q} value={}", r.value);
        }
    }

    #[test]
    fn closed_forms_reference_values() {
        assert_abs_diff_eq!(
            depolarizing_min_output_q2(4, 1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            depolarizing_min_output_q2(4, 0.0).unwrap(),
            4f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            depolarizing_min_output_q2(2, 1.0 / 3.0).unwrap(),
            (9.0f64 / 5.0).ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            depolarizing_min_output_q2(2, 1.0 / 3.0).unwrap(),
            0.5877866649021191,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(depolarizing_map_q2(3, 1.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            depolarizing_map_q2(3, 0.0).unwrap(),
            2.0 * 3f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            depolarizing_map_q2(2, 1.0 / 3.0).unwrap(),
            3f64.ln(),
            epsilon = 1e-15
        );
        assert!(depolarizing_map_q2(2, -0.5).is_err());
        assert!(depolarizing_min_output_q2(3, 1.5).is_err());
    }

    #[test]
    fn depolarizing_curve_endpoints_and_shape() {
        for n in [2usize, 3, 4] {
            let top = 2.0 * (n as f64).ln();
            assert_abs_diff_eq!(depolarizing_curve(n, 0.0).unwrap(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(
                depolarizing_curve(n, top).unwrap(),
                (n as f64).ln(),
                epsilon = 1e-14
            );
            // monotone and concave by second differences
            let h = top / 200.0;
            let f = |s: f64| depolarizing_curve(n, s).unwrap();
            for k in 1..200 {
                let s = k as f64 * h;
                assert!(f(s + h) > f(s));
                assert!(f(s + h) - 2.0 * f(s) + f(s - h) < 0.0);
            }
            assert!(depolarizing_curve(n, top + 0.1).is_err());
            assert!(depolarizing_curve(n, -0.1).is_err());
        }
    }

    #[test]
    fn pauli_closed_form_examples() {
        assert_abs_diff_eq!(
            qubit_pauli_min_output_q2([1.0, 1.0, 1.0]).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            qubit_pauli_min_output_q2([0.0, 0.0, 0.0]).unwrap(),
            2f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            qubit_pauli_min_output_q2([0.0, 0.0, 1.0]).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            qubit_pauli_min_output_q2([1.0, 1.0, -1.0]),
            Err(Error::NotCompletelyPositive { .. })
        ));
    }

    #[test]
    fn prop1_equality_on_depolarizing_and_slack_on_coarse_graining() {
        for n in [2usize, 3] {
            for lambda in [-0.1, 0.2, 0.7] {
                let ch = depolarizing::<f64>(n, lambda).unwrap();
                let r = min_output_entropy(
                    &ch,
                    EntropyOrder::renyi(2.0),
                    &MinOutOptions::default().with_starts(2),
                )
                .unwrap();
                let rep = check_prop1(&ch, &r, 1e-7);
                assert!(
                    rep.slack.abs() < 1e-10,
                    "n={n} lambda={lambda} slack={}",
                    rep.slack
                );
            }
        }
        let cg = crate::channels::coarse_graining::<f64>(2).unwrap();
        let r = min_output_entropy(
            &cg,
            EntropyOrder::renyi(2.0),
            &MinOutOptions::default().with_starts(8),
        )
        .unwrap();
        let rep = check_prop1(&cg, &r, 1e-7);
        assert_abs_diff_eq!(rep.epsilon, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.sigma_purity, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.slack, 0.5, epsilon = 1e-10);

        let id = identity_channel::<f64>(2);
        let r = min_output_entropy(
            &id,
            EntropyOrder::renyi(2.0),
            &MinOutOptions::default().with_starts(1),
        )
        .unwrap();
        let rep = check_prop1(&id, &r, 1e-7);
        assert!(rep.pass);
        assert_abs_diff_eq!(rep.bound, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn more_starts_never_increase_the_value() {
        let ch = random_channel::<f64>(3, 3, 21).unwrap();
        let mut last = f64::INFINITY;
        for starts in [1usize, 2, 4, 8, 16] {
            let r = min_output_entropy(
                &ch,
                EntropyOrder::renyi(2.0),
                &MinOutOptions::default().with_starts(starts).with_seed(4),
            )
            .unwrap();
            assert!(r.value <= last + 1e-15);
            last = r.value;
        }
    }

    #[test]
    fn rejects_zero_starts() {
        assert!(min_output_entropy(
            &identity_channel::<f64>(2),
            EntropyOrder::renyi(2.0),
            &MinOutOptions::default().with_starts(0)
        )
        .is_err());
    }
}
