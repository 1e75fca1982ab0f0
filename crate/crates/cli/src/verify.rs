//! Randomized verification suites. Trial `i` draws everything from
//! `seed ^ i`, so trials are independent of each other and of scheduling.

use chanent::additivity::{
    lindblad_bounds, permutation_equivalence, tsallis_lower_bound, verify_map_additivity,
};
use chanent::channels::{compose, map_entropy, pauli_channel, random_channel, KrausChannel};
use chanent::min_output::{check_prop1, min_output_entropy};
use chanent::qubit::classical_bound_check;
use chanent::random::{flat_dirichlet, haar_unitary, seeded_rng};
use chanent::states::{maximally_entangled, EntropyOrder};
use clap::ValueEnum;
use rand::Rng;
use rayon::prelude::*;

use crate::config::{CliError, RunConfig};
use crate::output::{fmt_f, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Suite {
    Prop1,
    Prop2,
    Prop3,
    Tsallis,
    Concat,
    #[value(name = "classical_bound")]
    ClassicalBound,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3 => "prop3",
            Suite::Tsallis => "tsallis",
            Suite::Concat => "concat",
            Suite::ClassicalBound => "classical_bound",
        }
    }
}

pub const DEFAULT_TRIALS: usize = 100;
/// Maximally entangled inputs tried per channel pair.
pub const INPUTS_PER_PAIR: usize = 8;
const PROP2_ORDERS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

const PAIR_HEADER: [&str; 7] = [
    "pair_id",
    "q",
    "residual",
    "spec_distance",
    "lind_low_slack",
    "lind_high_slack",
    "tsallis_slack",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub table: Table,
    pub trials: usize,
    pub failures: usize,
    /// Largest residual, or largest negative slack, over all trials.
    pub max_violation: f64,
}

impl SuiteReport {
    pub fn summary_header() -> &'static str {
        "suite,trials,failures,max_violation"
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{},{},{},{}",
            self.suite.name(),
            self.trials,
            self.failures,
            fmt_f(self.max_violation)
        )
    }
}

struct Trial {
    rows: Vec<Vec<String>>,
    failed: bool,
    violation: f64,
}

fn trial_seed(cfg: &RunConfig, i: usize) -> u64 {
    cfg.seed ^ i as u64
}

fn run_trials<F>(
    cfg: &RunConfig,
    suite: Suite,
    header: &[&'static str],
    f: F,
) -> Result<SuiteReport, CliError>
where
    F: Fn(usize, u64) -> Result<Trial, CliError> + Sync,
{
    let trials = cfg.trials_or(DEFAULT_TRIALS);
    let results = (0..trials)
        .into_par_iter()
        .map(|i| f(i, trial_seed(cfg, i)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(header);
    let mut failures = 0;
    let mut max_violation = 0.0f64;
    for t in results {
        failures += t.failed as usize;
        max_violation = max_violation.max(t.violation);
        for r in t.rows {
            table.push(r);
        }
    }
    Ok(SuiteReport {
        suite,
        table,
        trials,
        failures,
        max_violation,
    })
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    match suite {
        Suite::Prop1 => prop1(cfg),
        Suite::Prop2 => prop2(cfg),
        Suite::Prop3 => bounds(cfg, Suite::Prop3),
        Suite::Tsallis => bounds(cfg, Suite::Tsallis),
        Suite::Concat => concat(cfg),
        Suite::ClassicalBound => classical(cfg),
    }
}

/// Negative part of a slack.
fn shortfall(slack: f64) -> f64 {
    (-slack).max(0.0)
}

fn prop1(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let tol = cfg.tol("ineq");
    let header = [
        "trial_id",
        "n",
        "rank",
        "s2_map",
        "s2_min",
        "epsilon",
        "purity_sigma",
        "bound",
        "slack",
    ];
    run_trials(cfg, Suite::Prop1, &header, |i, seed| {
        let mut rng = seeded_rng(seed, 1);
        let n = [2usize, 3, 4][rng.gen_range(0..3)];
        let rank = rng.gen_range(1..=n * n);
        let channel = random_channel::<f64>(n, rank, seed)?;
        let order = EntropyOrder::renyi(2.0).with_base(cfg.base);
        let result = min_output_entropy(&channel, order, &cfg.min_out_options(seed))?;
        let report = check_prop1(&channel, &result, tol);
        Ok(Trial {
            rows: vec![vec![
                i.to_string(),
                n.to_string(),
                rank.to_string(),
                fmt_f(map_entropy(&channel, order)),
                fmt_f(result.value),
                fmt_f(report.epsilon),
                fmt_f(report.sigma_purity),
                fmt_f(report.bound),
                fmt_f(report.slack),
            ]],
            failed: !report.pass,
            violation: shortfall(report.slack),
        })
    })
}

fn draw_channel(rng: &mut impl Rng, qubits: bool) -> Result<KrausChannel<f64>, CliError> {
    let n = if qubits { 2 } else { rng.gen_range(2..=3) };
    let rank = rng.gen_range(1..=4.min(n * n));
    let seed: u64 = rng.gen();
    Ok(random_channel(n, rank, seed)?)
}

/// Two random channels with dimensions in `{2, 3}` (or exactly 2 when
/// `qubits`) and Kraus ranks at most 4.
fn random_pair(
    seed: u64,
    qubits: bool,
) -> Result<(KrausChannel<f64>, KrausChannel<f64>), CliError> {
    let mut rng = seeded_rng(seed, 1);
    let a = draw_channel(&mut rng, qubits)?;
    let b = draw_channel(&mut rng, qubits)?;
    Ok((a, b))
}

fn prop2(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let tol_add = cfg.tol("additivity");
    let tol_spec = cfg.tol("spectrum");
    let tol_entry = cfg.tol("entrywise");
    let orders: Vec<f64> = cfg.q.map_or(PROP2_ORDERS.to_vec(), |q| vec![q]);
    run_trials(cfg, Suite::Prop2, &PAIR_HEADER, |i, seed| {
        let (a, b) = random_pair(seed, false)?;
        let perm = permutation_equivalence(&a, &b);
        let entry = perm.entrywise_distance.unwrap_or(0.0);
        let mut failed = perm.spectral_distance > tol_spec || entry > tol_entry;
        let mut violation = perm.spectral_distance.max(entry);
        let mut rows = Vec::with_capacity(orders.len());
        for &q in &orders {
            let residual = cfg.base.from_nats(verify_map_additivity(&a, &b, q));
            failed |= residual > tol_add;
            violation = violation.max(residual);
            rows.push(vec![
                i.to_string(),
                fmt_f(q),
                fmt_f(residual),
                fmt_f(perm.spectral_distance),
                String::new(),
                String::new(),
                String::new(),
            ]);
        }
        Ok(Trial {
            rows,
            failed,
            violation,
        })
    })
}

fn bounds(cfg: &RunConfig, suite: Suite) -> Result<SuiteReport, CliError> {
    let tol = cfg.tol("bound");
    run_trials(cfg, suite, &PAIR_HEADER, |i, seed| {
        let (a, b) = random_pair(seed, true)?;
        let mut rng = seeded_rng(seed, 2);
        let (mut low, mut high, mut tsallis) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        for _ in 0..INPUTS_PER_PAIR {
            let u = haar_unitary::<f64, _>(2, &mut rng);
            let psi = maximally_entangled(2, Some(&u))?;
            if suite == Suite::Prop3 {
                let r = lindblad_bounds(&a, &b, &psi)?;
                low = low.min(r.slack_low);
                high = high.min(r.slack_high.expect("two-sided bound"));
            } else {
                tsallis = tsallis.min(tsallis_lower_bound(&a, &b, &psi)?.slack_low);
            }
        }
        let b = |x: f64| fmt_f(cfg.base.from_nats(x));
        let (row, worst) = if suite == Suite::Prop3 {
            let row = vec![
                i.to_string(),
                fmt_f(1.0),
                String::new(),
                String::new(),
                b(low),
                b(high),
                String::new(),
            ];
            (row, low.min(high))
        } else {
            let row = vec![
                i.to_string(),
                fmt_f(2.0),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                b(tsallis),
            ];
            (row, tsallis)
        };
        let worst = cfg.base.from_nats(worst);
        Ok(Trial {
            rows: vec![row],
            failed: worst < -tol,
            violation: shortfall(worst),
        })
    })
}

fn random_pauli(rng: &mut impl Rng) -> Result<KrausChannel<f64>, CliError> {
    let p = flat_dirichlet(4, rng);
    Ok(pauli_channel([p[0], p[1], p[2], p[3]])?)
}

fn concat(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let tol = cfg.tol("concat");
    let header = ["pair_id", "s_map_1", "s_map_2", "s_map_composed", "slack"];
    run_trials(cfg, Suite::Concat, &header, |i, seed| {
        let mut rng = seeded_rng(seed, 1);
        let first = random_pauli(&mut rng)?;
        let second = random_pauli(&mut rng)?;
        let order = EntropyOrder::von_neumann().with_base(cfg.base);
        let s1 = map_entropy(&first, order);
        let s2 = map_entropy(&second, order);
        let joint = map_entropy(&compose(&second, &first)?, order);
        let slack = s1 + s2 - joint;
        Ok(Trial {
            rows: vec![vec![
                i.to_string(),
                fmt_f(s1),
                fmt_f(s2),
                fmt_f(joint),
                fmt_f(slack),
            ]],
            failed: slack < -tol,
            violation: shortfall(slack),
        })
    })
}

fn classical(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let tol = cfg.tol("classical");
    let q = cfg.q.unwrap_or(2.0);
    if q < 1.0 {
        return Err(CliError::Input(format!(
            "classical_bound needs q >= 1, got {q}"
        )));
    }
    let header = ["trial_id", "q", "s_sigma", "s_diag", "slack"];
    run_trials(cfg, Suite::ClassicalBound, &header, |i, seed| {
        let mut rng = seeded_rng(seed, 1);
        let channel = random_pauli(&mut rng)?;
        let r = classical_bound_check(&channel, q)?;
        let b = |x: f64| cfg.base.from_nats(x);
        Ok(Trial {
            rows: vec![vec![
                i.to_string(),
                fmt_f(q),
                fmt_f(b(r.s_sigma)),
                fmt_f(b(r.s_diag)),
                fmt_f(b(r.slack)),
            ]],
            failed: b(r.slack) < -tol,
            violation: shortfall(b(r.slack)),
        })
    })
}
