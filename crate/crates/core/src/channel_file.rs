//! JSON description of a channel.
//!
//! ```json
//! {"kind": "kraus", "dim": 2, "operators": [[[[1,0],[0,0]], [[0,0],[1,0]]]]}
//! {"kind": "pauli", "weights": [0.5, 0.5, 0, 0]}
//! {"kind": "depolarizing", "dim": 3, "lambda": 0.5}
//! {"kind": "bloch", "lambda": [1, 1, 1], "t": [0, 0, 0]}
//! {"kind": "coarse_graining", "dim": 2}
//! ```
//!
//! Kraus operators are given row-major, either as a list of rows or as one
//! flat list of `dim * dim` entries; each entry is `[re, im]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channels::{
    coarse_graining, depolarizing, kraus_from_choi, pauli_channel, KrausChannel,
};
use crate::error::{Error, Result};
use crate::min_output::{
    depolarizing_map_q2, depolarizing_min_output_q2, qubit_pauli_min_output_q2,
};
use crate::qubit::{choi_qubit, lambda_from_pauli, spectrum_from_lambda, BlochParams};
use crate::scalar::{lit, CMatrix, Real};
use crate::states::renyi_of_spectrum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorEntries {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Kraus {
        dim: usize,
        operators: Vec<OperatorEntries>,
    },
    Pauli {
        weights: [f64; 4],
    },
    Depolarizing {
        dim: usize,
        lambda: f64,
    },
    Bloch {
        lambda: [f64; 3],
        t: [f64; 3],
    },
    CoarseGraining {
        dim: usize,
    },
}

/// Closed-form Rényi-2 values available for a named family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticQ2<T> {
    pub s_map: T,
    pub s_min: T,
}

fn operator_matrix<T: Real>(dim: usize, entries: &OperatorEntries) -> Result<CMatrix<T>> {
    let flat: Vec<[f64; 2]> = match entries {
        OperatorEntries::Rows(rows) => {
            if rows.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rows.len(),
                });
            }
            if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: bad.len(),
                });
            }
            rows.iter().flatten().copied().collect()
        }
        OperatorEntries::Flat(v) => {
            if v.len() != dim * dim {
                return Err(Error::DimensionMismatch {
                    expected: dim * dim,
                    found: v.len(),
                });
            }
            v.clone()
        }
    };
    if flat.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("operator entries must be finite".into()));
    }
    Ok(CMatrix::from_row_iterator(
        dim,
        dim,
        flat.iter().map(|[re, im]| Complex::new(lit(*re), lit(*im))),
    ))
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel specs always serialize")
    }

    /// Family name as written in the `kind` field.
    pub fn kind(&self) -> &'static str {
        match self {
            ChannelSpec::Kraus { .. } => "kraus",
            ChannelSpec::Pauli { .. } => "pauli",
            ChannelSpec::Depolarizing { .. } => "depolarizing",
            ChannelSpec::Bloch { .. } => "bloch",
            ChannelSpec::CoarseGraining { .. } => "coarse_graining",
        }
    }

    /// Validated channel.
    pub fn build<T: Real>(&self) -> Result<KrausChannel<T>> {
        match self {
            ChannelSpec::Kraus { dim, operators } => {
                if *dim == 0 || operators.is_empty() {
                    return Err(Error::InvalidParameter {
                        name: "operators",
                        reason: "need a positive dimension and at least one operator".into(),
                    });
                }
                let ops = operators
                    .iter()
                    .map(|e| operator_matrix(*dim, e))
                    .collect::<Result<Vec<_>>>()?;
                KrausChannel::new(ops)
            }
            ChannelSpec::Pauli { weights } => pauli_channel(weights.map(lit)),
            ChannelSpec::Depolarizing { dim, lambda } => depolarizing(*dim, lit(*lambda)),
            ChannelSpec::Bloch { lambda, t } => {
                let p = BlochParams {
                    lambda: lambda.map(lit),
                    t: t.map(lit),
                };
                let state = choi_qubit(&p).into_state()?;
                Ok(kraus_from_choi(&state))
            }
            ChannelSpec::CoarseGraining { dim } => coarse_graining(*dim),
        }
    }

    /// Closed-form `(S_2^map, S_2^min)` in nats, for families that have one.
    pub fn analytic_q2<T: Real>(&self) -> Result<Option<AnalyticQ2<T>>> {
        let two = lit::<T>(2.0);
        let unital_qubit = |lambda: [T; 3]| -> Result<AnalyticQ2<T>> {
            Ok(AnalyticQ2 {
                s_map: renyi_of_spectrum(&spectrum_from_lambda(lambda).v, two),
                s_min: qubit_pauli_min_output_q2(lambda)?,
            })
        };
        Ok(match self {
            ChannelSpec::Kraus { .. } => None,
            ChannelSpec::Pauli { weights } => {
                Some(unital_qubit(lambda_from_pauli(weights.map(lit)))?)
            }
            ChannelSpec::Depolarizing { dim, lambda } => Some(AnalyticQ2 {
                s_map: depolarizing_map_q2(*dim, lit(*lambda))?,
                s_min: depolarizing_min_output_q2(*dim, lit(*lambda))?,
            }),
            ChannelSpec::Bloch { lambda, t } => {
                if t.iter().any(|&x| x != 0.0) {
                    None
                } else {
                    Some(unital_qubit(lambda.map(lit))?)
                }
            }
            ChannelSpec::CoarseGraining { dim } => Some(AnalyticQ2 {
                s_map: lit::<T>(*dim as f64).ln(),
                s_min: T::zero(),
            }),
        })
    }
}
