//! Entropic characterization of quantum channels.
//!
//! Everything is generic over the real scalar ([`Real`], implemented by `f32`
//! and `f64`); the aliases below fix the scalar to `f64`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod additivity;
pub mod channel_file;
pub mod channels;
pub mod error;
mod linalg;
pub mod min_output;
pub mod qubit;
pub mod random;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = scalar::CMatrix<f64>;
pub type Vector = scalar::CVector<f64>;
pub type Density = states::DensityMatrix<f64>;
pub type Pure = states::PureState<f64>;
pub type Order = states::EntropyOrder<f64>;
pub type Channel = channels::KrausChannel<f64>;
pub type Jamiolkowski = channels::JamiolkowskiState<f64>;
pub type MinOut = min_output::MinOutResult<f64>;
