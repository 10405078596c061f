//! Res-Ind Markov chains on multi-diagrams of wreath products `S_n(T)` and the
//! free-probability description of their macroscopic limit shapes.
//!
//! The series algebra, measures and Thoma parameters are generic over
//! [`Scalar`], which is implemented for `f32`, `f64` and [`BigRational`].
//! Exact suites use [`Exact`]; numerics use the `*F64` aliases.

// Validation is written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod characters;
pub mod diagram;
pub mod error;
pub mod evolution;
pub mod freeprob;
pub mod group;
pub mod levy;
pub mod limitshape;
pub mod measure;
pub mod pausing;
pub mod quad;
pub mod scalar;
pub mod simulate;
pub mod thoma;
pub mod verify;

pub use num_rational::BigRational;

pub use diagram::{InterlacingCoords, MultiDiagram, YoungDiagram};
pub use error::{Error, Result};
pub use freeprob::{CumulantSeq, RSeries, RTransform};
pub use group::FiniteGroupTable;
pub use measure::AtomicMeasure;
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = BigRational;
pub type CumulantsF64 = CumulantSeq<f64>;
pub type CumulantsF32 = CumulantSeq<f32>;
pub type ExactCumulants = CumulantSeq<Exact>;
pub type RSeriesF64 = RSeries<f64>;
pub type ExactRSeries = RSeries<Exact>;
pub type AtomicMeasureF64 = AtomicMeasure<f64>;
pub type ExactAtomicMeasure = AtomicMeasure<Exact>;
