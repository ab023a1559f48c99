//! Multiple-access channels realizable with a single particle: classical
//! local polytopes, quantum interference and coherence witnesses.
//!
//! Probability tables are generic over [`scalar::Scalar`], implemented for
//! `f64`, `f32` and exact [`Rational`]s.

pub mod coherence;
pub mod io;
pub mod linalg;
pub mod mac;
pub mod polytope;
pub mod quantum;
pub mod scalar;

pub use num_rational::BigRational as Rational;

pub type ExactMac = mac::Mac<Rational>;
pub type FloatMac = mac::Mac<f64>;
pub type ExactInequality = mac::LinearInequality<Rational>;
pub type FloatInequality = mac::LinearInequality<f64>;
pub type ExactCoords = mac::InterferenceCoords<Rational>;
