//! Parameterized-complexity experiments for selection sort on random input.
//!
//! The pipeline runs input generation ([`distributions`]), instrumented sorting
//! ([`algorithms`]), Monte Carlo aggregation ([`montecarlo`]), closed-form
//! expectations ([`theory`]), polynomial regression ([`polyfit`]) and degree
//! selection ([`model_select`]).
//!
//! With the default `parallel` feature, trials run on rayon's pool; results are
//! identical with or without it.

pub mod algorithms;
pub mod distributions;
pub mod error;
pub mod fixture;
pub mod model_select;
pub mod montecarlo;
pub mod polyfit;
pub mod special;
pub mod theory;

pub use error::{Error, Result};
