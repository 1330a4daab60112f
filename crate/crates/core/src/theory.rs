//! Closed-form tie and interchange probabilities for iid inputs.
//!
//! For iid items the chance that a given pair is out of order is
//! `(1 - P[tie]) / 2`, so the expected number of inversions in an array of
//! length `n` is `n(n-1)/2` times that. This is the expectation of
//! [`count_inversions`](crate::algorithms::count_inversions); it is *not* the
//! expectation of the exchange sort's swap count, which is much smaller.

use serde::{Deserialize, Serialize};

use crate::distributions::{geometric_pmf, GeometricParam, InputModel};
use crate::error::{Error, Result};

const MAX_SERIES_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryPrediction {
    pub n: u64,
    pub model: InputModel,
    pub tie_probability: f64,
    pub interchange_probability: f64,
    pub expected_interchanges: f64,
}

/// `P[a(i) = a(j)]`: 0 for continuous input, `p / (2 - p)` for geometric(p).
///
/// The geometric value is the sum of `p^2 (1-p)^(2r)` over `r >= 0`.
pub fn tie_probability(model: InputModel) -> f64 {
    match model {
        InputModel::ContinuousUniform => 0.0,
        InputModel::Geometric { p } => {
            let p = p.p();
            p / (2.0 - p)
        }
    }
}

/// Sums `pmf(r)^2` for `r = 0, 1, ...` until the remainder is provably below `tol`.
///
/// The remainder after term `r` is at most the square of the unseen mass,
/// `(1 - sum_{k<=r} pmf(k))^2`. Fails if that bound does not drop below `tol`
/// within a million terms.
pub fn tie_probability_series<F>(pmf: F, tol: f64) -> Result<f64>
where
    F: Fn(u64) -> f64,
{
    assert!(tol > 0.0, "tolerance must be positive");
    let mut sum = 0.0;
    let mut mass = 0.0;
    for r in 0..MAX_SERIES_TERMS {
        let f = pmf(r as u64);
        sum += f * f;
        mass += f;
        let unseen = (1.0 - mass).max(0.0);
        if unseen * unseen < tol {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNotConverged {
        terms: MAX_SERIES_TERMS,
        tol,
    })
}

/// Series form of [`tie_probability`] for a geometric input.
pub fn geometric_tie_probability_series(param: GeometricParam, tol: f64) -> Result<f64> {
    tie_probability_series(|r| geometric_pmf(param, r), tol)
}

/// `P[a(i) > a(j)] = (1 - P[tie]) / 2`.
pub fn interchange_probability(model: InputModel) -> f64 {
    match model {
        InputModel::ContinuousUniform => 0.5,
        InputModel::Geometric { p } => {
            let p = p.p();
            (1.0 - p) / (2.0 - p)
        }
    }
}

/// Pair count `n(n-1)/2`.
pub fn pair_count(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// `n(n-1)/2 * P[a(i) > a(j)]`.
pub fn expected_interchanges(model: InputModel, n: u64) -> f64 {
    pair_count(n) as f64 * interchange_probability(model)
}

pub fn predict(model: InputModel, n: u64) -> TheoryPrediction {
    TheoryPrediction {
        n,
        model,
        tie_probability: tie_probability(model),
        interchange_probability: interchange_probability(model),
        expected_interchanges: expected_interchanges(model, n),
    }
}
