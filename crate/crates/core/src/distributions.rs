//! Seedable random variates for the experiment's input models.
//!
//! Every stream is a xoshiro256++ generator seeded through SplitMix64. Parallel
//! workers never share a stream: each derives its own seed with [`mix_seed`],
//! so output depends only on `(master_seed, index)` and never on scheduling.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier recorded in run metadata for the generator behind [`RandomSource`].
pub const ALGORITHM_ID: &str = "xoshiro256++/splitmix64";

/// Derives the seed of substream `index` from `seed`.
///
/// SplitMix64 output function applied to `seed + (index + 1) * 0x9E3779B97F4A7C15`.
/// This mapping is part of the reproducibility contract and must not change.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Success probability of a geometric distribution, validated to lie in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GeometricParam(f64);

impl GeometricParam {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidProbability(p))
        }
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for GeometricParam {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<GeometricParam> for f64 {
    fn from(param: GeometricParam) -> f64 {
        param.0
    }
}

/// Distribution of the items fed to the sorts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputModel {
    /// Failures before the first success, support `0, 1, 2, ...`.
    Geometric { p: GeometricParam },
    /// Uniform on `[0, 1)`.
    ContinuousUniform,
}

impl InputModel {
    pub fn geometric(p: f64) -> Result<Self> {
        Ok(InputModel::Geometric {
            p: GeometricParam::new(p)?,
        })
    }
}

/// How geometric variates are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMethod {
    /// Count uniform draws `>= p` until one falls below `p`.
    Loop,
    /// One uniform draw through the inverse CDF.
    #[default]
    Inverse,
}

/// `p (1 - p)^r`.
pub fn geometric_pmf(param: GeometricParam, r: u64) -> f64 {
    let p = param.p();
    if p == 1.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    let r = i32::try_from(r).unwrap_or(i32::MAX);
    p * (1.0 - p).powi(r)
}

/// A deterministic uniform stream.
#[derive(Debug, Clone)]
pub struct RandomSource {
    master_seed: u64,
    rng: Xoshiro256PlusPlus,
}

impl RandomSource {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            rng: Xoshiro256PlusPlus::seed_from_u64(master_seed),
        }
    }

    /// Independent stream number `index` derived from this source's seed.
    pub fn substream(&self, index: u64) -> Self {
        Self::new(mix_seed(self.master_seed, index))
    }

    pub fn algorithm_id(&self) -> &'static str {
        ALGORITHM_ID
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Next deviate in `[0, 1)` with 53 random mantissa bits.
    #[inline]
    pub fn sample_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    #[inline]
    pub fn sample_geometric_loop(&mut self, param: GeometricParam) -> u64 {
        let p = param.p();
        let mut failures = 0;
        while self.sample_uniform() >= p {
            failures += 1;
        }
        failures
    }

    #[inline]
    pub fn sample_geometric_inverse(&mut self, param: GeometricParam) -> u64 {
        let u = self.sample_uniform();
        geometric_from_uniform(param, u)
    }

    #[inline]
    pub fn sample_geometric(&mut self, param: GeometricParam, method: SamplerMethod) -> u64 {
        match method {
            SamplerMethod::Loop => self.sample_geometric_loop(param),
            SamplerMethod::Inverse => self.sample_geometric_inverse(param),
        }
    }

    /// `n` geometric variates in draw order.
    pub fn sample_geometric_array(
        &mut self,
        param: GeometricParam,
        n: usize,
        method: SamplerMethod,
    ) -> Result<Vec<u64>> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok((0..n)
            .map(|_| self.sample_geometric(param, method))
            .collect())
    }

    /// `n` iid draws from `model`, geometric ones by inversion.
    pub fn sample_array(&mut self, model: InputModel, n: usize) -> Result<Sample> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(match model {
            InputModel::Geometric { p } => {
                Sample::Discrete(self.sample_geometric_array(p, n, SamplerMethod::Inverse)?)
            }
            InputModel::ContinuousUniform => {
                Sample::Continuous((0..n).map(|_| self.sample_uniform()).collect())
            }
        })
    }
}

/// Inverse-CDF map `floor(ln(1 - u) / ln(1 - p))`; always 0 when `p = 1`.
///
/// Returns 0 exactly when `u < p`.
pub fn geometric_from_uniform(param: GeometricParam, u: f64) -> u64 {
    let p = param.p();
    if p == 1.0 || u < p {
        return 0;
    }
    let r = ((-u).ln_1p() / (-p).ln_1p()).floor();
    // a float-to-int cast saturates, which only matters for p ~ 1e-300
    (r as u64).max(1)
}

/// Values drawn from an [`InputModel`].
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Discrete(Vec<u64>),
    Continuous(Vec<f64>),
}

impl Sample {
    pub fn len(&self) -> usize {
        match self {
            Sample::Discrete(v) => v.len(),
            Sample::Continuous(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
