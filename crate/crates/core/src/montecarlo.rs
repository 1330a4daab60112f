//! Repeated sample → sort → count trials, summarised per `(n, p)` cell.
//!
//! Seeds are derived, never drawn: cell `k` of the grid uses
//! `mix_seed(master_seed, k)` and trial `t` of that cell uses
//! `mix_seed(cell_seed, t)`. Trial counts are reduced in trial-index order, so
//! the parallel and sequential paths produce bit-identical summaries.

use serde::{Deserialize, Serialize};

use crate::algorithms::{
    count_inversions, exchange_selection_sort_in_place, textbook_selection_sort_in_place,
};
use crate::distributions::{mix_seed, GeometricParam, RandomSource, SamplerMethod};
use crate::error::{Error, Result};
use crate::theory::pair_count;

/// Which count a trial reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterMode {
    /// Swaps made by the swap-eagerly exchange sort.
    #[default]
    ExchangeInterchanges,
    /// Swaps made by the min-find selection sort.
    TextbookInterchanges,
    /// Inversions in the unsorted array.
    Inversions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub p_values: Vec<f64>,
    pub counter_mode: CounterMode,
    pub master_seed: u64,
    pub sampler_method: SamplerMethod,
}

impl ExperimentConfig {
    /// `n = 1000`, 100 trials, `p = 0.1, 0.2, ..., 0.9`, exchange swaps.
    pub fn reference_default(master_seed: u64) -> Self {
        Self {
            n: 1000,
            trials: 100,
            p_values: (1..=9).map(|k| k as f64 / 10.0).collect(),
            counter_mode: CounterMode::ExchangeInterchanges,
            master_seed,
            sampler_method: SamplerMethod::Inverse,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidConfig("p grid is empty".into()));
        }
        for &p in &self.p_values {
            GeometricParam::new(p)?;
        }
        if self.p_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "p grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Seed of the cell at grid position `p_index`.
    pub fn cell_seed(&self, p_index: usize) -> u64 {
        mix_seed(self.master_seed, p_index as u64)
    }
}

/// Aggregate of one cell's trial counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub p: f64,
    pub n: usize,
    pub trials: usize,
    pub mean_c: f64,
    /// Population convention: divides by `trials`.
    pub sd_c: f64,
    /// `sd_c / mean_c`; `None` when `mean_c == 0`.
    pub cv_c: Option<f64>,
}

/// Single-pass Welford accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn population_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0)
        }
    }

    pub fn population_sd(&self) -> f64 {
        self.population_variance().sqrt()
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = RunningMoments::default();
        iter.into_iter().for_each(|x| m.push(x));
        m
    }
}

/// How trials are scheduled. Output does not depend on this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon's current pool. Falls back to sequential without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// One trial: draw an array from geometric(p) and return the configured count.
pub fn run_trial(config: &ExperimentConfig, param: GeometricParam, trial_seed: u64) -> u64 {
    let mut src = RandomSource::new(trial_seed);
    let mut items: Vec<u64> = (0..config.n)
        .map(|_| src.sample_geometric(param, config.sampler_method))
        .collect();
    match config.counter_mode {
        CounterMode::ExchangeInterchanges => {
            exchange_selection_sort_in_place(&mut items).interchanges
        }
        CounterMode::TextbookInterchanges => {
            textbook_selection_sort_in_place(&mut items).interchanges
        }
        CounterMode::Inversions => count_inversions(&items),
    }
}

/// Summarises counts in the order given.
pub fn summarize(p: f64, n: usize, counts: &[u64]) -> TrialSummary {
    let moments: RunningMoments = counts.iter().map(|&c| c as f64).collect();
    let mean_c = moments.mean();
    let sd_c = moments.population_sd();
    debug_assert!(mean_c <= pair_count(n as u64) as f64);
    TrialSummary {
        p,
        n,
        trials: counts.len(),
        mean_c,
        sd_c,
        cv_c: (mean_c > 0.0).then(|| sd_c / mean_c),
    }
}

/// Runs every trial of one cell.
pub fn run_cell(config: &ExperimentConfig, p: f64, cell_seed: u64) -> Result<TrialSummary> {
    run_cell_with(config, p, cell_seed, Execution::default())
}

pub fn run_cell_with(
    config: &ExperimentConfig,
    p: f64,
    cell_seed: u64,
    execution: Execution,
) -> Result<TrialSummary> {
    let param = GeometricParam::new(p)?;
    if config.n == 0 || config.trials == 0 {
        return Err(Error::InvalidConfig(
            "n and trials must be at least 1".into(),
        ));
    }
    let jobs: Vec<(GeometricParam, u64)> = (0..config.trials)
        .map(|t| (param, mix_seed(cell_seed, t as u64)))
        .collect();
    let counts = run_jobs(config, &jobs, execution);
    Ok(summarize(p, config.n, &counts))
}

/// One summary per grid point, in grid order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialSummary>> {
    run_experiment_with(config, Execution::default())
}

pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<Vec<TrialSummary>> {
    config.validate()?;
    let mut jobs = Vec::with_capacity(config.p_values.len() * config.trials);
    for (k, &p) in config.p_values.iter().enumerate() {
        let param = GeometricParam::new(p)?;
        let cell_seed = config.cell_seed(k);
        jobs.extend((0..config.trials).map(|t| (param, mix_seed(cell_seed, t as u64))));
    }
    let counts = run_jobs(config, &jobs, execution);
    Ok(config
        .p_values
        .iter()
        .zip(counts.chunks(config.trials))
        .map(|(&p, cell)| summarize(p, config.n, cell))
        .collect())
}

fn run_jobs(
    config: &ExperimentConfig,
    jobs: &[(GeometricParam, u64)],
    execution: Execution,
) -> Vec<u64> {
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            jobs.par_iter()
                .map(|&(param, seed)| run_trial(config, param, seed))
                .collect()
        }
        _ => jobs
            .iter()
            .map(|&(param, seed)| run_trial(config, param, seed))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(p_values: Vec<f64>, mode: CounterMode) -> ExperimentConfig {
        ExperimentConfig {
            n: 50,
            trials: 20,
            p_values,
            counter_mode: mode,
            master_seed: 12345,
            sampler_method: SamplerMethod::Inverse,
        }
    }

    #[test]
    fn degenerate_cell() {
        let cfg = small_config(vec![1.0], CounterMode::ExchangeInterchanges);
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].mean_c, 0.0);
        assert_eq!(out[0].sd_c, 0.0);
        assert_eq!(out[0].cv_c, None);
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_config(vec![0.2, 0.1], CounterMode::Inversions);
        assert!(cfg.validate().is_err());
        cfg.p_values = vec![0.0, 0.5];
        assert_eq!(cfg.validate(), Err(Error::InvalidProbability(0.0)));
        cfg.p_values = vec![];
        assert!(cfg.validate().is_err());
        cfg.p_values = vec![0.5];
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.n = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sequential_equals_parallel() {
        for mode in [
            CounterMode::ExchangeInterchanges,
            CounterMode::TextbookInterchanges,
            CounterMode::Inversions,
        ] {
            let cfg = small_config(vec![0.1, 0.4, 0.8], mode);
            let a = run_experiment_with(&cfg, Execution::Sequential).unwrap();
            let b = run_experiment_with(&cfg, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cell_seeding_is_independent_of_grid_subset() {
        let full = small_config(vec![0.1, 0.4, 0.8], CounterMode::ExchangeInterchanges);
        let summaries = run_experiment(&full).unwrap();
        let single = run_cell(&full, 0.4, full.cell_seed(1)).unwrap();
        assert_eq!(summaries[1], single);
    }

    #[test]
    fn streaming_matches_two_pass() {
        let mut src = RandomSource::new(77);
        for _ in 0..50 {
            let xs: Vec<f64> = (0..200)
                .map(|_| 30_000.0 + 2_000.0 * src.sample_uniform())
                .collect();
            let m: RunningMoments = xs.iter().copied().collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
            assert!(((m.mean() - mean) / mean).abs() < 1e-9);
            assert!(((m.population_sd() - var.sqrt()) / var.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn summary_uses_population_sd() {
        let s = summarize(0.5, 10, &[2, 4, 4, 4, 5, 5, 7, 9]);
        assert_eq!(s.mean_c, 5.0);
        assert_eq!(s.sd_c, 2.0);
        assert_eq!(s.cv_c, Some(0.4));
        assert_eq!(s.trials, 8);
    }

    #[test]
    fn textbook_swaps_bounded() {
        let cfg = small_config(vec![0.3], CounterMode::TextbookInterchanges);
        let s = run_experiment(&cfg).unwrap();
        assert!(s[0].mean_c <= (cfg.n - 1) as f64);
    }
}
