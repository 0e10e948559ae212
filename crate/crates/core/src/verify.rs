//! Randomized checks of the inequalities that are expected to hold.
//!
//! Both sweeps split their samples into fixed blocks, each drawn from its own
//! window of the stream, so summaries do not depend on the worker count.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{ckw_r2_residual, sum_inequality_residual};
use crate::sampler::{haar_random_state, RngSeed, StateRng};
use crate::search::thread_pool;

/// Residuals below `-CKW_TOLERANCE` count as violations of the R₂ monogamy check.
pub const CKW_TOLERANCE: f64 = 1e-9;
/// Same for the squared-concurrence sum inequality.
pub const SUM_TOLERANCE: f64 = 1e-12;

const BLOCK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySummary {
    pub samples: u64,
    /// Residuals evaluated; a state contributes one per focus qubit.
    pub checks: u64,
    pub violations: u64,
    pub min_residual: f64,
    pub tolerance: f64,
}

impl VerifySummary {
    fn empty(tolerance: f64) -> Self {
        Self {
            samples: 0,
            checks: 0,
            violations: 0,
            min_residual: f64::INFINITY,
            tolerance,
        }
    }

    fn add_sample(&mut self, residuals: impl IntoIterator<Item = f64>) {
        self.samples += 1;
        for r in residuals {
            self.checks += 1;
            if r < -self.tolerance {
                self.violations += 1;
            }
            self.min_residual = self.min_residual.min(r);
        }
    }

    /// Combines two disjoint sweeps.
    pub fn merge(self, other: Self) -> Self {
        Self {
            samples: self.samples + other.samples,
            checks: self.checks + other.checks,
            violations: self.violations + other.violations,
            min_residual: self.min_residual.min(other.min_residual),
            tolerance: self.tolerance,
        }
    }
}

fn sweep(
    samples: u64,
    rng: &RngSeed,
    workers: usize,
    tolerance: f64,
    sample: impl Fn(&mut StateRng) -> Result<Vec<f64>> + Sync,
) -> Result<VerifySummary> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let pool = thread_pool(workers)?;
    let blocks: Vec<VerifySummary> = pool.install(|| {
        (0..samples.div_ceil(BLOCK))
            .into_par_iter()
            .map(|b| {
                let mut block_rng = rng.block_rng(b);
                let mut summary = VerifySummary::empty(tolerance);
                for _ in 0..BLOCK.min(samples - b * BLOCK) {
                    summary.add_sample(sample(&mut block_rng)?);
                }
                Ok(summary)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(blocks
        .into_iter()
        .fold(VerifySummary::empty(tolerance), VerifySummary::merge))
}

/// R₂ monogamy residual of Haar-random `n_qubits` states, every qubit taken
/// in turn as the focus.
pub fn ckw_r2_sweep(n_qubits: usize, samples: u64, rng: &RngSeed, workers: usize) -> Result<VerifySummary> {
    if n_qubits < 3 {
        return Err(Error::QubitCount(n_qubits));
    }
    sweep(samples, rng, workers, CKW_TOLERANCE, |r| {
        let psi = haar_random_state(n_qubits, r)?;
        (0..n_qubits).map(|focus| ckw_r2_residual(&psi, focus)).collect()
    })
}

/// Random vector of squared concurrences: length 2 to 7, entries in `[0, 1]`
/// summing to at most one. A quarter of the draws sit on the boundary sum = 1.
pub fn random_admissible_vector<R: Rng + ?Sized>(rng: &mut R) -> Vec<f64> {
    let len = rng.random_range(2..=7);
    let weights: Vec<f64> = (0..len).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let scale = if rng.random_bool(0.25) {
        1.0
    } else {
        rng.random::<f64>()
    };
    weights.iter().map(|w| (w / total * scale).min(1.0)).collect()
}

pub fn sum_inequality_sweep(samples: u64, rng: &RngSeed, workers: usize) -> Result<VerifySummary> {
    sweep(samples, rng, workers, SUM_TOLERANCE, |r| {
        Ok(vec![sum_inequality_residual(&random_admissible_vector(r))?])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_vectors_stay_admissible() {
        let mut rng = RngSeed::new(8, 0).rng();
        let mut lengths = [0usize; 8];
        for _ in 0..10_000 {
            let v = random_admissible_vector(&mut rng);
            lengths[v.len()] += 1;
            assert!(v.iter().all(|&c| (0.0..=1.0).contains(&c)));
            assert!(v.iter().sum::<f64>() <= 1.0 + 1e-12);
        }
        assert!(lengths[2..].iter().all(|&k| k > 1_000), "{lengths:?}");
    }

    #[test]
    fn sweeps_do_not_depend_on_workers() {
        let seed = RngSeed::new(2, 1);
        assert_eq!(
            sum_inequality_sweep(3000, &seed, 1).unwrap(),
            sum_inequality_sweep(3000, &seed, 3).unwrap()
        );
        let a = ckw_r2_sweep(3, 1500, &seed, 1).unwrap();
        assert_eq!(a, ckw_r2_sweep(3, 1500, &seed, 2).unwrap());
        assert_eq!((a.samples, a.checks, a.violations), (1500, 4500, 0));
    }

    #[test]
    fn rejects_empty_and_small_systems() {
        let seed = RngSeed::new(0, 0);
        assert!(sum_inequality_sweep(0, &seed, 1).is_err());
        assert!(ckw_r2_sweep(2, 10, &seed, 1).is_err());
    }
}
