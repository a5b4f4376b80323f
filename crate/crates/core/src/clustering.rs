//! Hybrid k-medians: the classical loop drives swap-test distance estimates.
//!
//! Medians are medoids chosen as the member nearest its cluster *mean*
//! ([`median_calc`]); points are assigned to the nearest median by estimating
//! their distance to the singleton set holding that median.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::DataSet;
use crate::error::{Error, Result};
use crate::estimator::{quan_parallel_dist, DistanceEstimate, EstimatorConfig, Mode};

/// Distances this close are ties in exact mode. Circuit rounding is far
/// below it, so classical ties stay ties.
pub const EXACT_TIE_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_MAX_ITERATIONS: usize = 50;

fn tie_tolerance(config: &EstimatorConfig) -> f64 {
    match config.mode {
        Mode::Exact => EXACT_TIE_TOLERANCE,
        Mode::Sampled => 0.0,
    }
}

/// Index of the smallest value; near-ties resolve to the lowest index.
pub fn argmin_lowest(values: &[f64], tolerance: f64) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] - tolerance {
            best = i;
        }
    }
    best
}

/// SplitMix64 finalizer over `base` and `parts`.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    parts.iter().fold(mix(base), |acc, &p| {
        mix(acc ^ p.wrapping_add(0x9e37_79b9_7f4a_7c15))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianSelection {
    pub median: usize,
    /// One estimate per candidate, in set order.
    pub candidates: Vec<DistanceEstimate>,
}

/// Picks the member whose estimated distance to the set mean is smallest.
/// Candidate `i` is estimated with seed `config.seed + i`.
pub fn median_calc(set: &DataSet, config: &EstimatorConfig) -> Result<MedianSelection> {
    let candidates = (0..set.len())
        .into_par_iter()
        .map(|i| {
            let cfg = config.with_seed(config.seed.wrapping_add(i as u64));
            quan_parallel_dist(set.point(i), set, &cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let distances: Vec<f64> = candidates.iter().map(|c| c.distance).collect();
    Ok(MedianSelection {
        median: argmin_lowest(&distances, tie_tolerance(config)),
        candidates,
    })
}

fn validate_medians(set: &DataSet, medians: &[usize]) -> Result<()> {
    let m = set.len();
    for (pos, &idx) in medians.iter().enumerate() {
        if idx >= m {
            return Err(Error::MedianOutOfRange { index: idx, m });
        }
        if medians[..pos].contains(&idx) {
            return Err(Error::DuplicateMedian(idx));
        }
    }
    Ok(())
}

/// Nearest-median cluster id for every point. The estimate for point `i`
/// against cluster `c` uses seed `config.seed + i·k + c`.
pub fn assign_points(set: &DataSet, medians: &[usize], config: &EstimatorConfig) -> Result<Vec<usize>> {
    validate_medians(set, medians)?;
    let k = medians.len();
    let tol = tie_tolerance(config);
    let singletons: Vec<DataSet> = medians.iter().map(|&j| set.singleton(j)).collect();
    (0..set.len())
        .into_par_iter()
        .map(|i| {
            let distances = singletons
                .iter()
                .enumerate()
                .map(|(c, median)| {
                    let call = (i * k + c) as u64;
                    let cfg = config.with_seed(config.seed.wrapping_add(call));
                    quan_parallel_dist(set.point(i), median, &cfg).map(|e| e.distance)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(argmin_lowest(&distances, tol))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: usize,
    pub estimator: EstimatorConfig,
    pub max_iterations: usize,
    pub initial_medians: Option<Vec<usize>>,
    pub rng_seed: u64,
}

impl RunConfig {
    pub fn new(k: usize, estimator: EstimatorConfig) -> Self {
        Self {
            k,
            estimator,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            initial_medians: None,
            rng_seed: 0,
        }
    }

    pub fn with_initial_medians(mut self, medians: Vec<usize>) -> Self {
        self.initial_medians = Some(medians);
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_rng_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    fn validate(&self, set: &DataSet) -> Result<()> {
        let m = set.len();
        if self.k == 0 || self.k > m {
            return Err(Error::InvalidK { k: self.k, m });
        }
        if self.max_iterations == 0 {
            return Err(Error::ZeroIterations);
        }
        if let Some(init) = &self.initial_medians {
            if init.len() != self.k {
                return Err(Error::MedianCount {
                    expected: self.k,
                    actual: init.len(),
                });
            }
            validate_medians(set, init)?;
        }
        Ok(())
    }
}

/// The configured initial medians, or `k` distinct indices drawn uniformly
/// from a generator seeded with `rng_seed`.
pub fn choose_initial_medians(set: &DataSet, config: &RunConfig) -> Result<Vec<usize>> {
    config.validate(set)?;
    if let Some(init) = &config.initial_medians {
        return Ok(init.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    Ok(rand::seq::index::sample(&mut rng, set.len(), config.k).into_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Iteration {
    /// Medians the assignment was computed against.
    pub medians: Vec<usize>,
    pub assignment: Vec<usize>,
    /// Medians recomputed from this iteration's clusters.
    pub new_medians: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterationsReached,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub iterations: Vec<Iteration>,
    pub termination: Termination,
    pub final_medians: Vec<usize>,
    pub final_assignment: Vec<usize>,
    /// Distance estimates requested from the quantum subroutine.
    pub estimator_calls: u64,
}

impl ClusteringResult {
    /// Member indices of each cluster in the final assignment.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        members(&self.final_assignment, self.final_medians.len())
    }
}

fn members(assignment: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); k];
    for (i, &c) in assignment.iter().enumerate() {
        out[c].push(i);
    }
    out
}

fn same_multiset(a: &[usize], b: &[usize]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Alternates nearest-median assignment and per-cluster median selection
/// until the median multiset repeats or `max_iterations` rounds have run.
///
/// Each median stays in its own cluster, so no cluster is ever empty. Round
/// `t` estimates with seeds derived from `(rng_seed, t, stage)` where stage 0
/// is assignment and `1 + c` is the median search of cluster `c`.
pub fn k_medians(set: &DataSet, config: &RunConfig) -> Result<ClusteringResult> {
    let mut medians = choose_initial_medians(set, config)?;
    let k = config.k;
    let mut iterations = Vec::new();
    let mut estimator_calls = 0u64;
    let mut termination = Termination::MaxIterationsReached;

    for round in 0..config.max_iterations {
        let round_seed = |stage: usize| derive_seed(config.rng_seed, &[round as u64, stage as u64]);

        let assign_cfg = config.estimator.with_seed(round_seed(0));
        let mut assignment = assign_points(set, &medians, &assign_cfg)?;
        estimator_calls += (set.len() * k) as u64;
        // Sampling noise can pull a median into another cluster, which would
        // leave its own cluster empty and let two clusters share one median.
        for (c, &m) in medians.iter().enumerate() {
            assignment[m] = c;
        }

        let mut new_medians = medians.clone();
        for (c, cluster) in members(&assignment, k).iter().enumerate() {
            let cfg = config.estimator.with_seed(round_seed(1 + c));
            let local = median_calc(&set.subset(cluster), &cfg)?.median;
            estimator_calls += cluster.len() as u64;
            new_medians[c] = cluster[local];
        }

        let converged = same_multiset(&medians, &new_medians);
        iterations.push(Iteration {
            medians: std::mem::replace(&mut medians, new_medians.clone()),
            assignment,
            new_medians,
        });
        if converged {
            termination = Termination::Converged;
            break;
        }
    }

    let last = iterations.last().expect("at least one round runs");
    Ok(ClusteringResult {
        final_medians: last.new_medians.clone(),
        final_assignment: last.assignment.clone(),
        iterations,
        termination,
        estimator_calls,
    })
}

/// Cluster-by-class counts with per-cluster majority fractions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionReport {
    /// Class label of each contingency column.
    pub classes: Vec<usize>,
    pub contingency: Vec<Vec<usize>>,
    /// `max class count / cluster size`; `None` for empty clusters.
    pub per_cluster: Vec<Option<f64>>,
    /// Unweighted mean over nonempty clusters.
    pub overall: f64,
}

impl PrecisionReport {
    pub fn from_contingency(classes: Vec<usize>, contingency: Vec<Vec<usize>>) -> Self {
        let per_cluster: Vec<Option<f64>> = contingency
            .iter()
            .map(|row| {
                let size: usize = row.iter().sum();
                let top = row.iter().copied().max().unwrap_or(0);
                (size > 0).then(|| top as f64 / size as f64)
            })
            .collect();
        let scored: Vec<f64> = per_cluster.iter().flatten().copied().collect();
        let overall = if scored.is_empty() {
            0.0
        } else {
            scored.iter().sum::<f64>() / scored.len() as f64
        };
        Self {
            classes,
            contingency,
            per_cluster,
            overall,
        }
    }
}

/// Majority-class precision of `assignment` (cluster ids `< k`) against
/// per-point class `labels`.
pub fn precision(assignment: &[usize], labels: &[usize], k: usize) -> Result<PrecisionReport> {
    if assignment.len() != labels.len() {
        return Err(Error::LabelCount {
            labels: labels.len(),
            points: assignment.len(),
        });
    }
    if let Some(&id) = assignment.iter().find(|&&c| c >= k) {
        return Err(Error::ClusterOutOfRange { id, k });
    }
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut contingency = vec![vec![0usize; classes.len()]; k];
    for (&c, label) in assignment.iter().zip(labels) {
        let col = classes.binary_search(label).expect("label collected above");
        contingency[c][col] += 1;
    }
    Ok(PrecisionReport::from_contingency(classes, contingency))
}
