//! Swap-test estimation of `|u − mean(V)|`.
//!
//! The circuit prepares the index/data state and the norm state, then runs
//! `H · CSWAP(index ↔ norm) · H` on the ancilla. With `Z = |u|² + mean |v_j|²`
//! and `D = |u − mean(V)|` the ancilla reads 0 with probability
//! `1/2 + D²/(4Z)`, which [`recover_distance`] inverts.

use serde::{Deserialize, Serialize};

use crate::encoding::{build_phi, build_psi0, compute_z, qram_query, DataPoint, DataSet, RegisterLayout, ZTerm};
use crate::error::{Error, Result};
use crate::statevector::{Gate2x2, ShotCounts, StateVector};

/// In exact mode, `|2·p0 − 1|` at or below this is floating-point residue
/// and is read as zero distance.
pub const EXACT_ROUNDING_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub mode: Mode,
    pub shots: u64,
    pub epsilon: Option<f64>,
    pub seed: u64,
}

/// `ceil(1/ε²)` shots for additive accuracy `ε` on P(0).
pub fn shots_for_epsilon(epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok((1.0 / (epsilon * epsilon)).ceil() as u64)
}

impl EstimatorConfig {
    pub fn exact() -> Self {
        Self {
            mode: Mode::Exact,
            shots: 1,
            epsilon: None,
            seed: 0,
        }
    }

    pub fn sampled(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self {
            mode: Mode::Sampled,
            shots,
            epsilon: None,
            seed,
        })
    }

    pub fn from_epsilon(epsilon: f64, seed: u64) -> Result<Self> {
        Ok(Self {
            epsilon: Some(epsilon),
            ..Self::sampled(shots_for_epsilon(epsilon)?, seed)?
        })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self::exact()
    }
}

/// Resource counters for one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub qubits: usize,
    /// Gates in one circuit execution.
    pub gates: u64,
    /// Swap-test executions: the shot count, or 1 for an exact read-out.
    pub repetitions: u64,
    /// One QRAM query per execution.
    pub oracle_queries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub p0: f64,
    pub z: ZTerm,
    pub distance: f64,
    pub clamped: bool,
    pub mode: Mode,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub counts: Option<ShotCounts>,
    pub stats: CircuitStats,
}

/// Builds the final swap-test state for `u` against `set`.
pub fn swap_test_state(u: &DataPoint, set: &DataSet) -> Result<(StateVector, RegisterLayout)> {
    let layout = set.layout();
    let mut state = StateVector::new(layout.total_qubits)?;
    build_psi0(&mut state, &layout, set.len())?;
    qram_query(&mut state, &layout, u, set)?;
    build_phi(&mut state, &layout, u, set)?;

    let h = Gate2x2::hadamard();
    let index: Vec<usize> = layout.psi_index.qubits().collect();
    let norms: Vec<usize> = layout.phi.qubits().collect();
    state.apply_gate(&h, layout.ancilla, &[])?;
    state.apply_controlled_swap(layout.ancilla, &index, &norms)?;
    state.apply_gate(&h, layout.ancilla, &[])?;
    Ok((state, layout))
}

/// Exact ancilla-0 probability of the simulated circuit.
pub fn run_swap_test_exact(u: &DataPoint, set: &DataSet) -> Result<f64> {
    let (state, layout) = swap_test_state(u, set)?;
    state.prob_of_qubit_zero(layout.ancilla)
}

/// Ancilla outcome counts over `shots` repetitions.
pub fn sample_swap_test(u: &DataPoint, set: &DataSet, shots: u64, seed: u64) -> Result<ShotCounts> {
    let (state, layout) = swap_test_state(u, set)?;
    state.sample_counts(layout.ancilla, shots, seed)
}

/// Shot-estimated ancilla-0 probability.
pub fn run_swap_test_sampled(u: &DataPoint, set: &DataSet, config: &EstimatorConfig) -> Result<f64> {
    Ok(sample_swap_test(u, set, config.shots, config.seed)?.fraction_zero())
}

/// Inverts `P(0) = 1/2 + d²/(4Z)`. A negative radicand (shot noise below
/// one half) yields `(0, true)`.
pub fn recover_distance(p0: f64, z: ZTerm) -> (f64, bool) {
    let excess = 2.0 * p0 - 1.0;
    if excess < 0.0 {
        return (0.0, true);
    }
    ((2.0 * z.value().max(0.0) * excess).sqrt(), false)
}

/// Closed-form swap-test probability for a classical distance.
pub fn closed_form_p0(distance: f64, z: ZTerm) -> f64 {
    0.5 + distance * distance / (4.0 * z.value())
}

/// Estimates `|u − mean(set)|` with the configured swap-test mode.
pub fn quan_parallel_dist(u: &DataPoint, set: &DataSet, config: &EstimatorConfig) -> Result<DistanceEstimate> {
    let z = compute_z(u, set)?;
    let (state, layout) = swap_test_state(u, set)?;
    let gates = state.gate_count();

    let (p0, counts, repetitions) = match config.mode {
        Mode::Exact => {
            let mut p0 = state.prob_of_qubit_zero(layout.ancilla)?;
            if (2.0 * p0 - 1.0).abs() <= EXACT_ROUNDING_TOLERANCE {
                p0 = 0.5;
            }
            (p0, None, 1)
        }
        Mode::Sampled => {
            let counts = state.sample_counts(layout.ancilla, config.shots, config.seed)?;
            (counts.fraction_zero(), Some(counts), config.shots)
        }
    };
    let (distance, clamped) = recover_distance(p0, z);
    let sampled = config.mode == Mode::Sampled;
    Ok(DistanceEstimate {
        p0,
        z,
        distance,
        clamped,
        mode: config.mode,
        shots: sampled.then_some(config.shots),
        seed: sampled.then_some(config.seed),
        counts,
        stats: CircuitStats {
            qubits: layout.total_qubits,
            gates,
            repetitions,
            oracle_queries: repetitions,
        },
    })
}

/// Brute-force `|u − (1/M) Σ v_j|` in double precision.
pub fn classical_distance_oracle(u: &DataPoint, set: &DataSet) -> Result<f64> {
    if u.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            point: u.dim(),
            set: set.dim(),
        });
    }
    let mean = set.mean();
    Ok(u.coords()
        .iter()
        .zip(&mean)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::prepare_dataset;

    fn experiment2() -> (DataPoint, DataSet) {
        let set = prepare_dataset(&[
            vec![0.5, 0.1, 0.7, 1.2],
            vec![0.6, 0.1, 0.2, 1.4],
            vec![1.4, 0.4, 0.5, 0.8],
            vec![0.2, 1.2, 0.8, 0.4],
            vec![0.1, 0.5, 1.7, 0.5],
            vec![1.3, 0.6, 1.2, 0.4],
            vec![1.1, 0.4, 0.5, 0.4],
            vec![1.2, 1.2, 1.0, 0.8],
        ])
        .unwrap();
        let u = set.query_point(&[1.3, 0.9, 0.2, 0.6]).unwrap();
        (u, set)
    }

    #[test]
    fn exact_probabilities() {
        let set = prepare_dataset(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        let u = set.point(0).clone();
        assert!((run_swap_test_exact(&u, &set).unwrap() - 0.5).abs() < 1e-12);

        let (u, set) = experiment2();
        assert!((run_swap_test_exact(&u, &set).unwrap() - 0.533338).abs() < 1e-6);

        let set = prepare_dataset(&[vec![0.0, 1.0]]).unwrap();
        let u = set.query_point(&[1.0, 0.0]).unwrap();
        assert!((run_swap_test_exact(&u, &set).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn sampled_probabilities() {
        let (u, set) = experiment2();
        let cfg = EstimatorConfig::sampled(8192, 11).unwrap();
        let p = run_swap_test_sampled(&u, &set, &cfg).unwrap();
        assert!((p - 0.533338).abs() < 0.0165);
        assert_eq!(p, run_swap_test_sampled(&u, &set, &cfg).unwrap());

        for seed in 0..10 {
            let cfg = EstimatorConfig::sampled(1, seed).unwrap();
            let p = run_swap_test_sampled(&u, &set, &cfg).unwrap();
            assert!(p == 0.0 || p == 1.0);
        }
    }

    #[test]
    fn recovery_examples() {
        let (d, clamped) = recover_distance(0.509765625, ZTerm::new(2.6775));
        assert!((d - 0.323403530).abs() < 1e-8 && !clamped);
        let (d, _) = recover_distance(0.53613, ZTerm::new(5.8));
        assert!((d - 0.91554).abs() < 1e-5);
        assert_eq!(recover_distance(0.5, ZTerm::new(3.7)), (0.0, false));
        assert_eq!(recover_distance(0.49, ZTerm::new(3.0)), (0.0, true));
    }

    #[test]
    fn composite_estimates() {
        let set = prepare_dataset(&[
            vec![0.5, 0.1],
            vec![0.6, 1.4],
            vec![1.4, 0.4],
            vec![0.2, 0.4],
            vec![0.1, 0.5],
            vec![1.3, 0.4],
            vec![1.1, 0.4],
            vec![1.2, 0.8],
        ])
        .unwrap();
        let cfg = EstimatorConfig::exact();
        let est = quan_parallel_dist(set.point(6), &set, &cfg).unwrap();
        assert!((est.distance - 0.33541).abs() < 1e-5);
        assert!(!est.clamped);
        assert_eq!(est.stats.repetitions, 1);
        let est = quan_parallel_dist(set.point(3), &set, &cfg).unwrap();
        assert!((est.distance - 0.61847).abs() < 1e-5);

        let single = set.singleton(2);
        let est = quan_parallel_dist(set.point(2), &single, &cfg).unwrap();
        assert_eq!(est.distance, 0.0);
        assert!(!est.clamped);
    }

    #[test]
    fn oracle_examples() {
        let (u, set) = experiment2();
        assert!((classical_distance_oracle(&u, &set).unwrap() - 0.87946).abs() < 1e-5);

        let set = prepare_dataset(&[vec![1.0, 3.0], vec![3.0, -1.0]]).unwrap();
        let u = set.query_point(&[2.0, 1.0]).unwrap();
        assert_eq!(classical_distance_oracle(&u, &set).unwrap(), 0.0);

        let set = prepare_dataset(&[vec![4.0, 6.0]]).unwrap();
        let u = set.query_point(&[1.0, 2.0]).unwrap();
        assert_eq!(classical_distance_oracle(&u, &set).unwrap(), 5.0);
    }

    #[test]
    fn epsilon_rule() {
        assert_eq!(shots_for_epsilon(0.01).unwrap(), 10_000);
        assert_eq!(shots_for_epsilon(0.3).unwrap(), 12);
        assert!(shots_for_epsilon(0.5).is_err());
        assert!(shots_for_epsilon(0.0).is_err());
        let cfg = EstimatorConfig::from_epsilon(0.05, 1).unwrap();
        assert_eq!((cfg.mode, cfg.shots, cfg.epsilon), (Mode::Sampled, 400, Some(0.05)));
    }
}
