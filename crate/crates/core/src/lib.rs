//! Statevector simulation of the swap-test Euclidean distance estimator and
//! the hybrid k-medians clustering built on it.
//!
//! Every quantum quantity is simulated explicitly: index and data registers
//! are loaded through a QRAM-style oracle of controlled y-rotations, the
//! norm register is initialized directly, and a swap test on an ancilla
//! yields `P(0) = 1/2 + D²/(4Z)`. Estimates come either from the exact
//! ancilla marginal or from seeded shot sampling.

pub mod clustering;
pub mod encoding;
pub mod error;
pub mod estimator;
pub mod statevector;

pub use clustering::{
    assign_points, choose_initial_medians, k_medians, median_calc, precision, ClusteringResult,
    Iteration, MedianSelection, PrecisionReport, RunConfig, Termination,
};
pub use encoding::{
    build_phi, build_psi0, build_v_column, compute_z, encode_angles, prepare_dataset, qram_query,
    AngleTree, DataPoint, DataSet, RegisterLayout, ZTerm,
};
pub use error::{Error, ErrorKind, Result};
pub use estimator::{
    classical_distance_oracle, closed_form_p0, quan_parallel_dist, recover_distance,
    run_swap_test_exact, run_swap_test_sampled, sample_swap_test, shots_for_epsilon, CircuitStats,
    DistanceEstimate, EstimatorConfig, Mode,
};
pub use statevector::{Controls, Gate2x2, QubitRange, ShotCounts, StateVector, DEFAULT_MAX_QUBITS};
