//! Fixtures shared by the criterion benches.

use qkmedians_core::{prepare_dataset, DataSet};

/// The eight 2-d points used for median selection.
pub fn median_set() -> DataSet {
    prepare_dataset(&[
        vec![0.5, 0.1],
        vec![0.6, 1.4],
        vec![1.4, 0.4],
        vec![0.2, 0.4],
        vec![0.1, 0.5],
        vec![1.3, 0.4],
        vec![1.1, 0.4],
        vec![1.2, 0.8],
    ])
    .expect("valid fixture")
}

/// The eight 4-d points of the second distance experiment.
pub fn distance_set() -> DataSet {
    prepare_dataset(&[
        vec![0.5, 0.1, 0.7, 1.2],
        vec![0.6, 0.1, 0.2, 1.4],
        vec![1.4, 0.4, 0.5, 0.8],
        vec![0.2, 1.2, 0.8, 0.4],
        vec![0.1, 0.5, 1.7, 0.5],
        vec![1.3, 0.6, 1.2, 0.4],
        vec![1.1, 0.4, 0.5, 0.4],
        vec![1.2, 1.2, 1.0, 0.8],
    ])
    .expect("valid fixture")
}

/// The eight integer points clustered into three groups.
pub fn cluster_set() -> DataSet {
    let raw = [[2, 10], [2, 5], [8, 4], [5, 8], [7, 5], [6, 4], [1, 2], [4, 9]];
    prepare_dataset(&raw.map(|p| vec![p[0] as f64, p[1] as f64])).expect("valid fixture")
}
