//! Classical data ingestion and preparation of the estimator's input states.
//!
//! The estimator works on four registers (see [`RegisterLayout`]):
//!
//! * the ancilla controlling the swap,
//! * an index register holding `(|0⟩ + M^{-1/2} Σ_j |j⟩)/√2`,
//! * a data register that the QRAM oracle entangles with the index register,
//!   loading `u/|u|` at address 0 and `v_j/|v_j|` at address `j`,
//! * a norm register holding `(|u||0⟩ − M^{-1/2} Σ_j |v_j||j⟩)/√Z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Controls, Gate2x2, QubitRange, StateVector};

/// A zero-padded real vector with its cached Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct DataPoint {
    coords: Vec<f64>,
    norm: f64,
}

impl DataPoint {
    /// Pads `raw` with zeros to `dim` coordinates. `row` only labels errors.
    fn padded(raw: &[f64], dim: usize, row: usize) -> Result<Self> {
        if let Some(column) = raw.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row, column });
        }
        let mut coords = raw.to_vec();
        coords.resize(dim, 0.0);
        let norm = euclidean_norm(&coords);
        if norm == 0.0 {
            return Err(Error::ZeroVector { row });
        }
        Ok(Self { coords, norm })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Validated points sharing one power-of-two padded dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    points: Vec<DataPoint>,
    dim: usize,
    original_dim: usize,
}

/// Validates `raw` and zero-pads every row to the next power of two (at least 2).
pub fn prepare_dataset(raw: &[Vec<f64>]) -> Result<DataSet> {
    let first = raw.first().ok_or(Error::EmptyInput)?;
    let original_dim = first.len();
    if original_dim == 0 {
        return Err(Error::EmptyInput);
    }
    let dim = padded_dim(original_dim);
    let points = raw
        .iter()
        .enumerate()
        .map(|(row, v)| {
            if v.len() != original_dim {
                return Err(Error::RaggedRow {
                    row,
                    expected: original_dim,
                    found: v.len(),
                });
            }
            DataPoint::padded(v, dim, row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DataSet {
        points,
        dim,
        original_dim,
    })
}

fn padded_dim(n: usize) -> usize {
    n.next_power_of_two().max(2)
}

impl DataSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Padded dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &DataPoint {
        &self.points[index]
    }

    /// Encodes an external query vector in this set's padded space.
    pub fn query_point(&self, raw: &[f64]) -> Result<DataPoint> {
        if raw.len() != self.original_dim {
            return Err(Error::DimensionMismatch {
                point: raw.len(),
                set: self.original_dim,
            });
        }
        DataPoint::padded(raw, self.dim, 0)
    }

    /// The sub-collection at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> DataSet {
        DataSet {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            dim: self.dim,
            original_dim: self.original_dim,
        }
    }

    pub fn singleton(&self, index: usize) -> DataSet {
        self.subset(&[index])
    }

    pub fn mean(&self) -> Vec<f64> {
        let m = self.len() as f64;
        let mut mean = vec![0.0; self.dim];
        for p in &self.points {
            for (acc, x) in mean.iter_mut().zip(&p.coords) {
                *acc += x;
            }
        }
        mean.iter_mut().for_each(|x| *x /= m);
        mean
    }

    /// `(1/M) Σ_j |v_j|²`.
    pub fn mean_norm_sqr(&self) -> f64 {
        self.points.iter().map(|p| p.norm * p.norm).sum::<f64>() / self.len() as f64
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new(self.len(), self.dim)
    }

    fn check_point(&self, u: &DataPoint) -> Result<()> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                point: u.dim(),
                set: self.dim,
            });
        }
        Ok(())
    }
}

/// Qubit assignment of the estimator circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub ancilla: usize,
    pub psi_index: QubitRange,
    pub data: QubitRange,
    pub phi: QubitRange,
    pub total_qubits: usize,
}

impl RegisterLayout {
    /// Layout for a set of `m` points of padded dimension `dim`.
    ///
    /// Index registers use `ceil(log2(m + 1))` qubits so that addresses
    /// `0..=m` fit; for power-of-two `m` this is `log2(m) + 1`.
    pub fn new(m: usize, dim: usize) -> Self {
        let a = index_qubits(m);
        let n = dim.trailing_zeros() as usize;
        let psi_index = QubitRange::new(1, a);
        let data = QubitRange::new(psi_index.end(), n);
        let phi = QubitRange::new(data.end(), a);
        Self {
            ancilla: 0,
            psi_index,
            data,
            phi,
            total_qubits: phi.end(),
        }
    }
}

fn index_qubits(m: usize) -> usize {
    (m + 1).next_power_of_two().trailing_zeros() as usize
}

/// `|u|² + (1/M) Σ_j |v_j|²`, linking swap-test probability and distance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZTerm(f64);

impl ZTerm {
    pub fn new(value: f64) -> Self {
        Self(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn compute_z(u: &DataPoint, set: &DataSet) -> Result<ZTerm> {
    set.check_point(u)?;
    Ok(ZTerm(u.norm * u.norm + set.mean_norm_sqr()))
}

/// Column 0 of the index-preparation unitary: `1/√2` at entry 0, `1/√(2M)` at
/// entries `1..=M`, zero above, padded to `2^a` entries.
pub fn build_v_column(m: usize) -> Vec<f64> {
    assert!(m >= 1, "index superposition needs at least one address");
    let mut col = vec![0.0; 1 << index_qubits(m)];
    col[0] = std::f64::consts::FRAC_1_SQRT_2;
    let rest = (2.0 * m as f64).sqrt().recip();
    col[1..=m].iter_mut().for_each(|x| *x = rest);
    col
}

/// Real Householder reflection `I − 2wwᵀ/(wᵀw)` with `w = e₀ − column`; it
/// maps `|0⟩` onto the unit vector `column`. Row-major.
pub fn householder_from_e0(column: &[f64]) -> Vec<Complex64> {
    let dim = column.len();
    let mut w: Vec<f64> = column.iter().map(|x| -x).collect();
    w[0] += 1.0;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let id = if r == c { 1.0 } else { 0.0 };
            let reflect = if ww > 0.0 { 2.0 * w[r] * w[c] / ww } else { 0.0 };
            out[r * dim + c] = Complex64::new(id - reflect, 0.0);
        }
    }
    out
}

/// Prepares the index superposition on the (ground) index register by
/// applying the Householder completion of [`build_v_column`].
pub fn build_psi0(state: &mut StateVector, layout: &RegisterLayout, m: usize) -> Result<()> {
    if !state.register_is_ground(layout.psi_index) {
        return Err(Error::RegisterNotGround {
            start: layout.psi_index.start,
        });
    }
    let column = build_v_column(m);
    if column.len() != layout.psi_index.dim() {
        return Err(Error::AmplitudeShape {
            expected: layout.psi_index.dim(),
            actual: column.len(),
        });
    }
    state.apply_register_unitary(layout.psi_index, &householder_from_e0(&column))
}

/// Binary tree of y-rotation angles. Level `l` holds `2^l` angles; node `p`
/// of level `l` splits the coordinate block `[p·d/2^l, (p+1)·d/2^l)` in half.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTree {
    pub levels: Vec<Vec<f64>>,
}

/// Angles of the uniformly controlled Ry cascade that loads `v/|v|`.
pub fn encode_angles(v: &DataPoint) -> AngleTree {
    encode_angles_raw(&v.coords)
}

pub(crate) fn encode_angles_raw(v: &[f64]) -> AngleTree {
    let d = v.len();
    debug_assert!(d.is_power_of_two() && d >= 2);
    let depth = d.trailing_zeros() as usize;
    let levels = (0..depth)
        .map(|level| {
            let block = d >> level;
            (0..1usize << level)
                .map(|p| {
                    let lo = p * block;
                    let mid = lo + block / 2;
                    if block == 2 {
                        // leaf: signed amplitudes carry the sign through atan2
                        2.0 * v[mid].atan2(v[lo])
                    } else {
                        let left = euclidean_norm(&v[lo..mid]);
                        let right = euclidean_norm(&v[mid..lo + block]);
                        2.0 * right.atan2(left)
                    }
                })
                .collect()
        })
        .collect();
    AngleTree { levels }
}

/// Applies the rotation cascade of `tree` to `data`, restricted to basis
/// states that also satisfy `condition`.
///
/// Level `l` rotates data qubit `n−1−l` (most significant first), conditioned
/// on the `l` data qubits above it reading the node index.
pub fn apply_angle_tree(
    state: &mut StateVector,
    data: QubitRange,
    tree: &AngleTree,
    condition: Controls,
) -> Result<()> {
    let n = data.len;
    for (level, angles) in tree.levels.iter().enumerate() {
        let target = data.start + n - 1 - level;
        let prefix = QubitRange::new(target + 1, level);
        for (node, &theta) in angles.iter().enumerate() {
            if theta == 0.0 {
                continue;
            }
            let ctrl = condition.register_equals(prefix, node);
            state.apply_controlled(&Gate2x2::ry(theta), target, ctrl)?;
        }
    }
    Ok(())
}

/// The QRAM oracle: for every address `j ∈ 0..=M` loads the stored vector
/// (`u` at 0, `v_{j−1}` at `j`) into the data register, conditioned on the
/// index register reading `j`.
pub fn qram_query(state: &mut StateVector, layout: &RegisterLayout, u: &DataPoint, set: &DataSet) -> Result<()> {
    set.check_point(u)?;
    if layout.data.dim() != set.dim() || layout.psi_index.dim() <= set.len() {
        return Err(Error::DimensionMismatch {
            point: layout.data.dim(),
            set: set.dim(),
        });
    }
    if !state.register_is_ground(layout.data) {
        return Err(Error::RegisterNotGround {
            start: layout.data.start,
        });
    }
    let stored = std::iter::once(u).chain(set.points());
    for (address, v) in stored.enumerate() {
        let condition = Controls::none().register_equals(layout.psi_index, address);
        apply_angle_tree(state, layout.data, &encode_angles(v), condition)?;
    }
    Ok(())
}

/// Norm-register amplitudes: `|u|/√Z` at 0 and `−|v_j|/√(MZ)` at `j`.
pub fn phi_amplitudes(u: &DataPoint, set: &DataSet) -> Result<Vec<f64>> {
    let z = compute_z(u, set)?.value();
    let scale = z.sqrt().recip();
    let m_sqrt = (set.len() as f64).sqrt();
    let mut amps = vec![0.0; 1 << index_qubits(set.len())];
    amps[0] = u.norm * scale;
    for (slot, v) in amps[1..].iter_mut().zip(set.points()) {
        *slot = -v.norm * scale / m_sqrt;
    }
    Ok(amps)
}

/// Loads [`phi_amplitudes`] into the (ground) norm register.
pub fn build_phi(state: &mut StateVector, layout: &RegisterLayout, u: &DataPoint, set: &DataSet) -> Result<()> {
    let amps: Vec<Complex64> = phi_amplitudes(u, set)?
        .into_iter()
        .map(Complex64::from)
        .collect();
    state.set_amplitudes(layout.phi, &amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn table1() -> Vec<Vec<f64>> {
        vec![
            vec![0.5, 0.1],
            vec![0.6, 1.4],
            vec![1.4, 0.4],
            vec![0.2, 0.4],
            vec![0.1, 0.5],
            vec![1.3, 0.4],
            vec![1.1, 0.4],
            vec![1.2, 0.8],
        ]
    }

    fn experiment1() -> (DataPoint, DataSet) {
        let set = prepare_dataset(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        let u = set.query_point(&[2.0, 2.0]).unwrap();
        (u, set)
    }

    #[test]
    fn prepare_table1() {
        let set = prepare_dataset(&table1()).unwrap();
        assert_eq!((set.len(), set.dim(), set.original_dim()), (8, 2, 2));
        let sum: f64 = set.points().iter().map(|p| p.norm() * p.norm()).sum();
        assert!((sum - 10.46).abs() < 1e-12);
    }

    #[test]
    fn prepare_pads_to_power_of_two() {
        let set = prepare_dataset(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(set.point(0).coords(), &[1.0, 2.0, 3.0, 0.0]);
        assert_eq!(set.dim(), 4);
        let set = prepare_dataset(&[vec![5.0]]).unwrap();
        assert_eq!(set.point(0).coords(), &[5.0, 0.0]);
    }

    #[test]
    fn prepare_errors_name_the_row() {
        assert_eq!(prepare_dataset(&[vec![0.0, 0.0]]), Err(Error::ZeroVector { row: 0 }));
        assert_eq!(prepare_dataset(&[]), Err(Error::EmptyInput));
        assert_eq!(
            prepare_dataset(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::RaggedRow { row: 1, expected: 2, found: 1 })
        );
        assert_eq!(
            prepare_dataset(&[vec![1.0, 2.0], vec![1.0, f64::NAN]]),
            Err(Error::NonFinite { row: 1, column: 1 })
        );
    }

    #[test]
    fn layout_sizes() {
        let l = RegisterLayout::new(8, 4);
        assert_eq!(l.psi_index.len, 4);
        assert_eq!(l.data.len, 2);
        assert_eq!(l.total_qubits, 11);
        let l = RegisterLayout::new(1, 2);
        assert_eq!((l.psi_index.len, l.total_qubits), (1, 4));
        let l = RegisterLayout::new(5, 8);
        assert_eq!(l.psi_index.len, 3);
        // registers tile 0..total without gaps
        assert_eq!(l.psi_index.start, 1);
        assert_eq!(l.data.start, l.psi_index.end());
        assert_eq!(l.phi.start, l.data.end());
        assert_eq!(l.total_qubits, l.phi.end());
    }

    #[test]
    fn z_values() {
        let set = prepare_dataset(&table1()).unwrap();
        let u = set.point(6);
        assert!((compute_z(u, &set).unwrap().value() - 2.6775).abs() < 1e-12);

        let (u, set) = experiment1();
        assert!((compute_z(&u, &set).unwrap().value() - 16.0).abs() < 1e-12);

        let other = prepare_dataset(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(compute_z(other.point(0), &set).is_err());
    }

    #[test]
    fn v_column() {
        let h = FRAC_1_SQRT_2;
        let col = build_v_column(1);
        assert!(col.len() == 2 && col.iter().all(|x| (x - h).abs() < 1e-15));
        let col = build_v_column(2);
        assert_eq!(col.len(), 4);
        assert!((col[0] - h).abs() < 1e-15 && (col[1] - 0.5).abs() < 1e-15);
        assert!((col[2] - 0.5).abs() < 1e-15 && col[3] == 0.0);
        for m in 1..40 {
            let col = build_v_column(m);
            let norm: f64 = col.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            assert_eq!(col.iter().filter(|x| **x != 0.0).count(), m + 1);
        }
    }

    #[test]
    fn psi0_householder_matches_direct_load() {
        for m in [1usize, 2, 3, 5, 8, 13] {
            let layout = RegisterLayout::new(m, 2);
            let mut a = StateVector::new(layout.total_qubits).unwrap();
            build_psi0(&mut a, &layout, m).unwrap();
            let mut b = StateVector::new(layout.total_qubits).unwrap();
            let col: Vec<Complex64> = build_v_column(m).into_iter().map(Complex64::from).collect();
            b.set_amplitudes(layout.psi_index, &col).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < 1e-10);
            }
            let p0: f64 = (0..a.amplitudes().len())
                .filter(|&i| layout.psi_index.read(i) == 0)
                .map(|i| a.amplitude(i).norm_sqr())
                .sum();
            assert!((p0 - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn psi0_m8_amplitudes() {
        let layout = RegisterLayout::new(8, 2);
        let mut s = StateVector::new(layout.total_qubits).unwrap();
        build_psi0(&mut s, &layout, 8).unwrap();
        let at = |j: usize| s.amplitude(j << layout.psi_index.start).re;
        assert!((at(0) - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((1..=8).all(|j| (at(j) - 0.25).abs() < 1e-12));
        assert!((9..16).all(|j| at(j).abs() < 1e-12));
        assert!(build_psi0(&mut s, &layout, 8).is_err());
    }

    #[test]
    fn angle_examples() {
        let single = |v: [f64; 2]| encode_angles_raw(&v).levels[0][0];
        assert_eq!(single([1.0, 0.0]), 0.0);
        assert!((single([0.0, 1.0]) - PI).abs() < 1e-15);
        let theta = single([3.0, 4.0]);
        assert!((theta - 1.8546).abs() < 1e-4);
        assert!(((theta / 2.0).cos() - 0.6).abs() < 1e-15);
        assert!(((theta / 2.0).sin() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn angle_tree_loads_signed_vectors() {
        let v = [0.3, -1.2, 0.0, 0.0, -0.7, 0.25, 1.1, -0.05];
        let norm = euclidean_norm(&v);
        let mut s = StateVector::new(3).unwrap();
        apply_angle_tree(&mut s, QubitRange::new(0, 3), &encode_angles_raw(&v), Controls::none()).unwrap();
        for (i, x) in v.iter().enumerate() {
            assert!((s.amplitude(i).re - x / norm).abs() < 1e-12, "coord {i}");
            assert!(s.amplitude(i).im.abs() < 1e-15);
        }
    }

    #[test]
    fn qram_experiment1_factorizes() {
        let (u, set) = experiment1();
        let layout = set.layout();
        let mut s = StateVector::new(layout.total_qubits).unwrap();
        build_psi0(&mut s, &layout, set.len()).unwrap();
        qram_query(&mut s, &layout, &u, &set).unwrap();
        // data qubit reads |+> regardless of the index
        for i in 0..s.amplitudes().len() {
            if layout.data.read(i) == 1 {
                let partner = i & !layout.data.mask();
                assert!((s.amplitude(i) - s.amplitude(partner)).norm() < 1e-12);
            }
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qram_first_address_overlap() {
        let set = prepare_dataset(&table1()).unwrap();
        let u = set.query_point(&[0.9, -0.3]).unwrap();
        let layout = set.layout();
        let mut s = StateVector::new(layout.total_qubits).unwrap();
        build_psi0(&mut s, &layout, set.len()).unwrap();
        qram_query(&mut s, &layout, &u, &set).unwrap();
        let overlap: f64 = (0..layout.data.dim())
            .map(|x| s.amplitude(x << layout.data.start).re * u.coords()[x] / u.norm())
            .sum();
        assert!((overlap - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn qram_rejects_mismatched_layout() {
        let set = prepare_dataset(&table1()).unwrap();
        let layout = RegisterLayout::new(8, 4);
        let u = set.point(0).clone();
        let mut s = StateVector::new(layout.total_qubits).unwrap();
        assert!(qram_query(&mut s, &layout, &u, &set).is_err());
    }

    #[test]
    fn phi_cases() {
        let (u, set) = experiment1();
        let amps = phi_amplitudes(&u, &set).unwrap();
        let want = [FRAC_1_SQRT_2, -0.5, -0.5, 0.0];
        assert!(amps.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));

        let set = prepare_dataset(&[vec![0.4, -2.0]]).unwrap();
        let amps = phi_amplitudes(set.point(0), &set).unwrap();
        assert!((amps[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((amps[1] + FRAC_1_SQRT_2).abs() < 1e-12);

        let layout = set.layout();
        let mut s = StateVector::new(layout.total_qubits).unwrap();
        build_phi(&mut s, &layout, set.point(0), &set).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
