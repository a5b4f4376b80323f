//! Dense statevector simulator.
//!
//! Basis convention: qubit `q` is bit `q` of the amplitude index, bit 0 least
//! significant. A register is a contiguous [`QubitRange`]; its value inside a
//! basis index is read little-endian from `start`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default resource guard: 2^26 complex doubles is 1 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Deviation of the squared norm from 1 that is treated as a simulator bug.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-8;

/// Accepted deviation of user supplied amplitudes from unit norm.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A contiguous block of qubits `start..start + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitRange {
    pub start: usize,
    pub len: usize,
}

impl QubitRange {
    pub const fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    pub const fn end(&self) -> usize {
        self.start + self.len
    }

    /// Number of basis states spanned by the register.
    pub const fn dim(&self) -> usize {
        1 << self.len
    }

    pub fn contains(&self, qubit: usize) -> bool {
        (self.start..self.end()).contains(&qubit)
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + Clone {
        self.start..self.end()
    }

    /// Bit mask of the register inside a basis index.
    pub const fn mask(&self) -> usize {
        ((1usize << self.len) - 1) << self.start
    }

    /// Value held by the register in basis index `index`.
    pub const fn read(&self, index: usize) -> usize {
        (index >> self.start) & ((1usize << self.len) - 1)
    }
}

/// A single-qubit unitary, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate2x2 {
    pub u: [[Complex64; 2]; 2],
}

impl Gate2x2 {
    pub const fn new(u00: Complex64, u01: Complex64, u10: Complex64, u11: Complex64) -> Self {
        Self {
            u: [[u00, u01], [u10, u11]],
        }
    }

    fn real(u00: f64, u01: f64, u10: f64, u11: f64) -> Self {
        Self::new(
            Complex64::from(u00),
            Complex64::from(u01),
            Complex64::from(u10),
            Complex64::from(u11),
        )
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::real(s, s, s, -s)
    }

    pub fn not() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    /// diag(1, e^{iφ}).
    pub fn phase(phi: f64) -> Self {
        Self::new(ONE, ZERO, ZERO, Complex64::from_polar(1.0, phi))
    }

    /// Rotation about the y axis: `Ry(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::real(c, -s, s, c)
    }

    pub fn adjoint(&self) -> Self {
        let u = &self.u;
        Self::new(u[0][0].conj(), u[1][0].conj(), u[0][1].conj(), u[1][1].conj())
    }

    /// Checks `U†U = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let a = self.adjoint().u;
        let u = self.u;
        (0..2).all(|r| {
            (0..2).all(|c| {
                let v = a[r][0] * u[0][c] + a[r][1] * u[1][c];
                let expect = if r == c { ONE } else { ZERO };
                (v - expect).norm() <= tol
            })
        })
    }
}

/// Condition on a basis index: the bits in `mask` must equal `value`.
///
/// Plain controls set both the mask bit and the value bit; negated controls
/// set only the mask bit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Controls {
    mask: usize,
    value: usize,
}

impl Controls {
    pub const fn none() -> Self {
        Self { mask: 0, value: 0 }
    }

    pub fn on(qubits: &[usize]) -> Self {
        let mask = qubits.iter().fold(0, |m, &q| m | (1usize << q));
        Self { mask, value: mask }
    }

    /// Requires `register` to hold exactly `value`.
    pub fn register_equals(mut self, register: QubitRange, value: usize) -> Self {
        self.mask |= register.mask();
        self.value = (self.value & !register.mask()) | ((value << register.start) & register.mask());
        self
    }

    /// Requires qubit `q` to read `bit`.
    pub fn bit(mut self, q: usize, bit: bool) -> Self {
        self.mask |= 1 << q;
        if bit {
            self.value |= 1 << q;
        } else {
            self.value &= !(1 << q);
        }
        self
    }

    pub const fn mask(&self) -> usize {
        self.mask
    }

    #[inline]
    const fn matches(&self, index: usize) -> bool {
        index & self.mask == self.value
    }
}

/// Outcome histogram of a single measured qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub zeros: u64,
    pub ones: u64,
}

impl ShotCounts {
    pub fn shots(&self) -> u64 {
        self.zeros + self.ones
    }

    pub fn fraction_zero(&self) -> f64 {
        self.zeros as f64 / self.shots() as f64
    }
}

/// Pure state of `num_qubits` qubits held as `2^num_qubits` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
    gate_count: u64,
}

impl StateVector {
    /// All-zeros state, guarded by [`DEFAULT_MAX_QUBITS`].
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::with_max_qubits(num_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn with_max_qubits(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        if num_qubits > max_qubits {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: max_qubits,
            });
        }
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[0] = ONE;
        Ok(Self {
            num_qubits,
            amps,
            gate_count: 0,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Number of gate applications so far. A controlled swap of `n` qubit
    /// pairs counts as `n` Fredkin gates.
    pub fn gate_count(&self) -> u64 {
        self.gate_count
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_register(&self, register: QubitRange) -> Result<()> {
        if register.len == 0 {
            return Ok(());
        }
        self.check_qubit(register.end() - 1)
    }

    fn check_norm(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_DRIFT_TOLERANCE || !norm_sqr.is_finite() {
            return Err(Error::NormDrift { norm_sqr });
        }
        Ok(())
    }

    /// Probability mass outside the all-zeros pattern of `register`.
    fn excited_mass(&self, register: QubitRange) -> f64 {
        let mask = register.mask();
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn register_is_ground(&self, register: QubitRange) -> bool {
        self.excited_mass(register) <= INPUT_NORM_TOLERANCE
    }

    /// Loads `amplitudes` into `register`, which must currently read all zeros.
    pub fn set_amplitudes(&mut self, register: QubitRange, amplitudes: &[Complex64]) -> Result<()> {
        self.check_register(register)?;
        if amplitudes.len() != register.dim() {
            return Err(Error::AmplitudeShape {
                expected: register.dim(),
                actual: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        if !self.register_is_ground(register) {
            return Err(Error::RegisterNotGround {
                start: register.start,
            });
        }

        let mask = register.mask();
        let mut out = vec![ZERO; self.amps.len()];
        for (base, &c) in self.amps.iter().enumerate() {
            if base & mask != 0 || c == ZERO {
                continue;
            }
            for (x, &a) in amplitudes.iter().enumerate() {
                out[base | (x << register.start)] = c * a;
            }
        }
        self.amps = out;
        self.check_norm()
    }

    /// Applies `gate` to `target` when every qubit in `controls` is 1.
    pub fn apply_gate(&mut self, gate: &Gate2x2, target: usize, controls: &[usize]) -> Result<()> {
        for &c in controls {
            self.check_qubit(c)?;
        }
        self.apply_controlled(gate, target, Controls::on(controls))
    }

    /// Applies `gate` to `target` on the subspace selected by `controls`.
    pub fn apply_controlled(&mut self, gate: &Gate2x2, target: usize, controls: Controls) -> Result<()> {
        self.check_qubit(target)?;
        let tbit = 1usize << target;
        if controls.mask & tbit != 0 {
            return Err(Error::TargetIsControl(target));
        }
        if controls.mask >> self.num_qubits != 0 {
            return Err(Error::QubitOutOfRange {
                index: usize::BITS as usize - 1 - controls.mask.leading_zeros() as usize,
                num_qubits: self.num_qubits,
            });
        }

        let [[u00, u01], [u10, u11]] = gate.u;
        for i in 0..self.amps.len() {
            if i & tbit != 0 || !controls.matches(i) {
                continue;
            }
            let j = i | tbit;
            let (a, b) = (self.amps[i], self.amps[j]);
            self.amps[i] = u00 * a + u01 * b;
            self.amps[j] = u10 * a + u11 * b;
        }
        self.gate_count += 1;
        self.check_norm()
    }

    /// Exchanges the contents of `reg_a` and `reg_b` (qubit by qubit) on every
    /// basis state where `control` is 1.
    pub fn apply_controlled_swap(&mut self, control: usize, reg_a: &[usize], reg_b: &[usize]) -> Result<()> {
        if reg_a.len() != reg_b.len() {
            return Err(Error::RegisterLengthMismatch {
                left: reg_a.len(),
                right: reg_b.len(),
            });
        }
        self.check_qubit(control)?;
        let mut seen = 1usize << control;
        for &q in reg_a.iter().chain(reg_b) {
            self.check_qubit(q)?;
            if seen & (1 << q) != 0 {
                return Err(Error::OverlappingQubits(q));
            }
            seen |= 1 << q;
        }

        let cbit = 1usize << control;
        for i in 0..self.amps.len() {
            if i & cbit == 0 {
                continue;
            }
            let j = swap_bits(i, reg_a, reg_b);
            // visit each unordered pair once
            if j > i {
                self.amps.swap(i, j);
            }
        }
        self.gate_count += reg_a.len() as u64;
        self.check_norm()
    }

    /// Applies a `2^len x 2^len` row-major unitary to `register`.
    pub fn apply_register_unitary(&mut self, register: QubitRange, matrix: &[Complex64]) -> Result<()> {
        self.check_register(register)?;
        let dim = register.dim();
        if matrix.len() != dim * dim {
            return Err(Error::AmplitudeShape {
                expected: dim * dim,
                actual: matrix.len(),
            });
        }
        let mask = register.mask();
        let mut local = vec![ZERO; dim];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (x, slot) in local.iter_mut().enumerate() {
                *slot = self.amps[base | (x << register.start)];
            }
            for r in 0..dim {
                let row = &matrix[r * dim..(r + 1) * dim];
                self.amps[base | (r << register.start)] =
                    row.iter().zip(&local).map(|(m, a)| m * a).sum();
            }
        }
        self.gate_count += 1;
        self.check_norm()
    }

    /// Exact marginal probability that `qubit` reads 0.
    pub fn prob_of_qubit_zero(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Draws `shots` measurements of `qubit` as a single seeded binomial.
    pub fn sample_counts(&self, qubit: usize, shots: u64, seed: u64) -> Result<ShotCounts> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let p = self.prob_of_qubit_zero(qubit)?.clamp(0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeros = Binomial::new(shots, p)
            .expect("probability clamped to [0, 1]")
            .sample(&mut rng);
        Ok(ShotCounts {
            zeros,
            ones: shots - zeros,
        })
    }
}

fn swap_bits(mut index: usize, reg_a: &[usize], reg_b: &[usize]) -> usize {
    for (&a, &b) in reg_a.iter().zip(reg_b) {
        let (ba, bb) = ((index >> a) & 1, (index >> b) & 1);
        if ba != bb {
            index ^= (1 << a) | (1 << b);
        }
    }
    index
}
