//! Labeled pure states and density matrices.
//!
//! Basis indices are big-endian in the label order: the first label is the
//! most significant bit, so the ket `|b0 b1 ... b(n-1)>` on labels
//! `(l0, l1, ...)` lives at index `b0 * 2^(n-1) + ... + b(n-1)`. All index
//! arithmetic goes through [`IndexMap`].
//!
//! States may be subnormalized. `weight` is the squared norm of a pure
//! state and the trace of a density matrix; post-selected branches keep
//! their probability there.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitLabel {
    Data1,
    Data2,
    Data3,
    Data4,
    Data5,
    Data6,
    MachineA,
    MachineB,
    MachineC,
}

impl QubitLabel {
    pub const DATA: [QubitLabel; 6] = [
        QubitLabel::Data1,
        QubitLabel::Data2,
        QubitLabel::Data3,
        QubitLabel::Data4,
        QubitLabel::Data5,
        QubitLabel::Data6,
    ];
    pub const MACHINES: [QubitLabel; 3] = [QubitLabel::MachineA, QubitLabel::MachineB, QubitLabel::MachineC];

    pub fn is_machine(self) -> bool {
        matches!(self, QubitLabel::MachineA | QubitLabel::MachineB | QubitLabel::MachineC)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QubitLabel::Data1 => "1",
            QubitLabel::Data2 => "2",
            QubitLabel::Data3 => "3",
            QubitLabel::Data4 => "4",
            QubitLabel::Data5 => "5",
            QubitLabel::Data6 => "6",
            QubitLabel::MachineA => "A",
            QubitLabel::MachineB => "B",
            QubitLabel::MachineC => "C",
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QubitLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "1" => QubitLabel::Data1,
            "2" => QubitLabel::Data2,
            "3" => QubitLabel::Data3,
            "4" => QubitLabel::Data4,
            "5" => QubitLabel::Data5,
            "6" => QubitLabel::Data6,
            "A" => QubitLabel::MachineA,
            "B" => QubitLabel::MachineB,
            "C" => QubitLabel::MachineC,
            _ => return Err(format!("unknown qubit label {s:?}")),
        })
    }
}

/// Shorthand for a list of labels written as a string such as `"156"` or
/// `"14A"`. Panics on unknown characters; meant for constants and tests.
pub fn labels(spec: &str) -> Vec<QubitLabel> {
    spec.chars()
        .map(|ch| ch.to_string().parse().expect("valid qubit label"))
        .collect()
}

fn check_distinct(labels: &[QubitLabel]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}

fn position(labels: &[QubitLabel], l: QubitLabel) -> Result<usize> {
    labels.iter().position(|&x| x == l).ok_or(Error::UnknownLabel(l))
}

/// Bit bookkeeping for big-endian indices over `n` qubits.
#[derive(Debug, Clone, Copy)]
pub struct IndexMap {
    n: usize,
}

impl IndexMap {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(self) -> usize {
        1 << self.n
    }

    /// Bit of qubit `pos` (0 = leftmost) in `index`.
    pub fn bit(self, index: usize, pos: usize) -> usize {
        (index >> (self.n - 1 - pos)) & 1
    }

    /// Mask selecting qubit `pos`.
    pub fn mask(self, pos: usize) -> usize {
        1 << (self.n - 1 - pos)
    }

    /// Index of the ket whose bits, leftmost first, are `bits`.
    pub fn index_of(bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b as usize & 1))
    }

    /// For every value of the sub-register at `positions` (big-endian in
    /// that order), the bits it would set in a full index.
    pub fn scatter_table(self, positions: &[usize]) -> Vec<usize> {
        let k = positions.len();
        (0..1usize << k)
            .map(|v| {
                positions
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| (v >> (k - 1 - j)) & 1 == 1)
                    .fold(0, |acc, (_, &p)| acc | self.mask(p))
            })
            .collect()
    }

    /// Maps each index in the `new_order` arrangement to the index of the
    /// same basis ket in the current arrangement, where `new_order[j]` is
    /// the current position of the qubit placed at position `j`.
    pub fn permutation_table(self, new_order: &[usize]) -> Vec<usize> {
        let target = IndexMap::new(self.n);
        (0..self.dim())
            .map(|new_idx| {
                new_order
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| target.bit(new_idx, *j) == 1)
                    .fold(0, |acc, (_, &old)| acc | self.mask(old))
            })
            .collect()
    }
}

/// Real amplitudes of a W-type input, `alpha|001> + beta|010> + gamma|100>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WParams<T> {
    alpha: T,
    beta: T,
    gamma: T,
}

impl<T: Real> WParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !v.is_finite() {
                return Err(Error::NonFiniteParameter {
                    name,
                    value: v.to_f64_lossy(),
                });
            }
        }
        let norm_sq = alpha * alpha + beta * beta + gamma * gamma;
        if (norm_sq - T::one()).abs() > T::lit(T::NORM_TOL) {
            return Err(Error::NotNormalized {
                norm_sq: norm_sq.to_f64_lossy(),
            });
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// All three amplitudes equal to `1/sqrt(3)`.
    pub fn uniform() -> Self {
        let a = T::one() / T::lit(3.0).sqrt();
        Self {
            alpha: a,
            beta: a,
            gamma: a,
        }
    }

    /// Derives `gamma = sqrt(1 - alpha^2 - beta^2)` on the non-negative branch.
    pub fn from_alpha_beta(alpha: T, beta: T) -> Result<Self> {
        let rest = T::one() - alpha * alpha - beta * beta;
        let tol = T::lit(T::NORM_TOL);
        if rest < -tol {
            return Err(Error::NotNormalized {
                norm_sq: (alpha * alpha + beta * beta).to_f64_lossy(),
            });
        }
        Self::new(alpha, beta, rest.max(T::zero()).sqrt())
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPureState<T> {
    labels: Vec<QubitLabel>,
    amplitudes: Vec<Complex<T>>,
    weight: T,
}

impl<T: Real> LabeledPureState<T> {
    /// Accepts any nonzero state whose squared norm does not exceed one.
    pub fn new(labels: Vec<QubitLabel>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_distinct(&labels)?;
        let expected = 1usize << labels.len();
        if labels.is_empty() || amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                qubits: labels.len(),
                expected,
                found: amplitudes.len(),
            });
        }
        if let Some(k) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        let weight = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if weight <= T::zero() || weight > T::one() + T::lit(T::NORM_TOL) {
            return Err(Error::InvalidWeight {
                weight: weight.to_f64_lossy(),
            });
        }
        Ok(Self {
            labels,
            amplitudes,
            weight,
        })
    }

    /// Computational basis ket; `bits` are given in label order.
    pub fn basis(labels: Vec<QubitLabel>, bits: &[u8]) -> Result<Self> {
        let mut amps = vec![Complex::zero(); 1 << labels.len()];
        if bits.len() != labels.len() {
            return Err(Error::WrongQubitCount {
                expected: labels.len(),
                found: bits.len(),
            });
        }
        amps[IndexMap::index_of(bits)] = Complex::new(T::one(), T::zero());
        Self::new(labels, amps)
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<QubitLabel>, amplitudes: Vec<Complex<T>>) -> Self {
        let weight = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        Self {
            labels,
            amplitudes,
            weight,
        }
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    /// Amplitude of the basis ket with the given bits (in label order).
    pub fn amplitude(&self, bits: &[u8]) -> Complex<T> {
        self.amplitudes[IndexMap::index_of(bits)]
    }

    pub fn normalized(&self) -> Self {
        let s = self.weight.sqrt();
        Self {
            labels: self.labels.clone(),
            amplitudes: self.amplitudes.iter().map(|&z| z / s).collect(),
            weight: T::one(),
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_distinct(&labels)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Ok(Self::from_parts_unchecked(labels, amplitudes))
    }

    /// Reorders qubits so that `new_order` becomes the label order.
    pub fn relabel(&self, new_order: &[QubitLabel]) -> Result<Self> {
        let table = permutation(&self.labels, new_order)?;
        let amplitudes = table.iter().map(|&old| self.amplitudes[old]).collect();
        Ok(Self {
            labels: new_order.to_vec(),
            amplitudes,
            weight: self.weight,
        })
    }

    /// Projects the listed qubits onto fixed basis values and drops them.
    ///
    /// The result is left unnormalized; its weight is the probability of
    /// the projection. Returns `None` when that weight is below `cutoff`.
    pub fn project(&self, fixed: &[(QubitLabel, u8)], cutoff: T) -> Result<Option<Self>> {
        let n = self.labels.len();
        let map = IndexMap::new(n);
        let mut fixed_bits = 0usize;
        let mut fixed_pos = Vec::with_capacity(fixed.len());
        for &(l, b) in fixed {
            let p = position(&self.labels, l)?;
            if fixed_pos.contains(&p) {
                return Err(Error::DuplicateLabel(l));
            }
            fixed_pos.push(p);
            if b & 1 == 1 {
                fixed_bits |= map.mask(p);
            }
        }
        let keep_pos: Vec<usize> = (0..n).filter(|p| !fixed_pos.contains(p)).collect();
        if keep_pos.is_empty() {
            return Err(Error::EmptySelection);
        }
        let scatter = map.scatter_table(&keep_pos);
        let amplitudes: Vec<Complex<T>> = scatter.iter().map(|&s| self.amplitudes[s | fixed_bits]).collect();
        let out = Self::from_parts_unchecked(keep_pos.iter().map(|&p| self.labels[p]).collect(), amplitudes);
        Ok((out.weight >= cutoff && out.weight > T::zero()).then_some(out))
    }
}

/// Index table for reordering `current` into `new_order`.
fn permutation(current: &[QubitLabel], new_order: &[QubitLabel]) -> Result<Vec<usize>> {
    if new_order.len() != current.len() {
        return Err(Error::NotAPermutation);
    }
    let mut old_pos = Vec::with_capacity(new_order.len());
    for &l in new_order {
        let p = current.iter().position(|&x| x == l).ok_or(Error::NotAPermutation)?;
        if old_pos.contains(&p) {
            return Err(Error::NotAPermutation);
        }
        old_pos.push(p);
    }
    Ok(IndexMap::new(current.len()).permutation_table(&old_pos))
}

/// `w_state(p)` on `(Data1, Data2, Data3)`.
pub fn w_state<T: Real>(p: &WParams<T>) -> LabeledPureState<T> {
    let mut amps = vec![Complex::zero(); 8];
    amps[0b001] = Complex::new(p.alpha, T::zero());
    amps[0b010] = Complex::new(p.beta, T::zero());
    amps[0b100] = Complex::new(p.gamma, T::zero());
    LabeledPureState::from_parts_unchecked(labels("123"), amps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDensityMatrix<T> {
    labels: Vec<QubitLabel>,
    matrix: CMatrix<T>,
    weight: T,
}

impl<T: Real> LabeledDensityMatrix<T> {
    /// Validating constructor: Hermitian, positive semidefinite and with
    /// trace in `(0, 1]`. The weight is taken from the trace.
    pub fn from_matrix(labels: Vec<QubitLabel>, matrix: CMatrix<T>) -> Result<Self> {
        check_distinct(&labels)?;
        let dim = 1usize << labels.len();
        if labels.is_empty() || matrix.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch {
                op: "density matrix",
                left: (dim, dim),
                right: matrix.shape(),
            });
        }
        matrix.check_hermitian(T::lit(T::HERMITIAN_TOL))?;
        let weight = matrix.trace()?.re;
        if weight <= T::zero() || weight > T::one() + T::lit(T::NORM_TOL) {
            return Err(Error::InvalidWeight {
                weight: weight.to_f64_lossy(),
            });
        }
        let out = Self { labels, matrix, weight };
        out.check_psd(T::lit(T::PSD_TOL))?;
        Ok(out)
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<QubitLabel>, matrix: CMatrix<T>) -> Self {
        let weight = matrix.trace().map(|t| t.re).unwrap_or_else(|_| T::zero());
        Self { labels, matrix, weight }
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    /// `<row_bits| rho |col_bits>` with bits in label order.
    pub fn entry(&self, row_bits: &[u8], col_bits: &[u8]) -> Complex<T> {
        self.matrix
            .get(IndexMap::index_of(row_bits), IndexMap::index_of(col_bits))
    }

    pub fn normalized(&self) -> Self {
        self.scaled(T::one() / self.weight)
    }

    /// Multiplies the operator (and its weight) by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            labels: self.labels.clone(),
            matrix: self.matrix.scale(factor),
            weight: self.weight * factor,
        }
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        self.matrix.hermitian_eigenvalues(T::lit(T::HERMITIAN_TOL))
    }

    pub fn check_psd(&self, tol: T) -> Result<()> {
        let min = self.eigenvalues()?[0];
        if min < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_distinct(&labels)?;
        let matrix = self.matrix.kron(&other.matrix)?;
        Ok(Self {
            labels,
            matrix,
            weight: self.weight * other.weight,
        })
    }

    /// Probabilistic mixture `sum_i w_i rho_i` over identical label orders.
    pub fn mix(parts: &[(T, &Self)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::EmptySelection)?;
        let mut acc = CMatrix::zeros(first.matrix.rows(), first.matrix.cols());
        for (w, part) in parts {
            if part.labels != first.labels {
                return Err(Error::LabelMismatch);
            }
            acc = acc.add(&part.matrix.scale(*w))?;
        }
        Ok(Self::from_parts_unchecked(first.labels.clone(), acc))
    }

    pub fn relabel(&self, new_order: &[QubitLabel]) -> Result<Self> {
        let table = permutation(&self.labels, new_order)?;
        let matrix = CMatrix::from_fn(self.matrix.rows(), self.matrix.cols(), |r, c| {
            self.matrix.get(table[r], table[c])
        });
        Ok(Self {
            labels: new_order.to_vec(),
            matrix,
            weight: self.weight,
        })
    }

    /// Reduced operator on `keep`, in this matrix's label order. The weight
    /// is carried over unchanged.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        check_distinct(keep)?;
        for &l in keep {
            position(&self.labels, l)?;
        }
        let n = self.labels.len();
        let map = IndexMap::new(n);
        let keep_pos: Vec<usize> = (0..n).filter(|&p| keep.contains(&self.labels[p])).collect();
        let trace_pos: Vec<usize> = (0..n).filter(|&p| !keep.contains(&self.labels[p])).collect();
        let kept = map.scatter_table(&keep_pos);
        let traced = map.scatter_table(&trace_pos);
        let d = kept.len();
        let matrix = CMatrix::from_fn(d, d, |i, j| {
            traced.iter().fold(Complex::zero(), |acc, &t| {
                acc + self.matrix.get(kept[i] | t, kept[j] | t)
            })
        });
        Ok(Self {
            labels: keep_pos.iter().map(|&p| self.labels[p]).collect(),
            matrix,
            weight: self.weight,
        })
    }
}

/// `|s><s|` carrying the same labels and weight.
pub fn density_of<T: Real>(s: &LabeledPureState<T>) -> LabeledDensityMatrix<T> {
    LabeledDensityMatrix {
        labels: s.labels.clone(),
        matrix: CMatrix::outer(&s.amplitudes),
        weight: s.weight,
    }
}

/// `<s| rho / tr(rho) |s>` for a normalized pure state on the same qubits.
pub fn fidelity_pure<T: Real>(rho: &LabeledDensityMatrix<T>, s: &LabeledPureState<T>) -> Result<T> {
    if rho.labels.len() != s.labels.len() || s.labels.iter().any(|l| !rho.labels.contains(l)) {
        return Err(Error::LabelMismatch);
    }
    if (s.weight - T::one()).abs() > T::lit(T::NORM_TOL) {
        return Err(Error::InvalidWeight {
            weight: s.weight.to_f64_lossy(),
        });
    }
    let s = s.relabel(&rho.labels)?;
    let d = s.amplitudes.len();
    let mut acc = Complex::<T>::zero();
    for r in 0..d {
        let left = s.amplitudes[r].conj();
        if left.is_zero() {
            continue;
        }
        for c in 0..d {
            acc += left * rho.matrix.get(r, c) * s.amplitudes[c];
        }
    }
    Ok((acc.re / rho.weight).max(T::zero()).min(T::one()))
}
