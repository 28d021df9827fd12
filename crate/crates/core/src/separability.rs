//! Partial transposition and the separability verdicts built on it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::state::{IndexMap, LabeledDensityMatrix, QubitLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<QubitLabel>,
    pub right: Vec<QubitLabel>,
}

impl Bipartition {
    pub fn new(left: Vec<QubitLabel>, right: Vec<QubitLabel>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidBipartition("both sides must be nonempty"));
        }
        if left.iter().any(|l| right.contains(l)) {
            return Err(Error::InvalidBipartition("sides overlap"));
        }
        Ok(Self { left, right })
    }

    /// `{label} | everything else` for the given state labels.
    pub fn single(label: QubitLabel, all: &[QubitLabel]) -> Result<Self> {
        if !all.contains(&label) {
            return Err(Error::UnknownLabel(label));
        }
        Self::new(vec![label], all.iter().copied().filter(|&l| l != label).collect())
    }

    fn check_covers(&self, labels: &[QubitLabel]) -> Result<()> {
        let total = self.left.len() + self.right.len();
        if total != labels.len() || !labels.iter().all(|l| self.left.contains(l) || self.right.contains(l)) {
            return Err(Error::InvalidBipartition("sides must cover exactly the state's qubits"));
        }
        Ok(())
    }
}

/// What a PPT verdict certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptScope {
    /// Two qubits: positivity of the partial transpose is equivalent to separability.
    NecessaryAndSufficient,
    /// Larger systems: a negative eigenvalue proves entanglement across the
    /// cut, a positive spectrum proves nothing.
    NptDetectionOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PptResult<T> {
    pub eigenvalues: Vec<T>,
    pub min_eigenvalue: T,
    /// Sum of the magnitudes of the negative eigenvalues.
    pub negativity: T,
    pub inseparable: bool,
    pub scope: PptScope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeresHorodeckiResult<T> {
    pub w3: T,
    pub w4: T,
    pub inseparable: bool,
}

/// Exchanges row and column indices of the `transposed` qubits.
pub fn partial_transpose<T: Real>(rho: &LabeledDensityMatrix<T>, transposed: &[QubitLabel]) -> Result<CMatrix<T>> {
    let n = rho.num_qubits();
    let map = IndexMap::new(n);
    let mut mask = 0usize;
    for &l in transposed {
        let p = rho
            .labels()
            .iter()
            .position(|&x| x == l)
            .ok_or(Error::UnknownLabel(l))?;
        mask |= map.mask(p);
    }
    let m = rho.matrix();
    Ok(CMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let swap = (r ^ c) & mask;
        m.get(r ^ swap, c ^ swap)
    }))
}

/// PPT test of the normalized state across `cut`, transposing `cut.right`.
pub fn ppt<T: Real>(rho: &LabeledDensityMatrix<T>, cut: &Bipartition, tol: T) -> Result<PptResult<T>> {
    cut.check_covers(rho.labels())?;
    let normalized = rho.normalized();
    let pt = partial_transpose(&normalized, &cut.right)?;
    let eigenvalues = pt.hermitian_eigenvalues(T::lit(T::HERMITIAN_TOL))?;
    let min_eigenvalue = eigenvalues[0];
    let inseparable = min_eigenvalue < -tol;
    let negativity = if inseparable {
        eigenvalues
            .iter()
            .filter(|&&e| e < T::zero())
            .fold(T::zero(), |acc, &e| acc - e)
    } else {
        T::zero()
    };
    let scope = if rho.num_qubits() == 2 {
        PptScope::NecessaryAndSufficient
    } else {
        PptScope::NptDetectionOnly
    };
    Ok(PptResult {
        eigenvalues,
        min_eigenvalue,
        negativity,
        inseparable,
        scope,
    })
}

/// The two determinants of the two-qubit Peres-Horodecki test, arranged
/// from `rho_{m mu, n nu} = <m mu| rho |n nu>` (m: first label, mu: second):
///
/// ```text
/// W3 = | r00,00 r01,00 r00,10 |      W4 = | r00,00 r01,00 r00,10 r01,10 |
///      | r00,01 r01,01 r00,11 |           | r00,01 r01,01 r00,11 r01,11 |
///      | r10,00 r11,00 r10,10 |           | r10,00 r11,00 r10,10 r11,10 |
///                                         | r10,01 r11,01 r10,11 r11,11 |
/// ```
///
/// Evaluated on the normalized state.
pub fn peres_horodecki<T: Real>(rho: &LabeledDensityMatrix<T>, tol: T) -> Result<PeresHorodeckiResult<T>> {
    if rho.num_qubits() != 2 {
        return Err(Error::WrongQubitCount {
            expected: 2,
            found: rho.num_qubits(),
        });
    }
    let rho = rho.normalized();
    let e = |m: u8, mu: u8, n: u8, nu: u8| rho.entry(&[m, mu], &[n, nu]);
    let w4_rows: [[Complex<T>; 4]; 4] = [
        [e(0, 0, 0, 0), e(0, 1, 0, 0), e(0, 0, 1, 0), e(0, 1, 1, 0)],
        [e(0, 0, 0, 1), e(0, 1, 0, 1), e(0, 0, 1, 1), e(0, 1, 1, 1)],
        [e(1, 0, 0, 0), e(1, 1, 0, 0), e(1, 0, 1, 0), e(1, 1, 1, 0)],
        [e(1, 0, 0, 1), e(1, 1, 0, 1), e(1, 0, 1, 1), e(1, 1, 1, 1)],
    ];
    let w4m = CMatrix::from_rows(&w4_rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())?;
    let w3m = CMatrix::from_rows(&w4_rows[..3].iter().map(|r| r[..3].to_vec()).collect::<Vec<_>>())?;
    // Both arrays are Hermitian, so the determinants are real.
    let w3 = w3m.determinant()?.re;
    let w4 = w4m.determinant()?.re;
    Ok(PeresHorodeckiResult {
        w3,
        w4,
        inseparable: w3 < -tol || w4 < -tol,
    })
}

/// Single-excitation content of a three-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct WStructure<T> {
    /// Probability of the span of `|100>, |010>, |001>`.
    pub subspace_weight: T,
    /// Restriction of the normalized state to that span, basis ordered by
    /// which qubit is excited: `|100>, |010>, |001>`.
    pub restriction: CMatrix<T>,
    /// Eigenvalues of `restriction`, ascending.
    pub eigenvalues: Vec<T>,
    /// Eigenvalues above `tol` times the largest one.
    pub numerical_rank: usize,
    /// Restriction is rank one and carries the whole state.
    pub rank1_w_type: bool,
    /// `|rho_{001,010}|`
    pub coherence_001_010: T,
    /// `|rho_{001,100}|`
    pub coherence_001_100: T,
    /// `|rho_{010,100}|`
    pub coherence_010_100: T,
}

pub fn w_structure<T: Real>(rho: &LabeledDensityMatrix<T>, tol: T) -> Result<WStructure<T>> {
    if rho.num_qubits() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            found: rho.num_qubits(),
        });
    }
    let rho = rho.normalized();
    let basis = [0b100usize, 0b010, 0b001];
    let m = rho.matrix();
    let restriction = CMatrix::from_fn(3, 3, |r, c| m.get(basis[r], basis[c]));
    let subspace_weight = restriction.trace()?.re;
    let eigenvalues = restriction.hermitian_eigenvalues(T::lit(T::HERMITIAN_TOL))?;
    let largest = eigenvalues[2];
    let numerical_rank = if largest > T::zero() {
        eigenvalues.iter().filter(|&&e| e > tol * largest).count()
    } else {
        0
    };
    let rank1_w_type = largest > T::zero() && eigenvalues[1] < tol * largest && subspace_weight >= T::one() - tol;
    Ok(WStructure {
        subspace_weight,
        restriction,
        eigenvalues,
        numerical_rank,
        rank1_w_type,
        coherence_001_010: m.get(0b001, 0b010).norm(),
        coherence_001_100: m.get(0b001, 0b100).norm(),
        coherence_010_100: m.get(0b010, 0b100).norm(),
    })
}

/// PPT across `q1|q2q3`, `q2|q1q3`, `q3|q1q2`, with `q1, q2, q3` the state's
/// labels in order.
pub fn bipartite_cuts<T: Real>(rho: &LabeledDensityMatrix<T>, tol: T) -> Result<[PptResult<T>; 3]> {
    if rho.num_qubits() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            found: rho.num_qubits(),
        });
    }
    let labels = rho.labels();
    let cut = |i: usize| -> Result<PptResult<T>> { ppt(rho, &Bipartition::single(labels[i], labels)?, tol) };
    Ok([cut(0)?, cut(1)?, cut(2)?])
}
