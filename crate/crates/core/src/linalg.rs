//! Dense complex matrices for systems of at most nine qubits.
//!
//! Entries are stored row-major. Nothing outside this module depends on
//! that: every other module goes through `get`, `from_fn` and the
//! operations below.

use std::fmt;
use std::ops::Index;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest row or column count `kron` will produce.
pub const MAX_KRON_DIM: usize = 4096;
/// Largest matrix handed to the Hermitian eigensolver.
pub const MAX_EIGEN_DIM: usize = 512;
/// Largest matrix handed to `determinant`.
pub const MAX_DET_DIM: usize = 8;
/// Sweep limit for cyclic Jacobi.
pub const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::BadLength {
                op: "from_row_major",
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadLength {
                op: "from_rows",
                rows: r,
                cols: c,
                len: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::from_row_major(r, c, rows.iter().flatten().copied().collect())
    }

    /// Real-valued convenience constructor, mostly for tests and fixtures.
    pub fn from_real_rows(rows: &[&[T]]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Complex::new(v, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Panics if `f` yields a non-finite entry; callers use it only with
    /// entries derived from validated matrices.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Complex::one() } else { Complex::zero() })
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex::new(values[r], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// Column vector.
    pub fn column(values: &[Complex<T>]) -> Result<Self> {
        Self::from_row_major(values.len(), 1, values.to_vec())
    }

    /// `v v^†` for a column of amplitudes.
    pub fn outer(values: &[Complex<T>]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| values[r] * values[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.cols + col]
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_complex(&self, factor: Complex<T>) -> Self {
        self.map(|z| z * factor)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape("add", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape("sub", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Kronecker product. Block `(i, j)` of the result is `self[i, j] * other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self.rows.checked_mul(other.rows);
        let cols = self.cols.checked_mul(other.cols);
        match (rows, cols) {
            (Some(r), Some(c)) if r <= MAX_KRON_DIM && c <= MAX_KRON_DIM => {}
            _ => {
                return Err(Error::DimensionTooLarge {
                    op: "kron",
                    dim: self
                        .rows
                        .saturating_mul(other.rows)
                        .max(self.cols.saturating_mul(other.cols)),
                    max: MAX_KRON_DIM,
                })
            }
        }
        let (br, bc) = other.shape();
        Ok(Self::from_fn(self.rows * br, self.cols * bc, |r, c| {
            self.get(r / br, c / bc) * other.get(r % br, c % bc)
        }))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = vec![Complex::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let row = &mut out[i * other.cols..(i + 1) * other.cols];
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot += a * other.get(k, j);
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    pub fn trace(&self) -> Result<Complex<T>> {
        self.require_square("trace")?;
        Ok((0..self.rows)
            .map(|i| self.get(i, i))
            .fold(Complex::zero(), |acc, z| acc + z))
    }

    /// Determinant by LU decomposition with partial pivoting.
    ///
    /// A pivot whose modulus falls below `T::PIVOT_TOL` makes the result
    /// exactly zero.
    pub fn determinant(&self) -> Result<Complex<T>> {
        self.require_square("determinant")?;
        if self.rows > MAX_DET_DIM {
            return Err(Error::DimensionTooLarge {
                op: "determinant",
                dim: self.rows,
                max: MAX_DET_DIM,
            });
        }
        let n = self.rows;
        let pivot_tol = T::lit(T::PIVOT_TOL);
        let mut lu = self.data.clone();
        let mut det = Complex::<T>::one();
        for k in 0..n {
            let (p, pmod) = (k..n)
                .map(|r| (r, lu[r * n + k].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmod < pivot_tol {
                return Ok(Complex::zero());
            }
            if p != k {
                for c in 0..n {
                    lu.swap(k * n + c, p * n + c);
                }
                det = -det;
            }
            let pivot = lu[k * n + k];
            det *= pivot;
            for r in k + 1..n {
                let factor = lu[r * n + k] / pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in k + 1..n {
                    let upd = factor * lu[k * n + c];
                    lu[r * n + c] -= upd;
                }
            }
        }
        Ok(det)
    }

    /// Largest `|a_ij - conj(a_ji)|` together with its position.
    pub fn hermitian_defect(&self) -> Result<(T, usize, usize)> {
        self.require_square("hermitian_defect")?;
        let mut worst = (T::zero(), 0, 0);
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                if d > worst.0 {
                    worst = (d, r, c);
                }
            }
        }
        Ok(worst)
    }

    pub fn check_hermitian(&self, tol: T) -> Result<()> {
        let (d, row, col) = self.hermitian_defect()?;
        if d > tol {
            return Err(Error::NotHermitian {
                asymmetry: d.to_f64_lossy(),
                row,
                col,
                tol: tol.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// All eigenvalues of a Hermitian matrix, with multiplicity, ascending.
    ///
    /// Cyclic Jacobi: sweeps over every `(p, q)` pair until the
    /// off-diagonal Frobenius mass is below `T::JACOBI_TOL` (scaled by the
    /// matrix norm when that exceeds one) or `MAX_JACOBI_SWEEPS` is reached.
    pub fn hermitian_eigenvalues(&self, tol: T) -> Result<Vec<T>> {
        self.require_square("hermitian_eigenvalues")?;
        if self.rows > MAX_EIGEN_DIM {
            return Err(Error::DimensionTooLarge {
                op: "hermitian_eigenvalues",
                dim: self.rows,
                max: MAX_EIGEN_DIM,
            });
        }
        self.check_hermitian(tol)?;
        let n = self.rows;
        // Symmetrize so round-off asymmetry below `tol` cannot leak in.
        let half = T::lit(0.5);
        let mut a: Vec<Complex<T>> = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                a.push(if r == c {
                    Complex::new(self.get(r, r).re, T::zero())
                } else {
                    (self.get(r, c) + self.get(c, r).conj()) * half
                });
            }
        }
        let norm = frob(&a).max(T::one());
        let stop = T::lit(T::JACOBI_TOL) * norm;
        let tiny = T::min_positive_value().sqrt() * norm;

        for _ in 0..MAX_JACOBI_SWEEPS {
            if off_diagonal_mass(&a, n) < stop {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let mag = apq.norm();
                    if mag <= tiny {
                        continue;
                    }
                    jacobi_rotate(&mut a, n, p, q, apq, mag);
                }
            }
        }
        let mut eig: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        Ok(eig)
    }

    pub fn frobenius_norm(&self) -> T {
        frob(&self.data)
    }

    pub fn frobenius_distance(&self, other: &Self) -> Result<T> {
        self.same_shape("frobenius_distance", other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr())
            .sqrt())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_shape("max_abs_diff", other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
    }

    /// Converts element-wise into another scalar type.
    pub fn cast<U: Real>(&self) -> CMatrix<U> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }

    fn require_square(&self, op: &'static str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    fn same_shape(&self, op: &'static str, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }
}

fn frob<T: Real>(data: &[Complex<T>]) -> T {
    data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

fn off_diagonal_mass<T: Real>(a: &[Complex<T>], n: usize) -> T {
    let mut s = T::zero();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[r * n + c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation `A <- J^† A J` annihilating `a[p, q]`.
///
/// `J = diag(1, e^{-i phi}) * R(theta)` on the `(p, q)` plane, with `phi`
/// the phase of `a[p, q]` and `R` the real symmetric Jacobi rotation.
fn jacobi_rotate<T: Real>(a: &mut [Complex<T>], n: usize, p: usize, q: usize, apq: Complex<T>, mag: T) {
    let one = T::one();
    let phase = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = if theta >= T::zero() {
        one / (theta + (theta * theta + one).sqrt())
    } else {
        -one / (-theta + (theta * theta + one).sqrt())
    };
    let c = one / (t * t + one).sqrt();
    let s = t * c;

    let jpp = Complex::new(c, T::zero());
    let jpq = Complex::new(s, T::zero());
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * jpp + akq * jqp;
        a[k * n + q] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * n + q] = Complex::zero();
    a[q * n + p] = Complex::zero();
    a[p * n + p] = Complex::new(app - t * mag, T::zero());
    a[q * n + q] = Complex::new(aqq + t * mag, T::zero());
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (row, col): (usize, usize)) -> &Complex<T> {
        &self.data[row * self.cols + col]
    }
}

impl<T: fmt::Debug> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = &self.data[r * self.cols + c];
                write!(f, "({:?}, {:?}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
