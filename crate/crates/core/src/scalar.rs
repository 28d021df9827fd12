use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar the whole kernel is generic over.
///
/// Each implementation carries the default tolerances used when a caller
/// does not supply one. The f64 values are the reference ones; the f32
/// values are loosened to what single precision can actually resolve on
/// nine-qubit builds.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Allowed deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
    const HERMITIAN_TOL: f64;
    /// Most negative eigenvalue still accepted as positive semidefinite.
    const PSD_TOL: f64;
    /// Allowed deviation of a squared norm or trace from its declared weight.
    const NORM_TOL: f64;
    /// LU pivots below this modulus make the determinant exactly zero.
    const PIVOT_TOL: f64;
    /// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below this.
    const JACOBI_TOL: f64;
    /// Default verdict tolerance for separability tests.
    const VERDICT_TOL: f64;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-10;
    const PSD_TOL: f64 = 1e-9;
    const NORM_TOL: f64 = 1e-9;
    const PIVOT_TOL: f64 = 1e-14;
    const JACOBI_TOL: f64 = 1e-13;
    const VERDICT_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-5;
    const NORM_TOL: f64 = 1e-5;
    const PIVOT_TOL: f64 = 1e-7;
    const JACOBI_TOL: f64 = 1e-6;
    const VERDICT_TOL: f64 = 1e-5;
}
