//! Operators exactly as printed for the protocol, built from their closed
//! forms rather than by simulation. These are the claims the oracle is
//! measured against.

use wbroadcast::state::labels;
use wbroadcast::{CMatrix, CMatrixF64, CloningMachineF64, Complex, QubitLabel, WParamsF64};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: &'static str,
    pub provenance: &'static str,
    pub labels: Vec<QubitLabel>,
    /// Column vector for kets, square matrix for operators.
    pub matrix: CMatrixF64,
    pub prefactor: f64,
}

fn norm_sq(m: &CloningMachineF64) -> f64 {
    m.x() * m.x() + m.y() * m.y()
}

/// `x^6 / (x^2+y^2)^3`, the weight of the all-Up branch.
pub fn all_up_prefactor(m: &CloningMachineF64) -> f64 {
    m.x().powi(6) / norm_sq(m).powi(3)
}

/// `x^4 y^2 / (x^2+y^2)^3`, the weight printed on the three-qubit W-type operators.
pub fn w_operator_prefactor(m: &CloningMachineF64) -> f64 {
    m.x().powi(4) * m.y().powi(2) / norm_sq(m).powi(3)
}

/// `x^3/(x^2+y^2)^{3/2} (alpha|000011> + beta|001100> + gamma|110000>)` on 142536.
pub fn eq6(p: &WParamsF64, m: &CloningMachineF64) -> Fixture {
    let amp = m.x().powi(3) / norm_sq(m).powf(1.5);
    let mut v = vec![Complex::new(0.0, 0.0); 64];
    v[0b000011] = Complex::new(amp * p.alpha(), 0.0);
    v[0b001100] = Complex::new(amp * p.beta(), 0.0);
    v[0b110000] = Complex::new(amp * p.gamma(), 0.0);
    Fixture {
        id: "EQ6",
        provenance: "EQ6: six-qubit ket left after all-Up machine flags, amplitude prefactor x^3/(x^2+y^2)^(3/2), qubit order 142536",
        labels: labels("142536"),
        matrix: CMatrix::column(&v).expect("finite fixture"),
        prefactor: amp,
    }
}

/// `x^4 y^2/(x^2+y^2)^3 |w><w|` with `w = alpha|001> + beta|010> + gamma|100>`.
fn w_operator(m: &CloningMachineF64, p: &WParamsF64) -> CMatrixF64 {
    let mut w = vec![Complex::new(0.0, 0.0); 8];
    w[0b001] = Complex::new(p.alpha(), 0.0);
    w[0b010] = Complex::new(p.beta(), 0.0);
    w[0b100] = Complex::new(p.gamma(), 0.0);
    CMatrix::outer(&w).scale(w_operator_prefactor(m))
}

pub fn eq7_rho156(p: &WParamsF64, m: &CloningMachineF64) -> Fixture {
    Fixture {
        id: "EQ7_RHO156",
        provenance: "EQ7: W-type operator claimed for qubits 156, prefactor x^4 y^2/(x^2+y^2)^3",
        labels: labels("156"),
        matrix: w_operator(m, p),
        prefactor: w_operator_prefactor(m),
    }
}

pub fn eq7_rho234(p: &WParamsF64, m: &CloningMachineF64) -> Fixture {
    Fixture {
        id: "EQ7_RHO234",
        provenance: "EQ7: the same W-type operator claimed for qubits 234, prefactor x^4 y^2/(x^2+y^2)^3",
        labels: labels("234"),
        matrix: w_operator(m, p),
        prefactor: w_operator_prefactor(m),
    }
}

fn pair(
    id: &'static str,
    provenance: &'static str,
    pair: &str,
    zero_weight: f64,
    one_weight: f64,
    m: &CloningMachineF64,
) -> Fixture {
    let pre = all_up_prefactor(m);
    Fixture {
        id,
        provenance,
        labels: labels(pair),
        matrix: CMatrix::diag(&[pre * zero_weight, 0.0, 0.0, pre * one_weight]),
        prefactor: pre,
    }
}

pub fn eq8_rho14(p: &WParamsF64, m: &CloningMachineF64) -> Fixture {
    let (a2, b2, c2) = (p.alpha().powi(2), p.beta().powi(2), p.gamma().powi(2));
    pair(
        "EQ8_RHO14",
        "EQ8: local pair 14 = x^6/(x^2+y^2)^3 (alpha^2|00><00| + beta^2|00><00| + gamma^2|11><11|)",
        "14",
        a2 + b2,
        c2,
        m,
    )
}

pub fn eq8_rho25(p: &WParamsF64, m: &CloningMachineF64) -> Fixture {
    let (a2, b2, c2) = (p.alpha().powi(2), p.beta().powi(2), p.gamma().powi(2));
    pair(
        "EQ8_RHO25",
        "EQ8: local pair 25 = x^6/(x^2+y^2)^3 (alpha^2|00><00| + beta^2|11><11| + gamma^2|00><00|)",
        "25",
        a2 + c2,
        b2,
        m,
    )
}

pub fn eq8_rho36(p: &WParamsF64, m: &CloningMachineF64) -> Fixture {
    let (a2, b2, c2) = (p.alpha().powi(2), p.beta().powi(2), p.gamma().powi(2));
    pair(
        "EQ8_RHO36",
        "EQ8: local pair 36 = x^6/(x^2+y^2)^3 (alpha^2|11><11| + beta^2|00><00| + gamma^2|00><00|)",
        "36",
        b2 + c2,
        a2,
        m,
    )
}

pub fn all(p: &WParamsF64, m: &CloningMachineF64) -> Vec<Fixture> {
    vec![
        eq6(p, m),
        eq7_rho156(p, m),
        eq7_rho234(p, m),
        eq8_rho14(p, m),
        eq8_rho25(p, m),
        eq8_rho36(p, m),
    ]
}
