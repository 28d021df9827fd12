//! Serialized forms. Matrices are nested arrays of `[re, im]` with the
//! label order written next to them.

use serde::Serialize;
use wbroadcast::{CMatrixF64, PptResult, PptScope, QubitLabel, WStructure};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixJson {
    pub labels: Vec<String>,
    /// Trace of an operator, squared norm of a ket.
    pub weight: f64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn new(labels: &[QubitLabel], m: &CMatrixF64) -> Self {
        let weight = if m.is_square() {
            m.trace().map(|t| t.re).unwrap_or(0.0)
        } else {
            (0..m.rows()).map(|r| m.get(r, 0).norm_sqr()).sum()
        };
        Self {
            labels: label_strings(labels),
            weight: clean(weight),
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|r| {
                    (0..m.cols())
                        .map(|c| {
                            let z = m.get(r, c);
                            [clean(z.re), clean(z.im)]
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Folds negative zero into zero so serialized output does not depend on
/// the sign of a vanishing rounding error.
pub fn clean(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

pub fn label_strings(labels: &[QubitLabel]) -> Vec<String> {
    labels.iter().map(|l| l.to_string()).collect()
}

pub fn label_string(labels: &[QubitLabel]) -> String {
    labels.iter().map(|l| l.as_str()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PptJson {
    /// `left|right`, e.g. `1|56`; the right side is transposed.
    pub cut: String,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub negativity: f64,
    pub inseparable: bool,
    pub scope: &'static str,
}

impl PptJson {
    pub fn new(left: &[QubitLabel], right: &[QubitLabel], r: &PptResult<f64>) -> Self {
        Self {
            cut: format!("{}|{}", label_string(left), label_string(right)),
            eigenvalues: r.eigenvalues.iter().copied().map(clean).collect(),
            min_eigenvalue: clean(r.min_eigenvalue),
            negativity: clean(r.negativity),
            inseparable: r.inseparable,
            scope: match r.scope {
                PptScope::NecessaryAndSufficient => "necessary-and-sufficient",
                PptScope::NptDetectionOnly => "npt-detection-only",
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coherences {
    #[serde(rename = "001_010")]
    pub c001_010: f64,
    #[serde(rename = "001_100")]
    pub c001_100: f64,
    #[serde(rename = "010_100")]
    pub c010_100: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WStructureJson {
    pub subspace_weight: f64,
    pub restriction_basis: [&'static str; 3],
    pub restriction: Vec<Vec<[f64; 2]>>,
    pub eigenvalues: Vec<f64>,
    pub numerical_rank: usize,
    pub rank1_w_type: bool,
    pub coherences: Coherences,
}

impl From<&WStructure<f64>> for WStructureJson {
    fn from(w: &WStructure<f64>) -> Self {
        Self {
            subspace_weight: clean(w.subspace_weight),
            restriction_basis: ["100", "010", "001"],
            restriction: MatrixJson::new(&[], &w.restriction).entries,
            eigenvalues: w.eigenvalues.iter().copied().map(clean).collect(),
            numerical_rank: w.numerical_rank,
            rank1_w_type: w.rank1_w_type,
            coherences: Coherences {
                c001_010: clean(w.coherence_001_010),
                c001_100: clean(w.coherence_001_100),
                c010_100: clean(w.coherence_010_100),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalPairJson {
    pub pair: String,
    pub w3: f64,
    pub w4: f64,
    pub peres_horodecki_inseparable: bool,
    pub ppt: PptJson,
}
