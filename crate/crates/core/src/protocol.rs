//! Local cloning of each party's qubit, machine-flag measurement and
//! post-selection.
//!
//! Every machine register is an ordinary qubit with `Up = |0>` and
//! `Down = |1>`. The cloner maps one qubit onto (original, copy, machine):
//!
//! ```text
//! |0> -> (x|00>|Up> + y|10>|Down>) / sqrt(x^2 + y^2)
//! |1> -> (x|11>|Up> + y|01>|Down>) / sqrt(x^2 + y^2)
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::state::{density_of, w_state, IndexMap, LabeledDensityMatrix, LabeledPureState, QubitLabel, WParams};

/// Post-selected branches lighter than this carry no state.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-15;

/// Label order of the nine-qubit post-cloning state: one block of
/// (original, copy, machine) per party.
pub const CANONICAL_ORDER: [QubitLabel; 9] = [
    QubitLabel::Data1,
    QubitLabel::Data4,
    QubitLabel::MachineA,
    QubitLabel::Data2,
    QubitLabel::Data5,
    QubitLabel::MachineB,
    QubitLabel::Data3,
    QubitLabel::Data6,
    QubitLabel::MachineC,
];

/// `(original, copy, machine)` for Alice, Bob and Carol.
pub const PARTIES: [(QubitLabel, QubitLabel, QubitLabel); 3] = [
    (QubitLabel::Data1, QubitLabel::Data4, QubitLabel::MachineA),
    (QubitLabel::Data2, QubitLabel::Data5, QubitLabel::MachineB),
    (QubitLabel::Data3, QubitLabel::Data6, QubitLabel::MachineC),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloningMachine<T> {
    x: T,
    y: T,
}

impl<T: Real> CloningMachine<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || x * x + y * y <= T::lit(1e-18) {
            return Err(Error::InvalidMachine {
                x: x.to_f64_lossy(),
                y: y.to_f64_lossy(),
            });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn y(&self) -> T {
        self.y
    }

    /// Probability of a flag triple with `downs` Down results:
    /// `x^(2(3-k)) y^(2k) / (x^2 + y^2)^3`.
    pub fn outcome_probability(&self, downs: usize) -> T {
        let n = self.x * self.x + self.y * self.y;
        let up = self.x * self.x / n;
        let down = self.y * self.y / n;
        up.powi(3 - downs as i32) * down.powi(downs as i32)
    }

    /// The 8x2 isometry; rows are big-endian over (original, copy, machine).
    pub fn isometry(&self) -> CMatrix<T> {
        let norm = (self.x * self.x + self.y * self.y).sqrt();
        let x = Complex::new(self.x / norm, T::zero());
        let y = Complex::new(self.y / norm, T::zero());
        CMatrix::from_fn(8, 2, |r, c| match (r, c) {
            (0b000, 0) => x,
            (0b101, 0) => y,
            (0b110, 1) => x,
            (0b011, 1) => y,
            _ => Complex::zero(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MachineFlag {
    Up,
    Down,
}

impl MachineFlag {
    pub fn bit(self) -> u8 {
        match self {
            MachineFlag::Up => 0,
            MachineFlag::Down => 1,
        }
    }
}

/// Flags observed by Alice, Bob and Carol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub a: MachineFlag,
    pub b: MachineFlag,
    pub c: MachineFlag,
}

impl Outcome {
    /// The eight outcomes in the published table's serial order.
    pub const TABLE: [Outcome; 8] = {
        use MachineFlag::{Down as D, Up as U};
        [
            Outcome { a: U, b: U, c: U },
            Outcome { a: U, b: U, c: D },
            Outcome { a: U, b: D, c: D },
            Outcome { a: U, b: D, c: U },
            Outcome { a: D, b: U, c: U },
            Outcome { a: D, b: U, c: D },
            Outcome { a: D, b: D, c: U },
            Outcome { a: D, b: D, c: D },
        ]
    };

    pub const ALL_UP: Outcome = Outcome::TABLE[0];

    pub fn flags(self) -> [MachineFlag; 3] {
        [self.a, self.b, self.c]
    }

    pub fn downs(self) -> usize {
        self.flags().iter().filter(|f| **f == MachineFlag::Down).count()
    }

    /// 1-based row of the outcome table.
    pub fn serial(self) -> usize {
        Self::TABLE
            .iter()
            .position(|o| *o == self)
            .expect("all outcomes tabulated")
            + 1
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for flag in self.flags() {
            f.write_str(match flag {
                MachineFlag::Up => "U",
                MachineFlag::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let flags: Vec<MachineFlag> = s
            .chars()
            .map(|ch| match ch {
                'U' | 'u' => Ok(MachineFlag::Up),
                'D' | 'd' => Ok(MachineFlag::Down),
                _ => Err(Error::BadOutcome(s.to_string())),
            })
            .collect::<Result<_>>()?;
        match flags.as_slice() {
            &[a, b, c] => Ok(Outcome { a, b, c }),
            _ => Err(Error::BadOutcome(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectedBranch<T> {
    pub outcome: Outcome,
    pub probability: T,
    /// Normalized six-qubit state; `None` for negligible branches.
    pub state: Option<LabeledPureState<T>>,
}

impl<T: Real> PostSelectedBranch<T> {
    pub fn is_negligible(&self) -> bool {
        self.state.is_none()
    }
}

/// Applies the cloner to `target`, inserting `copy` and `machine` right
/// after it in the label order.
pub fn clone_qubit<T: Real>(
    s: &LabeledPureState<T>,
    target: QubitLabel,
    copy: QubitLabel,
    machine: QubitLabel,
    m: &CloningMachine<T>,
) -> Result<LabeledPureState<T>> {
    let pos = s
        .labels()
        .iter()
        .position(|&l| l == target)
        .ok_or(Error::UnknownLabel(target))?;
    for l in [copy, machine] {
        if s.labels().contains(&l) {
            return Err(Error::LabelCollision(l));
        }
    }
    if copy == machine {
        return Err(Error::DuplicateLabel(copy));
    }
    let n = s.num_qubits();
    let map = IndexMap::new(n);
    let v = m.isometry();

    let mut out_labels = s.labels().to_vec();
    out_labels.splice(pos + 1..pos + 1, [copy, machine]);

    let low_bits = n - 1 - pos;
    let low_mask = (1usize << low_bits) - 1;
    let mut out = vec![Complex::<T>::zero(); 1 << (n + 2)];
    for (idx, &amp) in s.amplitudes().iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let input = map.bit(idx, pos);
        let high = idx >> (low_bits + 1);
        let low = idx & low_mask;
        for row in 0..8 {
            let coef = v.get(row, input);
            if coef.is_zero() {
                continue;
            }
            let new_idx = (((high << 3) | row) << low_bits) | low;
            out[new_idx] += coef * amp;
        }
    }
    LabeledPureState::new(out_labels, out)
}

/// Clones every party's qubit of the W-type input, party order A, B, C.
/// The result is on [`CANONICAL_ORDER`].
pub fn run_protocol<T: Real>(p: &WParams<T>, m: &CloningMachine<T>) -> Result<LabeledPureState<T>> {
    let mut s = w_state(p);
    for (orig, copy, machine) in PARTIES {
        s = clone_qubit(&s, orig, copy, machine, m)?;
    }
    debug_assert_eq!(s.labels(), &CANONICAL_ORDER);
    Ok(s)
}

/// Projects the three machine registers onto each flag triple, in table
/// order. Branch states live on the remaining labels in `s9`'s order.
pub fn enumerate_outcomes<T: Real>(s9: &LabeledPureState<T>) -> Result<Vec<PostSelectedBranch<T>>> {
    for l in QubitLabel::MACHINES {
        if !s9.labels().contains(&l) {
            return Err(Error::MissingMachine(l));
        }
    }
    let cutoff = T::lit(NEGLIGIBLE_PROBABILITY);
    Outcome::TABLE
        .iter()
        .map(|&outcome| {
            let fixed: Vec<(QubitLabel, u8)> = QubitLabel::MACHINES
                .iter()
                .zip(outcome.flags())
                .map(|(&l, f)| (l, f.bit()))
                .collect();
            let projected = s9.project(&fixed, cutoff)?;
            Ok(match projected {
                Some(branch) => PostSelectedBranch {
                    outcome,
                    probability: branch.weight(),
                    state: Some(branch.normalized()),
                },
                None => PostSelectedBranch {
                    outcome,
                    probability: T::zero(),
                    state: None,
                },
            })
        })
        .collect()
}

/// Reduced state of a branch on `keep`. With `weighted` the operator is
/// scaled by the branch probability, which is the subnormalized form the
/// printed fixtures use.
pub fn branch_reduced<T: Real>(
    b: &PostSelectedBranch<T>,
    keep: &[QubitLabel],
    weighted: bool,
) -> Result<LabeledDensityMatrix<T>> {
    let state = b
        .state
        .as_ref()
        .ok_or_else(|| Error::NegligibleBranch(b.outcome.to_string()))?;
    for &l in keep {
        if l.is_machine() {
            return Err(Error::UnknownLabel(l));
        }
    }
    let reduced = density_of(state).partial_trace(keep)?;
    Ok(if weighted {
        reduced.scaled(b.probability)
    } else {
        reduced
    })
}
