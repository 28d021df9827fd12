//! Protocol checks against a brute-force expansion of the post-cloning
//! state written out term by term, independent of `clone_qubit`'s index
//! arithmetic.

mod common;

use std::collections::BTreeMap;

use common::*;
use rand::Rng;
use wbroadcast::state::labels;
use wbroadcast::*;

/// `(amplitude factor, original bit, copy bit, flag bit)` for one party.
fn cloner_terms(input: u8, x: f64, y: f64) -> [(f64, u8, u8, u8); 2] {
    let n = (x * x + y * y).sqrt();
    match input {
        0 => [(x / n, 0, 0, 0), (y / n, 1, 0, 1)],
        _ => [(x / n, 1, 1, 0), (y / n, 0, 1, 1)],
    }
}

/// Nine-bit strings in (1,4,A,2,5,B,3,6,C) order mapped to amplitudes.
fn expand(alpha: f64, beta: f64, gamma: f64, x: f64, y: f64) -> BTreeMap<[u8; 9], f64> {
    let mut out = BTreeMap::new();
    for (coef, bits) in [(alpha, [0, 0, 1]), (beta, [0, 1, 0]), (gamma, [1, 0, 0])] {
        for ta in cloner_terms(bits[0], x, y) {
            for tb in cloner_terms(bits[1], x, y) {
                for tc in cloner_terms(bits[2], x, y) {
                    let key = [ta.1, ta.2, ta.3, tb.1, tb.2, tb.3, tc.1, tc.2, tc.3];
                    *out.entry(key).or_insert(0.0) += coef * ta.0 * tb.0 * tc.0;
                }
            }
        }
    }
    out
}

fn key_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| acc * 2 + b as usize)
}

fn machine(x: f64, y: f64) -> CloningMachineF64 {
    CloningMachine::new(x, y).unwrap()
}

fn grid_params() -> Vec<WParamsF64> {
    let mut v = vec![];
    for i in 0..5 {
        for j in 0..5 {
            let a = -0.9 + 0.45 * i as f64;
            let b = -0.6 + 0.3 * j as f64;
            if a * a + b * b <= 1.0 {
                v.push(WParams::from_alpha_beta(a, b).unwrap());
            }
        }
    }
    v
}

fn grid_machines() -> Vec<CloningMachineF64> {
    let vals = [0.0, 0.3, 0.7, 1.0, 1.6];
    let mut v = vec![];
    for &x in &vals {
        for &y in &vals {
            if x * x + y * y > 0.0 {
                v.push(machine(x, y));
            }
        }
    }
    v
}

#[test]
fn run_protocol_matches_term_expansion() {
    let mut g = rng(5);
    for _ in 0..25 {
        let p = WParams::from_alpha_beta(g.gen_range(-0.7..0.7), g.gen_range(-0.7..0.7)).unwrap();
        let (x, y) = (g.gen_range(-2.0..2.0), g.gen_range(-2.0..2.0));
        let s9 = run_protocol(&p, &machine(x, y)).unwrap();
        assert_eq!(s9.labels(), &CANONICAL_ORDER);
        let oracle = expand(p.alpha(), p.beta(), p.gamma(), x, y);
        let mut dense = vec![0.0; 512];
        for (k, v) in &oracle {
            dense[key_index(k)] = *v;
        }
        for (i, z) in s9.amplitudes().iter().enumerate() {
            assert!((z.re - dense[i]).abs() <= 1e-12 && z.im.abs() <= 1e-15, "index {i}");
        }
        assert!((s9.weight() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn relabel_to_printed_order_matches_expansion() {
    let p = WParams::new(0.48, 0.6, 0.64).unwrap();
    let (x, y) = (0.8, 0.6);
    let s9 = run_protocol(&p, &machine(x, y)).unwrap();
    // Build order would put machines last: 1 4 2 5 3 6 A B C.
    let printed = labels("142536ABC");
    let r = s9.relabel(&printed).unwrap();
    for (k, v) in expand(p.alpha(), p.beta(), p.gamma(), x, y) {
        let reordered = [k[0], k[1], k[3], k[4], k[6], k[7], k[2], k[5], k[8]];
        assert!((r.amplitude(&reordered).re - v).abs() <= 1e-12);
    }
    assert_eq!(r.relabel(&CANONICAL_ORDER).unwrap(), s9);
}

#[test]
fn all_up_amplitude_prefactor() {
    for p in grid_params() {
        for m in grid_machines() {
            let s9 = run_protocol(&p, &m).unwrap();
            let n = m.x() * m.x() + m.y() * m.y();
            let want = p.alpha() * m.x().powi(3) / n.powf(1.5);
            // |000011> on (1,4,2,5,3,6) with all flags Up.
            let got = s9.amplitude(&[0, 0, 0, 0, 0, 0, 1, 1, 0]);
            assert!((got.re - want).abs() <= 1e-12);
        }
    }
}

#[test]
fn product_input_gives_product_output() {
    let m = machine(0.9, 0.4);
    let s9 = run_protocol(&WParams::new(1.0, 0.0, 0.0).unwrap(), &m).unwrap();
    let party = |bit: u8, l: [QubitLabel; 3]| {
        let ket = LabeledPureState::basis(vec![l[0]], &[bit]).unwrap();
        clone_qubit(&ket, l[0], l[1], l[2], &m).unwrap()
    };
    use QubitLabel::*;
    let product = party(0, [Data1, Data4, MachineA])
        .tensor(&party(0, [Data2, Data5, MachineB]))
        .unwrap()
        .tensor(&party(1, [Data3, Data6, MachineC]))
        .unwrap();
    for (a, b) in s9.amplitudes().iter().zip(product.amplitudes()) {
        assert!((a - b).norm() <= 1e-15);
    }
}

#[test]
fn perfect_copies_when_y_is_zero() {
    let p = WParams::<f64>::uniform();
    let s9 = run_protocol(&p, &machine(1.0, 0.0)).unwrap();
    let a = p.alpha();
    let nonzero: Vec<(usize, f64)> = s9
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > 0.0)
        .map(|(i, z)| (i, z.re))
        .collect();
    let idx = |bits: [u8; 9]| key_index(&bits);
    let want = vec![
        (idx([0, 0, 0, 0, 0, 0, 1, 1, 0]), a),
        (idx([0, 0, 0, 1, 1, 0, 0, 0, 0]), a),
        (idx([1, 1, 0, 0, 0, 0, 0, 0, 0]), a),
    ];
    let mut want = want;
    want.sort_by_key(|w| w.0);
    assert_eq!(nonzero.len(), 3);
    for ((i, v), (j, w)) in nonzero.iter().zip(&want) {
        assert_eq!(i, j);
        assert!((v - w).abs() < 1e-15);
    }
}

#[test]
fn clone_order_independence() {
    use QubitLabel::*;
    let p = WParams::new(0.48, -0.6, 0.64).unwrap();
    let m = machine(1.3, -0.4);
    let reference = run_protocol(&p, &m).unwrap();
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let parties = [
        (Data1, Data4, MachineA),
        (Data2, Data5, MachineB),
        (Data3, Data6, MachineC),
    ];
    for order in orders {
        let mut s = w_state(&p);
        for i in order {
            let (o, c, mm) = parties[i];
            s = clone_qubit(&s, o, c, mm, &m).unwrap();
        }
        let s = s.relabel(&CANONICAL_ORDER).unwrap();
        for (a, b) in s.amplitudes().iter().zip(reference.amplitudes()) {
            assert!((a - b).norm() <= 1e-13, "order {order:?}");
        }
    }
}

#[test]
fn outcome_probabilities_follow_closed_form() {
    for p in grid_params() {
        for m in grid_machines() {
            let branches = enumerate_outcomes(&run_protocol(&p, &m).unwrap()).unwrap();
            assert_eq!(branches.len(), 8);
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            assert!((total - 1.0).abs() <= 1e-12);
            for (b, o) in branches.iter().zip(Outcome::TABLE) {
                assert_eq!(b.outcome, o);
                let n = m.x() * m.x() + m.y() * m.y();
                let k = o.downs() as i32;
                let want = m.x().powi(2 * (3 - k)) * m.y().powi(2 * k) / n.powi(3);
                assert!((b.probability - want).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn all_up_branch_reproduces_printed_ket() {
    // alpha|000011> + beta|001100> + gamma|110000> on (1,4,2,5,3,6).
    for p in grid_params() {
        for m in grid_machines() {
            let branches = enumerate_outcomes(&run_protocol(&p, &m).unwrap()).unwrap();
            let up = &branches[0];
            if m.x() == 0.0 {
                assert!(up.is_negligible());
                continue;
            }
            let mut amps = vec![Complex::new(0.0, 0.0); 64];
            amps[0b000011] = Complex::new(p.alpha(), 0.0);
            amps[0b001100] = Complex::new(p.beta(), 0.0);
            amps[0b110000] = Complex::new(p.gamma(), 0.0);
            let fixture = LabeledPureState::new(labels("142536"), amps).unwrap();
            let state = up.state.as_ref().unwrap();
            let f = fidelity_pure(&density_of(state), &fixture).unwrap();
            assert!(f >= 1.0 - 1e-12);
            let n = m.x() * m.x() + m.y() * m.y();
            assert!((up.probability - m.x().powi(6) / n.powi(3)).abs() <= 1e-12);
        }
    }
}

#[test]
fn non_selective_measurement_loses_nothing() {
    let mut g = rng(99);
    for _ in 0..5 {
        let p = WParams::from_alpha_beta(g.gen_range(-0.7..0.7), g.gen_range(-0.7..0.7)).unwrap();
        let m = machine(g.gen_range(-2.0..2.0), g.gen_range(-2.0..2.0));
        let s9 = run_protocol(&p, &m).unwrap();
        let traced = density_of(&s9).partial_trace(&QubitLabel::DATA).unwrap();
        let branches = enumerate_outcomes(&s9).unwrap();
        let parts: Vec<(f64, DensityMatrixF64)> = branches
            .iter()
            .filter(|b| !b.is_negligible())
            .map(|b| (b.probability, density_of(b.state.as_ref().unwrap())))
            .collect();
        let refs: Vec<(f64, &DensityMatrixF64)> = parts.iter().map(|(w, r)| (*w, r)).collect();
        let sum = LabeledDensityMatrix::mix(&refs).unwrap();
        assert_eq!(sum.labels(), traced.labels());
        assert!(sum.matrix().max_abs_diff(traced.matrix()).unwrap() <= 1e-12);
    }
}

#[test]
fn weighted_local_pairs_match_printed_operators() {
    use QubitLabel::*;
    for p in grid_params() {
        for m in grid_machines().into_iter().filter(|m| m.x() != 0.0) {
            let branches = enumerate_outcomes(&run_protocol(&p, &m).unwrap()).unwrap();
            let n = m.x() * m.x() + m.y() * m.y();
            let pre = m.x().powi(6) / n.powi(3);
            let (a2, b2, c2) = (p.alpha().powi(2), p.beta().powi(2), p.gamma().powi(2));
            let cases = [
                ([Data1, Data4], [a2 + b2, 0.0, 0.0, c2]),
                ([Data2, Data5], [a2 + c2, 0.0, 0.0, b2]),
                ([Data3, Data6], [b2 + c2, 0.0, 0.0, a2]),
            ];
            for (keep, diag) in cases {
                let rho = branch_reduced(&branches[0], &keep, true).unwrap();
                let fixture = CMatrix::diag(&diag.map(|d| d * pre));
                assert!(rho.matrix().frobenius_distance(&fixture).unwrap() <= 1e-12);
                assert!((rho.weight() - pre).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn rho156_fidelity_regression() {
    // Frozen from an independent numpy simulation of the full protocol.
    let p = WParams::new(0.48, 0.6, 0.64).unwrap();
    let branches = enumerate_outcomes(&run_protocol(&p, &machine(0.8, 0.6)).unwrap()).unwrap();
    let rho = branch_reduced(&branches[0], &labels("156"), false).unwrap();
    // The same W-type ket, carried by qubits (1, 5, 6).
    let target = LabeledPureState::new(labels("156"), w_state(&p).amplitudes().to_vec()).unwrap();
    let f = fidelity_pure(&rho, &target).unwrap();
    assert!((f - 0.35045632000000004).abs() <= 1e-12);
    assert!((branches[0].probability - 0.26214400000000004).abs() <= 1e-12);
}

#[test]
fn isometry_is_valid_for_many_parameters() {
    let mut g = rng(1);
    let mut samples: Vec<(f64, f64)> = (0..100)
        .map(|_| (g.gen_range(-3.0..3.0), g.gen_range(-3.0..3.0)))
        .collect();
    samples.extend([(0.0, 1.0), (1.0, 0.0), (1e-3, 0.0), (0.0, -1e-3)]);
    for (x, y) in samples {
        let v = machine(x, y).isometry();
        let gram = v.dagger().matmul(&v).unwrap();
        assert!(gram.max_abs_diff(&CMatrix::identity(2)).unwrap() <= 1e-14);
    }
}
