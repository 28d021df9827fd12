#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use wbroadcast::{CMatrix, Complex, DensityMatrixF64, LabeledDensityMatrix, QubitLabel};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut StdRng) -> Complex<f64> {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> CMatrix<f64> {
    CMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_hermitian(rng: &mut StdRng, n: usize) -> CMatrix<f64> {
    let a = random_matrix(rng, n, n);
    a.add(&a.dagger()).unwrap().scale(0.5)
}

/// Gram-Schmidt on the columns of a random complex matrix.
pub fn random_unitary(rng: &mut StdRng, n: usize) -> CMatrix<f64> {
    let a = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<Complex<f64>>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex<f64>> = (0..n).map(|i| a.get(i, j)).collect();
        for u in &cols {
            let proj: Complex<f64> = u.iter().zip(&v).map(|(ui, vi)| ui.conj() * vi).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_ket(rng: &mut StdRng, dim: usize) -> Vec<Complex<f64>> {
    let v: Vec<Complex<f64>> = (0..dim).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random pure two-qubit state mixed with white noise at a random weight.
pub fn random_two_qubit(rng: &mut StdRng) -> DensityMatrixF64 {
    let psi = random_ket(rng, 4);
    let p: f64 = rng.gen_range(0.0..1.0);
    let m = CMatrix::outer(&psi)
        .scale(p)
        .add(&CMatrix::identity(4).scale((1.0 - p) / 4.0))
        .unwrap();
    LabeledDensityMatrix::from_matrix(vec![QubitLabel::Data1, QubitLabel::Data2], m).unwrap()
}

/// Random density matrix on `labels` from a random Gram matrix.
pub fn random_density(rng: &mut StdRng, labels: Vec<QubitLabel>) -> DensityMatrixF64 {
    let n = 1 << labels.len();
    let a = random_matrix(rng, n, n);
    let g = a.matmul(&a.dagger()).unwrap();
    let t = g.trace().unwrap().re;
    let g = g.scale(1.0 / t);
    // Round-off can leave a ~1e-17 anti-Hermitian part.
    let g = g.add(&g.dagger()).unwrap().scale(0.5);
    LabeledDensityMatrix::from_matrix(labels, g).unwrap()
}
