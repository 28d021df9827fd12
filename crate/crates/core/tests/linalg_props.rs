mod common;

use common::*;
use proptest::prelude::*;
use wbroadcast::{CMatrix, Complex};

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1..=max_dim, 1..=max_dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn kron_is_bilinear((seed, r, c) in matrix_strategy(4), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut g = rng(seed);
        let a = random_matrix(&mut g, r, c);
        let b = random_matrix(&mut g, c, r);
        let s = Complex::new(re, im);
        let lhs = a.scale_complex(s).kron(&b).unwrap();
        let rhs = a.kron(&b).unwrap().scale_complex(s);
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-14);
    }

    #[test]
    fn trace_of_kron_factorizes((seed, n, m) in matrix_strategy(5)) {
        let mut g = rng(seed);
        let a = random_matrix(&mut g, n, n);
        let b = random_matrix(&mut g, m, m);
        let t = a.kron(&b).unwrap().trace().unwrap();
        let want = a.trace().unwrap() * b.trace().unwrap();
        prop_assert!((t - want).norm() <= 1e-12);
    }

    #[test]
    fn determinant_is_product_of_eigenvalues(seed in any::<u64>(), n in 1usize..=8) {
        let mut g = rng(seed);
        let h = random_hermitian(&mut g, n);
        let eig = h.hermitian_eigenvalues(1e-10).unwrap();
        let prod: f64 = eig.iter().product();
        let det = h.determinant().unwrap();
        let scale = eig.iter().map(|e| e.abs()).product::<f64>().max(1e-300);
        prop_assert!(det.im.abs() <= 1e-8 * scale.max(1.0));
        prop_assert!((det.re - prod).abs() <= 1e-8 * scale.max(prod.abs()), "det {det} vs {prod}");
    }

    #[test]
    fn eigenvalues_survive_unitary_conjugation(seed in any::<u64>(), n in 1usize..=8) {
        let mut g = rng(seed);
        let h = random_hermitian(&mut g, n);
        let u = random_unitary(&mut g, n);
        let rotated = u.matmul(&h).unwrap().matmul(&u.dagger()).unwrap();
        let a = h.hermitian_eigenvalues(1e-10).unwrap();
        let b = rotated.hermitian_eigenvalues(1e-10).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
        let sum: f64 = a.iter().sum();
        prop_assert!((sum - h.trace().unwrap().re).abs() <= 1e-9);
    }

    #[test]
    fn dagger_involution_and_associativity((seed, r, c) in matrix_strategy(6), k in 1usize..6) {
        let mut g = rng(seed);
        let a = random_matrix(&mut g, r, c);
        prop_assert_eq!(&a.dagger().dagger(), &a);
        let b = random_matrix(&mut g, c, k);
        let d = random_matrix(&mut g, k, r);
        let left = a.matmul(&b).unwrap().matmul(&d).unwrap();
        let right = a.matmul(&b.matmul(&d).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn psd_inputs_have_nonnegative_spectrum(seed in any::<u64>(), n in 1usize..=16) {
        let mut g = rng(seed);
        let a = random_matrix(&mut g, n, n);
        let p = a.matmul(&a.dagger()).unwrap();
        let p = p.add(&p.dagger()).unwrap().scale(0.5);
        let eig = p.hermitian_eigenvalues(1e-10).unwrap();
        prop_assert!(eig[0] >= -1e-9);
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn jacobi_handles_a_64_dimensional_density() {
    let mut g = rng(7);
    let labels = wbroadcast::state::labels("142536");
    let rho = random_density(&mut g, labels);
    let eig = rho.eigenvalues().unwrap();
    assert_eq!(eig.len(), 64);
    assert!((eig.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(eig[0] >= -1e-9);
}

#[test]
fn degenerate_spectrum_is_resolved() {
    let mut g = rng(11);
    let u = random_unitary(&mut g, 6);
    let d = CMatrix::diag(&[0.25, 0.25, 0.25, -0.5, 1.0, 1.0]);
    let h = u.matmul(&d).unwrap().matmul(&u.dagger()).unwrap();
    let h = h.add(&h.dagger()).unwrap().scale(0.5);
    let eig = h.hermitian_eigenvalues(1e-10).unwrap();
    let want = [-0.5, 0.25, 0.25, 0.25, 1.0, 1.0];
    for (e, w) in eig.iter().zip(want) {
        assert!((e - w).abs() < 1e-12, "{eig:?}");
    }
}
