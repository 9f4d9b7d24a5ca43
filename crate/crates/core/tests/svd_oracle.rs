//! Truncated SVD against nalgebra's dense SVD.

use kgdbn::corpus::svd_embed;
use kgdbn::stats::SeededRng;
use kgdbn::Matrix;
use proptest::prelude::*;

fn oracle_singular_values(a: &Matrix) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn residual(a: &Matrix, r: &Matrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(r.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn ortho_error(f: &Matrix) -> f64 {
    let g = f.transpose().matmul(f).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

fn check_all_ranks(a: &Matrix) {
    let sigma = oracle_singular_values(a);
    for k in 1..=a.rows().min(a.cols()) {
        let e = svd_embed(a, k).unwrap();
        for (got, want) in e.singular_values().iter().zip(&sigma) {
            assert!((got - want).abs() <= 1e-8, "k={k}: sigma {got} vs {want}");
        }
        let expected = sigma[k..].iter().map(|s| s * s).sum::<f64>().sqrt();
        let got = residual(a, &e.reconstruct());
        assert!(
            (got - expected).abs() <= 1e-8,
            "k={k}: residual {got} vs {expected}"
        );
        assert!(ortho_error(e.left()) <= 1e-8);
        assert!(ortho_error(e.right()) <= 1e-8);
    }
}

#[test]
fn random_6x5_matrices() {
    let mut rng = SeededRng::new(2024);
    for _ in 0..20 {
        let a =
            Matrix::from_vec(6, 5, (0..30).map(|_| rng.uniform(-10.0, 10.0)).collect()).unwrap();
        check_all_ranks(&a);
    }
}

#[test]
fn integer_5x4_matches_lapack_values() {
    let a = Matrix::from_rows(&[
        [3.0, -1.0, 4.0, 1.0],
        [5.0, 9.0, -2.0, 6.0],
        [5.0, 3.0, -5.0, 8.0],
        [9.0, 7.0, 9.0, 3.0],
        [-2.0, 3.0, 8.0, 4.0],
    ])
    .unwrap();
    check_all_ranks(&a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eckart_young_on_small_matrices(
        rows in 1usize..7,
        cols in 1usize..7,
        seed in any::<u64>(),
    ) {
        let mut rng = SeededRng::new(seed);
        let a = Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.uniform(-5.0, 5.0)).collect()).unwrap();
        check_all_ranks(&a);
    }

    #[test]
    fn integer_matrices_with_repeated_rows(seed in any::<u64>()) {
        // duplicated rows force exact rank deficiency
        let mut rng = SeededRng::new(seed);
        let base: Vec<f64> = (0..8).map(|_| rng.below(7) as f64 - 3.0).collect();
        let mut data = base.clone();
        data.extend_from_slice(&base);
        data.extend((0..8).map(|_| rng.below(7) as f64 - 3.0));
        let a = Matrix::from_vec(6, 4, data).unwrap();
        check_all_ranks(&a);
    }
}
