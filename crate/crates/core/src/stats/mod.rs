//! Shapiro-Wilk W statistic and seeded synthetic data.

mod rng;
mod sw;

pub use rng::{derive_seed, SeededRng};
pub use sw::{shapiro_wilk, sw_coefficients, sw_columns, sw_pooled, SwReport};

use crate::matrix::Dataset;

/// `rows x cols` values drawn uniformly from `[0, 1)`, filled row-major.
pub fn gen_uniform(rows: usize, cols: usize, seed: u64) -> Dataset {
    let mut rng = SeededRng::new(seed);
    let data = (0..rows * cols).map(|_| rng.next_f64()).collect();
    Dataset::from_vec(rows, cols, data).expect("length is rows * cols")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_uniform_is_deterministic() {
        assert_eq!(gen_uniform(20, 3, 9), gen_uniform(20, 3, 9));
        assert_ne!(gen_uniform(20, 3, 9), gen_uniform(20, 3, 10));
    }

    #[test]
    fn gen_uniform_range() {
        let d = gen_uniform(500, 2, 0);
        assert_eq!(d.shape(), (500, 2));
        assert!(d.as_slice().iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn gen_uniform_mean() {
        // sd of the mean is sqrt(1/12 / 10000) ~ 0.0029, so 0.02 is ~7 sd
        let d = gen_uniform(10_000, 1, 1234);
        let mean = d.as_slice().iter().sum::<f64>() / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }
}
