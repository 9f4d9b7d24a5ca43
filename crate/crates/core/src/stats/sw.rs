// Shapiro-Wilk W statistic.
//
// Coefficients follow Royston's polynomial approximation (the scheme used by
// AS R94), valid for 3 <= n <= 5000. W is the squared coefficient-weighted
// sum of the order statistics over the corrected sum of squares.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::matrix::Dataset;

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwReport {
    pub n: usize,
    #[serde(rename = "W")]
    pub w: f64,
    /// The sample was a multi-column dataset flattened row-major.
    pub pooled: bool,
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Full length-`n` weight vector, ascending, so that `a[i] == -a[n-1-i]`.
pub fn sw_coefficients(n: usize) -> Result<Vec<f64>> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "Shapiro-Wilk needs {MIN_N} <= n <= {MAX_N}, got {n}"
        )));
    }
    let half = n / 2;
    // upper[i] is the weight of the (i+1)-th largest order statistic
    let mut upper = vec![0.0; half];
    if n == 3 {
        upper[0] = std::f64::consts::FRAC_1_SQRT_2;
    } else {
        let normal = Normal::standard();
        let nf = n as f64;
        let m: Vec<f64> = (1..=half)
            .map(|i| -normal.inverse_cdf((i as f64 - 0.375) / (nf + 0.25)))
            .collect();
        let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / nf.sqrt();

        let a1 = poly(&C1, rsn) + m[0] / ssumm2;
        let (first_scaled, fac) = if n > 5 {
            let a2 = poly(&C2, rsn) + m[1] / ssumm2;
            let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
                .sqrt();
            upper[1] = a2;
            (2, fac)
        } else {
            let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (1, fac)
        };
        upper[0] = a1;
        for i in first_scaled..half {
            upper[i] = m[i] / fac;
        }
    }

    let mut a = vec![0.0; n];
    for (i, &w) in upper.iter().enumerate() {
        a[n - 1 - i] = w;
        a[i] = -w;
    }
    Ok(a)
}

/// Shapiro-Wilk W of a single sample.
pub fn shapiro_wilk(sample: &[f64]) -> Result<SwReport> {
    let n = sample.len();
    if n < MIN_N {
        return Err(Error::InvalidArgument(format!(
            "Shapiro-Wilk needs at least {MIN_N} values, got {n}"
        )));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("Shapiro-Wilk sample".into()));
    }
    let a = sw_coefficients(n)?;

    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted[0] == sorted[n - 1] {
        return Err(Error::ZeroVariance);
    }

    let mean = sorted.iter().sum::<f64>() / n as f64;
    let ss: f64 = sorted.iter().map(|x| (x - mean) * (x - mean)).sum();
    if ss <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    // a sums to zero, so centring leaves the numerator unchanged
    let b: f64 = a.iter().zip(&sorted).map(|(ai, x)| ai * (x - mean)).sum();

    Ok(SwReport {
        n,
        w: b * b / ss,
        pooled: false,
    })
}

/// Flattens every entry of `data` row-major into one sample.
pub fn sw_pooled(data: &Dataset) -> Result<SwReport> {
    let mut report = shapiro_wilk(data.as_slice())?;
    report.pooled = true;
    Ok(report)
}

/// One report per column.
pub fn sw_columns(data: &Dataset) -> Result<Vec<SwReport>> {
    (0..data.cols())
        .map(|j| shapiro_wilk(&data.column(j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_coefficients_are_exact() {
        let a = sw_coefficients(3).unwrap();
        assert_eq!(
            a,
            vec![
                -std::f64::consts::FRAC_1_SQRT_2,
                0.0,
                std::f64::consts::FRAC_1_SQRT_2
            ]
        );
    }

    #[test]
    fn coefficients_normalized_and_antisymmetric() {
        for n in (3..=60).chain([99, 100, 101, 500, 1000, 4999, 5000]) {
            let a = sw_coefficients(n).unwrap();
            let norm: f64 = a.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-6, "n={n} norm={norm}");
            for i in 0..n {
                assert!((a[i] + a[n - 1 - i]).abs() <= 1e-12);
            }
            assert!(a.windows(2).all(|w| w[0] <= w[1]), "n={n} not ascending");
        }
    }

    #[test]
    fn n10_matches_reference() {
        // upper-half weights from the reference swilk routine
        let reference = [
            0.5737147069126667,
            0.32897004608897956,
            0.21434901786716598,
            0.12279062529948592,
            0.040088710708505344,
        ];
        let a = sw_coefficients(10).unwrap();
        for (i, r) in reference.iter().enumerate() {
            assert!(
                (a[9 - i] - r).abs() < 1e-4,
                "a[{}]={} ref {r}",
                9 - i,
                a[9 - i]
            );
        }
    }

    #[test]
    fn out_of_range_n() {
        assert!(sw_coefficients(2).is_err());
        assert!(sw_coefficients(5001).is_err());
        assert!(shapiro_wilk(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn evenly_spaced_three() {
        let r = shapiro_wilk(&[0.0, 1.0, 2.0]).unwrap();
        assert!((r.w - 1.0).abs() < 1e-6);
        assert_eq!(r.n, 3);
        assert!(!r.pooled);
    }

    #[test]
    fn constant_sample_is_degenerate() {
        assert!(matches!(shapiro_wilk(&[5.0; 4]), Err(Error::ZeroVariance)));
    }

    #[test]
    fn pooled_delegates() {
        let d = Dataset::from_rows(&[[0.0, 1.0, 2.0]]).unwrap();
        let p = sw_pooled(&d).unwrap();
        assert!(p.pooled);
        assert_eq!(p.w, shapiro_wilk(&[0.0, 1.0, 2.0]).unwrap().w);

        let d = crate::stats::gen_uniform(50, 2, 1);
        assert_eq!(sw_pooled(&d).unwrap().n, 100);
        assert_eq!(sw_columns(&d).unwrap().len(), 2);
    }
}
