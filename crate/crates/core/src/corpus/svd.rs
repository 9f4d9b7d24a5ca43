//! One-sided Jacobi SVD and the reduced-rank word embedding built on it.

use std::io::Write;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Rotation threshold on `|u_i . u_j| / (|u_i| |u_j|)`.
const ORTHO_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U diag(s) V^T` with `min(rows, cols)` triplets, sorted by
/// decreasing singular value.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

pub fn jacobi_svd(a: &Matrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::NonFinite("SVD input".into()));
    }
    if a.rows() < a.cols() {
        let t = jacobi_svd(&a.transpose())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (m, n) = a.shape();
    // work on columns: store U^T and V^T so each column is a contiguous row
    let mut ut = a.transpose();
    let mut vt = Matrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta, gamma) = {
                    let (ui, uj) = (ut.row(i), ut.row(j));
                    (dot(ui, ui), dot(uj, uj), dot(ui, uj))
                };
                if gamma == 0.0 || gamma.abs() <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_rows(&mut ut, i, j, c, s);
                rotate_rows(&mut vt, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| dot(ut.row(j), ut.row(j)).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep original column order
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let sigma_max = norms.iter().copied().fold(0.0, f64::max);
    let cutoff = sigma_max * (m.max(n) as f64) * f64::EPSILON;

    let mut u = Matrix::zeros(m, n);
    let mut v = Matrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        if sigma > cutoff {
            for r in 0..m {
                u[(r, k)] = ut[(j, r)] / sigma;
            }
            singular_values.push(sigma);
        } else {
            missing.push(k);
            singular_values.push(0.0);
        }
        for r in 0..n {
            v[(r, k)] = vt[(j, r)];
        }
    }
    complete_basis(&mut u, &missing);
    Ok(Svd {
        u,
        singular_values,
        v,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate_rows(m: &mut Matrix, i: usize, j: usize, c: f64, s: f64) {
    let cols = m.cols();
    let data = m.as_mut_slice();
    let (head, tail) = data.split_at_mut(j * cols);
    let ri = &mut head[i * cols..(i + 1) * cols];
    let rj = &mut tail[..cols];
    for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Fills the listed (zero) columns of `u` with unit vectors orthogonal to
/// every other column, picking the standard basis vector with the largest
/// residual each time.
fn complete_basis(u: &mut Matrix, missing: &[usize]) {
    let (m, n) = u.shape();
    let mut filled: Vec<usize> = (0..n).filter(|k| !missing.contains(k)).collect();
    for &k in missing {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in 0..m {
            let mut cand = vec![0.0; m];
            cand[e] = 1.0;
            // two Gram-Schmidt passes
            for _ in 0..2 {
                for &f in &filled {
                    let proj: f64 = (0..m).map(|r| u[(r, f)] * cand[r]).sum();
                    for (r, c) in cand.iter_mut().enumerate() {
                        *c -= proj * u[(r, f)];
                    }
                }
            }
            let norm = dot(&cand, &cand).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("m >= 1");
        for r in 0..m {
            u[(r, k)] = cand[r] / norm;
        }
        filled.push(k);
    }
}

/// Rank-`k` truncated SVD of a word matrix; each word's vector is its row of
/// `U_k diag(s_k)`.
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    words: Vec<String>,
    left: Matrix,
    singular_values: Vec<f64>,
    right: Matrix,
}

impl EmbeddingMap {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn left(&self) -> &Matrix {
        &self.left
    }

    pub fn right(&self) -> &Matrix {
        &self.right
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Row labels; empty when the embedding was built from a bare matrix.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn with_words(mut self, words: Vec<String>) -> Result<Self> {
        if words.len() != self.left.rows() {
            return Err(Error::Shape(format!(
                "{} words for {} embedding rows",
                words.len(),
                self.left.rows()
            )));
        }
        self.words = words;
        Ok(self)
    }

    pub fn row_vector(&self, row: usize) -> Vec<f64> {
        self.left
            .row(row)
            .iter()
            .zip(&self.singular_values)
            .map(|(u, s)| u * s)
            .collect()
    }

    pub fn vector(&self, word: &str) -> Option<Vec<f64>> {
        let row = self.words.iter().position(|w| w == word)?;
        Some(self.row_vector(row))
    }

    /// `U_k diag(s_k) V_k^T`.
    pub fn reconstruct(&self) -> Matrix {
        let mut scaled = self.left.clone();
        for i in 0..scaled.rows() {
            for (x, s) in scaled.row_mut(i).iter_mut().zip(&self.singular_values) {
                *x *= s;
            }
        }
        scaled
            .matmul(&self.right.transpose())
            .expect("factor shapes agree")
    }

    /// Space-separated text, one row per word: the word then its `k`
    /// components.
    pub fn write_text<W: Write>(&self, mut writer: W) -> Result<()> {
        for i in 0..self.left.rows() {
            let label = self.words.get(i).cloned().unwrap_or_else(|| i.to_string());
            let comps: Vec<String> = self.row_vector(i).iter().map(|x| x.to_string()).collect();
            writeln!(writer, "{label} {}", comps.join(" "))?;
        }
        writer.flush()?;
        Ok(())
    }
}

pub fn svd_embed(matrix: &Matrix, k: usize) -> Result<EmbeddingMap> {
    let max_rank = matrix.rows().min(matrix.cols());
    if k < 1 || k > max_rank {
        return Err(Error::InvalidArgument(format!(
            "rank {k} outside 1..={max_rank} for a {}x{} matrix",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let svd = jacobi_svd(matrix)?;
    let truncate = |f: &Matrix| {
        let rows: Vec<Vec<f64>> = f.row_iter().map(|r| r[..k].to_vec()).collect();
        Matrix::from_rows(&rows).expect("rectangular")
    };
    Ok(EmbeddingMap {
        words: Vec::new(),
        left: truncate(&svd.u),
        singular_values: svd.singular_values[..k].to_vec(),
        right: truncate(&svd.v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_ortho_error(f: &Matrix) -> f64 {
        let g = f.transpose().matmul(f).unwrap();
        let eye = Matrix::identity(g.rows());
        g.as_slice()
            .iter()
            .zip(eye.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_is_exact() {
        let a = Matrix::identity(4);
        let e = svd_embed(&a, 4).unwrap();
        assert!(e.singular_values().iter().all(|&s| (s - 1.0).abs() < 1e-15));
        assert_eq!(e.reconstruct(), a);
    }

    #[test]
    fn diag_rank_one_truncation() {
        let a = Matrix::from_rows(&[[3.0, 0.0], [0.0, 1.0]]).unwrap();
        let e = svd_embed(&a, 1).unwrap();
        let r = e.reconstruct();
        assert!((r[(0, 0)].abs() - 3.0).abs() < 1e-12);
        assert!(r[(1, 1)].abs() < 1e-12);
        let mut diff = a.clone();
        for (d, x) in diff.as_mut_slice().iter_mut().zip(r.as_slice()) {
            *d -= x;
        }
        assert!((diff.frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_integer_matrix() {
        // singular values from an independent dense SVD (LAPACK gesdd)
        let expected = [
            19.28736076410334,
            13.185407306196248,
            6.444180280365074,
            4.649224606231402,
        ];
        let a = Matrix::from_rows(&[
            [3.0, -1.0, 4.0, 1.0],
            [5.0, 9.0, -2.0, 6.0],
            [5.0, 3.0, -5.0, 8.0],
            [9.0, 7.0, 9.0, 3.0],
            [-2.0, 3.0, 8.0, 4.0],
        ])
        .unwrap();
        let e = svd_embed(&a, 2).unwrap();
        for (s, x) in e.singular_values().iter().zip(expected) {
            assert!((s - x).abs() < 1e-8);
        }
        let r = e.reconstruct();
        let resid: f64 = a
            .as_slice()
            .iter()
            .zip(r.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        assert!((resid - 7.946241182158619).abs() < 1e-8);
        assert!(max_ortho_error(e.left()) < 1e-8);
        assert!(max_ortho_error(e.right()) < 1e-8);
    }

    #[test]
    fn rank_deficient_factors_stay_orthonormal() {
        let a = Matrix::from_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        let e = svd_embed(&a, 3).unwrap();
        assert!((e.singular_values()[0] - 2.0).abs() < 1e-12);
        assert_eq!(&e.singular_values()[1..], &[0.0, 0.0]);
        assert!(max_ortho_error(e.left()) < 1e-8);
        assert!(max_ortho_error(e.right()) < 1e-8);
    }

    #[test]
    fn wide_matrix_goes_through_transpose() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        let e = svd_embed(&a, 2).unwrap();
        assert_eq!(e.left().shape(), (2, 2));
        assert_eq!(e.right().shape(), (3, 2));
        let r = e.reconstruct();
        for (x, y) in a.as_slice().iter().zip(r.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_and_finiteness_checked() {
        let a = Matrix::identity(3);
        assert!(svd_embed(&a, 0).is_err());
        assert!(svd_embed(&a, 4).is_err());
        let mut bad = Matrix::identity(2);
        bad[(0, 1)] = f64::INFINITY;
        assert!(matches!(svd_embed(&bad, 1), Err(Error::NonFinite(_))));
    }

    #[test]
    fn equal_singular_values_keep_column_order() {
        let a = Matrix::from_rows(&[[0.0, 2.0], [2.0, 0.0]]).unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert_eq!(svd.singular_values, vec![2.0, 2.0]);
        // the first right vector is the first original column direction
        assert_eq!(svd.v[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn text_output() {
        let e = svd_embed(&Matrix::identity(2), 1)
            .unwrap()
            .with_words(vec!["a".into(), "b".into()])
            .unwrap();
        let mut buf = Vec::new();
        e.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("a "));
        assert_eq!(e.vector("a").unwrap().len(), 1);
        assert!(e.vector("zz").is_none());
    }
}
