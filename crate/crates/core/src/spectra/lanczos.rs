use alloc::vec;
use alloc::vec::Vec;

use super::tridiag::tridiagonal_ql;
use super::{dot, SymmetricMatrix};
use crate::math::{abs, sqrt};

const MAX_KRYLOV: usize = 600;
const CHECK_EVERY: usize = 10;

/// Nonzeros of the strict lower triangle plus the diagonal.
struct Sparse {
    diag: Vec<f64>,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Sparse {
    fn new(h: &SymmetricMatrix) -> Self {
        let d = h.dim();
        let mut diag = Vec::with_capacity(d);
        let mut row_start = Vec::with_capacity(d + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..d {
            row_start.push(cols.len());
            let row = h.row(i);
            for (j, &v) in row[..i].iter().enumerate() {
                if v != 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            diag.push(row[i]);
        }
        row_start.push(cols.len());
        Self { diag, row_start, cols, vals }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.diag[i] * x[i];
        }
        for i in 0..self.diag.len() {
            let mut acc = 0.0;
            for k in self.row_start[i]..self.row_start[i + 1] {
                let (j, v) = (self.cols[k], self.vals[k]);
                acc += v * x[j];
                y[j] += v * x[i];
            }
            y[i] += acc;
        }
    }
}

/// Lowest Ritz pair of the tridiagonal (alpha, beta).
fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> Option<(f64, Vec<f64>)> {
    let k = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = vec![0.0; k];
    e[1..k].copy_from_slice(&beta[..k - 1]);
    let mut z = vec![0.0; k * k];
    for i in 0..k {
        z[i * k + i] = 1.0;
    }
    tridiagonal_ql(&mut d, &mut e, Some(&mut z)).ok()?;
    let (col, &theta) = d.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    Some((theta, (0..k).map(|r| z[r * k + col]).collect()))
}

/// Lowest eigenpair by Lanczos with full reorthogonalisation.
///
/// Returns `None` when the Ritz residual does not reach `tol(θ)`; the caller
/// then falls back to the factorisation route.
pub(crate) fn lanczos_lowest(
    h: &SymmetricMatrix,
    start: &[f64],
    tol: impl Fn(f64) -> f64,
) -> Option<(f64, Vec<f64>)> {
    let d = h.dim();
    let a = Sparse::new(h);
    let max_k = MAX_KRYLOV.min(d);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_k);
    let mut alpha = Vec::with_capacity(max_k);
    let mut beta: Vec<f64> = Vec::with_capacity(max_k);

    let mut q = start.to_vec();
    let n0 = sqrt(dot(&q, &q));
    q.iter_mut().for_each(|x| *x /= n0);
    let mut w = vec![0.0; d];
    for j in 0..max_k {
        a.apply(&q, &mut w);
        let aj = dot(&q, &w);
        alpha.push(aj);
        basis.push(q);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let bj = sqrt(dot(&w, &w));
        beta.push(bj);
        let exhausted = bj <= 1e-14 * abs(aj).max(1.0);
        if exhausted || (j + 1) % CHECK_EVERY == 0 || j + 1 == max_k {
            let (theta, y) = lowest_ritz(&alpha, &beta)?;
            let estimate = bj * abs(y[y.len() - 1]);
            if exhausted || estimate <= 1e-2 * tol(theta) || j + 1 == max_k {
                let mut v = vec![0.0; d];
                for (b, c) in basis.iter().zip(&y) {
                    v.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
                }
                let n = sqrt(dot(&v, &v));
                v.iter_mut().for_each(|x| *x /= n);
                a.apply(&v, &mut w);
                let lambda = dot(&v, &w);
                let residual = sqrt(
                    w.iter()
                        .zip(&v)
                        .map(|(p, q)| (p - lambda * q) * (p - lambda * q))
                        .sum::<f64>(),
                );
                return (residual <= tol(lambda)).then_some((lambda, v));
            }
        }
        if exhausted {
            break;
        }
        q = w.iter().map(|x| x / bj).collect();
    }
    None
}
