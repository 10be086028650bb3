use alloc::vec;
use alloc::vec::Vec;

use super::lanczos::lanczos_lowest;
use super::{dot, SymmetricMatrix};
use crate::math::{abs, sqrt};
use crate::spectra::EigenPair;
use crate::{Error, Result};

const MAX_BISECTIONS: usize = 200;
const MAX_INVERSE_ITERATIONS: usize = 12;
/// Mean envelope width per row above which Lanczos is tried first.
const LANCZOS_ENVELOPE: usize = 64;

/// Envelope (skyline) copy of a symmetric matrix and a scratch Cholesky factor.
///
/// Row i stores columns `first[i]..=i`; the Cholesky factor has the same
/// envelope, so factorising never allocates.
struct Skyline {
    first: Vec<usize>,
    offset: Vec<usize>,
    values: Vec<f64>,
    factor: Vec<f64>,
    /// ∞-norm of the matrix.
    norm: f64,
    /// Gershgorin lower bound of the spectrum.
    gershgorin_low: f64,
    min_diagonal: f64,
}

impl Skyline {
    fn new(h: &SymmetricMatrix) -> Self {
        let d = h.dim();
        let mut first = Vec::with_capacity(d);
        let mut offset = Vec::with_capacity(d + 1);
        let mut values = Vec::new();
        let mut off_diag = vec![0.0; d];
        let mut min_diagonal = f64::INFINITY;
        for i in 0..d {
            let row = h.row(i);
            let f = row[..i].iter().position(|v| *v != 0.0).unwrap_or(i);
            first.push(f);
            offset.push(values.len());
            values.extend_from_slice(&row[f..]);
            for (j, v) in row.iter().enumerate().take(i).skip(f) {
                off_diag[i] += abs(*v);
                off_diag[j] += abs(*v);
            }
            min_diagonal = min_diagonal.min(row[i]);
        }
        offset.push(values.len());
        let mut norm: f64 = 0.0;
        let mut gershgorin_low = f64::INFINITY;
        for i in 0..d {
            let diag = values[offset[i + 1] - 1];
            norm = norm.max(abs(diag) + off_diag[i]);
            gershgorin_low = gershgorin_low.min(diag - off_diag[i]);
        }
        let factor = vec![0.0; values.len()];
        Self {
            first,
            offset,
            values,
            factor,
            norm,
            gershgorin_low,
            min_diagonal,
        }
    }

    fn dim(&self) -> usize {
        self.first.len()
    }

    /// Cholesky factorisation of H − σI; `false` iff it is not positive definite.
    fn factor_shifted(&mut self, sigma: f64) -> bool {
        for i in 0..self.dim() {
            let fi = self.first[i];
            let oi = self.offset[i];
            let (done, current) = self.factor.split_at_mut(oi);
            for j in fi..=i {
                let k0 = fi.max(self.first[j]);
                let mut s = self.values[oi + j - fi];
                if j == i {
                    s -= sigma;
                    s -= dot(&current[k0 - fi..j - fi], &current[k0 - fi..j - fi]);
                    if !(s > 0.0) {
                        return false;
                    }
                    current[j - fi] = sqrt(s);
                } else {
                    let fj = self.first[j];
                    let oj = self.offset[j];
                    let row_j = &done[oj..oj + (j - fj) + 1];
                    s -= dot(&current[k0 - fi..j - fi], &row_j[k0 - fj..j - fj]);
                    current[j - fi] = s / row_j[j - fj];
                }
            }
        }
        true
    }

    /// Solves (L Lᵀ) x = b in place with the current factor.
    fn solve(&self, x: &mut [f64]) {
        let d = self.dim();
        for i in 0..d {
            let fi = self.first[i];
            let row = &self.factor[self.offset[i]..self.offset[i + 1]];
            let s = x[i] - dot(&row[..i - fi], &x[fi..i]);
            x[i] = s / row[i - fi];
        }
        for i in (0..d).rev() {
            let fi = self.first[i];
            let row = &self.factor[self.offset[i]..self.offset[i + 1]];
            x[i] /= row[i - fi];
            let xi = x[i];
            for (k, l) in (fi..i).zip(row) {
                x[k] -= l * xi;
            }
        }
    }

    /// Brackets λ_min: H − lo·I is positive definite, H − hi·I is not.
    fn bracket_lowest(&mut self) -> (f64, f64) {
        let mut hi = self.min_diagonal;
        let mut lo = self.gershgorin_low - f64::EPSILON * self.norm.max(1.0);
        let mut step = (hi - lo).max(f64::EPSILON * self.norm.max(1.0));
        while !self.factor_shifted(lo) {
            hi = lo;
            lo -= step;
            step *= 2.0;
        }
        let floor = 1e-3 * f64::EPSILON * self.norm;
        for _ in 0..MAX_BISECTIONS {
            let width = hi - lo;
            if width <= 2.0 * f64::EPSILON * abs(lo).max(abs(hi)) + floor {
                break;
            }
            let mid = lo + 0.5 * width;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.factor_shifted(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

/// Algebraically smallest eigenvalue, without the eigenvector.
pub fn ground_eigenvalue(h: &SymmetricMatrix) -> Result<f64> {
    h.check()?;
    if h.dim() == 1 {
        return Ok(h.get(0, 0));
    }
    let (lo, hi) = Skyline::new(h).bracket_lowest();
    Ok(0.5 * (lo + hi))
}

/// Deterministic, structure-free start vector.
fn start_vector(d: usize) -> Vec<f64> {
    (0..d)
        .map(|i| {
            let mut z = (i as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            0.5 + (z >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn normalize(v: &mut [f64]) -> bool {
    let n = sqrt(dot(v, v));
    if !(n.is_finite() && n > 0.0) {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

/// Flips the vector so that its first non-negligible component is positive.
fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| abs(**x) > 1e-10) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Lowest eigenvalue and a unit eigenvector.
///
/// The eigenvector's first component above 1e−10 in magnitude is positive,
/// and identical input gives bit-identical output.
pub fn ground_eigenpair(h: &SymmetricMatrix) -> Result<EigenPair> {
    h.check()?;
    let d = h.dim();
    if d == 1 {
        return Ok(EigenPair {
            eigenvalue: h.get(0, 0),
            eigenvector: vec![1.0],
        });
    }
    let tol = |lambda: f64| 1e-10 * abs(lambda).max(1.0);
    let mut sky = Skyline::new(h);
    if sky.values.len() > LANCZOS_ENVELOPE * d {
        let mut v = start_vector(d);
        normalize(&mut v);
        if let Some((eigenvalue, mut eigenvector)) = lanczos_lowest(h, &v, tol) {
            fix_sign(&mut eigenvector);
            return Ok(EigenPair {
                eigenvalue,
                eigenvector,
            });
        }
    }
    let (lo, _) = sky.bracket_lowest();

    let mut shift = lo - 64.0 * f64::EPSILON * sky.norm.max(1.0);
    let mut margin = 64.0 * f64::EPSILON * sky.norm.max(1.0);
    while !sky.factor_shifted(shift) {
        margin *= 4.0;
        shift = lo - margin;
    }

    let mut v = start_vector(d);
    normalize(&mut v);
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        let mut x = v.clone();
        sky.solve(&mut x);
        if !normalize(&mut x) {
            break;
        }
        v = x;
        let hv = h.mul_vec(&v);
        let lambda = dot(&v, &hv);
        let residual = sqrt(
            hv.iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b) * (a - lambda * b))
                .sum::<f64>(),
        );
        let improved = best.as_ref().is_none_or(|(_, r, _)| residual < *r);
        if improved {
            best = Some((lambda, residual, v.clone()));
        }
        if residual <= 1e-3 * tol(lambda) {
            break;
        }
    }
    match best {
        Some((lambda, residual, mut vector)) if residual <= tol(lambda) => {
            fix_sign(&mut vector);
            Ok(EigenPair {
                eigenvalue: lambda,
                eigenvector: vector,
            })
        }
        Some((_, residual, _)) => Err(Error::EigenNotConverged { residual }),
        None => Err(Error::EigenNotConverged {
            residual: f64::INFINITY,
        }),
    }
}
