//! Real symmetric eigenproblems.
//!
//! Two independent routes are provided. [`ground_eigenpair`] brackets the
//! lowest eigenvalue by bisection on positive definiteness of H − σI (a
//! Cholesky factorisation exists iff σ lies below the spectrum) and then polishes
//! the eigenvector by shifted inverse iteration. The factorisation works on the
//! matrix envelope, so the banded mean-field matrices cost O(d) per step.
//! Matrices with a wide envelope (the few-site full model) first try Lanczos
//! with full reorthogonalisation and use the factorisation route only if the
//! Ritz residual does not converge.
//! [`full_spectrum`] uses Householder tridiagonalisation followed by implicit QL.

mod ground;
mod lanczos;
mod tridiag;

use alloc::vec;
use alloc::vec::Vec;

use crate::math::abs;
use crate::{Error, Result};

pub use ground::{ground_eigenpair, ground_eigenvalue};
pub use tridiag::full_spectrum;

/// Dense real symmetric matrix holding only its lower triangle, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    lower: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            lower: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds the matrix from the lower triangle of `f(i, j)`, j ≤ i.
    pub fn from_lower_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut lower = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        Self { dim, lower }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.lower[packed(i, j)]
        } else {
            self.lower[packed(j, i)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = if j <= i { packed(i, j) } else { packed(j, i) };
        self.lower[k] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let k = if j <= i { packed(i, j) } else { packed(j, i) };
        self.lower[k] += value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().all(|v| v.is_finite())
    }

    /// The leading k × k principal block.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k <= self.dim);
        Self {
            dim: k,
            lower: self.lower[..k * (k + 1) / 2].to_vec(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = &self.lower[packed(i, 0)..=packed(i, i)];
            let mut acc = 0.0;
            for (j, &a) in row.iter().enumerate() {
                acc += a * x[j];
                if j < i {
                    y[j] += a * x[i];
                }
            }
            y[i] += acc;
        }
        y
    }

    /// ⟨x|H|x⟩ / ⟨x|x⟩.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let hx = self.mul_vec(x);
        dot(x, &hx) / dot(x, x)
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be at least 1"));
        }
        if !self.is_finite() {
            return Err(Error::InvalidMatrix);
        }
        Ok(())
    }

    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.lower[packed(i, 0)..=packed(i, i)]
    }
}

/// Eigenvalue with a unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
}

impl EigenPair {
    /// ‖Hv − λv‖₂.
    pub fn residual(&self, h: &SymmetricMatrix) -> f64 {
        let hv = h.mul_vec(&self.eigenvector);
        let r: f64 = hv
            .iter()
            .zip(&self.eigenvector)
            .map(|(a, b)| {
                let d = a - self.eigenvalue * b;
                d * d
            })
            .sum();
        crate::math::sqrt(r)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
