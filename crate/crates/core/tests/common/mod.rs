//! Test-only dense linear algebra: explicit operator products and a cyclic
//! Jacobi eigensolver, kept independent of the library's solvers.
#![allow(dead_code)]

use flatband_core::SymmetricMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn kron(&self, other: &Dense) -> Dense {
        let n = self.n * other.n;
        let mut m = Dense::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..other.n {
                    for l in 0..other.n {
                        m[(i * other.n + k, j * other.n + l)] = self[(i, j)] * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn scaled(&self, s: f64) -> Dense {
        Dense { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn plus(&self, other: &Dense) -> Dense {
        Dense { n: self.n, a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect() }
    }

    pub fn matmul(&self, other: &Dense) -> Dense {
        let n = self.n;
        let mut m = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self[(i, k)];
                if v == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += v * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn to_symmetric(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_lower_fn(self.n, |i, j| self[(i, j)])
    }

    pub fn from_symmetric(h: &SymmetricMatrix) -> Dense {
        let n = h.dim();
        let mut m = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = h.get(i, j);
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for Dense {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Dense {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }
}

pub fn sigma_z() -> Dense {
    // basis order (down, up)
    Dense { n: 2, a: vec![-1.0, 0.0, 0.0, 1.0] }
}

pub fn sigma_x() -> Dense {
    Dense { n: 2, a: vec![0.0, 1.0, 1.0, 0.0] }
}

pub fn annihilation(n_max: usize) -> Dense {
    let mut a = Dense::zeros(n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

pub fn creation(n_max: usize) -> Dense {
    let a = annihilation(n_max);
    let mut c = Dense::zeros(a.n);
    for i in 0..a.n {
        for j in 0..a.n {
            c[(i, j)] = a[(j, i)];
        }
    }
    c
}

pub fn number(n_max: usize) -> Dense {
    creation(n_max).matmul(&annihilation(n_max))
}

/// Complete eigendecomposition by cyclic Jacobi rotations, eigenvalues ascending.
pub fn jacobi_eigen(m: &Dense) -> (Vec<f64>, Dense) {
    let n = m.n;
    let mut a = m.clone();
    let mut v = Dense::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() < 1e-14 * (1.0 + fro(&a)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Dense::zeros(n);
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, i)];
        }
    }
    (values, vectors)
}

fn fro(a: &Dense) -> f64 {
    a.a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Deterministic symmetric matrix with entries in [−1, 1].
pub fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    SymmetricMatrix::from_lower_fn(n, |_, _| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    })
}

/// Mean-field Hamiltonian assembled from explicit operator products,
/// ordered boson ⊗ spin so that index = 2n + s.
pub fn mean_field_by_products(
    omega_m: f64,
    omega_bar: f64,
    coupling: f64,
    psi: f64,
    n_max: usize,
) -> Dense {
    let ib = Dense::identity(n_max + 1);
    let is = Dense::identity(2);
    let x = creation(n_max).plus(&annihilation(n_max));
    ib.kron(&is)
        .scaled(omega_m * psi * psi)
        .plus(&ib.kron(&sigma_z()).scaled(0.5))
        .plus(&ib.kron(&sigma_x()).scaled(2.0 * coupling * psi))
        .plus(&number(n_max).kron(&is).scaled(omega_bar))
        .plus(&x.kron(&sigma_x()).scaled(coupling))
        .plus(&x.kron(&is).scaled(psi * omega_m))
}
