//! Exact diagonalisation of the real-space model on one to three sites.
//!
//! Each site carries a two-level electron (single occupancy) and a local
//! boson truncated at `n_max_site` quanta:
//!
//! ```text
//! H = Σ_r [ ω̄ a†_r a_r + (ω₁₂/2) σ^z_r + Ω σ^x_r (a†_r + a_r) ]
//!   + Σ_{r ≠ r'} (ω̃_{r−r'}/√N) a†_r a_{r'}
//! ```
//!
//! The local basis matches the mean-field one (index 2n + s) and the first
//! site is the slowest index of the product basis.

use alloc::vec::Vec;

use crate::math::{abs, sqrt};
use crate::meanfield::Observables;
use crate::model::{real_couplings, Dispersion, MeanFieldSolution, ModelParams};
use crate::spectra::{ground_eigenpair, ground_eigenvalue, SymmetricMatrix};
use crate::{minimize_over_psi, Error, Result};

pub const MAX_SITES: usize = 3;
pub const MAX_DIMENSION: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FullModelSpec {
    pub n_sites: usize,
    /// One mode per site.
    pub dispersion: Dispersion,
    pub n_max_site: usize,
    pub omega12: f64,
    pub omega_coupling: f64,
}

impl FullModelSpec {
    pub fn local_dimension(&self) -> usize {
        2 * (self.n_max_site + 1)
    }

    /// (2(n_max_site + 1))^n_sites, saturating.
    pub fn dimension(&self) -> usize {
        let local = self.local_dimension();
        (0..self.n_sites).fold(1usize, |acc, _| acc.saturating_mul(local))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 || self.n_sites > MAX_SITES {
            return Err(Error::SizeExceeded {
                dimension: self.dimension(),
                cap: MAX_DIMENSION,
            });
        }
        if self.dispersion.n_modes() != self.n_sites {
            return Err(Error::InvalidParameter("dispersion must have one mode per site"));
        }
        if !(self.omega12.is_finite() && self.omega12 > 0.0) {
            return Err(Error::InvalidParameter("omega12 must be positive"));
        }
        if !(self.omega_coupling.is_finite() && self.omega_coupling >= 0.0) {
            return Err(Error::InvalidParameter("coupling must be non-negative"));
        }
        let dimension = self.dimension();
        if dimension > MAX_DIMENSION {
            return Err(Error::SizeExceeded {
                dimension,
                cap: MAX_DIMENSION,
            });
        }
        Ok(())
    }

    /// Largest per-site cutoff that keeps `n_sites` within the dimension cap.
    pub fn max_cutoff(n_sites: usize) -> usize {
        let mut n = 0;
        while (0..n_sites).try_fold(1usize, |acc, _| acc.checked_mul(2 * (n + 2)))
            .is_some_and(|d| d <= MAX_DIMENSION)
        {
            n += 1;
        }
        n
    }
}

fn strides(spec: &FullModelSpec) -> Vec<usize> {
    let local = spec.local_dimension();
    let mut s: Vec<usize> = (0..spec.n_sites)
        .scan(1usize, |acc, _| {
            let out = *acc;
            *acc *= local;
            Some(out)
        })
        .collect();
    s.reverse();
    s
}

pub fn build_full_hamiltonian(spec: &FullModelSpec) -> Result<SymmetricMatrix> {
    spec.validate()?;
    let n_sites = spec.n_sites;
    let n_max = spec.n_max_site;
    let stride = strides(spec);
    let couplings = real_couplings(&spec.dispersion)?;
    let omega_bar = spec.dispersion.mean();
    let norm = 1.0 / sqrt(n_sites as f64);

    let dim = spec.dimension();
    let mut h = SymmetricMatrix::zeros(dim);
    let mut digits = alloc::vec![0usize; n_sites];
    for i in 0..dim {
        let mut rest = i;
        for (r, d) in digits.iter_mut().enumerate() {
            *d = rest / stride[r];
            rest %= stride[r];
        }
        let mut diag = 0.0;
        for (r, &l) in digits.iter().enumerate() {
            let (n, s) = (l / 2, l % 2);
            diag += omega_bar * n as f64 + 0.5 * (2.0 * s as f64 - 1.0) * spec.omega12;
            if n < n_max {
                // σ^x a† : (n, s) → (n + 1, 1 − s)
                let target = 2 * (n + 1) + (1 - s);
                let j = i + (target - l) * stride[r];
                h.set(j, i, spec.omega_coupling * sqrt(n as f64 + 1.0));
            }
        }
        h.set(i, i, diag);

        // a†_r a_{r'} for each unordered pair; symmetric storage supplies the conjugate.
        for r in 0..n_sites {
            for rp in r + 1..n_sites {
                let t = couplings[(rp - r) % n_sites] * norm;
                if t == 0.0 {
                    continue;
                }
                let (nr, np) = (digits[r] / 2, digits[rp] / 2);
                if nr < n_max && np > 0 {
                    let j = i + 2 * stride[r] - 2 * stride[rp];
                    h.add(j, i, t * sqrt((nr + 1) as f64 * np as f64));
                }
            }
        }
    }
    Ok(h)
}

/// Site-averaged observables of the full-model ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteAverages {
    pub energy_per_site: f64,
    pub sigma_z: f64,
    pub photon_number: f64,
}

pub fn full_ground(spec: &FullModelSpec) -> Result<SiteAverages> {
    let h = build_full_hamiltonian(spec)?;
    let pair = ground_eigenpair(&h)?;
    let stride = strides(spec);
    let n = spec.n_sites as f64;
    let (mut sz, mut photons) = (0.0, 0.0);
    for (i, c) in pair.eigenvector.iter().enumerate() {
        let w = c * c;
        let mut rest = i;
        for &st in &stride {
            let l = rest / st;
            rest %= st;
            sz += if l % 2 == 1 { w } else { -w };
            photons += (l / 2) as f64 * w;
        }
    }
    Ok(SiteAverages {
        energy_per_site: pair.eigenvalue / n,
        sigma_z: sz / n,
        photon_number: photons / n,
    })
}

/// Ground state of the quantum Rabi model H = ω a†a + (ω₁₂/2)σ_z + Ωσ_x(a† + a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiGround {
    pub energy: f64,
    pub sigma_z: f64,
    pub photon_number: f64,
}

const RABI_TRUNCATION_EPS: f64 = 1e-9;

pub fn rabi_matrix(
    omega_boson: f64,
    omega12: f64,
    omega_coupling: f64,
    n_max: usize,
) -> Result<SymmetricMatrix> {
    let spec = FullModelSpec {
        n_sites: 1,
        dispersion: Dispersion::from_samples(alloc::vec![omega_boson])?,
        n_max_site: n_max,
        omega12,
        omega_coupling,
    };
    build_full_hamiltonian(&spec)
}

/// Rabi ground state at exactly `n_max`, without a convergence check.
pub fn rabi_ground_at_cutoff(
    omega_boson: f64,
    omega12: f64,
    omega_coupling: f64,
    n_max: usize,
) -> Result<RabiGround> {
    let pair = ground_eigenpair(&rabi_matrix(omega_boson, omega12, omega_coupling, n_max)?)?;
    let obs = Observables::from_ground_vector(&pair.eigenvector);
    Ok(RabiGround {
        energy: pair.eigenvalue,
        sigma_z: obs.sigma_z,
        photon_number: obs.photon_number,
    })
}

/// Rabi ground state at `n_max`; fails unless lowering the cutoff by five
/// changes the energy by at most 1e−9.
pub fn rabi_ground(
    omega_boson: f64,
    omega12: f64,
    omega_coupling: f64,
    n_max: usize,
) -> Result<RabiGround> {
    let ground = rabi_ground_at_cutoff(omega_boson, omega12, omega_coupling, n_max)?;
    if omega_coupling > 0.0 {
        let lower = if n_max >= 5 {
            ground_eigenvalue(&rabi_matrix(omega_boson, omega12, omega_coupling, n_max - 5)?)?
        } else {
            f64::INFINITY
        };
        let change = abs(ground.energy - lower);
        if !(change <= RABI_TRUNCATION_EPS) {
            return Err(Error::TruncationNotConverged { n_max, change });
        }
    }
    Ok(ground)
}

/// One equality asserted by the oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        abs(self.lhs - self.rhs) <= self.tolerance
    }
}

/// Full model vs. mean field vs. single-site Rabi model at matched truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub n_sites: usize,
    pub n_max_site: usize,
    pub omega_m: f64,
    pub delta: f64,
    pub omega_coupling: f64,
    pub full: SiteAverages,
    pub meanfield: MeanFieldSolution,
    /// Rabi model with boson frequency ω̄.
    pub rabi: RabiGround,
    /// Only populated for a flat dispersion, where all three must agree.
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    /// Δ = 0 equalities hold (vacuously true away from Δ = 0).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::passed)
    }
}

pub const ORACLE_TOLERANCE: f64 = 1e-8;

pub fn compare_full_vs_meanfield(spec: &FullModelSpec) -> Result<OracleReport> {
    spec.validate()?;
    let d = &spec.dispersion;
    let (omega_m, delta, omega_bar) = (d.min(), d.half_width(), d.mean());
    let full = full_ground(spec)?;
    let rabi = rabi_ground_at_cutoff(omega_bar, spec.omega12, spec.omega_coupling, spec.n_max_site)?;

    let mut params = ModelParams::new(omega_m, delta, spec.omega_coupling).with_n_max(spec.n_max_site);
    params.omega12 = spec.omega12;
    params.controls.adaptive_truncation = false;
    let meanfield = minimize_over_psi(&params)?;

    let mut checks = Vec::new();
    if delta <= 1e-12 * omega_bar {
        checks.push(OracleCheck {
            name: "full_energy_per_site_eq_rabi",
            lhs: full.energy_per_site,
            rhs: rabi.energy,
            tolerance: ORACLE_TOLERANCE,
        });
        checks.push(OracleCheck {
            name: "meanfield_energy_eq_rabi",
            lhs: meanfield.ground_energy,
            rhs: rabi.energy,
            tolerance: ORACLE_TOLERANCE,
        });
        checks.push(OracleCheck {
            name: "meanfield_psi_star_zero",
            lhs: meanfield.psi_star,
            rhs: 0.0,
            tolerance: ORACLE_TOLERANCE,
        });
        checks.push(OracleCheck {
            name: "full_sigma_z_eq_rabi",
            lhs: full.sigma_z,
            rhs: rabi.sigma_z,
            tolerance: 1e-6,
        });
    }
    Ok(OracleReport {
        n_sites: spec.n_sites,
        n_max_site: spec.n_max_site,
        omega_m,
        delta,
        omega_coupling: spec.omega_coupling,
        full,
        meanfield,
        rabi,
        checks,
    })
}
