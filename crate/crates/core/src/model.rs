//! Physical parameters, numerical controls and bosonic dispersions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{abs, cos, sin, sqrt};
use crate::{Error, Result};

/// Numerical knobs shared by the mean-field solver and the phase scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverControls {
    /// Enlarge the Fock cutoff until the ground energy stops moving.
    pub adaptive_truncation: bool,
    /// Cutoff increment, also the lag of the convergence test.
    pub truncation_step: usize,
    /// Largest Fock cutoff the adaptive loop may reach.
    pub truncation_ceiling: usize,
    /// Allowed |E₀(n_max) − E₀(n_max − step)|.
    pub truncation_eps: f64,
    /// Points of the coarse order-parameter grid, endpoints included.
    pub psi_grid_points: usize,
    /// Width at which golden-section refinement stops.
    pub psi_tolerance: f64,
    /// The order-parameter window may not grow beyond this.
    pub psi_max_ceiling: f64,
    /// A condensed solution must beat E₀(0) by this much (relative to max(1, |E₀|)).
    pub condensation_eps: f64,
    /// Finite-difference step of the curvature at ψ = 0.
    pub fd_step: f64,
    /// Allowed relative disagreement between the steps h and h/2.
    pub fd_rel_tol: f64,
    /// Upper end of the critical-coupling search, in units of ω₁₂.
    pub omega_ceiling: f64,
}

impl Default for SolverControls {
    fn default() -> Self {
        Self {
            adaptive_truncation: true,
            truncation_step: 5,
            truncation_ceiling: 400,
            truncation_eps: 1e-9,
            psi_grid_points: 64,
            psi_tolerance: 1e-6,
            psi_max_ceiling: 256.0,
            condensation_eps: 1e-10,
            fd_step: 1e-3,
            fd_rel_tol: 1e-4,
            omega_ceiling: 10.0,
        }
    }
}

/// Physical parameters of the single-site problem plus numerical controls.
///
/// Every frequency is expressed in units of the transition frequency, so
/// `omega12` is 1 unless a caller deliberately rescales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega12: f64,
    /// Lowest bosonic mode frequency ω_m.
    pub omega_m: f64,
    /// Half width Δ = ω̄ − ω_m of the bosonic dispersion.
    pub delta: f64,
    /// Collective vacuum Rabi frequency Ω.
    pub omega_coupling: f64,
    /// Initial (or fixed, when truncation is not adaptive) Fock cutoff.
    pub n_max: usize,
    pub controls: SolverControls,
}

impl ModelParams {
    pub fn new(omega_m: f64, delta: f64, omega_coupling: f64) -> Self {
        Self {
            omega12: 1.0,
            omega_m,
            delta,
            omega_coupling,
            n_max: 20,
            controls: SolverControls::default(),
        }
    }

    /// Parameters whose (ω_m, Δ) are read off a sampled dispersion.
    pub fn from_dispersion(dispersion: &Dispersion, omega_coupling: f64) -> Self {
        Self::new(dispersion.min(), dispersion.half_width(), omega_coupling)
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_coupling(mut self, omega_coupling: f64) -> Self {
        self.omega_coupling = omega_coupling;
        self
    }

    pub fn with_controls(mut self, controls: SolverControls) -> Self {
        self.controls = controls;
        self
    }

    /// Mean bosonic frequency ω̄ = ω_m + Δ.
    pub fn omega_bar(&self) -> f64 {
        self.omega_m + self.delta
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.omega12.is_finite()
            && self.omega_m.is_finite()
            && self.delta.is_finite()
            && self.omega_coupling.is_finite();
        if !finite {
            return Err(Error::InvalidParameter("parameters must be finite"));
        }
        if self.omega12 <= 0.0 {
            return Err(Error::InvalidParameter("omega12 must be positive"));
        }
        if self.omega_m <= 0.0 {
            return Err(Error::InvalidParameter("omega_m must be positive"));
        }
        if self.delta < 0.0 {
            return Err(Error::InvalidParameter("delta must be non-negative"));
        }
        if self.omega_coupling < 0.0 {
            return Err(Error::InvalidParameter("coupling must be non-negative"));
        }
        let c = &self.controls;
        if c.truncation_step == 0 || c.truncation_ceiling < c.truncation_step {
            return Err(Error::InvalidParameter("bad truncation controls"));
        }
        if c.psi_grid_points < 3 || !(c.psi_tolerance > 0.0) || !(c.fd_step > 0.0) {
            return Err(Error::InvalidParameter("bad minimiser controls"));
        }
        Ok(())
    }
}

/// Bosonic dispersion ω_q sampled on a uniform periodic grid of N modes.
///
/// Sample `j` sits at the phase θ_j = 2πj/N, i.e. the Brillouin zone
/// [−k₀, k₀) shifted so that q = 0 is the first sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    samples: Vec<f64>,
}

impl Dispersion {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("dispersion needs at least one mode"));
        }
        if samples.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter(
                "dispersion samples must be finite and positive",
            ));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn n_modes(&self) -> usize {
        self.samples.len()
    }

    /// ω̄ = (1/N) Σ_q ω_q.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// ω_m = min_q ω_q.
    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Δ = ω̄ − ω_m, clamped at zero against rounding.
    pub fn half_width(&self) -> f64 {
        (self.mean() - self.min()).max(0.0)
    }
}

pub fn make_flat_dispersion(omega_m: f64, n_modes: usize) -> Result<Dispersion> {
    if !(omega_m.is_finite() && omega_m > 0.0) {
        return Err(Error::InvalidParameter("omega_m must be positive"));
    }
    if n_modes == 0 {
        return Err(Error::InvalidParameter("dispersion needs at least one mode"));
    }
    Dispersion::from_samples(alloc::vec![omega_m; n_modes])
}

/// ω_q = ω_m + Δ (1 − cos θ_q) on the periodic grid.
///
/// The q = 0 sample realises the minimum and the grid average of
/// (1 − cos θ) is exactly one for N ≥ 2, so (ω_m, Δ) are reproduced.
/// A single mode cannot carry a width, so N = 1 requires Δ = 0.
pub fn make_cosine_dispersion(omega_m: f64, delta: f64, n_modes: usize) -> Result<Dispersion> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidParameter("delta must be non-negative"));
    }
    if n_modes == 1 && delta > 0.0 {
        return Err(Error::InvalidParameter("a single mode has zero half width"));
    }
    if delta == 0.0 {
        return make_flat_dispersion(omega_m, n_modes);
    }
    if !(omega_m.is_finite() && omega_m > 0.0) {
        return Err(Error::InvalidParameter("omega_m must be positive"));
    }
    let n = n_modes as f64;
    let samples = (0..n_modes)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n;
            omega_m + delta * (1.0 - cos(theta))
        })
        .collect();
    Dispersion::from_samples(samples)
}

fn phase(j: usize, r: usize, n: usize) -> Complex64 {
    // Reduce j·r mod n first so large grids keep full angular precision.
    let theta = 2.0 * PI * ((j * r) % n) as f64 / n as f64;
    Complex64::new(cos(theta), sin(theta))
}

/// Real-space couplings ω̃_r with ω_q = (1/√N) Σ_r ω̃_r e^{iqr}.
///
/// Consequently ω̃₀ = √N ω̄ and a flat dispersion has no r ≠ 0 component.
pub fn real_space_couplings(dispersion: &Dispersion) -> Vec<Complex64> {
    let n = dispersion.n_modes();
    let norm = 1.0 / sqrt(n as f64);
    (0..n)
        .map(|r| {
            dispersion
                .samples()
                .iter()
                .enumerate()
                .map(|(j, &w)| phase(j, r, n).conj() * w)
                .sum::<Complex64>()
                * norm
        })
        .collect()
}

/// Inverse of [`real_space_couplings`]: the (complex) dispersion samples.
pub fn dispersion_from_couplings(couplings: &[Complex64]) -> Vec<Complex64> {
    let n = couplings.len();
    let norm = 1.0 / sqrt(n as f64);
    (0..n)
        .map(|j| {
            couplings
                .iter()
                .enumerate()
                .map(|(r, &c)| phase(j, r, n) * c)
                .sum::<Complex64>()
                * norm
        })
        .collect()
}

/// Real parts of the real-space couplings, rejecting genuinely complex ones.
pub fn real_couplings(dispersion: &Dispersion) -> Result<Vec<f64>> {
    let scale = dispersion.mean().max(1.0) * sqrt(dispersion.n_modes() as f64);
    real_space_couplings(dispersion)
        .into_iter()
        .enumerate()
        .map(|(r, c)| {
            if abs(c.im) > 1e-12 * scale {
                Err(Error::ComplexCoupling { r, imaginary: c.im })
            } else {
                Ok(c.re)
            }
        })
        .collect()
}

/// Outcome of the order-parameter minimisation at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldSolution {
    /// Optimal order parameter ψ* ≥ 0.
    pub psi_star: f64,
    pub ground_energy: f64,
    pub sigma_z_expectation: f64,
    /// Excited-band occupation (⟨σ_z⟩ + 1)/2.
    pub population: f64,
    /// Fluctuation photons ⟨f†f⟩, excluding the coherent ψ².
    pub photon_number: f64,
    /// Whether |E₀(n_max) − E₀(n_max − step)| met the tolerance at ψ*.
    pub converged: bool,
    pub n_max_used: usize,
}
