//! Single-site mean-field Hamiltonian in a truncated Fock basis.
//!
//! With the coherent field ψ (real) of the lowest bosonic mode and the
//! fluctuation operator f, the homogeneous mean-field Hamiltonian reads
//!
//! ```text
//! H = ω_m ψ² + (ω₁₂/2) σ_z + 2Ωψ σ_x + ω̄ f†f + (Ω σ_x + ψ ω_m)(f† + f)
//! ```
//!
//! Basis index `2n + s` labels n fluctuation quanta and the spin state s
//! (0 for σ_z = −1, 1 for σ_z = +1). Truncating at a smaller cutoff is a
//! leading principal block of the matrix.

use crate::math::{abs, sqrt};
use crate::model::{MeanFieldSolution, ModelParams};
use crate::spectra::{ground_eigenpair, ground_eigenvalue, SymmetricMatrix};
use crate::{Error, Result};

/// Frequencies entering one mean-field matrix.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Terms {
    /// Mode frequency multiplying ψ² and the displacement ψ(f† + f).
    pub coherent: f64,
    /// ω̄, the energy of one fluctuation quantum.
    pub fluctuation: f64,
    pub omega12: f64,
    pub coupling: f64,
}

impl Terms {
    pub(crate) fn lowest_mode(params: &ModelParams) -> Self {
        Self {
            coherent: params.omega_m,
            fluctuation: params.omega_bar(),
            omega12: params.omega12,
            coupling: params.omega_coupling,
        }
    }

    fn assemble(&self, psi: f64, n_max: usize) -> SymmetricMatrix {
        let dim = 2 * (n_max + 1);
        let mut h = SymmetricMatrix::zeros(dim);
        let offset = self.coherent * psi * psi;
        let spin_flip = 2.0 * self.coupling * psi;
        for n in 0..=n_max {
            for s in 0..2 {
                let i = 2 * n + s;
                let sz = 2.0 * s as f64 - 1.0;
                h.set(i, i, offset + 0.5 * sz * self.omega12 + self.fluctuation * n as f64);
                if s == 1 {
                    h.set(i, i - 1, spin_flip);
                }
                if n < n_max {
                    let root = sqrt(n as f64 + 1.0);
                    h.set(2 * (n + 1) + s, i, psi * self.coherent * root);
                    h.set(2 * (n + 1) + (1 - s), i, self.coupling * root);
                }
            }
        }
        h
    }

    fn energy(&self, psi: f64, n_max: usize) -> Result<f64> {
        ground_eigenvalue(&self.assemble(psi, n_max))
    }
}

/// Hamiltonian matrix at the cutoff `params.n_max`.
pub fn build_mean_field_hamiltonian(params: &ModelParams, psi: f64) -> Result<SymmetricMatrix> {
    params.validate()?;
    check_psi(psi)?;
    Ok(Terms::lowest_mode(params).assemble(psi, params.n_max))
}

/// Same matrix with the condensate placed in a mode of frequency `omega_q`
/// instead of the lowest one (ψ² and displacement terms only).
pub fn build_for_mode(params: &ModelParams, psi: f64, omega_q: f64) -> Result<SymmetricMatrix> {
    params.validate()?;
    check_psi(psi)?;
    check_mode(omega_q)?;
    let terms = Terms {
        coherent: omega_q,
        ..Terms::lowest_mode(params)
    };
    Ok(terms.assemble(psi, params.n_max))
}

fn check_psi(psi: f64) -> Result<()> {
    if psi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("psi must be finite"))
    }
}

fn check_mode(omega_q: f64) -> Result<()> {
    if omega_q.is_finite() && omega_q > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("mode frequency must be positive"))
    }
}

/// Ground energy together with the Fock cutoff that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundEnergy {
    pub energy: f64,
    pub n_max_used: usize,
}

fn adaptive_energy(params: &ModelParams, terms: &Terms, psi: f64) -> Result<GroundEnergy> {
    let c = &params.controls;
    if !c.adaptive_truncation {
        return Ok(GroundEnergy {
            energy: terms.energy(psi, params.n_max)?,
            n_max_used: params.n_max,
        });
    }
    let step = c.truncation_step;
    let mut n = params.n_max.max(step);
    let mut previous = terms.energy(psi, n - step)?;
    loop {
        let energy = terms.energy(psi, n)?;
        let change = abs(energy - previous);
        if change <= c.truncation_eps {
            return Ok(GroundEnergy {
                energy,
                n_max_used: n,
            });
        }
        if n + step > c.truncation_ceiling {
            return Err(Error::TruncationNotConverged { n_max: n, change });
        }
        previous = energy;
        n += step;
    }
}

/// Smallest eigenvalue of the mean-field matrix.
///
/// With adaptive truncation the cutoff starts at `params.n_max` and grows in
/// steps until successive energies agree; reaching the ceiling is an error.
pub fn ground_energy(params: &ModelParams, psi: f64) -> Result<GroundEnergy> {
    params.validate()?;
    check_psi(psi)?;
    adaptive_energy(params, &Terms::lowest_mode(params), psi)
}

/// [`ground_energy`] with the condensate in a mode of frequency `omega_q`.
pub fn ground_energy_for_mode(
    params: &ModelParams,
    psi: f64,
    omega_q: f64,
) -> Result<GroundEnergy> {
    params.validate()?;
    check_psi(psi)?;
    check_mode(omega_q)?;
    let terms = Terms {
        coherent: omega_q,
        ..Terms::lowest_mode(params)
    };
    adaptive_energy(params, &terms, psi)
}

/// Ground energy at exactly `n_max`, no adaptivity.
pub fn ground_energy_at_cutoff(params: &ModelParams, psi: f64, n_max: usize) -> Result<f64> {
    params.validate()?;
    check_psi(psi)?;
    Terms::lowest_mode(params).energy(psi, n_max)
}

/// Spin and photon observables of the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub sigma_z: f64,
    /// (⟨σ_z⟩ + 1)/2.
    pub population: f64,
    /// ⟨f†f⟩, fluctuation quanta only.
    pub photon_number: f64,
}

impl Observables {
    pub(crate) fn from_ground_vector(v: &[f64]) -> Self {
        let mut sigma_z = 0.0;
        let mut photons = 0.0;
        for (i, c) in v.iter().enumerate() {
            let w = c * c;
            sigma_z += if i % 2 == 1 { w } else { -w };
            photons += (i / 2) as f64 * w;
        }
        Self {
            sigma_z,
            population: 0.5 * (sigma_z + 1.0),
            photon_number: photons,
        }
    }
}

fn observables_with(terms: &Terms, psi: f64, n_max: usize) -> Result<(f64, Observables)> {
    let pair = ground_eigenpair(&terms.assemble(psi, n_max))?;
    Ok((
        pair.eigenvalue,
        Observables::from_ground_vector(&pair.eigenvector),
    ))
}

/// Observables at a given ψ, using the adaptively converged cutoff.
pub fn observables_at(params: &ModelParams, psi: f64) -> Result<Observables> {
    let cutoff = ground_energy(params, psi)?.n_max_used;
    observables_at_cutoff(params, psi, cutoff).map(|(_, o)| o)
}

/// Ground energy and observables at exactly `n_max`.
pub fn observables_at_cutoff(
    params: &ModelParams,
    psi: f64,
    n_max: usize,
) -> Result<(f64, Observables)> {
    params.validate()?;
    check_psi(psi)?;
    observables_with(&Terms::lowest_mode(params), psi, n_max)
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimises E₀(ψ) over ψ ≥ 0 (E₀ is even in ψ).
///
/// A coarse grid on [0, ψ_max] locates the basin, golden-section search
/// refines it. ψ_max doubles whenever the grid minimum sits on the upper
/// edge. One Fock cutoff, converged at both ends of the window, is used for
/// every ψ so that energies at different ψ are directly comparable. A
/// condensed solution is only reported if it lowers the energy below E₀(0) by
/// more than `condensation_eps`.
pub fn minimize_over_psi(params: &ModelParams) -> Result<MeanFieldSolution> {
    params.validate()?;
    minimize_with(params, &Terms::lowest_mode(params))
}

pub(crate) fn minimize_with(params: &ModelParams, terms: &Terms) -> Result<MeanFieldSolution> {
    let c = &params.controls;
    let mut psi_max = 4.0 * terms.coupling / terms.coherent + 1.0;
    loop {
        if psi_max > c.psi_max_ceiling {
            return Err(Error::OrderParameterRunaway { psi_max });
        }
        let n_max = if c.adaptive_truncation {
            let low = adaptive_energy(params, terms, 0.0)?.n_max_used;
            let high = adaptive_energy(params, terms, psi_max)?.n_max_used;
            low.max(high)
        } else {
            params.n_max
        };
        let energy = |psi: f64| terms.energy(psi, n_max);

        let points = c.psi_grid_points;
        let spacing = psi_max / (points - 1) as f64;
        let mut best = (0usize, f64::INFINITY);
        let mut e_zero = 0.0;
        for k in 0..points {
            let e = energy(k as f64 * spacing)?;
            if k == 0 {
                e_zero = e;
            }
            if e < best.1 {
                best = (k, e);
            }
        }
        if best.0 == points - 1 {
            psi_max *= 2.0;
            continue;
        }

        let (k, e_grid) = best;
        let mut a = k.saturating_sub(1) as f64 * spacing;
        let mut b = (k + 1) as f64 * spacing;
        let mut x1 = b - INV_GOLDEN * (b - a);
        let mut x2 = a + INV_GOLDEN * (b - a);
        let mut f1 = energy(x1)?;
        let mut f2 = energy(x2)?;
        while b - a > c.psi_tolerance {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_GOLDEN * (b - a);
                f1 = energy(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_GOLDEN * (b - a);
                f2 = energy(x2)?;
            }
        }
        let psi_golden = 0.5 * (a + b);
        let e_golden = energy(psi_golden)?;
        let (mut psi_star, mut e_star) = if e_golden < e_grid {
            (psi_golden, e_golden)
        } else {
            (k as f64 * spacing, e_grid)
        };
        if e_star >= e_zero - c.condensation_eps * abs(e_zero).max(1.0) {
            psi_star = 0.0;
            e_star = e_zero;
        }

        let (_, obs) = observables_with(terms, psi_star, n_max)?;
        let converged = n_max >= c.truncation_step
            && abs(e_star - terms.energy(psi_star, n_max - c.truncation_step)?)
                <= c.truncation_eps;
        return Ok(MeanFieldSolution {
            psi_star,
            ground_energy: e_star,
            sigma_z_expectation: obs.sigma_z,
            population: obs.population,
            photon_number: obs.photon_number,
            converged,
            n_max_used: n_max,
        });
    }
}
