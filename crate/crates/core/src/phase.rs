//! Critical couplings, phase boundaries and population maps.

use alloc::vec::Vec;

use crate::math::{abs, sqrt};
use crate::meanfield::{minimize_with, Terms};
use crate::model::{MeanFieldSolution, ModelParams};
use crate::{ground_energy, minimize_over_psi, Error, Result};

/// Ω_c = √(ω_m ω₁₂)/2, the critical coupling when fluctuations are frozen out.
pub fn dicke_limit_critical(omega_m: f64, omega12: f64) -> f64 {
    sqrt(omega_m * omega12) / 2.0
}

/// Curvature of E₀(ψ) at ψ = 0 from two finite-difference steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureEstimate {
    /// 2(E₀(h) − E₀(0))/h².
    pub coarse: f64,
    /// Same with step h/2.
    pub fine: f64,
    /// Largest disagreement accepted between the two steps.
    pub tolerance: f64,
    pub n_max_used: usize,
}

impl CurvatureEstimate {
    pub fn steps_agree(&self) -> bool {
        abs(self.coarse - self.fine) <= self.tolerance
    }
}

/// Both finite-difference estimates at step `h`, evaluated at one shared cutoff.
pub fn curvature_estimates(params: &ModelParams, h: f64) -> Result<CurvatureEstimate> {
    params.validate()?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive"));
    }
    let n_max = if params.controls.adaptive_truncation {
        let a = ground_energy(params, 0.0)?.n_max_used;
        let b = ground_energy(params, h)?.n_max_used;
        a.max(b)
    } else {
        params.n_max
    };
    let energy = |psi| crate::meanfield::ground_energy_at_cutoff(params, psi, n_max);
    let e0 = energy(0.0)?;
    let e1 = energy(h)?;
    let e2 = energy(0.5 * h)?;
    let coarse = 2.0 * (e1 - e0) / (h * h);
    let fine = 8.0 * (e2 - e0) / (h * h);

    // Curvature of the uncoupled problem, the natural scale of the result.
    let bare = 2.0 * params.omega_m * params.delta / params.omega_bar();
    // Rounding floor of the energy differences, from the matrix norm.
    let norm = params.omega_bar() * n_max as f64
        + params.omega12
        + 2.0 * params.omega_coupling * sqrt(n_max as f64 + 1.0)
        + abs(e0);
    let noise = 16.0 * f64::EPSILON * norm * 4.0 / (h * h);
    let tolerance = params.controls.fd_rel_tol * abs(coarse).max(bare) + noise;
    Ok(CurvatureEstimate {
        coarse,
        fine,
        tolerance,
        n_max_used: n_max,
    })
}

/// d²E₀/dψ² at ψ = 0 with the default step, checked against half the step.
pub fn curvature_at_zero(params: &ModelParams) -> Result<f64> {
    let est = curvature_estimates(params, params.controls.fd_step)?;
    if est.steps_agree() {
        Ok(est.coarse)
    } else {
        Err(Error::StepSizeMismatch {
            coarse: est.coarse,
            fine: est.fine,
        })
    }
}

/// Whether ψ = 0 is locally unstable (negative curvature).
///
/// When the two steps disagree but share a sign the sign is still trusted;
/// near an almost degenerate ground state E₀(ψ) is not quadratic on the
/// scale of the step even though its trend is unambiguous.
fn normal_phase_unstable(params: &ModelParams) -> Result<bool> {
    let est = curvature_estimates(params, params.controls.fd_step)?;
    if est.steps_agree() || (est.coarse < 0.0) == (est.fine < 0.0) {
        Ok(est.coarse < 0.0)
    } else {
        Err(Error::StepSizeMismatch {
            coarse: est.coarse,
            fine: est.fine,
        })
    }
}

/// Result of a critical-coupling search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalOutcome {
    /// Ω_c is the midpoint of a bracket of width at most the tolerance.
    Critical { omega_c: f64, lower: f64, upper: f64 },
    /// The normal phase stays stable up to the search ceiling.
    NoTransitionInRange { ceiling: f64 },
}

impl CriticalOutcome {
    pub fn omega_c(&self) -> Option<f64> {
        match self {
            CriticalOutcome::Critical { omega_c, .. } => Some(*omega_c),
            CriticalOutcome::NoTransitionInRange { .. } => None,
        }
    }
}

/// Brackets the coupling where `broken(Ω)` switches from false to true and
/// bisects it down to `tol`. The search starts at the Dicke value.
fn bisect_coupling(
    base: &ModelParams,
    tol: f64,
    mut broken: impl FnMut(f64) -> Result<bool>,
) -> Result<CriticalOutcome> {
    let ceiling = base.controls.omega_ceiling * base.omega12;
    let start = dicke_limit_critical(base.omega_m, base.omega12).min(ceiling);
    let (mut lo, mut hi);
    if broken(start)? {
        hi = start;
        lo = 0.5 * start;
        while broken(lo)? {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-3 * tol {
                lo = 0.0;
                break;
            }
        }
    } else {
        lo = start;
        loop {
            if lo >= ceiling {
                return Ok(CriticalOutcome::NoTransitionInRange { ceiling });
            }
            let next = (1.5 * lo).min(ceiling);
            if broken(next)? {
                hi = next;
                break;
            }
            lo = next;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if broken(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalOutcome::Critical {
        omega_c: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
    })
}

fn check_search(base: &ModelParams, tol: f64) -> Result<()> {
    base.validate()?;
    if !(base.delta > 0.0) {
        return Err(Error::InvalidParameter(
            "a flat dispersion has no critical point; delta must be positive",
        ));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    Ok(())
}

/// Critical coupling at resonance-independent (Δ, ω_m) with default controls.
pub fn critical_coupling(delta: f64, omega_m: f64, tol: f64) -> Result<CriticalOutcome> {
    critical_coupling_for(&ModelParams::new(omega_m, delta, 0.0), tol)
}

/// Bisection on the sign of the curvature at ψ = 0, confirmed by the order
/// parameter: ψ*(Ω_c + 5 tol) must exceed 1e−3 and ψ*(Ω_c − 5 tol) must stay
/// below 1e−6. `base.omega_coupling` is ignored.
pub fn critical_coupling_for(base: &ModelParams, tol: f64) -> Result<CriticalOutcome> {
    check_search(base, tol)?;
    let outcome = bisect_coupling(base, tol, |omega| {
        normal_phase_unstable(&base.with_coupling(omega))
    })?;
    if let CriticalOutcome::Critical { omega_c, .. } = outcome {
        let psi_above = minimize_over_psi(&base.with_coupling(omega_c + 5.0 * tol))?.psi_star;
        let psi_below =
            minimize_over_psi(&base.with_coupling((omega_c - 5.0 * tol).max(0.0)))?.psi_star;
        if !(psi_above > 1e-3 && psi_below < 1e-6) {
            return Err(Error::MethodInconsistency {
                omega_c,
                psi_below,
                psi_above,
            });
        }
    }
    Ok(outcome)
}

/// Critical coupling located by the onset of a condensed minimum (ψ* > 0).
pub fn onset_critical_coupling(base: &ModelParams, tol: f64) -> Result<CriticalOutcome> {
    check_search(base, tol)?;
    bisect_coupling(base, tol, |omega| {
        Ok(minimize_over_psi(&base.with_coupling(omega))?.psi_star > 0.0)
    })
}

/// Status of one row of a phase-boundary scan.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryStatus {
    Critical(f64),
    NoTransitionInRange,
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEntry {
    /// Δ/ω₁₂.
    pub delta: f64,
    pub status: BoundaryStatus,
    pub tolerance: f64,
}

impl BoundaryEntry {
    pub fn omega_c(&self) -> Option<f64> {
        match self.status {
            BoundaryStatus::Critical(w) => Some(w),
            _ => None,
        }
    }
}

/// Critical couplings as a function of the dispersion half width.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseBoundary {
    /// Sorted by Δ.
    pub entries: Vec<BoundaryEntry>,
    pub method: &'static str,
}

pub const BOUNDARY_METHOD: &str = "curvature-bisection";

/// One boundary row; failures are captured in the status.
pub fn boundary_entry(base: &ModelParams, delta: f64, tol: f64) -> BoundaryEntry {
    let params = ModelParams { delta, ..*base };
    let status = match critical_coupling_for(&params, tol) {
        Ok(CriticalOutcome::Critical { omega_c, .. }) => BoundaryStatus::Critical(omega_c),
        Ok(CriticalOutcome::NoTransitionInRange { .. }) => BoundaryStatus::NoTransitionInRange,
        Err(e) => BoundaryStatus::Failed(e),
    };
    BoundaryEntry {
        delta,
        status,
        tolerance: tol,
    }
}

pub fn phase_boundary_scan(delta_values: &[f64], omega_m: f64, tol: f64) -> Result<PhaseBoundary> {
    phase_boundary_scan_for(&ModelParams::new(omega_m, 0.0, 0.0), delta_values, tol)
}

pub fn phase_boundary_scan_for(
    base: &ModelParams,
    delta_values: &[f64],
    tol: f64,
) -> Result<PhaseBoundary> {
    if delta_values.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(Error::InvalidParameter("boundary scan needs positive delta values"));
    }
    let mut deltas = delta_values.to_vec();
    deltas.sort_by(f64::total_cmp);
    Ok(PhaseBoundary {
        entries: deltas.iter().map(|&d| boundary_entry(base, d, tol)).collect(),
        method: BOUNDARY_METHOD,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

/// `count` points from `min` to `max`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl SweepAxis {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            scale: AxisScale::Linear,
        }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            scale: AxisScale::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidParameter("axis needs at least two points"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) {
            return Err(Error::InvalidParameter("axis needs finite min < max"));
        }
        if self.scale == AxisScale::Log && !(self.min > 0.0) {
            return Err(Error::InvalidParameter("log axis needs a positive minimum"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.scale {
                    AxisScale::Linear => self.min + (self.max - self.min) * t,
                    AxisScale::Log => {
                        libm::exp(libm::log(self.min) + (libm::log(self.max) - libm::log(self.min)) * t)
                    }
                }
            })
            .collect()
    }
}

/// Axes of a population map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub omega_axis: SweepAxis,
    pub delta_axis: SweepAxis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub omega: f64,
    pub delta: f64,
    pub result: core::result::Result<MeanFieldSolution, Error>,
}

/// Population map over (Ω, Δ), stored row by row with Δ as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub spec: SweepSpec,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn cell(&self, delta_index: usize, omega_index: usize) -> &SweepCell {
        &self.cells[delta_index * self.spec.omega_axis.count + omega_index]
    }

    /// Cells at fixed Δ, in increasing Ω.
    pub fn row(&self, delta_index: usize) -> &[SweepCell] {
        let n = self.spec.omega_axis.count;
        &self.cells[delta_index * n..(delta_index + 1) * n]
    }
}

pub fn population_cell(base: &ModelParams, omega: f64, delta: f64) -> SweepCell {
    let params = ModelParams {
        delta,
        omega_coupling: omega,
        ..*base
    };
    SweepCell {
        omega,
        delta,
        result: minimize_over_psi(&params),
    }
}

pub fn population_map(spec: &SweepSpec, omega_m: f64) -> Result<SweepGrid> {
    population_map_for(&ModelParams::new(omega_m, 0.0, 0.0), spec)
}

pub fn population_map_for(base: &ModelParams, spec: &SweepSpec) -> Result<SweepGrid> {
    spec.omega_axis.validate()?;
    spec.delta_axis.validate()?;
    if spec.omega_axis.min < 0.0 || spec.delta_axis.min < 0.0 {
        return Err(Error::InvalidParameter("sweep axes must be non-negative"));
    }
    let omegas = spec.omega_axis.values();
    let cells = spec
        .delta_axis
        .values()
        .into_iter()
        .flat_map(|d| omegas.iter().map(move |&w| (w, d)))
        .map(|(w, d)| population_cell(base, w, d))
        .collect();
    Ok(SweepGrid { spec: *spec, cells })
}

/// Minimised mean-field energy when the condensate sits in a mode of
/// frequency `omega_q` instead of the lowest one.
pub fn mode_condensation_energy(params: &ModelParams, omega_q: f64) -> Result<MeanFieldSolution> {
    params.validate()?;
    if !(omega_q.is_finite() && omega_q > 0.0) {
        return Err(Error::InvalidParameter("mode frequency must be positive"));
    }
    let terms = Terms {
        coherent: omega_q,
        ..Terms::lowest_mode(params)
    };
    minimize_with(params, &terms)
}
