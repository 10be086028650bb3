//! CSV and PGM writers. Numbers are always printed with 17 significant
//! digits in scientific notation, so equal results give equal bytes.

use flatband_core::phase::{BoundaryStatus, PhaseBoundary, SweepGrid};
use flatband_core::Error;

pub const BOUNDARY_HEADER: &str = "delta_over_omega12,omega_c_over_omega12,status";
pub const POPMAP_HEADER: &str = "omega_over_omega12,delta_over_omega12,population,psi_star";

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Short CSV-safe name of an error variant.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::InvalidMatrix => "invalid-matrix",
        Error::EigenNotConverged { .. } => "eigen-not-converged",
        Error::TruncationNotConverged { .. } => "truncation-not-converged",
        Error::OrderParameterRunaway { .. } => "order-parameter-runaway",
        Error::StepSizeMismatch { .. } => "step-size-mismatch",
        Error::MethodInconsistency { .. } => "method-inconsistency",
        Error::SizeExceeded { .. } => "size-exceeded",
        Error::ComplexCoupling { .. } => "complex-coupling",
    }
}

pub fn status_label(status: &BoundaryStatus) -> String {
    match status {
        BoundaryStatus::Critical(_) => "ok".to_string(),
        BoundaryStatus::NoTransitionInRange => "no-transition-in-range".to_string(),
        BoundaryStatus::Failed(e) => format!("failed:{}", error_kind(e)),
    }
}

pub fn boundary_csv(boundary: &PhaseBoundary) -> String {
    let mut out = String::from(BOUNDARY_HEADER);
    out.push('\n');
    for entry in &boundary.entries {
        let omega_c = entry.omega_c().unwrap_or(f64::NAN);
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_num(entry.delta),
            fmt_num(omega_c),
            status_label(&entry.status)
        ));
    }
    out
}

/// Long form, Δ-major: all Ω for the first Δ, then the next Δ.
/// Failed cells carry NaN.
pub fn popmap_csv(grid: &SweepGrid) -> String {
    let mut out = String::from(POPMAP_HEADER);
    out.push('\n');
    for cell in &grid.cells {
        let (population, psi) = match &cell.result {
            Ok(s) => (s.population, s.psi_star),
            Err(_) => (f64::NAN, f64::NAN),
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_num(cell.omega),
            fmt_num(cell.delta),
            fmt_num(population),
            fmt_num(psi)
        ));
    }
    out
}

/// Population 0 maps to 0 and 0.5 (or more) to 255; NaN maps to 0.
pub fn pgm_level(population: f64) -> u8 {
    if population.is_nan() {
        return 0;
    }
    (population / 0.5 * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Binary P5 image, Ω increasing rightward and Δ increasing downward.
pub fn popmap_pgm(grid: &SweepGrid) -> Vec<u8> {
    let width = grid.spec.omega_axis.count;
    let height = grid.spec.delta_axis.count;
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(grid.cells.iter().map(|c| {
        pgm_level(c.result.as_ref().map_or(f64::NAN, |s| s.population))
    }));
    out
}
