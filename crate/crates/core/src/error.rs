use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical parameter is outside its allowed domain.
    InvalidParameter(&'static str),
    /// A matrix handed to the eigensolver contains NaN or infinite entries.
    InvalidMatrix,
    /// The eigensolver ran out of iterations.
    EigenNotConverged { residual: f64 },
    /// The ground energy kept moving when the Fock cutoff was enlarged.
    TruncationNotConverged { n_max: usize, change: f64 },
    /// The order-parameter window grew past its hard ceiling.
    OrderParameterRunaway { psi_max: f64 },
    /// The curvature estimates at two step sizes disagree.
    StepSizeMismatch { coarse: f64, fine: f64 },
    /// Curvature bisection and order-parameter onset disagree.
    MethodInconsistency {
        omega_c: f64,
        psi_below: f64,
        psi_above: f64,
    },
    /// The full-model Hilbert space exceeds the hard cap.
    SizeExceeded { dimension: usize, cap: usize },
    /// The real-space couplings of the dispersion are not real.
    ComplexCoupling { r: usize, imaginary: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InvalidMatrix => write!(f, "matrix has non-finite entries"),
            Error::EigenNotConverged { residual } => {
                write!(f, "eigensolver did not converge (residual {residual:e})")
            }
            Error::TruncationNotConverged { n_max, change } => write!(
                f,
                "Fock truncation not converged at n_max = {n_max} (last change {change:e})"
            ),
            Error::OrderParameterRunaway { psi_max } => write!(
                f,
                "order parameter ran away past psi_max = {psi_max}; energy appears unbounded"
            ),
            Error::StepSizeMismatch { coarse, fine } => write!(
                f,
                "finite-difference curvature depends on the step ({coarse:e} vs {fine:e})"
            ),
            Error::MethodInconsistency {
                omega_c,
                psi_below,
                psi_above,
            } => write!(
                f,
                "curvature critical point {omega_c} not confirmed by order parameter \
                 (psi below = {psi_below:e}, psi above = {psi_above:e})"
            ),
            Error::SizeExceeded { dimension, cap } => {
                write!(f, "Hilbert space dimension {dimension} exceeds cap {cap}")
            }
            Error::ComplexCoupling { r, imaginary } => write!(
                f,
                "real-space coupling at r = {r} has imaginary part {imaginary:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}
