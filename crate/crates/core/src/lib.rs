//! Mean-field quantum phases of a multimode bosonic field coupled to two flat
//! electronic bands.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`model`] holds the physical parameters and bosonic dispersions,
//! * [`spectra`] is the real-symmetric eigensolver used everywhere,
//! * [`meanfield`] builds and minimises the single-site mean-field Hamiltonian,
//! * [`phase`] locates critical couplings and sweeps the (Ω, Δ) plane,
//! * [`oracle`] diagonalises the full few-site model and the quantum Rabi model.
//!
//! All frequencies are measured in units of the band gap ω₁₂.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod meanfield;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod spectra;

pub use error::{Error, Result};
pub use meanfield::{
    build_mean_field_hamiltonian, ground_energy, minimize_over_psi, observables_at,
    GroundEnergy, Observables,
};
pub use model::{
    make_cosine_dispersion, make_flat_dispersion, real_space_couplings, Dispersion,
    MeanFieldSolution, ModelParams, SolverControls,
};
pub use phase::{
    critical_coupling, curvature_at_zero, dicke_limit_critical, phase_boundary_scan,
    population_map, CriticalOutcome, PhaseBoundary, SweepAxis, SweepGrid,
};
pub use spectra::{full_spectrum, ground_eigenpair, EigenPair, SymmetricMatrix};
