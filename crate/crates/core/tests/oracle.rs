mod common;

use common::{annihilation, creation, jacobi_eigen, number, sigma_x, sigma_z, Dense};
use flatband_core::model::real_couplings;
use flatband_core::oracle::{
    build_full_hamiltonian, compare_full_vs_meanfield, full_ground, rabi_ground, rabi_matrix,
    FullModelSpec, MAX_DIMENSION,
};
use flatband_core::{
    build_mean_field_hamiltonian, ground_eigenpair, make_cosine_dispersion, make_flat_dispersion,
    Dispersion, Error, ModelParams,
};

fn flat(n_sites: usize, coupling: f64, n_max: usize) -> FullModelSpec {
    FullModelSpec {
        n_sites,
        dispersion: make_flat_dispersion(1.0, n_sites).unwrap(),
        n_max_site: n_max,
        omega12: 1.0,
        omega_coupling: coupling,
    }
}

/// Operator acting on one site of the product space.
fn embed(op: &Dense, site: usize, n_sites: usize, local: usize) -> Dense {
    let id = Dense::identity(local);
    let mut out = Dense::identity(1);
    for r in 0..n_sites {
        out = out.kron(if r == site { op } else { &id });
    }
    out
}

/// Full real-space Hamiltonian from explicit tensor products.
fn full_by_products(spec: &FullModelSpec) -> Dense {
    let n = spec.n_sites;
    let nm = spec.n_max_site;
    let local = 2 * (nm + 1);
    let is = Dense::identity(2);
    let ib = Dense::identity(nm + 1);
    let omega_bar = spec.dispersion.mean();
    let couplings = real_couplings(&spec.dispersion).unwrap();
    let site_h = number(nm)
        .kron(&is)
        .scaled(omega_bar)
        .plus(&ib.kron(&sigma_z()).scaled(0.5 * spec.omega12))
        .plus(&creation(nm).plus(&annihilation(nm)).kron(&sigma_x()).scaled(spec.omega_coupling));
    let raise = creation(nm).kron(&is);
    let lower = annihilation(nm).kron(&is);
    let mut h = Dense::zeros(local.pow(n as u32));
    for r in 0..n {
        h = h.plus(&embed(&site_h, r, n, local));
        for rp in 0..n {
            if rp == r {
                continue;
            }
            let t = couplings[(rp + n - r) % n] / (n as f64).sqrt();
            let hop = embed(&raise, r, n, local).matmul(&embed(&lower, rp, n, local));
            h = h.plus(&hop.scaled(t));
        }
    }
    h
}

#[test]
fn single_site_is_the_meanfield_matrix_at_resonance() {
    for &coupling in &[0.0, 0.4, 1.3] {
        let rabi = rabi_matrix(1.0, 1.0, coupling, 15).unwrap();
        let mf = build_mean_field_hamiltonian(&ModelParams::new(1.0, 0.0, coupling).with_n_max(15), 0.0)
            .unwrap();
        assert_eq!(rabi, mf);
    }
}

#[test]
fn two_site_flat_factorises() {
    for &coupling in &[0.2, 0.8, 1.5] {
        let n_max = 30;
        let full = full_ground(&flat(2, coupling, n_max)).unwrap();
        let rabi = ground_eigenpair(&rabi_matrix(1.0, 1.0, coupling, n_max).unwrap())
            .unwrap()
            .eigenvalue;
        assert!((2.0 * full.energy_per_site - 2.0 * rabi).abs() < 1e-10, "Ω={coupling}");
    }
}

#[test]
fn flat_dispersion_has_no_hopping() {
    let h = build_full_hamiltonian(&flat(2, 0.5, 3)).unwrap();
    let local = 8;
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let (si, sj) = (i / local, j / local);
            let (li, lj) = (i % local, j % local);
            if si != sj && li != lj {
                assert_eq!(h.get(i, j), 0.0);
            }
        }
    }
}

#[test]
fn uncoupled_two_sites() {
    let g = full_ground(&flat(2, 0.0, 5)).unwrap();
    assert!((2.0 * g.energy_per_site + 1.0).abs() < 1e-14);
    assert!((g.sigma_z + 1.0).abs() < 1e-14);
    assert!(g.photon_number.abs() < 1e-14);
}

#[test]
fn energy_nonincreasing_in_coupling() {
    let mut spec = FullModelSpec {
        dispersion: make_cosine_dispersion(1.0, 0.5, 2).unwrap(),
        ..flat(2, 0.0, 12)
    };
    let mut last = f64::INFINITY;
    for k in 0..=8 {
        spec.omega_coupling = 0.15 * k as f64;
        let e = full_ground(&spec).unwrap().energy_per_site;
        assert!(e <= last + 1e-12);
        last = e;
    }
}

#[test]
fn two_site_matrix_matches_tensor_products() {
    let spec = FullModelSpec {
        dispersion: make_cosine_dispersion(1.0, 0.7, 2).unwrap(),
        ..flat(2, 0.6, 3)
    };
    let h = build_full_hamiltonian(&spec).unwrap();
    let reference = full_by_products(&spec);
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            assert!((h.get(i, j) - reference[(i, j)]).abs() < 1e-13, "({i},{j})");
        }
    }
}

#[test]
fn three_site_matrix_matches_tensor_products() {
    let spec = FullModelSpec {
        dispersion: make_cosine_dispersion(1.0, 0.4, 3).unwrap(),
        ..flat(3, 0.5, 1)
    };
    let h = build_full_hamiltonian(&spec).unwrap();
    let reference = full_by_products(&spec);
    assert_eq!(h.dim(), 64);
    for i in 0..64 {
        for j in 0..64 {
            assert!((h.get(i, j) - reference[(i, j)]).abs() < 1e-13, "({i},{j})");
        }
    }
    let (values, _) = jacobi_eigen(&reference);
    let e = full_ground(&spec).unwrap().energy_per_site * 3.0;
    assert!((e - values[0]).abs() < 1e-10);
}

#[test]
fn three_site_flat_factorises() {
    let g = full_ground(&flat(3, 0.7, 8)).unwrap();
    let rabi = ground_eigenpair(&rabi_matrix(1.0, 1.0, 0.7, 8).unwrap()).unwrap().eigenvalue;
    assert!((g.energy_per_site - rabi).abs() < 1e-10);
}

#[test]
fn hopping_spectrum_reproduces_dispersion() {
    // One boson, spins frozen at Ω = 0: single-particle energies are ω_q − 1.
    let dispersion = Dispersion::from_samples(vec![1.0, 2.5, 2.5]).unwrap();
    let spec = FullModelSpec { dispersion, ..flat(3, 0.0, 1) };
    let spectrum = flatband_core::full_spectrum(&build_full_hamiltonian(&spec).unwrap()).unwrap();
    let ground = -1.5;
    let mut one_boson: Vec<f64> = spectrum
        .iter()
        .map(|e| e - ground)
        .filter(|e| *e > 0.5 && *e < 3.0)
        .collect();
    one_boson.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    assert!(one_boson.iter().any(|e| (e - 1.0).abs() < 1e-10));
    assert!(one_boson.iter().any(|e| (e - 2.5).abs() < 1e-10));
}

#[test]
fn size_cap_enforced() {
    assert_eq!(FullModelSpec::max_cutoff(2), 49);
    assert_eq!(FullModelSpec::max_cutoff(3), 9);
    assert!(flat(2, 0.1, 49).validate().is_ok());
    assert!(matches!(flat(2, 0.1, 50).validate(), Err(Error::SizeExceeded { .. })));
    let too_many = FullModelSpec { dispersion: make_flat_dispersion(1.0, 4).unwrap(), ..flat(3, 0.1, 1) };
    let too_many = FullModelSpec { n_sites: 4, ..too_many };
    assert!(matches!(too_many.validate(), Err(Error::SizeExceeded { cap: MAX_DIMENSION, .. })));
}

#[test]
fn rabi_examples() {
    let g = rabi_ground(1.0, 1.0, 0.0, 10).unwrap();
    assert_eq!((g.energy, g.sigma_z), (-0.5, -1.0));
    assert!(g.photon_number.abs() < 1e-14);
    let g = rabi_ground(1.0, 1.0, 0.1, 30).unwrap();
    assert!((g.energy + 0.505).abs() < 2e-4);
    assert!(matches!(rabi_ground(1.0, 1.0, 3.0, 10), Err(Error::TruncationNotConverged { .. })));
}

#[test]
fn report_at_resonance_passes() {
    for &coupling in &[0.0, 0.7] {
        let report = compare_full_vs_meanfield(&flat(2, coupling, 25)).unwrap();
        assert_eq!(report.checks.len(), 4);
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn report_away_from_resonance_is_report_only() {
    let spec = FullModelSpec {
        dispersion: make_cosine_dispersion(1.0, 2.0, 2).unwrap(),
        ..flat(2, 0.6, 20)
    };
    let report = compare_full_vs_meanfield(&spec).unwrap();
    assert!(report.checks.is_empty());
    assert!(report.passed());
    assert!((report.delta - 2.0).abs() < 1e-14);
    assert!(report.full.energy_per_site.is_finite());
}

#[test]
fn uncoupled_report_energies() {
    let spec = FullModelSpec {
        dispersion: make_cosine_dispersion(1.0, 1.5, 2).unwrap(),
        ..flat(2, 0.0, 10)
    };
    let r = compare_full_vs_meanfield(&spec).unwrap();
    for e in [r.full.energy_per_site, r.meanfield.ground_energy, r.rabi.energy] {
        assert!((e + 0.5).abs() < 1e-12);
    }
}
