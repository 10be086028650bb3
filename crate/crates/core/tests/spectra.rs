mod common;

use common::{jacobi_eigen, random_symmetric, Dense};
use flatband_core::spectra::ground_eigenvalue;
use flatband_core::{full_spectrum, ground_eigenpair, SymmetricMatrix};
use proptest::prelude::*;

#[test]
fn random_fifty_matches_jacobi() {
    for seed in 1..=5 {
        let h = random_symmetric(50, seed);
        let (values, vectors) = jacobi_eigen(&Dense::from_symmetric(&h));
        let pair = ground_eigenpair(&h).unwrap();
        assert!((pair.eigenvalue - values[0]).abs() < 1e-10);
        let overlap: f64 = (0..50).map(|k| vectors[(k, 0)] * pair.eigenvector[k]).sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-8);
        assert!(pair.residual(&h) < 1e-9);
    }
}

#[test]
fn full_spectrum_matches_jacobi() {
    let h = random_symmetric(40, 99);
    let (values, _) = jacobi_eigen(&Dense::from_symmetric(&h));
    let spectrum = full_spectrum(&h).unwrap();
    for (a, b) in spectrum.iter().zip(&values) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn sign_convention_first_significant_component_positive() {
    let h = SymmetricMatrix::from_lower_fn(3, |i, j| if i == j { 2.0 } else { -1.0 });
    let v = ground_eigenpair(&h).unwrap().eigenvector;
    let first = v.iter().find(|x| x.abs() > 1e-10).unwrap();
    assert!(*first > 0.0);
    let norm: f64 = v.iter().map(|x| x * x).sum();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn repeated_calls_bit_identical() {
    let h = random_symmetric(30, 7);
    assert_eq!(ground_eigenpair(&h).unwrap(), ground_eigenpair(&h).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ground_is_spectrum_minimum(dim in 1usize..=200, seed in any::<u64>()) {
        let h = random_symmetric(dim, seed);
        let spectrum = full_spectrum(&h).unwrap();
        let pair = ground_eigenpair(&h).unwrap();
        let scale = 1.0 + h.max_abs() * dim as f64;
        prop_assert!((pair.eigenvalue - spectrum[0]).abs() <= 1e-10 * scale);
        prop_assert!((ground_eigenvalue(&h).unwrap() - spectrum[0]).abs() <= 1e-10 * scale);
        let sum: f64 = spectrum.iter().sum();
        prop_assert!((sum - h.trace()).abs() <= 1e-10 * scale);
        prop_assert!((h.rayleigh_quotient(&pair.eigenvector) - pair.eigenvalue).abs() <= 1e-10 * scale);
        prop_assert!(spectrum.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn wide_envelope_sparse_matches_spectrum() {
    // Sparse couplings reaching far below the diagonal.
    let n = 400;
    let h = SymmetricMatrix::from_lower_fn(n, |i, j| {
        if i == j {
            (i % 17) as f64 * 0.3
        } else if i - j == 1 || i - j == 250 {
            -0.4
        } else {
            0.0
        }
    });
    let pair = ground_eigenpair(&h).unwrap();
    let spectrum = full_spectrum(&h).unwrap();
    assert!((pair.eigenvalue - spectrum[0]).abs() < 1e-10);
    assert!(pair.residual(&h) < 1e-9);
    assert!((ground_eigenvalue(&h).unwrap() - spectrum[0]).abs() < 1e-10);
}

#[test]
fn near_degenerate_pair_resolved() {
    // Two weakly coupled copies of a chain: the lowest pair is split by 1e−6.
    let n = 300;
    let h = SymmetricMatrix::from_lower_fn(n, |i, j| {
        let half = n / 2;
        if i == j {
            0.0
        } else if i - j == 1 && i != half {
            -1.0
        } else if i - j == half {
            -1e-6
        } else {
            0.0
        }
    });
    let pair = ground_eigenpair(&h).unwrap();
    let spectrum = full_spectrum(&h).unwrap();
    assert!(spectrum[1] - spectrum[0] < 1e-5);
    assert!((pair.eigenvalue - spectrum[0]).abs() < 1e-10);
}
