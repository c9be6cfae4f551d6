use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ghzswap::quantum::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn angle() -> impl Strategy<Value = f64> {
    -4.0 * PI..4.0 * PI
}

fn settings() -> impl Strategy<Value = AngleSettings> {
    (angle(), angle(), angle(), angle()).prop_map(|(a, b, c, d)| AngleSettings::new(a, b, c, d))
}

fn random_state(rng: &mut ChaCha8Rng) -> FourPhotonState {
    let mut amps = [Complex64::new(0.0, 0.0); DIMENSION];
    for a in amps.iter_mut() {
        *a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    FourPhotonState::from_amplitudes(amps.map(|z| z / norm))
}

/// Bell vector written out term by term, independent of the library's table.
fn bell_ket(b: BellOutcome, p1: usize, p2: usize) -> f64 {
    let s = FRAC_1_SQRT_2;
    match (b, p1, p2) {
        (BellOutcome::PhiPlus, 0, 0) | (BellOutcome::PhiPlus, 1, 1) => s,
        (BellOutcome::PhiMinus, 0, 0) => s,
        (BellOutcome::PhiMinus, 1, 1) => -s,
        (BellOutcome::PsiPlus, 0, 1) | (BellOutcome::PsiPlus, 1, 0) => s,
        (BellOutcome::PsiMinus, 0, 1) => s,
        (BellOutcome::PsiMinus, 1, 0) => -s,
        _ => 0.0,
    }
}

/// Rotated singlet product built from explicit 2×2 matrices and Kronecker
/// products, then projected with the term-by-term Bell kets above.
fn kron_oracle(angles: &AngleSettings) -> [[f64; 4]; 4] {
    let rot = |p: f64| [[p.cos(), -p.sin()], [p.sin(), p.cos()]];
    let singlet = [[0.0, FRAC_1_SQRT_2], [-FRAC_1_SQRT_2, 0.0]];
    let r = angles.to_array().map(rot);
    // rotated pair amplitudes: psi'[i][j] = Σ R_a[i][k] R_b[j][l] psi[k][l]
    let pair = |ra: [[f64; 2]; 2], rb: [[f64; 2]; 2]| {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[i][j] += ra[i][k] * rb[j][l] * singlet[k][l];
                    }
                }
            }
        }
        out
    };
    let ab = pair(r[0], r[1]);
    let cd = pair(r[2], r[3]);
    let mut m = [[0.0; 4]; 4];
    for bc in BellOutcome::ALL {
        for ad in BellOutcome::ALL {
            let mut acc = 0.0;
            for (a, ab_row) in ab.iter().enumerate() {
                for (b, &ab_amp) in ab_row.iter().enumerate() {
                    for (c, cd_row) in cd.iter().enumerate() {
                        for (d, &cd_amp) in cd_row.iter().enumerate() {
                            acc += bell_ket(bc, b, c) * bell_ket(ad, a, d) * ab_amp * cd_amp;
                        }
                    }
                }
            }
            m[bc.index()][ad.index()] = acc;
        }
    }
    m
}

#[test]
fn closed_form_matches_numeric_on_1000_random_settings() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let vw = make_vw_state();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let angles = AngleSettings::new(
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        );
        let numeric = bell_bell_amplitudes_numeric(&apply_all_rotations(&vw, &angles));
        let closed = bell_bell_amplitudes_closed_form(&angles);
        worst = worst.max(numeric.max_abs_diff(&closed));
        assert!((numeric.total_probability() - 1.0).abs() < 1e-12);
    }
    assert!(worst < 1e-10, "max deviation {worst:e}");
}

#[test]
fn numeric_decomposition_matches_kronecker_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let angles = AngleSettings::from_array([0; 4].map(|_| rng.random_range(-PI..PI)));
        let oracle = kron_oracle(&angles);
        let numeric = bell_bell_amplitudes_numeric(&apply_all_rotations(&make_vw_state(), &angles));
        for bc in BellOutcome::ALL {
            for ad in BellOutcome::ALL {
                let diff = (numeric.get(bc, ad)
                    - Complex64::new(oracle[bc.index()][ad.index()], 0.0))
                .norm();
                assert!(diff < 1e-12, "{angles} {bc} {ad}: {diff:e}");
            }
        }
    }
}

#[test]
fn closed_form_agrees_at_zero_within_tolerance() {
    let numeric =
        bell_bell_amplitudes_numeric(&apply_all_rotations(&make_vw_state(), &AngleSettings::ZERO));
    let closed = bell_bell_amplitudes_closed_form(&AngleSettings::ZERO);
    assert!(numeric.max_abs_diff(&closed) < 1e-10);
}

#[test]
fn rotation_preserves_norm_of_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let s = random_state(&mut rng);
        let k = rng.random_range(0..4);
        let phi = rng.random_range(-10.0..10.0);
        let r = rotate_photon(&s, k, phi).unwrap();
        assert!((r.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rotations_commute(angles in settings(), order in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let vw = make_vw_state();
        let reference = apply_all_rotations(&vw, &angles);
        let phis = angles.to_array();
        let permuted = order
            .iter()
            .fold(vw, |st, &k| rotate_photon(&st, k, phis[k]).unwrap());
        prop_assert!(reference.max_abs_diff(&permuted) < 1e-14);
    }

    #[test]
    fn rotated_state_stays_normalized(angles in settings()) {
        let s = apply_all_rotations(&make_vw_state(), &angles);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplitudes_depend_only_on_differences(angles in settings(), d1 in angle(), d2 in angle()) {
        let vw = make_vw_state();
        let base = bell_bell_amplitudes_numeric(&apply_all_rotations(&vw, &angles));
        let shifted = bell_bell_amplitudes_numeric(&apply_all_rotations(&vw, &angles.shifted(d1, d2)));
        prop_assert!(base.max_abs_diff(&shifted) < 1e-12);
    }

    #[test]
    fn common_shift_of_zero_setting_is_invisible(d1 in angle(), d2 in angle()) {
        let vw = make_vw_state();
        let zero = bell_bell_amplitudes_numeric(&vw);
        let shifted = bell_bell_amplitudes_numeric(
            &apply_all_rotations(&vw, &AngleSettings::new(d1, d1, d2, d2)),
        );
        prop_assert!(zero.max_abs_diff(&shifted) < 1e-12);
    }

    #[test]
    fn double_bell_basis_is_complete(angles in settings()) {
        let m = bell_bell_amplitudes_numeric(&apply_all_rotations(&make_vw_state(), &angles));
        prop_assert!((m.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phases_are_exact_differences(angles in settings()) {
        let p = compute_phases(&angles);
        prop_assert_eq!(p.xi, (angles.phi1 - angles.phi2) + (angles.phi3 - angles.phi4));
        prop_assert_eq!(p.eta, (angles.phi1 - angles.phi2) - (angles.phi3 - angles.phi4));
    }
}
