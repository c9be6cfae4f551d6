use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use ghzswap::correlation::DEFAULT_ZETA_TOL as TOL;
use ghzswap::lhv::*;
use ghzswap::quantum::AngleSettings;
use ghzswap::solver::*;
use ghzswap::Sign;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent brute force: every satisfying assignment, keyed by variable name.
fn satisfying_assignments(cs: &ConstraintSet) -> Vec<BTreeMap<SignVariable, Sign>> {
    let n = cs.num_variables();
    assert!(n <= 16);
    let mut out = Vec::new();
    for x in 0u32..(1 << n) {
        let value = |v: &VarId| if (x >> v.0) & 1 == 1 { -1i32 } else { 1 };
        let ok = cs.constraints().iter().all(|c| {
            let prod: i32 = c.vars.iter().map(value).product();
            prod == i32::from(c.required_sign.value())
        });
        if ok {
            out.push(
                cs.variables()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), Sign::from_bit((x >> i) & 1 == 1)))
                    .collect(),
            );
        }
    }
    out
}

fn random_settings(rng: &mut ChaCha8Rng, count: usize) -> Vec<AngleSettings> {
    // (a,b) angles share one offset and (c,d) another; steps of π/4 make
    // special phases and shared variables common, occasional π/8 steps don't
    let offsets = [rng.random_range(-PI..PI), rng.random_range(-PI..PI)];
    (0..count)
        .map(|_| {
            AngleSettings::from_array([0, 0, 1, 1].map(|side| {
                let step = if rng.random_bool(0.15) {
                    FRAC_PI_8
                } else {
                    FRAC_PI_4
                };
                offsets[side] + f64::from(rng.random_range(0..3)) * step
            }))
        })
        .collect()
}

fn random_instance(rng: &mut ChaCha8Rng) -> ConstraintSet {
    loop {
        let kappa = if rng.random_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let ctx = HiddenContext::for_kappa(kappa);
        let count = rng.random_range(1..=6);
        let mut settings = random_settings(rng, count);
        if rng.random_bool(0.4) {
            // splice in a contradiction-shaped pair built on existing angles
            let (s, t) = (settings[0], settings[settings.len() - 1]);
            let pair_kappa = if rng.random_bool(0.5) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            settings.extend(proof_settings(s.phi1, t.phi4, pair_kappa));
        }
        let cs = match rng.random_range(0..3) {
            0 => compile_fig1(&settings, &ctx, TOL),
            1 => apply_factorization(&compile_fig1(&settings, &ctx, TOL)),
            _ => compile_fig2(&settings, &ctx, TOL),
        };
        if cs.num_variables() <= 16 {
            return cs;
        }
    }
}

#[test]
fn proof_instances_are_unsat_for_random_angles() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..25 {
        let (alpha, beta) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        for kappa in [Sign::Plus, Sign::Minus] {
            let cs = proof_instance(alpha, beta, kappa);
            assert!(satisfying_assignments(&cs).is_empty());
            for r in [enumerate_solve(&cs).unwrap(), gf2_solve(&cs)] {
                assert_eq!(r.status, SolveStatus::Unsat);
                assert_eq!(r.certificate.as_ref().unwrap().len(), 2);
                assert!(verify_certificate(&cs, &r).unwrap());
            }
        }
    }
}

#[test]
fn fig2_pair_is_jointly_satisfiable() {
    let (alpha, beta) = (0.6, -0.25);
    let settings = [
        AngleSettings::new(alpha, alpha + FRAC_PI_4, beta + FRAC_PI_4, beta),
        AngleSettings::new(alpha, alpha + FRAC_PI_4, beta, beta + FRAC_PI_4),
    ];
    let cs = compile_fig2(&settings, &HiddenContext::for_kappa(Sign::Plus), TOL);
    assert_eq!(cs.num_variables(), 4);
    // two independent constraints over four unknowns: 2⁴ / 2² solutions
    assert_eq!(satisfying_assignments(&cs).len(), 4);
    let r = gf2_solve(&cs);
    assert!(r.is_sat());
    assert!(verify_certificate(&cs, &r).unwrap());
}

#[test]
fn factorization_turns_the_same_settings_unsat() {
    let (alpha, beta) = (0.6, -0.25);
    let settings = proof_settings(alpha, beta, Sign::Plus);
    let ctx = HiddenContext::for_kappa(Sign::Plus);
    let unfactored = compile_fig1(&settings, &ctx, TOL);
    assert!(!satisfying_assignments(&unfactored).is_empty());
    let factored = apply_factorization(&unfactored);
    assert!(satisfying_assignments(&factored).is_empty());
    let r = enumerate_solve(&factored).unwrap();
    assert_eq!(r.status, SolveStatus::Unsat);
    assert_eq!(r.certificate.as_ref().unwrap().len(), 4);
    assert!(verify_certificate(&factored, &r).unwrap());
}

#[test]
fn eliminating_f_reproduces_direct_reduced_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut compared = 0;
    while compared < 60 {
        let kappa = if rng.random_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let ctx = HiddenContext::for_kappa(kappa);
        let count = rng.random_range(1..=4);
        let settings = random_settings(&mut rng, count);
        let factored = apply_factorization(&compile_fig1(&settings, &ctx, TOL));
        let eliminated = eliminate_factorized(&factored);
        let direct = compile_reduced(&settings, &ctx, TOL);
        if direct.num_variables() > 12 || factored.num_variables() > 16 {
            continue;
        }
        let mut lhs: Vec<_> = eliminated.variables().to_vec();
        let mut rhs: Vec<_> = direct.variables().to_vec();
        lhs.sort();
        rhs.sort();
        assert_eq!(lhs, rhs);

        let mut a = satisfying_assignments(&eliminated);
        let mut b = satisfying_assignments(&direct);
        a.sort();
        b.sort();
        assert_eq!(a, b, "{settings:?}");
        assert_eq!(
            satisfying_assignments(&factored).is_empty(),
            b.is_empty(),
            "factored system and reduced system disagree"
        );
        compared += 1;
    }
}

#[test]
fn compiled_sets_have_sound_provenance_and_constant_kappa() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let cs = random_instance(&mut rng);
        assert!(cs.provenance_is_sound(TOL));
        let kappa = cs.kappa();
        for c in cs.constraints() {
            let z = ghzswap::correlation::zeta(&c.provenance.angles, kappa);
            assert!((z - c.provenance.zeta).abs() <= TOL);
        }
    }
}

#[test]
fn solvers_agree_on_500_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut disagreements = 0;
    let mut unsat = 0;
    for _ in 0..500 {
        let cs = random_instance(&mut rng);
        let e = enumerate_solve(&cs).unwrap();
        let g = gf2_solve(&cs);
        if e.status != g.status {
            disagreements += 1;
        }
        if e.status == SolveStatus::Unsat {
            unsat += 1;
        }
        assert_eq!(e.is_sat(), !satisfying_assignments(&cs).is_empty());
        assert!(verify_certificate(&cs, &e).unwrap());
        assert!(verify_certificate(&cs, &g).unwrap());
    }
    assert_eq!(disagreements, 0);
    assert!(
        unsat > 20,
        "instance generator should produce contradictions, got {unsat}"
    );
}

fn mutate(result: &SolveResult, cs: &ConstraintSet, rng: &mut ChaCha8Rng) -> SolveResult {
    let mut r = result.clone();
    match (&mut r.model, &mut r.certificate) {
        (Some(model), None) => {
            // flip a variable that some constraint actually uses
            let constrained: Vec<VarId> = cs
                .constraints()
                .iter()
                .flat_map(|c| c.vars.iter().copied())
                .collect();
            let v = constrained[rng.random_range(0..constrained.len())];
            model[v.0] = -model[v.0];
            // a flip can be absorbed if the variable appears an even number of
            // times in every constraint; such flips are not mutations
            let absorbed = cs
                .constraints()
                .iter()
                .all(|c| c.vars.iter().filter(|&&x| x == v).count() % 2 == 0);
            if absorbed {
                r.status = SolveStatus::Unsat;
            }
        }
        (None, Some(cert)) => match rng.random_range(0..3) {
            0 => {
                let i = rng.random_range(0..cert.len());
                cert.remove(i);
            }
            1 => {
                let i = rng.random_range(0..cert.len());
                let dup = cert[i];
                cert.push(dup);
            }
            _ => {
                r.status = SolveStatus::Sat;
            }
        },
        _ => unreachable!(),
    }
    r
}

#[test]
fn mutated_results_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut checked = 0;
    while checked < 300 {
        let cs = random_instance(&mut rng);
        if cs.is_empty() {
            continue;
        }
        let r = gf2_solve(&cs);
        let m = mutate(&r, &cs, &mut rng);
        let accepted = verify_certificate(&cs, &m).unwrap_or(false);
        assert!(!accepted, "mutation accepted: {m:?}");
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn proof_instance_unsat_for_any_angles(alpha in -10.0..10.0f64, beta in -10.0..10.0f64, minus in any::<bool>()) {
        let kappa = if minus { Sign::Minus } else { Sign::Plus };
        let cs = proof_instance(alpha, beta, kappa);
        let r = gf2_solve(&cs);
        prop_assert_eq!(r.status, SolveStatus::Unsat);
        prop_assert!(verify_certificate(&cs, &r).unwrap());
        let e = enumerate_solve(&cs).unwrap();
        prop_assert_eq!(e.certificate, r.certificate);
    }

    #[test]
    fn random_chains_with_consistent_signs_are_sat(signs in prop::collection::vec(any::<bool>(), 1..200)) {
        // x_i · x_{i+1} = s_i is always satisfiable on a path
        let mut cs = ConstraintSet::new(HiddenContext::for_kappa(Sign::Plus));
        let ids: Vec<VarId> = (0..=signs.len()).map(|i| cs.intern(SignVariable::d(i as f64))).collect();
        let prov = Provenance { angles: AngleSettings::ZERO, zeta: 0.0, origin: ConstraintOrigin::ReducedProduct };
        for (i, &s) in signs.iter().enumerate() {
            cs.push(ParityConstraint { vars: vec![ids[i], ids[i + 1]], required_sign: Sign::from_bit(s), provenance: prov }).unwrap();
        }
        let r = gf2_solve(&cs);
        prop_assert!(r.is_sat());
        prop_assert!(verify_certificate(&cs, &r).unwrap());
    }
}
