use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;

use ghzswap::correlation::{
    joint_bell_probabilities_with_basis, kappa_mismatch_probability,
    perfect_correlation_report_with_basis, zeta, PhaseClass,
};
use ghzswap::format::FORMAT_VERSION;
use ghzswap::lhv::proof_settings;
use ghzswap::quantum::{
    apply_all_rotations, bell_bell_amplitudes_closed_form, bell_bell_amplitudes_with_basis,
    make_vw_state, AngleSettings, BellBasis, BellOutcome,
};
use ghzswap::Sign;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::VerifyQmArgs;
use crate::report::{SettingCheck, VerifyParams, VerifyReport, VerifySummary, Violation};
use crate::{with_output, write_json, Outcome};

pub const CLOSED_FORM_TOL: f64 = 1e-10;
pub const EXACT_TOL: f64 = 1e-12;

/// ζ targets swept for each sector.
pub const ZETA_TARGETS: [f64; 5] = [0.0, PI, -PI, FRAC_PI_2, -FRAC_PI_2];

#[derive(Debug, Clone)]
pub struct Candidate {
    pub family: String,
    pub angles: AngleSettings,
    /// Sector that must come out perfectly correlated, if any.
    pub special: Option<Sign>,
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>() * TAU - PI
}

fn random_settings(rng: &mut ChaCha8Rng) -> AngleSettings {
    AngleSettings::new(
        random_angle(rng),
        random_angle(rng),
        random_angle(rng),
        random_angle(rng),
    )
}

/// Moves φ₄ so that ζ_κ lands exactly on `target`.
pub fn with_zeta(angles: AngleSettings, kappa: Sign, target: f64) -> AngleSettings {
    let d12 = angles.phi1 - angles.phi2;
    let phi4 = match kappa {
        Sign::Plus => d12 + angles.phi3 - target,
        Sign::Minus => target - d12 + angles.phi3,
    };
    AngleSettings { phi4, ..angles }
}

/// Deterministic list of settings checked for a given grid size and seed.
pub fn candidates(grid: u32, seed: u64) -> Vec<Candidate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for g in 0..grid {
        out.push(Candidate {
            family: format!("random[{g}]"),
            angles: random_settings(&mut rng),
            special: None,
        });
        let base = random_settings(&mut rng);
        for kappa in [Sign::Plus, Sign::Minus] {
            for target in ZETA_TARGETS {
                out.push(Candidate {
                    family: format!("zeta[kappa={kappa},target={target:.6}][{g}]"),
                    angles: with_zeta(base, kappa, target),
                    special: Some(kappa),
                });
            }
        }
        let (alpha, beta) = (random_angle(&mut rng), random_angle(&mut rng));
        for kappa in [Sign::Plus, Sign::Minus] {
            for (i, s) in proof_settings(alpha, beta, kappa).into_iter().enumerate() {
                out.push(Candidate {
                    family: format!("proof[kappa={kappa},{i}][{g}]"),
                    angles: s,
                    special: Some(kappa),
                });
            }
        }
    }
    out
}

pub fn check_setting(
    index: usize,
    candidate: &Candidate,
    tol: f64,
    basis: &BellBasis,
) -> SettingCheck {
    let angles = candidate.angles;
    let state = apply_all_rotations(&make_vw_state(), &angles);
    let numeric = bell_bell_amplitudes_with_basis(&state, basis);
    let closed = bell_bell_amplitudes_closed_form(&angles);
    let closed_form_deviation = numeric.max_abs_diff(&closed);
    let norm_error = (state.norm_sqr() - 1.0).abs();
    let completeness_error = (numeric.total_probability() - 1.0).abs();
    let joint = joint_bell_probabilities_with_basis(&angles, basis);
    let kappa_mismatch = kappa_mismatch_probability(&joint);
    let shifted = apply_all_rotations(&make_vw_state(), &angles.shifted(0.37, -1.21));
    let shift_deviation = bell_bell_amplitudes_with_basis(&shifted, basis).max_abs_diff(&numeric);
    let correlations = perfect_correlation_report_with_basis(&angles, tol, basis);

    let mut violations = Vec::new();
    if closed_form_deviation >= CLOSED_FORM_TOL {
        violations.push(format!("closed form deviates by {closed_form_deviation:e}"));
    }
    if norm_error >= EXACT_TOL {
        violations.push(format!("rotations changed the norm by {norm_error:e}"));
    }
    if completeness_error >= EXACT_TOL {
        violations.push(format!(
            "Bell/Bell probabilities sum off by {completeness_error:e}"
        ));
    }
    if kappa_mismatch >= EXACT_TOL {
        violations.push(format!("kappa mismatch probability {kappa_mismatch:e}"));
    }
    if shift_deviation >= EXACT_TOL {
        violations.push(format!(
            "common shift changed amplitudes by {shift_deviation:e}"
        ));
    }
    for s in correlations.sectors.iter().filter(|s| !s.holds) {
        violations.push(format!(
            "kappa={} sector: wrong product with probability {:e}",
            s.kappa, s.residual
        ));
    }
    for p in correlations.bell_pairings.iter().filter(|p| !p.holds) {
        violations.push(format!(
            "{} -> {} pairing fails with residual {:e}",
            p.bc.label(),
            p.ad.label(),
            p.residual
        ));
    }
    if let Some(kappa) = candidate.special {
        let class = correlations
            .sectors
            .iter()
            .find(|s| s.kappa == kappa)
            .map(|s| s.class);
        if class == Some(PhaseClass::Generic) {
            violations.push(format!(
                "kappa={kappa} sector should be perfectly correlated"
            ));
        }
    }

    SettingCheck {
        index,
        family: candidate.family.clone(),
        angles,
        zeta_plus: zeta(&angles, Sign::Plus),
        zeta_minus: zeta(&angles, Sign::Minus),
        closed_form_deviation,
        norm_error,
        completeness_error,
        kappa_mismatch_probability: kappa_mismatch,
        shift_deviation,
        correlations,
        violations,
    }
}

pub fn build_report(args: &VerifyQmArgs) -> VerifyReport {
    let fault: Option<BellOutcome> = args.inject_fault.map(Into::into);
    let basis = match fault {
        Some(f) => BellBasis::standard().with_flipped_sign(f),
        None => BellBasis::standard(),
    };
    let settings: Vec<SettingCheck> = candidates(args.grid, args.seed)
        .iter()
        .enumerate()
        .map(|(i, c)| check_setting(i, c, args.tol, &basis))
        .collect();

    let max = |f: &dyn Fn(&SettingCheck) -> f64| settings.iter().map(f).fold(0.0, f64::max);
    let violations: Vec<Violation> = settings
        .iter()
        .flat_map(|s| {
            s.violations.iter().map(|reason| Violation {
                index: s.index,
                family: s.family.clone(),
                angles: s.angles,
                reason: reason.clone(),
            })
        })
        .collect();
    let summary = VerifySummary {
        settings_checked: settings.len(),
        perfect_correlation_sectors: settings
            .iter()
            .flat_map(|s| &s.correlations.sectors)
            .filter(|s| s.predicted_product.is_some())
            .count(),
        max_closed_form_deviation: max(&|s| s.closed_form_deviation),
        max_norm_error: max(&|s| s.norm_error),
        max_completeness_error: max(&|s| s.completeness_error),
        max_kappa_mismatch_probability: max(&|s| s.kappa_mismatch_probability),
        max_shift_deviation: max(&|s| s.shift_deviation),
        max_certainty_residual: settings
            .iter()
            .flat_map(|s| {
                let sectors = s.correlations.sectors.iter().map(|v| v.residual);
                let pairs = s.correlations.bell_pairings.iter().map(|p| p.residual);
                sectors.chain(pairs)
            })
            .fold(0.0, f64::max),
        violations,
    };
    VerifyReport {
        format_version: FORMAT_VERSION,
        command: "verify-qm".into(),
        params: VerifyParams {
            grid: args.grid,
            tol: args.tol,
            seed: args.seed,
            injected_fault: fault,
        },
        passed: summary.violations.is_empty(),
        summary,
        settings,
    }
}

pub fn run(args: &VerifyQmArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let report = build_report(args);
    with_output(args.out.as_deref(), out, |w| Ok(write_json(w, &report)?))?;
    if args.out.is_some() {
        writeln!(
            out,
            "verify-qm: {} settings, {} violations, max kappa mismatch {:e}",
            report.summary.settings_checked,
            report.summary.violations.len(),
            report.summary.max_kappa_mismatch_probability
        )?;
    }
    Ok(Outcome::from_pass(report.passed))
}
