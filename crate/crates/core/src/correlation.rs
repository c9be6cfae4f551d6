//! Experiment predictions derived from the four-photon amplitudes.
//!
//! Two arrangements are modelled: a joint Bell/Bell measurement where both the
//! (b,c) and (a,d) pairs go to Bell-state analyzers, and a Bell/polarization
//! measurement where only (b,c) is Bell-analyzed while photons a and d go to
//! separate polarization analyzers.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::{
    apply_all_rotations, bell_bell_amplitudes_with_basis, compute_phases, make_vw_state,
    AngleSettings, BellBasis, BellOutcome, CorrelationPhase, Polarization,
};
use crate::sign::Sign;

pub const DEFAULT_ZETA_TOL: f64 = 1e-9;

/// Residual allowed on probability-one predictions.
pub const CERTAINTY_TOL: f64 = 1e-12;

/// +1 for {Φ⁺, Ψ⁻}, −1 for {Φ⁻, Ψ⁺}.
pub fn kappa_of(outcome: BellOutcome) -> Sign {
    match outcome {
        BellOutcome::PhiPlus | BellOutcome::PsiMinus => Sign::Plus,
        BellOutcome::PhiMinus | BellOutcome::PsiPlus => Sign::Minus,
    }
}

/// Polarization product of a Bell state: +1 for HH/VV content, −1 for HV/VH.
pub fn f_value_of(outcome: BellOutcome) -> Sign {
    match outcome {
        BellOutcome::PhiPlus | BellOutcome::PhiMinus => Sign::Plus,
        BellOutcome::PsiPlus | BellOutcome::PsiMinus => Sign::Minus,
    }
}

/// `ζ_κ = φ₁ − φ₂ + κ(φ₃ − φ₄)`.
pub fn zeta(angles: &AngleSettings, kappa: Sign) -> f64 {
    compute_phases(angles).for_kappa(kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseClass {
    ZeroOrPi,
    HalfPi,
    Generic,
}

impl PhaseClass {
    /// Sign the product of polarization codes must take with certainty.
    pub fn predicted_product(self) -> Option<Sign> {
        match self {
            PhaseClass::ZeroOrPi => Some(Sign::Plus),
            PhaseClass::HalfPi => Some(Sign::Minus),
            PhaseClass::Generic => None,
        }
    }
}

/// Distance from `x` to the nearest integer multiple of π.
fn distance_to_pi_lattice(x: f64) -> f64 {
    (x - (x / PI).round() * PI).abs()
}

pub fn classify_phase(zeta: f64, tol: f64) -> PhaseClass {
    if distance_to_pi_lattice(zeta) < tol {
        PhaseClass::ZeroOrPi
    } else if distance_to_pi_lattice(zeta - FRAC_PI_2) < tol {
        PhaseClass::HalfPi
    } else {
        PhaseClass::Generic
    }
}

pub fn classify_zeta(angles: &AngleSettings, kappa: Sign, tol: f64) -> PhaseClass {
    classify_phase(zeta(angles, kappa), tol)
}

pub type JointBellProbabilities = [[f64; 4]; 4];

pub fn joint_bell_probabilities(angles: &AngleSettings) -> JointBellProbabilities {
    joint_bell_probabilities_with_basis(angles, &BellBasis::standard())
}

pub fn joint_bell_probabilities_with_basis(
    angles: &AngleSettings,
    basis: &BellBasis,
) -> JointBellProbabilities {
    let state = apply_all_rotations(&make_vw_state(), angles);
    bell_bell_amplitudes_with_basis(&state, basis).probabilities()
}

/// Total probability of outcomes whose (b,c) and (a,d) κ values differ.
pub fn kappa_mismatch_probability(p: &JointBellProbabilities) -> f64 {
    let mut total = 0.0;
    for bc in BellOutcome::ALL {
        for ad in BellOutcome::ALL {
            if kappa_of(bc) != kappa_of(ad) {
                total += p[bc.index()][ad.index()];
            }
        }
    }
    total
}

/// Joint result of the Bell/polarization arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fig1Outcome {
    pub bc: BellOutcome,
    pub pol_a: Polarization,
    pub pol_d: Polarization,
}

impl Fig1Outcome {
    /// All sixteen outcomes in sampling order: Bell outcome major, then a, then d.
    pub fn all() -> impl Iterator<Item = Fig1Outcome> {
        (0..16).map(Fig1Outcome::from_index)
    }

    pub fn index(&self) -> usize {
        4 * self.bc.index() + 2 * self.pol_a.index() + self.pol_d.index()
    }

    pub fn from_index(i: usize) -> Self {
        Fig1Outcome {
            bc: BellOutcome::ALL[(i >> 2) & 3],
            pol_a: Polarization::from_index((i >> 1) & 1),
            pol_d: Polarization::from_index(i & 1),
        }
    }

    pub fn kappa(&self) -> Sign {
        kappa_of(self.bc)
    }

    /// `a · F · d`.
    pub fn product(&self) -> Sign {
        self.pol_a.sign() * f_value_of(self.bc) * self.pol_d.sign()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Distribution {
    probs: [f64; 16],
}

impl Fig1Distribution {
    pub fn get(&self, outcome: Fig1Outcome) -> f64 {
        self.probs[outcome.index()]
    }

    pub fn as_array(&self) -> &[f64; 16] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (Fig1Outcome, f64)> + '_ {
        Fig1Outcome::all().map(|o| (o, self.probs[o.index()]))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn marginal_a(&self, pol: Polarization) -> f64 {
        self.iter()
            .filter(|(o, _)| o.pol_a == pol)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn marginal_bc(&self, bc: BellOutcome) -> f64 {
        self.iter()
            .filter(|(o, _)| o.bc == bc)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn sector_probability(&self, kappa: Sign) -> f64 {
        self.iter()
            .filter(|(o, _)| o.kappa() == kappa)
            .map(|(_, p)| p)
            .sum()
    }

    /// Probability, conditional on the κ sector, that `a·F·d` differs from `expected`.
    pub fn conditional_violation(&self, kappa: Sign, expected: Sign) -> f64 {
        let sector = self.sector_probability(kappa);
        if sector == 0.0 {
            return 0.0;
        }
        let wrong: f64 = self
            .iter()
            .filter(|(o, _)| o.kappa() == kappa && o.product() != expected)
            .map(|(_, p)| p)
            .sum();
        wrong / sector
    }
}

pub fn fig1_joint_distribution(angles: &AngleSettings) -> Fig1Distribution {
    fig1_joint_distribution_with_basis(angles, &BellBasis::standard())
}

/// Probabilities of projecting onto `|X_bc⟩ ⊗ |pol_a⟩ ⊗ |pol_d⟩`.
pub fn fig1_joint_distribution_with_basis(
    angles: &AngleSettings,
    basis: &BellBasis,
) -> Fig1Distribution {
    let state = apply_all_rotations(&make_vw_state(), angles);
    let mut probs = [0.0; 16];
    for outcome in Fig1Outcome::all() {
        let mut amp = Complex64::new(0.0, 0.0);
        for pb in Polarization::ALL {
            for pc in Polarization::ALL {
                amp += basis.component(outcome.bc, pb, pc).conj()
                    * state.amplitude([outcome.pol_a, pb, pc, outcome.pol_d]);
            }
        }
        probs[outcome.index()] = amp.norm_sqr();
    }
    Fig1Distribution { probs }
}

/// Perfect-correlation verdict for one κ sector of the Bell/polarization arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorVerdict {
    pub kappa: Sign,
    pub zeta: f64,
    pub class: PhaseClass,
    pub predicted_product: Option<Sign>,
    pub sector_probability: f64,
    /// Conditional probability of the wrong product; zero when no prediction is made.
    pub residual: f64,
    pub holds: bool,
}

/// Exact (b,c) → (a,d) Bell pairing predicted in the joint Bell/Bell arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellPairing {
    pub bc: BellOutcome,
    pub ad: BellOutcome,
    /// `1 − P(ad | bc)`.
    pub residual: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfectCorrelationReport {
    pub angles: AngleSettings,
    pub phases: CorrelationPhase,
    pub sectors: Vec<SectorVerdict>,
    pub bell_pairings: Vec<BellPairing>,
}

impl PerfectCorrelationReport {
    pub fn all_hold(&self) -> bool {
        self.sectors.iter().all(|s| s.holds) && self.bell_pairings.iter().all(|p| p.holds)
    }

    pub fn has_perfect_correlation(&self) -> bool {
        self.sectors.iter().any(|s| s.class != PhaseClass::Generic)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.sectors
            .iter()
            .map(|s| match s.predicted_product {
                Some(p) => format!(
                    "kappa={}: zeta={} ({:?}) -> a*F*d = {} with certainty (residual {:e})",
                    s.kappa, s.zeta, s.class, p, s.residual
                ),
                None => format!(
                    "kappa={}: zeta={} -> no perfect correlation at this setting",
                    s.kappa, s.zeta
                ),
            })
            .collect()
    }
}

/// Bell outcomes whose κ equals the given sector, paired with their partners
/// under an exact Bell/Bell correlation.
fn predicted_pairings(kappa: Sign, class: PhaseClass) -> &'static [(BellOutcome, BellOutcome)] {
    use BellOutcome::*;
    match (kappa, class) {
        (Sign::Plus, PhaseClass::ZeroOrPi) => &[(PhiPlus, PhiPlus), (PsiMinus, PsiMinus)],
        (Sign::Plus, PhaseClass::HalfPi) => &[(PhiPlus, PsiMinus), (PsiMinus, PhiPlus)],
        (Sign::Minus, PhaseClass::ZeroOrPi) => &[(PhiMinus, PhiMinus), (PsiPlus, PsiPlus)],
        (Sign::Minus, PhaseClass::HalfPi) => &[(PhiMinus, PsiPlus), (PsiPlus, PhiMinus)],
        (_, PhaseClass::Generic) => &[],
    }
}

pub fn perfect_correlation_report(angles: &AngleSettings, tol: f64) -> PerfectCorrelationReport {
    perfect_correlation_report_with_basis(angles, tol, &BellBasis::standard())
}

pub fn perfect_correlation_report_with_basis(
    angles: &AngleSettings,
    tol: f64,
    basis: &BellBasis,
) -> PerfectCorrelationReport {
    let phases = compute_phases(angles);
    let fig1 = fig1_joint_distribution_with_basis(angles, basis);
    let joint = joint_bell_probabilities_with_basis(angles, basis);

    let mut sectors = Vec::with_capacity(2);
    let mut bell_pairings = Vec::new();
    for kappa in [Sign::Plus, Sign::Minus] {
        let z = phases.for_kappa(kappa);
        let class = classify_phase(z, tol);
        let predicted = class.predicted_product();
        let residual = predicted.map_or(0.0, |p| fig1.conditional_violation(kappa, p));
        sectors.push(SectorVerdict {
            kappa,
            zeta: z,
            class,
            predicted_product: predicted,
            sector_probability: fig1.sector_probability(kappa),
            residual,
            holds: residual < CERTAINTY_TOL,
        });

        for &(bc, ad) in predicted_pairings(kappa, class) {
            let row = &joint[bc.index()];
            let row_total: f64 = row.iter().sum();
            let wrong: f64 = BellOutcome::ALL
                .iter()
                .filter(|&&y| y != ad)
                .map(|y| row[y.index()])
                .sum();
            let residual = if row_total > 0.0 {
                wrong / row_total
            } else {
                1.0
            };
            bell_pairings.push(BellPairing {
                bc,
                ad,
                residual,
                holds: residual < CERTAINTY_TOL,
            });
        }
    }

    PerfectCorrelationReport {
        angles: *angles,
        phases,
        sectors,
        bell_pairings,
    }
}

/// One simulated Bell/polarization detection event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub angles: AngleSettings,
    pub bc_outcome: BellOutcome,
    pub pol_a: Polarization,
    pub pol_d: Polarization,
    pub kappa: Sign,
    pub f_value: Sign,
    pub a_value: Sign,
    pub d_value: Sign,
    pub product: Sign,
}

impl EventRecord {
    pub fn new(angles: AngleSettings, outcome: Fig1Outcome) -> Self {
        let f_value = f_value_of(outcome.bc);
        let a_value = outcome.pol_a.sign();
        let d_value = outcome.pol_d.sign();
        EventRecord {
            angles,
            bc_outcome: outcome.bc,
            pol_a: outcome.pol_a,
            pol_d: outcome.pol_d,
            kappa: kappa_of(outcome.bc),
            f_value,
            a_value,
            d_value,
            product: a_value * f_value * d_value,
        }
    }

    /// True when this event contradicts a certain prediction for its κ sector.
    pub fn violates(&self, tol: f64) -> bool {
        classify_zeta(&self.angles, self.kappa, tol)
            .predicted_product()
            .is_some_and(|p| p != self.product)
    }
}

/// Inverse-CDF sampler over the sixteen Bell/polarization outcomes.
#[derive(Debug, Clone)]
pub struct EventSampler {
    angles: AngleSettings,
    cumulative: [f64; 16],
    last_possible: usize,
}

impl EventSampler {
    pub fn new(angles: AngleSettings) -> Self {
        Self::from_distribution(angles, &fig1_joint_distribution(&angles))
    }

    pub fn from_distribution(angles: AngleSettings, dist: &Fig1Distribution) -> Self {
        let mut cumulative = [0.0; 16];
        let mut acc = 0.0;
        for (c, p) in cumulative.iter_mut().zip(dist.as_array()) {
            acc += p;
            *c = acc;
        }
        let last_possible = dist.as_array().iter().rposition(|&p| p > 0.0).unwrap_or(15);
        EventSampler {
            angles,
            cumulative,
            last_possible,
        }
    }

    pub fn outcome_for(&self, u: f64) -> Fig1Outcome {
        let idx = self
            .cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.last_possible)
            .min(self.last_possible);
        Fig1Outcome::from_index(idx)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> EventRecord {
        let u: f64 = rng.random();
        EventRecord::new(self.angles, self.outcome_for(u))
    }
}

/// `n` i.i.d. events from a ChaCha8 stream seeded with `seed`.
pub fn sample_events(angles: &AngleSettings, n: usize, seed: u64) -> Vec<EventRecord> {
    let sampler = EventSampler::new(*angles);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn kappa_and_f_codes() {
        use BellOutcome::*;
        assert_eq!(kappa_of(PhiPlus), Sign::Plus);
        assert_eq!(kappa_of(PsiPlus), Sign::Minus);
        assert_eq!(kappa_of(PsiMinus), Sign::Plus);
        assert_eq!(kappa_of(PhiMinus), Sign::Minus);
        assert_eq!(f_value_of(PhiPlus), Sign::Plus);
        assert_eq!(f_value_of(PsiMinus), Sign::Minus);
        assert_eq!(f_value_of(PhiMinus), Sign::Plus);
        assert_eq!(f_value_of(PsiPlus), Sign::Minus);
    }

    #[test]
    fn classification_examples() {
        let quarter = AngleSettings::new(0.0, FRAC_PI_4, 0.0, FRAC_PI_4);
        assert_eq!(
            classify_zeta(&quarter, Sign::Plus, DEFAULT_ZETA_TOL),
            PhaseClass::HalfPi
        );
        assert_eq!(
            classify_zeta(&quarter, Sign::Minus, DEFAULT_ZETA_TOL),
            PhaseClass::ZeroOrPi
        );
        let generic = AngleSettings::new(0.0, 0.3, 0.0, 0.0);
        assert_eq!(
            classify_zeta(&generic, Sign::Plus, DEFAULT_ZETA_TOL),
            PhaseClass::Generic
        );
    }

    #[test]
    fn classification_is_periodic() {
        for k in -4..=4 {
            let base = f64::from(k) * PI;
            assert_eq!(classify_phase(base, 1e-9), PhaseClass::ZeroOrPi);
            assert_eq!(classify_phase(base + FRAC_PI_2, 1e-9), PhaseClass::HalfPi);
            assert_eq!(classify_phase(base - FRAC_PI_2, 1e-9), PhaseClass::HalfPi);
            assert_eq!(classify_phase(base + 0.4, 1e-9), PhaseClass::Generic);
        }
        assert_eq!(classify_phase(5e-10, 1e-9), PhaseClass::ZeroOrPi);
        assert_eq!(classify_phase(2e-9, 1e-9), PhaseClass::Generic);
    }

    #[test]
    fn joint_bell_at_zero_is_diagonal() {
        let p = joint_bell_probabilities(&AngleSettings::ZERO);
        for (i, row) in p.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!((x - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fig1_outcome_index_roundtrip() {
        for (i, o) in Fig1Outcome::all().enumerate() {
            assert_eq!(o.index(), i);
        }
    }

    #[test]
    fn fig1_at_zero_only_positive_products() {
        let dist = fig1_joint_distribution(&AngleSettings::ZERO);
        assert!((dist.total() - 1.0).abs() < 1e-12);
        for (o, p) in dist.iter() {
            if o.product() == Sign::Minus {
                assert_eq!(p, 0.0, "{o:?}");
            }
        }
    }

    #[test]
    fn report_at_zero() {
        let r = perfect_correlation_report(&AngleSettings::ZERO, DEFAULT_ZETA_TOL);
        assert!(r.all_hold());
        assert_eq!(r.sectors.len(), 2);
        for s in &r.sectors {
            assert_eq!(s.predicted_product, Some(Sign::Plus));
        }
        assert_eq!(r.bell_pairings.len(), 4);
    }

    #[test]
    fn report_mixed_sectors() {
        let r = perfect_correlation_report(
            &AngleSettings::new(0.0, FRAC_PI_4, FRAC_PI_4, 0.0),
            DEFAULT_ZETA_TOL,
        );
        assert!(r.all_hold());
        assert_eq!(r.sectors[0].predicted_product, Some(Sign::Plus));
        assert_eq!(r.sectors[1].predicted_product, Some(Sign::Minus));
        assert!((r.sectors[1].zeta + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn report_generic_makes_no_claims() {
        let r =
            perfect_correlation_report(&AngleSettings::new(0.0, 0.3, 0.7, 0.1), DEFAULT_ZETA_TOL);
        assert!(!r.has_perfect_correlation());
        assert!(r.bell_pairings.is_empty());
        assert!(r
            .summary_lines()
            .iter()
            .all(|l| l.contains("no perfect correlation")));
    }

    #[test]
    fn flipped_basis_is_detected() {
        let basis = BellBasis::standard().with_flipped_sign(BellOutcome::PsiMinus);
        let r =
            perfect_correlation_report_with_basis(&AngleSettings::ZERO, DEFAULT_ZETA_TOL, &basis);
        assert!(!r.all_hold());
    }

    #[test]
    fn empty_sample() {
        assert!(sample_events(&AngleSettings::new(0.1, 0.2, 0.3, 0.4), 0, 7).is_empty());
    }

    #[test]
    fn inverse_cdf_skips_zero_probability_tail() {
        let s = EventSampler::new(AngleSettings::ZERO);
        let o = s.outcome_for(1.0);
        assert!(fig1_joint_distribution(&AngleSettings::ZERO).get(o) > 0.0);
    }

    #[test]
    fn event_record_fields_consistent() {
        for o in Fig1Outcome::all() {
            let e = EventRecord::new(AngleSettings::ZERO, o);
            assert_eq!(e.product, e.a_value * e.f_value * e.d_value);
            assert_eq!(e.kappa, kappa_of(e.bc_outcome));
        }
    }
}
