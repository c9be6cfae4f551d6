//! Exact statevector machinery for the four-photon swapping experiment.
//!
//! Photons are labelled a, b, c, d (slots 0..3). Pairs (a,b) and (c,d) come
//! from two independent down-conversion sources; photons b and c meet at the
//! Bell-state analyzer. Basis index of a product ket is `8a + 4b + 2c + d`
//! with `H = 0`, `V = 1`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sign::Sign;

pub const PHOTON_COUNT: usize = 4;
pub const DIMENSION: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("photon index {0} out of range (expected 0..=3)")]
    PhotonIndex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub const fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub const fn from_index(i: usize) -> Self {
        if i == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }

    /// Numeric coding: H ↦ +1, V ↦ −1.
    pub const fn sign(self) -> Sign {
        match self {
            Polarization::H => Sign::Plus,
            Polarization::V => Sign::Minus,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Polarization::H => "H",
            Polarization::V => "V",
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One of the four Bell states, in the order Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    pub const fn index(self) -> usize {
        match self {
            BellOutcome::PhiPlus => 0,
            BellOutcome::PhiMinus => 1,
            BellOutcome::PsiPlus => 2,
            BellOutcome::PsiMinus => 3,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }

    /// Normalized two-photon amplitudes indexed by `2·p₁ + p₂`.
    fn standard_vector(self) -> [f64; 4] {
        let s = FRAC_1_SQRT_2;
        match self {
            BellOutcome::PhiPlus => [s, 0.0, 0.0, s],
            BellOutcome::PhiMinus => [s, 0.0, 0.0, -s],
            BellOutcome::PsiPlus => [0.0, s, s, 0.0],
            BellOutcome::PsiMinus => [0.0, s, -s, 0.0],
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellOutcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BellOutcome::ALL
            .into_iter()
            .find(|b| b.label() == s)
            .ok_or_else(|| format!("unknown Bell outcome {s:?}"))
    }
}

impl From<BellOutcome> for String {
    fn from(b: BellOutcome) -> String {
        b.label().to_owned()
    }
}

impl TryFrom<String> for BellOutcome {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Rotation angles (radians) applied to photons a, b, c, d.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AngleSettings {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
}

impl AngleSettings {
    pub const ZERO: AngleSettings = AngleSettings::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(phi1: f64, phi2: f64, phi3: f64, phi4: f64) -> Self {
        Self {
            phi1,
            phi2,
            phi3,
            phi4,
        }
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.phi1, self.phi2, self.phi3, self.phi4]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Shifts the (a,b) angles by `delta` and the (c,d) angles by `delta_cd`.
    pub fn shifted(self, delta: f64, delta_cd: f64) -> Self {
        Self::new(
            self.phi1 + delta,
            self.phi2 + delta,
            self.phi3 + delta_cd,
            self.phi4 + delta_cd,
        )
    }
}

impl fmt::Display for AngleSettings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(φ1={}, φ2={}, φ3={}, φ4={})",
            self.phi1, self.phi2, self.phi3, self.phi4
        )
    }
}

/// The two angle combinations on which the double-Bell decomposition depends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPhase {
    pub xi: f64,
    pub eta: f64,
}

impl CorrelationPhase {
    /// `xi` for κ = +1, `eta` for κ = −1.
    pub fn for_kappa(&self, kappa: Sign) -> f64 {
        match kappa {
            Sign::Plus => self.xi,
            Sign::Minus => self.eta,
        }
    }
}

pub fn compute_phases(angles: &AngleSettings) -> CorrelationPhase {
    let ab = angles.phi1 - angles.phi2;
    let cd = angles.phi3 - angles.phi4;
    CorrelationPhase {
        xi: ab + cd,
        eta: ab - cd,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPhotonState {
    amplitudes: [Complex64; DIMENSION],
}

impl FourPhotonState {
    pub fn from_amplitudes(amplitudes: [Complex64; DIMENSION]) -> Self {
        Self { amplitudes }
    }

    /// Single product ket.
    pub fn basis(pols: [Polarization; PHOTON_COUNT]) -> Self {
        let mut amplitudes = [Complex64::new(0.0, 0.0); DIMENSION];
        amplitudes[Self::index(pols)] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub const fn index(pols: [Polarization; PHOTON_COUNT]) -> usize {
        8 * pols[0].index() + 4 * pols[1].index() + 2 * pols[2].index() + pols[3].index()
    }

    pub fn amplitudes(&self) -> &[Complex64; DIMENSION] {
        &self.amplitudes
    }

    pub fn amplitude(&self, pols: [Polarization; PHOTON_COUNT]) -> Complex64 {
        self.amplitudes[Self::index(pols)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &FourPhotonState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Product of two singlets, ½(H_aV_b − V_aH_b)(H_cV_d − V_cH_d).
pub fn make_vw_state() -> FourPhotonState {
    use Polarization::{H, V};
    let mut amplitudes = [Complex64::new(0.0, 0.0); DIMENSION];
    for (pa, pb, sab) in [(H, V, 1.0), (V, H, -1.0)] {
        for (pc, pd, scd) in [(H, V, 1.0), (V, H, -1.0)] {
            amplitudes[FourPhotonState::index([pa, pb, pc, pd])] =
                Complex64::new(0.5 * sab * scd, 0.0);
        }
    }
    FourPhotonState { amplitudes }
}

/// Applies `R(φ)|H⟩ = cos φ|H⟩ + sin φ|V⟩`, `R(φ)|V⟩ = cos φ|V⟩ − sin φ|H⟩`
/// to one tensor factor.
pub fn rotate_photon(
    state: &FourPhotonState,
    photon: usize,
    phi: f64,
) -> Result<FourPhotonState, QuantumError> {
    if photon >= PHOTON_COUNT {
        return Err(QuantumError::PhotonIndex(photon));
    }
    let (s, c) = phi.sin_cos();
    let stride = 1usize << (PHOTON_COUNT - 1 - photon);
    let mut out = *state;
    for i in (0..DIMENSION).filter(|i| i & stride == 0) {
        let h = state.amplitudes[i];
        let v = state.amplitudes[i | stride];
        out.amplitudes[i] = h * c - v * s;
        out.amplitudes[i | stride] = h * s + v * c;
    }
    Ok(out)
}

pub fn apply_all_rotations(state: &FourPhotonState, angles: &AngleSettings) -> FourPhotonState {
    angles
        .to_array()
        .into_iter()
        .enumerate()
        .fold(*state, |st, (photon, phi)| {
            rotate_photon(&st, photon, phi).expect("photon index is in range")
        })
}

/// Two-photon Bell vectors used to project pairs (b,c) and (a,d).
///
/// The standard basis follows the usual sign conventions. Altered bases exist
/// only so verification runs can be exercised against a deliberately broken
/// analyzer.
#[derive(Debug, Clone, PartialEq)]
pub struct BellBasis {
    vectors: [[Complex64; 4]; 4],
}

impl BellBasis {
    pub fn standard() -> Self {
        let mut vectors = [[Complex64::new(0.0, 0.0); 4]; 4];
        for b in BellOutcome::ALL {
            for (slot, x) in b.standard_vector().into_iter().enumerate() {
                vectors[b.index()][slot] = Complex64::new(x, 0.0);
            }
        }
        Self { vectors }
    }

    /// Negates the second term of one Bell state (e.g. Φ⁺ becomes HH − VV).
    pub fn with_flipped_sign(mut self, outcome: BellOutcome) -> Self {
        let v = &mut self.vectors[outcome.index()];
        let second = match outcome {
            BellOutcome::PhiPlus | BellOutcome::PhiMinus => 3,
            BellOutcome::PsiPlus | BellOutcome::PsiMinus => 2,
        };
        v[second] = -v[second];
        self
    }

    /// Amplitude of `|p₁ p₂⟩` in the given Bell state.
    pub fn component(&self, outcome: BellOutcome, p1: Polarization, p2: Polarization) -> Complex64 {
        self.vectors[outcome.index()][2 * p1.index() + p2.index()]
    }
}

impl Default for BellBasis {
    fn default() -> Self {
        Self::standard()
    }
}

/// Coefficients of a four-photon state in the (b,c) ⊗ (a,d) Bell basis.
/// Rows index the (b,c) outcome, columns the (a,d) outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellBellAmplitudes {
    pub coeffs: [[Complex64; 4]; 4],
}

impl BellBellAmplitudes {
    pub fn get(&self, bc: BellOutcome, ad: BellOutcome) -> Complex64 {
        self.coeffs[bc.index()][ad.index()]
    }

    pub fn total_probability(&self) -> f64 {
        self.coeffs.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> [[f64; 4]; 4] {
        self.coeffs.map(|row| row.map(|z| z.norm_sqr()))
    }

    pub fn max_abs_diff(&self, other: &BellBellAmplitudes) -> f64 {
        self.coeffs
            .iter()
            .flatten()
            .zip(other.coeffs.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

pub fn bell_bell_amplitudes_numeric(state: &FourPhotonState) -> BellBellAmplitudes {
    bell_bell_amplitudes_with_basis(state, &BellBasis::standard())
}

/// `coeff[X][Y] = ⟨X_bc ⊗ Y_ad | ψ⟩`, summed over the full product basis.
pub fn bell_bell_amplitudes_with_basis(
    state: &FourPhotonState,
    basis: &BellBasis,
) -> BellBellAmplitudes {
    let mut coeffs = [[Complex64::new(0.0, 0.0); 4]; 4];
    for bc in BellOutcome::ALL {
        for ad in BellOutcome::ALL {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, amp) in state.amplitudes.iter().enumerate() {
                let [pa, pb, pc, pd] = pols_of(i);
                let bra = basis.component(bc, pb, pc) * basis.component(ad, pa, pd);
                acc += bra.conj() * amp;
            }
            coeffs[bc.index()][ad.index()] = acc;
        }
    }
    BellBellAmplitudes { coeffs }
}

/// Closed-form decomposition of the rotated singlet product; only eight
/// entries are nonzero and they depend on the angles through ξ and η alone.
pub fn bell_bell_amplitudes_closed_form(angles: &AngleSettings) -> BellBellAmplitudes {
    use BellOutcome::*;
    let CorrelationPhase { xi, eta } = compute_phases(angles);
    let (sx, cx) = xi.sin_cos();
    let (se, ce) = eta.sin_cos();
    let mut coeffs = [[Complex64::new(0.0, 0.0); 4]; 4];
    let mut set = |bc: BellOutcome, ad: BellOutcome, v: f64| {
        coeffs[bc.index()][ad.index()] = Complex64::new(0.5 * v, 0.0);
    };
    set(PhiPlus, PhiPlus, -cx);
    set(PhiPlus, PsiMinus, sx);
    set(PsiMinus, PsiMinus, -cx);
    set(PsiMinus, PhiPlus, -sx);
    set(PhiMinus, PhiMinus, ce);
    set(PhiMinus, PsiPlus, se);
    set(PsiPlus, PsiPlus, ce);
    set(PsiPlus, PhiMinus, -se);
    BellBellAmplitudes { coeffs }
}

/// Polarizations of photons a, b, c, d for a basis index.
pub(crate) const fn pols_of(i: usize) -> [Polarization; PHOTON_COUNT] {
    [
        Polarization::from_index((i >> 3) & 1),
        Polarization::from_index((i >> 2) & 1),
        Polarization::from_index((i >> 1) & 1),
        Polarization::from_index(i & 1),
    ]
}
