//! Deterministic local-realistic model as a system of ±1 unknowns.
//!
//! Within one hidden context (a fixed pair of source hidden variables, hence a
//! fixed κ) every element of reality is an unknown sign:
//!
//! * `A(φ₁)`: polarization of photon a,
//! * `D(φ₄)`: polarization of photon d,
//! * `F(φ₂, φ₃)`: polarization product of the (b,c) Bell outcome,
//! * `G(φ₁, φ₄)`: polarization product of the (a,d) Bell outcome.
//!
//! Each perfect correlation predicted by quantum mechanics becomes a parity
//! constraint: the product of some of these unknowns must equal a fixed sign.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlation::{classify_phase, zeta, PhaseClass};
use crate::quantum::AngleSettings;
use crate::sign::Sign;

/// Angles closer than this are the same measurement setting.
pub const ANGLE_QUANTUM: f64 = 1e-9;
const KEYS_PER_RADIAN: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LhvError {
    #[error("constraint references unregistered variable {0}")]
    UnknownVariable(VarId),
    #[error("constraint has no variables")]
    EmptyConstraint,
    #[error("function {tag} takes {expected} angle(s), got {found}")]
    Arity {
        tag: FunctionTag,
        expected: usize,
        found: usize,
    },
    #[error("variable {0} registered twice")]
    DuplicateVariable(String),
    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionTag {
    A,
    D,
    F,
    G,
}

impl FunctionTag {
    pub const fn arity(self) -> usize {
        match self {
            FunctionTag::A | FunctionTag::D => 1,
            FunctionTag::F | FunctionTag::G => 2,
        }
    }
}

impl fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FunctionTag::A => "A",
            FunctionTag::D => "D",
            FunctionTag::F => "F",
            FunctionTag::G => "G",
        };
        f.write_str(s)
    }
}

/// Angle rounded to a multiple of [`ANGLE_QUANTUM`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleKey(i64);

impl AngleKey {
    pub fn from_angle(angle: f64) -> Result<Self, LhvError> {
        if !angle.is_finite() {
            return Err(LhvError::NonFiniteAngle(angle));
        }
        Ok(AngleKey((angle * KEYS_PER_RADIAN).round() as i64))
    }

    /// Dividing (rather than multiplying by the quantum) lands on the double
    /// nearest the decimal value, so `2.3` reads back as `2.3`.
    pub fn angle(self) -> f64 {
        self.0 as f64 / KEYS_PER_RADIAN
    }
}

/// One unknown ±1 value: a function tag evaluated at canonical angles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVariable {
    tag: FunctionTag,
    keys: Vec<AngleKey>,
}

impl SignVariable {
    pub fn new(tag: FunctionTag, angles: &[f64]) -> Result<Self, LhvError> {
        if angles.len() != tag.arity() {
            return Err(LhvError::Arity {
                tag,
                expected: tag.arity(),
                found: angles.len(),
            });
        }
        let keys = angles
            .iter()
            .map(|&a| AngleKey::from_angle(a))
            .collect::<Result<_, _>>()?;
        Ok(SignVariable { tag, keys })
    }

    fn of(tag: FunctionTag, angles: &[f64]) -> Self {
        Self::new(tag, angles).expect("angles validated by caller")
    }

    pub fn a(phi: f64) -> Self {
        Self::of(FunctionTag::A, &[phi])
    }

    pub fn d(phi: f64) -> Self {
        Self::of(FunctionTag::D, &[phi])
    }

    pub fn f(phi2: f64, phi3: f64) -> Self {
        Self::of(FunctionTag::F, &[phi2, phi3])
    }

    pub fn g(phi1: f64, phi4: f64) -> Self {
        Self::of(FunctionTag::G, &[phi1, phi4])
    }

    pub fn tag(&self) -> FunctionTag {
        self.tag
    }

    pub fn keys(&self) -> &[AngleKey] {
        &self.keys
    }

    pub fn angles(&self) -> Vec<f64> {
        self.keys.iter().map(|k| k.angle()).collect()
    }
}

impl fmt::Display for SignVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.tag)?;
        for (i, a) in self.angles().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintId(pub usize);

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// The fixed hidden-variable pair a constraint system is built for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HiddenContext {
    pub kappa: Sign,
    pub label: String,
}

impl HiddenContext {
    pub fn new(kappa: Sign, label: impl Into<String>) -> Self {
        HiddenContext {
            kappa,
            label: label.into(),
        }
    }

    pub fn for_kappa(kappa: Sign) -> Self {
        Self::new(kappa, format!("kappa={kappa}"))
    }
}

/// Which experiment a constraint encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "&'static str", try_from = "String")]
pub enum ConstraintOrigin {
    /// `A(φ₁)·F(φ₂,φ₃)·D(φ₄)` from the Bell/polarization arrangement.
    PolarizationProduct,
    /// `F(φ₂,φ₃)·G(φ₁,φ₄)` from the joint Bell/Bell arrangement.
    BellProduct,
    /// `F(x,y)·A(x)·D(y) = +1`, the zero-phase instance at φ₁=φ₂=x, φ₃=φ₄=y.
    Factorization,
    /// `A(φ₁)·A(φ₂)·D(φ₃)·D(φ₄)` with F already eliminated.
    ReducedProduct,
}

impl ConstraintOrigin {
    pub const fn as_str(self) -> &'static str {
        match self {
            ConstraintOrigin::PolarizationProduct => "polarization-product",
            ConstraintOrigin::BellProduct => "bell-product",
            ConstraintOrigin::Factorization => "factorization",
            ConstraintOrigin::ReducedProduct => "reduced-product",
        }
    }
}

impl fmt::Display for ConstraintOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstraintOrigin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            ConstraintOrigin::PolarizationProduct,
            ConstraintOrigin::BellProduct,
            ConstraintOrigin::Factorization,
            ConstraintOrigin::ReducedProduct,
        ]
        .into_iter()
        .find(|o| o.as_str() == s)
        .ok_or_else(|| format!("unknown constraint origin {s:?}"))
    }
}

impl From<ConstraintOrigin> for &'static str {
    fn from(o: ConstraintOrigin) -> Self {
        o.as_str()
    }
}

impl TryFrom<String> for ConstraintOrigin {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub angles: AngleSettings,
    pub zeta: f64,
    pub origin: ConstraintOrigin,
}

/// The product of `vars` must equal `required_sign`. A variable listed twice
/// contributes its square, i.e. nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityConstraint {
    pub vars: Vec<VarId>,
    pub required_sign: Sign,
    pub provenance: Provenance,
}

impl ParityConstraint {
    pub fn is_satisfied_by(&self, model: &[Sign]) -> bool {
        Sign::product(self.vars.iter().map(|v| model[v.0])) == self.required_sign
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    context: HiddenContext,
    variables: Vec<SignVariable>,
    lookup: HashMap<SignVariable, VarId>,
    constraints: Vec<ParityConstraint>,
}

impl ConstraintSet {
    pub fn new(context: HiddenContext) -> Self {
        ConstraintSet {
            context,
            variables: Vec::new(),
            lookup: HashMap::new(),
            constraints: Vec::new(),
        }
    }

    /// Builds a set from already-numbered parts, e.g. after parsing a file.
    pub fn from_parts(
        context: HiddenContext,
        variables: Vec<SignVariable>,
        constraints: Vec<ParityConstraint>,
    ) -> Result<Self, LhvError> {
        let mut cs = ConstraintSet::new(context);
        for v in variables {
            if cs.lookup.contains_key(&v) {
                return Err(LhvError::DuplicateVariable(v.to_string()));
            }
            cs.intern(v);
        }
        for c in constraints {
            cs.push(c)?;
        }
        Ok(cs)
    }

    pub fn context(&self) -> &HiddenContext {
        &self.context
    }

    pub fn kappa(&self) -> Sign {
        self.context.kappa
    }

    pub fn variables(&self) -> &[SignVariable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> Option<&SignVariable> {
        self.variables.get(id.0)
    }

    pub fn id_of(&self, var: &SignVariable) -> Option<VarId> {
        self.lookup.get(var).copied()
    }

    pub fn constraints(&self) -> &[ParityConstraint] {
        &self.constraints
    }

    pub fn constraint(&self, id: ConstraintId) -> Option<&ParityConstraint> {
        self.constraints.get(id.0)
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Returns the id of `var`, registering it if new.
    pub fn intern(&mut self, var: SignVariable) -> VarId {
        if let Some(&id) = self.lookup.get(&var) {
            return id;
        }
        let id = VarId(self.variables.len());
        self.lookup.insert(var.clone(), id);
        self.variables.push(var);
        id
    }

    pub fn push(&mut self, constraint: ParityConstraint) -> Result<ConstraintId, LhvError> {
        if constraint.vars.is_empty() {
            return Err(LhvError::EmptyConstraint);
        }
        if let Some(&bad) = constraint.vars.iter().find(|v| v.0 >= self.variables.len()) {
            return Err(LhvError::UnknownVariable(bad));
        }
        self.constraints.push(constraint);
        Ok(ConstraintId(self.constraints.len() - 1))
    }

    fn emit(
        &mut self,
        vars: Vec<SignVariable>,
        required_sign: Sign,
        provenance: Provenance,
    ) -> ConstraintId {
        let vars = vars.into_iter().map(|v| self.intern(v)).collect();
        self.push(ParityConstraint {
            vars,
            required_sign,
            provenance,
        })
        .expect("interned variables are registered")
    }

    fn classified(&self, angles: &AngleSettings, tol: f64) -> Option<(f64, Sign)> {
        assert!(
            angles.is_finite(),
            "angle settings must be finite: {angles}"
        );
        let z = zeta(angles, self.context.kappa);
        classify_phase(z, tol).predicted_product().map(|s| (z, s))
    }

    /// Adds `A(φ₁)·F(φ₂,φ₃)·D(φ₄) = ±1` if this setting is perfectly correlated.
    pub fn add_fig1(&mut self, angles: &AngleSettings, tol: f64) -> Option<ConstraintId> {
        let (z, sign) = self.classified(angles, tol)?;
        let vars = vec![
            SignVariable::a(angles.phi1),
            SignVariable::f(angles.phi2, angles.phi3),
            SignVariable::d(angles.phi4),
        ];
        Some(self.emit(
            vars,
            sign,
            provenance(angles, z, ConstraintOrigin::PolarizationProduct),
        ))
    }

    /// Adds `F(φ₂,φ₃)·G(φ₁,φ₄) = ±1` if this setting is perfectly correlated.
    pub fn add_fig2(&mut self, angles: &AngleSettings, tol: f64) -> Option<ConstraintId> {
        let (z, sign) = self.classified(angles, tol)?;
        let vars = vec![
            SignVariable::f(angles.phi2, angles.phi3),
            SignVariable::g(angles.phi1, angles.phi4),
        ];
        Some(self.emit(
            vars,
            sign,
            provenance(angles, z, ConstraintOrigin::BellProduct),
        ))
    }

    /// Adds `A(φ₁)·A(φ₂)·D(φ₃)·D(φ₄) = ±1` if this setting is perfectly correlated.
    pub fn add_reduced(&mut self, angles: &AngleSettings, tol: f64) -> Option<ConstraintId> {
        let (z, sign) = self.classified(angles, tol)?;
        Some(self.emit(
            reduced_vars(angles),
            sign,
            provenance(angles, z, ConstraintOrigin::ReducedProduct),
        ))
    }

    /// Every emitted constraint's ζ still classifies to its required sign.
    pub fn provenance_is_sound(&self, tol: f64) -> bool {
        self.constraints.iter().all(|c| {
            let z = zeta(&c.provenance.angles, self.context.kappa);
            (z - c.provenance.zeta).abs() <= tol
                && classify_phase(z, tol).predicted_product() == Some(c.required_sign)
        })
    }

    pub fn describe_constraint(&self, id: ConstraintId) -> Option<String> {
        let c = self.constraint(id)?;
        let product = c
            .vars
            .iter()
            .map(|v| self.variables[v.0].to_string())
            .collect::<Vec<_>>()
            .join("·");
        Some(format!(
            "{id}: {product} = {}   [{} at {}, zeta={}]",
            c.required_sign, c.provenance.origin, c.provenance.angles, c.provenance.zeta
        ))
    }
}

fn provenance(angles: &AngleSettings, zeta: f64, origin: ConstraintOrigin) -> Provenance {
    Provenance {
        angles: *angles,
        zeta,
        origin,
    }
}

fn reduced_vars(angles: &AngleSettings) -> Vec<SignVariable> {
    vec![
        SignVariable::a(angles.phi1),
        SignVariable::a(angles.phi2),
        SignVariable::d(angles.phi3),
        SignVariable::d(angles.phi4),
    ]
}

/// Perfect correlations of the Bell/polarization arrangement. Generic settings
/// contribute nothing.
pub fn compile_fig1(
    settings: &[AngleSettings],
    context: &HiddenContext,
    tol: f64,
) -> ConstraintSet {
    let mut cs = ConstraintSet::new(context.clone());
    for s in settings {
        cs.add_fig1(s, tol);
    }
    cs
}

/// Perfect correlations of the joint Bell/Bell arrangement.
pub fn compile_fig2(
    settings: &[AngleSettings],
    context: &HiddenContext,
    tol: f64,
) -> ConstraintSet {
    let mut cs = ConstraintSet::new(context.clone());
    for s in settings {
        cs.add_fig2(s, tol);
    }
    cs
}

/// Perfect correlations written directly over A and D only.
pub fn compile_reduced(
    settings: &[AngleSettings],
    context: &HiddenContext,
    tol: f64,
) -> ConstraintSet {
    let mut cs = ConstraintSet::new(context.clone());
    for s in settings {
        cs.add_reduced(s, tol);
    }
    cs
}

/// For every `F(x,y)`, adds `F(x,y)·A(x)·D(y) = +1`: the setting φ₁=φ₂=x,
/// φ₃=φ₄=y has ζ = 0 for either κ, so it is always perfectly correlated.
/// F variables that already carry such a constraint are skipped.
pub fn apply_factorization(cs: &ConstraintSet) -> ConstraintSet {
    let mut out = cs.clone();
    let already: Vec<VarId> = cs
        .constraints
        .iter()
        .filter(|c| c.provenance.origin == ConstraintOrigin::Factorization)
        .map(|c| c.vars[0])
        .collect();
    let f_vars: Vec<(VarId, f64, f64)> = cs
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.tag == FunctionTag::F)
        .map(|(i, v)| (VarId(i), v.keys[0].angle(), v.keys[1].angle()))
        .filter(|(id, _, _)| !already.contains(id))
        .collect();
    for (f_id, x, y) in f_vars {
        let a = out.intern(SignVariable::a(x));
        let d = out.intern(SignVariable::d(y));
        let angles = AngleSettings::new(x, x, y, y);
        let z = zeta(&angles, out.context.kappa);
        out.push(ParityConstraint {
            vars: vec![f_id, a, d],
            required_sign: Sign::Plus,
            provenance: provenance(&angles, z, ConstraintOrigin::Factorization),
        })
        .expect("interned variables are registered");
    }
    out
}

/// Substitutes `F(x,y) = A(x)·D(y)` wherever a factorization constraint
/// exists, dropping those constraints. The result has no factorized F left.
pub fn eliminate_factorized(cs: &ConstraintSet) -> ConstraintSet {
    let mut replacement: HashMap<VarId, [SignVariable; 2]> = HashMap::new();
    for c in &cs.constraints {
        if c.provenance.origin == ConstraintOrigin::Factorization {
            let [f, a, d] = [c.vars[0], c.vars[1], c.vars[2]];
            replacement.insert(f, [cs.variables[a.0].clone(), cs.variables[d.0].clone()]);
        }
    }

    let mut out = ConstraintSet::new(cs.context.clone());
    for c in &cs.constraints {
        if c.provenance.origin == ConstraintOrigin::Factorization {
            continue;
        }
        let mut vars = Vec::with_capacity(c.vars.len() + 1);
        let mut substituted = false;
        for v in &c.vars {
            match replacement.get(v) {
                Some(pair) => {
                    substituted = true;
                    vars.extend(pair.iter().cloned());
                }
                None => vars.push(cs.variables[v.0].clone()),
            }
        }
        let mut prov = c.provenance;
        if substituted && prov.origin == ConstraintOrigin::PolarizationProduct {
            prov.origin = ConstraintOrigin::ReducedProduct;
        }
        out.emit(vars, c.required_sign, prov);
    }
    out
}

/// The two-setting contradiction over `A(α), A(α+π/4), D(β), D(β+π/4)`.
///
/// For κ = +1 the settings are (α, α+π/4, β+π/4, β) with ζ₊ = 0 and
/// (α, α+π/4, β, β+π/4) with ζ₊ = −π/2; for κ = −1 the roles of φ₃ and φ₄
/// swap. Both constraints multiply the same four unknowns but demand
/// opposite signs.
pub fn proof_settings(alpha: f64, beta: f64, kappa: Sign) -> [AngleSettings; 2] {
    let crossed = AngleSettings::new(alpha, alpha + FRAC_PI_4, beta + FRAC_PI_4, beta);
    let parallel = AngleSettings::new(alpha, alpha + FRAC_PI_4, beta, beta + FRAC_PI_4);
    match kappa {
        Sign::Plus => [crossed, parallel],
        Sign::Minus => [parallel, crossed],
    }
}

pub fn proof_instance(alpha: f64, beta: f64, kappa: Sign) -> ConstraintSet {
    let context = HiddenContext::for_kappa(kappa);
    let cs = compile_reduced(
        &proof_settings(alpha, beta, kappa),
        &context,
        crate::correlation::DEFAULT_ZETA_TOL,
    );
    debug_assert_eq!(cs.num_constraints(), 2);
    cs
}

/// Whether a phase is perfectly correlated at all.
pub fn is_special(angles: &AngleSettings, kappa: Sign, tol: f64) -> bool {
    classify_phase(zeta(angles, kappa), tol) != PhaseClass::Generic
}
