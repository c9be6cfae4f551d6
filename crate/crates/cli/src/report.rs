//! JSON report documents emitted by the commands.

use ghzswap::correlation::PerfectCorrelationReport;
use ghzswap::format::{ConstraintSetDoc, SolveResultDoc};
use ghzswap::quantum::{AngleSettings, BellBellAmplitudes, BellOutcome, CorrelationPhase};
use ghzswap::Sign;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMatrix {
    /// Row labels, (b,c) outcomes.
    pub rows: Vec<BellOutcome>,
    /// Column labels, (a,d) outcomes.
    pub cols: Vec<BellOutcome>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&BellBellAmplitudes> for AmplitudeMatrix {
    fn from(m: &BellBellAmplitudes) -> Self {
        AmplitudeMatrix {
            rows: BellOutcome::ALL.to_vec(),
            cols: BellOutcome::ALL.to_vec(),
            re: m
                .coeffs
                .iter()
                .map(|r| r.iter().map(|z| z.re).collect())
                .collect(),
            im: m
                .coeffs
                .iter()
                .map(|r| r.iter().map(|z| z.im).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub format_version: u32,
    pub command: String,
    pub angles: AngleSettings,
    pub phases: CorrelationPhase,
    pub numeric: AmplitudeMatrix,
    pub closed_form: AmplitudeMatrix,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub grid: u32,
    pub tol: f64,
    pub seed: u64,
    pub injected_fault: Option<BellOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingCheck {
    pub index: usize,
    pub family: String,
    pub angles: AngleSettings,
    pub zeta_plus: f64,
    pub zeta_minus: f64,
    pub closed_form_deviation: f64,
    pub norm_error: f64,
    pub completeness_error: f64,
    pub kappa_mismatch_probability: f64,
    pub shift_deviation: f64,
    pub correlations: PerfectCorrelationReport,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub family: String,
    pub angles: AngleSettings,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub settings_checked: usize,
    pub perfect_correlation_sectors: usize,
    pub max_closed_form_deviation: f64,
    pub max_norm_error: f64,
    pub max_completeness_error: f64,
    pub max_kappa_mismatch_probability: f64,
    pub max_shift_deviation: f64,
    pub max_certainty_residual: f64,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub format_version: u32,
    pub command: String,
    pub params: VerifyParams,
    pub passed: bool,
    pub summary: VerifySummary,
    pub settings: Vec<SettingCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefuteReport {
    pub format_version: u32,
    pub command: String,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: Sign,
    pub method: String,
    pub arrangement: String,
    pub expected: String,
    pub passed: bool,
    pub verified: bool,
    pub instance: ConstraintSetDoc,
    pub result: SolveResultDoc,
    /// Each certificate constraint with the experiment it came from.
    pub certificate: Vec<String>,
    pub contradiction: Option<String>,
    pub model: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub format_version: u32,
    pub command: String,
    pub method: String,
    pub verified: bool,
    pub expected: Option<String>,
    pub passed: bool,
    pub result: SolveResultDoc,
    pub certificate: Vec<String>,
    pub model: Vec<String>,
}
