use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghzswap::quantum::{AngleSettings, BellOutcome};
use ghzswap::solver::SolveMethod;
use ghzswap::Sign;

#[derive(Debug, Parser)]
#[command(
    name = "ghzswap",
    version,
    about = "Entanglement-swapping perfect correlations and their local-realist refutation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose the rotated four-photon state in the (b,c)⊗(a,d) Bell basis
    Decompose(DecomposeArgs),
    /// Check every quantum prediction over random and special settings
    VerifyQm(VerifyQmArgs),
    /// Sample Bell/polarization events and write them as CSV
    Simulate(SimulateArgs),
    /// Refute local realism on the two-setting contradiction
    Refute(RefuteArgs),
    /// Compile a settings file into a parity-constraint system
    Compile(CompileArgs),
    /// Solve a compiled constraint system
    Solve(SolveArgs),
}

pub fn finite_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

pub fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "1" | "+1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        other => Err(format!("expected +1 or -1, got {other:?}")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct AngleArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite_f64)]
    pub phi1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite_f64)]
    pub phi2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite_f64)]
    pub phi3: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite_f64)]
    pub phi4: f64,
    /// Interpret angles as degrees instead of radians
    #[arg(long)]
    pub degrees: bool,
}

impl AngleArgs {
    pub fn settings(&self) -> AngleSettings {
        let s = AngleSettings::new(self.phi1, self.phi2, self.phi3, self.phi4);
        if self.degrees {
            AngleSettings::from_array(s.to_array().map(f64::to_radians))
        } else {
            s
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub angles: AngleArgs,
    /// Emit a JSON report
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Emit a plain-text table (default)
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    #[value(name = "phi+")]
    PhiPlus,
    #[value(name = "phi-")]
    PhiMinus,
    #[value(name = "psi+")]
    PsiPlus,
    #[value(name = "psi-")]
    PsiMinus,
}

impl From<FaultArg> for BellOutcome {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::PhiPlus => BellOutcome::PhiPlus,
            FaultArg::PhiMinus => BellOutcome::PhiMinus,
            FaultArg::PsiPlus => BellOutcome::PsiPlus,
            FaultArg::PsiMinus => BellOutcome::PsiMinus,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyQmArgs {
    /// Number of random base points; each spawns a random setting plus the special-phase families
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub grid: u32,
    /// Phase classification tolerance (radians)
    #[arg(long, default_value_t = 1e-9, value_parser = finite_f64)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Negate the second term of one Bell state in the analyzer (negative control)
    #[arg(long, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub angles: AngleArgs,
    #[arg(long, default_value_t = 100_000)]
    pub events: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Enumerate,
    Gf2,
}

impl From<MethodArg> for SolveMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Enumerate => SolveMethod::Enumerate,
            MethodArg::Gf2 => SolveMethod::Gf2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RefuteArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite_f64)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite_f64)]
    pub beta: f64,
    #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_sign)]
    pub kappa: Sign,
    #[arg(long, value_enum, default_value_t = MethodArg::Gf2)]
    pub method: MethodArg,
    /// Compile the same two settings for the joint Bell/Bell arrangement instead
    #[arg(long)]
    pub fig2: bool,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Clone, Args)]
pub struct CompileArgs {
    /// JSON settings file: `[[phi1, phi2, phi3, phi4], ...]` or `{"format_version": 1, "settings": [...]}`
    #[arg(long)]
    pub settings: PathBuf,
    #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_sign)]
    pub kappa: Sign,
    #[arg(long, value_enum, default_value_t = FigArg::One)]
    pub fig: FigArg,
    /// Add the zero-phase factorization constraint for every F unknown
    #[arg(long)]
    pub factorize: bool,
    #[arg(long, default_value_t = 1e-9, value_parser = finite_f64)]
    pub tol: f64,
    /// Hidden-context label; defaults to `kappa=<sign>`
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpectArg {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Gf2)]
    pub method: MethodArg,
    /// Exit 1 unless the status matches
    #[arg(long, value_enum)]
    pub expect: Option<ExpectArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
