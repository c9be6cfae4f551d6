use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use ghzswap::format::{ConstraintSetDoc, SolveResultDoc, FORMAT_VERSION};
use ghzswap::lhv::{apply_factorization, compile_fig1, compile_fig2, ConstraintSet, HiddenContext};
use ghzswap::quantum::AngleSettings;
use ghzswap::solver::{self, verify_certificate, SolveMethod, SolveStatus};
use serde::Deserialize;

use crate::args::{CompileArgs, ExpectArg, FigArg, SolveArgs};
use crate::commands::refute::{certificate_lines, method_name, model_lines};
use crate::report::SolveReport;
use crate::{with_output, write_json, Outcome};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SettingsFile {
    Bare(Vec<[f64; 4]>),
    Versioned {
        format_version: u32,
        settings: Vec<[f64; 4]>,
    },
}

/// Reads `[[φ1, φ2, φ3, φ4], ...]` or the versioned wrapper around it.
pub fn read_settings(path: &Path, degrees: bool) -> anyhow::Result<Vec<AngleSettings>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SettingsFile = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a settings file", path.display()))?;
    let rows = match file {
        SettingsFile::Bare(rows) => rows,
        SettingsFile::Versioned {
            format_version,
            settings,
        } => {
            if format_version != FORMAT_VERSION {
                bail!("unsupported settings format_version {format_version}");
            }
            settings
        }
    };
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            let row = if degrees {
                row.map(f64::to_radians)
            } else {
                row
            };
            let s = AngleSettings::from_array(row);
            if !s.is_finite() {
                bail!("setting {i} has a non-finite angle");
            }
            Ok(s)
        })
        .collect()
}

pub fn build_constraints(args: &CompileArgs) -> anyhow::Result<ConstraintSet> {
    let settings = read_settings(&args.settings, args.degrees)?;
    let context = match &args.label {
        Some(label) => HiddenContext::new(args.kappa, label.clone()),
        None => HiddenContext::for_kappa(args.kappa),
    };
    let cs = match args.fig {
        FigArg::One => compile_fig1(&settings, &context, args.tol),
        FigArg::Two => compile_fig2(&settings, &context, args.tol),
    };
    Ok(if args.factorize {
        if args.fig == FigArg::Two {
            bail!("--factorize applies to --fig 1 only");
        }
        apply_factorization(&cs)
    } else {
        cs
    })
}

pub fn compile(args: &CompileArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let cs = build_constraints(args)?;
    let doc = ConstraintSetDoc::from(&cs);
    with_output(args.out.as_deref(), out, |w| Ok(write_json(w, &doc)?))?;
    if args.out.is_some() {
        writeln!(
            out,
            "compiled {} variables, {} constraints",
            cs.num_variables(),
            cs.num_constraints()
        )?;
    }
    Ok(Outcome::Pass)
}

pub fn read_constraints(path: &Path) -> anyhow::Result<ConstraintSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: ConstraintSetDoc = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a constraint document", path.display()))?;
    Ok(ConstraintSet::try_from(doc)?)
}

pub fn build_solve_report(args: &SolveArgs) -> anyhow::Result<SolveReport> {
    let cs = read_constraints(&args.input)?;
    let method: SolveMethod = args.method.into();
    let result = solver::solve(&cs, method)?;
    let verified = verify_certificate(&cs, &result)?;
    let expected = args.expect.map(|e| match e {
        ExpectArg::Sat => SolveStatus::Sat,
        ExpectArg::Unsat => SolveStatus::Unsat,
    });
    Ok(SolveReport {
        format_version: FORMAT_VERSION,
        command: "solve".into(),
        method: method_name(method).into(),
        verified,
        expected: expected.map(|s| super::refute::status_name(s).to_string()),
        passed: verified && expected.is_none_or(|s| s == result.status),
        result: SolveResultDoc::from(&result),
        certificate: certificate_lines(&cs, &result),
        model: model_lines(&cs, &result),
    })
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let report = build_solve_report(args)?;
    with_output(args.out.as_deref(), out, |w| Ok(write_json(w, &report)?))?;
    if args.out.is_some() {
        writeln!(
            out,
            "solve: {}, verified: {}",
            super::refute::status_name(report.result.status),
            report.verified
        )?;
    }
    Ok(Outcome::from_pass(report.passed))
}
