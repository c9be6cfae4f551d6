use std::io::Write;

use ghzswap::correlation::DEFAULT_ZETA_TOL;
use ghzswap::format::{ConstraintSetDoc, SolveResultDoc, FORMAT_VERSION};
use ghzswap::lhv::{
    compile_fig2, proof_instance, proof_settings, ConstraintSet, HiddenContext, VarId,
};
use ghzswap::solver::{solve, verify_certificate, SolveMethod, SolveResult, SolveStatus};
use ghzswap::Sign;

use crate::args::RefuteArgs;
use crate::report::RefuteReport;
use crate::{with_output, write_json, Outcome};

pub fn method_name(m: SolveMethod) -> &'static str {
    match m {
        SolveMethod::Enumerate => "enumerate",
        SolveMethod::Gf2 => "gf2",
    }
}

pub fn status_name(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Sat => "sat",
        SolveStatus::Unsat => "unsat",
    }
}

/// Certificate constraints rendered with their provenance.
pub fn certificate_lines(cs: &ConstraintSet, result: &SolveResult) -> Vec<String> {
    result
        .certificate
        .iter()
        .flatten()
        .filter_map(|&id| cs.describe_constraint(id))
        .collect()
}

/// Model rendered as `v0 A(0) = +1` lines.
pub fn model_lines(cs: &ConstraintSet, result: &SolveResult) -> Vec<String> {
    result
        .model
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, value)| {
            let var = cs.variable(VarId(i)).expect("model sized to the variables");
            format!("{} {var} = {value}", VarId(i))
        })
        .collect()
}

/// Multiplying the certificate constraints together: every unknown appears an
/// even number of times, so the left side is `+1` while the right side is the
/// product of the required signs.
pub fn contradiction_line(cs: &ConstraintSet, result: &SolveResult) -> Option<String> {
    let cert = result.certificate.as_ref()?;
    let rhs = Sign::product(
        cert.iter()
            .filter_map(|&id| cs.constraint(id))
            .map(|c| c.required_sign),
    );
    Some(format!("{} = {rhs}", Sign::Plus))
}

pub fn build_report(args: &RefuteArgs) -> anyhow::Result<RefuteReport> {
    let (alpha, beta) = if args.degrees {
        (args.alpha.to_radians(), args.beta.to_radians())
    } else {
        (args.alpha, args.beta)
    };
    let method: SolveMethod = args.method.into();
    let (cs, arrangement, expected) = if args.fig2 {
        let settings = proof_settings(alpha, beta, args.kappa);
        let context = HiddenContext::for_kappa(args.kappa);
        (
            compile_fig2(&settings, &context, DEFAULT_ZETA_TOL),
            "bell-product",
            SolveStatus::Sat,
        )
    } else {
        (
            proof_instance(alpha, beta, args.kappa),
            "factorized",
            SolveStatus::Unsat,
        )
    };
    let result = solve(&cs, method)?;
    let verified = verify_certificate(&cs, &result)?;
    Ok(RefuteReport {
        format_version: FORMAT_VERSION,
        command: "refute".into(),
        alpha,
        beta,
        kappa: args.kappa,
        method: method_name(method).into(),
        arrangement: arrangement.into(),
        expected: status_name(expected).into(),
        passed: verified && result.status == expected,
        verified,
        instance: ConstraintSetDoc::from(&cs),
        result: SolveResultDoc::from(&result),
        certificate: certificate_lines(&cs, &result),
        contradiction: contradiction_line(&cs, &result),
        model: model_lines(&cs, &result),
    })
}

pub fn run(args: &RefuteArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let report = build_report(args)?;
    with_output(args.out.as_deref(), out, |w| Ok(write_json(w, &report)?))?;
    if args.out.is_some() {
        writeln!(
            out,
            "refute: {} ({}), verified: {}",
            report.result_status(),
            report.arrangement,
            report.verified
        )?;
    }
    Ok(Outcome::from_pass(report.passed))
}

impl RefuteReport {
    fn result_status(&self) -> &'static str {
        status_name(self.result.status)
    }
}
