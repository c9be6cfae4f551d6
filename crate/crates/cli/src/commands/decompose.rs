use std::io::Write;

use ghzswap::format::FORMAT_VERSION;
use ghzswap::quantum::{
    apply_all_rotations, bell_bell_amplitudes_closed_form, bell_bell_amplitudes_numeric,
    compute_phases, make_vw_state, BellBellAmplitudes, BellOutcome,
};

use crate::args::DecomposeArgs;
use crate::report::DecomposeReport;
use crate::{write_json, Outcome};

/// Deviation above which the closed form is considered wrong.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

pub fn run(args: &DecomposeArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let angles = args.angles.settings();
    let phases = compute_phases(&angles);
    let numeric = bell_bell_amplitudes_numeric(&apply_all_rotations(&make_vw_state(), &angles));
    let closed = bell_bell_amplitudes_closed_form(&angles);
    let deviation = numeric.max_abs_diff(&closed);

    if args.json {
        let report = DecomposeReport {
            format_version: FORMAT_VERSION,
            command: "decompose".into(),
            angles,
            phases,
            numeric: (&numeric).into(),
            closed_form: (&closed).into(),
            max_deviation: deviation,
        };
        write_json(out, &report)?;
    } else {
        writeln!(out, "angles (rad): {angles}")?;
        writeln!(out, "xi  = {:.12}", phases.xi)?;
        writeln!(out, "eta = {:.12}", phases.eta)?;
        writeln!(out)?;
        writeln!(out, "numeric <X_bc Y_ad|psi>:")?;
        write_table(out, &numeric)?;
        writeln!(out)?;
        writeln!(out, "closed form:")?;
        write_table(out, &closed)?;
        writeln!(out)?;
        writeln!(out, "max |numeric - closed form| = {deviation:.3e}")?;
    }
    Ok(Outcome::from_pass(deviation < CLOSED_FORM_TOL))
}

fn write_table(out: &mut dyn Write, m: &BellBellAmplitudes) -> std::io::Result<()> {
    write!(out, "{:>8}", "bc \\ ad")?;
    for ad in BellOutcome::ALL {
        write!(out, "{:>17}", ad.label())?;
    }
    writeln!(out)?;
    for bc in BellOutcome::ALL {
        write!(out, "{:>8}", bc.label())?;
        for ad in BellOutcome::ALL {
            let z = m.get(bc, ad);
            // collapse −0 and rounding dust so the sparsity pattern reads cleanly
            let re = if z.re.abs() < 5e-16 { 0.0 } else { z.re };
            write!(out, "{re:>17.12}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
