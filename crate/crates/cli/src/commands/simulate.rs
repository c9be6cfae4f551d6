use std::io::Write;

use ghzswap::correlation::{sample_events, EventRecord, DEFAULT_ZETA_TOL};

use crate::args::SimulateArgs;
use crate::{with_output, Outcome};

pub const CSV_HEADER: [&str; 13] = [
    "event_id",
    "phi1",
    "phi2",
    "phi3",
    "phi4",
    "bc_outcome",
    "pol_a",
    "pol_d",
    "kappa",
    "f",
    "a",
    "d",
    "product",
];

/// Writes events as CSV with a mandatory header and LF line endings.
pub fn write_events(w: &mut dyn Write, events: &[EventRecord]) -> anyhow::Result<()> {
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    csv.write_record(CSV_HEADER)?;
    for (i, e) in events.iter().enumerate() {
        let a = e.angles;
        csv.write_record([
            i.to_string(),
            a.phi1.to_string(),
            a.phi2.to_string(),
            a.phi3.to_string(),
            a.phi4.to_string(),
            e.bc_outcome.label().to_string(),
            e.pol_a.label().to_string(),
            e.pol_d.label().to_string(),
            e.kappa.value().to_string(),
            e.f_value.value().to_string(),
            e.a_value.value().to_string(),
            e.d_value.value().to_string(),
            e.product.value().to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn run(args: &SimulateArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let angles = args.angles.settings();
    let events = sample_events(&angles, args.events, args.seed);
    let violations = events
        .iter()
        .filter(|e| e.violates(DEFAULT_ZETA_TOL))
        .count();
    with_output(args.out.as_deref(), out, |w| write_events(w, &events))?;
    if args.out.is_some() {
        writeln!(out, "events: {}, violations: {violations}", events.len())?;
    } else {
        eprintln!("events: {}, violations: {violations}", events.len());
    }
    Ok(Outcome::from_pass(violations == 0))
}
