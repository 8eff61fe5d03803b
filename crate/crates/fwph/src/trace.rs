//! Per-iteration CSV traces.

use std::io::Write;

use fwph_core::hedging::IterationRecord;

pub const HEADER: [&str; 8] = ["iter", "wall_s", "phi", "best_phi", "residual", "milp_solves", "vertices", "flags"];

/// `I`: some subproblem stopped at a limit, so `phi` is only a certified
/// bound. `Q`: a master QP stopped before its tolerance. `R`: the residual
/// identity failed on this iteration.
pub fn flags(r: &IterationRecord) -> String {
    let mut s = String::new();
    if r.inexact {
        s.push('I');
    }
    if r.qp_unconverged {
        s.push('Q');
    }
    if r.identity_error > 0.0 {
        s.push('R');
    }
    s
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v > 0.0 {
        "inf".into()
    } else if v < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

pub fn write_trace<W: Write>(out: W, trace: &[IterationRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in trace {
        w.write_record([
            r.k.to_string(),
            format!("{:.6}", r.wall_s),
            r.phi.map(num).unwrap_or_default(),
            num(r.best_phi),
            num(r.residual),
            r.milp_solves.to_string(),
            r.vertices.to_string(),
            flags(r),
        ])?;
    }
    w.flush()?;
    Ok(())
}
