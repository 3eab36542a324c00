//! CSV export of simulation traces.
//!
//! Columns: `t, robot_id, x, heading, has_message, event_type`. One row per
//! robot involved in an event, in event order; numbers carry 12 significant
//! digits.

use std::io::Write;

use crate::io::fmt_num;
use crate::online::{SimResult, TraceRow};

pub const HEADER: [&str; 6] = ["t", "robot_id", "x", "heading", "has_message", "event_type"];

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            fmt_num(r.t),
            r.robot_id.to_string(),
            fmt_num(r.x),
            r.heading.to_string(),
            r.has_message.to_string(),
            r.event_type.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn trace_csv(result: &SimResult) -> String {
    let mut buf = Vec::new();
    write_trace(&result.trace, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ProblemInstance, Variant};
    use crate::online::simulate;

    #[test]
    fn relay_trace() {
        let inst = ProblemInstance::from_pairs(Variant::PonyExpress, &[(0.2, 1.0), (0.9, 2.0)])
            .validate()
            .unwrap();
        let csv = trace_csv(&simulate(&inst).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,robot_id,x,heading,has_message,event_type");
        assert_eq!(lines[1], "0.2,0,0,1,true,source_pickup");
        assert_eq!(lines[2], "0.366666666667,0,0.166666666667,1,true,handover");
        assert_eq!(lines[3], "0.366666666667,1,0.166666666667,1,true,handover");
        assert_eq!(lines[4], "0.783333333333,1,1,1,true,endpoint_hit");
        assert_eq!(lines.len(), 5);
    }
}
