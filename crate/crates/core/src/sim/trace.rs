//! Trace export: one CSV row per (step, agent).

use std::io::Write;
use std::path::Path;

pub const TRACE_HEADER: &str = "step,agent,x,y,heading,v,s_total,track_pos,race_pos,collided";

/// One vehicle snapshot after a world step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub step: u64,
    pub agent: usize,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub v: f64,
    pub s_total: f64,
    pub track_pos: f64,
    pub race_pos: usize,
    pub collided: bool,
}

impl TraceRow {
    fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            self.step,
            self.agent,
            self.x,
            self.y,
            self.heading,
            self.v,
            self.s_total,
            self.track_pos,
            self.race_pos,
            u8::from(self.collided)
        )
    }
}

/// Write rows under the fixed header. '.' decimal separator, '\n' line
/// endings, UTF-8, no locale dependence.
pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{TRACE_HEADER}")?;
    for row in rows {
        row.write_csv(&mut out)?;
    }
    out.flush()
}
