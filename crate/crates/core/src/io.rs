//! CSV formatting shared by the exporters.

use std::io::Write;

/// 17 significant digits, `.` separator; parses back to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn write_row(w: &mut impl Write, fields: &[String]) -> std::io::Result<()> {
    writeln!(w, "{}", fields.join(","))
}
