//! Locale-independent numeric formatting for CSV and wire output.

/// Formats a float with 9 significant digits in scientific notation.
///
/// Every numeric field written to CSV logs, packet lines, or summaries goes
/// through this function so that repeated runs produce byte-identical files.
pub fn sig9(value: f64) -> String {
    // Normalize -0.0 so the sign of a zero never leaks into output.
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.8e}")
}
