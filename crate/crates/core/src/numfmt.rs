//! Number formatting shared by text outputs.

/// Fixed-point text with nine significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.8}", if x.is_finite() { 0.0 } else { x });
    }
    let digits = x.abs().log10().floor() as i32 + 1;
    let decimals = (9 - digits).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s[1..].to_string()
    } else {
        s
    }
}
