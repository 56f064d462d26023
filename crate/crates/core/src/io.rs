//! Plain-text serialization of series and covariance matrices.
//!
//! Numbers are written with 12 significant digits, `.` as decimal separator
//! and `\n` line endings, so outputs are byte-identical across platforms for
//! identical inputs.

use std::fmt::Write as _;

use nalgebra::DMatrix;

/// Format `x` with 12 significant digits: plain decimal for moderate
/// magnitudes, scientific notation otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((mant, exp)) => format!("{}e{exp}", trim_zeros(mant)),
            None => s,
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".to_string() } else { t.to_string() }
    } else {
        s.to_string()
    }
}

/// CSV text with a header row.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Row-major CSV dump of a `2n×2n` covariance matrix, preceded by comment
/// lines recording `n` and the `(q₁…qₙ, p₁…pₙ)` ordering.
pub fn covariance_csv(gamma: &DMatrix<f64>) -> String {
    let n = gamma.nrows() / 2;
    let mut out = String::new();
    let _ = writeln!(out, "# modes = {n}");
    let _ = writeln!(out, "# ordering = q1..q{n},p1..p{n}");
    for i in 0..gamma.nrows() {
        let line: Vec<String> = gamma.row(i).iter().map(|&x| format_number(x)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

/// Parse the output of [`covariance_csv`].
pub fn parse_covariance_csv(text: &str) -> Option<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .ok()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return None;
    }
    Some(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(344.89312345678912), "344.893123457");
        assert_eq!(format_number(-0.0012345678901234), "-0.00123456789012");
        assert_eq!(format_number(1.5e-9), "1.5e-9");
        assert_eq!(format_number(2.0f64.sqrt()), "1.41421356237");
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["t", "N"], &[vec![0.0, 0.5], vec![0.1, 0.25]]);
        assert_eq!(s, "t,N\n0,0.5\n0.1,0.25\n");
    }

    #[test]
    fn covariance_dump_parses_back() {
        let g = DMatrix::from_row_slice(2, 2, &[1.5, 0.25, 0.25, 2.0]);
        let text = covariance_csv(&g);
        assert!(text.starts_with("# modes = 1\n"));
        assert_eq!(parse_covariance_csv(&text).unwrap(), g);
    }
}
