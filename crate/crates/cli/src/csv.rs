//! Plain CSV tables with locale-independent, fixed-precision numbers.

use std::fmt::Write;

/// Significant digits written for every value.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits, `%g` style: fixed notation for
/// decimal exponents in [−5, 12), scientific otherwise, trailing zeros
/// dropped. `-0` is written as `0`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// A table whose first column is the abscissa (`t` or `eta`).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&format_number(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Parses text written by [`Table::to_csv`].
    pub fn from_csv(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines.next()?.split(',').map(str::to_string).collect();
        let mut table = Table::new(header);
        for line in lines.filter(|l| !l.is_empty()) {
            let row: Vec<f64> = line.split(',').map(|v| v.parse().ok()).collect::<Option<_>>()?;
            if row.len() != table.header.len() {
                return None;
            }
            table.rows.push(row);
        }
        Some(table)
    }
}

/// Gnuplot script drawing every series of `csv_name` against its first column.
pub fn plot_script(csv_name: &str, table: &Table, ylabel: &str) -> String {
    let stem = csv_name.trim_end_matches(".csv");
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "set xlabel '{}'", table.header[0]);
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let plots: Vec<String> = (2..=table.header.len()).map(|k| format!("'{csv_name}' using 1:{k} with lines")).collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
