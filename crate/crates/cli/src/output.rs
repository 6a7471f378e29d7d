//! Locale-independent table formatting.

use std::path::Path;

use qxcorr_core::{BranchPair, SweepRow};

use crate::config::Format;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `[1e-5, 1e12)`.
pub fn fmt_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = SIGNIFICANT_DIGITS - 1;
    let sci = format!("{:.*e}", digits, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (digits as i32 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub const COLUMNS: [&str; 8] = ["F0", "F1", "F", "F_branch", "U0", "U1", "U", "U_branch"];

pub fn header(x_name: &str, format: Format) -> String {
    let sep = format.separator().to_string();
    std::iter::once(x_name).chain(COLUMNS).collect::<Vec<_>>().join(&sep)
}

fn pair_fields(p: &BranchPair) -> [String; 4] {
    [fmt_sig(p.branch0), fmt_sig(p.branch1), fmt_sig(p.value), p.active.to_string()]
}

pub fn data_line(x: f64, lqfi: &BranchPair, lqu: &BranchPair, format: Format) -> String {
    let sep = format.separator().to_string();
    let mut fields = vec![fmt_sig(x)];
    fields.extend(pair_fields(lqfi));
    fields.extend(pair_fields(lqu));
    fields.join(&sep)
}

/// Header plus one line per row, newline-terminated.
pub fn table(x_name: &str, rows: &[SweepRow], format: Format) -> String {
    let mut out = header(x_name, format);
    out.push('\n');
    for r in rows {
        out.push_str(&data_line(r.x, &r.lqfi, &r.lqu, format));
        out.push('\n');
    }
    out
}

/// Gnuplot script plotting both measures and their branches from `data`.
pub fn plot_script(data: &Path, x_name: &str, format: Format) -> String {
    let file = data.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let sep = match format {
        Format::Csv => "','",
        Format::Tsv => "'\\t'",
    };
    format!(
        "set datafile separator {sep}\n\
         set key autotitle columnhead\n\
         set xlabel '{x_name}'\n\
         set multiplot layout 1,2\n\
         set title 'LQFI'\n\
         plot '{file}' using 1:2 with lines dashtype 2, '' using 1:3 with lines dashtype 3, '' using 1:4 with lines linewidth 2\n\
         set title 'LQU'\n\
         plot '{file}' using 1:6 with lines dashtype 2, '' using 1:7 with lines dashtype 3, '' using 1:8 with lines linewidth 2\n\
         unset multiplot\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.735294117647), "0.735294117647");
        assert_eq!(fmt_sig(0.7352941176470588), "0.735294117647");
        assert_eq!(fmt_sig(-1.5821546), "-1.5821546");
        assert_eq!(fmt_sig(1e-3), "0.001");
        assert_eq!(fmt_sig(1.23456789e-7), "1.23456789e-07");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(f64::NAN), "nan");
    }

    #[test]
    fn header_columns() {
        assert_eq!(header("T", Format::Csv), "T,F0,F1,F,F_branch,U0,U1,U,U_branch");
        assert_eq!(header("B1", Format::Tsv), "B1\tF0\tF1\tF\tF_branch\tU0\tU1\tU\tU_branch");
    }
}
