//! File formats and plotting for the command-line tool.

pub mod config;
pub mod svg;
pub mod table;

pub use config::RunConfig;
pub use svg::{read_plot_metadata, render_svg, PlotMetadata, PlotOptions};
pub use table::{read_rows, rows_from_branches, write_rows, LocusRow};

/// `x` with 17 significant digits in `%g` style: lossless for `f64`.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}
