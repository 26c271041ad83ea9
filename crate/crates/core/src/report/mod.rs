//! SVG charts and plain-text reports.
//!
//! Every renderer is a pure function of its inputs: the same profile,
//! ranking or report inputs always produce the same bytes.

mod profile;
mod ranking;
mod text;

pub use profile::{render_profile, ProfilePlotOptions};
pub use ranking::{render_ranking, RankingPlotOptions};
pub use text::{render_summary_table, render_text_report};

/// Fixed-precision coordinate, so output never depends on float printing quirks.
pub(crate) fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) const STYLE: &str = "\
text{font-family:sans-serif;font-size:11px;fill:#222}\
.title{font-size:14px;font-weight:bold}\
.axis{stroke:#444;stroke-width:1}\
.grid{stroke:#ddd;stroke-width:1}\
.bar{fill:#9db4cc}\
.significant .bar{fill:#d9534f}\
.placeholder{fill:none;stroke:#999;stroke-dasharray:3,2}\
.whisker,.median,.cap{stroke:#111;stroke-width:1}\
.box{fill:#fff;fill-opacity:0.6;stroke:#111;stroke-width:1}\
.positive{fill:#5b8fc7}\
.negative{fill:#c77b5b}";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(num(-0.0001), "0.00");
        assert_eq!(num(1.005), format!("{:.2}", 1.005));
    }
}
