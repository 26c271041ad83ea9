use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{escape, num, STYLE};
use crate::relieff::AttributeScore;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingPlotOptions {
    /// Device units spanned by the score range.
    pub plot_width: f64,
    pub row_height: f64,
    pub title: String,
}

impl Default for RankingPlotOptions {
    fn default() -> Self {
        RankingPlotOptions {
            plot_width: 400.0,
            row_height: 24.0,
            title: "ReliefF relevance".to_string(),
        }
    }
}

const LABEL_WIDTH: f64 = 160.0;
const TOP: f64 = 44.0;

/// Horizontal bar chart of relevance scores, best rank on top, with the zero
/// score marked so negative scores extend to its left.
pub fn render_ranking(scores: &[AttributeScore], options: &RankingPlotOptions) -> String {
    let mut sorted: Vec<&AttributeScore> = scores.iter().collect();
    sorted.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.attribute.cmp(&b.attribute)));

    let lo = sorted.iter().map(|s| s.score).fold(0.0f64, f64::min);
    let hi = sorted.iter().map(|s| s.score).fold(0.0f64, f64::max);
    let span = if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let left = LABEL_WIDTH;
    let x_of = |score: f64| left + (score - lo) / span * options.plot_width;
    let zero = x_of(0.0);

    let row = options.row_height;
    let bottom = TOP + sorted.len() as f64 * row;
    let width = left + options.plot_width + 70.0;
    let height = bottom + 30.0;

    let mut out = String::new();
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <style>{STYLE}</style>\n\
         <text class=\"title\" x=\"10\" y=\"22\">{}</text>\n",
        escape(&options.title),
        w = num(width),
        h = num(height),
    );
    for (i, s) in sorted.iter().enumerate() {
        let top = TOP + i as f64 * row;
        let tip = x_of(s.score);
        let sign = if s.score < 0.0 { "negative" } else { "positive" };
        let _ = writeln!(
            out,
            "<g class=\"entry\" data-attribute=\"{name}\" data-rank=\"{}\" data-score=\"{:.6}\">\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{name}</text>\n\
             <rect class=\"bar {sign}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n\
             <text x=\"{}\" y=\"{}\">{:.3}</text>\n</g>",
            s.rank,
            s.score,
            num(left - 8.0),
            num(top + row / 2.0 + 4.0),
            num(tip.min(zero)),
            num(top + 3.0),
            num((tip - zero).abs()),
            num(row - 6.0),
            num(x_of(hi) + 6.0),
            num(top + row / 2.0 + 4.0),
            s.score,
            name = escape(&s.attribute),
        );
    }
    let _ = writeln!(
        out,
        "<line class=\"axis zero-axis\" x1=\"{z}\" y1=\"{}\" x2=\"{z}\" y2=\"{}\"/>\n\
         <text x=\"{z}\" y=\"{}\" text-anchor=\"middle\">0</text>\n</svg>",
        num(TOP - 4.0),
        num(bottom + 4.0),
        num(bottom + 18.0),
        z = num(zero),
    );
    out
}
