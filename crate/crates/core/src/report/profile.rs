use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{escape, num, STYLE};
use crate::ordeval::{Direction, ReinforcementCell, ReinforcementProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePlotOptions {
    /// Device units for a probability of 1 on either side.
    pub axis_length: f64,
    pub row_height: f64,
    /// Overrides the attribute name as chart title.
    pub title: Option<String>,
    pub show_base_rates: bool,
}

impl Default for ProfilePlotOptions {
    fn default() -> Self {
        ProfilePlotOptions {
            axis_length: 250.0,
            row_height: 36.0,
            title: None,
            show_base_rates: true,
        }
    }
}

const LEFT: f64 = 60.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 72.0;

struct Frame {
    center: f64,
    axis: f64,
}

impl Frame {
    /// x of probability `p` on the side of `direction`.
    fn x(&self, direction: Direction, p: f64) -> f64 {
        match direction {
            Direction::Up => self.center + p * self.axis,
            Direction::Down => self.center - p * self.axis,
        }
    }
}

/// Reinforcement profile chart: one row per value, downward factors to the
/// left of the center line, upward factors to the right, null box-and-whiskers
/// drawn over each bar.
pub fn render_profile(profile: &ReinforcementProfile, options: &ProfilePlotOptions) -> String {
    let axis = options.axis_length;
    let row = options.row_height;
    let frame = Frame {
        center: LEFT + axis,
        axis,
    };
    let max_code = profile.scale.max_code();
    let rows = max_code as usize - 1;
    let width = LEFT + 2.0 * axis + RIGHT;
    let axis_y = TOP + rows as f64 * row + 4.0;
    let legend_y = axis_y + 34.0;
    let height = legend_y + 40.0;

    let mut out = String::new();
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <style>{STYLE}</style>\n",
        w = num(width),
        h = num(height),
    );
    let title = options.title.as_deref().unwrap_or(&profile.attribute);
    let _ = writeln!(out, "<text class=\"title\" x=\"{}\" y=\"22\">{}</text>", num(LEFT), escape(title));
    if options.show_base_rates {
        let br = &profile.base_rates;
        let _ = writeln!(
            out,
            "<text class=\"base-rates\" x=\"{}\" y=\"40\">base rates: down {:.3}, up {:.3} ({} pairs)</text>",
            num(LEFT),
            br.down,
            br.up,
            br.pairs
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"60\" text-anchor=\"middle\">downward</text>\n<text x=\"{}\" y=\"60\" text-anchor=\"middle\">upward</text>",
        num(frame.center - axis / 2.0),
        num(frame.center + axis / 2.0)
    );

    // gridlines and axis
    let _ = writeln!(out, "<g class=\"frame\">");
    for tick in [0.25, 0.5, 0.75, 1.0] {
        for d in [Direction::Down, Direction::Up] {
            let x = num(frame.x(d, tick));
            let _ = writeln!(
                out,
                "<line class=\"grid\" x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\"/>",
                num(TOP),
                num(axis_y)
            );
        }
    }
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{c}\" y1=\"{}\" x2=\"{c}\" y2=\"{}\"/>",
        num(TOP - 4.0),
        num(axis_y),
        c = num(frame.center)
    );
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>",
        num(frame.x(Direction::Down, 1.0)),
        num(frame.x(Direction::Up, 1.0)),
        y = num(axis_y)
    );
    for tick in [0.0, 0.5, 1.0] {
        for d in [Direction::Down, Direction::Up] {
            if tick == 0.0 && d == Direction::Down {
                continue;
            }
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{tick:.1}</text>",
                num(frame.x(d, tick)),
                num(axis_y + 14.0)
            );
        }
    }
    let _ = writeln!(out, "</g>");

    // highest value on top
    for (i, v) in (2..=max_code).rev().enumerate() {
        let top = TOP + i as f64 * row;
        let label = profile
            .scale
            .labels()
            .and_then(|l| l.get(v as usize - 1))
            .map(|l| escape(l))
            .unwrap_or_else(|| v.to_string());
        let _ = writeln!(
            out,
            "<text class=\"value-label\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{label}</text>",
            num(LEFT - 8.0),
            num(top + row / 2.0 + 4.0)
        );
        for d in [Direction::Down, Direction::Up] {
            cell(&mut out, &frame, profile.cell(d, v), top, row);
        }
    }

    legend(&mut out, legend_y);
    out.push_str("</svg>\n");
    out
}

fn cell(out: &mut String, frame: &Frame, cell: &ReinforcementCell, top: f64, row: f64) {
    let dir = match cell.direction {
        Direction::Up => "up",
        Direction::Down => "down",
    };
    let bar_y = top + 14.0;
    let bar_h = (row - 18.0).max(2.0);
    let Some(p) = cell.probability else {
        let _ = writeln!(
            out,
            "<g class=\"cell {dir} undefined\" data-direction=\"{}\" data-value=\"{}\" data-events=\"{}\">\n\
             <rect class=\"placeholder\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n</g>",
            cell.direction.as_str(),
            cell.value,
            cell.events,
            num(frame.x(cell.direction, 1.0).min(frame.center)),
            num(bar_y),
            num(frame.axis),
            num(bar_h)
        );
        return;
    };
    let sig = if cell.significant { " significant" } else { "" };
    let _ = writeln!(
        out,
        "<g class=\"cell {dir}{sig}\" data-direction=\"{}\" data-value=\"{}\" data-probability=\"{p:.6}\" data-events=\"{}\">",
        cell.direction.as_str(),
        cell.value,
        cell.events
    );
    let tip = frame.x(cell.direction, p);
    let _ = writeln!(
        out,
        "<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
        num(tip.min(frame.center)),
        num(bar_y),
        num((tip - frame.center).abs()),
        num(bar_h)
    );
    if let Some(b) = cell.null_box {
        let gy = top + 8.0;
        let lo = frame.x(cell.direction, b.q025);
        let hi = frame.x(cell.direction, b.q975);
        let q25 = frame.x(cell.direction, b.q25);
        let q75 = frame.x(cell.direction, b.q75);
        let med = num(frame.x(cell.direction, b.median));
        let _ = writeln!(
            out,
            "<g class=\"null\">\n\
             <line class=\"whisker\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>\n\
             <line class=\"cap\" x1=\"{l}\" y1=\"{y0}\" x2=\"{l}\" y2=\"{y1}\"/>\n\
             <line class=\"cap\" x1=\"{h}\" y1=\"{y0}\" x2=\"{h}\" y2=\"{y1}\"/>\n\
             <rect class=\"box\" x=\"{}\" y=\"{y0}\" width=\"{}\" height=\"8.00\"/>\n\
             <line class=\"median\" x1=\"{med}\" y1=\"{y0}\" x2=\"{med}\" y2=\"{y1}\"/>\n</g>",
            num(lo),
            num(hi),
            num(q25.min(q75)),
            num((q75 - q25).abs()),
            y = num(gy),
            y0 = num(gy - 4.0),
            y1 = num(gy + 4.0),
            l = num(lo),
            h = num(hi),
        );
    }
    out.push_str("</g>\n");
}

fn legend(out: &mut String, y: f64) {
    let _ = writeln!(
        out,
        "<g class=\"legend\">\n\
         <rect class=\"bar\" x=\"{x0}\" y=\"{ys}\" width=\"16\" height=\"10\"/>\n\
         <text x=\"{t0}\" y=\"{yt}\">reinforcement factor</text>\n\
         <g class=\"significant\"><rect class=\"bar\" x=\"{x1}\" y=\"{ys}\" width=\"16\" height=\"10\"/></g>\n\
         <text x=\"{t1}\" y=\"{yt}\">significant</text>\n\
         <line class=\"whisker\" x1=\"{x0}\" y1=\"{ym2}\" x2=\"{x2e}\" y2=\"{ym2}\"/>\n\
         <rect class=\"box\" x=\"{x2b}\" y=\"{ys2}\" width=\"8\" height=\"10\"/>\n\
         <text x=\"{t0}\" y=\"{yt2}\">permutation null (quartiles, 95% range)</text>\n\
         <rect class=\"placeholder\" x=\"{x3}\" y=\"{ys2}\" width=\"16\" height=\"10\"/>\n\
         <text x=\"{t3}\" y=\"{yt2}\">too few events</text>\n</g>",
        x0 = num(LEFT),
        t0 = num(LEFT + 22.0),
        x1 = num(LEFT + 250.0),
        t1 = num(LEFT + 272.0),
        x2e = num(LEFT + 16.0),
        x2b = num(LEFT + 4.0),
        x3 = num(LEFT + 250.0),
        t3 = num(LEFT + 272.0),
        ys = num(y - 9.0),
        yt = num(y),
        ys2 = num(y + 9.0),
        ym2 = num(y + 14.0),
        yt2 = num(y + 18.0),
    );
}
