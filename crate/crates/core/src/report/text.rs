use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::kano::{Evidence, KanoClassification};
use crate::ordeval::{CellFamily, ReinforcementCell, ReinforcementProfile};
use crate::relieff::AttributeScore;

const SUMMARY_NAME_WIDTH: usize = 24;

fn check_consistent(
    profiles: &[ReinforcementProfile],
    classifications: &[KanoClassification],
    scores: &[AttributeScore],
) -> Result<()> {
    let sets = [
        ("profiles", profiles.iter().map(|p| p.attribute.as_str()).collect::<BTreeSet<_>>()),
        ("classifications", classifications.iter().map(|c| c.attribute.as_str()).collect()),
        ("scores", scores.iter().map(|s| s.attribute.as_str()).collect()),
    ];
    let all: BTreeSet<&str> = sets.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    let mut problems = Vec::new();
    for (label, set) in &sets {
        let missing: Vec<&str> = all.difference(set).copied().collect();
        if !missing.is_empty() {
            problems.push(format!("{label} lack {}", missing.join(", ")));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::AttributeMismatch(problems.join("; ")))
    }
}

/// Per-attribute sections (score, cell table, category) followed by a
/// two-column summary table.
///
/// Cell table columns are fixed width: value 5, direction 4, probability 7,
/// events 7, null range 15, significance 3, separated by two spaces.
pub fn render_text_report(
    profiles: &[ReinforcementProfile],
    classifications: &[KanoClassification],
    scores: &[AttributeScore],
) -> Result<String> {
    check_consistent(profiles, classifications, scores)?;
    let n = scores.len();
    let mut out = String::new();
    for profile in profiles {
        let name = profile.attribute.as_str();
        let score = scores.iter().find(|s| s.attribute == name).expect("checked");
        let class = classifications.iter().find(|c| c.attribute == name).expect("checked");
        let _ = writeln!(out, "== {name} ==");
        let _ = writeln!(out, "ReliefF score  {:+.4}  (rank {} of {n})", score.score, score.rank);
        let br = &profile.base_rates;
        let _ = writeln!(out, "Base rates     up {:.3}  down {:.3}  ({} pairs)", br.up, br.down, br.pairs);
        out.push('\n');
        let _ = writeln!(
            out,
            "  {:>5}  {:<4}  {:>7}  {:>7}  {:<15}  {:<3}",
            "value", "dir", "p", "events", "null 95% range", "sig"
        );
        let _ = writeln!(
            out,
            "  {}  {}  {}  {}  {}  {}",
            "-".repeat(5),
            "-".repeat(4),
            "-".repeat(7),
            "-".repeat(7),
            "-".repeat(15),
            "-".repeat(3)
        );
        for cell in &profile.cells {
            out.push_str(&cell_row(cell));
        }
        out.push('\n');
        let _ = writeln!(out, "Category  {} ({})", class.category.code(), class.category.phrase());
        if class.evidence.is_empty() {
            let _ = writeln!(out, "Evidence  none");
        } else {
            let items: Vec<String> = class.evidence.iter().map(evidence_item).collect();
            let _ = writeln!(out, "Evidence  {}", items.join("; "));
        }
        if !class.notes.is_empty() {
            let _ = writeln!(out, "Notes     {}", class.notes);
        }
        out.push('\n');
    }
    out.push_str(&render_summary_table(classifications));
    Ok(out)
}

fn cell_row(cell: &ReinforcementCell) -> String {
    let p = cell.probability.map_or_else(|| "-".to_string(), |p| format!("{p:.3}"));
    let range = cell
        .null_box
        .map_or_else(|| "-".to_string(), |b| format!("{:.3} - {:.3}", b.q025, b.q975));
    let sig = match (cell.reinforces(), cell.significant) {
        (true, _) => "+",
        (false, true) => "-",
        _ => "",
    };
    format!(
        "  {:>5}  {:<4}  {:>7}  {:>7}  {:<15}  {:<3}\n",
        cell.value,
        cell.direction.as_str(),
        p,
        cell.events,
        range,
        sig
    )
    .trim_end()
    .to_string()
        + "\n"
}

fn evidence_item(e: &Evidence) -> String {
    let kind = match (e.family, e.anti) {
        (CellFamily::Step, _) => " step",
        (_, true) => " anti",
        _ => "",
    };
    format!("{} {}{kind} p={:.3} lift={:+.3}", e.direction.as_str(), e.value, e.probability, e.lift)
}

/// Attribute name and category phrase, one row per classification.
pub fn render_summary_table(classifications: &[KanoClassification]) -> String {
    let width = classifications
        .iter()
        .map(|c| c.attribute.chars().count())
        .max()
        .unwrap_or(0)
        .max(SUMMARY_NAME_WIDTH);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  Classification", "Attribute");
    let _ = writeln!(out, "{}  {}", "-".repeat(width), "-".repeat(14));
    for c in classifications {
        let _ = writeln!(out, "{:<width$}  {}", c.attribute, c.category.phrase());
    }
    out
}
