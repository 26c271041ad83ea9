//! Kano quality category of an attribute, read off its reinforcement profile.
//!
//! Values `2..=s` are split into a low, a mid and a high zone (thirds,
//! rounded up at both ends). Evidence is the set of significant cells whose
//! factor lies above the null whisker by at least `min_lift`, and within
//! `relative_strength` of the strongest such cell. The rules, in order:
//!
//! 1. no evidence: indifferent / inconclusive;
//! 2. more anti-direction evidence than regular evidence: reverse;
//! 3. one contiguous run of evidence values that touches the mid zone, spans
//!    at least two zones and covers `coverage` of the defined values:
//!    one-dimensional;
//! 4. otherwise every maximal run maps to a category (low only: must-be,
//!    high only: attractive, touching mid: one-dimensional); one distinct
//!    category is the answer, several make a mixed category ordered by
//!    strongest evidence.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::Code;
use crate::error::{Error, Result};
use crate::io::SCHEMA_VERSION;
use crate::ordeval::{CellFamily, Direction, ReinforcementCell, ReinforcementProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BaseCategory {
    MustBe,
    OneDimensional,
    Attractive,
    #[serde(alias = "INDIFFERENT", alias = "INCONCLUSIVE")]
    IndifferentInconclusive,
    Reverse,
}

impl BaseCategory {
    pub const ALL: [BaseCategory; 5] = [
        BaseCategory::MustBe,
        BaseCategory::OneDimensional,
        BaseCategory::Attractive,
        BaseCategory::IndifferentInconclusive,
        BaseCategory::Reverse,
    ];

    pub fn code(self) -> &'static str {
        match self {
            BaseCategory::MustBe => "MUST_BE",
            BaseCategory::OneDimensional => "ONE_DIMENSIONAL",
            BaseCategory::Attractive => "ATTRACTIVE",
            BaseCategory::IndifferentInconclusive => "INDIFFERENT_INCONCLUSIVE",
            BaseCategory::Reverse => "REVERSE",
        }
    }

    /// Phrase used in summary tables.
    pub fn phrase(self) -> &'static str {
        match self {
            BaseCategory::MustBe => "Must-be quality",
            BaseCategory::OneDimensional => "One-dimensional quality",
            BaseCategory::Attractive => "Attractive quality",
            BaseCategory::IndifferentInconclusive => "Inconclusive",
            BaseCategory::Reverse => "Reverse quality",
        }
    }

    pub fn parse(code: &str) -> Option<BaseCategory> {
        match code {
            "INDIFFERENT" | "INCONCLUSIVE" => Some(BaseCategory::IndifferentInconclusive),
            _ => BaseCategory::ALL.into_iter().find(|c| c.code() == code),
        }
    }
}

impl fmt::Display for BaseCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A base category or a mix of at least two distinct base categories.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CategoryRepr", into = "CategoryRepr")]
pub enum KanoCategory {
    Base(BaseCategory),
    /// Dominant component first.
    Mixed(Vec<BaseCategory>),
}

#[derive(Serialize, Deserialize)]
struct CategoryRepr {
    category: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    mixed_components: Vec<BaseCategory>,
}

impl TryFrom<CategoryRepr> for KanoCategory {
    type Error = Error;

    fn try_from(repr: CategoryRepr) -> Result<Self> {
        if repr.category == "MIXED" {
            return KanoCategory::mixed(repr.mixed_components);
        }
        BaseCategory::parse(&repr.category)
            .map(KanoCategory::Base)
            .ok_or_else(|| Error::InvalidParams(format!("unknown Kano category `{}`", repr.category)))
    }
}

impl From<KanoCategory> for CategoryRepr {
    fn from(cat: KanoCategory) -> Self {
        match cat {
            KanoCategory::Base(b) => CategoryRepr {
                category: b.code().into(),
                mixed_components: Vec::new(),
            },
            KanoCategory::Mixed(parts) => CategoryRepr {
                category: "MIXED".into(),
                mixed_components: parts,
            },
        }
    }
}

impl From<BaseCategory> for KanoCategory {
    fn from(b: BaseCategory) -> Self {
        KanoCategory::Base(b)
    }
}

impl KanoCategory {
    pub const INDIFFERENT: KanoCategory = KanoCategory::Base(BaseCategory::IndifferentInconclusive);

    /// Collapses duplicates (first occurrence wins the order); a single
    /// distinct component yields that base category.
    pub fn mixed(parts: Vec<BaseCategory>) -> Result<Self> {
        let mut distinct: Vec<BaseCategory> = Vec::new();
        for p in parts {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        match distinct.len() {
            0 => Err(Error::InvalidParams("a mixed category needs components".into())),
            1 => Ok(KanoCategory::Base(distinct[0])),
            _ => Ok(KanoCategory::Mixed(distinct)),
        }
    }

    pub fn components(&self) -> Vec<BaseCategory> {
        match self {
            KanoCategory::Base(b) => vec![*b],
            KanoCategory::Mixed(parts) => parts.clone(),
        }
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, KanoCategory::Mixed(_))
    }

    /// Same category, ignoring component order.
    pub fn same_as(&self, other: &KanoCategory) -> bool {
        let a: BTreeSet<_> = self.components().into_iter().collect();
        let b: BTreeSet<_> = other.components().into_iter().collect();
        a == b && self.is_mixed() == other.is_mixed()
    }

    pub fn code(&self) -> String {
        match self {
            KanoCategory::Base(b) => b.code().to_string(),
            KanoCategory::Mixed(parts) => format!(
                "MIXED({})",
                parts.iter().map(|p| p.code()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// Summary-table phrase: "Must-be quality and for a certain group one-dimensional quality".
    pub fn phrase(&self) -> String {
        match self {
            KanoCategory::Base(b) => b.phrase().to_string(),
            KanoCategory::Mixed(parts) => {
                let mut out = parts[0].phrase().to_string();
                for p in &parts[1..] {
                    out.push_str(" and for a certain group ");
                    out.push_str(&p.phrase().to_lowercase());
                }
                out
            }
        }
    }
}

impl fmt::Display for KanoCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    Low,
    Mid,
    High,
}

/// Partition of values `2..=s` into zones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zones {
    pub low: Vec<Code>,
    pub mid: Vec<Code>,
    pub high: Vec<Code>,
}

impl Zones {
    /// Low and high zones default to a third of the `s - 1` values, rounded up.
    pub fn new(max_code: Code, low: Option<usize>, high: Option<usize>) -> Zones {
        let values: Vec<Code> = (2..=max_code).collect();
        let len = values.len();
        let third = len.div_ceil(3);
        let low_len = low.unwrap_or(third).min(len);
        let high_len = high.unwrap_or(third).min(len - low_len);
        Zones {
            low: values[..low_len].to_vec(),
            mid: values[low_len..len - high_len].to_vec(),
            high: values[len - high_len..].to_vec(),
        }
    }

    pub fn zone_of(&self, value: Code) -> Option<Zone> {
        if self.low.contains(&value) {
            Some(Zone::Low)
        } else if self.mid.contains(&value) {
            Some(Zone::Mid)
        } else if self.high.contains(&value) {
            Some(Zone::High)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KanoRules {
    /// Override for the number of values in the low zone.
    pub low_zone: Option<usize>,
    /// Override for the number of values in the high zone.
    pub high_zone: Option<usize>,
    /// Minimum factor distance above the null median for a significant cell to count.
    pub min_lift: f64,
    /// Evidence must reach this fraction of the strongest lift of its kind.
    pub relative_strength: f64,
    /// Fraction of defined values a contiguous run must cover to read as one-dimensional.
    pub coverage: f64,
    /// Split a one-dimensional reading when single-code steps show a jump
    /// confined to one end of the scale on top of a weaker trend.
    pub step_refinement: bool,
    /// Steps outside the jump must stay below this fraction of its strength.
    pub step_jump: f64,
    /// Minimum gap between the weakest jump value and the strongest other step
    /// value, in binomial standard errors. Context pairs overlap, so this is a
    /// separation score rather than a calibrated test.
    #[serde(default = "default_step_separation")]
    pub step_separation: f64,
}

fn default_step_separation() -> f64 {
    6.0
}

impl Default for KanoRules {
    fn default() -> Self {
        KanoRules {
            low_zone: None,
            high_zone: None,
            min_lift: 0.1,
            relative_strength: 0.5,
            coverage: 0.5,
            step_refinement: true,
            step_jump: 0.75,
            step_separation: default_step_separation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default = "endpoint_family")]
    pub family: CellFamily,
    pub direction: Direction,
    pub value: Code,
    /// `true` when the cell counts through its anti-direction factor.
    pub anti: bool,
    pub probability: f64,
    pub lift: f64,
    pub zone: Zone,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneSummary {
    pub significant_cells: usize,
    pub evidence_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KanoClassification {
    pub schema_version: u32,
    pub attribute: String,
    #[serde(flatten)]
    pub category: KanoCategory,
    pub evidence: Vec<Evidence>,
    pub low_zone: ZoneSummary,
    pub mid_zone: ZoneSummary,
    pub high_zone: ZoneSummary,
    pub notes: String,
}

pub const NOTE_INSUFFICIENT: &str = "insufficient support";
pub const NOTE_FLAT: &str = "no significant reinforcement";

fn lift_of(cell: &ReinforcementCell, anti: bool) -> Option<(f64, f64)> {
    if anti {
        if !cell.anti_reinforces() {
            return None;
        }
        Some((cell.anti_probability?, cell.anti_lift()?))
    } else {
        if !cell.reinforces() {
            return None;
        }
        Some((cell.probability?, cell.lift()?))
    }
}

fn endpoint_family() -> CellFamily {
    CellFamily::Endpoint
}

/// Significant cells clearing `min_lift`, split into those near the strongest
/// value (primary) and the rest (secondary).
fn select(
    cells: &[ReinforcementCell],
    family: CellFamily,
    zones: &Zones,
    rules: &KanoRules,
    anti: bool,
) -> (Vec<Evidence>, Vec<Evidence>) {
    let candidates: Vec<Evidence> = cells
        .iter()
        .filter_map(|cell| {
            let (probability, lift) = lift_of(cell, anti)?;
            (lift >= rules.min_lift).then(|| Evidence {
                family,
                direction: cell.direction,
                value: cell.value,
                anti,
                probability,
                lift,
                zone: zones.zone_of(cell.value).unwrap_or(Zone::Mid),
            })
        })
        .collect();
    // per-value strength: mean lift over both directions, damping single-cell noise
    let value_strength = |v: Code| {
        let lifts: Vec<f64> = cells
            .iter()
            .filter(|c| c.value == v)
            .filter_map(|c| if anti { c.anti_lift() } else { c.lift() })
            .collect();
        lifts.iter().sum::<f64>() / lifts.len().max(1) as f64
    };
    let strongest = candidates
        .iter()
        .map(|e| value_strength(e.value))
        .fold(f64::NEG_INFINITY, f64::max);
    candidates
        .into_iter()
        .partition(|e| value_strength(e.value) >= rules.relative_strength * strongest)
}

/// Maximal runs of consecutive values, each with its strongest lift.
fn runs(evidence: &[Evidence]) -> Vec<(Vec<Code>, f64)> {
    let values: BTreeSet<Code> = evidence.iter().map(|e| e.value).collect();
    let strength = |v: Code| {
        evidence
            .iter()
            .filter(|e| e.value == v)
            .map(|e| e.lift)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut out: Vec<(Vec<Code>, f64)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((run, best)) if *run.last().unwrap() + 1 == v => {
                run.push(v);
                *best = best.max(strength(v));
            }
            _ => out.push((vec![v], strength(v))),
        }
    }
    out
}

pub fn classify(profile: &ReinforcementProfile, rules: &KanoRules) -> KanoClassification {
    let zones = Zones::new(profile.scale.max_code(), rules.low_zone, rules.high_zone);
    let cells = &profile.cells;
    let (regular, _) = select(cells, CellFamily::Endpoint, &zones, rules, false);
    let (anti, _) = select(cells, CellFamily::Endpoint, &zones, rules, true);

    let mut summaries = [ZoneSummary::default(), ZoneSummary::default(), ZoneSummary::default()];
    let slot = |z: Zone| match z {
        Zone::Low => 0,
        Zone::Mid => 1,
        Zone::High => 2,
    };
    for cell in cells {
        if cell.significant || cell.anti_significant {
            if let Some(z) = zones.zone_of(cell.value) {
                summaries[slot(z)].significant_cells += 1;
            }
        }
    }

    let all_undefined = cells.iter().all(|c| c.probability.is_none());
    let (category, evidence, notes) = if all_undefined {
        (KanoCategory::INDIFFERENT, Vec::new(), NOTE_INSUFFICIENT.to_string())
    } else if regular.is_empty() && anti.is_empty() {
        (KanoCategory::INDIFFERENT, Vec::new(), NOTE_FLAT.to_string())
    } else if anti.len() > regular.len() {
        (
            BaseCategory::Reverse.into(),
            anti,
            "attribute increases predict response decreases".to_string(),
        )
    } else {
        let (category, evidence, notes) = shape_category(regular, &zones, cells, rules);
        match refine(&category, &profile.steps, &zones, rules) {
            Some((category, steps, note)) if rules.step_refinement => {
                let mut evidence = evidence;
                evidence.extend(steps);
                (category, evidence, format!("{notes}; {note}"))
            }
            _ => (category, evidence, notes),
        }
    };
    for e in &evidence {
        summaries[slot(e.zone)].evidence_cells += 1;
    }
    let [low_zone, mid_zone, high_zone] = summaries;
    KanoClassification {
        schema_version: SCHEMA_VERSION,
        attribute: profile.attribute.clone(),
        category,
        evidence,
        low_zone,
        mid_zone,
        high_zone,
        notes,
    }
}

fn zones_of(zones: &Zones, run: &[Code]) -> BTreeSet<Zone> {
    run.iter().filter_map(|&v| zones.zone_of(v)).collect()
}

fn run_category(touched: &BTreeSet<Zone>) -> BaseCategory {
    if touched.contains(&Zone::Mid) || touched.len() > 1 {
        BaseCategory::OneDimensional
    } else if touched.contains(&Zone::Low) {
        BaseCategory::MustBe
    } else {
        BaseCategory::Attractive
    }
}

fn describe(runs: &[(Vec<Code>, f64)]) -> String {
    runs.iter()
        .map(|(run, _)| match run.as_slice() {
            [v] => v.to_string(),
            r => format!("{}..{}", r[0], r[r.len() - 1]),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn shape_category(
    evidence: Vec<Evidence>,
    zones: &Zones,
    cells: &[ReinforcementCell],
    rules: &KanoRules,
) -> (KanoCategory, Vec<Evidence>, String) {
    let defined: BTreeSet<Code> = cells
        .iter()
        .filter(|c| c.probability.is_some())
        .map(|c| c.value)
        .collect();
    let runs = runs(&evidence);

    for (run, _) in &runs {
        let touched = zones_of(zones, run);
        if touched.contains(&Zone::Mid)
            && touched.len() >= 2
            && run.len() as f64 >= rules.coverage * defined.len() as f64
        {
            let notes = format!("contiguous reinforcement over values {}..{}", run[0], run[run.len() - 1]);
            return (BaseCategory::OneDimensional.into(), evidence, notes);
        }
    }

    let mut parts: Vec<(BaseCategory, f64)> = Vec::new();
    for (run, strength) in &runs {
        let cat = run_category(&zones_of(zones, run));
        match parts.iter_mut().find(|(c, _)| *c == cat) {
            Some((_, best)) => *best = best.max(*strength),
            None => parts.push((cat, *strength)),
        }
    }
    parts.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let category = KanoCategory::mixed(parts.into_iter().map(|p| p.0).collect())
        .expect("non-empty evidence yields at least one run");
    (category, evidence, format!("reinforcement at values {}", describe(&runs)))
}

/// A one-dimensional reading whose strong single-code steps all sit in one
/// end zone, with weaker steps reaching the middle, is read as that end's
/// category plus a one-dimensional group.
/// Mean step lift at `value` over both directions and the binomial variance
/// of that mean.
fn step_strength(cells: &[ReinforcementCell], value: Code) -> Option<(f64, f64)> {
    let defined: Vec<(f64, f64)> = cells
        .iter()
        .filter(|c| c.value == value)
        .filter_map(|c| {
            let p = c.probability?;
            Some((c.lift()?, p * (1.0 - p) / c.events as f64))
        })
        .collect();
    let k = defined.len() as f64;
    (k > 0.0).then(|| {
        let mean = defined.iter().map(|d| d.0).sum::<f64>() / k;
        (mean, defined.iter().map(|d| d.1).sum::<f64>() / (k * k))
    })
}

fn refine(
    category: &KanoCategory,
    steps: &[ReinforcementCell],
    zones: &Zones,
    rules: &KanoRules,
) -> Option<(KanoCategory, Vec<Evidence>, String)> {
    if *category != KanoCategory::Base(BaseCategory::OneDimensional) || steps.is_empty() {
        return None;
    }
    let jump = KanoRules { relative_strength: rules.step_jump, ..rules.clone() };
    let (major, minor) = select(steps, CellFamily::Step, zones, &jump, false);
    let major_zones: BTreeSet<Zone> = major.iter().map(|e| e.zone).collect();
    let end = match major_zones.iter().collect::<Vec<_>>().as_slice() {
        [Zone::Low] => BaseCategory::MustBe,
        [Zone::High] => BaseCategory::Attractive,
        _ => return None,
    };
    if !minor.iter().any(|e| e.zone == Zone::Mid) {
        return None;
    }
    // weakest jump value against the strongest value outside the jump
    let pick = |ev: &[Evidence], weakest: bool| {
        let values: BTreeSet<Code> = ev.iter().map(|e| e.value).collect();
        let strengths = values.into_iter().filter_map(|v| step_strength(steps, v));
        if weakest {
            strengths.min_by(|a, b| a.0.total_cmp(&b.0))
        } else {
            strengths.max_by(|a, b| a.0.total_cmp(&b.0))
        }
    };
    let ((hi, hi_var), (lo, lo_var)) = (pick(&major, true)?, pick(&minor, false)?);
    if hi - lo < rules.step_separation * (hi_var + lo_var).sqrt() {
        return None;
    }
    let note = format!(
        "step jump at values {}, weaker steps at {}",
        describe(&runs(&major)),
        describe(&runs(&minor))
    );
    let mut evidence = major;
    evidence.extend(minor);
    evidence.sort_by_key(|e| (e.direction, e.value));
    let category = KanoCategory::mixed(vec![end, BaseCategory::OneDimensional]).ok()?;
    Some((category, evidence, note))
}

/// [`classify`] per profile, order preserved.
pub fn classify_all(profiles: &[ReinforcementProfile], rules: &KanoRules) -> Vec<KanoClassification> {
    profiles.iter().map(|p| classify(p, rules)).collect()
}
