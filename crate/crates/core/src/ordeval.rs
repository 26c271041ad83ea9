//! Value-level reinforcement factors for ordinal attributes.
//!
//! For each pivot respondent `R` the engine takes its nearest respondents
//! (the *context*) and compares every context member `S` with `R`:
//!
//! * `A(S) > A(R)`: an upward event at value `A(S)`; success when the response
//!   of `S` is higher, anti-success when it is lower.
//! * `A(S) < A(R)`: a downward event at value `A(R)`; success when the response
//!   of `S` is lower, anti-success when it is higher.
//!
//! Equal values and pairs with `A` missing record nothing. The reinforcement
//! factor of a cell is `success / events`, left undefined below
//! `min_support` events. Significance comes from a permutation null: column
//! `A` is shuffled (keeping its value distribution), the factors recomputed,
//! and a cell is significant when its factor falls outside the central
//! `1 - alpha` interval of the replicates.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{instance_distance, ClassConditionalTable, Code, OrdinalDataset, OrdinalScale};
use crate::error::{Error, Result};
use crate::io::SCHEMA_VERSION;
use crate::neighbors::{tie_inclusive_nearest, Neighbor};
use crate::rng;
use crate::stats::quantile_sorted;

pub const DEFAULT_CONTEXT_SIZE: usize = 30;
pub const MIN_REPLICATES_FOR_SIGNIFICANCE: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrdEvalParams {
    /// Context size `k`; `None` resolves to `min(n - 1, 30)`.
    pub context_size: Option<usize>,
    /// Permutation replicates `B`; 0 skips the null distribution.
    pub bootstrap_replicates: usize,
    pub alpha: f64,
    pub min_support: usize,
    pub seed: u64,
    pub exclude_evaluated_attribute: bool,
    #[serde(default = "yes")]
    pub parallel: bool,
}

fn yes() -> bool {
    true
}

impl Default for OrdEvalParams {
    fn default() -> Self {
        OrdEvalParams {
            context_size: None,
            bootstrap_replicates: 200,
            alpha: 0.05,
            min_support: 5,
            seed: 0,
            exclude_evaluated_attribute: true,
            parallel: true,
        }
    }
}

impl OrdEvalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.context_size == Some(0) {
            return Err(Error::InvalidParams("context size must be at least 1".into()));
        }
        if self.bootstrap_replicates > 0 && self.bootstrap_replicates < MIN_REPLICATES_FOR_SIGNIFICANCE {
            return Err(Error::InvalidParams(format!(
                "significance needs at least {MIN_REPLICATES_FOR_SIGNIFICANCE} replicates, got {}",
                self.bootstrap_replicates
            )));
        }
        Ok(())
    }

    /// `k` clamped to `n - 1`.
    pub fn resolved_context_size(&self, n: usize) -> usize {
        self.context_size
            .unwrap_or(DEFAULT_CONTEXT_SIZE)
            .clamp(1, n.saturating_sub(1).max(1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "UP",
            Direction::Down => "DOWN",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub success: u64,
    pub anti_success: u64,
    pub events: u64,
}

impl EventCounts {
    #[inline]
    fn add(&mut self, success: bool, anti: bool) {
        self.events += 1;
        self.success += success as u64;
        self.anti_success += anti as u64;
    }

    fn probability(count: u64, events: u64, min_support: usize) -> Option<f64> {
        (events >= min_support as u64 && events > 0).then(|| count as f64 / events as f64)
    }
}

/// Which events a cell collects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellFamily {
    /// Any change ending at (upward) or starting from (downward) the value.
    Endpoint,
    /// Single-code changes only: `v - 1 -> v` upward, `v -> v - 1` downward.
    Step,
}

/// Raw counts for one attribute: cells indexed by value `2..=s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReinforcementCounts {
    pub max_code: Code,
    pub up: Vec<EventCounts>,
    pub down: Vec<EventCounts>,
    /// Subset of `up` / `down` with a one-code change.
    pub up_steps: Vec<EventCounts>,
    pub down_steps: Vec<EventCounts>,
    /// Context pairs with the attribute present on both sides.
    pub pairs: u64,
    pub increases: u64,
    pub decreases: u64,
}

impl ReinforcementCounts {
    fn empty(max_code: Code) -> Self {
        let cells = (max_code as usize).saturating_sub(1);
        ReinforcementCounts {
            max_code,
            up: vec![EventCounts::default(); cells],
            down: vec![EventCounts::default(); cells],
            up_steps: vec![EventCounts::default(); cells],
            down_steps: vec![EventCounts::default(); cells],
            pairs: 0,
            increases: 0,
            decreases: 0,
        }
    }

    pub fn cell(&self, direction: Direction, value: Code) -> EventCounts {
        self.family_cell(CellFamily::Endpoint, direction, value)
    }

    pub fn family_cell(&self, family: CellFamily, direction: Direction, value: Code) -> EventCounts {
        let idx = value as usize - 2;
        match (family, direction) {
            (CellFamily::Endpoint, Direction::Up) => self.up[idx],
            (CellFamily::Endpoint, Direction::Down) => self.down[idx],
            (CellFamily::Step, Direction::Up) => self.up_steps[idx],
            (CellFamily::Step, Direction::Down) => self.down_steps[idx],
        }
    }

    pub fn base_rates(&self) -> BaseRates {
        let rate = |x: u64| if self.pairs == 0 { 0.0 } else { x as f64 / self.pairs as f64 };
        BaseRates {
            up: rate(self.increases),
            down: rate(self.decreases),
            pairs: self.pairs,
        }
    }

    /// Adds the events of pivot `r` against context member `s`.
    #[inline]
    pub fn record(&mut self, a_r: Code, a_s: Code, y_r: Code, y_s: Code) {
        self.pairs += 1;
        self.increases += (y_s > y_r) as u64;
        self.decreases += (y_s < y_r) as u64;
        if a_s > a_r {
            let idx = a_s as usize - 2;
            let (hit, anti) = (y_s > y_r, y_s < y_r);
            self.up[idx].add(hit, anti);
            if a_s - a_r == 1 {
                self.up_steps[idx].add(hit, anti);
            }
        } else if a_s < a_r {
            let idx = a_r as usize - 2;
            let (hit, anti) = (y_s < y_r, y_s > y_r);
            self.down[idx].add(hit, anti);
            if a_r - a_s == 1 {
                self.down_steps[idx].add(hit, anti);
            }
        }
    }
}

/// Unconditional probability of a response increase / decrease among context pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseRates {
    pub up: f64,
    pub down: f64,
    pub pairs: u64,
}

impl BaseRates {
    pub fn for_direction(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Up => self.up,
            Direction::Down => self.down,
        }
    }
}

/// Box-and-whiskers summary of a null distribution. The whiskers sit at the
/// `alpha / 2` and `1 - alpha / 2` quantiles (2.5% and 97.5% at the default alpha).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullBox {
    pub q025: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q975: f64,
}

impl NullBox {
    pub fn from_samples(mut samples: Vec<f64>, alpha: f64) -> Option<NullBox> {
        if samples.is_empty() {
            return None;
        }
        samples.sort_by(f64::total_cmp);
        let q = |p| quantile_sorted(&samples, p);
        Some(NullBox {
            q025: q(alpha / 2.0),
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            q975: q(1.0 - alpha / 2.0),
        })
    }

    pub fn excludes(&self, p: f64) -> bool {
        p < self.q025 || p > self.q975
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReinforcementCell {
    pub direction: Direction,
    pub value: Code,
    pub probability: Option<f64>,
    pub success: u64,
    pub events: u64,
    pub null_box: Option<NullBox>,
    pub significant: bool,
    pub anti_probability: Option<f64>,
    pub anti_success: u64,
    pub anti_null_box: Option<NullBox>,
    pub anti_significant: bool,
}

impl ReinforcementCell {
    /// Cell from raw counts and its null summary; probabilities are
    /// undefined below `min_support` events.
    pub fn from_counts(
        direction: Direction,
        value: Code,
        c: EventCounts,
        null: CellNull,
        min_support: usize,
    ) -> ReinforcementCell {
        let probability = EventCounts::probability(c.success, c.events, min_support);
        let anti_probability = EventCounts::probability(c.anti_success, c.events, min_support);
        let flag = |p: Option<f64>, b: Option<NullBox>| match (p, b) {
            (Some(p), Some(b)) => b.excludes(p),
            _ => false,
        };
        ReinforcementCell {
            direction,
            value,
            probability,
            success: c.success,
            events: c.events,
            null_box: null.null_box,
            significant: flag(probability, null.null_box),
            anti_probability,
            anti_success: c.anti_success,
            anti_null_box: null.anti_null_box,
            anti_significant: flag(anti_probability, null.anti_null_box),
        }
    }

    /// Significant with the factor above the upper whisker.
    pub fn reinforces(&self) -> bool {
        match (self.significant, self.probability, self.null_box) {
            (true, Some(p), Some(b)) => p > b.q975,
            _ => false,
        }
    }

    /// Anti-factor significant and above its upper whisker.
    pub fn anti_reinforces(&self) -> bool {
        match (self.anti_significant, self.anti_probability, self.anti_null_box) {
            (true, Some(p), Some(b)) => p > b.q975,
            _ => false,
        }
    }

    /// Distance of the factor above the null median, if both exist.
    pub fn lift(&self) -> Option<f64> {
        Some(self.probability? - self.null_box?.median)
    }

    pub fn anti_lift(&self) -> Option<f64> {
        Some(self.anti_probability? - self.anti_null_box?.median)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReinforcementProfile {
    pub schema_version: u32,
    pub attribute: String,
    pub scale: OrdinalScale,
    pub base_rates: BaseRates,
    /// Upward cells for values `2..=s`, then downward cells for `2..=s`.
    pub cells: Vec<ReinforcementCell>,
    /// Same layout for single-code changes; empty when not computed.
    #[serde(default)]
    pub steps: Vec<ReinforcementCell>,
    /// Parameters as used, context size resolved and seed as consumed.
    pub params: OrdEvalParams,
}

impl ReinforcementProfile {
    pub fn cell(&self, direction: Direction, value: Code) -> &ReinforcementCell {
        &self.cells[self.offset(direction, value)]
    }

    pub fn step(&self, direction: Direction, value: Code) -> Option<&ReinforcementCell> {
        self.steps.get(self.offset(direction, value))
    }

    pub fn family(&self, family: CellFamily) -> &[ReinforcementCell] {
        match family {
            CellFamily::Endpoint => &self.cells,
            CellFamily::Step => &self.steps,
        }
    }

    fn offset(&self, direction: Direction, value: Code) -> usize {
        let s = self.scale.max_code() as usize;
        let base = match direction {
            Direction::Up => 0,
            Direction::Down => s - 1,
        };
        base + value as usize - 2
    }

    pub fn cells_in(&self, direction: Direction) -> impl Iterator<Item = &ReinforcementCell> {
        self.cells.iter().filter(move |c| c.direction == direction)
    }

    pub fn is_all_undefined(&self) -> bool {
        self.cells.iter().all(|c| c.probability.is_none())
    }
}

/// Null boxes per cell, in the same layout as [`ReinforcementCounts`].
#[derive(Clone, Debug, PartialEq)]
pub struct NullDistribution {
    pub replicates: usize,
    pub up: Vec<CellNull>,
    pub down: Vec<CellNull>,
    pub up_steps: Vec<CellNull>,
    pub down_steps: Vec<CellNull>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CellNull {
    pub null_box: Option<NullBox>,
    pub anti_null_box: Option<NullBox>,
    /// Replicates in which the cell was defined.
    pub samples: usize,
}

impl NullDistribution {
    pub fn cell(&self, direction: Direction, value: Code) -> &CellNull {
        self.family_cell(CellFamily::Endpoint, direction, value)
    }

    pub fn family_cell(&self, family: CellFamily, direction: Direction, value: Code) -> &CellNull {
        let idx = value as usize - 2;
        match (family, direction) {
            (CellFamily::Endpoint, Direction::Up) => &self.up[idx],
            (CellFamily::Endpoint, Direction::Down) => &self.down[idx],
            (CellFamily::Step, Direction::Up) => &self.up_steps[idx],
            (CellFamily::Step, Direction::Down) => &self.down_steps[idx],
        }
    }
}

fn distance_exclusion(attr: usize, params: &OrdEvalParams) -> Option<usize> {
    params.exclude_evaluated_attribute.then_some(attr)
}

fn context_with(
    ds: &OrdinalDataset,
    table: &ClassConditionalTable,
    pivot: usize,
    exclude: Option<usize>,
    k: usize,
) -> Vec<usize> {
    let candidates = (0..ds.n_rows())
        .filter(|&j| j != pivot)
        .map(|j| Neighbor {
            row: j,
            distance: instance_distance(ds, table, pivot, j, exclude),
        })
        .collect();
    tie_inclusive_nearest(candidates, k)
        .into_iter()
        .map(|nb| nb.row)
        .collect()
}

/// The `k` rows nearest to `pivot` (never `pivot` itself), with every row tied
/// at the k-th distance included. Distances skip `attr` when
/// `exclude_evaluated_attribute` is set.
pub fn nearest_context(
    ds: &OrdinalDataset,
    table: &ClassConditionalTable,
    pivot: usize,
    attr: usize,
    params: &OrdEvalParams,
) -> Vec<usize> {
    let k = params.resolved_context_size(ds.n_rows());
    context_with(ds, table, pivot, distance_exclusion(attr, params), k)
}

fn all_contexts(
    ds: &OrdinalDataset,
    table: &ClassConditionalTable,
    attr: usize,
    params: &OrdEvalParams,
) -> Vec<Vec<usize>> {
    let k = params.resolved_context_size(ds.n_rows());
    let exclude = distance_exclusion(attr, params);
    let one = |pivot| context_with(ds, table, pivot, exclude, k);
    if params.parallel {
        (0..ds.n_rows()).into_par_iter().map(one).collect()
    } else {
        (0..ds.n_rows()).map(one).collect()
    }
}

fn count_events(
    column: &[Option<Code>],
    response: &[Code],
    contexts: &[Vec<usize>],
    max_code: Code,
) -> ReinforcementCounts {
    let mut counts = ReinforcementCounts::empty(max_code);
    for (r, context) in contexts.iter().enumerate() {
        let Some(a_r) = column[r] else { continue };
        for &s in context {
            if let Some(a_s) = column[s] {
                counts.record(a_r, a_s, response[r], response[s]);
            }
        }
    }
    counts
}

/// Success / anti-success / event counts for every cell of `attr`, plus base-rate counts.
pub fn compute_reinforcements(
    ds: &OrdinalDataset,
    attr: usize,
    params: &OrdEvalParams,
) -> ReinforcementCounts {
    let table = ClassConditionalTable::new(ds);
    let contexts = all_contexts(ds, &table, attr, params);
    count_events(&ds.column(attr), ds.responses(), &contexts, ds.scale(attr).max_code())
}

/// Column `attr` shuffled with the stream for replicate `replicate` under `seed`.
pub fn permuted_column(column: &[Option<Code>], seed: u64, replicate: usize) -> Vec<Option<Code>> {
    let mut out = column.to_vec();
    out.shuffle(&mut rng::stream(seed, replicate as u64));
    out
}

/// Permutation null distribution of every cell of `attr`.
///
/// Each replicate shuffles column `attr` and recounts. Contexts are reused
/// when the attribute is excluded from the distance (they cannot change);
/// otherwise they are rebuilt from the shuffled data.
pub fn null_distribution(
    ds: &OrdinalDataset,
    attr: usize,
    params: &OrdEvalParams,
) -> Result<NullDistribution> {
    if params.bootstrap_replicates == 0 {
        return Err(Error::InvalidParams("null distribution needs at least 1 replicate".into()));
    }
    let column = ds.column(attr);
    let max_code = ds.scale(attr).max_code();
    let table = ClassConditionalTable::new(ds);
    let fixed_contexts = params
        .exclude_evaluated_attribute
        .then(|| all_contexts(ds, &table, attr, params));

    let replicate = |b: usize| -> Result<ReinforcementCounts> {
        let shuffled = permuted_column(&column, params.seed, b);
        match &fixed_contexts {
            Some(contexts) => Ok(count_events(&shuffled, ds.responses(), contexts, max_code)),
            None => {
                let permuted = ds.with_column(attr, &shuffled)?;
                let table = ClassConditionalTable::new(&permuted);
                let contexts = all_contexts(&permuted, &table, attr, params);
                Ok(count_events(&shuffled, ds.responses(), &contexts, max_code))
            }
        }
    };
    let replicates: Vec<ReinforcementCounts> = if params.parallel {
        (0..params.bootstrap_replicates)
            .into_par_iter()
            .map(replicate)
            .collect::<Result<_>>()?
    } else {
        (0..params.bootstrap_replicates)
            .map(replicate)
            .collect::<Result<_>>()?
    };

    let summarize = |pick: &dyn Fn(&ReinforcementCounts) -> EventCounts| -> CellNull {
        let mut regular = Vec::with_capacity(replicates.len());
        let mut anti = Vec::with_capacity(replicates.len());
        for counts in &replicates {
            let c = pick(counts);
            if let Some(p) = EventCounts::probability(c.success, c.events, params.min_support) {
                regular.push(p);
                anti.push(c.anti_success as f64 / c.events as f64);
            }
        }
        CellNull {
            samples: regular.len(),
            null_box: NullBox::from_samples(regular, params.alpha),
            anti_null_box: NullBox::from_samples(anti, params.alpha),
        }
    };
    let family = |f: CellFamily, d: Direction| -> Vec<CellNull> {
        (2..=max_code)
            .map(|v| summarize(&|c: &ReinforcementCounts| c.family_cell(f, d, v)))
            .collect()
    };
    Ok(NullDistribution {
        replicates: params.bootstrap_replicates,
        up: family(CellFamily::Endpoint, Direction::Up),
        down: family(CellFamily::Endpoint, Direction::Down),
        up_steps: family(CellFamily::Step, Direction::Up),
        down_steps: family(CellFamily::Step, Direction::Down),
    })
}

/// Full profile of one attribute: factors, null boxes and significance flags.
/// The permutation streams are seeded with `params.seed` as given.
pub fn evaluate_attribute(
    ds: &OrdinalDataset,
    attr: usize,
    params: &OrdEvalParams,
) -> Result<ReinforcementProfile> {
    params.validate()?;
    if attr >= ds.n_attributes() {
        return Err(Error::InvalidParams(format!("attribute index {attr} out of range")));
    }
    let counts = compute_reinforcements(ds, attr, params);
    let null = if params.bootstrap_replicates > 0 {
        Some(null_distribution(ds, attr, params)?)
    } else {
        None
    };

    let max_code = ds.scale(attr).max_code();
    let build = |family: CellFamily| -> Vec<ReinforcementCell> {
        let mut cells = Vec::with_capacity(2 * (max_code as usize - 1));
        for direction in [Direction::Up, Direction::Down] {
            for v in 2..=max_code {
                let c = counts.family_cell(family, direction, v);
                let cell_null = null
                    .as_ref()
                    .map(|n| n.family_cell(family, direction, v).clone())
                    .unwrap_or_default();
                cells.push(ReinforcementCell::from_counts(direction, v, c, cell_null, params.min_support));
            }
        }
        cells
    };
    let cells = build(CellFamily::Endpoint);
    let steps = build(CellFamily::Step);

    let mut echo = params.clone();
    echo.context_size = Some(params.resolved_context_size(ds.n_rows()));
    Ok(ReinforcementProfile {
        schema_version: SCHEMA_VERSION,
        attribute: ds.attribute_name(attr).to_string(),
        scale: ds.scale(attr).clone(),
        base_rates: counts.base_rates(),
        cells,
        steps,
        params: echo,
    })
}

/// Seed used for attribute `attr` when evaluating a whole dataset.
pub fn attribute_seed(master: u64, attr: usize) -> u64 {
    rng::derive_seed(master, attr as u64)
}

/// Profiles for every attribute in declaration order; attribute `j` is
/// evaluated with seed [`attribute_seed`]`(params.seed, j)`.
pub fn evaluate_all(ds: &OrdinalDataset, params: &OrdEvalParams) -> Result<Vec<ReinforcementProfile>> {
    params.validate()?;
    let one = |attr: usize| {
        let mut p = params.clone();
        p.seed = attribute_seed(params.seed, attr);
        evaluate_attribute(ds, attr, &p)
    };
    if params.parallel {
        (0..ds.n_attributes()).into_par_iter().map(one).collect()
    } else {
        (0..ds.n_attributes()).map(one).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(cols: Vec<Vec<Option<u8>>>, response: Vec<u8>) -> OrdinalDataset {
        let a = cols.len();
        OrdinalDataset::from_columns(
            (0..a).map(|j| format!("a{j}")).collect(),
            vec![OrdinalScale::likert7(); a],
            "y",
            OrdinalScale::likert7(),
            cols,
            response,
        )
        .unwrap()
    }

    fn present(v: &[u8]) -> Vec<Option<u8>> {
        v.iter().map(|&x| Some(x)).collect()
    }

    fn random_codes(n: usize, seed: u64) -> Vec<u8> {
        use rand::Rng;
        let mut rng = rng::stream(seed, 0);
        (0..n).map(|_| rng.random_range(1..=7)).collect()
    }

    fn no_null() -> OrdEvalParams {
        OrdEvalParams {
            bootstrap_replicates: 0,
            ..Default::default()
        }
    }

    #[test]
    fn constant_attribute_has_no_events() {
        let y: Vec<u8> = (0..20).map(|i| (i % 7 + 1) as u8).collect();
        let ds = dataset(vec![present(&[4; 20]), present(&y)], y);
        let counts = compute_reinforcements(&ds, 0, &no_null());
        assert!(counts.up.iter().chain(&counts.down).all(|c| c.events == 0));
        let profile = evaluate_attribute(&ds, 0, &no_null()).unwrap();
        assert!(profile.is_all_undefined());
        assert_eq!(profile.cells.len(), 12);
    }

    #[test]
    fn copy_and_reverse_extremes() {
        let y = random_codes(70, 1);
        let noise = random_codes(70, 2);
        let rev: Vec<u8> = y.iter().map(|&v| 8 - v).collect();
        let params = OrdEvalParams {
            bootstrap_replicates: 50,
            ..Default::default()
        };
        let ds = dataset(vec![present(&y), present(&noise)], y.clone());
        let copy = evaluate_attribute(&ds, 0, &params).unwrap();
        let mut defined = 0;
        for cell in &copy.cells {
            if let Some(p) = cell.probability {
                assert_eq!(p, 1.0);
                assert_eq!(cell.anti_probability, Some(0.0));
                defined += 1;
            }
        }
        assert!(defined > 0);
        let ds = dataset(vec![present(&rev), present(&noise)], y);
        let reverse = evaluate_attribute(&ds, 0, &params).unwrap();
        let mut defined = 0;
        for cell in &reverse.cells {
            if let Some(p) = cell.probability {
                assert_eq!(p, 0.0);
                assert_eq!(cell.anti_probability, Some(1.0));
                defined += 1;
            }
        }
        assert!(defined > 0);
    }

    #[test]
    fn exhaustive_context_is_everyone_else() {
        let y = vec![1, 2, 3, 4, 5, 6];
        let ds = dataset(vec![present(&[1, 2, 3, 4, 5, 6]), present(&[1, 1, 2, 7, 3, 3])], y);
        let table = ClassConditionalTable::new(&ds);
        let params = OrdEvalParams {
            context_size: Some(5),
            ..no_null()
        };
        let ctx = nearest_context(&ds, &table, 2, 0, &params);
        assert_eq!(ctx, vec![0, 1, 4, 5, 3]);
        // k larger than n - 1 is clamped
        let params = OrdEvalParams {
            context_size: Some(50),
            ..no_null()
        };
        assert_eq!(nearest_context(&ds, &table, 2, 0, &params).len(), 5);
    }

    #[test]
    fn duplicates_of_the_pivot_come_first() {
        let other = present(&[3, 3, 3, 1, 7, 5]);
        let ds = dataset(vec![present(&[1, 2, 3, 4, 5, 6]), other], vec![1, 2, 3, 4, 5, 6]);
        let table = ClassConditionalTable::new(&ds);
        let params = OrdEvalParams {
            context_size: Some(2),
            ..no_null()
        };
        // with a0 excluded, rows 0, 1, 2 are identical
        let ctx = nearest_context(&ds, &table, 0, 0, &params);
        assert_eq!(ctx, vec![1, 2]);
    }

    #[test]
    fn six_row_context_with_ties() {
        // distances from row 0 over a1, a2 (a0 excluded), in units of 1/6:
        // row1: 1+0=1, row2: 1+1=2, row3: 0+2=2, row4: 3+0=3, row5: 2+0=2
        let ds = dataset(
            vec![
                present(&[4, 1, 2, 3, 5, 6]),
                present(&[1, 2, 2, 1, 4, 3]),
                present(&[1, 1, 2, 3, 1, 1]),
            ],
            vec![1, 2, 3, 4, 5, 6],
        );
        let table = ClassConditionalTable::new(&ds);
        let params = OrdEvalParams {
            context_size: Some(3),
            ..no_null()
        };
        assert_eq!(nearest_context(&ds, &table, 0, 0, &params), vec![1, 2, 3, 5]);
        let params = OrdEvalParams {
            context_size: Some(1),
            ..no_null()
        };
        assert_eq!(nearest_context(&ds, &table, 0, 0, &params), vec![1]);
        // including a0 in the distance: row1 gets +3, row3 +1, row5 +2 (units 1/6)
        let params = OrdEvalParams {
            context_size: Some(1),
            exclude_evaluated_attribute: false,
            ..no_null()
        };
        assert_eq!(nearest_context(&ds, &table, 0, 0, &params), vec![3]);
    }

    #[test]
    fn missing_values_record_nothing() {
        let ds = dataset(
            vec![
                vec![Some(1), None, Some(3), Some(2), None, Some(7)],
                present(&[1, 1, 1, 1, 1, 1]),
            ],
            vec![1, 2, 3, 1, 2, 3],
        );
        let params = OrdEvalParams {
            context_size: Some(5),
            ..no_null()
        };
        let counts = compute_reinforcements(&ds, 0, &params);
        // 4 present rows, all with distinct values: 4 * 3 ordered pairs
        assert_eq!(counts.pairs, 12);
        let events: u64 = counts.up.iter().chain(&counts.down).map(|c| c.events).sum();
        assert_eq!(events, 12);
    }

    #[test]
    fn min_support_leaves_cells_undefined() {
        let ds = dataset(vec![present(&[1, 2, 2, 2]), present(&[1, 1, 1, 1])], vec![1, 2, 2, 3]);
        let params = OrdEvalParams {
            context_size: Some(3),
            min_support: 4,
            ..no_null()
        };
        let profile = evaluate_attribute(&ds, 0, &params).unwrap();
        // UP at 2: pivot 0 against rows 1..3 -> 3 events < 4
        let up2 = profile.cell(Direction::Up, 2);
        assert_eq!(up2.events, 3);
        assert_eq!(up2.success, 3);
        assert_eq!(up2.probability, None);
        assert!(!up2.significant);
    }

    #[test]
    fn permutation_keeps_histogram() {
        let column: Vec<Option<u8>> = (0..50).map(|i| if i % 9 == 0 { None } else { Some((i % 7 + 1) as u8) }).collect();
        let mut sorted = column.clone();
        sorted.sort();
        for b in 0..10 {
            let mut p = permuted_column(&column, 11, b);
            assert_ne!(p, column);
            p.sort();
            assert_eq!(p, sorted);
        }
    }

    #[test]
    fn null_boxes_are_deterministic_and_ordered() {
        let y = random_codes(60, 3);
        let x = random_codes(60, 4);
        let z = random_codes(60, 5);
        let ds = dataset(vec![present(&x), present(&z)], y);
        let params = OrdEvalParams {
            bootstrap_replicates: 60,
            seed: 5,
            ..Default::default()
        };
        let a = null_distribution(&ds, 0, &params).unwrap();
        let b = null_distribution(&ds, 0, &OrdEvalParams { parallel: false, ..params.clone() }).unwrap();
        assert_eq!(a, b);
        for cell in a.up.iter().chain(&a.down) {
            if let Some(nb) = cell.null_box {
                assert!(nb.q025 <= nb.q25 && nb.q25 <= nb.median);
                assert!(nb.median <= nb.q75 && nb.q75 <= nb.q975);
                assert!((0.0..=1.0).contains(&nb.q025) && nb.q975 <= 1.0);
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(OrdEvalParams { alpha: 0.0, ..Default::default() }.validate().is_err());
        assert!(OrdEvalParams { bootstrap_replicates: 20, ..Default::default() }.validate().is_err());
        assert!(OrdEvalParams { context_size: Some(0), ..Default::default() }.validate().is_err());
        assert_eq!(OrdEvalParams::default().resolved_context_size(10), 9);
        assert_eq!(OrdEvalParams::default().resolved_context_size(1000), 30);
    }
}
