//! Ordinal data model, class-conditional statistics and the distance primitive
//! shared by ReliefF and the reinforcement engine.
//!
//! Codes are 1-based (`1..=max_code`). A missing attribute value is `None`;
//! the response never contains missing values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single ordinal code, `1..=max_code` of its scale.
pub type Code = u8;

/// Ordered integer scale `1..=max_code`, optionally with a label per level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScaleRepr", into = "ScaleRepr")]
pub struct OrdinalScale {
    max_code: Code,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct ScaleRepr {
    #[serde(default = "one")]
    min_code: Code,
    max_code: Code,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn one() -> Code {
    1
}

impl TryFrom<ScaleRepr> for OrdinalScale {
    type Error = Error;

    fn try_from(repr: ScaleRepr) -> Result<Self> {
        if repr.min_code != 1 {
            return Err(Error::InvalidScale(format!(
                "min_code must be 1, got {}",
                repr.min_code
            )));
        }
        let scale = OrdinalScale::new(repr.max_code)?;
        match repr.labels {
            Some(labels) => scale.with_labels(labels),
            None => Ok(scale),
        }
    }
}

impl From<OrdinalScale> for ScaleRepr {
    fn from(scale: OrdinalScale) -> Self {
        ScaleRepr {
            min_code: 1,
            max_code: scale.max_code,
            labels: scale.labels,
        }
    }
}

impl OrdinalScale {
    pub fn new(max_code: Code) -> Result<Self> {
        if max_code < 2 {
            return Err(Error::InvalidScale(format!(
                "an ordinal scale needs at least 2 levels, got max_code = {max_code}"
            )));
        }
        Ok(OrdinalScale {
            max_code,
            labels: None,
        })
    }

    /// The 7-point Likert scale, 1 (strongly disagree) to 7 (strongly agree).
    pub fn likert7() -> Self {
        OrdinalScale {
            max_code: 7,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.levels() {
            return Err(Error::InvalidScale(format!(
                "{} labels given for a scale with {} levels",
                labels.len(),
                self.levels()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn min_code(&self) -> Code {
        1
    }

    pub fn max_code(&self) -> Code {
        self.max_code
    }

    pub fn levels(&self) -> usize {
        self.max_code as usize
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn contains(&self, code: Code) -> bool {
        (1..=self.max_code).contains(&code)
    }

    /// Neutral point `(1 + s) / 2`; 4 on the 7-point scale.
    pub fn midpoint(&self) -> f64 {
        (1.0 + self.max_code as f64) / 2.0
    }

    /// Codes `1..=s`.
    pub fn codes(&self) -> impl Iterator<Item = Code> + Clone {
        1..=self.max_code
    }
}

impl Default for OrdinalScale {
    fn default() -> Self {
        Self::likert7()
    }
}

/// Respondents × ordinal attributes plus one ordinal response.
///
/// Immutable after construction; every constructor validates the invariants
/// (codes within scale, response complete, `n >= 2`, at least two distinct
/// response values).
#[derive(Clone, Debug, PartialEq)]
pub struct OrdinalDataset {
    attribute_names: Vec<String>,
    attribute_scales: Vec<OrdinalScale>,
    response_name: String,
    response_scale: OrdinalScale,
    /// Row-major `n × a`.
    cells: Vec<Option<Code>>,
    response: Vec<Code>,
}

impl OrdinalDataset {
    /// Builds a dataset from row vectors. `rows[i][j]` is attribute `j` of respondent `i`.
    pub fn from_rows(
        attribute_names: Vec<String>,
        attribute_scales: Vec<OrdinalScale>,
        response_name: impl Into<String>,
        response_scale: OrdinalScale,
        rows: Vec<Vec<Option<Code>>>,
        response: Vec<Code>,
    ) -> Result<Self> {
        let a = attribute_names.len();
        if rows.iter().any(|row| row.len() != a) {
            return Err(Error::InvalidDataset(format!(
                "every row must have {a} attribute cells"
            )));
        }
        let cells = rows.into_iter().flatten().collect();
        Self::from_cells(
            attribute_names,
            attribute_scales,
            response_name,
            response_scale,
            cells,
            response,
        )
    }

    /// Builds a dataset from column vectors, one per attribute.
    pub fn from_columns(
        attribute_names: Vec<String>,
        attribute_scales: Vec<OrdinalScale>,
        response_name: impl Into<String>,
        response_scale: OrdinalScale,
        columns: Vec<Vec<Option<Code>>>,
        response: Vec<Code>,
    ) -> Result<Self> {
        let n = response.len();
        if columns.len() != attribute_names.len() || columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidDataset(format!(
                "expected {} columns of length {n}",
                attribute_names.len()
            )));
        }
        let a = columns.len();
        let mut cells = vec![None; n * a];
        for (j, column) in columns.iter().enumerate() {
            for (i, &v) in column.iter().enumerate() {
                cells[i * a + j] = v;
            }
        }
        Self::from_cells(
            attribute_names,
            attribute_scales,
            response_name,
            response_scale,
            cells,
            response,
        )
    }

    fn from_cells(
        attribute_names: Vec<String>,
        attribute_scales: Vec<OrdinalScale>,
        response_name: impl Into<String>,
        response_scale: OrdinalScale,
        cells: Vec<Option<Code>>,
        response: Vec<Code>,
    ) -> Result<Self> {
        let ds = OrdinalDataset {
            attribute_names,
            attribute_scales,
            response_name: response_name.into(),
            response_scale,
            cells,
            response,
        };
        ds.validate()?;
        Ok(ds)
    }

    fn validate(&self) -> Result<()> {
        let a = self.attribute_names.len();
        let n = self.response.len();
        if a == 0 {
            return Err(Error::InvalidDataset("no attributes".into()));
        }
        if self.attribute_scales.len() != a {
            return Err(Error::InvalidDataset(format!(
                "{} scales for {a} attributes",
                self.attribute_scales.len()
            )));
        }
        if self.cells.len() != n * a {
            return Err(Error::InvalidDataset("cell matrix shape mismatch".into()));
        }
        if n < 2 {
            return Err(Error::TooFewRows(n));
        }
        let mut names = self.attribute_names.clone();
        names.push(self.response_name.clone());
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidDataset(format!("duplicate column name `{}`", w[0])));
        }
        for (i, &r) in self.response.iter().enumerate() {
            if !self.response_scale.contains(r) {
                return Err(Error::Parse {
                    row: i + 1,
                    column: self.response_name.clone(),
                    message: format!(
                        "code {r} outside scale 1..{}",
                        self.response_scale.max_code()
                    ),
                });
            }
        }
        for i in 0..n {
            for j in 0..a {
                if let Some(v) = self.cells[i * a + j] {
                    if !self.attribute_scales[j].contains(v) {
                        return Err(Error::Parse {
                            row: i + 1,
                            column: self.attribute_names[j].clone(),
                            message: format!(
                                "code {v} outside scale 1..{}",
                                self.attribute_scales[j].max_code()
                            ),
                        });
                    }
                }
            }
        }
        let first = self.response[0];
        if self.response.iter().all(|&r| r == first) {
            return Err(Error::InvalidDataset(
                "response must take at least 2 distinct values".into(),
            ));
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.response.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn attribute_name(&self, attr: usize) -> &str {
        &self.attribute_names[attr]
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|n| n == name)
    }

    pub fn attribute_scales(&self) -> &[OrdinalScale] {
        &self.attribute_scales
    }

    pub fn scale(&self, attr: usize) -> &OrdinalScale {
        &self.attribute_scales[attr]
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn response_scale(&self) -> &OrdinalScale {
        &self.response_scale
    }

    #[inline]
    pub fn value(&self, row: usize, attr: usize) -> Option<Code> {
        self.cells[row * self.attribute_names.len() + attr]
    }

    #[inline]
    pub fn response(&self, row: usize) -> Code {
        self.response[row]
    }

    pub fn responses(&self) -> &[Code] {
        &self.response
    }

    pub fn row(&self, row: usize) -> &[Option<Code>] {
        let a = self.attribute_names.len();
        &self.cells[row * a..(row + 1) * a]
    }

    pub fn column(&self, attr: usize) -> Vec<Option<Code>> {
        (0..self.n_rows()).map(|i| self.value(i, attr)).collect()
    }

    /// Distinct response codes in ascending order.
    pub fn response_classes(&self) -> Vec<Code> {
        let mut classes = self.response.clone();
        classes.sort_unstable();
        classes.dedup();
        classes
    }

    /// Copy with attribute `attr` replaced by `column`; scale unchanged.
    pub fn with_column(&self, attr: usize, column: &[Option<Code>]) -> Result<Self> {
        if column.len() != self.n_rows() {
            return Err(Error::InvalidDataset(format!(
                "replacement column has {} cells, dataset has {} rows",
                column.len(),
                self.n_rows()
            )));
        }
        let mut out = self.clone();
        let a = self.n_attributes();
        for (i, &v) in column.iter().enumerate() {
            out.cells[i * a + attr] = v;
        }
        out.validate()?;
        Ok(out)
    }

    /// Copy with rows reordered so that new row `i` is old row `order[i]`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_rows();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidParams("row order must be a permutation".into()));
        }
        let rows = order.iter().map(|&i| self.row(i).to_vec()).collect();
        let response = order.iter().map(|&i| self.response[i]).collect();
        Self::from_rows(
            self.attribute_names.clone(),
            self.attribute_scales.clone(),
            self.response_name.clone(),
            self.response_scale.clone(),
            rows,
            response,
        )
    }

    /// Copy with an extra attribute column appended.
    pub fn with_appended_attribute(
        &self,
        name: impl Into<String>,
        scale: OrdinalScale,
        column: &[Option<Code>],
    ) -> Result<Self> {
        let mut names = self.attribute_names.clone();
        names.push(name.into());
        let mut scales = self.attribute_scales.clone();
        scales.push(scale);
        let rows = (0..self.n_rows())
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(column.get(i).copied().flatten());
                row
            })
            .collect();
        if column.len() != self.n_rows() {
            return Err(Error::InvalidDataset("appended column length mismatch".into()));
        }
        Self::from_rows(
            names,
            scales,
            self.response_name.clone(),
            self.response_scale.clone(),
            rows,
            self.response.clone(),
        )
    }
}

/// Laplace-smoothed `P(attribute = v | response = c)` for every attribute.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassConditionalTable {
    /// `probs[attr][(c - 1) * s_attr + (v - 1)]`
    probs: Vec<Vec<f64>>,
    levels: Vec<usize>,
    response_levels: usize,
}

impl ClassConditionalTable {
    /// `P(v | c) = (count(v, c) + 1) / (count(·, c) + s)`, counting only
    /// non-missing cells. Response codes that never occur get the uniform `1/s`.
    pub fn new(ds: &OrdinalDataset) -> Self {
        let response_levels = ds.response_scale().levels();
        let levels: Vec<usize> = ds.attribute_scales().iter().map(|s| s.levels()).collect();
        let probs = (0..ds.n_attributes())
            .map(|attr| {
                let s = levels[attr];
                let mut counts = vec![0usize; response_levels * s];
                let mut totals = vec![0usize; response_levels];
                for i in 0..ds.n_rows() {
                    if let Some(v) = ds.value(i, attr) {
                        let c = ds.response(i) as usize - 1;
                        counts[c * s + v as usize - 1] += 1;
                        totals[c] += 1;
                    }
                }
                counts
                    .iter()
                    .enumerate()
                    .map(|(idx, &count)| (count + 1) as f64 / (totals[idx / s] + s) as f64)
                    .collect()
            })
            .collect();
        ClassConditionalTable {
            probs,
            levels,
            response_levels,
        }
    }

    #[inline]
    pub fn prob(&self, attr: usize, class: Code, value: Code) -> f64 {
        let s = self.levels[attr];
        self.probs[attr][(class as usize - 1) * s + value as usize - 1]
    }

    /// The distribution over attribute codes `1..=s` given response `class`.
    pub fn distribution(&self, attr: usize, class: Code) -> &[f64] {
        let s = self.levels[attr];
        let start = (class as usize - 1) * s;
        &self.probs[attr][start..start + s]
    }

    pub fn response_levels(&self) -> usize {
        self.response_levels
    }
}

/// Per-attribute difference between two respondents, in `[0, 1]`.
///
/// Both present: `|v_i - v_j| / (s - 1)`. One missing: `1 - P(v_present | class of the
/// missing row)`. Both missing: `1 - Σ_v P(v | c_i) P(v | c_j)`.
#[inline]
pub fn value_diff(
    ds: &OrdinalDataset,
    table: &ClassConditionalTable,
    attr: usize,
    row_i: usize,
    row_j: usize,
) -> f64 {
    match (ds.value(row_i, attr), ds.value(row_j, attr)) {
        (Some(vi), Some(vj)) => {
            let span = (ds.scale(attr).max_code() - 1) as f64;
            (vi as f64 - vj as f64).abs() / span
        }
        (None, Some(vj)) => 1.0 - table.prob(attr, ds.response(row_i), vj),
        (Some(vi), None) => 1.0 - table.prob(attr, ds.response(row_j), vi),
        (None, None) => {
            let pi = table.distribution(attr, ds.response(row_i));
            let pj = table.distribution(attr, ds.response(row_j));
            // sum in code order with the smaller class first so the result is symmetric
            let (a, b) = if ds.response(row_i) <= ds.response(row_j) {
                (pi, pj)
            } else {
                (pj, pi)
            };
            1.0 - a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
        }
    }
}

/// Sum of [`value_diff`] over all attributes except `exclude`.
pub fn instance_distance(
    ds: &OrdinalDataset,
    table: &ClassConditionalTable,
    row_i: usize,
    row_j: usize,
    exclude: Option<usize>,
) -> f64 {
    (0..ds.n_attributes())
        .filter(|&attr| Some(attr) != exclude)
        .map(|attr| value_diff(ds, table, attr, row_i, row_j))
        .sum()
}
