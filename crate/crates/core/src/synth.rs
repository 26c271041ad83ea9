//! Synthetic respondent populations with known Kano behavior.
//!
//! Each attribute is drawn uniformly over its scale and contributes an
//! idealized curve to the response:
//!
//! * must-be: `-(mid - 1)` below the threshold, 0 at or above it;
//! * attractive: 0 below the threshold, `+(s - mid)` at or above it;
//! * one-dimensional: `slope * (v - mid)`; reverse: `-slope * (v - mid)`;
//! * indifferent: 0.
//!
//! The response is `mid + effect_scale * Σ (w / Σw) * curve + N(0, σ²)`,
//! rounded and clamped to the scale. Subgroups may override the shape of any
//! attribute for a share of the respondents.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{Code, OrdinalDataset, OrdinalScale};
use crate::error::{Error, Result};
use crate::io::SCHEMA_VERSION;
use crate::kano::{BaseCategory, KanoCategory};
use crate::rng;

/// Subgroups lighter than this are reported as minorities and do not shape
/// the dominant category.
pub const MINORITY_WEIGHT: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KanoShape {
    pub category: BaseCategory,
    /// Step position for must-be (default 2) and attractive (default `s`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Code>,
    /// Slope for the linear categories.
    #[serde(default = "unit")]
    pub slope: f64,
    #[serde(default = "unit")]
    pub weight: f64,
}

fn unit() -> f64 {
    1.0
}

impl KanoShape {
    pub fn new(category: BaseCategory) -> Self {
        KanoShape {
            category,
            threshold: None,
            slope: 1.0,
            weight: 1.0,
        }
    }

    pub fn with_threshold(mut self, threshold: Code) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_slope(mut self, slope: f64) -> Self {
        self.slope = slope;
        self
    }

    pub fn resolved_threshold(&self, scale: &OrdinalScale) -> Code {
        self.threshold.unwrap_or(match self.category {
            BaseCategory::Attractive => scale.max_code(),
            _ => 2.min(scale.max_code()),
        })
    }
}

/// Idealized contribution of `value` under `shape`, centered on the neutral midpoint.
pub fn ideal_contribution(shape: &KanoShape, value: Code, scale: &OrdinalScale) -> f64 {
    let mid = scale.midpoint();
    let v = value as f64;
    match shape.category {
        BaseCategory::MustBe => {
            if value < shape.resolved_threshold(scale) {
                -(mid - 1.0)
            } else {
                0.0
            }
        }
        BaseCategory::Attractive => {
            if value >= shape.resolved_threshold(scale) {
                scale.max_code() as f64 - mid
            } else {
                0.0
            }
        }
        BaseCategory::OneDimensional => shape.slope * (v - mid),
        BaseCategory::Reverse => -shape.slope * (v - mid),
        BaseCategory::IndifferentInconclusive => 0.0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub shape: KanoShape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub weight: f64,
    /// Shape overrides keyed by attribute name.
    #[serde(default)]
    pub overrides: BTreeMap<String, KanoShape>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticPopulationSpec {
    pub n: usize,
    #[serde(default)]
    pub scale: OrdinalScale,
    pub attributes: Vec<AttributeSpec>,
    /// Empty means a single population-wide group.
    #[serde(default)]
    pub subgroups: Vec<SubgroupSpec>,
    pub noise_sigma: f64,
    #[serde(default = "unit")]
    pub effect_scale: f64,
    /// Probability that any attribute cell is left missing.
    #[serde(default)]
    pub missing_rate: f64,
    #[serde(default = "default_response")]
    pub response_name: String,
    #[serde(default)]
    pub seed: u64,
}

fn default_response() -> String {
    "satisfaction".into()
}

impl SyntheticPopulationSpec {
    pub fn new(n: usize, attributes: Vec<AttributeSpec>, noise_sigma: f64, seed: u64) -> Self {
        SyntheticPopulationSpec {
            n,
            scale: OrdinalScale::likert7(),
            attributes,
            subgroups: Vec::new(),
            noise_sigma,
            effect_scale: 1.0,
            missing_rate: 0.0,
            response_name: default_response(),
            seed,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SyntheticPopulationSpec = serde_json::from_str(text)
            .map_err(|e| Error::spec(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::spec("n", "at least one respondent is required"));
        }
        if self.attributes.is_empty() {
            return Err(Error::spec("attributes", "at least one attribute is required"));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::spec("noise_sigma", "must be a finite value >= 0"));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::spec("missing_rate", "must lie in [0, 1)"));
        }
        if !self.effect_scale.is_finite() {
            return Err(Error::spec("effect_scale", "must be finite"));
        }
        let check_shape = |path: String, shape: &KanoShape| -> Result<()> {
            if let Some(t) = shape.threshold {
                if !self.scale.contains(t) {
                    return Err(Error::spec(format!("{path}.threshold"), format!("{t} is outside the scale")));
                }
            }
            if !(shape.weight >= 0.0 && shape.weight.is_finite()) {
                return Err(Error::spec(format!("{path}.weight"), "must be a finite value >= 0"));
            }
            if !shape.slope.is_finite() {
                return Err(Error::spec(format!("{path}.slope"), "must be finite"));
            }
            Ok(())
        };
        for (i, attr) in self.attributes.iter().enumerate() {
            if attr.name == self.response_name || self.attributes[..i].iter().any(|a| a.name == attr.name) {
                return Err(Error::spec(format!("attributes[{i}].name"), format!("duplicate name `{}`", attr.name)));
            }
            check_shape(format!("attributes[{i}].shape"), &attr.shape)?;
        }
        if self.total_weight() <= 0.0 {
            return Err(Error::spec("attributes", "attribute weights sum to zero"));
        }
        for (g, group) in self.subgroups.iter().enumerate() {
            if !(group.weight > 0.0 && group.weight <= 1.0) {
                return Err(Error::spec(format!("subgroups[{g}].weight"), "must lie in (0, 1]"));
            }
            for (name, shape) in &group.overrides {
                if !self.attributes.iter().any(|a| &a.name == name) {
                    return Err(Error::spec(
                        format!("subgroups[{g}].overrides.{name}"),
                        "no attribute with that name",
                    ));
                }
                check_shape(format!("subgroups[{g}].overrides.{name}"), shape)?;
            }
        }
        if !self.subgroups.is_empty() {
            let total: f64 = self.subgroups.iter().map(|g| g.weight).sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::spec("subgroups", format!("weights sum to {total}, expected 1")));
            }
        }
        Ok(())
    }

    fn total_weight(&self) -> f64 {
        self.attributes.iter().map(|a| a.shape.weight).sum()
    }

    /// Shape of attribute `attr` for subgroup `group` (`None`: no subgroups).
    fn shape_for(&self, group: Option<usize>, attr: usize) -> &KanoShape {
        let base = &self.attributes[attr];
        group
            .and_then(|g| self.subgroups[g].overrides.get(&base.name))
            .unwrap_or(&base.shape)
    }

    /// Subgroup weights, a single full-weight group when none are declared.
    fn groups(&self) -> Vec<(Option<usize>, f64)> {
        if self.subgroups.is_empty() {
            vec![(None, 1.0)]
        } else {
            self.subgroups.iter().enumerate().map(|(g, s)| (Some(g), s.weight)).collect()
        }
    }
}

/// Draws the population. Respondent `i` uses its own stream derived from the
/// seed, so the output is a pure function of the population description.
pub fn generate_population(spec: &SyntheticPopulationSpec) -> Result<OrdinalDataset> {
    spec.validate()?;
    let scale = &spec.scale;
    let mid = scale.midpoint();
    let total = spec.total_weight();
    let a = spec.attributes.len();
    let cumulative: Vec<f64> = spec
        .subgroups
        .iter()
        .scan(0.0, |acc, g| {
            *acc += g.weight;
            Some(*acc)
        })
        .collect();
    let noise = Normal::new(0.0, spec.noise_sigma.max(0.0))
        .map_err(|e| Error::spec("noise_sigma", e.to_string()))?;

    let mut rows = Vec::with_capacity(spec.n);
    let mut response = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let mut rng = rng::stream(spec.seed, i as u64);
        let group = if spec.subgroups.is_empty() {
            None
        } else {
            let u: f64 = rng.random();
            Some(cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1))
        };
        let codes: Vec<Code> = (0..a).map(|_| rng.random_range(1..=scale.max_code())).collect();
        let mut latent = mid;
        for (attr, &code) in codes.iter().enumerate() {
            let shape = spec.shape_for(group, attr);
            latent += spec.effect_scale * shape.weight / total * ideal_contribution(shape, code, scale);
        }
        if spec.noise_sigma > 0.0 {
            latent += noise.sample(&mut rng);
        }
        let y = latent.round().clamp(1.0, scale.max_code() as f64) as Code;
        let row = codes
            .into_iter()
            .map(|c| {
                if spec.missing_rate > 0.0 && rng.random::<f64>() < spec.missing_rate {
                    None
                } else {
                    Some(c)
                }
            })
            .collect();
        rows.push(row);
        response.push(y);
    }
    OrdinalDataset::from_rows(
        spec.attributes.iter().map(|a| a.name.clone()).collect(),
        vec![scale.clone(); a],
        spec.response_name.clone(),
        scale.clone(),
        rows,
        response,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupTruth {
    pub weight: f64,
    pub category: BaseCategory,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeTruth {
    pub attribute: String,
    #[serde(flatten)]
    pub dominant: KanoCategory,
    pub subgroups: Vec<SubgroupTruth>,
    /// Categories held only by subgroups lighter than [`MINORITY_WEIGHT`].
    pub minority: Vec<BaseCategory>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub schema_version: u32,
    pub attributes: Vec<AttributeTruth>,
}

impl GroundTruth {
    pub fn get(&self, attribute: &str) -> Option<&AttributeTruth> {
        self.attributes.iter().find(|a| a.attribute == attribute)
    }
}

fn effective_category(shape: &KanoShape) -> BaseCategory {
    if shape.weight == 0.0 || (shape.slope == 0.0 && matches!(shape.category, BaseCategory::OneDimensional | BaseCategory::Reverse)) {
        BaseCategory::IndifferentInconclusive
    } else {
        shape.category
    }
}

/// Generating category of every attribute. The dominant category is the
/// subgroup category when all subgroups of weight >= [`MINORITY_WEIGHT`]
/// agree, otherwise a mix ordered by total weight.
pub fn ground_truth(spec: &SyntheticPopulationSpec) -> Result<GroundTruth> {
    spec.validate()?;
    let attributes = (0..spec.attributes.len())
        .map(|attr| {
            let subgroups: Vec<SubgroupTruth> = spec
                .groups()
                .into_iter()
                .map(|(g, weight)| SubgroupTruth {
                    weight,
                    category: effective_category(spec.shape_for(g, attr)),
                })
                .collect();
            let mut totals: Vec<(BaseCategory, f64)> = Vec::new();
            for s in &subgroups {
                match totals.iter_mut().find(|(c, _)| *c == s.category) {
                    Some((_, w)) => *w += s.weight,
                    None => totals.push((s.category, s.weight)),
                }
            }
            totals.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let (major, minor): (Vec<_>, Vec<_>) = totals.into_iter().partition(|(_, w)| *w >= MINORITY_WEIGHT);
            let dominant = KanoCategory::mixed(major.into_iter().map(|(c, _)| c).collect())
                .unwrap_or(KanoCategory::INDIFFERENT);
            AttributeTruth {
                attribute: spec.attributes[attr].name.clone(),
                dominant,
                subgroups,
                minority: minor.into_iter().map(|(c, _)| c).collect(),
            }
        })
        .collect();
    Ok(GroundTruth {
        schema_version: SCHEMA_VERSION,
        attributes,
    })
}

/// One attribute per base category (`must_be`, `one_dimensional`,
/// `attractive`, `indifferent`, `reverse`), equal weights.
pub fn one_per_category_spec(n: usize, noise_sigma: f64, seed: u64) -> SyntheticPopulationSpec {
    let attributes = [
        ("must_be", BaseCategory::MustBe),
        ("one_dimensional", BaseCategory::OneDimensional),
        ("attractive", BaseCategory::Attractive),
        ("indifferent", BaseCategory::IndifferentInconclusive),
        ("reverse", BaseCategory::Reverse),
    ]
    .into_iter()
    .map(|(name, cat)| AttributeSpec {
        name: name.into(),
        shape: KanoShape::new(cat),
    })
    .collect();
    let mut spec = SyntheticPopulationSpec::new(n, attributes, noise_sigma, seed);
    spec.effect_scale = 2.0;
    spec
}

/// Population whose `focus` attribute is must-be for half the respondents and
/// one-dimensional for the rest, alongside a one-dimensional and an
/// indifferent attribute.
pub fn mixed_perception_spec(n: usize, noise_sigma: f64, seed: u64) -> SyntheticPopulationSpec {
    let attributes = vec![
        AttributeSpec {
            name: "focus".into(),
            shape: KanoShape::new(BaseCategory::OneDimensional).with_weight(3.0),
        },
        AttributeSpec {
            name: "linear".into(),
            shape: KanoShape::new(BaseCategory::OneDimensional),
        },
        AttributeSpec {
            name: "flat".into(),
            shape: KanoShape::new(BaseCategory::IndifferentInconclusive),
        },
    ];
    let mut spec = SyntheticPopulationSpec::new(n, attributes, noise_sigma, seed);
    spec.effect_scale = 2.0;
    spec.subgroups = vec![
        SubgroupSpec {
            weight: 0.5,
            overrides: Default::default(),
        },
        SubgroupSpec {
            weight: 0.5,
            overrides: [(
                "focus".to_string(),
                KanoShape::new(BaseCategory::MustBe).with_threshold(2).with_weight(3.0),
            )]
            .into(),
        },
    ];
    spec
}
