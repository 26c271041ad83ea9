//! ReliefF attribute relevance with the response as nominal class.
//!
//! For every pivot row the k nearest hits (same response) and, per other
//! response class, the k nearest misses are found under
//! [`instance_distance`]. Attributes that separate the pivot from its misses
//! but not from its hits gain weight. Neighbor groups are tie-inclusive, and
//! all accumulation is order-free, so scores are bit-identical under row
//! permutation and between serial and parallel execution.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{instance_distance, value_diff, ClassConditionalTable, OrdinalDataset};
use crate::error::{Error, Result};
use crate::neighbors::{group_weights, tie_inclusive_nearest, Neighbor};
use crate::rng;
use crate::stats::canonical_sum;

/// Which rows serve as pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotCount {
    All,
    /// `m` distinct rows drawn with the params seed.
    Sample(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliefFParams {
    pub k_neighbors: usize,
    pub pivots: PivotCount,
    pub seed: u64,
    #[serde(default = "yes")]
    pub parallel: bool,
}

fn yes() -> bool {
    true
}

impl Default for ReliefFParams {
    fn default() -> Self {
        ReliefFParams {
            k_neighbors: 10,
            pivots: PivotCount::All,
            seed: 0,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeScore {
    pub attribute: String,
    pub score: f64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliefFMetadata {
    pub params: ReliefFParams,
    pub pivots_used: usize,
    /// Pivots whose class has no other member; they contribute miss updates only.
    pub singleton_class_pivots: usize,
    pub classes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliefFResult {
    /// Declaration order, ranks filled in.
    pub scores: Vec<AttributeScore>,
    pub metadata: ReliefFMetadata,
}

impl ReliefFResult {
    pub fn score_of(&self, attribute: &str) -> Option<f64> {
        self.scores
            .iter()
            .find(|s| s.attribute == attribute)
            .map(|s| s.score)
    }

    /// Scores sorted by rank.
    pub fn ranking(&self) -> Vec<AttributeScore> {
        let mut r = self.scores.clone();
        r.sort_by_key(|s| s.rank);
        r
    }
}

pub fn relieff_scores(ds: &OrdinalDataset, params: &ReliefFParams) -> Result<ReliefFResult> {
    let n = ds.n_rows();
    if params.k_neighbors == 0 {
        return Err(Error::InvalidParams("k_neighbors must be at least 1".into()));
    }
    let pivots: Vec<usize> = match params.pivots {
        PivotCount::All => (0..n).collect(),
        PivotCount::Sample(m) if m == 0 || m > n => {
            return Err(Error::InvalidParams(format!(
                "pivot sample size must be in 1..={n}, got {m}"
            )))
        }
        PivotCount::Sample(m) => {
            let mut rng = rng::stream(params.seed, 0);
            let mut rows = sample(&mut rng, n, m).into_vec();
            rows.sort_unstable();
            rows
        }
    };

    let table = ClassConditionalTable::new(ds);
    let classes = ds.response_classes();
    let mut class_counts = vec![0usize; ds.response_scale().levels() + 1];
    for &r in ds.responses() {
        class_counts[r as usize] += 1;
    }
    let priors: Vec<f64> = class_counts.iter().map(|&c| c as f64 / n as f64).collect();
    let ctx = PivotContext {
        ds,
        table: &table,
        classes: &classes,
        priors: &priors,
        k: params.k_neighbors,
    };

    let updates: Vec<PivotUpdate> = if params.parallel {
        pivots.par_iter().map(|&r| ctx.update(r)).collect()
    } else {
        pivots.iter().map(|&r| ctx.update(r)).collect()
    };

    let m = pivots.len() as f64;
    let raw: Vec<(String, f64)> = (0..ds.n_attributes())
        .map(|attr| {
            let total = canonical_sum(updates.iter().map(|u| u.weights[attr]).collect());
            (ds.attribute_name(attr).to_string(), (total / m).clamp(-1.0, 1.0))
        })
        .collect();
    let mut scores: Vec<AttributeScore> = raw
        .into_iter()
        .map(|(attribute, score)| AttributeScore {
            attribute,
            score,
            rank: 0,
        })
        .collect();
    for (pos, idx) in rank_order(&scores).into_iter().enumerate() {
        scores[idx].rank = pos + 1;
    }

    Ok(ReliefFResult {
        scores,
        metadata: ReliefFMetadata {
            params: params.clone(),
            pivots_used: pivots.len(),
            singleton_class_pivots: updates.iter().filter(|u| u.singleton).count(),
            classes,
        },
    })
}

/// Stable descending sort by score; ties keep declaration order. Returned in rank order.
pub fn rank_attributes(scores: &[(String, f64)]) -> Vec<AttributeScore> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].1.total_cmp(&scores[a].1));
    order
        .into_iter()
        .enumerate()
        .map(|(pos, idx)| AttributeScore {
            attribute: scores[idx].0.clone(),
            score: scores[idx].1,
            rank: pos + 1,
        })
        .collect()
}

fn rank_order(scores: &[AttributeScore]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].score.total_cmp(&scores[a].score));
    order
}

struct PivotUpdate {
    weights: Vec<f64>,
    singleton: bool,
}

struct PivotContext<'a> {
    ds: &'a OrdinalDataset,
    table: &'a ClassConditionalTable,
    classes: &'a [u8],
    priors: &'a [f64],
    k: usize,
}

impl PivotContext<'_> {
    fn update(&self, pivot: usize) -> PivotUpdate {
        let ds = self.ds;
        let a = ds.n_attributes();
        let own = ds.response(pivot);
        let mut weights = vec![0.0; a];
        let mut singleton = false;

        for &class in self.classes {
            let candidates: Vec<Neighbor> = (0..ds.n_rows())
                .filter(|&j| j != pivot && ds.response(j) == class)
                .map(|j| Neighbor {
                    row: j,
                    distance: instance_distance(ds, self.table, pivot, j, None),
                })
                .collect();
            if candidates.is_empty() {
                if class == own {
                    singleton = true;
                }
                continue;
            }
            let group = tie_inclusive_nearest(candidates, self.k);
            let (strict, tie_weight) = group_weights(&group, self.k);
            let k_eff = self.k.min(group.len()) as f64;
            let factor = if class == own {
                -1.0
            } else {
                self.priors[class as usize] / (1.0 - self.priors[own as usize])
            };
            for (attr, w) in weights.iter_mut().enumerate() {
                let diffs = |slice: &[Neighbor]| {
                    canonical_sum(
                        slice
                            .iter()
                            .map(|nb| value_diff(ds, self.table, attr, pivot, nb.row))
                            .collect(),
                    )
                };
                let mean = (diffs(&group[..strict]) + tie_weight * diffs(&group[strict..])) / k_eff;
                *w += factor * mean;
            }
        }
        PivotUpdate { weights, singleton }
    }
}
