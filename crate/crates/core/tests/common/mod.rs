#![allow(dead_code)]

use ordeval_core::ordeval::{CellNull, EventCounts, NullBox};
use ordeval_core::{Code, Direction, OrdEvalParams, OrdinalDataset, OrdinalScale, ReinforcementCell, ReinforcementProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform codes on `1..=s`, each attribute cell missing with `missing`.
pub fn random_dataset(seed: u64, n: usize, a: usize, s: Code, missing: f64) -> OrdinalDataset {
    let mut r = rng(seed);
    let scale = OrdinalScale::new(s).unwrap();
    loop {
        let rows: Vec<Vec<Option<Code>>> = (0..n)
            .map(|_| {
                (0..a)
                    .map(|_| (r.random::<f64>() >= missing).then(|| r.random_range(1..=s)))
                    .collect()
            })
            .collect();
        let y: Vec<Code> = (0..n).map(|_| r.random_range(1..=s)).collect();
        if let Ok(ds) = OrdinalDataset::from_rows(
            (0..a).map(|j| format!("a{j}")).collect(),
            vec![scale.clone(); a],
            "y".to_string(),
            scale.clone(),
            rows,
            y,
        ) {
            return ds;
        }
    }
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct OracleCounts {
    /// [direction][value] -> (events, success, anti)
    pub up: Vec<(u64, u64, u64)>,
    pub down: Vec<(u64, u64, u64)>,
    pub up_steps: Vec<(u64, u64, u64)>,
    pub down_steps: Vec<(u64, u64, u64)>,
    pub pairs: u64,
    pub increases: u64,
    pub decreases: u64,
}

/// Every ordered pair (R, S) with S in `context(R)` and the attribute present on both rows.
pub fn oracle_counts(ds: &OrdinalDataset, attr: usize, context: impl Fn(usize) -> Vec<usize>) -> OracleCounts {
    let s = ds.scale(attr).max_code() as usize;
    let mut o = OracleCounts {
        up: vec![(0, 0, 0); s + 1],
        down: vec![(0, 0, 0); s + 1],
        up_steps: vec![(0, 0, 0); s + 1],
        down_steps: vec![(0, 0, 0); s + 1],
        ..Default::default()
    };
    let bump = |cell: &mut (u64, u64, u64), success: bool, anti: bool| {
        cell.0 += 1;
        cell.1 += success as u64;
        cell.2 += anti as u64;
    };
    for r in 0..ds.n_rows() {
        for sdx in context(r) {
            let (Some(ar), Some(as_)) = (ds.value(r, attr), ds.value(sdx, attr)) else {
                continue;
            };
            let (yr, ys) = (ds.response(r), ds.response(sdx));
            o.pairs += 1;
            if ys > yr {
                o.increases += 1;
            }
            if ys < yr {
                o.decreases += 1;
            }
            if as_ > ar {
                bump(&mut o.up[as_ as usize], ys > yr, ys < yr);
                if as_ == ar + 1 {
                    bump(&mut o.up_steps[as_ as usize], ys > yr, ys < yr);
                }
            }
            if as_ < ar {
                bump(&mut o.down[ar as usize], ys < yr, ys > yr);
                if as_ + 1 == ar {
                    bump(&mut o.down_steps[ar as usize], ys < yr, ys > yr);
                }
            }
        }
    }
    o
}

/// A 7-point profile with random counts and null boxes, about half the cells significant.
pub fn random_profile(seed: u64) -> ReinforcementProfile {
    let mut r = rng(seed);
    let mut cells = Vec::new();
    for d in [Direction::Up, Direction::Down] {
        for v in 2..=7u8 {
            let events: u64 = if r.random::<f64>() < 0.15 { r.random_range(0..5) } else { r.random_range(5..400) };
            let success = r.random_range(0..=events);
            let anti = r.random_range(0..=events - success);
            let lo = r.random::<f64>() * 0.6;
            let width = 0.05 + r.random::<f64>() * 0.3;
            let null_box = NullBox {
                q025: lo,
                q25: lo + width * 0.3,
                median: lo + width * 0.5,
                q75: lo + width * 0.7,
                q975: lo + width,
            };
            let null = CellNull {
                null_box: Some(null_box),
                anti_null_box: Some(null_box),
                samples: 200,
            };
            let counts = EventCounts {
                success,
                anti_success: anti,
                events,
            };
            cells.push(ReinforcementCell::from_counts(d, v, counts, null, 5));
        }
    }
    ReinforcementProfile {
        schema_version: ordeval_core::SCHEMA_VERSION,
        attribute: format!("attr<{seed}>"),
        scale: OrdinalScale::likert7(),
        base_rates: ordeval_core::ordeval::BaseRates {
            up: 0.4,
            down: 0.4,
            pairs: 1000,
        },
        cells,
        steps: Vec::new(),
        params: OrdEvalParams::default(),
    }
}
