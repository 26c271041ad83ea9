//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use ordeval_core::kano::Zones;
use ordeval_core::ordeval::{BaseRates, CellNull, EventCounts, NullBox};
use ordeval_core::report::{render_profile, render_ranking, ProfilePlotOptions, RankingPlotOptions};
use ordeval_core::synth::{mixed_perception_spec, one_per_category_spec};
use ordeval_core::{
    classify, compute_reinforcements, evaluate_all, evaluate_attribute, generate_population, ground_truth,
    rank_attributes, relieff_scores, rng, BaseCategory, Code, Direction, KanoRules, OrdEvalParams, OrdinalDataset,
    OrdinalScale, ReinforcementCell, ReinforcementProfile, ReliefFParams,
};
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_dataset(seed: u64, n: usize, a: usize, s: Code) -> OrdinalDataset {
    let mut r = rng::stream(seed, 0);
    let scale = OrdinalScale::new(s).unwrap();
    loop {
        let rows: Vec<Vec<Option<Code>>> = (0..n)
            .map(|_| (0..a).map(|_| Some(r.random_range(1..=s))).collect())
            .collect();
        let y: Vec<Code> = (0..n).map(|_| r.random_range(1..=s)).collect();
        let names = (0..a).map(|j| format!("a{j}")).collect();
        if let Ok(ds) = OrdinalDataset::from_rows(names, vec![scale.clone(); a], "y", scale.clone(), rows, y) {
            return ds;
        }
    }
}

/// Population with an extra attribute drawn independently of everything else.
fn with_independent(n: usize, seed: u64) -> (OrdinalDataset, usize) {
    let ds = generate_population(&one_per_category_spec(n, 0.5, seed)).unwrap();
    let mut r = rng::stream(seed ^ 0x5eed, 1);
    let column: Vec<Option<Code>> = (0..n).map(|_| Some(r.random_range(1..=7))).collect();
    let idx = ds.n_attributes();
    (ds.with_appended_attribute("noise", OrdinalScale::likert7(), &column).unwrap(), idx)
}

/// Per-value (events, success, anti) from every ordered pair of distinct rows.
fn brute_force(ds: &OrdinalDataset, attr: usize) -> (Vec<[u64; 3]>, Vec<[u64; 3]>, [u64; 3]) {
    let s = ds.scale(attr).max_code() as usize;
    let mut up = vec![[0u64; 3]; s + 1];
    let mut down = vec![[0u64; 3]; s + 1];
    let mut base = [0u64; 3];
    for r in 0..ds.n_rows() {
        for t in 0..ds.n_rows() {
            if r == t {
                continue;
            }
            let (Some(ar), Some(at)) = (ds.value(r, attr), ds.value(t, attr)) else {
                continue;
            };
            let (yr, yt) = (ds.response(r), ds.response(t));
            base[0] += 1;
            base[1] += (yt > yr) as u64;
            base[2] += (yt < yr) as u64;
            if at > ar {
                let c = &mut up[at as usize];
                c[0] += 1;
                c[1] += (yt > yr) as u64;
                c[2] += (yt < yr) as u64;
            } else if at < ar {
                let c = &mut down[ar as usize];
                c[0] += 1;
                c[1] += (yt < yr) as u64;
                c[2] += (yt > yr) as u64;
            }
        }
    }
    (up, down, base)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut exact = 0;
    let mut first_failure = None;
    for seed in 0..25u64 {
        let n = 5 + (seed as usize * 11) % 26;
        let a = 1 + (seed as usize) % 4;
        let s = 2 + (seed % 6) as Code;
        let ds = random_dataset(1000 + seed, n, a, s);
        let params = OrdEvalParams {
            context_size: Some(n - 1),
            bootstrap_replicates: 0,
            ..Default::default()
        };
        let mut ok = true;
        for attr in 0..a {
            let got = compute_reinforcements(&ds, attr, &params);
            let (up, down, base) = brute_force(&ds, attr);
            ok &= [got.pairs, got.increases, got.decreases] == base;
            for v in 2..=s {
                let u = got.cell(Direction::Up, v);
                let d = got.cell(Direction::Down, v);
                ok &= [u.events, u.success, u.anti_success] == up[v as usize];
                ok &= [d.events, d.success, d.anti_success] == down[v as usize];
            }
        }
        if ok {
            exact += 1;
        } else if first_failure.is_none() {
            first_failure = Some(seed);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        exact == 25 && secs < 5.0,
        format!("exhaustive oracle: {exact}/25 datasets exact, {secs:.2} s (limit 5 s){}",
            first_failure.map(|s| format!(", first mismatch seed {s}")).unwrap_or_default()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let names = ["must_be", "one_dimensional", "attractive", "indifferent", "reverse"];
    let mut hits = [0usize; 5];
    for seed in 0..20u64 {
        let spec = one_per_category_spec(500, 0.5, seed);
        let truth = ground_truth(&spec).unwrap();
        let ds = generate_population(&spec).unwrap();
        let params = OrdEvalParams {
            seed,
            ..Default::default()
        };
        for p in evaluate_all(&ds, &params).unwrap() {
            let got = classify(&p, &KanoRules::default());
            let i = names.iter().position(|n| *n == p.attribute).unwrap();
            if got.category.same_as(&truth.get(&p.attribute).unwrap().dominant) {
                hits[i] += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let worst = *hits.iter().min().unwrap();
    let per: Vec<String> = names.iter().zip(hits).map(|(n, h)| format!("{n} {h}/20")).collect();
    outcome(
        worst * 10 >= 20 * 9 && secs < 60.0,
        format!("Kano recovery >= 90% per category: {}, {secs:.1} s (limit 60 s)", per.join(", ")),
    )
}

fn criterion_3() -> Outcome {
    let zones = Zones::new(7, None, None);
    let mut hits = 0;
    for seed in 0..20u64 {
        let ds = generate_population(&mixed_perception_spec(1000, 0.5, seed)).unwrap();
        let params = OrdEvalParams {
            seed,
            ..Default::default()
        };
        let p = evaluate_attribute(&ds, 0, &params).unwrap();
        let c = classify(&p, &KanoRules::default());
        let low = p.cells.iter().any(|x| x.significant && zones.low.contains(&x.value));
        let upper = p
            .cells
            .iter()
            .any(|x| x.significant && (zones.mid.contains(&x.value) || zones.high.contains(&x.value)));
        let parts = c.category.components();
        let mixed = c.category.is_mixed()
            && parts.contains(&BaseCategory::MustBe)
            && parts.contains(&BaseCategory::OneDimensional);
        hits += (mixed && low && upper) as usize;
    }
    outcome(
        hits * 10 >= 20 * 8,
        format!("mixed perception: {hits}/20 runs MIXED(MUST_BE, ONE_DIMENSIONAL) with significant low and mid/high cells (need 16)"),
    )
}

fn criterion_4() -> Outcome {
    let mut fractions = Vec::new();
    for seed in 0..50u64 {
        let (ds, idx) = with_independent(1000, seed);
        let params = OrdEvalParams {
            seed,
            bootstrap_replicates: 200,
            ..Default::default()
        };
        let p = evaluate_attribute(&ds, idx, &params).unwrap();
        let defined: Vec<&ReinforcementCell> = p.cells.iter().filter(|c| c.probability.is_some()).collect();
        let flagged = defined.iter().filter(|c| c.significant).count();
        fractions.push(flagged as f64 / defined.len() as f64);
    }
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    outcome(
        mean <= 0.075,
        format!("false positives: mean {:.2}% of defined cells significant over 50 seeds (limit 7.5%)", 100.0 * mean),
    )
}

fn criterion_5() -> Outcome {
    let mut copy_first = 0;
    let mut noise_near_zero = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let (ds, noise) = with_independent(500, 100 + seed);
        let copy: Vec<Option<Code>> = ds.responses().iter().map(|&y| Some(y)).collect();
        let ds = ds.with_appended_attribute("copy", OrdinalScale::likert7(), &copy).unwrap();
        let result = relieff_scores(&ds, &ReliefFParams { seed, ..Default::default() }).unwrap();
        copy_first += (result.ranking()[0].attribute == "copy") as usize;
        let ns = result.scores[noise].score;
        worst = worst.max(ns.abs());
        noise_near_zero += (ns.abs() <= 0.05) as usize;
    }
    outcome(
        copy_first == 20 && noise_near_zero >= 19,
        format!("ReliefF: copy attribute ranked 1st in {copy_first}/20; noise |score| <= 0.05 in {noise_near_zero}/20 (max {worst:.4})"),
    )
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    let mut outside = 0;
    for seed in 0..20u64 {
        let (ds, idx) = with_independent(2000, 500 + seed);
        let params = OrdEvalParams {
            bootstrap_replicates: 0,
            seed,
            ..Default::default()
        };
        let p = evaluate_attribute(&ds, idx, &params).unwrap();
        for c in &p.cells {
            if let Some(prob) = c.probability {
                let gap = (prob - p.base_rates.for_direction(c.direction)).abs();
                worst = worst.max(gap);
                cells += 1;
                outside += (gap > 0.05) as usize;
            }
        }
    }
    outcome(
        outside == 0,
        format!("base-rate convergence: {outside} of {cells} defined cells beyond +/-0.05 (max gap {worst:.4})"),
    )
}

fn cli_run(csv: &Path, out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_ordeval"))
        .env_remove("ORDEVAL_SEED")
        .args(["analyze", "--input", csv.to_str().unwrap(), "--response", "satisfaction"])
        .args(["--scale", "7", "--seed", "17", "--out", out.to_str().unwrap()])
        .stdout(std::process::Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();

    let mut permutation_ok = true;
    for seed in 0..5u64 {
        let ds = random_dataset(2000 + seed, 150, 4, 7);
        let mut order: Vec<usize> = (0..ds.n_rows()).collect();
        order.shuffle(&mut rng::stream(seed, 9));
        let shuffled = ds.permute_rows(&order).unwrap();
        let rp = ReliefFParams::default();
        permutation_ok &= relieff_scores(&ds, &rp).unwrap().scores == relieff_scores(&shuffled, &rp).unwrap().scores;
        let op = OrdEvalParams {
            bootstrap_replicates: 0,
            ..Default::default()
        };
        for attr in 0..4 {
            permutation_ok &= compute_reinforcements(&ds, attr, &op) == compute_reinforcements(&shuffled, attr, &op);
        }
    }
    notes.push(format!("row permutation {}", if permutation_ok { "exact" } else { "DIFFERS" }));

    let ds = generate_population(&one_per_category_spec(300, 0.5, 3)).unwrap();
    let par = OrdEvalParams {
        seed: 5,
        ..Default::default()
    };
    let ser = OrdEvalParams {
        parallel: false,
        ..par.clone()
    };
    let a = evaluate_all(&ds, &par).unwrap();
    let mut b = evaluate_all(&ds, &ser).unwrap();
    for p in &mut b {
        p.params.parallel = true;
    }
    let rpar = relieff_scores(&ds, &ReliefFParams::default()).unwrap();
    let rser = relieff_scores(&ds, &ReliefFParams { parallel: false, ..Default::default() }).unwrap();
    let parallel_ok = a == b && rpar.scores == rser.scores;
    notes.push(format!("parallel vs serial {}", if parallel_ok { "equal" } else { "DIFFER" }));

    let tmp = tempfile::TempDir::new().unwrap();
    let csv = tmp.path().join("data.csv");
    fs::write(&csv, ordeval_core::io::to_csv_string(&ds).unwrap()).unwrap();
    let (x, y) = (tmp.path().join("x"), tmp.path().join("y"));
    let mut cli_ok = cli_run(&csv, &x) && cli_run(&csv, &y);
    let mut files = 0;
    if cli_ok {
        let mut names: Vec<_> = fs::read_dir(&x).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        files = names.len();
        for name in names {
            cli_ok &= fs::read(x.join(&name)).ok() == fs::read(y.join(&name)).ok();
        }
    }
    notes.push(format!(
        "two CLI runs {} ({files} artifacts)",
        if cli_ok { "byte-identical" } else { "DIFFER" }
    ));
    outcome(permutation_ok && parallel_ok && cli_ok, format!("determinism: {}", notes.join(", ")))
}

fn random_profile(seed: u64) -> ReinforcementProfile {
    let mut r = rng::stream(seed, 77);
    let mut cells = Vec::new();
    for d in [Direction::Up, Direction::Down] {
        for v in 2..=7u8 {
            let events: u64 = if r.random::<f64>() < 0.15 { r.random_range(0..5) } else { r.random_range(5..400) };
            let success = r.random_range(0..=events);
            let anti = r.random_range(0..=events - success);
            let lo = r.random::<f64>() * 0.6;
            let w = 0.05 + r.random::<f64>() * 0.3;
            let b = NullBox {
                q025: lo,
                q25: lo + 0.3 * w,
                median: lo + 0.5 * w,
                q75: lo + 0.7 * w,
                q975: lo + w,
            };
            let null = CellNull {
                null_box: Some(b),
                anti_null_box: Some(b),
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
        schema_version: 1,
        attribute: format!("random {seed}"),
        scale: OrdinalScale::likert7(),
        base_rates: BaseRates {
            up: 0.4,
            down: 0.4,
            pairs: 1000,
        },
        cells,
        steps: Vec::new(),
        params: OrdEvalParams::default(),
    }
}

fn has_class(n: roxmltree::Node, class: &str) -> bool {
    n.attribute("class").is_some_and(|c| c.split_whitespace().any(|x| x == class))
}

fn num(n: roxmltree::Node, attr: &str) -> f64 {
    n.attribute(attr).unwrap().parse().unwrap()
}

fn criterion_8() -> Outcome {
    let options = ProfilePlotOptions::default();
    let mut documents = 0;
    let mut malformed = 0;
    let mut checked = 0;
    let mut geometry_bad = 0;
    let mut sig_checked = 0;
    let mut sig_bad = 0;
    for seed in 0..10u64 {
        let profile = random_profile(seed);
        let svg = render_profile(&profile, &options);
        documents += 1;
        let Ok(doc) = roxmltree::Document::parse(&svg) else {
            malformed += 1;
            continue;
        };
        for cell in &profile.cells {
            let node = doc.descendants().find(|n| {
                has_class(*n, "cell")
                    && n.attribute("data-direction") == Some(cell.direction.as_str())
                    && n.attribute("data-value") == Some(&cell.value.to_string())
            });
            let Some(node) = node else {
                geometry_bad += 1;
                continue;
            };
            checked += 1;
            let bar = node.descendants().find(|n| has_class(*n, "bar"));
            let Some(p) = cell.probability else {
                geometry_bad += bar.is_some() as usize;
                continue;
            };
            let Some(bar) = bar else {
                geometry_bad += 1;
                continue;
            };
            let ratio = num(bar, "width") / options.axis_length;
            geometry_bad += ((ratio - p).abs() > 1.0 / options.axis_length) as usize;
            if cell.reinforces() {
                sig_checked += 1;
                let wh = node.descendants().find(|n| has_class(*n, "whisker")).unwrap();
                let (x1, x2) = (num(wh, "x1"), num(wh, "x2"));
                let beyond = match cell.direction {
                    Direction::Up => num(bar, "x") + num(bar, "width") > x1.max(x2),
                    Direction::Down => num(bar, "x") < x1.min(x2),
                };
                sig_bad += (!beyond || !has_class(node, "significant")) as usize;
            }
        }
    }
    let scores = rank_attributes(&[("a".into(), 0.12), ("b".into(), -0.03), ("c & d".into(), 0.0)]);
    documents += 1;
    malformed += roxmltree::Document::parse(&render_ranking(&scores, &RankingPlotOptions::default())).is_err() as usize;
    outcome(
        malformed == 0 && geometry_bad == 0 && sig_bad == 0 && sig_checked > 0,
        format!(
            "rendering: {}/{documents} SVGs well-formed, geometry off in {geometry_bad}/{checked} cells, {sig_bad}/{sig_checked} significant tips inside whiskers",
            documents - malformed
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let o = run();
        failed += !o.pass as usize;
        println!("criterion {id}: {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
