use std::fs;
use std::path::Path;

use ordeval_core::kano::KanoRules;
use ordeval_core::relieff::{PivotCount, ReliefFResult};
use ordeval_core::report::{
    render_profile, render_ranking, render_text_report, ProfilePlotOptions, RankingPlotOptions,
};
use ordeval_core::{
    classify_all, evaluate_all, generate_population, ground_truth, io, load_csv, relieff_scores, AttributeScore,
    GroundTruth, IngestConfig, KanoCategory, KanoClassification, OrdEvalParams, OrdinalDataset, OrdinalScale,
    ReinforcementProfile, ReliefFParams, SyntheticPopulationSpec, ValidationReport, SCHEMA_VERSION,
};
use serde::{Deserialize, Serialize};

use crate::args::{
    AnalyzeArgs, ClassifyArgs, EvalArgs, Format, InputArgs, RankArgs, RenderArgs, SimulateArgs, VerifyArgs,
};
use crate::output::{file_stems, to_json, write_file, OutDir};
use crate::CliError;

pub const EXIT_MISMATCH: i32 = 3;

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let bytes = read(path)?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn ingest_config(input: &InputArgs) -> Result<IngestConfig, CliError> {
    let mut cfg = IngestConfig::new(&input.response);
    cfg.missing_tokens = input.missing.clone();
    cfg.ignore_columns = input.ignore.clone();
    for item in &input.scales {
        let (column, max) = match item.split_once('=') {
            Some((c, m)) => (Some(c.trim()), m.trim()),
            None => (None, item.trim()),
        };
        let max: u8 = max
            .parse()
            .map_err(|_| CliError::input(format!("--scale `{item}`: expected [COLUMN=]MAX")))?;
        let scale = OrdinalScale::new(max)?;
        match column {
            Some(c) => {
                cfg.scales.insert(c.to_string(), scale);
            }
            None => cfg.default_scale = Some(scale),
        }
    }
    Ok(cfg)
}

fn load(input: &InputArgs) -> Result<(OrdinalDataset, ValidationReport, IngestConfig, usize), CliError> {
    let cfg = ingest_config(input)?;
    let bytes = read(&input.input)?;
    let (ds, report) = load_csv(bytes.as_slice(), &cfg)?;
    Ok((ds, report, cfg, bytes.len()))
}

fn ordeval_params(eval: &EvalArgs) -> OrdEvalParams {
    OrdEvalParams {
        context_size: eval.context,
        bootstrap_replicates: eval.bootstrap,
        alpha: eval.alpha,
        min_support: eval.min_support,
        seed: eval.seed.seed,
        exclude_evaluated_attribute: !eval.include_evaluated,
        parallel: !eval.serial,
    }
}

fn relieff_params(k: usize, pivots: Option<usize>, seed: u64, parallel: bool) -> ReliefFParams {
    ReliefFParams {
        k_neighbors: k,
        pivots: pivots.map_or(PivotCount::All, PivotCount::Sample),
        seed,
        parallel,
    }
}

#[derive(Serialize, Deserialize)]
pub struct ScoresDoc {
    pub schema_version: u32,
    /// Rank order.
    pub scores: Vec<AttributeScore>,
    pub pivots_used: usize,
    pub params: ReliefFParams,
}

impl ScoresDoc {
    fn new(result: &ReliefFResult) -> Self {
        ScoresDoc {
            schema_version: SCHEMA_VERSION,
            scores: result.ranking(),
            pivots_used: result.metadata.pivots_used,
            params: result.metadata.params.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct ProfilesDoc {
    pub schema_version: u32,
    pub profiles: Vec<ReinforcementProfile>,
}

#[derive(Serialize, Deserialize)]
pub struct ClassificationsDoc {
    pub schema_version: u32,
    pub rules: KanoRules,
    pub classifications: Vec<KanoClassification>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    input: String,
    input_bytes: usize,
    ingest: &'a IngestConfig,
    validation: &'a ValidationReport,
    relieff: &'a ReliefFParams,
    ordeval: &'a OrdEvalParams,
    kano: &'a KanoRules,
    seed: u64,
    formats: Vec<&'static str>,
    artifacts: Vec<String>,
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Svg => "svg",
        Format::Text => "text",
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::internal(e.to_string());
    w.write_record(header).map_err(internal)?;
    for row in rows {
        w.write_record(&row).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn cells_csv(profiles: &[ReinforcementProfile]) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for p in profiles {
        for c in &p.cells {
            let b = c.null_box;
            rows.push(vec![
                p.attribute.clone(),
                c.direction.as_str().to_string(),
                c.value.to_string(),
                opt(c.probability),
                c.success.to_string(),
                c.events.to_string(),
                opt(b.map(|b| b.q025)),
                opt(b.map(|b| b.q25)),
                opt(b.map(|b| b.median)),
                opt(b.map(|b| b.q75)),
                opt(b.map(|b| b.q975)),
                c.significant.to_string(),
                opt(c.anti_probability),
                c.anti_significant.to_string(),
            ]);
        }
    }
    csv_text(
        &[
            "attribute",
            "direction",
            "value",
            "probability",
            "success",
            "events",
            "q025",
            "q25",
            "median",
            "q75",
            "q975",
            "significant",
            "anti_probability",
            "anti_significant",
        ],
        rows,
    )
}

fn scores_csv(scores: &[AttributeScore]) -> Result<String, CliError> {
    let rows = scores
        .iter()
        .map(|s| vec![s.attribute.clone(), s.score.to_string(), s.rank.to_string()])
        .collect();
    csv_text(&["attribute", "score", "rank"], rows)
}

fn classifications_csv(classes: &[KanoClassification]) -> Result<String, CliError> {
    let rows = classes
        .iter()
        .map(|c| vec![c.attribute.clone(), c.category.code(), c.category.phrase(), c.notes.clone()])
        .collect();
    csv_text(&["attribute", "category", "phrase", "notes"], rows)
}

fn write_svgs(
    out: &mut OutDir,
    profiles: &[ReinforcementProfile],
    scores: Option<&[AttributeScore]>,
) -> Result<(), CliError> {
    let names: Vec<String> = profiles.iter().map(|p| p.attribute.clone()).collect();
    let options = ProfilePlotOptions::default();
    for (p, stem) in profiles.iter().zip(file_stems(&names)) {
        out.write(&format!("profile_{stem}.svg"), &render_profile(p, &options))?;
    }
    if let Some(scores) = scores {
        out.write("ranking.svg", &render_ranking(scores, &RankingPlotOptions::default()))?;
    }
    Ok(())
}

pub fn analyze(args: &AnalyzeArgs) -> Result<i32, CliError> {
    let (ds, validation, ingest, input_bytes) = load(&args.input)?;
    let eval = &args.eval;
    let rparams = relieff_params(eval.k, None, eval.seed.seed, !eval.serial);
    let oparams = ordeval_params(eval);
    let rules = KanoRules::default();

    let relief = relieff_scores(&ds, &rparams)?;
    let profiles = evaluate_all(&ds, &oparams)?;
    let classes = classify_all(&profiles, &rules);
    let ranking = relief.ranking();

    let mut formats = args.formats.clone();
    formats.sort();
    formats.dedup();
    let mut out = OutDir::create(&args.out)?;
    for format in &formats {
        match format {
            Format::Json => {
                out.write_json("scores.json", &ScoresDoc::new(&relief))?;
                out.write_json(
                    "profiles.json",
                    &ProfilesDoc {
                        schema_version: SCHEMA_VERSION,
                        profiles: profiles.clone(),
                    },
                )?;
                out.write_json(
                    "classifications.json",
                    &ClassificationsDoc {
                        schema_version: SCHEMA_VERSION,
                        rules: rules.clone(),
                        classifications: classes.clone(),
                    },
                )?;
            }
            Format::Csv => {
                out.write("scores.csv", &scores_csv(&ranking)?)?;
                out.write("cells.csv", &cells_csv(&profiles)?)?;
                out.write("classifications.csv", &classifications_csv(&classes)?)?;
            }
            Format::Svg => write_svgs(&mut out, &profiles, Some(&ranking))?,
            Format::Text => out.write("report.txt", &render_text_report(&profiles, &classes, &ranking)?)?,
        }
    }
    let mut artifacts = out.written();
    artifacts.push("manifest.json".into());
    artifacts.sort();
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: "ordeval",
        version: env!("CARGO_PKG_VERSION"),
        command: "analyze",
        input: args.input.input.display().to_string(),
        input_bytes,
        ingest: &ingest,
        validation: &validation,
        relieff: &rparams,
        ordeval: &oparams,
        kano: &rules,
        seed: eval.seed.seed,
        formats: formats.iter().map(|&f| format_name(f)).collect(),
        artifacts,
    };
    out.write_json("manifest.json", &manifest)?;
    eprintln!(
        "analyzed {} rows, {} attributes -> {}",
        ds.n_rows(),
        ds.n_attributes(),
        args.out.display()
    );
    Ok(0)
}

pub fn rank(args: &RankArgs) -> Result<i32, CliError> {
    let (ds, _, _, _) = load(&args.input)?;
    let params = relieff_params(args.k, args.pivots, args.seed.seed, true);
    let relief = relieff_scores(&ds, &params)?;
    let doc = ScoresDoc::new(&relief);
    emit(args.out.as_deref(), &to_json(&doc)?)?;
    if let Some(svg) = &args.svg {
        write_file(svg, &render_ranking(&doc.scores, &RankingPlotOptions::default()))?;
    }
    Ok(0)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Accepts the `analyze` document or a bare array of profiles.
fn read_profiles(path: &Path) -> Result<Vec<ReinforcementProfile>, CliError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Doc(ProfilesDoc),
        Bare(Vec<ReinforcementProfile>),
    }
    Ok(match read_json::<Either>(path)? {
        Either::Doc(d) => d.profiles,
        Either::Bare(p) => p,
    })
}

pub fn classify(args: &ClassifyArgs) -> Result<i32, CliError> {
    let profiles = read_profiles(&args.profiles)?;
    let rules: KanoRules = match &args.rules {
        Some(path) => read_json(path)?,
        None => KanoRules::default(),
    };
    let classes = classify_all(&profiles, &rules);
    let doc = ClassificationsDoc {
        schema_version: SCHEMA_VERSION,
        rules,
        classifications: classes,
    };
    emit(args.out.as_deref(), &to_json(&doc)?)?;
    Ok(0)
}

pub fn render(args: &RenderArgs) -> Result<i32, CliError> {
    let profiles = read_profiles(&args.profiles)?;
    let scores = match &args.scores {
        Some(path) => Some(read_json::<ScoresDoc>(path)?.scores),
        None => None,
    };
    let mut out = OutDir::create(&args.out)?;
    write_svgs(&mut out, &profiles, scores.as_deref())?;
    Ok(0)
}

fn read_spec(path: &Path) -> Result<SyntheticPopulationSpec, CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
    Ok(SyntheticPopulationSpec::from_json(&text)?)
}

pub fn simulate(args: &SimulateArgs) -> Result<i32, CliError> {
    let mut spec = read_spec(&args.spec)?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let ds = generate_population(&spec)?;
    let truth = ground_truth(&spec)?;
    write_file(&args.out, &io::to_csv_string(&ds)?)?;
    write_file(&args.out.with_extension("truth.json"), &to_json(&truth)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct Recovery {
    attribute: String,
    expected: String,
    got: String,
    #[serde(rename = "match")]
    matched: bool,
}

#[derive(Serialize)]
struct RecoveryReport {
    schema_version: u32,
    spec_seed: u64,
    ordeval: OrdEvalParams,
    all_match: bool,
    results: Vec<Recovery>,
}

pub fn verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let spec = read_spec(&args.spec)?;
    let truth: GroundTruth = match &args.truth {
        Some(path) => read_json(path)?,
        None => ground_truth(&spec)?,
    };
    let ds = generate_population(&spec)?;
    let params = ordeval_params(&args.eval);
    let profiles = evaluate_all(&ds, &params)?;
    let classes = classify_all(&profiles, &KanoRules::default());

    let mut results = Vec::new();
    for c in &classes {
        let expected: Option<&KanoCategory> = truth.get(&c.attribute).map(|t| &t.dominant);
        results.push(Recovery {
            attribute: c.attribute.clone(),
            expected: expected.map_or_else(|| "-".to_string(), |e| e.code()),
            got: c.category.code(),
            matched: expected.is_some_and(|e| e.same_as(&c.category)),
        });
    }
    let all_match = results.iter().all(|r| r.matched);
    let report = RecoveryReport {
        schema_version: SCHEMA_VERSION,
        spec_seed: spec.seed,
        ordeval: params,
        all_match,
        results,
    };
    let mut out = OutDir::create(&args.out)?;
    out.write_json("recovery.json", &report)?;
    for r in &report.results {
        println!(
            "{:<24} {:<40} {:<40} {}",
            r.attribute,
            r.expected,
            r.got,
            if r.matched { "ok" } else { "MISMATCH" }
        );
    }
    Ok(if all_match { 0 } else { EXIT_MISMATCH })
}
