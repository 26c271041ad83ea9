use ordeval_core::report::{render_profile, render_text_report, ProfilePlotOptions};
use ordeval_core::synth::{mixed_perception_spec, one_per_category_spec};
use ordeval_core::{
    classify, classify_all, evaluate_all, generate_population, ground_truth, io, load_csv, relieff_scores,
    BaseCategory, IngestConfig, KanoClassification, KanoRules, OrdEvalParams, OrdinalScale, ReinforcementProfile,
    ReliefFParams,
};

#[test]
fn csv_through_report() {
    let spec = one_per_category_spec(300, 0.5, 21);
    let ds = generate_population(&spec).unwrap();
    let text = io::to_csv_string(&ds).unwrap();
    let config = IngestConfig::new("satisfaction").with_default_scale(OrdinalScale::likert7());
    let (loaded, report) = load_csv(text.as_bytes(), &config).unwrap();
    assert_eq!(loaded, ds);
    assert_eq!(report.rows_read, 300);

    let params = OrdEvalParams {
        bootstrap_replicates: 100,
        seed: 21,
        ..Default::default()
    };
    let profiles = evaluate_all(&loaded, &params).unwrap();
    let classes = classify_all(&profiles, &KanoRules::default());
    let scores = relieff_scores(&loaded, &ReliefFParams::default()).unwrap();
    let report = render_text_report(&profiles, &classes, &scores.scores).unwrap();
    for name in loaded.attribute_names() {
        assert!(report.contains(&format!("== {name} ==")));
    }
    for p in &profiles {
        assert!(roxmltree::Document::parse(&render_profile(p, &ProfilePlotOptions::default())).is_ok());
    }
}

#[test]
fn json_round_trips() {
    let ds = generate_population(&one_per_category_spec(120, 0.5, 1)).unwrap();
    let params = OrdEvalParams {
        bootstrap_replicates: 50,
        ..Default::default()
    };
    let profiles = evaluate_all(&ds, &params).unwrap();
    let json = serde_json::to_string(&profiles).unwrap();
    let back: Vec<ReinforcementProfile> = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    assert!(json.contains("\"schema_version\":1"));

    let classes = classify_all(&profiles, &KanoRules::default());
    let json = serde_json::to_string(&classes).unwrap();
    let back: Vec<KanoClassification> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, classes);
}

#[test]
fn clear_populations_are_recovered() {
    let spec = one_per_category_spec(500, 0.5, 1);
    let truth = ground_truth(&spec).unwrap();
    let ds = generate_population(&spec).unwrap();
    let params = OrdEvalParams {
        seed: 1,
        ..Default::default()
    };
    for p in evaluate_all(&ds, &params).unwrap() {
        let got = classify(&p, &KanoRules::default());
        let want = &truth.get(&p.attribute).unwrap().dominant;
        assert!(got.category.same_as(want), "{}: {} vs {}", p.attribute, got.category, want);
    }
}

#[test]
fn mixture_is_reported_as_mixed() {
    let spec = mixed_perception_spec(1000, 0.5, 3);
    let ds = generate_population(&spec).unwrap();
    let params = OrdEvalParams {
        seed: 3,
        ..Default::default()
    };
    let p = ordeval_core::evaluate_attribute(&ds, 0, &params).unwrap();
    let c = classify(&p, &KanoRules::default());
    assert!(c.category.components().contains(&BaseCategory::MustBe), "{}", c.category);
    assert!(c.category.components().contains(&BaseCategory::OneDimensional));
}
