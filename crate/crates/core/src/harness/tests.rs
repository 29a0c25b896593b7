use super::*;
use crate::free::GeneratorSet;
use crate::quotient::{GradedPresentation, IdealSnapshot, Quotient, RelatorFamily};
use crate::zn::{dtilde_set, IndexSequence};

fn run(cfg: &CheckConfig) -> CheckReport {
    run_check(cfg).unwrap()
}

fn replay(report: &CheckReport, families: Vec<RelatorFamily>) -> bool {
    let w = report.witness.as_ref().expect("witness");
    let names: Vec<(String, i64)> = report
        .statistics
        .get("generators")
        .and_then(|v| serde_json::from_value(v.clone()).ok())
        .expect("generator list");
    let pairs: Vec<(&str, i64)> = names.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    let gens = GeneratorSet::from_pairs(report.config.modulus, &pairs).unwrap();
    let cutoff: u32 = w.fine_degree.values().sum();
    let q =
        Quotient::new(GradedPresentation::new(gens, families, cutoff as usize).unwrap()).unwrap();
    w.replay(&q).unwrap()
}

#[test]
fn lemma1_examples() {
    let base = CheckConfig::new(LemmaId::Lemma1, 101).indices(&[1, 2, 5, 98]);
    let r = run(&base.clone().target(40));
    assert_eq!(r.verdict, Verdict::Verified, "{}", r.message);
    assert_eq!(r.statistics["free_dimension"], 24);

    let r = run(&base.clone().target(0));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);

    let r = run(&CheckConfig::new(LemmaId::Lemma1, 7).indices(&[1, 2, 3, 4]));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
    assert!(r.message.starts_with("no admissible b"), "{}", r.message);

    let r = run(&base.clone().indices(&[1, 2, 5, 3]));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);

    let control = run(&base.target(40).control());
    assert_eq!(control.verdict, Verdict::Counterexample);
    assert!(replay(&control, vec![RelatorFamily::ZeroComponentKill]));
}

#[test]
fn lemma2_examples() {
    let smoke = run(&CheckConfig::new(LemmaId::Lemma2, 11)
        .indices(&[1, 3, 2])
        .multiplicity(3));
    assert_eq!(smoke.verdict, Verdict::Verified, "{}", smoke.message);
    assert_eq!(smoke.statistics["free_dimension"], 20);

    let r = run(&CheckConfig::new(LemmaId::Lemma2, 9).indices(&[3, 1, 2]));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
    let r = run(&CheckConfig::new(LemmaId::Lemma2, 11)
        .indices(&[1, 3, 2])
        .cutoff(14));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
    let r = run(&CheckConfig::new(LemmaId::Lemma2, 11).indices(&[1, 1, 2]));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
}

#[test]
fn lemma3_examples() {
    for (n, gens) in [(7, vec![1, 2, 3]), (5, vec![1, 2])] {
        let r = run(&CheckConfig::new(LemmaId::Lemma3, n).generators(&gens));
        assert_eq!(r.verdict, Verdict::Verified, "n = {n}: {}", r.message);
        assert_eq!(r.statistics["derived_length"], 2);
    }
    let control = run(&CheckConfig::new(LemmaId::Lemma3, 7)
        .generators(&[1, 2, 3])
        .control());
    assert_eq!(control.verdict, Verdict::Counterexample);
    assert_eq!(
        control
            .witness
            .as_ref()
            .unwrap()
            .fine_degree
            .values()
            .sum::<u32>(),
        4
    );
    assert!(replay(&control, Vec::new()));

    let r = run(&CheckConfig::new(LemmaId::Lemma3, 7).generators(&[1, 7]));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
    let r = run(&CheckConfig::new(LemmaId::Lemma3, 7).cutoff(3));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
}

#[test]
fn span_form_with_no_seeds_is_vacuous() {
    let gens = GeneratorSet::from_pairs(7, &[("a", 1), ("b", 2)]).unwrap();
    let q = Quotient::new(
        GradedPresentation::new(
            gens,
            vec![
                RelatorFamily::SelectiveMetabelian,
                RelatorFamily::ZeroComponentKill,
            ],
            6,
        )
        .unwrap(),
    )
    .unwrap();
    let dt = dtilde_set(&IndexSequence::new(7, &[1, 2, 3, 1]).unwrap()).unwrap();
    let out = span_form_on(&q, &[], &dt, false).unwrap();
    assert!(out.ideal.is_zero() && out.excess.is_none());

    let t = IdealSnapshot::empty(crate::quotient::Ambient::Derived, "T", 6);
    let census = component_census_on(&q, &t, 0, &dt, false).unwrap();
    assert!(census.census.nontrivial.is_empty() && census.census.noncentralizing.is_empty());
}

#[test]
fn predicted_set_shapes() {
    let n = Modulus::new(9).unwrap();
    let dt = dtilde_set(&IndexSequence::new(9, &[1]).unwrap()).unwrap();
    // D~(1) = {0, 1, 2, 7, 8}; order-3 subgroup {0, 3, 6}.
    assert_eq!(predicted_degrees(n, 4, &dt, 0, false), [1, 4, 7].into());
    assert_eq!(predicted_degrees(n, 4, &dt, 5, true), [1, 4, 7].into());
    assert_eq!(predicted_degrees(n, 0, &dt, 1, false).len(), 9);
}

#[test]
fn invalid_configs_are_errors() {
    assert!(matches!(
        run_check(&CheckConfig::new(LemmaId::Lemma1, 8).indices(&[1, 2, 3, 4])),
        Err(crate::Error::InvalidModulus(8))
    ));
    assert!(matches!(
        run_check(&CheckConfig::new(LemmaId::Lemma2, 11).indices(&[1, 2])),
        Err(crate::Error::InvalidConfig(_))
    ));
    assert!(parse_campaign(r#"[{"lemma": "lemma9", "modulus": 7}]"#).is_err());
    let parsed =
        parse_campaign(r#"{"lemma": "lemma3", "modulus": 7, "generators": [1, 2, 3]}"#).unwrap();
    assert_eq!(parsed.len(), 1);
}

#[test]
fn reports_are_deterministic() {
    let cfg = CheckConfig::new(LemmaId::Lemma3, 5)
        .generators(&[1, 2])
        .cutoff(5);
    let a = serde_json::to_string(&run(&cfg)).unwrap();
    let b = serde_json::to_string(&run(&cfg)).unwrap();
    assert_eq!(a, b);
    assert!(a.contains(VERSION));
}

#[test]
fn budget_exceeded_is_a_verdict() {
    let r = run(&CheckConfig::new(LemmaId::Lemma3, 7)
        .cutoff(9)
        .budget_seconds(1e-6));
    assert_eq!(r.verdict, Verdict::BudgetExceeded);
}

#[test]
fn plan_uses_witt_dimensions() {
    let plan = plan_check(&CheckConfig::new(LemmaId::Lemma2, 11).indices(&[1, 3, 2])).unwrap();
    assert_eq!(plan.hypothesis_violation, None);
    assert_eq!(plan.total_free_dimension, 3432);
    let plan = plan_check(
        &CheckConfig::new(LemmaId::Lemma1, 101)
            .indices(&[1, 2, 5, 98])
            .target(40),
    )
    .unwrap();
    assert_eq!(plan.total_free_dimension, 24);
    let plan = plan_check(&CheckConfig::new(LemmaId::Lemma1, 7).indices(&[1, 2, 3, 4])).unwrap();
    assert!(plan.hypothesis_violation.is_some());
}

#[test]
fn table_has_one_row_per_report() {
    let reports = run_campaign(&[
        CheckConfig::new(LemmaId::Lemma3, 5)
            .generators(&[1, 2])
            .cutoff(5),
        CheckConfig::new(LemmaId::Lemma1, 7).indices(&[1, 2, 3, 4]),
    ])
    .unwrap();
    assert_eq!(reports[1].verdict, Verdict::HypothesisViolated);
    let table = render_table(&reports);
    assert_eq!(table.lines().count(), 3);
    assert!(table
        .lines()
        .nth(2)
        .unwrap()
        .contains("hypothesis-violated"));
}

fn n101(lemma: LemmaId) -> CheckConfig {
    CheckConfig::new(lemma, 101)
        .indices(&[1, 2, 5, 98])
        .generators(&[96, 100])
}

#[test]
fn span_form_and_control() {
    let r = run(&n101(LemmaId::SpanForm));
    assert_eq!(r.verdict, Verdict::Verified, "{}", r.message);
    assert_eq!(r.statistics["ideal_dimension"], 2);

    let control = run(&n101(LemmaId::SpanForm).control());
    assert_eq!(control.verdict, Verdict::Counterexample);
    assert!(replay(
        &control,
        vec![
            RelatorFamily::SelectiveMetabelian,
            RelatorFamily::ZeroComponentKill
        ]
    ));

    let r = run(&n101(LemmaId::SpanForm).cutoff(5));
    assert_eq!(r.verdict, Verdict::HypothesisViolated);
}

#[test]
fn component_bound_and_control() {
    let r = run(&n101(LemmaId::ComponentBound));
    assert_eq!(r.verdict, Verdict::Verified, "{}", r.message);
    assert_eq!(r.statistics["nontrivial"], serde_json::json!([5, 100]));
    let e = r.statistics["e"].as_u64().unwrap();
    assert!(r.statistics["noncentralizing"].as_array().unwrap().len() as u64 <= e * e);

    let control = run(&n101(LemmaId::ComponentBound).control());
    assert_eq!(control.verdict, Verdict::Counterexample);
    assert_eq!(control.witness.as_ref().unwrap().zn_degree, 100);
}

#[test]
fn proposition_examples() {
    let r = run(&CheckConfig::new(LemmaId::Proposition, 7));
    assert_eq!(r.verdict, Verdict::Verified);
    assert_eq!(r.statistics["vacuous"], true);
    let r = run(&CheckConfig::new(LemmaId::Proposition, 7).cutoff(8));
    assert_eq!(r.verdict, Verdict::Verified);
    assert_eq!(r.statistics["vacuous"], false);
    assert_eq!(r.statistics["l3_dimension"], 0);
    assert_eq!(r.statistics["derived_length_informative"], true);
}
