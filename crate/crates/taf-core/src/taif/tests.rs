use super::*;
use crate::model::{PropositionId, SchemeApplication};
use crate::taif::taf_json::labelling_map_from_json;
use crate::truth::TruthValue;

fn load(text: &str) -> (TaifGraph, Vec<TaifWarning>) {
    TaifGraph::from_json(text).expect("document should load")
}

fn load_err(text: &str) -> TaifError {
    TaifGraph::from_json(text).expect_err("document should be rejected")
}

fn schema_path(err: &TaifError) -> &str {
    match err {
        TaifError::Schema { path, .. } => path,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

fn v(num: u32, k: u32) -> TruthValue {
    TruthValue::new(num, k).unwrap()
}

fn grid(k: u32) -> TruthGrid {
    TruthGrid::new(k).unwrap()
}

const SMALL: &str = r#"{
    "taif-version": 1,
    "entities": [{"id": "e-a", "label": "A"}, {"id": "e-b"}],
    "illocutions": [{"id": "i-p"}, {"id": "i-q"}],
    "applications": [
        {"id": "s1", "kind": "support", "scheme": "deductive-support",
         "premises": ["i-p"], "exceptions": [], "conclusion": "i-q"}
    ],
    "trust": [{"from": "e-a", "to": "e-b", "weight": 0.4}],
    "commitments": [{"from": "e-b", "to": "i-p", "weight": 0.8}]
}"#;

#[test]
fn small_document_loads_with_exact_weights() {
    let (graph, warnings) = load(SMALL);
    assert!(warnings.is_empty());
    assert_eq!(graph.entities.len(), 2);
    assert_eq!(graph.entities[0].label.as_deref(), Some("A"));
    assert_eq!(graph.illocutions.len(), 2);
    assert_eq!(graph.applications.len(), 1);
    assert_eq!(graph.trust[0].weight, Weight::Scalar(Rational::new(2, 5)));
    assert_eq!(graph.commitments[0].weight, Weight::Scalar(Rational::new(4, 5)));
}

#[test]
fn weights_accept_numbers_decimal_strings_and_fractions() {
    let text = r#"{
        "taif-version": 1,
        "entities": [{"id": "x"}, {"id": "y"}, {"id": "z"}],
        "trust": [
            {"from": "x", "to": "y", "weight": "0.25"},
            {"from": "y", "to": "z", "weight": "2/4"},
            {"from": "z", "to": "x", "weight": 1}
        ]
    }"#;
    let (graph, _) = load(text);
    assert_eq!(graph.trust[0].weight, Weight::Scalar(Rational::new(1, 4)));
    assert_eq!(graph.trust[1].weight, Weight::Scalar(Rational::new(1, 2)));
    assert_eq!(graph.trust[2].weight, Weight::Scalar(Rational::new(1, 1)));
}

#[test]
fn empty_graph_round_trips() {
    let (graph, warnings) = load(r#"{"taif-version": 1}"#);
    assert!(warnings.is_empty());
    assert_eq!(graph, TaifGraph::default());
    let canonical = graph.to_json();
    let (again, _) = load(&canonical);
    assert_eq!(again, graph);
    assert_eq!(again.to_json(), canonical);
}

#[test]
fn canonical_form_is_byte_stable() {
    // Deliberately messy: duplicate commitment, number weights, odd spacing.
    let messy = r#"{
        "taif-version": 1,
        "entities": [{"id": "e-b"}],
        "illocutions": [{"id": "i-p"}],
        "commitments": [
            {"from": "e-b", "to": "i-p", "weight": 0.3},
            {"from": "e-b", "to": "i-p", "weight": 0.9}
        ]
    }"#;
    let (graph, warnings) = load(messy);
    assert_eq!(warnings.len(), 1);
    let canonical = graph.to_json();
    let (reloaded, warnings) = load(&canonical);
    assert!(warnings.is_empty(), "canonical text must load clean");
    assert_eq!(reloaded, graph);
    assert_eq!(reloaded.to_json(), canonical);
    assert!(canonical.contains("\"9/10\""), "weights serialize as reduced fractions");
}

#[test]
fn version_is_checked() {
    assert_eq!(schema_path(&load_err("{}")), "");
    assert_eq!(schema_path(&load_err(r#"{"taif-version": 2}"#)), "/taif-version");
    assert!(matches!(load_err("not json"), TaifError::Json(_)));
}

#[test]
fn belief_mapping_key_is_parsed_and_checked() {
    let (graph, _) = load(r#"{"taif-version": 1, "belief-mapping": "at-least"}"#);
    assert_eq!(graph.belief_mapping, BeliefMapping::AtLeast);
    assert!(graph.to_json().contains("\"belief-mapping\": \"at-least\""));
    let err = load_err(r#"{"taif-version": 1, "belief-mapping": "sigmoid"}"#);
    assert_eq!(schema_path(&err), "/belief-mapping");
}

#[test]
fn schema_errors_carry_precise_paths() {
    let cases: &[(&str, &str)] = &[
        (r#"{"taif-version": 1, "bogus": []}"#, "/bogus"),
        (r#"{"taif-version": 1, "entities": {}}"#, "/entities"),
        (r#"{"taif-version": 1, "entities": [{}]}"#, "/entities/0"),
        (r#"{"taif-version": 1, "entities": [{"id": "x", "colour": 1}]}"#, "/entities/0/colour"),
        (r#"{"taif-version": 1, "entities": [{"id": ""}]}"#, "/entities/0/id"),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}], "illocutions": [{"id": "x"}]}"#,
            "/illocutions/0/id",
        ),
        (
            r#"{"taif-version": 1, "illocutions": [{"id": "p"}],
                "applications": [{"id": "a", "kind": "support", "scheme": "nope",
                                  "premises": ["p"], "conclusion": "p"}]}"#,
            "/applications/0/scheme",
        ),
        (
            r#"{"taif-version": 1, "illocutions": [{"id": "p"}],
                "applications": [{"id": "a", "kind": "attack", "scheme": "deductive-support",
                                  "premises": ["p"], "conclusion": "p"}]}"#,
            "/applications/0/kind",
        ),
        (
            r#"{"taif-version": 1, "illocutions": [{"id": "p"}],
                "applications": [{"id": "a", "kind": "support", "scheme": "deductive-support",
                                  "premises": ["p", "p"], "conclusion": "p"}]}"#,
            "/applications/0/premises",
        ),
        (
            r#"{"taif-version": 1, "illocutions": [{"id": "p"}],
                "applications": [{"id": "a", "kind": "support", "scheme": "deductive-support",
                                  "premises": ["p"], "exceptions": ["p"], "conclusion": "p"}]}"#,
            "/applications/0/exceptions",
        ),
        (
            r#"{"taif-version": 1, "illocutions": [{"id": "p"}], "locutions": [{"id": "l"}],
                "applications": [{"id": "a", "kind": "support", "scheme": "deductive-support",
                                  "premises": ["l"], "conclusion": "p"}]}"#,
            "/applications/0/premises/0",
        ),
        (
            r#"{"taif-version": 1, "illocutions": [{"id": "p"}],
                "applications": [{"id": "a", "kind": "support", "scheme": "deductive-support",
                                  "premises": ["p"], "conclusion": "gone"}]}"#,
            "/applications/0/conclusion",
        ),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}], "illocutions": [{"id": "p"}],
                "trust": [{"from": "x", "to": "p", "weight": 1}]}"#,
            "/trust/0/to",
        ),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}, {"id": "y"}],
                "commitments": [{"from": "x", "to": "y", "weight": 1}]}"#,
            "/commitments/0/to",
        ),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}], "illocutions": [{"id": "p"}],
                "commitments": [{"from": "p", "to": "p", "weight": 1}]}"#,
            "/commitments/0/from",
        ),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}], "illocutions": [{"id": "p"}],
                "commitments": [{"from": "x", "to": "p", "weight": 1.5}]}"#,
            "/commitments/0/weight",
        ),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}], "illocutions": [{"id": "p"}],
                "commitments": [{"from": "x", "to": "p", "weight": [0, "-1/2"]}]}"#,
            "/commitments/0/weight/1",
        ),
        (
            r#"{"taif-version": 1, "entities": [{"id": "x"}, {"id": "y"}],
                "trust": [{"from": "x", "to": "y", "weight": "abc"}]}"#,
            "/trust/0/weight",
        ),
        (
            r#"{"taif-version": 1, "locutions": [{"id": "l"}], "illocutions": [{"id": "p"}],
                "force": [{"from": "p", "to": "p"}]}"#,
            "/force/0/from",
        ),
        (
            r#"{"taif-version": 1,
                "schemes": [{"id": "s", "kind": "support", "arity": 1,
                             "exception_arity": 0, "interpretation": "p2 -> c"}]}"#,
            "/schemes/0",
        ),
    ];
    for (text, want) in cases {
        let err = load_err(text);
        assert_eq!(schema_path(&err), *want, "for document {text}");
    }
}

#[test]
fn reasserted_commitments_keep_the_latest() {
    let text = r#"{
        "taif-version": 1,
        "entities": [{"id": "e-b"}],
        "illocutions": [{"id": "i-p"}, {"id": "i-q"}],
        "commitments": [
            {"from": "e-b", "to": "i-p", "weight": 0.3},
            {"from": "e-b", "to": "i-q", "weight": 0.5},
            {"from": "e-b", "to": "i-p", "weight": 0.9}
        ]
    }"#;
    let (graph, warnings) = load(text);
    assert_eq!(warnings.len(), 1);
    assert_eq!(warnings[0].path, "/commitments/0");
    assert!(warnings[0].message.contains("re-asserts"));
    assert_eq!(graph.commitments.len(), 2);
    assert_eq!(graph.commitments[0].to, "i-q");
    assert_eq!(graph.commitments[1].weight, Weight::Scalar(Rational::new(9, 10)));

    let taf = graph.project(&ProjectionConfig::new(grid(10))).unwrap();
    assert_eq!(
        taf.belief(&"e-b".into(), &"i-p".into()),
        &BeliefPredicate::Tent(v(9, 10))
    );
}

#[test]
fn reply_cycles_are_rejected() {
    let text = r#"{
        "taif-version": 1,
        "locutions": [{"id": "l1"}, {"id": "l2"}, {"id": "l3"}],
        "replies": [
            {"from": "l1", "to": "l2"},
            {"from": "l2", "to": "l3"},
            {"from": "l3", "to": "l1"}
        ]
    }"#;
    match load_err(text) {
        TaifError::CyclicReplies { cycle } => {
            assert_eq!(cycle.len(), 3);
            assert!(cycle.contains(&"l1".to_string()));
        }
        other => panic!("expected a cycle error, got {other:?}"),
    }

    let self_reply = r#"{
        "taif-version": 1,
        "locutions": [{"id": "l1"}],
        "replies": [{"from": "l1", "to": "l1"}]
    }"#;
    match load_err(self_reply) {
        TaifError::CyclicReplies { cycle } => assert_eq!(cycle, vec!["l1".to_string()]),
        other => panic!("expected a cycle error, got {other:?}"),
    }

    // A diamond is fine: sharing a target is not a cycle.
    let diamond = r#"{
        "taif-version": 1,
        "locutions": [{"id": "a"}, {"id": "b"}, {"id": "c"}, {"id": "d"}],
        "replies": [
            {"from": "d", "to": "b"}, {"from": "d", "to": "c"},
            {"from": "b", "to": "a"}, {"from": "c", "to": "a"}
        ]
    }"#;
    load(diamond);
}

#[test]
fn projection_builds_propositions_schemes_and_beliefs() {
    let (graph, _) = load(SMALL);
    let taf = graph.project(&ProjectionConfig::new(grid(10))).unwrap();
    assert_eq!(taf.propositions().len(), 4);
    assert_eq!(taf.entities().count(), 2);
    assert_eq!(taf.illocutions().count(), 2);
    assert!(taf.scheme(&"deductive-support".into()).is_some(), "built-in pulled in");
    assert_eq!(taf.applications().len(), 1);
    assert_eq!(taf.belief(&"e-a".into(), &"e-b".into()), &BeliefPredicate::Tent(v(4, 10)));
    assert_eq!(taf.belief(&"e-b".into(), &"i-p".into()), &BeliefPredicate::Tent(v(8, 10)));
    assert!(taf.validate().is_empty());
}

#[test]
fn scalar_weights_round_to_the_grid() {
    let (graph, _) = load(SMALL);
    let taf = graph.project(&ProjectionConfig::new(grid(2))).unwrap();
    // 0.8 rounds up to 1, 0.4 rounds down to 1/2 on the half grid.
    assert_eq!(taf.belief(&"e-b".into(), &"i-p".into()), &BeliefPredicate::Tent(v(2, 2)));
    assert_eq!(taf.belief(&"e-a".into(), &"e-b".into()), &BeliefPredicate::Tent(v(1, 2)));
}

#[test]
fn belief_mapping_declared_per_file_and_overridable() {
    let text = r#"{
        "taif-version": 1,
        "belief-mapping": "at-least",
        "entities": [{"id": "x"}],
        "illocutions": [{"id": "p"}],
        "commitments": [{"from": "x", "to": "p", "weight": 0.75}]
    }"#;
    let (graph, _) = load(text);
    let config = ProjectionConfig::new(grid(4));
    let taf = graph.project(&config).unwrap();
    assert_eq!(taf.belief(&"x".into(), &"p".into()), &BeliefPredicate::AtLeast(v(3, 4)));

    let overridden = ProjectionConfig { belief_mapping: Some(BeliefMapping::Tent), ..config };
    let taf = graph.project(&overridden).unwrap();
    assert_eq!(taf.belief(&"x".into(), &"p".into()), &BeliefPredicate::Tent(v(3, 4)));
}

#[test]
fn table_weights_pass_through_under_any_mapping() {
    let text = r#"{
        "taif-version": 1,
        "belief-mapping": "at-most",
        "entities": [{"id": "x"}],
        "illocutions": [{"id": "p"}],
        "commitments": [{"from": "x", "to": "p", "weight": [0, "1/2", 1]}]
    }"#;
    let (graph, _) = load(text);
    let taf = graph.project(&ProjectionConfig::new(grid(2))).unwrap();
    assert_eq!(
        taf.belief(&"x".into(), &"p".into()),
        &BeliefPredicate::Table(vec![v(0, 2), v(1, 2), v(2, 2)])
    );

    // The same table cannot serve a finer grid.
    let err = graph.project(&ProjectionConfig::new(grid(4))).unwrap_err();
    match err {
        ProjectError::TableLength { expected, got, .. } => {
            assert_eq!(expected, 5);
            assert_eq!(got, 3);
        }
        other => panic!("expected a table-length error, got {other:?}"),
    }
}

#[test]
fn dialogue_never_influences_projection() {
    let with_dialogue = r#"{
        "taif-version": 1,
        "entities": [{"id": "e-b"}],
        "locutions": [{"id": "l1", "text": "so?"}, {"id": "l2"}],
        "illocutions": [{"id": "i-p"}, {"id": "i-q"}],
        "applications": [
            {"id": "s1", "kind": "support", "scheme": "deductive-support",
             "premises": ["i-p"], "exceptions": [], "conclusion": "i-q"}
        ],
        "commitments": [{"from": "e-b", "to": "i-p", "weight": 0.5}],
        "replies": [{"from": "l2", "to": "l1"}],
        "transitions": [{"from": "l1", "to": "l2", "move": "counter"}],
        "force": [{"from": "l1", "to": "i-p"}]
    }"#;
    let (graph, _) = load(with_dialogue);
    let mut stripped = graph.clone();
    stripped.locutions.clear();
    stripped.replies.clear();
    stripped.transitions.clear();
    stripped.force.clear();

    let config = ProjectionConfig::new(grid(4));
    let full = taf_to_json(&graph.project(&config).unwrap());
    let bare = taf_to_json(&stripped.project(&config).unwrap());
    assert_eq!(full, bare);
}

#[test]
fn file_schemes_shadow_builtins() {
    let text = r#"{
        "taif-version": 1,
        "illocutions": [{"id": "p"}, {"id": "q"}],
        "schemes": [
            {"id": "deductive-support", "kind": "support", "arity": 1,
             "exception_arity": 0, "interpretation": "!p1 -> !c"}
        ],
        "applications": [
            {"id": "s1", "kind": "support", "scheme": "deductive-support",
             "premises": ["p"], "exceptions": [], "conclusion": "q"}
        ]
    }"#;
    let (graph, _) = load(text);
    let taf = graph.project(&ProjectionConfig::new(grid(4))).unwrap();
    let scheme = taf.scheme(&"deductive-support".into()).unwrap();
    assert_eq!(scheme.body().to_string(), "!p1 -> !c");
}

#[test]
fn projection_is_total_on_valid_graphs_and_rechecks() {
    // A graph built by hand, skipping the loader, is still validated.
    let mut graph = TaifGraph::default();
    graph.illocutions.push(TaifNode::new("p"));
    graph.applications.push(ApplicationDef {
        id: "a".into(),
        kind: SchemeKind::Support,
        scheme: "deductive-support".into(),
        premises: vec!["missing".into()],
        exceptions: vec![],
        conclusion: "p".into(),
    });
    let err = graph.project(&ProjectionConfig::new(grid(2))).unwrap_err();
    assert!(matches!(err, ProjectError::Graph(TaifError::Schema { .. })));
}

#[test]
fn framework_json_round_trips_every_predicate_shape() {
    let g = grid(4);
    let beliefs = std::collections::BTreeMap::from([
        (("x".into(), "p".into()), BeliefPredicate::NoOpinion),
        (("x".into(), "q".into()), BeliefPredicate::Tent(v(3, 4))),
        (("y".into(), "p".into()), BeliefPredicate::AtLeast(v(2, 4))),
        (("y".into(), "q".into()), BeliefPredicate::AtMost(v(1, 4))),
        (
            ("y".into(), "x".into()),
            BeliefPredicate::Table(vec![v(0, 4), v(1, 4), v(4, 4), v(1, 4), v(0, 4)]),
        ),
    ]);
    let taf = Taf::new(
        g,
        vec![
            Proposition::entity("x").with_label("Actor X"),
            Proposition::entity("y"),
            Proposition::illocution("p"),
            Proposition::illocution("q"),
        ],
        vec![
            builtin_scheme("deductive-support").unwrap(),
            Scheme::new("joint", SchemeKind::Attack, 2, 1, "(p1 & p2) -> !c").unwrap(),
        ],
        vec![
            SchemeApplication {
                scheme: "deductive-support".into(),
                premises: vec!["p".into()],
                exceptions: vec![],
                conclusion: "q".into(),
            },
            SchemeApplication {
                scheme: "joint".into(),
                premises: vec!["p".into(), "x".into()],
                exceptions: vec!["q".into()],
                conclusion: "q".into(),
            },
        ],
        beliefs,
    );
    assert!(taf.validate().is_empty());

    let text = taf_to_json(&taf);
    let parsed = taf_from_json(&text).unwrap();
    assert!(parsed.validate().is_empty());
    assert_eq!(taf_to_json(&parsed), text);
    assert_eq!(parsed.grid(), g);
    assert_eq!(parsed.propositions(), taf.propositions());
    assert_eq!(parsed.applications(), taf.applications());
    assert_eq!(parsed.beliefs(), taf.beliefs());
}

#[test]
fn framework_json_accepts_builtins_without_definitions() {
    let text = r#"{
        "taf-version": 1,
        "grid": 2,
        "propositions": [
            {"id": "p", "kind": "illocution"},
            {"id": "q", "kind": "illocution"}
        ],
        "applications": [
            {"scheme": "deductive-support", "premises": ["p"], "conclusion": "q"}
        ]
    }"#;
    let taf = taf_from_json(text).unwrap();
    assert!(taf.validate().is_empty());
    assert_eq!(taf.schemes().len(), 1);
}

#[test]
fn framework_json_rejects_bad_degrees_and_kinds() {
    let off_grid = r#"{
        "taf-version": 1,
        "grid": 4,
        "propositions": [{"id": "x", "kind": "entity"}, {"id": "p", "kind": "illocution"}],
        "beliefs": [
            {"actor": "x", "proposition": "p", "predicate": {"kind": "tent", "peak": "1/3"}}
        ]
    }"#;
    let err = taf_from_json(off_grid).unwrap_err();
    assert_eq!(schema_path(&err), "/beliefs/0/predicate/peak");

    let bad_kind = r#"{
        "taf-version": 1,
        "grid": 4,
        "propositions": [{"id": "p", "kind": "sentence"}]
    }"#;
    let err = taf_from_json(bad_kind).unwrap_err();
    assert_eq!(schema_path(&err), "/propositions/0/kind");

    let dup_belief = r#"{
        "taf-version": 1,
        "grid": 2,
        "propositions": [{"id": "x", "kind": "entity"}, {"id": "p", "kind": "illocution"}],
        "beliefs": [
            {"actor": "x", "proposition": "p", "predicate": {"kind": "no-opinion"}},
            {"actor": "x", "proposition": "p", "predicate": {"kind": "tent", "peak": "1/2"}}
        ]
    }"#;
    let err = taf_from_json(dup_belief).unwrap_err();
    assert_eq!(schema_path(&err), "/beliefs/1");
}

#[test]
fn labelling_files_parse_to_exact_rationals() {
    let map = labelling_map_from_json(r#"{"p": 0.5, "q": "3/4", "x": 1}"#).unwrap();
    assert_eq!(map[&PropositionId::from("p")], Rational::new(1, 2));
    assert_eq!(map[&PropositionId::from("q")], Rational::new(3, 4));
    assert_eq!(map[&PropositionId::from("x")], Rational::new(1, 1));
    assert!(labelling_map_from_json("[1, 2]").is_err());
    assert!(labelling_map_from_json(r#"{"p": "x"}"#).is_err());
}
