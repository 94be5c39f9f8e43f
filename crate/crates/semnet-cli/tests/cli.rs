//! End-to-end tests driving the `semnet` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use semnet::nal::{self, Judgment, TruthValue};
use semnet::ntriples::serialize_ntriples;
use semnet::term::Term;
use semnet::TripleStore;

fn semnet_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semnet"))
}

fn run(args: &[&str]) -> Output {
    semnet_bin().args(args).output().expect("binary runs")
}

fn uri(s: &str) -> Term {
    Term::uri(s).unwrap()
}

fn write_doc(path: &Path, doc: &str) {
    fs::write(path, doc).unwrap();
}

#[test]
fn load_round_trips_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.nt");
    let output = dir.path().join("out.nt");
    write_doc(
        &input,
        "<a:z> <a:p> <a:y> .\n<a:x> <a:p> \"v\"^^<xsd:string> .\n",
    );
    let out = run(&[
        "load",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    let doc = fs::read_to_string(&output).unwrap();
    assert_eq!(
        doc,
        "<a:x> <a:p> \"v\"^^<xsd:string> .\n<a:z> <a:p> <a:y> .\n"
    );

    let manifest_path = dir.path().join("out.nt.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
    assert_eq!(
        manifest["inputs"][0]["sha256"].as_str().unwrap().len(),
        64
    );
    assert!(manifest["argv"].as_array().unwrap().len() >= 4);
}

#[test]
fn reason_nal_reproduces_the_worked_truth_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("judgments.nt");
    let output = dir.path().join("out.json");

    let tv = |f, c| TruthValue::new(f, c).unwrap();
    let mut store = TripleStore::new();
    let premises = [
        ("lanl:marko", "lanl:Person", 0.5, 0.5, "lanl:j1"),
        ("lanl:Person", "lanl:Mammal", 0.9, 0.9, "lanl:j2"),
        ("lanl:Dog", "lanl:Mammal", 0.9, 0.9, "lanl:j3"),
    ];
    for (s, p, f, c, ptr) in premises {
        let j = Judgment::new(uri(s), uri(p), tv(f, c), uri(ptr)).unwrap();
        for t in nal::encode_judgment(&j) {
            store.insert(t);
        }
    }
    write_doc(&input, &serialize_ntriples(&store));

    let out = run(&[
        "reason",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "nal",
        "--k",
        "1",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let doc = fs::read_to_string(&output).unwrap();
    assert!(doc.contains("0.2025"), "deduction value missing:\n{doc}");
    assert!(doc.contains("0.0758"), "induction value missing:\n{doc}");
    assert!(doc.contains("⟨0.45, 0.2025⟩"), "formatted tv missing:\n{doc}");
}

#[test]
fn analyze_pagerank_on_a_self_loop_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.nt");
    let output = dir.path().join("pr.json");
    write_doc(&input, "<a:v> <a:next> <a:v> .\n");
    let out = run(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--metric",
        "pagerank",
        "--predicate",
        "a:next",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    let values = v.as_array().unwrap();
    assert_eq!(values.len(), 1);
    assert_eq!(values[0]["term"], "<a:v>");
    assert!((values[0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn walk_is_deterministic_under_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.nt");
    write_doc(
        &input,
        "<a:u> <a:next> <a:v> .\n<a:v> <a:next> <a:w> .\n<a:w> <a:next> <a:u> .\n",
    );
    let grammar = dir.path().join("grammar.json");
    write_doc(
        &grammar,
        r#"{
            "start": "hop",
            "nodes": {
                "hop": {
                    "query": "SELECT ?dest WHERE { @ <a:next> ?dest }",
                    "transitions": [["hop", 1.0]],
                    "fallback": "hop"
                }
            }
        }"#,
    );
    let mut docs = Vec::new();
    for name in ["w1.csv", "w2.csv"] {
        let output = dir.path().join(name);
        let out = run(&[
            "walk",
            "--input",
            input.to_str().unwrap(),
            "--grammar",
            grammar.to_str().unwrap(),
            "--walkers",
            "4",
            "--steps",
            "200",
            "--seed",
            "11",
            "--output",
            output.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{out:?}");
        docs.push(fs::read_to_string(&output).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
    assert!(docs[0].contains("<a:u>"));
}

#[test]
fn usage_errors_exit_one() {
    // Unknown subcommand.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    // Grammar walk without a seed.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.nt");
    write_doc(&input, "<a:u> <a:next> <a:v> .\n");
    let grammar = dir.path().join("g.json");
    write_doc(
        &grammar,
        r#"{"start":"h","nodes":{"h":{"query":"SELECT ?dest WHERE { @ <a:next> ?dest }","transitions":[["h",1.0]],"fallback":"h"}}}"#,
    );
    let out = run(&[
        "walk",
        "--input",
        input.to_str().unwrap(),
        "--grammar",
        grammar.to_str().unwrap(),
        "--output",
        dir.path().join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // Missing input file.
    let out = run(&[
        "load",
        "--input",
        dir.path().join("absent.nt").to_str().unwrap(),
        "--output",
        dir.path().join("o.nt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Malformed document.
    let bad = dir.path().join("bad.nt");
    write_doc(&bad, "<a:u> <a:next>\n");
    let out = run(&[
        "load",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        dir.path().join("o.nt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn owl_inconsistency_exits_three_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("presidents.nt");
    write_doc(
        &input,
        "\
<usa:Country> <rdf:type> <rdfs:Class> .
<usa:Country> <rdfs:subClassOf> _:r .
_:r <rdf:type> <owl:Restriction> .
_:r <owl:onProperty> <lanl:president> .
_:r <owl:maxCardinality> \"1\"^^<xsd:int> .
<usa:United_States> <rdf:type> <usa:Country> .
<usa:barack> <lanl:president> <usa:United_States> .
<usa:obama> <lanl:president> <usa:United_States> .
<lanl:herbertv> <lanl:president> <usa:United_States> .
<lanl:herbertv> <owl:differentFrom> <usa:barack> .
",
    );
    let output = dir.path().join("owl.json");
    let out = run(&[
        "reason",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "owl",
        "--fail-on-inconsistency",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    // The report is still written before the failure exit.
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["inconsistencies"].as_array().unwrap().len(), 1);

    // Without the flag the same input exits 0.
    let out = run(&[
        "reason",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "owl",
        "--output",
        dir.path().join("owl2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn algebra_coauthorship_counts_shared_articles() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.nt");
    let mut doc = String::new();
    for k in 0..3 {
        for a in ["a:marko", "a:johan"] {
            doc.push_str(&format!("<{a}> <a:authored> <a:paper{k}> .\n"));
        }
    }
    write_doc(&input, &doc);
    let output = dir.path().join("z.csv");
    let out = run(&[
        "algebra",
        "--input",
        input.to_str().unwrap(),
        "--expr",
        "(slice('a:authored') * t(slice('a:authored'))) & not(id)",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let csv = fs::read_to_string(&output).unwrap();
    assert!(
        csv.contains("<a:johan>,<a:marko>,3") || csv.contains("<a:johan>, <a:marko>, 3"),
        "unexpected csv:\n{csv}"
    );
}

#[test]
fn export_json_lists_every_triple() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.nt");
    write_doc(&input, "<a:u> <a:p> <a:v> .\n<a:u> <a:p> \"x\" .\n");
    let output = dir.path().join("out.json");
    let out = run(&[
        "export",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v.as_array().map(|a| a.len()), Some(2));
}
