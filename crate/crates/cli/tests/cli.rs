use std::path::PathBuf;
use std::process::Command as Process;

use enrifact::corpus::{finset, idempotent_cospan};
use enrifact::document::{serialize, Body, CategoryBody, Document, Meta};
use enrifact_cli::{run, EXIT_FALSE, EXIT_HOLDS, EXIT_INVALID, EXIT_USAGE};
use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("enrifact").chain(args.iter().copied());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = cli(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn validate_reports_sizes_and_input_hash() {
    let (code, r) = json(&["validate", &corpus("finset3.json")]);
    assert_eq!(code, EXIT_HOLDS);
    assert_eq!(r["result"]["morphisms"], 60);
    assert_eq!(r["result"]["objects"], 4);
    assert_eq!(r["inputs"][0]["kind"], "enriched");
    assert_eq!(r["inputs"][0]["hash"].as_str().unwrap().len(), 64);
    assert_eq!(r["command"]["name"], "validate");
    assert!(r["timing"]["elapsed_ms"].is_number());
}

#[test]
fn canonical_on_finset_gives_surjections_and_injections_twice() {
    let (code, r) = json(&["canonical", &corpus("finset3.json")]);
    assert_eq!(code, EXIT_HOLDS);
    let b = finset(3);
    let u = b.underlying();
    let inj: Vec<String> = u.morphism_ids().filter(|&f| u.flags(f).mono).map(|f| u.morphism_name(f).to_string()).collect();
    let surj: Vec<String> = u.morphism_ids().filter(|&f| u.flags(f).epi).map(|f| u.morphism_name(f).to_string()).collect();
    for key in ["epi_strong_mono", "strong_epi_mono"] {
        assert_eq!(strings(&r["result"][key]["right_class"]), inj);
        assert_eq!(strings(&r["result"][key]["left_class"]), surj);
        assert_eq!(r["result"][key]["certification"]["holds"], true);
    }
    assert_eq!(r["result"]["coincide"], true);
}

#[test]
fn surjection_against_itself_fails_with_a_square() {
    let (code, r) = json(&["orth", &corpus("finset3.json"), "2->1:[1,1]", "2->1:[1,1]"]);
    assert_eq!(code, EXIT_FALSE);
    assert_eq!(r["holds"], false);
    let ce = &r["result"]["verdict"]["counterexample"];
    assert_eq!(ce["type"], "lifting");
    // v ∘ e = m ∘ u for the reported square, and no diagonal exists since
    // u does not factor through the surjection.
    let b = finset(3);
    let u = b.underlying();
    let id = |v: &Value| u.morphism_id(v.as_str().unwrap()).unwrap();
    let e = u.morphism_id("2->1:[1,1]").unwrap();
    let (su, sv) = (id(&ce["u"]), id(&ce["v"]));
    assert_eq!(u.compose(sv, e), u.compose(e, su));
    let fillers: Vec<_> = u
        .hom(u.cod(e), u.dom(e))
        .iter()
        .filter(|&&w| u.compose(w, e) == su && u.compose(e, w) == sv)
        .collect();
    assert_eq!(fillers.len(), ce["fillers"].as_array().unwrap().len());
    assert_ne!(fillers.len(), 1);
}

#[test]
fn laws_on_the_boolean_chain_hold_with_counts() {
    let (code, r) = json(&["laws", &corpus("chain3-boolean.json")]);
    assert_eq!(code, EXIT_HOLDS);
    let laws = r["result"]["laws"].as_array().unwrap();
    assert_eq!(laws.len(), enrifact::laws::LAWS.len());
    assert!(laws.iter().all(|l| l["holds"] == true && l["instances"].is_u64()));
    assert!(laws.iter().any(|l| l["id"] == "ORTH-SELF-ISO" && l["instances"].as_u64().unwrap() > 0));
}

#[test]
fn single_law_can_be_selected() {
    let (code, r) = json(&["laws", &corpus("walking-square.json"), "--law", "PREF-CANCEL-RIGHT,ORTH-SELF-ISO"]);
    assert_eq!(code, EXIT_HOLDS);
    let ran: Vec<&str> = r["result"]["laws"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|l| l["instances"].as_u64().unwrap() > 0)
        .map(|l| l["id"].as_str().unwrap())
        .collect();
    assert!(ran.iter().all(|id| ["PREF-CANCEL-RIGHT", "ORTH-SELF-ISO"].contains(id)), "{ran:?}");
    let (code, _) = cli(&["laws", &corpus("walking-square.json"), "--law", "NOT-A-LAW"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn factorize_through_injections() {
    let (code, r) = json(&["factorize", &corpus("finset3.json"), "2->3:[1,1]", "--right-class", "injections"]);
    assert_eq!(code, EXIT_HOLDS);
    assert_eq!(r["result"]["e"], "2->1:[1,1]");
    assert_eq!(r["result"]["m"], "1->3:[1]");
    let (code, r) = json(&[
        "factorize",
        &corpus("finset3.json"),
        "2->3:[1,1]",
        "--right-class",
        "0->0:[],1->1:[1],2->2:[1,2],2->2:[2,1],3->3:[1,2,3],1->3:[1]",
    ]);
    assert_eq!(code, EXIT_FALSE, "{r}");
    let chain = corpus("chain3-boolean.json");
    // 0 ≤ 2 pulls back along 1 ≤ 2 to 0 ≤ 1, which is missing.
    let (code, r) = json(&["factorize", &chain, "0->2", "--right-class", "0->0,1->1,2->2,0->2"]);
    assert_eq!(code, EXIT_FALSE);
    assert_eq!(r["result"]["obstruction"]["hypothesis"], "II");
    let (code, r) = json(&["factorize", &chain, "0->1", "--right-class", "0->0,1->1,2->2,0->1"]);
    assert_eq!(code, EXIT_HOLDS);
    assert_eq!((&r["result"]["e"], &r["result"]["m"]), (&Value::from("0->0"), &Value::from("0->1")));
}

#[test]
fn factorize_reports_missing_pullback() {
    let dir = tempfile::tempdir().unwrap();
    let doc = Document::new(Meta::named("cospan"), Body::Category(CategoryBody::from(&idempotent_cospan())));
    let path = write_temp(&dir, "cospan.json", &serialize(&doc));
    let (code, r) = json(&["factorize", &path, "a", "--right-class", "monos"]);
    assert_eq!(code, EXIT_FALSE);
    let ob = &r["result"]["obstruction"];
    assert_eq!(ob["error"], "hypothesis_failed");
    assert_eq!(ob["hypothesis"], "II");
    assert_eq!(ob["witness"]["first"], "a");
    assert_eq!(ob["witness"]["second"], "f");
}

#[test]
fn check_system_both_ways() {
    let f = corpus("finset3.json");
    let (code, r) = json(&["check-system", &f, "--left", "surjections", "--right", "injections", "--enriched"]);
    assert_eq!(code, EXIT_HOLDS);
    assert_eq!(r["result"]["verdict"]["witness"]["entries"].as_array().unwrap().len(), 60);
    let (code, r) = json(&["check-system", &f, "--left", "injections", "--right", "surjections"]);
    assert_eq!(code, EXIT_FALSE);
    assert!(r["result"]["verdict"]["counterexample"].is_object());
}

#[test]
fn closure_of_nothing() {
    let (code, r) = json(&["closure", &corpus("chain3-boolean.json"), "--seed", "", "--side", "right", "--enriched"]);
    assert_eq!(code, EXIT_HOLDS);
    assert_eq!(strings(&r["result"]["left"]), ["0->0", "1->1", "2->2"]);
    assert_eq!(r["result"]["right"].as_array().unwrap().len(), 6);
}

#[test]
fn fwc_on_finset_and_chain() {
    let (code, r) = json(&["fwc", &corpus("finset3.json")]);
    assert_eq!(code, EXIT_FALSE);
    assert_eq!(r["result"]["missing_limit"]["shape"], "product");
    assert_eq!(r["result"]["missing_limit"]["a"], "2");
    assert_eq!(r["result"]["missing_limit"]["b"], "2");
    let (code, _) = json(&["fwc", &corpus("chain3-boolean.json")]);
    assert_eq!(code, EXIT_HOLDS);
}

#[test]
fn classify_enriched_adds_v_flags() {
    let (code, r) = json(&["classify", &corpus("lukasiewicz3-self.json"), "--enriched"]);
    assert_eq!(code, EXIT_HOLDS);
    let rows = r["result"]["morphisms"].as_array().unwrap();
    assert!(rows.iter().all(|row| row["v_mono"].is_boolean() && row["mono"].is_boolean()));
    assert!(r.get("holds").is_none());
}

#[test]
fn expand_produces_a_valid_canonical_document() {
    let (code, text) = cli(&["expand", &corpus("directives/finset3.json")]);
    assert_eq!(code, EXIT_HOLDS);
    let expected = std::fs::read_to_string(corpus("finset3.json")).unwrap();
    assert_eq!(text, expected);
}

#[test]
fn invalid_documents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.json", "{\"kind\": \"category\", \"body\": {\"objects\": 3}}");
    let (code, r) = json(&["validate", &bad]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "schema");
    assert!(r["error"]["path"].as_str().unwrap().starts_with("body"));
    let syntax = write_temp(&dir, "syntax.json", "{\n\"kind\": ");
    let (code, r) = json(&["validate", &syntax]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "syntax");
    assert_eq!(r["error"]["line"], 2);
    let dup = std::fs::read_to_string(corpus("walking-arrow.json"))
        .unwrap()
        .replace(r#""id":"id1""#, r#""id":"a""#);
    let dup = serde_json::from_str::<Value>(&dup).unwrap();
    let mut dup = dup;
    dup["meta"].as_object_mut().unwrap().remove("hash");
    let dup = write_temp(&dir, "dup.json", &dup.to_string());
    let (code, r) = json(&["classify", &dup]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "duplicate_id");
    assert_eq!(r["error"]["id"], "a");
    let (code, r) = json(&["validate", "/nonexistent/doc.json"]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(r["error"]["kind"], "io");
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["orth", &corpus("finset3.json"), "x"]).0, EXIT_USAGE);
    assert_eq!(cli(&["validate", &corpus("finset3.json"), "--format", "xml"]).0, EXIT_USAGE);
    let (code, r) = json(&["orth", &corpus("finset3.json"), "nope", "1->1:[1]"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(r["error"]["kind"], "usage");
    assert_eq!(cli(&["--help"]).0, EXIT_HOLDS);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, stdout) = cli(&["canonical", &corpus("chain3-boolean.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_HOLDS);
    assert!(stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["coincide"], false);
    // Nothing else was left behind in the directory.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn text_format_is_readable() {
    let (code, text) = cli(&["orth", &corpus("chain3-boolean.json"), "0->1", "1->2", "--enriched", "--format", "text"]);
    assert_eq!(code, EXIT_HOLDS);
    assert!(text.contains("verdict holds"), "{text}");
    assert!(text.starts_with("enrifact "));
}

#[test]
fn reports_differ_only_in_timing() {
    let args = ["laws", &corpus("lukasiewicz3-self.json")];
    let (_, a) = cli(&args);
    let (_, b) = cli(&args);
    assert_eq!(enrifact_cli::without_timing(&a), enrifact_cli::without_timing(&b));
    let ra: Value = serde_json::from_str(&a).unwrap();
    let rb: Value = serde_json::from_str(&b).unwrap();
    assert_eq!(ra["report_hash"], rb["report_hash"]);
}

#[test]
fn binary_honours_exit_codes_and_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_enrifact");
    let status = Process::new(bin)
        .args(["orth", &corpus("finset3.json"), "2->1:[1,1]", "2->1:[1,1]"])
        .env("ENRIFACT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_FALSE));
    assert!(!status.stdout.is_empty());
    let status = Process::new(bin)
        .args(["validate", &corpus("finset3.json")])
        .env("ENRIFACT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
    let status = Process::new(bin).arg("--bogus").output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
}
