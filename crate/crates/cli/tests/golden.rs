//! The checked-in corpus under `corpus/` must match what the generators
//! produce. Run with `ENRIFACT_BLESS=1` to rewrite it.

use std::path::PathBuf;

use enrifact::corpus::standard_documents;
use enrifact::document::{parse, serialize};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn corpus_files_match_generators() {
    let bless = std::env::var_os("ENRIFACT_BLESS").is_some();
    let mut stale = Vec::new();
    for doc in standard_documents() {
        let name = doc.name().expect("corpus documents are named");
        let path = corpus_dir().join(format!("{name}.json"));
        let text = serialize(&doc) + "\n";
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(found) if found == text => {}
            _ => stale.push(name.to_string()),
        }
    }
    assert!(stale.is_empty(), "stale corpus files {stale:?}; rerun with ENRIFACT_BLESS=1");
}

#[test]
fn directive_files_expand_and_validate() {
    let dir = corpus_dir().join("directives");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let doc = parse(&std::fs::read_to_string(&path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(doc.kind(), "generator");
        enrifact::document::load(&doc).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 5);
}
