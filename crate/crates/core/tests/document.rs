use enrifact::corpus::{expand, opposite_document, standard_documents};
use enrifact::document::{self, load, parse, serialize, Body, Directive, DocumentError, Loaded, TensorOp};

fn generator(body: &str) -> String {
    format!(r#"{{"kind":"generator","meta":{{"name":"g"}},"body":{body}}}"#)
}

fn load_text(text: &str) -> Loaded {
    load(&parse(text).unwrap()).unwrap()
}

#[test]
fn finset_directive_expands_to_all_functions() {
    let loaded = load_text(&generator(r#"{"finset":{"max_size":3}}"#));
    // Σ_{a,b ≤ 3} b^a
    let count: usize = (0..=3u32).map(|a| (0..=3usize).map(|b| b.pow(a)).sum::<usize>()).sum();
    assert_eq!(loaded.enriched().underlying().morphism_count(), count);
    assert_eq!(count, 60);
}

#[test]
fn oversized_finset_is_a_directive_error() {
    let doc = parse(&generator(r#"{"finset":{"max_size":9}}"#)).unwrap();
    assert!(matches!(load(&doc), Err(DocumentError::Directive(_))));
}

#[test]
fn two_element_quantale_has_three_arrows() {
    let doc = parse(&generator(r#"{"quantale_chain":{"n":2,"tensor":"min"}}"#)).unwrap();
    let Body::Generator(d) = &doc.body else { panic!() };
    assert_eq!(
        d,
        &Directive::QuantaleChain {
            n: 2,
            tensor: TensorOp::Min,
            enrich: None
        }
    );
    match load(&doc).unwrap() {
        Loaded::Monoidal(v, b) => {
            assert_eq!(v.base().morphism_count(), 3);
            assert_eq!(b.underlying().morphism_count(), 3);
        }
        _ => panic!("expected a monoidal base"),
    }
}

#[test]
fn opposite_of_walking_arrow_reverses_it() {
    let loaded = load_text(&generator(
        r#"{"opposite":{"of":{"kind":"generator","body":{"walking":{"shape":"arrow"}}}}}"#,
    ));
    let c = loaded.enriched().underlying();
    let a = c.morphism_id("a").unwrap();
    assert_eq!(c.object_name(c.dom(a)), "1");
    assert_eq!(c.object_name(c.cod(a)), "0");
}

#[test]
fn opposite_of_a_monoidal_base_is_refused() {
    let base = expand(
        &Directive::QuantaleChain {
            n: 3,
            tensor: TensorOp::Lukasiewicz,
            enrich: None,
        },
        None,
    )
    .unwrap();
    assert!(matches!(opposite_document(&base, None), Err(DocumentError::Directive(_))));
}

#[test]
fn corpus_documents_round_trip() {
    for doc in standard_documents() {
        let text = serialize(&doc);
        let again = parse(&text).unwrap();
        assert_eq!(serialize(&again), text, "{:?}", doc.name());
        let h1 = load(&doc).unwrap().enriched().identity_hash().to_string();
        let h2 = load(&again).unwrap().enriched().identity_hash().to_string();
        assert_eq!(h1, h2);
    }
}

#[test]
fn hash_ignores_array_order_and_whitespace() {
    let a = r#"{"kind":"category","body":{"objects":["0","1"],
        "morphisms":[{"id":"a","dom":"0","cod":"1"},{"id":"i","dom":"0","cod":"0"},{"id":"j","dom":"1","cod":"1"}],
        "identities":{"0":"i","1":"j"},
        "composition":[["a","i","a"],["j","a","a"],["i","i","i"],["j","j","j"]]}}"#;
    let b = r#"{"body":{"identities":{"1":"j","0":"i"},"objects":["1","0"],
        "composition":[["j","j","j"],["i","i","i"],["j","a","a"],["a","i","a"]],
        "morphisms":[{"cod":"1","dom":"1","id":"j"},{"id":"i","dom":"0","cod":"0"},{"id":"a","dom":"0","cod":"1"}]},
        "kind":"category"}"#;
    let (da, db) = (parse(a).unwrap(), parse(b).unwrap());
    assert_eq!(document::content_hash(&da), document::content_hash(&db));
    assert_eq!(serialize(&da), serialize(&db));
}

#[test]
fn unknown_kind_and_fields_are_schema_errors() {
    assert!(matches!(
        parse(r#"{"kind":"sheaf","body":{}}"#),
        Err(DocumentError::Schema { path, .. }) if path == "kind"
    ));
    match parse(&generator(r#"{"finset":{"max_size":2,"colour":1}}"#)) {
        Err(DocumentError::Schema { path, .. }) => assert!(path.starts_with("body"), "{path}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn poset_directive_rejects_cycles() {
    let doc = parse(&generator(
        r#"{"poset":{"elements":["x","y"],"relation":[["x","y"],["y","x"]]}}"#,
    ))
    .unwrap();
    assert!(load(&doc).is_err());
}

#[test]
fn opposite_twice_is_canonically_the_same_document() {
    for doc in standard_documents() {
        let Ok(op) = opposite_document(&doc, doc.name()) else { continue };
        let back = opposite_document(&op, doc.name()).unwrap();
        assert_eq!(serialize(&back), serialize(&doc), "{:?}", doc.name());
    }
}
