//! Generators for the example corpus: truncated finite sets, quantale
//! chains, posets, walking shapes and opposites.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::document::{
    enriched_body, monoidal_body, BackendSpec, Body, CategoryBody, Directive, Document, DocumentError, EnrichedBody,
    FinsetSpec, Meta, MorphismSpec, Shape, TensorOp,
};
use crate::enriched::{EnrichedCategory, RawEnriched, TensorEntry, VObj};
use crate::fincat::{FinCategory, RawCategory, RawMorphism};
use crate::monoidal::{chain_quantale, quantale_arrow, quantale_to_v, ChainTensor, MonoidalClosed};

/// ID of the function `a → b` with 1-based images.
pub fn function_id(a: usize, b: usize, images: &[usize]) -> String {
    let list: Vec<String> = images.iter().map(|i| (i + 1).to_string()).collect();
    format!("{a}->{b}:[{}]", list.join(","))
}

fn all_functions(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..a {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..b).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// The full subcategory of finite sets `{}, {1}, …, {1..n}`.
pub fn finset_category(n: usize) -> FinCategory {
    let mut raw = RawCategory {
        objects: (0..=n).map(|i| i.to_string()).collect(),
        ..RawCategory::default()
    };
    for a in 0..=n {
        raw.identities.push((a.to_string(), function_id(a, a, &(0..a).collect::<Vec<_>>())));
        for b in 0..=n {
            for f in all_functions(a, b) {
                raw.morphisms.push(RawMorphism::new(function_id(a, b, &f), a.to_string(), b.to_string()));
                for c in 0..=n {
                    for g in all_functions(b, c) {
                        let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                        raw.composition
                            .push((function_id(b, c, &g), function_id(a, b, &f), function_id(a, c, &gf)));
                    }
                }
            }
        }
    }
    FinCategory::validate(&raw).expect("finite sets form a category")
}

/// Truncated `FinSet` as a sets-enriched category, with copowers `v · a`
/// and powers `a^v` for every cardinality `v ≤ n` whose result fits.
pub fn finset(n: usize) -> EnrichedCategory {
    let cat = finset_category(n);
    let mor = |a: usize, b: usize, f: &[usize]| cat.morphism_id(&function_id(a, b, f)).expect("generated");
    let obj = |a: usize| cat.object_id(&a.to_string()).expect("generated");
    let mut tensors = Vec::new();
    let mut cotensors = Vec::new();
    for v in 0..=n {
        for a in 0..=n {
            let t = v * a;
            if t <= n {
                let structure = (0..v)
                    .map(|i| mor(a, t, &(0..a).map(|x| i * a + x).collect::<Vec<_>>()))
                    .collect();
                tensors.push(TensorEntry {
                    v: VObj::Card(v),
                    a: obj(a),
                    t: obj(t),
                    structure,
                });
            }
            let power = (a as u64).checked_pow(v as u32).unwrap_or(u64::MAX);
            if power <= n as u64 {
                let t = power as usize;
                // Element j of a^v is the tuple of base-a digits of j.
                let structure = (0..v)
                    .map(|i| {
                        let images: Vec<usize> = (0..t).map(|j| (j / a.pow(i as u32)) % a).collect();
                        mor(t, a, &images)
                    })
                    .collect();
                cotensors.push(TensorEntry {
                    v: VObj::Card(v),
                    a: obj(a),
                    t: obj(t),
                    structure,
                });
            }
        }
    }
    EnrichedCategory::from_category_with_tensors(cat, tensors, cotensors).expect("finset (co)tensors are universal")
}

/// Thin category of a poset; arrows are named `x<=y`.
pub fn poset_category(elements: &[String], relation: &[(String, String)]) -> Result<FinCategory, DocumentError> {
    let n = elements.len();
    let idx = |e: &str| {
        elements
            .iter()
            .position(|x| x == e)
            .ok_or_else(|| DocumentError::Directive(format!("unknown poset element `{e}`")))
    };
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (x, y) in relation {
        leq[idx(x)? * n + idx(y)?] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + k] && leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i * n + j] && leq[j * n + i] {
                return Err(DocumentError::Directive(format!(
                    "relation is not antisymmetric at ({}, {})",
                    elements[i], elements[j]
                )));
            }
        }
    }
    let mut raw = RawCategory {
        objects: elements.to_vec(),
        ..RawCategory::default()
    };
    for i in 0..n {
        raw.identities.push((elements[i].clone(), quantale_arrow(&elements[i], &elements[i])));
        for j in 0..n {
            if !leq[i * n + j] {
                continue;
            }
            raw.morphisms.push(RawMorphism::new(
                quantale_arrow(&elements[i], &elements[j]),
                elements[i].clone(),
                elements[j].clone(),
            ));
            for k in 0..n {
                if leq[j * n + k] {
                    raw.composition.push((
                        quantale_arrow(&elements[j], &elements[k]),
                        quantale_arrow(&elements[i], &elements[j]),
                        quantale_arrow(&elements[i], &elements[k]),
                    ));
                }
            }
        }
    }
    Ok(FinCategory::validate(&raw)?)
}

/// The Boolean quantale `{0 < 1}` with `∧`.
pub fn boolean_base() -> Arc<MonoidalClosed> {
    Arc::new(quantale_to_v(&chain_quantale(2, ChainTensor::Min)).expect("Boolean quantale"))
}

/// A poset as a category enriched in the Boolean quantale, with its forced
/// tensors and cotensors.
pub fn boolean_poset(elements: &[String], relation: &[(String, String)]) -> Result<EnrichedCategory, DocumentError> {
    let thin = poset_category(elements, relation)?;
    let v = boolean_base();
    let raw = RawEnriched {
        objects: elements.to_vec(),
        hom: thin
            .object_ids()
            .flat_map(|a| {
                let thin = &thin;
                thin.object_ids().map(move |b| {
                    let truth = if thin.hom(a, b).is_empty() { "0" } else { "1" };
                    (
                        thin.object_name(a).to_string(),
                        thin.object_name(b).to_string(),
                        truth.to_string(),
                    )
                })
            })
            .collect(),
        ..RawEnriched::default()
    };
    let mut b = EnrichedCategory::from_tables(v, &raw)?;
    b.derive_forced_tensors();
    Ok(b)
}

fn chain_elements(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn chain_relation(n: usize) -> Vec<(String, String)> {
    (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect()
}

/// The `n`-chain `0 ≤ 1 ≤ … ≤ n-1` enriched in the Boolean quantale.
pub fn chain_over_boolean(n: usize) -> EnrichedCategory {
    boolean_poset(&chain_elements(n), &chain_relation(n)).expect("chains are posets")
}

/// The `n`-chain as a plain category.
pub fn chain_category(n: usize) -> FinCategory {
    poset_category(&chain_elements(n), &chain_relation(n)).expect("chains are posets")
}

pub fn chain_base(n: usize, tensor: TensorOp) -> Arc<MonoidalClosed> {
    let t = match tensor {
        TensorOp::Min => ChainTensor::Min,
        TensorOp::Lukasiewicz => ChainTensor::Lukasiewicz,
    };
    Arc::new(quantale_to_v(&chain_quantale(n, t)).expect("chain quantales are valid"))
}

/// A chain quantale enriched in itself.
pub fn self_enriched_chain(n: usize, tensor: TensorOp) -> EnrichedCategory {
    EnrichedCategory::self_enriched(chain_base(n, tensor)).expect("self-enrichment is valid")
}

pub fn walking_arrow() -> FinCategory {
    let mut raw = RawCategory {
        objects: vec!["0".into(), "1".into()],
        morphisms: vec![
            RawMorphism::new("id0", "0", "0"),
            RawMorphism::new("id1", "1", "1"),
            RawMorphism::new("a", "0", "1"),
        ],
        identities: vec![("0".into(), "id0".into()), ("1".into(), "id1".into())],
        composition: Vec::new(),
    };
    fill_identity_composites(&mut raw);
    FinCategory::validate(&raw).expect("walking arrow")
}

/// The commutative square `k ∘ g = h ∘ f = d` on objects `a, b, c, d`.
pub fn walking_square() -> FinCategory {
    let mut raw = RawCategory {
        objects: ["a", "b", "c", "d"].map(String::from).to_vec(),
        morphisms: vec![
            RawMorphism::new("f", "a", "b"),
            RawMorphism::new("g", "a", "c"),
            RawMorphism::new("h", "b", "d"),
            RawMorphism::new("k", "c", "d"),
            RawMorphism::new("diag", "a", "d"),
        ],
        identities: Vec::new(),
        composition: vec![
            ("h".into(), "f".into(), "diag".into()),
            ("k".into(), "g".into(), "diag".into()),
        ],
    };
    for o in ["a", "b", "c", "d"] {
        raw.morphisms.push(RawMorphism::new(format!("id_{o}"), o, o));
        raw.identities.push((o.into(), format!("id_{o}")));
    }
    fill_identity_composites(&mut raw);
    FinCategory::validate(&raw).expect("walking square")
}

fn fill_identity_composites(raw: &mut RawCategory) {
    let ids: Vec<(String, String)> = raw.identities.clone();
    let id_of = |o: &str| ids.iter().find(|(x, _)| x == o).map(|(_, m)| m.clone()).expect("identity");
    let mut extra = Vec::new();
    for m in &raw.morphisms {
        let (d, c) = (id_of(&m.dom), id_of(&m.cod));
        if m.id == d {
            extra.push((d.clone(), d.clone(), d.clone()));
            continue;
        }
        extra.push((m.id.clone(), d, m.id.clone()));
        extra.push((c, m.id.clone(), m.id.clone()));
    }
    raw.composition.extend(extra);
}

/// Objects `X, Y, C` with an idempotent `t : Y → Y`, `f : Y → C` absorbing
/// it and `a : X → C`. Nothing maps into both `X` and `Y`, so `a` has no
/// pullback along `f`.
pub fn idempotent_cospan() -> FinCategory {
    let mut raw = RawCategory {
        objects: ["C", "X", "Y"].map(String::from).to_vec(),
        morphisms: vec![
            RawMorphism::new("t", "Y", "Y"),
            RawMorphism::new("f", "Y", "C"),
            RawMorphism::new("a", "X", "C"),
        ],
        identities: Vec::new(),
        composition: vec![("t".into(), "t".into(), "t".into()), ("f".into(), "t".into(), "f".into())],
    };
    for o in ["C", "X", "Y"] {
        raw.morphisms.push(RawMorphism::new(format!("id_{o}"), o, o));
        raw.identities.push((o.into(), format!("id_{o}")));
    }
    fill_identity_composites(&mut raw);
    FinCategory::validate(&raw).expect("idempotent cospan")
}

/// Over the three-element Łukasiewicz chain: `P` maps fully into `X` and
/// `Y`, `A` only to degree ½, and `B(A, P) = 0`. `P` is the ordinary product
/// of `X` and `Y` but `B(A, −)` does not preserve it.
pub fn lukasiewicz_nonlimit() -> EnrichedCategory {
    let v = chain_base(3, TensorOp::Lukasiewicz);
    let objects = ["A", "P", "X", "Y"];
    let degree = |a: &str, b: &str| match (a, b) {
        _ if a == b => "1",
        ("P", "X") | ("P", "Y") => "1",
        ("A", "X") | ("A", "Y") => "1/2",
        _ => "0",
    };
    let raw = RawEnriched {
        objects: objects.map(String::from).to_vec(),
        hom: objects
            .iter()
            .flat_map(|a| objects.iter().map(move |b| (a.to_string(), b.to_string(), degree(a, b).to_string())))
            .collect(),
        ..RawEnriched::default()
    };
    EnrichedCategory::from_tables(v, &raw).expect("valid Łukasiewicz category")
}

fn category_doc(name: Option<&str>, c: &FinCategory) -> Document {
    Document::new(meta(name), Body::Category(c.into()))
}

fn meta(name: Option<&str>) -> Meta {
    match name {
        Some(n) => Meta::named(n),
        None => Meta::default(),
    }
}

fn enriched_doc(name: Option<&str>, b: &EnrichedCategory) -> Document {
    Document::new(meta(name), Body::Enriched(enriched_body(b).expect("table backend")))
}

fn finset_doc(name: Option<&str>, n: usize, opposite: bool) -> Document {
    let b = finset(n);
    let b = if opposite { b.opposite() } else { b };
    Document::new(
        meta(name),
        Body::Enriched(EnrichedBody {
            backend: BackendSpec::Finset(FinsetSpec { max_size: n, opposite }),
            objects: Vec::new(),
            hom: Vec::new(),
            comp: Vec::new(),
            ids: Vec::new(),
            tensors: Vec::new(),
            cotensors: Vec::new(),
            underlying: Some(b.underlying().into()),
        }),
    )
}

/// Expands a generator directive into a concrete document.
pub fn expand(directive: &Directive, name: Option<&str>) -> Result<Document, DocumentError> {
    match directive {
        Directive::Finset { max_size } => {
            if *max_size > 4 {
                return Err(DocumentError::Directive("finset max_size above 4 is not supported".into()));
            }
            Ok(finset_doc(name, *max_size, false))
        }
        Directive::QuantaleChain { n, tensor, enrich } => {
            if *n < 2 || *n > 8 {
                return Err(DocumentError::Directive("quantale_chain needs 2 ≤ n ≤ 8".into()));
            }
            match enrich.as_deref() {
                None => Ok(Document::new(meta(name), Body::Monoidal(monoidal_body(&chain_base(*n, *tensor))))),
                Some("self") => Ok(enriched_doc(name, &self_enriched_chain(*n, *tensor))),
                Some(other) => Err(DocumentError::Directive(format!("unknown enrichment `{other}`"))),
            }
        }
        Directive::Poset {
            elements,
            relation,
            enrich,
        } => {
            let unique: BTreeSet<&String> = elements.iter().collect();
            if unique.len() != elements.len() {
                return Err(DocumentError::Directive("duplicate poset element".into()));
            }
            match enrich.as_deref() {
                None => Ok(category_doc(name, &poset_category(elements, relation)?)),
                Some("boolean") => Ok(enriched_doc(name, &boolean_poset(elements, relation)?)),
                Some(other) => Err(DocumentError::Directive(format!("unknown enrichment `{other}`"))),
            }
        }
        Directive::Walking { shape } => Ok(category_doc(
            name,
            &match shape {
                Shape::Arrow => walking_arrow(),
                Shape::Square => walking_square(),
            },
        )),
        Directive::Opposite { of } => opposite_document(of, name),
    }
}

/// The opposite of a category or enriched document.
pub fn opposite_document(doc: &Document, name: Option<&str>) -> Result<Document, DocumentError> {
    let name = name.or(doc.name());
    match &doc.body {
        Body::Generator(d) => opposite_document(&expand(d, doc.name())?, name),
        Body::Category(c) => Ok(Document::new(meta(name), Body::Category(opposite_body(c)))),
        Body::Monoidal(_) => Err(DocumentError::Directive(
            "the opposite of a monoidal base is not closed in general; generate it with enrich: self".into(),
        )),
        Body::Enriched(e) => match &e.backend {
            BackendSpec::Finset(spec) => Ok(finset_doc(name, spec.max_size, !spec.opposite)),
            BackendSpec::Table(_) => {
                let b = crate::document::load_enriched(e)?;
                let mut body = enriched_body(&b.opposite()).expect("table backend");
                body.underlying = None;
                Ok(Document::new(meta(name), Body::Enriched(body)))
            }
        },
    }
}

/// Reverses every arrow of a category body, keeping IDs.
pub fn opposite_body(c: &CategoryBody) -> CategoryBody {
    CategoryBody {
        objects: c.objects.clone(),
        morphisms: c
            .morphisms
            .iter()
            .map(|m| MorphismSpec {
                id: m.id.clone(),
                dom: m.cod.clone(),
                cod: m.dom.clone(),
            })
            .collect(),
        identities: c.identities.clone(),
        composition: c.composition.iter().map(|(g, f, gf)| (f.clone(), g.clone(), gf.clone())).collect(),
    }
}

/// The documents of the standard corpus, before opposites.
pub fn base_documents() -> Vec<Document> {
    let gen = |name: &str, d: Directive| expand(&d, Some(name)).expect("corpus directive");
    vec![
        gen("walking-arrow", Directive::Walking { shape: Shape::Arrow }),
        gen("walking-square", Directive::Walking { shape: Shape::Square }),
        gen(
            "chain3-boolean",
            Directive::Poset {
                elements: chain_elements(3),
                relation: chain_relation(3),
                enrich: Some("boolean".into()),
            },
        ),
        gen(
            "chain4-boolean",
            Directive::Poset {
                elements: chain_elements(4),
                relation: chain_relation(4),
                enrich: Some("boolean".into()),
            },
        ),
        gen(
            "lukasiewicz3-self",
            Directive::QuantaleChain {
                n: 3,
                tensor: TensorOp::Lukasiewicz,
                enrich: Some("self".into()),
            },
        ),
        gen("finset3", Directive::Finset { max_size: 3 }),
    ]
}

/// The standard corpus: every base document and its opposite.
pub fn standard_documents() -> Vec<Document> {
    let base = base_documents();
    let mut out = Vec::with_capacity(base.len() * 2);
    for d in base {
        let name = format!("{}-op", d.name().unwrap_or("unnamed"));
        let op = opposite_document(&d, Some(&name)).expect("corpus opposites");
        out.push(d);
        out.push(op);
    }
    out
}

/// Loaded standard corpus as `(name, category)` pairs.
pub fn standard_corpus() -> Vec<(String, EnrichedCategory)> {
    standard_documents()
        .into_iter()
        .map(|d| {
            let name = d.name().unwrap_or("unnamed").to_string();
            let b = crate::document::load(&d).expect("corpus loads").into_enriched();
            (name, b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finset_three_has_sixty_morphisms() {
        // Σ_{a,b ≤ 3} b^a
        let expected: usize = (0..=3u32).flat_map(|a| (0..=3usize).map(move |b| b.pow(a))).sum();
        assert_eq!(expected, 60);
        let b = finset(3);
        assert_eq!(b.underlying().object_count(), 4);
        assert_eq!(b.underlying().morphism_count(), expected);
    }

    #[test]
    fn chain_three_has_six_morphisms() {
        let c = chain_category(3);
        let brute = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|(a, b)| a <= b).count();
        assert_eq!(c.morphism_count(), brute);
    }

    #[test]
    fn finset_tensors_cover_small_products() {
        let b = finset(3);
        // v·a exists iff v·a ≤ 3: 16 pairs minus (2,2),(2,3),(3,2),(3,3).
        assert_eq!(b.tensors().len(), 12);
        // a^v exists iff a^v ≤ 3.
        let powers = (0..=3u32)
            .flat_map(|v| (0..=3u64).map(move |a| a.pow(v)))
            .filter(|&p| p <= 3)
            .count();
        assert_eq!(b.cotensors().len(), powers);
    }

    #[test]
    fn opposite_is_an_involution_on_documents() {
        for d in base_documents() {
            let op = opposite_document(&d, None).unwrap();
            let back = opposite_document(&op, d.name()).unwrap();
            assert_eq!(crate::document::serialize(&back), crate::document::serialize(&d), "{:?}", d.name());
        }
    }
}
