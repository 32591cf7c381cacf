//! JSON documents describing categories, monoidal bases, enriched
//! categories and generator directives.
//!
//! Shape: `{"kind": ..., "meta": {"name", "version", "hash"}, "body": ...}`.
//! The canonical form sorts every object key and every ID-keyed array and
//! is written without insignificant whitespace; `meta.hash` is the SHA-256
//! of the canonical form with the hash field removed.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::enriched::{EnrichedCategory, EnrichedError, RawEnriched, RawTensor};
use crate::fincat::{CategoryError, FinCategory, RawCategory, RawMorphism};
use crate::monoidal::{MonoidalClosed, MonoidalError, QuantaleError, RawMonoidal};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("duplicate ID `{0}`")]
    DuplicateId(String),
    #[error("hash mismatch: document says {stated}, content hashes to {actual}")]
    HashMismatch { stated: String, actual: String },
    #[error("invalid category: {0}")]
    Category(CategoryError),
    #[error("invalid monoidal structure: {0}")]
    Monoidal(#[from] MonoidalError),
    #[error("invalid quantale: {0}")]
    Quantale(#[from] QuantaleError),
    #[error("invalid enriched category: {0}")]
    Enriched(EnrichedError),
    #[error("directive error: {0}")]
    Directive(String),
}

impl From<CategoryError> for DocumentError {
    fn from(e: CategoryError) -> Self {
        match e {
            CategoryError::DuplicateId { id } => DocumentError::DuplicateId(id),
            other => DocumentError::Category(other),
        }
    }
}

impl From<EnrichedError> for DocumentError {
    fn from(e: EnrichedError) -> Self {
        match e {
            EnrichedError::DuplicateId(id) => DocumentError::DuplicateId(id),
            EnrichedError::Underlying(c) => c.into(),
            other => DocumentError::Enriched(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_version")]
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hash: Option<String>,
}

fn default_version() -> String {
    FORMAT_VERSION.to_string()
}

impl Default for Meta {
    fn default() -> Self {
        Meta {
            name: None,
            version: default_version(),
            hash: None,
        }
    }
}

impl Meta {
    pub fn named(name: impl Into<String>) -> Self {
        Meta {
            name: Some(name.into()),
            version: default_version(),
            hash: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBody {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidalBody {
    pub category: CategoryBody,
    pub unit: String,
    pub tensor: Vec<(String, String, String)>,
    #[serde(default)]
    pub tensor_mor: Vec<(String, String, String)>,
    #[serde(default)]
    pub symmetry: Vec<(String, String, String)>,
    pub hom: Vec<(String, String, String)>,
    #[serde(default)]
    pub curry: Vec<(String, String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    pub v: String,
    pub a: String,
    pub t: String,
    #[serde(default)]
    pub iso: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinsetSpec {
    pub max_size: usize,
    #[serde(default)]
    pub opposite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendSpec {
    Table(Box<MonoidalBody>),
    Finset(FinsetSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnrichedBody {
    pub backend: BackendSpec,
    #[serde(default)]
    pub objects: Vec<String>,
    #[serde(default)]
    pub hom: Vec<(String, String, String)>,
    #[serde(default)]
    pub comp: Vec<(String, String, String, String)>,
    #[serde(default)]
    pub ids: Vec<(String, String)>,
    #[serde(default)]
    pub tensors: Vec<TensorSpec>,
    #[serde(default)]
    pub cotensors: Vec<TensorSpec>,
    /// Underlying category of a generated backend, checked on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub underlying: Option<CategoryBody>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorOp {
    Min,
    Lukasiewicz,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Arrow,
    Square,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Directive {
    Finset {
        max_size: usize,
    },
    QuantaleChain {
        n: usize,
        tensor: TensorOp,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        enrich: Option<String>,
    },
    Poset {
        elements: Vec<String>,
        relation: Vec<(String, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        enrich: Option<String>,
    },
    Walking {
        shape: Shape,
    },
    Opposite {
        of: Box<Document>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Category(CategoryBody),
    Monoidal(MonoidalBody),
    Enriched(EnrichedBody),
    Generator(Directive),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub meta: Meta,
    pub body: Body,
}

impl Document {
    pub fn new(meta: Meta, body: Body) -> Self {
        Document { meta, body }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Category(_) => "category",
            Body::Monoidal(_) => "monoidal",
            Body::Enriched(_) => "enriched",
            Body::Generator(_) => "generator",
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.meta.name.as_deref()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: String,
    #[serde(default)]
    meta: Meta,
    body: serde_json::Value,
}

impl Serialize for Document {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let canon = canonical_value(self);
        canon.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Document {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        from_value(value).map_err(serde::de::Error::custom)
    }
}

fn schema<E: std::fmt::Display>(path: impl Into<String>, e: E) -> DocumentError {
    DocumentError::Schema {
        path: path.into(),
        message: e.to_string(),
    }
}

fn typed_body<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T, DocumentError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "body".to_string() } else { format!("body.{path}") };
        schema(path, e.into_inner())
    })
}

fn from_value(value: serde_json::Value) -> Result<Document, DocumentError> {
    let env: Envelope = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner())
    })?;
    let body = match env.kind.as_str() {
        "category" => Body::Category(typed_body(env.body)?),
        "monoidal" => Body::Monoidal(typed_body(env.body)?),
        "enriched" => Body::Enriched(typed_body(env.body)?),
        "generator" => Body::Generator(typed_body(env.body)?),
        other => return Err(schema("kind", format!("unknown kind `{other}`"))),
    };
    let doc = Document { meta: env.meta, body };
    if let Some(stated) = &doc.meta.hash {
        let actual = content_hash(&doc);
        if &actual != stated {
            return Err(DocumentError::HashMismatch {
                stated: stated.clone(),
                actual,
            });
        }
    }
    Ok(doc)
}

/// Parses document text. Errors carry a position (syntax) or a path (schema).
pub fn parse(text: &str) -> Result<Document, DocumentError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value(value)
}

fn sort_category(c: &mut CategoryBody) {
    c.objects.sort();
    c.morphisms.sort();
    c.composition.sort();
}

fn sort_monoidal(m: &mut MonoidalBody) {
    sort_category(&mut m.category);
    m.tensor.sort();
    m.tensor_mor.sort();
    m.symmetry.sort();
    m.hom.sort();
    m.curry.sort();
}

fn sorted_body(body: &Body) -> Body {
    let mut body = body.clone();
    match &mut body {
        Body::Category(c) => sort_category(c),
        Body::Monoidal(m) => sort_monoidal(m),
        Body::Enriched(e) => {
            if let BackendSpec::Table(m) = &mut e.backend {
                sort_monoidal(m);
            }
            e.objects.sort();
            e.hom.sort();
            e.comp.sort();
            e.ids.sort();
            for t in e.tensors.iter_mut().chain(e.cotensors.iter_mut()) {
                t.iso.sort();
            }
            e.tensors.sort();
            e.cotensors.sort();
            if let Some(u) = &mut e.underlying {
                sort_category(u);
            }
        }
        Body::Generator(d) => {
            if let Directive::Poset { elements, relation, .. } = d {
                elements.sort();
                relation.sort();
            }
        }
    }
    body
}

fn body_value(body: &Body) -> serde_json::Value {
    let v = match body {
        Body::Category(c) => serde_json::to_value(c),
        Body::Monoidal(m) => serde_json::to_value(m),
        Body::Enriched(e) => serde_json::to_value(e),
        Body::Generator(d) => serde_json::to_value(d),
    };
    v.expect("document bodies serialize")
}

fn unhashed_value(doc: &Document) -> serde_json::Value {
    let meta = Meta {
        hash: None,
        ..doc.meta.clone()
    };
    serde_json::json!({
        "kind": doc.kind(),
        "meta": meta,
        "body": body_value(&sorted_body(&doc.body)),
    })
}

/// SHA-256 (hex) of the canonical form without the hash field.
pub fn content_hash(doc: &Document) -> String {
    let text = serde_json::to_string(&unhashed_value(doc)).expect("serializable");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn canonical_value(doc: &Document) -> serde_json::Value {
    let mut v = unhashed_value(doc);
    v["meta"]["hash"] = serde_json::Value::String(content_hash(doc));
    v
}

/// Canonical text: sorted keys and arrays, compact, with the content hash.
pub fn serialize(doc: &Document) -> String {
    serde_json::to_string(&canonical_value(doc)).expect("serializable")
}

/// Canonical form of a document as a value of the same type.
pub fn canonical(doc: &Document) -> Document {
    Document {
        meta: Meta {
            hash: Some(content_hash(doc)),
            ..doc.meta.clone()
        },
        body: sorted_body(&doc.body),
    }
}

impl From<&CategoryBody> for RawCategory {
    fn from(c: &CategoryBody) -> Self {
        RawCategory {
            objects: c.objects.clone(),
            morphisms: c
                .morphisms
                .iter()
                .map(|m| RawMorphism::new(m.id.clone(), m.dom.clone(), m.cod.clone()))
                .collect(),
            identities: c.identities.iter().map(|(o, m)| (o.clone(), m.clone())).collect(),
            composition: c.composition.clone(),
        }
    }
}

impl From<&FinCategory> for CategoryBody {
    fn from(c: &FinCategory) -> Self {
        let raw = c.to_raw();
        CategoryBody {
            objects: raw.objects,
            morphisms: raw
                .morphisms
                .into_iter()
                .map(|m| MorphismSpec {
                    id: m.id,
                    dom: m.dom,
                    cod: m.cod,
                })
                .collect(),
            identities: raw.identities.into_iter().collect(),
            composition: raw.composition,
        }
    }
}

pub fn monoidal_body(v: &MonoidalClosed) -> MonoidalBody {
    let raw = v.to_raw();
    MonoidalBody {
        category: v.base().into(),
        unit: raw.unit,
        tensor: raw.tensor,
        tensor_mor: raw.tensor_mor,
        symmetry: raw.symmetry,
        hom: raw.hom,
        curry: raw.curry,
    }
}

pub fn enriched_body(b: &EnrichedCategory) -> Option<EnrichedBody> {
    let raw = b.to_raw()?;
    let v = b.base()?;
    let spec = |t: RawTensor| TensorSpec {
        v: t.v,
        a: t.a,
        t: t.t,
        iso: t.iso,
    };
    Some(EnrichedBody {
        backend: BackendSpec::Table(Box::new(monoidal_body(v))),
        objects: raw.objects,
        hom: raw.hom,
        comp: raw.comp,
        ids: raw.ids,
        tensors: raw.tensors.into_iter().map(spec).collect(),
        cotensors: raw.cotensors.into_iter().map(spec).collect(),
        underlying: None,
    })
}

pub fn load_category(body: &CategoryBody) -> Result<FinCategory, DocumentError> {
    Ok(FinCategory::validate(&body.into())?)
}

pub fn load_monoidal(body: &MonoidalBody) -> Result<MonoidalClosed, DocumentError> {
    let base = load_category(&body.category)?;
    let raw = RawMonoidal {
        unit: body.unit.clone(),
        tensor: body.tensor.clone(),
        tensor_mor: body.tensor_mor.clone(),
        symmetry: body.symmetry.clone(),
        hom: body.hom.clone(),
        curry: body.curry.clone(),
    };
    Ok(MonoidalClosed::validate(base, &raw)?)
}

/// What a document denotes once validated.
pub enum Loaded {
    Category(EnrichedCategory),
    Monoidal(Arc<MonoidalClosed>, EnrichedCategory),
    Enriched(EnrichedCategory),
}

impl Loaded {
    /// The enriched category every analysis runs on: a plain category as
    /// enriched in sets, a monoidal base as enriched in itself.
    pub fn enriched(&self) -> &EnrichedCategory {
        match self {
            Loaded::Category(b) | Loaded::Enriched(b) | Loaded::Monoidal(_, b) => b,
        }
    }

    pub fn into_enriched(self) -> EnrichedCategory {
        match self {
            Loaded::Category(b) | Loaded::Enriched(b) | Loaded::Monoidal(_, b) => b,
        }
    }
}

pub fn load_enriched(body: &EnrichedBody) -> Result<EnrichedCategory, DocumentError> {
    let b = match &body.backend {
        BackendSpec::Finset(spec) => {
            if !body.objects.is_empty() || !body.hom.is_empty() || !body.comp.is_empty() || !body.ids.is_empty() {
                return Err(schema("body", "finset backend takes no hom tables"));
            }
            let b = crate::corpus::finset(spec.max_size);
            let b = if spec.opposite { b.opposite() } else { b };
            if let Some(u) = &body.underlying {
                let given = load_category(u)?;
                if given.identity_hash() != b.identity_hash() {
                    return Err(schema("body.underlying", "does not match the generated finset category"));
                }
            }
            b
        }
        BackendSpec::Table(m) => {
            let v = Arc::new(load_monoidal(m)?);
            let raw = RawEnriched {
                objects: body.objects.clone(),
                hom: body.hom.clone(),
                comp: body.comp.clone(),
                ids: body.ids.clone(),
                tensors: body.tensors.iter().map(raw_tensor).collect(),
                cotensors: body.cotensors.iter().map(raw_tensor).collect(),
            };
            let b = EnrichedCategory::from_tables(v, &raw)?;
            if let Some(u) = &body.underlying {
                let given = load_category(u)?;
                if given.identity_hash() != b.identity_hash() {
                    return Err(schema("body.underlying", "does not match the derived underlying category"));
                }
            }
            b
        }
    };
    Ok(b)
}

fn raw_tensor(t: &TensorSpec) -> RawTensor {
    RawTensor {
        v: t.v.clone(),
        a: t.a.clone(),
        t: t.t.clone(),
        iso: t.iso.clone(),
    }
}

/// Validates a document, expanding generator directives first.
pub fn load(doc: &Document) -> Result<Loaded, DocumentError> {
    match &doc.body {
        Body::Category(c) => Ok(Loaded::Category(EnrichedCategory::from_category(load_category(c)?))),
        Body::Monoidal(m) => {
            let v = Arc::new(load_monoidal(m)?);
            let b = EnrichedCategory::self_enriched(v.clone())?;
            Ok(Loaded::Monoidal(v, b))
        }
        Body::Enriched(e) => Ok(Loaded::Enriched(load_enriched(e)?)),
        Body::Generator(d) => load(&crate::corpus::expand(d, doc.meta.name.as_deref())?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W2: &str = r#"{"kind":"category","meta":{"name":"W2"},"body":{
        "objects":["1","0"],
        "morphisms":[{"id":"id1","dom":"1","cod":"1"},{"id":"a","dom":"0","cod":"1"},{"id":"id0","dom":"0","cod":"0"}],
        "identities":{"0":"id0","1":"id1"},
        "composition":[["id1","a","a"],["a","id0","a"],["id0","id0","id0"],["id1","id1","id1"]]}}"#;

    #[test]
    fn round_trip_is_canonical() {
        let doc = parse(W2).unwrap();
        let text = serialize(&doc);
        let again = parse(&text).unwrap();
        assert_eq!(serialize(&again), text);
        assert_eq!(again, canonical(&doc));
        assert!(text.starts_with(r#"{"body":{"composition":[["a","id0","a"]"#));
    }

    #[test]
    fn duplicate_morphism_id_is_reported() {
        let text = W2.replace(r#"{"id":"id1","dom":"1","cod":"1"}"#, r#"{"id":"a","dom":"1","cod":"1"}"#);
        let doc = parse(&text).unwrap();
        assert!(matches!(load(&doc), Err(DocumentError::DuplicateId(id)) if id == "a"));
    }

    #[test]
    fn syntax_and_schema_errors_carry_location() {
        assert!(matches!(parse("{\n  \"kind\": }"), Err(DocumentError::Syntax { line: 2, .. })));
        let bad = W2.replace(r#""dom":"0","cod":"1"}"#, r#""dom":0,"cod":"1"}"#);
        match parse(&bad) {
            Err(DocumentError::Schema { path, .. }) => assert!(path.starts_with("body.morphisms"), "{path}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_hash_is_rejected() {
        let doc = parse(W2).unwrap();
        let text = serialize(&doc).replace(r#""name":"W2""#, r#""name":"W3""#);
        assert!(matches!(parse(&text), Err(DocumentError::HashMismatch { .. })));
    }
}
