use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Value};

use enrifact::document::{self, Body, Document, DocumentError, Loaded};
use enrifact::factor::{
    canonical_systems, check_fwc, is_factorization_system, CanonicalAttempt, FactorError, Factorizer, MissingLimit,
};
use enrifact::laws::{is_known_law, run_laws, LawOptions};
use enrifact::ortho::{self, is_prefactorization_system, prefactorization_closure};
use enrifact::report::Names;
use enrifact::verdict::Side;
use enrifact::{EnrichedCategory, Mode};

use crate::args::{Command, SideArg};
use crate::classes;

pub enum Failure {
    Io { path: String, message: String },
    Document(DocumentError),
    Usage(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io { .. } | Failure::Document(_) => crate::EXIT_INVALID,
            Failure::Usage(_) => crate::EXIT_USAGE,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Failure::Io { path, message } => json!({ "kind": "io", "path": path, "message": message }),
            Failure::Usage(message) => json!({ "kind": "usage", "message": message }),
            Failure::Document(e) => {
                let mut v = json!({ "message": e.to_string() });
                let kind = match e {
                    DocumentError::Syntax { line, column, .. } => {
                        v["line"] = json!(line);
                        v["column"] = json!(column);
                        "syntax"
                    }
                    DocumentError::Schema { path, .. } => {
                        v["path"] = json!(path);
                        "schema"
                    }
                    DocumentError::DuplicateId(id) => {
                        v["id"] = json!(id);
                        "duplicate_id"
                    }
                    DocumentError::HashMismatch { .. } => "hash_mismatch",
                    DocumentError::Category(_) => "category",
                    DocumentError::Monoidal(_) | DocumentError::Quantale(_) => "monoidal",
                    DocumentError::Enriched(_) => "enriched",
                    DocumentError::Directive(_) => "directive",
                };
                v["kind"] = json!(kind);
                v
            }
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Document(e)
    }
}

/// What a command produced: the result payload, the verdict if the command
/// decides one, and the raw document text for `expand`.
pub struct Outcome {
    pub inputs: Vec<Value>,
    pub result: Value,
    pub holds: Option<bool>,
    pub document: Option<String>,
}

pub fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(document::parse(&text)?)
}

fn input_record(path: &Path, doc: &Document) -> Value {
    json!({
        "path": path.display().to_string(),
        "kind": doc.kind(),
        "name": doc.name(),
        "hash": document::content_hash(doc),
    })
}

fn mode(enriched: bool) -> Mode {
    if enriched {
        Mode::Enriched
    } else {
        Mode::Ordinary
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    let path = cmd.file();
    let doc = read_document(path)?;
    let inputs = vec![input_record(path, &doc)];
    if let Command::Expand { .. } = cmd {
        let expanded = match &doc.body {
            Body::Generator(d) => enrifact::corpus::expand(d, doc.name())?,
            _ => doc.clone(),
        };
        // Validate what was produced before handing it out.
        document::load(&expanded)?;
        return Ok(Outcome {
            inputs,
            result: Value::Null,
            holds: None,
            document: Some(document::serialize(&expanded)),
        });
    }
    let loaded = document::load(&doc)?;
    let b = loaded.enriched();
    let names = Names::of(b);
    let (result, holds) = match cmd {
        Command::Validate { .. } => (validate(&loaded), Some(true)),
        Command::Classify { enriched, .. } => (classify(b, *enriched), None),
        Command::Orth { e, m, enriched, .. } => {
            let (e, m) = (usage(classes::morphism(b, e))?, usage(classes::morphism(b, m))?);
            let md = mode(*enriched);
            let v = ortho::orthogonal(b, e, m, md);
            (
                json!({ "e": names.mor(e), "m": names.mor(m), "mode": md, "verdict": names.verdict(&v) }),
                Some(v.holds),
            )
        }
        Command::Closure {
            seed, side, enriched, ..
        } => {
            let h = usage(classes::resolve(b, seed))?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let md = mode(*enriched);
            let (e, m) = prefactorization_closure(b, &h, side, md);
            let v = is_prefactorization_system(b, &e, &m, md);
            (
                json!({
                    "seed": names.class(&h),
                    "side": side,
                    "mode": md,
                    "left": names.class(&e),
                    "right": names.class(&m),
                    "verdict": names.verdict(&v),
                }),
                Some(v.holds),
            )
        }
        Command::Factorize { g, right_class, .. } => {
            let g = usage(classes::morphism(b, g))?;
            let m = usage(classes::resolve(b, right_class))?;
            let attempt = Factorizer::new(b, &m).and_then(|f| f.factorize(g));
            let mut out = json!({ "g": names.mor(g), "right_class": names.class(&m) });
            match attempt {
                Ok((e, m0)) => {
                    out["e"] = names.mor(e);
                    out["m"] = names.mor(m0);
                    (out, Some(true))
                }
                Err(err) => {
                    out["obstruction"] = factor_error(&names, &err);
                    (out, Some(false))
                }
            }
        }
        Command::CheckSystem {
            left, right, enriched, ..
        } => {
            let e = usage(classes::resolve(b, left))?;
            let m = usage(classes::resolve(b, right))?;
            let md = mode(*enriched);
            let v = is_factorization_system(b, &e, &m, md);
            (
                json!({
                    "left": names.class(&e),
                    "right": names.class(&m),
                    "mode": md,
                    "verdict": names.verdict(&v),
                }),
                Some(v.holds),
            )
        }
        Command::Canonical { .. } => {
            let r = canonical_systems(b);
            let ok = r.epi_strong_mono.succeeded() && r.strong_epi_mono.succeeded();
            (
                json!({
                    "epi_strong_mono": attempt(&names, &r.epi_strong_mono),
                    "strong_epi_mono": attempt(&names, &r.strong_epi_mono),
                    "coincide": r.coincide,
                }),
                Some(ok),
            )
        }
        Command::Laws { law, rng_seed, .. } => {
            let mut opts = LawOptions::default();
            if let Some(s) = rng_seed {
                opts.seed = *s;
            }
            if !law.is_empty() {
                if let Some(bad) = law.iter().find(|l| !is_known_law(l)) {
                    return Err(Failure::Usage(format!("unknown law ID `{bad}`")));
                }
                opts.only = Some(law.iter().cloned().collect::<BTreeSet<_>>());
            }
            let r = run_laws(b, &opts);
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["seed"] = json!(opts.seed);
            (v, Some(r.holds))
        }
        Command::Fwc { .. } => {
            let r = check_fwc(b);
            let missing = r.missing_limit.as_ref().map(|ml| match *ml {
                MissingLimit::Terminal => json!({ "shape": "terminal" }),
                MissingLimit::Product { a, b } => json!({ "shape": "product", "a": names.obj(a), "b": names.obj(b) }),
                MissingLimit::Equalizer { f, g } => json!({ "shape": "equalizer", "f": names.mor(f), "g": names.mor(g) }),
                MissingLimit::Pullback { f, g } => json!({ "shape": "pullback", "f": names.mor(f), "g": names.mor(g) }),
            });
            let holds = r.has_finite_v_limits && r.has_strongmono_v_intersections;
            (
                json!({
                    "has_finite_v_limits": r.has_finite_v_limits,
                    "missing_limit": missing,
                    "has_strongmono_v_intersections": r.has_strongmono_v_intersections,
                    "missing_intersection": r.missing_intersection.map(|(x, y)| names.mors([x, y])),
                    "note": r.note,
                }),
                Some(holds),
            )
        }
        Command::Expand { .. } => unreachable!("handled above"),
    };
    Ok(Outcome {
        inputs,
        result,
        holds,
        document: None,
    })
}

fn usage<T>(r: Result<T, String>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn validate(loaded: &Loaded) -> Value {
    let b = loaded.enriched();
    let u = b.underlying();
    let mut v = json!({
        "objects": u.object_count(),
        "morphisms": u.morphism_count(),
        "identity_hash": b.identity_hash(),
        "backend": if b.is_table() { "table" } else { "sets" },
        "tensors": b.tensors().len(),
        "cotensors": b.cotensors().len(),
    });
    if let Some(base) = b.base() {
        v["base"] = json!({
            "objects": base.base().object_count(),
            "morphisms": base.base().morphism_count(),
        });
    }
    v
}

fn classify(b: &EnrichedCategory, enriched: bool) -> Value {
    let u = b.underlying();
    let names = Names::of(b);
    let rows: Vec<Value> = u
        .morphism_ids()
        .map(|f| {
            let fl = u.flags(f);
            let mut row = json!({
                "id": names.mor(f),
                "dom": names.obj(u.dom(f)),
                "cod": names.obj(u.cod(f)),
                "mono": fl.mono,
                "epi": fl.epi,
                "iso": fl.iso,
                "section": fl.section,
                "retraction": fl.retraction,
            });
            if enriched {
                let vf = b.v_flags(f);
                row["v_mono"] = json!(vf.v_mono);
                row["v_epi"] = json!(vf.v_epi);
                row["v_regular_mono"] = json!(vf.v_regular_mono);
                row["v_regular_epi"] = json!(vf.v_regular_epi);
            }
            row
        })
        .collect();
    json!({ "mode": mode(enriched), "morphisms": rows })
}

fn attempt(names: &Names<'_>, a: &CanonicalAttempt) -> Value {
    let mut v = json!({
        "right_class": names.class(&a.right_class),
        "left_class": a.left_class.as_ref().map(|c| names.class(c)),
        "left_matches_expected": a.left_matches_expected,
        "succeeded": a.succeeded(),
        "factorizations": a.factorizations.iter().map(|&(g, e, m)| json!({
            "morphism": names.mor(g),
            "e": names.mor(e),
            "m": names.mor(m),
        })).collect::<Vec<_>>(),
    });
    if let Some(c) = &a.certification {
        v["certification"] = names.verdict(c);
    }
    if let Some(err) = &a.obstruction {
        v["obstruction"] = factor_error(names, err);
    }
    v
}

fn factor_error(names: &Names<'_>, err: &FactorError) -> Value {
    let mut v = match err {
        FactorError::HypothesisFailed { which, witness } => json!({
            "error": "hypothesis_failed",
            "hypothesis": which,
            "witness": names.evidence(witness),
        }),
        FactorError::InductionFailure { morphism, through } => json!({
            "error": "induction_failure",
            "morphism": names.mor(*morphism),
            "through": names.mor(*through),
        }),
        FactorError::IntersectionMissing { codomain, family } => json!({
            "error": "intersection_missing",
            "codomain": names.obj(*codomain),
            "family": names.mors(family.iter().copied()),
        }),
        FactorError::LeftClassViolation { e, m } => json!({
            "error": "left_class_violation",
            "e": names.mor(*e),
            "m": names.mor(*m),
        }),
    };
    v["message"] = json!(err.to_string());
    v
}
