//! Rendering of verdicts and evidence with IDs in place of indices.

use serde_json::{json, Map, Value};

use crate::enriched::{EnrichedCategory, TensorEntry, VObj};
use crate::fincat::{Cone, Diagram, FinCategory, MorId, ObjId};
use crate::ortho::MorphismClass;
use crate::verdict::{Evidence, Realm, Verdict};

/// Resolves indices against the underlying category and, for evidence in
/// the base realm, against `V`.
#[derive(Clone, Copy)]
pub struct Names<'a> {
    pub underlying: &'a FinCategory,
    pub base: Option<&'a FinCategory>,
}

impl<'a> Names<'a> {
    pub fn of(b: &'a EnrichedCategory) -> Self {
        Names {
            underlying: b.underlying(),
            base: b.base().map(|v| v.base()),
        }
    }

    pub fn plain(c: &'a FinCategory) -> Self {
        Names {
            underlying: c,
            base: None,
        }
    }

    fn realm(&self, realm: Realm) -> &'a FinCategory {
        match realm {
            Realm::Base => self.base.unwrap_or(self.underlying),
            Realm::Underlying => self.underlying,
        }
    }

    pub fn mor(&self, f: MorId) -> Value {
        Value::String(self.underlying.morphism_name(f).to_string())
    }

    pub fn obj(&self, o: ObjId) -> Value {
        Value::String(self.underlying.object_name(o).to_string())
    }

    pub fn mors(&self, fs: impl IntoIterator<Item = MorId>) -> Value {
        Value::Array(fs.into_iter().map(|f| self.mor(f)).collect())
    }

    pub fn class(&self, c: &MorphismClass) -> Value {
        self.mors(c.iter())
    }

    pub fn cone(&self, c: &Cone) -> Value {
        cone_in(self.underlying, c)
    }

    pub fn diagram(&self, d: &Diagram) -> Value {
        let c = self.underlying;
        json!({
            "nodes": d.nodes.iter().map(|&o| c.object_name(o)).collect::<Vec<_>>(),
            "edges": d.edges.iter().map(|e| json!({
                "source": e.source,
                "target": e.target,
                "morphism": c.morphism_name(e.morphism),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn tensor(&self, t: &TensorEntry) -> Value {
        let v = match t.v {
            VObj::Object(o) => Value::String(self.realm(Realm::Base).object_name(o).to_string()),
            VObj::Card(n) => json!(n),
        };
        json!({
            "v": v,
            "a": self.obj(t.a),
            "t": self.obj(t.t),
        })
    }

    pub fn evidence(&self, e: &Evidence) -> Value {
        let c = self.underlying;
        let m = |f: MorId| c.morphism_name(f).to_string();
        let mut out = match e {
            Evidence::Morphism { morphism } => json!({ "morphism": m(*morphism) }),
            Evidence::Pair { first, second } => json!({ "first": m(*first), "second": m(*second) }),
            Evidence::Cone { cone } => json!({ "cone": self.cone(cone) }),
            Evidence::Diagram { diagram } => json!({ "diagram": self.diagram(diagram) }),
            Evidence::Mediators {
                realm,
                apex,
                legs,
                mediators,
            } => {
                let r = self.realm(*realm);
                json!({
                    "realm": realm,
                    "apex": apex.map(|a| r.object_name(a).to_string()),
                    "legs": legs.iter().map(|&l| r.morphism_name(l)).collect::<Vec<_>>(),
                    "mediators": mediators.iter().map(|&l| r.morphism_name(l)).collect::<Vec<_>>(),
                })
            }
            Evidence::Lifting { u, v, fillers } => json!({
                "u": m(*u),
                "v": m(*v),
                "fillers": fillers.iter().map(|&w| m(w)).collect::<Vec<_>>(),
            }),
            Evidence::Lifts { lifts } => json!({
                "lifts": lifts.iter().map(|l| json!({ "u": m(l.u), "v": m(l.v), "w": m(l.w) })).collect::<Vec<_>>(),
            }),
            Evidence::Factorization { e, m: mm } => json!({ "e": m(*e), "m": m(*mm) }),
            Evidence::Factorizer { entries } => json!({
                "entries": entries
                    .iter()
                    .map(|&(f, e, mm)| json!({ "morphism": m(f), "e": m(e), "m": m(mm) }))
                    .collect::<Vec<_>>(),
            }),
            Evidence::Misplaced {
                morphism,
                side,
                expected,
            } => json!({ "morphism": m(*morphism), "side": side, "expected": expected }),
            Evidence::IsoComposite {
                side,
                member,
                iso,
                composite,
            } => json!({
                "side": side,
                "member": m(*member),
                "iso": m(*iso),
                "composite": m(*composite),
            }),
            Evidence::AtObject { object, detail } => json!({
                "object": c.object_name(*object),
                "detail": self.evidence(detail),
            }),
            Evidence::ForPair { e, m: mm, detail } => json!({
                "e": m(*e),
                "m": m(*mm),
                "detail": self.evidence(detail),
            }),
            Evidence::Note { text } => json!({ "text": text }),
        };
        let tag = serde_json::to_value(e).ok().and_then(|v| v.get("type").cloned());
        if let (Value::Object(map), Some(tag)) = (&mut out, tag) {
            map.insert("type".into(), tag);
        }
        out
    }

    pub fn verdict(&self, v: &Verdict) -> Value {
        let mut map = Map::new();
        map.insert("holds".into(), json!(v.holds));
        map.insert("reason".into(), json!(v.reason));
        if let Some(w) = &v.witness {
            map.insert("witness".into(), self.evidence(w));
        }
        if let Some(c) = &v.counterexample {
            map.insert("counterexample".into(), self.evidence(c));
        }
        Value::Object(map)
    }
}

pub fn cone_in(c: &FinCategory, cone: &Cone) -> Value {
    json!({
        "apex": c.object_name(cone.apex),
        "legs": cone.legs.iter().map(|&l| c.morphism_name(l)).collect::<Vec<_>>(),
    })
}
