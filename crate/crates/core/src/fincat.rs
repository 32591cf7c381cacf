//! Finite categories given by total composition tables.
//!
//! A [`FinCategory`] is validated once, exhaustively, and is immutable
//! afterwards. Objects and morphisms carry opaque string IDs; internally they
//! are addressed by dense indices ([`ObjId`], [`MorId`]) assigned in
//! lexicographic byte order of the IDs, so index order and ID order agree.
//!
//! All existence claims (limits, mediators, inverses) are evaluated inside
//! the supplied category. A finite truncation of a larger category may lack
//! limits that the larger category has; verdicts are about the table at hand.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::verdict::{Evidence, Realm, Reason, Verdict};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ObjId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MorId(pub u32);

impl ObjId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate ID `{id}`")]
    DuplicateId { id: String },
    #[error("dangling ID `{id}` in {context}")]
    DanglingId { id: String, context: String },
    #[error("object `{object}` has no identity morphism")]
    MissingIdentity { object: String },
    #[error("identity violation: `{identity}` against `{morphism}`")]
    IdentityViolation { identity: String, morphism: String },
    #[error("missing composite for composable pair ({g}, {f})")]
    MissingComposite { g: String, f: String },
    #[error("composite given twice for ({g}, {f})")]
    DuplicateComposite { g: String, f: String },
    #[error("composite given for non-composable pair ({g}, {f})")]
    NonComposablePair { g: String, f: String },
    #[error("composite `{composite}` of ({g}, {f}) has the wrong domain or codomain")]
    CompositeTypeMismatch {
        g: String,
        f: String,
        composite: String,
    },
    #[error("associativity fails on ({h}, {g}, {f})")]
    AssociativityViolation { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("square does not commute")]
    NonCommutingSquare,
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("legs do not form a cone over the diagram")]
    NotACone,
}

/// Input form of a category: string IDs, identities, and composition triples
/// `(g, f, g∘f)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: Vec<(String, String)>,
    pub composition: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMorphism {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

impl RawMorphism {
    pub fn new(id: impl Into<String>, dom: impl Into<String>, cod: impl Into<String>) -> Self {
        RawMorphism {
            id: id.into(),
            dom: dom.into(),
            cod: cod.into(),
        }
    }
}

#[derive(Debug, Clone)]
struct MorphismEntry {
    name: String,
    dom: ObjId,
    cod: ObjId,
}

/// Cancellation and invertibility predicates of a single morphism.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct MorphismFlags {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
    pub section: bool,
    pub retraction: bool,
}

/// A square `h ∘ f = k ∘ g` with apex `P = dom f = dom g`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Square {
    pub f: MorId,
    pub g: MorId,
    pub h: MorId,
    pub k: MorId,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiagramEdge {
    pub source: usize,
    pub target: usize,
    pub morphism: MorId,
}

/// A finite diagram: nodes labelled by objects, edges by morphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Diagram {
    pub nodes: Vec<ObjId>,
    pub edges: Vec<DiagramEdge>,
}

impl Diagram {
    pub fn new(nodes: Vec<ObjId>, edges: Vec<DiagramEdge>) -> Self {
        Diagram { nodes, edges }
    }

    pub fn empty() -> Self {
        Diagram::default()
    }

    pub fn discrete(nodes: Vec<ObjId>) -> Self {
        Diagram {
            nodes,
            edges: Vec::new(),
        }
    }

    fn edge(source: usize, target: usize, morphism: MorId) -> DiagramEdge {
        DiagramEdge {
            source,
            target,
            morphism,
        }
    }

    /// `X --h--> Z <--k-- Y` as nodes `[X, Y, Z]`.
    pub fn cospan(cat: &FinCategory, h: MorId, k: MorId) -> Self {
        Diagram {
            nodes: vec![cat.dom(h), cat.dom(k), cat.cod(h)],
            edges: vec![Self::edge(0, 2, h), Self::edge(1, 2, k)],
        }
    }

    /// `f, g : X ⇉ Y` as nodes `[X, Y]`.
    pub fn parallel_pair(cat: &FinCategory, f: MorId, g: MorId) -> Self {
        Diagram {
            nodes: vec![cat.dom(f), cat.cod(f)],
            edges: vec![Self::edge(0, 1, f), Self::edge(0, 1, g)],
        }
    }

    /// Family `m_i : B_i → C` as nodes `[C, B_1, …, B_n]`; the codomain
    /// comes first so the canonical limit minimizes the leg into `C` first.
    pub fn wide_cospan(cat: &FinCategory, codomain: ObjId, family: &[MorId]) -> Self {
        let mut nodes = vec![codomain];
        let mut edges = Vec::with_capacity(family.len());
        for (i, &m) in family.iter().enumerate() {
            nodes.push(cat.dom(m));
            edges.push(Self::edge(i + 1, 0, m));
        }
        Diagram { nodes, edges }
    }
}

/// A cone: apex plus one leg per diagram node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelPair {
    pub apex: ObjId,
    pub pi1: MorId,
    pub pi2: MorId,
}

#[derive(Debug, Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismEntry>,
    identity: Vec<MorId>,
    compose: Vec<u32>,
    hom: Vec<Vec<MorId>>,
    incoming: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
    flags: OnceLock<Vec<MorphismFlags>>,
    hash: OnceLock<String>,
}

const NONE: u32 = u32::MAX;

fn adjacency(morphisms: &[MorphismEntry], n_obj: usize) -> (Vec<Vec<MorId>>, Vec<Vec<MorId>>) {
    let mut incoming = vec![Vec::new(); n_obj];
    let mut outgoing = vec![Vec::new(); n_obj];
    for (i, m) in morphisms.iter().enumerate() {
        incoming[m.cod.index()].push(MorId(i as u32));
        outgoing[m.dom.index()].push(MorId(i as u32));
    }
    (incoming, outgoing)
}

fn sorted_unique(ids: impl Iterator<Item = String>) -> Result<Vec<String>, CategoryError> {
    let mut v: Vec<String> = ids.collect();
    v.sort();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(CategoryError::DuplicateId { id: w[0].clone() });
        }
    }
    Ok(v)
}

impl FinCategory {
    /// Builds a category from raw tables, checking every invariant.
    pub fn validate(raw: &RawCategory) -> Result<Self, CategoryError> {
        let objects = sorted_unique(raw.objects.iter().cloned())?;
        let obj_index: HashMap<String, ObjId> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), ObjId(i as u32)))
            .collect();
        let mut raw_mors: Vec<&RawMorphism> = raw.morphisms.iter().collect();
        raw_mors.sort_by(|a, b| a.id.cmp(&b.id));
        for w in raw_mors.windows(2) {
            if w[0].id == w[1].id {
                return Err(CategoryError::DuplicateId { id: w[0].id.clone() });
            }
        }
        for m in &raw_mors {
            if obj_index.contains_key(&m.id) {
                return Err(CategoryError::DuplicateId { id: m.id.clone() });
            }
        }
        let lookup_obj = |id: &str, ctx: &str| {
            obj_index
                .get(id)
                .copied()
                .ok_or_else(|| CategoryError::DanglingId {
                    id: id.to_string(),
                    context: ctx.to_string(),
                })
        };
        let mut morphisms = Vec::with_capacity(raw_mors.len());
        for m in &raw_mors {
            morphisms.push(MorphismEntry {
                name: m.id.clone(),
                dom: lookup_obj(&m.dom, &format!("domain of `{}`", m.id))?,
                cod: lookup_obj(&m.cod, &format!("codomain of `{}`", m.id))?,
            });
        }
        let mor_index: HashMap<String, MorId> = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.clone(), MorId(i as u32)))
            .collect();
        let lookup_mor = |id: &str, ctx: &str| {
            mor_index
                .get(id)
                .copied()
                .ok_or_else(|| CategoryError::DanglingId {
                    id: id.to_string(),
                    context: ctx.to_string(),
                })
        };

        let n_obj = objects.len();
        let n = morphisms.len();
        let mut identity = vec![None; n_obj];
        for (o, m) in &raw.identities {
            let oi = lookup_obj(o, "identities")?;
            let mi = lookup_mor(m, "identities")?;
            let entry = &morphisms[mi.index()];
            if entry.dom != oi || entry.cod != oi {
                return Err(CategoryError::IdentityViolation {
                    identity: m.clone(),
                    morphism: m.clone(),
                });
            }
            if identity[oi.index()].replace(mi).is_some() {
                return Err(CategoryError::DuplicateId { id: o.clone() });
            }
        }
        let identity: Vec<MorId> = identity
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| CategoryError::MissingIdentity {
                    object: objects[i].clone(),
                })
            })
            .collect::<Result<_, _>>()?;

        let mut compose = vec![NONE; n * n];
        for (g, f, gf) in &raw.composition {
            let gi = lookup_mor(g, "composition")?;
            let fi = lookup_mor(f, "composition")?;
            let ci = lookup_mor(gf, "composition")?;
            if morphisms[fi.index()].cod != morphisms[gi.index()].dom {
                return Err(CategoryError::NonComposablePair {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
            let slot = &mut compose[gi.index() * n + fi.index()];
            if *slot != NONE {
                return Err(CategoryError::DuplicateComposite {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
            *slot = ci.0;
        }

        let mut hom = vec![Vec::new(); n_obj * n_obj];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.dom.index() * n_obj + m.cod.index()].push(MorId(i as u32));
        }

        let (incoming, outgoing) = adjacency(&morphisms, n_obj);
        let cat = FinCategory {
            objects,
            morphisms,
            identity,
            compose,
            hom,
            incoming,
            outgoing,
            obj_index,
            mor_index,
            flags: OnceLock::new(),
            hash: OnceLock::new(),
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        let n = self.morphisms.len();
        // Totality over composable pairs.
        for g in self.morphism_ids() {
            for &f in self.into_object(self.dom(g)) {
                if self.compose[g.index() * n + f.index()] == NONE {
                    return Err(CategoryError::MissingComposite {
                        g: self.morphism_name(g).to_string(),
                        f: self.morphism_name(f).to_string(),
                    });
                }
            }
        }
        // Identity laws come before typing so that a wrong identity composite
        // is reported as such.
        for f in self.morphism_ids() {
            let id_dom = self.identity(self.dom(f));
            let id_cod = self.identity(self.cod(f));
            if self.compose(f, id_dom) != f {
                return Err(CategoryError::IdentityViolation {
                    identity: self.morphism_name(id_dom).to_string(),
                    morphism: self.morphism_name(f).to_string(),
                });
            }
            if self.compose(id_cod, f) != f {
                return Err(CategoryError::IdentityViolation {
                    identity: self.morphism_name(id_cod).to_string(),
                    morphism: self.morphism_name(f).to_string(),
                });
            }
        }
        for g in self.morphism_ids() {
            for &f in self.into_object(self.dom(g)) {
                let c = self.compose(g, f);
                if self.dom(c) != self.dom(f) || self.cod(c) != self.cod(g) {
                    return Err(CategoryError::CompositeTypeMismatch {
                        g: self.morphism_name(g).to_string(),
                        f: self.morphism_name(f).to_string(),
                        composite: self.morphism_name(c).to_string(),
                    });
                }
            }
        }
        for h in self.morphism_ids() {
            for &g in self.into_object(self.dom(h)) {
                let hg = self.compose(h, g);
                for &f in self.into_object(self.dom(g)) {
                    if self.compose(h, self.compose(g, f)) != self.compose(hg, f) {
                        return Err(CategoryError::AssociativityViolation {
                            h: self.morphism_name(h).to_string(),
                            g: self.morphism_name(g).to_string(),
                            f: self.morphism_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The opposite category. Names and indices are kept; domains and
    /// codomains swap and the composition table is transposed.
    pub fn opposite(&self) -> FinCategory {
        let n = self.morphisms.len();
        let n_obj = self.objects.len();
        let morphisms: Vec<MorphismEntry> = self
            .morphisms
            .iter()
            .map(|m| MorphismEntry {
                name: m.name.clone(),
                dom: m.cod,
                cod: m.dom,
            })
            .collect();
        let mut compose = vec![NONE; n * n];
        for g in 0..n {
            for f in 0..n {
                compose[g * n + f] = self.compose[f * n + g];
            }
        }
        let mut hom = vec![Vec::new(); n_obj * n_obj];
        for a in 0..n_obj {
            for b in 0..n_obj {
                hom[a * n_obj + b] = self.hom[b * n_obj + a].clone();
            }
        }
        let (incoming, outgoing) = adjacency(&morphisms, n_obj);
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identity: self.identity.clone(),
            compose,
            hom,
            incoming,
            outgoing,
            obj_index: self.obj_index.clone(),
            mor_index: self.mor_index.clone(),
            flags: OnceLock::new(),
            hash: OnceLock::new(),
        }
    }

    pub fn to_raw(&self) -> RawCategory {
        let n = self.morphisms.len();
        let mut composition = Vec::new();
        for g in self.morphism_ids() {
            for &f in self.into_object(self.dom(g)) {
                let c = MorId(self.compose[g.index() * n + f.index()]);
                composition.push((
                    self.morphism_name(g).to_string(),
                    self.morphism_name(f).to_string(),
                    self.morphism_name(c).to_string(),
                ));
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| RawMorphism::new(m.name.clone(), self.object_name(m.dom), self.object_name(m.cod)))
                .collect(),
            identities: self
                .object_ids()
                .map(|o| {
                    (
                        self.object_name(o).to_string(),
                        self.morphism_name(self.identity(o)).to_string(),
                    )
                })
                .collect(),
            composition,
        }
    }

    /// SHA-256 over a canonical line encoding of the tables.
    pub fn identity_hash(&self) -> &str {
        self.hash.get_or_init(|| {
            let mut hasher = Sha256::new();
            let raw = self.to_raw();
            for o in &raw.objects {
                hasher.update(format!("o\t{o}\n"));
            }
            for m in &raw.morphisms {
                hasher.update(format!("m\t{}\t{}\t{}\n", m.id, m.dom, m.cod));
            }
            for (o, m) in &raw.identities {
                hasher.update(format!("i\t{o}\t{m}\n"));
            }
            for (g, f, c) in &raw.composition {
                hasher.update(format!("c\t{g}\t{f}\t{c}\n"));
            }
            hex::encode(hasher.finalize())
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.index()]
    }

    pub fn morphism_name(&self, m: MorId) -> &str {
        &self.morphisms[m.index()].name
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    #[inline]
    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f.index()].dom
    }

    #[inline]
    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f.index()].cod
    }

    #[inline]
    pub fn identity(&self, o: ObjId) -> MorId {
        self.identity[o.index()]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identity(self.dom(f)) == f
    }

    /// `g ∘ f`. Panics if the pair is not composable.
    #[inline]
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        let c = self.compose[g.index() * self.morphisms.len() + f.index()];
        assert!(c != NONE, "compose on non-composable pair");
        MorId(c)
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        Some(self.compose(g, f))
    }

    /// Morphisms `a → b` in ID order.
    #[inline]
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a.index() * self.objects.len() + b.index()]
    }

    /// All morphisms with codomain `c`, in ID order.
    pub fn into_object(&self, c: ObjId) -> &[MorId] {
        &self.incoming[c.index()]
    }

    /// All morphisms with domain `a`, in ID order.
    pub fn out_of_object(&self, a: ObjId) -> &[MorId] {
        &self.outgoing[a.index()]
    }

    pub fn contains_morphism(&self, f: MorId) -> bool {
        f.index() < self.morphisms.len()
    }

    pub fn contains_object(&self, o: ObjId) -> bool {
        o.index() < self.objects.len()
    }

    pub fn isos(&self) -> Vec<MorId> {
        self.morphism_ids().filter(|&f| self.flags(f).iso).collect()
    }

    /// Inverse of `f`, when `f` is an isomorphism.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a).iter().copied().find(|&r| {
            self.compose(r, f) == self.identity(a) && self.compose(f, r) == self.identity(b)
        })
    }

    /// Mono/epi/section/retraction/iso flags, computed by exhaustive
    /// cancellation and inverse search.
    pub fn classify_morphism(&self, f: MorId) -> MorphismFlags {
        let (a, b) = (self.dom(f), self.cod(f));
        let mono = self.object_ids().all(|w| {
            let mut seen = HashSet::new();
            self.hom(w, a).iter().all(|&x| seen.insert(self.compose(f, x)))
        });
        let epi = self.object_ids().all(|z| {
            let mut seen = HashSet::new();
            self.hom(b, z).iter().all(|&y| seen.insert(self.compose(y, f)))
        });
        let back = self.hom(b, a);
        let section = back.iter().any(|&r| self.compose(r, f) == self.identity(a));
        let retraction = back.iter().any(|&s| self.compose(f, s) == self.identity(b));
        let iso = back.iter().any(|&r| {
            self.compose(r, f) == self.identity(a) && self.compose(f, r) == self.identity(b)
        });
        MorphismFlags {
            mono,
            epi,
            iso,
            section,
            retraction,
        }
    }

    /// Cached [`classify_morphism`](Self::classify_morphism).
    pub fn flags(&self, f: MorId) -> MorphismFlags {
        self.flags
            .get_or_init(|| self.morphism_ids().map(|f| self.classify_morphism(f)).collect())[f.index()]
    }

    pub fn check_diagram(&self, diagram: &Diagram) -> Result<(), LimitError> {
        for &o in &diagram.nodes {
            if !self.contains_object(o) {
                return Err(LimitError::MalformedDiagram(format!("unknown object index {}", o.0)));
            }
        }
        for e in &diagram.edges {
            if e.source >= diagram.nodes.len() || e.target >= diagram.nodes.len() {
                return Err(LimitError::MalformedDiagram("edge endpoint out of range".into()));
            }
            if !self.contains_morphism(e.morphism) {
                return Err(LimitError::MalformedDiagram(format!(
                    "unknown morphism index {}",
                    e.morphism.0
                )));
            }
            if self.dom(e.morphism) != diagram.nodes[e.source]
                || self.cod(e.morphism) != diagram.nodes[e.target]
            {
                return Err(LimitError::MalformedDiagram(format!(
                    "edge `{}` does not match its nodes",
                    self.morphism_name(e.morphism)
                )));
            }
        }
        Ok(())
    }

    pub fn is_cone(&self, diagram: &Diagram, cone: &Cone) -> bool {
        cone.legs.len() == diagram.nodes.len()
            && cone
                .legs
                .iter()
                .zip(&diagram.nodes)
                .all(|(&l, &o)| self.contains_morphism(l) && self.dom(l) == cone.apex && self.cod(l) == o)
            && diagram
                .edges
                .iter()
                .all(|e| self.compose(e.morphism, cone.legs[e.source]) == cone.legs[e.target])
    }

    /// Every cone over `diagram` with the given apex (unspecified order).
    pub fn cones_at(&self, diagram: &Diagram, apex: ObjId) -> Vec<Vec<MorId>> {
        let mut out = Vec::new();
        ConeSearch::new(self, diagram).run(apex, &mut |legs| {
            out.push(legs.to_vec());
            true
        });
        out
    }

    pub fn count_cones_at(&self, diagram: &Diagram, apex: ObjId) -> usize {
        let mut count = 0usize;
        ConeSearch::new(self, diagram).run(apex, &mut |_| {
            count += 1;
            true
        });
        count
    }

    /// Decides whether `cone` is a limit of `diagram` by checking, at every
    /// object `X`, that composing with the legs is a bijection from
    /// `hom(X, apex)` onto the cones with apex `X`.
    pub fn is_limit_cone(&self, diagram: &Diagram, cone: &Cone) -> Result<Verdict, LimitError> {
        self.check_diagram(diagram)?;
        if !self.is_cone(diagram, cone) {
            return Err(LimitError::NotACone);
        }
        let search = ConeSearch::new(self, diagram);
        for x in self.object_ids() {
            if let Some(ev) = self.terminality_failure(&search, cone, x) {
                let reason = match &ev {
                    Evidence::Mediators { mediators, .. } if mediators.is_empty() => Reason::NoMediator,
                    _ => Reason::MultipleMediators,
                };
                return Ok(Verdict::fail(reason, ev));
            }
        }
        Ok(Verdict::pass(None))
    }

    fn mediate(&self, cone: &Cone, u: MorId) -> Vec<MorId> {
        cone.legs.iter().map(|&l| self.compose(l, u)).collect()
    }

    fn terminal_at(&self, cone: &Cone, x: ObjId, count: usize) -> bool {
        let hom = self.hom(x, cone.apex);
        if hom.len() != count {
            return false;
        }
        let mut seen = HashSet::with_capacity(hom.len());
        hom.iter().all(|&u| seen.insert(self.mediate(cone, u)))
    }

    fn terminality_failure(&self, search: &ConeSearch<'_>, cone: &Cone, x: ObjId) -> Option<Evidence> {
        let mut cones = Vec::new();
        search.run(x, &mut |legs| {
            cones.push(legs.to_vec());
            true
        });
        if self.terminal_at(cone, x, cones.len()) {
            return None;
        }
        cones.sort();
        let mut by_legs: HashMap<Vec<MorId>, Vec<MorId>> = HashMap::new();
        for &u in self.hom(x, cone.apex) {
            by_legs.entry(self.mediate(cone, u)).or_default().push(u);
        }
        cones.into_iter().find_map(|legs| {
            let mediators = by_legs.get(&legs).cloned().unwrap_or_default();
            (mediators.len() != 1).then_some(Evidence::Mediators {
                realm: Realm::Underlying,
                apex: Some(x),
                legs,
                mediators,
            })
        })
    }

    /// The canonical limit cone of `diagram`, if one exists: least apex ID
    /// among apexes of limit cones, then lexicographically least legs.
    pub fn limit_cone(&self, diagram: &Diagram) -> Result<Option<Cone>, LimitError> {
        self.check_diagram(diagram)?;
        let search = ConeSearch::new(self, diagram);
        let mut per_object: Vec<Vec<Vec<MorId>>> = Vec::with_capacity(self.object_count());
        for x in self.object_ids() {
            let mut cones = Vec::new();
            search.run(x, &mut |legs| {
                cones.push(legs.to_vec());
                true
            });
            per_object.push(cones);
        }
        for p in self.object_ids() {
            // A limit apex P has exactly as many maps X → P as cones at X.
            if !self
                .object_ids()
                .all(|x| self.hom(x, p).len() == per_object[x.index()].len())
            {
                continue;
            }
            let mut candidates = per_object[p.index()].clone();
            candidates.sort();
            for legs in candidates {
                let cone = Cone { apex: p, legs };
                if self
                    .object_ids()
                    .all(|x| self.terminal_at(&cone, x, per_object[x.index()].len()))
                {
                    return Ok(Some(cone));
                }
            }
        }
        Ok(None)
    }

    /// Decides whether a commuting square is a pullback. A counterexample
    /// names an object `W` and a pair `(p, q)` with zero or several mediators.
    pub fn is_pullback_square(&self, sq: &Square) -> Result<Verdict, LimitError> {
        let ok_types = [sq.f, sq.g, sq.h, sq.k].iter().all(|&m| self.contains_morphism(m))
            && self.dom(sq.f) == self.dom(sq.g)
            && self.cod(sq.f) == self.dom(sq.h)
            && self.cod(sq.g) == self.dom(sq.k)
            && self.cod(sq.h) == self.cod(sq.k);
        if !ok_types || self.compose(sq.h, sq.f) != self.compose(sq.k, sq.g) {
            return Err(LimitError::NonCommutingSquare);
        }
        let diagram = Diagram::cospan(self, sq.h, sq.k);
        let cone = Cone {
            apex: self.dom(sq.f),
            legs: vec![sq.f, sq.g, self.compose(sq.h, sq.f)],
        };
        let mut verdict = self.is_limit_cone(&diagram, &cone)?;
        if let Some(Evidence::Mediators { legs, .. }) = verdict.counterexample.as_mut() {
            legs.truncate(2);
        }
        Ok(verdict)
    }

    /// The canonical pullback of `f` and `g` (legs `[π_f, π_g, diagonal]`).
    pub fn pullback(&self, f: MorId, g: MorId) -> Option<Cone> {
        if self.cod(f) != self.cod(g) {
            return None;
        }
        self.limit_cone(&Diagram::cospan(self, f, g)).ok().flatten()
    }

    /// Kernel pair of `f`, when the pullback of `f` along itself exists.
    pub fn kernel_pair(&self, f: MorId) -> Option<KernelPair> {
        self.pullback(f, f).map(|c| KernelPair {
            apex: c.apex,
            pi1: c.legs[0],
            pi2: c.legs[1],
        })
    }
}

impl fmt::Display for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCategory({} objects, {} morphisms)",
            self.object_count(),
            self.morphism_count()
        )
    }
}

/// Backtracking enumeration of cones over a fixed diagram.
///
/// Nodes are visited in an order that maximizes the number of edges to
/// already-assigned nodes; a node reached by an edge from an assigned node
/// has its leg forced by composition instead of enumerated.
struct ConeSearch<'a> {
    cat: &'a FinCategory,
    diagram: &'a Diagram,
    order: Vec<usize>,
    forced: Vec<Option<usize>>,
    checks: Vec<Vec<usize>>,
}

impl<'a> ConeSearch<'a> {
    fn new(cat: &'a FinCategory, diagram: &'a Diagram) -> Self {
        let n = diagram.nodes.len();
        let degree: Vec<usize> = (0..n)
            .map(|i| {
                diagram
                    .edges
                    .iter()
                    .filter(|e| e.source == i || e.target == i)
                    .count()
            })
            .collect();
        let mut assigned = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut forced = Vec::with_capacity(n);
        let mut checks = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&i| !assigned[i])
                .max_by_key(|&i| {
                    let linked = diagram
                        .edges
                        .iter()
                        .filter(|e| {
                            (e.target == i && assigned[e.source]) || (e.source == i && assigned[e.target])
                        })
                        .count();
                    (linked, degree[i], std::cmp::Reverse(i))
                })
                .expect("unassigned node");
            assigned[next] = true;
            let incident: Vec<usize> = diagram
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| {
                    (e.source == next && assigned[e.target]) || (e.target == next && assigned[e.source])
                })
                .map(|(k, _)| k)
                .collect();
            let force = incident.iter().copied().find(|&k| {
                let e = &diagram.edges[k];
                e.target == next && e.source != next
            });
            forced.push(force);
            checks.push(incident.into_iter().filter(|&k| Some(k) != force).collect());
            order.push(next);
        }
        ConeSearch {
            cat,
            diagram,
            order,
            forced,
            checks,
        }
    }

    fn run(&self, apex: ObjId, visit: &mut dyn FnMut(&[MorId]) -> bool) {
        let mut legs = vec![MorId(u32::MAX); self.diagram.nodes.len()];
        self.step(0, apex, &mut legs, visit);
    }

    fn consistent(&self, pos: usize, legs: &[MorId]) -> bool {
        self.checks[pos].iter().all(|&k| {
            let e = &self.diagram.edges[k];
            self.cat.compose(e.morphism, legs[e.source]) == legs[e.target]
        })
    }

    fn step(&self, pos: usize, apex: ObjId, legs: &mut Vec<MorId>, visit: &mut dyn FnMut(&[MorId]) -> bool) -> bool {
        if pos == self.order.len() {
            return visit(legs);
        }
        let node = self.order[pos];
        if let Some(k) = self.forced[pos] {
            let e = &self.diagram.edges[k];
            legs[node] = self.cat.compose(e.morphism, legs[e.source]);
            if self.consistent(pos, legs) && !self.step(pos + 1, apex, legs, visit) {
                return false;
            }
            return true;
        }
        for &leg in self.cat.hom(apex, self.diagram.nodes[node]) {
            legs[node] = leg;
            if self.consistent(pos, legs) && !self.step(pos + 1, apex, legs, visit) {
                return false;
            }
        }
        true
    }
}
