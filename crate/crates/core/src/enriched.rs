//! Categories enriched in a finite monoidal closed `V`.
//!
//! Two backends sit behind [`EnrichedCategory`]:
//!
//! * `Table`: hom-objects are objects of an explicit [`MonoidalClosed`] base,
//!   composition and identities are `V`-morphisms. The underlying ordinary
//!   category is derived from the points `I → B(A, B)`.
//! * `Sets`: an ordinary finite category regarded as enriched in finite sets.
//!   Hom-objects are the literal hom-sets and `V` is never materialized; this
//!   is how truncated `FinSet` is handled, since it is not closed as a table.
//!
//! Underlying morphism IDs of a table backend are derived from the tables:
//! `A->B` when `B(A, B)` has a single point, `A->B|p` otherwise.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{
    CategoryError, Cone, Diagram, DiagramEdge, FinCategory, LimitError, MorId, MorphismFlags, ObjId, RawCategory,
    RawMorphism,
};
use crate::monoidal::MonoidalClosed;
use crate::ortho::OrthoRelation;
use crate::verdict::{Evidence, Realm, Reason, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichedError {
    #[error("duplicate ID `{0}`")]
    DuplicateId(String),
    #[error("dangling reference `{id}` in {context}")]
    DanglingVRef { id: String, context: String },
    #[error("enriched associativity fails at ({a}, {b}, {c}, {d})")]
    EnrichedAssocViolation { a: String, b: String, c: String, d: String },
    #[error("enriched unit law fails at ({a}, {b})")]
    EnrichedUnitViolation { a: String, b: String },
    #[error("underlying category is invalid: {0}")]
    Underlying(#[from] CategoryError),
    #[error("{kind} data for ({v}, {a}) is invalid: {detail}")]
    InvalidTensor {
        kind: &'static str,
        v: String,
        a: String,
        detail: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("family member is not a V-mono into the codomain")]
    FamilyNotMono { morphism: MorId },
    #[error("the ordinary fibre product exists but is not a V-limit")]
    NoVLimit { cone: Cone, verdict: Box<Verdict> },
}

/// Raw table-backend data by string ID.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawEnriched {
    pub objects: Vec<String>,
    /// `(a, b, B(a, b))`
    pub hom: Vec<(String, String, String)>,
    /// `(a, b, c, comp : B(b, c) ⊗ B(a, b) → B(a, c))`
    pub comp: Vec<(String, String, String, String)>,
    /// `(a, id_a : I → B(a, a))`
    pub ids: Vec<(String, String)>,
    pub tensors: Vec<RawTensor>,
    pub cotensors: Vec<RawTensor>,
}

/// A claimed (co)tensor `t` of `v` and `a` with its isomorphism components,
/// one per object `b` of the free variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTensor {
    pub v: String,
    pub a: String,
    pub t: String,
    pub iso: Vec<(String, String)>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TensorKind {
    Tensor,
    Cotensor,
}

/// The `V` side of a (co)tensor: an object of the table base, or a finite
/// cardinality for the sets backend.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VObj {
    Object(ObjId),
    Card(usize),
}

/// A validated (co)tensor. For the table backend `structure[b]` is the iso
/// `B(t, b) → [v, B(a, b)]` (tensor) or `B(b, t) → [v, B(b, a)]` (cotensor).
/// For the sets backend `structure` lists the coprojections `a → t`
/// (tensor) or projections `t → a` (cotensor), one per element of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorEntry {
    pub v: VObj,
    pub a: ObjId,
    pub t: ObjId,
    pub structure: Vec<MorId>,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct VFlags {
    pub v_mono: bool,
    pub v_epi: bool,
    pub v_regular_mono: bool,
    pub v_regular_epi: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Variance {
    Co,
    Contra,
}

/// A function between finite hom-sets, listed pointwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetMap {
    pub source: Vec<MorId>,
    pub target: Vec<MorId>,
    pub images: Vec<MorId>,
}

impl SetMap {
    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.images.iter().all(|i| seen.insert(*i))
    }
}

/// Result of [`EnrichedCategory::hom_action`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HomArrow {
    /// A morphism of the base `V`.
    Table(MorId),
    Set(SetMap),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Intersection {
    pub cone: Cone,
    pub morphism: MorId,
}

#[derive(Debug, Clone)]
struct TableData {
    v: Arc<MonoidalClosed>,
    hom: Vec<ObjId>,
    comp: Vec<MorId>,
    ids: Vec<MorId>,
    points: Vec<MorId>,
    point_index: HashMap<(ObjId, ObjId, MorId), MorId>,
}

#[derive(Debug, Clone)]
enum Backend {
    Sets,
    Table(Box<TableData>),
}

#[derive(Debug, Clone)]
pub struct EnrichedCategory {
    underlying: FinCategory,
    backend: Backend,
    tensors: Vec<TensorEntry>,
    cotensors: Vec<TensorEntry>,
    vflags: OnceLock<Vec<VFlags>>,
    pub(crate) ortho_cache: [OnceLock<Arc<OrthoRelation>>; 2],
}

/// A canonical limit cone, or the cone with the verdict showing some
/// `B(a, −)` does not preserve it.
pub type VLimit = Result<Cone, (Cone, Verdict)>;

/// Name of the underlying morphism given by point `p` of `B(a, b)`.
pub fn point_name(a: &str, b: &str, p: &str, unique: bool) -> String {
    if unique {
        format!("{a}->{b}")
    } else {
        format!("{a}->{b}|{p}")
    }
}

impl EnrichedCategory {
    fn assemble(underlying: FinCategory, backend: Backend) -> Self {
        EnrichedCategory {
            underlying,
            backend,
            tensors: Vec::new(),
            cotensors: Vec::new(),
            vflags: OnceLock::new(),
            ortho_cache: Default::default(),
        }
    }

    /// An ordinary category regarded as enriched in finite sets.
    pub fn from_category(cat: FinCategory) -> Self {
        Self::assemble(cat, Backend::Sets)
    }

    /// Sets backend with (co)tensors given by coprojections/projections.
    /// Each entry is checked against the universal property.
    pub fn from_category_with_tensors(
        cat: FinCategory,
        tensors: Vec<TensorEntry>,
        cotensors: Vec<TensorEntry>,
    ) -> Result<Self, EnrichedError> {
        let mut b = Self::from_category(cat);
        b.install_tensors(tensors, cotensors)?;
        Ok(b)
    }

    fn install_tensors(&mut self, tensors: Vec<TensorEntry>, cotensors: Vec<TensorEntry>) -> Result<(), EnrichedError> {
        for (kind, list) in [(TensorKind::Tensor, &tensors), (TensorKind::Cotensor, &cotensors)] {
            for entry in list {
                let verdict = self.check_tensor_entry(kind, entry);
                if !verdict.holds {
                    return Err(EnrichedError::InvalidTensor {
                        kind: kind_name(kind),
                        v: self.vobj_name(entry.v),
                        a: self.underlying.object_name(entry.a).to_string(),
                        detail: format!("{:?}", verdict.reason),
                    });
                }
            }
        }
        self.tensors = tensors;
        self.cotensors = cotensors;
        Ok(())
    }

    /// Validates table data over `v`. Entries of `comp` and `ids` may be
    /// omitted when the required `V`-hom-set has exactly one element.
    pub fn from_tables(v: Arc<MonoidalClosed>, raw: &RawEnriched) -> Result<Self, EnrichedError> {
        let base = v.base();
        let mut objects = raw.objects.clone();
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(EnrichedError::DuplicateId(w[0].clone()));
            }
        }
        let k = objects.len();
        let index: HashMap<&str, ObjId> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), ObjId(i as u32)))
            .collect();
        let obj = |id: &str, ctx: &str| {
            index.get(id).copied().ok_or_else(|| EnrichedError::DanglingVRef {
                id: id.to_string(),
                context: ctx.to_string(),
            })
        };
        let vobj = |id: &str, ctx: &str| {
            base.object_id(id).ok_or_else(|| EnrichedError::DanglingVRef {
                id: id.to_string(),
                context: ctx.to_string(),
            })
        };
        let vmor = |id: &str, ctx: &str| {
            base.morphism_id(id).ok_or_else(|| EnrichedError::DanglingVRef {
                id: id.to_string(),
                context: ctx.to_string(),
            })
        };
        let unset_o = ObjId(u32::MAX);
        let unset_m = MorId(u32::MAX);

        let mut hom = vec![unset_o; k * k];
        for (a, b, h) in &raw.hom {
            let slot = &mut hom[obj(a, "hom")?.index() * k + obj(b, "hom")?.index()];
            if *slot != unset_o {
                return Err(EnrichedError::DuplicateId(format!("hom({a}, {b})")));
            }
            *slot = vobj(h, "hom")?;
        }
        for a in 0..k {
            for b in 0..k {
                if hom[a * k + b] == unset_o {
                    return Err(EnrichedError::DanglingVRef {
                        id: format!("hom({}, {})", objects[a], objects[b]),
                        context: "hom".into(),
                    });
                }
            }
        }
        let h = |a: usize, b: usize| hom[a * k + b];

        let mut comp = vec![unset_m; k * k * k];
        for (a, b, c, m) in &raw.comp {
            let (a, b, c) = (obj(a, "comp")?, obj(b, "comp")?, obj(c, "comp")?);
            let slot = &mut comp[(a.index() * k + b.index()) * k + c.index()];
            if *slot != unset_m {
                return Err(EnrichedError::DuplicateId(format!("comp({a:?}, {b:?}, {c:?})")));
            }
            *slot = vmor(m, "comp")?;
        }
        let assoc_err = |a: usize, b: usize, c: usize, d: usize| EnrichedError::EnrichedAssocViolation {
            a: objects[a].clone(),
            b: objects[b].clone(),
            c: objects[c].clone(),
            d: objects[d].clone(),
        };
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let dom = v.tensor(h(b, c), h(a, b));
                    let cod = h(a, c);
                    let slot = &mut comp[(a * k + b) * k + c];
                    if *slot != unset_m {
                        if base.dom(*slot) != dom || base.cod(*slot) != cod {
                            return Err(assoc_err(a, b, c, c));
                        }
                        continue;
                    }
                    match base.hom(dom, cod) {
                        [only] => *slot = *only,
                        [] => return Err(assoc_err(a, b, c, c)),
                        _ => {
                            return Err(EnrichedError::DanglingVRef {
                                id: format!("comp({}, {}, {})", objects[a], objects[b], objects[c]),
                                context: "comp".into(),
                            })
                        }
                    }
                }
            }
        }

        let mut ids = vec![unset_m; k];
        for (a, m) in &raw.ids {
            let slot = &mut ids[obj(a, "ids")?.index()];
            if *slot != unset_m {
                return Err(EnrichedError::DuplicateId(format!("ids({a})")));
            }
            *slot = vmor(m, "ids")?;
        }
        for a in 0..k {
            let (dom, cod) = (v.unit(), h(a, a));
            let slot = &mut ids[a];
            let unit_err = || EnrichedError::EnrichedUnitViolation {
                a: objects[a].clone(),
                b: objects[a].clone(),
            };
            if *slot != unset_m {
                if base.dom(*slot) != dom || base.cod(*slot) != cod {
                    return Err(unit_err());
                }
                continue;
            }
            match base.hom(dom, cod) {
                [only] => *slot = *only,
                [] => return Err(unit_err()),
                _ => {
                    return Err(EnrichedError::DanglingVRef {
                        id: format!("ids({})", objects[a]),
                        context: "ids".into(),
                    })
                }
            }
        }
        let cp = |a: usize, b: usize, c: usize| comp[(a * k + b) * k + c];

        for a in 0..k {
            for b in 0..k {
                let id_ab = base.identity(h(a, b));
                let left = base.compose(cp(a, b, b), v.tensor_mor(ids[b], id_ab));
                let right = base.compose(cp(a, a, b), v.tensor_mor(id_ab, ids[a]));
                if left != id_ab || right != id_ab {
                    return Err(EnrichedError::EnrichedUnitViolation {
                        a: objects[a].clone(),
                        b: objects[b].clone(),
                    });
                }
                for c in 0..k {
                    for d in 0..k {
                        let p1 = base.compose(cp(a, c, d), v.tensor_mor(base.identity(h(c, d)), cp(a, b, c)));
                        let p2 = base.compose(cp(a, b, d), v.tensor_mor(cp(b, c, d), id_ab));
                        if p1 != p2 {
                            return Err(assoc_err(a, b, c, d));
                        }
                    }
                }
            }
        }

        let mut b = Self::build_table(v.clone(), objects, hom, comp, ids)?;
        let mut tensors = Vec::new();
        let mut cotensors = Vec::new();
        for (kind, list, out) in [
            (TensorKind::Tensor, &raw.tensors, &mut tensors),
            (TensorKind::Cotensor, &raw.cotensors, &mut cotensors),
        ] {
            for t in list {
                let ctx = kind_name(kind);
                let a = b.object(&t.a, ctx)?;
                let tt = b.object(&t.t, ctx)?;
                let vv = vobj(&t.v, ctx)?;
                let mut structure = vec![unset_m; k];
                for (x, m) in &t.iso {
                    structure[b.object(x, ctx)?.index()] = vmor(m, ctx)?;
                }
                // Absent components are filled when a unique iso exists.
                for x in b.underlying.object_ids() {
                    if structure[x.index()] == unset_m {
                        let (dom, cod) = b.tensor_iso_type(kind, vv, a, tt, x);
                        if let Some(i) = unique_iso(base, dom, cod) {
                            structure[x.index()] = i;
                        } else {
                            return Err(EnrichedError::InvalidTensor {
                                kind: ctx,
                                v: t.v.clone(),
                                a: t.a.clone(),
                                detail: format!("missing component at `{}`", b.underlying.object_name(x)),
                            });
                        }
                    }
                }
                out.push(TensorEntry {
                    v: VObj::Object(vv),
                    a,
                    t: tt,
                    structure,
                });
            }
        }
        b.install_tensors(tensors, cotensors)?;
        Ok(b)
    }

    fn object(&self, id: &str, ctx: &str) -> Result<ObjId, EnrichedError> {
        self.underlying.object_id(id).ok_or_else(|| EnrichedError::DanglingVRef {
            id: id.to_string(),
            context: ctx.to_string(),
        })
    }

    fn build_table(
        v: Arc<MonoidalClosed>,
        objects: Vec<String>,
        hom: Vec<ObjId>,
        comp: Vec<MorId>,
        ids: Vec<MorId>,
    ) -> Result<Self, EnrichedError> {
        let base = v.base();
        let k = objects.len();
        let unit = v.unit();
        let mut raw = RawCategory {
            objects: objects.clone(),
            ..RawCategory::default()
        };
        let mut name_of: HashMap<(usize, usize, MorId), String> = HashMap::new();
        for a in 0..k {
            for b in 0..k {
                let pts = base.hom(unit, hom[a * k + b]);
                for &p in pts {
                    let name = point_name(&objects[a], &objects[b], base.morphism_name(p), pts.len() == 1);
                    raw.morphisms.push(RawMorphism::new(name.clone(), objects[a].clone(), objects[b].clone()));
                    name_of.insert((a, b, p), name);
                }
            }
        }
        for a in 0..k {
            raw.identities.push((objects[a].clone(), name_of[&(a, a, ids[a])].clone()));
            for b in 0..k {
                for &f in base.hom(unit, hom[a * k + b]) {
                    for c in 0..k {
                        for &g in base.hom(unit, hom[b * k + c]) {
                            let gf = base.compose(comp[(a * k + b) * k + c], v.tensor_mor(g, f));
                            raw.composition.push((
                                name_of[&(b, c, g)].clone(),
                                name_of[&(a, b, f)].clone(),
                                name_of[&(a, c, gf)].clone(),
                            ));
                        }
                    }
                }
            }
        }
        let underlying = FinCategory::validate(&raw)?;
        let mut points = vec![MorId(u32::MAX); underlying.morphism_count()];
        let mut point_index = HashMap::new();
        for ((a, b, p), name) in &name_of {
            let m = underlying.morphism_id(name).expect("generated name");
            points[m.index()] = *p;
            point_index.insert((ObjId(*a as u32), ObjId(*b as u32), *p), m);
        }
        Ok(Self::assemble(
            underlying,
            Backend::Table(Box::new(TableData {
                v,
                hom,
                comp,
                ids,
                points,
                point_index,
            })),
        ))
    }

    /// `V` enriched in itself: `hom(a, b) = [a, b]`, composition and units
    /// obtained by currying evaluation. Tensors `v ⊗ a` and cotensors
    /// `[v, b]` are installed with their canonical isomorphisms.
    pub fn self_enriched(v: Arc<MonoidalClosed>) -> Result<Self, EnrichedError> {
        let base = v.base();
        let k = base.object_count();
        let objects: Vec<String> = base.object_ids().map(|o| base.object_name(o).to_string()).collect();
        let mut hom = Vec::with_capacity(k * k);
        for a in base.object_ids() {
            for b in base.object_ids() {
                hom.push(v.hom_obj(a, b));
            }
        }
        let mut comp = Vec::with_capacity(k * k * k);
        for a in base.object_ids() {
            for b in base.object_ids() {
                for c in base.object_ids() {
                    let (bc, ab) = (v.hom_obj(b, c), v.hom_obj(a, b));
                    let x = v.tensor(bc, ab);
                    let body = base.compose(v.ev(b, c), v.tensor_mor(base.identity(bc), v.ev(a, b)));
                    comp.push(v.curry(x, a, body));
                }
            }
        }
        let ids: Vec<MorId> = base
            .object_ids()
            .map(|a| v.curry(v.unit(), a, base.identity(a)))
            .collect();
        let mut b = Self::build_table(v.clone(), objects, hom, comp, ids)?;
        let mut tensors = Vec::new();
        let mut cotensors = Vec::new();
        for vv in base.object_ids() {
            for a in base.object_ids() {
                // [v ⊗ a, x] → [v, [a, x]]
                let t = v.tensor(vv, a);
                let structure = base
                    .object_ids()
                    .map(|x| {
                        let y = v.hom_obj(t, x);
                        let inner = v.curry(v.tensor(y, vv), a, v.ev(t, x));
                        v.curry(y, vv, inner)
                    })
                    .collect();
                tensors.push(TensorEntry {
                    v: VObj::Object(vv),
                    a,
                    t,
                    structure,
                });
                // [x, [v, a]] → [v, [x, a]]
                let t = v.hom_obj(vv, a);
                let structure = base
                    .object_ids()
                    .map(|x| {
                        let y = v.hom_obj(x, t);
                        let body = base.compose(
                            v.ev(vv, a),
                            base.compose(
                                v.tensor_mor(v.ev(x, t), base.identity(vv)),
                                v.tensor_mor(base.identity(y), v.symmetry(vv, x)),
                            ),
                        );
                        let inner = v.curry(v.tensor(y, vv), x, body);
                        v.curry(y, vv, inner)
                    })
                    .collect();
                cotensors.push(TensorEntry {
                    v: VObj::Object(vv),
                    a,
                    t,
                    structure,
                });
            }
        }
        b.install_tensors(tensors, cotensors)?;
        Ok(b)
    }

    /// Installs every (co)tensor whose isomorphism components are forced:
    /// for each `(v, a)` the least object `t` such that each component
    /// hom-set of `V` contains exactly one isomorphism, and the resulting
    /// family is natural. Pairs without such a `t` stay uncovered.
    pub fn derive_forced_tensors(&mut self) {
        let Backend::Table(data) = &self.backend else {
            return;
        };
        let v = data.v.clone();
        let base = v.base();
        let mut found = [Vec::new(), Vec::new()];
        for (slot, kind) in [TensorKind::Tensor, TensorKind::Cotensor].into_iter().enumerate() {
            for vv in base.object_ids() {
                for a in self.underlying.object_ids() {
                    for t in self.underlying.object_ids() {
                        let structure: Option<Vec<MorId>> = self
                            .underlying
                            .object_ids()
                            .map(|x| {
                                let (dom, cod) = self.tensor_iso_type(kind, vv, a, t, x);
                                unique_iso(base, dom, cod)
                            })
                            .collect();
                        let Some(structure) = structure else { continue };
                        let entry = TensorEntry {
                            v: VObj::Object(vv),
                            a,
                            t,
                            structure,
                        };
                        if self.check_tensor_entry(kind, &entry).holds {
                            found[slot].push(entry);
                            break;
                        }
                    }
                }
            }
        }
        let [t, c] = found;
        self.tensors = t;
        self.cotensors = c;
    }

    /// Domain and codomain in `V` of the (co)tensor component at `x`.
    fn tensor_iso_type(&self, kind: TensorKind, vv: ObjId, a: ObjId, t: ObjId, x: ObjId) -> (ObjId, ObjId) {
        let data = self.table().expect("table backend");
        match kind {
            TensorKind::Tensor => (self.hom_object(t, x), data.v.hom_obj(vv, self.hom_object(a, x))),
            TensorKind::Cotensor => (self.hom_object(x, t), data.v.hom_obj(vv, self.hom_object(x, a))),
        }
    }

    fn table(&self) -> Option<&TableData> {
        match &self.backend {
            Backend::Table(d) => Some(d),
            Backend::Sets => None,
        }
    }

    pub fn underlying(&self) -> &FinCategory {
        &self.underlying
    }

    pub fn is_table(&self) -> bool {
        self.table().is_some()
    }

    /// The base `V` of a table backend.
    pub fn base(&self) -> Option<&Arc<MonoidalClosed>> {
        self.table().map(|d| &d.v)
    }

    pub fn tensors(&self) -> &[TensorEntry] {
        &self.tensors
    }

    pub fn cotensors(&self) -> &[TensorEntry] {
        &self.cotensors
    }

    pub fn identity_hash(&self) -> &str {
        self.underlying.identity_hash()
    }

    /// `B(a, b)` as an object of `V` (table backend only).
    pub fn hom_object(&self, a: ObjId, b: ObjId) -> ObjId {
        let d = self.table().expect("table backend");
        d.hom[a.index() * self.underlying.object_count() + b.index()]
    }

    /// `comp_{a,b,c}` (table backend only).
    pub fn comp(&self, a: ObjId, b: ObjId, c: ObjId) -> MorId {
        let d = self.table().expect("table backend");
        let k = self.underlying.object_count();
        d.comp[(a.index() * k + b.index()) * k + c.index()]
    }

    /// `id_a : I → B(a, a)` (table backend only).
    pub fn unit_point(&self, a: ObjId) -> MorId {
        self.table().expect("table backend").ids[a.index()]
    }

    /// The point `I → B(dom f, cod f)` of an underlying morphism.
    pub fn point(&self, f: MorId) -> MorId {
        self.table().expect("table backend").points[f.index()]
    }

    /// The underlying morphism `a → b` given by point `p`.
    pub fn from_point(&self, a: ObjId, b: ObjId, p: MorId) -> Option<MorId> {
        self.table()?.point_index.get(&(a, b, p)).copied()
    }

    /// `B(a, f)` (covariant) as a `V`-morphism; table backend only.
    pub fn cov(&self, a: ObjId, f: MorId) -> MorId {
        let d = self.table().expect("table backend");
        let u = &self.underlying;
        let (b1, b2) = (u.dom(f), u.cod(f));
        let base = d.v.base();
        base.compose(
            self.comp(a, b1, b2),
            d.v.tensor_mor(self.point(f), base.identity(self.hom_object(a, b1))),
        )
    }

    /// `B(f, a)` (contravariant) as a `V`-morphism; table backend only.
    pub fn contra(&self, f: MorId, a: ObjId) -> MorId {
        let d = self.table().expect("table backend");
        let u = &self.underlying;
        let (b1, b2) = (u.dom(f), u.cod(f));
        let base = d.v.base();
        base.compose(
            self.comp(b1, b2, a),
            d.v.tensor_mor(base.identity(self.hom_object(b2, a)), self.point(f)),
        )
    }

    /// The action of `f` on hom-objects, covariant `B(a, f)` or
    /// contravariant `B(f, a)`.
    pub fn hom_action(&self, a: ObjId, f: MorId, variance: Variance) -> HomArrow {
        let u = &self.underlying;
        match (&self.backend, variance) {
            (Backend::Table(_), Variance::Co) => HomArrow::Table(self.cov(a, f)),
            (Backend::Table(_), Variance::Contra) => HomArrow::Table(self.contra(f, a)),
            (Backend::Sets, Variance::Co) => {
                let source = u.hom(a, u.dom(f)).to_vec();
                let images = source.iter().map(|&x| u.compose(f, x)).collect();
                HomArrow::Set(SetMap {
                    source,
                    target: u.hom(a, u.cod(f)).to_vec(),
                    images,
                })
            }
            (Backend::Sets, Variance::Contra) => {
                let source = u.hom(u.cod(f), a).to_vec();
                let images = source.iter().map(|&x| u.compose(x, f)).collect();
                HomArrow::Set(SetMap {
                    source,
                    target: u.hom(u.dom(f), a).to_vec(),
                    images,
                })
            }
        }
    }

    fn compute_vflags(&self) -> Vec<VFlags> {
        let u = &self.underlying;
        let regular_monos = regular_monos_of(self);
        let op = self.opposite();
        let regular_epis = regular_monos_of(&op);
        u.morphism_ids()
            .map(|f| {
                let (v_mono, v_epi) = match self.table() {
                    None => {
                        let fl = u.flags(f);
                        (fl.mono, fl.epi)
                    }
                    Some(d) => {
                        let base = d.v.base();
                        (
                            u.object_ids().all(|a| base.flags(self.cov(a, f)).mono),
                            u.object_ids().all(|a| base.flags(self.contra(f, a)).mono),
                        )
                    }
                };
                VFlags {
                    v_mono,
                    v_epi,
                    v_regular_mono: regular_monos[f.index()],
                    v_regular_epi: regular_epis[f.index()],
                }
            })
            .collect()
    }

    /// `V`-mono, `V`-epi and `V`-regular flags (cached).
    pub fn v_flags(&self, f: MorId) -> VFlags {
        self.vflags.get_or_init(|| self.compute_vflags())[f.index()]
    }

    pub fn flags(&self, f: MorId) -> MorphismFlags {
        self.underlying.flags(f)
    }

    pub fn v_monos(&self) -> Vec<MorId> {
        self.underlying.morphism_ids().filter(|&f| self.v_flags(f).v_mono).collect()
    }

    pub fn v_epis(&self) -> Vec<MorId> {
        self.underlying.morphism_ids().filter(|&f| self.v_flags(f).v_epi).collect()
    }

    /// Decides whether `cone` is a `V`-limit: an ordinary limit whose image
    /// under every `B(a, −)` is a limit in `V`.
    pub fn is_v_limit(&self, diagram: &Diagram, cone: &Cone) -> Result<Verdict, LimitError> {
        let ordinary = self.underlying.is_limit_cone(diagram, cone)?;
        if !ordinary.holds {
            return Ok(ordinary);
        }
        let Some(d) = self.table() else {
            return Ok(ordinary);
        };
        let base = d.v.base();
        for a in self.underlying.object_ids() {
            let image = Diagram::new(
                diagram.nodes.iter().map(|&n| self.hom_object(a, n)).collect(),
                diagram
                    .edges
                    .iter()
                    .map(|e| DiagramEdge {
                        source: e.source,
                        target: e.target,
                        morphism: self.cov(a, e.morphism),
                    })
                    .collect(),
            );
            let image_cone = Cone {
                apex: self.hom_object(a, cone.apex),
                legs: cone.legs.iter().map(|&l| self.cov(a, l)).collect(),
            };
            let verdict = base.is_limit_cone(&image, &image_cone)?;
            if !verdict.holds {
                let detail = match verdict.counterexample {
                    Some(Evidence::Mediators {
                        apex, legs, mediators, ..
                    }) => Evidence::Mediators {
                        realm: Realm::Base,
                        apex,
                        legs,
                        mediators,
                    },
                    Some(other) => other,
                    None => Evidence::Note {
                        text: "image cone is not a limit".into(),
                    },
                };
                return Ok(Verdict::fail(
                    Reason::NotPreserved,
                    Evidence::AtObject {
                        object: a,
                        detail: Box::new(detail),
                    },
                ));
            }
        }
        Ok(Verdict::pass(None))
    }

    /// Canonical ordinary limit of `diagram`, accepted only if it is a
    /// `V`-limit. `Ok(None)`: no ordinary limit. `Err`: ordinary limit exists
    /// but is not preserved by some `B(a, −)`.
    pub fn v_limit(&self, diagram: &Diagram) -> Result<Option<VLimit>, LimitError> {
        let Some(cone) = self.underlying.limit_cone(diagram)? else {
            return Ok(None);
        };
        let verdict = self.is_v_limit(diagram, &cone)?;
        Ok(Some(if verdict.holds { Ok(cone) } else { Err((cone, verdict)) }))
    }

    /// Wide `V`-fibre product of a family of `V`-monos into `codomain`. The
    /// empty family yields `id_codomain`.
    pub fn v_intersection(&self, codomain: ObjId, family: &[MorId]) -> Result<Option<Intersection>, IntersectionError> {
        let u = &self.underlying;
        for &m in family {
            if !u.contains_morphism(m) || u.cod(m) != codomain || !self.v_flags(m).v_mono {
                return Err(IntersectionError::FamilyNotMono { morphism: m });
            }
        }
        if family.is_empty() {
            let id = u.identity(codomain);
            return Ok(Some(Intersection {
                cone: Cone {
                    apex: codomain,
                    legs: vec![id],
                },
                morphism: id,
            }));
        }
        let diagram = Diagram::wide_cospan(u, codomain, family);
        match self.v_limit(&diagram).expect("well-formed wide cospan") {
            None => Ok(None),
            Some(Err((cone, verdict))) => Err(IntersectionError::NoVLimit {
                cone,
                verdict: Box::new(verdict),
            }),
            Some(Ok(cone)) => {
                let morphism = cone.legs[0];
                assert!(self.v_flags(morphism).v_mono, "intersection of V-monos is a V-mono");
                Ok(Some(Intersection { cone, morphism }))
            }
        }
    }

    /// The kernel pair of `f` when it exists and is a `V`-limit.
    pub fn v_kernel_pair(&self, f: MorId) -> Option<(ObjId, MorId, MorId)> {
        let diagram = Diagram::cospan(&self.underlying, f, f);
        match self.v_limit(&diagram).ok()?? {
            Ok(c) => Some((c.apex, c.legs[0], c.legs[1])),
            Err(_) => None,
        }
    }

    /// The opposite enriched category. Underlying IDs and indices are kept.
    pub fn opposite(&self) -> EnrichedCategory {
        let underlying = self.underlying.opposite();
        let backend = match &self.backend {
            Backend::Sets => Backend::Sets,
            Backend::Table(d) => {
                let k = self.underlying.object_count();
                let base = d.v.base();
                let mut hom = vec![ObjId(0); k * k];
                let mut comp = vec![MorId(0); k * k * k];
                for a in 0..k {
                    for b in 0..k {
                        hom[a * k + b] = d.hom[b * k + a];
                    }
                }
                for a in 0..k {
                    for b in 0..k {
                        for c in 0..k {
                            // B^op(b,c) ⊗ B^op(a,b) = B(c,b) ⊗ B(b,a) → B(c,a)
                            let sigma = d.v.symmetry(d.hom[c * k + b], d.hom[b * k + a]);
                            comp[(a * k + b) * k + c] = base.compose(d.comp[(c * k + b) * k + a], sigma);
                        }
                    }
                }
                let point_index = d
                    .point_index
                    .iter()
                    .map(|(&(a, b, p), &m)| ((b, a, p), m))
                    .collect();
                Backend::Table(Box::new(TableData {
                    v: d.v.clone(),
                    hom,
                    comp,
                    ids: d.ids.clone(),
                    points: d.points.clone(),
                    point_index,
                }))
            }
        };
        let mut op = Self::assemble(underlying, backend);
        op.tensors = self.cotensors.clone();
        op.cotensors = self.tensors.clone();
        op
    }

    fn vobj_name(&self, v: VObj) -> String {
        match (v, self.table()) {
            (VObj::Object(o), Some(d)) => d.v.base().object_name(o).to_string(),
            (VObj::Object(o), None) => format!("#{}", o.0),
            (VObj::Card(n), _) => n.to_string(),
        }
    }

    /// Checks one claimed (co)tensor: components are isomorphisms of the
    /// right type and natural in the free variable (table backend), or the
    /// (co)projections exhibit the universal property (sets backend).
    pub fn check_tensor_entry(&self, kind: TensorKind, entry: &TensorEntry) -> Verdict {
        let u = &self.underlying;
        let n = u.object_count();
        let bad_shape = |text: &str| {
            Verdict::fail(
                Reason::NotIso,
                Evidence::Note {
                    text: text.to_string(),
                },
            )
        };
        if !u.contains_object(entry.a) || !u.contains_object(entry.t) {
            return bad_shape("unknown object");
        }
        match (self.table(), entry.v) {
            (Some(d), VObj::Object(vv)) => {
                let base = d.v.base();
                if entry.structure.len() != n {
                    return bad_shape("one component per object required");
                }
                for x in u.object_ids() {
                    let c = entry.structure[x.index()];
                    let (dom, cod) = self.tensor_iso_type(kind, vv, entry.a, entry.t, x);
                    if !base.contains_morphism(c) || base.dom(c) != dom || base.cod(c) != cod || !base.flags(c).iso {
                        return Verdict::fail(
                            Reason::NotIso,
                            Evidence::AtObject {
                                object: x,
                                detail: Box::new(Evidence::Mediators {
                                    realm: Realm::Base,
                                    apex: None,
                                    legs: vec![c],
                                    mediators: vec![],
                                }),
                            },
                        );
                    }
                }
                for g in u.morphism_ids() {
                    let (x, y) = (u.dom(g), u.cod(g));
                    let (lhs, rhs) = match kind {
                        // [v, B(a, g)] ∘ φ_x = φ_y ∘ B(t, g)
                        TensorKind::Tensor => (
                            base.compose(
                                d.v.apply_hom(base.identity(vv), self.cov(entry.a, g)),
                                entry.structure[x.index()],
                            ),
                            base.compose(entry.structure[y.index()], self.cov(entry.t, g)),
                        ),
                        // [v, B(g, a)] ∘ ψ_y = ψ_x ∘ B(g, t)
                        TensorKind::Cotensor => (
                            base.compose(
                                d.v.apply_hom(base.identity(vv), self.contra(g, entry.a)),
                                entry.structure[y.index()],
                            ),
                            base.compose(entry.structure[x.index()], self.contra(g, entry.t)),
                        ),
                    };
                    if lhs != rhs {
                        return Verdict::fail(Reason::NotNatural, Evidence::Morphism { morphism: g });
                    }
                }
                Verdict::pass(None)
            }
            (None, VObj::Card(card)) => {
                if entry.structure.len() != card {
                    return bad_shape("one structure map per element required");
                }
                for &s in &entry.structure {
                    let ok = u.contains_morphism(s)
                        && match kind {
                            TensorKind::Tensor => u.dom(s) == entry.a && u.cod(s) == entry.t,
                            TensorKind::Cotensor => u.dom(s) == entry.t && u.cod(s) == entry.a,
                        };
                    if !ok {
                        return bad_shape("structure map has the wrong type");
                    }
                }
                for x in u.object_ids() {
                    // The comparison map into Set(v, B(a, x)) (resp. B(x, a)).
                    let (source, target_size) = match kind {
                        TensorKind::Tensor => (u.hom(entry.t, x), u.hom(entry.a, x).len()),
                        TensorKind::Cotensor => (u.hom(x, entry.t), u.hom(x, entry.a).len()),
                    };
                    let expected = checked_pow(target_size, card);
                    let mut seen = HashSet::new();
                    let injective = source.iter().all(|&h| {
                        let tuple: Vec<MorId> = entry
                            .structure
                            .iter()
                            .map(|&s| match kind {
                                TensorKind::Tensor => u.compose(h, s),
                                TensorKind::Cotensor => u.compose(s, h),
                            })
                            .collect();
                        seen.insert(tuple)
                    });
                    if !injective || Some(source.len()) != expected {
                        return Verdict::fail(
                            Reason::NotIso,
                            Evidence::AtObject {
                                object: x,
                                detail: Box::new(Evidence::Note {
                                    text: "comparison map is not a bijection".into(),
                                }),
                            },
                        );
                    }
                }
                Verdict::pass(None)
            }
            _ => bad_shape("V-object does not match the backend"),
        }
    }

    /// `v ⊗ f` for `f : a1 → a2` when both tensors are covered.
    pub fn tensor_on(&self, v: VObj, f: MorId) -> Option<MorId> {
        self.induced(TensorKind::Tensor, v, f)
    }

    /// `[v, f]` for `f : b1 → b2` when both cotensors are covered.
    pub fn cotensor_on(&self, v: VObj, f: MorId) -> Option<MorId> {
        self.induced(TensorKind::Cotensor, v, f)
    }

    fn induced(&self, kind: TensorKind, v: VObj, f: MorId) -> Option<MorId> {
        let u = &self.underlying;
        let list = match kind {
            TensorKind::Tensor => &self.tensors,
            TensorKind::Cotensor => &self.cotensors,
        };
        let find = |a: ObjId| list.iter().find(|e| e.v == v && e.a == a);
        let e1 = find(u.dom(f))?;
        let e2 = find(u.cod(f))?;
        let (t1, t2) = (e1.t, e2.t);
        match (self.table(), v) {
            (Some(d), VObj::Object(vv)) => {
                let base = d.v.base();
                let point = match kind {
                    TensorKind::Tensor => {
                        // φ_{a1,t2}(v ⊗ f) = [v, B(f, t2)] ∘ φ_{a2,t2} ∘ id_{t2}
                        let eta = base.compose(e2.structure[t2.index()], self.unit_point(t2));
                        let rhs = base.compose(d.v.apply_hom(base.identity(vv), self.contra(f, t2)), eta);
                        base.compose(base.inverse(e1.structure[t2.index()])?, rhs)
                    }
                    TensorKind::Cotensor => {
                        // ψ2_{t1}([v, f]) = [v, B(t1, f)] ∘ ψ1_{t1} ∘ id_{t1}
                        let eps = base.compose(e1.structure[t1.index()], self.unit_point(t1));
                        let rhs = base.compose(d.v.apply_hom(base.identity(vv), self.cov(t1, f)), eps);
                        base.compose(base.inverse(e2.structure[t1.index()])?, rhs)
                    }
                };
                self.from_point(t1, t2, point)
            }
            (None, VObj::Card(_)) => u.hom(t1, t2).iter().copied().find(|&w| {
                e1.structure.iter().zip(&e2.structure).all(|(&s1, &s2)| match kind {
                    TensorKind::Tensor => u.compose(w, s1) == u.compose(s2, f),
                    TensorKind::Cotensor => u.compose(s2, w) == u.compose(f, s1),
                })
            }),
            _ => None,
        }
    }

    /// All `V`-objects that (co)tensor entries may mention: base objects
    /// (table) or cardinalities `0..=max` (sets).
    pub fn covered_pairs(&self, kind: TensorKind) -> Vec<(VObj, ObjId)> {
        let list = match kind {
            TensorKind::Tensor => &self.tensors,
            TensorKind::Cotensor => &self.cotensors,
        };
        list.iter().map(|e| (e.v, e.a)).collect()
    }

    /// `V`-objects appearing in (co)tensor data.
    pub fn tensor_vobjs(&self) -> Vec<VObj> {
        let mut out: Vec<VObj> = self.tensors.iter().chain(&self.cotensors).map(|e| e.v).collect();
        out.sort_by_key(|v| match v {
            VObj::Object(o) => (0, o.0 as usize),
            VObj::Card(n) => (1, *n),
        });
        out.dedup();
        out
    }

    /// Whether every `(v, a)` has a tensor (resp. cotensor).
    pub fn is_fully_covered(&self, kind: TensorKind) -> bool {
        let covered: HashSet<(VObj, ObjId)> = self.covered_pairs(kind).into_iter().collect();
        match self.table() {
            Some(d) => d.v.base().object_ids().all(|v| {
                self.underlying
                    .object_ids()
                    .all(|a| covered.contains(&(VObj::Object(v), a)))
            }),
            None => false,
        }
    }

    /// Raw tables for serialization (table backend only).
    pub fn to_raw(&self) -> Option<RawEnriched> {
        let d = self.table()?;
        let base = d.v.base();
        let u = &self.underlying;
        let on = |o: ObjId| u.object_name(o).to_string();
        let mut raw = RawEnriched {
            objects: u.object_ids().map(on).collect(),
            ..RawEnriched::default()
        };
        for a in u.object_ids() {
            raw.ids.push((on(a), base.morphism_name(self.unit_point(a)).to_string()));
            for b in u.object_ids() {
                raw.hom.push((on(a), on(b), base.object_name(self.hom_object(a, b)).to_string()));
                for c in u.object_ids() {
                    raw.comp.push((on(a), on(b), on(c), base.morphism_name(self.comp(a, b, c)).to_string()));
                }
            }
        }
        for (list, out) in [(&self.tensors, &mut raw.tensors), (&self.cotensors, &mut raw.cotensors)] {
            for e in list {
                out.push(RawTensor {
                    v: self.vobj_name(e.v),
                    a: on(e.a),
                    t: on(e.t),
                    iso: u
                        .object_ids()
                        .map(|x| (on(x), base.morphism_name(e.structure[x.index()]).to_string()))
                        .collect(),
                });
            }
        }
        Some(raw)
    }
}

fn kind_name(kind: TensorKind) -> &'static str {
    match kind {
        TensorKind::Tensor => "tensor",
        TensorKind::Cotensor => "cotensor",
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut r: usize = 1;
    for _ in 0..exp {
        r = r.checked_mul(base)?;
    }
    Some(r)
}

fn unique_iso(v: &FinCategory, dom: ObjId, cod: ObjId) -> Option<MorId> {
    let mut isos = v.hom(dom, cod).iter().copied().filter(|&m| v.flags(m).iso);
    let first = isos.next()?;
    isos.next().is_none().then_some(first)
}

/// A morphism is a `V`-regular-mono when it is the `V`-equalizer of some
/// parallel pair inside the category.
fn regular_monos_of(b: &EnrichedCategory) -> Vec<bool> {
    let u = b.underlying();
    u.morphism_ids()
        .map(|f| {
            if !u.flags(f).mono {
                return false;
            }
            let (a, c) = (u.dom(f), u.cod(f));
            u.object_ids().any(|z| {
                let maps = u.hom(c, z);
                maps.iter().any(|&x| {
                    maps.iter().any(|&y| {
                        if u.compose(x, f) != u.compose(y, f) {
                            return false;
                        }
                        // f is mono, so it is an equalizer iff it reaches
                        // every equalized map, counted per object.
                        let counts_match = u.object_ids().all(|w| {
                            let eq = u.hom(w, c).iter().filter(|&&p| u.compose(x, p) == u.compose(y, p)).count();
                            eq == u.hom(w, a).len()
                        });
                        if !counts_match {
                            return false;
                        }
                        let diagram = Diagram::parallel_pair(u, x, y);
                        let cone = Cone {
                            apex: a,
                            legs: vec![f, u.compose(x, f)],
                        };
                        b.is_v_limit(&diagram, &cone).map(|v| v.holds).unwrap_or(false)
                    })
                })
            })
        })
        .collect()
}
