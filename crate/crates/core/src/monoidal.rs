//! Strict symmetric monoidal closed structure on a finite category, given as
//! tables, and the quantale builder producing thin examples.
//!
//! Closedness is supplied as explicit curry tables
//! `hom(X ⊗ Y, Z) ≅ hom(X, [Y, Z])`, never searched for. Morphism-level
//! entries (`tensor_mor`, `symmetry`, `curry`) may be omitted from the raw
//! tables whenever exactly one morphism of the required type exists, which
//! makes thin examples short to write down.

use std::collections::HashMap;

use thiserror::Error;

use crate::fincat::{CategoryError, FinCategory, MorId, ObjId, RawCategory, RawMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidalError {
    #[error("dangling ID `{id}` in {context}")]
    DanglingId { id: String, context: String },
    #[error("table `{table}` has no entry for {key}")]
    MissingEntry { table: &'static str, key: String },
    #[error("table `{table}` has two entries for {key}")]
    DuplicateEntry { table: &'static str, key: String },
    #[error("table `{table}` entry for {key} has the wrong type")]
    IllTyped { table: &'static str, key: String },
    #[error("unit violation: {0}")]
    UnitViolation(String),
    #[error("associativity of the tensor fails: {0}")]
    AssociatorViolation(String),
    #[error("interchange violation: {0}")]
    InterchangeViolation(String),
    #[error("symmetry component at ({x}, {y}) is not self-inverse")]
    SymmetryNotIso { x: String, y: String },
    #[error("symmetry hexagon fails at ({x}, {y}, {z})")]
    HexagonViolation { x: String, y: String, z: String },
    #[error("curry table at ({x}, {y}, {z}) is not a bijection")]
    CurryNotBijective { x: String, y: String, z: String },
    #[error("naturality of `{table}` fails: {detail}")]
    NaturalityViolation { table: &'static str, detail: String },
}

/// Raw tables, all by string ID.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawMonoidal {
    pub unit: String,
    /// `(x, y, x⊗y)`
    pub tensor: Vec<(String, String, String)>,
    /// `(f, g, f⊗g)`
    pub tensor_mor: Vec<(String, String, String)>,
    /// `(x, y, σ_{x,y} : x⊗y → y⊗x)`
    pub symmetry: Vec<(String, String, String)>,
    /// `(y, z, [y, z])`
    pub hom: Vec<(String, String, String)>,
    /// `(x, y, h : x⊗y → z, curry h : x → [y, z])`
    pub curry: Vec<(String, String, String, String)>,
}

#[derive(Debug, Clone)]
pub struct MonoidalClosed {
    base: FinCategory,
    unit: ObjId,
    tensor_obj: Vec<ObjId>,
    tensor_mor: Vec<MorId>,
    symmetry: Vec<MorId>,
    hom_obj: Vec<ObjId>,
    curry: Vec<MorId>,
    uncurry: Vec<MorId>,
}

const UNSET: MorId = MorId(u32::MAX);

struct Lookup<'a>(&'a FinCategory);

impl Lookup<'_> {
    fn obj(&self, id: &str, context: &str) -> Result<ObjId, MonoidalError> {
        self.0.object_id(id).ok_or_else(|| MonoidalError::DanglingId {
            id: id.to_string(),
            context: context.to_string(),
        })
    }

    fn mor(&self, id: &str, context: &str) -> Result<MorId, MonoidalError> {
        self.0.morphism_id(id).ok_or_else(|| MonoidalError::DanglingId {
            id: id.to_string(),
            context: context.to_string(),
        })
    }
}

impl MonoidalClosed {
    pub fn validate(base: FinCategory, raw: &RawMonoidal) -> Result<Self, MonoidalError> {
        let k = base.object_count();
        let n = base.morphism_count();
        let look = Lookup(&base);
        let unit = look.obj(&raw.unit, "unit")?;

        let mut tensor_obj = vec![ObjId(u32::MAX); k * k];
        for (x, y, t) in &raw.tensor {
            let (x, y, t) = (look.obj(x, "tensor")?, look.obj(y, "tensor")?, look.obj(t, "tensor")?);
            let slot = &mut tensor_obj[x.index() * k + y.index()];
            if slot.0 != u32::MAX {
                return Err(MonoidalError::DuplicateEntry {
                    table: "tensor",
                    key: pair(&base, x, y),
                });
            }
            *slot = t;
        }
        for x in base.object_ids() {
            for y in base.object_ids() {
                if tensor_obj[x.index() * k + y.index()].0 == u32::MAX {
                    return Err(MonoidalError::MissingEntry {
                        table: "tensor",
                        key: pair(&base, x, y),
                    });
                }
            }
        }
        let t_obj = |x: ObjId, y: ObjId| tensor_obj[x.index() * k + y.index()];

        let mut tensor_mor = vec![UNSET; n * n];
        for (f, g, t) in &raw.tensor_mor {
            let (f, g, t) = (
                look.mor(f, "tensor_mor")?,
                look.mor(g, "tensor_mor")?,
                look.mor(t, "tensor_mor")?,
            );
            set_once(&mut tensor_mor[f.index() * n + g.index()], t, "tensor_mor", || {
                mor_pair(&base, f, g)
            })?;
        }
        for f in base.morphism_ids() {
            for g in base.morphism_ids() {
                let dom = t_obj(base.dom(f), base.dom(g));
                let cod = t_obj(base.cod(f), base.cod(g));
                fill_forced(&base, &mut tensor_mor[f.index() * n + g.index()], dom, cod, "tensor_mor", || {
                    mor_pair(&base, f, g)
                })?;
            }
        }

        let mut symmetry = vec![UNSET; k * k];
        for (x, y, s) in &raw.symmetry {
            let (x, y, s) = (look.obj(x, "symmetry")?, look.obj(y, "symmetry")?, look.mor(s, "symmetry")?);
            set_once(&mut symmetry[x.index() * k + y.index()], s, "symmetry", || pair(&base, x, y))?;
        }
        for x in base.object_ids() {
            for y in base.object_ids() {
                fill_forced(&base, &mut symmetry[x.index() * k + y.index()], t_obj(x, y), t_obj(y, x), "symmetry", || {
                    pair(&base, x, y)
                })?;
            }
        }

        let mut hom_obj = vec![ObjId(u32::MAX); k * k];
        for (y, z, h) in &raw.hom {
            let (y, z, h) = (look.obj(y, "hom")?, look.obj(z, "hom")?, look.obj(h, "hom")?);
            let slot = &mut hom_obj[y.index() * k + z.index()];
            if slot.0 != u32::MAX {
                return Err(MonoidalError::DuplicateEntry {
                    table: "hom",
                    key: pair(&base, y, z),
                });
            }
            *slot = h;
        }
        for y in base.object_ids() {
            for z in base.object_ids() {
                if hom_obj[y.index() * k + z.index()].0 == u32::MAX {
                    return Err(MonoidalError::MissingEntry {
                        table: "hom",
                        key: pair(&base, y, z),
                    });
                }
            }
        }

        let mut curry = vec![UNSET; k * k * n];
        for (x, y, h, c) in &raw.curry {
            let (x, y, h, c) = (
                look.obj(x, "curry")?,
                look.obj(y, "curry")?,
                look.mor(h, "curry")?,
                look.mor(c, "curry")?,
            );
            set_once(&mut curry[(x.index() * k + y.index()) * n + h.index()], c, "curry", || {
                format!("({}, {}, {})", base.object_name(x), base.object_name(y), base.morphism_name(h))
            })?;
        }
        for x in base.object_ids() {
            for y in base.object_ids() {
                let xy = t_obj(x, y);
                for &h in base.out_of_object(xy) {
                    let cod = hom_obj[y.index() * k + base.cod(h).index()];
                    fill_forced(&base, &mut curry[(x.index() * k + y.index()) * n + h.index()], x, cod, "curry", || {
                        format!("({}, {}, {})", base.object_name(x), base.object_name(y), base.morphism_name(h))
                    })?;
                }
            }
        }
        // Entries for h whose domain is not x⊗y are meaningless.
        for x in base.object_ids() {
            for y in base.object_ids() {
                for h in base.morphism_ids() {
                    let c = curry[(x.index() * k + y.index()) * n + h.index()];
                    if c != UNSET && base.dom(h) != t_obj(x, y) {
                        return Err(MonoidalError::IllTyped {
                            table: "curry",
                            key: format!("({}, {}, {})", base.object_name(x), base.object_name(y), base.morphism_name(h)),
                        });
                    }
                }
            }
        }

        let mut s = MonoidalClosed {
            base,
            unit,
            tensor_obj,
            tensor_mor,
            symmetry,
            hom_obj,
            curry,
            uncurry: Vec::new(),
        };
        s.check_tensor()?;
        s.check_symmetry()?;
        s.build_uncurry()?;
        s.check_curry_naturality()?;
        Ok(s)
    }

    fn check_tensor(&self) -> Result<(), MonoidalError> {
        let v = &self.base;
        let i = self.unit;
        for x in v.object_ids() {
            if self.tensor(i, x) != x || self.tensor(x, i) != x {
                return Err(MonoidalError::UnitViolation(format!(
                    "unit `{}` does not act trivially on `{}`",
                    v.object_name(i),
                    v.object_name(x)
                )));
            }
            for y in v.object_ids() {
                for z in v.object_ids() {
                    if self.tensor(self.tensor(x, y), z) != self.tensor(x, self.tensor(y, z)) {
                        return Err(MonoidalError::AssociatorViolation(format!(
                            "objects ({}, {}, {})",
                            v.object_name(x),
                            v.object_name(y),
                            v.object_name(z)
                        )));
                    }
                }
            }
        }
        let id_i = v.identity(i);
        for f in v.morphism_ids() {
            if self.tensor_mor(id_i, f) != f || self.tensor_mor(f, id_i) != f {
                return Err(MonoidalError::UnitViolation(format!(
                    "id_I ⊗ `{}` differs from it",
                    v.morphism_name(f)
                )));
            }
        }
        for x in v.object_ids() {
            for y in v.object_ids() {
                if self.tensor_mor(v.identity(x), v.identity(y)) != v.identity(self.tensor(x, y)) {
                    return Err(MonoidalError::InterchangeViolation(format!(
                        "id ⊗ id at ({}, {}) is not an identity",
                        v.object_name(x),
                        v.object_name(y)
                    )));
                }
            }
        }
        for f in v.morphism_ids() {
            for g in v.morphism_ids() {
                let fg = self.tensor_mor(f, g);
                for h in v.morphism_ids() {
                    if self.tensor_mor(fg, h) != self.tensor_mor(f, self.tensor_mor(g, h)) {
                        return Err(MonoidalError::AssociatorViolation(format!(
                            "morphisms ({}, {}, {})",
                            v.morphism_name(f),
                            v.morphism_name(g),
                            v.morphism_name(h)
                        )));
                    }
                }
            }
        }
        for g in v.morphism_ids() {
            for &f in v.into_object(v.dom(g)) {
                for g2 in v.morphism_ids() {
                    for &f2 in v.into_object(v.dom(g2)) {
                        let lhs = self.tensor_mor(v.compose(g, f), v.compose(g2, f2));
                        let rhs = v.compose(self.tensor_mor(g, g2), self.tensor_mor(f, f2));
                        if lhs != rhs {
                            return Err(MonoidalError::InterchangeViolation(format!(
                                "({} ∘ {}) ⊗ ({} ∘ {})",
                                v.morphism_name(g),
                                v.morphism_name(f),
                                v.morphism_name(g2),
                                v.morphism_name(f2)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_symmetry(&self) -> Result<(), MonoidalError> {
        let v = &self.base;
        for x in v.object_ids() {
            for y in v.object_ids() {
                let s = self.symmetry(x, y);
                if v.compose(self.symmetry(y, x), s) != v.identity(self.tensor(x, y)) {
                    return Err(MonoidalError::SymmetryNotIso {
                        x: v.object_name(x).to_string(),
                        y: v.object_name(y).to_string(),
                    });
                }
                for z in v.object_ids() {
                    let lhs = self.symmetry(x, self.tensor(y, z));
                    let rhs = v.compose(
                        self.tensor_mor(v.identity(y), self.symmetry(x, z)),
                        self.tensor_mor(self.symmetry(x, y), v.identity(z)),
                    );
                    if lhs != rhs {
                        return Err(MonoidalError::HexagonViolation {
                            x: v.object_name(x).to_string(),
                            y: v.object_name(y).to_string(),
                            z: v.object_name(z).to_string(),
                        });
                    }
                }
            }
        }
        for f in v.morphism_ids() {
            for g in v.morphism_ids() {
                let lhs = v.compose(self.symmetry(v.cod(f), v.cod(g)), self.tensor_mor(f, g));
                let rhs = v.compose(self.tensor_mor(g, f), self.symmetry(v.dom(f), v.dom(g)));
                if lhs != rhs {
                    return Err(MonoidalError::NaturalityViolation {
                        table: "symmetry",
                        detail: mor_pair(v, f, g),
                    });
                }
            }
        }
        Ok(())
    }

    fn build_uncurry(&mut self) -> Result<(), MonoidalError> {
        let v = &self.base;
        let k = v.object_count();
        let n = v.morphism_count();
        let mut uncurry = vec![UNSET; k * k * k * n];
        for x in v.object_ids() {
            for y in v.object_ids() {
                let xy = self.tensor(x, y);
                for z in v.object_ids() {
                    let yz = self.hom_obj(y, z);
                    let source = v.hom(xy, z);
                    let target = v.hom(x, yz);
                    let bad = || MonoidalError::CurryNotBijective {
                        x: v.object_name(x).to_string(),
                        y: v.object_name(y).to_string(),
                        z: v.object_name(z).to_string(),
                    };
                    if source.len() != target.len() {
                        return Err(bad());
                    }
                    for &h in source {
                        let c = self.curry[(x.index() * k + y.index()) * n + h.index()];
                        if v.dom(c) != x || v.cod(c) != yz {
                            return Err(MonoidalError::IllTyped {
                                table: "curry",
                                key: format!("({}, {}, {})", v.object_name(x), v.object_name(y), v.morphism_name(h)),
                            });
                        }
                        let slot = &mut uncurry[((x.index() * k + y.index()) * k + z.index()) * n + c.index()];
                        if *slot != UNSET {
                            return Err(bad());
                        }
                        *slot = h;
                    }
                }
            }
        }
        self.uncurry = uncurry;
        Ok(())
    }

    fn check_curry_naturality(&self) -> Result<(), MonoidalError> {
        let v = &self.base;
        for x in v.object_ids() {
            for y in v.object_ids() {
                for &h in v.out_of_object(self.tensor(x, y)) {
                    let c = self.curry(x, y, h);
                    let z = v.cod(h);
                    // In x: curry(h ∘ (f ⊗ id_y)) = curry(h) ∘ f.
                    for &f in v.into_object(x) {
                        let x2 = v.dom(f);
                        let lhs = self.curry(x2, y, v.compose(h, self.tensor_mor(f, v.identity(y))));
                        if lhs != v.compose(c, f) {
                            return Err(MonoidalError::NaturalityViolation {
                                table: "curry",
                                detail: format!("in X at ({}, {})", v.morphism_name(h), v.morphism_name(f)),
                            });
                        }
                    }
                    // In z: curry(g ∘ h) = [y, g] ∘ curry(h).
                    for &g in v.out_of_object(z) {
                        let lhs = self.curry(x, y, v.compose(g, h));
                        let rhs = v.compose(self.apply_hom(v.identity(y), g), c);
                        if lhs != rhs {
                            return Err(MonoidalError::NaturalityViolation {
                                table: "curry",
                                detail: format!("in Z at ({}, {})", v.morphism_name(h), v.morphism_name(g)),
                            });
                        }
                    }
                    // In y: curry(h ∘ (id_x ⊗ f)) = [f, z] ∘ curry(h).
                    for &f in v.into_object(y) {
                        let y2 = v.dom(f);
                        let lhs = self.curry(x, y2, v.compose(h, self.tensor_mor(v.identity(x), f)));
                        let rhs = v.compose(self.apply_hom(f, v.identity(z)), c);
                        if lhs != rhs {
                            return Err(MonoidalError::NaturalityViolation {
                                table: "curry",
                                detail: format!("in Y at ({}, {})", v.morphism_name(h), v.morphism_name(f)),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn unit(&self) -> ObjId {
        self.unit
    }

    #[inline]
    pub fn tensor(&self, x: ObjId, y: ObjId) -> ObjId {
        self.tensor_obj[x.index() * self.base.object_count() + y.index()]
    }

    #[inline]
    pub fn tensor_mor(&self, f: MorId, g: MorId) -> MorId {
        self.tensor_mor[f.index() * self.base.morphism_count() + g.index()]
    }

    pub fn symmetry(&self, x: ObjId, y: ObjId) -> MorId {
        self.symmetry[x.index() * self.base.object_count() + y.index()]
    }

    /// Internal hom `[y, z]`.
    #[inline]
    pub fn hom_obj(&self, y: ObjId, z: ObjId) -> ObjId {
        self.hom_obj[y.index() * self.base.object_count() + z.index()]
    }

    /// `curry h : x → [y, z]` for `h : x ⊗ y → z`.
    pub fn curry(&self, x: ObjId, y: ObjId, h: MorId) -> MorId {
        let k = self.base.object_count();
        let c = self.curry[(x.index() * k + y.index()) * self.base.morphism_count() + h.index()];
        assert!(c != UNSET, "curry on ill-typed morphism");
        c
    }

    /// Inverse of [`curry`](Self::curry) at target `z`; the internal hom
    /// need not determine `z`, so it is passed explicitly.
    pub fn uncurry(&self, x: ObjId, y: ObjId, z: ObjId, c: MorId) -> MorId {
        let k = self.base.object_count();
        let h = self.uncurry[((x.index() * k + y.index()) * k + z.index()) * self.base.morphism_count() + c.index()];
        assert!(h != UNSET, "uncurry on ill-typed morphism");
        h
    }

    /// Evaluation `[y, z] ⊗ y → z`.
    pub fn ev(&self, y: ObjId, z: ObjId) -> MorId {
        let yz = self.hom_obj(y, z);
        self.uncurry(yz, y, z, self.base.identity(yz))
    }

    /// `[f, g] : [A, B] → [A', B']` for `f : A' → A`, `g : B → B'`.
    pub fn apply_hom(&self, f: MorId, g: MorId) -> MorId {
        let v = &self.base;
        let (a, b) = (v.cod(f), v.dom(g));
        let ab = self.hom_obj(a, b);
        let body = v.compose(g, v.compose(self.ev(a, b), self.tensor_mor(v.identity(ab), f)));
        self.curry(ab, v.dom(f), body)
    }

    /// Full tables with every forced entry spelled out.
    pub fn to_raw(&self) -> RawMonoidal {
        let v = &self.base;
        let name_o = |o: ObjId| v.object_name(o).to_string();
        let name_m = |m: MorId| v.morphism_name(m).to_string();
        let mut raw = RawMonoidal {
            unit: name_o(self.unit),
            ..RawMonoidal::default()
        };
        for x in v.object_ids() {
            for y in v.object_ids() {
                raw.tensor.push((name_o(x), name_o(y), name_o(self.tensor(x, y))));
                raw.symmetry.push((name_o(x), name_o(y), name_m(self.symmetry(x, y))));
                raw.hom.push((name_o(x), name_o(y), name_o(self.hom_obj(x, y))));
                for &h in v.out_of_object(self.tensor(x, y)) {
                    raw.curry.push((name_o(x), name_o(y), name_m(h), name_m(self.curry(x, y, h))));
                }
            }
        }
        for f in v.morphism_ids() {
            for g in v.morphism_ids() {
                raw.tensor_mor.push((name_m(f), name_m(g), name_m(self.tensor_mor(f, g))));
            }
        }
        raw
    }
}

fn pair(v: &FinCategory, x: ObjId, y: ObjId) -> String {
    format!("({}, {})", v.object_name(x), v.object_name(y))
}

fn mor_pair(v: &FinCategory, f: MorId, g: MorId) -> String {
    format!("({}, {})", v.morphism_name(f), v.morphism_name(g))
}

fn set_once(slot: &mut MorId, value: MorId, table: &'static str, key: impl Fn() -> String) -> Result<(), MonoidalError> {
    if *slot != UNSET {
        return Err(MonoidalError::DuplicateEntry { table, key: key() });
    }
    *slot = value;
    Ok(())
}

/// Checks a given entry's type, or fills an absent one when the hom-set has
/// exactly one element.
fn fill_forced(
    v: &FinCategory,
    slot: &mut MorId,
    dom: ObjId,
    cod: ObjId,
    table: &'static str,
    key: impl Fn() -> String,
) -> Result<(), MonoidalError> {
    if *slot != UNSET {
        if v.dom(*slot) != dom || v.cod(*slot) != cod {
            return Err(MonoidalError::IllTyped { table, key: key() });
        }
        return Ok(());
    }
    match v.hom(dom, cod) {
        [only] => {
            *slot = *only;
            Ok(())
        }
        _ => Err(MonoidalError::MissingEntry { table, key: key() }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaleError {
    #[error("dangling element `{0}`")]
    DanglingElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order is not a partial order at ({0}, {1})")]
    NotPartialOrder(String, String),
    #[error("tensor table has no entry for ({0}, {1})")]
    MissingProduct(String, String),
    #[error("tensor is not commutative at ({0}, {1})")]
    NotCommutative(String, String),
    #[error("tensor is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("unit `{0}` is not a unit for the tensor")]
    NotUnital(String),
    #[error("tensor is not monotone at ({0}, {1}) ≤ ({2}, {3})")]
    NotMonotone(String, String, String, String),
    #[error("no residual {0} ⇒ {1}")]
    NotResiduated(String, String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Monoidal(#[from] MonoidalError),
}

/// A finite commutative residuated ordered monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleSpec {
    pub elements: Vec<String>,
    /// Pairs `(x, y)` with `x ≤ y`; reflexive pairs may be omitted.
    pub order: Vec<(String, String)>,
    /// `(x, y, x ⊗ y)`
    pub tensor: Vec<(String, String, String)>,
    pub unit: String,
}

/// Morphism ID of the unique arrow `x → y` in a thin quantale category.
pub fn quantale_arrow(x: &str, y: &str) -> String {
    format!("{x}<={y}")
}

/// Builds the thin category of a quantale (one arrow `x → y` iff `x ≤ y`)
/// with the induced strict monoidal closed structure.
pub fn quantale_to_v(spec: &QuantaleSpec) -> Result<MonoidalClosed, QuantaleError> {
    let m = spec.elements.len();
    let mut index = HashMap::new();
    for (i, e) in spec.elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(QuantaleError::DuplicateElement(e.clone()));
        }
    }
    let idx = |e: &str| index.get(e).copied().ok_or_else(|| QuantaleError::DanglingElement(e.to_string()));
    let name = |i: usize| spec.elements[i].clone();
    let mut leq = vec![false; m * m];
    for i in 0..m {
        leq[i * m + i] = true;
    }
    for (x, y) in &spec.order {
        leq[idx(x)? * m + idx(y)?] = true;
    }
    for x in 0..m {
        for y in 0..m {
            if x != y && leq[x * m + y] && leq[y * m + x] {
                return Err(QuantaleError::NotPartialOrder(name(x), name(y)));
            }
            for z in 0..m {
                if leq[x * m + y] && leq[y * m + z] && !leq[x * m + z] {
                    return Err(QuantaleError::NotPartialOrder(name(x), name(z)));
                }
            }
        }
    }
    let mut prod = vec![usize::MAX; m * m];
    for (x, y, t) in &spec.tensor {
        prod[idx(x)? * m + idx(y)?] = idx(t)?;
    }
    for x in 0..m {
        for y in 0..m {
            if prod[x * m + y] == usize::MAX {
                return Err(QuantaleError::MissingProduct(name(x), name(y)));
            }
        }
    }
    let t = |x: usize, y: usize| prod[x * m + y];
    let unit = idx(&spec.unit)?;
    for x in 0..m {
        if t(unit, x) != x {
            return Err(QuantaleError::NotUnital(name(unit)));
        }
        for y in 0..m {
            if t(x, y) != t(y, x) {
                return Err(QuantaleError::NotCommutative(name(x), name(y)));
            }
            for z in 0..m {
                if t(t(x, y), z) != t(x, t(y, z)) {
                    return Err(QuantaleError::NotAssociative(name(x), name(y), name(z)));
                }
            }
        }
    }
    for x in 0..m {
        for x2 in 0..m {
            for y in 0..m {
                for y2 in 0..m {
                    if leq[x * m + x2] && leq[y * m + y2] && !leq[t(x, y) * m + t(x2, y2)] {
                        return Err(QuantaleError::NotMonotone(name(x), name(y), name(x2), name(y2)));
                    }
                }
            }
        }
    }
    // x ⇒ z is the greatest y with x ⊗ y ≤ z.
    let mut residual = vec![0; m * m];
    for x in 0..m {
        for z in 0..m {
            let below: Vec<usize> = (0..m).filter(|&y| leq[t(x, y) * m + z]).collect();
            let top = below
                .iter()
                .copied()
                .find(|&r| below.iter().all(|&y| leq[y * m + r]))
                .ok_or_else(|| QuantaleError::NotResiduated(name(x), name(z)))?;
            residual[x * m + z] = top;
        }
    }

    let mut raw = RawCategory {
        objects: spec.elements.clone(),
        ..RawCategory::default()
    };
    for x in 0..m {
        raw.identities.push((name(x), quantale_arrow(&name(x), &name(x))));
        for y in 0..m {
            if !leq[x * m + y] {
                continue;
            }
            raw.morphisms.push(RawMorphism::new(quantale_arrow(&name(x), &name(y)), name(x), name(y)));
            for z in 0..m {
                if leq[y * m + z] {
                    raw.composition.push((
                        quantale_arrow(&name(y), &name(z)),
                        quantale_arrow(&name(x), &name(y)),
                        quantale_arrow(&name(x), &name(z)),
                    ));
                }
            }
        }
    }
    let base = FinCategory::validate(&raw)?;
    let mut tables = RawMonoidal {
        unit: name(unit),
        ..RawMonoidal::default()
    };
    for x in 0..m {
        for y in 0..m {
            tables.tensor.push((name(x), name(y), name(t(x, y))));
            tables.hom.push((name(x), name(y), name(residual[x * m + y])));
        }
    }
    Ok(MonoidalClosed::validate(base, &tables)?)
}

/// Tensor operation of a generated chain quantale.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ChainTensor {
    Min,
    Lukasiewicz,
}

/// Label of the `i`-th element of an `n`-chain on `[0, 1]`: the reduced
/// fraction `i / (n - 1)`.
pub fn chain_label(i: usize, n: usize) -> String {
    if n <= 1 {
        return "1".to_string();
    }
    let (p, q) = (i, n - 1);
    let g = gcd(p, q);
    let (p, q) = (p / g, q / g);
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// The `n`-element chain `0 < 1/(n-1) < … < 1` with unit `1`.
pub fn chain_quantale(n: usize, tensor: ChainTensor) -> QuantaleSpec {
    let elements: Vec<String> = (0..n).map(|i| chain_label(i, n)).collect();
    let mut order = Vec::new();
    let mut table = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x < y {
                order.push((elements[x].clone(), elements[y].clone()));
            }
            let t = match tensor {
                ChainTensor::Min => x.min(y),
                ChainTensor::Lukasiewicz => (x + y).saturating_sub(n - 1),
            };
            table.push((elements[x].clone(), elements[y].clone(), elements[t].clone()));
        }
    }
    QuantaleSpec {
        unit: elements[n - 1].clone(),
        elements,
        order,
        tensor: table,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2() -> MonoidalClosed {
        quantale_to_v(&chain_quantale(2, ChainTensor::Min)).unwrap()
    }

    #[test]
    fn boolean_quantale_is_three_arrow_thin_category() {
        let v = v2();
        assert_eq!(v.base().object_count(), 2);
        assert_eq!(v.base().morphism_count(), 3);
    }

    #[test]
    fn boolean_with_bottom_unit_is_rejected() {
        let mut spec = chain_quantale(2, ChainTensor::Min);
        spec.unit = "0".into();
        assert!(matches!(quantale_to_v(&spec), Err(QuantaleError::NotUnital(_))));
        // The same failure through the table validator.
        let v = v2();
        let mut raw = v.to_raw();
        raw.unit = "0".into();
        assert!(matches!(
            MonoidalClosed::validate(v.base().clone(), &raw),
            Err(MonoidalError::UnitViolation(_))
        ));
    }

    #[test]
    fn lukasiewicz_residual_matches_formula() {
        let v = quantale_to_v(&chain_quantale(3, ChainTensor::Lukasiewicz)).unwrap();
        let b = v.base();
        // Residual x ⇒ z = min(1, 1 − x + z) on thirds scaled by 2.
        for x in 0..3usize {
            for z in 0..3usize {
                let expected = (2 + z).saturating_sub(x).min(2);
                let got = v.hom_obj(
                    b.object_id(&chain_label(x, 3)).unwrap(),
                    b.object_id(&chain_label(z, 3)).unwrap(),
                );
                assert_eq!(b.object_name(got), chain_label(expected, 3));
            }
        }
    }

    #[test]
    fn non_commutative_table_is_rejected() {
        let mut spec = chain_quantale(2, ChainTensor::Min);
        for entry in &mut spec.tensor {
            if entry.0 == "0" && entry.1 == "1" {
                entry.2 = "1".into();
            }
        }
        assert!(matches!(
            quantale_to_v(&spec),
            Err(QuantaleError::NotCommutative(_, _)) | Err(QuantaleError::NotUnital(_))
        ));
    }

    #[test]
    fn apply_hom_on_boolean_arrow_is_identity_of_top() {
        let v = v2();
        let b = v.base();
        let f = b.morphism_id("0<=1").unwrap();
        let id_top = b.morphism_id("1<=1").unwrap();
        let r = v.apply_hom(f, id_top);
        assert_eq!(b.morphism_name(r), "1<=1");
    }

    #[test]
    fn apply_hom_is_functorial_on_lukasiewicz_chain() {
        let v = quantale_to_v(&chain_quantale(3, ChainTensor::Lukasiewicz)).unwrap();
        let b = v.base();
        for x in b.object_ids() {
            assert_eq!(v.apply_hom(b.identity(x), b.identity(x)), b.identity(v.hom_obj(x, x)));
        }
        let m = |s: &str| b.morphism_id(s).unwrap();
        let (f1, f2) = (m("0<=1/2"), m("1/2<=1"));
        let (g1, g2) = (m("0<=1/2"), m("1/2<=1"));
        let lhs = v.apply_hom(b.compose(f2, f1), b.compose(g2, g1));
        let rhs = b.compose(v.apply_hom(f1, g2), v.apply_hom(f2, g1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetry_is_involutive() {
        let v = quantale_to_v(&chain_quantale(4, ChainTensor::Min)).unwrap();
        let b = v.base();
        for x in b.object_ids() {
            for y in b.object_ids() {
                let s = b.compose(v.symmetry(y, x), v.symmetry(x, y));
                assert_eq!(s, b.identity(v.tensor(x, y)));
            }
        }
    }

    #[test]
    fn chain_labels_reduce() {
        let l: Vec<String> = (0..4).map(|i| chain_label(i, 4)).collect();
        assert_eq!(l, ["0", "1/3", "2/3", "1"]);
        let l: Vec<String> = (0..3).map(|i| chain_label(i, 3)).collect();
        assert_eq!(l, ["0", "1/2", "1"]);
    }
}
