//! The exhaustive invariant suite. Every law has a stable ID; a run reports
//! how many instances of each law were checked and the first failure.

use std::collections::{BTreeSet, HashMap};

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::enriched::{EnrichedCategory, TensorKind};
use crate::factor::{
    canonical_systems, has_all_v_kernel_pairs, is_factorization_system, ordinary_strong_monos, strong_mono_class,
};
use crate::fincat::{Cone, Diagram, FinCategory, MorId, Square};
use crate::ortho::{left_class, prefactorization_closure, relation, right_class, Mode, MorphismClass};
use crate::report::Names;
use crate::verdict::Side;

/// Every law ID with a one-line statement, in execution order.
pub const LAWS: &[(&str, &str)] = &[
    ("CAT-IDENTITY", "identities are two-sided units"),
    ("CAT-ASSOC", "composition is associative"),
    ("CAT-FLAGS", "iso implies mono, epi, section, retraction; section implies mono; mono and retraction imply iso"),
    ("CAT-KERNEL-PAIR", "a kernel pair has equal legs iff the morphism is mono"),
    ("CAT-LIMIT-TERMINAL", "canonical pullbacks re-check as limits and other limit cones on the apex differ by an iso"),
    ("CAT-PULLBACK-PASTING", "pasting and cancelling pullback squares"),
    ("MON-SYMMETRY-INVOLUTION", "the symmetry squares to the identity"),
    ("MON-APPLY-HOM-FUNCTOR", "the internal hom is a functor, contravariant in its first slot"),
    ("ENR-HOM-FUNCTOR", "hom-actions preserve identities and composition"),
    ("ENR-VMONO-MONO", "V-monos are monos and V-epis are epis"),
    ("ENR-SECTION-REGULAR", "sections are V-regular-monos and retractions V-regular-epis"),
    ("ENR-VMONO-COMPOSE", "V-monos compose and g∘f V-mono implies f V-mono"),
    ("ENR-KERNEL-PAIR", "a V-kernel-pair has equal legs iff the morphism is a V-mono"),
    ("ENR-INTERSECTION-VMONO", "V-intersections of V-monos are V-monos"),
    ("ENR-TENSOR-DATA", "declared tensors and cotensors are universal"),
    ("ENR-COLLAPSE", "tensored: V-monos are the monos; cotensored: V-epis are the epis"),
    ("ENR-CLASS-CHAIN", "V-regular-monos ⊆ V-strong-monos ⊆ V-monos ⊆ monos"),
    ("ORTH-SELF-ISO", "f ↓ f implies f iso"),
    ("ORTH-RETRACTION", "g∘f ↓ g implies g is a retraction"),
    ("ORTH-SECTION", "f ↓ g∘f implies f is a section"),
    ("ORTH-ISO", "isomorphisms are orthogonal to everything on both sides"),
    ("ORTH-ENRICHED-ORDINARY", "V-orthogonality implies ordinary orthogonality"),
    ("ORTH-GALOIS", "H ⊆ H↓↑, H↓↑↓ = H↓, the duals, and antitonicity on seeded classes"),
    ("ORTH-TENSOR-COLLAPSE", "fully tensored and E closed under tensors: E↓V = E↓"),
    ("PREF-FIXED-POINT", "closure outputs satisfy E↓ = M and M↑ = E"),
    ("PREF-ISOS", "E ∩ M is exactly the isomorphisms"),
    ("PREF-COMPOSE", "E and M are closed under composition"),
    ("PREF-CANCEL-RIGHT", "g∘f ∈ M and g ∈ M imply f ∈ M"),
    ("PREF-CANCEL-LEFT", "g∘f ∈ E and f ∈ E imply g ∈ E"),
    ("PREF-VEPI-CANCEL", "E ⊆ V-epis: g∘f ∈ M implies f ∈ M; dually for M ⊆ V-monos"),
    ("PREF-PULLBACK", "M is stable under the (V-)pullbacks that exist"),
    ("PREF-FIBRE-PRODUCT", "M is closed under the binary (V-)fibre products that exist"),
    ("PREF-COTENSOR", "enriched M is closed under covered cotensors"),
    ("PREF-TENSOR", "enriched E is closed under covered tensors"),
    ("FACT-CANONICAL", "canonical attempts that succeed are certified with correct factorizers"),
    ("FACT-UNIQUE", "two factorizations in a certified system differ by an iso"),
    ("FACT-ENRICHED-EQUIV", "enriched system ⟺ ordinary system and pairwise V-orthogonality"),
    ("FACT-STRONG-KERNEL", "all V-kernel-pairs exist: V-strong-monos = (V-epis)↓V"),
    ("FACT-STRONG-COLLAPSE", "sets-enriched: V-strong-monos are the ordinary strong monos"),
];

#[derive(Clone, Debug)]
pub struct LawOptions {
    pub seed: u64,
    pub galois_samples: usize,
    pub pasting_samples: usize,
    /// Restrict the run to these IDs.
    pub only: Option<BTreeSet<String>>,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            seed: 0x5eed,
            galois_samples: 20,
            pasting_samples: 200,
            only: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawOutcome {
    pub id: &'static str,
    pub statement: &'static str,
    pub instances: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub holds: bool,
    pub laws: Vec<LawOutcome>,
    /// Distinct prefactorization systems the stability laws ran on.
    pub closure_systems: usize,
}

pub fn is_known_law(id: &str) -> bool {
    LAWS.iter().any(|(l, _)| *l == id)
}

struct Tally {
    instances: usize,
    counterexample: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, ce: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(ce());
        }
    }
}

/// A prefactorization system produced by a closure, with its mode.
#[derive(Clone)]
pub struct ClosureSystem {
    pub e: MorphismClass,
    pub m: MorphismClass,
    pub mode: Mode,
    pub seed: String,
}

fn modes(b: &EnrichedCategory) -> Vec<Mode> {
    if b.is_table() {
        vec![Mode::Ordinary, Mode::Enriched]
    } else {
        // Over sets both notions coincide.
        vec![Mode::Ordinary]
    }
}

/// Closure outputs over the named seeds and every singleton, on both sides
/// and in every distinct mode, deduplicated.
pub fn closure_systems(b: &EnrichedCategory) -> Vec<ClosureSystem> {
    let u = b.underlying();
    let mut seeds: Vec<(String, MorphismClass)> = vec![
        ("empty".into(), MorphismClass::user([])),
        ("all".into(), MorphismClass::user(u.morphism_ids())),
        ("isos".into(), MorphismClass::user(u.isos())),
        ("monos".into(), MorphismClass::user(u.morphism_ids().filter(|&f| u.flags(f).mono))),
        ("epis".into(), MorphismClass::user(u.morphism_ids().filter(|&f| u.flags(f).epi))),
        ("v-monos".into(), MorphismClass::user(b.v_monos())),
        ("v-epis".into(), MorphismClass::user(b.v_epis())),
    ];
    for f in u.morphism_ids() {
        seeds.push((u.morphism_name(f).to_string(), MorphismClass::user([f])));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mode in modes(b) {
        for (name, h) in &seeds {
            for side in [Side::Right, Side::Left] {
                let (e, m) = prefactorization_closure(b, h, side, mode);
                if seen.insert((mode == Mode::Enriched, e.members.clone(), m.members.clone())) {
                    out.push(ClosureSystem {
                        e,
                        m,
                        mode,
                        seed: format!("{name}/{side:?}").to_lowercase(),
                    });
                }
            }
        }
    }
    out
}

/// Ordinary and `V`-pullbacks of every cospan, computed once.
struct Pullbacks {
    ordinary: HashMap<(MorId, MorId), Option<Cone>>,
    enriched: HashMap<(MorId, MorId), Option<Cone>>,
}

impl Pullbacks {
    fn compute(b: &EnrichedCategory) -> Self {
        let u = b.underlying();
        let pairs: Vec<(MorId, MorId)> = u
            .morphism_ids()
            .flat_map(|f| u.into_object(u.cod(f)).iter().map(move |&g| (f, g)))
            .collect();
        let results: Vec<(_, Option<Cone>, Option<Cone>)> = pairs
            .par_iter()
            .map(|&(f, g)| {
                let d = Diagram::cospan(u, f, g);
                let ord = u.limit_cone(&d).expect("well-formed cospan");
                let enr = match &ord {
                    Some(c) if b.is_v_limit(&d, c).map(|v| v.holds).unwrap_or(false) => Some(c.clone()),
                    _ => None,
                };
                ((f, g), ord, enr)
            })
            .collect();
        let mut out = Pullbacks {
            ordinary: HashMap::new(),
            enriched: HashMap::new(),
        };
        for (k, o, e) in results {
            out.ordinary.insert(k, o);
            out.enriched.insert(k, e);
        }
        out
    }

    fn get(&self, mode: Mode, f: MorId, g: MorId) -> Option<&Cone> {
        match mode {
            Mode::Ordinary => self.ordinary.get(&(f, g))?.as_ref(),
            Mode::Enriched => self.enriched.get(&(f, g))?.as_ref(),
        }
    }
}

struct Suite<'a> {
    b: &'a EnrichedCategory,
    u: &'a FinCategory,
    names: Names<'a>,
    opts: &'a LawOptions,
    outcomes: Vec<LawOutcome>,
}

impl<'a> Suite<'a> {
    fn wanted(&self, id: &str) -> bool {
        self.opts.only.as_ref().is_none_or(|s| s.contains(id))
    }

    fn run(&mut self, id: &'static str, body: impl FnOnce(&Self, &mut Tally)) {
        if !self.wanted(id) {
            return;
        }
        let mut t = Tally::new();
        body(self, &mut t);
        let statement = LAWS.iter().find(|(l, _)| *l == id).map(|(_, s)| *s).unwrap_or("");
        self.outcomes.push(LawOutcome {
            id,
            statement,
            instances: t.instances,
            holds: t.counterexample.is_none(),
            counterexample: t.counterexample,
        });
    }

    fn mor(&self, f: MorId) -> Value {
        self.names.mor(f)
    }

    fn mors(&self, fs: &[MorId]) -> Value {
        self.names.mors(fs.iter().copied())
    }

    /// Composable pairs `(g, f)`.
    fn composable(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        let u = self.u;
        u.morphism_ids()
            .flat_map(move |f| u.out_of_object(u.cod(f)).iter().map(move |&g| (g, f)))
    }
}

fn seeded(opts: &LawOptions, b: &EnrichedCategory, salt: u64) -> ChaCha8Rng {
    let h = b
        .identity_hash()
        .bytes()
        .fold(0xcbf29ce484222325u64, |acc, x| (acc ^ x as u64).wrapping_mul(0x100000001b3));
    ChaCha8Rng::seed_from_u64(opts.seed ^ h ^ salt)
}

/// Runs the suite (or the selected laws) on one category.
pub fn run_laws(b: &EnrichedCategory, opts: &LawOptions) -> LawReport {
    let u = b.underlying();
    let mut s = Suite {
        b,
        u,
        names: Names::of(b),
        opts,
        outcomes: Vec::new(),
    };
    category_laws(&mut s);
    monoidal_laws(&mut s);
    enriched_laws(&mut s);
    ortho_laws(&mut s);
    let wants_closures = LAWS
        .iter()
        .any(|(id, _)| (id.starts_with("PREF-") || *id == "ORTH-TENSOR-COLLAPSE" || *id == "FACT-ENRICHED-EQUIV") && s.wanted(id));
    let systems = if wants_closures { closure_systems(b) } else { Vec::new() };
    closure_laws(&mut s, &systems);
    factor_laws(&mut s, &systems);
    let holds = s.outcomes.iter().all(|o| o.holds);
    LawReport {
        holds,
        laws: s.outcomes,
        closure_systems: systems.len(),
    }
}

fn category_laws(s: &mut Suite<'_>) {
    s.run("CAT-IDENTITY", |s, t| {
        let u = s.u;
        for f in u.morphism_ids() {
            let ok = u.compose(f, u.identity(u.dom(f))) == f && u.compose(u.identity(u.cod(f)), f) == f;
            t.check(ok, || json!({ "morphism": s.mor(f) }));
        }
    });
    s.run("CAT-ASSOC", |s, t| {
        let u = s.u;
        for (g, f) in s.composable() {
            let gf = u.compose(g, f);
            for &h in u.out_of_object(u.cod(g)) {
                let ok = u.compose(h, gf) == u.compose(u.compose(h, g), f);
                t.check(ok, || json!({ "h": s.mor(h), "g": s.mor(g), "f": s.mor(f) }));
            }
        }
    });
    s.run("CAT-FLAGS", |s, t| {
        for f in s.u.morphism_ids() {
            let fl = s.u.flags(f);
            let ok = (!fl.iso || (fl.mono && fl.epi && fl.section && fl.retraction))
                && (!fl.section || fl.mono)
                && (!fl.retraction || fl.epi)
                && (!(fl.mono && fl.retraction) || fl.iso)
                && (!(fl.epi && fl.section) || fl.iso);
            t.check(ok, || json!({ "morphism": s.mor(f), "flags": fl }));
        }
    });
    s.run("CAT-KERNEL-PAIR", |s, t| {
        for f in s.u.morphism_ids() {
            if let Some(kp) = s.u.kernel_pair(f) {
                let ok = (kp.pi1 == kp.pi2) == s.u.flags(f).mono;
                t.check(ok, || json!({ "morphism": s.mor(f), "pi1": s.mor(kp.pi1), "pi2": s.mor(kp.pi2) }));
            }
        }
    });
    s.run("CAT-LIMIT-TERMINAL", |s, t| {
        let u = s.u;
        for f in u.morphism_ids() {
            for &g in u.into_object(u.cod(f)) {
                if g < f {
                    continue;
                }
                let d = Diagram::cospan(u, f, g);
                let Some(cone) = u.limit_cone(&d).expect("well-formed") else {
                    continue;
                };
                let recheck = u.is_limit_cone(&d, &cone).expect("cone").holds;
                t.check(recheck, || json!({ "f": s.mor(f), "g": s.mor(g), "cone": s.names.cone(&cone) }));
                for legs in u.cones_at(&d, cone.apex) {
                    let other = Cone { apex: cone.apex, legs };
                    if other == cone || !u.is_limit_cone(&d, &other).expect("cone").holds {
                        continue;
                    }
                    // The comparison other → cone must be an iso.
                    let comparison = u
                        .hom(cone.apex, cone.apex)
                        .iter()
                        .copied()
                        .find(|&w| cone.legs.iter().zip(&other.legs).all(|(&l, &o)| u.compose(l, w) == o));
                    let ok = comparison.is_some_and(|w| u.flags(w).iso);
                    t.check(ok, || json!({ "canonical": s.names.cone(&cone), "other": s.names.cone(&other) }));
                }
            }
        }
    });
    let samples = s.opts.pasting_samples;
    let mut rng = seeded(s.opts, s.b, 1);
    s.run("CAT-PULLBACK-PASTING", |s, t| {
        for sq in pasted_squares(s.u, &mut rng, samples) {
            let pb = |q: &Square| s.u.is_pullback_square(q).expect("commuting square").holds;
            let (l, r, o) = (pb(&sq.left), pb(&sq.right), pb(&sq.outer));
            let ok = (!(l && r) || o) && (!(o && r) || l);
            t.check(ok, || {
                json!({
                    "left": square_json(s, &sq.left),
                    "right": square_json(s, &sq.right),
                    "left_pullback": l,
                    "right_pullback": r,
                    "outer_pullback": o,
                })
            });
        }
    });
}

fn square_json(s: &Suite<'_>, q: &Square) -> Value {
    json!({ "f": s.mor(q.f), "g": s.mor(q.g), "h": s.mor(q.h), "k": s.mor(q.k) })
}

/// Two commuting squares pasted horizontally:
///
/// ```text
/// A --a--> B --b--> C
/// |x       |y       |z
/// D --d--> E --e--> F
/// ```
///
/// `left = (a, x, y, d)`, `right = (b, y, z, e)`, `outer = (b∘a, x, z, e∘d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PastedSquares {
    pub left: Square,
    pub right: Square,
    pub outer: Square,
}

/// Samples commuting pasted squares. Half of the inner squares are chosen
/// as canonical pullbacks when those exist, so that the premises of the
/// pasting law are exercised.
pub fn pasted_squares(c: &FinCategory, rng: &mut impl Rng, count: usize) -> Vec<PastedSquares> {
    let mut out = Vec::with_capacity(count);
    let morphisms: Vec<MorId> = c.morphism_ids().collect();
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 50 {
        attempts += 1;
        let z = morphisms[rng.random_range(0..morphisms.len())];
        let Some(&e) = c.into_object(c.cod(z)).iter().choose(rng) else {
            continue;
        };
        let Some((b, y)) = cone_over(c, rng, e, z) else { continue };
        // y : B → E; choose d : D → E.
        let Some(&d) = c.into_object(c.cod(y)).iter().choose(rng) else {
            continue;
        };
        let Some((a, x)) = cone_over(c, rng, d, y) else { continue };
        let left = Square { f: a, g: x, h: y, k: d };
        let right = Square { f: b, g: y, h: z, k: e };
        let outer = Square {
            f: c.compose(b, a),
            g: x,
            h: z,
            k: c.compose(e, d),
        };
        out.push(PastedSquares { left, right, outer });
    }
    out
}

/// A commuting square over the cospan `p → · ← q` (`p : P → Z`,
/// `q : Q → Z`), returned as legs `(to Q, to P)`.
fn cone_over(c: &FinCategory, rng: &mut impl Rng, p: MorId, q: MorId) -> Option<(MorId, MorId)> {
    let d = Diagram::cospan(c, p, q);
    if rng.random_bool(0.5) {
        if let Some(cone) = c.limit_cone(&d).ok().flatten() {
            return Some((cone.legs[1], cone.legs[0]));
        }
    }
    let apex = c.object_ids().choose(rng)?;
    let legs = c.cones_at(&d, apex).into_iter().choose(rng)?;
    Some((legs[1], legs[0]))
}

fn monoidal_laws(s: &mut Suite<'_>) {
    let Some(v) = s.b.base().cloned() else {
        return;
    };
    let base = v.base();
    s.run("MON-SYMMETRY-INVOLUTION", |_, t| {
        for x in base.object_ids() {
            for y in base.object_ids() {
                let ok = base.compose(v.symmetry(y, x), v.symmetry(x, y)) == base.identity(v.tensor(x, y));
                t.check(ok, || json!({ "x": base.object_name(x), "y": base.object_name(y) }));
            }
        }
    });
    s.run("MON-APPLY-HOM-FUNCTOR", |_, t| {
        for x in base.object_ids() {
            for y in base.object_ids() {
                let ok = v.apply_hom(base.identity(x), base.identity(y)) == base.identity(v.hom_obj(x, y));
                t.check(ok, || json!({ "x": base.object_name(x), "y": base.object_name(y) }));
            }
        }
        let pairs: Vec<(MorId, MorId)> = base
            .morphism_ids()
            .flat_map(|f| base.out_of_object(base.cod(f)).iter().map(move |&g| (g, f)))
            .collect();
        for &(f2, f1) in &pairs {
            for &(g2, g1) in &pairs {
                // [f2∘f1, g2∘g1] = [f1, g2] ∘ [f2, g1]
                let lhs = v.apply_hom(base.compose(f2, f1), base.compose(g2, g1));
                let rhs = base.compose(v.apply_hom(f1, g2), v.apply_hom(f2, g1));
                t.check(lhs == rhs, || {
                    json!({
                        "f1": base.morphism_name(f1), "f2": base.morphism_name(f2),
                        "g1": base.morphism_name(g1), "g2": base.morphism_name(g2),
                    })
                });
            }
        }
    });
    s.run("ENR-HOM-FUNCTOR", |s, t| {
        let (b, u) = (s.b, s.u);
        for a in u.object_ids() {
            for x in u.object_ids() {
                let id = u.identity(x);
                let ok = b.cov(a, id) == base.identity(b.hom_object(a, x))
                    && b.contra(id, a) == base.identity(b.hom_object(x, a));
                t.check(ok, || json!({ "object": s.names.obj(a), "identity": s.mor(id) }));
            }
            for (g, f) in s.composable() {
                let gf = u.compose(g, f);
                let ok = b.cov(a, gf) == base.compose(b.cov(a, g), b.cov(a, f))
                    && b.contra(gf, a) == base.compose(b.contra(f, a), b.contra(g, a));
                t.check(ok, || json!({ "object": s.names.obj(a), "g": s.mor(g), "f": s.mor(f) }));
            }
        }
    });
}

fn enriched_laws(s: &mut Suite<'_>) {
    s.run("ENR-VMONO-MONO", |s, t| {
        for f in s.u.morphism_ids() {
            let (v, o) = (s.b.v_flags(f), s.u.flags(f));
            t.check((!v.v_mono || o.mono) && (!v.v_epi || o.epi), || json!({ "morphism": s.mor(f) }));
        }
    });
    s.run("ENR-SECTION-REGULAR", |s, t| {
        for f in s.u.morphism_ids() {
            let (v, o) = (s.b.v_flags(f), s.u.flags(f));
            let ok = (!o.section || v.v_regular_mono) && (!o.retraction || v.v_regular_epi);
            t.check(ok, || json!({ "morphism": s.mor(f) }));
        }
    });
    s.run("ENR-VMONO-COMPOSE", |s, t| {
        for (g, f) in s.composable() {
            let gf = s.u.compose(g, f);
            let (vf, vg, vgf) = (s.b.v_flags(f), s.b.v_flags(g), s.b.v_flags(gf));
            let ok = (!(vf.v_mono && vg.v_mono) || vgf.v_mono) && (!vgf.v_mono || vf.v_mono);
            t.check(ok, || json!({ "g": s.mor(g), "f": s.mor(f) }));
        }
    });
    s.run("ENR-KERNEL-PAIR", |s, t| {
        for f in s.u.morphism_ids() {
            if let Some((_, p1, p2)) = s.b.v_kernel_pair(f) {
                let ok = (p1 == p2) == s.b.v_flags(f).v_mono;
                t.check(ok, || json!({ "morphism": s.mor(f), "pi1": s.mor(p1), "pi2": s.mor(p2) }));
            }
        }
    });
    s.run("ENR-INTERSECTION-VMONO", |s, t| {
        let monos = s.b.v_monos();
        for (i, &m1) in monos.iter().enumerate() {
            for &m2 in &monos[i..] {
                if s.u.cod(m1) != s.u.cod(m2) {
                    continue;
                }
                if let Ok(Some(inter)) = s.b.v_intersection(s.u.cod(m1), &[m1, m2]) {
                    t.check(s.b.v_flags(inter.morphism).v_mono, || json!({ "family": s.mors(&[m1, m2]) }));
                }
            }
        }
    });
    s.run("ENR-TENSOR-DATA", |s, t| {
        for (kind, list) in [(TensorKind::Tensor, s.b.tensors()), (TensorKind::Cotensor, s.b.cotensors())] {
            for entry in list {
                let v = s.b.check_tensor_entry(kind, entry);
                t.check(v.holds, || json!({ "kind": format!("{kind:?}"), "entry": s.names.tensor(entry) }));
            }
        }
    });
    s.run("ENR-COLLAPSE", |s, t| {
        let tensored = !s.b.is_table() || s.b.is_fully_covered(TensorKind::Tensor);
        let cotensored = !s.b.is_table() || s.b.is_fully_covered(TensorKind::Cotensor);
        for f in s.u.morphism_ids() {
            let (v, o) = (s.b.v_flags(f), s.u.flags(f));
            if tensored {
                t.check(v.v_mono == o.mono, || json!({ "morphism": s.mor(f), "predicate": "mono" }));
            }
            if cotensored {
                t.check(v.v_epi == o.epi, || json!({ "morphism": s.mor(f), "predicate": "epi" }));
            }
        }
    });
    s.run("ENR-CLASS-CHAIN", |s, t| {
        let strong = strong_mono_class(s.b);
        for f in s.u.morphism_ids() {
            let v = s.b.v_flags(f);
            let chain = [v.v_regular_mono, strong.contains(f), v.v_mono, s.u.flags(f).mono];
            let ok = chain.windows(2).all(|w| !w[0] || w[1]);
            t.check(ok, || json!({ "morphism": s.mor(f), "chain": chain }));
        }
    });
}

fn ortho_laws(s: &mut Suite<'_>) {
    let ord = relation(s.b, Mode::Ordinary);
    let enr = relation(s.b, Mode::Enriched);
    s.run("ORTH-SELF-ISO", |s, t| {
        for f in s.u.morphism_ids() {
            if ord.holds(f, f) {
                t.check(s.u.flags(f).iso, || json!({ "morphism": s.mor(f) }));
            }
        }
    });
    s.run("ORTH-RETRACTION", |s, t| {
        for (g, f) in s.composable() {
            if ord.holds(s.u.compose(g, f), g) {
                t.check(s.u.flags(g).retraction, || json!({ "g": s.mor(g), "f": s.mor(f) }));
            }
        }
    });
    s.run("ORTH-SECTION", |s, t| {
        for (g, f) in s.composable() {
            if ord.holds(f, s.u.compose(g, f)) {
                t.check(s.u.flags(f).section, || json!({ "g": s.mor(g), "f": s.mor(f) }));
            }
        }
    });
    s.run("ORTH-ISO", |s, t| {
        for i in s.u.isos() {
            for f in s.u.morphism_ids() {
                let ok = ord.holds(i, f) && ord.holds(f, i) && enr.holds(i, f) && enr.holds(f, i);
                t.check(ok, || json!({ "iso": s.mor(i), "morphism": s.mor(f) }));
            }
        }
    });
    s.run("ORTH-ENRICHED-ORDINARY", |s, t| {
        for e in s.u.morphism_ids() {
            for m in s.u.morphism_ids() {
                t.check(!enr.holds(e, m) || ord.holds(e, m), || json!({ "e": s.mor(e), "m": s.mor(m) }));
            }
        }
    });
    let samples = s.opts.galois_samples;
    let mut rng = seeded(s.opts, s.b, 2);
    s.run("ORTH-GALOIS", |s, t| {
        let all: Vec<MorId> = s.u.morphism_ids().collect();
        for _ in 0..samples {
            let density = rng.random_range(0.0..0.5);
            let h2 = MorphismClass::user(all.iter().copied().filter(|_| rng.random_bool(density)));
            let h1 = MorphismClass::user(h2.iter().filter(|_| rng.random_bool(0.5)));
            for mode in modes(s.b) {
                let down = right_class(s.b, &h2, mode);
                let up = left_class(s.b, &h2, mode);
                let down_up = left_class(s.b, &down, mode);
                let up_down = right_class(s.b, &up, mode);
                let ce = |law: &str| json!({ "law": law, "h": s.names.class(&h2), "mode": mode });
                t.check(h2.is_subset(&down_up), || ce("H ⊆ H↓↑"));
                t.check(right_class(s.b, &down_up, mode).same_members(&down), || ce("H↓↑↓ = H↓"));
                t.check(h2.is_subset(&up_down), || ce("H ⊆ H↑↓"));
                t.check(left_class(s.b, &up_down, mode).same_members(&up), || ce("H↑↓↑ = H↑"));
                t.check(down.is_subset(&right_class(s.b, &h1, mode)), || ce("H₁ ⊆ H₂ ⟹ H₂↓ ⊆ H₁↓"));
            }
        }
    });
}

fn closure_laws(s: &mut Suite<'_>, systems: &[ClosureSystem]) {
    let needs_pullbacks = s.wanted("PREF-PULLBACK") || s.wanted("PREF-FIBRE-PRODUCT");
    let pullbacks = needs_pullbacks.then(|| Pullbacks::compute(s.b));
    let isos: BTreeSet<MorId> = s.u.isos().into_iter().collect();
    let sys_json = |s: &Suite<'_>, sys: &ClosureSystem| json!({ "seed": sys.seed, "mode": sys.mode, "m": s.names.class(&sys.m) });
    s.run("ORTH-TENSOR-COLLAPSE", |s, t| {
        if !s.b.is_table() || !s.b.is_fully_covered(TensorKind::Tensor) {
            return;
        }
        let vobjs = s.b.tensor_vobjs();
        for sys in systems.iter().filter(|x| x.mode == Mode::Enriched) {
            let closed = sys
                .e
                .iter()
                .all(|f| vobjs.iter().all(|&v| s.b.tensor_on(v, f).is_none_or(|g| sys.e.contains(g))));
            if closed {
                let ok = right_class(s.b, &sys.e, Mode::Enriched).same_members(&right_class(s.b, &sys.e, Mode::Ordinary));
                t.check(ok, || sys_json(s, sys));
            }
        }
    });
    s.run("PREF-FIXED-POINT", |s, t| {
        for sys in systems {
            let ok = right_class(s.b, &sys.e, sys.mode).same_members(&sys.m)
                && left_class(s.b, &sys.m, sys.mode).same_members(&sys.e);
            t.check(ok, || sys_json(s, sys));
        }
    });
    s.run("PREF-ISOS", |s, t| {
        for sys in systems {
            let meet: BTreeSet<MorId> = sys.e.members.intersection(&sys.m.members).copied().collect();
            t.check(meet == isos, || sys_json(s, sys));
        }
    });
    s.run("PREF-COMPOSE", |s, t| {
        for sys in systems {
            for (g, f) in s.composable() {
                let gf = s.u.compose(g, f);
                for class in [&sys.e, &sys.m] {
                    if class.contains(f) && class.contains(g) {
                        t.check(class.contains(gf), || json!({ "system": sys_json(s, sys), "g": s.mor(g), "f": s.mor(f) }));
                    }
                }
            }
        }
    });
    s.run("PREF-CANCEL-RIGHT", |s, t| {
        for sys in systems {
            for (g, f) in s.composable() {
                if sys.m.contains(s.u.compose(g, f)) && sys.m.contains(g) {
                    t.check(sys.m.contains(f), || json!({ "system": sys_json(s, sys), "g": s.mor(g), "f": s.mor(f) }));
                }
            }
        }
    });
    s.run("PREF-CANCEL-LEFT", |s, t| {
        for sys in systems {
            for (g, f) in s.composable() {
                if sys.e.contains(s.u.compose(g, f)) && sys.e.contains(f) {
                    t.check(sys.e.contains(g), || json!({ "system": sys_json(s, sys), "g": s.mor(g), "f": s.mor(f) }));
                }
            }
        }
    });
    s.run("PREF-VEPI-CANCEL", |s, t| {
        for sys in systems {
            // Enriched classes cancel along V-epis/V-monos, ordinary ones
            // along epis/monos.
            let epi = |f: MorId| match sys.mode {
                Mode::Enriched => s.b.v_flags(f).v_epi,
                Mode::Ordinary => s.u.flags(f).epi,
            };
            let mono = |f: MorId| match sys.mode {
                Mode::Enriched => s.b.v_flags(f).v_mono,
                Mode::Ordinary => s.u.flags(f).mono,
            };
            let e_epi = sys.e.iter().all(epi);
            let m_mono = sys.m.iter().all(mono);
            for (g, f) in s.composable() {
                let gf = s.u.compose(g, f);
                if e_epi && sys.m.contains(gf) {
                    t.check(sys.m.contains(f), || json!({ "system": sys_json(s, sys), "g": s.mor(g), "f": s.mor(f) }));
                }
                if m_mono && sys.e.contains(gf) {
                    t.check(sys.e.contains(g), || json!({ "system": sys_json(s, sys), "g": s.mor(g), "f": s.mor(f) }));
                }
            }
        }
    });
    s.run("PREF-PULLBACK", |s, t| {
        let pb = pullbacks.as_ref().expect("computed");
        for sys in systems {
            for m in sys.m.iter() {
                for &f in s.u.into_object(s.u.cod(m)) {
                    // cospan(f, m): legs[0] : P → dom f is the pullback of m.
                    if let Some(cone) = pb.get(sys.mode, f, m) {
                        t.check(sys.m.contains(cone.legs[0]), || {
                            json!({ "system": sys_json(s, sys), "m": s.mor(m), "along": s.mor(f) })
                        });
                    }
                }
            }
        }
    });
    s.run("PREF-FIBRE-PRODUCT", |s, t| {
        let pb = pullbacks.as_ref().expect("computed");
        for sys in systems {
            for m1 in sys.m.iter() {
                for m2 in sys.m.iter().filter(|&m2| m2 >= m1 && s.u.cod(m2) == s.u.cod(m1)) {
                    if let Some(cone) = pb.get(sys.mode, m1, m2) {
                        t.check(sys.m.contains(cone.legs[2]), || {
                            json!({ "system": sys_json(s, sys), "family": s.mors(&[m1, m2]) })
                        });
                    }
                }
            }
        }
    });
    let enriched_systems = |s: &Suite<'_>| -> Vec<&ClosureSystem> {
        systems
            .iter()
            .filter(|x| x.mode == Mode::Enriched || !s.b.is_table())
            .collect()
    };
    s.run("PREF-COTENSOR", |s, t| {
        let vobjs = s.b.tensor_vobjs();
        for sys in enriched_systems(s) {
            for m in sys.m.iter() {
                for &v in &vobjs {
                    if let Some(c) = s.b.cotensor_on(v, m) {
                        t.check(sys.m.contains(c), || json!({ "system": sys_json(s, sys), "m": s.mor(m), "cotensor": s.mor(c) }));
                    }
                }
            }
        }
    });
    s.run("PREF-TENSOR", |s, t| {
        let vobjs = s.b.tensor_vobjs();
        for sys in enriched_systems(s) {
            for e in sys.e.iter() {
                for &v in &vobjs {
                    if let Some(c) = s.b.tensor_on(v, e) {
                        t.check(sys.e.contains(c), || json!({ "system": sys_json(s, sys), "e": s.mor(e), "tensor": s.mor(c) }));
                    }
                }
            }
        }
    });
}

/// All `(e, m)` with `m ∘ e = f`, `e ∈ E`, `m ∈ M`.
pub fn all_factorizations(u: &FinCategory, e: &MorphismClass, m: &MorphismClass, f: MorId) -> Vec<(MorId, MorId)> {
    let (a, b) = (u.dom(f), u.cod(f));
    let mut out = Vec::new();
    for x in u.object_ids() {
        for &ee in u.hom(a, x) {
            if !e.contains(ee) {
                continue;
            }
            for &mm in u.hom(x, b) {
                if m.contains(mm) && u.compose(mm, ee) == f {
                    out.push((ee, mm));
                }
            }
        }
    }
    out
}

/// The enriched certification and its ordinary-plus-pairwise counterpart;
/// they must agree.
pub fn enriched_equivalence(b: &EnrichedCategory, e: &MorphismClass, m: &MorphismClass) -> (bool, bool) {
    let enriched = is_factorization_system(b, e, m, Mode::Enriched).holds;
    let rel = relation(b, Mode::Enriched);
    let pairwise = e.iter().all(|x| m.iter().all(|y| rel.holds(x, y)));
    let ordinary = is_factorization_system(b, e, m, Mode::Ordinary).holds;
    (enriched, ordinary && pairwise)
}

fn factor_laws(s: &mut Suite<'_>, systems: &[ClosureSystem]) {
    let needs_canonical = s.wanted("FACT-CANONICAL") || s.wanted("FACT-UNIQUE") || s.wanted("FACT-ENRICHED-EQUIV");
    let canonical = needs_canonical.then(|| canonical_systems(s.b));
    let certified: Vec<(MorphismClass, MorphismClass)> = canonical
        .iter()
        .flat_map(|r| [&r.epi_strong_mono, &r.strong_epi_mono])
        .filter(|a| a.succeeded())
        .map(|a| (a.left_class.clone().expect("succeeded"), a.right_class.clone()))
        .collect();
    s.run("FACT-CANONICAL", |s, t| {
        let r = canonical.as_ref().expect("computed");
        for a in [&r.epi_strong_mono, &r.strong_epi_mono] {
            if !a.succeeded() {
                continue;
            }
            let left = a.left_class.as_ref().expect("succeeded");
            for &(g, e, m) in &a.factorizations {
                let ok = s.u.compose(m, e) == g && left.contains(e) && a.right_class.contains(m);
                t.check(ok, || json!({ "attempt": a.name, "g": s.mor(g), "e": s.mor(e), "m": s.mor(m) }));
            }
        }
    });
    s.run("FACT-UNIQUE", |s, t| {
        let u = s.u;
        for (e, m) in &certified {
            for f in u.morphism_ids() {
                let all = all_factorizations(u, e, m, f);
                let Some(&(e0, m0)) = all.first() else {
                    t.check(false, || json!({ "morphism": s.mor(f), "detail": "no factorization" }));
                    continue;
                };
                for &(e1, m1) in &all[1..] {
                    // Diagonal of the square m0 ∘ e0 = m1 ∘ e1 from e0 to m1.
                    let fillers: Vec<MorId> = u
                        .hom(u.cod(e0), u.cod(e1))
                        .iter()
                        .copied()
                        .filter(|&w| u.compose(w, e0) == e1 && u.compose(m1, w) == m0)
                        .collect();
                    let ok = fillers.len() == 1 && u.flags(fillers[0]).iso;
                    t.check(ok, || json!({ "morphism": s.mor(f), "first": s.mors(&[e0, m0]), "second": s.mors(&[e1, m1]) }));
                }
            }
        }
    });
    s.run("FACT-ENRICHED-EQUIV", |s, t| {
        let mut pairs: Vec<(&MorphismClass, &MorphismClass)> = certified.iter().map(|(e, m)| (e, m)).collect();
        pairs.extend(systems.iter().map(|x| (&x.e, &x.m)));
        for (e, m) in pairs {
            let (enriched, derived) = enriched_equivalence(s.b, e, m);
            t.check(enriched == derived, || {
                json!({ "e": s.names.class(e), "m": s.names.class(m), "enriched": enriched, "derived": derived })
            });
        }
    });
    s.run("FACT-STRONG-KERNEL", |s, t| {
        if !has_all_v_kernel_pairs(s.b) {
            return;
        }
        let epis = MorphismClass::user(s.b.v_epis());
        let down = right_class(s.b, &epis, Mode::Enriched);
        let strong = strong_mono_class(s.b);
        t.check(down.same_members(&strong), || {
            json!({ "strong_monos": s.names.class(&strong), "epis_down": s.names.class(&down) })
        });
    });
    s.run("FACT-STRONG-COLLAPSE", |s, t| {
        if s.b.is_table() {
            return;
        }
        let strong = strong_mono_class(s.b);
        let ordinary = ordinary_strong_monos(s.b);
        t.check(strong.same_members(&ordinary), || {
            json!({ "strong_monos": s.names.class(&strong), "ordinary": s.names.class(&ordinary) })
        });
    });
}
