//! Orthogonality `e ↓ m`, its enriched variant, the class operators and
//! prefactorization closures.
//!
//! The full relation is computed once per category and mode and cached on
//! the [`EnrichedCategory`]; class operators are scans over it.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::enriched::EnrichedCategory;
use crate::fincat::{FinCategory, MorId, Square};
use crate::verdict::{Evidence, Lift, Realm, Reason, Side, Verdict};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ordinary,
    Enriched,
}

impl Mode {
    fn slot(self) -> usize {
        match self {
            Mode::Ordinary => 0,
            Mode::Enriched => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    User,
    Predicate { name: String },
    Closure { side: Side, mode: Mode },
    Operator { name: String, mode: Mode },
}

/// A finite set of underlying morphisms of one category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismClass {
    pub members: BTreeSet<MorId>,
    pub provenance: Provenance,
}

impl MorphismClass {
    pub fn new(members: impl IntoIterator<Item = MorId>, provenance: Provenance) -> Self {
        MorphismClass {
            members: members.into_iter().collect(),
            provenance,
        }
    }

    pub fn user(members: impl IntoIterator<Item = MorId>) -> Self {
        Self::new(members, Provenance::User)
    }

    pub fn predicate(name: &str, members: impl IntoIterator<Item = MorId>) -> Self {
        Self::new(
            members,
            Provenance::Predicate {
                name: name.to_string(),
            },
        )
    }

    pub fn contains(&self, f: MorId) -> bool {
        self.members.contains(&f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = MorId> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset(&self, other: &MorphismClass) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn same_members(&self, other: &MorphismClass) -> bool {
        self.members == other.members
    }
}

/// The orthogonality relation of one category in one mode.
#[derive(Debug, Clone)]
pub struct OrthoRelation {
    n: usize,
    bits: Vec<bool>,
}

impl OrthoRelation {
    #[inline]
    pub fn holds(&self, e: MorId, m: MorId) -> bool {
        self.bits[e.index() * self.n + m.index()]
    }
}

/// Fast ordinary test: the map `w ↦ (w ∘ e, m ∘ w)` from `hom(A₂, B₁)` into
/// the commuting squares must be a bijection.
pub(crate) fn lifts_uniquely(c: &FinCategory, e: MorId, m: MorId, scratch: &mut Vec<u32>) -> bool {
    let (a1, a2, b1, b2) = (c.dom(e), c.cod(e), c.dom(m), c.cod(m));
    let fillers = c.hom(a2, b1);
    // Count squares by grouping v ∘ e.
    scratch.clear();
    scratch.resize(c.morphism_count(), 0);
    for &v in c.hom(a2, b2) {
        scratch[c.compose(v, e).index()] += 1;
    }
    let squares: usize = c.hom(a1, b1).iter().map(|&u| scratch[c.compose(m, u).index()] as usize).sum();
    if squares != fillers.len() {
        return false;
    }
    let mut seen = std::collections::HashSet::with_capacity(fillers.len());
    fillers.iter().all(|&w| seen.insert((c.compose(w, e), c.compose(m, w))))
}

/// The hom-square of `e` and `m` in `V`: `f = B(A₂, m)`, `g = B(e, B₁)`,
/// `h = B(e, B₂)`, `k = B(A₁, m)`.
pub fn hom_square(b: &EnrichedCategory, e: MorId, m: MorId) -> Square {
    let u = b.underlying();
    let (a1, a2, b1, b2) = (u.dom(e), u.cod(e), u.dom(m), u.cod(m));
    Square {
        f: b.cov(a2, m),
        g: b.contra(e, b1),
        h: b.contra(e, b2),
        k: b.cov(a1, m),
    }
}

fn pair_holds(b: &EnrichedCategory, mode: Mode, e: MorId, m: MorId, scratch: &mut Vec<u32>) -> bool {
    match (mode, b.base()) {
        (Mode::Enriched, Some(v)) => v
            .base()
            .is_pullback_square(&hom_square(b, e, m))
            .map(|r| r.holds)
            .unwrap_or(false),
        _ => lifts_uniquely(b.underlying(), e, m, scratch),
    }
}

/// The cached relation for `mode`, computed in parallel on first use.
pub fn relation(b: &EnrichedCategory, mode: Mode) -> Arc<OrthoRelation> {
    b.ortho_cache[mode.slot()]
        .get_or_init(|| {
            let n = b.underlying().morphism_count();
            let rows: Vec<Vec<bool>> = (0..n as u32)
                .into_par_iter()
                .map_init(Vec::new, |scratch, e| {
                    (0..n as u32)
                        .map(|m| pair_holds(b, mode, MorId(e), MorId(m), scratch))
                        .collect()
                })
                .collect();
            Arc::new(OrthoRelation {
                n,
                bits: rows.concat(),
            })
        })
        .clone()
}

fn lifting_squares(c: &FinCategory, e: MorId, m: MorId) -> Vec<(MorId, MorId, Vec<MorId>)> {
    let (a1, a2, b1, b2) = (c.dom(e), c.cod(e), c.dom(m), c.cod(m));
    let mut out = Vec::new();
    for &u in c.hom(a1, b1) {
        let mu = c.compose(m, u);
        for &v in c.hom(a2, b2) {
            if c.compose(v, e) != mu {
                continue;
            }
            let fillers = c
                .hom(a2, b1)
                .iter()
                .copied()
                .filter(|&w| c.compose(w, e) == u && c.compose(m, w) == v)
                .collect();
            out.push((u, v, fillers));
        }
    }
    out
}

/// Ordinary orthogonality with a filler per square as witness, or the first
/// square (in ID order of `u`, then `v`) without a unique filler.
pub fn is_orthogonal(b: &EnrichedCategory, e: MorId, m: MorId) -> Verdict {
    orthogonal_in(b.underlying(), e, m)
}

pub fn orthogonal_in(c: &FinCategory, e: MorId, m: MorId) -> Verdict {
    let squares = lifting_squares(c, e, m);
    if let Some((u, v, fillers)) = squares.iter().find(|s| s.2.len() != 1).cloned() {
        let reason = if fillers.is_empty() {
            Reason::NoFiller
        } else {
            Reason::MultipleFillers
        };
        return Verdict::fail(reason, Evidence::Lifting { u, v, fillers });
    }
    Verdict::pass(Some(Evidence::Lifts {
        lifts: squares.into_iter().map(|(u, v, w)| Lift { u, v, w: w[0] }).collect(),
    }))
}

/// Enriched orthogonality: the hom-square is a pullback in `V`. For the sets
/// backend this coincides with ordinary orthogonality.
pub fn is_v_orthogonal(b: &EnrichedCategory, e: MorId, m: MorId) -> Verdict {
    let Some(v) = b.base() else {
        return is_orthogonal(b, e, m);
    };
    let sq = hom_square(b, e, m);
    let verdict = v.base().is_pullback_square(&sq).expect("hom-square commutes");
    if verdict.holds {
        return Verdict::pass(Some(Evidence::Pair { first: e, second: m }));
    }
    let detail = match verdict.counterexample {
        Some(Evidence::Mediators {
            apex, legs, mediators, ..
        }) => Evidence::Mediators {
            realm: Realm::Base,
            apex,
            legs,
            mediators,
        },
        other => other.unwrap_or(Evidence::Note {
            text: "hom-square is not a pullback".into(),
        }),
    };
    Verdict::fail(
        verdict.reason,
        Evidence::ForPair {
            e,
            m,
            detail: Box::new(detail),
        },
    )
}

pub fn orthogonal(b: &EnrichedCategory, e: MorId, m: MorId, mode: Mode) -> Verdict {
    match mode {
        Mode::Ordinary => is_orthogonal(b, e, m),
        Mode::Enriched => is_v_orthogonal(b, e, m),
    }
}

/// `H^↓`: morphisms right orthogonal to every member of `h`.
pub fn right_class(b: &EnrichedCategory, h: &MorphismClass, mode: Mode) -> MorphismClass {
    let rel = relation(b, mode);
    MorphismClass::new(
        b.underlying().morphism_ids().filter(|&m| h.iter().all(|e| rel.holds(e, m))),
        Provenance::Operator {
            name: "right".into(),
            mode,
        },
    )
}

/// `H^↑`: morphisms left orthogonal to every member of `h`.
pub fn left_class(b: &EnrichedCategory, h: &MorphismClass, mode: Mode) -> MorphismClass {
    let rel = relation(b, mode);
    MorphismClass::new(
        b.underlying().morphism_ids().filter(|&e| h.iter().all(|m| rel.holds(e, m))),
        Provenance::Operator {
            name: "left".into(),
            mode,
        },
    )
}

/// `(H^{↓↑}, H^↓)` for `Side::Right`, `(H^↑, H^{↑↓})` for `Side::Left`.
pub fn prefactorization_closure(
    b: &EnrichedCategory,
    h: &MorphismClass,
    side: Side,
    mode: Mode,
) -> (MorphismClass, MorphismClass) {
    let (mut e, mut m) = match side {
        Side::Right => {
            let m = right_class(b, h, mode);
            (left_class(b, &m, mode), m)
        }
        Side::Left => {
            let e = left_class(b, h, mode);
            let m = right_class(b, &e, mode);
            (e, m)
        }
    };
    assert!(right_class(b, &e, mode).same_members(&m));
    assert!(left_class(b, &m, mode).same_members(&e));
    e.provenance = Provenance::Closure { side, mode };
    m.provenance = Provenance::Closure { side, mode };
    (e, m)
}

/// Both fixed-point equations `E^↓ = M` and `M^↑ = E`; a counterexample
/// names the first morphism (ID order) on the wrong side.
pub fn is_prefactorization_system(b: &EnrichedCategory, e: &MorphismClass, m: &MorphismClass, mode: Mode) -> Verdict {
    let down = right_class(b, e, mode);
    if let Some(f) = first_difference(&down, m) {
        return Verdict::fail(
            Reason::ClassMismatch,
            Evidence::Misplaced {
                morphism: f,
                side: Side::Right,
                expected: down.contains(f),
            },
        );
    }
    let up = left_class(b, m, mode);
    if let Some(f) = first_difference(&up, e) {
        return Verdict::fail(
            Reason::ClassMismatch,
            Evidence::Misplaced {
                morphism: f,
                side: Side::Left,
                expected: up.contains(f),
            },
        );
    }
    Verdict::pass(None)
}

fn first_difference(a: &MorphismClass, b: &MorphismClass) -> Option<MorId> {
    a.members.symmetric_difference(&b.members).min().copied()
}
