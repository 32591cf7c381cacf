//! Factorization systems: the wide-intersection construction, system
//! certification, strong monos/epis, the canonical systems and the finite
//! well-completeness report.

use serde::Serialize;
use thiserror::Error;

use crate::enriched::{EnrichedCategory, IntersectionError};
use crate::fincat::{Diagram, MorId, ObjId};
use crate::ortho::{self, left_class, relation, right_class, Mode, MorphismClass, Provenance};
use crate::verdict::{Evidence, Reason, Side, Verdict};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Hypothesis {
    /// Intersections of families in `M` exist and lie in `M`.
    I,
    /// Pullbacks of members of `M` along arbitrary maps exist and lie in `M`.
    II,
    /// `M` is closed under composition.
    III,
    /// Every isomorphism lies in `M`.
    Isos,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum FactorError {
    #[error("hypothesis {which:?} fails")]
    HypothesisFailed { which: Hypothesis, witness: Evidence },
    #[error("morphism does not factor uniquely through a member of the class")]
    InductionFailure { morphism: MorId, through: MorId },
    #[error("intersection of the candidate family is missing")]
    IntersectionMissing { codomain: ObjId, family: Vec<MorId> },
    #[error("constructed left part is not left orthogonal to the class")]
    LeftClassViolation { e: MorId, m: MorId },
}

/// The construction of factorizations by intersecting every member of `M`
/// through which a morphism factors. Hypotheses are checked once, up front.
pub struct Factorizer<'a> {
    b: &'a EnrichedCategory,
    m: &'a MorphismClass,
}

impl<'a> Factorizer<'a> {
    pub fn new(b: &'a EnrichedCategory, m: &'a MorphismClass) -> Result<Self, FactorError> {
        let u = b.underlying();
        let fail = |which, witness| Err(FactorError::HypothesisFailed { which, witness });
        if let Some(i) = u.isos().into_iter().find(|&i| !m.contains(i)) {
            return fail(Hypothesis::Isos, Evidence::Morphism { morphism: i });
        }
        for m1 in m.iter() {
            for m2 in m.iter() {
                if u.cod(m1) == u.dom(m2) && !m.contains(u.compose(m2, m1)) {
                    return fail(Hypothesis::III, Evidence::Pair { first: m2, second: m1 });
                }
            }
        }
        for mm in m.iter() {
            for &f in u.into_object(u.cod(mm)) {
                let diagram = Diagram::cospan(u, f, mm);
                let ok = match b.v_limit(&diagram).expect("well-formed cospan") {
                    Some(Ok(cone)) => m.contains(cone.legs[0]),
                    _ => false,
                };
                if !ok {
                    return fail(Hypothesis::II, Evidence::Pair { first: mm, second: f });
                }
            }
        }
        // Finite wide intersections are iterated binary ones; the empty one
        // is an identity, which the iso hypothesis already places in M.
        let monos: Vec<MorId> = m.iter().filter(|&x| b.v_flags(x).v_mono).collect();
        for (i, &m1) in monos.iter().enumerate() {
            for &m2 in &monos[i..] {
                if u.cod(m1) != u.cod(m2) {
                    continue;
                }
                let ok = matches!(
                    b.v_intersection(u.cod(m1), &[m1, m2]),
                    Ok(Some(ref s)) if m.contains(s.morphism)
                );
                if !ok {
                    return fail(Hypothesis::I, Evidence::Pair { first: m1, second: m2 });
                }
            }
        }
        Ok(Factorizer { b, m })
    }

    pub fn class(&self) -> &MorphismClass {
        self.m
    }

    /// Factors `g` as `m₀ ∘ e` with `m₀` the intersection of all members of
    /// `M` through which `g` factors.
    pub fn factorize(&self, g: MorId) -> Result<(MorId, MorId), FactorError> {
        let u = self.b.underlying();
        let (a, c) = (u.dom(g), u.cod(g));
        let mut family = Vec::new();
        for &mm in u.into_object(c) {
            if !self.m.contains(mm) {
                continue;
            }
            let through: Vec<MorId> = u
                .hom(a, u.dom(mm))
                .iter()
                .copied()
                .filter(|&x| u.compose(mm, x) == g)
                .collect();
            match through.len() {
                0 => {}
                1 => family.push(mm),
                _ => {
                    return Err(FactorError::InductionFailure {
                        morphism: g,
                        through: mm,
                    })
                }
            }
        }
        let inter = match self.b.v_intersection(c, &family) {
            Ok(Some(s)) => s,
            Ok(None) | Err(IntersectionError::NoVLimit { .. }) => {
                return Err(FactorError::IntersectionMissing { codomain: c, family })
            }
            Err(IntersectionError::FamilyNotMono { morphism }) => {
                return Err(FactorError::InductionFailure { morphism: g, through: morphism })
            }
        };
        let m0 = inter.morphism;
        if !self.m.contains(m0) {
            return Err(FactorError::HypothesisFailed {
                which: Hypothesis::I,
                witness: Evidence::Cone { cone: inter.cone },
            });
        }
        let e = u
            .hom(a, u.dom(m0))
            .iter()
            .copied()
            .find(|&x| u.compose(m0, x) == g)
            .expect("g factors through the intersection");
        let rel = relation(self.b, Mode::Ordinary);
        if let Some(bad) = self.m.iter().find(|&x| !rel.holds(e, x)) {
            return Err(FactorError::LeftClassViolation { e, m: bad });
        }
        Ok((e, m0))
    }
}

/// Certifies `(E, M)` as a factorization system in `mode`: closure under
/// composition with isomorphisms, pairwise orthogonality and existence of
/// factorizations. The witness lists one factorization per morphism.
pub fn is_factorization_system(b: &EnrichedCategory, e: &MorphismClass, m: &MorphismClass, mode: Mode) -> Verdict {
    let u = b.underlying();
    let isos = u.isos();
    for (side, class) in [(Side::Left, e), (Side::Right, m)] {
        for f in class.iter() {
            for &i in &isos {
                for composite in [u.try_compose(f, i), u.try_compose(i, f)].into_iter().flatten() {
                    if !class.contains(composite) {
                        return Verdict::fail(
                            Reason::NotIsoClosed,
                            Evidence::IsoComposite {
                                side,
                                member: f,
                                iso: i,
                                composite,
                            },
                        );
                    }
                }
            }
        }
    }
    let rel = relation(b, mode);
    for x in e.iter() {
        for y in m.iter() {
            if !rel.holds(x, y) {
                let detail = ortho::orthogonal(b, x, y, mode)
                    .counterexample
                    .unwrap_or(Evidence::Note {
                        text: "not orthogonal".into(),
                    });
                return Verdict::fail(
                    Reason::NotOrthogonal,
                    Evidence::ForPair {
                        e: x,
                        m: y,
                        detail: Box::new(detail),
                    },
                );
            }
        }
    }
    let mut entries = Vec::with_capacity(u.morphism_count());
    for f in u.morphism_ids() {
        let found = e.iter().filter(|&x| u.dom(x) == u.dom(f)).find_map(|x| {
            u.hom(u.cod(x), u.cod(f))
                .iter()
                .copied()
                .find(|&y| m.contains(y) && u.compose(y, x) == f)
                .map(|y| (x, y))
        });
        match found {
            Some((x, y)) => entries.push((f, x, y)),
            None => return Verdict::fail(Reason::NoFactorization, Evidence::Morphism { morphism: f }),
        }
    }
    Verdict::pass(Some(Evidence::Factorizer { entries }))
}

/// `StrMono_V = (Epi_V)^{↓V} ∩ Mono_V`.
pub fn strong_mono_class(b: &EnrichedCategory) -> MorphismClass {
    let epis = MorphismClass::predicate("v-epis", b.v_epis());
    let down = right_class(b, &epis, Mode::Enriched);
    MorphismClass::predicate(
        "strong-monos",
        down.iter().filter(|&f| b.v_flags(f).v_mono),
    )
}

/// `StrEpi_V`, computed as the strong monos of the opposite category.
pub fn strong_epi_class(b: &EnrichedCategory) -> MorphismClass {
    let op = b.opposite();
    MorphismClass::predicate("strong-epis", strong_mono_class(&op).members)
}

/// Ordinary strong monos `Epi^↓ ∩ Mono` of the underlying category.
pub fn ordinary_strong_monos(b: &EnrichedCategory) -> MorphismClass {
    let u = b.underlying();
    let epis = MorphismClass::predicate("epis", u.morphism_ids().filter(|&f| u.flags(f).epi));
    let down = right_class(b, &epis, Mode::Ordinary);
    MorphismClass::predicate("ordinary-strong-monos", down.iter().filter(|&f| u.flags(f).mono))
}

/// Whether every morphism has a kernel pair that is a `V`-limit.
pub fn has_all_v_kernel_pairs(b: &EnrichedCategory) -> bool {
    b.underlying().morphism_ids().all(|f| b.v_kernel_pair(f).is_some())
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalAttempt {
    pub name: &'static str,
    pub right_class: MorphismClass,
    /// `M^{↑V}`, the left class the construction produces.
    pub left_class: Option<MorphismClass>,
    /// Whether the produced left class is the expected predicate class.
    pub left_matches_expected: Option<bool>,
    pub factorizations: Vec<(MorId, MorId, MorId)>,
    pub certification: Option<Verdict>,
    pub obstruction: Option<FactorError>,
}

impl CanonicalAttempt {
    pub fn succeeded(&self) -> bool {
        self.obstruction.is_none() && self.certification.as_ref().is_some_and(|v| v.holds)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalReport {
    pub epi_strong_mono: CanonicalAttempt,
    pub strong_epi_mono: CanonicalAttempt,
    /// Both systems certified and equal as pairs of classes.
    pub coincide: bool,
}

fn attempt(
    b: &EnrichedCategory,
    name: &'static str,
    m: MorphismClass,
    expected_left: &MorphismClass,
) -> CanonicalAttempt {
    let mut out = CanonicalAttempt {
        name,
        right_class: m.clone(),
        left_class: None,
        left_matches_expected: None,
        factorizations: Vec::new(),
        certification: None,
        obstruction: None,
    };
    let factorizer = match Factorizer::new(b, &m) {
        Ok(f) => f,
        Err(err) => {
            out.obstruction = Some(err);
            return out;
        }
    };
    for g in b.underlying().morphism_ids() {
        match factorizer.factorize(g) {
            Ok((e, m0)) => out.factorizations.push((g, e, m0)),
            Err(err) => {
                out.obstruction = Some(err);
                return out;
            }
        }
    }
    let mut left = left_class(b, &m, Mode::Enriched);
    left.provenance = Provenance::Operator {
        name: "left".into(),
        mode: Mode::Enriched,
    };
    out.left_matches_expected = Some(left.same_members(expected_left));
    out.certification = Some(is_factorization_system(b, &left, &m, Mode::Enriched));
    out.left_class = Some(left);
    out
}

/// Attempts `(Epi_V, StrMono_V)` with `M` the strong monos and
/// `(StrEpi_V, Mono_V)` with `M` the `V`-monos.
pub fn canonical_systems(b: &EnrichedCategory) -> CanonicalReport {
    let epis = MorphismClass::predicate("v-epis", b.v_epis());
    let strong_epis = strong_epi_class(b);
    let first = attempt(b, "epi_strong_mono", strong_mono_class(b), &epis);
    let second = attempt(
        b,
        "strong_epi_mono",
        MorphismClass::predicate("v-monos", b.v_monos()),
        &strong_epis,
    );
    let coincide = first.succeeded()
        && second.succeeded()
        && first.right_class.same_members(&second.right_class)
        && first.left_class.as_ref().map(|c| &c.members) == second.left_class.as_ref().map(|c| &c.members);
    CanonicalReport {
        epi_strong_mono: first,
        strong_epi_mono: second,
        coincide,
    }
}

/// Which generating diagram lacks a `V`-limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MissingLimit {
    Terminal,
    Product { a: ObjId, b: ObjId },
    Equalizer { f: MorId, g: MorId },
    Pullback { f: MorId, g: MorId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FwcReport {
    pub has_finite_v_limits: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missing_limit: Option<MissingLimit>,
    pub has_strongmono_v_intersections: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missing_intersection: Option<(MorId, MorId)>,
    pub note: &'static str,
}

const FWC_NOTE: &str = "well-poweredness holds trivially for a finite category; \
intersections are checked for the empty family and all pairs, which generate all finite families";

/// Finite `V`-well-completeness: `V`-limits of every terminal, binary
/// product, equalizer and pullback diagram, and `V`-intersections of strong
/// monos. The first failure in that order is reported.
pub fn check_fwc(b: &EnrichedCategory) -> FwcReport {
    let u = b.underlying();
    let has = |d: &Diagram| matches!(b.v_limit(d), Ok(Some(Ok(_))));
    let mut missing = None;
    if !has(&Diagram::empty()) {
        missing = Some(MissingLimit::Terminal);
    }
    if missing.is_none() {
        'products: for x in u.object_ids() {
            for y in u.object_ids().filter(|&y| y >= x) {
                if !has(&Diagram::discrete(vec![x, y])) {
                    missing = Some(MissingLimit::Product { a: x, b: y });
                    break 'products;
                }
            }
        }
    }
    if missing.is_none() {
        'equalizers: for f in u.morphism_ids() {
            for &g in u.hom(u.dom(f), u.cod(f)) {
                if g > f && !has(&Diagram::parallel_pair(u, f, g)) {
                    missing = Some(MissingLimit::Equalizer { f, g });
                    break 'equalizers;
                }
            }
        }
    }
    if missing.is_none() {
        'pullbacks: for f in u.morphism_ids() {
            for &g in u.into_object(u.cod(f)) {
                if g >= f && !has(&Diagram::cospan(u, f, g)) {
                    missing = Some(MissingLimit::Pullback { f, g });
                    break 'pullbacks;
                }
            }
        }
    }
    let strong = strong_mono_class(b);
    let members: Vec<MorId> = strong.iter().collect();
    let mut missing_intersection = None;
    'pairs: for (i, &m1) in members.iter().enumerate() {
        for &m2 in &members[i..] {
            if u.cod(m1) == u.cod(m2) && !matches!(b.v_intersection(u.cod(m1), &[m1, m2]), Ok(Some(_))) {
                missing_intersection = Some((m1, m2));
                break 'pairs;
            }
        }
    }
    FwcReport {
        has_finite_v_limits: missing.is_none(),
        missing_limit: missing,
        has_strongmono_v_intersections: missing_intersection.is_none(),
        missing_intersection,
        note: FWC_NOTE,
    }
}
