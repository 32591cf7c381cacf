use std::collections::BTreeSet;

use enrifact::corpus::{boolean_base, chain_over_boolean, finset, idempotent_cospan, self_enriched_chain};
use enrifact::document::TensorOp;
use enrifact::enriched::RawEnriched;
use enrifact::factor::{
    canonical_systems, check_fwc, is_factorization_system, ordinary_strong_monos, strong_epi_class, strong_mono_class,
    FactorError, Factorizer, Hypothesis, MissingLimit,
};
use enrifact::verdict::Evidence;
use enrifact::{EnrichedCategory, Mode, MorId, MorphismClass};

fn mor(b: &EnrichedCategory, id: &str) -> MorId {
    b.underlying().morphism_id(id).unwrap_or_else(|| panic!("no morphism {id}"))
}

/// Image set of a finset morphism read off its ID.
fn image(id: &str) -> BTreeSet<usize> {
    let list = id.split_once(':').unwrap().1.trim_matches(|c| c == '[' || c == ']');
    list.split(',').filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect()
}

fn class_where(b: &EnrichedCategory, p: impl Fn(MorId) -> bool) -> MorphismClass {
    MorphismClass::user(b.underlying().morphism_ids().filter(|&f| p(f)))
}

#[test]
fn finset_factors_through_images() {
    let b = finset(3);
    let u = b.underlying();
    let inj = class_where(&b, |f| b.flags(f).mono);
    let fz = Factorizer::new(&b, &inj).unwrap();
    for g in u.morphism_ids() {
        let (e, m) = fz.factorize(g).unwrap();
        assert_eq!(u.compose(m, e), g);
        assert!(b.flags(e).epi && b.flags(m).mono, "{}", u.morphism_name(g));
        assert_eq!(image(u.morphism_name(m)), image(u.morphism_name(g)));
    }
    let (e, m) = fz.factorize(mor(&b, "2->3:[1,1]")).unwrap();
    assert_eq!(u.morphism_name(e), "2->1:[1,1]");
    assert_eq!(u.morphism_name(m), "1->3:[1]");
}

#[test]
fn members_of_the_class_factor_trivially() {
    let b = finset(3);
    let u = b.underlying();
    let inj = class_where(&b, |f| b.flags(f).mono);
    let fz = Factorizer::new(&b, &inj).unwrap();
    for g in inj.iter() {
        let (e, _) = fz.factorize(g).unwrap();
        assert!(u.flags(e).iso);
    }
    for x in u.object_ids() {
        let id = u.identity(x);
        assert_eq!(fz.factorize(id).unwrap(), (id, id));
    }
}

#[test]
fn finset_image_system_is_certified() {
    let b = finset(3);
    let surj = class_where(&b, |f| b.flags(f).epi);
    let inj = class_where(&b, |f| b.flags(f).mono);
    let isos = class_where(&b, |f| b.flags(f).iso);
    let all = class_where(&b, |_| true);
    for mode in [Mode::Ordinary, Mode::Enriched] {
        let v = is_factorization_system(&b, &surj, &inj, mode);
        assert!(v.holds && v.is_well_formed());
        assert!(matches!(v.witness, Some(Evidence::Factorizer { ref entries }) if entries.len() == 60));
        assert!(is_factorization_system(&b, &isos, &all, mode).holds);
        assert!(is_factorization_system(&b, &all, &isos, mode).holds);
        assert!(!is_factorization_system(&b, &inj, &surj, mode).holds);
    }
    // Without the isos the right class is not closed under them.
    let v = is_factorization_system(&b, &all, &MorphismClass::user([]), Mode::Enriched);
    assert!(!v.holds && v.is_well_formed());
}

#[test]
fn strong_monos_of_finset_are_the_injections() {
    let b = finset(3);
    let inj = class_where(&b, |f| b.flags(f).mono);
    let surj = class_where(&b, |f| b.flags(f).epi);
    assert!(strong_mono_class(&b).same_members(&inj));
    assert!(ordinary_strong_monos(&b).same_members(&inj));
    assert!(strong_epi_class(&b).same_members(&surj));
}

#[test]
fn strong_monos_of_a_preorder_are_the_identities() {
    // Every arrow of a preorder is epi, and an arrow orthogonal to itself
    // is invertible.
    for b in [chain_over_boolean(3), self_enriched_chain(3, TensorOp::Min)] {
        let u = b.underlying();
        let ids = class_where(&b, |f| u.is_identity(f));
        assert!(strong_mono_class(&b).same_members(&ids));
        assert!(strong_epi_class(&b).same_members(&ids));
    }
}

#[test]
fn canonical_systems_on_finset_coincide() {
    let b = finset(3);
    let r = canonical_systems(&b);
    assert!(r.epi_strong_mono.succeeded() && r.strong_epi_mono.succeeded());
    assert_eq!(r.epi_strong_mono.left_matches_expected, Some(true));
    assert_eq!(r.strong_epi_mono.left_matches_expected, Some(true));
    assert_eq!(r.epi_strong_mono.factorizations.len(), 60);
    assert!(r.coincide);
}

#[test]
fn canonical_systems_on_the_chain_differ() {
    let b = chain_over_boolean(3);
    let u = b.underlying();
    let r = canonical_systems(&b);
    assert!(r.epi_strong_mono.succeeded() && r.strong_epi_mono.succeeded());
    assert!(!r.coincide);
    // (all, identities) and (identities, all).
    for &(g, e, m) in &r.epi_strong_mono.factorizations {
        assert_eq!((e, m), (g, u.identity(u.cod(g))));
    }
    for &(g, e, m) in &r.strong_epi_mono.factorizations {
        assert_eq!((e, m), (u.identity(u.dom(g)), g));
    }
}

#[test]
fn missing_pullback_fails_hypothesis_two() {
    let b = EnrichedCategory::from_category(idempotent_cospan());
    let u = b.underlying();
    let monos = class_where(&b, |f| b.flags(f).mono);
    match Factorizer::new(&b, &monos) {
        Err(FactorError::HypothesisFailed {
            which: Hypothesis::II,
            witness: Evidence::Pair { first, second },
        }) => {
            assert_eq!(u.morphism_name(first), "a");
            assert_eq!(u.morphism_name(second), "f");
        }
        other => panic!("unexpected {:?}", other.err()),
    }
}

#[test]
fn classes_without_isos_or_composites_are_rejected() {
    let b = finset(2);
    let u = b.underlying();
    let no_isos = class_where(&b, |f| b.flags(f).mono && !b.flags(f).iso);
    assert!(matches!(
        Factorizer::new(&b, &no_isos),
        Err(FactorError::HypothesisFailed { which: Hypothesis::Isos, .. })
    ));
    let a = mor(&b, "0->1:[]");
    let c = mor(&b, "1->2:[1]");
    let not_closed = class_where(&b, |f| u.flags(f).iso || f == a || f == c);
    assert!(matches!(
        Factorizer::new(&b, &not_closed),
        Err(FactorError::HypothesisFailed { which: Hypothesis::III, .. })
    ));
}

#[test]
fn chain_is_finitely_well_complete() {
    let r = check_fwc(&chain_over_boolean(3));
    assert!(r.has_finite_v_limits && r.has_strongmono_v_intersections);
    assert_eq!(r.missing_limit, None);
}

#[test]
fn truncated_finset_lacks_a_product() {
    let b = finset(3);
    let u = b.underlying();
    let r = check_fwc(&b);
    assert!(!r.has_finite_v_limits);
    let two = u.object_id("2").unwrap();
    assert_eq!(r.missing_limit, Some(MissingLimit::Product { a: two, b: two }));
    assert!(r.has_strongmono_v_intersections);
}

#[test]
fn one_object_category_is_finitely_well_complete() {
    let raw = RawEnriched {
        objects: vec!["*".into()],
        hom: vec![("*".into(), "*".into(), "1".into())],
        ..RawEnriched::default()
    };
    let b = EnrichedCategory::from_tables(boolean_base(), &raw).unwrap();
    let r = check_fwc(&b);
    assert!(r.has_finite_v_limits && r.has_strongmono_v_intersections);
}
