use std::sync::Arc;

use enrifact::corpus::{boolean_base, chain_over_boolean, finset, lukasiewicz_nonlimit, self_enriched_chain};
use enrifact::document::TensorOp;
use enrifact::enriched::{EnrichedCategory, EnrichedError, HomArrow, RawEnriched, TensorEntry, TensorKind, Variance, VObj};
use enrifact::fincat::{Cone, Diagram, MorId, ObjId};
use enrifact::verdict::{Evidence, Reason};

fn chain_raw(n: usize, hom: impl Fn(usize, usize) -> bool) -> RawEnriched {
    RawEnriched {
        objects: (0..n).map(|i| i.to_string()).collect(),
        hom: (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (a.to_string(), b.to_string(), if hom(a, b) { "1" } else { "0" }.to_string()))
            .collect(),
        ..RawEnriched::default()
    }
}

fn mor(b: &EnrichedCategory, id: &str) -> MorId {
    b.underlying().morphism_id(id).unwrap_or_else(|| panic!("no morphism {id}"))
}

fn obj(b: &EnrichedCategory, id: &str) -> ObjId {
    b.underlying().object_id(id).unwrap()
}

fn injective(id: &str) -> bool {
    let list = id.split_once(':').unwrap().1.trim_matches(|c| c == '[' || c == ']');
    let imgs: Vec<&str> = list.split(',').filter(|s| !s.is_empty()).collect();
    let mut dedup = imgs.clone();
    dedup.sort();
    dedup.dedup();
    dedup.len() == imgs.len()
}

#[test]
fn chain_over_boolean_validates_and_underlies_the_poset() {
    let b = EnrichedCategory::from_tables(boolean_base(), &chain_raw(3, |a, b| a <= b)).unwrap();
    let u = b.underlying();
    assert_eq!(u.morphism_count(), 6);
    for a in 0..3 {
        for c in 0..3 {
            let homs = u.hom(obj(&b, &a.to_string()), obj(&b, &c.to_string()));
            assert_eq!(homs.len(), usize::from(a <= c));
        }
    }
}

#[test]
fn broken_transitivity_violates_associativity() {
    let err = EnrichedCategory::from_tables(boolean_base(), &chain_raw(3, |a, b| a <= b && !(a == 0 && b == 2)))
        .unwrap_err();
    assert!(matches!(err, EnrichedError::EnrichedAssocViolation { .. }), "{err:?}");
}

#[test]
fn finset_backend_has_sixty_morphisms() {
    let expected: usize = (0..=3u32).flat_map(|a| (0..=3usize).map(move |b| b.pow(a))).sum();
    assert_eq!(finset(3).underlying().morphism_count(), expected);
}

#[test]
fn one_object_unit_hom_has_only_the_identity() {
    let raw = RawEnriched {
        objects: vec!["*".into()],
        hom: vec![("*".into(), "*".into(), "1".into())],
        ..RawEnriched::default()
    };
    let b = EnrichedCategory::from_tables(boolean_base(), &raw).unwrap();
    assert_eq!(b.underlying().object_count(), 1);
    assert_eq!(b.underlying().morphism_count(), 1);
}

#[test]
fn hom_action_on_the_chain() {
    let b = chain_over_boolean(3);
    let f = mor(&b, "0->1");
    let v = b.base().unwrap().base();
    // B(2, 0) = B(2, 1) = 0, so B(2, f) = id_0.
    assert_eq!(v.morphism_name(b.cov(obj(&b, "2"), f)), "0<=0");
    let id = b.underlying().identity(obj(&b, "1"));
    for a in b.underlying().object_ids() {
        assert!(v.is_identity(b.cov(a, id)));
        assert!(v.is_identity(b.contra(id, a)));
    }
}

#[test]
fn hom_action_on_finset_is_postcomposition() {
    let b = finset(3);
    let m = mor(&b, "1->2:[1]");
    match b.hom_action(obj(&b, "1"), m, Variance::Co) {
        HomArrow::Set(map) => {
            assert_eq!(map.source.len(), 1);
            assert_eq!(map.target.len(), 2);
            assert!(map.is_injective());
            assert_eq!(b.underlying().morphism_name(map.images[0]), "1->2:[1]");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn boolean_preorders_are_v_mono_and_v_epi() {
    let b = chain_over_boolean(4);
    for f in b.underlying().morphism_ids() {
        let fl = b.v_flags(f);
        assert!(fl.v_mono && fl.v_epi);
    }
}

#[test]
fn finset_v_monos_are_the_injections() {
    let b = finset(3);
    let u = b.underlying();
    for f in u.morphism_ids() {
        assert_eq!(b.v_flags(f).v_mono, injective(u.morphism_name(f)), "{}", u.morphism_name(f));
        assert_eq!(b.v_flags(f).v_mono, u.flags(f).mono);
        assert_eq!(b.v_flags(f).v_epi, u.flags(f).epi);
    }
}

#[test]
fn sections_are_v_regular_monos() {
    for b in [finset(3), chain_over_boolean(3), self_enriched_chain(3, TensorOp::Lukasiewicz)] {
        let u = b.underlying();
        let mut sections = 0;
        for f in u.morphism_ids() {
            if u.flags(f).section {
                sections += 1;
                assert!(b.v_flags(f).v_regular_mono, "{}", u.morphism_name(f));
            }
            if u.flags(f).retraction {
                assert!(b.v_flags(f).v_regular_epi, "{}", u.morphism_name(f));
            }
        }
        assert!(sections > 0);
    }
}

#[test]
fn identity_cone_over_single_node_is_a_v_limit() {
    let b = chain_over_boolean(3);
    let x = obj(&b, "1");
    let d = Diagram::discrete(vec![x]);
    let cone = Cone {
        apex: x,
        legs: vec![b.underlying().identity(x)],
    };
    assert!(b.is_v_limit(&d, &cone).unwrap().holds);
}

#[test]
fn meet_cone_in_the_chain_is_a_v_limit() {
    let b = chain_over_boolean(3);
    let h = mor(&b, "1->2");
    let d = Diagram::cospan(b.underlying(), h, h);
    let cone = Cone {
        apex: obj(&b, "1"),
        legs: vec![mor(&b, "1->1"), mor(&b, "1->1"), h],
    };
    assert!(b.is_v_limit(&d, &cone).unwrap().holds);
}

#[test]
fn ordinary_product_not_preserved_by_a_hom_functor() {
    let b = lukasiewicz_nonlimit();
    let u = b.underlying();
    let d = Diagram::discrete(vec![obj(&b, "X"), obj(&b, "Y")]);
    let cone = u.limit_cone(&d).unwrap().expect("ordinary product exists");
    assert_eq!(u.object_name(cone.apex), "P");
    let v = b.is_v_limit(&d, &cone).unwrap();
    assert!(!v.holds && v.is_well_formed());
    assert_eq!(v.reason, Reason::NotPreserved);
    match v.counterexample {
        // B(A, X) ⊗-product is ½ ∧ ½ = ½ but B(A, P) = 0.
        Some(Evidence::AtObject { object, .. }) => assert_eq!(u.object_name(object), "A"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn empty_intersection_is_the_identity() {
    let b = finset(3);
    let c = obj(&b, "3");
    let s = b.v_intersection(c, &[]).unwrap().unwrap();
    assert_eq!(s.morphism, b.underlying().identity(c));
}

#[test]
fn intersection_of_subsets() {
    let b = finset(3);
    let u = b.underlying();
    let m1 = mor(&b, "1->3:[1]");
    let m2 = mor(&b, "2->3:[1,2]");
    let s = b.v_intersection(obj(&b, "3"), &[m1, m2]).unwrap().unwrap();
    // {1} ∩ {1, 2} = {1}
    let expected: Vec<usize> = [1usize].into_iter().filter(|x| [1, 2].contains(x)).collect();
    assert_eq!(expected, vec![1]);
    assert_eq!(u.morphism_name(s.morphism), "1->3:[1]");
    assert!(b.v_flags(s.morphism).v_mono);
}

#[test]
fn singleton_intersection_is_the_member_up_to_iso() {
    let b = finset(3);
    let u = b.underlying();
    for m in b.v_monos() {
        let s = b.v_intersection(u.cod(m), &[m]).unwrap().unwrap();
        let iso = u
            .hom(u.dom(s.morphism), u.dom(m))
            .iter()
            .copied()
            .find(|&i| u.flags(i).iso && u.compose(m, i) == s.morphism);
        assert!(iso.is_some(), "{}", u.morphism_name(m));
    }
}

#[test]
fn non_mono_family_is_rejected() {
    let b = finset(3);
    let c = mor(&b, "2->1:[1,1]");
    assert!(b.v_intersection(obj(&b, "1"), &[c]).is_err());
}

#[test]
fn finset_tensor_coverage_follows_size_arithmetic() {
    let b = finset(3);
    for v in 0..=3usize {
        for a in 0..=3usize {
            let covered = b.tensors().iter().any(|e| e.v == VObj::Card(v) && b.underlying().object_name(e.a) == a.to_string());
            assert_eq!(covered, v * a <= 3, "{v}·{a}");
        }
    }
    for e in b.tensors() {
        assert!(b.check_tensor_entry(TensorKind::Tensor, e).holds);
    }
    for e in b.cotensors() {
        assert!(b.check_tensor_entry(TensorKind::Cotensor, e).holds);
    }
}

#[test]
fn self_enriched_boolean_base_is_fully_tensored() {
    let v = Arc::new(boolean_base().as_ref().clone());
    let b = EnrichedCategory::self_enriched(v).unwrap();
    assert!(b.is_fully_covered(TensorKind::Tensor));
    assert!(b.is_fully_covered(TensorKind::Cotensor));
    // v ⊗ a = v ∧ a
    let base = b.base().unwrap().clone();
    for e in b.tensors() {
        let VObj::Object(vv) = e.v else { panic!() };
        let meet = base.tensor(vv, base.base().object_id(b.underlying().object_name(e.a)).unwrap());
        assert_eq!(base.base().object_name(meet), b.underlying().object_name(e.t));
    }
}

#[test]
fn wrong_tensor_structure_is_not_iso() {
    let b = finset(3);
    let good = b
        .tensors()
        .iter()
        .find(|e| e.v == VObj::Card(2) && b.underlying().object_name(e.a) == "1")
        .unwrap();
    // Both coprojections hit the same point.
    let bad = TensorEntry {
        structure: vec![good.structure[0], good.structure[0]],
        ..good.clone()
    };
    let v = b.check_tensor_entry(TensorKind::Tensor, &bad);
    assert!(!v.holds);
    assert_eq!(v.reason, Reason::NotIso);
    let chain = chain_over_boolean(3);
    let good = chain.tensors()[0].clone();
    let other_t = chain.underlying().object_ids().find(|&t| t != good.t).unwrap();
    let bad = TensorEntry { t: other_t, ..good };
    assert!(!chain.check_tensor_entry(TensorKind::Tensor, &bad).holds);
}

#[test]
fn v_monos_compose_and_cancel() {
    for b in [finset(3), chain_over_boolean(4), self_enriched_chain(3, TensorOp::Lukasiewicz)] {
        let u = b.underlying();
        for f in u.morphism_ids() {
            for &g in u.out_of_object(u.cod(f)) {
                let gf = u.compose(g, f);
                if b.v_flags(f).v_mono && b.v_flags(g).v_mono {
                    assert!(b.v_flags(gf).v_mono);
                }
                if b.v_flags(gf).v_mono {
                    assert!(b.v_flags(f).v_mono);
                }
            }
        }
    }
}

#[test]
fn opposite_swaps_tensors_and_keeps_ids() {
    let b = chain_over_boolean(3);
    let op = b.opposite();
    assert_eq!(op.tensors().len(), b.cotensors().len());
    for f in b.underlying().morphism_ids() {
        assert_eq!(op.underlying().morphism_name(f), b.underlying().morphism_name(f));
        assert_eq!(op.underlying().dom(f), b.underlying().cod(f));
        assert_eq!(op.v_flags(f).v_mono, b.v_flags(f).v_epi);
    }
}
