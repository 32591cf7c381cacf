use enrifact::corpus::{chain_over_boolean, finset, self_enriched_chain};
use enrifact::document::TensorOp;
use enrifact::fincat::FinCategory;
use enrifact::ortho::{self, is_prefactorization_system, left_class, prefactorization_closure, relation, right_class};
use enrifact::verdict::{Evidence, Side};
use enrifact::{EnrichedCategory, Mode, MorId, MorphismClass};

fn mor(b: &EnrichedCategory, id: &str) -> MorId {
    b.underlying().morphism_id(id).unwrap_or_else(|| panic!("no morphism {id}"))
}

/// Enumerates every commuting square `v ∘ e = m ∘ u` and counts diagonals.
fn brute_orthogonal(c: &FinCategory, e: MorId, m: MorId) -> bool {
    let (a1, a2, b1, b2) = (c.dom(e), c.cod(e), c.dom(m), c.cod(m));
    c.hom(a1, b1).iter().all(|&u| {
        c.hom(a2, b2).iter().filter(|&&v| c.compose(v, e) == c.compose(m, u)).all(|&v| {
            let fillers = c
                .hom(a2, b1)
                .iter()
                .filter(|&&w| c.compose(w, e) == u && c.compose(m, w) == v)
                .count();
            fillers == 1
        })
    })
}

fn class_where(b: &EnrichedCategory, p: impl Fn(MorId) -> bool) -> MorphismClass {
    MorphismClass::user(b.underlying().morphism_ids().filter(|&f| p(f)))
}

#[test]
fn finset_relation_matches_square_enumeration() {
    for b in [finset(2), finset(3)] {
        let c = b.underlying();
        let rel = relation(&b, Mode::Ordinary);
        for e in c.morphism_ids() {
            for m in c.morphism_ids() {
                assert_eq!(rel.holds(e, m), brute_orthogonal(c, e, m), "{} ⊥ {}", c.morphism_name(e), c.morphism_name(m));
            }
        }
    }
}

#[test]
fn finset_enriched_and_ordinary_agree() {
    let b = finset(3);
    let c = b.underlying();
    let ord = relation(&b, Mode::Ordinary);
    let enr = relation(&b, Mode::Enriched);
    for e in c.morphism_ids() {
        for m in c.morphism_ids() {
            assert_eq!(ord.holds(e, m), enr.holds(e, m));
        }
    }
}

#[test]
fn surjection_lifts_against_injection() {
    let b = finset(3);
    let e = mor(&b, "3->2:[1,2,2]");
    let m = mor(&b, "2->3:[1,3]");
    let v = ortho::orthogonal(&b, e, m, Mode::Ordinary);
    assert!(v.holds && v.is_well_formed());
}

#[test]
fn surjection_against_surjection_fails_with_a_square() {
    let b = finset(3);
    let c = b.underlying();
    let e = mor(&b, "2->1:[1,1]");
    let m = mor(&b, "2->1:[1,1]");
    let v = ortho::orthogonal(&b, e, m, Mode::Ordinary);
    assert!(!v.holds && v.is_well_formed());
    match v.counterexample {
        Some(Evidence::Lifting { u, v, fillers }) => {
            assert_eq!(c.compose(v, e), c.compose(m, u));
            let brute: Vec<MorId> = c
                .hom(c.cod(e), c.dom(m))
                .iter()
                .copied()
                .filter(|&w| c.compose(w, e) == u && c.compose(m, w) == v)
                .collect();
            assert_eq!(fillers, brute);
            assert_ne!(brute.len(), 1);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn isos_are_orthogonal_to_everything() {
    for b in [finset(3), chain_over_boolean(3), self_enriched_chain(3, TensorOp::Lukasiewicz)] {
        let c = b.underlying();
        for i in c.morphism_ids().filter(|&i| c.flags(i).iso) {
            for f in c.morphism_ids() {
                for mode in [Mode::Ordinary, Mode::Enriched] {
                    assert!(ortho::orthogonal(&b, i, f, mode).holds);
                    assert!(ortho::orthogonal(&b, f, i, mode).holds);
                }
            }
        }
    }
}

#[test]
fn chain_enriched_orthogonality_is_a_meet_condition() {
    let n = 4usize;
    let b = chain_over_boolean(n);
    let c = b.underlying();
    let rel = relation(&b, Mode::Enriched);
    let parse = |f: MorId| -> (usize, usize) {
        let (x, y) = c.morphism_name(f).split_once("->").unwrap();
        (x.parse().unwrap(), y.parse().unwrap())
    };
    for e in c.morphism_ids() {
        let (a1, a2) = parse(e);
        for m in c.morphism_ids() {
            let (b1, b2) = parse(m);
            // B(A₂, B₁) must be the meet B(A₂, B₂) ∧ B(A₁, B₁) in 2.
            let expected = (a2 <= b1) == (a2 <= b2 && a1 <= b1);
            assert_eq!(rel.holds(e, m), expected, "{a1}->{a2} ⊥ {b1}->{b2}");
        }
    }
    assert!(ortho::orthogonal(&b, mor(&b, "0->1"), mor(&b, "1->2"), Mode::Enriched).holds);
    let fail = ortho::orthogonal(&b, mor(&b, "0->1"), mor(&b, "0->2"), Mode::Enriched);
    assert!(!fail.holds && fail.is_well_formed());
}

#[test]
fn lukasiewicz_enriched_relation_is_contained_in_ordinary() {
    let b = self_enriched_chain(3, TensorOp::Lukasiewicz);
    let c = b.underlying();
    let (ord, enr) = (relation(&b, Mode::Ordinary), relation(&b, Mode::Enriched));
    for e in c.morphism_ids() {
        for m in c.morphism_ids() {
            if enr.holds(e, m) {
                assert!(ord.holds(e, m));
            }
        }
    }
}

#[test]
fn right_class_of_surjections_is_injections() {
    let b = finset(3);
    let surj = class_where(&b, |f| b.flags(f).epi);
    let inj = class_where(&b, |f| b.flags(f).mono);
    for mode in [Mode::Ordinary, Mode::Enriched] {
        assert!(right_class(&b, &surj, mode).same_members(&inj));
        assert!(left_class(&b, &inj, mode).same_members(&surj));
    }
}

#[test]
fn closure_of_nothing_is_isos_and_everything() {
    let b = finset(2);
    let isos = class_where(&b, |f| b.flags(f).iso);
    let all = class_where(&b, |_| true);
    let (e, m) = prefactorization_closure(&b, &MorphismClass::user([]), Side::Right, Mode::Enriched);
    assert!(e.same_members(&isos) && m.same_members(&all));
    let (e, m) = prefactorization_closure(&b, &MorphismClass::user([]), Side::Left, Mode::Enriched);
    assert!(e.same_members(&all) && m.same_members(&isos));
}

#[test]
fn closures_are_fixed_points() {
    let b = chain_over_boolean(3);
    for f in b.underlying().morphism_ids() {
        for side in [Side::Left, Side::Right] {
            let (e, m) = prefactorization_closure(&b, &MorphismClass::user([f]), side, Mode::Enriched);
            assert!(is_prefactorization_system(&b, &e, &m, Mode::Enriched).holds);
            // The seed lands on the side it generates from.
            match side {
                Side::Left => assert!(m.contains(f)),
                Side::Right => assert!(e.contains(f)),
            }
        }
    }
}

#[test]
fn surjections_and_injections_form_a_prefactorization_system() {
    let b = finset(3);
    let surj = class_where(&b, |f| b.flags(f).epi);
    let inj = class_where(&b, |f| b.flags(f).mono);
    assert!(is_prefactorization_system(&b, &surj, &inj, Mode::Enriched).holds);
    let v = is_prefactorization_system(&b, &inj, &surj, Mode::Enriched);
    assert!(!v.holds && v.is_well_formed());
}
