use enrifact::corpus::{boolean_poset, poset_category};
use enrifact::laws::{run_laws, LawOptions};
use proptest::prelude::*;

/// Relations on `0..n` with edges only going up, so always acyclic.
fn upward_relation() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=5).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        (Just(n), proptest::sample::subsequence(pairs, 0..=len))
    })
}

fn names(n: usize, rel: &[(usize, usize)]) -> (Vec<String>, Vec<(String, String)>) {
    (
        (0..n).map(|i| format!("p{i}")).collect(),
        rel.iter().map(|&(a, b)| (format!("p{a}"), format!("p{b}"))).collect(),
    )
}

fn reachable_pairs(n: usize, rel: &[(usize, usize)]) -> usize {
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                if !std::mem::replace(&mut seen[x], true) {
                    stack.extend(rel.iter().filter(|&&(a, _)| a == x).map(|&(_, b)| b));
                }
            }
            seen.iter().filter(|&&s| s).count()
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn poset_morphisms_are_reachable_pairs((n, rel) in upward_relation()) {
        let (elements, relation) = names(n, &rel);
        let c = poset_category(&elements, &relation).unwrap();
        prop_assert_eq!(c.morphism_count(), reachable_pairs(n, &rel));
        let b = boolean_poset(&elements, &relation).unwrap();
        prop_assert_eq!(b.underlying().morphism_count(), c.morphism_count());
    }

    #[test]
    fn laws_hold_on_random_posets((n, rel) in upward_relation()) {
        let (elements, relation) = names(n, &rel);
        let b = boolean_poset(&elements, &relation).unwrap();
        let opts = LawOptions { galois_samples: 4, pasting_samples: 40, ..LawOptions::default() };
        let report = run_laws(&b, &opts);
        let failed: Vec<_> = report.laws.iter().filter(|l| !l.holds).map(|l| l.id).collect();
        prop_assert!(report.holds, "{:?}", failed);
    }
}
