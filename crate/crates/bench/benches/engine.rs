use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use enrifact::corpus::{chain_over_boolean, finset, self_enriched_chain, standard_documents};
use enrifact::document::{parse, serialize, TensorOp};
use enrifact::factor::{canonical_systems, check_fwc};
use enrifact::fincat::Diagram;
use enrifact::laws::{run_laws, LawOptions};
use enrifact::ortho::relation;
use enrifact::Mode;

fn orthogonality(c: &mut Criterion) {
    // The relation is cached on the category, so each iteration gets a
    // fresh one.
    c.bench_function("relation/finset3/ordinary", |b| {
        b.iter_batched(|| finset(3), |cat| black_box(relation(&cat, Mode::Ordinary)), BatchSize::SmallInput)
    });
    c.bench_function("relation/lukasiewicz3/enriched", |b| {
        b.iter_batched(
            || self_enriched_chain(3, TensorOp::Lukasiewicz),
            |cat| black_box(relation(&cat, Mode::Enriched)),
            BatchSize::SmallInput,
        )
    });
}

fn limits(c: &mut Criterion) {
    let b3 = finset(3);
    let u = b3.underlying();
    let pairs: Vec<_> = u
        .morphism_ids()
        .flat_map(|f| u.into_object(u.cod(f)).iter().map(move |&g| (f, g)))
        .collect();
    c.bench_function("pullbacks/finset3/all-cospans", |b| {
        b.iter(|| {
            for &(f, g) in &pairs {
                black_box(u.limit_cone(&Diagram::cospan(u, f, g)).unwrap());
            }
        })
    });
    c.bench_function("fwc/chain4", |b| {
        b.iter_batched(|| chain_over_boolean(4), |cat| black_box(check_fwc(&cat)), BatchSize::SmallInput)
    });
}

fn factorization(c: &mut Criterion) {
    c.bench_function("canonical/finset3", |b| {
        b.iter_batched(|| finset(3), |cat| black_box(canonical_systems(&cat)), BatchSize::SmallInput)
    });
    c.bench_function("laws/chain3", |b| {
        b.iter_batched(
            || chain_over_boolean(3),
            |cat| black_box(run_laws(&cat, &LawOptions::default())),
            BatchSize::SmallInput,
        )
    });
}

fn documents(c: &mut Criterion) {
    let docs = standard_documents();
    let texts: Vec<String> = docs.iter().map(serialize).collect();
    c.bench_function("documents/serialize", |b| {
        b.iter(|| {
            for d in &docs {
                black_box(serialize(d));
            }
        })
    });
    c.bench_function("documents/parse", |b| {
        b.iter(|| {
            for t in &texts {
                black_box(parse(t).unwrap());
            }
        })
    });
}

criterion_group!(benches, orthogonality, limits, factorization, documents);
criterion_main!(benches);
