use std::time::Instant;

use enrifact::corpus::standard_corpus;
use enrifact::laws::{run_laws, LawOptions};

#[test]
fn every_law_holds_on_the_standard_corpus() {
    for (name, b) in standard_corpus() {
        let start = Instant::now();
        let report = run_laws(&b, &LawOptions::default());
        for law in &report.laws {
            assert!(law.holds, "{name}: {} fails: {:?}", law.id, law.counterexample);
        }
        eprintln!("{name}: {} laws, {} systems, {:?}", report.laws.len(), report.closure_systems, start.elapsed());
    }
}
