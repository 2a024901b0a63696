use lsd_core::bounds::{battery::standard_battery, bound_ids, certify_suite, BoundOptions, Outcome};
use lsd_core::{Density, Settings};
use std::collections::BTreeMap;

#[test]
fn every_bound_passes_and_bites_on_the_battery() {
    let battery = standard_battery(&Settings::default()).unwrap();
    let laws: Vec<Density> = battery.iter().map(|(_, d)| d.clone()).collect();
    let ids: Vec<&str> = bound_ids().collect();
    let opts = BoundOptions { tol: 1e-5, ..BoundOptions::default() };
    let out = certify_suite(&laws, &ids, &opts);
    assert_eq!(out.len(), ids.len() * laws.len());
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for e in &out {
        let name = &battery[e.index].0;
        match &e.outcome {
            Outcome::Certified(c) => {
                assert!(c.pass, "{} on {name}: {c:?}", e.bound_id);
                let b = best.entry(ids.iter().find(|i| **i == e.bound_id).unwrap()).or_insert(0.0);
                *b = b.max(c.rhs);
            }
            Outcome::Skipped { .. } => {}
            Outcome::Failed { error } => panic!("{} on {name}: {error}", e.bound_id),
        }
    }
    for id in &ids {
        let rhs = best.get(id).copied().unwrap_or(-1.0);
        assert!(rhs > 0.0, "{id} never certified with a positive right-hand side");
    }
}
