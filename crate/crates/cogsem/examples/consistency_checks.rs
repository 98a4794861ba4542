//! Build a small observation store, run the three store-level checks, and
//! show direct verification and refutation of imagined material.
//!
//! Run with: cargo run --example consistency_checks

use std::collections::BTreeSet;

use cogsem::observation::{
    directly_refutes, directly_verifies, strong_consistency_violations,
    unique_result_violations, weak_consistency_violations, CompositeObservation, ObsStatus,
    ObserverSpec, PrimitiveObservation, ResolutionPower, WorldPath,
};
use cogsem::value::{ParamValue, Symbol};

fn observation(
    labels: &[&str],
    status: ObsStatus,
    t: i64,
    place: i64,
    looking_at: i64,
    result: &str,
) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        labels.iter().map(|l| Symbol::new(l)).collect(),
        ResolutionPower::simple("sight"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![place])],
        status,
    )
    .unwrap();
    PrimitiveObservation::new(
        WorldPath::world(&["real"]),
        observer,
        vec![ParamValue::Tuple(vec![looking_at])],
        ParamValue::sym(result),
    )
    .unwrap()
}

fn report(label: &str, pairs: &[(PrimitiveObservation, PrimitiveObservation)]) {
    if pairs.is_empty() {
        println!("{label}: ok");
    } else {
        println!("{label}: {} violating pair(s)", pairs.len());
        for (a, b) in pairs {
            println!("    {} vs {}", a.result, b.result);
        }
    }
}

fn main() {
    use ObsStatus::{Actual, Imaginary};

    // a sound store: one observer over time, plus a second observer in a
    // different state
    let sound: BTreeSet<_> = [
        observation(&["ann", "see"], Actual, 1, 0, 5, "red"),
        observation(&["ann", "see"], Actual, 2, 0, 5, "red"),
        observation(&["bob", "see"], Actual, 1, 3, 5, "red"),
    ]
    .into_iter()
    .collect();
    println!("sound store:");
    report("  result-uniqueness", &unique_result_violations(&sound));
    report("  weak-consistency", &weak_consistency_violations(&sound));
    report("  strong-consistency", &strong_consistency_violations(&sound));

    // the same observer reporting two results for one context
    let contradictory: BTreeSet<_> = [
        observation(&["ann", "see"], Actual, 23, 0, 4, "pure-red"),
        observation(&["ann", "see"], Actual, 23, 0, 4, "pure-blue"),
    ]
    .into_iter()
    .collect();
    println!("\nsame observer, same context, two results:");
    report("  result-uniqueness", &unique_result_violations(&contradictory));

    // two observers in identical states disagreeing about a dress
    let disputed: BTreeSet<_> = [
        observation(&["ann", "see"], Actual, 9, 3, 7, "white-dress"),
        observation(&["bob", "see"], Actual, 9, 3, 7, "black-dress"),
    ]
    .into_iter()
    .collect();
    println!("\ntwo observers sharing a state and disagreeing:");
    report("  weak-consistency", &weak_consistency_violations(&disputed));
    report("  strong-consistency", &strong_consistency_violations(&disputed));

    // verification: an imagined sighting confirmed or refuted by actuals
    let imagined = observation(&["tom", "imag"], Imaginary, 6, 1, 2, "comet");
    let confirming = observation(&["ann", "see"], Actual, 6, 1, 2, "comet");
    let denying = observation(&["ann", "see"], Actual, 6, 1, 2, "clouds");
    println!("\nimagined comet at t=6:");
    println!("  confirmed by matching sighting: {}", directly_verifies(&confirming, &imagined));
    println!("  refuted by a different result:  {}", directly_refutes(&denying, &imagined));

    let story = CompositeObservation::new([imagined.clone(), confirming.clone()]);
    let actuals: BTreeSet<_> = [confirming].into_iter().collect();
    println!("  the whole composite verified:   {}", story.is_directly_verified(&actuals));
}
