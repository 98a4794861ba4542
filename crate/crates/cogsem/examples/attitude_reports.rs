//! Mental-attitude propositions: believing is settled by verifying the
//! mental process alone, while knowing additionally needs the product to
//! be true.
//!
//! Run with: cargo run --example attitude_reports

use std::collections::BTreeSet;

use cogsem::interp::{Sense, SenseArg};
use cogsem::lexicon::{ArgLevel, MatchKind, OperationDef};
use cogsem::model::{CognitiveModel, Element, ProductKind, Relation, RelationKind};
use cogsem::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use cogsem::truth::{Evaluator, LogicKind};
use cogsem::value::{ParamValue, Symbol};

fn observed(
    world: &[&str],
    labels: &[&str],
    status: ObsStatus,
    t: i64,
    s1: i64,
    s0: i64,
    result: &str,
) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        labels.iter().map(|l| Symbol::new(l)).collect(),
        ResolutionPower::simple("sight"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![s1])],
        status,
    )
    .unwrap();
    PrimitiveObservation::new(
        WorldPath::new(world.iter().map(|l| Symbol::new(l)).collect()).unwrap(),
        observer,
        vec![ParamValue::Tuple(vec![s0])],
        ParamValue::sym(result),
    )
    .unwrap()
}

/// One scene: Tom's mental process about flying, in a chosen verification
/// state, against a clause that is or is not borne out.
fn scene(knowledge: bool, clause_true: bool, process_state: &str) -> (CognitiveModel, Sense) {
    use ObsStatus::{Actual, Imaginary};
    // the mental process lives in Tom's mind subworld and is observed by
    // his self-consciousness
    let felt = observed(&["real", "mind:tom"], &["tom", "self"], Actual, 1, 8, 0, "feels-flying");
    let felt_more =
        observed(&["real", "mind:tom"], &["tom", "self"], Imaginary, 2, 8, 0, "feels-flying");
    let felt_denied =
        observed(&["real", "mind:tom"], &["tom", "self"], Actual, 2, 8, 0, "feels-grounded");
    let body = observed(&["real"], &["ann", "see"], Actual, 1, 9, 4, "tom-standing");
    let aloft_status = if clause_true { Actual } else { Imaginary };
    let aloft = observed(&["real"], &["ann", "see"], aloft_status, 3, 9, 4, "tom-aloft");
    let grounded = observed(&["real"], &["bob", "see"], Actual, 3, 9, 4, "tom-grounded");

    let mut builder = CognitiveModel::builder()
        .world("real", 1)
        .subworld("real", "mind:tom")
        .observation("b", body.clone())
        .unwrap()
        .observation("m1", felt.clone())
        .unwrap()
        .observation("f", aloft.clone())
        .unwrap();
    let mut process = vec![&felt];
    match process_state {
        "verified" => {}
        "refuted" => {
            builder = builder
                .observation("m2", felt_more.clone())
                .unwrap()
                .observation("m3", felt_denied.clone())
                .unwrap();
            process.push(&felt_more);
        }
        _ => {
            builder = builder.observation("m2", felt_more.clone()).unwrap();
            process.push(&felt_more);
        }
    }
    if !clause_true {
        builder = builder.observation("g", grounded.clone()).unwrap();
    }

    let tom = Element::Composite(CompositeObservation::new([
        body.clone(),
        aloft.clone(),
        felt.clone(),
    ]));
    let flights = Element::Set(BTreeSet::from([Element::Composite(
        CompositeObservation::new([aloft, body]),
    )]));
    // the clause "Tom flies" as a sense; its truth tracks the flight event
    let clause = Sense::Node {
        op: OperationDef::basic(MatchKind::Weak, 1),
        args: vec![
            SenseArg::Denot(Sense::Leaf(tom.clone())),
            SenseArg::Denot(Sense::Leaf(flights.clone())),
        ],
    };
    let process = Element::Composite(CompositeObservation::new(process.into_iter().cloned()));
    let attitude = Element::Relation(Relation::new(
        RelationKind::Mental { knowledge, product: ProductKind::Sense },
        [vec![process, Element::SenseElem(Box::new(clause.clone()))]],
    ));
    let model = builder
        .element("tom", tom.clone())
        .element("flights", flights)
        .element("attitude", attitude.clone())
        .build()
        .unwrap();

    // "Tom believes/knows <clause>": bind the product at sense level, then
    // the agent by overlap
    let inner = Sense::Node {
        op: OperationDef::Basic { match_kind: MatchKind::Exact, var: 2, arg_level: ArgLevel::Sense },
        args: vec![SenseArg::SenseOf(clause), SenseArg::Denot(Sense::Leaf(attitude))],
    };
    let sense = Sense::Node {
        op: OperationDef::basic(MatchKind::Weak, 1),
        args: vec![SenseArg::Denot(Sense::Leaf(tom)), SenseArg::Denot(inner)],
    };
    (model, sense)
}

fn main() {
    println!("verb      clause  process   -> verdict");
    for knowledge in [false, true] {
        for clause_true in [true, false] {
            for state in ["verified", "refuted", "neither"] {
                let (model, sense) = scene(knowledge, clause_true, state);
                let evaluator = Evaluator::new(&model, LogicKind::Kleene);
                let verdict = evaluator.eval(&sense).unwrap();
                println!(
                    "{:<9} {:<7} {:<9} -> {verdict}",
                    if knowledge { "knows" } else { "believes" },
                    if clause_true { "true" } else { "false" },
                    state,
                );
            }
        }
    }
    println!();
    println!("believing needs only the mental process to be verified;");
    println!("knowing fails as soon as the product fails.");
}
