//! The four-valued connective tables: the vacancy rule first, then the
//! chosen three-valued logic. Also an associated-relation connective
//! whose truth needs more than the truth of its clauses.
//!
//! Run with: cargo run --example connectives

use std::collections::BTreeSet;

use cogsem::interp::{Sense, SenseArg};
use cogsem::lexicon::{ConnectiveKind, MatchKind, OperationDef, TableConn};
use cogsem::model::{CognitiveModel, Element, Relation, RelationKind};
use cogsem::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use cogsem::truth::{connective_truth, Evaluator, LogicKind, TruthValue};
use cogsem::value::{ParamValue, Symbol};

fn sighting(labels: &[&str], status: ObsStatus, t: i64, x: i64, result: &str) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        labels.iter().map(|l| Symbol::new(l)).collect(),
        ResolutionPower::simple("sight"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![0])],
        status,
    )
    .unwrap();
    PrimitiveObservation::new(
        WorldPath::world(&["real"]),
        observer,
        vec![ParamValue::Tuple(vec![x])],
        ParamValue::sym(result),
    )
    .unwrap()
}

fn main() {
    let order = [TruthValue::True, TruthValue::False, TruthValue::Undecided, TruthValue::Vacant];
    for logic in [LogicKind::Kleene, LogicKind::Lukasiewicz] {
        println!("--- {logic} ---");
        for conn in [TableConn::And, TableConn::Or, TableConn::Implies, TableConn::Iff, TableConn::Xor] {
            println!("{}:", conn.name());
            print!("      ");
            for b in order {
                print!("{b}  ");
            }
            println!();
            for a in order {
                print!("  {a} | ");
                for b in order {
                    print!("{}  ", connective_truth(logic, conn, a, Some(b)));
                }
                println!();
            }
        }
    }
    print!("not: ");
    for a in order {
        print!("¬{a}={}  ", connective_truth(LogicKind::Kleene, TableConn::Not, a, None));
    }
    println!("\n");

    // an associated-relation connective: two simultaneous events linked by
    // a when-relation; truth asks the relation, not just the two verdicts
    use ObsStatus::Actual;
    let thunder_obs = sighting(&["ann"], Actual, 5, 0, "thunder");
    let flash_obs = sighting(&["ann"], Actual, 5, 1, "flash");
    let thunder = Element::Composite(CompositeObservation::new([thunder_obs.clone()]));
    let flash = Element::Composite(CompositeObservation::new([flash_obs.clone()]));
    let thunder_events = Element::Set(BTreeSet::from([thunder.clone()]));
    let flash_events = Element::Set(BTreeSet::from([flash.clone()]));
    let same_moment = Element::Relation(Relation::new(
        RelationKind::Standard,
        [vec![thunder_events.clone(), flash_events.clone()]],
    ));
    let model = CognitiveModel::builder()
        .world("real", 1)
        .observation("t", thunder_obs)
        .unwrap()
        .observation("f", flash_obs)
        .unwrap()
        .element("same-moment", same_moment)
        .build()
        .unwrap();
    let prop = |domain: &Element, class: &Element| Sense::Node {
        op: OperationDef::basic(MatchKind::Weak, 1),
        args: vec![
            SenseArg::Denot(Sense::Leaf(domain.clone())),
            SenseArg::Denot(Sense::Leaf(class.clone())),
        ],
    };
    let heard = prop(&thunder, &thunder_events);
    let saw = prop(&flash, &flash_events);
    let linked = |a: Sense, b: Sense| Sense::Node {
        op: OperationDef::Connective(ConnectiveKind::Associated {
            relation: Symbol::new("same-moment"),
        }),
        args: vec![SenseArg::Denot(a), SenseArg::Denot(b)],
    };
    let evaluator = Evaluator::new(&model, LogicKind::Kleene);
    println!(
        "\"when thunder, flash\" (pair in the relation):      {}",
        evaluator.eval(&linked(heard.clone(), saw.clone())).unwrap()
    );
    println!(
        "\"when flash, thunder\" (pair not in the relation):  {}",
        evaluator.eval(&linked(saw, heard)).unwrap()
    );
}
