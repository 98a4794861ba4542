//! Quantified propositions over change events: "all trees turned green",
//! its existential counterpart, the uniqueness reading, and a strict
//! majority threshold.
//!
//! Run with: cargo run --example quantifiers

use std::collections::BTreeSet;

use cogsem::interp::{Sense, SenseArg};
use cogsem::lexicon::{MatchKind, OperationDef, QuantSort, Theta};
use cogsem::model::{CognitiveModel, Element, Relation, RelationKind};
use cogsem::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use cogsem::truth::{Evaluator, LogicKind};
use cogsem::value::{ParamValue, Symbol};

fn sighting(labels: &[&str], status: ObsStatus, t: i64, x: i64, result: &str) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        labels.iter().map(|l| Symbol::new(l)).collect(),
        ResolutionPower::simple("sight"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![x])],
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

struct Orchard {
    model: CognitiveModel,
    trees: Element,
    turned_green: Sense,
}

/// `witnessed[i]` decides whether tree i's green state was actually seen
/// or only imagined and then contradicted.
fn orchard(witnessed: &[bool]) -> Orchard {
    use ObsStatus::{Actual, Imaginary};
    let mut builder = CognitiveModel::builder().world("real", 1);
    let mut trees = BTreeSet::new();
    let mut greens = BTreeSet::new();
    let mut rows = Vec::new();
    for (i, seen) in witnessed.iter().enumerate() {
        let x = i as i64;
        let bare = sighting(&["ann", "see"], Actual, 1, x, "bare");
        let status = if *seen { Actual } else { Imaginary };
        let green = sighting(&["ann", "see"], status, 2, x, "green");
        builder = builder
            .observation(&format!("bare{i}"), bare.clone())
            .unwrap()
            .observation(&format!("green{i}"), green.clone())
            .unwrap();
        if !*seen {
            let contradiction = sighting(&["bob", "see"], Actual, 2, x, "brown");
            builder = builder.observation(&format!("brown{i}"), contradiction).unwrap();
        }
        let first = Element::Composite(CompositeObservation::new([bare.clone()]));
        let second = Element::Composite(CompositeObservation::new([green.clone()]));
        trees.insert(Element::Composite(CompositeObservation::new([bare, green])));
        greens.insert(second.clone());
        rows.push(vec![first, second]);
    }
    let model = builder.build().unwrap();
    let turn = Element::Relation(Relation::new(RelationKind::Standard, rows));
    // "turned green": keep change events whose result state meets a green
    // instance, leaving the tree position open
    let turned_green = Sense::Node {
        op: OperationDef::quantifier(QuantSort::Exists, MatchKind::Weak, 2),
        args: vec![
            SenseArg::Denot(Sense::Leaf(Element::Set(greens))),
            SenseArg::Denot(Sense::Leaf(turn)),
        ],
    };
    Orchard { model, trees: Element::Set(trees), turned_green }
}

fn quantify(sort: QuantSort, orchard: &Orchard) -> Sense {
    Sense::Node {
        op: OperationDef::quantifier(sort, MatchKind::Weak, 1),
        args: vec![
            SenseArg::Denot(Sense::Leaf(orchard.trees.clone())),
            SenseArg::Denot(orchard.turned_green.clone()),
        ],
    }
}

fn main() {
    for (label, witnessed) in [
        ("all three trees witnessed", vec![true, true, true]),
        ("two of three witnessed", vec![true, true, false]),
        ("none witnessed", vec![false, false, false]),
    ] {
        let orchard = orchard(&witnessed);
        let evaluator = Evaluator::new(&orchard.model, LogicKind::Kleene);
        let every = evaluator.eval(&quantify(QuantSort::ForAll, &orchard)).unwrap();
        let some = evaluator.eval(&quantify(QuantSort::Exists, &orchard)).unwrap();
        let one = evaluator.eval(&quantify(QuantSort::Unique, &orchard)).unwrap();
        println!("{label}: all={every} some={some} exactly-one={one}");
    }

    // "most" with the strict more-than-90% reading over ten trees
    let mut witnessed = vec![true; 9];
    witnessed.push(false);
    let orchard = orchard(&witnessed);
    let evaluator = Evaluator::new(&orchard.model, LogicKind::Kleene);
    let strict = Theta::from_fraction(0.9).unwrap();
    let most = Sense::Node {
        op: OperationDef::quantifier(QuantSort::Most(Some(strict)), MatchKind::Weak, 1),
        args: vec![
            SenseArg::Denot(Sense::Leaf(orchard.trees.clone())),
            SenseArg::Denot(orchard.turned_green.clone()),
        ],
    };
    println!(
        "nine of ten witnessed, threshold >90%: {}",
        evaluator.eval(&most).unwrap()
    );
    let majority = Sense::Node {
        op: OperationDef::quantifier(QuantSort::Most(None), MatchKind::Weak, 1),
        args: vec![
            SenseArg::Denot(Sense::Leaf(orchard.trees.clone())),
            SenseArg::Denot(orchard.turned_green.clone()),
        ],
    };
    println!(
        "nine of ten witnessed, plain majority:  {}",
        evaluator.eval(&majority).unwrap()
    );
}
