//! The full pipeline on "Tom ran": a model of eight observations, a
//! two-entry lexicon, a context restricting the world and time window,
//! and one tree. Three variants of the model drive the verdict through
//! true, undecided, and false.
//!
//! Run with: cargo run --example evaluate_sentence

use std::collections::{BTreeMap, BTreeSet};

use cogsem::interp::DepTree;
use cogsem::lexicon::{Context, DenotationRef, Lexicon, MatchKind, OperationDef};
use cogsem::model::{CognitiveModel, Element, Region, Segment};
use cogsem::observation::{
    ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower, WorldPath,
};
use cogsem::truth::{Evaluator, LogicKind};
use cogsem::value::{ParamValue, Symbol};

fn seen(t: i64, place: i64, result: &str, status: ObsStatus) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        vec![Symbol::new("mary"), Symbol::new("see")],
        ResolutionPower::simple("sight"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![9])],
        status,
    )
    .unwrap();
    PrimitiveObservation::new(
        WorldPath::world(&["real"]),
        observer,
        vec![ParamValue::Tuple(vec![place])],
        ParamValue::sym(result),
    )
    .unwrap()
}

/// The school-run model. `doubted` turns the middle running observation
/// into imagination; `refuted` adds an actual observation contradicting
/// it.
fn school_model(doubted: bool, refuted: bool) -> CognitiveModel {
    use ObsStatus::{Actual, Imaginary};
    let mid_status = if doubted { Imaginary } else { Actual };
    let observations = [
        ("o1", seen(3, 0, "tom-home", Actual)),
        ("o2", seen(6, 10, "tom-runs", Actual)),
        ("o3", seen(7, 10, "tom-runs", mid_status)),
        ("o4", seen(8, 10, "tom-runs", Actual)),
        ("o5", seen(9, 0, "tom-home", Actual)),
        ("o6", seen(2, 0, "tom-sleeps", Actual)),
        ("o7", seen(50, 10, "tom-runs", Actual)),
        (
            "o8",
            if refuted {
                seen(7, 10, "tom-walks", Actual)
            } else {
                seen(6, 11, "mary-walks", Actual)
            },
        ),
    ];
    let mut builder = CognitiveModel::builder().world("real", 1);
    for (id, o) in &observations {
        builder = builder.observation(id, o.clone()).unwrap();
    }
    let school: Region = Region::from([vec![10]]);
    let run_frame: BTreeMap<_, _> = (6..=8).map(|t| (t, school.clone())).collect();
    let late_frame: BTreeMap<_, _> = [(50, school)].into_iter().collect();
    let tom = Element::Composite(
        observations
            .iter()
            .filter(|(id, _)| ["o1", "o2", "o3", "o4", "o5", "o6"].contains(id))
            .map(|(_, o)| o.clone())
            .collect(),
    );
    builder
        .process("run-at-school", "real", Segment::new(6, 8).unwrap(), run_frame)
        .process("late-run", "real", Segment::new(50, 50).unwrap(), late_frame)
        .element("tom", tom)
        .build()
        .map(|model| {
            // the verb class gathers the running processes as composites
            let runs = Element::Set(BTreeSet::from([
                Element::Composite(model.process(&Symbol::new("run-at-school")).unwrap().members.clone()),
                Element::Composite(model.process(&Symbol::new("late-run")).unwrap().members.clone()),
            ]));
            let mut rebuilt = CognitiveModel::builder().world("real", 1);
            for o in model.observations().iter() {
                let id = model.id_of(o).unwrap().to_string();
                rebuilt = rebuilt.observation(&id, o.clone()).unwrap();
            }
            rebuilt
                .element("tom", model.named(&Symbol::new("tom")).unwrap().clone())
                .element("runs", runs)
                .build()
                .unwrap()
        })
        .unwrap()
}

fn main() {
    let mut lexicon = Lexicon::new();
    lexicon.define("Tom", vec![DenotationRef::Named(Symbol::new("tom"))]);
    lexicon.define("ran", vec![DenotationRef::Named(Symbol::new("runs"))]);

    let context = Context {
        selected_world: Some(Symbol::new("real")),
        time_window: Some(Segment::new(6, 8).unwrap()),
        conventions: BTreeMap::from([(
            Symbol::new("SUBJ+VERB"),
            vec![OperationDef::basic(MatchKind::Weak, 1)],
        )]),
        ..Context::default()
    };
    let tree = DepTree::node_with_convention(DepTree::leaf("Tom"), DepTree::leaf("ran"), "SUBJ+VERB");

    for (label, doubted, refuted) in [
        ("every observation actual", false, false),
        ("one observation imagined, unwitnessed", true, false),
        ("the imagined observation refuted", true, true),
    ] {
        let model = school_model(doubted, refuted);
        let evaluator = Evaluator::new(&model, LogicKind::Kleene);
        let result = evaluator.eval_sentence(&tree, &lexicon, &context).unwrap();
        println!("{label}:");
        println!("  verdict: {}  ({})", result.verdict, result.trace.kind);
        println!(
            "  content: {} process(es) after world/time narrowing and subject overlap",
            result.trace.content_size.unwrap_or(0)
        );
        for w in &result.trace.witnesses {
            let relation = if w.refutes { "refuted by" } else { "verified by" };
            println!("  witness: {} {} {}", w.imaginary, relation, w.actual);
        }
    }
}
