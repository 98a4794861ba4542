//! Interpret "red flowers": look tokens up in a lexicon, compose the pair
//! through a convention-supplied operation, and print all three meanings
//! of every node: denotation, sense, and explanation.
//!
//! Run with: cargo run --example compose_phrase

use std::collections::{BTreeMap, BTreeSet};

use cogsem::interp::{interpret, render_denotation, render_explanation, render_sense, DepTree};
use cogsem::lexicon::{Context, DenotationRef, Lexicon, MatchKind, OperationDef, QuantSort};
use cogsem::model::{CognitiveModel, Element};
use cogsem::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use cogsem::value::{ParamValue, Symbol};

fn sighting(t: i64, x: i64, result: &str) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        vec![Symbol::new("ann"), Symbol::new("see")],
        ResolutionPower::simple("sight"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![9])],
        ObsStatus::Actual,
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
    // three flowers observed twice; the first is red throughout, the
    // third turns red later, the second never does
    let sightings = [
        ("f1a", sighting(1, 1, "red")),
        ("f1b", sighting(2, 1, "red")),
        ("f2a", sighting(1, 2, "blue")),
        ("f2b", sighting(2, 2, "blue")),
        ("f3a", sighting(1, 3, "green")),
        ("f3b", sighting(2, 3, "red")),
    ];
    let comp = |ids: &[&str]| -> Element {
        Element::Composite(CompositeObservation::new(
            sightings
                .iter()
                .filter(|(id, _)| ids.contains(id))
                .map(|(_, o)| o.clone()),
        ))
    };
    let flower1 = comp(&["f1a", "f1b"]);
    let flower2 = comp(&["f2a", "f2b"]);
    let flower3 = comp(&["f3a", "f3b"]);
    // a red instance is the red-looking slice of a thing
    let red = Element::Set(BTreeSet::from([comp(&["f1a", "f1b"]), comp(&["f3b"])]));
    let flowers = Element::Set(BTreeSet::from([flower1.clone(), flower2, flower3.clone()]));

    let mut builder = CognitiveModel::builder().world("real", 1);
    for (id, o) in &sightings {
        builder = builder.observation(id, o.clone()).unwrap();
    }
    let model = builder
        .element("red", red)
        .element("flowers", flowers)
        .element("flower1", flower1)
        .element("flower3", flower3)
        .build()
        .unwrap();

    let mut lexicon = Lexicon::new();
    lexicon.define("red", vec![DenotationRef::Named(Symbol::new("red"))]);
    lexicon.define("flowers", vec![DenotationRef::Named(Symbol::new("flowers"))]);

    // no function word links the two tokens, so the operation comes from a
    // convention: keep the flowers some red instance overlaps
    let context = Context {
        conventions: BTreeMap::from([(
            Symbol::new("ADJ+NOUN"),
            vec![OperationDef::quantifier(QuantSort::Exists, MatchKind::Weak, 1)],
        )]),
        ..Context::default()
    };

    let tree = DepTree::node_with_convention(
        DepTree::leaf("red"),
        DepTree::leaf("flowers"),
        "ADJ+NOUN",
    );
    let meanings = interpret(&tree, &lexicon, &context, &model).unwrap();
    println!(
        "\"{}\" ({} nodes, effective: {})\n",
        meanings.root().surface,
        meanings.nodes.len(),
        meanings.is_effective()
    );
    for node in &meanings.nodes {
        println!("#{} \"{}\"  readings={}", node.id, node.surface, node.triples.len());
        for triple in &node.triples {
            println!("  denotation:  {}", render_denotation(&triple.denotation, &model));
            println!("  sense:       {}", render_sense(&triple.sense, &model));
            println!("  explanation: {}", render_explanation(&triple.explanation, &model));
        }
    }

    let root = &meanings.root().triples[0];
    if let cogsem::interp::Denotation::Elem(Element::Set(picked)) = &root.denotation {
        println!("\nthe phrase picks out {} of 3 flowers", picked.len());
        for e in picked {
            println!("  {}", render_denotation(&cogsem::interp::Denotation::Elem(e.clone()), &model));
        }
    }
}
