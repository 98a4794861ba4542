//! Modal operations over the full meaning set of a multi-meaning clause.
//! With the same token on both sides of an identity, every reading pairs
//! an element with itself, so necessity holds; with two tokens the
//! readings diverge and only possibility survives.
//!
//! Run with: cargo run --example modality

use std::collections::BTreeMap;

use cogsem::interp::{interpret, render_sense, DepTree};
use cogsem::lexicon::{
    Context, DenotationRef, Lexicon, MatchKind, MeaningMode, ModalSort, OperationDef,
};
use cogsem::model::{CognitiveModel, Element, Relation, RelationKind};
use cogsem::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use cogsem::truth::{Evaluator, LogicKind};
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

fn identity_clause(left: &str, right: &str) -> DepTree {
    DepTree::node_with_convention(
        DepTree::leaf(left),
        DepTree::node_with_convention(DepTree::leaf(right), DepTree::leaf("is"), "ID-OBJ"),
        "ID-SUBJ",
    )
}

fn main() {
    // two candidate referents for the ambiguous names
    let a = sighting(1, 0, "alpha");
    let b = sighting(1, 1, "beta");
    let c1 = Element::Composite(CompositeObservation::new([a.clone()]));
    let c2 = Element::Composite(CompositeObservation::new([b.clone()]));
    let iden = Element::Relation(Relation::new(
        RelationKind::Identity,
        [vec![c1.clone(), c1.clone()], vec![c2.clone(), c2.clone()]],
    ));
    let model = CognitiveModel::builder()
        .world("real", 1)
        .observation("a", a)
        .unwrap()
        .observation("b", b)
        .unwrap()
        .element("c1", c1)
        .element("c2", c2)
        .element("iden", iden)
        .build()
        .unwrap();

    let mut lexicon = Lexicon::new();
    for token in ["u", "v"] {
        lexicon.define(
            token,
            vec![
                DenotationRef::Named(Symbol::new("c1")),
                DenotationRef::Named(Symbol::new("c2")),
            ],
        );
    }
    lexicon.define("is", vec![DenotationRef::Named(Symbol::new("iden"))]);
    lexicon.define(
        "necessarily",
        vec![DenotationRef::Builtin(OperationDef::Modal {
            sort: ModalSort::Necessity,
            mode: MeaningMode::Sense,
        })],
    );
    lexicon.define(
        "possibly",
        vec![DenotationRef::Builtin(OperationDef::Modal {
            sort: ModalSort::Possibility,
            mode: MeaningMode::Sense,
        })],
    );

    let context = Context {
        conventions: BTreeMap::from([
            (Symbol::new("ID-SUBJ"), vec![OperationDef::basic(MatchKind::Exact, 1)]),
            (Symbol::new("ID-OBJ"), vec![OperationDef::basic(MatchKind::Exact, 2)]),
        ]),
        ..Context::default()
    };

    let evaluator = Evaluator::new(&model, LogicKind::Kleene);
    for (modal, left, right) in [
        ("necessarily", "u", "u"),
        ("necessarily", "u", "v"),
        ("possibly", "u", "v"),
    ] {
        let tree = DepTree::node(identity_clause(left, right), DepTree::leaf(modal));
        let result = evaluator.eval_sentence(&tree, &lexicon, &context).unwrap();
        println!("{modal} ({left} is {right}): {}", result.verdict);
        // show the reading set the modal operation quantified over
        if let cogsem::interp::Sense::ModalNode { clause_senses, .. } = &result.triple.sense {
            for s in clause_senses {
                let v = evaluator.eval(s).unwrap();
                println!("    reading {} = {v}", render_sense(s, &model));
            }
        }
    }

    // the clause alone stays multi-meaning; interpretation reports which
    // nodes are ambiguous rather than inventing a verdict
    let bare = identity_clause("u", "v");
    let meanings = interpret(&bare, &lexicon, &context, &model).unwrap();
    println!(
        "bare clause \"u is v\": root readings = {}, effective = {}",
        meanings.root().triples.len(),
        meanings.is_effective()
    );
}
