//! Shared in-memory fixtures for unit tests: a small garden world with
//! flowers, persons, ties, running events and mental processes.

use std::collections::{BTreeMap, BTreeSet};

use crate::lexicon::{
    Context, DenotationRef, Lexicon, MatchKind, OperationDef, QuantSort,
};
use crate::model::{CognitiveModel, Element, ProductKind, Relation, RelationKind};
use crate::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use crate::value::{ParamValue, Symbol};

pub fn obs_in(
    world: &[&str],
    labels: &[&str],
    status: ObsStatus,
    t: i64,
    s1: &[i64],
    s0: &[i64],
    result: &str,
) -> PrimitiveObservation {
    let power = ResolutionPower::simple("sight");
    let observer = ObserverSpec::new(
        labels.iter().map(|s| Symbol::new(s)).collect(),
        power,
        vec![ParamValue::Int(t), ParamValue::Tuple(s1.to_vec())],
        status,
    )
    .unwrap();
    PrimitiveObservation::new(
        WorldPath::new(world.iter().map(|s| Symbol::new(s)).collect()).unwrap(),
        observer,
        vec![ParamValue::Tuple(s0.to_vec())],
        ParamValue::sym(result),
    )
    .unwrap()
}

pub fn obs(
    labels: &[&str],
    status: ObsStatus,
    t: i64,
    s0: &[i64],
    result: &str,
) -> PrimitiveObservation {
    obs_in(&["real"], labels, status, t, &[9], s0, result)
}

pub fn comp(members: &[&PrimitiveObservation]) -> CompositeObservation {
    CompositeObservation::new(members.iter().map(|o| (*o).clone()))
}

pub fn set(members: &[Element]) -> Element {
    Element::Set(members.iter().cloned().collect())
}

pub fn rel(kind: RelationKind, rows: &[&[Element]]) -> Element {
    Element::Relation(Relation::new(kind, rows.iter().map(|r| r.to_vec())))
}

pub struct Garden {
    pub model: CognitiveModel,
    pub lexicon: Lexicon,
    pub context: Context,
    pub flower1: Element,
    pub flower3: Element,
}

/// A 1-d world with three flowers (two ever red), two persons, a tie and a
/// wearing relation, plus an identity relation over the persons.
pub fn garden() -> Garden {
    use ObsStatus::Actual as Ac;
    let f1a = obs(&["ann", "see"], Ac, 1, &[1], "red");
    let f1b = obs(&["ann", "see"], Ac, 2, &[1], "red");
    let f2a = obs(&["ann", "see"], Ac, 1, &[2], "blue");
    let f2b = obs(&["ann", "see"], Ac, 2, &[2], "blue");
    let f3a = obs(&["ann", "see"], Ac, 1, &[3], "green");
    let f3b = obs(&["ann", "see"], Ac, 2, &[3], "red");
    let m1a = obs(&["bob", "see"], Ac, 1, &[4], "man-standing");
    let m1b = obs(&["bob", "see"], Ac, 2, &[4], "man-walking");
    let m2a = obs(&["bob", "see"], Ac, 1, &[5], "man-sitting");
    let t1a = obs(&["bob", "see"], Ac, 1, &[6], "blue");
    let t1b = obs(&["bob", "see"], Ac, 2, &[6], "blue");

    let flower1 = Element::Composite(comp(&[&f1a, &f1b]));
    let flower2 = Element::Composite(comp(&[&f2a, &f2b]));
    let flower3 = Element::Composite(comp(&[&f3a, &f3b]));
    let red = set(&[
        Element::Composite(comp(&[&f1a, &f1b])),
        Element::Composite(comp(&[&f3b])),
    ]);
    let blue = set(&[Element::Composite(comp(&[&t1a, &t1b]))]);
    let flowers = set(&[flower1.clone(), flower2.clone(), flower3.clone()]);
    let man1 = Element::Composite(comp(&[&m1a, &m1b]));
    let man2 = Element::Composite(comp(&[&m2a]));
    let men = set(&[man1.clone(), man2.clone()]);
    let tie1 = Element::Composite(comp(&[&t1a, &t1b]));
    let ties = set(std::slice::from_ref(&tie1));
    // wearing pairs the man's walk with the worn tie
    let wear = rel(
        RelationKind::Standard,
        &[&[Element::Composite(comp(&[&m1b])), Element::Composite(comp(&[&t1b]))]],
    );
    let persons = rel(
        RelationKind::Identity,
        &[&[man1.clone(), man1.clone()], &[man2.clone(), man2.clone()]],
    );

    let mut builder = CognitiveModel::builder().world("real", 1);
    for (id, o) in [
        ("f1a", &f1a),
        ("f1b", &f1b),
        ("f2a", &f2a),
        ("f2b", &f2b),
        ("f3a", &f3a),
        ("f3b", &f3b),
        ("m1a", &m1a),
        ("m1b", &m1b),
        ("m2a", &m2a),
        ("t1a", &t1a),
        ("t1b", &t1b),
    ] {
        builder = builder.observation(id, o.clone()).unwrap();
    }
    let model = builder
        .element("red", red)
        .element("blue", blue)
        .element("flowers", flowers)
        .element("flower1", flower1.clone())
        .element("flower2", flower2.clone())
        .element("flower3", flower3.clone())
        .element("man1", man1)
        .element("man2", man2)
        .element("men", men)
        .element("tie1", tie1)
        .element("ties", ties)
        .element("wear", wear)
        .element("iden", persons)
        .build()
        .unwrap();

    let mut lexicon = Lexicon::new();
    lexicon.define("red", vec![DenotationRef::Named(Symbol::new("red"))]);
    lexicon.define("blue", vec![DenotationRef::Named(Symbol::new("blue"))]);
    lexicon.define("flowers", vec![DenotationRef::Named(Symbol::new("flowers"))]);
    lexicon.define("man", vec![DenotationRef::Named(Symbol::new("men"))]);
    lexicon.define("tie", vec![DenotationRef::Named(Symbol::new("ties"))]);
    lexicon.define(
        "with",
        vec![DenotationRef::Builtin(OperationDef::Assoc {
            relation: Symbol::new("wear"),
            subject_var: 1,
            object_var: 2,
        })],
    );

    let context = Context {
        conventions: BTreeMap::from([(
            Symbol::new("ADJ+NOUN"),
            vec![OperationDef::quantifier(QuantSort::Exists, MatchKind::Weak, 1)],
        )]),
        ..Context::default()
    };

    Garden { model, lexicon, context, flower1, flower3 }
}

/// Assemble a mental-attitude relation element from process/product rows.
pub fn mental_rel(knowledge: bool, product: ProductKind, rows: &[&[Element]]) -> Element {
    rel(RelationKind::Mental { knowledge, product }, rows)
}

/// Convenience: a one-row standard relation.
pub fn pairs(rows: &[(&Element, &Element)]) -> Element {
    Element::Relation(Relation::new(
        RelationKind::Standard,
        rows.iter().map(|(a, b)| vec![(*a).clone(), (*b).clone()]),
    ))
}

/// Empty set element.
pub fn empty() -> Element {
    Element::Set(BTreeSet::new())
}
