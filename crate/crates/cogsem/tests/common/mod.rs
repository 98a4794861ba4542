//! Shared helpers for the integration suites.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use cogsem::model::Element;
use cogsem::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower,
    WorldPath,
};
use cogsem::value::{ParamValue, Symbol};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn sight() -> Arc<ResolutionPower> {
    ResolutionPower::simple("sight")
}

pub fn obs_in(
    world: &[&str],
    labels: &[&str],
    status: ObsStatus,
    t: i64,
    s1: &[i64],
    s0: &[i64],
    result: &str,
) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        labels.iter().map(|s| Symbol::new(s)).collect(),
        sight(),
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
    s1: &[i64],
    s0: &[i64],
    result: &str,
) -> PrimitiveObservation {
    obs_in(&["real"], labels, status, t, s1, s0, result)
}

pub fn comp(members: &[&PrimitiveObservation]) -> CompositeObservation {
    CompositeObservation::new(members.iter().map(|o| (*o).clone()))
}

pub fn set(members: &[Element]) -> Element {
    Element::Set(members.iter().cloned().collect())
}
