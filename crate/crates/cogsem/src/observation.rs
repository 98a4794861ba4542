//! Primitive and composite observations, extraction operations, and the
//! store-level consistency checks.
//!
//! A primitive observation is the minimal unit of recorded information:
//! where it is from (a world path), who recorded it in what state (an
//! observer), which point of the observer's resolution grid it concerns,
//! and the obtained result. Everything else in the engine is built from
//! finite sets of these records.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::value::{DomainTag, ParamValue, Symbol, ValueError};

/// Nonempty sequence of world labels: the observed world, then optional
/// subworld, sub-subworld, and so on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldPath(Vec<Symbol>);

impl WorldPath {
    pub fn new(labels: Vec<Symbol>) -> Result<Self, ObservationError> {
        if labels.is_empty() {
            return Err(ObservationError::EmptyWorldPath);
        }
        Ok(WorldPath(labels))
    }

    pub fn world(labels: &[&str]) -> Self {
        WorldPath(labels.iter().map(|s| Symbol::new(s)).collect())
    }

    /// The top-level world label.
    pub fn top(&self) -> &Symbol {
        &self.0[0]
    }

    pub fn label(&self, depth: usize) -> Option<&Symbol> {
        self.0.get(depth)
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for WorldPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Whether an observation is treated as true of its world or as material
/// whose truth awaits verification by actual observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObsStatus {
    Actual,
    Imaginary,
}

impl fmt::Display for ObsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObsStatus::Actual => write!(f, "ac"),
            ObsStatus::Imaginary => write!(f, "im"),
        }
    }
}

/// Declaration of one parameter: its name and the kind of value it takes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamDecl {
    pub name: Symbol,
    pub domain: DomainTag,
}

impl ParamDecl {
    pub fn new(name: &str, domain: DomainTag) -> Self {
        ParamDecl { name: Symbol::new(name), domain }
    }
}

/// Named descriptor of what an observer can distinguish: its parameters,
/// partitioned into state parameters (describing the observer), resolution
/// parameters (dividing the received information into minimal pieces), and
/// the single result parameter.
///
/// Every power must declare the time parameter `t` (int) and the state
/// space group `s1` (tuple) among its state parameters, and the space
/// group `s0` (tuple) among its resolution parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResolutionPower {
    pub name: Symbol,
    pub state: Vec<ParamDecl>,
    pub resolution: Vec<ParamDecl>,
    pub result: ParamDecl,
}

pub const PARAM_TIME: &str = "t";
pub const PARAM_STATE_SPACE: &str = "s1";
pub const PARAM_SPACE: &str = "s0";

impl ResolutionPower {
    pub fn validate(&self) -> Result<(), ObservationError> {
        let find = |decls: &[ParamDecl], name: &str| -> Option<DomainTag> {
            decls.iter().find(|d| d.name.as_str() == name).map(|d| d.domain)
        };
        match find(&self.state, PARAM_TIME) {
            Some(DomainTag::Int) => {}
            _ => return Err(ObservationError::MissingRequiredParam {
                power: self.name.clone(),
                param: PARAM_TIME,
            }),
        }
        match find(&self.state, PARAM_STATE_SPACE) {
            Some(DomainTag::Tuple) => {}
            _ => return Err(ObservationError::MissingRequiredParam {
                power: self.name.clone(),
                param: PARAM_STATE_SPACE,
            }),
        }
        match find(&self.resolution, PARAM_SPACE) {
            Some(DomainTag::Tuple) => {}
            _ => return Err(ObservationError::MissingRequiredParam {
                power: self.name.clone(),
                param: PARAM_SPACE,
            }),
        }
        let mut seen = BTreeSet::new();
        for d in self.state.iter().chain(self.resolution.iter()).chain(std::iter::once(&self.result)) {
            if !seen.insert(d.name.clone()) {
                return Err(ObservationError::DuplicateParam {
                    power: self.name.clone(),
                    param: d.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// A minimal power: state `t`, `s1`; resolution `s0`; symbolic result.
    pub fn simple(name: &str) -> Arc<Self> {
        Arc::new(ResolutionPower {
            name: Symbol::new(name),
            state: vec![
                ParamDecl::new(PARAM_TIME, DomainTag::Int),
                ParamDecl::new(PARAM_STATE_SPACE, DomainTag::Tuple),
            ],
            resolution: vec![ParamDecl::new(PARAM_SPACE, DomainTag::Tuple)],
            result: ParamDecl::new("re", DomainTag::Sym),
        })
    }
}

/// The observer component: label sequence, resolution power, current
/// state values, and the actual/imaginary status.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObserverSpec {
    pub labels: Vec<Symbol>,
    pub power: Arc<ResolutionPower>,
    pub state: Vec<ParamValue>,
    pub status: ObsStatus,
}

impl ObserverSpec {
    pub fn new(
        labels: Vec<Symbol>,
        power: Arc<ResolutionPower>,
        state: Vec<ParamValue>,
        status: ObsStatus,
    ) -> Result<Self, ObservationError> {
        if labels.is_empty() {
            return Err(ObservationError::EmptyObserverLabels);
        }
        if state.len() != power.state.len() {
            return Err(ObservationError::StateArity {
                power: power.name.clone(),
                expected: power.state.len(),
                got: state.len(),
            });
        }
        for (decl, value) in power.state.iter().zip(state.iter()) {
            if value.tag() != decl.domain {
                return Err(ObservationError::ValueTag {
                    param: decl.name.clone(),
                    expected: decl.domain,
                    got: value.tag(),
                });
            }
        }
        Ok(ObserverSpec { labels, power, state, status })
    }

    fn state_value(&self, name: &str) -> Option<&ParamValue> {
        self.power
            .state
            .iter()
            .position(|d| d.name.as_str() == name)
            .map(|i| &self.state[i])
    }
}

/// One minimal piece of recorded information.
///
/// Identity is structural: two observations with identical components are
/// the same observation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveObservation {
    pub world: WorldPath,
    pub observer: ObserverSpec,
    pub resolution_point: Vec<ParamValue>,
    pub result: ParamValue,
}

impl PrimitiveObservation {
    pub fn new(
        world: WorldPath,
        observer: ObserverSpec,
        resolution_point: Vec<ParamValue>,
        result: ParamValue,
    ) -> Result<Self, ObservationError> {
        if resolution_point.len() != observer.power.resolution.len() {
            return Err(ObservationError::ResolutionArity {
                power: observer.power.name.clone(),
                expected: observer.power.resolution.len(),
                got: resolution_point.len(),
            });
        }
        for (decl, value) in observer.power.resolution.iter().zip(resolution_point.iter()) {
            if value.tag() != decl.domain {
                return Err(ObservationError::ValueTag {
                    param: decl.name.clone(),
                    expected: decl.domain,
                    got: value.tag(),
                });
            }
        }
        Ok(PrimitiveObservation { world, observer, resolution_point, result })
    }

    /// The value of a named parameter, or `None` when the parameter does
    /// not occur in this observation's construction.
    ///
    /// Recognized names: `w0`, `w1`, ... (world labels), every declared
    /// state and resolution parameter (including `t`, `s1`, `s0`),
    /// `result`, `acim`, and `observer` (the joined label sequence).
    pub fn extract(&self, param: &str) -> Option<ParamValue> {
        if let Some(rest) = param.strip_prefix('w') {
            if let Ok(depth) = rest.parse::<usize>() {
                return self.world.label(depth).map(|s| ParamValue::Sym(s.clone()));
            }
        }
        match param {
            "result" => return Some(self.result.clone()),
            "acim" => {
                return Some(ParamValue::sym(match self.observer.status {
                    ObsStatus::Actual => "ac",
                    ObsStatus::Imaginary => "im",
                }))
            }
            "observer" => {
                let joined = self
                    .observer
                    .labels
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join("/");
                return Some(ParamValue::Sym(Symbol::from(joined)));
            }
            _ => {}
        }
        if let Some(v) = self.observer.state_value(param) {
            return Some(v.clone());
        }
        self.observer
            .power
            .resolution
            .iter()
            .position(|d| d.name.as_str() == param)
            .map(|i| self.resolution_point[i].clone())
    }

    /// The time moment of this observation.
    pub fn time(&self) -> i64 {
        match self.observer.state_value(PARAM_TIME) {
            Some(ParamValue::Int(t)) => *t,
            _ => unreachable!("observer construction guarantees an integer t"),
        }
    }

    /// The space point of this observation (the `s0` resolution value).
    pub fn space(&self) -> &[i64] {
        let idx = self
            .observer
            .power
            .resolution
            .iter()
            .position(|d| d.name.as_str() == PARAM_SPACE)
            .expect("observer construction guarantees s0");
        match &self.resolution_point[idx] {
            ParamValue::Tuple(p) => p,
            _ => unreachable!("s0 is declared as a tuple"),
        }
    }

    pub fn is_actual(&self) -> bool {
        self.observer.status == ObsStatus::Actual
    }

    pub fn is_imaginary(&self) -> bool {
        self.observer.status == ObsStatus::Imaginary
    }

    /// True when the two observations agree on everything except possibly
    /// the observer label sequence and the status flag.
    fn same_context_up_to_labels(&self, other: &PrimitiveObservation) -> bool {
        self.world == other.world
            && self.observer.power == other.observer.power
            && self.observer.state == other.observer.state
            && self.resolution_point == other.resolution_point
    }
}

/// Membership tests over parameter values, closed under conjunction and
/// disjunction. An observation where a tested parameter is undefined
/// fails that test.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamPredicate {
    In(Symbol, BTreeSet<ParamValue>),
    And(Vec<ParamPredicate>),
    Or(Vec<ParamPredicate>),
}

impl ParamPredicate {
    pub fn member(param: &str, values: impl IntoIterator<Item = ParamValue>) -> Self {
        ParamPredicate::In(Symbol::new(param), values.into_iter().collect())
    }

    pub fn eval(&self, obs: &PrimitiveObservation) -> Result<bool, ValueError> {
        match self {
            ParamPredicate::In(param, range) => {
                let Some(value) = obs.extract(param.as_str()) else {
                    return Ok(false);
                };
                for candidate in range {
                    if value.try_eq(candidate)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            ParamPredicate::And(parts) => {
                for p in parts {
                    if !p.eval(obs)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ParamPredicate::Or(parts) => {
                for p in parts {
                    if p.eval(obs)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

/// A finite set of primitive observations.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeObservation(BTreeSet<PrimitiveObservation>);

impl CompositeObservation {
    pub fn new(members: impl IntoIterator<Item = PrimitiveObservation>) -> Self {
        CompositeObservation(members.into_iter().collect())
    }

    pub fn empty() -> Self {
        CompositeObservation(BTreeSet::new())
    }

    pub fn members(&self) -> &BTreeSet<PrimitiveObservation> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, obs: &PrimitiveObservation) -> bool {
        self.0.contains(obs)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PrimitiveObservation> {
        self.0.iter()
    }

    pub fn insert(&mut self, obs: PrimitiveObservation) {
        self.0.insert(obs);
    }

    pub fn intersection(&self, other: &CompositeObservation) -> CompositeObservation {
        CompositeObservation(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn union(&self, other: &CompositeObservation) -> CompositeObservation {
        CompositeObservation(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &CompositeObservation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn overlaps(&self, other: &CompositeObservation) -> bool {
        self.0.intersection(&other.0).next().is_some()
    }

    /// Deduplicated set of defined values of `param` over the members.
    pub fn extract_set(&self, param: &str) -> BTreeSet<ParamValue> {
        self.0.iter().filter_map(|a| a.extract(param)).collect()
    }

    /// The subset of members satisfying the predicate.
    pub fn filter(&self, pred: &ParamPredicate) -> Result<CompositeObservation, ValueError> {
        let mut kept = BTreeSet::new();
        for a in &self.0 {
            if pred.eval(a)? {
                kept.insert(a.clone());
            }
        }
        Ok(CompositeObservation(kept))
    }

    pub fn imaginary_members(&self) -> impl Iterator<Item = &PrimitiveObservation> {
        self.0.iter().filter(|a| a.is_imaginary())
    }

    /// Every imaginary member has a witness in `actuals` that verifies it.
    /// Vacuously true when there is no imaginary member.
    pub fn is_directly_verified(&self, actuals: &BTreeSet<PrimitiveObservation>) -> bool {
        self.imaginary_members()
            .all(|a| actuals.iter().any(|b| directly_verifies(b, a)))
    }

    /// Every imaginary member has a witness in `actuals` that refutes it.
    pub fn is_directly_refuted(&self, actuals: &BTreeSet<PrimitiveObservation>) -> bool {
        self.imaginary_members()
            .all(|a| actuals.iter().any(|b| directly_refutes(b, a)))
    }
}

impl FromIterator<PrimitiveObservation> for CompositeObservation {
    fn from_iter<T: IntoIterator<Item = PrimitiveObservation>>(iter: T) -> Self {
        CompositeObservation(iter.into_iter().collect())
    }
}

/// A sequence of composites is verified when every composite in it is.
pub fn sequence_directly_verified(
    seq: &[CompositeObservation],
    actuals: &BTreeSet<PrimitiveObservation>,
) -> bool {
    seq.iter().all(|c| c.is_directly_verified(actuals))
}

pub fn sequence_directly_refuted(
    seq: &[CompositeObservation],
    actuals: &BTreeSet<PrimitiveObservation>,
) -> bool {
    seq.iter().all(|c| c.is_directly_refuted(actuals))
}

/// The actual observation `witness` verifies the imaginary observation
/// `target`: identical components except that the status flags differ and
/// the observer labels may differ.
pub fn directly_verifies(witness: &PrimitiveObservation, target: &PrimitiveObservation) -> bool {
    witness.is_actual()
        && target.is_imaginary()
        && witness.same_context_up_to_labels(target)
        && witness.result == target.result
}

/// The actual observation `witness` refutes the imaginary observation
/// `target`: identical components except that the status flags differ, the
/// observer labels may differ, and the results differ.
pub fn directly_refutes(witness: &PrimitiveObservation, target: &PrimitiveObservation) -> bool {
    witness.is_actual()
        && target.is_imaginary()
        && witness.same_context_up_to_labels(target)
        && witness.result != target.result
}

/// An ordered violating pair, smaller observation first.
pub type ViolationPair = (PrimitiveObservation, PrimitiveObservation);

fn ordered_pair(a: &PrimitiveObservation, b: &PrimitiveObservation) -> ViolationPair {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn all_pairs(
    set: &BTreeSet<PrimitiveObservation>,
) -> impl Iterator<Item = (&PrimitiveObservation, &PrimitiveObservation)> {
    set.iter()
        .enumerate()
        .flat_map(move |(i, a)| set.iter().skip(i + 1).map(move |b| (a, b)))
}

/// Pairs that agree on the full observing context (world, observer with
/// its labels, power, state and status, and resolution point) but record
/// different results. An empty list means every context has one result.
pub fn unique_result_violations(set: &BTreeSet<PrimitiveObservation>) -> Vec<ViolationPair> {
    all_pairs(set)
        .filter(|(a, b)| {
            a.same_context_up_to_labels(b)
                && a.observer.labels == b.observer.labels
                && a.observer.status == b.observer.status
                && a.result != b.result
        })
        .map(|(a, b)| ordered_pair(a, b))
        .collect()
}

/// Pairs of distinct observers that disagree: identical except for the
/// observer label sequence (which differs) and the result (which differs).
pub fn weak_consistency_violations(set: &BTreeSet<PrimitiveObservation>) -> Vec<ViolationPair> {
    all_pairs(set)
        .filter(|(a, b)| {
            a.same_context_up_to_labels(b)
                && a.observer.status == b.observer.status
                && a.observer.labels != b.observer.labels
                && a.result != b.result
        })
        .map(|(a, b)| ordered_pair(a, b))
        .collect()
}

/// Pairs of distinct observers found in the same state: different label
/// sequences but the same top world label, the same state values and the
/// same status flag.
pub fn strong_consistency_violations(set: &BTreeSet<PrimitiveObservation>) -> Vec<ViolationPair> {
    all_pairs(set)
        .filter(|(a, b)| {
            a.observer.labels != b.observer.labels
                && a.world.top() == b.world.top()
                && a.observer.state == b.observer.state
                && a.observer.power == b.observer.power
                && a.observer.status == b.observer.status
        })
        .map(|(a, b)| ordered_pair(a, b))
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObservationError {
    #[error("world path must contain at least one label")]
    EmptyWorldPath,
    #[error("observer label sequence must be nonempty")]
    EmptyObserverLabels,
    #[error("power {power}: required parameter {param} missing or wrongly typed")]
    MissingRequiredParam { power: Symbol, param: &'static str },
    #[error("power {power}: duplicate parameter {param}")]
    DuplicateParam { power: Symbol, param: Symbol },
    #[error("power {power}: expected {expected} state values, got {got}")]
    StateArity { power: Symbol, expected: usize, got: usize },
    #[error("power {power}: expected {expected} resolution values, got {got}")]
    ResolutionArity { power: Symbol, expected: usize, got: usize },
    #[error("parameter {param}: expected a {expected} value, got {got}")]
    ValueTag { param: Symbol, expected: DomainTag, got: DomainTag },
}
