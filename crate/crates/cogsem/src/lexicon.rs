//! Token-to-denotation tables, the operation library, and contexts that
//! shrink candidate sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{Element, Segment};
use crate::observation::{CompositeObservation, ParamPredicate};
use crate::value::Symbol;

/// Which side of an argument's meaning an operation consumes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArgLevel {
    #[default]
    Denotation,
    Sense,
    Explanation,
}

/// How a domain element is matched against a relation position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchKind {
    /// Overlap: the element and the position share an observation.
    Weak,
    /// Containment: the element is wholly inside the position.
    Strong,
    /// Equality of the element (or whole domain set) with the position.
    Exact,
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchKind::Weak => write!(f, "weak"),
            MatchKind::Strong => write!(f, "strong"),
            MatchKind::Exact => write!(f, "exact"),
        }
    }
}

/// A strict threshold for the majority quantifier, stored in per-mille so
/// truth stays exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theta(u16);

impl Theta {
    pub fn permille(value: u16) -> Result<Self, LexiconError> {
        if value == 0 || value >= 1000 {
            return Err(LexiconError::BadThreshold { permille: value });
        }
        Ok(Theta(value))
    }

    pub fn from_fraction(value: f64) -> Result<Self, LexiconError> {
        let scaled = (value * 1000.0).round();
        if !(1.0..=999.0).contains(&scaled) {
            return Err(LexiconError::BadThreshold {
                permille: scaled.clamp(0.0, 65535.0) as u16,
            });
        }
        Theta::permille(scaled as u16)
    }

    pub fn as_permille(&self) -> u16 {
        self.0
    }

    /// Is `hits` strictly more than this share of `total`?
    pub fn exceeded_by(&self, hits: usize, total: usize) -> bool {
        (hits as u128) * 1000 > (self.0 as u128) * (total as u128)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}‰", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuantSort {
    ForAll,
    Exists,
    Unique,
    /// Strictly-more-than-threshold; `None` defers to context or run
    /// configuration.
    Most(Option<Theta>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableConn {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Xor,
}

impl TableConn {
    pub fn arity(&self) -> usize {
        match self {
            TableConn::Not => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TableConn::Not => "not",
            TableConn::And => "and",
            TableConn::Or => "or",
            TableConn::Implies => "implies",
            TableConn::Iff => "iff",
            TableConn::Xor => "xor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnectiveKind {
    /// Truth-functional, decided by the selected three-valued tables
    /// extended with the vacancy rule.
    Table(TableConn),
    /// Pairs the two clause contents through a named relation; true only
    /// when the pair belongs to it.
    Associated { relation: Symbol },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalSort {
    Necessity,
    Possibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeaningMode {
    Denotation,
    Sense,
    Explanation,
}

/// Declarative candidate filters usable as denotations of context-bound
/// phrases.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextFilter {
    /// Keep members structurally equal to one of the named elements.
    Named(BTreeSet<Symbol>),
    /// Keep members all of whose observations satisfy the predicate.
    ObsPred(ParamPredicate),
}

/// One operation instance from the builtin library. All operations have
/// arity at most two.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperationDef {
    /// Restrict a relation at one position: keep rows matched by every
    /// element of the domain argument.
    Basic { match_kind: MatchKind, var: usize, arg_level: ArgLevel },
    /// Restrict a relation at one position: keep rows matched by some
    /// element of the domain argument. Truth varies with the sort.
    Quantifier { sort: QuantSort, match_kind: MatchKind, var: usize },
    /// Clause-level connective.
    Connective(ConnectiveKind),
    /// Unary operation over the full meaning set of a multi-meaning clause.
    Modal { sort: ModalSort, mode: MeaningMode },
    /// Unary declarative shrink of a candidate set.
    ContextOp { filter: ContextFilter },
    /// Restrict a class by overlap with one position of a modifier
    /// relation (embedded clause linkers: "mountains that are located
    /// in ...").
    Select { var: usize, match_kind: MatchKind },
    /// Restrict a class through a named associated relation, with the
    /// other end restricted by the modifier class (prepositions: "man
    /// with a blue tie").
    Assoc { relation: Symbol, subject_var: usize, object_var: usize },
}

impl OperationDef {
    pub fn basic(match_kind: MatchKind, var: usize) -> Self {
        OperationDef::Basic { match_kind, var, arg_level: ArgLevel::Denotation }
    }

    pub fn quantifier(sort: QuantSort, match_kind: MatchKind, var: usize) -> Self {
        OperationDef::Quantifier { sort, match_kind, var }
    }

    pub fn arity(&self) -> usize {
        match self {
            OperationDef::Basic { .. }
            | OperationDef::Quantifier { .. }
            | OperationDef::Select { .. }
            | OperationDef::Assoc { .. } => 2,
            OperationDef::Connective(k) => match k {
                ConnectiveKind::Table(t) => t.arity(),
                ConnectiveKind::Associated { .. } => 2,
            },
            OperationDef::Modal { .. } | OperationDef::ContextOp { .. } => 1,
        }
    }

    /// The meaning level this operation consumes its modifier argument at.
    pub fn arg_level(&self) -> ArgLevel {
        match self {
            OperationDef::Basic { arg_level, .. } => *arg_level,
            _ => ArgLevel::Denotation,
        }
    }

    /// Short tag used in sense rendering and reports.
    pub fn tag(&self) -> String {
        match self {
            OperationDef::Basic { match_kind, var, arg_level } => match arg_level {
                ArgLevel::Denotation => format!("{match_kind}@x{var}"),
                ArgLevel::Sense => format!("{match_kind}@x{var}:sense"),
                ArgLevel::Explanation => format!("{match_kind}@x{var}:expl"),
            },
            OperationDef::Quantifier { sort, match_kind, var } => {
                let s = match sort {
                    QuantSort::ForAll => "forall".to_string(),
                    QuantSort::Exists => "exists".to_string(),
                    QuantSort::Unique => "unique".to_string(),
                    QuantSort::Most(Some(t)) => format!("most({t})"),
                    QuantSort::Most(None) => "most".to_string(),
                };
                format!("{s}-{match_kind}@x{var}")
            }
            OperationDef::Connective(ConnectiveKind::Table(t)) => t.name().to_string(),
            OperationDef::Connective(ConnectiveKind::Associated { relation }) => {
                format!("via-{relation}")
            }
            OperationDef::Modal { sort, mode } => {
                let s = match sort {
                    ModalSort::Necessity => "necessity",
                    ModalSort::Possibility => "possibility",
                };
                let m = match mode {
                    MeaningMode::Denotation => "denot",
                    MeaningMode::Sense => "sense",
                    MeaningMode::Explanation => "expl",
                };
                format!("{s}:{m}")
            }
            OperationDef::ContextOp { .. } => "context-op".to_string(),
            OperationDef::Select { var, match_kind } => format!("select-{match_kind}@x{var}"),
            OperationDef::Assoc { relation, .. } => format!("assoc-{relation}"),
        }
    }
}

/// Either a named model element or an operation instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DenotationRef {
    Named(Symbol),
    Builtin(OperationDef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub surface: Symbol,
    pub denotations: Vec<DenotationRef>,
    /// Set for pure-syntax tokens whose denotation set is legitimately
    /// empty.
    pub empty_meaning: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<Symbol, LexiconEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn insert(&mut self, entry: LexiconEntry) -> Result<(), LexiconError> {
        if entry.denotations.is_empty() && !entry.empty_meaning {
            return Err(LexiconError::EmptyWithoutFlag { token: entry.surface.clone() });
        }
        self.entries.insert(entry.surface.clone(), entry);
        Ok(())
    }

    pub fn define(&mut self, surface: &str, denotations: Vec<DenotationRef>) {
        self.entries.insert(
            Symbol::new(surface),
            LexiconEntry { surface: Symbol::new(surface), denotations, empty_meaning: false },
        );
    }

    pub fn define_syntax(&mut self, surface: &str) {
        self.entries.insert(
            Symbol::new(surface),
            LexiconEntry { surface: Symbol::new(surface), denotations: Vec::new(), empty_meaning: true },
        );
    }

    /// The stored denotation set. Unknown tokens are an error, distinct
    /// from a known token with empty meaning.
    pub fn lookup(&self, token: &Symbol) -> Result<&LexiconEntry, LexiconError> {
        self.entries
            .get(token)
            .ok_or_else(|| LexiconError::UnknownToken { token: token.clone() })
    }

    pub fn entries(&self) -> &BTreeMap<Symbol, LexiconEntry> {
        &self.entries
    }
}

/// Classification of a denotation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhraseClass {
    Content,
    Function,
    Mixed,
}

/// Content when every candidate is a model element or relation, function
/// when every candidate is an operation, mixed otherwise.
pub fn classify_candidates(candidates: &[ResolvedCandidate]) -> Result<PhraseClass, LexiconError> {
    if candidates.is_empty() {
        return Err(LexiconError::NothingToClassify);
    }
    let ops = candidates.iter().filter(|c| c.is_function()).count();
    if ops == 0 {
        Ok(PhraseClass::Content)
    } else if ops == candidates.len() {
        Ok(PhraseClass::Function)
    } else {
        Ok(PhraseClass::Mixed)
    }
}

/// A candidate denotation with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResolvedCandidate {
    pub name: Option<Symbol>,
    pub element: Element,
}

impl ResolvedCandidate {
    pub fn is_function(&self) -> bool {
        matches!(self.element, Element::Op(_))
    }
}

/// A directive pinning the reading of a token or node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    /// Index into the filtered candidate list.
    Pick(usize),
    /// Keep only the candidate carrying this element name.
    Named(Symbol),
    /// Index into the convention operation list at a node.
    Convention(usize),
    /// Narrow candidates to the named region hint: set and relation
    /// members survive only with every observation inside it.
    Region(Symbol),
}

/// Shared situational information: backing facts (all actual), the world
/// and time under discussion, named regions, convention-supplied operation
/// lists per syntactic pattern, and reading directives.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    pub facts: Vec<CompositeObservation>,
    pub selected_world: Option<Symbol>,
    pub time_window: Option<Segment>,
    pub region_hints: BTreeMap<Symbol, crate::model::Region>,
    pub conventions: BTreeMap<Symbol, Vec<OperationDef>>,
    pub directives: BTreeMap<Symbol, Directive>,
    pub most_threshold: Option<Theta>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn validate(&self) -> Result<(), LexiconError> {
        for c in &self.facts {
            if c.iter().any(|a| a.is_imaginary()) {
                return Err(LexiconError::ImaginaryFact);
            }
        }
        Ok(())
    }

    pub fn convention(&self, key: &Symbol) -> Option<&[OperationDef]> {
        self.conventions.get(key).map(|v| v.as_slice())
    }

    pub fn directive_for_token(&self, token: &Symbol) -> Option<&Directive> {
        self.directives.get(token)
    }

    pub fn directive_for_node(&self, node: usize) -> Option<&Directive> {
        self.directives.get(&Symbol::from(format!("#{node}")))
    }

    /// Does every observation of the element fall inside the selected
    /// world and time window?
    fn wholly_inside(&self, e: &Element) -> bool {
        let mut inside = true;
        e.for_each_composite(&mut |c| {
            for a in c.iter() {
                if !self.obs_inside(a) {
                    inside = false;
                }
            }
        });
        inside
    }

    fn obs_inside(&self, a: &crate::observation::PrimitiveObservation) -> bool {
        if let Some(w) = &self.selected_world {
            if a.world.top() != w {
                return false;
            }
        }
        if let Some(win) = &self.time_window {
            if !win.contains(a.time()) {
                return false;
            }
        }
        true
    }

    /// Does the element carry at least one observation inside the frame
    /// (vacuously yes when it carries none at all)?
    fn touches_frame(&self, e: &Element) -> bool {
        let mut total = 0usize;
        let mut hit = false;
        e.for_each_composite(&mut |c| {
            for a in c.iter() {
                total += 1;
                if self.obs_inside(a) {
                    hit = true;
                }
            }
        });
        total == 0 || hit
    }

    /// Narrow a single candidate by the world/time frame: whole candidates
    /// are dropped only when every observation falls outside; set and
    /// relation candidates lose the members whose observations are not all
    /// inside.
    fn narrow(&self, e: &Element) -> Option<Element> {
        if self.selected_world.is_none() && self.time_window.is_none() {
            return Some(e.clone());
        }
        match e {
            Element::Set(members) => {
                let kept = members.iter().filter(|m| self.wholly_inside(m)).cloned().collect();
                Some(Element::Set(kept))
            }
            Element::Relation(r) => {
                let rows = r
                    .rows
                    .iter()
                    .filter(|row| row.iter().all(|m| self.wholly_inside(m)))
                    .cloned()
                    .collect::<BTreeSet<_>>();
                Some(Element::Relation(crate::model::Relation { kind: r.kind, rows }))
            }
            other => {
                if self.touches_frame(other) {
                    Some(other.clone())
                } else {
                    None
                }
            }
        }
    }

    /// Shrink a candidate list: world/time narrowing first, then any
    /// directive for the node or token. The result is a sub-list of
    /// narrowed candidates, deterministic in the input order.
    pub fn apply(
        &self,
        node: usize,
        token: Option<&Symbol>,
        candidates: &[ResolvedCandidate],
    ) -> Result<Vec<ResolvedCandidate>, LexiconError> {
        let mut narrowed: Vec<ResolvedCandidate> = Vec::new();
        for c in candidates {
            if c.is_function() {
                narrowed.push(c.clone());
                continue;
            }
            if let Some(e) = self.narrow(&c.element) {
                narrowed.push(ResolvedCandidate { name: c.name.clone(), element: e });
            }
        }
        let directive = self
            .directive_for_node(node)
            .or_else(|| token.and_then(|t| self.directive_for_token(t)));
        match directive {
            None | Some(Directive::Convention(_)) => Ok(narrowed),
            Some(Directive::Pick(i)) => {
                if *i >= narrowed.len() {
                    return Err(LexiconError::DirectiveOutOfRange { node, index: *i, len: narrowed.len() });
                }
                Ok(vec![narrowed[*i].clone()])
            }
            Some(Directive::Named(name)) => {
                let found: Vec<_> = narrowed
                    .iter()
                    .filter(|c| c.name.as_ref() == Some(name))
                    .cloned()
                    .collect();
                if found.is_empty() {
                    return Err(LexiconError::DirectiveNamesAbsentCandidate {
                        node,
                        name: name.clone(),
                    });
                }
                Ok(found)
            }
            Some(Directive::Region(name)) => {
                let region = self
                    .region_hints
                    .get(name)
                    .ok_or_else(|| LexiconError::UnknownRegionHint { node, name: name.clone() })?;
                let inside = |e: &Element| -> bool {
                    let mut ok = true;
                    e.for_each_composite(&mut |c| {
                        for a in c.iter() {
                            if !region.contains(a.space()) {
                                ok = false;
                            }
                        }
                    });
                    ok
                };
                let mut kept = Vec::new();
                for c in narrowed {
                    if c.is_function() {
                        kept.push(c);
                        continue;
                    }
                    match &c.element {
                        Element::Set(members) => {
                            let filtered =
                                members.iter().filter(|m| inside(m)).cloned().collect();
                            kept.push(ResolvedCandidate {
                                name: c.name.clone(),
                                element: Element::Set(filtered),
                            });
                        }
                        Element::Relation(r) => {
                            let rows = r
                                .rows
                                .iter()
                                .filter(|row| row.iter().all(inside))
                                .cloned()
                                .collect();
                            kept.push(ResolvedCandidate {
                                name: c.name.clone(),
                                element: Element::Relation(crate::model::Relation {
                                    kind: r.kind,
                                    rows,
                                }),
                            });
                        }
                        other => {
                            if inside(other) {
                                kept.push(c);
                            }
                        }
                    }
                }
                Ok(kept)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("unknown token {token}")]
    UnknownToken { token: Symbol },
    #[error("token {token} has an empty denotation set without the empty-meaning flag")]
    EmptyWithoutFlag { token: Symbol },
    #[error("cannot classify an empty denotation set")]
    NothingToClassify,
    #[error("context facts must contain only actual observations")]
    ImaginaryFact,
    #[error("directive at node {node} picks candidate {index} of {len}")]
    DirectiveOutOfRange { node: usize, index: usize, len: usize },
    #[error("directive at node {node} names absent candidate {name}")]
    DirectiveNamesAbsentCandidate { node: usize, name: Symbol },
    #[error("directive at node {node} names unknown region hint {name}")]
    UnknownRegionHint { node: usize, name: Symbol },
    #[error("threshold {permille}‰ outside (0,1)")]
    BadThreshold { permille: u16 },
}


#[cfg(test)]
mod region_tests {
    use super::*;
    use crate::observation::tests_support::obs;
    use crate::observation::ObsStatus::Actual;

    #[test]
    fn region_directive_narrows_by_space() {
        let at_school = obs("real", &["x"], Actual, 1, &[0], &[10], "r");
        let at_home = obs("real", &["x"], Actual, 1, &[0], &[0], "r");
        let school_event = Element::Composite(CompositeObservation::new([at_school]));
        let home_event = Element::Composite(CompositeObservation::new([at_home]));
        let class = Element::Set([school_event.clone(), home_event].into_iter().collect());
        let ctx = Context {
            region_hints: BTreeMap::from([(
                Symbol::new("school"),
                crate::model::Region::from([vec![10]]),
            )]),
            directives: BTreeMap::from([(Symbol::new("#0"), Directive::Region(Symbol::new("school")))]),
            ..Context::default()
        };
        let out = ctx
            .apply(0, None, &[ResolvedCandidate { name: None, element: class }])
            .unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(
            out[0].element,
            Element::Set([school_event].into_iter().collect())
        );

        let missing = Context {
            directives: BTreeMap::from([(Symbol::new("#0"), Directive::Region(Symbol::new("gym")))]),
            ..Context::default()
        };
        assert!(matches!(
            missing.apply(0, None, &[]),
            Err(LexiconError::UnknownRegionHint { .. })
        ));
    }
}
