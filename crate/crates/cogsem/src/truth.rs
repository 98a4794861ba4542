//! Four-valued truth assignment over senses: event atomics checked by
//! direct verification, set atomics decided by membership, mental-attitude
//! atomics, quantified propositions, connectives, and modal operations
//! over meaning sets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::interp::{
    eval_sense, interpret, ApplyError, Denotation, DepTree, Explanation, InterpError,
    MeaningTriple, Sense, SenseArg, TreeMeanings,
};
use crate::lexicon::{
    ConnectiveKind, Context, Lexicon, MeaningMode, ModalSort, OperationDef, QuantSort, TableConn,
    Theta,
};
use crate::model::{CognitiveModel, Element, RelationKind};
use crate::observation::CompositeObservation;

/// The four truth values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    True,
    False,
    Undecided,
    Vacant,
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::True => write!(f, "T"),
            TruthValue::False => write!(f, "F"),
            TruthValue::Undecided => write!(f, "U"),
            TruthValue::Vacant => write!(f, "V"),
        }
    }
}

/// A truth value, or the out-of-band marker for senses that are not
/// sentences (normal phrases, operations).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Val(TruthValue),
    Undefined,
}

impl Verdict {
    pub const T: Verdict = Verdict::Val(TruthValue::True);
    pub const F: Verdict = Verdict::Val(TruthValue::False);
    pub const U: Verdict = Verdict::Val(TruthValue::Undecided);
    pub const V: Verdict = Verdict::Val(TruthValue::Vacant);

    pub fn value(&self) -> Option<TruthValue> {
        match self {
            Verdict::Val(v) => Some(*v),
            Verdict::Undefined => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Val(v) => write!(f, "{v}"),
            Verdict::Undefined => write!(f, "ud"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicKind {
    Kleene,
    Lukasiewicz,
}

impl fmt::Display for LogicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicKind::Kleene => write!(f, "kleene"),
            LogicKind::Lukasiewicz => write!(f, "lukasiewicz"),
        }
    }
}

/// Classification of a proposition by its root operation and base
/// relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionKind {
    /// Event-describing: truth by direct verification of the content.
    EventAtomic,
    /// Identity/membership form over a pure set relation: never undecided.
    SetAtomic,
    /// Mental-attitude form over a process/product relation.
    MentalAtomic,
    Quantified,
    Connective,
    Modal,
    /// Not a sentence: truth is undefined.
    NormalPhrase,
}

impl fmt::Display for PropositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PropositionKind::EventAtomic => "event-atomic",
            PropositionKind::SetAtomic => "set-atomic",
            PropositionKind::MentalAtomic => "mental-atomic",
            PropositionKind::Quantified => "quantified",
            PropositionKind::Connective => "connective",
            PropositionKind::Modal => "modal",
            PropositionKind::NormalPhrase => "normal-phrase",
        };
        f.write_str(s)
    }
}

fn rank(v: TruthValue) -> u8 {
    // F < U < T for the three-valued tables
    match v {
        TruthValue::False => 0,
        TruthValue::Undecided => 1,
        TruthValue::True => 2,
        TruthValue::Vacant => unreachable!("vacancy handled by the V-rule"),
    }
}

fn of_rank(r: u8) -> TruthValue {
    match r {
        0 => TruthValue::False,
        1 => TruthValue::Undecided,
        _ => TruthValue::True,
    }
}

fn neg3(a: TruthValue) -> TruthValue {
    of_rank(2 - rank(a))
}

fn and3(a: TruthValue, b: TruthValue) -> TruthValue {
    of_rank(rank(a).min(rank(b)))
}

fn or3(a: TruthValue, b: TruthValue) -> TruthValue {
    of_rank(rank(a).max(rank(b)))
}

fn implies3(logic: LogicKind, a: TruthValue, b: TruthValue) -> TruthValue {
    match logic {
        LogicKind::Kleene => or3(neg3(a), b),
        LogicKind::Lukasiewicz => {
            if a == TruthValue::Undecided && b == TruthValue::Undecided {
                TruthValue::True
            } else {
                or3(neg3(a), b)
            }
        }
    }
}

/// Truth-functional connectives under the selected logic, with the
/// vacancy rule applied first: a vacant argument makes the whole vacant.
pub fn connective_truth(
    logic: LogicKind,
    conn: TableConn,
    a: TruthValue,
    b: Option<TruthValue>,
) -> TruthValue {
    use TruthValue::Vacant;
    match conn {
        TableConn::Not => {
            if a == Vacant {
                Vacant
            } else {
                neg3(a)
            }
        }
        _ => {
            let b = b.expect("binary connective takes two values");
            if a == Vacant || b == Vacant {
                return Vacant;
            }
            match conn {
                TableConn::And => and3(a, b),
                TableConn::Or => or3(a, b),
                TableConn::Implies => implies3(logic, a, b),
                TableConn::Iff => and3(implies3(logic, a, b), implies3(logic, b, a)),
                TableConn::Xor => and3(or3(a, b), neg3(and3(a, b))),
                TableConn::Not => unreachable!(),
            }
        }
    }
}

/// A witness citation in an evaluation trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessLine {
    pub imaginary: String,
    pub actual: String,
    pub refutes: bool,
}

/// A deterministic record of how a verdict came about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub kind: String,
    pub verdict: Verdict,
    pub content_size: Option<usize>,
    pub witnesses: Vec<WitnessLine>,
    pub children: Vec<(String, Verdict)>,
}

/// Result of evaluating a whole sentence tree.
#[derive(Debug, Clone)]
pub struct SentenceEvaluation {
    pub verdict: Verdict,
    /// Truth of the root sense before the explanation condition.
    pub sense_truth: Verdict,
    /// Every node outside modal clauses had exactly one reading.
    pub effective: bool,
    pub triple: MeaningTriple,
    pub meanings: TreeMeanings,
    pub trace: Trace,
}

#[derive(Debug, Error)]
pub enum TruthError {
    #[error("formulas with free variables have no truth value")]
    FreeVariables,
    #[error("interpretation not effective at the root: ambiguous nodes {nodes:?}")]
    NotEffective { nodes: Vec<usize> },
    #[error("cannot evaluate content: {0}")]
    Content(#[from] ApplyError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("restriction and quantifier bind the same variable x{var}")]
    VarCollision { var: usize },
    #[error("mental-attitude content must be empty or a single pair, found {rows} rows")]
    MentalContentSize { rows: usize },
    #[error("explanation product requires an interpretation handle for the clause")]
    ExplanationUnavailable,
    #[error("modal clause has an empty meaning set")]
    EmptyMeaningSet,
}

struct Registry {
    by_sense: BTreeMap<Sense, (Verdict, Option<Element>)>,
    effective_expls: std::collections::BTreeSet<Explanation>,
}

/// Truth evaluator over one model. Evaluation is read-only on the model;
/// the session registry of evaluated senses is the only shared state.
pub struct Evaluator<'m> {
    model: &'m CognitiveModel,
    logic: LogicKind,
    most_default: Theta,
    context_most: Option<Theta>,
    registry: Mutex<Registry>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m CognitiveModel, logic: LogicKind) -> Self {
        Evaluator {
            model,
            logic,
            most_default: Theta::permille(500).unwrap(),
            context_most: None,
            registry: Mutex::new(Registry {
                by_sense: BTreeMap::new(),
                effective_expls: std::collections::BTreeSet::new(),
            }),
        }
    }

    pub fn with_most_default(mut self, theta: Theta) -> Self {
        self.most_default = theta;
        self
    }

    pub fn with_context(mut self, ctx: &Context) -> Self {
        self.context_most = ctx.most_threshold;
        self
    }

    pub fn model(&self) -> &CognitiveModel {
        self.model
    }

    pub fn logic(&self) -> LogicKind {
        self.logic
    }

    /// Record an explanation produced under an effective interpretation,
    /// making it available as a mental-attitude product.
    pub fn register_effective_explanation(&self, x: &Explanation) {
        self.registry.lock().unwrap().effective_expls.insert(x.clone());
    }

    fn register(&self, sense: &Sense, verdict: Verdict) -> Verdict {
        let denot = match eval_sense(sense, self.model) {
            Ok(Denotation::Elem(e)) => Some(e),
            _ => None,
        };
        self.registry
            .lock()
            .unwrap()
            .by_sense
            .insert(sense.clone(), (verdict, denot));
        verdict
    }

    fn cached(&self, sense: &Sense) -> Option<Verdict> {
        self.registry.lock().unwrap().by_sense.get(sense).map(|(v, _)| *v)
    }

    /// Classify a sense with no free variables. Bare leaves are normal
    /// phrases; an operation tree with unbound relation positions is a
    /// formula and has no truth value.
    pub fn classify(&self, sense: &Sense) -> Result<PropositionKind, TruthError> {
        if matches!(sense, Sense::Leaf(_) | Sense::OpLeaf(_)) {
            return Ok(PropositionKind::NormalPhrase);
        }
        if let Some(free) = sense.relation_positions() {
            if !free.is_empty() {
                return Err(TruthError::FreeVariables);
            }
        }
        Ok(self.classify_inner(sense))
    }

    fn classify_inner(&self, sense: &Sense) -> PropositionKind {
        match sense {
            Sense::ModalNode { .. } => PropositionKind::Modal,
            Sense::Node { op, args } => {
                if args.len() < op.arity() {
                    return PropositionKind::NormalPhrase;
                }
                match op {
                    OperationDef::Connective(_) => PropositionKind::Connective,
                    OperationDef::Quantifier { .. } => PropositionKind::Quantified,
                    OperationDef::Basic { .. } => self.classify_spine(sense),
                    _ => PropositionKind::NormalPhrase,
                }
            }
            Sense::Leaf(_) | Sense::OpLeaf(_) => PropositionKind::NormalPhrase,
        }
    }

    /// Walk the restriction spine of a basic-rooted sense down to its base
    /// relation.
    fn classify_spine(&self, sense: &Sense) -> PropositionKind {
        let mut current = sense;
        loop {
            match current {
                Sense::Node { op: OperationDef::Quantifier { .. }, args }
                    if args.len() == 2 =>
                {
                    // a quantifier below the restrictions: the whole thing
                    // evaluates as a quantified proposition
                    return PropositionKind::Quantified;
                }
                Sense::Node { op: OperationDef::Basic { .. }, args } if args.len() == 2 => {
                    current = args[1].sense();
                }
                Sense::Leaf(Element::Relation(r)) => {
                    return match r.kind {
                        RelationKind::Identity => PropositionKind::SetAtomic,
                        RelationKind::Mental { .. } => PropositionKind::MentalAtomic,
                        RelationKind::Standard => self.event_atomic_or_phrase(sense),
                    };
                }
                Sense::Leaf(Element::Set(_)) | Sense::Leaf(Element::Composite(_)) => {
                    return self.event_atomic_or_phrase(sense);
                }
                _ => return PropositionKind::NormalPhrase,
            }
        }
    }

    /// The event-atomic necessary condition: the content is empty or one
    /// sequence of nonempty composites.
    fn event_atomic_or_phrase(&self, sense: &Sense) -> PropositionKind {
        match self.content_rows(sense) {
            Ok(rows) => {
                let ok = match rows.len() {
                    0 => true,
                    1 => rows[0].iter().all(|e| match e {
                        Element::Composite(c) => !c.is_empty(),
                        _ => false,
                    }),
                    _ => false,
                };
                if ok {
                    PropositionKind::EventAtomic
                } else {
                    PropositionKind::NormalPhrase
                }
            }
            Err(_) => PropositionKind::NormalPhrase,
        }
    }

    /// The content of a proposition as relation rows.
    fn content_rows(&self, sense: &Sense) -> Result<Vec<Vec<Element>>, TruthError> {
        match eval_sense(sense, self.model)? {
            Denotation::Elem(Element::Relation(r)) => Ok(r.rows.into_iter().collect()),
            Denotation::Elem(Element::Set(s)) => Ok(s.into_iter().map(|e| vec![e]).collect()),
            Denotation::Elem(Element::Composite(c)) => {
                Ok(vec![vec![Element::Composite(c)]])
            }
            Denotation::Elem(Element::Seq(row)) => Ok(vec![row]),
            _ => Ok(Vec::new()),
        }
    }

    /// Evaluate a sense to a verdict, registering it in the session
    /// registry. Deterministic for a fixed model and configuration.
    pub fn eval(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        if let Some(v) = self.cached(sense) {
            return Ok(v);
        }
        let kind = self.classify(sense)?;
        let verdict = match kind {
            PropositionKind::NormalPhrase => Verdict::Undefined,
            PropositionKind::EventAtomic => self.eval_event_atomic(sense)?,
            PropositionKind::SetAtomic => self.eval_set_atomic(sense)?,
            PropositionKind::MentalAtomic => self.eval_mental_atomic(sense)?,
            PropositionKind::Quantified => self.eval_quantified(sense)?,
            PropositionKind::Connective => self.eval_connective(sense)?,
            PropositionKind::Modal => self.eval_modal(sense)?,
        };
        Ok(self.register(sense, verdict))
    }

    /// Vacancy check over the restriction spine: a domain argument with an
    /// empty denotation at any level (a constituent phrase that denotes
    /// nothing) forces the vacant verdict. Emptiness of a restricted
    /// relation along the spine is an unsatisfied claim, not vacancy.
    fn vacant_spine_domain(&self, sense: &Sense) -> bool {
        let mut current = sense;
        while let Sense::Node {
            op: OperationDef::Basic { .. } | OperationDef::Quantifier { .. },
            args,
        } = current
        {
            if args.len() != 2 {
                return false;
            }
            if let SenseArg::Denot(s) = &args[0] {
                if let Ok(Denotation::Elem(e)) = eval_sense(s, self.model) {
                    if e.is_empty_denotation() {
                        return true;
                    }
                }
            }
            current = args[1].sense();
        }
        false
    }

    fn eval_event_atomic(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        if self.vacant_spine_domain(sense) {
            return Ok(Verdict::V);
        }
        let rows = self.content_rows(sense)?;
        let Some(row) = rows.first() else {
            return Ok(Verdict::V);
        };
        let seq: Vec<CompositeObservation> = row
            .iter()
            .map(|e| match e {
                Element::Composite(c) => c.clone(),
                _ => unreachable!("classification guarantees composite rows"),
            })
            .collect();
        let actuals = self.model.actuals();
        if crate::observation::sequence_directly_verified(&seq, actuals) {
            Ok(Verdict::T)
        } else if crate::observation::sequence_directly_refuted(&seq, actuals) {
            Ok(Verdict::F)
        } else {
            Ok(Verdict::U)
        }
    }

    fn eval_set_atomic(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        // vacant when either immediate argument denotes nothing
        if let Sense::Node { args, .. } = sense {
            for a in args {
                if let SenseArg::Denot(s) = a {
                    if let Ok(Denotation::Elem(e)) = eval_sense(s, self.model) {
                        if e.is_empty_denotation() {
                            return Ok(Verdict::V);
                        }
                    }
                }
            }
        }
        if self.vacant_spine_domain(sense) {
            return Ok(Verdict::V);
        }
        let rows = self.content_rows(sense)?;
        if rows.is_empty() {
            Ok(Verdict::F)
        } else {
            Ok(Verdict::T)
        }
    }

    fn eval_mental_atomic(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        if self.vacant_spine_domain(sense) {
            return Ok(Verdict::V);
        }
        let rows = self.content_rows(sense)?;
        if rows.is_empty() {
            return Ok(Verdict::F);
        }
        if rows.len() > 1 {
            return Err(TruthError::MentalContentSize { rows: rows.len() });
        }
        let row = &rows[0];
        if row.len() != 2 {
            return Err(TruthError::MentalContentSize { rows: row.len() });
        }
        let Element::Composite(process) = &row[0] else {
            return Err(TruthError::MentalContentSize { rows: 1 });
        };
        let (knowledge, _product_kind) = match self.base_relation_kind(sense) {
            Some(RelationKind::Mental { knowledge, product }) => (knowledge, product),
            _ => (false, crate::model::ProductKind::Denotation),
        };
        let actuals = self.model.actuals();
        let verified = process.is_directly_verified(actuals);
        let refuted = !verified && process.is_directly_refuted(actuals);
        if !knowledge {
            return Ok(if verified {
                Verdict::T
            } else if refuted {
                Verdict::F
            } else {
                Verdict::U
            });
        }
        let product_truth = self.product_truth(&row[1])?;
        let clause_true = product_truth == Verdict::T;
        let clause_false = product_truth == Verdict::F;
        Ok(if verified && clause_true {
            Verdict::T
        } else if refuted || clause_false {
            Verdict::F
        } else {
            Verdict::U
        })
    }

    fn product_truth(&self, product: &Element) -> Result<Verdict, TruthError> {
        match product {
            Element::SenseElem(s) => self.eval(s),
            Element::ExplElem(x) => {
                let known = self
                    .registry
                    .lock()
                    .unwrap()
                    .effective_expls
                    .contains(x.as_ref());
                if !known {
                    return Err(TruthError::ExplanationUnavailable);
                }
                self.eval(x.sense())
            }
            e => Ok(self.eval_denotation_truth(e)),
        }
    }

    fn base_relation_kind(&self, sense: &Sense) -> Option<RelationKind> {
        let mut current = sense;
        loop {
            match current {
                Sense::Node {
                    op: OperationDef::Basic { .. } | OperationDef::Quantifier { .. },
                    args,
                } if args.len() == 2 => current = args[1].sense(),
                Sense::Leaf(Element::Relation(r)) => return Some(r.kind),
                _ => return None,
            }
        }
    }

    /// Move restrictions inside a leading quantifier so the quantifier
    /// surfaces at the root. Restriction and quantifier must bind
    /// different positions.
    fn hoist_quantifier(&self, sense: &Sense) -> Result<Sense, TruthError> {
        match sense {
            Sense::Node { op: op @ OperationDef::Basic { .. }, args } if args.len() == 2 => {
                let inner = self.hoist_quantifier(args[1].sense())?;
                match inner {
                    Sense::Node { op: qop @ OperationDef::Quantifier { .. }, args: qargs }
                        if qargs.len() == 2 =>
                    {
                        let (OperationDef::Basic { var: bvar, .. },
                             OperationDef::Quantifier { var: qvar, .. }) = (op, &qop)
                        else {
                            unreachable!()
                        };
                        if bvar == qvar {
                            return Err(TruthError::VarCollision { var: *bvar });
                        }
                        let pushed = Sense::Node {
                            op: op.clone(),
                            args: vec![args[0].clone(), SenseArg::Denot(qargs[1].sense().clone())],
                        };
                        Ok(Sense::Node {
                            op: qop,
                            args: vec![qargs[0].clone(), SenseArg::Denot(pushed)],
                        })
                    }
                    other => Ok(Sense::Node {
                        op: op.clone(),
                        args: vec![args[0].clone(), SenseArg::Denot(other)],
                    }),
                }
            }
            other => Ok(other.clone()),
        }
    }

    fn most_threshold(&self, sort: &QuantSort) -> Theta {
        match sort {
            QuantSort::Most(Some(t)) => *t,
            _ => self.context_most.unwrap_or(self.most_default),
        }
    }

    fn eval_quantified(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        let hoisted = self.hoist_quantifier(sense)?;
        let Sense::Node { op: OperationDef::Quantifier { sort, match_kind, var }, args } =
            &hoisted
        else {
            return Err(TruthError::FreeVariables);
        };
        let domain = match args[0].value(self.model) {
            Ok(e) => e.domain_view(),
            Err(e) => return Err(TruthError::Content(e)),
        };
        if domain.is_empty() {
            return Ok(Verdict::F);
        }
        let formula = args[1].sense().clone();
        let mut verdicts = Vec::with_capacity(domain.len());
        for element in &domain {
            let instance = Sense::Node {
                op: OperationDef::Basic {
                    match_kind: *match_kind,
                    var: *var,
                    arg_level: crate::lexicon::ArgLevel::Denotation,
                },
                args: vec![
                    SenseArg::Denot(Sense::Leaf(element.clone())),
                    SenseArg::Denot(formula.clone()),
                ],
            };
            verdicts.push(self.eval(&instance)?);
        }
        Ok(combine_quantifier(*sort, self.most_threshold(sort), &verdicts))
    }

    fn eval_connective(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        let Sense::Node { op: OperationDef::Connective(kind), args } = sense else {
            return Err(TruthError::FreeVariables);
        };
        let sub: Vec<Verdict> = args
            .iter()
            .map(|a| self.eval(a.sense()))
            .collect::<Result<_, _>>()?;
        if sub.contains(&Verdict::Undefined) {
            return Ok(Verdict::Undefined);
        }
        let values: Vec<TruthValue> = sub.iter().map(|v| v.value().unwrap()).collect();
        match kind {
            ConnectiveKind::Table(t) => {
                let b = values.get(1).copied();
                Ok(Verdict::Val(connective_truth(self.logic, *t, values[0], b)))
            }
            ConnectiveKind::Associated { .. } => {
                if values.contains(&TruthValue::Vacant) {
                    return Ok(Verdict::V);
                }
                let rows = self.content_rows(sense)?;
                if rows.is_empty() {
                    return Ok(Verdict::F);
                }
                Ok(Verdict::Val(and3(values[0], values[1])))
            }
        }
    }

    fn eval_modal(&self, sense: &Sense) -> Result<Verdict, TruthError> {
        let Sense::ModalNode { op: OperationDef::Modal { sort, mode }, clause_senses, clause_expls, .. } =
            sense
        else {
            return Err(TruthError::FreeVariables);
        };
        let members: Vec<Verdict> = match mode {
            MeaningMode::Sense => clause_senses
                .iter()
                .map(|s| self.eval(s))
                .collect::<Result<_, _>>()?,
            MeaningMode::Explanation => {
                let mut out = Vec::new();
                for x in clause_expls {
                    // each reading's explanation is the clause explanation
                    // under the interpretation that picked it
                    self.register_effective_explanation(x);
                    out.push(self.eval(x.sense())?);
                }
                out
            }
            MeaningMode::Denotation => {
                let mut denots = Vec::new();
                for s in clause_senses {
                    self.eval(s)?;
                    if let Ok(Denotation::Elem(e)) = eval_sense(s, self.model) {
                        if !denots.contains(&e) {
                            denots.push(e);
                        }
                    }
                }
                denots.iter().map(|e| self.eval_denotation_truth(e)).collect()
            }
        };
        if members.is_empty() {
            return Err(TruthError::EmptyMeaningSet);
        }
        Ok(combine_modal(*sort, &members))
    }

    /// The truth of a denotation: the common verdict of every sense
    /// evaluated this session that implies it, undefined otherwise.
    pub fn eval_denotation_truth(&self, e: &Element) -> Verdict {
        let registry = self.registry.lock().unwrap();
        let mut verdicts = registry
            .by_sense
            .values()
            .filter(|(_, d)| d.as_ref() == Some(e))
            .map(|(v, _)| *v);
        match verdicts.next() {
            None => Verdict::Undefined,
            Some(first) => {
                if verdicts.all(|v| v == first) {
                    first
                } else {
                    Verdict::Undefined
                }
            }
        }
    }

    /// Does every (phrase, sense) pair recorded in the explanation match
    /// the unique reading the interpretation assigns to that node?
    pub fn explanation_pairs_match(x: &Explanation, meanings: &TreeMeanings) -> bool {
        x.pairs().iter().all(|(phrase, sense)| {
            meanings
                .nodes
                .iter()
                .find(|n| n.id == phrase.node)
                .map(|n| n.triples.len() == 1 && &n.triples[0].sense == *sense)
                .unwrap_or(false)
        })
    }

    /// The truth of an explanation given the two conditions of the
    /// definition: the interpretation must be effective for the target
    /// phrase, and every recorded pair must match the sense the
    /// interpretation assigns. A pair mismatch under an effective
    /// interpretation falsifies the explanation when the sense itself has
    /// a truth value.
    pub fn explanation_truth(
        &self,
        x: &Explanation,
        interpretation_effective: bool,
        pairs_match: bool,
    ) -> Result<Verdict, TruthError> {
        if !interpretation_effective {
            return Ok(Verdict::Undefined);
        }
        let v = self.eval(x.sense())?;
        if pairs_match {
            Ok(v)
        } else {
            match v {
                Verdict::Val(_) => Ok(Verdict::F),
                Verdict::Undefined => Ok(Verdict::Undefined),
            }
        }
    }

    /// Interpret a tree and evaluate it as a sentence.
    pub fn eval_sentence(
        &self,
        tree: &DepTree,
        lexicon: &Lexicon,
        context: &Context,
    ) -> Result<SentenceEvaluation, TruthError> {
        let meanings = interpret(tree, lexicon, context, self.model)?;
        if meanings.root().triples.len() != 1 {
            return Err(TruthError::NotEffective { nodes: meanings.ambiguous_nodes() });
        }
        for node in &meanings.nodes {
            if !node.in_modal_clause && node.triples.len() == 1 {
                self.register_effective_explanation(&node.triples[0].explanation);
            }
        }
        let triple = meanings.root().triples[0].clone();
        let sense_truth = self.eval(&triple.sense)?;
        let effective = meanings.effective_for_sentence();
        let verdict = if effective {
            sense_truth
        } else {
            match sense_truth {
                Verdict::Val(_) => Verdict::F,
                Verdict::Undefined => Verdict::Undefined,
            }
        };
        let trace = self.trace(&triple.sense)?;
        Ok(SentenceEvaluation { verdict, sense_truth, effective, triple, meanings, trace })
    }

    /// Assemble the evaluation trace for a sense.
    pub fn trace(&self, sense: &Sense) -> Result<Trace, TruthError> {
        let verdict = self.eval(sense)?;
        let kind = self.classify(sense)?;
        let mut trace = Trace {
            kind: kind.to_string(),
            verdict,
            content_size: None,
            witnesses: Vec::new(),
            children: Vec::new(),
        };
        match kind {
            PropositionKind::EventAtomic
            | PropositionKind::SetAtomic
            | PropositionKind::MentalAtomic => {
                let rows = self.content_rows(sense)?;
                trace.content_size = Some(rows.len());
                for row in &rows {
                    for e in row {
                        if let Element::Composite(c) = e {
                            self.cite_witnesses(c, &mut trace.witnesses);
                        }
                    }
                }
            }
            PropositionKind::Quantified => {
                let hoisted = self.hoist_quantifier(sense)?;
                if let Sense::Node {
                    op: OperationDef::Quantifier { match_kind, var, .. },
                    args,
                } = &hoisted
                {
                    if let Ok(domain) = args[0].value(self.model) {
                        let members = domain.domain_view();
                        trace.content_size = Some(members.len());
                        for element in &members {
                            let instance = Sense::Node {
                                op: OperationDef::Basic {
                                    match_kind: *match_kind,
                                    var: *var,
                                    arg_level: crate::lexicon::ArgLevel::Denotation,
                                },
                                args: vec![
                                    SenseArg::Denot(Sense::Leaf(element.clone())),
                                    SenseArg::Denot(args[1].sense().clone()),
                                ],
                            };
                            let v = self.eval(&instance)?;
                            trace
                                .children
                                .push((crate::interp::render_element(element, self.model), v));
                        }
                    }
                }
            }
            PropositionKind::Connective => {
                if let Sense::Node { args, .. } = sense {
                    let labels = ["left", "right"];
                    for (i, a) in args.iter().enumerate() {
                        let v = self.eval(a.sense())?;
                        trace.children.push((labels.get(i).unwrap_or(&"arg").to_string(), v));
                    }
                    trace.content_size = Some(self.content_rows(sense)?.len());
                }
            }
            PropositionKind::Modal => {
                if let Sense::ModalNode { clause_senses, .. } = sense {
                    trace.content_size = Some(clause_senses.len());
                    for s in clause_senses {
                        let v = self.eval(s)?;
                        trace
                            .children
                            .push((crate::interp::render_sense(s, self.model), v));
                    }
                }
            }
            PropositionKind::NormalPhrase => {}
        }
        Ok(trace)
    }

    fn cite_witnesses(&self, c: &CompositeObservation, out: &mut Vec<WitnessLine>) {
        let id = |o: &crate::observation::PrimitiveObservation| -> String {
            self.model
                .id_of(o)
                .map(|s| s.to_string())
                .unwrap_or_else(|| "?".to_string())
        };
        for a in c.imaginary_members() {
            if let Some(b) = self
                .model
                .actuals()
                .iter()
                .find(|b| crate::observation::directly_verifies(b, a))
            {
                out.push(WitnessLine { imaginary: id(a), actual: id(b), refutes: false });
            } else if let Some(b) = self
                .model
                .actuals()
                .iter()
                .find(|b| crate::observation::directly_refutes(b, a))
            {
                out.push(WitnessLine { imaginary: id(a), actual: id(b), refutes: true });
            }
        }
    }
}

/// Fold instantiation verdicts into a quantified verdict. Witnessing and
/// falsifying instantiations dominate, undecided ones block, and vacancy
/// surfaces only when nothing is decisive: a vacant instantiation can
/// neither witness nor falsify, but a single vacant instantiation under a
/// singleton domain stays vacant.
fn combine_quantifier(sort: QuantSort, theta: Theta, verdicts: &[Verdict]) -> Verdict {
    let t = verdicts.iter().filter(|v| **v == Verdict::T).count();
    let f = verdicts.iter().filter(|v| **v == Verdict::F).count();
    let undecided = verdicts.iter().filter(|v| **v == Verdict::U || **v == Verdict::Undefined).count();
    match sort {
        QuantSort::ForAll => {
            if f > 0 {
                Verdict::F
            } else if undecided > 0 {
                Verdict::U
            } else if t == verdicts.len() {
                Verdict::T
            } else {
                Verdict::V
            }
        }
        QuantSort::Exists => {
            if t > 0 {
                Verdict::T
            } else if undecided > 0 {
                Verdict::U
            } else if f > 0 {
                Verdict::F
            } else {
                Verdict::V
            }
        }
        QuantSort::Unique => {
            if t >= 2 {
                Verdict::F
            } else if undecided > 0 {
                Verdict::U
            } else if t == 1 {
                Verdict::T
            } else if f > 0 {
                Verdict::F
            } else {
                Verdict::V
            }
        }
        QuantSort::Most(_) => {
            let total = verdicts.len();
            if theta.exceeded_by(t, total) {
                Verdict::T
            } else if theta.exceeded_by(t + undecided, total) {
                Verdict::U
            } else if f > 0 || t > 0 || undecided > 0 {
                Verdict::F
            } else {
                Verdict::V
            }
        }
    }
}

fn combine_modal(sort: ModalSort, members: &[Verdict]) -> Verdict {
    if members.contains(&Verdict::V) {
        return Verdict::V;
    }
    let t = members.iter().filter(|v| **v == Verdict::T).count();
    let f = members.iter().filter(|v| **v == Verdict::F).count();
    let undecided = members.len() - t - f;
    match sort {
        ModalSort::Necessity => {
            if f > 0 {
                Verdict::F
            } else if undecided > 0 {
                Verdict::U
            } else {
                Verdict::T
            }
        }
        ModalSort::Possibility => {
            if t > 0 {
                Verdict::T
            } else if undecided > 0 {
                Verdict::U
            } else {
                Verdict::F
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{comp, empty, garden, mental_rel, obs, pairs, set, Garden};
    use crate::interp::SenseArg;
    use crate::lexicon::{ArgLevel, DenotationRef, MatchKind};
    use crate::model::ProductKind;
    use crate::observation::ObsStatus::{Actual as Ac, Imaginary as Im};
    use crate::observation::PrimitiveObservation;
    use crate::value::Symbol;

    use TruthValue::{False as Fv, True as Tv, Undecided as Uv, Vacant as Vv};

    fn leaf(e: &Element) -> SenseArg {
        SenseArg::Denot(Sense::Leaf(e.clone()))
    }

    fn basic(mk: MatchKind, var: usize, domain: &Element, rel: Sense) -> Sense {
        Sense::Node {
            op: OperationDef::basic(mk, var),
            args: vec![leaf(domain), SenseArg::Denot(rel)],
        }
    }

    fn quant(sort: QuantSort, mk: MatchKind, var: usize, domain: &Element, rel: Sense) -> Sense {
        Sense::Node {
            op: OperationDef::quantifier(sort, mk, var),
            args: vec![leaf(domain), SenseArg::Denot(rel)],
        }
    }

    fn conn(t: TableConn, args: Vec<Sense>) -> Sense {
        Sense::Node {
            op: OperationDef::Connective(ConnectiveKind::Table(t)),
            args: args.into_iter().map(SenseArg::Denot).collect(),
        }
    }

    /// An identity proposition over the garden persons.
    fn person_identity(g: &Garden, left: &str, right: &str) -> Sense {
        let iden = g.model.named(&Symbol::new("iden")).unwrap().clone();
        let l = g.model.named(&Symbol::new(left)).unwrap().clone();
        let r = g.model.named(&Symbol::new(right)).unwrap().clone();
        basic(
            MatchKind::Exact,
            1,
            &l,
            basic(MatchKind::Exact, 2, &r, Sense::Leaf(iden)),
        )
    }

    /// Garden plus one unwitnessed imaginary observation, for undecided
    /// propositions.
    fn garden_with_mystery() -> (Garden, Sense) {
        let g = garden();
        let glow = obs(&["ann", "see"], Im, 3, &[7], "glow");
        let mut b = crate::model::CognitiveModel::builder().world("real", 1);
        for a in g.model.observations().iter() {
            let id = g.model.id_of(a).unwrap().to_string();
            b = b.observation(&id, a.clone()).unwrap();
        }
        b = b.observation("glow", glow.clone()).unwrap();
        for (name, e) in g.model.named_elements() {
            b = b.element(name.as_str(), e.clone());
        }
        let mystery = Element::Composite(comp(&[&glow]));
        let model = b
            .element("mystery", mystery.clone())
            .element("mysteries", set(std::slice::from_ref(&mystery)))
            .build()
            .unwrap();
        let sense = basic(
            MatchKind::Weak,
            1,
            &mystery.clone(),
            Sense::Leaf(set(&[mystery])),
        );
        let g = Garden { model, ..g };
        (g, sense)
    }

    fn prop_with_truth(g: &Garden, v: TruthValue, mystery: &Sense) -> Sense {
        match v {
            Tv => person_identity(g, "man1", "man1"),
            Fv => person_identity(g, "man1", "man2"),
            Uv => mystery.clone(),
            Vv => basic(
                MatchKind::Weak,
                1,
                &empty(),
                Sense::Leaf(g.model.named(&Symbol::new("flowers")).unwrap().clone()),
            ),
        }
    }

    #[test]
    fn event_atomic_runs_the_verification_ladder() {
        // one event composite in three verification states
        let e_ac = obs(&["ann"], Ac, 1, &[0], "spark");
        let e_im = obs(&["ann"], Im, 2, &[0], "spark");
        let refuter = obs(&["bob"], Ac, 2, &[0], "dark");

        let build = |ids: &[(&str, &PrimitiveObservation)], event: &[&PrimitiveObservation]| {
            let mut b = CognitiveModel::builder().world("real", 1);
            for (id, o) in ids {
                b = b.observation(id, (*o).clone()).unwrap();
            }
            let event = Element::Composite(comp(event));
            let model = b
                .element("event", event.clone())
                .element("events", set(&[event]))
                .build()
                .unwrap();
            let sense = basic(
                MatchKind::Weak,
                1,
                &model.named(&Symbol::new("event")).unwrap().clone(),
                Sense::Leaf(model.named(&Symbol::new("events")).unwrap().clone()),
            );
            (model, sense)
        };

        // all actual: vacuous verification
        let (m, s) = build(&[("a", &e_ac)], &[&e_ac]);
        let ev = Evaluator::new(&m, LogicKind::Kleene);
        assert_eq!(ev.classify(&s).unwrap(), PropositionKind::EventAtomic);
        assert_eq!(ev.eval(&s).unwrap(), Verdict::T);

        // an unwitnessed imaginary member: undecided
        let (m, s) = build(&[("a", &e_ac), ("i", &e_im)], &[&e_ac, &e_im]);
        assert_eq!(Evaluator::new(&m, LogicKind::Kleene).eval(&s).unwrap(), Verdict::U);

        // a refuting witness for every imaginary member: false
        let (m, s) = build(&[("a", &e_ac), ("i", &e_im), ("r", &refuter)], &[&e_ac, &e_im]);
        assert_eq!(Evaluator::new(&m, LogicKind::Kleene).eval(&s).unwrap(), Verdict::F);
    }

    #[test]
    fn empty_content_is_vacant() {
        let (g, _) = garden_with_mystery();
        let flowers = g.model.named(&Symbol::new("flowers")).unwrap().clone();
        let sense = basic(MatchKind::Weak, 1, &empty(), Sense::Leaf(flowers));
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        assert_eq!(ev.eval(&sense).unwrap(), Verdict::V);
    }

    #[test]
    fn set_atomic_is_membership_decided() {
        let g = garden();
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        let same = person_identity(&g, "man1", "man1");
        assert_eq!(ev.classify(&same).unwrap(), PropositionKind::SetAtomic);
        assert_eq!(ev.eval(&same).unwrap(), Verdict::T);

        let distinct = person_identity(&g, "man1", "man2");
        assert_eq!(ev.eval(&distinct).unwrap(), Verdict::F);

        // a missing denotation makes the proposition vacant
        let iden = g.model.named(&Symbol::new("iden")).unwrap().clone();
        let man1 = g.model.named(&Symbol::new("man1")).unwrap().clone();
        let vacant = basic(
            MatchKind::Exact,
            1,
            &man1,
            basic(MatchKind::Exact, 2, &empty(), Sense::Leaf(iden)),
        );
        assert_eq!(ev.eval(&vacant).unwrap(), Verdict::V);
    }

    #[test]
    fn set_atomic_never_undecided() {
        // every combination of the garden persons lands in {T, F, V}
        let g = garden();
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        for left in ["man1", "man2"] {
            for right in ["man1", "man2"] {
                let v = ev.eval(&person_identity(&g, left, right)).unwrap();
                assert_ne!(v, Verdict::U);
                assert_ne!(v, Verdict::Undefined);
            }
        }
    }

    /// Mental scene: a believer whose process is verified, refuted or
    /// unwitnessed, with a clause that is true or false on the model.
    fn mental_scene(
        knowledge: bool,
        clause_true: bool,
        fate: &str,
    ) -> (CognitiveModel, Sense) {
        let mind = |status, t: i64, result: &str| {
            crate::fixtures::obs_in(
                &["real", "mind:tom"],
                &["tom", "self"],
                status,
                t,
                &[8],
                &[0],
                result,
            )
        };
        let think_ac = mind(Ac, 1, "feels-flying");
        let think_im = mind(Im, 2, "feels-flying");
        let think_refute = mind(Ac, 2, "feels-grounded");
        let body = obs(&["ann", "see"], Ac, 1, &[4], "tom-standing");
        let flight_obs = match clause_true {
            true => obs(&["ann", "see"], Ac, 3, &[4], "tom-aloft"),
            false => obs(&["ann", "see"], Im, 3, &[4], "tom-aloft"),
        };
        let flight_refuter = obs(&["bob", "see"], Ac, 3, &[4], "tom-grounded");

        let mut b = CognitiveModel::builder()
            .world("real", 1)
            .subworld("real", "mind:tom")
            .observation("b1", body.clone())
            .unwrap()
            .observation("t1", think_ac.clone())
            .unwrap()
            .observation("f1", flight_obs.clone())
            .unwrap();
        let mut process_members = vec![&think_ac];
        match fate {
            "verified" => {}
            "refuted" => {
                b = b
                    .observation("t2", think_im.clone())
                    .unwrap()
                    .observation("t3", think_refute.clone())
                    .unwrap();
                process_members.push(&think_im);
            }
            _ => {
                b = b.observation("t2", think_im.clone()).unwrap();
                process_members.push(&think_im);
            }
        }
        if !clause_true {
            b = b.observation("f2", flight_refuter.clone()).unwrap();
        }

        let tom = Element::Composite(comp(&[&body, &flight_obs, &think_ac]));
        let flight = Element::Composite(comp(&[&flight_obs, &body]));
        let flights = set(&[flight]);
        let clause = basic(MatchKind::Weak, 1, &tom, Sense::Leaf(flights.clone()));
        let process = Element::Composite(comp(&process_members));
        let attitude = mental_rel(
            knowledge,
            ProductKind::Sense,
            &[&[process, Element::SenseElem(Box::new(clause.clone()))]],
        );
        let model = b
            .element("tom", tom.clone())
            .element("flights", flights)
            .element("attitude", attitude.clone())
            .build()
            .unwrap();

        let inner = Sense::Node {
            op: OperationDef::Basic {
                match_kind: MatchKind::Exact,
                var: 2,
                arg_level: ArgLevel::Sense,
            },
            args: vec![SenseArg::SenseOf(clause), SenseArg::Denot(Sense::Leaf(attitude))],
        };
        let sense = basic(MatchKind::Weak, 1, &tom, inner);
        (model, sense)
    }

    #[test]
    fn attitude_matrix_matches_the_stated_clauses() {
        let expected = [
            // (knowledge, clause_true, fate) -> verdict
            (false, true, "verified", Verdict::T),
            (false, false, "verified", Verdict::T),
            (false, true, "refuted", Verdict::F),
            (false, false, "refuted", Verdict::F),
            (false, true, "neither", Verdict::U),
            (false, false, "neither", Verdict::U),
            (true, true, "verified", Verdict::T),
            (true, false, "verified", Verdict::F),
            (true, true, "refuted", Verdict::F),
            (true, false, "refuted", Verdict::F),
            (true, true, "neither", Verdict::U),
            (true, false, "neither", Verdict::F),
        ];
        for (knowledge, clause_true, fate, want) in expected {
            let (model, sense) = mental_scene(knowledge, clause_true, fate);
            let ev = Evaluator::new(&model, LogicKind::Kleene);
            assert_eq!(
                ev.classify(&sense).unwrap(),
                PropositionKind::MentalAtomic,
                "case {knowledge}/{clause_true}/{fate}"
            );
            assert_eq!(
                ev.eval(&sense).unwrap(),
                want,
                "knowledge={knowledge} clause_true={clause_true} fate={fate}"
            );
        }
    }

    #[test]
    fn empty_attitude_content_is_false() {
        let (model, _) = mental_scene(false, true, "verified");
        let tom = model.named(&Symbol::new("tom")).unwrap().clone();
        let attitude = model.named(&Symbol::new("attitude")).unwrap().clone();
        // a product nobody holds: restrict by a non-matching sense
        let other = Sense::Leaf(tom.clone());
        let inner = Sense::Node {
            op: OperationDef::Basic {
                match_kind: MatchKind::Exact,
                var: 2,
                arg_level: ArgLevel::Sense,
            },
            args: vec![SenseArg::SenseOf(other), SenseArg::Denot(Sense::Leaf(attitude))],
        };
        let sense = basic(MatchKind::Weak, 1, &tom, inner);
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        assert_eq!(ev.eval(&sense).unwrap(), Verdict::F);
    }

    #[test]
    fn explanation_products_need_a_registered_interpretation() {
        let (model, _) = mental_scene(false, true, "verified");
        let tom = model.named(&Symbol::new("tom")).unwrap().clone();
        let clause_sense =
            basic(MatchKind::Weak, 1, &tom, Sense::Leaf(model.named(&Symbol::new("flights")).unwrap().clone()));
        let expl = Explanation::Leaf { token: Symbol::new("flies"), sense: clause_sense };
        let think = model
            .named(&Symbol::new("attitude"))
            .unwrap()
            .clone();
        let Element::Relation(r) = &think else { panic!() };
        let process = r.rows.iter().next().unwrap()[0].clone();
        let know_expl = mental_rel(
            true,
            ProductKind::Explanation,
            &[&[process, Element::ExplElem(Box::new(expl.clone()))]],
        );
        // rebuild with the explanation-product relation
        let mut b = CognitiveModel::builder().world("real", 1).subworld("real", "mind:tom");
        for a in model.observations().iter() {
            let id = model.id_of(a).unwrap().to_string();
            b = b.observation(&id, a.clone()).unwrap();
        }
        for (name, e) in model.named_elements() {
            b = b.element(name.as_str(), e.clone());
        }
        let model = b.element("know-expl", know_expl.clone()).build().unwrap();

        let inner = Sense::Node {
            op: OperationDef::Basic {
                match_kind: MatchKind::Exact,
                var: 2,
                arg_level: ArgLevel::Explanation,
            },
            args: vec![
                SenseArg::ExplOf(Box::new(expl.clone()), expl.sense().clone()),
                SenseArg::Denot(Sense::Leaf(know_expl)),
            ],
        };
        let sense = basic(MatchKind::Weak, 1, &tom, inner);
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        assert!(matches!(
            ev.eval(&sense),
            Err(TruthError::ExplanationUnavailable)
        ));
        ev.register_effective_explanation(&expl);
        assert_eq!(ev.eval(&sense).unwrap(), Verdict::T);
    }

    /// Orchard of n trees; `fates[i]` is "verified", "refuted" or
    /// "neither" for tree i's change event.
    fn orchard(fates: &[&str]) -> (CognitiveModel, Sense, Element, Sense) {
        let mut b = CognitiveModel::builder().world("real", 1);
        let mut trees = Vec::new();
        let mut green_instances = Vec::new();
        let mut rows: Vec<Vec<Element>> = Vec::new();
        for (i, fate) in fates.iter().enumerate() {
            let x = i as i64;
            let bare = obs(&["ann", "see"], Ac, 1, &[x], "bare");
            let status = if *fate == "verified" { Ac } else { Im };
            let green_obs = obs(&["ann", "see"], status, 2, &[x], "green");
            b = b
                .observation(&format!("bare{i}"), bare.clone())
                .unwrap()
                .observation(&format!("green{i}"), green_obs.clone())
                .unwrap();
            if *fate == "refuted" {
                let refuter = obs(&["bob", "see"], Ac, 2, &[x], "brown");
                b = b.observation(&format!("brown{i}"), refuter).unwrap();
            }
            let first = Element::Composite(comp(&[&bare]));
            let second = Element::Composite(comp(&[&green_obs]));
            trees.push(Element::Composite(comp(&[&bare, &green_obs])));
            green_instances.push(second.clone());
            rows.push(vec![first, second]);
        }
        let turn = Element::Relation(crate::model::Relation::new(
            crate::model::RelationKind::Standard,
            rows,
        ));
        let green = Element::Set(green_instances.into_iter().collect());
        let tree_class = Element::Set(trees.iter().cloned().collect());
        let model = b
            .element("turn", turn.clone())
            .element("green", green.clone())
            .element("trees", tree_class.clone())
            .build()
            .unwrap();
        // (exists green@2 turn): the "turned green" formula over x1
        let turned_green = quant(
            QuantSort::Exists,
            MatchKind::Weak,
            2,
            &green,
            Sense::Leaf(turn),
        );
        (model, turned_green, tree_class.clone(), Sense::Leaf(tree_class))
    }

    #[test]
    fn universal_and_existential_over_change_events() {
        for (fates, forall_want, exists_want) in [
            (vec!["verified"; 3], Verdict::T, Verdict::T),
            (vec!["verified", "verified", "refuted"], Verdict::F, Verdict::T),
            (vec!["refuted"; 3], Verdict::F, Verdict::F),
        ] {
            let (model, turned_green, trees, _) = orchard(&fates);
            let ev = Evaluator::new(&model, LogicKind::Kleene);
            let forall =
                quant(QuantSort::ForAll, MatchKind::Weak, 1, &trees, turned_green.clone());
            let exists =
                quant(QuantSort::Exists, MatchKind::Weak, 1, &trees, turned_green.clone());
            assert_eq!(ev.classify(&forall).unwrap(), PropositionKind::Quantified);
            assert_eq!(ev.eval(&forall).unwrap(), forall_want, "fates {fates:?}");
            assert_eq!(ev.eval(&exists).unwrap(), exists_want, "fates {fates:?}");
        }
    }

    #[test]
    fn empty_domain_is_false_for_every_sort() {
        let (model, turned_green, _, _) = orchard(&["verified"]);
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        for sort in [
            QuantSort::ForAll,
            QuantSort::Exists,
            QuantSort::Unique,
            QuantSort::Most(None),
        ] {
            let prop = quant(sort, MatchKind::Weak, 1, &empty(), turned_green.clone());
            assert_eq!(ev.eval(&prop).unwrap(), Verdict::F);
        }
    }

    #[test]
    fn undecided_and_vacant_instantiations_propagate() {
        let (model, turned_green, trees, _) = orchard(&["verified", "neither"]);
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        let forall = quant(QuantSort::ForAll, MatchKind::Weak, 1, &trees, turned_green.clone());
        assert_eq!(ev.eval(&forall).unwrap(), Verdict::U);
        let exists = quant(QuantSort::Exists, MatchKind::Weak, 1, &trees, turned_green);
        assert_eq!(ev.eval(&exists).unwrap(), Verdict::T);
    }

    #[test]
    fn unique_counts_witnesses() {
        let cases = [
            (vec!["verified", "refuted", "refuted"], Verdict::T),
            (vec!["verified", "verified", "refuted"], Verdict::F),
            (vec!["refuted", "refuted", "refuted"], Verdict::F),
            (vec!["verified", "neither", "refuted"], Verdict::U),
        ];
        for (fates, want) in cases {
            let (model, turned_green, trees, _) = orchard(&fates);
            let ev = Evaluator::new(&model, LogicKind::Kleene);
            let prop = quant(QuantSort::Unique, MatchKind::Weak, 1, &trees, turned_green);
            assert_eq!(ev.eval(&prop).unwrap(), want, "fates {fates:?}");
        }
    }

    #[test]
    fn majority_thresholds_are_strict() {
        // nine of ten witnesses is not strictly more than 90%
        let mut fates = vec!["verified"; 9];
        fates.push("refuted");
        let (model, turned_green, trees, _) = orchard(&fates);
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        let theta = Theta::permille(900).unwrap();
        let most = quant(
            QuantSort::Most(Some(theta)),
            MatchKind::Weak,
            1,
            &trees,
            turned_green.clone(),
        );
        assert_eq!(ev.eval(&most).unwrap(), Verdict::F);

        // the default threshold is a strict majority
        let default = quant(QuantSort::Most(None), MatchKind::Weak, 1, &trees, turned_green);
        assert_eq!(ev.eval(&default).unwrap(), Verdict::T);
    }

    #[test]
    fn singleton_universal_collapses_to_instantiation() {
        for fate in ["verified", "refuted", "neither"] {
            let (model, turned_green, _, _) = orchard(&[fate]);
            let ev = Evaluator::new(&model, LogicKind::Kleene);
            let tree0 = model
                .named(&Symbol::new("trees"))
                .unwrap()
                .domain_view()
                .into_iter()
                .next()
                .unwrap();
            let forall = quant(
                QuantSort::ForAll,
                MatchKind::Weak,
                1,
                &Element::singleton(tree0.clone()),
                turned_green.clone(),
            );
            let instance = basic(MatchKind::Weak, 1, &tree0, turned_green.clone());
            assert_eq!(ev.eval(&forall).unwrap(), ev.eval(&instance).unwrap());
        }
    }

    #[test]
    fn restriction_and_quantifier_must_bind_distinct_variables() {
        let (model, turned_green, trees, _) = orchard(&["verified"]);
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        let tree0 = trees.domain_view().into_iter().next().unwrap();
        let bound_once = basic(MatchKind::Weak, 1, &tree0, turned_green);
        // a second restriction at the quantifier's own position
        let clash = basic(MatchKind::Weak, 2, &trees, bound_once);
        assert!(matches!(
            ev.eval(&clash),
            Err(TruthError::VarCollision { var: 2 })
        ));
    }

    #[test]
    fn connective_spot_checks() {
        let (g, mystery) = garden_with_mystery();
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        let p = |v: TruthValue| prop_with_truth(&g, v, &mystery);

        let t_and_u = conn(TableConn::And, vec![p(Tv), p(Uv)]);
        assert_eq!(ev.eval(&t_and_u).unwrap(), Verdict::U);

        let v_or_t = conn(TableConn::Or, vec![p(Vv), p(Tv)]);
        assert_eq!(ev.eval(&v_or_t).unwrap(), Verdict::V);

        let u_implies_u = conn(TableConn::Implies, vec![p(Uv), p(Uv)]);
        assert_eq!(ev.eval(&u_implies_u).unwrap(), Verdict::U);
        let lukasiewicz = Evaluator::new(&g.model, LogicKind::Lukasiewicz);
        assert_eq!(lukasiewicz.eval(&u_implies_u).unwrap(), Verdict::T);

        let not_v = conn(TableConn::Not, vec![p(Vv)]);
        assert_eq!(ev.eval(&not_v).unwrap(), Verdict::V);
        let not_f = conn(TableConn::Not, vec![p(Fv)]);
        assert_eq!(ev.eval(&not_f).unwrap(), Verdict::T);
    }

    #[test]
    fn exclusive_or_unfolds_to_its_definition() {
        let (g, mystery) = garden_with_mystery();
        for logic in [LogicKind::Kleene, LogicKind::Lukasiewicz] {
            let ev = Evaluator::new(&g.model, logic);
            for a in [Tv, Fv, Uv, Vv] {
                for b in [Tv, Fv, Uv, Vv] {
                    let pa = prop_with_truth(&g, a, &mystery);
                    let pb = prop_with_truth(&g, b, &mystery);
                    let direct = conn(TableConn::Xor, vec![pa.clone(), pb.clone()]);
                    let unfolded = conn(
                        TableConn::And,
                        vec![
                            conn(TableConn::Or, vec![pa.clone(), pb.clone()]),
                            conn(TableConn::Not, vec![conn(TableConn::And, vec![pa, pb])]),
                        ],
                    );
                    assert_eq!(
                        ev.eval(&direct).unwrap(),
                        ev.eval(&unfolded).unwrap(),
                        "{a}⊻{b} under {logic}"
                    );
                }
            }
        }
    }

    #[test]
    fn associated_relation_connectives_check_their_relation() {
        let g = garden();
        // two verified events and a relation pairing their contents
        let e1 = obs(&["ann"], Ac, 5, &[0], "thunder");
        let e2 = obs(&["ann"], Ac, 5, &[1], "flash");
        let mut b = CognitiveModel::builder().world("real", 1);
        for a in g.model.observations().iter() {
            let id = g.model.id_of(a).unwrap().to_string();
            b = b.observation(&id, a.clone()).unwrap();
        }
        b = b.observation("e1", e1.clone()).unwrap().observation("e2", e2.clone()).unwrap();
        let c1 = Element::Composite(comp(&[&e1]));
        let c2 = Element::Composite(comp(&[&e2]));
        let content1 = set(std::slice::from_ref(&c1));
        let content2 = set(std::slice::from_ref(&c2));
        let cooccur = pairs(&[(&content1, &content2)]);
        for (name, e) in g.model.named_elements() {
            b = b.element(name.as_str(), e.clone());
        }
        let model = b
            .element("thunder", c1.clone())
            .element("thunders", content1.clone())
            .element("flash", c2.clone())
            .element("flashes", content2.clone())
            .element("cooccur", cooccur)
            .build()
            .unwrap();
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        let p1 = basic(MatchKind::Weak, 1, &c1, Sense::Leaf(content1));
        let p2 = basic(MatchKind::Weak, 1, &c2, Sense::Leaf(content2));
        let linked = Sense::Node {
            op: OperationDef::Connective(ConnectiveKind::Associated {
                relation: Symbol::new("cooccur"),
            }),
            args: vec![SenseArg::Denot(p1.clone()), SenseArg::Denot(p2.clone())],
        };
        assert_eq!(ev.eval(&linked).unwrap(), Verdict::T);

        // swapping the clauses leaves the relation unmatched
        let swapped = Sense::Node {
            op: OperationDef::Connective(ConnectiveKind::Associated {
                relation: Symbol::new("cooccur"),
            }),
            args: vec![SenseArg::Denot(p2), SenseArg::Denot(p1)],
        };
        assert_eq!(ev.eval(&swapped).unwrap(), Verdict::F);
    }

    fn modal_inputs(g: &Garden) -> (crate::lexicon::Lexicon, Context) {
        let mut lexicon = g.lexicon.clone();
        lexicon.define(
            "u",
            vec![
                DenotationRef::Named(Symbol::new("man1")),
                DenotationRef::Named(Symbol::new("man2")),
            ],
        );
        lexicon.define(
            "v",
            vec![
                DenotationRef::Named(Symbol::new("man1")),
                DenotationRef::Named(Symbol::new("man2")),
            ],
        );
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
        let mut context = g.context.clone();
        context.conventions.insert(
            Symbol::new("ID-OBJ"),
            vec![OperationDef::basic(MatchKind::Exact, 2)],
        );
        context.conventions.insert(
            Symbol::new("ID-SUBJ"),
            vec![OperationDef::basic(MatchKind::Exact, 1)],
        );
        (lexicon, context)
    }

    fn identity_clause(left: &str, right: &str) -> DepTree {
        DepTree::node_with_convention(
            DepTree::leaf(left),
            DepTree::node_with_convention(DepTree::leaf(right), DepTree::leaf("is"), "ID-OBJ"),
            "ID-SUBJ",
        )
    }

    #[test]
    fn necessity_distinguishes_token_identity_from_coincidence() {
        let g = garden();
        let (lexicon, context) = modal_inputs(&g);
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);

        // the same token twice: every reading pairs an element with itself
        let u_is_u = DepTree::node(identity_clause("u", "u"), DepTree::leaf("necessarily"));
        let result = ev.eval_sentence(&u_is_u, &lexicon, &context).unwrap();
        assert_eq!(result.verdict, Verdict::T);
        assert!(result.effective);

        // two tokens with the same candidates: some readings differ
        let u_is_v = DepTree::node(identity_clause("u", "v"), DepTree::leaf("necessarily"));
        let result = ev.eval_sentence(&u_is_v, &lexicon, &context).unwrap();
        assert_eq!(result.verdict, Verdict::F);

        let maybe_u_is_v = DepTree::node(identity_clause("u", "v"), DepTree::leaf("possibly"));
        let result = ev.eval_sentence(&maybe_u_is_v, &lexicon, &context).unwrap();
        assert_eq!(result.verdict, Verdict::T);
    }

    #[test]
    fn decided_modal_members_satisfy_duality() {
        let g = garden();
        let (lexicon, context) = modal_inputs(&g);
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        let clause = identity_clause("u", "v");
        let necessary = ev
            .eval_sentence(
                &DepTree::node(clause.clone(), DepTree::leaf("necessarily")),
                &lexicon,
                &context,
            )
            .unwrap();
        // collect the member verdicts and check the dual formulation
        let Sense::ModalNode { clause_senses, .. } = &necessary.triple.sense else { panic!() };
        let members: Vec<Verdict> =
            clause_senses.iter().map(|s| ev.eval(s).unwrap()).collect();
        let some_false = members.contains(&Verdict::F);
        assert_eq!(necessary.verdict == Verdict::T, !some_false);
    }

    #[test]
    fn denotation_truth_requires_agreement() {
        let g = garden();
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        let same = person_identity(&g, "man1", "man1");
        ev.eval(&same).unwrap();
        let Denotation::Elem(content) = crate::interp::eval_sense(&same, &g.model).unwrap()
        else {
            panic!()
        };
        assert_eq!(ev.eval_denotation_truth(&content), Verdict::T);

        // negation passes its content through, so the same element is now
        // also implied by a false sense: no common verdict remains
        let negated = conn(TableConn::Not, vec![same]);
        assert_eq!(ev.eval(&negated).unwrap(), Verdict::F);
        assert_eq!(ev.eval_denotation_truth(&content), Verdict::Undefined);

        // an element never implied this session
        assert_eq!(
            ev.eval_denotation_truth(&empty()),
            Verdict::Undefined
        );
    }

    #[test]
    fn explanation_truth_follows_the_two_conditions() {
        let g = garden();
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);
        let sense = person_identity(&g, "man1", "man1");
        let expl = Explanation::Leaf { token: Symbol::new("x"), sense: sense.clone() };
        assert_eq!(ev.explanation_truth(&expl, true, true).unwrap(), Verdict::T);
        // pairing a sub-phrase with a non-chosen sense falsifies
        assert_eq!(ev.explanation_truth(&expl, true, false).unwrap(), Verdict::F);
        assert_eq!(ev.explanation_truth(&expl, false, true).unwrap(), Verdict::Undefined);
    }

    #[test]
    fn sentences_evaluate_and_normal_phrases_do_not() {
        let g = garden();
        let mut lexicon = g.lexicon.clone();
        lexicon.define("Tom", vec![DenotationRef::Named(Symbol::new("man1"))]);
        lexicon.define("Mike", vec![DenotationRef::Named(Symbol::new("man1"))]);
        lexicon.define("Sam", vec![DenotationRef::Named(Symbol::new("man2"))]);
        lexicon.define("is", vec![DenotationRef::Named(Symbol::new("iden"))]);
        let (_, context) = modal_inputs(&g);
        let ev = Evaluator::new(&g.model, LogicKind::Kleene);

        let same = identity_clause("Tom", "Mike");
        let result = ev.eval_sentence(&same, &lexicon, &context).unwrap();
        assert_eq!(result.verdict, Verdict::T);
        assert_eq!(result.trace.kind, "set-atomic");

        let different = identity_clause("Tom", "Sam");
        let result = ev.eval_sentence(&different, &lexicon, &context).unwrap();
        assert_eq!(result.verdict, Verdict::F);

        // a normal phrase at the root reports the out-of-band marker
        let phrase = DepTree::leaf("flowers");
        let result = ev.eval_sentence(&phrase, &lexicon, &context).unwrap();
        assert_eq!(result.verdict, Verdict::Undefined);
        assert_eq!(result.trace.kind, "normal-phrase");
    }

    #[test]
    fn trace_witnesses_satisfy_the_cited_relation() {
        let e_ac = obs(&["ann"], Ac, 1, &[0], "spark");
        let e_im = obs(&["ann"], Im, 2, &[0], "spark");
        let confirm = obs(&["bob"], Ac, 2, &[0], "spark");
        let mut b = CognitiveModel::builder().world("real", 1);
        for (id, o) in [("a", &e_ac), ("i", &e_im), ("c", &confirm)] {
            b = b.observation(id, o.clone()).unwrap();
        }
        let event = Element::Composite(comp(&[&e_ac, &e_im]));
        let model = b
            .element("event", event.clone())
            .element("events", set(std::slice::from_ref(&event)))
            .build()
            .unwrap();
        let sense = basic(MatchKind::Weak, 1, &event.clone(), Sense::Leaf(set(&[event])));
        let ev = Evaluator::new(&model, LogicKind::Kleene);
        let trace = ev.trace(&sense).unwrap();
        assert_eq!(trace.verdict, Verdict::T);
        assert_eq!(trace.witnesses.len(), 1);
        let w = &trace.witnesses[0];
        assert_eq!((w.imaginary.as_str(), w.actual.as_str(), w.refutes), ("i", "c", false));
        let im = model.observation(&Symbol::new("i")).unwrap();
        let ac = model.observation(&Symbol::new("c")).unwrap();
        assert!(crate::observation::directly_verifies(ac, im));
    }
}
