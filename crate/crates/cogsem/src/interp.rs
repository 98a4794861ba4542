//! Recursive interpretation of binary dependency trees into meaning
//! triples: a denotation (the model element), a sense (the operation tree
//! producing it), and an explanation (the token-to-sense record).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lexicon::{
    ArgLevel, ConnectiveKind, Context, Directive, Lexicon, MatchKind, OperationDef,
    ResolvedCandidate,
};
use crate::model::{CognitiveModel, Element, Relation};
use crate::value::Symbol;

/// Binary dependency tree. Internal nodes pair a modifier with a head;
/// leaves are tokens, optionally quoted speech.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepTree {
    Leaf { token: Symbol, quoted: bool },
    Node { modifier: Box<DepTree>, head: Box<DepTree>, convention: Option<Symbol> },
}

impl DepTree {
    pub fn leaf(token: &str) -> DepTree {
        DepTree::Leaf { token: Symbol::new(token), quoted: false }
    }

    pub fn quoted(token: &str) -> DepTree {
        DepTree::Leaf { token: Symbol::new(token), quoted: true }
    }

    pub fn node(modifier: DepTree, head: DepTree) -> DepTree {
        DepTree::Node { modifier: Box::new(modifier), head: Box::new(head), convention: None }
    }

    pub fn node_with_convention(modifier: DepTree, head: DepTree, convention: &str) -> DepTree {
        DepTree::Node {
            modifier: Box::new(modifier),
            head: Box::new(head),
            convention: Some(Symbol::new(convention)),
        }
    }

    pub fn surface(&self) -> String {
        match self {
            DepTree::Leaf { token, quoted } => {
                if *quoted {
                    format!("'{token}'")
                } else {
                    token.to_string()
                }
            }
            DepTree::Node { modifier, head, .. } => {
                format!("{} {}", modifier.surface(), head.surface())
            }
        }
    }
}

/// Preorder-indexed view of a tree: the root is node 0, then the modifier
/// subtree, then the head subtree.
#[derive(Debug, Clone)]
pub(crate) struct IndexedNode {
    pub surface: String,
    pub kind: IndexedKind,
}

#[derive(Debug, Clone)]
pub(crate) enum IndexedKind {
    Leaf { token: Symbol, quoted: bool },
    Pair { modifier: usize, head: usize, convention: Option<Symbol> },
}

/// Upper bound on the token-assignment enumeration behind a modal clause.
pub const MAX_CLAUSE_READINGS: usize = 4096;

pub(crate) fn index_tree(tree: &DepTree) -> Vec<IndexedNode> {
    fn walk(tree: &DepTree, nodes: &mut Vec<IndexedNode>) -> usize {
        let id = nodes.len();
        nodes.push(IndexedNode { surface: tree.surface(), kind: IndexedKind::Leaf { token: Symbol::new(""), quoted: false } });
        match tree {
            DepTree::Leaf { token, quoted } => {
                nodes[id].kind = IndexedKind::Leaf { token: token.clone(), quoted: *quoted };
            }
            DepTree::Node { modifier, head, convention } => {
                let m = walk(modifier, nodes);
                let h = walk(head, nodes);
                nodes[id].kind =
                    IndexedKind::Pair { modifier: m, head: h, convention: convention.clone() };
            }
        }
        id
    }
    let mut nodes = Vec::new();
    walk(tree, &mut nodes);
    nodes
}

/// How an operation consumed its modifier argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SenseArg {
    /// The argument entered at denotation level.
    Denot(Sense),
    /// The argument is the sense itself.
    SenseOf(Sense),
    /// The argument is the explanation (the sense kept for re-evaluation).
    ExplOf(Box<Explanation>, Sense),
}

impl SenseArg {
    pub fn sense(&self) -> &Sense {
        match self {
            SenseArg::Denot(s) | SenseArg::SenseOf(s) | SenseArg::ExplOf(_, s) => s,
        }
    }

    /// The element this argument contributes to an application.
    pub fn value(&self, model: &CognitiveModel) -> Result<Element, ApplyError> {
        match self {
            SenseArg::Denot(s) => match eval_sense(s, model)? {
                Denotation::Elem(e) => Ok(e),
                _ => Err(ApplyError::OperationAsContent),
            },
            SenseArg::SenseOf(s) => Ok(Element::SenseElem(Box::new(s.clone()))),
            SenseArg::ExplOf(x, _) => Ok(Element::ExplElem(x.clone())),
        }
    }
}

/// The operation tree of a phrase: what composed the denotation, from
/// what. Quantified and restricted nodes record the operation, its domain
/// argument and the relation argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sense {
    /// A content leaf: the (context-narrowed) element itself.
    Leaf(Element),
    /// A function leaf: an operation.
    OpLeaf(OperationDef),
    /// An applied (or curried, when one argument is present on a binary
    /// operation) operation node.
    Node { op: OperationDef, args: Vec<SenseArg> },
    /// A modal operation over the full meaning set of its clause.
    ModalNode {
        op: OperationDef,
        clause_surface: String,
        clause_senses: Vec<Sense>,
        clause_expls: Vec<Explanation>,
    },
}

impl Sense {
    /// Positions of the underlying relation not yet bound by a basic or
    /// quantifier operation; `None` when the sense is not relation-valued.
    pub fn relation_positions(&self) -> Option<BTreeSet<usize>> {
        match self {
            Sense::Leaf(Element::Relation(r)) => {
                r.arity().map(|k| (1..=k).collect()).or(Some(BTreeSet::new()))
            }
            Sense::Leaf(Element::Set(_)) | Sense::Leaf(Element::Composite(_)) => {
                Some(BTreeSet::from([1]))
            }
            Sense::Leaf(_) | Sense::OpLeaf(_) | Sense::ModalNode { .. } => None,
            Sense::Node { op, args } => {
                if args.len() < op.arity() {
                    return None;
                }
                match op {
                    OperationDef::Basic { var, .. } | OperationDef::Quantifier { var, .. } => {
                        let mut inner = args[1].sense().relation_positions()?;
                        inner.remove(var);
                        Some(inner)
                    }
                    OperationDef::Select { .. }
                    | OperationDef::Assoc { .. }
                    | OperationDef::ContextOp { .. } => Some(BTreeSet::from([1])),
                    OperationDef::Connective(_) | OperationDef::Modal { .. } => None,
                }
            }
        }
    }

    /// Strip an outermost quantifier, yielding the operation, its domain
    /// argument, and the remaining formula.
    pub fn strip_quantifier(&self) -> Option<(&OperationDef, &SenseArg, Formula)> {
        match self {
            Sense::Node { op: op @ OperationDef::Quantifier { .. }, args } if args.len() == 2 => {
                let inner = args[1].sense().clone();
                Formula::new(inner).ok().map(|f| (op, &args[0], f))
            }
            _ => None,
        }
    }

    pub fn for_each_element(&self, f: &mut impl FnMut(&Element)) {
        match self {
            Sense::Leaf(e) => f(e),
            Sense::OpLeaf(_) => {}
            Sense::Node { args, .. } => {
                for a in args {
                    match a {
                        SenseArg::Denot(s) | SenseArg::SenseOf(s) => s.for_each_element(f),
                        SenseArg::ExplOf(x, s) => {
                            x.for_each_element(f);
                            s.for_each_element(f);
                        }
                    }
                }
            }
            Sense::ModalNode { clause_senses, clause_expls, .. } => {
                for s in clause_senses {
                    s.for_each_element(f);
                }
                for x in clause_expls {
                    x.for_each_element(f);
                }
            }
        }
    }
}

/// A phrase identifier inside one tree: preorder node id and surface text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phrase {
    pub node: usize,
    pub surface: String,
}

/// The token-to-sense pairing record of a phrase. Its root phrase is the
/// target phrase; the root sense is the implied sense.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Explanation {
    Leaf {
        token: Symbol,
        sense: Sense,
    },
    Node {
        modifier: Box<Explanation>,
        head: Box<Explanation>,
        phrase: Phrase,
        sense: Sense,
    },
    ModalNode {
        head: Box<Explanation>,
        clause: Phrase,
        clause_expls: Vec<Explanation>,
        phrase: Phrase,
        sense: Sense,
    },
}

impl Explanation {
    /// The sense this explanation implies.
    pub fn sense(&self) -> &Sense {
        match self {
            Explanation::Leaf { sense, .. }
            | Explanation::Node { sense, .. }
            | Explanation::ModalNode { sense, .. } => sense,
        }
    }

    pub fn target(&self) -> Option<&Phrase> {
        match self {
            Explanation::Leaf { .. } => None,
            Explanation::Node { phrase, .. } | Explanation::ModalNode { phrase, .. } => {
                Some(phrase)
            }
        }
    }

    /// Every (sub-phrase, sense) pair contained in this explanation.
    pub fn pairs(&self) -> Vec<(Phrase, &Sense)> {
        let mut out = Vec::new();
        self.collect_pairs(&mut out);
        out
    }

    fn collect_pairs<'a>(&'a self, out: &mut Vec<(Phrase, &'a Sense)>) {
        match self {
            Explanation::Leaf { .. } => {}
            Explanation::Node { modifier, head, phrase, sense } => {
                modifier.collect_pairs(out);
                head.collect_pairs(out);
                out.push((phrase.clone(), sense));
            }
            Explanation::ModalNode { head, phrase, sense, .. } => {
                head.collect_pairs(out);
                out.push((phrase.clone(), sense));
            }
        }
    }

    pub fn for_each_element(&self, f: &mut impl FnMut(&Element)) {
        match self {
            Explanation::Leaf { sense, .. } => sense.for_each_element(f),
            Explanation::Node { modifier, head, sense, .. } => {
                modifier.for_each_element(f);
                head.for_each_element(f);
                sense.for_each_element(f);
            }
            Explanation::ModalNode { head, clause_expls, sense, .. } => {
                head.for_each_element(f);
                for x in clause_expls {
                    x.for_each_element(f);
                }
                sense.for_each_element(f);
            }
        }
    }
}

/// What a phrase denotes: a model element, an operation, or an operation
/// waiting for its second argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Denotation {
    Elem(Element),
    Op(OperationDef),
    Partial { op: OperationDef, first: Element },
}

impl Denotation {
    pub fn as_element(&self) -> Option<&Element> {
        match self {
            Denotation::Elem(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_empty_denotation(&self) -> bool {
        matches!(self, Denotation::Elem(e) if e.is_empty_denotation())
    }
}

/// The three meanings of one reading of a phrase. The cached denotation
/// always equals the re-evaluation of the sense.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeaningTriple {
    pub denotation: Denotation,
    pub sense: Sense,
    pub explanation: Explanation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error("argument is not relation-valued")]
    NotARelation,
    #[error("variable x{var} not free here (arity {arity})")]
    VarNotFree { var: usize, arity: usize },
    #[error("weak and strong matches require composite observations")]
    MatchIncompatible,
    #[error("operation expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("operation used where content was expected")]
    OperationAsContent,
    #[error("named relation {name} missing or not a relation")]
    UnknownRelation { name: Symbol },
    #[error("modal operations apply to meaning sets, not elements")]
    ModalMisuse,
    #[error(transparent)]
    Value(#[from] crate::value::ValueError),
}

fn match_element(mk: MatchKind, a: &Element, b: &Element) -> Result<bool, ApplyError> {
    match mk {
        MatchKind::Exact => Ok(a == b),
        MatchKind::Weak | MatchKind::Strong => {
            let (Element::Composite(ca), Element::Composite(cb)) = (a, b) else {
                return Err(ApplyError::MatchIncompatible);
            };
            Ok(match mk {
                MatchKind::Weak => ca.overlaps(cb),
                MatchKind::Strong => ca.is_subset(cb),
                MatchKind::Exact => unreachable!(),
            })
        }
    }
}

enum RelView {
    Set(BTreeSet<Element>),
    Rel(Relation),
}

impl RelView {
    fn of(e: &Element) -> Result<RelView, ApplyError> {
        match e {
            Element::Set(s) => Ok(RelView::Set(s.clone())),
            Element::Composite(_) => Ok(RelView::Set(BTreeSet::from([e.clone()]))),
            Element::Relation(r) => Ok(RelView::Rel(r.clone())),
            _ => Err(ApplyError::NotARelation),
        }
    }

    fn rows(&self) -> Vec<Vec<Element>> {
        match self {
            RelView::Set(s) => s.iter().map(|m| vec![m.clone()]).collect(),
            RelView::Rel(r) => r.rows.iter().cloned().collect(),
        }
    }

    fn rebuild(&self, rows: Vec<Vec<Element>>) -> Element {
        match self {
            RelView::Set(_) => Element::Set(rows.into_iter().map(|mut r| r.remove(0)).collect()),
            RelView::Rel(r) => Element::Relation(Relation {
                kind: r.kind,
                rows: rows.into_iter().collect(),
            }),
        }
    }

    fn arity(&self) -> usize {
        match self {
            RelView::Set(_) => 1,
            RelView::Rel(r) => r.arity().unwrap_or(0),
        }
    }
}

fn restrict_rows(
    view: &RelView,
    var: usize,
    mut keep: impl FnMut(&Element) -> Result<bool, ApplyError>,
) -> Result<Element, ApplyError> {
    let rows = view.rows();
    if let Some(first) = rows.first() {
        if var == 0 || var > first.len() {
            return Err(ApplyError::VarNotFree { var, arity: first.len() });
        }
    } else if var == 0 {
        return Err(ApplyError::VarNotFree { var, arity: view.arity() });
    }
    let mut kept = Vec::new();
    for row in rows {
        if keep(&row[var - 1])? {
            kept.push(row);
        }
    }
    Ok(view.rebuild(kept))
}

/// Keep the rows matched by every element of the domain. The exact match
/// compares a singleton domain as its element and a larger domain as the
/// whole set.
pub fn apply_basic(
    match_kind: MatchKind,
    domain: &BTreeSet<Element>,
    var: usize,
    relation: &Element,
) -> Result<Element, ApplyError> {
    let view = RelView::of(relation)?;
    match match_kind {
        MatchKind::Exact => {
            let probe = if domain.len() == 1 {
                domain.iter().next().unwrap().clone()
            } else {
                Element::Set(domain.clone())
            };
            restrict_rows(&view, var, |b| Ok(probe == *b))
        }
        _ => restrict_rows(&view, var, |b| {
            for a in domain {
                if !match_element(match_kind, a, b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    }
}

/// Keep the rows matched by some element of the domain. The content is the
/// same for every quantifier sort; only the truth clauses differ.
pub fn apply_quantifier(
    match_kind: MatchKind,
    domain: &BTreeSet<Element>,
    var: usize,
    relation: &Element,
) -> Result<Element, ApplyError> {
    let view = RelView::of(relation)?;
    restrict_rows(&view, var, |b| {
        for a in domain {
            if match_element(match_kind, a, b)? {
                return Ok(true);
            }
        }
        Ok(false)
    })
}

fn apply_op(
    op: &OperationDef,
    values: &[Element],
    model: &CognitiveModel,
) -> Result<Element, ApplyError> {
    match op {
        OperationDef::Basic { match_kind, var, .. } => {
            apply_basic(*match_kind, &values[0].domain_view(), *var, &values[1])
        }
        OperationDef::Quantifier { match_kind, var, .. } => {
            apply_quantifier(*match_kind, &values[0].domain_view(), *var, &values[1])
        }
        OperationDef::Select { var, match_kind } => {
            let rel = RelView::of(&values[0])?;
            let rows = rel.rows();
            let kept = values[1]
                .domain_view()
                .into_iter()
                .filter_map(|m| {
                    for row in &rows {
                        if *var == 0 || *var > row.len() {
                            return Some(Err(ApplyError::VarNotFree {
                                var: *var,
                                arity: row.len(),
                            }));
                        }
                        match match_element(*match_kind, &m, &row[*var - 1]) {
                            Ok(true) => return Some(Ok(m)),
                            Ok(false) => {}
                            Err(e) => return Some(Err(e)),
                        }
                    }
                    None
                })
                .collect::<Result<BTreeSet<_>, _>>()?;
            Ok(Element::Set(kept))
        }
        OperationDef::Assoc { relation, subject_var, object_var } => {
            let rel = match model.named(relation) {
                Some(Element::Relation(r)) => r.clone(),
                _ => return Err(ApplyError::UnknownRelation { name: relation.clone() }),
            };
            let object_domain = values[0].domain_view();
            let mut kept = BTreeSet::new();
            for m in values[1].domain_view() {
                let mut hit = false;
                for row in &rel.rows {
                    if *subject_var == 0
                        || *subject_var > row.len()
                        || *object_var == 0
                        || *object_var > row.len()
                    {
                        return Err(ApplyError::VarNotFree {
                            var: (*subject_var).max(*object_var),
                            arity: row.len(),
                        });
                    }
                    if !match_element(MatchKind::Weak, &m, &row[*subject_var - 1])? {
                        continue;
                    }
                    for d in &object_domain {
                        if match_element(MatchKind::Weak, d, &row[*object_var - 1])? {
                            hit = true;
                            break;
                        }
                    }
                    if hit {
                        break;
                    }
                }
                if hit {
                    kept.insert(m);
                }
            }
            Ok(Element::Set(kept))
        }
        OperationDef::Connective(ConnectiveKind::Table(t)) => {
            if t.arity() == 1 {
                Ok(values[0].clone())
            } else {
                Ok(Element::Set(BTreeSet::from([Element::Seq(vec![
                    values[0].clone(),
                    values[1].clone(),
                ])])))
            }
        }
        OperationDef::Connective(ConnectiveKind::Associated { relation }) => {
            let rel = match model.named(relation) {
                Some(Element::Relation(r)) => r.clone(),
                _ => return Err(ApplyError::UnknownRelation { name: relation.clone() }),
            };
            let rows = rel
                .rows
                .iter()
                .filter(|row| row.len() == 2 && row[0] == values[0] && row[1] == values[1])
                .cloned()
                .collect();
            Ok(Element::Relation(Relation { kind: rel.kind, rows }))
        }
        OperationDef::ContextOp { filter } => {
            let members = values[0].domain_view();
            let kept: BTreeSet<Element> = match filter {
                crate::lexicon::ContextFilter::Named(names) => {
                    let allowed: BTreeSet<Element> = names
                        .iter()
                        .filter_map(|n| model.named(n).cloned())
                        .collect();
                    members.into_iter().filter(|m| allowed.contains(m)).collect()
                }
                crate::lexicon::ContextFilter::ObsPred(pred) => {
                    let mut kept = BTreeSet::new();
                    for m in members {
                        let mut all = true;
                        let mut err = None;
                        m.for_each_composite(&mut |c| {
                            for a in c.iter() {
                                match pred.eval(a) {
                                    Ok(true) => {}
                                    Ok(false) => all = false,
                                    Err(e) => err = Some(e),
                                }
                            }
                        });
                        if let Some(e) = err {
                            return Err(ApplyError::Value(e));
                        }
                        if all {
                            kept.insert(m);
                        }
                    }
                    kept
                }
            };
            Ok(Element::Set(kept))
        }
        OperationDef::Modal { .. } => Err(ApplyError::ModalMisuse),
    }
}

/// Re-evaluate a sense bottom-up. A completed application with an
/// empty-denotation content argument yields the empty denotation (the
/// vacancy path); an application outside the operation's domain is an
/// error, meaning the sense denotes nothing at all.
pub fn eval_sense(sense: &Sense, model: &CognitiveModel) -> Result<Denotation, ApplyError> {
    match sense {
        Sense::Leaf(e) => Ok(Denotation::Elem(e.clone())),
        Sense::OpLeaf(op) => Ok(Denotation::Op(op.clone())),
        Sense::Node { op, args } => {
            if args.is_empty() || args.len() > op.arity() {
                return Err(ApplyError::Arity { expected: op.arity(), got: args.len() });
            }
            let mut values = Vec::with_capacity(args.len());
            for a in args {
                values.push(a.value(model)?);
            }
            if values.len() < op.arity() {
                return Ok(Denotation::Partial { op: op.clone(), first: values[0].clone() });
            }
            // bound variables must still be free in the relation argument
            if let (
                OperationDef::Basic { var, .. } | OperationDef::Quantifier { var, .. },
                Some(positions),
            ) = (op, args.get(1).and_then(|a| a.sense().relation_positions()))
            {
                if !positions.contains(var) {
                    return Err(ApplyError::VarNotFree { var: *var, arity: positions.len() });
                }
            }
            if values.iter().any(|v| v.is_empty_denotation()) {
                return Ok(Denotation::Elem(Element::empty()));
            }
            apply_op(op, &values, model).map(Denotation::Elem)
        }
        Sense::ModalNode { clause_senses, .. } => {
            let mut denots = BTreeSet::new();
            for s in clause_senses {
                if let Ok(Denotation::Elem(e)) = eval_sense(s, model) {
                    denots.insert(e);
                } else if let Ok(Denotation::Op(op)) = eval_sense(s, model) {
                    denots.insert(Element::Op(op));
                }
            }
            Ok(Denotation::Elem(Element::Set(denots)))
        }
    }
}

/// A sense with designated unbound relation positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub sense: Sense,
    pub free: BTreeSet<usize>,
}

impl Formula {
    pub fn new(sense: Sense) -> Result<Formula, InterpError> {
        let free = sense
            .relation_positions()
            .ok_or(InterpError::NotRelationValued)?;
        Ok(Formula { sense, free })
    }
}

/// Assignment of elements to free positions.
pub type ValueAssignment = BTreeMap<usize, Element>;

/// Bind free positions of a formula with basic operations built from the
/// template, smallest position outermost. Every free position must be
/// assigned a nonempty element.
pub fn instantiate(
    formula: &Formula,
    assignment: &ValueAssignment,
    template: &OperationDef,
) -> Result<Sense, InterpError> {
    let OperationDef::Basic { match_kind, arg_level, .. } = template else {
        return Err(InterpError::BadInstantiationTemplate);
    };
    let mut acc = formula.sense.clone();
    for var in formula.free.iter().rev() {
        let value = assignment
            .get(var)
            .ok_or(InterpError::UnassignedVariable { var: *var })?;
        if value.is_empty_denotation() {
            return Err(InterpError::EmptyAssignment { var: *var });
        }
        acc = Sense::Node {
            op: OperationDef::Basic { match_kind: *match_kind, var: *var, arg_level: *arg_level },
            args: vec![SenseArg::Denot(Sense::Leaf(value.clone())), SenseArg::Denot(acc)],
        };
    }
    Ok(acc)
}

/// The non-composite denotation of quoted speech: the registered
/// abstract-string element for the surface form.
pub fn quote(model: &CognitiveModel, surface: &str) -> Result<Element, InterpError> {
    model
        .string_element(surface)
        .map(|(_, e)| e.clone())
        .ok_or_else(|| InterpError::UnregisteredString { surface: surface.to_string() })
}

/// All readings of one tree node.
#[derive(Debug, Clone)]
pub struct NodeMeanings {
    pub id: usize,
    pub surface: String,
    pub is_leaf: bool,
    pub in_modal_clause: bool,
    pub triples: Vec<MeaningTriple>,
}

/// Interpretation result for a whole tree, nodes in preorder.
#[derive(Debug, Clone)]
pub struct TreeMeanings {
    pub nodes: Vec<NodeMeanings>,
}

impl TreeMeanings {
    pub fn root(&self) -> &NodeMeanings {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &NodeMeanings {
        self.nodes.iter().find(|n| n.id == id).expect("node id from this tree")
    }

    /// Every node has exactly one reading.
    pub fn is_effective(&self) -> bool {
        self.nodes.iter().all(|n| n.triples.len() == 1)
    }

    /// Every node outside modal clause subtrees has exactly one reading;
    /// clauses under a modal head are expected to stay multi-meaning.
    pub fn effective_for_sentence(&self) -> bool {
        self.nodes
            .iter()
            .filter(|n| !n.in_modal_clause)
            .all(|n| n.triples.len() == 1)
    }

    pub fn ambiguous_nodes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| !n.in_modal_clause && n.triples.len() != 1)
            .map(|n| n.id)
            .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error(transparent)]
    Lexicon(#[from] crate::lexicon::LexiconError),
    #[error("lexicon names unknown element {name}")]
    UnknownElement { name: Symbol },
    #[error("quoted string not registered as an abstract symbol: {surface}")]
    UnregisteredString { surface: String },
    #[error("uninterpretable node {node} ({surface}): {reason}")]
    Uninterpretable { node: usize, surface: String, reason: String },
    #[error("clause of modal node {node} has no meaning")]
    ClauseUninterpretable { node: usize },
    #[error("clause at node {node} exceeds {limit} token-assignment readings")]
    ClauseTooAmbiguous { node: usize, limit: usize },
    #[error("sense is not relation-valued")]
    NotRelationValued,
    #[error("instantiation template must be a basic operation")]
    BadInstantiationTemplate,
    #[error("no value assigned to variable x{var}")]
    UnassignedVariable { var: usize },
    #[error("variable x{var} assigned an empty element")]
    EmptyAssignment { var: usize },
}

/// Interpret a tree: every node receives its set of meaning triples,
/// leaves by lookup and context application, inner nodes by composing the
/// readings of their children.
pub fn interpret(
    tree: &DepTree,
    lexicon: &Lexicon,
    context: &Context,
    model: &CognitiveModel,
) -> Result<TreeMeanings, InterpError> {
    context.validate()?;
    let nodes = index_tree(tree);
    let mut listings: Vec<NodeMeanings> = Vec::new();
    let walker = Walker { nodes: &nodes, lexicon, context, model };
    walker.interpret_node(0, None, &mut Some(&mut listings), false)?;
    listings.sort_by_key(|n| n.id);
    Ok(TreeMeanings { nodes: listings })
}

struct Walker<'a> {
    nodes: &'a [IndexedNode],
    lexicon: &'a Lexicon,
    context: &'a Context,
    model: &'a CognitiveModel,
}

type Assignment = BTreeMap<Symbol, usize>;

impl<'a> Walker<'a> {
    fn leaf_candidates(
        &self,
        id: usize,
        token: &Symbol,
        assignment: Option<&Assignment>,
    ) -> Result<Vec<ResolvedCandidate>, InterpError> {
        let entry = self.lexicon.lookup(token)?;
        let mut resolved = Vec::new();
        for r in &entry.denotations {
            match r {
                crate::lexicon::DenotationRef::Named(name) => {
                    let element = self
                        .model
                        .named(name)
                        .cloned()
                        .ok_or_else(|| InterpError::UnknownElement { name: name.clone() })?;
                    resolved.push(ResolvedCandidate { name: Some(name.clone()), element });
                }
                crate::lexicon::DenotationRef::Builtin(op) => {
                    resolved.push(ResolvedCandidate { name: None, element: Element::Op(op.clone()) });
                }
            }
        }
        let narrowed = match assignment {
            // token-correlated mode: node directives do not apply
            Some(_) => self.context.apply(usize::MAX, Some(token), &resolved)?,
            None => self.context.apply(id, Some(token), &resolved)?,
        };
        match assignment {
            None => Ok(narrowed),
            Some(assign) => {
                let index = *assign.get(token).expect("assignment covers clause tokens");
                Ok(vec![narrowed[index].clone()])
            }
        }
    }

    fn convention_op(
        &self,
        id: usize,
        key: Option<&Symbol>,
    ) -> Result<OperationDef, String> {
        let Some(key) = key else {
            return Err("content head without a convention slot".to_string());
        };
        let Some(ops) = self.context.convention(key) else {
            return Err(format!("no convention binding for pattern {key}"));
        };
        if ops.is_empty() {
            return Err(format!("convention pattern {key} lists no operations"));
        }
        let index = match self.context.directive_for_node(id) {
            Some(Directive::Convention(i)) => *i,
            _ => 0,
        };
        ops.get(index)
            .cloned()
            .ok_or_else(|| format!("convention directive index {index} out of range"))
    }

    fn make_arg(level: ArgLevel, triple: &MeaningTriple) -> SenseArg {
        match level {
            ArgLevel::Denotation => SenseArg::Denot(triple.sense.clone()),
            ArgLevel::Sense => SenseArg::SenseOf(triple.sense.clone()),
            ArgLevel::Explanation => {
                SenseArg::ExplOf(Box::new(triple.explanation.clone()), triple.sense.clone())
            }
        }
    }

    fn finish_node(
        &self,
        sense: Sense,
        modifier_expl: &Explanation,
        head_expl: &Explanation,
        phrase: &Phrase,
    ) -> Option<MeaningTriple> {
        let denotation = eval_sense(&sense, self.model).ok()?;
        let explanation = Explanation::Node {
            modifier: Box::new(modifier_expl.clone()),
            head: Box::new(head_expl.clone()),
            phrase: phrase.clone(),
            sense: sense.clone(),
        };
        Some(MeaningTriple { denotation, sense, explanation })
    }

    fn interpret_node(
        &self,
        id: usize,
        assignment: Option<&Assignment>,
        listings: &mut Option<&mut Vec<NodeMeanings>>,
        in_modal_clause: bool,
    ) -> Result<Vec<MeaningTriple>, InterpError> {
        let node = &self.nodes[id];
        let triples = match &node.kind {
            IndexedKind::Leaf { token, quoted } => {
                if *quoted {
                    let element = quote(self.model, token.as_str())?;
                    let sense = Sense::Leaf(element.clone());
                    vec![MeaningTriple {
                        denotation: Denotation::Elem(element),
                        sense: sense.clone(),
                        explanation: Explanation::Leaf { token: token.clone(), sense },
                    }]
                } else {
                    let candidates = self.leaf_candidates(id, token, assignment)?;
                    let mut out = Vec::new();
                    for c in candidates {
                        let (denotation, sense) = match c.element {
                            Element::Op(op) => (Denotation::Op(op.clone()), Sense::OpLeaf(op)),
                            e => (Denotation::Elem(e.clone()), Sense::Leaf(e)),
                        };
                        let triple = MeaningTriple {
                            denotation,
                            sense: sense.clone(),
                            explanation: Explanation::Leaf { token: token.clone(), sense },
                        };
                        if !out.contains(&triple) {
                            out.push(triple);
                        }
                    }
                    out
                }
            }
            IndexedKind::Pair { modifier, head, convention } => {
                let head_triples = self.interpret_node(*head, assignment, listings, in_modal_clause)?;
                let head_is_modal = head_triples
                    .iter()
                    .any(|t| matches!(t.denotation, Denotation::Op(OperationDef::Modal { .. })));
                let clause_mode = in_modal_clause || head_is_modal;
                let modifier_triples =
                    self.interpret_node(*modifier, assignment, listings, clause_mode)?;
                let phrase = Phrase { node: id, surface: node.surface.clone() };
                let mut out: Vec<MeaningTriple> = Vec::new();
                let push = |t: MeaningTriple, out: &mut Vec<MeaningTriple>| {
                    if !out.contains(&t) {
                        out.push(t);
                    }
                };
                let mut convention_issue: Option<String> = None;

                for h in &head_triples {
                    match &h.denotation {
                        Denotation::Op(op @ OperationDef::Modal { .. }) => {
                            let t = self.modal_triple(*modifier, op, h, &phrase)?;
                            push(t, &mut out);
                        }
                        // a unary head applies outright; a binary head
                        // curries, waiting for the outer argument
                        Denotation::Op(op) => {
                            for x in &modifier_triples {
                                let arg = Self::make_arg(op.arg_level(), x);
                                let sense = Sense::Node { op: op.clone(), args: vec![arg] };
                                if let Some(t) =
                                    self.finish_node(sense, &x.explanation, &h.explanation, &phrase)
                                {
                                    push(t, &mut out);
                                }
                            }
                        }
                        Denotation::Partial { op, .. } => {
                            // completing a curried operation: connectives
                            // take the outer clause as their first
                            // argument, everything else keeps the inner
                            // modifier first
                            let Sense::Node { args: curried, .. } = &h.sense else { continue };
                            for x in &modifier_triples {
                                let arg = Self::make_arg(op.arg_level(), x);
                                let args = if matches!(op, OperationDef::Connective(_)) {
                                    vec![arg, curried[0].clone()]
                                } else {
                                    vec![curried[0].clone(), arg]
                                };
                                let sense = Sense::Node { op: op.clone(), args };
                                if let Some(t) =
                                    self.finish_node(sense, &x.explanation, &h.explanation, &phrase)
                                {
                                    push(t, &mut out);
                                }
                            }
                        }
                        Denotation::Elem(_) => {
                            let op = match self.convention_op(id, convention.as_ref()) {
                                Ok(op) => op,
                                Err(reason) => {
                                    convention_issue = Some(reason);
                                    continue;
                                }
                            };
                            if op.arity() != 2 {
                                convention_issue =
                                    Some("convention operations must be binary".to_string());
                                continue;
                            }
                            for x in &modifier_triples {
                                if !matches!(x.denotation, Denotation::Elem(_)) {
                                    continue;
                                }
                                let arg = Self::make_arg(op.arg_level(), x);
                                let sense = Sense::Node {
                                    op: op.clone(),
                                    args: vec![arg, SenseArg::Denot(h.sense.clone())],
                                };
                                if let Some(t) =
                                    self.finish_node(sense, &x.explanation, &h.explanation, &phrase)
                                {
                                    push(t, &mut out);
                                }
                            }
                        }
                    }
                }
                if out.is_empty() {
                    let reason = convention_issue
                        .unwrap_or_else(|| "no operation applies to any reading pair".to_string());
                    return Err(InterpError::Uninterpretable {
                        node: id,
                        surface: node.surface.clone(),
                        reason,
                    });
                }
                out
            }
        };
        if triples.is_empty() {
            return Err(InterpError::Uninterpretable {
                node: id,
                surface: node.surface.clone(),
                reason: "no candidate survives context application".to_string(),
            });
        }
        if let Some(sink) = listings.as_deref_mut() {
            sink.push(NodeMeanings {
                id,
                surface: node.surface.clone(),
                is_leaf: matches!(node.kind, IndexedKind::Leaf { .. }),
                in_modal_clause,
                triples: triples.clone(),
            });
        }
        Ok(triples)
    }

    /// The meaning set of a multi-meaning clause: one reading per
    /// consistent token-to-candidate assignment, so two occurrences of the
    /// same token always share a reading.
    fn clause_meaning_set(&self, clause: usize) -> Result<Vec<MeaningTriple>, InterpError> {
        let mut tokens = BTreeSet::new();
        collect_tokens(self.nodes, clause, &mut tokens);
        let mut options: Vec<(Symbol, usize)> = Vec::new();
        for token in &tokens {
            // usize::MAX: candidate narrowing without node directives
            let n = self.leaf_candidates(usize::MAX, token, None)?.len();
            if n == 0 {
                return Err(InterpError::ClauseUninterpretable { node: clause });
            }
            options.push((token.clone(), n));
        }
        let combinations = options
            .iter()
            .try_fold(1usize, |acc, (_, n)| acc.checked_mul(*n))
            .filter(|c| *c <= MAX_CLAUSE_READINGS);
        if combinations.is_none() {
            return Err(InterpError::ClauseTooAmbiguous {
                node: clause,
                limit: MAX_CLAUSE_READINGS,
            });
        }
        let mut picks = vec![0usize; options.len()];
        let mut readings: Vec<MeaningTriple> = Vec::new();
        loop {
            let assignment: Assignment = options
                .iter()
                .zip(picks.iter())
                .map(|((tok, _), i)| (tok.clone(), *i))
                .collect();
            match self.interpret_node(clause, Some(&assignment), &mut None, true) {
                Ok(ts) => {
                    for t in ts {
                        if !readings.contains(&t) {
                            readings.push(t);
                        }
                    }
                }
                Err(InterpError::Uninterpretable { .. }) => {}
                Err(e) => return Err(e),
            }
            // advance the mixed-radix counter over candidate picks
            let mut i = picks.len();
            loop {
                if i == 0 {
                    return if readings.is_empty() {
                        Err(InterpError::ClauseUninterpretable { node: clause })
                    } else {
                        Ok(readings)
                    };
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < options[i].1 {
                    break;
                }
                picks[i] = 0;
            }
        }
    }

    fn modal_triple(
        &self,
        clause: usize,
        op: &OperationDef,
        head: &MeaningTriple,
        phrase: &Phrase,
    ) -> Result<MeaningTriple, InterpError> {
        let readings = self.clause_meaning_set(clause)?;
        let clause_surface = self.nodes[clause].surface.clone();
        let sense = Sense::ModalNode {
            op: op.clone(),
            clause_surface: clause_surface.clone(),
            clause_senses: readings.iter().map(|t| t.sense.clone()).collect(),
            clause_expls: readings.iter().map(|t| t.explanation.clone()).collect(),
        };
        let denotation = eval_sense(&sense, self.model)
            .expect("modal denotations always evaluate");
        let explanation = Explanation::ModalNode {
            head: Box::new(head.explanation.clone()),
            clause: Phrase { node: clause, surface: clause_surface },
            clause_expls: readings.into_iter().map(|t| t.explanation).collect(),
            phrase: phrase.clone(),
            sense: sense.clone(),
        };
        Ok(MeaningTriple { denotation, sense, explanation })
    }
}

fn collect_tokens(nodes: &[IndexedNode], id: usize, out: &mut BTreeSet<Symbol>) {
    match &nodes[id].kind {
        IndexedKind::Leaf { token, quoted } => {
            if !*quoted {
                out.insert(token.clone());
            }
        }
        IndexedKind::Pair { modifier, head, .. } => {
            collect_tokens(nodes, *modifier, out);
            collect_tokens(nodes, *head, out);
        }
    }
}

/// A readable name for an element: its registered name when it has one,
/// otherwise a shape summary.
pub fn render_element(e: &Element, model: &CognitiveModel) -> String {
    if let Some(name) = model.element_name(e) {
        return name.to_string();
    }
    match e {
        Element::Composite(c) => format!("comp#{}", c.len()),
        Element::Set(s) => format!("set#{}", s.len()),
        Element::Seq(s) => format!("seq#{}", s.len()),
        Element::Relation(r) => {
            format!("rel#{}x{}", r.rows.len(), r.arity().unwrap_or(0))
        }
        Element::Op(op) => format!("op:{}", op.tag()),
        Element::SenseElem(s) => format!("sense:{}", render_sense(s, model)),
        Element::ExplElem(_) => "expl".to_string(),
    }
}

/// Prefix rendering of a sense tree.
pub fn render_sense(s: &Sense, model: &CognitiveModel) -> String {
    match s {
        Sense::Leaf(e) => render_element(e, model),
        Sense::OpLeaf(op) => op.tag(),
        Sense::Node { op, args } => {
            let rendered: Vec<String> = args
                .iter()
                .map(|a| match a {
                    SenseArg::Denot(s) => render_sense(s, model),
                    SenseArg::SenseOf(s) => format!("'{}", render_sense(s, model)),
                    SenseArg::ExplOf(_, s) => format!("expl'{}", render_sense(s, model)),
                })
                .collect();
            format!("({} {})", op.tag(), rendered.join(" "))
        }
        Sense::ModalNode { op, clause_surface, clause_senses, .. } => {
            let members: Vec<String> =
                clause_senses.iter().map(|s| render_sense(s, model)).collect();
            format!("({} \"{}\" {{{}}})", op.tag(), clause_surface, members.join("; "))
        }
    }
}

/// One-line outline of an explanation: tokens paired with their senses.
pub fn render_explanation(x: &Explanation, model: &CognitiveModel) -> String {
    match x {
        Explanation::Leaf { token, sense } => {
            format!("{}={}", token, render_sense(sense, model))
        }
        Explanation::Node { modifier, head, phrase, sense } => {
            format!(
                "[{} {} | {} :: {}]",
                render_explanation(modifier, model),
                render_explanation(head, model),
                phrase.surface,
                render_sense(sense, model)
            )
        }
        Explanation::ModalNode { head, clause, clause_expls, phrase, .. } => {
            format!(
                "[{} over \"{}\" ({} readings) | {}]",
                render_explanation(head, model),
                clause.surface,
                clause_expls.len(),
                phrase.surface
            )
        }
    }
}

/// A `Denotation` rendered for reports.
pub fn render_denotation(d: &Denotation, model: &CognitiveModel) -> String {
    match d {
        Denotation::Elem(e) if e.is_empty_denotation() => "(vacant: empty denotation)".to_string(),
        Denotation::Elem(e) => render_element(e, model),
        Denotation::Op(op) => format!("op:{}", op.tag()),
        Denotation::Partial { op, .. } => format!("partial:{}", op.tag()),
    }
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} \"{}\"", self.node, self.surface)
    }
}
