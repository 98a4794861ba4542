//! On-disk formats: a single JSON family for models, lexicons, contexts
//! and trees, each with a top-level version key. Observations are flat
//! records; named elements reference observation ids; trees are nested
//! two-element arrays with leaf strings, a quoted-speech form, and
//! convention-slot annotations.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::interp::{DepTree, Explanation, Phrase, Sense, SenseArg};
use crate::lexicon::{
    ArgLevel, ConnectiveKind, Context, ContextFilter, DenotationRef, Directive, Lexicon,
    LexiconEntry, MatchKind, MeaningMode, ModalSort, OperationDef, QuantSort, TableConn, Theta,
};
use crate::model::{
    CognitiveModel, Element, ProductKind, Region, Relation, RelationKind, Segment, TimePoint,
};
use crate::observation::{
    CompositeObservation, ObsStatus, ObserverSpec, ParamDecl, ParamPredicate,
    PrimitiveObservation, ResolutionPower, WorldPath,
};
use crate::value::{DomainTag, ParamValue, Symbol};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: unsupported version {got} (expected {FORMAT_VERSION})")]
    Version { path: String, got: u32 },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { path: path.to_string(), message: message.into() }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&text, &path.display().to_string())
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, path: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

// ---------------------------------------------------------------------
// shared value forms

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ValueDecl {
    Int(i64),
    Sym(String),
    Tuple(Vec<i64>),
    Empty,
}

impl ValueDecl {
    fn build(&self) -> ParamValue {
        match self {
            ValueDecl::Int(n) => ParamValue::Int(*n),
            ValueDecl::Sym(s) => ParamValue::Sym(Symbol::new(s)),
            ValueDecl::Tuple(t) => ParamValue::Tuple(t.clone()),
            ValueDecl::Empty => ParamValue::Empty,
        }
    }
}

fn tag_of(name: &str, path: &str) -> Result<DomainTag, FormatError> {
    match name {
        "int" => Ok(DomainTag::Int),
        "sym" => Ok(DomainTag::Sym),
        "tuple" => Ok(DomainTag::Tuple),
        "empty" => Ok(DomainTag::Empty),
        other => Err(invalid(path, format!("unknown domain tag {other}"))),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PredDecl {
    In(String, Vec<ValueDecl>),
    And(Vec<PredDecl>),
    Or(Vec<PredDecl>),
}

impl PredDecl {
    fn build(&self) -> ParamPredicate {
        match self {
            PredDecl::In(param, values) => {
                ParamPredicate::In(Symbol::new(param), values.iter().map(|v| v.build()).collect())
            }
            PredDecl::And(ps) => ParamPredicate::And(ps.iter().map(|p| p.build()).collect()),
            PredDecl::Or(ps) => ParamPredicate::Or(ps.iter().map(|p| p.build()).collect()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
enum OpDecl {
    Basic { r#match: String, var: usize, #[serde(default)] arg_level: Option<String> },
    Quantifier { sort: String, r#match: String, var: usize, #[serde(default)] theta: Option<f64> },
    Connective(ConnDecl),
    Modal { sort: String, mode: String },
    ContextOp(ContextOpDecl),
    Select { var: usize, r#match: String },
    Assoc { relation: String, subject_var: usize, object_var: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ConnDecl {
    Table(String),
    Assoc { assoc: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ContextOpDecl {
    Named { named: Vec<String> },
    Pred { pred: PredDecl },
}

fn match_kind(name: &str, path: &str) -> Result<MatchKind, FormatError> {
    match name {
        "weak" => Ok(MatchKind::Weak),
        "strong" => Ok(MatchKind::Strong),
        "exact" => Ok(MatchKind::Exact),
        other => Err(invalid(path, format!("unknown match kind {other}"))),
    }
}

fn arg_level(name: Option<&str>, path: &str) -> Result<ArgLevel, FormatError> {
    match name {
        None | Some("denotation") => Ok(ArgLevel::Denotation),
        Some("sense") => Ok(ArgLevel::Sense),
        Some("explanation") => Ok(ArgLevel::Explanation),
        Some(other) => Err(invalid(path, format!("unknown argument level {other}"))),
    }
}

impl OpDecl {
    fn build(&self, path: &str) -> Result<OperationDef, FormatError> {
        Ok(match self {
            OpDecl::Basic { r#match, var, arg_level: lvl } => OperationDef::Basic {
                match_kind: match_kind(r#match, path)?,
                var: *var,
                arg_level: arg_level(lvl.as_deref(), path)?,
            },
            OpDecl::Quantifier { sort, r#match, var, theta } => {
                let theta = theta
                    .map(|t| Theta::from_fraction(t).map_err(|e| invalid(path, e.to_string())))
                    .transpose()?;
                let sort = match sort.as_str() {
                    "forall" => QuantSort::ForAll,
                    "exists" => QuantSort::Exists,
                    "unique" => QuantSort::Unique,
                    "most" => QuantSort::Most(theta),
                    other => return Err(invalid(path, format!("unknown quantifier sort {other}"))),
                };
                OperationDef::Quantifier { sort, match_kind: match_kind(r#match, path)?, var: *var }
            }
            OpDecl::Connective(ConnDecl::Table(name)) => {
                let t = match name.as_str() {
                    "not" => TableConn::Not,
                    "and" => TableConn::And,
                    "or" => TableConn::Or,
                    "implies" => TableConn::Implies,
                    "iff" => TableConn::Iff,
                    "xor" => TableConn::Xor,
                    other => return Err(invalid(path, format!("unknown connective table {other}"))),
                };
                OperationDef::Connective(ConnectiveKind::Table(t))
            }
            OpDecl::Connective(ConnDecl::Assoc { assoc }) => OperationDef::Connective(
                ConnectiveKind::Associated { relation: Symbol::new(assoc) },
            ),
            OpDecl::Modal { sort, mode } => {
                let sort = match sort.as_str() {
                    "necessity" => ModalSort::Necessity,
                    "possibility" => ModalSort::Possibility,
                    other => return Err(invalid(path, format!("unknown modal sort {other}"))),
                };
                let mode = match mode.as_str() {
                    "denotation" => MeaningMode::Denotation,
                    "sense" => MeaningMode::Sense,
                    "explanation" => MeaningMode::Explanation,
                    other => return Err(invalid(path, format!("unknown meaning mode {other}"))),
                };
                OperationDef::Modal { sort, mode }
            }
            OpDecl::ContextOp(ContextOpDecl::Named { named }) => OperationDef::ContextOp {
                filter: ContextFilter::Named(named.iter().map(|n| Symbol::new(n)).collect()),
            },
            OpDecl::ContextOp(ContextOpDecl::Pred { pred }) => {
                OperationDef::ContextOp { filter: ContextFilter::ObsPred(pred.build()) }
            }
            OpDecl::Select { var, r#match } => {
                OperationDef::Select { var: *var, match_kind: match_kind(r#match, path)? }
            }
            OpDecl::Assoc { relation, subject_var, object_var } => OperationDef::Assoc {
                relation: Symbol::new(relation),
                subject_var: *subject_var,
                object_var: *object_var,
            },
        })
    }
}

// ---------------------------------------------------------------------
// model file

#[derive(Debug, Deserialize)]
struct ModelFile {
    version: u32,
    #[serde(default)]
    worlds: BTreeMap<String, WorldDecl>,
    #[serde(default)]
    powers: BTreeMap<String, PowerDecl>,
    #[serde(default)]
    self_labels: Vec<String>,
    #[serde(default)]
    observations: Vec<ObsDecl>,
    #[serde(default)]
    elements: BTreeMap<String, ElementDecl>,
    #[serde(default)]
    processes: BTreeMap<String, ProcessDecl>,
    #[serde(default)]
    objects: BTreeMap<String, ObjectDeclFile>,
    #[serde(default)]
    strings: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct WorldDecl {
    dim: usize,
    #[serde(default)]
    subworlds: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct PowerDecl {
    state: Vec<(String, String)>,
    resolution: Vec<(String, String)>,
    result: (String, String),
}

#[derive(Debug, Deserialize)]
struct ObsDecl {
    id: String,
    world: Vec<String>,
    observer: ObserverDecl,
    rpoint: Vec<ValueDecl>,
    result: ValueDecl,
}

#[derive(Debug, Deserialize)]
struct ObserverDecl {
    labels: Vec<String>,
    power: String,
    state: Vec<ValueDecl>,
    acim: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ElementDecl {
    Comp { comp: Vec<String> },
    Set { set: Vec<String> },
    Seq { seq: Vec<String> },
    Rel { rel: RelDecl },
    Proc { proc: String },
    Sense { sense: SenseDecl },
    Expl { expl: ExplDecl },
    Op { op: OpDecl },
}

#[derive(Debug, Deserialize)]
struct RelDecl {
    #[serde(default)]
    kind: Option<RelKindDecl>,
    rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RelKindDecl {
    Simple(String),
    Mental { mental: MentalDecl },
}

#[derive(Debug, Clone, Deserialize)]
struct MentalDecl {
    knowledge: bool,
    product: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SenseDecl {
    Leaf { leaf: String },
    Node { op: OpDecl, args: Vec<SenseDecl> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ExplDecl {
    Leaf { token: String, sense: SenseDecl },
    Node { modifier: Box<ExplDecl>, head: Box<ExplDecl>, node: usize, surface: String, sense: SenseDecl },
}

#[derive(Debug, Deserialize)]
struct ProcessDecl {
    world: String,
    segment: (TimePoint, TimePoint),
    regions: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
struct ObjectDeclFile {
    #[serde(default)]
    strict_start_end: bool,
}

fn check_version(version: u32, path: &str) -> Result<(), FormatError> {
    if version != FORMAT_VERSION {
        return Err(FormatError::Version { path: path.to_string(), got: version });
    }
    Ok(())
}

pub fn load_model(path: &Path) -> Result<CognitiveModel, FormatError> {
    let file: ModelFile = read_json(path)?;
    build_model(file, &path.display().to_string())
}

pub fn parse_model(text: &str, name: &str) -> Result<CognitiveModel, FormatError> {
    let file: ModelFile = parse_json(text, name)?;
    build_model(file, name)
}

fn build_model(file: ModelFile, path: &str) -> Result<CognitiveModel, FormatError> {
    check_version(file.version, path)?;
    let mut builder = CognitiveModel::builder();
    for (name, decl) in &file.worlds {
        builder = builder.world(name, decl.dim);
        for sub in &decl.subworlds {
            builder = builder.subworld(name, sub);
        }
    }
    for label in &file.self_labels {
        builder = builder.self_label(label);
    }

    let mut powers: BTreeMap<String, Arc<ResolutionPower>> = BTreeMap::new();
    for (name, decl) in &file.powers {
        let build_params = |decls: &[(String, String)]| -> Result<Vec<ParamDecl>, FormatError> {
            decls
                .iter()
                .map(|(n, t)| Ok(ParamDecl { name: Symbol::new(n), domain: tag_of(t, path)? }))
                .collect()
        };
        let power = ResolutionPower {
            name: Symbol::new(name),
            state: build_params(&decl.state)?,
            resolution: build_params(&decl.resolution)?,
            result: ParamDecl {
                name: Symbol::new(&decl.result.0),
                domain: tag_of(&decl.result.1, path)?,
            },
        };
        power.validate().map_err(|e| invalid(path, e.to_string()))?;
        powers.insert(name.clone(), Arc::new(power));
    }

    let mut observations: BTreeMap<String, PrimitiveObservation> = BTreeMap::new();
    for decl in &file.observations {
        let power = powers
            .get(&decl.observer.power)
            .ok_or_else(|| invalid(path, format!("observation {}: unknown power {}", decl.id, decl.observer.power)))?
            .clone();
        let status = match decl.observer.acim.as_str() {
            "ac" | "actual" => ObsStatus::Actual,
            "im" | "imaginary" => ObsStatus::Imaginary,
            other => return Err(invalid(path, format!("observation {}: unknown status {other}", decl.id))),
        };
        let observer = ObserverSpec::new(
            decl.observer.labels.iter().map(|s| Symbol::new(s)).collect(),
            power,
            decl.observer.state.iter().map(|v| v.build()).collect(),
            status,
        )
        .map_err(|e| invalid(path, format!("observation {}: {e}", decl.id)))?;
        let world = WorldPath::new(decl.world.iter().map(|s| Symbol::new(s)).collect())
            .map_err(|e| invalid(path, format!("observation {}: {e}", decl.id)))?;
        let obs = PrimitiveObservation::new(
            world,
            observer,
            decl.rpoint.iter().map(|v| v.build()).collect(),
            decl.result.build(),
        )
        .map_err(|e| invalid(path, format!("observation {}: {e}", decl.id)))?;
        builder = builder
            .observation(&decl.id, obs.clone())
            .map_err(|e| invalid(path, e.to_string()))?;
        observations.insert(decl.id.clone(), obs);
    }

    for (name, decl) in &file.processes {
        let mut regions: BTreeMap<TimePoint, Region> = BTreeMap::new();
        for (t, points) in &decl.regions {
            let t: TimePoint = t
                .parse()
                .map_err(|_| invalid(path, format!("process {name}: bad moment key {t}")))?;
            regions.insert(t, points.iter().cloned().collect());
        }
        let segment = Segment::new(decl.segment.0, decl.segment.1)
            .map_err(|e| invalid(path, format!("process {name}: {e}")))?;
        builder = builder.process(name, &decl.world, segment, regions);
    }

    // resolve named elements with memoized recursion over name references
    let resolver = ElementResolver { file: &file, path, observations: &observations };
    let mut cache: BTreeMap<String, Element> = BTreeMap::new();
    for name in file.elements.keys() {
        let e = resolver.resolve(name, &mut cache, &mut Vec::new())?;
        builder = builder.element(name, e);
    }

    for (name, decl) in &file.objects {
        builder = builder.object(name, decl.strict_start_end);
    }
    for (surface, element) in &file.strings {
        builder = builder.string(surface, element);
    }
    builder.build().map_err(|e| invalid(path, e.to_string()))
}

struct ElementResolver<'a> {
    file: &'a ModelFile,
    path: &'a str,
    observations: &'a BTreeMap<String, PrimitiveObservation>,
}

impl<'a> ElementResolver<'a> {
    fn resolve(
        &self,
        name: &str,
        cache: &mut BTreeMap<String, Element>,
        stack: &mut Vec<String>,
    ) -> Result<Element, FormatError> {
        if let Some(e) = cache.get(name) {
            return Ok(e.clone());
        }
        if stack.iter().any(|n| n == name) {
            return Err(invalid(self.path, format!("element cycle through {name}")));
        }
        let decl = self
            .file
            .elements
            .get(name)
            .ok_or_else(|| invalid(self.path, format!("unknown element {name}")))?;
        stack.push(name.to_string());
        let element = self.build_decl(decl, cache, stack)?;
        stack.pop();
        cache.insert(name.to_string(), element.clone());
        Ok(element)
    }

    fn composite(&self, ids: &[String]) -> Result<CompositeObservation, FormatError> {
        let mut members = Vec::new();
        for id in ids {
            let obs = self
                .observations
                .get(id)
                .ok_or_else(|| invalid(self.path, format!("unknown observation id {id}")))?;
            members.push(obs.clone());
        }
        Ok(CompositeObservation::new(members))
    }

    fn build_decl(
        &self,
        decl: &ElementDecl,
        cache: &mut BTreeMap<String, Element>,
        stack: &mut Vec<String>,
    ) -> Result<Element, FormatError> {
        Ok(match decl {
            ElementDecl::Comp { comp } => Element::Composite(self.composite(comp)?),
            ElementDecl::Set { set } => {
                let mut members = BTreeSet::new();
                for n in set {
                    members.insert(self.resolve(n, cache, stack)?);
                }
                Element::Set(members)
            }
            ElementDecl::Seq { seq } => {
                let mut members = Vec::new();
                for n in seq {
                    members.push(self.resolve(n, cache, stack)?);
                }
                Element::Seq(members)
            }
            ElementDecl::Rel { rel } => {
                let kind = match &rel.kind {
                    None => RelationKind::Standard,
                    Some(RelKindDecl::Simple(s)) => match s.as_str() {
                        "standard" => RelationKind::Standard,
                        "identity" => RelationKind::Identity,
                        other => {
                            return Err(invalid(self.path, format!("unknown relation kind {other}")))
                        }
                    },
                    Some(RelKindDecl::Mental { mental }) => {
                        let product = match mental.product.as_str() {
                            "denotation" => ProductKind::Denotation,
                            "sense" => ProductKind::Sense,
                            "explanation" => ProductKind::Explanation,
                            "text" => ProductKind::Text,
                            other => {
                                return Err(invalid(
                                    self.path,
                                    format!("unknown product kind {other}"),
                                ))
                            }
                        };
                        RelationKind::Mental { knowledge: mental.knowledge, product }
                    }
                };
                let mut rows = BTreeSet::new();
                for row in &rel.rows {
                    let mut out = Vec::new();
                    for n in row {
                        out.push(self.resolve(n, cache, stack)?);
                    }
                    rows.insert(out);
                }
                Element::Relation(Relation { kind, rows })
            }
            ElementDecl::Proc { proc } => {
                // a process-backed element denotes the member composite,
                // recomputed from the declared frame
                let pd = self
                    .file
                    .processes
                    .get(proc)
                    .ok_or_else(|| invalid(self.path, format!("unknown process {proc}")))?;
                return self.process_composite(pd);
            }
            ElementDecl::Sense { sense } => {
                Element::SenseElem(Box::new(self.sense(sense, cache, stack)?))
            }
            ElementDecl::Expl { expl } => {
                Element::ExplElem(Box::new(self.expl(expl, cache, stack)?))
            }
            ElementDecl::Op { op } => Element::Op(op.build(self.path)?),
        })
    }

    fn process_composite(&self, pd: &ProcessDecl) -> Result<Element, FormatError> {
        let segment = Segment::new(pd.segment.0, pd.segment.1)
            .map_err(|e| invalid(self.path, e.to_string()))?;
        let mut regions: BTreeMap<TimePoint, Region> = BTreeMap::new();
        for (t, points) in &pd.regions {
            let t: TimePoint =
                t.parse().map_err(|_| invalid(self.path, format!("bad moment key {t}")))?;
            regions.insert(t, points.iter().cloned().collect());
        }
        let members = self
            .observations
            .values()
            .filter(|o| {
                if o.world.top().as_str() != pd.world {
                    return false;
                }
                let t = o.time();
                segment.contains(t)
                    && regions.get(&t).map(|r| r.contains(o.space())).unwrap_or(false)
            })
            .cloned();
        Ok(Element::Composite(CompositeObservation::new(members)))
    }

    fn sense(
        &self,
        decl: &SenseDecl,
        cache: &mut BTreeMap<String, Element>,
        stack: &mut Vec<String>,
    ) -> Result<Sense, FormatError> {
        Ok(match decl {
            SenseDecl::Leaf { leaf } => Sense::Leaf(self.resolve(leaf, cache, stack)?),
            SenseDecl::Node { op, args } => {
                let op = op.build(self.path)?;
                let level = op.arg_level();
                let mut built = Vec::new();
                for (i, a) in args.iter().enumerate() {
                    let s = self.sense(a, cache, stack)?;
                    built.push(if i == 0 {
                        match level {
                            ArgLevel::Denotation => SenseArg::Denot(s),
                            ArgLevel::Sense => SenseArg::SenseOf(s),
                            ArgLevel::Explanation => {
                                return Err(invalid(
                                    self.path,
                                    "explanation-level arguments need an expl literal",
                                ))
                            }
                        }
                    } else {
                        SenseArg::Denot(s)
                    });
                }
                Sense::Node { op, args: built }
            }
        })
    }

    fn expl(
        &self,
        decl: &ExplDecl,
        cache: &mut BTreeMap<String, Element>,
        stack: &mut Vec<String>,
    ) -> Result<Explanation, FormatError> {
        Ok(match decl {
            ExplDecl::Leaf { token, sense } => Explanation::Leaf {
                token: Symbol::new(token),
                sense: self.sense(sense, cache, stack)?,
            },
            ExplDecl::Node { modifier, head, node, surface, sense } => Explanation::Node {
                modifier: Box::new(self.expl(modifier, cache, stack)?),
                head: Box::new(self.expl(head, cache, stack)?),
                phrase: Phrase { node: *node, surface: surface.clone() },
                sense: self.sense(sense, cache, stack)?,
            },
        })
    }
}

// ---------------------------------------------------------------------
// lexicon file

#[derive(Debug, Deserialize)]
struct LexiconFile {
    version: u32,
    entries: BTreeMap<String, EntryDecl>,
}

#[derive(Debug, Deserialize)]
struct EntryDecl {
    #[serde(default)]
    denotations: Vec<DenotRefDecl>,
    #[serde(default)]
    empty_meaning: bool,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DenotRefDecl {
    Elem { elem: String },
    Op { op: OpDecl },
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, FormatError> {
    let file: LexiconFile = read_json(path)?;
    build_lexicon(file, &path.display().to_string())
}

pub fn parse_lexicon(text: &str, name: &str) -> Result<Lexicon, FormatError> {
    let file: LexiconFile = parse_json(text, name)?;
    build_lexicon(file, name)
}

fn build_lexicon(file: LexiconFile, path: &str) -> Result<Lexicon, FormatError> {
    check_version(file.version, path)?;
    let mut lexicon = Lexicon::new();
    for (surface, decl) in &file.entries {
        let mut denotations = Vec::new();
        for d in &decl.denotations {
            denotations.push(match d {
                DenotRefDecl::Elem { elem } => DenotationRef::Named(Symbol::new(elem)),
                DenotRefDecl::Op { op } => DenotationRef::Builtin(op.build(path)?),
            });
        }
        lexicon
            .insert(LexiconEntry {
                surface: Symbol::new(surface),
                denotations,
                empty_meaning: decl.empty_meaning,
            })
            .map_err(|e| invalid(path, e.to_string()))?;
    }
    Ok(lexicon)
}

// ---------------------------------------------------------------------
// context file

#[derive(Debug, Deserialize)]
struct ContextFile {
    version: u32,
    #[serde(default)]
    facts: Vec<Vec<String>>,
    #[serde(default)]
    selected_world: Option<String>,
    #[serde(default)]
    time_window: Option<(TimePoint, TimePoint)>,
    #[serde(default)]
    region_hints: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    conventions: BTreeMap<String, Vec<OpDecl>>,
    #[serde(default)]
    directives: BTreeMap<String, DirectiveDecl>,
    #[serde(default)]
    most_threshold: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DirectiveDecl {
    Pick { pick: usize },
    Named { named: String },
    Conv { conv: usize },
    Region { region: String },
}

pub fn load_context(path: &Path, model: &CognitiveModel) -> Result<Context, FormatError> {
    let file: ContextFile = read_json(path)?;
    build_context(file, &path.display().to_string(), model)
}

pub fn parse_context(
    text: &str,
    name: &str,
    model: &CognitiveModel,
) -> Result<Context, FormatError> {
    let file: ContextFile = parse_json(text, name)?;
    build_context(file, name, model)
}

fn build_context(
    file: ContextFile,
    path: &str,
    model: &CognitiveModel,
) -> Result<Context, FormatError> {
    check_version(file.version, path)?;
    let mut facts = Vec::new();
    for ids in &file.facts {
        let mut members = Vec::new();
        for id in ids {
            let obs = model
                .observation(&Symbol::new(id))
                .ok_or_else(|| invalid(path, format!("fact names unknown observation {id}")))?;
            members.push(obs.clone());
        }
        facts.push(CompositeObservation::new(members));
    }
    let time_window = file
        .time_window
        .map(|(a, b)| Segment::new(a, b))
        .transpose()
        .map_err(|e| invalid(path, e.to_string()))?;
    let mut conventions = BTreeMap::new();
    for (key, ops) in &file.conventions {
        let built: Result<Vec<_>, _> = ops.iter().map(|o| o.build(path)).collect();
        conventions.insert(Symbol::new(key), built?);
    }
    let mut directives = BTreeMap::new();
    for (key, d) in &file.directives {
        let directive = match d {
            DirectiveDecl::Pick { pick } => Directive::Pick(*pick),
            DirectiveDecl::Named { named } => Directive::Named(Symbol::new(named)),
            DirectiveDecl::Conv { conv } => Directive::Convention(*conv),
            DirectiveDecl::Region { region } => Directive::Region(Symbol::new(region)),
        };
        directives.insert(Symbol::new(key), directive);
    }
    let most_threshold = file
        .most_threshold
        .map(|t| Theta::from_fraction(t).map_err(|e| invalid(path, e.to_string())))
        .transpose()?;
    let context = Context {
        facts,
        selected_world: file.selected_world.map(|w| Symbol::new(&w)),
        time_window,
        region_hints: file
            .region_hints
            .iter()
            .map(|(k, v)| (Symbol::new(k), v.iter().cloned().collect()))
            .collect(),
        conventions,
        directives,
        most_threshold,
    };
    context.validate().map_err(|e| invalid(path, e.to_string()))?;
    Ok(context)
}

// ---------------------------------------------------------------------
// tree file

#[derive(Debug, Deserialize)]
struct TreeFile {
    version: u32,
    #[serde(default)]
    tree: Option<TreeDecl>,
    #[serde(default)]
    trees: Vec<TreeDecl>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum TreeDecl {
    Leaf(String),
    Pair(Vec<TreeDecl>),
    Annotated { r#mod: Box<TreeDecl>, head: Box<TreeDecl>, #[serde(default)] conv: Option<String> },
    Quoted { q: String },
}

impl TreeDecl {
    fn build(&self, path: &str) -> Result<DepTree, FormatError> {
        Ok(match self {
            TreeDecl::Leaf(token) => DepTree::leaf(token),
            TreeDecl::Quoted { q } => DepTree::quoted(q),
            TreeDecl::Pair(parts) => {
                if parts.len() != 2 {
                    return Err(invalid(path, "tree arrays must have exactly two parts"));
                }
                DepTree::node(parts[0].build(path)?, parts[1].build(path)?)
            }
            TreeDecl::Annotated { r#mod, head, conv } => {
                let m = r#mod.build(path)?;
                let h = head.build(path)?;
                match conv {
                    Some(c) => DepTree::node_with_convention(m, h, c),
                    None => DepTree::node(m, h),
                }
            }
        })
    }
}

pub fn load_trees(path: &Path) -> Result<Vec<DepTree>, FormatError> {
    let file: TreeFile = read_json(path)?;
    build_trees(file, &path.display().to_string())
}

pub fn parse_trees(text: &str, name: &str) -> Result<Vec<DepTree>, FormatError> {
    let file: TreeFile = parse_json(text, name)?;
    build_trees(file, name)
}

fn build_trees(file: TreeFile, path: &str) -> Result<Vec<DepTree>, FormatError> {
    check_version(file.version, path)?;
    let mut out = Vec::new();
    if let Some(t) = &file.tree {
        out.push(t.build(path)?);
    }
    for t in &file.trees {
        out.push(t.build(path)?);
    }
    if out.is_empty() {
        return Err(invalid(path, "tree file declares no tree"));
    }
    Ok(out)
}
