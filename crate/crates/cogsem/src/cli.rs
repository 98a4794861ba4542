//! Command implementations behind the thin binary: validation,
//! interpretation listings, and truth evaluation, with deterministic text
//! and structured output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::format;
use crate::interp::{render_denotation, render_explanation, render_sense, TreeMeanings};
use crate::lexicon::Theta;
use crate::model::{CognitiveModel, ConsistencyReport};
use crate::observation::ViolationPair;
use crate::truth::{Evaluator, LogicKind, TruthError, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model_path: PathBuf,
    pub lexicon_path: PathBuf,
    pub context_path: PathBuf,
    pub tree_path: PathBuf,
    pub logic: LogicKind,
    pub most_threshold: Option<Theta>,
    pub format: OutputFormat,
}

/// Rendered command result plus process exit code.
#[derive(Debug, Clone)]
pub struct CmdOutput {
    pub text: String,
    pub code: i32,
}

fn input_error(e: impl std::fmt::Display) -> CmdOutput {
    CmdOutput { text: format!("error: {e}\n"), code: EXIT_INPUT }
}

fn pair_ids(model: &CognitiveModel, pair: &ViolationPair) -> (String, String) {
    let id = |o| {
        model
            .id_of(o)
            .map(|s| s.to_string())
            .unwrap_or_else(|| "?".to_string())
    };
    (id(&pair.0), id(&pair.1))
}

#[derive(Serialize)]
struct ValidateReport {
    consistent: bool,
    unique_result: Vec<(String, String)>,
    weak: Vec<(String, String)>,
    strong_actual: Vec<(String, String)>,
}

fn validate_report(model: &CognitiveModel, report: &ConsistencyReport) -> ValidateReport {
    ValidateReport {
        consistent: report.is_consistent(),
        unique_result: report.unique_result.iter().map(|p| pair_ids(model, p)).collect(),
        weak: report.weak.iter().map(|p| pair_ids(model, p)).collect(),
        strong_actual: report.strong_actual.iter().map(|p| pair_ids(model, p)).collect(),
    }
}

/// Run the store-level checks over a model file.
pub fn cmd_validate(model_path: &Path, format: OutputFormat) -> CmdOutput {
    let model = match format::load_model(model_path) {
        Ok(m) => m,
        Err(e) => return input_error(e),
    };
    let report = model.consistency_report();
    let out = validate_report(&model, &report);
    let code = if out.consistent { EXIT_OK } else { EXIT_VIOLATION };
    let text = match format {
        OutputFormat::Structured => {
            format!("{}\n", serde_json::to_string_pretty(&out).expect("serializable report"))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let section = |s: &mut String, label: &str, pairs: &[(String, String)]| {
                let _ = writeln!(s, "{label}: {}", if pairs.is_empty() { "ok" } else { "VIOLATED" });
                for (a, b) in pairs {
                    let _ = writeln!(s, "  {a} / {b}");
                }
            };
            section(&mut s, "result-uniqueness", &out.unique_result);
            section(&mut s, "weak-observer-consistency", &out.weak);
            section(&mut s, "strong-observer-consistency (actual)", &out.strong_actual);
            let _ = writeln!(
                s,
                "model: {} observations, {} worlds, {} named elements: {}",
                model.observations().len(),
                model.worlds().len(),
                model.named_elements().len(),
                if out.consistent { "consistent" } else { "inconsistent" }
            );
            s
        }
    };
    CmdOutput { text, code }
}

struct LoadedInputs {
    model: CognitiveModel,
    lexicon: crate::lexicon::Lexicon,
    context: crate::lexicon::Context,
    trees: Vec<crate::interp::DepTree>,
}

fn load_inputs(config: &RunConfig) -> Result<LoadedInputs, CmdOutput> {
    let model = format::load_model(&config.model_path).map_err(input_error)?;
    let lexicon = format::load_lexicon(&config.lexicon_path).map_err(input_error)?;
    let context = format::load_context(&config.context_path, &model).map_err(input_error)?;
    let trees = format::load_trees(&config.tree_path).map_err(input_error)?;
    Ok(LoadedInputs { model, lexicon, context, trees })
}

fn require_consistent(model: &CognitiveModel) -> Result<(), CmdOutput> {
    let report = model.consistency_report();
    if report.is_consistent() {
        return Ok(());
    }
    let out = validate_report(model, &report);
    let mut text = String::from("model fails consistency checks; run validate for details\n");
    for (a, b) in out
        .unique_result
        .iter()
        .chain(out.weak.iter())
        .chain(out.strong_actual.iter())
    {
        let _ = writeln!(text, "  {a} / {b}");
    }
    Err(CmdOutput { text, code: EXIT_VIOLATION })
}

#[derive(Serialize)]
struct NodeReport {
    id: usize,
    surface: String,
    candidates: usize,
    modal_clause: bool,
    denotation: Option<String>,
    sense: Option<String>,
    explanation: Option<String>,
}

#[derive(Serialize)]
struct InterpretReport {
    surface: String,
    effective: bool,
    nodes: Vec<NodeReport>,
}

fn interpret_report(meanings: &TreeMeanings, model: &CognitiveModel) -> InterpretReport {
    let nodes = meanings
        .nodes
        .iter()
        .map(|n| {
            let chosen = (n.triples.len() == 1).then(|| &n.triples[0]);
            NodeReport {
                id: n.id,
                surface: n.surface.clone(),
                candidates: n.triples.len(),
                modal_clause: n.in_modal_clause,
                denotation: chosen.map(|t| render_denotation(&t.denotation, model)),
                sense: chosen.map(|t| render_sense(&t.sense, model)),
                explanation: chosen.map(|t| render_explanation(&t.explanation, model)),
            }
        })
        .collect();
    InterpretReport {
        surface: meanings.root().surface.clone(),
        effective: meanings.effective_for_sentence(),
        nodes,
    }
}

fn render_interpret_text(report: &InterpretReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "\"{}\": {}",
        report.surface,
        if report.effective { "effective" } else { "non-effective" }
    );
    for n in &report.nodes {
        let marker = if n.modal_clause { " (modal clause)" } else { "" };
        let _ = writeln!(s, "#{} \"{}\"  candidates={}{}", n.id, n.surface, n.candidates, marker);
        if let (Some(d), Some(sense), Some(x)) = (&n.denotation, &n.sense, &n.explanation) {
            let _ = writeln!(s, "    denotation: {d}");
            let _ = writeln!(s, "    sense: {sense}");
            let _ = writeln!(s, "    explanation: {x}");
        }
    }
    s
}

/// Interpret each input tree and print the per-node meaning listing.
pub fn cmd_interpret(config: &RunConfig) -> CmdOutput {
    let inputs = match load_inputs(config) {
        Ok(i) => i,
        Err(out) => return out,
    };
    if let Err(out) = require_consistent(&inputs.model) {
        return out;
    }
    let mut reports = Vec::new();
    for tree in &inputs.trees {
        match crate::interp::interpret(tree, &inputs.lexicon, &inputs.context, &inputs.model) {
            Ok(meanings) => reports.push(interpret_report(&meanings, &inputs.model)),
            Err(e) => {
                return CmdOutput {
                    text: format!("error: {e}\n"),
                    code: EXIT_VIOLATION,
                }
            }
        }
    }
    let text = match config.format {
        OutputFormat::Structured => {
            format!("{}\n", serde_json::to_string_pretty(&reports).expect("serializable report"))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&render_interpret_text(r));
            }
            s
        }
    };
    CmdOutput { text, code: EXIT_OK }
}

#[derive(Serialize)]
struct WitnessReport {
    imaginary: String,
    actual: String,
    relation: String,
}

#[derive(Serialize)]
struct EvalReport {
    surface: String,
    verdict: String,
    kind: String,
    effective: bool,
    content_size: Option<usize>,
    witnesses: Vec<WitnessReport>,
    subs: Vec<(String, String)>,
}

fn render_eval_text(report: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\"{}\"", report.surface);
    let _ = writeln!(s, "verdict: {}", report.verdict);
    let _ = writeln!(s, "classification: {}", report.kind);
    if let Some(n) = report.content_size {
        let _ = writeln!(s, "content-size: {n}");
    }
    if !report.effective {
        let _ = writeln!(s, "note: explanation condition failed (non-effective sub-phrase)");
    }
    for w in &report.witnesses {
        let _ = writeln!(s, "witness: im {} {} ac {}", w.imaginary, w.relation, w.actual);
    }
    for (label, v) in &report.subs {
        let _ = writeln!(s, "sub: {label} = {v}");
    }
    s
}

/// Evaluate each input tree as a sentence and print the verdict and trace.
pub fn cmd_eval(config: &RunConfig) -> CmdOutput {
    let inputs = match load_inputs(config) {
        Ok(i) => i,
        Err(out) => return out,
    };
    if let Err(out) = require_consistent(&inputs.model) {
        return out;
    }
    let mut evaluator = Evaluator::new(&inputs.model, config.logic).with_context(&inputs.context);
    if let Some(theta) = config.most_threshold {
        evaluator = evaluator.with_most_default(theta);
    }
    let mut reports = Vec::new();
    for tree in &inputs.trees {
        match evaluator.eval_sentence(tree, &inputs.lexicon, &inputs.context) {
            Ok(eval) => {
                let trace = &eval.trace;
                reports.push(EvalReport {
                    surface: eval.meanings.root().surface.clone(),
                    verdict: match eval.verdict {
                        Verdict::Undefined => "ud (not a sentence)".to_string(),
                        v => v.to_string(),
                    },
                    kind: trace.kind.clone(),
                    effective: eval.effective,
                    content_size: trace.content_size,
                    witnesses: trace
                        .witnesses
                        .iter()
                        .map(|w| WitnessReport {
                            imaginary: w.imaginary.clone(),
                            actual: w.actual.clone(),
                            relation: if w.refutes { "refuted-by" } else { "verified-by" }
                                .to_string(),
                        })
                        .collect(),
                    subs: trace
                        .children
                        .iter()
                        .map(|(label, v)| (label.clone(), v.to_string()))
                        .collect(),
                });
            }
            Err(TruthError::NotEffective { nodes }) => {
                return CmdOutput {
                    text: format!(
                        "error: interpretation not effective; ambiguous nodes {nodes:?}\n"
                    ),
                    code: EXIT_VIOLATION,
                }
            }
            Err(e) => {
                return CmdOutput { text: format!("error: {e}\n"), code: EXIT_VIOLATION }
            }
        }
    }
    let text = match config.format {
        OutputFormat::Structured => {
            format!("{}\n", serde_json::to_string_pretty(&reports).expect("serializable report"))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&render_eval_text(r));
            }
            s
        }
    };
    CmdOutput { text, code: EXIT_OK }
}
