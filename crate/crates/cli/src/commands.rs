use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ilm::classify::{
    almost_loeb, check_rule, classify_delta1, classify_sigma1, dagger_check, is_self_prover,
    is_tsg, sigma1_countermodel, AdmissibleRule, AlmostLoeb, Answer, Delta1, Sigma1Report,
};
use ilm::decide::{self, check_proof, Certificate, Logic, Proof, SatResult, Verdict};
use ilm::semantics::{
    forces, truth_set, validate_il, validate_ilm, IndexedFrame, Imperfection, Violation,
};
use ilm::{parse, Formula, VeltmanFrame, VeltmanModel};
use serde_json::{json, Value};

use crate::{Global, Kind, EXIT_USAGE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse `{input}`: {message}")]
    Parse { input: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("certificate {path} failed self-validation: {message}")]
    Certificate { path: String, message: String },
}

/// What a command prints, and its exit code.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(code: u8, text: impl Into<String>, json: Value) -> Self {
        Outcome { code, text: text.into(), json }
    }

    /// Write errors (a closed pipe) are ignored.
    pub fn print(&self, as_json: bool) {
        let mut text = if as_json {
            serde_json::to_string_pretty(&self.json).expect("json")
        } else {
            self.text.clone()
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }
}

fn formula(text: &str) -> Result<Formula, CliError> {
    parse(text).map_err(|e| CliError::Parse {
        input: text.to_string(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_model(path: &Path) -> Result<(Value, VeltmanModel), CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let model = VeltmanModel::from_json(&value).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok((value, model))
}

fn violations(logic: Logic, frame: &VeltmanFrame) -> Vec<Violation> {
    match logic {
        Logic::Ilm => validate_ilm(frame),
        Logic::Gl | Logic::Il => validate_il(frame),
    }
}

fn with_header(command: &str, g: &Global, f: Option<&Formula>, body: Value) -> Value {
    with_logic(command, g.logic, f, body)
}

/// Header fields take precedence over fields of the same name in `body`.
fn with_logic(command: &str, logic: Logic, f: Option<&Formula>, body: Value) -> Value {
    let mut v = match body {
        Value::Object(_) => body,
        other => json!({ "result": other }),
    };
    v["command"] = json!(command);
    v["logic"] = json!(logic);
    if let Some(f) = f {
        v["formula"] = json!(f.to_string());
    }
    v
}

fn exit_of(holds: Option<bool>) -> u8 {
    match holds {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    }
}

/// Writes `model` with `root` and the formula forced there to the `--cert`
/// path, then reloads and re-checks the file.
fn write_cert(
    g: &Global,
    logic: Logic,
    mut model: Value,
    root: &str,
    forced: &Formula,
) -> Result<Option<String>, CliError> {
    let Some(path) = &g.cert else {
        return Ok(None);
    };
    model["root"] = json!(root);
    model["formula"] = json!(forced.to_string());
    model["logic"] = json!(logic);
    let shown = path.display().to_string();
    let text = serde_json::to_string_pretty(&model).expect("json") + "\n";
    fs::write(path, text).map_err(|e| CliError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    let fail = |message: String| CliError::Certificate { path: shown.clone(), message };
    let (_, back) = read_model(path)?;
    if let Some(v) = violations(logic, &back.frame).first() {
        return Err(fail(v.to_string()));
    }
    match forces(&back, root, forced) {
        Ok(true) => Ok(Some(shown)),
        Ok(false) => Err(fail(format!("`{forced}` is not forced at {root}"))),
        Err(e) => Err(fail(e.to_string())),
    }
}

fn model_summary(c: &Certificate) -> String {
    format!("{} worlds, root {}", c.model.frame.worlds.len(), c.world)
}

pub fn prove(g: &Global, text: &str) -> Result<Outcome, CliError> {
    let f = formula(text)?;
    let verdict = decide::derivable(g.logic, &f, &g.budget())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut body = verdict.to_json();
    let (code, line) = match &verdict {
        Verdict::Derivable(_) => (0, "derivable".to_string()),
        Verdict::Refuted(c) => {
            let neg = Formula::not(f.clone());
            if let Some(p) = write_cert(g, g.logic, c.to_json(), &c.world, &neg)? {
                body["certificate"] = json!(p);
            }
            (1, format!("refuted: countermodel with {}", model_summary(c)))
        }
        Verdict::Unknown(r) => (2, format!("unknown: {}", r.reason)),
    };
    Ok(Outcome::new(code, line, with_header("prove", g, Some(&f), body)))
}

pub fn check_proof_file(g: &Global, text: Option<&str>, path: &Path) -> Result<Outcome, CliError> {
    let proof: Proof = read(path)?.parse().map_err(|e: decide::ProofError| CliError::Parse {
        input: path.display().to_string(),
        message: e.to_string(),
    })?;
    let target = text.map(formula).transpose()?;
    let valid = check_proof(&proof, g.logic).map_err(|e| CliError::Parse {
        input: path.display().to_string(),
        message: e.to_string(),
    })?;
    let conclusion = proof.conclusion().cloned();
    let matches = match (&target, &conclusion) {
        (Some(t), Some(c)) => t == c,
        (Some(_), None) => false,
        (None, _) => true,
    };
    let ok = valid && matches;
    let line = match (valid, matches) {
        (true, true) => format!("valid {} proof of {}", g.logic, render_opt(&conclusion)),
        (false, _) => format!("invalid {} proof", g.logic),
        (true, false) => format!("valid proof, but it concludes {}", render_opt(&conclusion)),
    };
    let body = json!({
        "proof": path.display().to_string(),
        "lines": proof.lines.len(),
        "conclusion": conclusion.as_ref().map(Formula::to_string),
        "valid": valid,
        "conclusion_matches": matches,
    });
    Ok(Outcome::new(u8::from(!ok), line, with_header("check-proof", g, target.as_ref(), body)))
}

fn render_opt(f: &Option<Formula>) -> String {
    f.as_ref().map_or("nothing".into(), Formula::to_string)
}

pub fn sat(g: &Global, text: &str) -> Result<Outcome, CliError> {
    let f = formula(text)?;
    let result = decide::satisfiable(g.logic, &f, &g.budget())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (code, line, mut body) = match &result {
        SatResult::Certificate(c) => (
            0,
            format!("satisfiable: model with {}", model_summary(c)),
            json!({ "result": "satisfiable", "model": c.to_json() }),
        ),
        SatResult::Unsat => (1, "unsatisfiable".into(), json!({ "result": "unsatisfiable" })),
        SatResult::Exhausted(r) => (
            2,
            format!("unknown: {}", r.reason),
            json!({ "result": "unknown", "budget": r }),
        ),
    };
    if let SatResult::Certificate(c) = &result {
        if let Some(p) = write_cert(g, g.logic, c.to_json(), &c.world, &f)? {
            body["certificate"] = json!(p);
        }
    }
    Ok(Outcome::new(code, line, with_header("sat", g, Some(&f), body)))
}

pub fn countermodel(g: &Global, text: &str) -> Result<Outcome, CliError> {
    let f = formula(text)?;
    let verdict = decide::derivable(g.logic, &f, &g.budget())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (code, line, mut body) = match &verdict {
        Verdict::Refuted(c) => (
            0,
            c.model.to_json_string(),
            json!({ "result": "found", "root": c.world, "model": c.model.to_json() }),
        ),
        Verdict::Derivable(_) => (1, "derivable: no countermodel".into(), json!({ "result": "derivable" })),
        Verdict::Unknown(r) => (
            2,
            format!("unknown: {}", r.reason),
            json!({ "result": "unknown", "budget": r }),
        ),
    };
    if let Verdict::Refuted(c) = &verdict {
        let neg = Formula::not(f.clone());
        if let Some(p) = write_cert(g, g.logic, c.to_json(), &c.world, &neg)? {
            body["certificate"] = json!(p);
        }
    }
    Ok(Outcome::new(code, line, with_header("countermodel", g, Some(&f), body)))
}

pub fn modelcheck(
    g: &Global,
    path: &Path,
    text: Option<&str>,
    world: Option<&str>,
) -> Result<Outcome, CliError> {
    let (value, model) = read_model(path)?;
    let stored = value.get("formula").and_then(Value::as_str);
    let f = text.or(stored).map(formula).transpose()?;
    let world = world.or(value.get("root").and_then(Value::as_str));
    let bad = violations(g.logic, &model.frame);
    let mut lines = vec![if bad.is_empty() {
        format!("frame: valid {}-frame", g.logic)
    } else {
        format!("frame: not a valid {}-frame", g.logic)
    }];
    lines.extend(bad.iter().map(|v| format!("  {v}")));
    let mut body = json!({
        "model": path.display().to_string(),
        "worlds": model.frame.worlds.len(),
        "frame_valid": bad.is_empty(),
        "violations": bad.iter().map(Violation::to_string).collect::<Vec<_>>(),
    });
    let mut holds = true;
    if let Some(f) = &f {
        let sem = |e: ilm::semantics::SemanticsError| CliError::Usage(e.to_string());
        let set = truth_set(&model, f).map_err(sem)?;
        body["truth_set"] = json!(set);
        match world {
            Some(w) => {
                let forced = forces(&model, w, f).map_err(sem)?;
                holds = forced;
                body["world"] = json!(w);
                body["forced"] = json!(forced);
                lines.push(format!("{w} {} {f}", if forced { "forces" } else { "does not force" }));
            }
            None => {
                holds = set.len() == model.frame.worlds.len();
                body["valid_in_model"] = json!(holds);
                lines.push(format!("{f} holds at: {}", set.join(", ")));
            }
        }
    }
    let code = u8::from(!(bad.is_empty() && holds));
    Ok(Outcome::new(code, lines.join("\n"), with_header("modelcheck", g, f.as_ref(), body)))
}

fn imperfection_json(imp: &Imperfection, names: &[String]) -> Value {
    let ws: Vec<usize> = match *imp {
        Imperfection::Transitivity { a, b, c } => vec![a, b, c],
        Imperfection::Reflexivity { a, b } => vec![a, b],
        Imperfection::STransitivity { a, b, c, d } => vec![a, b, c, d],
        Imperfection::RInS { a, b, c } => vec![a, b, c],
        Imperfection::Montagna { a, b, c, d } => vec![a, b, c, d],
    };
    json!({
        "kind": imp.kind(),
        "worlds": ws.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>(),
    })
}

pub fn close(g: &Global, path: &Path, steps: bool) -> Result<Outcome, CliError> {
    let (_, model) = read_model(path)?;
    let mut frame =
        IndexedFrame::from_frame(&model.frame).map_err(|e| CliError::Usage(e.to_string()))?;
    if !frame.r_well_founded() || !frame.s_inside_r() {
        return Err(CliError::Usage(format!(
            "{}: not a quasi-frame (R must be acyclic and S must lie inside R)",
            path.display()
        )));
    }
    let ilm = g.logic == Logic::Ilm;
    let names = model.frame.worlds.clone();
    let mut repaired = Vec::new();
    while let Some(imp) = frame.close_step(ilm) {
        repaired.push(imperfection_json(&imp, &names));
    }
    let mut closed = model.clone();
    closed.frame = frame.to_frame(&names);
    let mut body = json!({ "repairs": repaired.len(), "model": closed.to_json() });
    if steps {
        body["steps"] = json!(repaired);
    }
    let mut text = closed.to_json_string();
    if steps {
        for step in &repaired {
            text = format!("# repaired {step}\n{text}");
        }
    }
    Ok(Outcome::new(0, text, with_header("close", g, None, body)))
}

pub fn export_dot(g: &Global, path: &Path) -> Result<Outcome, CliError> {
    let (_, model) = read_model(path)?;
    let dot = model.to_dot();
    Ok(Outcome::new(0, dot.clone(), with_header("export-dot", g, None, json!({ "dot": dot }))))
}

pub fn rules(g: &Global, rule: &str, texts: &[String]) -> Result<Outcome, CliError> {
    let rule: AdmissibleRule = rule.parse().map_err(|e: ilm::classify::RuleError| CliError::Usage(e.to_string()))?;
    let instance = texts.iter().map(|t| formula(t)).collect::<Result<Vec<_>, _>>()?;
    let check = check_rule(rule, &instance, &g.budget()).map_err(|e| CliError::Usage(e.to_string()))?;
    let code = match (check.agree, check.applicable()) {
        (Some(a), _) => u8::from(!a),
        (None, Some(false)) => 1,
        (None, _) => 2,
    };
    let yn = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    };
    let line = if check.applicable() == Some(false) {
        format!("rule ({}): not applicable, a side condition fails", rule.name())
    } else {
        format!(
            "rule ({}): premise {}, conclusion {}, agree {}",
            rule.name(),
            yn(check.lhs.holds),
            yn(check.rhs.holds),
            yn(check.agree)
        )
    };
    Ok(Outcome::new(code, line, with_header("rules", g, None, check.to_json())))
}

fn answer_text(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Unknown => "unknown",
    }
}

/// Adds the seeded Σ1 countermodel to a "no" report and writes the
/// certificate: the seeded model when the construction succeeds, the
/// reduction query's countermodel otherwise.
fn sigma1_no(g: &Global, report: &Sigma1Report, body: &mut Value) -> Result<(), CliError> {
    if report.answer != Answer::No {
        return Ok(());
    }
    let not_red = Formula::not(report.reduction.formula.clone());
    match sigma1_countermodel(&report.formula, &g.budget()) {
        Ok(cm) => {
            body["sigma1_countermodel"] = cm.to_json();
            if let Some(p) = write_cert(g, Logic::Ilm, cm.model.to_json(), &cm.root, &not_red)? {
                body["certificate"] = json!(p);
            }
        }
        Err(e) => {
            body["sigma1_countermodel"] = json!({ "error": e.to_string() });
            if let Some(c) = report.countermodel() {
                if let Some(p) = write_cert(g, Logic::Ilm, c.to_json(), &c.world, &not_red)? {
                    body["certificate"] = json!(p);
                }
            }
        }
    }
    Ok(())
}

pub fn classify(g: &Global, kind: Kind, text: &str) -> Result<Outcome, CliError> {
    let f = formula(text)?;
    let budget = g.budget();
    let (code, line, mut body) = match kind {
        Kind::Sigma1 | Kind::Tsg => {
            let report = if kind == Kind::Sigma1 {
                classify_sigma1(&f, &budget)
            } else {
                is_tsg(&f, &budget)
            };
            let name = if kind == Kind::Sigma1 { "sigma1" } else { "tsg" };
            let mut line = format!("{name}: {}", answer_text(report.answer));
            if let Some(w) = &report.witness {
                line.push_str(&format!(" (witness {w})"));
            }
            let mut body = report.to_json();
            body["sigma1_formula"] = body["formula"].take();
            sigma1_no(g, &report, &mut body)?;
            (exit_of(report.answer.as_bool()), line, body)
        }
        Kind::Delta1 => {
            let report = classify_delta1(&f, &budget);
            let (code, what) = match report.answer {
                Delta1::Top => (0, "yes, equivalent to top"),
                Delta1::Bottom => (0, "yes, equivalent to bot"),
                Delta1::No => (1, "no"),
                Delta1::Unknown => (2, "unknown"),
            };
            (code, format!("delta1: {what}"), report.to_json())
        }
        Kind::Selfprover => {
            let verdict = is_self_prover(&f, g.logic, &budget)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let code = exit_of(match verdict {
                Verdict::Derivable(_) => Some(true),
                Verdict::Refuted(_) => Some(false),
                Verdict::Unknown(_) => None,
            });
            let what = ["yes", "no", "unknown"][usize::from(code)];
            (code, format!("selfprover: {what}"), verdict.to_json())
        }
        Kind::Almostloeb => {
            let report = almost_loeb(&f, &budget);
            let (code, what) = match report.witness {
                AlmostLoeb::BoxBot => (0, "yes, f & []~f <-> []bot"),
                AlmostLoeb::Bottom => (0, "yes, f & []~f <-> bot"),
                AlmostLoeb::None => (1, "no"),
                AlmostLoeb::Unknown => (2, "unknown"),
            };
            (code, format!("almostloeb: {what}"), report.to_json())
        }
        Kind::Dagger => {
            let report = dagger_check(&f, &budget);
            let code = exit_of(report.biconditional);
            let what = ["holds", "violated", "unknown"][usize::from(code)];
            (code, format!("dagger: biconditional {what}"), report.to_json())
        }
    };
    body["kind"] = json!(format!("{kind:?}").to_lowercase());
    let logic = if kind == Kind::Selfprover { g.logic } else { Logic::Ilm };
    Ok(Outcome::new(code, line, with_logic("classify", logic, Some(&f), body)))
}

/// Runs `run` on every formula line of a corpus file, `--jobs` at a time;
/// results keep file order.
pub fn corpus<F>(g: &Global, path: &Path, run: F) -> Result<Outcome, CliError>
where
    F: Fn(&Global, &str) -> Result<Outcome, CliError> + Sync,
{
    if g.cert.is_some() {
        return Err(CliError::Usage("--cert cannot be combined with --corpus".into()));
    }
    let text = read(path)?;
    let items: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Mutex<Vec<Option<(u8, String, Value)>>> = Mutex::new(vec![None; items.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..g.jobs.clamp(1, items.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = match run(g, item) {
                    Ok(o) => (o.code, o.text.lines().next().unwrap_or("").to_string(), o.json),
                    Err(e) => (EXIT_USAGE, format!("error: {e}"), json!({ "error": e.to_string() })),
                };
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    let results: Vec<_> = results.into_inner().expect("results lock").into_iter().flatten().collect();
    let code = results.iter().map(|r| r.0).fold(0, |acc, c| match (acc, c) {
        (EXIT_USAGE, _) | (_, EXIT_USAGE) => EXIT_USAGE,
        (a, c) => a.max(c),
    });
    let text = items
        .iter()
        .zip(&results)
        .map(|(item, (c, line, _))| format!("{c}\t{item}\t{line}\n"))
        .collect::<String>();
    let json = json!({
        "corpus": path.display().to_string(),
        "results": items.iter().zip(&results).map(|(item, (c, _, v))| json!({
            "input": item,
            "exit": c,
            "result": v,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(code, text, json))
}
