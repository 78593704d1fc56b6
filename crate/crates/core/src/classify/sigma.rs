use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use super::{Answer, Query};
use crate::construction::LabeledFrame;
use crate::decide::{Budget, BudgetReport, Certificate, Engine, Logic, SatResult};
use crate::semantics::{forces, validate_ilm, VeltmanModel};
use crate::syntax::{fresh_atoms, Formula};
use crate::theory::{
    box_incl_req, common_predecessor, engine_adequate_set, DSpace, Theories, TheoryError,
};

/// Largest number of box bodies tried during witness extraction.
const WITNESS_POOL: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Delta1 {
    Top,
    Bottom,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct Delta1Report {
    pub answer: Delta1,
    pub positive: Query,
    pub negative: Query,
    /// `[]f | []~f`, derivable exactly when `f` or `~f` is.
    pub cross_check: Query,
    pub cross_check_agrees: Option<bool>,
}

impl Delta1Report {
    pub fn to_json(&self) -> Value {
        json!({
            "answer": self.answer,
            "positive": self.positive.to_json(),
            "negative": self.negative.to_json(),
            "cross_check": self.cross_check.to_json(),
            "cross_check_agrees": self.cross_check_agrees,
        })
    }
}

/// Whether `f` is provably equivalent to `top`, to `bot`, or neither.
pub fn classify_delta1(f: &Formula, budget: &Budget) -> Delta1Report {
    let positive = Query::run(f.clone(), budget);
    let negative = Query::run(Formula::not(f.clone()), budget);
    let cross_check = Query::run(
        Formula::or(Formula::boxed(f.clone()), Formula::boxed(Formula::not(f.clone()))),
        budget,
    );
    let answer = match (positive.holds(), negative.holds()) {
        (Some(true), _) => Delta1::Top,
        (_, Some(true)) => Delta1::Bottom,
        (Some(false), Some(false)) => Delta1::No,
        _ => Delta1::Unknown,
    };
    let decided = match answer {
        Delta1::Top | Delta1::Bottom => Some(true),
        Delta1::No => Some(false),
        Delta1::Unknown => None,
    };
    let cross_check_agrees = match (cross_check.holds(), decided) {
        (Some(c), Some(d)) => Some(c == d),
        _ => None,
    };
    Delta1Report {
        answer,
        positive,
        negative,
        cross_check,
        cross_check_agrees,
    }
}

#[derive(Clone, Debug)]
pub struct Sigma1Report {
    pub formula: Formula,
    pub answer: Answer,
    /// `p |> q -> (p & f) |> (q & f)` for the fresh atoms `p`, `q`.
    pub reduction: Query,
    pub fresh: (Formula, Formula),
    /// A disjunction of boxes provably equivalent to `formula`.
    pub witness: Option<Formula>,
    /// The query `formula <-> witness`.
    pub witness_check: Option<Query>,
    /// Set when the answer is yes but no witness was found in the pool.
    pub witness_note: Option<String>,
}

impl Sigma1Report {
    pub fn countermodel(&self) -> Option<&Certificate> {
        self.reduction.verdict.certificate()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "formula": self.formula.to_string(),
            "answer": self.answer,
            "reduction_query": self.reduction.formula.to_string(),
            "fresh_atoms": [self.fresh.0.to_string(), self.fresh.1.to_string()],
            "reduction": self.reduction.to_json(),
            "witness": self.witness.as_ref().map(|w| w.to_string()),
            "witness_check": self.witness_check.as_ref().map(Query::to_json),
            "witness_note": self.witness_note,
            "countermodel": self.countermodel().map(Certificate::to_json),
        })
    }
}

fn reduction_of(f: &Formula) -> (Formula, (Formula, Formula)) {
    let fresh = fresh_atoms(f, 2);
    let (p, q) = (fresh[0].clone(), fresh[1].clone());
    let red = Formula::implies(
        Formula::rhd(p.clone(), q.clone()),
        Formula::rhd(Formula::and(p.clone(), f.clone()), Formula::and(q.clone(), f.clone())),
    );
    (red, (p, q))
}

/// Whether `f` is essentially Σ1, decided by the fresh-atom reduction; on
/// yes a disjunction of boxes equivalent to `f` is searched for.
pub fn classify_sigma1(f: &Formula, budget: &Budget) -> Sigma1Report {
    sigma1(f, budget, true)
}

pub(crate) fn sigma1(f: &Formula, budget: &Budget, witness: bool) -> Sigma1Report {
    let (red, fresh) = reduction_of(f);
    let reduction = Query::run(red, budget);
    let answer = Answer::from_bool(reduction.holds());
    let mut report = Sigma1Report {
        formula: f.clone(),
        answer,
        reduction,
        fresh,
        witness: None,
        witness_check: None,
        witness_note: None,
    };
    if witness && answer == Answer::Yes {
        match extract_witness(f, budget) {
            Some((w, q)) => {
                report.witness = Some(w);
                report.witness_check = Some(q);
            }
            None => report.witness_note = Some("witness not found within bound".into()),
        }
    }
    report
}

/// `t.s.g.`: whether `f & []f` is essentially Σ1.
pub fn is_tsg(f: &Formula, budget: &Budget) -> Sigma1Report {
    classify_sigma1(&Formula::and(f.clone(), Formula::boxed(f.clone())), budget)
}

/// `bot`, a box, or a disjunction of such.
pub fn is_box_disjunction(w: &Formula) -> bool {
    if w.is_bot() || w.as_box().is_some() {
        return true;
    }
    match w.as_or() {
        Some((a, b)) => is_box_disjunction(a) && is_box_disjunction(b),
        None => false,
    }
}

fn witness_pool(f: &Formula) -> Vec<Formula> {
    let subs: Vec<Formula> = f.subformulas().into_iter().filter(|s| !s.is_bot()).collect();
    let mut pool: BTreeSet<(usize, Formula)> = BTreeSet::new();
    let mut add = |g: Formula| {
        pool.insert((g.size(), g));
    };
    add(Formula::Bot);
    add(Formula::top());
    for s in &subs {
        add(s.clone());
        add(s.neg());
    }
    for (i, a) in subs.iter().enumerate() {
        for b in &subs[i + 1..] {
            add(Formula::and(a.clone(), b.clone()));
            add(Formula::or(a.clone(), b.clone()));
            add(Formula::implies(a.clone(), b.clone()));
            add(Formula::implies(b.clone(), a.clone()));
        }
    }
    pool.into_iter().map(|(_, g)| g).take(WITNESS_POOL).collect()
}

fn extract_witness(f: &Formula, budget: &Budget) -> Option<(Formula, Query)> {
    let derives = |g: Formula| Query::run(g, budget).holds() == Some(true);
    if derives(Formula::not(f.clone())) {
        let q = Query::run(Formula::iff(f.clone(), Formula::Bot), budget);
        return (q.holds() == Some(true)).then_some((Formula::Bot, q));
    }
    let mut bodies: Vec<Formula> = Vec::new();
    for c in witness_pool(f) {
        // Skip bodies already covered by a kept one.
        if bodies.iter().any(|k| derives(Formula::implies(c.clone(), k.clone()))) {
            continue;
        }
        if derives(Formula::implies(Formula::boxed(c.clone()), f.clone())) {
            bodies.push(c);
        }
    }
    let disj = |bs: &[Formula]| Formula::or_all(bs.iter().cloned().map(Formula::boxed));
    if !derives(Formula::implies(f.clone(), disj(&bodies))) {
        return None;
    }
    // Drop the largest bodies first.
    for i in (0..bodies.len()).rev() {
        let mut fewer = bodies.clone();
        fewer.remove(i);
        if derives(Formula::implies(f.clone(), disj(&fewer))) {
            bodies = fewer;
        }
    }
    let w = disj(&bodies);
    let q = Query::run(Formula::iff(f.clone(), w.clone()), budget);
    (q.holds() == Some(true)).then_some((w, q))
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Sigma1Error {
    #[error("the formula is essentially Σ1; there is no countermodel")]
    IsSigma1,
    #[error("the search stopped: {}", .0.reason)]
    Exhausted(BudgetReport),
    #[error("no pair of theories separated by the formula yields a model")]
    NoPair,
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// A certified model refuting the reduction query at `root`, with
/// `left S_root right`, `formula` and the first fresh atom true exactly at
/// `left`, and `~formula` and the second fresh atom exactly at `right`.
#[derive(Clone, Debug)]
pub struct Sigma1Countermodel {
    pub model: VeltmanModel,
    pub root: String,
    pub left: String,
    pub right: String,
    pub fresh: (Formula, Formula),
    pub reduction: Formula,
}

impl Sigma1Countermodel {
    pub fn to_json(&self) -> Value {
        let mut v = self.model.to_json();
        v["root"] = json!(self.root);
        v["left"] = json!(self.left);
        v["right"] = json!(self.right);
        v["fresh_atoms"] = json!([self.fresh.0.to_string(), self.fresh.1.to_string()]);
        v["reduction_query"] = json!(self.reduction.to_string());
        v
    }
}

/// Builds a countermodel to the reduction query by seeding a three-world
/// frame `m0 R l`, `m0 R r`, `l S_m0 r` with a pair of theories
/// `f in D0 ⊆_□ D1 ∋ ~f` below a common predecessor, and completing it
/// with the new-box invariant relaxed at `m0`.
pub fn sigma1_countermodel(f: &Formula, budget: &Budget) -> Result<Sigma1Countermodel, Sigma1Error> {
    let (red, fresh) = reduction_of(f);
    match Query::run(red.clone(), budget).holds() {
        Some(true) => return Err(Sigma1Error::IsSigma1),
        None => {
            return Err(Sigma1Error::Exhausted(BudgetReport {
                reason: "the reduction query is undecided".into(),
                steps: 0,
                backtracks: 0,
                largest_frame: 0,
            }))
        }
        Some(false) => {}
    }
    let nf = Formula::not(f.clone());
    let space = DSpace::new(engine_adequate_set([f, &nf]), Logic::Ilm)?;
    let mut engine = Engine::with_space(space.clone(), budget);
    let fi = space.index_of(f).expect("seed member");
    let nfi = space.index_of(&nf).expect("closed under negation");
    for d0 in Theories::from_indices(space.clone(), vec![fi]) {
        if !engine.viable(&d0) {
            continue;
        }
        let mut req = box_incl_req(&d0);
        req.push(nfi);
        for d1 in Theories::from_indices(space.clone(), req) {
            if !engine.viable(&d1) {
                continue;
            }
            for g in common_predecessor(&d0, &d1)? {
                let mut seed = LabeledFrame::new(space.clone(), g);
                let l = seed.add_world(d0.clone());
                let r = seed.add_world(d1.clone());
                seed.add_r(0, l);
                seed.add_r(0, r);
                seed.add_s(0, l, r);
                seed.set_exempt_root(Some(0));
                seed.close(Logic::Ilm);
                if !seed.check_invariants(Logic::Ilm).is_empty() {
                    continue;
                }
                match engine.complete(seed, &Formula::top()) {
                    SatResult::Certificate(c) => {
                        let out = finish(c, l, r, &fresh, &red);
                        if let Some(out) = out {
                            return Ok(out);
                        }
                    }
                    SatResult::Unsat => {}
                    SatResult::Exhausted(rep) => return Err(Sigma1Error::Exhausted(rep)),
                }
            }
        }
    }
    Err(Sigma1Error::NoPair)
}

fn finish(
    c: Certificate,
    l: usize,
    r: usize,
    fresh: &(Formula, Formula),
    red: &Formula,
) -> Option<Sigma1Countermodel> {
    let (left, right) = (LabeledFrame::world_name(l), LabeledFrame::world_name(r));
    let mut model = c.model;
    for (atom, w) in [(&fresh.0, &left), (&fresh.1, &right)] {
        if let Formula::Atom(a) = atom {
            model.set_true(w, a);
        }
    }
    let ok = validate_ilm(&model.frame).is_empty()
        && model.frame.s.contains(&(c.world.clone(), left.clone(), right.clone()))
        && forces(&model, &c.world, &Formula::not(red.clone())).ok()?;
    ok.then(|| Sigma1Countermodel {
        model,
        root: c.world,
        left,
        right,
        fresh: fresh.clone(),
        reduction: red.clone(),
    })
}
