use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::semantics::{bit, bits, transitive, IndexedFrame, Imperfection, VeltmanModel};
use crate::syntax::Formula;
use crate::theory::{
    box_incl, crit_req, problem_parts, succ_req, DSpace, DTheory, Logic,
};

/// A frame whose worlds carry theories, with criticality labels on some
/// R-edges and successor obligations on some worlds.
#[derive(Clone, Debug)]
pub struct LabeledFrame {
    space: Arc<DSpace>,
    frame: IndexedFrame,
    nu: Vec<DTheory>,
    edge_labels: BTreeMap<(usize, usize), Formula>,
    obligations: Vec<BTreeSet<Formula>>,
    /// World whose outgoing edges are exempt from the new-box invariant.
    exempt_root: Option<usize>,
}

/// `(world, ~(A |> B))` or `(world, ~[]A)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Problem {
    pub world: usize,
    pub formula: Formula,
}

/// `(x, y, C |> D)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Deficiency {
    pub x: usize,
    pub y: usize,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum InvariantViolation {
    RCycle,
    SOutsideR { x: usize, y: usize, z: usize },
    NotSuccessor { x: usize, y: usize },
    ConeOverlap { x: usize, a: Formula, b: Formula, world: usize },
    NotCritical { x: usize, label: Formula, y: usize },
    RsCycle,
    NotBoxIncluded { x: usize, y: usize, z: usize },
    NotMCritical { x: usize, label: Formula, y: usize },
    NoNewBox { x: usize, y: usize },
    Obligation { x: usize, y: usize, formula: Formula },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).expect("serializable"))
    }
}

impl LabeledFrame {
    pub fn new(space: Arc<DSpace>, root: DTheory) -> Self {
        let mut f = LabeledFrame {
            space,
            frame: IndexedFrame::new(0),
            nu: Vec::new(),
            edge_labels: BTreeMap::new(),
            obligations: Vec::new(),
            exempt_root: None,
        };
        f.add_world(root);
        f
    }

    pub fn space(&self) -> &Arc<DSpace> {
        &self.space
    }

    pub fn frame(&self) -> &IndexedFrame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.frame.n
    }

    pub fn is_empty(&self) -> bool {
        self.frame.n == 0
    }

    pub fn nu(&self, w: usize) -> &DTheory {
        &self.nu[w]
    }

    pub fn edge_labels(&self) -> &BTreeMap<(usize, usize), Formula> {
        &self.edge_labels
    }

    pub fn obligations(&self, w: usize) -> &BTreeSet<Formula> {
        &self.obligations[w]
    }

    pub fn world_name(w: usize) -> String {
        format!("w{w}")
    }

    pub fn add_world(&mut self, t: DTheory) -> usize {
        self.nu.push(t);
        self.obligations.push(BTreeSet::new());
        self.frame.add_world()
    }

    pub fn set_theory(&mut self, w: usize, t: DTheory) {
        self.nu[w] = t;
    }

    pub fn add_r(&mut self, x: usize, y: usize) {
        self.frame.add_r(x, y);
    }

    pub fn add_s(&mut self, x: usize, y: usize, z: usize) {
        self.frame.add_s(x, y, z);
    }

    pub fn set_edge_label(&mut self, x: usize, y: usize, c: Formula) {
        self.edge_labels.insert((x, y), c);
    }

    pub fn add_obligation(&mut self, w: usize, f: Formula) {
        self.obligations[w].insert(f);
    }

    pub fn set_exempt_root(&mut self, w: Option<usize>) {
        self.exempt_root = w;
    }

    pub fn exempt_root(&self) -> Option<usize> {
        self.exempt_root
    }

    pub fn find_imperfections(&self, logic: Logic) -> Vec<Imperfection> {
        self.frame.imperfections(logic == Logic::Ilm)
    }

    pub fn close(&mut self, logic: Logic) {
        self.frame.close(logic == Logic::Ilm);
    }

    /// Repairs the first imperfection, if any.
    pub fn close_step(&mut self, logic: Logic) -> Option<Imperfection> {
        self.frame.close_step(logic == Logic::Ilm)
    }

    pub fn depth(&self) -> usize {
        self.frame.depth()
    }

    /// Distinct criticality labels on edges leaving `x`.
    pub fn labels_from(&self, x: usize) -> Vec<Formula> {
        let mut out: Vec<Formula> = self
            .edge_labels
            .range((x, 0)..(x + 1, 0))
            .map(|(_, c)| c.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn entries(&self, x: usize, c: &Formula) -> u128 {
        self.edge_labels
            .range((x, 0)..(x + 1, 0))
            .filter(|((_, y), l)| *l == c && self.frame.has_r(x, *y))
            .fold(0, |acc, ((_, y), _)| acc | bit(*y))
    }

    fn grow(&self, start: u128, step: impl Fn(usize) -> u128) -> u128 {
        let mut set = start;
        let mut todo = start;
        while todo != 0 {
            let mut next = 0;
            for y in bits(todo) {
                next |= step(y);
            }
            todo = next & !set;
            set |= next;
        }
        set
    }

    fn s_union(&self) -> Vec<u128> {
        let n = self.frame.n;
        let mut out = vec![0u128; n];
        for w in 0..n {
            for (y, row) in out.iter_mut().enumerate() {
                *row |= self.frame.s[w][y];
            }
        }
        out
    }

    /// `C_x^C` as a bit-set of worlds.
    pub fn critical_cone(&self, x: usize, c: &Formula) -> u128 {
        self.grow(self.entries(x, c), |y| self.frame.s[x][y] | self.frame.r[y])
    }

    /// `G_x^C`.
    pub fn generalized_cone(&self, x: usize, c: &Formula) -> u128 {
        let su = self.s_union();
        self.grow(self.critical_cone(x, c), |y| su[y] | self.frame.r[y])
    }

    /// `M_x^C`.
    pub fn m_cone(&self, x: usize, c: &Formula) -> u128 {
        let s_tr = transitive(&self.s_union());
        self.grow(self.entries(x, c), |y| {
            let via = bits(s_tr[y]).fold(0, |acc, u| acc | self.frame.r[u]);
            self.frame.s[x][y] | self.frame.r[y] | via
        })
    }

    /// Quasi-frame conditions, the ILM ones when `logic` is ILM, the
    /// new-box invariant and successor obligations.
    pub fn check_invariants(&self, logic: Logic) -> Vec<InvariantViolation> {
        let mut out = Vec::new();
        let fr = &self.frame;
        if !fr.r_well_founded() {
            out.push(InvariantViolation::RCycle);
        }
        for (x, y, z) in fr.s_triples() {
            if !(fr.has_r(x, y) && fr.has_r(x, z)) {
                out.push(InvariantViolation::SOutsideR { x, y, z });
            }
        }
        for (x, y) in fr.r_pairs() {
            let reqs = succ_req(&self.nu[x]);
            if !reqs.iter().all(|&i| self.nu[y].contains_idx(i)) {
                out.push(InvariantViolation::NotSuccessor { x, y });
            }
            for f in &self.obligations[x] {
                if !self.nu[y].contains(f) {
                    out.push(InvariantViolation::Obligation { x, y, formula: f.clone() });
                }
            }
            if self.exempt_root != Some(x) && self.nu[y].box_bits() & !self.nu[x].box_bits() == 0 {
                out.push(InvariantViolation::NoNewBox { x, y });
            }
        }
        for x in 0..fr.n {
            let labels = self.labels_from(x);
            let gens: Vec<u128> = labels.iter().map(|c| self.generalized_cone(x, c)).collect();
            for i in 0..labels.len() {
                for j in i + 1..labels.len() {
                    if let Some(w) = bits(gens[i] & gens[j]).next() {
                        out.push(InvariantViolation::ConeOverlap {
                            x,
                            a: labels[i].clone(),
                            b: labels[j].clone(),
                            world: w,
                        });
                    }
                }
            }
            for c in &labels {
                let req = crit_req(&self.nu[x], c).unwrap_or_default();
                let ok = |y: usize| req.iter().all(|&i| self.nu[y].contains_idx(i));
                for y in bits(self.critical_cone(x, c)) {
                    if !ok(y) {
                        out.push(InvariantViolation::NotCritical { x, label: c.clone(), y });
                    }
                }
                if logic == Logic::Ilm {
                    for y in bits(self.m_cone(x, c)) {
                        if !ok(y) {
                            out.push(InvariantViolation::NotMCritical { x, label: c.clone(), y });
                        }
                    }
                }
            }
        }
        if logic == Logic::Ilm {
            if !fr.rs_well_founded() {
                out.push(InvariantViolation::RsCycle);
            }
            for (x, y, z) in fr.s_triples() {
                if y != z && !box_incl(&self.nu[y], &self.nu[z]).unwrap_or(false) {
                    out.push(InvariantViolation::NotBoxIncluded { x, y, z });
                }
            }
        }
        out
    }

    /// Problems in world order. `~(A |> bot)` and `~[]A` count as solved by
    /// any successor containing the required formula.
    pub fn find_problems(&self) -> Vec<Problem> {
        let mut out = Vec::new();
        for x in 0..self.frame.n {
            for m in self.problem_formulas(x) {
                if !self.problem_solved(x, &m) {
                    out.push(Problem { world: x, formula: m });
                }
            }
        }
        out
    }

    fn problem_formulas(&self, x: usize) -> Vec<Formula> {
        let s = &self.space;
        (0..s.len())
            .filter(|&i| self.nu[x].contains_idx(i))
            .map(|i| s.get(i))
            .filter(|m| problem_parts(m).is_some())
            .cloned()
            .collect()
    }

    pub(crate) fn problem_solved(&self, x: usize, nf: &Formula) -> bool {
        let (a, b) = problem_parts(nf).expect("problem shape");
        let scope = if b.is_bot() {
            self.frame.r[x]
        } else {
            self.critical_cone(x, &b)
        };
        bits(scope).any(|y| self.nu[y].contains(&a))
    }

    /// Deficiencies in order of `x`, then `y`, then formula.
    pub fn find_deficiencies(&self) -> Vec<Deficiency> {
        let mut out = Vec::new();
        let s = &self.space;
        for x in 0..self.frame.n {
            for i in 0..s.len() {
                let Some((c, d)) = s.get(i).as_rhd() else { continue };
                if d.is_bot() || !self.nu[x].contains_idx(i) {
                    continue;
                }
                for y in bits(self.frame.r[x]) {
                    if self.nu[y].contains(c)
                        && !bits(self.frame.s[x][y]).any(|z| self.nu[z].contains(d))
                    {
                        out.push(Deficiency { x, y, formula: s.get(i).clone() });
                    }
                }
            }
        }
        out
    }

    /// The label `B` with `y` in `C_x^B`, or `bot`.
    pub fn criticality(&self, x: usize, y: usize) -> Formula {
        self.labels_from(x)
            .into_iter()
            .find(|c| self.critical_cone(x, c) & bit(y) != 0)
            .unwrap_or(Formula::Bot)
    }

    /// The underlying model: worlds `w0, w1, ...`, atoms true where the
    /// label contains them.
    pub fn to_model(&self) -> VeltmanModel {
        let names: Vec<String> = (0..self.frame.n).map(Self::world_name).collect();
        let mut m = VeltmanModel::new(self.frame.to_frame(&names));
        for (w, t) in self.nu.iter().enumerate() {
            for f in t.members() {
                if let Formula::Atom(a) = &f {
                    m.set_true(&names[w], a);
                }
            }
        }
        m
    }

    pub fn labels_by_name(&self) -> BTreeMap<String, DTheory> {
        self.nu
            .iter()
            .enumerate()
            .map(|(w, t)| (Self::world_name(w), t.clone()))
            .collect()
    }

    /// The model file format extended with `nu` and `edge_labels`.
    pub fn debug_json(&self) -> serde_json::Value {
        let mut v = self.to_model().to_json();
        let nu: BTreeMap<String, Vec<String>> = self
            .nu
            .iter()
            .enumerate()
            .map(|(w, t)| (Self::world_name(w), t.members().iter().map(|f| f.to_string()).collect()))
            .collect();
        let labels: Vec<serde_json::Value> = self
            .edge_labels
            .iter()
            .map(|((x, y), c)| json!([Self::world_name(*x), Self::world_name(*y), c.to_string()]))
            .collect();
        v["nu"] = json!(nu);
        v["edge_labels"] = json!(labels);
        v
    }
}

/// Whether every M-cone of `before` equals the one of `after`.
pub fn check_mcone_invariance(before: &LabeledFrame, after: &LabeledFrame) -> bool {
    if before.len() != after.len() {
        return false;
    }
    (0..before.len()).all(|x| {
        let mut labels = before.labels_from(x);
        labels.extend(after.labels_from(x));
        labels
            .iter()
            .all(|c| before.m_cone(x, c) == after.m_cone(x, c))
    })
}

/// For every world and every member of the adequate set: forced iff in the
/// label.
pub fn verify_truth_lemma(m: &VeltmanModel, nu: &BTreeMap<String, DTheory>, space: &DSpace) -> bool {
    if m.frame.worlds.iter().any(|w| !nu.contains_key(w)) {
        return false;
    }
    space.adequate().members().iter().all(|f| {
        let truth = crate::semantics::truth_set(m, f).unwrap_or_default();
        let truth: BTreeSet<&str> = truth.iter().map(String::as_str).collect();
        m.frame
            .worlds
            .iter()
            .all(|w| truth.contains(w.as_str()) == nu[w].contains(f))
    })
}
