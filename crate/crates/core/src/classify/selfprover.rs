use serde::Serialize;
use serde_json::{json, Value};

use super::sigma::sigma1;
use super::{and3, implies3, or3, Query, Sigma1Report};
use crate::decide::{derivable, Budget, DecideError, Logic, Verdict};
use crate::syntax::Formula;

/// Most modal atoms `canonical_modal_dnf` tabulates.
const DNF_ATOMS: usize = 12;

/// `|- f -> []f` in `logic`.
pub fn is_self_prover(f: &Formula, logic: Logic, budget: &Budget) -> Result<Verdict, DecideError> {
    derivable(logic, &Formula::implies(f.clone(), Formula::boxed(f.clone())), budget)
}

/// `phi & []a`, with `phi` a conjunction of literals and negated boxes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TsgDisjunct {
    pub phi: Vec<Formula>,
    pub a: Formula,
}

impl TsgDisjunct {
    pub fn formula(&self) -> Formula {
        Formula::and(Formula::and_all(self.phi.iter().cloned()), Formula::boxed(self.a.clone()))
    }

    /// Non-empty, and every conjunct a literal or a negated box.
    pub fn shape_ok(&self) -> bool {
        !self.phi.is_empty()
            && self.phi.iter().all(|l| {
                let inner = l.as_not().unwrap_or(l);
                matches!(inner, Formula::Atom(_)) || l.as_not().is_some_and(|i| i.as_box().is_some())
            })
    }
}

/// `f` written as `\/ (phi_l & []A_l) | \/ []C_m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TsgDecomposition {
    pub disjuncts: Vec<TsgDisjunct>,
    pub boxes: Vec<Formula>,
    /// Parts of `f` the decomposition could not express.
    pub rejected: Vec<String>,
}

impl TsgDecomposition {
    pub fn formula(&self) -> Formula {
        let parts = self
            .disjuncts
            .iter()
            .map(TsgDisjunct::formula)
            .chain(self.boxes_formula_parts());
        Formula::or_all(parts)
    }

    fn boxes_formula_parts(&self) -> impl Iterator<Item = Formula> + '_ {
        self.boxes.iter().cloned().map(Formula::boxed)
    }

    pub fn boxes_formula(&self) -> Formula {
        Formula::or_all(self.boxes_formula_parts())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "disjuncts": self.disjuncts.iter().map(|d| json!({
                "phi": d.phi.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "box_body": d.a.to_string(),
            })).collect::<Vec<_>>(),
            "boxes": self.boxes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "rejected": self.rejected,
        })
    }
}

fn modal_atoms(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Bot => {}
        Formula::Implies(a, b) => {
            modal_atoms(a, out);
            modal_atoms(b, out);
        }
        _ => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
    }
}

fn eval(f: &Formula, atoms: &[Formula], row: u32) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Implies(a, b) => !eval(a, atoms, row) || eval(b, atoms, row),
        _ => {
            let i = atoms.iter().position(|x| x == f).expect("collected");
            row >> i & 1 == 1
        }
    }
}

/// A cube over the modal atoms: `care` marks the atoms that occur,
/// `value` their polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cube {
    care: u32,
    value: u32,
}

impl Cube {
    fn covers(self, row: u32) -> bool {
        row & self.care == self.value
    }
}

fn prime_implicants(n: usize, rows: &[u32]) -> Vec<Cube> {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut level: Vec<Cube> = rows.iter().map(|&r| Cube { care: full, value: r }).collect();
    let mut primes = Vec::new();
    while !level.is_empty() {
        let mut used = vec![false; level.len()];
        let mut next = Vec::new();
        for i in 0..level.len() {
            for j in i + 1..level.len() {
                let (a, b) = (level[i], level[j]);
                let diff = a.value ^ b.value;
                if a.care == b.care && diff.count_ones() == 1 {
                    used[i] = true;
                    used[j] = true;
                    next.push(Cube { care: a.care & !diff, value: a.value & !diff });
                }
            }
        }
        primes.extend(level.iter().zip(&used).filter(|(_, u)| !**u).map(|(c, _)| *c));
        next.sort();
        next.dedup();
        level = next;
    }
    primes.sort();
    primes.dedup();
    primes
}

fn cover(primes: &[Cube], rows: &[u32]) -> Vec<Cube> {
    let mut left: Vec<u32> = rows.to_vec();
    let mut chosen = Vec::new();
    for &r in rows {
        let hits: Vec<&Cube> = primes.iter().filter(|c| c.covers(r)).collect();
        if hits.len() == 1 && !chosen.contains(hits[0]) {
            chosen.push(*hits[0]);
        }
    }
    left.retain(|&r| !chosen.iter().any(|c| c.covers(r)));
    while !left.is_empty() {
        let best = primes
            .iter()
            .max_by_key(|c| {
                let n = left.iter().filter(|&&r| c.covers(r)).count();
                (n, std::cmp::Reverse(c.care.count_ones()), std::cmp::Reverse(**c))
            })
            .copied()
            .expect("rows are covered by primes");
        chosen.push(best);
        left.retain(|&r| !best.covers(r));
    }
    chosen.sort_by_key(|c| (c.care.count_ones(), *c));
    chosen
}

/// Disjunctive normal form of `f` over its modal atoms (a minimal cover by
/// prime implicants), with the positive boxes of each disjunct merged into
/// one box.
pub fn canonical_modal_dnf(f: &Formula) -> TsgDecomposition {
    let mut atoms = Vec::new();
    modal_atoms(f, &mut atoms);
    let mut out = TsgDecomposition::default();
    if atoms.len() > DNF_ATOMS {
        out.rejected.push(format!("more than {DNF_ATOMS} modal atoms"));
        return out;
    }
    let n = atoms.len();
    let rows: Vec<u32> = (0..1u32 << n).filter(|&r| eval(f, &atoms, r)).collect();
    for cube in cover(&prime_implicants(n, &rows), &rows) {
        let mut phi = Vec::new();
        let mut bodies = Vec::new();
        for (i, atom) in atoms.iter().enumerate() {
            if cube.care >> i & 1 == 0 {
                continue;
            }
            let positive = cube.value >> i & 1 == 1;
            match (atom.as_box(), positive) {
                (Some(body), true) => bodies.push(body.clone()),
                (_, true) => phi.push(atom.clone()),
                (_, false) => phi.push(Formula::not(atom.clone())),
            }
        }
        let a = Formula::and_all(bodies.iter().cloned());
        match (phi.is_empty(), bodies.is_empty()) {
            (true, true) => out.rejected.push("top".into()),
            (true, false) => out.boxes.push(a),
            _ => out.disjuncts.push(TsgDisjunct { phi, a }),
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    /// `f <-> decomposition`.
    pub equivalence: Query,
    /// Per disjunct: `[]A_l -> f`, which must be refuted.
    pub irreducible: Vec<Query>,
    /// Per disjunct: the shape condition on `phi_l`.
    pub shapes: Vec<bool>,
    pub conditions_hold: Option<bool>,
    /// `f & []f <-> \/ []C_m`, decided only when the conditions hold.
    pub conclusion: Option<Query>,
}

impl DecompositionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "equivalence": self.equivalence.to_json(),
            "irreducible": self.irreducible.iter().map(Query::to_json).collect::<Vec<_>>(),
            "shapes": self.shapes,
            "conditions_hold": self.conditions_hold,
            "conclusion": self.conclusion.as_ref().map(Query::to_json),
        })
    }
}

/// Checks the three side conditions on `d` and, when they hold, decides
/// whether `f & []f` is equivalent to the boxes of `d`.
pub fn check_tsg_decomposition(
    f: &Formula,
    d: &TsgDecomposition,
    budget: &Budget,
) -> DecompositionReport {
    let equivalence = Query::run(Formula::iff(f.clone(), d.formula()), budget);
    let irreducible: Vec<Query> = d
        .disjuncts
        .iter()
        .map(|l| Query::run(Formula::implies(Formula::boxed(l.a.clone()), f.clone()), budget))
        .collect();
    let shapes: Vec<bool> = d.disjuncts.iter().map(TsgDisjunct::shape_ok).collect();
    let conditions_hold = and3(
        std::iter::once(equivalence.holds())
            .chain(irreducible.iter().map(|q| q.holds().map(|b| !b)))
            .chain(shapes.iter().map(|&b| Some(b))),
    );
    let conclusion = (conditions_hold == Some(true)).then(|| {
        let fbf = Formula::and(f.clone(), Formula::boxed(f.clone()));
        Query::run(Formula::iff(fbf, d.boxes_formula()), budget)
    });
    DecompositionReport {
        equivalence,
        irreducible,
        shapes,
        conditions_hold,
        conclusion,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlmostLoeb {
    /// `|- []bot -> f`; then `f & []~f <-> []bot`.
    BoxBot,
    /// `|- ~f`; then `f & []~f <-> bot`.
    Bottom,
    /// Neither, so `f & []~f` is not Σ1.
    None,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct AlmostLoebReport {
    pub witness: AlmostLoeb,
    pub boxbot: Query,
    pub bottom: Query,
    /// The equivalence for `f & []~f` that comes with the witness.
    pub equivalence: Option<Query>,
}

impl AlmostLoebReport {
    pub fn to_json(&self) -> Value {
        json!({
            "witness": self.witness,
            "boxbot": self.boxbot.to_json(),
            "bottom": self.bottom.to_json(),
            "equivalence": self.equivalence.as_ref().map(Query::to_json),
        })
    }
}

pub fn almost_loeb(f: &Formula, budget: &Budget) -> AlmostLoebReport {
    let boxbot = Query::run(Formula::implies(Formula::boxed(Formula::Bot), f.clone()), budget);
    let bottom = Query::run(Formula::not(f.clone()), budget);
    let fbnf = Formula::and(f.clone(), Formula::boxed(Formula::not(f.clone())));
    let (witness, target) = match (boxbot.holds(), bottom.holds()) {
        (Some(true), _) => (AlmostLoeb::BoxBot, Some(Formula::boxed(Formula::Bot))),
        (_, Some(true)) => (AlmostLoeb::Bottom, Some(Formula::Bot)),
        (Some(false), Some(false)) => (AlmostLoeb::None, None),
        _ => (AlmostLoeb::Unknown, None),
    };
    let equivalence = target.map(|t| Query::run(Formula::iff(fbnf, t), budget));
    AlmostLoebReport {
        witness,
        boxbot,
        bottom,
        equivalence,
    }
}

#[derive(Clone, Debug)]
pub struct DaggerReport {
    /// Σ1 status of `f & []f`.
    pub box_f: Sigma1Report,
    /// Σ1 status of `f & []~f`.
    pub box_not_f: Sigma1Report,
    pub plain: Sigma1Report,
    /// `|- f -> <>top`.
    pub consistency: Query,
    /// `Σ(f & []f) and Σ(f & []~f) imply Σ(f)`.
    pub dagger: Option<bool>,
    /// `Σ(f & []f) implies Σ(f)`, or `|- f -> <>top`.
    pub right: Option<bool>,
    /// Whether `dagger` and `right` coincide.
    pub biconditional: Option<bool>,
}

impl DaggerReport {
    pub fn to_json(&self) -> Value {
        json!({
            "sigma_f_and_box_f": self.box_f.answer,
            "sigma_f_and_box_not_f": self.box_not_f.answer,
            "sigma_f": self.plain.answer,
            "f_implies_diamond_top": self.consistency.to_json(),
            "dagger": self.dagger,
            "right_side": self.right,
            "biconditional": self.biconditional,
        })
    }
}

pub fn dagger_check(f: &Formula, budget: &Budget) -> DaggerReport {
    let box_f = sigma1(&Formula::and(f.clone(), Formula::boxed(f.clone())), budget, false);
    let box_not_f = sigma1(
        &Formula::and(f.clone(), Formula::boxed(Formula::not(f.clone()))),
        budget,
        false,
    );
    let plain = sigma1(f, budget, false);
    let consistency = Query::run(
        Formula::implies(f.clone(), Formula::diamond(Formula::top())),
        budget,
    );
    let (s1, s2, s3) = (box_f.answer.as_bool(), box_not_f.answer.as_bool(), plain.answer.as_bool());
    let dagger = implies3(and3([s1, s2]), s3);
    let right = or3([implies3(s1, s3), consistency.holds()]);
    let biconditional = match (dagger, right) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    DaggerReport {
        box_f,
        box_not_f,
        plain,
        consistency,
        dagger,
        right,
        biconditional,
    }
}
