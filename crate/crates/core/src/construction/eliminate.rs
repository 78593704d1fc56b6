use super::frame::{Deficiency, LabeledFrame, Problem};
use crate::semantics::{bit, bits};
use crate::syntax::Formula;
use crate::theory::{
    box_incl_req, box_subset_req, crit_req, deficiency_req, obligation, pred_req, problem_parts,
    problem_req, succ_req, DTheory, Logic, Theories,
};

#[derive(Clone, Debug)]
enum Target {
    Problem { x: usize, label: Formula, nf: Formula },
    Deficiency { x: usize, y: usize },
}

/// Frames extending a given one by a single elimination step: first by
/// re-using existing worlds, then by adding one fresh world. Every yielded
/// frame is closed and satisfies all invariants.
pub struct Candidates {
    base: LabeledFrame,
    logic: Logic,
    target: Target,
    witness: Vec<usize>,
    reuse: Vec<usize>,
    fresh: Option<Fresh>,
    fresh_ready: bool,
}

struct Fresh {
    skeleton: LabeledFrame,
    world: usize,
    theories: Theories,
}

/// Candidate frames eliminating a problem.
pub fn eliminate_problem(f: &LabeledFrame, p: &Problem, logic: Logic) -> Candidates {
    let (_, label) = problem_parts(&p.formula).expect("problem shape");
    let witness = problem_req(f.nu(p.world), &p.formula).unwrap_or_default();
    let target = Target::Problem { x: p.world, label, nf: p.formula.clone() };
    Candidates::new(f, logic, target, witness)
}

/// Candidate frames eliminating a deficiency.
pub fn eliminate_deficiency(f: &LabeledFrame, d: &Deficiency, logic: Logic) -> Candidates {
    let b = f.criticality(d.x, d.y);
    let witness = deficiency_req(f.nu(d.x), &b, f.nu(d.y), &d.formula, logic == Logic::Ilm)
        .unwrap_or_default();
    let target = Target::Deficiency { x: d.x, y: d.y };
    Candidates::new(f, logic, target, witness)
}

impl Candidates {
    fn new(f: &LabeledFrame, logic: Logic, target: Target, witness: Vec<usize>) -> Self {
        let x = match &target {
            Target::Problem { x, .. } | Target::Deficiency { x, .. } => *x,
        };
        let reuse = (0..f.len())
            .filter(|&z| z != x && witness.iter().all(|&i| f.nu(z).contains_idx(i)))
            .filter(|&z| match &target {
                Target::Problem { label, .. } => f
                    .edge_labels()
                    .get(&(x, z))
                    .is_none_or(|l| l == label),
                Target::Deficiency { y, .. } => z != *y,
            })
            .collect();
        Candidates {
            base: f.clone(),
            logic,
            target,
            witness,
            reuse,
            fresh: None,
            fresh_ready: false,
        }
    }

    fn attach(&self, f: &mut LabeledFrame, z: usize) {
        match &self.target {
            Target::Problem { x, label, nf } => {
                f.add_r(*x, z);
                if !label.is_bot() {
                    f.set_edge_label(*x, z, label.clone());
                }
                if let Some(ob) = obligation(f.space(), nf) {
                    f.add_obligation(z, ob);
                }
            }
            Target::Deficiency { x, y } => {
                f.add_r(*x, z);
                f.add_s(*x, *y, z);
            }
        }
        f.close(self.logic);
    }

    fn prepare_fresh(&mut self) {
        self.fresh_ready = true;
        let x = match &self.target {
            Target::Problem { x, .. } | Target::Deficiency { x, .. } => *x,
        };
        let mut skeleton = self.base.clone();
        let world = skeleton.add_world(self.base.nu(x).clone());
        self.attach(&mut skeleton, world);
        if let Some(mut req) = world_req(&skeleton, world, self.logic) {
            req.extend(self.witness.iter().copied());
            let theories = Theories::from_indices(skeleton.space().clone(), req);
            self.fresh = Some(Fresh {
                skeleton,
                world,
                theories,
            });
        }
    }

    /// The next candidate whose new theory (if any) passes `accept`.
    pub fn next_with(&mut self, accept: &mut dyn FnMut(&DTheory) -> bool) -> Option<LabeledFrame> {
        while let Some(z) = self.reuse.first().copied() {
            self.reuse.remove(0);
            let mut f = self.base.clone();
            self.attach(&mut f, z);
            if f.check_invariants(self.logic).is_empty() {
                return Some(f);
            }
        }
        if !self.fresh_ready {
            self.prepare_fresh();
        }
        let fresh = self.fresh.as_mut()?;
        for t in fresh.theories.by_ref() {
            if !accept(&t) {
                continue;
            }
            let mut f = fresh.skeleton.clone();
            f.set_theory(fresh.world, t);
            if f.check_invariants(self.logic).is_empty() {
                return Some(f);
            }
        }
        None
    }
}

impl Iterator for Candidates {
    type Item = LabeledFrame;

    fn next(&mut self) -> Option<LabeledFrame> {
        self.next_with(&mut |_| true)
    }
}

/// Membership requirements the invariants place on world `n`, given the
/// theories of all other worlds. `None` when the structure alone already
/// breaks an invariant at `n`.
pub(crate) fn world_req(f: &LabeledFrame, n: usize, logic: Logic) -> Option<Vec<usize>> {
    let fr = f.frame();
    if !fr.r_well_founded() || (logic == Logic::Ilm && !fr.rs_well_founded()) {
        return None;
    }
    let space = f.space().clone();
    let mut req = Vec::new();
    for p in 0..f.len() {
        if p == n {
            continue;
        }
        if fr.has_r(p, n) {
            req.extend(succ_req(f.nu(p)));
            for ob in f.obligations(p) {
                req.push(space.index_of(ob)?);
            }
        }
        let labels = f.labels_from(p);
        let mut inside = 0;
        for c in &labels {
            let mut cone = f.critical_cone(p, c);
            if logic == Logic::Ilm {
                cone |= f.m_cone(p, c);
            }
            if cone & bit(n) != 0 {
                req.extend(crit_req(f.nu(p), c).ok()?);
            }
            if f.generalized_cone(p, c) & bit(n) != 0 {
                inside += 1;
            }
        }
        if inside > 1 {
            return None;
        }
    }
    for v in bits(fr.r[n]) {
        req.extend(pred_req(f.nu(v)));
    }
    if logic == Logic::Ilm {
        for (_, y, z) in fr.s_triples() {
            if z == n && y != n {
                req.extend(box_incl_req(f.nu(y)));
            }
            if y == n && z != n {
                req.extend(box_subset_req(f.nu(z)));
            }
        }
    }
    req.sort_unstable();
    req.dedup();
    Some(req)
}
