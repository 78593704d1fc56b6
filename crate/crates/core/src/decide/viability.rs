use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::syntax::Formula;
use crate::theory::{
    crit_req, deficiency_req, problem_parts, problem_req, DSpace, DTheory, Logic, Theories,
};

/// Largest candidate pool for the deficiency fixpoint; bigger pools skip it.
const SIB_CAP: usize = 1024;

/// Necessary conditions for a theory to label a world of some model with a
/// truth lemma: each problem has a witness that is itself viable and that
/// can be completed under the deficiencies of its critical cone.
///
/// Work is capped; past the cap every theory counts as viable, which keeps
/// pruning sound.
pub(crate) struct Viability {
    space: Arc<DSpace>,
    logic: Logic,
    memo: HashMap<u128, bool>,
    sibs: HashMap<(u128, Formula), Option<Arc<HashSet<u128>>>>,
    work: usize,
    limit: usize,
    pub gave_up: bool,
}

impl Viability {
    pub fn new(space: Arc<DSpace>, logic: Logic, limit: usize) -> Self {
        Viability {
            space,
            logic,
            memo: HashMap::new(),
            sibs: HashMap::new(),
            work: 0,
            limit,
            gave_up: false,
        }
    }

    fn spend(&mut self) -> bool {
        self.work += 1;
        if self.work > self.limit {
            self.gave_up = true;
        }
        !self.gave_up
    }

    fn enumerate(&self, req: Vec<usize>) -> Theories {
        Theories::from_indices(self.space.clone(), req)
    }

    pub fn viable(&mut self, g: &DTheory) -> bool {
        if self.gave_up {
            return true;
        }
        if let Some(&v) = self.memo.get(&g.assignment()) {
            return v;
        }
        let v = self.compute(g);
        if !self.gave_up {
            self.memo.insert(g.assignment(), v);
        }
        v || self.gave_up
    }

    fn has_deficiency_demands(&self, g: &DTheory) -> bool {
        g.members()
            .iter()
            .any(|m| m.as_rhd().is_some_and(|(_, d)| !d.is_bot()))
    }

    fn compute(&mut self, g: &DTheory) -> bool {
        let demands = self.has_deficiency_demands(g);
        for nf in g.members() {
            let Some((_, b)) = problem_parts(&nf) else { continue };
            let sib = if demands { self.sib_set(g, &b) } else { None };
            let Ok(req) = problem_req(g, &nf) else { return true };
            let mut found = false;
            let mut it = self.enumerate(req);
            while let Some(d) = it.next() {
                if !self.spend() {
                    return true;
                }
                if d.box_bits() & !g.box_bits() == 0
                    || sib.as_ref().is_some_and(|s| !s.contains(&d.assignment()))
                {
                    continue;
                }
                if demands && sib.is_none() && !self.exits_exist(g, &b, &d) {
                    continue;
                }
                if self.viable(&d) {
                    found = true;
                    break;
                }
            }
            if self.gave_up {
                return true;
            }
            if !found {
                return false;
            }
        }
        true
    }

    /// One round of the fixpoint in `sib_set`, for when the pool is too
    /// large: every deficiency `d` raises at `g` has some viable exit.
    fn exits_exist(&mut self, g: &DTheory, b: &Formula, d: &DTheory) -> bool {
        let ilm = self.logic == Logic::Ilm;
        for cd in g.members() {
            let Some((c, e)) = cd.as_rhd() else { continue };
            if e.is_bot() || !d.contains(c) || d.contains(e) {
                continue;
            }
            let Ok(need) = deficiency_req(g, b, d, &cd, ilm) else { return true };
            let mut found = false;
            let mut it = self.enumerate(need);
            while let Some(x) = it.next() {
                if !self.spend() {
                    return true;
                }
                if x.box_bits() & !g.box_bits() != 0 && self.viable(&x) {
                    found = true;
                    break;
                }
                if self.gave_up {
                    return true;
                }
            }
            if !found {
                return false;
            }
        }
        true
    }

    /// Greatest set of viable `b`-critical successors of `g` closed under
    /// exits for the deficiencies of `g`, each with a box `g` lacks. `None` when the cap was hit.
    fn sib_set(&mut self, g: &DTheory, b: &Formula) -> Option<Arc<HashSet<u128>>> {
        let key = (g.assignment(), b.clone());
        if let Some(s) = self.sibs.get(&key) {
            return s.clone();
        }
        let req = crit_req(g, b).ok()?;
        let mut pool = Vec::new();
        let mut it = self.enumerate(req);
        let mut seen = 0;
        while let Some(d) = it.next() {
            if !self.spend() {
                return None;
            }
            // Successors without a new box never occur in the search.
            if d.box_bits() & !g.box_bits() == 0 {
                continue;
            }
            seen += 1;
            if seen > SIB_CAP {
                self.sibs.insert(key, None);
                return None;
            }
            if self.viable(&d) {
                pool.push(d);
            }
            if self.gave_up {
                return None;
            }
        }
        let rhds: Vec<Formula> = g
            .members()
            .into_iter()
            .filter(|m| m.as_rhd().is_some_and(|(_, d)| !d.is_bot()))
            .collect();
        let ilm = self.logic == Logic::Ilm;
        let mut alive = vec![true; pool.len()];
        loop {
            let mut changed = false;
            for i in 0..pool.len() {
                if !alive[i] {
                    continue;
                }
                let t = &pool[i];
                let ok = rhds.iter().all(|cd| {
                    let (c, d) = cd.as_rhd().expect("rhd");
                    if !t.contains(c) || t.contains(d) {
                        return true;
                    }
                    let need = deficiency_req(g, b, t, cd, ilm).unwrap_or_default();
                    (0..pool.len()).any(|j| alive[j] && need.iter().all(|&k| pool[j].contains_idx(k)))
                });
                if !ok {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let set: HashSet<u128> = pool
            .iter()
            .zip(&alive)
            .filter(|(_, a)| **a)
            .map(|(t, _)| t.assignment())
            .collect();
        let out = Some(Arc::new(set));
        self.sibs.insert(key, out.clone());
        out
    }
}
