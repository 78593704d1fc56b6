//! Seeded random formulas and axiom instances for test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decide::Rule;
use crate::semantics::{validate_il, VeltmanFrame};
use crate::syntax::Formula;

#[derive(Clone, Debug)]
pub struct Shape {
    pub atoms: Vec<String>,
    pub max_depth: usize,
    /// Upper bound on connectives.
    pub max_size: usize,
    pub rhd: bool,
}

impl Shape {
    pub fn new(atoms: &[&str], max_depth: usize, max_size: usize, rhd: bool) -> Self {
        Shape {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            max_depth,
            max_size,
            rhd,
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn formula(&mut self, shape: &Shape) -> Formula {
        let size = self.rng.gen_range(0..=shape.max_size);
        self.build(shape, shape.max_depth, size)
    }

    fn leaf(&mut self, shape: &Shape) -> Formula {
        match self.rng.gen_range(0..10) {
            0 => Formula::Bot,
            1 => Formula::top(),
            _ => Formula::atom(shape.atoms.choose(&mut self.rng).expect("some atom")),
        }
    }

    fn build(&mut self, shape: &Shape, depth: usize, size: usize) -> Formula {
        if size == 0 {
            return self.leaf(shape);
        }
        let modal = if depth == 0 { 0 } else if shape.rhd { 3 } else { 2 };
        let op = self.rng.gen_range(0..4 + modal);
        let rest = size - 1;
        let split = |g: &mut Self| g.rng.gen_range(0..=rest);
        match op {
            0 => Formula::not(self.build(shape, depth, rest)),
            1..=3 => {
                let k = split(self);
                let a = self.build(shape, depth, k);
                let b = self.build(shape, depth, rest - k);
                match op {
                    1 => Formula::and(a, b),
                    2 => Formula::or(a, b),
                    _ => Formula::implies(a, b),
                }
            }
            4 => Formula::boxed(self.build(shape, depth - 1, rest)),
            5 => Formula::diamond(self.build(shape, depth - 1, rest)),
            _ => {
                let k = split(self);
                let a = self.build(shape, depth - 1, k);
                let b = self.build(shape, depth - 1, rest - k);
                Formula::rhd(a, b)
            }
        }
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("non-empty")
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// An instance of `rule`'s schema with the parts drawn from `shape`.
    pub fn axiom_instance(&mut self, rule: Rule, shape: &Shape) -> Formula {
        let a = self.formula(shape);
        let b = self.formula(shape);
        let c = self.formula(shape);
        axiom_schema(rule, a, b, c).expect("axiom rule")
    }
}

/// The schema of an axiom rule instantiated with `a`, `b`, `c`; `None` for
/// `Taut` and the inference rules.
pub fn axiom_schema(rule: Rule, a: Formula, b: Formula, c: Formula) -> Option<Formula> {
    use Formula as F;
    Some(match rule {
        Rule::L1 => F::implies(
            F::boxed(F::implies(a.clone(), b.clone())),
            F::implies(F::boxed(a), F::boxed(b)),
        ),
        Rule::L2 => F::implies(F::boxed(a.clone()), F::boxed(F::boxed(a))),
        Rule::L3 => F::implies(F::boxed(F::implies(F::boxed(a.clone()), a.clone())), F::boxed(a)),
        Rule::J1 => F::implies(F::boxed(F::implies(a.clone(), b.clone())), F::rhd(a, b)),
        Rule::J2 => F::implies(
            F::and(F::rhd(a.clone(), b.clone()), F::rhd(b, c.clone())),
            F::rhd(a, c),
        ),
        Rule::J3 => F::implies(
            F::and(F::rhd(a.clone(), c.clone()), F::rhd(b.clone(), c.clone())),
            F::rhd(F::or(a, b), c),
        ),
        Rule::J4 => F::implies(
            F::rhd(a.clone(), b.clone()),
            F::implies(F::diamond(a), F::diamond(b)),
        ),
        Rule::J5 => F::rhd(F::diamond(a.clone()), a),
        Rule::M => {
            let bc = F::boxed(c);
            F::implies(F::rhd(a.clone(), b.clone()), F::rhd(F::and(a, bc.clone()), F::and(b, bc)))
        }
        _ => return None,
    })
}

pub const AXIOMS: [Rule; 9] = [
    Rule::L1,
    Rule::L2,
    Rule::L3,
    Rule::J1,
    Rule::J2,
    Rule::J3,
    Rule::J4,
    Rule::J5,
    Rule::M,
];

/// Every frame on worlds `w0..w{n-1}` for `n` in `1..=max` whose R is
/// irreflexive and S lies inside R, filtered by `keep`. Labelled, not up to
/// isomorphism.
pub fn all_frames(max: usize, keep: &dyn Fn(&VeltmanFrame) -> bool) -> Vec<VeltmanFrame> {
    let mut out = Vec::new();
    for n in 1..=max {
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        for rmask in 0u32..1 << pairs.len() {
            let r: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| rmask >> i & 1 == 1)
                .map(|(_, p)| *p)
                .collect();
            let triples: Vec<(usize, usize, usize)> = (0..n)
                .flat_map(|x| {
                    let succ: Vec<usize> = r.iter().filter(|p| p.0 == x).map(|p| p.1).collect();
                    let succ2 = succ.clone();
                    succ.into_iter()
                        .flat_map(move |y| succ2.clone().into_iter().map(move |z| (x, y, z)))
                })
                .collect();
            for smask in 0u64..1 << triples.len() {
                let mut f = VeltmanFrame::new(names.iter().cloned());
                for &(x, y) in &r {
                    f.r.insert((names[x].clone(), names[y].clone()));
                }
                for (i, &(x, y, z)) in triples.iter().enumerate() {
                    if smask >> i & 1 == 1 {
                        f.s.insert((names[x].clone(), names[y].clone(), names[z].clone()));
                    }
                }
                if keep(&f) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// All IL-frames with at most `max` worlds.
pub fn il_frames(max: usize) -> Vec<VeltmanFrame> {
    all_frames(max, &|f| validate_il(f).is_empty())
}

/// All transitive irreflexive frames with at most `max` worlds, each with
/// the least S making it an IL-frame: `y S_x z` iff `x R y` and `z` is `y`
/// or above it.
pub fn gl_frames(max: usize) -> Vec<VeltmanFrame> {
    let mut out = Vec::new();
    for n in 1..=max {
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        for rmask in 0u32..1 << pairs.len() {
            let has = |x: usize, y: usize| {
                x != y && rmask >> pairs.iter().position(|&p| p == (x, y)).expect("pair") & 1 == 1
            };
            let transitive = (0..n).all(|x| {
                (0..n).all(|y| (0..n).all(|z| !(has(x, y) && has(y, z)) || has(x, z)))
            });
            // Transitive and irreflexive, so acyclic.
            if !transitive || (0..n).any(|x| (0..n).any(|y| has(x, y) && has(y, x))) {
                continue;
            }
            let mut f = VeltmanFrame::new(names.iter().cloned());
            for x in 0..n {
                for y in (0..n).filter(|&y| has(x, y)) {
                    f.r.insert((names[x].clone(), names[y].clone()));
                    for z in (0..n).filter(|&z| z == y || has(y, z)) {
                        f.s.insert((names[x].clone(), names[y].clone(), names[z].clone()));
                    }
                }
            }
            out.push(f);
        }
    }
    out
}

/// Every formula over `atoms`, `bot` and `top` with at most `max_size`
/// connectives (`~ & | -> [] <>`, plus `|>` when `rhd`), modal depth at most
/// `max_depth` and at most `max_modal` modal operators.
pub fn all_formulas(
    atoms: &[&str],
    max_size: usize,
    max_depth: usize,
    max_modal: usize,
    rhd: bool,
) -> Vec<Formula> {
    // by_size[n] holds (formula, depth, modal operators) with n connectives.
    let mut by_size: Vec<Vec<(Formula, usize, usize)>> = Vec::new();
    let mut leaves = vec![(Formula::Bot, 0, 0), (Formula::top(), 0, 0)];
    leaves.extend(atoms.iter().map(|a| (Formula::atom(a), 0, 0)));
    by_size.push(leaves);
    for n in 1..=max_size {
        let mut out = Vec::new();
        for (f, d, m) in &by_size[n - 1] {
            out.push((Formula::not(f.clone()), *d, *m));
            if *d < max_depth && *m < max_modal {
                out.push((Formula::boxed(f.clone()), d + 1, m + 1));
                out.push((Formula::diamond(f.clone()), d + 1, m + 1));
            }
        }
        for k in 0..n {
            for (a, da, ma) in &by_size[k] {
                for (b, db, mb) in &by_size[n - 1 - k] {
                    let (d, m) = ((*da).max(*db), ma + mb);
                    if m > max_modal {
                        continue;
                    }
                    out.push((Formula::and(a.clone(), b.clone()), d, m));
                    out.push((Formula::or(a.clone(), b.clone()), d, m));
                    out.push((Formula::implies(a.clone(), b.clone()), d, m));
                    if rhd && d < max_depth && m < max_modal {
                        out.push((Formula::rhd(a.clone(), b.clone()), d + 1, m + 1));
                    }
                }
            }
        }
        by_size.push(out);
    }
    let mut all: Vec<Formula> = by_size.into_iter().flatten().map(|(f, _, _)| f).collect();
    all.sort();
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::recognize_axiom;
    use crate::theory::Logic;

    #[test]
    fn gl_frames_are_the_strict_orders() {
        // Labelled strict partial orders on 1..4 points: 1, 3, 19, 219.
        let sizes = |max| gl_frames(max).len();
        assert_eq!(sizes(1), 1);
        assert_eq!(sizes(2), 1 + 3);
        assert_eq!(sizes(3), 1 + 3 + 19);
        assert_eq!(sizes(4), 1 + 3 + 19 + 219);
        assert!(gl_frames(4).iter().all(|f| validate_il(f).is_empty()));
        let least = |f: &VeltmanFrame| {
            f.s.iter().all(|(_, y, z)| y == z || f.r.contains(&(y.clone(), z.clone())))
        };
        let slow = all_frames(3, &|f| least(f) && validate_il(f).is_empty());
        assert_eq!(gl_frames(3), slow);
    }

    #[test]
    fn formulas_respect_bounds() {
        let all = all_formulas(&["p"], 3, 1, 2, true);
        assert!(all.iter().all(|f| f.modal_depth() <= 1 && f.atoms().len() <= 1));
        assert!(all.contains(&crate::parse("p |> ~p").unwrap()));
        assert!(!all.contains(&crate::parse("[][]p").unwrap()));
        let mut g = Generator::new(3);
        let shape = Shape::new(&["p", "q"], 2, 6, false);
        for _ in 0..200 {
            let f = g.formula(&shape);
            assert!(f.modal_depth() <= 2 && !f.has_rhd());
        }
    }

    #[test]
    fn axiom_instances_are_recognized() {
        let mut g = Generator::new(4);
        let shape = Shape::new(&["p", "q", "r"], 2, 4, true);
        for rule in AXIOMS {
            let f = g.axiom_instance(rule, &shape);
            assert!(recognize_axiom(&f, Logic::Ilm).is_some(), "{rule:?}: {f}");
        }
    }
}
