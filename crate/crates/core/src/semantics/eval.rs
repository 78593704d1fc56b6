use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::frame::{SemanticsError, VeltmanFrame, VeltmanModel};
use crate::syntax::Formula;

/// Index-based adjacency of a frame, built once per evaluation.
pub(crate) struct View {
    pub n: usize,
    pub succ: Vec<Vec<usize>>,
    /// `s_out[x][y]` lists the z with `y S_x z`.
    pub s_out: Vec<HashMap<usize, Vec<usize>>>,
}

impl View {
    pub fn new(frame: &VeltmanFrame) -> Result<(View, HashMap<&str, usize>), SemanticsError> {
        let idx = frame.index()?;
        let n = frame.worlds.len();
        let mut succ = vec![Vec::new(); n];
        for (a, b) in &frame.r {
            succ[idx[a.as_str()]].push(idx[b.as_str()]);
        }
        let mut s_out: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); n];
        for (x, y, z) in &frame.s {
            s_out[idx[x.as_str()]]
                .entry(idx[y.as_str()])
                .or_default()
                .push(idx[z.as_str()]);
        }
        Ok((View { n, succ, s_out }, idx))
    }

    /// Truth value of `f` at every world.
    pub fn eval(&self, f: &Formula, atom: &dyn Fn(&str, usize) -> bool) -> Vec<bool> {
        match f {
            Formula::Bot => vec![false; self.n],
            Formula::Atom(name) => (0..self.n).map(|w| atom(name, w)).collect(),
            Formula::Implies(a, b) => {
                let (va, vb) = (self.eval(a, atom), self.eval(b, atom));
                va.iter().zip(&vb).map(|(x, y)| !x || *y).collect()
            }
            Formula::Box(a) => {
                let va = self.eval(a, atom);
                (0..self.n)
                    .map(|w| self.succ[w].iter().all(|&u| va[u]))
                    .collect()
            }
            Formula::Rhd(a, b) => {
                let (va, vb) = (self.eval(a, atom), self.eval(b, atom));
                (0..self.n)
                    .map(|w| {
                        self.succ[w].iter().filter(|&&u| va[u]).all(|u| {
                            self.s_out[w]
                                .get(u)
                                .is_some_and(|zs| zs.iter().any(|&v| vb[v]))
                        })
                    })
                    .collect()
            }
        }
    }
}

fn model_eval(m: &VeltmanModel, f: &Formula) -> Result<(Vec<bool>, Vec<String>), SemanticsError> {
    let (view, _) = View::new(&m.frame)?;
    let worlds = &m.frame.worlds;
    let atom = |name: &str, w: usize| m.val.get(&worlds[w]).is_some_and(|s| s.contains(name));
    Ok((view.eval(f, &atom), worlds.clone()))
}

/// `M, w ⊩ f`.
pub fn forces(m: &VeltmanModel, w: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let (truth, worlds) = model_eval(m, f)?;
    let i = worlds
        .iter()
        .position(|x| x == w)
        .ok_or_else(|| SemanticsError::UnknownWorld(w.to_string()))?;
    Ok(truth[i])
}

/// The worlds forcing `f`, in frame order.
pub fn truth_set(m: &VeltmanModel, f: &Formula) -> Result<Vec<String>, SemanticsError> {
    let (truth, worlds) = model_eval(m, f)?;
    Ok(worlds
        .into_iter()
        .zip(truth)
        .filter_map(|(w, t)| t.then_some(w))
        .collect())
}

/// Restriction to `{m} ∪ R(m)`.
pub fn generated_submodel(model: &VeltmanModel, m: &str) -> Result<VeltmanModel, SemanticsError> {
    if !model.frame.has_world(m) {
        return Err(SemanticsError::UnknownWorld(m.to_string()));
    }
    let keep: BTreeSet<&str> = std::iter::once(m)
        .chain(model.frame.successors(m))
        .collect();
    let frame = VeltmanFrame {
        worlds: model
            .frame
            .worlds
            .iter()
            .filter(|w| keep.contains(w.as_str()))
            .cloned()
            .collect(),
        r: model
            .frame
            .r
            .iter()
            .filter(|(a, b)| keep.contains(a.as_str()) && keep.contains(b.as_str()))
            .cloned()
            .collect(),
        s: model
            .frame
            .s
            .iter()
            .filter(|(a, b, c)| {
                keep.contains(a.as_str()) && keep.contains(b.as_str()) && keep.contains(c.as_str())
            })
            .cloned()
            .collect(),
    };
    let val: BTreeMap<String, BTreeSet<String>> = model
        .val
        .iter()
        .filter(|(w, _)| keep.contains(w.as_str()))
        .map(|(w, s)| (w.clone(), s.clone()))
        .collect();
    Ok(VeltmanModel { frame, val })
}

/// Default cap on `|atoms| * |W|` for [`frame_validates`].
pub const VALUATION_LIMIT: usize = 20;

/// Whether `f` holds everywhere under every valuation of its atoms.
pub fn frame_validates(frame: &VeltmanFrame, f: &Formula) -> Result<bool, SemanticsError> {
    frame_validates_with_limit(frame, f, VALUATION_LIMIT)
}

pub fn frame_validates_with_limit(
    frame: &VeltmanFrame,
    f: &Formula,
    limit: usize,
) -> Result<bool, SemanticsError> {
    let (view, _) = View::new(frame)?;
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let bits = atoms.len() * view.n;
    if bits > limit {
        return Err(SemanticsError::Budget {
            atoms: atoms.len(),
            worlds: view.n,
            limit,
        });
    }
    let slot: HashMap<&str, usize> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    for mask in 0u64..(1u64 << bits) {
        let atom = |name: &str, w: usize| mask >> (slot[name] * view.n + w) & 1 == 1;
        if view.eval(f, &atom).iter().any(|t| !t) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn terminal_world_forces_vacuous_modalities() {
        let m = VeltmanModel::new(VeltmanFrame::new(["a"]));
        assert!(forces(&m, "a", &f("[]bot")).unwrap());
        assert!(forces(&m, "a", &f("p |> bot")).unwrap());
        assert!(forces(&m, "z", &f("p")).is_err());
    }

    #[test]
    fn rhd_clause_unfolds() {
        let frame = VeltmanFrame::new(["w", "u"])
            .with_r(&[("w", "u")])
            .with_s(&[("w", "u", "u")]);
        let mut m = VeltmanModel::new(frame);
        m.set_true("u", "p");
        assert!(forces(&m, "w", &f("p |> p")).unwrap());
        assert!(!forces(&m, "w", &f("p |> q")).unwrap());
        assert!(forces(&m, "w", &f("q |> p")).unwrap());
        assert!(!forces(&m, "w", &f("[]bot")).unwrap());
    }

    fn chain3() -> VeltmanModel {
        let frame = VeltmanFrame::new(["w0", "w1", "w2"])
            .with_r(&[("w0", "w1"), ("w0", "w2"), ("w1", "w2")])
            .with_s(&[
                ("w0", "w1", "w1"),
                ("w0", "w2", "w2"),
                ("w0", "w1", "w2"),
                ("w1", "w2", "w2"),
            ]);
        let mut m = VeltmanModel::new(frame);
        m.set_true("w2", "p");
        m
    }

    #[test]
    fn submodel_of_chain() {
        let m = chain3();
        let sub = generated_submodel(&m, "w1").unwrap();
        assert_eq!(sub.frame.worlds, vec!["w1", "w2"]);
        for w in ["w1", "w2"] {
            assert_eq!(
                forces(&sub, w, &f("<>p")).unwrap(),
                forces(&m, w, &f("<>p")).unwrap()
            );
        }
        assert_eq!(generated_submodel(&m, "w0").unwrap(), m);
        let top = generated_submodel(&m, "w2").unwrap();
        assert_eq!(top.frame.worlds.len(), 1);
        assert!(forces(&top, "w2", &f("[]bot")).unwrap());
    }

    #[test]
    fn frame_validation_examples() {
        assert!(frame_validates(&VeltmanFrame::new(["a"]), &f("[]bot")).unwrap());
        assert!(frame_validates(&chain3().frame, &f("[]([]p -> p) -> []p")).unwrap());
        assert!(!frame_validates(&chain3().frame, &f("[]p -> p")).unwrap());
        let big = VeltmanFrame::new(["a", "b", "c", "d", "e", "f", "g"]);
        assert!(matches!(
            frame_validates(&big, &f("p & q & r")),
            Err(SemanticsError::Budget { .. })
        ));
    }
}
