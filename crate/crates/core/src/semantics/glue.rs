//! Model surgery: new roots below given models, and the self-prover gluing.

use std::collections::{BTreeMap, BTreeSet};

use super::closure::IndexedFrame;
use super::frame::{SemanticsError, VeltmanFrame, VeltmanModel};

/// Result of a gluing operation. `renaming[i]` maps the world names of the
/// i-th input model to their names in `model`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glued {
    pub model: VeltmanModel,
    pub root: String,
    pub renaming: Vec<BTreeMap<String, String>>,
}

impl Glued {
    pub fn renamed(&self, input: usize, world: &str) -> Option<&str> {
        self.renaming.get(input)?.get(world).map(String::as_str)
    }
}

/// Collision-free naming: a name is kept if unused, otherwise the smallest
/// `name_k` (k >= 1) not yet taken is used.
struct Namer {
    used: BTreeSet<String>,
}

impl Namer {
    fn take(&mut self, base: &str) -> String {
        let name = if self.used.contains(base) {
            (1..)
                .map(|k| format!("{base}_{k}"))
                .find(|c| !self.used.contains(c))
                .expect("unbounded")
        } else {
            base.to_string()
        };
        self.used.insert(name.clone());
        name
    }
}

struct Builder {
    names: Vec<String>,
    namer: Namer,
    frame: IndexedFrame,
    val: BTreeMap<String, BTreeSet<String>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: Vec::new(),
            namer: Namer {
                used: BTreeSet::new(),
            },
            frame: IndexedFrame::new(0),
            val: BTreeMap::new(),
        }
    }

    fn world(&mut self, base: &str) -> usize {
        let name = self.namer.take(base);
        self.names.push(name);
        self.frame.add_world()
    }

    /// Copies a model in; returns the old-name to index map.
    fn import(&mut self, m: &VeltmanModel) -> Result<BTreeMap<String, usize>, SemanticsError> {
        let total = self.names.len() + m.frame.worlds.len() + 1;
        if total > super::closure::MAX_WORLDS {
            return Err(SemanticsError::TooLarge(total));
        }
        m.frame.index()?;
        let mut map = BTreeMap::new();
        for w in &m.frame.worlds {
            let i = self.world(w);
            map.insert(w.clone(), i);
            if let Some(atoms) = m.val.get(w) {
                if !atoms.is_empty() {
                    self.val.insert(self.names[i].clone(), atoms.clone());
                }
            }
        }
        for (a, b) in &m.frame.r {
            self.frame.add_r(map[a], map[b]);
        }
        for (x, y, z) in &m.frame.s {
            self.frame.add_s(map[x], map[y], map[z]);
        }
        Ok(map)
    }

    fn names_of(&self, map: &BTreeMap<String, usize>) -> BTreeMap<String, String> {
        map.iter()
            .map(|(k, &i)| (k.clone(), self.names[i].clone()))
            .collect()
    }

    fn finish(mut self, root: usize, renaming: Vec<BTreeMap<String, String>>) -> Glued {
        self.frame.close(true);
        let frame: VeltmanFrame = self.frame.to_frame(&self.names);
        Glued {
            model: VeltmanModel {
                frame,
                val: self.val,
            },
            root: self.names[root].clone(),
            renaming,
        }
    }
}

fn lookup(map: &BTreeMap<String, usize>, w: &str) -> Result<usize, SemanticsError> {
    map.get(w)
        .copied()
        .ok_or_else(|| SemanticsError::UnknownWorld(w.to_string()))
}

/// A fresh root `r` below all worlds of all inputs, with `S_r` the identity
/// on its successors together with every input R-edge. The designated worlds
/// are checked to exist; their new names are available through `renamed`.
pub fn glue_root(models: &[(VeltmanModel, String)]) -> Result<Glued, SemanticsError> {
    let mut b = Builder::new();
    let mut maps = Vec::new();
    for (m, designated) in models {
        let map = b.import(m)?;
        lookup(&map, designated)?;
        maps.push(map);
    }
    let inner: Vec<(usize, usize)> = b.frame.r_pairs().collect();
    let n = b.frame.n;
    let root = b.world("r");
    for x in 0..n {
        b.frame.add_r(root, x);
        b.frame.add_s(root, x, x);
    }
    for (x, y) in inner {
        b.frame.add_s(root, x, y);
    }
    let renaming = maps.iter().map(|m| b.names_of(m)).collect();
    Ok(b.finish(root, renaming))
}

/// A fresh root `r` seeing exactly `m` and the successors of `m`.
///
/// The closure also adds `m S_r y` for every `m R y`, which the bare edge
/// list would miss.
pub fn glue_above_world(model: &VeltmanModel, m: &str) -> Result<Glued, SemanticsError> {
    let mut b = Builder::new();
    let map = b.import(model)?;
    let mi = lookup(&map, m)?;
    let above: Vec<usize> = super::closure::bits(b.frame.r[mi]).collect();
    let inner: Vec<(usize, usize)> = b.frame.r_pairs().collect();
    let root = b.world("r");
    for &x in std::iter::once(&mi).chain(&above) {
        b.frame.add_r(root, x);
        b.frame.add_s(root, x, x);
    }
    for (x, y) in inner {
        if above.contains(&x) {
            b.frame.add_s(root, x, y);
        }
    }
    let renaming = vec![b.names_of(&map)];
    Ok(b.finish(root, renaming))
}

/// Places a fresh `w` below `M` and `N`, sets `l S_w r`, gives `l` every
/// R-successor of `r`, and closes under the IL and ILM conditions.
pub fn glue_selfprover(
    m: &VeltmanModel,
    l: &str,
    n: &VeltmanModel,
    r: &str,
) -> Result<Glued, SemanticsError> {
    let mut b = Builder::new();
    let map0 = b.import(m)?;
    let map1 = b.import(n)?;
    let li = lookup(&map0, l)?;
    let ri = lookup(&map1, r)?;
    for (name, &i) in &map1 {
        if i != ri && !b.frame.has_r(ri, i) {
            return Err(SemanticsError::NotAFrame(format!(
                "`{r}` is not a root: `{name}` is not above it"
            )));
        }
    }
    let count = b.frame.n;
    let w = b.world("w");
    for x in 0..count {
        b.frame.add_r(w, x);
    }
    for y in super::closure::bits(b.frame.r[ri]).collect::<Vec<_>>() {
        b.frame.add_r(li, y);
    }
    b.frame.add_s(w, li, ri);
    let renaming = vec![b.names_of(&map0), b.names_of(&map1)];
    Ok(b.finish(w, renaming))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{forces, validate_ilm};
    use crate::syntax::parse;

    fn point(name: &str, atoms: &[&str]) -> VeltmanModel {
        let mut m = VeltmanModel::new(VeltmanFrame::new([name]));
        for a in atoms {
            m.set_true(name, a);
        }
        m
    }

    fn holds(g: &Glued, f: &str) -> bool {
        forces(&g.model, &g.root, &parse(f).unwrap()).unwrap()
    }

    #[test]
    fn root_over_single_point() {
        let g = glue_root(&[(point("m", &[]), "m".into())]).unwrap();
        assert!(validate_ilm(&g.model.frame).is_empty());
        assert!(holds(&g, "<>~p"));
    }

    #[test]
    fn root_over_two_models() {
        let mut m0 = VeltmanModel::new(VeltmanFrame::new(["a", "b"]).with_r(&[("a", "b")]));
        m0.frame.s.insert(("a".into(), "b".into(), "b".into()));
        m0.set_true("a", "p");
        let mut m1 = m0.clone();
        m1.set_true("a", "q");
        m1.set_true("b", "p");
        let g = glue_root(&[(m0, "a".into()), (m1, "a".into())]).unwrap();
        assert!(validate_ilm(&g.model.frame).is_empty());
        assert_eq!(g.renamed(1, "a"), Some("a_1"));
        assert!(holds(&g, "<>~p & <>~q"));
    }

    #[test]
    fn root_over_nothing() {
        let g = glue_root(&[]).unwrap();
        assert_eq!(g.model.frame.worlds, vec!["r".to_string()]);
        assert!(holds(&g, "[]bot"));
    }

    #[test]
    fn root_name_avoids_collisions() {
        let g = glue_root(&[(point("r", &[]), "r".into())]).unwrap();
        assert_eq!(g.root, "r_1");
        assert_eq!(g.renamed(0, "r"), Some("r"));
    }

    #[test]
    fn above_world_refutes_rhd() {
        let g = glue_above_world(&point("m", &["p"]), "m").unwrap();
        assert!(validate_ilm(&g.model.frame).is_empty());
        assert!(holds(&g, "~(p |> bot)"));
        assert!(holds(&g, "<>top"));
    }

    #[test]
    fn above_world_only_sees_the_cone_of_m() {
        let frame = VeltmanFrame::new(["a", "m", "b"])
            .with_r(&[("a", "m"), ("a", "b"), ("m", "b")])
            .with_s(&[("a", "m", "m"), ("a", "b", "b"), ("m", "b", "b"), ("a", "m", "b")]);
        let mut model = VeltmanModel::new(frame);
        model.set_true("m", "p");
        let g = glue_above_world(&model, "m").unwrap();
        assert!(validate_ilm(&g.model.frame).is_empty());
        let succ: BTreeSet<&str> = g.model.frame.successors(&g.root).collect();
        assert_eq!(succ, BTreeSet::from(["m", "b"]));
        // m ⊩ p ∧ ¬q ∧ □¬q
        assert!(holds(&g, "~(p |> q)"));
        assert!(glue_above_world(&model, "zz").is_err());
    }

    #[test]
    fn selfprover_two_points() {
        let g = glue_selfprover(&point("l", &[]), "l", &point("r", &[]), "r").unwrap();
        assert_eq!(g.model.frame.worlds.len(), 3);
        assert!(validate_ilm(&g.model.frame).is_empty());
        assert!(g.model.frame.s.contains(&("w".into(), "l".into(), "r".into())));
        assert!(holds(&g, "<>top"));
    }

    #[test]
    fn selfprover_refutes_box_of_phi_and_box_phi() {
        // phi = p & []p: l ⊩ p with nothing above, r ⊩ ¬p with a p-world above.
        let m = point("l", &["p"]);
        let frame = VeltmanFrame::new(["r", "t"])
            .with_r(&[("r", "t")])
            .with_s(&[("r", "t", "t")]);
        let mut n = VeltmanModel::new(frame);
        n.set_true("t", "p");
        let g = glue_selfprover(&m, "l", &n, "r").unwrap();
        assert!(validate_ilm(&g.model.frame).is_empty());
        assert!(g.model.frame.r.contains(&("l".into(), "t".into())));
        assert!(holds(&g, "~[]((p & []p) & [](p & []p))"));
    }

    #[test]
    fn selfprover_rejects_non_root() {
        let n = VeltmanModel::new(VeltmanFrame::new(["r", "s"]));
        assert!(matches!(
            glue_selfprover(&point("l", &[]), "l", &n, "r"),
            Err(SemanticsError::NotAFrame(_))
        ));
    }
}
