use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("valuation budget exceeded: {atoms} atoms x {worlds} worlds > {limit}")]
    Budget {
        atoms: usize,
        worlds: usize,
        limit: usize,
    },
    #[error("frame is not an IL-frame: {0}")]
    NotAFrame(String),
    #[error("frame has {0} worlds; at most 128 are supported here")]
    TooLarge(usize),
    #[error("malformed model file: {0}")]
    Json(String),
}

/// Worlds, the relation R and the ternary S, with `(x, y, z)` read as
/// `y S_x z`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VeltmanFrame {
    pub worlds: Vec<String>,
    pub r: BTreeSet<(String, String)>,
    pub s: BTreeSet<(String, String, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VeltmanModel {
    pub frame: VeltmanFrame,
    pub val: BTreeMap<String, BTreeSet<String>>,
}

impl VeltmanFrame {
    pub fn new<S: Into<String>>(worlds: impl IntoIterator<Item = S>) -> Self {
        VeltmanFrame {
            worlds: worlds.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn with_r(mut self, pairs: &[(&str, &str)]) -> Self {
        self.r
            .extend(pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())));
        self
    }

    pub fn with_s(mut self, triples: &[(&str, &str, &str)]) -> Self {
        self.s.extend(
            triples
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())),
        );
        self
    }

    pub fn has_world(&self, w: &str) -> bool {
        self.worlds.iter().any(|x| x == w)
    }

    pub fn successors<'a>(&'a self, w: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.r
            .iter()
            .filter(move |(a, _)| a == w)
            .map(|(_, b)| b.as_str())
    }

    pub(crate) fn index(&self) -> Result<HashMap<&str, usize>, SemanticsError> {
        let mut idx = HashMap::new();
        for (i, w) in self.worlds.iter().enumerate() {
            if idx.insert(w.as_str(), i).is_some() {
                return Err(SemanticsError::DuplicateWorld(w.clone()));
            }
        }
        let check = |w: &String| {
            if idx.contains_key(w.as_str()) {
                Ok(())
            } else {
                Err(SemanticsError::UnknownWorld(w.clone()))
            }
        };
        for (a, b) in &self.r {
            check(a)?;
            check(b)?;
        }
        for (a, b, c) in &self.s {
            check(a)?;
            check(b)?;
            check(c)?;
        }
        Ok(idx)
    }
}

impl VeltmanModel {
    pub fn new(frame: VeltmanFrame) -> Self {
        VeltmanModel {
            frame,
            val: BTreeMap::new(),
        }
    }

    pub fn set_true(&mut self, world: &str, atom: &str) {
        self.val
            .entry(world.to_string())
            .or_default()
            .insert(atom.to_string());
    }

    pub fn true_atoms(&self, world: &str) -> impl Iterator<Item = &str> {
        self.val
            .get(world)
            .into_iter()
            .flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ModelFile::from(self)).expect("model serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from(self)).expect("model serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, SemanticsError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| SemanticsError::Json(e.to_string()))?;
        Self::try_from(file)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SemanticsError> {
        let file: ModelFile = serde_json::from_value(value.clone())
            .map_err(|e| SemanticsError::Json(e.to_string()))?;
        Self::try_from(file)
    }

    /// Graphviz rendering: R solid, `S_x` dashed with label `x`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph veltman {\n  node [shape=circle];\n");
        for w in &self.frame.worlds {
            let atoms: Vec<&str> = self.true_atoms(w).collect();
            let mut label = esc(w);
            if !atoms.is_empty() {
                label.push_str("\\n");
                label.push_str(&esc(&atoms.join(",")));
            }
            out.push_str(&format!("  {} [label=\"{label}\"];\n", quote(w)));
        }
        for (a, b) in &self.frame.r {
            out.push_str(&format!("  {} -> {};\n", quote(a), quote(b)));
        }
        for (x, y, z) in &self.frame.s {
            if y == z {
                continue;
            }
            out.push_str(&format!(
                "  {} -> {} [style=dashed, label={}];\n",
                quote(y),
                quote(z),
                quote(x)
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", esc(s))
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    worlds: Vec<String>,
    #[serde(rename = "R", default)]
    r: Vec<(String, String)>,
    #[serde(rename = "S", default)]
    s: Vec<(String, String, String)>,
    #[serde(default)]
    val: BTreeMap<String, Vec<String>>,
}

impl From<&VeltmanModel> for ModelFile {
    fn from(m: &VeltmanModel) -> Self {
        ModelFile {
            worlds: m.frame.worlds.clone(),
            r: m.frame.r.iter().cloned().collect(),
            s: m.frame.s.iter().cloned().collect(),
            val: m
                .frame
                .worlds
                .iter()
                .map(|w| (w.clone(), m.true_atoms(w).map(String::from).collect()))
                .collect(),
        }
    }
}

impl TryFrom<ModelFile> for VeltmanModel {
    type Error = SemanticsError;

    fn try_from(file: ModelFile) -> Result<Self, Self::Error> {
        let frame = VeltmanFrame {
            worlds: file.worlds,
            r: file.r.into_iter().collect(),
            s: file.s.into_iter().collect(),
        };
        frame.index()?;
        let mut model = VeltmanModel::new(frame);
        for (w, atoms) in file.val {
            if !model.frame.has_world(&w) {
                return Err(SemanticsError::UnknownWorld(w));
            }
            for a in atoms {
                model.set_true(&w, &a);
            }
        }
        Ok(model)
    }
}

/// A violated frame condition together with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    /// A world mentioned in R, S or the valuation that is not in W.
    UnknownWorld { world: String },
    DuplicateWorld { world: String },
    /// `a R b R c` without `a R c`.
    Transitivity { a: String, b: String, c: String },
    /// `w` lies on an R-cycle, so R is not conversely well-founded.
    WellFoundedness { world: String },
    /// `y S_x z` without `x R y` and `x R z`.
    SOutsideR { x: String, y: String, z: String },
    /// `x R y` without `y S_x y`.
    SReflexivity { x: String, y: String },
    /// `x R y R z` without `y S_x z`.
    RInsideS { x: String, y: String, z: String },
    /// `u S_x v S_x w` without `u S_x w`.
    STransitivity {
        x: String,
        u: String,
        v: String,
        w: String,
    },
    /// `y S_x z R u` without `y R u`.
    Ilm {
        x: String,
        y: String,
        z: String,
        u: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownWorld { world } => write!(f, "unknown world {world}"),
            Violation::DuplicateWorld { world } => write!(f, "duplicate world {world}"),
            Violation::Transitivity { a, b, c } => {
                write!(f, "R not transitive: {a} R {b} R {c} but not {a} R {c}")
            }
            Violation::WellFoundedness { world } => {
                write!(f, "R not conversely well-founded: {world} lies on a cycle")
            }
            Violation::SOutsideR { x, y, z } => {
                write!(f, "{y} S_{x} {z} but not both {x} R {y} and {x} R {z}")
            }
            Violation::SReflexivity { x, y } => write!(f, "{x} R {y} but not {y} S_{x} {y}"),
            Violation::RInsideS { x, y, z } => {
                write!(f, "{x} R {y} R {z} but not {y} S_{x} {z}")
            }
            Violation::STransitivity { x, u, v, w } => {
                write!(f, "{u} S_{x} {v} S_{x} {w} but not {u} S_{x} {w}")
            }
            Violation::Ilm { x, y, z, u } => {
                write!(f, "{y} S_{x} {z} R {u} but not {y} R {u}")
            }
        }
    }
}

fn structural(frame: &VeltmanFrame) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for w in &frame.worlds {
        if !seen.insert(w) {
            out.push(Violation::DuplicateWorld { world: w.clone() });
        }
    }
    let mut unknown = BTreeSet::new();
    let mut note = |w: &String| {
        if !seen.contains(w) {
            unknown.insert(w.clone());
        }
    };
    for (a, b) in &frame.r {
        note(a);
        note(b);
    }
    for (a, b, c) in &frame.s {
        note(a);
        note(b);
        note(c);
    }
    out.extend(
        unknown
            .into_iter()
            .map(|world| Violation::UnknownWorld { world }),
    );
    out
}

/// Every violated IL-frame condition, in a deterministic order. Empty iff
/// the frame is an IL-frame.
pub fn validate_il(frame: &VeltmanFrame) -> Vec<Violation> {
    let mut out = structural(frame);
    if !out.is_empty() {
        return out;
    }
    let r = &frame.r;
    let has_r = |a: &String, b: &String| r.contains(&(a.clone(), b.clone()));
    let has_s = |x: &String, y: &String, z: &String| {
        frame.s.contains(&(x.clone(), y.clone(), z.clone()))
    };
    let succ: BTreeMap<&String, Vec<&String>> = frame
        .worlds
        .iter()
        .map(|w| (w, r.iter().filter(|(a, _)| a == w).map(|(_, b)| b).collect()))
        .collect();

    for (a, b) in r {
        for c in &succ[b] {
            if !has_r(a, c) {
                out.push(Violation::Transitivity {
                    a: a.clone(),
                    b: b.clone(),
                    c: (*c).clone(),
                });
            }
        }
    }
    for w in &frame.worlds {
        if reaches(&succ, w, w) {
            out.push(Violation::WellFoundedness { world: w.clone() });
        }
    }
    for (x, y, z) in &frame.s {
        if !has_r(x, y) || !has_r(x, z) {
            out.push(Violation::SOutsideR {
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
            });
        }
    }
    for (x, y) in r {
        if !has_s(x, y, y) {
            out.push(Violation::SReflexivity {
                x: x.clone(),
                y: y.clone(),
            });
        }
        for z in &succ[y] {
            if !has_s(x, y, z) {
                out.push(Violation::RInsideS {
                    x: x.clone(),
                    y: y.clone(),
                    z: (*z).clone(),
                });
            }
        }
    }
    for (x, u, v) in &frame.s {
        for (x2, v2, w) in frame.s.range((x.clone(), v.clone(), String::new())..) {
            if x2 != x || v2 != v {
                break;
            }
            if !has_s(x, u, w) {
                out.push(Violation::STransitivity {
                    x: x.clone(),
                    u: u.clone(),
                    v: v.clone(),
                    w: w.clone(),
                });
            }
        }
    }
    out
}

fn reaches(succ: &BTreeMap<&String, Vec<&String>>, from: &String, target: &String) -> bool {
    let mut stack: Vec<&String> = succ[from].clone();
    let mut seen = BTreeSet::new();
    while let Some(w) = stack.pop() {
        if w == target {
            return true;
        }
        if seen.insert(w) {
            stack.extend(succ[w].iter().copied());
        }
    }
    false
}

/// The IL report plus every instance of `y S_x z R u` without `y R u`.
pub fn validate_ilm(frame: &VeltmanFrame) -> Vec<Violation> {
    let mut out = validate_il(frame);
    if out
        .iter()
        .any(|v| matches!(v, Violation::UnknownWorld { .. } | Violation::DuplicateWorld { .. }))
    {
        return out;
    }
    for (x, y, z) in &frame.s {
        for (_, u) in frame.r.range((z.clone(), String::new())..) {
            if !frame.r.contains(&(z.clone(), u.clone())) {
                break;
            }
            if !frame.r.contains(&(y.clone(), u.clone())) {
                out.push(Violation::Ilm {
                    x: x.clone(),
                    y: y.clone(),
                    z: z.clone(),
                    u: u.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_world_is_valid() {
        assert!(validate_il(&VeltmanFrame::new(["a"])).is_empty());
    }

    #[test]
    fn missing_transitivity_reported() {
        let f = VeltmanFrame::new(["a", "b", "c"]).with_r(&[("a", "b"), ("b", "c")]);
        let report = validate_il(&f);
        assert!(report.contains(&Violation::Transitivity {
            a: "a".into(),
            b: "b".into(),
            c: "c".into()
        }));
    }

    #[test]
    fn two_cycle_reported() {
        let f = VeltmanFrame::new(["a", "b"])
            .with_r(&[("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")])
            .with_s(&[("a", "b", "b"), ("b", "a", "a")]);
        let report = validate_il(&f);
        assert!(report.contains(&Violation::WellFoundedness { world: "a".into() }));
        assert!(report.contains(&Violation::WellFoundedness { world: "b".into() }));
    }

    fn diamond_frame() -> VeltmanFrame {
        VeltmanFrame::new(["w", "l", "r", "u"])
            .with_r(&[("w", "l"), ("w", "r"), ("w", "u"), ("r", "u")])
            .with_s(&[
                ("w", "l", "l"),
                ("w", "r", "r"),
                ("w", "u", "u"),
                ("w", "r", "u"),
                ("w", "l", "r"),
                ("w", "l", "u"),
                ("r", "u", "u"),
            ])
    }

    #[test]
    fn ilm_violation_witness() {
        let f = diamond_frame();
        assert!(validate_il(&f).is_empty(), "{:?}", validate_il(&f));
        assert_eq!(
            validate_ilm(&f),
            vec![Violation::Ilm {
                x: "w".into(),
                y: "l".into(),
                z: "r".into(),
                u: "u".into()
            }]
        );
        let fixed = f.with_r(&[("l", "u")]).with_s(&[("l", "u", "u")]);
        assert!(validate_ilm(&fixed).is_empty(), "{:?}", validate_ilm(&fixed));
    }

    #[test]
    fn identity_s_is_vacuously_ilm() {
        let f = VeltmanFrame::new(["a", "b", "c"])
            .with_r(&[("a", "b"), ("a", "c"), ("b", "c")])
            .with_s(&[("a", "b", "b"), ("a", "c", "c"), ("b", "c", "c"), ("a", "b", "c")]);
        assert!(validate_ilm(&f).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let mut m = VeltmanModel::new(diamond_frame());
        m.set_true("l", "p");
        let text = m.to_json_string();
        assert_eq!(VeltmanModel::from_json_str(&text).unwrap(), m);
        assert!(VeltmanModel::from_json_str(r#"{"worlds":["a"],"R":[["a","b"]]}"#).is_err());
    }

    #[test]
    fn dot_lists_edges() {
        let mut m = VeltmanModel::new(diamond_frame());
        m.set_true("l", "p");
        let dot = m.to_dot();
        assert!(dot.contains("\"w\" -> \"l\";"));
        assert!(dot.contains("\"l\" -> \"r\" [style=dashed, label=\"w\"];"));
        assert!(dot.contains("[label=\"l\\np\"]"));
    }
}
