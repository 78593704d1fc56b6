use std::fmt;
use std::str::FromStr;

use super::Logic;
use crate::syntax::{parse, Formula};
use crate::theory::is_tautology;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Taut,
    L1,
    L2,
    L3,
    J1,
    J2,
    J3,
    J4,
    J5,
    M,
    /// Premises `A` and `A -> B`, as 0-based line indices.
    ModusPonens(usize, usize),
    Necessitation(usize),
}

impl Rule {
    fn is_axiom(self) -> bool {
        !matches!(self, Rule::Taut | Rule::ModusPonens(..) | Rule::Necessitation(_))
    }

    fn allowed(self, logic: Logic) -> bool {
        match self {
            Rule::J1 | Rule::J2 | Rule::J3 | Rule::J4 | Rule::J5 => logic != Logic::Gl,
            Rule::M => logic == Logic::Ilm,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub rule: Rule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("line {line}: premise {premise} does not precede it")]
    BadIndex { line: usize, premise: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// A one-line proof when `f` is a tautology or an axiom instance.
    pub fn trivial(f: &Formula, logic: Logic) -> Option<Proof> {
        let rule = if is_tautology(f) {
            Rule::Taut
        } else {
            recognize_axiom(f, logic)?
        };
        Some(Proof {
            lines: vec![ProofLine {
                formula: f.clone(),
                rule,
            }],
        })
    }
}

fn both<'a>(f: &'a Formula) -> Option<(&'a Formula, &'a Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn boxed(f: &Formula) -> Option<&Formula> {
    f.as_box()
}

fn matches(rule: Rule, f: &Formula) -> bool {
    let m = || -> Option<bool> {
        let (l, r) = both(f).unwrap_or((f, f));
        Some(match rule {
            Rule::L1 => {
                let (a, b) = both(boxed(l)?)?;
                let (ba, bb) = both(r)?;
                boxed(ba)? == a && boxed(bb)? == b
            }
            Rule::L2 => boxed(boxed(r)?)? == boxed(l)?,
            Rule::L3 => {
                let (ba, a) = both(boxed(l)?)?;
                boxed(ba)? == a && boxed(r)? == a
            }
            Rule::J1 => {
                let (a, b) = both(boxed(l)?)?;
                r.as_rhd()? == (a, b)
            }
            Rule::J2 => {
                let (ab, bc) = l.as_and()?;
                let ((a, b), (b2, c)) = (ab.as_rhd()?, bc.as_rhd()?);
                b == b2 && r.as_rhd()? == (a, c)
            }
            Rule::J3 => {
                let (ac, bc) = l.as_and()?;
                let ((a, c), (b, c2)) = (ac.as_rhd()?, bc.as_rhd()?);
                let (ab, c3) = r.as_rhd()?;
                c == c2 && c == c3 && ab.as_or()? == (a, b)
            }
            Rule::J4 => {
                let (a, b) = l.as_rhd()?;
                let (da, db) = both(r)?;
                da.as_diamond()? == a && db.as_diamond()? == b
            }
            Rule::J5 => {
                let (da, a) = f.as_rhd()?;
                da.as_diamond()? == a
            }
            Rule::M => {
                let (a, b) = l.as_rhd()?;
                let (ac, bc) = r.as_rhd()?;
                let ((a2, c), (b2, c2)) = (ac.as_and()?, bc.as_and()?);
                a2 == a && b2 == b && c == c2 && c.as_box().is_some()
            }
            _ => false,
        })
    };
    m().unwrap_or(false)
}

/// The first axiom schema (in the order L1..L3, J1..J5, M) of which `f` is
/// an instance and which `logic` has.
pub fn recognize_axiom(f: &Formula, logic: Logic) -> Option<Rule> {
    use Rule::*;
    [L1, L2, L3, J1, J2, J3, J4, J5, M]
        .into_iter()
        .find(|&r| r.allowed(logic) && matches(r, f))
}

/// Whether every line is an axiom instance of `logic`, a tautology, or
/// follows from earlier lines by modus ponens or necessitation.
pub fn check_proof(p: &Proof, logic: Logic) -> Result<bool, ProofError> {
    for (i, line) in p.lines.iter().enumerate() {
        let premise = |j: usize| -> Result<&Formula, ProofError> {
            if j < i {
                Ok(&p.lines[j].formula)
            } else {
                Err(ProofError::BadIndex { line: i + 1, premise: j + 1 })
            }
        };
        if logic == Logic::Gl && line.formula.has_rhd() {
            return Ok(false);
        }
        let ok = match line.rule {
            Rule::Taut => is_tautology(&line.formula),
            Rule::ModusPonens(a, ab) => {
                let (a, ab) = (premise(a)?, premise(ab)?);
                *ab == Formula::implies(a.clone(), line.formula.clone())
            }
            Rule::Necessitation(a) => line.formula == Formula::boxed(premise(a)?.clone()),
            r => r.is_axiom() && r.allowed(logic) && matches(r, &line.formula),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ModusPonens(a, b) => write!(f, "MP {} {}", a + 1, b + 1),
            Rule::Necessitation(a) => write!(f, "Nec {}", a + 1),
            r => write!(f, "{r:?}"),
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, l.formula, l.rule)?;
        }
        Ok(())
    }
}

impl FromStr for Proof {
    type Err = ProofError;

    /// One step per line: `<index>. <formula> ; <rule>[ <premises>]`.
    /// Blank lines and lines starting with `#` are skipped.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = Vec::new();
        for raw in text.lines() {
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let n = lines.len() + 1;
            let err = |message: String| ProofError::Syntax { line: n, message };
            let (idx, rest) = raw.split_once('.').ok_or_else(|| err("missing `<index>.`".into()))?;
            if idx.trim().parse::<usize>().ok() != Some(n) {
                return Err(err(format!("expected index {n}, found `{}`", idx.trim())));
            }
            let (formula, rule) = rest.rsplit_once(';').ok_or_else(|| err("missing `; <rule>`".into()))?;
            let formula = parse(formula.trim()).map_err(|e| err(e.to_string()))?;
            let mut words = rule.split_whitespace();
            let name = words.next().ok_or_else(|| err("missing rule".into()))?;
            let mut arg = || -> Result<usize, ProofError> {
                let w = words.next().ok_or_else(|| err(format!("`{name}` needs premise indices")))?;
                match w.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(err(format!("bad premise index `{w}`"))),
                }
            };
            let rule = match name {
                "Taut" => Rule::Taut,
                "L1" => Rule::L1,
                "L2" => Rule::L2,
                "L3" => Rule::L3,
                "J1" => Rule::J1,
                "J2" => Rule::J2,
                "J3" => Rule::J3,
                "J4" => Rule::J4,
                "J5" => Rule::J5,
                "M" => Rule::M,
                "MP" => {
                    let a = arg()?;
                    Rule::ModusPonens(a, arg()?)
                }
                "Nec" => Rule::Necessitation(arg()?),
                other => return Err(err(format!("unknown rule `{other}`"))),
            };
            lines.push(ProofLine { formula, rule });
        }
        Ok(Proof { lines })
    }
}
