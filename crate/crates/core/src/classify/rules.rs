use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{and3, or3, Query};
use crate::decide::Budget;
use crate::syntax::Formula;

/// The seven admissible rules of ILM, numbered as usual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdmissibleRule {
    /// `|- []A` iff `|- A`.
    I,
    /// `|- []A | []B` iff `|- []A` or `|- []B`.
    Ii,
    /// `|- A |> B` iff `|- A -> B | <>B`.
    Iii,
    /// `|- A |> B` iff `|- <>A -> <>B`.
    Iv,
    /// `|- /\<>A_i -> A |> B` iff `|- A |> B`, when no `~A_i` is derivable.
    V,
    /// `|- A | <>A` iff `|- []bot -> A`.
    Vi,
    /// `|- top |> A` iff `|- []bot -> A`.
    Vii,
}

impl AdmissibleRule {
    pub const ALL: [AdmissibleRule; 7] = [
        AdmissibleRule::I,
        AdmissibleRule::Ii,
        AdmissibleRule::Iii,
        AdmissibleRule::Iv,
        AdmissibleRule::V,
        AdmissibleRule::Vi,
        AdmissibleRule::Vii,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdmissibleRule::I => "i",
            AdmissibleRule::Ii => "ii",
            AdmissibleRule::Iii => "iii",
            AdmissibleRule::Iv => "iv",
            AdmissibleRule::V => "v",
            AdmissibleRule::Vi => "vi",
            AdmissibleRule::Vii => "vii",
        }
    }

    /// Number of formulas an instance takes; `None` for rule (v), which
    /// takes at least two (the `A_i` followed by `A` and `B`).
    pub fn arity(self) -> Option<usize> {
        match self {
            AdmissibleRule::I | AdmissibleRule::Vi | AdmissibleRule::Vii => Some(1),
            AdmissibleRule::V => None,
            _ => Some(2),
        }
    }
}

impl fmt::Display for AdmissibleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdmissibleRule {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, RuleError> {
        AdmissibleRule::ALL
            .into_iter()
            .find(|r| r.name() == s.to_ascii_lowercase())
            .ok_or_else(|| RuleError::UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("rule ({rule}) takes {expected} formulas, got {got}")]
    Arity { rule: AdmissibleRule, expected: String, got: usize },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

/// One side of a rule: a single query, or for the right side of (ii) the
/// disjunction of two.
#[derive(Clone, Debug)]
pub struct Side {
    pub queries: Vec<Query>,
    pub holds: Option<bool>,
}

impl Side {
    fn one(q: Query) -> Side {
        Side { holds: q.holds(), queries: vec![q] }
    }

    fn any(qs: Vec<Query>) -> Side {
        Side { holds: or3(qs.iter().map(Query::holds)), queries: qs }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "queries": self.queries.iter().map(Query::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RuleCheck {
    pub rule: AdmissibleRule,
    pub instance: Vec<Formula>,
    /// For (v): the queries `~A_i`; the instance is outside the rule's
    /// scope when one of them is derivable.
    pub side_conditions: Vec<Query>,
    pub lhs: Side,
    pub rhs: Side,
    /// `None` when a side is undecided or a side condition fails or is
    /// undecided.
    pub agree: Option<bool>,
}

impl RuleCheck {
    pub fn applicable(&self) -> Option<bool> {
        and3(self.side_conditions.iter().map(|q| q.holds().map(|b| !b)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.name(),
            "instance": self.instance.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "applicable": self.applicable(),
            "side_conditions": self.side_conditions.iter().map(Query::to_json).collect::<Vec<_>>(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "agree": self.agree,
        })
    }
}

/// Decides both sides of `rule` on `instance`.
pub fn check_rule(
    rule: AdmissibleRule,
    instance: &[Formula],
    budget: &Budget,
) -> Result<RuleCheck, RuleError> {
    let arity_ok = match rule.arity() {
        Some(n) => instance.len() == n,
        None => instance.len() >= 2,
    };
    if !arity_ok {
        return Err(RuleError::Arity {
            rule,
            expected: rule.arity().map_or("at least 2".into(), |n| n.to_string()),
            got: instance.len(),
        });
    }
    use Formula as F;
    let q = |f: Formula| Query::run(f, budget);
    let a = instance[0].clone();
    let b = instance.get(1).cloned().unwrap_or(F::Bot);
    let boxbot_to = |a: &F| F::implies(F::boxed(F::Bot), a.clone());
    let mut side_conditions = Vec::new();
    let (lhs, rhs) = match rule {
        AdmissibleRule::I => (Side::one(q(F::boxed(a.clone()))), Side::one(q(a))),
        AdmissibleRule::Ii => (
            Side::one(q(F::or(F::boxed(a.clone()), F::boxed(b.clone())))),
            Side::any(vec![q(F::boxed(a)), q(F::boxed(b))]),
        ),
        AdmissibleRule::Iii => (
            Side::one(q(F::rhd(a.clone(), b.clone()))),
            Side::one(q(F::implies(a, F::or(b.clone(), F::diamond(b))))),
        ),
        AdmissibleRule::Iv => (
            Side::one(q(F::rhd(a.clone(), b.clone()))),
            Side::one(q(F::implies(F::diamond(a), F::diamond(b)))),
        ),
        AdmissibleRule::V => {
            let n = instance.len();
            let (ais, ab) = instance.split_at(n - 2);
            side_conditions = ais.iter().map(|ai| q(F::not(ai.clone()))).collect();
            let rhd = F::rhd(ab[0].clone(), ab[1].clone());
            let diamonds = F::and_all(ais.iter().map(|ai| F::diamond(ai.clone())));
            (Side::one(q(F::implies(diamonds, rhd.clone()))), Side::one(q(rhd)))
        }
        AdmissibleRule::Vi => (
            Side::one(q(F::or(a.clone(), F::diamond(a.clone())))),
            Side::one(q(boxbot_to(&a))),
        ),
        AdmissibleRule::Vii => (
            Side::one(q(F::rhd(F::top(), a.clone()))),
            Side::one(q(boxbot_to(&a))),
        ),
    };
    let mut check = RuleCheck {
        rule,
        instance: instance.to_vec(),
        side_conditions,
        lhs,
        rhs,
        agree: None,
    };
    if check.applicable() == Some(true) {
        check.agree = match (check.lhs.holds, check.rhs.holds) {
            (Some(l), Some(r)) => Some(l == r),
            _ => None,
        };
    }
    Ok(check)
}
