use super::*;
use crate::semantics::{forces, validate_ilm};
use crate::syntax::parse;

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn b() -> Budget {
    Budget::default()
}

#[test]
fn rule_examples() {
    let c = check_rule(AdmissibleRule::Iii, &[f("<>q"), f("q")], &b()).unwrap();
    assert_eq!((c.lhs.holds, c.rhs.holds, c.agree), (Some(true), Some(true), Some(true)));
    let c = check_rule(AdmissibleRule::Iii, &[f("p"), f("q")], &b()).unwrap();
    assert_eq!((c.lhs.holds, c.rhs.holds, c.agree), (Some(false), Some(false), Some(true)));
    let c = check_rule(AdmissibleRule::Vii, &[f("top")], &b()).unwrap();
    assert_eq!((c.lhs.holds, c.rhs.holds, c.agree), (Some(true), Some(true), Some(true)));
    assert!(matches!(
        check_rule(AdmissibleRule::Ii, &[f("p")], &b()),
        Err(RuleError::Arity { .. })
    ));
    let c = check_rule(AdmissibleRule::V, &[f("bot"), f("p"), f("q")], &b()).unwrap();
    assert_eq!(c.applicable(), Some(false));
    assert_eq!(c.agree, None);
}

#[test]
fn delta1_examples() {
    assert_eq!(classify_delta1(&f("top"), &b()).answer, Delta1::Top);
    assert_eq!(classify_delta1(&f("bot"), &b()).answer, Delta1::Bottom);
    let r = classify_delta1(&f("p"), &b());
    assert_eq!(r.answer, Delta1::No);
    assert_eq!(r.cross_check_agrees, Some(true));
}

#[test]
fn sigma1_examples() {
    let r = classify_sigma1(&f("[]p"), &b());
    assert_eq!(r.answer, Answer::Yes);
    assert_eq!(r.witness, Some(f("[]p")));
    for s in ["p & []p", "<>p"] {
        let r = classify_sigma1(&f(s), &b());
        assert_eq!(r.answer, Answer::No, "{s}");
        assert!(r.countermodel().is_some());
        assert!(r.witness.is_none());
    }
}

#[test]
fn sigma1_countermodels() {
    for s in ["p & []p", "p", "<>p"] {
        let phi = f(s);
        let c = sigma1_countermodel(&phi, &b()).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert!(validate_ilm(&c.model.frame).is_empty());
        assert!(forces(&c.model, &c.left, &phi).unwrap());
        assert!(forces(&c.model, &c.right, &Formula::not(phi.clone())).unwrap());
        assert!(c.model.frame.s.contains(&(c.root.clone(), c.left.clone(), c.right.clone())));
        assert!(forces(&c.model, &c.root, &Formula::not(c.reduction.clone())).unwrap());
    }
    assert!(matches!(sigma1_countermodel(&f("[]p"), &b()), Err(Sigma1Error::IsSigma1)));
}

#[test]
fn self_prover_examples() {
    assert!(is_self_prover(&f("[]p"), Logic::Gl, &b()).unwrap().is_derivable());
    assert!(is_self_prover(&f("p & []p"), Logic::Gl, &b()).unwrap().is_derivable());
    let v = is_self_prover(&f("p"), Logic::Gl, &b()).unwrap();
    assert_eq!(v.certificate().unwrap().model.frame.worlds.len(), 2);
}

#[test]
fn tsg_examples() {
    let r = is_tsg(&f("[][]p -> []p"), &b());
    assert_eq!(r.answer, Answer::Yes);
    assert_eq!(r.witness, Some(f("[]p")));
    assert_eq!(is_tsg(&f("p & []p"), &b()).answer, Answer::No);
    assert_eq!(is_tsg(&f("[]p"), &b()).answer, Answer::Yes);
}

#[test]
fn dnf_examples() {
    let d = canonical_modal_dnf(&f("[]p | (q & []r)"));
    assert_eq!(d.boxes, vec![f("p")]);
    assert_eq!(d.disjuncts, vec![TsgDisjunct { phi: vec![f("q")], a: f("r") }]);
    let d = canonical_modal_dnf(&f("[]p & []q"));
    assert_eq!(d.boxes, vec![f("p & q")]);
    assert!(d.disjuncts.is_empty());
    assert_eq!(canonical_modal_dnf(&f("bot")), TsgDecomposition::default());
}

#[test]
fn decomposition_checks() {
    let phi = f("[][]p -> []p");
    let r = check_tsg_decomposition(&phi, &canonical_modal_dnf(&phi), &b());
    assert_eq!(r.conditions_hold, Some(true));
    assert_eq!(r.conclusion.unwrap().holds(), Some(true));

    let r = check_tsg_decomposition(&f("[]p"), &canonical_modal_dnf(&f("[]p")), &b());
    assert_eq!(r.conditions_hold, Some(true));
    assert_eq!(r.conclusion.unwrap().holds(), Some(true));

    // q | (~q & []p) satisfies the first and third conditions, but
    // []p -> []p | q is derivable.
    let phi = f("[]p | q");
    let bad = TsgDecomposition {
        disjuncts: vec![
            TsgDisjunct { phi: vec![f("q")], a: f("top") },
            TsgDisjunct { phi: vec![f("~q")], a: f("p") },
        ],
        boxes: vec![],
        rejected: vec![],
    };
    let r = check_tsg_decomposition(&phi, &bad, &b());
    assert_eq!(r.equivalence.holds(), Some(true));
    assert_eq!(r.shapes, vec![true, true]);
    assert_eq!(r.irreducible[0].holds(), Some(false));
    assert_eq!(r.irreducible[1].holds(), Some(true));
    assert_eq!(r.conditions_hold, Some(false));
    assert!(r.conclusion.is_none());
}

#[test]
fn almost_loeb_examples() {
    let r = almost_loeb(&f("top"), &b());
    assert_eq!(r.witness, AlmostLoeb::BoxBot);
    assert_eq!(r.equivalence.unwrap().holds(), Some(true));
    let r = almost_loeb(&f("bot"), &b());
    assert_eq!(r.witness, AlmostLoeb::Bottom);
    assert_eq!(r.equivalence.unwrap().holds(), Some(true));
    assert_eq!(almost_loeb(&f("p"), &b()).witness, AlmostLoeb::None);
}

#[test]
fn dagger_examples() {
    for s in ["top", "p", "[][]p -> []p"] {
        let r = dagger_check(&f(s), &b());
        assert_eq!(r.biconditional, Some(true), "{s}");
    }
    let r = dagger_check(&f("p"), &b());
    assert_eq!(r.box_f.answer, Answer::No);
    assert_eq!(r.dagger, Some(true));
}

#[test]
fn box_disjunction_shape() {
    assert!(is_box_disjunction(&f("[]p | []q")));
    assert!(is_box_disjunction(&f("bot")));
    assert!(!is_box_disjunction(&f("p | []q")));
}
