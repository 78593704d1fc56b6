use proptest::prelude::*;

use super::*;
use crate::syntax::render::tests::arb_formula;
use crate::syntax::{adequate_closure, parse};

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn space(seed: &[&str], logic: Logic) -> Arc<DSpace> {
    let seed: Vec<Formula> = seed.iter().map(|s| f(s)).collect();
    DSpace::new(adequate_closure(seed.iter()), logic).unwrap()
}

fn all(s: &Arc<DSpace>) -> Vec<DTheory> {
    enumerate_theories(s, &Constraints::default()).unwrap().collect()
}

fn with(s: &Arc<DSpace>, req: &[&str]) -> Vec<DTheory> {
    enumerate_theories(s, &Constraints::require(req.iter().map(|r| f(r))))
        .unwrap()
        .collect()
}

#[test]
fn single_atom_has_two_theories() {
    let s = space(&["p"], Logic::Ilm);
    let ts = all(&s);
    assert_eq!(ts.len(), 2);
    assert_eq!(ts[0].members(), vec![f("~p")]);
    assert_eq!(ts[1].members(), vec![f("p")]);
}

#[test]
fn required_box_leaves_body_free() {
    let s = space(&["[]p"], Logic::Gl);
    let ts = with(&s, &["[]p"]);
    assert_eq!(ts.len(), 2);
    assert!(ts.iter().all(|t| t.contains(&f("[]p"))));
    assert!(ts.iter().any(|t| t.contains(&f("p"))));
    assert!(ts.iter().any(|t| t.contains(&f("~p"))));
}

#[test]
fn contradictory_constraints_give_nothing() {
    let s = space(&["p"], Logic::Il);
    assert!(with(&s, &["p", "~p"]).is_empty());
    let c = Constraints {
        require: vec![f("p")],
        exclude: vec![f("p")],
    };
    assert_eq!(enumerate_theories(&s, &c).unwrap().count(), 0);
    assert!(enumerate_theories(&s, &Constraints::require([f("q")])).is_err());
}

#[test]
fn theories_are_complete_and_distinct() {
    let s = space(&["[](p -> q) |> <>p"], Logic::Ilm);
    let ts = all(&s);
    for t in &ts {
        for (i, m) in s.adequate().members().iter().enumerate() {
            assert_ne!(t.contains(m), t.contains_idx(s.neg_idx(i)));
        }
    }
    let mut seen = std::collections::HashSet::new();
    assert!(ts.iter().all(|t| seen.insert(t.assignment())));
}

#[test]
fn saturation_removes_axiom_violations() {
    let s = space(&["[]([]p -> p) -> []p"], Logic::Gl);
    assert!(with(&s, &["~([]([]p -> p) -> []p)"]).is_empty());
    let s = space(&["p |> q -> (p & []r) |> (q & []r)"], Logic::Ilm);
    assert!(with(&s, &["~(p |> q -> (p & []r) |> (q & []r))"]).is_empty());
    let s = space(&["p |> q -> (p & []r) |> (q & []r)"], Logic::Il);
    assert!(!with(&s, &["~(p |> q -> (p & []r) |> (q & []r))"]).is_empty());
}

#[test]
fn successor_examples() {
    let s = space(&["[]p"], Logic::Gl);
    let g = &with(&s, &["[]p"])[0];
    let d_good = &with(&s, &["p", "[]p"])[0];
    let d_bad = &with(&s, &["~p"])[0];
    assert!(succ(g, d_good).unwrap());
    assert!(!succ(g, d_bad).unwrap());
    let boxless = &with(&s, &["~[]p"])[0];
    assert!(all(&s).iter().all(|d| succ(boxless, d).unwrap()));
}

#[test]
fn mismatched_spaces_are_rejected() {
    let a = all(&space(&["p"], Logic::Il));
    let b = all(&space(&["q"], Logic::Il));
    assert_eq!(succ(&a[0], &b[0]), Err(TheoryError::Mismatch));
}

#[test]
fn critical_successor_examples() {
    let s = DSpace::new(engine_adequate_set([&f("p |> q")]), Logic::Il).unwrap();
    let g = &with(&s, &["p |> q"])[0];
    for d in with(&s, &["p"]) {
        assert!(!crit_succ(g, &f("q"), &d).unwrap());
    }
    let ok: Vec<DTheory> = with(&s, &["~p", "[]~p", "~q", "[]~q"])
        .into_iter()
        .filter(|d| succ(g, d).unwrap())
        .collect();
    assert!(!ok.is_empty());
    assert!(ok.iter().all(|d| crit_succ(g, &f("q"), d).unwrap()));
}

#[test]
fn box_inclusion_examples() {
    let s = space(&["[]p"], Logic::Gl);
    let ts = all(&s);
    for t in &ts {
        assert!(box_incl(t, t).unwrap());
    }
    let g = &with(&s, &["[]p"])[0];
    let d = &with(&s, &["~[]p"])[0];
    assert!(!box_incl(g, d).unwrap());
    assert!(ts.iter().all(|t| box_incl(d, t).unwrap()));
}

#[test]
fn problem_witnesses() {
    let s = DSpace::new(engine_adequate_set([&f("p |> q")]), Logic::Il).unwrap();
    let nf = f("~(p |> q)");
    for g in with(&s, &["~(p |> q)"]) {
        let ws: Vec<DTheory> = extend_problem(&g, &nf).unwrap().collect();
        assert!(!ws.is_empty());
        for d in ws {
            assert!(d.contains(&f("p")) && d.contains(&f("~q")) && d.contains(&f("[]~p")));
            assert!(crit_succ(&g, &f("q"), &d).unwrap());
        }
    }

    let s = DSpace::new(engine_adequate_set([&f("p |> bot")]), Logic::Il).unwrap();
    let nf = f("~(p |> bot)");
    for g in with(&s, &["~(p |> bot)"]) {
        for d in extend_problem(&g, &nf).unwrap() {
            assert!(d.contains(&f("p")));
            assert!(succ(&g, &d).unwrap());
        }
    }
}

#[test]
fn boxed_negation_blocks_the_problem() {
    let s = DSpace::new(engine_adequate_set([&f("[]~p & ~(p |> q)")]), Logic::Il).unwrap();
    // Saturation already rules the combination out.
    assert!(with(&s, &["[]~p", "~(p |> q)"]).is_empty());
    // And every successor of a theory with []~p contains ~p.
    for g in with(&s, &["[]~p"]) {
        for d in all(&s).iter().filter(|d| succ(&g, d).unwrap()) {
            assert!(!d.contains(&f("p")));
        }
    }
}

#[test]
fn deficiency_exits() {
    let s = DSpace::new(engine_adequate_set([&f("p |> q")]), Logic::Ilm).unwrap();
    let cd = f("p |> q");
    for g in with(&s, &["p |> q"]) {
        for d in with(&s, &["p"]).into_iter().filter(|d| succ(&g, d).unwrap()) {
            let exits: Vec<DTheory> = extend_deficiency_ilm(&g, &Formula::Bot, &d, &cd).unwrap().collect();
            assert!(exits.iter().all(|e| e.contains(&f("q"))));
            assert!(exits.iter().all(|e| box_incl(&d, e).unwrap()));
        }
    }

    let s = DSpace::new(engine_adequate_set([&f("(p |> q) & []r")]), Logic::Ilm).unwrap();
    let mut seen = 0;
    for g in with(&s, &["p |> q"]) {
        for d in with(&s, &["p", "[]r"]).into_iter().filter(|d| succ(&g, d).unwrap()) {
            for e in extend_deficiency_ilm(&g, &Formula::Bot, &d, &cd).unwrap() {
                assert!(e.contains(&f("[]r")));
                seen += 1;
            }
        }
    }
    assert!(seen > 0);

    // q-criticality demands ~q, the exit demands q.
    let s = DSpace::new(engine_adequate_set([&f("(p |> q) & ~(r |> q)")]), Logic::Ilm).unwrap();
    for g in with(&s, &["p |> q"]) {
        for d in with(&s, &["p"]) {
            assert_eq!(extend_deficiency_ilm(&g, &f("q"), &d, &cd).unwrap().count(), 0);
        }
    }
}

#[test]
fn common_predecessor_examples() {
    let s = space(&["p", "[]p", "[]~p"], Logic::Gl);
    let d0 = &with(&s, &["p"])[0];
    let d1 = &with(&s, &["~p"])[0];
    let gs: Vec<DTheory> = common_predecessor(d0, d1).unwrap().collect();
    assert!(!gs.is_empty());
    for g in &gs {
        assert!(g.contains(&f("~[]p")) && g.contains(&f("~[]~p")));
        assert!(succ(g, d0).unwrap() && succ(g, d1).unwrap());
    }

    for d in all(&s) {
        let expected: Vec<DTheory> = all(&s).into_iter().filter(|g| succ(g, &d).unwrap()).collect();
        let got: Vec<DTheory> = common_predecessor(&d, &d).unwrap().collect();
        assert_eq!(got, expected);
    }

    let s = space(&["p & q"], Logic::Gl);
    let ts = all(&s);
    assert_eq!(common_predecessor(&ts[0], &ts[1]).unwrap().count(), ts.len());
}

fn small_space() -> impl Strategy<Value = Arc<DSpace>> {
    (arb_formula(), prop::sample::select(vec![Logic::Gl, Logic::Il, Logic::Ilm]))
        .prop_filter_map("small", |(f, logic)| {
            let d = engine_adequate_set([&f]);
            let s = DSpace::new(d, logic).ok()?;
            (s.modal_atom_count() <= 7).then_some(s)
        })
}

fn labels(s: &DSpace) -> Vec<Formula> {
    let mut out = vec![Formula::Bot];
    for m in s.adequate().members() {
        if let Some((_, b)) = m.as_rhd() {
            out.push(b.clone());
        }
    }
    out.sort();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_brute_force(s in small_space()) {
        let got: Vec<u128> = all(&s).iter().map(|t| t.assignment()).collect();
        let mut want: Vec<u128> = (0u128..1 << s.modal_atom_count())
            .filter(|&a| s.satisfies_clauses(a))
            .collect();
        let mut sorted = got.clone();
        sorted.sort();
        want.sort();
        prop_assert_eq!(sorted, want);
    }

    #[test]
    fn relation_laws(s in small_space()) {
        let ts = all(&s);
        let ts = &ts[..ts.len().min(24)];
        for g in ts {
            for d in ts {
                let sd = succ(g, d).unwrap();
                prop_assert_eq!(crit_succ(g, &Formula::Bot, d).unwrap(), sd);
                for c in labels(&s) {
                    if crit_succ(g, &c, d).unwrap() {
                        prop_assert!(sd);
                        for e in ts {
                            if succ(d, e).unwrap() {
                                prop_assert!(crit_succ(g, &c, e).unwrap());
                            }
                        }
                    }
                }
                for e in ts {
                    if sd && succ(d, e).unwrap() {
                        prop_assert!(succ(g, e).unwrap());
                    }
                    if box_incl(g, d).unwrap() && box_incl(d, e).unwrap() {
                        prop_assert!(box_incl(g, e).unwrap());
                    }
                }
            }
            prop_assert!(box_incl(g, g).unwrap());
        }
    }

    #[test]
    fn extensions_meet_their_postconditions(s in small_space()) {
        let ts = all(&s);
        let ts = &ts[..ts.len().min(16)];
        for g in ts {
            for m in g.members() {
                if let Some((a, b)) = problem_parts(&m) {
                    if m.as_not().is_some_and(|x| x.as_rhd().is_some()) {
                        for d in extend_problem(g, &m).unwrap().take(8) {
                            prop_assert!(crit_succ(g, &b, &d).unwrap());
                            prop_assert!(d.contains(&a));
                        }
                    }
                }
                if let Some((c, target)) = m.as_rhd() {
                    for d in ts.iter().filter(|d| d.contains(c) && succ(g, d).unwrap()) {
                        for e in extend_deficiency_ilm(g, &Formula::Bot, d, &m).unwrap().take(8) {
                            prop_assert!(succ(g, &e).unwrap());
                            prop_assert!(e.contains(target));
                            prop_assert!(box_incl(d, &e).unwrap());
                        }
                    }
                }
            }
            for h in ts {
                for p in common_predecessor(g, h).unwrap().take(8) {
                    prop_assert!(succ(&p, g).unwrap() && succ(&p, h).unwrap());
                }
            }
        }
    }
}
