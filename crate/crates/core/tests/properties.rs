//! Cross-module properties over random formulas.

use ilm::decide::{derivable, satisfiable, Budget, Logic, SatResult, Verdict};
use ilm::semantics::{forces, validate_il, validate_ilm};
use ilm::{parse, render, Formula, VeltmanModel};
use proptest::prelude::*;

fn arb_formula(rhd: bool) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        Just(Formula::top()),
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
    ];
    leaf.prop_recursive(3, 10, 2, move |inner| {
        let mut ops = vec![
            inner.clone().prop_map(Formula::not).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)).boxed(),
            inner.clone().prop_map(Formula::boxed).boxed(),
            inner.clone().prop_map(Formula::diamond).boxed(),
        ];
        if rhd {
            ops.push((inner.clone(), inner).prop_map(|(a, b)| Formula::rhd(a, b)).boxed());
        }
        prop::strategy::Union::new(ops)
    })
    .prop_filter("modal depth at most 2", |f| f.modal_depth() <= 2)
}

fn frame_ok(logic: Logic, m: &VeltmanModel) -> bool {
    match logic {
        Logic::Ilm => validate_ilm(&m.frame).is_empty(),
        _ => validate_il(&m.frame).is_empty(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rendering_round_trips(f in arb_formula(true)) {
        prop_assert_eq!(parse(&render(&f)).unwrap(), f);
    }

    #[test]
    fn refutations_are_certified(f in arb_formula(true), k in 0usize..2) {
        let logic = [Logic::Il, Logic::Ilm][k];
        if let Verdict::Refuted(c) = derivable(logic, &f, &Budget::default()).unwrap() {
            prop_assert!(frame_ok(logic, &c.model));
            prop_assert_eq!(forces(&c.model, &c.world, &f), Ok(false));
            let back = VeltmanModel::from_json(&c.model.to_json()).unwrap();
            prop_assert_eq!(back, c.model);
        }
    }

    #[test]
    fn models_force_their_formula(f in arb_formula(true)) {
        if let SatResult::Certificate(c) = satisfiable(Logic::Ilm, &f, &Budget::default()).unwrap() {
            prop_assert_eq!(forces(&c.model, &c.world, &f), Ok(true));
        }
    }

    /// GL ⊆ IL ⊆ ILM on ▷-free formulas, and IL ⊆ ILM in general.
    #[test]
    fn logics_are_nested(f in arb_formula(false), g in arb_formula(true)) {
        let b = Budget::default();
        let d = |l, f: &Formula| derivable(l, f, &b).unwrap();
        let (gl, il, ilm) = (d(Logic::Gl, &f), d(Logic::Il, &f), d(Logic::Ilm, &f));
        prop_assert!(!gl.is_unknown() && !il.is_unknown() && !ilm.is_unknown());
        // Both extensions are conservative over GL.
        prop_assert_eq!(gl.is_derivable(), il.is_derivable());
        prop_assert_eq!(il.is_derivable(), ilm.is_derivable());
        let (il, ilm) = (d(Logic::Il, &g), d(Logic::Ilm, &g));
        prop_assert!(!il.is_derivable() || !ilm.is_refuted());
    }

    #[test]
    fn derivable_iff_negation_unsatisfiable(f in arb_formula(true)) {
        let b = Budget::default();
        let v = derivable(Logic::Ilm, &f, &b).unwrap();
        let s = satisfiable(Logic::Ilm, &Formula::not(f), &b).unwrap();
        match s {
            SatResult::Unsat => prop_assert!(v.is_derivable()),
            SatResult::Certificate(_) => prop_assert!(v.is_refuted()),
            SatResult::Exhausted(_) => prop_assert!(v.is_unknown()),
        }
    }
}
