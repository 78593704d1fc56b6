//! The engine against exhaustive validity on small frames.

use ilm::corpus::{il_frames, Generator, Shape};
use ilm::decide::{derivable, Budget, Logic};
use ilm::semantics::{frame_validates, validate_ilm};

/// A derivable formula is valid on every frame of the logic; the converse
/// needs frames larger than three worlds and is not checked.
fn sound_on_small_frames(logic: Logic, seed: u64) {
    let mut frames = il_frames(3);
    if logic == Logic::Ilm {
        frames.retain(|f| validate_ilm(f).is_empty());
    }
    let mut gen = Generator::new(seed);
    let shape = Shape::new(&["p", "q"], 3, 8, true);
    let mut proved = 0;
    for _ in 0..120 {
        let f = gen.formula(&shape);
        let v = derivable(logic, &f, &Budget::default()).unwrap();
        assert!(!v.is_unknown(), "{f}");
        if v.is_derivable() {
            proved += 1;
            for fr in &frames {
                assert!(frame_validates(fr, &f).unwrap(), "{f} fails on {fr:?}");
            }
        }
    }
    assert!(proved > 0);
}

#[test]
fn il_theorems_hold_on_small_il_frames() {
    sound_on_small_frames(Logic::Il, 21);
}

#[test]
fn ilm_theorems_hold_on_small_ilm_frames() {
    sound_on_small_frames(Logic::Ilm, 22);
}

#[test]
fn small_frame_counts() {
    let il = il_frames(3);
    let ilm = il.iter().filter(|f| validate_ilm(f).is_empty()).count();
    // Every frame with at most two worlds satisfies the ILM condition.
    assert!(il_frames(2).iter().all(|f| validate_ilm(f).is_empty()));
    assert!(ilm < il.len());
}

/// The separating principle: M fails on some IL-frame, holds on every
/// ILM-frame.
#[test]
fn montagna_separates_il_from_ilm() {
    let m = ilm::parse("p |> q -> (p & []r) |> (q & []r)").unwrap();
    let b = Budget::default();
    assert!(derivable(Logic::Il, &m, &b).unwrap().is_refuted());
    assert!(derivable(Logic::Ilm, &m, &b).unwrap().is_derivable());
}
