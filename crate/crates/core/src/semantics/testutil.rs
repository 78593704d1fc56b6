use proptest::prelude::*;

use super::closure::IndexedFrame;
use super::frame::VeltmanModel;

pub(crate) fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Random closed frame: R edges only go upward in index order, S triples
/// are sampled inside R, then the IL (or ILM) closure is applied.
/// Under ILM, backward S steps can force R-cycles; such samples fall back
/// to upward S steps only.
pub(crate) fn arb_frame(max_worlds: usize, ilm: bool) -> impl Strategy<Value = IndexedFrame> {
    (1..=max_worlds).prop_flat_map(move |n| {
        (
            prop::collection::vec(any::<bool>(), n * n),
            prop::collection::vec(prop::bool::weighted(0.3), n * n * n),
        )
            .prop_map(move |(r_bits, s_bits)| {
                let mut f = IndexedFrame::new(n);
                for x in 0..n {
                    for y in x + 1..n {
                        if r_bits[x * n + y] {
                            f.add_r(x, y);
                        }
                    }
                }
                f.close(ilm);
                let base = f.clone();
                let with_s = |upward_only: bool| {
                    let mut g = base.clone();
                    for x in 0..n {
                        for y in 0..n {
                            for z in 0..n {
                                if s_bits[(x * n + y) * n + z]
                                    && g.has_r(x, y)
                                    && g.has_r(x, z)
                                    && (!upward_only || y <= z)
                                {
                                    g.add_s(x, y, z);
                                }
                            }
                        }
                    }
                    g.close(ilm);
                    g
                };
                let g = with_s(false);
                if g.r_well_founded() {
                    g
                } else {
                    with_s(true)
                }
            })
    })
}

pub(crate) fn arb_model(max_worlds: usize, ilm: bool) -> impl Strategy<Value = VeltmanModel> {
    arb_frame(max_worlds, ilm).prop_flat_map(|f| {
        let n = f.n;
        prop::collection::vec(any::<bool>(), 2 * n).prop_map(move |val| {
            let names = names(n);
            let mut m = VeltmanModel::new(f.to_frame(&names));
            for (i, w) in names.iter().enumerate() {
                if val[2 * i] {
                    m.set_true(w, "p");
                }
                if val[2 * i + 1] {
                    m.set_true(w, "q");
                }
            }
            m
        })
    })
}
