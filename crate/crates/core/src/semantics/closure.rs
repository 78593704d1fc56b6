use serde::Serialize;

use super::frame::{SemanticsError, VeltmanFrame};

/// Bit-set frame over worlds `0..n` with `n <= 128`.
///
/// `r[x]` holds the R-successors of `x`; `s[x][y]` holds the `z` with
/// `y S_x z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexedFrame {
    pub n: usize,
    pub r: Vec<u128>,
    pub s: Vec<Vec<u128>>,
}

pub const MAX_WORLDS: usize = 128;

pub(crate) fn bits(set: u128) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

pub(crate) fn bit(i: usize) -> u128 {
    1u128 << i
}

/// One local violation of the frame conditions, with its tuple
/// layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum Imperfection {
    /// `a R b R c`, not `a R c`.
    #[serde(rename = "0")]
    Transitivity { a: usize, b: usize, c: usize },
    /// `a R b`, not `b S_a b`.
    #[serde(rename = "1")]
    Reflexivity { a: usize, b: usize },
    /// `b S_a c S_a d`, not `b S_a d`.
    #[serde(rename = "2")]
    STransitivity { a: usize, b: usize, c: usize, d: usize },
    /// `a R b R c`, not `b S_a c`.
    #[serde(rename = "3")]
    RInS { a: usize, b: usize, c: usize },
    /// `b S_a c R d`, not `b R d`.
    #[serde(rename = "4")]
    Montagna { a: usize, b: usize, c: usize, d: usize },
}

impl Imperfection {
    pub fn kind(&self) -> u8 {
        match self {
            Imperfection::Transitivity { .. } => 0,
            Imperfection::Reflexivity { .. } => 1,
            Imperfection::STransitivity { .. } => 2,
            Imperfection::RInS { .. } => 3,
            Imperfection::Montagna { .. } => 4,
        }
    }
}

impl IndexedFrame {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds");
        IndexedFrame {
            n,
            r: vec![0; n],
            s: vec![vec![0; n]; n],
        }
    }

    pub fn add_world(&mut self) -> usize {
        assert!(self.n < MAX_WORLDS, "at most {MAX_WORLDS} worlds");
        self.n += 1;
        self.r.push(0);
        for row in &mut self.s {
            row.push(0);
        }
        self.s.push(vec![0; self.n]);
        self.n - 1
    }

    pub fn has_r(&self, x: usize, y: usize) -> bool {
        self.r[x] & bit(y) != 0
    }

    pub fn has_s(&self, x: usize, y: usize, z: usize) -> bool {
        self.s[x][y] & bit(z) != 0
    }

    pub fn add_r(&mut self, x: usize, y: usize) {
        self.r[x] |= bit(y);
    }

    pub fn add_s(&mut self, x: usize, y: usize, z: usize) {
        self.s[x][y] |= bit(z);
    }

    pub fn r_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| bits(self.r[x]).map(move |y| (x, y)))
    }

    pub fn s_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| {
            (0..self.n).flat_map(move |y| bits(self.s[x][y]).map(move |z| (x, y, z)))
        })
    }

    pub fn predecessors(&self, y: usize) -> u128 {
        (0..self.n)
            .filter(|&x| self.has_r(x, y))
            .fold(0, |acc, x| acc | bit(x))
    }

    /// Transitive closure of R.
    pub fn r_plus(&self) -> Vec<u128> {
        transitive(&self.r)
    }

    /// R (transitively closed) has no cycles.
    pub fn r_well_founded(&self) -> bool {
        let plus = self.r_plus();
        (0..self.n).all(|x| plus[x] & bit(x) == 0)
    }

    /// `R^tr ; S^tr` has no cycles, where S is the union of all `S_w`.
    pub fn rs_well_founded(&self) -> bool {
        let mut s_union = vec![0u128; self.n];
        for w in 0..self.n {
            for y in 0..self.n {
                s_union[y] |= self.s[w][y];
            }
        }
        let s_tr = transitive(&s_union);
        let r_tr = self.r_plus();
        let comp: Vec<u128> = (0..self.n)
            .map(|a| bits(r_tr[a]).fold(0, |acc, b| acc | s_tr[b]))
            .collect();
        let comp_tr = transitive(&comp);
        (0..self.n).all(|a| comp_tr[a] & bit(a) == 0)
    }

    /// Every S triple projects into R.
    pub fn s_inside_r(&self) -> bool {
        self.s_triples()
            .all(|(x, y, z)| self.has_r(x, y) && self.has_r(x, z))
    }

    /// All imperfections, ordered by kind and then by tuple.
    pub fn imperfections(&self, ilm: bool) -> Vec<Imperfection> {
        let mut out = Vec::new();
        let n = self.n;
        for a in 0..n {
            for b in bits(self.r[a]) {
                for c in bits(self.r[b] & !self.r[a]) {
                    out.push(Imperfection::Transitivity { a, b, c });
                }
            }
        }
        for a in 0..n {
            for b in bits(self.r[a]) {
                if !self.has_s(a, b, b) {
                    out.push(Imperfection::Reflexivity { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in bits(self.s[a][b]) {
                    for d in bits(self.s[a][c] & !self.s[a][b]) {
                        out.push(Imperfection::STransitivity { a, b, c, d });
                    }
                }
            }
        }
        for a in 0..n {
            for b in bits(self.r[a]) {
                for c in bits(self.r[b] & !self.s[a][b]) {
                    out.push(Imperfection::RInS { a, b, c });
                }
            }
        }
        if ilm {
            for a in 0..n {
                for b in 0..n {
                    for c in bits(self.s[a][b]) {
                        for d in bits(self.r[c] & !self.r[b]) {
                            out.push(Imperfection::Montagna { a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }

    /// Remove one imperfection by adding the missing relation.
    pub fn repair(&mut self, imp: Imperfection) {
        match imp {
            Imperfection::Transitivity { a, c, .. } => self.add_r(a, c),
            Imperfection::Reflexivity { a, b } => self.add_s(a, b, b),
            Imperfection::STransitivity { a, b, d, .. } => self.add_s(a, b, d),
            Imperfection::RInS { a, b, c } => self.add_s(a, b, c),
            Imperfection::Montagna { b, d, .. } => self.add_r(b, d),
        }
    }

    /// One closure step: repair the first imperfection, if any.
    pub fn close_step(&mut self, ilm: bool) -> Option<Imperfection> {
        let first = self.imperfections(ilm).into_iter().next()?;
        self.repair(first);
        Some(first)
    }

    /// The least extension without imperfections.
    pub fn close(&mut self, ilm: bool) {
        let n = self.n;
        loop {
            self.r = transitive(&self.r);
            for x in 0..n {
                for y in bits(self.r[x]) {
                    self.s[x][y] |= bit(y) | self.r[y];
                }
                let closed = transitive(&self.s[x]);
                self.s[x] = closed;
            }
            if !ilm {
                return;
            }
            let mut changed = false;
            for x in 0..n {
                for y in bits(self.r[x]) {
                    let grown = bits(self.s[x][y]).fold(self.r[y], |acc, z| acc | self.r[z]);
                    if grown != self.r[y] {
                        self.r[y] = grown;
                        changed = true;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn depth(&self) -> usize {
        let plus = self.r_plus();
        let mut memo = vec![None; self.n];
        (0..self.n)
            .map(|x| longest(&plus, x, &mut memo))
            .max()
            .unwrap_or(0)
    }

    pub fn from_frame(frame: &VeltmanFrame) -> Result<Self, SemanticsError> {
        if frame.worlds.len() > MAX_WORLDS {
            return Err(SemanticsError::TooLarge(frame.worlds.len()));
        }
        let idx = frame.index()?;
        let mut out = IndexedFrame::new(frame.worlds.len());
        for (a, b) in &frame.r {
            out.add_r(idx[a.as_str()], idx[b.as_str()]);
        }
        for (x, y, z) in &frame.s {
            out.add_s(idx[x.as_str()], idx[y.as_str()], idx[z.as_str()]);
        }
        Ok(out)
    }

    pub fn to_frame(&self, names: &[String]) -> VeltmanFrame {
        VeltmanFrame {
            worlds: names.to_vec(),
            r: self
                .r_pairs()
                .map(|(a, b)| (names[a].clone(), names[b].clone()))
                .collect(),
            s: self
                .s_triples()
                .map(|(x, y, z)| (names[x].clone(), names[y].clone(), names[z].clone()))
                .collect(),
        }
    }
}

fn longest(plus: &[u128], x: usize, memo: &mut Vec<Option<usize>>) -> usize {
    if let Some(d) = memo[x] {
        return d;
    }
    let d = bits(plus[x])
        .map(|y| 1 + longest(plus, y, memo))
        .max()
        .unwrap_or(0);
    memo[x] = Some(d);
    d
}

/// Transitive closure of a relation given as successor bit-sets.
pub(crate) fn transitive(rel: &[u128]) -> Vec<u128> {
    let mut out = rel.to_vec();
    for k in 0..out.len() {
        let row_k = out[k];
        for row in out.iter_mut() {
            if *row & bit(k) != 0 {
                *row |= row_k;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> IndexedFrame {
        let mut f = IndexedFrame::new(3);
        f.add_r(0, 1);
        f.add_r(1, 2);
        f
    }

    #[test]
    fn chain_imperfections() {
        let imps = chain().imperfections(false);
        assert!(imps.contains(&Imperfection::Transitivity { a: 0, b: 1, c: 2 }));
        assert!(imps.contains(&Imperfection::Reflexivity { a: 0, b: 1 }));
        assert!(imps.contains(&Imperfection::Reflexivity { a: 1, b: 2 }));
        assert!(imps.contains(&Imperfection::RInS { a: 0, b: 1, c: 2 }));
    }

    #[test]
    fn chain_closure() {
        let mut f = chain();
        f.close(false);
        assert!(f.has_r(0, 2));
        assert!(f.has_s(0, 1, 1) && f.has_s(0, 2, 2) && f.has_s(1, 2, 2));
        assert!(f.has_s(0, 1, 2));
        assert!(f.imperfections(true).is_empty());
        assert_eq!(f.depth(), 2);
    }

    #[test]
    fn montagna_edge_added_only_for_ilm() {
        let mut f = IndexedFrame::new(4);
        for (x, y) in [(0, 1), (0, 2), (0, 3), (2, 3)] {
            f.add_r(x, y);
        }
        f.add_s(0, 1, 2);
        assert!(f
            .imperfections(true)
            .contains(&Imperfection::Montagna { a: 0, b: 1, c: 2, d: 3 }));
        assert!(!f
            .imperfections(false)
            .iter()
            .any(|i| i.kind() == 4));
        let mut il = f.clone();
        il.close(false);
        assert!(!il.has_r(1, 3));
        f.close(true);
        assert!(f.has_r(1, 3));
    }

    #[test]
    fn stepwise_closure_matches_fast_closure() {
        let mut f = IndexedFrame::new(5);
        for (x, y) in [(0, 1), (0, 2), (1, 3), (2, 4)] {
            f.add_r(x, y);
        }
        f.add_s(0, 1, 2);
        for ilm in [false, true] {
            let mut fast = f.clone();
            fast.close(ilm);
            let mut slow = f.clone();
            while slow.close_step(ilm).is_some() {}
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn depth_conventions() {
        assert_eq!(IndexedFrame::new(3).depth(), 0);
        let mut f = IndexedFrame::new(2);
        f.add_r(0, 1);
        assert_eq!(f.depth(), 1);
    }
}
