//! Brute-force orbit count on matrices of signs.
//!
//! A state records, for every leg `i` and layer `j`, the number `q[i][j]` of
//! positive basic slices. The first row `(q[0][0], q[1][0], q[2][0])` drives
//! the moves:
//!
//! * A: `(1, 0, t) -> (0, 1, t + 1)`, raising `q[0][1]`;
//! * B: `(1, 0, t) -> (0, 1, t - 1)`, lowering `q[1][1]`;
//! * C: `(1, 1, 0) -> (0, 0, a0 - 1)` on leg three, raising `q[2][1]`.
//!
//! A missing layer-one coordinate absorbs its increment. Entries with
//! `j >= 2` never change. Orbits are the connected components of the
//! undirected move graph.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seifert::SeifertData;

pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignState {
    pub q: [Vec<u64>; 3],
}

impl SignState {
    pub fn first_row(&self) -> (u64, u64, u64) {
        (self.q[0][0], self.q[1][0], self.q[2][0])
    }

    pub fn is_mixed(&self) -> bool {
        self.q[0][0] != self.q[1][0]
    }
}

impl fmt::Display for SignState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, leg) in self.q.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            let row: Vec<String> = leg.iter().map(u64::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Layer bounds of an instance, small enough to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    bounds: [Vec<u64>; 3],
    strides: [Vec<usize>; 3],
    size: usize,
}

impl StateSpace {
    pub fn new(m: &SeifertData, cap: u128) -> Result<Self> {
        let size: BigUint = m
            .legs
            .iter()
            .flat_map(|l| l.layer_bounds.iter())
            .map(|b| (b + BigInt::from(1)).to_biguint().unwrap())
            .product();
        let fits = size.to_u128().filter(|s| *s <= cap && *s <= usize::MAX as u128);
        let Some(size) = fits else {
            return Err(Error::Resource { size: size.to_u128().unwrap_or(u128::MAX), cap });
        };
        let bounds = m.legs.each_ref().map(|l| l.layer_bounds.iter().map(|b| b.to_u64().unwrap()).collect::<Vec<_>>());
        let mut stride = 1usize;
        let strides = bounds.each_ref().map(|leg| {
            leg.iter()
                .map(|b| {
                    let s = stride;
                    stride *= *b as usize + 1;
                    s
                })
                .collect()
        });
        Ok(StateSpace { bounds, strides, size: size as usize })
    }

    /// Size of the product space, admissible or not.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bounds(&self) -> &[Vec<u64>; 3] {
        &self.bounds
    }

    pub fn decode(&self, mut index: usize) -> SignState {
        let q = self.bounds.each_ref().map(|leg| {
            leg.iter()
                .map(|b| {
                    let r = (*b + 1) as usize;
                    let d = index % r;
                    index /= r;
                    d as u64
                })
                .collect()
        });
        SignState { q }
    }

    pub fn encode(&self, s: &SignState) -> usize {
        (0..3).flat_map(|i| (0..self.bounds[i].len()).map(move |j| (i, j))).map(|(i, j)| s.q[i][j] as usize * self.strides[i][j]).sum()
    }

    /// Fixed-width key: every entry padded to the width of its bound, legs
    /// separated by `|`. Distinct states of one instance have distinct keys.
    pub fn key(&self, s: &SignState) -> String {
        let legs: Vec<String> = (0..3)
            .map(|i| {
                self.bounds[i]
                    .iter()
                    .zip(&s.q[i])
                    .map(|(b, v)| format!("{v:0w$}", w = b.to_string().len()))
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect();
        legs.join("|")
    }

    fn in_bounds(&self, s: &SignState) -> bool {
        (0..3).all(|i| s.q[i].len() == self.bounds[i].len() && s.q[i].iter().zip(&self.bounds[i]).all(|(v, b)| v <= b))
    }

    pub fn is_admissible(&self, s: &SignState) -> bool {
        if !self.in_bounds(s) {
            return false;
        }
        match s.first_row() {
            (1, 1, t) => t == 0,
            (0, 0, t) => t == self.bounds[2][0],
            _ => true,
        }
    }

    /// Shift `q[i][1]` by `delta`; a missing coordinate absorbs the shift.
    fn shift_layer_one(&self, s: &mut SignState, i: usize, delta: i64) -> bool {
        match s.q[i].get_mut(1) {
            None => true,
            Some(v) => match v.checked_add_signed(delta) {
                Some(n) if n <= self.bounds[i][1] => {
                    *v = n;
                    true
                }
                _ => false,
            },
        }
    }

    fn with_row(&self, s: &SignState, row: (u64, u64, i64), shift: (usize, i64)) -> Option<SignState> {
        if row.2 < 0 {
            return None;
        }
        let mut t = s.clone();
        t.q[0][0] = row.0;
        t.q[1][0] = row.1;
        t.q[2][0] = row.2 as u64;
        if !self.shift_layer_one(&mut t, shift.0, shift.1) {
            return None;
        }
        self.is_admissible(&t).then_some(t)
    }

    /// Targets of the moves A, B, C applied forward.
    pub fn forward_moves(&self, s: &SignState) -> Vec<SignState> {
        let (x, y, t) = s.first_row();
        let t = t as i64;
        let top = self.bounds[2][0] as i64;
        let mut out = Vec::new();
        match (x, y) {
            (1, 0) => {
                out.extend(self.with_row(s, (0, 1, t + 1), (0, 1)));
                out.extend(self.with_row(s, (0, 1, t - 1), (1, -1)));
            }
            (1, 1) if t == 0 => out.extend(self.with_row(s, (0, 0, top), (2, 1))),
            _ => {}
        }
        out
    }

    /// Targets of the inverse moves.
    pub fn inverse_moves(&self, s: &SignState) -> Vec<SignState> {
        let (x, y, t) = s.first_row();
        let t = t as i64;
        let top = self.bounds[2][0] as i64;
        let mut out = Vec::new();
        match (x, y) {
            (0, 1) => {
                out.extend(self.with_row(s, (1, 0, t - 1), (0, -1)));
                out.extend(self.with_row(s, (1, 0, t + 1), (1, 1)));
            }
            (0, 0) if t == top => out.extend(self.with_row(s, (1, 1, 0), (2, -1))),
            _ => {}
        }
        out
    }

    pub fn admissible_indices(&self) -> impl ParallelIterator<Item = usize> + '_ {
        (0..self.size).into_par_iter().filter(move |&i| self.is_admissible(&self.decode(i)))
    }
}

pub fn enumerate_states(m: &SeifertData) -> Result<BTreeSet<SignState>> {
    let space = StateSpace::new(m, DEFAULT_CAP)?;
    Ok(space.admissible_indices().map(|i| space.decode(i)).collect::<Vec<_>>().into_iter().collect())
}

/// All states one move (or inverse move) away from `s`.
pub fn neighbors(s: &SignState, m: &SeifertData) -> Result<BTreeSet<SignState>> {
    let space = StateSpace::new(m, u128::MAX)?;
    if !space.is_admissible(s) {
        return Err(crate::error::domain(format!("state {s} is not admissible for {}", m.label())));
    }
    Ok(space.forward_moves(s).into_iter().chain(space.inverse_moves(s)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCounts {
    /// Orbits whose first row has `q[0][0] != q[1][0]`.
    pub mixed: u64,
    pub equal: u64,
    pub states: u64,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

pub fn count_orbits(m: &SeifertData) -> Result<OrbitCounts> {
    count_orbits_with_cap(m, DEFAULT_CAP)
}

pub fn count_orbits_with_cap(m: &SeifertData, cap: u128) -> Result<OrbitCounts> {
    let space = StateSpace::new(m, cap)?;
    let admissible: Vec<usize> = space.admissible_indices().collect();
    let space = &space;
    let edges: Vec<(usize, usize, bool)> = admissible
        .par_iter()
        .flat_map_iter(|&i| {
            let s = space.decode(i);
            let mixed = s.is_mixed();
            space.forward_moves(&s).into_iter().map(move |t| (i, space.encode(&t), mixed == t.is_mixed()))
        })
        .collect();
    if let Some(&(a, b, _)) = edges.iter().find(|e| !e.2) {
        return Err(Error::Invariant(format!(
            "move joins {} and {}, crossing the mixed/equal partition",
            space.decode(a),
            space.decode(b)
        )));
    }
    let mut uf = UnionFind::new(space.size());
    for &(a, b, _) in &edges {
        uf.union(a, b);
    }
    let mut counts = OrbitCounts { mixed: 0, equal: 0, states: admissible.len() as u64 };
    for &i in &admissible {
        if uf.find(i) == i {
            if space.decode(i).is_mixed() {
                counts.mixed += 1;
            } else {
                counts.equal += 1;
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::parse_seifert;

    fn m(r1: &str, r2: &str, r3: &str) -> SeifertData {
        parse_seifert(&BigInt::from(-1), &r1.parse().unwrap(), &r2.parse().unwrap(), &r3.parse().unwrap()).unwrap()
    }

    fn st(a: &[u64], b: &[u64], c: &[u64]) -> SignState {
        SignState { q: [a.to_vec(), b.to_vec(), c.to_vec()] }
    }

    #[test]
    fn mp_state_counts() {
        assert_eq!(enumerate_states(&SeifertData::mp(2).unwrap()).unwrap().len(), 6);
        for p in 2..20 {
            assert_eq!(enumerate_states(&SeifertData::mp(p).unwrap()).unwrap().len() as u64, 2 * p + 2);
        }
    }

    #[test]
    fn mp_neighbours() {
        let mp = SeifertData::mp(5).unwrap();
        let n = neighbors(&st(&[1], &[0], &[2]), &mp).unwrap();
        assert_eq!(n, [st(&[0], &[1], &[3]), st(&[0], &[1], &[1])].into_iter().collect());
        let n = neighbors(&st(&[1], &[0], &[4]), &mp).unwrap();
        assert_eq!(n, [st(&[0], &[1], &[3])].into_iter().collect());
        let n = neighbors(&st(&[1], &[1], &[0]), &mp).unwrap();
        assert_eq!(n, [st(&[0], &[0], &[4])].into_iter().collect());
        assert!(neighbors(&st(&[1], &[1], &[1]), &mp).is_err());
    }

    #[test]
    fn layer_one_bound_blocks_move_a() {
        // -4/3 = [2, 2, 2] has a zero bound on layer one
        let x = m("3/4", "3/5", "2/5");
        let s = st(&[1, 0, 0], &[0, 1], &[0, 0]);
        let n = neighbors(&s, &x).unwrap();
        assert!(n.iter().all(|t| t.first_row() != (0, 1, 1)));
    }

    #[test]
    fn orbit_examples() {
        for p in 2..30 {
            let c = count_orbits(&SeifertData::mp(p).unwrap()).unwrap();
            assert_eq!((c.mixed, c.equal), (2, 1), "p = {p}");
        }
        let c = count_orbits(&m("3/4", "2/3", "2/5")).unwrap();
        assert_eq!((c.mixed, c.equal), (6, 2));
        let c = count_orbits(&m("1/2", "1/2", "2/5")).unwrap();
        assert_eq!((c.mixed, c.equal), (2, 2));
        let c = count_orbits(&m("3/4", "1/2", "2/5")).unwrap();
        assert_eq!(c.mixed, 4);
        let c = count_orbits(&m("2/3", "2/3", "1/3")).unwrap();
        assert_eq!(c.equal, 1);
    }

    #[test]
    fn cap_is_enforced() {
        let big = m("1/2", "1/2", "1/100000");
        assert!(matches!(count_orbits_with_cap(&big, 1000), Err(Error::Resource { size: 400000, cap: 1000 })));
    }

    #[test]
    fn encoding_round_trip() {
        let x = m("5/7", "3/5", "3/11");
        let space = StateSpace::new(&x, DEFAULT_CAP).unwrap();
        for i in 0..space.size() {
            assert_eq!(space.encode(&space.decode(i)), i);
        }
        let s = space.decode(space.size() - 1);
        assert_eq!(space.key(&s).len(), space.key(&space.decode(0)).len());
    }
}
