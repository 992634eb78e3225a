//! Components of the singular locus as maximal `(n-1)`-nilpotent
//! representations of the cyclic quiver with dimension vector `(q, ..., q)`.
//!
//! `E(a, b)` is the interval module supported on the walk `a, a+1, ..., b`
//! (vertices 1-based, read modulo `n`). Walks covering the whole cycle are
//! excluded, so there are `n^2 - n` intervals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::guard;
use crate::exact::{exact_rank, int, nullity, Matrix, Rational, Scalar};
use crate::imm::{ChainProducts, MatTuple};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    /// Checks `1 <= start, end <= n` and `start != end + 1 (mod n)`.
    pub fn new(start: usize, end: usize, n: usize) -> Result<Self> {
        if n == 0 || !(1..=n).contains(&start) || !(1..=n).contains(&end) {
            return Err(Error::InvalidArgument(format!("E({start},{end}) outside 1..={n}")));
        }
        let iv = Interval { start, end };
        if iv.len(n) == n {
            return Err(Error::InvalidArgument(format!("E({start},{end}) covers the whole cycle")));
        }
        Ok(iv)
    }

    /// Number of vertices in the support.
    pub fn len(&self, n: usize) -> usize {
        (self.end + n - self.start) % n + 1
    }

    /// Offset of `v` from `start` along the cycle.
    fn offset(&self, v: usize, n: usize) -> usize {
        (v + n - self.start) % n
    }

    pub fn contains(&self, v: usize, n: usize) -> bool {
        self.offset(v, n) < self.len(n)
    }

    pub fn vertices(&self, n: usize) -> impl Iterator<Item = usize> {
        let start = self.start;
        (0..self.len(n)).map(move |k| (start - 1 + k) % n + 1)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({},{})", self.start, self.end)
    }
}

pub fn enumerate_intervals(n: usize) -> Vec<Interval> {
    let mut out = Vec::new();
    for start in 1..=n {
        for end in 1..=n {
            if let Ok(iv) = Interval::new(start, end, n) {
                out.push(iv);
            }
        }
    }
    out
}

/// A direct sum of interval modules with dimension vector `(q, ..., q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuiverRep {
    pub n: usize,
    pub q: usize,
    pub parts: BTreeMap<Interval, usize>,
}

impl QuiverRep {
    pub fn new(n: usize, q: usize, parts: BTreeMap<Interval, usize>) -> Result<Self> {
        let mut dims = vec![0usize; n];
        for (iv, &m) in &parts {
            Interval::new(iv.start, iv.end, n)?;
            for v in iv.vertices(n) {
                dims[v - 1] += m;
            }
        }
        if dims.iter().any(|&d| d != q) {
            return Err(Error::InvalidArgument(format!("dimension vector {dims:?} is not constant {q}")));
        }
        let parts = parts.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(QuiverRep { n, q, parts })
    }

    pub fn from_list(n: usize, q: usize, list: &[((usize, usize), usize)]) -> Result<Self> {
        let mut parts = BTreeMap::new();
        for &((s, e), m) in list {
            *parts.entry(Interval::new(s, e, n)?).or_insert(0) += m;
        }
        Self::new(n, q, parts)
    }

    pub fn multiplicity(&self, iv: &Interval) -> usize {
        self.parts.get(iv).copied().unwrap_or(0)
    }

    pub fn summand_count(&self) -> usize {
        self.parts.values().sum()
    }

    fn replace(&self, remove: &[Interval], add: &[Interval]) -> QuiverRep {
        let mut parts = self.parts.clone();
        for iv in remove {
            let m = parts.get_mut(iv).expect("summand present");
            *m -= 1;
            if *m == 0 {
                parts.remove(iv);
            }
        }
        for iv in add {
            *parts.entry(*iv).or_insert(0) += 1;
        }
        QuiverRep { n: self.n, q: self.q, parts }
    }
}

impl fmt::Display for QuiverRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(iv, &m)| if m == 1 { iv.to_string() } else { format!("{iv}^{m}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub const DECOMPOSITION_GUARD: u128 = 1_000_000;

/// Every multiplicity vector over the intervals with coverage exactly `q` at
/// each vertex. Vertices are filled in order; at vertex `v` only intervals
/// whose first vertex (in `1..=n` order) is `v` are chosen, which fixes the
/// coverage of `v` once the step ends.
pub fn enumerate_decompositions(n: usize, q: usize) -> Result<Vec<QuiverRep>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let intervals = enumerate_intervals(n);
    let mut groups: Vec<Vec<Interval>> = vec![Vec::new(); n];
    for iv in &intervals {
        let first = iv.vertices(n).min().expect("nonempty support");
        groups[first - 1].push(*iv);
    }
    let mut state = Search { n, q, groups, coverage: vec![0; n], chosen: Vec::new(), out: Vec::new() };
    state.vertex(0)?;
    Ok(state.out)
}

struct Search {
    n: usize,
    q: usize,
    groups: Vec<Vec<Interval>>,
    coverage: Vec<usize>,
    chosen: Vec<(Interval, usize)>,
    out: Vec<QuiverRep>,
}

impl Search {
    fn vertex(&mut self, v: usize) -> Result<()> {
        if v == self.n {
            let parts = self.chosen.iter().copied().collect();
            self.out.push(QuiverRep { n: self.n, q: self.q, parts });
            return guard("decomposition count", self.out.len() as u128, DECOMPOSITION_GUARD);
        }
        let need = self.q - self.coverage[v];
        self.choose(v, 0, need)
    }

    fn choose(&mut self, v: usize, idx: usize, need: usize) -> Result<()> {
        if idx == self.groups[v].len() {
            return if need == 0 { self.vertex(v + 1) } else { Ok(()) };
        }
        let iv = self.groups[v][idx];
        let verts: Vec<usize> = iv.vertices(self.n).collect();
        let room = verts.iter().map(|&u| self.q - self.coverage[u - 1]).min().unwrap_or(0);
        for m in 0..=need.min(room) {
            if m > 0 {
                for &u in &verts {
                    self.coverage[u - 1] += m;
                }
                self.chosen.push((iv, m));
            }
            self.choose(v, idx + 1, need - m)?;
            if m > 0 {
                for &u in &verts {
                    self.coverage[u - 1] -= m;
                }
                self.chosen.pop();
            }
        }
        Ok(())
    }
}

/// 0/1 matrices of the direct sum. Each vertex has `q` slots, handed out to
/// interval copies in `(start, end, copy)` order; `X_v` sends the slot of a
/// copy at `v` to its slot at `v + 1` unless `v` is the copy's last vertex.
pub fn realize(rep: &QuiverRep) -> MatTuple<Rational> {
    let (n, q) = (rep.n, rep.q);
    let mut next = vec![0usize; n];
    let mut blocks = vec![Matrix::zeros(q, q, &int(0)); n];
    for (iv, &m) in &rep.parts {
        for _ in 0..m {
            let slots: Vec<(usize, usize)> = iv
                .vertices(n)
                .map(|v| {
                    let s = next[v - 1];
                    next[v - 1] += 1;
                    (v, s)
                })
                .collect();
            for w in slots.windows(2) {
                let ((v, from), (_, to)) = (w[0], w[1]);
                blocks[v - 1].set(to, from, int(1));
            }
        }
    }
    MatTuple::new(blocks).expect("square blocks")
}

/// `r(a, b)`: rank of the path from vertex `a` to vertex `b`, with `r(a, a) = q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RankMatrix {
    pub n: usize,
    pub q: usize,
    /// `ranks[a - 1][b - 1] = r(a, b)`.
    pub ranks: Vec<Vec<usize>>,
}

impl RankMatrix {
    /// Both indices 1-based modulo `n`.
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.ranks[(a + self.n - 1) % self.n][(b + self.n - 1) % self.n]
    }

    /// Entrywise `>=`.
    pub fn dominates(&self, other: &RankMatrix) -> bool {
        self.ranks.iter().flatten().zip(other.ranks.iter().flatten()).all(|(a, b)| a >= b)
    }

    pub fn total(&self) -> usize {
        self.ranks.iter().flatten().sum()
    }
}

/// Rank matrix by counting summands whose support contains the walk `a -> b`.
pub fn rank_matrix_combinatorial(rep: &QuiverRep) -> RankMatrix {
    let n = rep.n;
    let ranks = (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| {
                    if a == b {
                        return rep.q;
                    }
                    let steps = (b + n - a) % n;
                    rep.parts
                        .iter()
                        .filter(|(iv, _)| iv.contains(a, n) && iv.offset(a, n) + steps < iv.len(n))
                        .map(|(_, &m)| m)
                        .sum()
                })
                .collect()
        })
        .collect();
    RankMatrix { n, q: rep.q, ranks }
}

/// Rank matrix of any point: exact ranks of the products `X_{b-1} ... X_a`.
pub fn rank_matrix_of_point(point: &MatTuple<Rational>) -> RankMatrix {
    let (n, q) = (point.n(), point.q());
    let chains = ChainProducts::new(point);
    let ranks = (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| if a == b { q } else { exact_rank(chains.segment(b + n - 1, (b + n - a) % n)) })
                .collect()
        })
        .collect();
    RankMatrix { n, q, ranks }
}

/// Both routes; a disagreement is an error.
pub fn rank_matrix(rep: &QuiverRep) -> Result<RankMatrix> {
    let counted = rank_matrix_combinatorial(rep);
    let computed = rank_matrix_of_point(&realize(rep));
    if counted != computed {
        return Err(Error::Verification(format!(
            "rank matrix of {rep}: counted {:?}, computed {:?}",
            counted.ranks, computed.ranks
        )));
    }
    Ok(counted)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    /// `E(a, b) + E(b + 1, c) -> E(a, c)`.
    Glue { first: Interval, second: Interval, result: Interval },
    /// `E(a, b) + E(c, d) -> E(a, d) + E(c, b)` with `a, c, b, d` in cyclic order.
    Shift { first: Interval, second: Interval, union: Interval, overlap: Interval },
}

/// Every gluing and shift applicable to `rep` whose outputs are still
/// proper intervals. A shift needs `c` strictly after `a`, `c` not after `b`
/// (`c = b` allowed) and `d` strictly after `b`.
pub fn applicable_moves(rep: &QuiverRep) -> Vec<(Move, QuiverRep)> {
    let n = rep.n;
    let present: Vec<Interval> = rep.parts.keys().copied().collect();
    let mut out = Vec::new();
    for &a in &present {
        for &b in &present {
            if a == b {
                continue;
            }
            let (la, lb) = (a.len(n), b.len(n));
            let pc = a.offset(b.start, n);
            if pc == la && la + lb < n {
                let result = Interval { start: a.start, end: b.end };
                out.push((Move::Glue { first: a, second: b, result }, rep.replace(&[a, b], &[result])));
            }
            let pd = pc + lb - 1;
            if pc > 0 && pc < la && la - 1 < pd && pd <= n - 2 {
                let union = Interval { start: a.start, end: b.end };
                let overlap = Interval { start: b.start, end: a.end };
                out.push((
                    Move::Shift { first: a, second: b, union, overlap },
                    rep.replace(&[a, b], &[union, overlap]),
                ));
            }
        }
    }
    out
}

/// Elements of `reps` whose rank matrix is not strictly dominated by another's.
pub fn brute_force_maximal(reps: &[QuiverRep]) -> Vec<QuiverRep> {
    let mut ranked: Vec<(RankMatrix, &QuiverRep)> =
        reps.iter().map(|r| (rank_matrix_combinatorial(r), r)).collect();
    ranked.sort_by(|x, y| y.0.total().cmp(&x.0.total()).then_with(|| x.1.cmp(y.1)));
    let mut maximal: Vec<(RankMatrix, &QuiverRep)> = Vec::new();
    for (rk, rep) in ranked {
        if !maximal.iter().any(|(m, _)| m != &rk && m.dominates(&rk)) {
            maximal.push((rk, rep));
        }
    }
    let mut out: Vec<QuiverRep> = maximal.into_iter().map(|(_, r)| r.clone()).collect();
    out.sort();
    out
}

/// Dimension of the orbit closure from the rank matrix.
pub fn component_dimension(r: &RankMatrix) -> usize {
    let n = r.n;
    let g = |a: usize, b: usize| r.get(a, b) as i64;
    let mut total = 0i64;
    for a in 1..=n {
        for b in 2..=n {
            total += (g(a + b, a) - g(a + b - 1, a)) * (g(a + b - 1, a) + g(a + b, a + 1));
        }
    }
    usize::try_from(total).expect("nonnegative dimension")
}

/// Same dimension assembled as the flag variety dimension
/// `sum (k_j - k_{j-1}) k_{j-1}` plus the fiber dimension.
pub fn component_dimension_via_flags(r: &RankMatrix) -> usize {
    let n = r.n;
    let mut flags = 0;
    let mut fiber = 0;
    for a in 1..=n {
        let k: Vec<usize> = (1..=n).map(|c| r.get(a + c, a)).collect();
        for c in 1..n {
            flags += (k[c] - k[c - 1]) * k[c - 1];
            fiber += (k[c] - k[c - 1]) * r.get(a + c + 1, a + 1);
        }
    }
    flags + fiber
}

pub const ORBIT_ORACLE_GUARD: u128 = 400;

/// `n q^2 - dim End`, with `End` the solutions of `f_{a+1} X_a = X_a f_a`.
pub fn orbit_dimension_oracle(rep: &QuiverRep) -> Result<usize> {
    let point = realize(rep);
    orbit_dimension_of_point(&point)
}

pub fn orbit_dimension_of_point(point: &MatTuple<Rational>) -> Result<usize> {
    let (n, q) = (point.n(), point.q());
    let unknowns = n * q * q;
    guard("n*q^2 endomorphism unknowns", unknowns as u128, ORBIT_ORACLE_GUARD)?;
    // unknown (a, i, j) is entry (i, j) of f_a, 0-based
    let var = |a: usize, i: usize, j: usize| (a % n) * q * q + i * q + j;
    let mut system = Matrix::zeros(n * q * q, unknowns, &int(0));
    for a in 0..n {
        let x = &point.blocks()[a];
        for i in 0..q {
            for j in 0..q {
                let row = a * q * q + i * q + j;
                // (f_{a+1} X_a)[i][j] - (X_a f_a)[i][j]
                for k in 0..q {
                    let c = var(a + 1, i, k);
                    system.set(row, c, system.get(row, c) + x.get(k, j));
                    let c = var(a, k, j);
                    system.set(row, c, system.get(row, c) - x.get(i, k));
                }
            }
        }
    }
    Ok(unknowns - nullity(&system))
}

/// Every product of `n - 1` consecutive blocks vanishes.
pub fn is_singular_point<T: Scalar>(point: &MatTuple<T>) -> bool {
    let n = point.n();
    let chains = ChainProducts::new(point);
    (1..=n).all(|a| chains.segment(a + n - 1, n - 1).is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct SingComponent {
    pub rep: QuiverRep,
    pub rank_matrix: RankMatrix,
    pub dim_formula: usize,
    pub dim_flags: usize,
    pub dim_oracle: Option<usize>,
    #[serde(skip)]
    pub representative: MatTuple<Rational>,
}

/// Maximal decompositions (no applicable move), certified against the
/// brute-force rank-order maxima.
pub fn maximal_components(n: usize, q: usize) -> Result<Vec<SingComponent>> {
    let reps = enumerate_decompositions(n, q)?;
    let mut by_moves: Vec<QuiverRep> = reps.iter().filter(|r| applicable_moves(r).is_empty()).cloned().collect();
    by_moves.sort();
    let by_ranks = brute_force_maximal(&reps);
    let a: BTreeSet<_> = by_moves.iter().collect();
    let b: BTreeSet<_> = by_ranks.iter().collect();
    if a != b {
        let only_moves: Vec<String> = a.difference(&b).map(|r| r.to_string()).collect();
        let only_ranks: Vec<String> = b.difference(&a).map(|r| r.to_string()).collect();
        return Err(Error::Verification(format!(
            "maximality mismatch for n={n}, q={q}: only move-maximal {only_moves:?}, only rank-maximal {only_ranks:?}"
        )));
    }
    let oracle_fits = (n * q * q) as u128 <= ORBIT_ORACLE_GUARD;
    by_moves
        .into_iter()
        .map(|rep| {
            let rank_matrix = rank_matrix(&rep)?;
            let representative = realize(&rep);
            Ok(SingComponent {
                dim_formula: component_dimension(&rank_matrix),
                dim_flags: component_dimension_via_flags(&rank_matrix),
                dim_oracle: if oracle_fits { Some(orbit_dimension_of_point(&representative)?) } else { None },
                rank_matrix,
                representative,
                rep,
            })
        })
        .collect()
}
