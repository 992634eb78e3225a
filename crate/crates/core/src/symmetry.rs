//! Symmetries of `IMM_q^n`: the base-change action of `GL_q^n`, the cyclic
//! shift and the transpose-reversal, their infinitesimal version, the space of
//! invariants in a multidegree component, and the stabilizer of the marked
//! Dynkin diagrams inside the wreath product `Z_2 wr S_n`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::guard;
use crate::exact::{det_rational, exact_rank, int, inverse_rational, Matrix, Rational};
use crate::imm::{evaluate, gradient, MatTuple, VarIndex};
use crate::random;
use crate::{Error, Result};

/// A linear transformation of `(Mat_q)^n`.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    /// `(g_1, ..., g_n)` acting by `X_alpha -> g_{alpha+1} X_alpha g_alpha^{-1}`.
    PhiTuple(Vec<Matrix<Rational>>),
    /// `X_alpha -> X_{alpha+k}`.
    CyclicShift(usize),
    /// `(X_1, ..., X_n) -> (X_n^T, ..., X_1^T)`.
    TransposeReversal,
    /// `X_alpha -> z_alpha X_alpha`; scales the polynomial by the product of the `z`.
    Scale(Vec<Rational>),
    /// Transposes `X_alpha` alone. Not a symmetry for `q >= 2, n >= 3`.
    SlotTranspose(usize),
    /// Applied first to last.
    Composite(Vec<GroupElement>),
}

impl GroupElement {
    pub fn identity(n: usize, q: usize) -> Self {
        GroupElement::PhiTuple(vec![Matrix::identity(q, &int(0)); n])
    }

    /// `self * other`: apply `other`, then `self`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement::Composite(vec![other.clone(), self.clone()])
    }

    /// `g_alpha = g` and every other entry the identity.
    pub fn at_vertex(n: usize, alpha: usize, g: Matrix<Rational>) -> Self {
        let q = g.rows();
        let mut gs = vec![Matrix::identity(q, &int(0)); n];
        gs[(alpha + n - 1) % n] = g;
        GroupElement::PhiTuple(gs)
    }
}

pub fn apply(g: &GroupElement, point: &MatTuple<Rational>) -> Result<MatTuple<Rational>> {
    let n = point.n();
    match g {
        GroupElement::PhiTuple(gs) => {
            if gs.len() != n || gs.iter().any(|m| m.rows() != point.q() || m.cols() != point.q()) {
                return Err(Error::Shape(format!(
                    "PhiTuple needs {n} matrices of size {}",
                    point.q()
                )));
            }
            let inverses = gs
                .iter()
                .enumerate()
                .map(|(a, m)| {
                    inverse_rational(m)
                        .ok_or_else(|| Error::InvalidArgument(format!("g_{} is singular", a + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            let blocks = (0..n)
                .map(|a| gs[(a + 1) % n].mul(&point.blocks()[a]).mul(&inverses[a]))
                .collect();
            MatTuple::new(blocks)
        }
        GroupElement::CyclicShift(k) => {
            MatTuple::new((1..=n).map(|a| point.block(a + k).clone()).collect())
        }
        GroupElement::TransposeReversal => {
            MatTuple::new((1..=n).map(|a| point.block(n + 1 - a).transpose()).collect())
        }
        GroupElement::Scale(zs) => {
            if zs.len() != n {
                return Err(Error::Shape(format!("Scale needs {n} scalars, got {}", zs.len())));
            }
            MatTuple::new(point.blocks().iter().zip(zs).map(|(b, z)| b.scale(z)).collect())
        }
        GroupElement::SlotTranspose(alpha) => {
            let mut out = point.clone();
            out.set_block(*alpha, point.block(*alpha).transpose());
            Ok(out)
        }
        GroupElement::Composite(parts) => {
            parts.iter().try_fold(point.clone(), |x, part| apply(part, &x))
        }
    }
}

/// Exact equality `IMM(g x) = IMM(x)` at `trials` random rational points.
pub fn check_invariance(g: &GroupElement, n: usize, q: usize, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = random::rng(seed);
    for _ in 0..trials {
        let x = random::point(&mut rng, n, q, 50, 7);
        if evaluate(&apply(g, &x)?) != evaluate(&x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An invertible matrix with small random rational entries.
pub fn random_invertible<R: Rng>(rng: &mut R, q: usize) -> Matrix<Rational> {
    loop {
        let m = random::matrix(rng, q, 5, 3);
        if !det_rational(&m).expect("square").is_zero() {
            return m;
        }
    }
}

pub fn random_phi<R: Rng>(rng: &mut R, n: usize, q: usize) -> GroupElement {
    GroupElement::PhiTuple((0..n).map(|_| random_invertible(rng, q)).collect())
}

/// Generators of the stabilizer: one random base change per vertex, one
/// random tuple, the cyclic shift and the transpose-reversal.
pub fn symmetry_generators(n: usize, q: usize, seed: u64) -> Vec<GroupElement> {
    let mut rng = random::rng(seed);
    let mut gens: Vec<GroupElement> =
        (1..=n).map(|a| GroupElement::at_vertex(n, a, random_invertible(&mut rng, q))).collect();
    gens.push(random_phi(&mut rng, n, q));
    gens.push(GroupElement::CyclicShift(1));
    gens.push(GroupElement::TransposeReversal);
    gens
}

/// A word of length `1..=max_len` in `generators`.
pub fn random_word<R: Rng>(rng: &mut R, generators: &[GroupElement], max_len: usize) -> GroupElement {
    let len = rng.gen_range(1..=max_len.max(1));
    GroupElement::Composite((0..len).map(|_| generators.choose(rng).expect("generators").clone()).collect())
}

/// `L` in `gl(U_alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement {
    pub alpha: usize,
    pub l: Matrix<Rational>,
}

impl LieElement {
    /// Tangent vector at `point`: `L X_{alpha-1}` on block `alpha - 1` and
    /// `-X_alpha L` on block `alpha` (summed when they coincide).
    pub fn field(&self, point: &MatTuple<Rational>) -> Vec<Matrix<Rational>> {
        let n = point.n();
        let mut out = vec![Matrix::zeros(point.q(), point.q(), &int(0)); n];
        let prev = (self.alpha + 2 * n - 2) % n;
        let here = (self.alpha + n - 1) % n;
        out[prev] = out[prev].add(&self.l.mul(point.block(self.alpha + n - 1)));
        out[here] = out[here].sub(&point.block(self.alpha).mul(&self.l));
        out
    }

    /// Only the `-X_alpha L` half of [`LieElement::field`].
    pub fn one_sided_field(&self, point: &MatTuple<Rational>) -> Vec<Matrix<Rational>> {
        let n = point.n();
        let mut out = vec![Matrix::zeros(point.q(), point.q(), &int(0)); n];
        out[(self.alpha + n - 1) % n] = point.block(self.alpha).mul(&self.l).scale(&int(-1));
        out
    }
}

/// `sum gradient * direction` over all coordinates.
pub fn directional_derivative(point: &MatTuple<Rational>, direction: &[Matrix<Rational>]) -> Rational {
    gradient(point)
        .iter()
        .zip(direction)
        .flat_map(|(g, d)| g.entries().iter().zip(d.entries()))
        .fold(int(0), |acc, (a, b)| acc + a * b)
}

pub fn lie_annihilates(element: &LieElement, n: usize, q: usize, trials: usize, seed: u64) -> bool {
    annihilates_with(n, q, trials, seed, |x| element.field(x))
}

/// Negative control: the derivative along the one-sided field.
pub fn one_sided_annihilates(element: &LieElement, n: usize, q: usize, trials: usize, seed: u64) -> bool {
    annihilates_with(n, q, trials, seed, |x| element.one_sided_field(x))
}

fn annihilates_with(
    n: usize,
    q: usize,
    trials: usize,
    seed: u64,
    field: impl Fn(&MatTuple<Rational>) -> Vec<Matrix<Rational>>,
) -> bool {
    let mut rng = random::rng(seed);
    (0..trials).all(|_| {
        let x = random::point(&mut rng, n, q, 50, 7);
        directional_derivative(&x, &field(&x)).is_zero()
    })
}

pub const INVARIANT_SPACE_GUARD: u128 = 10_000;

/// A monomial as the sorted list of variable positions (lexicographic
/// `(alpha, i, j)`, 0-based), repeated by multiplicity.
type Mono = Vec<u32>;

fn check_multidegree(n: usize, q: usize, multidegree: &[usize]) -> Result<u128> {
    if n == 0 || q == 0 || multidegree.len() != n || multidegree.iter().sum::<usize>() != n {
        return Err(Error::InvalidArgument(format!(
            "multidegree must have {n} entries summing to {n}, got {multidegree:?}"
        )));
    }
    let vars = (q * q) as u128;
    let dim = multidegree.iter().fold(1u128, |acc, &a| {
        // binom(vars + a - 1, a)
        let b = (1..=a as u128).fold(1u128, |b, k| b * (vars + k - 1) / k);
        acc.saturating_mul(b)
    });
    guard("multidegree component dimension", dim, INVARIANT_SPACE_GUARD)?;
    Ok(dim)
}

fn monomials(n: usize, q: usize, multidegree: &[usize]) -> Vec<Mono> {
    let s = (q * q) as u32;
    (0..n)
        .map(|a| {
            let base = a as u32 * s;
            (base..base + s).combinations_with_replacement(multidegree[a]).collect::<Vec<_>>()
        })
        .multi_cartesian_product()
        .map(|parts| parts.concat())
        .collect()
}

/// Image of the coordinate `x_v` under the derivation for `E_{ij}` at vertex
/// `alpha` (0-based `a`): a signed list of coordinates.
fn derive_variable(n: usize, q: usize, a: usize, i: usize, j: usize, v: u32) -> Vec<(u32, i64)> {
    let var = VarIndex::from_position(v as usize, q);
    let block = var.alpha - 1;
    let mut out = Vec::new();
    // x_{alpha-1}[i][b] -> x_{alpha-1}[j][b]
    if block == (a + n - 1) % n && var.i - 1 == i {
        out.push(((block * q * q + j * q + (var.j - 1)) as u32, 1));
    }
    // x_alpha[c][j] -> -x_alpha[c][i]
    if block == a && var.j - 1 == j {
        out.push(((block * q * q + (var.i - 1) * q + i) as u32, -1));
    }
    out
}

fn derive_monomial(n: usize, q: usize, op: (usize, usize, usize), m: &Mono) -> BTreeMap<Mono, i64> {
    let mut out = BTreeMap::new();
    for k in 0..m.len() {
        if k > 0 && m[k] == m[k - 1] {
            continue;
        }
        let mult = m.iter().filter(|&&v| v == m[k]).count() as i64;
        for (w, sign) in derive_variable(n, q, op.0, op.1, op.2, m[k]) {
            let mut image = m.clone();
            image[k] = w;
            image.sort_unstable();
            *out.entry(image).or_insert(0) += sign * mult;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Weight of a monomial under the diagonal operators, indexed by `(alpha, i)`.
fn weight(n: usize, q: usize, m: &Mono) -> Vec<i64> {
    let mut w = vec![0i64; n * q];
    for &v in m {
        let var = VarIndex::from_position(v as usize, q);
        let block = var.alpha - 1;
        // counted at vertex block + 1 via its row, at vertex block via its column
        w[((block + 1) % n) * q + var.i - 1] += 1;
        w[block * q + var.j - 1] -= 1;
    }
    w
}

fn stacked_nullity(n: usize, q: usize, columns: &[Mono], ops: &[(usize, usize, usize)]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let mut row_index: HashMap<(usize, Mono), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for (c, m) in columns.iter().enumerate() {
        for (o, &op) in ops.iter().enumerate() {
            for (image, coeff) in derive_monomial(n, q, op, m) {
                let next = row_index.len();
                let r = *row_index.entry((o, image)).or_insert(next);
                entries.push((r, c, coeff));
            }
        }
    }
    let mut matrix = Matrix::zeros(row_index.len(), columns.len(), &int(0));
    for (r, c, v) in entries {
        let old = matrix.get(r, c).clone();
        matrix.set(r, c, old + int(v));
    }
    columns.len() - exact_rank(&matrix)
}

/// Dimension of the polynomials of the given multidegree (degree `a_alpha` in
/// the entries of `X_alpha`) killed by every infinitesimal base change.
///
/// The diagonal operators act on monomials by their weight, so the kernel is
/// spanned by zero-weight combinations; only those monomials are used as
/// columns and only off-diagonal operators as rows.
pub fn invariant_space_dim(n: usize, q: usize, multidegree: &[usize]) -> Result<usize> {
    check_multidegree(n, q, multidegree)?;
    let columns: Vec<Mono> =
        monomials(n, q, multidegree).into_iter().filter(|m| weight(n, q, m).iter().all(|&x| x == 0)).collect();
    let ops: Vec<_> = (0..n)
        .flat_map(|a| (0..q).flat_map(move |i| (0..q).map(move |j| (a, i, j))))
        .filter(|&(_, i, j)| i != j)
        .collect();
    Ok(stacked_nullity(n, q, &columns, &ops))
}

/// Same quantity with every monomial of the component and every operator.
pub fn invariant_space_dim_dense(n: usize, q: usize, multidegree: &[usize]) -> Result<usize> {
    check_multidegree(n, q, multidegree)?;
    let columns = monomials(n, q, multidegree);
    let ops: Vec<_> = (0..n).flat_map(|a| (0..q).flat_map(move |i| (0..q).map(move |j| (a, i, j)))).collect();
    Ok(stacked_nullity(n, q, &columns, &ops))
}

/// Element `(sigma, eps)` of `Z_2 wr S_n` acting on marks by
/// `(r, p) -> (sigma(r), q - p if eps_r else p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WreathElement {
    pub sigma: Vec<usize>,
    pub flips: u32,
}

impl WreathElement {
    pub fn identity(n: usize) -> Self {
        WreathElement { sigma: (0..n).collect(), flips: 0 }
    }

    pub fn act(&self, q: usize, (r, p): (usize, usize)) -> (usize, usize) {
        let p = if self.flips >> r & 1 == 1 { q - p } else { p };
        (self.sigma[r], p)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &WreathElement) -> WreathElement {
        let n = self.sigma.len();
        let sigma = (0..n).map(|r| other.sigma[self.sigma[r]]).collect();
        let flips = (0..n).fold(0u32, |acc, r| {
            let bit = (self.flips >> r & 1) ^ (other.flips >> self.sigma[r] & 1);
            acc | bit << r
        });
        WreathElement { sigma, flips }
    }

    pub fn permutation_part(&self) -> WreathElement {
        WreathElement { sigma: self.sigma.clone(), flips: 0 }
    }

    fn order(&self) -> usize {
        let id = WreathElement::identity(self.sigma.len());
        let mut x = self.clone();
        let mut k = 1;
        while x != id {
            x = x.then(self);
            k += 1;
        }
        k
    }
}

/// The diagrams `{(alpha, 1), (alpha + 1, q - 1)}` for every vertex (rows 0-based).
pub fn marked_diagrams(n: usize, q: usize) -> BTreeSet<BTreeSet<(usize, usize)>> {
    (0..n).map(|a| BTreeSet::from([(a, 1), ((a + 1) % n, q - 1)])).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DynkinReport {
    pub n: usize,
    pub q: usize,
    pub order: usize,
    pub is_dihedral: bool,
    /// A rotation and a reflection when the group is dihedral.
    pub generators: Vec<WreathElement>,
    pub permutation_image_order: usize,
    pub permutation_image_is_dihedral: bool,
    /// For `q = 2` the position reversal is trivial on the marks.
    pub flips_act_trivially: bool,
}

pub const DYNKIN_GUARD: u128 = 10_000_000;

/// Set-stabilizer of [`marked_diagrams`] in `Z_2 wr S_n`.
pub fn dynkin_stabilizer(n: usize, q: usize) -> Result<DynkinReport> {
    if n == 0 || n > 31 || q < 2 {
        return Err(Error::InvalidArgument(format!("need 1 <= n <= 31 and q >= 2 (got n={n}, q={q})")));
    }
    let size = (1..=n as u128).product::<u128>().saturating_mul(1u128 << n);
    guard("wreath product order 2^n n!", size, DYNKIN_GUARD)?;
    let diagrams = marked_diagrams(n, q);
    let mut group = Vec::new();
    for sigma in (0..n).permutations(n) {
        for flips in 0..(1u32 << n) {
            let g = WreathElement { sigma: sigma.clone(), flips };
            let fixes = diagrams.iter().all(|d| {
                let image: BTreeSet<_> = d.iter().map(|&m| g.act(q, m)).collect();
                diagrams.contains(&image)
            });
            if fixes {
                group.push(g);
            }
        }
    }
    let image: Vec<WreathElement> =
        group.iter().map(WreathElement::permutation_part).collect::<BTreeSet<_>>().into_iter().collect();
    let dihedral = dihedral_generators(n, &group);
    Ok(DynkinReport {
        n,
        q,
        order: group.len(),
        is_dihedral: dihedral.is_some(),
        generators: dihedral.unwrap_or_default(),
        permutation_image_order: image.len(),
        permutation_image_is_dihedral: dihedral_generators(n, &image).is_some(),
        flips_act_trivially: q == 2,
    })
}

/// `[r, s]` with `|G| = 2n`, `r` of order `n`, `s` an involution outside
/// `<r>` and `s r s = r^{-1}`.
fn dihedral_generators(n: usize, group: &[WreathElement]) -> Option<Vec<WreathElement>> {
    if group.len() != 2 * n {
        return None;
    }
    let id = WreathElement::identity(n);
    let members: HashSet<&WreathElement> = group.iter().collect();
    let closed = group.iter().all(|a| group.iter().all(|b| members.contains(&a.then(b))));
    if !closed {
        return None;
    }
    for r in group.iter().filter(|g| g.order() == n) {
        let mut powers = vec![id.clone()];
        for _ in 1..n {
            let next = powers.last().expect("nonempty").then(r);
            powers.push(next);
        }
        let r_inv = powers[n - 1].clone();
        let found = group
            .iter()
            .find(|s| !powers.contains(s) && s.then(s) == id && s.then(r).then(s) == r_inv);
        if let Some(s) = found {
            return Some(vec![r.clone(), s.clone()]);
        }
    }
    None
}
