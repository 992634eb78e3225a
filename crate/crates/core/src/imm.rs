//! Points of `(Mat_q)^n`, evaluation of `IMM_q^n = trace(X_n ... X_1)` and its
//! derivatives.
//!
//! Vertex indices are 1-based and read modulo `n`: `block(0)` is `X_n` and
//! `block(n + 1)` is `X_1`. Matrix entries `(i, j)` are 0-based inside
//! [`Matrix`] but 1-based in [`VarIndex`].

use crate::error::guard;
use crate::exact::{Matrix, Scalar};
use crate::{Error, Result};

/// A point `(X_1, ..., X_n)`: `n` square matrices of size `q` over one ring.
#[derive(Clone, Debug, PartialEq)]
pub struct MatTuple<T> {
    q: usize,
    blocks: Vec<Matrix<T>>,
}

/// The coordinate `(x_alpha)^i_j`, entry `(i, j)` of `X_alpha`. All 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarIndex {
    pub alpha: usize,
    pub i: usize,
    pub j: usize,
}

impl VarIndex {
    /// Normalizes `alpha` into `1..=n` and checks `1 <= i, j <= q`.
    pub fn new(alpha: usize, i: usize, j: usize, n: usize, q: usize) -> Result<Self> {
        if n == 0 || !(1..=q).contains(&i) || !(1..=q).contains(&j) {
            return Err(Error::InvalidArgument(format!(
                "variable index ({alpha},{i},{j}) outside n={n}, q={q}"
            )));
        }
        Ok(VarIndex { alpha: wrap(alpha, n) + 1, i, j })
    }

    /// Position in the lexicographic order on `(alpha, i, j)`, 0-based.
    pub fn position(&self, q: usize) -> usize {
        (self.alpha - 1) * q * q + (self.i - 1) * q + (self.j - 1)
    }

    pub fn from_position(position: usize, q: usize) -> Self {
        let alpha = position / (q * q);
        let rest = position % (q * q);
        VarIndex { alpha: alpha + 1, i: rest / q + 1, j: rest % q + 1 }
    }
}

/// 0-based slot of the 1-based vertex `alpha` read modulo `n`.
pub(crate) fn wrap(alpha: usize, n: usize) -> usize {
    (alpha + n - 1) % n
}

impl<T: Scalar> MatTuple<T> {
    pub fn new(blocks: Vec<Matrix<T>>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::Shape("a point needs at least one block".into()))?;
        let q = first.rows();
        if q == 0 {
            return Err(Error::Shape("blocks must be at least 1x1".into()));
        }
        for (a, b) in blocks.iter().enumerate() {
            if b.rows() != q || b.cols() != q {
                return Err(Error::Shape(format!(
                    "block {} is {}x{}, expected {q}x{q}",
                    a + 1,
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(MatTuple { q, blocks })
    }

    /// Every block equal to `block`.
    pub fn constant(n: usize, block: Matrix<T>) -> Result<Self> {
        Self::new(vec![block; n])
    }

    pub fn zeros(n: usize, q: usize, like: &T) -> Result<Self> {
        Self::constant(n, Matrix::zeros(q, q, like))
    }

    pub fn identity(n: usize, q: usize, like: &T) -> Result<Self> {
        Self::constant(n, Matrix::identity(q, like))
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `X_alpha`, 1-based, read modulo `n`.
    pub fn block(&self, alpha: usize) -> &Matrix<T> {
        &self.blocks[wrap(alpha, self.n())]
    }

    pub fn set_block(&mut self, alpha: usize, block: Matrix<T>) {
        assert_eq!((block.rows(), block.cols()), (self.q, self.q), "block shape");
        let slot = wrap(alpha, self.n());
        self.blocks[slot] = block;
    }

    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Matrix<T>> {
        self.blocks
    }

    pub fn zero_element(&self) -> &T {
        self.blocks[0].zero_element()
    }

    pub fn entry(&self, var: VarIndex) -> &T {
        self.block(var.alpha).get(var.i - 1, var.j - 1)
    }

    pub fn set_entry(&mut self, var: VarIndex, value: T) {
        let slot = wrap(var.alpha, self.n());
        self.blocks[slot].set(var.i - 1, var.j - 1, value);
    }

    pub fn with_entry(&self, var: VarIndex, value: T) -> Self {
        let mut out = self.clone();
        out.set_entry(var, value);
        out
    }

    /// All coordinates in lexicographic `(alpha, i, j)` order.
    pub fn coordinates(&self) -> Vec<T> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn map<U: Scalar>(&self, like: &U, f: impl Fn(&T) -> U) -> MatTuple<U> {
        MatTuple { q: self.q, blocks: self.blocks.iter().map(|b| b.map(like, &f)).collect() }
    }

    pub fn variables(&self) -> impl Iterator<Item = VarIndex> + '_ {
        let q = self.q;
        (0..self.n() * q * q).map(move |p| VarIndex::from_position(p, q))
    }
}

/// `trace(X_n ... X_1)`.
pub fn evaluate<T: Scalar>(point: &MatTuple<T>) -> T {
    let mut product = point.block(1).clone();
    for alpha in 2..=point.n() {
        product = point.block(alpha).mul(&product);
    }
    product.trace()
}

/// One monomial of the coordinate expansion; every coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub factors: Vec<VarIndex>,
}

impl Monomial {
    pub fn evaluate<T: Scalar>(&self, point: &MatTuple<T>) -> T {
        let one = point.zero_element().one_like();
        self.factors.iter().fold(one, |acc, v| acc.times(point.entry(*v)))
    }
}

pub const EXPANSION_GUARD: u128 = 1_000_000;

/// The `q^n` monomials `(x_n)^{l1}_{ln} (x_{n-1})^{ln}_{l(n-1)} ... (x_1)^{l2}_{l1}`.
pub fn coordinate_expansion(n: usize, q: usize) -> Result<Vec<Monomial>> {
    if n == 0 || q == 0 {
        return Err(Error::InvalidArgument("n and q must be positive".into()));
    }
    let count = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    guard("q^n monomials", count, EXPANSION_GUARD)?;
    let mut out = Vec::with_capacity(count as usize);
    // labels[a] is l_{a+1}, the index shared by X_a's column and X_{a+1}'s row
    let mut labels = vec![0usize; n];
    loop {
        let factors = (1..=n)
            .rev()
            .map(|alpha| VarIndex { alpha, i: labels[alpha % n] + 1, j: labels[alpha - 1] + 1 })
            .collect();
        out.push(Monomial { factors });
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out);
            }
            labels[pos] += 1;
            if labels[pos] < q {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
}

/// Gradient as `n` blocks: entry `(i, j)` of block `alpha` is the `(j, i)`
/// entry of the cyclic product `X_{alpha-1} ... X_1 X_n ... X_{alpha+1}`.
/// Uses prefix products `X_m ... X_1` and suffix products `X_n ... X_m`.
pub fn gradient<T: Scalar>(point: &MatTuple<T>) -> Vec<Matrix<T>> {
    let n = point.n();
    let id = Matrix::identity(point.q(), point.zero_element());
    // prefix[m] = X_m ... X_1, prefix[0] = I
    let mut prefix = Vec::with_capacity(n);
    prefix.push(id.clone());
    for m in 1..n {
        let next = point.block(m).mul(&prefix[m - 1]);
        prefix.push(next);
    }
    // suffix[m] = X_n ... X_m for m in 2..=n+1, suffix[n+1] = I
    let mut suffix = vec![id; n + 2];
    for m in (2..=n).rev() {
        suffix[m] = suffix[m + 1].mul(point.block(m));
    }
    (1..=n).map(|alpha| prefix[alpha - 1].mul(&suffix[alpha + 1]).transpose()).collect()
}

/// Products of consecutive blocks read downward: `segment(s, len)` is
/// `X_s X_{s-1} ... X_{s-len+1}` (the identity for `len = 0`).
pub struct ChainProducts<T> {
    n: usize,
    table: Vec<Vec<Matrix<T>>>,
}

impl<T: Scalar> ChainProducts<T> {
    pub fn new(point: &MatTuple<T>) -> Self {
        let n = point.n();
        let id = Matrix::identity(point.q(), point.zero_element());
        let table = (0..n)
            .map(|s| {
                let mut row = Vec::with_capacity(n);
                row.push(id.clone());
                for len in 1..n {
                    // multiply by X at 0-based slot s - len + 1
                    let next = row[len - 1].mul(&point.blocks()[(s + n * len - len + 1) % n]);
                    row.push(next);
                }
                row
            })
            .collect();
        ChainProducts { n, table }
    }

    /// `segment(start, len)` with `start` 1-based modulo `n` and `len < n`.
    pub fn segment(&self, start: usize, len: usize) -> &Matrix<T> {
        &self.table[wrap(start, self.n)][len]
    }

    /// `d^2 IMM / d(x_alpha)^j_k d(x_beta)^r_s` with `u = (alpha, j, k)` and
    /// `v = (beta, r, s)`.
    ///
    /// With `A = X_{alpha-1} ... X_{beta+1}` and `B = X_{beta-1} ... X_{alpha+1}`
    /// (empty products are the identity) the value is `A[k][r] * B[s][j]`,
    /// which specializes to the adjacent and same-block cases below.
    pub fn second_partial(&self, u: VarIndex, v: VarIndex) -> T {
        let n = self.n;
        let (a, b) = (wrap(u.alpha, n), wrap(v.alpha, n));
        let (j, k) = (u.i - 1, u.j - 1);
        let (r, s) = (v.i - 1, v.j - 1);
        let len_a = (a + 2 * n - b - 1) % n;
        let len_b = (b + 2 * n - a - 1) % n;
        let zero = self.table[0][0].zero_element().clone();
        if a == b {
            return zero;
        }
        let seg_a = || self.segment(u.alpha + n - 1, len_a).get(k, r).clone();
        let seg_b = || self.segment(v.alpha + n - 1, len_b).get(s, j).clone();
        match (len_a == 0, len_b == 0) {
            // n = 2: beta is both alpha - 1 and alpha + 1
            (true, true) => {
                if k == r && s == j { zero.one_like() } else { zero }
            }
            // beta = alpha - 1
            (true, false) => {
                if k != r { zero } else { seg_b() }
            }
            // beta = alpha + 1
            (false, true) => {
                if s != j { zero } else { seg_a() }
            }
            (false, false) => seg_a().times(&seg_b()),
        }
    }
}

/// Convenience wrapper building the chain products for a single query.
pub fn second_partial<T: Scalar>(point: &MatTuple<T>, u: VarIndex, v: VarIndex) -> T {
    ChainProducts::new(point).second_partial(u, v)
}

/// Values of the two equation families cutting out the `(n-2)`-nd Jacobian
/// locus: every entry of `X_{alpha+1} X_alpha`, then every product
/// `(x_beta)^t_s (x_alpha)^r_p` over unordered non-adjacent pairs of blocks.
pub fn jac_n2_residuals<T: Scalar>(point: &MatTuple<T>) -> Vec<T> {
    let n = point.n();
    let mut out = Vec::new();
    for alpha in 1..=n {
        out.extend(point.block(alpha + 1).mul(point.block(alpha)).entries().iter().cloned());
    }
    for (a, b) in non_adjacent_pairs(n) {
        for x in point.block(b).entries() {
            for y in point.block(a).entries() {
                out.push(x.times(y));
            }
        }
    }
    out
}

/// Unordered pairs `alpha < beta` of blocks with `beta != alpha +- 1 (mod n)`.
pub fn non_adjacent_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            let d = b - a;
            if d != 1 && d != n - 1 {
                out.push((a, b));
            }
        }
    }
    out
}
