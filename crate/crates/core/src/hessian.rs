//! Hessian of the iterated matrix multiplication polynomial at the
//! distinguished point `p = (D, ..., D)`, `D = diag(1, ..., 1, w)`, over
//! `Q[t]/(t^n + q - 1)`, and the dual-variety dimension at random rational
//! points of the hypersurface.
//!
//! Row and column orders differ. A row is labelled by the variable
//! `(x_alpha)^i_j` in `(alpha, j, i)` order (column index outer), a column by
//! `(alpha, i, j)` order (row index outer). In these orders every `q^2 x q^2`
//! block of `H(p)` is diagonal and splits into `q` runs of length `q`, one per
//! outer index `k`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::guard;
use crate::exact::{det_division_free, exact_rank, Matrix, Modulus, QuotientScalar, Rational, Scalar};
use crate::imm::{evaluate, gradient, ChainProducts, MatTuple, VarIndex};
use crate::random;
use crate::{Error, Result};

pub type SegrePoint = MatTuple<QuotientScalar>;

/// Largest `n q^2` accepted by [`dual_dimension`].
pub const DUAL_DIMENSION_GUARD: u128 = 200;
const SAMPLE_RETRIES: usize = 64;

fn ring(n: usize, q: usize) -> Result<Modulus> {
    Modulus::new(n, q as u64)
}

/// Every block equal to `diag(1, ..., 1, w)`.
pub fn segre_point(n: usize, q: usize) -> Result<SegrePoint> {
    let m = ring(n, q)?;
    let one = QuotientScalar::one(m);
    let mut diag = vec![one; q];
    diag[q - 1] = QuotientScalar::omega(m);
    MatTuple::constant(n, Matrix::diagonal(&diag, &QuotientScalar::zero(m)))
}

/// Square `n q^2` Hessian with the row and column orders of the module docs.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockHessian<T> {
    n: usize,
    q: usize,
    matrix: Matrix<T>,
}

impl<T: Scalar> BlockHessian<T> {
    pub fn from_matrix(n: usize, q: usize, matrix: Matrix<T>) -> Result<Self> {
        let size = n * q * q;
        if matrix.rows() != size || matrix.cols() != size {
            return Err(Error::Shape(format!(
                "Hessian for n={n}, q={q} must be {size}x{size}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(BlockHessian { n, q, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    /// Row position of `(x_alpha)^i_j`.
    pub fn row_position(&self, v: VarIndex) -> usize {
        (v.alpha - 1) * self.q * self.q + (v.j - 1) * self.q + (v.i - 1)
    }

    /// Column position of `(x_alpha)^i_j`.
    pub fn col_position(&self, v: VarIndex) -> usize {
        v.position(self.q)
    }

    pub fn row_variable(&self, position: usize) -> VarIndex {
        let v = VarIndex::from_position(position, self.q);
        VarIndex { alpha: v.alpha, i: v.j, j: v.i }
    }

    pub fn col_variable(&self, position: usize) -> VarIndex {
        VarIndex::from_position(position, self.q)
    }

    /// Block `(alpha, beta)`, both 1-based modulo `n`.
    pub fn block(&self, alpha: usize, beta: usize) -> Matrix<T> {
        let s = self.q * self.q;
        let (a, b) = ((alpha + self.n - 1) % self.n, (beta + self.n - 1) % self.n);
        self.matrix.submatrix(a * s, b * s, s, s)
    }

    pub fn all_blocks_diagonal(&self) -> bool {
        (1..=self.n).all(|a| (1..=self.n).all(|b| self.block(a, b).is_diagonal()))
    }

    /// Diagonal of the `k`-th `q x q` run of block `(alpha, beta)`, `k` 1-based.
    pub fn run(&self, alpha: usize, beta: usize, k: usize) -> Vec<T> {
        let diag = self.block(alpha, beta).diagonal_entries();
        diag[(k - 1) * self.q..k * self.q].to_vec()
    }
}

/// Assembles the Hessian from [`ChainProducts::second_partial`].
pub fn hessian_at<T: Scalar>(point: &MatTuple<T>) -> BlockHessian<T> {
    let (n, q) = (point.n(), point.q());
    let size = n * q * q;
    let chains = ChainProducts::new(point);
    let shell = BlockHessian { n, q, matrix: Matrix::zeros(0, 0, point.zero_element()) };
    let matrix = Matrix::from_fn(size, size, point.zero_element(), |r, c| {
        let u = shell.row_variable(r);
        let v = shell.col_variable(c);
        if u.alpha == v.alpha {
            point.zero_element().clone()
        } else {
            chains.second_partial(u, v)
        }
    });
    BlockHessian { n, q, matrix }
}

/// `((q-1)^(n-1) + (-1)^n) / q`, always an integer.
pub fn a_n(n: usize, q: usize) -> Rational {
    let q = BigInt::from(q);
    let sign = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let power = num_traits::pow(&q - 1, n.saturating_sub(1));
    Rational::new(power + sign, q)
}

/// The explicit inverse of `H(p)`. Block `(alpha, beta)` depends only on
/// `beta - alpha`; see the runs below. Needs `n >= 3` and `a_n != 0`.
pub fn closed_form_inverse(n: usize, q: usize) -> Result<BlockHessian<QuotientScalar>> {
    if n < 3 {
        return Err(Error::DegenerateFormula(format!("closed form needs n >= 3 (got n={n})")));
    }
    let m = ring(n, q)?;
    let an = a_n(n, q);
    if Zero::is_zero(&an) {
        return Err(Error::DegenerateFormula(format!("a_n = 0 for n={n}, q={q}")));
    }
    let an1 = a_n(n - 1, q);
    let nn = Rational::from_integer(BigInt::from(n));
    let qq = Rational::from_integer(BigInt::from(q));
    let one = Rational::one();
    let sign = if n.is_multiple_of(2) { one.clone() } else { -one.clone() };
    let c = |r: Rational| QuotientScalar::from_rational(m, r);
    let w = QuotientScalar::omega(m);
    let wp = |e: usize| w.pow(e as u64);
    let lead = &nn - &one;
    let last_scale = (&qq - &one) * &lead;

    // runs[d][k]: diagonal of the k-th run of block offset d = beta - alpha
    let runs: Vec<Vec<Vec<QuotientScalar>>> = (0..n)
        .map(|d| {
            let beta = d + 1;
            (1..=q)
                .map(|k| {
                    let (head, tail) = match (beta == 1, k == q) {
                        (true, false) => (
                            c(-(&nn - Rational::from_integer(BigInt::from(2))) / &lead),
                            c(&an1 / &an).times(&w),
                        ),
                        (true, true) => (
                            c(&an1 / &an).times(&w),
                            c((&nn - Rational::from_integer(BigInt::from(2))) / &last_scale).times(&wp(2)),
                        ),
                        (false, false) => {
                            (c(&one / &lead), c(&sign / &an).times(&wp((n - 1) * (n - beta))))
                        }
                        (false, true) => {
                            (c(&sign / &an).times(&wp((n - 1) * (beta - 2))), c(-&one / &last_scale).times(&wp(2)))
                        }
                    };
                    let mut run = vec![head; q];
                    run[q - 1] = tail;
                    run
                })
                .collect()
        })
        .collect();
    let zero = QuotientScalar::zero(m);
    let s = q * q;
    let matrix = Matrix::from_fn(n * s, n * s, &zero, |r, col| {
        if r % s != col % s {
            return zero.clone();
        }
        let d = (col / s + n - r / s) % n;
        let pos = r % s;
        runs[d][pos / q][pos % q].clone()
    });
    Ok(BlockHessian { n, q, matrix })
}

/// `H(p) C = I`, checked blockwise on diagonals after asserting that every
/// block of both factors is diagonal.
pub fn verify_hessian_inverse(n: usize, q: usize) -> Result<bool> {
    let inverse = closed_form_inverse(n, q)?;
    let hessian = hessian_at(&segre_point(n, q)?);
    if !hessian.all_blocks_diagonal() || !inverse.all_blocks_diagonal() {
        return Ok(false);
    }
    Ok(diagonal_block_product_is_identity(&hessian, &inverse))
}

fn diagonal_block_product_is_identity<T: Scalar>(left: &BlockHessian<T>, right: &BlockHessian<T>) -> bool {
    let n = left.n;
    let diag = |h: &BlockHessian<T>, a: usize, b: usize| h.block(a, b).diagonal_entries();
    let left_diags: Vec<Vec<Vec<T>>> = (1..=n).map(|a| (1..=n).map(|b| diag(left, a, b)).collect()).collect();
    let right_diags: Vec<Vec<Vec<T>>> = (1..=n).map(|a| (1..=n).map(|b| diag(right, a, b)).collect()).collect();
    let zero = left.matrix.zero_element().clone();
    let one = zero.one_like();
    for a in 0..n {
        for b in 0..n {
            let target = if a == b { &one } else { &zero };
            for pos in 0..left.q * left.q {
                let sum = (0..n).fold(zero.clone(), |acc, g| {
                    acc.plus(&left_diags[a][g][pos].times(&right_diags[g][b][pos]))
                });
                if sum != *target {
                    return false;
                }
            }
        }
    }
    true
}

/// Determinant of `H(p)` without division. When every block is diagonal the
/// matrix is a direct sum of `q^2` matrices of size `n` (one per position
/// inside a block), and the determinant is the product of theirs.
pub fn segre_hessian_determinant(n: usize, q: usize) -> Result<QuotientScalar> {
    let hessian = hessian_at(&segre_point(n, q)?);
    if !hessian.all_blocks_diagonal() {
        return det_division_free(hessian.matrix());
    }
    let s = q * q;
    let m = hessian.matrix();
    let mut det = m.zero_element().one_like();
    for pos in 0..s {
        let slice = Matrix::from_fn(n, n, m.zero_element(), |a, b| m.get(a * s + pos, b * s + pos).clone());
        det = det.times(&det_division_free(&slice)?);
    }
    Ok(det)
}

/// Whether `det H(p)` is a unit of `Q[t]/(t^n + q - 1)`.
pub fn hessian_unit_check(n: usize, q: usize) -> Result<bool> {
    Ok(segre_hessian_determinant(n, q)?.is_unit())
}

/// A rational point with `evaluate = 0` and nonzero gradient.
pub fn sample_hypersurface_point(n: usize, q: usize, seed: u64) -> Result<MatTuple<Rational>> {
    sample_hypersurface_point_with(&mut random::rng(seed), n, q)
}

/// Draws every entry at random, then solves the polynomial (linear in `X_1`)
/// for the first entry of `X_1` with a nonzero coefficient.
pub fn sample_hypersurface_point_with<R: Rng>(rng: &mut R, n: usize, q: usize) -> Result<MatTuple<Rational>> {
    if n == 0 || q == 0 {
        return Err(Error::InvalidArgument("n and q must be positive".into()));
    }
    for _ in 0..SAMPLE_RETRIES {
        let mut point = random::point(rng, n, q, 9, 4);
        let grad = gradient(&point);
        let Some((i, j)) = (0..q)
            .flat_map(|i| (0..q).map(move |j| (i, j)))
            .find(|&(i, j)| !Scalar::is_zero(grad[0].get(i, j)))
        else {
            continue;
        };
        let var = VarIndex { alpha: 1, i: i + 1, j: j + 1 };
        let value = evaluate(&point);
        let coefficient = grad[0].get(i, j);
        let solved = point.entry(var) - value / coefficient;
        point.set_entry(var, solved);
        if Scalar::is_zero(&evaluate(&point)) && gradient(&point).iter().any(|b| !b.is_zero()) {
            return Ok(point);
        }
    }
    Err(Error::SamplingExhausted(SAMPLE_RETRIES))
}

/// Largest `rank H - 2` over `trials` sampled smooth points of the
/// hypersurface; stops early at the ambient maximum `n q^2 - 2`.
pub fn dual_dimension(n: usize, q: usize, trials: usize, seed: u64) -> Result<usize> {
    Ok(dual_dimension_ranks(n, q, trials, seed)?.into_iter().max().unwrap_or(2) - 2)
}

/// Hessian ranks at the sampled points, in sampling order.
pub fn dual_dimension_ranks(n: usize, q: usize, trials: usize, seed: u64) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the hypersurface is a hyperplane for n={n}; the Segre formula needs n >= 2"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let size = n * q * q;
    guard("n*q^2 Hessian size", size as u128, DUAL_DIMENSION_GUARD)?;
    let mut rng = random::rng(seed);
    let mut ranks = Vec::new();
    for _ in 0..trials {
        let point = sample_hypersurface_point_with(&mut rng, n, q)?;
        let rank = exact_rank(hessian_at(&point).matrix());
        ranks.push(rank);
        if rank == size {
            break;
        }
    }
    Ok(ranks)
}
