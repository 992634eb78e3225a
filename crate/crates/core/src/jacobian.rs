//! Components of the zero locus of the order `n - 2` partials.
//!
//! Component `(alpha, r)` consists of the tuples supported on `X_{alpha-1}`
//! and `X_alpha` with `rank X_{alpha-1} <= r`, `rank X_alpha <= q - r` and
//! `X_alpha X_{alpha-1} = 0`. The labels `(alpha, 0)` and `(alpha + 1, q)`
//! name the same set; components are stored under `1 <= r <= q`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::exact::{exact_rank, int, Matrix, Rational, Scalar};
use crate::imm::{jac_n2_residuals, MatTuple};
use crate::random;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct JacComponent {
    pub alpha: usize,
    pub r: usize,
    pub dim: usize,
    #[serde(skip)]
    pub representative: MatTuple<Rational>,
}

fn require_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "the order n-2 Jacobian locus needs n >= 3 (got n={n})"
        )));
    }
    Ok(())
}

/// `q^2 + r q - r^2`.
pub fn jac_dimension(q: usize, r: usize) -> usize {
    assert!(r <= q, "r must not exceed q");
    q * q + r * q - r * r
}

/// Maps `(alpha, 0)` to `(alpha + 1, q)` and reduces `alpha` into `1..=n`.
pub fn canonical_label(alpha: usize, r: usize, n: usize, q: usize) -> (usize, usize) {
    let alpha = (alpha + n - 1) % n + 1;
    if r == 0 {
        (alpha % n + 1, q)
    } else {
        (alpha, r)
    }
}

/// `X_{alpha-1} = diag(I_r, 0)`, `X_alpha` with `I_{q-r}` in its top rows and
/// last `q - r` columns, every other block zero.
pub fn jac_representative(alpha: usize, r: usize, n: usize, q: usize) -> Result<MatTuple<Rational>> {
    require_n(n)?;
    if r > q || q == 0 {
        return Err(Error::InvalidArgument(format!("need 0 <= r <= q, q >= 1 (got r={r}, q={q})")));
    }
    let mut point = MatTuple::zeros(n, q, &int(0))?;
    let zero = int(0);
    point.set_block(alpha + n - 1, Matrix::from_fn(q, q, &zero, |i, j| int((i == j && i < r) as i64)));
    point.set_block(alpha, Matrix::from_fn(q, q, &zero, |i, j| int((i + r == j) as i64)));
    Ok(point)
}

/// The `n q` components in label order.
pub fn jac_components(n: usize, q: usize) -> Result<Vec<JacComponent>> {
    require_n(n)?;
    let labels: BTreeSet<(usize, usize)> =
        (1..=n).flat_map(|a| (0..=q).map(move |r| canonical_label(a, r, n, q))).collect();
    labels
        .into_iter()
        .map(|(alpha, r)| {
            Ok(JacComponent { alpha, r, dim: jac_dimension(q, r), representative: jac_representative(alpha, r, n, q)? })
        })
        .collect()
}

pub fn jacobian_locus_dim(n: usize, q: usize) -> Result<usize> {
    require_n(n)?;
    Ok((0..=q).map(|r| jac_dimension(q, r)).max().unwrap_or(0))
}

/// Whether `point` satisfies the defining conditions of component `(alpha, r)`.
pub fn lies_in_component(point: &MatTuple<Rational>, alpha: usize, r: usize) -> bool {
    let n = point.n();
    let q = point.q();
    let prev = point.block(alpha + n - 1);
    let here = point.block(alpha);
    let support_ok = (1..=n)
        .filter(|&b| b != (alpha + n - 2) % n + 1 && b != (alpha + n - 1) % n + 1)
        .all(|b| point.block(b).is_zero());
    support_ok && exact_rank(prev) <= r && exact_rank(here) <= q - r && here.mul(prev).is_zero()
}

pub fn residuals_vanish(point: &MatTuple<Rational>) -> bool {
    jac_n2_residuals(point).iter().all(Scalar::is_zero)
}

/// Rank of the Jacobian of the chart `(A, X', Y2) -> ([X'; A X'], [-Y2 A, Y2])`
/// with `A: (q-r) x r`, `X': r x q`, `Y2: q x (q-r)`, maximized over three
/// random rational chart points.
pub fn jac_dim_oracle(q: usize, r: usize, seed: u64) -> Result<usize> {
    if r > q {
        return Err(Error::InvalidArgument(format!("need r <= q (got r={r}, q={q})")));
    }
    let mut rng = random::rng(seed);
    Ok((0..3).map(|_| chart_jacobian_rank(&mut rng, q, r)).max().unwrap_or(0))
}

fn chart_jacobian_rank<R: Rng>(rng: &mut R, q: usize, r: usize) -> usize {
    let params = (q - r) * r + r * q + q * (q - r);
    let base: Vec<Rational> = (0..params).map(|_| random::rational_in(rng, 20, 5)).collect();
    let f0 = chart_map(&base, q, r);
    // every output is of degree at most one in each parameter, so a unit step
    // gives the exact partial derivative
    let columns: Vec<Vec<Rational>> = (0..params)
        .map(|k| {
            let mut p = base.clone();
            p[k] += int(1);
            chart_map(&p, q, r).iter().zip(&f0).map(|(a, b)| a - b).collect()
        })
        .collect();
    let jac = Matrix::from_fn(2 * q * q, params, &int(0), |i, k| columns[k][i].clone());
    exact_rank(&jac)
}

fn chart_map(p: &[Rational], q: usize, r: usize) -> Vec<Rational> {
    let zero = int(0);
    let (na, nx) = ((q - r) * r, r * q);
    let a = Matrix::from_fn(q - r, r, &zero, |i, j| p[i * r + j].clone());
    let xp = Matrix::from_fn(r, q, &zero, |i, j| p[na + i * q + j].clone());
    let y2 = Matrix::from_fn(q, q - r, &zero, |i, j| p[na + nx + i * (q - r) + j].clone());
    let ax = a.mul(&xp);
    let ya = y2.mul(&a);
    let x = Matrix::from_fn(q, q, &zero, |i, j| if i < r { xp.get(i, j).clone() } else { ax.get(i - r, j).clone() });
    let y = Matrix::from_fn(q, q, &zero, |i, j| if j < r { -ya.get(i, j) } else { y2.get(i, j - r).clone() });
    x.entries().iter().chain(y.entries()).cloned().collect()
}
