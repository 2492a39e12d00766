//! Exact short-vector enumeration and isometry search for positive definite
//! integer quadratic forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::budget::Budget;
use crate::error::Result;
use crate::matrix::{dot, IntMatrix};

/// Rational upper-triangular form: `x A x^T = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
/// `None` when `a` is not positive definite.
fn quadratic_decomposition(a: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let k = a.rows();
    let mut q: Vec<Vec<BigRational>> =
        (0..k).map(|i| (0..k).map(|j| BigRational::from_integer(a.get(i, j).clone())).collect()).collect();
    for i in 0..k {
        if !q[i][i].is_positive() {
            return None;
        }
        for j in i + 1..k {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for l in i + 1..k {
            for j in l..k {
                let d = &q[l][i] * &q[i][j];
                q[l][j] -= d;
            }
        }
    }
    Some(q)
}

pub fn is_positive_definite(a: &IntMatrix) -> bool {
    a.is_square() && a.is_symmetric() && quadratic_decomposition(a).is_some()
}

/// Value of the form at `x`.
pub fn norm(a: &IntMatrix, x: &[BigInt]) -> BigInt {
    let ax: Vec<BigInt> = (0..a.rows()).map(|i| dot(a.row(i), x)).collect();
    dot(&ax, x)
}

/// All nonzero `x` with `x A x^T <= bound`, paired with their norms.
/// `a` must be positive definite.
pub fn short_vectors(a: &IntMatrix, bound: &BigInt, budget: &mut Budget) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    let k = a.rows();
    let q = quadratic_decomposition(a).expect("positive definite form");
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); k];
    if k > 0 {
        enumerate_level(a, &q, k - 1, BigRational::from_integer(bound.clone()), &mut x, &mut out, budget)?;
    }
    Ok(out)
}

fn enumerate_level(
    a: &IntMatrix,
    q: &[Vec<BigRational>],
    i: usize,
    remaining: BigRational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<(Vec<BigInt>, BigInt)>,
    budget: &mut Budget,
) -> Result<()> {
    let k = x.len();
    let mut c = BigRational::zero();
    for j in i + 1..k {
        c += &q[i][j] * BigRational::from_integer(x[j].clone());
    }
    let r = &remaining / &q[i][i];
    let s: BigInt = r.floor().to_integer().sqrt();
    let lo: BigInt = (-&c).floor().to_integer() - &s - 1;
    let hi: BigInt = (-&c).ceil().to_integer() + &s + 1;
    let mut xi = lo;
    while xi <= hi {
        budget.tick()?;
        let shifted = BigRational::from_integer(xi.clone()) + &c;
        let used = &q[i][i] * &shifted * &shifted;
        if used <= remaining {
            x[i] = xi.clone();
            let rest = &remaining - &used;
            if i == 0 {
                if x.iter().any(|v| !v.is_zero()) {
                    out.push((x.clone(), norm(a, x)));
                }
            } else {
                enumerate_level(a, q, i - 1, rest, x, out, budget)?;
            }
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
    Ok(())
}

/// Number of lattice vectors of each norm `1..=bound`.
pub fn theta_prefix(vectors: &[(Vec<BigInt>, BigInt)], bound: usize) -> Vec<usize> {
    let mut counts = vec![0usize; bound];
    for (_, n) in vectors {
        if let Ok(t) = usize::try_from(n) {
            if (1..=bound).contains(&t) {
                counts[t - 1] += 1;
            }
        }
    }
    counts
}

/// Outcome of [`find_isometry`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometrySearch {
    Found(IntMatrix),
    /// Exhaustive search finished with no isometry.
    None,
    /// The two forms have different numbers of vectors of some norm.
    ThetaDiffers { a: Vec<usize>, b: Vec<usize> },
}

/// Finds `U` with `U A U^T = B` for positive definite forms of equal size and
/// determinant. Rows of `U` are chosen among short vectors of `A`, so the
/// search is exhaustive.
pub fn find_isometry(a: &IntMatrix, b: &IntMatrix, budget: &mut Budget) -> Result<IsometrySearch> {
    let k = a.rows();
    if k == 0 {
        return Ok(IsometrySearch::Found(IntMatrix::zeros(0, 0)));
    }
    let max_diag = (0..k).map(|i| b.get(i, i).clone()).max().expect("nonempty");
    let bound = usize::try_from(&max_diag).unwrap_or(usize::MAX);
    let va = short_vectors(a, &max_diag, budget)?;
    let vb = short_vectors(b, &max_diag, budget)?;
    if bound != usize::MAX {
        let (ta, tb) = (theta_prefix(&va, bound), theta_prefix(&vb, bound));
        if ta != tb {
            return Ok(IsometrySearch::ThetaDiffers { a: ta, b: tb });
        }
    }
    // Visit rows of B with the fewest candidates first.
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..va.len()).filter(|&v| &va[v].1 == b.get(i, i)).collect())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| candidates[i].len());
    let images: Vec<Vec<BigInt>> =
        va.iter().map(|(v, _)| (0..k).map(|j| dot(v, &a.column(j))).collect()).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    if backtrack(&va, &images, b, &candidates, &order, &mut chosen, budget)? {
        let mut u = IntMatrix::zeros(k, k);
        for (pos, &row) in order.iter().enumerate() {
            for j in 0..k {
                u.set(row, j, va[chosen[pos]].0[j].clone());
            }
        }
        return Ok(IsometrySearch::Found(u));
    }
    Ok(IsometrySearch::None)
}

fn backtrack(
    va: &[(Vec<BigInt>, BigInt)],
    images: &[Vec<BigInt>],
    b: &IntMatrix,
    candidates: &[Vec<usize>],
    order: &[usize],
    chosen: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool> {
    let pos = chosen.len();
    if pos == order.len() {
        return Ok(true);
    }
    let row = order[pos];
    for &v in &candidates[row] {
        budget.tick()?;
        let ok = (0..pos).all(|p| &dot(&images[v], &va[chosen[p]].0) == b.get(row, order[p]));
        if ok {
            chosen.push(v);
            if backtrack(va, images, b, candidates, order, chosen, budget)? {
                return Ok(true);
            }
            chosen.pop();
        }
    }
    Ok(false)
}

/// Unimodular `V` with `V A V^T = diag(P, 0)` where `P` is the nonsingular
/// part of a positive semidefinite `a`, LLL-reduced. Returns `(V, P)`.
pub fn split_kernel(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let k = a.rows();
    let (h, v) = crate::matrix::hermite_normal_form(a);
    let r = (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let v = if r == k { IntMatrix::identity(k) } else { v.into_matrix() };
    let full = a.congruent_by(&v).expect("square");
    let idx: Vec<usize> = (0..r).collect();
    let (t, p) = lll_reduce(&full.submatrix(&idx, &idx));
    let lift = t.direct_sum(&IntMatrix::identity(k - r));
    (lift.mul(&v).expect("square"), p)
}

fn round_rational(x: &BigRational) -> BigInt {
    (x + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

/// Gram-matrix LLL with `delta = 3/4`. Returns unimodular `T` and `T A T^T`.
pub fn lll_reduce(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let k = a.rows();
    let mut t = IntMatrix::identity(k);
    let mut g = a.clone();
    let delta = BigRational::new(3.into(), 4.into());
    let gso = |g: &IntMatrix| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut bstar = vec![BigRational::zero(); k];
        for i in 0..k {
            for j in 0..i {
                let mut r = BigRational::from_integer(g.get(i, j).clone());
                for l in 0..j {
                    r -= &mu[i][l] * &mu[j][l] * &bstar[l];
                }
                mu[i][j] = r / &bstar[j];
            }
            let mut b = BigRational::from_integer(g.get(i, i).clone());
            for l in 0..i {
                b -= &mu[i][l] * &mu[i][l] * &bstar[l];
            }
            bstar[i] = b;
        }
        (mu, bstar)
    };
    // Row i += q row j, applied to both T and the Gram matrix.
    let add_row = |t: &mut IntMatrix, g: &mut IntMatrix, i: usize, j: usize, q: &BigInt| {
        let mut e = IntMatrix::identity(k);
        e.set(i, j, q.clone());
        *t = e.mul(t).expect("square");
        *g = g.congruent_by(&e).expect("square");
    };
    let mut i = 1;
    while i < k {
        for j in (0..i).rev() {
            let (mu, _) = gso(&g);
            let q = round_rational(&mu[i][j]);
            if !q.is_zero() {
                add_row(&mut t, &mut g, i, j, &(-q));
            }
        }
        let (mu, bstar) = gso(&g);
        if bstar[i] >= (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &bstar[i - 1] {
            i += 1;
        } else {
            let mut p: Vec<usize> = (0..k).collect();
            p.swap(i, i - 1);
            let e = IntMatrix::identity(k).select_rows(&p);
            t = e.mul(&t).expect("square");
            g = g.congruent_by(&e).expect("square");
            i = (i - 1).max(1);
        }
    }
    (t, g)
}

#[cfg(test)]
fn is_zero_vec(x: &[BigInt]) -> bool {
    x.iter().all(|v| v.is_zero())
}
