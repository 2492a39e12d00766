//! Dense arbitrary-precision integer matrices and the exact normal forms
//! built on them (Bareiss determinant, Hermite and Smith forms, unimodular
//! inverses, inertia).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major matrix over the integers with unbounded entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from small-integer rows. Panics on ragged input; meant
    /// for literals in code and tests.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// Like [`IntMatrix::from_rows`] but with an explicit column count so
    /// that `0 x c` matrices can be written.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        if rows.is_empty() {
            return Self::zeros(0, cols);
        }
        let m = Self::from_rows(rows);
        assert_eq!(m.cols, cols);
        m
    }

    pub fn from_diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_nested(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries as `i64`, or `None` if any entry does not fit.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * self^T`.
    pub fn gram(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let s = dot(self.row(i), self.row(j));
                out.data[j * self.rows + i] = s.clone();
                out.data[i * self.rows + j] = s;
            }
        }
        out
    }

    /// `u * self * u^T`.
    pub fn congruent_by(&self, u: &IntMatrix) -> Result<Self> {
        u.mul(self)?.mul(&u.transpose())
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("addition of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack with different row counts".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Block diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &IntMatrix) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// A square integer matrix with determinant `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularWitness(IntMatrix);

impl UnimodularWitness {
    pub fn new(u: IntMatrix) -> Result<Self> {
        let d = det_bareiss(&u)?;
        if d.abs() != BigInt::one() {
            return Err(Error::NotUnimodular { det: d.to_string() });
        }
        Ok(UnimodularWitness(u))
    }

    pub fn identity(n: usize) -> Self {
        UnimodularWitness(IntMatrix::identity(n))
    }

    pub(crate) fn new_unchecked(u: IntMatrix) -> Self {
        debug_assert!(det_bareiss(&u).map(|d| d.abs().is_one()).unwrap_or(false));
        UnimodularWitness(u)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn inverse(&self) -> IntMatrix {
        inverse_unimodular(&self.0).expect("witness is unimodular by construction")
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                Some(p) => {
                    m.swap_rows(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let pivot = m.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = pivot;
    }
    Ok(sign * m.get(n - 1, n - 1))
}

/// Row-style Hermite normal form: returns `(h, u)` with `u * a = h`.
///
/// Convention: `h` is in row echelon form with zero rows at the bottom, every
/// pivot is positive, and the entries above a pivot lie in `[0, pivot)`. Two
/// matrices with the same column count have the same row lattice exactly when
/// their forms agree after dropping zero rows.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, UnimodularWitness) {
    let (r, c) = a.shape();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut p = 0;
    for j in 0..c {
        if p == r {
            break;
        }
        loop {
            let best = (p..r)
                .filter(|&i| !h.get(i, j).is_zero())
                .min_by(|&x, &y| h.get(x, j).abs().cmp(&h.get(y, j).abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut done = true;
            for i in p + 1..r {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = -h.get(i, j).div_floor(h.get(p, j));
                h.add_row_multiple(i, p, &q);
                u.add_row_multiple(i, p, &q);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(p, j).is_zero() {
            continue;
        }
        if h.get(p, j).is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for i in 0..p {
            let q = -h.get(i, j).div_floor(h.get(p, j));
            h.add_row_multiple(i, p, &q);
            u.add_row_multiple(i, p, &q);
        }
        p += 1;
    }
    (h, UnimodularWitness::new_unchecked(u))
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    let (h, _) = hermite_normal_form(a);
    (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// Smith normal form `left * a * right = diag(d_1, ..., d_k, 0...)` with
/// `d_1 | d_2 | ...`, all nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub diag: Vec<BigInt>,
    pub left: UnimodularWitness,
    pub right: UnimodularWitness,
}

impl SnfResult {
    /// The `rows x cols` matrix carrying `diag` on its main diagonal.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (r, c) = a.shape();
    let mut d = a.clone();
    let mut left = IntMatrix::identity(r);
    let mut right = IntMatrix::identity(c);
    let k = r.min(c);
    for t in 0..k {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut pivot = None;
        for i in t..r {
            for j in t..c {
                let v = d.get(i, j);
                if !v.is_zero() && pivot.map_or(true, |(pi, pj)| v.abs() < d.get(pi, pj).abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    d.swap_rows(t, i);
                    left.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    right.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offender = (t + 1..r)
                .find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(d.get(t, t))));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }
    let diag = (0..k).map(|i| d.get(i, i).clone()).collect();
    SnfResult {
        diag,
        left: UnimodularWitness::new_unchecked(left),
        right: UnimodularWitness::new_unchecked(right),
    }
}

/// Exact inverse of a unimodular matrix.
pub fn inverse_unimodular(a: &IntMatrix) -> Result<IntMatrix> {
    let d = det_bareiss(a)?;
    if !d.abs().is_one() {
        return Err(Error::NotUnimodular { det: d.to_string() });
    }
    // HNF of a unimodular matrix is the identity, so the transform is the inverse.
    let (h, u) = hermite_normal_form(a);
    debug_assert_eq!(h, IntMatrix::identity(a.rows));
    Ok(u.into_matrix())
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia from the exact characteristic polynomial. The polynomial of a
/// symmetric matrix has only real roots, so Descartes' rule of signs counts
/// positive and negative roots exactly.
pub fn inertia(a: &IntMatrix) -> Result<Inertia> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows;
    let coeffs = characteristic_polynomial(a);
    let zero = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(n);
    let positive = sign_changes(coeffs.iter().cloned());
    let negative =
        sign_changes(coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }));
    debug_assert_eq!(positive + negative + zero, n);
    Ok(Inertia { positive, negative, zero })
}

/// Coefficients `c_0..=c_n` of `det(xI - a)` via Faddeev-LeVerrier; the
/// divisions are exact over the integers.
pub fn characteristic_polynomial(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m).expect("square");
        for i in 0..n {
            *next.get_mut(i, i) += &coeffs[n - k + 1];
        }
        let t = a.mul(&next).expect("square").trace();
        coeffs[n - k] = -(t / BigInt::from(k));
        m = next;
    }
    coeffs
}

fn sign_changes<I: Iterator<Item = BigInt>>(it: I) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for c in it {
        if c.is_zero() {
            continue;
        }
        let pos = c.is_positive();
        if let Some(l) = last {
            if l != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}
