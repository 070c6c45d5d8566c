//! Exact integer and rational linear algebra: Smith normal form with
//! transforms, lattice membership, rational solves, determinants and
//! signatures.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;

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
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(domain("matrix rows have different lengths"));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let mut m = IntMatrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(domain(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// `v^T M v`.
    pub fn quadratic(&self, v: &[BigInt]) -> Result<BigInt> {
        Ok(self.mul_vec(v)?.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Keeps the listed rows, in order.
    pub fn select_rows(&self, keep: &[usize]) -> IntMatrix {
        IntMatrix {
            rows: keep.len(),
            cols: self.cols,
            data: keep.iter().flat_map(|&i| self.row(i).iter().cloned()).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let x = &self[(src, j)] * f;
            self[(dst, j)] += x;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let x = &self[(i, src)] * f;
            self[(i, dst)] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `u * m * v = diag(d)` with `d` nonnegative, each entry dividing the next,
/// zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().take_while(|x| !x.is_zero()).count()
    }

    /// Factors different from one, i.e. the cyclic summands `Z/d` of the
    /// cokernel (a zero factor stands for `Z`).
    pub fn torsion_and_free(&self, rows: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self.d.iter().filter(|x| !x.is_one()).cloned().collect();
        out.extend(std::iter::repeat_n(BigInt::zero(), rows - self.d.len()));
        out
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let n = r.min(c);
    let mut t = 0;
    'outer: while t < n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let f = -a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row(i, t, &f);
                    u.add_row(i, t, &f);
                    clean &= a[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let f = -a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col(j, t, &f);
                    v.add_col(j, t, &f);
                    clean &= a[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    SnfResult { d, u, v }
}

/// Checks `u * m * v = diag(d)`, unimodularity and the divisibility chain.
pub fn verify_snf(m: &IntMatrix, s: &SnfResult) -> Result<()> {
    let prod = s.u.mul(m)?.mul(&s.v)?;
    for i in 0..m.rows {
        for j in 0..m.cols {
            let want = if i == j { s.d[i].clone() } else { BigInt::zero() };
            if prod[(i, j)] != want {
                return Err(Error::Invariant(format!("u*m*v differs from the diagonal at ({i}, {j})")));
            }
        }
    }
    if !determinant(&s.u)?.abs().is_one() || !determinant(&s.v)?.abs().is_one() {
        return Err(Error::Invariant("snf transform is not unimodular".into()));
    }
    for w in s.d.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
        if !ok || w[0].is_negative() {
            return Err(Error::Invariant(format!("invariant factors {} and {} break the chain", w[0], w[1])));
        }
    }
    Ok(())
}

/// An integer `x` with `m x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows {
        return Err(domain(format!("right-hand side of length {} for {} rows", b.len(), m.rows)));
    }
    let s = smith_normal_form(m);
    Ok(solve_with_snf(&s, m.cols, b))
}

/// Same as [`solve_integer`] with a precomputed normal form of the `rows x cols` matrix.
pub fn solve_with_snf(s: &SnfResult, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = s.u.mul_vec(b).expect("dimensions checked by caller");
    let mut y = vec![BigInt::zero(); cols];
    for (i, x) in ub.iter().enumerate() {
        match s.d.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, rem) = x.div_rem(d);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            _ => {
                if !x.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(s.v.mul_vec(&y).expect("square transform"))
}

pub fn in_column_span(m: &IntMatrix, b: &[BigInt]) -> Result<bool> {
    Ok(solve_integer(m, b)?.is_some())
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(domain(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = x;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Determinants of the upper-left `1x1, 2x2, ...` blocks.
pub fn leading_principal_minors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(domain("principal minors need a square matrix"));
    }
    (1..=m.rows)
        .map(|k| {
            let keep: Vec<usize> = (0..k).collect();
            let sub = m.select_rows(&keep).transpose().select_rows(&keep);
            determinant(&sub)
        })
        .collect()
}

/// Unique `x` with `m x = b` over the rationals.
#[allow(clippy::needless_range_loop)]
pub fn solve_rational(m: &IntMatrix, b: &[BigInt]) -> Result<Vec<Rational>> {
    if !m.is_square() || b.len() != m.rows {
        return Err(domain("rational solve needs a square system"));
    }
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = m.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect();
            row.push(Rational::from_integer(b[i].clone()));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or_else(|| Error::Singular(format!("{m}")))?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let d = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &d;
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Counts of positive, negative and zero entries after diagonalizing a
/// symmetric matrix by congruence over the rationals.
#[allow(clippy::needless_range_loop)]
pub fn inertia(m: &IntMatrix) -> Result<(usize, usize, usize)> {
    if !m.is_symmetric() {
        return Err(domain("inertia needs a symmetric matrix"));
    }
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> =
        (0..n).map(|i| m.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // with both diagonals zero, adding row/col j to k leaves 2 a[k][j] on the diagonal
                for c in 0..n {
                    let x = &a[k][c] + &a[j][c];
                    a[k][c] = x;
                }
                for row in a.iter_mut() {
                    let x = &row[k] + &row[j];
                    row[k] = x;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            neg += 1;
        } else {
            pos += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
            }
            for row in a.iter_mut().skip(k) {
                let d = &f * &row[k];
                row[i] = &row[i] - &d;
            }
        }
    }
    Ok((pos, neg, zero))
}

pub fn signature(m: &IntMatrix) -> Result<i64> {
    let (p, n, _) = inertia(m)?;
    Ok(p as i64 - n as i64)
}

pub fn is_negative_definite(m: &IntMatrix) -> Result<bool> {
    Ok(inertia(m)?.1 == m.rows)
}
