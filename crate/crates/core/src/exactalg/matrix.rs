//! Dense integer matrices and the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::poly::Integer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![Integer::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Integer::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows<T: Into<Integer> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntegerMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn determinant(&self) -> Integer {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Integer::one();
        }
        let mut a = self.clone();
        let mut sign = Integer::one();
        let mut prev = Integer::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Integer::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k·row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &Integer) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k·col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &Integer) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = Integer;
    fn index(&self, (i, j): (usize, usize)) -> &Integer {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Integer {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// all diagonal entries non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<Integer> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

/// Smith normal form by elementary operations, always pivoting on the entry of
/// smallest absolute value to limit coefficient growth. Deterministic: ties
/// are broken by the first position in row-major order.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let pivot = d[(t, t)].clone();
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = Integer::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(mut u: IntegerMatrix, mut d: IntegerMatrix, v: IntegerMatrix) -> SmithForm {
    for t in 0..d.rows.min(d.cols) {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U·M·V != D for\n{m}");
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.determinant().abs(), Integer::one());
        assert_eq!(s.v.determinant().abs(), Integer::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken: {f:?}");
        }
        assert!(f.iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntegerMatrix::identity(2));
        assert_eq!(s.d, IntegerMatrix::identity(2));
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the invariant factors are 2 and 4
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.determinant(), Integer::from(-8));
        let s = check(&m);
        assert_eq!(s.d, IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntegerMatrix::zeros(2, 3));
        assert_eq!(s.d, IntegerMatrix::zeros(2, 3));
    }

    #[test]
    fn deterministic() {
        let m = IntegerMatrix::from_rows(&[vec![6, 10, 15], vec![4, 0, -8], vec![3, 3, 3]]);
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    #[test]
    fn determinant_small() {
        let m = IntegerMatrix::from_rows(&[vec![0, 2, 1], vec![3, -1, 4], vec![1, 1, 1]]);
        // cofactor expansion along the first row: -2·(3-4) + 1·(3+1)
        assert_eq!(m.determinant(), Integer::from(6));
    }

    proptest! {
        #[test]
        fn snf_invariants(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-9i64..10, 16)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let m = IntegerMatrix::from_rows(&data);
            let s = check(&m);
            if rows == cols {
                let prod: Integer = s.invariant_factors().iter().product();
                let det = m.determinant().abs();
                if det.is_zero() {
                    prop_assert!(s.rank() < rows);
                } else {
                    prop_assert_eq!(prod, det);
                }
            }
        }
    }
}
