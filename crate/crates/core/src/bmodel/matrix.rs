//! Square and rectangular matrices over a coefficient ring, and evaluation of
//! power series on commuting nilpotent matrices.

use std::fmt;

use crate::exactalg::{CoefficientRing, GradedPolynomial};
use crate::series::TruncatedSeries;

/// Dense matrix acting on column vectors of cell coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix {
    ring: CoefficientRing,
    rows: usize,
    cols: usize,
    data: Vec<GradedPolynomial>,
}

impl RingMatrix {
    pub fn zeros(ring: &CoefficientRing, rows: usize, cols: usize) -> Self {
        RingMatrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &CoefficientRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedPolynomial {
        &self.data[i * self.cols + j]
    }

    /// Stores the canonical form of `v`.
    pub fn set(&mut self, i: usize, j: usize, v: GradedPolynomial) {
        self.data[i * self.cols + j] = self.ring.reduce(&v);
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &GradedPolynomial) {
        let k = i * self.cols + j;
        self.data[k] = self.ring.reduce(&(&self.data[k] + v));
    }

    pub fn column(&self, j: usize) -> Vec<GradedPolynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GradedPolynomial::is_zero)
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, other: &RingMatrix) -> RingMatrix {
        let mut out = self.mul_raw(other);
        out.normalize();
        out
    }

    // Products, sums and scalings without reduction in a quotient ring;
    // `normalize` once at the end gives the same result.
    fn mul_raw(&self, other: &RingMatrix) -> RingMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_product(a, b);
                    }
                }
            }
        }
        out
    }

    fn add_raw(&mut self, other: &RingMatrix) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x = &*x + y;
            }
        }
    }

    fn add_scaled_raw(&mut self, other: &RingMatrix, s: &GradedPolynomial) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                x.add_product(y, s);
            }
        }
    }

    pub fn add(&self, other: &RingMatrix) -> RingMatrix {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RingMatrix) -> RingMatrix {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &RingMatrix, f: impl Fn(&GradedPolynomial, &GradedPolynomial) -> GradedPolynomial) -> RingMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes differ");
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x = f(x, y);
        }
        out.normalize();
        out
    }

    pub fn scale(&self, s: &GradedPolynomial) -> RingMatrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = &*x * s;
        }
        out.normalize();
        out
    }

    pub fn neg(&self) -> RingMatrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = x.neg();
        }
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.ring.is_quotient() {
            for x in self.data.iter_mut().filter(|x| !x.is_zero()) {
                *x = self.ring.reduce(x);
            }
        }
    }

    pub fn pow(&self, e: u32) -> RingMatrix {
        let mut acc = Self::identity(&self.ring, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn apply(&self, v: &[GradedPolynomial]) -> Vec<GradedPolynomial> {
        assert_eq!(v.len(), self.cols, "vector length does not match the matrix");
        let mut out = vec![self.ring.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !x.is_zero() {
                    o.add_product(a, x);
                }
            }
            *o = self.ring.reduce(o);
        }
        out
    }

    /// Kronecker product; row `(i, k)` is index `i·rows(b) + k`.
    pub fn kron(a: &RingMatrix, b: &RingMatrix) -> RingMatrix {
        let mut out = Self::zeros(&a.ring, a.rows * b.rows, a.cols * b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let y = b.get(k, l);
                        if !y.is_zero() {
                            out.set(i * b.rows + k, j * b.cols + l, x * y);
                        }
                    }
                }
            }
        }
        out
    }

    /// Entrywise image under a ring map.
    pub fn map_entries(
        &self,
        target: &CoefficientRing,
        mut f: impl FnMut(&GradedPolynomial) -> crate::Result<GradedPolynomial>,
    ) -> crate::Result<RingMatrix> {
        let mut out = Self::zeros(target, self.rows, self.cols);
        for (k, x) in self.data.iter().enumerate() {
            if !x.is_zero() {
                out.data[k] = target.reduce(&f(x)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `s(M₁, …, M_k)` for pairwise commuting matrices. Exact when every product
/// of more than `s.order()` of the matrices vanishes.
pub fn eval_series(s: &TruncatedSeries, mats: &[&RingMatrix]) -> RingMatrix {
    assert_eq!(s.vars().len(), mats.len(), "one matrix per formal variable");
    let n = mats.first().map_or(0, |m| m.rows());
    let ring = s.ring();
    if mats.is_empty() {
        let mut out = RingMatrix::identity(ring, n);
        out = out.scale(&s.constant_term());
        return out;
    }
    let terms: Vec<(&[u32], &GradedPolynomial)> = s.terms().map(|(e, c)| (&e[..], c)).collect();
    let mut out = horner(ring, n, &terms, 0, mats);
    out.normalize();
    out
}

// Nested Horner scheme: group by the exponent of variable `var`, evaluate
// each group in the remaining variables, then fold with `M_var`.
fn horner(
    ring: &CoefficientRing,
    n: usize,
    terms: &[(&[u32], &GradedPolynomial)],
    var: usize,
    mats: &[&RingMatrix],
) -> RingMatrix {
    if var + 1 == mats.len() {
        let mut out = RingMatrix::zeros(ring, n, n);
        let mut powers = vec![RingMatrix::identity(ring, n)];
        for &(e, c) in terms {
            while powers.len() <= e[var] as usize {
                let next = powers.last().expect("nonempty").mul_raw(mats[var]);
                powers.push(next);
            }
            out.add_scaled_raw(&powers[e[var] as usize], c);
        }
        return out;
    }
    let mut groups: std::collections::BTreeMap<u32, Vec<(&[u32], &GradedPolynomial)>> = Default::default();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let Some(&top) = groups.keys().next_back() else {
        return RingMatrix::zeros(ring, n, n);
    };
    let mut acc = RingMatrix::zeros(ring, n, n);
    for d in (0..=top).rev() {
        if !acc.is_zero() {
            acc = acc.mul_raw(mats[var]);
        }
        if let Some(g) = groups.get(&d) {
            acc.add_raw(&horner(ring, n, g, var + 1, mats));
        }
    }
    acc
}

/// `e₀, …, e_r` of commuting matrices via `∏ (1 + t·M_k)`.
pub fn elementary_symmetric(ring: &CoefficientRing, n: usize, mats: &[RingMatrix]) -> Vec<RingMatrix> {
    let mut e = vec![RingMatrix::identity(ring, n)];
    for m in mats {
        let mut next = e.clone();
        next.push(RingMatrix::zeros(ring, n, n));
        for i in 1..next.len() {
            next[i] = next[i].add(&m.mul(&e[i - 1]));
        }
        e = next;
    }
    e
}
