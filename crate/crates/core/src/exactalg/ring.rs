//! Coefficient rings: a polynomial ring, optionally presented as a quotient
//! through a degreewise [`Reducer`], and ring homomorphisms between them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::poly::{Domain, GradedPolynomial, Monomial, PolyRing, Rational};
use crate::error::{Error, Result};

/// Canonical-form map for a quotient of a polynomial ring.
///
/// Implementations must be ℤ-linear, idempotent, and send the ideal to zero.
pub trait Reducer: Send + Sync + fmt::Debug {
    fn reduce(&self, p: &GradedPolynomial) -> GradedPolynomial;
    fn name(&self) -> String;
}

/// A coefficient ring: a polynomial ring, or a quotient of one.
#[derive(Clone)]
pub struct CoefficientRing {
    base: Arc<PolyRing>,
    reducer: Option<Arc<dyn Reducer>>,
}

impl fmt::Debug for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoefficientRing({})", self.describe())
    }
}

impl PartialEq for CoefficientRing {
    fn eq(&self, other: &Self) -> bool {
        let same_base = Arc::ptr_eq(&self.base, &other.base) || self.base == other.base;
        let same_reducer = match (&self.reducer, &other.reducer) {
            (None, None) => true,
            (Some(a), Some(b)) => std::ptr::addr_eq(Arc::as_ptr(a), Arc::as_ptr(b)),
            _ => false,
        };
        same_base && same_reducer
    }
}

impl CoefficientRing {
    pub fn polynomial(base: Arc<PolyRing>) -> Self {
        CoefficientRing { base, reducer: None }
    }

    pub fn quotient(base: Arc<PolyRing>, reducer: Arc<dyn Reducer>) -> Self {
        CoefficientRing { base, reducer: Some(reducer) }
    }

    pub fn integers() -> Self {
        Self::polynomial(PolyRing::scalars(Domain::Z))
    }

    pub fn rationals() -> Self {
        Self::polynomial(PolyRing::scalars(Domain::Q))
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        &self.base
    }

    pub fn domain(&self) -> Domain {
        self.base.domain()
    }

    pub fn is_rational(&self) -> bool {
        self.base.domain() == Domain::Q
    }

    pub fn is_graded(&self) -> bool {
        self.base.is_graded()
    }

    pub fn is_quotient(&self) -> bool {
        self.reducer.is_some()
    }

    pub fn zero(&self) -> GradedPolynomial {
        GradedPolynomial::zero(&self.base)
    }

    pub fn one(&self) -> GradedPolynomial {
        GradedPolynomial::one(&self.base)
    }

    pub fn from_int(&self, c: i64) -> GradedPolynomial {
        GradedPolynomial::from_int(&self.base, c)
    }

    pub fn constant(&self, c: Rational) -> GradedPolynomial {
        GradedPolynomial::constant(&self.base, c)
    }

    pub fn var(&self, name: &str) -> Option<GradedPolynomial> {
        GradedPolynomial::var_named(&self.base, name).map(|p| self.reduce(&p))
    }

    /// Canonical representative (identity for polynomial rings).
    pub fn reduce(&self, p: &GradedPolynomial) -> GradedPolynomial {
        match &self.reducer {
            Some(r) => r.reduce(p),
            None => p.clone(),
        }
    }

    pub fn mul(&self, a: &GradedPolynomial, b: &GradedPolynomial) -> GradedPolynomial {
        self.reduce(&(a * b))
    }

    /// Divides by a scalar, failing unless the quotient stays in the domain.
    pub fn div_scalar(&self, p: &GradedPolynomial, s: &Rational) -> Result<GradedPolynomial> {
        if s == &Rational::one() {
            return Ok(p.clone());
        }
        let q = Rational::one() / s;
        let mut out = self.zero();
        for (m, c) in p.terms() {
            let v = c * &q;
            if self.domain() == Domain::Z && !v.is_integer() {
                return Err(Error::Structural {
                    degree: 0,
                    reason: format!("{c} is not divisible by {s} over Z"),
                });
            }
            out.add_term(m.clone(), v);
        }
        Ok(out)
    }

    /// The same ring over ℚ. Quotient rings keep their reducer only when
    /// already rational.
    pub fn rationalize(&self) -> Result<Self> {
        if self.is_rational() {
            return Ok(self.clone());
        }
        if self.reducer.is_some() {
            return Err(Error::Unsupported("rationalizing a quotient presentation over Z".into()));
        }
        Ok(Self::polynomial(self.base.with_domain(Domain::Q)))
    }

    pub fn describe(&self) -> String {
        let vars: Vec<String> = self.base.vars().iter().map(|v| v.name.clone()).collect();
        let mut s = if vars.is_empty() {
            self.domain().to_string()
        } else {
            format!("{}[{}]", self.domain(), vars.join(","))
        };
        if let Some(r) = &self.reducer {
            s.push_str(&format!("/{}", r.name()));
        }
        s
    }
}

/// A ring homomorphism out of a polynomial ring, given by the images of the
/// variables. The target may be a quotient ring.
#[derive(Clone, Debug)]
pub struct PolyHom {
    source: Arc<PolyRing>,
    target: CoefficientRing,
    images: Vec<GradedPolynomial>,
}

impl PolyHom {
    pub fn new(source: Arc<PolyRing>, target: CoefficientRing, images: Vec<GradedPolynomial>) -> Result<Self> {
        if images.len() != source.vars().len() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} variables",
                images.len(),
                source.vars().len()
            )));
        }
        for img in &images {
            img.ring().check_compatible(target.base())?;
        }
        let images = images.iter().map(|p| target.reduce(p)).collect();
        Ok(PolyHom { source, target, images })
    }

    pub fn source(&self) -> &Arc<PolyRing> {
        &self.source
    }

    pub fn target(&self) -> &CoefficientRing {
        &self.target
    }

    pub fn images(&self) -> &[GradedPolynomial] {
        &self.images
    }

    pub fn image_of(&self, name: &str) -> Option<&GradedPolynomial> {
        self.source.var_index(name).map(|i| &self.images[i])
    }

    pub fn apply(&self, p: &GradedPolynomial) -> Result<GradedPolynomial> {
        let mut cache = HashMap::new();
        self.apply_cached(p, &mut cache)
    }

    pub(crate) fn apply_cached(
        &self,
        p: &GradedPolynomial,
        powers: &mut HashMap<(usize, u32), GradedPolynomial>,
    ) -> Result<GradedPolynomial> {
        if !(Arc::ptr_eq(p.ring(), &self.source) || p.ring().vars() == self.source.vars()) {
            return Err(Error::VariableMismatch("polynomial is not in the source ring".into()));
        }
        let mut out = self.target.zero();
        for (m, c) in p.terms() {
            if self.target.domain() == Domain::Z && !c.is_integer() {
                return Err(Error::DomainMismatch(Domain::Q.to_string(), Domain::Z.to_string()));
            }
            let mut term = self.target.constant(c.clone());
            for (v, e) in m.pairs() {
                let pw = powers
                    .entry((v, e))
                    .or_insert_with(|| {
                        let mut acc = self.target.one();
                        for _ in 0..e {
                            acc = self.target.mul(&acc, &self.images[v]);
                        }
                        acc
                    })
                    .clone();
                term = self.target.mul(&term, &pw);
            }
            out += &term;
        }
        Ok(self.target.reduce(&out))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PolyHom) -> Result<PolyHom> {
        let images = self
            .images
            .iter()
            .map(|p| other.apply(p))
            .collect::<Result<Vec<_>>>()?;
        PolyHom::new(self.source.clone(), other.target.clone(), images)
    }
}

/// Monomial helper used by degreewise code: all monomials of a given total
/// ring degree in the variables of `ring`, in graded-lex descending order.
pub fn monomials_of_degree(ring: &PolyRing, degree: u32) -> Vec<Monomial> {
    fn rec(ring: &PolyRing, idx: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_pairs(cur.iter().copied()));
            return;
        }
        if idx == ring.vars().len() {
            return;
        }
        let d = ring.vars()[idx].degree;
        if d == 0 {
            rec(ring, idx + 1, left, cur, out);
            return;
        }
        let max = left / d;
        for e in (0..=max).rev() {
            if e > 0 {
                cur.push((idx, e));
            }
            rec(ring, idx + 1, left - e * d, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(ring, 0, degree, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{parse_polynomial, Variable};

    #[test]
    fn hom_composition() {
        let src = PolyRing::new(vec![Variable::new("a", 1), Variable::new("b", 2)], Domain::Z);
        let mid = PolyRing::new(vec![Variable::new("beta", 1)], Domain::Z);
        let midr = CoefficientRing::polynomial(mid.clone());
        let f = PolyHom::new(
            src.clone(),
            midr,
            vec![parse_polynomial(&mid, "-beta").unwrap(), parse_polynomial(&mid, "beta^2").unwrap()],
        )
        .unwrap();
        let g = PolyHom::new(mid.clone(), CoefficientRing::integers(), vec![GradedPolynomial::from_int(
            CoefficientRing::integers().base(),
            3,
        )])
        .unwrap();
        let p = parse_polynomial(&src, "a^2 + 2*b - a").unwrap();
        let direct = g.apply(&f.apply(&p).unwrap()).unwrap();
        let composed = f.then(&g).unwrap().apply(&p).unwrap();
        assert_eq!(direct, composed);
        assert_eq!(direct.as_constant().unwrap(), Rational::from_integer(30.into()));
    }

    #[test]
    fn monomial_enumeration_counts() {
        let r = PolyRing::new(vec![Variable::new("x1", 1), Variable::new("x2", 2), Variable::new("x3", 3)], Domain::Z);
        let counts: Vec<usize> = (0..=6).map(|d| monomials_of_degree(&r, d).len()).collect();
        // partitions into parts of size at most 3
        assert_eq!(counts, vec![1, 1, 2, 3, 4, 5, 7]);
    }
}
