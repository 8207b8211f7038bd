//! Sparse graded multivariate polynomials with exact ℤ or ℚ coefficients.
//!
//! A polynomial carries a shared handle to its [`PolyRing`] (the ordered
//! variable universe plus the coefficient domain). Terms are stored in a
//! `BTreeMap` keyed by sparse monomials, so iteration order is deterministic;
//! serialization and display use the graded-lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Coefficient domain of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    Z,
    Q,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Z => write!(f, "Z"),
            Domain::Q => write!(f, "Q"),
        }
    }
}

/// A ring variable with its grading degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub degree: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Variable { name: name.into(), degree }
    }
}

/// The variable universe and coefficient domain shared by a family of
/// polynomials.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<Variable>,
    domain: Domain,
    graded: bool,
}

impl PolyRing {
    /// Builds a graded ring. Panics on duplicate variable names.
    pub fn new(vars: Vec<Variable>, domain: Domain) -> Arc<Self> {
        Self::build(vars, domain, true)
    }

    /// A ring whose elements are not expected to be homogeneous (for
    /// instance after specializing a degree-one parameter to a number).
    pub fn ungraded(vars: Vec<Variable>, domain: Domain) -> Arc<Self> {
        Self::build(vars, domain, false)
    }

    fn build(vars: Vec<Variable>, domain: Domain, graded: bool) -> Arc<Self> {
        for (i, v) in vars.iter().enumerate() {
            assert!(
                vars[..i].iter().all(|w| w.name != v.name),
                "duplicate variable name `{}`",
                v.name
            );
        }
        Arc::new(PolyRing { vars, domain, graded })
    }

    /// The ring ℤ or ℚ with no variables.
    pub fn scalars(domain: Domain) -> Arc<Self> {
        Self::new(Vec::new(), domain)
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Total ring degree of a monomial.
    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().map(|&(v, e)| self.vars[v as usize].degree * e).sum()
    }

    /// Same variables, different coefficient domain.
    pub fn with_domain(&self, domain: Domain) -> Arc<Self> {
        Arc::new(PolyRing { vars: self.vars.clone(), domain, graded: self.graded })
    }

    pub(crate) fn check_compatible(self: &Arc<Self>, other: &Arc<Self>) -> Result<()> {
        if Arc::ptr_eq(self, other) {
            return Ok(());
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain.to_string(), other.domain.to_string()));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!(
                "[{}] vs [{}]",
                names(&self.vars),
                names(&other.vars)
            )));
        }
        Ok(())
    }
}

fn names(vars: &[Variable]) -> String {
    vars.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(", ")
}

/// Sparse monomial: `(variable index, exponent)` pairs sorted by index, with
/// no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Monomial(vec![(index as u32, 1)])
    }

    /// Builds a monomial from arbitrary `(index, exponent)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, e) in pairs {
            *map.entry(i as u32).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(v, _)| v as usize == index)
            .map_or(0, |&(_, e)| e)
    }

    /// Number of variable factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Graded-lexicographic comparison (larger = leading).
    pub fn grlex_cmp(&self, other: &Monomial, ring: &PolyRing) -> Ordering {
        ring.monomial_degree(self)
            .cmp(&ring.monomial_degree(other))
            .then_with(|| {
                let n = ring.vars.len();
                for i in 0..n {
                    match self.exponent(i).cmp(&other.exponent(i)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

/// Arithmetic operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// A sparse polynomial with exact coefficients.
///
/// Invariants: no zero coefficients are stored, and in a `Z`-domain ring
/// every coefficient is an integer.
#[derive(Clone, Debug)]
pub struct GradedPolynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

impl GradedPolynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        GradedPolynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn from_int(ring: &Arc<PolyRing>, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(c.into()))
    }

    /// Panics if `c` is not an integer in a `Z`-domain ring.
    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Self {
        Self::monomial(ring, Monomial::one(), c)
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        assert!(index < ring.vars.len(), "variable index {index} out of range");
        Self::monomial(ring, Monomial::var(index), Rational::one())
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Option<Self> {
        ring.var_index(name).map(|i| Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        assert!(
            self.ring.domain == Domain::Q || c.is_integer(),
            "non-integer coefficient {c} in a Z-domain polynomial"
        );
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn domain(&self) -> Domain {
        self.ring.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in graded-lexicographic order, leading term first.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0, &self.ring));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// The constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The single ring degree of all terms, or `None` if inhomogeneous.
    /// The zero polynomial is homogeneous of every degree and returns
    /// `Some(None)`.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut degs = self.terms.keys().map(|m| self.ring.monomial_degree(m));
        match degs.next() {
            None => Some(None),
            Some(d) => degs.all(|e| e == d).then_some(Some(d)),
        }
    }

    /// Splits into homogeneous components by ring degree.
    pub fn components(&self) -> BTreeMap<u32, GradedPolynomial> {
        let mut out: BTreeMap<u32, GradedPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = self.ring.monomial_degree(m);
            out.entry(d)
                .or_insert_with(|| GradedPolynomial::zero(&self.ring))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.monomial_degree(m)).max()
    }

    pub fn neg(&self) -> Self {
        GradedPolynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut p = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c * s);
        }
        p
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&Rational::from_integer(s.into()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ring.check_compatible(&other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.ring.check_compatible(&other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_compatible(&other.ring)?;
        let mut out = Self::zero(&self.ring);
        out.add_product(self, other);
        Ok(out)
    }

    /// `self += a·b` without compatibility checks beyond debug assertions.
    pub(crate) fn add_product(&mut self, a: &Self, b: &Self) {
        debug_assert!(a.ring == b.ring && a.ring == self.ring);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), ca * cb);
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Moves the polynomial into another ring with the same variables
    /// (changing domain from ℤ to ℚ, or attaching a structurally equal ring).
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Self> {
        if ring.vars != self.ring.vars {
            return Err(Error::VariableMismatch(format!(
                "[{}] vs [{}]",
                names(&self.ring.vars),
                names(&ring.vars)
            )));
        }
        if ring.domain == Domain::Z && self.terms.values().any(|c| !c.is_integer()) {
            return Err(Error::DomainMismatch(Domain::Q.to_string(), Domain::Z.to_string()));
        }
        Ok(GradedPolynomial { ring: ring.clone(), terms: self.terms.clone() })
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        GradedPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Exact binary arithmetic with compatibility checking.
pub fn poly_arith(a: &GradedPolynomial, b: &GradedPolynomial, op: ArithOp) -> Result<GradedPolynomial> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr<&GradedPolynomial> for &GradedPolynomial {
            type Output = GradedPolynomial;
            /// Panics on incompatible rings; use the `try_*` methods to
            /// handle that case.
            fn $method(self, rhs: &GradedPolynomial) -> GradedPolynomial {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<GradedPolynomial> for GradedPolynomial {
            type Output = GradedPolynomial;
            fn $method(self, rhs: GradedPolynomial) -> GradedPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial::neg(self)
    }
}

impl std::ops::AddAssign<&GradedPolynomial> for GradedPolynomial {
    fn add_assign(&mut self, rhs: &GradedPolynomial) {
        debug_assert!(self.ring == rhs.ring);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&GradedPolynomial> for GradedPolynomial {
    fn sub_assign(&mut self, rhs: &GradedPolynomial) {
        debug_assert!(self.ring == rhs.ring);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (v, e) in m.pairs() {
                let name = &self.ring.vars[v].name;
                factors.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the textual form produced by `Display`, e.g. `2*a11^2 - 3/2*beta + 1`.
pub fn parse_polynomial(ring: &Arc<PolyRing>, text: &str) -> Result<GradedPolynomial> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = GradedPolynomial::zero(ring);
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut pieces = Vec::new();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    for piece in pieces {
        let (sign, body) = match piece.as_bytes()[0] {
            b'-' => (-1, &piece[1..]),
            b'+' => (1, &piece[1..]),
            _ => (1, piece),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{text}`")));
        }
        let mut coeff = Rational::from_integer(sign.into());
        let mut mono = Vec::new();
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{text}`")));
            }
            if factor.as_bytes()[0].is_ascii_digit() {
                coeff *= parse_rational(factor)?;
            } else {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?;
                        (n, e)
                    }
                    None => (factor, 1),
                };
                let idx = ring
                    .var_index(name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                mono.push((idx, exp));
            }
        }
        if ring.domain == Domain::Z && !coeff.is_integer() {
            return Err(Error::DomainMismatch(Domain::Q.to_string(), Domain::Z.to_string()));
        }
        out.add_term(Monomial::from_pairs(mono), coeff);
    }
    Ok(out)
}

/// Parses `"7"`, `"-3"` or `"5/6"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Wire form of a polynomial. Coefficients are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub vars: Vec<Variable>,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: BTreeMap<String, u32>,
}

impl GradedPolynomial {
    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            vars: self.ring.vars.clone(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    coeff: fmt_rational(c),
                    exps: m.pairs().map(|(v, e)| (self.ring.vars[v].name.clone(), e)).collect(),
                })
                .collect(),
            domain: Some(self.ring.domain),
        }
    }

    /// Decodes into a fresh ring built from the listed variables.
    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        let mut parsed = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            parsed.push(parse_rational(&t.coeff)?);
        }
        let domain = json.domain.unwrap_or(if parsed.iter().all(|c| c.is_integer()) {
            Domain::Z
        } else {
            Domain::Q
        });
        for (i, v) in json.vars.iter().enumerate() {
            if json.vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::Parse(format!("duplicate variable `{}`", v.name)));
            }
        }
        let ring = PolyRing::new(json.vars.clone(), domain);
        Self::from_json_in(&ring, json, parsed)
    }

    /// Decodes into an existing ring; the listed variables must match it.
    pub fn from_json_with_ring(ring: &Arc<PolyRing>, json: &PolynomialJson) -> Result<Self> {
        if json.vars != ring.vars {
            return Err(Error::VariableMismatch("polynomial JSON variables differ from the ring".into()));
        }
        let mut parsed = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            parsed.push(parse_rational(&t.coeff)?);
        }
        Self::from_json_in(ring, json, parsed)
    }

    fn from_json_in(ring: &Arc<PolyRing>, json: &PolynomialJson, coeffs: Vec<Rational>) -> Result<Self> {
        let mut p = GradedPolynomial::zero(ring);
        for (t, c) in json.terms.iter().zip(coeffs) {
            if ring.domain == Domain::Z && !c.is_integer() {
                return Err(Error::DomainMismatch(Domain::Q.to_string(), Domain::Z.to_string()));
            }
            let mut pairs = Vec::new();
            for (name, &e) in &t.exps {
                let idx = ring
                    .var_index(name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                pairs.push((idx, e));
            }
            p.add_term(Monomial::from_pairs(pairs), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<PolyRing> {
        PolyRing::new(vec![Variable::new("x", 1), Variable::new("y", 1)], Domain::Z)
    }

    #[test]
    fn difference_of_squares() {
        let r = xy();
        let x = GradedPolynomial::var(&r, 0);
        let y = GradedPolynomial::var(&r, 1);
        let p = poly_arith(&(&x + &y), &(&x - &y), ArithOp::Mul).unwrap();
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn additive_identity_and_scalars() {
        let r = xy();
        let x = GradedPolynomial::var(&r, 0);
        let p = &x + &GradedPolynomial::from_int(&r, 3);
        assert_eq!(poly_arith(&p, &GradedPolynomial::zero(&r), ArithOp::Add).unwrap(), p);
        let six = poly_arith(&x.scale_int(2), &x.scale_int(3), ArithOp::Mul).unwrap();
        assert_eq!(six.to_string(), "6*x^2");
    }

    #[test]
    fn mixed_domains_are_rejected() {
        let zr = xy();
        let qr = zr.with_domain(Domain::Q);
        let a = GradedPolynomial::var(&zr, 0);
        let b = GradedPolynomial::var(&qr, 0);
        assert!(matches!(poly_arith(&a, &b, ArithOp::Add), Err(Error::DomainMismatch(..))));
        let other = PolyRing::new(vec![Variable::new("z", 1)], Domain::Z);
        let c = GradedPolynomial::var(&other, 0);
        assert!(matches!(a.try_mul(&c), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let r = xy();
        let x = GradedPolynomial::var(&r, 0);
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn grading() {
        let r = PolyRing::new(vec![Variable::new("a11", 1), Variable::new("a12", 2)], Domain::Z);
        let a = GradedPolynomial::var(&r, 0);
        let b = GradedPolynomial::var(&r, 1);
        let p = &a.pow(2) + &b;
        assert_eq!(p.homogeneous_degree(), Some(Some(2)));
        let q = &p + &a;
        assert_eq!(q.homogeneous_degree(), None);
        assert_eq!(q.components().len(), 2);
        // grlex: degree first, then earlier variables lead
        assert_eq!(p.to_string(), "a11^2 + a12");
    }

    #[test]
    fn parse_display_round_trip() {
        let r = PolyRing::new(vec![Variable::new("beta", 1), Variable::new("x", 2)], Domain::Q);
        let p = parse_polynomial(&r, "-3/2*beta^2*x + 4 - beta").unwrap();
        assert_eq!(parse_polynomial(&r, &p.to_string()).unwrap(), p);
        assert!(parse_polynomial(&r, "2*gamma").is_err());
        let zr = r.with_domain(Domain::Z);
        assert!(parse_polynomial(&zr, "1/2*beta").is_err());
    }

    #[test]
    fn json_round_trip_and_domain_inference() {
        let r = xy();
        let p = parse_polynomial(&r, "2*x*y - 7*y^3").unwrap();
        let j = p.to_json();
        assert_eq!(GradedPolynomial::from_json(&j).unwrap(), p);
        let text = r#"{"vars":[{"name":"t","degree":1}],"terms":[{"coeff":"1/3","exps":{"t":2}}]}"#;
        let q = GradedPolynomial::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(q.domain(), Domain::Q);
        assert_eq!(q.to_string(), "1/3*t^2");
    }
}
