//! Truncated multivariate formal power series over a coefficient ring.
//!
//! A series keeps every term of total formal degree at most its order `N`;
//! everything above is discarded. Formal variables are plain names and are
//! never part of the coefficient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{CoefficientRing, Domain, GradedPolynomial, PolyRing, PolynomialJson, Rational};

/// Exponent vector over the formal variables.
pub type Exponents = Vec<u32>;

fn total(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    ring: CoefficientRing,
    vars: Arc<[String]>,
    order: usize,
    terms: BTreeMap<Exponents, GradedPolynomial>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.vars == other.vars && self.order == other.order && self.terms == other.terms
    }
}

/// Formal variable list helper: `vars(&["u", "v"])`.
pub fn formal_vars(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}

impl TruncatedSeries {
    pub fn zero(ring: &CoefficientRing, vars: &Arc<[String]>, order: usize) -> Self {
        TruncatedSeries { ring: ring.clone(), vars: vars.clone(), order, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &CoefficientRing, vars: &Arc<[String]>, order: usize, c: GradedPolynomial) -> Self {
        let mut s = Self::zero(ring, vars, order);
        s.add_term(vec![0; vars.len()], c);
        s
    }

    pub fn one(ring: &CoefficientRing, vars: &Arc<[String]>, order: usize) -> Self {
        Self::constant(ring, vars, order, ring.one())
    }

    /// The series consisting of the `i`-th formal variable.
    pub fn var(ring: &CoefficientRing, vars: &Arc<[String]>, order: usize, i: usize) -> Self {
        assert!(i < vars.len(), "formal variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(ring, vars, order, e, ring.one())
    }

    pub fn monomial(
        ring: &CoefficientRing,
        vars: &Arc<[String]>,
        order: usize,
        exps: Exponents,
        c: GradedPolynomial,
    ) -> Self {
        let mut s = Self::zero(ring, vars, order);
        s.add_term(exps, c);
        s
    }

    pub fn from_terms(
        ring: &CoefficientRing,
        vars: &Arc<[String]>,
        order: usize,
        terms: impl IntoIterator<Item = (Exponents, GradedPolynomial)>,
    ) -> Self {
        let mut s = Self::zero(ring, vars, order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Adds `c·x^e` in place; terms beyond the order are dropped.
    pub fn add_term(&mut self, exps: Exponents, c: GradedPolynomial) {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length mismatch");
        if c.is_zero() || total(&exps) > self.order {
            return;
        }
        // canonical forms are not closed under addition, so reduce the sum
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                let c = self.ring.reduce(&c);
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.ring.reduce(&(&*e.get() + &c));
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GradedPolynomial)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms ordered by total degree, then by descending exponent of the
    /// earlier variables (`u²`, `uv`, `v²`).
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &GradedPolynomial)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| total(a.0).cmp(&total(b.0)).then_with(|| b.0.cmp(a.0)));
        v
    }

    /// Exact coefficient of `x^exps`.
    pub fn coefficient(&self, exps: &[u32]) -> Result<GradedPolynomial> {
        if exps.len() != self.vars.len() {
            return Err(Error::VariableMismatch(format!(
                "exponent vector of length {} for {} formal variables",
                exps.len(),
                self.vars.len()
            )));
        }
        if total(exps) > self.order {
            return Err(Error::OutOfRange(format!(
                "exponent {:?} has degree {} beyond the truncation order {}",
                exps,
                total(exps),
                self.order
            )));
        }
        Ok(self.terms.get(exps).cloned().unwrap_or_else(|| self.ring.zero()))
    }

    pub fn constant_term(&self) -> GradedPolynomial {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Lowest total degree of a nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|e| total(e)).min()
    }

    /// Drops terms above `order` (which may not exceed the current order).
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!(
                "formal variables ({}) vs ({})",
                self.vars.join(","),
                other.vars.join(",")
            )));
        }
        if self.ring != other.ring {
            return Err(Error::VariableMismatch(format!(
                "coefficient rings {} vs {}",
                self.ring.describe(),
                other.ring.describe()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.truncate(other.order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut a: Vec<(usize, &Exponents, &GradedPolynomial)> =
            self.terms.iter().map(|(e, c)| (total(e), e, c)).filter(|t| t.0 <= order).collect();
        let mut b: Vec<(usize, &Exponents, &GradedPolynomial)> =
            other.terms.iter().map(|(e, c)| (total(e), e, c)).filter(|t| t.0 <= order).collect();
        a.sort_by_key(|t| t.0);
        b.sort_by_key(|t| t.0);
        let mut acc: BTreeMap<Exponents, GradedPolynomial> = BTreeMap::new();
        for (da, ea, ca) in &a {
            for (db, eb, cb) in &b {
                if da + db > order {
                    break;
                }
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                acc.entry(e).or_insert_with(|| self.ring.zero()).add_product(ca, cb);
            }
        }
        let mut out = Self::zero(&self.ring, &self.vars, order);
        for (e, c) in acc {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale(&self, s: &GradedPolynomial) -> Self {
        let mut out = Self::zero(&self.ring, &self.vars, self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&self.ring.from_int(s))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring, &self.vars, self.order);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Equality of all terms up to the smaller of the two orders.
    pub fn eq_truncated(&self, other: &Self) -> bool {
        let n = self.order.min(other.order);
        self.vars == other.vars && self.ring == other.ring && self.truncate(n).terms == other.truncate(n).terms
    }

    /// First exponent (by degree) where the two series differ, up to the
    /// smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<Exponents> {
        let n = self.order.min(other.order);
        let d = self.truncate(n).try_sub(&other.truncate(n)).ok()?;
        d.sorted_terms().into_iter().map(|(e, _)| e.clone()).min_by(|a, b| {
            total(a).cmp(&total(b)).then_with(|| a.cmp(b))
        })
    }

    /// Partial derivative in the `i`-th variable; the order drops by one.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring, &self.vars, self.order.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c.scale_int(e[i] as i64));
        }
        out
    }

    /// Termwise antiderivative in the `i`-th variable with zero constant of
    /// integration; the order rises by one. Needs a ℚ-algebra.
    pub fn integrate(&self, i: usize) -> Result<Self> {
        if !self.ring.is_rational() {
            return Err(Error::NotRational);
        }
        let mut out = Self::zero(&self.ring, &self.vars, self.order + 1);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] += 1;
            let k = Rational::from_integer((f[i] as i64).into());
            out.add_term(f, c.scale(&(Rational::one() / k)));
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be a unit scalar.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .constant_term()
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Structural { degree: 0, reason: "constant term is not a unit scalar".into() })?;
        if self.ring.domain() == Domain::Z && !c0.abs().is_one() {
            return Err(Error::Structural { degree: 0, reason: format!("{c0} is not a unit in Z") });
        }
        let inv0 = Rational::one() / &c0;
        let one = Self::one(&self.ring, &self.vars, self.order);
        // 1/f = c0⁻¹ · Σ xᵏ with x = 1 − f/c0
        let x = one.try_sub(&self.scale(&self.ring.constant(inv0.clone())))?;
        let mut acc = one.clone();
        let mut pw = one;
        for _ in 0..self.order {
            pw = pw.mul_unchecked(&x);
            if pw.is_zero() {
                break;
            }
            acc = acc.try_add(&pw)?;
        }
        Ok(acc.scale(&self.ring.constant(inv0)))
    }

    /// Re-expresses the series over a new list of formal variables; variable
    /// `i` of `self` becomes variable `mapping[i]` of the target.
    pub fn embed(&self, target_vars: &Arc<[String]>, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.vars.len(), "embedding needs one slot per variable");
        let mut out = Self::zero(&self.ring, target_vars, self.order);
        for (e, c) in &self.terms {
            let mut f = vec![0; target_vars.len()];
            for (i, &x) in e.iter().enumerate() {
                f[mapping[i]] += x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Index of a formal variable by name.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Applies a ring map to every coefficient (e.g. a classifying map).
    pub fn map_coefficients(
        &self,
        target: &CoefficientRing,
        mut f: impl FnMut(&GradedPolynomial) -> Result<GradedPolynomial>,
    ) -> Result<Self> {
        let mut out = Self::zero(target, &self.vars, self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Coefficients moved to a ring with the same variables (e.g. ℤ → ℚ).
    pub fn change_ring(&self, target: &CoefficientRing) -> Result<Self> {
        self.map_coefficients(target, |c| c.with_ring(target.base()))
    }
}

macro_rules! series_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            /// Panics on mismatched variables or rings.
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

series_binop!(Add, add, try_add);
series_binop!(Sub, sub, try_sub);
series_binop!(Mul, mul, try_mul);

/// Binary series operation selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

pub fn series_arith(a: &TruncatedSeries, b: &TruncatedSeries, op: SeriesOp) -> Result<TruncatedSeries> {
    match op {
        SeriesOp::Add => a.try_add(b),
        SeriesOp::Sub => a.try_sub(b),
        SeriesOp::Mul => a.try_mul(b),
    }
}

/// Substitutes series for formal variables of `f`.
///
/// All assigned series must share one list of formal variables, which becomes
/// the variable list of the result. A variable of `f` without an assignment is
/// kept if the target list has a variable of the same name. Each assigned
/// series must have zero constant term. The result order is the minimum of
/// the orders involved.
pub fn substitute(f: &TruncatedSeries, assignments: &[(&str, &TruncatedSeries)]) -> Result<TruncatedSeries> {
    let Some((_, first)) = assignments.first() else {
        return Ok(f.clone());
    };
    let target_vars = first.vars.clone();
    let ring = first.ring.clone();
    let mut order = f.order;
    for (name, g) in assignments {
        if g.vars != target_vars {
            return Err(Error::VariableMismatch("assigned series use different formal variables".into()));
        }
        if g.ring != ring || ring != f.ring {
            return Err(Error::VariableMismatch("assigned series use a different coefficient ring".into()));
        }
        if f.var_index(name).is_none() {
            return Err(Error::VariableMismatch(format!("`{name}` is not a variable of the series")));
        }
        if !g.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm(name.to_string()));
        }
        order = order.min(g.order);
    }
    let mut images: Vec<TruncatedSeries> = Vec::with_capacity(f.vars.len());
    for v in f.vars.iter() {
        if let Some((_, g)) = assignments.iter().find(|(n, _)| n == v) {
            images.push(g.truncate(order));
        } else if let Some(j) = target_vars.iter().position(|t| t == v) {
            images.push(TruncatedSeries::var(&ring, &target_vars, order, j));
        } else {
            return Err(Error::VariableMismatch(format!("variable `{v}` is neither assigned nor in the target")));
        }
    }
    Ok(substitute_images(f, &images, order))
}

/// Core of [`substitute`]: `images[i]` replaces variable `i`. The sum is
/// nested by variable so each prefix of exponents is multiplied only once.
pub(crate) fn substitute_images(f: &TruncatedSeries, images: &[TruncatedSeries], order: usize) -> TruncatedSeries {
    let ring = images.first().map_or(f.ring.clone(), |g| g.ring.clone());
    let vars = images.first().map_or(f.vars.clone(), |g| g.vars.clone());
    let mut powers: Vec<Vec<TruncatedSeries>> = images
        .iter()
        .map(|_| vec![TruncatedSeries::one(&ring, &vars, order)])
        .collect();
    let terms: Vec<(&Exponents, &GradedPolynomial)> = f.terms.iter().filter(|(e, _)| total(e) <= order).collect();
    nested(&terms, 0, images, &mut powers, &ring, &vars, order)
}

fn nested(
    terms: &[(&Exponents, &GradedPolynomial)],
    level: usize,
    images: &[TruncatedSeries],
    powers: &mut Vec<Vec<TruncatedSeries>>,
    ring: &CoefficientRing,
    vars: &Arc<[String]>,
    order: usize,
) -> TruncatedSeries {
    if level == images.len() {
        let mut c = ring.zero();
        for (_, p) in terms {
            c += p;
        }
        return TruncatedSeries::constant(ring, vars, order, c);
    }
    // terms are sorted lexicographically, so equal exponents at this level
    // form contiguous runs
    let mut out = TruncatedSeries::zero(ring, vars, order);
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[level];
        let mut end = start;
        while end < terms.len() && terms[end].0[level] == e {
            end += 1;
        }
        let inner = nested(&terms[start..end], level + 1, images, powers, ring, vars, order);
        if !inner.is_zero() {
            while powers[level].len() <= e as usize {
                let next = powers[level].last().unwrap().mul_unchecked(&images[level]);
                powers[level].push(next);
            }
            let pw = &powers[level][e as usize];
            let prod = if e == 0 { inner } else { pw.mul_unchecked(&inner) };
            for (k, c) in prod.terms {
                out.add_term(k, c);
            }
        }
        start = end;
    }
    out
}

/// Solves for a univariate series `g` degree by degree.
///
/// `equation(g)` must return the residual series whose vanishing defines `g`;
/// the coefficient of `x^k` in the residual is assumed to depend on the
/// unknown coefficient `g_k` linearly with a scalar slope, and not on higher
/// ones. The solver starts from `seed` (the degree-one part of `g`), probes
/// the slope at each degree, and fails with a structural error if a step has
/// zero or non-scalar slope, is not solvable over ℤ, or if the final residual
/// does not vanish.
pub fn solve_implicit<F>(seed: &TruncatedSeries, order: usize, equation: F) -> Result<TruncatedSeries>
where
    F: Fn(&TruncatedSeries) -> Result<TruncatedSeries>,
{
    if seed.vars.len() != 1 {
        return Err(Error::VariableMismatch("solve_implicit needs a univariate seed".into()));
    }
    if seed.terms.keys().any(|e| e[0] != 1) {
        return Err(Error::Structural { degree: 1, reason: "seed must be a pure degree-one term".into() });
    }
    let ring = seed.ring.clone();
    let vars = seed.vars.clone();
    let mut g = TruncatedSeries::from_terms(&ring, &vars, order, seed.terms.clone());

    let residual_at = |g: &TruncatedSeries, k: usize| -> Result<TruncatedSeries> {
        let r = equation(&g.truncate(k))?;
        if r.order < k {
            return Err(Error::Structural { degree: k, reason: format!("equation lost precision (order {})", r.order) });
        }
        Ok(r.truncate(k))
    };

    let r1 = residual_at(&g, 1.min(order))?;
    if !r1.is_zero() {
        return Err(Error::Structural { degree: 1, reason: "seed does not satisfy the equation in degree one".into() });
    }
    for k in 2..=order {
        let gk = g.truncate(k);
        let r = residual_at(&gk, k)?;
        if let Some(v) = r.valuation().filter(|&v| v < k) {
            return Err(Error::Structural { degree: v, reason: "residual does not vanish in lower degree".into() });
        }
        let rk = r.coefficient(&[k as u32])?;
        let mut probe = gk.clone();
        probe.add_term(vec![k as u32], ring.one());
        let slope = residual_at(&probe, k)?.coefficient(&[k as u32])? - rk.clone();
        let slope = slope.as_constant().ok_or_else(|| Error::Structural {
            degree: k,
            reason: format!("non-scalar slope {slope}"),
        })?;
        if slope.is_zero() {
            return Err(Error::Structural { degree: k, reason: "coefficient is not determined (zero slope)".into() });
        }
        let t = ring
            .div_scalar(&rk.neg(), &slope)
            .map_err(|_| Error::Structural { degree: k, reason: format!("{rk} not divisible by {slope}") })?;
        g.add_term(vec![k as u32], t);
    }
    let final_residual = residual_at(&g, order)?;
    if !final_residual.is_zero() {
        return Err(Error::Structural {
            degree: final_residual.valuation().unwrap_or(order),
            reason: "solution does not satisfy the equation (equation not linear in the new coefficient)".into(),
        });
    }
    Ok(g)
}

impl TruncatedSeries {
    /// The terms alone, without the `O(order + 1)` tail.
    pub fn display_terms(&self) -> String {
        let mut out = String::new();
        self.write_terms(&mut out).expect("writing to a string");
        out
    }

    fn write_terms(&self, f: &mut impl fmt::Write) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(self.vars.iter())
                .filter(|(x, _)| **x > 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let mono = mono.join("*");
            let (neg, body) = if c.len() == 1 {
                let (_, r) = c.terms().next().unwrap();
                let abs = if r.is_negative() { c.neg() } else { c.clone() };
                let body = if mono.is_empty() {
                    abs.to_string()
                } else if abs.is_one() {
                    mono.clone()
                } else {
                    format!("{abs}*{mono}")
                };
                (r.is_negative(), body)
            } else if mono.is_empty() {
                (false, format!("({c})"))
            } else {
                (false, format!("({c})*{mono}"))
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f)?;
        if self.order > 0 {
            write!(f, " + O({})", self.order + 1)?;
        }
        Ok(())
    }
}

/// Wire form of a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub formal_vars: Vec<String>,
    pub order: usize,
    pub terms: Vec<SeriesTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub exps: Vec<u32>,
    pub coeff: PolynomialJson,
}

impl TruncatedSeries {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            formal_vars: self.vars.to_vec(),
            order: self.order,
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| SeriesTermJson { exps: e.clone(), coeff: c.to_json() })
                .collect(),
        }
    }

    /// Decodes into a polynomial coefficient ring rebuilt from the first
    /// term's variable list (ℤ with no variables if there are no terms).
    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        let base = match json.terms.first() {
            Some(t) => GradedPolynomial::from_json(&t.coeff)?.ring().clone(),
            None => PolyRing::scalars(Domain::Z),
        };
        let mut domain = base.domain();
        for t in &json.terms {
            if GradedPolynomial::from_json(&t.coeff)?.domain() == Domain::Q {
                domain = Domain::Q;
            }
        }
        let base = if domain == base.domain() { base } else { base.with_domain(domain) };
        Self::from_json_with_ring(&CoefficientRing::polynomial(base), json)
    }

    pub fn from_json_with_ring(ring: &CoefficientRing, json: &SeriesJson) -> Result<Self> {
        let vars: Arc<[String]> = json.formal_vars.iter().cloned().collect();
        let mut s = Self::zero(ring, &vars, json.order);
        for t in &json.terms {
            if t.exps.len() != vars.len() {
                return Err(Error::Parse("exponent vector length does not match formal_vars".into()));
            }
            if total(&t.exps) > json.order {
                return Err(Error::Parse(format!("term {:?} exceeds the order {}", t.exps, json.order)));
            }
            let c = GradedPolynomial::from_json_with_ring(ring.base(), &t.coeff)?;
            s.add_term(t.exps.clone(), c);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_polynomial, Variable};
    use proptest::prelude::*;

    fn zring() -> CoefficientRing {
        CoefficientRing::integers()
    }

    fn beta_ring() -> CoefficientRing {
        CoefficientRing::polynomial(PolyRing::new(vec![Variable::new("beta", 1)], Domain::Z))
    }

    fn uv() -> Arc<[String]> {
        formal_vars(&["u", "v"])
    }

    #[test]
    fn one_plus_u_times_one_minus_u() {
        let r = zring();
        let vars = formal_vars(&["u"]);
        let one = TruncatedSeries::one(&r, &vars, 3);
        let u = TruncatedSeries::var(&r, &vars, 3, 0);
        let p = series_arith(&(&one + &u), &(&one - &u), SeriesOp::Mul).unwrap();
        assert_eq!(p, &one - &u.pow(2));
    }

    #[test]
    fn add_zero_and_truncated_product() {
        let r = zring();
        let u = TruncatedSeries::var(&r, &uv(), 1, 0);
        let v = TruncatedSeries::var(&r, &uv(), 1, 1);
        let z = TruncatedSeries::zero(&r, &uv(), 1);
        assert_eq!(series_arith(&u, &z, SeriesOp::Add).unwrap(), u);
        assert!(series_arith(&u, &v, SeriesOp::Mul).unwrap().is_zero());
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let r = zring();
        let a = TruncatedSeries::var(&r, &uv(), 3, 0);
        let b = TruncatedSeries::var(&r, &formal_vars(&["u"]), 3, 0);
        assert!(matches!(a.try_add(&b), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn result_order_is_minimum() {
        let r = zring();
        let a = TruncatedSeries::var(&r, &uv(), 5, 0);
        let b = TruncatedSeries::var(&r, &uv(), 3, 1);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    fn multiplicative(order: usize) -> TruncatedSeries {
        let r = beta_ring();
        let beta = r.var("beta").unwrap();
        TruncatedSeries::from_terms(
            &r,
            &uv(),
            order,
            [(vec![1, 0], r.one()), (vec![0, 1], r.one()), (vec![1, 1], beta.neg())],
        )
    }

    #[test]
    fn substitute_zero_gives_unit_axiom() {
        let f = multiplicative(6);
        let zero = TruncatedSeries::zero(f.ring(), &formal_vars(&["u"]), 6);
        let g = substitute(&f, &[("v", &zero)]).unwrap();
        assert_eq!(g, TruncatedSeries::var(f.ring(), &formal_vars(&["u"]), 6, 0));
    }

    #[test]
    fn identity_composition_and_square() {
        let r = zring();
        let u_only = formal_vars(&["u"]);
        let f = TruncatedSeries::var(&r, &u_only, 4, 0);
        let g = TruncatedSeries::from_terms(&r, &uv(), 4, [(vec![1, 0], r.from_int(3)), (vec![1, 2], r.from_int(-2))]);
        assert_eq!(substitute(&f, &[("u", &g)]).unwrap(), g);

        let sq = TruncatedSeries::monomial(&r, &u_only, 2, vec![2], r.one());
        let s = TruncatedSeries::var(&r, &uv(), 2, 0).try_add(&TruncatedSeries::var(&r, &uv(), 2, 1)).unwrap();
        let out = substitute(&sq, &[("u", &s)]).unwrap();
        let expected =
            TruncatedSeries::from_terms(&r, &uv(), 2, [(vec![2, 0], r.one()), (vec![1, 1], r.from_int(2)), (vec![0, 2], r.one())]);
        assert_eq!(out, expected);
    }

    #[test]
    fn substitution_rejects_constant_terms() {
        let f = multiplicative(4);
        let c = TruncatedSeries::one(f.ring(), &uv(), 4);
        assert!(matches!(substitute(&f, &[("u", &c)]), Err(Error::NonzeroConstantTerm(_))));
    }

    #[test]
    fn solve_inverse_of_additive_and_multiplicative() {
        // additive: F(u, g) = u + g
        let r = zring();
        let u1 = formal_vars(&["u"]);
        let add = TruncatedSeries::from_terms(&r, &uv(), 8, [(vec![1, 0], r.one()), (vec![0, 1], r.one())]);
        let seed = TruncatedSeries::var(&r, &u1, 8, 0).neg();
        let chi = solve_implicit(&seed, 8, |g| {
            let u = TruncatedSeries::var(&r, &u1, g.order(), 0);
            substitute(&add, &[("u", &u), ("v", g)])
        })
        .unwrap();
        assert_eq!(chi, seed);

        // multiplicative: closed form -u/(1 - beta u) = -Σ beta^(k-1) u^k
        let f = multiplicative(8);
        let br = f.ring().clone();
        let seed = TruncatedSeries::var(&br, &u1, 8, 0).neg();
        let chi = solve_implicit(&seed, 8, |g| {
            let u = TruncatedSeries::var(&br, &u1, g.order(), 0);
            substitute(&f, &[("u", &u), ("v", g)])
        })
        .unwrap();
        let beta = br.var("beta").unwrap();
        for k in 1..=8u32 {
            assert_eq!(chi.coefficient(&[k]).unwrap(), beta.pow(k - 1).neg(), "degree {k}");
        }
    }

    #[test]
    fn solve_trivial_equation() {
        let r = zring();
        let u1 = formal_vars(&["u"]);
        let u = TruncatedSeries::var(&r, &u1, 5, 0);
        let g = solve_implicit(&u, 5, |g| Ok(g - &u.truncate(g.order()))).unwrap();
        assert_eq!(g, u);
    }

    #[test]
    fn solve_detects_undetermined_step() {
        // g² = 0 has zero slope in every degree
        let r = zring();
        let u1 = formal_vars(&["u"]);
        let seed = TruncatedSeries::var(&r, &u1, 4, 0);
        let err = solve_implicit(&seed, 4, |g| Ok(g.pow(2).truncate(g.order())));
        assert!(matches!(err, Err(Error::Structural { .. })));
    }

    #[test]
    fn coefficient_lookup() {
        let f = multiplicative(4);
        let beta = f.ring().var("beta").unwrap();
        assert_eq!(f.coefficient(&[1, 1]).unwrap(), beta.neg());
        assert_eq!(f.coefficient(&[2, 0]).unwrap(), f.ring().zero());
        assert!(matches!(f.coefficient(&[3, 2]), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn inverse_and_calculus() {
        let r = CoefficientRing::rationals();
        let u1 = formal_vars(&["u"]);
        let u = TruncatedSeries::var(&r, &u1, 6, 0);
        let one = TruncatedSeries::one(&r, &u1, 6);
        let inv = (&one - &u).inverse().unwrap();
        for k in 0..=6u32 {
            assert!(inv.coefficient(&[k]).unwrap().is_one());
        }
        let int = inv.integrate(0).unwrap();
        assert_eq!(int.order(), 7);
        assert_eq!(int.derivative(0), inv);
        assert!(matches!(TruncatedSeries::var(&zring(), &u1, 3, 0).integrate(0), Err(Error::NotRational)));
    }

    #[test]
    fn display_and_json() {
        let f = multiplicative(3);
        assert_eq!(f.to_string(), "u + v - beta*u*v + O(4)");
        let back = TruncatedSeries::from_json_with_ring(f.ring(), &f.to_json()).unwrap();
        assert_eq!(back, f);
        let loose = TruncatedSeries::from_json(&f.to_json()).unwrap();
        assert_eq!(loose.to_string(), f.to_string());
        let r = beta_ring();
        let p = parse_polynomial(r.base(), "2 + beta").unwrap();
        let s = TruncatedSeries::monomial(&r, &uv(), 3, vec![2, 0], p);
        assert_eq!(s.to_string(), "(beta + 2)*u^2 + O(4)");
    }

    fn arb_series(nvars: usize, order: usize, constant: bool) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), -3i64..4), 0..8).prop_map(move |terms| {
            let r = CoefficientRing::integers();
            let names: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
            let vars: Arc<[String]> = names.into();
            TruncatedSeries::from_terms(
                &r,
                &vars,
                order,
                terms
                    .into_iter()
                    .filter(|(e, _)| constant || e.iter().any(|&x| x > 0))
                    .map(|(e, c)| (e, r.from_int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn substitution_is_associative(
            f in arb_series(1, 5, true),
            g in arb_series(1, 5, false),
            h in arb_series(2, 5, false),
        ) {
            let g = g.embed(f.vars(), &[0]);
            let h_vars = h.vars().clone();
            let g_then_h = substitute(&substitute(&f, &[("x0", &g)]).unwrap(), &[("x0", &h)]).unwrap();
            let gh = substitute(&g, &[("x0", &h)]).unwrap();
            let f_of_gh = substitute(&f, &[("x0", &gh)]).unwrap();
            prop_assert_eq!(g_then_h.vars(), &h_vars);
            prop_assert!(g_then_h.eq_truncated(&f_of_gh));
        }

        #[test]
        fn truncation_is_coherent(a in arb_series(2, 6, true), b in arb_series(2, 6, true), n in 0usize..6) {
            let full = (&a * &b).truncate(n);
            let low = &a.truncate(n) * &b.truncate(n);
            prop_assert_eq!(full, low);
        }

        #[test]
        fn multiplication_commutes(a in arb_series(2, 5, true), b in arb_series(2, 5, true)) {
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }
}
