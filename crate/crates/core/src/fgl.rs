//! Formal group laws and their calculus: formal inverse, difference law,
//! n-series, multi-sums, and (over ℚ-algebras) logarithm and exponential.

use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{CoefficientRing, Domain, GradedPolynomial, PolyHom, PolyRing, Variable};
use crate::series::{formal_vars, solve_implicit, substitute, Exponents, TruncatedSeries};

/// A two-variable power series `F(u, v)` together with the result of checking
/// the group-law axioms on it.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    name: String,
    series: TruncatedSeries,
    validated: bool,
    chi: OnceLock<TruncatedSeries>,
    difference: OnceLock<TruncatedSeries>,
    log: OnceLock<TruncatedSeries>,
    n_series: Arc<Mutex<HashMap<i64, TruncatedSeries>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    ZeroConstantTerm,
    LeftUnit,
    RightUnit,
    Commutativity,
    Associativity,
    Grading,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::ZeroConstantTerm => "zero constant term",
            Axiom::LeftUnit => "F(u,0) = u",
            Axiom::RightUnit => "F(0,v) = v",
            Axiom::Commutativity => "F(u,v) = F(v,u)",
            Axiom::Associativity => "F(F(u,v),w) = F(u,F(v,w))",
            Axiom::Grading => "coefficient of u^i v^j has degree i+j-1",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    /// `exps` is the first offending exponent (by degree, then lexicographic).
    Fail { exps: Exponents, detail: String },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub order: usize,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.status, CheckStatus::Fail { .. }))
    }

    pub fn status(&self, axiom: Axiom) -> Option<&CheckStatus> {
        self.checks.iter().find(|c| c.axiom == axiom).map(|c| &c.status)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| matches!(c.status, CheckStatus::Fail { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.status {
                CheckStatus::Pass => writeln!(f, "pass  {}", c.axiom)?,
                CheckStatus::Fail { exps, detail } => writeln!(f, "FAIL  {} at {:?}: {}", c.axiom, exps, detail)?,
                CheckStatus::Skipped { reason } => writeln!(f, "skip  {} ({})", c.axiom, reason)?,
            }
        }
        Ok(())
    }
}

fn uv() -> Arc<[String]> {
    formal_vars(&["u", "v"])
}

fn u_only() -> Arc<[String]> {
    formal_vars(&["u"])
}

fn deg(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

fn first_by_degree<'a>(it: impl Iterator<Item = &'a Exponents>) -> Option<Exponents> {
    it.min_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| a.cmp(b))).cloned()
}

/// Checks every axiom of a formal group law on a series in `(u, v)` at its
/// own truncation order.
pub fn validate(f: &TruncatedSeries) -> ValidationReport {
    let order = f.order();
    let mut checks = Vec::new();
    let ring = f.ring();
    let mut push = |axiom, status| checks.push(AxiomCheck { axiom, status });

    if f.vars().len() != 2 {
        push(
            Axiom::ZeroConstantTerm,
            CheckStatus::Fail { exps: vec![], detail: format!("expected 2 formal variables, got {}", f.vars().len()) },
        );
        return ValidationReport { order, checks };
    }

    let c0 = f.constant_term();
    push(
        Axiom::ZeroConstantTerm,
        if c0.is_zero() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail { exps: vec![0, 0], detail: format!("constant term {c0}") }
        },
    );

    // F(u,0) = u: only u^1 survives among pure powers of u
    for (axiom, slot) in [(Axiom::LeftUnit, 0usize), (Axiom::RightUnit, 1usize)] {
        let bad = first_by_degree(f.terms().map(|(e, _)| e).filter(|e| {
            let other = e[1 - slot];
            other == 0 && e[slot] != 1
        }))
        .or_else(|| {
            let mut e = vec![0, 0];
            e[slot] = 1;
            (order >= 1 && !f.coefficient(&e).map(|c| c.is_one()).unwrap_or(false)).then_some(e)
        });
        push(
            axiom,
            match bad {
                None => CheckStatus::Pass,
                Some(e) => {
                    let c = f.coefficient(&e).unwrap_or_else(|_| ring.zero());
                    CheckStatus::Fail { detail: format!("coefficient {c}"), exps: e }
                }
            },
        );
    }

    let swapped = f.embed(&uv(), &[1, 0]);
    push(
        Axiom::Commutativity,
        match f.first_difference(&swapped) {
            None => CheckStatus::Pass,
            Some(e) => CheckStatus::Fail {
                detail: format!(
                    "coefficient {} vs {}",
                    f.coefficient(&e).unwrap_or_else(|_| ring.zero()),
                    swapped.coefficient(&e).unwrap_or_else(|_| ring.zero())
                ),
                exps: e,
            },
        },
    );

    let assoc = if !c0.is_zero() {
        CheckStatus::Skipped { reason: "nonzero constant term".into() }
    } else {
        match associativity_defect(f) {
            Ok(None) => CheckStatus::Pass,
            Ok(Some((e, c))) => CheckStatus::Fail { exps: e, detail: format!("defect {c}") },
            Err(err) => CheckStatus::Fail { exps: vec![], detail: err.to_string() },
        }
    };
    push(Axiom::Associativity, assoc);

    let grading = if !ring.is_graded() {
        CheckStatus::Skipped { reason: "coefficient ring is not graded".into() }
    } else {
        let bad = first_by_degree(f.terms().filter_map(|(e, c)| {
            let want = deg(e) as i64 - 1;
            let ok = match c.homogeneous_degree() {
                Some(None) => true,
                Some(Some(d)) => d as i64 == want,
                None => false,
            };
            (!ok).then_some(e)
        }));
        match bad {
            None => CheckStatus::Pass,
            Some(e) => CheckStatus::Fail {
                detail: format!(
                    "coefficient {} is not homogeneous of degree {}",
                    f.coefficient(&e).unwrap_or_else(|_| ring.zero()),
                    deg(&e) as i64 - 1
                ),
                exps: e,
            },
        }
    };
    push(Axiom::Grading, grading);

    ValidationReport { order, checks }
}

/// First exponent `(p, q, r)` where `F(F(u,v),w) − F(u,F(v,w))` is nonzero.
fn associativity_defect(f: &TruncatedSeries) -> Result<Option<(Exponents, GradedPolynomial)>> {
    let uvw = formal_vars(&["u", "v", "w"]);
    let f_uv = f.embed(&uvw, &[0, 1]);
    let f_vw = f.embed(&uvw, &[1, 2]);
    let order = f.order();
    let ring = f.ring();
    let u = TruncatedSeries::var(ring, &uvw, order, 0);
    let w = TruncatedSeries::var(ring, &uvw, order, 2);
    let left = substitute(f, &[("u", &f_uv), ("v", &w)])?;
    let right = substitute(f, &[("u", &u), ("v", &f_vw)])?;
    let diff = left.try_sub(&right)?;
    Ok(first_by_degree(diff.terms().map(|(e, _)| e)).map(|e| {
        let c = diff.coefficient(&e).unwrap_or_else(|_| ring.zero());
        (e, c)
    }))
}

impl FormalGroupLaw {
    /// Wraps a series without validating it.
    pub fn unvalidated(name: impl Into<String>, series: TruncatedSeries) -> Self {
        FormalGroupLaw {
            name: name.into(),
            series,
            validated: false,
            chi: OnceLock::new(),
            difference: OnceLock::new(),
            log: OnceLock::new(),
            n_series: Arc::default(),
        }
    }

    /// Validates and fails with the first broken axiom.
    pub fn new(name: impl Into<String>, series: TruncatedSeries) -> Result<Self> {
        let mut f = Self::unvalidated(name, series);
        let report = f.validate();
        match report.first_failure() {
            None => Ok(f),
            Some(c) => Err(Error::InvalidFgl(format!("{}: {}", f.name, describe_failure(c)))),
        }
    }

    /// Runs [`validate`] and records the outcome in the validated flag.
    pub fn validate(&mut self) -> ValidationReport {
        let r = validate(&self.series);
        self.validated = r.passed();
        r
    }

    /// `F(u,v) = u + v` over ℤ or ℚ.
    pub fn additive(domain: Domain, order: usize) -> Self {
        let ring = CoefficientRing::polynomial(PolyRing::scalars(domain));
        Self::additive_over(&ring, order)
    }

    pub fn additive_over(ring: &CoefficientRing, order: usize) -> Self {
        let s = TruncatedSeries::from_terms(ring, &uv(), order, [(vec![1, 0], ring.one()), (vec![0, 1], ring.one())]);
        Self::trusted("additive", s)
    }

    /// `F(u,v) = u + v − βuv` over ℤ[β] or ℚ[β] with `deg β = 1`.
    pub fn multiplicative(domain: Domain, order: usize) -> Self {
        let ring = CoefficientRing::polynomial(PolyRing::new(vec![Variable::new("beta", 1)], domain));
        let beta = ring.var("beta").expect("beta");
        Self::multiplicative_over(&ring, &beta, order)
    }

    /// `u + v − βuv` with `β` specialized to an integer; the ring is ℤ or ℚ
    /// without a grading.
    pub fn multiplicative_at(beta: i64, domain: Domain, order: usize) -> Self {
        let ring = CoefficientRing::polynomial(PolyRing::ungraded(Vec::new(), domain));
        let b = ring.from_int(beta);
        let mut f = Self::multiplicative_over(&ring, &b, order);
        f.name = format!("multiplicative:{beta}");
        f
    }

    pub fn multiplicative_over(ring: &CoefficientRing, beta: &GradedPolynomial, order: usize) -> Self {
        let s = TruncatedSeries::from_terms(
            ring,
            &uv(),
            order,
            [(vec![1, 0], ring.one()), (vec![0, 1], ring.one()), (vec![1, 1], beta.neg())],
        );
        Self::trusted("multiplicative", s)
    }

    /// For laws whose axioms hold by construction: the validated flag is
    /// set without running the full check.
    pub(crate) fn trusted(name: impl Into<String>, series: TruncatedSeries) -> Self {
        let mut f = Self::unvalidated(name, series);
        f.validated = true;
        f
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn ring(&self) -> &CoefficientRing {
        self.series.ring()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Result<GradedPolynomial> {
        self.series.coefficient(&[i, j])
    }

    /// The same law truncated to a lower order (validation is inherited).
    pub fn at_order(&self, order: usize) -> Self {
        let mut f = Self::unvalidated(self.name.clone(), self.series.truncate(order));
        f.validated = self.validated;
        f
    }

    /// The image of the law under a coefficient ring homomorphism. The result
    /// is validated afresh.
    pub fn push_forward(&self, hom: &PolyHom, name: impl Into<String>) -> Result<Self> {
        let s = self.series.map_coefficients(hom.target(), |c| hom.apply(c))?;
        Self::new(name, s)
    }

    fn require_valid(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::InvalidFgl(format!("{} has not passed validation", self.name)))
        }
    }

    fn var_u(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::var(self.ring(), &u_only(), order, 0)
    }

    /// `χ(u)` with `F(u, χ(u)) = 0`.
    pub fn formal_inverse(&self) -> Result<TruncatedSeries> {
        self.require_valid()?;
        if let Some(c) = self.chi.get() {
            return Ok(c.clone());
        }
        let order = self.order();
        let seed = self.var_u(order).neg();
        let chi = solve_implicit(&seed, order, |g| {
            let u = self.var_u(g.order());
            substitute(&self.series, &[("u", &u), ("v", g)])
        })
        .map_err(|e| Error::InvalidFgl(format!("formal inverse: {e}")))?;
        Ok(self.chi.get_or_init(|| chi).clone())
    }

    /// `F⁻(u, v) = F(u, χ(v))`, so that `F⁻(u, χ(v)) = F(u, v)`.
    pub fn difference_law(&self) -> Result<TruncatedSeries> {
        if let Some(d) = self.difference.get() {
            return Ok(d.clone());
        }
        let chi_v = self.formal_inverse()?.embed(&uv(), &[1]);
        let u = TruncatedSeries::var(self.ring(), &uv(), self.order(), 0);
        let d = substitute(&self.series, &[("u", &u), ("v", &chi_v)])?;
        Ok(self.difference.get_or_init(|| d).clone())
    }

    /// `[n]_F·u`. Negative `n` is computed as `χ([|n|]_F·u)`.
    pub fn n_series(&self, n: i64) -> Result<TruncatedSeries> {
        self.require_valid()?;
        if let Some(s) = self.n_series.lock().expect("n-series cache").get(&n) {
            return Ok(s.clone());
        }
        let order = self.order();
        let u = self.var_u(order);
        let mut acc = TruncatedSeries::zero(self.ring(), &u_only(), order);
        for _ in 0..n.unsigned_abs() {
            acc = substitute(&self.series, &[("u", &acc), ("v", &u)])?;
        }
        if n < 0 {
            let chi = self.formal_inverse()?;
            acc = substitute(&chi, &[("u", &acc)])?;
        }
        self.n_series.lock().expect("n-series cache").insert(n, acc.clone());
        Ok(acc)
    }

    /// `[n]_F·u` by the literal fold: `u +_F … +_F u` for `n ≥ 0`, and
    /// `0 −_F u −_F … −_F u` for `n < 0`.
    pub fn n_series_by_iteration(&self, n: i64) -> Result<TruncatedSeries> {
        if n >= 0 {
            return self.n_series(n);
        }
        let diff = self.difference_law()?;
        let order = self.order();
        let u = self.var_u(order);
        let mut acc = TruncatedSeries::zero(self.ring(), &u_only(), order);
        for _ in 0..n.unsigned_abs() {
            acc = substitute(&diff, &[("u", &acc), ("v", &u)])?;
        }
        Ok(acc)
    }

    /// `F^{n₁,…,n_m}(u₁,…,u_m) = [n₁]u₁ +_F … +_F [n_m]u_m`, folded left to
    /// right, in formal variables `u1 … um`.
    pub fn multi_sum(&self, ns: &[i64]) -> Result<TruncatedSeries> {
        self.require_valid()?;
        if ns.is_empty() {
            return Err(Error::OutOfRange("multi_sum needs at least one summand".into()));
        }
        let names: Vec<String> = (1..=ns.len()).map(|i| format!("u{i}")).collect();
        let vars: Arc<[String]> = names.into();
        let mut acc: Option<TruncatedSeries> = None;
        for (i, &n) in ns.iter().enumerate() {
            let term = self.n_series(n)?.embed(&vars, &[i]);
            acc = Some(match acc {
                None => term,
                Some(a) => substitute(&self.series, &[("u", &a), ("v", &term)])?,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    /// `log_F(u) = ∫ du / (∂F/∂v)(u, 0)`; requires a ℚ-algebra.
    pub fn logarithm(&self) -> Result<TruncatedSeries> {
        self.require_valid()?;
        if !self.ring().is_rational() {
            return Err(Error::NotRational);
        }
        if let Some(l) = self.log.get() {
            return Ok(l.clone());
        }
        let order = self.order();
        let ring = self.ring();
        // (∂F/∂v)(u, 0) = Σ_i coeff(u^i v) u^i
        let mut dv = TruncatedSeries::zero(ring, &u_only(), order.saturating_sub(1));
        for (e, c) in self.series.terms() {
            if e[1] == 1 {
                dv.add_term(vec![e[0]], c.clone());
            }
        }
        let log = dv.inverse()?.integrate(0)?;
        Ok(self.log.get_or_init(|| log).clone())
    }

    /// Compositional inverse of the logarithm.
    pub fn exponential(&self) -> Result<TruncatedSeries> {
        let log = self.logarithm()?;
        let order = self.order();
        let seed = self.var_u(order);
        solve_implicit(&seed, order, |g| {
            let lg = substitute(&log, &[("u", g)])?;
            lg.try_sub(&self.var_u(g.order()))
        })
    }

    /// `F⁻(F(u,v), F(0,v)) = u`.
    pub fn check_identity_c1l(&self) -> Result<bool> {
        self.require_valid()?;
        let diff = self.difference_law()?;
        let order = self.order();
        let zero = TruncatedSeries::zero(self.ring(), &uv(), order);
        let f0v = substitute(&self.series, &[("u", &zero)])?;
        let lhs = substitute(&diff, &[("u", &self.series), ("v", &f0v)])?;
        let u = TruncatedSeries::var(self.ring(), &uv(), order, 0);
        Ok(lhs.eq_truncated(&u))
    }

    /// `F⁻(F(u₁,v₁), F(u₂,v₂)) = F(F⁻(u₁,u₂), F⁻(v₁,v₂))` in four variables.
    pub fn check_identity_fgl(&self) -> Result<bool> {
        self.require_valid()?;
        let diff = self.difference_law()?;
        let vars = formal_vars(&["u1", "v1", "u2", "v2"]);
        let f11 = self.series.embed(&vars, &[0, 1]);
        let f22 = self.series.embed(&vars, &[2, 3]);
        let d_u = diff.embed(&vars, &[0, 2]);
        let d_v = diff.embed(&vars, &[1, 3]);
        let lhs = substitute(&diff, &[("u", &f11), ("v", &f22)])?;
        let rhs = substitute(&self.series, &[("u", &d_u), ("v", &d_v)])?;
        Ok(lhs.eq_truncated(&rhs))
    }
}

fn describe_failure(c: &AxiomCheck) -> String {
    match &c.status {
        CheckStatus::Fail { exps, detail } => format!("{} fails at {:?} ({})", c.axiom, exps, detail),
        _ => c.axiom.to_string(),
    }
}

/// Parses a law name: `additive`, `multiplicative`, `multiplicative:B`
/// (β specialized to the integer `B`), `universal` or `universal:N` (the
/// universal law at formal order `N`; otherwise `order` is used).
pub fn law_by_name(name: &str, order: usize, domain: Domain) -> Result<FormalGroupLaw> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    match (head, arg) {
        ("additive", None) => Ok(FormalGroupLaw::additive(domain, order)),
        ("multiplicative", None) => Ok(FormalGroupLaw::multiplicative(domain, order)),
        ("multiplicative", Some(b)) => {
            let b: i64 = b.parse().map_err(|_| Error::Parse(format!("bad beta value `{b}`")))?;
            Ok(FormalGroupLaw::multiplicative_at(b, domain, order))
        }
        ("universal", arg) => {
            if domain == Domain::Q {
                return Err(Error::Unsupported("the universal law is presented over Z only".into()));
            }
            let n = match arg {
                Some(a) => a.parse().map_err(|_| Error::Parse(format!("bad order `{a}`")))?,
                None => order,
            };
            if n < 2 {
                return Err(Error::OutOfRange("universal law needs order at least 2".into()));
            }
            Ok(crate::lazard::LazardRing::cached((n - 1) as u32).universal_law().clone())
        }
        _ => Err(Error::Parse(format!("unknown formal group law `{name}`"))),
    }
}
