//! The acceptance suite: thirteen exact checks with wall-clock limits.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bmodel::axioms::standard_suite;
use crate::bmodel::{hypersurface_class, pushforward_to_point, BordismClass, CellSpace, LineBundle, OrientedTheory, SplitBundle};
use crate::error::Result;
use crate::exactalg::{Domain, GradedPolynomial, Integer, Rational};
use crate::fgl::{law_by_name, validate, Axiom, CheckStatus, FormalGroupLaw};
use crate::lazard::LazardRing;
use crate::series::{substitute, TruncatedSeries};
use crate::snc::{pushforward_to_ambient, snc_class, SncDivisor};

pub struct Criterion {
    pub number: u8,
    pub title: &'static str,
    pub limit: Duration,
    check: fn() -> Result<Vec<String>>,
}

/// Outcome of one criterion. A criterion passes when its check found no
/// failures and finished within the limit.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub number: u8,
    pub title: &'static str,
    pub passed: bool,
    pub elapsed: Duration,
    pub limit: Duration,
    pub failures: Vec<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({:.2} s, limit {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.number,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )?;
        if let Some(first) = self.failures.first() {
            write!(f, ": {first}")?;
            if self.failures.len() > 1 {
                write!(f, " (and {} more)", self.failures.len() - 1)?;
            }
        }
        Ok(())
    }
}

impl Criterion {
    pub fn run(&self) -> CriterionReport {
        let start = Instant::now();
        let mut failures = match (self.check)() {
            Ok(f) => f,
            Err(e) => vec![format!("error: {e}")],
        };
        let elapsed = start.elapsed();
        if elapsed > self.limit {
            failures.push(format!("took {:.2} s", elapsed.as_secs_f64()));
        }
        CriterionReport {
            number: self.number,
            title: self.title,
            passed: failures.is_empty(),
            elapsed,
            limit: self.limit,
            failures,
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { number: 1, title: "formal group law axioms", limit: secs(60), check: fgl_axioms },
        Criterion { number: 2, title: "formal inverse", limit: secs(10), check: formal_inverse },
        Criterion { number: 3, title: "first Chern class difference identity", limit: secs(120), check: c1l_identity },
        Criterion { number: 4, title: "four-variable difference identity", limit: secs(300), check: fgl_identity },
        Criterion { number: 5, title: "Lazard ring ranks", limit: secs(120), check: lazard_ranks },
        Criterion { number: 6, title: "classifying maps", limit: secs(60), check: classifying_maps },
        Criterion { number: 7, title: "logarithm and exponential", limit: secs(10), check: logarithm },
        Criterion { number: 8, title: "model axioms", limit: secs(60), check: model_axioms },
        Criterion { number: 9, title: "hypersurface classes", limit: secs(10), check: hypersurfaces },
        Criterion { number: 10, title: "normal crossing divisors", limit: secs(30), check: snc_divisors },
        Criterion { number: 11, title: "Euler class equals top Chern class", limit: secs(30), check: euler_vs_chern },
        Criterion { number: 12, title: "intersection ring", limit: secs(10), check: intersection_ring },
        Criterion { number: 13, title: "Todd genus", limit: secs(10), check: todd_genus },
    ]
}

pub fn run_all() -> Vec<CriterionReport> {
    criteria().iter().map(Criterion::run).collect()
}

/// Runs every criterion, printing one line each as it finishes.
pub fn run_and_print(out: &mut impl std::io::Write) -> std::io::Result<bool> {
    let mut ok = true;
    for c in criteria() {
        let r = c.run();
        ok &= r.passed;
        writeln!(out, "{r}")?;
    }
    Ok(ok)
}

const LAWS: [&str; 3] = ["additive", "multiplicative", "universal"];

fn law(name: &str, order: usize) -> Result<FormalGroupLaw> {
    law_by_name(name, order, Domain::Z)
}

fn theory(name: &str, order: usize) -> Result<Arc<OrientedTheory>> {
    OrientedTheory::new(law(name, order)?)
}

fn fgl_axioms() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    let two_variable = [Axiom::ZeroConstantTerm, Axiom::LeftUnit, Axiom::RightUnit, Axiom::Commutativity, Axiom::Grading];
    for name in LAWS {
        let g = law(name, 10)?;
        let report = validate(g.series());
        for check in &report.checks {
            let wanted = two_variable.contains(&check.axiom) || name != "universal";
            if wanted && !matches!(check.status, CheckStatus::Pass) {
                fails.push(format!("{name} at order 10: {} is {:?}", check.axiom, check.status));
            }
        }
    }
    let u8 = law("universal", 8)?;
    if !matches!(validate(u8.series()).status(Axiom::Associativity), Some(CheckStatus::Pass)) {
        fails.push("universal law is not associative at order 8".into());
    }
    Ok(fails)
}

fn formal_inverse() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    for name in LAWS {
        let g = law(name, 10)?;
        let chi = g.formal_inverse()?;
        let u = TruncatedSeries::var(g.ring(), chi.vars(), 10, 0);
        if !substitute(g.series(), &[("u", &u), ("v", &chi)])?.is_zero() {
            fails.push(format!("F(u, chi(u)) is not 0 for {name}"));
        }
        if !substitute(&chi, &[("u", &chi)])?.eq_truncated(&u) {
            fails.push(format!("chi(chi(u)) is not u for {name}"));
        }
    }
    Ok(fails)
}

fn c1l_identity() -> Result<Vec<String>> {
    let ok = law("universal", 8)?.check_identity_c1l()?;
    Ok(if ok { vec![] } else { vec!["identity fails for the universal law at order 8".into()] })
}

fn fgl_identity() -> Result<Vec<String>> {
    let ok = law("universal", 6)?.check_identity_fgl()?;
    Ok(if ok { vec![] } else { vec!["identity fails for the universal law at order 6".into()] })
}

/// Partitions of `n`, counted by the recurrence over the largest part.
fn partition_count(n: usize) -> usize {
    fn count(n: usize, max_part: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=max_part.min(n)).map(|k| count(n - k, k)).sum()
    }
    count(n, n)
}

fn lazard_ranks() -> Result<Vec<String>> {
    let ring = LazardRing::build(6);
    let mut fails = Vec::new();
    for n in 1..=6 {
        let (rank, want) = (ring.degree_rank(n)?, partition_count(n as usize));
        if rank != want {
            fails.push(format!("degree {n} has rank {rank}, expected {want}"));
        }
        let torsion = ring.torsion(n)?;
        if !torsion.is_empty() {
            fails.push(format!("degree {n} has torsion {torsion:?}"));
        }
    }
    Ok(fails)
}

fn classifying_maps() -> Result<Vec<String>> {
    let ring = LazardRing::cached(7);
    let mut fails = Vec::new();
    for target in [FormalGroupLaw::additive(Domain::Z, 8), FormalGroupLaw::multiplicative(Domain::Z, 8)] {
        let theta = ring.classifying_map(&target)?;
        for r in ring.relations() {
            let image = theta.apply(r)?;
            if !image.is_zero() {
                fails.push(format!("{} sends the relation {r} to {image}", target.name()));
            }
        }
        if !theta.reproduces(&target)? {
            fails.push(format!("the universal law does not push onto {}", target.name()));
        }
    }
    Ok(fails)
}

fn logarithm() -> Result<Vec<String>> {
    let g = FormalGroupLaw::multiplicative(Domain::Q, 12);
    let (log, exp) = (g.logarithm()?, g.exponential()?);
    let mut fails = Vec::new();
    let u = TruncatedSeries::var(g.ring(), log.vars(), 12, 0);
    if !substitute(&exp, &[("u", &log)])?.eq_truncated(&u) {
        fails.push("exp(log u) is not u".into());
    }
    let uv = g.series().vars().clone();
    let lu = log.embed(&uv, &[0]);
    let lv = log.embed(&uv, &[1]);
    let sum = substitute(&exp, &[("u", &lu.try_add(&lv)?)])?;
    if !sum.eq_truncated(g.series()) {
        fails.push("F(u, v) is not exp(log u + log v)".into());
    }
    Ok(fails)
}

fn model_axioms() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    for name in LAWS {
        let t = theory(name, 8)?;
        for inst in standard_suite(&t, 4)? {
            if !inst.holds {
                fails.push(format!("{name}: {} for {}", inst.axiom, inst.instance));
            }
        }
    }
    Ok(fails)
}

fn binomial(n: i64, k: i64) -> Integer {
    (0..k).fold(Integer::from(1), |acc, i| acc * Integer::from(n - i) / Integer::from(i + 1))
}

fn hypersurfaces() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    let additive = theory("additive", 8)?;
    let multiplicative = theory("multiplicative", 8)?;
    let universal = theory("universal", 8)?;
    let theta = LazardRing::cached(7).classifying_map(multiplicative.fgl())?;
    let mring = multiplicative.ring();
    let beta = mring.var("beta").ok_or_else(|| crate::error::Error::Parse("no beta".into()))?;
    for n in 1..=4u32 {
        let (pa, pm, pu) = (
            CellSpace::projective_space(n, &additive)?,
            CellSpace::projective_space(n, &multiplicative)?,
            CellSpace::projective_space(n, &universal)?,
        );
        for d in 1..=5i64 {
            // additive: d times a hyperplane
            let h1 = BordismClass::cell(&pa, "h1")?.scale(&additive.ring().constant(Rational::from_integer(d.into())));
            if hypersurface_class(&pa, d)? != h1 {
                fails.push(format!("additive degree {d} in P^{n}"));
            }
            // multiplicative: [d](u) = Σ_k (−1)^{k+1} C(d,k) β^{k−1} u^k
            let mut want = BordismClass::zero(&pm);
            for k in 1..=n.min(d as u32) {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                let c = mring.constant(Rational::from_integer(binomial(d, k as i64) * sign));
                let coeff = mring.mul(&c, &beta_power(&beta, k - 1, mring));
                want = want.add(&BordismClass::cell(&pm, &format!("h{k}"))?.scale(&coeff))?;
            }
            let got = hypersurface_class(&pm, d)?;
            if got != want {
                fails.push(format!("multiplicative degree {d} in P^{n}: {got} vs {want}"));
            }
            // the universal class specializes to the multiplicative one
            let special = hypersurface_class(&pu, d)?.specialize(&theta, &multiplicative)?;
            if special != got {
                fails.push(format!("universal degree {d} in P^{n} specializes to {special}, not {got}"));
            }
            // and it is [d]_F applied to 1
            let nd = universal.fgl().n_series(d)?;
            let direct = (1..=n).try_fold(BordismClass::zero(&pu), |acc, k| {
                let c = nd.coefficient(&[k])?;
                acc.add(&BordismClass::cell(&pu, &format!("h{k}"))?.scale(&c))
            })?;
            if hypersurface_class(&pu, d)? != direct {
                fails.push(format!("universal degree {d} in P^{n} differs from the n-series"));
            }
        }
    }
    Ok(fails)
}

fn beta_power(beta: &GradedPolynomial, k: u32, ring: &crate::exactalg::CoefficientRing) -> GradedPolynomial {
    (0..k).fold(ring.one(), |acc, _| ring.mul(&acc, beta))
}

fn snc_divisors() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    for name in LAWS {
        let t = theory(name, 8)?;
        for n in 1..=4u32 {
            let pn = CellSpace::projective_space(n, &t)?;
            let reduced = SncDivisor::hyperplanes(&pn, &[1])?;
            let class = snc_class(&reduced)?;
            let unit_ok = class.summands.len() == 1
                && class.summands[0].operator.num_terms() == 1
                && class.summands[0].operator.coefficient(&[0])?.is_one();
            if !unit_ok {
                fails.push(format!("{name}: reduced hyperplane in P^{n} has class {class}"));
            }
            for d in 1..=5usize {
                let e = SncDivisor::hyperplanes(&pn, &vec![1; d])?;
                let push = pushforward_to_ambient(&e)?;
                let want = hypersurface_class(&pn, d as i64)?;
                if push != want {
                    fails.push(format!("{name}: {d} hyperplanes in P^{n} push to {push}, not {want}"));
                }
            }
        }
    }
    Ok(fails)
}

fn euler_vs_chern() -> Result<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut fails = Vec::new();
    for name in LAWS {
        let t = theory(name, 8)?;
        for _ in 0..20 {
            let n = rng.gen_range(0..=3u32);
            let rank = rng.gen_range(1..=4usize);
            let base = CellSpace::projective_space(n, &t)?;
            let bundles = (0..rank).map(|_| LineBundle(vec![rng.gen_range(-3..=3)])).collect();
            let e = SplitBundle::from_bundles(&base, bundles);
            if e.euler_class()? != e.chern_class(rank)? {
                fails.push(format!("{name}: {} on P^{n}", e.symbols().join(" + ")));
            }
        }
    }
    Ok(fails)
}

fn intersection_ring() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    for name in LAWS {
        let t = theory(name, 8)?;
        for n in 0..=4u32 {
            let pn = CellSpace::projective_space(n, &t)?;
            let mut classes: Vec<BordismClass> =
                (0..=n).map(|k| BordismClass::cell(&pn, &format!("h{k}"))).collect::<Result<_>>()?;
            if n >= 1 {
                classes.push(hypersurface_class(&pn, 2)?);
                classes.push(hypersurface_class(&pn, 3)?.add(&classes[n as usize])?);
            }
            let unit = BordismClass::unit(&pn);
            for a in &classes {
                if unit.intersection_product(a)? != *a || a.intersection_product(&unit)? != *a {
                    fails.push(format!("{name}: 1 is not a unit for {a} on P^{n}"));
                }
                for b in &classes {
                    let ab = a.intersection_product(b)?;
                    if ab != b.intersection_product(a)? {
                        fails.push(format!("{name}: {a} and {b} do not commute on P^{n}"));
                    }
                    for c in &classes {
                        if ab.intersection_product(c)? != a.intersection_product(&b.intersection_product(c)?)? {
                            fails.push(format!("{name}: ({a})({b})({c}) is not associative on P^{n}"));
                        }
                    }
                }
            }
            if n >= 1 {
                let h = BordismClass::cell(&pn, "h1")?;
                let mut power = unit.clone();
                for _ in 0..n {
                    power = power.intersection_product(&h)?;
                }
                if power != BordismClass::cell(&pn, &format!("h{n}"))? {
                    fails.push(format!("{name}: h^{n} is {power} on P^{n}"));
                }
            }
        }
    }
    Ok(fails)
}

fn todd_genus() -> Result<Vec<String>> {
    let t = OrientedTheory::new(FormalGroupLaw::multiplicative_at(1, Domain::Q, 9))?;
    let mut fails = Vec::new();
    for n in 0..=8 {
        let pn = CellSpace::projective_space(n, &t)?;
        let genus = pushforward_to_point(&BordismClass::unit(&pn))?;
        if !genus.is_one() {
            fails.push(format!("P^{n} has genus {genus}"));
        }
    }
    Ok(fails)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_oracle() {
        let counts: Vec<usize> = (0..=10).map(partition_count).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Integer::from(10));
        assert_eq!(binomial(3, 4), Integer::from(0));
    }

    #[test]
    fn criteria_are_numbered_in_order() {
        let numbers: Vec<u8> = criteria().iter().map(|c| c.number).collect();
        assert_eq!(numbers, (1..=13).collect::<Vec<_>>());
    }

    #[test]
    fn report_line() {
        let r = CriterionReport {
            number: 3,
            title: "x",
            passed: false,
            elapsed: Duration::from_millis(1500),
            limit: Duration::from_secs(10),
            failures: vec!["a".into(), "b".into()],
        };
        assert_eq!(r.to_string(), "[FAIL]  3. x (1.50 s, limit 10 s): a (and 1 more)");
    }
}
