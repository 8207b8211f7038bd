use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::maps::Morphism;
use super::matrix::RingMatrix;
use super::space::{CellSpace, LineBundle, Structure};
use super::theory::OrientedTheory;
use crate::error::{Error, Result};
use crate::exactalg::{GradedPolynomial, Rational};
use crate::lazard::RingMap;

/// An element of the cell module of a space.
#[derive(Clone, Debug)]
pub struct BordismClass {
    space: Arc<CellSpace>,
    coeffs: Vec<GradedPolynomial>,
}

impl PartialEq for BordismClass {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space) && self.coeffs == other.coeffs
    }
}

impl BordismClass {
    pub fn zero(space: &Arc<CellSpace>) -> Self {
        BordismClass { space: space.clone(), coeffs: vec![space.ring().zero(); space.num_cells()] }
    }

    /// `1_X`, the fundamental class.
    pub fn unit(space: &Arc<CellSpace>) -> Self {
        BordismClass { space: space.clone(), coeffs: space.unit_vector() }
    }

    pub fn cell(space: &Arc<CellSpace>, id: &str) -> Result<Self> {
        let k = space
            .cell_index(id)
            .ok_or_else(|| Error::OutOfRange(format!("no cell `{id}` on {}", space.name())))?;
        let mut c = Self::zero(space);
        c.coeffs[k] = space.ring().one();
        Ok(c)
    }

    pub fn from_coeffs(space: &Arc<CellSpace>, coeffs: Vec<GradedPolynomial>) -> Result<Self> {
        if coeffs.len() != space.num_cells() {
            return Err(Error::OutOfRange(format!("{} coefficients for {} cells", coeffs.len(), space.num_cells())));
        }
        let ring = space.ring();
        let coeffs = coeffs
            .iter()
            .map(|c| c.with_ring(ring.base()).map(|c| ring.reduce(&c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BordismClass { space: space.clone(), coeffs })
    }

    /// Builds a class from `(cell id, coefficient)` pairs.
    pub fn from_cells<'a>(space: &Arc<CellSpace>, entries: impl IntoIterator<Item = (&'a str, GradedPolynomial)>) -> Result<Self> {
        let mut c = Self::zero(space);
        for (id, v) in entries {
            let k = space
                .cell_index(id)
                .ok_or_else(|| Error::OutOfRange(format!("no cell `{id}` on {}", space.name())))?;
            let v = v.with_ring(space.ring().base())?;
            c.coeffs[k] = space.ring().reduce(&(&c.coeffs[k] + &v));
        }
        Ok(c)
    }

    pub fn space(&self) -> &Arc<CellSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[GradedPolynomial] {
        &self.coeffs
    }

    pub fn coefficient(&self, id: &str) -> Option<&GradedPolynomial> {
        self.space.cell_index(id).map(|k| &self.coeffs[k])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GradedPolynomial::is_zero)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if !self.space.same_as(&other.space) {
            return Err(Error::TheoryMismatch(format!("classes on {} and {}", self.space.name(), other.space.name())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let ring = self.space.ring();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ring.reduce(&(a + b))).collect();
        Ok(BordismClass { space: self.space.clone(), coeffs })
    }

    pub fn scale(&self, s: &GradedPolynomial) -> Self {
        let ring = self.space.ring();
        BordismClass { space: self.space.clone(), coeffs: self.coeffs.iter().map(|c| ring.mul(c, s)).collect() }
    }

    /// Total degree `cell dimension + ring degree`, if homogeneous (the zero
    /// class has none).
    pub fn degree(&self) -> Option<u32> {
        let mut deg = None;
        for (c, cell) in self.coeffs.iter().zip(self.space.cells()) {
            if c.is_zero() {
                continue;
            }
            let d = cell.dim + c.homogeneous_degree()?.unwrap_or(0);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Applies an operator matrix of the same space.
    pub fn apply(&self, m: &RingMatrix) -> Self {
        BordismClass { space: self.space.clone(), coeffs: m.apply(&self.coeffs) }
    }

    pub fn c1_apply(&self, bundle: &LineBundle) -> Result<Self> {
        Ok(self.apply(&self.space.c1(bundle)?))
    }

    pub fn c1_apply_symbol(&self, symbol: &str) -> Result<Self> {
        self.c1_apply(&self.space.bundle(symbol)?)
    }

    pub fn push_forward(&self, f: &Morphism) -> Result<Self> {
        if !self.space.same_as(f.source()) {
            return Err(Error::UnregisteredMap(format!("{} does not start at {}", f.name(), self.space.name())));
        }
        Ok(BordismClass { space: f.target().clone(), coeffs: f.push_matrix()?.apply(&self.coeffs) })
    }

    pub fn pull_back(&self, f: &Morphism) -> Result<Self> {
        if !self.space.same_as(f.target()) {
            return Err(Error::UnregisteredMap(format!("{} does not end at {}", f.name(), self.space.name())));
        }
        Ok(BordismClass { space: f.source().clone(), coeffs: f.pull_matrix()?.apply(&self.coeffs) })
    }

    /// `α × β` on the product of the two spaces.
    pub fn external_product(&self, other: &Self) -> Result<Self> {
        let space = CellSpace::product(&self.space, &other.space)?;
        self.external_product_on(other, &space)
    }

    pub fn external_product_on(&self, other: &Self, space: &Arc<CellSpace>) -> Result<Self> {
        match space.structure() {
            Structure::Product { left, right } if left.same_as(&self.space) && right.same_as(&other.space) => {}
            _ => {
                return Err(Error::TheoryMismatch(format!(
                    "{} is not the product of {} and {}",
                    space.name(),
                    self.space.name(),
                    other.space.name()
                )))
            }
        }
        let ring = space.ring();
        let mut coeffs = Vec::with_capacity(space.num_cells());
        for a in &self.coeffs {
            for b in &other.coeffs {
                coeffs.push(ring.mul(a, b));
            }
        }
        Ok(BordismClass { space: space.clone(), coeffs })
    }

    /// The operator `Σ_c a_c · W_c` whose value on `1_X` is this class,
    /// where `W_c` is the word of cell `c`.
    pub fn as_operator(&self) -> RingMatrix {
        let space = &self.space;
        let mut acc = RingMatrix::zeros(space.ring(), space.num_cells(), space.num_cells());
        for (c, cell) in self.coeffs.iter().zip(space.cells()) {
            if !c.is_zero() {
                acc = acc.add(&space.word_operator(&cell.word).scale(c));
            }
        }
        acc
    }

    /// `a · b`: the operator of `a` applied to `b`.
    pub fn intersection_product(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        if self.space.cells().iter().any(|c| c.word.len() != self.space.primitives().len()) {
            return Err(Error::Unsupported(format!("cells of {} are not operator words", self.space.name())));
        }
        Ok(other.apply(&self.as_operator()))
    }

    /// Coefficients moved along a classifying map, onto the same space
    /// rebuilt over `target`.
    pub fn specialize(&self, theta: &RingMap, target: &Arc<OrientedTheory>) -> Result<Self> {
        if *self.space.ring() != *theta.source().ring() {
            return Err(Error::TheoryMismatch(format!(
                "class over {} but the map starts at {}",
                self.space.ring().describe(),
                theta.source().ring().describe()
            )));
        }
        if *target.ring() != *theta.target() {
            return Err(Error::TheoryMismatch(format!(
                "map lands in {} but the theory is over {}",
                theta.target().describe(),
                target.ring().describe()
            )));
        }
        let space = self.space.rebuild(target)?;
        let coeffs = self.coeffs.iter().map(|c| theta.apply(c)).collect::<Result<Vec<_>>>()?;
        BordismClass::from_coeffs(&space, coeffs)
    }

    /// Nonzero coefficients keyed by cell id.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.space
            .cells()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(cell, c)| (cell.id.clone(), c.to_string()))
            .collect()
    }
}

impl fmt::Display for BordismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (cell, c) in self.space.cells().iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = match c.as_constant() {
                Some(r) if r < Rational::zero() => (true, (-r).to_string()),
                Some(r) => (false, r.to_string()),
                None if c.len() == 1 && c.to_string().starts_with('-') => (true, c.neg().to_string()),
                None if c.len() == 1 => (false, c.to_string()),
                None => (false, format!("({c})")),
            };
            let term = if body == "1" { cell.id.clone() } else { format!("{body}*{}", cell.id) };
            match (first, neg) {
                (true, true) => write!(f, "-{term}")?,
                (true, false) => write!(f, "{term}")?,
                (false, true) => write!(f, " - {term}")?,
                (false, false) => write!(f, " + {term}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn projective_dim(space: &CellSpace) -> Result<u32> {
    match space.structure() {
        Structure::Projective { n } => Ok(*n),
        _ => Err(Error::Unsupported(format!("{} is not a projective space", space.name()))),
    }
}

/// `[d]_F(c₁(O(1)))(1_{P^n})`, the class of a degree-`d` hypersurface.
pub fn hypersurface_class(space: &Arc<CellSpace>, d: i64) -> Result<BordismClass> {
    let n = projective_dim(space)?;
    if n == 0 || d < 1 {
        return Err(Error::OutOfRange(format!("hypersurface of degree {d} in P^{n}")));
    }
    BordismClass::unit(space).c1_apply(&LineBundle(vec![d]))
}

/// `[P^m] = (m+1)·coeff_{u^{m+1}} log_F` for `m = 0..=max`.
pub fn projective_space_classes(theory: &OrientedTheory, max: u32) -> Result<Vec<GradedPolynomial>> {
    if !theory.is_rational() {
        return Err(Error::NotRational);
    }
    if max as usize + 1 > theory.order() {
        return Err(Error::OutOfRange(format!("[P^{max}] needs the law to order {}", max + 1)));
    }
    let log = theory.fgl().logarithm()?;
    (0..=max)
        .map(|m| Ok(log.coefficient(&[m + 1])?.scale_int(m as i64 + 1)))
        .collect()
}

/// Degree of a class on `P^n`: `h^k ↦ [P^{n−k}]`.
pub fn pushforward_to_point(class: &BordismClass) -> Result<GradedPolynomial> {
    let space = class.space();
    let n = projective_dim(space)?;
    let theory = space.theory();
    let values = projective_space_classes(theory, n)?;
    let ring = theory.ring();
    let mut acc = ring.zero();
    for (k, c) in class.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &ring.mul(c, &values[n as usize - k]);
        }
    }
    Ok(ring.reduce(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_polynomial, Domain};
    use crate::fgl::FormalGroupLaw;
    use crate::lazard::LazardRing;

    fn theory(f: FormalGroupLaw) -> Arc<OrientedTheory> {
        OrientedTheory::new(f).unwrap()
    }

    #[test]
    fn hypersurfaces() {
        let add = theory(FormalGroupLaw::additive(Domain::Z, 4));
        let p3 = CellSpace::projective_space(3, &add).unwrap();
        let h = hypersurface_class(&p3, 5).unwrap();
        assert_eq!(h.to_map(), BTreeMap::from([("h1".to_string(), "5".to_string())]));
        assert_eq!(h.degree(), Some(2));

        let m = theory(FormalGroupLaw::multiplicative(Domain::Z, 4));
        let p2 = CellSpace::projective_space(2, &m).unwrap();
        let h = hypersurface_class(&p2, 2).unwrap();
        assert_eq!(h.to_string(), "2*h1 - beta*h2");
        assert_eq!(h.degree(), Some(1));
        assert!(hypersurface_class(&p2, 0).is_err());
    }

    #[test]
    fn universal_hypersurface_and_specialization() {
        let l = LazardRing::cached(3);
        let u = theory(l.universal_law().clone());
        let p2 = CellSpace::projective_space(2, &u).unwrap();
        let h = hypersurface_class(&p2, 2).unwrap();
        assert_eq!(h.to_string(), "2*h1 + a11*h2");

        let add = theory(FormalGroupLaw::additive(Domain::Z, 4));
        let th = l.classifying_map(add.fgl()).unwrap();
        assert_eq!(h.specialize(&th, &add).unwrap().to_string(), "2*h1");
        let m = theory(FormalGroupLaw::multiplicative(Domain::Z, 4));
        let th = l.classifying_map(m.fgl()).unwrap();
        let s = h.specialize(&th, &m).unwrap();
        assert_eq!(s, hypersurface_class(&CellSpace::projective_space(2, &m).unwrap(), 2).unwrap());
        let one = BordismClass::unit(&p2).specialize(&th, &m).unwrap();
        assert_eq!(one, BordismClass::unit(s.space()));
        assert!(s.specialize(&th, &m).is_err());
    }

    #[test]
    fn intersection_on_p2() {
        let m = theory(FormalGroupLaw::multiplicative(Domain::Z, 4));
        let p2 = CellSpace::projective_space(2, &m).unwrap();
        let h1 = BordismClass::cell(&p2, "h1").unwrap();
        let pt = BordismClass::cell(&p2, "h2").unwrap();
        assert_eq!(h1.intersection_product(&h1).unwrap(), pt);
        let one = BordismClass::unit(&p2);
        assert_eq!(one.intersection_product(&h1).unwrap(), h1);
        // conic · line = 2 points; the β-term dies
        let q = hypersurface_class(&p2, 2).unwrap();
        assert_eq!(q.intersection_product(&h1).unwrap().to_string(), "2*h2");
    }

    #[test]
    fn push_to_point() {
        let add = theory(FormalGroupLaw::additive(Domain::Q, 6));
        let p3 = CellSpace::projective_space(3, &add).unwrap();
        for k in 0..=3u32 {
            let c = BordismClass::cell(&p3, &format!("h{k}")).unwrap();
            let want = if k == 3 { 1 } else { 0 };
            assert_eq!(pushforward_to_point(&c).unwrap(), add.ring().from_int(want));
        }
        let todd = theory(FormalGroupLaw::multiplicative_at(1, Domain::Q, 9));
        for n in 0..=8 {
            let p = CellSpace::projective_space(n, &todd).unwrap();
            assert!(pushforward_to_point(&BordismClass::unit(&p)).unwrap().is_one(), "P^{n}");
        }
        let z = theory(FormalGroupLaw::additive(Domain::Z, 4));
        let p1 = CellSpace::projective_space(1, &z).unwrap();
        assert!(matches!(pushforward_to_point(&BordismClass::unit(&p1)), Err(Error::NotRational)));
    }

    #[test]
    fn projective_space_classes_multiplicative() {
        // [P^m] = β^m
        let m = theory(FormalGroupLaw::multiplicative(Domain::Q, 6));
        let v = projective_space_classes(&m, 5).unwrap();
        let beta = m.ring().var("beta").unwrap();
        for (k, x) in v.iter().enumerate() {
            assert_eq!(*x, beta.pow(k as u32));
        }
    }

    #[test]
    fn external_product_of_units() {
        let m = theory(FormalGroupLaw::multiplicative(Domain::Z, 4));
        let p1 = CellSpace::projective_space(1, &m).unwrap();
        let p2 = CellSpace::projective_space(2, &m).unwrap();
        let x = BordismClass::unit(&p1).external_product(&BordismClass::unit(&p2)).unwrap();
        assert_eq!(x, BordismClass::unit(x.space()));
        let c = BordismClass::from_cells(&p2, [("h1", parse_polynomial(m.ring().base(), "3").unwrap())]).unwrap();
        assert_eq!(c.to_string(), "3*h1");
        assert!(BordismClass::cell(&p2, "h9").is_err());
    }
}
