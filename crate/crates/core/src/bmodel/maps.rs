//! Registered morphisms between cell spaces.
//!
//! Proper push-forwards are given by a word shift: a cell with word `w` goes
//! to the target cell whose word is `translate(w) + shift`. Smooth pull-backs
//! are computed from the pulled-back primitive bundles: a cell `W(1_Y)` pulls
//! back to `W(f^*P)(1_X)`.

use std::sync::Arc;

use super::matrix::RingMatrix;
use super::space::{CellSpace, LineBundle, Structure};
use crate::error::{Error, Result};
use crate::exactalg::GradedPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
struct WordShift {
    /// Source primitive → target primitive; `None` where a cell word may not
    /// use that primitive.
    prim_map: Vec<Option<usize>>,
    shift: Vec<u32>,
}

impl WordShift {
    fn image(&self, word: &[u32]) -> Option<Vec<u32>> {
        let mut out = self.shift.clone();
        for (i, &e) in word.iter().enumerate() {
            if e > 0 {
                out[self.prim_map[i]?] += e;
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug)]
pub struct Morphism {
    name: String,
    source: Arc<CellSpace>,
    target: Arc<CellSpace>,
    /// `f^*P` for each primitive `P` of the target.
    bundle_pull: Vec<LineBundle>,
    proper: Option<WordShift>,
    smooth: bool,
}

fn expect_projective(x: &CellSpace) -> Result<u32> {
    match x.structure() {
        Structure::Projective { n } => Ok(*n),
        _ => Err(Error::UnregisteredMap(format!("{} is not a projective space", x.name()))),
    }
}

fn same_theory(a: &CellSpace, b: &CellSpace) -> Result<()> {
    if **a.theory() != **b.theory() {
        return Err(Error::TheoryMismatch(format!("{} and {}", a.name(), b.name())));
    }
    Ok(())
}

impl Morphism {
    pub fn identity(x: &Arc<CellSpace>) -> Self {
        let k = x.primitives().len();
        Morphism {
            name: format!("id_{}", x.name()),
            source: x.clone(),
            target: x.clone(),
            bundle_pull: (0..k).map(|i| LineBundle::primitive(k, i, 1)).collect(),
            proper: Some(WordShift { prim_map: (0..k).map(Some).collect(), shift: vec![0; k] }),
            smooth: true,
        }
    }

    /// `P^k ↪ P^n` as a linear subspace.
    pub fn linear_embedding(source: &Arc<CellSpace>, target: &Arc<CellSpace>) -> Result<Self> {
        same_theory(source, target)?;
        let (k, n) = (expect_projective(source)?, expect_projective(target)?);
        if k > n {
            return Err(Error::UnregisteredMap(format!("no linear embedding P^{k} -> P^{n}")));
        }
        Ok(Morphism {
            name: format!("P^{k} -> P^{n}"),
            source: source.clone(),
            target: target.clone(),
            bundle_pull: vec![LineBundle(vec![1])],
            proper: Some(WordShift { prim_map: vec![Some(0)], shift: vec![n - k] }),
            smooth: k == n,
        })
    }

    /// Projection of a product onto factor 1 or 2. Push-forward is
    /// available only when the other factor is a point.
    pub fn projection(product: &Arc<CellSpace>, factor: u8) -> Result<Self> {
        let Structure::Product { left, right } = product.structure() else {
            return Err(Error::UnregisteredMap(format!("{} is not a product", product.name())));
        };
        let (target, other, offset) = match factor {
            1 => (left, right, 0),
            2 => (right, left, left.primitives().len()),
            _ => return Err(Error::UnregisteredMap(format!("projection onto factor {factor}"))),
        };
        let total = product.primitives().len();
        let k = target.primitives().len();
        let proper = (other.dim() == 0).then(|| {
            let mut prim_map = vec![None; total];
            for i in 0..k {
                prim_map[offset + i] = Some(i);
            }
            WordShift { prim_map, shift: vec![0; k] }
        });
        Ok(Morphism {
            name: format!("p{factor}: {} -> {}", product.name(), target.name()),
            source: product.clone(),
            target: target.clone(),
            bundle_pull: (0..k).map(|i| LineBundle::primitive(total, offset + i, 1)).collect(),
            proper,
            smooth: true,
        })
    }

    /// `q: P(E) → X`; pull-back only.
    pub fn bundle_projection(pe: &Arc<CellSpace>) -> Result<Self> {
        let Structure::ProjectiveBundle { bundle } = pe.structure() else {
            return Err(Error::UnregisteredMap(format!("{} is not a projective bundle", pe.name())));
        };
        let base = bundle.base();
        let total = pe.primitives().len();
        Ok(Morphism {
            name: format!("q: {} -> {}", pe.name(), base.name()),
            source: pe.clone(),
            target: base.clone(),
            bundle_pull: (0..base.primitives().len()).map(|i| LineBundle::primitive(total, 1 + i, 1)).collect(),
            proper: None,
            smooth: true,
        })
    }

    /// `P(E|_{P^k}) ↪ P(E)` over a linear embedding `P^k ↪ P^n` of the bases;
    /// both bundles must use the same symbols.
    pub fn bundle_restriction(sub: &Arc<CellSpace>, whole: &Arc<CellSpace>) -> Result<Self> {
        same_theory(sub, whole)?;
        let (Structure::ProjectiveBundle { bundle: e1 }, Structure::ProjectiveBundle { bundle: e2 }) =
            (sub.structure(), whole.structure())
        else {
            return Err(Error::UnregisteredMap("bundle restriction needs two projective bundles".into()));
        };
        let (k, n) = (expect_projective(e1.base())?, expect_projective(e2.base())?);
        if k > n || e1.symbols() != e2.symbols() {
            return Err(Error::UnregisteredMap(format!("{} is not a restriction of {}", sub.name(), whole.name())));
        }
        Ok(Morphism {
            name: format!("{} -> {}", sub.name(), whole.name()),
            source: sub.clone(),
            target: whole.clone(),
            bundle_pull: vec![LineBundle(vec![1, 0]), LineBundle(vec![0, 1])],
            proper: Some(WordShift { prim_map: vec![Some(0), Some(1)], shift: vec![0, n - k] }),
            smooth: k == n,
        })
    }

    /// `f × g` between the product spaces.
    pub fn product(f: &Morphism, g: &Morphism) -> Result<Self> {
        let source = CellSpace::product(&f.source, &g.source)?;
        let target = CellSpace::product(&f.target, &g.target)?;
        let (ks, kt) = (f.source.primitives().len(), f.target.primitives().len());
        let total = source.primitives().len();
        let lift = |b: &LineBundle, offset: usize| {
            let mut v = vec![0; total];
            for (i, &m) in b.0.iter().enumerate() {
                v[offset + i] = m;
            }
            LineBundle(v)
        };
        let mut bundle_pull: Vec<LineBundle> = f.bundle_pull.iter().map(|b| lift(b, 0)).collect();
        bundle_pull.extend(g.bundle_pull.iter().map(|b| lift(b, ks)));
        let proper = match (&f.proper, &g.proper) {
            (Some(a), Some(b)) => {
                let mut prim_map = a.prim_map.clone();
                prim_map.extend(b.prim_map.iter().map(|p| p.map(|j| j + kt)));
                let mut shift = a.shift.clone();
                shift.extend(&b.shift);
                Some(WordShift { prim_map, shift })
            }
            _ => None,
        };
        Ok(Morphism {
            name: format!("({}) x ({})", f.name, g.name),
            source,
            target,
            bundle_pull,
            proper,
            smooth: f.smooth && g.smooth,
        })
    }

    /// `g ∘ f`.
    pub fn compose(f: &Morphism, g: &Morphism) -> Result<Self> {
        if !f.target.same_as(&g.source) {
            return Err(Error::UnregisteredMap(format!("{} does not compose with {}", f.name, g.name)));
        }
        let bundle_pull = g.bundle_pull.iter().map(|b| f.pull_bundle(b)).collect::<Result<Vec<_>>>()?;
        let proper = match (&f.proper, &g.proper) {
            (Some(a), Some(b)) => {
                let prim_map = a.prim_map.iter().map(|p| p.and_then(|j| b.prim_map[j])).collect();
                b.image(&a.shift).map(|shift| WordShift { prim_map, shift })
            }
            _ => None,
        };
        Ok(Morphism {
            name: format!("({}) o ({})", g.name, f.name),
            source: f.source.clone(),
            target: g.target.clone(),
            bundle_pull,
            proper,
            smooth: f.smooth && g.smooth,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<CellSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CellSpace> {
        &self.target
    }

    pub fn is_proper(&self) -> bool {
        self.proper.is_some()
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// `f^*L` for a line bundle on the target.
    pub fn pull_bundle(&self, b: &LineBundle) -> Result<LineBundle> {
        if b.0.len() != self.bundle_pull.len() {
            return Err(Error::UnknownBundle(format!("bundle is not on {}", self.target.name())));
        }
        let mut acc = LineBundle::trivial(self.source.primitives().len());
        for (m, img) in b.0.iter().zip(&self.bundle_pull) {
            acc = acc.tensor(&img.power(*m));
        }
        Ok(acc)
    }

    /// `f_*` as a (target cells × source cells) matrix.
    pub fn push_matrix(&self) -> Result<RingMatrix> {
        let shift = self
            .proper
            .as_ref()
            .ok_or_else(|| Error::UnregisteredMap(format!("push-forward along {}", self.name)))?;
        let ring = self.source.ring();
        let mut m = RingMatrix::zeros(ring, self.target.num_cells(), self.source.num_cells());
        for (j, cell) in self.source.cells().iter().enumerate() {
            let i = shift
                .image(&cell.word)
                .and_then(|w| self.target.cell_by_word(&w))
                .ok_or_else(|| Error::UnregisteredMap(format!("{} has no image cell under {}", cell.id, self.name)))?;
            m.set(i, j, ring.one());
        }
        Ok(m)
    }

    /// `f^*` as a (source cells × target cells) matrix.
    pub fn pull_matrix(&self) -> Result<RingMatrix> {
        if !self.smooth {
            return Err(Error::UnregisteredMap(format!("pull-back along the non-smooth map {}", self.name)));
        }
        let ring = self.source.ring();
        let ops = self
            .bundle_pull
            .iter()
            .map(|b| self.source.c1(b))
            .collect::<Result<Vec<_>>>()?;
        let unit = self.source.unit_vector();
        let mut m = RingMatrix::zeros(ring, self.source.num_cells(), self.target.num_cells());
        for (j, cell) in self.target.cells().iter().enumerate() {
            let mut v: Vec<GradedPolynomial> = unit.clone();
            for (op, &e) in ops.iter().zip(&cell.word) {
                for _ in 0..e {
                    v = op.apply(&v);
                }
            }
            for (i, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x);
                }
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmodel::space::SplitBundle;
    use crate::bmodel::theory::OrientedTheory;
    use crate::exactalg::Domain;
    use crate::fgl::FormalGroupLaw;

    fn theory() -> Arc<OrientedTheory> {
        OrientedTheory::new(FormalGroupLaw::multiplicative(Domain::Z, 6)).unwrap()
    }

    #[test]
    fn line_pushes_to_h1() {
        let t = theory();
        let p1 = CellSpace::projective_space(1, &t).unwrap();
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let f = Morphism::linear_embedding(&p1, &p2).unwrap();
        let v = f.push_matrix().unwrap().apply(&p1.unit_vector());
        assert!(v[1].is_one() && v[0].is_zero() && v[2].is_zero());
        assert!(f.pull_matrix().is_err());
        assert!(Morphism::linear_embedding(&p2, &p1).is_err());
    }

    #[test]
    fn bundle_projection_preserves_units() {
        let t = theory();
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let pe = CellSpace::projective_bundle(&SplitBundle::new(&p2, &["O", "O(1)", "O(2)"]).unwrap()).unwrap();
        let q = Morphism::bundle_projection(&pe).unwrap();
        assert_eq!(q.pull_matrix().unwrap().apply(&p2.unit_vector()), pe.unit_vector());
        assert!(q.push_matrix().is_err());
    }

    #[test]
    fn projection_with_point_fiber_pushes() {
        let t = theory();
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let pt = CellSpace::projective_space(0, &t).unwrap();
        let x = CellSpace::product(&p2, &pt).unwrap();
        let p = Morphism::projection(&x, 1).unwrap();
        let push = p.push_matrix().unwrap();
        let pull = p.pull_matrix().unwrap();
        assert_eq!(push.mul(&pull), RingMatrix::identity(t.ring(), 3));
        let y = CellSpace::product(&p2, &p2).unwrap();
        assert!(Morphism::projection(&y, 1).unwrap().push_matrix().is_err());
    }

    #[test]
    fn composition_checks_endpoints() {
        let t = theory();
        let p1 = CellSpace::projective_space(1, &t).unwrap();
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let p3 = CellSpace::projective_space(3, &t).unwrap();
        let f = Morphism::linear_embedding(&p1, &p2).unwrap();
        let g = Morphism::linear_embedding(&p2, &p3).unwrap();
        let gf = Morphism::compose(&f, &g).unwrap();
        assert_eq!(gf.push_matrix().unwrap(), g.push_matrix().unwrap().mul(&f.push_matrix().unwrap()));
        assert!(Morphism::compose(&g, &f).is_err());
    }
}
