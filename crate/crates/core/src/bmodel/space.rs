//! Cellular models: every cell is an operator word in the primitive first
//! Chern classes applied to the fundamental class.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::matrix::{elementary_symmetric, eval_series, RingMatrix};
use super::theory::OrientedTheory;
use crate::error::{Error, Result};
use crate::exactalg::GradedPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: u32,
    /// Exponents of the primitive operators producing this cell from `1_X`.
    pub word: Vec<u32>,
}

/// A line bundle whose first Chern class is one of the generating
/// operators of the model.
#[derive(Clone, Debug)]
pub struct Primitive {
    pub name: String,
    pub matrix: RingMatrix,
}

/// A tensor product of powers of the primitive line bundles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineBundle(pub Vec<i64>);

impl LineBundle {
    pub fn trivial(n: usize) -> Self {
        LineBundle(vec![0; n])
    }

    pub fn primitive(n: usize, i: usize, power: i64) -> Self {
        let mut v = vec![0; n];
        v[i] = power;
        LineBundle(v)
    }

    pub fn tensor(&self, other: &LineBundle) -> LineBundle {
        LineBundle(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn power(&self, k: i64) -> LineBundle {
        LineBundle(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// How a space was built; used to rebuild it over another theory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SpaceRecipe {
    #[serde(rename = "Pn")]
    Projective { n: u32 },
    #[serde(rename = "product")]
    Product { left: Box<SpaceRecipe>, right: Box<SpaceRecipe> },
    /// `P(L₁ ⊕ … ⊕ L_r)` over the base, bundles given by symbol.
    #[serde(rename = "pbundle")]
    ProjectiveBundle { base: Box<SpaceRecipe>, bundles: Vec<String> },
}

#[derive(Clone, Debug)]
pub(crate) enum Structure {
    Projective { n: u32 },
    Product { left: Arc<CellSpace>, right: Arc<CellSpace> },
    ProjectiveBundle { bundle: SplitBundle },
}

/// Free module on cells with first Chern class operators.
pub struct CellSpace {
    name: String,
    theory: Arc<OrientedTheory>,
    dim: u32,
    cells: Vec<Cell>,
    primitives: Vec<Primitive>,
    structure: Structure,
    word_index: HashMap<Vec<u32>, usize>,
    id_index: HashMap<String, usize>,
    c1_cache: Mutex<HashMap<Vec<(usize, i64)>, RingMatrix>>,
}

impl fmt::Debug for CellSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CellSpace").field("name", &self.name).field("theory", &self.theory.name()).finish()
    }
}

/// A direct sum of line bundles on a base space.
#[derive(Clone, Debug)]
pub struct SplitBundle {
    base: Arc<CellSpace>,
    symbols: Vec<String>,
    bundles: Vec<LineBundle>,
}

impl SplitBundle {
    pub fn new(base: &Arc<CellSpace>, symbols: &[&str]) -> Result<Self> {
        let bundles = symbols.iter().map(|s| base.bundle(s)).collect::<Result<Vec<_>>>()?;
        Ok(SplitBundle { base: base.clone(), symbols: symbols.iter().map(|s| s.to_string()).collect(), bundles })
    }

    pub fn from_bundles(base: &Arc<CellSpace>, bundles: Vec<LineBundle>) -> Self {
        let symbols = bundles.iter().map(|b| base.bundle_symbol(b)).collect();
        SplitBundle { base: base.clone(), symbols, bundles }
    }

    pub fn base(&self) -> &Arc<CellSpace> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.bundles.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn bundles(&self) -> &[LineBundle] {
        &self.bundles
    }

    /// `c̃_i(E)`: the `i`-th elementary symmetric polynomial in the `c₁(L_k)`.
    pub fn chern_class(&self, i: usize) -> Result<RingMatrix> {
        if i > self.rank() {
            return Err(Error::OutOfRange(format!("Chern class c{i} of a rank {} bundle", self.rank())));
        }
        Ok(self.chern_classes()?.swap_remove(i))
    }

    /// `c̃_0, …, c̃_r`.
    pub fn chern_classes(&self) -> Result<Vec<RingMatrix>> {
        let mats = self.bundles.iter().map(|b| self.base.c1(b)).collect::<Result<Vec<_>>>()?;
        Ok(elementary_symmetric(self.base.ring(), self.base.num_cells(), &mats))
    }

    /// `s₀^* s₀_*` for the zero section of `L₁ ⊕ … ⊕ L_r`. The zero section
    /// factors through those of the summands, which gives the composite
    /// `c₁(L₁) ∘ … ∘ c₁(L_r)`.
    pub fn euler_class(&self) -> Result<RingMatrix> {
        if self.rank() == 0 {
            return Err(Error::OutOfRange("Euler class of a rank 0 bundle".into()));
        }
        let mut acc = RingMatrix::identity(self.base.ring(), self.base.num_cells());
        for b in &self.bundles {
            acc = acc.mul(&self.base.c1(b)?);
        }
        Ok(acc)
    }
}

fn shift_matrix(theory: &OrientedTheory, n: usize) -> RingMatrix {
    let ring = theory.ring();
    let mut m = RingMatrix::zeros(ring, n, n);
    for k in 0..n.saturating_sub(1) {
        m.set(k + 1, k, ring.one());
    }
    m
}

impl CellSpace {
    fn assemble(
        name: String,
        theory: &Arc<OrientedTheory>,
        dim: u32,
        cells: Vec<Cell>,
        primitives: Vec<Primitive>,
        structure: Structure,
    ) -> Result<Arc<Self>> {
        if dim as usize > theory.order() {
            return Err(Error::OutOfRange(format!(
                "{name} has dimension {dim} but the formal group law is only known to order {}",
                theory.order()
            )));
        }
        let word_index = cells.iter().enumerate().map(|(k, c)| (c.word.clone(), k)).collect();
        let id_index = cells.iter().enumerate().map(|(k, c)| (c.id.clone(), k)).collect();
        Ok(Arc::new(CellSpace {
            name,
            theory: theory.clone(),
            dim,
            cells,
            primitives,
            structure,
            word_index,
            id_index,
            c1_cache: Mutex::new(HashMap::new()),
        }))
    }

    /// `P^n` with cells `h^k = [P^{n−k} ⊂ P^n]` and `c₁(O(1))` the shift.
    pub fn projective_space(n: u32, theory: &Arc<OrientedTheory>) -> Result<Arc<Self>> {
        let cells = (0..=n).map(|k| Cell { id: format!("h{k}"), dim: n - k, word: vec![k] }).collect();
        let prim = Primitive { name: "O(1)".into(), matrix: shift_matrix(theory, n as usize + 1) };
        Self::assemble(format!("P^{n}"), theory, n, cells, vec![prim], Structure::Projective { n })
    }

    /// `X × Y`; cell `(a, b)` has index `a·|Y| + b`.
    pub fn product(x: &Arc<CellSpace>, y: &Arc<CellSpace>) -> Result<Arc<Self>> {
        if *x.theory != *y.theory {
            return Err(Error::TheoryMismatch(format!("{} over {} vs {} over {}", x.name, x.theory.name(), y.name, y.theory.name())));
        }
        let mut cells = Vec::with_capacity(x.cells.len() * y.cells.len());
        for a in &x.cells {
            for b in &y.cells {
                let mut word = a.word.clone();
                word.extend(&b.word);
                cells.push(Cell { id: format!("({},{})", a.id, b.id), dim: a.dim + b.dim, word });
            }
        }
        let ring = x.ring();
        let (ix, iy) = (RingMatrix::identity(ring, x.num_cells()), RingMatrix::identity(ring, y.num_cells()));
        let mut prims = Vec::new();
        for p in &x.primitives {
            prims.push(Primitive { name: format!("p1*{}", p.name), matrix: RingMatrix::kron(&p.matrix, &iy) });
        }
        for p in &y.primitives {
            prims.push(Primitive { name: format!("p2*{}", p.name), matrix: RingMatrix::kron(&ix, &p.matrix) });
        }
        Self::assemble(
            format!("({} x {})", x.name, y.name),
            &x.theory,
            x.dim + y.dim,
            cells,
            prims,
            Structure::Product { left: x.clone(), right: y.clone() },
        )
    }

    /// `P(E)` with cells `ξ^j·q^*(b)` for `0 ≤ j < rank`. `ξ = c₁(O(1))`
    /// shifts `j`, and `ξ^rank` is rewritten by the monic relation
    /// `Σ_{i=0}^{rank} (−1)^i ξ^{rank−i} c̃_i(E) = 0`.
    pub fn projective_bundle(e: &SplitBundle) -> Result<Arc<Self>> {
        let r = e.rank();
        if r == 0 {
            return Err(Error::OutOfRange("projective bundle of a rank 0 bundle".into()));
        }
        let base = &e.base;
        let m = base.num_cells();
        let ring = base.ring().clone();
        let rel = (r - 1) as u32;
        let mut cells = Vec::with_capacity(r * m);
        for j in 0..r {
            for b in &base.cells {
                let mut word = vec![j as u32];
                word.extend(&b.word);
                cells.push(Cell { id: format!("xi{j}.{}", b.id), dim: b.dim + rel - j as u32, word });
            }
        }
        let chern = e.chern_classes()?;
        let n = r * m;
        let mut xi = RingMatrix::zeros(&ring, n, n);
        for j in 0..r - 1 {
            for b in 0..m {
                xi.set((j + 1) * m + b, j * m + b, ring.one());
            }
        }
        for (i, ci) in chern.iter().enumerate().skip(1) {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let block = r - i;
            for b in 0..m {
                for b2 in 0..m {
                    let c = ci.get(b2, b);
                    if !c.is_zero() {
                        xi.add_to(block * m + b2, (r - 1) * m + b, &c.scale_int(sign));
                    }
                }
            }
        }
        let mut prims = vec![Primitive { name: "O(1)".into(), matrix: xi }];
        for p in &base.primitives {
            let mut blk = RingMatrix::zeros(&ring, n, n);
            for j in 0..r {
                for a in 0..m {
                    for b in 0..m {
                        let c = p.matrix.get(a, b);
                        if !c.is_zero() {
                            blk.set(j * m + a, j * m + b, c.clone());
                        }
                    }
                }
            }
            prims.push(Primitive { name: format!("q*{}", p.name), matrix: blk });
        }
        Self::assemble(
            format!("P({} / {})", e.symbols.join(" + "), base.name),
            &base.theory,
            base.dim + rel,
            cells,
            prims,
            Structure::ProjectiveBundle { bundle: e.clone() },
        )
    }

    pub fn from_recipe(recipe: &SpaceRecipe, theory: &Arc<OrientedTheory>) -> Result<Arc<Self>> {
        match recipe {
            SpaceRecipe::Projective { n } => Self::projective_space(*n, theory),
            SpaceRecipe::Product { left, right } => {
                Self::product(&Self::from_recipe(left, theory)?, &Self::from_recipe(right, theory)?)
            }
            SpaceRecipe::ProjectiveBundle { base, bundles } => {
                let base = Self::from_recipe(base, theory)?;
                let symbols: Vec<&str> = bundles.iter().map(String::as_str).collect();
                Self::projective_bundle(&SplitBundle::new(&base, &symbols)?)
            }
        }
    }

    pub fn recipe(&self) -> SpaceRecipe {
        match &self.structure {
            Structure::Projective { n } => SpaceRecipe::Projective { n: *n },
            Structure::Product { left, right } => {
                SpaceRecipe::Product { left: Box::new(left.recipe()), right: Box::new(right.recipe()) }
            }
            Structure::ProjectiveBundle { bundle } => SpaceRecipe::ProjectiveBundle {
                base: Box::new(bundle.base.recipe()),
                bundles: bundle.symbols.clone(),
            },
        }
    }

    /// The same space over another theory; cells keep their ids and order.
    pub fn rebuild(&self, theory: &Arc<OrientedTheory>) -> Result<Arc<Self>> {
        Self::from_recipe(&self.recipe(), theory)
    }

    pub(crate) fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn theory(&self) -> &Arc<OrientedTheory> {
        &self.theory
    }

    pub fn ring(&self) -> &crate::exactalg::CoefficientRing {
        self.theory.ring()
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `Some(n)` if this is `P^n`.
    pub fn projective_dim(&self) -> Option<u32> {
        match self.structure {
            Structure::Projective { n } => Some(n),
            _ => None,
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).copied()
    }

    pub fn cell_by_word(&self, word: &[u32]) -> Option<usize> {
        self.word_index.get(word).copied()
    }

    /// Index of the fundamental class (the empty word).
    pub fn unit_index(&self) -> usize {
        self.word_index[&vec![0; self.primitives.len()]]
    }

    /// Same structure over the same theory.
    pub fn same_as(&self, other: &CellSpace) -> bool {
        std::ptr::eq(self, other) || (self.name == other.name && *self.theory == *other.theory)
    }

    pub fn primitive_index(&self, name: &str) -> Option<usize> {
        self.primitives.iter().position(|p| p.name == name)
    }

    /// Parses `O`, `O(m)`, `q*O(m)`, `p1*O(m)`, … and tensor products of
    /// these joined by `⊗` or `(x)`.
    pub fn bundle(&self, symbol: &str) -> Result<LineBundle> {
        let mut acc = LineBundle::trivial(self.primitives.len());
        for factor in symbol.replace("(x)", "⊗").split('⊗') {
            let f = factor.trim();
            let unknown = || Error::UnknownBundle(format!("`{f}` on {}", self.name));
            if f.is_empty() {
                return Err(unknown());
            }
            if f == "O" {
                continue;
            }
            let open = f.rfind("O(").ok_or_else(unknown)?;
            let (prefix, rest) = f.split_at(open);
            let inner = rest.strip_prefix("O(").and_then(|s| s.strip_suffix(')')).ok_or_else(unknown)?;
            let power: i64 = inner.trim().parse().map_err(|_| unknown())?;
            let idx = self.primitive_index(&format!("{prefix}O(1)")).ok_or_else(unknown)?;
            acc.0[idx] += power;
        }
        Ok(acc)
    }

    pub fn bundle_symbol(&self, b: &LineBundle) -> String {
        let parts: Vec<String> = b
            .0
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(i, &m)| {
                let prefix = self.primitives[i].name.trim_end_matches("O(1)");
                format!("{prefix}O({m})")
            })
            .collect();
        if parts.is_empty() {
            "O".into()
        } else {
            parts.join(" ⊗ ")
        }
    }

    /// `c₁` of a tensor product of primitive powers, one formal summand per
    /// listed factor: `c₁(⊗ P_i^{m_i}) = F^{m₁,…}(c₁(P₁), …)`.
    pub fn c1_of_factors(&self, factors: &[(usize, i64)]) -> Result<RingMatrix> {
        let factors: Vec<(usize, i64)> = factors.iter().copied().filter(|&(_, m)| m != 0).collect();
        let n = self.num_cells();
        if factors.is_empty() {
            return Ok(RingMatrix::zeros(self.ring(), n, n));
        }
        if let Some(&(i, _)) = factors.iter().find(|(i, _)| *i >= self.primitives.len()) {
            return Err(Error::UnknownBundle(format!("primitive #{i} on {}", self.name)));
        }
        if let Some(m) = self.c1_cache.lock().expect("c1 cache").get(&factors) {
            return Ok(m.clone());
        }
        // F([m₁]x₁, F([m₂]x₂, …)) one factor at a time; same as the multi-sum
        // since every composite of more than `dim` primitives vanishes
        let fgl = self.theory.fgl();
        let mut m: Option<RingMatrix> = None;
        for &(i, k) in &factors {
            let term = eval_series(&fgl.n_series(k)?, &[&self.primitives[i].matrix]);
            m = Some(match m {
                None => term,
                Some(acc) => eval_series(fgl.series(), &[&acc, &term]),
            });
        }
        let m = m.expect("nonempty");
        self.c1_cache.lock().expect("c1 cache").insert(factors, m.clone());
        Ok(m)
    }

    /// `c₁(L)` as a matrix on the cell module.
    pub fn c1(&self, b: &LineBundle) -> Result<RingMatrix> {
        if b.0.len() != self.primitives.len() {
            return Err(Error::UnknownBundle(format!("bundle with {} exponents on {}", b.0.len(), self.name)));
        }
        let factors: Vec<(usize, i64)> = b.0.iter().copied().enumerate().collect();
        self.c1_of_factors(&factors)
    }

    pub fn c1_symbol(&self, symbol: &str) -> Result<RingMatrix> {
        self.c1(&self.bundle(symbol)?)
    }

    /// `∏ P_i^{w_i}` applied to nothing: the operator of a cell word.
    pub fn word_operator(&self, word: &[u32]) -> RingMatrix {
        let mut acc = RingMatrix::identity(self.ring(), self.num_cells());
        for (i, &e) in word.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.primitives[i].matrix.pow(e));
            }
        }
        acc
    }

    pub fn unit_vector(&self) -> Vec<GradedPolynomial> {
        let mut v = vec![self.ring().zero(); self.num_cells()];
        v[self.unit_index()] = self.ring().one();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Domain;
    use crate::fgl::FormalGroupLaw;

    fn mult(order: usize) -> Arc<OrientedTheory> {
        OrientedTheory::new(FormalGroupLaw::multiplicative(Domain::Z, order)).unwrap()
    }

    fn add(order: usize) -> Arc<OrientedTheory> {
        OrientedTheory::new(FormalGroupLaw::additive(Domain::Z, order)).unwrap()
    }

    #[test]
    fn projective_plane_cells() {
        let p2 = CellSpace::projective_space(2, &add(4)).unwrap();
        assert_eq!(p2.cells().iter().map(|c| c.id.as_str()).collect::<Vec<_>>(), vec!["h0", "h1", "h2"]);
        assert_eq!(p2.unit_index(), 0);
        let h = p2.c1_symbol("O(1)").unwrap();
        let one = p2.unit_vector();
        let h1 = h.apply(&one);
        assert!(h1[1].is_one() && h1[0].is_zero() && h1[2].is_zero());
        assert!(h.pow(3).is_zero());
        assert!(!h.pow(2).is_zero());
    }

    #[test]
    fn point_has_zero_c1() {
        let pt = CellSpace::projective_space(0, &add(2)).unwrap();
        assert_eq!(pt.num_cells(), 1);
        assert!(pt.c1_symbol("O(5)").unwrap().is_zero());
    }

    #[test]
    fn o2_on_p2_multiplicative() {
        let t = mult(4);
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let v = p2.c1_symbol("O(2)").unwrap().apply(&p2.unit_vector());
        let beta = t.ring().var("beta").unwrap();
        assert_eq!(v, vec![t.ring().zero(), t.ring().from_int(2), beta.neg()]);
    }

    #[test]
    fn bundle_symbols() {
        let t = add(4);
        let p1 = CellSpace::projective_space(1, &t).unwrap();
        let x = CellSpace::product(&p1, &p1).unwrap();
        assert_eq!(x.bundle("p1*O(2) ⊗ p2*O(-1)").unwrap(), LineBundle(vec![2, -1]));
        assert_eq!(x.bundle("p1*O(1) (x) p1*O(1)").unwrap(), LineBundle(vec![2, 0]));
        assert_eq!(x.bundle("O").unwrap(), LineBundle(vec![0, 0]));
        assert!(matches!(x.bundle("O(1)"), Err(Error::UnknownBundle(_))));
        assert!(matches!(x.bundle("p3*O(1)"), Err(Error::UnknownBundle(_))));
        assert_eq!(x.bundle_symbol(&LineBundle(vec![2, -1])), "p1*O(2) ⊗ p2*O(-1)");
    }

    #[test]
    fn product_of_lines_meets_in_a_point() {
        let t = mult(3);
        let p1 = CellSpace::projective_space(1, &t).unwrap();
        let x = CellSpace::product(&p1, &p1).unwrap();
        let a = x.c1_symbol("p1*O(1)").unwrap();
        let b = x.c1_symbol("p2*O(1)").unwrap();
        let v = a.mul(&b).apply(&x.unit_vector());
        let pt = x.cell_index("(h1,h1)").unwrap();
        for (k, c) in v.iter().enumerate() {
            assert_eq!(c.is_one(), k == pt);
            assert!(c.is_zero() || k == pt);
        }
    }

    #[test]
    fn trivial_bundle_gives_p1() {
        let t = add(3);
        let pt = CellSpace::projective_space(0, &t).unwrap();
        let pe = CellSpace::projective_bundle(&SplitBundle::new(&pt, &["O", "O"]).unwrap()).unwrap();
        assert_eq!(pe.dim(), 1);
        let xi = &pe.primitives()[0].matrix;
        assert!(xi.pow(2).is_zero());
        assert!(!xi.is_zero());
    }

    #[test]
    fn bundle_relation_over_p1_additive() {
        // P(O ⊕ O(1)) over P¹: ξ² = c₁(O(1))·ξ
        let t = add(3);
        let p1 = CellSpace::projective_space(1, &t).unwrap();
        let pe = CellSpace::projective_bundle(&SplitBundle::new(&p1, &["O", "O(1)"]).unwrap()).unwrap();
        let xi = pe.c1_symbol("O(1)").unwrap();
        let h = pe.c1_symbol("q*O(1)").unwrap();
        assert_eq!(xi.mul(&xi), h.mul(&xi));
        assert_eq!(xi.mul(&h), h.mul(&xi));
    }

    #[test]
    fn dimension_must_fit_the_order() {
        assert!(matches!(CellSpace::projective_space(5, &add(4)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn chern_and_euler_on_p2() {
        let t = mult(4);
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let e = SplitBundle::new(&p2, &["O(1)", "O(1)"]).unwrap();
        let c2 = e.chern_class(2).unwrap();
        let v = c2.apply(&p2.unit_vector());
        assert!(v[2].is_one() && v[0].is_zero() && v[1].is_zero());
        assert_eq!(e.euler_class().unwrap(), c2);
        assert_eq!(e.chern_class(0).unwrap(), RingMatrix::identity(t.ring(), 3));
        assert!(e.chern_class(3).is_err());
        let h = p2.c1_symbol("O(1)").unwrap();
        assert_eq!(e.chern_class(1).unwrap(), h.add(&h));
        let triv = SplitBundle::new(&p2, &["O", "O"]).unwrap();
        assert!(triv.euler_class().unwrap().is_zero());
    }

    #[test]
    fn recipe_round_trip() {
        let t = mult(5);
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let pe = CellSpace::projective_bundle(&SplitBundle::new(&p2, &["O", "O(1)"]).unwrap()).unwrap();
        let x = CellSpace::product(&pe, &CellSpace::projective_space(1, &t).unwrap()).unwrap();
        let again = CellSpace::from_recipe(&x.recipe(), &t).unwrap();
        assert!(again.same_as(&x));
        assert_eq!(again.cells(), x.cells());
        let json = serde_json::to_string(&x.recipe()).unwrap();
        let back: SpaceRecipe = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x.recipe());
    }
}
