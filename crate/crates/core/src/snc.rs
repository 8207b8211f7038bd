//! Fundamental classes of strict normal crossing divisors.
//!
//! For `E = Σ n_i E_i` the class `[E → |E|]` is a sum over the faces
//! `E^J = ∩_{i∈J} E_i` of `G_J(c₁(L_1|E^J), …)(1_{E^J})`, where `G_J` is the
//! support-`J` part of the multi-sum `F^{n₁,…,n_m}` divided by `∏_{i∈J} u_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bmodel::{BordismClass, CellSpace, LineBundle, Morphism, OrientedTheory, SpaceRecipe};
use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::series::{SeriesJson, TruncatedSeries};

/// Components are numbered from 0; `J` is a sorted list of indices.
pub type FaceIndex = Vec<usize>;

/// `J ↦ G_J` with `F^{n₁,…,n_m} = Σ_J (∏_{i∈J} u_i)·G_J`. Each `G_J` lives
/// in the same variables `u1..um` and only involves those in `J`.
pub fn support_decomposition(fgl: &FormalGroupLaw, ns: &[i64]) -> Result<BTreeMap<FaceIndex, TruncatedSeries>> {
    let sum = fgl.multi_sum(ns)?;
    let vars = sum.vars().clone();
    let order = sum.order();
    let ring = sum.ring().clone();
    let mut out: BTreeMap<FaceIndex, Vec<(Vec<u32>, _)>> = BTreeMap::new();
    for (e, c) in sum.terms() {
        let support: FaceIndex = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i).collect();
        if support.is_empty() {
            return Err(Error::InvalidFgl(format!("{} has a constant term", fgl.name())));
        }
        let reduced: Vec<u32> = e.iter().map(|&k| k.saturating_sub(1)).collect();
        out.entry(support).or_default().push((reduced, c.clone()));
    }
    Ok(out
        .into_iter()
        .map(|(j, terms)| {
            let s = TruncatedSeries::from_terms(&ring, &vars, order - j.len(), terms);
            (j, s)
        })
        .collect())
}

/// `Σ_J (∏_{i∈J} u_i)·G_J`, the inverse of [`support_decomposition`].
pub fn reassemble(parts: &BTreeMap<FaceIndex, TruncatedSeries>, order: usize) -> Option<TruncatedSeries> {
    let (_, first) = parts.iter().next()?;
    let mut acc = TruncatedSeries::zero(first.ring(), first.vars(), order);
    for (j, g) in parts {
        for (e, c) in g.terms() {
            let mut e = e.clone();
            for &i in j {
                e[i] += 1;
            }
            if e.iter().sum::<u32>() as usize <= order {
                acc.add_term(e, c.clone());
            }
        }
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub bundle: String,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    /// Component numbers, starting at 1.
    pub members: Vec<usize>,
    pub dim: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FacesJson {
    Named(String),
    Explicit(Vec<FaceJson>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub ambient: SpaceRecipe,
    pub components: Vec<ComponentJson>,
    pub faces: FacesJson,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub symbol: String,
    pub bundle: LineBundle,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub members: FaceIndex,
    pub dim: u32,
}

/// A divisor described by its components and the dimensions of the nonempty
/// faces. Faces not listed are empty.
#[derive(Clone, Debug)]
pub struct SncDivisor {
    ambient: Arc<CellSpace>,
    components: Vec<Component>,
    faces: BTreeMap<FaceIndex, u32>,
    generic: bool,
}

impl SncDivisor {
    /// Checks that every subset of a nonempty face is a nonempty face of
    /// larger dimension, and that components have codimension at least one.
    pub fn new(ambient: &Arc<CellSpace>, components: Vec<Component>, faces: Vec<Face>) -> Result<Self> {
        let m = components.len();
        if m == 0 {
            return Err(Error::InconsistentLattice("a divisor needs at least one component".into()));
        }
        if let Some(c) = components.iter().find(|c| c.mult < 1) {
            return Err(Error::InconsistentLattice(format!("multiplicity {} of {}", c.mult, c.symbol)));
        }
        let mut map = BTreeMap::new();
        for f in faces {
            let mut j = f.members.clone();
            j.sort_unstable();
            j.dedup();
            if j.is_empty() || j.len() != f.members.len() || j.iter().any(|&i| i >= m) {
                return Err(Error::InconsistentLattice(format!("bad face {:?}", f.members)));
            }
            if map.insert(j.clone(), f.dim).is_some() {
                return Err(Error::InconsistentLattice(format!("face {j:?} listed twice")));
            }
        }
        for i in 0..m {
            match map.get(&vec![i]) {
                Some(&d) if d < ambient.dim() => {}
                Some(&d) => {
                    return Err(Error::InconsistentLattice(format!(
                        "component {} has dimension {d} in a space of dimension {}",
                        i + 1,
                        ambient.dim()
                    )))
                }
                None => return Err(Error::InconsistentLattice(format!("component {} has no face", i + 1))),
            }
        }
        for (j, &d) in &map {
            for drop in 0..j.len() {
                if j.len() == 1 {
                    break;
                }
                let mut sub = j.clone();
                sub.remove(drop);
                match map.get(&sub) {
                    Some(&e) if e > d => {}
                    Some(&e) => {
                        return Err(Error::InconsistentLattice(format!(
                            "face {:?} has dimension {d}, not below {e} of {:?}",
                            one_based(j),
                            one_based(&sub)
                        )))
                    }
                    None => {
                        return Err(Error::InconsistentLattice(format!(
                            "face {:?} is present but {:?} is not",
                            one_based(j),
                            one_based(&sub)
                        )))
                    }
                }
            }
        }
        Ok(SncDivisor { ambient: ambient.clone(), components, faces: map, generic: false })
    }

    /// Components in general position: `E^J` is nonempty of dimension
    /// `dim − |J|` whenever `|J| ≤ dim`.
    pub fn generic(ambient: &Arc<CellSpace>, components: Vec<Component>) -> Result<Self> {
        let m = components.len();
        if m > 20 {
            return Err(Error::OutOfRange(format!("{m} components in general position")));
        }
        let dim = ambient.dim() as usize;
        let mut faces = Vec::new();
        for mask in 1u64..(1u64 << m) {
            let j: FaceIndex = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if j.len() <= dim {
                faces.push(Face { dim: (dim - j.len()) as u32, members: j });
            }
        }
        let mut d = Self::new(ambient, components, faces)?;
        d.generic = true;
        Ok(d)
    }

    /// `mults[i]` copies of hyperplanes `O(1)` in general position on `P^n`.
    pub fn hyperplanes(ambient: &Arc<CellSpace>, mults: &[i64]) -> Result<Self> {
        let comps = mults
            .iter()
            .map(|&mult| Ok(Component { symbol: "O(1)".into(), bundle: ambient.bundle("O(1)")?, mult }))
            .collect::<Result<Vec<_>>>()?;
        Self::generic(ambient, comps)
    }

    pub fn from_json(json: &DivisorJson, theory: &Arc<OrientedTheory>) -> Result<Self> {
        let ambient = CellSpace::from_recipe(&json.ambient, theory)?;
        let components = json
            .components
            .iter()
            .map(|c| Ok(Component { symbol: c.bundle.clone(), bundle: ambient.bundle(&c.bundle)?, mult: c.mult }))
            .collect::<Result<Vec<_>>>()?;
        match &json.faces {
            FacesJson::Named(s) if s == "generic" => Self::generic(&ambient, components),
            FacesJson::Named(s) => Err(Error::Parse(format!("unknown face description `{s}`"))),
            FacesJson::Explicit(list) => {
                let faces = list
                    .iter()
                    .map(|f| {
                        if f.members.contains(&0) {
                            return Err(Error::InconsistentLattice("components are numbered from 1".into()));
                        }
                        Ok(Face { members: f.members.iter().map(|i| i - 1).collect(), dim: f.dim })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(&ambient, components, faces)
            }
        }
    }

    pub fn ambient(&self) -> &Arc<CellSpace> {
        &self.ambient
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.faces.iter().map(|(j, &dim)| Face { members: j.clone(), dim })
    }

    pub fn multiplicities(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.mult).collect()
    }

    /// Components relabelled so that new component `k` is old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let m = self.components.len();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::OutOfRange(format!("{perm:?} is not a permutation of {m} components")));
        }
        let mut inverse = vec![0; m];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let components = perm.iter().map(|&p| self.components[p].clone()).collect();
        let faces = self
            .faces
            .iter()
            .map(|(j, &dim)| {
                let mut j: FaceIndex = j.iter().map(|&i| inverse[i]).collect();
                j.sort_unstable();
                (j, dim)
            })
            .collect();
        Ok(SncDivisor { ambient: self.ambient.clone(), components, faces, generic: self.generic })
    }

    /// Whether every face is a linear subspace of `P^n`: generic position and
    /// all components `O(1)`.
    pub fn is_hyperplane_arrangement(&self) -> bool {
        let Some(n) = self.ambient.projective_dim() else {
            return false;
        };
        self.generic && self.components.iter().all(|c| c.bundle == LineBundle(vec![1])) && n == self.ambient.dim()
    }
}

fn one_based(j: &[usize]) -> Vec<usize> {
    j.iter().map(|i| i + 1).collect()
}

/// The operator on one face: `G_J` truncated at the face dimension, in the
/// variables `u_i = c₁(L_i|E^J)`.
#[derive(Clone, Debug)]
pub struct FaceSummand {
    pub members: FaceIndex,
    pub dim: u32,
    pub operator: TruncatedSeries,
}

#[derive(Clone, Debug)]
pub struct SncClass {
    pub summands: Vec<FaceSummand>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceSummandJson {
    pub members: Vec<usize>,
    pub dim: u32,
    pub operator: SeriesJson,
    pub display: String,
}

impl SncClass {
    pub fn summand(&self, members: &[usize]) -> Option<&FaceSummand> {
        self.summands.iter().find(|s| s.members == members)
    }

    pub fn to_json(&self) -> Vec<FaceSummandJson> {
        self.summands
            .iter()
            .map(|s| FaceSummandJson {
                members: one_based(&s.members),
                dim: s.dim,
                operator: s.operator.to_json(),
                display: s.operator.display_terms(),
            })
            .collect()
    }
}

impl fmt::Display for SncClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (k, s) in self.summands.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let face: Vec<String> = s.members.iter().map(|i| format!("E{}", i + 1)).collect();
            write!(f, "({})[{}]", s.operator.display_terms(), face.join("∩"))?;
        }
        Ok(())
    }
}

/// `[E → |E|]` face by face. Faces that are empty contribute nothing.
pub fn snc_class(e: &SncDivisor) -> Result<SncClass> {
    let fgl = e.ambient.theory().fgl();
    let law = fgl.at_order(e.ambient.dim() as usize);
    let parts = support_decomposition(&law, &e.multiplicities())?;
    let mut summands = Vec::new();
    for (j, dim) in &e.faces {
        if let Some(g) = parts.get(j) {
            let operator = g.truncate(*dim as usize);
            if !operator.is_zero() {
                summands.push(FaceSummand { members: j.clone(), dim: *dim, operator });
            }
        }
    }
    Ok(SncClass { summands })
}

/// The face classes `G_J(c₁, …)(1_{E^J})` on `E^J ≅ P^{n−|J|}` for a
/// hyperplane arrangement, each with its embedding into the ambient space.
pub fn face_classes(e: &SncDivisor) -> Result<Vec<(FaceIndex, BordismClass, Morphism)>> {
    if !e.is_hyperplane_arrangement() {
        return Err(Error::Unsupported(
            "concrete face classes need hyperplanes in general position on a projective space".into(),
        ));
    }
    let class = snc_class(e)?;
    let theory = e.ambient.theory();
    let mut out = Vec::new();
    for s in &class.summands {
        let face = CellSpace::projective_space(s.dim, theory)?;
        let h = face.c1_symbol("O(1)")?;
        let m = e.components.len();
        let mats: Vec<_> = (0..m).map(|_| &h).collect();
        let op = crate::bmodel::eval_series(&s.operator, &mats);
        let c = BordismClass::unit(&face).apply(&op);
        let i = Morphism::linear_embedding(&face, &e.ambient)?;
        out.push((s.members.clone(), c, i));
    }
    Ok(out)
}

/// `Σ_J i^J_* G_J(…)(1_{E^J})` on the ambient space.
pub fn pushforward_to_ambient(e: &SncDivisor) -> Result<BordismClass> {
    let mut acc = BordismClass::zero(&e.ambient);
    for (_, c, i) in face_classes(e)? {
        acc = acc.add(&c.push_forward(&i)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmodel::hypersurface_class;
    use crate::exactalg::{parse_polynomial, Domain};

    fn mult(order: usize) -> Arc<OrientedTheory> {
        OrientedTheory::new(FormalGroupLaw::multiplicative(Domain::Z, order)).unwrap()
    }

    fn poly(t: &OrientedTheory, s: &str) -> crate::exactalg::GradedPolynomial {
        parse_polynomial(t.ring().base(), s).unwrap()
    }

    #[test]
    fn decomposition_of_doubled_point() {
        let t = mult(4);
        let parts = support_decomposition(t.fgl(), &[2]).unwrap();
        assert_eq!(parts.len(), 1);
        let g = &parts[&vec![0]];
        // [2](u) = 2u − βu² divided by u
        assert_eq!(g.coefficient(&[0]).unwrap(), poly(&t, "2"));
        assert_eq!(g.coefficient(&[1]).unwrap(), poly(&t, "-beta"));
        assert!(g.coefficient(&[2]).unwrap().is_zero());
    }

    #[test]
    fn decomposition_of_two_reduced_components() {
        let t = mult(4);
        let parts = support_decomposition(t.fgl(), &[1, 1]).unwrap();
        assert_eq!(parts.keys().cloned().collect::<Vec<_>>(), vec![vec![0], vec![0, 1], vec![1]]);
        assert_eq!(parts[&vec![0]].display_terms(), "1");
        assert_eq!(parts[&vec![1]].display_terms(), "1");
        assert_eq!(parts[&vec![0, 1]].display_terms(), "-beta");
    }

    #[test]
    fn reassembly_recovers_the_multi_sum() {
        let t = OrientedTheory::named("universal:5", 5, Domain::Z).unwrap();
        for ns in [vec![1], vec![3], vec![1, 2], vec![2, 1, 1]] {
            let parts = support_decomposition(t.fgl(), &ns).unwrap();
            let sum = t.fgl().multi_sum(&ns).unwrap();
            assert_eq!(reassemble(&parts, sum.order()).unwrap(), sum, "{ns:?}");
        }
    }

    #[test]
    fn reduced_smooth_divisor_is_the_unit() {
        let t = mult(4);
        let p3 = CellSpace::projective_space(3, &t).unwrap();
        let e = SncDivisor::hyperplanes(&p3, &[1]).unwrap();
        let class = snc_class(&e).unwrap();
        assert_eq!(class.summands.len(), 1);
        assert_eq!(class.summands[0].operator.display_terms(), "1");
        let (_, c, _) = face_classes(&e).unwrap().remove(0);
        assert_eq!(c, BordismClass::unit(c.space()));
        assert_eq!(pushforward_to_ambient(&e).unwrap(), BordismClass::cell(&p3, "h1").unwrap());
    }

    #[test]
    fn double_point_on_a_line() {
        let t = mult(4);
        let p1 = CellSpace::projective_space(1, &t).unwrap();
        let e = SncDivisor::hyperplanes(&p1, &[2]).unwrap();
        let push = pushforward_to_ambient(&e).unwrap();
        assert_eq!(push.to_string(), "2*h1");
    }

    #[test]
    fn two_lines_in_the_plane() {
        let t = mult(4);
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let e = SncDivisor::hyperplanes(&p2, &[1, 1]).unwrap();
        let class = snc_class(&e).unwrap();
        assert_eq!(class.summand(&[0, 1]).unwrap().operator.display_terms(), "-beta");
        assert_eq!(pushforward_to_ambient(&e).unwrap(), hypersurface_class(&p2, 2).unwrap());
    }

    #[test]
    fn arrangements_match_hypersurfaces() {
        let t = mult(4);
        for n in 1..=4 {
            let pn = CellSpace::projective_space(n, &t).unwrap();
            for mults in [vec![1, 1, 1], vec![2, 1], vec![3], vec![1, 1, 1, 1, 1]] {
                let e = SncDivisor::hyperplanes(&pn, &mults).unwrap();
                let d = mults.iter().sum();
                assert_eq!(pushforward_to_ambient(&e).unwrap(), hypersurface_class(&pn, d).unwrap(), "n={n} {mults:?}");
            }
        }
    }

    #[test]
    fn relabelling_permutes_summands() {
        let t = mult(4);
        let p3 = CellSpace::projective_space(3, &t).unwrap();
        let e = SncDivisor::hyperplanes(&p3, &[1, 2, 3]).unwrap();
        let f = e.permuted(&[2, 0, 1]).unwrap();
        let (ce, cf) = (snc_class(&e).unwrap(), snc_class(&f).unwrap());
        assert_eq!(ce.summands.len(), cf.summands.len());
        let inverse = [1usize, 2, 0];
        for s in &ce.summands {
            let mut j: Vec<usize> = s.members.iter().map(|&i| inverse[i]).collect();
            j.sort_unstable();
            let other = cf.summand(&j).unwrap();
            let mut vals_e: Vec<_> = s.operator.terms().map(|(_, c)| c.clone()).collect();
            let mut vals_f: Vec<_> = other.operator.terms().map(|(_, c)| c.clone()).collect();
            vals_e.sort_by_key(|c| c.to_string());
            vals_f.sort_by_key(|c| c.to_string());
            assert_eq!(vals_e, vals_f, "{j:?}");
        }
    }

    #[test]
    fn lattice_consistency() {
        let t = mult(4);
        let p2 = CellSpace::projective_space(2, &t).unwrap();
        let comp = |s: &str| Component { symbol: s.into(), bundle: p2.bundle(s).unwrap(), mult: 1 };
        let ok = SncDivisor::new(
            &p2,
            vec![comp("O(1)"), comp("O(2)")],
            vec![Face { members: vec![0], dim: 1 }, Face { members: vec![1], dim: 1 }, Face { members: vec![0, 1], dim: 0 }],
        );
        assert!(ok.is_ok());
        let missing = SncDivisor::new(&p2, vec![comp("O(1)"), comp("O(2)")], vec![Face { members: vec![0], dim: 1 }]);
        assert!(matches!(missing, Err(Error::InconsistentLattice(_))));
        let flat = SncDivisor::new(
            &p2,
            vec![comp("O(1)"), comp("O(2)")],
            vec![Face { members: vec![0], dim: 1 }, Face { members: vec![1], dim: 1 }, Face { members: vec![0, 1], dim: 1 }],
        );
        assert!(matches!(flat, Err(Error::InconsistentLattice(_))));
        // abstract class exists, concrete push-forward does not
        let e = ok.unwrap();
        assert!(snc_class(&e).is_ok());
        assert!(matches!(pushforward_to_ambient(&e), Err(Error::Unsupported(_))));
    }

    #[test]
    fn divisor_json() {
        let t = mult(4);
        let text = r#"{"ambient":{"type":"Pn","n":2},"components":[{"bundle":"O(1)","mult":1},{"bundle":"O(1)","mult":1}],"faces":"generic"}"#;
        let json: DivisorJson = serde_json::from_str(text).unwrap();
        let e = SncDivisor::from_json(&json, &t).unwrap();
        assert_eq!(e.faces().count(), 3);
        let text = r#"{"ambient":{"type":"Pn","n":2},"components":[{"bundle":"O(1)","mult":2}],"faces":[{"members":[1],"dim":1}]}"#;
        let json: DivisorJson = serde_json::from_str(text).unwrap();
        let e = SncDivisor::from_json(&json, &t).unwrap();
        assert_eq!(snc_class(&e).unwrap().to_string(), "(2 - beta*u1)[E1]");
    }
}
