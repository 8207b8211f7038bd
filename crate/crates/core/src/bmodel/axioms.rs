//! Axiom instances on the cellular models, each checked as an exact matrix
//! identity.

use std::sync::Arc;

use serde::Serialize;

use super::maps::Morphism;
use super::matrix::{eval_series, RingMatrix};
use super::space::{CellSpace, LineBundle, SplitBundle};
use super::theory::OrientedTheory;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomInstance {
    pub axiom: String,
    pub instance: String,
    pub holds: bool,
}

fn inst(axiom: &str, instance: String, holds: bool) -> AxiomInstance {
    AxiomInstance { axiom: axiom.into(), instance, holds }
}

/// `(g∘f)^* = f^*∘g^*` for smooth `f: X → Y`, `g: Y → Z`.
pub fn check_a1(f: &Morphism, g: &Morphism) -> Result<AxiomInstance> {
    let gf = Morphism::compose(f, g)?;
    let lhs = gf.pull_matrix()?;
    let rhs = f.pull_matrix()?.mul(&g.pull_matrix()?);
    Ok(inst("A1", gf.name().to_string(), lhs == rhs))
}

/// `id^* = id`.
pub fn check_a1_identity(x: &Arc<CellSpace>) -> Result<AxiomInstance> {
    let id = Morphism::identity(x);
    let holds = id.pull_matrix()? == RingMatrix::identity(x.ring(), x.num_cells());
    Ok(inst("A1", format!("id on {}", x.name()), holds))
}

/// `g^* f_* = f'_* g'^*` for the Cartesian square with `f: X → Z` proper,
/// `g: Y → Z` smooth, `f': W → Y`, `g': W → X`.
pub fn check_a2(f: &Morphism, g: &Morphism, f2: &Morphism, g2: &Morphism) -> Result<AxiomInstance> {
    let lhs = g.pull_matrix()?.mul(&f.push_matrix()?);
    let rhs = f2.push_matrix()?.mul(&g2.pull_matrix()?);
    Ok(inst("A2", format!("{} / {}", f.name(), g.name()), lhs == rhs))
}

/// `f_* ∘ c₁(f^*L) = c₁(L) ∘ f_*`.
pub fn check_a3(f: &Morphism, l: &LineBundle) -> Result<AxiomInstance> {
    let push = f.push_matrix()?;
    let lhs = push.mul(&f.source().c1(&f.pull_bundle(l)?)?);
    let rhs = f.target().c1(l)?.mul(&push);
    Ok(inst("A3", format!("{} with {}", f.name(), f.target().bundle_symbol(l)), lhs == rhs))
}

/// `c₁(f^*L) ∘ f^* = f^* ∘ c₁(L)`.
pub fn check_a4(f: &Morphism, l: &LineBundle) -> Result<AxiomInstance> {
    let pull = f.pull_matrix()?;
    let lhs = f.source().c1(&f.pull_bundle(l)?)?.mul(&pull);
    let rhs = pull.mul(&f.target().c1(l)?);
    Ok(inst("A4", format!("{} with {}", f.name(), f.target().bundle_symbol(l)), lhs == rhs))
}

/// `c₁(L)∘c₁(M) = c₁(M)∘c₁(L)`.
pub fn check_a5_commute(x: &CellSpace, l: &LineBundle, m: &LineBundle) -> Result<AxiomInstance> {
    let (a, b) = (x.c1(l)?, x.c1(m)?);
    Ok(inst(
        "A5",
        format!("{} and {} on {}", x.bundle_symbol(l), x.bundle_symbol(m), x.name()),
        a.mul(&b) == b.mul(&a),
    ))
}

/// Isomorphic presentations give the same `c₁`: a bundle written as a
/// tensor product of single primitive factors versus its collected form.
pub fn check_a5_iso(x: &CellSpace, l: &LineBundle) -> Result<AxiomInstance> {
    let mut factors = Vec::new();
    for (i, &m) in l.0.iter().enumerate() {
        let unit = if m < 0 { -1 } else { 1 };
        for _ in 0..m.abs() {
            factors.push((i, unit));
        }
    }
    let holds = x.c1_of_factors(&factors)? == x.c1(l)?;
    Ok(inst("A5", format!("{} expanded on {}", x.bundle_symbol(l), x.name()), holds))
}

/// `×∘(f_* × g_*) = (f × g)_*∘×`.
pub fn check_a6(f: &Morphism, g: &Morphism) -> Result<AxiomInstance> {
    let fg = Morphism::product(f, g)?;
    let holds = fg.push_matrix()? == RingMatrix::kron(&f.push_matrix()?, &g.push_matrix()?);
    Ok(inst("A6", fg.name().to_string(), holds))
}

/// `×∘(f^* × g^*) = (f × g)^*∘×`.
pub fn check_a7(f: &Morphism, g: &Morphism) -> Result<AxiomInstance> {
    let fg = Morphism::product(f, g)?;
    let holds = fg.pull_matrix()? == RingMatrix::kron(&f.pull_matrix()?, &g.pull_matrix()?);
    Ok(inst("A7", fg.name().to_string(), holds))
}

/// `(c₁(L)α) × β = c₁(p₁^*L)(α × β)` for all cells `α`, `β`.
pub fn check_a8(x: &Arc<CellSpace>, y: &Arc<CellSpace>, l: &LineBundle) -> Result<AxiomInstance> {
    let xy = CellSpace::product(x, y)?;
    let p1 = Morphism::projection(&xy, 1)?;
    let lhs = RingMatrix::kron(&x.c1(l)?, &RingMatrix::identity(y.ring(), y.num_cells()));
    let rhs = xy.c1(&p1.pull_bundle(l)?)?;
    Ok(inst("A8", format!("{} on {} x {}", x.bundle_symbol(l), x.name(), y.name()), lhs == rhs))
}

/// Every composite of `dim + 1` primitive operators vanishes, and so does
/// `c₁(L)^{dim+1}` for each listed bundle.
pub fn check_dim(x: &CellSpace, bundles: &[LineBundle]) -> Result<AxiomInstance> {
    let k = x.primitives().len();
    let r = x.dim() as usize + 1;
    let mut holds = true;
    // multisets of size r from k primitives as nondecreasing index sequences
    let mut idx = vec![0usize; r];
    'outer: loop {
        let mut acc = RingMatrix::identity(x.ring(), x.num_cells());
        for &i in &idx {
            acc = acc.mul(&x.primitives()[i].matrix);
            if acc.is_zero() {
                break;
            }
        }
        holds &= acc.is_zero();
        let mut p = r;
        loop {
            if p == 0 {
                break 'outer;
            }
            p -= 1;
            if idx[p] + 1 < k {
                let v = idx[p] + 1;
                for q in idx.iter_mut().skip(p) {
                    *q = v;
                }
                break;
            }
        }
    }
    for b in bundles {
        holds &= x.c1(b)?.pow(r as u32).is_zero();
    }
    Ok(inst("Dim", format!("length {r} on {}", x.name()), holds))
}

/// `F(c₁(L), c₁(M)) = c₁(L ⊗ M)`.
pub fn check_fgl(x: &CellSpace, l: &LineBundle, m: &LineBundle) -> Result<AxiomInstance> {
    let (a, b) = (x.c1(l)?, x.c1(m)?);
    let lhs = eval_series(x.theory().fgl().series(), &[&a, &b]);
    let rhs = x.c1(&l.tensor(m))?;
    Ok(inst("FGL", format!("{} and {} on {}", x.bundle_symbol(l), x.bundle_symbol(m), x.name()), lhs == rhs))
}

/// `c₁(L)(1_X) = i_*(1_Z)` for the zero locus `Z` of a transverse section.
pub fn check_sect(x: &CellSpace, l: &LineBundle, zero_locus: &Morphism) -> Result<AxiomInstance> {
    let lhs = x.c1(l)?.apply(&x.unit_vector());
    let rhs = zero_locus.push_matrix()?.apply(&zero_locus.source().unit_vector());
    Ok(inst("Sect", format!("{} on {}", x.bundle_symbol(l), x.name()), lhs == rhs))
}

/// Euler class (zero-section composite) equals the top Chern class.
pub fn check_self_intersection(e: &SplitBundle) -> Result<AxiomInstance> {
    let holds = e.euler_class()? == e.chern_class(e.rank())?;
    Ok(inst("SelfInt", format!("{} on {}", e.symbols().join(" + "), e.base().name()), holds))
}

/// The Chern operators read back from `ξ^rank` on `P(E)` agree with the
/// elementary symmetric polynomials, and `q^*` is injective.
pub fn check_projective_bundle(e: &SplitBundle) -> Result<AxiomInstance> {
    let pe = CellSpace::projective_bundle(e)?;
    let base = e.base();
    let (r, m) = (e.rank(), base.num_cells());
    let xi_r = pe.primitives()[0].matrix.pow(r as u32);
    let chern = e.chern_classes()?;
    let mut holds = true;
    for (i, ci) in chern.iter().enumerate().skip(1) {
        let block = r - i;
        let sign = if i % 2 == 1 { 1 } else { -1 };
        for a in 0..m {
            for b in 0..m {
                holds &= *xi_r.get(block * m + a, b) == ci.get(a, b).scale_int(sign);
            }
        }
    }
    let q = Morphism::bundle_projection(&pe)?;
    let pull = q.pull_matrix()?;
    for b in 0..m {
        let col = pull.column(b);
        holds &= col.iter().enumerate().all(|(k, c)| if k == b { c.is_one() } else { c.is_zero() });
    }
    Ok(inst("PBT", format!("{}", pe.name()), holds))
}

/// Bundles with primitive exponents in `-1..=2`, at most `limit` of them.
pub fn sample_bundles(x: &CellSpace, limit: usize) -> Vec<LineBundle> {
    let k = x.primitives().len();
    let mut out = vec![LineBundle::trivial(k)];
    let mut cur = vec![-1i64; k];
    loop {
        let b = LineBundle(cur.clone());
        if !b.is_trivial() {
            out.push(b);
        }
        let mut p = 0;
        loop {
            if p == k {
                out.truncate(limit);
                return out;
            }
            if cur[p] < 2 {
                cur[p] += 1;
                break;
            }
            cur[p] = -1;
            p += 1;
        }
    }
}

/// Split bundles over `P²` used by the standard suite (ranks 1 to 3).
pub const STANDARD_SPLIT_BUNDLES: &[&[&str]] = &[
    &["O"],
    &["O(1)"],
    &["O", "O"],
    &["O", "O(1)"],
    &["O(1)", "O(1)"],
    &["O(-1)", "O(2)"],
    &["O", "O(1)", "O(2)"],
    &["O(1)", "O(1)", "O(1)"],
    &["O(-1)", "O", "O(1)"],
];

fn per_space(x: &Arc<CellSpace>, out: &mut Vec<AxiomInstance>) -> Result<()> {
    let bundles = sample_bundles(x, 16);
    out.push(check_a1_identity(x)?);
    for (i, l) in bundles.iter().enumerate() {
        out.push(check_a5_iso(x, l)?);
        for m in &bundles[i..] {
            out.push(check_a5_commute(x, l, m)?);
            out.push(check_fgl(x, l, m)?);
        }
    }
    out.push(check_dim(x, &bundles)?);
    Ok(())
}

/// All instances on `P^n` (`n ≤ max_n`), products `P^a × P^b`
/// (`a, b ≤ max_n`), and `P(E)` over `P²` for the standard split bundles,
/// restricted to dimensions the law's order supports.
pub fn standard_suite(theory: &Arc<OrientedTheory>, max_n: u32) -> Result<Vec<AxiomInstance>> {
    let order = theory.order() as u32;
    let mut out = Vec::new();
    let pn: Vec<Arc<CellSpace>> =
        (0..=max_n.min(order)).map(|n| CellSpace::projective_space(n, theory)).collect::<Result<_>>()?;

    for x in &pn {
        per_space(x, &mut out)?;
        let n = x.dim();
        if n >= 1 {
            let h = Morphism::linear_embedding(&pn[n as usize - 1], x)?;
            out.push(check_sect(x, &LineBundle(vec![1]), &h)?);
        }
        for y in &pn[..=n as usize] {
            let f = Morphism::linear_embedding(y, x)?;
            for l in sample_bundles(x, 16) {
                out.push(check_a3(&f, &l)?);
            }
        }
    }

    for a in &pn {
        for b in &pn {
            if a.dim() + b.dim() > order {
                continue;
            }
            let ab = CellSpace::product(a, b)?;
            per_space(&ab, &mut out)?;
            for factor in [1u8, 2] {
                let p = Morphism::projection(&ab, factor)?;
                for l in sample_bundles(p.target(), 16) {
                    out.push(check_a4(&p, &l)?);
                    if p.is_proper() {
                        out.push(check_a3(&p, &l)?);
                    }
                }
            }
            for l in sample_bundles(a, 16) {
                out.push(check_a8(a, b, &l)?);
            }
            // p₁: P^a × P^b → P^a followed by the identity
            let p1 = Morphism::projection(&ab, 1)?;
            out.push(check_a1(&p1, &Morphism::identity(a))?);
            if a.dim() >= 1 {
                // Sect: P^{a−1} × P^b is the zero locus of p₁^*O(1)
                let h = Morphism::linear_embedding(&pn[a.dim() as usize - 1], a)?;
                let hx = Morphism::product(&h, &Morphism::identity(b))?;
                out.push(check_sect(&ab, &LineBundle::primitive(2, 0, 1), &hx)?);
                for l in sample_bundles(&ab, 16) {
                    out.push(check_a3(&hx, &l)?);
                }
                // base change of P^{a−1} ↪ P^a along p₁
                let p1w = Morphism::projection(hx.source(), 1)?;
                out.push(check_a2(&h, &p1, &hx, &p1w)?);
            }
            // products of embeddings and of smooth maps
            for c in &pn[..=a.dim() as usize] {
                for d in &pn[..=b.dim() as usize] {
                    let f = Morphism::linear_embedding(c, a)?;
                    let g = Morphism::linear_embedding(d, b)?;
                    out.push(check_a6(&f, &g)?);
                }
            }
            out.push(check_a7(&Morphism::identity(a), &Morphism::identity(b))?);
        }
    }

    if order >= 2 {
        let p2 = pn.get(2).cloned().map_or_else(|| CellSpace::projective_space(2, theory), Ok)?;
        for symbols in STANDARD_SPLIT_BUNDLES {
            let e = SplitBundle::new(&p2, symbols)?;
            if p2.dim() + e.rank() as u32 - 1 > order {
                continue;
            }
            out.push(check_self_intersection(&e)?);
            out.push(check_projective_bundle(&e)?);
            let pe = CellSpace::projective_bundle(&e)?;
            per_space(&pe, &mut out)?;
            let q = Morphism::bundle_projection(&pe)?;
            for l in sample_bundles(&p2, 16) {
                out.push(check_a4(&q, &l)?);
            }
            for k in 0..2u32 {
                let pk = CellSpace::projective_space(k, theory)?;
                let ek = SplitBundle::new(&pk, symbols)?;
                let pek = CellSpace::projective_bundle(&ek)?;
                let f = Morphism::linear_embedding(&pk, &p2)?;
                let restr = Morphism::bundle_restriction(&pek, &pe)?;
                let qk = Morphism::bundle_projection(&pek)?;
                out.push(check_a2(&f, &q, &restr, &qk)?);
                for l in sample_bundles(&pe, 16) {
                    out.push(check_a3(&restr, &l)?);
                }
                if k == 1 {
                    out.push(check_sect(&pe, &LineBundle(vec![0, 1]), &restr)?);
                }
            }
            // q × id and its composite with p₁
            if pe.dim() + 1 <= order {
                let p1s = CellSpace::projective_space(1, theory)?;
                let qx = Morphism::product(&q, &Morphism::identity(&p1s))?;
                let pr = Morphism::projection(qx.target(), 1)?;
                out.push(check_a1(&qx, &pr)?);
                out.push(check_a7(&q, &Morphism::identity(&p1s))?);
                for l in sample_bundles(&pe, 8) {
                    out.push(check_a8(&pe, &p1s, &l)?);
                }
            }
        }
    }
    Ok(out)
}
