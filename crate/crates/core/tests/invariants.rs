use std::sync::Arc;

use proptest::prelude::*;

use cobord_core::bmodel::{eval_series, BordismClass, CellSpace, LineBundle, Morphism, OrientedTheory};
use cobord_core::exactalg::Domain;
use cobord_core::fgl::{law_by_name, FormalGroupLaw};
use cobord_core::lazard::LazardRing;
use cobord_core::series::{substitute, TruncatedSeries};
use cobord_core::snc::{reassemble, snc_class, support_decomposition, SncDivisor};

fn law(index: usize, order: usize) -> FormalGroupLaw {
    let name = ["additive", "multiplicative", "universal"][index];
    law_by_name(name, order, Domain::Z).unwrap()
}

fn theory(index: usize) -> Arc<OrientedTheory> {
    OrientedTheory::new(law(index, 6)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn n_series_is_additive_in_n(l in 0usize..3, n in -3i64..4, m in -3i64..4) {
        let g = law(l, 6);
        let (a, b) = (g.n_series(n).unwrap(), g.n_series(m).unwrap());
        let sum = substitute(g.series(), &[("u", &a), ("v", &b)]).unwrap();
        prop_assert!(sum.eq_truncated(&g.n_series(n + m).unwrap()));
    }

    #[test]
    fn n_series_composes_multiplicatively(l in 0usize..3, n in -2i64..3, m in -2i64..3) {
        let g = law(l, 6);
        let composite = substitute(&g.n_series(n).unwrap(), &[("u", &g.n_series(m).unwrap())]).unwrap();
        prop_assert!(composite.eq_truncated(&g.n_series(n * m).unwrap()));
    }

    #[test]
    fn multi_sum_is_symmetric(l in 0usize..3, ns in proptest::collection::vec(1i64..3, 2..4)) {
        let g = law(l, 5);
        let s = g.multi_sum(&ns).unwrap();
        let mut rev = ns.clone();
        rev.reverse();
        let r = g.multi_sum(&rev).unwrap();
        let k = ns.len();
        let mapping: Vec<usize> = (0..k).rev().collect();
        prop_assert!(r.embed(s.vars(), &mapping).eq_truncated(&s));
    }

    #[test]
    fn support_decomposition_reassembles(l in 0usize..3, ns in proptest::collection::vec(1i64..4, 1..4)) {
        let g = law(l, 5);
        let parts = support_decomposition(&g, &ns).unwrap();
        let sum = g.multi_sum(&ns).unwrap();
        prop_assert_eq!(reassemble(&parts, sum.order()).unwrap(), sum);
    }

    #[test]
    fn specialized_multiplicative_laws_are_classified(beta in -4i64..5) {
        let ring = LazardRing::cached(5);
        let g = FormalGroupLaw::multiplicative_at(beta, Domain::Z, 6);
        let theta = ring.classifying_map(&g).unwrap();
        prop_assert!(theta.reproduces(&g).unwrap());
    }

    #[test]
    fn c1_of_tensor_products(l in 0usize..3, n in 1u32..4, a in -3i64..4, b in -3i64..4) {
        let t = theory(l);
        let pn = CellSpace::projective_space(n, &t).unwrap();
        let (x, y) = (pn.c1(&LineBundle(vec![a])).unwrap(), pn.c1(&LineBundle(vec![b])).unwrap());
        prop_assert_eq!(eval_series(t.fgl().series(), &[&x, &y]), pn.c1(&LineBundle(vec![a + b])).unwrap());
    }

    #[test]
    fn projection_formula_for_linear_subspaces(l in 0usize..3, n in 1u32..5, k in 0u32..5, a in -2i64..3, cell in 0u32..5) {
        prop_assume!(k <= n && cell <= k);
        let t = theory(l);
        let (pk, pn) = (CellSpace::projective_space(k, &t).unwrap(), CellSpace::projective_space(n, &t).unwrap());
        let f = Morphism::linear_embedding(&pk, &pn).unwrap();
        let bundle = LineBundle(vec![a]);
        let x = BordismClass::cell(&pk, &format!("h{cell}")).unwrap();
        let lhs = x.push_forward(&f).unwrap().c1_apply(&bundle).unwrap();
        let rhs = x.c1_apply(&f.pull_bundle(&bundle).unwrap()).unwrap().push_forward(&f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn intersection_product_commutes(l in 0usize..3, n in 1u32..5, xs in proptest::collection::vec(-3i64..4, 5), ys in proptest::collection::vec(-3i64..4, 5)) {
        let t = theory(l);
        let pn = CellSpace::projective_space(n, &t).unwrap();
        let ring = t.ring();
        let class = |cs: &[i64]| {
            BordismClass::from_coeffs(&pn, (0..=n as usize).map(|k| ring.from_int(cs[k])).collect()).unwrap()
        };
        let (a, b) = (class(&xs), class(&ys));
        prop_assert_eq!(a.intersection_product(&b).unwrap(), b.intersection_product(&a).unwrap());
    }

    #[test]
    fn snc_class_is_symmetric(l in 0usize..3, n in 1u32..4, mults in proptest::collection::vec(1i64..3, 2..4)) {
        let t = theory(l);
        let pn = CellSpace::projective_space(n, &t).unwrap();
        let e = SncDivisor::hyperplanes(&pn, &mults).unwrap();
        let m = mults.len();
        let perm: Vec<usize> = (0..m).rev().collect();
        let f = e.permuted(&perm).unwrap();
        let (ce, cf) = (snc_class(&e).unwrap(), snc_class(&f).unwrap());
        prop_assert_eq!(ce.summands.len(), cf.summands.len());
        for s in &ce.summands {
            // old component i is new component m-1-i
            let mut j: Vec<usize> = s.members.iter().map(|&i| m - 1 - i).collect();
            j.sort_unstable();
            let other = cf.summand(&j).unwrap();
            let mapping: Vec<usize> = (0..m).rev().collect();
            let moved: TruncatedSeries = s.operator.embed(other.operator.vars(), &mapping);
            prop_assert!(moved.eq_truncated(&other.operator));
        }
    }
}
