use std::cmp::Ordering;
use std::sync::Arc;

use fbetti::frobenius::{frobenius_power, twist_complex, BracketLevel};
use fbetti::groebner::{free_series, groebner_basis, saturate_at_irrelevant, syzygy_generators};
use fbetti::hilbert::independent_set_dimension;
use fbetti::monomial::degrevlex;
use fbetti::onedim::random_instance;
use fbetti::resolution::resolve;
use fbetti::{Limits, Matrix, Monomial, PolyRing, Polynomial, QuotientRing, SubmodulePresentation};
use proptest::prelude::*;

const P: u64 = 7;
const NV: usize = 3;

fn poly_ring() -> PolyRing {
    PolyRing::new(P, &["a", "b", "c"]).unwrap()
}

fn monomial(max_deg: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0..=max_deg, NV).prop_map(|e| Monomial::from_exponents(&e))
}

fn poly(max_deg: u32) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((1u32..P as u32, monomial(max_deg)), 0..5)
        .prop_map(|terms| Polynomial::from_terms(&poly_ring().field, terms))
}

fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            out.push(Monomial::from_exponents(&[a, b, d - a - b]));
        }
    }
    out
}

fn form(d: u32) -> impl Strategy<Value = Polynomial> {
    let monos = monomials_of_degree(d);
    let n = monos.len();
    proptest::collection::vec((1u32..P as u32, 0..n), 1..4).prop_map(move |t| {
        Polynomial::from_terms(&poly_ring().field, t.into_iter().map(|(c, i)| (c, monos[i].clone())).collect())
    })
}

/// Rings `S / I` with `I` generated by one to three quadrics or cubics, never the unit ideal.
fn quotient_ring() -> impl Strategy<Value = Arc<QuotientRing>> {
    proptest::collection::vec((2u32..=3).prop_flat_map(form), 1..=3)
        .prop_map(|gens| QuotientRing::new(poly_ring(), gens, Limits::default()).unwrap())
}

fn naive_degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    let key = |m: &Monomial| {
        let mut k: Vec<i64> = vec![m.degree() as i64];
        k.extend(m.exponents().iter().rev().map(|&e| -(e as i64)));
        k
    };
    key(a).cmp(&key(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly(3), g in poly(3), h in poly(3)) {
        let s = poly_ring();
        prop_assert_eq!(s.add(&f, &g), s.add(&g, &f));
        prop_assert_eq!(s.mul(&f, &g), s.mul(&g, &f));
        prop_assert_eq!(s.mul(&s.mul(&f, &g), &h), s.mul(&f, &s.mul(&g, &h)));
        prop_assert_eq!(s.mul(&f, &s.add(&g, &h)), s.add(&s.mul(&f, &g), &s.mul(&f, &h)));
        prop_assert!(s.sub(&f, &f).is_zero());
        prop_assert_eq!(s.mul(&f, &s.one()), f.clone());
    }

    #[test]
    fn frobenius_is_a_ring_map(f in poly(2), g in poly(2), e in 0u32..=2) {
        let s = poly_ring();
        let lvl = BracketLevel::new(P as u32, e).unwrap();
        let fr = |x: &Polynomial| frobenius_power(&s.field, x, lvl).unwrap();
        prop_assert_eq!(fr(&s.add(&f, &g)), s.add(&fr(&f), &fr(&g)));
        prop_assert_eq!(fr(&s.mul(&f, &g)), s.mul(&fr(&f), &fr(&g)));
        prop_assert_eq!(fr(&f), s.pow(&f, lvl.q as u64));
    }

    #[test]
    fn frobenius_composes(f in poly(2), e1 in 0u32..=1, e2 in 0u32..=1) {
        let s = poly_ring();
        let l = |e| BracketLevel::new(P as u32, e).unwrap();
        let inner = frobenius_power(&s.field, &f, l(e2)).unwrap();
        prop_assert_eq!(frobenius_power(&s.field, &inner, l(e1)).unwrap(), frobenius_power(&s.field, &f, l(e1 + e2)).unwrap());
    }

    #[test]
    fn degrevlex_matches_naive(a in monomial(4), b in monomial(4)) {
        prop_assert_eq!(degrevlex(&a, &b), naive_degrevlex(&a, &b));
    }

    #[test]
    fn parse_print_round_trip(f in poly(4)) {
        let s = poly_ring();
        prop_assert_eq!(s.parse(&s.format(&f)).unwrap(), f);
    }

    #[test]
    fn normal_form_is_linear_and_idempotent(r in quotient_ring(), f in poly(3), g in poly(3)) {
        let s = r.poly();
        let nf = r.reduce(&f);
        prop_assert_eq!(r.reduce(&nf), nf.clone());
        prop_assert_eq!(r.reduce(&s.add(&f, &g)), s.add(&nf, &r.reduce(&g)));
        prop_assert_eq!(r.reduce(&s.mul(&f, &g)), r.reduce(&s.mul(&nf, &g)));
    }

    #[test]
    fn ideal_generators_reduce_to_zero(r in quotient_ring()) {
        for g in r.generators() {
            prop_assert!(r.is_zero(g));
        }
    }

    #[test]
    fn module_groebner_bases_verify(r in quotient_ring(), a in form(1), b in form(2), c in form(1)) {
        let m = Matrix::new(vec![0, 1], vec![2, 2], vec![vec![b.clone(), a.clone()], vec![Polynomial::zero(), c.clone()]]).unwrap();
        prop_assert!(groebner_basis(&r, &m, true).unwrap().verify());
        prop_assert!(groebner_basis(&r, &m, false).unwrap().verify());
    }

    #[test]
    fn syzygies_are_complete_and_correct(r in quotient_ring(), a in form(1), b in form(1), c in form(2)) {
        let m = Matrix::new(vec![0], vec![1, 1, 2], vec![vec![a], vec![b], vec![c]]).unwrap();
        let k = syzygy_generators(&r, &m, true).unwrap();
        prop_assert!(m.compose(&r, &k).unwrap().is_zero());
        // HS(ker) = HS(source) - HS(image)
        let ker = SubmodulePresentation::submodule(r.clone(), k).unwrap().hilbert_series().unwrap();
        let img = SubmodulePresentation::submodule(r.clone(), m.clone()).unwrap().hilbert_series().unwrap();
        let src = free_series(&r, m.col_degrees());
        for t in 0..12 {
            prop_assert_eq!(ker.hilbert_function(t), src.hilbert_function(t) - img.hilbert_function(t));
        }
    }

    #[test]
    fn saturation_is_idempotent(r in quotient_ring(), f in form(1), g in form(2)) {
        let n = SubmodulePresentation::ideal(r.clone(), vec![f, g]).unwrap();
        let s1 = saturate_at_irrelevant(&n).unwrap();
        let s2 = saturate_at_irrelevant(&s1).unwrap();
        prop_assert!(s1.same_span(&s2).unwrap());
        for gen in n.matrix().columns() {
            prop_assert!(s1.contains(gen).unwrap());
        }
    }

    #[test]
    fn dimension_from_series_matches_independent_sets(r in quotient_ring()) {
        prop_assert_eq!(r.hilbert_series().dimension(), independent_set_dimension(r.leading_monomials(), NV));
        prop_assert_eq!(r.dimension(), r.hilbert_series().dimension());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn twisted_resolutions_are_complexes(seed in 0u64..10_000, e in 1u32..=2) {
        let inst = random_instance(seed, 3, 2, 1).unwrap();
        let res = resolve(&inst.module, 3, true).unwrap();
        prop_assert!(res.complex.is_complex().unwrap());
        prop_assert!(res.complex.is_minimal());
        let tw = twist_complex(&res.complex, BracketLevel::new(3, e).unwrap()).unwrap();
        prop_assert!(tw.is_complex().unwrap());
    }
}
