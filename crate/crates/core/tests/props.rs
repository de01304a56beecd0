//! Randomized algebraic laws, driven by generated series, rationals, and
//! forests rather than hand-picked examples.

use hopfren::convolution::{compose_antipode, conv_unit, convolve, maps_agree, HopfMap};
use hopfren::laurent::{
    parse_series, render_series, scheme, LaurentSeries, Precision,
};
use hopfren::rational::Rational;
use hopfren::trees::{parse_forest, Forest, RootedTrees};
use hopfren::{Context, HopfInstance};
use proptest::prelude::*;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// An exact Laurent polynomial supported between z^-3 and z^3.
fn arb_exact_series() -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((-3i64..=3, arb_rational()), 0..6)
        .prop_map(|terms| LaurentSeries::from_terms(terms, Precision::Exact))
}

/// A series with a finite window at least as wide as its support.
fn arb_windowed_series() -> impl Strategy<Value = LaurentSeries> {
    (prop::collection::vec((-3i64..=3, arb_rational()), 0..6), 3i64..=6)
        .prop_map(|(terms, k)| LaurentSeries::from_terms(terms, Precision::UpTo(k)))
}

fn arb_series() -> impl Strategy<Value = LaurentSeries> {
    prop_oneof![arb_exact_series(), arb_windowed_series()]
}

/// A rooted tree of the given size, built by attaching each new vertex to a
/// random earlier one (standard recursive-forest encoding).
fn arb_tree(size: usize) -> impl Strategy<Value = Forest> {
    prop::collection::vec(0usize..=8, size.saturating_sub(1)).prop_map(move |choices| {
        // children[v] lists the children of vertex v, vertices are 0..size
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); size];
        for (i, c) in choices.iter().enumerate() {
            let v = i + 1; // vertex being attached
            children[c % v].push(v);
        }
        fn render(v: usize, children: &[Vec<usize>]) -> String {
            let mut out = String::from("[0");
            for &c in &children[v] {
                out.push(' ');
                out.push_str(&render(c, children));
            }
            out.push(']');
            out
        }
        parse_forest(&render(0, &children)).unwrap()
    })
}

fn arb_forest() -> impl Strategy<Value = Forest> {
    prop::collection::vec((1usize..=4).prop_flat_map(arb_tree), 0..3).prop_map(|trees| {
        let mut text = String::new();
        for t in trees {
            if !text.is_empty() {
                text.push(' ');
            }
            text.push_str(&t.to_string());
        }
        if text.is_empty() {
            Forest::empty()
        } else {
            parse_forest(&text).unwrap()
        }
    })
}

// ---------------------------------------------------------------------------
// Series arithmetic laws
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn addition_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn multiplication_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn multiplication_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn multiplication_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
        let left = a.mul(&b.add(&c));
        let right = a.mul(&b).add(&a.mul(&c));
        // the distributed side can only be more precise, never different
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn subtraction_cancels(a in arb_series()) {
        prop_assert!(a.sub(&a).is_zero_within_window());
    }

    #[test]
    fn split_reconstructs_exact_series(a in arb_exact_series()) {
        let (polar, holo) = scheme::ms_project(&a).unwrap();
        prop_assert_eq!(polar.add(&holo), a.clone());
        // and the two parts live on disjoint exponent ranges
        prop_assert!(polar.holomorphic_part().unwrap().is_exactly_zero());
        prop_assert!(holo.polar_part().unwrap().is_exactly_zero());
    }

    #[test]
    fn split_is_multiplicatively_coherent(a in arb_exact_series(), b in arb_exact_series()) {
        prop_assert!(scheme::rota_baxter_check(&a, &b).unwrap());
    }

    #[test]
    fn inversion_round_trips(a in arb_exact_series()) {
        prop_assume!(!a.is_exactly_zero());
        let inv = a.inverse(6).unwrap();
        let product = a.mul(&inv);
        prop_assert!(product.agrees_with(&LaurentSeries::one()));
    }

    #[test]
    fn exponentials_turn_sums_into_products(
        terms_a in prop::collection::vec((1i64..=3, arb_rational()), 0..3),
        terms_b in prop::collection::vec((1i64..=3, arb_rational()), 0..3),
    ) {
        let a = LaurentSeries::from_terms(terms_a, Precision::UpTo(6));
        let b = LaurentSeries::from_terms(terms_b, Precision::UpTo(6));
        let left = a.add(&b).exp().unwrap();
        let right = a.exp().unwrap().mul(&b.exp().unwrap());
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn series_survive_render_and_parse(a in arb_series()) {
        let text = render_series(&a);
        let back = parse_series(&text).unwrap();
        prop_assert_eq!(back, a);
    }
}

// ---------------------------------------------------------------------------
// Forest literals
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn forests_survive_render_and_parse(f in arb_forest()) {
        let text = f.to_string();
        let back = parse_forest(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}

// ---------------------------------------------------------------------------
// Hopf-algebraic laws on random data
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coproducts_are_multiplicative(a in arb_tree(3), b in arb_tree(2)) {
        let ctx = Context::with_default_precision(RootedTrees::undecorated());
        let prod = ctx.instance.product(&a, &b);
        let lhs = ctx.coproduct(&prod);
        let mut rhs = hopfren::TensorElement::zero();
        for ((al, ar), ca) in ctx.coproduct_basis(&a).terms() {
            for ((bl, br), cb) in ctx.coproduct_basis(&b).terms() {
                let l = ctx.instance.product(al, bl);
                let r = ctx.instance.product(ar, br);
                for (lb, lc) in l.terms() {
                    for (rb, rc) in r.terms() {
                        rhs.add_term(lb.clone(), rb.clone(), ca * cb * lc * rc);
                    }
                }
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antipode_inverts_under_convolution(f in arb_forest()) {
        // S is the convolution inverse of the identity: m(S x' , x'') = eps(x) 1
        let ctx = Context::with_default_precision(RootedTrees::undecorated());
        let mut acc = hopfren::Element::zero();
        for ((l, r), c) in ctx.coproduct_basis(&f).terms() {
            let s_l = ctx.antipode_basis(l);
            acc = acc.add(&ctx.mul_elements(&s_l, &hopfren::Element::basis(r.clone())).scale(c));
        }
        let expected = ctx.unit_element().scale(&ctx.counit(&hopfren::Element::basis(f.clone())));
        prop_assert_eq!(acc, expected);
    }

    #[test]
    fn character_inverse_composes_with_the_antipode(values in prop::collection::vec(arb_exact_series(), 8)) {
        let ctx = Context::with_default_precision(RootedTrees::undecorated());
        let mut table = BTreeMap::new();
        let mut i = 0usize;
        for d in 1..=3u64 {
            for g in ctx.instance.generators_of_degree(d) {
                table.insert(g, values[i % values.len()].clone());
                i += 1;
            }
        }
        let phi = HopfMap::character(ctx.clone(), "phi", table).unwrap();
        let inv = hopfren::convolution::conv_inverse(&phi).unwrap();
        let via_s = compose_antipode(&phi);
        prop_assert!(maps_agree(&inv, &via_s, 3).unwrap());
        let e = conv_unit(ctx.clone());
        prop_assert!(maps_agree(&convolve(&phi, &inv).unwrap(), &e, 3).unwrap());
    }
}
