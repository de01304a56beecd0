//! The convolution algebra of series-valued maps: the unit, products,
//! inverses, exponential/logarithm, valuations, structural predicates,
//! and character definition files.

use hopfren::arith::Integers;
use hopfren::convolution::{
    conv_bracket, conv_exp, conv_inverse, conv_log, conv_unit, convolve, distance,
    first_disagreement, is_character_on, is_cocycle_on, is_infinitesimal_on, maps_agree, map_sub,
    parse_character_file, valuation, HopfMap, MapKind,
};
use hopfren::laurent::{parse_series, LaurentSeries, Precision};
use hopfren::rational::{rat, ratio};
use hopfren::trees::{parse_forest, Forest, PlanarTrees, RootedTrees};
use hopfren::{Context, Ctx, Element, Error, HopfInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn forest(text: &str) -> Forest {
    parse_forest(text).unwrap()
}

fn trees_ctx() -> Ctx<RootedTrees> {
    Context::with_default_precision(RootedTrees::undecorated())
}

fn series(text: &str) -> LaurentSeries {
    parse_series(text).unwrap()
}

/// An exact series with a few small terms, possibly with a pole.
fn random_series(rng: &mut ChaCha8Rng) -> LaurentSeries {
    let mut terms = Vec::new();
    for exp in -2..=2 {
        if rng.gen_bool(0.5) {
            let num = rng.gen_range(-4..=4i64);
            let den = rng.gen_range(1..=3i64);
            if num != 0 {
                terms.push((exp, ratio(num, den)));
            }
        }
    }
    LaurentSeries::from_terms(terms, Precision::Exact)
}

/// A character on undecorated trees with random exact generator values on
/// every single tree up to the given degree.
fn random_character(
    ctx: &Ctx<RootedTrees>,
    rng: &mut ChaCha8Rng,
    name: &str,
    max_degree: u64,
) -> HopfMap<RootedTrees> {
    let mut table = BTreeMap::new();
    for d in 1..=max_degree {
        for g in ctx.instance.generators_of_degree(d) {
            table.insert(g, random_series(rng));
        }
    }
    HopfMap::character(ctx.clone(), name, table).unwrap()
}

fn random_infinitesimal(
    ctx: &Ctx<RootedTrees>,
    rng: &mut ChaCha8Rng,
    name: &str,
    max_degree: u64,
) -> HopfMap<RootedTrees> {
    let mut table = BTreeMap::new();
    for d in 1..=max_degree {
        for g in ctx.instance.generators_of_degree(d) {
            table.insert(g, random_series(rng));
        }
    }
    HopfMap::infinitesimal(ctx.clone(), name, table).unwrap()
}

// ---------------------------------------------------------------------------
// The unit and the product
// ---------------------------------------------------------------------------

#[test]
fn convolution_unit_is_counit_valued() {
    let ctx = trees_ctx();
    let e = conv_unit(ctx.clone());
    assert_eq!(e.apply(&Forest::empty()).unwrap(), LaurentSeries::one());
    assert!(e.apply(&forest("[0]")).unwrap().is_exactly_zero());
    assert!(e.apply(&forest("[0 [0]] [0]")).unwrap().is_exactly_zero());
    assert_eq!(e.kind(), MapKind::Character);
    assert!(is_character_on(&e, 4).unwrap());
}

#[test]
fn convolution_unit_is_neutral() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let phi = random_character(&ctx, &mut rng, "phi", 4);
    let e = conv_unit(ctx.clone());
    let left = convolve(&e, &phi).unwrap();
    let right = convolve(&phi, &e).unwrap();
    assert!(maps_agree(&left, &phi, 4).unwrap());
    assert!(maps_agree(&right, &phi, 4).unwrap());
}

#[test]
fn characters_are_closed_under_convolution() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let phi = random_character(&ctx, &mut rng, "phi", 3);
    let psi = random_character(&ctx, &mut rng, "psi", 3);
    let prod = convolve(&phi, &psi).unwrap();
    assert_eq!(prod.kind(), MapKind::Character);
    assert!(is_character_on(&prod, 3).unwrap());
}

#[test]
fn convolution_is_pointwise_addition_on_primitives() {
    // on a primitive element the coproduct has only the two trivial terms
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let phi = random_character(&ctx, &mut rng, "phi", 2);
    let psi = random_character(&ctx, &mut rng, "psi", 2);
    let prod = convolve(&phi, &psi).unwrap();
    let dot = forest("[0]");
    let expected = phi.apply(&dot).unwrap().add(&psi.apply(&dot).unwrap());
    assert!(prod.apply(&dot).unwrap().agrees_with(&expected));
}

#[test]
fn convolution_on_the_two_ladder_has_the_cross_term() {
    let ctx = trees_ctx();
    let table_a = BTreeMap::from([
        (forest("[0]"), series("1*z^-1")),
        (forest("[0 [0]]"), series("1*z^-2")),
    ]);
    let table_b = BTreeMap::from([
        (forest("[0]"), series("2")),
        (forest("[0 [0]]"), series("3")),
    ]);
    let a = HopfMap::character(ctx.clone(), "a", table_a).unwrap();
    let b = HopfMap::character(ctx.clone(), "b", table_b).unwrap();
    let prod = convolve(&a, &b).unwrap();
    // a(l2) + a(dot)b(dot) + b(l2) = z^-2 + 2 z^-1 + 3
    assert_eq!(prod.apply(&forest("[0 [0]]")).unwrap(), series("1*z^-2 + 2*z^-1 + 3"));
}

#[test]
fn convolution_is_associative_on_sampled_characters() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let a = random_character(&ctx, &mut rng, "a", 4);
    let b = random_character(&ctx, &mut rng, "b", 4);
    let c = random_character(&ctx, &mut rng, "c", 4);
    let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
    let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
    assert!(maps_agree(&left, &right, 4).unwrap());
}

#[test]
fn convolving_maps_from_different_contexts_is_rejected() {
    let ctx1 = Context::new(RootedTrees::undecorated(), 8);
    let ctx2 = Context::new(RootedTrees::undecorated(), 8);
    let e1 = conv_unit(ctx1);
    let e2 = conv_unit(ctx2);
    match convolve(&e1, &e2) {
        Err(Error::ContextMismatch(_)) => {}
        other => panic!("expected a context mismatch, got {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Inverses
// ---------------------------------------------------------------------------

#[test]
fn inverse_of_the_unit_is_the_unit() {
    let ctx = trees_ctx();
    let e = conv_unit(ctx.clone());
    let inv = conv_inverse(&e).unwrap();
    assert!(maps_agree(&inv, &e, 4).unwrap());
}

#[test]
fn inverse_negates_on_primitives() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let phi = random_character(&ctx, &mut rng, "phi", 2);
    let inv = conv_inverse(&phi).unwrap();
    let dot = forest("[0]");
    assert!(inv.apply(&dot).unwrap().agrees_with(&phi.apply(&dot).unwrap().neg()));
}

#[test]
fn inverse_matches_the_triangular_recursion() {
    // independent oracle: psi(1) = 1 and, for |x| > 0,
    // psi(x) = -phi(x) - sum over the reduced coproduct of psi(x') phi(x'')
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let phi = random_character(&ctx, &mut rng, "phi", 4);
    let inv = conv_inverse(&phi).unwrap();
    let mut oracle: BTreeMap<Forest, LaurentSeries> = BTreeMap::new();
    for b in ctx.basis_up_to(4) {
        let value = if ctx.instance.degree(&b) == 0 {
            LaurentSeries::one()
        } else {
            let mut acc = phi.apply(&b).unwrap().neg();
            for ((l, r), c) in ctx.reduced_coproduct_basis(&b).terms() {
                let cross = oracle[l].mul(&phi.apply(r).unwrap()).scale(c);
                acc = acc.sub(&cross);
            }
            acc
        };
        oracle.insert(b.clone(), value.clone());
        assert!(
            inv.apply(&b).unwrap().agrees_with(&value),
            "inverse disagrees with the recursion on {b}"
        );
    }
}

#[test]
fn inverse_of_a_character_is_antipode_composition() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let phi = random_character(&ctx, &mut rng, "phi", 4);
    let inv = conv_inverse(&phi).unwrap();
    let via_antipode = hopfren::convolution::compose_antipode(&phi);
    assert!(maps_agree(&inv, &via_antipode, 4).unwrap());
}

#[test]
fn inverse_is_a_two_sided_convolution_inverse() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let phi = random_character(&ctx, &mut rng, "phi", 4);
    let inv = conv_inverse(&phi).unwrap();
    let e = conv_unit(ctx.clone());
    assert!(maps_agree(&convolve(&phi, &inv).unwrap(), &e, 4).unwrap());
    assert!(maps_agree(&convolve(&inv, &phi).unwrap(), &e, 4).unwrap());
}

#[test]
fn inverse_requires_unit_normalization() {
    let ctx = trees_ctx();
    let zero = HopfMap::linear_table(ctx.clone(), "zero", BTreeMap::new());
    assert!(conv_inverse(&zero).is_err());
}

#[test]
fn truncation_kills_high_defect_powers() {
    // (e - phi)^{*k} vanishes on x whenever k exceeds the degree of x
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let phi = random_character(&ctx, &mut rng, "phi", 3);
    let defect = map_sub(&conv_unit(ctx.clone()), &phi).unwrap();
    let mut power = conv_unit(ctx.clone());
    for _ in 0..4 {
        power = convolve(&power, &defect).unwrap(); // now (e-phi)^{*4}
    }
    for b in ctx.basis_up_to(3) {
        assert!(
            power.apply(&b).unwrap().is_zero_within_window(),
            "fourth defect power should vanish on {b}"
        );
    }
}

// ---------------------------------------------------------------------------
// Exponential and logarithm
// ---------------------------------------------------------------------------

#[test]
fn exponential_of_zero_is_the_unit() {
    let ctx = trees_ctx();
    let zero = HopfMap::infinitesimal(ctx.clone(), "zero", BTreeMap::new()).unwrap();
    let exp = conv_exp(&zero).unwrap();
    assert!(maps_agree(&exp, &conv_unit(ctx.clone()), 4).unwrap());
}

#[test]
fn exponential_agrees_on_primitives_and_adds_the_square_term() {
    let ctx = trees_ctx();
    let table = BTreeMap::from([
        (forest("[0]"), series("3")),
        (forest("[0 [0]]"), series("1*z")),
    ]);
    let alpha = HopfMap::infinitesimal(ctx.clone(), "alpha", table).unwrap();
    let chi = conv_exp(&alpha).unwrap();
    assert_eq!(chi.apply(&forest("[0]")).unwrap(), series("3"));
    // exp(alpha)(l2) = alpha(l2) + alpha(dot)^2 / 2 = z + 9/2
    assert_eq!(chi.apply(&forest("[0 [0]]")).unwrap(), series("9/2 + 1*z"));
}

#[test]
fn exponential_of_an_infinitesimal_character_is_a_character() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let alpha = random_infinitesimal(&ctx, &mut rng, "alpha", 3);
    let chi = conv_exp(&alpha).unwrap();
    assert_eq!(chi.kind(), MapKind::Character);
    assert!(is_character_on(&chi, 3).unwrap());
}

#[test]
fn logarithm_of_a_character_is_an_infinitesimal_character() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let phi = random_character(&ctx, &mut rng, "phi", 3);
    let alpha = conv_log(&phi).unwrap();
    assert_eq!(alpha.kind(), MapKind::InfinitesimalCharacter);
    assert!(is_infinitesimal_on(&alpha, 3).unwrap());
}

#[test]
fn exponential_and_logarithm_are_inverse_bijections() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let phi = random_character(&ctx, &mut rng, "phi", 5);
    let back = conv_exp(&conv_log(&phi).unwrap()).unwrap();
    assert!(maps_agree(&back, &phi, 5).unwrap());

    let alpha = random_infinitesimal(&ctx, &mut rng, "alpha", 5);
    let there = conv_log(&conv_exp(&alpha).unwrap()).unwrap();
    assert!(maps_agree(&there, &alpha, 5).unwrap());
}

#[test]
fn exponential_requires_vanishing_on_the_unit() {
    let ctx = trees_ctx();
    let e = conv_unit(ctx.clone());
    assert!(conv_exp(&e).is_err());
    assert!(conv_log(&HopfMap::linear_table(ctx.clone(), "zero", BTreeMap::new())).is_err());
}

// ---------------------------------------------------------------------------
// Valuation and distance
// ---------------------------------------------------------------------------

#[test]
fn valuation_reads_the_first_nonvanishing_degree() {
    let ctx = trees_ctx();
    let zero = HopfMap::linear_table(ctx.clone(), "zero", BTreeMap::new());
    assert_eq!(valuation(&zero, 4).unwrap(), 5);

    let e = conv_unit(ctx.clone());
    assert_eq!(valuation(&e, 4).unwrap(), 0);

    // supported only on the degree-2 ladder
    let table = BTreeMap::from([(forest("[0 [0]]"), series("1"))]);
    let alpha = HopfMap::infinitesimal(ctx.clone(), "alpha", table).unwrap();
    assert_eq!(valuation(&alpha, 4).unwrap(), 2);
}

#[test]
fn valuations_add_under_convolution() {
    // maps vanishing below degrees i and j convolve to one vanishing
    // below i + j
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let mut ta = BTreeMap::new();
        let mut tb = BTreeMap::new();
        for g in ctx.instance.generators_of_degree(1) {
            ta.insert(g, random_series(&mut rng));
        }
        for g in ctx.instance.generators_of_degree(2) {
            tb.insert(g, random_series(&mut rng));
        }
        let a = HopfMap::infinitesimal(ctx.clone(), "a", ta).unwrap();
        let b = HopfMap::infinitesimal(ctx.clone(), "b", tb).unwrap();
        let va = valuation(&a, 5).unwrap();
        let vb = valuation(&b, 5).unwrap();
        let vab = valuation(&convolve(&a, &b).unwrap(), 5).unwrap();
        assert!(vab >= (va + vb).min(6), "val {vab} < {va} + {vb}");
    }
}

#[test]
fn distance_is_the_dyadic_valuation_weight() {
    let ctx = trees_ctx();
    let e = conv_unit(ctx.clone());
    // identical maps: defect valuation bottoms out at probe + 1
    assert_eq!(distance(&e, &e, 3).unwrap(), ratio(1, 16));
    // differ already on the degree-1 generator
    let table = BTreeMap::from([(forest("[0]"), series("1"))]);
    let alpha = HopfMap::infinitesimal(ctx.clone(), "alpha", table).unwrap();
    let shifted = hopfren::convolution::map_add(&e, &alpha).unwrap();
    assert_eq!(distance(&e, &shifted, 3).unwrap(), ratio(1, 2));
    assert_eq!(first_disagreement(&e, &shifted, 3).unwrap(), Some(forest("[0]")));
}

// ---------------------------------------------------------------------------
// Bracket and structural predicates
// ---------------------------------------------------------------------------

#[test]
fn bracket_of_infinitesimals_is_infinitesimal_and_antisymmetric() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let a = random_infinitesimal(&ctx, &mut rng, "a", 3);
    let b = random_infinitesimal(&ctx, &mut rng, "b", 3);
    let ab = conv_bracket(&a, &b).unwrap();
    assert_eq!(ab.kind(), MapKind::InfinitesimalCharacter);
    assert!(is_infinitesimal_on(&ab, 3).unwrap());
    let ba = conv_bracket(&b, &a).unwrap();
    let neg = hopfren::convolution::map_neg(&ba);
    assert!(maps_agree(&ab, &neg, 3).unwrap());
}

#[test]
fn bracket_vanishes_on_cocommutative_coproducts() {
    // the number semigroup algebra is cocommutative, so phi * psi = psi * phi
    let ctx = Context::with_default_precision(Integers::new(16));
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut ta = BTreeMap::new();
    let mut tb = BTreeMap::new();
    for d in 1..=3 {
        for g in ctx.instance.generators_of_degree(d) {
            ta.insert(g.clone(), random_series(&mut rng));
            tb.insert(g, random_series(&mut rng));
        }
    }
    let a = HopfMap::infinitesimal(ctx.clone(), "a", ta).unwrap();
    let b = HopfMap::infinitesimal(ctx.clone(), "b", tb).unwrap();
    let ab = conv_bracket(&a, &b).unwrap();
    assert_eq!(valuation(&ab, 3).unwrap(), 4);
}

#[test]
fn symmetry_predicate_sees_the_planar_order() {
    // characters factor through products, so they cannot see planarity...
    let pctx = Context::with_default_precision(PlanarTrees::undecorated());
    let mut table = BTreeMap::new();
    for d in 1..=3 {
        for (i, g) in pctx.instance.generators_of_degree(d).into_iter().enumerate() {
            table.insert(g, LaurentSeries::monomial(-1, ratio(i as i64 + 1, d as i64)));
        }
    }
    let chi = HopfMap::character(pctx.clone(), "chi", table).unwrap();
    let dot = Element::basis(forest("[0]"));
    let l2 = Element::basis(forest("[0 [0]]"));
    let pairs = vec![(dot.clone(), l2.clone())];
    assert!(is_cocycle_on(&chi, &pairs).unwrap());

    // ...but a general linear map distinguishing the two orders can
    let ordered = BTreeMap::from([(forest("[0] [0 [0]]"), series("1"))]);
    let asym = HopfMap::linear_table(pctx.clone(), "asym", ordered);
    assert!(!is_cocycle_on(&asym, &pairs).unwrap());
}

#[test]
fn cocycles_are_closed_under_convolution_and_inverse() {
    // unit-normalized maps whose values depend only on the unordered
    // content of each planar forest: symmetric but not multiplicative
    let ctx = Context::with_default_precision(PlanarTrees::undecorated());
    let table_a = BTreeMap::from([
        (Forest::empty(), series("1")),
        (forest("[0]"), series("1*z^-1")),
        (forest("[0 [0]]"), series("2")),
        (forest("[0] [0]"), series("5*z^-1")),
        (forest("[0] [0 [0]]"), series("3")),
        (forest("[0 [0]] [0]"), series("3")),
    ]);
    let table_b = BTreeMap::from([
        (Forest::empty(), series("1")),
        (forest("[0]"), series("1*z")),
        (forest("[0 [0]]"), series("1*z^-2")),
        (forest("[0] [0]"), series("7")),
        (forest("[0] [0 [0]]"), series("1*z^-1")),
        (forest("[0 [0]] [0]"), series("1*z^-1")),
    ]);
    let a = HopfMap::linear_table(ctx.clone(), "a", table_a);
    let b = HopfMap::linear_table(ctx.clone(), "b", table_b);
    let mut pairs = Vec::new();
    for x in ctx.basis_up_to(2) {
        for y in ctx.basis_up_to(2) {
            pairs.push((Element::basis(x.clone()), Element::basis(y)));
        }
    }
    assert!(is_cocycle_on(&a, &pairs).unwrap());
    assert!(is_cocycle_on(&b, &pairs).unwrap());
    assert!(!is_character_on(&a, 2).unwrap());
    let prod = convolve(&a, &b).unwrap();
    assert!(is_cocycle_on(&prod, &pairs).unwrap());
    let inv = conv_inverse(&a).unwrap();
    assert!(is_cocycle_on(&inv, &pairs).unwrap());
}

// ---------------------------------------------------------------------------
// Character definition files
// ---------------------------------------------------------------------------

#[test]
fn character_files_parse_kind_and_generator_lines() {
    let ctx = trees_ctx();
    let text = "# a two-generator table\nkind: character\ngen [0] = 1*z^-1\ngen [0 [0]] = 1*z^-2 - 1/2*z^-1\n";
    let phi = parse_character_file(text, ctx.clone(), "phi", |s| parse_forest(s)).unwrap();
    assert_eq!(phi.kind(), MapKind::Character);
    assert_eq!(phi.apply(&forest("[0]")).unwrap(), series("1*z^-1"));
    assert_eq!(phi.apply(&forest("[0 [0]]")).unwrap(), series("1*z^-2 - 1/2*z^-1"));
    // products come from multiplicativity, not the table
    assert_eq!(phi.apply(&forest("[0] [0]")).unwrap(), series("1*z^-2"));
}

#[test]
fn infinitesimal_files_default_missing_generators_to_zero() {
    let ctx = trees_ctx();
    let text = "kind: infinitesimal\ngen [0] = 1\n";
    let alpha = parse_character_file(text, ctx.clone(), "alpha", |s| parse_forest(s)).unwrap();
    assert_eq!(alpha.kind(), MapKind::InfinitesimalCharacter);
    assert!(alpha.apply(&forest("[0 [0]]")).unwrap().is_exactly_zero());
    assert!(alpha.apply(&forest("[0] [0]")).unwrap().is_exactly_zero());
}

#[test]
fn character_files_reject_malformed_input() {
    let ctx = trees_ctx();
    let cases = [
        "gen [0] = 1\n",                          // gen before kind
        "kind: character\nkind: character\n",     // duplicate kind
        "kind: wild\n",                           // unknown kind
        "kind: character\ngen [0] 1\n",           // missing equals
        "kind: character\ngen [0] = 1\ngen [0] = 2\n", // duplicate generator
        "kind: character\ngen [0] [0] = 1\n",     // table key is not a generator
        "frobnicate\n",                           // unknown directive
        "",                                       // missing kind line
    ];
    for text in cases {
        match parse_character_file(text, ctx.clone(), "bad", |s| parse_forest(s)) {
            Err(Error::Parse(_)) => {}
            other => panic!("{text:?} should fail to parse, got {other:?}"),
        }
    }
}

#[test]
fn characters_report_generators_missing_from_their_table() {
    let ctx = trees_ctx();
    let table = BTreeMap::from([(forest("[0]"), series("1*z^-1"))]);
    let phi = HopfMap::character(ctx.clone(), "tiny", table).unwrap();
    match phi.apply(&forest("[0 [0]]")) {
        Err(Error::MissingGenerator(msg)) => {
            assert!(msg.contains("tiny"), "message should name the character: {msg}")
        }
        other => panic!("expected a missing-generator error, got {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Element evaluation
// ---------------------------------------------------------------------------

#[test]
fn maps_evaluate_linearly_on_elements() {
    let ctx = trees_ctx();
    let table = BTreeMap::from([(forest("[0]"), series("1*z^-1"))]);
    let phi = HopfMap::character(ctx.clone(), "phi", table).unwrap();
    let x = Element::basis(forest("[0]")).scale(&rat(3)).add(&ctx.unit_element());
    // 3 z^-1 + 1
    assert_eq!(phi.apply_element(&x).unwrap(), series("1*z^-1").scale(&rat(3)).add(&LaurentSeries::one()));
    let dot2 = Element::basis(forest("[0] [0]"));
    let y = dot2.scale(&ratio(1, 2));
    assert_eq!(phi.apply_element(&y).unwrap(), series("1/2*z^-2"));
}

#[test]
fn infinitesimal_characters_vanish_on_products_by_construction() {
    let ctx = trees_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let alpha = random_infinitesimal(&ctx, &mut rng, "alpha", 4);
    for b in ctx.basis_up_to(4) {
        if ctx.instance.generator_factors(&b).len() >= 2 {
            assert!(
                alpha.apply(&b).unwrap().is_exactly_zero(),
                "infinitesimal character must vanish on the product {b}"
            );
        }
    }
    assert!(is_infinitesimal_on(&alpha, 4).unwrap());
    assert_eq!(alpha.apply(&Forest::empty()).unwrap(), LaurentSeries::zero());
}
