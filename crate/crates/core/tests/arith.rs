//! The multiplicative-integers Hopf algebra and the symmetric algebra on
//! graded primitive generators.

use hopfren::arith::{parse_int_basis, parse_monomial, IntBasis, Integers, Monomial, SymmetricAlgebra};
use hopfren::linear::TensorElement;
use hopfren::rational::rat;
use hopfren::{Context, Element, HopfInstance};
use std::collections::BTreeMap;

fn e(n: u64) -> IntBasis {
    IntBasis(n)
}

fn mono(text: &str) -> Monomial {
    parse_monomial(text).unwrap()
}

// ---------------------------------------------------------------------------
// Integers
// ---------------------------------------------------------------------------

#[test]
fn integer_grading_counts_prime_factors() {
    let inst = Integers::new(64);
    assert_eq!(inst.degree(&e(1)), 0);
    assert_eq!(inst.degree(&e(2)), 1);
    assert_eq!(inst.degree(&e(6)), 2);
    assert_eq!(inst.degree(&e(12)), 3);
    assert_eq!(inst.degree(&e(64)), 6);
}

#[test]
fn integer_product_multiplies_indices() {
    let inst = Integers::new(64);
    assert_eq!(inst.product(&e(2), &e(3)), Element::basis(e(6)));
    assert_eq!(inst.product(&e(1), &e(7)), Element::basis(e(7)));
    assert_eq!(inst.product(&e(2), &e(2)), Element::basis(e(4)));
}

#[test]
fn integer_reduced_coproduct_examples() {
    let ctx = Context::with_default_precision(Integers::new(64));
    // e6: the two ordered bipartitions of {2, 3}
    let mut expected = TensorElement::single(e(2), e(3), rat(1));
    expected.add_term(e(3), e(2), rat(1));
    assert_eq!(ctx.reduced_coproduct_basis(&e(6)), expected);
    // e4: {2, 2} splits two ways into ordered nonempty halves
    assert_eq!(
        ctx.reduced_coproduct_basis(&e(4)),
        TensorElement::single(e(2), e(2), rat(2))
    );
    // primes are primitive
    assert!(ctx.reduced_coproduct_basis(&e(5)).is_zero());
    // e12 = 2^2 * 3: check the full multinomial expansion
    let mut e12 = TensorElement::single(e(2), e(6), rat(2));
    e12.add_term(e(6), e(2), rat(2));
    e12.add_term(e(3), e(4), rat(1));
    e12.add_term(e(4), e(3), rat(1));
    e12.add_term(e(2), e(2), rat(0)); // no-op: keep the builder honest
    assert_eq!(ctx.reduced_coproduct_basis(&e(12)), e12);
}

#[test]
fn integer_coproduct_is_cocommutative() {
    let ctx = Context::with_default_precision(Integers::new(64));
    for n in 2..=64u64 {
        let t = ctx.reduced_coproduct_basis(&e(n));
        assert_eq!(t, t.flip(), "e{n}");
    }
}

#[test]
fn integer_antipode_closed_form_matches_recursion() {
    let ctx = Context::with_default_precision(Integers::new(64));
    for n in 1..=64u64 {
        let omega = ctx.instance.degree(&e(n));
        let sign = if omega % 2 == 0 { rat(1) } else { rat(-1) };
        assert_eq!(
            ctx.antipode_basis(&e(n)),
            Element::single(e(n), sign),
            "closed form at e{n}"
        );
        assert_eq!(ctx.antipode_basis(&e(n)), ctx.antipode_basis_right(&e(n)), "right recursion");
    }
}

#[test]
fn integer_coproduct_is_factorization_independent() {
    // identical output arriving at e36 as 6*6 or 4*9
    let ctx = Context::with_default_precision(Integers::new(64));
    let via_sixes = ctx.mul_tensors(&ctx.coproduct_basis(&e(6)), &ctx.coproduct_basis(&e(6)));
    let via_squares = ctx.mul_tensors(&ctx.coproduct_basis(&e(4)), &ctx.coproduct_basis(&e(9)));
    assert_eq!(via_sixes, via_squares);
    assert_eq!(via_sixes, ctx.coproduct_basis(&e(36)));
}

#[test]
fn integer_generators_are_primes() {
    let inst = Integers::new(20);
    let gens = inst.generators_of_degree(1);
    assert_eq!(gens, vec![e(2), e(3), e(5), e(7), e(11), e(13), e(17), e(19)]);
    assert!(inst.generators_of_degree(2).is_empty());
}

#[test]
fn integer_literals() {
    assert_eq!(parse_int_basis("e12").unwrap(), e(12));
    assert_eq!(parse_int_basis(" e1 ").unwrap(), e(1));
    assert!(parse_int_basis("12").is_err());
    assert!(parse_int_basis("e0").is_err());
    assert!(parse_int_basis("ex").is_err());
    assert_eq!(e(12).to_string(), "e12");
}

// ---------------------------------------------------------------------------
// Symmetric algebra
// ---------------------------------------------------------------------------

#[test]
fn symmetric_generators_are_primitive() {
    let ctx = Context::with_default_precision(SymmetricAlgebra::standard(2));
    assert!(ctx.reduced_coproduct_basis(&mono("x1")).is_zero());
}

#[test]
fn symmetric_square_expands_binomially() {
    let ctx = Context::with_default_precision(SymmetricAlgebra::standard(2));
    assert_eq!(
        ctx.reduced_coproduct_basis(&mono("x1^2")),
        TensorElement::single(mono("x1"), mono("x1"), rat(2))
    );
    // distinct generators split both ways
    let mut expected = TensorElement::single(mono("x1"), mono("x2"), rat(1));
    expected.add_term(mono("x2"), mono("x1"), rat(1));
    assert_eq!(ctx.reduced_coproduct_basis(&mono("x1 x2")), expected);
}

#[test]
fn symmetric_is_commutative_and_cocommutative() {
    let ctx = Context::with_default_precision(SymmetricAlgebra::standard(3));
    let inst = &ctx.instance;
    assert_eq!(inst.product(&mono("x1"), &mono("x2 x3")), inst.product(&mono("x2 x3"), &mono("x1")));
    for b in ctx.basis_up_to(4) {
        let t = ctx.reduced_coproduct_basis(&b);
        assert_eq!(t, t.flip(), "at {b}");
    }
}

#[test]
fn symmetric_antipode_is_parity_of_length() {
    // all generators primitive: S(m) = (-1)^(number of letters) m
    let ctx = Context::with_default_precision(SymmetricAlgebra::standard(2));
    let m = mono("x1^2 x2");
    assert_eq!(ctx.antipode_basis(&m), Element::single(m.clone(), rat(-1)));
    let sq = mono("x1^2");
    assert_eq!(ctx.antipode_basis(&sq), Element::single(sq.clone(), rat(1)));
}

#[test]
fn weighted_generators_change_the_grading() {
    let mut degrees = BTreeMap::new();
    degrees.insert(1u32, 1u64);
    degrees.insert(2u32, 3u64);
    let inst = SymmetricAlgebra::new(degrees);
    assert_eq!(inst.degree(&mono("x1^2 x2")), 5);
    // basis of weighted degree 3: x1^3 and x2
    let ctx = Context::with_default_precision(inst);
    let basis = ctx.instance.basis_of_degree(3);
    assert_eq!(basis.len(), 2);
}

#[test]
fn monomial_literals() {
    assert_eq!(mono("x1^2 x2").to_string(), "x1^2 x2");
    assert_eq!(mono("x2 x1"), mono("x1 x2"));
    assert_eq!(mono("1"), Monomial::default());
    assert!(parse_monomial("y1").is_err());
    assert!(parse_monomial("x1^0").is_err());
    let inst = SymmetricAlgebra::standard(2);
    assert!(inst.check_monomial(&mono("x1 x2")).is_ok());
    assert!(inst.check_monomial(&mono("x3")).is_err());
}

#[test]
fn axiom_suites_pass_on_both_instances() {
    let ints = Context::with_default_precision(Integers::new(64));
    let report = ints.check_hopf_axioms(4);
    assert!(report.passed(), "{:?}", report.first_failure());
    let sym = Context::with_default_precision(SymmetricAlgebra::standard(3));
    let report = sym.check_hopf_axioms(4);
    assert!(report.passed(), "{:?}", report.first_failure());
}
