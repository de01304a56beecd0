//! Factorization of a unit-normalized series-valued map into a polar
//! counterterm part and a holomorphic finite part, under the minimal
//! subtraction splitting of the scalars.
//!
//! Two routes are implemented and cross-validated: the degree recursion
//! through the preparation map, and a group-logarithm route that solves a
//! fixed-point equation for a twisted logarithm and exponentiates its polar
//! and holomorphic projections.  Uniqueness of the factorization forces the
//! two to agree.

use crate::convolution::{
    conv_exp, conv_log, map_neg, map_sub, valuation, HopfMap, MapKind,
};
use crate::error::{Error, Result};
use crate::hopf::HopfInstance;
use crate::laurent::{scheme, LaurentSeries};
use crate::linear::Element;
use crate::rational::Rational;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BirkhoffMethod {
    Recursive,
    Bch,
}

/// The two factors: `phi_minus` is 1 on the unit and purely polar on the
/// augmentation ideal; `phi_plus` is holomorphic everywhere; and
/// `phi_minus * phi = phi_plus` up to any probe degree.
pub struct BirkhoffResult<I: HopfInstance> {
    pub phi_minus: HopfMap<I>,
    pub phi_plus: HopfMap<I>,
    pub method: BirkhoffMethod,
}

/// Preparation map: `b(phi)(x) = phi(x) + sum phi_minus(x') phi(x'')` over
/// the reduced coproduct, with value 1 on the unit.  The counterterm inside
/// the sum is produced by the same recursion through the polar projection,
/// so each value is computed once.
pub fn bogoliubov<I: HopfInstance>(phi: &HopfMap<I>) -> Result<HopfMap<I>> {
    phi.check_unit_normalized()?;
    let f = phi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("bog({})", phi.name());
    Ok(HopfMap::from_closure(ctx, name, MapKind::General, move |me, b| {
        if me.ctx().is_unit(b) {
            return Ok(LaurentSeries::one());
        }
        let mut acc = f.apply(b)?;
        for ((l, r), c) in me.ctx().reduced_coproduct_basis(b).terms() {
            let minus_l = me.apply(l)?.polar_part()?.neg();
            acc = acc.add(&minus_l.mul(&f.apply(r)?).scale(c));
        }
        Ok(acc)
    }))
}

/// Degree-recursive factorization: `phi_minus = -pi o b(phi)` on the
/// augmentation ideal and `phi_plus = (I - pi) o b(phi)`, where `pi` keeps
/// the strictly negative exponents.
pub fn birkhoff_decompose<I: HopfInstance>(phi: &HopfMap<I>) -> Result<BirkhoffResult<I>> {
    let bog = bogoliubov(phi)?;
    let ctx = Arc::clone(phi.ctx());
    let b1 = bog.clone();
    let phi_minus = HopfMap::from_closure(
        Arc::clone(&ctx),
        format!("({})-", phi.name()),
        MapKind::General,
        move |me, b| {
            if me.ctx().is_unit(b) {
                return Ok(LaurentSeries::one());
            }
            Ok(b1.apply(b)?.polar_part()?.neg())
        },
    );
    let b2 = bog;
    let phi_plus = HopfMap::from_closure(
        ctx,
        format!("({})+", phi.name()),
        MapKind::General,
        move |_, b| b2.apply(b)?.holomorphic_part(),
    );
    Ok(BirkhoffResult { phi_minus, phi_plus, method: BirkhoffMethod::Recursive })
}

/// The finite part of the factorization, evaluated at z = 0 on a linear
/// combination.
pub fn renormalized_value<I: HopfInstance>(
    phi: &HopfMap<I>,
    x: &Element<I::Basis>,
) -> Result<Rational> {
    let dec = birkhoff_decompose(phi)?;
    dec.phi_plus.apply_element(x)?.eval_at_zero()
}

/// Valuewise polar projection of a map (the splitting operator applied to
/// every value).  Preserves infinitesimal characters.
pub fn polar_project_map<I: HopfInstance>(phi: &HopfMap<I>) -> HopfMap<I> {
    let kind = if phi.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = phi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("pol({})", phi.name());
    HopfMap::from_closure(ctx, name, kind, move |_, b| f.apply(b)?.polar_part())
}

/// Valuewise holomorphic projection: the complement of
/// [`polar_project_map`].
pub fn holomorphic_project_map<I: HopfInstance>(phi: &HopfMap<I>) -> HopfMap<I> {
    let kind = if phi.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = phi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("hol({})", phi.name());
    HopfMap::from_closure(ctx, name, kind, move |_, b| f.apply(b)?.holomorphic_part())
}

/// Group-law defect `delta(A, B) = log(exp A * exp B) - A - B` of two maps
/// vanishing on the unit.  Zero when the convolution is cocommutative
/// enough for the exponentials to commute.
pub fn bch_delta<I: HopfInstance>(a: &HopfMap<I>, b: &HopfMap<I>) -> Result<HopfMap<I>> {
    let ea = conv_exp(a)?;
    let eb = conv_exp(b)?;
    let prod = crate::convolution::convolve(&ea, &eb)?;
    let log = conv_log(&prod)?;
    map_sub(&map_sub(&log, a)?, b)
}

/// Fixed-point state for the group-logarithm route.
pub struct BchState<I: HopfInstance> {
    pub chi: HopfMap<I>,
    /// Valuation of each iteration's update, in order; the last entry
    /// exceeds the probe degree.
    pub trace: Vec<u64>,
}

/// Solve `Y = X - delta(pol(Y), hol(Y))` by iteration from `Y = X`.  The
/// update's valuation at least doubles each round, so the iteration stops
/// once the update vanishes up to the probe degree, with a hard cap of
/// probe_degree + 2 rounds.
pub fn bch_chi<I: HopfInstance>(x: &HopfMap<I>, probe_degree: u64) -> Result<BchState<I>> {
    x.check_vanishes_on_unit()?;
    let mut y = x.clone();
    let mut trace = Vec::new();
    for _ in 0..=(probe_degree + 1) {
        let defect = bch_delta(&polar_project_map(&y), &holomorphic_project_map(&y))?;
        let next = map_sub(x, &defect)?;
        let v = valuation(&map_sub(&next, &y)?, probe_degree)?;
        trace.push(v);
        y = next;
        if v > probe_degree {
            break;
        }
    }
    if trace.last().copied().unwrap_or(0) <= probe_degree {
        return Err(Error::Precision(format!(
            "fixed-point iteration did not settle within {} rounds (trace {:?})",
            probe_degree + 2,
            trace
        )));
    }
    Ok(BchState { chi: y, trace })
}

/// Factorization through the group logarithm: with `X = log(phi)` and `chi`
/// the fixed point, `phi_minus = exp(-pol(chi))` and
/// `phi_plus = exp(hol(chi))`.
pub fn birkhoff_via_bch<I: HopfInstance>(
    phi: &HopfMap<I>,
    probe_degree: u64,
) -> Result<BirkhoffResult<I>> {
    phi.check_unit_normalized()?;
    let x = conv_log(phi)?;
    let state = bch_chi(&x, probe_degree)?;
    let phi_minus = conv_exp(&map_neg(&polar_project_map(&state.chi)))?;
    let phi_plus = conv_exp(&holomorphic_project_map(&state.chi))?;
    Ok(BirkhoffResult { phi_minus, phi_plus, method: BirkhoffMethod::Bch })
}

/// Valuewise operator form of the splitting identity: for every basis
/// element up to the degree bound, the polar projections of the two maps'
/// values satisfy the multiplicative splitting law of the scalars.
pub fn polar_splitting_law_on<I: HopfInstance>(
    a: &HopfMap<I>,
    b: &HopfMap<I>,
    max_degree: u64,
) -> Result<bool> {
    for x in a.ctx().basis_up_to(max_degree) {
        if !scheme::rota_baxter_check(&a.apply(&x)?, &b.apply(&x)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
