//! Dynamics of the grading: the degree-scaling flow on maps, the flow map
//! carrying a unit-normalized map to its logarithmic derivative along the
//! grading, its inverse as a scattering-type series, residues, scale twists,
//! the polar-part-rigidity property, and the constant-valued flow strength
//! extracted from maps with rigid polar part.

use crate::convolution::{
    conv_unit, convolve, map_add, map_scale_series, maps_agree, HopfMap, MapKind,
};
use crate::error::{Error, Result};
use crate::hopf::HopfInstance;
use crate::laurent::{render_series, LaurentSeries, Precision};
use crate::linear::Element;
use crate::rational::{rat, ratio, Rational};
use num_traits::{One, Zero};
use std::sync::{Arc, RwLock};

/// Postcompose with the grading flow: `(phi o Y)(b) = |b| phi(b)`.
/// Preserves infinitesimal characters.
pub fn compose_y<I: HopfInstance>(phi: &HopfMap<I>) -> HopfMap<I> {
    let kind = if phi.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = phi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("({} o Y)", phi.name());
    HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let n = me.ctx().instance.degree(b);
        Ok(f.apply(b)?.scale(&rat(n as i64)))
    })
}

/// Postcompose with the inverse grading flow: `(phi o Yinv)(b) = phi(b)/|b|`
/// on positive degree; the unit is sent to zero.
pub fn compose_yinv<I: HopfInstance>(phi: &HopfMap<I>) -> HopfMap<I> {
    let kind = if phi.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = phi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("({} o Yinv)", phi.name());
    HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let n = me.ctx().instance.degree(b);
        if n == 0 {
            return Ok(LaurentSeries::zero());
        }
        Ok(f.apply(b)?.scale(&ratio(1, n as i64)))
    })
}

/// The flow map: the unique `gamma` with `phi o Y = phi * gamma`, computed
/// degree-recursively from `|b| phi(b) = gamma(b) + sum phi(b') gamma(b'')`.
/// `gamma` vanishes on the unit.
pub fn renorm_map<I: HopfInstance>(phi: &HopfMap<I>) -> Result<HopfMap<I>> {
    phi.check_unit_normalized()?;
    let f = phi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("flow({})", phi.name());
    Ok(HopfMap::from_closure(ctx, name, MapKind::General, move |me, b| {
        let n = me.ctx().instance.degree(b);
        if n == 0 {
            return Ok(LaurentSeries::zero());
        }
        let mut acc = f.apply(b)?.scale(&rat(n as i64));
        for ((l, r), c) in me.ctx().reduced_coproduct_basis(b).terms() {
            acc = acc.sub(&f.apply(l)?.mul(&me.apply(r)?).scale(c));
        }
        Ok(acc)
    }))
}

/// Closed form of the flow map, `phi^{*-1} * (phi o Y)`, for
/// cross-validation against the recursion.
pub fn renorm_map_explicit<I: HopfInstance>(phi: &HopfMap<I>) -> Result<HopfMap<I>> {
    let inv = crate::convolution::conv_inverse(phi)?;
    convolve(&inv, &compose_y(phi))
}

// ---------------------------------------------------------------------------
// Exact polynomials in an integration parameter, with series coefficients.
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct SPoly {
    /// Coefficient of s^k at index k.
    coeffs: Vec<LaurentSeries>,
}

impl SPoly {
    fn constant(v: LaurentSeries) -> SPoly {
        SPoly { coeffs: vec![v] }
    }

    fn zero() -> SPoly {
        SPoly { coeffs: Vec::new() }
    }

    fn add(&self, other: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(LaurentSeries::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(LaurentSeries::zero);
            coeffs.push(a.add(&b));
        }
        SPoly { coeffs }
    }

    fn mul(&self, other: &SPoly) -> SPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return SPoly::zero();
        }
        let mut coeffs =
            vec![LaurentSeries::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        SPoly { coeffs }
    }

    fn scale(&self, c: &Rational) -> SPoly {
        SPoly { coeffs: self.coeffs.iter().map(|v| v.scale(c)).collect() }
    }

    /// Integrate the parameter over [0, 1]: each s^k contributes 1/(k+1).
    fn integrate_unit_interval(&self) -> LaurentSeries {
        let mut acc = LaurentSeries::zero();
        for (k, v) in self.coeffs.iter().enumerate() {
            acc = acc.add(&v.scale(&ratio(1, k as i64 + 1)));
        }
        acc
    }
}

/// The flow of the exponential of `alpha`, by the exact integral formula:
/// per basis element, expand `exp(-s alpha) * (alpha o Y) * exp(s alpha)`
/// as a polynomial in the parameter s with series coefficients (all
/// convolution exponentials truncate by degree) and integrate each monomial
/// exactly.  Must agree with `renorm_map(conv_exp(alpha))`.
pub fn renorm_map_integral<I: HopfInstance>(alpha: &HopfMap<I>) -> Result<HopfMap<I>> {
    alpha.check_vanishes_on_unit()?;
    let ctx = Arc::clone(alpha.ctx());
    let alpha_y = compose_y(alpha);
    let a = alpha.clone();
    // Lazily grown convolution powers of alpha, shared across evaluations.
    let powers: RwLock<Vec<HopfMap<I>>> = RwLock::new(vec![conv_unit(Arc::clone(&ctx))]);
    let name = format!("flowint({})", alpha.name());
    Ok(HopfMap::from_closure(ctx, name, MapKind::General, move |me, b| {
        let power = |k: usize| -> Result<HopfMap<I>> {
            {
                let read = powers.read().unwrap();
                if k < read.len() {
                    return Ok(read[k].clone());
                }
            }
            let mut write = powers.write().unwrap();
            while write.len() <= k {
                let next = convolve(write.last().expect("nonempty"), &a)?;
                write.push(next);
            }
            Ok(write[k].clone())
        };
        // exp(sign * s * alpha)(x) as a polynomial in s.
        let exp_s = |x: &I::Basis, sign: i64| -> Result<SPoly> {
            let n = me.ctx().instance.degree(x);
            let mut coeffs = Vec::with_capacity(n as usize + 1);
            let mut kfact = Rational::one();
            let mut sgn = Rational::one();
            for k in 0..=n {
                if k > 0 {
                    kfact = kfact * rat(k as i64);
                    sgn = sgn * rat(sign);
                }
                let c = sgn.clone() / kfact.clone();
                coeffs.push(power(k as usize)?.apply(x)?.scale(&c));
            }
            Ok(SPoly { coeffs })
        };
        // Two-sided coproduct expansion of b.
        let mut acc = SPoly::zero();
        for ((l, w), c1) in me.ctx().coproduct_basis(b).terms() {
            for ((x, y), c2) in me.ctx().coproduct_basis(l).terms() {
                let mid = alpha_y.apply(y)?;
                if mid.is_zero_within_window() && mid.precision() == Precision::Exact {
                    continue;
                }
                let term = exp_s(x, -1)?
                    .mul(&SPoly::constant(mid))
                    .mul(&exp_s(w, 1)?)
                    .scale(&(c1 * c2));
                acc = acc.add(&term);
            }
        }
        Ok(acc.integrate_unit_interval())
    }))
}

/// Inverse of the flow map as a scattering-type series: `I_0 = e`,
/// `I_k = (I_{k-1} * gamma) o Yinv`, summed up to the degree of each basis
/// element (the k-th term vanishes below degree k).  Satisfies
/// `renorm_map(scattering_inverse(gamma)) = gamma`.
pub fn scattering_inverse<I: HopfInstance>(gamma: &HopfMap<I>) -> Result<HopfMap<I>> {
    gamma.check_vanishes_on_unit()?;
    let ctx = Arc::clone(gamma.ctx());
    let g = gamma.clone();
    let terms: RwLock<Vec<HopfMap<I>>> = RwLock::new(vec![conv_unit(Arc::clone(&ctx))]);
    let name = format!("unflow({})", gamma.name());
    Ok(HopfMap::from_closure(ctx, name, MapKind::General, move |me, b| {
        let term = |k: usize| -> Result<HopfMap<I>> {
            {
                let read = terms.read().unwrap();
                if k < read.len() {
                    return Ok(read[k].clone());
                }
            }
            let mut write = terms.write().unwrap();
            while write.len() <= k {
                let next = compose_yinv(&convolve(write.last().expect("nonempty"), &g)?);
                write.push(next);
            }
            Ok(write[k].clone())
        };
        let n = me.ctx().instance.degree(b);
        let mut acc = LaurentSeries::zero();
        for k in 0..=n {
            acc = acc.add(&term(k as usize)?.apply(b)?);
        }
        Ok(acc)
    }))
}

/// Coefficient of the simple pole of `psi` on a linear combination.
pub fn residue_functional<I: HopfInstance>(
    psi: &HopfMap<I>,
    x: &Element<I::Basis>,
) -> Result<Rational> {
    psi.apply_element(x)?.coeff(-1)
}

/// The residue as a map: `b` goes to the constant series `coeff_{-1}(psi(b))`.
pub fn residue_map<I: HopfInstance>(psi: &HopfMap<I>) -> HopfMap<I> {
    let f = psi.clone();
    let ctx = Arc::clone(psi.ctx());
    let name = format!("res({})", psi.name());
    HopfMap::from_closure(ctx, name, MapKind::General, move |_, b| {
        Ok(LaurentSeries::constant(f.apply(b)?.coeff(-1)?))
    })
}

/// Scale twist: `psi_t(b) = exp(t z |b|) psi(b)`, with the exponential
/// factor truncated at the context precision (degree-0 elements keep an
/// exact factor 1).  Characters and infinitesimal characters stay what they
/// are; twists compose additively in t.
pub fn twist<I: HopfInstance>(psi: &HopfMap<I>, t: &Rational) -> HopfMap<I> {
    let f = psi.clone();
    let tt = t.clone();
    let ctx = Arc::clone(psi.ctx());
    let name = format!("twist({}, {})", psi.name(), crate::rational::render_rational(t));
    HopfMap::from_closure(ctx, name, psi.kind(), move |me, b| {
        let n = me.ctx().instance.degree(b);
        if n == 0 || tt.is_zero() {
            return f.apply(b);
        }
        let bound = me.ctx().precision.max(0);
        let rate = tt.clone() * rat(n as i64);
        let mut coeffs = Vec::new();
        let mut c = Rational::one();
        for j in 0..=bound {
            if j > 0 {
                c = c * rate.clone() / rat(j);
            }
            coeffs.push((j, c.clone()));
        }
        let factor = LaurentSeries::from_terms(coeffs, Precision::UpTo(bound));
        Ok(f.apply(b)?.mul(&factor))
    })
}

/// Largest pole order among the map's values on basis elements of degree 1
/// through probe_degree (0 when every value is holomorphic).
pub fn max_pole_order<I: HopfInstance>(psi: &HopfMap<I>, probe_degree: u64) -> Result<i64> {
    let mut worst = 0i64;
    for b in psi.ctx().basis_up_to(probe_degree) {
        if psi.ctx().is_unit(&b) {
            continue;
        }
        let v = psi.apply(&b)?;
        if let Some(low) = v.lowest_exponent() {
            if low < 0 {
                worst = worst.max(-low);
            }
        }
    }
    Ok(worst)
}

/// Enough distinct rational twist parameters to certify polar-part rigidity
/// up to the probe degree: every polar coefficient of a twisted value is a
/// polynomial in t of degree at most probe_degree * max pole order, so that
/// many samples plus one pin it down.
pub fn property_phi_samples<I: HopfInstance>(
    psi: &HopfMap<I>,
    probe_degree: u64,
) -> Result<Vec<Rational>> {
    let pole = max_pole_order(psi, probe_degree)?;
    let count = (probe_degree as i64) * pole + 1;
    Ok((1..=count.max(1)).map(rat).collect())
}

/// Polar-part rigidity: does the counterterm factor of every sampled twist
/// agree with the untwisted one up to the probe degree?  Certification is
/// sound when the samples come from [`property_phi_samples`].
pub fn has_property_phi<I: HopfInstance>(
    psi: &HopfMap<I>,
    probe_degree: u64,
    t_samples: &[Rational],
) -> Result<bool> {
    let base = crate::birkhoff::birkhoff_decompose(psi)?.phi_minus;
    for t in t_samples {
        let twisted = crate::birkhoff::birkhoff_decompose(&twist(psi, t))?.phi_minus;
        if !maps_agree(&base, &twisted, probe_degree)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The constant-valued flow strength of a map whose values are purely polar
/// on the augmentation ideal and whose polar part is rigid under twists:
/// `z * flow(psi)`, cross-checked against `(res(psi)) o Y`.  Membership and
/// the agreement of the two routes are certified up to the probe degree.
pub fn beta_function<I: HopfInstance>(
    psi: &HopfMap<I>,
    probe_degree: u64,
) -> Result<HopfMap<I>> {
    if psi.check_unit_normalized().is_err() {
        return Err(Error::NotInGroupPhi(format!(
            "map {} is not 1 on the unit",
            psi.name()
        )));
    }
    for b in psi.ctx().basis_up_to(probe_degree) {
        if psi.ctx().is_unit(&b) {
            continue;
        }
        let v = psi.apply(&b)?;
        let polar_only =
            v.precision() >= Precision::UpTo(0) && v.holomorphic_part()?.is_zero_within_window();
        if !polar_only {
            return Err(Error::NotInGroupPhi(format!(
                "value on {b} is {} — not purely polar",
                render_series(&v)
            )));
        }
    }
    let samples = property_phi_samples(psi, probe_degree)?;
    if !has_property_phi(psi, probe_degree, &samples)? {
        return Err(Error::NotInGroupPhi(format!(
            "the polar part of {} moves under scale twists",
            psi.name()
        )));
    }
    let z = LaurentSeries::monomial(1, rat(1));
    let via_flow = map_scale_series(&renorm_map(psi)?, &z);
    let via_residue = compose_y(&residue_map(psi));
    if !maps_agree(&via_flow, &via_residue, probe_degree)? {
        return Err(Error::NotInGroupPhi(format!(
            "flow-strength routes disagree for {} within degree {probe_degree}",
            psi.name()
        )));
    }
    Ok(via_residue)
}

/// One application of the flow-strength transporter:
/// `U_beta(A) = beta * A + z (A o Y)`.
pub fn u_beta<I: HopfInstance>(beta: &HopfMap<I>, a: &HopfMap<I>) -> Result<HopfMap<I>> {
    let z = LaurentSeries::monomial(1, rat(1));
    map_add(&convolve(beta, a)?, &map_scale_series(&compose_y(a), &z))
}

/// Transport identity at order n: `z^n (psi o Y^n) = psi * U_beta^n(e)` with
/// `beta = z * flow(psi)`, checked on all basis elements up to the probe
/// degree.
pub fn u_beta_property_check<I: HopfInstance>(
    psi: &HopfMap<I>,
    n: u32,
    probe_degree: u64,
) -> Result<bool> {
    psi.check_unit_normalized()?;
    let z = LaurentSeries::monomial(1, rat(1));
    let beta = map_scale_series(&renorm_map(psi)?, &z);
    let f = psi.clone();
    let nn = n;
    let lhs = HopfMap::from_closure(
        Arc::clone(psi.ctx()),
        format!("(z^{n} {} o Y^{n})", psi.name()),
        MapKind::General,
        move |me, b| {
            let d = me.ctx().instance.degree(b);
            let mut c = Rational::one();
            for _ in 0..nn {
                c = c * rat(d as i64);
            }
            Ok(f.apply(b)?.scale(&c).shift(nn as i64))
        },
    );
    let mut transported = conv_unit(Arc::clone(psi.ctx()));
    for _ in 0..n {
        transported = u_beta(&beta, &transported)?;
    }
    let rhs = convolve(psi, &transported)?;
    maps_agree(&lhs, &rhs, probe_degree)
}
