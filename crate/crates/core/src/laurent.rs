//! Truncated Laurent series over exact rationals.
//!
//! A series carries a sparse coefficient map together with an explicit
//! precision window: every exponent up to the bound is known exactly
//! (absent keys are known zeros), every exponent beyond it is unknown.
//! Arithmetic propagates the window honestly — sums keep the smaller
//! window, products keep `min(K_a + v_b, K_b + v_a)` where `v` is the
//! lowest known exponent — and operations that would need coefficients
//! outside the window fail loudly instead of truncating silently.
//!
//! Principal parts (exponents < 0) are required to be exactly known before
//! any pole-sensitive operation, so minimal subtraction always splits into
//! an exact polar polynomial and a remainder carrying the original window.

use crate::error::{Error, Result};
use crate::rational::{parse_rational, rat, render_rational, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Precision window of a series: either exact (all coefficients known) or
/// known only for exponents `<= K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Precision {
    UpTo(i64),
    Exact,
}

impl Precision {
    pub fn bound(self) -> Option<i64> {
        match self {
            Precision::UpTo(k) => Some(k),
            Precision::Exact => None,
        }
    }

    fn contains(self, exp: i64) -> bool {
        match self {
            Precision::UpTo(k) => exp <= k,
            Precision::Exact => true,
        }
    }
}

/// `min` over the extended integers used for window bookkeeping
/// (`None` plays the role of +infinity).
fn ext_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn ext_add(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

fn prec_of(bound: Option<i64>) -> Precision {
    match bound {
        Some(k) => Precision::UpTo(k),
        None => Precision::Exact,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    /// Nonzero coefficients only; every key lies inside the window.
    coeffs: BTreeMap<i64, Rational>,
    prec: Precision,
}

impl LaurentSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        LaurentSeries { coeffs: BTreeMap::new(), prec: Precision::Exact }
    }

    /// The series known to vanish at all exponents `<= bound`.
    pub fn zero_up_to(bound: i64) -> Self {
        LaurentSeries { coeffs: BTreeMap::new(), prec: Precision::UpTo(bound) }
    }

    /// The exact constant 1.
    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    /// Exact `c * z^exp`.
    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentSeries { coeffs, prec: Precision::Exact }
    }

    /// Exact constant series.
    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// Build from explicit terms; zero coefficients and terms beyond the
    /// window are dropped.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I, prec: Precision) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() || !prec.contains(e) {
                continue;
            }
            let entry = coeffs.entry(e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        LaurentSeries { coeffs, prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Sparse view of the known nonzero coefficients, lowest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Lowest exponent carrying a nonzero known coefficient, if any.
    pub fn lowest_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Valuation lower bound used by window arithmetic: the true valuation
    /// when a nonzero coefficient is known, one past the window for a series
    /// that vanishes on its whole window, +infinity for the exact zero.
    fn valuation_bound(&self) -> Option<i64> {
        match self.lowest_exponent() {
            Some(v) => Some(v),
            None => match self.prec {
                Precision::UpTo(k) => Some(k + 1),
                Precision::Exact => None,
            },
        }
    }

    /// True iff no nonzero coefficient is known (exact zero, or zero on the
    /// whole window).
    pub fn is_zero_within_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff the series is exactly the zero series.
    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == Precision::Exact
    }

    /// Coefficient of `z^exp`; fails when the exponent lies beyond the window.
    pub fn coeff(&self, exp: i64) -> Result<Rational> {
        if !self.prec.contains(exp) {
            return Err(Error::Precision(format!(
                "coefficient of z^{exp} lies beyond the known window (bound {:?})",
                self.prec.bound()
            )));
        }
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero))
    }

    /// Restrict the window to `min(current, bound)`.
    pub fn with_precision(&self, bound: i64) -> Self {
        let prec = self.prec.min(Precision::UpTo(bound));
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| prec.contains(**e))
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        LaurentSeries { coeffs, prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let entry = coeffs.entry(*e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(e);
            }
        }
        coeffs.retain(|e, _| prec.contains(*e));
        LaurentSeries { coeffs, prec }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            // 0 * unknown = 0, exactly.
            return Self::zero();
        }
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Self::zero();
        }
        let ka = self.prec.bound();
        let kb = other.prec.bound();
        let va = self.valuation_bound();
        let vb = other.valuation_bound();
        let bound = ext_min(ext_add(ka, vb), ext_add(kb, va));
        let prec = prec_of(bound);
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if !prec.contains(e) {
                    continue;
                }
                let entry = coeffs.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentSeries { coeffs, prec }
    }

    /// Multiply by the exact monomial `z^k` (shifts the window along).
    pub fn shift(&self, k: i64) -> Self {
        let prec = match self.prec {
            Precision::UpTo(b) => Precision::UpTo(b + k),
            Precision::Exact => Precision::Exact,
        };
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec,
        }
    }

    /// Multiplicative inverse, computed to the requested exponent bound (or
    /// less if the input window does not support it).  Fails on a series with
    /// no known nonzero coefficient.
    pub fn inverse(&self, target: i64) -> Result<Self> {
        let v = match self.lowest_exponent() {
            Some(v) => v,
            None => {
                let what = if self.prec == Precision::Exact {
                    "series is exactly zero".to_string()
                } else {
                    format!(
                        "series is indistinguishable from zero (vanishes up to bound {:?})",
                        self.prec.bound()
                    )
                };
                return Err(Error::NotInvertible(what));
            }
        };
        let lead = self.coeffs.get(&v).expect("lowest exponent present").clone();
        // Normalize: self = lead * z^v * (1 + u), val(u) >= 1.
        let lead_inv = Rational::one() / lead;
        let mut u = self.shift(-v).scale(&lead_inv);
        u = u.sub(&Self::one());
        debug_assert!(u.lowest_exponent().map_or(true, |e| e >= 1));
        // Geometric series 1/(1+u) = sum (-u)^k; (-u)^k has valuation >= k,
        // so exponents <= target + v only need k <= target + v.
        let inner_target = target + v;
        let mut acc = Self::one();
        let mut pow = Self::one();
        let neg_u = u.neg();
        let mut k: i64 = 0;
        while k < inner_target.max(0) {
            pow = pow.mul(&neg_u);
            if pow.is_zero_within_window() && pow.prec >= Precision::UpTo(inner_target) {
                break;
            }
            acc = acc.add(&pow);
            k += 1;
        }
        let result = acc.shift(-v).scale(&lead_inv);
        Ok(result.with_precision(target))
    }

    /// Exponential.  Requires the valuation to be certified `>= 1`; the sum
    /// truncates at the input's precision bound (exact nonzero inputs must be
    /// truncated first, the result being an infinite series).
    pub fn exp(&self) -> Result<Self> {
        if let Some(v) = self.lowest_exponent() {
            if v <= 0 {
                return Err(Error::ExpValuation(format!(
                    "known nonzero coefficient at exponent {v}"
                )));
            }
        }
        if self.is_exactly_zero() {
            return Ok(Self::one());
        }
        let k_bound = match self.prec {
            Precision::UpTo(k) if k >= 0 => k,
            Precision::UpTo(_) => {
                return Err(Error::Precision(
                    "cannot certify valuation >= 1: window ends below exponent 0".into(),
                ))
            }
            Precision::Exact => {
                return Err(Error::Precision(
                    "exponential of an exact nonzero series is an infinite sum; \
                     restrict the window first"
                        .into(),
                ))
            }
        };
        // a^k has valuation >= k, so terms with k > bound cannot contribute.
        let mut acc = Self::one();
        let mut pow = Self::one();
        let mut factorial = Rational::one();
        for k in 1..=k_bound.max(0) {
            pow = pow.mul(self);
            factorial *= rat(k);
            acc = acc.add(&pow.scale(&(Rational::one() / factorial.clone())));
        }
        Ok(acc.with_precision(k_bound))
    }

    /// True iff the whole principal part (exponents < 0) is exactly known.
    pub fn principal_part_exact(&self) -> bool {
        match self.prec {
            Precision::Exact => true,
            Precision::UpTo(k) => k >= -1,
        }
    }

    /// Polar part of the minimal-subtraction splitting: the finitely many
    /// strictly negative exponents, exactly known, as an exact series.
    pub fn polar_part(&self) -> Result<Self> {
        if !self.principal_part_exact() {
            return Err(Error::Precision(
                "principal part is truncated; polar projection needs the full pole".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| **e < 0)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Ok(LaurentSeries { coeffs, prec: Precision::Exact })
    }

    /// Holomorphic remainder of the splitting (exponents >= 0, original window).
    pub fn holomorphic_part(&self) -> Result<Self> {
        if !self.principal_part_exact() {
            return Err(Error::Precision(
                "principal part is truncated; splitting needs the full pole".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| **e >= 0)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Ok(LaurentSeries { coeffs, prec: self.prec })
    }

    /// Evaluate at z = 0.  Fails with a pole error if a nonzero principal
    /// part is known, and with a precision error if the constant coefficient
    /// lies beyond the window.
    pub fn eval_at_zero(&self) -> Result<Rational> {
        if let Some(v) = self.lowest_exponent() {
            if v < 0 {
                return Err(Error::PoleAtEvaluation);
            }
        }
        if !self.prec.contains(0) {
            return Err(Error::Precision(
                "constant coefficient lies beyond the known window".into(),
            ));
        }
        self.coeff(0)
    }

    /// Equality on the common window: every exponent known to both sides
    /// carries the same coefficient.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let w = ext_min(self.prec.bound(), other.prec.bound());
        let within = |e: i64| w.map_or(true, |k| e <= k);
        for (e, c) in &self.coeffs {
            if within(*e) && other.coeffs.get(e).map_or(true, |d| d != c) {
                return false;
            }
        }
        for (e, c) in &other.coeffs {
            if within(*e) && self.coeffs.get(e).map_or(true, |d| d != c) {
                return false;
            }
        }
        true
    }
}

/// Minimal-subtraction splitting and related checks.
pub mod scheme {
    use super::*;

    /// A renormalization scheme: a projector-induced splitting of the target
    /// algebra.  Only minimal subtraction ships, but every engine reaches the
    /// splitting through this trait so alternative schemes slot in.
    pub trait RenormScheme {
        /// Projection onto the subtracted part (`pi`).
        fn polar(&self, a: &LaurentSeries) -> Result<LaurentSeries>;

        /// Full splitting `a = polar + holomorphic`.
        fn split(&self, a: &LaurentSeries) -> Result<(LaurentSeries, LaurentSeries)> {
            let minus = self.polar(a)?;
            Ok((minus.clone(), a.sub(&minus)))
        }
    }

    /// Minimal subtraction: the projector keeps exactly the strictly negative
    /// exponents.
    #[derive(Clone, Copy, Debug, Default)]
    pub struct MinimalSubtraction;

    impl RenormScheme for MinimalSubtraction {
        fn polar(&self, a: &LaurentSeries) -> Result<LaurentSeries> {
            a.polar_part()
        }
    }

    /// Split `a` by minimal subtraction into `(polar, holomorphic)`.
    pub fn ms_project(a: &LaurentSeries) -> Result<(LaurentSeries, LaurentSeries)> {
        Ok((a.polar_part()?, a.holomorphic_part()?))
    }

    /// Weight-one Rota-Baxter identity for the polar projector:
    /// `pi(a) pi(b) = -pi(ab) + pi(pi(a) b) + pi(a pi(b))`, checked exactly on
    /// the common window.
    pub fn rota_baxter_check(a: &LaurentSeries, b: &LaurentSeries) -> Result<bool> {
        let pa = a.polar_part()?;
        let pb = b.polar_part()?;
        let lhs = pa.mul(&pb);
        let rhs = a
            .mul(b)
            .polar_part()?
            .neg()
            .add(&pa.mul(b).polar_part()?)
            .add(&a.mul(&pb).polar_part()?);
        Ok(lhs.agrees_with(&rhs))
    }
}

// ---------------------------------------------------------------------------
// Text syntax: `-1/2*z^-2 + 1 + 3*z`, whitespace-insensitive; an optional
// trailing `+ O(z^n)` records a finite window with bound n-1.
// ---------------------------------------------------------------------------

pub fn parse_series(input: &str) -> Result<LaurentSeries> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty series literal".into()));
    }
    let mut prec = Precision::Exact;
    let mut body = compact.as_str();
    if let Some(pos) = body.find("O(") {
        let tail = &body[pos..];
        let inner = tail
            .strip_prefix("O(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad order term {tail:?}")))?;
        let exp = parse_zpow(inner)
            .ok_or_else(|| Error::Parse(format!("bad order term {tail:?}")))?;
        prec = Precision::UpTo(exp - 1);
        body = body[..pos].trim_end_matches('+');
    }
    let mut terms: Vec<(i64, Rational)> = Vec::new();
    for (sign, term) in split_signed_terms(body)? {
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {input:?}")));
        }
        let (exp, mut coeff) = parse_term(&term)?;
        if sign < 0 {
            coeff = -coeff;
        }
        terms.push((exp, coeff));
    }
    if terms.is_empty() && prec == Precision::Exact {
        return Err(Error::Parse(format!("no terms in {input:?}")));
    }
    Ok(LaurentSeries::from_terms(terms, prec))
}

/// `z` -> 1, `z^k` -> k.
fn parse_zpow(s: &str) -> Option<i64> {
    if s == "z" {
        return Some(1);
    }
    let rest = s.strip_prefix("z^")?;
    rest.parse::<i64>().ok()
}

fn split_signed_terms(body: &str) -> Result<Vec<(i32, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i32;
    let mut prev: Option<char> = None;
    for ch in body.chars() {
        let is_sign = ch == '+' || ch == '-';
        // A sign directly after ^, / or * belongs to the token being built.
        let binds_right = matches!(prev, Some('^') | Some('/') | Some('*'));
        if is_sign && prev.is_none() {
            sign = if ch == '-' { -1 } else { 1 };
        } else if is_sign && !binds_right {
            if cur.is_empty() {
                return Err(Error::Parse(format!("misplaced sign in {body:?}")));
            }
            out.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        if prev.is_some() {
            return Err(Error::Parse(format!("dangling sign in {body:?}")));
        }
        return Ok(out);
    }
    out.push((sign, cur));
    Ok(out)
}

fn parse_term(term: &str) -> Result<(i64, Rational)> {
    if let Some(exp) = parse_zpow(term) {
        return Ok((exp, rat(1)));
    }
    if let Some((coeff_str, z_str)) = term.split_once('*') {
        let exp = parse_zpow(z_str)
            .ok_or_else(|| Error::Parse(format!("bad power of z in term {term:?}")))?;
        return Ok((exp, parse_rational(coeff_str)?));
    }
    Ok((0, parse_rational(term)?))
}

pub fn render_series(a: &LaurentSeries) -> String {
    let mut out = String::new();
    for (i, (e, c)) in a.terms().enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&render_term(e, &mag));
    }
    match a.precision() {
        Precision::Exact => {
            if out.is_empty() {
                out.push('0');
            }
        }
        Precision::UpTo(k) => {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O(z^{})", k + 1));
        }
    }
    out
}

fn render_term(exp: i64, mag: &Rational) -> String {
    if exp == 0 {
        return render_rational(mag);
    }
    let z = if exp == 1 { "z".to_string() } else { format!("z^{exp}") };
    if mag.is_one() {
        z
    } else {
        format!("{}*{}", render_rational(mag), z)
    }
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_series(self))
    }
}
