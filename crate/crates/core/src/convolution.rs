//! Series-valued linear maps on a Hopf algebra and their convolution
//! algebra: the unit `e`, the group of unit-normalized maps, characters and
//! infinitesimal characters, convolution inverses, exponential and
//! logarithm, and the degree filtration.
//!
//! Maps are lazy: a map stores a recipe (a table of generator values, or a
//! closure combining other maps) plus a memo cache keyed by basis element.
//! Composite maps therefore cost nothing to build and are evaluated on
//! demand, with every intermediate value cached.

use crate::error::{Error, Result};
use crate::hopf::{Ctx, HopfInstance};
use crate::laurent::{LaurentSeries, Precision};
use crate::linear::Element;
use crate::rational::{rat, ratio, Rational};
use num_traits::One;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// No structural promise beyond linearity.
    General,
    /// Multiplicative, value 1 on the unit; determined by generator values.
    Character,
    /// Value 0 on the unit and on products of two augmentation-ideal
    /// elements; determined by generator values, zero elsewhere.
    InfinitesimalCharacter,
}

type ClosureFn<I> =
    dyn Fn(&HopfMap<I>, &<I as HopfInstance>::Basis) -> Result<LaurentSeries> + Send + Sync;

enum Recipe<I: HopfInstance> {
    /// Values on generators (character kinds) or on arbitrary basis elements
    /// (general kind, zero elsewhere).
    Table(BTreeMap<I::Basis, LaurentSeries>),
    Closure(Box<ClosureFn<I>>),
}

struct MapCore<I: HopfInstance> {
    ctx: Ctx<I>,
    name: String,
    kind: MapKind,
    recipe: Recipe<I>,
    cache: RwLock<HashMap<I::Basis, LaurentSeries>>,
}

/// A lazy, memoized linear map from the Hopf algebra into Laurent series.
/// Cloning is cheap and shares the cache.
pub struct HopfMap<I: HopfInstance> {
    core: Arc<MapCore<I>>,
}

impl<I: HopfInstance> Clone for HopfMap<I> {
    fn clone(&self) -> Self {
        HopfMap { core: Arc::clone(&self.core) }
    }
}

impl<I: HopfInstance> fmt::Debug for HopfMap<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HopfMap({}, {:?})", self.core.name, self.core.kind)
    }
}

impl<I: HopfInstance> HopfMap<I> {
    pub fn from_closure<F>(ctx: Ctx<I>, name: impl Into<String>, kind: MapKind, f: F) -> Self
    where
        F: Fn(&HopfMap<I>, &I::Basis) -> Result<LaurentSeries> + Send + Sync + 'static,
    {
        HopfMap {
            core: Arc::new(MapCore {
                ctx,
                name: name.into(),
                kind,
                recipe: Recipe::Closure(Box::new(f)),
                cache: RwLock::new(HashMap::new()),
            }),
        }
    }

    fn from_table(
        ctx: Ctx<I>,
        name: impl Into<String>,
        kind: MapKind,
        table: BTreeMap<I::Basis, LaurentSeries>,
    ) -> Self {
        HopfMap {
            core: Arc::new(MapCore {
                ctx,
                name: name.into(),
                kind,
                recipe: Recipe::Table(table),
                cache: RwLock::new(HashMap::new()),
            }),
        }
    }

    fn check_generator_keys(ctx: &Ctx<I>, table: &BTreeMap<I::Basis, LaurentSeries>) -> Result<()> {
        for key in table.keys() {
            if ctx.instance.generator_factors(key).len() != 1 {
                return Err(Error::Parse(format!(
                    "character tables are defined on generators; {key} is not one"
                )));
            }
        }
        Ok(())
    }

    /// A character from its generator values, extended multiplicatively.
    /// Generators missing from the table raise an error when reached.
    pub fn character(
        ctx: Ctx<I>,
        name: impl Into<String>,
        table: BTreeMap<I::Basis, LaurentSeries>,
    ) -> Result<Self> {
        Self::check_generator_keys(&ctx, &table)?;
        Ok(Self::from_table(ctx, name, MapKind::Character, table))
    }

    /// An infinitesimal character from its generator values, extended by
    /// zero on the unit and on nontrivial products.  Missing generators
    /// default to zero.
    pub fn infinitesimal(
        ctx: Ctx<I>,
        name: impl Into<String>,
        table: BTreeMap<I::Basis, LaurentSeries>,
    ) -> Result<Self> {
        Self::check_generator_keys(&ctx, &table)?;
        Ok(Self::from_table(ctx, name, MapKind::InfinitesimalCharacter, table))
    }

    /// A plain linear map: listed basis elements take the listed values,
    /// everything else goes to zero.
    pub fn linear_table(
        ctx: Ctx<I>,
        name: impl Into<String>,
        table: BTreeMap<I::Basis, LaurentSeries>,
    ) -> Self {
        Self::from_table(ctx, name, MapKind::General, table)
    }

    pub fn ctx(&self) -> &Ctx<I> {
        &self.core.ctx
    }

    pub fn kind(&self) -> MapKind {
        self.core.kind
    }

    pub fn name(&self) -> &str {
        &self.core.name
    }

    /// Evaluate on one basis element, memoized.
    pub fn apply(&self, b: &I::Basis) -> Result<LaurentSeries> {
        if let Some(hit) = self.core.cache.read().unwrap().get(b) {
            return Ok(hit.clone());
        }
        let value = match &self.core.recipe {
            Recipe::Closure(f) => f(self, b)?,
            Recipe::Table(t) => self.eval_table(t, b)?,
        };
        self.core
            .cache
            .write()
            .unwrap()
            .insert(b.clone(), value.clone());
        Ok(value)
    }

    fn eval_table(&self, t: &BTreeMap<I::Basis, LaurentSeries>, b: &I::Basis) -> Result<LaurentSeries> {
        let inst = &self.core.ctx.instance;
        match self.core.kind {
            MapKind::General => Ok(t.get(b).cloned().unwrap_or_else(LaurentSeries::zero)),
            MapKind::Character => {
                if self.core.ctx.is_unit(b) {
                    return Ok(LaurentSeries::one());
                }
                let factors = inst.generator_factors(b);
                if factors.len() == 1 {
                    t.get(&factors[0]).cloned().ok_or_else(|| {
                        Error::MissingGenerator(format!("{b} (character {})", self.core.name))
                    })
                } else {
                    let mut acc = LaurentSeries::one();
                    for f in &factors {
                        acc = acc.mul(&self.apply(f)?);
                    }
                    Ok(acc)
                }
            }
            MapKind::InfinitesimalCharacter => {
                if self.core.ctx.is_unit(b) {
                    return Ok(LaurentSeries::zero());
                }
                let factors = inst.generator_factors(b);
                if factors.len() == 1 {
                    Ok(t.get(&factors[0]).cloned().unwrap_or_else(LaurentSeries::zero))
                } else {
                    Ok(LaurentSeries::zero())
                }
            }
        }
    }

    /// Evaluate on a linear combination.
    pub fn apply_element(&self, x: &Element<I::Basis>) -> Result<LaurentSeries> {
        let mut acc = LaurentSeries::zero();
        for (b, c) in x.terms() {
            acc = acc.add(&self.apply(b)?.scale(c));
        }
        Ok(acc)
    }

    /// Value on the unit agrees with 1, with the window actually covering
    /// the constant coefficient.
    pub fn check_unit_normalized(&self) -> Result<()> {
        let v = self.apply(&self.core.ctx.instance.unit())?;
        if v.precision() < Precision::UpTo(0) || !v.agrees_with(&LaurentSeries::one()) {
            return Err(Error::NotUnitNormalized(format!(
                "map {} takes value {} on the unit",
                self.core.name,
                crate::laurent::render_series(&v)
            )));
        }
        Ok(())
    }

    /// Value on the unit agrees with 0, window covering the constant term.
    pub fn check_vanishes_on_unit(&self) -> Result<()> {
        let v = self.apply(&self.core.ctx.instance.unit())?;
        if v.precision() < Precision::UpTo(0) || !v.is_zero_within_window() {
            return Err(Error::NotVanishingOnUnit(format!(
                "map {} takes value {} on the unit",
                self.core.name,
                crate::laurent::render_series(&v)
            )));
        }
        Ok(())
    }
}

fn require_same_context<I: HopfInstance>(a: &HopfMap<I>, b: &HopfMap<I>) -> Result<()> {
    if Arc::ptr_eq(&a.core.ctx, &b.core.ctx) {
        Ok(())
    } else {
        Err(Error::ContextMismatch(format!(
            "maps {} and {} live in different contexts",
            a.core.name, b.core.name
        )))
    }
}

/// The convolution unit `e`: 1 on the unit, 0 on the augmentation ideal.
pub fn conv_unit<I: HopfInstance>(ctx: Ctx<I>) -> HopfMap<I> {
    let c = Arc::clone(&ctx);
    HopfMap::from_closure(ctx, "e", MapKind::Character, move |_, b| {
        if c.is_unit(b) {
            Ok(LaurentSeries::one())
        } else {
            Ok(LaurentSeries::zero())
        }
    })
}

/// Convolution product: `(f*g)(b) = sum over the full coproduct of b of
/// f(left)·g(right)`.  Characters are closed under it.
pub fn convolve<I: HopfInstance>(phi: &HopfMap<I>, psi: &HopfMap<I>) -> Result<HopfMap<I>> {
    require_same_context(phi, psi)?;
    let kind = if phi.kind() == MapKind::Character && psi.kind() == MapKind::Character {
        MapKind::Character
    } else {
        MapKind::General
    };
    let f = phi.clone();
    let g = psi.clone();
    let ctx = Arc::clone(phi.ctx());
    let name = format!("({} * {})", phi.name(), psi.name());
    Ok(HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let delta = me.ctx().coproduct_basis(b);
        let mut acc = LaurentSeries::zero();
        for ((l, r), c) in delta.terms() {
            acc = acc.add(&f.apply(l)?.mul(&g.apply(r)?).scale(c));
        }
        Ok(acc)
    }))
}

/// Pointwise sum.  Infinitesimal characters are closed under it.
pub fn map_add<I: HopfInstance>(a: &HopfMap<I>, b: &HopfMap<I>) -> Result<HopfMap<I>> {
    require_same_context(a, b)?;
    let kind = if a.kind() == MapKind::InfinitesimalCharacter
        && b.kind() == MapKind::InfinitesimalCharacter
    {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = a.clone();
    let g = b.clone();
    let ctx = Arc::clone(a.ctx());
    let name = format!("({} + {})", a.name(), b.name());
    Ok(HopfMap::from_closure(ctx, name, kind, move |_, x| {
        Ok(f.apply(x)?.add(&g.apply(x)?))
    }))
}

pub fn map_neg<I: HopfInstance>(a: &HopfMap<I>) -> HopfMap<I> {
    let kind = if a.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = a.clone();
    let ctx = Arc::clone(a.ctx());
    let name = format!("(-{})", a.name());
    HopfMap::from_closure(ctx, name, kind, move |_, x| Ok(f.apply(x)?.neg()))
}

pub fn map_sub<I: HopfInstance>(a: &HopfMap<I>, b: &HopfMap<I>) -> Result<HopfMap<I>> {
    map_add(a, &map_neg(b))
}

/// Valuewise scaling by a rational constant.
pub fn map_scale<I: HopfInstance>(a: &HopfMap<I>, c: &Rational) -> HopfMap<I> {
    let kind = if a.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = a.clone();
    let cc = c.clone();
    let ctx = Arc::clone(a.ctx());
    let name = format!("({} . {})", crate::rational::render_rational(c), a.name());
    HopfMap::from_closure(ctx, name, kind, move |_, x| Ok(f.apply(x)?.scale(&cc)))
}

/// Valuewise multiplication by a fixed series (e.g. z or 1/z).
pub fn map_scale_series<I: HopfInstance>(a: &HopfMap<I>, s: &LaurentSeries) -> HopfMap<I> {
    let kind = if a.kind() == MapKind::InfinitesimalCharacter {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let f = a.clone();
    let ss = s.clone();
    let ctx = Arc::clone(a.ctx());
    let name = format!("(series . {})", a.name());
    HopfMap::from_closure(ctx, name, kind, move |_, x| Ok(f.apply(x)?.mul(&ss)))
}

/// Precompose a character with the antipode; for characters this is the
/// convolution inverse.
pub fn compose_antipode<I: HopfInstance>(chi: &HopfMap<I>) -> HopfMap<I> {
    let kind = if chi.kind() == MapKind::Character {
        MapKind::Character
    } else {
        MapKind::General
    };
    let f = chi.clone();
    let ctx = Arc::clone(chi.ctx());
    let name = format!("({} o S)", chi.name());
    HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let s = me.ctx().antipode_basis(b);
        f.apply_element(&s)
    })
}

/// Lazily grown cache of convolution powers `base^{*k}` sharing one context.
struct ConvPowers<I: HopfInstance> {
    base: HopfMap<I>,
    powers: RwLock<Vec<HopfMap<I>>>,
}

impl<I: HopfInstance> ConvPowers<I> {
    fn new(base: HopfMap<I>) -> Self {
        let unit = conv_unit(Arc::clone(base.ctx()));
        ConvPowers { base, powers: RwLock::new(vec![unit]) }
    }

    fn get(&self, k: usize) -> Result<HopfMap<I>> {
        {
            let read = self.powers.read().unwrap();
            if k < read.len() {
                return Ok(read[k].clone());
            }
        }
        let mut write = self.powers.write().unwrap();
        while write.len() <= k {
            let next = convolve(write.last().expect("nonempty"), &self.base)?;
            write.push(next);
        }
        Ok(write[k].clone())
    }
}

/// Convolution inverse of a unit-normalized map, via the geometric series
/// `sum_k (e-phi)^{*k}` which stops at k = degree on each basis element.
pub fn conv_inverse<I: HopfInstance>(phi: &HopfMap<I>) -> Result<HopfMap<I>> {
    phi.check_unit_normalized()?;
    let kind = if phi.kind() == MapKind::Character {
        MapKind::Character
    } else {
        MapKind::General
    };
    let ctx = Arc::clone(phi.ctx());
    let defect = map_sub(&conv_unit(Arc::clone(&ctx)), phi)?;
    let powers = ConvPowers::new(defect);
    let name = format!("({}^-1)", phi.name());
    Ok(HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let n = me.ctx().instance.degree(b);
        let mut acc = LaurentSeries::zero();
        for k in 0..=n {
            acc = acc.add(&powers.get(k as usize)?.apply(b)?);
        }
        Ok(acc)
    }))
}

/// Convolution exponential of a map vanishing on the unit; on a basis
/// element of degree n only the terms `alpha^{*k}/k!` with k <= n survive.
/// The exponential of an infinitesimal character is a character.
pub fn conv_exp<I: HopfInstance>(alpha: &HopfMap<I>) -> Result<HopfMap<I>> {
    alpha.check_vanishes_on_unit()?;
    let kind = if alpha.kind() == MapKind::InfinitesimalCharacter {
        MapKind::Character
    } else {
        MapKind::General
    };
    let ctx = Arc::clone(alpha.ctx());
    let powers = ConvPowers::new(alpha.clone());
    let name = format!("exp*({})", alpha.name());
    Ok(HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let n = me.ctx().instance.degree(b);
        let mut acc = LaurentSeries::zero();
        let mut kfact = Rational::one();
        for k in 0..=n {
            if k > 0 {
                kfact = kfact * rat(k as i64);
            }
            let inv = Rational::one() / kfact.clone();
            acc = acc.add(&powers.get(k as usize)?.apply(b)?.scale(&inv));
        }
        Ok(acc)
    }))
}

/// Convolution logarithm of a unit-normalized map; inverse bijection of
/// [`conv_exp`].  The logarithm of a character is an infinitesimal
/// character.
pub fn conv_log<I: HopfInstance>(phi: &HopfMap<I>) -> Result<HopfMap<I>> {
    phi.check_unit_normalized()?;
    let kind = if phi.kind() == MapKind::Character {
        MapKind::InfinitesimalCharacter
    } else {
        MapKind::General
    };
    let ctx = Arc::clone(phi.ctx());
    let defect = map_sub(phi, &conv_unit(Arc::clone(&ctx)))?;
    let powers = ConvPowers::new(defect);
    let name = format!("log*({})", phi.name());
    Ok(HopfMap::from_closure(ctx, name, kind, move |me, b| {
        let n = me.ctx().instance.degree(b);
        let mut acc = LaurentSeries::zero();
        for k in 1..=n {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = ratio(sign, k as i64);
            acc = acc.add(&powers.get(k as usize)?.apply(b)?.scale(&c));
        }
        Ok(acc)
    }))
}

/// Degree filtration valuation: the largest n <= probe_degree + 1 such that
/// the map vanishes (within its windows) on every basis element of degree
/// < n.  The zero map comes out as probe_degree + 1.
pub fn valuation<I: HopfInstance>(phi: &HopfMap<I>, probe_degree: u64) -> Result<u64> {
    for d in 0..=probe_degree {
        for b in phi.ctx().instance.basis_of_degree(d) {
            if !phi.apply(&b)?.is_zero_within_window() {
                return Ok(d);
            }
        }
    }
    Ok(probe_degree + 1)
}

/// Ultrametric distance `2^{-val(phi - psi)}`, for diagnostics.
pub fn distance<I: HopfInstance>(
    phi: &HopfMap<I>,
    psi: &HopfMap<I>,
    probe_degree: u64,
) -> Result<Rational> {
    let v = valuation(&map_sub(phi, psi)?, probe_degree)?;
    let mut denom = Rational::one();
    for _ in 0..v {
        denom = denom * rat(2);
    }
    Ok(Rational::one() / denom)
}

/// Do the two maps agree (within their precision windows) on every basis
/// element of degree <= max_degree?
pub fn maps_agree<I: HopfInstance>(
    phi: &HopfMap<I>,
    psi: &HopfMap<I>,
    max_degree: u64,
) -> Result<bool> {
    require_same_context(phi, psi)?;
    for b in phi.ctx().basis_up_to(max_degree) {
        if !phi.apply(&b)?.agrees_with(&psi.apply(&b)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First basis element of degree <= max_degree where the maps disagree.
pub fn first_disagreement<I: HopfInstance>(
    phi: &HopfMap<I>,
    psi: &HopfMap<I>,
    max_degree: u64,
) -> Result<Option<I::Basis>> {
    require_same_context(phi, psi)?;
    for b in phi.ctx().basis_up_to(max_degree) {
        if !phi.apply(&b)?.agrees_with(&psi.apply(&b)?) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Structural character test on all basis pairs up to the degree bound:
/// unit normalization plus multiplicativity.
pub fn is_character_on<I: HopfInstance>(phi: &HopfMap<I>, max_degree: u64) -> Result<bool> {
    if phi.check_unit_normalized().is_err() {
        return Ok(false);
    }
    let ctx = phi.ctx();
    for x in ctx.basis_up_to(max_degree) {
        let dx = ctx.instance.degree(&x);
        for y in ctx.basis_up_to(max_degree.saturating_sub(dx)) {
            let prod = ctx.instance.product(&x, &y);
            let lhs = phi.apply_element(&prod)?;
            let rhs = phi.apply(&x)?.mul(&phi.apply(&y)?);
            if !lhs.agrees_with(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Structural infinitesimal-character test: zero on the unit, and the
/// counit-derivation rule on all basis pairs up to the degree bound.
pub fn is_infinitesimal_on<I: HopfInstance>(phi: &HopfMap<I>, max_degree: u64) -> Result<bool> {
    if phi.check_vanishes_on_unit().is_err() {
        return Ok(false);
    }
    let ctx = phi.ctx();
    for x in ctx.basis_up_to(max_degree) {
        let dx = ctx.instance.degree(&x);
        for y in ctx.basis_up_to(max_degree.saturating_sub(dx)) {
            let prod = ctx.instance.product(&x, &y);
            let lhs = phi.apply_element(&prod)?;
            let ex = ctx.counit(&Element::basis(x.clone()));
            let ey = ctx.counit(&Element::basis(y.clone()));
            let rhs = phi.apply(&y)?.scale(&ex).add(&phi.apply(&x)?.scale(&ey));
            if !lhs.agrees_with(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does the map take equal values on xy and yx for every listed pair?
pub fn is_cocycle_on<I: HopfInstance>(
    phi: &HopfMap<I>,
    pairs: &[(Element<I::Basis>, Element<I::Basis>)],
) -> Result<bool> {
    let ctx = phi.ctx();
    for (x, y) in pairs {
        let xy = ctx.mul_elements(x, y);
        let yx = ctx.mul_elements(y, x);
        if !phi.apply_element(&xy)?.agrees_with(&phi.apply_element(&yx)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convolution commutator `a*b - b*a` of two maps.
pub fn conv_bracket<I: HopfInstance>(a: &HopfMap<I>, b: &HopfMap<I>) -> Result<HopfMap<I>> {
    let ab = convolve(a, b)?;
    let ba = convolve(b, a)?;
    let out = map_sub(&ab, &ba)?;
    // The bracket of two infinitesimal characters is again one; the sum
    // rule alone cannot see that, so restore the kind here.
    if a.kind() == MapKind::InfinitesimalCharacter && b.kind() == MapKind::InfinitesimalCharacter {
        let f = out.clone();
        let ctx = Arc::clone(a.ctx());
        let name = format!("[{}, {}]", a.name(), b.name());
        Ok(HopfMap::from_closure(ctx, name, MapKind::InfinitesimalCharacter, move |_, x| {
            f.apply(x)
        }))
    } else {
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Character definition files
// ---------------------------------------------------------------------------

/// Parse a character or infinitesimal-character definition:
///
/// ```text
/// kind: character
/// gen [0] = z^-1 + 1/2
/// gen [0 [0]] = z^-2
/// ```
///
/// `kind:` must come first (`character` or `infinitesimal`); each `gen` line
/// gives one generator literal (parsed by the supplied closure) and a series.
/// `#` starts a comment.
pub fn parse_character_file<I, F>(text: &str, ctx: Ctx<I>, name: impl Into<String>, parse_gen: F) -> Result<HopfMap<I>>
where
    I: HopfInstance,
    F: Fn(&str) -> Result<I::Basis>,
{
    let mut kind: Option<MapKind> = None;
    let mut table: BTreeMap<I::Basis, LaurentSeries> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", ln + 1));
        if let Some(k) = line.strip_prefix("kind:") {
            if kind.is_some() {
                return Err(err("duplicate kind: line".into()));
            }
            kind = Some(match k.trim() {
                "character" => MapKind::Character,
                "infinitesimal" => MapKind::InfinitesimalCharacter,
                other => return Err(err(format!("unknown kind {other:?}"))),
            });
        } else if let Some(rest) = line.strip_prefix("gen ") {
            if kind.is_none() {
                return Err(err("the kind: line must come before gen lines".into()));
            }
            let (lit, series) = rest
                .split_once('=')
                .ok_or_else(|| err("gen line needs `= <series>`".into()))?;
            let basis = parse_gen(lit.trim())?;
            let value = crate::laurent::parse_series(series.trim())?;
            if table.insert(basis, value).is_some() {
                return Err(err("duplicate generator".into()));
            }
        } else {
            return Err(err(format!("unknown directive {line:?}")));
        }
    }
    let kind = kind.ok_or_else(|| Error::Parse("missing kind: line".into()))?;
    match kind {
        MapKind::Character => HopfMap::character(ctx, name, table),
        MapKind::InfinitesimalCharacter => HopfMap::infinitesimal(ctx, name, table),
        MapKind::General => unreachable!("file kinds are character or infinitesimal"),
    }
}
