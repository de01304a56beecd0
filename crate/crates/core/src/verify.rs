//! Seeded randomized verification suites.  Each suite samples maps with a
//! deterministic generator, runs a family of structural identities, and
//! returns a report with one labeled pass/fail line per check, including a
//! witness description for failures.

use crate::birkhoff::{
    birkhoff_decompose, birkhoff_via_bch, bch_chi, polar_splitting_law_on,
};
use crate::convolution::{
    conv_exp, conv_log, conv_unit, convolve, first_disagreement, is_character_on, map_sub,
    maps_agree, valuation, HopfMap,
};
use crate::error::Result;
use crate::hopf::{Ctx, HopfInstance};
use crate::laurent::{render_series, LaurentSeries, Precision};
use crate::rational::ratio;
use crate::rgflow::{
    beta_function, compose_y, has_property_phi, property_phi_samples, renorm_map,
    renorm_map_explicit, renorm_map_integral, scattering_inverse, u_beta_property_check,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct SuiteCheck {
    pub label: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    fn new(suite: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn record(&mut self, label: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(SuiteCheck { label: label.into(), passed, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line per check: `ok <label>` or `FAIL <label>: <witness>`.
    pub fn render_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                if c.passed {
                    format!("ok {}", c.label)
                } else {
                    let mut line = format!("FAIL {}", c.label);
                    if let Some(w) = &c.witness {
                        let _ = write!(line, ": {w}");
                    }
                    line
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub max_degree: u64,
    pub seed: u64,
    pub samples: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_degree: 4, seed: 17, samples: 3 }
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Exact Laurent polynomial with exponents in [-max_pole, max_exp] and
/// small rational coefficients; guaranteed nonzero when `max_pole >= 0`.
pub fn random_series(rng: &mut ChaCha8Rng, max_pole: i64, max_exp: i64) -> LaurentSeries {
    let mut terms = Vec::new();
    for e in -max_pole..=max_exp {
        if rng.gen_range(0..3) == 0 {
            continue;
        }
        let num = rng.gen_range(-4i64..=4);
        if num == 0 {
            continue;
        }
        let den = rng.gen_range(1i64..=3);
        terms.push((e, ratio(num, den)));
    }
    if terms.is_empty() {
        terms.push((0, ratio(rng.gen_range(1i64..=3), 1)));
    }
    LaurentSeries::from_terms(terms, Precision::Exact)
}

fn generator_table<I: HopfInstance>(
    ctx: &Ctx<I>,
    rng: &mut ChaCha8Rng,
    max_degree: u64,
    mut value: impl FnMut(&mut ChaCha8Rng) -> LaurentSeries,
) -> BTreeMap<I::Basis, LaurentSeries> {
    let mut table = BTreeMap::new();
    for d in 1..=max_degree {
        for g in ctx.instance.generators_of_degree(d) {
            table.insert(g, value(rng));
        }
    }
    table
}

/// Random character with exact polar-and-holomorphic generator values.
pub fn random_character<I: HopfInstance>(
    ctx: &Ctx<I>,
    rng: &mut ChaCha8Rng,
    max_degree: u64,
    max_pole: i64,
    name: impl Into<String>,
) -> Result<HopfMap<I>> {
    let table = generator_table(ctx, rng, max_degree, |r| random_series(r, max_pole, 2));
    HopfMap::character(ctx.clone(), name, table)
}

/// Random infinitesimal character.
pub fn random_infinitesimal<I: HopfInstance>(
    ctx: &Ctx<I>,
    rng: &mut ChaCha8Rng,
    max_degree: u64,
    max_pole: i64,
    name: impl Into<String>,
) -> Result<HopfMap<I>> {
    let table = generator_table(ctx, rng, max_degree, |r| random_series(r, max_pole, 2));
    HopfMap::infinitesimal(ctx.clone(), name, table)
}

/// Random infinitesimal character whose values are nonzero constants.
pub fn random_constant_infinitesimal<I: HopfInstance>(
    ctx: &Ctx<I>,
    rng: &mut ChaCha8Rng,
    max_degree: u64,
    name: impl Into<String>,
) -> Result<HopfMap<I>> {
    let table = generator_table(ctx, rng, max_degree, |r| {
        let mut num = 0;
        while num == 0 {
            num = r.gen_range(-4i64..=4);
        }
        LaurentSeries::constant(ratio(num, r.gen_range(1i64..=3)))
    });
    HopfMap::infinitesimal(ctx.clone(), name, table)
}

fn witness_disagreement<I: HopfInstance>(
    a: &HopfMap<I>,
    b: &HopfMap<I>,
    max_degree: u64,
) -> Result<Option<String>> {
    Ok(match first_disagreement(a, b, max_degree)? {
        Some(x) => Some(format!(
            "at {x}: {} vs {}",
            render_series(&a.apply(&x)?),
            render_series(&b.apply(&x)?)
        )),
        None => None,
    })
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Structural Hopf-algebra axioms of the instance, wrapped from the core
/// checker: counit, grading, coassociativity, antipode, nilpotence of the
/// reduced coproduct, and product compatibility.
pub fn run_hopf_axioms<I: HopfInstance>(ctx: &Ctx<I>, cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new("hopf-axioms");
    let axioms = ctx.check_hopf_axioms(cfg.max_degree);
    report.record(
        format!(
            "instance {} axioms up to degree {} ({} checks)",
            ctx.instance.name(),
            cfg.max_degree,
            axioms.checks_run
        ),
        axioms.passed(),
        axioms.first_failure().map(|s| s.to_string()),
    );
    report
}

/// The multiplicative splitting law of the scalar projection, on random
/// series pairs and valuewise on random characters.
pub fn run_rota_baxter<I: HopfInstance>(ctx: &Ctx<I>, cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new("rota-baxter");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let run = |report: &mut SuiteReport, rng: &mut ChaCha8Rng| -> Result<()> {
        for i in 0..cfg.samples {
            let a = random_series(rng, 3, 4);
            let b = random_series(rng, 3, 4);
            let ok = crate::laurent::scheme::rota_baxter_check(&a, &b)?;
            report.record(
                format!("scalar splitting law, sample {i}"),
                ok,
                (!ok).then(|| format!("a = {}, b = {}", render_series(&a), render_series(&b))),
            );
        }
        for i in 0..cfg.samples {
            let a = random_character(ctx, rng, cfg.max_degree, 2, format!("a{i}"))?;
            let b = random_character(ctx, rng, cfg.max_degree, 2, format!("b{i}"))?;
            let ok = polar_splitting_law_on(&a, &b, cfg.max_degree)?;
            report.record(format!("valuewise splitting law on characters, sample {i}"), ok, None);
        }
        Ok(())
    };
    if let Err(e) = run(&mut report, &mut rng) {
        report.record("suite execution", false, Some(e.to_string()));
    }
    report
}

/// Factorization invariants: unit normalization and polar purity of the
/// counterterm, holomorphy of the finite part, reconstruction, uniqueness on
/// already-holomorphic input, and character preservation when requested.
pub fn run_birkhoff_uniqueness<I: HopfInstance>(
    ctx: &Ctx<I>,
    cfg: &SuiteConfig,
    check_characters: bool,
) -> SuiteReport {
    let mut report = SuiteReport::new("birkhoff-uniqueness");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let run = |report: &mut SuiteReport, rng: &mut ChaCha8Rng| -> Result<()> {
        for i in 0..cfg.samples {
            let phi = random_character(ctx, rng, cfg.max_degree, 2, format!("phi{i}"))?;
            let dec = birkhoff_decompose(&phi)?;
            let mut polar_ok = true;
            let mut holo_ok = true;
            let mut witness = None;
            for b in ctx.basis_up_to(cfg.max_degree) {
                let minus = dec.phi_minus.apply(&b)?;
                let plus = dec.phi_plus.apply(&b)?;
                if !ctx.is_unit(&b) && !minus.holomorphic_part()?.is_zero_within_window() {
                    polar_ok = false;
                    witness = Some(format!("counterterm at {b} is {}", render_series(&minus)));
                }
                if minus.precision() != Precision::Exact {
                    polar_ok = false;
                    witness = Some(format!("counterterm at {b} has an inexact window"));
                }
                if plus.lowest_exponent().map_or(false, |e| e < 0) {
                    holo_ok = false;
                    witness = Some(format!("finite part at {b} is {}", render_series(&plus)));
                }
            }
            report.record(
                format!("counterterm purely polar, sample {i}"),
                polar_ok,
                witness.clone(),
            );
            report.record(format!("finite part holomorphic, sample {i}"), holo_ok, witness);
            let recon = convolve(&dec.phi_minus, &phi)?;
            let ok = maps_agree(&recon, &dec.phi_plus, cfg.max_degree)?;
            report.record(
                format!("reconstruction counterterm * map = finite part, sample {i}"),
                ok,
                witness_disagreement(&recon, &dec.phi_plus, cfg.max_degree)?,
            );
            if check_characters {
                let ok = is_character_on(&dec.phi_minus, cfg.max_degree)?
                    && is_character_on(&dec.phi_plus, cfg.max_degree)?;
                report.record(format!("both factors are characters, sample {i}"), ok, None);
            }
            // A map with no poles must come back unchanged: counterterm e.
            let holo = random_character(ctx, rng, cfg.max_degree, 0, format!("holo{i}"))?;
            let dec2 = birkhoff_decompose(&holo)?;
            let e = conv_unit(ctx.clone());
            let ok = maps_agree(&dec2.phi_minus, &e, cfg.max_degree)?
                && maps_agree(&dec2.phi_plus, &holo, cfg.max_degree)?;
            report.record(format!("holomorphic input is a fixed point, sample {i}"), ok, None);
        }
        Ok(())
    };
    if let Err(e) = run(&mut report, &mut rng) {
        report.record("suite execution", false, Some(e.to_string()));
    }
    report
}

/// Agreement of the recursive factorization with the group-logarithm route,
/// plus the valuation-doubling property of the fixed point.
pub fn run_bch_agreement<I: HopfInstance>(ctx: &Ctx<I>, cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new("bch-agreement");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let run = |report: &mut SuiteReport, rng: &mut ChaCha8Rng| -> Result<()> {
        for i in 0..cfg.samples {
            let phi = random_character(ctx, rng, cfg.max_degree, 2, format!("phi{i}"))?;
            let rec = birkhoff_decompose(&phi)?;
            let bch = birkhoff_via_bch(&phi, cfg.max_degree)?;
            let ok_minus = maps_agree(&rec.phi_minus, &bch.phi_minus, cfg.max_degree)?;
            report.record(
                format!("counterterm routes agree, sample {i}"),
                ok_minus,
                witness_disagreement(&rec.phi_minus, &bch.phi_minus, cfg.max_degree)?,
            );
            let ok_plus = maps_agree(&rec.phi_plus, &bch.phi_plus, cfg.max_degree)?;
            report.record(
                format!("finite-part routes agree, sample {i}"),
                ok_plus,
                witness_disagreement(&rec.phi_plus, &bch.phi_plus, cfg.max_degree)?,
            );
            let x = conv_log(&phi)?;
            let state = bch_chi(&x, cfg.max_degree)?;
            let vx = valuation(&x, cfg.max_degree)?;
            let vdiff = valuation(&map_sub(&state.chi, &x)?, cfg.max_degree)?;
            let ok = vdiff >= (2 * vx).min(cfg.max_degree + 1);
            report.record(
                format!("fixed-point correction doubles valuation, sample {i}"),
                ok,
                (!ok).then(|| format!("val(x) = {vx}, val(chi - x) = {vdiff}")),
            );
        }
        Ok(())
    };
    if let Err(e) = run(&mut report, &mut rng) {
        report.record("suite execution", false, Some(e.to_string()));
    }
    report
}

/// The flow map and its scattering-series inverse: both roundtrips, the
/// recursion against the closed form, and the integral formula on
/// exponentials of infinitesimal characters.
pub fn run_rg_roundtrip<I: HopfInstance>(ctx: &Ctx<I>, cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new("rg-roundtrip");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let run = |report: &mut SuiteReport, rng: &mut ChaCha8Rng| -> Result<()> {
        for i in 0..cfg.samples {
            let gamma = random_infinitesimal(ctx, rng, cfg.max_degree, 1, format!("g{i}"))?;
            let psi = scattering_inverse(&gamma)?;
            let back = renorm_map(&psi)?;
            let ok = maps_agree(&back, &gamma, cfg.max_degree)?;
            report.record(
                format!("flow of the scattering inverse returns the input, sample {i}"),
                ok,
                witness_disagreement(&back, &gamma, cfg.max_degree)?,
            );
            let phi = random_character(ctx, rng, cfg.max_degree, 1, format!("phi{i}"))?;
            let there = renorm_map(&phi)?;
            let roundtrip = scattering_inverse(&there)?;
            let ok = maps_agree(&roundtrip, &phi, cfg.max_degree)?;
            report.record(
                format!("scattering inverse of the flow returns the input, sample {i}"),
                ok,
                witness_disagreement(&roundtrip, &phi, cfg.max_degree)?,
            );
            let explicit = renorm_map_explicit(&phi)?;
            let ok = maps_agree(&there, &explicit, cfg.max_degree)?;
            report.record(
                format!("flow recursion matches the closed form, sample {i}"),
                ok,
                witness_disagreement(&there, &explicit, cfg.max_degree)?,
            );
            let alpha = random_infinitesimal(ctx, rng, cfg.max_degree, 1, format!("al{i}"))?;
            let integral = renorm_map_integral(&alpha)?;
            let direct = renorm_map(&conv_exp(&alpha)?)?;
            let ok = maps_agree(&integral, &direct, cfg.max_degree)?;
            report.record(
                format!("integral formula matches the recursion, sample {i}"),
                ok,
                witness_disagreement(&integral, &direct, cfg.max_degree)?,
            );
            // The grading composition is a derivation for convolution.
            let a = random_character(ctx, rng, cfg.max_degree, 1, format!("da{i}"))?;
            let b = random_character(ctx, rng, cfg.max_degree, 1, format!("db{i}"))?;
            let lhs = compose_y(&convolve(&a, &b)?);
            let rhs = crate::convolution::map_add(
                &convolve(&compose_y(&a), &b)?,
                &convolve(&a, &compose_y(&b))?,
            )?;
            let ok = maps_agree(&lhs, &rhs, cfg.max_degree)?;
            report.record(
                format!("grading composition is a convolution derivation, sample {i}"),
                ok,
                witness_disagreement(&lhs, &rhs, cfg.max_degree)?,
            );
        }
        Ok(())
    };
    if let Err(e) = run(&mut report, &mut rng) {
        report.record("suite execution", false, Some(e.to_string()));
    }
    report
}

/// The constant-flow-strength theorem: maps built from constant
/// infinitesimal characters through the scattering inverse of beta/z have
/// rigid polar parts, their flow strength is the constant they came from,
/// both evaluation routes agree, and the transport identity holds for
/// n = 0..3.
pub fn run_beta_theorem<I: HopfInstance>(ctx: &Ctx<I>, cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new("beta-theorem");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let run = |report: &mut SuiteReport, rng: &mut ChaCha8Rng| -> Result<()> {
        let zinv = LaurentSeries::monomial(-1, ratio(1, 1));
        for i in 0..cfg.samples {
            let beta0 = random_constant_infinitesimal(ctx, rng, cfg.max_degree, format!("b{i}"))?;
            let gamma = crate::convolution::map_scale_series(&beta0, &zinv);
            let psi = scattering_inverse(&gamma)?;
            let samples = property_phi_samples(&psi, cfg.max_degree)?;
            let phi_ok = has_property_phi(&psi, cfg.max_degree, &samples)?;
            report.record(
                format!("polar part rigid under twists, sample {i}"),
                phi_ok,
                None,
            );
            let beta = beta_function(&psi, cfg.max_degree)?;
            let ok = maps_agree(&beta, &beta0, cfg.max_degree)?;
            report.record(
                format!("flow strength recovers the constant source, sample {i}"),
                ok,
                witness_disagreement(&beta, &beta0, cfg.max_degree)?,
            );
            let mut constant_ok = true;
            let mut witness = None;
            for b in ctx.basis_up_to(cfg.max_degree) {
                let v = beta.apply(&b)?;
                let nonconstant = v.terms().any(|(e, _)| e != 0);
                if nonconstant || v.precision() != Precision::Exact {
                    constant_ok = false;
                    witness = Some(format!("value at {b} is {}", render_series(&v)));
                }
            }
            report.record(
                format!("flow strength is constant-valued, sample {i}"),
                constant_ok,
                witness,
            );
            for n in 0..=3u32 {
                let ok = u_beta_property_check(&psi, n, cfg.max_degree)?;
                report.record(format!("transport identity at order {n}, sample {i}"), ok, None);
            }
        }
        // A twist-sensitive counterexample must be rejected.
        let bad = counterexample_character(ctx, cfg.max_degree)?;
        if let Some(bad) = bad {
            let samples = property_phi_samples(&bad, cfg.max_degree)?;
            let rejected = !has_property_phi(&bad, cfg.max_degree, &samples)?;
            report.record(
                "twist-sensitive polar part is detected",
                rejected,
                (!rejected).then(|| "the counterexample certified as rigid".to_string()),
            );
            let err = beta_function(&bad, cfg.max_degree).is_err();
            report.record(
                "flow strength refuses the counterexample",
                err,
                (!err).then(|| "no membership error was raised".to_string()),
            );
        }
        Ok(())
    };
    if let Err(e) = run(&mut report, &mut rng) {
        report.record("suite execution", false, Some(e.to_string()));
    }
    report
}

/// A purely polar character whose polar part moves under twists (double
/// pole on a degree-1 generator, no compensation at degree 2).  None if the
/// instance has no generator of degree 1.
fn counterexample_character<I: HopfInstance>(
    ctx: &Ctx<I>,
    max_degree: u64,
) -> Result<Option<HopfMap<I>>> {
    let gens1 = ctx.instance.generators_of_degree(1);
    let Some(g1) = gens1.first() else {
        return Ok(None);
    };
    let mut table = BTreeMap::new();
    table.insert(
        g1.clone(),
        LaurentSeries::monomial(-2, ratio(1, 1)),
    );
    for d in 2..=max_degree {
        for g in ctx.instance.generators_of_degree(d) {
            table.insert(g, LaurentSeries::monomial(-1, ratio(1, 1)));
        }
    }
    Ok(Some(HopfMap::character(ctx.clone(), "twist-sensitive", table)?))
}

/// Run a suite by name with the given configuration.  `check_characters`
/// controls the character-preservation checks in the factorization suite
/// (disable it on noncommutative instances).
pub fn run_suite<I: HopfInstance>(
    name: &str,
    ctx: &Ctx<I>,
    cfg: &SuiteConfig,
    check_characters: bool,
) -> Result<SuiteReport> {
    Ok(match name {
        "hopf-axioms" => run_hopf_axioms(ctx, cfg),
        "rota-baxter" => run_rota_baxter(ctx, cfg),
        "birkhoff-uniqueness" => run_birkhoff_uniqueness(ctx, cfg, check_characters),
        "bch-agreement" => run_bch_agreement(ctx, cfg),
        "rg-roundtrip" => run_rg_roundtrip(ctx, cfg),
        "beta-theorem" => run_beta_theorem(ctx, cfg),
        other => {
            return Err(crate::error::Error::Parse(format!(
                "unknown verification suite {other:?} (expected hopf-axioms, rota-baxter, birkhoff-uniqueness, bch-agreement, rg-roundtrip, or beta-theorem)"
            )))
        }
    })
}

pub const SUITE_NAMES: [&str; 6] = [
    "hopf-axioms",
    "rota-baxter",
    "birkhoff-uniqueness",
    "bch-agreement",
    "rg-roundtrip",
    "beta-theorem",
];
