//! Command-line front end: parse basis elements, characters, and graphs;
//! run coproducts, antipodes, factorizations, flow computations, and
//! verification suites; print deterministic text or JSON-lines output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 precision exhaustion.

use clap::{Args, Parser, Subcommand};
use hopfren::arith::{parse_int_basis, parse_monomial, Integers, SymmetricAlgebra};
use hopfren::birkhoff::{birkhoff_decompose, birkhoff_via_bch, BirkhoffResult};
use hopfren::convolution::{first_disagreement, maps_agree, parse_character_file};
use hopfren::error::Error;
use hopfren::graphs::{
    builtin_theory, fixtures, parse_graph_file, parse_theory_file, CanonGraph, FeynmanGraphs,
    Graph, GraphMonomial,
};
use hopfren::laurent::render_series;
use hopfren::linear::{render_element, render_tensor};
use hopfren::rational::render_rational;
use hopfren::rgflow::{beta_function, renorm_map, scattering_inverse};
use hopfren::trees::{parse_forest, CorruptedTrees, PlanarTrees, RootedTrees};
use hopfren::verify::{run_suite, SuiteConfig};
use hopfren::{Context, Ctx, HopfInstance, HopfMap, LaurentSeries, Result, DEFAULT_PRECISION};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hopfren",
    version,
    about = "Exact computer algebra for graded Hopf algebras, series-valued characters, \
             counterterm factorization, and grading-flow analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Basis family: trees | planar-trees | integers | symmetric |
    /// graphs:<phi3|phi4|qed|custom> | corrupted-fixture
    #[arg(long, default_value = "trees")]
    instance: String,

    /// Probe degree: equality of maps is certified on all basis elements up
    /// to this degree
    #[arg(long, default_value_t = 4)]
    degree: u64,

    /// Precision window for truncated series (defaults to at least the
    /// probe degree)
    #[arg(long)]
    precision: Option<i64>,

    /// Output format
    #[arg(long, default_value = "text", value_parser = ["text", "json-lines"])]
    format: String,

    /// Theory definition file for `graphs:custom`
    #[arg(long)]
    theory: Option<PathBuf>,

    /// Generator degrees for the symmetric instance, comma-separated
    #[arg(long, default_value = "1,1,2")]
    sym_degrees: String,
}

impl CommonOpts {
    fn json(&self) -> bool {
        self.format == "json-lines"
    }

    fn effective_precision(&self) -> Result<i64> {
        if self.degree < 1 {
            return Err(Error::Parse("the probe degree must be at least 1".into()));
        }
        let prec = self
            .precision
            .unwrap_or_else(|| DEFAULT_PRECISION.max(self.degree as i64));
        if prec < self.degree as i64 {
            return Err(Error::Parse(format!(
                "precision {prec} is below the probe degree {}; raise --precision",
                self.degree
            )));
        }
        Ok(prec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full coproduct of a basis element
    Coproduct {
        #[command(flatten)]
        common: CommonOpts,
        /// Basis element literal (e.g. "[0 [0]]", "e6", "x1^2 x2", "bubble")
        element: String,
    },
    /// Antipode of a basis element
    Antipode {
        #[command(flatten)]
        common: CommonOpts,
        element: String,
    },
    /// Factor a character into counterterm and finite parts at one element
    Birkhoff {
        #[command(flatten)]
        common: CommonOpts,
        /// Character definition file
        #[arg(long = "char")]
        char_file: PathBuf,
        /// recursive | bch | both
        #[arg(long, default_value = "recursive", value_parser = ["recursive", "bch", "both"])]
        method: String,
        element: String,
    },
    /// Apply the grading-flow map of a character to elements
    Rgmap {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long = "char")]
        char_file: PathBuf,
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Invert the grading-flow map of an infinitesimal character
    Scatter {
        #[command(flatten)]
        common: CommonOpts,
        /// Infinitesimal character definition file
        #[arg(long = "inf-char")]
        inf_char_file: PathBuf,
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Certify membership in the polar-rigid group and emit the constant
    /// flow strength
    Beta {
        #[command(flatten)]
        common: CommonOpts,
        /// Character file for the map to certify
        #[arg(long = "char")]
        char_file: Option<PathBuf>,
        /// Infinitesimal character file beta0; the certified map is then
        /// built as the inverse flow of beta0/z
        #[arg(long = "inf-char")]
        inf_char_file: Option<PathBuf>,
        elements: Vec<String>,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// hopf-axioms | rota-baxter | birkhoff-uniqueness | bch-agreement |
        /// rg-roundtrip | beta-theorem
        suite: String,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        samples: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Precision(_) | Error::ExpValuation(_) => 3,
        Error::NotInGroupPhi(_) | Error::PoleAtEvaluation => 1,
        _ => 2,
    }
}

// ---------------------------------------------------------------------------
// Instance dispatch
// ---------------------------------------------------------------------------

fn parse_sym_degrees(spec: &str) -> Result<SymmetricAlgebra> {
    let mut degrees = BTreeMap::new();
    for (i, piece) in spec.split(',').enumerate() {
        let d: u64 = piece
            .trim()
            .parse()
            .map_err(|err| Error::Parse(format!("bad generator degree {piece:?}: {err}")))?;
        if d < 1 {
            return Err(Error::Parse("generator degrees must be at least 1".into()));
        }
        degrees.insert(i as u32 + 1, d);
    }
    if degrees.is_empty() {
        return Err(Error::Parse("at least one generator degree is required".into()));
    }
    Ok(SymmetricAlgebra::new(degrees))
}

struct GraphSetup {
    instance: FeynmanGraphs,
    fixture_map: BTreeMap<String, Graph>,
}

fn build_graphs(theory_sel: &str, theory_file: Option<&Path>) -> Result<GraphSetup> {
    if theory_sel == "custom" {
        let path = theory_file.ok_or_else(|| {
            Error::Parse("graphs:custom needs --theory FILE".into())
        })?;
        let text = read_file(path)?;
        let theory = parse_theory_file(&text)?;
        return Ok(GraphSetup {
            instance: FeynmanGraphs::new(theory, Vec::new())?,
            fixture_map: BTreeMap::new(),
        });
    }
    let theory = builtin_theory(theory_sel)?;
    let fixture_map: BTreeMap<String, Graph> = fixtures(theory_sel)?.into_iter().collect();
    let seeds = fixture_map.values().cloned().collect();
    Ok(GraphSetup { instance: FeynmanGraphs::new(theory, seeds)?, fixture_map })
}

fn parse_graph_literal(
    ctx: &Ctx<FeynmanGraphs>,
    fixture_map: &BTreeMap<String, Graph>,
    input: &str,
) -> Result<GraphMonomial> {
    let s = input.trim();
    if s == "1" {
        return Ok(GraphMonomial::unit());
    }
    let mut factors = Vec::new();
    for part in s.split('*') {
        let name = part.trim();
        let graph = if let Some(g) = fixture_map.get(name) {
            g.clone()
        } else if name.contains('/') || name.contains('.') {
            let text = read_file(Path::new(name))?;
            let this = ctx.instance.theory.clone();
            let (_, g) = parse_graph_file(&text, |n| {
                if n == this.name {
                    Ok(this.clone())
                } else {
                    Err(Error::Parse(format!(
                        "graph file declares theory {n:?} but the instance uses {:?}",
                        this.name
                    )))
                }
            })?;
            g
        } else {
            return Err(Error::Parse(format!(
                "unknown graph {name:?}; expected one of [{}] or a graph file path",
                fixture_map.keys().cloned().collect::<Vec<_>>().join(", ")
            )));
        };
        factors.push(CanonGraph::new(&graph)?);
    }
    Ok(GraphMonomial::from_canon(factors))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Run the command body with the selected instance in scope.  `$ctx` binds
/// the evaluation context and `$parse` a basis-literal parser.
macro_rules! with_instance {
    ($common:expr, |$ctx:ident, $parse:ident| $body:block) => {{
        let prec = $common.effective_precision()?;
        let sel = $common.instance.as_str();
        if let Some(theory_sel) = sel.strip_prefix("graphs:") {
            let setup = build_graphs(theory_sel, $common.theory.as_deref())?;
            let $ctx = Context::new(setup.instance, prec);
            let fixture_map = setup.fixture_map;
            let $parse = |s: &str| parse_graph_literal(&$ctx, &fixture_map, s);
            $body
        } else {
            match sel {
                "trees" => {
                    let $ctx = Context::new(RootedTrees::undecorated(), prec);
                    let $parse = |s: &str| parse_forest(s);
                    $body
                }
                "planar-trees" => {
                    let $ctx = Context::new(PlanarTrees::undecorated(), prec);
                    let $parse = |s: &str| parse_forest(s);
                    $body
                }
                "corrupted-fixture" => {
                    let $ctx = Context::new(CorruptedTrees::new(), prec);
                    let $parse = |s: &str| parse_forest(s);
                    $body
                }
                "integers" => {
                    let $ctx = Context::new(Integers::new(64), prec);
                    let $parse = |s: &str| parse_int_basis(s);
                    $body
                }
                "symmetric" => {
                    let inst = parse_sym_degrees(&$common.sym_degrees)?;
                    let $ctx = Context::new(inst, prec);
                    let $parse = |s: &str| -> Result<hopfren::arith::Monomial> {
                        let m = parse_monomial(s)?;
                        $ctx.instance.check_monomial(&m)?;
                        Ok(m)
                    };
                    $body
                }
                other => Err(Error::Parse(format!(
                    "unknown instance {other:?}; expected trees, planar-trees, integers, \
                     symmetric, graphs:<theory>, or corrupted-fixture"
                ))),
            }
        }
    }};
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Coproduct { common, element } => cmd_coproduct(&common, &element),
        Command::Antipode { common, element } => cmd_antipode(&common, &element),
        Command::Birkhoff { common, char_file, method, element } => {
            cmd_birkhoff(&common, &char_file, &method, &element)
        }
        Command::Rgmap { common, char_file, elements } => {
            cmd_rgmap(&common, &char_file, &elements)
        }
        Command::Scatter { common, inf_char_file, elements } => {
            cmd_scatter(&common, &inf_char_file, &elements)
        }
        Command::Beta { common, char_file, inf_char_file, elements } => {
            cmd_beta(&common, char_file.as_deref(), inf_char_file.as_deref(), &elements)
        }
        Command::Verify { common, suite, seed, samples } => {
            cmd_verify(&common, &suite, seed, samples)
        }
    }
}

fn load_character<I, F>(path: &Path, ctx: &Ctx<I>, parse: &F) -> Result<HopfMap<I>>
where
    I: HopfInstance,
    F: Fn(&str) -> Result<I::Basis>,
{
    let text = read_file(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "character".into());
    parse_character_file(&text, ctx.clone(), name, parse)
}

fn cmd_coproduct(common: &CommonOpts, element: &str) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        let b = parse(element)?;
        let t = ctx.coproduct_basis(&b);
        if common.json() {
            for ((l, r), c) in t.terms() {
                println!(
                    "{}",
                    serde_json::json!({
                        "op": "coproduct",
                        "left": l.to_string(),
                        "right": r.to_string(),
                        "coeff": render_rational(c),
                    })
                );
            }
        } else {
            println!("{}", render_tensor(&t));
        }
        Ok(0)
    })
}

fn cmd_antipode(common: &CommonOpts, element: &str) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        let b = parse(element)?;
        let s = ctx.antipode_basis(&b);
        if common.json() {
            for (basis, c) in s.terms() {
                println!(
                    "{}",
                    serde_json::json!({
                        "op": "antipode",
                        "basis": basis.to_string(),
                        "coeff": render_rational(c),
                    })
                );
            }
        } else {
            println!("{}", render_element(&s));
        }
        Ok(0)
    })
}

fn cmd_birkhoff(common: &CommonOpts, char_file: &Path, method: &str, element: &str) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        let phi = load_character(char_file, &ctx, &parse)?;
        let b = parse(element)?;
        let print_result = |dec: &BirkhoffResult<_>, tag: &str| -> Result<()> {
            let minus = dec.phi_minus.apply(&b)?;
            let plus = dec.phi_plus.apply(&b)?;
            let value = plus.eval_at_zero()?;
            if common.json() {
                println!(
                    "{}",
                    serde_json::json!({
                        "op": "birkhoff",
                        "method": tag,
                        "element": b.to_string(),
                        "phi_minus": render_series(&minus),
                        "phi_plus": render_series(&plus),
                        "renormalized": render_rational(&value),
                    })
                );
            } else {
                println!("phi_minus({b}) = {}", render_series(&minus));
                println!("phi_plus({b}) = {}", render_series(&plus));
                println!("renormalized({b}) = {}", render_rational(&value));
            }
            Ok(())
        };
        match method {
            "recursive" => {
                print_result(&birkhoff_decompose(&phi)?, "recursive")?;
                Ok(0)
            }
            "bch" => {
                print_result(&birkhoff_via_bch(&phi, common.degree)?, "bch")?;
                Ok(0)
            }
            _ => {
                let rec = birkhoff_decompose(&phi)?;
                let bch = birkhoff_via_bch(&phi, common.degree)?;
                print_result(&rec, "recursive")?;
                print_result(&bch, "bch")?;
                let agree = maps_agree(&rec.phi_minus, &bch.phi_minus, common.degree)?
                    && maps_agree(&rec.phi_plus, &bch.phi_plus, common.degree)?;
                if common.json() {
                    println!(
                        "{}",
                        serde_json::json!({
                            "op": "birkhoff-agreement",
                            "degree": common.degree,
                            "agree": agree,
                        })
                    );
                } else {
                    println!("routes agree up to degree {}: {agree}", common.degree);
                }
                if agree {
                    Ok(0)
                } else {
                    let witness = first_disagreement(&rec.phi_minus, &bch.phi_minus, common.degree)?
                        .or(first_disagreement(&rec.phi_plus, &bch.phi_plus, common.degree)?);
                    if let Some(w) = witness {
                        eprintln!("first discrepancy at {w}");
                    }
                    Ok(1)
                }
            }
        }
    })
}

fn cmd_rgmap(common: &CommonOpts, char_file: &Path, elements: &[String]) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        let phi = load_character(char_file, &ctx, &parse)?;
        let gamma = renorm_map(&phi)?;
        for lit in elements {
            let b = parse(lit)?;
            let v = gamma.apply(&b)?;
            if common.json() {
                println!(
                    "{}",
                    serde_json::json!({
                        "op": "rgmap",
                        "element": b.to_string(),
                        "value": render_series(&v),
                    })
                );
            } else {
                println!("flow({b}) = {}", render_series(&v));
            }
        }
        Ok(0)
    })
}

fn cmd_scatter(common: &CommonOpts, inf_char_file: &Path, elements: &[String]) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        let gamma = load_character(inf_char_file, &ctx, &parse)?;
        let phi = scattering_inverse(&gamma)?;
        for lit in elements {
            let b = parse(lit)?;
            let v = phi.apply(&b)?;
            if common.json() {
                println!(
                    "{}",
                    serde_json::json!({
                        "op": "scatter",
                        "element": b.to_string(),
                        "value": render_series(&v),
                    })
                );
            } else {
                println!("inverse_flow({b}) = {}", render_series(&v));
            }
        }
        Ok(0)
    })
}

fn cmd_beta(
    common: &CommonOpts,
    char_file: Option<&Path>,
    inf_char_file: Option<&Path>,
    elements: &[String],
) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        let psi = match (char_file, inf_char_file) {
            (Some(path), None) => load_character(path, &ctx, &parse)?,
            (None, Some(path)) => {
                let beta0 = load_character(path, &ctx, &parse)?;
                let zinv = LaurentSeries::monomial(-1, hopfren::rational::rat(1));
                let gamma = hopfren::convolution::map_scale_series(&beta0, &zinv);
                scattering_inverse(&gamma)?
            }
            _ => {
                return Err(Error::Parse(
                    "beta needs exactly one of --char FILE or --inf-char FILE".into(),
                ))
            }
        };
        let beta = beta_function(&psi, common.degree)?;
        if common.json() {
            println!(
                "{}",
                serde_json::json!({
                    "op": "beta-membership",
                    "degree": common.degree,
                    "member": true,
                })
            );
        } else {
            println!("member of the polar-rigid group up to degree {}: true", common.degree);
        }
        let targets: Vec<_> = if elements.is_empty() {
            let mut out = Vec::new();
            for d in 1..=common.degree {
                out.extend(ctx.instance.generators_of_degree(d));
            }
            out
        } else {
            elements.iter().map(|lit| parse(lit)).collect::<Result<Vec<_>>>()?
        };
        for b in targets {
            let v = beta.apply(&b)?;
            if common.json() {
                println!(
                    "{}",
                    serde_json::json!({
                        "op": "beta",
                        "element": b.to_string(),
                        "value": render_series(&v),
                    })
                );
            } else {
                println!("beta({b}) = {}", render_series(&v));
            }
        }
        Ok(0)
    })
}

fn cmd_verify(common: &CommonOpts, suite: &str, seed: u64, samples: u32) -> Result<u8> {
    with_instance!(common, |ctx, parse| {
        // The parser is unused here but the macro provides it uniformly.
        let _ = &parse;
        let cfg = SuiteConfig { max_degree: common.degree, seed, samples };
        let check_characters = common.instance != "planar-trees";
        let report = run_suite(suite, &ctx, &cfg, check_characters)?;
        if common.json() {
            for check in &report.checks {
                println!(
                    "{}",
                    serde_json::json!({
                        "suite": report.suite,
                        "label": check.label,
                        "passed": check.passed,
                        "witness": check.witness,
                    })
                );
            }
        } else {
            for line in report.render_lines() {
                println!("{line}");
            }
        }
        if report.passed() {
            if !common.json() {
                println!("suite {}: pass", report.suite);
            }
            Ok(0)
        } else {
            if !common.json() {
                println!("suite {}: FAIL", report.suite);
            }
            Ok(1)
        }
    })
}
