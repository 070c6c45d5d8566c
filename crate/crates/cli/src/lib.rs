//! Command-line front end. `run` is the whole program minus process I/O, so
//! tests can drive it directly.

pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use seifert_census::census::count_total;
use seifert_census::farey::leg_layer_slopes;
use seifert_census::format::{
    diagram_to_json, diagram_to_text, parse_diagram_json, parse_diagram_text, plumbing_to_json, plumbing_to_text,
};
use seifert_census::lattice::{
    cobordism_formula, count_cobordism_classes, count_stein_classes_pk, count_stein_classes_pkl, enumerate_tuples,
    stein_formula_pk, stein_formula_pkl, KnotParams, Variant,
};
use seifert_census::linalg::{determinant, signature, smith_normal_form};
use seifert_census::orbits::{count_orbits_with_cap, DEFAULT_CAP};
use seifert_census::seifert::{parse_seifert, LegData};
use seifert_census::spinc::{
    c_squared, chern_class_zero, d3_from_diagram, d_invariants_mp, d_plumbing, d_plumbing_graph,
    fillability_decomposition, initial_vectors, k_squared, mp_linking_matrix, spinc_distinct, xi_diagram,
    SurgeryDiagram,
};
use seifert_census::verify::{verify, VerifyOptions};
use seifert_census::{Error, Rational};

use report::Report;

pub const CAP_ENV: &str = "SEIFERT_CENSUS_CAP";

#[derive(Debug, Parser)]
#[command(name = "seifert-census", version, about = "Tight contact structures on M(-1; r1, r2, r3) and their invariants")]
pub struct Cli {
    /// Render aligned text instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Add truncated decimal approximations of rational outputs.
    #[arg(long, global = true)]
    pub decimal: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SeifertArgs {
    /// Euler number; only -1 is classified.
    #[arg(allow_hyphen_values = true)]
    pub e0: BigInt,
    #[arg(allow_hyphen_values = true)]
    pub r1: Rational,
    #[arg(allow_hyphen_values = true)]
    pub r2: Rational,
    #[arg(allow_hyphen_values = true)]
    pub r3: Rational,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SteinVariant {
    Pkl,
    Pk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CobVariant {
    Pklm,
    Pkm,
    Pkl,
    Pk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExportKind {
    Plumbing,
    Diagram,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum ExportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form census h, phi, psi and the total.
    Count(SeifertArgs),
    /// Sign-matrix orbit counts compared with the closed forms.
    Orbits(SeifertArgs),
    /// d-invariants and K^2 of the four initial vectors on M_p.
    Dinv {
        #[arg(long)]
        p: u64,
    },
    /// First homology of M_p from the linking matrix and the plumbing.
    Homology {
        #[arg(long)]
        p: u64,
    },
    /// d3 of the surgery diagram of Xi (or Xi' with --mirror), or of a diagram file.
    D3 {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        mirror: bool,
        /// Diagram in the text or JSON format (see docs/schema.md).
        #[arg(long, conflicts_with_all = ["p", "mirror"])]
        diagram: Option<PathBuf>,
    },
    /// Chern class values of Stein structures on the fillings.
    Lattice {
        #[arg(value_enum)]
        variant: SteinVariant,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: Option<u64>,
    },
    /// Spin^c classes on the cobordisms out of Xi and Xi'.
    Cobordism {
        #[arg(value_enum)]
        variant: CobVariant,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Search for a diagonal filling compatible with d3 = (2 - p)/4.
    Fillability {
        #[arg(long)]
        p: u64,
    },
    /// Layer slopes of a leg with coefficient r.
    Layers {
        #[arg(allow_hyphen_values = true)]
        r: Rational,
        /// Use the first-leg gluing (beta/alpha = r - 1).
        #[arg(long)]
        first: bool,
    },
    /// Full cross-validation sweep; exit 1 on any mismatch.
    Verify {
        #[arg(long)]
        max_denominator: u64,
        /// Worker threads (default: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 64)]
        max_p: u64,
    },
    /// Print the D-plumbing or the surgery diagram of M_p.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        mirror: bool,
        #[arg(long, value_enum, default_value_t = ExportFormat::Text)]
        format: ExportFormat,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation. `cap_env` is the value of `SEIFERT_CENSUS_CAP`, if set.
pub fn run<I, T>(args: I, cap_env: Option<&str>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let cap = match cap_env.map(|s| s.trim().parse::<u128>()) {
        None => DEFAULT_CAP,
        Some(Ok(c)) if c > 0 => c,
        Some(_) => return failure(2, format!("{CAP_ENV} must be a positive integer")),
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");

    let result = match cli.command {
        Command::Export { kind, p, mirror, format } => {
            return match export(kind, p, mirror, format) {
                Ok(s) => Output { code: 0, stdout: s, stderr: String::new() },
                Err(e) => error_output(e),
            }
        }
        cmd => dispatch(cmd, echo, cap),
    };
    match result {
        Ok(mut r) => {
            if cli.decimal {
                r.add_decimals();
            }
            let stdout = if cli.table { r.to_table() } else { r.to_json() + "\n" };
            let code = if r.passed() { 0 } else { 1 };
            let stderr = if code == 0 { String::new() } else { "one or more checks failed\n".into() };
            Output { code, stdout, stderr }
        }
        Err(e) => error_output(e),
    }
}

fn failure(code: i32, msg: String) -> Output {
    Output { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

/// Internal consistency failures count as mismatches; everything else is a
/// problem with the input.
fn error_output(e: Error) -> Output {
    let code = if matches!(e, Error::Invariant(_)) { 1 } else { 2 };
    failure(code, e.to_string())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

fn need(name: &str, v: Option<u64>, variant: &str) -> Result<u64, Error> {
    v.ok_or_else(|| Error::Validation(vec![format!("--{name} is required for {variant}")]))
}

fn dispatch(cmd: Command, echo: String, cap: u128) -> Result<Report, Error> {
    let mut r = Report::new(echo);
    match cmd {
        Command::Count(a) => {
            seifert_inputs(&mut r, &a);
            let m = parse_seifert(&a.e0, &a.r1, &a.r2, &a.r3)?;
            r.output("normalized", &m.r);
            r.output("reordered", m.reordered);
            r.output("census", count_total(&m));
        }
        Command::Orbits(a) => {
            seifert_inputs(&mut r, &a);
            let m = parse_seifert(&a.e0, &a.r1, &a.r2, &a.r3)?;
            let census = count_total(&m);
            let o = count_orbits_with_cap(&m, cap)?;
            r.output("normalized", &m.r);
            r.output("orbits", o);
            r.output("census", &census);
            r.check("mixed_orbits_equal_phi", census.phi == o.mixed.into());
            r.check("equal_orbits_equal_psi", census.psi == o.equal.into());
        }
        Command::Dinv { p } => {
            r.input("p", p);
            let qf = d_plumbing(p)?;
            let ks = initial_vectors(p)?;
            let sq = ks.iter().map(|k| k_squared(&qf, k)).collect::<Result<Vec<_>, _>>()?;
            let d = d_invariants_mp(p)?;
            let pi = p as i64;
            r.output("initial_vectors", &ks);
            r.output("k_squared", &sq);
            r.output("d_invariants", &d);
            r.check("k_squared_closed_form", sq == [q(-pi - 2, 1), q(-pi - 2, 1), q(-4, 1), q(0, 1)]);
            r.check("d_invariants_closed_form", d == [q(0, 1), q(0, 1), q(pi - 2, 4), q(pi + 2, 4)]);
            let mut distinct = true;
            for i in 0..4 {
                for j in i + 1..4 {
                    distinct &= spinc_distinct(&qf, &ks[i], &ks[j])?;
                }
            }
            r.check("pairwise_distinct_spinc", distinct);
            let zero = ks.iter().map(|k| chern_class_zero(&qf, k)).collect::<Result<Vec<_>, _>>()?;
            r.output("chern_class_zero", zero);
        }
        Command::Homology { p } => {
            r.input("p", p);
            for (name, m) in [("linking", mp_linking_matrix(p)?), ("plumbing", d_plumbing(p)?)] {
                let factors = smith_normal_form(&m).torsion_and_free(m.rows());
                r.output(&format!("{name}_group"), group_name(&factors));
                r.output(&format!("{name}_invariant_factors"), factors.iter().map(|x| x.to_string()).collect::<Vec<_>>());
                let det = determinant(&m)?;
                r.output(&format!("{name}_determinant"), det.to_string());
                let want = if p % 2 == 1 { "Z/4" } else { "Z/2 + Z/2" };
                r.check(&format!("{name}_group_expected"), group_name(&factors) == want);
            }
        }
        Command::D3 { p, mirror, diagram } => {
            let d = match (&diagram, p) {
                (Some(path), _) => {
                    r.input("diagram", path.display().to_string());
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Validation(vec![format!("cannot read {}: {e}", path.display())]))?;
                    read_diagram(&text)?
                }
                (None, Some(p)) => {
                    r.input("p", p);
                    r.input("mirror", mirror);
                    xi_diagram(p, mirror)?
                }
                (None, None) => return Err(Error::Validation(vec!["give --p or --diagram".into()])),
            };
            let d3 = d3_from_diagram(&d)?;
            r.output("c_squared", c_squared(&d)?);
            r.output("signature", signature(d.linking())?);
            r.output("b2", d.components().len());
            r.output("plus_surgeries", d.plus_count());
            r.output("d3", &d3);
            if let (None, Some(p)) = (&diagram, p) {
                r.check("d3_closed_form", d3 == q(2 - p as i64, 4));
            }
        }
        Command::Lattice { variant, p, k, l } => {
            r.input("p", p);
            r.input("k", k);
            let (n, f) = match variant {
                SteinVariant::Pkl => {
                    let l = need("l", l, "pkl")?;
                    r.input("l", l);
                    (count_stein_classes_pkl(p, k, l)?, stein_formula_pkl(p, k, l))
                }
                SteinVariant::Pk => (count_stein_classes_pk(p, k)?, stein_formula_pk(p, k)),
            };
            r.input("variant", format!("{variant:?}").to_lowercase());
            r.output("distinct_values", n);
            r.output("formula", f);
            r.check("brute_force_equals_formula", n == f);
        }
        Command::Cobordism { variant, p, k, l, m } => {
            let v = match variant {
                CobVariant::Pklm => Variant::Pklm,
                CobVariant::Pkm => Variant::Pkm,
                CobVariant::Pkl => Variant::Pkl,
                CobVariant::Pk => Variant::Pk,
            };
            let l = if v.has_y() { need("l", l, &v.to_string())? } else { l.unwrap_or(2) };
            let m = if v.has_z() { need("m", m, &v.to_string())? } else { m.unwrap_or(2) };
            let params = KnotParams { k, l, m };
            r.input("variant", v.to_string());
            r.input("p", p);
            r.input("k", k);
            if v.has_y() {
                r.input("l", l);
            }
            if v.has_z() {
                r.input("m", m);
            }
            let n = count_cobordism_classes(p, v, params)?;
            let f = cobordism_formula(v, params);
            r.output("tuples", enumerate_tuples(v, params).len());
            r.output("classes", n);
            r.output("formula", f);
            r.check("classes_equal_formula", n == f);
        }
        Command::Fillability { p } => {
            r.input("p", p);
            let dec = fillability_decomposition(p)?;
            r.output("decomposition", &dec);
            r.output("obstruction", dec.is_none());
            r.check("obstruction_iff_p_minus_2_not_divisible_by_8", dec.is_none() == ((p - 2) % 8 != 0));
        }
        Command::Layers { r: coef, first } => {
            r.input("r", &coef);
            r.input("first", first);
            if coef <= Rational::zero() || coef >= Rational::one() {
                return Err(Error::Validation(vec![format!("r must lie in (0, 1), got {coef}")]));
            }
            let leg = LegData::new(&coef, first)?;
            let ls = leg_layer_slopes(&leg.expansion);
            r.output("gluing", &leg.gluing);
            r.output("expansion", &leg.expansion);
            r.output("layer_bounds", leg.layer_bounds.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            r.output("u_slope", ls.u_slope.to_string());
            r.output("layers", &ls.layers);
            r.check("u_slope_equals_gluing", ls.u_slope == leg.u_slope());
        }
        Command::Verify { max_denominator, jobs, max_p } => {
            r.input("max_denominator", max_denominator);
            r.input("jobs", jobs);
            r.input("max_p", max_p);
            let opts = VerifyOptions { max_denominator, jobs, cap, max_p };
            let rep = verify(&opts)?;
            r.output("total_checks", rep.total_checks());
            r.output("checks", &rep.checks);
            r.output("mismatches", &rep.mismatches);
            r.output("skipped", &rep.skipped);
            r.check("no_mismatches", rep.mismatches.is_empty());
            r.check("none_skipped", rep.skipped.is_empty());
        }
        Command::Export { .. } => unreachable!("handled before dispatch"),
    }
    Ok(r)
}

fn seifert_inputs(r: &mut Report, a: &SeifertArgs) {
    r.input("e0", a.e0.to_string());
    r.input("r", [&a.r1, &a.r2, &a.r3]);
}

fn group_name(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors.iter().map(|d| if d == &BigInt::from(0) { "Z".to_string() } else { format!("Z/{d}") }).collect::<Vec<_>>().join(" + ")
}

fn read_diagram(text: &str) -> Result<SurgeryDiagram, Error> {
    if text.trim_start().starts_with('{') {
        parse_diagram_json(text)
    } else {
        parse_diagram_text(text)
    }
}

fn export(kind: ExportKind, p: u64, mirror: bool, format: ExportFormat) -> Result<String, Error> {
    Ok(match (kind, format) {
        (ExportKind::Plumbing, ExportFormat::Text) => plumbing_to_text(&d_plumbing_graph(p)?),
        (ExportKind::Plumbing, ExportFormat::Json) => plumbing_to_json(&d_plumbing_graph(p)?) + "\n",
        (ExportKind::Diagram, ExportFormat::Text) => diagram_to_text(&xi_diagram(p, mirror)?),
        (ExportKind::Diagram, ExportFormat::Json) => diagram_to_json(&xi_diagram(p, mirror)?) + "\n",
    })
}
