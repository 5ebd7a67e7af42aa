//! `fibra`: command-line front end for the fibra-core workbench.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fibra_core::base_change::{enriques_criterion, quadratic_base_change, synthesize_anti_invariant};
use fibra_core::curve::Point;
use fibra_core::fiber_trace::{default_samples, verify_partenzaenr, verify_partenzares, SampledCurve};
use fibra_core::io::{model_from_json_str, rational_from_str, section_from_json_str, section_to_json, Bundle};
use fibra_core::parse::{parse_poly, parse_rational_function};
use fibra_core::sections::{self, Section};
use fibra_core::severi::{
    bisection_data, even_genus_witness, log_superabundance_report, reports_to_tsv, special_family_from_enriques_curve,
    special_family_from_surface_curve, SeveriReport,
};
use fibra_core::verify::{selftest, verify_paper, Grid, DEFAULT_SEED};
use fibra_core::weierstrass::Place;
use fibra_core::Error;
use num_rational::BigRational;
use serde_json::json;

const POLY_GRAMMAR: &str = "\
Polynomial literals:
  ratfunc := poly | \"(\" poly \")\" \"/\" \"(\" poly \")\"
  poly    := [\"+\"|\"-\"] term { (\"+\"|\"-\") term }
  term    := coeff [\"*\"] [mono] | mono
  mono    := var [\"^\" digits]
  coeff   := digits [\"/\" digits]
  var     := \"t\" | \"s\"
Whitespace is ignored; a literal uses one variable. Examples: 1, t^2, -t^4+1, 3/2*t - 1, (1)/(t^2)";

#[derive(Parser)]
#[command(name = "fibra", version, about = "Exact computations on rational elliptic surfaces, their K3 double covers and Enriques quotients", after_help = POLY_GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weierstrass model files.
    Surface {
        #[command(subcommand)]
        action: SurfaceAction,
    },
    /// Pull a k=1 model back along t = s^2 and write the K3 bundle.
    BaseChange {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build B and the anti-invariant section P = (xi(s^2), s*eta(s^2)) from xi, eta, A.
    #[command(after_help = POLY_GRAMMAR)]
    Synthesize {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Section arithmetic on the K3 model of a bundle. Operands: O, P, kP, or a section JSON file.
    Section {
        #[command(subcommand)]
        action: SectionAction,
    },
    /// Genus and dimension tables.
    Severi {
        #[command(subcommand)]
        action: SeveriAction,
    },
    /// Reproduction suite.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Pointwise involution identities on sampled fibers (JSON lines on stdout).
    Trace {
        #[command(subcommand)]
        action: TraceAction,
    },
    /// Randomized group-law and Riemann-Hurwitz checks, seeded by FIBRA_SEED.
    Selftest,
}

#[derive(Subcommand)]
enum SurfaceAction {
    /// Validate a model, classify its singular fibers and report generality.
    Check { file: PathBuf },
}

#[derive(Args)]
struct BundleArg {
    #[arg(long)]
    bundle: PathBuf,
}

#[derive(Subcommand)]
enum SectionAction {
    Add {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Neg {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    Mul {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Intersection number of two distinct sections (second defaults to O).
    Intersect {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true, default_value = "O")]
        b: String,
    },
}

#[derive(Args)]
struct Format {
    /// Emit JSON instead of an aligned TSV table.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum SeveriAction {
    /// Class, square, fiber degree and genus of the bisection for index m.
    Bisection {
        #[arg(short = 'm', allow_hyphen_values = true)]
        m: i64,
    },
    /// Logarithmic dimension count for the family built from an l-section of genus p.
    LogDim {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[command(flatten)]
        format: Format,
    },
    /// Special nonregular family from a curve on S (p l k) or on the Enriques surface (g).
    Family {
        #[arg(long, num_args = 3, value_names = ["P", "L", "K"], allow_hyphen_values = true, conflicts_with = "from_enriques", required_unless_present = "from_enriques")]
        from_surface: Option<Vec<i64>>,
        #[arg(long, value_name = "G", allow_hyphen_values = true)]
        from_enriques: Option<i64>,
        #[command(flatten)]
        format: Format,
    },
    /// Rational (n+1)-section giving a special family of even genus n.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        genus: i64,
    },
}

#[derive(Subcommand)]
enum VerifyAction {
    /// Run every reproduction check and print a summary table.
    Paper {
        #[arg(long, num_args = 3, value_names = ["PMAX", "LMAX", "MMAX"], allow_hyphen_values = true)]
        grid: Option<Vec<i64>>,
    },
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    /// Comma-separated rationals; defaults to 1,2,...,20.
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
}

#[derive(Subcommand)]
enum TraceAction {
    /// Translates of the pullback curve {O}.
    Partenzares(TraceArgs),
    /// Translates of the tau-closed curve {O, P}.
    Partenzaenr(TraceArgs),
}

/// Failure carried to `main`: a kind code and message for the error JSON.
struct Failure {
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            kind: "io".into(),
            message: format!("{}: {e}", path.display()),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            kind: "check-failed".into(),
            message: message.into(),
        }
    }
}

type CliResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            emit_error("usage", first);
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            emit_error(&f.kind, &f.message);
            ExitCode::from(if f.kind == "check-failed" { 1 } else { 2 })
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    let body = json!({ "error": kind, "message": message });
    let _ = writeln!(std::io::stderr(), "{body}");
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Surface {
            action: SurfaceAction::Check { file },
        } => surface_check(&file),
        Command::BaseChange { file, out } => base_change(&file, &out),
        Command::Synthesize { xi, eta, a, out } => synthesize(&xi, &eta, &a, out.as_deref()),
        Command::Section { action } => section(action),
        Command::Severi { action } => severi(action),
        Command::Verify {
            action: VerifyAction::Paper { grid },
        } => verify(grid),
        Command::Trace { action } => trace(action),
        Command::Selftest => {
            let seed = match std::env::var("FIBRA_SEED") {
                Ok(s) => s.trim().parse().map_err(|_| Failure {
                    kind: "usage".into(),
                    message: format!("FIBRA_SEED must be an unsigned integer, got {s:?}"),
                })?,
                Err(_) => DEFAULT_SEED,
            };
            let summary = selftest(seed);
            let out = format!("seed={seed}\n{}", summary.to_tsv());
            if summary.passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::check(summary.failure_lines().join("; ")))
            }
        }
    }
}

fn surface_check(file: &Path) -> CliResult {
    let model = model_from_json_str(&read(file)?)?;
    let mut out = format!(
        "k={}\nA = {}\nB = {}\ndiscriminant = {}\n",
        model.k(),
        model.a(),
        model.b(),
        model.discriminant()
    );
    for place in [Place::int(0), Place::Infinity] {
        out.push_str(&format!("fiber over {place}: {}\n", model.classify_fiber(&place)));
    }
    if model.k() == 1 {
        out.push_str(&model.is_general_rational_elliptic()?.to_string());
    } else {
        for g in model.singular_fibers() {
            out.push_str(&format!("  {}\tplaces={}\ttype={}\n", g.locus, g.places, g.fiber));
        }
    }
    Ok(out)
}

fn base_change(file: &Path, out: &Path) -> CliResult {
    let model = model_from_json_str(&read(file)?)?;
    let base = quadratic_base_change(&model)?;
    let up = base.upstairs();
    let summary = format!("upstairs k={}\nA = {}\nB = {}\n", up.k(), up.a().display_in("s"), up.b().display_in("s"));
    let bundle = Bundle {
        base,
        section: None,
        m: None,
    };
    write(out, &bundle.to_json_string())?;
    Ok(summary)
}

fn synthesize(xi: &str, eta: &str, a: &str, out: Option<&Path>) -> CliResult {
    let xi = parse_rational_function(xi)?;
    let eta = parse_rational_function(eta)?;
    let a = parse_poly(a)?;
    let syn = synthesize_anti_invariant(&xi, &eta, &a)?;
    let mut text = format!("B = {}\n", syn.b);
    if let Some((x, y)) = syn.section.coords() {
        text.push_str(&format!("P = ({}, {})\n", x.display_in("s"), y.display_in("s")));
    }
    text.push_str(&format!("{}\n", syn.criterion));
    let passes = syn.criterion.passes();
    if let Some(path) = out {
        let bundle = Bundle {
            base: syn.base.clone(),
            section: Some(syn.section.clone()),
            m: syn.m,
        };
        write(path, &bundle.to_json_string())?;
    }
    match syn.m {
        Some(m) if passes => {
            text.push_str(&format!("m={m}, criterion=pass\n"));
            Ok(text)
        }
        _ => {
            print!("{text}");
            Err(Failure::check(format!(
                "criterion=fail: {}",
                syn.criterion.failures.join("; ")
            )))
        }
    }
}

/// `O`, `P`, `kP` (k a signed integer) or a path to a section JSON file.
fn operand(bundle: &Bundle, text: &str) -> Result<Section, Failure> {
    let model = bundle.base.upstairs();
    let trimmed = text.trim();
    if trimmed == "O" {
        return Ok(Point::Zero);
    }
    if let Some(k) = trimmed.strip_suffix('P') {
        let p = bundle
            .section
            .as_ref()
            .ok_or_else(|| Failure::from(Error::Malformed("bundle has no section P".into())))?;
        let k: i64 = match k {
            "" | "+" => 1,
            "-" => -1,
            digits => digits
                .parse()
                .map_err(|_| Failure::from(Error::Parse(format!("bad multiple {text:?}"))))?,
        };
        return Ok(sections::mul_int(model, p, k));
    }
    let s = section_from_json_str(&read(Path::new(trimmed))?)?;
    sections::validate(model, &s)?;
    Ok(s)
}

fn load_bundle(path: &Path) -> Result<Bundle, Failure> {
    Ok(Bundle::from_json_str(&read(path)?)?)
}

fn section_json(s: &Section) -> String {
    let mut text = serde_json::to_string(&section_to_json(s)).expect("section serializes");
    text.push('\n');
    text
}

fn section(action: SectionAction) -> CliResult {
    match action {
        SectionAction::Add { bundle, a, b } => {
            let bundle = load_bundle(&bundle.bundle)?;
            let (p, q) = (operand(&bundle, &a)?, operand(&bundle, &b)?);
            Ok(section_json(&sections::add(bundle.base.upstairs(), &p, &q)))
        }
        SectionAction::Neg { bundle, a } => {
            let bundle = load_bundle(&bundle.bundle)?;
            let p = operand(&bundle, &a)?;
            Ok(section_json(&sections::neg(bundle.base.upstairs(), &p)))
        }
        SectionAction::Mul { bundle, a, n } => {
            let bundle = load_bundle(&bundle.bundle)?;
            let p = operand(&bundle, &a)?;
            Ok(section_json(&sections::mul_int(bundle.base.upstairs(), &p, n)))
        }
        SectionAction::Intersect { bundle, a, b } => {
            let bundle = load_bundle(&bundle.bundle)?;
            let (p, q) = (operand(&bundle, &a)?, operand(&bundle, &b)?);
            let n = sections::intersect_sections(bundle.base.upstairs(), &p, &q)?;
            Ok(format!("{n}\n"))
        }
    }
}

fn report_output(reports: &[SeveriReport], format: &Format) -> String {
    if format.json {
        let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
        s.push('\n');
        s
    } else {
        let mut s = reports_to_tsv(reports);
        for r in reports {
            for note in &r.notes {
                s.push_str(&format!("# {}: {note}\n", r.label));
            }
        }
        s
    }
}

fn severi(action: SeveriAction) -> CliResult {
    match action {
        SeveriAction::Bisection { m } => {
            let d = bisection_data(m)?;
            Ok(format!(
                "{}\npullback-square={} R.(-R)={}\n",
                d.row(),
                d.pullback_square,
                d.section_pair_intersection
            ))
        }
        SeveriAction::LogDim { p, l, format } => Ok(report_output(&[log_superabundance_report(p, l)?], &format)),
        SeveriAction::Family {
            from_surface,
            from_enriques,
            format,
        } => {
            let report = match (from_surface, from_enriques) {
                (Some(v), None) => special_family_from_surface_curve(v[0], v[1], v[2])?,
                (None, Some(g)) => special_family_from_enriques_curve(g)?,
                _ => unreachable!("clap enforces exactly one source"),
            };
            Ok(report_output(&[report], &format))
        }
        SeveriAction::Witness { genus } => {
            let w = even_genus_witness(genus)?;
            Ok(format!(
                "class={} p_a={} fiberdeg={} family-genus={}\n",
                w.class.coeff_string(),
                w.adjunction_genus,
                w.fiber_degree,
                w.family.genus
            ))
        }
    }
}

fn verify(grid: Option<Vec<i64>>) -> CliResult {
    let grid = match grid.as_deref() {
        None => Grid::default(),
        Some(&[pmax, lmax, mmax]) => {
            if pmax < 0 || lmax < 1 || mmax < 0 {
                return Err(Error::OutOfRange {
                    what: "grid".into(),
                    value: format!("{pmax} {lmax} {mmax}"),
                    range: "pmax >= 0, lmax >= 1, mmax >= 0".into(),
                }
                .into());
            }
            Grid { pmax, lmax, mmax }
        }
        Some(_) => unreachable!("clap takes exactly three values"),
    };
    let summary = verify_paper(grid);
    if summary.passed() {
        Ok(summary.to_tsv())
    } else {
        print!("{}", summary.to_tsv());
        Err(Failure::check(summary.failure_lines().join("; ")))
    }
}

fn parse_samples(text: Option<&str>) -> Result<Vec<BigRational>, Failure> {
    match text {
        None => Ok(default_samples()),
        Some(t) => t
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| rational_from_str(s).map_err(Failure::from))
            .collect(),
    }
}

fn trace(action: TraceAction) -> CliResult {
    let (args, tau_closed) = match action {
        TraceAction::Partenzares(a) => (a, false),
        TraceAction::Partenzaenr(a) => (a, true),
    };
    let bundle = load_bundle(&args.bundle)?;
    let p = bundle
        .section
        .clone()
        .ok_or_else(|| Failure::from(Error::Malformed("bundle has no section P".into())))?;
    let samples = parse_samples(args.samples.as_deref())?;
    let log = if tau_closed {
        let curve = SampledCurve::new("L", vec![Point::Zero, p.clone()]);
        verify_partenzaenr(&bundle.base, &curve, &p, args.k, &samples)?
    } else {
        let curve = SampledCurve::new("O", vec![Point::Zero]);
        verify_partenzares(&bundle.base, &curve, &p, args.k, &samples)?
    };
    let mut err = std::io::stderr();
    for notice in &log.notices {
        let _ = writeln!(err, "{notice}");
    }
    let failures = log.mismatches().count();
    let _ = writeln!(
        err,
        "checks={} failures={} skipped={} criterion: {}",
        log.records.len(),
        failures,
        log.notices.len(),
        enriques_criterion(&bundle.base, &p)
    );
    if failures == 0 {
        Ok(log.to_json_lines())
    } else {
        print!("{}", log.to_json_lines());
        Err(Failure::check(format!("{failures} pointwise mismatches")))
    }
}
