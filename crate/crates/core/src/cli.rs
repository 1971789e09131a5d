//! Command dispatcher for the `dko` binary.
//!
//! `run_args` never exits the process: it returns what to print and the exit
//! status, so tests can drive every subcommand in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::adams::{
    adams_coefficient, adams_newton_recursion, adams_root_model, divergence_table, localized_extension_check, AdamsError,
    FormalBundle, RecursionVariant,
};
use crate::ahss::{self, render, AhssError, Convergence, Variant};
use crate::exact::{DegreeRule, Field, GeneratorScheme, GradedPolynomial, Monomial, Rational};
use crate::genera::{a_hat, evaluate_genus, pontrjagin_character, GenusError, Pairing};
use crate::integrality::{admissible_pairs, degree8_criterion, ph_denominator, IntegralityError, PairReading};
use crate::ko::{bott_space_table, flat_coefficient_group, ko_coefficient_group, KoElement, BOTT_SPACES};
use crate::presentation::{builtin, load_presentation, CohomologyPresentation, PresentationError};
use crate::steenrod::{sw_from_wu, wu_classes, SteenrodError};

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Unsupported(_) => "unsupported",
            CliError::Internal(_) => "internal",
        }
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::Unsupported(_) => CliError::Unsupported(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AhssError> for CliError {
    fn from(e: AhssError) -> Self {
        match e {
            AhssError::Presentation(p) => p.into(),
            AhssError::Validation(_) => CliError::Validation(e.to_string()),
            AhssError::Invariant(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<IntegralityError> for CliError {
    fn from(e: IntegralityError) -> Self {
        match e {
            IntegralityError::Validation(_) => CliError::Validation(e.to_string()),
            IntegralityError::Ahss(a) => a.into(),
        }
    }
}

impl From<AdamsError> for CliError {
    fn from(e: AdamsError) -> Self {
        match e {
            AdamsError::Validation(_) => CliError::Validation(e.to_string()),
            AdamsError::Unsupported(_) => CliError::Unsupported(e.to_string()),
        }
    }
}

impl From<SteenrodError> for CliError {
    fn from(e: SteenrodError) -> Self {
        match e {
            SteenrodError::Unsupported(_) | SteenrodError::MissingPairing(..) => CliError::Unsupported(e.to_string()),
            SteenrodError::Degenerate(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GenusError> for CliError {
    fn from(e: GenusError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dko", version, about = "Exact computations in real and differential KO-theory")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient groups of KO, K and flat KO, or the Bott-space table
    Coeff(CoeffArgs),
    /// Pontrjagin character expansion in Pontrjagin classes
    Ph(PhArgs),
    /// A-hat genus, its inverse, or its value on a total Pontrjagin class
    Genus(GenusArgs),
    /// Atiyah-Hirzebruch pages and the differential log
    Ahss(AhssArgs),
    /// KO^0 of a sphere, topological or differential
    Sphere(SphereArgs),
    /// Denominators of the Pontrjagin character
    Denominator(DenominatorArgs),
    /// Adams operations on coefficients and on formal bundles
    Adams(AdamsArgs),
    /// Wu classes and Stiefel-Whitney classes of a closed manifold
    Wu(SpaceArgs),
    /// Run the identity suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffKind {
    Ko,
    K,
    Flat,
    Bott,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long, value_enum, default_value_t = CoeffKind::Ko)]
    pub kind: CoeffKind,
    /// Inclusive degree range a..b
    #[arg(long, default_value = "-8..8", allow_hyphen_values = true)]
    pub range: String,
    /// Normalise a KO element instead, e.g. "2*alpha^2 + eta^3"
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Debug, Args)]
pub struct PhArgs {
    #[arg(long, default_value_t = 12)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub rank: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenusKind {
    AHat,
    AHatInverse,
}

#[derive(Debug, Args)]
pub struct GenusArgs {
    #[arg(long, value_enum, default_value_t = GenusKind::AHat)]
    pub kind: GenusKind,
    #[arg(long, default_value_t = 8)]
    pub max_degree: u32,
    /// Total Pontrjagin class in degree-4 generators x1, x2, ..., e.g. "1 + 2*x1 + 7*x1^2"
    #[arg(long)]
    pub total: Option<String>,
    /// Values on top monomials, e.g. "x1^2=1"; repeatable
    #[arg(long = "pairing")]
    pub pairing: Vec<String>,
}

#[derive(Debug, Args, Clone)]
pub struct SpaceArgs {
    /// Built-in space: point, S<n>, RP<n>, CP<n>
    #[arg(long, conflicts_with = "file")]
    pub space: Option<String>,
    /// Presentation file (JSON)
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Use the reduced theory (basepoint removed)
    #[arg(long)]
    pub reduced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Topological,
    Differential,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Topological => Variant::Topological,
            VariantArg::Differential => Variant::Differential,
        }
    }
}

#[derive(Debug, Args)]
pub struct AhssArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_enum, default_value_t = VariantArg::Topological)]
    pub variant: VariantArg,
    /// Inclusive row range a..b of t
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
    /// Assemble this total degree from E_infinity
    #[arg(long, allow_hyphen_values = true)]
    pub degree: Option<i64>,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Topological)]
    pub variant: VariantArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Proof,
    Statement,
}

#[derive(Debug, Args)]
pub struct DenominatorArgs {
    /// Inclusive range a..b of k
    #[arg(long, default_value = "1..12")]
    pub k_range: String,
    /// Count admissible pairs in this degree for --space/--file instead
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long, value_enum, default_value_t = ReadingArg::Proof)]
    pub reading: ReadingArg,
    /// Report whether integral degree-8 periods suffice on --space/--file
    #[arg(long)]
    pub degree8: bool,
    #[command(flatten)]
    pub space: SpaceArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdamsModel {
    Root,
    Newton,
    Paper,
}

#[derive(Debug, Args)]
pub struct AdamsArgs {
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub r: i64,
    /// KO coefficient element, e.g. "alpha*beta"
    #[arg(long, conflicts_with = "roots")]
    pub element: Option<String>,
    /// Roots of a formal bundle, e.g. "x, y, x+y"
    #[arg(long, allow_hyphen_values = true)]
    pub roots: Option<String>,
    #[arg(long, value_enum, default_value_t = AdamsModel::Root)]
    pub model: AdamsModel,
    /// Print the recursion-against-roots table up to r and this rank
    #[arg(long)]
    pub table: Option<usize>,
    /// Check psi^r(beta^k x) = r^{4k} beta^k psi^r(x) for this k
    #[arg(long)]
    pub extension: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Thom,
    AHat,
    Bott,
    Newton,
    Adams,
    Cartan,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

/// What a command produced, before formatting.
#[derive(Debug, Default)]
pub struct Report {
    pub text: String,
    pub table: Option<Table>,
    pub json: Value,
    /// printed in full, but the run counts as unsupported
    pub unsupported: Option<String>,
    /// printed in full, but the run counts as an invariant failure
    pub failed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Table {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in memory");
        for r in &self.rows {
            w.write_record(r).expect("in memory");
        }
        String::from_utf8(w.into_inner().expect("in memory")).expect("utf8")
    }

    /// Left-aligned columns separated by two spaces.
    pub fn text(&self) -> String {
        let n = self.headers.len();
        let mut width = vec![0; n];
        for r in std::iter::once(&self.headers).chain(&self.rows) {
            for (i, c) in r.iter().enumerate() {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let mut out = String::new();
        for r in std::iter::once(&self.headers).chain(&self.rows) {
            let line: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
            writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
        }
        out
    }
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn diagnostic(format: Format, e: &CliError) -> String {
    match format {
        Format::Json => serde_json::to_string(&json!({"error": e.kind(), "message": e.to_string()})).unwrap() + "\n",
        _ => format!("error[{}]: {e}\n", e.kind()),
    }
}

/// Parses and runs one command line (the first item is the program name).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => return Outcome { code: e.code(), stdout: String::new(), stderr: diagnostic(format, &e) },
    };
    let stdout = match format {
        Format::Text => report.text.clone(),
        Format::Json => serde_json::to_string_pretty(&report.json).expect("serialisable") + "\n",
        Format::Csv => match &report.table {
            Some(t) => t.csv(),
            None => {
                let e = CliError::Validation("this subcommand has no CSV form".into());
                return Outcome { code: e.code(), stdout: String::new(), stderr: diagnostic(format, &e) };
            }
        },
    };
    let (code, stderr) = if let Some(why) = &report.failed {
        let e = CliError::Internal(why.clone());
        (e.code(), diagnostic(format, &e))
    } else if let Some(why) = &report.unsupported {
        let e = CliError::Unsupported(why.clone());
        (e.code(), diagnostic(format, &e))
    } else {
        (EXIT_OK, String::new())
    };
    Outcome { code, stdout, stderr }
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Coeff(a) => coeff(a),
        Command::Ph(a) => ph(a),
        Command::Genus(a) => genus(a),
        Command::Ahss(a) => ahss_cmd(a),
        Command::Sphere(a) => sphere(a),
        Command::Denominator(a) => denominator(a),
        Command::Adams(a) => adams(a),
        Command::Wu(a) => wu(a),
        Command::Verify(a) => verify(a),
    }
}

/// "a..b", inclusive.
pub fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Validation(format!("expected a range a..b, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(CliError::Validation(format!("empty range {text:?}")));
    }
    Ok((a, b))
}

fn load_space(a: &SpaceArgs) -> Result<CohomologyPresentation, CliError> {
    let p = match (&a.space, &a.file) {
        (Some(name), None) => builtin(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
            load_presentation(&text)?
        }
        _ => return Err(CliError::Validation("give exactly one of --space or --file".into())),
    };
    Ok(if a.reduced { p.reduced()? } else { p })
}

fn coeff(a: &CoeffArgs) -> Result<Report, CliError> {
    if let Some(text) = &a.element {
        let e = KoElement::parse(text).map_err(|e| CliError::Validation(e.to_string()))?;
        let mut table = Table::new(&["basis", "degree", "coefficient"]);
        for (b, c) in e.terms() {
            table.push(vec![b.label(), b.degree().to_string(), c.to_string()]);
        }
        return Ok(Report {
            text: format!("{e}\n"),
            json: json!({"element": e.to_string(), "integral": e.is_integral(), "terms": table.rows}),
            table: Some(table),
            ..Report::default()
        });
    }
    if a.kind == CoeffKind::Bott {
        let mut headers = vec!["n"];
        headers.extend(BOTT_SPACES.iter().map(|(s, _)| *s));
        let mut table = Table::new(&headers);
        for (n, row) in bott_space_table() {
            let mut r = vec![n.to_string()];
            r.extend(row.iter().map(|g| g.to_string()));
            table.push(r);
        }
        let text = format!("Homotopy groups pi_n of the Bott spaces, n mod 8\n{}", table.text());
        let json = json!({"kind": "bott", "columns": headers, "rows": table.rows});
        return Ok(Report { text, json, table: Some(table), ..Report::default() });
    }
    let (lo, hi) = parse_range(&a.range)?;
    if hi - lo > 4096 {
        return Err(CliError::Validation("range is limited to 4096 degrees".into()));
    }
    let (title, head) = match a.kind {
        CoeffKind::Ko => ("KO^i(pt)", "KO^i"),
        CoeffKind::K => ("K^i(pt)", "K^i"),
        CoeffKind::Flat => ("flat KO^{-i}(pt)", "flat KO^{-i}"),
        CoeffKind::Bott => unreachable!(),
    };
    let mut table = Table::new(&["i", head, "generator"]);
    let mut entries = Vec::new();
    for i in lo..=hi {
        let g = match a.kind {
            CoeffKind::Ko => ko_coefficient_group(i),
            CoeffKind::Flat => flat_coefficient_group(i),
            _ => {
                if i % 2 == 0 {
                    crate::group::GroupDescriptor::integers().labelled(match -i / 2 {
                        0 => "1".to_string(),
                        1 => "u".to_string(),
                        k => format!("u^{k}"),
                    })
                } else {
                    crate::group::GroupDescriptor::zero()
                }
            }
        };
        let mut bare = g.clone();
        bare.labels.clear();
        table.push(vec![i.to_string(), bare.to_string(), g.labels.join(" + ")]);
        entries.push(json!({"i": i, "group": g}));
    }
    let text = format!("{title} for {lo} <= i <= {hi}\n{}", table.text());
    Ok(Report { text, json: json!({"kind": head, "entries": entries}), table: Some(table), ..Report::default() })
}

fn check_max_degree(d: u32) -> Result<(), CliError> {
    if d == 0 || !d.is_multiple_of(4) || d > 96 {
        return Err(CliError::Validation(format!("--max-degree must be a positive multiple of 4 up to 96, got {d}")));
    }
    Ok(())
}

fn polynomial_report(title: &str, poly: &GradedPolynomial, max_degree: u32) -> Report {
    let mut table = Table::new(&["degree", "component"]);
    for d in (0..=max_degree).step_by(4) {
        let c = poly.component(d);
        if !c.is_zero() {
            table.push(vec![d.to_string(), c.to_string()]);
        }
    }
    let mut text = format!("{title}\n");
    for r in &table.rows {
        writeln!(text, "  deg {:>2}: {}", r[0], r[1]).unwrap();
    }
    let json = json!({
        "title": title,
        "total": poly.to_string(),
        "components": table.rows.iter().map(|r| json!({"degree": r[0].parse::<u32>().unwrap(), "polynomial": r[1]})).collect::<Vec<_>>(),
    });
    Report { text, json, table: Some(table), ..Report::default() }
}

fn ph(a: &PhArgs) -> Result<Report, CliError> {
    check_max_degree(a.max_degree)?;
    let poly = pontrjagin_character(a.max_degree, a.rank);
    Ok(polynomial_report(&format!("Pontrjagin character, rank {}, through degree {}", a.rank, a.max_degree), &poly, a.max_degree))
}

fn genus(a: &GenusArgs) -> Result<Report, CliError> {
    check_max_degree(a.max_degree)?;
    let ahat = a_hat(a.max_degree);
    let (title, poly) = match a.kind {
        GenusKind::AHat => ("A-hat", ahat),
        GenusKind::AHatInverse => ("inverse of A-hat", ahat.invert_unit(a.max_degree).map_err(|e| CliError::Internal(e.to_string()))?),
    };
    let Some(total) = &a.total else {
        return Ok(polynomial_report(&format!("{title} through degree {}", a.max_degree), &poly, a.max_degree));
    };
    let x = GeneratorScheme::single("x", DegreeRule::Constant(4), Field::Rational);
    let total_p = GradedPolynomial::parse(&x, total).map_err(|e| CliError::Validation(format!("--total: {e}")))?;
    let mut values = std::collections::BTreeMap::new();
    for item in &a.pairing {
        let (m, v) = item.split_once('=').ok_or_else(|| CliError::Validation(format!("--pairing expects monomial=value, got {item:?}")))?;
        let mono = GradedPolynomial::parse(&x, m).map_err(|e| CliError::Validation(format!("--pairing: {e}")))?;
        let mut terms = mono.terms();
        let (Some((_, mono, c)), None) = (terms.next(), terms.next()) else {
            return Err(CliError::Validation(format!("--pairing needs a single monomial, got {m:?}")));
        };
        if !c.is_one() {
            return Err(CliError::Validation(format!("--pairing monomial must have coefficient 1, got {m:?}")));
        }
        let v: Rational = v.trim().parse().map_err(|_| CliError::Validation(format!("--pairing value {v:?} is not a rational")))?;
        values.insert(mono.clone(), v);
    }
    let top = values.keys().map(|m: &Monomial| m.degree(&x)).max().ok_or_else(|| CliError::Validation("--total needs at least one --pairing".into()))?;
    if values.keys().any(|m| m.degree(&x) != top) {
        return Err(CliError::Validation("all paired monomials must have the same degree".into()));
    }
    let value = evaluate_genus(&poly, &total_p, &Pairing { top_degree: top, values })?;
    let text = format!("{title} on p = {total_p}: {value}\n");
    let mut table = Table::new(&["genus", "total", "value"]);
    table.push(vec![title.into(), total_p.to_string(), value.to_string()]);
    Ok(Report { text, json: json!({"genus": title, "total": total_p.to_string(), "top_degree": top, "value": value}), table: Some(table), ..Report::default() })
}

fn ahss_cmd(a: &AhssArgs) -> Result<Report, CliError> {
    let p = load_space(&a.space)?;
    let variant: Variant = a.variant.into();
    let dim = p.top_degree();
    let rows = match (&a.rows, a.degree) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(n)) => ahss::window_for_degree(dim, n),
        (None, None) => ahss::default_rows(variant, dim),
    };
    if rows.1 - rows.0 > 512 {
        return Err(CliError::Validation("row window is limited to 512 rows".into()));
    }
    let ss = ahss::compute(&p, variant, rows)?;
    let mut table = Table::new(&["r", "source_s", "source_t", "target_s", "target_t", "rule", "status", "reason"]);
    let mut unsupported = 0;
    for d in ss.records() {
        let reason = match &d.status {
            ahss::Status::ZeroByAlgebra { reason } | ahss::Status::Unsupported { reason } => reason.clone(),
            _ => String::new(),
        };
        unsupported += d.status.is_unsupported() as usize;
        table.push(vec![
            d.r.to_string(),
            d.source.0.to_string(),
            d.source.1.to_string(),
            d.target.0.to_string(),
            d.target.1.to_string(),
            d.rule.clone(),
            d.status.tag().into(),
            reason,
        ]);
    }
    let mut text = render::sequence_text(&ss);
    let mut json = serde_json::to_value(&ss).expect("serialisable");
    let mut blocked = None;
    if let Some(n) = a.degree {
        let c = ahss::converge(&ss, n);
        match &c {
            Convergence::Assembled { group, .. } => writeln!(text, "total degree {n}: {group}").unwrap(),
            Convergence::ExtensionUnresolved { pieces, .. } => {
                let parts: Vec<String> = pieces.iter().map(|p| format!("{} at ({},{})", p.group, p.s, p.t)).collect();
                writeln!(text, "total degree {n}: extension unresolved between {}", parts.join(", ")).unwrap();
                blocked = Some(format!("total degree {n} has an extension problem the pages cannot settle"));
            }
            Convergence::Blocked { blockers, .. } => {
                writeln!(text, "total degree {n}: blocked by {}", blockers.join("; ")).unwrap();
                blocked = Some(format!("total degree {n} cannot be assembled"));
            }
        }
        json["convergence"] = serde_json::to_value(&c).expect("serialisable");
    }
    let unsupported = blocked.or((unsupported > 0).then(|| format!("{unsupported} differential(s) could not be evaluated")));
    Ok(Report { text, json, table: Some(table), unsupported, failed: None })
}

fn sphere(a: &SphereArgs) -> Result<Report, CliError> {
    match a.variant {
        VariantArg::Topological => {
            let g = ahss::ko_of_sphere(a.n)?;
            let text = format!("reduced KO^0(S^{}) = {g}\n", a.n);
            let mut table = Table::new(&["n", "group"]);
            table.push(vec![a.n.to_string(), g.to_string()]);
            Ok(Report { text, json: json!({"n": a.n, "variant": "topological", "group": g}), table: Some(table), ..Report::default() })
        }
        VariantArg::Differential => {
            let s = ahss::ko_hat_of_sphere(a.n)?;
            let mut text = format!("reduced differential KO^0(S^{}) = {}\n", a.n, s.render());
            match s.multiplier {
                Some(m) => writeln!(text, "  volume lattice multiplier: {m}").unwrap(),
                None => writeln!(text, "  no volume lattice").unwrap(),
            }
            let deg: Vec<String> = s.exact_summands.iter().map(|d| d.to_string()).collect();
            writeln!(text, "  exact summands in degrees: {}", if deg.is_empty() { "none".into() } else { deg.join(", ") }).unwrap();
            writeln!(text, "  flat part: {}", s.torsion).unwrap();
            if s.conservative {
                writeln!(text, "  conservative: finite classes reached the torus before the volume condition").unwrap();
            }
            let mut table = Table::new(&["n", "multiplier", "exact_summands", "torsion", "conservative"]);
            table.push(vec![
                a.n.to_string(),
                s.multiplier.map(|m| m.to_string()).unwrap_or_default(),
                deg.join(" "),
                s.torsion.to_string(),
                s.conservative.to_string(),
            ]);
            let mut json = serde_json::to_value(&s).expect("serialisable");
            json["variant"] = json!("differential");
            json["rendered"] = json!(s.render());
            Ok(Report { text, json, table: Some(table), ..Report::default() })
        }
    }
}

fn denominator(a: &DenominatorArgs) -> Result<Report, CliError> {
    if a.degree8 {
        let p = load_space(&a.space)?;
        let v = degree8_criterion(&p)?;
        let text = match &v {
            crate::integrality::Degree8Verdict::Applies => {
                format!("{}: a degree-8 form is a character component iff its periods are integral\n", p.name)
            }
            crate::integrality::Degree8Verdict::Inapplicable { failing } => {
                format!("{}: criterion does not apply; failing: {}\n", p.name, failing.join("; "))
            }
        };
        let mut json = serde_json::to_value(&v).expect("serialisable");
        json["space"] = json!(p.name);
        return Ok(Report { text, json, ..Report::default() });
    }
    if let Some(ell) = a.ell {
        let p = load_space(&a.space)?;
        let reading = match a.reading {
            ReadingArg::Proof => PairReading::Proof,
            ReadingArg::Statement => PairReading::Statement,
        };
        let r = admissible_pairs(ell, a.prime, &p, reading)?;
        let mut table = Table::new(&["r", "k", "verdict", "detail"]);
        for c in &r.pairs {
            let (v, d) = match &c.verdict {
                crate::integrality::PairVerdict::Admissible { class } => ("admissible", format!("{class:?}")),
                crate::integrality::PairVerdict::NotAdmissible { reason } => ("not admissible", reason.clone()),
                crate::integrality::PairVerdict::Undetermined { reason } => ("undetermined", reason.clone()),
            };
            table.push(vec![c.r.to_string(), c.k.to_string(), v.into(), d]);
        }
        let text = format!(
            "{}: degree {ell}, p = {}: s = {}{}, denominator {}\n{}",
            p.name,
            a.prime,
            r.s,
            if r.incomplete { " (lower bound)" } else { "" },
            r.denominator,
            table.text()
        );
        let unsupported = r.incomplete.then(|| "some pairs could not be decided from the presentation".to_string());
        return Ok(Report { text, json: serde_json::to_value(&r).expect("serialisable"), table: Some(table), unsupported, failed: None });
    }
    let (lo, hi) = parse_range(&a.k_range)?;
    if lo < 1 || hi > 200 {
        return Err(CliError::Validation("--k-range must lie within 1..200".into()));
    }
    let mut table = Table::new(&["k", "degree", "odd_part", "factored", "two_exponent"]);
    let mut reports = Vec::new();
    for k in lo..=hi {
        let r = ph_denominator(k as u32)?;
        table.push(vec![k.to_string(), (4 * k).to_string(), r.odd_part.to_string(), r.odd_factored.clone(), r.two_exponent.to_string()]);
        reports.push(r);
    }
    let text = format!("Odd part of the Pontrjagin character denominator (powers of 2 absorbed)\n{}", table.text());
    Ok(Report { text, json: json!({"rows": reports}), table: Some(table), ..Report::default() })
}

fn adams(a: &AdamsArgs) -> Result<Report, CliError> {
    if let Some(rank) = a.table {
        if !(1..=8).contains(&rank) || !(1..=10).contains(&a.r) {
            return Err(CliError::Validation("--table needs rank in 1..8 and --r in 1..10".into()));
        }
        let rows = divergence_table(a.r, rank);
        let mut table = Table::new(&["r", "rank", "newton_agrees", "paper_agrees", "paper_minus_roots"]);
        for row in &rows {
            table.push(vec![row.r.to_string(), row.rank.to_string(), row.newton_agrees.to_string(), row.paper_agrees.to_string(), row.paper_error.to_string()]);
        }
        let bad = rows.iter().filter(|r| !r.newton_agrees).count();
        let text = format!("Recursions for psi^r against the root model on generic bundles\n{}", table.text());
        let failed = (bad > 0).then(|| format!("Newton recursion disagrees with the roots in {bad} case(s)"));
        return Ok(Report { text, json: json!({"rows": rows}), table: Some(table), unsupported: None, failed });
    }
    if let Some(k) = a.extension {
        let c = localized_extension_check(a.r, k)?;
        let text = format!(
            "psi^{r}(beta^{k} x) = {r}^{} beta^{k} psi^{r}(x) on {} generators: {}\n",
            4 * k,
            c.checked,
            if c.holds() { "holds" } else { "FAILS" },
            r = a.r
        );
        let failed = (!c.holds()).then(|| c.failures.join("; "));
        return Ok(Report { text, json: serde_json::to_value(&c).expect("serialisable"), failed, ..Report::default() });
    }
    if let Some(text) = &a.element {
        let e = KoElement::parse(text).map_err(|e| CliError::Validation(e.to_string()))?;
        let out = adams_coefficient(a.r, &e)?;
        let mut table = Table::new(&["r", "input", "output"]);
        table.push(vec![a.r.to_string(), e.to_string(), out.to_string()]);
        return Ok(Report {
            text: format!("psi^{}({e}) = {out}\n", a.r),
            json: json!({"r": a.r, "input": e.to_string(), "output": out.to_string(), "integral": out.is_integral()}),
            table: Some(table),
            ..Report::default()
        });
    }
    let Some(roots) = &a.roots else {
        return Err(CliError::Validation("give --element, --roots, --table or --extension".into()));
    };
    let bundle = FormalBundle::parse_roots(roots)?;
    let (class, roots_out) = match a.model {
        AdamsModel::Root => {
            let out = adams_root_model(a.r, &bundle)?;
            (out.class().expect("roots present"), out.render_roots())
        }
        AdamsModel::Newton => (adams_newton_recursion(a.r, &bundle, RecursionVariant::Newton)?, None),
        AdamsModel::Paper => (adams_newton_recursion(a.r, &bundle, RecursionVariant::Paper)?, None),
    };
    let mut text = format!("psi^{} of the bundle with roots {}\n", a.r, bundle.render_roots().unwrap_or_default());
    if let Some(r) = &roots_out {
        writeln!(text, "  roots: {r}").unwrap();
    }
    writeln!(text, "  class: {class}").unwrap();
    let model = format!("{:?}", a.model).to_lowercase();
    let mut table = Table::new(&["r", "model", "roots", "class"]);
    table.push(vec![a.r.to_string(), model.clone(), roots_out.clone().unwrap_or_default(), class.to_string()]);
    Ok(Report {
        text,
        json: json!({"r": a.r, "model": model, "roots": roots_out, "class": class}),
        table: Some(table),
        ..Report::default()
    })
}

fn wu(a: &SpaceArgs) -> Result<Report, CliError> {
    let p = load_space(a)?;
    let dim = p.pairing.as_ref().map(|x| x.degree).ok_or_else(|| CliError::Unsupported(format!("{} has no fundamental class", p.name)))?;
    let v = wu_classes(&p, dim)?;
    let w = sw_from_wu(&v, &p)?;
    let mut table = Table::new(&["degree", "wu", "stiefel_whitney"]);
    for d in 0..=dim {
        let vk = v.iter().find(|c| c.degree == d).map(|c| c.render(&p));
        let wk = match w.component(d) {
            Some(c) => crate::steenrod::Mod2Class { degree: d, coords: c.clone() }.render(&p),
            None => "0".into(),
        };
        table.push(vec![d.to_string(), vk.unwrap_or_else(|| "-".into()), wk]);
    }
    let text = format!("{}: v = {}, w = {}\n{}", p.name, v.iter().map(|c| c.render(&p)).filter(|s| s != "0").collect::<Vec<_>>().join(" + "), w.render(&p), table.text());
    let json = json!({
        "space": p.name,
        "dimension": dim,
        "wu": v.iter().map(|c| json!({"degree": c.degree, "class": c.render(&p)})).collect::<Vec<_>>(),
        "stiefel_whitney": w.render(&p),
        "components": table.rows.iter().map(|r| json!({"degree": r[0].parse::<u32>().unwrap(), "wu": r[1], "stiefel_whitney": r[2]})).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, table: Some(table), ..Report::default() })
}

/// One identity suite: name, whether it held, and what was checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub detail: String,
}

pub fn run_suite(s: Suite) -> Vec<SuiteResult> {
    let one = |name: &str, passed: bool, detail: String| SuiteResult { suite: name.into(), passed, detail };
    let all = [Suite::Thom, Suite::AHat, Suite::Bott, Suite::Newton, Suite::Adams, Suite::Cartan];
    match s {
        Suite::All => all.into_iter().flat_map(run_suite).collect(),
        Suite::Thom => {
            let r = crate::genera::verify_thom_genus_identity(4, 16);
            let ok = r.as_ref().map(|r| r.holds()).unwrap_or(false);
            vec![one("thom", ok, "4 root pairs through degree 16".into())]
        }
        Suite::AHat => {
            let a = a_hat(24);
            let ok = a.invert_unit(24).and_then(|inv| inv.mul_trunc(&a, 24)).map(|p| p == GradedPolynomial::one(a.scheme())).unwrap_or(false);
            vec![one("a-hat", ok, "inverse times A-hat is 1 through degree 24".into())]
        }
        Suite::Bott => vec![one("bott", crate::ko::check_bott_identities(4), "rc = 2 and cr = 1 + conjugation, |k| <= 4".into())],
        Suite::Newton => {
            let n = 8;
            let e = GeneratorScheme::elementary();
            let s = GeneratorScheme::power_sums();
            let s_in_e = crate::genera::power_sums_in(&e, n);
            let e_in_s = crate::genera::elementary_in(&s, n);
            let top = s.var_degree(crate::exact::Var::new(0, n as u32));
            let ok = s_in_e.iter().enumerate().all(|(k, sk)| {
                sk.substitute(&s, top, |v| e_in_s[v.index as usize - 1].clone()).map(|x| x == GradedPolynomial::var(&s, k as u32 + 1)).unwrap_or(false)
            });
            let rows = divergence_table(6, 4);
            let roots = rows.iter().all(|r| r.newton_agrees);
            vec![
                one("newton", ok, format!("power sums and elementary functions round-trip, n = {n}")),
                one("newton-roots", roots, "lambda recursion equals the root model, r <= 6, rank <= 4".into()),
            ]
        }
        Suite::Adams => {
            let mut ok = true;
            for b in crate::ko::KoBasis::all_within(2) {
                let x = KoElement::basis(b);
                for r in 1..=5 {
                    for t in 1..=5 {
                        let lhs = adams_coefficient(r, &adams_coefficient(t, &x).unwrap()).unwrap();
                        ok &= lhs == adams_coefficient(r * t, &x).unwrap();
                    }
                }
            }
            ok &= adams_coefficient(2, &KoElement::beta_pow(1)).unwrap() == KoElement::beta_pow(1).scale(&Rational::from(16));
            vec![one("adams", ok, "psi^r psi^s = psi^{rs} on coefficients, r, s <= 5".into())]
        }
        Suite::Cartan => {
            let mut checked = 0;
            let mut failures = Vec::new();
            for name in crate::presentation::builtin_names() {
                match builtin(name).map_err(|e| e.to_string()).and_then(|p| crate::steenrod::check_cartan(&p)) {
                    Ok(n) => checked += n,
                    Err(e) => failures.push(format!("{name}: {e}")),
                }
            }
            let detail = if failures.is_empty() { format!("{checked} products on the built-in spaces") } else { failures.join("; ") };
            vec![one("cartan", failures.is_empty(), detail)]
        }
    }
}

fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let results = run_suite(a.suite);
    let mut table = Table::new(&["suite", "status", "detail"]);
    for r in &results {
        table.push(vec![r.suite.clone(), if r.passed { "PASS" } else { "FAIL" }.into(), r.detail.clone()]);
    }
    let failed = results.iter().filter(|r| !r.passed).map(|r| r.suite.clone()).collect::<Vec<_>>();
    Ok(Report {
        text: table.text(),
        json: json!({"results": results}),
        table: Some(table),
        unsupported: None,
        failed: (!failed.is_empty()).then(|| format!("failing suites: {}", failed.join(", "))),
    })
}
