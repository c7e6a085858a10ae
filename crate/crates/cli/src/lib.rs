//! Command-line front end.
//!
//! Every verb takes a manifold, given either as a preset name (`CP2`, `K3`,
//! `E(3)`, `CP2#2CP2bar`, ...) or as the path of a manifold-spec JSON file.
//! Output is a line-oriented text report or a single JSON object, and is
//! byte-identical across runs.
//!
//! Exit status: 0 on success, 1 on domain errors (including a failed
//! `validate`), 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gcchern::chern::{self, ChernList, ChernRecord, SearchWindow};
use gcchern::enumeration::{Completeness, InfinitudeHint};
use gcchern::json::parse_manifold_spec;
use gcchern::manifold::{self, Diagnostics, Severity};
use gcchern::moduli::{self, OrbitInvariants, OrbitVerdict};
use gcchern::{CohClass, Error, FourManifoldModel};

pub mod class_expr;

#[derive(Debug, Parser)]
#[command(
    name = "gcchern",
    version,
    about = "Chern data of (generalized) almost complex structures on 4-manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice and topological data of a manifold.
    Info(Common),
    /// Admissible first Chern classes of almost complex structures.
    #[command(name = "enumerate-c1")]
    EnumerateC1(Common),
    /// Chern polynomials of almost complex structures.
    #[command(name = "ac-chern")]
    AcChern(Common),
    /// Chern polynomials of 𝕋M for almost generalized complex structures.
    #[command(name = "gc-chern")]
    GcChern(Common),
    /// Orbit invariants of a class, optionally compared with a second class.
    Orbit(OrbitArgs),
    /// Canonical class after k logarithmic transforms on regular fibers.
    #[command(name = "log-transform")]
    LogTransform(LogTransformArgs),
    /// Certificate that Ch has values in at least kmax+1 distinct orbits.
    #[command(name = "certify-infinite")]
    CertifyInfinite(Common),
    /// Complete list of Ch(𝕋M) values for definite forms.
    #[command(name = "certify-finite")]
    CertifyFinite(Common),
    /// Check every model invariant.
    Validate(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Preset name or path to a manifold-spec JSON file.
    pub manifold: String,
    /// Coordinate window for indefinite forms.
    #[arg(long, default_value_t = 8)]
    pub window: u64,
    /// Largest number of log transforms in certify-infinite.
    #[arg(long, default_value_t = 10)]
    pub kmax: u64,
    /// Maximum number of classes collected on indefinite forms.
    #[arg(long, default_value_t = 256)]
    pub limit: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub common: Common,
    /// Class: comma-separated coordinates, or `[k*]fiber`, `[k*]w2`, `[k*]c1`.
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
    /// Second class to compare against.
    #[arg(long, allow_hyphen_values = true)]
    pub other: Option<String>,
}

#[derive(Debug, Args)]
pub struct LogTransformArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of transformed fibers.
    #[arg(long, default_value_t = 1)]
    pub k: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli.command) {
        Ok(Outcome { text, code, note }) => {
            let _ = out.write_all(text.as_bytes());
            if let Some(note) = note {
                let _ = writeln!(err, "error: {note}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

struct Outcome {
    text: String,
    code: i32,
    /// One-line reason for a nonzero exit.
    note: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            code: 0,
            note: None,
        }
    }
}

/// Loads a manifold from a spec file (any existing path or `*.json`) or a
/// preset name. The model is not validated.
pub fn load_manifold(arg: &str) -> Result<FourManifoldModel, Error> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".json") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec(format!("cannot read {arg}: {e}")))?;
        parse_manifold_spec(&text)
    } else {
        manifold::preset(arg)
    }
}

fn execute(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Info(c) => info(c).map(Outcome::ok),
        Command::EnumerateC1(c) => enumerate_c1(c).map(Outcome::ok),
        Command::AcChern(c) => ac_chern(c).map(Outcome::ok),
        Command::GcChern(c) => gc_chern(c).map(Outcome::ok),
        Command::Orbit(o) => orbit(o).map(Outcome::ok),
        Command::LogTransform(l) => log_transform(l).map(Outcome::ok),
        Command::CertifyInfinite(c) => certify_infinite(c).map(Outcome::ok),
        Command::CertifyFinite(c) => certify_finite(c).map(Outcome::ok),
        Command::Validate(c) => validate(c),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn window(c: &Common) -> SearchWindow {
    SearchWindow::new(c.window).with_limit(c.limit)
}

fn completeness_name(c: Completeness) -> &'static str {
    match c {
        Completeness::Complete => "complete",
        Completeness::WindowTruncated => "window-truncated",
    }
}

#[derive(Serialize)]
struct InfoJson<'a> {
    manifold: &'a str,
    rank: usize,
    gram: &'a [Vec<i64>],
    euler: i64,
    sigma: i64,
    b_plus: usize,
    b_minus: usize,
    definite: bool,
    even: bool,
    ac_target: String,
    w2: &'a CohClass,
    fiber: Option<&'a CohClass>,
    complex_c1: Option<&'a CohClass>,
}

fn info(c: &Common) -> Result<String, Error> {
    let m = load_manifold(&c.manifold)?.checked()?;
    let sig = m.lattice.signature()?;
    let j = InfoJson {
        manifold: &m.name,
        rank: m.rank(),
        gram: m.lattice.gram(),
        euler: m.euler,
        sigma: m.sigma,
        b_plus: sig.positive,
        b_minus: sig.negative,
        definite: m.lattice.is_definite(),
        even: m.lattice.is_even(),
        ac_target: m.ac_target().to_string(),
        w2: &m.w2,
        fiber: m.fiber.as_ref(),
        complex_c1: m.complex_c1.as_ref(),
    };
    if c.format == Format::Json {
        return Ok(to_json(&j));
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", j.manifold);
    let _ = writeln!(s, "rank: {}", j.rank);
    let _ = writeln!(s, "euler: {}", j.euler);
    let _ = writeln!(s, "sigma: {}", j.sigma);
    let _ = writeln!(s, "b+: {}", j.b_plus);
    let _ = writeln!(s, "b-: {}", j.b_minus);
    let _ = writeln!(
        s,
        "form: {}, {}",
        if j.definite { "definite" } else { "indefinite" },
        if j.even { "even" } else { "odd" }
    );
    let _ = writeln!(s, "3sigma+2chi: {}", j.ac_target);
    let _ = writeln!(s, "w2: {}", j.w2);
    if let Some(f) = j.fiber {
        let _ = writeln!(s, "fiber: {f}");
    }
    if let Some(c1) = j.complex_c1 {
        let _ = writeln!(s, "complex c1: {c1}");
    }
    Ok(s)
}

#[derive(Serialize)]
struct EnumerateJson<'a> {
    manifold: &'a str,
    target: String,
    window: u64,
    completeness: Completeness,
    limit_reached: bool,
    infinitude_hint: Option<&'a InfinitudeHint>,
    solutions: Vec<&'a CohClass>,
}

fn enumerate_c1(c: &Common) -> Result<String, Error> {
    let m = load_manifold(&c.manifold)?.checked()?;
    let list = chern::admissible_ac_chern(&m, window(c))?;
    let j = EnumerateJson {
        manifold: &m.name,
        target: m.ac_target().to_string(),
        window: c.window,
        completeness: list.completeness,
        limit_reached: list.limit_reached,
        infinitude_hint: list.infinitude_hint.as_ref(),
        solutions: list.data.iter().map(|d| &d.c1).collect(),
    };
    if c.format == Format::Json {
        return Ok(to_json(&j));
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", j.manifold);
    let _ = writeln!(s, "c1^2 = 3sigma+2chi = {}", j.target);
    let _ = writeln!(s, "completeness: {}", completeness_name(j.completeness));
    if list.completeness == Completeness::WindowTruncated {
        let _ = writeln!(s, "window: {}", c.window);
        let _ = writeln!(
            s,
            "limit reached: {}",
            if j.limit_reached { "yes" } else { "no" }
        );
        if let Some(h) = j.infinitude_hint {
            let _ = writeln!(s, "infinite family: {} + 2t*{}", h.base, h.direction);
        }
    }
    let _ = writeln!(s, "solutions: {}", j.solutions.len());
    for x in &j.solutions {
        let _ = writeln!(s, "  {}", render_class(&m, x));
    }
    Ok(s)
}

/// Coordinates, plus the generator form for rank-1 and rank-2 lattices.
fn render_class(m: &FourManifoldModel, x: &CohClass) -> String {
    match m.rank() {
        1 | 2 => format!("{x}  {}", chern::pretty_class(&m.lattice, x)),
        _ => x.to_string(),
    }
}

#[derive(Serialize)]
struct ChernListJson<'a> {
    manifold: &'a str,
    completeness: Completeness,
    limit_reached: bool,
    count: usize,
    chern: Vec<ChernRecord>,
}

fn chern_list_output(m: &FourManifoldModel, list: &ChernList, format: Format) -> String {
    let j = ChernListJson {
        manifold: &m.name,
        completeness: list.completeness,
        limit_reached: list.limit_reached,
        count: list.data.len(),
        chern: list.data.iter().map(|d| d.to_record(&m.lattice)).collect(),
    };
    if format == Format::Json {
        return to_json(&j);
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", j.manifold);
    let _ = writeln!(s, "completeness: {}", completeness_name(j.completeness));
    if j.limit_reached {
        let _ = writeln!(s, "limit reached: yes");
    }
    let _ = writeln!(s, "count: {}", j.count);
    for r in &j.chern {
        let _ = writeln!(
            s,
            "  rank {}  c1 {}  c2 {}  {}",
            r.rank, r.c1, r.c2, r.pretty
        );
    }
    s
}

fn ac_chern(c: &Common) -> Result<String, Error> {
    let m = load_manifold(&c.manifold)?.checked()?;
    let list = chern::admissible_ac_chern(&m, window(c))?;
    Ok(chern_list_output(&m, &list, c.format))
}

fn gc_chern(c: &Common) -> Result<String, Error> {
    let m = load_manifold(&c.manifold)?.checked()?;
    let list = chern::gc_admissible_chern(&m, window(c))?;
    Ok(chern_list_output(&m, &list, c.format))
}

#[derive(Serialize)]
struct OrbitJson<'a> {
    manifold: &'a str,
    class: &'a CohClass,
    invariants: OrbitInvariants,
    #[serde(skip_serializing_if = "Option::is_none")]
    other: Option<&'a CohClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    other_invariants: Option<OrbitInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<OrbitVerdict>,
}

fn orbit(o: &OrbitArgs) -> Result<String, Error> {
    let m = load_manifold(&o.common.manifold)?.checked()?;
    let x = class_expr::parse(&m, &o.class)?;
    let y = o
        .other
        .as_deref()
        .map(|e| class_expr::parse(&m, e))
        .transpose()?;
    let inv = moduli::orbit_invariants(&m.lattice, &x)?;
    let other_inv = y
        .as_ref()
        .map(|y| moduli::orbit_invariants(&m.lattice, y))
        .transpose()?;
    let verdict = y
        .as_ref()
        .map(|y| moduli::distinguish(&m.lattice, &x, y))
        .transpose()?;
    let j = OrbitJson {
        manifold: &m.name,
        class: &x,
        invariants: inv,
        other: y.as_ref(),
        other_invariants: other_inv,
        verdict,
    };
    if o.common.format == Format::Json {
        return Ok(to_json(&j));
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", j.manifold);
    let row = |s: &mut String, label: &str, x: &CohClass, inv: &OrbitInvariants| {
        let _ = writeln!(
            s,
            "{label}: {x}  square {}  divisibility {}  characteristic {}  primitive {}",
            inv.square, inv.divisibility, inv.characteristic, inv.primitive
        );
    };
    row(&mut s, "class", &x, &j.invariants);
    if let (Some(y), Some(inv)) = (j.other, &j.other_invariants) {
        row(&mut s, "other", y, inv);
    }
    if let Some(v) = j.verdict {
        let _ = writeln!(
            s,
            "verdict: {}",
            match v {
                OrbitVerdict::DistinctOrbits => "distinct_orbits",
                OrbitVerdict::Inconclusive => "inconclusive",
            }
        );
    }
    Ok(s)
}

#[derive(Serialize)]
struct LogTransformJson<'a> {
    manifold: &'a str,
    k: u64,
    #[serde(rename = "c1K")]
    c1k: &'a CohClass,
    type_change_class: CohClass,
}

fn log_transform(l: &LogTransformArgs) -> Result<String, Error> {
    let m = load_manifold(&l.common.manifold)?.checked()?;
    let canon = moduli::log_transform_canonical(&m, l.k)?;
    let j = LogTransformJson {
        manifold: &m.name,
        k: l.k,
        c1k: &canon.c1k,
        type_change_class: canon.c1k.checked_neg()?,
    };
    if l.common.format == Format::Json {
        return Ok(to_json(&j));
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", j.manifold);
    let _ = writeln!(s, "k: {}", j.k);
    let _ = writeln!(s, "PD[Sigma]: {}", j.type_change_class);
    let _ = writeln!(s, "c1(K): {}", j.c1k);
    Ok(s)
}

fn certify_infinite(c: &Common) -> Result<String, Error> {
    let m = load_manifold(&c.manifold)?.checked()?;
    let cert = moduli::infinite_components_certificate(&m, c.kmax)?;
    if c.format == Format::Json {
        return Ok(to_json(&cert));
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", cert.manifold);
    let _ = writeln!(s, "k  square  divisibility  characteristic  primitive  c1K");
    for e in &cert.entries {
        let _ = writeln!(
            s,
            "{}  {}  {}  {}  {}  {}",
            e.k, e.square, e.divisibility, e.characteristic, e.primitive, e.c1k
        );
    }
    let _ = writeln!(
        s,
        "verdict: {}",
        match cert.verdict {
            moduli::InfiniteVerdict::Verified => "verified",
            moduli::InfiniteVerdict::Unverified => "unverified",
        }
    );
    Ok(s)
}

fn certify_finite(c: &Common) -> Result<String, Error> {
    let m = load_manifold(&c.manifold)?.checked()?;
    let cert = moduli::finiteness_certificate(&m, window(c))?;
    if c.format == Format::Json {
        return Ok(to_json(&cert));
    }
    let mut s = String::new();
    let _ = writeln!(s, "manifold: {}", cert.manifold);
    let _ = writeln!(
        s,
        "verdict: {}",
        match cert.verdict {
            moduli::FiniteVerdict::Finite => "finite",
            moduli::FiniteVerdict::NotApplicable => "not_applicable",
        }
    );
    let _ = writeln!(s, "completeness: {}", completeness_name(cert.completeness));
    let _ = writeln!(s, "count: {}", cert.count);
    let _ = writeln!(s, "modulo conjugation: {}", cert.modulo_conjugation);
    for r in &cert.chern {
        let _ = writeln!(
            s,
            "  rank {}  c1 {}  c2 {}  {}",
            r.rank, r.c1, r.c2, r.pretty
        );
    }
    Ok(s)
}

#[derive(Serialize)]
struct ValidateJson<'a> {
    manifold: &'a str,
    valid: bool,
    checks: &'a [manifold::Check],
}

fn validate(c: &Common) -> Result<Outcome, Error> {
    let m = load_manifold(&c.manifold)?;
    let report: Diagnostics = manifold::validate(&m);
    let valid = report.is_valid();
    let text = if c.format == Format::Json {
        to_json(&ValidateJson {
            manifold: &report.manifold,
            valid,
            checks: &report.checks,
        })
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "manifold: {}", report.manifold);
        for check in &report.checks {
            let status = match (check.passed, check.severity) {
                (true, _) => "PASS",
                (false, Severity::Required) => "FAIL",
                (false, Severity::Advisory) => "NOTE",
            };
            let _ = writeln!(s, "{status} {}: {}", check.name, check.detail);
        }
        let _ = writeln!(s, "valid: {}", if valid { "yes" } else { "no" });
        s
    };
    let note = (!valid).then(|| {
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        format!(
            "manifold `{}` failed validation: {}",
            report.manifold,
            failed.join(", ")
        )
    });
    Ok(Outcome {
        text,
        code: if valid { 0 } else { 1 },
        note,
    })
}
