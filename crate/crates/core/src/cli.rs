//! The `lsplex` command line: generation, search, certificate verification,
//! constructions and existence sweeps.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cells::CellSet;
use crate::cells::PlexKind;
use crate::constructions::{
    build_2plex_general, build_2plex_m2, build_2plex_q1, build_3ds_q1, build_3ds_qgen,
    build_domatic_partition_cyclic, build_transforms, build_two_step_decomposition, BuildOptions,
    Witness, WitnessCertificate,
};
use crate::error::{Error, Result};
use crate::exec::{with_threads, Exec};
use crate::latin::{Generator, LatinSquare};
use crate::plexes::packing::{find_orthogonal_mate, max_disjoint_transversals};
use crate::plexes::search::{
    enumerate_near_transversals, enumerate_quasi_transversals, enumerate_transversals_with,
    find_kplex_with, find_near_transversal_with, find_quasi_transversal_with, PlexCensus,
};
use crate::plexes::sweep::{conjecture_sweep_with, SweepConfig, SweepFamily};
use crate::plexes::validate::{
    check_kplex, check_near_transversal, check_partial_transversal, check_quasi_transversal,
    check_transversal,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "lsplex",
    version,
    about = "Transversals, plexes and domination in Latin squares"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for searches (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for randomized fallbacks and isotopes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a generated square.
    Gen(GenArgs),
    /// Search a square for transversals, plexes, mates or the transversal number.
    Search(SearchArgs),
    /// Re-validate a certificate, or a cell set against a square.
    Verify(VerifyArgs),
    /// Build a certified construction.
    Construct(ConstructArgs),
    /// Check that near-, quasi-transversals and 2-plexes exist over a range of squares.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Cyclic,
    Qstep,
    Twostep,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Order for `cyclic`, or `k` for `twostep`.
    pub value: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Args, Debug, Default)]
pub struct InputArgs {
    /// Square file (`.ls` text or JSON).
    pub input: Option<PathBuf>,
    /// Read the square from standard input.
    #[arg(long)]
    pub stdin: bool,
    /// Use a generated square, e.g. `cyclic:5`, `qstep:2,3`, `twostep:3`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<Generator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Transversal,
    Near,
    Quasi,
    Kplex,
    Mate,
    Tau,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    pub kind: SearchKind,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Count all instead of stopping at the first.
    #[arg(long)]
    pub count: bool,
    /// Witnesses kept when counting.
    #[arg(long, default_value_t = 10)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Certificate or cell-set JSON file.
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub stdin: bool,
    /// Square for a bare cell set.
    #[arg(long)]
    pub square: Option<PathBuf>,
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<Generator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClaimArg {
    TwostepDecomp,
    #[value(name = "3ds-q1")]
    DsQ1,
    #[value(name = "3ds-qgen")]
    DsQgen,
    DomaticCyclic,
    #[value(name = "2plex-q1")]
    PlexQ1,
    #[value(name = "2plex-m2")]
    PlexM2,
    #[value(name = "2plex-gen")]
    PlexGen,
    QtNtTransforms,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub claim: ClaimArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<Generator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Cyclic,
    Qstep,
    Twostep,
    Isotopes,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    pub min_order: usize,
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    /// Square families to include.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FamilyArg::Cyclic, FamilyArg::Qstep, FamilyArg::Isotopes])]
    pub generators: Vec<FamilyArg>,
    /// Random isotopes per order.
    #[arg(long, default_value_t = 20)]
    pub isotopes: usize,
}

/// What a command produced: human text, the JSON value, and the exit code.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Outcome {
    fn new(text: String, json: Value, code: i32) -> Self {
        Outcome { text, json, code }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

struct Ctx {
    exec: Exec,
    seed: u64,
}

/// Parses the arguments, runs the command and writes its output. Returns
/// the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_REFUSED
            } else {
                EXIT_OK
            };
        }
    };
    let ctx = Ctx {
        exec: if cli.threads == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
        seed: cli.seed,
    };
    let threads = if cli.threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        cli.threads
    };
    let result = with_threads(threads, || dispatch(&cli.command, &ctx));
    match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json).expect("json value");
                    s.push('\n');
                    s
                }
            };
            if let Err(e) = emit(cli.out.as_ref(), &body) {
                eprintln!("error: {e}");
                return EXIT_FAIL;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::OrderTooLarge { .. } | Error::TooManyCandidates { .. } => EXIT_REFUSED,
                _ => EXIT_FAIL,
            }
        }
    }
}

fn emit(out: Option<&PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, body),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes())?;
            so.flush()
        }
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Search(a) => cmd_search(a, ctx),
        Command::Verify(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(a, ctx),
        Command::Sweep(a) => cmd_sweep(a, ctx),
    }
}

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameters(format!("missing --{what}")))
}

fn cmd_gen(a: &GenArgs) -> Result<Outcome> {
    let g = match a.kind {
        GenKind::Cyclic => Generator::Cyclic {
            n: need(a.n.or(a.value), "n")?,
        },
        GenKind::Qstep => Generator::Qstep {
            m: need(a.m, "m")?,
            q: need(a.q, "q")?,
        },
        GenKind::Twostep => Generator::TwoStep {
            k: need(a.k.or(a.value.map(|v| v as u32)), "k")?,
        },
    };
    let l = g.build()?;
    Ok(Outcome::new(
        l.to_ls_text(),
        to_json(&l.to_json_value()),
        EXIT_OK,
    ))
}

fn read_text(path: Option<&PathBuf>, stdin: bool) -> Result<String> {
    match (path, stdin) {
        (Some(_), true) => Err(Error::InvalidParameters(
            "give a path or --stdin, not both".into(),
        )),
        (Some(p), false) => Ok(std::fs::read_to_string(p)?),
        (None, true) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        (None, false) => Err(Error::InvalidParameters("no input given".into())),
    }
}

fn load_square(inp: &InputArgs) -> Result<(LatinSquare, String)> {
    let sources = inp.input.is_some() as u8 + inp.stdin as u8 + inp.generator.is_some() as u8;
    if sources != 1 {
        return Err(Error::InvalidParameters(
            "exactly one of a path, --stdin or --gen is required".into(),
        ));
    }
    if let Some(g) = inp.generator {
        return Ok((g.build()?, g.to_string()));
    }
    let text = read_text(inp.input.as_ref(), inp.stdin)?;
    let label = inp
        .input
        .as_ref()
        .map_or("stdin".to_string(), |p| p.display().to_string());
    Ok((LatinSquare::parse_any(&text)?, label))
}

fn cells_line(s: &CellSet) -> String {
    s.cells()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn census_outcome(label: &str, census: PlexCensus) -> Outcome {
    let mut text = format!(
        "{label}: {} {}(s) in order {}\n",
        census.count,
        census.kind.name(),
        census.order
    );
    for w in &census.witnesses {
        let _ = writeln!(text, "  {}", cells_line(w));
    }
    if census.truncated {
        let _ = writeln!(text, "  ({} witnesses shown)", census.witnesses.len());
    }
    let code = if census.count == 0 {
        EXIT_NOT_FOUND
    } else {
        EXIT_OK
    };
    Outcome::new(text, to_json(&census), code)
}

fn found_outcome(label: &str, what: &str, found: Option<CellSet>) -> Outcome {
    match found {
        Some(s) => Outcome::new(
            format!("{label}: {what} found\n  {}\n", cells_line(&s)),
            json!({ "found": true, "witness": s }),
            EXIT_OK,
        ),
        None => Outcome::new(
            format!("{label}: no {what} (exhaustive)\n"),
            json!({ "found": false, "witness": null }),
            EXIT_NOT_FOUND,
        ),
    }
}

fn cmd_search(a: &SearchArgs, ctx: &Ctx) -> Result<Outcome> {
    let (l, label) = load_square(&a.input)?;
    Ok(match (a.kind, a.count) {
        (SearchKind::Transversal, true) => {
            census_outcome(&label, enumerate_transversals_with(&l, a.cap, ctx.exec)?)
        }
        (SearchKind::Transversal, false) => {
            let c = enumerate_transversals_with(&l, 1, ctx.exec)?;
            found_outcome(&label, "transversal", c.witnesses.into_iter().next())
        }
        (SearchKind::Near, true) => census_outcome(&label, enumerate_near_transversals(&l, a.cap)?),
        (SearchKind::Near, false) => found_outcome(
            &label,
            "near-transversal",
            find_near_transversal_with(&l, ctx.exec)?,
        ),
        (SearchKind::Quasi, true) => {
            census_outcome(&label, enumerate_quasi_transversals(&l, a.cap)?)
        }
        (SearchKind::Quasi, false) => found_outcome(
            &label,
            "quasi-transversal",
            find_quasi_transversal_with(&l, ctx.exec)?,
        ),
        (SearchKind::Kplex, _) => found_outcome(
            &label,
            &format!("{}-plex", a.k),
            find_kplex_with(&l, a.k, ctx.exec)?,
        ),
        (SearchKind::Mate, _) => match find_orthogonal_mate(&l)? {
            Some(m) => Outcome::new(
                format!("{label}: orthogonal mate found\n{}", m.to_ls_text()),
                json!({ "found": true, "mate": m.to_json_value() }),
                EXIT_OK,
            ),
            None => Outcome::new(
                format!("{label}: no orthogonal mate (exhaustive)\n"),
                json!({ "found": false, "mate": null }),
                EXIT_NOT_FOUND,
            ),
        },
        (SearchKind::Tau, _) => {
            let t = max_disjoint_transversals(&l)?;
            let mut text = format!(
                "{label}: tau = {} ({} transversals considered)\n",
                t.tau, t.candidates
            );
            for s in &t.family {
                let _ = writeln!(text, "  {}", cells_line(s));
            }
            let code = if t.tau == 0 { EXIT_NOT_FOUND } else { EXIT_OK };
            Outcome::new(
                text,
                json!({ "tau": t.tau, "candidates": t.candidates, "family": t.family }),
                code,
            )
        }
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let text = read_text(a.file.as_ref(), a.stdin)?;
    let value: Value = serde_json::from_str(&text)?;
    if value.get("claim").is_some() {
        let cert: WitnessCertificate = match serde_json::from_value(value.clone()) {
            Ok(c) => c,
            Err(e) => return Ok(rejected(vec![diagnose_certificate(&value, e)])),
        };
        let problems = match cert.revalidate() {
            Ok(p) => p,
            Err(e) => vec![e.to_string()],
        };
        return Ok(verdict_outcome(problems));
    }
    let l = match (&a.square, a.generator) {
        (Some(p), None) => LatinSquare::parse_any(&std::fs::read_to_string(p)?)?,
        (None, Some(g)) => g.build()?,
        _ => {
            return Err(Error::InvalidParameters(
                "a bare cell set needs exactly one of --square or --gen".into(),
            ))
        }
    };
    let mut value = value;
    // the order may be left out of a bare set; it is taken from the square
    if let Some(obj) = value.as_object_mut() {
        obj.entry("order").or_insert(json!(l.order()));
    }
    let set: CellSet = match serde_json::from_value(value) {
        Ok(s) => s,
        Err(e) => return Ok(rejected(vec![format!("malformed cell set: {e}")])),
    };
    if set.order() != l.order() {
        return Ok(rejected(vec![format!(
            "cell set has order {}, square has order {}",
            set.order(),
            l.order()
        )]));
    }
    let verdict = match set.kind() {
        PlexKind::Transversal => check_transversal(&l, set.cells()),
        PlexKind::PartialTransversal(_) => check_partial_transversal(&l, set.cells()),
        PlexKind::NearTransversal => check_near_transversal(&l, set.cells()),
        PlexKind::QuasiTransversal => check_quasi_transversal(&l, set.cells()),
        PlexKind::KPlex(k) => check_kplex(&l, set.cells(), k),
        PlexKind::VertexSet(_) => Ok(()),
    };
    Ok(verdict_outcome(
        verdict.err().map(|v| v.to_string()).into_iter().collect(),
    ))
}

/// Points at the witness set that fails to parse, when there is one.
fn diagnose_certificate(value: &Value, err: serde_json::Error) -> String {
    let sets: Vec<&Value> = match value.get("witness") {
        Some(Value::Array(a)) => a.iter().collect(),
        Some(v) => vec![v],
        None => Vec::new(),
    };
    for (i, v) in sets.iter().enumerate() {
        if let Err(e) = serde_json::from_value::<CellSet>((*v).clone()) {
            return format!("witness set {}: {e}", i + 1);
        }
    }
    format!("malformed certificate: {err}")
}

fn rejected(problems: Vec<String>) -> Outcome {
    verdict_outcome(problems)
}

fn verdict_outcome(problems: Vec<String>) -> Outcome {
    let accepted = problems.is_empty();
    let mut text = String::from(if accepted { "accepted\n" } else { "rejected\n" });
    for p in &problems {
        let _ = writeln!(text, "  {p}");
    }
    Outcome::new(
        text,
        json!({ "accepted": accepted, "problems": problems }),
        if accepted { EXIT_OK } else { EXIT_FAIL },
    )
}

fn cmd_construct(a: &ConstructArgs, ctx: &Ctx) -> Result<Outcome> {
    let opts = BuildOptions {
        seed: ctx.seed,
        exec: ctx.exec,
        ..BuildOptions::default()
    };
    let cert = match a.claim {
        ClaimArg::TwostepDecomp => build_two_step_decomposition(need(a.k, "k")?)?,
        ClaimArg::DsQ1 => build_3ds_q1(need(a.n, "n")?, &opts)?,
        ClaimArg::DsQgen => build_3ds_qgen(need(a.m, "m")?, need(a.q, "q")?, &opts)?,
        ClaimArg::DomaticCyclic => build_domatic_partition_cyclic(need(a.n, "n")?)?,
        ClaimArg::PlexQ1 => build_2plex_q1(need(a.n, "n")?, &opts)?,
        ClaimArg::PlexM2 => build_2plex_m2(need(a.q, "q")?, &opts)?,
        ClaimArg::PlexGen => build_2plex_general(need(a.m, "m")?, need(a.q, "q")?, &opts)?,
        ClaimArg::QtNtTransforms => {
            let g = match (a.generator, a.n) {
                (Some(g), None) => g,
                (None, Some(n)) => Generator::Cyclic { n },
                _ => return Err(Error::InvalidParameters("give --gen SPEC or --n".into())),
            };
            build_transforms(g, &opts)?
        }
    };
    let mut text = format!(
        "{}: {} ({})\n",
        to_json(&cert.claim).as_str().unwrap_or_default(),
        if cert.verdict { "accepted" } else { "rejected" },
        to_json(&cert.provenance).as_str().unwrap_or_default()
    );
    let sets = cert.witness.sets();
    match &cert.witness {
        Witness::Single(s) => {
            let _ = writeln!(text, "  {} {}: {}", s.len(), s.kind().name(), cells_line(s));
        }
        Witness::Family(_) => {
            for (i, s) in sets.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "  part {} ({} cells): {}",
                    i + 1,
                    s.len(),
                    cells_line(s)
                );
            }
        }
    }
    for note in &cert.notes {
        let _ = writeln!(text, "  note: {note}");
    }
    let code = if cert.verdict { EXIT_OK } else { EXIT_FAIL };
    Ok(Outcome::new(text, to_json(&cert), code))
}

fn cmd_sweep(a: &SweepArgs, ctx: &Ctx) -> Result<Outcome> {
    let mut families: Vec<SweepFamily> = a
        .generators
        .iter()
        .map(|f| match f {
            FamilyArg::Cyclic => SweepFamily::Cyclic,
            FamilyArg::Qstep => SweepFamily::Qstep,
            FamilyArg::Twostep => SweepFamily::TwoStep,
            FamilyArg::Isotopes => SweepFamily::Isotopes,
        })
        .collect();
    families.sort();
    families.dedup();
    let cfg = SweepConfig {
        min_order: a.min_order,
        max_order: a.max_order,
        families,
        isotopes_per_order: a.isotopes,
        seed: ctx.seed,
    };
    let report = conjecture_sweep_with(&cfg, ctx.exec)?;
    let flag = |v: Option<bool>| match v {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "-",
    };
    let mut text = format!(
        "{:<28} {:>5} {:>5} {:>5} {:>6}\n",
        "square", "order", "near", "quasi", "2-plex"
    );
    for r in &report.rows {
        let _ = writeln!(
            text,
            "{:<28} {:>5} {:>5} {:>5} {:>6}",
            r.label,
            r.order,
            flag(r.near),
            flag(r.quasi),
            flag(r.two_plex)
        );
    }
    let _ = writeln!(
        text,
        "{} squares, {} counterexamples",
        report.rows.len(),
        report.counterexample.is_some() as usize
    );
    let code = if report.counterexample.is_some() {
        EXIT_FAIL
    } else {
        EXIT_OK
    };
    Ok(Outcome::new(text, to_json(&report), code))
}
