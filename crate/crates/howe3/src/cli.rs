//! Command-line front end: argument model, report documents and their JSON
//! and CSV renderings.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::elliptic::{j_of_quartic_cover, QuarticCover};
use crate::enumeration::{
    decide_exists, expected_extremality, method1_with, method2_with, method3_with, verify_extremality, ClassEntry, ClassReport, Extremality, Kind, Options,
    Verdict, SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::field_tower::{is_prime, DEFAULT_MAX_LEVEL};
use crate::hyperelliptic::{completely_decomposed_g3, decomposed_richelot, HyperCurve};
use crate::invariants::{igusa, shioda};
use crate::quartic::{aut_order_with, canonical_key, involutions, quartic_quotients, standard_form_reduce, CianiQuartic, GeneralQuartic};
use crate::richelot_g2::{richelot_step, splittings, RichelotResult};

/// Environment variable naming the directory reports go to when `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "HOWE3_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "howe3", version, about = "Superspecial genus-3 Howe curves over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GlobalArgs {
    /// Output file; defaults to $HOWE3_OUTPUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Highest tower level F_{p^(2m)} any computation may use.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEVEL)]
    pub max_level: usize,
    /// Worker threads for the quartic enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Re-verify classes with exact tests.
    #[arg(long, global = true)]
    pub debug_verify: bool,
    /// Include wall-clock timings in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Hyperelliptic Howe-type classes.
    EnumHoweType {
        #[arg(long)]
        p: u64,
    },
    /// Hyperelliptic Oort-type classes.
    EnumOortType {
        #[arg(long)]
        p: u64,
    },
    /// Non-hyperelliptic classes with automorphism tallies.
    EnumQuartic {
        #[arg(long)]
        p: u64,
    },
    /// Stop at the first superspecial curve of the given kind.
    Exists {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        kind: Kind,
    },
    /// Decomposed Richelot codomains of a single curve.
    Richelot {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Shioda or Igusa invariants, or the key and automorphism order of a quartic.
    Invariants {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Point counts of every class of a saved report.
    VerifyExtremal {
        #[arg(long)]
        report: PathBuf,
        /// Defaults to what the report kind and p predict.
        #[arg(long)]
        mode: Option<Extremality>,
    },
}

impl ValueEnum for Kind {
    fn value_variants<'a>() -> &'a [Self] {
        &[Kind::HoweType, Kind::OortType, Kind::Quartic]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

impl ValueEnum for Extremality {
    fn value_variants<'a>() -> &'a [Self] {
        &[Extremality::Maximal, Extremality::Minimal]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Extremality::Maximal => "maximal",
            Extremality::Minimal => "minimal",
        }))
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EnumHoweType { .. } => "enum-howe-type",
            Command::EnumOortType { .. } => "enum-oort-type",
            Command::EnumQuartic { .. } => "enum-quartic",
            Command::Exists { .. } => "exists",
            Command::Richelot { .. } => "richelot",
            Command::Invariants { .. } => "invariants",
            Command::VerifyExtremal { .. } => "verify-extremal",
        }
    }
}

/// Everything that determines a run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub seed: u64,
    pub max_level: usize,
    pub workers: usize,
    pub debug_verify: bool,
    pub timings: bool,
    /// Excluded from the echo so reports do not depend on where they are written.
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> RunConfig {
        let g = cli.global;
        RunConfig {
            command: cli.command,
            format: g.format,
            seed: g.seed,
            max_level: g.max_level,
            workers: g.workers,
            debug_verify: g.debug_verify,
            timings: g.timings,
            output: g.output,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = match &self.command {
            Command::EnumHoweType { p } | Command::EnumOortType { p } | Command::EnumQuartic { p } | Command::Exists { p, .. } => Some(*p),
            _ => None,
        };
        if let Some(p) = p {
            if p < 3 || !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        if self.max_level > DEFAULT_MAX_LEVEL {
            return Err(Error::LevelOverflow { requested: self.max_level, max: DEFAULT_MAX_LEVEL });
        }
        Ok(())
    }

    fn options(&self) -> Options {
        Options { workers: self.workers, max_level: self.max_level, verify: self.debug_verify, timings: self.timings, seed: self.seed }
    }
}

/// A genus-1 or genus-2 piece of a decomposition, with its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub curve: String,
    pub genus: usize,
    /// j-invariant for genus 1, Igusa invariants for genus 2.
    pub invariants: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Output {
    Enumeration { report: ClassReport },
    Exists { p: u64, kind: Kind, found: Option<ClassEntry> },
    Richelot { input: String, decomposed: Vec<Vec<Piece>>, completely_decomposed: Vec<Vec<Piece>> },
    Invariants { input: String, name: String, values: Vec<String>, aut_order: Option<u64> },
    Extremality { p: u64, mode: Extremality, verdicts: Vec<Verdict>, all_ok: bool },
}

/// The persisted document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    pub config: RunConfig,
    pub output: Output,
}

impl Document {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Document> {
        let d: Document = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if d.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", d.schema_version)));
        }
        Ok(d)
    }

    /// Table-shaped projection: one header and one row for enumerations.
    pub fn to_csv(&self) -> String {
        match &self.output {
            Output::Enumeration { report } => {
                let mut head = vec!["p".to_string(), "kind".into(), "total".into()];
                let mut row = vec![report.p.to_string(), report.kind.name().into(), report.total().to_string()];
                if report.kind == Kind::Quartic {
                    for t in &report.tallies {
                        head.push(t.group.clone());
                        row.push(t.count.to_string());
                    }
                    for t in &report.triple_tallies {
                        head.push(format!("triples_{}", t.group));
                        row.push(t.count.to_string());
                    }
                }
                format!("{}\n{}\n", head.join(","), row.join(","))
            }
            Output::Exists { p, kind, found } => {
                format!("p,kind,found,curve\n{p},{},{},{}\n", kind.name(), found.is_some(), found.as_ref().map_or("", |c| c.curve.as_str()))
            }
            Output::Extremality { verdicts, .. } => {
                let mut s = String::from("index,level,points,expected,ok\n");
                for v in verdicts {
                    s += &format!("{},{},{},{},{}\n", v.index, v.level, v.points, v.expected, v.ok);
                }
                s
            }
            Output::Invariants { name, values, .. } => format!("{name}\n{}\n", values.join(",")),
            Output::Richelot { decomposed, completely_decomposed, .. } => {
                let mut s = String::from("kind,curves\n");
                for (tag, rows) in [("decomposed", decomposed), ("completely-decomposed", completely_decomposed)] {
                    for r in rows {
                        let cs: Vec<&str> = r.iter().map(|p| p.curve.as_str()).collect();
                        s += &format!("{tag},\"{}\"\n", cs.join(" | "));
                    }
                }
                s
            }
        }
    }
}

/// Machine-readable failure record.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorRecord {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> ErrorRecord {
        ErrorRecord { error: e.kind().into(), message: e.to_string(), exit_code: e.exit_code() }
    }
}

/// A curve read from a file: an optional "hyperelliptic:", "quartic:" or
/// "ciani:" tag followed by the curve's text encoding.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum CurveInput {
    Hyperelliptic(HyperCurve),
    Quartic(GeneralQuartic),
    Ciani(CianiQuartic),
}

impl CurveInput {
    pub fn parse(s: &str) -> Result<CurveInput> {
        let line = s.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).ok_or_else(|| Error::Parse("empty curve file".into()))?;
        let (tag, body) = match line.split_once(':') {
            Some((t, b)) => (t.trim(), b),
            None => ("hyperelliptic", line),
        };
        match tag {
            "hyperelliptic" => Ok(CurveInput::Hyperelliptic(HyperCurve::parse(body)?)),
            "quartic" => Ok(CurveInput::Quartic(GeneralQuartic::parse(body)?)),
            "ciani" => Ok(CurveInput::Ciani(CianiQuartic::parse(body)?)),
            _ => Err(Error::Parse(format!("unknown curve tag '{tag}'"))),
        }
    }

    pub fn encode(&self) -> String {
        match self {
            CurveInput::Hyperelliptic(c) => format!("hyperelliptic: {}", c.encode()),
            CurveInput::Quartic(c) => format!("quartic: {}", c.encode()),
            CurveInput::Ciani(c) => format!("ciani: {}", c.encode()),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn genus1_piece(e: &QuarticCover) -> Result<Piece> {
    let j = j_of_quartic_cover(e)?;
    Ok(Piece { curve: format!("{}; {}; {}", e.k.p(), e.k.level(), e.q.encode(&e.k)), genus: 1, invariants: vec![e.k.encode(j)] })
}

fn hyper_piece(c: &HyperCurve) -> Result<Piece> {
    let invariants = match c.genus {
        1 => {
            let e = QuarticCover::new(&c.k, c.f.clone())?;
            vec![c.k.encode(j_of_quartic_cover(&e)?)]
        }
        2 if c.k.p() >= 7 => igusa(&c.k, &c.f)?.encode(),
        _ => vec![],
    };
    Ok(Piece { curve: c.encode(), genus: c.genus, invariants })
}

/// Richelot codomains of a single curve.
pub fn richelot_of(input: &CurveInput) -> Result<Output> {
    let (decomposed, completely) = match input {
        CurveInput::Hyperelliptic(c) if c.genus == 2 => {
            let mut rows = vec![];
            for s in splittings(c)? {
                if let RichelotResult::NonDegenerate(h) = richelot_step(&s) {
                    rows.push(vec![hyper_piece(&h)?]);
                }
            }
            (rows, vec![])
        }
        CurveInput::Hyperelliptic(c) => {
            let dec = match decomposed_richelot(c) {
                Ok(v) => v.iter().map(|(e, h)| Ok(vec![hyper_piece(e)?, hyper_piece(h)?])).collect::<Result<Vec<_>>>()?,
                Err(Error::NoExtraInvolution) => vec![],
                Err(e) => return Err(e),
            };
            let full = match completely_decomposed_g3(c) {
                Ok(v) => v.iter().map(|es| es.iter().map(genus1_piece).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?,
                Err(Error::NoCommutingPair) | Err(Error::NoExtraInvolution) => vec![],
                Err(e) => return Err(e),
            };
            (dec, full)
        }
        CurveInput::Ciani(c) => (vec![], vec![quartic_quotients(c)?.iter().map(genus1_piece).collect::<Result<Vec<_>>>()?]),
        CurveInput::Quartic(f) => {
            let s = standard_form_reduce(f)?;
            (vec![], vec![quartic_quotients(&s.ciani)?.iter().map(genus1_piece).collect::<Result<Vec<_>>>()?])
        }
    };
    Ok(Output::Richelot { input: input.encode(), decomposed, completely_decomposed: completely })
}

/// Invariants of a single curve.
pub fn invariants_of(input: &CurveInput, max_level: usize) -> Result<Output> {
    let quartic_key = |f: &GeneralQuartic| -> Result<(Vec<String>, u64)> {
        let d = involutions(f, max_level)?;
        let key = canonical_key(f, d.field.level())?;
        let r = aut_order_with(&d)?;
        Ok((key.encode(&d.field), r))
    };
    let (name, values, aut) = match input {
        CurveInput::Hyperelliptic(c) => match c.genus {
            2 => ("igusa", igusa(&c.k, &c.f)?.encode(), None),
            3 => ("shioda", shioda(&c.k, &c.f)?.encode(), None),
            g => return Err(Error::InvalidCurve(format!("invariants are implemented for genus 2 and 3, not {g}"))),
        },
        CurveInput::Quartic(f) => {
            let (v, r) = quartic_key(f)?;
            ("quartic-diagonal", v, Some(r))
        }
        CurveInput::Ciani(c) => {
            let (v, r) = quartic_key(&c.to_general())?;
            ("quartic-diagonal", v, Some(r))
        }
    };
    Ok(Output::Invariants { input: input.encode(), name: name.into(), values, aut_order: aut })
}

/// Runs one command and returns its document.
pub fn execute(cfg: &RunConfig) -> Result<Document> {
    cfg.validate()?;
    let opt = cfg.options();
    let output = match &cfg.command {
        Command::EnumHoweType { p } => Output::Enumeration { report: method1_with(*p, &opt)? },
        Command::EnumOortType { p } => Output::Enumeration { report: method2_with(*p, &opt)? },
        Command::EnumQuartic { p } => Output::Enumeration { report: method3_with(*p, &opt)? },
        Command::Exists { p, kind } => Output::Exists { p: *p, kind: *kind, found: decide_exists(*p, *kind)? },
        Command::Richelot { curve } => richelot_of(&CurveInput::parse(&read(curve)?)?)?,
        Command::Invariants { curve } => invariants_of(&CurveInput::parse(&read(curve)?)?, cfg.max_level)?,
        Command::VerifyExtremal { report, mode } => {
            let r = load_report(&read(report)?)?;
            let mode = mode.unwrap_or_else(|| expected_extremality(&r));
            let verdicts = verify_extremality(&r, mode)?;
            let all_ok = verdicts.iter().all(|v| v.ok);
            Output::Extremality { p: r.p, mode, verdicts, all_ok }
        }
    };
    Ok(Document { schema_version: SCHEMA_VERSION, config: cfg.clone(), output })
}

/// A class report from either a full document or a bare report.
pub fn load_report(s: &str) -> Result<ClassReport> {
    if let Ok(d) = Document::from_json(s) {
        return match d.output {
            Output::Enumeration { report } => Ok(report),
            _ => Err(Error::Parse("document does not hold an enumeration report".into())),
        };
    }
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn render(doc: &Document, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    }
}

fn destination(cfg: &RunConfig) -> Option<PathBuf> {
    if let Some(o) = &cfg.output {
        return Some(o.clone());
    }
    let dir = std::env::var_os(OUTPUT_DIR_ENV)?;
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let stem = match &cfg.command {
        Command::EnumHoweType { p } | Command::EnumOortType { p } | Command::EnumQuartic { p } | Command::Exists { p, .. } => {
            format!("{}-p{p}", cfg.command.name())
        }
        c => c.name().to_string(),
    };
    Some(PathBuf::from(dir).join(format!("{stem}.{ext}")))
}

/// Executes and writes the result; returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = execute(cfg).and_then(|doc| {
        let text = render(&doc, cfg.format);
        match destination(cfg) {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                }
                fs::write(&path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let rec = ErrorRecord::from(&e);
            let _ = writeln!(std::io::stderr(), "{}", serde_json::to_string(&rec).expect("error records serialize"));
            rec.exit_code
        }
    }
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&RunConfig::from_cli(cli)),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        RunConfig::from_cli(Cli::try_parse_from(std::iter::once("howe3").chain(args.iter().copied())).unwrap())
    }

    #[test]
    fn validation() {
        assert!(config(&["enum-oort-type", "--p", "23"]).validate().is_ok());
        assert_eq!(config(&["exists", "--p", "25", "--kind", "quartic"]).validate().unwrap_err(), Error::NotPrime(25));
        let e = config(&["--max-level", "13", "enum-quartic", "--p", "11"]).validate().unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(Cli::try_parse_from(["howe3", "exists", "--p", "11", "--kind", "octic"]).is_err());
    }

    #[test]
    fn curve_tags() {
        let h = CurveInput::parse("# comment\n\n17; 0; 16,0,0,0,1\n").unwrap();
        assert!(matches!(h, CurveInput::Hyperelliptic(_)));
        assert_eq!(CurveInput::parse(&h.encode()).unwrap().encode(), h.encode());
        assert!(matches!(CurveInput::parse("ciani: 13; 0; 1,2,3,4,5,6"), Ok(CurveInput::Ciani(_))));
        assert!(CurveInput::parse("octic: 1").is_err());
        assert!(CurveInput::parse("# nothing\n").is_err());
    }

    #[test]
    fn default_file_names() {
        std::env::set_var(OUTPUT_DIR_ENV, "/tmp/out");
        let cfg = config(&["--format", "csv", "enum-howe-type", "--p", "7"]);
        assert_eq!(destination(&cfg).unwrap(), PathBuf::from("/tmp/out/enum-howe-type-p7.csv"));
        let cfg = config(&["--output", "x.json", "enum-howe-type", "--p", "7"]);
        assert_eq!(destination(&cfg).unwrap(), PathBuf::from("x.json"));
        std::env::remove_var(OUTPUT_DIR_ENV);
    }

    #[test]
    fn documents_round_trip() {
        let doc = execute(&config(&["exists", "--p", "7", "--kind", "howe-type"])).unwrap();
        assert_eq!(Document::from_json(&doc.to_json()).unwrap(), doc);
        assert!(doc.to_csv().starts_with("p,kind,found,curve\n7,howe-type,true,"));
        assert!(load_report(&doc.to_json()).is_err());
    }
}
