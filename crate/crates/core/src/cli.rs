//! Command-line front end for the `hopf-kh` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alexander::{alexander_single, diagonal_multivariable, torres_check};
use crate::detector::{detect_hopf, Certificate};
use crate::error::{Error, Result};
use crate::homalg::{BigradedGroup, Coeff, GroupEntry, LaurentPoly};
use crate::khovanov::{jones_polynomial, kh, khr, module_action, ModuleAction};
use crate::koszul::{khi_bound, KhiBound};
use crate::library::DiagramLibrary;
use crate::linkdiag::{parse_pd, LinkDiagram};

#[derive(Parser, Debug)]
#[command(name = "hopf-kh", version, about = "Khovanov homology and Hopf link detection")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for batch input (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "F2")]
    F2,
    #[value(name = "Q")]
    Q,
}

impl From<CoeffArg> for Coeff {
    fn from(c: CoeffArg) -> Self {
        match c {
            CoeffArg::Z => Coeff::Z,
            CoeffArg::F2 => Coeff::F2,
            CoeffArg::Q => Coeff::Q,
        }
    }
}

/// A diagram given inline or a JSONL file of them.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Library name, PD code, or diagram JSON.
    pub input: Option<String>,
    /// Line-delimited input, one diagram per line.
    #[arg(long)]
    pub file: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct KhArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = CoeffArg::Z)]
    pub coeff: CoeffArg,
    #[arg(long)]
    pub reduced: bool,
    /// Marked component for reduced homology (implies --reduced).
    #[arg(long)]
    pub component: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Khovanov homology.
    Kh(KhArgs),
    /// Reduced Khovanov homology (same as `kh --reduced`).
    Khr(KhArgs),
    /// Jones polynomial from the Euler characteristic of Kh.
    Jones(InputArgs),
    /// Basepoint action on reduced homology over Q.
    Action {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        component: Option<usize>,
    },
    /// Rank bound from the Koszul complex.
    KoszulBound(InputArgs),
    /// Alexander polynomial and Torres check.
    Alexander(InputArgs),
    /// Hopf link detection certificate.
    Detect(InputArgs),
    /// Detection summary over a JSONL file, or the built-in library.
    Census {
        #[arg(long)]
        file: Option<String>,
    },
    /// Built-in diagrams.
    List,
}

/// Resolves a library name, PD code, or diagram JSON.
pub fn resolve_input(text: &str) -> Result<LinkDiagram> {
    let t = text.trim();
    if t.starts_with('{') {
        LinkDiagram::from_json(t)
    } else if t.starts_with("PD") {
        parse_pd(t)
    } else if let Some(name) = t.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
        DiagramLibrary::get(name)
    } else {
        DiagramLibrary::get(t)
    }
}

fn label(d: &LinkDiagram) -> String {
    d.name().map(str::to_string).unwrap_or_else(|| d.to_pd_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhOutput {
    pub diagram: String,
    pub coeff: Coeff,
    pub reduced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    pub groups: Vec<GroupEntry>,
}

impl KhOutput {
    pub fn group(&self) -> BigradedGroup {
        BigradedGroup::from_entries(self.coeff, &self.groups)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JonesOutput {
    pub diagram: String,
    pub jones: LaurentPoly,
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionOutput {
    pub diagram: String,
    pub action: ModuleAction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulOutput {
    pub diagram: String,
    pub bound: KhiBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderOutput {
    pub diagram: String,
    pub alexander: LaurentPoly,
    pub display: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal_multivariable: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linking_number: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torres: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub diagram: String,
    pub crossings: usize,
    pub components: usize,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<String>,
    pub kh_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListRow {
    pub name: String,
    pub description: String,
    pub crossings: usize,
    pub components: usize,
}

pub fn cmd_kh(d: &LinkDiagram, coeff: Coeff, reduced: bool, component: Option<usize>) -> Result<KhOutput> {
    let reduced = reduced || component.is_some();
    let (g, component) = if reduced {
        let c = component.unwrap_or_else(|| d.distinguished_component());
        (khr(d, c, coeff)?, Some(c))
    } else {
        (kh(d, coeff)?, None)
    };
    Ok(KhOutput { diagram: label(d), coeff, reduced, component, groups: g.entries() })
}

pub fn cmd_jones(d: &LinkDiagram) -> Result<JonesOutput> {
    let jones = jones_polynomial(&kh(d, Coeff::Z)?);
    Ok(JonesOutput { diagram: label(d), display: jones.display_in("q"), jones })
}

pub fn cmd_action(d: &LinkDiagram, component: Option<usize>) -> Result<ActionOutput> {
    let c = component.unwrap_or_else(|| d.distinguished_component());
    Ok(ActionOutput { diagram: label(d), action: module_action(d, c)? })
}

pub fn cmd_koszul_bound(d: &LinkDiagram) -> Result<KoszulOutput> {
    Ok(KoszulOutput { diagram: label(d), bound: khi_bound(d)? })
}

pub fn cmd_alexander(d: &LinkDiagram) -> Result<AlexanderOutput> {
    let delta = alexander_single(d);
    let (diag, lk, torres) = if d.component_count() == 2 {
        let diag = diagonal_multivariable(&delta).ok();
        let lk = d.linking_number(0, 1)?;
        let torres = diag.as_ref().map(|p| torres_check(p, lk));
        (diag, Some(lk), torres)
    } else {
        (None, None, None)
    };
    Ok(AlexanderOutput {
        diagram: label(d),
        display: delta.display_in("t"),
        alexander: delta,
        diagonal_multivariable: diag,
        linking_number: lk,
        torres,
    })
}

pub fn cmd_detect(d: &LinkDiagram) -> Result<Certificate> {
    detect_hopf(d)
}

fn census_row(d: &LinkDiagram) -> Result<CensusRow> {
    let c = detect_hopf(d)?;
    Ok(CensusRow {
        diagram: label(d),
        crossings: d.crossing_count(),
        components: d.component_count(),
        verdict: c.verdict.to_string(),
        failed_step: c.failed_step().map(|s| s.name.clone()),
        kh_rank: c.kh.to_field(Coeff::Q).total_rank(),
    })
}

/// `Kh` as a grid with `q` down the side and `h` across.
pub fn render_group_table(g: &BigradedGroup) -> String {
    let Some((h0, h1)) = g.h_range() else { return "0\n".into() };
    let mut qs: Vec<i64> = g.support().iter().map(|k| k.1).collect();
    qs.sort_unstable();
    qs.dedup();
    qs.reverse();
    let cell = |h: i64, q: i64| -> String {
        let a = g.get(h, q);
        if a.is_zero() {
            String::new()
        } else if g.coeff.is_field() {
            a.free_rank.to_string()
        } else {
            a.to_string()
        }
    };
    let mut rows =
        vec![std::iter::once("q\\h".to_string()).chain((h0..=h1).map(|h| h.to_string())).collect::<Vec<_>>()];
    for &q in &qs {
        rows.push(std::iter::once(q.to_string()).chain((h0..=h1).map(|h| cell(h, q))).collect());
    }
    align(&rows)
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn render_certificate(c: &Certificate) -> String {
    let mut out = format!("verdict: {}\n", c.verdict);
    let rows: Vec<Vec<String>> = c
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                format!("({})", (b'a' + i as u8) as char),
                if s.pass { "pass" } else { "FAIL" }.into(),
                s.name.clone(),
                s.citation.clone(),
            ]
        })
        .collect();
    for r in rows {
        let _ = writeln!(out, "{:<4} {:<4}  {:<24} {}", r[0], r[1], r[2], r[3]);
    }
    if !c.verdict.is_hopf() {
        out.push_str("Kh(L;Z):\n");
        out.push_str(&render_group_table(&c.kh));
    }
    out
}

/// One rendered result per input, in input order.
enum Rendered {
    Json(String),
    Table(String),
}

fn render<T: Serialize>(format: Format, value: &T, table: impl FnOnce(&T) -> String) -> Result<Rendered> {
    Ok(match format {
        Format::Json => Rendered::Json(serde_json::to_string(value)?),
        Format::Table => Rendered::Table(table(value)),
    })
}

fn run_one(command: &Command, format: Format, d: &LinkDiagram) -> Result<Rendered> {
    match command {
        Command::Kh(a) => {
            let o = cmd_kh(d, a.coeff.into(), a.reduced, a.component)?;
            render(format, &o, |o| {
                let mut s = format!("{} ({}{})\n", o.diagram, if o.reduced { "Khr, " } else { "Kh, " }, o.coeff);
                s.push_str(&render_group_table(&o.group()));
                s
            })
        }
        Command::Khr(a) => {
            let o = cmd_kh(d, a.coeff.into(), true, a.component)?;
            render(format, &o, |o| format!("{} (Khr, {})\n{}", o.diagram, o.coeff, render_group_table(&o.group())))
        }
        Command::Jones(_) => render(format, &cmd_jones(d)?, |o| format!("{}\n", o.display)),
        Command::Action { component, .. } => render(format, &cmd_action(d, *component)?, |o| {
            let mut s = format!(
                "{}: action on Khr (marked component {}), dimension {}\n",
                o.diagram,
                o.action.distinguished,
                o.action.dim()
            );
            for (i, m) in &o.action.matrices {
                let _ = writeln!(s, "x_{i}: rank {}", m.rank());
            }
            let _ = writeln!(s, "trivial: {}", o.action.is_trivial());
            s
        }),
        Command::KoszulBound(_) => render(format, &cmd_koszul_bound(d)?, |o| format!("{}\n", o.bound.bound)),
        Command::Alexander(_) => render(format, &cmd_alexander(d)?, |o| {
            let mut s = format!("{}\n", o.display);
            if let (Some(p), Some(lk), Some(t)) = (&o.diagonal_multivariable, o.linking_number, o.torres) {
                let _ = writeln!(s, "diagonal: {}  lk: {lk}  torres: {t}", p.display_in("t"));
            }
            s
        }),
        Command::Detect(_) => render(format, &cmd_detect(d)?, render_certificate),
        Command::Census { .. } => render(format, &census_row(d)?, |r| {
            format!("{:<24} {:>3} {:>2}  {}\n", r.diagram, r.crossings, r.components, r.verdict)
        }),
        Command::List => unreachable!("list takes no diagram"),
    }
}

fn read_lines(path: &str) -> Result<Vec<(usize, String)>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let mut out = vec![];
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| Error::Io(format!("{path}: {e}")))?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

/// Runs a parsed command, writing results to `out` and problems to `err`.
/// Returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    dispatch(cli, &pool, out, err)
}

fn dispatch(cli: &Cli, pool: &rayon::ThreadPool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (input, file) = match &cli.command {
        Command::List => return list(cli.format, out),
        Command::Kh(a) | Command::Khr(a) => (a.input.input.clone(), a.input.file.clone()),
        Command::Jones(a) | Command::KoszulBound(a) | Command::Alexander(a) | Command::Detect(a) => {
            (a.input.clone(), a.file.clone())
        }
        Command::Action { input, .. } => (input.input.clone(), input.file.clone()),
        Command::Census { file } => (None, file.clone()),
    };
    // (line number, source text)
    let sources: Vec<(usize, String)> = match (input, file) {
        (Some(i), None) => vec![(0, i)],
        (None, Some(path)) => match read_lines(&path) {
            Ok(l) => l,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        },
        (None, None) if matches!(cli.command, Command::Census { .. }) => {
            DiagramLibrary::names().into_iter().enumerate().map(|(i, n)| (i + 1, n.to_string())).collect()
        }
        (None, None) => {
            let _ = writeln!(err, "error: give a diagram or --file");
            return 1;
        }
        (Some(_), Some(_)) => {
            let _ = writeln!(err, "error: give either a diagram or --file, not both");
            return 1;
        }
    };
    let results: Vec<Result<Rendered>> = pool.install(|| {
        sources
            .par_iter()
            .map(|(_, text)| resolve_input(text).and_then(|d| run_one(&cli.command, cli.format, &d)))
            .collect()
    });
    let mut status = 0;
    for ((line, _), r) in sources.iter().zip(results) {
        match r {
            Ok(Rendered::Json(s)) => {
                let _ = writeln!(out, "{s}");
            }
            Ok(Rendered::Table(s)) => {
                let _ = write!(out, "{s}");
            }
            Err(e) => {
                status = 1;
                let _ = if *line == 0 { writeln!(err, "error: {e}") } else { writeln!(err, "error: line {line}: {e}") };
            }
        }
    }
    status
}

fn list(format: Format, out: &mut dyn Write) -> i32 {
    let rows: Vec<ListRow> = DiagramLibrary::all()
        .iter()
        .map(|d| {
            let name = d.name().expect("library diagrams are named").to_string();
            ListRow {
                description: DiagramLibrary::description(&name).unwrap_or_default().to_string(),
                name,
                crossings: d.crossing_count(),
                components: d.component_count(),
            }
        })
        .collect();
    match format {
        Format::Json => {
            for r in &rows {
                let _ = writeln!(out, "{}", serde_json::to_string(r).expect("serializable"));
            }
        }
        Format::Table => {
            let mut table = vec![vec!["name".into(), "crossings".into(), "components".into(), "description".into()]];
            table.extend(rows.iter().map(|r| {
                vec![r.name.clone(), r.crossings.to_string(), r.components.to_string(), r.description.clone()]
            }));
            let _ = write!(out, "{}", align_left(&table));
        }
    }
    0
}

fn align_left(rows: &[Vec<String>]) -> String {
    let widths: BTreeMap<usize, usize> = rows
        .iter()
        .flat_map(|r| r.iter().enumerate().map(|(c, s)| (c, s.chars().count())))
        .fold(BTreeMap::new(), |mut m, (c, w)| {
            let e = m.entry(c).or_insert(0);
            *e = (*e).max(w);
            m
        });
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[&c])).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock())
}
