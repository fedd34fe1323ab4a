//! `exoflop`: singular rays, stratifications, cohomology and resolution
//! graphs for quintic gauged linear sigma models.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use exoflop::atlas::{self, Atlas};
use exoflop::cohomology::{self, ConifoldData};
use exoflop::model::Sheet;
use exoflop::parse::parse_constant;
use exoflop::resolution;
use exoflop::singular::{self, AnalysisOptions, CandidateSource, ReportJson, TransversalityReport};
use exoflop::strata::{self, StrataError};
use exoflop::{parse_polynomial, CyclotomicField, ParseContext};

/// Exit status for incomplete or unclassified results.
const EXIT_INCOMPLETE: u8 = 2;

#[derive(Parser)]
#[command(name = "exoflop", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Ansatz,
    List,
    Homotopy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Raw,
    Refined,
}

#[derive(Args)]
struct SearchArgs {
    /// Where candidate singular rays come from.
    #[arg(long, value_enum, default_value_t = Source::Ansatz)]
    source: Source,
    /// Candidate file for `--source list`: one point per line,
    /// comma-separated coordinates.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Order k of the root of unity zeta.
    #[arg(long, default_value_t = 5)]
    zeta_order: u32,
    /// Worker threads for candidate checking.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for `--source homotopy`.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Find and classify the singular rays of G.
    Analyze {
        /// Polynomial file, or the polynomial itself.
        input: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Ground-state variety on one sheet.
    Stratify {
        /// Report JSON from `analyze`, a polynomial file, or a polynomial.
        input: String,
        /// Sign of the moment-map level: pos or neg.
        #[arg(long)]
        sheet: Sheet,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Mayer–Vietoris cohomology of the compactified variety.
    Cohomology {
        /// Conifold data JSON file.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Refined)]
        mode: Mode,
    },
    /// Small resolutions and the transition graph.
    Resolutions {
        /// Conifold data JSON file.
        input: PathBuf,
        /// Also write the graph in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

struct Output {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let incomplete = e
                .downcast_ref::<StrataError>()
                .is_some_and(|s| *s == StrataError::IncompleteReport);
            ExitCode::from(if incomplete { EXIT_INCOMPLETE } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Analyze { input, search } => analyze(input, search, cli.format),
        Command::Stratify { input, sheet, search } => stratify(input, *sheet, search, cli.format),
        Command::Cohomology { input, mode } => cohomology_cmd(input, *mode, cli.format),
        Command::Resolutions { input, dot } => resolutions(input, dot.as_deref(), cli.format),
    }
}

/// File contents if `arg` names a file, else `arg` itself.
fn read_input(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

/// Drops `#` comments and joins lines.
fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ")
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn reject_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        bail!("--format dot is only available for resolutions");
    }
    Ok(())
}

fn read_candidates(path: &Path, field: &CyclotomicField) -> Result<Vec<Vec<exoflop::Cyclo>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.split(',')
                .map(|c| parse_constant(c.trim(), field))
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("{}:{}", path.display(), i + 1))
        })
        .collect()
}

fn run_analysis(input: &str, search: &SearchArgs) -> Result<TransversalityReport> {
    let ctx = ParseContext::quintic(search.zeta_order)?;
    let text = strip_comments(&read_input(input)?);
    let g = parse_polynomial(&text, &ctx)?;
    let source = match search.source {
        Source::Ansatz => CandidateSource::AnsatzRoots,
        Source::List => {
            let Some(path) = &search.candidates else {
                bail!("--source list needs --candidates FILE");
            };
            CandidateSource::UserList(read_candidates(path, &ctx.field)?)
        }
        Source::Homotopy => CandidateSource::homotopy(search.seed),
    };
    let opts = AnalysisOptions {
        jobs: search.jobs.max(1),
        ..AnalysisOptions::default()
    };
    Ok(singular::verify_transversal(&g, &source, opts)?)
}

fn analyze(input: &str, search: &SearchArgs, format: Format) -> Result<Output> {
    reject_dot(format)?;
    let report = run_analysis(input, search)?;
    let text = match format {
        Format::Json => to_json(&report.to_json())?,
        _ => {
            let mut out = format!("{}\n", report.summary());
            out.push_str(&format!("source: {} (zeta order {})\n", report.source, report.zeta_order));
            match &report.certificate {
                Some(c) => out.push_str(&format!(
                    "jacobian ideal: krull dimension {}, length {}\n",
                    c.krull_dimension, c.length
                )),
                None => out.push_str("jacobian ideal: groebner budget exhausted\n"),
            }
            out.push_str(&format!("isolated: {}\ncomplete: {}\n", report.isolated, report.complete));
            for r in &report.rays {
                out.push_str(&format!("  {r}\n"));
            }
            for u in &report.unverified {
                let coords: Vec<String> = u.coords.iter().map(singular::format_complex).collect();
                out.push_str(&format!("  ({}) Unclassified\n", coords.join(", ")));
            }
            out
        }
    };
    Ok(Output {
        text,
        code: if report.complete { 0 } else { EXIT_INCOMPLETE },
    })
}

fn load_report(input: &str, search: &SearchArgs) -> Result<TransversalityReport> {
    let text = read_input(input)?;
    if text.trim_start().starts_with('{') {
        let json: ReportJson = serde_json::from_str(&text).context("parsing report JSON")?;
        Ok(TransversalityReport::from_json(&json)?)
    } else {
        run_analysis(input, search)
    }
}

fn exocurve_atlases(sheet: Sheet) -> Vec<Atlas> {
    let a = atlas::build_exocurve(sheet);
    match atlas::compactify(&a) {
        Ok(c) => vec![a, c],
        Err(_) => vec![a],
    }
}

fn stratify(input: &str, sheet: Sheet, search: &SearchArgs, format: Format) -> Result<Output> {
    reject_dot(format)?;
    let report = load_report(input, search)?;
    let v = strata::build_ground_state_variety(&report, sheet)?;
    let atlases = if v.exocurve_count() > 0 { exocurve_atlases(sheet) } else { Vec::new() };
    let text = match format {
        Format::Json => {
            let mut value = serde_json::to_value(v.to_json())?;
            if !atlases.is_empty() {
                value["exocurve"] = Value::Array(
                    atlases
                        .iter()
                        .map(|a| serde_json::to_value(a.to_json()))
                        .collect::<Result<_, _>>()?,
                );
            }
            to_json(&value)?
        }
        _ => {
            let mut out = v.report();
            for a in &atlases {
                out.push_str(&format!("exocurve {}", a.report()));
            }
            out
        }
    };
    Ok(Output { text, code: 0 })
}

fn load_conifold(path: &Path) -> Result<ConifoldData> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let data: ConifoldData = serde_json::from_str(&text).context("parsing conifold data")?;
    data.validate()?;
    Ok(data)
}

fn cohomology_cmd(input: &Path, mode: Mode, format: Format) -> Result<Output> {
    reject_dot(format)?;
    let data = load_conifold(input)?;
    let mv = cohomology::mayer_vietoris_report(&data)?;
    let selected = match mode {
        Mode::Raw => &mv.raw,
        Mode::Refined => &mv.refined,
    };
    let kahler = cohomology::check_kahler_package(selected, &data)?;
    let classes = cohomology::antenna_classes(&data)?;
    let mode_name = match mode {
        Mode::Raw => "raw",
        Mode::Refined => "refined",
    };
    let text = match format {
        Format::Json => to_json(&json!({
            "mode": mode_name,
            "cohomology": selected,
            "euler_characteristic": cohomology::euler_characteristic(selected),
            "raw": mv.raw,
            "refined": mv.refined,
            "n": mv.n,
            "N": mv.classes,
            "discrepancy": mv.discrepancy,
            "classes": classes,
            "kahler": kahler,
        }))?,
        _ => {
            let mut out = format!("H*(V_bar) [{mode_name}] = {}\n", selected);
            out.push_str(&cohomology::format_table(&mv));
            out.push_str(&format!("antenna classes: {:?}\n", classes));
            out.push_str("Kahler package (even degrees):\n");
            for item in &kahler.items {
                out.push_str(&format!(
                    "  ({}) {} {}\n",
                    item.name,
                    if item.pass { "pass" } else { "FAIL" },
                    item.detail
                ));
            }
            for w in &kahler.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
    };
    Ok(Output { text, code: 0 })
}

fn resolutions(input: &Path, dot: Option<&Path>, format: Format) -> Result<Output> {
    let data = load_conifold(input)?;
    let graph = resolution::build_transition_graph(&data)?;
    let choices: Vec<String> = resolution::enumerate_small_resolutions(&data)?
        .map(|c| c.to_string())
        .collect();
    let naive = resolution::naive_resolution_count(data.n);
    if let Some(path) = dot {
        fs::write(path, graph.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = match format {
        Format::Dot => graph.to_dot(),
        Format::Json => to_json(&json!({
            "resolutions": choices,
            "count": choices.len(),
            "naive_count": naive.to_string(),
            "graph": graph.to_json(),
        }))?,
        Format::Text => {
            let mut out = format!(
                "{} compatible small resolutions (2^N, N = {}); per-node count would be 2^{} = {}\n",
                choices.len(),
                data.class_count(),
                data.n,
                naive
            );
            out.push_str(&graph.report());
            out
        }
    };
    Ok(Output { text, code: 0 })
}
