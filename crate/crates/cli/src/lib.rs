//! Command-line front end for the `opchar` library.
//!
//! [`run`] parses arguments, dispatches to the library and writes either JSON or
//! aligned tables. Exit codes: 0 on success, 1 on a failed `verify`, 2 on usage or
//! input errors.

pub mod render;
pub mod verify;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use opchar::cyclic::{cobar_char, legendre, named_char, NamedOperad, StarSymFunc};
use opchar::exactsym::SymFunc;
use opchar::graphzoo::{enumerate, wick_rank_sum};
use opchar::hlaurent::{cch, feynman_char, free_modular_char, HLaurent, StableCharTable, TruncationSpec};
use opchar::json as js;
use opchar::moduli::{
    euler_chi_extract, f_det_ass_closed, harer_zagier_b, psi, stirling_check, ClosedForm, EulerSource,
};
use opchar::rational::{fmt_rational, parse_rational};

#[derive(Parser, Debug)]
#[command(name = "opchar", version, about = "Exact characteristics of cyclic and modular operads")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Truncation weight.
    #[arg(long, global = true, env = "OPCHAR_MAX_WEIGHT", default_value_t = 8)]
    max_weight: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Lowest power of hbar kept in Laurent series.
    #[arg(long, global = true, default_value_t = -4, allow_hyphen_values = true)]
    hbar_min: i32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Operad {
    Com,
    Ass,
    Lie,
}

impl From<Operad> for NamedOperad {
    fn from(o: Operad) -> Self {
        match o {
            Operad::Com => NamedOperad::Com,
            Operad::Ass => NamedOperad::Ass,
            Operad::Lie => NamedOperad::Lie,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic of a named cyclic operad.
    Char {
        #[arg(value_enum)]
        operad: Operad,
    },
    /// Plethystic Legendre transform of a symmetric function.
    Legendre(SymInput),
    /// Characteristic of the cobar construction.
    Cobar(SymInput),
    /// CCh of a stable character table.
    Cch(TableInput),
    /// CCh of the free modular operad on a stable character table.
    FreeModular(TableInput),
    /// CCh of the Feynman transform of a stable character table.
    Feynman(TableInput),
    /// Stable graph enumeration and graph sums.
    Graphs {
        #[command(subcommand)]
        command: GraphsCommand,
    },
    /// Euler characteristics of moduli spaces of curves.
    Moduli {
        #[command(subcommand)]
        command: ModuliCommand,
    },
    /// One-variable formal integrals.
    Integral {
        #[command(subcommand)]
        command: IntegralCommand,
    },
    /// Run cross-route oracle suites.
    Verify {
        /// Suite name, or all suites when omitted.
        suite: Option<String>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SymInput {
    /// SymFunc JSON file.
    #[arg(long)]
    input: Option<String>,
    /// Named operad whose characteristic is the input.
    #[arg(long, value_enum)]
    operad: Option<Operad>,
}

#[derive(Args, Debug)]
struct TableInput {
    /// Stable character table JSON file.
    #[arg(long, conflicts_with = "trivial")]
    table: Option<String>,
    /// Trivial one-dimensional representation at g,n (repeatable).
    #[arg(long, value_parser = parse_point)]
    trivial: Vec<(u32, u32)>,
}

#[derive(Subcommand, Debug)]
enum GraphsCommand {
    /// Isomorphism classes of connected stable graphs of type (g, n).
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        legs: u32,
        /// Label the legs 1..n instead of leaving them unlabelled.
        #[arg(long)]
        labelled: bool,
    },
    /// Sum over labelled stable graphs of products of vertex weights over |Aut|.
    Wick {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        legs: u32,
        /// Vertex weight a_{g,n} = v (repeatable).
        #[arg(long, value_parser = parse_coeff)]
        coeff: Vec<((u32, u32), String)>,
    },
}

#[derive(Subcommand, Debug)]
enum ModuliCommand {
    /// The series Psi(hbar).
    Psi {
        #[arg(long, default_value_t = 8)]
        order: i64,
    },
    /// Euler characteristic sums keyed by chi.
    Euler {
        #[arg(long, default_value_t = 8)]
        order: i64,
        /// Series to read the sums from.
        #[arg(long, value_enum, default_value_t = EulerFrom::Psi)]
        source: EulerFrom,
    },
    /// The Harer-Zagier double series, with diagnostics.
    Hz {
        #[arg(long, default_value_t = 4)]
        order: i64,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum EulerFrom {
    Psi,
    Fdet,
}

#[derive(Subcommand, Debug)]
enum IntegralCommand {
    /// Both sides of the Stirling identity.
    Stirling {
        #[arg(long, default_value_t = 10)]
        order: u32,
    },
}

fn parse_point(s: &str) -> Result<(u32, u32), String> {
    let (g, n) = s.split_once(',').ok_or_else(|| format!("expected g,n but got '{s}'"))?;
    let g = g.trim().parse().map_err(|e| format!("genus: {e}"))?;
    let n = n.trim().parse().map_err(|e| format!("legs: {e}"))?;
    Ok((g, n))
}

fn parse_coeff(s: &str) -> Result<((u32, u32), String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected g,n=value but got '{s}'"))?;
    Ok((parse_point(k)?, v.trim().to_string()))
}

/// Failure modes of a command.
enum Failure {
    Usage(String),
    Verify,
}

impl From<opchar::Error> for Failure {
    fn from(e: opchar::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buf = String::new();
    let code = match dispatch(&cli, &mut buf, err) {
        Ok(()) => 0,
        Err(Failure::Verify) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    };
    let _ = out.write_all(buf.as_bytes());
    code
}

fn emit(g: &Global, out: &mut String, value: Value, table: impl FnOnce() -> String) {
    match g.format {
        Format::Json => *out += &js::to_string(&value),
        Format::Table => *out += &table(),
    }
}

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    js::parse(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn sym_input(input: &SymInput, w: u32) -> Result<SymFunc, Failure> {
    match (&input.input, input.operad) {
        (Some(path), _) => Ok(js::symfunc_from_json(&read_json(path)?)?.truncate(w)),
        (None, Some(o)) => Ok(named_char(o.into(), w)),
        (None, None) => Err(Failure::Usage("one of --input or --operad is required".into())),
    }
}

fn table_input(input: &TableInput) -> Result<StableCharTable, Failure> {
    match &input.table {
        Some(path) => Ok(js::table_from_json(&read_json(path)?)?),
        None if !input.trivial.is_empty() => Ok(StableCharTable::trivial_at(&input.trivial)?),
        None => Err(Failure::Usage("one of --table or --trivial is required".into())),
    }
}

fn emit_symfunc(g: &Global, out: &mut String, f: &SymFunc) {
    emit(g, out, js::symfunc_to_json(f), || render::symfunc(f));
}

fn emit_hlaurent(g: &Global, out: &mut String, f: &HLaurent) {
    emit(g, out, js::hlaurent_to_json(f), || render::hlaurent(f));
}

fn dispatch(cli: &Cli, out: &mut String, err: &mut dyn Write) -> Result<(), Failure> {
    let g = &cli.global;
    let w = g.max_weight;
    let trunc = TruncationSpec::weight(w as i64).with_hexp_min_x2(2 * g.hbar_min);
    match &cli.command {
        Command::Char { operad } => emit_symfunc(g, out, &named_char((*operad).into(), w)),
        Command::Legendre(input) => {
            let f = StarSymFunc::new(sym_input(input, w)?)?;
            emit_symfunc(g, out, legendre(&f)?.as_symfunc());
        }
        Command::Cobar(input) => emit_symfunc(g, out, &cobar_char(&sym_input(input, w)?, w)?),
        Command::Cch(input) => emit_hlaurent(g, out, &cch(&table_input(input)?, w as i64)),
        Command::FreeModular(input) => emit_hlaurent(g, out, &free_modular_char(&table_input(input)?, &trunc)?),
        Command::Feynman(input) => emit_hlaurent(g, out, &feynman_char(&table_input(input)?, &trunc)?),
        Command::Graphs { command: GraphsCommand::Enumerate { genus, legs, labelled } } => {
            let classes = enumerate(*genus, *legs, *labelled)?;
            let value = json!({
                "genus": genus,
                "legs": legs,
                "labelled": labelled,
                "count": classes.len(),
                "classes": classes.iter().map(|c| json!({
                    "key": c.canon.key_hex(),
                    "aut": c.aut_order(),
                    "graph": js::graph_to_json(&c.graph),
                })).collect::<Vec<_>>(),
            });
            emit(g, out, value, || render::graph_classes(&classes));
        }
        Command::Graphs { command: GraphsCommand::Wick { genus, legs, coeff } } => {
            let mut a = BTreeMap::new();
            for ((cg, cn), v) in coeff {
                let (num, den) = v.split_once('/').unwrap_or((v, "1"));
                let r = parse_rational(num, den).ok_or_else(|| Failure::Usage(format!("bad rational '{v}'")))?;
                a.insert((*cg, *cn), r);
            }
            let sum = wick_rank_sum(*genus, *legs, &a)?;
            let value = json!({"genus": genus, "legs": legs, "num": sum.numer().to_string(), "den": sum.denom().to_string()});
            emit(g, out, value, || render::keyed_rationals(&["(g,n)", "sum"], [(format!("({genus},{legs})"), sum.clone())]));
        }
        Command::Moduli { command: ModuliCommand::Psi { order } } => {
            let s = psi(*order);
            emit(g, out, js::qseries_to_json(&s), || render::qseries(&s));
        }
        Command::Moduli { command: ModuliCommand::Euler { order, source } } => {
            let chis = match source {
                EulerFrom::Psi => euler_chi_extract(EulerSource::Psi(&psi(*order))),
                EulerFrom::Fdet => {
                    let f = f_det_ass_closed(w as i64, ClosedForm::Standard);
                    euler_chi_extract(EulerSource::FDetAss(&f))
                }
            };
            let value = json!({
                "sums": chis.iter().map(|(chi, v)| json!({
                    "chi": chi, "num": v.numer().to_string(), "den": v.denom().to_string()
                })).collect::<Vec<_>>()
            });
            emit(g, out, value, || render::keyed_rationals(&["chi", "sum of e(M_g,n / S_n)"], chis.iter().map(|(k, v)| (k.to_string(), v.clone()))));
        }
        Command::Moduli { command: ModuliCommand::Hz { order } } => {
            let report = harer_zagier_b(*order);
            for warning in report.warnings() {
                let _ = writeln!(err, "warning: {warning}");
            }
            let mut value = js::qseries_to_json(&report.series);
            value["n_cut"] = json!(report.n_cut);
            value["l_cut"] = json!(report.l_cut);
            value["warnings"] = json!(report.warnings());
            emit(g, out, value, || render::qseries(&report.series));
        }
        Command::Integral { command: IntegralCommand::Stirling { order } } => {
            let (left, right) = stirling_check(*order)?;
            let value = json!({
                "equal": left == right,
                "left": js::qseries_to_json(&left),
                "right": js::qseries_to_json(&right),
            });
            emit(g, out, value, || {
                let rows = left.terms().keys().chain(right.terms().keys()).collect::<std::collections::BTreeSet<_>>();
                let rows: Vec<Vec<String>> = rows
                    .into_iter()
                    .map(|&(h2, d)| {
                        vec![render::hbar(h2), fmt_rational(&left.coeff(h2, d)), fmt_rational(&right.coeff(h2, d))]
                    })
                    .collect();
                render::table(&["power", "integral", "zeta series"], &rows)
            });
            if left != right {
                return Err(Failure::Verify);
            }
        }
        Command::Verify { suite } => {
            let name = suite.as_deref().unwrap_or("all");
            let checks = verify::run_suite(name).ok_or_else(|| {
                Failure::Usage(format!("unknown suite '{name}'; expected one of all, {}", verify::SUITES.join(", ")))
            })?;
            let passed = checks.iter().all(|c| c.passed);
            let value = json!({"suite": name, "passed": passed, "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>()});
            emit(g, out, value, || {
                let rows: Vec<Vec<String>> = checks
                    .iter()
                    .map(|c| vec![c.suite.to_string(), c.name.clone(), if c.passed { "pass".into() } else { "FAIL".into() }])
                    .collect();
                render::table(&["suite", "check", "result"], &rows)
            });
            for c in checks.iter().filter(|c| !c.passed) {
                let _ = writeln!(err, "FAIL {}: {}: {}", c.suite, c.name, c.detail);
            }
            if !passed {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}
