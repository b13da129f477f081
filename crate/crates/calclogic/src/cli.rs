//! The `calclogic` command line.
//!
//! Exit status: 0 success, True or complete; 1 False or a discrepancy;
//! 2 Unknown or incomplete; 64 usage error; 65 bad input data.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use calclogic_core::formula::{parse_formula_with, Macros};
use calclogic_core::oracle::{compare, CompareEntry};
use calclogic_core::rewrite::{reachable, step_text, Reach, Truth};
use calclogic_core::signature::SortId;
use calclogic_core::term::{canonicalize, parse_term, show, sort_of};
use calclogic_core::{builtin, normalize, step, Budget, Checker, Formula, GeneratorSet, Presentation, Term, Verdict};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::fixture::{fixture, fixture_names, Fixture};
use crate::record::{discrepancy_record, to_line, trace_record, verdict_record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line.
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "calclogic", version, about = "Derive and check spatial-behavioral logics of calculi")]
pub struct Invocation {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Maximum rewrite steps along one path.
    #[arg(long, global = true, default_value_t = Budget::default().rewrite_depth)]
    pub depth: usize,
    /// Maximum states visited by one reachability search.
    #[arg(long, global = true, default_value_t = Budget::default().explore_nodes)]
    pub nodes: usize,
    /// Maximum size of modal witnesses.
    #[arg(long, global = true, default_value_t = Budget::default().witness_size)]
    pub witness_size: usize,
    /// Maximum fixed point assumptions per variable on one branch.
    #[arg(long, global = true, default_value_t = Budget::default().unfold_guard)]
    pub unfold_guard: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a presentation.
    Validate { calc: String },
    /// List one-step successors.
    Rewrite {
        calc: String,
        term: String,
        /// Also print the rule, position and bindings of each step.
        #[arg(long)]
        steps: bool,
    },
    /// Search for a rewrite sequence reaching a goal term.
    Trace {
        calc: String,
        term: String,
        #[arg(long)]
        goal: String,
    },
    /// Rewrite leftmost-innermost to a normal form.
    Normalize {
        calc: String,
        term: String,
        #[arg(long)]
        steps: bool,
    },
    /// Check a term against a formula.
    Check { calc: String, term: String, formula: String },
    /// List the terms up to a size that satisfy a formula.
    Denote {
        calc: String,
        formula: String,
        /// Generator atoms: `a,b` for the formula's sort or `Sort:a,b`;
        /// repeat the flag for several sorts.
        #[arg(long)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        /// Sort of the formula; defaults to the calculus's main sort.
        #[arg(long)]
        sort: Option<String>,
    },
    /// Compare the checker with the set-based oracle.
    Compare {
        calc: String,
        /// File with one formula per line, optionally prefixed by a sort
        /// name; `#` starts a comment. Defaults to the builtin corpus.
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        gens: Vec<String>,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// List the builtin calculi.
    ListBuiltins,
}

/// A presentation with whatever fixture data ships with it.
struct Calc {
    p: Presentation,
    fixture: Option<Fixture>,
}

impl Calc {
    fn load(name: &str) -> Result<Calc, CliError> {
        if builtin::NAMES.contains(&name) {
            let fx = fixture(name)?;
            return Ok(Calc { p: fx.presentation.clone(), fixture: Some(fx) });
        }
        let path = Path::new(name);
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "`{name}` is neither a builtin ({}) nor a file",
                fixture_names().join(", ")
            )));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{name}: {e}")))?;
        let p = calclogic_core::parse_presentation(&text).map_err(|e| CliError::Data(invalid_message(name, &e)))?;
        Ok(Calc { p, fixture: None })
    }

    fn term(&self, text: &str) -> Result<Term, CliError> {
        let t = match &self.fixture {
            Some(fx) => fx.term(text)?,
            None => parse_term(&self.p, text)?,
        };
        Ok(canonicalize(&self.p, &t))
    }

    fn formula(&self, sort: SortId, text: &str) -> Result<Formula, CliError> {
        let empty = Macros::new();
        let macros = self.fixture.as_ref().map(|f| &f.macros).unwrap_or(&empty);
        Ok(parse_formula_with(&self.p, sort, text, macros)?)
    }

    fn generators(&self) -> GeneratorSet {
        self.fixture.as_ref().map(|f| f.generators.clone()).unwrap_or_default()
    }

    fn main_sort(&self) -> Result<SortId, CliError> {
        if let Some(fx) = &self.fixture {
            return Ok(fx.sort);
        }
        self.p
            .sort_ids()
            .find(|&s| self.p.is_logic_sort(s))
            .ok_or_else(|| CliError::Data("no sort has a logic enabled".into()))
    }

    fn sort(&self, name: &str) -> Result<SortId, CliError> {
        self.p.sort_id(name).ok_or_else(|| CliError::Usage(format!("unknown sort `{name}`")))
    }
}

fn invalid_message(name: &str, e: &calclogic_core::Error) -> String {
    match e {
        calclogic_core::Error::Invalid(diags) => {
            let lines: Vec<String> = diags.iter().map(|d| format!("{name}: {d}")).collect();
            lines.join("\n")
        }
        other => format!("{name}: {other}"),
    }
}

/// Parses `--gens` values: `a,b` belongs to `default`, `S:a,b` to sort `S`.
fn parse_gens(calc: &Calc, flags: &[String], default: SortId, base: GeneratorSet) -> Result<GeneratorSet, CliError> {
    let mut g = base;
    for flag in flags {
        let (sort, list) = match flag.split_once(':') {
            Some((s, rest)) => (calc.sort(s.trim())?, rest),
            None => (default, flag.as_str()),
        };
        let names: Vec<String> = list.split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect();
        g = g.with(sort, names);
    }
    Ok(g)
}

fn term_sort(p: &Presentation, t: &Term) -> Result<SortId, CliError> {
    sort_of(p, t).ok_or_else(|| CliError::Data("term has no sort".into()))
}

#[derive(Serialize)]
struct TermRecord {
    term: String,
}

#[derive(Serialize)]
struct DenoteSummary {
    members: usize,
    unknown: usize,
    examined: usize,
}

#[derive(Serialize)]
struct CompareSummary {
    pairs: usize,
    discrepancies: usize,
    unknowns: usize,
    unjustified_unknowns: usize,
    oracle_uncertain: usize,
}

#[derive(Serialize)]
struct ValidateRecord<'a> {
    calculus: &'a str,
    sorts: usize,
    constructors: usize,
    equations: usize,
    rules: usize,
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Data(format!("write failed: {e}"))
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    64
                }
            };
        }
    };
    match execute(&inv, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed invocation.
pub fn execute(inv: &Invocation, out: &mut dyn Write) -> Result<i32, CliError> {
    let budget = Budget {
        rewrite_depth: inv.depth,
        explore_nodes: inv.nodes,
        witness_size: inv.witness_size,
        unfold_guard: inv.unfold_guard,
    };
    if !budget.is_positive() {
        return Err(CliError::Usage("budgets must be positive".into()));
    }
    let machine = inv.format == Format::Machine;
    match &inv.command {
        Command::ListBuiltins => {
            for name in fixture_names() {
                if machine {
                    writeln!(out, "{}", to_line(&serde_json::json!({ "builtin": name }))).map_err(io_err)?;
                } else {
                    writeln!(out, "{name}").map_err(io_err)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Validate { calc } => {
            let c = Calc::load(calc)?;
            let rec = ValidateRecord {
                calculus: calc,
                sorts: c.p.sort_ids().count(),
                constructors: c.p.op_ids().count(),
                equations: c.p.equations.len(),
                rules: c.p.rules.len(),
            };
            if machine {
                writeln!(out, "{}", to_line(&rec)).map_err(io_err)?;
            } else {
                writeln!(
                    out,
                    "ok: {} sorts, {} constructors, {} equations, {} rules",
                    rec.sorts, rec.constructors, rec.equations, rec.rules
                )
                .map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Rewrite { calc, term, steps } => {
            let c = Calc::load(calc)?;
            let t = c.term(term)?;
            for (next, s) in step(&c.p, &t) {
                if machine {
                    let tr = calclogic_core::Trace { source: t.clone(), steps: vec![s], target: next };
                    writeln!(out, "{}", to_line(&trace_record(&c.p, &tr))).map_err(io_err)?;
                } else if *steps {
                    writeln!(out, "{}  by {}", show(&c.p, &next), step_text(&c.p, &s)).map_err(io_err)?;
                } else {
                    writeln!(out, "{}", show(&c.p, &next)).map_err(io_err)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Normalize { calc, term, steps } => {
            let c = Calc::load(calc)?;
            let t = c.term(term)?;
            let (trace, code) = match normalize(&c.p, &t, &budget) {
                Ok(tr) => (tr, EXIT_OK),
                Err(e) => (e.partial, EXIT_UNKNOWN),
            };
            if machine {
                writeln!(out, "{}", to_line(&trace_record(&c.p, &trace))).map_err(io_err)?;
            } else {
                if *steps {
                    writeln!(out, "{}", trace.display(&c.p)).map_err(io_err)?;
                } else if code == EXIT_OK {
                    writeln!(out, "{}", show(&c.p, &trace.target)).map_err(io_err)?;
                }
                if code != EXIT_OK {
                    writeln!(out, "unknown (no normal form within {} steps)", budget.rewrite_depth).map_err(io_err)?;
                }
            }
            Ok(code)
        }
        Command::Trace { calc, term, goal } => {
            let c = Calc::load(calc)?;
            let t = c.term(term)?;
            let g = c.term(goal)?;
            let r = reachable(&c.p, &t, &mut |s| if *s == g { Truth::True } else { Truth::False }, &budget);
            let (verdict, code) = match &r {
                Reach::Found(tr) => (Verdict::True(calclogic_core::Evidence { witness: None, trace: Some(tr.clone()) }), EXIT_OK),
                Reach::Exhausted { .. } => (Verdict::False, EXIT_FALSE),
                Reach::Unknown { reason, .. } => (Verdict::Unknown(reason.clone()), EXIT_UNKNOWN),
            };
            if machine {
                let stats = calclogic_core::Stats { states: r.explored(), ..Default::default() };
                writeln!(out, "{}", to_line(&verdict_record(&c.p, &verdict, &stats))).map_err(io_err)?;
            } else {
                match &r {
                    Reach::Found(tr) => writeln!(out, "true\n{}", tr.display(&c.p)).map_err(io_err)?,
                    Reach::Exhausted { explored } => {
                        writeln!(out, "false (goal unreachable; {explored} states explored)").map_err(io_err)?
                    }
                    Reach::Unknown { .. } => writeln!(out, "{verdict}").map_err(io_err)?,
                }
            }
            Ok(code)
        }
        Command::Check { calc, term, formula } => {
            let c = Calc::load(calc)?;
            let t = c.term(term)?;
            let f = c.formula(term_sort(&c.p, &t)?, formula)?;
            let mut checker = Checker::new(&c.p, budget).with_generators(c.generators());
            let v = checker.check(&t, &f)?;
            if machine {
                writeln!(out, "{}", to_line(&verdict_record(&c.p, &v, &checker.stats()))).map_err(io_err)?;
            } else {
                writeln!(out, "{v}").map_err(io_err)?;
                if let Verdict::True(e) = &v {
                    if let Some(w) = &e.witness {
                        writeln!(out, "witness {}", show(&c.p, w)).map_err(io_err)?;
                    }
                    if let Some(tr) = &e.trace {
                        writeln!(out, "{}", tr.display(&c.p)).map_err(io_err)?;
                    }
                }
            }
            Ok(match v {
                Verdict::True(_) => EXIT_OK,
                Verdict::False => EXIT_FALSE,
                Verdict::Unknown(_) => EXIT_UNKNOWN,
            })
        }
        Command::Denote { calc, formula, gens, max_size, sort } => {
            let c = Calc::load(calc)?;
            let s = match sort {
                Some(name) => c.sort(name)?,
                None => c.main_sort()?,
            };
            let f = c.formula(s, formula)?;
            let g = parse_gens(&c, gens, s, GeneratorSet::new())?;
            let mut checker = Checker::new(&c.p, budget).with_generators(g.clone());
            let d = checker.denote(&f, &g, *max_size)?;
            for m in &d.members {
                if machine {
                    writeln!(out, "{}", to_line(&TermRecord { term: show(&c.p, m) })).map_err(io_err)?;
                } else {
                    writeln!(out, "{}", show(&c.p, m)).map_err(io_err)?;
                }
            }
            let summary = DenoteSummary { members: d.members.len(), unknown: d.unknown.len(), examined: d.examined };
            if machine {
                writeln!(out, "{}", to_line(&summary)).map_err(io_err)?;
            } else if !d.complete() {
                for u in &d.unknown {
                    writeln!(out, "unknown {}", show(&c.p, u)).map_err(io_err)?;
                }
            }
            Ok(if d.complete() { EXIT_OK } else { EXIT_UNKNOWN })
        }
        Command::Compare { calc, corpus, gens, max_size } => {
            let c = Calc::load(calc)?;
            let main = c.main_sort()?;
            let (formulas, base_gens, default_size) = match corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))?;
                    (read_corpus(&c, main, &text)?, GeneratorSet::new(), 5)
                }
                None => match &c.fixture {
                    Some(fx) => (fx.compare_formulas()?, fx.compare.gens.clone(), fx.compare.max_size),
                    None => return Err(CliError::Usage("--corpus is required for a calculus file".into())),
                },
            };
            let g = parse_gens(&c, gens, main, base_gens)?;
            let report = compare(&c.p, &formulas, &g, max_size.unwrap_or(default_size), &budget);
            if machine {
                let tagged: [(&'static str, &Vec<CompareEntry>); 3] = [
                    ("discrepancy", &report.discrepancies),
                    ("unjustified-unknown", &report.unjustified_unknowns),
                    ("unknown", &report.unknowns),
                ];
                for (kind, list) in tagged {
                    for e in list {
                        writeln!(out, "{}", to_line(&discrepancy_record(kind, e))).map_err(io_err)?;
                    }
                }
                let summary = CompareSummary {
                    pairs: report.pairs,
                    discrepancies: report.discrepancies.len(),
                    unknowns: report.unknowns.len(),
                    unjustified_unknowns: report.unjustified_unknowns.len(),
                    oracle_uncertain: report.oracle_uncertain,
                };
                writeln!(out, "{}", to_line(&summary)).map_err(io_err)?;
            } else {
                write!(out, "{report}").map_err(io_err)?;
            }
            Ok(if !report.agrees() {
                EXIT_FALSE
            } else if report.unknowns.is_empty() && report.unjustified_unknowns.is_empty() {
                EXIT_OK
            } else {
                EXIT_UNKNOWN
            })
        }
    }
}

/// Reads a corpus file: one formula per line, optionally preceded by the
/// name of its sort.
pub fn read_corpus_text(p: &Presentation, macros: &Macros, main: SortId, text: &str) -> Result<Vec<Formula>, CliError> {
    let mut formulas = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (sort, body) = match line.split_once(char::is_whitespace) {
            Some((first, rest)) if p.sort_id(first).is_some() => (p.sort_id(first).unwrap(), rest.trim()),
            _ => (main, line),
        };
        let f = parse_formula_with(p, sort, body, macros).map_err(|e| CliError::Data(format!("corpus line {}: {e}", i + 1)))?;
        formulas.push(f);
    }
    Ok(formulas)
}

fn read_corpus(c: &Calc, main: SortId, text: &str) -> Result<Vec<Formula>, CliError> {
    let empty = Macros::new();
    let macros = c.fixture.as_ref().map(|f| &f.macros).unwrap_or(&empty);
    read_corpus_text(&c.p, macros, main, text)
}
