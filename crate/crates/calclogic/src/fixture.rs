//! The shipped calculi with their formula corpora, sample terms and
//! expected verdicts.
//!
//! Each fixture pairs a presentation from [`calclogic_core::builtin`] with a
//! JSON file under `fixtures/`. Term texts may refer to named sample terms
//! as `@name`.

use std::collections::BTreeMap;

use calclogic_core::builtin;
use calclogic_core::formula::{parse_formula_with, Macros};
use calclogic_core::signature::SortId;
use calclogic_core::term::{parse_term, parse_term_as};
use calclogic_core::{Formula, GeneratorSet, Presentation, Term};
use serde::{Deserialize, Serialize};

use crate::error::FixtureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// Restates an example worked out in the source material.
    WorkedExample,
    /// Worked out by hand for this corpus.
    Derived,
    /// Follows directly from the definitions.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedVerdict {
    True,
    False,
    Unknown,
}

/// One row of a fixture's expected-verdict table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    Check { term: String, formula: String, verdict: ExpectedVerdict, origin: Origin },
    Successors { term: String, count: usize, origin: Origin },
    Normalize { term: String, normal_form: String, origin: Origin },
    Canonical { term: String, canonical: String, origin: Origin },
    Denote { formula: String, gens: BTreeMap<String, Vec<String>>, max_size: usize, members: Vec<String>, origin: Origin },
}

impl Expectation {
    pub fn origin(&self) -> Origin {
        match self {
            Expectation::Check { origin, .. }
            | Expectation::Successors { origin, .. }
            | Expectation::Normalize { origin, .. }
            | Expectation::Canonical { origin, .. }
            | Expectation::Denote { origin, .. } => *origin,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct RawFormula {
    name: String,
    #[serde(default)]
    params: Vec<String>,
    body: String,
}

#[derive(Debug, Clone, Deserialize)]
struct RawTerm {
    name: String,
    text: Option<String>,
    build: Option<String>,
    #[serde(default)]
    args: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawCompare {
    max_size: usize,
    gens: BTreeMap<String, Vec<String>>,
    formulas: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawFixture {
    name: String,
    sort: String,
    generators: BTreeMap<String, Vec<String>>,
    formulas: Vec<RawFormula>,
    terms: Vec<RawTerm>,
    expectations: Vec<Expectation>,
    compare: RawCompare,
}

/// Formulae and sizes for checker/oracle comparison.
#[derive(Debug, Clone)]
pub struct CompareCorpus {
    pub max_size: usize,
    pub gens: GeneratorSet,
    pub formulas: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub source: &'static str,
    pub presentation: Presentation,
    /// Sort of the formula corpus.
    pub sort: SortId,
    /// Atoms available to modal witnesses when checking this fixture.
    pub generators: GeneratorSet,
    pub macros: Macros,
    pub formula_names: Vec<String>,
    /// Sample terms by name, as source text.
    pub terms: BTreeMap<String, String>,
    pub expectations: Vec<Expectation>,
    pub compare: CompareCorpus,
}

/// The replication encoding `!P` on channel `x`: a receiver `D(x)` that
/// re-emits itself along with `P` on every message it receives.
pub fn replication(x: &str, p: &str) -> String {
    let d = format!("(recv {x} (\\ y (| (send {x} (* y)) (* y))))");
    format!("(| (send {x} (| {d} {p})) {d})")
}

fn raw_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "mon" => include_str!("../fixtures/mon.json"),
        "mon-tree" => include_str!("../fixtures/mon-tree.json"),
        "ski" => include_str!("../fixtures/ski.json"),
        "ski-arrow" => include_str!("../fixtures/ski-arrow.json"),
        "rhopi" => include_str!("../fixtures/rhopi.json"),
        "rhopi-metered" => include_str!("../fixtures/rhopi-metered.json"),
        "group-action" => include_str!("../fixtures/group-action.json"),
        _ => return None,
    })
}

pub fn fixture_names() -> &'static [&'static str] {
    &builtin::NAMES
}

/// Generators from a sort-name map.
pub fn generators(p: &Presentation, map: &BTreeMap<String, Vec<String>>) -> Result<GeneratorSet, calclogic_core::Error> {
    let mut g = GeneratorSet::new();
    for (sort, names) in map {
        let s = p
            .sort_id(sort)
            .ok_or_else(|| calclogic_core::Error::UnknownSort { line: 0, name: sort.clone() })?;
        g = g.with(s, names.iter().cloned());
    }
    Ok(g)
}

pub fn fixture(name: &str) -> Result<Fixture, FixtureError> {
    let json = raw_source(name).ok_or_else(|| FixtureError::UnknownFixture(name.to_string()))?;
    let malformed = |message: String| FixtureError::Malformed { name: name.to_string(), message };
    let raw: RawFixture = serde_json::from_str(json).map_err(|e| malformed(e.to_string()))?;
    if raw.name != name {
        return Err(malformed(format!("file declares name `{}`", raw.name)));
    }
    let presentation = builtin::builtin(name)?;
    let source = builtin::source(name).expect("builtin source");
    let sort = presentation
        .sort_id(&raw.sort)
        .ok_or_else(|| malformed(format!("unknown sort `{}`", raw.sort)))?;
    let mut macros = Macros::new();
    for f in &raw.formulas {
        let params: Vec<&str> = f.params.iter().map(String::as_str).collect();
        macros.define(&f.name, &params, &f.body)?;
    }
    let mut terms = BTreeMap::new();
    for t in &raw.terms {
        let text = match (&t.text, t.build.as_deref()) {
            (Some(text), None) => text.clone(),
            (None, Some("replication")) => match t.args.as_slice() {
                [x, p] => replication(x, p),
                _ => return Err(malformed(format!("`{}`: replication takes a name and a process", t.name))),
            },
            _ => return Err(malformed(format!("`{}` needs either text or a known builder", t.name))),
        };
        terms.insert(t.name.clone(), text);
    }
    let fx = Fixture {
        name: name.to_string(),
        source,
        generators: generators(&presentation, &raw.generators)?,
        compare: CompareCorpus {
            max_size: raw.compare.max_size,
            gens: generators(&presentation, &raw.compare.gens)?,
            formulas: raw.compare.formulas,
        },
        presentation,
        sort,
        macros,
        formula_names: raw.formulas.iter().map(|f| f.name.clone()).collect(),
        terms,
        expectations: raw.expectations,
    };
    // Every sample term and corpus formula must read back.
    for text in fx.terms.values() {
        fx.term(text)?;
    }
    fx.compare_formulas()?;
    Ok(fx)
}

impl Fixture {
    /// Replaces `@name` references to sample terms.
    pub fn expand(&self, text: &str) -> String {
        let mut out = String::new();
        let mut rest = text;
        while let Some(i) = rest.find('@') {
            out.push_str(&rest[..i]);
            let after = &rest[i + 1..];
            let end = after
                .find(|c: char| !(c.is_alphanumeric() || c == '-' || c == '_'))
                .unwrap_or(after.len());
            match self.terms.get(&after[..end]) {
                Some(t) => out.push_str(t),
                None => out.push_str(&rest[i..i + 1 + end]),
            }
            rest = &after[end..];
        }
        out.push_str(rest);
        out
    }

    pub fn term(&self, text: &str) -> Result<Term, calclogic_core::Error> {
        parse_term(&self.presentation, &self.expand(text))
    }

    /// Parses a term expected to have `sort`; bare atoms need this.
    pub fn term_as(&self, sort: SortId, text: &str) -> Result<Term, calclogic_core::Error> {
        parse_term_as(&self.presentation, sort, &self.expand(text))
    }

    pub fn formula(&self, sort: SortId, text: &str) -> Result<Formula, calclogic_core::Error> {
        parse_formula_with(&self.presentation, sort, text, &self.macros)
    }

    pub fn compare_formulas(&self) -> Result<Vec<Formula>, calclogic_core::Error> {
        self.compare.formulas.iter().map(|f| self.formula(self.sort, f)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for name in fixture_names() {
            let fx = fixture(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(fx.name, *name);
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(fixture("lambda"), Err(FixtureError::UnknownFixture(_))));
    }

    #[test]
    fn references_expand() {
        let fx = fixture("ski").unwrap();
        assert_eq!(fx.expand("(@skk I)"), "(((S K) K) I)");
        assert_eq!(fx.expand("@nothing"), "@nothing");
    }

    #[test]
    fn replication_term_parses() {
        let p = builtin::builtin("rhopi").unwrap();
        assert!(parse_term(&p, &replication("x", "0")).is_ok());
    }

    #[test]
    fn group_action_has_no_formulae() {
        let fx = fixture("group-action").unwrap();
        assert!(fx.formula_names.is_empty());
        assert!(fx.compare.formulas.is_empty());
    }
}
