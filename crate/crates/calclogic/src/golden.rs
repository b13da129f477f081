//! Evaluates a fixture's expected-verdict table.

use std::collections::BTreeSet;

use calclogic_core::checker::Checker;
use calclogic_core::term::{canonicalize, show, sort_of};
use calclogic_core::{denote, normalize, step, Budget, Verdict};

use crate::fixture::{generators, ExpectedVerdict, Expectation, Fixture, Origin};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenResult {
    pub description: String,
    pub origin: Origin,
    pub passed: bool,
    /// What was observed, for failure messages.
    pub observed: String,
}

fn verdict_matches(v: &Verdict, want: ExpectedVerdict) -> bool {
    matches!(
        (v, want),
        (Verdict::True(_), ExpectedVerdict::True)
            | (Verdict::False, ExpectedVerdict::False)
            | (Verdict::Unknown(_), ExpectedVerdict::Unknown)
    )
}

/// Runs one expectation. Errors while reading terms or formulae count as
/// failures.
pub fn run_one(fx: &Fixture, e: &Expectation, budget: &Budget) -> GoldenResult {
    let p = &fx.presentation;
    let (description, outcome): (String, Result<(bool, String), calclogic_core::Error>) = match e {
        Expectation::Check { term, formula, verdict, .. } => (
            format!("check {term} against {formula} is {verdict:?}"),
            (|| {
                let t = fx.term(term)?;
                let s = sort_of(p, &t).ok_or_else(|| calclogic_core::Error::Sort { line: 0, message: "unsorted term".into() })?;
                let f = fx.formula(s, formula)?;
                let mut c = Checker::new(p, *budget).with_generators(fx.generators.clone());
                let v = c.check(&t, &f)?;
                Ok((verdict_matches(&v, *verdict), v.to_string()))
            })(),
        ),
        Expectation::Successors { term, count, .. } => (
            format!("{term} has {count} one-step successors"),
            (|| {
                let t = canonicalize(p, &fx.term(term)?);
                let n = step(p, &t).len();
                Ok((n == *count, format!("{n} successors")))
            })(),
        ),
        Expectation::Normalize { term, normal_form, .. } => (
            format!("{term} normalizes to {normal_form}"),
            (|| {
                let t = fx.term(term)?;
                let want = match sort_of(p, &t) {
                    Some(s) => fx.term_as(s, normal_form)?,
                    None => fx.term(normal_form)?,
                };
                let want = canonicalize(p, &want);
                Ok(match normalize(p, &t, budget) {
                    Ok(tr) => (tr.target == want, show(p, &tr.target)),
                    Err(_) => (false, "budget exhausted".into()),
                })
            })(),
        ),
        Expectation::Canonical { term, canonical, .. } => (
            format!("{term} is congruent to {canonical}"),
            (|| {
                let t = canonicalize(p, &fx.term(term)?);
                let want = match sort_of(p, &t) {
                    Some(s) => fx.term_as(s, canonical)?,
                    None => fx.term(canonical)?,
                };
                let want = canonicalize(p, &want);
                Ok((t == want, show(p, &t)))
            })(),
        ),
        Expectation::Denote { formula, gens, max_size, members, .. } => (
            format!("denotation of {formula} up to size {max_size}"),
            (|| {
                let g = generators(p, gens)?;
                let f = fx.formula(fx.sort, formula)?;
                let d = denote(p, &f, &g, *max_size, budget)?;
                let got: BTreeSet<_> = d.members.iter().cloned().collect();
                let mut want = BTreeSet::new();
                for m in members {
                    want.insert(canonicalize(p, &fx.term_as(fx.sort, m)?));
                }
                let shown: Vec<String> = d.members.iter().map(|t| show(p, t)).collect();
                Ok((got == want && d.complete(), format!("{{{}}}", shown.join(", "))))
            })(),
        ),
    };
    let (passed, observed) = match outcome {
        Ok(x) => x,
        Err(err) => (false, format!("error: {err}")),
    };
    GoldenResult { description, origin: e.origin(), passed, observed }
}

pub fn run_all(fx: &Fixture, budget: &Budget) -> Vec<GoldenResult> {
    fx.expectations.iter().map(|e| run_one(fx, e, budget)).collect()
}
