//! Machine-readable records, one JSON object per line.

use std::collections::BTreeMap;

use calclogic_core::checker::Stats;
use calclogic_core::oracle::CompareEntry;
use calclogic_core::rewrite::{binding_text, step_text};
use calclogic_core::term::show;
use calclogic_core::{Presentation, Trace, TraceStep, Verdict};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub rule: String,
    /// Child indices from the root to the redex.
    pub path: Vec<u32>,
    pub subst: BTreeMap<String, String>,
    /// The step in `rule@/path {x=t, ...}` form.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub source: String,
    pub steps: Vec<StepRecord>,
    pub target: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BudgetSpent {
    pub evaluations: usize,
    pub witnesses: usize,
    pub states: usize,
    pub unfoldings: usize,
}

/// `{verdict, witness_trace?, budget_spent, unknown_reason?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_trace: Option<TraceRecord>,
    pub budget_spent: BudgetSpent,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unknown_reason: Option<String>,
}

pub fn step_record(p: &Presentation, s: &TraceStep) -> StepRecord {
    StepRecord {
        rule: s.rule.clone(),
        path: s.path.clone(),
        subst: s.subst.iter().map(|(k, v)| (k.clone(), binding_text(p, v))).collect(),
        text: step_text(p, s),
    }
}

pub fn trace_record(p: &Presentation, t: &Trace) -> TraceRecord {
    TraceRecord {
        source: show(p, &t.source),
        steps: t.steps.iter().map(|s| step_record(p, s)).collect(),
        target: show(p, &t.target),
    }
}

pub fn verdict_record(p: &Presentation, v: &Verdict, stats: &Stats) -> VerdictRecord {
    VerdictRecord {
        verdict: v.label(),
        witness_trace: match v {
            Verdict::True(e) => e.trace.as_ref().map(|t| trace_record(p, t)),
            _ => None,
        },
        budget_spent: BudgetSpent {
            evaluations: stats.evaluations,
            witnesses: stats.witnesses,
            states: stats.states,
            unfoldings: stats.unfoldings,
        },
        unknown_reason: v.reason().map(str::to_string),
    }
}

/// `{term, formula, checker_verdict, oracle_membership}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyRecord<'a> {
    pub kind: &'static str,
    pub term: &'a str,
    pub formula: &'a str,
    pub checker_verdict: &'static str,
    pub oracle_membership: &'static str,
}

pub fn discrepancy_record<'a>(kind: &'static str, e: &'a CompareEntry) -> DiscrepancyRecord<'a> {
    DiscrepancyRecord {
        kind,
        term: &e.term,
        formula: &e.formula,
        checker_verdict: e.checker_verdict,
        oracle_membership: e.oracle_membership,
    }
}

pub fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("records serialize")
}
