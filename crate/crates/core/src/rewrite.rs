//! One-step rewriting closed under all contexts, traces, bounded
//! reachability and normalization.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::pattern::{self, Pattern, Subst};
use crate::signature::{Presentation, RewriteRuleDecl};
use crate::term::{canonicalize, show, Term};

/// One rule application: the rule, the position of the redex (child indices
/// from the root; bag items and list elements are indexed like arguments)
/// and the matching substitution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceStep {
    pub rule: String,
    pub path: Vec<u32>,
    pub subst: Subst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub source: Term,
    pub steps: Vec<TraceStep>,
    pub target: Term,
}

impl Trace {
    pub fn empty(t: Term) -> Trace {
        Trace { source: t.clone(), steps: Vec::new(), target: t }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> TraceDisplay<'a> {
        TraceDisplay { p, trace: self }
    }
}

/// Three-valued outcome of a test on a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Truth {
    False,
    Unknown,
    True,
}

pub fn path_text(path: &[u32]) -> String {
    if path.is_empty() {
        return "/".into();
    }
    path.iter().map(|i| format!("/{i}")).collect()
}

/// Renders a substitution value; lists print as `[a b]`.
pub fn binding_text(p: &Presentation, t: &Term) -> String {
    match t {
        Term::Seq(items) => {
            let parts: Vec<String> = items.iter().map(|i| show(p, i)).collect();
            format!("[{}]", parts.join(" "))
        }
        other => show(p, other),
    }
}

/// `rule@/0/1 {x=term, ...}`.
pub fn step_text(p: &Presentation, s: &TraceStep) -> String {
    let binds: Vec<String> = s
        .subst
        .iter()
        .map(|(k, v)| format!("{k}={}", binding_text(p, v)))
        .collect();
    format!("{}@{} {{{}}}", s.rule, path_text(&s.path), binds.join(", "))
}

pub struct TraceDisplay<'a> {
    p: &'a Presentation,
    trace: &'a Trace,
}

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source {}", show(self.p, &self.trace.source))?;
        for s in &self.trace.steps {
            writeln!(f, "{}", step_text(self.p, s))?;
        }
        write!(f, "target {}", show(self.p, &self.trace.target))
    }
}

fn replace_at(t: &Term, path: &[u32], with: Term) -> Option<Term> {
    let mut out = t.clone();
    let mut cur = &mut out;
    for &i in path {
        cur = cur.child_mut(i as usize)?;
    }
    *cur = with;
    Some(out)
}

/// Whether a rule may fire at a node whose parent is `parent`. Rules headed
/// by an assoc-comm constructor act on whole bags, so they are not tried
/// again on single items of a bag of the same constructor.
fn allowed_here(rule: &RewriteRuleDecl, parent: Option<&Term>) -> bool {
    match (&rule.lhs, parent) {
        (Pattern::Bag { op, .. }, Some(Term::Bag { op: po, .. })) => op != po,
        _ => true,
    }
}

fn apply(p: &Presentation, rule: &RewriteRuleDecl, theta: &Subst) -> Option<Term> {
    pattern::build(p, &rule.rhs, theta).ok().map(|t| canonicalize(p, &t))
}

fn positions<'a>(t: &'a Term, parent: Option<&'a Term>, path: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, &'a Term, Option<&'a Term>)>) {
    // Post-order: children left to right, then the node itself.
    for (i, c) in t.children().iter().enumerate() {
        path.push(i as u32);
        positions(c, Some(t), path, out);
        path.pop();
    }
    if !matches!(t, Term::Seq(_)) {
        out.push((path.clone(), t, parent));
    }
}

/// All one-step successors of a canonical term, each with the step that
/// produces it, without duplicates and in a deterministic order.
pub fn step(p: &Presentation, t: &Term) -> Vec<(Term, TraceStep)> {
    let mut pos = Vec::new();
    positions(t, None, &mut Vec::new(), &mut pos);
    let mut out = BTreeSet::new();
    for (path, sub, parent) in pos {
        for rule in &p.rules {
            if !allowed_here(rule, parent) {
                continue;
            }
            for theta in pattern::match_pattern(p, &rule.lhs, sub) {
                let Some(r) = apply(p, rule, &theta) else { continue };
                let Some(whole) = replace_at(t, &path, r) else { continue };
                let target = canonicalize(p, &whole);
                out.insert((target, TraceStep { rule: rule.name.clone(), path: path.clone(), subst: theta }));
            }
        }
    }
    out.into_iter().collect()
}

/// The leftmost-innermost step, trying rules in declaration order.
pub fn first_step(p: &Presentation, t: &Term) -> Option<(Term, TraceStep)> {
    let mut pos = Vec::new();
    positions(t, None, &mut Vec::new(), &mut pos);
    for (path, sub, parent) in pos {
        for rule in &p.rules {
            if !allowed_here(rule, parent) {
                continue;
            }
            for theta in pattern::match_pattern(p, &rule.lhs, sub) {
                let Some(r) = apply(p, rule, &theta) else { continue };
                let Some(whole) = replace_at(t, &path, r) else { continue };
                let step = TraceStep { rule: rule.name.clone(), path, subst: theta };
                return Some((canonicalize(p, &whole), step));
            }
        }
    }
    None
}

/// Returned when normalization runs out of steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExhausted {
    pub partial: Trace,
}

/// Rewrites leftmost-innermost until no rule applies, for at most
/// `budget.rewrite_depth` steps.
pub fn normalize(p: &Presentation, t: &Term, budget: &Budget) -> core::result::Result<Trace, BudgetExhausted> {
    let source = canonicalize(p, t);
    let mut cur = source.clone();
    let mut steps = Vec::new();
    loop {
        match first_step(p, &cur) {
            None => return Ok(Trace { source, steps, target: cur }),
            Some(_) if steps.len() >= budget.rewrite_depth => {
                return Err(BudgetExhausted { partial: Trace { source, steps, target: cur } })
            }
            Some((next, s)) => {
                steps.push(s);
                cur = next;
            }
        }
    }
}

/// Re-executes recorded steps, checking that each one is a genuine match.
pub fn replay(p: &Presentation, source: &Term, steps: &[TraceStep]) -> Result<Term> {
    let mut cur = canonicalize(p, source);
    for (i, s) in steps.iter().enumerate() {
        let mismatch = |message: String| Error::ReplayMismatch { step: i, message };
        let rule = p.rule(&s.rule).ok_or_else(|| mismatch(format!("unknown rule `{}`", s.rule)))?;
        let sub = cur
            .at_path(&s.path)
            .ok_or_else(|| mismatch(format!("no subterm at {}", path_text(&s.path))))?;
        if !pattern::match_pattern(p, &rule.lhs, sub).contains(&s.subst) {
            return Err(mismatch(format!("`{}` does not match at {} with the recorded bindings", s.rule, path_text(&s.path))));
        }
        let r = apply(p, rule, &s.subst).ok_or_else(|| mismatch("right-hand side cannot be built".to_string()))?;
        let whole = replace_at(&cur, &s.path, r).ok_or_else(|| mismatch("bad position".to_string()))?;
        cur = canonicalize(p, &whole);
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reach {
    /// A goal state was found; the trace ends in it.
    Found(Trace),
    /// Every reachable state was visited and none satisfied the goal.
    Exhausted { explored: usize },
    /// The search was cut short or the goal was undecided somewhere.
    Unknown { explored: usize, reason: String },
}

impl Reach {
    pub fn explored(&self) -> usize {
        match self {
            Reach::Found(_) => 0,
            Reach::Exhausted { explored } | Reach::Unknown { explored, .. } => *explored,
        }
    }
}

/// Breadth-first search over canonical forms for a state satisfying `goal`.
/// Start counts as reachable in zero steps.
pub fn reachable(
    p: &Presentation,
    start: &Term,
    goal: &mut dyn FnMut(&Term) -> Truth,
    budget: &Budget,
) -> Reach {
    let start = canonicalize(p, start);
    let mut parent: BTreeMap<Term, Option<(Term, TraceStep)>> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::new();
    queue.push_back((start.clone(), 0usize));
    let mut undecided = false;
    let mut truncated: Option<String> = None;
    while let Some((t, depth)) = queue.pop_front() {
        match goal(&t) {
            Truth::True => {
                let mut steps = Vec::new();
                let mut cur = t.clone();
                while let Some(Some((prev, s))) = parent.get(&cur) {
                    steps.push(s.clone());
                    cur = prev.clone();
                }
                steps.reverse();
                return Reach::Found(Trace { source: start, steps, target: t });
            }
            Truth::Unknown => undecided = true,
            Truth::False => {}
        }
        let succ = step(p, &t);
        if succ.is_empty() {
            continue;
        }
        if depth >= budget.rewrite_depth {
            truncated.get_or_insert_with(|| format!("rewrite depth {} reached", budget.rewrite_depth));
            continue;
        }
        for (u, s) in succ {
            if parent.contains_key(&u) {
                continue;
            }
            if parent.len() >= budget.explore_nodes {
                truncated.get_or_insert_with(|| format!("explored {} states", budget.explore_nodes));
                break;
            }
            parent.insert(u.clone(), Some((t.clone(), s)));
            queue.push_back((u, depth + 1));
        }
    }
    let explored = parent.len();
    match (truncated, undecided) {
        (None, false) => Reach::Exhausted { explored },
        (Some(reason), _) => Reach::Unknown { explored, reason },
        (None, true) => Reach::Unknown { explored, reason: "goal undecided on some state".into() },
    }
}
