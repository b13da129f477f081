//! Patterns with metavariables, shallow multiset matching, instantiation of
//! right-hand sides, and contexts with numbered holes.
//!
//! Pattern syntax extends term syntax with:
//!
//! * `$x` for a metavariable whose sort is fixed by its position;
//! * `$ps...` in a variadic position, binding the whole argument list;
//! * `$r...` inside an assoc-comm application, binding the rest of the bag;
//! * `template ...` on a right-hand side, repeating `template` once per
//!   element of the list variable it mentions;
//! * `(inst $q args...)`, applying an abstraction metavariable.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::sexpr::{self, Sexp};
use crate::signature::{ArgDescriptor, BoundCount, OpId, Presentation, SortId};
use crate::term::{self, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaKind {
    Term(SortId),
    Abs { bound: SortId, count: BoundCount, body: SortId },
    /// A list of terms of the sort, bound by a splice.
    Seq(SortId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Meta { name: String, kind: MetaKind },
    Atom { sort: SortId, name: String },
    Var { index: u32, pos: u32 },
    App { op: OpId, args: Vec<Pattern> },
    Abs { arity: u32, body: Box<Pattern> },
    Bag { op: OpId, items: Vec<Pattern>, rest: Option<(String, SortId)> },
    Seq(Vec<SeqItem>),
    Inst { name: String, kind: MetaKind, args: Vec<SeqItem> },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeqItem {
    One(Pattern),
    /// `template ...`: one copy of `template` per element bound to `var`.
    /// A bare splice `$ps...` is the template `$ps`.
    Each { var: String, template: Pattern },
}

/// Metavariable bindings. List variables are bound to `Term::Seq`.
pub type Subst = BTreeMap<String, Term>;

pub(crate) const IMPLICIT_REST: &str = "_rest";

impl Pattern {
    pub fn contains_bag(&self) -> bool {
        match self {
            Pattern::Bag { .. } => true,
            Pattern::App { args, .. } => args.iter().any(Pattern::contains_bag),
            Pattern::Abs { body, .. } => body.contains_bag(),
            Pattern::Seq(items) | Pattern::Inst { args: items, .. } => items.iter().any(|i| match i {
                SeqItem::One(p) | SeqItem::Each { template: p, .. } => p.contains_bag(),
            }),
            _ => false,
        }
    }

    fn contains_meta(&self) -> bool {
        match self {
            Pattern::Meta { .. } | Pattern::Inst { .. } => true,
            Pattern::Bag { items, rest, .. } => rest.is_some() || items.iter().any(Pattern::contains_meta),
            Pattern::App { args, .. } => args.iter().any(Pattern::contains_meta),
            Pattern::Abs { body, .. } => body.contains_meta(),
            Pattern::Seq(items) => items.iter().any(|i| match i {
                SeqItem::One(p) => p.contains_meta(),
                SeqItem::Each { .. } => true,
            }),
            Pattern::Atom { .. } | Pattern::Var { .. } => false,
        }
    }

    /// Collects metavariable kinds, reporting names used at two kinds.
    pub fn collect_metas(&self, out: &mut BTreeMap<String, MetaKind>, conflicts: &mut Vec<String>) {
        fn put(name: &str, kind: MetaKind, out: &mut BTreeMap<String, MetaKind>, conflicts: &mut Vec<String>) {
            if let Some(old) = out.insert(name.to_owned(), kind) {
                if old != kind {
                    conflicts.push(format!("`${name}` is used at two different kinds"));
                }
            }
        }
        match self {
            Pattern::Meta { name, kind } => put(name, *kind, out, conflicts),
            Pattern::Atom { .. } | Pattern::Var { .. } => {}
            Pattern::App { args, .. } => args.iter().for_each(|a| a.collect_metas(out, conflicts)),
            Pattern::Abs { body, .. } => body.collect_metas(out, conflicts),
            Pattern::Bag { items, rest, .. } => {
                items.iter().for_each(|a| a.collect_metas(out, conflicts));
                if let Some((r, s)) = rest {
                    put(r, MetaKind::Term(*s), out, conflicts);
                }
            }
            Pattern::Seq(items) => collect_seq_metas(items, out, conflicts),
            Pattern::Inst { name, kind, args } => {
                put(name, *kind, out, conflicts);
                collect_seq_metas(args, out, conflicts);
            }
        }
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> PatternDisplay<'a> {
        PatternDisplay { p, pat: self, bare_holes: false }
    }
}

fn collect_seq_metas(items: &[SeqItem], out: &mut BTreeMap<String, MetaKind>, conflicts: &mut Vec<String>) {
    for it in items {
        match it {
            SeqItem::One(p) => p.collect_metas(out, conflicts),
            SeqItem::Each { var, template } => {
                let mut inner = BTreeMap::new();
                template.collect_metas(&mut inner, conflicts);
                let elem = match inner.remove(var) {
                    Some(MetaKind::Term(s)) => MetaKind::Seq(s),
                    Some(other) => other,
                    None => {
                        conflicts.push(format!("ellipsis template does not mention `${var}`"));
                        continue;
                    }
                };
                inner.insert(var.clone(), elem);
                for (k, v) in inner {
                    if let Some(old) = out.insert(k.clone(), v) {
                        if old != v {
                            conflicts.push(format!("`${k}` is used at two different kinds"));
                        }
                    }
                }
            }
        }
    }
}

/// Node count of a pattern, measured like term size.
pub fn pattern_size(pat: &Pattern) -> usize {
    let seq = |items: &[SeqItem]| -> usize {
        items
            .iter()
            .map(|i| match i {
                SeqItem::One(p) | SeqItem::Each { template: p, .. } => pattern_size(p),
            })
            .sum()
    };
    match pat {
        Pattern::Meta { .. } | Pattern::Atom { .. } | Pattern::Var { .. } => 1,
        Pattern::App { args, .. } => 1 + args.iter().map(pattern_size).sum::<usize>(),
        Pattern::Abs { body, .. } => 1 + pattern_size(body),
        Pattern::Bag { items, rest, .. } => {
            let k = items.len() + usize::from(rest.is_some());
            k.saturating_sub(1) + items.iter().map(pattern_size).sum::<usize>() + usize::from(rest.is_some())
        }
        Pattern::Seq(items) => seq(items),
        Pattern::Inst { args, .. } => 1 + seq(args),
    }
}

/// Sort of a pattern, recording ill-sorted subpatterns in `problems`.
pub fn pattern_sort(p: &Presentation, pat: &Pattern, problems: &mut Vec<String>) -> Option<SortId> {
    match pat {
        Pattern::Meta { kind: MetaKind::Term(s), .. } => Some(*s),
        Pattern::Meta { .. } | Pattern::Var { .. } | Pattern::Abs { .. } | Pattern::Seq(_) => None,
        Pattern::Atom { sort, .. } => Some(*sort),
        Pattern::Inst { kind: MetaKind::Abs { body, .. }, args, .. } => {
            seq_sorts(p, args, problems);
            Some(*body)
        }
        Pattern::Inst { name, .. } => {
            problems.push(format!("`${name}` is applied but is not an abstraction"));
            None
        }
        Pattern::Bag { op, items, .. } => {
            let result = p.op(*op).result;
            for it in items {
                expect_sort(p, it, result, problems);
            }
            Some(result)
        }
        Pattern::App { op, args } => {
            let decl = p.op(*op);
            if decl.is_flattened() {
                for a in args {
                    expect_sort(p, a, decl.result, problems);
                }
                return Some(decl.result);
            }
            if args.len() != decl.args.len() {
                problems.push(format!("`{}` applied to {} arguments", decl.name, args.len()));
                return Some(decl.result);
            }
            for (a, d) in args.iter().zip(&decl.args) {
                match (d, a) {
                    (ArgDescriptor::Plain(s), _) => expect_sort(p, a, *s, problems),
                    (ArgDescriptor::Variadic(s), Pattern::Seq(items)) => {
                        for s2 in seq_sorts(p, items, problems) {
                            if s2 != *s {
                                problems.push(format!("`{}` list element has the wrong sort", decl.name));
                            }
                        }
                    }
                    (ArgDescriptor::Abstraction { .. }, Pattern::Abs { .. } | Pattern::Meta { .. }) => {}
                    _ => problems.push(format!("`{}` argument does not fit its descriptor", decl.name)),
                }
            }
            Some(decl.result)
        }
    }
}

fn seq_sorts(p: &Presentation, items: &[SeqItem], problems: &mut Vec<String>) -> Vec<SortId> {
    items
        .iter()
        .filter_map(|i| match i {
            SeqItem::One(t) | SeqItem::Each { template: t, .. } => pattern_sort(p, t, problems),
        })
        .collect()
}

fn expect_sort(p: &Presentation, pat: &Pattern, want: SortId, problems: &mut Vec<String>) {
    if let Some(got) = pattern_sort(p, pat, problems) {
        if got != want {
            problems.push(format!("expected sort {}, found {}", p.sort_name(want), p.sort_name(got)));
        }
    }
}

/// Restrictions on left-hand sides that matching relies on.
pub fn check_lhs_shape(pat: &Pattern, problems: &mut Vec<String>) {
    match pat {
        Pattern::Inst { .. } => problems.push("`inst` may only occur on a right-hand side".into()),
        Pattern::Abs { body, .. } => {
            if body.contains_meta() {
                problems.push("metavariables under a binder are not supported on a left-hand side".into());
            }
        }
        Pattern::App { args, .. } => args.iter().for_each(|a| check_lhs_shape(a, problems)),
        Pattern::Bag { items, .. } => items.iter().for_each(|a| check_lhs_shape(a, problems)),
        Pattern::Seq(items) => {
            let mut splices = 0;
            for it in items {
                match it {
                    SeqItem::One(p) => check_lhs_shape(p, problems),
                    SeqItem::Each { var, template } => {
                        splices += 1;
                        if !matches!(template, Pattern::Meta { name, .. } if name == var) {
                            problems.push("ellipsis templates may only occur on a right-hand side".into());
                        }
                    }
                }
            }
            if splices > 1 {
                problems.push("at most one splice per argument list".into());
            }
        }
        Pattern::Meta { .. } | Pattern::Atom { .. } | Pattern::Var { .. } => {}
    }
}

// ---------------------------------------------------------------------------
// Matching

/// Every substitution under which `pat` matches the canonical term `t`.
/// Assoc-comm patterns select items injectively; a rest variable captures
/// the remainder. Repeated metavariables must bind equal terms.
pub fn match_pattern(p: &Presentation, pat: &Pattern, t: &Term) -> Vec<Subst> {
    let mut out = Vec::new();
    go(p, pat, t, Subst::new(), &mut |s| out.push(s));
    let mut seen = BTreeSet::new();
    out.retain(|s| seen.insert(s.clone()));
    out
}

fn bind(theta: Subst, name: &str, value: Term, k: &mut dyn FnMut(Subst)) {
    match theta.get(name) {
        Some(old) if *old == value => k(theta),
        Some(_) => {}
        None => {
            let mut theta = theta;
            theta.insert(name.to_owned(), value);
            k(theta)
        }
    }
}

fn go(p: &Presentation, pat: &Pattern, t: &Term, theta: Subst, k: &mut dyn FnMut(Subst)) {
    match pat {
        Pattern::Meta { name, kind } => {
            let fits = match (kind, t) {
                (MetaKind::Term(_), Term::Var { .. }) => true,
                (MetaKind::Term(s), _) => term::sort_of(p, t) == Some(*s),
                (MetaKind::Abs { count, .. }, Term::Abs { arity, .. }) => count.admits(*arity),
                (MetaKind::Seq(_), Term::Seq(_)) => true,
                _ => false,
            };
            if fits {
                bind(theta, name, t.clone(), k);
            }
        }
        Pattern::Atom { sort, name } => {
            if matches!(t, Term::Atom { sort: s, name: n } if s == sort && n == name) {
                k(theta)
            }
        }
        Pattern::Var { index, pos } => {
            if matches!(t, Term::Var { index: i, pos: q } if i == index && q == pos) {
                k(theta)
            }
        }
        Pattern::Abs { arity, body } => {
            if let Term::Abs { arity: a, body: b } = t {
                if a == arity {
                    go(p, body, b, theta, k);
                }
            }
        }
        Pattern::App { op, args } => {
            if p.op(*op).attrs.assoc {
                for tuple in term::decompose(p, t, *op) {
                    go_list(p, args, &tuple, theta.clone(), k);
                }
                return;
            }
            if let Term::App { op: o, args: targs } = t {
                if o == op && targs.len() == args.len() {
                    go_list(p, args, targs, theta, k);
                }
            }
        }
        Pattern::Bag { op, items, rest } => {
            if term::sort_of(p, t) != Some(p.op(*op).result) {
                return;
            }
            let titems = term::bag_items(p, *op, t);
            if rest.is_none() && titems.len() != items.len() {
                return;
            }
            if titems.len() < items.len() {
                return;
            }
            let mut used = vec![false; titems.len()];
            select(p, *op, items, rest, &titems, &mut used, theta, k);
        }
        Pattern::Seq(items) => {
            let Term::Seq(ts) = t else { return };
            match items.iter().position(|i| matches!(i, SeqItem::Each { .. })) {
                None => {
                    if items.len() == ts.len() {
                        let pats: Vec<Pattern> = items.iter().map(one).collect();
                        go_list(p, &pats, ts, theta, k);
                    }
                }
                Some(at) => {
                    let after = items.len() - at - 1;
                    if ts.len() < at + after {
                        return;
                    }
                    let SeqItem::Each { var, .. } = &items[at] else { unreachable!() };
                    let mid = Term::Seq(ts[at..ts.len() - after].to_vec());
                    let mut pats: Vec<Pattern> = items[..at].iter().map(one).collect();
                    pats.extend(items[at + 1..].iter().map(one));
                    let mut outer: Vec<Term> = ts[..at].to_vec();
                    outer.extend(ts[ts.len() - after..].iter().cloned());
                    bind(theta, var, mid, &mut |th| go_list(p, &pats, &outer, th, k));
                }
            }
        }
        Pattern::Inst { .. } => {}
    }
}

fn one(item: &SeqItem) -> Pattern {
    match item {
        SeqItem::One(p) => p.clone(),
        SeqItem::Each { template, .. } => template.clone(),
    }
}

fn go_list(p: &Presentation, pats: &[Pattern], ts: &[Term], theta: Subst, k: &mut dyn FnMut(Subst)) {
    match pats.split_first() {
        None => k(theta),
        Some((first, more)) => go(p, first, &ts[0], theta, &mut |th| go_list(p, more, &ts[1..], th, k)),
    }
}

#[allow(clippy::too_many_arguments)]
fn select(
    p: &Presentation,
    op: OpId,
    pats: &[Pattern],
    rest: &Option<(String, SortId)>,
    ts: &[Term],
    used: &mut Vec<bool>,
    theta: Subst,
    k: &mut dyn FnMut(Subst),
) {
    let Some((first, more)) = pats.split_first() else {
        let remaining: Vec<Term> =
            ts.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(t, _)| t.clone()).collect();
        match rest {
            Some((name, _)) => {
                if remaining.is_empty() && p.op(op).attrs.unit.is_none() {
                    return;
                }
                bind(theta, name, term::make_bag(p, op, remaining), k)
            }
            None => k(theta),
        }
        return;
    };
    let mut tried: BTreeSet<&Term> = BTreeSet::new();
    for j in 0..ts.len() {
        if used[j] || !tried.insert(&ts[j]) {
            continue;
        }
        used[j] = true;
        let mut found = Vec::new();
        go(p, first, &ts[j], theta.clone(), &mut |th| found.push(th));
        for th in found {
            select(p, op, more, rest, ts, used, th, k);
        }
        used[j] = false;
    }
}

// ---------------------------------------------------------------------------
// Building

/// Instantiates a pattern. The result is not necessarily canonical.
pub fn build(p: &Presentation, pat: &Pattern, theta: &Subst) -> Result<Term> {
    Ok(match pat {
        Pattern::Meta { name, .. } => theta
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnboundVar(format!("${name}")))?,
        Pattern::Atom { sort, name } => Term::Atom { sort: *sort, name: name.clone() },
        Pattern::Var { index, pos } => Term::Var { index: *index, pos: *pos },
        Pattern::App { op, args } => {
            let args = args.iter().map(|a| build(p, a, theta)).collect::<Result<Vec<_>>>()?;
            Term::App { op: *op, args }
        }
        Pattern::Abs { arity, body } => Term::Abs { arity: *arity, body: Box::new(build(p, body, theta)?) },
        Pattern::Bag { op, items, rest } => {
            let mut built = items.iter().map(|a| build(p, a, theta)).collect::<Result<Vec<_>>>()?;
            if let Some((name, _)) = rest {
                built.push(
                    theta.get(name).cloned().ok_or_else(|| Error::UnboundVar(format!("${name}")))?,
                );
            }
            let built: Vec<Term> = built.iter().map(|t| term::canonicalize(p, t)).collect();
            term::make_bag(p, *op, built)
        }
        Pattern::Seq(items) => Term::Seq(build_seq(p, items, theta)?),
        Pattern::Inst { name, args, .. } => {
            let abs = theta.get(name).ok_or_else(|| Error::UnboundVar(format!("${name}")))?;
            let fillers: Vec<Term> =
                build_seq(p, args, theta)?.iter().map(|t| term::canonicalize(p, t)).collect();
            term::instantiate(p, abs, &fillers)?
        }
    })
}

fn build_seq(p: &Presentation, items: &[SeqItem], theta: &Subst) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for it in items {
        match it {
            SeqItem::One(pat) => out.push(build(p, pat, theta)?),
            SeqItem::Each { var, template } => {
                let Some(Term::Seq(elems)) = theta.get(var) else {
                    return Err(Error::UnboundVar(format!("${var}")));
                };
                for e in elems {
                    let mut th = theta.clone();
                    th.insert(var.clone(), e.clone());
                    out.push(build(p, template, &th)?);
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Contexts

/// A term with numbered holes `hole1 .. holek`, each occurring once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub pattern: Pattern,
    pub holes: Vec<SortId>,
    pub sort: SortId,
}

impl Context {
    pub fn parse(p: &Presentation, text: &str) -> Result<Context> {
        let sx = sexpr::parse_one(text, 1)?;
        Self::from_sexp(p, &sx)
    }

    pub fn from_sexp(p: &Presentation, sx: &Sexp) -> Result<Context> {
        let mut r = Reader::new(p, Mode::Context);
        let (pattern, sort) = r.read(sx, Expect::Sort(None))?;
        let sort = sort.ok_or_else(|| Error::sort(sx.line(), "cannot determine the sort of the context"))?;
        let mut holes = Vec::new();
        for (i, (n, s)) in r.holes.iter().enumerate() {
            if *n as usize != i + 1 {
                return Err(Error::syntax(sx.line(), "holes must be numbered hole1, hole2, ... without gaps"));
            }
            holes.push(*s);
        }
        Ok(Context { pattern, holes, sort })
    }

    /// Builds a context directly from a constructor whose plain arguments
    /// become holes in order.
    pub fn of_constructor(p: &Presentation, op: OpId) -> Option<Context> {
        let d = p.op(op);
        let mut holes = Vec::new();
        let mut args = Vec::new();
        for a in &d.args {
            let ArgDescriptor::Plain(s) = a else { return None };
            holes.push(*s);
            args.push(Pattern::Meta { name: format!("hole{}", holes.len()), kind: MetaKind::Term(*s) });
        }
        let pattern = if d.attrs.assoc_comm {
            Pattern::Bag { op, items: args, rest: None }
        } else {
            Pattern::App { op, args }
        };
        Some(Context { pattern, holes, sort: d.result })
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    /// Fills the holes in order and canonicalizes.
    pub fn plug(&self, p: &Presentation, fillers: &[Term]) -> Result<Term> {
        if fillers.len() != self.holes.len() {
            return Err(Error::arity(
                0,
                format!("context has {} holes but {} fillers were given", self.holes.len(), fillers.len()),
            ));
        }
        let mut theta = Subst::new();
        for (i, (f, s)) in fillers.iter().zip(&self.holes).enumerate() {
            match term::sort_of(p, f) {
                Some(fs) if fs == *s => {}
                _ => {
                    return Err(Error::sort(
                        0,
                        format!("hole{} expects sort {}", i + 1, p.sort_name(*s)),
                    ))
                }
            }
            theta.insert(format!("hole{}", i + 1), f.clone());
        }
        Ok(term::canonicalize(p, &build(p, &self.pattern, &theta)?))
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> PatternDisplay<'a> {
        PatternDisplay { p, pat: &self.pattern, bare_holes: true }
    }
}

// ---------------------------------------------------------------------------
// Reading

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Ground,
    Rule,
    Context,
}

#[derive(Clone, Copy)]
pub(crate) enum Expect {
    Sort(Option<SortId>),
    Abs { bound: SortId, count: BoundCount, body: SortId },
}

pub(crate) struct Reader<'p> {
    p: &'p Presentation,
    mode: Mode,
    metas: BTreeMap<String, MetaKind>,
    scopes: Vec<(Vec<String>, SortId)>,
    in_template: bool,
    template_vars: Vec<String>,
    holes: Vec<(u32, SortId)>,
}

fn hole_number(text: &str) -> Option<u32> {
    text.strip_prefix("hole")
        .or_else(|| text.strip_prefix('◦'))
        .and_then(|n| n.parse().ok())
        .filter(|n| *n >= 1)
}

impl<'p> Reader<'p> {
    pub(crate) fn new(p: &'p Presentation, mode: Mode) -> Self {
        Reader {
            p,
            mode,
            metas: BTreeMap::new(),
            scopes: Vec::new(),
            in_template: false,
            template_vars: Vec::new(),
            holes: Vec::new(),
        }
    }

    fn declare(&mut self, name: &str, kind: MetaKind, line: usize) -> Result<()> {
        match self.metas.get(name) {
            Some(old) if *old != kind => {
                Err(Error::sort(line, format!("metavariable `${name}` is used at two different sorts")))
            }
            _ => {
                self.metas.insert(name.to_owned(), kind);
                Ok(())
            }
        }
    }

    pub(crate) fn read(&mut self, sx: &Sexp, expect: Expect) -> Result<(Pattern, Option<SortId>)> {
        let (pat, sort) = match sx {
            Sexp::Atom { text, line } => self.read_atom(text, *line, expect)?,
            Sexp::List { items, line } => self.read_list(items, *line, expect)?,
        };
        if let (Expect::Sort(Some(want)), Some(got)) = (expect, sort) {
            if want != got {
                return Err(Error::sort(
                    sx.line(),
                    format!(
                        "`{sx}` has sort {} where {} is expected",
                        self.p.sort_name(got),
                        self.p.sort_name(want)
                    ),
                ));
            }
        }
        Ok((pat, sort))
    }

    fn read_atom(&mut self, text: &str, line: usize, expect: Expect) -> Result<(Pattern, Option<SortId>)> {
        let p = self.p;
        if text.contains("...") {
            return Err(Error::syntax(line, format!("`{text}` is only allowed in an argument list")));
        }
        if let Some(name) = text.strip_prefix('$') {
            if self.mode != Mode::Rule {
                return Err(Error::syntax(line, format!("metavariable `{text}` outside a rule")));
            }
            if name.is_empty() {
                return Err(Error::syntax(line, "empty metavariable name"));
            }
            if self.in_template {
                if let Some(MetaKind::Seq(elem)) = self.metas.get(name).copied() {
                    if !self.template_vars.iter().any(|v| v == name) {
                        self.template_vars.push(name.to_owned());
                    }
                    return Ok((
                        Pattern::Meta { name: name.to_owned(), kind: MetaKind::Term(elem) },
                        Some(elem),
                    ));
                }
            }
            let kind = match expect {
                Expect::Sort(Some(s)) => MetaKind::Term(s),
                Expect::Abs { bound, count, body } => MetaKind::Abs { bound, count, body },
                Expect::Sort(None) => match self.metas.get(name) {
                    Some(k @ MetaKind::Term(_)) => *k,
                    _ => return Err(Error::sort(line, format!("cannot determine the sort of `{text}`"))),
                },
            };
            self.declare(name, kind, line)?;
            let sort = match kind {
                MetaKind::Term(s) => Some(s),
                _ => None,
            };
            return Ok((Pattern::Meta { name: name.to_owned(), kind }, sort));
        }
        if self.mode == Mode::Context {
            if let Some(n) = hole_number(text) {
                let Expect::Sort(Some(s)) = expect else {
                    return Err(Error::sort(line, format!("cannot determine the sort of `{text}`")));
                };
                if self.holes.iter().any(|(m, _)| *m == n) {
                    return Err(Error::syntax(line, format!("hole {n} occurs twice")));
                }
                let at = self.holes.partition_point(|(m, _)| *m < n);
                self.holes.insert(at, (n, s));
                return Ok((Pattern::Meta { name: format!("hole{n}"), kind: MetaKind::Term(s) }, Some(s)));
            }
        }
        for (depth, (names, sort)) in self.scopes.iter().rev().enumerate() {
            if let Some(pos) = names.iter().rposition(|n| n == text) {
                if let Expect::Abs { .. } = expect {
                    return Err(Error::sort(line, format!("bound name `{text}` where an abstraction is expected")));
                }
                return Ok((Pattern::Var { index: depth as u32, pos: pos as u32 }, Some(*sort)));
            }
        }
        if let Some(op) = p.op_id(text) {
            let d = p.op(op);
            if let Expect::Abs { .. } = expect {
                return Err(Error::sort(line, format!("`{text}` where an abstraction is expected")));
            }
            if !d.is_nullary() {
                return Err(Error::arity(line, format!("`{text}` expects {} arguments", d.args.len())));
            }
            return Ok((Pattern::App { op, args: Vec::new() }, Some(d.result)));
        }
        if text == "\\" || text == "inst" {
            return Err(Error::syntax(line, format!("unexpected `{text}`")));
        }
        let sort = match expect {
            Expect::Sort(Some(s)) => s,
            Expect::Sort(None) if p.sorts.len() == 1 => SortId(0),
            Expect::Sort(None) => {
                return Err(Error::sort(line, format!("cannot determine the sort of atom `{text}`")))
            }
            Expect::Abs { .. } => {
                return Err(Error::sort(line, format!("atom `{text}` where an abstraction is expected")))
            }
        };
        Ok((Pattern::Atom { sort, name: text.to_owned() }, Some(sort)))
    }

    fn read_list(&mut self, items: &[Sexp], line: usize, expect: Expect) -> Result<(Pattern, Option<SortId>)> {
        let p = self.p;
        let Some(head) = items.first() else {
            return Err(Error::syntax(line, "empty list"));
        };
        let head_atom = head.as_atom();
        if head_atom == Some("\\") {
            let Expect::Abs { bound, count, body } = expect else {
                return Err(Error::sort(line, "abstraction where a term is expected"));
            };
            if items.len() < 2 {
                return Err(Error::syntax(line, "abstraction without a body"));
            }
            let mut names = Vec::new();
            for n in &items[1..items.len() - 1] {
                let name = n
                    .as_atom()
                    .filter(|a| !a.starts_with('$'))
                    .ok_or_else(|| Error::syntax(n.line(), "binder names must be identifiers"))?;
                names.push(name.to_owned());
            }
            if !count.admits(names.len() as u32) {
                return Err(Error::arity(line, format!("abstraction binds {} names", names.len())));
            }
            let arity = names.len() as u32;
            self.scopes.push((names, bound));
            let r = self.read(&items[items.len() - 1], Expect::Sort(Some(body)));
            self.scopes.pop();
            let (b, _) = r?;
            return Ok((Pattern::Abs { arity, body: Box::new(b) }, None));
        }
        if let Expect::Abs { .. } = expect {
            if !(self.mode == Mode::Rule && head_atom == Some("inst")) {
                return Err(Error::sort(line, "expected an abstraction `(\\ x ... body)`"));
            }
        }
        if head_atom == Some("inst") && self.mode == Mode::Rule && p.op_id("inst").is_none() {
            let name = items
                .get(1)
                .and_then(Sexp::as_atom)
                .and_then(|a| a.strip_prefix('$'))
                .ok_or_else(|| Error::syntax(line, "expected `(inst $q arg ...)`"))?;
            let kind = self.metas.get(name).copied();
            let Some(MetaKind::Abs { bound, body, .. }) = kind else {
                return Err(Error::sort(line, format!("`${name}` is not bound to an abstraction")));
            };
            let args = self.read_seq(&items[2..], bound)?;
            return Ok((Pattern::Inst { name: name.to_owned(), kind: kind.unwrap(), args }, Some(body)));
        }
        if let Some(op) = head_atom.and_then(|h| p.op_id(h)) {
            if !(p.op(op).is_nullary() && items.len() > 1) {
                return self.read_app(op, &items[1..], line);
            }
        }
        if items.len() == 1 {
            return self.read(head, expect);
        }
        let Some(app) = p.application_op() else {
            return Err(Error::syntax(
                line,
                format!("`{head}` is not a constructor and there is no application constructor"),
            ));
        };
        let t = p.op(app).result;
        let (mut f, _) = self.read(head, Expect::Sort(Some(t)))?;
        for a in &items[1..] {
            let (x, _) = self.read(a, Expect::Sort(Some(t)))?;
            f = Pattern::App { op: app, args: vec![f, x] };
        }
        Ok((f, Some(t)))
    }

    fn read_app(&mut self, op: OpId, args: &[Sexp], line: usize) -> Result<(Pattern, Option<SortId>)> {
        let p = self.p;
        let d = p.op(op);
        let result = d.result;
        if d.attrs.assoc_comm {
            let mut items = Vec::new();
            let mut rest = None;
            for a in args {
                if let Some(name) = a.as_atom().and_then(|t| t.strip_prefix('$')).and_then(|t| t.strip_suffix("...")) {
                    if self.mode != Mode::Rule {
                        return Err(Error::syntax(line, "metavariables are only allowed in rules"));
                    }
                    if rest.is_some() {
                        return Err(Error::syntax(line, "at most one rest variable per bag"));
                    }
                    self.declare(name, MetaKind::Term(result), line)?;
                    rest = Some((name.to_owned(), result));
                    continue;
                }
                let (x, _) = self.read(a, Expect::Sort(Some(result)))?;
                items.push(x);
            }
            return Ok((bag_pattern(p, op, items, rest, line)?, Some(result)));
        }
        if d.attrs.assoc {
            let mut parts = Vec::new();
            for a in args {
                parts.push(self.read(a, Expect::Sort(Some(result)))?.0);
            }
            let unit = d.attrs.unit;
            let mut iter = parts.into_iter().rev();
            let mut acc = match iter.next() {
                Some(x) => x,
                None => match unit {
                    Some(u) => Pattern::App { op: u, args: Vec::new() },
                    None => return Err(Error::arity(line, format!("`{}` needs arguments", d.name))),
                },
            };
            for x in iter {
                acc = Pattern::App { op, args: vec![x, acc] };
            }
            return Ok((acc, Some(result)));
        }
        let fixed = d.args.len() - usize::from(d.variadic_slot().is_some());
        let ok = match d.variadic_slot() {
            Some(_) => args.len() >= fixed,
            None => args.len() == fixed,
        };
        if !ok {
            return Err(Error::arity(
                line,
                format!("`{}` expects {} arguments, got {}", d.name, d.args.len(), args.len()),
            ));
        }
        let var_len = args.len() - fixed;
        let mut out = Vec::new();
        let mut i = 0;
        for desc in &d.args {
            match *desc {
                ArgDescriptor::Plain(s) => {
                    out.push(self.read(&args[i], Expect::Sort(Some(s)))?.0);
                    i += 1;
                }
                ArgDescriptor::Abstraction { bound, count, body } => {
                    out.push(self.read(&args[i], Expect::Abs { bound, count, body })?.0);
                    i += 1;
                }
                ArgDescriptor::Variadic(s) => {
                    out.push(Pattern::Seq(self.read_seq(&args[i..i + var_len], s)?));
                    i += var_len;
                }
            }
        }
        Ok((Pattern::App { op, args: out }, Some(result)))
    }

    fn read_seq(&mut self, args: &[Sexp], elem: SortId) -> Result<Vec<SeqItem>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            if a.as_atom() == Some("...") {
                return Err(Error::syntax(a.line(), "`...` must follow a template"));
            }
            if let Some(name) = a.as_atom().and_then(|t| t.strip_prefix('$')).and_then(|t| t.strip_suffix("...")) {
                if self.mode != Mode::Rule {
                    return Err(Error::syntax(a.line(), "metavariables are only allowed in rules"));
                }
                self.declare(name, MetaKind::Seq(elem), a.line())?;
                out.push(SeqItem::Each {
                    var: name.to_owned(),
                    template: Pattern::Meta { name: name.to_owned(), kind: MetaKind::Term(elem) },
                });
                i += 1;
                continue;
            }
            let repeated = args.get(i + 1).and_then(Sexp::as_atom) == Some("...");
            if repeated {
                if self.mode != Mode::Rule || self.in_template {
                    return Err(Error::syntax(a.line(), "unexpected `...`"));
                }
                self.in_template = true;
                self.template_vars.clear();
                let r = self.read(a, Expect::Sort(Some(elem)));
                self.in_template = false;
                let (template, _) = r?;
                let vars = core::mem::take(&mut self.template_vars);
                let [var] = vars.as_slice() else {
                    return Err(Error::syntax(a.line(), "a template must mention exactly one list variable"));
                };
                out.push(SeqItem::Each { var: var.clone(), template });
                i += 2;
                continue;
            }
            out.push(SeqItem::One(self.read(a, Expect::Sort(Some(elem)))?.0));
            i += 1;
        }
        Ok(out)
    }
}

fn is_unit_pattern(p: &Presentation, op: OpId, pat: &Pattern) -> bool {
    matches!((p.op(op).attrs.unit, pat), (Some(u), Pattern::App { op: o, args }) if *o == u && args.is_empty())
}

fn bag_pattern(
    p: &Presentation,
    op: OpId,
    items: Vec<Pattern>,
    rest: Option<(String, SortId)>,
    line: usize,
) -> Result<Pattern> {
    let mut flat = Vec::new();
    for it in items {
        match it {
            Pattern::Bag { op: o, items: inner, rest: None } if o == op => flat.extend(inner),
            ref u if is_unit_pattern(p, op, u) => {}
            other => flat.push(other),
        }
    }
    if rest.is_some() {
        return Ok(Pattern::Bag { op, items: flat, rest });
    }
    match flat.len() {
        0 => match p.op(op).attrs.unit {
            Some(u) => Ok(Pattern::App { op: u, args: Vec::new() }),
            None => Err(Error::arity(line, format!("`{}` needs arguments", p.op(op).name))),
        },
        1 => Ok(flat.pop().unwrap()),
        _ => Ok(Pattern::Bag { op, items: flat, rest }),
    }
}

/// Reads both sides of a rule or equation. A rule whose left-hand side is an
/// assoc-comm application without a rest variable matches inside larger
/// bags: the unmatched items are carried over to the result.
pub(crate) fn parse_rule_sides(p: &Presentation, lhs: &Sexp, rhs: &Sexp) -> Result<(Pattern, Pattern)> {
    parse_sides(p, lhs, rhs, false)
}

pub(crate) fn parse_rewrite_sides(p: &Presentation, lhs: &Sexp, rhs: &Sexp) -> Result<(Pattern, Pattern)> {
    parse_sides(p, lhs, rhs, true)
}

fn parse_sides(p: &Presentation, lhs: &Sexp, rhs: &Sexp, implicit_rest: bool) -> Result<(Pattern, Pattern)> {
    let mut r = Reader::new(p, Mode::Rule);
    let bare = lhs.as_atom().is_some_and(|a| a.starts_with('$'));
    let (l, r_pat) = if bare {
        let (rp, rs) = r.read(rhs, Expect::Sort(None))?;
        let (lp, _) = r.read(lhs, Expect::Sort(rs))?;
        (lp, rp)
    } else {
        let (lp, ls) = r.read(lhs, Expect::Sort(None))?;
        let (rp, _) = r.read(rhs, Expect::Sort(ls))?;
        (lp, rp)
    };
    if implicit_rest {
        if let Pattern::Bag { op, items, rest: None } = &l {
            let sort = p.op(*op).result;
            let rest = Some((IMPLICIT_REST.to_owned(), sort));
            let lhs = Pattern::Bag { op: *op, items: items.clone(), rest: rest.clone() };
            let rhs_items = match r_pat {
                Pattern::Bag { op: o, items, rest: None } if o == *op => items,
                ref u if is_unit_pattern(p, *op, u) => Vec::new(),
                other => vec![other],
            };
            return Ok((lhs, Pattern::Bag { op: *op, items: rhs_items, rest }));
        }
    }
    Ok((l, r_pat))
}

/// Reads a ground term, checking sorts, and canonicalizes it.
pub(crate) fn read_ground(p: &Presentation, sx: &Sexp, sort: Option<SortId>) -> Result<Term> {
    let mut r = Reader::new(p, Mode::Ground);
    let (pat, _) = r.read(sx, Expect::Sort(sort))?;
    let t = build(p, &pat, &Subst::new())?;
    Ok(term::canonicalize(p, &t))
}

// ---------------------------------------------------------------------------
// Printing

pub struct PatternDisplay<'a> {
    p: &'a Presentation,
    pat: &'a Pattern,
    bare_holes: bool,
}

struct PatPrinter<'a> {
    p: &'a Presentation,
    bare_holes: bool,
    depth: usize,
}

impl PatPrinter<'_> {
    fn write(&mut self, f: &mut fmt::Formatter<'_>, pat: &Pattern) -> fmt::Result {
        match pat {
            Pattern::Meta { name, .. } => {
                if self.bare_holes && hole_number(name).is_some() {
                    f.write_str(name)
                } else {
                    write!(f, "${name}")
                }
            }
            Pattern::Atom { name, .. } => f.write_str(name),
            Pattern::Var { index, pos } => {
                write!(f, "{}", bound_name(self.depth - 1 - *index as usize, *pos))
            }
            Pattern::Abs { arity, body } => {
                f.write_str("(\\")?;
                for i in 0..*arity {
                    write!(f, " {}", bound_name(self.depth, i))?;
                }
                f.write_str(" ")?;
                self.depth += 1;
                let r = self.write(f, body);
                self.depth -= 1;
                r?;
                f.write_str(")")
            }
            Pattern::App { op, args } => {
                let d = self.p.op(*op);
                if args.is_empty() {
                    return f.write_str(&d.name);
                }
                if Some(*op) == self.p.application_op() {
                    f.write_str("(")?;
                    self.write(f, &args[0])?;
                    f.write_str(" ")?;
                    self.write(f, &args[1])?;
                    return f.write_str(")");
                }
                write!(f, "({}", d.name)?;
                for a in args {
                    if matches!(a, Pattern::Seq(items) if items.is_empty()) {
                        continue;
                    }
                    f.write_str(" ")?;
                    self.write(f, a)?;
                }
                f.write_str(")")
            }
            Pattern::Bag { op, items, rest } => {
                write!(f, "({}", self.p.op(*op).name)?;
                for it in items {
                    f.write_str(" ")?;
                    self.write(f, it)?;
                }
                if let Some((r, _)) = rest {
                    write!(f, " ${r}...")?;
                }
                f.write_str(")")
            }
            Pattern::Seq(items) => self.write_seq(f, items, false),
            Pattern::Inst { name, args, .. } => {
                write!(f, "(inst ${name}")?;
                self.write_seq(f, args, true)?;
                f.write_str(")")
            }
        }
    }

    fn write_seq(&mut self, f: &mut fmt::Formatter<'_>, items: &[SeqItem], lead: bool) -> fmt::Result {
        for (i, it) in items.iter().enumerate() {
            if lead || i > 0 {
                f.write_str(" ")?;
            }
            match it {
                SeqItem::One(p) => self.write(f, p)?,
                SeqItem::Each { var, template } => {
                    if matches!(template, Pattern::Meta { name, .. } if name == var) {
                        write!(f, "${var}...")?;
                    } else {
                        self.write(f, template)?;
                        f.write_str(" ...")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn bound_name(depth: usize, pos: u32) -> String {
    format!("_b{depth}_{pos}")
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PatPrinter { p: self.p, bare_holes: self.bare_holes, depth: 0 }.write(f, self.pat)
    }
}

pub fn show(p: &Presentation, pat: &Pattern) -> String {
    pat.display(p).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::term::parse_term;

    #[test]
    fn sigma_matches_once() {
        let p = builtin("ski").unwrap();
        let rule = p.rule("sigma").unwrap();
        let t = parse_term(&p, "(((S K) K) I)").unwrap();
        let m = match_pattern(&p, &rule.lhs, &t);
        assert_eq!(m.len(), 1);
        let th = &m[0];
        assert_eq!(th["x"], parse_term(&p, "K").unwrap());
        assert_eq!(th["y"], parse_term(&p, "K").unwrap());
        assert_eq!(th["z"], parse_term(&p, "I").unwrap());
    }

    #[test]
    fn kappa_does_not_match_i_k() {
        let p = builtin("ski").unwrap();
        let t = parse_term(&p, "(I K)").unwrap();
        assert!(match_pattern(&p, &p.rule("kappa").unwrap().lhs, &t).is_empty());
    }

    #[test]
    fn chi_selects_matching_channel() {
        let p = builtin("rhopi").unwrap();
        let t = parse_term(&p, "(| (send a P) (recv a (\\ y Q)) (recv b (\\ y R)) comm)").unwrap();
        let m = match_pattern(&p, &p.rule("chi").unwrap().lhs, &t);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0]["x"], crate::term::parse_term_as(&p, p.sort_id("N").unwrap(), "a").unwrap());
        assert_eq!(m[0][IMPLICIT_REST], parse_term(&p, "(recv b (\\ y R))").unwrap());
    }

    #[test]
    fn chi_needs_comm() {
        let p = builtin("rhopi").unwrap();
        let t = parse_term(&p, "(| (send a P) (recv a (\\ y Q)))").unwrap();
        assert!(match_pattern(&p, &p.rule("chi").unwrap().lhs, &t).is_empty());
    }

    #[test]
    fn chi_rhs_builds_continuation() {
        let p = builtin("rhopi").unwrap();
        let rule = p.rule("chi").unwrap();
        let t = parse_term(&p, "(| (send a P) (recv a (\\ y (send y (* y)))) comm)").unwrap();
        let m = match_pattern(&p, &rule.lhs, &t);
        let out = term::canonicalize(&p, &build(&p, &rule.rhs, &m[0]).unwrap());
        assert_eq!(out, parse_term(&p, "(| (send (quote P) P) comm)").unwrap());
    }

    #[test]
    fn contexts_plug_in_order() {
        let p = builtin("ski").unwrap();
        let c = Context::parse(&p, "(hole1 hole2)").unwrap();
        assert_eq!(c.hole_count(), 2);
        let t = parse_term(&p, "K").unwrap();
        let u = parse_term(&p, "S").unwrap();
        assert_eq!(c.plug(&p, &[t, u]).unwrap(), parse_term(&p, "(K S)").unwrap());
        let k = Context::parse(&p, "K").unwrap();
        assert_eq!(k.plug(&p, &[]).unwrap(), parse_term(&p, "K").unwrap());
        assert!(matches!(k.plug(&p, &[parse_term(&p, "K").unwrap()]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn par_context_plugs_into_bag() {
        let p = builtin("rhopi").unwrap();
        let c = Context::parse(&p, "(| hole1 hole2)").unwrap();
        let t = parse_term(&p, "(| comm (send a))").unwrap();
        let u = parse_term(&p, "(send b)").unwrap();
        assert_eq!(
            c.plug(&p, &[t, u]).unwrap(),
            parse_term(&p, "(| comm (send a) (send b))").unwrap()
        );
        assert_eq!(format!("{}", c.display(&p)), "(| hole1 hole2)");
    }

    #[test]
    fn contexts_reject_repeated_holes() {
        let p = builtin("ski").unwrap();
        assert!(Context::parse(&p, "(hole1 hole1)").is_err());
        assert!(Context::parse(&p, "(hole1 hole3)").is_err());
    }

    #[test]
    fn splice_binds_argument_list() {
        let p = builtin("rhopi").unwrap();
        let t = parse_term(&p, "(| (send a P Q) (recv a (\\ u v (| (* u) (* v)))) comm)").unwrap();
        let rule = p.rule("chi").unwrap();
        let m = match_pattern(&p, &rule.lhs, &t);
        assert_eq!(m.len(), 1);
        assert!(matches!(&m[0]["ps"], Term::Seq(items) if items.len() == 2));
        let out = term::canonicalize(&p, &build(&p, &rule.rhs, &m[0]).unwrap());
        assert_eq!(out, parse_term(&p, "(| P Q comm)").unwrap());
    }
}
