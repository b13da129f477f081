//! Formulae over a presentation: Boolean connectives on each logic sort,
//! constructors lifted to formulae, context-parametric modalities
//! `(dia u C v)` and greatest fixed points `(mu X f)`.
//!
//! Concrete syntax, read against an expected sort:
//!
//! ```text
//! top bot top_S bot_S (and f g ...) (or f g ...) (not f)
//! (c f1 ... fn)  (lift c f1 ... fn)   lifted constructor; binder arguments
//!                                      are written (\ x ... f) or top
//! (dia u C v)  (rg u v)  (arrow u v)   modalities; C uses hole1 and hole2
//! (mu X f)  X                           greatest fixed point and its variable
//! a                                     a generator atom
//! (name args...)                        a user macro
//! ```

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::pattern::Context;
use crate::sexpr::{self, Sexp};
use crate::signature::{ArgDescriptor, OpId, Presentation, SortId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Top(SortId),
    Bot(SortId),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Lifted { op: OpId, sort: SortId, args: Vec<FormulaArg> },
    AtomLit { sort: SortId, name: String },
    /// A name bound by an enclosing binder argument (de Bruijn, like terms).
    Name { index: u32, pos: u32, sort: SortId },
    Modal { u: Box<Formula>, ctx: Context, v: Box<Formula>, sort: SortId },
    /// Greatest fixed point.
    Mu { var: String, sort: SortId, body: Box<Formula> },
    Var { name: String, sort: SortId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaArg {
    Plain(Formula),
    List(Vec<Formula>),
    /// `(\ x1 .. xn f)`; `names` is empty and `arity` is `None` for `top`,
    /// which accepts any abstraction.
    Binder { arity: Option<u32>, bound: SortId, names: Vec<String>, body: Box<Formula> },
}

impl Formula {
    pub fn sort(&self) -> SortId {
        match self {
            Formula::Top(s) | Formula::Bot(s) => *s,
            Formula::And(a, _) | Formula::Or(a, _) | Formula::Not(a) => a.sort(),
            Formula::Lifted { sort, .. }
            | Formula::AtomLit { sort, .. }
            | Formula::Name { sort, .. }
            | Formula::Modal { sort, .. }
            | Formula::Mu { sort, .. }
            | Formula::Var { sort, .. } => *sort,
        }
    }

    pub fn negation(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Number of nodes, for reporting.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Not(a) => 1 + a.node_count(),
            Formula::Lifted { args, .. } => {
                1 + args
                    .iter()
                    .map(|a| match a {
                        FormulaArg::Plain(f) => f.node_count(),
                        FormulaArg::List(fs) => fs.iter().map(Formula::node_count).sum(),
                        FormulaArg::Binder { body, .. } => body.node_count(),
                    })
                    .sum::<usize>()
            }
            Formula::Modal { u, v, .. } => 1 + u.node_count() + v.node_count(),
            Formula::Mu { body, .. } => 1 + body.node_count(),
            _ => 1,
        }
    }

    /// Upper bound on the size of any term satisfying the formula, if one
    /// can be read off syntactically.
    pub fn size_bound(&self) -> Option<usize> {
        match self {
            Formula::Top(_) | Formula::Not(_) | Formula::Modal { .. } | Formula::Mu { .. } | Formula::Var { .. } => None,
            // A bound name may stand for an arbitrarily large term.
            Formula::Name { .. } => None,
            Formula::Bot(_) => Some(0),
            Formula::AtomLit { .. } => Some(1),
            Formula::Or(a, b) => Some(a.size_bound()?.max(b.size_bound()?)),
            Formula::And(a, b) => match (a.size_bound(), b.size_bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) | (None, x) => x,
            },
            Formula::Lifted { args, .. } => {
                let mut total = 1;
                for a in args {
                    total += match a {
                        FormulaArg::Plain(f) => f.size_bound()?,
                        FormulaArg::List(fs) => {
                            fs.iter().map(Formula::size_bound).sum::<Option<usize>>()?
                        }
                        FormulaArg::Binder { .. } => return None,
                    };
                }
                Some(total)
            }
        }
    }

    /// Atom literals mentioned anywhere in the formula, with their sorts.
    pub fn atom_literals(&self, out: &mut BTreeSet<(SortId, String)>) {
        match self {
            Formula::AtomLit { sort, name } => {
                out.insert((*sort, name.clone()));
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.atom_literals(out);
                b.atom_literals(out);
            }
            Formula::Not(a) => a.atom_literals(out),
            Formula::Mu { body, .. } => body.atom_literals(out),
            Formula::Modal { u, v, .. } => {
                u.atom_literals(out);
                v.atom_literals(out);
            }
            Formula::Lifted { args, .. } => {
                for a in args {
                    match a {
                        FormulaArg::Plain(f) => f.atom_literals(out),
                        FormulaArg::List(fs) => fs.iter().for_each(|f| f.atom_literals(out)),
                        FormulaArg::Binder { body, .. } => body.atom_literals(out),
                    }
                }
            }
            _ => {}
        }
    }

    /// True if some binder body refers to the name it binds. Such formulae
    /// depend on which names instantiate the binder.
    pub fn inspects_bound_name(&self) -> bool {
        fn refers(f: &Formula, depth: u32) -> bool {
            match f {
                Formula::Name { index, .. } => *index == depth,
                Formula::And(a, b) | Formula::Or(a, b) => refers(a, depth) || refers(b, depth),
                Formula::Not(a) => refers(a, depth),
                Formula::Mu { body, .. } => refers(body, depth),
                Formula::Modal { u, v, .. } => refers(u, depth) || refers(v, depth),
                Formula::Lifted { args, .. } => args.iter().any(|a| match a {
                    FormulaArg::Plain(f) => refers(f, depth),
                    FormulaArg::List(fs) => fs.iter().any(|f| refers(f, depth)),
                    FormulaArg::Binder { body, .. } => refers(body, depth + 1),
                }),
                _ => false,
            }
        }
        fn walk(f: &Formula) -> bool {
            match f {
                Formula::And(a, b) | Formula::Or(a, b) => walk(a) || walk(b),
                Formula::Not(a) => walk(a),
                Formula::Mu { body, .. } => walk(body),
                Formula::Modal { u, v, .. } => walk(u) || walk(v),
                Formula::Lifted { args, .. } => args.iter().any(|a| match a {
                    FormulaArg::Plain(f) => walk(f),
                    FormulaArg::List(fs) => fs.iter().any(walk),
                    FormulaArg::Binder { body, .. } => refers(body, 0) || walk(body),
                }),
                _ => false,
            }
        }
        walk(self)
    }

    /// Fixed point variables that occur free.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var { name, .. } => {
                    if !bound.contains(name) {
                        out.insert(name.clone());
                    }
                }
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::Modal { u, v, .. } => {
                    go(u, bound, out);
                    go(v, bound, out);
                }
                Formula::Mu { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Formula::Lifted { args, .. } => {
                    for a in args {
                        match a {
                            FormulaArg::Plain(f) => go(f, bound, out),
                            FormulaArg::List(fs) => fs.iter().for_each(|f| go(f, bound, out)),
                            FormulaArg::Binder { body, .. } => go(body, bound, out),
                        }
                    }
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> FormulaDisplay<'a> {
        FormulaDisplay { p, f: self }
    }
}

/// Verifies that every fixed point variable occurs under an even number of
/// negations below its binder.
pub fn check_positive(f: &Formula) -> Result<()> {
    fn go(f: &Formula, parity: &mut BTreeMap<String, Vec<bool>>, neg: bool) -> Result<()> {
        match f {
            Formula::Var { name, .. } => match parity.get(name).and_then(|v| v.last()) {
                Some(&at_binder) if at_binder != neg => Err(Error::NonPositiveFixedPoint(name.clone())),
                _ => Ok(()),
            },
            Formula::Not(a) => go(a, parity, !neg),
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, parity, neg)?;
                go(b, parity, neg)
            }
            Formula::Modal { u, v, .. } => {
                go(u, parity, neg)?;
                go(v, parity, neg)
            }
            Formula::Mu { var, body, .. } => {
                parity.entry(var.clone()).or_default().push(neg);
                let r = go(body, parity, neg);
                parity.get_mut(var).map(Vec::pop);
                r
            }
            Formula::Lifted { args, .. } => {
                for a in args {
                    match a {
                        FormulaArg::Plain(x) => go(x, parity, neg)?,
                        FormulaArg::List(xs) => {
                            for x in xs {
                                go(x, parity, neg)?;
                            }
                        }
                        FormulaArg::Binder { body, .. } => go(body, parity, neg)?,
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
    go(f, &mut BTreeMap::new(), false)
}

/// Re-derives the sort of a formula, checking every node.
pub fn sort_check(p: &Presentation, f: &Formula) -> Result<SortId> {
    let logic = |s: SortId| -> Result<SortId> {
        if p.is_logic_sort(s) {
            Ok(s)
        } else {
            Err(Error::LogicNotEnabled(p.sort_name(s).to_string()))
        }
    };
    let same = |a: SortId, b: SortId| -> Result<SortId> {
        if a == b {
            Ok(a)
        } else {
            Err(Error::sort(0, format!("{} and {} do not match", p.sort_name(a), p.sort_name(b))))
        }
    };
    match f {
        Formula::Top(s) | Formula::Bot(s) => logic(*s),
        Formula::And(a, b) | Formula::Or(a, b) => logic(same(sort_check(p, a)?, sort_check(p, b)?)?),
        Formula::Not(a) => logic(sort_check(p, a)?),
        Formula::AtomLit { sort, .. } | Formula::Name { sort, .. } => Ok(*sort),
        Formula::Var { sort, .. } => logic(*sort),
        Formula::Mu { sort, body, .. } => logic(same(*sort, sort_check(p, body)?)?),
        Formula::Modal { u, ctx, v, sort } => {
            if ctx.holes.len() != 2 {
                return Err(Error::arity(0, "a modality needs a context with two holes"));
            }
            same(ctx.holes[0], *sort)?;
            same(ctx.holes[1], sort_check(p, u)?)?;
            same(ctx.sort, sort_check(p, v)?)?;
            logic(*sort)
        }
        Formula::Lifted { op, sort, args } => {
            let d = p.op(*op);
            same(d.result, *sort)?;
            if d.is_flattened() {
                if args.len() != 2 {
                    return Err(Error::arity(0, format!("`{}` is binary", d.name)));
                }
            } else if args.len() != d.args.len() {
                return Err(Error::arity(0, format!("`{}` expects {} arguments", d.name, d.args.len())));
            }
            for (a, desc) in args.iter().zip(d.args.iter()) {
                match (a, desc) {
                    (FormulaArg::Plain(x), ArgDescriptor::Plain(s)) => {
                        same(sort_check(p, x)?, *s)?;
                    }
                    (FormulaArg::List(xs), ArgDescriptor::Variadic(s)) => {
                        for x in xs {
                            same(sort_check(p, x)?, *s)?;
                        }
                    }
                    (FormulaArg::Binder { arity, body, bound, .. }, ArgDescriptor::Abstraction { bound: b, count, body: bs }) => {
                        same(*bound, *b)?;
                        if let Some(n) = arity {
                            if !count.admits(*n) {
                                return Err(Error::arity(0, format!("binder arity {n} not allowed")));
                            }
                        }
                        same(sort_check(p, body)?, *bs)?;
                    }
                    _ => return Err(Error::sort(0, format!("argument of `{}` does not fit", d.name))),
                }
            }
            Ok(*sort)
        }
    }
}

// ---------------------------------------------------------------------------
// Derived modalities

/// A derived modality: a named two-hole context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedForm {
    pub name: &'static str,
    pub ctx: Context,
}

/// Contexts of the derived modalities `rg` (rely-guarantee, parallel
/// composition) and `arrow` (application), where available.
pub fn derived_forms(p: &Presentation) -> Vec<DerivedForm> {
    ["rg", "arrow"].iter().filter_map(|n| derived_form(p, n).ok()).collect()
}

pub fn derived_form(p: &Presentation, name: &str) -> Result<DerivedForm> {
    let op = match name {
        "rg" => p.parallel_op(),
        "arrow" => p.application_op(),
        _ => None,
    };
    let unavailable = || Error::MacroUnavailable(name.to_string());
    let op = op.ok_or_else(unavailable)?;
    let ctx = Context::of_constructor(p, op).ok_or_else(unavailable)?;
    let name = if name == "rg" { "rg" } else { "arrow" };
    Ok(DerivedForm { name, ctx })
}

// ---------------------------------------------------------------------------
// Parsing

/// User formula macros: name, parameters and body.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Macros {
    defs: BTreeMap<String, (Vec<String>, Sexp)>,
}

impl Macros {
    pub fn new() -> Self {
        Self::default()
    }

    /// Defines `name params... = body`. The body is read when the macro is
    /// used, at the sort of its use site.
    pub fn define(&mut self, name: &str, params: &[&str], body: &str) -> Result<()> {
        let sx = sexpr::parse_one(body, 1)?;
        self.defs.insert(name.to_string(), (params.iter().map(|s| s.to_string()).collect(), sx));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&(Vec<String>, Sexp)> {
        self.defs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }
}

fn substitute(sx: &Sexp, env: &BTreeMap<&str, &Sexp>) -> Sexp {
    match sx {
        Sexp::Atom { text, .. } => match env.get(text.as_str()) {
            Some(r) => (*r).clone(),
            None => sx.clone(),
        },
        Sexp::List { items, line } => {
            Sexp::List { items: items.iter().map(|i| substitute(i, env)).collect(), line: *line }
        }
    }
}

const KEYWORDS: [&str; 11] = ["top", "bot", "and", "or", "not", "mu", "dia", "rg", "arrow", "lift", "\\"];

struct FParser<'a> {
    p: &'a Presentation,
    macros: &'a Macros,
    mu_vars: Vec<(String, SortId)>,
    names: Vec<(Vec<String>, SortId)>,
    expansions: usize,
}

impl FParser<'_> {
    fn logic(&self, s: SortId) -> Result<()> {
        if self.p.is_logic_sort(s) {
            Ok(())
        } else {
            Err(Error::LogicNotEnabled(self.p.sort_name(s).to_string()))
        }
    }

    fn mismatch(&self, line: usize, what: &str, got: SortId, want: SortId) -> Error {
        Error::sort(
            line,
            format!("`{what}` has sort {} where {} is expected", self.p.sort_name(got), self.p.sort_name(want)),
        )
    }

    fn read(&mut self, sx: &Sexp, want: SortId) -> Result<Formula> {
        match sx {
            Sexp::Atom { text, line } => self.read_atom(text, *line, want),
            Sexp::List { items, line } => self.read_list(items, *line, want),
        }
    }

    fn read_atom(&mut self, text: &str, line: usize, want: SortId) -> Result<Formula> {
        let p = self.p;
        match text {
            "top" => {
                self.logic(want)?;
                return Ok(Formula::Top(want));
            }
            "bot" => {
                self.logic(want)?;
                return Ok(Formula::Bot(want));
            }
            _ => {}
        }
        for (prefix, is_top) in [("top_", true), ("bot_", false)] {
            if let Some(sname) = text.strip_prefix(prefix) {
                if let Some(s) = p.sort_id(sname) {
                    if s != want {
                        return Err(self.mismatch(line, text, s, want));
                    }
                    self.logic(s)?;
                    return Ok(if is_top { Formula::Top(s) } else { Formula::Bot(s) });
                }
            }
        }
        if let Some((name, s)) = self.mu_vars.iter().rev().find(|(n, _)| n == text) {
            if *s != want {
                return Err(self.mismatch(line, text, *s, want));
            }
            return Ok(Formula::Var { name: name.clone(), sort: *s });
        }
        for (depth, (names, s)) in self.names.iter().rev().enumerate() {
            if let Some(pos) = names.iter().rposition(|n| n == text) {
                if *s != want {
                    return Err(self.mismatch(line, text, *s, want));
                }
                return Ok(Formula::Name { index: depth as u32, pos: pos as u32, sort: *s });
            }
        }
        if let Some(op) = p.op_id(text) {
            let d = p.op(op);
            if d.result != want {
                return Err(self.mismatch(line, text, d.result, want));
            }
            if !d.is_nullary() {
                return Err(Error::arity(line, format!("`{text}` expects {} arguments", d.args.len())));
            }
            return Ok(Formula::Lifted { op, sort: want, args: Vec::new() });
        }
        if KEYWORDS.contains(&text) || text.starts_with('$') || text.contains("...") {
            return Err(Error::syntax(line, format!("unexpected `{text}`")));
        }
        if text.chars().next().is_some_and(char::is_uppercase) {
            return Err(Error::UnboundVar(text.to_string()));
        }
        Ok(Formula::AtomLit { sort: want, name: text.to_string() })
    }

    fn read_list(&mut self, items: &[Sexp], line: usize, want: SortId) -> Result<Formula> {
        let p = self.p;
        let Some(head) = items.first() else {
            return Err(Error::syntax(line, "empty list"));
        };
        let args = &items[1..];
        let Some(h) = head.as_atom() else {
            return self.read_juxtaposition(items, line, want);
        };
        match h {
            "and" | "or" => {
                if args.is_empty() {
                    return Err(Error::arity(line, format!("`{h}` needs arguments")));
                }
                self.logic(want)?;
                let mut parts = Vec::new();
                for a in args {
                    parts.push(self.read(a, want)?);
                }
                let mut it = parts.into_iter();
                let mut acc = it.next().unwrap();
                for x in it {
                    acc = if h == "and" { Formula::and(acc, x) } else { Formula::or(acc, x) };
                }
                Ok(acc)
            }
            "not" => {
                let [a] = args else { return Err(Error::arity(line, "`not` takes one argument")) };
                self.logic(want)?;
                Ok(Formula::negation(self.read(a, want)?))
            }
            "mu" => {
                let [v, body] = args else { return Err(Error::syntax(line, "expected `(mu X body)`")) };
                let var = v.as_atom().ok_or_else(|| Error::syntax(line, "fixed point variable must be an identifier"))?;
                if KEYWORDS.contains(&var) || p.op_id(var).is_some() {
                    return Err(Error::syntax(line, format!("`{var}` cannot name a variable")));
                }
                self.logic(want)?;
                self.mu_vars.push((var.to_string(), want));
                let r = self.read(body, want);
                self.mu_vars.pop();
                Ok(Formula::Mu { var: var.to_string(), sort: want, body: Box::new(r?) })
            }
            "dia" => {
                let [u, c, v] = args else { return Err(Error::syntax(line, "expected `(dia u C v)`")) };
                let ctx = Context::from_sexp(p, c)?;
                self.modal(ctx, u, v, line, want)
            }
            "rg" | "arrow" => {
                let [u, v] = args else { return Err(Error::syntax(line, format!("expected `({h} u v)`"))) };
                let ctx = derived_form(p, h)?.ctx;
                self.modal(ctx, u, v, line, want)
            }
            "lift" => {
                let Some(name) = args.first().and_then(Sexp::as_atom) else {
                    return Err(Error::syntax(line, "expected `(lift c args...)`"));
                };
                let op = p.op_id(name).ok_or_else(|| Error::syntax(line, format!("unknown constructor `{name}`")))?;
                self.read_lifted(op, &args[1..], line, want)
            }
            "\\" => Err(Error::syntax(line, "a binder formula is only allowed as a binder argument")),
            _ => {
                if let Some(op) = p.op_id(h) {
                    if !(p.op(op).is_nullary() && !args.is_empty()) {
                        return self.read_lifted(op, args, line, want);
                    }
                }
                if let Some((params, body)) = self.macros.get(h).cloned() {
                    if params.len() != args.len() {
                        return Err(Error::arity(line, format!("`{h}` expects {} arguments", params.len())));
                    }
                    self.expansions += 1;
                    if self.expansions > 256 {
                        return Err(Error::syntax(line, "macro expansion does not terminate"));
                    }
                    let env: BTreeMap<&str, &Sexp> = params.iter().map(String::as_str).zip(args.iter()).collect();
                    return self.read(&substitute(&body, &env), want);
                }
                if items.len() == 1 {
                    return self.read(head, want);
                }
                self.read_juxtaposition(items, line, want)
            }
        }
    }

    fn modal(&mut self, ctx: Context, u: &Sexp, v: &Sexp, line: usize, want: SortId) -> Result<Formula> {
        if ctx.holes.len() != 2 {
            return Err(Error::arity(line, "a modality needs a context with exactly two holes"));
        }
        if ctx.holes[0] != want {
            return Err(self.mismatch(line, "hole1", ctx.holes[0], want));
        }
        self.logic(want)?;
        let u = self.read(u, ctx.holes[1])?;
        let v = self.read(v, ctx.sort)?;
        Ok(Formula::Modal { u: Box::new(u), ctx, v: Box::new(v), sort: want })
    }

    fn read_juxtaposition(&mut self, items: &[Sexp], line: usize, want: SortId) -> Result<Formula> {
        let p = self.p;
        let Some(app) = p.application_op() else {
            return Err(Error::syntax(line, format!("cannot read `{}`", items[0])));
        };
        let t = p.op(app).result;
        if t != want {
            return Err(self.mismatch(line, "application", t, want));
        }
        let mut f = self.read(&items[0], t)?;
        for a in &items[1..] {
            let x = self.read(a, t)?;
            f = Formula::Lifted { op: app, sort: t, args: alloc::vec![FormulaArg::Plain(f), FormulaArg::Plain(x)] };
        }
        Ok(f)
    }

    fn read_lifted(&mut self, op: OpId, args: &[Sexp], line: usize, want: SortId) -> Result<Formula> {
        let p = self.p;
        let d = p.op(op);
        if d.result != want {
            return Err(self.mismatch(line, &d.name, d.result, want));
        }
        if d.is_flattened() {
            if args.is_empty() {
                return Err(Error::arity(line, format!("`{}` needs arguments", d.name)));
            }
            let mut parts = Vec::new();
            for a in args {
                parts.push(self.read(a, want)?);
            }
            let mut it = parts.into_iter().rev();
            let mut acc = it.next().unwrap();
            for x in it {
                acc = Formula::Lifted { op, sort: want, args: alloc::vec![FormulaArg::Plain(x), FormulaArg::Plain(acc)] };
            }
            return Ok(acc);
        }
        let fixed = d.args.len() - usize::from(d.variadic_slot().is_some());
        let ok = if d.variadic_slot().is_some() { args.len() >= fixed } else { args.len() == fixed };
        if !ok {
            return Err(Error::arity(
                line,
                format!("`{}` expects {} arguments, got {}", d.name, d.args.len(), args.len()),
            ));
        }
        let var_len = args.len() - fixed;
        let mut out = Vec::new();
        let mut i = 0;
        for desc in d.args.clone() {
            match desc {
                ArgDescriptor::Plain(s) => {
                    out.push(FormulaArg::Plain(self.read(&args[i], s)?));
                    i += 1;
                }
                ArgDescriptor::Variadic(s) => {
                    let mut fs = Vec::new();
                    for a in &args[i..i + var_len] {
                        fs.push(self.read(a, s)?);
                    }
                    out.push(FormulaArg::List(fs));
                    i += var_len;
                }
                ArgDescriptor::Abstraction { bound, count, body } => {
                    let a = &args[i];
                    i += 1;
                    if a.as_atom() == Some("top") {
                        self.logic(body)?;
                        out.push(FormulaArg::Binder { arity: None, bound, names: Vec::new(), body: Box::new(Formula::Top(body)) });
                        continue;
                    }
                    let Some(parts) = a.as_list().filter(|l| l.first().and_then(Sexp::as_atom) == Some("\\")) else {
                        return Err(Error::sort(a.line(), format!("`{}` expects a binder `(\\ x ... f)` or `top`", d.name)));
                    };
                    if parts.len() < 2 {
                        return Err(Error::syntax(a.line(), "binder without a body"));
                    }
                    let mut names = Vec::new();
                    for n in &parts[1..parts.len() - 1] {
                        names.push(
                            n.as_atom()
                                .ok_or_else(|| Error::syntax(n.line(), "binder names must be identifiers"))?
                                .to_string(),
                        );
                    }
                    if !count.admits(names.len() as u32) {
                        return Err(Error::arity(a.line(), format!("binder of `{}` binds {} names", d.name, names.len())));
                    }
                    self.names.push((names.clone(), bound));
                    let r = self.read(&parts[parts.len() - 1], body);
                    self.names.pop();
                    out.push(FormulaArg::Binder {
                        arity: Some(names.len() as u32),
                        bound,
                        names,
                        body: Box::new(r?),
                    });
                }
            }
        }
        Ok(Formula::Lifted { op, sort: want, args: out })
    }
}

/// Parses a closed formula of the given sort.
pub fn parse_formula(p: &Presentation, sort: SortId, text: &str) -> Result<Formula> {
    parse_formula_with(p, sort, text, &Macros::new())
}

pub fn parse_formula_with(p: &Presentation, sort: SortId, text: &str, macros: &Macros) -> Result<Formula> {
    let sx = sexpr::parse_one(text, 1)?;
    parse_formula_sexp(p, sort, &sx, macros)
}

pub fn parse_formula_sexp(p: &Presentation, sort: SortId, sx: &Sexp, macros: &Macros) -> Result<Formula> {
    if !p.is_logic_sort(sort) {
        return Err(Error::LogicNotEnabled(p.sort_name(sort).to_string()));
    }
    let mut fp = FParser { p, macros, mu_vars: Vec::new(), names: Vec::new(), expansions: 0 };
    let f = fp.read(sx, sort)?;
    check_positive(&f)?;
    Ok(f)
}

// ---------------------------------------------------------------------------
// Printing

pub struct FormulaDisplay<'a> {
    p: &'a Presentation,
    f: &'a Formula,
}

struct FPrinter<'a> {
    p: &'a Presentation,
    names: Vec<Vec<String>>,
}

impl FPrinter<'_> {
    fn write(&mut self, out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
        match f {
            Formula::Top(_) => out.write_str("top"),
            Formula::Bot(_) => out.write_str("bot"),
            Formula::And(a, b) | Formula::Or(a, b) => {
                out.write_str(if matches!(f, Formula::And(..)) { "(and " } else { "(or " })?;
                self.write(out, a)?;
                out.write_str(" ")?;
                self.write(out, b)?;
                out.write_str(")")
            }
            Formula::Not(a) => {
                out.write_str("(not ")?;
                self.write(out, a)?;
                out.write_str(")")
            }
            Formula::AtomLit { name, .. } => out.write_str(name),
            Formula::Name { index, pos, .. } => {
                let depth = self.names.len();
                let name = self
                    .names
                    .get(depth.wrapping_sub(1 + *index as usize))
                    .and_then(|s| s.get(*pos as usize))
                    .cloned()
                    .unwrap_or_else(|| "?".into());
                out.write_str(&name)
            }
            Formula::Var { name, .. } => out.write_str(name),
            Formula::Mu { var, body, .. } => {
                write!(out, "(mu {var} ")?;
                self.write(out, body)?;
                out.write_str(")")
            }
            Formula::Modal { u, ctx, v, .. } => {
                out.write_str("(dia ")?;
                self.write(out, u)?;
                write!(out, " {} ", ctx.display(self.p))?;
                self.write(out, v)?;
                out.write_str(")")
            }
            Formula::Lifted { op, args, .. } => {
                let d = self.p.op(*op);
                if args.is_empty() {
                    return out.write_str(&d.name);
                }
                write!(out, "(lift {}", d.name)?;
                for a in args {
                    match a {
                        FormulaArg::Plain(x) => {
                            out.write_str(" ")?;
                            self.write(out, x)?;
                        }
                        FormulaArg::List(xs) => {
                            for x in xs {
                                out.write_str(" ")?;
                                self.write(out, x)?;
                            }
                        }
                        FormulaArg::Binder { arity: None, .. } => out.write_str(" top")?,
                        FormulaArg::Binder { names, body, .. } => {
                            out.write_str(" (\\")?;
                            for n in names {
                                write!(out, " {n}")?;
                            }
                            out.write_str(" ")?;
                            self.names.push(names.clone());
                            let r = self.write(out, body);
                            self.names.pop();
                            r?;
                            out.write_str(")")?;
                        }
                    }
                }
                out.write_str(")")
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        FPrinter { p: self.p, names: Vec::new() }.write(f, self.f)
    }
}

pub fn show(p: &Presentation, f: &Formula) -> String {
    f.display(p).to_string()
}
