//! Calculus presentations: sorts, constructors, structural equations and
//! rewrite rules, together with the line-oriented DSL that describes them.
//!
//! ```text
//! sort T
//! op S, K, I : -> T
//! op app : T, T -> T
//! rule kappa : (app (app K $y) $z) => $y
//! ```
//!
//! Structural equations come in exactly two families:
//!
//! * constructor attributes (`assoc-comm`, `assoc`, `unit <op>`), handled by
//!   flattening into canonical multisets or words;
//! * oriented collapse equations (`eq lhs = rhs`) whose right-hand side is
//!   strictly smaller than the left and mentions the same metavariables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::pattern::{self, MetaKind, Pattern};
use crate::sexpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub u32);

/// Source line of a declaration. Compares equal to every other line so that
/// presentations compare by content.
#[derive(Debug, Clone, Copy, Default)]
pub struct Line(pub usize);

impl PartialEq for Line {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Line {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sort {
    pub name: String,
    pub line: Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundCount {
    Fixed(u32),
    Variadic,
}

impl BoundCount {
    pub fn admits(self, arity: u32) -> bool {
        match self {
            BoundCount::Fixed(n) => n == arity,
            BoundCount::Variadic => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArgDescriptor {
    Plain(SortId),
    /// Kleene star: any number of arguments of the sort.
    Variadic(SortId),
    /// Function sort `bound^count => body`, written `bind N* . P`.
    Abstraction { bound: SortId, count: BoundCount, body: SortId },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Attributes {
    pub assoc_comm: bool,
    /// Associative without commutativity; canonical forms are right-nested.
    pub assoc: bool,
    pub unit: Option<OpId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructorDecl {
    pub name: String,
    pub args: Vec<ArgDescriptor>,
    pub result: SortId,
    pub attrs: Attributes,
    pub line: Line,
}

impl ConstructorDecl {
    pub fn is_nullary(&self) -> bool {
        self.args.is_empty()
    }

    /// Constructors whose applications are flattened by canonicalization.
    pub fn is_flattened(&self) -> bool {
        self.attrs.assoc_comm || self.attrs.assoc
    }

    pub fn variadic_slot(&self) -> Option<usize> {
        self.args.iter().position(|a| matches!(a, ArgDescriptor::Variadic(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSchema {
    pub lhs: Pattern,
    pub rhs: Pattern,
    pub line: Line,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRuleDecl {
    pub name: String,
    pub lhs: Pattern,
    pub rhs: Pattern,
    pub line: Line,
}

/// A calculus presentation. Immutable once built; share it freely.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Presentation {
    pub sorts: Vec<Sort>,
    pub ops: Vec<ConstructorDecl>,
    pub equations: Vec<EquationSchema>,
    pub rules: Vec<RewriteRuleDecl>,
    /// Sorts that carry a copy of the Boolean connectives.
    pub logic_sorts: Vec<SortId>,
}

impl Presentation {
    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s.name == name).map(|i| SortId(i as u32))
    }

    pub fn sort_name(&self, id: SortId) -> &str {
        self.sorts.get(id.0 as usize).map(|s| s.name.as_str()).unwrap_or("?")
    }

    pub fn op_id(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name).map(|i| OpId(i as u32))
    }

    pub fn op(&self, id: OpId) -> &ConstructorDecl {
        &self.ops[id.0 as usize]
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> + '_ {
        (0..self.ops.len()).map(|i| OpId(i as u32))
    }

    pub fn sort_ids(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len()).map(|i| SortId(i as u32))
    }

    pub fn ops_of_sort(&self, sort: SortId) -> impl Iterator<Item = OpId> + '_ {
        self.op_ids().filter(move |&id| self.op(id).result == sort)
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRuleDecl> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn is_logic_sort(&self, sort: SortId) -> bool {
        self.logic_sorts.contains(&sort)
    }

    /// The binary constructor named `app`, used for juxtaposition syntax
    /// `(f a b)` and for the `arrow` modality.
    pub fn application_op(&self) -> Option<OpId> {
        let id = self.op_id("app")?;
        let d = self.op(id);
        let plain = ArgDescriptor::Plain(d.result);
        (d.args.len() == 2 && d.args.iter().all(|a| *a == plain) && !d.is_flattened())
            .then_some(id)
    }

    /// The assoc-comm constructor named `|` (parallel composition).
    pub fn parallel_op(&self) -> Option<OpId> {
        let id = self.op_id("|")?;
        self.op(id).attrs.assoc_comm.then_some(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    EmptyPresentation,
    DuplicateSort,
    DuplicateConstructor,
    DuplicateRule,
    UnknownSort,
    UnknownConstructor,
    BadAttribute,
    AmbiguousVariadic,
    UnboundMetavariable,
    BareMetavariableLhs,
    MetavariableMismatch,
    NotCollapsing,
    SortMismatch,
    BadPattern,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {:?}: {}", self.line, self.kind, self.message)
    }
}

fn diag(kind: DiagnosticKind, line: Line, message: impl Into<String>) -> Diagnostic {
    Diagnostic { kind, line: line.0, message: message.into() }
}

/// Checks every structural invariant of a presentation. The result is sorted
/// and free of duplicates, so it does not depend on declaration order.
pub fn validate(p: &Presentation) -> Vec<Diagnostic> {
    use DiagnosticKind::*;
    let mut out = BTreeSet::new();
    let nsorts = p.sorts.len() as u32;
    let sort_ok = |s: SortId| s.0 < nsorts;

    if p.sorts.is_empty() {
        out.insert(diag(EmptyPresentation, Line(0), "no sorts declared"));
    }
    let mut seen = BTreeMap::new();
    for s in &p.sorts {
        if seen.insert(s.name.as_str(), ()).is_some() {
            out.insert(diag(DuplicateSort, s.line, format!("sort `{}` declared twice", s.name)));
        }
    }
    let mut seen = BTreeMap::new();
    for o in &p.ops {
        if seen.insert(o.name.as_str(), ()).is_some() {
            out.insert(diag(
                DuplicateConstructor,
                o.line,
                format!("constructor `{}` declared twice", o.name),
            ));
        }
    }
    let mut seen = BTreeMap::new();
    for r in &p.rules {
        if seen.insert(r.name.as_str(), ()).is_some() {
            out.insert(diag(DuplicateRule, r.line, format!("rule `{}` declared twice", r.name)));
        }
    }
    for &s in &p.logic_sorts {
        if !sort_ok(s) {
            out.insert(diag(UnknownSort, Line(0), format!("logic sort #{} does not exist", s.0)));
        }
    }

    for o in &p.ops {
        let mut sorts_fine = sort_ok(o.result);
        for a in &o.args {
            let ok = match *a {
                ArgDescriptor::Plain(s) | ArgDescriptor::Variadic(s) => sort_ok(s),
                ArgDescriptor::Abstraction { bound, body, .. } => sort_ok(bound) && sort_ok(body),
            };
            sorts_fine &= ok;
        }
        if !sorts_fine {
            out.insert(diag(UnknownSort, o.line, format!("`{}` refers to an undeclared sort", o.name)));
            continue;
        }
        if o.args.iter().filter(|a| matches!(a, ArgDescriptor::Variadic(_))).count() > 1 {
            out.insert(diag(
                AmbiguousVariadic,
                o.line,
                format!("`{}` has more than one variadic argument", o.name),
            ));
        }
        let binary_closed = o.args.len() == 2
            && o.args.iter().all(|a| *a == ArgDescriptor::Plain(o.result));
        if o.attrs.assoc_comm && o.attrs.assoc {
            out.insert(diag(
                BadAttribute,
                o.line,
                format!("`{}` cannot be both assoc and assoc-comm", o.name),
            ));
        }
        if o.is_flattened() && !binary_closed {
            out.insert(diag(
                BadAttribute,
                o.line,
                format!(
                    "`{}`: associativity needs a binary constructor with both arguments of its result sort",
                    o.name
                ),
            ));
        }
        if let Some(u) = o.attrs.unit {
            if !o.is_flattened() {
                out.insert(diag(
                    BadAttribute,
                    o.line,
                    format!("`{}`: unit is only allowed alongside assoc or assoc-comm", o.name),
                ));
            }
            match p.ops.get(u.0 as usize) {
                Some(ud) if ud.is_nullary() && ud.result == o.result => {}
                Some(ud) => {
                    out.insert(diag(
                        BadAttribute,
                        o.line,
                        format!(
                            "`{}`: unit `{}` must be a nullary constructor of the same sort",
                            o.name, ud.name
                        ),
                    ));
                }
                None => {
                    out.insert(diag(UnknownConstructor, o.line, format!("`{}`: unknown unit", o.name)));
                }
            }
        }
    }
    if !out.is_empty() {
        // Patterns cannot be checked against a broken signature.
        return out.into_iter().collect();
    }

    for eq in &p.equations {
        let found = check_pattern_pair(p, &eq.lhs, &eq.rhs, eq.line, "equation", &mut out);
        if let Some((lhs_metas, rhs_metas)) = found {
            if lhs_metas.keys().ne(rhs_metas.keys()) {
                out.insert(diag(
                    MetavariableMismatch,
                    eq.line,
                    "equation sides must mention the same metavariables",
                ));
            }
            if pattern::pattern_size(&eq.rhs) >= pattern::pattern_size(&eq.lhs) {
                out.insert(diag(
                    NotCollapsing,
                    eq.line,
                    "equation right-hand side must be strictly smaller than its left-hand side",
                ));
            }
            if eq.lhs.contains_bag() || eq.rhs.contains_bag() {
                out.insert(diag(
                    BadPattern,
                    eq.line,
                    "collapse equations may not mention assoc-comm constructors",
                ));
            }
        }
    }
    for r in &p.rules {
        check_pattern_pair(p, &r.lhs, &r.rhs, r.line, &r.name, &mut out);
    }
    out.into_iter().collect()
}

type MetaMap = BTreeMap<String, MetaKind>;

fn check_pattern_pair(
    p: &Presentation,
    lhs: &Pattern,
    rhs: &Pattern,
    line: Line,
    what: &str,
    out: &mut BTreeSet<Diagnostic>,
) -> Option<(MetaMap, MetaMap)> {
    use DiagnosticKind::*;
    if matches!(lhs, Pattern::Meta { .. }) {
        out.insert(diag(BareMetavariableLhs, line, format!("{what}: left-hand side is a bare metavariable")));
        return None;
    }
    let mut problems = Vec::new();
    let ls = pattern::pattern_sort(p, lhs, &mut problems);
    let rs = pattern::pattern_sort(p, rhs, &mut problems);
    for m in problems {
        out.insert(diag(SortMismatch, line, format!("{what}: {m}")));
    }
    if let (Some(a), Some(b)) = (ls, rs) {
        if a != b {
            out.insert(diag(
                SortMismatch,
                line,
                format!("{what}: sides have sorts {} and {}", p.sort_name(a), p.sort_name(b)),
            ));
        }
    }
    let mut lhs_problems = Vec::new();
    pattern::check_lhs_shape(lhs, &mut lhs_problems);
    for m in lhs_problems {
        out.insert(diag(BadPattern, line, format!("{what}: {m}")));
    }
    let mut lm = MetaMap::new();
    let mut rm = MetaMap::new();
    let mut conflicts = Vec::new();
    lhs.collect_metas(&mut lm, &mut conflicts);
    rhs.collect_metas(&mut rm, &mut conflicts);
    for (name, kind) in &rm {
        match lm.get(name) {
            None => {
                out.insert(diag(
                    UnboundMetavariable,
                    line,
                    format!("{what}: `${name}` does not occur on the left-hand side"),
                ));
            }
            Some(k) if k != kind => conflicts.push(format!("`${name}` is used at two different kinds")),
            Some(_) => {}
        }
    }
    for c in conflicts {
        out.insert(diag(MetavariableMismatch, line, format!("{what}: {c}")));
    }
    Some((lm, rm))
}

// ---------------------------------------------------------------------------
// DSL parsing

struct RawOp<'a> {
    names: Vec<&'a str>,
    args: Vec<Vec<&'a str>>,
    result: &'a str,
    attrs: Vec<&'a str>,
    line: usize,
}

fn split_words(text: &str) -> Vec<&str> {
    // Commas are separators; `a,b` and `a , b` both split.
    let mut out = Vec::new();
    for w in text.split_whitespace() {
        let mut rest = w;
        while let Some(i) = rest.find(',') {
            if i > 0 {
                out.push(&rest[..i]);
            }
            out.push(",");
            rest = &rest[i + 1..];
        }
        if !rest.is_empty() {
            out.push(rest);
        }
    }
    out
}

fn parse_op_line(rest: &str, line: usize) -> Result<RawOp<'_>> {
    let words = split_words(rest);
    let colon = words
        .iter()
        .position(|w| *w == ":")
        .ok_or_else(|| Error::syntax(line, "expected `:` in op declaration"))?;
    let names: Vec<&str> = words[..colon].iter().copied().filter(|w| *w != ",").collect();
    if names.is_empty() {
        return Err(Error::syntax(line, "op declaration without a name"));
    }
    let arrow = words
        .iter()
        .position(|w| *w == "->" || *w == "→")
        .ok_or_else(|| Error::syntax(line, "expected `->` in op declaration"))?;
    if arrow < colon {
        return Err(Error::syntax(line, "`->` before `:`"));
    }
    let mut args = Vec::new();
    let mut current = Vec::new();
    for w in &words[colon + 1..arrow] {
        if *w == "," {
            if current.is_empty() {
                return Err(Error::syntax(line, "empty argument in op declaration"));
            }
            args.push(core::mem::take(&mut current));
        } else {
            current.push(*w);
        }
    }
    if !current.is_empty() {
        args.push(current);
    } else if !args.is_empty() {
        return Err(Error::syntax(line, "trailing comma in op declaration"));
    }
    let result = *words
        .get(arrow + 1)
        .ok_or_else(|| Error::syntax(line, "missing result sort"))?;
    let attrs = words[arrow + 2..].to_vec();
    Ok(RawOp { names, args, result, attrs, line })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses and validates a presentation from DSL source.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut p = Presentation::default();
    let mut raw_ops = Vec::new();
    let mut later: Vec<(usize, &str, &str)> = Vec::new();
    let mut logic_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = match content.find(char::is_whitespace) {
            Some(i) => (&content[..i], content[i..].trim()),
            None => (content, ""),
        };
        match kw {
            "sort" => {
                let names = split_words(rest);
                let names: Vec<_> = names.into_iter().filter(|w| *w != ",").collect();
                if names.is_empty() {
                    return Err(Error::syntax(line, "sort declaration without a name"));
                }
                for n in names {
                    p.sorts.push(Sort { name: n.to_string(), line: Line(line) });
                }
            }
            "op" => raw_ops.push(parse_op_line(rest, line)?),
            "eq" | "rule" => later.push((line, kw, rest)),
            "logic" => logic_lines.push((line, rest)),
            other => return Err(Error::syntax(line, format!("unknown declaration `{other}`"))),
        }
    }
    if p.sorts.is_empty() {
        return Err(Error::syntax(1, "a presentation needs at least one sort"));
    }

    let resolve_sort = |p: &Presentation, name: &str, line: usize| {
        p.sort_id(name).ok_or_else(|| Error::UnknownSort { line, name: name.to_string() })
    };

    // Constructors first, units afterwards so that `unit 0` may refer forward.
    let mut pending_units = Vec::new();
    for raw in &raw_ops {
        let result = resolve_sort(&p, raw.result, raw.line)?;
        let mut args = Vec::new();
        for a in &raw.args {
            args.push(parse_arg(&p, a, raw.line)?);
        }
        let mut attrs = Attributes::default();
        let mut unit = None;
        let mut i = 0;
        while i < raw.attrs.len() {
            match raw.attrs[i] {
                "assoc-comm" => attrs.assoc_comm = true,
                "assoc" => attrs.assoc = true,
                "unit" => {
                    let u = raw.attrs.get(i + 1).ok_or_else(|| Error::BadAttribute {
                        line: raw.line,
                        message: "`unit` needs a constructor name".into(),
                    })?;
                    unit = Some(*u);
                    i += 1;
                }
                other => {
                    return Err(Error::BadAttribute {
                        line: raw.line,
                        message: format!("unknown attribute `{other}`"),
                    })
                }
            }
            i += 1;
        }
        for name in &raw.names {
            if let Some(u) = unit {
                pending_units.push((p.ops.len(), u, raw.line));
            }
            p.ops.push(ConstructorDecl {
                name: name.to_string(),
                args: args.clone(),
                result,
                attrs: attrs.clone(),
                line: Line(raw.line),
            });
        }
    }
    for (idx, u, line) in pending_units {
        let id = p.op_id(u).ok_or_else(|| Error::BadAttribute {
            line,
            message: format!("unit `{u}` is not a declared constructor"),
        })?;
        p.ops[idx].attrs.unit = Some(id);
    }

    if logic_lines.is_empty() {
        p.logic_sorts = p.sort_ids().collect();
    }
    for (line, rest) in logic_lines {
        for w in split_words(rest) {
            if w == "," {
                continue;
            }
            let s = resolve_sort(&p, w, line)?;
            if !p.logic_sorts.contains(&s) {
                p.logic_sorts.push(s);
            }
        }
    }

    // Attribute problems must be reported before patterns are interpreted.
    let early = validate(&p);
    if !early.is_empty() {
        return Err(diagnostics_to_error(early));
    }

    for (line, kw, rest) in later {
        let items = sexpr::parse_all(rest, line)?;
        match kw {
            "eq" => {
                let [lhs, eq, rhs] = items.as_slice() else {
                    return Err(Error::syntax(line, "expected `eq <pattern> = <pattern>`"));
                };
                if eq.as_atom() != Some("=") {
                    return Err(Error::syntax(line, "expected `=` between equation sides"));
                }
                let (lhs, rhs) = pattern::parse_rule_sides(&p, lhs, rhs)?;
                p.equations.push(EquationSchema { lhs, rhs, line: Line(line) });
            }
            _ => {
                let [name, colon, lhs, arrow, rhs] = items.as_slice() else {
                    return Err(Error::syntax(line, "expected `rule <name> : <pattern> => <pattern>`"));
                };
                let name = name
                    .as_atom()
                    .ok_or_else(|| Error::syntax(line, "rule name must be an identifier"))?;
                if colon.as_atom() != Some(":") || arrow.as_atom() != Some("=>") {
                    return Err(Error::syntax(line, "expected `rule <name> : <pattern> => <pattern>`"));
                }
                let (lhs, rhs) = pattern::parse_rewrite_sides(&p, lhs, rhs)?;
                p.rules.push(RewriteRuleDecl { name: name.to_string(), lhs, rhs, line: Line(line) });
            }
        }
    }

    let diags = validate(&p);
    if !diags.is_empty() {
        return Err(diagnostics_to_error(diags));
    }
    Ok(p)
}

fn diagnostics_to_error(diags: Vec<Diagnostic>) -> Error {
    if let Some(d) = diags.iter().find(|d| d.kind == DiagnosticKind::BadAttribute) {
        return Error::BadAttribute { line: d.line, message: d.message.clone() };
    }
    Error::Invalid(diags)
}

fn parse_arg(p: &Presentation, words: &[&str], line: usize) -> Result<ArgDescriptor> {
    let sort = |name: &str| {
        p.sort_id(name).ok_or_else(|| Error::UnknownSort { line, name: name.to_string() })
    };
    match words {
        [single] => match single.strip_suffix('*') {
            Some(base) => Ok(ArgDescriptor::Variadic(sort(base)?)),
            None => Ok(ArgDescriptor::Plain(sort(single)?)),
        },
        ["bind", bound, ".", body] => {
            let (name, count) = if let Some(base) = bound.strip_suffix('*') {
                (base, BoundCount::Variadic)
            } else if let Some((base, n)) = bound.split_once('^') {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::syntax(line, format!("bad binder count in `{bound}`")))?;
                (base, BoundCount::Fixed(n))
            } else {
                (*bound, BoundCount::Fixed(1))
            };
            Ok(ArgDescriptor::Abstraction { bound: sort(name)?, count, body: sort(body)? })
        }
        _ => Err(Error::syntax(line, format!("cannot read argument `{}`", words.join(" ")))),
    }
}

// ---------------------------------------------------------------------------
// Pretty printing (inverse of `parse_presentation`)

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sorts {
            writeln!(f, "sort {}", s.name)?;
        }
        if self.logic_sorts.len() != self.sorts.len() {
            let names: Vec<_> = self.logic_sorts.iter().map(|&s| self.sort_name(s)).collect();
            writeln!(f, "logic {}", names.join(", "))?;
        }
        for o in &self.ops {
            write!(f, "op {} :", o.name)?;
            for (i, a) in o.args.iter().enumerate() {
                f.write_str(if i == 0 { " " } else { ", " })?;
                match *a {
                    ArgDescriptor::Plain(s) => write!(f, "{}", self.sort_name(s))?,
                    ArgDescriptor::Variadic(s) => write!(f, "{}*", self.sort_name(s))?,
                    ArgDescriptor::Abstraction { bound, count, body } => {
                        let b = self.sort_name(bound);
                        match count {
                            BoundCount::Variadic => write!(f, "bind {b}* . ")?,
                            BoundCount::Fixed(1) => write!(f, "bind {b} . ")?,
                            BoundCount::Fixed(n) => write!(f, "bind {b}^{n} . ")?,
                        }
                        write!(f, "{}", self.sort_name(body))?;
                    }
                }
            }
            write!(f, " -> {}", self.sort_name(o.result))?;
            if o.attrs.assoc_comm {
                f.write_str(" assoc-comm")?;
            }
            if o.attrs.assoc {
                f.write_str(" assoc")?;
            }
            if let Some(u) = o.attrs.unit {
                write!(f, " unit {}", self.op(u).name)?;
            }
            writeln!(f)?;
        }
        for e in &self.equations {
            writeln!(f, "eq {} = {}", e.lhs.display(self), e.rhs.display(self))?;
        }
        for r in &self.rules {
            writeln!(f, "rule {} : {} => {}", r.name, r.lhs.display(self), r.rhs.display(self))?;
        }
        Ok(())
    }
}

/// Metavariables of a pattern with their kinds. Exposed for tooling.
pub fn metavariables(pat: &Pattern) -> BTreeMap<String, MetaKind> {
    let mut m = BTreeMap::new();
    let mut conflicts = Vec::new();
    pat.collect_metas(&mut m, &mut conflicts);
    m
}
