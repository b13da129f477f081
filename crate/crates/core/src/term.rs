//! Terms over a presentation and their canonical forms modulo structural
//! congruence.
//!
//! Binders use de Bruijn indices: `Var { index, pos }` refers to the `pos`-th
//! name bound by the `index`-th enclosing abstraction (0 = innermost).

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::pattern;
use crate::sexpr;
use crate::signature::{ArgDescriptor, OpId, Presentation, SortId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A generator from the sort's generating set, or a fresh name.
    Atom { sort: SortId, name: String },
    Var { index: u32, pos: u32 },
    App { op: OpId, args: Vec<Term> },
    Abs { arity: u32, body: Box<Term> },
    /// Canonical form of an assoc-comm constructor: at least two items,
    /// sorted, none of them a unit or a bag of the same constructor.
    Bag { op: OpId, items: Vec<Term> },
    /// The arguments filling one variadic slot.
    Seq(Vec<Term>),
}

impl Term {
    pub fn atom(sort: SortId, name: impl Into<String>) -> Term {
        Term::Atom { sort, name: name.into() }
    }

    pub fn app(op: OpId, args: Vec<Term>) -> Term {
        Term::App { op, args }
    }

    pub fn constant(op: OpId) -> Term {
        Term::App { op, args: Vec::new() }
    }

    /// Head constructor, if any.
    pub fn head(&self) -> Option<OpId> {
        match self {
            Term::App { op, .. } | Term::Bag { op, .. } => Some(*op),
            _ => None,
        }
    }

    /// Node count: every atom, variable, application and abstraction counts
    /// one, a bag of `k` items counts as `k - 1` binary nodes and sequences are
    /// transparent.
    pub fn size(&self) -> usize {
        match self {
            Term::Atom { .. } | Term::Var { .. } => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Abs { body, .. } => 1 + body.size(),
            Term::Bag { items, .. } => {
                items.len().saturating_sub(1) + items.iter().map(Term::size).sum::<usize>()
            }
            Term::Seq(items) => items.iter().map(Term::size).sum(),
        }
    }

    /// True if some variable escapes `depth` enclosing binders.
    pub fn has_loose_vars(&self, depth: u32) -> bool {
        match self {
            Term::Var { index, .. } => *index >= depth,
            Term::Atom { .. } => false,
            Term::App { args: items, .. } | Term::Bag { items, .. } | Term::Seq(items) => {
                items.iter().any(|t| t.has_loose_vars(depth))
            }
            Term::Abs { body, .. } => body.has_loose_vars(depth + 1),
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.has_loose_vars(0)
    }

    /// Direct children in path order.
    pub fn children(&self) -> &[Term] {
        match self {
            Term::App { args: items, .. } | Term::Bag { items, .. } | Term::Seq(items) => items,
            Term::Abs { body, .. } => core::slice::from_ref(body),
            _ => &[],
        }
    }

    pub fn child_mut(&mut self, i: usize) -> Option<&mut Term> {
        match self {
            Term::App { args: items, .. } | Term::Bag { items, .. } | Term::Seq(items) => {
                items.get_mut(i)
            }
            Term::Abs { body, .. } if i == 0 => Some(body),
            _ => None,
        }
    }

    pub fn at_path(&self, path: &[u32]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            t = t.children().get(i as usize)?;
        }
        Some(t)
    }

    pub fn atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Atom { name, .. } => {
                out.insert(name.clone());
            }
            Term::Var { .. } => {}
            _ => self.children().iter().for_each(|c| c.atoms(out)),
        }
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> TermDisplay<'a> {
        TermDisplay { p, t: self }
    }
}

/// Sort of a term that is not a bare variable, abstraction or sequence.
pub fn sort_of(p: &Presentation, t: &Term) -> Option<SortId> {
    match t {
        Term::Atom { sort, .. } => Some(*sort),
        Term::App { op, .. } | Term::Bag { op, .. } => Some(p.op(*op).result),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Canonical forms

/// Puts a term into canonical form: assoc-comm constructors become sorted
/// bags without units, associative constructors become right-nested words
/// without units, and collapse equations are applied exhaustively.
pub fn canonicalize(p: &Presentation, t: &Term) -> Term {
    match t {
        Term::Atom { .. } | Term::Var { .. } => t.clone(),
        Term::Abs { arity, body } => {
            Term::Abs { arity: *arity, body: Box::new(canonicalize(p, body)) }
        }
        Term::Seq(items) => Term::Seq(items.iter().map(|i| canonicalize(p, i)).collect()),
        Term::Bag { op, items } => {
            let items: Vec<Term> = items.iter().map(|i| canonicalize(p, i)).collect();
            collapse(p, make_bag(p, *op, items))
        }
        Term::App { op, args } => {
            let args: Vec<Term> = args.iter().map(|a| canonicalize(p, a)).collect();
            let decl = p.op(*op);
            let t = if decl.attrs.assoc_comm {
                make_bag(p, *op, args)
            } else if decl.attrs.assoc {
                make_word(p, *op, args)
            } else {
                Term::App { op: *op, args }
            };
            collapse(p, t)
        }
    }
}

fn is_unit(p: &Presentation, op: OpId, t: &Term) -> bool {
    match (p.op(op).attrs.unit, t) {
        (Some(u), Term::App { op: o, args }) => *o == u && args.is_empty(),
        _ => false,
    }
}

/// Builds the canonical bag from canonical items.
pub fn make_bag(p: &Presentation, op: OpId, items: Vec<Term>) -> Term {
    let mut flat = Vec::with_capacity(items.len());
    for it in items {
        match it {
            Term::Bag { op: o, items: inner } if o == op => flat.extend(inner),
            ref u if is_unit(p, op, u) => {}
            other => flat.push(other),
        }
    }
    flat.sort();
    match flat.len() {
        0 => Term::constant(p.op(op).attrs.unit.expect("empty bag needs a unit")),
        1 => flat.pop().unwrap(),
        _ => Term::Bag { op, items: flat },
    }
}

/// Factors of a canonical term read as a word over the associative `op`.
pub fn word_items(p: &Presentation, op: OpId, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::App { op: o, args } if *o == op && args.len() == 2 => {
                out.push(args[0].clone());
                cur = &args[1];
            }
            u if is_unit(p, op, u) => break,
            other => {
                out.push(other.clone());
                break;
            }
        }
    }
    out
}

/// Items of a canonical term read as a bag over the assoc-comm `op`.
pub fn bag_items(p: &Presentation, op: OpId, t: &Term) -> Vec<Term> {
    match t {
        Term::Bag { op: o, items } if *o == op => items.clone(),
        u if is_unit(p, op, u) => Vec::new(),
        other => vec![other.clone()],
    }
}

/// Builds the canonical right-nested word from canonical factors.
pub fn make_word(p: &Presentation, op: OpId, items: Vec<Term>) -> Term {
    let mut flat = Vec::new();
    for it in items {
        flat.extend(word_items(p, op, &it));
    }
    let mut iter = flat.into_iter().rev();
    let Some(mut acc) = iter.next() else {
        return Term::constant(p.op(op).attrs.unit.expect("empty word needs a unit"));
    };
    for x in iter {
        acc = Term::App { op, args: vec![x, acc] };
    }
    acc
}

fn collapse(p: &Presentation, t: Term) -> Term {
    for eq in &p.equations {
        if let Some(theta) = pattern::match_pattern(p, &eq.lhs, &t).into_iter().next() {
            if let Ok(built) = pattern::build(p, &eq.rhs, &theta) {
                return canonicalize(p, &built);
            }
        }
    }
    t
}

/// Congruence up to alpha-equivalence.
pub fn equal(p: &Presentation, a: &Term, b: &Term) -> bool {
    canonicalize(p, a) == canonicalize(p, b)
}

// ---------------------------------------------------------------------------
// Decomposition

/// All argument tuples `args` with `c(args)` congruent to `t`. `t` must be
/// canonical. Assoc-comm constructors yield every ordered bipartition of the
/// bag, unit splits included.
pub fn decompose(p: &Presentation, t: &Term, c: OpId) -> Vec<Vec<Term>> {
    let decl = p.op(c);
    if sort_of(p, t) != Some(decl.result) {
        return Vec::new();
    }
    let mut out: BTreeSet<Vec<Term>> = BTreeSet::new();
    if decl.attrs.assoc_comm {
        // Split per distinct item by multiplicity, so repeated items do not
        // produce repeated splits.
        let mut groups: Vec<(Term, usize)> = Vec::new();
        for it in bag_items(p, c, t) {
            match groups.last_mut() {
                Some((g, k)) if *g == it => *k += 1,
                _ => groups.push((it, 1)),
            }
        }
        let mut take = vec![0usize; groups.len()];
        loop {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            for ((it, k), &m) in groups.iter().zip(&take) {
                l.extend(core::iter::repeat_n(it.clone(), m));
                r.extend(core::iter::repeat_n(it.clone(), k - m));
            }
            if decl.attrs.unit.is_some() || !(l.is_empty() || r.is_empty()) {
                out.insert(vec![make_bag(p, c, l), make_bag(p, c, r)]);
            }
            // Odometer over 0..=k for each group.
            let mut i = 0;
            while i < groups.len() && take[i] == groups[i].1 {
                take[i] = 0;
                i += 1;
            }
            if i == groups.len() {
                break;
            }
            take[i] += 1;
        }
    } else if decl.attrs.assoc {
        let items = word_items(p, c, t);
        for i in 0..=items.len() {
            if decl.attrs.unit.is_none() && (i == 0 || i == items.len()) {
                continue;
            }
            out.insert(vec![
                make_word(p, c, items[..i].to_vec()),
                make_word(p, c, items[i..].to_vec()),
            ]);
        }
    } else if let Term::App { op, args } = t {
        if *op == c {
            out.insert(args.clone());
        }
    }
    // Collapse equations whose left side is headed by `c` make further
    // tuples congruent to `t`.
    for eq in &p.equations {
        let pattern::Pattern::App { op, args: arg_pats } = &eq.lhs else { continue };
        if *op != c {
            continue;
        }
        for theta in pattern::match_pattern(p, &eq.rhs, t) {
            let built: Result<Vec<Term>> =
                arg_pats.iter().map(|a| pattern::build(p, a, &theta)).collect();
            if let Ok(args) = built {
                let args: Vec<Term> = args.iter().map(|a| canonicalize(p, a)).collect();
                if canonicalize(p, &Term::App { op: c, args: args.clone() }) == *t {
                    out.insert(args);
                }
            }
        }
    }
    out.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Binders

/// Adds `by` to every variable index at or above `cutoff`.
pub fn shift(t: &Term, by: u32, cutoff: u32) -> Term {
    if by == 0 {
        return t.clone();
    }
    match t {
        Term::Var { index, pos } if *index >= cutoff => Term::Var { index: index + by, pos: *pos },
        Term::Var { .. } | Term::Atom { .. } => t.clone(),
        Term::App { op, args } => {
            Term::App { op: *op, args: args.iter().map(|a| shift(a, by, cutoff)).collect() }
        }
        Term::Bag { op, items } => {
            Term::Bag { op: *op, items: items.iter().map(|a| shift(a, by, cutoff)).collect() }
        }
        Term::Seq(items) => Term::Seq(items.iter().map(|a| shift(a, by, cutoff)).collect()),
        Term::Abs { arity, body } => {
            Term::Abs { arity: *arity, body: Box::new(shift(body, by, cutoff + 1)) }
        }
    }
}

/// Replaces the variables bound at `depth` by `fillers` and lowers the
/// indices of variables bound further out.
fn subst_at(t: &Term, fillers: &[Term], depth: u32) -> Term {
    match t {
        Term::Var { index, pos } if *index == depth => shift(&fillers[*pos as usize], depth, 0),
        Term::Var { index, pos } if *index > depth => Term::Var { index: index - 1, pos: *pos },
        Term::Var { .. } | Term::Atom { .. } => t.clone(),
        Term::App { op, args } => {
            Term::App { op: *op, args: args.iter().map(|a| subst_at(a, fillers, depth)).collect() }
        }
        Term::Bag { op, items } => Term::Bag {
            op: *op,
            items: items.iter().map(|a| subst_at(a, fillers, depth)).collect(),
        },
        Term::Seq(items) => Term::Seq(items.iter().map(|a| subst_at(a, fillers, depth)).collect()),
        Term::Abs { arity, body } => {
            Term::Abs { arity: *arity, body: Box::new(subst_at(body, fillers, depth + 1)) }
        }
    }
}

/// Applies an abstraction to fillers, one per bound name, and canonicalizes.
pub fn instantiate(p: &Presentation, abs: &Term, fillers: &[Term]) -> Result<Term> {
    let Term::Abs { arity, body } = abs else {
        return Err(Error::arity(0, "only abstractions can be instantiated"));
    };
    if *arity as usize != fillers.len() {
        return Err(Error::arity(
            0,
            format!("abstraction binds {arity} names but {} were supplied", fillers.len()),
        ));
    }
    Ok(canonicalize(p, &subst_at(body, fillers, 0)))
}

/// The first name of the form `%k` that does not occur in `t`.
pub fn fresh_atom_name(t: &Term) -> String {
    let mut used = BTreeSet::new();
    t.atoms(&mut used);
    (0..).map(|k| format!("%{k}")).find(|n| !used.contains(n)).unwrap()
}

/// Closed subterms of `t` (including `t`), without duplicates.
pub fn closed_subterms(t: &Term) -> BTreeSet<Term> {
    fn go(t: &Term, depth: u32, out: &mut BTreeSet<Term>) {
        if matches!(t, Term::Atom { .. } | Term::App { .. } | Term::Bag { .. }) && !t.has_loose_vars(0) {
            out.insert(t.clone());
        }
        let d = if matches!(t, Term::Abs { .. }) { depth + 1 } else { depth };
        for c in t.children() {
            go(c, d, out);
        }
    }
    let mut out = BTreeSet::new();
    go(t, 0, &mut out);
    out
}

/// Names used to instantiate binders when checking binder-formulae against
/// an abstraction occurring in `t`: one fresh atom, every closed subterm of
/// `t` of the bound sort, and every unary constructor into the bound sort
/// applied to a closed subterm of `t`.
pub fn instantiation_candidates(p: &Presentation, t: &Term, bound: SortId) -> Vec<Term> {
    let mut out = BTreeSet::new();
    out.insert(Term::atom(bound, fresh_atom_name(t)));
    let subs = closed_subterms(t);
    for s in &subs {
        let Some(ss) = sort_of(p, s) else { continue };
        if ss == bound {
            out.insert(s.clone());
        }
        for q in p.ops_of_sort(bound) {
            let d = p.op(q);
            if d.args == [ArgDescriptor::Plain(ss)] {
                out.insert(canonicalize(p, &Term::App { op: q, args: vec![s.clone()] }));
            }
        }
    }
    out.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Concrete syntax

/// Parses a term, inferring its sort where the syntax determines it.
pub fn parse_term(p: &Presentation, text: &str) -> Result<Term> {
    let sx = sexpr::parse_one(text, 1)?;
    pattern::read_ground(p, &sx, None)
}

/// Parses a term that must have sort `sort`.
pub fn parse_term_as(p: &Presentation, sort: SortId, text: &str) -> Result<Term> {
    let sx = sexpr::parse_one(text, 1)?;
    pattern::read_ground(p, &sx, Some(sort))
}

pub struct TermDisplay<'a> {
    p: &'a Presentation,
    t: &'a Term,
}

struct Printer<'a> {
    p: &'a Presentation,
    taken: BTreeSet<String>,
    scopes: Vec<Vec<String>>,
}

impl Printer<'_> {
    fn binder_name(&self, pos: u32, arity: u32) -> String {
        let depth = self.scopes.len();
        let mut name = if arity == 1 { format!("v{depth}") } else { format!("v{depth}_{pos}") };
        while self.taken.contains(&name) || self.p.op_id(&name).is_some() {
            name.push('\'');
        }
        name
    }

    fn write(&mut self, f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
        match t {
            Term::Atom { name, .. } => f.write_str(name),
            Term::Var { index, pos } => {
                let depth = self.scopes.len();
                match (*index as usize) < depth {
                    true => {
                        let scope = &self.scopes[depth - 1 - *index as usize];
                        f.write_str(scope.get(*pos as usize).map(String::as_str).unwrap_or("?"))
                    }
                    false => write!(f, "#{index}.{pos}"),
                }
            }
            Term::Abs { arity, body } => {
                let names: Vec<String> = (0..*arity).map(|i| self.binder_name(i, *arity)).collect();
                f.write_str("(\\")?;
                for n in &names {
                    write!(f, " {n}")?;
                }
                f.write_str(" ")?;
                self.scopes.push(names);
                let r = self.write(f, body);
                self.scopes.pop();
                r?;
                f.write_str(")")
            }
            Term::Seq(items) => {
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    self.write(f, it)?;
                }
                Ok(())
            }
            Term::Bag { op, items } => {
                write!(f, "({}", self.p.op(*op).name)?;
                for it in items {
                    f.write_str(" ")?;
                    self.write(f, it)?;
                }
                f.write_str(")")
            }
            Term::App { op, args } => {
                let decl = self.p.op(*op);
                if args.is_empty() {
                    return f.write_str(&decl.name);
                }
                if Some(*op) == self.p.application_op() {
                    f.write_str("(")?;
                    self.write(f, &args[0])?;
                    f.write_str(" ")?;
                    self.write(f, &args[1])?;
                    return f.write_str(")");
                }
                if decl.attrs.assoc {
                    write!(f, "({}", decl.name)?;
                    for it in word_items(self.p, *op, t) {
                        f.write_str(" ")?;
                        self.write(f, &it)?;
                    }
                    return f.write_str(")");
                }
                write!(f, "({}", decl.name)?;
                for a in args {
                    if matches!(a, Term::Seq(items) if items.is_empty()) {
                        continue;
                    }
                    f.write_str(" ")?;
                    self.write(f, a)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut taken = BTreeSet::new();
        self.t.atoms(&mut taken);
        let mut printer = Printer { p: self.p, taken, scopes: Vec::new() };
        printer.write(f, self.t)
    }
}

/// Renders a term in its concrete syntax.
pub fn show(p: &Presentation, t: &Term) -> String {
    t.display(p).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;

    fn parse(p: &Presentation, s: &str) -> Term {
        parse_term(p, s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn mon_words_are_right_nested() {
        let p = builtin("mon").unwrap();
        let t = parse(&p, "(· (· a b) c)");
        let u = parse(&p, "(· a (· b c))");
        assert_eq!(t, u);
        assert_eq!(show(&p, &t), "(· a b c)");
        assert_eq!(t.size(), 5);
        assert_eq!(parse(&p, "(· e a e)"), parse(&p, "a"));
    }

    #[test]
    fn ski_juxtaposition_builds_applications() {
        let p = builtin("ski").unwrap();
        let t = parse(&p, "((K I) x)");
        assert_eq!(t.size(), 5);
        assert_eq!(show(&p, &t), "((K I) x)");
        assert_eq!(parse(&p, "(K I x)"), t);
        assert_eq!(canonicalize(&p, &t), t);
    }

    #[test]
    fn rhopi_units_drop_and_bags_flatten() {
        let p = builtin("rhopi").unwrap();
        let comm = parse(&p, "comm");
        assert_eq!(parse(&p, "(| 0 comm)"), comm);
        let t = parse(&p, "(| (| (send a) (recv b (\\ y 0))) comm)");
        match &t {
            Term::Bag { items, .. } => assert_eq!(items.len(), 3),
            other => panic!("{other:?}"),
        }
        assert!(equal(&p, &parse(&p, "(| comm (send a))"), &parse(&p, "(| (send a) comm)")));
    }

    #[test]
    fn deref_of_quote_collapses() {
        let p = builtin("rhopi").unwrap();
        let t = parse(&p, "(| (* (quote (send a))) comm)");
        assert_eq!(t, parse(&p, "(| (send a) comm)"));
        let nested = parse(&p, "(* (quote (* (quote comm))))");
        assert_eq!(nested, parse(&p, "comm"));
    }

    #[test]
    fn alpha_equivalent_abstractions_are_equal() {
        let p = builtin("rhopi").unwrap();
        let a = parse(&p, "(recv x (\\ y (send x (* y))))");
        let b = parse(&p, "(recv x (\\ z (send x (* z))))");
        assert_eq!(a, b);
        assert!(!equal(&p, &parse(&builtin("ski").unwrap(), "(K I)"), &parse(&builtin("ski").unwrap(), "(I K)")));
    }

    #[test]
    fn decompose_mon_word() {
        let p = builtin("mon").unwrap();
        let dot = p.op_id("·").unwrap();
        let t = parse(&p, "(· a b)");
        let got: BTreeSet<_> = decompose(&p, &t, dot).into_iter().collect();
        let want: BTreeSet<_> = [("e", "(· a b)"), ("a", "b"), ("(· a b)", "e")]
            .iter()
            .map(|(l, r)| vec![parse(&p, l), parse(&p, r)])
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn decompose_rhopi_pair_bag() {
        let p = builtin("rhopi").unwrap();
        let par = p.op_id("|").unwrap();
        let t = parse(&p, "(| comm (send a))");
        let d = decompose(&p, &t, par);
        assert_eq!(d.len(), 4);
        for args in d {
            assert_eq!(canonicalize(&p, &Term::app(par, args)), t);
        }
    }

    #[test]
    fn decompose_free_constructor_is_unique() {
        let p = builtin("ski").unwrap();
        let app = p.op_id("app").unwrap();
        let t = parse(&p, "(K I)");
        assert_eq!(decompose(&p, &t, app), vec![vec![parse(&p, "K"), parse(&p, "I")]]);
    }

    #[test]
    fn decompose_through_collapse_equation() {
        let p = builtin("rhopi").unwrap();
        let deref = p.op_id("*").unwrap();
        let t = parse(&p, "comm");
        let d = decompose(&p, &t, deref);
        assert_eq!(d, vec![vec![parse(&p, "(quote comm)")]]);
    }

    #[test]
    fn instantiate_substitutes_and_collapses() {
        let p = builtin("rhopi").unwrap();
        let Term::App { args, .. } = parse(&p, "(recv x (\\ y (send x (* y))))") else { panic!() };
        let arg = parse_term_as(&p, p.sort_id("N").unwrap(), "(quote comm)").unwrap();
        let got = instantiate(&p, &args[1], &[arg]).unwrap();
        assert_eq!(got, parse(&p, "(send x comm)"));
        let Term::App { args, .. } = parse(&p, "(recv x (\\ y 0))") else { panic!() };
        let n = Term::atom(p.sort_id("N").unwrap(), "q");
        assert_eq!(instantiate(&p, &args[1], core::slice::from_ref(&n)).unwrap(), parse(&p, "0"));
        assert!(instantiate(&p, &args[1], &[n.clone(), n]).is_err());
    }

    #[test]
    fn instantiate_two_binders() {
        let p = builtin("rhopi").unwrap();
        let Term::App { args, .. } = parse(&p, "(recv x (\\ y z (send y (* z))))") else { panic!() };
        let n = p.sort_id("N").unwrap();
        let got = instantiate(&p, &args[1], &[Term::atom(n, "a"), Term::atom(n, "b")]).unwrap();
        assert_eq!(got, parse(&p, "(send a (* b))"));
    }

    #[test]
    fn substitution_under_inner_binder_shifts() {
        let p = builtin("rhopi").unwrap();
        // The outer bound name is used under an inner binder.
        let t = parse(&p, "(recv x (\\ y (recv y (\\ z (send y (* z))))))");
        let Term::App { args, .. } = &t else { panic!() };
        let n = p.sort_id("N").unwrap();
        let got = instantiate(&p, &args[1], &[Term::atom(n, "c")]).unwrap();
        assert_eq!(got, parse(&p, "(recv c (\\ z (send c (* z))))"));
    }

    #[test]
    fn printing_round_trips() {
        for (name, src) in [
            ("rhopi", "(| comm (recv x (\\ y (| (send x (* y)) (* y)))))"),
            ("rhopi", "(recv v0 (\\ y z (send y (* z))))"),
            ("ski", "(((S K) K) I)"),
            ("mon", "(· a b a)"),
            ("mon-tree", "(· (· e a) (· b e))"),
        ] {
            let p = builtin(name).unwrap();
            let t = parse(&p, src);
            let again = parse(&p, &show(&p, &t));
            assert_eq!(t, again, "{name}: {src}");
        }
    }

    #[test]
    fn candidates_include_fresh_atom_and_quotes() {
        let p = builtin("rhopi").unwrap();
        let n = p.sort_id("N").unwrap();
        let t = parse(&p, "(recv x (\\ y 0))");
        let c = instantiation_candidates(&p, &t, n);
        assert!(c.contains(&Term::atom(n, "%0")));
        assert!(c.contains(&Term::atom(n, "x")));
        assert!(c.contains(&parse_term_as(&p, n, "(quote (recv x (\\ y 0)))").unwrap()));
    }

    #[test]
    fn sort_errors_are_reported() {
        let p = builtin("rhopi").unwrap();
        assert!(parse_term(&p, "(| (quote 0) 0)").is_err());
        assert!(parse_term(&p, "(send 0)").is_err());
    }
}
