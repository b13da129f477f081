//! Bounded enumeration of canonical terms.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::signature::{ArgDescriptor, BoundCount, Presentation, SortId};
use crate::term::{canonicalize, Term};

/// Generator atoms per sort, plus the shape parameters for binders and
/// variadic argument lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub atoms: BTreeMap<SortId, Vec<String>>,
    /// Number of names bound by abstractions of variadic binder count.
    pub binder_arity: u32,
    /// Longest variadic argument list produced.
    pub max_list: usize,
}

impl Default for GeneratorSet {
    fn default() -> Self {
        GeneratorSet { atoms: BTreeMap::new(), binder_arity: 1, max_list: 2 }
    }
}

impl GeneratorSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds atoms to a sort, ignoring duplicates.
    pub fn with<I, S>(mut self, sort: SortId, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let list = self.atoms.entry(sort).or_default();
        for n in names {
            let n = n.into();
            if !list.contains(&n) {
                list.push(n);
            }
        }
        self
    }

    pub fn atoms_of(&self, sort: SortId) -> &[String] {
        self.atoms.get(&sort).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn atom_terms(&self) -> Vec<Term> {
        self.atoms
            .iter()
            .flat_map(|(s, names)| names.iter().map(move |n| Term::atom(*s, n.to_string())))
            .collect()
    }
}

type Scope = Vec<(SortId, u32)>;

struct Enumerator<'a> {
    p: &'a Presentation,
    gens: &'a GeneratorSet,
    memo: BTreeMap<(SortId, usize, Scope), Vec<Term>>,
}

impl Enumerator<'_> {
    /// Canonical terms of exactly `size` nodes whose free variables come
    /// from `scope` (innermost binder last).
    fn exact(&mut self, sort: SortId, size: usize, scope: &Scope) -> Vec<Term> {
        let key = (sort, size, scope.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut found = BTreeSet::new();
        if size == 1 {
            for name in self.gens.atoms_of(sort) {
                found.insert(Term::atom(sort, name.clone()));
            }
            for (depth, (bound, arity)) in scope.iter().rev().enumerate() {
                if *bound == sort {
                    for pos in 0..*arity {
                        found.insert(Term::Var { index: depth as u32, pos });
                    }
                }
            }
        }
        let p = self.p;
        for op in p.ops_of_sort(sort) {
            let decl = p.op(op);
            if size == 0 {
                break;
            }
            for args in self.arg_tuples(&decl.args, size - 1, scope) {
                let t = canonicalize(p, &Term::App { op, args });
                if t.size() == size {
                    found.insert(t);
                }
            }
        }
        let out: Vec<Term> = found.into_iter().collect();
        self.memo.insert(key, out.clone());
        out
    }

    /// Argument tuples for `descs` whose sizes add up to `total`.
    fn arg_tuples(&mut self, descs: &[ArgDescriptor], total: usize, scope: &Scope) -> Vec<Vec<Term>> {
        let Some((first, more)) = descs.split_first() else {
            return if total == 0 { vec![Vec::new()] } else { Vec::new() };
        };
        let mut out = Vec::new();
        for k in 0..=total {
            let heads = self.arg(*first, k, scope);
            if heads.is_empty() {
                continue;
            }
            let tails = self.arg_tuples(more, total - k, scope);
            for h in &heads {
                for tl in &tails {
                    let mut v = Vec::with_capacity(descs.len());
                    v.push(h.clone());
                    v.extend(tl.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }

    fn arg(&mut self, desc: ArgDescriptor, size: usize, scope: &Scope) -> Vec<Term> {
        match desc {
            ArgDescriptor::Plain(s) => self.exact(s, size, scope),
            ArgDescriptor::Abstraction { bound, count, body } => {
                if size < 2 {
                    return Vec::new();
                }
                let arity = match count {
                    BoundCount::Fixed(n) => n,
                    BoundCount::Variadic => self.gens.binder_arity,
                };
                let mut inner = scope.clone();
                inner.push((bound, arity));
                self.exact(body, size - 1, &inner)
                    .into_iter()
                    .map(|b| Term::Abs { arity, body: Box::new(b) })
                    .collect()
            }
            ArgDescriptor::Variadic(s) => {
                let mut out = Vec::new();
                for len in 0..=self.gens.max_list {
                    for items in self.lists(s, len, size, scope) {
                        out.push(Term::Seq(items));
                    }
                }
                out
            }
        }
    }

    fn lists(&mut self, sort: SortId, len: usize, total: usize, scope: &Scope) -> Vec<Vec<Term>> {
        if len == 0 {
            return if total == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for k in 1..=total {
            let heads = self.exact(sort, k, scope);
            if heads.is_empty() {
                continue;
            }
            let tails = self.lists(sort, len - 1, total - k, scope);
            for h in &heads {
                for tl in &tails {
                    let mut v = vec![h.clone()];
                    v.extend(tl.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Every closed canonical term of `sort` with at most `max_size` nodes, each
/// once, ordered by size and then by the term order.
pub fn enumerate_terms(p: &Presentation, sort: SortId, gens: &GeneratorSet, max_size: usize) -> Vec<Term> {
    let mut e = Enumerator { p, gens, memo: BTreeMap::new() };
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(e.exact(sort, n, &Vec::new()));
    }
    out
}
