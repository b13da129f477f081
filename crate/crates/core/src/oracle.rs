//! Brute-force denotations over a finite universe of terms, and comparison
//! against the checker.
//!
//! Denotations are computed eagerly as sets: connectives are set operations
//! relative to the universe, lifted constructors are images of argument
//! denotations (or, for binder constructors, filters over the universe),
//! modalities explore the whole reachable set, and fixed points are found by
//! downward iteration from the full universe.
//!
//! Every term the evaluation needs but the universe lacks (rewrite states,
//! binder instantiations) is recorded; [`Oracle::denote`] adds those terms
//! and re-evaluates until nothing is missing or the universe cap is hit.
//! Whatever stays out of view is reported as uncertain rather than guessed.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::budget::Budget;
use crate::checker::{Checker, Verdict};
use crate::enumerate::{enumerate_terms, GeneratorSet};
use crate::formula::{Formula, FormulaArg};
use crate::pattern::Context;
use crate::rewrite::step;
use crate::signature::{OpId, Presentation, SortId};
use crate::term::{canonicalize, decompose, instantiate, instantiation_candidates, show, sort_of, Term};

/// A finite set of canonical terms per sort, closed under decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    terms: BTreeMap<SortId, BTreeSet<Term>>,
    base: BTreeMap<SortId, BTreeSet<Term>>,
    pub gens: GeneratorSet,
    pub max_size: usize,
    pub cap: usize,
    /// Set once the cap stopped the universe from growing.
    pub capped: bool,
}

impl Universe {
    /// All canonical terms up to `max_size` over `gens`, closed under
    /// decomposition.
    pub fn build(p: &Presentation, gens: &GeneratorSet, max_size: usize) -> Universe {
        let mut u = Universe {
            terms: BTreeMap::new(),
            base: BTreeMap::new(),
            gens: gens.clone(),
            max_size,
            cap: 40_000,
            capped: false,
        };
        let mut seed = Vec::new();
        for s in p.sort_ids() {
            let ts = enumerate_terms(p, s, gens, max_size);
            u.base.insert(s, ts.iter().cloned().collect());
            seed.extend(ts);
        }
        u.add(p, seed);
        u
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Enumerated terms of a sort (those within `max_size`).
    pub fn base(&self, s: SortId) -> impl Iterator<Item = &Term> {
        self.base.get(&s).into_iter().flatten()
    }

    pub fn of(&self, s: SortId) -> &BTreeSet<Term> {
        static EMPTY: BTreeSet<Term> = BTreeSet::new();
        self.terms.get(&s).unwrap_or(&EMPTY)
    }

    pub fn contains(&self, s: SortId, t: &Term) -> bool {
        self.of(s).contains(t)
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds terms and every argument of every decomposition, transitively.
    /// Returns false if the cap was reached.
    pub fn add(&mut self, p: &Presentation, terms: impl IntoIterator<Item = Term>) -> bool {
        let mut work: Vec<Term> = terms.into_iter().collect();
        while let Some(t) = work.pop() {
            let Some(s) = sort_of(p, &t) else { continue };
            if self.contains(s, &t) {
                continue;
            }
            if self.len() >= self.cap {
                self.capped = true;
                return false;
            }
            self.terms.entry(s).or_default().insert(t.clone());
            for c in p.ops_of_sort(s) {
                for tuple in decompose(p, &t, c) {
                    for a in tuple {
                        match a {
                            Term::Seq(items) => work.extend(items),
                            Term::Abs { .. } => {}
                            other => work.push(other),
                        }
                    }
                }
            }
        }
        true
    }
}

/// A three-valued subset of one sort of the universe: members, terms whose
/// membership could not be settled, and (implicitly) non-members.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Membership {
    pub yes: BTreeSet<Term>,
    pub maybe: BTreeSet<Term>,
}

impl Membership {
    pub fn status(&self, t: &Term) -> OracleStatus {
        if self.yes.contains(t) {
            OracleStatus::Member
        } else if self.maybe.contains(t) {
            OracleStatus::Uncertain
        } else {
            OracleStatus::NonMember
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OracleStatus {
    Member,
    NonMember,
    Uncertain,
}

impl OracleStatus {
    pub fn label(self) -> &'static str {
        match self {
            OracleStatus::Member => "member",
            OracleStatus::NonMember => "non-member",
            OracleStatus::Uncertain => "uncertain",
        }
    }
}

struct Eval<'a> {
    p: &'a Presentation,
    u: &'a Universe,
    budget: Budget,
    missing: BTreeSet<Term>,
    fix: BTreeMap<String, Membership>,
    names: Vec<Vec<Term>>,
    closed_cache: BTreeMap<usize, Membership>,
    open_cache: BTreeMap<(usize, Vec<Vec<Term>>), Membership>,
    explored: BTreeMap<Term, (BTreeSet<Term>, bool)>,
}

/// Which of the environments a formula's denotation depends on.
fn dependencies(f: &Formula) -> (bool, bool) {
    fn names(f: &Formula, depth: u32) -> bool {
        match f {
            Formula::Name { index, .. } => *index >= depth,
            Formula::And(a, b) | Formula::Or(a, b) => names(a, depth) || names(b, depth),
            Formula::Not(a) | Formula::Mu { body: a, .. } => names(a, depth),
            Formula::Modal { u, v, .. } => names(u, depth) || names(v, depth),
            Formula::Lifted { args, .. } => args.iter().any(|a| match a {
                FormulaArg::Plain(x) => names(x, depth),
                FormulaArg::List(xs) => xs.iter().any(|x| names(x, depth)),
                FormulaArg::Binder { body, .. } => names(body, depth + 1),
            }),
            _ => false,
        }
    }
    (!f.free_vars().is_empty(), names(f, 0))
}

impl Eval<'_> {
    fn all(&self, s: SortId) -> &BTreeSet<Term> {
        self.u.of(s)
    }

    fn den(&mut self, f: &Formula) -> Membership {
        let key = f as *const Formula as usize;
        let (vars, names) = dependencies(f);
        if !vars && !names {
            if let Some(m) = self.closed_cache.get(&key) {
                return m.clone();
            }
        }
        let nkey = (key, if names { self.names.clone() } else { Vec::new() });
        if vars || names {
            if let Some(m) = self.open_cache.get(&nkey) {
                return m.clone();
            }
        }
        let m = self.den_node(f);
        if !vars && !names {
            self.closed_cache.insert(key, m.clone());
        } else {
            self.open_cache.insert(nkey, m.clone());
        }
        m
    }

    fn den_node(&mut self, f: &Formula) -> Membership {
        let s = f.sort();
        match f {
            Formula::Top(_) => Membership { yes: self.all(s).clone(), maybe: BTreeSet::new() },
            Formula::Bot(_) => Membership::default(),
            Formula::Or(a, b) => {
                let (x, y) = (self.den(a), self.den(b));
                let yes: BTreeSet<Term> = x.yes.union(&y.yes).cloned().collect();
                let maybe = x.maybe.union(&y.maybe).filter(|t| !yes.contains(*t)).cloned().collect();
                Membership { yes, maybe }
            }
            Formula::And(a, b) => {
                let (x, y) = (self.den(a), self.den(b));
                let yes: BTreeSet<Term> = x.yes.intersection(&y.yes).cloned().collect();
                let maybe = self
                    .all(s)
                    .iter()
                    .filter(|t| {
                        !yes.contains(*t)
                            && (x.yes.contains(*t) || x.maybe.contains(*t))
                            && (y.yes.contains(*t) || y.maybe.contains(*t))
                    })
                    .cloned()
                    .collect();
                Membership { yes, maybe }
            }
            Formula::Not(a) => {
                let x = self.den(a);
                let yes = self
                    .all(s)
                    .iter()
                    .filter(|t| !x.yes.contains(*t) && !x.maybe.contains(*t))
                    .cloned()
                    .collect();
                Membership { yes, maybe: x.maybe }
            }
            Formula::AtomLit { sort, name } => {
                let t = Term::atom(*sort, name.clone());
                self.singleton(s, t)
            }
            Formula::Name { index, pos, .. } => {
                let depth = self.names.len();
                let t = self.names.get(depth.wrapping_sub(1 + *index as usize)).and_then(|v| v.get(*pos as usize)).cloned();
                match t {
                    Some(t) => self.singleton(s, t),
                    None => Membership::default(),
                }
            }
            Formula::Var { name, .. } => self.fix.get(name).cloned().unwrap_or_default(),
            Formula::Mu { var, body, .. } => self.gfp(var, body, s),
            Formula::Lifted { op, args, .. } => self.lifted(*op, args, s),
            Formula::Modal { u, ctx, v, .. } => self.modal(u, ctx, v, s),
        }
    }

    fn singleton(&self, s: SortId, t: Term) -> Membership {
        let mut m = Membership::default();
        if self.u.contains(s, &t) {
            m.yes.insert(t);
        }
        m
    }

    fn gfp(&mut self, var: &str, body: &Formula, s: SortId) -> Membership {
        let saved = self.fix.remove(var);
        let mut cur = Membership { yes: self.all(s).clone(), maybe: BTreeSet::new() };
        let limit = 2 * self.all(s).len() + 4;
        let mut settled = false;
        for _ in 0..limit {
            self.fix.insert(var.to_string(), cur.clone());
            self.open_cache.clear();
            let next = self.den(body);
            if next == cur {
                settled = true;
                break;
            }
            cur = next;
        }
        if !settled {
            // Unsettled members become uncertain.
            let yes = core::mem::take(&mut cur.yes);
            cur.maybe.extend(yes);
        }
        self.fix.remove(var);
        if let Some(m) = saved {
            self.fix.insert(var.to_string(), m);
        }
        self.open_cache.clear();
        cur
    }

    fn lifted(&mut self, op: OpId, args: &[FormulaArg], s: SortId) -> Membership {
        let has_binder = args.iter().any(|a| matches!(a, FormulaArg::Binder { .. }));
        if !has_binder {
            let mut dens: Vec<Vec<Membership>> = Vec::new();
            let mut product: usize = 1;
            for a in args {
                let ds = match a {
                    FormulaArg::Plain(x) => alloc::vec![self.den(x)],
                    FormulaArg::List(xs) => xs.iter().map(|x| self.den(x)).collect(),
                    FormulaArg::Binder { .. } => unreachable!(),
                };
                for d in &ds {
                    product = product.saturating_mul(d.yes.len() + d.maybe.len());
                }
                dens.push(ds);
            }
            if product <= 200_000 {
                return self.image(op, args, &dens, s);
            }
        }
        self.filter(op, args, s)
    }

    /// `{ c(x1..xn) | xi ∈ ⟦Ai⟧ } ∩ U`.
    fn image(&mut self, op: OpId, args: &[FormulaArg], dens: &[Vec<Membership>], s: SortId) -> Membership {
        // Flatten argument slots: each slot is a list of (term, definite).
        let mut slots: Vec<Vec<(Term, bool)>> = Vec::new();
        for ds in dens {
            for d in ds {
                let mut v: Vec<(Term, bool)> = d.yes.iter().map(|t| (t.clone(), true)).collect();
                v.extend(d.maybe.iter().map(|t| (t.clone(), false)));
                slots.push(v);
            }
        }
        let mut m = Membership::default();
        let mut idx = alloc::vec![0usize; slots.len()];
        if slots.iter().any(Vec::is_empty) {
            return m;
        }
        loop {
            let mut flat = Vec::with_capacity(slots.len());
            let mut definite = true;
            for (k, i) in idx.iter().enumerate() {
                let (t, d) = &slots[k][*i];
                flat.push(t.clone());
                definite &= *d;
            }
            let mut built = Vec::with_capacity(args.len());
            let mut it = flat.into_iter();
            for (a, ds) in args.iter().zip(dens) {
                match a {
                    FormulaArg::Plain(_) => built.push(it.next().unwrap()),
                    _ => built.push(Term::Seq(it.by_ref().take(ds.len()).collect())),
                }
            }
            let t = canonicalize(self.p, &Term::App { op, args: built });
            if self.u.contains(s, &t) {
                if definite {
                    m.maybe.remove(&t);
                    m.yes.insert(t);
                } else if !m.yes.contains(&t) {
                    m.maybe.insert(t);
                }
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return m;
                }
                idx[k] += 1;
                if idx[k] < slots[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn status_in(&mut self, m: &Membership, t: &Term) -> OracleStatus {
        if m.yes.contains(t) {
            return OracleStatus::Member;
        }
        if m.maybe.contains(t) {
            return OracleStatus::Uncertain;
        }
        match sort_of(self.p, t) {
            Some(s) if self.u.contains(s, t) => OracleStatus::NonMember,
            _ => {
                self.missing.insert(t.clone());
                OracleStatus::Uncertain
            }
        }
    }

    /// `{ t ∈ U | some decomposition of t fits the arguments }`.
    fn filter(&mut self, op: OpId, args: &[FormulaArg], s: SortId) -> Membership {
        let plain: Vec<Option<Membership>> = args
            .iter()
            .map(|a| match a {
                FormulaArg::Plain(x) => Some(self.den(x)),
                _ => None,
            })
            .collect();
        let lists: Vec<Option<Vec<Membership>>> = args
            .iter()
            .map(|a| match a {
                FormulaArg::List(xs) => Some(xs.iter().map(|x| self.den(x)).collect()),
                _ => None,
            })
            .collect();
        let mut m = Membership::default();
        let terms: Vec<Term> = self.all(s).iter().cloned().collect();
        for t in terms {
            let mut best = OracleStatus::NonMember;
            for tuple in decompose(self.p, &t, op) {
                if tuple.len() != args.len() {
                    continue;
                }
                let mut acc = OracleStatus::Member;
                for (i, (a, x)) in args.iter().zip(&tuple).enumerate() {
                    let st = match (a, x) {
                        (FormulaArg::Plain(_), _) => {
                            let d = plain[i].clone().unwrap();
                            self.status_in(&d, x)
                        }
                        (FormulaArg::List(_), Term::Seq(items)) => {
                            let ds = lists[i].clone().unwrap();
                            if ds.len() != items.len() {
                                OracleStatus::NonMember
                            } else {
                                let mut inner = OracleStatus::Member;
                                for (d, y) in ds.iter().zip(items) {
                                    inner = and3(inner, self.status_in(d, y));
                                }
                                inner
                            }
                        }
                        (FormulaArg::Binder { arity: None, .. }, Term::Abs { .. }) => OracleStatus::Member,
                        (FormulaArg::Binder { arity: Some(n), bound, body, .. }, Term::Abs { arity, .. }) if n == arity => {
                            self.binder(&t, x, *n, *bound, body)
                        }
                        _ => OracleStatus::NonMember,
                    };
                    acc = and3(acc, st);
                    if acc == OracleStatus::NonMember {
                        break;
                    }
                }
                best = or3(best, acc);
                if best == OracleStatus::Member {
                    break;
                }
            }
            match best {
                OracleStatus::Member => {
                    m.yes.insert(t);
                }
                OracleStatus::Uncertain => {
                    m.maybe.insert(t);
                }
                OracleStatus::NonMember => {}
            }
        }
        m
    }

    fn binder(&mut self, whole: &Term, abs: &Term, n: u32, bound: SortId, body: &Formula) -> OracleStatus {
        let cands = instantiation_candidates(self.p, whole, bound);
        let mut best = OracleStatus::NonMember;
        let mut choice = alloc::vec![0usize; n as usize];
        loop {
            let fillers: Vec<Term> = choice.iter().map(|i| cands[*i].clone()).collect();
            if let Ok(inst) = instantiate(self.p, abs, &fillers) {
                self.names.push(fillers);
                let d = self.den(body);
                let st = self.status_in(&d, &inst);
                self.names.pop();
                best = or3(best, st);
                if best == OracleStatus::Member {
                    return best;
                }
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return best;
                }
                choice[k] += 1;
                if choice[k] < cands.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Every state reachable from `start` within the budget, and whether the
    /// exploration was cut short.
    fn explore(&mut self, start: &Term) -> (BTreeSet<Term>, bool) {
        if let Some(r) = self.explored.get(start) {
            return r.clone();
        }
        let mut seen = BTreeSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::new();
        queue.push_back((start.clone(), 0usize));
        let mut cut = false;
        while let Some((t, depth)) = queue.pop_front() {
            let succ = step(self.p, &t);
            if succ.is_empty() {
                continue;
            }
            if depth >= self.budget.rewrite_depth {
                cut = true;
                continue;
            }
            for (x, _) in succ {
                if seen.contains(&x) {
                    continue;
                }
                if seen.len() >= self.budget.explore_nodes {
                    cut = true;
                    break;
                }
                seen.insert(x.clone());
                queue.push_back((x, depth + 1));
            }
        }
        self.explored.insert(start.clone(), (seen.clone(), cut));
        (seen, cut)
    }

    fn modal(&mut self, u: &Formula, ctx: &Context, v: &Formula, s: SortId) -> Membership {
        let du = self.den(u);
        let dv = self.den(v);
        // Witnesses outside the universe are out of view unless the
        // witness formula bounds their size.
        let all_witnesses_seen = u.size_bound().is_some_and(|b| b <= self.u.max_size);
        let mut ws: Vec<(Term, bool)> = du.yes.iter().map(|t| (t.clone(), true)).collect();
        ws.extend(du.maybe.iter().map(|t| (t.clone(), false)));
        let mut m = Membership::default();
        let terms: Vec<Term> = self.all(s).iter().cloned().collect();
        for t in terms {
            let mut status = if all_witnesses_seen { OracleStatus::NonMember } else { OracleStatus::Uncertain };
            for (w, definite) in &ws {
                let Ok(start) = ctx.plug(self.p, &[t.clone(), w.clone()]) else { continue };
                let (states, cut) = self.explore(&start);
                let mut hit = OracleStatus::NonMember;
                for x in &states {
                    hit = or3(hit, self.status_in(&dv, x));
                    if hit == OracleStatus::Member {
                        break;
                    }
                }
                if cut && hit != OracleStatus::Member {
                    hit = OracleStatus::Uncertain;
                }
                if !definite {
                    hit = and3(hit, OracleStatus::Uncertain);
                }
                status = or3(status, hit);
                if status == OracleStatus::Member {
                    break;
                }
            }
            match status {
                OracleStatus::Member => {
                    m.yes.insert(t);
                }
                OracleStatus::Uncertain => {
                    m.maybe.insert(t);
                }
                OracleStatus::NonMember => {}
            }
        }
        m
    }
}

fn and3(a: OracleStatus, b: OracleStatus) -> OracleStatus {
    use OracleStatus::*;
    match (a, b) {
        (NonMember, _) | (_, NonMember) => NonMember,
        (Uncertain, _) | (_, Uncertain) => Uncertain,
        _ => Member,
    }
}

fn or3(a: OracleStatus, b: OracleStatus) -> OracleStatus {
    use OracleStatus::*;
    match (a, b) {
        (Member, _) | (_, Member) => Member,
        (Uncertain, _) | (_, Uncertain) => Uncertain,
        _ => NonMember,
    }
}

/// One pass over a fixed universe: terms the evaluation needed but the
/// universe lacks make the affected results uncertain. Also returns the
/// missing terms.
pub fn direct_denote(p: &Presentation, f: &Formula, u: &Universe, budget: &Budget) -> (Membership, BTreeSet<Term>) {
    let mut e = Eval {
        p,
        u,
        budget: *budget,
        missing: BTreeSet::new(),
        fix: BTreeMap::new(),
        names: Vec::new(),
        closed_cache: BTreeMap::new(),
        open_cache: BTreeMap::new(),
        explored: BTreeMap::new(),
    };
    let m = e.den(f);
    (m, e.missing)
}

/// Denotations with a universe that grows to include the terms they need.
pub struct Oracle<'p> {
    p: &'p Presentation,
    pub universe: Universe,
    pub budget: Budget,
    /// Maximum number of extension rounds per formula.
    pub rounds: usize,
}

impl<'p> Oracle<'p> {
    pub fn new(p: &'p Presentation, gens: &GeneratorSet, max_size: usize, budget: Budget) -> Self {
        Oracle { p, universe: Universe::build(p, gens, max_size), budget, rounds: 3 }
    }

    pub fn denote(&mut self, f: &Formula) -> Membership {
        let mut round = 0;
        loop {
            let (m, missing) = direct_denote(self.p, f, &self.universe, &self.budget);
            round += 1;
            if missing.is_empty() || round >= self.rounds || self.universe.capped {
                return m;
            }
            if !self.universe.add(self.p, missing) {
                return direct_denote(self.p, f, &self.universe, &self.budget).0;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareEntry {
    pub term: String,
    pub formula: String,
    pub checker_verdict: &'static str,
    pub oracle_membership: &'static str,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompareReport {
    /// (term, formula) pairs examined.
    pub pairs: usize,
    /// Checker definite and contradicted by a definite oracle answer.
    pub discrepancies: Vec<CompareEntry>,
    /// Checker Unknown while the oracle was uncertain too.
    pub unknowns: Vec<CompareEntry>,
    /// Checker Unknown although the oracle settled the pair.
    pub unjustified_unknowns: Vec<CompareEntry>,
    /// Pairs the oracle could not settle.
    pub oracle_uncertain: usize,
    /// Size of the universe after extension, summed over formulae.
    pub universe_terms: usize,
}

impl CompareReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "pairs {} discrepancies {} unknowns {} unjustified-unknowns {} oracle-uncertain {}",
            self.pairs,
            self.discrepancies.len(),
            self.unknowns.len(),
            self.unjustified_unknowns.len(),
            self.oracle_uncertain
        )?;
        for (tag, list) in [
            ("DISCREPANCY", &self.discrepancies),
            ("UNJUSTIFIED-UNKNOWN", &self.unjustified_unknowns),
            ("UNKNOWN", &self.unknowns),
        ] {
            for e in list {
                write!(
                    f,
                    "{tag} term={} formula={} checker={} oracle={}",
                    e.term, e.formula, e.checker_verdict, e.oracle_membership
                )?;
                if let Some(r) = &e.reason {
                    write!(f, " reason={r}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Generators extended by the atom literals of the formulae.
pub fn generators_for(gens: &GeneratorSet, formulas: &[Formula]) -> GeneratorSet {
    let mut lits = BTreeSet::new();
    for f in formulas {
        f.atom_literals(&mut lits);
    }
    let mut g = gens.clone();
    for (s, n) in lits {
        g = g.with(s, [n]);
    }
    g
}

/// Compares the checker with the oracle on every universe term up to
/// `max_size` of each formula's sort. The checker's witness size is set to
/// `max_size` so both see the same witnesses.
pub fn compare(p: &Presentation, formulas: &[Formula], gens: &GeneratorSet, max_size: usize, budget: &Budget) -> CompareReport {
    let gens = generators_for(gens, formulas);
    let cb = Budget { witness_size: max_size, ..*budget };
    let mut checker = Checker::new(p, cb).with_generators(gens.clone());
    compare_with(p, formulas, &gens, max_size, budget, &mut |t, f| {
        checker.check(t, f).unwrap_or_else(|e| Verdict::Unknown(e.to_string()))
    })
}

/// As [`compare`], with the checker supplied by the caller.
pub fn compare_with(
    p: &Presentation,
    formulas: &[Formula],
    gens: &GeneratorSet,
    max_size: usize,
    budget: &Budget,
    checker: &mut dyn FnMut(&Term, &Formula) -> Verdict,
) -> CompareReport {
    let gens = generators_for(gens, formulas);
    let mut report = CompareReport::default();
    for f in formulas {
        let mut oracle = Oracle::new(p, &gens, max_size, *budget);
        let m = oracle.denote(f);
        report.universe_terms += oracle.universe.len();
        let fshow = f.display(p).to_string();
        let terms: Vec<Term> = oracle.universe.base(f.sort()).cloned().collect();
        for t in terms {
            report.pairs += 1;
            let v = checker(&t, f);
            let o = m.status(&t);
            let entry = || CompareEntry {
                term: show(p, &t),
                formula: fshow.clone(),
                checker_verdict: v.label(),
                oracle_membership: o.label(),
                reason: v.reason().map(str::to_string),
            };
            if o == OracleStatus::Uncertain {
                report.oracle_uncertain += 1;
            }
            match (&v, o) {
                (Verdict::True(_), OracleStatus::NonMember) | (Verdict::False, OracleStatus::Member) => {
                    report.discrepancies.push(entry())
                }
                (Verdict::Unknown(_), OracleStatus::Uncertain) => report.unknowns.push(entry()),
                (Verdict::Unknown(_), _) => report.unjustified_unknowns.push(entry()),
                _ => {}
            }
        }
    }
    report
}
