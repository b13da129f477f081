//! Bounded model checking of formulae against terms.
//!
//! Connectives are three-valued (strong Kleene). Lifted constructors are
//! checked by decomposing the term modulo structural congruence; binder
//! arguments are instantiated with every name from
//! [`instantiation_candidates`] and succeed if some instantiation does.
//! Modalities enumerate witnesses up to `witness_size` and search the
//! rewrite graph; fixed points are checked with a local tableau that treats
//! a repeated (term, variable) pair as success.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::enumerate::{enumerate_terms, GeneratorSet};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaArg};
use crate::rewrite::{reachable, Reach, Trace, Truth};
use crate::signature::{Presentation, SortId};
use crate::term::{canonicalize, decompose, instantiate, instantiation_candidates, sort_of, Term};

/// Supporting data for a positive verdict: the first modal witness and
/// rewrite trace used, if any.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    pub witness: Option<Term>,
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True(Evidence),
    False,
    Unknown(String),
}

impl Verdict {
    pub fn truth(&self) -> Truth {
        match self {
            Verdict::True(_) => Truth::True,
            Verdict::False => Truth::False,
            Verdict::Unknown(_) => Truth::Unknown,
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True(_))
    }

    fn yes() -> Verdict {
        Verdict::True(Evidence::default())
    }

    fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::yes()
        } else {
            Verdict::False
        }
    }

    fn negate(self) -> Verdict {
        match self {
            Verdict::True(_) => Verdict::False,
            Verdict::False => Verdict::yes(),
            u => u,
        }
    }
}

/// Work counters accumulated by a [`Checker`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Formula nodes evaluated.
    pub evaluations: usize,
    /// Candidate witnesses tried in modalities.
    pub witnesses: usize,
    /// States visited by reachability searches.
    pub states: usize,
    /// Fixed point unfoldings.
    pub unfoldings: usize,
}

#[derive(Clone, Default)]
struct Env<'f> {
    /// Per fixed point variable: its binder node and the terms assumed to
    /// satisfy it on the current tableau branch.
    fix: BTreeMap<&'f str, (&'f Formula, BTreeSet<Term>)>,
    /// Terms standing for binder names, innermost last.
    names: Vec<Vec<Term>>,
}

/// Witness sort and the atom literals available to witnesses.
type WitnessKey = (SortId, BTreeSet<(SortId, String)>);

pub struct Checker<'p> {
    p: &'p Presentation,
    budget: Budget,
    gens: GeneratorSet,
    stats: Stats,
    witness_cache: BTreeMap<WitnessKey, Vec<Term>>,
    memo: BTreeMap<(usize, Term), Verdict>,
    closed: BTreeMap<usize, bool>,
}

impl<'p> Checker<'p> {
    pub fn new(p: &'p Presentation, budget: Budget) -> Self {
        Checker {
            p,
            budget,
            gens: GeneratorSet::new(),
            stats: Stats::default(),
            witness_cache: BTreeMap::new(),
            memo: BTreeMap::new(),
            closed: BTreeMap::new(),
        }
    }

    /// Atoms available to modal witnesses, in addition to the atoms of the
    /// witness formula itself.
    pub fn with_generators(mut self, gens: GeneratorSet) -> Self {
        self.gens = gens;
        self.witness_cache.clear();
        self
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Decides `t ⊨ f` within the budget. `f` must be closed and of the sort
    /// of `t`.
    pub fn check(&mut self, t: &Term, f: &Formula) -> Result<Verdict> {
        self.memo.clear();
        self.closed.clear();
        self.check_keep_memo(t, f)
    }

    fn check_keep_memo(&mut self, t: &Term, f: &Formula) -> Result<Verdict> {
        let p = self.p;
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(Error::UnboundVar(v));
        }
        let ts = sort_of(p, t).ok_or_else(|| Error::sort(0, "term has no sort"))?;
        if ts != f.sort() {
            return Err(Error::sort(
                0,
                format!("term of sort {} checked against a formula of sort {}", p.sort_name(ts), p.sort_name(f.sort())),
            ));
        }
        let t = canonicalize(p, t);
        Ok(self.eval(&t, f, &Env::default()))
    }

    /// True if `f` has no free fixed point variables and no binder names, so
    /// its verdict on a term does not depend on the environment.
    fn is_closed(&mut self, f: &Formula) -> bool {
        let key = f as *const Formula as usize;
        if let Some(b) = self.closed.get(&key) {
            return *b;
        }
        fn names_free(f: &Formula, depth: u32) -> bool {
            match f {
                Formula::Name { index, .. } => *index >= depth,
                Formula::And(a, b) | Formula::Or(a, b) => names_free(a, depth) || names_free(b, depth),
                Formula::Not(a) | Formula::Mu { body: a, .. } => names_free(a, depth),
                Formula::Modal { u, v, .. } => names_free(u, depth) || names_free(v, depth),
                Formula::Lifted { args, .. } => args.iter().any(|a| match a {
                    FormulaArg::Plain(x) => names_free(x, depth),
                    FormulaArg::List(xs) => xs.iter().any(|x| names_free(x, depth)),
                    FormulaArg::Binder { body, .. } => names_free(body, depth + 1),
                }),
                _ => false,
            }
        }
        let b = f.free_vars().is_empty() && !names_free(f, 0);
        self.closed.insert(key, b);
        b
    }

    fn eval<'f>(&mut self, t: &Term, f: &'f Formula, env: &Env<'f>) -> Verdict {
        self.stats.evaluations += 1;
        let cacheable = matches!(f, Formula::Modal { .. } | Formula::Mu { .. }) && self.is_closed(f);
        let key = (f as *const Formula as usize, t.clone());
        if cacheable {
            if let Some(v) = self.memo.get(&key) {
                return v.clone();
            }
        }
        let v = self.eval_node(t, f, env);
        // Unknowns caused by the unfold guard depend on the path taken.
        if cacheable && !matches!(v, Verdict::Unknown(_)) {
            self.memo.insert(key, v.clone());
        }
        v
    }

    fn eval_node<'f>(&mut self, t: &Term, f: &'f Formula, env: &Env<'f>) -> Verdict {
        match f {
            Formula::Top(_) => Verdict::yes(),
            Formula::Bot(_) => Verdict::False,
            Formula::Not(a) => self.eval(t, a, env).negate(),
            Formula::And(a, b) => match self.eval(t, a, env) {
                Verdict::False => Verdict::False,
                Verdict::True(ea) => match self.eval(t, b, env) {
                    Verdict::True(eb) => Verdict::True(merge(ea, eb)),
                    other => other,
                },
                Verdict::Unknown(r) => match self.eval(t, b, env) {
                    Verdict::False => Verdict::False,
                    _ => Verdict::Unknown(r),
                },
            },
            Formula::Or(a, b) => match self.eval(t, a, env) {
                Verdict::True(e) => Verdict::True(e),
                Verdict::False => self.eval(t, b, env),
                Verdict::Unknown(r) => match self.eval(t, b, env) {
                    Verdict::True(e) => Verdict::True(e),
                    _ => Verdict::Unknown(r),
                },
            },
            Formula::AtomLit { sort, name } => {
                Verdict::from_bool(matches!(t, Term::Atom { sort: s, name: n } if s == sort && n == name))
            }
            Formula::Name { index, pos, .. } => {
                let depth = env.names.len();
                let bound = env
                    .names
                    .get(depth.wrapping_sub(1 + *index as usize))
                    .and_then(|v| v.get(*pos as usize));
                Verdict::from_bool(bound == Some(t))
            }
            Formula::Lifted { op, args, .. } => self.lifted(t, *op, args, env),
            Formula::Modal { u, ctx, v, .. } => self.modal(t, u, ctx, v, env),
            Formula::Mu { var, .. } => {
                let assumed = match env.fix.get(var.as_str()) {
                    Some((node, set)) if core::ptr::eq(*node, f) => set.clone(),
                    _ => BTreeSet::new(),
                };
                self.unfold(t, f, assumed, env)
            }
            Formula::Var { name, .. } => match env.fix.get(name.as_str()) {
                Some((node, set)) => {
                    let (node, set) = (*node, set.clone());
                    self.unfold(t, node, set, env)
                }
                None => Verdict::Unknown(format!("unbound variable {name}")),
            },
        }
    }

    fn unfold<'f>(&mut self, t: &Term, node: &'f Formula, mut assumed: BTreeSet<Term>, env: &Env<'f>) -> Verdict {
        let Formula::Mu { var, body, .. } = node else { unreachable!() };
        if assumed.contains(t) {
            return Verdict::yes();
        }
        // The guard bounds the assumptions of one variable on this branch,
        // so a verdict depends only on the term, the formula and the branch.
        if assumed.len() >= self.budget.unfold_guard {
            return Verdict::Unknown(format!("unfold guard {} reached", self.budget.unfold_guard));
        }
        self.stats.unfoldings += 1;
        assumed.insert(t.clone());
        let mut inner = env.clone();
        for v in bound_inside(body) {
            inner.fix.remove(v);
        }
        inner.fix.insert(var.as_str(), (node, assumed));
        self.eval(t, body, &inner)
    }

    fn lifted<'f>(&mut self, t: &Term, op: crate::signature::OpId, args: &'f [FormulaArg], env: &Env<'f>) -> Verdict {
        let p = self.p;
        let mut best = Verdict::False;
        for tuple in decompose(p, t, op) {
            match self.tuple(t, &tuple, args, env) {
                Verdict::True(e) => return Verdict::True(e),
                Verdict::Unknown(r) => best = Verdict::Unknown(r),
                Verdict::False => {}
            }
        }
        best
    }

    fn tuple<'f>(&mut self, whole: &Term, terms: &[Term], args: &'f [FormulaArg], env: &Env<'f>) -> Verdict {
        if terms.len() != args.len() {
            return Verdict::False;
        }
        let mut acc = Verdict::yes();
        for (a, f) in terms.iter().zip(args) {
            let v = match (f, a) {
                (FormulaArg::Plain(g), _) => self.eval(a, g, env),
                (FormulaArg::List(gs), Term::Seq(items)) => {
                    if gs.len() != items.len() {
                        Verdict::False
                    } else {
                        let mut inner = Verdict::yes();
                        for (x, g) in items.iter().zip(gs) {
                            inner = kleene_and(inner, self.eval(x, g, env));
                            if inner == Verdict::False {
                                break;
                            }
                        }
                        inner
                    }
                }
                (FormulaArg::Binder { arity: None, .. }, Term::Abs { .. }) => Verdict::yes(),
                (FormulaArg::Binder { arity: Some(n), bound, body, .. }, Term::Abs { arity, .. }) => {
                    if n != arity {
                        Verdict::False
                    } else {
                        self.binder(whole, a, *n, *bound, body, env)
                    }
                }
                _ => Verdict::False,
            };
            acc = kleene_and(acc, v);
            if acc == Verdict::False {
                return acc;
            }
        }
        acc
    }

    fn binder<'f>(&mut self, whole: &Term, abs: &Term, n: u32, bound: SortId, body: &'f Formula, env: &Env<'f>) -> Verdict {
        let p = self.p;
        let cands = instantiation_candidates(p, whole, bound);
        let mut best = Verdict::False;
        for fillers in tuples_of(&cands, n as usize) {
            let Ok(inst) = instantiate(p, abs, &fillers) else { continue };
            let mut inner = env.clone();
            inner.names.push(fillers);
            match self.eval(&inst, body, &inner) {
                Verdict::True(e) => return Verdict::True(e),
                Verdict::Unknown(r) => best = Verdict::Unknown(r),
                Verdict::False => {}
            }
        }
        best
    }

    fn witnesses(&mut self, u: &Formula) -> Vec<Term> {
        let mut lits = BTreeSet::new();
        u.atom_literals(&mut lits);
        let key = (u.sort(), lits);
        if let Some(w) = self.witness_cache.get(&key) {
            return w.clone();
        }
        let mut gens = self.gens.clone();
        for (s, n) in &key.1 {
            gens = gens.with(*s, [n.clone()]);
        }
        let ws = enumerate_terms(self.p, u.sort(), &gens, self.budget.witness_size);
        self.witness_cache.insert(key, ws.clone());
        ws
    }

    fn modal<'f>(
        &mut self,
        t: &Term,
        u: &'f Formula,
        ctx: &crate::pattern::Context,
        v: &'f Formula,
        env: &Env<'f>,
    ) -> Verdict {
        let p = self.p;
        let budget = self.budget;
        let mut ws = self.witnesses(u);
        for names in &env.names {
            for n in names {
                if sort_of(p, n) == Some(u.sort()) && !ws.contains(n) {
                    ws.push(n.clone());
                }
            }
        }
        let mut uncertain: Option<String> = None;
        for w in ws {
            self.stats.witnesses += 1;
            match self.eval(&w, u, env) {
                Verdict::False => continue,
                Verdict::Unknown(r) => {
                    uncertain.get_or_insert(r);
                    continue;
                }
                Verdict::True(_) => {}
            }
            let Ok(start) = ctx.plug(p, &[t.clone(), w.clone()]) else { continue };
            let reach = reachable(p, &start, &mut |s: &Term| self.eval(s, v, env).truth(), &budget);
            match reach {
                Reach::Found(trace) => {
                    self.stats.states += trace.len() + 1;
                    return Verdict::True(Evidence { witness: Some(w), trace: Some(trace) });
                }
                Reach::Exhausted { explored } => self.stats.states += explored,
                Reach::Unknown { explored, reason } => {
                    self.stats.states += explored;
                    uncertain.get_or_insert(reason);
                }
            }
        }
        if let Some(r) = uncertain {
            return Verdict::Unknown(r);
        }
        match u.size_bound() {
            Some(b) if b <= budget.witness_size => Verdict::False,
            _ => Verdict::Unknown(format!("witnesses beyond size {} were not tried", budget.witness_size)),
        }
    }
}

fn merge(a: Evidence, b: Evidence) -> Evidence {
    Evidence { witness: a.witness.or(b.witness), trace: a.trace.or(b.trace) }
}

fn kleene_and(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
        (Verdict::Unknown(r), _) | (_, Verdict::Unknown(r)) => Verdict::Unknown(r),
        (Verdict::True(x), Verdict::True(y)) => Verdict::True(merge(x, y)),
    }
}

/// Fixed point variables bound strictly inside `f`.
fn bound_inside(f: &Formula) -> Vec<&str> {
    fn go<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
        match f {
            Formula::Mu { var, body, .. } => {
                out.push(var);
                go(body, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Not(a) => go(a, out),
            Formula::Modal { u, v, .. } => {
                go(u, out);
                go(v, out);
            }
            Formula::Lifted { args, .. } => {
                for a in args {
                    match a {
                        FormulaArg::Plain(x) => go(x, out),
                        FormulaArg::List(xs) => xs.iter().for_each(|x| go(x, out)),
                        FormulaArg::Binder { body, .. } => go(body, out),
                    }
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}

/// All length-`n` tuples over `items`.
fn tuples_of(items: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for it in items {
                let mut v = prefix.clone();
                v.push(it.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Checks one term with a fresh checker and no extra witness atoms.
pub fn check(p: &Presentation, t: &Term, f: &Formula, budget: &Budget) -> Result<Verdict> {
    Checker::new(p, *budget).check(t, f)
}

/// The members of a formula's denotation among the enumerated terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denotation {
    /// Terms the checker accepted, in enumeration order.
    pub members: Vec<Term>,
    /// Terms on which the checker returned Unknown.
    pub unknown: Vec<Term>,
    /// Number of terms examined.
    pub examined: usize,
}

impl Denotation {
    /// True when every examined term was decided.
    pub fn complete(&self) -> bool {
        self.unknown.is_empty()
    }
}

/// Enumerates the closed terms of the formula's sort up to `max_size` over
/// `gens` and checks each.
pub fn denote(p: &Presentation, f: &Formula, gens: &GeneratorSet, max_size: usize, budget: &Budget) -> Result<Denotation> {
    let mut c = Checker::new(p, *budget).with_generators(gens.clone());
    c.denote(f, gens, max_size)
}

impl Checker<'_> {
    pub fn denote(&mut self, f: &Formula, gens: &GeneratorSet, max_size: usize) -> Result<Denotation> {
        self.memo.clear();
        self.closed.clear();
        let terms = enumerate_terms(self.p, f.sort(), gens, max_size);
        let mut d = Denotation { members: Vec::new(), unknown: Vec::new(), examined: terms.len() };
        for t in terms {
            match self.check_keep_memo(&t, f)? {
                Verdict::True(_) => d.members.push(t),
                Verdict::Unknown(_) => d.unknown.push(t),
                Verdict::False => {}
            }
        }
        Ok(d)
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Verdict::True(_) => f.write_str("true"),
            Verdict::False => f.write_str("false"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::True(_) => "true",
            Verdict::False => "false",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::Unknown(r) => Some(r),
            _ => None,
        }
    }
}

impl Evidence {
    pub fn describe(&self, p: &Presentation) -> String {
        match (&self.witness, &self.trace) {
            (Some(w), Some(tr)) => format!("witness {} via {}", crate::term::show(p, w), tr.display(p)),
            (None, Some(tr)) => tr.display(p).to_string(),
            _ => String::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::formula::parse_formula;
    use crate::term::parse_term;

    const PRIME: &str = "(and (not e) (not (· (not e) (not e))))";
    const LIVENESS: &str = "(mu X (| (recv top (\\ x X)) top))";

    fn verdict(name: &str, term: &str, formula: &str) -> Verdict {
        let p = builtin(name).unwrap();
        let t = parse_term(&p, term).unwrap();
        let f = parse_formula(&p, sort_of(&p, &t).unwrap(), formula).unwrap();
        check(&p, &t, &f, &Budget::default()).unwrap()
    }

    #[test]
    fn primes_in_the_free_monoid() {
        assert!(verdict("mon", "a", PRIME).is_true());
        assert_eq!(verdict("mon", "e", PRIME), Verdict::False);
        assert_eq!(verdict("mon", "(· a b)", PRIME), Verdict::False);
        assert_eq!(verdict("mon", "(· a a a)", PRIME), Verdict::False);
    }

    #[test]
    fn kleene_connectives() {
        assert!(verdict("mon", "a", "(or bot top)").is_true());
        assert_eq!(verdict("mon", "a", "(and top bot)"), Verdict::False);
        assert!(verdict("mon", "a", "(not (not a))").is_true());
        assert_eq!(verdict("mon", "a", "b"), Verdict::False);
    }

    #[test]
    fn arrow_modality() {
        // K x y reduces to x: K satisfies arrow(top, arrow(top, ...)).
        assert!(verdict("ski-arrow", "(K I)", "(arrow K I)").is_true());
        assert_eq!(verdict("ski-arrow", "K", "(arrow I S)"), Verdict::False);
    }

    #[test]
    fn rely_guarantee_comm() {
        // A receiver on a quoted name reacts with a sender once comm is present.
        let v = verdict(
            "rhopi",
            "(recv (quote 0) (\\ y (* y)))",
            "(dia (send (quote 0) 0) (| hole1 hole2 comm) comm)",
        );
        let Verdict::True(e) = v else { panic!("{v:?}") };
        assert!(e.trace.unwrap().len() == 1);
    }

    #[test]
    fn replication_is_live() {
        let p = builtin("rhopi").unwrap();
        let d = "(recv x (\\ y (| (send x (* y)) (* y))))";
        let bang = format!("(| (send x (| {d} 0)) {d})");
        let t = parse_term(&p, &bang).unwrap();
        let f = parse_formula(&p, p.sort_id("P").unwrap(), LIVENESS).unwrap();
        assert!(check(&p, &t, &f, &Budget::default()).unwrap().is_true());
        let dead = parse_term(&p, "(send x 0)").unwrap();
        assert_eq!(check(&p, &dead, &f, &Budget::default()).unwrap(), Verdict::False);
    }

    #[test]
    fn unfold_guard_yields_unknown() {
        let p = builtin("rhopi").unwrap();
        let d = "(recv x (\\ y (| (send x (* y)) (* y))))";
        // The receiver's continuation is the replicated process, whose cycle
        // closes only after a second unfolding.
        let t = parse_term(&p, &format!("(recv x (\\ z (| (send x (| {d} 0)) {d})))")).unwrap();
        let f = parse_formula(&p, p.sort_id("P").unwrap(), LIVENESS).unwrap();
        assert!(check(&p, &t, &f, &Budget::default()).unwrap().is_true());
        let tight = Budget { unfold_guard: 1, ..Budget::default() };
        assert!(matches!(check(&p, &t, &f, &tight).unwrap(), Verdict::Unknown(_)));
    }

    #[test]
    fn sort_mismatch_is_an_error() {
        let p = builtin("rhopi").unwrap();
        let t = parse_term(&p, "(quote 0)").unwrap();
        let f = parse_formula(&p, p.sort_id("P").unwrap(), "top").unwrap();
        assert!(matches!(check(&p, &t, &f, &Budget::default()), Err(Error::Sort { .. })));
    }

    #[test]
    fn denote_primes() {
        let p = builtin("mon").unwrap();
        let s = SortId(0);
        let f = parse_formula(&p, s, PRIME).unwrap();
        let g = GeneratorSet::new().with(s, ["a", "b"]);
        let d = denote(&p, &f, &g, 3, &Budget::default()).unwrap();
        assert!(d.complete());
        let shown: Vec<_> = d.members.iter().map(|t| crate::term::show(&p, t)).collect();
        assert_eq!(shown, ["a", "b"]);
    }
}
