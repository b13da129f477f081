//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS or FAIL line per criterion; exits nonzero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use calclogic::fixture::{fixture, fixture_names, Fixture};
use calclogic_core::oracle::compare;
use calclogic_core::term::{canonicalize, parse_term_as, show};
use calclogic_core::{
    denote, enumerate_terms, normalize, replay, step, Budget, Checker, GeneratorSet, Presentation, Term, TraceStep, Verdict,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fx(name: &str) -> Fixture {
    fixture(name).expect("fixture loads")
}

fn gens(p: &Presentation, sort: &str, names: &[&str]) -> GeneratorSet {
    GeneratorSet::new().with(p.sort_id(sort).expect("sort"), names.iter().copied())
}

fn terms_of(fx: &Fixture, texts: &[&str]) -> BTreeSet<Term> {
    texts
        .iter()
        .map(|t| canonicalize(&fx.presentation, &parse_term_as(&fx.presentation, fx.sort, t).expect("term parses")))
        .collect()
}

fn shown(p: &Presentation, ts: &[Term]) -> String {
    ts.iter().map(|t| show(p, t)).collect::<Vec<_>>().join(", ")
}

fn verdict(fx: &Fixture, term: &str, formula: &str, budget: Budget) -> Result<Verdict, String> {
    let t = fx.term(term).map_err(|e| e.to_string())?;
    let f = fx.formula(fx.sort, formula).map_err(|e| e.to_string())?;
    Checker::new(&fx.presentation, budget)
        .with_generators(fx.generators.clone())
        .check(&t, &f)
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------

fn worked_example() -> Outcome {
    let fx = fx("mon");
    let p = &fx.presentation;
    let f = fx.formula(fx.sort, "(· (or a (· b d)) (or c d))").map_err(|e| e.to_string())?;
    let d = denote(p, &f, &gens(p, "S", &["a", "b", "c", "d"]), 5, &Budget::default()).map_err(|e| e.to_string())?;
    let got: BTreeSet<Term> = d.members.iter().cloned().collect();
    let want = terms_of(&fx, &["(· a c)", "(· a d)", "(· b d c)", "(· b d d)"]);
    ensure!(d.complete(), "{} unknown terms", d.unknown.len());
    ensure!(got == want, "got {{{}}}", shown(p, &d.members));
    Ok(format!("{{{}}} among {} words", shown(p, &d.members), d.examined))
}

fn prime() -> Outcome {
    let fx = fx("mon");
    let p = &fx.presentation;
    let f = fx.formula(fx.sort, "(prime)").map_err(|e| e.to_string())?;
    let d = denote(p, &f, &gens(p, "S", &["a", "b"]), 4, &Budget::default()).map_err(|e| e.to_string())?;
    let got: BTreeSet<Term> = d.members.iter().cloned().collect();
    ensure!(d.complete() && got == terms_of(&fx, &["a", "b"]), "got {{{}}}", shown(p, &d.members));
    for w in ["(· a b)", "(· a a b)"] {
        let v = verdict(&fx, w, "(prime)", Budget::default())?;
        ensure!(matches!(v, Verdict::False), "{w} checks {v}");
    }
    Ok(format!("{{{}}}; a·b and a·a·b false", shown(p, &d.members)))
}

/// Right-nested with no unit factor, or the unit alone.
fn right_nested(p: &Presentation, t: &Term) -> bool {
    let (e, dot) = (p.op_id("e").unwrap(), p.op_id("·").unwrap());
    fn leaf(t: &Term, e: calclogic_core::signature::OpId, dot: calclogic_core::signature::OpId) -> bool {
        !matches!(t.head(), Some(h) if h == e || h == dot)
    }
    fn chain(t: &Term, e: calclogic_core::signature::OpId, dot: calclogic_core::signature::OpId) -> bool {
        match t {
            Term::App { op, args } if *op == dot => leaf(&args[0], e, dot) && chain(&args[1], e, dot),
            other => leaf(other, e, dot),
        }
    }
    t.head() == Some(e) || chain(t, e, dot)
}

/// The generator word a tree denotes.
fn word(p: &Presentation, t: &Term, out: &mut Vec<Term>) {
    let dot = p.op_id("·").unwrap();
    match t {
        Term::App { op, args } if *op == dot => args.iter().for_each(|a| word(p, a, out)),
        Term::App { args, .. } if args.is_empty() => {}
        other => out.push(other.clone()),
    }
}

fn tree_normalization() -> Outcome {
    let fx = fx("mon-tree");
    let p = &fx.presentation;
    let terms = enumerate_terms(p, fx.sort, &fx.generators, 7);
    let mut by_word: BTreeMap<Vec<Term>, BTreeSet<Term>> = BTreeMap::new();
    for t in &terms {
        let nf = normalize(p, t, &Budget::default()).map_err(|_| format!("{} does not normalize", show(p, t)))?;
        ensure!(right_nested(p, &nf.target), "{} normalizes to {}", show(p, t), show(p, &nf.target));
        let mut w = Vec::new();
        word(p, t, &mut w);
        let mut wn = Vec::new();
        word(p, &nf.target, &mut wn);
        ensure!(w == wn, "{} changes its word", show(p, t));
        by_word.entry(w).or_default().insert(nf.target);
    }
    for (w, nfs) in &by_word {
        ensure!(nfs.len() == 1, "word {} has {} normal forms", shown(p, w), nfs.len());
    }
    Ok(format!("{} trees, {} classes, one normal form each", terms.len(), by_word.len()))
}

/// All states reachable from `t`, or None if there are more than `cap`.
fn reduction_graph(p: &Presentation, t: &Term, cap: usize) -> Option<BTreeSet<Term>> {
    let t = canonicalize(p, t);
    let mut seen = BTreeSet::from([t.clone()]);
    let mut queue = VecDeque::from([t]);
    while let Some(s) = queue.pop_front() {
        for (n, _) in step(p, &s) {
            if seen.insert(n.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(n);
            }
        }
    }
    Some(seen)
}

fn church_rosser() -> Outcome {
    let fx = fx("ski");
    let p = &fx.presentation;
    let budget = Budget::default();
    let terms = enumerate_terms(p, fx.sort, &gens(p, "T", &["x"]), 7);
    let (mut finite, mut skipped) = (0, 0);
    for t in &terms {
        let Some(states) = reduction_graph(p, t, budget.explore_nodes) else {
            skipped += 1;
            continue;
        };
        finite += 1;
        let normal: Vec<&Term> = states.iter().filter(|s| step(p, s).is_empty()).collect();
        ensure!(normal.len() <= 1, "{} reaches {} normal forms", show(p, t), normal.len());
    }
    Ok(format!("{finite} terms with finite graphs, {skipped} beyond budget"))
}

/// Lengths of every rewrite sequence from `t` to `goal`, up to `depth` steps.
fn trace_lengths(p: &Presentation, t: &Term, goal: &Term, depth: usize, path: &mut Vec<TraceStep>, out: &mut Vec<Vec<TraceStep>>) {
    if t == goal {
        out.push(path.clone());
    }
    if path.len() == depth {
        return;
    }
    for (n, s) in step(p, t) {
        path.push(s);
        trace_lengths(p, &n, goal, depth, path, out);
        path.pop();
    }
}

fn cost_divergence() -> Outcome {
    let fx = fx("ski");
    let p = &fx.presentation;
    let t = canonicalize(p, &fx.term("((K I) (((S K) K) y))").map_err(|e| e.to_string())?);
    let goal = canonicalize(p, &fx.term("I").map_err(|e| e.to_string())?);
    let mut traces = Vec::new();
    trace_lengths(p, &t, &goal, 6, &mut Vec::new(), &mut traces);
    for tr in &traces {
        ensure!(replay(p, &t, tr).map_err(|e| e.to_string())? == goal, "trace does not replay");
    }
    let lengths: BTreeSet<usize> = traces.iter().map(Vec::len).collect();
    ensure!(lengths.contains(&1), "no one-step trace: {lengths:?}");
    ensure!(lengths.iter().any(|&n| n >= 3), "no trace of three or more steps: {lengths:?}");
    Ok(format!("{} traces to I with lengths {lengths:?}", traces.len()))
}

fn arrow() -> Outcome {
    let fx = fx("ski-arrow");
    let p = &fx.presentation;
    let timed = |t: &str, f: &str| -> Result<Verdict, String> {
        let t0 = Instant::now();
        let v = verdict(&fx, t, f, Budget::default())?;
        ensure!(t0.elapsed() < Duration::from_secs(1), "{t} took {:.2?}", t0.elapsed());
        Ok(v)
    };
    let v = timed("((S K) K)", "(arrow K K)")?;
    let Verdict::True(ev) = &v else { return Err(format!("((S K) K) checks {v}")) };
    let tr = ev.trace.as_ref().ok_or("no trace")?;
    let end = replay(p, &tr.source, &tr.steps).map_err(|e| e.to_string())?;
    ensure!(end == tr.target, "trace does not replay");
    let k = timed("K", "(arrow I I)")?;
    ensure!(matches!(k, Verdict::False), "K checks {k}");
    let again = timed("((S K) K)", "(arrow K K)")?;
    ensure!(again == v, "verdict not deterministic");
    Ok(format!("SKK true via {} steps from {}; K false", tr.steps.len(), show(p, &tr.source)))
}

fn nondeterminism() -> Outcome {
    let fx = fx("rhopi");
    let p = &fx.presentation;
    let mut counts = Vec::new();
    for name in ["@contention", "@message-order"] {
        let t = canonicalize(p, &fx.term(name).map_err(|e| e.to_string())?);
        let n = step(p, &t).len();
        ensure!(n == 2, "{name} has {n} successors");
        counts.push(n);
    }
    Ok(format!("successor counts {counts:?}"))
}

fn liveness() -> Outcome {
    let fx = fx("rhopi");
    let b = Budget::default();
    for t in ["@bang-0", "(| @bang-0 comm)"] {
        let v = verdict(&fx, t, "(liveness)", b)?;
        ensure!(v.is_true(), "{t} checks {v}");
    }
    for t in ["0", "(send x 0)", "(| (send x 0) (send y comm))"] {
        let v = verdict(&fx, t, "(liveness)", b)?;
        ensure!(matches!(v, Verdict::False), "{t} checks {v}");
    }
    Ok("replicated receiver true; 0 and send-only false".into())
}

/// Channels of receivers at the top level of a process.
fn active_channels(p: &Presentation, t: &Term) -> Vec<Term> {
    let (par, recv) = (p.op_id("|").unwrap(), p.op_id("recv").unwrap());
    let items = calclogic_core::term::bag_items(p, par, t);
    items
        .iter()
        .filter_map(|i| match i {
            Term::App { op, args } if *op == recv => Some(args[0].clone()),
            _ => None,
        })
        .collect()
}

/// Receivers on names outside the allowed set, at any reachable state.
fn first_violation(p: &Presentation, t: &Term, allowed: &Term, cap: usize) -> Result<Option<(Term, Term)>, String> {
    let reach = reduction_graph(p, t, cap).ok_or_else(|| format!("{} has more than {cap} states", show(p, t)))?;
    Ok(reach.into_iter().find_map(|s| {
        let bad = active_channels(p, &s).into_iter().find(|c| c != allowed)?;
        Some((s, bad))
    }))
}

fn firewall() -> Outcome {
    let fx = fx("rhopi");
    let p = &fx.presentation;
    let allowed = canonicalize(p, &parse_term_as(p, p.sort_id("N").unwrap(), "(quote 0)").unwrap());
    let f = fx.formula(fx.sort, "(firewall 0)").map_err(|e| e.to_string())?;
    let budget = Budget::default();
    let mut checker = Checker::new(p, budget);
    // The enumerated universe, plus every member composed in parallel with
    // an enumerated sender and the catalyst, so that members can react.
    let base = enumerate_terms(p, fx.sort, &GeneratorSet::new(), 7);
    let send = p.op_id("send").unwrap();
    let par = p.op_id("|").unwrap();
    let senders: Vec<&Term> = base
        .iter()
        .filter(|t| calclogic_core::term::bag_items(p, par, t).iter().any(|i| i.head() == Some(send)))
        .collect();
    let mut universe: BTreeSet<Term> = base.iter().cloned().collect();
    let comm = fx.term("comm").map_err(|e| e.to_string())?;
    for t in &base {
        if checker.check(t, &f).map_err(|e| e.to_string())?.is_true() {
            for s in &senders {
                let items = vec![t.clone(), (*s).clone(), comm.clone()];
                universe.insert(calclogic_core::term::make_bag(p, par, items));
            }
        }
    }
    let (mut members, mut reacting) = (0, 0);
    for t in &universe {
        match checker.check(t, &f).map_err(|e| e.to_string())? {
            Verdict::True(_) => {}
            Verdict::False => continue,
            Verdict::Unknown(r) => return Err(format!("{} is undecided: {r}", show(p, t))),
        }
        members += 1;
        if !step(p, t).is_empty() {
            reacting += 1;
        }
        if let Some((s, c)) = first_violation(p, t, &allowed, budget.explore_nodes)? {
            return Err(format!("member {} reaches {} receiving on {}", show(p, t), show(p, &s), show(p, &c)));
        }
    }
    let bad = "(recv (quote comm) (\\ x 0))";
    let v = verdict(&fx, bad, "(firewall 0)", budget)?;
    ensure!(matches!(v, Verdict::False), "{bad} checks {v}");
    let t = canonicalize(p, &fx.term(bad).map_err(|e| e.to_string())?);
    ensure!(first_violation(p, &t, &allowed, budget.explore_nodes)?.is_some(), "{bad} does not violate");
    Ok(format!("{} terms, {members} members ({reacting} reacting), all clean; {bad} excluded", universe.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for name in fixture_names() {
        let fx = fx(name);
        let formulas = fx.compare_formulas().map_err(|e| e.to_string())?;
        let t0 = Instant::now();
        let r = compare(&fx.presentation, &formulas, &fx.compare.gens, 5, &Budget::default());
        if !r.discrepancies.is_empty() || !r.unjustified_unknowns.is_empty() {
            failures.push(format!("{name}:\n{r}"));
        }
        lines.push(format!("{name} {} pairs/{} unknown/{:.1?}", r.pairs, r.unknowns.len(), t0.elapsed()));
    }
    ensure!(failures.is_empty(), "{}", failures.join("\n"));
    Ok(lines.join("; "))
}

fn run_suite<S: Strategy>(name: &str, cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn invariants() -> Outcome {
    use support::*;
    const CASES: u32 = 1000;
    run_suite("idempotence/ski", CASES, ski_term(), |t| prop_idempotent("ski", None, &t))?;
    run_suite("idempotence/mon", CASES, mon_term(), |t| prop_idempotent("mon", None, &t))?;
    run_suite("idempotence/mon-tree", CASES, mon_term(), |t| prop_idempotent("mon-tree", None, &t))?;
    run_suite("idempotence/rhopi", CASES, rho_proc(), |t| prop_idempotent("rhopi", None, &t))?;
    run_suite("idempotence/group-action", CASES, group_term(), |t| prop_idempotent("group-action", Some("V"), &t))?;
    let bags = prop::collection::vec(rho_proc(), 2..5).prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()));
    run_suite("bag permutation", CASES, (bags, rho_formula()), |((a, b), f)| prop_bag_permutation(&a, &b, &f))?;
    run_suite("trace replay", CASES, checked_pair(), |(n, t, f)| prop_replay(n, &t, &f))?;
    run_suite("kleene/de morgan", CASES, (checked_pair(), any::<prop::sample::Index>()), |((n, t, f), i)| {
        let g = ["top".to_string(), "bot".to_string(), format!("(not {f})")][i.index(3)].clone();
        prop_kleene(n, &t, &f, &g)
    })?;
    run_suite("budget monotonicity", CASES, (checked_pair(), budget(), budget()), |((n, t, f), s, e)| {
        prop_monotone(n, &t, &f, s, e)
    })?;
    Ok(format!("9 suites x {CASES} cases"))
}

// ---------------------------------------------------------------------------

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, title: "worked-example denotation", limit: secs(1), run: worked_example },
        Criterion { id: 2, title: "prime denotation", limit: secs(1), run: prime },
        Criterion { id: 3, title: "tree normalization", limit: secs(10), run: tree_normalization },
        Criterion { id: 4, title: "Church-Rosser desk check", limit: secs(60), run: church_rosser },
        Criterion { id: 5, title: "cost divergence", limit: None, run: cost_divergence },
        Criterion { id: 6, title: "arrow modality", limit: None, run: arrow },
        Criterion { id: 7, title: "nondeterministic successors", limit: None, run: nondeterminism },
        Criterion { id: 8, title: "liveness", limit: secs(5), run: liveness },
        Criterion { id: 9, title: "firewall", limit: secs(60), run: firewall },
        Criterion { id: 10, title: "oracle equivalence", limit: secs(300), run: oracle_equivalence },
        Criterion { id: 11, title: "invariant suites", limit: None, run: invariants },
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|o| o == c.id)) {
        let t0 = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = t0.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("[{tag}] {:>2} {} ({elapsed:.2?}): {detail}", c.id, c.title);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
