//! Random terms, formulae and budgets, plus the bodies of the invariant
//! properties. Shared by the property tests and the acceptance harness.

#![allow(dead_code)]

use calclogic_core::builtin::builtin;
use calclogic_core::rewrite::Truth;
use calclogic_core::term::{canonicalize, equal, parse_term_as, sort_of};
use calclogic_core::{normalize, parse_formula, parse_term, replay, step, Budget, Checker, Presentation, Term, Verdict};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Budget small enough that checks on random inputs stay cheap.
pub fn small_budget() -> Budget {
    Budget { rewrite_depth: 16, explore_nodes: 200, witness_size: 3, unfold_guard: 64 }
}

// ---------------------------------------------------------------------------
// Term texts

pub fn ski_term() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("S"), Just("K"), Just("I"), Just("x")].prop_map(String::from);
    leaf.prop_recursive(4, 24, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| format!("({a} {b})")))
}

pub fn mon_term() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("a"), Just("b"), Just("e")].prop_map(String::from);
    leaf.prop_recursive(4, 24, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| format!("(· {a} {b})")))
}

pub fn group_term() -> impl Strategy<Value = String> {
    let g_leaf = prop_oneof![Just("g"), Just("h"), Just("e")].prop_map(String::from);
    let g = g_leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(m {a} {b})")),
            inner.prop_map(|a| format!("(inv {a})")),
        ]
    });
    let v_leaf = Just("v".to_string());
    v_leaf.prop_recursive(3, 8, 1, move |inner| (g.clone(), inner).prop_map(|(a, b)| format!("(a {a} {b})")))
}

fn rho_name(proc_: BoxedStrategy<String>) -> BoxedStrategy<String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("(quote 0)".to_string()),
        proc_.prop_map(|p| format!("(quote {p})")),
    ]
    .boxed()
}

/// RHO-pi processes. The bound name is always `z`, so `(* z)` refers to it
/// inside a continuation and to a free atom elsewhere.
pub fn rho_proc() -> BoxedStrategy<String> {
    let leaf = prop_oneof![Just("0"), Just("comm"), Just("(* x)"), Just("(* z)")].prop_map(String::from);
    leaf.prop_recursive(3, 16, 3, |inner| {
        let name = rho_name(inner.clone().boxed());
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(| {a} {b})")),
            (name.clone(), inner.clone()).prop_map(|(n, a)| format!("(send {n} {a})")),
            name.clone().prop_map(|n| format!("(send {n})")),
            (name, inner).prop_map(|(n, a)| format!("(recv {n} (\\ z {a}))")),
        ]
    })
    .boxed()
}

// ---------------------------------------------------------------------------
// Formula texts

pub fn ski_formula() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("top"),
        Just("bot"),
        Just("S"),
        Just("K"),
        Just("I"),
        Just("(or (I top) (K top top) (S top top top))"),
        Just("(mu X (or S K I (app X X)))"),
    ]
    .prop_map(String::from);
    leaf.prop_recursive(3, 12, 2, |inner| {
        let small = prop_oneof![Just("K"), Just("I"), Just("(or K I)")];
        prop_oneof![
            inner.clone().prop_map(|a| format!("(not {a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(and {a} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(or {a} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(app {a} {b})")),
            (small, inner).prop_map(|(u, b)| format!("(arrow {u} {b})")),
        ]
    })
}

pub fn rho_formula() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("top"),
        Just("bot"),
        Just("0"),
        Just("comm"),
        Just("(| comm top)"),
        Just("(not (| (recv top top) top))"),
        Just("(mu X (| (recv top (\\ x X)) top))"),
    ]
    .prop_map(String::from);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("(not {a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(and {a} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(or {a} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(| {a} {b})")),
            inner.clone().prop_map(|a| format!("(recv top (\\ x {a}))")),
            inner.clone().prop_map(|a| format!("(rg comm {a})")),
            inner.prop_map(|a| format!("(rg 0 {a})")),
        ]
    })
}

pub fn mon_formula() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("top"), Just("bot"), Just("e"), Just("a"), Just("b")].prop_map(String::from);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("(not {a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(and {a} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(or {a} {b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("(· {a} {b})")),
        ]
    })
}

/// A calculus name with a random term and formula for it.
pub fn checked_pair() -> impl Strategy<Value = (&'static str, String, String)> {
    prop_oneof![
        (ski_term(), ski_formula()).prop_map(|(t, f)| ("ski-arrow", t, f)),
        (rho_proc(), rho_formula()).prop_map(|(t, f)| ("rhopi", t, f)),
        (mon_term(), mon_formula()).prop_map(|(t, f)| ("mon", t, f)),
    ]
}

pub fn budget() -> impl Strategy<Value = Budget> {
    (1usize..=16, 1usize..=200, 1usize..=3, 1usize..=64).prop_map(|(d, n, w, g)| Budget {
        rewrite_depth: d,
        explore_nodes: n,
        witness_size: w,
        unfold_guard: g,
    })
}

// ---------------------------------------------------------------------------
// Helpers

pub fn calc(name: &str) -> Presentation {
    builtin(name).expect("builtin parses")
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

pub fn term(p: &Presentation, text: &str) -> Result<Term, TestCaseError> {
    parse_term(p, text).map_err(|e| fail(format!("{text}: {e}")))
}

pub fn truth(p: &Presentation, t: &Term, f: &str, b: Budget) -> Result<Truth, TestCaseError> {
    let s = sort_of(p, t).ok_or_else(|| fail("unsorted term".into()))?;
    let f = parse_formula(p, s, f).map_err(|e| fail(format!("{f}: {e}")))?;
    let v = Checker::new(p, b).check(t, &f).map_err(|e| fail(e.to_string()))?;
    Ok(v.truth())
}

fn not3(a: Truth) -> Truth {
    match a {
        Truth::True => Truth::False,
        Truth::False => Truth::True,
        Truth::Unknown => Truth::Unknown,
    }
}

// ---------------------------------------------------------------------------
// Properties

/// canonicalize is idempotent and agrees with `equal`. Texts that are a
/// bare atom need the expected sort.
pub fn prop_idempotent(name: &str, sort: Option<&str>, text: &str) -> Result<(), TestCaseError> {
    let p = calc(name);
    let t = match sort.and_then(|s| p.sort_id(s)) {
        Some(s) => parse_term_as(&p, s, text).map_err(|e| fail(format!("{text}: {e}")))?,
        None => term(&p, text)?,
    };
    let c = canonicalize(&p, &t);
    prop_assert_eq!(canonicalize(&p, &c), c.clone(), "{}", text);
    prop_assert!(equal(&p, &t, &c));
    Ok(())
}

/// Reordering the factors of a parallel composition changes neither
/// equality nor any verdict.
pub fn prop_bag_permutation(items: &[String], shuffled: &[String], formula: &str) -> Result<(), TestCaseError> {
    let p = calc("rhopi");
    let a = term(&p, &format!("(| {})", items.join(" ")))?;
    let b = term(&p, &format!("(| {})", shuffled.join(" ")))?;
    prop_assert!(equal(&p, &a, &b));
    prop_assert_eq!(canonicalize(&p, &a), canonicalize(&p, &b));
    let budget = small_budget();
    prop_assert_eq!(truth(&p, &a, formula, budget)?, truth(&p, &b, formula, budget)?);
    Ok(())
}

/// Every trace the engine emits replays to its recorded target: one-step
/// successors, normalization traces and modal witness traces.
pub fn prop_replay(name: &str, text: &str, formula: &str) -> Result<(), TestCaseError> {
    let p = calc(name);
    let t = canonicalize(&p, &term(&p, text)?);
    for (next, s) in step(&p, &t) {
        let got = replay(&p, &t, std::slice::from_ref(&s)).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(got, next);
    }
    let budget = small_budget();
    let tr = match normalize(&p, &t, &budget) {
        Ok(tr) => tr,
        Err(e) => e.partial,
    };
    prop_assert_eq!(replay(&p, &tr.source, &tr.steps).map_err(|e| fail(e.to_string()))?, tr.target);
    let s = sort_of(&p, &t).ok_or_else(|| fail("unsorted".into()))?;
    let f = parse_formula(&p, s, formula).map_err(|e| fail(e.to_string()))?;
    if let Verdict::True(ev) = Checker::new(&p, budget).check(&t, &f).map_err(|e| fail(e.to_string()))? {
        if let Some(tr) = ev.trace {
            let got = replay(&p, &tr.source, &tr.steps).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(got, tr.target);
        }
    }
    Ok(())
}

/// Verdicts obey the strong Kleene tables and de Morgan's laws.
pub fn prop_kleene(name: &str, text: &str, f: &str, g: &str) -> Result<(), TestCaseError> {
    let p = calc(name);
    let t = term(&p, text)?;
    let b = small_budget();
    let vf = truth(&p, &t, f, b)?;
    let vg = truth(&p, &t, g, b)?;
    prop_assert_eq!(truth(&p, &t, &format!("(not {f})"), b)?, not3(vf));
    prop_assert_eq!(truth(&p, &t, &format!("(not (not {f}))"), b)?, vf);
    let and = truth(&p, &t, &format!("(and {f} {g})"), b)?;
    let or = truth(&p, &t, &format!("(or {f} {g})"), b)?;
    prop_assert_eq!(and, vf.min(vg));
    prop_assert_eq!(or, vf.max(vg));
    prop_assert_eq!(truth(&p, &t, &format!("(not (and {f} {g}))"), b)?, truth(&p, &t, &format!("(or (not {f}) (not {g}))"), b)?);
    prop_assert_eq!(truth(&p, &t, &format!("(not (or {f} {g}))"), b)?, truth(&p, &t, &format!("(and (not {f}) (not {g}))"), b)?);
    Ok(())
}

/// A definite verdict stays the same when every budget grows.
pub fn prop_monotone(name: &str, text: &str, f: &str, small: Budget, extra: Budget) -> Result<(), TestCaseError> {
    let p = calc(name);
    let t = term(&p, text)?;
    let large = Budget {
        rewrite_depth: small.rewrite_depth + extra.rewrite_depth,
        explore_nodes: small.explore_nodes + extra.explore_nodes,
        witness_size: small.witness_size + extra.witness_size,
        unfold_guard: small.unfold_guard + extra.unfold_guard,
    };
    let a = truth(&p, &t, f, small)?;
    if a != Truth::Unknown {
        prop_assert_eq!(truth(&p, &t, f, large)?, a, "small {:?} large {:?}", small, large);
    }
    Ok(())
}
