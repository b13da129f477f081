//! The command line, driven in-process through `cli::run`.

use calclogic::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("calclogic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_arrow_prints_trace() {
    let (code, out, _) = call(&["check", "ski-arrow", "((S K) K)", "(arrow (lift I) (lift I))"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("true\n"), "{out}");
    assert!(out.contains("sigma@/"), "{out}");
    assert!(out.contains("target I"), "{out}");
}

#[test]
fn denote_prime() {
    let (code, out, _) = call(&["denote", "mon", "(prime)", "--gens", "a,b", "--max-size", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "a\nb\n");
}

#[test]
fn liveness_of_inert_process_is_false() {
    let (code, out, _) = call(&["check", "rhopi", "0", "(liveness)"]);
    assert_eq!((code, out.as_str()), (1, "false\n"));
}

#[test]
fn unknown_exits_two() {
    let (code, out, _) = call(&["check", "ski-arrow", "((S I) I)", "(arrow ((S I) I) I)"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.starts_with("unknown"), "{out}");
}

#[test]
fn machine_verdict_record() {
    let (code, out, _) = call(&["--format", "machine", "check", "ski-arrow", "((S K) K)", "(arrow K K)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["verdict"], "true");
    assert_eq!(v["witness_trace"]["target"], "K");
    assert!(v["budget_spent"]["evaluations"].as_u64().unwrap() > 0);
    assert!(v.get("unknown_reason").is_none());
}

#[test]
fn text_and_machine_verdicts_agree() {
    for (calc, t, f) in [("rhopi", "0", "(liveness)"), ("mon", "a", "(prime)"), ("ski-arrow", "((S I) I)", "(arrow ((S I) I) I)")] {
        let (c1, text, _) = call(&["check", calc, t, f]);
        let (c2, machine, _) = call(&["--format", "machine", "check", calc, t, f]);
        let v: serde_json::Value = serde_json::from_str(machine.trim()).unwrap();
        assert_eq!(c1, c2);
        assert!(text.starts_with(v["verdict"].as_str().unwrap()), "{text} vs {machine}");
    }
}

#[test]
fn rewrite_lists_successors() {
    let (code, out, _) = call(&["rewrite", "rhopi", "(| (recv x (\\ y P)) (recv x (\\ y Q)) (send x R) comm)"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2, "{out}");
}

#[test]
fn normalize_and_trace() {
    let (code, out, _) = call(&["normalize", "ski", "((K I) (((S K) K) y))"]);
    assert_eq!((code, out.as_str()), (0, "I\n"));
    let (code, out, _) = call(&["trace", "ski", "((K I) (((S K) K) y))", "--goal", "I"]);
    assert_eq!(code, 0);
    assert!(out.contains("kappa@/"), "{out}");
    let (code, _, _) = call(&["trace", "ski", "K", "--goal", "I"]);
    assert_eq!(code, 1);
    let (code, _, _) = call(&["--depth", "1", "normalize", "ski", "(((S K) K) x)"]);
    assert_eq!(code, 2);
}

#[test]
fn compare_default_corpus_agrees() {
    let (code, out, _) = call(&["compare", "mon"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("pairs "), "{out}");
    assert!(out.contains("discrepancies 0"), "{out}");
}

#[test]
fn compare_corpus_file() {
    let dir = std::env::temp_dir().join(format!("calclogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("corpus.txt");
    std::fs::write(&corpus, "# two formulae\n(prime)\nS (· a top)\n").unwrap();
    let (code, out, _) = call(&["compare", "mon", "--corpus", corpus.to_str().unwrap(), "--gens", "a,b", "--max-size", "4"]);
    assert_eq!(code, 0, "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validate_builtin_and_file() {
    let (code, out, _) = call(&["validate", "rhopi"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok:"), "{out}");
    let dir = std::env::temp_dir().join(format!("calclogic-validate-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.calc");
    std::fs::write(&bad, "sort S\nop f : S -> S\nrule r : (f $x) => $y\n").unwrap();
    let (code, _, err) = call(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 65);
    assert!(err.contains("UnboundMetavariable"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, 64);
    assert_eq!(call(&["frobnicate"]).0, 64);
    assert_eq!(call(&["check", "nosuchcalc", "a", "top"]).0, 64);
    assert_eq!(call(&["--nodes", "0", "list-builtins"]).0, 64);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn data_errors() {
    assert_eq!(call(&["check", "mon", "(a b", "top"]).0, 65);
    assert_eq!(call(&["check", "rhopi", "0", "(mu X (not X))"]).0, 65);
    assert_eq!(call(&["check", "rhopi", "0", "Y"]).0, 65);
}

#[test]
fn list_builtins() {
    let (code, out, _) = call(&["list-builtins"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn deterministic_output() {
    let args = ["denote", "rhopi", "(firewall 0)", "--max-size", "6"];
    assert_eq!(call(&args), call(&args));
}
