//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints one PASS/FAIL line; exits non-zero on any failure.

use lta_cli::syntax::{load_spec, parse_spec};
use lta_core::automaton::{Lta, State};
use lta_core::completion::eval_automaton;
use lta_core::lattice::{Interval, Partition};
use lta_core::oracle::suites::{self, SuiteReport};
use lta_core::oracle::{enumerate_language, peano_benchmark, EnumBounds};
use lta_core::partitioned::{determinize, Plta};
use lta_core::term::Term;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn example(name: &str) -> PathBuf {
    manifest().join("examples").join(name)
}

fn golden(name: &str) -> String {
    let p = manifest().join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn lta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lta")).args(args).output().expect("run lta")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn transitions(a: &Lta) -> BTreeSet<String> {
    a.transitions().iter().map(|t| t.to_string()).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn suite(r: SuiteReport, limit: Option<(Duration, Duration)>) -> Outcome {
    if let Some((elapsed, max)) = limit {
        within(elapsed, max)?;
    }
    check(r.passed(), || format!("{r}; first: {}", r.violations.first().cloned().unwrap_or_default()))?;
    Ok(r.to_string())
}

/// Fixpoint of the list generator, compared byte for byte with the pinned
/// output and, through a state renaming, with the hand-derived fourth step.
fn running_trace() -> Outcome {
    let dir = std::env::temp_dir().join(format!("lta-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let trace = dir.join("running.trace");
    let start = Instant::now();
    let spec = example("running.lta");
    let out = lta(&[
        "complete",
        spec.to_str().unwrap(),
        "--widen-after",
        "3",
        "--strict-int",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    let elapsed = start.elapsed();
    check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    within(elapsed, Duration::from_secs(1))?;
    let summary = String::from_utf8_lossy(&out.stderr);
    check(summary.starts_with("converged after 4 step(s)"), || format!("summary: {summary}"))?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    check(stdout == golden("running.completed.lta"), || "automaton differs from golden".into())?;
    let trace_text = std::fs::read_to_string(&trace).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    check(trace_text == golden("running.trace"), || "trace differs from golden".into())?;

    let result = parse_spec(&stdout).map_err(|e| e.to_string())?;
    let (_, a) = result.first_automaton().ok_or("no automaton in output")?;
    let rename: BTreeMap<&str, &str> = [
        ("p2'", "q!0"),
        ("p3", "q!2"),
        ("p4", "q!1"),
        ("p3'", "q!3"),
        ("p5", "q!5"),
        ("p6", "q!4"),
        ("p7", "q!7"),
        ("p8", "q!6"),
        ("p7'", "q!9"),
        ("p9", "q!11"),
    ]
    .into();
    let reference = [
        "[1,2] -> q1",
        "f(q1) -> q2",
        "cons(q1,p3) -> p2'",
        "p2' -> q2",
        "f(p4) -> p3",
        "+(q1,q[1,1]) -> p4",
        "[1,1] -> q[1,1]",
        "[2,3] -> p4",
        "[2,2] -> q[2,2]",
        "cons(q[2,2],p5) -> p3'",
        "p3' -> p3",
        "f(p6) -> p5",
        "+(q[2,2],q[1,1]) -> p6",
        "[3,3] -> p6",
        "cons(p6,p7) -> p3'",
        "f(p8) -> p7",
        "+(p6,q[2,2]) -> p8",
        "[5,+inf[ -> p8",
        "cons(p8,p9) -> p7'",
        "p7' -> p7",
        "f(p8) -> p9",
        "+(p8,q[2,2]) -> p8",
    ];
    let have = transitions(a);
    let renamed = |t: &str| {
        let mut s = t.to_string();
        // Longest names first so that `p3'` is not rewritten as `p3` + `'`.
        let mut keys: Vec<_> = rename.keys().collect();
        keys.sort_by_key(|k| std::cmp::Reverse(k.len()));
        for k in keys {
            s = s.replace(k, rename[k]);
        }
        s
    };
    let missing: Vec<String> = reference.iter().map(|t| renamed(t)).filter(|t| !have.contains(t)).collect();
    check(missing.is_empty(), || format!("missing reference transitions {missing:?}"))?;
    Ok(format!("4 steps, {} reference transitions present, {} total, {elapsed:?}", reference.len(), have.len()))
}

fn example_run_language() -> Outcome {
    let start = Instant::now();
    let spec = load_spec(example("run.lta")).map_err(|e| e.to_string())?;
    let (_, a) = spec.first_automaton().ok_or("no automaton")?;
    let e = enumerate_language(a, &EnumBounds::new(2, -2, 6));
    within(start.elapsed(), Duration::from_secs(1))?;
    check(!e.truncated, || "enumeration truncated".into())?;
    let expected: BTreeSet<Term> = (0..=4).map(|k| Term::app("f", vec![Term::Val(Interval::atom(k))])).collect();
    check(e.terms == expected, || format!("language {:?}", e.terms))?;
    Ok(format!("{} terms", e.terms.len()))
}

/// The deterministic automaton over the sign partition, with the reference
/// names `q{1,2,4}` and so on kept as set names.
fn determinization_golden() -> Outcome {
    let out = lta(&["det", example("signs.lta").to_str().unwrap()]);
    check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    check(stdout == golden("signs.det.lta"), || "output differs from golden".into())?;
    let spec = parse_spec(&stdout).map_err(|e| e.to_string())?;
    let (_, d) = spec.first_automaton().ok_or("no automaton")?;
    let expected = set(&[
        "[-5,-1] -> q{1,2,4}",
        "[1,4] -> q{3,4}",
        "[0,0] -> q{4}",
        "f(q{1,2,4},q{1,2,4}) -> q{5}",
        "f(q{3,4},q{3,4}) -> q{6}",
        "f(q{3,4},q{4}) -> q{6}",
        "f(q{3,4},q{1,2,4}) -> q{6}",
        "f(q{5},q{6}) -> q{f1,f2}",
    ]);
    check(transitions(d) == expected, || format!("transitions {:?}", transitions(d)))?;
    check(d.is_deterministic(), || "result is not deterministic".into())?;
    check(d.finals() == &BTreeSet::from([State::from("q{f1,f2}")]), || "wrong final states".into())?;
    Ok(format!("{} transitions, deterministic", expected.len()))
}

fn partition_refinement() -> Outcome {
    let spec = load_spec(example("signs.lta")).map_err(|e| e.to_string())?;
    let fine = load_spec(example("signs-fine.lta")).map_err(|e| e.to_string())?;
    let (_, a) = spec.first_automaton().ok_or("no automaton")?;
    let coarse: &Partition = spec.partition.as_ref().ok_or("no partition")?;
    let finer = fine.partition.as_ref().ok_or("no finer partition")?;
    let refined = Plta::from_lta(a, coarse).refine(finer).map_err(|e| e.to_string())?;
    let expected = set(&[
        "[-3,-2] -> q1",
        "[-1,-1] -> q1",
        "[-5,-2] -> q2",
        "[3,4] -> q3",
        "[-3,-2] -> q4",
        "[-1,-1] -> q4",
        "[0,0] -> q4",
        "[1,2] -> q4",
        "f(q1,q2) -> q5",
        "f(q3,q4) -> q6",
        "f(q5,q6) -> qf1",
        "f(q5,q6) -> qf2",
    ]);
    check(transitions(refined.base()) == expected, || format!("refined {:?}", transitions(refined.base())))?;

    let fine_det = determinize(&refined);
    let out = lta(&[
        "det",
        example("signs.lta").to_str().unwrap(),
        "--partition",
        example("signs-fine.lta").to_str().unwrap(),
    ]);
    check(String::from_utf8_lossy(&out.stdout) == golden("signs-fine.det.lta"), || {
        "CLI output differs from golden".into()
    })?;
    let expected_det = set(&[
        "[-5,-2] -> q{1,2,4}",
        "[-1,-1] -> q{1,4}",
        "[1,4] -> q{3,4}",
        "[0,0] -> q{4}",
        "f(q{1,2,4},q{1,2,4}) -> q{5}",
        "f(q{1,4},q{1,2,4}) -> q{5}",
        "f(q{3,4},q{3,4}) -> q{6}",
        "f(q{3,4},q{4}) -> q{6}",
        "f(q{3,4},q{1,2,4}) -> q{6}",
        "f(q{3,4},q{1,4}) -> q{6}",
        "f(q{5},q{6}) -> q{f1,f2}",
    ]);
    check(transitions(fine_det.base()) == expected_det, || format!("refined det {:?}", transitions(fine_det.base())))?;

    let coarse_det = determinize(&Plta::from_lta(a, coarse));
    let bounds = EnumBounds::new(3, -6, 6).with_max_terms(1_000_000);
    let lf = enumerate_language(fine_det.base(), &bounds);
    let lc = enumerate_language(coarse_det.base(), &bounds);
    check(!lf.truncated && !lc.truncated, || "enumeration truncated".into())?;
    check(lf.terms.is_subset(&lc.terms), || "refined language escapes the coarse one".into())?;
    check(!lf.terms.is_empty(), || "refined language is empty".into())?;
    Ok(format!("refined language {} ⊆ coarse {} at depth 3", lf.terms.len(), lc.terms.len()))
}

fn timed(f: impl FnOnce() -> SuiteReport) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn solver() -> Outcome {
    let (r, t) = timed(|| suites::solver_soundness(1000, 20));
    suite(r, Some((t, Duration::from_secs(30))))
}

fn completion_soundness() -> Outcome {
    let (r, t) = timed(|| suites::completion_soundness(1000));
    suite(r, Some((t, Duration::from_secs(300))))
}

fn phase_soundness() -> Outcome {
    suite(suites::phase_soundness(1000), None)
}

/// Step count pinned from the first oracle run of the nine-rule system.
const PEANO_300_400: usize = 401;

fn peano() -> Outcome {
    let start = Instant::now();
    let r = peano_benchmark(300, 400);
    within(start.elapsed(), Duration::from_secs(1))?;
    check(r.peano_steps >= 300, || format!("{} steps", r.peano_steps))?;
    check(r.peano_steps == PEANO_300_400, || format!("{} steps, pinned {PEANO_300_400}", r.peano_steps))?;
    check(r.builtin_steps == 1, || format!("{} builtin steps", r.builtin_steps))?;
    let out = lta(&["bench-peano", "300", "400"]);
    let text = String::from_utf8_lossy(&out.stdout);
    check(text == "peano_steps=401 builtin_steps=1\n", || format!("CLI printed {text:?}"))?;
    Ok(format!("peano_steps={} builtin_steps={}", r.peano_steps, r.builtin_steps))
}

fn boolean_equivalence() -> Outcome {
    suite(suites::boolean_equivalence(200, &EnumBounds::new(4, -10, 10).with_max_terms(20_000)), None)
}

fn widening_termination() -> Outcome {
    let spec = parse_spec(
        "lattice interval-int\nautomaton D {\n  final q2\n  [3,6] -> q1\n  [2,8] -> q2\n  q1 + q2 -> q2\n}\n",
    )
    .map_err(|e| e.to_string())?;
    let (_, a) = spec.first_automaton().ok_or("no automaton")?;
    let ev = eval_automaton(a, 3);
    let widened: Interval = "[2,+inf[".parse().map_err(|e: lta_core::lattice::IntervalParseError| e.to_string())?;
    let q2 = State::from("q2");
    check(ev.lambdas().any(|(v, q)| *q == q2 && *v == widened), || format!("q2 values: {:?}", transitions(&ev)))?;
    let r = suites::widening_termination(100, 3, 10);
    let detail = suite(r, None)?;
    Ok(format!("[2,+inf[ at q2; {detail}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("running example golden trace", running_trace),
        ("example run language", example_run_language),
        ("determinization golden", determinization_golden),
        ("partition refinement golden", partition_refinement),
        ("solver soundness", solver),
        ("completion soundness", completion_soundness),
        ("phase soundness", phase_soundness),
        ("peano benchmark", peano),
        ("boolean operation equivalence", boolean_equivalence),
        ("widening termination", widening_termination),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
