//! The acceptance gate: one test per criterion, each printing a pass/fail
//! line (visible with `-- --nocapture`). All properties are exact set
//! equalities over the default truncation (3 clocks, 3 ticks, ℕ bound 4).

use clott::harness::{gen_envs, run_suite, stream_prefix, Status, SuiteConfig};
use clott::interp::{interp_ctx, interp_term};
use clott::semantics::SemValue;
use clott::syntax::ast::*;
use clott::syntax::parse_file;
use clott::typecheck::check;
use clott::worlds::World;

fn cfg() -> SuiteConfig {
    SuiteConfig::default()
}

fn run(name: &str) -> (usize, usize, Vec<String>) {
    let report = run_suite(name, &cfg()).unwrap_or_else(|e| panic!("suite {name} errored: {e}"));
    let total = report.checks.len();
    let mut failures = Vec::new();
    for c in &report.checks {
        match &c.status {
            Status::Pass => {}
            Status::Fail(m) => failures.push(format!("[{}] {} at {}: {m}", c.lemma, c.fixture, c.world)),
            Status::TruncationExceeded(m) => {
                failures.push(format!("[{}] {} at {}: truncation: {m}", c.lemma, c.fixture, c.world))
            }
        }
    }
    (total - failures.len(), total, failures)
}

fn criterion(n: u32, what: &str, suites: &[&str]) {
    let mut all_failures = Vec::new();
    let mut pass = 0usize;
    let mut total = 0usize;
    for s in suites {
        let (p, t, f) = run(s);
        pass += p;
        total += t;
        all_failures.extend(f);
    }
    let verdict = if all_failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} — {what} ({pass}/{total} checks)");
    assert!(
        all_failures.is_empty(),
        "criterion {n} failed:\n{}",
        all_failures.join("\n")
    );
}

#[test]
fn criterion_01_adjunction_triangles() {
    criterion(1, "both triangle identities, every corpus presheaf, every world", &["eq5-eq6-triangles"]);
}

#[test]
fn criterion_02_transposition_round_trips() {
    criterion(2, "transposition is a bijection on terms both ways", &["lemma2-transposition"]);
}

#[test]
fn criterion_03_substitution_lemma() {
    criterion(3, "the substitution lemma over all four formation rules", &["lemma8-substitution"]);
}

#[test]
fn criterion_04_beta_eta() {
    criterion(
        4,
        "β/η for ticks, clocks, functions, and pairs, judgementally and semantically",
        &["beta-eta", "lemma10-forall-beta-eta"],
    );
}

#[test]
fn criterion_05_tick_irrelevance() {
    // the corpus must include a synchronisation fixture with ≥ 2 summands
    let ctx = Context::new(vec!["k".into(), "k2".into()])
        .with_entry(Entry::Tick("c".into(), "k".into()));
    let w = World::from_json(&serde_json::json!({
        "clocks": {"l0": 2}, "valuation": {"k": "l0", "k2": "l0"}
    }))
    .unwrap();
    let envs = gen_envs(&ctx, &w, &[Default::default()], &cfg().bounds()).unwrap();
    assert!(
        envs.len() >= 2,
        "synchronised worlds must contribute several coproduct summands"
    );
    criterion(
        5,
        "tick irrelevance and the double-abstraction identity, including synchronisation",
        &["prop6-lemma14-15-tick-irrelevance"],
    );
}

#[test]
fn criterion_06_fixed_point_unfolding() {
    let zeros = clott::harness::corpus::tm(
        &Context::new(vec!["k0".into()]),
        clott::harness::corpus::ZEROS_FORALL,
    );
    let prefix = stream_prefix(&zeros, 3, &cfg()).expect("prefix must evaluate");
    println!("criterion 6 prefix: zeros → {prefix:?}");
    assert_eq!(prefix, vec![0, 0, 0], "the zeros prefix must be three zeros");
    criterion(
        6,
        "fixed-point unfolding, its abstracted form, prefixes, and the tuple shape",
        &["lemma11-30-unfolding", "streams"],
    );
}

#[test]
fn criterion_07_diamond_welldefinedness() {
    criterion(
        7,
        "distinct decompositions of a tick-constant application evaluate identically",
        &["prop12-diamond-welldefinedness"],
    );
}

#[test]
fn criterion_08_clock_irrelevance() {
    criterion(
        8,
        "instantiations at different clocks agree; budget extension is bijective",
        &["lemma13-clock-irrelevance"],
    );
}

#[test]
fn criterion_09_exchange_algebra() {
    criterion(
        9,
        "exchange identity/composition, the unit/counit equations, and projection coherences",
        &["lemma16-18-29-31-exchange-algebra", "eq3-eq4", "lemma9-27-clock-weakening", "lemma7-reindexing"],
    );
}

#[test]
fn criterion_10_negative_typing() {
    // the named negatives reject at the stated rules and the positives check
    let double_tick = "clocks k; ctx; \
        lam (x : Later (a:k) Later (b:k) Nat) tlam (c:k) (x [c]) [c] \
        : Pi (x : Later (a:k) Later (b:k) Nat) Later (c:k) Nat";
    let err = check(&parse_file(double_tick).unwrap().judgement).unwrap_err();
    assert_eq!(err.rule, "tick-app", "the double unpack must fail at the tick rule");
    let unguarded = "clocks k; ctx; \
        dfix k (lam (x : Later (a:k) Str[k]) adv x k k) : Later (a:k) Str[k]";
    let err = check(&parse_file(unguarded).unwrap().judgement).unwrap_err();
    assert_eq!(err.rule, "diamond-app", "the unguarded ⋄ must fail at the ⋄ rule");
    criterion(10, "negative fixtures reject with rule diagnostics; the corpus accepts", &["typing"]);
}

#[test]
fn criterion_11_soundness_sweep() {
    criterion(
        11,
        "every accepted corpus judgement denotes a member of its type, every world",
        &["soundness"],
    );
}

#[test]
fn verify_report_is_deterministic() {
    let a = run_suite("streams", &cfg()).unwrap().to_json().to_string();
    let b = run_suite("streams", &cfg()).unwrap().to_json().to_string();
    assert_eq!(a, b, "a fixed seed must reproduce the report byte for byte");
    let c = run_suite("presheaf-laws", &cfg()).unwrap().to_json().to_string();
    let d = run_suite("presheaf-laws", &cfg()).unwrap().to_json().to_string();
    assert_eq!(c, d);
}

#[test]
fn nats_prefix_is_strictly_increasing() {
    let nats = clott::harness::corpus::nats_forall();
    let prefix = stream_prefix(&nats, 3, &cfg()).expect("prefix must evaluate");
    assert!(prefix.windows(2).all(|w| w[0] < w[1]), "nats prefix {prefix:?} must increase");
    assert_eq!(prefix, vec![0, 1, 2]);
}

#[test]
fn depth_zero_prefix_is_empty() {
    let zeros = clott::harness::corpus::tm(
        &Context::new(vec!["k0".into()]),
        clott::harness::corpus::ZEROS_FORALL,
    );
    assert_eq!(stream_prefix(&zeros, 0, &cfg()).unwrap(), Vec::<u64>::new());
}

#[test]
fn prefix_beyond_the_budget_reports_truncation() {
    let zeros = clott::harness::corpus::tm(
        &Context::new(vec!["k0".into()]),
        clott::harness::corpus::ZEROS_FORALL,
    );
    let err = stream_prefix(&zeros, 9, &cfg()).unwrap_err();
    assert!(matches!(err, clott::Error::Truncation(_)));
}

#[test]
fn zeros_membership_at_the_example_world() {
    // the CLI example: eval zeros at two ticks gives three zeros
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/zeros.clott"))
        .expect("fixtures/zeros.clott");
    let j = parse_file(&src).unwrap().judgement;
    let Judgement::Typing(ctx, t, _) = &j else { panic!("expected typing") };
    check(&j).unwrap();
    let w = World::from_json(&serde_json::json!({
        "clocks": {"l0": 2}, "valuation": {"k": "l0"}
    }))
    .unwrap();
    let v = interp_term(ctx, t)
        .unwrap()
        .eval(&w, &SemValue::Star, &cfg().bounds())
        .unwrap();
    assert_eq!(v.to_json(&cfg().bounds()).to_string(), "[0,[0,[0,\"*\"]]]");
    assert!(interp_ctx(ctx).contains(&w, &SemValue::Star, &cfg().bounds()).unwrap());
}
