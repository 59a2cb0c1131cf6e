//! End-to-end checks of the parse → typecheck → evaluate pipeline on the
//! small standard fixtures.

use clott::interp::{interp_ctx, interp_term, interp_type};
use clott::semantics::{Bounds, SemValue};
use clott::syntax::*;
use clott::syntax::SyntacticSubst;
use clott::typecheck::{check, conv_term, infer};
use clott::worlds::World;

fn bounds() -> Bounds {
    Bounds::default_suite()
}

fn world1(n: u32) -> World {
    World::from_json(&serde_json::json!({
        "clocks": {"l0": n}, "valuation": {"k": "l0"}
    }))
    .unwrap()
}

const ZEROS: &str = "clocks k; ctx; \
    (lam (x : Later (a:k) Str[k]) pair 0 x) (dfix k (lam (x : Later (a:k) Str[k]) pair 0 x)) \
    : Str[k]";

#[test]
fn zeros_typechecks_and_unfolds_to_tuples() {
    let f = parse_file(ZEROS).unwrap();
    let Judgement::Typing(ctx, t, a) = &f.judgement else { panic!("expected typing") };
    check(&f.judgement).unwrap();
    let b = bounds();
    let v = interp_term(ctx, t).unwrap().eval(&world1(2), &SemValue::Star, &b).unwrap();
    // (0, (0, (0, *)))
    let expect = SemValue::pair(
        SemValue::Nat(0),
        SemValue::pair(SemValue::Nat(0), SemValue::pair(SemValue::Nat(0), SemValue::Star)),
    );
    assert!(v.struct_eq(&expect).unwrap(), "got {v:?}");
    // and it is a member of the stream type there
    let ty = interp_type(ctx, a).unwrap();
    assert!(ty.set_at(&world1(2), &SemValue::Star, &b).unwrap().contains(&v, &b).unwrap());
}

#[test]
fn dfix_at_exhausted_budget_is_a_point() {
    let src = "clocks k; ctx; dfix k (lam (x : Later (a:k) Str[k]) pair 0 x) : Later (a:k) Str[k]";
    let f = parse_file(src).unwrap();
    let Judgement::Typing(ctx, t, _) = &f.judgement else { panic!() };
    check(&f.judgement).unwrap();
    let v = interp_term(ctx, t).unwrap().eval(&world1(0), &SemValue::Star, &bounds()).unwrap();
    assert!(matches!(v, SemValue::Star));
}

#[test]
fn next_term_typechecks() {
    // λ(x:A) λ(α:κ) x : A → ▷A
    let src = "clocks k; ctx; lam (x : Nat) tlam (a:k) x : Pi (x : Nat) Later (a:k) Nat";
    check(&parse_file(src).unwrap().judgement).unwrap();
}

#[test]
fn dependent_applicative_term_typechecks() {
    let src = "clocks k; ctx; \
      lam (f : Later (a:k) (Pi (x:Nat) Nat)) lam (y : Later (a:k) Nat) tlam (a:k) (f [a]) (y [a]) \
      : Pi (f : Later (a:k) (Pi (x:Nat) Nat)) Pi (y : Later (a:k) Nat) Later (a:k) Nat";
    check(&parse_file(src).unwrap().judgement).unwrap();
}

#[test]
fn double_tick_unpack_is_rejected() {
    // λx.λ(α:κ).x[α][α] must fail: a tick opens a term only once
    let src = "clocks k; ctx; \
      lam (x : Later (a:k) Later (b:k) Nat) tlam (c:k) (x [c]) [c] \
      : Pi (x : Later (a:k) Later (b:k) Nat) Later (c:k) Nat";
    let f = parse_file(src).unwrap();
    let err = check(&f.judgement).unwrap_err();
    assert_eq!(err.rule, "tick-app");
}

#[test]
fn unguarded_diamond_in_dfix_is_rejected() {
    // dfix κ (λx. x[⋄]) — the witness clock is already in the zone
    let src = "clocks k; ctx; \
      dfix k (lam (x : Later (a:k) Str[k]) adv x k k) : Later (a:k) Str[k]";
    let f = parse_file(src).unwrap();
    let err = check(&f.judgement).unwrap_err();
    assert_eq!(err.rule, "diamond-app");
}

#[test]
fn head_and_tail_of_coinductive_streams_typecheck() {
    let hd = "clocks k; ctx; lam (s : Forall k2 Str[k2]) fst (s [k]) \
              : Pi (s : Forall k2 Str[k2]) Nat";
    check(&parse_file(hd).unwrap().judgement).unwrap();
    let tl = "clocks k; ctx; lam (s : Forall k2 Str[k2]) clam k3 adv (snd (s [k4])) k4 k3 \
              : Pi (s : Forall k2 Str[k2]) Forall k3 Str[k3]";
    check(&parse_file(tl).unwrap().judgement).unwrap();
}

#[test]
fn print_parse_round_trip_on_fixtures() {
    for src in [
        ZEROS,
        "clocks k; ctx x : Nat, a : k, y : Nat; x : Nat",
        "clocks k j; ctx z : Later (b:k) Nat, c : k; z [c] : Nat",
    ] {
        let f = parse_file(src).unwrap();
        let printed = print_judgement(&f.judgement);
        let f2 = parse_file(&printed).unwrap_or_else(|e| panic!("reparse {printed}: {e}"));
        match (&f.judgement, &f2.judgement) {
            (Judgement::Typing(c1, t1, a1), Judgement::Typing(c2, t2, a2)) => {
                assert_eq!(c1, c2);
                assert!(alpha_eq_term(t1, t2));
                assert!(alpha_eq_type(a1, a2));
            }
            (j1, j2) => assert_eq!(j1, j2),
        }
    }
}

#[test]
fn tick_beta_and_clock_beta_convert() {
    let ctx = Context::new(vec!["k".into()]);
    // (tlam (a:k) 0)[b] ≡ 0 under a tick b
    let ctx_b = ctx.with_entry(Entry::Tick("b".into(), "k".into()));
    let lhs = parse_term_in(&ctx_b, "(tlam (a:k) 0) [b]").unwrap();
    assert!(conv_term(&ctx_b, &lhs, &Term::Zero, &TypeExpr::Nat).unwrap());
    // (clam j 0)[k] ≡ 0
    let lhs2 = parse_term_in(&ctx, "(clam j 0) [k]").unwrap();
    assert!(conv_term(&ctx, &lhs2, &Term::Zero, &TypeExpr::Nat).unwrap());
}

#[test]
fn dfix_unfolds_under_the_tick_constant_in_conv() {
    // (dfix k2 t)[⋄ at k] ≡ t[k/k2] (dfix k t[k/k2])
    let ctx = Context::new(vec!["k".into()]);
    let lhs = parse_term_in(
        &ctx,
        "adv (dfix k2 (lam (x : Later (a:k2) Str[k2]) pair 0 x)) k2 k",
    )
    .unwrap();
    let rhs = parse_term_in(
        &ctx,
        "(lam (x : Later (a:k) Str[k]) pair 0 x) (dfix k (lam (x : Later (a:k) Str[k]) pair 0 x))",
    )
    .unwrap();
    assert!(conv_term(&ctx, &lhs, &rhs, &TypeExpr::Str("k".into())).unwrap());
}

#[test]
fn inferred_type_of_tick_application_opens_the_delay() {
    let ctx = Context::new(vec!["k".into()])
        .with_entry(Entry::Term("z".into(), parse_type_in(&Context::new(vec!["k".into()]), "Later (b:k) Nat").unwrap()))
        .with_entry(Entry::Tick("a".into(), "k".into()));
    let (ty, _) = infer(&ctx, &parse_term_in(&ctx, "z [a]").unwrap()).unwrap();
    assert_eq!(ty, TypeExpr::Nat);
}

#[test]
fn environments_of_tick_contexts_are_coproducts() {
    // ⟦α:κ ⊢κ⟧ at a single-clock world: one summand X={κ}
    let ctx = Context::new(vec!["k".into()]).with_entry(Entry::Tick("a".into(), "k".into()));
    let psh = interp_ctx(&ctx);
    let b = bounds();
    let envs = psh.enumerate(&world1(1), &b).unwrap();
    assert_eq!(envs.len(), 1);
    let (sync, payload) = envs[0].as_tick().unwrap();
    assert_eq!(sync.iter().cloned().collect::<Vec<_>>(), vec!["k".to_string()]);
    assert!(matches!(payload, SemValue::Star));
}

#[test]
fn lam_with_a_bare_clock_annotation_abstracts_a_tick() {
    // the λ(α:κ).t spelling, with the clock as the annotation
    let ctx = Context::new(vec!["k".into()]).with_entry(Entry::Term("x".into(), TypeExpr::Nat));
    let t = parse_term_in(&ctx, "lam (a : k) x").unwrap();
    assert!(alpha_eq_term(
        &t,
        &Term::TickLam("a".into(), "k".into(), Box::new(Term::Var("x".into())))
    ));
}

#[test]
fn dfix_with_the_nondependent_later_sugar_parses() {
    let ctx = Context::new(vec!["k".into()]);
    let t = parse_term_in(&ctx, "dfix k (lam (x : Later k Str[k]) pair 0 x)").unwrap();
    let Term::Dfix(k, body) = &t else { panic!("expected dfix, got {t:?}") };
    assert_eq!(k, "k");
    let Term::Lam(_, dom, inner) = &**body else { panic!("expected a function body") };
    assert!(matches!(
        &**dom,
        TypeExpr::Later(tick, kk, rest)
            if tick == "_" && kk == "k" && matches!(&**rest, TypeExpr::Str(s) if s == "k")
    ));
    assert!(matches!(&**inner, Term::Pair(..)));
}

#[test]
fn shadowed_tick_unpacking_is_a_scope_error() {
    // x [a] [a] with only one tick named a in scope parses, and dies at
    // the typing stage; an unbound name dies at the scope stage
    let ctx = Context::new(vec!["k".into()])
        .with_entry(Entry::Term(
            "x".into(),
            parse_type_in(&Context::new(vec!["k".into()]), "Later (b:k) Later (c:k) Nat").unwrap(),
        ))
        .with_entry(Entry::Tick("a".into(), "k".into()));
    let t = parse_term_in(&ctx, "x [a] [a]").unwrap();
    let err = infer(&ctx, &t).unwrap_err();
    assert_eq!(err.rule, "tick-app");
    assert!(parse_term_in(&ctx, "x [nosuch]").is_err());
}

#[test]
fn files_without_a_clocks_header_run_in_the_ambient_clock() {
    let f = parse_file("ctx; 0 : Nat").unwrap();
    assert_eq!(f.judgement.context().clocks, vec!["k0".to_string()]);
    let f2 = parse_file("ctx; tlam (a:k0) 0 : Later (a:k0) Nat").unwrap();
    check(&f2.judgement).unwrap();
}

#[test]
fn identity_substitution_interprets_to_the_identity_map() {
    use clott::interp::{interp_ctx, interp_subst};
    let ctx = Context::new(vec!["k".into()])
        .with_entry(Entry::Term("x".into(), TypeExpr::Nat))
        .with_entry(Entry::Tick("a".into(), "k".into()));
    let m = interp_subst(&SyntacticSubst::identity(&ctx)).unwrap();
    let psh = interp_ctx(&ctx);
    let b = bounds();
    for w in b.worlds(&ctx.clocks).iter() {
        for env in psh.enumerate(w, &b).unwrap() {
            let out = m.apply(w, &env, &b).unwrap();
            assert!(psh.equal(w, &env, &out, &b).unwrap(), "at {w}: {env:?} vs {out:?}");
        }
    }
}
