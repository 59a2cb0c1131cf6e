//! Property tests for the syntax layer: printing parses back, the
//! identity substitution is invisible, and applying two substitutions in
//! sequence agrees with applying their composite.

use proptest::prelude::*;

use clott::syntax::ast::*;
use clott::syntax::parser::parse_term_in;
use clott::syntax::subst::{subst_clock_term, subst_clock_type};
use clott::syntax::{alpha_eq_term, print_term, Binding, SyntacticSubst};

/// The context the generated terms live in: one clock, a number, a
/// function, a delayed number, and a tick.
fn gen_ctx() -> Context {
    let d = Context::new(vec!["k".into()]);
    let lat = TypeExpr::Later("al".into(), "k".into(), Box::new(TypeExpr::Nat));
    let arrow = TypeExpr::Pi("u".into(), Box::new(TypeExpr::Nat), Box::new(TypeExpr::Nat));
    d.with_entry(Entry::Term("x".into(), TypeExpr::Nat))
        .with_entry(Entry::Term("f".into(), arrow))
        .with_entry(Entry::Term("z".into(), lat))
        .with_entry(Entry::Tick("a".into(), "k".into()))
}

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::Zero),
        Just(Term::Var("x".into())),
        Just(Term::Var("f".into())),
        Just(Term::Var("z".into())),
        (0u64..5).prop_map(nat_lit),
    ]
}

/// Scoped-by-construction terms over `gen_ctx`. Binders draw from a name
/// pool disjoint from the context so printing stays unambiguous.
fn term_strategy() -> impl Strategy<Value = Term> {
    leaf().prop_recursive(3, 24, 4, |inner| {
        let bvar = prop_oneof![Just("v1".to_string()), Just("v2".to_string())];
        let i2 = inner.clone();
        let i3 = inner.clone();
        let i4 = inner.clone();
        let i5 = inner.clone();
        let i6 = inner.clone();
        prop_oneof![
            (inner.clone(), i2).prop_map(|(a, b)| Term::Pair(Box::new(a), Box::new(b))),
            i3.prop_map(|a| Term::Suc(Box::new(a))),
            i4.prop_map(|a| Term::Fst(Box::new(Term::Pair(Box::new(a), Box::new(Term::Zero))))),
            (bvar, i5).prop_map(|(x, b)| {
                Term::Lam(x.clone(), Box::new(TypeExpr::Nat), Box::new(b))
            }),
            i6.prop_map(|b| Term::TickLam("b1".into(), "k".into(), Box::new(b))),
            Just(Term::TickApp(Box::new(Term::Var("z".into())), "a".into())),
            (inner.clone()).prop_map(|a| {
                Term::App(Box::new(Term::Var("f".into())), Box::new(a))
            }),
            Just(Term::ClockLam("k9".into(), Box::new(Term::Zero))),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in term_strategy()) {
        let ctx = gen_ctx();
        let printed = print_term(&t);
        let reparsed = parse_term_in(&ctx, &printed)
            .unwrap_or_else(|e| panic!("reparse of {printed:?} failed: {e}"));
        prop_assert!(alpha_eq_term(&t, &reparsed), "print/parse drift on {printed}");
    }

    #[test]
    fn identity_substitution_is_identity(t in term_strategy()) {
        let ctx = gen_ctx();
        let s = SyntacticSubst::identity(&ctx);
        prop_assert!(alpha_eq_term(&s.apply_term(&t), &t));
    }

    #[test]
    fn sequential_application_matches_the_composite(t in term_strategy()) {
        // σ2 : C2 → C3 (the generator context), σ1 : C1 → C2
        let c3 = gen_ctx();
        let lat = TypeExpr::Later("al".into(), "k".into(), Box::new(TypeExpr::Nat));
        let arrow = TypeExpr::Pi("u".into(), Box::new(TypeExpr::Nat), Box::new(TypeExpr::Nat));
        let c2 = Context::new(vec!["k".into()])
            .with_entry(Entry::Term("y".into(), TypeExpr::Nat))
            .with_entry(Entry::Term("g".into(), arrow.clone()))
            .with_entry(Entry::Term("w".into(), lat.clone()))
            .with_entry(Entry::Tick("b".into(), "k".into()));
        let c1 = Context::new(vec!["k".into()])
            .with_entry(Entry::Term("q".into(), TypeExpr::Nat))
            .with_entry(Entry::Term("h".into(), arrow))
            .with_entry(Entry::Term("r".into(), lat))
            .with_entry(Entry::Tick("c".into(), "k".into()));
        let s2 = SyntacticSubst {
            clock_map: [("k".to_string(), "k".to_string())].into(),
            bindings: vec![
                Binding::Term("x".into(), parse_term_in(&c2, "suc y").unwrap()),
                Binding::Term("f".into(), parse_term_in(&c2, "lam (u:Nat) g (g u)").unwrap()),
                Binding::Term("z".into(), parse_term_in(&c2, "w").unwrap()),
                Binding::Tick("a".into(), "b".into()),
            ],
            src: c2.clone(),
            dst: c3.clone(),
        };
        let s1 = SyntacticSubst {
            clock_map: [("k".to_string(), "k".to_string())].into(),
            bindings: vec![
                Binding::Term("y".into(), parse_term_in(&c1, "h q").unwrap()),
                Binding::Term("g".into(), parse_term_in(&c1, "h").unwrap()),
                Binding::Term("w".into(), parse_term_in(&c1, "tlam (b2:k) 0").unwrap()),
                Binding::Tick("b".into(), "c".into()),
            ],
            src: c1,
            dst: c2,
        };
        let sequential = s1.apply_term(&s2.apply_term(&t));
        let composite = s1.compose(&s2).expect("composable");
        prop_assert!(
            alpha_eq_term(&sequential, &composite.apply_term(&t)),
            "composition drift on {}",
            print_term(&t)
        );
    }
}

#[test]
fn later_binder_is_renamed_when_it_would_capture() {
    // substituting under ▷(α:κ) refreshes the bound tick away from the
    // range of the substitution
    let ctx = gen_ctx();
    let a = clott::syntax::parse_type_in(&ctx, "Later (b1:k) Id Nat x x").unwrap();
    let src = Context::new(vec!["k".into()])
        .with_entry(Entry::Term("b1".into(), TypeExpr::Nat));
    let s = SyntacticSubst {
        clock_map: [("k".to_string(), "k".to_string())].into(),
        bindings: vec![
            Binding::Term("x".into(), Term::Var("b1".into())),
            Binding::Term("f".into(), parse_term_in(&src, "lam (u:Nat) u").unwrap()),
            Binding::Term("z".into(), parse_term_in(&src, "tlam (c:k) 0").unwrap()),
            Binding::Tick("a".into(), "unused".into()),
        ],
        src: src.with_entry(Entry::Tick("unused".into(), "k".into())),
        dst: ctx,
    };
    let out = s.apply_type(&a);
    let TypeExpr::Later(tick, _, body) = &out else { panic!("expected a delay") };
    assert_ne!(tick, "b1", "the bound tick must be freshened");
    let TypeExpr::Id(_, l, _) = &**body else { panic!("expected an identity type") };
    assert_eq!(**l, Term::Var("b1".into()), "the substituted variable must not be captured");
}

#[test]
fn diamond_binding_rewrites_tick_application() {
    // t[α] under α ↦ ⋄ becomes the explicit witness form
    let base = Context::new(vec!["kp".into()]);
    let dst = base.with_clock("kd").with_entry(Entry::Tick("al".into(), "kd".into()));
    let src = Context::new(vec!["k".into()]);
    let s = SyntacticSubst {
        clock_map: [
            ("kp".to_string(), "k".to_string()),
            ("kd".to_string(), "k".to_string()),
        ]
        .into(),
        bindings: vec![Binding::Diamond("al".into(), "kd".into(), "kp".into())],
        src,
        dst: dst.clone(),
    };
    let t = parse_term_in(&dst, "(tlam (c:kd) 1) [al]").unwrap();
    let out = s.apply_term(&t);
    let Term::DiamondApp(witness, bound, collapse) = &out else {
        panic!("expected a tick-constant application, got {out:?}")
    };
    assert_eq!(collapse, "k");
    match &**witness {
        Term::TickLam(_, kw, _) => assert_eq!(kw, bound),
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn weakening_is_scope_safe() {
    let ctx = gen_ctx();
    let j = Judgement::Typing(ctx.clone(), Term::Var("x".into()), TypeExpr::Nat);
    // collision rejected
    assert!(clott::syntax::weaken(&j, 0, Entry::Term("x".into(), TypeExpr::Nat)).is_err());
    // fresh tick entry accepted and leaves the subject alone
    let j2 = clott::syntax::weaken(&j, 0, Entry::Tick("t9".into(), "k".into())).unwrap();
    let Judgement::Typing(c2, t2, _) = &j2 else { panic!() };
    assert_eq!(c2.entries.len(), ctx.entries.len() + 1);
    assert_eq!(*t2, Term::Var("x".into()));
}

#[test]
fn clock_weaken_then_collapse_recovers_the_judgement() {
    let ctx = gen_ctx();
    let t = parse_term_in(&ctx, "tlam (b9:k) suc x").unwrap();
    let j = Judgement::Typing(
        ctx.clone(),
        t.clone(),
        TypeExpr::Later("b9".into(), "k".into(), Box::new(TypeExpr::Nat)),
    );
    let weakened = clott::syntax::weaken_clock(&j, "kw").unwrap();
    let Judgement::Typing(_, tw, aw) = &weakened else { panic!() };
    let back_t = subst_clock_term(tw, "kw", "k");
    let back_a = subst_clock_type(aw, "kw", "k");
    assert!(alpha_eq_term(&back_t, &t));
    assert!(clott::syntax::alpha_eq_type(
        &back_a,
        &TypeExpr::Later("b9".into(), "k".into(), Box::new(TypeExpr::Nat))
    ));
}
