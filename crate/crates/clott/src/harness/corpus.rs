//! The fixture corpus: contexts, terms, types, and substitutions the
//! property suites quantify over. Everything here typechecks; the typing
//! suite asserts that before any semantic suite runs.

use std::collections::BTreeMap;

use crate::syntax::ast::*;
use crate::syntax::parser::{parse_term_in, parse_type_in};
use crate::syntax::{Binding, SyntacticSubst};

/// Environment seeds: closed-enough terms for entries whose types have no
/// finite enumeration (function spaces).
pub type EnvSeed = BTreeMap<Ident, String>;

pub struct CtxFixture {
    pub name: &'static str,
    pub ctx: Context,
    pub seeds: Vec<EnvSeed>,
}

pub struct TypingFixture {
    pub name: &'static str,
    pub ctx: Context,
    pub term: Term,
    pub ty: TypeExpr,
    pub seeds: Vec<EnvSeed>,
}

pub fn d1() -> Context {
    Context::new(vec!["k".into()])
}

pub fn d2() -> Context {
    Context::new(vec!["k".into(), "k2".into()])
}

pub fn ty(ctx: &Context, src: &str) -> TypeExpr {
    parse_type_in(ctx, src).unwrap_or_else(|e| panic!("fixture type {src:?}: {e}"))
}

pub fn tm(ctx: &Context, src: &str) -> Term {
    parse_term_in(ctx, src).unwrap_or_else(|e| panic!("fixture term {src:?}: {e}"))
}

fn entry(ctx: &Context, x: &str, tysrc: &str) -> Context {
    let a = ty(ctx, tysrc);
    ctx.with_entry(Entry::Term(x.into(), a))
}

fn tick(ctx: &Context, a: &str, k: &str) -> Context {
    ctx.with_entry(Entry::Tick(a.into(), k.into()))
}

fn seed(pairs: &[(&str, &str)]) -> EnvSeed {
    pairs.iter().map(|(x, t)| (x.to_string(), t.to_string())).collect()
}

/// Contexts the presheaf-level suites sweep.
pub fn contexts() -> Vec<CtxFixture> {
    let c_nat = entry(&d1(), "x", "Nat");
    let c_str = entry(&d1(), "y", "Str[k]");
    let c_latnat = entry(&d1(), "z", "Later (a:k) Nat");
    let c_tickwk = tick(&entry(&d1(), "x", "Nat"), "a", "k");
    let c_tickwk2 = entry(&c_tickwk, "y", "Nat");
    let c_2clk = entry(&d2(), "z", "Later (a:k) Nat");
    let c_2tick = tick(&tick(&d2(), "a", "k"), "b", "k2");
    let c_fun = entry(&d1(), "f", "Pi (x:Nat) Nat");
    let c_latfun = entry(&d1(), "q", "Later (a:k) (Pi (x:Nat) Nat)");
    vec![
        CtxFixture { name: "empty", ctx: d1(), seeds: vec![seed(&[])] },
        CtxFixture { name: "nat-var", ctx: c_nat, seeds: vec![seed(&[("x", "2")])] },
        CtxFixture { name: "stream-var", ctx: c_str, seeds: vec![seed(&[("y", ZEROS_STR)])] },
        CtxFixture { name: "delayed-nat", ctx: c_latnat, seeds: vec![seed(&[("z", "tlam (a:k) 1")])] },
        CtxFixture {
            name: "tick-weakening",
            ctx: c_tickwk2,
            seeds: vec![seed(&[("x", "1"), ("y", "0")])],
        },
        CtxFixture { name: "two-clock-delayed", ctx: c_2clk, seeds: vec![seed(&[("z", "tlam (a:k) 1")])] },
        CtxFixture { name: "two-clock-ticks", ctx: c_2tick, seeds: vec![seed(&[])] },
        CtxFixture {
            name: "fun-var",
            ctx: c_fun,
            seeds: vec![seed(&[("f", "lam (x:Nat) suc x")]), seed(&[("f", "lam (x:Nat) 0")])],
        },
        CtxFixture {
            name: "delayed-fun",
            ctx: c_latfun,
            seeds: vec![seed(&[("q", "tlam (a:k) lam (x:Nat) suc x")])],
        },
    ]
}

pub const ZEROS_BODY: &str = "lam (x : Later (a:k) Str[k]) pair 0 x";
pub const ZEROS_STR: &str =
    "(lam (x : Later (a:k) Str[k]) pair 0 x) (dfix k (lam (x : Later (a:k) Str[k]) pair 0 x))";
pub const ZEROS_DFIX: &str = "dfix k (lam (x : Later (a:k) Str[k]) pair 0 x)";

/// The coinductive zeros stream under clock abstraction.
pub const ZEROS_FORALL: &str = "clam kz ((lam (x : Later (a:kz) Str[kz]) pair 0 x) \
     (dfix kz (lam (x : Later (a:kz) Str[kz]) pair 0 x)))";

/// A guarded map-successor, unfolded once so it has the bare function type.
pub const SMAP_SUC: &str = "(lam (m : Later (a:k) (Pi (s:Str[k]) Str[k])) lam (s : Str[k]) \
       pair (suc (fst s)) (tlam (a:k) (m [a]) ((snd s) [a]))) \
     (dfix k (lam (m : Later (a:k) (Pi (s:Str[k]) Str[k])) lam (s : Str[k]) \
       pair (suc (fst s)) (tlam (a:k) (m [a]) ((snd s) [a]))))";

/// The stream of naturals under clock abstraction: each tail maps
/// successor over the rest.
pub fn nats_forall() -> Term {
    // clam kz ( body (dfix kz body) ) with body = λx. (0, λa. smap ((x)[a]))
    let k = "kz";
    let ctx = Context::new(vec![k.into()]);
    let smap = SMAP_SUC.replace(":k)", &format!(":{k})")).replace("[k]", &format!("[{k}]")).replace("dfix k ", &format!("dfix {k} "));
    let src = format!(
        "(lam (x : Later (a:{k}) Str[{k}]) pair 0 (tlam (a:{k}) ({smap}) (x [a]))) \
         (dfix {k} (lam (x : Later (a:{k}) Str[{k}]) pair 0 (tlam (a:{k}) ({smap}) (x [a]))))"
    );
    let body = tm(&ctx, &src);
    Term::ClockLam(k.into(), Box::new(body))
}

/// Typing fixtures: the accepted corpus for the soundness sweep.
pub fn typings() -> Vec<TypingFixture> {
    let mut out = Vec::new();
    let mut add = |name: &'static str, ctx: Context, t: &str, a: &str, seeds: Vec<EnvSeed>| {
        out.push(TypingFixture {
            name,
            term: tm(&ctx, t),
            ty: ty(&ctx, a),
            ctx,
            seeds,
        });
    };

    // the applicative structure of the delay, at ground type
    add(
        "next-term",
        d1(),
        "lam (x : Nat) tlam (a:k) x",
        "Pi (x : Nat) Later (a:k) Nat",
        vec![seed(&[])],
    );
    add(
        "applicative-ap",
        d1(),
        "lam (f : Later (a:k) (Pi (x:Nat) Nat)) lam (y : Later (a:k) Nat) tlam (a:k) (f [a]) (y [a])",
        "Pi (f : Later (a:k) (Pi (x:Nat) Nat)) Pi (y : Later (a:k) Nat) Later (a:k) Nat",
        vec![seed(&[])],
    );
    // a dependent instance: the result type mentions the delayed argument
    add(
        "applicative-dependent",
        d1(),
        "lam (y : Later (a:k) Nat) tlam (a:k) refl (y [a])",
        "Pi (y : Later (a:k) Nat) Later (a:k) Id Nat (y [a]) (y [a])",
        vec![seed(&[])],
    );
    add("zeros", d1(), ZEROS_STR, "Str[k]", vec![seed(&[])]);
    add("zeros-dfix", d1(), ZEROS_DFIX, "Later (a:k) Str[k]", vec![seed(&[])]);
    add(
        "zeros-forall",
        d1(),
        ZEROS_FORALL,
        "Forall kz Str[kz]",
        vec![seed(&[])],
    );
    add(
        "head",
        d1(),
        "lam (s : Forall k2 Str[k2]) fst (s [k])",
        "Pi (s : Forall k2 Str[k2]) Nat",
        vec![seed(&[])],
    );
    add(
        "tail",
        d1(),
        "lam (s : Forall k2 Str[k2]) clam k3 adv (snd (s [k4])) k4 k3",
        "Pi (s : Forall k2 Str[k2]) Forall k3 Str[k3]",
        vec![seed(&[])],
    );
    add("smap-suc", d1(), SMAP_SUC, "Pi (s : Str[k]) Str[k]", vec![seed(&[])]);
    // the predicate-lifting proof sketch with P = Nat, so the lifting is
    // the stream former itself and proofs are pointwise numbers
    add(
        "phat-proof",
        d1(),
        "(lam (q : Later (a:k) (Pi (y:Str[k]) Str[k])) lam (y : Str[k]) \
           pair ((lam (x:Nat) x) (fst y)) (tlam (a:k) (q [a]) ((snd y) [a]))) \
         (dfix k (lam (q : Later (a:k) (Pi (y:Str[k]) Str[k])) lam (y : Str[k]) \
           pair ((lam (x:Nat) x) (fst y)) (tlam (a:k) (q [a]) ((snd y) [a]))))",
        "Pi (y : Str[k]) Str[k]",
        vec![seed(&[])],
    );
    // tick weakening: the eliminated tick sits before a further entry
    add(
        "tick-weakened-elim",
        entry(&tick(&entry(&d1(), "z", "Later (b:k) Nat"), "a", "k"), "y", "Nat"),
        "z [a]",
        "Nat",
        vec![seed(&[("z", "tlam (b:k) 2"), ("y", "0")])],
    );
    // two-clock synchronisation: the delayed variable opens under either
    add(
        "two-clock-open",
        tick(&entry(&d2(), "z", "Later (a:k) Nat"), "c", "k"),
        "z [c]",
        "Nat",
        vec![seed(&[("z", "tlam (a:k) 1")])],
    );
    // clock quantification over a clock-free body
    add("const-forall", d1(), "clam k2 2", "Forall k2 Nat", vec![seed(&[])]);
    add(
        "cirr-const",
        d1(),
        "cirr (clam k2 2)",
        "Forall k' Forall k'' Id Nat ((clam k2 2) [k']) ((clam k2 2) [k''])",
        vec![seed(&[])],
    );
    add(
        "tirr-delayed",
        entry(&d1(), "z", "Later (b:k) Nat"),
        "tirr z",
        "Later (a' : k) Later (a'' : k) Id Nat (z [a']) (z [a''])",
        vec![seed(&[("z", "tlam (b:k) 1")])],
    );
    add(
        "natrec-plus",
        entry(&entry(&d1(), "x", "Nat"), "w", "Nat"),
        "natrec x (lam (m:Nat) lam (r:Nat) suc r) w",
        "Nat",
        vec![seed(&[("x", "1"), ("w", "2")])],
    );
    out
}

/// Terms of delayed type for the tick-irrelevance and transposition suites:
/// (name, Γ, κ, t : ▷(α:κ)A, A with the tick named `a`).
pub struct DelayedFixture {
    pub name: &'static str,
    pub ctx: Context,
    pub k: Ident,
    pub term: Term,
    pub seeds: Vec<EnvSeed>,
}

pub fn delayed_terms() -> Vec<DelayedFixture> {
    let c1 = entry(&d1(), "z", "Later (b:k) Nat");
    let c2 = entry(&d2(), "z", "Later (b:k) Nat");
    let c3 = entry(&d1(), "y", "Str[k]");
    vec![
        DelayedFixture {
            name: "delayed-var",
            k: "k".into(),
            term: tm(&c1, "z"),
            ctx: c1,
            seeds: vec![seed(&[("z", "tlam (b:k) 1")])],
        },
        DelayedFixture {
            name: "delayed-var-two-clocks",
            k: "k".into(),
            term: tm(&c2, "z"),
            ctx: c2,
            seeds: vec![seed(&[("z", "tlam (b:k) 2")])],
        },
        DelayedFixture {
            name: "next-of-zero",
            k: "k".into(),
            term: tm(&d1(), "tlam (b:k) 0"),
            ctx: d1(),
            seeds: vec![seed(&[])],
        },
        DelayedFixture {
            name: "stream-tail",
            k: "k".into(),
            term: tm(&c3, "snd y"),
            ctx: c3,
            seeds: vec![seed(&[("y", ZEROS_STR)])],
        },
        DelayedFixture {
            name: "zeros-dfix",
            k: "k".into(),
            term: tm(&d1(), ZEROS_DFIX),
            ctx: d1(),
            seeds: vec![seed(&[])],
        },
    ]
}

/// Clock-quantified fixtures with the bound clock free of the body type,
/// for clock irrelevance: (name, Γ, t : ∀κ.A, A).
pub struct ForallFixture {
    pub name: &'static str,
    pub ctx: Context,
    pub term: Term,
    pub body_ty: TypeExpr,
    pub seeds: Vec<EnvSeed>,
}

pub fn forall_fixtures() -> Vec<ForallFixture> {
    let c_nat = entry(&d2(), "x", "Nat");
    vec![
        ForallFixture {
            name: "const-forall",
            ctx: d2(),
            term: tm(&d2(), "clam k3 2"),
            body_ty: TypeExpr::Nat,
            seeds: vec![seed(&[])],
        },
        ForallFixture {
            name: "var-forall",
            term: tm(&c_nat, "clam k3 suc x"),
            body_ty: TypeExpr::Nat,
            ctx: c_nat,
            seeds: vec![seed(&[("x", "1")])],
        },
        ForallFixture {
            name: "stream-forall",
            ctx: d2(),
            term: tm(&d2(), &format!("clam k9 ({ZEROS_STR})")),
            body_ty: ty(&d2(), "Str[k]"),
            seeds: vec![seed(&[])],
        },
        ForallFixture {
            name: "head-forall",
            ctx: d2(),
            term: tm(
                &d2(),
                &format!("clam k9 fst ({})", ZEROS_STR.replace(":k)", ":k9)").replace("[k]", "[k9]").replace("dfix k ", "dfix k9 ")),
            ),
            body_ty: TypeExpr::Nat,
            seeds: vec![seed(&[])],
        },
    ]
}

/// The substitution matrix for the substitution lemma: each entry is a
/// wellformed substitution together with judgements over its target.
pub struct SubstFixture {
    pub name: &'static str,
    pub subst: SyntacticSubst,
    pub type_judgements: Vec<TypeExpr>,
    pub term_judgements: Vec<(Term, TypeExpr)>,
    pub src_seeds: Vec<EnvSeed>,
}

fn subst(
    src: &Context,
    dst: &Context,
    clock_map: &[(&str, &str)],
    bindings: Vec<Binding>,
) -> SyntacticSubst {
    SyntacticSubst {
        clock_map: clock_map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        bindings,
        src: src.clone(),
        dst: dst.clone(),
    }
}

pub fn subst_fixtures() -> Vec<SubstFixture> {
    let mut out = Vec::new();

    // the identity substitution on a mixed context
    let idctx = tick(&entry(&d1(), "x", "Nat"), "a", "k");
    out.push(SubstFixture {
        name: "identity",
        subst: SyntacticSubst::identity(&idctx),
        type_judgements: vec![ty(&idctx, "Nat"), ty(&idctx, "Later (c:k) Id Nat x x")],
        term_judgements: vec![
            (tm(&idctx, "suc x"), ty(&idctx, "Nat")),
            (tm(&idctx, "tlam (c:k) x"), ty(&idctx, "Later (c:k) Nat")),
        ],
        src_seeds: vec![seed(&[("x", "2")])],
    });

    // rule 1 only: weakening away a variable, one clock
    let src = entry(&d1(), "x", "Nat");
    let dst = d1();
    out.push(SubstFixture {
        name: "drop-var",
        subst: subst(&src, &dst, &[("k", "k")], vec![]),
        type_judgements: vec![ty(&dst, "Nat"), ty(&dst, "Str[k]"), ty(&dst, "Later (a:k) Nat")],
        term_judgements: vec![
            (tm(&dst, "2"), ty(&dst, "Nat")),
            (tm(&dst, ZEROS_STR), ty(&dst, "Str[k]")),
            (tm(&dst, "tlam (a:k) 0"), ty(&dst, "Later (a:k) Nat")),
        ],
        src_seeds: vec![seed(&[("x", "1")])],
    });

    // rule 2: a term binding
    let src = d1();
    let dst = entry(&d1(), "x", "Nat");
    out.push(SubstFixture {
        name: "bind-nat",
        subst: subst(&src, &dst, &[("k", "k")], vec![Binding::Term("x".into(), tm(&src, "suc 1"))]),
        type_judgements: vec![ty(&dst, "Id Nat x x"), ty(&dst, "Later (a:k) Id Nat x 2")],
        term_judgements: vec![
            (tm(&dst, "suc x"), ty(&dst, "Nat")),
            (tm(&dst, "refl x"), ty(&dst, "Id Nat x x")),
            (tm(&dst, "tlam (a:k) x"), ty(&dst, "Later (a:k) Nat")),
        ],
        src_seeds: vec![seed(&[])],
    });

    // rule 2 at stream type with a dependent target type
    let src = d1();
    let dst = entry(&d1(), "y", "Str[k]");
    out.push(SubstFixture {
        name: "bind-stream",
        subst: subst(
            &src,
            &dst,
            &[("k", "k")],
            vec![Binding::Term("y".into(), tm(&src, ZEROS_STR))],
        ),
        type_judgements: vec![ty(&dst, "Id Nat (fst y) 0")],
        term_judgements: vec![
            (tm(&dst, "fst y"), ty(&dst, "Nat")),
            (tm(&dst, "snd y"), ty(&dst, "Later (a:k) Str[k]")),
        ],
        src_seeds: vec![seed(&[])],
    });

    // rule 3: a tick binding, identity clock map
    let src = tick(&d1(), "a", "k");
    let dst = tick(&d1(), "b", "k");
    out.push(SubstFixture {
        name: "tick-rename",
        subst: subst(&src, &dst, &[("k", "k")], vec![Binding::Tick("b".into(), "a".into())]),
        type_judgements: vec![ty(&dst, "Nat"), ty(&dst, "Later (c:k) Nat")],
        term_judgements: vec![(tm(&dst, "tlam (c:k) 1"), ty(&dst, "Later (c:k) Nat"))],
        src_seeds: vec![seed(&[])],
    });

    // rule 3 with a synchronising clock map: two target clocks onto one
    let src = tick(&d1(), "a", "k");
    let dst = tick(&d2(), "b", "k");
    out.push(SubstFixture {
        name: "tick-synchronise",
        subst: subst(
            &src,
            &dst,
            &[("k", "k"), ("k2", "k")],
            vec![Binding::Tick("b".into(), "a".into())],
        ),
        type_judgements: vec![ty(&dst, "Later (c:k2) Nat"), ty(&dst, "Str[k2]")],
        term_judgements: vec![(tm(&dst, "tlam (c:k2) 0"), ty(&dst, "Later (c:k2) Nat"))],
        src_seeds: vec![seed(&[])],
    });

    // rule 3 under a variable prefix and with a source suffix
    let src = entry(&tick(&entry(&d1(), "x", "Nat"), "a", "k"), "y", "Nat");
    let dst = tick(&entry(&d1(), "x", "Nat"), "b", "k");
    out.push(SubstFixture {
        name: "tick-under-prefix",
        subst: subst(
            &src,
            &dst,
            &[("k", "k")],
            vec![
                Binding::Term("x".into(), tm(&entry(&d1(), "x", "Nat"), "suc x")),
                Binding::Tick("b".into(), "a".into()),
            ],
        ),
        type_judgements: vec![ty(&dst, "Id Nat x x")],
        term_judgements: vec![(tm(&dst, "x"), ty(&dst, "Nat"))],
        src_seeds: vec![seed(&[("x", "1"), ("y", "0")])],
    });

    // rule 4: the tick constant; ν collapses the fresh clock onto k
    let src = d1();
    let base_dst = Context::new(vec!["kp".into()]);
    let dst = tick(&base_dst.with_clock("kd"), "b", "kd");
    out.push(SubstFixture {
        name: "diamond-binding",
        subst: subst(
            &src,
            &dst,
            &[("kp", "k"), ("kd", "k")],
            vec![Binding::Diamond("b".into(), "kd".into(), "kp".into())],
        ),
        type_judgements: vec![ty(&dst, "Nat"), ty(&dst, "Str[kp]")],
        term_judgements: vec![
            (tm(&dst, "(tlam (c:kd) 2) [b]"), ty(&dst, "Nat")),
            (
                tm(&dst, "(dfix kd (lam (x : Later (c:kd) Str[kd]) pair 0 x)) [b]"),
                ty(&dst, "Str[kd]"),
            ),
        ],
        src_seeds: vec![seed(&[])],
    });

    // rule 4 after a term binding, with the opened delay drawn from it
    let src = d1();
    let dstp = entry(&Context::new(vec!["kp".into()]), "z", "Later (c:kp) Nat");
    let dst = tick(&dstp.with_clock("kd"), "b", "kd");
    out.push(SubstFixture {
        name: "diamond-after-binding",
        subst: subst(
            &src,
            &dst,
            &[("kp", "k"), ("kd", "k")],
            vec![
                Binding::Term("z".into(), tm(&src, "tlam (c:k) 2")),
                Binding::Diamond("b".into(), "kd".into(), "kp".into()),
            ],
        ),
        type_judgements: vec![ty(&dst, "Later (c:kp) Nat")],
        term_judgements: vec![(tm(&dst, "(tlam (c:kd) suc 0) [b]"), ty(&dst, "Nat"))],
        src_seeds: vec![seed(&[])],
    });

    out
}
