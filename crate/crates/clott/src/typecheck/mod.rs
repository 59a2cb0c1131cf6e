//! Decidable type checking for the clocked calculus: the tick and clock
//! rules plus standard dependent function, pair, and identity types.
//! Judgemental equality is decided by weak-head normalisation with
//! type-directed η; the fixed point unfolds only under an application to
//! the tick constant, which keeps conversion terminating.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::ast::*;
use crate::syntax::printer::{print_judgement, print_term, print_type};
use crate::syntax::subst::*;
use crate::syntax::Binding;
use crate::syntax::SyntacticSubst;

const CONV_FUEL: u32 = 100_000;

#[derive(Debug, Clone, thiserror::Error)]
pub struct TypeError {
    pub rule: String,
    pub message: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

impl TypeError {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "status": "error", "rule": self.rule, "message": self.message })
    }
}

fn fail<T>(rule: &str, message: impl Into<String>) -> Result<T, TypeError> {
    Err(TypeError { rule: rule.to_string(), message: message.into() })
}

/// A derivation tree; each node instantiates one rule.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub rule: String,
    pub premises: Vec<Derivation>,
    pub conclusion: String,
}

impl Derivation {
    fn leaf(rule: &str, conclusion: String) -> Derivation {
        Derivation { rule: rule.to_string(), premises: Vec::new(), conclusion }
    }

    fn node(rule: &str, conclusion: String, premises: Vec<Derivation>) -> Derivation {
        Derivation { rule: rule.to_string(), premises, conclusion }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rule": self.rule,
            "conclusion": self.conclusion,
            "premises": self.premises.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, indent: usize) -> String {
        let mut s = format!("{}{} ⟵ {}\n", "  ".repeat(indent), self.rule, self.conclusion);
        for p in &self.premises {
            s.push_str(&p.render(indent + 1));
        }
        s
    }
}

/// Checks any judgement form, producing a full derivation.
pub fn check(j: &Judgement) -> Result<Derivation, TypeError> {
    match j {
        Judgement::CtxWf(ctx) => check_ctx(ctx),
        Judgement::TypeWf(ctx, a) => {
            check_ctx(ctx)?;
            wf_type(ctx, a)
        }
        Judgement::Typing(ctx, t, a) => {
            check_ctx(ctx)?;
            wf_type(ctx, a)?;
            check_term(ctx, t, a)
        }
        Judgement::Equality(ctx, t, u, a) => {
            check_ctx(ctx)?;
            wf_type(ctx, a)?;
            let d1 = check_term(ctx, t, a)?;
            let d2 = check_term(ctx, u, a)?;
            if conv_term(ctx, t, u, a)? {
                Ok(Derivation::node("conv", print_judgement(j), vec![d1, d2]))
            } else {
                fail(
                    "conv",
                    format!(
                        "not judgementally equal; normal forms {} and {}",
                        print_term(&whnf(t, &mut CONV_FUEL.clone())?),
                        print_term(&whnf(u, &mut CONV_FUEL.clone())?)
                    ),
                )
            }
        }
    }
}

pub fn check_ctx(ctx: &Context) -> Result<Derivation, TypeError> {
    let mut names: BTreeSet<&str> = BTreeSet::new();
    for k in &ctx.clocks {
        if !names.insert(k) {
            return fail("ctx-clock", format!("duplicate clock {k}"));
        }
    }
    let mut der = Derivation::leaf("ctx-empty", "· ⊢".into());
    for (i, e) in ctx.entries.iter().enumerate() {
        if !names.insert(e.name()) {
            return fail("ctx-var", format!("duplicate name {}", e.name()));
        }
        let prefix = ctx.prefix(i);
        match e {
            Entry::Term(x, a) => {
                let da = wf_type(&prefix, a)?;
                der = Derivation::node("ctx-var", format!("… , {x} ⊢"), vec![der, da]);
            }
            Entry::Tick(a, k) => {
                if !ctx.has_clock(k) {
                    return fail("ctx-tick", format!("tick {a} on unknown clock {k}"));
                }
                der = Derivation::node("ctx-tick", format!("… , {a} : {k} ⊢"), vec![der]);
            }
        }
    }
    Ok(der)
}

pub fn wf_type(ctx: &Context, a: &TypeExpr) -> Result<Derivation, TypeError> {
    let conc = || format!("{} type", print_type(a));
    match a {
        TypeExpr::Nat => Ok(Derivation::leaf("nat-form", conc())),
        TypeExpr::Str(k) => {
            if ctx.has_clock(k) {
                Ok(Derivation::leaf("str-form", conc()))
            } else {
                fail("str-form", format!("clock {k} not in scope"))
            }
        }
        TypeExpr::Pi(x, dom, b) | TypeExpr::Sigma(x, dom, b) => {
            let rule = if matches!(a, TypeExpr::Pi(..)) { "pi-form" } else { "sigma-form" };
            let d1 = wf_type(ctx, dom)?;
            let (x2, b2) = freshen_var_binder(ctx, x, b);
            let ctx2 = ctx.with_entry(Entry::Term(x2, (**dom).clone()));
            let d2 = wf_type(&ctx2, &b2)?;
            Ok(Derivation::node(rule, conc(), vec![d1, d2]))
        }
        TypeExpr::Id(a0, t, u) => {
            let d1 = wf_type(ctx, a0)?;
            let d2 = check_term(ctx, t, a0)?;
            let d3 = check_term(ctx, u, a0)?;
            Ok(Derivation::node("id-form", conc(), vec![d1, d2, d3]))
        }
        TypeExpr::Later(tick, k, b) => {
            if !ctx.has_clock(k) {
                return fail("later-form", format!("clock {k} not in scope"));
            }
            let (t2, b2) = freshen_tick_binder(ctx, tick, b);
            let ctx2 = ctx.with_entry(Entry::Tick(t2, k.clone()));
            let d = wf_type(&ctx2, &b2)?;
            Ok(Derivation::node("later-form", conc(), vec![d]))
        }
        TypeExpr::Forall(k, b) => {
            let (k2, b2) = freshen_clock_binder_ty(ctx, k, b);
            let ctx2 = ctx.with_clock(k2);
            let d = wf_type(&ctx2, &b2)?;
            Ok(Derivation::node("forall-form", conc(), vec![d]))
        }
    }
}

fn freshen_var_binder(ctx: &Context, x: &str, b: &TypeExpr) -> (Ident, TypeExpr) {
    let taken = ctx.all_names();
    if x != "_" && !taken.contains(x) {
        return (x.to_string(), b.clone());
    }
    let x2 = fresh_name(if x == "_" { "x" } else { x }, &taken);
    (x2.clone(), subst_var_type(b, x, &Term::Var(x2)))
}

fn freshen_tick_binder(ctx: &Context, a: &str, b: &TypeExpr) -> (Ident, TypeExpr) {
    let taken = ctx.all_names();
    if a != "_" && !taken.contains(a) {
        return (a.to_string(), b.clone());
    }
    let a2 = fresh_name(if a == "_" { "a" } else { a }, &taken);
    (a2.clone(), subst_tick_type(b, a, &a2))
}

fn freshen_clock_binder_ty(ctx: &Context, k: &str, b: &TypeExpr) -> (Ident, TypeExpr) {
    let taken = ctx.all_names();
    if !taken.contains(k) {
        return (k.to_string(), b.clone());
    }
    let k2 = fresh_name(k, &taken);
    (k2.clone(), subst_clock_type(b, k, &k2))
}

fn freshen_clock_binder_tm(ctx: &Context, k: &str, t: &Term) -> (Ident, Term) {
    let taken = ctx.all_names();
    if !taken.contains(k) {
        return (k.to_string(), t.clone());
    }
    let k2 = fresh_name(k, &taken);
    (k2.clone(), subst_clock_term(t, k, &k2))
}

/// Infers a type for `t`; every construct except dependent pairing is
/// syntax-directed thanks to the annotations the grammar carries.
pub fn infer(ctx: &Context, t: &Term) -> Result<(TypeExpr, Derivation), TypeError> {
    let conc = |a: &TypeExpr| format!("{} : {}", print_term(t), print_type(a));
    match t {
        Term::Var(x) => match ctx.lookup_var(x) {
            Some((_, a)) => {
                let a = a.clone();
                Ok((a.clone(), Derivation::leaf("var", conc(&a))))
            }
            None => fail("var", format!("variable {x} not in scope")),
        },
        Term::Lam(x, dom, body) => {
            let d1 = wf_type(ctx, dom)?;
            let (x2, body2) = {
                let taken = ctx.all_names();
                if x != "_" && !taken.contains(x.as_str()) {
                    (x.clone(), (**body).clone())
                } else {
                    let x2 = fresh_name(if x == "_" { "x" } else { x }, &taken);
                    (x2.clone(), subst_var_term(body, x, &Term::Var(x2)))
                }
            };
            let ctx2 = ctx.with_entry(Entry::Term(x2.clone(), (**dom).clone()));
            let (b, d2) = infer(&ctx2, &body2)?;
            let ty = TypeExpr::Pi(x2, dom.clone(), Box::new(b));
            Ok((ty.clone(), Derivation::node("lam", conc(&ty), vec![d1, d2])))
        }
        Term::App(f, u) => {
            let (fty, d1) = infer(ctx, f)?;
            match head_type(&fty) {
                TypeExpr::Pi(x, dom, b) => {
                    let d2 = check_term(ctx, u, &dom)?;
                    let ty = subst_var_type(&b, &x, u);
                    Ok((ty.clone(), Derivation::node("app", conc(&ty), vec![d1, d2])))
                }
                other => fail(
                    "app",
                    format!("{} has type {}, not a function", print_term(f), print_type(&other)),
                ),
            }
        }
        Term::Pair(a, b) => {
            let (ta, d1) = infer(ctx, a)?;
            let (tb, d2) = infer(ctx, b)?;
            let ty = TypeExpr::Sigma("_".into(), Box::new(ta), Box::new(tb));
            Ok((ty.clone(), Derivation::node("pair", conc(&ty), vec![d1, d2])))
        }
        Term::Fst(p) => {
            let (tp, d1) = infer(ctx, p)?;
            match head_type(&tp) {
                TypeExpr::Sigma(_, a, _) => {
                    let a = *a;
                    Ok((a.clone(), Derivation::node("fst", conc(&a), vec![d1])))
                }
                other => fail(
                    "fst",
                    format!("{} has type {}, not a pair", print_term(p), print_type(&other)),
                ),
            }
        }
        Term::Snd(p) => {
            let (tp, d1) = infer(ctx, p)?;
            match head_type(&tp) {
                TypeExpr::Sigma(x, _, b) => {
                    let ty = subst_var_type(&b, &x, &Term::Fst(p.clone()));
                    Ok((ty.clone(), Derivation::node("snd", conc(&ty), vec![d1])))
                }
                other => fail(
                    "snd",
                    format!("{} has type {}, not a pair", print_term(p), print_type(&other)),
                ),
            }
        }
        Term::Refl(t0) => {
            let (a, d1) = infer(ctx, t0)?;
            let ty = TypeExpr::Id(Box::new(a), t0.clone(), t0.clone());
            Ok((ty.clone(), Derivation::node("refl", conc(&ty), vec![d1])))
        }
        Term::Zero => Ok((TypeExpr::Nat, Derivation::leaf("zero", conc(&TypeExpr::Nat)))),
        Term::Suc(n) => {
            let d = check_term(ctx, n, &TypeExpr::Nat)?;
            Ok((TypeExpr::Nat, Derivation::node("suc", conc(&TypeExpr::Nat), vec![d])))
        }
        Term::NatRec(z, s, n) => {
            let (c, d1) = infer(ctx, z)?;
            let want = TypeExpr::Pi(
                "_".into(),
                Box::new(TypeExpr::Nat),
                Box::new(TypeExpr::Pi("_".into(), Box::new(c.clone()), Box::new(c.clone()))),
            );
            let d2 = check_term(ctx, s, &want)?;
            let d3 = check_term(ctx, n, &TypeExpr::Nat)?;
            Ok((c.clone(), Derivation::node("natrec", conc(&c), vec![d1, d2, d3])))
        }
        Term::TickLam(a, k, body) => {
            if !ctx.has_clock(k) {
                return fail("tick-abs", format!("clock {k} not in scope"));
            }
            let (a2, body2) = {
                let taken = ctx.all_names();
                if a != "_" && !taken.contains(a.as_str()) {
                    (a.clone(), (**body).clone())
                } else {
                    let a2 = fresh_name(if a == "_" { "a" } else { a }, &taken);
                    (a2.clone(), subst_tick_term(body, a, &a2))
                }
            };
            let ctx2 = ctx.with_entry(Entry::Tick(a2.clone(), k.clone()));
            let (b, d) = infer(&ctx2, &body2)?;
            let ty = TypeExpr::Later(a2, k.clone(), Box::new(b));
            Ok((ty.clone(), Derivation::node("tick-abs", conc(&ty), vec![d])))
        }
        Term::TickApp(t0, alpha) => {
            let Some((i, k)) = ctx.lookup_tick(alpha) else {
                return fail("tick-app", format!("tick {alpha} not in scope"));
            };
            let k = k.to_string();
            // causality: the head is typed strictly before the tick it opens
            let prefix = ctx.prefix(i);
            let (ty0, d1) = infer(&prefix, t0).map_err(|e| TypeError {
                rule: "tick-app".to_string(),
                message: format!(
                    "head must be typed before the tick {alpha} (a tick can only be used once): {e}"
                ),
            })?;
            match head_type(&ty0) {
                TypeExpr::Later(beta, k2, a) => {
                    if k2 != k {
                        return fail(
                            "tick-app",
                            format!("tick {alpha} is on clock {k}, the delay is on {k2}"),
                        );
                    }
                    let ty = subst_tick_type(&a, &beta, alpha);
                    Ok((ty.clone(), Derivation::node("tick-app", conc(&ty), vec![d1])))
                }
                other => fail(
                    "tick-app",
                    format!("{} has type {}, not a delay", print_term(t0), print_type(&other)),
                ),
            }
        }
        Term::DiamondApp(s, k, kp) => {
            if !ctx.has_clock(kp) {
                return fail("diamond-app", format!("collapse clock {kp} not in scope"));
            }
            if ctx.has_clock(k) {
                return fail(
                    "diamond-app",
                    format!(
                        "witness clock {k} already in the clock zone; the context must be \
                         wellformed without it"
                    ),
                );
            }
            if ctx.all_names().contains(k.as_str()) {
                return fail("diamond-app", format!("witness clock {k} collides with a name"));
            }
            let ctx2 = ctx.with_clock(k.clone());
            let (ty0, d1) = infer(&ctx2, s)?;
            match head_type(&ty0) {
                TypeExpr::Later(beta, k2, a) => {
                    if k2 != *k {
                        return fail(
                            "diamond-app",
                            format!("witness delays on {k2}, expected the fresh clock {k}"),
                        );
                    }
                    let ty = subst_diamond_type(&a, &beta, k, kp);
                    Ok((ty.clone(), Derivation::node("diamond-app", conc(&ty), vec![d1])))
                }
                other => fail(
                    "diamond-app",
                    format!("witness has type {}, not a delay on {k}", print_type(&other)),
                ),
            }
        }
        Term::ClockLam(k, body) => {
            let (k2, body2) = freshen_clock_binder_tm(ctx, k, body);
            let ctx2 = ctx.with_clock(k2.clone());
            let (a, d) = infer(&ctx2, &body2)?;
            let ty = TypeExpr::Forall(k2, Box::new(a));
            Ok((ty.clone(), Derivation::node("clock-abs", conc(&ty), vec![d])))
        }
        Term::ClockApp(t0, kp) => {
            if !ctx.has_clock(kp) {
                return fail("clock-app", format!("clock {kp} not in scope"));
            }
            let (ty0, d1) = infer(ctx, t0)?;
            match head_type(&ty0) {
                TypeExpr::Forall(k, a) => {
                    let ty = subst_clock_type(&a, &k, kp);
                    Ok((ty.clone(), Derivation::node("clock-app", conc(&ty), vec![d1])))
                }
                other => fail(
                    "clock-app",
                    format!(
                        "{} has type {}, not clock-quantified",
                        print_term(t0),
                        print_type(&other)
                    ),
                ),
            }
        }
        Term::Dfix(k, f) => {
            if !ctx.has_clock(k) {
                return fail("dfix", format!("clock {k} not in scope"));
            }
            let (ty0, d1) = infer(ctx, f)?;
            match head_type(&ty0) {
                TypeExpr::Pi(x, dom, cod) => {
                    let mut fv = BTreeSet::new();
                    free_vars_type(&cod, &mut fv);
                    if fv.contains(&x) {
                        return fail("dfix", "the body type may not depend on the delayed value");
                    }
                    let want_dom = later(k, (*cod).clone());
                    if !conv_type(ctx, &dom, &want_dom)? {
                        return fail(
                            "dfix",
                            format!(
                                "argument type {} is not the delayed result type {}",
                                print_type(&dom),
                                print_type(&want_dom)
                            ),
                        );
                    }
                    let ty = later(k, (*cod).clone());
                    Ok((ty.clone(), Derivation::node("dfix", conc(&ty), vec![d1])))
                }
                other => fail("dfix", format!("body has type {}, not a function", print_type(&other))),
            }
        }
        Term::Cirr(t0) => {
            let (ty0, d1) = infer(ctx, t0)?;
            match head_type(&ty0) {
                TypeExpr::Forall(k, a) => {
                    let mut fc = BTreeSet::new();
                    free_clocks_type(&a, &mut fc);
                    if fc.contains(&k) {
                        return fail(
                            "cirr",
                            format!("{k} occurs in the body type; clock irrelevance needs {k} free of it"),
                        );
                    }
                    let taken = ctx.all_names();
                    let k1 = fresh_name("k'", &taken);
                    let mut taken2 = taken.clone();
                    taken2.insert(k1.clone());
                    let k2 = fresh_name("k''", &taken2);
                    let body = TypeExpr::Id(
                        a.clone(),
                        Box::new(Term::ClockApp(t0.clone(), k1.clone())),
                        Box::new(Term::ClockApp(t0.clone(), k2.clone())),
                    );
                    let ty =
                        TypeExpr::Forall(k1, Box::new(TypeExpr::Forall(k2, Box::new(body))));
                    Ok((ty.clone(), Derivation::node("cirr", conc(&ty), vec![d1])))
                }
                other => {
                    fail("cirr", format!("subject has type {}, not clock-quantified", print_type(&other)))
                }
            }
        }
        Term::Tirr(t0) => {
            let (ty0, d1) = infer(ctx, t0)?;
            match head_type(&ty0) {
                TypeExpr::Later(beta, k, a) => {
                    let mut ft = BTreeSet::new();
                    free_ticks_type_names(&a, &mut ft);
                    if ft.contains(&beta) {
                        return fail("tirr", "the delayed type may not depend on the tick");
                    }
                    let taken = ctx.all_names();
                    let a1 = fresh_name("a'", &taken);
                    let mut taken2 = taken.clone();
                    taken2.insert(a1.clone());
                    let a2 = fresh_name("a''", &taken2);
                    let body = TypeExpr::Id(
                        a.clone(),
                        Box::new(Term::TickApp(t0.clone(), a1.clone())),
                        Box::new(Term::TickApp(t0.clone(), a2.clone())),
                    );
                    let ty = TypeExpr::Later(
                        a1,
                        k.clone(),
                        Box::new(TypeExpr::Later(a2, k, Box::new(body))),
                    );
                    Ok((ty.clone(), Derivation::node("tirr", conc(&ty), vec![d1])))
                }
                other => fail("tirr", format!("subject has type {}, not a delay", print_type(&other))),
            }
        }
    }
}

// Free tick names of a type (the tick binders of Later are removed).
fn free_ticks_type_names(a: &TypeExpr, out: &mut BTreeSet<Ident>) {
    match a {
        TypeExpr::Nat | TypeExpr::Str(_) => {}
        TypeExpr::Pi(_, a, b) | TypeExpr::Sigma(_, a, b) => {
            free_ticks_type_names(a, out);
            free_ticks_type_names(b, out);
        }
        TypeExpr::Id(a, t, u) => {
            free_ticks_type_names(a, out);
            free_ticks_term(t, out);
            free_ticks_term(u, out);
        }
        TypeExpr::Later(tick, _, b) => {
            let mut inner = BTreeSet::new();
            free_ticks_type_names(b, &mut inner);
            inner.remove(tick);
            out.extend(inner);
        }
        TypeExpr::Forall(_, b) => free_ticks_type_names(b, out),
    }
}

/// Unfolds the built-in stream former when a pair/function head is needed.
fn head_type(a: &TypeExpr) -> TypeExpr {
    match a {
        TypeExpr::Str(k) => str_unfold(k),
        other => other.clone(),
    }
}

pub fn check_term(ctx: &Context, t: &Term, expected: &TypeExpr) -> Result<Derivation, TypeError> {
    // dependent pairing needs the expected type
    if let Term::Pair(a, b) = t {
        if let TypeExpr::Sigma(x, dom, cod) = head_type(expected) {
            let d1 = check_term(ctx, a, &dom)?;
            let cod2 = subst_var_type(&cod, &x, a);
            let d2 = check_term(ctx, b, &cod2)?;
            return Ok(Derivation::node(
                "pair",
                format!("{} : {}", print_term(t), print_type(expected)),
                vec![d1, d2],
            ));
        }
    }
    let (got, d) = infer(ctx, t)?;
    if conv_type(ctx, &got, expected)? {
        Ok(d)
    } else {
        fail(
            "conv",
            format!(
                "{} has type {}, expected {}",
                print_term(t),
                print_type(&got),
                print_type(expected)
            ),
        )
    }
}

// ---------------------------------------------------------------------------
// conversion

/// Weak-head normalisation. The fixed point unfolds only when its delayed
/// value meets the tick constant; every unfolding consumes that redex.
pub fn whnf(t: &Term, fuel: &mut u32) -> Result<Term, TypeError> {
    let mut t = t.clone();
    loop {
        if *fuel == 0 {
            return fail("conv", "normalisation fuel exhausted");
        }
        *fuel -= 1;
        match t {
            Term::App(f, u) => {
                let fw = whnf(&f, fuel)?;
                match fw {
                    Term::Lam(x, _, body) => t = subst_var_term(&body, &x, &u),
                    other => return Ok(Term::App(Box::new(other), u)),
                }
            }
            Term::Fst(p) => {
                let pw = whnf(&p, fuel)?;
                match pw {
                    Term::Pair(a, _) => t = *a,
                    other => return Ok(Term::Fst(Box::new(other))),
                }
            }
            Term::Snd(p) => {
                let pw = whnf(&p, fuel)?;
                match pw {
                    Term::Pair(_, b) => t = *b,
                    other => return Ok(Term::Snd(Box::new(other))),
                }
            }
            Term::NatRec(z, s, n) => {
                let nw = whnf(&n, fuel)?;
                match nw {
                    Term::Zero => t = *z,
                    Term::Suc(m) => {
                        t = Term::App(
                            Box::new(Term::App(s.clone(), m.clone())),
                            Box::new(Term::NatRec(z, s, m)),
                        )
                    }
                    other => return Ok(Term::NatRec(z, s, Box::new(other))),
                }
            }
            Term::TickApp(t0, alpha) => {
                let tw = whnf(&t0, fuel)?;
                match tw {
                    Term::TickLam(beta, _, body) => t = subst_tick_term(&body, &beta, &alpha),
                    other => return Ok(Term::TickApp(Box::new(other), alpha)),
                }
            }
            Term::ClockApp(t0, kp) => {
                let tw = whnf(&t0, fuel)?;
                match tw {
                    Term::ClockLam(k, body) => t = subst_clock_term(&body, &k, &kp),
                    other => return Ok(Term::ClockApp(Box::new(other), kp)),
                }
            }
            Term::DiamondApp(s, k, kp) => {
                let sw = whnf(&s, fuel)?;
                match sw {
                    // (dfix t)[⋄] ≡ t (dfix t), collapsed onto kp
                    Term::Dfix(k2, u) if k2 == k => {
                        let unfolded =
                            Term::App(u.clone(), Box::new(Term::Dfix(k2.clone(), u.clone())));
                        t = subst_clock_term(&unfolded, &k, &kp);
                    }
                    // tick β with the constant substituted for it
                    Term::TickLam(beta, _, body) => {
                        t = subst_diamond_term(&body, &beta, &k, &kp);
                    }
                    other => return Ok(Term::DiamondApp(Box::new(other), k, kp)),
                }
            }
            done => return Ok(done),
        }
    }
}

/// Full β-normalisation: weak-head steps applied recursively under every
/// binder. The fixed point still only unfolds at tick-constant redexes.
pub fn normalize(t: &Term) -> Result<Term, TypeError> {
    let mut fuel = CONV_FUEL;
    normalize_fuel(t, &mut fuel)
}

fn normalize_fuel(t: &Term, fuel: &mut u32) -> Result<Term, TypeError> {
    use Term::*;
    let head = whnf(t, fuel)?;
    Ok(match head {
        Var(_) | Zero => head,
        Lam(x, a, b) => Lam(x, Box::new(normalize_type_fuel(&a, fuel)?), Box::new(normalize_fuel(&b, fuel)?)),
        App(f, u) => App(Box::new(normalize_fuel(&f, fuel)?), Box::new(normalize_fuel(&u, fuel)?)),
        Pair(a, b) => Pair(Box::new(normalize_fuel(&a, fuel)?), Box::new(normalize_fuel(&b, fuel)?)),
        Fst(p) => Fst(Box::new(normalize_fuel(&p, fuel)?)),
        Snd(p) => Snd(Box::new(normalize_fuel(&p, fuel)?)),
        Refl(a) => Refl(Box::new(normalize_fuel(&a, fuel)?)),
        Suc(n) => Suc(Box::new(normalize_fuel(&n, fuel)?)),
        NatRec(z, s, n) => NatRec(
            Box::new(normalize_fuel(&z, fuel)?),
            Box::new(normalize_fuel(&s, fuel)?),
            Box::new(normalize_fuel(&n, fuel)?),
        ),
        TickLam(a, k, b) => TickLam(a, k, Box::new(normalize_fuel(&b, fuel)?)),
        TickApp(t0, a) => TickApp(Box::new(normalize_fuel(&t0, fuel)?), a),
        DiamondApp(s, k, kp) => DiamondApp(Box::new(normalize_fuel(&s, fuel)?), k, kp),
        ClockLam(k, b) => ClockLam(k, Box::new(normalize_fuel(&b, fuel)?)),
        ClockApp(t0, k) => ClockApp(Box::new(normalize_fuel(&t0, fuel)?), k),
        Dfix(k, b) => Dfix(k, Box::new(normalize_fuel(&b, fuel)?)),
        Cirr(a) => Cirr(Box::new(normalize_fuel(&a, fuel)?)),
        Tirr(a) => Tirr(Box::new(normalize_fuel(&a, fuel)?)),
    })
}

pub fn normalize_type(a: &TypeExpr) -> Result<TypeExpr, TypeError> {
    let mut fuel = CONV_FUEL;
    normalize_type_fuel(a, &mut fuel)
}

fn normalize_type_fuel(a: &TypeExpr, fuel: &mut u32) -> Result<TypeExpr, TypeError> {
    use TypeExpr::*;
    Ok(match a {
        Nat => Nat,
        Str(k) => Str(k.clone()),
        Pi(x, d, b) => Pi(
            x.clone(),
            Box::new(normalize_type_fuel(d, fuel)?),
            Box::new(normalize_type_fuel(b, fuel)?),
        ),
        Sigma(x, d, b) => Sigma(
            x.clone(),
            Box::new(normalize_type_fuel(d, fuel)?),
            Box::new(normalize_type_fuel(b, fuel)?),
        ),
        Id(a0, t, u) => Id(
            Box::new(normalize_type_fuel(a0, fuel)?),
            Box::new(normalize_fuel(t, fuel)?),
            Box::new(normalize_fuel(u, fuel)?),
        ),
        Later(tick, k, b) => {
            Later(tick.clone(), k.clone(), Box::new(normalize_type_fuel(b, fuel)?))
        }
        Forall(k, b) => Forall(k.clone(), Box::new(normalize_type_fuel(b, fuel)?)),
    })
}

/// Type conversion; the stream former unfolds definitionally.
pub fn conv_type(ctx: &Context, a: &TypeExpr, b: &TypeExpr) -> Result<bool, TypeError> {
    use TypeExpr::*;
    match (a, b) {
        (Nat, Nat) => Ok(true),
        (Str(k1), Str(k2)) => Ok(k1 == k2),
        (Str(k), Sigma(..)) => conv_type(ctx, &str_unfold(k), b),
        (Sigma(..), Str(k)) => conv_type(ctx, a, &str_unfold(k)),
        (Pi(x1, a1, b1), Pi(x2, a2, b2)) | (Sigma(x1, a1, b1), Sigma(x2, a2, b2)) => {
            if matches!(a, Pi(..)) != matches!(b, Pi(..)) {
                return Ok(false);
            }
            if !conv_type(ctx, a1, a2)? {
                return Ok(false);
            }
            let x = fresh_name(if x1 == "_" { "x" } else { x1 }, &ctx.all_names());
            let ctx2 = ctx.with_entry(Entry::Term(x.clone(), (**a1).clone()));
            let b1s = subst_var_type(b1, x1, &Term::Var(x.clone()));
            let b2s = subst_var_type(b2, x2, &Term::Var(x));
            conv_type(&ctx2, &b1s, &b2s)
        }
        (Id(a1, t1, u1), Id(a2, t2, u2)) => Ok(conv_type(ctx, a1, a2)?
            && conv_term(ctx, t1, t2, a1)?
            && conv_term(ctx, u1, u2, a1)?),
        (Later(al1, k1, b1), Later(al2, k2, b2)) => {
            if k1 != k2 {
                return Ok(false);
            }
            let al = fresh_name(if al1 == "_" { "a" } else { al1 }, &ctx.all_names());
            let ctx2 = ctx.with_entry(Entry::Tick(al.clone(), k1.clone()));
            let b1s = subst_tick_type(b1, al1, &al);
            let b2s = subst_tick_type(b2, al2, &al);
            conv_type(&ctx2, &b1s, &b2s)
        }
        (Forall(k1, b1), Forall(k2, b2)) => {
            let k = fresh_name(k1, &ctx.all_names());
            let ctx2 = ctx.with_clock(k.clone());
            let b1s = subst_clock_type(b1, k1, &k);
            let b2s = subst_clock_type(b2, k2, &k);
            conv_type(&ctx2, &b1s, &b2s)
        }
        _ => Ok(false),
    }
}

/// Stuck weak-head forms; η-expansion only fires against a canonical side,
/// which keeps conversion terminating on recursive types like streams.
fn is_neutral(t: &Term) -> bool {
    matches!(
        t,
        Term::Var(_)
            | Term::App(..)
            | Term::Fst(_)
            | Term::Snd(_)
            | Term::TickApp(..)
            | Term::ClockApp(..)
            | Term::DiamondApp(..)
            | Term::NatRec(..)
            | Term::Dfix(..)
            | Term::Cirr(_)
            | Term::Tirr(_)
    )
}

/// Type-directed term conversion deciding β/η for functions, pairs, ticks,
/// and clocks, with the guarded fixed-point unfolding.
pub fn conv_term(ctx: &Context, t: &Term, u: &Term, ty: &TypeExpr) -> Result<bool, TypeError> {
    // identity sets are subsingletons in the model
    if matches!(head_type(ty), TypeExpr::Id(..)) {
        return Ok(true);
    }
    let mut fuel = CONV_FUEL;
    let tw = whnf(t, &mut fuel)?;
    let uw = whnf(u, &mut fuel)?;
    if is_neutral(&tw) && is_neutral(&uw) {
        return Ok(conv_neutral(ctx, &tw, &uw)?.is_some());
    }
    let (t, u) = (&tw, &uw);
    match head_type(ty) {
        TypeExpr::Pi(x, dom, cod) => {
            let xf = fresh_name(if x == "_" { "x" } else { &x }, &ctx.all_names());
            let ctx2 = ctx.with_entry(Entry::Term(xf.clone(), (*dom).clone()));
            let tv = Term::App(Box::new(t.clone()), Box::new(Term::Var(xf.clone())));
            let uv = Term::App(Box::new(u.clone()), Box::new(Term::Var(xf.clone())));
            let cod2 = subst_var_type(&cod, &x, &Term::Var(xf));
            conv_term(&ctx2, &tv, &uv, &cod2)
        }
        TypeExpr::Sigma(x, dom, cod) => {
            let t1 = Term::Fst(Box::new(t.clone()));
            let u1 = Term::Fst(Box::new(u.clone()));
            if !conv_term(ctx, &t1, &u1, &dom)? {
                return Ok(false);
            }
            let cod2 = subst_var_type(&cod, &x, &t1);
            conv_term(ctx, &Term::Snd(Box::new(t.clone())), &Term::Snd(Box::new(u.clone())), &cod2)
        }
        TypeExpr::Later(beta, k, body) => {
            let af = fresh_name("a", &ctx.all_names());
            let ctx2 = ctx.with_entry(Entry::Tick(af.clone(), k.clone()));
            let tv = Term::TickApp(Box::new(t.clone()), af.clone());
            let uv = Term::TickApp(Box::new(u.clone()), af.clone());
            let body2 = subst_tick_type(&body, &beta, &af);
            conv_term(&ctx2, &tv, &uv, &body2)
        }
        TypeExpr::Forall(k, body) => {
            let kf = fresh_name(&k, &ctx.all_names());
            let ctx2 = ctx.with_clock(kf.clone());
            let tv = Term::ClockApp(Box::new(t.clone()), kf.clone());
            let uv = Term::ClockApp(Box::new(u.clone()), kf.clone());
            let body2 = subst_clock_type(&body, &k, &kf);
            conv_term(&ctx2, &tv, &uv, &body2)
        }
        TypeExpr::Id(..) => Ok(true),
        TypeExpr::Nat => {
            let mut fuel = CONV_FUEL;
            conv_nat(ctx, t, u, &mut fuel)
        }
        TypeExpr::Str(_) => unreachable!("streams unfold to pairs"),
    }
}

fn conv_nat(ctx: &Context, t: &Term, u: &Term, fuel: &mut u32) -> Result<bool, TypeError> {
    let tw = whnf(t, fuel)?;
    let uw = whnf(u, fuel)?;
    match (&tw, &uw) {
        (Term::Zero, Term::Zero) => Ok(true),
        (Term::Suc(a), Term::Suc(b)) => conv_nat(ctx, a, b, fuel),
        _ => Ok(conv_neutral(ctx, &tw, &uw)?.is_some()),
    }
}

/// Spine comparison of weak-head-normal neutrals; returns their common
/// type when they agree.
fn conv_neutral(ctx: &Context, t: &Term, u: &Term) -> Result<Option<TypeExpr>, TypeError> {
    match (t, u) {
        (Term::Var(x), Term::Var(y)) if x == y => {
            Ok(ctx.lookup_var(x).map(|(_, a)| a.clone()))
        }
        (Term::App(f, a), Term::App(g, b)) => {
            let Some(fty) = conv_neutral(ctx, f, g)? else { return Ok(None) };
            match head_type(&fty) {
                TypeExpr::Pi(x, dom, cod) => {
                    if conv_term(ctx, a, b, &dom)? {
                        Ok(Some(subst_var_type(&cod, &x, a)))
                    } else {
                        Ok(None)
                    }
                }
                _ => Ok(None),
            }
        }
        (Term::Fst(p), Term::Fst(q)) => {
            let Some(pty) = conv_neutral(ctx, p, q)? else { return Ok(None) };
            match head_type(&pty) {
                TypeExpr::Sigma(_, a, _) => Ok(Some(*a)),
                _ => Ok(None),
            }
        }
        (Term::Snd(p), Term::Snd(q)) => {
            let Some(pty) = conv_neutral(ctx, p, q)? else { return Ok(None) };
            match head_type(&pty) {
                TypeExpr::Sigma(x, _, b) => {
                    Ok(Some(subst_var_type(&b, &x, &Term::Fst(p.clone()))))
                }
                _ => Ok(None),
            }
        }
        (Term::TickApp(t0, a1), Term::TickApp(u0, a2)) => {
            if a1 != a2 {
                return Ok(None);
            }
            let i = match ctx.lookup_tick(a1) {
                Some((i, _)) => i,
                None => return Ok(None),
            };
            let prefix = ctx.prefix(i);
            let Some(ty0) = conv_neutral(&prefix, t0, u0)? else { return Ok(None) };
            match head_type(&ty0) {
                TypeExpr::Later(beta, _, body) => Ok(Some(subst_tick_type(&body, &beta, a1))),
                _ => Ok(None),
            }
        }
        (Term::ClockApp(t0, k1), Term::ClockApp(u0, k2)) => {
            if k1 != k2 {
                return Ok(None);
            }
            let Some(ty0) = conv_neutral(ctx, t0, u0)? else { return Ok(None) };
            match head_type(&ty0) {
                TypeExpr::Forall(k, body) => Ok(Some(subst_clock_type(&body, &k, k1))),
                _ => Ok(None),
            }
        }
        (Term::DiamondApp(s1, k1, kp1), Term::DiamondApp(s2, k2, kp2)) => {
            if kp1 != kp2 {
                return Ok(None);
            }
            let kf = fresh_name(k1, &ctx.all_names());
            let s1r = subst_clock_term(s1, k1, &kf);
            let s2r = subst_clock_term(s2, k2, &kf);
            let ctx2 = ctx.with_clock(kf.clone());
            let Some(ty0) = conv_neutral(&ctx2, &whnf(&s1r, &mut CONV_FUEL.clone())?, &whnf(&s2r, &mut CONV_FUEL.clone())?)?
            else {
                return Ok(None);
            };
            match head_type(&ty0) {
                TypeExpr::Later(beta, _, body) => {
                    Ok(Some(subst_diamond_type(&body, &beta, &kf, kp1)))
                }
                _ => Ok(None),
            }
        }
        (Term::NatRec(z1, s1, n1), Term::NatRec(z2, s2, n2)) => {
            if conv_neutral(ctx, n1, n2)?.is_none() {
                return Ok(None);
            }
            let (c, _) = match infer(ctx, z1) {
                Ok(r) => r,
                Err(_) => return Ok(None),
            };
            let sty = TypeExpr::Pi(
                "_".into(),
                Box::new(TypeExpr::Nat),
                Box::new(TypeExpr::Pi("_".into(), Box::new(c.clone()), Box::new(c.clone()))),
            );
            if conv_term(ctx, z1, z2, &c)? && conv_term(ctx, s1, s2, &sty)? {
                Ok(Some(c))
            } else {
                Ok(None)
            }
        }
        (Term::Dfix(k1, t1), Term::Dfix(k2, t2)) => {
            if k1 != k2 {
                return Ok(None);
            }
            let (fty, _) = match infer(ctx, t1) {
                Ok(r) => r,
                Err(_) => return Ok(None),
            };
            if conv_term(ctx, t1, t2, &fty)? {
                match head_type(&fty) {
                    TypeExpr::Pi(_, _, cod) => Ok(Some(later(k1, *cod))),
                    _ => Ok(None),
                }
            } else {
                Ok(None)
            }
        }
        (Term::Cirr(a), Term::Cirr(b)) | (Term::Tirr(a), Term::Tirr(b)) => {
            if conv_neutral(ctx, a, b)?.is_some() {
                infer(ctx, t).map(|(ty, _)| Some(ty)).or(Ok(None))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// substitution wellformedness

/// Verifies a substitution against its source and target contexts, one
/// binding per target entry.
pub fn check_subst(
    s: &SyntacticSubst,
    src: &Context,
    dst: &Context,
) -> Result<(), TypeError> {
    check_ctx(src)?;
    check_ctx(dst)?;
    if s.bindings.len() != dst.entries.len() {
        return fail(
            "subst",
            format!("{} bindings for {} target entries", s.bindings.len(), dst.entries.len()),
        );
    }
    for k in &dst.clocks {
        let img = s
            .clock_map
            .get(k)
            .ok_or_else(|| TypeError {
                rule: "subst".into(),
                message: format!("clock {k} has no image"),
            })?;
        if !src.has_clock(img) {
            return fail("subst", format!("clock {k} maps to {img}, not in the source zone"));
        }
    }

    // positions of source ticks consumed so far
    let mut tick_cursor = 0usize;
    // source prefix available to a term binding: up to the next tick
    // binding's source position
    let next_tick_src_pos = |from: usize| -> usize {
        for (bi, b) in s.bindings.iter().enumerate() {
            if bi < from {
                continue;
            }
            if let Binding::Tick(_, alpha) = b {
                if let Some((j, _)) = src.lookup_tick(alpha) {
                    return j;
                }
            }
        }
        src.entries.len()
    };

    for (i, (b, e)) in s.bindings.iter().zip(&dst.entries).enumerate() {
        match (b, e) {
            (Binding::Term(x, t), Entry::Term(y, a)) => {
                if x != y {
                    return fail("subst", format!("binding {x} against entry {y}"));
                }
                let horizon = next_tick_src_pos(i);
                let avail = src.prefix(horizon);
                let prefix_subst = SyntacticSubst {
                    clock_map: s.clock_map.clone(),
                    bindings: s.bindings[..i].to_vec(),
                    src: avail.clone(),
                    dst: dst.prefix(i),
                };
                let want = prefix_subst.apply_type(a);
                check_term(&avail, t, &want).map_err(|e| TypeError {
                    rule: "subst-term".into(),
                    message: format!("binding for {x}: {e}"),
                })?;
            }
            (Binding::Tick(beta, alpha), Entry::Tick(beta2, k)) => {
                if beta != beta2 {
                    return fail("subst", format!("binding {beta} against entry {beta2}"));
                }
                let Some((j, ks)) = src.lookup_tick(alpha) else {
                    return fail("subst-tick", format!("source tick {alpha} not found"));
                };
                if j < tick_cursor {
                    return fail(
                        "subst-tick",
                        format!("source tick {alpha} reused out of order"),
                    );
                }
                let want = &s.clock_map[k];
                if ks != want {
                    return fail(
                        "subst-tick",
                        format!("tick {alpha} is on clock {ks}, needed ν({k}) = {want}"),
                    );
                }
                tick_cursor = j + 1;
            }
            (Binding::Diamond(alpha, k, kp), Entry::Tick(alpha2, k2)) => {
                if alpha != alpha2 || k != k2 {
                    return fail(
                        "subst-diamond",
                        format!("⋄ binding ({alpha} : {k}) against entry ({alpha2} : {k2})"),
                    );
                }
                let pos_k = dst.clocks.iter().position(|c| c == k);
                let pos_kp = dst.clocks.iter().position(|c| c == kp);
                match (pos_k, pos_kp) {
                    (Some(pk), Some(pp)) if pp < pk => {}
                    (Some(_), Some(_)) => {
                        return fail(
                            "subst-diamond",
                            format!("collapse clock {kp} must precede the fresh clock {k}"),
                        )
                    }
                    _ => return fail("subst-diamond", "clocks missing from the target zone"),
                }
                // the fresh clock must not occur before the tick it binds
                for e2 in &dst.entries[..i] {
                    if let Entry::Term(_, a) = e2 {
                        let mut fc = BTreeSet::new();
                        free_clocks_type(a, &mut fc);
                        if fc.contains(k) {
                            return fail(
                                "subst-diamond",
                                format!("clock {k} occurs before its ⋄-bound tick"),
                            );
                        }
                    }
                    if let Entry::Tick(_, kk) = e2 {
                        if kk == k {
                            return fail(
                                "subst-diamond",
                                format!("clock {k} carries an earlier tick"),
                            );
                        }
                    }
                }
                if s.clock_map.get(k) != s.clock_map.get(kp) {
                    return fail(
                        "subst-diamond",
                        format!("ν({k}) must equal ν({kp}) for a ⋄ binding"),
                    );
                }
            }
            (b, e) => {
                return fail(
                    "subst",
                    format!("binding {b:?} does not match entry for {}", e.name()),
                )
            }
        }
    }
    Ok(())
}
