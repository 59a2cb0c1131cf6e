//! The denotational interpretation of contexts, types, terms, and
//! substitutions, evaluated world by world. Environments mirror the
//! context: one pair layer per variable entry and one tick-coproduct layer
//! per tick entry.

use std::collections::{BTreeMap, BTreeSet};

use crate::semantics::psh::Psh;
use crate::semantics::transpose::{transpose_bwd, transpose_fwd};
use crate::semantics::ty::{fresh_world, SemTerm, SemTy};
use crate::semantics::value::FamilyVal;
use crate::semantics::value::SemValue;
use crate::semantics::{Bounds, SemMap};
use crate::syntax::ast::*;
use crate::syntax::subst::{subst_clock_term, subst_clock_type, subst_tick_term, subst_tick_type, subst_var_term, subst_var_type};
use crate::syntax::{Binding, SyntacticSubst};
use crate::typecheck;
use crate::worlds::{iota_incl, tick_dec, TimeMorphism, World};
use crate::{Error, Result};

/// ⟦Γ ⊢Δ⟧ as a presheaf: the terminal presheaf extended by comprehension
/// for variable entries and by the tick coproduct for tick entries.
pub fn interp_ctx(ctx: &Context) -> Psh {
    let mut psh = Psh::terminal(ctx.clocks.clone());
    for (i, e) in ctx.entries.iter().enumerate() {
        match e {
            Entry::Term(_, a) => {
                let prefix = ctx.prefix(i);
                let ty = interp_type(&prefix, a).expect("context entry type must interpret");
                psh = Psh::comprehension(psh, ty);
            }
            Entry::Tick(_, k) => {
                psh = Psh::earlier(k.clone(), psh);
            }
        }
    }
    psh
}

/// The projection ⟦Γ, Γ′⟧ → ⟦Γ⟧ peeling entries down to `upto`.
pub fn context_projection(ctx: &Context, upto: usize) -> SemMap {
    let mut m = SemMap::identity();
    for i in (upto..ctx.entries.len()).rev() {
        let peel = match &ctx.entries[i] {
            Entry::Term(_, _) => SemMap::new(|_, v, _| Ok(v.as_pair()?.0.clone())),
            Entry::Tick(_, k) => SemMap::proj_earlier(k.clone(), interp_ctx(&ctx.prefix(i))),
        };
        m = m.then(&peel);
    }
    m
}

fn ty_err(e: typecheck::TypeError) -> Error {
    Error::Type(e.to_string())
}

pub fn interp_type(ctx: &Context, a: &TypeExpr) -> Result<SemTy> {
    let base = interp_ctx(ctx);
    match a {
        TypeExpr::Nat => Ok(SemTy::nat(base)),
        TypeExpr::Str(k) => Ok(SemTy::str_g(base, k.clone())),
        TypeExpr::Pi(x, dom, cod) | TypeExpr::Sigma(x, dom, cod) => {
            let dom_ty = interp_type(ctx, dom)?;
            let (x2, cod2) = freshen_var(ctx, x, cod);
            let ctx2 = ctx.with_entry(Entry::Term(x2, (**dom).clone()));
            let cod_ty = interp_type(&ctx2, &cod2)?;
            Ok(if matches!(a, TypeExpr::Pi(..)) {
                SemTy::pi(base, dom_ty, cod_ty)
            } else {
                SemTy::sigma(base, dom_ty, cod_ty)
            })
        }
        TypeExpr::Id(a0, l, r) => {
            let a_ty = interp_type(ctx, a0)?;
            let lt = interp_term(ctx, l)?;
            let rt = interp_term(ctx, r)?;
            Ok(SemTy::id_ty(base, a_ty, lt, rt))
        }
        TypeExpr::Later(tick, k, body) => {
            let (t2, body2) = freshen_tick(ctx, tick, body);
            let ctx2 = ctx.with_entry(Entry::Tick(t2, k.clone()));
            let inner = interp_type(&ctx2, &body2)?;
            Ok(SemTy::later_dep(k.clone(), base, inner))
        }
        TypeExpr::Forall(k, body) => {
            let (k2, body2) = freshen_clock_ty(ctx, k, body);
            let ctx2 = ctx.with_clock(k2.clone());
            let inner = interp_type(&ctx2, &body2)?;
            Ok(SemTy::forall(k2, base, inner))
        }
    }
}

fn freshen_var(ctx: &Context, x: &str, b: &TypeExpr) -> (Ident, TypeExpr) {
    let taken = ctx.all_names();
    if x != "_" && !taken.contains(x) {
        (x.to_string(), b.clone())
    } else {
        let x2 = fresh_name(if x == "_" { "x" } else { x }, &taken);
        (x2.clone(), subst_var_type(b, x, &Term::Var(x2)))
    }
}

fn freshen_tick(ctx: &Context, a: &str, b: &TypeExpr) -> (Ident, TypeExpr) {
    let taken = ctx.all_names();
    if a != "_" && !taken.contains(a) {
        (a.to_string(), b.clone())
    } else {
        let a2 = fresh_name(if a == "_" { "a" } else { a }, &taken);
        (a2.clone(), subst_tick_type(b, a, &a2))
    }
}

fn freshen_clock_ty(ctx: &Context, k: &str, b: &TypeExpr) -> (Ident, TypeExpr) {
    let taken = ctx.all_names();
    if !taken.contains(k) {
        (k.to_string(), b.clone())
    } else {
        let k2 = fresh_name(k, &taken);
        (k2.clone(), subst_clock_type(b, k, &k2))
    }
}

/// Interprets a welltyped term as a world-indexed section of its type.
pub fn interp_term(ctx: &Context, t: &Term) -> Result<SemTerm> {
    let base = interp_ctx(ctx);
    match t {
        Term::Var(x) => {
            let Some((i, _)) = ctx.lookup_var(x) else {
                return Err(Error::Type(format!("variable {x} not in scope")));
            };
            let proj = context_projection(ctx, i + 1);
            Ok(SemTerm::new(move |w, env, bounds| {
                Ok(proj.apply(w, env, bounds)?.as_pair()?.1.clone())
            }))
        }
        Term::Lam(x, dom, body) => {
            let (x2, body2) = {
                let taken = ctx.all_names();
                if x != "_" && !taken.contains(x.as_str()) {
                    (x.clone(), (**body).clone())
                } else {
                    let x2 = fresh_name(if x == "_" { "x" } else { x }, &taken);
                    (x2.clone(), subst_var_term(body, x, &Term::Var(x2)))
                }
            };
            let ctx2 = ctx.with_entry(Entry::Term(x2, (**dom).clone()));
            let body_tm = interp_term(&ctx2, &body2)?;
            Ok(SemTerm::new(move |w, env, _bounds| {
                let env = env.clone();
                let body_tm = body_tm.clone();
                let base = base.clone();
                Ok(SemValue::func(w.clone(), move |tau, arg, bounds| {
                    let env2 = base.restrict(tau, &env, bounds)?;
                    body_tm.eval(&tau.dst, &SemValue::pair(env2, arg.clone()), bounds)
                }))
            }))
        }
        Term::App(f, u) => {
            let ft = interp_term(ctx, f)?;
            let ut = interp_term(ctx, u)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                let fv = ft.eval(w, env, bounds)?;
                let uv = ut.eval(w, env, bounds)?;
                fv.apply(&TimeMorphism::identity(w), &uv, bounds)
            }))
        }
        Term::Pair(a, b) => {
            let at = interp_term(ctx, a)?;
            let bt = interp_term(ctx, b)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                Ok(SemValue::pair(at.eval(w, env, bounds)?, bt.eval(w, env, bounds)?))
            }))
        }
        Term::Fst(p) => {
            let pt = interp_term(ctx, p)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                Ok(pt.eval(w, env, bounds)?.as_pair()?.0.clone())
            }))
        }
        Term::Snd(p) => {
            let pt = interp_term(ctx, p)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                Ok(pt.eval(w, env, bounds)?.as_pair()?.1.clone())
            }))
        }
        Term::Refl(_) => Ok(SemTerm::new(|_, _, _| Ok(SemValue::Refl))),
        Term::Zero => Ok(SemTerm::new(|_, _, _| Ok(SemValue::Nat(0)))),
        Term::Suc(n) => {
            let nt = interp_term(ctx, n)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                Ok(SemValue::Nat(nt.eval(w, env, bounds)?.as_nat()? + 1))
            }))
        }
        Term::NatRec(z, s, n) => {
            let zt = interp_term(ctx, z)?;
            let st = interp_term(ctx, s)?;
            let nt = interp_term(ctx, n)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                let k = nt.eval(w, env, bounds)?.as_nat()?;
                let sv = st.eval(w, env, bounds)?;
                let mut acc = zt.eval(w, env, bounds)?;
                let id = TimeMorphism::identity(w);
                for i in 0..k {
                    let step = sv.apply(&id, &SemValue::Nat(i), bounds)?;
                    acc = step.apply(&id, &acc, bounds)?;
                }
                Ok(acc)
            }))
        }
        Term::TickLam(a, k, body) => {
            let (a2, body2) = {
                let taken = ctx.all_names();
                if a != "_" && !taken.contains(a.as_str()) {
                    (a.clone(), (**body).clone())
                } else {
                    let a2 = fresh_name(if a == "_" { "a" } else { a }, &taken);
                    (a2.clone(), subst_tick_term(body, a, &a2))
                }
            };
            let ctx2 = ctx.with_entry(Entry::Tick(a2, k.clone()));
            let body_tm = interp_term(&ctx2, &body2)?;
            Ok(transpose_fwd(k.clone(), base, body_tm))
        }
        Term::TickApp(t0, alpha) => {
            let Some((i, k)) = ctx.lookup_tick(alpha) else {
                return Err(Error::Type(format!("tick {alpha} not in scope")));
            };
            let k = k.to_string();
            let prefix = ctx.prefix(i);
            let (lty, _) = typecheck::infer(&prefix, t0).map_err(ty_err)?;
            let TypeExpr::Later(beta, k2, body) = head(&lty) else {
                return Err(Error::Type("tick application head is not delayed".into()));
            };
            if k2 != k {
                return Err(Error::Type("tick application clock mismatch".into()));
            }
            let (b2, body2) = freshen_tick(&prefix, &beta, &body);
            let tick_ctx = prefix.with_entry(Entry::Tick(b2, k.clone()));
            let a_ty = interp_type(&tick_ctx, &body2)?;
            let head_tm = interp_term(&prefix, t0)?;
            let opened =
                transpose_bwd(k.clone(), interp_ctx(&prefix), a_ty, head_tm);
            let proj = context_projection(ctx, i + 1);
            Ok(opened.subst(&proj))
        }
        Term::DiamondApp(s, k, kp) => {
            let ctx2 = ctx.with_clock(k.clone());
            let (lty, _) = typecheck::infer(&ctx2, s).map_err(ty_err)?;
            let TypeExpr::Later(beta, k2, _) = head(&lty) else {
                return Err(Error::Type("tick-constant application head is not delayed".into()));
            };
            if k2 != *k {
                return Err(Error::Type("tick-constant application clock mismatch".into()));
            }
            let alpha = fresh_name(if beta == "_" { "a" } else { &beta }, &ctx2.all_names());
            let tick_ctx = ctx2.with_entry(Entry::Tick(alpha.clone(), k.clone()));
            let opened = interp_term(&tick_ctx, &Term::TickApp(s.clone(), alpha))?;
            let dmap = diamond_subst(ctx, k, kp);
            let k = k.clone();
            let kp = kp.clone();
            Ok(SemTerm::new(move |w, env, bounds| {
                let denv = dmap.apply(w, env, bounds)?;
                let mut w2 = w.clone();
                w2.val.insert(k.clone(), w.clk_of(&kp));
                opened.eval(&w2, &denv, bounds)
            }))
        }
        Term::ClockLam(k, body) => {
            let (k2, body2) = {
                let taken = ctx.all_names();
                if !taken.contains(k.as_str()) {
                    (k.clone(), (**body).clone())
                } else {
                    let k2 = fresh_name(k, &taken);
                    (k2.clone(), subst_clock_term(body, k, &k2))
                }
            };
            let ctx2 = ctx.with_clock(k2.clone());
            let inner = interp_term(&ctx2, &body2)?;
            Ok(SemTerm::new(move |w, env, bounds| {
                let bound = bounds.family_bound() as usize;
                let w1 = w.clone();
                let env = env.clone();
                let base = base.clone();
                let inner = inner.clone();
                let k2 = k2.clone();
                Ok(SemValue::Family(FamilyVal::from_fn(w.clone(), bound, move |n, bounds| {
                    let sharp = w1.least_fresh_clk();
                    let iota = iota_incl(&w1, sharp, n as u32);
                    let env_n = base.restrict(&iota, &env, bounds)?;
                    let w_n = fresh_world(&w1, &k2, sharp, n as u32);
                    inner.eval(&w_n, &env_n, bounds)
                })))
            }))
        }
        Term::ClockApp(t0, kp) => {
            let (fty, _) = typecheck::infer(ctx, t0).map_err(ty_err)?;
            let TypeExpr::Forall(k, body) = head(&fty) else {
                return Err(Error::Type("clock application head is not quantified".into()));
            };
            let (k2, body2) = freshen_clock_ty(ctx, &k, &body);
            let ctx2 = ctx.with_clock(k2.clone());
            let inner_ty = interp_type(&ctx2, &body2)?;
            let tm = interp_term(ctx, t0)?;
            let kp = kp.clone();
            Ok(SemTerm::new(move |w, env, bounds| {
                let famv = tm.eval(w, env, bounds)?;
                let fam = famv.as_family()?;
                let n = w.tick_of(&kp);
                let component = fam.get(n as usize, bounds)?;
                let sharp = w.least_fresh_clk();
                let iota = iota_incl(w, sharp, n);
                let env_n = base.restrict(&iota, env, bounds)?;
                let w_n = fresh_world(w, &k2, sharp, n);
                let mut w_dst = w.clone();
                w_dst.val.insert(k2.clone(), w.clk_of(&kp));
                let mut map: BTreeMap<_, _> = w.theta().into_iter().map(|c| (c, c)).collect();
                map.insert(sharp, w.clk_of(&kp));
                let tau = TimeMorphism { src: w_n, dst: w_dst, map };
                inner_ty.restrict(&tau, &env_n, &component, bounds)
            }))
        }
        Term::Dfix(k, f) => {
            let k = k.clone();
            let f = f.clone();
            let ctx = ctx.clone();
            Ok(SemTerm::new(move |w, env, bounds| {
                if w.tick_of(&k) == 0 {
                    return Ok(SemValue::Star);
                }
                let wd = tick_dec(w, &k);
                let tau = TimeMorphism {
                    src: w.clone(),
                    dst: wd.clone(),
                    map: w.theta().into_iter().map(|c| (c, c)).collect(),
                };
                let envd = interp_ctx(&ctx).restrict(&tau, env, bounds)?;
                let unfolded =
                    Term::App(f.clone(), Box::new(Term::Dfix(k.clone(), f.clone())));
                interp_term(&ctx, &unfolded)?.eval(&wd, &envd, bounds)
            }))
        }
        Term::Cirr(t0) => {
            let (fty, _) = typecheck::infer(ctx, t0).map_err(ty_err)?;
            let TypeExpr::Forall(..) = head(&fty) else {
                return Err(Error::Type("cirr subject is not clock-quantified".into()));
            };
            let taken = ctx.all_names();
            let k1 = fresh_name("k'", &taken);
            let mut taken2 = taken.clone();
            taken2.insert(k1.clone());
            let k2 = fresh_name("k''", &taken2);
            let witness = Term::ClockLam(
                k1.clone(),
                Box::new(Term::ClockLam(
                    k2,
                    Box::new(Term::Refl(Box::new(Term::ClockApp(t0.clone(), k1)))),
                )),
            );
            interp_term(ctx, &witness)
        }
        Term::Tirr(t0) => {
            let (lty, _) = typecheck::infer(ctx, t0).map_err(ty_err)?;
            let TypeExpr::Later(_, k, _) = head(&lty) else {
                return Err(Error::Type("tirr subject is not delayed".into()));
            };
            let taken = ctx.all_names();
            let a1 = fresh_name("a'", &taken);
            let mut taken2 = taken.clone();
            taken2.insert(a1.clone());
            let a2 = fresh_name("a''", &taken2);
            let witness = Term::TickLam(
                a1.clone(),
                k.clone(),
                Box::new(Term::TickLam(
                    a2,
                    k,
                    Box::new(Term::Refl(Box::new(Term::TickApp(t0.clone(), a1)))),
                )),
            );
            interp_term(ctx, &witness)
        }
    }
}

fn head(a: &TypeExpr) -> TypeExpr {
    match a {
        TypeExpr::Str(k) => str_unfold(k),
        other => other.clone(),
    }
}

/// The semantic substitution of the tick constant for a fresh tick on `k`,
/// collapsing onto `kp`: lands in the single-summand tick layer over the
/// budget-extended inclusion.
pub fn diamond_subst(ctx: &Context, k: &str, kp: &str) -> SemMap {
    assert!(!ctx.has_clock(k), "diamond_subst: {k} must be fresh");
    assert!(ctx.has_clock(kp), "diamond_subst: {kp} must be in the zone");
    let base = interp_ctx(ctx);
    let k = k.to_string();
    let kp = kp.to_string();
    SemMap::new(move |w, env, bounds| {
        let n = w.tick_of(&kp);
        let sharp = w.least_fresh_clk();
        let iota = iota_incl(w, sharp, n + 1);
        let payload = base.restrict(&iota, env, bounds)?;
        Ok(SemValue::tick([k.clone()].into(), payload))
    })
}

/// The substitution (i, id_Γ) weakening the clock zone by `k`.
pub fn clock_weakening_subst(ctx: &Context, k: &str) -> SyntacticSubst {
    let mut s = SyntacticSubst::identity(ctx);
    s.src = ctx.with_clock(k);
    s
}

/// The substitution (id_Δ[k ↦ kp], id_Γ) collapsing a fresh clock.
pub fn clock_collapse_subst(ctx: &Context, k: &str, kp: &str) -> SyntacticSubst {
    let mut s = SyntacticSubst::identity(ctx);
    s.clock_map.insert(k.to_string(), kp.to_string());
    s.dst = ctx.with_clock(k);
    s
}

/// Interprets a syntactic substitution as a world-indexed map
/// ⟦src⟧ → ν*⟦dst⟧ following the clause for each binding form.
pub fn interp_subst(s: &SyntacticSubst) -> Result<SemMap> {
    // clock zone of the target at each formation stage: ⋄-clocks join the
    // zone at their binding's position
    let diamond_clocks: Vec<(usize, Ident)> = s
        .bindings
        .iter()
        .enumerate()
        .filter_map(|(i, b)| match b {
            Binding::Diamond(_, k, _) => Some((i, k.clone())),
            _ => None,
        })
        .collect();
    let zone_at = |stage: usize| -> Vec<Ident> {
        s.dst
            .clocks
            .iter()
            .filter(|k| {
                diamond_clocks.iter().all(|(i, dk)| dk != *k || *i < stage)
            })
            .cloned()
            .collect()
    };
    go_subst(s, s.bindings.len(), &s.src, &zone_at)
}

fn go_subst(
    s: &SyntacticSubst,
    stage: usize,
    src: &Context,
    zone_at: &dyn Fn(usize) -> Vec<Ident>,
) -> Result<SemMap> {
    if stage == 0 {
        return Ok(SemMap::constant_star());
    }
    let binding = &s.bindings[stage - 1];
    match binding {
        Binding::Term(_, t) => {
            let inner = go_subst(s, stage - 1, src, zone_at)?;
            let t_tm = interp_term(src, t)?;
            Ok(SemMap::new(move |w, env, bounds| {
                Ok(SemValue::pair(inner.apply(w, env, bounds)?, t_tm.eval(w, env, bounds)?))
            }))
        }
        Binding::Tick(beta, alpha) => {
            let Some((j, k_src)) = src.lookup_tick(alpha) else {
                return Err(Error::Type(format!("source tick {alpha} missing")));
            };
            let k_src = k_src.to_string();
            let Entry::Tick(_, k_tgt) = &s.dst.entries[stage - 1] else {
                return Err(Error::Type(format!("binding {beta} against a variable entry")));
            };
            let prefix_src = src.prefix(j);
            let inner = go_subst(s, stage - 1, &prefix_src, zone_at)?;
            let proj = context_projection(src, j + 1);
            let lifted = SemMap::earlier_map(k_src, inner);
            let zone: BTreeSet<Ident> = zone_at(stage - 1).into_iter().collect();
            let nu: BTreeMap<Ident, Ident> = s
                .clock_map
                .iter()
                .filter(|(k, _)| zone.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let e = SemMap::exchange(k_tgt.clone(), nu);
            Ok(proj.then(&lifted).then(&e))
        }
        Binding::Diamond(_, k, kp) => {
            let inner = go_subst(s, stage - 1, src, zone_at)?;
            let zone_prev = zone_at(stage - 1);
            let nu0: BTreeMap<Ident, Ident> = s
                .clock_map
                .iter()
                .filter(|(c, _)| zone_prev.contains(*c))
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect();
            let target_prefix = Context {
                clocks: zone_prev,
                entries: s.dst.entries[..stage - 1].to_vec(),
            };
            let d = diamond_subst(&target_prefix, k, kp);
            Ok(inner.then(&SemMap::reindex_map(nu0, d)))
        }
    }
}

/// Lemma-9 data: at a fresh-clock world the clock-weakening substitution
/// is invertible; in this representation both directions are the identity
/// on values, validated against the world shape.
pub struct ClockWeakenIso {
    pub k: Ident,
}

impl ClockWeakenIso {
    pub fn new(k: &str) -> ClockWeakenIso {
        ClockWeakenIso { k: k.to_string() }
    }

    fn check_shape(&self, w: &World) -> Result<()> {
        let Some(&sharp) = w.val.get(&self.k) else {
            return Err(Error::Sem(format!("world lacks a valuation for {}", self.k)));
        };
        let unique = w.val.iter().all(|(k2, c)| *k2 == self.k || *c != sharp);
        if unique {
            Ok(())
        } else {
            Err(Error::Sem(format!(
                "clock-weakening inverse needs {} on a fresh semantic clock at {w}",
                self.k
            )))
        }
    }

    /// ⟦(i, id)⟧ at a fresh-clock world.
    pub fn forward(&self, w: &World, v: &SemValue) -> Result<SemValue> {
        self.check_shape(w)?;
        Ok(v.clone())
    }

    /// Its two-sided inverse at the same world.
    pub fn backward(&self, w: &World, v: &SemValue) -> Result<SemValue> {
        self.check_shape(w)?;
        Ok(v.clone())
    }
}

/// Checks ⟦t⟧(γ) ∈ ⟦A⟧(γ) at one world and environment.
pub fn check_membership(
    ctx: &Context,
    t: &Term,
    a: &TypeExpr,
    w: &World,
    env: &SemValue,
    bounds: &Bounds,
) -> Result<bool> {
    let tm = interp_term(ctx, t)?;
    let ty = interp_type(ctx, a)?;
    let v = tm.eval(w, env, bounds)?;
    ty.set_at(w, env, bounds)?.contains(&v, bounds)
}
