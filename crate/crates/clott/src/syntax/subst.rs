//! Syntactic substitutions: a clock map ν together with an entry map σ that
//! mirrors the target context entry-for-entry. Besides terms-for-variables
//! and ticks-for-ticks, a tick may be sent to the tick constant; applying
//! such a substitution rewrites the enclosing tick application into
//! `DiamondApp` form.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    /// `x ↦ t`
    Term(Ident, Term),
    /// `β ↦ α`: target tick β to source tick α.
    Tick(Ident, Ident),
    /// `α ↦ ⋄` where the target context ends `.., α : κ` and the target
    /// clock zone gained κ, collapsed onto the earlier target clock κ′.
    Diamond(Ident, Ident, Ident),
}

/// A substitution from `src ⊢` to `dst ⊢`. `clock_map` is total on the
/// target clock zone (including clocks introduced by ⋄-bindings).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntacticSubst {
    pub clock_map: BTreeMap<Ident, Ident>,
    pub bindings: Vec<Binding>,
    pub src: Context,
    pub dst: Context,
}

#[derive(Debug, Clone)]
enum TickImage {
    Tick(Ident),
    Diamond(Ident, Ident), // (bound clock κ, collapse clock κ′), both target-side
}

/// The environment a substitution unfolds to while walking a judgement.
#[derive(Debug, Clone, Default)]
struct ApplyEnv {
    clocks: BTreeMap<Ident, Ident>,
    vars: BTreeMap<Ident, Term>,
    ticks: BTreeMap<Ident, TickImage>,
    avoid: BTreeSet<Ident>,
}

impl ApplyEnv {
    fn clock(&self, k: &str) -> Ident {
        self.clocks.get(k).cloned().unwrap_or_else(|| k.to_string())
    }

    fn bind_fresh(&mut self, name: &str) -> Ident {
        let fresh = fresh_name(name, &self.avoid);
        self.avoid.insert(fresh.clone());
        fresh
    }
}

impl SyntacticSubst {
    pub fn identity(ctx: &Context) -> Self {
        let clock_map = ctx.clocks.iter().map(|k| (k.clone(), k.clone())).collect();
        let bindings = ctx
            .entries
            .iter()
            .map(|e| match e {
                Entry::Term(x, _) => Binding::Term(x.clone(), Term::Var(x.clone())),
                Entry::Tick(a, _) => Binding::Tick(a.clone(), a.clone()),
            })
            .collect();
        SyntacticSubst { clock_map, bindings, src: ctx.clone(), dst: ctx.clone() }
    }

    fn env(&self) -> ApplyEnv {
        let mut avoid = self.src.all_names();
        avoid.extend(self.dst.all_names());
        for v in self.clock_map.values() {
            avoid.insert(v.clone());
        }
        let mut vars = BTreeMap::new();
        let mut ticks = BTreeMap::new();
        for b in &self.bindings {
            match b {
                Binding::Term(x, t) => {
                    let mut fv = BTreeSet::new();
                    free_vars_term(t, &mut fv);
                    free_ticks_term(t, &mut fv);
                    free_clocks_term(t, &mut fv);
                    avoid.extend(fv);
                    vars.insert(x.clone(), t.clone());
                }
                Binding::Tick(b, a) => {
                    avoid.insert(a.clone());
                    ticks.insert(b.clone(), TickImage::Tick(a.clone()));
                }
                Binding::Diamond(a, k, kp) => {
                    ticks.insert(a.clone(), TickImage::Diamond(k.clone(), kp.clone()));
                }
            }
        }
        ApplyEnv { clocks: self.clock_map.clone(), vars, ticks, avoid }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        apply_term(t, &mut self.env())
    }

    pub fn apply_type(&self, a: &TypeExpr) -> TypeExpr {
        apply_type(a, &mut self.env())
    }

    /// Composition: applying `self` (Γ→Γ′) after `other` (Γ′→Γ″) equals
    /// applying the returned substitution (Γ→Γ″). Fails when a tick that
    /// `self` sends to ⋄ is reached through a tick binding of `other` and
    /// no target clock can carry the required collapse data.
    pub fn compose(&self, other: &SyntacticSubst) -> Result<SyntacticSubst, String> {
        let mut clock_map = BTreeMap::new();
        for (k, v) in &other.clock_map {
            clock_map.insert(k.clone(), self.clock_map.get(v).cloned().unwrap_or_else(|| v.clone()));
        }
        let mut bindings = Vec::new();
        for b in &other.bindings {
            match b {
                Binding::Term(x, t) => bindings.push(Binding::Term(x.clone(), self.apply_term(t))),
                Binding::Diamond(a, k, kp) => bindings.push(Binding::Diamond(a.clone(), k.clone(), kp.clone())),
                Binding::Tick(b, a) => {
                    let inner = self
                        .bindings
                        .iter()
                        .find_map(|bi| match bi {
                            Binding::Tick(a2, a0) if a2 == a => Some(TickImage::Tick(a0.clone())),
                            Binding::Diamond(a2, k, kp) if a2 == a => {
                                Some(TickImage::Diamond(k.clone(), kp.clone()))
                            }
                            _ => None,
                        })
                        .ok_or_else(|| format!("tick {a} unbound in the outer substitution"))?;
                    match inner {
                        TickImage::Tick(a0) => bindings.push(Binding::Tick(b.clone(), a0)),
                        TickImage::Diamond(_, _) => {
                            // The composite sends β directly to ⋄. Its clock
                            // κ_c needs an earlier target clock with the same
                            // composite image.
                            let kc = other
                                .dst
                                .lookup_tick(b)
                                .map(|(_, k)| k.to_string())
                                .ok_or_else(|| format!("tick {b} missing from target context"))?;
                            let img = clock_map.get(&kc).cloned().unwrap();
                            let pos = other.dst.clocks.iter().position(|c| *c == kc);
                            let witness = other.dst.clocks.iter().enumerate().find_map(|(i, c)| {
                                if pos.map_or(false, |p| i < p) && clock_map.get(c) == Some(&img) {
                                    Some(c.clone())
                                } else {
                                    None
                                }
                            });
                            match witness {
                                Some(kp) => bindings.push(Binding::Diamond(b.clone(), kc, kp)),
                                None => {
                                    return Err(format!(
                                        "composite sends tick {b} to the tick constant but no \
                                         earlier clock shares the image of {kc}"
                                    ))
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(SyntacticSubst { clock_map, bindings, src: self.src.clone(), dst: other.dst.clone() })
    }
}

fn apply_term(t: &Term, env: &mut ApplyEnv) -> Term {
    use Term::*;
    match t {
        Var(x) => env.vars.get(x).cloned().unwrap_or_else(|| Var(x.clone())),
        Lam(x, a, b) => {
            let a2 = apply_type(a, env);
            let x2 = env.bind_fresh(x);
            let old = env.vars.insert(x.clone(), Var(x2.clone()));
            let b2 = apply_term(b, env);
            restore(&mut env.vars, x, old);
            Lam(x2, Box::new(a2), Box::new(b2))
        }
        App(f, u) => App(Box::new(apply_term(f, env)), Box::new(apply_term(u, env))),
        Pair(a, b) => Pair(Box::new(apply_term(a, env)), Box::new(apply_term(b, env))),
        Fst(a) => Fst(Box::new(apply_term(a, env))),
        Snd(a) => Snd(Box::new(apply_term(a, env))),
        Refl(a) => Refl(Box::new(apply_term(a, env))),
        Zero => Zero,
        Suc(a) => Suc(Box::new(apply_term(a, env))),
        NatRec(z, s, n) => NatRec(
            Box::new(apply_term(z, env)),
            Box::new(apply_term(s, env)),
            Box::new(apply_term(n, env)),
        ),
        TickLam(a, k, b) => {
            let k2 = env.clock(k);
            let a2 = env.bind_fresh(a);
            let old = env.ticks.insert(a.clone(), TickImage::Tick(a2.clone()));
            let b2 = apply_term(b, env);
            restore(&mut env.ticks, a, old);
            TickLam(a2, k2, Box::new(b2))
        }
        TickApp(t, a) => match env.ticks.get(a).cloned() {
            None => TickApp(Box::new(apply_term(t, env)), a.clone()),
            Some(TickImage::Tick(b)) => TickApp(Box::new(apply_term(t, env)), b),
            Some(TickImage::Diamond(k, kp)) => {
                // t is typed with the ⋄-bound clock k in scope; rebind it to
                // a fresh clock for the witness position.
                let k2 = env.bind_fresh(&k);
                let old = env.clocks.insert(k.clone(), k2.clone());
                let t2 = apply_term(t, env);
                restore(&mut env.clocks, &k, old);
                let kp_img = env.clock(&kp);
                DiamondApp(Box::new(t2), k2, kp_img)
            }
        },
        DiamondApp(s, k, kp) => {
            let k2 = env.bind_fresh(k);
            let old = env.clocks.insert(k.clone(), k2.clone());
            let s2 = apply_term(s, env);
            restore(&mut env.clocks, k, old);
            DiamondApp(Box::new(s2), k2, env.clock(kp))
        }
        ClockLam(k, t) => {
            let k2 = env.bind_fresh(k);
            let old = env.clocks.insert(k.clone(), k2.clone());
            let t2 = apply_term(t, env);
            restore(&mut env.clocks, k, old);
            ClockLam(k2, Box::new(t2))
        }
        ClockApp(t, k) => ClockApp(Box::new(apply_term(t, env)), env.clock(k)),
        Dfix(k, t) => Dfix(env.clock(k), Box::new(apply_term(t, env))),
        Cirr(t) => Cirr(Box::new(apply_term(t, env))),
        Tirr(t) => Tirr(Box::new(apply_term(t, env))),
    }
}

fn apply_type(a: &TypeExpr, env: &mut ApplyEnv) -> TypeExpr {
    use TypeExpr::*;
    match a {
        Nat => Nat,
        Str(k) => Str(env.clock(k)),
        Pi(x, dom, b) | Sigma(x, dom, b) => {
            let dom2 = apply_type(dom, env);
            let x2 = env.bind_fresh(x);
            let old = env.vars.insert(x.clone(), Term::Var(x2.clone()));
            let b2 = apply_type(b, env);
            restore(&mut env.vars, x, old);
            if matches!(a, Pi(..)) {
                Pi(x2, Box::new(dom2), Box::new(b2))
            } else {
                Sigma(x2, Box::new(dom2), Box::new(b2))
            }
        }
        Id(a, t, u) => Id(
            Box::new(apply_type(a, env)),
            Box::new(apply_term(t, env)),
            Box::new(apply_term(u, env)),
        ),
        Later(tick, k, b) => {
            let k2 = env.clock(k);
            let t2 = env.bind_fresh(tick);
            let old = env.ticks.insert(tick.clone(), TickImage::Tick(t2.clone()));
            let b2 = apply_type(b, env);
            restore(&mut env.ticks, tick, old);
            Later(t2, k2, Box::new(b2))
        }
        Forall(k, b) => {
            let k2 = env.bind_fresh(k);
            let old = env.clocks.insert(k.clone(), k2.clone());
            let b2 = apply_type(b, env);
            restore(&mut env.clocks, k, old);
            Forall(k2, Box::new(b2))
        }
    }
}

fn restore<V>(map: &mut BTreeMap<Ident, V>, key: &str, old: Option<V>) {
    match old {
        Some(v) => {
            map.insert(key.to_string(), v);
        }
        None => {
            map.remove(key);
        }
    }
}

/// Capture-avoiding single-variable substitution `t[u/x]`.
pub fn subst_var_term(t: &Term, x: &str, u: &Term) -> Term {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_term(u, &mut avoid);
    free_ticks_term(u, &mut avoid);
    free_clocks_term(u, &mut avoid);
    free_vars_term(t, &mut avoid);
    free_ticks_term(t, &mut avoid);
    free_clocks_term(t, &mut avoid);
    env.avoid = avoid;
    env.vars.insert(x.to_string(), u.clone());
    apply_term(t, &mut env)
}

pub fn subst_var_type(a: &TypeExpr, x: &str, u: &Term) -> TypeExpr {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_term(u, &mut avoid);
    free_ticks_term(u, &mut avoid);
    free_clocks_term(u, &mut avoid);
    free_vars_type(a, &mut avoid);
    free_clocks_type(a, &mut avoid);
    env.avoid = avoid;
    env.vars.insert(x.to_string(), u.clone());
    apply_type(a, &mut env)
}

/// Tick renaming `t[b/a]`.
pub fn subst_tick_term(t: &Term, a: &str, b: &str) -> Term {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_term(t, &mut avoid);
    free_ticks_term(t, &mut avoid);
    free_clocks_term(t, &mut avoid);
    avoid.insert(b.to_string());
    env.avoid = avoid;
    env.ticks.insert(a.to_string(), TickImage::Tick(b.to_string()));
    apply_term(t, &mut env)
}

pub fn subst_tick_type(ty: &TypeExpr, a: &str, b: &str) -> TypeExpr {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_type(ty, &mut avoid);
    free_clocks_type(ty, &mut avoid);
    avoid.insert(b.to_string());
    env.avoid = avoid;
    env.ticks.insert(a.to_string(), TickImage::Tick(b.to_string()));
    apply_type(ty, &mut env)
}

/// Clock renaming `t[k'/k]`.
pub fn subst_clock_term(t: &Term, k: &str, kp: &str) -> Term {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_term(t, &mut avoid);
    free_ticks_term(t, &mut avoid);
    free_clocks_term(t, &mut avoid);
    avoid.insert(kp.to_string());
    env.avoid = avoid;
    env.clocks.insert(k.to_string(), kp.to_string());
    apply_term(t, &mut env)
}

pub fn subst_clock_type(a: &TypeExpr, k: &str, kp: &str) -> TypeExpr {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_type(a, &mut avoid);
    free_clocks_type(a, &mut avoid);
    avoid.insert(kp.to_string());
    env.avoid = avoid;
    env.clocks.insert(k.to_string(), kp.to_string());
    apply_type(a, &mut env)
}

/// Substitution of ⋄ for a single tick `a : k` (κ collapsing onto κ′),
/// the last formation rule applied to the identity.
pub fn subst_diamond_term(t: &Term, a: &str, k: &str, kp: &str) -> Term {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_term(t, &mut avoid);
    free_ticks_term(t, &mut avoid);
    free_clocks_term(t, &mut avoid);
    avoid.insert(kp.to_string());
    env.avoid = avoid;
    env.clocks.insert(k.to_string(), kp.to_string());
    env.ticks.insert(a.to_string(), TickImage::Diamond(k.to_string(), kp.to_string()));
    apply_term(t, &mut env)
}

pub fn subst_diamond_type(ty: &TypeExpr, a: &str, k: &str, kp: &str) -> TypeExpr {
    let mut env = ApplyEnv::default();
    let mut avoid = BTreeSet::new();
    free_vars_type(ty, &mut avoid);
    free_clocks_type(ty, &mut avoid);
    avoid.insert(kp.to_string());
    env.avoid = avoid;
    env.clocks.insert(k.to_string(), kp.to_string());
    env.ticks.insert(a.to_string(), TickImage::Diamond(k.to_string(), kp.to_string()));
    apply_type(ty, &mut env)
}

/// Inserts an entry at `position` of the judgement's context. The judgement
/// subject is untouched; the entry name must be unused.
pub fn weaken(j: &Judgement, position: usize, entry: Entry) -> Result<Judgement, String> {
    let ctx = j.context();
    if ctx.all_names().contains(entry.name()) {
        return Err(format!("weakening collides with existing name {}", entry.name()));
    }
    if let Entry::Tick(_, k) = &entry {
        if !ctx.has_clock(k) {
            return Err(format!("tick entry refers to unknown clock {k}"));
        }
    }
    if position > ctx.entries.len() {
        return Err("weakening position out of range".into());
    }
    let mut c = ctx.clone();
    c.entries.insert(position, entry);
    Ok(replace_ctx(j, c))
}

/// Adds a clock to the clock zone of the judgement's context.
pub fn weaken_clock(j: &Judgement, k: &str) -> Result<Judgement, String> {
    let ctx = j.context();
    if ctx.all_names().contains(k) {
        return Err(format!("clock weakening collides with existing name {k}"));
    }
    let mut c = ctx.clone();
    c.clocks.push(k.to_string());
    Ok(replace_ctx(j, c))
}

fn replace_ctx(j: &Judgement, c: Context) -> Judgement {
    match j {
        Judgement::CtxWf(_) => Judgement::CtxWf(c),
        Judgement::TypeWf(_, a) => Judgement::TypeWf(c, a.clone()),
        Judgement::Typing(_, t, a) => Judgement::Typing(c, t.clone(), a.clone()),
        Judgement::Equality(_, t, u, a) => Judgement::Equality(c, t.clone(), u.clone(), a.clone()),
    }
}
