//! Abstract syntax for the clocked calculus: types, terms, and two-zone
//! contexts (a clock zone and an entry zone of variables and ticks).

use std::collections::BTreeSet;
use std::fmt;

pub type Ident = String;

/// A clock variable from the clock zone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockVar(pub Ident);

/// A tick variable; evidence that one step has passed on its clock.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TickVar(pub Ident);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    Nat,
    /// `Pi (x:A) B`
    Pi(Ident, Box<TypeExpr>, Box<TypeExpr>),
    /// `Sig (x:A) B`
    Sigma(Ident, Box<TypeExpr>, Box<TypeExpr>),
    /// `Id A t u`
    Id(Box<TypeExpr>, Box<Term>, Box<Term>),
    /// `Later (a:k) A`: a dependent function type over ticks on clock `k`.
    Later(Ident, Ident, Box<TypeExpr>),
    /// `Forall k A`: quantification over clocks.
    Forall(Ident, Box<TypeExpr>),
    /// `Str[k]`: the built-in guarded stream type on clock `k`.
    Str(Ident),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(Ident),
    /// `lam (x:A) t`
    Lam(Ident, Box<TypeExpr>, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Refl(Box<Term>),
    Zero,
    Suc(Box<Term>),
    /// `natrec z s n`: the Nat eliminator with a non-dependent motive.
    NatRec(Box<Term>, Box<Term>, Box<Term>),
    /// `tlam (a:k) t`: tick abstraction.
    TickLam(Ident, Ident, Box<Term>),
    /// `t [a]`: application to a tick in scope.
    TickApp(Box<Term>, Ident),
    /// `adv s k k'`: application to the tick constant. The witness `s` is
    /// typed with `k` as an extra clock; the displayed term is `s[k'/k]`
    /// applied to the constant tick. `k` is binding within `s`.
    DiamondApp(Box<Term>, Ident, Ident),
    /// `clam k t`: clock abstraction.
    ClockLam(Ident, Box<Term>),
    /// `t [k']`: clock application.
    ClockApp(Box<Term>, Ident),
    /// `dfix k t`: the guarded fixed point on clock `k`.
    Dfix(Ident, Box<Term>),
    /// `cirr t`: the clock irrelevance axiom constant.
    Cirr(Box<Term>),
    /// `tirr t`: the tick irrelevance axiom constant.
    Tirr(Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    /// `x : A`
    Term(Ident, TypeExpr),
    /// `a : k` with `k` a clock in the clock zone.
    Tick(Ident, Ident),
}

impl Entry {
    pub fn name(&self) -> &str {
        match self {
            Entry::Term(x, _) => x,
            Entry::Tick(a, _) => a,
        }
    }
}

/// A two-zone context `Γ ⊢_Δ`: an ordered clock zone and an ordered entry
/// list mixing variable and tick assumptions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    pub clocks: Vec<Ident>,
    pub entries: Vec<Entry>,
}

impl Context {
    pub fn new(clocks: Vec<Ident>) -> Self {
        Context { clocks, entries: Vec::new() }
    }

    pub fn with_entry(&self, e: Entry) -> Self {
        let mut c = self.clone();
        c.entries.push(e);
        c
    }

    pub fn with_clock(&self, k: impl Into<Ident>) -> Self {
        let mut c = self.clone();
        c.clocks.push(k.into());
        c
    }

    pub fn has_clock(&self, k: &str) -> bool {
        self.clocks.iter().any(|c| c == k)
    }

    pub fn lookup_var(&self, x: &str) -> Option<(usize, &TypeExpr)> {
        self.entries.iter().enumerate().rev().find_map(|(i, e)| match e {
            Entry::Term(y, a) if y == x => Some((i, a)),
            _ => None,
        })
    }

    pub fn lookup_tick(&self, a: &str) -> Option<(usize, &str)> {
        self.entries.iter().enumerate().rev().find_map(|(i, e)| match e {
            Entry::Tick(b, k) if b == a => Some((i, k.as_str())),
            _ => None,
        })
    }

    /// The prefix context of the entries strictly before index `i`.
    pub fn prefix(&self, i: usize) -> Context {
        Context { clocks: self.clocks.clone(), entries: self.entries[..i].to_vec() }
    }

    /// Every name (clock, variable, tick) bound by the context.
    pub fn all_names(&self) -> BTreeSet<Ident> {
        let mut s: BTreeSet<Ident> = self.clocks.iter().cloned().collect();
        for e in &self.entries {
            s.insert(e.name().to_string());
        }
        s
    }
}

/// The judgement forms the checker accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgement {
    CtxWf(Context),
    TypeWf(Context, TypeExpr),
    Typing(Context, Term, TypeExpr),
    Equality(Context, Term, Term, TypeExpr),
}

impl Judgement {
    pub fn context(&self) -> &Context {
        match self {
            Judgement::CtxWf(c)
            | Judgement::TypeWf(c, _)
            | Judgement::Typing(c, _, _)
            | Judgement::Equality(c, _, _, _) => c,
        }
    }
}

/// Picks a name based on `base` that avoids everything in `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<Ident>) -> Ident {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "x" } else { stem };
    if !taken.contains(base) && !base.is_empty() {
        return base.to_string();
    }
    let mut i = 1usize;
    loop {
        let cand = format!("{stem}{i}");
        if !taken.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

pub fn free_vars_term(t: &Term, out: &mut BTreeSet<Ident>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Lam(x, a, b) => {
            free_vars_type(a, out);
            let mut inner = BTreeSet::new();
            free_vars_term(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
        Term::App(f, u) => {
            free_vars_term(f, out);
            free_vars_term(u, out);
        }
        Term::Pair(a, b) => {
            free_vars_term(a, out);
            free_vars_term(b, out);
        }
        Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Suc(a) => free_vars_term(a, out),
        Term::Zero => {}
        Term::NatRec(z, s, n) => {
            free_vars_term(z, out);
            free_vars_term(s, out);
            free_vars_term(n, out);
        }
        Term::TickLam(a, _, b) => {
            let mut inner = BTreeSet::new();
            free_vars_term(b, &mut inner);
            inner.remove(a);
            out.extend(inner);
        }
        Term::TickApp(t, a) => {
            free_vars_term(t, out);
            out.insert(a.clone());
        }
        Term::DiamondApp(s, _, _) => free_vars_term(s, out),
        Term::ClockLam(_, t) | Term::ClockApp(t, _) | Term::Dfix(_, t) => free_vars_term(t, out),
        Term::Cirr(t) | Term::Tirr(t) => free_vars_term(t, out),
    }
}

pub fn free_vars_type(a: &TypeExpr, out: &mut BTreeSet<Ident>) {
    match a {
        TypeExpr::Nat | TypeExpr::Str(_) => {}
        TypeExpr::Pi(x, a, b) | TypeExpr::Sigma(x, a, b) => {
            free_vars_type(a, out);
            let mut inner = BTreeSet::new();
            free_vars_type(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
        TypeExpr::Id(a, t, u) => {
            free_vars_type(a, out);
            free_vars_term(t, out);
            free_vars_term(u, out);
        }
        TypeExpr::Later(tick, _, a) => {
            let mut inner = BTreeSet::new();
            free_vars_type(a, &mut inner);
            inner.remove(tick);
            out.extend(inner);
        }
        TypeExpr::Forall(_, a) => free_vars_type(a, out),
    }
}

pub fn free_clocks_term(t: &Term, out: &mut BTreeSet<Ident>) {
    match t {
        Term::Var(_) | Term::Zero => {}
        Term::Lam(_, a, b) => {
            free_clocks_type(a, out);
            free_clocks_term(b, out);
        }
        Term::App(f, u) | Term::Pair(f, u) => {
            free_clocks_term(f, out);
            free_clocks_term(u, out);
        }
        Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Suc(a) => free_clocks_term(a, out),
        Term::NatRec(z, s, n) => {
            free_clocks_term(z, out);
            free_clocks_term(s, out);
            free_clocks_term(n, out);
        }
        Term::TickLam(_, k, b) => {
            out.insert(k.clone());
            free_clocks_term(b, out);
        }
        Term::TickApp(t, _) => free_clocks_term(t, out),
        Term::DiamondApp(s, k, k2) => {
            let mut inner = BTreeSet::new();
            free_clocks_term(s, &mut inner);
            inner.remove(k);
            out.extend(inner);
            out.insert(k2.clone());
        }
        Term::ClockLam(k, t) => {
            let mut inner = BTreeSet::new();
            free_clocks_term(t, &mut inner);
            inner.remove(k);
            out.extend(inner);
        }
        Term::ClockApp(t, k) => {
            free_clocks_term(t, out);
            out.insert(k.clone());
        }
        Term::Dfix(k, t) => {
            out.insert(k.clone());
            free_clocks_term(t, out);
        }
        Term::Cirr(t) | Term::Tirr(t) => free_clocks_term(t, out),
    }
}

pub fn free_clocks_type(a: &TypeExpr, out: &mut BTreeSet<Ident>) {
    match a {
        TypeExpr::Nat => {}
        TypeExpr::Str(k) => {
            out.insert(k.clone());
        }
        TypeExpr::Pi(_, a, b) | TypeExpr::Sigma(_, a, b) => {
            free_clocks_type(a, out);
            free_clocks_type(b, out);
        }
        TypeExpr::Id(a, t, u) => {
            free_clocks_type(a, out);
            free_clocks_term(t, out);
            free_clocks_term(u, out);
        }
        TypeExpr::Later(_, k, a) => {
            out.insert(k.clone());
            free_clocks_type(a, out);
        }
        TypeExpr::Forall(k, a) => {
            let mut inner = BTreeSet::new();
            free_clocks_type(a, &mut inner);
            inner.remove(k);
            out.extend(inner);
        }
    }
}

/// Free ticks of a term (tick binders and context splits remove them).
pub fn free_ticks_term(t: &Term, out: &mut BTreeSet<Ident>) {
    match t {
        Term::Var(_) | Term::Zero => {}
        Term::Lam(_, _, b) => free_ticks_term(b, out),
        Term::App(f, u) | Term::Pair(f, u) => {
            free_ticks_term(f, out);
            free_ticks_term(u, out);
        }
        Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Suc(a) => free_ticks_term(a, out),
        Term::NatRec(z, s, n) => {
            free_ticks_term(z, out);
            free_ticks_term(s, out);
            free_ticks_term(n, out);
        }
        Term::TickLam(a, _, b) => {
            let mut inner = BTreeSet::new();
            free_ticks_term(b, &mut inner);
            inner.remove(a);
            out.extend(inner);
        }
        Term::TickApp(t, a) => {
            free_ticks_term(t, out);
            out.insert(a.clone());
        }
        Term::DiamondApp(s, _, _) => free_ticks_term(s, out),
        Term::ClockLam(_, t) | Term::ClockApp(t, _) | Term::Dfix(_, t) => free_ticks_term(t, out),
        Term::Cirr(t) | Term::Tirr(t) => free_ticks_term(t, out),
    }
}

/// Shorthand for `Later (a:k) A` with an unused tick.
pub fn later(k: &str, a: TypeExpr) -> TypeExpr {
    TypeExpr::Later("_".into(), k.into(), Box::new(a))
}

/// The one-step definitional unfolding `Str[k] = Sig (_:Nat) Later (a:k) Str[k]`.
pub fn str_unfold(k: &str) -> TypeExpr {
    TypeExpr::Sigma(
        "_".into(),
        Box::new(TypeExpr::Nat),
        Box::new(later(k, TypeExpr::Str(k.into()))),
    )
}

pub fn nat_lit(n: u64) -> Term {
    let mut t = Term::Zero;
    for _ in 0..n {
        t = Term::Suc(Box::new(t));
    }
    t
}

impl fmt::Display for ClockVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TickVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
