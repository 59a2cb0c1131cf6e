//! Pretty printer matching the concrete grammar; `parse . print` is the
//! identity up to α-equivalence.

use std::fmt::Write;

use super::ast::*;

pub fn print_type(a: &TypeExpr) -> String {
    let mut s = String::new();
    ty(a, &mut s);
    s
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    tm(t, Prec::Top, &mut s);
    s
}

pub fn print_context(c: &Context) -> String {
    let mut s = String::new();
    write!(s, "clocks {};", c.clocks.join(" ")).unwrap();
    if !c.entries.is_empty() {
        s.push_str(" ctx ");
        let parts: Vec<String> = c
            .entries
            .iter()
            .map(|e| match e {
                Entry::Term(x, a) => format!("{x} : {}", print_type(a)),
                Entry::Tick(a, k) => format!("{a} : {k}"),
            })
            .collect();
        s.push_str(&parts.join(", "));
        s.push(';');
    }
    s
}

pub fn print_judgement(j: &Judgement) -> String {
    let mut s = print_context(j.context());
    s.push(' ');
    match j {
        Judgement::CtxWf(_) => s.push_str("type Nat"),
        Judgement::TypeWf(_, a) => {
            write!(s, "type {}", print_type(a)).unwrap();
        }
        Judgement::Typing(_, t, a) => {
            write!(s, "{} : {}", print_term(t), print_type(a)).unwrap();
        }
        Judgement::Equality(_, t, u, a) => {
            write!(s, "{} = {} : {}", print_term(t), print_term(u), print_type(a)).unwrap();
        }
    }
    s
}

fn ty(a: &TypeExpr, out: &mut String) {
    match a {
        TypeExpr::Nat => out.push_str("Nat"),
        TypeExpr::Str(k) => {
            write!(out, "Str[{k}]").unwrap();
        }
        TypeExpr::Pi(x, a, b) => {
            write!(out, "Pi ({x} : ").unwrap();
            ty(a, out);
            out.push_str(") ");
            ty(b, out);
        }
        TypeExpr::Sigma(x, a, b) => {
            write!(out, "Sig ({x} : ").unwrap();
            ty(a, out);
            out.push_str(") ");
            ty(b, out);
        }
        TypeExpr::Id(a, t, u) => {
            out.push_str("Id ");
            ty_atom(a, out);
            out.push(' ');
            tm(t, Prec::Atom, out);
            out.push(' ');
            tm(u, Prec::Atom, out);
        }
        TypeExpr::Later(tick, k, a) => {
            write!(out, "Later ({tick} : {k}) ").unwrap();
            ty(a, out);
        }
        TypeExpr::Forall(k, a) => {
            write!(out, "Forall {k} ").unwrap();
            ty(a, out);
        }
    }
}

fn ty_atom(a: &TypeExpr, out: &mut String) {
    match a {
        TypeExpr::Nat | TypeExpr::Str(_) => ty(a, out),
        _ => {
            out.push('(');
            ty(a, out);
            out.push(')');
        }
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
enum Prec {
    Top,     // binders extend maximally
    App,     // left operand of application
    Postfix, // operand of [..] and prefix operators
    Atom,
}

fn tm(t: &Term, prec: Prec, out: &mut String) {
    match nat_value(t) {
        Some(n) => {
            write!(out, "{n}").unwrap();
            return;
        }
        None => {}
    }
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Zero => out.push('0'),
        Term::Lam(x, a, b) => {
            paren_if(prec > Prec::Top, out, |out| {
                write!(out, "lam ({x} : ").unwrap();
                ty(a, out);
                out.push_str(") ");
                tm(b, Prec::Top, out);
            });
        }
        Term::TickLam(a, k, b) => {
            paren_if(prec > Prec::Top, out, |out| {
                write!(out, "tlam ({a} : {k}) ").unwrap();
                tm(b, Prec::Top, out);
            });
        }
        Term::ClockLam(k, b) => {
            paren_if(prec > Prec::Top, out, |out| {
                write!(out, "clam {k} ").unwrap();
                tm(b, Prec::Top, out);
            });
        }
        Term::App(f, u) => {
            paren_if(prec > Prec::App, out, |out| {
                tm(f, Prec::App, out);
                out.push(' ');
                tm(u, Prec::Postfix, out);
            });
        }
        Term::Pair(a, b) => {
            paren_if(prec > Prec::App, out, |out| {
                out.push_str("pair ");
                tm(a, Prec::Atom, out);
                out.push(' ');
                tm(b, Prec::Atom, out);
            });
        }
        Term::Fst(a) => prefix1("fst", a, prec, out),
        Term::Snd(a) => prefix1("snd", a, prec, out),
        Term::Refl(a) => prefix1("refl", a, prec, out),
        Term::Suc(a) => prefix1("suc", a, prec, out),
        Term::Cirr(a) => prefix1("cirr", a, prec, out),
        Term::Tirr(a) => prefix1("tirr", a, prec, out),
        Term::NatRec(z, s, n) => {
            paren_if(prec > Prec::App, out, |out| {
                out.push_str("natrec ");
                tm(z, Prec::Atom, out);
                out.push(' ');
                tm(s, Prec::Atom, out);
                out.push(' ');
                tm(n, Prec::Atom, out);
            });
        }
        Term::TickApp(t, a) => {
            paren_if(prec > Prec::Postfix, out, |out| {
                tm(t, Prec::Postfix, out);
                write!(out, " [{a}]").unwrap();
            });
        }
        Term::ClockApp(t, k) => {
            paren_if(prec > Prec::Postfix, out, |out| {
                tm(t, Prec::Postfix, out);
                write!(out, " [{k}]").unwrap();
            });
        }
        Term::DiamondApp(s, k, kp) => {
            paren_if(prec > Prec::App, out, |out| {
                out.push_str("adv ");
                tm(s, Prec::Atom, out);
                write!(out, " {k} {kp}").unwrap();
            });
        }
        Term::Dfix(k, b) => {
            paren_if(prec > Prec::App, out, |out| {
                write!(out, "dfix {k} ").unwrap();
                tm(b, Prec::Atom, out);
            });
        }
    }
}

fn prefix1(kw: &str, a: &Term, prec: Prec, out: &mut String) {
    paren_if(prec > Prec::App, out, |out| {
        out.push_str(kw);
        out.push(' ');
        tm(a, Prec::Atom, out);
    });
}

fn paren_if(cond: bool, out: &mut String, f: impl FnOnce(&mut String)) {
    if cond {
        out.push('(');
        f(out);
        out.push(')');
    } else {
        f(out);
    }
}

fn nat_value(t: &Term) -> Option<u64> {
    match t {
        Term::Zero => Some(0),
        Term::Suc(inner) => nat_value(inner).map(|n| n + 1),
        _ => None,
    }
}
