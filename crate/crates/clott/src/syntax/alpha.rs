//! α-equivalence for terms and types. Bound variables, ticks, and clocks
//! may be renamed; free names must match exactly (free tick names are
//! significant, two different free ticks are different terms).

use super::ast::{Term, TypeExpr};

#[derive(Default, Clone)]
struct Renaming {
    // pairs of (left name, right name), innermost last
    vars: Vec<(String, String)>,
    ticks: Vec<(String, String)>,
    clocks: Vec<(String, String)>,
}

impl Renaming {
    fn matches(stack: &[(String, String)], l: &str, r: &str) -> bool {
        for (a, b) in stack.iter().rev() {
            let bound_l = a == l;
            let bound_r = b == r;
            if bound_l || bound_r {
                return bound_l && bound_r;
            }
        }
        l == r
    }

    fn var(&self, l: &str, r: &str) -> bool {
        Self::matches(&self.vars, l, r)
    }
    fn tick(&self, l: &str, r: &str) -> bool {
        Self::matches(&self.ticks, l, r)
    }
    fn clock(&self, l: &str, r: &str) -> bool {
        Self::matches(&self.clocks, l, r)
    }
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    term_eq(a, b, &mut Renaming::default())
}

pub fn alpha_eq_type(a: &TypeExpr, b: &TypeExpr) -> bool {
    type_eq(a, b, &mut Renaming::default())
}

fn term_eq(a: &Term, b: &Term, rn: &mut Renaming) -> bool {
    use Term::*;
    match (a, b) {
        (Var(x), Var(y)) => rn.var(x, y),
        (Lam(x, ax, t), Lam(y, ay, u)) => {
            type_eq(ax, ay, rn) && {
                rn.vars.push((x.clone(), y.clone()));
                let r = term_eq(t, u, rn);
                rn.vars.pop();
                r
            }
        }
        (App(f, t), App(g, u)) | (Pair(f, t), Pair(g, u)) => {
            term_eq(f, g, rn) && term_eq(t, u, rn)
        }
        (Fst(t), Fst(u)) | (Snd(t), Snd(u)) | (Refl(t), Refl(u)) | (Suc(t), Suc(u)) => {
            term_eq(t, u, rn)
        }
        (Zero, Zero) => true,
        (NatRec(z1, s1, n1), NatRec(z2, s2, n2)) => {
            term_eq(z1, z2, rn) && term_eq(s1, s2, rn) && term_eq(n1, n2, rn)
        }
        (TickLam(a1, k1, t), TickLam(a2, k2, u)) => {
            rn.clock(k1, k2) && {
                rn.ticks.push((a1.clone(), a2.clone()));
                let r = term_eq(t, u, rn);
                rn.ticks.pop();
                r
            }
        }
        (TickApp(t, a1), TickApp(u, a2)) => term_eq(t, u, rn) && rn.tick(a1, a2),
        (DiamondApp(s1, k1, j1), DiamondApp(s2, k2, j2)) => {
            rn.clock(j1, j2) && {
                rn.clocks.push((k1.clone(), k2.clone()));
                let r = term_eq(s1, s2, rn);
                rn.clocks.pop();
                r
            }
        }
        (ClockLam(k1, t), ClockLam(k2, u)) => {
            rn.clocks.push((k1.clone(), k2.clone()));
            let r = term_eq(t, u, rn);
            rn.clocks.pop();
            r
        }
        (ClockApp(t, k1), ClockApp(u, k2)) => term_eq(t, u, rn) && rn.clock(k1, k2),
        (Dfix(k1, t), Dfix(k2, u)) => rn.clock(k1, k2) && term_eq(t, u, rn),
        (Cirr(t), Cirr(u)) | (Tirr(t), Tirr(u)) => term_eq(t, u, rn),
        _ => false,
    }
}

fn type_eq(a: &TypeExpr, b: &TypeExpr, rn: &mut Renaming) -> bool {
    use TypeExpr::*;
    match (a, b) {
        (Nat, Nat) => true,
        (Str(k1), Str(k2)) => rn.clock(k1, k2),
        (Pi(x, a1, b1), Pi(y, a2, b2)) | (Sigma(x, a1, b1), Sigma(y, a2, b2)) => {
            type_eq(a1, a2, rn) && {
                rn.vars.push((x.clone(), y.clone()));
                let r = type_eq(b1, b2, rn);
                rn.vars.pop();
                r
            }
        }
        (Id(a1, t1, u1), Id(a2, t2, u2)) => {
            type_eq(a1, a2, rn) && term_eq(t1, t2, rn) && term_eq(u1, u2, rn)
        }
        (Later(a1, k1, b1), Later(a2, k2, b2)) => {
            rn.clock(k1, k2) && {
                rn.ticks.push((a1.clone(), a2.clone()));
                let r = type_eq(b1, b2, rn);
                rn.ticks.pop();
                r
            }
        }
        (Forall(k1, b1), Forall(k2, b2)) => {
            rn.clocks.push((k1.clone(), k2.clone()));
            let r = type_eq(b1, b2, rn);
            rn.clocks.pop();
            r
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::super::ast::*;
    use super::*;

    fn tapp(t: Term, a: &str) -> Term {
        Term::TickApp(Box::new(t), a.into())
    }

    #[test]
    fn bound_tick_renaming_is_invisible() {
        // tlam (a:k) x[a]  ==  tlam (b:k) x[b]
        let l = Term::TickLam("a".into(), "k".into(), Box::new(tapp(Term::Var("x".into()), "a")));
        let r = Term::TickLam("b".into(), "k".into(), Box::new(tapp(Term::Var("x".into()), "b")));
        assert!(alpha_eq_term(&l, &r));
    }

    #[test]
    fn bound_clock_renaming_is_invisible() {
        let l = Term::ClockLam("k".into(), Box::new(Term::ClockApp(Box::new(Term::Var("x".into())), "k".into())));
        let r = Term::ClockLam("j".into(), Box::new(Term::ClockApp(Box::new(Term::Var("x".into())), "j".into())));
        assert!(alpha_eq_term(&l, &r));
    }

    #[test]
    fn free_ticks_are_significant() {
        // x[a] vs x[a'] with both ticks free: distinct terms
        let l = tapp(Term::Var("x".into()), "a");
        let r = tapp(Term::Var("x".into()), "a'");
        assert!(!alpha_eq_term(&l, &r));
    }

    #[test]
    fn shadowing_respects_nearest_binder() {
        // lam (x:Nat) lam (x:Nat) x  ==  lam (x:Nat) lam (y:Nat) y
        let inner_l = Term::Lam("x".into(), Box::new(TypeExpr::Nat), Box::new(Term::Var("x".into())));
        let l = Term::Lam("x".into(), Box::new(TypeExpr::Nat), Box::new(inner_l));
        let inner_r = Term::Lam("y".into(), Box::new(TypeExpr::Nat), Box::new(Term::Var("y".into())));
        let r = Term::Lam("x".into(), Box::new(TypeExpr::Nat), Box::new(inner_r));
        assert!(alpha_eq_term(&l, &r));
        // ... but not lam (x) lam (y) x
        let inner_bad = Term::Lam("y".into(), Box::new(TypeExpr::Nat), Box::new(Term::Var("x".into())));
        let bad = Term::Lam("x".into(), Box::new(TypeExpr::Nat), Box::new(inner_bad));
        assert!(!alpha_eq_term(&l, &bad));
    }

    #[test]
    fn diamond_witness_clock_is_binding() {
        let mk = |k: &str| {
            Term::DiamondApp(
                Box::new(Term::TickLam("a".into(), k.into(), Box::new(Term::Zero))),
                k.into(),
                "k0".into(),
            )
        };
        assert!(alpha_eq_term(&mk("k1"), &mk("k2")));
    }
}
