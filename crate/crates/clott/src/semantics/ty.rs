//! Types over a context presheaf and the per-(world, environment) set
//! descriptors they produce: membership, bounded enumeration, restriction,
//! and type-directed equality (extensional on function values).

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::semantics::psh::Psh;
use crate::semantics::value::SemValue;
use crate::semantics::{Bounds, SemMap};
use crate::syntax::Ident;
use crate::worlds::*;
use crate::{sem_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetKind {
    Unit,
    Nat,
    Sigma,
    Pi,
    Later(Ident),
    Forall(Ident),
    /// Identity sets are subsingletons; the flag records inhabitation.
    Id(bool),
    Str(Ident),
}

type ContainsFn = dyn Fn(&SemValue, &Bounds) -> Result<bool>;
type EnumFn = dyn Fn(&Bounds) -> Result<Vec<SemValue>>;
type EqFn = dyn Fn(&SemValue, &SemValue, &Bounds) -> Result<bool>;

/// The carrier of a type at one world and environment.
#[derive(Clone)]
pub struct SetDesc {
    pub kind: SetKind,
    contains: Rc<ContainsFn>,
    enumerate: Rc<EnumFn>,
    equal: Rc<EqFn>,
    /// Argument probes for Kripke quantification when they must differ
    /// from the enumeration (families padded for later use).
    arg_sample: Option<Rc<EnumFn>>,
}

impl SetDesc {
    pub fn contains(&self, v: &SemValue, bounds: &Bounds) -> Result<bool> {
        (self.contains)(v, bounds)
    }

    pub fn enumerate(&self, bounds: &Bounds) -> Result<Vec<SemValue>> {
        (self.enumerate)(bounds)
    }

    /// Argument probes for Kripke quantification: the enumeration when it
    /// exists, thinned deterministically to the sample cap; no probes for
    /// function spaces.
    pub fn sample(&self, bounds: &Bounds) -> Result<Vec<SemValue>> {
        let raw = match &self.arg_sample {
            Some(f) => f(bounds),
            None => (self.enumerate)(bounds),
        };
        match raw {
            Ok(v) => {
                if v.len() <= bounds.sample_cap || bounds.sample_cap == 0 {
                    Ok(v)
                } else {
                    let stride = v.len().div_ceil(bounds.sample_cap);
                    Ok(v.into_iter().step_by(stride).collect())
                }
            }
            Err(Error::NotEnumerable(_)) => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    }

    pub fn equal(&self, a: &SemValue, b: &SemValue, bounds: &Bounds) -> Result<bool> {
        (self.equal)(a, b, bounds)
    }

    pub fn unit() -> SetDesc {
        SetDesc {
            kind: SetKind::Unit,
            contains: Rc::new(|v, _| Ok(matches!(v, SemValue::Star))),
            enumerate: Rc::new(|_| Ok(vec![SemValue::Star])),
            equal: Rc::new(|a, b, _| {
                Ok(matches!(a, SemValue::Star) && matches!(b, SemValue::Star))
            }),
            arg_sample: None,
        }
    }

    pub fn nat() -> SetDesc {
        SetDesc {
            kind: SetKind::Nat,
            contains: Rc::new(|v, _| Ok(matches!(v, SemValue::Nat(_)))),
            enumerate: Rc::new(|bounds| Ok((0..bounds.nat_bound).map(SemValue::Nat).collect())),
            equal: Rc::new(|a, b, _| Ok(a.as_nat()? == b.as_nat()?)),
            arg_sample: None,
        }
    }

    pub fn id(inhabited: bool) -> SetDesc {
        SetDesc {
            kind: SetKind::Id(inhabited),
            contains: Rc::new(move |v, _| Ok(inhabited && matches!(v, SemValue::Refl))),
            enumerate: Rc::new(move |_| {
                Ok(if inhabited { vec![SemValue::Refl] } else { vec![] })
            }),
            equal: Rc::new(|a, b, _| {
                Ok(matches!(a, SemValue::Refl) && matches!(b, SemValue::Refl))
            }),
            arg_sample: None,
        }
    }

    pub fn sigma(fst: SetDesc, snd: Rc<dyn Fn(&SemValue, &Bounds) -> Result<SetDesc>>) -> SetDesc {
        let f1 = fst.clone();
        let s1 = snd.clone();
        let contains = move |v: &SemValue, bounds: &Bounds| -> Result<bool> {
            let SemValue::Pair(a, b) = v else { return Ok(false) };
            Ok(f1.contains(a, bounds)? && s1(a, bounds)?.contains(b, bounds)?)
        };
        let f2 = fst.clone();
        let s2 = snd.clone();
        let enumerate = move |bounds: &Bounds| -> Result<Vec<SemValue>> {
            let mut out = Vec::new();
            for a in f2.enumerate(bounds)? {
                for b in s2(&a, bounds)?.enumerate(bounds)? {
                    out.push(SemValue::pair(a.clone(), b));
                }
            }
            Ok(out)
        };
        let f3 = fst;
        let s3 = snd;
        let equal = move |l: &SemValue, r: &SemValue, bounds: &Bounds| -> Result<bool> {
            let (la, lb) = l.as_pair()?;
            let (ra, rb) = r.as_pair()?;
            Ok(f3.equal(la, ra, bounds)? && s3(la, bounds)?.equal(lb, rb, bounds)?)
        };
        SetDesc {
            kind: SetKind::Sigma,
            contains: Rc::new(contains),
            enumerate: Rc::new(enumerate),
            equal: Rc::new(equal),
            arg_sample: None,
        }
    }

    /// The guarded stream carrier at a given tick budget: right-nested
    /// tuples (n_k, (.., (n_0, *)..)) of length budget+1.
    pub fn str_set(k: Ident, len: usize) -> SetDesc {
        fn shape_ok(v: &SemValue, len: usize) -> bool {
            if len == 0 {
                return matches!(v, SemValue::Star);
            }
            match v {
                SemValue::Pair(a, b) => matches!(**a, SemValue::Nat(_)) && shape_ok(b, len - 1),
                _ => false,
            }
        }
        fn enum_len(len: usize, bounds: &Bounds) -> Vec<SemValue> {
            if len == 0 {
                return vec![SemValue::Star];
            }
            let mut out = Vec::new();
            for tail in enum_len(len - 1, bounds) {
                for n in 0..bounds.nat_bound {
                    out.push(SemValue::pair(SemValue::Nat(n), tail.clone()));
                }
            }
            out
        }
        let l1 = len;
        let l2 = len;
        SetDesc {
            kind: SetKind::Str(k),
            contains: Rc::new(move |v, _| Ok(shape_ok(v, l1))),
            enumerate: Rc::new(move |bounds| Ok(enum_len(l2, bounds))),
            equal: Rc::new(|a, b, _| a.struct_eq(b)),
            arg_sample: None,
        }
    }

    /// A Kripke function space at (w, γ). Membership quantifies over the
    /// truncated targets and enumerable argument sets; function-typed
    /// arguments have no probes, so such positions only check shape.
    pub fn pi(w: World, env: SemValue, base: Psh, dom: SemTy, cod: SemTy) -> SetDesc {
        let delta = base.delta.clone();
        let mk = move || (w.clone(), env.clone(), base.clone(), dom.clone(), cod.clone(), delta.clone());
        let (w1, env1, base1, dom1, cod1, delta1) = mk();
        let contains = move |v: &SemValue, bounds: &Bounds| -> Result<bool> {
            let SemValue::Fn { .. } = v else { return Ok(false) };
            for w2 in bounds.targets_from(&w1, &delta1) {
                for tau in enumerate_morphisms(&w1, &w2) {
                    let env2 = base1.restrict(&tau, &env1, bounds)?;
                    for arg in dom1.set_at(&w2, &env2, bounds)?.sample(bounds)? {
                        let out = v.apply(&tau, &arg, bounds)?;
                        let cod_set =
                            cod1.set_at(&w2, &SemValue::pair(env2.clone(), arg), bounds)?;
                        if !cod_set.contains(&out, bounds)? {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        };
        let (w3, env3, base3, dom3, cod3, delta3) = mk();
        let equal = move |l: &SemValue, r: &SemValue, bounds: &Bounds| -> Result<bool> {
            for w2 in bounds.targets_from(&w3, &delta3) {
                for tau in enumerate_morphisms(&w3, &w2) {
                    let env2 = base3.restrict(&tau, &env3, bounds)?;
                    for arg in dom3.set_at(&w2, &env2, bounds)?.sample(bounds)? {
                        let a = l.apply(&tau, &arg, bounds)?;
                        let b = r.apply(&tau, &arg, bounds)?;
                        let cod_set =
                            cod3.set_at(&w2, &SemValue::pair(env2.clone(), arg), bounds)?;
                        if !cod_set.equal(&a, &b, bounds)? {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        };
        SetDesc {
            kind: SetKind::Pi,
            contains: Rc::new(contains),
            enumerate: Rc::new(|_| {
                Err(Error::NotEnumerable("Kripke function space".into()))
            }),
            equal: Rc::new(equal),
            arg_sample: None,
        }
    }

    /// Wraps an inner descriptor under the later kind (positive budget).
    pub fn later_wrap(k: Ident, inner: SetDesc) -> SetDesc {
        SetDesc { kind: SetKind::Later(k), ..inner }
    }
}

/// Set equality by mutual containment over the enumeration.
pub fn set_eq(a: &SetDesc, b: &SetDesc, bounds: &Bounds) -> Result<bool> {
    let ea = a.enumerate(bounds)?;
    let eb = b.enumerate(bounds)?;
    for x in &ea {
        if !b.contains(x, bounds)? {
            return Ok(false);
        }
    }
    for y in &eb {
        if !a.contains(y, bounds)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Set equality probed on a caller-supplied pool (for function spaces).
pub fn set_eq_with_pool(
    a: &SetDesc,
    b: &SetDesc,
    pool: &[SemValue],
    bounds: &Bounds,
) -> Result<bool> {
    match set_eq(a, b, bounds) {
        Ok(r) => Ok(r),
        Err(Error::NotEnumerable(_)) => {
            for v in pool {
                if a.contains(v, bounds)? != b.contains(v, bounds)? {
                    return Ok(false);
                }
            }
            Ok(a.kind == b.kind)
        }
        Err(e) => Err(e),
    }
}

type SetAtFn = dyn Fn(&World, &SemValue, &Bounds) -> Result<SetDesc>;
type TyRestrictFn = dyn Fn(&TimeMorphism, &SemValue, &SemValue, &Bounds) -> Result<SemValue>;

/// A type over a context presheaf: a set per (world, environment) plus the
/// restriction action on elements.
#[derive(Clone)]
pub struct SemTy {
    pub base: Psh,
    set_at: Rc<SetAtFn>,
    restrict: Rc<TyRestrictFn>,
}

/// A term over a context presheaf: an element of a type per (world,
/// environment), natural in the world.
#[derive(Clone)]
pub struct SemTerm {
    eval: Rc<dyn Fn(&World, &SemValue, &Bounds) -> Result<SemValue>>,
}

impl SemTerm {
    pub fn new(f: impl Fn(&World, &SemValue, &Bounds) -> Result<SemValue> + 'static) -> SemTerm {
        SemTerm { eval: Rc::new(f) }
    }

    pub fn eval(&self, w: &World, env: &SemValue, bounds: &Bounds) -> Result<SemValue> {
        (self.eval)(w, env, bounds)
    }

    /// Precomposition with an environment map.
    pub fn subst(&self, m: &SemMap) -> SemTerm {
        let t = self.clone();
        let m = m.clone();
        SemTerm::new(move |w, env, bounds| t.eval(w, &m.apply(w, env, bounds)?, bounds))
    }
}

impl SemTy {
    pub fn new(
        base: Psh,
        set_at: impl Fn(&World, &SemValue, &Bounds) -> Result<SetDesc> + 'static,
        restrict: impl Fn(&TimeMorphism, &SemValue, &SemValue, &Bounds) -> Result<SemValue> + 'static,
    ) -> SemTy {
        SemTy { base, set_at: Rc::new(set_at), restrict: Rc::new(restrict) }
    }

    pub fn set_at(&self, w: &World, env: &SemValue, bounds: &Bounds) -> Result<SetDesc> {
        (self.set_at)(w, env, bounds)
    }

    /// τ · x for x ∈ A(γ); the result lives over the restricted
    /// environment.
    pub fn restrict(
        &self,
        tau: &TimeMorphism,
        env: &SemValue,
        x: &SemValue,
        bounds: &Bounds,
    ) -> Result<SemValue> {
        (self.restrict)(tau, env, x, bounds)
    }

    pub fn values_equal(
        &self,
        w: &World,
        env: &SemValue,
        a: &SemValue,
        b: &SemValue,
        bounds: &Bounds,
    ) -> Result<bool> {
        self.set_at(w, env, bounds)?.equal(a, b, bounds)
    }

    pub fn nat(base: Psh) -> SemTy {
        SemTy::new(base, |_, _, _| Ok(SetDesc::nat()), |_, _, x, _| Ok(x.clone()))
    }

    pub fn id_ty(base: Psh, a: SemTy, left: SemTerm, right: SemTerm) -> SemTy {
        let a1 = a.clone();
        let l1 = left.clone();
        let r1 = right.clone();
        SemTy::new(
            base,
            move |w, env, bounds| {
                let lv = l1.eval(w, env, bounds)?;
                let rv = r1.eval(w, env, bounds)?;
                let inhabited = a1.set_at(w, env, bounds)?.equal(&lv, &rv, bounds)?;
                Ok(SetDesc::id(inhabited))
            },
            |_, _, x, _| match x {
                SemValue::Refl => Ok(SemValue::Refl),
                other => sem_err(format!("restricting a non-refl identity proof {other:?}")),
            },
        )
    }

    pub fn str_g(base: Psh, k: Ident) -> SemTy {
        let k1 = k.clone();
        let k2 = k;
        SemTy::new(
            base,
            move |w, _, _| Ok(SetDesc::str_set(k1.clone(), w.tick_of(&k1) as usize + 1)),
            move |tau, _, x, _| {
                let src_len = tau.src.tick_of(&k2) as usize + 1;
                let dst_len = tau.dst.tick_of(&k2) as usize + 1;
                let mut v = x.clone();
                for _ in dst_len..src_len {
                    let (_, tail) = v.as_pair()?;
                    let tail = tail.clone();
                    v = tail;
                }
                Ok(v)
            },
        )
    }

    pub fn pi(base: Psh, dom: SemTy, cod: SemTy) -> SemTy {
        let b1 = base.clone();
        let d1 = dom.clone();
        let c1 = cod.clone();
        let set_at = move |w: &World, env: &SemValue, _bounds: &Bounds| -> Result<SetDesc> {
            Ok(SetDesc::pi(w.clone(), env.clone(), b1.clone(), d1.clone(), c1.clone()))
        };
        let restrict = move |tau: &TimeMorphism, _env: &SemValue, x: &SemValue, _bounds: &Bounds| {
            let x = x.clone();
            let tau = tau.clone();
            Ok(SemValue::func(tau.dst.clone(), move |rho, arg, bounds| {
                x.apply(&tau.then(rho).map_err(Error::World)?, arg, bounds)
            }))
        };
        SemTy::new(base, set_at, restrict)
    }

    pub fn sigma(base: Psh, dom: SemTy, cod: SemTy) -> SemTy {
        let d1 = dom.clone();
        let c1 = cod.clone();
        let set_at = move |w: &World, env: &SemValue, bounds: &Bounds| -> Result<SetDesc> {
            let fst = d1.set_at(w, env, bounds)?;
            let c2 = c1.clone();
            let w2 = w.clone();
            let env2 = env.clone();
            let snd = Rc::new(move |a: &SemValue, bounds: &Bounds| {
                c2.set_at(&w2, &SemValue::pair(env2.clone(), a.clone()), bounds)
            });
            Ok(SetDesc::sigma(fst, snd))
        };
        let d2 = dom;
        let c3 = cod;
        let restrict = move |tau: &TimeMorphism, env: &SemValue, x: &SemValue, bounds: &Bounds| {
            let (a, b) = x.as_pair()?;
            let a2 = d2.restrict(tau, env, a, bounds)?;
            let b2 = c3.restrict(tau, &SemValue::pair(env.clone(), a.clone()), b, bounds)?;
            Ok(SemValue::pair(a2, b2))
        };
        SemTy::new(base, set_at, restrict)
    }

    /// The functorial action on types: ▶A over ▶Γ.
    pub fn later_functor(k: Ident, a: SemTy, later_base: Psh) -> SemTy {
        let k1 = k.clone();
        let a1 = a.clone();
        let set_at = move |w: &World, env: &SemValue, bounds: &Bounds| -> Result<SetDesc> {
            if w.tick_of(&k1) == 0 {
                Ok(SetDesc::unit())
            } else {
                let inner = a1.set_at(&tick_dec(w, &k1), env, bounds)?;
                Ok(SetDesc::later_wrap(k1.clone(), inner))
            }
        };
        let k2 = k;
        let a2 = a;
        let restrict = move |tau: &TimeMorphism, env: &SemValue, x: &SemValue, bounds: &Bounds| {
            if tau.dst.tick_of(&k2) == 0 {
                Ok(SemValue::Star)
            } else {
                a2.restrict(&tau.dec(&k2), env, x, bounds)
            }
        };
        SemTy::new(later_base, set_at, restrict)
    }

    /// Type substitution A[m] along an environment map into A's base.
    pub fn subst(&self, m: SemMap, new_base: Psh) -> SemTy {
        let a1 = self.clone();
        let m1 = m.clone();
        let set_at = move |w: &World, env: &SemValue, bounds: &Bounds| {
            a1.set_at(w, &m1.apply(w, env, bounds)?, bounds)
        };
        let a2 = self.clone();
        let restrict = move |tau: &TimeMorphism, env: &SemValue, x: &SemValue, bounds: &Bounds| {
            a2.restrict(tau, &m.apply(&tau.src, env, bounds)?, x, bounds)
        };
        SemTy::new(new_base, set_at, restrict)
    }

    /// Reindexing along ν on types.
    pub fn reindex(&self, nu: BTreeMap<Ident, Ident>, new_base: Psh) -> SemTy {
        let a1 = self.clone();
        let nu1 = nu.clone();
        let set_at = move |w: &World, env: &SemValue, bounds: &Bounds| {
            a1.set_at(&w.precompose(&nu1), env, bounds)
        };
        let a2 = self.clone();
        let restrict = move |tau: &TimeMorphism, env: &SemValue, x: &SemValue, bounds: &Bounds| {
            a2.restrict(&tau.precompose(&nu), env, x, bounds)
        };
        SemTy::new(new_base, set_at, restrict)
    }

    /// The dependent-right-adjoint type over Γ for A over ◀κΓ: the
    /// functorial action substituted along the unit.
    pub fn later_dep(k: Ident, base: Psh, a: SemTy) -> SemTy {
        let later_base = Psh::later(k.clone(), Psh::earlier(k.clone(), base.clone()));
        let functor = SemTy::later_functor(k.clone(), a, later_base);
        functor.subst(SemMap::unit(k, base.clone()), base)
    }

    /// Clock quantification: compatible families over fresh-clock worlds.
    /// `inner`'s base must behave as Γ viewed in the extended clock zone.
    pub fn forall(k: Ident, base: Psh, inner: SemTy) -> SemTy {
        let k1 = k.clone();
        let b1 = base.clone();
        let i1 = inner.clone();
        let set_at = move |w: &World, env: &SemValue, bounds: &Bounds| -> Result<SetDesc> {
            forall_desc(&k1, &b1, &i1, w, env, bounds)
        };
        let k2 = k;
        let b2 = base.clone();
        let i2 = inner;
        let restrict = move |tau: &TimeMorphism, env: &SemValue, x: &SemValue, _bounds: &Bounds| {
            let fam = x.as_family()?.clone();
            let env = env.clone();
            let tau = tau.clone();
            let (k3, b3, i3) = (k2.clone(), b2.clone(), i2.clone());
            let dst = tau.dst.clone();
            Ok(SemValue::Family(crate::semantics::value::FamilyVal::from_fn(
                dst,
                fam.bound(),
                move |n, bounds| {
                    let comp = fam.get(n, bounds)?;
                    let sharp_src = tau.src.least_fresh_clk();
                    let sharp_dst = tau.dst.least_fresh_clk();
                    let wn_src = fresh_world(&tau.src, &k3, sharp_src, n as u32);
                    let wn_dst = fresh_world(&tau.dst, &k3, sharp_dst, n as u32);
                    let iota = iota_incl(&tau.src, sharp_src, n as u32);
                    let env_n = b3.restrict(&iota, &env, bounds)?;
                    let mut map = tau.map.clone();
                    map.insert(sharp_src, sharp_dst);
                    let tau_n = TimeMorphism { src: wn_src, dst: wn_dst, map };
                    i3.restrict(&tau_n, &env_n, &comp, bounds)
                },
            )))
        };
        SemTy::new(base, set_at, restrict)
    }
}

/// (Θ,♯; ϑ[♯↦n]; f[κ↦♯]) for ♯ the canonical fresh clock of `w`.
pub fn fresh_world(w: &World, k: &str, sharp: Clk, n: u32) -> World {
    let mut w2 = w.clone();
    w2.base.ticks.insert(sharp, n);
    w2.val.insert(k.to_string(), sharp);
    w2
}

struct ForallFrame {
    fws: Vec<World>,
    envs: Vec<SemValue>,
    steps: Vec<TimeMorphism>,
}

fn forall_frame(
    k: &str,
    base: &Psh,
    w: &World,
    env: &SemValue,
    upto: usize,
    bounds: &Bounds,
) -> Result<ForallFrame> {
    let sharp = w.least_fresh_clk();
    let mut envs = Vec::with_capacity(upto + 1);
    let mut fws = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let iota = iota_incl(w, sharp, n as u32);
        envs.push(base.restrict(&iota, env, bounds)?);
        fws.push(fresh_world(w, k, sharp, n as u32));
    }
    let steps = (0..upto)
        .map(|n| TimeMorphism {
            src: fws[n + 1].clone(),
            dst: fws[n].clone(),
            map: fws[n + 1].theta().into_iter().map(|c| (c, c)).collect(),
        })
        .collect();
    Ok(ForallFrame { fws, envs, steps })
}

fn families_from_top(
    inner: &SemTy,
    frame: &ForallFrame,
    w: &World,
    bounds: &Bounds,
) -> Result<Vec<SemValue>> {
    let top = frame.fws.len() - 1;
    let mut out = Vec::new();
    for x in inner.set_at(&frame.fws[top], &frame.envs[top], bounds)?.enumerate(bounds)? {
        let mut omega = vec![x];
        for n in (0..top).rev() {
            let prev = omega.last().unwrap();
            let down = inner.restrict(&frame.steps[n], &frame.envs[n + 1], prev, bounds)?;
            omega.push(down);
        }
        omega.reverse();
        out.push(SemValue::Family(crate::semantics::value::FamilyVal::from_vec(
            w.clone(),
            omega,
        )));
    }
    Ok(out)
}

/// The family carrier. Compatibility and membership are checked on the
/// components observable within the truncation (indices up to the tick
/// budget); the padding above that is construction headroom and only
/// forced by clock application at extended worlds.
fn forall_desc(
    k: &str,
    base: &Psh,
    inner: &SemTy,
    w: &World,
    env: &SemValue,
    bounds: &Bounds,
) -> Result<SetDesc> {
    let horizon = bounds.trunc.max_ticks as usize;
    let frame = Rc::new(forall_frame(k, base, w, env, horizon, bounds)?);

    let inner1 = inner.clone();
    let w1 = w.clone();
    let fr1 = frame.clone();
    let contains = move |v: &SemValue, bounds: &Bounds| -> Result<bool> {
        let SemValue::Family(fam) = v else { return Ok(false) };
        if fam.base.base != w1.base || fam.bound() < fr1.fws.len() - 1 {
            return Ok(false);
        }
        for n in 0..fr1.fws.len() {
            let comp = fam.get(n, bounds)?;
            if !inner1.set_at(&fr1.fws[n], &fr1.envs[n], bounds)?.contains(&comp, bounds)? {
                return Ok(false);
            }
        }
        for n in 0..fr1.steps.len() {
            let up = fam.get(n + 1, bounds)?;
            let down = inner1.restrict(&fr1.steps[n], &fr1.envs[n + 1], &up, bounds)?;
            let here = fam.get(n, bounds)?;
            if !inner1.set_at(&fr1.fws[n], &fr1.envs[n], bounds)?.equal(&down, &here, bounds)? {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let inner2 = inner.clone();
    let w2 = w.clone();
    let fr2 = frame.clone();
    let enumerate =
        move |bounds: &Bounds| -> Result<Vec<SemValue>> { families_from_top(&inner2, &fr2, &w2, bounds) };

    // argument probes carry the full padding so delayed eliminations can
    // reach one component past any truncated world; probe pools use a
    // thin naturals bound since breadth there is already sampled
    let inner4 = inner.clone();
    let base4 = base.clone();
    let k4 = k.to_string();
    let w4 = w.clone();
    let env4 = env.clone();
    let arg_sample = move |bounds: &Bounds| -> Result<Vec<SemValue>> {
        let thin = Bounds::new(bounds.trunc, bounds.nat_bound.min(2));
        let full = thin.family_bound() as usize;
        let frame = forall_frame(&k4, &base4, &w4, &env4, full, &thin)?;
        families_from_top(&inner4, &frame, &w4, &thin)
    };

    let inner3 = inner.clone();
    let fr3 = frame;
    let equal = move |a: &SemValue, b: &SemValue, bounds: &Bounds| -> Result<bool> {
        let fa = a.as_family()?;
        let fb = b.as_family()?;
        for n in 0..fr3.fws.len() {
            let xa = fa.get(n, bounds)?;
            let xb = fb.get(n, bounds)?;
            if !inner3.set_at(&fr3.fws[n], &fr3.envs[n], bounds)?.equal(&xa, &xb, bounds)? {
                return Ok(false);
            }
        }
        Ok(true)
    };

    Ok(SetDesc {
        kind: SetKind::Forall(k.to_string()),
        contains: Rc::new(contains),
        enumerate: Rc::new(enumerate),
        equal: Rc::new(equal),
        arg_sample: Some(Rc::new(arg_sample)),
    })
}
