//! Presheaves over the category of worlds, maps between them, and the
//! tick-extension adjunction: the left adjoint (a coproduct over the ways
//! a clock could have been synchronised in the past), the right adjoint
//! (tick-budget decrement), their unit and counit, the tick projection and
//! its transpose, clock reindexing, and the exchange map.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::semantics::ty::SemTy;
use crate::semantics::value::{worlds_compatible, SemValue};
use crate::semantics::Bounds;
use crate::worlds::*;
use crate::syntax::Ident;
use crate::{sem_err, Error, Result};

type ContainsFn = dyn Fn(&World, &SemValue, &Bounds) -> Result<bool>;
type EnumFn = dyn Fn(&World, &Bounds) -> Result<Vec<SemValue>>;
type RestrictFn = dyn Fn(&TimeMorphism, &SemValue, &Bounds) -> Result<SemValue>;
type EqualFn = dyn Fn(&World, &SemValue, &SemValue, &Bounds) -> Result<bool>;

/// A presheaf with carriers computed on demand.
#[derive(Clone)]
pub struct Psh {
    pub delta: Vec<Ident>,
    contains: Rc<ContainsFn>,
    enumerate: Rc<EnumFn>,
    restrict: Rc<RestrictFn>,
    equal: Rc<EqualFn>,
}

impl Psh {
    pub fn contains(&self, w: &World, v: &SemValue, bounds: &Bounds) -> Result<bool> {
        (self.contains)(w, v, bounds)
    }

    /// Bounded enumeration of the carrier; fails on function-valued parts.
    pub fn enumerate(&self, w: &World, bounds: &Bounds) -> Result<Vec<SemValue>> {
        (self.enumerate)(w, bounds)
    }

    pub fn restrict(&self, tau: &TimeMorphism, v: &SemValue, bounds: &Bounds) -> Result<SemValue> {
        (self.restrict)(tau, v, bounds)
    }

    /// Type-directed equality of two carrier elements at a world.
    pub fn equal(&self, w: &World, a: &SemValue, b: &SemValue, bounds: &Bounds) -> Result<bool> {
        (self.equal)(w, a, b, bounds)
    }

    /// The terminal presheaf: a single point everywhere.
    pub fn terminal(delta: Vec<Ident>) -> Psh {
        Psh {
            delta,
            contains: Rc::new(|_, v, _| Ok(matches!(v, SemValue::Star))),
            enumerate: Rc::new(|_, _| Ok(vec![SemValue::Star])),
            restrict: Rc::new(|_, _, _| Ok(SemValue::Star)),
            equal: Rc::new(|_, a, b, _| {
                Ok(matches!(a, SemValue::Star) && matches!(b, SemValue::Star))
            }),
        }
    }

    /// Comprehension Γ.A: elements are pairs of an element of Γ and an
    /// element of A over it.
    pub fn comprehension(gamma: Psh, a: SemTy) -> Psh {
        let delta = gamma.delta.clone();
        let g1 = gamma.clone();
        let a1 = a.clone();
        let contains = move |w: &World, v: &SemValue, bounds: &Bounds| -> Result<bool> {
            let SemValue::Pair(env, x) = v else { return Ok(false) };
            Ok(g1.contains(w, env, bounds)?
                && a1.set_at(w, env, bounds)?.contains(x, bounds)?)
        };
        let g2 = gamma.clone();
        let a2 = a.clone();
        let enumerate = move |w: &World, bounds: &Bounds| -> Result<Vec<SemValue>> {
            let mut out = Vec::new();
            for env in g2.enumerate(w, bounds)? {
                for x in a2.set_at(w, &env, bounds)?.enumerate(bounds)? {
                    out.push(SemValue::pair(env.clone(), x));
                }
            }
            Ok(out)
        };
        let g3 = gamma.clone();
        let a3 = a.clone();
        let restrict = move |tau: &TimeMorphism, v: &SemValue, bounds: &Bounds| -> Result<SemValue> {
            let (env, x) = v.as_pair()?;
            Ok(SemValue::pair(
                g3.restrict(tau, env, bounds)?,
                a3.restrict(tau, env, x, bounds)?,
            ))
        };
        let g4 = gamma;
        let a4 = a;
        let equal = move |w: &World, l: &SemValue, r: &SemValue, bounds: &Bounds| -> Result<bool> {
            let (le, lx) = l.as_pair()?;
            let (re, rx) = r.as_pair()?;
            Ok(g4.equal(w, le, re, bounds)?
                && a4.set_at(w, le, bounds)?.equal(lx, rx, bounds)?)
        };
        Psh {
            delta,
            contains: Rc::new(contains),
            enumerate: Rc::new(enumerate),
            restrict: Rc::new(restrict),
            equal: Rc::new(equal),
        }
    }

    /// The left adjoint on objects: a coproduct of carriers at advanced
    /// worlds, indexed by the sets of clocks synchronised with κ.
    pub fn earlier(k: Ident, f: Psh) -> Psh {
        let delta = f.delta.clone();
        let valid_index = {
            let k = k.clone();
            move |w: &World, x: &BTreeSet<Ident>| -> bool {
                x.contains(&k) && x.is_subset(&w.synced_with(&k))
            }
        };
        let k1 = k.clone();
        let f1 = f.clone();
        let vi1 = valid_index.clone();
        let contains = move |w: &World, v: &SemValue, bounds: &Bounds| -> Result<bool> {
            let SemValue::Tick { sync, payload } = v else { return Ok(false) };
            if !vi1(w, sync) {
                return Ok(false);
            }
            let (adv, _) = advance_world(w, sync, &k1);
            f1.contains(&adv, payload, bounds)
        };
        let k2 = k.clone();
        let f2 = f.clone();
        let enumerate = move |w: &World, bounds: &Bounds| -> Result<Vec<SemValue>> {
            let mut out = Vec::new();
            for x in subsets_containing(&w.synced_with(&k2), &k2) {
                let (adv, _) = advance_world(w, &x, &k2);
                for payload in f2.enumerate(&adv, bounds)? {
                    out.push(SemValue::tick(x.clone(), payload));
                }
            }
            Ok(out)
        };
        let k3 = k.clone();
        let f3 = f.clone();
        let restrict = move |tau: &TimeMorphism, v: &SemValue, bounds: &Bounds| -> Result<SemValue> {
            let (sync, payload) = v.as_tick()?;
            let tau_adv = tau.advance(sync, &k3);
            Ok(SemValue::tick(sync.clone(), f3.restrict(&tau_adv, payload, bounds)?))
        };
        let k4 = k;
        let f4 = f;
        let equal = move |w: &World, l: &SemValue, r: &SemValue, bounds: &Bounds| -> Result<bool> {
            let (lx, lp) = l.as_tick()?;
            let (rx, rp) = r.as_tick()?;
            if lx != rx {
                return Ok(false);
            }
            let (adv, _) = advance_world(w, lx, &k4);
            f4.equal(&adv, lp, rp, bounds)
        };
        Psh {
            delta,
            contains: Rc::new(contains),
            enumerate: Rc::new(enumerate),
            restrict: Rc::new(restrict),
            equal: Rc::new(equal),
        }
    }

    /// The right adjoint on objects: the carrier one tick earlier on κ, or
    /// a point when the budget is exhausted.
    pub fn later(k: Ident, f: Psh) -> Psh {
        let delta = f.delta.clone();
        let k1 = k.clone();
        let f1 = f.clone();
        let contains = move |w: &World, v: &SemValue, bounds: &Bounds| -> Result<bool> {
            if w.tick_of(&k1) == 0 {
                Ok(matches!(v, SemValue::Star))
            } else {
                f1.contains(&tick_dec(w, &k1), v, bounds)
            }
        };
        let k2 = k.clone();
        let f2 = f.clone();
        let enumerate = move |w: &World, bounds: &Bounds| -> Result<Vec<SemValue>> {
            if w.tick_of(&k2) == 0 {
                Ok(vec![SemValue::Star])
            } else {
                f2.enumerate(&tick_dec(w, &k2), bounds)
            }
        };
        let k3 = k.clone();
        let f3 = f.clone();
        let restrict = move |tau: &TimeMorphism, v: &SemValue, bounds: &Bounds| -> Result<SemValue> {
            if tau.dst.tick_of(&k3) == 0 {
                Ok(SemValue::Star)
            } else {
                f3.restrict(&tau.dec(&k3), v, bounds)
            }
        };
        let k4 = k;
        let f4 = f;
        let equal = move |w: &World, l: &SemValue, r: &SemValue, bounds: &Bounds| -> Result<bool> {
            if w.tick_of(&k4) == 0 {
                Ok(matches!(l, SemValue::Star) && matches!(r, SemValue::Star))
            } else {
                f4.equal(&tick_dec(w, &k4), l, r, bounds)
            }
        };
        Psh {
            delta,
            contains: Rc::new(contains),
            enumerate: Rc::new(enumerate),
            restrict: Rc::new(restrict),
            equal: Rc::new(equal),
        }
    }

    /// Reindexing along ν : Δ′ → Δ: precomposition of the valuation.
    pub fn reindex(nu: BTreeMap<Ident, Ident>, f: Psh, delta: Vec<Ident>) -> Psh {
        let nu1 = nu.clone();
        let f1 = f.clone();
        let contains = move |w: &World, v: &SemValue, bounds: &Bounds| {
            f1.contains(&w.precompose(&nu1), v, bounds)
        };
        let nu2 = nu.clone();
        let f2 = f.clone();
        let enumerate =
            move |w: &World, bounds: &Bounds| f2.enumerate(&w.precompose(&nu2), bounds);
        let nu3 = nu.clone();
        let f3 = f.clone();
        let restrict = move |tau: &TimeMorphism, v: &SemValue, bounds: &Bounds| {
            f3.restrict(&tau.precompose(&nu3), v, bounds)
        };
        let nu4 = nu;
        let f4 = f;
        let equal = move |w: &World, l: &SemValue, r: &SemValue, bounds: &Bounds| {
            f4.equal(&w.precompose(&nu4), l, r, bounds)
        };
        Psh {
            delta,
            contains: Rc::new(contains),
            enumerate: Rc::new(enumerate),
            restrict: Rc::new(restrict),
            equal: Rc::new(equal),
        }
    }
}

pub fn subsets_containing(of: &BTreeSet<Ident>, must: &str) -> Vec<BTreeSet<Ident>> {
    let rest: Vec<&Ident> = of.iter().filter(|k| *k != must).collect();
    let mut out = Vec::new();
    for mask in 0..(1usize << rest.len()) {
        let mut x: BTreeSet<Ident> = [must.to_string()].into();
        for (i, k) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                x.insert((*k).clone());
            }
        }
        out.push(x);
    }
    out.sort();
    out
}

type MapFn = dyn Fn(&World, &SemValue, &Bounds) -> Result<SemValue>;

/// A world-indexed map between presheaf carriers.
#[derive(Clone)]
pub struct SemMap {
    apply: Rc<MapFn>,
}

impl SemMap {
    pub fn new(f: impl Fn(&World, &SemValue, &Bounds) -> Result<SemValue> + 'static) -> SemMap {
        SemMap { apply: Rc::new(f) }
    }

    pub fn apply(&self, w: &World, v: &SemValue, bounds: &Bounds) -> Result<SemValue> {
        (self.apply)(w, v, bounds)
    }

    pub fn identity() -> SemMap {
        SemMap::new(|_, v, _| Ok(v.clone()))
    }

    /// `self` then `g` (diagrammatic order).
    pub fn then(&self, g: &SemMap) -> SemMap {
        let f = self.clone();
        let g = g.clone();
        SemMap::new(move |w, v, bounds| g.apply(w, &f.apply(w, v, bounds)?, bounds))
    }

    pub fn constant_star() -> SemMap {
        SemMap::new(|_, _, _| Ok(SemValue::Star))
    }

    /// The left adjoint on maps: acts on the payload at the advanced world.
    pub fn earlier_map(k: Ident, m: SemMap) -> SemMap {
        SemMap::new(move |w, v, bounds| {
            let (sync, payload) = v.as_tick()?;
            let (adv, _) = advance_world(w, sync, &k);
            Ok(SemValue::tick(sync.clone(), m.apply(&adv, payload, bounds)?))
        })
    }

    /// The right adjoint on maps: acts one tick earlier, a point at zero.
    pub fn later_map(k: Ident, m: SemMap) -> SemMap {
        SemMap::new(move |w, v, bounds| {
            if w.tick_of(&k) == 0 {
                Ok(SemValue::Star)
            } else {
                m.apply(&tick_dec(w, &k), v, bounds)
            }
        })
    }

    /// Reindexing on maps: the component at a world is the component at
    /// the precomposed world.
    pub fn reindex_map(nu: BTreeMap<Ident, Ident>, m: SemMap) -> SemMap {
        SemMap::new(move |w, v, bounds| m.apply(&w.precompose(&nu), v, bounds))
    }

    /// The unit F → ▶κ◀κF: a point at exhausted budget, otherwise the full
    /// synchronisation class paired with the restriction along s.
    pub fn unit(k: Ident, f: Psh) -> SemMap {
        SemMap::new(move |w, v, bounds| {
            if w.tick_of(&k) == 0 {
                return Ok(SemValue::Star);
            }
            let s = s_kappa(w, &k);
            Ok(SemValue::tick(w.synced_with(&k), f.restrict(&s, v, bounds)?))
        })
    }

    /// The counit ◀κ▶κF → F: restriction of the payload along r.
    pub fn counit(k: Ident, f: Psh) -> SemMap {
        SemMap::new(move |w, v, bounds| {
            let (sync, payload) = v.as_tick()?;
            let r = r_xkappa(w, sync, &k);
            f.restrict(&r, payload, bounds)
        })
    }

    /// The tick projection ◀κF → F: restriction of the payload along the
    /// collapse morphism χ of the advanced world.
    pub fn proj_earlier(k: Ident, f: Psh) -> SemMap {
        SemMap::new(move |w, v, bounds| {
            let (sync, payload) = v.as_tick()?;
            let (_, chi) = advance_world(w, sync, &k);
            f.restrict(&chi, payload, bounds)
        })
    }

    /// The transpose of the tick projection, F → ▶κF: restriction one tick
    /// earlier (the delayed-copy map).
    pub fn next(k: Ident, f: Psh) -> SemMap {
        SemMap::new(move |w, v, bounds| {
            if w.tick_of(&k) == 0 {
                return Ok(SemValue::Star);
            }
            let dec = tick_dec(w, &k);
            let tau = TimeMorphism {
                src: w.clone(),
                dst: dec,
                map: w.theta().into_iter().map(|c| (c, c)).collect(),
            };
            f.restrict(&tau, v, bounds)
        })
    }

    /// The exchange map ◀^{ν(κ)}ν*Γ → ν*◀κΓ, concretely re-tagging the
    /// synchronisation class by its ν-preimage.
    pub fn exchange(k_target: Ident, nu: BTreeMap<Ident, Ident>) -> SemMap {
        SemMap::new(move |_w, v, _bounds| {
            let (sync, payload) = v.as_tick()?;
            let preimage: BTreeSet<Ident> = nu
                .iter()
                .filter(|(_, img)| sync.contains(img.as_str()))
                .map(|(kp, _)| kp.clone())
                .collect();
            if !preimage.contains(&k_target) {
                return sem_err(format!(
                    "exchange: κ={k_target} missing from the preimage of {sync:?}"
                ));
            }
            Ok(SemValue::tick(preimage, payload.clone()))
        })
    }

    /// The exchange map through its defining composite, the counit after
    /// the synchronised unit. Used to cross-check the concrete form.
    pub fn exchange_abstract(
        k_target: Ident,
        nu: BTreeMap<Ident, Ident>,
        gamma: Psh,
    ) -> SemMap {
        let nk = nu[&k_target].clone();
        let inner = SemMap::reindex_map(nu.clone(), SemMap::unit(k_target.clone(), gamma.clone()));
        let step1 = SemMap::earlier_map(nk.clone(), inner);
        let reindexed_earlier = Psh::reindex(
            nu.clone(),
            Psh::earlier(k_target, gamma.clone()),
            gamma.delta.clone(),
        );
        let step2 = SemMap::counit(nk, reindexed_earlier);
        step1.then(&step2)
    }
}

/// Extensional equality of two maps on every enumerated element of `src`
/// at every world of the truncation (plus any extra seed elements).
pub fn maps_agree(
    src: &Psh,
    dst: &Psh,
    f: &SemMap,
    g: &SemMap,
    seeds: &[(World, SemValue)],
    bounds: &Bounds,
) -> Result<bool> {
    let worlds = bounds.worlds(&src.delta);
    for w in worlds.iter() {
        let elems = match src.enumerate(w, bounds) {
            Ok(es) => es,
            Err(Error::NotEnumerable(_)) => Vec::new(),
            Err(e) => return Err(e),
        };
        for v in elems {
            let a = f.apply(w, &v, bounds)?;
            let b = g.apply(w, &v, bounds)?;
            if !dst.equal(w, &a, &b, bounds)? {
                return Ok(false);
            }
        }
    }
    for (w, v) in seeds {
        let a = f.apply(w, v, bounds)?;
        let b = g.apply(w, v, bounds)?;
        if !dst.equal(w, &a, &b, bounds)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the presheaf laws id·x = x and (ρτ)·x = ρ·(τ·x) for every
/// enumerated element of `f` over the truncation.
pub fn check_presheaf_laws(f: &Psh, bounds: &Bounds) -> Result<()> {
    let worlds = bounds.worlds(&f.delta);
    for w in worlds.iter() {
        let elems = match f.enumerate(w, bounds) {
            Ok(es) => es,
            Err(Error::NotEnumerable(_)) => continue,
            Err(e) => return Err(e),
        };
        for v in &elems {
            let idv = f.restrict(&TimeMorphism::identity(w), v, bounds)?;
            if !f.equal(w, v, &idv, bounds)? {
                return sem_err(format!("identity law fails at {w} on {v:?}"));
            }
            for w2 in worlds.iter() {
                for tau in enumerate_morphisms(w, w2) {
                    let tv = f.restrict(&tau, v, bounds)?;
                    for w3 in worlds.iter() {
                        for rho in enumerate_morphisms(w2, w3) {
                            let lhs = f.restrict(&tau.then(&rho).unwrap(), v, bounds)?;
                            let rhs = f.restrict(&rho, &tv, bounds)?;
                            if !f.equal(w3, &lhs, &rhs, bounds)? {
                                return sem_err(format!(
                                    "functoriality fails at {w} -> {w2} -> {w3} on {v:?}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn worlds_eq_for_values(a: &World, b: &World) -> bool {
    worlds_compatible(a, b)
}
