//! The bijective correspondence between terms over a tick-extended context
//! and delayed terms over the base context, together with the comparison
//! map ζ between the two ways of pairing a delayed context with a delayed
//! type.

use crate::semantics::psh::Psh;
use crate::semantics::ty::{SemTerm, SemTy};
use crate::semantics::value::SemValue;
use crate::semantics::SemMap;
use crate::worlds::{advance_world, r_xkappa, s_kappa, tick_dec};
use crate::syntax::Ident;

/// ζ_{Γ,A}: ▶Γ.A → ▶(Γ.A); collapses the pair of points at exhausted
/// budget and is the identity otherwise.
pub fn zeta(k: Ident) -> SemMap {
    SemMap::new(move |w, v, _bounds| {
        if w.tick_of(&k) == 0 {
            Ok(SemValue::Star)
        } else {
            Ok(v.clone())
        }
    })
}

/// The inverse pairing ⟨▶p, ▶q⟩: ▶(Γ.A) → ▶Γ.A.
pub fn zeta_inv(k: Ident) -> SemMap {
    SemMap::new(move |w, v, _bounds| {
        if w.tick_of(&k) == 0 {
            Ok(SemValue::pair(SemValue::Star, SemValue::Star))
        } else {
            Ok(v.clone())
        }
    })
}

/// Sends a term over the tick-extended context to its delayed form over
/// the base context: a point at exhausted budget, otherwise the body one
/// tick earlier at the canonical tick environment.
pub fn transpose_fwd(k: Ident, gamma: Psh, a: SemTerm) -> SemTerm {
    SemTerm::new(move |w, env, bounds| {
        if w.tick_of(&k) == 0 {
            return Ok(SemValue::Star);
        }
        let s = s_kappa(w, &k);
        let payload = gamma.restrict(&s, env, bounds)?;
        let tick_env = SemValue::tick(w.synced_with(&k), payload);
        a.eval(&tick_dec(w, &k), &tick_env, bounds)
    })
}

/// The inverse direction: evaluates the delayed term at the advanced world
/// and restricts the result back along the collapse of the unit.
pub fn transpose_bwd(k: Ident, gamma: Psh, a_ty: SemTy, b: SemTerm) -> SemTerm {
    SemTerm::new(move |w, env, bounds| {
        let (sync, payload) = env.as_tick()?;
        let (advanced, _) = advance_world(w, sync, &k);
        let bv = b.eval(&advanced, payload, bounds)?;
        // At the advanced world the budget is positive, so the delayed
        // value is a real element over the unit environment there.
        let s = s_kappa(&advanced, &k);
        let unit_env =
            SemValue::tick(advanced.synced_with(&k), gamma.restrict(&s, payload, bounds)?);
        let r = r_xkappa(w, sync, &k);
        a_ty.restrict(&r, &unit_env, &bv, bounds)
    })
}
