//! Elements of presheaf sets. A value never stores the world it lives at
//! except where a family or closure genuinely depends on it (clock
//! quantification families and Kripke function values); those carry a base
//! world tag that cross-world operations check.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use crate::semantics::Bounds;
use crate::worlds::{TimeMorphism, World};
use crate::{sem_err, Result};

pub type KripkeClosure = dyn Fn(&TimeMorphism, &SemValue, &Bounds) -> Result<SemValue>;

/// A clock-quantification family: components are computed on demand and
/// memoised, so a component beyond the representable budget only errors
/// when something actually forces it.
pub struct FamilyVal {
    pub base: World,
    bound: usize,
    cells: RefCell<Vec<Option<SemValue>>>,
    compute: Box<dyn Fn(usize, &Bounds) -> Result<SemValue>>,
}

impl FamilyVal {
    pub fn from_fn(
        base: World,
        bound: usize,
        compute: impl Fn(usize, &Bounds) -> Result<SemValue> + 'static,
    ) -> Rc<FamilyVal> {
        Rc::new(FamilyVal {
            base,
            bound,
            cells: RefCell::new(vec![None; bound + 1]),
            compute: Box::new(compute),
        })
    }

    pub fn from_vec(base: World, omega: Vec<SemValue>) -> Rc<FamilyVal> {
        let bound = omega.len().saturating_sub(1);
        Rc::new(FamilyVal {
            base,
            bound,
            cells: RefCell::new(omega.into_iter().map(Some).collect()),
            compute: Box::new(|_, _| sem_err("family component missing")),
        })
    }

    /// The largest component index this family can produce.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn get(&self, n: usize, bounds: &Bounds) -> Result<SemValue> {
        if n > self.bound {
            return Err(crate::Error::Truncation(format!(
                "family component {n} beyond the materialisation bound {}",
                self.bound
            )));
        }
        if let Some(v) = &self.cells.borrow()[n] {
            return Ok(v.clone());
        }
        let v = (self.compute)(n, bounds)?;
        self.cells.borrow_mut()[n] = Some(v.clone());
        Ok(v)
    }
}

#[derive(Clone)]
pub enum SemValue {
    Star,
    Nat(u64),
    Pair(Box<SemValue>, Box<SemValue>),
    Refl,
    /// An element (X, γ) of a tick-extension coproduct: the set of sibling
    /// clocks that were synchronised, and the payload at the advanced world.
    Tick { sync: BTreeSet<String>, payload: Box<SemValue> },
    /// A compatible family (ω_n) for clock quantification.
    Family(Rc<FamilyVal>),
    /// A Kripke function value.
    Fn { base: World, fun: Rc<KripkeClosure> },
}

impl fmt::Debug for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemValue::Star => write!(f, "*"),
            SemValue::Nat(n) => write!(f, "{n}"),
            SemValue::Pair(a, b) => write!(f, "({a:?}, {b:?})"),
            SemValue::Refl => write!(f, "refl"),
            SemValue::Tick { sync, payload } => write!(f, "({sync:?}, {payload:?})"),
            SemValue::Family(fam) => write!(f, "fam{:?}", fam.cells.borrow()),
            SemValue::Fn { .. } => write!(f, "<fn>"),
        }
    }
}

/// Two world tags agree when the time objects match and the valuations
/// agree on the clocks they share (a value built for a smaller clock zone
/// is usable in any extension).
pub fn worlds_compatible(a: &World, b: &World) -> bool {
    a.base == b.base
        && a.val
            .iter()
            .all(|(k, c)| b.val.get(k).map_or(true, |c2| c2 == c))
}

pub fn assert_world(tag: &World, at: &World, what: &str) -> Result<()> {
    if worlds_compatible(tag, at) || worlds_compatible(at, tag) {
        Ok(())
    } else {
        sem_err(format!("{what}: value tagged at {tag} used at {at}"))
    }
}

impl SemValue {
    pub fn pair(a: SemValue, b: SemValue) -> SemValue {
        SemValue::Pair(Box::new(a), Box::new(b))
    }

    pub fn tick(sync: BTreeSet<String>, payload: SemValue) -> SemValue {
        SemValue::Tick { sync, payload: Box::new(payload) }
    }

    pub fn func(
        base: World,
        fun: impl Fn(&TimeMorphism, &SemValue, &Bounds) -> Result<SemValue> + 'static,
    ) -> SemValue {
        SemValue::Fn { base, fun: Rc::new(fun) }
    }

    pub fn apply(&self, tau: &TimeMorphism, arg: &SemValue, bounds: &Bounds) -> Result<SemValue> {
        match self {
            SemValue::Fn { base, fun } => {
                assert_world(base, &tau.src, "function application")?;
                fun(tau, arg, bounds)
            }
            other => sem_err(format!("applied a non-function value {other:?}")),
        }
    }

    pub fn as_pair(&self) -> Result<(&SemValue, &SemValue)> {
        match self {
            SemValue::Pair(a, b) => Ok((a, b)),
            other => sem_err(format!("expected a pair, got {other:?}")),
        }
    }

    pub fn as_nat(&self) -> Result<u64> {
        match self {
            SemValue::Nat(n) => Ok(*n),
            other => sem_err(format!("expected a natural, got {other:?}")),
        }
    }

    pub fn as_tick(&self) -> Result<(&BTreeSet<String>, &SemValue)> {
        match self {
            SemValue::Tick { sync, payload } => Ok((sync, payload)),
            other => sem_err(format!("expected a tick-coproduct element, got {other:?}")),
        }
    }

    pub fn as_family(&self) -> Result<&Rc<FamilyVal>> {
        match self {
            SemValue::Family(fam) => Ok(fam),
            other => sem_err(format!("expected a clock family, got {other:?}")),
        }
    }

    /// Structural equality on the first-order fragment; errors out on
    /// function values with different closures (those need type-directed
    /// extensional comparison).
    pub fn struct_eq(&self, other: &SemValue) -> Result<bool> {
        match (self, other) {
            (SemValue::Star, SemValue::Star) => Ok(true),
            (SemValue::Nat(a), SemValue::Nat(b)) => Ok(a == b),
            (SemValue::Refl, SemValue::Refl) => Ok(true),
            (SemValue::Pair(a1, b1), SemValue::Pair(a2, b2)) => {
                Ok(a1.struct_eq(a2)? && b1.struct_eq(b2)?)
            }
            (SemValue::Tick { sync: x1, payload: p1 }, SemValue::Tick { sync: x2, payload: p2 }) => {
                Ok(x1 == x2 && p1.struct_eq(p2)?)
            }
            (SemValue::Family(f1), SemValue::Family(f2)) => {
                if Rc::ptr_eq(f1, f2) {
                    Ok(true)
                } else {
                    sem_err("structural equality reached distinct family values")
                }
            }
            (SemValue::Fn { fun: f1, .. }, SemValue::Fn { fun: f2, .. }) => {
                if Rc::ptr_eq(f1, f2) {
                    Ok(true)
                } else {
                    sem_err("structural equality reached distinct function closures")
                }
            }
            _ => Ok(false),
        }
    }

    pub fn to_json(&self, bounds: &Bounds) -> serde_json::Value {
        match self {
            SemValue::Star => serde_json::json!("*"),
            SemValue::Nat(n) => serde_json::json!(n),
            SemValue::Refl => serde_json::json!("refl"),
            SemValue::Pair(a, b) => serde_json::json!([a.to_json(bounds), b.to_json(bounds)]),
            SemValue::Tick { sync, payload } => {
                serde_json::json!({ "X": sync.iter().collect::<Vec<_>>(), "val": payload.to_json(bounds) })
            }
            SemValue::Family(fam) => {
                let m: serde_json::Map<String, serde_json::Value> = (0..=fam.bound())
                    .map(|i| {
                        let cell = match fam.get(i, bounds) {
                            Ok(v) => v.to_json(bounds),
                            Err(_) => serde_json::json!("<beyond-truncation>"),
                        };
                        (i.to_string(), cell)
                    })
                    .collect();
                serde_json::json!({ "omega": m })
            }
            SemValue::Fn { .. } => serde_json::json!("<fn>"),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SemValue> {
        match v {
            serde_json::Value::String(s) if s == "*" => Ok(SemValue::Star),
            serde_json::Value::String(s) if s == "refl" => Ok(SemValue::Refl),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(SemValue::Nat)
                .ok_or_else(|| crate::Error::Sem(format!("bad numeric value {n}"))),
            serde_json::Value::Array(xs) if xs.len() == 2 => Ok(SemValue::pair(
                SemValue::from_json(&xs[0])?,
                SemValue::from_json(&xs[1])?,
            )),
            serde_json::Value::Object(m) if m.contains_key("X") => {
                let sync = m["X"]
                    .as_array()
                    .ok_or_else(|| crate::Error::Sem("bad X".into()))?
                    .iter()
                    .map(|x| x.as_str().map(|s| s.to_string()))
                    .collect::<Option<BTreeSet<_>>>()
                    .ok_or_else(|| crate::Error::Sem("bad X entry".into()))?;
                Ok(SemValue::tick(sync, SemValue::from_json(&m["val"])?))
            }
            other => sem_err(format!("cannot decode semantic value from {other}")),
        }
    }
}
