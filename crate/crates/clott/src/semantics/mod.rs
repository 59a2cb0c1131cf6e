//! The semantic layer: presheaf carriers, the tick adjunction, clock
//! reindexing and exchange, and the set descriptors backing type
//! interpretations.

pub mod psh;
pub mod transpose;
pub mod ty;
pub mod value;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::syntax::Ident;
use crate::worlds::{enumerate_worlds, Truncation, World};

pub use psh::{check_presheaf_laws, maps_agree, subsets_containing, Psh, SemMap};
pub use transpose::{transpose_bwd, transpose_fwd, zeta};
pub use ty::{set_eq, SemTerm, SemTy, SetDesc, SetKind};
pub use value::{worlds_compatible, SemValue};

/// Quantification bounds for property checks: the world truncation and the
/// enumeration bound for naturals. Membership stays exact; only
/// enumeration and family materialisation read these.
pub struct Bounds {
    pub trunc: Truncation,
    pub nat_bound: u64,
    /// Cap on argument pools when quantifying over enumerable sets inside
    /// Kripke function membership/equality. Enumeration itself stays exact.
    pub sample_cap: usize,
    world_cache: RefCell<HashMap<Vec<Ident>, Rc<Vec<World>>>>,
}

impl Bounds {
    pub fn new(trunc: Truncation, nat_bound: u64) -> Bounds {
        Bounds { trunc, nat_bound, sample_cap: 48, world_cache: RefCell::new(HashMap::new()) }
    }

    pub fn default_suite() -> Bounds {
        Bounds::new(Truncation::default(), 4)
    }

    /// Index bound for materialised clock-quantification families.
    pub fn family_bound(&self) -> u32 {
        self.trunc.family_bound()
    }

    /// The canonical truncated worlds over a clock zone, cached.
    pub fn worlds(&self, delta: &[Ident]) -> Rc<Vec<World>> {
        let key: Vec<Ident> = delta.to_vec();
        if let Some(ws) = self.world_cache.borrow().get(&key) {
            return ws.clone();
        }
        let ws = Rc::new(enumerate_worlds(delta, &self.trunc));
        self.world_cache.borrow_mut().insert(key, ws.clone());
        ws
    }

    /// Enumerated targets for Kripke quantification from `w`: the
    /// truncated skeleton plus `w` itself.
    pub fn targets_from(&self, w: &World, delta: &[Ident]) -> Vec<World> {
        let mut ws: Vec<World> = self.worlds(delta).as_ref().clone();
        if !ws.contains(w) {
            ws.push(w.clone());
        }
        ws
    }
}
