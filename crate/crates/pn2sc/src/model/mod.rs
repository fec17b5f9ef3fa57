//! Source and target metamodels.
//!
//! Both models are arena-backed: elements carry stable integer identities
//! and are never moved or reused, so identity-based links survive the
//! renames performed by the rewrite rules. Names are mutable attributes
//! kept in secondary indexes. Deletion is an immediate cascade: a deleted
//! element vanishes from every association end in the same call.

mod check;
mod iso;
mod petri;
mod statechart;

pub use check::{
    check_all, check_inv, check_name_uniqueness, check_pn_links, check_sc_links, InvariantId,
    ModelReport, Violation,
};
pub use iso::{isomorphic_nets, isomorphic_statecharts};
pub use petri::{PetriNet, Place, PlaceId, Transition, TransitionId};
pub use statechart::{
    AndId, AndState, Basic, BasicId, EdgeId, HyperEdge, OrChild, OrId, OrState, ScModel, Statechart,
};

pub(crate) use iso::{state_hashes, StateHashes};

use std::collections::HashMap;

/// Smallest name of the form `base` or `base~k` (k ≥ 1) not used by any
/// live place, transition or OR state. Applying the same suffix to the
/// renamed place and the new OR state keeps them aligned.
pub fn fresh_name(base: &str, pn: &PetriNet, sc: &ScModel) -> String {
    let taken = |name: &str| pn.name_in_use(name) || sc.or_name_in_use(name);
    if !taken(base) {
        return base.to_string();
    }
    let mut k = 1u64;
    loop {
        let candidate = format!("{base}~{k}");
        if !taken(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Multiset of live names, used by the uniqueness checkers.
pub(crate) fn name_counts<'a>(names: impl Iterator<Item = &'a str>) -> HashMap<&'a str, usize> {
    let mut counts = HashMap::new();
    for name in names {
        *counts.entry(name).or_insert(0) += 1;
    }
    counts
}
