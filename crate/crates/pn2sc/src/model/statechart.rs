//! Statechart metamodel: Basic, OR and AND states in a containment forest,
//! plus hyperedges connecting sets of Basic states.
//!
//! Containment moves, never shares: inserting a state into a container
//! detaches it from its previous container first, so `rcontains` stays a
//! single optional back-reference. Basic, OR and HyperEdge names are kept
//! in secondary indexes for O(1) lookup; AND names are not indexed (they
//! carry no uniqueness constraint).

use std::collections::{BTreeSet, HashMap};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub(crate) u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(BasicId);
id_type!(OrId);
id_type!(AndId);
id_type!(EdgeId);

/// A state an OR may contain. ORs hold Basic and AND states only; the
/// nesting rules of the metamodel are enforced by this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrChild {
    Basic(BasicId),
    And(AndId),
}

#[derive(Debug, Clone)]
pub struct Basic {
    name: String,
    /// Outgoing hyperedges (`self ∈ e.rnext`).
    next: BTreeSet<EdgeId>,
    /// Incoming hyperedges (`self ∈ e.next`).
    rnext: BTreeSet<EdgeId>,
    rcontains: Option<OrId>,
}

impl Basic {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn next(&self) -> &BTreeSet<EdgeId> {
        &self.next
    }

    pub fn rnext(&self) -> &BTreeSet<EdgeId> {
        &self.rnext
    }

    pub fn rcontains(&self) -> Option<OrId> {
        self.rcontains
    }
}

#[derive(Debug, Clone)]
pub struct OrState {
    name: String,
    contains: BTreeSet<OrChild>,
    rcontains: Option<AndId>,
}

impl OrState {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self) -> &BTreeSet<OrChild> {
        &self.contains
    }

    pub fn rcontains(&self) -> Option<AndId> {
        self.rcontains
    }
}

#[derive(Debug, Clone)]
pub struct AndState {
    name: String,
    contains: BTreeSet<OrId>,
    rcontains: Option<OrId>,
}

impl AndState {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self) -> &BTreeSet<OrId> {
        &self.contains
    }

    pub fn rcontains(&self) -> Option<OrId> {
        self.rcontains
    }
}

#[derive(Debug, Clone)]
pub struct HyperEdge {
    name: String,
    /// Target Basic states.
    next: BTreeSet<BasicId>,
    /// Source Basic states (inverse of `Basic::next`).
    rnext: BTreeSet<BasicId>,
}

impl HyperEdge {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn next(&self) -> &BTreeSet<BasicId> {
        &self.next
    }

    pub fn rnext(&self) -> &BTreeSet<BasicId> {
        &self.rnext
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Statechart {
    pub top_state: AndId,
}

/// Mutable statechart workspace.
#[derive(Debug, Clone, Default)]
pub struct ScModel {
    basics: Vec<Option<Basic>>,
    ors: Vec<Option<OrState>>,
    ands: Vec<Option<AndState>>,
    edges: Vec<Option<HyperEdge>>,
    statecharts: Vec<Statechart>,
    basic_index: HashMap<String, BTreeSet<BasicId>>,
    or_index: HashMap<String, BTreeSet<OrId>>,
    edge_index: HashMap<String, BTreeSet<EdgeId>>,
}

impl ScModel {
    pub fn new() -> Self {
        ScModel::default()
    }

    pub fn add_basic(&mut self, name: impl Into<String>) -> BasicId {
        let name = name.into();
        let id = BasicId(self.basics.len() as u32);
        self.basic_index.entry(name.clone()).or_default().insert(id);
        self.basics.push(Some(Basic {
            name,
            next: BTreeSet::new(),
            rnext: BTreeSet::new(),
            rcontains: None,
        }));
        id
    }

    pub fn add_or(&mut self, name: impl Into<String>) -> OrId {
        let name = name.into();
        let id = OrId(self.ors.len() as u32);
        self.or_index.entry(name.clone()).or_default().insert(id);
        self.ors.push(Some(OrState {
            name,
            contains: BTreeSet::new(),
            rcontains: None,
        }));
        id
    }

    pub fn add_and(&mut self, name: impl Into<String>) -> AndId {
        let id = AndId(self.ands.len() as u32);
        self.ands.push(Some(AndState {
            name: name.into(),
            contains: BTreeSet::new(),
            rcontains: None,
        }));
        id
    }

    pub fn add_hyperedge(&mut self, name: impl Into<String>) -> EdgeId {
        let name = name.into();
        let id = EdgeId(self.edges.len() as u32);
        self.edge_index.entry(name.clone()).or_default().insert(id);
        self.edges.push(Some(HyperEdge {
            name,
            next: BTreeSet::new(),
            rnext: BTreeSet::new(),
        }));
        id
    }

    pub fn add_statechart(&mut self, top_state: AndId) {
        self.statecharts.push(Statechart { top_state });
    }

    // --- lookups -----------------------------------------------------

    /// The unique live OR with this name, when the uniqueness invariant
    /// holds; the lowest-id one otherwise. Absence is a normal return.
    pub fn lookup_or(&self, name: &str) -> Option<OrId> {
        self.or_index.get(name).and_then(|s| s.first().copied())
    }

    pub fn lookup_basic(&self, name: &str) -> Option<BasicId> {
        self.basic_index.get(name).and_then(|s| s.first().copied())
    }

    pub fn lookup_hyperedge(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).and_then(|s| s.first().copied())
    }

    pub fn or_name_in_use(&self, name: &str) -> bool {
        self.or_index.get(name).is_some_and(|s| !s.is_empty())
    }

    // --- accessors ---------------------------------------------------

    pub fn basic(&self, id: BasicId) -> &Basic {
        self.basics[id.index()].as_ref().expect("dead basic")
    }

    pub fn or_state(&self, id: OrId) -> &OrState {
        self.ors[id.index()].as_ref().expect("dead OR")
    }

    pub fn and_state(&self, id: AndId) -> &AndState {
        self.ands[id.index()].as_ref().expect("dead AND")
    }

    pub fn hyperedge(&self, id: EdgeId) -> &HyperEdge {
        self.edges[id.index()].as_ref().expect("dead hyperedge")
    }

    pub fn basic_live(&self, id: BasicId) -> bool {
        self.basics.get(id.index()).is_some_and(Option::is_some)
    }

    pub fn or_live(&self, id: OrId) -> bool {
        self.ors.get(id.index()).is_some_and(Option::is_some)
    }

    pub fn and_live(&self, id: AndId) -> bool {
        self.ands.get(id.index()).is_some_and(Option::is_some)
    }

    pub fn edge_live(&self, id: EdgeId) -> bool {
        self.edges.get(id.index()).is_some_and(Option::is_some)
    }

    pub fn basics(&self) -> impl Iterator<Item = (BasicId, &Basic)> {
        self.basics
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|b| (BasicId(i as u32), b)))
    }

    pub fn ors(&self) -> impl Iterator<Item = (OrId, &OrState)> {
        self.ors
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|o| (OrId(i as u32), o)))
    }

    pub fn ands(&self) -> impl Iterator<Item = (AndId, &AndState)> {
        self.ands
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|a| (AndId(i as u32), a)))
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = (EdgeId, &HyperEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|e| (EdgeId(i as u32), e)))
    }

    pub fn statecharts(&self) -> &[Statechart] {
        &self.statecharts
    }

    /// Live states of all three kinds (`State.size` in metamodel terms).
    pub fn state_count(&self) -> usize {
        self.basics().count() + self.ors().count() + self.ands().count()
    }

    pub fn live_or_count(&self) -> usize {
        self.ors().count()
    }

    // --- containment -------------------------------------------------

    /// Moves `child` into `or`, detaching it from its previous container.
    pub fn or_add_child(&mut self, or: OrId, child: OrChild) {
        assert!(self.or_live(or), "dead OR container");
        self.detach(child);
        match child {
            OrChild::Basic(b) => {
                self.basics[b.index()]
                    .as_mut()
                    .expect("dead basic")
                    .rcontains = Some(or)
            }
            OrChild::And(a) => {
                self.ands[a.index()].as_mut().expect("dead AND").rcontains = Some(or)
            }
        }
        self.ors[or.index()]
            .as_mut()
            .unwrap()
            .contains
            .insert(child);
    }

    /// Moves `or` into `and`, detaching it from its previous container.
    pub fn and_add_or(&mut self, and: AndId, or: OrId) {
        assert!(self.and_live(and), "dead AND container");
        let or_state = self.ors[or.index()].as_mut().expect("dead OR");
        if let Some(old) = or_state.rcontains.take() {
            self.ands[old.index()]
                .as_mut()
                .expect("dead AND")
                .contains
                .remove(&or);
        }
        self.ors[or.index()].as_mut().unwrap().rcontains = Some(and);
        self.ands[and.index()].as_mut().unwrap().contains.insert(or);
    }

    fn detach(&mut self, child: OrChild) {
        let old = match child {
            OrChild::Basic(b) => self.basics[b.index()]
                .as_mut()
                .expect("dead basic")
                .rcontains
                .take(),
            OrChild::And(a) => self.ands[a.index()]
                .as_mut()
                .expect("dead AND")
                .rcontains
                .take(),
        };
        if let Some(old_or) = old {
            self.ors[old_or.index()]
                .as_mut()
                .expect("dead OR")
                .contains
                .remove(&child);
        }
    }

    // --- hyperedge links ----------------------------------------------

    /// `edge ∈ basic.next` (the basic is a source of the edge).
    pub fn link_basic_to_edge(&mut self, basic: BasicId, edge: EdgeId) {
        self.basics[basic.index()]
            .as_mut()
            .expect("dead basic")
            .next
            .insert(edge);
        self.edges[edge.index()]
            .as_mut()
            .expect("dead hyperedge")
            .rnext
            .insert(basic);
    }

    /// `basic ∈ edge.next` (the basic is a target of the edge).
    pub fn link_edge_to_basic(&mut self, edge: EdgeId, basic: BasicId) {
        self.edges[edge.index()]
            .as_mut()
            .expect("dead hyperedge")
            .next
            .insert(basic);
        self.basics[basic.index()]
            .as_mut()
            .expect("dead basic")
            .rnext
            .insert(edge);
    }

    // --- renaming and deletion -----------------------------------------

    pub fn rename_or(&mut self, id: OrId, new_name: impl Into<String>) {
        let new_name = new_name.into();
        let or = self.ors[id.index()].as_mut().expect("dead OR");
        let old = std::mem::replace(&mut or.name, new_name.clone());
        remove_index_entry(&mut self.or_index, &old, id);
        self.or_index.entry(new_name).or_default().insert(id);
    }

    /// Deletes an OR state: removed from the name index, from its
    /// container's `contains`, and its own children become roots.
    pub fn delete_or(&mut self, id: OrId) {
        let or = self.ors[id.index()].take().expect("double delete of OR");
        remove_index_entry(&mut self.or_index, &or.name, id);
        if let Some(and) = or.rcontains {
            self.ands[and.index()]
                .as_mut()
                .expect("dead AND")
                .contains
                .remove(&id);
        }
        for child in or.contains {
            match child {
                OrChild::Basic(b) => {
                    self.basics[b.index()]
                        .as_mut()
                        .expect("dead basic")
                        .rcontains = None
                }
                OrChild::And(a) => {
                    self.ands[a.index()].as_mut().expect("dead AND").rcontains = None
                }
            }
        }
    }
}

fn remove_index_entry<I: Ord + Copy>(index: &mut HashMap<String, BTreeSet<I>>, name: &str, id: I) {
    let entry = index.get_mut(name).expect("name index out of sync");
    entry.remove(&id);
    if entry.is_empty() {
        index.remove(name);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_or_direct_hit() {
        let mut sc = ScModel::new();
        let p1 = sc.add_or("p1");
        assert_eq!(sc.lookup_or("p1"), Some(p1));
    }

    #[test]
    fn lookup_or_empty_model() {
        let sc = ScModel::new();
        assert_eq!(sc.lookup_or("x"), None);
    }

    #[test]
    fn lookup_or_tracks_renames() {
        let mut sc = ScModel::new();
        let q = sc.add_or("q");
        sc.add_or("other");
        sc.rename_or(q, "q_OR_r");
        assert_eq!(sc.lookup_or("q"), None);
        assert_eq!(sc.lookup_or("q_OR_r"), Some(q));
        // agrees with a linear scan
        let scan: Vec<_> = sc.ors().filter(|(_, o)| o.name() == "q_OR_r").collect();
        assert_eq!(scan.len(), 1);
        assert_eq!(scan[0].0, q);
    }

    #[test]
    fn lookup_or_tracks_deletes() {
        let mut sc = ScModel::new();
        let q = sc.add_or("q");
        sc.delete_or(q);
        assert_eq!(sc.lookup_or("q"), None);
    }

    #[test]
    fn containment_moves_between_ors() {
        let mut sc = ScModel::new();
        let a = sc.add_or("a");
        let b = sc.add_or("b");
        let basic = sc.add_basic("x");
        sc.or_add_child(a, OrChild::Basic(basic));
        assert_eq!(sc.basic(basic).rcontains(), Some(a));
        sc.or_add_child(b, OrChild::Basic(basic));
        assert_eq!(sc.basic(basic).rcontains(), Some(b));
        assert!(sc.or_state(a).contains().is_empty());
        assert!(sc.or_state(b).contains().contains(&OrChild::Basic(basic)));
    }

    #[test]
    fn and_containment_moves() {
        let mut sc = ScModel::new();
        let o1 = sc.add_or("o1");
        let o2 = sc.add_or("o2");
        let a = sc.add_and("a");
        sc.or_add_child(o1, OrChild::And(a));
        let m = sc.add_or("member");
        sc.and_add_or(a, m);
        assert_eq!(sc.or_state(m).rcontains(), Some(a));
        sc.or_add_child(o2, OrChild::And(a));
        assert_eq!(sc.and_state(a).rcontains(), Some(o2));
        assert!(sc.or_state(o1).contains().is_empty());
    }

    #[test]
    fn edge_links_are_inverse() {
        let mut sc = ScModel::new();
        let a = sc.add_basic("a");
        let b = sc.add_basic("b");
        let e = sc.add_hyperedge("e");
        sc.link_basic_to_edge(a, e);
        sc.link_edge_to_basic(e, b);
        assert!(sc.basic(a).next().contains(&e));
        assert!(sc.hyperedge(e).rnext().contains(&a));
        assert!(sc.hyperedge(e).next().contains(&b));
        assert!(sc.basic(b).rnext().contains(&e));
    }

    #[test]
    fn delete_or_orphans_children_and_detaches() {
        let mut sc = ScModel::new();
        let parent_and = sc.add_and("a");
        let or = sc.add_or("o");
        sc.and_add_or(parent_and, or);
        let b = sc.add_basic("b");
        sc.or_add_child(or, OrChild::Basic(b));
        sc.delete_or(or);
        assert!(!sc.or_live(or));
        assert_eq!(sc.basic(b).rcontains(), None);
        assert!(sc.and_state(parent_and).contains().is_empty());
    }

    #[test]
    #[should_panic(expected = "double delete")]
    fn double_delete_or_is_a_fault() {
        let mut sc = ScModel::new();
        let or = sc.add_or("o");
        sc.delete_or(or);
        sc.delete_or(or);
    }
}
