//! Petri net metamodel: named places and transitions with four mutually
//! inverse link sets (`prep`/`postt` and `postp`/`pret`).

use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub(crate) u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub(crate) u32);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TransitionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct Place {
    name: String,
    /// Transitions producing into this place (`self ∈ t.postp`).
    pret: BTreeSet<TransitionId>,
    /// Transitions consuming from this place (`self ∈ t.prep`).
    postt: BTreeSet<TransitionId>,
}

impl Place {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pret(&self) -> &BTreeSet<TransitionId> {
        &self.pret
    }

    pub fn postt(&self) -> &BTreeSet<TransitionId> {
        &self.postt
    }
}

#[derive(Debug, Clone)]
pub struct Transition {
    name: String,
    prep: BTreeSet<PlaceId>,
    postp: BTreeSet<PlaceId>,
}

impl Transition {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prep(&self) -> &BTreeSet<PlaceId> {
        &self.prep
    }

    pub fn postp(&self) -> &BTreeSet<PlaceId> {
        &self.postp
    }
}

/// Mutable Petri net. All link mutation goes through the net so inverse
/// links can never drift apart; deleting an element cascades over every
/// association end that references it.
///
/// Identity slots are never reused: iteration order over live elements is
/// creation order, which the rewrite scheduler relies on.
#[derive(Debug, Clone, Default)]
pub struct PetriNet {
    places: Vec<Option<Place>>,
    transitions: Vec<Option<Transition>>,
    // Live NamedElement name usage (places and transitions jointly).
    // A count, not a unique index: duplicate names are representable so
    // the uniqueness checker has something to report.
    name_counts: HashMap<String, u32>,
}

impl PetriNet {
    pub fn new() -> Self {
        PetriNet::default()
    }

    pub fn add_place(&mut self, name: impl Into<String>) -> PlaceId {
        let name = name.into();
        *self.name_counts.entry(name.clone()).or_insert(0) += 1;
        let id = PlaceId(self.places.len() as u32);
        self.places.push(Some(Place {
            name,
            pret: BTreeSet::new(),
            postt: BTreeSet::new(),
        }));
        id
    }

    pub fn add_transition(&mut self, name: impl Into<String>) -> TransitionId {
        let name = name.into();
        *self.name_counts.entry(name.clone()).or_insert(0) += 1;
        let id = TransitionId(self.transitions.len() as u32);
        self.transitions.push(Some(Transition {
            name,
            prep: BTreeSet::new(),
            postp: BTreeSet::new(),
        }));
        id
    }

    /// Arc place → transition: `p ∈ t.prep` and `t ∈ p.postt`.
    pub fn add_input_arc(&mut self, p: PlaceId, t: TransitionId) {
        self.place_mut(p).postt.insert(t);
        self.transition_mut(t).prep.insert(p);
    }

    /// Arc transition → place: `p ∈ t.postp` and `t ∈ p.pret`.
    pub fn add_output_arc(&mut self, t: TransitionId, p: PlaceId) {
        self.place_mut(p).pret.insert(t);
        self.transition_mut(t).postp.insert(p);
    }

    pub fn place(&self, id: PlaceId) -> &Place {
        self.places[id.index()].as_ref().expect("dead place")
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        self.transitions[id.index()]
            .as_ref()
            .expect("dead transition")
    }

    fn place_mut(&mut self, id: PlaceId) -> &mut Place {
        self.places[id.index()].as_mut().expect("dead place")
    }

    fn transition_mut(&mut self, id: TransitionId) -> &mut Transition {
        self.transitions[id.index()]
            .as_mut()
            .expect("dead transition")
    }

    pub fn place_live(&self, id: PlaceId) -> bool {
        self.places.get(id.index()).is_some_and(Option::is_some)
    }

    pub fn transition_live(&self, id: TransitionId) -> bool {
        self.transitions
            .get(id.index())
            .is_some_and(Option::is_some)
    }

    /// Live places in creation order.
    pub fn places(&self) -> impl Iterator<Item = (PlaceId, &Place)> {
        self.places
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|p| (PlaceId(i as u32), p)))
    }

    /// Live transitions in creation order.
    pub fn transitions(&self) -> impl Iterator<Item = (TransitionId, &Transition)> {
        self.transitions
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|t| (TransitionId(i as u32), t)))
    }

    pub fn live_place_count(&self) -> usize {
        self.places().count()
    }

    pub fn live_transition_count(&self) -> usize {
        self.transitions().count()
    }

    /// True if any live place or transition carries this name.
    pub fn name_in_use(&self, name: &str) -> bool {
        self.name_counts.get(name).is_some_and(|&c| c > 0)
    }

    pub fn rename_place(&mut self, id: PlaceId, new_name: impl Into<String>) {
        let new_name = new_name.into();
        let old = std::mem::replace(&mut self.place_mut(id).name, new_name.clone());
        self.release_name(&old);
        *self.name_counts.entry(new_name).or_insert(0) += 1;
    }

    /// Removes the place from the net and from every transition's `prep`
    /// and `postp`. Deleting a dead place is a scheduler bug.
    pub fn delete_place(&mut self, id: PlaceId) {
        let place = self.places[id.index()]
            .take()
            .expect("double delete of place");
        for t in &place.pret {
            self.transition_mut(*t).postp.remove(&id);
        }
        for t in &place.postt {
            self.transition_mut(*t).prep.remove(&id);
        }
        self.release_name(&place.name);
    }

    /// Removes the transition from the net and from every place's `pret`
    /// and `postt`. Deleting a dead transition is a scheduler bug.
    pub fn delete_transition(&mut self, id: TransitionId) {
        let transition = self.transitions[id.index()]
            .take()
            .expect("double delete of transition");
        for p in &transition.prep {
            self.place_mut(*p).postt.remove(&id);
        }
        for p in &transition.postp {
            self.place_mut(*p).pret.remove(&id);
        }
        self.release_name(&transition.name);
    }

    fn release_name(&mut self, name: &str) {
        match self.name_counts.get_mut(name) {
            Some(1) => {
                self.name_counts.remove(name);
            }
            Some(c) => *c -= 1,
            None => unreachable!("name count out of sync"),
        }
    }
}
