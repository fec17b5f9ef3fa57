//! Initialisation: copies the net structure into a flat statechart.
//!
//! Four postcondition passes, run in a fixed order following the
//! map-objects-before-links pattern: first the objects (one Basic inside
//! one OR per place, one HyperEdge per transition), then the links (from
//! the place/transition arcs). Each pass is a single linear iteration over
//! its source domain and is idempotent: constraints already satisfied are
//! skipped, so re-running creates nothing new.

use crate::model::{
    check_name_uniqueness, InvariantId, ModelReport, OrChild, PetriNet, ScModel, Violation,
};

/// The statechart must be unpopulated (no states, no Statechart instance)
/// and the net's place and transition names must be jointly unique.
pub fn check_init_preconditions(pn: &PetriNet, sc: &ScModel) -> ModelReport {
    let mut report = ModelReport::default();
    if sc.state_count() != 0 {
        report.violations.push(Violation {
            invariant: InvariantId::StatechartUnpopulated,
            element: "statechart".into(),
            message: format!(
                "statechart not unpopulated: {} states present",
                sc.state_count()
            ),
        });
    }
    if !sc.statecharts().is_empty() {
        report.violations.push(Violation {
            invariant: InvariantId::StatechartUnpopulated,
            element: "statechart".into(),
            message: "a Statechart instance already exists".into(),
        });
    }
    let uniqueness = check_name_uniqueness(pn, sc);
    report.merge(uniqueness)
}

/// Per place: a same-named Basic exists, a same-named OR exists, and the
/// Basic is contained in the OR. Returns the number of places visited.
pub fn apply_i1(pn: &PetriNet, sc: &mut ScModel) -> usize {
    let mut visited = 0;
    for (_, place) in pn.places() {
        visited += 1;
        let basic = sc
            .lookup_basic(place.name())
            .unwrap_or_else(|| sc.add_basic(place.name()));
        let or = sc
            .lookup_or(place.name())
            .unwrap_or_else(|| sc.add_or(place.name()));
        if sc.basic(basic).rcontains() != Some(or) {
            sc.or_add_child(or, OrChild::Basic(basic));
        }
    }
    visited
}

/// Per transition: a same-named HyperEdge exists. Returns the number of
/// transitions visited.
pub fn apply_i2(pn: &PetriNet, sc: &mut ScModel) -> usize {
    let mut visited = 0;
    for (_, transition) in pn.transitions() {
        visited += 1;
        if sc.lookup_hyperedge(transition.name()).is_none() {
            sc.add_hyperedge(transition.name());
        }
    }
    visited
}

/// Per place: every consuming transition's hyperedge goes into the
/// corresponding basic's `next`. Requires the object passes to have run.
pub fn apply_i3(pn: &PetriNet, sc: &mut ScModel) -> usize {
    let mut visited = 0;
    for (_, place) in pn.places() {
        visited += 1;
        let basic = sc
            .lookup_basic(place.name())
            .expect("objects must be mapped before links");
        for &t in place.postt() {
            let edge = sc
                .lookup_hyperedge(pn.transition(t).name())
                .expect("objects must be mapped before links");
            sc.link_basic_to_edge(basic, edge);
        }
    }
    visited
}

/// Per transition: every output place's basic goes into the hyperedge's
/// `next`. Requires the object passes to have run.
pub fn apply_i4(pn: &PetriNet, sc: &mut ScModel) -> usize {
    let mut visited = 0;
    for (_, transition) in pn.transitions() {
        visited += 1;
        let edge = sc
            .lookup_hyperedge(transition.name())
            .expect("objects must be mapped before links");
        for &p in transition.postp() {
            let basic = sc
                .lookup_basic(pn.place(p).name())
                .expect("objects must be mapped before links");
            sc.link_edge_to_basic(edge, basic);
        }
    }
    visited
}

/// Runs the four passes on a fresh statechart. Establishes the
/// place↔OR correspondence invariant and the three target-side name
/// uniqueness invariants; linear in the number of named elements.
pub fn initialise(pn: &PetriNet) -> Result<ScModel, ModelReport> {
    let mut sc = ScModel::new();
    let report = check_init_preconditions(pn, &sc);
    if !report.passed() {
        return Err(report);
    }
    apply_i1(pn, &mut sc);
    apply_i2(pn, &mut sc);
    apply_i3(pn, &mut sc);
    apply_i4(pn, &mut sc);
    Ok(sc)
}
