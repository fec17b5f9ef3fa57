//! Checkable invariants over the two models.
//!
//! Checkers always rescan the arenas directly instead of trusting the name
//! indexes, so they can catch index drift as well as genuine model damage.

use std::collections::HashSet;
use std::fmt;

use super::name_counts;
use super::petri::PetriNet;
use super::statechart::{OrChild, ScModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantId {
    PnNameUnique,
    BasicNameUnique,
    OrNameUnique,
    HyperEdgeNameUnique,
    PlaceOrCorrespondence,
    PnInverseLinks,
    ScInverseLinks,
    ContainmentForest,
    StatechartRoot,
    StatechartUnpopulated,
}

impl fmt::Display for InvariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvariantId::PnNameUnique => "pn-name-unique",
            InvariantId::BasicNameUnique => "basic-name-unique",
            InvariantId::OrNameUnique => "or-name-unique",
            InvariantId::HyperEdgeNameUnique => "hyperedge-name-unique",
            InvariantId::PlaceOrCorrespondence => "place-or-correspondence",
            InvariantId::PnInverseLinks => "pn-inverse-links",
            InvariantId::ScInverseLinks => "sc-inverse-links",
            InvariantId::ContainmentForest => "containment-forest",
            InvariantId::StatechartRoot => "statechart-root",
            InvariantId::StatechartUnpopulated => "statechart-unpopulated",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub invariant: InvariantId,
    pub element: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.invariant, self.element, self.message)
    }
}

/// Result of an invariant check; passes exactly when no violations were
/// collected.
#[derive(Debug, Clone, Default)]
pub struct ModelReport {
    pub violations: Vec<Violation>,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: ModelReport) -> ModelReport {
        self.violations.extend(other.violations);
        self
    }

    fn violation(
        &mut self,
        invariant: InvariantId,
        element: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.violations.push(Violation {
            invariant,
            element: element.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ModelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "all invariants passed")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Name uniqueness: joint over the net's places and transitions, and
/// per-type for Basic, OR and HyperEdge states. AND names are exempt.
pub fn check_name_uniqueness(pn: &PetriNet, sc: &ScModel) -> ModelReport {
    let mut report = ModelReport::default();

    let pn_names: Vec<&str> = pn
        .places()
        .map(|(_, p)| p.name())
        .chain(pn.transitions().map(|(_, t)| t.name()))
        .collect();
    for (name, count) in name_counts(pn_names.into_iter()) {
        if count > 1 {
            report.violation(
                InvariantId::PnNameUnique,
                name,
                format!("{count} named elements share this name"),
            );
        }
    }

    for (name, count) in name_counts(sc.basics().map(|(_, b)| b.name())) {
        if count > 1 {
            report.violation(
                InvariantId::BasicNameUnique,
                name,
                format!("{count} Basic states share this name"),
            );
        }
    }
    for (name, count) in name_counts(sc.ors().map(|(_, o)| o.name())) {
        if count > 1 {
            report.violation(
                InvariantId::OrNameUnique,
                name,
                format!("{count} OR states share this name"),
            );
        }
    }
    for (name, count) in name_counts(sc.hyperedges().map(|(_, e)| e.name())) {
        if count > 1 {
            report.violation(
                InvariantId::HyperEdgeNameUnique,
                name,
                format!("{count} hyperedges share this name"),
            );
        }
    }

    sorted(report)
}

/// The main-transformation invariant: every live place corresponds to
/// exactly one live OR state with the same name.
pub fn check_inv(pn: &PetriNet, sc: &ScModel) -> ModelReport {
    let mut report = ModelReport::default();
    let or_names = name_counts(sc.ors().map(|(_, o)| o.name()));
    for (_, place) in pn.places() {
        match or_names.get(place.name()).copied().unwrap_or(0) {
            1 => {}
            0 => report.violation(
                InvariantId::PlaceOrCorrespondence,
                place.name(),
                "no OR state with this place's name",
            ),
            n => report.violation(
                InvariantId::PlaceOrCorrespondence,
                place.name(),
                format!("{n} OR states with this place's name"),
            ),
        }
    }
    sorted(report)
}

/// Inverse-link consistency of the net: `p ∈ t.prep ⟺ t ∈ p.postt` and
/// `p ∈ t.postp ⟺ t ∈ p.pret`, with every referenced element live.
pub fn check_pn_links(pn: &PetriNet) -> ModelReport {
    let mut report = ModelReport::default();
    for (pid, place) in pn.places() {
        for &t in place.pret() {
            if !pn.transition_live(t) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    place.name(),
                    "pret references a dead transition",
                );
            } else if !pn.transition(t).postp().contains(&pid) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    place.name(),
                    format!(
                        "pret lists {} but its postp does not point back",
                        pn.transition(t).name()
                    ),
                );
            }
        }
        for &t in place.postt() {
            if !pn.transition_live(t) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    place.name(),
                    "postt references a dead transition",
                );
            } else if !pn.transition(t).prep().contains(&pid) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    place.name(),
                    format!(
                        "postt lists {} but its prep does not point back",
                        pn.transition(t).name()
                    ),
                );
            }
        }
    }
    for (tid, transition) in pn.transitions() {
        for &p in transition.prep() {
            if !pn.place_live(p) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    transition.name(),
                    "prep references a dead place",
                );
            } else if !pn.place(p).postt().contains(&tid) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    transition.name(),
                    format!(
                        "prep lists {} but its postt does not point back",
                        pn.place(p).name()
                    ),
                );
            }
        }
        for &p in transition.postp() {
            if !pn.place_live(p) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    transition.name(),
                    "postp references a dead place",
                );
            } else if !pn.place(p).pret().contains(&tid) {
                report.violation(
                    InvariantId::PnInverseLinks,
                    transition.name(),
                    format!(
                        "postp lists {} but its pret does not point back",
                        pn.place(p).name()
                    ),
                );
            }
        }
    }
    sorted(report)
}

/// Structural consistency of the statechart: next/rnext inverses,
/// contains/rcontains inverses, acyclic containment, live statechart root.
pub fn check_sc_links(sc: &ScModel) -> ModelReport {
    let mut report = ModelReport::default();

    for (bid, basic) in sc.basics() {
        for &e in basic.next() {
            if !sc.edge_live(e) || !sc.hyperedge(e).rnext().contains(&bid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    basic.name(),
                    "next edge missing inverse rnext",
                );
            }
        }
        for &e in basic.rnext() {
            if !sc.edge_live(e) || !sc.hyperedge(e).next().contains(&bid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    basic.name(),
                    "rnext edge missing inverse next",
                );
            }
        }
        if let Some(or) = basic.rcontains() {
            if !sc.or_live(or) || !sc.or_state(or).contains().contains(&OrChild::Basic(bid)) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    basic.name(),
                    "rcontains container does not list this basic",
                );
            }
        }
    }

    for (eid, edge) in sc.hyperedges() {
        for &b in edge.next() {
            if !sc.basic_live(b) || !sc.basic(b).rnext().contains(&eid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    edge.name(),
                    "next basic missing inverse rnext",
                );
            }
        }
        for &b in edge.rnext() {
            if !sc.basic_live(b) || !sc.basic(b).next().contains(&eid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    edge.name(),
                    "rnext basic missing inverse next",
                );
            }
        }
    }

    for (oid, or) in sc.ors() {
        for child in or.contains() {
            let back = match child {
                OrChild::Basic(b) => sc
                    .basic_live(*b)
                    .then(|| sc.basic(*b).rcontains())
                    .flatten(),
                OrChild::And(a) => sc
                    .and_live(*a)
                    .then(|| sc.and_state(*a).rcontains())
                    .flatten(),
            };
            if back != Some(oid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    or.name(),
                    "contained state does not point back via rcontains",
                );
            }
        }
        if let Some(and) = or.rcontains() {
            if !sc.and_live(and) || !sc.and_state(and).contains().contains(&oid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    or.name(),
                    "rcontains container does not list this OR",
                );
            }
        }
    }

    for (aid, and) in sc.ands() {
        for &o in and.contains() {
            if !sc.or_live(o) || sc.or_state(o).rcontains() != Some(aid) {
                report.violation(
                    InvariantId::ScInverseLinks,
                    and.name(),
                    "contained OR does not point back via rcontains",
                );
            }
        }
    }

    // Containment cycles: walk up from every OR through rcontains chains.
    for (oid, or) in sc.ors() {
        let mut seen = HashSet::new();
        let mut current = oid;
        loop {
            if !seen.insert(current) {
                report.violation(
                    InvariantId::ContainmentForest,
                    or.name(),
                    "containment cycle through this OR",
                );
                break;
            }
            let Some(and) = sc.or_state(current).rcontains() else {
                break;
            };
            if !sc.and_live(and) {
                break;
            }
            match sc.and_state(and).rcontains() {
                Some(next_or) if sc.or_live(next_or) => current = next_or,
                _ => break,
            }
        }
    }

    for chart in sc.statecharts() {
        if !sc.and_live(chart.top_state) {
            report.violation(
                InvariantId::StatechartRoot,
                "statechart",
                "topState is dead",
            );
        } else if sc.and_state(chart.top_state).rcontains().is_some() {
            report.violation(
                InvariantId::StatechartRoot,
                sc.and_state(chart.top_state).name(),
                "topState has a container",
            );
        }
    }

    sorted(report)
}

/// Every invariant check at once; what `--paranoid` runs after each step.
pub fn check_all(pn: &PetriNet, sc: &ScModel) -> ModelReport {
    check_name_uniqueness(pn, sc)
        .merge(check_inv(pn, sc))
        .merge(check_pn_links(pn))
        .merge(check_sc_links(sc))
}

fn sorted(mut report: ModelReport) -> ModelReport {
    report
        .violations
        .sort_by(|a, b| (a.element.as_str(), &a.message).cmp(&(b.element.as_str(), &b.message)));
    report
}
