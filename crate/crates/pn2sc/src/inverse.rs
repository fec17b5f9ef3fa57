//! Reverses the initialisation: rebuilds a Petri net from a flat
//! statechart.
//!
//! Only flat statecharts are accepted — the exact shape the
//! initialisation produces: no AND states, no Statechart instance, and a
//! bijection between OR states and same-named Basic states (each OR
//! contains exactly its one Basic). Reduced models are rejected with
//! diagnostics rather than guessed at.

use crate::io::ParseDiagnostic;
use crate::model::{OrChild, PetriNet, ScModel};

/// One place per Basic and one transition per HyperEdge, with the arc
/// structure recovered from the next/rnext links.
pub fn invert_initialisation(sc: &ScModel) -> Result<PetriNet, Vec<ParseDiagnostic>> {
    let mut diagnostics = Vec::new();

    if sc.ands().count() != 0 {
        diagnostics.push(ParseDiagnostic::model_error(format!(
            "statechart is not flat: {} AND states present",
            sc.ands().count()
        )));
    }
    if !sc.statecharts().is_empty() {
        diagnostics.push(ParseDiagnostic::model_error(
            "statechart is not flat: a Statechart instance is present",
        ));
    }
    for (_, or) in sc.ors() {
        let children: Vec<OrChild> = or.contains().iter().copied().collect();
        match children.as_slice() {
            [OrChild::Basic(b)] if sc.basic(*b).name() == or.name() => {}
            [OrChild::Basic(_)] => diagnostics.push(ParseDiagnostic::model_error(format!(
                "OR state {} does not contain a same-named Basic",
                or.name()
            ))),
            _ => diagnostics.push(ParseDiagnostic::model_error(format!(
                "OR state {} must contain exactly one Basic",
                or.name()
            ))),
        }
    }
    for (_, basic) in sc.basics() {
        if basic.rcontains().is_none() {
            diagnostics.push(ParseDiagnostic::model_error(format!(
                "Basic state {} has no containing OR",
                basic.name()
            )));
        }
        // places and transitions share one namespace in the net
        if sc.lookup_hyperedge(basic.name()).is_some() {
            diagnostics.push(ParseDiagnostic::model_error(format!(
                "name {} is used by both a Basic and a HyperEdge",
                basic.name()
            )));
        }
    }
    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }

    let mut pn = PetriNet::new();
    let mut place_ids = std::collections::HashMap::new();
    let mut transition_ids = std::collections::HashMap::new();
    for (id, basic) in sc.basics() {
        place_ids.insert(id, pn.add_place(basic.name()));
    }
    for (id, edge) in sc.hyperedges() {
        transition_ids.insert(id, pn.add_transition(edge.name()));
    }
    for (id, basic) in sc.basics() {
        for e in basic.next() {
            pn.add_input_arc(place_ids[&id], transition_ids[e]);
        }
    }
    for (id, edge) in sc.hyperedges() {
        for b in edge.next() {
            pn.add_output_arc(transition_ids[&id], place_ids[b]);
        }
    }
    Ok(pn)
}
