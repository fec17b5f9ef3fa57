//! The `.pn` line format:
//!
//! ```text
//! place <name>
//! transition <name>
//! arc <place> <transition>     # the place is an input of the transition
//! arc <transition> <place>     # the place is an output of the transition
//! ```

use std::collections::HashMap;

use super::{tokenize, ParseDiagnostic};
use crate::model::{PetriNet, PlaceId, TransitionId};

#[derive(Clone, Copy)]
enum NodeRef {
    Place(PlaceId),
    Transition(TransitionId),
}

/// Parses the line format above; rejects duplicate names (a precondition
/// of the initialisation) and arcs that reference unknown elements or
/// connect two elements of the same kind.
pub fn parse_petri_net(text: &str) -> Result<PetriNet, Vec<ParseDiagnostic>> {
    let mut pn = PetriNet::new();
    let mut names: HashMap<String, NodeRef> = HashMap::new();
    let mut diagnostics = Vec::new();
    let mut arcs: Vec<(usize, usize, String, usize, String)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let (kw_col, keyword) = tokens[0];
        match keyword {
            "place" | "transition" => {
                if tokens.len() != 2 {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        format!("expected `{keyword} <name>`"),
                    ));
                    continue;
                }
                let (col, name) = tokens[1];
                if names.contains_key(name) {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        col,
                        format!("duplicate name {name}"),
                    ));
                    continue;
                }
                let node = if keyword == "place" {
                    NodeRef::Place(pn.add_place(name))
                } else {
                    NodeRef::Transition(pn.add_transition(name))
                };
                names.insert(name.to_string(), node);
            }
            "arc" => {
                if tokens.len() != 3 {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        "expected `arc <from> <to>`",
                    ));
                    continue;
                }
                // resolved after all declarations so arcs may appear anywhere
                arcs.push((
                    lineno,
                    tokens[1].0,
                    tokens[1].1.to_string(),
                    tokens[2].0,
                    tokens[2].1.to_string(),
                ));
            }
            other => {
                diagnostics.push(ParseDiagnostic::error_at(
                    lineno,
                    kw_col,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }

    for (lineno, from_col, from, to_col, to) in arcs {
        let from_node = names.get(&from).copied();
        let to_node = names.get(&to).copied();
        match (from_node, to_node) {
            (None, _) => diagnostics.push(ParseDiagnostic::error_at(
                lineno,
                from_col,
                format!("unknown element {from}"),
            )),
            (_, None) => diagnostics.push(ParseDiagnostic::error_at(
                lineno,
                to_col,
                format!("unknown element {to}"),
            )),
            (Some(NodeRef::Place(p)), Some(NodeRef::Transition(t))) => pn.add_input_arc(p, t),
            (Some(NodeRef::Transition(t)), Some(NodeRef::Place(p))) => pn.add_output_arc(t, p),
            (Some(NodeRef::Place(_)), Some(NodeRef::Place(_))) => {
                diagnostics.push(ParseDiagnostic::error_at(
                    lineno,
                    from_col,
                    format!("arc {from} {to} connects two places"),
                ))
            }
            (Some(NodeRef::Transition(_)), Some(NodeRef::Transition(_))) => {
                diagnostics.push(ParseDiagnostic::error_at(
                    lineno,
                    from_col,
                    format!("arc {from} {to} connects two transitions"),
                ))
            }
        }
    }

    if diagnostics.is_empty() {
        Ok(pn)
    } else {
        Err(diagnostics)
    }
}

/// Canonical serialization: places name-sorted, then transitions
/// name-sorted, then arc lines sorted lexicographically.
pub fn serialize_petri_net(pn: &PetriNet) -> String {
    let mut out = String::new();
    let mut place_names: Vec<&str> = pn.places().map(|(_, p)| p.name()).collect();
    place_names.sort_unstable();
    for name in place_names {
        out.push_str("place ");
        out.push_str(name);
        out.push('\n');
    }
    let mut transition_names: Vec<&str> = pn.transitions().map(|(_, t)| t.name()).collect();
    transition_names.sort_unstable();
    for name in &transition_names {
        out.push_str("transition ");
        out.push_str(name);
        out.push('\n');
    }
    let mut arcs: Vec<String> = Vec::new();
    for (_, t) in pn.transitions() {
        for &p in t.prep() {
            arcs.push(format!("arc {} {}", pn.place(p).name(), t.name()));
        }
        for &p in t.postp() {
            arcs.push(format!("arc {} {}", t.name(), pn.place(p).name()));
        }
    }
    arcs.sort_unstable();
    for arc in arcs {
        out.push_str(&arc);
        out.push('\n');
    }
    out
}
