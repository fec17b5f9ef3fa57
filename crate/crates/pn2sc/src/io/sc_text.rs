//! The `.sc` indentation format:
//!
//! ```text
//! statechart <topStateName>
//! <kind> <name>                 # root states; kind is basic, or, and
//!   <kind> <name>               # children indented two spaces
//! edge <name> : <src,...> -> <tgt,...>
//! ```
//!
//! Children are ordered by canonical structural hash, then name, so equal
//! models always serialize to the same bytes. Edge source and target lists
//! are comma-separated, name-sorted Basic names; either list may be empty.
//!
//! Identifiers may not contain `,` or `#` and may not be the tokens `:`
//! or `->`, which the edge syntax reserves.

use std::collections::HashMap;

use super::{tokenize, ParseDiagnostic};
use crate::model::{state_hashes, AndId, BasicId, OrChild, OrId, ScModel};

#[derive(Debug, Clone, Copy)]
enum StateRef {
    Basic(BasicId),
    Or(OrId),
    And(AndId),
}

/// Canonical serialization of a statechart model.
pub fn serialize_statechart(sc: &ScModel) -> String {
    let hashes = state_hashes(sc);
    let mut out = String::new();

    for chart in sc.statecharts() {
        out.push_str("statechart ");
        out.push_str(sc.and_state(chart.top_state).name());
        out.push('\n');
    }

    let mut roots: Vec<StateRef> = Vec::new();
    roots.extend(
        sc.basics()
            .filter(|(_, b)| b.rcontains().is_none())
            .map(|(id, _)| StateRef::Basic(id)),
    );
    roots.extend(
        sc.ors()
            .filter(|(_, o)| o.rcontains().is_none())
            .map(|(id, _)| StateRef::Or(id)),
    );
    roots.extend(
        sc.ands()
            .filter(|(_, a)| a.rcontains().is_none())
            .map(|(id, _)| StateRef::And(id)),
    );
    sort_states(sc, &hashes, &mut roots);
    for root in roots {
        render(sc, &hashes, root, 0, &mut out);
    }

    let mut edges: Vec<&crate::model::HyperEdge> = sc.hyperedges().map(|(_, e)| e).collect();
    edges.sort_by_key(|e| e.name());
    for edge in edges {
        let mut sources: Vec<&str> = edge.rnext().iter().map(|&b| sc.basic(b).name()).collect();
        let mut targets: Vec<&str> = edge.next().iter().map(|&b| sc.basic(b).name()).collect();
        sources.sort_unstable();
        targets.sort_unstable();
        out.push_str("edge ");
        out.push_str(edge.name());
        out.push_str(" : ");
        out.push_str(&sources.join(","));
        out.push_str(" -> ");
        out.push_str(&targets.join(","));
        out.push('\n');
    }

    out
}

fn sort_states(sc: &ScModel, hashes: &crate::model::StateHashes, states: &mut [StateRef]) {
    states.sort_by(|&x, &y| {
        let kx = (hash_of(hashes, x), name_of(sc, x));
        let ky = (hash_of(hashes, y), name_of(sc, y));
        kx.cmp(&ky)
    });
}

fn hash_of(hashes: &crate::model::StateHashes, state: StateRef) -> u64 {
    match state {
        StateRef::Basic(id) => hashes.basics[id.index()],
        StateRef::Or(id) => hashes.ors[id.index()],
        StateRef::And(id) => hashes.ands[id.index()],
    }
}

fn name_of(sc: &ScModel, state: StateRef) -> &str {
    match state {
        StateRef::Basic(id) => sc.basic(id).name(),
        StateRef::Or(id) => sc.or_state(id).name(),
        StateRef::And(id) => sc.and_state(id).name(),
    }
}

fn render(
    sc: &ScModel,
    hashes: &crate::model::StateHashes,
    state: StateRef,
    depth: usize,
    out: &mut String,
) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    let (kind, name) = match state {
        StateRef::Basic(id) => ("basic", sc.basic(id).name()),
        StateRef::Or(id) => ("or", sc.or_state(id).name()),
        StateRef::And(id) => ("and", sc.and_state(id).name()),
    };
    out.push_str(kind);
    out.push(' ');
    out.push_str(name);
    out.push('\n');

    let mut children: Vec<StateRef> = match state {
        StateRef::Basic(_) => Vec::new(),
        StateRef::Or(id) => sc
            .or_state(id)
            .contains()
            .iter()
            .map(|&ch| match ch {
                OrChild::Basic(b) => StateRef::Basic(b),
                OrChild::And(a) => StateRef::And(a),
            })
            .collect(),
        StateRef::And(id) => sc
            .and_state(id)
            .contains()
            .iter()
            .map(|&o| StateRef::Or(o))
            .collect(),
    };
    sort_states(sc, hashes, &mut children);
    for child in children {
        render(sc, hashes, child, depth + 1, out);
    }
}

fn check_ident(name: &str) -> Option<String> {
    if name.contains(',') || name.contains('#') {
        Some(format!("identifier `{name}` contains a reserved character"))
    } else if name == ":" || name == "->" {
        Some(format!("identifier `{name}` is a reserved token"))
    } else {
        None
    }
}

/// Parses the `.sc` format back into a model, rebuilding `rcontains` from
/// the nesting and `rnext` from the edge lines.
pub fn parse_statechart(text: &str) -> Result<ScModel, Vec<ParseDiagnostic>> {
    let mut sc = ScModel::new();
    let mut diagnostics: Vec<ParseDiagnostic> = Vec::new();
    let mut basic_names: HashMap<String, BasicId> = HashMap::new();
    let mut or_names: HashMap<String, OrId> = HashMap::new();
    let mut edge_names: HashMap<String, ()> = HashMap::new();
    let mut and_names: HashMap<String, Vec<AndId>> = HashMap::new();
    // ancestors of the state parsed last; index = depth
    let mut stack: Vec<StateRef> = Vec::new();
    let mut pending_edges: Vec<EdgeLine> = Vec::new();
    let mut pending_charts: Vec<(usize, usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        if raw.starts_with('\t') {
            diagnostics.push(ParseDiagnostic::error_at(
                lineno,
                1,
                "tabs are not allowed in indentation",
            ));
            continue;
        }
        let indent = raw.len() - raw.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            diagnostics.push(ParseDiagnostic::error_at(
                lineno,
                indent + 1,
                "indentation must be a multiple of two spaces",
            ));
            continue;
        }
        let depth = indent / 2;
        let (kw_col, keyword) = tokens[0];

        match keyword {
            "statechart" => {
                if depth != 0 {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        "statechart line must not be indented",
                    ));
                    continue;
                }
                if tokens.len() != 2 {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        "expected `statechart <name>`",
                    ));
                    continue;
                }
                pending_charts.push((lineno, tokens[1].0, tokens[1].1.to_string()));
            }
            "basic" | "or" | "and" => {
                if tokens.len() != 2 {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        format!("expected `{keyword} <name>`"),
                    ));
                    continue;
                }
                let (name_col, name) = tokens[1];
                if let Some(msg) = check_ident(name) {
                    diagnostics.push(ParseDiagnostic::error_at(lineno, name_col, msg));
                    continue;
                }
                if depth > stack.len() {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        "indentation skips a level",
                    ));
                    continue;
                }
                stack.truncate(depth);
                let parent = if depth == 0 {
                    None
                } else {
                    Some(stack[depth - 1])
                };

                // nesting rules of the metamodel
                match (parent, keyword) {
                    (None, _) => {}
                    (Some(StateRef::Or(_)), "basic" | "and") => {}
                    (Some(StateRef::Or(_)), _) => {
                        diagnostics.push(ParseDiagnostic::error_at(
                            lineno,
                            kw_col,
                            "OR may contain only Basic and AND",
                        ));
                        continue;
                    }
                    (Some(StateRef::And(_)), "or") => {}
                    (Some(StateRef::And(_)), _) => {
                        diagnostics.push(ParseDiagnostic::error_at(
                            lineno,
                            kw_col,
                            "AND may contain only OR",
                        ));
                        continue;
                    }
                    (Some(StateRef::Basic(_)), _) => {
                        diagnostics.push(ParseDiagnostic::error_at(
                            lineno,
                            kw_col,
                            "Basic states cannot contain states",
                        ));
                        continue;
                    }
                }

                let state = match keyword {
                    "basic" => {
                        if basic_names.contains_key(name) {
                            diagnostics.push(ParseDiagnostic::error_at(
                                lineno,
                                name_col,
                                format!("duplicate basic name {name}"),
                            ));
                            continue;
                        }
                        let id = sc.add_basic(name);
                        basic_names.insert(name.to_string(), id);
                        StateRef::Basic(id)
                    }
                    "or" => {
                        if or_names.contains_key(name) {
                            diagnostics.push(ParseDiagnostic::error_at(
                                lineno,
                                name_col,
                                format!("duplicate or name {name}"),
                            ));
                            continue;
                        }
                        let id = sc.add_or(name);
                        or_names.insert(name.to_string(), id);
                        StateRef::Or(id)
                    }
                    _ => {
                        let id = sc.add_and(name);
                        and_names.entry(name.to_string()).or_default().push(id);
                        StateRef::And(id)
                    }
                };

                match (parent, state) {
                    (Some(StateRef::Or(or)), StateRef::Basic(b)) => {
                        sc.or_add_child(or, OrChild::Basic(b))
                    }
                    (Some(StateRef::Or(or)), StateRef::And(a)) => {
                        sc.or_add_child(or, OrChild::And(a))
                    }
                    (Some(StateRef::And(and)), StateRef::Or(o)) => sc.and_add_or(and, o),
                    _ => {}
                }
                stack.push(state);
            }
            "edge" => {
                if depth != 0 {
                    diagnostics.push(ParseDiagnostic::error_at(
                        lineno,
                        kw_col,
                        "edge line must not be indented",
                    ));
                    continue;
                }
                match parse_edge_line(lineno, &tokens) {
                    Ok((name_col, name, sources, targets)) => {
                        if let Some(msg) = check_ident(&name) {
                            diagnostics.push(ParseDiagnostic::error_at(lineno, name_col, msg));
                            continue;
                        }
                        if edge_names.contains_key(&name) {
                            diagnostics.push(ParseDiagnostic::error_at(
                                lineno,
                                name_col,
                                format!("duplicate edge name {name}"),
                            ));
                            continue;
                        }
                        edge_names.insert(name.clone(), ());
                        pending_edges.push((lineno, name, sources, targets));
                    }
                    Err(d) => diagnostics.push(d),
                }
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

    // edges resolve against the full set of basics
    for (lineno, name, sources, targets) in pending_edges {
        let edge = sc.add_hyperedge(&name);
        for (col, src) in sources {
            match basic_names.get(&src) {
                Some(&b) => sc.link_basic_to_edge(b, edge),
                None => diagnostics.push(ParseDiagnostic::error_at(
                    lineno,
                    col,
                    format!("unknown edge endpoint {src}"),
                )),
            }
        }
        for (col, tgt) in targets {
            match basic_names.get(&tgt) {
                Some(&b) => sc.link_edge_to_basic(edge, b),
                None => diagnostics.push(ParseDiagnostic::error_at(
                    lineno,
                    col,
                    format!("unknown edge endpoint {tgt}"),
                )),
            }
        }
    }

    for (lineno, col, name) in pending_charts {
        let roots: Vec<AndId> = and_names
            .get(&name)
            .map(|ids| {
                ids.iter()
                    .copied()
                    .filter(|&a| sc.and_state(a).rcontains().is_none())
                    .collect()
            })
            .unwrap_or_default();
        match roots.as_slice() {
            [top] => sc.add_statechart(*top),
            [] => diagnostics.push(ParseDiagnostic::error_at(
                lineno,
                col,
                format!("unknown top state {name}"),
            )),
            _ => diagnostics.push(ParseDiagnostic::error_at(
                lineno,
                col,
                format!("ambiguous top state {name}"),
            )),
        }
    }

    if diagnostics.is_empty() {
        Ok(sc)
    } else {
        Err(diagnostics)
    }
}

type EdgeLine = (usize, String, Vec<(usize, String)>, Vec<(usize, String)>);

fn parse_edge_line(lineno: usize, tokens: &[(usize, &str)]) -> Result<EdgeLine, ParseDiagnostic> {
    let bad = || {
        ParseDiagnostic::error_at(
            lineno,
            tokens[0].0,
            "expected `edge <name> : <src,...> -> <tgt,...>`",
        )
    };
    if tokens.len() < 4 || tokens[2].1 != ":" {
        return Err(bad());
    }
    let (name_col, name) = tokens[1];
    let rest = &tokens[3..];
    let arrow = rest.iter().position(|&(_, t)| t == "->").ok_or_else(bad)?;
    let split_list = |toks: &[(usize, &str)]| -> Result<Vec<(usize, String)>, ParseDiagnostic> {
        match toks {
            [] => Ok(Vec::new()),
            [(col, list)] => Ok(list
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| (*col, s.to_string()))
                .collect()),
            _ => Err(bad()),
        }
    };
    let sources = split_list(&rest[..arrow])?;
    let targets = split_list(&rest[arrow + 1..])?;
    Ok((name_col, name.to_string(), sources, targets))
}
