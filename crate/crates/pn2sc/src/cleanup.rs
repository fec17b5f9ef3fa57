//! Final pass over the statechart: deletes emptied OR states, wraps the
//! unique root OR in a `_TOPSTATE_` AND state and creates the Statechart
//! instance pointing at the unique root AND.
//!
//! The two creation steps are guarded by size-one conditions; when a
//! guard fails the step silently does not apply, but the run report
//! carries a warning so irreducible inputs are visible to the caller.
//! The Petri net is never touched.

use crate::model::{AndId, OrId, ScModel};

pub const TOPSTATE_NAME: &str = "_TOPSTATE_";

#[derive(Debug, Clone, Default)]
pub struct CleanupReport {
    pub deleted_ors: usize,
    pub warnings: Vec<String>,
}

/// Deletes every live OR with empty contents, repeating until none
/// remain. Emptied ANDs are left alone (the rule targets OR only).
/// Returns the number of deletions.
pub fn delete_empty_ors(sc: &mut ScModel) -> usize {
    let mut deleted = 0;
    loop {
        let empty: Vec<OrId> = sc
            .ors()
            .filter(|(_, or)| or.contains().is_empty())
            .map(|(id, _)| id)
            .collect();
        if empty.is_empty() {
            return deleted;
        }
        for id in empty {
            sc.delete_or(id);
            deleted += 1;
        }
    }
}

/// If exactly one live OR is a root, creates the `_TOPSTATE_` AND
/// containing it and returns its id; otherwise changes nothing.
pub fn create_topstate(sc: &mut ScModel) -> Option<AndId> {
    let roots: Vec<OrId> = sc
        .ors()
        .filter(|(_, or)| or.rcontains().is_none())
        .map(|(id, _)| id)
        .collect();
    match roots.as_slice() {
        [only] => {
            let top = sc.add_and(TOPSTATE_NAME);
            sc.and_add_or(top, *only);
            Some(top)
        }
        _ => None,
    }
}

/// If exactly one live AND is a root, creates a Statechart with it as
/// `topState` — unless one pointing there already exists (exists
/// semantics, so a second cleanup run is a no-op). Returns whether a
/// statechart for the root is present afterwards.
pub fn create_statechart_instance(sc: &mut ScModel) -> bool {
    let roots: Vec<AndId> = sc
        .ands()
        .filter(|(_, and)| and.rcontains().is_none())
        .map(|(id, _)| id)
        .collect();
    match roots.as_slice() {
        [only] => {
            if !sc.statecharts().iter().any(|c| c.top_state == *only) {
                sc.add_statechart(*only);
            }
            true
        }
        _ => false,
    }
}

/// Runs the three cleanup steps in order.
pub fn cleanup(sc: &mut ScModel) -> CleanupReport {
    let mut report = CleanupReport {
        deleted_ors: delete_empty_ors(sc),
        warnings: Vec::new(),
    };
    if create_topstate(sc).is_none() {
        let roots = sc.ors().filter(|(_, o)| o.rcontains().is_none()).count();
        report.warnings.push(format!(
            "no top state created: {roots} root OR states (need exactly 1)"
        ));
    }
    if !create_statechart_instance(sc) {
        let roots = sc.ands().filter(|(_, a)| a.rcontains().is_none()).count();
        report.warnings.push(format!(
            "no statechart created: {roots} root AND states (need exactly 1)"
        ));
    }
    report
}
