//! The main reduction: prioritized in-place rewriting to a fixpoint.
//!
//! Three rules rewrite the net and statechart together, with strict
//! priority Post1 > Post2 > Post3: a lower-priority rule fires only when
//! no higher-priority match exists anywhere.
//!
//! * `Post1` (OR-reduction) collapses a place–transition–place sequence
//!   into one place, merging the two corresponding OR states into a new
//!   one named `<q>_OR_<r>`.
//! * `Post2` / `Post3` (AND-reductions) merge a transition's pre- or
//!   post-places when they have pairwise equal connectivity, nesting the
//!   corresponding OR states under a new AND (`AND1_<t>`/`a1_<t>`,
//!   `AND2_<t>`/`a2_<t>`).
//!
//! Every application strictly decreases `|places| + |transitions|`, so the
//! loop terminates. Candidates are visited in creation order (or a seeded
//! shuffle of it, for confluence testing); the first match in that order
//! fires. The scheduler memoizes definite non-matches per transition and
//! re-examines only the neighbourhood a rewrite touched, which cannot
//! change which match is found first — the naive full-rescan matcher in
//! the test suite pins that equivalence.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::{
    check_all, fresh_name, ModelReport, OrChild, OrId, PetriNet, PlaceId, ScModel, TransitionId,
};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    Post1,
    Post2,
    Post3,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Post1, Rule::Post2, Rule::Post3];

    fn index(self) -> usize {
        match self {
            Rule::Post1 => 0,
            Rule::Post2 => 1,
            Rule::Post3 => 2,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Post1 => f.write_str("Post1"),
            Rule::Post2 => f.write_str("Post2"),
            Rule::Post3 => f.write_str("Post3"),
        }
    }
}

/// A bound rule instance. For Post1 the bound places are `[q, r]`; for
/// Post2/Post3 they are the whole pre-/post-place group sorted by name
/// with the representative first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub rule: Rule,
    pub transition: TransitionId,
    pub bound_places: Vec<PlaceId>,
}

/// One line of the application trace: rule, transition and bound place
/// names as they were when the match was taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub transition: String,
    pub bound: Vec<String>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {} [bound: {}]",
            self.rule,
            self.transition,
            self.bound.join(", ")
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunStats {
    /// Applications per rule, indexed by `Rule::index`.
    pub applied: [u64; 3],
    /// Guard evaluations performed by the scheduler.
    pub match_attempts: u64,
    pub duration: Duration,
    /// Populated only when `ReduceOpts::record_trace` is set.
    pub trace: Vec<TraceStep>,
}

impl RunStats {
    pub fn applications(&self, rule: Rule) -> u64 {
        self.applied[rule.index()]
    }

    /// Total rewrite steps.
    pub fn steps(&self) -> u64 {
        self.applied.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct ReduceOpts {
    /// Skip the pre-application succedent-truth check. The succedent of
    /// every rule contains deletion conjuncts that contradict its own
    /// guard, so the check can never come back true; skipping it changes
    /// no trace. On by default.
    pub nac_optimisation: bool,
    /// Shuffle the candidate order (priority is unaffected).
    pub order_seed: Option<u64>,
    /// Run the full invariant suite and a priority-soundness scan after
    /// every rewrite step; failures abort the run.
    pub paranoid: bool,
    pub record_trace: bool,
}

impl Default for ReduceOpts {
    fn default() -> Self {
        ReduceOpts {
            nac_optimisation: true,
            order_seed: None,
            paranoid: false,
            record_trace: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("invariant violation after step {step}:\n{report}")]
    InvariantViolation { step: u64, report: ModelReport },
    #[error("priority violation at step {step}: {rule} fired while a Post1 match existed")]
    PriorityViolation { step: u64, rule: Rule },
}

/// Post1 guard: the transition has exactly one pre-place `q` and one
/// post-place `r`, and the two places share no producers and no
/// consumers. (`q = r` is impossible: the transition itself would sit in
/// both intersections.)
pub fn try_post1(pn: &PetriNet, t: TransitionId) -> Option<Match> {
    let transition = pn.transition(t);
    if transition.prep().len() != 1 || transition.postp().len() != 1 {
        return None;
    }
    let q = *transition.prep().first().unwrap();
    let r = *transition.postp().first().unwrap();
    let place_q = pn.place(q);
    let place_r = pn.place(r);
    if place_q.pret().intersection(place_r.pret()).next().is_some() {
        return None;
    }
    if place_q
        .postt()
        .intersection(place_r.postt())
        .next()
        .is_some()
    {
        return None;
    }
    Some(Match {
        rule: Rule::Post1,
        transition: t,
        bound_places: vec![q, r],
    })
}

fn equal_connectivity_group(pn: &PetriNet, group: &std::collections::BTreeSet<PlaceId>) -> bool {
    let mut members = group.iter();
    let first = pn.place(*members.next().unwrap());
    members.all(|&p| {
        let other = pn.place(p);
        other.pret() == first.pret() && other.postt() == first.postt()
    })
}

fn group_match(
    pn: &PetriNet,
    rule: Rule,
    t: TransitionId,
    group: &std::collections::BTreeSet<PlaceId>,
) -> Option<Match> {
    if group.len() <= 1 || !equal_connectivity_group(pn, group) {
        return None;
    }
    let mut bound: Vec<PlaceId> = group.iter().copied().collect();
    bound.sort_by(|&a, &b| pn.place(a).name().cmp(pn.place(b).name()));
    Some(Match {
        rule,
        transition: t,
        bound_places: bound,
    })
}

/// Post2 guard: more than one pre-place, all with pairwise equal `pret`
/// and `postt`. The representative is the lexicographically least name.
pub fn try_post2(pn: &PetriNet, t: TransitionId) -> Option<Match> {
    group_match(pn, Rule::Post2, t, pn.transition(t).prep())
}

/// Post3 guard: the mirror of Post2 over the post-places.
pub fn try_post3(pn: &PetriNet, t: TransitionId) -> Option<Match> {
    group_match(pn, Rule::Post3, t, pn.transition(t).postp())
}

pub fn try_rule(pn: &PetriNet, rule: Rule, t: TransitionId) -> Option<Match> {
    match rule {
        Rule::Post1 => try_post1(pn, t),
        Rule::Post2 => try_post2(pn, t),
        Rule::Post3 => try_post3(pn, t),
    }
}

fn revalidate(pn: &PetriNet, m: &Match) {
    assert!(
        pn.transition_live(m.transition),
        "stale match: transition deleted"
    );
    let again = try_rule(pn, m.rule, m.transition);
    assert!(
        again.as_ref() == Some(m),
        "stale match: guard no longer holds for {:?}",
        m
    );
}

/// OR-reduction. Creates the merged OR, moves both ORs' contents into it,
/// renames `q` to match, folds `r`'s connectivity into `q`, then deletes
/// `r` and the transition. Deleting the transition last removes the
/// reference to it that the `pret` union transiently adds to `q`.
pub fn apply_post1(pn: &mut PetriNet, sc: &mut ScModel, m: &Match) {
    assert_eq!(m.rule, Rule::Post1);
    revalidate(pn, m);
    let (q, r) = (m.bound_places[0], m.bound_places[1]);
    let q_name = pn.place(q).name().to_string();
    let r_name = pn.place(r).name().to_string();
    let or_q = sc.lookup_or(&q_name).expect("no OR state for pre-place");
    let or_r = sc.lookup_or(&r_name).expect("no OR state for post-place");

    let merged_name = fresh_name(&format!("{q_name}_OR_{r_name}"), pn, sc);
    let merged_or = sc.add_or(merged_name.clone());
    let mut movers: Vec<OrChild> = sc.or_state(or_q).contains().iter().copied().collect();
    movers.extend(sc.or_state(or_r).contains().iter().copied());
    for child in movers {
        sc.or_add_child(merged_or, child);
    }

    pn.rename_place(q, merged_name);
    let producers: Vec<TransitionId> = pn.place(r).pret().iter().copied().collect();
    for u in producers {
        pn.add_output_arc(u, q);
    }
    let consumers: Vec<TransitionId> = pn.place(r).postt().iter().copied().collect();
    for u in consumers {
        pn.add_input_arc(q, u);
    }
    pn.delete_place(r);
    pn.delete_transition(m.transition);
}

fn apply_group(pn: &mut PetriNet, sc: &mut ScModel, m: &Match, or_prefix: &str, and_prefix: &str) {
    revalidate(pn, m);
    let t_name = pn.transition(m.transition).name().to_string();
    let representative = m.bound_places[0];

    // look the member ORs up by the places' current names, before the rename
    let member_ors: Vec<OrId> = m
        .bound_places
        .iter()
        .map(|&p| {
            sc.lookup_or(pn.place(p).name())
                .expect("no OR state for group member")
        })
        .collect();

    let or_name = fresh_name(&format!("{or_prefix}{t_name}"), pn, sc);
    let and_state = sc.add_and(format!("{and_prefix}{t_name}"));
    let wrapper_or = sc.add_or(or_name.clone());
    sc.or_add_child(wrapper_or, OrChild::And(and_state));
    for or in member_ors {
        sc.and_add_or(and_state, or);
    }

    pn.rename_place(representative, or_name);
    for &p in &m.bound_places[1..] {
        pn.delete_place(p);
    }
}

/// AND-reduction over pre-places: the group's OR states move under a new
/// AND `a1_<t>` inside a new OR `AND1_<t>`; the representative place is
/// renamed to the OR's name and the rest of the group is deleted, leaving
/// the transition with a single pre-place.
pub fn apply_post2(pn: &mut PetriNet, sc: &mut ScModel, m: &Match) {
    assert_eq!(m.rule, Rule::Post2);
    apply_group(pn, sc, m, "AND1_", "a1_");
}

/// AND-reduction over post-places; prefixes `AND2_`/`a2_`.
pub fn apply_post3(pn: &mut PetriNet, sc: &mut ScModel, m: &Match) {
    assert_eq!(m.rule, Rule::Post3);
    apply_group(pn, sc, m, "AND2_", "a2_");
}

pub fn apply_rule(pn: &mut PetriNet, sc: &mut ScModel, m: &Match) {
    match m.rule {
        Rule::Post1 => apply_post1(pn, sc, m),
        Rule::Post2 => apply_post2(pn, sc, m),
        Rule::Post3 => apply_post3(pn, sc, m),
    }
}

/// The succedent of each rule, evaluated on the current models. Its
/// deletion conjuncts contradict the guard of a valid match, so for any
/// match the scheduler is about to apply this comes back false; the NAC
/// optimisation consists of not calling it.
fn succedent_already_holds(pn: &PetriNet, m: &Match) -> bool {
    match m.rule {
        // r→isDeleted() & self→isDeleted(), short-circuiting the rest
        Rule::Post1 => !pn.place_live(m.bound_places[1]) && !pn.transition_live(m.transition),
        // (group − {p1})→isDeleted()
        Rule::Post2 | Rule::Post3 => m.bound_places[1..].iter().all(|&p| !pn.place_live(p)),
    }
}

/// The scheduler's candidate order: transitions by ascending creation
/// index, or a seeded shuffle of that list. Rules never create
/// transitions, so the order is fixed for a whole run.
pub fn candidate_order(pn: &PetriNet, order_seed: Option<u64>) -> Vec<TransitionId> {
    let mut order: Vec<TransitionId> = pn.transitions().map(|(id, _)| id).collect();
    if let Some(seed) = order_seed {
        SplitMix64::new(seed).shuffle(&mut order);
    }
    order
}

fn next_match(
    pn: &PetriNet,
    order: &[TransitionId],
    miss: &mut [[bool; 3]],
    attempts: &mut u64,
) -> Option<Match> {
    for rule in Rule::ALL {
        for &t in order {
            if !pn.transition_live(t) || miss[t.index()][rule.index()] {
                continue;
            }
            *attempts += 1;
            match try_rule(pn, rule, t) {
                Some(m) => return Some(m),
                None => miss[t.index()][rule.index()] = true,
            }
        }
    }
    None
}

/// Applies matches until none exists. See the module docs for the
/// selection policy. Errors are only produced in paranoid mode.
pub fn run_to_fixpoint(
    pn: &mut PetriNet,
    sc: &mut ScModel,
    opts: &ReduceOpts,
) -> Result<RunStats, ReduceError> {
    let started = Instant::now();
    let mut stats = RunStats::default();

    let order = candidate_order(pn, opts.order_seed);
    let slots = order.iter().map(|t| t.index() + 1).max().unwrap_or(0);
    // known definite non-matches, per transition and rule; cleared for the
    // neighbourhood of every rewrite
    let mut miss = vec![[false; 3]; slots];

    while let Some(m) = next_match(pn, &order, &mut miss, &mut stats.match_attempts) {
        if !opts.nac_optimisation && succedent_already_holds(pn, &m) {
            // constraint already satisfied; nothing to rewrite
            miss[m.transition.index()][m.rule.index()] = true;
            continue;
        }

        if opts.paranoid && m.rule != Rule::Post1 {
            let shadowed = order
                .iter()
                .any(|&t| pn.transition_live(t) && try_post1(pn, t).is_some());
            if shadowed {
                return Err(ReduceError::PriorityViolation {
                    step: stats.steps(),
                    rule: m.rule,
                });
            }
        }

        if opts.record_trace {
            stats.trace.push(TraceStep {
                rule: m.rule,
                transition: pn.transition(m.transition).name().to_string(),
                bound: m
                    .bound_places
                    .iter()
                    .map(|&p| pn.place(p).name().to_string())
                    .collect(),
            });
        }

        apply_rule(pn, sc, &m);
        stats.applied[m.rule.index()] += 1;

        // Only transitions adjacent to a place whose link sets changed can
        // change match status. For Post1 that neighbourhood is the merged
        // place's (it absorbed r's links); for Post2/Post3 the deleted
        // places had the representative's connectivity, so its
        // neighbourhood covers them too.
        let focus = m.bound_places[0];
        let place = pn.place(focus);
        for &t in place.pret().iter().chain(place.postt()) {
            miss[t.index()] = [false; 3];
        }

        if opts.paranoid {
            let report = check_all(pn, sc);
            if !report.passed() {
                return Err(ReduceError::InvariantViolation {
                    step: stats.steps(),
                    report,
                });
            }
        }
    }

    stats.duration = started.elapsed();
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initialise::initialise;
    use crate::model::{check_inv, check_name_uniqueness};

    fn chain() -> (PetriNet, TransitionId) {
        let mut pn = PetriNet::new();
        let q = pn.add_place("q");
        let r = pn.add_place("r");
        let t = pn.add_transition("t");
        pn.add_input_arc(q, t);
        pn.add_output_arc(t, r);
        (pn, t)
    }

    #[test]
    fn post1_matches_the_chain() {
        let (pn, t) = chain();
        let m = try_post1(&pn, t).unwrap();
        assert_eq!(m.rule, Rule::Post1);
        let names: Vec<&str> = m.bound_places.iter().map(|&p| pn.place(p).name()).collect();
        assert_eq!(names, vec!["q", "r"]);
    }

    #[test]
    fn post1_rejects_self_loop() {
        let mut pn = PetriNet::new();
        let p = pn.add_place("p");
        let t = pn.add_transition("t");
        pn.add_input_arc(p, t);
        pn.add_output_arc(t, p);
        // q = r = p: the transition sits in both intersections
        assert!(try_post1(&pn, t).is_none());
    }

    #[test]
    fn post1_rejects_wide_prep() {
        let mut pn = PetriNet::new();
        let a = pn.add_place("a");
        let b = pn.add_place("b");
        let r = pn.add_place("r");
        let t = pn.add_transition("t");
        pn.add_input_arc(a, t);
        pn.add_input_arc(b, t);
        pn.add_output_arc(t, r);
        assert!(try_post1(&pn, t).is_none());
    }

    #[test]
    fn post1_rejects_shared_consumer() {
        // q and r both feed u: postt intersection is nonempty
        let mut pn = PetriNet::new();
        let q = pn.add_place("q");
        let r = pn.add_place("r");
        let t = pn.add_transition("t");
        let u = pn.add_transition("u");
        pn.add_input_arc(q, t);
        pn.add_output_arc(t, r);
        pn.add_input_arc(q, u);
        pn.add_input_arc(r, u);
        assert!(try_post1(&pn, t).is_none());
    }

    #[test]
    fn apply_post1_merges_places_and_ors() {
        let (mut pn, t) = chain();
        let mut sc = initialise(&pn).unwrap();
        let m = try_post1(&pn, t).unwrap();
        apply_post1(&mut pn, &mut sc, &m);

        assert_eq!(pn.live_place_count(), 1);
        assert_eq!(pn.live_transition_count(), 0);
        let (_, merged) = pn.places().next().unwrap();
        assert_eq!(merged.name(), "q_OR_r");

        let or = sc.lookup_or("q_OR_r").unwrap();
        assert_eq!(sc.or_state(or).contains().len(), 2);
        // the two original ORs are emptied, not deleted
        assert!(sc
            .or_state(sc.lookup_or("q").unwrap())
            .contains()
            .is_empty());
        assert!(sc
            .or_state(sc.lookup_or("r").unwrap())
            .contains()
            .is_empty());
        assert!(check_inv(&pn, &sc).passed());
        assert!(check_name_uniqueness(&pn, &sc).passed());
    }

    #[test]
    fn apply_post1_unions_external_connectivity() {
        let (mut pn, t) = chain();
        let u = pn.add_transition("u");
        let (q, _) = pn.places().find(|(_, p)| p.name() == "q").unwrap();
        pn.add_output_arc(u, q); // extra producer into q
        let mut sc = initialise(&pn).unwrap();
        let m = try_post1(&pn, t).unwrap();
        apply_post1(&mut pn, &mut sc, &m);
        assert!(pn.place(q).pret().contains(&u));
        assert!(pn.transition_live(u));
    }

    #[test]
    #[should_panic(expected = "stale match")]
    fn stale_match_is_a_fault() {
        let (mut pn, t) = chain();
        let mut sc = initialise(&pn).unwrap();
        let m = try_post1(&pn, t).unwrap();
        apply_post1(&mut pn, &mut sc, &m);
        apply_post1(&mut pn, &mut sc, &m);
    }

    fn fork_join() -> (PetriNet, TransitionId, TransitionId) {
        // u → {p1, p2} → t with equal connectivity on p1, p2
        let mut pn = PetriNet::new();
        let p1 = pn.add_place("p1");
        let p2 = pn.add_place("p2");
        let u = pn.add_transition("u");
        let t = pn.add_transition("t");
        pn.add_output_arc(u, p1);
        pn.add_output_arc(u, p2);
        pn.add_input_arc(p1, t);
        pn.add_input_arc(p2, t);
        (pn, u, t)
    }

    #[test]
    fn post2_matches_equal_connectivity_group() {
        let (pn, _, t) = fork_join();
        let m = try_post2(&pn, t).unwrap();
        let names: Vec<&str> = m.bound_places.iter().map(|&p| pn.place(p).name()).collect();
        assert_eq!(names, vec!["p1", "p2"]);
    }

    #[test]
    fn post2_rejects_singleton_prep() {
        let (pn, t) = chain();
        assert!(try_post2(&pn, t).is_none());
    }

    #[test]
    fn post2_rejects_differing_connectivity() {
        let (mut pn, _, t) = fork_join();
        let (p1, _) = pn.places().find(|(_, p)| p.name() == "p1").unwrap();
        let extra = pn.add_transition("extra");
        pn.add_input_arc(p1, extra); // p1 now has a consumer p2 lacks
        assert!(try_post2(&pn, t).is_none());
    }

    #[test]
    fn apply_post2_builds_the_and_layer() {
        let (mut pn, _, t) = fork_join();
        let mut sc = initialise(&pn).unwrap();
        let m = try_post2(&pn, t).unwrap();
        apply_post2(&mut pn, &mut sc, &m);

        let wrapper = sc.lookup_or("AND1_t").unwrap();
        let children: Vec<_> = sc.or_state(wrapper).contains().iter().copied().collect();
        assert_eq!(children.len(), 1);
        let OrChild::And(and_id) = children[0] else {
            panic!("wrapper OR must contain the AND")
        };
        assert_eq!(sc.and_state(and_id).name(), "a1_t");
        assert_eq!(sc.and_state(and_id).contains().len(), 2);

        // p1 renamed to the wrapper's name, p2 gone, prep now a singleton
        let (_, p1) = pn.places().find(|(_, p)| p.name() == "AND1_t").unwrap();
        assert_eq!(p1.name(), "AND1_t");
        assert_eq!(pn.transition(t).prep().len(), 1);
        assert_eq!(pn.live_place_count(), 1);
        assert!(check_inv(&pn, &sc).passed());
    }

    #[test]
    fn post3_is_the_mirror_of_post2() {
        let (pn_fwd, u, _) = fork_join();
        let m = try_post3(&pn_fwd, u).unwrap();
        assert_eq!(m.rule, Rule::Post3);
        let mut pn = pn_fwd;
        let mut sc = initialise(&pn).unwrap();
        apply_post3(&mut pn, &mut sc, &m);
        assert!(sc.lookup_or("AND2_u").is_some());
        assert_eq!(pn.transition(u).postp().len(), 1);
        assert!(check_inv(&pn, &sc).passed());
    }

    #[test]
    fn post3_rejects_singleton_postp() {
        let (pn, t) = chain();
        assert!(try_post3(&pn, t).is_none());
    }

    #[test]
    fn fixpoint_on_chain_is_one_post1() {
        let (mut pn, _) = chain();
        let mut sc = initialise(&pn).unwrap();
        let stats = run_to_fixpoint(&mut pn, &mut sc, &ReduceOpts::default()).unwrap();
        assert_eq!(stats.applications(Rule::Post1), 1);
        assert_eq!(stats.steps(), 1);
        assert_eq!(pn.live_place_count(), 1);
        assert_eq!(pn.live_transition_count(), 0);
    }

    #[test]
    fn fixpoint_on_irreducible_net_is_zero_steps() {
        let mut pn = PetriNet::new();
        pn.add_place("lonely");
        let mut sc = initialise(&pn).unwrap();
        let stats = run_to_fixpoint(&mut pn, &mut sc, &ReduceOpts::default()).unwrap();
        assert_eq!(stats.steps(), 0);
    }

    #[test]
    fn fixpoint_on_diamond_reaches_single_place() {
        // e → u → {p1,p2} → t → x
        let mut pn = PetriNet::new();
        let e = pn.add_place("e");
        let p1 = pn.add_place("p1");
        let p2 = pn.add_place("p2");
        let x = pn.add_place("x");
        let u = pn.add_transition("u");
        let t = pn.add_transition("t");
        pn.add_input_arc(e, u);
        pn.add_output_arc(u, p1);
        pn.add_output_arc(u, p2);
        pn.add_input_arc(p1, t);
        pn.add_input_arc(p2, t);
        pn.add_output_arc(t, x);

        let mut sc = initialise(&pn).unwrap();
        let opts = ReduceOpts {
            paranoid: true,
            record_trace: true,
            ..ReduceOpts::default()
        };
        let stats = run_to_fixpoint(&mut pn, &mut sc, &opts).unwrap();
        assert_eq!(pn.live_place_count(), 1);
        assert_eq!(pn.live_transition_count(), 0);
        // the AND-reduction collapses the branch group, then Post1 twice
        assert_eq!(
            stats.applications(Rule::Post2) + stats.applications(Rule::Post3),
            1
        );
        assert_eq!(stats.applications(Rule::Post1), 2);
        assert_eq!(sc.ands().count(), 1);
        assert!(check_inv(&pn, &sc).passed());
    }

    #[test]
    fn chained_post1_concatenates_names() {
        let mut pn = PetriNet::new();
        let a = pn.add_place("a");
        let b = pn.add_place("b");
        let c = pn.add_place("c");
        let t1 = pn.add_transition("t1");
        let t2 = pn.add_transition("t2");
        pn.add_input_arc(a, t1);
        pn.add_output_arc(t1, b);
        pn.add_input_arc(b, t2);
        pn.add_output_arc(t2, c);
        let mut sc = initialise(&pn).unwrap();
        let stats = run_to_fixpoint(&mut pn, &mut sc, &ReduceOpts::default()).unwrap();
        assert_eq!(stats.applications(Rule::Post1), 2);
        let (_, only) = pn.places().next().unwrap();
        assert_eq!(only.name(), "a_OR_b_OR_c");
        let merged = sc.lookup_or("a_OR_b_OR_c").unwrap();
        assert_eq!(sc.or_state(merged).contains().len(), 3);
        // the intermediate OR was emptied when its contents moved on
        assert!(sc
            .or_state(sc.lookup_or("a_OR_b").unwrap())
            .contains()
            .is_empty());
    }

    #[test]
    fn synthesized_name_collision_gets_a_suffix() {
        let mut pn = PetriNet::new();
        let q = pn.add_place("q");
        let r = pn.add_place("r");
        pn.add_place("q_OR_r"); // pre-existing name the rule would synthesize
        let t = pn.add_transition("t");
        pn.add_input_arc(q, t);
        pn.add_output_arc(t, r);
        let mut sc = initialise(&pn).unwrap();
        let stats = run_to_fixpoint(
            &mut pn,
            &mut sc,
            &ReduceOpts {
                paranoid: true,
                ..ReduceOpts::default()
            },
        )
        .unwrap();
        assert_eq!(stats.applications(Rule::Post1), 1);
        assert!(pn.place(q).name() == "q_OR_r~1");
        assert!(sc.lookup_or("q_OR_r~1").is_some());
        assert!(check_inv(&pn, &sc).passed());
    }

    #[test]
    fn trace_lines_have_the_documented_format() {
        let (mut pn, _) = chain();
        let mut sc = initialise(&pn).unwrap();
        let opts = ReduceOpts {
            record_trace: true,
            ..ReduceOpts::default()
        };
        let stats = run_to_fixpoint(&mut pn, &mut sc, &opts).unwrap();
        assert_eq!(stats.trace.len(), 1);
        assert_eq!(stats.trace[0].to_string(), "Post1 @ t [bound: q, r]");
    }

    #[test]
    fn nac_optimisation_changes_nothing() {
        let (mut pn_a, _, _) = fork_join();
        let mut pn_b = pn_a.clone();
        let mut sc_a = initialise(&pn_a).unwrap();
        let mut sc_b = initialise(&pn_b).unwrap();
        let on = ReduceOpts {
            record_trace: true,
            ..ReduceOpts::default()
        };
        let off = ReduceOpts {
            nac_optimisation: false,
            record_trace: true,
            ..ReduceOpts::default()
        };
        let stats_a = run_to_fixpoint(&mut pn_a, &mut sc_a, &on).unwrap();
        let stats_b = run_to_fixpoint(&mut pn_b, &mut sc_b, &off).unwrap();
        assert_eq!(stats_a.trace, stats_b.trace);
        assert!(crate::model::isomorphic_nets(&pn_a, &pn_b));
    }
}
