//! Shared helpers for the integration suites: seeded model generators,
//! a naive reference scheduler and a brute-force isomorphism oracle.
#![allow(dead_code)] // each test binary uses a different subset
//!
//! The reference implementations here deliberately avoid the library's
//! shortcuts: the scheduler rescans every transition against every rule
//! at every step (no memoization, no succedent reasoning), and the
//! isomorphism oracle searches bijections without any hashing. They are
//! the independent side of the dual-route checks.

use pn2sc::model::{AndId, BasicId, OrChild, OrId, PetriNet, PlaceId, ScModel, TransitionId};
use pn2sc::reduce::{apply_rule, candidate_order, try_rule, Match, Rule, TraceStep};

/// SplitMix64, kept local so test corpora never depend on library
/// internals.
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// A pseudo-random net with up to `max_places` places and
/// `max_transitions` transitions and arbitrary arc structure (self-loops,
/// shared places, isolated elements all possible). Names are unique, so
/// the initialisation precondition always holds.
pub fn random_net(seed: u64, max_places: usize, max_transitions: usize) -> PetriNet {
    let mut rng = TestRng::new(seed);
    let mut pn = PetriNet::new();
    let n_places = 1 + rng.below(max_places as u64) as usize;
    let n_transitions = rng.below(max_transitions as u64 + 1) as usize;
    let places: Vec<PlaceId> = (0..n_places)
        .map(|i| pn.add_place(format!("p{i}")))
        .collect();
    let transitions: Vec<TransitionId> = (0..n_transitions)
        .map(|i| pn.add_transition(format!("t{i}")))
        .collect();
    for &t in &transitions {
        for _ in 0..rng.below(4) {
            let p = places[rng.below(n_places as u64) as usize];
            pn.add_input_arc(p, t);
        }
        for _ in 0..rng.below(4) {
            let p = places[rng.below(n_places as u64) as usize];
            pn.add_output_arc(t, p);
        }
    }
    pn
}

/// A random flat statechart: each OR contains exactly its same-named
/// Basic, plus hyperedges with arbitrary source/target sets.
pub fn random_flat_sc(seed: u64) -> ScModel {
    let mut rng = TestRng::new(seed);
    let mut sc = ScModel::new();
    let n_states = 1 + rng.below(8) as usize;
    let basics: Vec<BasicId> = (0..n_states)
        .map(|i| {
            let or = sc.add_or(format!("s{i}"));
            let basic = sc.add_basic(format!("s{i}"));
            sc.or_add_child(or, OrChild::Basic(basic));
            basic
        })
        .collect();
    for j in 0..rng.below(7) {
        let edge = sc.add_hyperedge(format!("e{j}"));
        for _ in 0..rng.below(3) {
            sc.link_basic_to_edge(basics[rng.below(n_states as u64) as usize], edge);
        }
        for _ in 0..rng.below(3) {
            sc.link_edge_to_basic(edge, basics[rng.below(n_states as u64) as usize]);
        }
    }
    sc
}

/// Reference scheduler: at every step, rescan all transitions against
/// all three rules in priority order and apply the first match. The
/// `after_step` hook sees the models right after each application.
pub fn naive_reduce(
    pn: &mut PetriNet,
    sc: &mut ScModel,
    order_seed: Option<u64>,
    mut after_step: impl FnMut(&PetriNet, &ScModel, &Match),
) -> Vec<TraceStep> {
    let order = candidate_order(pn, order_seed);
    let mut trace = Vec::new();
    loop {
        let mut found: Option<Match> = None;
        'rules: for rule in Rule::ALL {
            for &t in &order {
                if !pn.transition_live(t) {
                    continue;
                }
                if let Some(m) = try_rule(pn, rule, t) {
                    found = Some(m);
                    break 'rules;
                }
            }
        }
        let Some(m) = found else {
            return trace;
        };
        trace.push(TraceStep {
            rule: m.rule,
            transition: pn.transition(m.transition).name().to_string(),
            bound: m
                .bound_places
                .iter()
                .map(|&p| pn.place(p).name().to_string())
                .collect(),
        });
        apply_rule(pn, sc, &m);
        after_step(pn, sc, &m);
    }
}

struct Oracle<'m> {
    a: &'m ScModel,
    b: &'m ScModel,
}

/// Exhaustive bijection search, for small models only. Candidates are
/// filtered by nothing but kind; all structure is verified on complete
/// assignments (with early aborts once a pair's containment or a basic's
/// edge degree is decided).
pub fn brute_force_isomorphic(a: &ScModel, b: &ScModel) -> bool {
    let oracle = Oracle { a, b };
    let a_basics: Vec<BasicId> = a.basics().map(|(id, _)| id).collect();
    let b_basics: Vec<BasicId> = b.basics().map(|(id, _)| id).collect();
    let a_ors: Vec<OrId> = a.ors().map(|(id, _)| id).collect();
    let b_ors: Vec<OrId> = b.ors().map(|(id, _)| id).collect();
    let a_ands: Vec<AndId> = a.ands().map(|(id, _)| id).collect();
    let b_ands: Vec<AndId> = b.ands().map(|(id, _)| id).collect();
    if a_basics.len() != b_basics.len()
        || a_ors.len() != b_ors.len()
        || a_ands.len() != b_ands.len()
        || a.hyperedges().count() != b.hyperedges().count()
        || a.statecharts().len() != b.statecharts().len()
    {
        return false;
    }

    let mut basic_map = std::collections::HashMap::new();
    oracle.assign_basics(
        &a_basics,
        &b_basics,
        0,
        &mut vec![false; b_basics.len()],
        &mut basic_map,
        &a_ors,
        &b_ors,
        &a_ands,
        &b_ands,
    )
}

impl<'m> Oracle<'m> {
    #[allow(clippy::too_many_arguments)]
    fn assign_basics(
        &self,
        a_basics: &[BasicId],
        b_basics: &[BasicId],
        pos: usize,
        used: &mut Vec<bool>,
        map: &mut std::collections::HashMap<BasicId, BasicId>,
        a_ors: &[OrId],
        b_ors: &[OrId],
        a_ands: &[AndId],
        b_ands: &[AndId],
    ) -> bool {
        if pos == a_basics.len() {
            if !self.edges_agree(map) {
                return false;
            }
            let mut or_map = std::collections::HashMap::new();
            return self.assign_ors(
                a_ors,
                b_ors,
                0,
                &mut vec![false; b_ors.len()],
                map,
                &mut or_map,
                a_ands,
                b_ands,
            );
        }
        let a_basic = a_basics[pos];
        for (i, &b_basic) in b_basics.iter().enumerate() {
            if used[i] {
                continue;
            }
            // cheap degree prune; full edge check happens once complete
            if self.a.basic(a_basic).next().len() != self.b.basic(b_basic).next().len()
                || self.a.basic(a_basic).rnext().len() != self.b.basic(b_basic).rnext().len()
            {
                continue;
            }
            used[i] = true;
            map.insert(a_basic, b_basic);
            if self.assign_basics(
                a_basics,
                b_basics,
                pos + 1,
                used,
                map,
                a_ors,
                b_ors,
                a_ands,
                b_ands,
            ) {
                return true;
            }
            map.remove(&a_basic);
            used[i] = false;
        }
        false
    }

    fn edges_agree(&self, basic_map: &std::collections::HashMap<BasicId, BasicId>) -> bool {
        let mut sig_a: Vec<(Vec<BasicId>, Vec<BasicId>)> = self
            .a
            .hyperedges()
            .map(|(_, e)| {
                let mut src: Vec<BasicId> = e.rnext().iter().map(|b| basic_map[b]).collect();
                let mut tgt: Vec<BasicId> = e.next().iter().map(|b| basic_map[b]).collect();
                src.sort_unstable();
                tgt.sort_unstable();
                (src, tgt)
            })
            .collect();
        let mut sig_b: Vec<(Vec<BasicId>, Vec<BasicId>)> = self
            .b
            .hyperedges()
            .map(|(_, e)| {
                (
                    e.rnext().iter().copied().collect(),
                    e.next().iter().copied().collect(),
                )
            })
            .collect();
        sig_a.sort();
        sig_b.sort();
        sig_a == sig_b
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_ors(
        &self,
        a_ors: &[OrId],
        b_ors: &[OrId],
        pos: usize,
        used: &mut Vec<bool>,
        basic_map: &std::collections::HashMap<BasicId, BasicId>,
        or_map: &mut std::collections::HashMap<OrId, OrId>,
        a_ands: &[AndId],
        b_ands: &[AndId],
    ) -> bool {
        if pos == a_ors.len() {
            let mut and_map = std::collections::HashMap::new();
            return self.assign_ands(
                a_ands,
                b_ands,
                0,
                &mut vec![false; b_ands.len()],
                basic_map,
                or_map,
                &mut and_map,
            );
        }
        let a_or = a_ors[pos];
        for (i, &b_or) in b_ors.iter().enumerate() {
            if used[i] {
                continue;
            }
            // the basic children (already mapped) must correspond
            let a_children = self.a.or_state(a_or).contains();
            let b_children = self.b.or_state(b_or).contains();
            if a_children.len() != b_children.len() {
                continue;
            }
            let basics_ok = a_children.iter().all(|child| match child {
                OrChild::Basic(ab) => b_children.contains(&OrChild::Basic(basic_map[ab])),
                OrChild::And(_) => true, // checked once ANDs are assigned
            });
            if !basics_ok {
                continue;
            }
            used[i] = true;
            or_map.insert(a_or, b_or);
            if self.assign_ors(
                a_ors,
                b_ors,
                pos + 1,
                used,
                basic_map,
                or_map,
                a_ands,
                b_ands,
            ) {
                return true;
            }
            or_map.remove(&a_or);
            used[i] = false;
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_ands(
        &self,
        a_ands: &[AndId],
        b_ands: &[AndId],
        pos: usize,
        used: &mut Vec<bool>,
        basic_map: &std::collections::HashMap<BasicId, BasicId>,
        or_map: &std::collections::HashMap<OrId, OrId>,
        and_map: &mut std::collections::HashMap<AndId, AndId>,
    ) -> bool {
        if pos == a_ands.len() {
            return self.verify(basic_map, or_map, and_map);
        }
        let a_and = a_ands[pos];
        for (i, &b_and) in b_ands.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            and_map.insert(a_and, b_and);
            if self.assign_ands(a_ands, b_ands, pos + 1, used, basic_map, or_map, and_map) {
                return true;
            }
            and_map.remove(&a_and);
            used[i] = false;
        }
        false
    }

    /// Full containment check over a complete assignment.
    fn verify(
        &self,
        basic_map: &std::collections::HashMap<BasicId, BasicId>,
        or_map: &std::collections::HashMap<OrId, OrId>,
        and_map: &std::collections::HashMap<AndId, AndId>,
    ) -> bool {
        for (a_or, &b_or) in or_map {
            let b_contents = self.b.or_state(b_or).contains();
            let a_contents = self.a.or_state(*a_or).contains();
            if a_contents.len() != b_contents.len() {
                return false;
            }
            for child in a_contents {
                let mapped = match child {
                    OrChild::Basic(b) => OrChild::Basic(basic_map[b]),
                    OrChild::And(a) => OrChild::And(and_map[a]),
                };
                if !b_contents.contains(&mapped) {
                    return false;
                }
            }
        }
        for (a_and, &b_and) in and_map {
            let a_contents = self.a.and_state(*a_and).contains();
            let b_contents = self.b.and_state(b_and).contains();
            if a_contents.len() != b_contents.len() {
                return false;
            }
            for or in a_contents {
                if !b_contents.contains(&or_map[or]) {
                    return false;
                }
            }
        }
        // statechart roots must correspond
        let mut tops_a: Vec<AndId> = self
            .a
            .statecharts()
            .iter()
            .map(|c| and_map[&c.top_state])
            .collect();
        let mut tops_b: Vec<AndId> = self.b.statecharts().iter().map(|c| c.top_state).collect();
        tops_a.sort_unstable();
        tops_b.sort_unstable();
        tops_a == tops_b
    }
}
