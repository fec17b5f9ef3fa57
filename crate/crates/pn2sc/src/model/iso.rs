//! Name-ignoring isomorphism of statecharts and name-preserving
//! isomorphism of Petri nets.
//!
//! Statecharts are compared structurally because the reduction rules
//! synthesize names that depend on rule-application order. The check runs
//! in two stages: iterative multiset hashing of the containment forest
//! combined with hyperedge connectivity (a colour refinement), then an
//! exact backtracking search over colour-compatible bijections, so a hash
//! collision can never produce a wrong answer.
//!
//! All hashing here is hand-rolled and platform-independent: the canonical
//! hashes also drive child ordering in the text serializer, so they must
//! never change between toolchains.

use std::collections::HashMap;

use super::petri::PetriNet;
use super::statechart::{AndId, BasicId, OrChild, OrId, ScModel};

const KIND_BASIC: u64 = 0x42415349;
const KIND_OR: u64 = 0x4f52;
const KIND_AND: u64 = 0x414e44;
const KIND_EDGE: u64 = 0x45444745;
const TAG_CHILDREN: u64 = 1;
const TAG_CONTAINER: u64 = 2;
const TAG_OUT: u64 = 3;
const TAG_IN: u64 = 4;
const TAG_SOURCES: u64 = 5;
const TAG_TARGETS: u64 = 6;

fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(seed: u64, value: u64) -> u64 {
    finalize(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ value)
}

/// Order-independent combination: sort, then fold.
fn mix_multiset(seed: u64, mut values: Vec<u64>) -> u64 {
    values.sort_unstable();
    values.into_iter().fold(seed, mix)
}

/// Canonical structure-only colours per element kind, indexed by arena
/// slot. Dead slots keep a zero colour and are never read.
#[derive(Debug, Default)]
pub(crate) struct StateHashes {
    pub basics: Vec<u64>,
    pub ors: Vec<u64>,
    pub ands: Vec<u64>,
    pub edges: Vec<u64>,
}

impl StateHashes {
    pub fn of_child(&self, child: OrChild) -> u64 {
        match child {
            OrChild::Basic(b) => self.basics[b.index()],
            OrChild::And(a) => self.ands[a.index()],
        }
    }
}

/// Colour refinement over the combined containment + hyperedge structure,
/// iterated until the colour partition stops growing.
pub(crate) fn state_hashes(sc: &ScModel) -> StateHashes {
    let mut h = StateHashes {
        basics: vec![0; sc.basics().map(|(id, _)| id.index() + 1).max().unwrap_or(0)],
        ors: vec![0; sc.ors().map(|(id, _)| id.index() + 1).max().unwrap_or(0)],
        ands: vec![0; sc.ands().map(|(id, _)| id.index() + 1).max().unwrap_or(0)],
        edges: vec![
            0;
            sc.hyperedges()
                .map(|(id, _)| id.index() + 1)
                .max()
                .unwrap_or(0)
        ],
    };
    for (id, _) in sc.basics() {
        h.basics[id.index()] = finalize(KIND_BASIC);
    }
    for (id, _) in sc.ors() {
        h.ors[id.index()] = finalize(KIND_OR);
    }
    for (id, _) in sc.ands() {
        h.ands[id.index()] = finalize(KIND_AND);
    }
    for (id, _) in sc.hyperedges() {
        h.edges[id.index()] = finalize(KIND_EDGE);
    }

    let mut distinct = count_distinct(&h);
    loop {
        h = refine(sc, &h);
        let now = count_distinct(&h);
        if now == distinct {
            return h;
        }
        distinct = now;
    }
}

fn refine(sc: &ScModel, old: &StateHashes) -> StateHashes {
    let mut new = StateHashes {
        basics: vec![0; old.basics.len()],
        ors: vec![0; old.ors.len()],
        ands: vec![0; old.ands.len()],
        edges: vec![0; old.edges.len()],
    };
    for (id, basic) in sc.basics() {
        let mut c = mix(KIND_BASIC, old.basics[id.index()]);
        c = mix_multiset(
            mix(c, TAG_OUT),
            basic.next().iter().map(|e| old.edges[e.index()]).collect(),
        );
        c = mix_multiset(
            mix(c, TAG_IN),
            basic.rnext().iter().map(|e| old.edges[e.index()]).collect(),
        );
        let container = basic.rcontains().map_or(0, |o| old.ors[o.index()]);
        new.basics[id.index()] = mix(mix(c, TAG_CONTAINER), container);
    }
    for (id, or) in sc.ors() {
        let mut c = mix(KIND_OR, old.ors[id.index()]);
        c = mix_multiset(
            mix(c, TAG_CHILDREN),
            or.contains().iter().map(|&ch| old.of_child(ch)).collect(),
        );
        let container = or.rcontains().map_or(0, |a| old.ands[a.index()]);
        new.ors[id.index()] = mix(mix(c, TAG_CONTAINER), container);
    }
    for (id, and) in sc.ands() {
        let mut c = mix(KIND_AND, old.ands[id.index()]);
        c = mix_multiset(
            mix(c, TAG_CHILDREN),
            and.contains().iter().map(|o| old.ors[o.index()]).collect(),
        );
        let container = and.rcontains().map_or(0, |o| old.ors[o.index()]);
        new.ands[id.index()] = mix(mix(c, TAG_CONTAINER), container);
    }
    for (id, edge) in sc.hyperedges() {
        let mut c = mix(KIND_EDGE, old.edges[id.index()]);
        c = mix_multiset(
            mix(c, TAG_SOURCES),
            edge.rnext().iter().map(|b| old.basics[b.index()]).collect(),
        );
        c = mix_multiset(
            mix(c, TAG_TARGETS),
            edge.next().iter().map(|b| old.basics[b.index()]).collect(),
        );
        new.edges[id.index()] = c;
    }
    new
}

fn count_distinct(h: &StateHashes) -> usize {
    let mut all: Vec<u64> = Vec::new();
    all.extend(&h.basics);
    all.extend(&h.ors);
    all.extend(&h.ands);
    all.extend(&h.edges);
    all.sort_unstable();
    all.dedup();
    all.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Basic(BasicId),
    Or(OrId),
    And(AndId),
}

struct IsoSearch<'a> {
    a: &'a ScModel,
    b: &'a ScModel,
    ha: StateHashes,
    hb: StateHashes,
    /// a-states in parents-before-children order.
    order: Vec<Node>,
    mapping: HashMap<Node, Node>,
    used: HashMap<Node, ()>,
}

impl<'a> IsoSearch<'a> {
    fn colour(&self, side_a: bool, node: Node) -> u64 {
        let h = if side_a { &self.ha } else { &self.hb };
        match node {
            Node::Basic(id) => h.basics[id.index()],
            Node::Or(id) => h.ors[id.index()],
            Node::And(id) => h.ands[id.index()],
        }
    }

    fn container(sc: &ScModel, node: Node) -> Option<Node> {
        match node {
            Node::Basic(id) => sc.basic(id).rcontains().map(Node::Or),
            Node::Or(id) => sc.or_state(id).rcontains().map(Node::And),
            Node::And(id) => sc.and_state(id).rcontains().map(Node::Or),
        }
    }

    fn all_nodes(sc: &ScModel) -> Vec<Node> {
        let mut nodes: Vec<Node> = sc.basics().map(|(id, _)| Node::Basic(id)).collect();
        nodes.extend(sc.ors().map(|(id, _)| Node::Or(id)));
        nodes.extend(sc.ands().map(|(id, _)| Node::And(id)));
        nodes
    }

    /// Assign a-states one at a time, parents first, backtracking over
    /// colour-compatible b-candidates whose container is consistent with
    /// the mapping built so far.
    fn assign(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return self.edges_match() && self.statecharts_match();
        }
        let a_node = self.order[pos];
        let want_colour = self.colour(true, a_node);
        let a_container = Self::container(self.a, a_node).map(|c| self.mapping[&c]);
        let candidates: Vec<Node> = Self::all_nodes(self.b)
            .into_iter()
            .filter(|&n| {
                std::mem::discriminant(&n) == std::mem::discriminant(&a_node)
                    && !self.used.contains_key(&n)
                    && self.colour(false, n) == want_colour
                    && Self::container(self.b, n) == a_container
            })
            .collect();
        for candidate in candidates {
            self.mapping.insert(a_node, candidate);
            self.used.insert(candidate, ());
            if self.assign(pos + 1) {
                return true;
            }
            self.mapping.remove(&a_node);
            self.used.remove(&candidate);
        }
        false
    }

    /// With all states mapped, hyperedges must agree as a multiset of
    /// (mapped sources, mapped targets) signatures.
    fn edges_match(&self) -> bool {
        let map_basic = |b: BasicId| match self.mapping[&Node::Basic(b)] {
            Node::Basic(id) => id,
            _ => unreachable!(),
        };
        let mut sig_a: Vec<(Vec<BasicId>, Vec<BasicId>)> = self
            .a
            .hyperedges()
            .map(|(_, e)| {
                let mut src: Vec<_> = e.rnext().iter().map(|&b| map_basic(b)).collect();
                let mut tgt: Vec<_> = e.next().iter().map(|&b| map_basic(b)).collect();
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

    fn statecharts_match(&self) -> bool {
        let mut tops_a: Vec<Node> = self
            .a
            .statecharts()
            .iter()
            .map(|c| self.mapping[&Node::And(c.top_state)])
            .collect();
        let mut tops_b: Vec<Node> = self
            .b
            .statecharts()
            .iter()
            .map(|c| Node::And(c.top_state))
            .collect();
        let key = |n: &Node| match n {
            Node::And(id) => id.index(),
            _ => unreachable!(),
        };
        tops_a.sort_by_key(key);
        tops_b.sort_by_key(key);
        tops_a == tops_b
    }
}

/// True iff a kind-, containment- and connectivity-preserving bijection
/// exists between the live elements of `a` and `b`, names ignored.
pub fn isomorphic_statecharts(a: &ScModel, b: &ScModel) -> bool {
    if a.basics().count() != b.basics().count()
        || a.ors().count() != b.ors().count()
        || a.ands().count() != b.ands().count()
        || a.hyperedges().count() != b.hyperedges().count()
        || a.statecharts().len() != b.statecharts().len()
    {
        return false;
    }

    let ha = state_hashes(a);
    let hb = state_hashes(b);
    if colour_multiset(&ha) != colour_multiset(&hb) {
        return false;
    }

    // Parents-before-children assignment order: sort by containment depth.
    let mut order = IsoSearch::all_nodes(a);
    let depth = |mut node: Node| {
        let mut d = 0;
        while let Some(c) = IsoSearch::container(a, node) {
            d += 1;
            node = c;
            if d > order_depth_limit(a) {
                break; // cyclic containment; the search will fail anyway
            }
        }
        d
    };
    order.sort_by_key(|&n| depth(n));

    let mut search = IsoSearch {
        a,
        b,
        ha,
        hb,
        order,
        mapping: HashMap::new(),
        used: HashMap::new(),
    };
    search.assign(0)
}

fn order_depth_limit(sc: &ScModel) -> usize {
    sc.state_count() + 1
}

fn colour_multiset(h: &StateHashes) -> Vec<u64> {
    let mut all: Vec<u64> = Vec::new();
    all.extend(h.basics.iter().filter(|&&c| c != 0));
    all.extend(h.ors.iter().filter(|&&c| c != 0));
    all.extend(h.ands.iter().filter(|&&c| c != 0));
    all.extend(h.edges.iter().filter(|&&c| c != 0));
    all.sort_unstable();
    all
}

/// True iff a name-preserving bijection matches the nets' `prep`/`postp`
/// sets exactly. Names are stable under initialise/inverse, so this is the
/// right equivalence for round-trip checks.
pub fn isomorphic_nets(a: &PetriNet, b: &PetriNet) -> bool {
    fn place_sigs(pn: &PetriNet) -> Vec<String> {
        let mut sigs: Vec<String> = pn.places().map(|(_, p)| p.name().to_string()).collect();
        sigs.sort();
        sigs
    }
    fn transition_sigs(pn: &PetriNet) -> Vec<(String, Vec<String>, Vec<String>)> {
        let mut sigs: Vec<(String, Vec<String>, Vec<String>)> = pn
            .transitions()
            .map(|(_, t)| {
                let mut prep: Vec<String> = t
                    .prep()
                    .iter()
                    .map(|&p| pn.place(p).name().to_string())
                    .collect();
                let mut postp: Vec<String> = t
                    .postp()
                    .iter()
                    .map(|&p| pn.place(p).name().to_string())
                    .collect();
                prep.sort();
                postp.sort();
                (t.name().to_string(), prep, postp)
            })
            .collect();
        sigs.sort();
        sigs
    }
    place_sigs(a) == place_sigs(b) && transition_sigs(a) == transition_sigs(b)
}
