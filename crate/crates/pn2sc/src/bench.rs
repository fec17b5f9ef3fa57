//! Synthetic series-parallel nets and per-phase timing.
//!
//! The generator composes blocks recursively. A block with a place budget
//! of one is a single place. Larger blocks either chain two sub-blocks
//! through a one-in/one-out transition (an OR-reduction site) or split
//! through a transition into k ≥ 2 branches that rejoin (an
//! AND-reduction site, framed by an entry and an exit place). Budgets are
//! split exactly, so the net has precisely the requested number of places
//! and the whole pipeline always ends at a single place.

use std::time::{Duration, Instant};

use crate::cleanup::cleanup;
use crate::initialise::initialise;
use crate::model::{PetriNet, PlaceId};
use crate::reduce::{run_to_fixpoint, ReduceOpts};
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub target_places: usize,
    pub seed: u64,
    /// Probability of a parallel split when the budget allows one.
    pub parallel_probability: f64,
}

impl GenSpec {
    pub fn new(target_places: usize, seed: u64) -> Self {
        GenSpec {
            target_places,
            seed,
            parallel_probability: 0.3,
        }
    }
}

struct Generator {
    net: PetriNet,
    rng: SplitMix64,
    parallel_probability: f64,
    next_place: usize,
    next_transition: usize,
}

impl Generator {
    fn place(&mut self) -> PlaceId {
        let id = self.net.add_place(format!("p{}", self.next_place));
        self.next_place += 1;
        id
    }

    fn transition(&mut self) -> crate::model::TransitionId {
        let id = self
            .net
            .add_transition(format!("t{}", self.next_transition));
        self.next_transition += 1;
        id
    }

    /// Builds a block with exactly `budget` places; returns its entry and
    /// exit places.
    fn block(&mut self, budget: usize) -> (PlaceId, PlaceId) {
        debug_assert!(budget >= 1);
        if budget == 1 {
            let p = self.place();
            return (p, p);
        }
        // a parallel split needs entry + exit + two branches of ≥ 1 place
        let parallel_possible = budget >= 4;
        if parallel_possible && self.rng.fraction() < self.parallel_probability {
            self.parallel_block(budget)
        } else {
            self.series_block(budget)
        }
    }

    fn series_block(&mut self, budget: usize) -> (PlaceId, PlaceId) {
        let first = 1 + self.rng.below(budget as u64 - 1) as usize;
        let (entry, left_exit) = self.block(first);
        let link = self.transition();
        self.net.add_input_arc(left_exit, link);
        let (right_entry, exit) = self.block(budget - first);
        self.net.add_output_arc(link, right_entry);
        (entry, exit)
    }

    fn parallel_block(&mut self, budget: usize) -> (PlaceId, PlaceId) {
        let inner = budget - 2;
        let max_branches = inner.min(5);
        let branches = 2 + self.rng.below(max_branches as u64 - 1) as usize;
        // branch budgets ≥ 1 summing to the inner budget
        let mut budgets = vec![1usize; branches];
        for _ in 0..inner - branches {
            let i = self.rng.below(branches as u64) as usize;
            budgets[i] += 1;
        }

        let entry = self.place();
        let split = self.transition();
        self.net.add_input_arc(entry, split);
        let join = self.transition();
        for branch_budget in budgets {
            let (branch_entry, branch_exit) = self.block(branch_budget);
            self.net.add_output_arc(split, branch_entry);
            self.net.add_input_arc(branch_exit, join);
        }
        let exit = self.place();
        self.net.add_output_arc(join, exit);
        (entry, exit)
    }
}

/// Equal generator specs produce byte-equal serialized nets.
pub fn generate_sp(spec: &GenSpec) -> PetriNet {
    assert!(spec.target_places >= 1, "target_places must be at least 1");
    let mut generator = Generator {
        net: PetriNet::new(),
        rng: SplitMix64::new(spec.seed),
        parallel_probability: spec.parallel_probability,
        next_place: 0,
        next_transition: 0,
    };
    generator.block(spec.target_places);
    generator.net
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initialise,
    Reduce,
    Cleanup,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Initialise, Phase::Reduce, Phase::Cleanup];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Initialise => "initialise",
            Phase::Reduce => "reduce",
            Phase::Cleanup => "cleanup",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub size: usize,
    pub phase: Phase,
    pub median: Duration,
    pub final_places: usize,
}

/// Times each phase separately over `repetitions` runs per size (after
/// one discarded warm-up run) and reports medians plus the place count
/// left after reduction.
pub fn run_bench(sizes: &[usize], seed: u64, repetitions: usize) -> Vec<BenchRow> {
    assert!(!sizes.is_empty() && repetitions >= 1);
    let mut rows = Vec::new();
    for &size in sizes {
        let net = generate_sp(&GenSpec::new(size, seed));
        let mut samples: [Vec<Duration>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut final_places = 0;
        for rep in 0..=repetitions {
            let mut pn = net.clone();
            let start = Instant::now();
            let mut sc = initialise(&pn).expect("generated nets satisfy the preconditions");
            let after_init = Instant::now();
            run_to_fixpoint(&mut pn, &mut sc, &ReduceOpts::default())
                .expect("non-paranoid runs cannot fail");
            let after_reduce = Instant::now();
            cleanup(&mut sc);
            let after_cleanup = Instant::now();
            if rep == 0 {
                continue; // warm-up
            }
            samples[0].push(after_init - start);
            samples[1].push(after_reduce - after_init);
            samples[2].push(after_cleanup - after_reduce);
            final_places = pn.live_place_count();
        }
        for (phase, timings) in Phase::ALL.into_iter().zip(samples.iter_mut()) {
            rows.push(BenchRow {
                size,
                phase,
                median: median(timings),
                final_places,
            });
        }
    }
    rows
}

fn median(samples: &mut [Duration]) -> Duration {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

/// The plain-text table the CLI prints.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>8}  {:<10}  {:>12}  {:>12}\n",
        "size", "phase", "median_ms", "final_places"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:>8}  {:<10}  {:>12.3}  {:>12}\n",
            row.size,
            row.phase.name(),
            row.median.as_secs_f64() * 1e3,
            row.final_places
        ));
    }
    out
}

/// CSV export: `size,phase,median_ms,final_places`.
pub fn format_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("size,phase,median_ms,final_places\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.3},{}\n",
            row.size,
            row.phase.name(),
            row.median.as_secs_f64() * 1e3,
            row.final_places
        ));
    }
    out
}
