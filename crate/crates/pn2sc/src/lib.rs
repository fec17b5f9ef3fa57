//! Transformation of Petri nets into hierarchical statecharts.
//!
//! The pipeline has three phases, all rewriting a pair of models in place:
//!
//! 1. [`initialise`] copies the net structure into a flat statechart
//!    (one `Basic` inside one `OR` per place, one `HyperEdge` per
//!    transition, `next`/`rnext` links from the arcs).
//! 2. [`reduce`] runs the prioritized rewrite rules `Post1` (OR-reduction)
//!    and `Post2`/`Post3` (AND-reductions) to a fixpoint, shrinking the net
//!    while growing the state hierarchy.
//! 3. [`cleanup`] deletes emptied OR states, wraps the remaining root in a
//!    `_TOPSTATE_` AND state and creates the `Statechart` instance.
//!
//! [`inverse`] reverses the initialisation for flat statecharts, [`io`]
//! provides the `.pn`/`.sc` text formats, and [`bench`] generates fully
//! reducible series-parallel nets and measures per-phase timings.

pub mod bench;
pub mod cleanup;
pub mod initialise;
pub mod inverse;
pub mod io;
pub mod model;
pub mod reduce;
mod rng;

pub use cleanup::{cleanup, CleanupReport};
pub use initialise::initialise;
pub use inverse::invert_initialisation;
pub use model::{ModelReport, PetriNet, ScModel};
pub use reduce::{run_to_fixpoint, ReduceOpts, RunStats};
