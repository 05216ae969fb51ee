//! (Δ+1)-edge-coloring via multi-step augmenting chains.
//!
//! The crate builds proper edge-colorings with the palette matching the
//! Vizing bound, one more color than the maximum degree. Partial colorings
//! are extended along short augmenting chains assembled from fans and
//! truncated alternating paths, and a round-based simulator applies
//! vertex-disjoint batches of such chains in phases, the way a distributed
//! implementation would.
//!
//! Layout:
//! - [`graph`], [`coloring`]: graph representation, proper partial
//!   colorings, palette queries, two-colored components.
//! - [`chain`], [`fan`]: the shift calculus on chains, alternating paths,
//!   fans, and the classical one-shot augmenting construction.
//! - [`reach`], [`msva`]: backward-reach bookkeeping and the randomized
//!   multi-step construction with bounded chain length.
//! - [`conflict`], [`sim`]: conflict graphs over candidate chains, maximal
//!   independent sets, and the phase simulator with its round ledger.
//! - [`gen`]: seeded graph and coloring generators for tests and benches.

pub mod chain;
pub mod coloring;
pub mod conflict;
pub mod fan;
pub mod gen;
pub mod graph;
pub mod msva;
pub mod reach;
pub mod sim;

pub use chain::{
    alternating_path, augment_with_happy_chain, is_chain_happy, is_chain_shiftable, shift_chain,
    shift_chain_in_place, shift_pair, shift_pair_in_place, Chain, PathChain,
};
pub use coloring::{Color, PartialColoring, TwoColorComponent};
pub use conflict::{independent_set, ConflictGraph, MisAlgorithm};
pub use fan::{first_fan, second_fan, single_step_vizing, Fan, FanOutcome};
pub use graph::{EdgeId, Graph, Vertex};
pub use msva::{
    backtrack_witness_check, find_augmenting_chain, run_msva, run_msva_in, run_msva_recorded,
    run_msva_traced, MsvaOutcome, MsvaParams, MsvaTrace,
};
pub use reach::{r_in, r_in_chain, r_in_set, r_out};
pub use sim::{
    color_sequential, grow_candidates, parse_coloring_text, simulate_coloring, verify_output,
    write_coloring_text, PhaseStats, RoundLedger, SeqConfig, SimConfig, SimOutput, Summary,
    VerifyReport,
};
