//! Deciding and comparing equivalences: the bijective pebble game for
//! `C^k_q`, homomorphism counts over enumerated families, and a bounded
//! test for guarded equivalence.

mod indist;
mod pebble;
mod separation;

pub use indist::{
    gc_equivalent, guarded_rooted_family, hom_indistinguishable, GcRefutation, GcVerdict,
    HomComparison,
};
pub use pebble::{
    bijective_pebble_game, is_partial_isomorphism, PebbleGame, PebbleOutcome, PebblePosition,
    PEBBLE_CAP,
};
pub use separation::{
    separation_experiment, separation_witness, SeparationReport, Witness, WITNESS_SEARCH_MAX_N,
};
