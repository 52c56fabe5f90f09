//! A graph in `TW_{k-1} ∩ TD_q` but not in `T^k_q`, and its CFI pair:
//! equivalent for `C^k_q` yet separated by homomorphisms from the graph.

use super::pebble::{PebbleGame, PEBBLE_CAP};
use crate::cfi::{cfi_pair, cfi_size};
use crate::decomp::oracle::{treedepth, treewidth};
use crate::enumerate::{graphs_up_to, in_tkq};
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::hom::hom_count;

/// Largest order searched for a witness when no family is known.
pub const WITNESS_SEARCH_MAX_N: usize = 7;

#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub k: usize,
    pub q: usize,
    /// `None` when `T^k_q = TW_{k-1} ∩ TD_q`.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub graph: LabelledGraph,
    /// Robber wins `CR^k_q` on the witness.
    pub robber_wins: bool,
    pub treewidth: isize,
    pub treedepth: usize,
    pub cfi_order: usize,
    /// Duplicator wins the `q`-round bijective `k`-pebble game on the CFI
    /// pair; `None` when the pair exceeds the pebble-game cap.
    pub duplicator_wins: Option<bool>,
    pub hom_g0: u128,
    pub hom_g1: u128,
}

impl Witness {
    pub fn in_tw_td(&self, k: usize, q: usize) -> bool {
        self.treewidth < k as isize && self.treedepth <= q
    }
}

/// The witness used for `(k, q)`: `P_{2^q - 1}` for two cops, otherwise the
/// first graph found by order.
pub fn separation_witness(k: usize, q: usize) -> Result<Option<LabelledGraph>> {
    if k == 0 || q == 0 {
        return Err(Error::Precondition("k and q must be positive".into()));
    }
    // one cop only catches isolated vertices; k >= q cops never need to lift
    if k == 1 || k >= q {
        return Ok(None);
    }
    if k == 2 {
        if q >= 7 {
            return Err(Error::Precondition(format!(
                "witness P_{} is too large",
                (1usize << q) - 1
            )));
        }
        return Ok(Some(LabelledGraph::path((1 << q) - 1)));
    }
    for g in graphs_up_to(WITNESS_SEARCH_MAX_N)? {
        if treewidth(&g)? < k as isize && treedepth(&g)? <= q && !in_tkq(&g, k, q)? {
            return Ok(Some(g));
        }
    }
    Err(Error::Precondition(format!(
        "no witness on at most {WITNESS_SEARCH_MAX_N} vertices"
    )))
}

pub fn separation_experiment(k: usize, q: usize) -> Result<SeparationReport> {
    let Some(f) = separation_witness(k, q)? else {
        return Ok(SeparationReport {
            k,
            q,
            witness: None,
        });
    };
    let robber_wins = !in_tkq(&f, k, q)?;
    let (g0, g1) = cfi_pair(&f)?;
    let order = cfi_size(&f);
    let duplicator_wins = if order <= PEBBLE_CAP {
        Some(
            PebbleGame::new(&g0, &g1, k)?
                .play(q, &[])?
                .duplicator_wins(),
        )
    } else {
        None
    };
    let witness = Witness {
        robber_wins,
        treewidth: treewidth(&f)?,
        treedepth: treedepth(&f)?,
        cfi_order: order,
        duplicator_wins,
        hom_g0: hom_count(&f, &g0)?,
        hom_g1: hom_count(&f, &g1)?,
        graph: f,
    };
    Ok(SeparationReport {
        k,
        q,
        witness: Some(witness),
    })
}
