//! Deciding `g ∈ T^k_q` with a checkable answer either way.

use crate::decomp::{td_to_ct, validate_ct, ConstructionTree, TreeDecomposition};
use crate::error::{check_cap, Error, Result};
use crate::game::{solve, Outcome, RobberCertificate, Variant};
use crate::graph::LabelledGraph;
use crate::pretree::cop_win_to_td;

/// Largest graph [`membership`] accepts.
pub const SEARCH_CAP: usize = 24;

pub enum Membership {
    /// A `k`-construction tree of elimination depth at most `q`, and the
    /// tree-decomposition it was built from.
    In {
        ct: ConstructionTree,
        td: TreeDecomposition,
    },
    /// Robber escapes for `q` rounds against `k` cops.
    Out(RobberCertificate),
}

impl Membership {
    pub fn is_in(&self) -> bool {
        matches!(self, Membership::In { .. })
    }
}

pub fn membership(g: &LabelledGraph, k: usize, q: usize) -> Result<Membership> {
    check_cap(g.n(), SEARCH_CAP)?;
    if k == 0 || q == 0 {
        return Err(Error::Precondition("k and q must be positive".into()));
    }
    let g = g.without_labels();
    match solve(&g, k, q, Variant::Cr)? {
        Outcome::RobberWins(cert) => Ok(Membership::Out(cert)),
        Outcome::CopWins(_) => {
            let td = cop_win_to_td(&g, k, q)?;
            let ct = td_to_ct(&g, &td, k, q)?;
            validate_ct(&ct, Some(&g)).map_err(|v| Error::Invalid(v.to_string()))?;
            if ct.label_bound() > k || ct.elimination_depth() > q {
                return Err(Error::Invalid("witness exceeds the bounds".into()));
            }
            Ok(Membership::In { ct, td })
        }
    }
}
