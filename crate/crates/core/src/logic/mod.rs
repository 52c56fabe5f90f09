//! Counting logic: formulas, evaluation on labelled graphs, and the
//! translations between formulas, construction trees and quantum graphs.

mod formula;
mod model;
mod parse;
mod translate;

pub use formula::{evaluate, free_vars, in_fragment, is_guarded, qr, vars, Evaluator, Formula, F};
pub use model::{qg_from_formula, qg_from_formula_expanded, qg_from_guarded_formula, QgBuilder};
pub use parse::parse_formula;
pub use translate::{formula_from_ct, guarded_formula_from_ct, HomFormulas};
