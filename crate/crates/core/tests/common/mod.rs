#![allow(dead_code)]

use deepwide::logic::{Formula, F};
use rand::Rng;

/// A random formula over variables `1..=k` of quantifier rank at most `q`;
/// `size` bounds the number of connectives.
pub fn random_formula<R: Rng>(rng: &mut R, k: usize, q: usize, size: usize) -> F {
    let var = |rng: &mut R| rng.gen_range(1..=k);
    if size == 0 {
        return match rng.gen_range(0..5) {
            0 => Formula::eq(var(rng), var(rng)),
            1 => Formula::top(),
            _ => Formula::edge(var(rng), var(rng)),
        };
    }
    let choice = rng.gen_range(0..if q > 0 { 5 } else { 3 });
    match choice {
        0 => Formula::not(random_formula(rng, k, q, size - 1)),
        1 | 2 => {
            let left = rng.gen_range(0..size);
            let a = random_formula(rng, k, q, left);
            let b = random_formula(rng, k, q, size - 1 - left);
            if choice == 1 {
                Formula::and(vec![a, b])
            } else {
                Formula::or(vec![a, b])
            }
        }
        _ => Formula::exists(
            rng.gen_range(1..=3),
            var(rng),
            random_formula(rng, k, q - 1, size - 1),
        ),
    }
}

/// `g` with the free variables labelled in every possible way.
pub fn assignments(g: &deepwide::LabelledGraph, free: &[usize]) -> Vec<deepwide::LabelledGraph> {
    let mut out = vec![g.clone()];
    for &x in free {
        out = out
            .into_iter()
            .flat_map(|h| (0..g.n()).map(move |v| h.set_label(x, v).unwrap()))
            .collect();
    }
    out
}
