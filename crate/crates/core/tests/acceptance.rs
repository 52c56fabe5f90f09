//! One line per acceptance criterion. Exits non-zero if any check fails,
//! except the checks listed in `UNATTAINABLE`, which are reported as FAIL but
//! do not fail the run.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use deepwide::cfi::{cfi, cfi_pair};
use deepwide::decomp::oracle::{td_exists, treedepth};
use deepwide::decomp::{
    ct_to_td, pfc_to_td, td_to_ct, td_to_pfc, validate_ct, validate_pfc, validate_td,
    TreeDecomposition,
};
use deepwide::enumerate::{enumerate_family, graphs, graphs_up_to, FamilyKind};
use deepwide::equiv::{bijective_pebble_game, hom_indistinguishable, separation_experiment};
use deepwide::game::{
    grid_cop_strategy, grid_lower_bound, solve, solve_on, verify_strategy, Board, Outcome, Variant,
};
use deepwide::hom::{hom_count, hom_count_brute};
use deepwide::iso::{isomorphic, isomorphic_with_cap};
use deepwide::logic::{evaluate, formula_from_ct, free_vars, QgBuilder};
use deepwide::membership::{membership, Membership};
use deepwide::pretree::example::{contracted_grid, example_strategy};
use deepwide::pretree::{
    cop_win_to_td, drop_empty_bags, exact_ptd_to_td, exactify, strategy_tree, EdgeIndex,
};
use deepwide::quantum::{interpolate, rat, QuantumGraph, Rational};
use deepwide::LabelledGraph;

/// Checks that cannot hold under the game's definition; see the README.
const UNATTAINABLE: &[&str] = &["12: Spoiler wins (K3+K3, C6) with 3 pebbles in 2 rounds"];

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn c1() -> Check {
    let mut checked = 0;
    for l in 2..=11usize {
        let threshold = l / 2; // ⌈(ℓ-1)/2⌉
        for q in 1..=threshold + 2 {
            let robber = !solve(&LabelledGraph::path(l), 2, q, Variant::Cr)
                .map_err(e)?
                .cop_wins();
            ensure(robber == (q <= threshold), || {
                format!("P_{l}, q = {q}: robber wins = {robber}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (l, q) pairs, Robber wins exactly for q <= ceil((l-1)/2)"
    ))
}

fn c2() -> Check {
    let mut parts = Vec::new();
    for (h, l) in [(2usize, 7usize), (2, 9), (3, 8)] {
        let bound = h * (l - h + 2) / 4;
        ensure(grid_lower_bound(h, l) == bound, || {
            "grid_lower_bound disagrees with the formula".into()
        })?;
        let g = LabelledGraph::grid(h, l);
        for q in 1..=bound {
            let cop = solve(&g, h + 1, q, Variant::Cr).map_err(e)?.cop_wins();
            ensure(!cop, || {
                format!("grid {h}x{l}: Cop wins with {} cops in {q} rounds", h + 1)
            })?;
        }
        parts.push(format!("{h}x{l}: q <= {bound}"));
    }
    Ok(format!(
        "Robber wins against h+1 cops for {}",
        parts.join(", ")
    ))
}

fn c3() -> Check {
    let (h, l) = (4, 9);
    let rounds = l * h / 4 + h + 1;
    ensure(rounds == 14, || format!("round budget {rounds}"))?;
    let sigma = grid_cop_strategy(h, l).map_err(e)?;
    verify_strategy(
        &LabelledGraph::grid(h, l),
        &sigma,
        h + 1,
        rounds,
        Variant::Cr,
        Board::Plain,
    )
    .map_err(e)?;
    Ok(format!(
        "explicit strategy for the 4x9 grid wins within 14 rounds with 5 cops ({} positions)",
        sigma.len()
    ))
}

/// `(g, k, q)` with Cop winning, collected by criterion 4.
type Instances = Vec<(LabelledGraph, usize, usize)>;

fn c4(wins: &mut Instances) -> Check {
    let all = graphs_up_to(7).map_err(e)?;
    let seven = graphs(7).map_err(e)?.len();
    ensure(seven == 1044, || format!("{seven} graphs on 7 vertices"))?;
    let mut games = 0;
    for g in &all {
        for k in 1..=3 {
            for q in 1..=5 {
                let a = solve(g, k, q, Variant::Cr).map_err(e)?.cop_wins();
                let b = solve(g, k, q, Variant::MonCr).map_err(e)?.cop_wins();
                ensure(a == b, || format!("{g:?} k={k} q={q}: CR {a}, monCR {b}"))?;
                if a {
                    wins.push((g.clone(), k, q));
                }
                games += 1;
            }
        }
    }
    Ok(format!(
        "{} graphs on 1..=7 vertices ({seven} on exactly 7), {games} games, winners coincide ({} Cop wins)",
        all.len(),
        wins.len()
    ))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/example_exact_ptd.json")
}

fn c5(wins: &Instances) -> Check {
    for (g, k, q) in wins {
        let gl = g.with_loops().map_err(e)?;
        let Outcome::CopWins(sigma) =
            solve_on(&gl, *k, *q, Variant::ECr, Board::Looped).map_err(e)?
        else {
            return Err(format!(
                "{g:?}: edge game on G° disagrees with CR at k={k} q={q}"
            ));
        };
        let st = strategy_tree(&gl, &sigma).map_err(e)?;
        let ex = exactify(&gl, &st.ptd).map_err(e)?;
        let ix = EdgeIndex::new(&gl).map_err(e)?;
        ensure(ex.is_exact(&ix), || format!("{g:?}: not exact"))?;
        ensure(
            ex.width() <= st.ptd.width() && ex.depth() <= st.ptd.depth(),
            || {
                format!(
                    "{g:?}: exactify grew ({}, {}) to ({}, {})",
                    st.ptd.width(),
                    st.ptd.depth(),
                    ex.width(),
                    ex.depth()
                )
            },
        )?;
        let td = drop_empty_bags(&exact_ptd_to_td(&gl, &ex).map_err(e)?);
        validate_td(g, &td).map_err(|v| format!("{g:?}: {v}"))?;
        ensure(td.width() < *k as isize && td.depth() <= *q, || {
            format!("{g:?} k={k} q={q}: td out of bounds")
        })?;
        let td = cop_win_to_td(g, *k, *q).map_err(e)?;
        validate_td(g, &td).map_err(|v| format!("{g:?}: {v}"))?;
        ensure(td.width() < *k as isize && td.depth() <= *q, || {
            format!("{g:?} k={k} q={q}: cop_win_to_td out of bounds")
        })?;
    }
    let gl = contracted_grid().with_loops().map_err(e)?;
    let ix = EdgeIndex::new(&gl).map_err(e)?;
    let st = strategy_tree(&gl, &example_strategy()).map_err(e)?;
    let ex = exactify(&gl, &st.ptd).map_err(e)?;
    ensure((st.ptd.width(), st.ptd.depth()) == (4, 9), || {
        "example input is not width 4, depth 9".into()
    })?;
    ensure(
        ex.is_exact(&ix) && ex.width() <= 4 && ex.depth() <= 9,
        || "example output out of bounds".into(),
    )?;
    let json = serde_json::to_string_pretty(&ex.to_json(&ix)).map_err(e)? + "\n";
    let path = golden_path();
    let golden = match std::fs::read_to_string(&path) {
        Ok(s) => {
            ensure(s == json, || {
                "example output differs from the golden file".into()
            })?;
            "matches golden file"
        }
        Err(_) => {
            std::fs::create_dir_all(path.parent().unwrap()).map_err(e)?;
            std::fs::write(&path, &json).map_err(e)?;
            "golden file written"
        }
    };
    Ok(format!(
        "{} Cop wins monotonised into valid decompositions; example: width 4, depth 9 -> width {}, depth {} ({golden})",
        wins.len(),
        ex.width(),
        ex.depth()
    ))
}

/// td -> ct -> td and td -> pfc -> td, validating and keeping the bounds.
fn round_trip(g: &LabelledGraph, td: &TreeDecomposition, k: usize, q: usize) -> Result<(), String> {
    let within = |t: &TreeDecomposition| t.width() < k as isize && t.depth() <= q;
    validate_td(g, td).map_err(e)?;
    ensure(within(td), || "input out of bounds".into())?;
    let ct = td_to_ct(g, td, k, q).map_err(e)?;
    validate_ct(&ct, Some(g)).map_err(e)?;
    ensure(ct.label_bound() <= k && ct.elimination_depth() <= q, || {
        "construction tree out of bounds".into()
    })?;
    let back = ct_to_td(&ct).map_err(e)?;
    validate_td(g, &back).map_err(e)?;
    ensure(within(&back), || "ct -> td out of bounds".into())?;
    let pfc = td_to_pfc(g, td).map_err(e)?;
    validate_pfc(g, &pfc).map_err(e)?;
    ensure(pfc.pebbles_used() <= k && pfc.depth() <= q, || {
        "forest cover out of bounds".into()
    })?;
    let back = pfc_to_td(g, &pfc).map_err(e)?;
    validate_td(g, &back).map_err(e)?;
    ensure(within(&back), || "pfc -> td out of bounds".into())?;
    let ct2 = td_to_ct(g, &back, k, q).map_err(e)?;
    validate_ct(&ct2, Some(g)).map_err(e)
}

fn c6(wins: &Instances) -> Check {
    // the grid figures: width 3 (four labels) and depth 6
    for l in [5, 7] {
        let g = LabelledGraph::grid(2, l);
        let Membership::In { td, .. } = membership(&g, 4, 6).map_err(e)? else {
            return Err(format!("grid 2x{l} not in T^4_6"));
        };
        round_trip(&g, &td, 4, 6).map_err(|m| format!("grid 2x{l}: {m}"))?;
    }
    ensure(
        treedepth(&LabelledGraph::grid(2, 7)).map_err(e)? <= 6,
        || "td(grid 2x7) > 6".into(),
    )?;
    for (g, k, q) in wins {
        let Membership::In { td, .. } = membership(g, *k, *q).map_err(e)? else {
            return Err(format!(
                "{g:?} k={k} q={q}: membership disagrees with the game"
            ));
        };
        round_trip(g, &td, *k, *q).map_err(|m| format!("{g:?} k={k} q={q}: {m}"))?;
    }
    Ok(format!(
        "grid 2x5, grid 2x7 (k = 4, q = 6) and {} instances round-trip within bounds",
        wins.len()
    ))
}

fn c7() -> Check {
    let mut n = 0;
    for g in graphs_up_to(6).map_err(e)? {
        for k in 1..=3 {
            for q in 1..=4 {
                let game = membership(&g, k, q).map_err(e)?.is_in();
                let brute = td_exists(&g, k, q).map_err(e)?;
                if let Some(td) = &brute {
                    validate_td(&g, td).map_err(e)?;
                }
                ensure(game == brute.is_some(), || {
                    format!("{g:?} k={k} q={q}: game {game}, brute force {}", !game)
                })?;
                n += 1;
            }
        }
    }
    Ok(format!(
        "{n} (g, k, q) triples agree with the brute-force search"
    ))
}

fn c8() -> Check {
    let mut pairs = 0;
    for g in graphs_up_to(5).map_err(e)? {
        if !g.is_connected() {
            continue;
        }
        let plain = cfi(&g, 0).map_err(e)?.graph;
        let h0 = hom_count(&g, &plain).map_err(e)?;
        for u in 1u64..1 << g.n() {
            let twisted = cfi(&g, u).map_err(e)?.graph;
            // K5 gives 40-vertex CFI graphs, above the default cap
            let iso = isomorphic_with_cap(&plain, &twisted, 64)
                .map_err(e)?
                .is_some();
            let even = u.count_ones() % 2 == 0;
            ensure(iso == even, || {
                format!("{g:?} U = {u:b}: isomorphic = {iso}")
            })?;
            if !even {
                let h1 = hom_count(&g, &twisted).map_err(e)?;
                ensure(h0 != h1, || format!("{g:?} U = {u:b}: hom counts agree"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} twist sets over connected bases on at most 5 vertices"
    ))
}

fn c9() -> Check {
    let r = separation_experiment(2, 3).map_err(e)?;
    let w = r.witness.ok_or("no witness")?;
    let p7 = LabelledGraph::path(7);
    ensure(isomorphic(&w.graph, &p7).map_err(e)?.is_some(), || {
        "witness is not P_7".into()
    })?;
    ensure(w.robber_wins, || "Cop wins on P_7".into())?;
    ensure(w.in_tw_td(2, 3), || {
        format!("tw {}, td {}", w.treewidth, w.treedepth)
    })?;
    ensure(w.cfi_order == 12, || format!("CFI order {}", w.cfi_order))?;
    ensure(w.duplicator_wins == Some(true), || {
        format!("pebble game: {:?}", w.duplicator_wins)
    })?;
    let (g0, g1) = cfi_pair(&p7).map_err(e)?;
    let (b0, b1) = (
        hom_count_brute(&p7, &g0).map_err(e)?,
        hom_count_brute(&p7, &g1).map_err(e)?,
    );
    ensure((w.hom_g0, w.hom_g1) == (b0, b1), || {
        "hom counts disagree with brute force".into()
    })?;
    ensure((b0, b1) == (378, 376), || format!("hom counts {b0}, {b1}"))?;
    ensure(b0 != b1, || "hom counts agree".into())?;
    Ok(format!(
        "P_7: Robber wins, tw 1, td 3, Duplicator wins on 12+12 vertices, hom {b0} vs {b1}"
    ))
}

fn c10() -> Check {
    // (a)
    let targets = graphs_up_to(5).map_err(e)?;
    let mut trees = 0;
    let mut evals = 0;
    for g in graphs_up_to(4).map_err(e)? {
        for k in 1..=3 {
            for q in 1..=3 {
                let Membership::In { ct, .. } = membership(&g, k, q).map_err(e)? else {
                    continue;
                };
                trees += 1;
                let homs: Vec<u128> = targets
                    .iter()
                    .map(|t| hom_count(&g, t))
                    .collect::<Result<_, _>>()
                    .map_err(e)?;
                for m in 0..=10u128 {
                    let phi = formula_from_ct(&ct, m).map_err(e)?;
                    for (t, &h) in targets.iter().zip(&homs) {
                        let holds = evaluate(t, &phi).map_err(e)?;
                        ensure(holds == (h == m), || {
                            format!("{g:?} k={k} q={q} m={m}: wrong on {t:?}")
                        })?;
                        evals += 1;
                    }
                }
            }
        }
    }
    let a = format!("(a) {trees} trees, {evals} evaluations");
    // (b)
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let per_n: Vec<Vec<LabelledGraph>> =
        (1..=5).map(graphs).collect::<Result<_, _>>().map_err(e)?;
    let mut builders: Vec<QgBuilder> = (1..=5)
        .map(QgBuilder::new)
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let mut checks = 0;
    for _ in 0..200 {
        let f = common::random_formula(&mut rng, 2, 2, 6);
        let free: Vec<usize> = free_vars(&f).into_iter().collect();
        for (b, gs) in builders.iter_mut().zip(&per_n) {
            let qg = b.model(&f).map_err(e)?;
            for g in gs {
                for h in common::assignments(g, &free) {
                    let want = rat(evaluate(&h, &f).map_err(e)? as i64);
                    ensure(qg.hom(&h).map_err(e)? == want, || format!("{f} on {h:?}"))?;
                    checks += 1;
                }
            }
        }
    }
    let b = format!("(b) 200 formulas, {checks} indicator checks");
    // (c)
    let fam = enumerate_family(FamilyKind::Tkq, 2, 2, 6).map_err(e)?;
    let pool = graphs_up_to(6).map_err(e)?;
    let mut separated = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let same: Vec<&LabelledGraph> = pool.iter().filter(|g| g.n() == n).collect();
        let (x, y) = (
            *same.choose(&mut rng).unwrap(),
            *same.choose(&mut rng).unwrap(),
        );
        let dup = bijective_pebble_game(x, y, 2, 2, &[])
            .map_err(e)?
            .duplicator_wins();
        let dist = hom_indistinguishable(x, y, &fam)
            .map_err(e)?
            .distinguished();
        ensure(!(dup && dist), || {
            format!("{x:?} vs {y:?}: Duplicator wins but hom counts differ")
        })?;
        separated += dist as usize;
    }
    Ok(format!(
        "{a}; {b}; (c) 50 pairs, {separated} separated, no contradiction"
    ))
}

fn random_qg(rng: &mut ChaCha8Rng, small: &[LabelledGraph]) -> QuantumGraph {
    let terms = rng.gen_range(1..=3);
    let mut out = Vec::new();
    for _ in 0..terms {
        let num = rng.gen_range(-3i64..=3);
        let den = rng.gen_range(1i64..=2);
        let c = Rational::new(num.into(), den.into());
        out.push((c, small.choose(rng).unwrap().clone()));
    }
    QuantumGraph::from_terms(out)
}

fn c11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let small = graphs_up_to(3).map_err(e)?;
    let targets = graphs_up_to(4).map_err(e)?;
    let mut checks = 0;
    for _ in 0..100 {
        let q = random_qg(&mut rng, &small);
        let mut pts: Vec<i64> = (0..=6).collect();
        pts.shuffle(&mut rng);
        let split = rng.gen_range(0..=7);
        let cut = rng.gen_range(split..=7);
        let (plus, minus): (Vec<Rational>, Vec<Rational>) = (
            pts[..split].iter().map(|&x| rat(x)).collect(),
            pts[split..cut].iter().map(|&x| rat(x)).collect(),
        );
        let p = interpolate(&q, &plus, &minus).map_err(e)?;
        for t in &targets {
            let v = q.hom(t).map_err(e)?;
            let want = if plus.contains(&v) {
                rat(1)
            } else if minus.contains(&v) {
                rat(0)
            } else {
                continue;
            };
            ensure(p.hom(t).map_err(e)? == want, || {
                format!("value {v} on {t:?}")
            })?;
            checks += 1;
        }
    }
    Ok(format!(
        "100 quantum graphs, {checks} exact indicator checks"
    ))
}

/// Returns the attainable part and, separately, the 2-round check.
fn c12() -> (Check, Option<String>) {
    let run = || -> Result<(String, bool), String> {
        let two_k3 = LabelledGraph::cycle(3)
            .disjoint_union(&LabelledGraph::cycle(3))
            .map_err(e)?;
        let c6 = LabelledGraph::cycle(6);
        let (g0, g1) = cfi_pair(&LabelledGraph::cycle(3)).map_err(e)?;
        ensure(isomorphic(&g0, &two_k3).map_err(e)?.is_some(), || {
            "G0 is not K3+K3".into()
        })?;
        ensure(isomorphic(&g1, &c6).map_err(e)?.is_some(), || {
            "G1 is not C6".into()
        })?;
        for q in 0..=5 {
            let d = bijective_pebble_game(&two_k3, &c6, 2, q, &[])
                .map_err(e)?
                .duplicator_wins();
            ensure(d, || format!("Spoiler wins with 2 pebbles in {q} rounds"))?;
        }
        let c3 = LabelledGraph::cycle(3);
        let (a, b) = (
            hom_count(&c3, &two_k3).map_err(e)?,
            hom_count(&c3, &c6).map_err(e)?,
        );
        ensure(
            (a, b) == (12, 0)
                && (a, b)
                    == (
                        hom_count_brute(&c3, &two_k3).map_err(e)?,
                        hom_count_brute(&c3, &c6).map_err(e)?,
                    ),
            || format!("hom(C3, .) = {a} vs {b}"),
        )?;
        let three = !bijective_pebble_game(&two_k3, &c6, 3, 3, &[])
            .map_err(e)?
            .duplicator_wins();
        ensure(three, || {
            "Duplicator wins with 3 pebbles in 3 rounds".into()
        })?;
        let two_rounds = !bijective_pebble_game(&two_k3, &c6, 3, 2, &[])
            .map_err(e)?
            .duplicator_wins();
        Ok((
            "cfi_pair(C3) = (K3+K3, C6); Duplicator wins with 2 pebbles for q <= 5; hom(C3, .) = 12 vs 0; Spoiler wins with 3 pebbles in 3 rounds".into(),
            two_rounds,
        ))
    };
    match run() {
        Ok((msg, two_rounds)) => {
            let extra = (!two_rounds).then(|| {
                "Duplicator wins with 3 pebbles in 2 rounds: two rounds place two pebbles, and K3+K3, C6 agree on all two-pebble positions".to_string()
            });
            (Ok(msg), extra)
        }
        Err(m) => (Err(m), None),
    }
}

fn main() {
    let mut failed = 0;
    let mut report = |name: &str, t: Instant, r: Check| {
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {name}: PASS  {msg}  [{secs:.1}s]"),
            Err(msg) => {
                println!("criterion {name}: FAIL  {msg}  [{secs:.1}s]");
                failed += 1;
            }
        }
    };
    let t = Instant::now();
    report("1", t, c1());
    let t = Instant::now();
    report("2", t, c2());
    let t = Instant::now();
    report("3", t, c3());
    let mut wins = Vec::new();
    let t = Instant::now();
    report("4", t, c4(&mut wins));
    let t = Instant::now();
    report("5", t, c5(&wins));
    let t = Instant::now();
    report("6", t, c6(&wins));
    let t = Instant::now();
    report("7", t, c7());
    let t = Instant::now();
    report("8", t, c8());
    let t = Instant::now();
    report("9", t, c9());
    let t = Instant::now();
    report("10", t, c10());
    let t = Instant::now();
    report("11", t, c11());
    let t = Instant::now();
    let (r, unattainable) = c12();
    report("12", t, r);
    if let Some(msg) = unattainable {
        println!(
            "criterion 12: FAIL  {}: {msg} (known unattainable, not counted)",
            UNATTAINABLE[0]
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
