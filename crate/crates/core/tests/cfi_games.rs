use deepwide::cfi::{cfi, cfi_pair, cfi_size};
use deepwide::enumerate::{enumerate_family, graphs_up_to, in_tkq, FamilyKind};
use deepwide::equiv::{bijective_pebble_game, hom_indistinguishable, PebbleGame, PEBBLE_CAP};
use deepwide::hom::hom_count;
use deepwide::iso::isomorphic;
use deepwide::LabelledGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// CFI pairs of bases outside `T^k_q` are not separated by the `q`-round
/// bijective `k`-pebble game.
#[test]
fn cfi_pairs_outside_the_class_are_indistinguishable() {
    let mut played = 0;
    for g in graphs_up_to(5).unwrap() {
        if g.n() < 2 || !g.is_connected() || cfi_size(&g) > PEBBLE_CAP {
            continue;
        }
        let (g0, g1) = cfi_pair(&g).unwrap();
        for k in 1..=3 {
            let mut game = PebbleGame::new(&g0, &g1, k).unwrap();
            for q in 1..=4 {
                if !in_tkq(&g, k, q).unwrap() {
                    assert!(
                        game.play(q, &[]).unwrap().duplicator_wins(),
                        "{g:?} k={k} q={q}"
                    );
                    played += 1;
                }
            }
        }
    }
    assert!(played > 0);
}

#[test]
fn cfi_parity_on_small_bases() {
    for g in graphs_up_to(4).unwrap() {
        if g.n() < 2 || !g.is_connected() {
            continue;
        }
        let plain = cfi(&g, 0).unwrap().graph;
        let h0 = hom_count(&g, &plain).unwrap();
        for u in 1u64..1 << g.n() {
            let twisted = cfi(&g, u).unwrap().graph;
            let odd = u.count_ones() % 2 == 1;
            assert_eq!(
                isomorphic(&plain, &twisted).unwrap().is_none(),
                odd,
                "{g:?} U={u:b}"
            );
            if odd {
                assert_ne!(h0, hom_count(&g, &twisted).unwrap());
            }
        }
    }
}

/// A separating member of `T^k_q` always means Spoiler wins, and a
/// Duplicator win means no member separates.
#[test]
fn hom_counts_agree_with_the_pebble_game() {
    let families: Vec<_> = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 2), (3, 3)]
        .into_iter()
        .map(|(k, q)| ((k, q), enumerate_family(FamilyKind::Tkq, k, q, 6).unwrap()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pool = graphs_up_to(6).unwrap();
    for _ in 0..150 {
        let n = rng.gen_range(2..=6);
        let same: Vec<&LabelledGraph> = pool.iter().filter(|g| g.n() == n).collect();
        let a = same[rng.gen_range(0..same.len())];
        let b = same[rng.gen_range(0..same.len())];
        for ((k, q), fam) in &families {
            let spoiler = !bijective_pebble_game(a, b, *k, *q, &[])
                .unwrap()
                .duplicator_wins();
            let separated = hom_indistinguishable(a, b, fam).unwrap().distinguished();
            if separated {
                assert!(spoiler, "{a:?} {b:?} k={k} q={q}");
            }
        }
    }
}
