mod common;

use common::*;
use latin_plex::constructions::{near_from_quasi, quasi_from_near};
use latin_plex::plexes::*;
use latin_plex::{Exec, Isotopy, LatinSquare, PlexKind, StepTypeSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn generators_agree_on_cyclic() {
    for n in 1..=12 {
        let c = LatinSquare::cyclic(n);
        assert_eq!(c, LatinSquare::qstep(1, n), "qstep(1,{n})");
        assert_eq!(c, LatinSquare::qstep(n, 1), "qstep({n},1)");
    }
}

#[test]
fn oa_round_trip_on_generated_squares() {
    for (name, l) in corpus(12)
        .into_iter()
        .filter(|(n, _)| !n.starts_with("random"))
    {
        assert_eq!(LatinSquare::from_oa(&l.to_oa()).unwrap(), l, "{name}");
    }
}

#[test]
fn two_step_squares_have_the_block_structure() {
    for k in 2..=4u32 {
        let l = LatinSquare::two_step_pow2(k).unwrap();
        let n = 1usize << k;
        assert!(
            l.is_qstep_type(StepTypeSpec::new(2, n / 2)).unwrap().holds,
            "k={k}"
        );
    }
    // the order-4 base is 2-step in both readings
    let base = LatinSquare::two_step_pow2(2).unwrap();
    assert!(base.is_qstep_type(StepTypeSpec::new(2, 2)).unwrap().holds);
}

#[test]
fn isotopies_preserve_latinness() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 3..=8 {
        let l = LatinSquare::cyclic(n);
        for _ in 0..100 {
            let iso = Isotopy::random(n, &mut rng);
            let m = l.apply_isotopy(&iso).unwrap();
            assert_eq!(LatinSquare::validate(&m.rows()).unwrap(), m);
        }
    }
}

#[test]
fn transversal_counts_match_brute_force() {
    for (name, l) in corpus(5) {
        let census = enumerate_transversals(&l, 0).unwrap();
        assert_eq!(census.count, brute_transversals(&l), "{name}");
    }
}

#[test]
fn known_transversal_counts() {
    assert_eq!(brute_transversals(&LatinSquare::cyclic(3)), 3);
    assert_eq!(
        brute_transversals(&LatinSquare::two_step_pow2(2).unwrap()),
        8
    );
    assert_eq!(brute_transversals(&LatinSquare::cyclic(5)), 15);
    assert_eq!(
        enumerate_transversals(&LatinSquare::cyclic(7), 0)
            .unwrap()
            .count,
        133
    );
}

#[test]
fn even_orders_have_even_transversal_counts() {
    for (name, l) in corpus(6)
        .into_iter()
        .filter(|(_, l)| l.order() % 2 == 0 && l.order() >= 4)
    {
        let count = enumerate_transversals(&l, 0).unwrap().count;
        assert_eq!(count % 2, 0, "{name} has {count}");
    }
}

#[test]
fn census_count_matches_full_enumeration() {
    let l = LatinSquare::cyclic(5);
    let full = enumerate_transversals(&l, usize::MAX).unwrap();
    assert_eq!(full.count as usize, full.witnesses.len());
    assert!(!full.truncated);
    let capped = enumerate_transversals(&l, 4).unwrap();
    assert_eq!(capped.count, full.count);
    assert!(capped.truncated);
    assert_eq!(capped.witnesses[..], full.witnesses[..4]);
}

#[test]
fn quasi_near_duality() {
    for (name, l) in corpus(5).into_iter().filter(|(_, l)| l.order() >= 3) {
        let quasi = enumerate_quasi_transversals(&l, 50).unwrap().witnesses;
        assert!(!quasi.is_empty(), "{name}");
        for q in &quasi {
            assert!(check_quasi_transversal(&l, q.cells()).is_ok());
            if let Ok(near) = near_from_quasi(&l, q) {
                assert!(check_near_transversal(&l, near.cells()).is_ok(), "{name}");
            }
        }
        for near in enumerate_near_transversals(&l, 50).unwrap().witnesses {
            match quasi_from_near(&l, &near) {
                Ok(q) => {
                    assert!(check_quasi_transversal(&l, q.cells()).is_ok(), "{name}");
                    assert!(near.cells().iter().all(|&c| q.contains(c)));
                }
                // completable near-transversals extend to a transversal instead
                Err(_) => assert!(complete_partial(&l, near.cells()).is_some(), "{name}"),
            }
        }
    }
}

#[test]
fn complement_is_an_involution() {
    for (name, l) in corpus(6).into_iter().filter(|(_, l)| l.order() >= 2) {
        for k in 1..=2 {
            if let Some(p) = find_kplex(&l, k).unwrap() {
                let c = complement_plex(&l, &p).unwrap();
                assert_eq!(c.kind(), PlexKind::KPlex(l.order() - k));
                assert!(check_kplex(&l, c.cells(), l.order() - k).is_ok());
                assert_eq!(complement_plex(&l, &c).unwrap(), p, "{name} k={k}");
            }
        }
    }
}

#[test]
fn tau_is_n_exactly_when_a_mate_exists() {
    for (name, l) in corpus(6) {
        let t = max_disjoint_transversals(&l).unwrap();
        assert!(t.tau <= l.order());
        let mate = find_orthogonal_mate(&l).unwrap();
        assert_eq!(t.tau == l.order(), mate.is_some(), "{name}");
        if let Some(m) = mate {
            assert!(are_orthogonal(&l, &m));
        }
    }
}

#[test]
fn quasi_packing_respects_the_counting_bound() {
    for (name, l) in corpus(5).into_iter().filter(|(_, l)| l.order() >= 2) {
        let n = l.order();
        let (count, family) = max_disjoint_quasi_transversals(&l).unwrap();
        assert!(count <= n * n / (n + 1), "{name}: {count}");
        assert_eq!(family.len(), count);
        for (i, a) in family.iter().enumerate() {
            assert!(check_quasi_transversal(&l, a.cells()).is_ok());
            assert!(family[i + 1..].iter().all(|b| a.is_disjoint(b)));
        }
    }
}

#[test]
fn sequential_and_parallel_searches_agree() {
    for (name, l) in corpus(7).into_iter().filter(|(_, l)| l.order() >= 3) {
        let a = enumerate_transversals_with(&l, 20, Exec::Sequential).unwrap();
        let b = enumerate_transversals_with(&l, 20, Exec::Parallel).unwrap();
        assert_eq!(a, b, "{name}");
        assert_eq!(
            find_kplex_with(&l, 2, Exec::Sequential).unwrap(),
            find_kplex_with(&l, 2, Exec::Parallel).unwrap(),
            "{name}"
        );
        assert_eq!(
            find_quasi_transversal_with(&l, Exec::Sequential).unwrap(),
            find_quasi_transversal_with(&l, Exec::Parallel).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn conjectures_hold_on_small_orders() {
    let report = conjecture_sweep(&SweepConfig {
        min_order: 3,
        max_order: 7,
        ..SweepConfig::default()
    })
    .unwrap();
    assert!(report.counterexample.is_none());
    assert!(report.rows.iter().all(|r| !r.is_counterexample()));
}

#[test]
fn order_two_has_every_kind() {
    let l = LatinSquare::cyclic(2);
    assert!(find_near_transversal(&l).unwrap().is_some());
    assert!(find_kplex(&l, 2).unwrap().is_some());
    // three of the four cells: one row, column and symbol doubled
    assert_eq!(enumerate_quasi_transversals(&l, 0).unwrap().count, 4);
}

/// Quasi-transversals counted over all (n+1)-subsets: every row, column and
/// symbol present, exactly one of each used twice.
fn brute_quasi(l: &LatinSquare) -> u64 {
    let n = l.order();
    let cells = all_cells(n);
    let mut count = 0;
    for mask in 0u64..1 << cells.len() {
        if mask.count_ones() as usize != n + 1 {
            continue;
        }
        let set: Vec<_> = (0..cells.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| cells[i])
            .collect();
        let mut t = [vec![0; n], vec![0; n], vec![0; n]];
        for c in &set {
            t[0][c.row] += 1;
            t[1][c.col] += 1;
            t[2][l.get(c.row, c.col)] += 1;
        }
        let shape = |v: &Vec<usize>| {
            let mut s = v.clone();
            s.sort_unstable();
            s
        };
        let mut want = vec![1; n];
        want[n - 1] = 2;
        if t.iter().all(|v| shape(v) == want) {
            count += 1;
        }
    }
    count
}

#[test]
fn quasi_counts_match_subset_oracle() {
    for n in 2..=4 {
        let l = LatinSquare::cyclic(n);
        assert_eq!(
            enumerate_quasi_transversals(&l, 0).unwrap().count,
            brute_quasi(&l),
            "n={n}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn validation_is_idempotent(n in 1usize..=8, seed in any::<u64>()) {
        let l = random_square(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let again = LatinSquare::validate(&l.rows());
        prop_assert!(again.is_ok());
        prop_assert_eq!(again.unwrap(), l);
    }

    #[test]
    fn transversal_count_is_an_isotopy_invariant(n in 3usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_square(n, &mut rng);
        let m = l.random_isotope(&mut rng);
        prop_assert_eq!(
            enumerate_transversals(&l, 0).unwrap().count,
            enumerate_transversals(&m, 0).unwrap().count
        );
    }

    #[test]
    fn found_plexes_validate(n in 2usize..=8, k in 1usize..=3, seed in any::<u64>()) {
        let l = random_square(n, &mut ChaCha8Rng::seed_from_u64(seed));
        if k <= n {
            if let Some(p) = find_kplex(&l, k).unwrap() {
                prop_assert!(check_kplex(&l, p.cells(), k).is_ok());
                let c = complement_plex(&l, &p).unwrap();
                prop_assert!(c.is_disjoint(&p));
                prop_assert_eq!(complement_plex(&l, &c).unwrap(), p);
            }
        }
    }

    #[test]
    fn repeated_searches_are_identical(n in 3usize..=7, seed in any::<u64>()) {
        let l = random_square(n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(find_transversal(&l).unwrap(), find_transversal(&l).unwrap());
        prop_assert_eq!(find_near_transversal(&l).unwrap(), find_near_transversal(&l).unwrap());
        prop_assert_eq!(
            enumerate_transversals_with(&l, 5, Exec::Sequential).unwrap(),
            enumerate_transversals_with(&l, 5, Exec::Parallel).unwrap()
        );
    }
}
