mod common;

use common::*;
use latin_plex::constructions::*;
use latin_plex::lsgraph::{build_graph, verify_domatic_partition, LatinSquareGraph};
use latin_plex::plexes::{
    check_kplex, check_quasi_transversal, check_transversal, complement_plex,
    enumerate_near_transversals, enumerate_quasi_transversals,
};
use latin_plex::{Cell, CellSet, Generator, LatinSquare, PlexKind};
use proptest::prelude::*;

fn round_trip(cert: &WitnessCertificate) -> WitnessCertificate {
    let text = serde_json::to_string_pretty(cert).unwrap();
    let back: WitnessCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, cert);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    back
}

fn all_certificates() -> Vec<WitnessCertificate> {
    let o = BuildOptions::default();
    let mut out = Vec::new();
    for k in 2..=4 {
        out.push(build_two_step_decomposition(k).unwrap());
    }
    for n in [4, 6, 8, 10] {
        out.push(build_3ds_q1(n, &o).unwrap());
        out.push(build_2plex_q1(n, &o).unwrap());
        out.push(build_domatic_partition_cyclic(n).unwrap());
    }
    for (m, q) in [(2, 3), (4, 3), (2, 5)] {
        out.push(build_3ds_qgen(m, q, &o).unwrap());
    }
    for q in [3, 5] {
        out.push(build_2plex_m2(q, &o).unwrap());
    }
    for (m, q) in [(4, 3), (6, 3), (4, 5)] {
        out.push(build_2plex_general(m, q, &o).unwrap());
    }
    for n in [4, 5, 6] {
        out.push(build_transforms(Generator::Cyclic { n }, &o).unwrap());
    }
    out
}

#[test]
fn certificates_survive_a_json_round_trip() {
    for cert in all_certificates() {
        assert!(cert.verdict, "{:?}", cert.claim);
        let back = round_trip(&cert);
        assert_eq!(
            back.revalidate().unwrap(),
            Vec::<String>::new(),
            "{:?}",
            cert.claim
        );
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    for cert in all_certificates() {
        let mut bad = cert.clone();
        bad.verdict = false;
        assert!(!bad.is_accepted());
        // some move of one cell of the first set must break the claim
        let first = cert.witness.sets()[0].clone();
        let n = first.order();
        let rejected = all_cells(n)
            .into_iter()
            .filter(|&c| !first.contains(c))
            .any(|outside| {
                let mut cells = first.cells().to_vec();
                cells[0] = outside;
                let moved = CellSet::new(n, first.kind(), cells).unwrap();
                let mut bad = cert.clone();
                match &mut bad.witness {
                    Witness::Single(s) => *s = moved,
                    Witness::Family(f) => f[0] = moved,
                }
                !bad.is_accepted()
            });
        assert!(rejected, "{:?}", cert.claim);
    }
}

#[test]
fn two_step_decompositions_partition_the_square() {
    for k in 2..=4u32 {
        let l = LatinSquare::two_step_pow2(k).unwrap();
        let n = l.order();
        let parts = decompose_two_step(&l).unwrap();
        assert_eq!(parts.len(), n);
        let mut seen = vec![false; n * n];
        for p in &parts {
            assert!(check_transversal(&l, p.cells()).is_ok());
            for c in p.cells() {
                assert!(!std::mem::replace(&mut seen[c.index(n)], true));
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }
}

#[test]
fn dominating_quasi_transversals_have_size_n_plus_one() {
    let o = BuildOptions::default();
    let mut certs: Vec<_> = [4, 6, 8, 10, 12]
        .iter()
        .map(|&n| build_3ds_q1(n, &o).unwrap())
        .collect();
    certs.extend(
        [(2, 3), (4, 3), (2, 5), (6, 3), (4, 5)]
            .iter()
            .map(|&(m, q)| build_3ds_qgen(m, q, &o).unwrap()),
    );
    for cert in certs {
        let l = cert.square.to_square().unwrap();
        let n = l.order();
        let Witness::Single(s) = &cert.witness else {
            panic!("single witness expected")
        };
        assert_eq!(s.len(), n + 1);
        assert!(check_quasi_transversal(&l, s.cells()).is_ok());
        assert!(brute_k_dominating(&l, s.cells(), 3));
    }
}

#[test]
fn case_one_set_at_order_four() {
    let cert = build_3ds_q1(4, &BuildOptions::default()).unwrap();
    assert_eq!(cert.provenance, Provenance::PaperFormula);
    let Witness::Single(s) = &cert.witness else {
        panic!()
    };
    let want: Vec<Cell> = [(1, 1), (2, 2), (3, 3), (3, 4), (4, 1)]
        .iter()
        .map(|&(r, c)| Cell::one_based(r, c))
        .collect();
    assert_eq!(s.cells(), &want[..]);
}

#[test]
fn domatic_families_reach_the_counting_bound() {
    for n in [4, 6, 8, 10, 12] {
        let cert = build_domatic_partition_cyclic(n).unwrap();
        let l = cert.square.to_square().unwrap();
        let parts: Vec<Vec<Cell>> = cert
            .witness
            .sets()
            .iter()
            .map(|s| s.cells().to_vec())
            .collect();
        assert_eq!(parts.len(), n - 1);
        for p in &parts {
            assert!(brute_k_dominating(&l, p, 3));
        }
        let g = LatinSquareGraph::implicit(&l);
        let r = verify_domatic_partition(&g, &parts, 3, false, Some(n + 1)).unwrap();
        assert!(r.verdict && r.disjoint);
        assert_eq!(r.upper_bound, Some(n - 1));
        assert_eq!(r.lower_bound, Some(n - 1));
    }
}

#[test]
fn two_plex_certificates_split_into_quasi_and_near() {
    let o = BuildOptions::default();
    let mut certs: Vec<_> = [4, 6, 8, 10, 12]
        .iter()
        .map(|&n| build_2plex_q1(n, &o).unwrap())
        .collect();
    certs.extend([3, 5, 7].iter().map(|&q| build_2plex_m2(q, &o).unwrap()));
    certs.extend(
        [(4, 3), (6, 3), (4, 5), (8, 3)]
            .iter()
            .map(|&(m, q)| build_2plex_general(m, q, &o).unwrap()),
    );
    for cert in certs {
        let l = cert.square.to_square().unwrap();
        let n = l.order();
        let sets = cert.witness.sets();
        assert_eq!(sets.len(), 2);
        let (quasi, near) = (sets[0], sets[1]);
        assert_eq!(quasi.kind(), PlexKind::QuasiTransversal);
        assert_eq!(near.kind(), PlexKind::NearTransversal);
        assert!(quasi.is_disjoint(near));
        let mut union: Vec<Cell> = quasi.cells().iter().chain(near.cells()).copied().collect();
        union.sort();
        assert_eq!(union.len(), 2 * n);
        assert!(check_kplex(&l, &union, 2).is_ok());
        let plex = CellSet::new(n, PlexKind::KPlex(2), union).unwrap();
        let rest = complement_plex(&l, &plex).unwrap();
        assert!(check_kplex(&l, rest.cells(), n - 2).is_ok());
    }
}

#[test]
fn near_and_quasi_transforms_compose() {
    for n in 3..=6 {
        let l = LatinSquare::cyclic(n);
        for near in enumerate_near_transversals(&l, 200).unwrap().witnesses {
            let Ok(q) = quasi_from_near(&l, &near) else {
                continue;
            };
            assert!(near.cells().iter().all(|&c| q.contains(c)));
            // the two added cells carry the symbol the near-transversal missed
            let missing: Vec<usize> = q
                .cells()
                .iter()
                .filter(|&&c| !near.contains(c))
                .map(|c| l.get(c.row, c.col))
                .collect();
            assert_eq!(missing.len(), 2);
            assert_eq!(missing[0], missing[1]);
            assert!(near
                .cells()
                .iter()
                .all(|c| l.get(c.row, c.col) != missing[0]));
        }
        for q in enumerate_quasi_transversals(&l, 200).unwrap().witnesses {
            if let Ok(near) = near_from_quasi(&l, &q) {
                assert!(near.cells().iter().all(|&c| q.contains(c)));
                if let Ok(again) = quasi_from_near(&l, &near) {
                    assert!(check_quasi_transversal(&l, again.cells()).is_ok());
                    assert!(near.cells().iter().all(|&c| again.contains(c)));
                }
            }
        }
    }
}

#[test]
fn quasi_transversals_of_c4_contain_no_transversal() {
    let l = LatinSquare::cyclic(4);
    for q in enumerate_quasi_transversals(&l, usize::MAX)
        .unwrap()
        .witnesses
    {
        assert_eq!(transversal_in_quasi(&l, &q).unwrap(), None);
    }
}

#[test]
fn transversals_extend_to_quasi_transversals() {
    let l = LatinSquare::cyclic(5);
    let g = build_graph(&l).unwrap();
    for t in latin_plex::plexes::search::all_transversals(&l, usize::MAX).unwrap() {
        let q = quasi_from_transversal(&l, &t).unwrap();
        assert!(check_quasi_transversal(&l, q.cells()).is_ok());
        assert_eq!(transversal_in_quasi(&l, &q).unwrap(), Some(t));
        assert!(
            latin_plex::lsgraph::is_k_dominating(&g, q.cells(), 3)
                .unwrap()
                .verdict
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn even_cyclic_builders_always_validate(half in 2usize..=8, seed in any::<u64>()) {
        let n = 2 * half;
        let o = BuildOptions { seed, ..BuildOptions::default() };
        for cert in [build_3ds_q1(n, &o).unwrap(), build_2plex_q1(n, &o).unwrap()] {
            prop_assert!(round_trip(&cert).is_accepted());
        }
    }
}
