use std::path::PathBuf;

use proptest::prelude::*;
use treemax_core::theory::{classify_grid, restricted_verdict, strong_verdict, Status, VerdictKind, CITE_CRITICAL};

const GAMMAS: [&str; 6] = ["0.25", "0.5", "0.6", "0.75", "1", "1.5"];

fn golden(gamma: &str) -> Vec<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/strong_gamma_{gamma}.csv"));
    let text = std::fs::read_to_string(&path).unwrap();
    text.lines()
        .skip(1)
        .enumerate()
        .map(|(j, line)| {
            let (idx, row) = line.split_once(',').unwrap();
            assert_eq!(idx.parse::<usize>().unwrap(), j);
            row.to_string()
        })
        .collect()
}

#[test]
fn strong_grids_match_golden_files() {
    for g in GAMMAS {
        let gamma: f64 = g.parse().unwrap();
        let want = golden(g);
        let got = classify_grid(gamma, VerdictKind::Strong, 200).unwrap();
        assert_eq!(got.len(), want.len());
        for (j, (row, expected)) in got.iter().zip(&want).enumerate() {
            let codes: String = row.iter().map(|s| s.code()).collect();
            assert_eq!(&codes, expected, "gamma={g} row j={j}");
        }
    }
}

fn inv(u: f64) -> f64 {
    if u == 0.0 {
        f64::INFINITY
    } else {
        1.0 / u
    }
}

proptest! {
    #[test]
    fn restricted_matches_the_characterization(gamma in 0.01f64..0.99, i in 0u32..=100, j in 1u32..=100) {
        let (u, v) = (f64::from(i) / 100.0, f64::from(j) / 100.0);
        let verdict = restricted_verdict(gamma, inv(u), inv(v)).unwrap();
        let expect = v <= u + 1e-12 && v <= gamma + 1e-12 && u >= 1.0 - gamma - 1e-12;
        prop_assert_eq!(verdict.status == Status::Bounded, expect);
        prop_assert!(verdict.status != Status::Unknown);
    }

    #[test]
    fn strong_bounded_implies_restricted_bounded(gamma in 0.05f64..2.0, i in 0u32..=60, j in 1u32..=60) {
        let (p, q) = (inv(f64::from(i) / 60.0), inv(f64::from(j) / 60.0));
        if strong_verdict(gamma, p, q).unwrap().status == Status::Bounded {
            prop_assert_eq!(restricted_verdict(gamma, p, q).unwrap().status, Status::Bounded);
        }
    }

    #[test]
    fn unknown_only_on_the_critical_segment(gamma in 0.05f64..0.95, v in 0.0f64..1.0) {
        let p = 1.0 / (1.0 - gamma);
        let verdict = strong_verdict(gamma, p, inv(v)).unwrap();
        let inside = v > 1e-12 && v < gamma.min(1.0 - gamma) - 1e-12;
        prop_assert_eq!(verdict.status == Status::Unknown, inside);
        if inside {
            prop_assert_eq!(verdict.citation, CITE_CRITICAL);
        }
    }
}

#[test]
fn restricted_infinite_target_defers_to_strong() {
    for gamma in [0.3, 0.5, 0.8, 1.0, 2.0] {
        for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            let s = strong_verdict(gamma, p, f64::INFINITY).unwrap();
            let r = restricted_verdict(gamma, p, f64::INFINITY).unwrap();
            assert_eq!((s.status, s.citation), (r.status, r.citation));
        }
    }
}

#[test]
fn restricted_grids_partition_the_square() {
    for g in GAMMAS {
        let grid = classify_grid(g.parse().unwrap(), VerdictKind::RestrictedWeak, 200).unwrap();
        assert_eq!(grid.len(), 201);
        assert!(grid.iter().all(|row| row.len() == 201));
    }
}
