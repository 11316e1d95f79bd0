mod common;

use std::collections::BTreeSet;

use common::{assert_topology, brute_counts, sample_meshes};
use num_rational::{BigRational, Rational64};
use num_traits::Signed;
use tetra_census::refinement::ebar_limit;
use tetra_census::{
    counts, generate, predict_counts, predict_red_counts, refine_red, refine_sequence, split,
    Coords, DiagonalRule, GeneratorSpec, Mesh3, MeshCounts, RefineKind, RefineScheme,
    SequenceOptions, SplitKind,
};

type CellKey = Vec<[BigRational; 3]>;

fn cell_set(m: &Mesh3) -> BTreeSet<CellKey> {
    let Coords::Exact(p) = m.coords() else {
        panic!("exact mesh expected")
    };
    m.cells()
        .iter()
        .map(|c| {
            let mut key: CellKey = c.iter().map(|&v| p[v].clone()).collect();
            key.sort();
            key
        })
        .collect()
}

#[test]
fn kuhn_rule_reproduces_the_finer_freudenthal_box() {
    for n in 1..=3 {
        let coarse = generate(&GeneratorSpec::freudenthal(n, n, n)).unwrap();
        let fine = generate(&GeneratorSpec::freudenthal(2 * n, 2 * n, 2 * n)).unwrap();
        let refined = refine_red(&coarse, DiagonalRule::KuhnConsistent);
        assert_eq!(cell_set(&refined), cell_set(&fine), "n = {n}");
    }
    let coarse = generate(&GeneratorSpec::freudenthal(1, 2, 3)).unwrap();
    let fine = generate(&GeneratorSpec::freudenthal(2, 4, 6)).unwrap();
    assert_eq!(
        cell_set(&refine_red(&coarse, DiagonalRule::KuhnConsistent)),
        cell_set(&fine)
    );
}

#[test]
fn new_vertices_are_exactly_the_edge_midpoints() {
    for (name, m) in sample_meshes() {
        let Coords::Exact(p) = m.coords() else {
            panic!()
        };
        let mut expect: BTreeSet<[BigRational; 3]> = p.iter().cloned().collect();
        let two = BigRational::from_integer(2.into());
        for [a, b] in &m.tables().edges {
            expect.insert(std::array::from_fn(|k| (&p[*a][k] + &p[*b][k]) / &two));
        }
        for rule in [DiagonalRule::KuhnConsistent, DiagonalRule::Shortest] {
            let r = refine_red(&m, rule);
            let Coords::Exact(q) = r.coords() else {
                panic!()
            };
            let got: BTreeSet<_> = q.iter().cloned().collect();
            assert_eq!(got, expect, "{name}");
            assert_eq!(
                q[..p.len()],
                p[..],
                "{name}: original vertices keep their indices"
            );
        }
    }
}

#[test]
fn red_counts_match_the_recurrences() {
    for (name, m) in sample_meshes() {
        let c = counts(&m);
        for rule in [DiagonalRule::KuhnConsistent, DiagonalRule::Shortest] {
            let r = refine_red(&m, rule);
            let rc = counts(&r);
            assert_eq!(rc, predict_red_counts(&c, 1), "{name}");
            assert_eq!(rc, brute_counts(&r), "{name}");
            assert_eq!(r.orientation_fixes(), 0, "{name}");
            assert_topology(&rc);
        }
        for kind in [SplitKind::alfeld(), SplitKind::worsey_farin()] {
            let s = split(&m, kind).unwrap();
            let r = refine_red(&s, DiagonalRule::Shortest);
            assert_eq!(counts(&r), predict_red_counts(&counts(&s), 1), "{name}");
        }
    }
}

#[test]
fn freudenthal_five_refined_once() {
    let m = generate(&GeneratorSpec::freudenthal(5, 5, 5)).unwrap();
    let c = counts(&refine_red(&m, DiagonalRule::KuhnConsistent));
    assert_eq!(c.as_vector(), [1331, 7930, 12600, 6000]);
    assert_eq!(c.ebar(), Some(Rational64::new(15860, 1331)));
    let p = predict_red_counts(&counts(&m), 4);
    assert_eq!((p.v, p.e), (531441, 3641840));
}

#[test]
fn trajectories_match_predictions() {
    let tet = generate(&GeneratorSpec::single_tet()).unwrap();
    let opts = SequenceOptions::default();
    let (traj, _) =
        refine_sequence(&tet, RefineScheme::red(DiagonalRule::Shortest), 2, opts).unwrap();
    assert_eq!(traj.levels[1].as_vector(), [10, 25, 24, 8]);
    assert_eq!(traj.levels[2].as_vector(), [35, 130, 160, 64]);
    assert_eq!(traj.measured, 3);

    let (traj, _) = refine_sequence(&tet, RefineScheme::repeated_alfeld(), 3, opts).unwrap();
    assert_eq!(traj.levels[3].as_vector(), [25, 90, 130, 64]);
    for (n, c) in traj.levels.iter().enumerate() {
        assert_eq!(
            *c,
            predict_counts(&traj.levels[0], RefineKind::RepeatedAlfeld, n as u32)
        );
        assert_topology(c);
    }

    let (traj, last) =
        refine_sequence(&tet, RefineScheme::repeated_worsey_farin(), 2, opts).unwrap();
    assert_eq!(last.unwrap().n_cells(), 144);
    for (n, c) in traj.levels.iter().enumerate() {
        assert_eq!(
            *c,
            predict_counts(&traj.levels[0], RefineKind::RepeatedWorseyFarin, n as u32)
        );
        assert_topology(c);
    }
}

#[test]
fn repeated_alfeld_approaches_eight() {
    let c0 = MeshCounts::new(4, 6, 4, 1, 4, 6, 4);
    let e5 = predict_counts(&c0, RefineKind::RepeatedAlfeld, 5)
        .ebar()
        .unwrap();
    assert_eq!(e5, Rational64::new(2740, 345));
    assert!(e5 > Rational64::new(79, 10));
    assert_eq!(
        ebar_limit(RefineKind::RepeatedAlfeld),
        Rational64::from_integer(8)
    );
}

#[test]
fn worsey_farin_limit_matches_iteration() {
    let c0 = MeshCounts::new(4, 6, 4, 1, 4, 6, 4);
    let e = predict_counts(&c0, RefineKind::RepeatedWorseyFarin, 12)
        .ebar()
        .unwrap();
    let limit = ebar_limit(RefineKind::RepeatedWorseyFarin);
    assert_eq!(limit, Rational64::new(28, 3));
    let diff = (e - limit).abs();
    assert!(diff < Rational64::new(1, 1000), "{e}");
}

#[test]
fn red_error_halves_per_level() {
    let m = generate(&GeneratorSpec::freudenthal(5, 5, 5)).unwrap();
    let c0 = counts(&m);
    let err = |n: u32| {
        let e = predict_red_counts(&c0, n).ebar().unwrap();
        14.0 - *e.numer() as f64 / *e.denom() as f64
    };
    let mut prev = err(0);
    for n in 1..=12 {
        let cur = err(n);
        assert!(cur > 0.0 && cur < prev, "level {n}");
        if n >= 4 {
            let ratio = cur / prev;
            assert!(
                ratio > 0.5 / 1.2 && ratio < 0.5 * 1.2,
                "level {n}: ratio {ratio}"
            );
        }
        prev = cur;
    }
}

#[test]
fn red_trajectories_stay_between_four_and_eighteen() {
    for (name, m) in sample_meshes() {
        if !tetra_census::vertex_stars(&m).iter().any(|s| s.interior) {
            continue;
        }
        let (traj, _) = refine_sequence(
            &m,
            RefineScheme::red(DiagonalRule::KuhnConsistent),
            5,
            SequenceOptions {
                cell_cap: 20_000,
                continue_past_cap: true,
            },
        )
        .unwrap();
        let e: Vec<Rational64> = traj.levels.iter().map(|c| c.ebar().unwrap()).collect();
        for w in e.windows(2) {
            assert!(w[1] > w[0], "{name}: {e:?}");
        }
        for x in &e {
            assert!(*x >= 4.into() && *x <= 18.into(), "{name}: {x}");
        }
        for (n, c) in traj.levels.iter().enumerate() {
            assert_eq!(*c, predict_red_counts(&traj.levels[0], n as u32), "{name}");
        }
    }
}
