mod common;

use common::{assert_topology, brute_counts};
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;
use tetra_census::fespace::FePair;
use tetra_census::generators::star_ebar;
use tetra_census::mesh2d::{refine_red2, single_triangle, square4, unit_square, Split2Kind};
use tetra_census::refinement::{mat_pow, red_power_by_eigenbasis, transfer_matrix};
use tetra_census::{
    asymptotic_dims, counts, counts2, dims, generate, predict_counts, predict_split_counts,
    refine_red, split, split2, AffineForm, DiagonalRule, FePairSpec, GeneratorSpec, MeshCounts,
    RefineKind, SplitKind,
};

#[derive(Clone, Copy, Debug)]
enum Op {
    Alfeld,
    WorseyFarin,
    Red,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![Just(Op::Alfeld), Just(Op::WorseyFarin), Just(Op::Red)]
}

fn kind() -> impl Strategy<Value = RefineKind> {
    prop_oneof![
        Just(RefineKind::RedUniform),
        Just(RefineKind::RepeatedAlfeld),
        Just(RefineKind::RepeatedWorseyFarin),
    ]
}

/// Counts of a Freudenthal box, a valid starting point for predictions.
fn box_counts() -> impl Strategy<Value = MeshCounts> {
    (1..6usize, 1..6usize, 1..6usize)
        .prop_map(|(n, m, l)| counts(&generate(&GeneratorSpec::freudenthal(n, m, l)).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operation_sequences_follow_predictions(
        dims in (1..3usize, 1..3usize, 1..3usize),
        ops in prop::collection::vec(op(), 0..3),
    ) {
        let mut m = generate(&GeneratorSpec::freudenthal(dims.0, dims.1, dims.2)).unwrap();
        for o in ops {
            if m.n_cells() > 3000 {
                break;
            }
            let before = counts(&m);
            let (next, predicted) = match o {
                Op::Alfeld => {
                    let k = SplitKind::alfeld();
                    (split(&m, k).unwrap(), predict_split_counts(&before, k))
                }
                Op::WorseyFarin => {
                    let k = SplitKind::worsey_farin();
                    (split(&m, k).unwrap(), predict_split_counts(&before, k))
                }
                Op::Red => (
                    refine_red(&m, DiagonalRule::Shortest),
                    predict_counts(&before, RefineKind::RedUniform, 1),
                ),
            };
            m = next;
            let c = counts(&m);
            prop_assert_eq!(c, predicted);
            prop_assert_eq!(c, brute_counts(&m));
            assert_topology(&c);
        }
    }

    #[test]
    fn predictions_compose(c in box_counts(), k in kind(), a in 0..6u32, b in 0..6u32) {
        prop_assert_eq!(
            predict_counts(&c, k, a + b),
            predict_counts(&predict_counts(&c, k, a), k, b)
        );
        assert_topology(&predict_counts(&c, k, a));
    }

    #[test]
    fn eigenbasis_power_matches_repeated_squaring(n in 0..20u32) {
        let direct = mat_pow(&transfer_matrix(RefineKind::RedUniform), n);
        let eig = red_power_by_eigenbasis(n);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(&eig[i][j], &BigRational::from_integer(direct[i][j].into()));
            }
        }
    }

    #[test]
    fn star_closed_form_matches_counts(vb in 4..=64usize) {
        let c = counts(&generate(&GeneratorSpec::star(vb)).unwrap());
        prop_assert_eq!(star_ebar(vb).unwrap(), c.ebar().unwrap());
    }

    #[test]
    fn planar_identities(base in 0..3usize, levels in 0..3usize, split_kind in 0..3usize) {
        let mut m = match base {
            0 => single_triangle(),
            1 => unit_square(),
            _ => square4(),
        };
        for _ in 0..levels {
            m = refine_red2(&m);
        }
        if split_kind > 0 {
            let k = if split_kind == 1 { Split2Kind::Alfeld2 } else { Split2Kind::powell_sabin() };
            m = split2(&m, k).unwrap();
        }
        let c = counts2(&m);
        prop_assert_eq!(c.e, 3 * c.v - c.vb - 3 * c.chi() + c.chi_b());
        prop_assert_eq!(c.t, 2 * c.v - c.vb - 2 * c.chi() + c.chi_b());
    }

    #[test]
    fn worsey_farin_linear_identity(c in box_counts()) {
        // Every cell has four faces, interior faces two cells.
        prop_assert_eq!(2 * c.f - c.fb, 4 * c.t);
        prop_assert_eq!(12 * c.t - 4 * (c.f - c.fb) - c.fb, 4 * c.t + c.fb);
        let r = dims(&FePairSpec { pair: FePair::Wf(1), counts: c }).unwrap();
        prop_assert_eq!(r.missing_modes, Some(4 * c.t + c.fb));
    }
}

#[test]
fn velocity_forms_are_ordered() {
    let v = |p| asymptotic_dims(p).unwrap().0;
    assert_eq!(
        v(FePair::Alfeld(3)) - v(FePair::Wf(2)),
        AffineForm::new(Rational64::new(3, 2), Rational64::from_integer(0))
    );
    assert_eq!(
        v(FePair::Wf(2)) - v(FePair::Sv(4)),
        AffineForm::from_ints(12, -30)
    );
}

#[test]
fn exact_dims_approach_affine_forms() {
    let c0 = counts(&generate(&GeneratorSpec::freudenthal(5, 5, 5)).unwrap());
    for levels in 0..8 {
        let c = predict_counts(&c0, RefineKind::RedUniform, levels);
        let e = c.ebar().unwrap();
        let bound = 0.5 * (c.vb + c.chi().abs() + c.chi_b().abs()) as f64 / c.v as f64;
        for pair in [
            FePair::Wf(1),
            FePair::Wf(2),
            FePair::Alfeld(3),
            FePair::Sv(4),
            FePair::Sv(6),
        ] {
            let r = dims(&FePairSpec { pair, counts: c }).unwrap();
            let rel = |exact: i64, f: AffineForm| {
                let x = f.eval(e) * Rational64::from_integer(c.v);
                let x = *x.numer() as f64 / *x.denom() as f64;
                (exact as f64 - x).abs() / x
            };
            let gaps = [
                rel(r.dim_velocity, r.asymptotic_velocity),
                rel(r.dim_pressure_upper, r.asymptotic_pressure),
            ];
            for g in gaps {
                assert!(g <= bound, "{pair} level {levels}: {g} > {bound}");
                if levels >= 4 {
                    assert!(g < 0.03, "{pair} level {levels}: {g}");
                }
            }
        }
    }
}
