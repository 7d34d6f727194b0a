use std::collections::BTreeSet;

use proptest::prelude::*;

use burniat_core::branch::{bidouble_fiber_check, branch_table, verify_branch_identities};
use burniat_core::curves::{lines_on_weak_dp, single_nodal_loss};
use burniat_core::invariants::*;
use burniat_core::plane::*;
use burniat_core::rational::{frac, q, Rational};
use burniat_core::{Case, DivisorClass, Exec, SurfaceLattice};

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-97i64..=-1, 1i64..=97]
}

fn rational() -> impl Strategy<Value = Rational> {
    (nonzero(), nonzero()).prop_map(|(n, d)| frac(n, d))
}

fn triple() -> impl Strategy<Value = [Rational; 3]> {
    [rational(), rational(), rational()]
}

fn point5() -> impl Strategy<Value = ParamPoint5> {
    triple().prop_map(|a| ParamPoint5::new(a).unwrap())
}

fn point6() -> impl Strategy<Value = ParamPoint6> {
    (triple(), triple()).prop_filter_map("degenerate", |(a, b)| ParamPoint6::new(a, b).ok())
}

fn scaled_line(l: &ProjLine, c: &Rational) -> ProjLine {
    ProjLine::new(l.coeffs().clone().map(|x| x * c)).unwrap()
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[Vec<Rational>]) -> Rational {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(vec![], false)];
        }
        let mut out = Vec::new();
        for (p, odd) in perms(n - 1) {
            for pos in 0..n {
                let mut v = p.clone();
                v.insert(pos, n - 1);
                // moving the new largest entry from the end to `pos` takes
                // n - 1 - pos transpositions
                out.push((v, odd ^ ((n - 1 - pos) % 2 == 1)));
            }
        }
        out
    }
    let n = m.len();
    let mut total = q(0);
    for (p, odd) in perms(n) {
        let term = (0..n).fold(q(1), |acc, i| acc * &m[i][p[i]]);
        if odd {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triple_points_ignore_rescaling(
        a in triple(), b in triple(), c in rational(), k in 0usize..9
    ) {
        let Ok(cfg) = build_burniat_lines(&BurniatParams::K6 { a, b }) else {
            return Ok(());
        };
        let label = cfg.lines()[k].label;
        let rescaled = cfg.with_line(label, scaled_line(&cfg.lines()[k].coeffs, &c)).unwrap();
        prop_assert_eq!(find_triple_points(&cfg), find_triple_points(&rescaled));
    }

    #[test]
    fn conic_test_matches_leibniz(pts in prop::collection::vec(
        [-6i64..=6, -6i64..=6, 1i64..=6], 6..=7
    )) {
        let pts: Vec<ProjPoint> = pts.into_iter().map(|v| ProjPoint::from_ints(v).unwrap()).collect();
        let refs: Vec<&ProjPoint> = pts.iter().collect();
        let rows: Vec<Vec<Rational>> = pts.iter().map(|p| p.veronese().to_vec()).collect();
        // rank < 6 iff every 6x6 minor vanishes
        let oracle = (0..rows.len()).all(|skip| {
            let minor: Vec<Vec<Rational>> = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| rows.len() == 6 || *i != skip)
                .map(|(_, r)| r.clone())
                .collect();
            leibniz(&minor) == q(0)
        });
        prop_assert_eq!(on_common_conic(&refs), oracle);
    }

    #[test]
    fn k5_invariance(p in point5()) {
        let y = invariants5(&p);
        for g in Gen5::ALL {
            prop_assert_eq!(&invariants5(&act5(&[g], &p)), &y);
        }
        let a = p.a();
        prop_assert_eq!(
            act5(&[Gen5::Trans, Gen5::Cremona], &p),
            ParamPoint5::new([a[1].clone(), a[0].clone(), a[2].clone()]).unwrap()
        );
    }

    #[test]
    fn k6_invariance(p in point6(), l1 in rational(), l2 in rational(), perm in Just([2usize, 0, 1])) {
        let inv = invariants6(&p);
        for g in [
            Gen6::Perm(perm),
            Gen6::Flip(1),
            Gen6::Flip(2),
            Gen6::Flip(3),
            Gen6::Torus(l1.clone(), l2.clone()),
            Gen6::Cremona,
        ] {
            prop_assert_eq!(&invariants6(&act6(&[g], &p).unwrap()), &inv);
        }
    }

    #[test]
    fn fiber_degree(d in [(1i64..=97, 1i64..=97), (1i64..=97, 1i64..=97), (1i64..=97, 1i64..=97)]) {
        let delta = d.map(|(n, m)| frac(n, m));
        prop_assert_eq!(bidouble_fiber_check(&delta).unwrap(), 4);
    }
}

#[test]
fn nodal_line_is_a_minus_two_curve() {
    for cfg in sample_configs(Case::K4Nodal, 20, 11, Exec::Parallel).unwrap() {
        let points = find_triple_points(&cfg);
        let carriers: Vec<&LabeledLine> = cfg
            .lines()
            .iter()
            .filter(|l| {
                points
                    .iter()
                    .filter(|p| incident(&p.point, &l.coeffs))
                    .count()
                    >= 3
            })
            .collect();
        assert_eq!(carriers.len(), 1);
        let carrier = carriers[0];
        assert_eq!((carrier.label.pencil(), carrier.label.member()), (1, 2));

        // strict transform: L minus one E for each blown-up point on the line,
        // P4 and P5 in order of appearance after the corners
        let lat = SurfaceLattice::new(5).unwrap();
        let off: Vec<&MultiplePoint> = points.iter().filter(|p| p.corner.is_none()).collect();
        let mut through: Vec<usize> = (1..=3)
            .filter(|&i| incident(&ProjPoint::reference(i), &carrier.coeffs))
            .collect();
        through.extend(
            off.iter()
                .enumerate()
                .filter(|(_, p)| incident(&p.point, &carrier.coeffs))
                .map(|(k, _)| 4 + k),
        );
        let class = lat.curve_through(1, &through).unwrap();
        assert_eq!(class, DivisorClass::new(1, vec![1, 0, 0, 1, 1]));
        assert_eq!(class.self_intersection(), -2);
        assert_eq!(lat.canonical_degree(&class), Ok(0));
    }
}

#[test]
fn build_then_classify_round_trip() {
    for case in Case::MAIN {
        for cfg in sample_configs(case, 50, 5, Exec::Parallel).unwrap() {
            assert_eq!(classify(&cfg).unwrap().case, case);
        }
    }
}

#[test]
fn tables_agree_with_lattice_lines() {
    // every branch component that is a line on the anticanonical model is a
    // (-1)-class surviving on the surface
    for case in Case::MAIN {
        let bd = branch_table(case).unwrap();
        let lines: BTreeSet<DivisorClass> = lines_on_weak_dp(bd.r, &bd.minus_two)
            .unwrap()
            .classes
            .into_iter()
            .collect();
        let lat = bd.lattice();
        for comp in bd.components.iter().flatten() {
            let deg = comp.class.intersect(&lat.anticanonical_class()).unwrap();
            assert_eq!(
                deg == 1,
                lines.contains(&comp.class),
                "{case} {}",
                comp.label
            );
        }
        assert!(verify_branch_identities(&bd).iter().all(|c| c.pass));
    }
}

#[test]
fn loss_grows_with_r() {
    let d = |r: usize| {
        let mut b = vec![0; r];
        b[0] = 1;
        b[3] = 1;
        b[4] = 1;
        DivisorClass::new(1, b)
    };
    let mut prev = 0;
    for r in 5..=6 {
        let lost = burniat_core::curves::lost_lines(r, &[d(r)]).unwrap().len() as u64;
        assert_eq!(lost, single_nodal_loss(r));
        assert!(lost > prev);
        prev = lost;
    }
}
