//! Invariants over generated inputs: exact linear algebra, lattice
//! normal forms, and intersection cohomology of random complete fans.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use fanic::cohomology::Assembly;
use fanic::harness::{self, CheckOptions};
use fanic::io::{read_fan, FanDocument};
use fanic::lattice::{gcd_vec, hnf, primitive, rank};
use fanic::linalg::{dense_det, dense_rank, q, Q};
use fanic::{corpus, BettiTable, Fan, GemObject, Perversity};

fn qmat(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

fn transpose(m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    (0..ncols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, cols), rows)
}

fn table(fan: &Arc<Fan>, p: &Perversity) -> BettiTable {
    let (ic, _) = GemObject::ic(fan, p).unwrap();
    Assembly::gamma(&ic).unwrap().betti().unwrap()
}

/// A complete fan in rank 2 from nonzero vectors sorted by angle, or `None`
/// when two directions coincide or a gap reaches π.
fn complete_plane_fan(vs: &[(i64, i64)]) -> Option<Fan> {
    let mut rays: Vec<Vec<i64>> = vs.iter().filter(|v| **v != (0, 0)).map(|&(a, b)| primitive(&[a, b])).collect();
    rays.sort_by(|a, b| (a[1] as f64).atan2(a[0] as f64).total_cmp(&(b[1] as f64).atan2(b[0] as f64)));
    rays.dedup();
    let n = rays.len();
    if n < 3 {
        return None;
    }
    for i in 0..n {
        let (a, b) = (&rays[i], &rays[(i + 1) % n]);
        // the counterclockwise turn from a to b must be strictly less than π
        if a[0] * b[1] - a[1] * b[0] <= 0 {
            return None;
        }
    }
    let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Fan::new(2, rays, &cones).ok()
}

fn plane_fan() -> impl Strategy<Value = Fan> {
    prop::collection::vec((0.0..2.0 * PI, 1i64..=3), 3..=7).prop_filter_map("not a complete fan", |pts| {
        let vs: Vec<(i64, i64)> = pts
            .iter()
            .map(|&(t, s)| ((s as f64 * t.cos()).round() as i64, (s as f64 * t.sin()).round() as i64))
            .collect();
        complete_plane_fan(&vs)
    })
}

fn apply_unimodular(fan: &Fan, m: [[i64; 2]; 2]) -> Fan {
    let rays: Vec<Vec<i64>> =
        fan.rays.iter().map(|v| vec![m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]).collect();
    Fan::new(2, rays, &fan.maximal_ray_sets()).unwrap()
}

fn reversed(fan: &Fan) -> Fan {
    let n = fan.rays.len();
    let rays: Vec<Vec<i64>> = fan.rays.iter().rev().cloned().collect();
    let cones: Vec<Vec<usize>> = fan.maximal_ray_sets().iter().rev().map(|c| c.iter().map(|&i| n - 1 - i).collect()).collect();
    Fan::new(fan.rank, rays, &cones).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(4, 5)) {
        prop_assert_eq!(dense_rank(&qmat(&m)), dense_rank(&qmat(&transpose(&m, 5))));
        prop_assert!(dense_rank(&qmat(&m)) <= 4);
    }

    #[test]
    fn determinant_vanishes_exactly_on_rank_drop(m in matrix(3, 3)) {
        let full = dense_rank(&qmat(&m)) == 3;
        prop_assert_eq!(dense_det(&qmat(&m)) != q(0), full);
    }

    #[test]
    fn hermite_form_keeps_the_rank(m in matrix(4, 3)) {
        let h = hnf(&m, 3);
        prop_assert_eq!(rank(&h), rank(&m));
        prop_assert_eq!(dense_rank(&qmat(&h)), dense_rank(&qmat(&m)));
    }

    #[test]
    fn primitive_vectors_are_primitive_and_parallel(v in prop::collection::vec(-12i64..=12, 3)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let p = primitive(&v);
        prop_assert_eq!(gcd_vec(&p), 1);
        let g = gcd_vec(&v);
        prop_assert_eq!(p.iter().map(|x| x * g).collect::<Vec<_>>(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn complete_plane_fans_have_h_vector_one_n_minus_two_one(fan in plane_fan()) {
        let fan = Arc::new(fan);
        let n = fan.rays.len();
        let want = BettiTable::from_pairs([((0, -2), 1), ((1, -1), n - 2), ((2, 0), 1)]);
        for p in [Perversity::bottom(&fan), Perversity::middle(&fan), Perversity::top(&fan)] {
            prop_assert_eq!(&table(&fan, &p), &want);
        }
    }

    #[test]
    fn tables_are_invariant_under_relabelling_and_unimodular_maps(fan in plane_fan(), a in -2i64..=2) {
        let fan = Arc::new(fan);
        let base = table(&fan, &Perversity::middle(&fan));
        let rev = Arc::new(reversed(&fan));
        prop_assert_eq!(&table(&rev, &Perversity::middle(&rev)), &base);
        let moved = Arc::new(apply_unimodular(&fan, [[1, a], [0, 1]]));
        prop_assert_eq!(&table(&moved, &Perversity::middle(&moved)), &base);
    }

    #[test]
    fn fan_documents_round_trip(fan in plane_fan()) {
        let back = read_fan(&FanDocument::from_fan(&fan).to_json()).unwrap();
        prop_assert_eq!(&back.rays, &fan.rays);
        prop_assert_eq!(back.maximal_ray_sets(), fan.maximal_ray_sets());
        prop_assert_eq!(back.f_vector(), fan.f_vector());
    }

    #[test]
    fn diagonal_checks_hold_on_random_plane_fans(fan in plane_fan()) {
        let fan = Arc::new(fan);
        for check in ["thm3.3", "thm4.1", "cor4.5", "euler", "thm3.5"] {
            let r = harness::check(check, &fan, &CheckOptions::default()).unwrap();
            prop_assert!(r.passed(), "{}", r.to_json_line());
        }
    }

    #[test]
    fn perversity_by_dim_matches_named(fan in plane_fan()) {
        let by_dim: BTreeMap<usize, i64> = [(1, 0), (2, 1)].into();
        prop_assert_eq!(Perversity::by_dim(&fan, &by_dim).unwrap(), Perversity::top(&fan));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn random_threefolds_satisfy_the_diagonal_and_euler_checks(seed in 100u64..10_000) {
        let fan = Arc::new(corpus::random_simplicial(seed, 6));
        for check in ["thm3.3", "thm4.1", "euler", "thm3.2"] {
            let r = harness::check(check, &fan, &CheckOptions::default()).unwrap();
            prop_assert!(r.passed(), "{}", r.to_json_line());
        }
    }
}
