//! Betti tables checked against values known independently of the
//! construction: h-vectors of complete fans and g-vectors of the polytopes
//! under boundary fans.

use std::sync::Arc;

use fanic::cohomology::{euler_oracle_top, Assembly};
use fanic::{corpus, BettiTable, Fan, GemObject, Perversity};

fn table(fan: &Fan, p: &str) -> BettiTable {
    let fan = Arc::new(fan.clone());
    let p = Perversity::by_name(&fan, p).unwrap();
    let (ic, _) = GemObject::ic(&fan, &p).unwrap();
    Assembly::gamma(&ic).unwrap().betti().unwrap()
}

/// `h_k` at `(k, k − r)`: the table of a complete fan with toric h-vector `h`.
fn diagonal(h: &[usize]) -> BettiTable {
    let r = h.len() as i32 - 1;
    BettiTable::from_pairs(h.iter().enumerate().map(|(k, &x)| ((k as i32, k as i32 - r), x)))
}

#[test]
fn projective_line_and_plane() {
    for p in ["bottom", "middle", "top"] {
        assert_eq!(table(&corpus::p1(), p), BettiTable::from_pairs([((0, -1), 1), ((1, 0), 1)]), "{p}");
        assert_eq!(
            table(&corpus::p2(), p),
            BettiTable::from_pairs([((0, -2), 1), ((1, -1), 1), ((2, 0), 1)]),
            "{p}"
        );
    }
}

#[test]
fn hirzebruch_surface() {
    assert_eq!(table(&corpus::hirzebruch(2), "middle"), diagonal(&[1, 2, 1]));
}

#[test]
fn simplicial_threefolds_have_polytope_h_vectors() {
    // a simplicial 3-polytope with n vertices has h = (1, n − 3, n − 3, 1)
    for s in corpus::RANDOM_SEEDS {
        assert_eq!(table(&corpus::random_simplicial(s, 6), "middle"), diagonal(&[1, 3, 3, 1]));
    }
    assert_eq!(table(&corpus::random_simplicial(11, 7), "middle"), diagonal(&[1, 4, 4, 1]));
}

#[test]
fn cube_face_fan_has_toric_h_vector_of_the_cube() {
    assert_eq!(table(&corpus::cube_faces(), "middle"), diagonal(&[1, 5, 5, 1]));
}

#[test]
fn boundary_fans_carry_the_g_vector_and_its_dual() {
    // square: g = (1, 1); cube: g = (1, 4)
    let square = BettiTable::from_pairs([((0, -3), 1), ((1, -2), 1), ((1, -1), 1), ((2, 0), 1)]);
    assert_eq!(table(&corpus::square_boundary(), "middle"), square);
    let cube = BettiTable::from_pairs([((0, -4), 1), ((1, -3), 4), ((2, -1), 4), ((3, 0), 1)]);
    assert_eq!(table(&corpus::cube_boundary(), "middle"), cube);
}

#[test]
fn top_perversity_matches_the_euler_oracle() {
    for fan in corpus::corpus() {
        let t = table(&fan, "top");
        let r = fan.rank as i32;
        for q in -r - 1..=1 {
            assert_eq!(t.euler(q), euler_oracle_top(&fan, q), "{:?} q = {q}", fan.name);
        }
    }
}

#[test]
fn top_from_p_agrees_with_the_quotient_model() {
    for fan in [corpus::p2(), corpus::cube_faces(), corpus::square_boundary()] {
        let arc = Arc::new(fan.clone());
        let direct = Assembly::gamma(&GemObject::ic_top_from_p(&arc)).unwrap().betti().unwrap();
        assert_eq!(direct, table(&fan, "top"), "{:?}", fan.name);
    }
}
