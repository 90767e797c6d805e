//! The named test corpus: small complete fans, boundary fans of full cones,
//! and seeded random complete simplicial fans in rank 3.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::fan::Fan;
use crate::lattice::{primitive, IVec};

/// Seeds of the random members, in corpus order.
pub const RANDOM_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

/// The complete fan of `P^1`.
pub fn p1() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], &[vec![0], vec![1]]).expect("valid fan").with_name("p1")
}

/// The complete fan of `P^2`.
pub fn p2() -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], &[vec![0, 1], vec![1, 2], vec![0, 2]])
        .expect("valid fan")
        .with_name("p2")
}

/// The fan of the Hirzebruch surface `F_a`.
pub fn hirzebruch(a: i64) -> Fan {
    let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
    Fan::new(2, rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
        .expect("valid fan")
        .with_name(&format!("hirzebruch{a}"))
}

/// The complete fan over the faces of the cube `[-1,1]^3`: six square cones.
pub fn cube_faces() -> Fan {
    let rays: Vec<IVec> = (0..3).map(|_| [-1i64, 1]).multi_cartesian_product().collect();
    let maxes: Vec<Vec<usize>> = (0..3)
        .cartesian_product([-1i64, 1])
        .map(|(axis, s)| (0..rays.len()).filter(|&i| rays[i][axis] == s).collect())
        .collect();
    Fan::new(3, rays, &maxes).expect("valid fan").with_name("cube-faces")
}

/// The cone over the square with vertices `(±1,0,1), (0,±1,1)`.
pub fn square_cone() -> Cone {
    Cone::from_rays(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).expect("valid cone")
}

/// The cone in rank 4 over the cube with vertices `(±1,±1,±1,1)`.
pub fn cube_cone() -> Cone {
    let rays: Vec<IVec> = (0..3)
        .map(|_| [-1i64, 1])
        .multi_cartesian_product()
        .map(|mut v| {
            v.push(1);
            v
        })
        .collect();
    Cone::from_rays(4, &rays).expect("valid cone")
}

/// `F(π)∖{π}` for the cone over the square.
pub fn square_boundary() -> Fan {
    Fan::boundary_of(&square_cone()).with_name("square-boundary")
}

/// `F(π)∖{π}` for the cone over the cube.
pub fn cube_boundary() -> Fan {
    Fan::boundary_of(&cube_cone()).with_name("cube-boundary")
}

/// `F(π)` for the cone over the square (not a corpus member; a
/// non-simplicial single-cone fan used as a negative control).
pub fn square_cone_fan() -> Fan {
    Fan::from_cone(&square_cone()).with_name("square-cone")
}

fn sub3(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [i64; 3], b: &[i64]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Triangles of the convex hull of `pts` when every point is a vertex, no
/// four points lie on a supporting plane, and the origin is interior.
fn simplicial_hull(pts: &[IVec]) -> Option<Vec<Vec<usize>>> {
    let mut facets = Vec::new();
    for t in (0..pts.len()).combinations(3) {
        let n = cross(sub3(&pts[t[1]], &pts[t[0]]), sub3(&pts[t[2]], &pts[t[0]]));
        if n == [0, 0, 0] {
            return None;
        }
        let off = dot3(n, &pts[t[0]]);
        let side: Vec<i64> =
            (0..pts.len()).filter(|i| !t.contains(i)).map(|i| (dot3(n, &pts[i]) - off).signum()).collect();
        let (pos, neg) = (side.iter().any(|&s| s > 0), side.iter().any(|&s| s < 0));
        if pos && neg {
            continue;
        }
        if side.contains(&0) {
            return None;
        }
        // the origin must lie strictly on the inner side
        let inner = if pos { 1 } else { -1 };
        if (-off).signum() != inner {
            return None;
        }
        facets.push(t);
    }
    let used = facets.iter().flatten().unique().count();
    (used == pts.len()).then_some(facets)
}

/// A complete simplicial fan in rank 3: the face fan of a random simplicial
/// lattice polytope with `n` vertices in `[-2,2]^3` containing the origin in
/// its interior. Deterministic in `seed`.
pub fn random_simplicial(seed: u64, n: usize) -> Fan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<IVec> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(-2i64..=2)).collect()).collect();
        if pts.iter().any(|p| p.iter().all(|&x| x == 0)) {
            continue;
        }
        let rays: Vec<IVec> = pts.iter().map(|p| primitive(p)).collect();
        if rays.iter().unique().count() != n {
            continue;
        }
        let Some(facets) = simplicial_hull(&pts) else { continue };
        if let Ok(f) = Fan::new(3, rays, &facets) {
            if f.is_complete() && f.is_simplicial() {
                return f.with_name(&format!("random-{seed}"));
            }
        }
    }
}

/// The corpus, in a fixed order.
pub fn corpus() -> Vec<Fan> {
    let mut v = vec![p1(), p2(), hirzebruch(2), cube_faces(), square_boundary(), cube_boundary()];
    v.extend(RANDOM_SEEDS.iter().map(|&s| random_simplicial(s, 6)));
    v
}

/// Names of the corpus members, in corpus order.
pub fn names() -> Vec<String> {
    corpus().into_iter().map(|f| f.name.unwrap_or_default()).collect()
}

/// A corpus member (or the extra `square-cone`) by name.
pub fn by_name(name: &str) -> Option<Fan> {
    if name == "square-cone" {
        return Some(square_cone_fan());
    }
    corpus().into_iter().find(|f| f.name.as_deref() == Some(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_have_expected_shape() {
        assert_eq!(p2().f_vector(), vec![1, 3, 3]);
        assert_eq!(cube_faces().f_vector(), vec![1, 8, 12, 6]);
        assert_eq!(square_boundary().f_vector(), vec![1, 4, 4, 0]);
        assert_eq!(cube_boundary().f_vector(), vec![1, 8, 12, 6, 0]);
        assert!(hirzebruch(2).is_complete());
        for s in RANDOM_SEEDS {
            let f = random_simplicial(s, 6);
            assert!(f.is_complete() && f.is_simplicial());
            assert_eq!(f.f_vector(), vec![1, 6, 12, 8]);
        }
    }

    #[test]
    fn random_members_are_deterministic() {
        let a = random_simplicial(3, 6);
        let b = random_simplicial(3, 6);
        assert_eq!(a.rays, b.rays);
        assert_eq!(a.maximal_ray_sets(), b.maximal_ray_sets());
    }
}
