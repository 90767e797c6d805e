//! Flags `σ1 ≺ ⋯ ≺ σk` of nonzero cones, the basis of the barycentric
//! subdivision algebra.

use crate::fan::Fan;

/// Flags ending at each cone (`out[0]` is empty), every list sorted
/// lexicographically by cone index.
pub fn flags_ending_at(fan: &Fan) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); fan.len()];
    for rho in 1..fan.len() {
        let mut list = vec![vec![rho]];
        for &s in fan.proper_faces(rho) {
            if s == 0 {
                continue;
            }
            for b in &out[s] {
                let mut f = b.clone();
                f.push(rho);
                list.push(f);
            }
        }
        list.sort();
        out[rho] = list;
    }
    out
}

/// All flags of `Δ∖{0}`, lexicographically.
pub fn all_flags(fan: &Fan) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = flags_ending_at(fan).into_iter().flatten().collect();
    v.sort();
    v
}

/// Flags within a cone set `Φ` (which must not contain the zero cone).
pub fn flags_in(fan: &Fan, phi: &[usize]) -> Vec<Vec<usize>> {
    all_flags(fan).into_iter().filter(|a| a.iter().all(|c| phi.contains(c))).collect()
}

/// Position at which `tau` would be inserted into `flag` to keep it a
/// chain, or `None` if `tau` is incomparable with some member (or present).
pub fn insertion_point(fan: &Fan, flag: &[usize], tau: usize) -> Option<usize> {
    let mut pos = 0;
    for (k, &s) in flag.iter().enumerate() {
        if s == tau {
            return None;
        }
        if fan.is_face(s, tau) {
            pos = k + 1;
        } else if !fan.is_face(tau, s) {
            return None;
        }
    }
    // all before pos must be faces of tau and all after must contain it
    if flag[pos..].iter().all(|&s| fan.is_face(tau, s)) && flag[..pos].iter().all(|&s| fan.is_face(s, tau)) {
        Some(pos)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_in_a_square_cone() {
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap();
        let fl = flags_ending_at(&f);
        let top = f.find(&[0, 1]).unwrap();
        // y(ρ), y(τ1)y(ρ), y(τ2)y(ρ)
        assert_eq!(fl[top].len(), 3);
        assert_eq!(all_flags(&f).len(), 5);
    }
}
