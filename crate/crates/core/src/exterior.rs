//! The exterior algebra `A = ⋀•Q^r` in monomial cells, and free modules
//! `gens ⊗ A` whose cells are `gen · 2^r + mask`.
//!
//! A mask is the sorted wedge monomial `e_{k1} ∧ ⋯ ∧ e_{kl}` of the standard
//! basis, with `j = −l`. Modules are left modules: `a · (g ⊗ b) = g ⊗ ab`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lattice::{to_q, IVec};
use crate::linalg::{dense_rank, SVec, Q};

pub type Mask = u32;

/// Sign of `e_a ∧ e_b` against the sorted monomial `e_{a|b}`; 0 if they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    // count pairs (x in a, y in b) with x > y
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let y = bb.trailing_zeros();
        inv += (a >> (y + 1)).count_ones();
        bb &= bb - 1;
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Wedge of two monomials: `Some((sign, mask))` or `None` if zero.
pub fn wedge(a: Mask, b: Mask) -> Option<(i32, Mask)> {
    match wedge_sign(a, b) {
        0 => None,
        s => Some((s, a | b)),
    }
}

#[inline]
pub fn cell(gen: usize, mask: Mask, r: usize) -> usize {
    (gen << r) | mask as usize
}

#[inline]
pub fn split(c: usize, r: usize) -> (usize, Mask) {
    (c >> r, (c & ((1 << r) - 1)) as Mask)
}

/// `j`-degree of a cell.
#[inline]
pub fn cell_j(c: usize, r: usize) -> i32 {
    -(split(c, r).1.count_ones() as i32)
}

/// Left multiplication `e_m ∧ x` on a module element.
pub fn mul_mask(m: Mask, x: &SVec, r: usize) -> SVec {
    if m == 0 {
        return x.clone();
    }
    SVec::from_pairs(x.iter().filter_map(|(c, v)| {
        let (g, mm) = split(*c, r);
        wedge(m, mm).map(|(s, nm)| (cell(g, nm, r), if s > 0 { v.clone() } else { -v.clone() }))
    }))
}

/// Left multiplication `n ∧ x` by a vector `n ∈ Q^r`.
pub fn mul_vec(n: &[Q], x: &SVec, r: usize) -> SVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (k, nk) in n.iter().enumerate() {
        if nk.is_zero() {
            continue;
        }
        for (c, v) in x.iter() {
            let (g, mm) = split(*c, r);
            if let Some((s, nm)) = wedge(1 << k, mm) {
                let slot = acc.entry(cell(g, nm, r)).or_insert_with(Q::zero);
                if s > 0 {
                    *slot += nk * v;
                } else {
                    *slot -= nk * v;
                }
            }
        }
    }
    SVec::from_map(acc)
}

/// `n_1 ∧ ⋯ ∧ n_k` as an element of `A` (cells with gen 0).
pub fn wedge_vectors(vs: &[Vec<Q>], r: usize) -> SVec {
    let mut x = SVec::unit(0);
    for n in vs.iter().rev() {
        x = mul_vec(n, &x, r);
    }
    x
}

/// Basis of the subalgebra `A(σ) = ⋀ N(σ)_Q`: wedges of subsets of the
/// span basis (in increasing subset order within each size).
pub fn subalgebra_basis(span_basis: &[IVec], r: usize) -> Vec<SVec> {
    let s = span_basis.len();
    let vs: Vec<Vec<Q>> = span_basis.iter().map(|b| to_q(b)).collect();
    let mut out = Vec::with_capacity(1 << s);
    for u in 0u32..(1 << s) {
        let chosen: Vec<Vec<Q>> = (0..s).filter(|i| u & (1 << i) != 0).map(|i| vs[i].clone()).collect();
        out.push(wedge_vectors(&chosen, r));
    }
    out.sort_by_key(|x| x.leading().map(|(c, _)| (split(c, r).1.count_ones(), c)));
    out
}

/// Places an element of `A` (gen-0 cells) on generator `g`.
pub fn on_gen(a: &SVec, g: usize, r: usize) -> SVec {
    SVec::from_pairs(a.iter().map(|(c, v)| (cell(g, split(*c, r).1, r), v.clone())))
}

/// Vectors completing `inner` to a basis of the span of `outer` (chosen
/// greedily from `outer` in order).
pub fn complement(inner: &[Vec<Q>], outer: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut cur: Vec<Vec<Q>> = inner.to_vec();
    let mut out = Vec::new();
    let mut rank = dense_rank(&cur);
    for v in outer {
        cur.push(v.clone());
        let nr = dense_rank(&cur);
        if nr > rank {
            rank = nr;
            out.push(v.clone());
        } else {
            cur.pop();
        }
    }
    out
}

pub fn standard_basis(r: usize) -> Vec<Vec<Q>> {
    (0..r).map(|i| (0..r).map(|k| if k == i { Q::one() } else { Q::zero() }).collect()).collect()
}

/// All `c_S ∧ v` for subsets `S` of the complement vectors, i.e. a basis of
/// `A(T) ⊗_{A(σ)} V` when `comp` completes `N(σ)_Q` to `T`.
pub fn induce(vs: &[SVec], comp: &[Vec<Q>], r: usize) -> Vec<SVec> {
    let mut out: Vec<SVec> = vs.to_vec();
    // multiply by complement vectors from the last to the first, so every
    // product appears as c_{s1} ∧ (c_{s2} ∧ (⋯ ∧ v))
    for c in comp.iter().rev() {
        let extra: Vec<SVec> = out.iter().map(|v| mul_vec(c, v, r)).collect();
        out.extend(extra);
    }
    out
}

/// Image of an element under an `A`-linear map given by the images of the
/// generators: `g ⊗ e_m ↦ e_m ∧ image(g)`.
pub fn apply_on_gens(images: &[SVec], x: &SVec, r: usize) -> SVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (c, v) in x.iter() {
        let (g, m) = split(*c, r);
        let img = &images[g];
        for (c2, w) in img.iter() {
            let (g2, m2) = split(*c2, r);
            if let Some((s, nm)) = wedge(m, m2) {
                let slot = acc.entry(cell(g2, nm, r)).or_insert_with(Q::zero);
                if s > 0 {
                    *slot += v * w;
                } else {
                    *slot -= v * w;
                }
            }
        }
    }
    SVec::from_map(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge(0b01, 0b10), Some((1, 0b11)));
        assert_eq!(wedge(0b10, 0b01), Some((-1, 0b11)));
        assert_eq!(wedge(0b01, 0b01), None);
    }

    #[test]
    fn vector_wedge_is_alternating() {
        let r = 3;
        let n = vec![q(1), q(2), q(-1)];
        let m = vec![q(0), q(1), q(3)];
        let nm = wedge_vectors(&[n.clone(), m.clone()], r);
        let mn = wedge_vectors(&[m, n.clone()], r);
        assert_eq!(nm, mn.neg());
        assert!(wedge_vectors(&[n.clone(), n], r).is_zero());
    }

    #[test]
    fn induced_dimension_doubles_per_complement_vector() {
        let r = 2;
        let ray = subalgebra_basis(&[vec![1, 0]], r);
        assert_eq!(ray.len(), 2);
        let comp = complement(&[vec![q(1), q(0)]], &standard_basis(r));
        let ind = induce(&ray, &comp, r);
        assert_eq!(ind.len(), 4);
        assert_eq!(crate::linalg::Echelon::from_vectors(&ind).dim(), 4);
    }
}
