//! Integer lattice utilities: primitive vectors, Hermite normal form,
//! saturated sublattices and orientation signs.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{dense_det, dense_nullspace, dense_solve, q, sign_of, Q};

pub type IVec = Vec<i64>;

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IVec {
    let g = gcd_vec(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn integer_primitive(v: &[Q]) -> IVec {
    let mut l = num_bigint::BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<i64> = v
        .iter()
        .map(|x| {
            let y = x * Q::from_integer(l.clone());
            i64::try_from(y.to_integer()).expect("lattice coordinate overflow")
        })
        .collect();
    primitive(&ints)
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The output rows form a basis; pivots are strictly increasing columns,
/// pivot entries are positive, and entries above a pivot lie in `[0, pivot)`.
pub fn hnf(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out_rows: Vec<Vec<i128>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..ncols {
        // gather rows (not yet used) with a nonzero entry in this column
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            // pick the row with smallest absolute entry and reduce others
            let best = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            for &i in &nz {
                if i == best {
                    continue;
                }
                let f = m[i][col].div_euclid(m[best][col]);
                let (a, b) = (m[i].clone(), m[best].clone());
                m[i] = a.iter().zip(&b).map(|(x, y)| x - f * y).collect();
            }
        }
        if let Some(i) = (0..m.len()).find(|&i| m[i][col] != 0) {
            let mut row = m.remove(i);
            if row[col] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            out_rows.push(row);
            pivots.push(col);
        }
    }
    // reduce entries above pivots
    for k in 0..out_rows.len() {
        let (pc, pv) = (pivots[k], out_rows[k][pivots[k]]);
        for i in 0..k {
            let f = out_rows[i][pc].div_euclid(pv);
            if f != 0 {
                let pr = out_rows[k].clone();
                out_rows[i].iter_mut().zip(&pr).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    out_rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("HNF entry overflow")).collect())
        .collect()
}

/// Integer vectors `x` with `eqs · x = 0`: a Z-basis of the kernel lattice.
pub fn integer_kernel(eqs: &[IVec], n: usize) -> Vec<IVec> {
    // Augmented rows (eqs^T row i | e_i); unimodular row operations on the
    // first block leave kernel vectors in the second block.
    let m = eqs.len();
    let mut rows: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut r: Vec<i128> = eqs.iter().map(|e| e[i] as i128).collect();
            r.extend((0..n).map(|k| if k == i { 1 } else { 0 }));
            r
        })
        .collect();
    let mut done = 0usize;
    for col in 0..m {
        loop {
            let nz: Vec<usize> = (done..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    rows.swap(done, i);
                    done += 1;
                }
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i == best {
                    continue;
                }
                let f = rows[i][col].div_euclid(rows[best][col]);
                let b = rows[best].clone();
                rows[i].iter_mut().zip(&b).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    rows[done..]
        .iter()
        .map(|r| r[m..].iter().map(|&x| i64::try_from(x).expect("kernel entry overflow")).collect())
        .collect()
}

/// Integer equations (primitive rows) cutting out the rational span of `vs`.
pub fn span_equations(vs: &[IVec], n: usize) -> Vec<IVec> {
    let rows: Vec<Vec<Q>> = vs.iter().map(|v| to_q(v)).collect();
    dense_nullspace(&rows, n).iter().map(|v| integer_primitive(v)).collect()
}

/// Canonical (HNF) basis of the saturated lattice `Z^n ∩ span(vs)`.
pub fn saturation_basis(vs: &[IVec], n: usize) -> Vec<IVec> {
    let eqs = span_equations(vs, n);
    if eqs.is_empty() {
        return hnf(&(0..n).map(|i| unit(n, i)).collect::<Vec<_>>(), n);
    }
    let ker = integer_kernel(&eqs, n);
    hnf(&ker, n)
}

pub fn unit(n: usize, i: usize) -> IVec {
    (0..n).map(|k| if k == i { 1 } else { 0 }).collect()
}

/// Rational rank of a set of integer vectors.
pub fn rank(vs: &[IVec]) -> usize {
    crate::linalg::dense_rank(&vs.iter().map(|v| to_q(v)).collect::<Vec<_>>())
}

/// Coordinates of `v` in the basis `basis` (which must span a space containing `v`).
pub fn coordinates(basis: &[IVec], v: &[Q]) -> Option<Vec<Q>> {
    let b: Vec<Vec<Q>> = basis.iter().map(|x| to_q(x)).collect();
    dense_solve(&b, v)
}

/// Sign of the wedge `v_1 ∧ … ∧ v_k` relative to `b_1 ∧ … ∧ b_k`, where the
/// `v_i` lie in the span of the basis `b`. Zero if the `v_i` are dependent.
pub fn orientation_sign(basis: &[IVec], vs: &[Vec<Q>]) -> i32 {
    assert_eq!(basis.len(), vs.len(), "orientation needs a square system");
    if vs.is_empty() {
        return 1;
    }
    let coords: Vec<Vec<Q>> = vs
        .iter()
        .map(|v| coordinates(basis, v).expect("vector outside the lattice span"))
        .collect();
    sign_of(&dense_det(&coords))
}

/// Rational determinant coefficient of `vs` in terms of basis `b`.
pub fn wedge_coefficient(basis: &[IVec], vs: &[Vec<Q>]) -> Q {
    if vs.is_empty() {
        return q(1);
    }
    let coords: Vec<Vec<Q>> = vs
        .iter()
        .map(|v| coordinates(basis, v).expect("vector outside the lattice span"))
        .collect();
    dense_det(&coords)
}

/// True if the integer vector is in the rational span of `vs`.
pub fn in_span(vs: &[IVec], v: &[i64]) -> bool {
    let mut all = vs.to_vec();
    let before = rank(&all);
    all.push(v.to_vec());
    rank(&all) == before
}

pub fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_max(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_full_lattice_is_identity() {
        let b = saturation_basis(&[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1]], 3);
        assert_eq!(b, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn saturation_of_non_primitive_span() {
        // span of (2,0) and (0,2) saturates to Z^2
        let b = saturation_basis(&[vec![2, 2, 0]], 3);
        assert_eq!(b, vec![vec![1, 1, 0]]);
        let b = saturation_basis(&[vec![1, 1, 0], vec![1, -1, 0]], 3);
        assert_eq!(b, vec![vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let h = hnf(&[vec![2, 3], vec![0, 5]], 2);
        assert_eq!(h.len(), 2);
        assert!(h[0][0] > 0 && h[1][1] > 0);
        assert!(h[0][1] >= 0 && h[0][1] < h[1][1]);
        assert_eq!(h[0][0] * h[1][1], 10);
    }

    #[test]
    fn kernel_of_plane_equation() {
        let k = integer_kernel(&[vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(v, &[1, 1, 1]), 0);
        }
        // index one: the HNF of the kernel has unit pivots
        let h = hnf(&k, 3);
        assert_eq!(h, vec![vec![1, 0, -1], vec![0, 1, -1]]);
    }

    #[test]
    fn orientation_of_swapped_basis() {
        let b = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(orientation_sign(&b, &[to_q(&[0, 1]), to_q(&[1, 0])]), -1);
        assert_eq!(orientation_sign(&b, &[to_q(&[1, 1]), to_q(&[0, 1])]), 1);
    }
}
