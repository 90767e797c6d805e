//! Exact rational linear algebra: sparse vectors, incremental echelon forms,
//! ranks, kernels and quotient coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational number as -1, 0 or 1.
pub fn sign_of(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SVec {
    entries: Vec<(usize, Q)>,
}

impl SVec {
    pub fn zero() -> Self {
        SVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SVec { entries: vec![(i, Q::one())] }
    }

    /// Builds a vector from arbitrary pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in pairs {
            if c.is_zero() {
                continue;
            }
            let slot = acc.entry(i).or_insert_with(Q::zero);
            *slot += c;
        }
        SVec::from_map(acc)
    }

    pub fn from_map(map: BTreeMap<usize, Q>) -> Self {
        SVec { entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(values: &[Q]) -> Self {
        SVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(k, _)| *k) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Q) -> SVec {
        if c.is_zero() {
            return SVec::zero();
        }
        SVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SVec {
        SVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Q, other: &SVec) -> SVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    let v = &self.entries[a].1 + c * &other.entries[b].1;
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(y)) => {
                    out.push((y, c * &other.entries[b].1));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SVec { entries: out }
    }

    pub fn add(&self, other: &SVec) -> SVec {
        self.add_scaled(&Q::one(), other)
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        self.add_scaled(&-Q::one(), other)
    }

    pub fn dot(&self, other: &SVec) -> Q {
        let mut acc = Q::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ib) = (self.entries[a].0, other.entries[b].0);
            if ia == ib {
                acc += &self.entries[a].1 * &other.entries[b].1;
                a += 1;
                b += 1;
            } else if ia < ib {
                a += 1;
            } else {
                b += 1;
            }
        }
        acc
    }

    /// Re-index entries through `f`; entries mapped to `None` are dropped.
    pub fn reindex<F: Fn(usize) -> Option<usize>>(&self, f: F) -> SVec {
        SVec::from_pairs(self.entries.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))))
    }

    /// Leading coefficient normalised to one.
    pub fn normalized(&self) -> SVec {
        match self.leading() {
            None => SVec::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }
}

/// Reduce `v` against echelon rows (pivot -> row, each row normalised with
/// pivot coefficient one and supported on indices >= pivot). Returns the
/// residual (no entries at pivot positions) and the multiple of each row used.
fn reduce_rows(rows: &BTreeMap<usize, SVec>, v: &SVec) -> (SVec, Vec<(usize, Q)>) {
    if rows.is_empty() {
        return (v.clone(), Vec::new());
    }
    let mut acc: BTreeMap<usize, Q> = v.iter().cloned().collect();
    let mut out = Vec::new();
    let mut used = Vec::new();
    while let Some((i, c)) = acc.pop_first() {
        if let Some(row) = rows.get(&i) {
            for (k, val) in row.iter().skip(1) {
                let delta = &c * val;
                match acc.get_mut(k) {
                    Some(slot) => {
                        *slot -= delta;
                        if slot.is_zero() {
                            acc.remove(k);
                        }
                    }
                    None => {
                        acc.insert(*k, -delta);
                    }
                }
            }
            used.push((i, c));
        } else {
            out.push((i, c));
        }
    }
    (SVec { entries: out }, used)
}

/// An incrementally built echelon basis of a subspace of `Q^n`.
///
/// Rows are never modified after insertion, so the rows created by the
/// first `k` successful insertions span exactly the span of those vectors.
/// Optionally tracks how every row is expressed in the inserted vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SVec>,
    combos: Option<BTreeMap<usize, SVec>>,
    order: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// An echelon that remembers row combinations (needed for kernels and
    /// coefficient recovery).
    pub fn tracked() -> Self {
        Echelon { combos: Some(BTreeMap::new()), ..Self::default() }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a SVec>>(vs: I) -> Self {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Inserts `v`; returns the new row's pivot if `v` was independent.
    /// With tracking, the label of the insertion is its position among the
    /// successful insertions.
    pub fn insert(&mut self, v: &SVec) -> Option<usize> {
        let (r, used) = reduce_rows(&self.rows, v);
        let (p, lead) = match r.leading() {
            None => return None,
            Some((p, c)) => (p, c.clone()),
        };
        let inv = lead.recip();
        if let Some(combos) = self.combos.as_mut() {
            let label = self.order.len();
            // r = v - sum(c_i * row_i)
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            acc.insert(label, Q::one());
            for (piv, c) in &used {
                for (k, val) in combos[piv].iter() {
                    let slot = acc.entry(*k).or_insert_with(Q::zero);
                    *slot -= c * val;
                }
            }
            combos.insert(p, SVec::from_map(acc).scale(&inv));
        }
        self.rows.insert(p, r.scale(&inv));
        self.order.push(p);
        Some(p)
    }

    pub fn contains(&self, v: &SVec) -> bool {
        reduce_rows(&self.rows, v).0.is_zero()
    }

    pub fn reduce(&self, v: &SVec) -> SVec {
        reduce_rows(&self.rows, v).0
    }

    /// Residual and the multiple of each row (by pivot) used:
    /// `v = residual + sum m_p * row_p`.
    pub fn multipliers(&self, v: &SVec) -> (SVec, Vec<(usize, Q)>) {
        reduce_rows(&self.rows, v)
    }

    /// Expresses `v` in the inserted (independent) vectors: returns the
    /// residual and a coefficient vector over insertion labels. Requires a
    /// tracked echelon.
    pub fn decompose(&self, v: &SVec) -> (SVec, SVec) {
        let combos = self.combos.as_ref().expect("decompose needs a tracked echelon");
        let (r, used) = reduce_rows(&self.rows, v);
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (piv, c) in &used {
            for (k, val) in combos[piv].iter() {
                let slot = acc.entry(*k).or_insert_with(Q::zero);
                *slot += c * val;
            }
        }
        (r, SVec::from_map(acc))
    }

    pub fn row(&self, pivot: usize) -> Option<&SVec> {
        self.rows.get(&pivot)
    }

    /// Rows in insertion order.
    pub fn rows(&self) -> impl Iterator<Item = &SVec> + '_ {
        self.order.iter().map(move |p| &self.rows[p])
    }

    /// Pivots in insertion order.
    pub fn insertion_pivots(&self) -> &[usize] {
        &self.order
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn contains_space(&self, other: &Echelon) -> bool {
        other.rows().all(|v| self.contains(v))
    }

    pub fn same_space(&self, other: &Echelon) -> bool {
        self.dim() == other.dim() && self.contains_space(other)
    }
}

/// A quotient `V/K` of two nested subspaces, with coordinates.
///
/// `K` is inserted first, then `V`; the rows created by `V` form a basis
/// of the quotient and the coordinates of an element of `V` are the
/// multiples of those rows in its reduction.
#[derive(Clone, Debug, Default)]
pub struct Subquotient {
    ech: Echelon,
    sub_dim: usize,
    coord_pivots: Vec<usize>,
    coord_of: BTreeMap<usize, usize>,
}

impl Subquotient {
    pub fn new<'a, I, J>(sub: I, total: J) -> Self
    where
        I: IntoIterator<Item = &'a SVec>,
        J: IntoIterator<Item = &'a SVec>,
    {
        let mut ech = Echelon::new();
        for v in sub {
            ech.insert(v);
        }
        let sub_dim = ech.dim();
        let mut coord_pivots = Vec::new();
        for v in total {
            if let Some(p) = ech.insert(v) {
                coord_pivots.push(p);
            }
        }
        let coord_of = coord_pivots.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        Subquotient { ech, sub_dim, coord_pivots, coord_of }
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.coord_pivots.len()
    }

    pub fn sub_dim(&self) -> usize {
        self.sub_dim
    }

    /// Representative of the `k`-th quotient basis vector.
    pub fn representative(&self, k: usize) -> &SVec {
        self.ech.row(self.coord_pivots[k]).unwrap()
    }

    /// Coordinates of `v` modulo the subspace; `None` if `v` is outside the
    /// total space.
    pub fn coordinates(&self, v: &SVec) -> Option<SVec> {
        let (res, used) = self.ech.multipliers(v);
        if !res.is_zero() {
            return None;
        }
        Some(SVec::from_pairs(used.into_iter().filter_map(|(p, c)| self.coord_of.get(&p).map(|k| (*k, c)))))
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.ech.contains(v)
    }

    /// True if `v` lies in the subspace being divided out.
    pub fn is_trivial(&self, v: &SVec) -> bool {
        match self.coordinates(v) {
            Some(c) => c.is_zero(),
            None => false,
        }
    }
}

/// A sparse matrix stored by columns; column `k` is the image of basis vector `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<SVec>,
}

impl Matrix {
    pub fn new(rows: usize, cols: Vec<SVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|m| m < rows)));
        Matrix { rows, cols }
    }

    pub fn zero(rows: usize, ncols: usize) -> Self {
        Matrix { rows, cols: vec![SVec::zero(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: (0..n).map(SVec::unit).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (k, c) in v.iter() {
            for (i, a) in self.cols[*k].iter() {
                let slot = acc.entry(*i).or_insert_with(Q::zero);
                *slot += c * a;
            }
        }
        SVec::from_map(acc)
    }

    /// `self * other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix> {
        if other.rows != self.ncols() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), found: other.rows });
        }
        Ok(Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.cols {
            e.insert(c);
        }
        e.dim()
    }

    /// Rank computed after permuting columns; used as a cross-check of the
    /// elimination order independence.
    pub fn rank_permuted(&self, perm: &[usize]) -> usize {
        let mut e = Echelon::new();
        for &k in perm {
            e.insert(&self.cols[k]);
        }
        e.dim()
    }

    /// A basis of the kernel, as vectors in the source space.
    pub fn kernel(&self) -> Vec<SVec> {
        let mut e = Echelon::tracked();
        let mut labels = Vec::new();
        let mut out = Vec::new();
        for (k, c) in self.cols.iter().enumerate() {
            match e.insert(c) {
                Some(_) => labels.push(k),
                None => {
                    let (_, combo) = e.decompose(c);
                    // c = sum combo_l * col(labels[l]); kernel vector e_k - sum ...
                    let mut pairs = vec![(k, Q::one())];
                    for (l, a) in combo.iter() {
                        pairs.push((labels[*l], -a.clone()));
                    }
                    out.push(SVec::from_pairs(pairs));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (k, c) in self.cols.iter().enumerate() {
            for (i, a) in c.iter() {
                cols[*i].push((k, a.clone()));
            }
        }
        Matrix { rows: self.ncols(), cols: cols.into_iter().map(SVec::from_pairs).collect() }
    }
}

/// Rank of a small dense rational matrix given by rows.
pub fn dense_rank(rows: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(&SVec::from_dense(r));
    }
    e.dim()
}

/// Kernel of a small dense matrix `rows * x = 0`, with `n` columns.
pub fn dense_nullspace(rows: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let m = Matrix::new(rows.len(), (0..n).map(|k| SVec::from_pairs(rows.iter().enumerate().map(|(i, r)| (i, r[k].clone())))).collect());
    m.kernel().into_iter().map(|v| v.to_dense(n)).collect()
}

/// Determinant of a small square dense rational matrix.
pub fn dense_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for k in col..n {
                let t = &f * &a[col][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Coordinates of `v` in the basis `basis` (rows), if `v` lies in their span.
pub fn dense_solve(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let mut e = Echelon::tracked();
    let mut labels = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        if e.insert(&SVec::from_dense(b)).is_some() {
            labels.push(k);
        }
    }
    let (res, combo) = e.decompose(&SVec::from_dense(v));
    if !res.is_zero() {
        return None;
    }
    let mut out = vec![Q::zero(); basis.len()];
    for (l, c) in combo.iter() {
        out[labels[*l]] = c.clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(usize, i64)]) -> SVec {
        SVec::from_pairs(pairs.iter().map(|&(i, c)| (i, q(c))))
    }

    #[test]
    fn identity_has_full_rank() {
        for n in 0..6 {
            assert_eq!(Matrix::identity(n).rank(), n);
        }
    }

    #[test]
    fn quotient_of_plane_by_diagonal_is_a_line() {
        let diag = sv(&[(0, 1), (1, 1)]);
        let (e0, e1) = (SVec::unit(0), SVec::unit(1));
        let sq = Subquotient::new([&diag], [&e0, &e1]);
        assert_eq!(sq.dim(), 1);
        // e0 and -e1 agree modulo the diagonal
        let a = sq.coordinates(&e0).unwrap();
        let b = sq.coordinates(&e1.neg()).unwrap();
        assert_eq!(a, b);
        assert!(sq.is_trivial(&diag.scale(&q(3))));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = Matrix::new(2, vec![sv(&[(0, 1)]), sv(&[(1, 1)]), sv(&[(0, 1), (1, 1)]), sv(&[(0, 2)])]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn decompose_recovers_coefficients() {
        let a = sv(&[(0, 1), (2, 3)]);
        let b = sv(&[(1, 2), (2, -1)]);
        let mut e = Echelon::tracked();
        e.insert(&a);
        e.insert(&b);
        let v = a.scale(&q(5)).add(&b.scale(&q_frac(-1, 2)));
        let (res, combo) = e.decompose(&v);
        assert!(res.is_zero());
        assert_eq!(combo.get(0), q(5));
        assert_eq!(combo.get(1), q_frac(-1, 2));
    }

    #[test]
    fn determinant_of_permutation() {
        let m = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(dense_det(&m), q(-1));
    }
}
