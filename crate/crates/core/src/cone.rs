//! Rational polyhedral cones given by primitive integer rays.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, dot, primitive, to_q, IVec};
use crate::linalg::{dense_nullspace, Q};

/// A strongly convex rational polyhedral cone.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Cone {
    pub rank: usize,
    /// Extremal primitive rays, in input order.
    pub rays: Vec<IVec>,
    pub dim: usize,
    /// HNF basis of `N(σ) = N ∩ (σ + (−σ))`; its wedge is the canonical
    /// generator of `det(σ)`.
    pub span_basis: Vec<IVec>,
    /// Integer equations of the linear span.
    pub equations: Vec<IVec>,
    /// Inward facet normals, chosen inside the span and primitive.
    pub facet_normals: Vec<IVec>,
    /// Ray indices (into `rays`) of each facet, aligned with `facet_normals`.
    pub facets: Vec<Vec<usize>>,
}

/// Facets of the cone spanned by `rays[idx]`, as (normal, subset of idx).
/// Returns `None` if the cone contains a line.
fn facets_of(rays: &[IVec], idx: &[usize], n: usize) -> Option<(Vec<(IVec, Vec<usize>)>, Vec<IVec>)> {
    let sub: Vec<IVec> = idx.iter().map(|&i| rays[i].clone()).collect();
    let d = lattice::rank(&sub);
    let eqs = lattice::span_equations(&sub, n);
    if d == 0 {
        return Some((Vec::new(), eqs));
    }
    let mut found: Vec<(IVec, Vec<usize>)> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for subset in idx.iter().copied().combinations(d - 1) {
        let rows: Vec<IVec> = subset.iter().map(|&i| rays[i].clone()).collect();
        if lattice::rank(&rows) != d - 1 {
            continue;
        }
        let mut system: Vec<Vec<Q>> = rows.iter().map(|r| to_q(r)).collect();
        system.extend(eqs.iter().map(|e| to_q(e)));
        let null = dense_nullspace(&system, n);
        if null.len() != 1 {
            continue;
        }
        let mut u = lattice::integer_primitive(&null[0]);
        let vals: Vec<i64> = idx.iter().map(|&i| dot(&u, &rays[i])).collect();
        let pos = vals.iter().any(|&v| v > 0);
        let neg = vals.iter().any(|&v| v < 0);
        if pos && neg {
            continue;
        }
        if neg {
            u.iter_mut().for_each(|x| *x = -*x);
        }
        let on: Vec<usize> = idx.iter().copied().zip(&vals).filter(|(_, &v)| v == 0).map(|(i, _)| i).collect();
        if seen.insert(on.clone()) {
            found.push((u, on));
        }
    }
    // pointedness: facet normals and equations must span the dual space
    let mut all: Vec<IVec> = found.iter().map(|(u, _)| u.clone()).collect();
    all.extend(eqs.iter().cloned());
    if lattice::rank(&all) != n {
        return None;
    }
    Some((found, eqs))
}

/// Extremal rays among `idx`: those whose minimal face is one-dimensional.
fn extremal(idx: &[usize], facets: &[(IVec, Vec<usize>)], eqs: &[IVec], n: usize) -> Vec<usize> {
    idx.iter()
        .copied()
        .filter(|&i| {
            let mut active: Vec<IVec> = facets.iter().filter(|(_, s)| s.contains(&i)).map(|(u, _)| u.clone()).collect();
            active.extend(eqs.iter().cloned());
            lattice::rank(&active) == n - 1
        })
        .collect()
}

impl Cone {
    /// Builds the cone generated by `rays` in `Z^rank`. Rays are made
    /// primitive; repeated and non-extremal generators are dropped.
    pub fn from_rays(rank: usize, rays: &[IVec]) -> Result<Cone> {
        let mut prim: Vec<IVec> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::RayLength { index: i, expected: rank, found: r.len() });
            }
            if lattice::is_zero(r) {
                return Err(Error::ZeroRay(i));
            }
            let p = primitive(r);
            if !prim.contains(&p) {
                prim.push(p);
            }
        }
        let idx: Vec<usize> = (0..prim.len()).collect();
        let (facets, eqs) = facets_of(&prim, &idx, rank).ok_or_else(|| Error::NotStronglyConvex { rays: prim.clone() })?;
        let keep = if prim.len() <= 1 { idx.clone() } else { extremal(&idx, &facets, &eqs, rank) };
        if keep.len() != prim.len() {
            let kept: Vec<IVec> = keep.iter().map(|&i| prim[i].clone()).collect();
            return Cone::from_rays(rank, &kept);
        }
        let span_basis = lattice::saturation_basis(&prim, rank);
        let dim = span_basis.len();
        Ok(Cone {
            rank,
            dim,
            span_basis,
            equations: eqs,
            facet_normals: facets.iter().map(|(u, _)| u.clone()).collect(),
            facets: facets.into_iter().map(|(_, s)| s).collect(),
            rays: prim,
        })
    }

    pub fn zero(rank: usize) -> Cone {
        Cone::from_rays(rank, &[]).expect("zero cone")
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// All faces as subsets of ray indices, including the empty set (zero
    /// cone) and the full set, sorted by (size, indices).
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = vec![(0..self.rays.len()).collect()];
        while let Some(s) = stack.pop() {
            if !out.insert(s.clone()) {
                continue;
            }
            if s.is_empty() {
                continue;
            }
            let (fs, _) = facets_of(&self.rays, &s, self.rank).expect("faces of a pointed cone are pointed");
            if fs.is_empty() {
                stack.push(Vec::new());
            }
            for (_, f) in fs {
                stack.push(f);
            }
        }
        let mut v: Vec<Vec<usize>> = out.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }

    /// All faces as cones.
    pub fn faces(&self) -> Vec<Cone> {
        self.face_ray_sets()
            .into_iter()
            .map(|s| {
                let rs: Vec<IVec> = s.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_rays(self.rank, &rs).expect("face of a valid cone")
            })
            .collect()
    }

    /// Sum of the primitive rays: a lattice point in the relative interior.
    pub fn barycenter(&self) -> IVec {
        let mut a = vec![0i64; self.rank];
        for r in &self.rays {
            for (x, y) in a.iter_mut().zip(r) {
                *x += y;
            }
        }
        a
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let zero = Q::from_integer(0.into());
        self.equations.iter().all(|e| dot_q(e, x) == zero) && self.facet_normals.iter().all(|u| dot_q(u, x) >= zero)
    }

    /// True if `x` is in the relative interior.
    pub fn contains_in_relative_interior(&self, x: &[Q]) -> bool {
        let zero = Q::from_integer(0.into());
        self.equations.iter().all(|e| dot_q(e, x) == zero) && self.facet_normals.iter().all(|u| dot_q(u, x) > zero)
    }

    pub fn contains_lattice(&self, x: &[i64]) -> bool {
        self.contains(&to_q(x))
    }
}

pub fn dot_q(a: &[i64], x: &[Q]) -> Q {
    let mut acc = Q::from_integer(0.into());
    for (u, v) in a.iter().zip(x) {
        acc += v * Q::from_integer((*u).into());
    }
    acc
}

/// Incidence sign `ε(σ, τ)` for a codimension-one face pair: the sign of
/// `u ∧ det(σ)` relative to `det(τ)` for any ray `u` of `τ` not in `σ`.
pub fn incidence_sign(sigma: &Cone, tau: &Cone) -> Result<i32> {
    if tau.dim != sigma.dim + 1 {
        return Err(Error::NotCodimOneFace);
    }
    if !sigma.rays.iter().all(|r| tau.rays.contains(r)) {
        return Err(Error::NotCodimOneFace);
    }
    let u = tau.rays.iter().find(|r| !sigma.rays.contains(r)).ok_or(Error::NotCodimOneFace)?;
    let mut vs: Vec<Vec<Q>> = vec![to_q(u)];
    vs.extend(sigma.span_basis.iter().map(|b| to_q(b)));
    let s = lattice::orientation_sign(&tau.span_basis, &vs);
    if s == 0 {
        return Err(Error::NotCodimOneFace);
    }
    Ok(s)
}
