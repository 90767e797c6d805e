//! Fans: face-closed families of cones, stars, intervals, quotients,
//! subdivisions and perversities.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::cone::{dot_q, Cone};
use crate::error::{Error, Result};
use crate::lattice::{self, dot, primitive, to_q, IVec};
use crate::linalg::{dense_nullspace, q, Q};

#[derive(Clone, Debug, Serialize)]
pub struct FanCone {
    /// Sorted indices into the fan's ray list.
    pub ray_ids: Vec<usize>,
    pub cone: Cone,
}

/// A finite fan. Cones are indexed by position in `(dim, ray ids)` order, so
/// every face of a cone has a smaller index and index 0 is the zero cone.
#[derive(Clone, Debug, Serialize)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<IVec>,
    cones: Vec<FanCone>,
    #[serde(skip)]
    index: HashMap<Vec<usize>, usize>,
    faces: Vec<Vec<usize>>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<usize>>,
    pub name: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    /// `F[η, π]`
    Closed,
    /// `F(η, π)`
    Open,
    /// `F[η, π)`
    HalfOpen,
    /// `F(η, π]`
    LeftOpen,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Primitive generators of the extreme rays of `a ∩ b`.
fn intersection_extreme_rays(a: &Cone, b: &Cone, n: usize) -> Vec<IVec> {
    let eqs: Vec<IVec> = a.equations.iter().chain(&b.equations).cloned().collect();
    let ineqs: Vec<IVec> = a.facet_normals.iter().chain(&b.facet_normals).cloned().collect();
    let e = lattice::rank(&eqs);
    if e >= n {
        return Vec::new();
    }
    let k = n - 1 - e;
    let feasible = |v: &IVec| ineqs.iter().all(|u| dot(u, v) >= 0) && eqs.iter().all(|u| dot(u, v) == 0);
    let mut out: BTreeSet<IVec> = BTreeSet::new();
    for subset in (0..ineqs.len()).combinations(k) {
        let mut sys: Vec<Vec<Q>> = eqs.iter().map(|x| to_q(x)).collect();
        sys.extend(subset.iter().map(|&i| to_q(&ineqs[i])));
        let null = dense_nullspace(&sys, n);
        if null.len() != 1 {
            continue;
        }
        let v = lattice::integer_primitive(&null[0]);
        let w: IVec = v.iter().map(|x| -x).collect();
        for cand in [v, w] {
            if feasible(&cand) {
                out.insert(cand);
            }
        }
    }
    out.into_iter().collect()
}

impl Fan {
    /// Builds the fan generated by the listed cones (given as ray index
    /// sets) and validates that maximal cones meet in common faces.
    pub fn new(rank: usize, rays: Vec<IVec>, cones: &[Vec<usize>]) -> Result<Fan> {
        Fan::build(rank, rays, cones, true)
    }

    /// Like [`Fan::new`] but skips the pairwise intersection test; used for
    /// fans produced by constructions that are fans by design.
    pub fn from_cones_trusted(rank: usize, rays: Vec<IVec>, cones: &[Vec<usize>]) -> Result<Fan> {
        Fan::build(rank, rays, cones, false)
    }

    fn build(rank: usize, rays: Vec<IVec>, cones: &[Vec<usize>], validate: bool) -> Result<Fan> {
        let mut prim: Vec<IVec> = Vec::with_capacity(rays.len());
        let mut lookup: HashMap<IVec, usize> = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::RayLength { index: i, expected: rank, found: r.len() });
            }
            if lattice::is_zero(r) {
                return Err(Error::ZeroRay(i));
            }
            let p = primitive(r);
            if lookup.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicateRay(i));
            }
            prim.push(p);
        }
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        let mut generated: Vec<(Vec<usize>, Cone)> = Vec::new();
        for (ci, ids) in cones.iter().enumerate() {
            if let Some(&bad) = ids.iter().find(|&&r| r >= prim.len()) {
                return Err(Error::UnknownRay { cone: ci, ray: bad });
            }
            let gens: Vec<IVec> = ids.iter().map(|&r| prim[r].clone()).collect();
            let cone = Cone::from_rays(rank, &gens)?;
            let global = |local: &[usize]| -> Vec<usize> {
                let mut v: Vec<usize> = local.iter().map(|&k| lookup[&cone.rays[k]]).collect();
                v.sort_unstable();
                v
            };
            for f in cone.face_ray_sets() {
                all.insert(global(&f));
            }
            let own = global(&(0..cone.rays.len()).collect::<Vec<_>>());
            generated.push((own, cone));
        }
        if validate {
            // pairwise: σ ∩ τ must be the cone on the common rays, which must
            // be a face of both
            for (i, j) in (0..generated.len()).tuple_combinations() {
                let (a_ids, a) = &generated[i];
                let (b_ids, b) = &generated[j];
                let common: Vec<usize> = a_ids.iter().filter(|x| b_ids.contains(x)).copied().collect();
                let err = || Error::NotAFan { a: a_ids.clone(), b: b_ids.clone() };
                let is_face_of = |ids: &[usize], c: &Cone| {
                    c.face_ray_sets().iter().any(|f| {
                        let mut g: Vec<usize> = f.iter().map(|&k| lookup[&c.rays[k]]).collect();
                        g.sort_unstable();
                        g == ids
                    })
                };
                if !is_face_of(&common, a) || !is_face_of(&common, b) {
                    return Err(err());
                }
                for v in intersection_extreme_rays(a, b, rank) {
                    match lookup.get(&v) {
                        Some(id) if common.contains(id) => {}
                        _ => return Err(err()),
                    }
                }
            }
        }
        let mut list: Vec<FanCone> = all
            .into_iter()
            .map(|ids| {
                let gens: Vec<IVec> = ids.iter().map(|&r| prim[r].clone()).collect();
                let cone = Cone::from_rays(rank, &gens).expect("faces of valid cones are valid");
                FanCone { ray_ids: ids, cone }
            })
            .collect();
        list.sort_by(|x, y| x.cone.dim.cmp(&y.cone.dim).then_with(|| x.ray_ids.cmp(&y.ray_ids)));
        Ok(Fan::assemble(rank, prim, list))
    }

    fn assemble(rank: usize, rays: Vec<IVec>, cones: Vec<FanCone>) -> Fan {
        let index: HashMap<Vec<usize>, usize> = cones.iter().enumerate().map(|(i, c)| (c.ray_ids.clone(), i)).collect();
        let n = cones.len();
        let mut faces = vec![Vec::new(); n];
        let mut facets = vec![Vec::new(); n];
        let mut cofacets = vec![Vec::new(); n];
        for t in 0..n {
            for s in 0..=t {
                if cones[s].cone.dim <= cones[t].cone.dim && is_subset(&cones[s].ray_ids, &cones[t].ray_ids) {
                    faces[t].push(s);
                    if cones[s].cone.dim + 1 == cones[t].cone.dim {
                        facets[t].push(s);
                        cofacets[s].push(t);
                    }
                }
            }
        }
        Fan { rank, rays, cones, index, faces, facets, cofacets, name: None }
    }

    pub fn with_name(mut self, name: &str) -> Fan {
        self.name = Some(name.to_string());
        self
    }

    /// The fan `F(π)` of all faces of a cone.
    pub fn from_cone(pi: &Cone) -> Fan {
        let ids: Vec<usize> = (0..pi.rays.len()).collect();
        Fan::from_cones_trusted(pi.rank, pi.rays.clone(), &[ids]).expect("faces of a cone form a fan")
    }

    /// The boundary fan `F(π)∖{π}`.
    pub fn boundary_of(pi: &Cone) -> Fan {
        let full = Fan::from_cone(pi);
        let top = full.len() - 1;
        let keep: Vec<usize> = (0..top).collect();
        full.subfan(&keep).0
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i].cone
    }

    pub fn ray_ids(&self, i: usize) -> &[usize] {
        &self.cones[i].ray_ids
    }

    pub fn dim(&self, i: usize) -> usize {
        self.cones[i].cone.dim
    }

    pub fn find(&self, ray_ids: &[usize]) -> Option<usize> {
        let mut k = ray_ids.to_vec();
        k.sort_unstable();
        self.index.get(&k).copied()
    }

    /// Cone index of the one-dimensional cone of ray `r`.
    pub fn ray_cone(&self, r: usize) -> Option<usize> {
        self.find(&[r])
    }

    /// All faces including the cone itself and the zero cone, ascending.
    pub fn faces(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn proper_faces(&self, i: usize) -> &[usize] {
        let f = &self.faces[i];
        &f[..f.len() - 1]
    }

    pub fn facets(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    pub fn cofacets(&self, i: usize) -> &[usize] {
        &self.cofacets[i]
    }

    pub fn is_face(&self, s: usize, t: usize) -> bool {
        self.faces[t].binary_search(&s).is_ok()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cofacets[i].is_empty()).collect()
    }

    pub fn maximal_ray_sets(&self) -> Vec<Vec<usize>> {
        self.maximal().into_iter().map(|i| self.cones[i].ray_ids.clone()).collect()
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dim(i) == d).collect()
    }

    /// `f_k` = number of `k`-dimensional cones, for `k = 0..=rank`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.rank).map(|d| self.cones_of_dim(d).len()).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.cone.is_simplicial())
    }

    /// Completeness via facet pairing: all maximal cones are full-dimensional
    /// and every wall lies in exactly two of them.
    pub fn is_complete(&self) -> bool {
        if self.rank == 0 {
            return true;
        }
        let maxes = self.maximal();
        if maxes.iter().any(|&m| self.dim(m) != self.rank) {
            return false;
        }
        self.cones_of_dim(self.rank - 1).iter().all(|&w| self.cofacets[w].len() == 2)
    }

    /// Walls (codimension-one cones) lying in exactly one full-dimensional cone.
    pub fn boundary_walls(&self) -> Vec<usize> {
        if self.rank == 0 {
            return Vec::new();
        }
        self.cones_of_dim(self.rank - 1).into_iter().filter(|&w| self.cofacets[w].len() == 1).collect()
    }

    /// True if `x` lies in the support `|Δ|`.
    pub fn support_contains(&self, x: &[Q]) -> bool {
        self.maximal().iter().any(|&m| self.cone(m).contains(x))
    }

    /// The cone containing `x` in its relative interior, if any.
    pub fn carrier(&self, x: &[Q]) -> Option<usize> {
        (0..self.len()).find(|&i| self.cone(i).contains_in_relative_interior(x))
    }

    /// Cones having `η` as a face.
    pub fn star(&self, eta: usize) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.is_face(eta, s)).collect()
    }

    pub fn interval(&self, eta: usize, pi: usize, kind: IntervalKind) -> Result<Vec<usize>> {
        if !self.is_face(eta, pi) {
            return Err(Error::NotAFacePair);
        }
        Ok(self.faces[pi]
            .iter()
            .copied()
            .filter(|&s| self.is_face(eta, s))
            .filter(|&s| match kind {
                IntervalKind::Closed => true,
                IntervalKind::Open => s != eta && s != pi,
                IntervalKind::HalfOpen => s != pi,
                IntervalKind::LeftOpen => s != eta,
            })
            .collect())
    }

    /// The subfan on a face-closed set of cone indices; returns the new fan
    /// and, for each new cone index, the old index.
    pub fn subfan(&self, keep: &[usize]) -> (Fan, Vec<usize>) {
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        let used_rays: BTreeSet<usize> = keep.iter().flat_map(|&c| self.cones[c].ray_ids.iter().copied()).collect();
        let ray_map: BTreeMap<usize, usize> = used_rays.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let rays: Vec<IVec> = used_rays.iter().map(|&r| self.rays[r].clone()).collect();
        let mut list: Vec<(usize, FanCone)> = keep
            .iter()
            .map(|&c| {
                let ids: Vec<usize> = self.cones[c].ray_ids.iter().map(|r| ray_map[r]).collect();
                (c, FanCone { ray_ids: ids, cone: self.cones[c].cone.clone() })
            })
            .collect();
        list.sort_by(|x, y| x.1.cone.dim.cmp(&y.1.cone.dim).then_with(|| x.1.ray_ids.cmp(&y.1.ray_ids)));
        let old: Vec<usize> = list.iter().map(|(c, _)| *c).collect();
        let fan = Fan::assemble(self.rank, rays, list.into_iter().map(|(_, fc)| fc).collect());
        (fan, old)
    }

    /// True if the cone set is closed under taking faces.
    pub fn is_face_closed(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        set.iter().all(|&c| self.faces[c].iter().all(|f| s.contains(f)))
    }

    /// Locally star closed: `σ ≺ τ ≺ ρ` with `σ, ρ` in the set implies `τ` in it.
    pub fn is_locally_star_closed(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        for &a in set {
            for &c in set {
                if a != c && self.is_face(a, c) {
                    for &b in &self.faces[c] {
                        if self.is_face(a, b) && !s.contains(&b) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The quotient fan `Δ[η]` in `N/N(η)`.
    pub fn quotient(&self, eta: usize) -> QuotientFan {
        let e = self.cone(eta);
        let r_new = self.rank - e.dim;
        let projection: Vec<IVec> = if e.dim == 0 {
            (0..self.rank).map(|i| lattice::unit(self.rank, i)).collect()
        } else {
            let k = lattice::integer_kernel(&e.span_basis, self.rank);
            lattice::hnf(&k, self.rank)
        };
        let project = |v: &[i64]| -> IVec { projection.iter().map(|m| dot(m, v)).collect() };
        let star = self.star(eta);
        // rays of the quotient: one per cone τ with η a facet of τ
        let ray_cones: Vec<usize> = self.cofacets[eta].clone();
        let mut rays: Vec<IVec> = Vec::new();
        for &t in &ray_cones {
            let u = self.cones[t].ray_ids.iter().find(|r| !self.cones[eta].ray_ids.contains(r)).expect("cofacet has a new ray");
            rays.push(primitive(&project(&self.rays[*u])));
        }
        let ids_of = |s: usize| -> Vec<usize> {
            ray_cones.iter().enumerate().filter(|(_, &t)| self.is_face(t, s)).map(|(k, _)| k).collect()
        };
        let maxes: Vec<Vec<usize>> = star.iter().copied().filter(|&s| self.cofacets[s].is_empty()).map(ids_of).collect();
        let fan = if maxes.is_empty() {
            Fan::from_cones_trusted(r_new, rays, &[Vec::new()])
        } else {
            Fan::from_cones_trusted(r_new, rays, &maxes)
        }
        .expect("quotient of a fan is a fan");
        let map: Vec<(usize, usize)> = star.iter().map(|&s| (s, fan.find(&ids_of(s)).expect("star cone has an image"))).collect();
        QuotientFan { fan, projection, map }
    }

    /// The barycentric subdivision `Σ` with `a(ρ)` the sum of primitive rays.
    pub fn barycentric_subdivision(self: &Arc<Self>) -> Subdivision {
        let flags = crate::flags::all_flags(self);
        // ray k of Σ corresponds to cone k+1 of Δ
        let rays: Vec<IVec> = (1..self.len()).map(|c| primitive(&self.cone(c).barycenter())).collect();
        let maxes: Vec<Vec<usize>> = flags
            .iter()
            .filter(|a| {
                let last = *a.last().unwrap();
                self.cofacets[last].is_empty() && a.len() == self.dim(last)
            })
            .map(|a| a.iter().map(|c| c - 1).collect())
            .collect();
        let sigma = if maxes.is_empty() {
            Fan::from_cones_trusted(self.rank, rays, &[Vec::new()])
        } else {
            Fan::from_cones_trusted(self.rank, rays, &maxes)
        }
        .expect("barycentric subdivision is a fan");
        let mut cone_map = vec![0usize; sigma.len()];
        let mut flag_of = vec![Vec::new(); sigma.len()];
        for c in 1..sigma.len() {
            let flag: Vec<usize> = sigma.ray_ids(c).iter().map(|r| r + 1).collect();
            cone_map[c] = *flag.iter().max_by_key(|&&x| (self.dim(x), x)).unwrap();
            let mut f = flag.clone();
            f.sort_by_key(|&x| (self.dim(x), x));
            flag_of[c] = f;
        }
        Subdivision {
            source: Arc::new(sigma),
            target: Arc::clone(self),
            cone_map,
            flags: Some(flag_of),
        }
    }

    /// Given a full-dimensional cone `π`, returns the complete fan
    /// `Δ̃ = Δ ∪ {π}` with `Δ = (F(π)∖{π}) ∪ {γ+σ}` and `γ` the ray through `−a(π)`.
    pub fn complete_above_boundary(pi: &Cone) -> Result<AboveBoundary> {
        if pi.dim != pi.rank {
            return Err(Error::NotFullDimensional);
        }
        let gamma: IVec = primitive(&pi.barycenter().iter().map(|x| -x).collect::<Vec<_>>());
        let mut rays = pi.rays.clone();
        rays.push(gamma);
        let g = rays.len() - 1;
        let mut maxes: Vec<Vec<usize>> = vec![(0..pi.rays.len()).collect()];
        for f in &pi.facets {
            let mut m = f.clone();
            m.push(g);
            maxes.push(m);
        }
        let full = Fan::new(pi.rank, rays, &maxes)?;
        let pi_idx = full.find(&(0..pi.rays.len()).collect::<Vec<_>>()).expect("π is a cone of Δ̃");
        let keep: Vec<usize> = (0..full.len()).filter(|&c| c != pi_idx).collect();
        let (fan, old) = full.subfan(&keep);
        let gamma_full = full.ray_cone(g).expect("γ is a ray");
        let gamma_fan = old.iter().position(|&o| o == gamma_full).expect("γ survives");
        Ok(AboveBoundary { full, fan, pi: pi_idx, gamma_full, gamma: gamma_fan })
    }

    /// If the fan is `F(π)∖{π}` for a full-dimensional cone `π`, returns `π`.
    pub fn as_boundary_fan(&self) -> Option<Cone> {
        if self.rank == 0 || self.len() <= 1 {
            return None;
        }
        let all: Vec<IVec> = (0..self.rays.len()).map(|r| self.rays[r].clone()).collect();
        let pi = Cone::from_rays(self.rank, &all).ok()?;
        if pi.dim != self.rank || pi.rays.len() != all.len() {
            return None;
        }
        let b = Fan::boundary_of(&pi);
        if b.len() != self.len() {
            return None;
        }
        // same cones: compare as sets of primitive ray vectors
        let sets = |f: &Fan| -> BTreeSet<Vec<IVec>> {
            (0..f.len())
                .map(|c| {
                    let mut v: Vec<IVec> = f.ray_ids(c).iter().map(|&r| f.rays[r].clone()).collect();
                    v.sort();
                    v
                })
                .collect()
        };
        (sets(self) == sets(&b)).then_some(pi)
    }
}

/// Output of [`Fan::complete_above_boundary`].
#[derive(Clone, Debug)]
pub struct AboveBoundary {
    /// The complete fan `Δ̃`.
    pub full: Fan,
    /// `Δ = Δ̃ ∖ {π}`.
    pub fan: Fan,
    /// Index of `π` in `full`.
    pub pi: usize,
    /// Index of `γ` in `full`.
    pub gamma_full: usize,
    /// Index of `γ` in `fan`.
    pub gamma: usize,
}

/// The quotient fan `Δ[η]` together with the lattice projection and the
/// correspondence `σ ↦ σ[η]` on the star of `η`.
#[derive(Clone, Debug)]
pub struct QuotientFan {
    pub fan: Fan,
    /// Rows of the projection `N → N/N(η) ≅ Z^{r−r_η}` (a basis of `N(η)^⊥`).
    pub projection: Vec<IVec>,
    /// (star cone in Δ, cone in Δ[η]).
    pub map: Vec<(usize, usize)>,
}

impl QuotientFan {
    pub fn project(&self, v: &[i64]) -> IVec {
        self.projection.iter().map(|m| dot(m, v)).collect()
    }
}

/// A subdivision `f: Δ′ → Δ`.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub source: Arc<Fan>,
    pub target: Arc<Fan>,
    /// `cone_map[σ]` = minimal cone of the target containing `σ`.
    pub cone_map: Vec<usize>,
    /// For barycentric subdivisions: the flag (ascending cone indices of
    /// the target) of every source cone.
    pub flags: Option<Vec<Vec<usize>>>,
}

impl Subdivision {
    /// Derives the cone map from containment of relative-interior points,
    /// checking support equality on maximal cones.
    pub fn from_containment(source: Arc<Fan>, target: Arc<Fan>) -> Result<Subdivision> {
        if source.rank != target.rank {
            return Err(Error::FanMismatch);
        }
        let mut cone_map = Vec::with_capacity(source.len());
        for c in 0..source.len() {
            let x = to_q(&source.cone(c).barycenter());
            let f = target.carrier(&x).ok_or(Error::FanMismatch)?;
            cone_map.push(f);
        }
        for &m in &target.maximal() {
            let x = to_q(&target.cone(m).barycenter());
            if !source.support_contains(&x) {
                return Err(Error::FanMismatch);
            }
        }
        let sub = Subdivision { source, target, cone_map, flags: None };
        sub.validate()?;
        Ok(sub)
    }

    pub fn identity(fan: Arc<Fan>) -> Subdivision {
        let n = fan.len();
        Subdivision { source: Arc::clone(&fan), target: fan, cone_map: (0..n).collect(), flags: None }
    }

    /// Checks `σ ∩ relint f(σ) ≠ ∅` and monotonicity of `f`.
    pub fn validate(&self) -> Result<()> {
        for s in 0..self.source.len() {
            let x = to_q(&self.source.cone(s).barycenter());
            if !self.target.cone(self.cone_map[s]).contains_in_relative_interior(&x) {
                return Err(Error::FanMismatch);
            }
            for &t in self.source.faces(s) {
                if !self.target.is_face(self.cone_map[t], self.cone_map[s]) {
                    return Err(Error::FanMismatch);
                }
            }
        }
        Ok(())
    }

    /// `f^{-1}(ρ)`.
    pub fn fiber(&self, rho: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&s| self.cone_map[s] == rho).collect()
    }
}

/// A perversity `p: Δ∖{0} → Z`, stored per cone index (entry 0 unused).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Perversity {
    pub values: Vec<i64>,
}

impl Perversity {
    pub fn from_fn<F: Fn(usize) -> i64>(fan: &Fan, f: F) -> Perversity {
        Perversity { values: (0..fan.len()).map(|c| if c == 0 { 0 } else { f(c) }).collect() }
    }

    /// `t(σ) = r_σ − 1`.
    pub fn top(fan: &Fan) -> Perversity {
        Perversity::from_fn(fan, |c| fan.dim(c) as i64 - 1)
    }

    /// `b = −t`.
    pub fn bottom(fan: &Fan) -> Perversity {
        Perversity::from_fn(fan, |c| 1 - fan.dim(c) as i64)
    }

    /// `m ≡ 0`.
    pub fn middle(fan: &Fan) -> Perversity {
        Perversity::from_fn(fan, |_| 0)
    }

    pub fn by_name(fan: &Fan, name: &str) -> Option<Perversity> {
        match name {
            "top" | "t" => Some(Perversity::top(fan)),
            "bottom" | "b" => Some(Perversity::bottom(fan)),
            "middle" | "m" => Some(Perversity::middle(fan)),
            _ => None,
        }
    }

    /// From a map `dimension ↦ value`, which must cover every dimension
    /// occurring among nonzero cones.
    pub fn by_dim(fan: &Fan, map: &BTreeMap<usize, i64>) -> Result<Perversity> {
        for c in 1..fan.len() {
            if !map.contains_key(&fan.dim(c)) {
                return Err(Error::PerversityDomainMismatch(format!("no value for dimension {}", fan.dim(c))));
            }
        }
        if let Some(d) = map.keys().find(|&&d| d == 0 || d > fan.rank) {
            return Err(Error::PerversityDomainMismatch(format!("dimension {d} out of range")));
        }
        Ok(Perversity::from_fn(fan, |c| map[&fan.dim(c)]))
    }

    /// From a map keyed by sorted ray-index lists; must be defined on
    /// exactly `Δ∖{0}`.
    pub fn by_cone(fan: &Fan, map: &BTreeMap<Vec<usize>, i64>) -> Result<Perversity> {
        let mut values = vec![0i64; fan.len()];
        let mut seen = 0usize;
        for (k, v) in map {
            let c = fan.find(k).ok_or_else(|| Error::PerversityDomainMismatch(format!("{k:?} is not a cone")))?;
            if c == 0 {
                return Err(Error::PerversityDomainMismatch("the zero cone carries no value".into()));
            }
            values[c] = *v;
            seen += 1;
        }
        if seen != fan.len() - 1 {
            return Err(Error::PerversityDomainMismatch(format!("{} of {} cones given", seen, fan.len() - 1)));
        }
        Ok(Perversity { values })
    }

    pub fn get(&self, c: usize) -> i64 {
        self.values[c]
    }

    pub fn check_domain(&self, fan: &Fan) -> Result<()> {
        if self.values.len() != fan.len() {
            return Err(Error::PerversityDomainMismatch(format!("{} values for {} cones", self.values.len(), fan.len())));
        }
        Ok(())
    }

    pub fn le(&self, other: &Perversity, fan: &Fan) -> Result<()> {
        for c in 1..fan.len() {
            if self.values[c] > other.values[c] {
                return Err(Error::NotPointwiseOrdered(fan.ray_ids(c).to_vec()));
            }
        }
        Ok(())
    }
}

/// Dimension sampling helper used for support tests: `Q`-points on a grid.
pub fn grid_points(rank: usize, radius: i64) -> Vec<Vec<Q>> {
    (0..rank).map(|_| -radius..=radius).multi_cartesian_product().map(|v| v.into_iter().map(q).collect()).collect()
}

/// Value of a covector on a rational point.
pub fn eval(u: &[i64], x: &[Q]) -> Q {
    dot_q(u, x)
}
