//! Fan-indexed complexes of graded exterior modules (CGEM objects):
//! `P(Δ)`, the barycentric resolution `SdP(Δ)`, generated subcomplexes,
//! `k_p(Δ)`, `ic_p(Δ)` and direct images.
//!
//! Every `L(σ)` is stored as `V/K` with `K ⊆ V ⊆ gens ⊗ A(σ)` inside the
//! cell space `gens ⊗ A`; maps are `A`-linear and given by the images of the
//! generators `g ⊗ 1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cone::incidence_sign;
use crate::error::{Error, Result};
use crate::exterior::{self, apply_on_gens, cell, split, subalgebra_basis};
use crate::fan::{Fan, Perversity, Subdivision};
use crate::flags::{flags_ending_at, insertion_point};
use crate::lattice::to_q;
use crate::linalg::{q, Echelon, SVec, Q};

pub type Bidegree = (i32, i32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GenLabel {
    /// The unit of `SdP(0) = Q`.
    Unit,
    /// The canonical generator of `det(σ)`.
    Det,
    /// The flag monomial `z(α)`.
    Flag(Vec<usize>),
    /// Generator `gen` of the module at source cone `cone` (direct images).
    Pushed { cone: usize, gen: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub degree: i32,
    pub label: GenLabel,
}

/// A subspace of a cell space, split by bidegree.
#[derive(Clone, Debug, Default)]
pub struct Graded {
    pub parts: BTreeMap<Bidegree, Echelon>,
}

impl Graded {
    pub fn dim(&self) -> usize {
        self.parts.values().map(|e| e.dim()).sum()
    }

    pub fn dim_at(&self, b: Bidegree) -> usize {
        self.parts.get(&b).map_or(0, |e| e.dim())
    }

    pub fn insert(&mut self, b: Bidegree, v: &SVec) -> bool {
        self.parts.entry(b).or_default().insert(v).is_some()
    }

    pub fn contains(&self, b: Bidegree, v: &SVec) -> bool {
        v.is_zero() || self.parts.get(&b).is_some_and(|e| e.contains(v))
    }

    pub fn rows_at(&self, b: Bidegree) -> Vec<SVec> {
        self.parts.get(&b).map(|e| e.rows().cloned().collect()).unwrap_or_default()
    }

    pub fn all_rows(&self) -> Vec<(Bidegree, SVec)> {
        self.parts.iter().flat_map(|(b, e)| e.rows().map(move |v| (*b, v.clone()))).collect()
    }

    pub fn contains_space(&self, other: &Graded) -> bool {
        other.all_rows().iter().all(|(b, v)| self.contains(*b, v))
    }
}

#[derive(Clone, Debug)]
pub struct ConeModule {
    pub gens: Vec<Generator>,
    pub v: Graded,
    pub k: Graded,
}

impl ConeModule {
    /// Bidegree of a homogeneous element.
    pub fn bidegree(&self, x: &SVec, r: usize) -> Result<Option<Bidegree>> {
        let mut b: Option<Bidegree> = None;
        for (c, _) in x.iter() {
            let (g, m) = split(*c, r);
            let d = (self.gens.get(g).ok_or(Error::ElementNotHomogeneous)?.degree, -(m.count_ones() as i32));
            match b {
                None => b = Some(d),
                Some(e) if e != d => return Err(Error::ElementNotHomogeneous),
                _ => {}
            }
        }
        Ok(b)
    }

    pub fn cell_bidegree(&self, c: usize, r: usize) -> Bidegree {
        let (g, m) = split(c, r);
        (self.gens[g].degree, -(m.count_ones() as i32))
    }

    /// Dimension of `V/K` at a bidegree.
    pub fn dim_at(&self, b: Bidegree) -> usize {
        self.v.dim_at(b) - self.k.dim_at(b)
    }

    pub fn dim(&self) -> usize {
        self.v.dim() - self.k.dim()
    }

    pub fn bidegrees(&self) -> Vec<Bidegree> {
        self.v.parts.keys().copied().filter(|&b| self.dim_at(b) > 0).collect()
    }
}

/// An object of `CGEM(Δ)`.
#[derive(Clone, Debug)]
pub struct GemObject {
    pub fan: Arc<Fan>,
    pub modules: Vec<ConeModule>,
    /// `d(σ/τ)` for `σ ≼ τ`, as images of `σ`'s generators in `τ`'s cells.
    /// Missing pairs are zero.
    pub maps: BTreeMap<(usize, usize), Vec<SVec>>,
}

/// An unmixed homomorphism, as images of source generators per cone.
#[derive(Clone, Debug, Default)]
pub struct GemMap {
    pub components: Vec<Vec<SVec>>,
}

fn free_module(gens: &[Generator], span: &[Vec<i64>], r: usize) -> Graded {
    let basis = subalgebra_basis(span, r);
    let mut v = Graded::default();
    for (g, gen) in gens.iter().enumerate() {
        for b in &basis {
            let x = exterior::on_gen(b, g, r);
            let j = b.leading().map_or(0, |(c, _)| -(split(c, r).1.count_ones() as i32));
            v.insert((gen.degree, j), &x);
        }
    }
    v
}

impl GemObject {
    pub fn rank(&self) -> usize {
        self.fan.rank
    }

    pub fn module(&self, c: usize) -> &ConeModule {
        &self.modules[c]
    }

    /// Applies `d(σ/τ)` to an element of the cell space of `σ`.
    pub fn apply(&self, s: usize, t: usize, x: &SVec) -> SVec {
        match self.maps.get(&(s, t)) {
            Some(images) => apply_on_gens(images, x, self.rank()),
            None => SVec::zero(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.modules.iter().map(|m| m.dim()).sum()
    }

    /// `P(Δ)`: `det(σ) ⊗ A(σ)` in degree `r_σ`, mixing by incidence signs.
    pub fn p(fan: &Arc<Fan>) -> GemObject {
        let r = fan.rank;
        let mut modules = Vec::with_capacity(fan.len());
        let mut maps = BTreeMap::new();
        for s in 0..fan.len() {
            let gens = vec![Generator { degree: fan.dim(s) as i32, label: GenLabel::Det }];
            let v = free_module(&gens, &fan.cone(s).span_basis, r);
            modules.push(ConeModule { gens, v, k: Graded::default() });
            for &t in fan.cofacets(s) {
                let e = incidence_sign(fan.cone(s), fan.cone(t)).expect("cofacet pairs are codimension one");
                maps.insert((s, t), vec![SVec::from_pairs([(cell(0, 0, r), q(e as i64))])]);
            }
        }
        GemObject { fan: Arc::clone(fan), modules, maps }
    }

    /// `ic_t(Δ)` in the form `det(σ) ⊗ Ā(σ)`: the quotient of `P(Δ)` by
    /// `det(σ) ⊗ N(σ)A(σ)`.
    pub fn ic_top_from_p(fan: &Arc<Fan>) -> GemObject {
        let mut obj = GemObject::p(fan);
        for m in obj.modules.iter_mut() {
            let mut k = Graded::default();
            for (b, x) in m.v.all_rows() {
                if b.1 < 0 {
                    k.insert(b, &x);
                }
            }
            m.k = k;
        }
        obj
    }

    /// The barycentric resolution `SdP(Δ)`.
    pub fn sdp(fan: &Arc<Fan>) -> GemObject {
        let r = fan.rank;
        let flags = flags_ending_at(fan);
        let index: Vec<HashMap<Vec<usize>, usize>> =
            flags.iter().map(|l| l.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect()).collect();
        let mut modules = Vec::with_capacity(fan.len());
        let mut maps = BTreeMap::new();
        for rho in 0..fan.len() {
            let gens: Vec<Generator> = if rho == 0 {
                vec![Generator { degree: 0, label: GenLabel::Unit }]
            } else {
                flags[rho].iter().map(|a| Generator { degree: a.len() as i32, label: GenLabel::Flag(a.clone()) }).collect()
            };
            let v = free_module(&gens, &fan.cone(rho).span_basis, r);
            // internal coboundary: left multiplication by Y(F(0, ρ))
            if rho != 0 {
                let mut images = Vec::with_capacity(gens.len());
                for a in &flags[rho] {
                    let mut pairs = Vec::new();
                    for &tau in fan.proper_faces(rho) {
                        if tau == 0 {
                            continue;
                        }
                        if let Some(pos) = insertion_point(fan, a, tau) {
                            let mut b = a.clone();
                            b.insert(pos, tau);
                            let sign = if pos % 2 == 0 { 1 } else { -1 };
                            pairs.push((cell(index[rho][&b], 0, r), q(sign)));
                        }
                    }
                    images.push(SVec::from_pairs(pairs));
                }
                if images.iter().any(|x| !x.is_zero()) {
                    maps.insert((rho, rho), images);
                }
            }
            // mixing: left multiplication by y(μ)
            for mu in fan.star(rho) {
                if mu == rho {
                    continue;
                }
                let images: Vec<SVec> = if rho == 0 {
                    vec![SVec::from_pairs([(cell(index[mu][&vec![mu]], 0, r), q(1))])]
                } else {
                    flags[rho]
                        .iter()
                        .map(|a| {
                            let mut b = a.clone();
                            b.push(mu);
                            let sign = if a.len() % 2 == 0 { 1 } else { -1 };
                            SVec::from_pairs([(cell(index[mu][&b], 0, r), q(sign))])
                        })
                        .collect()
                };
                maps.insert((rho, mu), images);
            }
            modules.push(ConeModule { gens, v, k: Graded::default() });
        }
        GemObject { fan: Arc::clone(fan), modules, maps }
    }

    /// The subobject `⟨S⟩ + K` generated by homogeneous elements `seeds[σ]`
    /// of `V(σ)`; `K` is kept so the result is a subobject of `V/K`.
    pub fn generate(&self, seeds: &[Vec<SVec>]) -> Result<GemObject> {
        let r = self.rank();
        let n = self.fan.len();
        let mut new_v: Vec<Graded> = Vec::with_capacity(n);
        for rho in 0..n {
            let m = &self.modules[rho];
            let mut cand: BTreeMap<Bidegree, Vec<SVec>> = BTreeMap::new();
            for x in seeds.get(rho).map(|v| v.as_slice()).unwrap_or(&[]) {
                if let Some(b) = m.bidegree(x, r)? {
                    if !m.v.contains(b, x) {
                        return Err(Error::IllDefinedMap(format!("seed outside the module at cone {rho}")));
                    }
                    cand.entry(b).or_default().push(x.clone());
                }
            }
            for &s in self.fan.proper_faces(rho) {
                for (_, x) in new_v[s].all_rows() {
                    let y = self.apply(s, rho, &x);
                    if let Some(b) = m.bidegree(&y, r)? {
                        cand.entry(b).or_default().push(y);
                    }
                }
            }
            let span: Vec<Vec<Q>> = self.fan.cone(rho).span_basis.iter().map(|b| to_q(b)).collect();
            let mut out = m.k.clone();
            let degrees: Vec<i32> = {
                let mut d: Vec<i32> = m.gens.iter().map(|g| g.degree).collect();
                d.sort_unstable();
                d.dedup();
                d
            };
            for &i in &degrees {
                for j in (-(r as i32)..=0).rev() {
                    let b = (i, j);
                    let mut todo: Vec<SVec> = cand.remove(&b).unwrap_or_default();
                    for x in out.rows_at((i - 1, j)) {
                        todo.push(self.apply(rho, rho, &x));
                    }
                    for x in out.rows_at((i, j + 1)) {
                        for nk in &span {
                            todo.push(exterior::mul_vec(nk, &x, r));
                        }
                    }
                    for x in todo {
                        if !x.is_zero() {
                            out.insert(b, &x);
                        }
                    }
                }
            }
            new_v.push(out);
        }
        let modules = self
            .modules
            .iter()
            .zip(new_v)
            .map(|(m, v)| ConeModule { gens: m.gens.clone(), v, k: m.k.clone() })
            .collect();
        Ok(GemObject { fan: Arc::clone(&self.fan), modules, maps: self.maps.clone() })
    }

    /// `V/K'` where `K'` is the `V` of a subobject.
    pub fn quotient_by(&self, sub: &GemObject) -> GemObject {
        let modules = self
            .modules
            .iter()
            .zip(&sub.modules)
            .map(|(m, s)| ConeModule { gens: m.gens.clone(), v: m.v.clone(), k: s.v.clone() })
            .collect();
        GemObject { fan: Arc::clone(&self.fan), modules, maps: self.maps.clone() }
    }

    /// Seeds `⋃_σ ⋃_{i+j ≤ p(σ)} SdP(σ)^i_j` of `k_p`.
    pub fn truncation_seeds(&self, p: &Perversity) -> Vec<Vec<SVec>> {
        (0..self.fan.len())
            .map(|s| {
                if s == 0 {
                    return Vec::new();
                }
                self.modules[s]
                    .v
                    .all_rows()
                    .into_iter()
                    .filter(|(b, _)| (b.0 + b.1) as i64 <= p.get(s))
                    .map(|(_, x)| x)
                    .collect()
            })
            .collect()
    }

    /// `k_p(Δ)` as a subobject of `SdP(Δ)`.
    pub fn kernel_k(sdp: &GemObject, p: &Perversity) -> Result<GemObject> {
        p.check_domain(&sdp.fan)?;
        sdp.generate(&sdp.truncation_seeds(p))
    }

    /// `ic_p(Δ) = SdP(Δ)/k_p(Δ)` and the quotient map `SdP → ic_p`.
    pub fn ic(fan: &Arc<Fan>, p: &Perversity) -> Result<(GemObject, GemMap)> {
        let sdp = GemObject::sdp(fan);
        let k = GemObject::kernel_k(&sdp, p)?;
        let ic = sdp.quotient_by(&k);
        let q = GemMap::identity(&sdp);
        Ok((ic, q))
    }

    /// The direct image `f_*L` along a subdivision `f: Δ′ → Δ`.
    pub fn direct_image(sub: &Subdivision, l: &GemObject) -> Result<GemObject> {
        if !Arc::ptr_eq(&sub.source, &l.fan) && sub.source.len() != l.fan.len() {
            return Err(Error::FanMismatch);
        }
        let target = &sub.target;
        let r = target.rank;
        let (offsets, gen_lists) = pushed_layout(sub, l);
        let mut modules = Vec::with_capacity(target.len());
        for rho in 0..target.len() {
            let span_rho: Vec<Vec<Q>> = target.cone(rho).span_basis.iter().map(|b| to_q(b)).collect();
            let mut v = Graded::default();
            let mut k = Graded::default();
            for &s in &gen_lists[rho] {
                let off = offsets[s];
                let span_s: Vec<Vec<Q>> = l.fan.cone(s).span_basis.iter().map(|b| to_q(b)).collect();
                let comp = exterior::complement(&span_s, &span_rho);
                let src = &l.modules[s];
                for (space, dst) in [(&src.v, &mut v), (&src.k, &mut k)] {
                    let rows: Vec<SVec> = space.all_rows().into_iter().map(|(_, x)| shift_gens(&x, off, r)).collect();
                    for x in exterior::induce(&rows, &comp, r) {
                        let (g, m) = split(x.leading().unwrap().0, r);
                        let deg = src.gens[g - off].degree;
                        dst.insert((deg, -(m.count_ones() as i32)), &x);
                    }
                }
            }
            let gens: Vec<Generator> = gen_lists[rho]
                .iter()
                .flat_map(|&s| {
                    l.modules[s].gens.iter().enumerate().map(move |(g, gen)| Generator {
                        degree: gen.degree,
                        label: GenLabel::Pushed { cone: s, gen: g },
                    })
                })
                .collect();
            modules.push(ConeModule { gens, v, k });
        }
        let mut maps: BTreeMap<(usize, usize), Vec<SVec>> = BTreeMap::new();
        for rho in 0..target.len() {
            for mu in target.star(rho) {
                let mut images: Vec<SVec> = Vec::new();
                let mut any = false;
                for &s in &gen_lists[rho] {
                    for g in 0..l.modules[s].gens.len() {
                        let mut acc = SVec::zero();
                        for &t in &gen_lists[mu] {
                            if let Some(img) = l.maps.get(&(s, t)) {
                                acc = acc.add(&shift_gens(&img[g], offsets[t], r));
                            }
                        }
                        any |= !acc.is_zero();
                        images.push(acc);
                    }
                }
                if any {
                    maps.insert((rho, mu), images);
                }
            }
        }
        Ok(GemObject { fan: Arc::clone(target), modules, maps })
    }

    /// Checks the CGEM axiom `Σ_{τ∈F[σ,ρ]} d(τ/ρ) d(σ/τ) = 0` on `V/K` and
    /// that every `d(σ/τ)` preserves `V` and `K`.
    pub fn check_axiom(&self) -> Result<()> {
        let r = self.rank();
        let fan = &self.fan;
        for s in 0..fan.len() {
            let star = fan.star(s);
            for (space_is_k, rows) in [(false, self.modules[s].v.all_rows()), (true, self.modules[s].k.all_rows())] {
                for (b, x) in rows {
                    let mut first: HashMap<usize, SVec> = HashMap::new();
                    for &t in &star {
                        let y = self.apply(s, t, &x);
                        let bt = (b.0 + 1, b.1);
                        let tm = &self.modules[t];
                        let ok = if space_is_k { tm.k.contains(bt, &y) } else { tm.v.contains(bt, &y) };
                        if !ok {
                            return Err(Error::IllDefinedMap(format!("d({s}/{t}) leaves the module")));
                        }
                        first.insert(t, y);
                    }
                    if space_is_k {
                        continue;
                    }
                    for &rho in &star {
                        let mut acc = SVec::zero();
                        for &t in &star {
                            if fan.is_face(t, rho) {
                                acc = acc.add(&self.apply(t, rho, &first[&t]));
                            }
                        }
                        if !self.modules[rho].k.contains((b.0 + 2, b.1), &acc) {
                            return Err(Error::NotAComplex((b.0, b.1)));
                        }
                    }
                }
            }
        }
        let _ = r;
        Ok(())
    }

    /// Debug dump: generators, subspace bases and maps.
    pub fn debug_json(&self) -> Value {
        let sv = |x: &SVec| -> Value { Value::Array(x.iter().map(|(c, v)| json!([c, v.to_string()])).collect()) };
        let cones: Vec<Value> = self
            .modules
            .iter()
            .enumerate()
            .map(|(c, m)| {
                json!({
                    "cone": self.fan.ray_ids(c),
                    "gens": m.gens,
                    "v": m.v.all_rows().iter().map(|(_, x)| sv(x)).collect::<Vec<_>>(),
                    "k": m.k.all_rows().iter().map(|(_, x)| sv(x)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let maps: Vec<Value> =
            self.maps.iter().map(|((s, t), imgs)| json!({"from": s, "to": t, "images": imgs.iter().map(sv).collect::<Vec<_>>()})).collect();
        json!({"rank": self.rank(), "cones": cones, "maps": maps})
    }
}

/// Offsets of each source cone's generators inside its target cone, and
/// the fiber lists.
fn pushed_layout(sub: &Subdivision, l: &GemObject) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut offsets = vec![0usize; l.fan.len()];
    let mut lists = vec![Vec::new(); sub.target.len()];
    let mut next = vec![0usize; sub.target.len()];
    for s in 0..l.fan.len() {
        let rho = sub.cone_map[s];
        offsets[s] = next[rho];
        next[rho] += l.modules[s].gens.len();
        lists[rho].push(s);
    }
    (offsets, lists)
}

pub(crate) fn shift_gens(x: &SVec, off: usize, r: usize) -> SVec {
    if off == 0 {
        return x.clone();
    }
    SVec::from_pairs(x.iter().map(|(c, v)| {
        let (g, m) = split(*c, r);
        (cell(g + off, m, r), v.clone())
    }))
}

impl GemMap {
    /// The identity on generators (also the quotient maps `V/K → V/K'`).
    pub fn identity(obj: &GemObject) -> GemMap {
        let r = obj.rank();
        GemMap {
            components: obj.modules.iter().map(|m| (0..m.gens.len()).map(|g| SVec::unit(cell(g, 0, r))).collect()).collect(),
        }
    }

    pub fn zero(obj: &GemObject) -> GemMap {
        GemMap { components: obj.modules.iter().map(|m| vec![SVec::zero(); m.gens.len()]).collect() }
    }

    pub fn apply(&self, c: usize, x: &SVec, r: usize) -> SVec {
        apply_on_gens(&self.components[c], x, r)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GemMap, r: usize) -> GemMap {
        GemMap {
            components: first
                .components
                .iter()
                .enumerate()
                .map(|(c, imgs)| imgs.iter().map(|x| self.apply(c, x, r)).collect())
                .collect(),
        }
    }

    /// `f(V) ⊆ V'` and `f(K) ⊆ K'` on every cone.
    pub fn check_well_defined(&self, src: &GemObject, tgt: &GemObject) -> Result<()> {
        if src.fan.len() != tgt.fan.len() {
            return Err(Error::FanMismatch);
        }
        let r = src.rank();
        for c in 0..src.fan.len() {
            for (b, x) in src.modules[c].v.all_rows() {
                if !tgt.modules[c].v.contains(b, &self.apply(c, &x, r)) {
                    return Err(Error::IllDefinedMap(format!("image leaves the target at cone {:?}", src.fan.ray_ids(c))));
                }
            }
            for (b, x) in src.modules[c].k.all_rows() {
                if !tgt.modules[c].k.contains(b, &self.apply(c, &x, r)) {
                    return Err(Error::IllDefinedMap(format!("kernel not preserved at cone {:?}", src.fan.ray_ids(c))));
                }
            }
        }
        Ok(())
    }

    /// `d'(σ/τ) f(σ) = f(τ) d(σ/τ)` modulo `K'(τ)` for all `σ ≼ τ`.
    pub fn check_chain(&self, src: &GemObject, tgt: &GemObject) -> Result<()> {
        let r = src.rank();
        let fan = &src.fan;
        for s in 0..fan.len() {
            for (b, x) in src.modules[s].v.all_rows() {
                let fx = self.apply(s, &x, r);
                for t in fan.star(s) {
                    let lhs = tgt.apply(s, t, &fx);
                    let rhs = self.apply(t, &src.apply(s, t, &x), r);
                    if !tgt.modules[t].k.contains((b.0 + 1, b.1), &lhs.sub(&rhs)) {
                        return Err(Error::NotChainMap(format!("{:?} -> {:?} at {:?}", fan.ray_ids(s), fan.ray_ids(t), b)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `f_*(g)` for an unmixed map on the source of a subdivision.
    pub fn direct_image(sub: &Subdivision, g: &GemMap, src: &GemObject, tgt: &GemObject) -> GemMap {
        let r = src.rank();
        let (off_src, lists) = pushed_layout(sub, src);
        let (off_tgt, _) = pushed_layout(sub, tgt);
        let mut components = vec![Vec::new(); sub.target.len()];
        for (rho, list) in lists.iter().enumerate() {
            for &s in list {
                debug_assert_eq!(components[rho].len(), off_src[s]);
                for img in &g.components[s] {
                    components[rho].push(shift_gens(img, off_tgt[s], r));
                }
            }
        }
        GemMap { components }
    }
}

/// A general (possibly mixed) homomorphism: `f(σ/τ)` for `σ ≼ τ`, given by
/// the images of `σ`'s generators in `τ`'s cells. Missing pairs are zero.
#[derive(Clone, Debug, Default)]
pub struct MixedMap {
    pub parts: BTreeMap<(usize, usize), Vec<SVec>>,
}

impl MixedMap {
    pub fn from_unmixed(g: &GemMap) -> MixedMap {
        MixedMap { parts: g.components.iter().enumerate().map(|(c, v)| ((c, c), v.clone())).collect() }
    }

    pub fn apply(&self, s: usize, t: usize, x: &SVec, r: usize) -> SVec {
        match self.parts.get(&(s, t)) {
            Some(imgs) => apply_on_gens(imgs, x, r),
            None => SVec::zero(),
        }
    }

    pub fn is_unmixed(&self) -> bool {
        self.parts.iter().all(|((s, t), v)| s == t || v.iter().all(|x| x.is_zero()))
    }

    /// Off-diagonal pairs carrying a nonzero component.
    pub fn mixed_pairs(&self) -> Vec<(usize, usize)> {
        self.parts
            .iter()
            .filter(|((s, t), v)| s != t && v.iter().any(|x| !x.is_zero()))
            .map(|(k, _)| *k)
            .collect()
    }

    /// All components out of cone `s` applied to `x`.
    pub fn images(&self, fan: &Fan, s: usize, x: &SVec) -> Vec<(usize, SVec)> {
        fan.star(s)
            .into_iter()
            .filter(|&t| self.parts.contains_key(&(s, t)))
            .map(|t| (t, self.apply(s, t, x, fan.rank)))
            .filter(|(_, y)| !y.is_zero())
            .collect()
    }

    /// `f(σ/τ)(V) ⊆ V'` and `f(σ/τ)(K) ⊆ K'`.
    pub fn check_well_defined(&self, src: &GemObject, tgt: &GemObject) -> Result<()> {
        let r = src.rank();
        for &(s, t) in self.parts.keys() {
            if !src.fan.is_face(s, t) {
                return Err(Error::IllDefinedMap(format!("component between non-faces {s} -> {t}")));
            }
            for (space, target, what) in [(&src.modules[s].v, &tgt.modules[t].v, "image leaves the target"), (&src.modules[s].k, &tgt.modules[t].k, "kernel not preserved")] {
                for (b, x) in space.all_rows() {
                    if !target.contains(b, &self.apply(s, t, &x, r)) {
                        return Err(Error::IllDefinedMap(format!("{what} at {:?} -> {:?}", src.fan.ray_ids(s), src.fan.ray_ids(t))));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_{μ∈[σ,τ]} d'(μ/τ) f(σ/μ) = Σ_{μ∈[σ,τ]} f(μ/τ) d(σ/μ)` modulo `K'(τ)`.
    pub fn check_chain(&self, src: &GemObject, tgt: &GemObject) -> Result<()> {
        let r = src.rank();
        let fan = &src.fan;
        for s in 0..fan.len() {
            for (b, x) in src.modules[s].v.all_rows() {
                for t in fan.star(s) {
                    let mut acc = SVec::zero();
                    for &m in fan.faces(t) {
                        if !fan.is_face(s, m) {
                            continue;
                        }
                        acc = acc.add(&tgt.apply(m, t, &self.apply(s, m, &x, r)));
                        acc = acc.sub(&self.apply(m, t, &src.apply(s, m, &x), r));
                    }
                    if !tgt.modules[t].k.contains((b.0 + 1, b.1), &acc) {
                        return Err(Error::NotChainMap(format!("{:?} -> {:?} at {:?}", fan.ray_ids(s), fan.ray_ids(t), b)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrant() -> Arc<Fan> {
        Arc::new(Fan::new(2, vec![vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap())
    }

    #[test]
    fn p_and_sdp_satisfy_the_axiom() {
        let f = quadrant();
        GemObject::p(&f).check_axiom().unwrap();
        GemObject::sdp(&f).check_axiom().unwrap();
    }

    #[test]
    fn sdp_dimensions_of_a_quadrant() {
        let f = quadrant();
        let s = GemObject::sdp(&f);
        let top = f.find(&[0, 1]).unwrap();
        let m = s.module(top);
        let deg1 = m.gens.iter().filter(|g| g.degree == 1).count();
        let deg2 = m.gens.iter().filter(|g| g.degree == 2).count();
        assert_eq!((deg1, deg2), (1, 2));
    }

    #[test]
    fn p1_total_dimension() {
        let f = Arc::new(Fan::new(1, vec![vec![1], vec![-1]], &[vec![0], vec![1]]).unwrap());
        assert_eq!(GemObject::p(&f).total_dim(), 5);
    }
}
