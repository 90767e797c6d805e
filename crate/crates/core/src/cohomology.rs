//! Assembly of bigraded complexes (`Γ`, `i_ρ∘`, `i_ρ*`, single cones),
//! exact Betti tables and induced maps on cohomology.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{self, cell, split};
use crate::fan::{Fan, IntervalKind};
use crate::gem::{Bidegree, GemObject};
use crate::lattice::to_q;
use crate::linalg::{Matrix, SVec, Subquotient, Q};

/// Runs `f` on a rayon pool with `jobs` threads (`0` = rayon's default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool").install(f)
}

/// The algebra over which an assembly is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    /// The full algebra `A` (the `Γ` functor).
    Full,
    /// `A(ρ)`, for the local functors at `ρ`.
    Cone(usize),
}

/// A per-bidegree complex of `Q`-vector spaces with coboundaries
/// `d[(p,q)]: (p,q) → (p+1,q)`.
#[derive(Clone, Debug, Default)]
pub struct BigradedComplex {
    pub dims: BTreeMap<Bidegree, usize>,
    pub d: BTreeMap<Bidegree, Matrix>,
}

/// `(p, q) ↦ dim H^p_q`, storing nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub entries: BTreeMap<Bidegree, usize>,
}

impl BettiTable {
    pub fn get(&self, p: i32, q: i32) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn from_pairs<I: IntoIterator<Item = ((i32, i32), usize)>>(it: I) -> BettiTable {
        BettiTable { entries: it.into_iter().filter(|(_, v)| *v > 0).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        self.entries.iter().map(|((p, q), d)| format!("{p}\t{q}\t{d}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "betti": self.entries.iter().map(|((p, q), d)| [*p as i64, *q as i64, *d as i64]).collect::<Vec<_>>() })
    }

    /// Alternating sum `Σ_p (−1)^p dim H^p_q`.
    pub fn euler(&self, q: i32) -> i64 {
        self.entries.iter().filter(|((_, qq), _)| *qq == q).map(|((p, _), d)| if p % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum()
    }
}

impl BigradedComplex {
    /// Verifies `d² = 0`.
    pub fn check_square_zero(&self) -> Result<()> {
        for (&(p, q), m) in &self.d {
            if let Some(next) = self.d.get(&(p + 1, q)) {
                if !next.compose(m)?.is_zero() {
                    return Err(Error::NotAComplex((p, q)));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self, b: Bidegree) -> usize {
        self.d.get(&b).map_or(0, |m| m.rank())
    }

    /// Exact cohomology dimensions (ranks computed in parallel per bidegree).
    pub fn betti(&self) -> Result<BettiTable> {
        self.check_square_zero()?;
        let keys: Vec<Bidegree> = self.d.keys().copied().collect();
        let ranks: HashMap<Bidegree, usize> = keys.par_iter().map(|&b| (b, self.rank(b))).collect();
        let rk = |b: Bidegree| ranks.get(&b).copied().unwrap_or(0);
        Ok(BettiTable::from_pairs(self.dims.iter().map(|(&(p, q), &n)| ((p, q), n - rk((p, q)) - rk((p - 1, q))))))
    }

    /// Cycles modulo boundaries at a bidegree.
    pub fn cohomology_basis(&self, b: Bidegree) -> Subquotient {
        let n = self.dims.get(&b).copied().unwrap_or(0);
        let cycles: Vec<SVec> = match self.d.get(&b) {
            Some(m) => m.kernel(),
            None => (0..n).map(SVec::unit).collect(),
        };
        let bounds: Vec<SVec> = self.d.get(&(b.0 - 1, b.1)).map(|m| m.cols.clone()).unwrap_or_default();
        Subquotient::new(&bounds, &cycles)
    }
}

/// A complex assembled from per-cone modules induced to a common algebra.
pub struct Assembly<'a> {
    pub obj: &'a GemObject,
    pub cones: Vec<usize>,
    pos_of: HashMap<usize, usize>,
    quots: Vec<BTreeMap<Bidegree, Subquotient>>,
    /// Per bidegree: offset of each cone position (only nonzero blocks).
    layout: BTreeMap<Bidegree, Vec<(usize, usize)>>,
    offsets: BTreeMap<Bidegree, HashMap<usize, usize>>,
    pub complex: BigradedComplex,
}

fn target_space(fan: &Fan, alg: Algebra) -> Vec<Vec<Q>> {
    match alg {
        Algebra::Full => exterior::standard_basis(fan.rank),
        Algebra::Cone(rho) => fan.cone(rho).span_basis.iter().map(|b| to_q(b)).collect(),
    }
}

fn cone_quotients(obj: &GemObject, s: usize, alg: Algebra) -> BTreeMap<Bidegree, Subquotient> {
    let fan = &obj.fan;
    let r = fan.rank;
    let m = &obj.modules[s];
    let span: Vec<Vec<Q>> = fan.cone(s).span_basis.iter().map(|b| to_q(b)).collect();
    let comp = exterior::complement(&span, &target_space(fan, alg));
    let group = |rows: Vec<SVec>| -> BTreeMap<Bidegree, Vec<SVec>> {
        let mut out: BTreeMap<Bidegree, Vec<SVec>> = BTreeMap::new();
        for x in exterior::induce(&rows, &comp, r) {
            if let Some((c, _)) = x.leading() {
                out.entry(m.cell_bidegree(c, r)).or_default().push(x);
            }
        }
        out
    };
    let k = group(m.k.all_rows().into_iter().map(|(_, x)| x).collect());
    let free = m.v.dim() == m.gens.len() << fan.dim(s);
    let v: BTreeMap<Bidegree, Vec<SVec>> = if free && alg == Algebra::Full {
        // V is all of gens ⊗ A(σ), so its induction is every cell
        let mut out: BTreeMap<Bidegree, Vec<SVec>> = BTreeMap::new();
        for (g, gen) in m.gens.iter().enumerate() {
            for mask in 0u32..(1 << r) {
                out.entry((gen.degree, -(mask.count_ones() as i32))).or_default().push(SVec::unit(cell(g, mask, r)));
            }
        }
        out
    } else {
        group(m.v.all_rows().into_iter().map(|(_, x)| x).collect())
    };
    let empty = Vec::new();
    v.iter()
        .map(|(b, vs)| (*b, Subquotient::new(k.get(b).unwrap_or(&empty), vs)))
        .filter(|(_, sq)| sq.dim() > 0)
        .collect()
}

impl<'a> Assembly<'a> {
    /// Assembles `⊕_{σ ∈ cones} L(σ)_{alg}` with the coboundary summing all
    /// `d(σ/τ)` inside the cone set.
    pub fn new(obj: &'a GemObject, cones: &[usize], alg: Algebra) -> Result<Assembly<'a>> {
        let mut cones: Vec<usize> = cones.to_vec();
        cones.sort_unstable();
        cones.dedup();
        let pos_of: HashMap<usize, usize> = cones.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let quots: Vec<BTreeMap<Bidegree, Subquotient>> = cones.par_iter().map(|&s| cone_quotients(obj, s, alg)).collect();
        let mut layout: BTreeMap<Bidegree, Vec<(usize, usize)>> = BTreeMap::new();
        let mut dims: BTreeMap<Bidegree, usize> = BTreeMap::new();
        for (pos, qs) in quots.iter().enumerate() {
            for (b, sq) in qs {
                let n = dims.entry(*b).or_insert(0);
                layout.entry(*b).or_default().push((pos, *n));
                *n += sq.dim();
            }
        }
        let offsets = layout.iter().map(|(b, l)| (*b, l.iter().copied().collect())).collect();
        let mut asm = Assembly { obj, cones, pos_of, quots, layout, offsets, complex: BigradedComplex { dims, d: BTreeMap::new() } };
        let keys: Vec<Bidegree> = asm.complex.dims.keys().copied().collect();
        let mats: Vec<Result<(Bidegree, Matrix)>> = keys.par_iter().map(|&b| asm.differential(b).map(|m| (b, m))).collect();
        for m in mats {
            let (b, m) = m?;
            if !m.is_zero() {
                asm.complex.d.insert(b, m);
            }
        }
        Ok(asm)
    }

    /// `Γ(L)`.
    pub fn gamma(obj: &'a GemObject) -> Result<Assembly<'a>> {
        let all: Vec<usize> = (0..obj.fan.len()).collect();
        Assembly::new(obj, &all, Algebra::Full)
    }

    /// `Γ` restricted to a subset of cones (a face-closed subfan or a
    /// star-closed set).
    pub fn gamma_on(obj: &'a GemObject, cones: &[usize]) -> Result<Assembly<'a>> {
        Assembly::new(obj, cones, Algebra::Full)
    }

    /// `i_ρ∘(L)` over `A(ρ)`.
    pub fn i_circ(obj: &'a GemObject, rho: usize) -> Result<Assembly<'a>> {
        let cones = obj.fan.interval(0, rho, IntervalKind::HalfOpen)?;
        Assembly::new(obj, &cones, Algebra::Cone(rho))
    }

    /// `i_ρ*(L)` over `A(ρ)`.
    pub fn i_star(obj: &'a GemObject, rho: usize) -> Result<Assembly<'a>> {
        let cones = obj.fan.faces(rho).to_vec();
        Assembly::new(obj, &cones, Algebra::Cone(rho))
    }

    /// The complex `L(ρ)` itself over `A(ρ)`.
    pub fn local(obj: &'a GemObject, rho: usize) -> Result<Assembly<'a>> {
        Assembly::new(obj, &[rho], Algebra::Cone(rho))
    }

    pub fn dims(&self) -> &BTreeMap<Bidegree, usize> {
        &self.complex.dims
    }

    pub fn contains_cone(&self, c: usize) -> bool {
        self.pos_of.contains_key(&c)
    }

    /// Coordinates of an element of the (induced) cell space of cone `c` at
    /// bidegree `b`, as a vector of the assembled space.
    pub fn coordinates(&self, c: usize, b: Bidegree, y: &SVec) -> Result<SVec> {
        if y.is_zero() {
            return Ok(SVec::zero());
        }
        let pos = *self.pos_of.get(&c).ok_or(Error::ConeNotInFan(self.obj.fan.ray_ids(c).to_vec()))?;
        let err = || Error::IllDefinedMap(format!("element outside the module at cone {:?}, bidegree {:?}", self.obj.fan.ray_ids(c), b));
        let sq = self.quots[pos].get(&b);
        match sq {
            None => {
                // the quotient vanishes here; y must be a combination of K
                Err(err())
            }
            Some(sq) => {
                let co = sq.coordinates(y).ok_or_else(err)?;
                let off = self.offsets[&b][&pos];
                Ok(co.reindex(|k| Some(k + off)))
            }
        }
    }

    /// Like [`Assembly::coordinates`] but elements of a vanishing block
    /// are accepted if they lie in the induced `K` (checked by the caller's
    /// other means); returns zero.
    fn coordinates_lenient(&self, c: usize, b: Bidegree, y: &SVec) -> Result<SVec> {
        let pos = self.pos_of[&c];
        if !self.quots[pos].contains_key(&b) {
            let k = induced_k_contains(self.obj, c, b, y);
            return if k { Ok(SVec::zero()) } else { self.coordinates(c, b, y) };
        }
        self.coordinates(c, b, y)
    }

    /// Splits an assembled vector into per-cone ambient elements.
    pub fn lift(&self, b: Bidegree, x: &SVec) -> Vec<(usize, SVec)> {
        let mut out = Vec::new();
        let Some(blocks) = self.layout.get(&b) else { return out };
        for (idx, &(pos, off)) in blocks.iter().enumerate() {
            let end = blocks.get(idx + 1).map_or(usize::MAX, |x| x.1);
            let sq = &self.quots[pos][&b];
            let mut acc = SVec::zero();
            for (k, c) in x.iter() {
                if *k >= off && *k < end {
                    acc = acc.add_scaled(c, sq.representative(k - off));
                }
            }
            if !acc.is_zero() {
                out.push((self.cones[pos], acc));
            }
        }
        out
    }

    fn differential(&self, b: Bidegree) -> Result<Matrix> {
        let (p, q) = b;
        let target = (p + 1, q);
        let rows = self.complex.dims.get(&target).copied().unwrap_or(0);
        let fan = &self.obj.fan;
        let mut cols = Vec::new();
        for &(pos, _) in &self.layout[&b] {
            let s = self.cones[pos];
            let sq = &self.quots[pos][&b];
            for k in 0..sq.dim() {
                let x = sq.representative(k);
                let mut col = SVec::zero();
                for t in fan.star(s) {
                    if !self.pos_of.contains_key(&t) {
                        continue;
                    }
                    let y = self.obj.apply(s, t, x);
                    if y.is_zero() {
                        continue;
                    }
                    col = col.add(&self.coordinates_lenient(t, target, &y)?);
                }
                cols.push(col);
            }
        }
        Ok(Matrix::new(rows, cols))
    }

    pub fn betti(&self) -> Result<BettiTable> {
        self.complex.betti()
    }
}

/// True if `y` lies in `A ⊗ K(c)` (used where the quotient block vanishes).
fn induced_k_contains(obj: &GemObject, c: usize, b: Bidegree, y: &SVec) -> bool {
    let r = obj.rank();
    let m = &obj.modules[c];
    let span: Vec<Vec<Q>> = obj.fan.cone(c).span_basis.iter().map(|x| to_q(x)).collect();
    let comp = exterior::complement(&span, &exterior::standard_basis(r));
    let rows: Vec<SVec> = m.k.all_rows().into_iter().map(|(_, x)| x).collect();
    let mut e = crate::linalg::Echelon::new();
    for x in exterior::induce(&rows, &comp, r) {
        if x.leading().is_some_and(|(cc, _)| m.cell_bidegree(cc, r) == b) {
            e.insert(&x);
        }
    }
    e.contains(y)
}

/// A map of assembled complexes given on per-cone ambient elements.
pub type CellMap<'f> = dyn Fn(usize, &SVec) -> Vec<(usize, SVec)> + Sync + 'f;

/// The matrix of `H^p_q(src) → H^{p+shift}_q(tgt)` induced by `f`, in the
/// cohomology bases of both sides.
pub fn induced_cohomology_map(src: &Assembly, tgt: &Assembly, b: Bidegree, shift: i32, f: &CellMap) -> Result<Matrix> {
    let hs = src.complex.cohomology_basis(b);
    let tb = (b.0 + shift, b.1);
    let ht = tgt.complex.cohomology_basis(tb);
    let mut cols = Vec::with_capacity(hs.dim());
    for k in 0..hs.dim() {
        let rep = hs.representative(k);
        let mut img = SVec::zero();
        for (s, x) in src.lift(b, rep) {
            for (t, y) in f(s, &x) {
                if !tgt.contains_cone(t) || y.is_zero() {
                    continue;
                }
                img = img.add(&tgt.coordinates_lenient(t, tb, &y)?);
            }
        }
        let co = ht.coordinates(&img).ok_or_else(|| Error::NotChainMap(format!("image of a cycle is not a cycle at {b:?}")))?;
        cols.push(co);
    }
    Ok(Matrix::new(ht.dim(), cols))
}

/// The identity on shared cones (inclusions of star-closed sets and
/// restrictions to subfans).
pub fn identity_on_cones(c: usize, x: &SVec) -> Vec<(usize, SVec)> {
    vec![(c, x.clone())]
}

/// Summary of an induced map at one bidegree.
#[derive(Clone, Debug, Serialize)]
pub struct MapRank {
    pub bidegree: Bidegree,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

/// Ranks of the induced maps in every bidegree where either side is nonzero.
pub fn induced_ranks(src: &Assembly, tgt: &Assembly, shift: i32, f: &CellMap) -> Result<Vec<MapRank>> {
    let hs = src.betti()?;
    let ht = tgt.betti()?;
    let mut keys: BTreeSet<Bidegree> = hs.entries.keys().copied().collect();
    keys.extend(ht.entries.keys().map(|&(p, q)| (p - shift, q)));
    let res: Vec<Result<MapRank>> = keys
        .into_par_iter()
        .map(|b| {
            let m = induced_cohomology_map(src, tgt, b, shift, f)?;
            Ok(MapRank { bidegree: b, source_dim: hs.get(b.0, b.1), target_dim: ht.get(b.0 + shift, b.1), rank: m.rank() })
        })
        .collect();
    res.into_iter().collect()
}

/// The complex `E(Φ, Z) ⊗ Q` of a locally star closed cone set, in `q = 0`.
pub fn e_complex(fan: &Fan, phi: &[usize]) -> Result<BigradedComplex> {
    if !fan.is_locally_star_closed(phi) {
        return Err(Error::NotLocallyStarClosed);
    }
    let mut by_dim: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for &c in phi {
        by_dim.entry(fan.dim(c) as i32).or_default().push(c);
    }
    for v in by_dim.values_mut() {
        v.sort_unstable();
    }
    let mut cx = BigradedComplex::default();
    for (&i, cs) in &by_dim {
        cx.dims.insert((i, 0), cs.len());
        if let Some(next) = by_dim.get(&(i + 1)) {
            let cols: Vec<SVec> = cs
                .iter()
                .map(|&s| {
                    SVec::from_pairs(next.iter().enumerate().filter(|(_, &t)| fan.is_face(s, t)).map(|(k, &t)| {
                        let e = crate::cone::incidence_sign(fan.cone(s), fan.cone(t)).expect("codimension one");
                        (k, crate::linalg::q(e as i64))
                    }))
                })
                .collect();
            let m = Matrix::new(next.len(), cols);
            if !m.is_zero() {
                cx.d.insert((i, 0), m);
            }
        }
    }
    Ok(cx)
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_p (−1)^p f_p(Δ) · C(r−p, −q)`: the Euler characteristic of the
/// degree-`q` part of `Γ(ic_t(Δ))`.
pub fn euler_oracle_top(fan: &Fan, q: i32) -> i64 {
    let r = fan.rank as i64;
    fan.f_vector()
        .iter()
        .enumerate()
        .map(|(p, &f)| {
            let s = if p % 2 == 0 { 1 } else { -1 };
            s * f as i64 * binom(r - p as i64, -(q as i64))
        })
        .sum()
}

/// Dimension of `Γ(ic_t(Δ))^p_q` from the face numbers.
pub fn gamma_top_dim(fan: &Fan, p: i32, q: i32) -> usize {
    let f = fan.f_vector();
    if p < 0 || p as usize >= f.len() {
        return 0;
    }
    (f[p as usize] as i64 * binom(fan.rank as i64 - p as i64, -(q as i64))) as usize
}

/// Splits an ambient cell into (generator, mask); re-exported for tests.
pub fn cell_parts(c: usize, r: usize) -> (usize, u32) {
    split(c, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn euler_oracle_values() {
        let p1 = Fan::new(1, vec![vec![1], vec![-1]], &[vec![0], vec![1]]).unwrap();
        assert_eq!(euler_oracle_top(&p1, 0), -1);
        let p2 = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], &[vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        assert_eq!(euler_oracle_top(&p2, -1), -1);
        assert_eq!(euler_oracle_top(&p2, -3), 0);
    }

    #[test]
    fn e_complex_of_a_quadrant_is_acyclic() {
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap();
        let all: Vec<usize> = (0..f.len()).collect();
        let cx = e_complex(&f, &all).unwrap();
        assert!(cx.betti().unwrap().is_zero());
        let zero = e_complex(&f, &[0]).unwrap();
        assert_eq!(zero.betti().unwrap().get(0, 0), 1);
    }

    #[test]
    fn gamma_of_p_of_zero_fan_is_a() {
        let f = Arc::new(Fan::new(2, vec![], &[]).unwrap());
        let p = GemObject::p(&f);
        let g = Assembly::gamma(&p).unwrap();
        let t = g.betti().unwrap();
        assert_eq!((t.get(0, 0), t.get(0, -1), t.get(0, -2)), (1, 2, 1));
    }
}
