//! Named unmixed maps between CGEM objects: `ψ`, the unique extension out of
//! `SdP`, comparison maps between perversities, `λ`, `φ_{Σ/Δ}`, `δ_{Σ/Δ}`,
//! `δ̄` for top perversities, `φ(L, ρ)`, and the orientation signs behind
//! `h(Δ, η, w)`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{induced_ranks, Assembly, MapRank};
use crate::cone::incidence_sign;
use crate::error::{Error, Result};
use crate::exterior::cell;
use crate::fan::{Fan, Perversity, QuotientFan, Subdivision};
use crate::gem::{GemMap, GemObject, GenLabel, MixedMap};
use crate::lattice::{self, to_q};
use crate::linalg::{dense_solve, q, sign_of, Matrix, SVec, Q};

/// Sign of `a(α1) ∧ ⋯ ∧ a(αk)` against `det(cone)`, with `a` the sum of
/// primitive rays. `flag` must have length `dim cone`.
pub fn flag_orientation(fan: &Fan, flag: &[usize], cone: usize) -> i32 {
    let vs: Vec<Vec<Q>> = flag.iter().map(|&c| to_q(&fan.cone(c).barycenter())).collect();
    lattice::orientation_sign(&fan.cone(cone).span_basis, &vs)
}

fn flag_of(label: &GenLabel) -> Option<&[usize]> {
    match label {
        GenLabel::Flag(a) => Some(a),
        _ => None,
    }
}

/// `ψ_Δ: SdP(Δ) → P(Δ)`.
pub fn psi(sdp: &GemObject) -> GemMap {
    let fan = &sdp.fan;
    let r = fan.rank;
    let components = sdp
        .modules
        .iter()
        .enumerate()
        .map(|(rho, m)| {
            m.gens
                .iter()
                .map(|g| match &g.label {
                    GenLabel::Unit => SVec::unit(cell(0, 0, r)),
                    GenLabel::Flag(a) if a.len() == fan.dim(rho) => {
                        SVec::from_pairs([(cell(0, 0, r), q(flag_orientation(fan, a, rho) as i64))])
                    }
                    _ => SVec::zero(),
                })
                .collect()
        })
        .collect();
    GemMap { components }
}

/// The unique unmixed map `SdP(Δ) → K` extending `1 ↦ f0` at the zero cone:
/// `f(ρ)(y(ρ)) = d_K(0/ρ)(f0)` and
/// `f(ρ)(z(β)y(σ)y(ρ)) = (−1)^{len β + 1} d_K(σ/ρ)(f(σ)(z(β)y(σ)))`.
///
/// Cones are visited in `order` (any order listing faces first); the result
/// does not depend on it.
pub fn extend_from_zero(sdp: &GemObject, target: &GemObject, f0: &SVec, order: &[usize]) -> Result<GemMap> {
    let fan = &sdp.fan;
    let mut components: Vec<Option<Vec<SVec>>> = vec![None; fan.len()];
    let index: Vec<HashMap<&[usize], usize>> = sdp
        .modules
        .iter()
        .map(|m| m.gens.iter().enumerate().filter_map(|(i, g)| flag_of(&g.label).map(|a| (a, i))).collect())
        .collect();
    for &rho in order {
        if rho == 0 {
            components[0] = Some(vec![f0.clone()]);
            continue;
        }
        let mut imgs = Vec::with_capacity(sdp.modules[rho].gens.len());
        for g in &sdp.modules[rho].gens {
            let a = flag_of(&g.label).ok_or(Error::IllDefinedMap("SdP generator without a flag".into()))?;
            let (prev, face) = if a.len() == 1 { (None, 0) } else { (Some(&a[..a.len() - 1]), a[a.len() - 2]) };
            let Some(src) = components[face].as_ref() else {
                return Err(Error::IllDefinedMap(format!("cone order visits {:?} before its face {:?}", fan.ray_ids(rho), fan.ray_ids(face))));
            };
            let x = match prev {
                None => src[0].clone(),
                Some(p) => src[index[face][p]].clone(),
            };
            let mut y = target.apply(face, rho, &x);
            // sign (−1)^i of φ(SdP, ρ), i = len α − 1
            if a.len() % 2 == 0 {
                y = y.neg();
            }
            imgs.push(y);
        }
        components[rho] = Some(imgs);
    }
    components
        .into_iter()
        .enumerate()
        .map(|(c, x)| x.ok_or_else(|| Error::ConeNotInFan(fan.ray_ids(c).to_vec())))
        .collect::<Result<Vec<_>>>()
        .map(|components| GemMap { components })
}

/// True if two maps agree modulo the target kernels.
pub fn maps_agree(f: &GemMap, g: &GemMap, src: &GemObject, tgt: &GemObject) -> bool {
    let r = src.rank();
    (0..src.fan.len()).all(|c| {
        src.modules[c].v.all_rows().iter().all(|(b, x)| tgt.modules[c].k.contains(*b, &f.apply(c, x, r).sub(&g.apply(c, x, r))))
    })
}

/// The natural map `ic_p(Δ) → ic_{p′}(Δ)` for `p ≤ p′` (both quotients of
/// `SdP(Δ)`). Returns `(ic_p, ic_{p′}, map)`.
pub fn natural_map(fan: &Arc<Fan>, p: &Perversity, p2: &Perversity) -> Result<(GemObject, GemObject, GemMap)> {
    p.check_domain(fan)?;
    p2.check_domain(fan)?;
    p.le(p2, fan)?;
    let (a, _) = GemObject::ic(fan, p)?;
    let (b, _) = GemObject::ic(fan, p2)?;
    let m = GemMap::identity(&a);
    m.check_well_defined(&a, &b)?;
    Ok((a, b, m))
}

/// Index of the Σ-cone `c(α)` for a flag `α` of Δ.
fn sigma_cone(sub: &Subdivision, alpha: &[usize]) -> Result<usize> {
    let ids: Vec<usize> = alpha.iter().map(|c| c - 1).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sub.source.find(&sorted).ok_or(Error::NotBarycentric)
}

fn require_barycentric(sub: &Subdivision) -> Result<&Vec<Vec<usize>>> {
    let flags = sub.flags.as_ref().ok_or(Error::NotBarycentric)?;
    if sub.source.rays.len() + 1 != sub.target.len() {
        return Err(Error::NotBarycentric);
    }
    Ok(flags)
}

/// Generator offsets of each source cone inside its image cone in `f_*`.
fn pushed_offsets(sub: &Subdivision, gens: &[usize]) -> Vec<usize> {
    let mut next = vec![0usize; sub.target.len()];
    let mut off = vec![0usize; sub.source.len()];
    for s in 0..sub.source.len() {
        let rho = sub.cone_map[s];
        off[s] = next[rho];
        next[rho] += gens[s];
    }
    off
}

/// `λ_Δ: SdP(Δ) → f_*P(Σ)`, `z(α) ↦ ⟨a(α1) ∧ ⋯ ∧ a(αk)⟩ · g_{c(α)}`.
/// The target generators are laid out as in [`GemObject::direct_image`].
pub fn lambda(sub: &Subdivision, sdp: &GemObject) -> Result<GemMap> {
    require_barycentric(sub)?;
    let (fan, sigma) = (&sub.target, &sub.source);
    let r = fan.rank;
    // P(Σ) has one generator per cone
    let off = pushed_offsets(sub, &vec![1; sigma.len()]);
    let mut components = Vec::with_capacity(fan.len());
    for rho in 0..fan.len() {
        let mut imgs = Vec::new();
        for g in &sdp.modules[rho].gens {
            match &g.label {
                GenLabel::Unit => imgs.push(SVec::unit(cell(off[0], 0, r))),
                GenLabel::Flag(a) => {
                    let c = sigma_cone(sub, a)?;
                    if sub.cone_map[c] != rho {
                        return Err(Error::NotBarycentric);
                    }
                    let vs: Vec<Vec<Q>> = a.iter().map(|&x| to_q(&fan.cone(x).barycenter())).collect();
                    let s = lattice::orientation_sign(&sigma.cone(c).span_basis, &vs);
                    imgs.push(SVec::from_pairs([(cell(off[c], 0, r), q(s as i64))]));
                }
                GenLabel::Det | GenLabel::Pushed { .. } => return Err(Error::NotBarycentric),
            }
        }
        components.push(imgs);
    }
    Ok(GemMap { components })
}

/// `φ_{Σ/Δ} = λ^{-1} ∘ f_*(ψ_Σ): f_*SdP(Σ) → SdP(Δ)`, as images of the
/// generators of `f_*SdP(Σ)` built from `sdp_sigma`.
pub fn phi_sigma_delta(sub: &Subdivision, sdp_sigma: &GemObject, sdp_delta: &GemObject) -> Result<GemMap> {
    let flags = require_barycentric(sub)?;
    let (fan, sigma) = (&sub.target, &sub.source);
    let r = fan.rank;
    let index: Vec<HashMap<&[usize], usize>> = sdp_delta
        .modules
        .iter()
        .map(|m| m.gens.iter().enumerate().filter_map(|(i, g)| flag_of(&g.label).map(|a| (a, i))).collect())
        .collect();
    let mut components: Vec<Vec<SVec>> = vec![Vec::new(); fan.len()];
    for s in 0..sigma.len() {
        let rho = sub.cone_map[s];
        for g in &sdp_sigma.modules[s].gens {
            let img = match &g.label {
                GenLabel::Unit => SVec::unit(cell(0, 0, r)),
                GenLabel::Flag(b) if b.len() == sigma.dim(s) => {
                    let s_psi = flag_orientation(sigma, b, s);
                    let alpha = &flags[s];
                    let vs: Vec<Vec<Q>> = alpha.iter().map(|&x| to_q(&fan.cone(x).barycenter())).collect();
                    let s_lambda = lattice::orientation_sign(&sigma.cone(s).span_basis, &vs);
                    let gi = *index[rho].get(alpha.as_slice()).ok_or(Error::NotBarycentric)?;
                    SVec::from_pairs([(cell(gi, 0, r), q((s_psi * s_lambda) as i64))])
                }
                _ => SVec::zero(),
            };
            components[rho].push(img);
        }
    }
    Ok(GemMap { components })
}

/// The decomposition map `δ_{Σ/Δ}: f_*ic_q(Σ) → ic_p(Δ)` with its source
/// and target objects.
pub struct Decomposition {
    pub source: GemObject,
    pub target: GemObject,
    pub map: MixedMap,
    /// Components where `φ_{Σ/Δ}` alone did not carry `f_*k_q` into `k_p`
    /// and a correction was solved for (see [`correct_to_chain_map`]).
    pub corrected: Vec<(usize, usize)>,
}

/// Builds `δ_{Σ/Δ}` for perversities `p` on Δ and `q` on Σ with
/// `q(σ) ≤ p(f(σ))`, checking that `φ_{Σ/Δ}(f_*k_q) ⊆ k_p`.
pub fn delta(sub: &Subdivision, p: &Perversity, qv: &Perversity) -> Result<Decomposition> {
    require_barycentric(sub)?;
    let (fan, sigma) = (&sub.target, &sub.source);
    p.check_domain(fan)?;
    qv.check_domain(sigma)?;
    for s in 1..sigma.len() {
        if qv.get(s) > p.get(sub.cone_map[s]) {
            return Err(Error::PerversityInequalityViolated(sigma.ray_ids(s).to_vec()));
        }
    }
    let (ic_sigma, _) = GemObject::ic(sigma, qv)?;
    let sdp_sigma = GemObject::sdp(sigma);
    let (ic_delta, _) = GemObject::ic(fan, p)?;
    let source = GemObject::direct_image(sub, &ic_sigma)?;
    let phi = phi_sigma_delta(sub, &sdp_sigma, &ic_delta)?;
    let phi = MixedMap::from_unmixed(&phi);
    let (map, corrected) = match correct_to_chain_map(&source, &ic_delta, &phi, false) {
        Ok(x) => x,
        Err(_) => correct_to_chain_map(&source, &ic_delta, &phi, true)?,
    };
    map.check_well_defined(&source, &ic_delta)?;
    map.check_chain(&source, &ic_delta)?;
    Ok(Decomposition { source, target: ic_delta, map, corrected })
}

/// Corrects a map `initial` that commutes with the differentials on `V`
/// into a homomorphism `V/K → V'/K'`. The correction is the particular
/// solution of one exact linear system: every component `f(σ/τ)` that is
/// allowed to move (the diagonal on nonzero cones, plus all `σ ≺ τ` when
/// `mixed`) sends each generator of `σ` to its current image plus a vector
/// in a complement of `K'(τ)`, subject to `f(K(σ)) ⊆ K'(τ)` and the chain
/// condition on generators. If `initial` already works nothing moves; the
/// zero cone's diagonal never moves. Returns the map and the pairs that
/// changed.
pub fn correct_to_chain_map(
    src: &GemObject,
    tgt: &GemObject,
    initial: &MixedMap,
    mixed: bool,
) -> Result<(MixedMap, Vec<(usize, usize)>)> {
    let fan = Arc::clone(&src.fan);
    let r = fan.rank;
    let n = fan.len();
    let mut map = initial.clone();
    let movable = |s: usize, t: usize| if s == t { s != 0 } else { mixed };
    let reduce = |t: usize, b: (i32, i32), v: &SVec| -> SVec {
        match tgt.modules[t].k.parts.get(&b) {
            Some(e) => e.reduce(v),
            None => v.clone(),
        }
    };
    enum Kind {
        /// `f(σ/τ)(x)` for `x ∈ K(σ)`.
        Kernel(SVec),
        /// The chain condition at `(σ, τ)` on generator `k` of `σ`.
        Chain(usize),
    }
    struct Row {
        s: usize,
        t: usize,
        b: (i32, i32),
        kind: Kind,
    }
    let mut rows: Vec<Row> = Vec::new();
    for s in 0..n {
        for t in fan.star(s) {
            if movable(s, t) || map.parts.contains_key(&(s, t)) {
                for (b, x) in src.modules[s].k.all_rows() {
                    rows.push(Row { s, t, b, kind: Kind::Kernel(x) });
                }
            }
            for (k, g) in src.modules[s].gens.iter().enumerate() {
                rows.push(Row { s, t, b: (g.degree + 1, 0), kind: Kind::Chain(k) });
            }
        }
    }
    let eval = |m: &MixedMap, row: &Row| -> SVec {
        let v = match &row.kind {
            Kind::Kernel(x) => m.apply(row.s, row.t, x, r),
            Kind::Chain(k) => {
                let g = SVec::unit(cell(*k, 0, r));
                let mut acc = SVec::zero();
                for &mu in fan.faces(row.t) {
                    if !fan.is_face(row.s, mu) {
                        continue;
                    }
                    acc = acc.add(&tgt.apply(mu, row.t, &m.apply(row.s, mu, &g, r)));
                    acc = acc.sub(&m.apply(mu, row.t, &src.apply(row.s, mu, &g), r));
                }
                acc
            }
        };
        reduce(row.t, row.b, &v)
    };
    let residuals: Vec<SVec> = rows.par_iter().map(|row| eval(&map, row)).collect();
    if residuals.iter().all(|v| v.is_zero()) {
        return Ok((map, Vec::new()));
    }
    // Rows a component (α, β) can reach: kernel rows at (α, β), and chain
    // rows at (α, τ ⊇ β) and (σ ⊆ α, β).
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (j, row) in rows.iter().enumerate() {
        by_pair.entry((row.s, row.t)).or_default().push(j);
    }
    let touching = |a: usize, b: usize| -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for j in by_pair.get(&(a, b)).into_iter().flatten() {
            if matches!(rows[*j].kind, Kind::Kernel(_)) {
                out.push(*j);
            }
        }
        for t in fan.star(b) {
            out.extend(by_pair.get(&(a, t)).into_iter().flatten().filter(|j| matches!(rows[**j].kind, Kind::Chain(_))));
        }
        for &s in fan.faces(a) {
            if s != a {
                out.extend(by_pair.get(&(s, b)).into_iter().flatten().filter(|j| matches!(rows[**j].kind, Kind::Chain(_))));
            }
        }
        out
    };
    let mut vars: Vec<(usize, usize, usize, SVec)> = Vec::new();
    for s in 0..n {
        for t in fan.star(s) {
            if !movable(s, t) {
                continue;
            }
            for (k, g) in src.modules[s].gens.iter().enumerate() {
                let b = (g.degree, 0);
                let mut comp = crate::linalg::Echelon::new();
                for v in tgt.modules[t].v.rows_at(b) {
                    let w = reduce(t, b, &v);
                    if comp.insert(&w).is_some() {
                        vars.push((s, t, k, w));
                    }
                }
            }
        }
    }
    let stride = tgt.modules.iter().map(|m| m.gens.len()).max().unwrap_or(1).max(1) << r;
    let place = |j: usize, v: &SVec| v.reindex(|c| Some(j * stride + c));
    let columns: Vec<SVec> = vars
        .par_iter()
        .map(|(s, t, k, img)| {
            let mut imgs = vec![SVec::zero(); src.modules[*s].gens.len()];
            imgs[*k] = img.clone();
            let unit = MixedMap { parts: [((*s, *t), imgs)].into_iter().collect() };
            let mut col = SVec::zero();
            for j in touching(*s, *t) {
                let e = eval(&unit, &rows[j]);
                if !e.is_zero() {
                    col = col.add(&place(j, &e));
                }
            }
            col
        })
        .collect();
    let mut echelon = crate::linalg::Echelon::tracked();
    let mut labels: Vec<usize> = Vec::new();
    for (vi, col) in columns.iter().enumerate() {
        if echelon.insert(col).is_some() {
            labels.push(vi);
        }
    }
    let mut rhs = SVec::zero();
    for (j, v) in residuals.iter().enumerate() {
        rhs = rhs.sub(&place(j, v));
    }
    let (rem, combo) = echelon.decompose(&rhs);
    if !rem.is_zero() {
        let j = rem.leading().map(|(c, _)| c / stride).unwrap_or(0);
        return Err(Error::IllDefinedMap(format!(
            "no {} homomorphism extends the given one; obstruction at {:?} -> {:?}",
            if mixed { "mixed" } else { "unmixed" },
            fan.ray_ids(rows[j].s),
            fan.ray_ids(rows[j].t)
        )));
    }
    let mut changed = Vec::new();
    for (l, a) in combo.iter() {
        let (s, t, k, img) = &vars[labels[*l]];
        let imgs = map.parts.entry((*s, *t)).or_insert_with(|| vec![SVec::zero(); src.modules[*s].gens.len()]);
        imgs[*k] = imgs[*k].add_scaled(a, img);
        changed.push((*s, *t));
    }
    changed.sort_unstable();
    changed.dedup();
    Ok((map, changed))
}

/// `δ̄_{Δ′/Δ}: f_*ic_t(Δ′) → ic_t(Δ)` in the `det ⊗ Ā` description: the
/// identity on equal-dimensional pairs, zero otherwise.
pub fn bar_delta_top(sub: &Subdivision) -> Result<Decomposition> {
    let src_obj = GemObject::ic_top_from_p(&sub.source);
    let source = GemObject::direct_image(sub, &src_obj)?;
    let target = GemObject::ic_top_from_p(&sub.target);
    let r = sub.target.rank;
    let mut components: Vec<Vec<SVec>> = vec![Vec::new(); sub.target.len()];
    for s in 0..sub.source.len() {
        let rho = sub.cone_map[s];
        let img = if sub.source.dim(s) == sub.target.dim(rho) {
            if sub.source.cone(s).span_basis != sub.target.cone(rho).span_basis {
                return Err(Error::FanMismatch);
            }
            SVec::unit(cell(0, 0, r))
        } else {
            SVec::zero()
        };
        components[rho].push(img);
    }
    let map = GemMap { components };
    map.check_well_defined(&source, &target)?;
    Ok(Decomposition { source, target, map: MixedMap::from_unmixed(&map), corrected: Vec::new() })
}

/// How the cohomology map of `δ_{Σ/Δ}` for middle perversities was realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionRoute {
    /// A homomorphism `f_*ic_m(Σ) → ic_m(Δ)` extending `φ_{Σ/Δ}`.
    Direct,
    /// `δ_{t←m}: f_*ic_m(Σ) → ic_t(Δ)` followed by the inverse of the natural
    /// map `ic_m(Δ) → ic_t(Δ)`, certified to be a quasi-isomorphism on `Γ`.
    ThroughTop,
}

/// Ranks of `H(Γ(ic_m(Σ))) → H(Γ(ic_m(Δ)))` induced by `δ_{Σ/Δ}`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionRanks {
    pub route: DecompositionRoute,
    pub ranks: Vec<MapRank>,
}

fn is_isomorphism(ranks: &[MapRank]) -> bool {
    ranks.iter().all(|m| m.rank == m.source_dim && m.rank == m.target_dim)
}

/// Computes the cohomology map of `δ_{Σ/Δ}` for middle perversities.
///
/// Fans whose cones have dimension at most two admit `δ` directly. A
/// simplicial Δ goes through the top perversity, where `δ` always exists;
/// the comparison `ic_m(Δ) → ic_t(Δ)` is checked to be an isomorphism on
/// `Γ`-cohomology before it is inverted. Otherwise the direct construction
/// is attempted, and its failure carries the obstructing cone pair.
pub fn decomposition_ranks(sub: &Subdivision) -> Result<DecompositionRanks> {
    let fan = &sub.target;
    let small = (0..fan.len()).all(|c| fan.dim(c) <= 2);
    if !small && fan.is_simplicial() {
        let (mid, top, nat) = natural_map(fan, &Perversity::middle(fan), &Perversity::top(fan))?;
        let (gm, gt) = (Assembly::gamma(&mid)?, Assembly::gamma(&top)?);
        let nat_ranks = induced_ranks(&gm, &gt, 0, &|c, x| vec![(c, nat.apply(c, x, fan.rank))])?;
        if is_isomorphism(&nat_ranks) {
            let d = delta(sub, &Perversity::top(fan), &Perversity::middle(&sub.source))?;
            let gs = Assembly::gamma(&d.source)?;
            let ranks = induced_ranks(&gs, &gt, 0, &|c, x| d.map.images(fan, c, x))?;
            let hm = gm.betti()?;
            let ranks = ranks
                .into_iter()
                .map(|m| MapRank { target_dim: hm.get(m.bidegree.0, m.bidegree.1), ..m })
                .collect();
            return Ok(DecompositionRanks { route: DecompositionRoute::ThroughTop, ranks });
        }
    }
    let d = delta(sub, &Perversity::middle(fan), &Perversity::middle(&sub.source))?;
    let (gs, gt) = (Assembly::gamma(&d.source)?, Assembly::gamma(&d.target)?);
    let ranks = induced_ranks(&gs, &gt, 0, &|c, x| d.map.images(fan, c, x))?;
    Ok(DecompositionRanks { route: DecompositionRoute::Direct, ranks })
}

/// The matrix of `φ(L, ρ): i_ρ∘(L)^i → L(ρ)^{i+1}` at bidegree `b` of the
/// source, in the bases of the two assemblies over `A(ρ)`.
pub fn phi_local(circ: &Assembly, local: &Assembly, rho: usize, b: (i32, i32)) -> Result<Matrix> {
    let n = circ.dims().get(&b).copied().unwrap_or(0);
    let tb = (b.0 + 1, b.1);
    let rows = local.dims().get(&tb).copied().unwrap_or(0);
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut col = SVec::zero();
        for (s, x) in circ.lift(b, &SVec::unit(k)) {
            let y = circ.obj.apply(s, rho, &x);
            col = col.add(&local.coordinates(rho, tb, &y)?);
        }
        cols.push(col);
    }
    Ok(Matrix::new(rows, cols))
}

/// Orientation data behind `h(Δ, η, w)`: for every star cone `σ`,
/// `det(σ) = s_σ · w ∧ ũ_1 ∧ ⋯ ∧ ũ_k` where the `ũ_i ∈ N(σ)_Q` lift the
/// canonical basis of `N′(σ[η])`.
pub struct QuotientSigns {
    pub quotient: QuotientFan,
    /// `(σ, σ[η], s_σ)`.
    pub signs: Vec<(usize, usize, i32)>,
}

pub fn quotient_signs(fan: &Fan, eta: usize) -> Result<QuotientSigns> {
    if eta >= fan.len() {
        return Err(Error::ConeNotInFan(vec![eta]));
    }
    let quotient = fan.quotient(eta);
    let w: Vec<Vec<Q>> = fan.cone(eta).span_basis.iter().map(|b| to_q(b)).collect();
    let proj: Vec<Vec<Q>> = quotient.projection.iter().map(|m| to_q(m)).collect();
    let mut signs = Vec::with_capacity(quotient.map.len());
    for &(s, s_bar) in &quotient.map {
        let basis = &fan.cone(s).span_basis;
        let images: Vec<Vec<Q>> = basis.iter().map(|b| proj.iter().map(|m| dot(m, &to_q(b))).collect()).collect();
        let mut vs = w.clone();
        for u in &quotient.fan.cone(s_bar).span_basis {
            // u = Σ c_i · proj(b_i), lifted to Σ c_i b_i
            let c = dense_solve(&images, &to_q(u)).ok_or(Error::IllDefinedMap("quotient basis does not lift".into()))?;
            let mut lift = vec![q(0); fan.rank];
            for (ci, b) in c.iter().zip(basis) {
                for (x, y) in lift.iter_mut().zip(b) {
                    *x += ci * q(*y);
                }
            }
            vs.push(lift);
        }
        let coef = lattice::wedge_coefficient(basis, &vs);
        if coef.clone() * coef.clone() != q(1) {
            return Err(Error::IllDefinedMap(format!("orientation coefficient {coef} is not a unit")));
        }
        signs.push((s, s_bar, sign_of(&coef)));
    }
    Ok(QuotientSigns { quotient, signs })
}

fn dot(m: &[Q], v: &[Q]) -> Q {
    m.iter().zip(v).fold(q(0), |acc, (a, b)| acc + a * b)
}

impl QuotientSigns {
    /// Checks `s_τ ε(σ,τ) = (−1)^{r_η} ε′(σ[η],τ[η]) s_σ` on every
    /// codimension-one pair of the star, i.e. that the signed identification
    /// is an isomorphism of complexes `ic_t(Δ(η≺)) ≅ ε_η(ic_t(Δ[η]))[−r_η]`.
    pub fn check(&self, fan: &Fan, eta: usize) -> Result<()> {
        let sign: HashMap<usize, (usize, i32)> = self.signs.iter().map(|&(s, b, e)| (s, (b, e))).collect();
        let r_eta = fan.dim(eta);
        for (&s, &(sb, ss)) in &sign {
            for &t in fan.cofacets(s) {
                let (tb, st) = sign[&t];
                let e = incidence_sign(fan.cone(s), fan.cone(t))?;
                let e2 = incidence_sign(self.quotient.fan.cone(sb), self.quotient.fan.cone(tb))?;
                let lhs = st * e;
                let rhs = if r_eta % 2 == 0 { 1 } else { -1 } * e2 * ss;
                if lhs != rhs {
                    return Err(Error::NotChainMap(format!("quotient identification at {:?} ≺ {:?}", fan.ray_ids(s), fan.ray_ids(t))));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;

    fn p2() -> Arc<Fan> {
        Arc::new(Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], &[vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap())
    }

    #[test]
    fn psi_is_a_chain_map() {
        let f = p2();
        let sdp = GemObject::sdp(&f);
        let p = GemObject::p(&f);
        psi(&sdp).check_chain(&sdp, &p).unwrap();
    }

    #[test]
    fn psi_on_a_two_cone_has_opposite_signs() {
        let f = Arc::new(Fan::new(2, vec![vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap());
        let sdp = GemObject::sdp(&f);
        let top = f.find(&[0, 1]).unwrap();
        let m = psi(&sdp);
        let vals: Vec<Q> = m.components[top].iter().filter(|x| !x.is_zero()).map(|x| x.iter().next().unwrap().1.clone()).collect();
        assert_eq!(vals.len(), 2);
        assert_eq!(vals[0].clone() + vals[1].clone(), q(0));
    }

    #[test]
    fn extension_into_p_is_psi_and_into_ic_is_the_quotient() {
        let f = p2();
        let sdp = GemObject::sdp(&f);
        let p = GemObject::p(&f);
        let order: Vec<usize> = (0..f.len()).collect();
        let e = extend_from_zero(&sdp, &p, &SVec::unit(0), &order).unwrap();
        assert!(maps_agree(&e, &psi(&sdp), &sdp, &p));
        let (ic, quot) = GemObject::ic(&f, &Perversity::middle(&f)).unwrap();
        let e2 = extend_from_zero(&sdp, &ic, &SVec::unit(0), &order).unwrap();
        assert!(maps_agree(&e2, &quot, &sdp, &ic));
    }

    #[test]
    fn lambda_is_a_chain_isomorphism_on_generators() {
        let f = p2();
        let sub = f.barycentric_subdivision();
        let sdp = GemObject::sdp(&f);
        let ps = GemObject::direct_image(&sub, &GemObject::p(&sub.source)).unwrap();
        let l = lambda(&sub, &sdp).unwrap();
        l.check_chain(&sdp, &ps).unwrap();
        for (c, m) in sdp.modules.iter().enumerate() {
            assert_eq!(m.gens.len(), ps.modules[c].gens.len());
        }
    }

    #[test]
    fn bar_delta_top_commutes_on_a_split_quadrant() {
        let f = Arc::new(Fan::new(2, vec![vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap());
        let sub = f.barycentric_subdivision();
        let d = bar_delta_top(&sub).unwrap();
        d.map.check_chain(&d.source, &d.target).unwrap();
    }

    #[test]
    fn quotient_signs_of_p2_and_a_square_cone() {
        let f = p2();
        for eta in 0..f.len() {
            quotient_signs(&f, eta).unwrap().check(&f, eta).unwrap();
        }
        let sq = Cone::from_rays(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap();
        let g = Fan::from_cone(&sq);
        for eta in 0..g.len() {
            quotient_signs(&g, eta).unwrap().check(&g, eta).unwrap();
        }
    }
}
