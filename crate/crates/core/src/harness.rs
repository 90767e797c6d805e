//! Named, runnable checks of the vanishing, duality, comparison and
//! decomposition statements, each over a single fan. Every failure carries
//! a finite witness; a fan outside a statement's hypothesis yields
//! `HypothesisNotMet`, which is distinct from failure.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::cohomology::{euler_oracle_top, identity_on_cones, induced_ranks, with_jobs, Assembly, BettiTable, MapRank};
use crate::error::{Error, Result};
use crate::fan::{Fan, Perversity};
use crate::gem::{Bidegree, GemObject};
use crate::lattice::IVec;
use crate::linalg::Matrix;
use crate::maps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisNotMet,
}

/// Where and how a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Ray indices of the cone involved, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<Bidegree>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub fan: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Hypothesis failures and construction notes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Restricts per-ray checks to one ray (index into the fan's rays).
    pub ray: Option<usize>,
    /// Worker threads for rank computations; `0` or `None` uses the default.
    pub jobs: Option<usize>,
}

/// The registered checks with one-line descriptions.
pub const REGISTRY: &[(&str, &str)] = &[
    ("lem1.2", "E(F(ρ)) is acyclic for ρ ≠ 0; E(Φ) over a subdivided cone has cohomology det(ρ) in degree r_ρ only"),
    ("lem1.4", "φ(SdP, ρ): i_ρ∘(SdP) → SdP(ρ)[1] is an isomorphism for ρ ≠ 0"),
    ("lem1.5", "ψ: SdP → P is a per-cone quasi-isomorphism and i_ρ*(P) is acyclic for ρ ≠ 0"),
    ("lem1.9", "SdP/k_t agrees with det ⊗ Ā: ψ's kernel lies in k_t and P → ic_t kills exactly det ⊗ N(σ)A(σ)"),
    ("lem1.10", "H^p(Γ(ic_t))_q = 0 for p > q + r"),
    ("thm2.1", "dim H^p_q = dim H^{r−1−p}_{−r−q} for Γ(ic) of a boundary fan F(π)∖{π}"),
    ("thm2.8", "H(Γ(ic(Σ))) → H(Γ(ic(Δ))) is surjective for the barycentric Σ, with dim H(Δ) ≤ dim H(Σ)"),
    ("lem3.1", "for simplicial π: H(ic_t(π)) = Q at (r_π, 0) and H(i_π*ic_t) = Q at (0, −r_π)"),
    ("thm3.2", "for simplicial Δ: ic_b → ic_t and ic_m → ic_t are per-cone quasi-isomorphisms"),
    ("thm3.3", "for simplicial complete Δ: H^p(Γ(ic_t))_q = 0 for p ≠ q + r"),
    ("thm3.5", "for simplicial complete Δ: H(Γ(ic_t(star η))) → H(Γ(ic_t(Δ))) is injective"),
    ("thm3.6", "for simplicial complete Δ̃ and a ray γ: H^p(Γ(ic_t(Δ̃∖star γ)))_q = 0 for p ≠ q + r"),
    ("lem3.7", "for simplicial complete Δ̃ and a ray γ: H^{q+r}(Γ(ic_t(Δ̃)))_q → H^{q+r}(Γ(ic_t(Δ̃∖star γ)))_q is surjective"),
    ("thm4.1", "for complete Δ: H^p(Γ(ic))_q = 0 for p ≠ q + r"),
    ("thm4.2", "for Δ = Δ̃∖{π} built above a boundary fan: H^p(Γ(ic(Δ)))_q = 0 for p ≠ q + r"),
    ("thm4.3", "for F(π)∖{π}: H^p_q = 0 if p + q ≥ 0, p ≠ q + r − 1 or p + q ≤ −1, p ≠ q + r"),
    ("cor4.4", "for ρ ≠ 0: H^i(i_ρ*(ic(F(ρ)∖{ρ})))_j = 0 if i + j ≥ 0, i ≠ j + r_ρ − 1 or i + j ≤ −1, i ≠ j + r_ρ"),
    ("cor4.5", "for ρ ≠ 0: H(ic(ρ)) lives on i + j ≥ 1, i = j + r_ρ and H(i_ρ*ic) on i + j ≤ −1, i = j + r_ρ"),
    ("euler", "Σ_p (−1)^p dim H^p(Γ(ic_t))_q equals Σ_p (−1)^p f_p binom(r − p, −q)"),
];

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

/// A short identifier: the fan's name, or its rank and f-vector.
pub fn fan_id(fan: &Fan) -> String {
    fan.name.clone().unwrap_or_else(|| {
        let f = fan.f_vector().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("r{}:f({})", fan.rank, f)
    })
}

/// Outcome of a check body before it is wrapped into a report.
enum Outcome {
    Pass(Option<String>),
    Fail(Witness),
    NotMet(String),
}

fn fail(cone: Option<Vec<usize>>, bidegree: Option<Bidegree>, detail: impl Into<String>) -> Outcome {
    Outcome::Fail(Witness { cone, bidegree, detail: detail.into() })
}

fn pass() -> Outcome {
    Outcome::Pass(None)
}

/// Runs a registered check on `fan`.
pub fn check(name: &str, fan: &Arc<Fan>, options: &CheckOptions) -> Result<CheckReport> {
    let body: fn(&Arc<Fan>, &CheckOptions) -> Result<Outcome> = match name {
        "lem1.2" => lem1_2,
        "lem1.4" => lem1_4,
        "lem1.5" => lem1_5,
        "lem1.9" => lem1_9,
        "lem1.10" => lem1_10,
        "thm2.1" => thm2_1,
        "thm2.8" => thm2_8,
        "lem3.1" => lem3_1,
        "thm3.2" => thm3_2,
        "thm3.3" => thm3_3,
        "thm3.5" => thm3_5,
        "thm3.6" => thm3_6,
        "lem3.7" => lem3_7,
        "thm4.1" => thm4_1,
        "thm4.2" => thm4_2,
        "thm4.3" => thm4_3,
        "cor4.4" => cor4_4,
        "cor4.5" => cor4_5,
        "euler" => euler,
        _ => return Err(Error::UnknownCheck(name.to_string())),
    };
    if let Some(r) = options.ray {
        if r >= fan.rays.len() {
            return Err(Error::ConeNotInFan(vec![r]));
        }
    }
    let outcome = with_jobs(options.jobs.unwrap_or(0), || body(fan, options))
        .unwrap_or_else(|e| fail(None, None, format!("construction failed: {e}")));
    let (status, witness, note) = match outcome {
        Outcome::Pass(note) => (Status::Pass, None, note),
        Outcome::Fail(w) => (Status::Fail, Some(w), None),
        Outcome::NotMet(why) => (Status::HypothesisNotMet, None, Some(why)),
    };
    Ok(CheckReport { check: name.to_string(), fan: fan_id(fan), status, witness, note })
}

/// Runs every registered check on `fan`, in registry order.
pub fn check_all(fan: &Arc<Fan>, options: &CheckOptions) -> Vec<CheckReport> {
    names().into_iter().map(|n| check(n, fan, options).expect("registered check")).collect()
}

// ---------------------------------------------------------------------------
// helpers

fn ids(fan: &Fan, c: usize) -> Option<Vec<usize>> {
    Some(fan.ray_ids(c).to_vec())
}

/// The first nonzero entry of `table` outside the allowed support.
fn outside(table: &BettiTable, allowed: impl Fn(i32, i32) -> bool) -> Option<(Bidegree, usize)> {
    table.entries.iter().find(|(&(p, q), &d)| d > 0 && !allowed(p, q)).map(|(&b, &d)| (b, d))
}

fn vanishing(table: &BettiTable, cone: Option<Vec<usize>>, what: &str, allowed: impl Fn(i32, i32) -> bool) -> Option<Outcome> {
    outside(table, allowed).map(|(b, d)| fail(cone, Some(b), format!("{what}: dim H^{}_{} = {d}, expected 0", b.0, b.1)))
}

fn first_non_iso(ranks: &[MapRank]) -> Option<&MapRank> {
    ranks.iter().find(|m| m.rank != m.source_dim || m.rank != m.target_dim)
}

fn rank_detail(m: &MapRank) -> String {
    format!("source dim {}, target dim {}, rank {}", m.source_dim, m.target_dim, m.rank)
}

fn arc(f: Fan) -> Arc<Fan> {
    Arc::new(f)
}

fn gamma_betti(obj: &GemObject) -> Result<BettiTable> {
    Assembly::gamma(obj)?.betti()
}

fn ic_middle(fan: &Arc<Fan>) -> Result<GemObject> {
    Ok(GemObject::ic(fan, &Perversity::middle(fan))?.0)
}

fn rays_to_check(fan: &Fan, options: &CheckOptions) -> Vec<usize> {
    let all: Vec<usize> = fan.cones_of_dim(1);
    match options.ray {
        Some(r) => all.into_iter().filter(|&c| fan.ray_ids(c) == [r]).collect(),
        None => all,
    }
}

/// Cone sets as sets of primitive ray vectors (independent of indexing).
fn cone_set(fan: &Fan) -> BTreeSet<Vec<IVec>> {
    (0..fan.len())
        .map(|c| {
            let mut v: Vec<IVec> = fan.ray_ids(c).iter().map(|&r| fan.rays[r].clone()).collect();
            v.sort();
            v
        })
        .collect()
}

/// `(Δ̃, γ)` pairs for statements about a complete simplicial fan with a ray
/// removed: the fan itself with each ray, or, for a boundary fan
/// `F(π)∖{π}`, the barycentric subdivision of the completion Δ̃ above it
/// with the ray through `a(π)`.
fn removal_instances(fan: &Arc<Fan>, options: &CheckOptions) -> std::result::Result<Vec<(Arc<Fan>, usize)>, String> {
    if fan.rank >= 1 && fan.is_complete() && fan.is_simplicial() {
        return Ok(rays_to_check(fan, options).into_iter().map(|g| (Arc::clone(fan), g)).collect());
    }
    if let Some(pi) = fan.as_boundary_fan() {
        let ab = Fan::complete_above_boundary(&pi).map_err(|e| e.to_string())?;
        let full = arc(ab.full);
        let sub = full.barycentric_subdivision();
        // ray k of the subdivision is the barycenter of cone k + 1
        let eta = sub.source.ray_cone(ab.pi - 1).expect("barycenter ray of π");
        return Ok(vec![(Arc::clone(&sub.source), eta)]);
    }
    Err("needs a complete simplicial fan or a boundary fan F(π)∖{π}".into())
}

fn complement_of_star(fan: &Fan, gamma: usize) -> Vec<usize> {
    let star: BTreeSet<usize> = fan.star(gamma).into_iter().collect();
    (0..fan.len()).filter(|c| !star.contains(c)).collect()
}

// ---------------------------------------------------------------------------
// checks

fn lem1_2(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    for rho in 1..fan.len() {
        let table = crate::cohomology::e_complex(fan, fan.faces(rho))?.betti()?;
        if let Some(o) = vanishing(&table, ids(fan, rho), "E(F(ρ))", |_, _| false) {
            return Ok(o);
        }
    }
    // |Σ_ρ| = ρ for the part of the barycentric subdivision over F(ρ)
    let sub = fan.barycentric_subdivision();
    let sigma = &sub.source;
    for rho in 1..fan.len() {
        let over: Vec<usize> = (0..sigma.len()).filter(|&s| fan.is_face(sub.cone_map[s], rho)).collect();
        for &eta in &over {
            let phi: Vec<usize> =
                over.iter().copied().filter(|&s| sigma.is_face(eta, s) && sub.cone_map[s] == rho).collect();
            let table = crate::cohomology::e_complex(sigma, &phi)?.betti()?;
            let expected = BettiTable::from_pairs([((fan.dim(rho) as i32, 0), 1)]);
            if table != expected {
                let detail = format!("E(Φ) for η = {:?} over ρ: got {:?}, expected {:?}", sigma.ray_ids(eta), table.entries, expected.entries);
                return Ok(fail(ids(fan, rho), None, detail));
            }
        }
    }
    Ok(pass())
}

fn lem1_4(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let sdp = GemObject::sdp(fan);
    for rho in 1..fan.len() {
        let circ = Assembly::i_circ(&sdp, rho)?;
        let local = Assembly::local(&sdp, rho)?;
        let mut keys: BTreeSet<Bidegree> = circ.dims().keys().copied().collect();
        keys.extend(local.dims().keys().map(|&(i, j)| (i - 1, j)));
        for b in keys {
            let m: Matrix = maps::phi_local(&circ, &local, rho, b)?;
            let (n, rows, rank) = (m.ncols(), m.rows, m.rank());
            if n != rows || rank != n {
                let detail = format!("φ(SdP, ρ) at {b:?}: {rows}×{n} of rank {rank}");
                return Ok(fail(ids(fan, rho), Some(b), detail));
            }
        }
    }
    Ok(pass())
}

fn lem1_5(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let sdp = GemObject::sdp(fan);
    let p = GemObject::p(fan);
    let psi = maps::psi(&sdp);
    let r = fan.rank;
    for rho in 0..fan.len() {
        let a = Assembly::local(&sdp, rho)?;
        let b = Assembly::local(&p, rho)?;
        let ranks = induced_ranks(&a, &b, 0, &|c, x| vec![(c, psi.apply(c, x, r))])?;
        if let Some(m) = first_non_iso(&ranks) {
            return Ok(fail(ids(fan, rho), Some(m.bidegree), format!("ψ(ρ) on cohomology: {}", rank_detail(m))));
        }
        if rho > 0 {
            let t = Assembly::i_star(&p, rho)?.betti()?;
            if let Some(o) = vanishing(&t, ids(fan, rho), "i_ρ*(P)", |_, _| false) {
                return Ok(o);
            }
        }
    }
    Ok(pass())
}

fn lem1_9(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let sdp = GemObject::sdp(fan);
    let (ic, _) = GemObject::ic(fan, &Perversity::top(fan))?;
    let psi = maps::psi(&sdp);
    let r = fan.rank;
    for s in 1..fan.len() {
        // Ker ψ(σ) ⊆ k_t(σ), so the quotient factors through P
        let v = &sdp.modules[s].v;
        for (b, ech) in &v.parts {
            let rows: Vec<_> = ech.rows().cloned().collect();
            let images: Vec<_> = rows.iter().map(|x| psi.apply(s, x, r)).collect();
            let height = images.iter().filter_map(|y| y.max_index()).max().map_or(0, |m| m + 1);
            for k in Matrix::new(height, images).kernel() {
                let x = k.iter().fold(crate::linalg::SVec::zero(), |acc, (i, c)| acc.add_scaled(c, &rows[*i]));
                if !ic.modules[s].k.contains(*b, &x) {
                    return Ok(fail(ids(fan, s), Some(*b), "an element of Ker ψ(σ) is not in k_t(σ)"));
                }
            }
        }
        // what survives is det(σ) ⊗ A(σ)/N(σ)A(σ): one dimension at (r_σ, 0)
        let m = &ic.modules[s];
        let dims: BTreeMap<Bidegree, usize> =
            m.bidegrees().into_iter().map(|b| (b, m.dim_at(b))).filter(|&(_, d)| d > 0).collect();
        let expected: BTreeMap<Bidegree, usize> = [((fan.dim(s) as i32, 0), 1)].into_iter().collect();
        if dims != expected {
            return Ok(fail(ids(fan, s), None, format!("ic_t(σ) has dimensions {dims:?}, expected {expected:?}")));
        }
    }
    let a = gamma_betti(&ic)?;
    let b = gamma_betti(&GemObject::ic_top_from_p(fan))?;
    if a != b {
        return Ok(fail(None, None, format!("Γ Betti tables differ: SdP/k_t {:?}, det ⊗ Ā {:?}", a.entries, b.entries)));
    }
    Ok(pass())
}

fn lem1_10(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let r = fan.rank as i32;
    let t = gamma_betti(&GemObject::ic_top_from_p(fan))?;
    Ok(vanishing(&t, None, "Γ(ic_t)", |p, q| p <= q + r).unwrap_or_else(pass))
}

fn thm2_1(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    if fan.as_boundary_fan().is_none() {
        return Ok(Outcome::NotMet("needs a boundary fan F(π)∖{π} of a full-dimensional cone".into()));
    }
    let r = fan.rank as i32;
    let t = gamma_betti(&ic_middle(fan)?)?;
    let keys: BTreeSet<Bidegree> = t.entries.keys().flat_map(|&(p, q)| [(p, q), (r - 1 - p, -r - q)]).collect();
    for (p, q) in keys {
        let (a, b) = (t.get(p, q), t.get(r - 1 - p, -r - q));
        if a != b {
            let detail = format!("dim H^{p}_{q} = {a} but dim H^{}_{} = {b}", r - 1 - p, -r - q);
            return Ok(fail(None, Some((p, q)), detail));
        }
    }
    Ok(pass())
}

fn thm2_8(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let sub = fan.barycentric_subdivision();
    let hs = gamma_betti(&ic_middle(&sub.source)?)?;
    let hd = gamma_betti(&ic_middle(fan)?)?;
    let keys: BTreeSet<Bidegree> = hs.entries.keys().chain(hd.entries.keys()).copied().collect();
    for &(p, q) in &keys {
        if hd.get(p, q) > hs.get(p, q) {
            let detail = format!("dim H(Δ) = {} exceeds dim H(Σ) = {}", hd.get(p, q), hs.get(p, q));
            return Ok(fail(None, Some((p, q)), detail));
        }
    }
    let d = match maps::decomposition_ranks(&sub) {
        Ok(d) => d,
        Err(e) => {
            return Ok(fail(None, None, format!("dimension inequality holds; no decomposition map constructed: {e}")));
        }
    };
    for m in &d.ranks {
        let b = m.bidegree;
        if m.source_dim != hs.get(b.0, b.1) || m.target_dim != hd.get(b.0, b.1) {
            return Ok(fail(None, Some(b), format!("map dimensions disagree with Γ Betti tables: {}", rank_detail(m))));
        }
        if m.rank != m.target_dim {
            return Ok(fail(None, Some(b), format!("not surjective: {}", rank_detail(m))));
        }
    }
    Ok(Outcome::Pass(Some(format!("route: {:?}", d.route))))
}

fn lem3_1(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let cones: Vec<usize> = (1..fan.len()).filter(|&c| fan.cone(c).is_simplicial()).collect();
    if cones.is_empty() {
        return Ok(Outcome::NotMet("no simplicial nonzero cone".into()));
    }
    let (ic, _) = GemObject::ic(fan, &Perversity::top(fan))?;
    for pi in cones {
        let r = fan.dim(pi) as i32;
        let local = Assembly::local(&ic, pi)?.betti()?;
        if local != BettiTable::from_pairs([((r, 0), 1)]) {
            return Ok(fail(ids(fan, pi), None, format!("H(ic_t(π)) = {:?}, expected Q at ({r}, 0)", local.entries)));
        }
        let star = Assembly::i_star(&ic, pi)?.betti()?;
        if star != BettiTable::from_pairs([((0, -r), 1)]) {
            return Ok(fail(ids(fan, pi), None, format!("H(i_π* ic_t) = {:?}, expected Q at (0, {})", star.entries, -r)));
        }
    }
    Ok(pass())
}

fn thm3_2(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    if !fan.is_simplicial() {
        return Ok(Outcome::NotMet("fan is not simplicial".into()));
    }
    for low in [Perversity::bottom(fan), Perversity::middle(fan)] {
        let (a, b, nat) = maps::natural_map(fan, &low, &Perversity::top(fan))?;
        for c in 0..fan.len() {
            let (la, lb) = (Assembly::local(&a, c)?, Assembly::local(&b, c)?);
            let ranks = induced_ranks(&la, &lb, 0, &|s, x| vec![(s, nat.apply(s, x, fan.rank))])?;
            if let Some(m) = first_non_iso(&ranks) {
                return Ok(fail(ids(fan, c), Some(m.bidegree), format!("ic_p(σ) → ic_t(σ): {}", rank_detail(m))));
            }
        }
    }
    Ok(pass())
}

fn thm3_3(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    if !(fan.is_simplicial() && fan.is_complete()) {
        return Ok(Outcome::NotMet("needs a simplicial complete fan".into()));
    }
    let r = fan.rank as i32;
    let t = gamma_betti(&GemObject::ic_top_from_p(fan))?;
    Ok(vanishing(&t, None, "Γ(ic_t)", |p, q| p == q + r).unwrap_or_else(pass))
}

fn thm3_5(fan: &Arc<Fan>, options: &CheckOptions) -> Result<Outcome> {
    if !(fan.is_simplicial() && fan.is_complete()) {
        return Ok(Outcome::NotMet("needs a simplicial complete fan".into()));
    }
    let ic = GemObject::ic_top_from_p(fan);
    let whole = Assembly::gamma(&ic)?;
    for eta in rays_to_check(fan, options) {
        let star = Assembly::gamma_on(&ic, &fan.star(eta))?;
        let ranks = induced_ranks(&star, &whole, 0, &identity_on_cones)?;
        if let Some(m) = ranks.iter().find(|m| m.rank != m.source_dim) {
            return Ok(fail(ids(fan, eta), Some(m.bidegree), format!("not injective: {}", rank_detail(m))));
        }
    }
    Ok(pass())
}

fn thm3_6(fan: &Arc<Fan>, options: &CheckOptions) -> Result<Outcome> {
    let instances = match removal_instances(fan, options) {
        Ok(v) => v,
        Err(why) => return Ok(Outcome::NotMet(why)),
    };
    for (full, gamma) in instances {
        let (rest, _) = full.subfan(&complement_of_star(&full, gamma));
        let r = full.rank as i32;
        let t = gamma_betti(&GemObject::ic_top_from_p(&arc(rest)))?;
        if let Some(o) = vanishing(&t, ids(&full, gamma), "Γ(ic_t(Δ̃∖star γ))", |p, q| p == q + r) {
            return Ok(o);
        }
    }
    Ok(pass())
}

fn lem3_7(fan: &Arc<Fan>, options: &CheckOptions) -> Result<Outcome> {
    let instances = match removal_instances(fan, options) {
        Ok(v) => v,
        Err(why) => return Ok(Outcome::NotMet(why)),
    };
    for (full, gamma) in instances {
        let r = full.rank as i32;
        let ic = GemObject::ic_top_from_p(&full);
        let whole = Assembly::gamma(&ic)?;
        let rest = Assembly::gamma_on(&ic, &complement_of_star(&full, gamma))?;
        let ranks = induced_ranks(&whole, &rest, 0, &identity_on_cones)?;
        if let Some(m) = ranks.iter().find(|m| m.bidegree.0 == m.bidegree.1 + r && m.rank != m.target_dim) {
            return Ok(fail(ids(&full, gamma), Some(m.bidegree), format!("not surjective: {}", rank_detail(m))));
        }
    }
    Ok(pass())
}

fn thm4_1(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    if !fan.is_complete() {
        return Ok(Outcome::NotMet("fan is not complete".into()));
    }
    let r = fan.rank as i32;
    let t = gamma_betti(&ic_middle(fan)?)?;
    Ok(vanishing(&t, None, "Γ(ic)", |p, q| p == q + r).unwrap_or_else(pass))
}

fn thm4_2(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let Some(pi) = fan.as_boundary_fan() else {
        return Ok(Outcome::NotMet("instances are built above a boundary fan F(π)∖{π}".into()));
    };
    let ab = Fan::complete_above_boundary(&pi)?;
    let full = arc(ab.full);
    let delta = arc(ab.fan);
    // the existential hypothesis, certified for this instance: removing the
    // star of the ray through a(π) from the barycentric subdivision of Δ̃
    // leaves a barycentric subdivision of Δ
    let sub = full.barycentric_subdivision();
    let eta = sub.source.ray_cone(ab.pi - 1).expect("barycenter ray of π");
    let (rest, _) = sub.source.subfan(&complement_of_star(&sub.source, eta));
    if cone_set(&rest) != cone_set(&delta.barycentric_subdivision().source) {
        return Ok(fail(None, None, "Σ̃∖star(η) is not the barycentric subdivision of Δ"));
    }
    let r = fan.rank as i32;
    let t = gamma_betti(&ic_middle(&delta)?)?;
    Ok(vanishing(&t, None, "Γ(ic(Δ̃∖{π}))", |p, q| p == q + r).unwrap_or_else(pass))
}

/// Support allowed by the boundary-fan vanishing pattern in rank `r`.
fn boundary_support(r: i32) -> impl Fn(i32, i32) -> bool {
    move |p, q| (p + q >= 0 && p == q + r - 1) || (p + q <= -1 && p == q + r)
}

fn thm4_3(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    if fan.as_boundary_fan().is_none() {
        return Ok(Outcome::NotMet("needs a boundary fan F(π)∖{π} of a full-dimensional cone".into()));
    }
    let t = gamma_betti(&ic_middle(fan)?)?;
    Ok(vanishing(&t, None, "Γ(ic(F(π)∖{π}))", boundary_support(fan.rank as i32)).unwrap_or_else(pass))
}

fn cor4_4(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    for rho in 1..fan.len() {
        let f = arc(Fan::from_cone(fan.cone(rho)));
        let top = f.len() - 1;
        let ic = ic_middle(&f)?;
        let t = Assembly::i_circ(&ic, top)?.betti()?;
        if let Some(o) = vanishing(&t, ids(fan, rho), "i_ρ*(ic(F(ρ)∖{ρ}))", boundary_support(fan.dim(rho) as i32)) {
            return Ok(o);
        }
    }
    Ok(pass())
}

fn cor4_5(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let ic = ic_middle(fan)?;
    for rho in 1..fan.len() {
        let r = fan.dim(rho) as i32;
        let local = Assembly::local(&ic, rho)?.betti()?;
        if let Some(o) = vanishing(&local, ids(fan, rho), "ic(ρ)", |i, j| i + j >= 1 && i == j + r) {
            return Ok(o);
        }
        let star = Assembly::i_star(&ic, rho)?.betti()?;
        if let Some(o) = vanishing(&star, ids(fan, rho), "i_ρ*(ic)", |i, j| i + j <= -1 && i == j + r) {
            return Ok(o);
        }
    }
    Ok(pass())
}

fn euler(fan: &Arc<Fan>, _: &CheckOptions) -> Result<Outcome> {
    let t = gamma_betti(&GemObject::ic_top_from_p(fan))?;
    let r = fan.rank as i32;
    for q in -r - 1..=1 {
        let (got, want) = (t.euler(q), euler_oracle_top(fan, q));
        if got != want {
            return Ok(fail(None, Some((0, q)), format!("Euler characteristic {got}, oracle {want} in degree q = {q}")));
        }
    }
    Ok(pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn run(name: &str, fan: Fan) -> CheckReport {
        check(name, &Arc::new(fan), &CheckOptions::default()).unwrap()
    }

    #[test]
    fn unknown_check_is_an_error() {
        let e = check("nosuch", &Arc::new(corpus::p2()), &CheckOptions::default()).unwrap_err();
        assert_eq!(e, Error::UnknownCheck("nosuch".into()));
    }

    #[test]
    fn hypothesis_gates() {
        assert_eq!(run("thm3.3", corpus::cube_faces()).status, Status::HypothesisNotMet);
        assert_eq!(run("thm2.1", corpus::p2()).status, Status::HypothesisNotMet);
        assert_eq!(run("thm4.1", corpus::square_boundary()).status, Status::HypothesisNotMet);
    }

    #[test]
    fn p2_passes_the_small_checks() {
        for name in ["lem1.2", "lem1.4", "lem1.5", "lem1.9", "lem1.10", "thm3.3", "thm4.1", "thm3.5", "euler", "thm2.8"] {
            let rep = run(name, corpus::p2());
            assert!(rep.passed(), "{}", rep.to_json_line());
        }
    }

    #[test]
    fn reports_are_json_lines() {
        let rep = run("thm4.3", corpus::square_boundary());
        assert!(rep.passed(), "{}", rep.to_json_line());
        let v: serde_json::Value = serde_json::from_str(&rep.to_json_line()).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["fan"], "square-boundary");
    }

    #[test]
    fn registry_lists_every_dispatched_check() {
        for n in names() {
            assert!(check(n, &Arc::new(corpus::p1()), &CheckOptions::default()).is_ok());
        }
    }
}
