//! Acceptance criteria 1–9, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are printed as they complete; exits nonzero if any
//! criterion fails.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fanic::cohomology::{euler_oracle_top, Assembly};
use fanic::harness::{self, CheckOptions, CheckReport, Status};
use fanic::io::FanDocument;
use fanic::{corpus, BettiTable, Fan, GemObject, Perversity};

type Verdict = Result<String, String>;

struct Ctx {
    corpus: Vec<Arc<Fan>>,
    reports: HashMap<(String, String), CheckReport>,
}

impl Ctx {
    fn fan(&self, name: &str) -> Arc<Fan> {
        self.corpus.iter().find(|f| f.name.as_deref() == Some(name)).cloned().expect("corpus member")
    }

    fn report(&mut self, check: &str, fan: &Arc<Fan>) -> CheckReport {
        let key = (check.to_string(), harness::fan_id(fan));
        self.reports
            .entry(key)
            .or_insert_with(|| harness::check(check, fan, &CheckOptions::default()).expect("registered check"))
            .clone()
    }

    /// Runs `check` on each fan; every report must pass.
    fn require_pass(&mut self, check: &str, fans: &[Arc<Fan>]) -> Result<usize, String> {
        for fan in fans {
            let r = self.report(check, fan);
            if !r.passed() {
                return Err(r.to_json_line());
            }
        }
        Ok(fans.len())
    }

    fn simplicial_complete(&self) -> Vec<Arc<Fan>> {
        self.corpus.iter().filter(|f| f.is_simplicial() && f.is_complete()).cloned().collect()
    }

    fn boundary_fans(&self) -> Vec<Arc<Fan>> {
        self.corpus.iter().filter(|f| f.as_boundary_fan().is_some()).cloned().collect()
    }
}

fn name(fan: &Fan) -> String {
    harness::fan_id(fan)
}

fn gamma_betti(obj: &GemObject) -> BettiTable {
    Assembly::gamma(obj).and_then(|a| a.betti()).expect("Γ cohomology")
}

fn ic_table(fan: &Arc<Fan>, p: &Perversity) -> BettiTable {
    gamma_betti(&GemObject::ic(fan, p).expect("ic construction").0)
}

fn within(budget: Duration, start: Instant, v: Verdict) -> Verdict {
    let t = start.elapsed();
    match v {
        Ok(msg) if t > budget => Err(format!("{msg}; but took {t:.1?}, budget {budget:?}")),
        other => other,
    }
}

fn c1_axioms(ctx: &mut Ctx) -> Verdict {
    let mut objects = 0;
    for fan in ctx.corpus.clone() {
        let sdp = GemObject::sdp(&fan);
        let mut objs = vec![GemObject::p(&fan), GemObject::ic_top_from_p(&fan)];
        for p in [Perversity::bottom(&fan), Perversity::middle(&fan), Perversity::top(&fan)] {
            objs.push(GemObject::kernel_k(&sdp, &p).map_err(|e| format!("{}: k_p: {e}", name(&fan)))?);
            objs.push(GemObject::ic(&fan, &p).map_err(|e| format!("{}: ic_p: {e}", name(&fan)))?.0);
        }
        objs.push(sdp);
        for (i, o) in objs.iter().enumerate() {
            o.check_axiom().map_err(|e| format!("{}: object {i}: {e}", name(&fan)))?;
        }
        objects += objs.len();
    }
    let fans = ctx.corpus.clone();
    let n = ctx.require_pass("lem1.2", &fans)?;
    Ok(format!("{objects} objects satisfy the square-zero condition; E(F(ρ)) acyclic on {n} fans"))
}

fn c2_resolution(ctx: &mut Ctx) -> Verdict {
    let fans = ctx.corpus.clone();
    for check in ["lem1.4", "lem1.5", "lem1.9"] {
        ctx.require_pass(check, &fans)?;
    }
    Ok(format!("lem1.4, lem1.5, lem1.9 pass on {} fans", fans.len()))
}

fn c3_golden(ctx: &mut Ctx) -> Verdict {
    let golden = [
        ("p1", vec![((0, -1), 1), ((1, 0), 1)]),
        ("p2", vec![((0, -2), 1), ((1, -1), 1), ((2, 0), 1)]),
    ];
    for (n, entries) in golden {
        let fan = ctx.fan(n);
        let got = ic_table(&fan, &Perversity::middle(&fan));
        let want = BettiTable::from_pairs(entries);
        if got != want {
            return Err(format!("{n}: got {:?}, want {:?}", got.entries, want.entries));
        }
        let r = fan.rank as i32;
        for q in -r - 1..=1 {
            if got.euler(q) != euler_oracle_top(&fan, q) {
                return Err(format!("{n}: Euler characteristic at q = {q} disagrees with the f-vector oracle"));
            }
        }
    }
    Ok("P^1 and P^2 middle tables match; Euler oracle agrees".into())
}

fn c4_diagonal(ctx: &mut Ctx) -> Verdict {
    let sc = ctx.simplicial_complete();
    ctx.require_pass("thm3.3", &sc)?;
    let mut complete = sc.clone();
    complete.push(ctx.fan("cube-faces"));
    ctx.require_pass("thm4.1", &complete)?;
    let bd = vec![ctx.fan("square-boundary"), ctx.fan("cube-boundary")];
    ctx.require_pass("thm4.3", &bd)?;
    let all = ctx.corpus.clone();
    ctx.require_pass("cor4.5", &all)?;
    Ok(format!(
        "thm3.3 on {} simplicial complete fans, thm4.1 on {}, thm4.3 on both boundary fans, cor4.5 on {}",
        sc.len(),
        complete.len(),
        all.len()
    ))
}

fn c5_duality(ctx: &mut Ctx) -> Verdict {
    let bd = ctx.boundary_fans();
    if bd.len() < 2 {
        return Err(format!("expected two boundary fans in the corpus, found {}", bd.len()));
    }
    ctx.require_pass("thm2.1", &bd)?;
    Ok(format!("thm2.1 on {} boundary fans", bd.len()))
}

fn c6_decomposition(ctx: &mut Ctx) -> Verdict {
    let mut failures = Vec::new();
    for fan in ctx.corpus.clone() {
        let r = ctx.report("thm2.8", &fan);
        if !r.passed() {
            failures.push(r.to_json_line());
        }
    }
    if failures.is_empty() {
        Ok(format!("thm2.8 on {} fans", ctx.corpus.len()))
    } else {
        Err(failures.join("\n    "))
    }
}

fn c7_injective_surjective(ctx: &mut Ctx) -> Verdict {
    let sc = ctx.simplicial_complete();
    ctx.require_pass("thm3.5", &sc)?;
    let bd = ctx.boundary_fans();
    ctx.require_pass("lem3.7", &bd)?;
    ctx.require_pass("lem3.7", &sc)?;
    Ok(format!(
        "thm3.5 for every ray of {} fans; lem3.7 above {} boundary fans and on {} complete fans",
        sc.len(),
        bd.len(),
        sc.len()
    ))
}

fn c8_negative_control(ctx: &mut Ctx) -> Verdict {
    let tables = |fan: &Arc<Fan>| (ic_table(fan, &Perversity::bottom(fan)), ic_table(fan, &Perversity::top(fan)));
    let boundary = ctx.fan("square-boundary");
    let (bb, bt) = tables(&boundary);
    let full = Arc::new(corpus::square_cone_fan());
    let (fb, ft) = tables(&full);
    if fb == ft {
        return Err(format!("square-cone: bottom and top tables agree: {:?}", fb.entries));
    }
    Ok(format!(
        "square-cone: bottom {:?} ≠ top {:?}; square-boundary (simplicial) tables {}",
        fb.entries,
        ft.entries,
        if bb == bt { "agree" } else { "differ" }
    ))
}

/// The same fan with rays reversed then rotated, cones listed in reverse.
fn permuted(fan: &Fan) -> Fan {
    let n = fan.rays.len();
    let new_index = |i: usize| (n - 1 - i + 1) % n.max(1);
    let mut rays = vec![Vec::new(); n];
    for (i, r) in fan.rays.iter().enumerate() {
        rays[new_index(i)] = r.clone();
    }
    let cones: Vec<Vec<usize>> =
        fan.maximal_ray_sets().iter().rev().map(|c| c.iter().rev().map(|&i| new_index(i)).collect()).collect();
    let cones = if cones.iter().all(|c| c.is_empty()) { vec![Vec::new()] } else { cones };
    let f = Fan::new(fan.rank, rays, &cones).expect("permuted fan is valid");
    match &fan.name {
        Some(n) => f.with_name(n),
        None => f,
    }
}

/// What a report says independently of how rays and cones are numbered.
fn invariant_part(r: &CheckReport) -> (String, Status, Option<String>, Option<(i32, i32)>) {
    (r.check.clone(), r.status, r.note.clone(), r.witness.as_ref().and_then(|w| w.bidegree))
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fanic")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.code().unwrap_or(-1) > 1 {
        return Err(format!("fanic {args:?} exited with {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn c9_determinism(ctx: &mut Ctx) -> Verdict {
    let perversities = |f: &Fan| [Perversity::bottom(f), Perversity::middle(f), Perversity::top(f)];
    for fan in ctx.corpus.clone() {
        let perm = Arc::new(permuted(&fan));
        for (p, q) in perversities(&fan).iter().zip(perversities(&perm).iter()) {
            let (a, b) = (ic_table(&fan, p).to_tsv(), ic_table(&perm, q).to_tsv());
            if a != b {
                return Err(format!("{}: Betti table changes under permutation:\n{a}vs\n{b}", name(&fan)));
            }
        }
        for check in harness::names() {
            let orig = ctx.report(check, &fan);
            let other = harness::check(check, &perm, &CheckOptions::default()).map_err(|e| e.to_string())?;
            if invariant_part(&orig) != invariant_part(&other) {
                return Err(format!("{check} changes under permutation:\n    {}\n    {}", orig.to_json_line(), other.to_json_line()));
            }
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dirs = dir.path().to_str().ok_or("non-UTF-8 temp dir")?;
    run_bin(&["corpus", "export", dirs])?;
    let path = |n: &str| dir.path().join(format!("{n}.json"));
    for fan in &ctx.corpus {
        let file = path(&name(fan));
        let file = file.to_str().ok_or("non-UTF-8 path")?;
        for p in ["bottom", "middle", "top"] {
            let one = run_bin(&["--jobs", "1", "betti", file, "--perversity", p, "--format", "json"])?;
            let many = run_bin(&["--jobs", "4", "betti", file, "--perversity", p, "--format", "json"])?;
            if one != many {
                return Err(format!("{}: betti --perversity {p} differs between --jobs 1 and --jobs 4", name(fan)));
            }
        }
    }
    for n in ["p2", "square-boundary", "random-1"] {
        let file = path(n);
        let file = file.to_str().ok_or("non-UTF-8 path")?;
        let one = run_bin(&["--jobs", "1", "check", file, "--all"])?;
        let many = run_bin(&["--jobs", "4", "check", file, "--all"])?;
        if one != many {
            return Err(format!("{n}: check --all differs between --jobs 1 and --jobs 4"));
        }
    }
    // the exported documents themselves reproduce
    for fan in &ctx.corpus {
        let text = std::fs::read_to_string(path(&name(fan))).map_err(|e| e.to_string())?;
        if text != FanDocument::from_fan(fan).to_json() {
            return Err(format!("{}: exported document differs from the in-process one", name(fan)));
        }
    }
    Ok(format!(
        "tables and {} check reports invariant under permutation on {} fans; CLI output identical for --jobs 1 and 4",
        harness::names().len(),
        ctx.corpus.len()
    ))
}

fn main() -> ExitCode {
    assert!(Path::new(env!("CARGO_BIN_EXE_fanic")).exists());
    let mut ctx = Ctx { corpus: corpus::corpus().into_iter().map(Arc::new).collect(), reports: HashMap::new() };
    let minute = Duration::from_secs(60);
    let unlimited = Duration::MAX;
    let criteria: [(&str, fn(&mut Ctx) -> Verdict, Duration); 9] = [
        ("axiom suite", c1_axioms, minute),
        ("resolution suite", c2_resolution, minute),
        ("golden Betti tables", c3_golden, unlimited),
        ("diagonal theorems", c4_diagonal, 5 * minute),
        ("duality", c5_duality, unlimited),
        ("decomposition", c6_decomposition, unlimited),
        ("injectivity/surjectivity", c7_injective_surjective, unlimited),
        ("negative control", c8_negative_control, unlimited),
        ("determinism", c9_determinism, unlimited),
    ];
    let mut failed = 0;
    for (i, (label, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = within(budget, start, run(&mut ctx));
        let t = start.elapsed();
        match verdict {
            Ok(msg) => println!("criterion {}: PASS  {label} ({t:.1?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {label} ({t:.1?}):\n    {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
