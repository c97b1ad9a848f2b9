use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{prime_power, RunConfig};
use super::{io, verify, ModeFlag, EXIT_INCOMPLETE, EXIT_NOT_A_CAP};
use crate::cap::{self, CapSet, Label};
use crate::codes;
use crate::cover::{self, CoverMode};
use crate::error::Result;
use crate::field::{Elem, Field, FieldCtx, Level};
use crate::linperm;
use crate::veronese;

pub const DEFAULT_INSTANCES: [(u32, u32); 5] = [(3, 1), (4, 1), (5, 1), (7, 1), (3, 2)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Extra `(q, n)` instances beyond the default list.
    pub include: Vec<(u32, u32)>,
    pub seed: u64,
    pub max_space: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            include: Vec::new(),
            seed: 0,
            max_space: 1 << 21,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub instances: Vec<(u32, u32)>,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

struct Instance {
    q: u32,
    n: u32,
    ctx: FieldCtx,
    cap: CapSet,
    built_in: Duration,
}

impl Instance {
    fn new(q: u32, n: u32) -> Result<Self> {
        let (p, h) = prime_power(q)?;
        let t = Instant::now();
        let ctx = FieldCtx::make_tower(p, h, n)?;
        let cap = cap::build_cap(&ctx)?;
        Ok(Instance {
            q,
            n,
            ctx,
            cap,
            built_in: t.elapsed(),
        })
    }

    fn tag(&self) -> String {
        format!("({},{})", self.q, self.n)
    }
}

/// `2 (q^{2n+1} - 1) / (q - 1)`.
pub fn expected_size(q: u32, n: u32) -> u64 {
    let q = u64::from(q);
    2 * (q.pow(2 * n + 1) - 1) / (q - 1)
}

struct Check {
    id: u32,
    title: &'static str,
    passed: bool,
    details: Vec<String>,
    start: Instant,
}

impl Check {
    fn new(id: u32, title: &'static str) -> Self {
        Check {
            id,
            title,
            passed: true,
            details: Vec::new(),
            start: Instant::now(),
        }
    }

    fn record(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn finish(self) -> CriterionResult {
        CriterionResult {
            id: self.id,
            title: self.title.into(),
            passed: self.passed,
            details: self.details,
            elapsed_ms: self.start.elapsed().as_millis(),
        }
    }
}

fn construction_limit(_: &Instance) -> Duration {
    Duration::from_secs(1)
}

fn cap_limit(inst: &Instance) -> Duration {
    match (inst.n, inst.q) {
        (1, _) => Duration::from_secs(1),
        (2, 3) => Duration::from_secs(30),
        _ => Duration::from_secs(300),
    }
}

fn c1_sizes(insts: &[Instance]) -> CriterionResult {
    let mut c = Check::new(1, "cap sizes");
    for i in insts {
        let want = expected_size(i.q, i.n);
        let ok = i.cap.len() as u64 == want && i.built_in < construction_limit(i);
        c.record(ok, format!("{} size {} (expected {want}) built in {:?}", i.tag(), i.cap.len(), i.built_in));
    }
    c.finish()
}

fn c2_cap(insts: &[Instance]) -> CriterionResult {
    let mut c = Check::new(2, "no three collinear");
    for i in insts {
        let t = Instant::now();
        let r = cap::verify_cap(&i.ctx, &i.cap.points);
        let el = t.elapsed();
        c.record(
            r.is_cap && el < cap_limit(i),
            format!("{} {} violations, {} pairs, {el:?}", i.tag(), r.violations.len(), r.pairs_checked),
        );
    }
    c.finish()
}

fn c3_complete(insts: &[Instance], max_space: u64) -> Result<CriterionResult> {
    let mut c = Check::new(3, "completeness, each external point on exactly one bisecant");
    for i in insts {
        let want = super::expected_external(&i.ctx);
        let (modes, limit): (&[CoverMode], u64) = match (i.q, i.n) {
            (_, 1) => (&[CoverMode::Exhaustive, CoverMode::Certificate], 10),
            (3, 2) => (&[CoverMode::Exhaustive, CoverMode::Certificate], 120),
            _ => (&[CoverMode::Certificate], 600),
        };
        let mut assignments = Vec::new();
        for &m in modes {
            let t = Instant::now();
            let r = cover::verify_complete(&i.ctx, &i.cap, m, max_space)?;
            let el = t.elapsed();
            c.record(
                r.exactly_once && r.external_points == want && el < Duration::from_secs(limit),
                format!(
                    "{} {m:?}: {} external (expected {want}), {} once, {} uncovered, {} more, {el:?}",
                    i.tag(),
                    r.external_points,
                    r.covered_once,
                    r.uncovered,
                    r.covered_more
                ),
            );
            let mut a = r.assignment;
            a.sort_unstable();
            assignments.push(a);
        }
        if assignments.len() == 2 {
            c.record(
                assignments[0] == assignments[1],
                format!("{} modes agree point by point", i.tag()),
            );
        }
    }
    Ok(c.finish())
}

fn c4_bound(insts: &[Instance]) -> CriterionResult {
    let mut c = Check::new(4, "ratio to the trivial lower bound");
    for i in insts {
        let q = f64::from(i.q);
        let ratio = i.cap.len() as f64 / (2f64.sqrt() * q.powi(2 * i.n as i32));
        let limit = 2.0 * q / (2f64.sqrt() * (q - 1.0)) * 1.01;
        c.record(ratio < limit, format!("{} ratio {ratio:.4} < {limit:.4}", i.tag()));
    }
    c.finish()
}

fn c5_codes(insts: &[Instance]) -> Result<CriterionResult> {
    let mut c = Check::new(5, "code parameters [N, N-(4n+2), 4]_q, covering radius 2");
    for i in insts.iter().filter(|i| matches!((i.q, i.n), (3..=5, 1) | (3, 2))) {
        let limit = Duration::from_secs(if i.n == 1 { 5 } else { 120 });
        let t = Instant::now();
        let r = codes::code_report(&i.ctx, &i.cap, codes::DEFAULT_SYNDROME_BOUND)?;
        let el = t.elapsed();
        let n = i.cap.len();
        let rows = 4 * i.n as usize + 2;
        c.record(
            r.as_expected && r.length == n && r.dimension == n - rows && el < limit,
            format!(
                "{} [{}, {}, {:?}]_{} radius {:?}, {} syndromes, {el:?}",
                i.tag(),
                r.length,
                r.dimension,
                r.min_distance,
                r.q,
                r.covering.radius,
                r.covering.syndromes
            ),
        );
    }
    Ok(c.finish())
}

fn c6_det_sum(seed: u64) -> Result<CriterionResult> {
    let mut c = Check::new(6, "det D_1 + det D_-1 = 2(N(a0) + N(a2))");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
    for q in [3, 4, 5] {
        let (p, h) = prime_power(q)?;
        for k in [3, 4, 5] {
            let ctx = FieldCtx::with_degree(p, h, k)?;
            let fk = ctx.fk();
            let mut bad = 0;
            for _ in 0..500 {
                let t = linperm::random_triple(&ctx, &mut rng);
                let d1 = linperm::det(&ctx, &linperm::build_d_matrix(&ctx, t, 1)?);
                let dm = linperm::det(&ctx, &linperm::build_d_matrix(&ctx, t, -1)?);
                let n0 = ctx.norm(Level::FK, t[0], Level::Fq)?;
                let n2 = ctx.norm(Level::FK, t[2], Level::Fq)?;
                let rhs = fk.mul(fk.from_int(2), fk.add(n0, n2));
                bad += u32::from(fk.add(d1, dm) != rhs);
            }
            c.record(bad == 0, format!("(q,k)=({q},{k}) 500 triples, {bad} mismatches"));
        }
    }
    Ok(c.finish())
}

fn c7_fer(seed: u64) -> Result<CriterionResult> {
    let mut c = Check::new(7, "permutation of F_{q^k} iff of F_{q^2k} under the norm condition");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    for q in [3, 4] {
        let (p, h) = prime_power(q)?;
        let ctx = FieldCtx::with_degree(p, h, 3)?;
        let (mut bad, mut perms) = (0, 0);
        for _ in 0..200 {
            let t = linperm::random_norm_triple(&ctx, &mut rng);
            let r = linperm::check_fer(&ctx, t)?;
            bad += u32::from(!r.agree);
            perms += u32::from(r.perm_on_k);
        }
        c.record(bad == 0, format!("(q,k)=({q},3) 200 triples, {perms} permutations, {bad} discrepancies"));
    }
    Ok(c.finish())
}

/// All `w` in `F_K` with `w^2 - 1` a non-square, with `T = sqrt(w^2 - 1)` in
/// `F_{K^2}`.
pub fn nonsquare_omegas(ctx: &FieldCtx) -> Result<Vec<(Elem, Elem)>> {
    let fk = ctx.fk();
    let mut out = Vec::new();
    for w in 0..fk.order() {
        let w = Elem(w);
        let d = fk.sub(fk.square(w), Elem::ONE);
        if !d.is_zero() && !ctx.is_square(Level::FK, d) {
            out.push((w, ctx.sqrt(Level::FK2, d)?));
        }
    }
    Ok(out)
}

fn c8_norms() -> Result<CriterionResult> {
    let mut c = Check::new(8, "N(w + T) = N(w - T) = 1 for w^2 - 1 a non-square");
    for p in [3, 5] {
        let ctx = FieldCtx::make_tower(p, 1, 1)?;
        let f2 = ctx.fk2();
        let mut bad = 0;
        let all = nonsquare_omegas(&ctx)?;
        for &(w, t) in &all {
            for s in [f2.add(w, t), f2.sub(w, t)] {
                bad += u32::from(ctx.norm(Level::FK2, s, Level::Fq)? != Elem::ONE);
            }
        }
        c.record(bad == 0, format!("q={p}: {} omegas, {bad} failures", all.len()));
    }
    Ok(c.finish())
}

fn c9_chords() -> Result<CriterionResult> {
    let mut c = Check::new(9, "chordal varieties of V_1 and V_alpha");
    for q in [3, 4, 5] {
        let (p, h) = prime_power(q)?;
        let ctx = FieldCtx::make_tower(p, h, 1)?;
        let t = Instant::now();
        let census = veronese::chordal_census(&ctx, cap::pick_alpha(&ctx))?;
        let el = t.elapsed();
        let ok = if q % 2 == 1 {
            census.intersection.is_empty()
        } else {
            census.is_nuclear_plane && census.intersection.len() == 21
        };
        c.record(
            ok && el < Duration::from_secs(30),
            format!("q={q}: {} common points of {} ({el:?})", census.intersection.len(), census.points),
        );
    }
    Ok(c.finish())
}

fn c10_projection(seed: u64) -> Result<CriterionResult> {
    let mut c = Check::new(10, "projection of the n=2 varieties");
    let ctx = FieldCtx::make_tower(3, 1, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
    for _ in 0..5 {
        let w = Elem(rng.gen_range(1..ctx.fk().order()));
        let lifted = veronese::veronese_variety(&ctx, &[w, Elem::ONE])?;
        let image: BTreeSet<_> = lifted
            .iter()
            .map(|p| veronese::project_to_v(&ctx, p))
            .collect::<Result<_>>()?;
        let target = cap::veronese_cap(&ctx, w)?;
        c.record(image == target, format!("w={w}: {} points", image.len()));
    }
    Ok(c.finish())
}

fn c11_mutations(cfg: &RunConfig) -> Result<CriterionResult> {
    let mut c = Check::new(11, "mutation sensitivity at (3,1)");
    let (ctx, cap) = cfg.build()?;
    let cfg = RunConfig {
        mode: ModeFlag::Exhaustive,
        ..cfg.clone()
    };
    let mut caught = 0;
    for idx in 0..cap.len() {
        let r = verify(&ctx, &cap.without(idx), &cfg)?;
        caught += u32::from(r.exit_code == EXIT_INCOMPLETE);
    }
    c.record(
        caught as usize == cap.len(),
        format!("{caught}/{} deletions exit {EXIT_INCOMPLETE}", cap.len()),
    );
    let extra: Vec<_> = super::external_points(&ctx, &cap).collect();
    let mut caught = 0;
    for p in &extra {
        let grown = cap.with_point(*p, Label::V1)?;
        caught += u32::from(!cap::verify_cap(&ctx, &grown.points).is_cap);
    }
    c.record(
        caught as usize == extra.len(),
        format!("{caught}/{} additions break the cap (exit {EXIT_NOT_A_CAP})", extra.len()),
    );
    Ok(c.finish())
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut list: Vec<(u32, u32)> = DEFAULT_INSTANCES.to_vec();
    for extra in &cfg.include {
        if !list.contains(extra) {
            list.push(*extra);
        }
    }
    let insts = list
        .iter()
        .map(|&(q, n)| Instance::new(q, n))
        .collect::<Result<Vec<_>>>()?;
    let base = RunConfig {
        seed: cfg.seed,
        max_space: cfg.max_space,
        ..RunConfig::default()
    };
    let criteria = vec![
        c1_sizes(&insts),
        c2_cap(&insts),
        c3_complete(&insts, cfg.max_space)?,
        c4_bound(&insts),
        c5_codes(&insts)?,
        c6_det_sum(cfg.seed)?,
        c7_fer(cfg.seed)?,
        c8_norms()?,
        c9_chords()?,
        c10_projection(cfg.seed)?,
        c11_mutations(&base)?,
    ];
    Ok(SuiteReport {
        instances: list,
        seed: cfg.seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}

pub fn table(r: &SuiteReport) -> String {
    let mut s = String::new();
    for c in &r.criteria {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        writeln!(s, "{verdict} {:>2}  {}  ({} ms)", c.id, c.title, c.elapsed_ms).unwrap();
        for d in &c.details {
            writeln!(s, "        {d}").unwrap();
        }
    }
    writeln!(s, "{}", if r.passed { "all criteria pass" } else { "some criteria FAIL" }).unwrap();
    s
}

/// Writes `suite_report.json` and `suite_report.txt` into `dir`.
pub fn write_outputs(dir: &Path, r: &SuiteReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    io::save_json(&dir.join("suite_report.json"), r)?;
    std::fs::write(dir.join("suite_report.txt"), table(r))?;
    Ok(())
}
