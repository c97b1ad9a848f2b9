//! Configuration, persistence, the combined verification verdict and the
//! reproduction suite behind the command-line tool.

pub mod config;
pub mod io;
pub mod suite;

use serde::{Deserialize, Serialize};

use crate::cap::{self, CapReport, CapSet};
use crate::codes::{self, CodeReport};
use crate::cover::{self, CompletenessReport, CoverMode};
use crate::error::Result;
use crate::field::FieldCtx;
use crate::pg;

pub use config::{ModeFlag, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_A_CAP: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;
pub const EXIT_CODE_MISMATCH: i32 = 5;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub p: u32,
    pub h: u32,
    pub n: u32,
    pub q: u32,
    pub cap: CapReport,
    pub completeness: Vec<CompletenessReport>,
    /// Exhaustive and certificate modes assign the same bisecant to every point.
    pub modes_agree: Option<bool>,
    pub code: Option<CodeReport>,
    pub notes: Vec<String>,
    pub exit_code: i32,
}

/// Runs the cap check, the completeness check(s) and the code check.
pub fn verify(ctx: &FieldCtx, cap: &CapSet, cfg: &RunConfig) -> Result<VerifyReport> {
    let mut notes = Vec::new();
    let cap_report = cap::verify_cap(ctx, &cap.points);

    let modes: &[CoverMode] = match cfg.mode {
        ModeFlag::Exhaustive => &[CoverMode::Exhaustive],
        ModeFlag::Certificate => &[CoverMode::Certificate],
        ModeFlag::Both => &[CoverMode::Exhaustive, CoverMode::Certificate],
    };
    let completeness = modes
        .iter()
        .map(|&m| cover::verify_complete(ctx, cap, m, cfg.max_space))
        .collect::<Result<Vec<_>>>()?;
    let modes_agree = (completeness.len() == 2).then(|| {
        let mut a = completeness[0].assignment.clone();
        let mut b = completeness[1].assignment.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    });

    let syndromes = u64::from(ctx.q()).checked_pow(2 * ctx.k());
    let code = if syndromes.is_some_and(|s| s <= cfg.syndrome_bound) {
        Some(codes::code_report(ctx, cap, cfg.syndrome_bound)?)
    } else {
        notes.push(format!(
            "code check skipped: {} syndromes exceed the bound {}",
            syndromes.map_or("too many".into(), |s| s.to_string()),
            cfg.syndrome_bound
        ));
        None
    };

    let expected = 2 * cap::variety_size(ctx) as usize;
    if cap.len() != expected {
        notes.push(format!("size {} differs from {expected}", cap.len()));
    }
    let exit_code = if !cap_report.is_cap {
        EXIT_NOT_A_CAP
    } else if completeness.iter().any(|c| !c.exactly_once) || modes_agree == Some(false) {
        EXIT_INCOMPLETE
    } else if code.as_ref().is_some_and(|c| !c.as_expected) || cap.len() != expected {
        EXIT_CODE_MISMATCH
    } else {
        EXIT_OK
    };
    Ok(VerifyReport {
        p: ctx.p(),
        h: ctx.h(),
        n: ctx.n()?,
        q: ctx.q(),
        cap: cap_report,
        completeness,
        modes_agree,
        code,
        notes,
        exit_code,
    })
}

/// One-paragraph human summary of a [`VerifyReport`].
pub fn summary(r: &VerifyReport) -> String {
    let mut lines = vec![format!(
        "q = {} n = {}: {} points, {} collinear triples",
        r.q,
        r.n,
        r.cap.size,
        r.cap.violations.len()
    )];
    for c in &r.completeness {
        lines.push(format!(
            "  {:?}: {} external, {} covered once, {} uncovered, {} covered more, {} cap points on bisecants",
            c.mode.expect("set by verify_complete"),
            c.external_points,
            c.covered_once,
            c.uncovered,
            c.covered_more,
            c.cap_points_hit
        ));
    }
    if let Some(agree) = r.modes_agree {
        lines.push(format!("  modes agree point by point: {agree}"));
    }
    if let Some(c) = &r.code {
        lines.push(format!(
            "  code [{}, {}, {:?}]_{} covering radius {:?}",
            c.length, c.dimension, c.min_distance, c.q, c.covering.radius
        ));
    }
    lines.extend(r.notes.iter().map(|n| format!("  note: {n}")));
    lines.push(format!("  exit code {}", r.exit_code));
    lines.join("\n")
}

/// `(q - 1) |V_1| |V_alpha|` for the constructed cap.
pub fn expected_external(ctx: &FieldCtx) -> u64 {
    let v = cap::variety_size(ctx);
    (u64::from(ctx.q()) - 1) * v * v
}

/// Points of the space outside `cap`, in enumeration order.
pub fn external_points<'a>(ctx: &'a FieldCtx, cap: &'a CapSet) -> impl Iterator<Item = pg::ProjPoint> + 'a {
    pg::enumerate_points(ctx).filter(move |p| !cap.contains(p))
}
