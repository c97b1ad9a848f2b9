//! Bisecant certificates: every point off `V_1 ∪ V_alpha` lies on exactly
//! one line joining a point of `V_1` to a point of `V_alpha`.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cap::{self, CapSet, Label};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldCtx, Level};
use crate::pg::{self, ProjPoint};

/// `R = normalize(c1 P + c2 Q)` with `P` in `V_1` and `Q` in `V_alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    #[serde(rename = "R")]
    pub r: ProjPoint,
    #[serde(rename = "P")]
    pub p: ProjPoint,
    #[serde(rename = "Q")]
    pub q: ProjPoint,
    pub c1: Elem,
    pub c2: Elem,
}

/// Coefficients `(a0, a1, a2)` of `y -> a0 y + a1 y^q + a2 y^{q^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinPolyPair {
    pub f1: [Elem; 3],
    pub f2: [Elem; 3],
}

/// Solution of `x^2 + lambda y^2 = rho`, `x^{q+1} - lambda y^{q+1} = rho w`
/// (odd `q`) or `x^2 + y^2 = 1`, `x^{q+1} + alpha y^{q+1} = w` (even `q`,
/// where `lambda = rho = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalCover {
    pub x: Elem,
    pub y: Elem,
    pub lambda: Elem,
    pub rho: Elem,
}

fn chi(ctx: &FieldCtx, omega: Elem) -> Elem {
    let fk = ctx.fk();
    let d = fk.sub(fk.square(omega), Elem::ONE);
    fk.pow(d, (u64::from(ctx.q()) - 1) / 2)
}

pub fn f1_f2(ctx: &FieldCtx, omega: Elem) -> Result<LinPolyPair> {
    if !ctx.is_odd() {
        return Err(Error::BadOmega("F1, F2 are defined for odd q only".into()));
    }
    let fk = ctx.fk();
    let minus_one = fk.neg(Elem::ONE);
    if omega.is_zero() || omega == Elem::ONE || omega == minus_one {
        return Err(Error::BadOmega(format!("{omega} is 0 or ±1")));
    }
    let c = chi(ctx, omega);
    let wq = ctx.frobenius(Level::FK, omega, 1);
    let wc = fk.mul(omega, c);
    Ok(LinPolyPair {
        f1: [c, fk.add(wq, wc), Elem::ONE],
        f2: [fk.neg(c), fk.sub(wq, wc), Elem::ONE],
    })
}

fn pow_q1(ctx: &FieldCtx, x: Elem) -> Elem {
    let fk = ctx.fk();
    fk.mul(ctx.frobenius(Level::FK, x, 1), x)
}

/// Checks both defining equations of a [`CanonicalCover`].
pub fn check_canonical(ctx: &FieldCtx, alpha: Elem, omega: Elem, c: &CanonicalCover) -> bool {
    let fk = ctx.fk();
    if c.x.is_zero() || c.y.is_zero() || c.lambda.is_zero() || c.rho.is_zero() {
        return false;
    }
    if !ctx.fq().contains(c.lambda) || !ctx.fq().contains(c.rho) {
        return false;
    }
    let e1 = fk.add(fk.square(c.x), fk.mul(c.lambda, fk.square(c.y)));
    let e2 = fk.add(
        pow_q1(ctx, c.x),
        fk.mul(fk.mul(alpha, c.lambda), pow_q1(ctx, c.y)),
    );
    e1 == c.rho && e2 == fk.mul(c.rho, omega)
}

/// Solves the system for `R = P(1, w)`.
pub fn cover_canonical(ctx: &FieldCtx, alpha: Elem, omega: Elem) -> Result<CanonicalCover> {
    cap::check_alpha(ctx, alpha)?;
    if omega.is_zero() || omega == Elem::ONE || omega == alpha {
        return Err(Error::BadOmega(format!("{omega} is 0, 1 or alpha")));
    }
    let out = if ctx.is_odd() {
        cover_odd(ctx, omega)?
    } else {
        cover_even(ctx, alpha, omega)?
    };
    if !check_canonical(ctx, alpha, omega, &out) {
        return Err(Error::InternalContradiction(format!(
            "cover equations fail for omega = {omega}"
        )));
    }
    Ok(out)
}

fn cover_even(ctx: &FieldCtx, alpha: Elem, omega: Elem) -> Result<CanonicalCover> {
    let fk = ctx.fk();
    let a1 = fk.add(alpha, Elem::ONE);
    let rhs = fk.div(
        fk.add(fk.mul(omega, a1), alpha),
        fk.add(fk.square(alpha), Elem::ONE),
    );
    let t = ctx.solve_power(rhs, u64::from(ctx.q()) + 1)?;
    let x = fk.add(t, fk.div(alpha, a1));
    let y = fk.add(t, fk.inv(a1).expect("alpha != 1"));
    Ok(CanonicalCover {
        x,
        y,
        lambda: Elem::ONE,
        rho: Elem::ONE,
    })
}

fn cover_odd(ctx: &FieldCtx, omega: Elem) -> Result<CanonicalCover> {
    let fk = ctx.fk();
    let q = u64::from(ctx.q());
    let d = fk.sub(fk.square(omega), Elem::ONE);
    let lambda = ctx.fq().neg(ctx.norm(Level::FK, d, Level::Fq)?);

    let y = if ctx.is_square(Level::FK, d) {
        let t = ctx.sqrt(Level::FK, d)?;
        let w_minus = fk.sub(omega, t);
        let delta = ctx.norm(Level::FK, w_minus, Level::Fq)?;
        let u = ctx.solve_power(fk.mul(delta, w_minus), q + 1)?;
        let uq = ctx.frobenius(Level::FK, u, 1);
        fk.sub(fk.mul(fk.add(omega, t), uq), u)
    } else {
        let polys = f1_f2(ctx, omega)?;
        *ctx
            .linearized_kernel(polys.f1, Level::FK)
            .first()
            .ok_or_else(|| Error::InternalContradiction(format!("F1 has no root for omega = {omega}")))?
    };
    if y.is_zero() {
        return Err(Error::InternalContradiction("y = 0".into()));
    }

    // (w^2 - 1)^{(q + q^2 + ... + q^{2n}) / 2}
    let k = ctx.k();
    let e: u64 = (1..k).map(|i| q.pow(i)).sum::<u64>() / 2;
    let yq = ctx.frobenius(Level::FK, y, 1);
    let x = fk.mul(fk.pow(d, e), fk.add(fk.mul(omega, y), yq));
    if x.is_zero() {
        return Err(Error::InternalContradiction("x = 0".into()));
    }
    let two = fk.from_int(2);
    let num = fk.add(
        fk.add(fk.square(y), fk.square(yq)),
        fk.mul(fk.mul(two, omega), fk.mul(y, yq)),
    );
    let rho = fk.mul(fk.neg(lambda), fk.div(num, d));
    Ok(CanonicalCover { x, y, lambda, rho })
}

fn transported(ctx: &FieldCtx, omega: Elem, x: Elem) -> (Elem, Elem) {
    let fk = ctx.fk();
    (fk.square(x), fk.mul(omega, pow_q1(ctx, x)))
}

/// Non-square scalar `mu` in `{1, nu}` making `c / mu` a square.
fn square_class(ctx: &FieldCtx, c: Elem) -> Elem {
    if ctx.is_square(Level::FK, c) {
        Elem::ONE
    } else {
        ctx.nonsquare_q().expect("odd q has a non-square")
    }
}

/// Builds the certificate `R = c1 P + c2 Q` from unnormalized vectors of `P`
/// and `Q` with `(a_R, b_R) = k1 P_vec + k2 Q_vec`.
fn assemble(
    ctx: &FieldCtx,
    r: ProjPoint,
    (pv, k1): ((Elem, Elem), Elem),
    (qv, k2): ((Elem, Elem), Elem),
) -> Result<CoverCertificate> {
    let fq = ctx.fq();
    let (p, sp) = pg::normalize_with_scale(ctx, pv.0, pv.1)?;
    let (q, sq) = pg::normalize_with_scale(ctx, qv.0, qv.1)?;
    Ok(CoverCertificate {
        r,
        p,
        q,
        c1: fq.div(k1, sp),
        c2: fq.div(k2, sq),
    })
}

/// Certificate for a point `R` not in `cap`.
pub fn cover_point(ctx: &FieldCtx, cap: &CapSet, r: &ProjPoint) -> Result<CoverCertificate> {
    let r = pg::normalize(ctx, r.a, r.b)?;
    if cap.contains(&r) {
        return Err(Error::PointInCap);
    }
    let alpha = cap.alpha;
    let fk = ctx.fk();
    let fq = ctx.fq();
    let q1 = u64::from(ctx.q()) + 1;
    let one = Elem::ONE;

    if r.a.is_zero() {
        // P(0, b) = mu P_vec(x0) - mu Q_vec(x0), or P_vec + Q_vec for even q
        return if ctx.is_odd() {
            let half = fk.div(r.b, fk.from_int(2));
            let mu = square_class(ctx, half);
            let x0 = ctx.solve_power(fk.div(half, mu), q1)?;
            assemble(
                ctx,
                r,
                (transported(ctx, one, x0), mu),
                (transported(ctx, alpha, x0), fq.neg(mu)),
            )
        } else {
            let x0 = ctx.solve_power(fk.div(r.b, fk.add(one, alpha)), q1)?;
            assemble(ctx, r, (transported(ctx, one, x0), one), (transported(ctx, alpha, x0), one))
        };
    }
    if r.b.is_zero() {
        // P(a, 0) = mu (P_vec(x0) + Q_vec(x0)), or alpha P_vec + Q_vec for even q
        return if ctx.is_odd() {
            let half = fk.div(r.a, fk.from_int(2));
            let mu = square_class(ctx, half);
            let x0 = ctx.sqrt(Level::FK, fk.div(half, mu))?;
            assemble(ctx, r, (transported(ctx, one, x0), mu), (transported(ctx, alpha, x0), mu))
        } else {
            let x0 = ctx.sqrt(Level::FK, fk.div(r.a, fk.add(alpha, one)))?;
            assemble(ctx, r, (transported(ctx, one, x0), alpha), (transported(ctx, alpha, x0), one))
        };
    }

    let wit = cap::omega_witness(ctx, r.a, r.b).expect("a, b nonzero");
    let c = cover_canonical(ctx, alpha, wit.omega)?;
    let scale = fq.div(wit.lambda0, c.rho);
    assemble(
        ctx,
        r,
        (transported(ctx, one, fk.mul(wit.x0, c.x)), scale),
        (transported(ctx, alpha, fk.mul(wit.x0, c.y)), fq.mul(scale, c.lambda)),
    )
}

/// Re-checks a certificate against `cap`.
pub fn verify_certificate(ctx: &FieldCtx, cap: &CapSet, cert: &CoverCertificate) -> bool {
    if cert.c1.is_zero() || cert.c2.is_zero() {
        return false;
    }
    if !ctx.fq().contains(cert.c1) || !ctx.fq().contains(cert.c2) {
        return false;
    }
    if cap.label_of(&cert.p) != Some(Label::V1) || cap.label_of(&cert.q) != Some(Label::Valpha) {
        return false;
    }
    let (a, b) = pg::combine(ctx, cert.c1, &cert.p, cert.c2, &cert.q);
    pg::normalize(ctx, a, b).is_ok_and(|r| r == cert.r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMode {
    Exhaustive,
    Certificate,
}

/// `(R, P, Q)`: an external point and the bisecant endpoints covering it.
pub type Assignment = (ProjPoint, ProjPoint, ProjPoint);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub mode: Option<CoverMode>,
    pub total_points: u64,
    pub cap_size: u64,
    pub external_points: u64,
    /// `(q - 1) |V_1| |V_alpha|`, the number of interior bisecant points.
    pub bisecant_interior: u64,
    pub covered_once: u64,
    pub uncovered: u64,
    pub covered_more: u64,
    /// Cap points lying inside some bisecant (exhaustive mode).
    pub cap_points_hit: u64,
    /// Failed or rejected certificates (certificate mode).
    pub invalid_certificates: u64,
    /// Multiplicity -> number of external points.
    pub histogram: BTreeMap<u32, u64>,
    pub complete: bool,
    pub exactly_once: bool,
    pub elapsed_ms: u128,
    /// `(R, P, Q)` for every covered external point, sorted by `R`.
    #[serde(skip)]
    pub assignment: Vec<Assignment>,
}

const NONE: u32 = u32::MAX;

/// Checks that every point off `cap` lies on a `V_1`-`V_alpha` bisecant.
pub fn verify_complete(
    ctx: &FieldCtx,
    cap: &CapSet,
    mode: CoverMode,
    max_space: u64,
) -> Result<CompletenessReport> {
    let total = pg::point_count(ctx);
    if total > max_space {
        return Err(Error::TooLarge {
            size: total,
            bound: max_space,
        });
    }
    let start = Instant::now();
    let mut report = match mode {
        CoverMode::Exhaustive => exhaustive(ctx, cap),
        CoverMode::Certificate => by_certificate(ctx, cap),
    };
    report.mode = Some(mode);
    report.total_points = total;
    report.cap_size = cap.len() as u64;
    report.external_points = total - cap.len() as u64;
    let v1 = cap.with_label(Label::V1).count() as u64;
    report.bisecant_interior = (u64::from(ctx.q()) - 1) * v1 * (cap.len() as u64 - v1);
    report.complete = report.uncovered == 0 && report.invalid_certificates == 0;
    report.exactly_once = report.complete
        && report.covered_more == 0
        && report.cap_points_hit == 0
        && report.covered_once == report.external_points;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn exhaustive(ctx: &FieldCtx, cap: &CapSet) -> CompletenessReport {
    let k = ctx.fk().order() as usize;
    let v1: Vec<ProjPoint> = cap.with_label(Label::V1).map(|(_, p)| *p).collect();
    let va: Vec<ProjPoint> = cap.with_label(Label::Valpha).map(|(_, p)| *p).collect();
    let cells = k * k;

    // per key: (hit count, first pair index)
    let marks = (0..v1.len())
        .into_par_iter()
        .fold(
            || (vec![0u16; cells], vec![NONE; cells]),
            |(mut count, mut pair), i| {
                for (j, qp) in va.iter().enumerate() {
                    for r in pg::interior_points(ctx, &v1[i], qp) {
                        let key = r.key(ctx);
                        count[key] = count[key].saturating_add(1);
                        if pair[key] == NONE {
                            pair[key] = (i * va.len() + j) as u32;
                        }
                    }
                }
                (count, pair)
            },
        )
        .reduce(
            || (vec![0u16; cells], vec![NONE; cells]),
            |(mut c1, mut p1), (c2, p2)| {
                for key in 0..cells {
                    c1[key] = c1[key].saturating_add(c2[key]);
                    if p1[key] == NONE {
                        p1[key] = p2[key];
                    }
                }
                (c1, p1)
            },
        );
    let (count, pair) = marks;

    let mut report = CompletenessReport::default();
    for r in pg::enumerate_points(ctx) {
        let key = r.key(ctx);
        let c = u32::from(count[key]);
        if cap.contains(&r) {
            if c > 0 {
                report.cap_points_hit += 1;
            }
            continue;
        }
        *report.histogram.entry(c).or_default() += 1;
        match c {
            0 => report.uncovered += 1,
            1 => report.covered_once += 1,
            _ => report.covered_more += 1,
        }
        if pair[key] != NONE {
            let idx = pair[key] as usize;
            report.assignment.push((r, v1[idx / va.len()], va[idx % va.len()]));
        }
    }
    report
}

fn by_certificate(ctx: &FieldCtx, cap: &CapSet) -> CompletenessReport {
    let k = ctx.fk().order() as usize;
    let rows: Vec<(u64, u64, Vec<Assignment>)> = (0..k)
        .into_par_iter()
        .map(|a| {
            let (mut ok, mut bad) = (0u64, 0u64);
            let mut assigned = Vec::new();
            for r in pg::enumerate_range(ctx, a * k, (a + 1) * k) {
                if cap.contains(&r) {
                    continue;
                }
                match cover_point(ctx, cap, &r) {
                    Ok(cert) if verify_certificate(ctx, cap, &cert) => {
                        ok += 1;
                        assigned.push((r, cert.p, cert.q));
                    }
                    _ => bad += 1,
                }
            }
            (ok, bad, assigned)
        })
        .collect();
    let mut report = CompletenessReport::default();
    for (ok, bad, assigned) in rows {
        report.covered_once += ok;
        report.uncovered += bad;
        report.invalid_certificates += bad;
        report.assignment.extend(assigned);
    }
    report.histogram.insert(1, report.covered_once);
    if report.uncovered > 0 {
        report.histogram.insert(0, report.uncovered);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: u32, b: u32) -> ProjPoint {
        ProjPoint { a: Elem(a), b: Elem(b) }
    }

    #[test]
    fn pi1_point_q3() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        let cert = cover_point(&ctx, &cap, &p(0, 1)).unwrap();
        assert!(verify_certificate(&ctx, &cap, &cert));
        assert_eq!((cert.p, cert.q), (p(1, 1), p(1, 2)));
        // P(1,1) - P(1,-1) up to scaling
        assert_eq!(ctx.fq().div(cert.c2, cert.c1), Elem(2));
    }

    #[test]
    fn pi1_point_q4() {
        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        let cert = cover_point(&ctx, &cap, &p(0, 1)).unwrap();
        assert!(verify_certificate(&ctx, &cap, &cert));
        assert_eq!((cert.p, cert.q), (p(1, 1), p(1, cap.alpha.0)));
        // P(1,1) + P(1,alpha) up to scaling
        assert_eq!(cert.c1, cert.c2);
    }

    #[test]
    fn canonical_solutions_q3_and_q4() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let alpha = cap::pick_alpha(&ctx);
        let ok = (3..27)
            .filter(|&w| cover_canonical(&ctx, alpha, Elem(w)).is_ok())
            .count();
        assert_eq!(ok, 24);

        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        let alpha = cap::pick_alpha(&ctx);
        let ok = (1..64)
            .map(Elem)
            .filter(|&w| w != Elem::ONE && w != alpha)
            .filter(|&w| cover_canonical(&ctx, alpha, w).is_ok())
            .count();
        assert_eq!(ok, 61);
    }

    #[test]
    fn excluded_omegas() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let alpha = cap::pick_alpha(&ctx);
        for w in [0, 1, 2] {
            assert!(matches!(cover_canonical(&ctx, alpha, Elem(w)), Err(Error::BadOmega(_))));
        }
        assert!(matches!(f1_f2(&ctx, Elem(1)), Err(Error::BadOmega(_))));
        let even = FieldCtx::make_tower(2, 2, 1).unwrap();
        assert!(f1_f2(&even, Elem(9)).is_err());
    }

    #[test]
    fn cap_points_are_rejected() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        assert!(matches!(cover_point(&ctx, &cap, &p(1, 1)), Err(Error::PointInCap)));
    }

    #[test]
    fn complete_q3_both_modes() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        let ex = verify_complete(&ctx, &cap, CoverMode::Exhaustive, 1 << 20).unwrap();
        let ce = verify_complete(&ctx, &cap, CoverMode::Certificate, 1 << 20).unwrap();
        assert_eq!(ex.external_points, 338);
        assert!(ex.exactly_once && ce.exactly_once, "{ex:?} {ce:?}");
        let mut a = ex.assignment.clone();
        let mut b = ce.assignment.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
