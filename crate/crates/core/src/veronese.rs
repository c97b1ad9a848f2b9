//! Frobenius-symmetric matrices `M(a_0, ..., a_n)` of order `2n + 1` over
//! `F_{q^{2n+1}}`, their Veronese varieties, chordal varieties (`n = 1`)
//! and the projection onto the field model of `PG(4n+1, q)`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cap;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldCtx, Level};
use crate::linalg::{self, Matrix};
use crate::pg::{self, ProjPoint};

/// A point of `PG(W)`: the tuple `(a_0, ..., a_n)` scaled so that its first
/// nonzero `F_q`-coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymPoint {
    a: Vec<Elem>,
}

impl SymPoint {
    pub fn new(ctx: &FieldCtx, a: Vec<Elem>) -> Result<Self> {
        let q = ctx.q();
        let lead = a
            .iter()
            .flat_map(|x| ctx.fq_coords(Level::FK, *x))
            .find(|c| !c.is_zero())
            .ok_or(Error::ZeroVector)?;
        debug_assert!(lead.0 < q);
        let s = ctx.fq().inv(lead).expect("nonzero");
        let fk = ctx.fk();
        Ok(SymPoint {
            a: a.into_iter().map(|x| fk.mul(s, x)).collect(),
        })
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.a
    }

    pub fn from_proj(p: &ProjPoint) -> Self {
        SymPoint { a: vec![p.a, p.b] }
    }
}

/// Entry rule for `i <= j` (1-based), `d = j - i`: `a_d^{q^{i-1}}` when
/// `d <= n`, else `a_{2n+1-d}^{q^{j-1}}`; symmetric.
pub fn sym_matrix_of(ctx: &FieldCtx, a: &[Elem]) -> Matrix {
    let k = ctx.k() as usize;
    let n = a.len() - 1;
    assert_eq!(2 * n + 1, k, "tuple length must be n + 1 with k = 2n + 1");
    let mut m = Matrix::zeros(k, k);
    for i in 1..=k {
        for j in i..=k {
            let d = j - i;
            let v = if d <= n {
                ctx.frobenius(Level::FK, a[d], (i - 1) as i64)
            } else {
                ctx.frobenius(Level::FK, a[k - d], (j - 1) as i64)
            };
            m.set(i - 1, j - 1, v);
            m.set(j - 1, i - 1, v);
        }
    }
    m
}

pub fn sym_matrix(ctx: &FieldCtx, p: &SymPoint) -> Matrix {
    sym_matrix_of(ctx, &p.a)
}

pub fn rank(ctx: &FieldCtx, m: &Matrix) -> usize {
    linalg::rank(ctx.fk(), m)
}

fn check_alphas(ctx: &FieldCtx, alphas: &[Elem]) -> Result<()> {
    let n = ctx.n()? as usize;
    if alphas.len() != n {
        return Err(Error::Format(format!("expected {n} alphas, got {}", alphas.len())));
    }
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::ZeroAlpha);
    }
    Ok(())
}

/// `(x^2, alpha_1 x^{q+1}, ..., alpha_n x^{q^n+1})`.
pub fn veronese_tuple(ctx: &FieldCtx, alphas: &[Elem], x: Elem) -> Vec<Elem> {
    let fk = ctx.fk();
    let mut out = vec![fk.square(x)];
    for (i, &al) in alphas.iter().enumerate() {
        let xi = ctx.frobenius(Level::FK, x, i as i64 + 1);
        out.push(fk.mul(al, fk.mul(xi, x)));
    }
    out
}

pub fn veronese_variety(ctx: &FieldCtx, alphas: &[Elem]) -> Result<BTreeSet<SymPoint>> {
    check_alphas(ctx, alphas)?;
    (1..ctx.fk().order())
        .map(|x| SymPoint::new(ctx, veronese_tuple(ctx, alphas, Elem(x))))
        .collect()
}

/// `M(a_0, a_1, ..., a_n) -> M(a_0, alpha_1 a_1, ..., alpha_n a_n)`.
pub fn psi(ctx: &FieldCtx, p: &SymPoint, alphas: &[Elem]) -> Result<SymPoint> {
    check_alphas(ctx, alphas)?;
    let fk = ctx.fk();
    let mut a = p.a.clone();
    for (x, al) in a[1..].iter_mut().zip(alphas) {
        *x = fk.mul(*x, *al);
    }
    SymPoint::new(ctx, a)
}

/// The parameters `(alpha_1, ..., alpha_n)` of the variety through `p`,
/// for `p` with every coordinate nonzero.
pub fn w_label(ctx: &FieldCtx, p: &SymPoint) -> Option<Vec<Elem>> {
    if p.a.iter().any(|x| x.is_zero()) {
        return None;
    }
    let wit = cap::omega_witness(ctx, p.a[0], p.a[1])?;
    let fk = ctx.fk();
    Some(
        p.a[1..]
            .iter()
            .enumerate()
            .map(|(i, &ai)| {
                let xi = ctx.frobenius(Level::FK, wit.x0, i as i64 + 1);
                fk.div(ai, fk.mul(wit.lambda0, fk.mul(xi, wit.x0)))
            })
            .collect(),
    )
}

fn require_n1(ctx: &FieldCtx) -> Result<()> {
    if ctx.n()? != 1 {
        return Err(Error::NOnlyOne);
    }
    Ok(())
}

/// Membership in the chordal variety of `V_alpha`: `rank M(a_0, a_1 / alpha) <= 2`.
pub fn chordal_test(ctx: &FieldCtx, p: &SymPoint, alpha: Elem) -> Result<bool> {
    require_n1(ctx)?;
    let fk = ctx.fk();
    let a1 = fk.div(p.a[1], alpha);
    Ok(rank(ctx, &sym_matrix_of(ctx, &[p.a[0], a1])) <= 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalCensus {
    pub q: u32,
    pub alpha: Elem,
    pub points: u64,
    pub in_s1: u64,
    pub in_salpha: u64,
    pub intersection: Vec<SymPoint>,
    /// The intersection equals `{ M(0, a_1) }`.
    pub is_nuclear_plane: bool,
}

pub fn chordal_intersection(ctx: &FieldCtx, alpha: Elem) -> Result<Vec<SymPoint>> {
    Ok(chordal_census(ctx, alpha)?.intersection)
}

/// Tests every point of `PG(5, q)` against both chordal varieties.
pub fn chordal_census(ctx: &FieldCtx, alpha: Elem) -> Result<ChordalCensus> {
    require_n1(ctx)?;
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let k = ctx.fk().order() as usize;
    let rows: Vec<(u64, u64, u64, Vec<SymPoint>)> = (0..k)
        .into_par_iter()
        .map(|a| {
            let (mut total, mut s1, mut sa) = (0, 0, 0);
            let mut both = Vec::new();
            for p in pg::enumerate_range(ctx, a * k, (a + 1) * k) {
                total += 1;
                let sp = SymPoint::from_proj(&p);
                let in1 = chordal_test(ctx, &sp, Elem::ONE).expect("n = 1");
                let ina = chordal_test(ctx, &sp, alpha).expect("n = 1");
                s1 += u64::from(in1);
                sa += u64::from(ina);
                if in1 && ina {
                    both.push(sp);
                }
            }
            (total, s1, sa, both)
        })
        .collect();
    let mut census = ChordalCensus {
        q: ctx.q(),
        alpha,
        points: 0,
        in_s1: 0,
        in_salpha: 0,
        intersection: Vec::new(),
        is_nuclear_plane: false,
    };
    for (t, s1, sa, both) in rows {
        census.points += t;
        census.in_s1 += s1;
        census.in_salpha += sa;
        census.intersection.extend(both);
    }
    census.intersection.sort();
    census.is_nuclear_plane = census.intersection.len() as u64 == cap::variety_size(ctx)
        && census.intersection.iter().all(|p| p.a[0].is_zero());
    Ok(census)
}

/// `M(a_0, a_1, ...) -> P(a_0, a_1)`.
pub fn project_to_v(ctx: &FieldCtx, p: &SymPoint) -> Result<ProjPoint> {
    if p.a[0].is_zero() && p.a[1].is_zero() {
        return Err(Error::ZeroPair);
    }
    pg::normalize(ctx, p.a[0], p.a[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WPartitionReport {
    pub n: u32,
    pub varieties: u64,
    pub variety_size: u64,
    /// Points with every coordinate nonzero (exhaustive) or samples drawn.
    pub target_points: u64,
    pub covered_once: u64,
    pub covered_more: u64,
    pub uncovered: u64,
    /// Variety points with some zero coordinate (must be 0).
    pub stray: u64,
    pub sampled: bool,
    pub ok: bool,
}

/// `n = 1`: marks every variety `V_alpha`, `alpha in F_K^*`, and checks they
/// partition the points with `a_0, a_1` both nonzero. `n >= 2`: `samples`
/// random variety points must recover their own parameters.
pub fn verify_w_partition(
    ctx: &FieldCtx,
    max_space: u64,
    samples: usize,
    seed: u64,
) -> Result<WPartitionReport> {
    let n = ctx.n()?;
    let kq = ctx.order(Level::FK);
    let vsize = cap::variety_size(ctx);
    if n >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut good = 0;
        for _ in 0..samples {
            let alphas: Vec<Elem> = (0..n).map(|_| Elem(rng.gen_range(1..kq as u32))).collect();
            let x = Elem(rng.gen_range(1..kq as u32));
            let p = SymPoint::new(ctx, veronese_tuple(ctx, &alphas, x))?;
            if w_label(ctx, &p).as_deref() == Some(&alphas[..]) {
                good += 1;
            }
        }
        let samples = samples as u64;
        return Ok(WPartitionReport {
            n,
            varieties: (kq - 1).pow(n),
            variety_size: vsize,
            target_points: samples,
            covered_once: good,
            covered_more: 0,
            uncovered: samples - good,
            stray: 0,
            sampled: true,
            ok: good == samples,
        });
    }

    let total = pg::point_count(ctx);
    if total > max_space {
        return Err(Error::TooLarge {
            size: total,
            bound: max_space,
        });
    }
    let cells = (kq * kq) as usize;
    let count = (1..kq as u32)
        .into_par_iter()
        .fold(
            || vec![0u16; cells],
            |mut acc, al| {
                for x in 1..kq as u32 {
                    let t = veronese_tuple(ctx, &[Elem(al)], Elem(x));
                    let p = pg::normalize(ctx, t[0], t[1]).expect("x nonzero");
                    let key = p.key(ctx);
                    // each point of V_alpha arises from q - 1 values of x
                    acc[key] = acc[key].saturating_add(1);
                }
                acc
            },
        )
        .reduce(
            || vec![0u16; cells],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.saturating_add(y);
                }
                a
            },
        );
    let per_point = (ctx.q() - 1) as u16;
    let mut report = WPartitionReport {
        n,
        varieties: kq - 1,
        variety_size: vsize,
        target_points: 0,
        covered_once: 0,
        covered_more: 0,
        uncovered: 0,
        stray: 0,
        sampled: false,
        ok: false,
    };
    for p in pg::enumerate_points(ctx) {
        let c = count[p.key(ctx)];
        if p.a.is_zero() || p.b.is_zero() {
            report.stray += u64::from(c > 0);
            continue;
        }
        report.target_points += 1;
        match c {
            0 => report.uncovered += 1,
            c if c == per_point => report.covered_once += 1,
            _ => report.covered_more += 1,
        }
    }
    report.ok = report.uncovered == 0
        && report.covered_more == 0
        && report.stray == 0
        && report.covered_once == report.varieties * report.variety_size;
    Ok(report)
}
