//! Points of `PG(4n+1, q)` in the field model: `P(a, b)` is the point of the
//! vector `(a, b, a^q, b^q, ...)`, determined by the pair `(a, b)` of `F_K`
//! elements up to `F_q^*` scaling.
//!
//! The canonical representative has its first nonzero `F_q`-coordinate equal
//! to 1, reading the coordinates of `a` (tower basis order) and then those
//! of `b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldCtx, Level};
use crate::linalg::{self, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", from = "[u32; 2]")]
pub struct ProjPoint {
    pub a: Elem,
    pub b: Elem,
}

impl From<ProjPoint> for [u32; 2] {
    fn from(p: ProjPoint) -> Self {
        [p.a.0, p.b.0]
    }
}

impl From<[u32; 2]> for ProjPoint {
    fn from([a, b]: [u32; 2]) -> Self {
        ProjPoint {
            a: Elem(a),
            b: Elem(b),
        }
    }
}

impl ProjPoint {
    /// Dense index `a * K + b`; ascending index is the enumeration order.
    #[inline]
    pub fn key(&self, ctx: &FieldCtx) -> usize {
        self.a.0 as usize * ctx.fk().order() as usize + self.b.0 as usize
    }

    pub fn from_key(ctx: &FieldCtx, key: usize) -> Self {
        let k = ctx.fk().order() as usize;
        ProjPoint {
            a: Elem((key / k) as u32),
            b: Elem((key % k) as u32),
        }
    }
}

/// First nonzero base-`q` digit of `x`, low digit first.
#[inline]
fn leading_coord(x: u32, q: u32) -> Option<u32> {
    let mut v = x;
    while v != 0 {
        let d = v % q;
        if d != 0 {
            return Some(d);
        }
        v /= q;
    }
    None
}

/// Whether `(a, b)` is already the canonical representative of its point.
#[inline]
pub fn is_canonical(ctx: &FieldCtx, a: Elem, b: Elem) -> bool {
    let q = ctx.q();
    leading_coord(a.0, q).or_else(|| leading_coord(b.0, q)) == Some(1)
}

/// Canonical representative of `P(a, b)` together with the scalar `s` in
/// `F_q^*` such that `(s a, s b)` is that representative.
pub fn normalize_with_scale(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<(ProjPoint, Elem)> {
    let q = ctx.q();
    let lead = leading_coord(a.0, q)
        .or_else(|| leading_coord(b.0, q))
        .ok_or(Error::ZeroVector)?;
    let fq = ctx.fq();
    let s = fq.inv(Elem(lead)).expect("leading coordinate is nonzero");
    let fk = ctx.fk();
    Ok((
        ProjPoint {
            a: fk.mul(s, a),
            b: fk.mul(s, b),
        },
        s,
    ))
}

pub fn normalize(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<ProjPoint> {
    normalize_with_scale(ctx, a, b).map(|(p, _)| p)
}

/// The `2(2n+1)` coordinates over `F_q`: those of `a`, then those of `b`.
pub fn coords(ctx: &FieldCtx, p: &ProjPoint) -> Vec<Elem> {
    let mut v = ctx.fq_coords(Level::FK, p.a);
    v.extend(ctx.fq_coords(Level::FK, p.b));
    v
}

/// `c1 P1 + c2 P2` on the vectors `(a, b)` (not normalized).
pub fn combine(ctx: &FieldCtx, c1: Elem, p1: &ProjPoint, c2: Elem, p2: &ProjPoint) -> (Elem, Elem) {
    let fk = ctx.fk();
    (
        fk.add(fk.mul(c1, p1.a), fk.mul(c2, p2.a)),
        fk.add(fk.mul(c1, p1.b), fk.mul(c2, p2.b)),
    )
}

/// Three distinct points are collinear iff their coordinate matrix over
/// `F_q` has rank at most 2.
pub fn collinear(ctx: &FieldCtx, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<bool> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::DuplicatePoint);
    }
    let m = Matrix::from_rows(vec![coords(ctx, p1), coords(ctx, p2), coords(ctx, p3)]);
    Ok(linalg::rank(ctx.fq(), &m) <= 2)
}

/// The line through two distinct points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub p1: ProjPoint,
    pub p2: ProjPoint,
    /// All `q + 1` points: `p1`, `p2`, then `p1 + d p2` for `d = 1, ..., q-1`.
    pub points: Vec<ProjPoint>,
}

impl Line {
    pub fn new(ctx: &FieldCtx, p1: ProjPoint, p2: ProjPoint) -> Result<Self> {
        if p1 == p2 {
            return Err(Error::DuplicatePoint);
        }
        let mut points = Vec::with_capacity(ctx.q() as usize + 1);
        points.push(p1);
        points.push(p2);
        points.extend(interior_points(ctx, &p1, &p2));
        Ok(Line { p1, p2, points })
    }
}

/// The `q - 1` points of the line `p1 p2` other than `p1` and `p2`.
pub fn interior_points<'a>(
    ctx: &'a FieldCtx,
    p1: &'a ProjPoint,
    p2: &'a ProjPoint,
) -> impl Iterator<Item = ProjPoint> + 'a {
    (1..ctx.q()).map(move |d| {
        let (a, b) = combine(ctx, Elem::ONE, p1, Elem(d), p2);
        normalize(ctx, a, b).expect("distinct points are independent")
    })
}

pub fn line_points(ctx: &FieldCtx, p1: &ProjPoint, p2: &ProjPoint) -> Result<Vec<ProjPoint>> {
    Line::new(ctx, *p1, *p2).map(|l| l.points)
}

/// `(q^{2k} - 1) / (q - 1)` for `k = 2n + 1`.
pub fn point_count(ctx: &FieldCtx) -> u64 {
    let q = u64::from(ctx.q());
    (ctx.order(Level::FK).pow(2) - 1) / (q - 1)
}

/// Every canonical point, in ascending key order.
pub fn enumerate_points(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    let k = ctx.fk().order();
    (0..k).flat_map(move |a| {
        (0..k).filter_map(move |b| {
            let (a, b) = (Elem(a), Elem(b));
            is_canonical(ctx, a, b).then_some(ProjPoint { a, b })
        })
    })
}

/// Canonical points with key in `[lo, hi)`, for splitting enumeration.
pub fn enumerate_range(ctx: &FieldCtx, lo: usize, hi: usize) -> impl Iterator<Item = ProjPoint> + '_ {
    (lo..hi)
        .map(move |key| ProjPoint::from_key(ctx, key))
        .filter(move |p| is_canonical(ctx, p.a, p.b))
}
