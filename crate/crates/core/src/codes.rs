//! The cap as the parity-check matrix of a linear code over `F_q`.
//!
//! Syndromes are vectors of `F_q^r` indexed by `sum_i v_i q^i`. Because
//! `q = p^h` and `F_q` elements are base-`p` encodings, that index is the
//! base-`p` expansion of the whole vector and syndrome addition is
//! digit-wise addition modulo `p`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cap::CapSet;
use crate::error::{Error, Result};
use crate::field::arith::padic_add;
use crate::field::{Elem, Field, FieldCtx, Fq};
use crate::linalg::{self, Matrix};
use crate::pg;

/// Default bound on the number of syndromes swept.
pub const DEFAULT_SYNDROME_BOUND: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    pub q: u32,
    pub p: u32,
    pub h: u32,
    pub n: u32,
    pub matrix: Matrix,
}

impl ParityCheck {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Header `q p h n N`, then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {} {}\n", self.q, self.p, self.h, self.n, self.cols());
        for i in 0..self.rows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|e| e.0.to_string()).collect();
            writeln!(s, "{}", row.join(" ")).expect("writing to a String");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<u32> = parse_row(lines.next().ok_or_else(|| bad("empty input"))?)?;
        let [q, p, h, n, cols] = header[..] else {
            return Err(bad("header must be `q p h n N`"));
        };
        if u64::from(p).pow(h) != u64::from(q) {
            return Err(bad("q != p^h"));
        }
        let rows: Vec<Vec<Elem>> = lines
            .map(|l| parse_row(l).map(|r| r.into_iter().map(Elem).collect()))
            .collect::<Result<_>>()?;
        if rows.len() != (4 * n + 2) as usize {
            return Err(bad("row count differs from 4n + 2"));
        }
        if rows.iter().any(|r| r.len() != cols as usize || r.iter().any(|e| e.0 >= q)) {
            return Err(bad("row length or entry out of range"));
        }
        Ok(ParityCheck {
            q,
            p,
            h,
            n,
            matrix: Matrix::from_rows(rows),
        })
    }
}

fn bad(msg: &str) -> Error {
    Error::Format(msg.into())
}

fn parse_row(line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("non-numeric entry")))
        .collect()
}

/// Column `j` holds the `F_q`-coordinates of cap point `j`.
pub fn parity_check(ctx: &FieldCtx, cap: &CapSet) -> Result<ParityCheck> {
    let rows = 2 * ctx.k() as usize;
    let mut m = Matrix::zeros(rows, cap.len());
    for (j, p) in cap.points.iter().enumerate() {
        for (i, c) in pg::coords(ctx, p).into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(ParityCheck {
        q: ctx.q(),
        p: ctx.p(),
        h: ctx.h(),
        n: ctx.n()?,
        matrix: m,
    })
}

/// Arithmetic on syndrome indices.
struct Syndromes<'a> {
    fq: &'a Fq,
    p: u32,
    q: u32,
    r: usize,
}

impl Syndromes<'_> {
    fn index(&self, v: &[Elem]) -> u32 {
        v.iter().rev().fold(0, |acc, c| acc * self.q + c.0)
    }

    fn digits(&self, mut s: u32) -> Vec<Elem> {
        (0..self.r)
            .map(|_| {
                let d = s % self.q;
                s /= self.q;
                Elem(d)
            })
            .collect()
    }

    fn scale(&self, s: u32, c: Elem) -> u32 {
        let v: Vec<Elem> = self.digits(s).into_iter().map(|d| self.fq.mul(c, d)).collect();
        self.index(&v)
    }

    /// Representative with first nonzero digit 1.
    fn normalize(&self, s: u32) -> u32 {
        match self.digits(s).into_iter().find(|d| !d.is_zero()) {
            Some(lead) => self.scale(s, self.fq.inv(lead).expect("nonzero")),
            None => 0,
        }
    }

    /// `c * column` for every column and every `c` in `F_q^*`.
    fn multiples(&self, h: &ParityCheck) -> Vec<Vec<u32>> {
        (0..h.cols())
            .map(|j| {
                let base = self.index(&h.matrix.column(j));
                (1..self.q).map(|c| self.scale(base, Elem(c))).collect()
            })
            .collect()
    }
}

fn syndromes_for<'a>(ctx: &'a FieldCtx, h: &ParityCheck) -> Result<Syndromes<'a>> {
    if h.q != ctx.q() {
        return Err(bad("matrix and field disagree on q"));
    }
    let count = u64::from(h.q).checked_pow(h.rows() as u32);
    if count.is_none_or(|c| c > u64::from(u32::MAX)) {
        return Err(Error::TooLarge {
            size: count.unwrap_or(u64::MAX),
            bound: u64::from(u32::MAX),
        });
    }
    Ok(Syndromes {
        fq: ctx.fq(),
        p: h.p,
        q: h.q,
        r: h.rows(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Exact(u32),
    /// Every set of fewer columns is independent but some dependency exists.
    AtLeast(u32),
    /// The columns are linearly independent.
    NoDependency,
}

/// Smallest number of linearly dependent columns, searched up to 4.
pub fn min_distance(ctx: &FieldCtx, h: &ParityCheck) -> Result<Distance> {
    let n = h.cols();
    if n < 4 {
        return Err(Error::TooSmall(format!("{n} columns")));
    }
    let syn = syndromes_for(ctx, h)?;
    let mults = syn.multiples(h);
    if mults.iter().any(|m| m[0] == 0) {
        return Ok(Distance::Exact(1));
    }

    // every nonzero multiple of a column -> column
    let mut owner: HashMap<u32, usize> = HashMap::with_capacity(n * (syn.q as usize - 1));
    for (j, m) in mults.iter().enumerate() {
        for &s in m {
            if owner.insert(s, j).is_some_and(|prev| prev != j) {
                return Ok(Distance::Exact(2));
            }
        }
    }

    let has_triple = (0..n).into_par_iter().any(|i| {
        (i + 1..n).any(|j| {
            mults[j]
                .iter()
                .any(|&dj| owner.contains_key(&padic_add(syn.p, mults[i][0], dj)))
        })
    });
    if has_triple {
        return Ok(Distance::Exact(3));
    }

    // two chords through a common point give four dependent columns
    let mut seen: HashMap<u32, (usize, usize)> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for &dj in &mults[j] {
                let r = syn.normalize(padic_add(syn.p, mults[i][0], dj));
                if seen.insert(r, (i, j)).is_some() {
                    return Ok(Distance::Exact(4));
                }
            }
        }
    }

    Ok(if linalg::rank(ctx.fq(), &h.matrix) < n {
        Distance::AtLeast(5)
    } else {
        Distance::NoDependency
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub syndromes: u64,
    /// Number of syndromes first reached with `t` columns, `t = 0, 1, ...`.
    pub layers: Vec<u64>,
    pub covered: u64,
    /// `None` when some syndrome is outside the column span.
    pub radius: Option<u32>,
}

/// Breadth-first sweep over all syndromes; exact covering radius.
pub fn covering_radius(ctx: &FieldCtx, h: &ParityCheck, bound: u64) -> Result<CoveringReport> {
    let syn = syndromes_for(ctx, h)?;
    let total = u64::from(syn.q).pow(syn.r as u32);
    if total > bound {
        return Err(Error::TooLarge { size: total, bound });
    }
    let steps: Vec<u32> = {
        let mut s: Vec<u32> = syn.multiples(h).into_iter().flatten().collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let mut reached = vec![false; total as usize];
    reached[0] = true;
    let mut frontier = vec![0u32];
    let mut layers = vec![1u64];
    let mut covered = 1u64;
    while !frontier.is_empty() && covered < total {
        let candidates: Vec<u32> = frontier
            .par_chunks(64)
            .flat_map_iter(|chunk| {
                let reached = &reached;
                let steps = &steps;
                chunk.iter().flat_map(move |&s| {
                    steps
                        .iter()
                        .map(move |&m| padic_add(syn.p, s, m))
                        .filter(move |&t| !reached[t as usize])
                })
            })
            .collect();
        let mut next = Vec::new();
        for t in candidates {
            if !reached[t as usize] {
                reached[t as usize] = true;
                next.push(t);
            }
        }
        if next.is_empty() {
            break;
        }
        covered += next.len() as u64;
        layers.push(next.len() as u64);
        frontier = next;
    }
    Ok(CoveringReport {
        syndromes: total,
        radius: (covered == total).then(|| layers.len() as u32 - 1),
        layers,
        covered,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub q: u32,
    /// Code length `N` (number of columns).
    pub length: usize,
    /// `N - (4n + 2)`.
    pub dimension: usize,
    pub rows: usize,
    pub rank: usize,
    pub min_distance: Distance,
    pub covering: CoveringReport,
    /// `[N, N - (4n+2), 4]_q` with covering radius 2.
    pub as_expected: bool,
    pub min_distance_ms: u128,
    pub covering_radius_ms: u128,
}

pub fn code_report(ctx: &FieldCtx, cap: &CapSet, bound: u64) -> Result<CodeReport> {
    let h = parity_check(ctx, cap)?;
    report_for(ctx, &h, bound)
}

pub fn report_for(ctx: &FieldCtx, h: &ParityCheck, bound: u64) -> Result<CodeReport> {
    let t = Instant::now();
    let d = min_distance(ctx, h)?;
    let d_ms = t.elapsed().as_millis();
    let t = Instant::now();
    let covering = covering_radius(ctx, h, bound)?;
    let c_ms = t.elapsed().as_millis();
    let rank = linalg::rank(ctx.fq(), &h.matrix);
    Ok(CodeReport {
        q: h.q,
        length: h.cols(),
        dimension: h.cols().saturating_sub(h.rows()),
        rows: h.rows(),
        rank,
        as_expected: rank == h.rows() && d == Distance::Exact(4) && covering.radius == Some(2),
        min_distance: d,
        covering,
        min_distance_ms: d_ms,
        covering_radius_ms: c_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cap;

    fn q3() -> (FieldCtx, CapSet) {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        (ctx, cap)
    }

    #[test]
    fn text_round_trip() {
        let (ctx, cap) = q3();
        let h = parity_check(&ctx, &cap).unwrap();
        assert_eq!((h.rows(), h.cols()), (6, 26));
        let text = h.to_text();
        assert!(text.starts_with("3 3 1 1 26\n"));
        assert_eq!(ParityCheck::from_text(&text).unwrap(), h);
        assert!(ParityCheck::from_text("3 3 1 1 2\n0 1\n").is_err());
    }

    #[test]
    fn identity_has_no_dependency() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let mut m = Matrix::zeros(6, 6);
        for i in 0..6 {
            m.set(i, i, Elem::ONE);
        }
        let h = ParityCheck { q: 3, p: 3, h: 1, n: 1, matrix: m };
        assert_eq!(min_distance(&ctx, &h).unwrap(), Distance::NoDependency);
        let r = covering_radius(&ctx, &h, 1000).unwrap();
        assert_eq!(r.radius, Some(6));
        assert_eq!(r.layers, vec![1, 12, 60, 160, 240, 192, 64]);
    }

    #[test]
    fn cap_code_q3() {
        let (ctx, cap) = q3();
        let r = code_report(&ctx, &cap, DEFAULT_SYNDROME_BOUND).unwrap();
        assert_eq!((r.length, r.dimension, r.rank), (26, 20, 6));
        assert_eq!(r.min_distance, Distance::Exact(4));
        assert_eq!(r.covering.radius, Some(2));
        assert_eq!(r.covering.syndromes, 729);
        assert!(r.as_expected);
    }

    #[test]
    fn collinear_triple_gives_three() {
        let (ctx, cap) = q3();
        let extra = pg::interior_points(&ctx, &cap.points[0], &cap.points[20]).next().unwrap();
        let bigger = cap.with_point(extra, cap::Label::V1).unwrap();
        let h = parity_check(&ctx, &bigger).unwrap();
        assert_eq!(min_distance(&ctx, &h).unwrap(), Distance::Exact(3));
    }
}
