//! Brute-force references for the fast paths.

use std::collections::HashSet;

use pgcaps::cap;
use pgcaps::codes;
use pgcaps::linalg::{self, Matrix};
use pgcaps::linperm;
use pgcaps::pg;
use pgcaps::{Elem, Field, FieldCtx, Level};

fn image_is_everything(ctx: &FieldCtx, c: [Elem; 3], level: Level) -> bool {
    let order = ctx.order(level) as u32;
    let image: HashSet<_> = (0..order).map(|y| ctx.eval_linearized(c, level, Elem(y))).collect();
    image.len() == order as usize
}

#[test]
fn kernel_test_matches_image_count() {
    let ctx = FieldCtx::with_degree(3, 1, 3).unwrap();
    for a0 in 0..27 {
        for a1 in [0, 1, 2, 5, 13, 22] {
            for a2 in 0..27 {
                let c = [Elem(a0), Elem(a1), Elem(a2)];
                for level in [Level::FK, Level::FK2] {
                    let fast = linperm::is_permutation(&ctx, c, level, linperm::DEFAULT_BOUND).unwrap();
                    assert_eq!(fast, image_is_everything(&ctx, c, level), "{c:?} {level:?}");
                }
            }
        }
    }
}

#[test]
fn determinant_matches_cofactor_expansion() {
    let ctx = FieldCtx::with_degree(3, 1, 3).unwrap();
    let f = ctx.fk();
    let cofactor = |m: &Matrix| {
        let g = |i, j| m.get(i, j);
        let minor = |a, b, c, d| f.sub(f.mul(g(1, a), g(2, b)), f.mul(g(1, c), g(2, d)));
        let t0 = f.mul(g(0, 0), minor(1, 2, 2, 1));
        let t1 = f.mul(g(0, 1), minor(0, 2, 2, 0));
        let t2 = f.mul(g(0, 2), minor(0, 1, 1, 0));
        f.add(f.sub(t0, t1), t2)
    };
    for a0 in 0..27 {
        for a2 in [0, 1, 5, 13, 26] {
            for a1 in [0, 2, 7] {
                let c = [Elem(a0), Elem(a1), Elem(a2)];
                for eps in [1, -1] {
                    let d = linperm::build_d_matrix(&ctx, c, eps).unwrap();
                    assert_eq!(linperm::det(&ctx, &d), cofactor(&d.entries));
                    assert_eq!(linalg::determinant(f, &d.entries), cofactor(&d.entries));
                }
            }
        }
    }
}

#[test]
fn every_triple_of_cap_points_is_independent() {
    let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
    let cap = cap::build_cap(&ctx).unwrap();
    let pts = &cap.points;
    let mut triples = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let m = Matrix::from_rows(vec![
                    pg::coords(&ctx, &pts[i]),
                    pg::coords(&ctx, &pts[j]),
                    pg::coords(&ctx, &pts[k]),
                ]);
                assert_eq!(linalg::rank(ctx.fq(), &m), 3);
                triples += 1;
            }
        }
    }
    assert_eq!(triples, 2600);
}

/// Covering radius by enumerating all combinations of up to `r` columns.
fn brute_radius(ctx: &FieldCtx, h: &codes::ParityCheck) -> u32 {
    let fq = ctx.fq();
    let rows = h.rows();
    let cols: Vec<Vec<Elem>> = (0..h.cols()).map(|j| h.matrix.column(j)).collect();
    let encode = |v: &[Elem]| v.iter().rev().fold(0u64, |acc, e| acc * u64::from(ctx.q()) + u64::from(e.0));
    let total = u64::from(ctx.q()).pow(rows as u32);
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut layer: Vec<Vec<Elem>> = vec![vec![Elem::ZERO; rows]];
    let mut radius = 0;
    while (seen.len() as u64) < total {
        radius += 1;
        let mut next = Vec::new();
        for s in &layer {
            for col in &cols {
                for c in 1..ctx.q() {
                    let t: Vec<_> = s.iter().zip(col).map(|(&a, &b)| fq.add(a, fq.mul(Elem(c), b))).collect();
                    if seen.insert(encode(&t)) {
                        next.push(t);
                    }
                }
            }
        }
        layer = next;
    }
    radius
}

#[test]
fn covering_radius_matches_brute_force() {
    let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
    let cap = cap::build_cap(&ctx).unwrap();
    let full = codes::parity_check(&ctx, &cap).unwrap();
    let fast = codes::covering_radius(&ctx, &full, codes::DEFAULT_SYNDROME_BOUND).unwrap();
    assert_eq!(fast.radius, Some(brute_radius(&ctx, &full)));
    assert_eq!(fast.radius, Some(2));

    let truncated = codes::parity_check(&ctx, &cap.without(0)).unwrap();
    let fast = codes::covering_radius(&ctx, &truncated, codes::DEFAULT_SYNDROME_BOUND).unwrap();
    assert_eq!(fast.radius, Some(brute_radius(&ctx, &truncated)));
    assert_eq!(fast.radius, Some(3));
}

#[test]
fn binomial_without_norm_condition_is_not_a_permutation() {
    let ctx = FieldCtx::with_degree(3, 1, 3).unwrap();
    let g = ctx.generator(Level::FK);
    let c = [Elem::ONE, Elem::ZERO, g];
    assert!(!linperm::norm_condition_holds(&ctx, c) || !image_is_everything(&ctx, c, Level::FK2));
    assert_eq!(
        image_is_everything(&ctx, c, Level::FK),
        linperm::is_permutation(&ctx, c, Level::FK, linperm::DEFAULT_BOUND).unwrap()
    );
}

#[test]
fn external_count_matches_enumeration() {
    for (p, h) in [(3, 1), (2, 2)] {
        let ctx = FieldCtx::make_tower(p, h, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        let ext = pg::enumerate_points(&ctx).filter(|x| !cap.contains(x)).count() as u64;
        let q = u64::from(p.pow(h));
        let v = (q.pow(3) - 1) / (q - 1);
        assert_eq!(ext, (q - 1) * v * v);
    }
}
