use proptest::prelude::*;

use pgcaps::cap::{self, CapSet};
use pgcaps::codes::{self, ParityCheck};
use pgcaps::cover;
use pgcaps::harness::io::CapFile;
use pgcaps::linperm;
use pgcaps::pg::{self, ProjPoint};
use pgcaps::veronese::{self, SymPoint};
use pgcaps::{Elem, Field, FieldCtx, Level};

fn ctx31() -> FieldCtx {
    FieldCtx::make_tower(3, 1, 1).unwrap()
}

fn cap31() -> (FieldCtx, CapSet) {
    let ctx = ctx31();
    let cap = cap::build_cap(&ctx).unwrap();
    (ctx, cap)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms_fk2(a in 0u32..729, b in 0u32..729, c in 0u32..729) {
        let ctx = ctx31();
        let f = ctx.fk2();
        let (a, b, c) = (Elem(a), Elem(b), Elem(c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(a in 0u32..64, b in 0u32..64, i in 0i64..6) {
        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        let f = ctx.fk();
        let (a, b) = (Elem(a), Elem(b));
        let fr = |x| ctx.frobenius(Level::FK, x, i);
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
    }

    #[test]
    fn normalize_ignores_scalars(a in 0u32..27, b in 0u32..27, c in 1u32..3) {
        prop_assume!(a != 0 || b != 0);
        let ctx = ctx31();
        let f = ctx.fk();
        let c = Elem(c);
        let p = pg::normalize(&ctx, Elem(a), Elem(b)).unwrap();
        let s = pg::normalize(&ctx, f.mul(c, Elem(a)), f.mul(c, Elem(b))).unwrap();
        prop_assert_eq!(p, s);
        prop_assert!(pg::is_canonical(&ctx, p.a, p.b));
    }

    #[test]
    fn certificates_verify(a in 0u32..125, b in 0u32..125) {
        prop_assume!(a != 0 || b != 0);
        let ctx = FieldCtx::make_tower(5, 1, 1).unwrap();
        let cap = cap::build_cap(&ctx).unwrap();
        let r = pg::normalize(&ctx, Elem(a), Elem(b)).unwrap();
        prop_assume!(!cap.contains(&r));
        let cert = cover::cover_point(&ctx, &cap, &r).unwrap();
        prop_assert!(cover::verify_certificate(&ctx, &cap, &cert));
        prop_assert_eq!(cap.label_of(&cert.p), Some(cap::Label::V1));
        prop_assert_eq!(cap.label_of(&cert.q), Some(cap::Label::Valpha));
    }

    #[test]
    fn bisecants_are_disjoint_off_the_cap(i in 0usize..13, j in 0usize..13, k in 0usize..13, l in 0usize..13) {
        prop_assume!((i, j) != (k, l));
        let (ctx, cap) = cap31();
        let v1: Vec<_> = cap.with_label(cap::Label::V1).map(|(_, p)| *p).collect();
        let va: Vec<_> = cap.with_label(cap::Label::Valpha).map(|(_, p)| *p).collect();
        let first = pg::Line::new(&ctx, v1[i], va[j]).unwrap();
        let second = pg::Line::new(&ctx, v1[k], va[l]).unwrap();
        let shared: Vec<_> = first
            .points
            .iter()
            .filter(|p| second.points.contains(p) && !cap.contains(p))
            .collect();
        prop_assert!(shared.is_empty());
    }

    #[test]
    fn dickson_determinant_decides_permutation(a0 in 0u32..27, a1 in 0u32..27, a2 in 0u32..27) {
        let ctx = FieldCtx::with_degree(3, 1, 3).unwrap();
        let c = [Elem(a0), Elem(a1), Elem(a2)];
        let d = linperm::det(&ctx, &linperm::build_d_matrix(&ctx, c, 1).unwrap());
        let perm = linperm::is_permutation(&ctx, c, Level::FK, linperm::DEFAULT_BOUND).unwrap();
        prop_assert_eq!(!d.is_zero(), perm);
    }

    #[test]
    fn kernel_vectors_are_roots(a0 in 0u32..256, a1 in 0u32..256, a2 in 0u32..256) {
        let ctx = FieldCtx::with_degree(2, 2, 4).unwrap();
        let c = [Elem(a0), Elem(a1), Elem(a2)];
        for y in ctx.linearized_kernel(c, Level::FK) {
            prop_assert!(!y.is_zero());
            prop_assert_eq!(ctx.eval_linearized(c, Level::FK, y), Elem::ZERO);
        }
    }

    #[test]
    fn veronese_points_have_rank_one(x in 1u32..27) {
        let ctx = ctx31();
        let t = veronese::veronese_tuple(&ctx, &[Elem::ONE], Elem(x));
        let p = SymPoint::new(&ctx, t).unwrap();
        prop_assert_eq!(veronese::rank(&ctx, &veronese::sym_matrix(&ctx, &p)), 1);
    }

    #[test]
    fn chord_points_lie_on_the_chordal_variety(i in 1u32..27, j in 1u32..27, c in 1u32..3) {
        prop_assume!(i != j);
        let ctx = ctx31();
        let f = ctx.fk();
        let alpha = cap::pick_alpha(&ctx);
        let u = veronese::veronese_tuple(&ctx, &[alpha], Elem(i));
        let v = veronese::veronese_tuple(&ctx, &[alpha], Elem(j));
        let sum: Vec<_> = u.iter().zip(&v).map(|(&a, &b)| f.add(a, f.mul(Elem(c), b))).collect();
        prop_assume!(sum.iter().any(|e| !e.is_zero()));
        let p = SymPoint::new(&ctx, sum).unwrap();
        prop_assert!(veronese::chordal_test(&ctx, &p, alpha).unwrap());
    }
}

#[test]
fn factorization_identity_holds_on_canonical_covers() {
    let ctx = ctx31();
    let alpha = cap::pick_alpha(&ctx);
    for w in 2..ctx.fk().order() {
        let w = Elem(w);
        if w == alpha {
            continue;
        }
        let c = cover::cover_canonical(&ctx, alpha, w).unwrap();
        assert!(cover::check_canonical(&ctx, alpha, w, &c));
    }
}

#[test]
fn case_two_roots_transfer_from_the_quotient() {
    let ctx = ctx31();
    let (fk, f2) = (ctx.fk(), ctx.fk2());
    let mut seen = 0;
    for w in 0..fk.order() {
        let w = Elem(w);
        let d = f2.sub(f2.square(w), Elem::ONE);
        if d.is_zero() || ctx.is_square(Level::FK, d) {
            continue;
        }
        let t = ctx.sqrt(Level::FK2, d).unwrap();
        let beta = f2.add(w, t);
        let xi = ctx.solve_frob_quotient(beta).unwrap();
        assert_eq!(f2.pow(xi, u64::from(ctx.q()) - 1), beta);
        seen += 1;
    }
    assert_eq!(seen, 13);
}

#[test]
fn cap_file_round_trip() {
    let (ctx, cap) = cap31();
    let file = CapFile::from_cap(&ctx, &cap).unwrap();
    let json = serde_json::to_string(&file).unwrap();
    let back: CapFile = serde_json::from_str(&json).unwrap();
    assert_eq!(back, file);
    let (_, rebuilt) = back.into_cap().unwrap();
    assert_eq!(rebuilt.points, cap.points);
}

#[test]
fn cap_file_rejects_non_canonical_points() {
    let (ctx, cap) = cap31();
    let mut file = CapFile::from_cap(&ctx, &cap).unwrap();
    let p = file.points[0];
    let f = ctx.fk();
    file.points[0] = ProjPoint {
        a: f.mul(Elem(2), p.a),
        b: f.mul(Elem(2), p.b),
    };
    assert!(file.into_cap().is_err());
}

#[test]
fn parity_check_text_round_trip() {
    let (ctx, cap) = cap31();
    let h = codes::parity_check(&ctx, &cap).unwrap();
    let back = ParityCheck::from_text(&h.to_text()).unwrap();
    assert_eq!(back, h);
}
