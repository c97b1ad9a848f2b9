//! The trinomials `f(y) = a0 y + a1 y^q + a2 y^{q^2}` over `F_{q^k}`: their
//! `D_eps` matrices and the transfer of the permutation property from
//! `F_{q^k}` to `F_{q^{2k}}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldCtx, Level};
use crate::linalg::{self, Matrix};

/// Default bound on the field size for [`is_permutation`].
pub const DEFAULT_BOUND: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMatrix {
    pub k: usize,
    pub epsilon: i8,
    pub entries: Matrix,
}

/// Row `i` holds `a_j^{q^i}` in column `i + j (mod k)`; entries that wrap
/// past the last column carry the factor `epsilon`.
pub fn build_d_matrix(ctx: &FieldCtx, coeffs: [Elem; 3], epsilon: i8) -> Result<DMatrix> {
    let k = ctx.k() as usize;
    if k < 3 {
        return Err(Error::KTooSmall(k));
    }
    assert!(epsilon == 1 || epsilon == -1, "epsilon is ±1");
    let fk = ctx.fk();
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for (j, &a) in coeffs.iter().enumerate() {
            let mut v = ctx.frobenius(Level::FK, a, i as i64);
            if i + j >= k && epsilon < 0 {
                v = fk.neg(v);
            }
            m.set(i, (i + j) % k, v);
        }
    }
    Ok(DMatrix {
        k,
        epsilon,
        entries: m,
    })
}

pub fn det(ctx: &FieldCtx, d: &DMatrix) -> Elem {
    linalg::determinant(ctx.fk(), &d.entries)
}

/// Whether `f` permutes `level`, decided by its `F_q`-kernel.
pub fn is_permutation(ctx: &FieldCtx, coeffs: [Elem; 3], level: Level, bound: u64) -> Result<bool> {
    let size = ctx.order(level);
    if size > bound {
        return Err(Error::TooLarge { size, bound });
    }
    Ok(ctx.linearized_kernel(coeffs, level).is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FerReport {
    pub coeffs: [Elem; 3],
    pub norm_a0: Elem,
    pub norm_a2: Elem,
    pub det_d1: Elem,
    pub det_dm1: Elem,
    pub perm_on_k: bool,
    pub perm_on_k2: bool,
    pub agree: bool,
    /// `det D_1 != 0`, the determinant criterion over `F_{q^k}`.
    pub det_criterion_k: bool,
    /// `det D_1 != 0` and `det D_{-1} != 0`, the criterion over `F_{q^{2k}}`.
    pub det_criterion_k2: bool,
}

pub fn norm_condition_holds(ctx: &FieldCtx, coeffs: [Elem; 3]) -> bool {
    let n0 = ctx.norm(Level::FK, coeffs[0], Level::Fq).expect("F_q is a subfield");
    let n2 = ctx.norm(Level::FK, coeffs[2], Level::Fq).expect("F_q is a subfield");
    ctx.fq().add(n0, n2).is_zero()
}

pub fn check_fer(ctx: &FieldCtx, coeffs: [Elem; 3]) -> Result<FerReport> {
    if !norm_condition_holds(ctx, coeffs) {
        return Err(Error::NormConditionFails);
    }
    let perm_on_k = ctx.linearized_kernel(coeffs, Level::FK).is_empty();
    let perm_on_k2 = ctx.linearized_kernel(coeffs, Level::FK2).is_empty();
    let det_d1 = det(ctx, &build_d_matrix(ctx, coeffs, 1)?);
    let det_dm1 = det(ctx, &build_d_matrix(ctx, coeffs, -1)?);
    Ok(FerReport {
        coeffs,
        norm_a0: ctx.norm(Level::FK, coeffs[0], Level::Fq)?,
        norm_a2: ctx.norm(Level::FK, coeffs[2], Level::Fq)?,
        det_d1,
        det_dm1,
        perm_on_k,
        perm_on_k2,
        agree: perm_on_k == perm_on_k2,
        det_criterion_k: !det_d1.is_zero(),
        det_criterion_k2: !det_d1.is_zero() && !det_dm1.is_zero(),
    })
}

pub fn random_triple<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> [Elem; 3] {
    let k = ctx.fk().order();
    [0; 3].map(|_| Elem(rng.gen_range(0..k)))
}

/// A uniform triple subject to `N(a0) + N(a2) = 0`, by rejection.
pub fn random_norm_triple<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> [Elem; 3] {
    loop {
        let t = random_triple(ctx, rng);
        if norm_condition_holds(ctx, t) {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_frobenius() {
        let ctx = FieldCtx::with_degree(3, 1, 3).unwrap();
        let id = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        for eps in [1, -1] {
            assert_eq!(det(&ctx, &build_d_matrix(&ctx, id, eps).unwrap()), Elem::ONE);
        }
        assert!(is_permutation(&ctx, id, Level::FK, DEFAULT_BOUND).unwrap());
        let frob = [Elem::ZERO, Elem::ONE, Elem::ZERO];
        assert!(is_permutation(&ctx, frob, Level::FK2, DEFAULT_BOUND).unwrap());
        assert!(matches!(
            is_permutation(&ctx, id, Level::FK2, 100),
            Err(Error::TooLarge { size: 729, bound: 100 })
        ));
    }

    #[test]
    fn k_too_small() {
        let ctx = FieldCtx::with_degree(3, 1, 2).unwrap();
        assert!(matches!(
            build_d_matrix(&ctx, [Elem::ONE; 3], 1),
            Err(Error::KTooSmall(2))
        ));
    }

    #[test]
    fn wrapped_entries_carry_epsilon() {
        let ctx = FieldCtx::with_degree(5, 1, 4).unwrap();
        let c = [Elem(7), Elem(11), Elem(13)];
        let d = build_d_matrix(&ctx, c, -1).unwrap();
        let fk = ctx.fk();
        // last row: eps a1^{q^3}, eps a2^{q^3}, 0, a0^{q^3}
        let f = |x| ctx.frobenius(Level::FK, x, 3);
        assert_eq!(d.entries.row(3), &[fk.neg(f(c[1])), fk.neg(f(c[2])), Elem::ZERO, f(c[0])]);
    }

    #[test]
    fn norm_gate() {
        let ctx = FieldCtx::with_degree(3, 1, 3).unwrap();
        assert!(matches!(
            check_fer(&ctx, [Elem::ONE, Elem::ZERO, Elem::ZERO]),
            Err(Error::NormConditionFails)
        ));
        let r = check_fer(&ctx, [Elem::ZERO, Elem(5), Elem::ZERO]).unwrap();
        assert!(r.perm_on_k && r.perm_on_k2 && r.agree);
    }
}
