//! The tower `F_p ⊂ F_q ⊂ F_K ⊂ F_{K^2}` with `K = q^k`.
//!
//! For the cap construction `k = 2n + 1`; the linearized-polynomial checks
//! also build towers with even `k`. Each level is a polynomial extension of
//! the one below it, so `F_q`-coordinates of any element are the base-`q`
//! digits of its encoding and subfield elements keep their encoding.

pub mod arith;
pub mod dlog;
pub mod poly;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use arith::{Elem, ExtField, Field, PrimeField, TableField};
use dlog::BabyGiant;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub type Fq = TableField;
pub type FK = ExtField<TableField>;
pub type FK2 = ExtField<ExtField<TableField>>;

/// Largest supported `q`; `F_q` is fully tabulated.
pub const MAX_Q: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Fq,
    FK,
    FK2,
}

/// The three moduli of the tower as full monic coefficient vectors
/// (constant term first, leading 1 last), each over the level below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moduli {
    pub f1: Vec<Elem>,
    pub f2: Vec<Elem>,
    pub f3: Vec<Elem>,
}

#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    h: u32,
    k: u32,
    fq: Fq,
    fk: FK,
    fk2: FK2,
    moduli: Moduli,
    g_q: Elem,
    g_k: Elem,
    g_k2: Elem,
    nonsquare_q: Option<Elem>,
    dlog_k: OnceLock<BabyGiant>,
    dlog_k2: OnceLock<BabyGiant>,
}

impl FieldCtx {
    /// Tower for the cap construction in `PG(4n+1, q)`, `q = p^h`.
    pub fn make_tower(p: u32, h: u32, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("n must be at least 1".into()));
        }
        Self::with_degree(p, h, 2 * n + 1)
    }

    /// Tower with middle level `F_{q^k}` for any `k >= 1`.
    pub fn with_degree(p: u32, h: u32, k: u32) -> Result<Self> {
        if !poly::is_prime(u64::from(p)) {
            return Err(Error::NonPrime(p));
        }
        if h == 0 || k == 0 {
            return Err(Error::Unsupported("h and k must be positive".into()));
        }
        let q = u64::from(p).checked_pow(h).unwrap_or(u64::MAX);
        if q <= 2 {
            return Err(Error::QTooSmall(q));
        }
        if q > MAX_Q {
            return Err(Error::Unsupported(format!("q = {q} exceeds {MAX_Q}")));
        }
        let top = q.checked_pow(2 * k).unwrap_or(u64::MAX);
        if top > u64::from(u32::MAX) {
            return Err(Error::Unsupported(format!(
                "q^(2k) = {q}^{} does not fit 32-bit encodings",
                2 * k
            )));
        }

        let fp = PrimeField::new(p);
        let f1 = poly::smallest_irreducible(&fp, h as usize);
        let fq = TableField::tabulate(&ExtField::new(fp, f1[..h as usize].to_vec()));
        let f2 = poly::smallest_irreducible(&fq, k as usize);
        let fk = ExtField::new(fq.clone(), f2[..k as usize].to_vec());
        let f3 = poly::smallest_irreducible(&fk, 2);
        let fk2 = ExtField::new(fk.clone(), f3[..2].to_vec());

        let g_q = poly::smallest_primitive(&fq);
        let g_k = poly::smallest_primitive(&fk);
        let g_k2 = poly::smallest_primitive(&fk2);
        let nonsquare_q = (p != 2).then(|| {
            (1..q as u32)
                .map(Elem)
                .find(|&c| fq.pow(c, (q - 1) / 2) != Elem::ONE)
                .expect("odd-order fields have non-squares")
        });

        let ctx = FieldCtx {
            p,
            h,
            k,
            fq,
            fk,
            fk2,
            moduli: Moduli { f1, f2, f3 },
            g_q,
            g_k,
            g_k2,
            nonsquare_q,
            dlog_k: OnceLock::new(),
            dlog_k2: OnceLock::new(),
        };
        ctx.check_invariants()?;
        Ok(ctx)
    }

    fn check_invariants(&self) -> Result<()> {
        for level in [Level::Fq, Level::FK, Level::FK2] {
            let f = self.field(level);
            let g = self.generator(level);
            let n = u64::from(f.order()) - 1;
            let factors = poly::prime_factors(n);
            if f.pow(g, n) != Elem::ONE || !poly::is_primitive(f, g, &factors) {
                return Err(Error::InternalContradiction(format!(
                    "generator of {level:?} does not have order {n}"
                )));
            }
        }
        let irreducible = poly::is_irreducible(&PrimeField::new(self.p), &self.moduli.f1)
            && poly::is_irreducible(&self.fq, &self.moduli.f2)
            && poly::is_irreducible(&self.fk, &self.moduli.f3);
        if !irreducible {
            return Err(Error::InternalContradiction("reducible modulus".into()));
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.fq.order()
    }

    /// Degree of `F_K` over `F_q`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// The construction parameter `n` with `k = 2n + 1`.
    pub fn n(&self) -> Result<u32> {
        if self.k % 2 == 1 {
            Ok((self.k - 1) / 2)
        } else {
            Err(Error::EvenDegree(self.k))
        }
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn moduli(&self) -> &Moduli {
        &self.moduli
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn fk(&self) -> &FK {
        &self.fk
    }

    pub fn fk2(&self) -> &FK2 {
        &self.fk2
    }

    pub fn field(&self, level: Level) -> &dyn Field {
        match level {
            Level::Fq => &self.fq,
            Level::FK => &self.fk,
            Level::FK2 => &self.fk2,
        }
    }

    pub fn order(&self, level: Level) -> u64 {
        u64::from(self.field(level).order())
    }

    /// Dimension of `level` as an `F_q`-vector space.
    pub fn dim_over_q(&self, level: Level) -> u32 {
        match level {
            Level::Fq => 1,
            Level::FK => self.k,
            Level::FK2 => 2 * self.k,
        }
    }

    pub fn generator(&self, level: Level) -> Elem {
        match level {
            Level::Fq => self.g_q,
            Level::FK => self.g_k,
            Level::FK2 => self.g_k2,
        }
    }

    /// Smallest non-square of `F_q` (odd `q` only).
    pub fn nonsquare_q(&self) -> Option<Elem> {
        self.nonsquare_q
    }

    /// `F_q`-coordinates of `x` with respect to the tower basis of `level`.
    pub fn fq_coords(&self, level: Level, x: Elem) -> Vec<Elem> {
        let q = self.q();
        let mut v = x.0;
        (0..self.dim_over_q(level))
            .map(|_| {
                let d = v % q;
                v /= q;
                Elem(d)
            })
            .collect()
    }

    pub fn from_fq_coords(&self, coords: &[Elem]) -> Elem {
        let q = self.q();
        Elem(coords.iter().rev().fold(0u32, |acc, c| acc * q + c.0))
    }

    /// `x^{q^i}`; negative `i` is taken modulo the degree of the level.
    pub fn frobenius(&self, level: Level, x: Elem, i: i64) -> Elem {
        let f = self.field(level);
        let steps = i.rem_euclid(i64::from(self.dim_over_q(level)));
        let q = u64::from(self.q());
        (0..steps).fold(x, |acc, _| f.pow(acc, q))
    }

    /// Norm from `level` down to the subfield `target`.
    pub fn norm(&self, level: Level, x: Elem, target: Level) -> Result<Elem> {
        if target > level {
            return Err(Error::LevelMismatch {
                from: level,
                to: target,
            });
        }
        let e = (self.order(level) - 1) / (self.order(target) - 1);
        let r = self.field(level).pow(x, e);
        if !self.field(target).contains(r) {
            return Err(Error::InternalContradiction(
                "norm left the target subfield".into(),
            ));
        }
        Ok(r)
    }

    pub fn is_square(&self, level: Level, x: Elem) -> bool {
        if !self.is_odd() || x.is_zero() {
            return true;
        }
        let f = self.field(level);
        f.pow(x, (self.order(level) - 1) / 2) == Elem::ONE
    }

    /// A square root of `x`; for odd `q`, the root with the smaller encoding.
    pub fn sqrt(&self, level: Level, x: Elem) -> Result<Elem> {
        let f = self.field(level);
        let order = self.order(level);
        if x.is_zero() {
            return Ok(Elem::ZERO);
        }
        if !self.is_odd() {
            return Ok(f.pow(x, order / 2));
        }
        if !self.is_square(level, x) {
            return Err(Error::NotASquare);
        }
        let r = tonelli_shanks(f, x, self.generator(level));
        let other = f.neg(r);
        let root = r.min(other);
        debug_assert_eq!(f.square(root), x);
        Ok(root)
    }

    fn dlog(&self, level: Level) -> &BabyGiant {
        match level {
            Level::FK => self.dlog_k.get_or_init(|| BabyGiant::new(&self.fk, self.g_k)),
            Level::FK2 => self
                .dlog_k2
                .get_or_init(|| BabyGiant::new(&self.fk2, self.g_k2)),
            Level::Fq => unreachable!("discrete logs are only taken in F_K and F_K^2"),
        }
    }

    /// Discrete logarithm to the base of the level's primitive element.
    pub fn discrete_log(&self, level: Level, x: Elem) -> Option<u64> {
        if level == Level::Fq {
            let f = &self.fq;
            let mut cur = Elem::ONE;
            for m in 0..u64::from(f.order()) - 1 {
                if cur == x {
                    return Some(m);
                }
                cur = f.mul(cur, self.g_q);
            }
            return None;
        }
        self.dlog(level).log(self.field(level), x)
    }

    /// Some `t` in `F_K` with `t^e = c`: the power of `g_K` with the smallest
    /// exponent.
    pub fn solve_power(&self, c: Elem, e: u64) -> Result<Elem> {
        if c.is_zero() {
            return Ok(Elem::ZERO);
        }
        let fk = &self.fk;
        let n = self.order(Level::FK) - 1;
        let m = self
            .discrete_log(Level::FK, c)
            .ok_or_else(|| Error::InternalContradiction("missing discrete log".into()))?;
        let d = poly::gcd(e % n, n);
        let d = if d == 0 { n } else { d };
        if m % d != 0 {
            return Err(Error::NoSolution { exponent: e });
        }
        let reduced = n / d;
        let inv = poly::mod_inverse((e / d) % reduced, reduced)
            .ok_or_else(|| Error::InternalContradiction("exponent not invertible".into()))?;
        let k0 = ((m / d) as u128 * inv as u128 % reduced as u128) as u64;
        let t = fk.pow(self.g_k, k0);
        if fk.pow(t, e) != c {
            return Err(Error::InternalContradiction("power root re-check failed".into()));
        }
        Ok(t)
    }

    /// Some `xi` in `F_{K^2}` with `xi^{q-1} = beta`, for `beta` of norm 1.
    pub fn solve_frob_quotient(&self, beta: Elem) -> Result<Elem> {
        if beta.is_zero() || self.norm(Level::FK2, beta, Level::Fq)? != Elem::ONE {
            return Err(Error::NormNotOne);
        }
        let q1 = u64::from(self.q()) - 1;
        let m = self
            .discrete_log(Level::FK2, beta)
            .ok_or_else(|| Error::InternalContradiction("missing discrete log".into()))?;
        if m % q1 != 0 {
            return Err(Error::InternalContradiction(
                "norm-one element with log not divisible by q-1".into(),
            ));
        }
        let xi = self.fk2.pow(self.g_k2, m / q1);
        if self.fk2.pow(xi, q1) != beta {
            return Err(Error::InternalContradiction("quotient re-check failed".into()));
        }
        Ok(xi)
    }

    /// `a0*y + a1*y^q + a2*y^{q^2}` evaluated at `level`.
    pub fn eval_linearized(&self, coeffs: [Elem; 3], level: Level, y: Elem) -> Elem {
        let f = self.field(level);
        let q = u64::from(self.q());
        let yq = f.pow(y, q);
        let yq2 = f.pow(yq, q);
        let t0 = f.mul(coeffs[0], y);
        let t1 = f.mul(coeffs[1], yq);
        let t2 = f.mul(coeffs[2], yq2);
        f.add(f.add(t0, t1), t2)
    }

    /// `F_q`-basis of the kernel of `y -> a0 y + a1 y^q + a2 y^{q^2}` on
    /// `level`. Empty means the map is a permutation.
    pub fn linearized_kernel(&self, coeffs: [Elem; 3], level: Level) -> Vec<Elem> {
        let dim = self.dim_over_q(level) as usize;
        let q = self.q();
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let basis = Elem(q.pow(j as u32));
            let image = self.eval_linearized(coeffs, level, basis);
            for (i, c) in self.fq_coords(level, image).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        linalg::nullspace(&self.fq, &m)
            .into_iter()
            .map(|v| self.from_fq_coords(&v))
            .collect()
    }
}

/// Tonelli-Shanks with the primitive element as the fixed non-residue.
fn tonelli_shanks(f: &dyn Field, x: Elem, nonresidue: Elem) -> Elem {
    let n = u64::from(f.order()) - 1;
    let s = n.trailing_zeros();
    let t = n >> s;
    let mut m = s;
    let mut c = f.pow(nonresidue, t);
    let mut tt = f.pow(x, t);
    let mut r = f.pow(x, t.div_ceil(2));
    while tt != Elem::ONE {
        let mut i = 0;
        let mut probe = tt;
        while probe != Elem::ONE {
            probe = f.square(probe);
            i += 1;
        }
        let b = f.pow(c, 1u64 << (m - i - 1));
        m = i;
        c = f.square(b);
        tt = f.mul(tt, c);
        r = f.mul(r, b);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_sizes() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        assert_eq!(ctx.order(Level::Fq), 3);
        assert_eq!(ctx.order(Level::FK), 27);
        assert_eq!(ctx.order(Level::FK2), 729);
        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        assert_eq!(ctx.order(Level::Fq), 4);
        assert_eq!(ctx.order(Level::FK), 64);
        assert_eq!(ctx.order(Level::FK2), 4096);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldCtx::make_tower(2, 1, 1), Err(Error::QTooSmall(2))));
        assert!(matches!(FieldCtx::make_tower(4, 1, 1), Err(Error::NonPrime(4))));
        assert!(matches!(FieldCtx::make_tower(3, 1, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn construction_is_deterministic() {
        let a = FieldCtx::make_tower(5, 1, 1).unwrap();
        let b = FieldCtx::make_tower(5, 1, 1).unwrap();
        assert_eq!(a.moduli(), b.moduli());
        for level in [Level::Fq, Level::FK, Level::FK2] {
            assert_eq!(a.generator(level), b.generator(level));
        }
    }

    #[test]
    fn subfield_membership_by_frobenius() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let fk = ctx.fk();
        for x in 0..27 {
            let fixed = fk.pow(Elem(x), 3) == Elem(x);
            assert_eq!(fixed, x < 3);
        }
        let fk2 = ctx.fk2();
        for x in 0..729 {
            let fixed = fk2.pow(Elem(x), 27) == Elem(x);
            assert_eq!(fixed, x < 27);
        }
    }

    #[test]
    fn frobenius_examples() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let g = ctx.generator(Level::FK);
        assert_eq!(ctx.frobenius(Level::FK, g, 0), g);
        let cubed = ctx.fk().mul(ctx.fk().mul(g, g), g);
        assert_eq!(ctx.frobenius(Level::FK, g, 1), cubed);
        assert_eq!(ctx.frobenius(Level::FK, g, 3), g);
        assert_eq!(ctx.frobenius(Level::FK, g, -1), ctx.frobenius(Level::FK, g, 2));
        assert_eq!(ctx.frobenius(Level::FK, Elem(2), 1), Elem(2));
    }

    #[test]
    fn norm_of_primitive_in_f27() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let g = ctx.generator(Level::FK);
        assert_eq!(ctx.norm(Level::FK, g, Level::Fq).unwrap(), Elem(2));
        assert_eq!(ctx.norm(Level::FK, Elem::ONE, Level::Fq).unwrap(), Elem::ONE);
        assert!(matches!(
            ctx.norm(Level::FK, g, Level::FK2),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn square_roots() {
        let ctx = FieldCtx::make_tower(5, 1, 1).unwrap();
        assert_eq!(ctx.sqrt(Level::Fq, Elem(4)).unwrap(), Elem(2));
        assert!(matches!(ctx.sqrt(Level::Fq, Elem(2)), Err(Error::NotASquare)));

        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        assert!(!ctx.is_square(Level::FK, ctx.generator(Level::FK)));
        let squares: std::collections::BTreeSet<_> =
            (0..27).map(|x| ctx.fk().square(Elem(x))).collect();
        for x in 0..27 {
            assert_eq!(ctx.is_square(Level::FK, Elem(x)), squares.contains(&Elem(x)));
            if let Ok(r) = ctx.sqrt(Level::FK, Elem(x)) {
                assert_eq!(ctx.fk().square(r), Elem(x));
                assert!(r <= ctx.fk().neg(r));
            }
        }
        for x in 0..729 {
            if let Ok(r) = ctx.sqrt(Level::FK2, Elem(x)) {
                assert_eq!(ctx.fk2().square(r), Elem(x));
            }
        }
    }

    #[test]
    fn char_two_square_roots() {
        for (p, h, n) in [(2, 2, 1), (2, 3, 1)] {
            let ctx = FieldCtx::make_tower(p, h, n).unwrap();
            for level in [Level::Fq, Level::FK] {
                for x in 0..ctx.order(level) as u32 {
                    let r = ctx.sqrt(level, Elem(x)).unwrap();
                    assert_eq!(ctx.field(level).square(r), Elem(x));
                }
            }
        }
    }

    #[test]
    fn solve_power_examples() {
        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        assert_eq!((5 * 38) % 63, 1);
        for c in 1..64 {
            let c = Elem(c);
            let t = ctx.solve_power(c, 5).unwrap();
            assert_eq!(t, ctx.fk().pow(c, 38));
        }
        assert_eq!(ctx.solve_power(Elem::ONE, 5).unwrap(), Elem::ONE);

        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let g = ctx.generator(Level::FK);
        assert!(matches!(
            ctx.solve_power(g, 4),
            Err(Error::NoSolution { exponent: 4 })
        ));
        let sq = ctx.fk().square(g);
        let t = ctx.solve_power(sq, 4).unwrap();
        assert_eq!(ctx.fk().pow(t, 4), sq);
    }

    #[test]
    fn frob_quotient() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        assert_eq!(ctx.solve_frob_quotient(Elem::ONE).unwrap(), Elem::ONE);
        let mut seen = 0;
        for b in 1..729 {
            let beta = Elem(b);
            let n = ctx.norm(Level::FK2, beta, Level::Fq).unwrap();
            match ctx.solve_frob_quotient(beta) {
                Ok(xi) => {
                    assert_eq!(n, Elem::ONE);
                    assert_eq!(ctx.fk2().pow(xi, 2), beta);
                    seen += 1;
                }
                Err(Error::NormNotOne) => assert_ne!(n, Elem::ONE),
                Err(e) => panic!("{e}"),
            }
        }
        // norm is onto F_3^*, so its kernel has 728 / 2 elements
        assert_eq!(seen, 364);
    }

    #[test]
    fn kernel_examples() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let id = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        assert!(ctx.linearized_kernel(id, Level::FK).is_empty());
        let minus_one = ctx.fk().neg(Elem::ONE);
        let frob_minus_id = [minus_one, Elem::ONE, Elem::ZERO];
        let ker = ctx.linearized_kernel(frob_minus_id, Level::FK);
        // the kernel is F_q itself: one basis vector over F_q
        assert_eq!(ker.len(), 1);
        assert!(ker.iter().all(|y| y.0 < ctx.q()));

        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        let ker = ctx.linearized_kernel(frob_minus_id_char2(), Level::FK);
        assert_eq!(ker.len(), 1);
    }

    fn frob_minus_id_char2() -> [Elem; 3] {
        [Elem::ONE, Elem::ONE, Elem::ZERO]
    }
}
