//! Arithmetic for the individual levels of the tower.
//!
//! Every element is carried as its canonical integer encoding: an element of
//! `F_{p^m}` with `F_p`-coordinates `c_i` (read through the tower bases) encodes
//! to `sum c_i p^i`. Because each level is a polynomial extension of the level
//! below, the encoding of `sum d_j X^j` with `d_j` in the base is
//! `sum enc(d_j) * |base|^j`, and a subfield element keeps its encoding when
//! embedded in a larger level. Addition is digit-wise in base `p` at every
//! level.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest extension degree of any single level over its base.
pub const MAX_DEGREE: usize = 32;

/// A field element given by its canonical encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Digit-wise addition of two base-`p` encodings.
#[inline]
pub fn padic_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0u32;
    let mut place = 1u32;
    while a != 0 || b != 0 {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

/// Digit-wise negation of a base-`p` encoding.
#[inline]
pub fn padic_neg(p: u32, mut a: u32) -> u32 {
    if p == 2 {
        return a;
    }
    let mut out = 0u32;
    let mut place = 1u32;
    while a != 0 {
        let d = a % p;
        if d != 0 {
            out += (p - d) * place;
        }
        a /= p;
        place = place.wrapping_mul(p);
    }
    out
}

/// Operations shared by all levels. Implementors only need the ring
/// operations; powers and inverses come from square-and-multiply.
pub trait Field: Send + Sync + fmt::Debug {
    /// Number of elements.
    fn order(&self) -> u32;
    fn characteristic(&self) -> u32;
    fn mul(&self, a: Elem, b: Elem) -> Elem;

    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(padic_add(self.characteristic(), a.0, b.0))
    }

    #[inline]
    fn neg(&self, a: Elem) -> Elem {
        Elem(padic_neg(self.characteristic(), a.0))
    }

    #[inline]
    fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, u64::from(self.order()) - 2))
        }
    }

    /// `a / b`; panics on division by zero, which is always a caller bug.
    fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    /// `n * 1` for an integer `n`.
    fn from_int(&self, n: i64) -> Elem {
        let p = i64::from(self.characteristic());
        Elem(n.rem_euclid(p) as u32)
    }

    fn contains(&self, a: Elem) -> bool {
        a.0 < self.order()
    }
}

/// The prime field `F_p`.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        PrimeField { p }
    }
}

impl Field for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem((a.0 + b.0) % self.p)
    }

    #[inline]
    fn neg(&self, a: Elem) -> Elem {
        Elem((self.p - a.0) % self.p)
    }

    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(((u64::from(a.0) * u64::from(b.0)) % u64::from(self.p)) as u32)
    }
}

/// `B[X] / (f)` for a monic irreducible `f` of degree `degree` over `B`.
#[derive(Clone, Debug)]
pub struct ExtField<B> {
    base: B,
    degree: usize,
    base_order: u32,
    order: u32,
    /// Low coefficients `c_0 .. c_{d-1}` of the monic modulus.
    modulus: Vec<Elem>,
}

impl<B: Field> ExtField<B> {
    /// Caller guarantees irreducibility of `modulus` (monic, leading term implied).
    pub fn new(base: B, modulus: Vec<Elem>) -> Self {
        let degree = modulus.len();
        assert!((1..=MAX_DEGREE).contains(&degree));
        let base_order = base.order();
        let order = u64::from(base_order).pow(degree as u32);
        assert!(order <= u64::from(u32::MAX), "field too large for u32 encodings");
        ExtField {
            base,
            degree,
            base_order,
            order: order as u32,
            modulus,
        }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    #[inline]
    pub fn decompose(&self, a: Elem, out: &mut [Elem]) {
        let mut v = a.0;
        for slot in out.iter_mut().take(self.degree) {
            *slot = Elem(v % self.base_order);
            v /= self.base_order;
        }
    }

    #[inline]
    pub fn compose(&self, coeffs: &[Elem]) -> Elem {
        let mut v = 0u32;
        for c in coeffs[..self.degree].iter().rev() {
            v = v * self.base_order + c.0;
        }
        Elem(v)
    }

    /// Multiplies every base coordinate of `a` by the base scalar `s`.
    #[inline]
    fn scale(&self, s: Elem, a: Elem) -> Elem {
        let mut c = [Elem::ZERO; MAX_DEGREE];
        self.decompose(a, &mut c);
        for x in c.iter_mut().take(self.degree) {
            *x = self.base.mul(s, *x);
        }
        self.compose(&c)
    }
}

impl<B: Field> Field for ExtField<B> {
    fn order(&self) -> u32 {
        self.order
    }

    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        if a.0 < self.base_order {
            return self.scale(a, b);
        }
        if b.0 < self.base_order {
            return self.scale(b, a);
        }
        let d = self.degree;
        let mut x = [Elem::ZERO; MAX_DEGREE];
        let mut y = [Elem::ZERO; MAX_DEGREE];
        self.decompose(a, &mut x);
        self.decompose(b, &mut y);
        let mut prod = [Elem::ZERO; 2 * MAX_DEGREE];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x[i], y[j]));
            }
        }
        // X^d = -(c_0 + c_1 X + ... + c_{d-1} X^{d-1})
        for top in (d..2 * d - 1).rev() {
            let c = prod[top];
            if c.is_zero() {
                continue;
            }
            prod[top] = Elem::ZERO;
            for (i, m) in self.modulus.iter().enumerate() {
                if !m.is_zero() {
                    let t = top - d + i;
                    prod[t] = self.base.sub(prod[t], self.base.mul(c, *m));
                }
            }
        }
        self.compose(&prod)
    }
}

/// A small field with tabulated multiplication, used for `F_q`.
#[derive(Clone)]
pub struct TableField {
    order: u32,
    p: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for TableField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableField")
            .field("order", &self.order)
            .field("p", &self.p)
            .finish()
    }
}

impl TableField {
    pub fn tabulate<F: Field>(field: &F) -> Self {
        let q = field.order();
        let n = (q as usize) * (q as usize);
        let mut add = vec![0u32; n];
        let mut mul = vec![0u32; n];
        let mut neg = vec![0u32; q as usize];
        let mut inv = vec![0u32; q as usize];
        for a in 0..q {
            neg[a as usize] = field.neg(Elem(a)).0;
            inv[a as usize] = field.inv(Elem(a)).map_or(0, |e| e.0);
            for b in 0..q {
                let i = (a * q + b) as usize;
                add[i] = field.add(Elem(a), Elem(b)).0;
                mul[i] = field.mul(Elem(a), Elem(b)).0;
            }
        }
        TableField {
            order: q,
            p: field.characteristic(),
            add,
            mul,
            neg,
            inv,
        }
    }
}

impl Field for TableField {
    fn order(&self) -> u32 {
        self.order
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[(a.0 * self.order + b.0) as usize])
    }

    #[inline]
    fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[(a.0 * self.order + b.0) as usize])
    }

    fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            None
        } else {
            Some(Elem(self.inv[a.0 as usize]))
        }
    }
}
