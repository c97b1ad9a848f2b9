//! Dense polynomials over a level, used only to pick moduli.

use super::arith::{Elem, Field};

/// Coefficients low degree first; trailing zeros trimmed.
type Poly = Vec<Elem>;

fn trim(mut f: Poly) -> Poly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

/// Remainder of `num` modulo the monic `den`.
fn rem_monic<F: Field + ?Sized>(field: &F, num: &[Elem], den: &[Elem]) -> Poly {
    let mut r: Poly = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if !lead.is_zero() {
            for (i, c) in den.iter().enumerate() {
                r[shift + i] = field.sub(r[shift + i], field.mul(lead, *c));
            }
        }
        r.pop();
    }
    trim(r)
}

/// Monic polynomials of exactly `deg` over `field`, as full coefficient
/// vectors (leading 1 included), in lexicographic order of
/// `(c_0, c_1, ..., c_{deg-1})`.
fn monic_polys<F: Field + ?Sized>(field: &F, deg: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = u64::from(field.order());
    let total = q.pow(deg as u32);
    (0..total).map(move |m| {
        let mut coeffs = vec![Elem::ZERO; deg + 1];
        let mut v = m;
        // c_0 is the most significant digit of m.
        for j in (0..deg).rev() {
            coeffs[j] = Elem((v % q) as u32);
            v /= q;
        }
        coeffs[deg] = Elem::ONE;
        coeffs
    })
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible<F: Field + ?Sized>(field: &F, f: &[Elem]) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if deg <= 3 {
        // no factor of degree <= deg/2 iff no root
        return (0..field.order()).all(|x| eval(field, f, Elem(x)) != Elem::ZERO);
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(field, d) {
            if rem_monic(field, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

pub fn eval<F: Field + ?Sized>(field: &F, f: &[Elem], x: Elem) -> Elem {
    f.iter()
        .rev()
        .fold(Elem::ZERO, |acc, c| field.add(field.mul(acc, x), *c))
}

/// The lexicographically smallest monic irreducible polynomial of degree
/// `deg`, comparing `(c_0, c_1, ...)` by canonical encoding. Returns the
/// full coefficient vector including the leading 1.
pub fn smallest_irreducible<F: Field + ?Sized>(field: &F, deg: usize) -> Vec<Elem> {
    monic_polys(field, deg)
        .find(|f| is_irreducible(field, f))
        .expect("an irreducible polynomial of every degree exists")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` (requires gcd 1).
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Multiplicative order test: `g` generates the full group.
pub fn is_primitive<F: Field + ?Sized>(field: &F, g: Elem, factors: &[u64]) -> bool {
    let n = u64::from(field.order()) - 1;
    !g.is_zero() && factors.iter().all(|r| field.pow(g, n / r) != Elem::ONE)
}

/// Smallest element (by encoding) of full multiplicative order.
pub fn smallest_primitive<F: Field + ?Sized>(field: &F) -> Elem {
    let factors = prime_factors(u64::from(field.order()) - 1);
    (1..field.order())
        .map(Elem)
        .find(|&g| is_primitive(field, g, &factors))
        .expect("finite fields have cyclic unit groups")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::arith::PrimeField;

    #[test]
    fn smallest_quadratic_over_f3() {
        // c_0 = 0 is always reducible; c_0 = 1: x^2 + 1 is irreducible over F_3.
        let f = smallest_irreducible(&PrimeField::new(3), 2);
        assert_eq!(f, vec![Elem(1), Elem(0), Elem(1)]);
    }

    #[test]
    fn smallest_cubic_over_f2() {
        // (c_0, c_1, c_2) = (1, 0, 0) is x^3 + 1 = (x + 1)(x^2 + x + 1);
        // next comes (1, 0, 1): x^3 + x^2 + 1, ahead of x^3 + x + 1.
        let f = smallest_irreducible(&PrimeField::new(2), 3);
        assert_eq!(f, vec![Elem(1), Elem(0), Elem(1), Elem(1)]);
    }

    #[test]
    fn irreducibility_of_quartics_over_f2() {
        let f2 = PrimeField::new(2);
        // x^4 + x + 1 irreducible, x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not.
        assert!(is_irreducible(&f2, &[Elem(1), Elem(1), Elem(0), Elem(0), Elem(1)]));
        assert!(!is_irreducible(&f2, &[Elem(1), Elem(0), Elem(1), Elem(0), Elem(1)]));
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(prime_factors(26), vec![2, 13]);
        assert_eq!(prime_factors(63), vec![3, 7]);
        assert_eq!(gcd(63, 5), 1);
        assert_eq!(mod_inverse(5, 63), Some(38));
        assert_eq!(mod_inverse(4, 26), None);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }
}
