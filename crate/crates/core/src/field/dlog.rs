//! Shanks' baby-step giant-step over the multiplicative group of a level.
//!
//! Group orders in this crate stay below a few million, so a table of
//! `ceil(sqrt(n))` baby steps is small and no Pohlig-Hellman split is needed.

use std::collections::HashMap;

use super::arith::{Elem, Field};

#[derive(Debug)]
pub struct BabyGiant {
    generator: Elem,
    group_order: u64,
    step: u64,
    baby: HashMap<u32, u32>,
    /// `g^{-step}`
    giant: Elem,
}

impl BabyGiant {
    pub fn new<F: Field + ?Sized>(field: &F, generator: Elem) -> Self {
        let group_order = u64::from(field.order()) - 1;
        let step = (group_order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = Elem::ONE;
        for j in 0..step {
            baby.entry(cur.0).or_insert(j as u32);
            cur = field.mul(cur, generator);
        }
        // cur = g^step
        let giant = field.inv(cur).expect("generator power is nonzero");
        BabyGiant {
            generator,
            group_order,
            step,
            baby,
            giant,
        }
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// The unique `m` in `[0, |L|-1)` with `g^m = x`, or `None` for `x = 0`.
    pub fn log<F: Field + ?Sized>(&self, field: &F, x: Elem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut gamma = x;
        for i in 0..=self.step {
            if let Some(&j) = self.baby.get(&gamma.0) {
                return Some((i * self.step + u64::from(j)) % self.group_order);
            }
            gamma = field.mul(gamma, self.giant);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::arith::PrimeField;

    #[test]
    fn log_matches_brute_force_in_f101() {
        let f = PrimeField::new(101);
        let g = Elem(2); // 2 is a primitive root mod 101
        let bsgs = BabyGiant::new(&f, g);
        let mut cur = Elem::ONE;
        for m in 0..100u64 {
            assert_eq!(bsgs.log(&f, cur), Some(m));
            cur = f.mul(cur, g);
        }
        assert_eq!(bsgs.log(&f, Elem::ZERO), None);
    }
}
