//! Seeded sampling of field elements and points.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{CoefficientField, Coeff};

pub const DEFAULT_SEED: u64 = 0x5eed_d7ac;

pub struct Sampler {
    rng: ChaCha8Rng,
    bound: u64,
}

impl Sampler {
    /// Integers are drawn from `[-bound, bound]`.
    pub fn new(seed: u64, bound: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), bound: bound.max(1) }
    }

    pub fn int(&mut self) -> i64 {
        let span = 2 * self.bound + 1;
        (self.rng.next_u64() % span) as i64 - self.bound as i64
    }

    pub fn coeff(&mut self, field: &CoefficientField) -> Coeff {
        field.from_i64(self.int())
    }

    pub fn nonzero(&mut self, field: &CoefficientField) -> Coeff {
        loop {
            let c = self.coeff(field);
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn point(&mut self, field: &CoefficientField, n: usize) -> Vec<Coeff> {
        (0..n).map(|_| self.coeff(field)).collect()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.rng.next_u64() % n as u64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let k = CoefficientField::Rationals;
        let mut a = Sampler::new(7, 10);
        let mut b = Sampler::new(7, 10);
        for _ in 0..20 {
            let x = a.nonzero(&k);
            assert!(!x.is_zero());
            assert_eq!(x, b.nonzero(&k));
        }
    }
}
