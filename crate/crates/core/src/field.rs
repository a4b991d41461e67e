//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Elements ([`Coeff`]) do not carry their field; every arithmetic
//! operation goes through the [`CoefficientField`] descriptor owned by the
//! ring. Mixing elements of different fields is a logic error and panics.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// The default prime for the fast modular mode.
pub const DEFAULT_PRIME: u64 = 32003;

/// Largest modulus accepted; products of two residues must fit in `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Rationals,
    Prime(u64),
}

/// A field element. Rationals are kept in lowest terms, residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    P(u64),
}

impl CoefficientField {
    /// `F_p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self, Error> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(CoefficientField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::Rationals => 0,
            CoefficientField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            CoefficientField::Rationals => Coeff::Q(BigRational::zero()),
            CoefficientField::Prime(_) => Coeff::P(0),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            CoefficientField::Rationals => Coeff::Q(BigRational::from_integer(BigInt::from(n))),
            CoefficientField::Prime(p) => Coeff::P(n.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            CoefficientField::Rationals => Coeff::Q(BigRational::from_integer(n.clone())),
            CoefficientField::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Coeff::P(r.to_u64().expect("residue fits"))
            }
        }
    }

    /// `num / den`; `None` when the denominator vanishes in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Coeff> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return None;
        }
        Some(self.mul(&self.from_bigint(num), &self.inv(&d)))
    }

    /// Image of a rational number in this field (`None` if the denominator
    /// is divisible by the characteristic).
    pub fn from_rational(&self, q: &BigRational) -> Option<Coeff> {
        self.from_ratio(q.numer(), q.denom())
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoefficientField::Rationals, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x + y),
            (CoefficientField::Prime(p), Coeff::P(x), Coeff::P(y)) => Coeff::P((x + y) % p),
            _ => mixed(),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoefficientField::Rationals, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x - y),
            (CoefficientField::Prime(p), Coeff::P(x), Coeff::P(y)) => Coeff::P((x + p - y) % p),
            _ => mixed(),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoefficientField::Rationals, Coeff::Q(x)) => Coeff::Q(-x),
            (CoefficientField::Prime(p), Coeff::P(x)) => Coeff::P((p - x) % p),
            _ => mixed(),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoefficientField::Rationals, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x * y),
            (CoefficientField::Prime(p), Coeff::P(x), Coeff::P(y)) => Coeff::P(x * y % p),
            _ => mixed(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        assert!(!a.is_zero(), "inverse of zero");
        match (self, a) {
            (CoefficientField::Rationals, Coeff::Q(x)) => Coeff::Q(x.recip()),
            (CoefficientField::Prime(p), Coeff::P(x)) => Coeff::P(inv_mod_euclid(*x, *p)),
            _ => mixed(),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Coeff, mut e: u64) -> Coeff {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduce an element of `Q` into this field.
    pub fn convert(&self, a: &Coeff) -> Option<Coeff> {
        match (self, a) {
            (CoefficientField::Rationals, Coeff::Q(_)) => Some(a.clone()),
            (CoefficientField::Prime(p), Coeff::P(x)) => Some(Coeff::P(x % p)),
            (CoefficientField::Prime(_), Coeff::Q(q)) => self.from_rational(q),
            (CoefficientField::Rationals, Coeff::P(_)) => None,
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rationals => write!(f, "QQ"),
            CoefficientField::Prime(p) => write!(f, "FF {p}"),
        }
    }
}

fn mixed() -> ! {
    panic!("coefficients from different fields")
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(x) => x.is_zero(),
            Coeff::P(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(x) => x.is_one(),
            Coeff::P(x) => *x == 1,
        }
    }

    /// Printed with a leading `-` when negative (residues use the symmetric range).
    pub fn is_negative(&self, field: &CoefficientField) -> bool {
        match (self, field) {
            (Coeff::Q(x), _) => x.is_negative(),
            (Coeff::P(x), CoefficientField::Prime(p)) => *x > p / 2,
            _ => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Q(x) => Some(x),
            Coeff::P(_) => None,
        }
    }

    /// Render in the field's canonical textual form.
    pub fn render(&self, field: &CoefficientField) -> String {
        match (self, field) {
            (Coeff::Q(x), _) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    alloc::format!("{}/{}", x.numer(), x.denom())
                }
            }
            (Coeff::P(x), CoefficientField::Prime(p)) => {
                if *x > p / 2 {
                    alloc::format!("-{}", p - x)
                } else {
                    x.to_string()
                }
            }
            (Coeff::P(x), _) => x.to_string(),
        }
    }
}

/// Deterministic primality test by trial division (moduli are below 2^31).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse modulo `p` by the extended Euclidean algorithm.
pub fn inv_mod_euclid(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible modulo {p}");
    s0.rem_euclid(p as i128) as u64
}

/// Inverse modulo a prime by Fermat's little theorem, `a^(p-2)`.
pub fn inv_mod_fermat(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composite_modulus() {
        assert!(CoefficientField::prime(32003).is_ok());
        assert_eq!(CoefficientField::prime(32001), Err(Error::NonPrimeModulus(32001)));
        assert!(CoefficientField::prime(1).is_err());
    }

    #[test]
    fn symmetric_rendering() {
        let k = CoefficientField::Prime(7);
        assert_eq!(k.from_i64(-1).render(&k), "-1");
        assert_eq!(k.from_i64(3).render(&k), "3");
        assert_eq!(k.from_i64(4).render(&k), "-3");
        let q = CoefficientField::Rationals;
        let half = q.div(&q.one(), &q.from_i64(-2));
        assert_eq!(half.render(&q), "-1/2");
    }

    #[test]
    fn rational_reduction_mod_p() {
        let k = CoefficientField::Prime(32003);
        let q = CoefficientField::Rationals;
        let half = q.div(&q.one(), &q.from_i64(2));
        let img = k.convert(&half).unwrap();
        assert_eq!(k.mul(&img, &k.from_i64(2)), k.one());
        let bad = q.div(&q.one(), &q.from_i64(32003));
        assert!(k.convert(&bad).is_none());
    }

    proptest! {
        #[test]
        fn fermat_matches_euclid(a in 1u64..32003) {
            prop_assert_eq!(inv_mod_fermat(a, 32003), inv_mod_euclid(a, 32003));
        }

        #[test]
        fn field_inverse_roundtrip(a in 1u64..65521) {
            let k = CoefficientField::Prime(65521);
            let x = Coeff::P(a);
            prop_assert!(k.mul(&x, &k.inv(&x)).is_one());
        }
    }
}
