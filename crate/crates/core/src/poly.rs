//! Sparse polynomials over a [`Ring`].

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::field::{CoefficientField, Coeff};
use crate::ring::{Monomial, RingRef};

/// Terms are kept sorted by decreasing monomial with no zero coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub(crate) fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Multiply,
    Power,
}

/// Operand of [`poly_arith`]: powers take an integer exponent.
pub enum Operand<'a> {
    Poly(&'a Polynomial),
    Exponent(u32),
}

/// Checked arithmetic entry point; the operator impls panic on ring
/// mismatch instead.
pub fn poly_arith(op: ArithOp, a: &Polynomial, b: Operand<'_>) -> Result<Polynomial, Error> {
    match (op, b) {
        (ArithOp::Add, Operand::Poly(b)) => a.checked(b).map(|_| a.add(b)),
        (ArithOp::Multiply, Operand::Poly(b)) => a.checked(b).map(|_| a.mul(b)),
        (ArithOp::Power, Operand::Exponent(e)) => Ok(a.pow(e)),
        _ => Err(Error::Unsupported("operand kind does not match the operation".into())),
    }
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Coeff) -> Self {
        Self::monomial(ring, Monomial::one(), c)
    }

    pub fn from_i64(ring: &RingRef, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Self::monomial(ring, Monomial::var(i, 1), ring.field().one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self, Error> {
        let i = ring.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Coeff) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { alloc::vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Build from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Monomial, Coeff)>) -> Self {
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        let k = ring.field();
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = k.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub(crate) fn pop_lead(&mut self) -> Option<(Monomial, Coeff)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Append a term smaller than every existing one.
    pub(crate) fn push_smallest(&mut self, m: Monomial, c: Coeff) {
        debug_assert!(self.terms.last().map_or(true, |(l, _)| self.ring.cmp(l, &m).is_gt()));
        self.terms.push((m, c));
    }

    pub(crate) fn from_sorted(ring: &RingRef, terms: Vec<(Monomial, Coeff)>) -> Self {
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> &CoefficientField {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn lm(&self) -> Monomial {
        self.terms[0].0
    }

    pub fn lc(&self) -> &Coeff {
        &self.terms[0].1
    }

    /// Coefficient of `m` (zero if absent).
    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms
            .binary_search_by(|(t, _)| self.ring.cmp(m, t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field().zero())
    }

    /// Maximum total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    /// Maximum degree in the variables of `mask`.
    pub fn degree_in(&self, mask: u32) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree_in(mask)).max()
    }

    pub fn var_degree(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_homogeneous_in(u32::MAX)
    }

    /// Homogeneous with respect to the variables in `mask`.
    pub fn is_homogeneous_in(&self, mask: u32) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| m.degree_in(mask));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous component of total degree `d` in the variables of `mask`.
    pub fn component_in(&self, mask: u32, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree_in(mask) == d).cloned().collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    pub fn support_vars(&self) -> u32 {
        self.terms.iter().fold(0, |s, (m, _)| s | m.support())
    }

    fn checked(&self, other: &Polynomial) -> Result<(), Error> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn assert_ring(&self, other: &Polynomial) {
        assert!(same_ring(&self.ring, &other.ring), "polynomials from different rings");
    }

    /// `self + c * m * g`, merged in one pass.
    pub fn add_scaled(&self, c: &Coeff, m: &Monomial, g: &Polynomial) -> Polynomial {
        self.assert_ring(g);
        if c.is_zero() {
            return self.clone();
        }
        let k = self.ring.field();
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(gm, gc)| (m.mul(gm), gc)).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (bm, bc) = b.next().unwrap();
                    out.push((bm, k.mul(c, bc)));
                }
                (Some((am, _)), Some((bm, _))) => match ring.cmp(am, bm) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        let (bm, bc) = b.next().unwrap();
                        out.push((bm, k.mul(c, bc)));
                    }
                    Ordering::Equal => {
                        let (am, ac) = a.next().unwrap();
                        let (_, bc) = b.next().unwrap();
                        let s = k.add(ac, &k.mul(c, bc));
                        if !s.is_zero() {
                            out.push((*am, s));
                        }
                    }
                },
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled(&self.field().one(), &Monomial::one(), other)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled(&self.field().from_i64(-1), &Monomial::one(), other)
    }

    pub fn neg(&self) -> Polynomial {
        let k = self.field();
        let terms = self.terms.iter().map(|(m, c)| (*m, k.neg(c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let k = self.field();
        let terms = self.terms.iter().map(|(m, a)| (*m, k.mul(a, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let k = self.field();
        let terms = self.terms.iter().map(|(a, b)| (a.mul(m), k.mul(b, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_ring(other);
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Polynomial::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.add_scaled(c, m, big);
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&self.field().inv(c)),
        }
    }

    /// Over `Q`: integer coefficients with content 1 and positive leading
    /// coefficient. Over `F_p`: monic.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        match self.field() {
            CoefficientField::Prime(_) => self.monic(),
            CoefficientField::Rationals => {
                let mut den = BigInt::one();
                let mut num = BigInt::zero();
                for (_, c) in &self.terms {
                    let q = c.as_rational().expect("rational coefficient");
                    den = den.lcm(q.denom());
                    num = num.gcd(q.numer());
                }
                let mut f = BigRational::new(den, num);
                if self.lc().as_rational().unwrap().is_negative() {
                    f = -f;
                }
                if f.is_one() {
                    return self.clone();
                }
                self.scale(&Coeff::Q(f))
            }
        }
    }

    /// Exact division by a nonzero constant.
    pub fn div_const(&self, c: &Coeff) -> Polynomial {
        self.scale(&self.field().inv(c))
    }

    pub fn evaluate(&self, point: &[Coeff]) -> Coeff {
        let k = self.field();
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = k.mul(&t, &k.pow(x, e as u64));
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }

    /// Ring map sending variable `i` to `images[i]` (all in the target ring).
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let target = images.first().map(|p| p.ring.clone()).unwrap_or_else(|| self.ring.clone());
        let tk = target.field().clone();
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| alloc::vec![Polynomial::one(&target), p.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let cc = tk.convert(c).expect("coefficient maps into target field");
            let mut t = Polynomial::constant(&target, cc);
            for i in 0..self.ring.nvars() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Same exponent vectors reinterpreted in a ring with the same number of
    /// variables (e.g. a different order or field).
    pub fn map_to_ring(&self, ring: &RingRef) -> Polynomial {
        assert_eq!(ring.nvars(), self.ring.nvars(), "variable count mismatch");
        let k = ring.field();
        let terms = self.terms.iter().map(|(m, c)| (*m, k.convert(c).expect("coefficient maps"))).collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Embed into a ring whose variable `i` of `self` is variable `index[i]`.
    pub fn embed(&self, ring: &RingRef, index: &[usize]) -> Polynomial {
        let k = ring.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = Monomial::one();
                for (i, &j) in index.iter().enumerate() {
                    out.set_exp(j, m.exp(i));
                }
                (out, k.convert(c).expect("coefficient maps"))
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Embed by variable names (every variable of `self` must exist in `ring`).
    pub fn embed_by_name(&self, ring: &RingRef) -> Result<Polynomial, Error> {
        let index = self
            .ring
            .names()
            .iter()
            .map(|n| ring.index_of(n).ok_or_else(|| Error::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.embed(ring, &index))
    }

    /// Set variable `var` to `value`; the result lives in `ring`, which must
    /// be this ring with that variable dropped.
    pub fn specialize(&self, var: usize, value: &Coeff, ring: &RingRef) -> Polynomial {
        assert_eq!(ring.nvars() + 1, self.ring.nvars());
        let k = self.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = Monomial::one();
                let mut j = 0;
                for i in 0..self.ring.nvars() {
                    if i != var {
                        out.set_exp(j, m.exp(i));
                        j += 1;
                    }
                }
                (out, k.mul(c, &k.pow(value, m.exp(var) as u64)))
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Substitute `x_i -> x_i + shift_i` for every variable.
    pub fn translate(&self, shift: &[Coeff]) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.ring.nvars())
            .map(|i| {
                let v = Polynomial::var(&self.ring, i);
                match shift.get(i) {
                    Some(s) if !s.is_zero() => v.add(&Polynomial::constant(&self.ring, s.clone())),
                    _ => v,
                }
            })
            .collect();
        self.substitute(&images)
    }

    /// Homogenize with respect to the variables in `mask` using variable `h`.
    pub fn homogenize(&self, h: usize, mask: u32) -> Polynomial {
        let Some(d) = self.degree_in(mask) else { return self.clone() };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = *m;
                m2.set_exp(h, m.exp(h) + d - m.degree_in(mask));
                (m2, c.clone())
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let k = self.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let mut m2 = *m;
                m2.set_exp(i, m.exp(i) - 1);
                (m2, k.mul(c, &k.from_i64(m.exp(i) as i64)))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Largest power of `x_i` dividing every term, and the cofactor.
    pub fn strip_var(&self, i: usize) -> (u32, Polynomial) {
        let e = self.terms.iter().map(|(m, _)| m.exp(i)).min().unwrap_or(0);
        if e == 0 {
            return (0, self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = *m;
                m2.set_exp(i, m.exp(i) - e);
                (m2, c.clone())
            })
            .collect();
        (e, Polynomial::from_sorted(&self.ring, terms))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use proptest::prelude::*;

    fn ring() -> RingRef {
        Ring::qq(&["x", "y", "z"])
    }

    fn poly_strategy() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -5i64..6), 0..6)
    }

    fn build(r: &RingRef, t: &[(Vec<u32>, i64)]) -> Polynomial {
        Polynomial::from_terms(
            r,
            t.iter().map(|(e, c)| (Monomial::from_exponents(e), r.field().from_i64(*c))).collect(),
        )
    }

    #[test]
    fn basic_identities() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        assert!((&x + &x.neg()).is_zero());
        let d = &(&x + &y) * &(&x - &y);
        assert_eq!(d, &(&x * &x) - &(&y * &y));
        assert_eq!(poly_arith(ArithOp::Power, &(&x + &y), Operand::Exponent(2)).unwrap().len(), 3);
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = Polynomial::var(&ring(), 0);
        let b = Polynomial::var(&Ring::qq(&["u", "v"]), 0);
        assert_eq!(poly_arith(ArithOp::Add, &a, Operand::Poly(&b)), Err(Error::RingMismatch));
    }

    #[test]
    fn primitive_clears_denominators() {
        let r = ring();
        let k = r.field();
        let half = k.div(&k.from_i64(-1), &k.from_i64(2));
        let p = Polynomial::var(&r, 0).scale(&half).add(&Polynomial::from_i64(&r, 3));
        let q = p.primitive();
        assert_eq!(q.lc(), &k.from_i64(1));
        assert_eq!(q.coeff_of(&Monomial::one()), k.from_i64(-6));
    }

    proptest! {
        #[test]
        fn commutative_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            let r = ring();
            let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn translation_is_invertible(a in poly_strategy(), s in proptest::collection::vec(-3i64..4, 3)) {
            let r = ring();
            let a = build(&r, &a);
            let k = r.field();
            let fwd: Vec<Coeff> = s.iter().map(|&v| k.from_i64(v)).collect();
            let back: Vec<Coeff> = s.iter().map(|&v| k.from_i64(-v)).collect();
            prop_assert_eq!(a.translate(&fwd).translate(&back), a);
        }
    }
}
