//! Ring descriptors, exponent vectors and monomial orders.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::Error;
use crate::field::CoefficientField;

pub const MAX_VARS: usize = 16;

/// Exponent vector. Unused trailing slots stay zero, so equality and
/// hashing ignore the ring.
/// `Ord` is plain comparison of exponent arrays, for use as a map key only.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        assert!(e.len() <= MAX_VARS, "too many exponents");
        let mut m = Monomial::one();
        for (slot, &x) in m.exps.iter_mut().zip(e) {
            *slot = u8::try_from(x).expect("exponent overflow");
        }
        m
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = u8::try_from(e).expect("exponent overflow");
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.exps[i] = u8::try_from(e).expect("exponent overflow");
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, mask: u32) -> u32 {
        (0..MAX_VARS).filter(|i| mask >> i & 1 == 1).map(|i| self.exps[i] as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for (a, b) in r.exps.iter_mut().zip(o.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        r
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(o.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, if `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Option<Monomial> {
        let mut r = *o;
        for (a, b) in r.exps.iter_mut().zip(self.exps.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(r)
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for (a, b) in r.exps.iter_mut().zip(o.exps.iter()) {
            *a = (*a).max(*b);
        }
        r
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for (a, b) in r.exps.iter_mut().zip(o.exps.iter()) {
            *a = (*a).min(*b);
        }
        r
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(o.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Positions of nonzero exponents as a bit set.
    pub fn support(&self) -> u32 {
        let mut s = 0;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                s |= 1 << i;
            }
        }
        s
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Variables in the mask are compared first (grevlex on that block),
    /// ties broken by grevlex on the remaining variables.
    Block(u32),
}

impl MonomialOrder {
    /// Grevlex on the first `n` variables, ties broken by the rest.
    pub fn param_last(n: usize) -> Self {
        MonomialOrder::eliminate(n)
    }

    /// Eliminate the first `k` variables.
    pub fn eliminate(k: usize) -> Self {
        MonomialOrder::Block(((1u64 << k) - 1) as u32)
    }
}

fn grevlex_masked(a: &Monomial, b: &Monomial, n: usize, mask: u32) -> Ordering {
    let da = a.degree_in(mask);
    let db = b.degree_in(mask);
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..n).rev() {
        if mask >> i & 1 == 0 {
            continue;
        }
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

pub fn compare(order: MonomialOrder, n: usize, a: &Monomial, b: &Monomial) -> Ordering {
    let all = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
    match order {
        MonomialOrder::Grevlex => {
            let (da, db) = (a.degree(), b.degree());
            if da != db {
                return da.cmp(&db);
            }
            for i in (0..n).rev() {
                match a.exps[i].cmp(&b.exps[i]) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
            Ordering::Equal
        }
        MonomialOrder::Lex => a.exps[..n].cmp(&b.exps[..n]),
        MonomialOrder::Block(mask) => grevlex_masked(a, b, n, mask & all)
            .then_with(|| grevlex_masked(a, b, n, !mask & all)),
    }
}

/// A polynomial ring `k[x_1..x_n]`, optionally with a distinguished
/// parameter stored as the last variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    param: bool,
    field: CoefficientField,
    order: MonomialOrder,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(
        vars: &[&str],
        param: Option<&str>,
        field: CoefficientField,
        order: MonomialOrder,
    ) -> Result<RingRef, Error> {
        let mut names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        if let Some(p) = param {
            names.push(p.to_string());
        }
        Self::from_names(names, param.is_some(), field, order)
    }

    pub fn from_names(
        names: Vec<String>,
        param: bool,
        field: CoefficientField,
        order: MonomialOrder,
    ) -> Result<RingRef, Error> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::DuplicateVariable(a.clone()));
            }
        }
        Ok(Arc::new(Ring { names, param, field, order }))
    }

    /// `QQ[vars]` with grevlex.
    pub fn qq(vars: &[&str]) -> RingRef {
        Ring::new(vars, None, CoefficientField::Rationals, MonomialOrder::Grevlex).expect("valid ring")
    }

    /// `QQ[vars, t]` with `t` as parameter, ordered parameter-last.
    pub fn qq_param(vars: &[&str], t: &str) -> RingRef {
        let order = MonomialOrder::param_last(vars.len());
        Ring::new(vars, Some(t), CoefficientField::Rationals, order).expect("valid ring")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Number of geometric (non-parameter) variables.
    pub fn ngeom(&self) -> usize {
        self.names.len() - self.param as usize
    }

    pub fn param_index(&self) -> Option<usize> {
        self.param.then(|| self.names.len() - 1)
    }

    pub fn has_param(&self) -> bool {
        self.param
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn geom_mask(&self) -> u32 {
        ((1u64 << self.ngeom()) - 1) as u32
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        compare(self.order, self.names.len(), a, b)
    }

    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        Arc::new(Ring { order, ..self.clone() })
    }

    pub fn with_field(&self, field: CoefficientField) -> RingRef {
        Arc::new(Ring { field, ..self.clone() })
    }

    /// Same variables, parameter demoted to an ordinary variable.
    pub fn forget_param(&self) -> RingRef {
        Arc::new(Ring { param: false, ..self.clone() })
    }

    /// Append fresh variables after the existing ones (a parameter, if any,
    /// stops being one).
    pub fn extend(&self, extra: &[&str], order: MonomialOrder) -> Result<RingRef, Error> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.to_string()));
        Ring::from_names(names, false, self.field.clone(), order)
    }

    /// Prepend fresh variables (useful for elimination blocks).
    pub fn prepend(&self, extra: &[&str], order: MonomialOrder) -> Result<RingRef, Error> {
        let mut names: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        names.extend(self.names.iter().cloned());
        Ring::from_names(names, self.param, self.field.clone(), order)
    }

    /// Drop the variables whose bit is set in `mask`.
    pub fn drop_vars(&self, mask: u32, order: MonomialOrder) -> RingRef {
        let last = self.names.len() - 1;
        let param = self.param && mask >> last & 1 == 0;
        let names =
            self.names.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, n)| n.clone()).collect();
        Arc::new(Ring { names, param, field: self.field.clone(), order })
    }

    /// A fresh variable name not clashing with existing ones.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 0;
        while self.names.contains(&name) {
            k += 1;
            name = alloc::format!("{base}{k}");
        }
        name
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Block(m) => {
                if (m + 1) & m == 0 {
                    write!(f, "eliminate {}", m.count_ones())
                } else {
                    write!(f, "block {m:#b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn standard_comparisons() {
        let g = MonomialOrder::Grevlex;
        assert_eq!(compare(g, 2, &mono(&[2, 0]), &mono(&[1, 1])), Ordering::Greater);
        assert_eq!(compare(MonomialOrder::Lex, 2, &mono(&[1, 0]), &mono(&[0, 5])), Ordering::Greater);
        // grevlex: x*z^2 < y^3? degree 3 both; last var z: 2 vs 0, larger z loses
        assert_eq!(compare(g, 3, &mono(&[1, 0, 2]), &mono(&[0, 3, 0])), Ordering::Less);
        // lex and grevlex disagree here
        assert_eq!(compare(g, 3, &mono(&[1, 0, 2]), &mono(&[0, 2, 0])), Ordering::Greater);
        // t block first: t*x^3 > x^4 with t the last variable
        let t_first = MonomialOrder::Block(1 << 1);
        assert_eq!(compare(t_first, 2, &mono(&[3, 1]), &mono(&[4, 0])), Ordering::Greater);
    }

    fn all_monomials(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = alloc::vec![Monomial::one()];
        for i in 0..n {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..=d {
                    let mut m2 = *m;
                    m2.set_exp(i, e);
                    if m2.degree() <= d {
                        next.push(m2);
                    }
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn orders_are_total_and_multiplicative() {
        let n = 4;
        let ms = all_monomials(n, 4);
        let orders = [
            MonomialOrder::Grevlex,
            MonomialOrder::Lex,
            MonomialOrder::eliminate(1),
            MonomialOrder::eliminate(2),
            MonomialOrder::Block(0b1000),
        ];
        let small = all_monomials(n, 1);
        for o in orders {
            let mut sorted = ms.clone();
            sorted.sort_by(|a, b| compare(o, n, a, b));
            for w in sorted.windows(2) {
                assert_eq!(compare(o, n, &w[0], &w[1]), Ordering::Less, "{o} not strict");
            }
            for a in &ms {
                assert_eq!(compare(o, n, a, &Monomial::one()) == Ordering::Less, false);
                for b in &ms {
                    let c = compare(o, n, a, b);
                    assert_eq!(c, compare(o, n, b, a).reverse());
                    for m in &small {
                        assert_eq!(compare(o, n, &a.mul(m), &b.mul(m)), c);
                    }
                }
            }
        }
    }

    #[test]
    fn ring_rejects_duplicates() {
        let r = Ring::new(&["x", "x"], None, CoefficientField::Rationals, MonomialOrder::Grevlex);
        assert_eq!(r, Err(Error::DuplicateVariable("x".into())));
    }

    proptest! {
        #[test]
        fn lcm_gcd_duality(a in proptest::collection::vec(0u32..6, 4), b in proptest::collection::vec(0u32..6, 4)) {
            let (ma, mb) = (mono(&a), mono(&b));
            prop_assert_eq!(ma.lcm(&mb).mul(&ma.gcd(&mb)), ma.mul(&mb));
            prop_assert!(ma.divides(&ma.lcm(&mb)));
            prop_assert_eq!(ma.quotient_of(&ma.mul(&mb)), Some(mb));
        }
    }
}
