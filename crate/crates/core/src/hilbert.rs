//! Hilbert series, Hilbert polynomials and derived invariants.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::gb::{self, Ideal};
use crate::ring::{Monomial, MonomialOrder};

/// Polynomial in one variable `z` with rational coefficients (constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly(c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).trim()
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect()).trim()
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect()).trim()
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = alloc::vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly(out).trim()
    }

    pub fn eval(&self, z: i64) -> BigRational {
        let zz = BigRational::from_integer(BigInt::from(z));
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * &zz + c)
    }

    /// `binom(z + a, m)` as a polynomial in `z`.
    pub fn binomial_shifted(a: i64, m: usize) -> QPoly {
        let mut p = QPoly::from_ints(&[1]);
        for j in 0..m as i64 {
            let lin = QPoly(alloc::vec![
                BigRational::new(BigInt::from(a - j), BigInt::from(j + 1)),
                BigRational::new(BigInt::one(), BigInt::from(j + 1)),
            ]);
            p = p.mul(&lin);
        }
        p
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let coeff: String = if a.is_integer() {
                alloc::format!("{}", a.numer())
            } else {
                alloc::format!("{}/{}", a.numer(), a.denom())
            };
            match i {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "z^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Integer polynomial in `T` (constant term first).
pub type Numerator = Vec<i64>;

fn trim_num(mut v: Numerator) -> Numerator {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn num_add(a: &[i64], b: &[i64], shift: usize) -> Numerator {
    let n = a.len().max(b.len() + shift);
    let mut out = alloc::vec![0i64; n];
    out[..a.len()].copy_from_slice(a);
    for (i, v) in b.iter().enumerate() {
        out[i + shift] += v;
    }
    trim_num(out)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of the Hilbert series of `k[x_1..x_n]/(gens)` over `(1 - T)^n`.
pub fn monomial_numerator(gens: &[Monomial], n: usize) -> Numerator {
    numerator_rec(minimalize(gens.to_vec()), n)
}

fn numerator_rec(gens: Vec<Monomial>, n: usize) -> Numerator {
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    let mixed: Vec<&Monomial> = gens.iter().filter(|g| g.support().count_ones() > 1).collect();
    if mixed.is_empty() {
        let mut prod: Numerator = alloc::vec![1];
        for g in &gens {
            let d = g.degree() as usize;
            let neg: Vec<i64> = prod.iter().map(|v| -v).collect();
            prod = num_add(&prod, &neg, d);
        }
        return prod;
    }
    // pivot on the variable occurring in most mixed generators
    let mut best = (0, 0usize);
    for i in 0..n {
        let c = mixed.iter().filter(|g| g.exp(i) > 0).count();
        if c > best.1 {
            best = (i, c);
        }
    }
    let x = best.0;
    let pivot = Monomial::var(x, 1);
    let mut with_x: Vec<Monomial> = gens.iter().filter(|g| g.exp(x) == 0).copied().collect();
    with_x.push(pivot);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut h = *g;
            if h.exp(x) > 0 {
                h.set_exp(x, h.exp(x) - 1);
            }
            h
        })
        .collect();
    let a = numerator_rec(minimalize(with_x), n);
    let b = numerator_rec(minimalize(colon), n);
    num_add(&a, &b, 1)
}

/// `Σ_{d ≤ z} N_d binom(z - d + n - 1, n - 1)`: the Hilbert function at `z`.
pub fn hilbert_function_from(num: &[i64], n: usize, z: i64) -> BigInt {
    if n == 0 {
        return BigInt::from(usize::try_from(z).ok().and_then(|z| num.get(z).copied()).unwrap_or(0));
    }
    let mut acc = BigInt::zero();
    for (d, &c) in num.iter().enumerate() {
        let d = d as i64;
        if d > z || c == 0 {
            continue;
        }
        acc += BigInt::from(c) * binom(z - d + n as i64 - 1, n as i64 - 1);
    }
    acc
}

fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < b {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for j in 0..b {
        r = r * BigInt::from(a - j) / BigInt::from(j + 1);
    }
    r
}

/// Divide by `(1 - T)` as long as `N(1) = 0`; returns the reduced numerator
/// and the Krull dimension.
pub fn reduce_numerator(num: &[i64], n: usize) -> (Numerator, usize) {
    let mut cur: Numerator = num.to_vec();
    let mut d = n;
    while d > 0 && !cur.is_empty() && cur.iter().sum::<i64>() == 0 {
        cur = divide_one_minus_t(&cur).expect("root at 1");
        d -= 1;
    }
    (cur, d)
}

/// Exact division by `1 - T`.
fn divide_one_minus_t(num: &[i64]) -> Option<Numerator> {
    // N = (1 - T) Q  =>  Q_k = Σ_{j ≤ k} N_j
    if num.iter().sum::<i64>() != 0 {
        return None;
    }
    let mut q = Vec::with_capacity(num.len());
    let mut acc = 0;
    for &c in &num[..num.len().saturating_sub(1)] {
        acc += c;
        q.push(acc);
    }
    Some(trim_num(q))
}

/// Hilbert polynomial from a numerator over `(1 - T)^n`.
pub fn polynomial_from_numerator(num: &[i64], n: usize) -> QPoly {
    let (h, d) = reduce_numerator(num, n);
    if d == 0 || h.is_empty() {
        return QPoly::zero();
    }
    let mut p = QPoly::zero();
    for (k, &c) in h.iter().enumerate() {
        let term = QPoly::binomial_shifted(d as i64 - 1 - k as i64, d - 1);
        p = p.add(&term.mul(&QPoly::from_ints(&[c])));
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub numerator: Numerator,
    pub polynomial: QPoly,
    /// Projective dimension `deg p` (`-1` for the empty scheme).
    pub dim: i64,
    pub degree: BigInt,
    /// Arithmetic genus `1 - p(0)`, for curves.
    pub genus: Option<i64>,
    /// Whether the input already was saturated (when checked).
    pub saturated_input: Option<bool>,
    /// Degree from which the Hilbert function equals the polynomial.
    pub stabilization: i64,
}

fn check_homogeneous(i: &Ideal) -> Result<(), Error> {
    if i.is_homogeneous() {
        Ok(())
    } else {
        Err(Error::NonHomogeneous)
    }
}

/// Hilbert-series numerator of `S/I` over `(1 - T)^n`.
pub fn hilbert_series(i: &Ideal) -> Result<Numerator, Error> {
    check_homogeneous(i)?;
    Ok(monomial_numerator(&i.lead_monomials(), i.ring().nvars()))
}

/// Value of the Hilbert function of `S/I` in degree `d`.
pub fn hilbert_function(i: &Ideal, d: i64) -> Result<BigInt, Error> {
    let num = hilbert_series(i)?;
    Ok(hilbert_function_from(&num, i.ring().nvars(), d))
}

/// Hilbert polynomial and invariants of a homogeneous ideal in the
/// geometric variables. With `check_saturation`, records whether
/// `I : m = I` for the irrelevant ideal `m`.
pub fn hilbert_polynomial(i: &Ideal, check_saturation: bool) -> Result<HilbertData, Error> {
    let num = hilbert_series(i)?;
    let n = i.ring().nvars();
    let p = polynomial_from_numerator(&num, n);
    let saturated_input = check_saturation.then(|| {
        let m = Ideal::of_vars(i.ring(), u32::MAX >> (32 - n));
        gb::quotient(i, &m).equals(i)
    });
    let dim = p.degree();
    let degree = if p.is_zero() {
        BigInt::zero()
    } else {
        let mut f = p.leading();
        for k in 1..=dim {
            f *= BigRational::from_integer(BigInt::from(k));
        }
        f.to_integer()
    };
    let genus = (dim == 1).then(|| (BigRational::one() - p.coeff(0)).to_integer().to_i64().unwrap());
    let stabilization = {
        // exact: HF = HP from deg(N) - n + 1 on, checked downward
        let mut s = num.len() as i64 - n as i64;
        while s > 0 && BigRational::from_integer(hilbert_function_from(&num, n, s - 1)) == p.eval(s - 1) {
            s -= 1;
        }
        s.max(0)
    };
    Ok(HilbertData { numerator: num, polynomial: p, dim, degree, genus, saturated_input, stabilization })
}

/// Windowed agreement: the polynomial matches the Hilbert function on
/// `window` consecutive degrees from `start`.
pub fn agrees_on_window(i: &Ideal, data: &HilbertData, start: i64, window: i64) -> Result<bool, Error> {
    for d in start..start + window {
        if BigRational::from_integer(hilbert_function(i, d)?) != data.polynomial.eval(d) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lead monomials under a degree-compatible order.
fn degree_lead_ideal(i: &Ideal) -> Vec<Monomial> {
    match i.ring().order() {
        MonomialOrder::Grevlex => i.lead_monomials(),
        _ => i.with_order(MonomialOrder::Grevlex).lead_monomials(),
    }
}

/// `dim_k(big / small)` for ideals `small ⊆ big` of an affine ring, when finite.
pub fn colength(big: &Ideal, small: &Ideal) -> Result<u64, Error> {
    let n = big.ring().nvars();
    let nb = monomial_numerator(&degree_lead_ideal(big), n);
    let ns = monomial_numerator(&degree_lead_ideal(small), n);
    let len = ns.len().max(nb.len());
    let mut diff: Numerator = (0..len).map(|k| ns.get(k).copied().unwrap_or(0) - nb.get(k).copied().unwrap_or(0)).collect();
    diff = trim_num(diff);
    for _ in 0..n {
        if diff.is_empty() {
            break;
        }
        diff = divide_one_minus_t(&diff).ok_or(Error::NotFiniteLength)?;
    }
    let v: i64 = diff.iter().sum();
    u64::try_from(v).map_err(|_| Error::Inconsistent("negative colength: ideals are not nested".into()))
}

/// `dim_k(S / I)` when finite.
pub fn length(i: &Ideal) -> Result<u64, Error> {
    colength(&Ideal::unit(i.ring()), i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::expr::parse_poly;
    use crate::ring::Ring;

    fn ideal(vars: &[&str], gens: &[&str]) -> Ideal {
        let r = Ring::qq(vars);
        Ideal::new(&r, gens.iter().map(|g| parse_poly(&r, g).unwrap()).collect())
    }

    #[test]
    fn principal_and_free() {
        assert_eq!(hilbert_series(&ideal(&["x", "y", "z", "w"], &[])).unwrap(), alloc::vec![1]);
        assert_eq!(hilbert_series(&ideal(&["x", "y"], &["x"])).unwrap(), alloc::vec![1, -1]);
    }

    #[test]
    fn twisted_cubic_polynomial() {
        let i = ideal(&["x", "y", "z", "w"], &["x*z-y^2", "x*w-y*z", "y*w-z^2"]);
        let h = hilbert_polynomial(&i, true).unwrap();
        assert_eq!(h.polynomial.to_string(), "3*z+1");
        assert_eq!((h.dim, h.genus, h.saturated_input), (1, Some(0), Some(true)));
        for d in 1..8 {
            assert_eq!(hilbert_function(&i, d).unwrap(), BigInt::from(3 * d + 1));
        }
    }

    #[test]
    fn colength_of_fat_points() {
        let i = ideal(&["x", "y"], &["x^2", "x*y", "y^2"]);
        assert_eq!(length(&i).unwrap(), 3);
        let line = ideal(&["x", "y", "z"], &["x", "y"]);
        let fat = ideal(&["x", "y", "z"], &["x^2", "x*y", "y^2", "x*z", "y*z"]);
        let fat = Ideal::new(line.ring(), fat.gens().iter().map(|g| g.map_to_ring(line.ring())).collect());
        assert_eq!(colength(&line, &fat).unwrap(), 2);
        assert_eq!(length(&line), Err(Error::NotFiniteLength));
    }

    #[test]
    fn qpoly_rendering() {
        assert_eq!(QPoly::from_ints(&[1, 4]).to_string(), "4*z+1");
        assert_eq!(QPoly::from_ints(&[-2, 4]).to_string(), "4*z-2");
        assert_eq!(QPoly::from_ints(&[3]).to_string(), "3");
        assert_eq!(QPoly::binomial_shifted(2, 2).to_string(), "1/2*z^2+3/2*z+1");
    }
}
