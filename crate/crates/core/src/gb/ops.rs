use alloc::vec::Vec;

use super::engine::{self, Vector};
use super::Ideal;
use crate::error::Error;
use crate::field::Coeff;
use crate::poly::{same_ring, Polynomial};
use crate::ring::{Monomial, MonomialOrder, RingRef};

/// Relations among a list of generators: `Σ row_i * g_i = 0` for every row.
#[derive(Clone, Debug)]
pub struct SyzygyMatrix {
    pub rows: Vec<Vector>,
    /// Degree of each row (`max deg(row_i) + deg g_i`), when the input is homogeneous.
    pub degrees: Vec<Option<i32>>,
}

impl SyzygyMatrix {
    /// Multiply out every row against `gens`.
    pub fn verify(&self, gens: &[Polynomial]) -> bool {
        self.rows.iter().all(|r| r.dot(gens).is_zero())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Intersect,
    Quotient,
    Saturate,
    Eliminate,
}

/// Second argument of [`ideal_op`]: an ideal or (for elimination) a set of
/// variables as a bit mask.
pub enum OpArg<'a> {
    Ideal(&'a Ideal),
    Vars(u32),
}

pub fn ideal_op(kind: IdealOp, a: &Ideal, b: OpArg<'_>) -> Result<Ideal, Error> {
    match (kind, b) {
        (IdealOp::Eliminate, OpArg::Vars(mask)) => Ok(eliminate(a, mask)),
        (IdealOp::Eliminate, OpArg::Ideal(_)) => Err(Error::Unsupported("eliminate takes a variable set".into())),
        (_, OpArg::Vars(_)) => Err(Error::Unsupported("operation takes an ideal".into())),
        (kind, OpArg::Ideal(b)) => {
            if !same_ring(a.ring(), b.ring()) {
                return Err(Error::RingMismatch);
            }
            Ok(match kind {
                IdealOp::Sum => sum(a, b),
                IdealOp::Product => product(a, b),
                IdealOp::Intersect => intersect(a, b),
                IdealOp::Quotient => quotient(a, b),
                IdealOp::Saturate => saturate(a, b),
                IdealOp::Eliminate => unreachable!(),
            })
        }
    }
}

pub fn sum(a: &Ideal, b: &Ideal) -> Ideal {
    let mut g = a.gens().to_vec();
    g.extend(b.gens().iter().cloned());
    Ideal::new(a.ring(), g)
}

pub fn product(a: &Ideal, b: &Ideal) -> Ideal {
    let mut g = Vec::new();
    for x in a.gens() {
        for y in b.gens() {
            g.push(x.mul(y));
        }
    }
    Ideal::new(a.ring(), g)
}

/// Move polynomials of `ring` into `big`, whose first `k` variables are new.
fn lift_front(f: &Polynomial, big: &RingRef, k: usize) -> Polynomial {
    let index: Vec<usize> = (0..f.ring().nvars()).map(|i| i + k).collect();
    f.embed(big, &index)
}

/// Gröbner basis in `big` (first `k` variables eliminated), mapped back to `ring`.
fn eliminate_front(gens: Vec<Polynomial>, big: &RingRef, k: usize, ring: &RingRef) -> Ideal {
    let gb = super::reduced_gb(&gens);
    let front = ((1u64 << k) - 1) as u32;
    let kept = gb
        .into_iter()
        .filter(|g| g.support_vars() & front == 0)
        .map(|g| {
            let terms = g
                .terms()
                .iter()
                .map(|(m, c)| {
                    let mut out = Monomial::one();
                    for i in k..big.nvars() {
                        out.set_exp(i - k, m.exp(i));
                    }
                    (out, c.clone())
                })
                .collect();
            Polynomial::from_terms(ring, terms)
        })
        .collect();
    Ideal::new(ring, kept)
}

/// `A ∩ B` as `⟨u A, (1 - u) B⟩ ∩ k[x]`.
pub fn intersect(a: &Ideal, b: &Ideal) -> Ideal {
    let ring = a.ring();
    if a.is_zero() || b.is_zero() {
        return Ideal::zero(ring);
    }
    let u = ring.fresh_name("u");
    let big = ring.prepend(&[u.as_str()], MonomialOrder::eliminate(1)).expect("room for an auxiliary variable");
    let uu = Polynomial::var(&big, 0);
    let one_minus_u = Polynomial::one(&big).sub(&uu);
    let mut gens = Vec::new();
    for g in a.gens() {
        gens.push(uu.mul(&lift_front(g, &big, 1)));
    }
    for g in b.gens() {
        gens.push(one_minus_u.mul(&lift_front(g, &big, 1)));
    }
    eliminate_front(gens, &big, 1, ring)
}

pub fn intersect_all(ideals: &[Ideal]) -> Ideal {
    let mut it = ideals.iter();
    let first = it.next().expect("at least one ideal").clone();
    it.fold(first, |acc, b| intersect(&acc, b))
}

/// Exact quotient `f / g`; `None` if `g` does not divide `f`.
pub fn divide_exact(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    let k = f.field().clone();
    let ring = f.ring();
    let mut rest = f.clone();
    let mut q = Polynomial::zero(ring);
    let lm = g.lm();
    let lc = g.lc().clone();
    while !rest.is_zero() {
        let m = lm.quotient_of(&rest.lm())?;
        let c = k.div(rest.lc(), &lc);
        q = q.add(&Polynomial::monomial(ring, m, c.clone()));
        rest = rest.add_scaled(&k.neg(&c), &m, g);
    }
    Some(q)
}

/// `A : f`.
pub fn quotient_poly(a: &Ideal, f: &Polynomial) -> Ideal {
    let ring = a.ring();
    if f.is_zero() {
        return Ideal::unit(ring);
    }
    let inter = intersect(a, &Ideal::new(ring, alloc::vec![f.clone()]));
    let gens = inter.groebner().iter().map(|h| divide_exact(h, f).expect("element of (f) divisible by f")).collect();
    Ideal::new(ring, gens)
}

/// `A : B`.
pub fn quotient(a: &Ideal, b: &Ideal) -> Ideal {
    let ring = a.ring();
    if b.is_zero() {
        return Ideal::unit(ring);
    }
    let parts: Vec<Ideal> = b.gens().iter().map(|f| quotient_poly(a, f)).collect();
    intersect_all(&parts)
}

/// `A : B^∞` by iterated quotients until the reduced basis stabilizes.
pub fn saturate(a: &Ideal, b: &Ideal) -> Ideal {
    let mut cur = a.clone();
    loop {
        let next = quotient(&cur, b);
        if next.equals(&cur) {
            return cur;
        }
        cur = next;
    }
}

/// `A : f^∞` by iterated quotients.
pub fn saturate_poly(a: &Ideal, f: &Polynomial) -> Ideal {
    let mut cur = a.clone();
    loop {
        let next = quotient_poly(&cur, f);
        if next.equals(&cur) {
            return cur;
        }
        cur = next;
    }
}

/// `A : f^∞` as `(A + (1 - z f)) ∩ k[x]`.
pub fn saturate_rabinowitsch(a: &Ideal, f: &Polynomial) -> Ideal {
    let ring = a.ring();
    let z = ring.fresh_name("z");
    let big = ring.prepend(&[z.as_str()], MonomialOrder::eliminate(1)).expect("room for an auxiliary variable");
    let zz = Polynomial::var(&big, 0);
    let mut gens: Vec<Polynomial> = a.gens().iter().map(|g| lift_front(g, &big, 1)).collect();
    gens.push(Polynomial::one(&big).sub(&zz.mul(&lift_front(f, &big, 1))));
    eliminate_front(gens, &big, 1, ring)
}

/// `A ∩ k[remaining variables]`; the result lives in the ring without the
/// variables of `mask`.
pub fn eliminate(a: &Ideal, mask: u32) -> Ideal {
    let ring = a.ring();
    let n = ring.nvars();
    // reorder so the eliminated block comes first
    let elim: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
    let k = elim.len();
    let order = match ring.order() {
        MonomialOrder::Block(_) => MonomialOrder::Grevlex,
        o => o,
    };
    let target = ring.drop_vars(mask, order);
    let mut names: Vec<alloc::string::String> = elim.iter().map(|&i| ring.name(i).into()).collect();
    names.extend(keep.iter().map(|&i| alloc::string::String::from(ring.name(i))));
    let big = crate::ring::Ring::from_names(names, false, ring.field().clone(), MonomialOrder::eliminate(k))
        .expect("same variable count");
    let mut index = alloc::vec![0usize; n];
    for (pos, &i) in elim.iter().chain(keep.iter()).enumerate() {
        index[i] = pos;
    }
    let gens = a.gens().iter().map(|g| g.embed(&big, &index)).collect();
    eliminate_front(gens, &big, k, &target)
}

/// Set variable `var` to `value`; the ring loses that variable.
pub fn specialize(a: &Ideal, var: usize, value: &Coeff) -> Ideal {
    let ring = a.ring();
    let order = match ring.order() {
        MonomialOrder::Block(_) => MonomialOrder::Grevlex,
        o => o,
    };
    let target = ring.drop_vars(1 << var, order);
    Ideal::new(&target, a.gens().iter().map(|g| g.specialize(var, value, &target)).collect())
}

/// Syzygies of `gens`, via the module Gröbner basis of the rows `(g_i | e_i)`.
/// For homogeneous input the rows are trimmed to a minimal generating set.
pub fn syzygies(gens: &[Polynomial]) -> SyzygyMatrix {
    let images: Vec<Vector> = gens.iter().map(|g| Vector::new(alloc::vec![g.clone()])).collect();
    let rows = module_kernel(&images, &[]);
    let homogeneous = gens.iter().all(|g| g.is_homogeneous());
    let rows = if homogeneous { trim_module(rows, gens) } else { rows };
    let degrees = rows
        .iter()
        .map(|r| {
            if !homogeneous {
                return None;
            }
            let shifts: Vec<i32> = gens.iter().map(|g| g.degree().unwrap_or(0) as i32).collect();
            r.degree(&shifts)
        })
        .collect();
    SyzygyMatrix { rows, degrees }
}

/// `{a ∈ R^r : Σ a_i images_i ∈ span(relations)}` where images and relations
/// live in `R^m`.
pub fn module_kernel(images: &[Vector], relations: &[Vector]) -> Vec<Vector> {
    let Some(first) = images.first() else { return Vec::new() };
    let ring = first.ring().clone();
    let m = first.rank();
    let r = images.len();
    let mut rows = Vec::new();
    for (i, v) in images.iter().enumerate() {
        let mut comps = v.comps().to_vec();
        for j in 0..r {
            comps.push(if i == j { Polynomial::one(&ring) } else { Polynomial::zero(&ring) });
        }
        rows.push(Vector::new(comps));
    }
    for v in relations {
        let mut comps = v.comps().to_vec();
        comps.extend((0..r).map(|_| Polynomial::zero(&ring)));
        rows.push(Vector::new(comps));
    }
    let mut shifts = alloc::vec![0i32; m];
    for v in images {
        shifts.push(v.degree(&alloc::vec![0; m]).unwrap_or(0));
    }
    let gb = engine::groebner(&rows, &shifts);
    gb.into_iter()
        .filter(|v| v.comps()[..m].iter().all(|c| c.is_zero()))
        .map(|v| v.slice(m, m + r))
        .collect()
}

/// Drop rows that lie in the submodule generated by the others, visiting
/// higher degrees first.
fn trim_module(rows: Vec<Vector>, gens: &[Polynomial]) -> Vec<Vector> {
    let shifts: Vec<i32> = gens.iter().map(|g| g.degree().unwrap_or(0) as i32).collect();
    let mut rows = rows;
    rows.sort_by_key(|r| r.degree(&shifts).unwrap_or(0));
    let mut i = rows.len();
    while i > 0 {
        i -= 1;
        let others: Vec<Vector> = rows.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect();
        if others.is_empty() {
            break;
        }
        let gb = engine::groebner(&others, &shifts);
        if engine::normal_form(&rows[i], &gb).is_zero() {
            rows.remove(i);
        }
    }
    rows
}

/// Is `v` in the submodule generated by `gens`?
pub fn module_contains(gens: &[Vector], v: &Vector) -> bool {
    let gb = engine::groebner(gens, &[]);
    engine::normal_form(v, &gb).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::ring::Ring;

    fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect())
    }

    #[test]
    fn intersection_of_point_and_double_point() {
        let r = Ring::qq(&["x", "y"]);
        let i = intersect(&ideal(&r, &["x^2", "y"]), &ideal(&r, &["x-1", "y"]));
        assert!(i.equals(&ideal(&r, &["y", "x^3-x^2"])));
    }

    #[test]
    fn quotients_and_saturation() {
        let r = Ring::qq(&["x", "y"]);
        let q = quotient(&ideal(&r, &["x^2*y"]), &ideal(&r, &["y"]));
        assert!(q.equals(&ideal(&r, &["x^2"])));
        let s = saturate(&ideal(&r, &["x^2", "x*y"]), &ideal(&r, &["x", "y"]));
        assert!(s.equals(&ideal(&r, &["x"])));
        let f = parse_poly(&r, "y").unwrap();
        let a = ideal(&r, &["x^2", "x*y"]);
        assert!(saturate_poly(&a, &f).equals(&saturate_rabinowitsch(&a, &f)));
    }

    #[test]
    fn elimination_drops_variables() {
        let r = Ring::qq(&["t", "x", "y"]);
        let i = ideal(&r, &["x-t^2", "y-t^3"]);
        let e = eliminate(&i, 1);
        assert_eq!(e.ring().nvars(), 2);
        assert!(e.equals(&ideal(e.ring(), &["x^3-y^2"])));
    }

    #[test]
    fn koszul_syzygy() {
        let r = Ring::qq(&["x", "y"]);
        let s = syzygies(&ideal(&r, &["x", "y"]).gens().to_vec());
        assert_eq!(s.len(), 1);
        assert!(s.verify(&[parse_poly(&r, "x").unwrap(), parse_poly(&r, "y").unwrap()]));
    }
}
