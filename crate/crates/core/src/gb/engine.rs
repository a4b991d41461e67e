//! Buchberger's algorithm for submodules of free modules `R^r` under a
//! position-over-term order (position 0 largest). Ideals are the case `r = 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::field::Coeff;
use crate::poly::Polynomial;
use crate::ring::{Monomial, RingRef};

/// Element of `R^r`; components share one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    comps: Vec<Polynomial>,
}

impl Vector {
    pub fn new(comps: Vec<Polynomial>) -> Self {
        assert!(!comps.is_empty(), "vector of rank 0");
        Vector { comps }
    }

    pub fn zero(ring: &RingRef, rank: usize) -> Self {
        Vector { comps: (0..rank).map(|_| Polynomial::zero(ring)).collect() }
    }

    /// Basis vector `e_i`.
    pub fn unit(ring: &RingRef, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.comps[i] = Polynomial::one(ring);
        v
    }

    pub fn ring(&self) -> &RingRef {
        self.comps[0].ring()
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn into_comps(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Leading position and monomial.
    pub fn lead(&self) -> Option<(usize, Monomial)> {
        self.comps.iter().enumerate().find(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.lm()))
    }

    pub fn lead_coeff(&self) -> Option<&Coeff> {
        self.comps.iter().find(|c| !c.is_zero()).map(|c| c.lc())
    }

    pub fn add_scaled(&self, c: &Coeff, m: &Monomial, g: &Vector) -> Vector {
        Vector { comps: self.comps.iter().zip(&g.comps).map(|(a, b)| a.add_scaled(c, m, b)).collect() }
    }

    pub fn add(&self, g: &Vector) -> Vector {
        Vector { comps: self.comps.iter().zip(&g.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Vector {
        Vector { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Vector {
        Vector { comps: self.comps.iter().map(|a| a.mul(f)).collect() }
    }

    pub fn monic(&self) -> Vector {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&self.ring().field().inv(c)),
        }
    }

    /// Degree with respect to component shifts (`deg e_i = shifts[i]`).
    pub fn degree(&self, shifts: &[i32]) -> Option<i32> {
        self.comps
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.degree().map(|d| d as i32 + shifts.get(i).copied().unwrap_or(0)))
            .max()
    }

    /// Components `range` as a new vector.
    pub fn slice(&self, from: usize, to: usize) -> Vector {
        Vector { comps: self.comps[from..to].to_vec() }
    }

    pub fn dot(&self, other: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero(self.ring());
        for (a, b) in self.comps.iter().zip(other) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }
}

/// Position-over-term comparison of leading terms.
pub fn cmp_lead(ring: &RingRef, a: &(usize, Monomial), b: &(usize, Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| ring.cmp(&a.1, &b.1))
}

struct Elem {
    v: Vector,
    pos: usize,
    lm: Monomial,
    sugar: i32,
}

/// Full reduction of `v` by `basis`. Returns the remainder and its sugar.
fn reduce_with(v: Vector, mut sugar: i32, basis: &[Elem]) -> (Vector, i32) {
    let ring = v.ring().clone();
    let k = ring.field().clone();
    let mut rest = v;
    let mut rem = Vector::zero(&ring, rest.rank());
    while let Some((pos, lm)) = rest.lead() {
        let div = basis.iter().find(|g| g.pos == pos && g.lm.divides(&lm));
        match div {
            Some(g) => {
                let m = g.lm.quotient_of(&lm).unwrap();
                let c = k.neg(&k.div(rest.comps[pos].lc(), g.v.comps[pos].lc()));
                sugar = sugar.max(g.sugar + m.degree() as i32);
                rest = rest.add_scaled(&c, &m, &g.v);
            }
            None => {
                let (m, c) = rest.comps[pos].pop_lead().unwrap();
                rem.comps[pos].push_smallest(m, c);
            }
        }
    }
    (rem, sugar)
}

/// Normal form of `v` with respect to an arbitrary list of vectors.
pub fn normal_form(v: &Vector, basis: &[Vector]) -> Vector {
    let elems: Vec<Elem> = basis
        .iter()
        .filter_map(|g| g.lead().map(|(pos, lm)| Elem { v: g.clone(), pos, lm, sugar: 0 }))
        .collect();
    reduce_with(v.clone(), 0, &elems).0
}

fn normalize(v: Vector) -> Vector {
    // keep rational elements free of denominators and content
    if v.ring().field().characteristic() == 0 {
        let mut den = num_bigint::BigInt::from(1);
        let mut num = num_bigint::BigInt::from(0);
        for c in &v.comps {
            for (_, a) in c.terms() {
                let q = a.as_rational().unwrap();
                den = num_integer::Integer::lcm(&den, q.denom());
                num = num_integer::Integer::gcd(&num, q.numer());
            }
        }
        let mut f = num_rational::BigRational::new(den, num);
        if num_traits::Signed::is_negative(v.lead_coeff().unwrap().as_rational().unwrap()) {
            f = -f;
        }
        v.scale(&Coeff::Q(f))
    } else {
        v.monic()
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`
/// (degrees of basis vectors given by `shifts`, used for the sugar).
pub fn groebner(gens: &[Vector], shifts: &[i32]) -> Vec<Vector> {
    let Some(first) = gens.first() else { return Vec::new() };
    let ring = first.ring().clone();
    let rank = first.rank();
    let mut basis: Vec<Elem> = Vec::new();
    let mut queue: BTreeMap<(i32, u64), (usize, usize)> = BTreeMap::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut seq = 0u64;

    let mut add = |v: Vector, sugar: i32, basis: &mut Vec<Elem>, queue: &mut BTreeMap<(i32, u64), (usize, usize)>, pending: &mut BTreeSet<(usize, usize)>| {
        let v = normalize(v);
        let (pos, lm) = v.lead().unwrap();
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            if g.pos != pos {
                continue;
            }
            if rank == 1 && g.lm.is_coprime(&lm) {
                continue;
            }
            let l = g.lm.lcm(&lm);
            let s = (g.sugar + (l.degree() - g.lm.degree()) as i32).max(sugar + (l.degree() - lm.degree()) as i32);
            queue.insert((s, seq), (i, j));
            pending.insert((i, j));
            seq += 1;
        }
        basis.push(Elem { v, pos, lm, sugar });
    };

    let mut inputs: Vec<(Vector, i32)> =
        gens.iter().filter(|g| !g.is_zero()).map(|g| (g.clone(), g.degree(shifts).unwrap())).collect();
    inputs.sort_by_key(|(_, s)| *s);
    for (g, s) in inputs {
        let (r, s) = reduce_with(g, s, &basis);
        if !r.is_zero() {
            add(r, s, &mut basis, &mut queue, &mut pending);
        }
    }

    let k = ring.field().clone();
    while let Some((&key, &(i, j))) = queue.iter().next() {
        queue.remove(&key);
        pending.remove(&(i, j));
        let l = basis[i].lm.lcm(&basis[j].lm);
        let pos = basis[i].pos;
        let chain = (0..basis.len()).any(|m| {
            m != i
                && m != j
                && basis[m].pos == pos
                && basis[m].lm.divides(&l)
                && !pending.contains(&(i.min(m), i.max(m)))
                && !pending.contains(&(j.min(m), j.max(m)))
        });
        if chain {
            continue;
        }
        let (gi, gj) = (&basis[i], &basis[j]);
        let mi = gi.lm.quotient_of(&l).unwrap();
        let mj = gj.lm.quotient_of(&l).unwrap();
        let ci = k.inv(gi.v.comps[pos].lc());
        let cj = k.neg(&k.inv(gj.v.comps[pos].lc()));
        let s = Vector::zero(&ring, rank).add_scaled(&ci, &mi, &gi.v).add_scaled(&cj, &mj, &gj.v);
        let sugar = key.0;
        let (r, sugar) = reduce_with(s, sugar, &basis);
        if !r.is_zero() {
            add(r, sugar, &mut basis, &mut queue, &mut pending);
        }
    }

    interreduce(basis.into_iter().map(|e| e.v).collect())
}

/// Minimize and fully interreduce a Gröbner basis; output monic, sorted by
/// decreasing leading term.
pub fn interreduce(gs: Vec<Vector>) -> Vec<Vector> {
    let Some(first) = gs.first() else { return gs };
    let ring = first.ring().clone();
    let leads: Vec<(usize, Monomial)> = gs.iter().map(|g| g.lead().unwrap()).collect();
    let mut keep = Vec::new();
    for (i, a) in leads.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(j, b)| {
            j != i && b.0 == a.0 && b.1.divides(&a.1) && (b.1 != a.1 || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Vector> = keep.iter().map(|&i| gs[i].clone()).collect();
    let mut out: Vec<Vector> = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<Elem> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| {
                let (pos, lm) = h.lead().unwrap();
                Elem { v: h.clone(), pos, lm, sugar: 0 }
            })
            .collect();
        // the leading term is irreducible, reduce the tail only
        let (pos, lm) = g.lead().unwrap();
        let mut head = Vector::zero(&ring, g.rank());
        let mut tail = g.clone();
        let (m, c) = tail.comps[pos].pop_lead().unwrap();
        debug_assert_eq!(m, lm);
        head.comps[pos].push_smallest(m, c);
        let (r, _) = reduce_with(tail, 0, &others);
        out.push(head.add(&r).monic());
    }
    out.sort_by(|a, b| cmp_lead(&ring, &b.lead().unwrap(), &a.lead().unwrap()));
    out
}

/// Every S-vector of `basis` reduces to zero modulo `basis`.
pub fn is_groebner(basis: &[Vector]) -> bool {
    let Some(first) = basis.first() else { return true };
    let ring = first.ring().clone();
    let k = ring.field().clone();
    let rank = first.rank();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (pi, li) = basis[i].lead().unwrap();
            let (pj, lj) = basis[j].lead().unwrap();
            if pi != pj {
                continue;
            }
            let l = li.lcm(&lj);
            let ci = k.inv(basis[i].comps[pi].lc());
            let cj = k.neg(&k.inv(basis[j].comps[pj].lc()));
            let s = Vector::zero(&ring, rank)
                .add_scaled(&ci, &li.quotient_of(&l).unwrap(), &basis[i])
                .add_scaled(&cj, &lj.quotient_of(&l).unwrap(), &basis[j]);
            if !normal_form(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}
