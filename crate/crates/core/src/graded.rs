//! Graded and filtered pieces of ideals by plain linear algebra, used as
//! Gröbner-free cross-checks.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::Coeff;
use crate::gb::Ideal;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::ring::{Monomial, MonomialOrder, RingRef};

/// Monomials of exactly degree `d` in the variables of `mask`.
pub fn monomials_of_degree(n: usize, mask: u32, d: u32) -> Vec<Monomial> {
    let vars: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let mut out = Vec::new();
    let mut cur = Monomial::one();
    fill(&vars, 0, d, &mut cur, &mut out);
    out
}

fn fill(vars: &[usize], k: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    if k + 1 == vars.len() {
        cur.set_exp(vars[k], left);
        out.push(*cur);
        cur.set_exp(vars[k], 0);
        return;
    }
    if vars.is_empty() {
        if left == 0 {
            out.push(*cur);
        }
        return;
    }
    for e in (0..=left).rev() {
        cur.set_exp(vars[k], e);
        fill(vars, k + 1, left - e, cur, out);
    }
    cur.set_exp(vars[k], 0);
}

/// Monomials of degree at most `d`, highest degree first.
pub fn monomials_up_to(n: usize, mask: u32, d: u32) -> Vec<Monomial> {
    (0..=d).rev().flat_map(|k| monomials_of_degree(n, mask, k)).collect()
}

/// Coordinates with respect to a fixed list of monomials.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        MonomialBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinate vector; `None` if `p` has a term outside the basis.
    pub fn coords(&self, p: &Polynomial) -> Option<Vec<Coeff>> {
        let k = p.field();
        let mut v = alloc::vec![k.zero(); self.len()];
        for (m, c) in p.terms() {
            v[self.position(m)?] = c.clone();
        }
        Some(v)
    }

    pub fn to_poly(&self, ring: &RingRef, v: &[Coeff]) -> Polynomial {
        let terms = self.monomials.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c.clone())).collect();
        Polynomial::from_terms(ring, terms)
    }
}

fn space_of(ring: &RingRef, basis: &MonomialBasis, polys: &[Polynomial]) -> Matrix {
    let rows = polys.iter().map(|p| basis.coords(p).expect("polynomial inside the piece")).collect();
    Matrix::from_rows(ring.field(), basis.len(), rows).row_space()
}

fn piece_basis(ring: &RingRef, d: u32, filtered: bool) -> MonomialBasis {
    let n = ring.nvars();
    let all = u32::MAX >> (32 - n);
    MonomialBasis::new(if filtered { monomials_up_to(n, all, d) } else { monomials_of_degree(n, all, d) })
}

/// `I_d` (or `I ∩ S_{≤d}` when `filtered`) as the span of all products
/// `m * g` landing in that piece. Non-homogeneous generators are skipped in
/// the graded case, and can make the filtered span smaller than `I ∩ S_{≤d}`.
pub fn piece_by_linear_algebra(ring: &RingRef, gens: &[Polynomial], d: u32, filtered: bool) -> (MonomialBasis, Matrix) {
    let basis = piece_basis(ring, d, filtered);
    let n = ring.nvars();
    let all = u32::MAX >> (32 - n);
    let mut prods = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = g.degree().unwrap();
        if dg > d {
            continue;
        }
        let shifts: Vec<Monomial> = if filtered { monomials_up_to(n, all, d - dg) } else { monomials_of_degree(n, all, d - dg) };
        let one = ring.field().one();
        for m in shifts {
            let p = g.mul_term(&m, &one);
            if filtered || p.is_homogeneous() {
                prods.push(p);
            }
        }
    }
    let space = space_of(ring, &basis, &prods);
    (basis, space)
}

/// The same piece through normal forms for a degree-compatible order:
/// spanned by `m - NF(m)` for non-standard monomials `m`.
pub fn piece_by_groebner(ideal: &Ideal, d: u32, filtered: bool) -> (MonomialBasis, Matrix) {
    let grev = if ideal.ring().order() == MonomialOrder::Grevlex { ideal.clone() } else { ideal.with_order(MonomialOrder::Grevlex) };
    let ring = grev.ring().clone();
    let basis = piece_basis(&ring, d, filtered);
    let one = ring.field().one();
    let lead = grev.lead_monomials();
    let mut polys = Vec::new();
    for m in &basis.monomials {
        if lead.iter().any(|l| l.divides(m)) {
            let p = Polynomial::monomial(&ring, *m, one.clone());
            polys.push(p.sub(&grev.normal_form(&p)));
        }
    }
    let space = space_of(&ring, &basis, &polys);
    (basis, space)
}

/// Monomials of the piece not in the lead ideal for a degree-compatible order.
pub fn standard_monomials(ideal: &Ideal, d: u32, filtered: bool) -> Vec<Monomial> {
    let grev = if ideal.ring().order() == MonomialOrder::Grevlex { ideal.clone() } else { ideal.with_order(MonomialOrder::Grevlex) };
    let lead = grev.lead_monomials();
    piece_basis(grev.ring(), d, filtered).monomials.into_iter().filter(|m| !lead.iter().any(|l| l.divides(m))).collect()
}

/// Rows of `space` (in reduced echelon form, columns ordered by decreasing
/// degree) that only involve monomials of degree `≤ d`: a basis of the
/// intersection with `S_{≤d}`.
pub fn truncate_rows(basis: &MonomialBasis, space: &Matrix, d: u32) -> Matrix {
    let cols: Vec<usize> = (0..basis.len()).filter(|&c| basis.monomials[c].degree() <= d).collect();
    let mut rows = Vec::new();
    for r in 0..space.rows() {
        let row = space.row(r);
        let high = (0..basis.len()).any(|c| basis.monomials[c].degree() > d && !row[c].is_zero());
        if !high {
            rows.push(cols.iter().map(|&c| row[c].clone()).collect());
        }
    }
    Matrix::from_rows(space.field(), cols.len(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::linalg::same_row_space;
    use crate::ring::Ring;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 0b111, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 0b111, 3).len(), 20);
        assert_eq!(monomials_of_degree(4, 0b0101, 3).len(), 4);
        assert_eq!(monomials_of_degree(2, 0b11, 0), alloc::vec![Monomial::one()]);
    }

    #[test]
    fn pieces_agree_for_twisted_cubic() {
        let r = Ring::qq(&["x", "y", "z", "w"]);
        let gens: Vec<Polynomial> = ["x*z-y^2", "x*w-y*z", "y*w-z^2"].iter().map(|g| parse_poly(&r, g).unwrap()).collect();
        let id = Ideal::new(&r, gens.clone());
        for d in 0..5 {
            let (_, a) = piece_by_linear_algebra(&r, &gens, d, false);
            let (_, b) = piece_by_groebner(&id, d, false);
            assert!(same_row_space(&a, &b));
            let std = standard_monomials(&id, d, false).len() as i64;
            assert_eq!(std, 3 * d as i64 + 1);
        }
    }

    #[test]
    fn xy_not_in_the_degree_two_piece() {
        let r = Ring::qq(&["x", "y"]);
        let gens: Vec<Polynomial> = ["x^2", "y^2"].iter().map(|g| parse_poly(&r, g).unwrap()).collect();
        let (basis, space) = piece_by_linear_algebra(&r, &gens, 2, false);
        let xy = basis.coords(&parse_poly(&r, "x*y").unwrap()).unwrap();
        let mut m = space.clone();
        m.push_row(xy);
        assert_eq!(m.rank(), space.rank() + 1);
    }
}
