//! Gröbner bases, normal forms, syzygies and ideal operations.

pub mod engine;
mod ops;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use once_cell::race::OnceBox;

use crate::poly::{same_ring, Polynomial};
use crate::ring::{MonomialOrder, RingRef};

pub use engine::Vector;
pub use ops::*;

/// An ideal given by generators, with its reduced Gröbner basis computed on
/// first use for the ring's monomial order.
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Polynomial>,
    gb: OnceBox<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceBox::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(Box::new(b.clone()));
        }
        Ideal { ring: self.ring.clone(), gens: self.gens.clone(), gb }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", crate::expr::join_polys(&self.gens))
    }
}

impl Ideal {
    /// Zero generators are dropped. Panics if generators live in another ring.
    pub fn new(ring: &RingRef, gens: Vec<Polynomial>) -> Self {
        for g in &gens {
            assert!(same_ring(g.ring(), ring), "generator from a different ring");
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring: ring.clone(), gens, gb: OnceBox::new() }
    }

    pub fn zero(ring: &RingRef) -> Self {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &RingRef) -> Self {
        Ideal::new(ring, alloc::vec![Polynomial::one(ring)])
    }

    /// The ideal generated by the variables with bits set in `mask`.
    pub fn of_vars(ring: &RingRef, mask: u32) -> Self {
        let gens = (0..ring.nvars()).filter(|i| mask >> i & 1 == 1).map(|i| Polynomial::var(ring, i)).collect();
        Ideal::new(ring, gens)
    }

    /// Ideal of a point of affine space (coordinates for the geometric variables).
    pub fn of_point(ring: &RingRef, point: &[Polynomial]) -> Self {
        let gens = point.iter().enumerate().map(|(i, c)| Polynomial::var(ring, i).sub(c)).collect();
        Ideal::new(ring, gens)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Reduced Gröbner basis for the ring's order, monic, in decreasing
    /// leading-term order.
    pub fn groebner(&self) -> &[Polynomial] {
        self.gb.get_or_init(|| Box::new(reduced_gb(&self.gens)))
    }

    pub fn has_cached_basis(&self) -> bool {
        self.gb.get().is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.groebner();
        gb.len() == 1 && gb[0].is_unit()
    }

    /// Same ideal in the ring with another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Ideal {
        let r = self.ring.with_order(order);
        Ideal::new(&r, self.gens.iter().map(|g| g.map_to_ring(&r)).collect())
    }

    /// Same generators reinterpreted in a ring with the same variable count.
    pub fn map_to_ring(&self, ring: &RingRef) -> Ideal {
        Ideal::new(ring, self.gens.iter().map(|g| g.map_to_ring(ring)).collect())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert!(same_ring(f.ring(), &self.ring), "polynomial from a different ring");
        normal_form(f, self.groebner())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// Equality as ideals (reduced bases coincide).
    pub fn equals(&self, other: &Ideal) -> bool {
        same_ring(&self.ring, &other.ring) && self.groebner() == other.groebner()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.groebner().iter().all(|g| g.is_homogeneous())
    }

    pub fn is_homogeneous_in(&self, mask: u32) -> bool {
        self.groebner().iter().all(|g| g.is_homogeneous_in(mask))
    }

    pub fn lead_monomials(&self) -> Vec<crate::ring::Monomial> {
        self.groebner().iter().map(|g| g.lm()).collect()
    }
}

/// Reduced Gröbner basis of a generator list.
pub fn reduced_gb(gens: &[Polynomial]) -> Vec<Polynomial> {
    let vs: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).map(|g| Vector::new(alloc::vec![g.clone()])).collect();
    engine::groebner(&vs, &[0]).into_iter().map(|v| v.into_comps().pop().unwrap()).collect()
}

/// Remainder of `f` on division by `basis` (unique when `basis` is a Gröbner basis).
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let vs: Vec<Vector> = basis.iter().map(|g| Vector::new(alloc::vec![g.clone()])).collect();
    engine::normal_form(&Vector::new(alloc::vec![f.clone()]), &vs).into_comps().pop().unwrap()
}

/// Buchberger criterion for a polynomial list.
pub fn is_groebner(basis: &[Polynomial]) -> bool {
    let vs: Vec<Vector> = basis.iter().map(|g| Vector::new(alloc::vec![g.clone()])).collect();
    engine::is_groebner(&vs)
}
