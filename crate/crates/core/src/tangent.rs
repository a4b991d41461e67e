//! Tangent-space dimensions by linear algebra: degree-zero homomorphisms
//! `Hom(I, S/I)_0` and endomorphism algebras of finite-length modules.

use alloc::vec::Vec;

use crate::error::Error;
use crate::gb::{self, Ideal};
use crate::graded::{standard_monomials, MonomialBasis};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::ring::MonomialOrder;
use crate::sample::Sampler;
use crate::structures::FiniteModule;

/// Normal-form monomial basis of `(S/I)_d`.
#[derive(Clone, Debug)]
pub struct GradedPieceBasis {
    pub degree: u32,
    pub basis: MonomialBasis,
}

impl GradedPieceBasis {
    pub fn new(i: &Ideal, degree: u32) -> Self {
        GradedPieceBasis { degree, basis: MonomialBasis::new(standard_monomials(i, degree, false)) }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

fn grevlex(i: &Ideal) -> Ideal {
    if i.ring().order() == MonomialOrder::Grevlex {
        i.clone()
    } else {
        i.with_order(MonomialOrder::Grevlex)
    }
}

/// Drop generators lying in the ideal of the lower-degree ones kept so far.
pub fn minimal_generators(i: &Ideal) -> Result<Vec<Polynomial>, Error> {
    if !i.gens().iter().all(|g| g.is_homogeneous()) {
        return Err(Error::NonHomogeneous);
    }
    let mut gens: Vec<Polynomial> = i.gens().iter().filter(|g| !g.is_zero()).cloned().collect();
    gens.sort_by_key(|g| g.degree());
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in gens {
        if kept.is_empty() || !Ideal::new(i.ring(), kept.clone()).contains(&g) {
            kept.push(g);
        }
    }
    Ok(kept)
}

#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dimension: usize,
    /// Images of the generators, one tuple per basis homomorphism.
    pub basis: Vec<Vec<Polynomial>>,
    pub generators: Vec<Polynomial>,
    pub syzygy_rows: usize,
    /// Largest degree in which a constraint was imposed.
    pub window_degree: u32,
}

/// `dim Hom(I, S/I)_0` from the minimal generators of a homogeneous ideal.
pub fn hom_dim(i: &Ideal) -> Result<HomSpace, Error> {
    let gens = minimal_generators(i)?;
    hom_dim_with_gens(i, &gens)
}

/// The same, from any homogeneous generating set of `I`.
pub fn hom_dim_with_gens(i: &Ideal, gens: &[Polynomial]) -> Result<HomSpace, Error> {
    if !gens.iter().all(|g| g.is_homogeneous() && !g.is_zero()) {
        return Err(Error::NonHomogeneous);
    }
    let ideal = grevlex(i);
    let ring = ideal.ring().clone();
    let gens: Vec<Polynomial> = gens.iter().map(|g| g.map_to_ring(&ring)).collect();
    let k = ring.field().clone();
    let one = k.one();
    let degs: Vec<u32> = gens.iter().map(|g| g.degree().unwrap()).collect();
    // unknowns: (generator, standard monomial of its degree)
    let pieces: Vec<GradedPieceBasis> = degs.iter().map(|&d| GradedPieceBasis::new(&ideal, d)).collect();
    let mut offsets = Vec::with_capacity(gens.len());
    let mut nunk = 0;
    for p in &pieces {
        offsets.push(nunk);
        nunk += p.len();
    }
    let syz = gb::syzygies(&gens);
    let mut eqs = Matrix::zeros(&k, 0, nunk);
    let mut window = 0;
    for row in &syz.rows {
        let dd = row.comps().iter().zip(&degs).filter_map(|(s, d)| s.degree().map(|e| e + d)).max();
        let Some(dd) = dd else { continue };
        window = window.max(dd);
        let target = GradedPieceBasis::new(&ideal, dd);
        let mut block = alloc::vec![alloc::vec![k.zero(); nunk]; target.len()];
        for (j, s) in row.comps().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (c, m) in pieces[j].basis.monomials.iter().enumerate() {
                let nf = ideal.normal_form(&s.mul_term(m, &one));
                for (mono, a) in nf.terms() {
                    let r = target.basis.position(mono).expect("normal form of the right degree");
                    block[r][offsets[j] + c] = k.add(&block[r][offsets[j] + c], a);
                }
            }
        }
        for r in block {
            eqs.push_row(r);
        }
    }
    let null = if eqs.rows() == 0 {
        (0..nunk).map(|u| (0..nunk).map(|v| if u == v { one.clone() } else { k.zero() }).collect()).collect()
    } else {
        eqs.nullspace()
    };
    let basis = null
        .iter()
        .map(|v| (0..gens.len()).map(|j| pieces[j].basis.to_poly(&ring, &v[offsets[j]..offsets[j] + pieces[j].len()])).collect())
        .collect();
    Ok(HomSpace { dimension: null.len(), basis, generators: gens, syzygy_rows: syz.rows.len(), window_degree: window })
}

/// Every basis homomorphism kills every syzygy modulo `I`.
pub fn verify_hom_space(i: &Ideal, space: &HomSpace) -> bool {
    let ideal = grevlex(i);
    let ring = ideal.ring().clone();
    let syz = gb::syzygies(&space.generators);
    space.basis.iter().all(|phi| {
        syz.rows.iter().all(|row| {
            let s = row.comps().iter().zip(phi).fold(Polynomial::zero(&ring), |acc, (a, b)| acc.add(&a.map_to_ring(&ring).mul(b)));
            ideal.contains(&s)
        })
    })
}

#[derive(Clone, Debug)]
pub struct EndSpace {
    pub dimension: usize,
    pub basis: Vec<Matrix>,
    pub contains_identity: bool,
    /// A random element of the span turned out invertible.
    pub invertible_witness: bool,
}

/// Module endomorphisms as matrices commuting with every multiplication map.
pub fn end_dim(m: &FiniteModule, sampler: &mut Sampler) -> Result<EndSpace, Error> {
    let model = m.model()?;
    let basis = model.endomorphisms();
    let k = model.field().clone();
    let d = model.dim();
    let mut span = Matrix::zeros(&k, 0, d * d);
    for e in &basis {
        span.push_row((0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| e.get(i, j).clone()).collect());
    }
    let rank = span.rank();
    let id = Matrix::identity(&k, d);
    span.push_row((0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| id.get(i, j).clone()).collect());
    let contains_identity = span.rank() == rank;
    let invertible_witness = (0..4).any(|_| {
        let mut sum = Matrix::zeros(&k, d, d);
        for e in &basis {
            let c = sampler.coeff(&k);
            for i in 0..d {
                for j in 0..d {
                    let v = k.add(sum.get(i, j), &k.mul(&c, e.get(i, j)));
                    sum.set(i, j, v);
                }
            }
        }
        d == 0 || !sum.det().is_zero()
    });
    Ok(EndSpace { dimension: basis.len(), basis, contains_identity, invertible_witness })
}

/// Dimension of `(S/I)_d`, counted by standard monomials.
pub fn quotient_dim(i: &Ideal, d: u32) -> usize {
    GradedPieceBasis::new(&grevlex(i), d).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::ring::{Ring, RingRef};
    use crate::structures::{build_module, ModuleTemplate};

    fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect())
    }

    fn p3() -> RingRef {
        Ring::qq(&["x", "y", "z", "w"])
    }

    #[test]
    fn trims_redundant_generators() {
        let r = p3();
        let g = minimal_generators(&ideal(&r, &["x", "x^2", "y"])).unwrap();
        assert_eq!(g.len(), 2);
        let g = minimal_generators(&ideal(&r, &["x*z", "y*z", "z^2", "x^4+y^4"])).unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn line_and_twisted_cubic() {
        let r = p3();
        let line = ideal(&r, &["x", "y"]);
        let h = hom_dim(&line).unwrap();
        assert_eq!(h.dimension, 4);
        assert!(verify_hom_space(&line, &h));
        let tc = ideal(&r, &["x*z-y^2", "x*w-y*z", "y*w-z^2"]);
        assert_eq!(hom_dim(&tc).unwrap().dimension, 12);
    }

    #[test]
    fn redundant_generators_do_not_matter() {
        let r = p3();
        let line = ideal(&r, &["x", "y"]);
        let gens: Vec<Polynomial> = ["x", "y", "x*z", "x+y"].iter().map(|g| parse_poly(&r, g).unwrap()).collect();
        assert_eq!(hom_dim_with_gens(&line, &gens).unwrap().dimension, 4);
    }

    #[test]
    fn endomorphisms_of_small_modules() {
        let r = Ring::qq(&["x", "y", "z"]);
        let k = r.field();
        let origin = alloc::vec![k.zero(); 3];
        let mut s = Sampler::new(9, 20);
        let point = build_module(&r, &ModuleTemplate::Point, origin.clone()).unwrap();
        let e = end_dim(&point, &mut s).unwrap();
        assert_eq!(e.dimension, 1);
        assert!(e.contains_identity && e.invertible_witness);
        let fat = build_module(&r, &ModuleTemplate::Structure(ideal(&r, &["x^2", "y", "z"])), origin).unwrap();
        assert_eq!(end_dim(&fat, &mut s).unwrap().dimension, 2);
    }
}
