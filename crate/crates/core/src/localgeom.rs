//! Local invariants at a point: minimal number of generators, the fiber of
//! the blow-up along the ideal, and the resulting detachability test.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::Coeff;
use crate::gb::{self, Ideal};
use crate::graded::{monomials_of_degree, MonomialBasis};
use crate::hilbert;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::ring::{MonomialOrder, Ring};

/// An ideal of an affine chart together with a point of that chart.
#[derive(Clone, Debug)]
pub struct PointedIdeal {
    pub ideal: Ideal,
    pub point: Vec<Coeff>,
    /// Projective variable set to 1, when the chart came from projective space.
    pub chart: Option<String>,
}

impl PointedIdeal {
    pub fn new(ideal: Ideal, point: Vec<Coeff>) -> Result<Self, Error> {
        if point.len() != ideal.ring().nvars() {
            return Err(Error::Inconsistent("point has the wrong number of coordinates".into()));
        }
        Ok(PointedIdeal { ideal, point, chart: None })
    }

    /// Dehomogenize at the first nonzero coordinate of a projective point.
    pub fn from_projective(ideal: &Ideal, point: &[Coeff]) -> Result<Self, Error> {
        let ring = ideal.ring();
        if point.len() != ring.nvars() {
            return Err(Error::Inconsistent("point has the wrong number of coordinates".into()));
        }
        let j = point.iter().position(|c| !c.is_zero()).ok_or_else(|| Error::DegenerateData("zero vector is not a point".into()))?;
        let k = ring.field();
        let one = k.one();
        let inv = k.inv(&point[j]);
        let chart = ring.drop_vars(1 << j, MonomialOrder::Grevlex);
        let gens = ideal.gens().iter().map(|g| g.specialize(j, &one, &chart)).collect();
        let affine: Vec<Coeff> = point.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, c)| k.mul(c, &inv)).collect();
        Ok(PointedIdeal { ideal: Ideal::new(&chart, gens), point: affine, chart: Some(alloc::format!("{}=1", ring.name(j))) })
    }

    /// Generators moved so that the point is the origin.
    pub fn local_gens(&self) -> Vec<Polynomial> {
        self.ideal.gens().iter().map(|g| g.translate(&self.point)).collect()
    }

    pub fn on_scheme(&self) -> bool {
        self.ideal.gens().iter().all(|g| g.evaluate(&self.point).is_zero())
    }
}

/// `dim_k I ⊗ k(p)`: number of generators minus the rank of the syzygy
/// matrix evaluated at the point.
pub fn local_min_gens(pi: &PointedIdeal) -> Result<usize, Error> {
    if !pi.on_scheme() {
        return Err(Error::PointNotOnScheme);
    }
    let gens: Vec<Polynomial> = pi.ideal.gens().to_vec();
    let r = gens.len();
    let syz = gb::syzygies(&gens);
    let k = pi.ideal.ring().field();
    let rows: Vec<Vec<Coeff>> = syz.rows.iter().map(|row| row.comps().iter().map(|c| c.evaluate(&pi.point)).collect()).collect();
    if rows.is_empty() {
        return Ok(r);
    }
    Ok(r - Matrix::from_rows(k, r, rows).rank())
}

#[derive(Clone, Debug)]
pub struct BlowupFiber {
    /// Ideal of the fiber in `k[y_1..y_r]`.
    pub fiber_ideal: Ideal,
    /// Saturation of the fiber ideal with respect to `(y_1..y_r)`.
    pub saturated: Ideal,
    pub r: usize,
    /// The fiber is all of `P^{r-1}`.
    pub is_projective_space: bool,
    /// Projective dimension of the fiber (`-1` when empty).
    pub dim: i64,
    /// The fiber is a linear subspace or a smooth conic, both isomorphic to
    /// projective space of dimension `dim`.
    pub is_linear_or_conic: bool,
}

impl BlowupFiber {
    pub fn description(&self) -> String {
        if self.dim < 0 {
            "empty".into()
        } else if self.is_linear_or_conic {
            alloc::format!("P^{}", self.dim)
        } else {
            alloc::format!("V({}) in P^{}", crate::expr::join_polys(self.saturated.gens()), self.r - 1)
        }
    }
}

/// Fiber over the point of the blow-up along the ideal. The Rees algebra is
/// the kernel of `y_i -> s g_i`, found by eliminating `s` from `(y_i - s g_i)`.
pub fn blowup_fiber(pi: &PointedIdeal) -> Result<BlowupFiber, Error> {
    let ring = pi.ideal.ring();
    let gens = pi.ideal.gens();
    if gens.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    let r = gens.len();
    let n = ring.nvars();
    let mut names: Vec<String> = Vec::new();
    let s = ring.fresh_name("s");
    names.push(s);
    let ynames: Vec<String> = (1..=r).map(|i| ring.fresh_name(&alloc::format!("y{i}"))).collect();
    names.extend(ynames.iter().cloned());
    names.extend(ring.names().iter().cloned());
    let big = Ring::from_names(names, false, ring.field().clone(), MonomialOrder::Grevlex)?;
    let index: Vec<usize> = (0..n).map(|i| 1 + r + i).collect();
    let sv = Polynomial::var(&big, 0);
    let rees_gens: Vec<Polynomial> =
        gens.iter().enumerate().map(|(i, g)| Polynomial::var(&big, 1 + i).sub(&sv.mul(&g.embed(&big, &index)))).collect();
    let rees = gb::eliminate(&Ideal::new(&big, rees_gens), 1);
    // specialize the x-variables at the point
    let yring = Ring::from_names(ynames, false, ring.field().clone(), MonomialOrder::Grevlex)?;
    let mut images: Vec<Polynomial> = (0..r).map(|i| Polynomial::var(&yring, i)).collect();
    images.extend(pi.point.iter().map(|c| Polynomial::constant(&yring, c.clone())));
    let fiber_gens = rees.gens().iter().map(|g| g.substitute(&images)).collect();
    let fiber_ideal = Ideal::new(&yring, fiber_gens);
    let irrelevant = Ideal::of_vars(&yring, u32::MAX >> (32 - r));
    let saturated = gb::saturate(&fiber_ideal, &irrelevant);
    let is_projective_space = saturated.is_zero() || saturated.groebner().is_empty();
    let (dim, is_linear_or_conic) = if saturated.is_unit() {
        (-1, false)
    } else if is_projective_space {
        (r as i64 - 1, true)
    } else {
        let hp = hilbert::hilbert_polynomial(&saturated, false)?;
        (hp.dim, linear_or_conic(&saturated, r))
    };
    Ok(BlowupFiber { fiber_ideal, saturated, r, is_projective_space, dim, is_linear_or_conic })
}

/// Linear space, or a single quadric of full rank 3 cutting a plane of a
/// linear space.
fn linear_or_conic(sat: &Ideal, r: usize) -> bool {
    let gb = sat.groebner();
    let linear: Vec<&Polynomial> = gb.iter().filter(|g| g.degree() == Some(1)).collect();
    let rest: Vec<&Polynomial> = gb.iter().filter(|g| g.degree() != Some(1)).collect();
    if rest.is_empty() {
        return true;
    }
    if rest.len() != 1 || rest[0].degree() != Some(2) || r - linear.len() != 3 {
        return false;
    }
    // quadratic form on the y-variables not eliminated by the linear forms
    let q = rest[0];
    let ring = q.ring();
    let basis = MonomialBasis::new(monomials_of_degree(r, u32::MAX >> (32 - r), 1));
    let lin_rows: Vec<Vec<Coeff>> = linear.iter().map(|l| basis.coords(l).unwrap()).collect();
    let k = ring.field();
    let mut sym = Matrix::zeros(k, r, r);
    for (m, c) in q.terms() {
        let vars: Vec<usize> = (0..r).flat_map(|i| core::iter::repeat(i).take(m.exp(i) as usize)).collect();
        let (a, b) = (vars[0], vars[1]);
        if a == b {
            sym.set(a, a, c.clone());
        } else {
            let half = k.div(c, &k.from_i64(2));
            sym.set(a, b, half.clone());
            sym.set(b, a, half);
        }
    }
    if k.characteristic() == 2 {
        return false;
    }
    // restrict to the complement of the pivots of the linear forms
    let mut lin = Matrix::from_rows(k, r, lin_rows);
    let pivots = if lin.rows() == 0 { Vec::new() } else { lin.rref() };
    let free: Vec<usize> = (0..r).filter(|i| !pivots.contains(i)).collect();
    let restricted = Matrix::from_rows(k, free.len(), free.iter().map(|&i| free.iter().map(|&j| sym.get(i, j).clone()).collect()).collect());
    restricted.rank() == 3
}

#[derive(Clone, Debug)]
pub struct DetachabilityReport {
    /// Local minimal number of generators.
    pub r: usize,
    pub generators: usize,
    pub fiber: BlowupFiber,
    pub detachable: bool,
    pub chart: Option<String>,
    /// The point, which local computations move to the origin.
    pub translation: Vec<Coeff>,
}

/// `r ≤ N` and the blow-up fiber over the point is `P^{r-1}`, `r` being the
/// local minimal number of generators.
pub fn detachability_criterion(pi: &PointedIdeal, ambient_dim: usize) -> Result<DetachabilityReport, Error> {
    let r = local_min_gens(pi)?;
    let fiber = blowup_fiber(pi)?;
    let detachable = r <= ambient_dim && fiber.is_linear_or_conic && fiber.dim == r as i64 - 1 && linear_fiber(&fiber);
    Ok(DetachabilityReport { r, generators: pi.ideal.num_gens(), fiber, detachable, chart: pi.chart.clone(), translation: pi.point.clone() })
}

fn linear_fiber(f: &BlowupFiber) -> bool {
    f.saturated.groebner().iter().all(|g| g.degree() == Some(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn pointed(vars: &[&str], gens: &[&str], pt: &[i64]) -> PointedIdeal {
        let r = Ring::qq(vars);
        let id = Ideal::new(&r, gens.iter().map(|g| parse_poly(&r, g).unwrap()).collect());
        PointedIdeal::new(id, pt.iter().map(|&c| r.field().from_i64(c)).collect()).unwrap()
    }

    #[test]
    fn coordinate_axes() {
        let pi = pointed(&["x", "y", "z"], &["x*y", "x*z", "y*z"], &[0, 0, 0]);
        assert_eq!(local_min_gens(&pi).unwrap(), 3);
        let f = blowup_fiber(&pi).unwrap();
        assert!(f.is_projective_space);
        assert_eq!(f.description(), "P^2");
        assert!(detachability_criterion(&pi, 3).unwrap().detachable);
        // away from the origin, on the x-axis, two generators suffice
        let pi = pointed(&["x", "y", "z"], &["x*y", "x*z", "y*z"], &[2, 0, 0]);
        assert_eq!(local_min_gens(&pi).unwrap(), 2);
    }

    #[test]
    fn square_of_a_line() {
        let pi = pointed(&["x", "y", "z"], &["x^2", "x*y", "y^2"], &[0, 0, 5]);
        assert_eq!(local_min_gens(&pi).unwrap(), 3);
        let f = blowup_fiber(&pi).unwrap();
        assert!(!f.is_projective_space);
        assert_eq!(f.description(), "P^1");
        assert!(!detachability_criterion(&pi, 3).unwrap().detachable);
    }

    #[test]
    fn complete_intersection_and_three_generators() {
        let pi = pointed(&["x", "y", "z"], &["x^2", "y^2"], &[0, 0, 0]);
        let rep = detachability_criterion(&pi, 3).unwrap();
        assert_eq!(rep.r, 2);
        assert!(rep.fiber.is_projective_space && rep.detachable);
        let pi = pointed(&["x", "y", "z"], &["x^2", "x*y", "y^3"], &[0, 0, 4]);
        assert_eq!(local_min_gens(&pi).unwrap(), 3);
        assert!(!detachability_criterion(&pi, 3).unwrap().detachable);
    }

    #[test]
    fn point_off_the_scheme() {
        let pi = pointed(&["x", "y"], &["x", "y"], &[1, 0]);
        assert_eq!(local_min_gens(&pi), Err(Error::PointNotOnScheme));
        // the blow-up is an isomorphism there
        let f = blowup_fiber(&pi).unwrap();
        assert_eq!(f.dim, 0);
    }

    #[test]
    fn projective_chart() {
        let r = Ring::qq(&["x", "y", "z", "w"]);
        let id = Ideal::new(&r, ["x*z-y^2", "x*w-y*z", "y*w-z^2"].iter().map(|g| parse_poly(&r, g).unwrap()).collect());
        let k = r.field();
        let pi = PointedIdeal::from_projective(&id, &[k.zero(), k.zero(), k.zero(), k.from_i64(3)]).unwrap();
        assert_eq!(pi.chart.as_deref(), Some("w=1"));
        assert!(pi.on_scheme());
        assert_eq!(local_min_gens(&pi).unwrap(), 2);
    }
}
