//! One-parameter families of ideals over the affine `t`-line: flat limits,
//! Hilbert-polynomial flatness certificates, the detachment constructors and
//! their verifier.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::field::Coeff;
use crate::gb::{self, Ideal, Vector};
use crate::graded::{monomials_of_degree, monomials_up_to, piece_by_groebner, truncate_rows, MonomialBasis};
use crate::hilbert::{self, HilbertData};
use crate::linalg::{same_row_space, Matrix};
use crate::poly::Polynomial;
use crate::ring::{Monomial, MonomialOrder, Ring, RingRef};
use crate::sample::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Given,
    MovePoint,
    PullOne,
    Curvilinear,
    CaseD,
    CaseE,
    Hypersurface,
    CiLimit,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::Given,
        FamilyKind::MovePoint,
        FamilyKind::PullOne,
        FamilyKind::Curvilinear,
        FamilyKind::CaseD,
        FamilyKind::CaseE,
        FamilyKind::Hypersurface,
        FamilyKind::CiLimit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Given => "given",
            FamilyKind::MovePoint => "mult1-move-point",
            FamilyKind::PullOne => "pullone",
            FamilyKind::Curvilinear => "curvilinear",
            FamilyKind::CaseD => "case-d",
            FamilyKind::CaseE => "case-e",
            FamilyKind::Hypersurface => "hypersurface",
            FamilyKind::CiLimit => "cilimit",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        FamilyKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| Error::Unsupported(alloc::format!("family kind {s}")))
    }
}

/// `QQ[vars, t]`-style ring over the field of `geom`, parameter last.
pub fn param_ring(geom: &RingRef, t: &str) -> Result<RingRef, Error> {
    let mut names = geom.names().to_vec();
    names.push(t.to_string());
    Ring::from_names(names, true, geom.field().clone(), MonomialOrder::param_last(geom.nvars()))
}

/// Move an ideal to another ring sharing its variable names.
pub fn move_ideal(i: &Ideal, ring: &RingRef) -> Result<Ideal, Error> {
    if **i.ring() == **ring {
        return Ok(Ideal::new(ring, i.gens().to_vec()));
    }
    let gens = i.gens().iter().map(|g| g.embed_by_name(ring)).collect::<Result<Vec<_>, _>>()?;
    Ok(Ideal::new(ring, gens))
}

#[derive(Clone, Debug)]
pub struct FamilyOverLine {
    total: Ideal,
    kind: FamilyKind,
    projective: bool,
}

impl FamilyOverLine {
    /// A family given by its total ideal. Projective families must be
    /// homogeneous in the geometric variables.
    pub fn new(total: Ideal, projective: bool) -> Result<Self, Error> {
        Self::with_kind(total, FamilyKind::Given, projective)
    }

    fn with_kind(total: Ideal, kind: FamilyKind, projective: bool) -> Result<Self, Error> {
        let ring = total.ring();
        if !ring.has_param() {
            return Err(Error::Inconsistent("a family needs a ring with a parameter".into()));
        }
        if total.gens().iter().all(|g| g.is_zero()) {
            return Err(Error::ZeroIdeal);
        }
        if projective && !total.gens().iter().all(|g| g.is_homogeneous_in(ring.geom_mask())) {
            return Err(Error::NonHomogeneous);
        }
        Ok(FamilyOverLine { total, kind, projective })
    }

    pub fn total(&self) -> &Ideal {
        &self.total
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn ring(&self) -> &RingRef {
        self.total.ring()
    }

    pub fn param(&self) -> usize {
        self.ring().param_index().expect("family ring has a parameter")
    }

    pub fn geometric_ring(&self) -> RingRef {
        self.ring().drop_vars(1 << self.param(), MonomialOrder::Grevlex)
    }

    pub fn fiber(&self, c: &Coeff) -> Ideal {
        gb::specialize(&self.total, self.param(), c)
    }

    pub fn saturated(&self) -> Ideal {
        let t = Polynomial::var(self.ring(), self.param());
        gb::saturate_poly(&self.total, &t)
    }
}

/// Fiber at `t = 0` of the `t`-saturated family.
pub fn flat_limit(f: &FamilyOverLine) -> Ideal {
    let zero = f.ring().field().zero();
    gb::specialize(&f.saturated(), f.param(), &zero)
}

/// Homogenization with a fresh last variable, from a grevlex basis.
pub fn projective_closure(i: &Ideal) -> Result<Ideal, Error> {
    let ring = i.ring();
    let n = ring.nvars();
    let h = ring.fresh_name("h");
    let big = ring.extend(&[h.as_str()], MonomialOrder::Grevlex)?;
    let grev = if ring.order() == MonomialOrder::Grevlex { i.clone() } else { i.with_order(MonomialOrder::Grevlex) };
    let index: Vec<usize> = (0..n).collect();
    let mask = ((1u64 << n) - 1) as u32;
    let gens = grev.groebner().iter().map(|g| g.embed(&big, &index).homogenize(n, mask)).collect();
    Ok(Ideal::new(&big, gens))
}

/// Hilbert data of a fiber; affine fibers go through their projective closure.
pub fn fiber_hilbert(i: &Ideal, projective: bool) -> Result<HilbertData, Error> {
    if projective {
        hilbert::hilbert_polynomial(i, false)
    } else {
        hilbert::hilbert_polynomial(&projective_closure(i)?, false)
    }
}

#[derive(Clone, Debug)]
pub struct FlatnessCertificate {
    pub special: HilbertData,
    pub generic: HilbertData,
    /// Parameter values whose fibers agree with the generic one.
    pub sampled_t: Vec<Coeff>,
    /// Values discarded because their fibers disagreed with the majority.
    pub rejected_t: Vec<Coeff>,
    pub saturation_changed: bool,
    pub verdict: bool,
}

/// Compare the Hilbert polynomial of the limit with that of `samples`
/// random fibers. Disagreeing fibers trigger one more round of sampling;
/// without a strict majority the call fails.
pub fn flatness_check(f: &FamilyOverLine, samples: usize, sampler: &mut Sampler) -> Result<FlatnessCertificate, Error> {
    let sat = f.saturated();
    let saturation_changed = !sat.equals(f.total());
    let zero = f.ring().field().zero();
    let special = fiber_hilbert(&gb::specialize(&sat, f.param(), &zero), f.projective)?;
    let field = f.ring().field().clone();
    let mut draws: Vec<(Coeff, HilbertData)> = Vec::new();
    for round in 0..2 {
        for _ in 0..samples.max(1) {
            let c = sampler.nonzero(&field);
            let hp = fiber_hilbert(&f.fiber(&c), f.projective)?;
            draws.push((c, hp));
        }
        if round == 0 && draws.iter().all(|(_, h)| h.polynomial == draws[0].1.polynomial) {
            break;
        }
    }
    let majority = draws
        .iter()
        .find(|(_, h)| 2 * draws.iter().filter(|(_, o)| o.polynomial == h.polynomial).count() > draws.len())
        .map(|(_, h)| h.clone())
        .ok_or_else(|| Error::Inconsistent("generic fibers disagree".into()))?;
    let (good, bad): (Vec<_>, Vec<_>) = draws.into_iter().partition(|(_, h)| h.polynomial == majority.polynomial);
    let verdict = special.polynomial == majority.polynomial;
    Ok(FlatnessCertificate {
        special,
        generic: majority,
        sampled_t: good.into_iter().map(|(c, _)| c).collect(),
        rejected_t: bad.into_iter().map(|(c, _)| c).collect(),
        saturation_changed,
        verdict,
    })
}

#[derive(Clone, Debug)]
pub struct FiberCheck {
    pub t: Coeff,
    pub fiber: Ideal,
    pub inside_x: bool,
    /// `dim I_X / I_t` (affine) or the constant `p_t - p_X` (projective).
    pub colength: Option<u64>,
    /// Length of the part of the fiber off `X`.
    pub off_x_length: Option<u64>,
    /// The fiber is `X` union its part off `X`.
    pub decomposes: bool,
}

impl FiberCheck {
    /// Colength accounting: the fiber lies on `X` and adds the expected length.
    pub fn passed(&self, expected: u64) -> bool {
        self.inside_x && self.colength == Some(expected)
    }

    /// All added points are off `X`.
    pub fn isolated(&self, expected: u64) -> bool {
        self.passed(expected) && self.off_x_length == Some(expected) && self.decomposes
    }
}

#[derive(Clone, Debug)]
pub struct DetachmentReport {
    pub limit: Ideal,
    pub limit_ok: bool,
    pub flatness: FlatnessCertificate,
    pub fibers: Vec<FiberCheck>,
    pub expected_points: u64,
}

impl DetachmentReport {
    pub fn fibers_ok(&self) -> bool {
        !self.fibers.is_empty() && self.fibers.iter().all(|c| c.passed(self.expected_points))
    }

    pub fn fibers_isolated(&self) -> bool {
        !self.fibers.is_empty() && self.fibers.iter().all(|c| c.isolated(self.expected_points))
    }

    pub fn passed(&self) -> bool {
        self.limit_ok && self.flatness.verdict && self.fibers_ok()
    }
}

fn constant_difference(a: &HilbertData, b: &HilbertData) -> Option<u64> {
    let d = a.polynomial.sub(&b.polynomial);
    if d.degree() > 0 {
        return None;
    }
    let c = d.coeff(0);
    if !c.is_integer() {
        return None;
    }
    u64::try_from(c.to_integer()).ok()
}

fn check_fiber(f: &FamilyOverLine, x: &Ideal, c: &Coeff) -> Result<FiberCheck, Error> {
    let fiber = f.fiber(c);
    let inside_x = x.contains_ideal(&fiber);
    let residual = gb::saturate(&fiber, x);
    let (colength, off_x_length, decomposes) = if f.projective {
        let irrelevant = Ideal::of_vars(fiber.ring(), u32::MAX >> (32 - fiber.ring().nvars()));
        let hx = hilbert::hilbert_polynomial(x, false)?;
        let hf = hilbert::hilbert_polynomial(&fiber, false)?;
        let hr = hilbert::hilbert_polynomial(&residual, false)?;
        let empty = HilbertData { polynomial: hilbert::QPoly::zero(), ..hr.clone() };
        let joined = gb::saturate(&gb::intersect(x, &residual), &irrelevant);
        (constant_difference(&hf, &hx), constant_difference(&hr, &empty), joined.equals(&gb::saturate(&fiber, &irrelevant)))
    } else {
        let joined = gb::intersect(x, &residual);
        (hilbert::colength(x, &fiber).ok(), hilbert::length(&residual).ok(), joined.equals(&fiber))
    };
    Ok(FiberCheck { t: c.clone(), fiber, inside_x, colength: if inside_x { colength } else { None }, off_x_length, decomposes })
}

/// (i) the flat limit is `target`, (ii) the family is flat, (iii) sampled
/// fibers contain `X` with `expected_points` added (by colength).
pub fn verify_detachment(
    f: &FamilyOverLine,
    target: &Ideal,
    x: &Ideal,
    expected_points: u64,
    samples: usize,
    sampler: &mut Sampler,
) -> Result<DetachmentReport, Error> {
    let geom = f.geometric_ring();
    let target = move_ideal(target, &geom)?;
    let x = move_ideal(x, &geom)?;
    let limit = flat_limit(f);
    let limit_ok = limit.equals(&target);
    let flatness = flatness_check(f, samples, sampler)?;
    let fibers = flatness.sampled_t.iter().map(|c| check_fiber(f, &x, c)).collect::<Result<Vec<_>, _>>()?;
    Ok(DetachmentReport { limit, limit_ok, flatness, fibers, expected_points })
}

/// Length at `point` of `big / small`, found by discarding the components of
/// `small` at `others`.
pub fn local_colength(big: &Ideal, small: &Ideal, point: &[Coeff], others: &[Vec<Coeff>]) -> Result<u64, Error> {
    let ring = small.ring();
    let mut cur = small.clone();
    for q in others.iter().filter(|q| q.as_slice() != point) {
        let coords: Vec<Polynomial> = q.iter().map(|c| Polynomial::constant(ring, c.clone())).collect();
        cur = gb::saturate(&cur, &Ideal::of_point(ring, &coords));
    }
    hilbert::colength(big, &cur)
}

fn check_path(ring: &RingRef, path: &[Polynomial]) -> Result<(), Error> {
    let t = ring.param_index().ok_or_else(|| Error::Inconsistent("a family needs a ring with a parameter".into()))?;
    if path.len() != ring.ngeom() {
        return Err(Error::Inconsistent("path has the wrong number of coordinates".into()));
    }
    if path.iter().any(|p| p.support_vars() & !(1 << t) != 0) {
        return Err(Error::Inconsistent("path coordinates may only involve the parameter".into()));
    }
    Ok(())
}

fn path_coeff(p: &Polynomial, t: usize, e: u32) -> Coeff {
    p.coeff_of(&Monomial::var(t, e))
}

fn path_start(ring: &RingRef, path: &[Polynomial]) -> Vec<Coeff> {
    let t = ring.param_index().unwrap();
    path.iter().map(|p| path_coeff(p, t, 0)).collect()
}

fn path_velocity(ring: &RingRef, path: &[Polynomial]) -> Vec<Coeff> {
    let t = ring.param_index().unwrap();
    path.iter().map(|p| path_coeff(p, t, 1)).collect()
}

fn moving_point(ring: &RingRef, path: &[Polynomial]) -> Ideal {
    Ideal::of_point(ring, path)
}

fn on_scheme(i: &Ideal, point: &[Coeff]) -> bool {
    i.gens().iter().all(|g| g.evaluate(point).is_zero())
}

/// `I_X ∩ I_{p_t}`: one point moving into `X`.
pub fn mult1_move_point(ring: &RingRef, x: &Ideal, path: &[Polynomial]) -> Result<FamilyOverLine, Error> {
    check_path(ring, path)?;
    if !on_scheme(x, &path_start(ring, path)) {
        return Err(Error::DegenerateData("the path must start on X".into()));
    }
    let total = gb::intersect(&move_ideal(x, ring)?, &moving_point(ring, path));
    FamilyOverLine::with_kind(total, FamilyKind::MovePoint, false)
}

/// `I_{Y1} ∩ I_{Z_v}` with `Z_v` the double point at `p` in direction `v`.
pub fn pullone_target(y1: &Ideal, point: &[Coeff], direction: &[Coeff]) -> Ideal {
    let geom = y1.ring();
    let k = geom.field();
    let n = geom.nvars();
    let centered: Vec<Polynomial> =
        (0..n).map(|i| Polynomial::var(geom, i).sub(&Polynomial::constant(geom, point[i].clone()))).collect();
    let v = Matrix::from_rows(k, n, alloc::vec![direction.to_vec()]);
    let mut gens: Vec<Polynomial> = v
        .nullspace()
        .into_iter()
        .map(|c| centered.iter().zip(&c).fold(Polynomial::zero(geom), |acc, (x, a)| acc.add(&x.scale(a))))
        .collect();
    for i in 0..n {
        for j in i..n {
            gens.push(centered[i].mul(&centered[j]));
        }
    }
    gb::intersect(y1, &Ideal::new(geom, gens))
}

/// `I_{Y1} ∩ I_{p_t}`. The velocity of the path at `t = 0` must add one to
/// the colength of `Y1` in `X`.
pub fn pullone(ring: &RingRef, x: &Ideal, y1: &Ideal, path: &[Polynomial]) -> Result<FamilyOverLine, Error> {
    check_path(ring, path)?;
    if !x.contains_ideal(y1) {
        return Err(Error::Inconsistent("Y1 must lie over X".into()));
    }
    let p = path_start(ring, path);
    let v = path_velocity(ring, path);
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateData("the path must leave the point with nonzero velocity".into()));
    }
    let y1g = move_ideal(y1, x.ring())?;
    let target = pullone_target(&y1g, &p, &v);
    if hilbert::colength(x, &target)? != hilbert::colength(x, &y1g)? + 1 {
        return Err(Error::DegenerateData("the direction of the path is absorbed by Y1".into()));
    }
    let total = gb::intersect(&move_ideal(y1, ring)?, &moving_point(ring, path));
    FamilyOverLine::with_kind(total, FamilyKind::PullOne, false)
}

/// `I_X ∩ ⋂ I_{p_k(t)}` for several point paths, typically on a smooth curve.
pub fn curvilinear(ring: &RingRef, x: &Ideal, paths: &[Vec<Polynomial>]) -> Result<FamilyOverLine, Error> {
    let mut ideals = alloc::vec![move_ideal(x, ring)?];
    for (i, p) in paths.iter().enumerate() {
        check_path(ring, p)?;
        if paths[..i].iter().any(|q| q == p) {
            return Err(Error::DegenerateData("two paths coincide".into()));
        }
        ideals.push(moving_point(ring, p));
    }
    FamilyOverLine::with_kind(gb::intersect_all(&ideals), FamilyKind::Curvilinear, false)
}

fn order_in_t(p: &Polynomial, t: usize) -> Option<u32> {
    p.terms().iter().map(|(m, _)| m.exp(t)).min()
}

/// Planar triple point with `φ(f) = 1`, `g ∈ I_Z`: `(g, f · I_{W ∪ q_t})`
/// with `W = (x^2, y, rest)` and `q_t = (a(t), b(t), 0, …)` approaching
/// along `x = 0`.
pub fn case_d(ring: &RingRef, f: &Polynomial, g: &Polynomial, a: &Polynomial, b: &Polynomial) -> Result<FamilyOverLine, Error> {
    let n = ring.ngeom();
    if n < 2 {
        return Err(Error::Inconsistent("case d needs two plane coordinates".into()));
    }
    let t = ring.param_index().ok_or_else(|| Error::Inconsistent("a family needs a ring with a parameter".into()))?;
    let zero = Polynomial::zero(ring);
    let mut path = alloc::vec![a.clone(), b.clone()];
    path.extend((2..n).map(|_| zero.clone()));
    check_path(ring, &path)?;
    if !path_start(ring, &path).iter().all(|c| c.is_zero()) {
        return Err(Error::PathViolatesLocus("the point must start at the origin".into()));
    }
    match (order_in_t(a, t), order_in_t(b, t)) {
        (_, None) => return Err(Error::DegenerateData("the moving point must leave the line y = 0".into())),
        (Some(oa), Some(ob)) if oa <= ob => {
            return Err(Error::DegenerateData("the moving point must approach along x = 0".into()));
        }
        _ => {}
    }
    let f = f.embed_by_name(ring)?;
    let g = g.embed_by_name(ring)?;
    let x = Polynomial::var(ring, 0);
    let y = Polynomial::var(ring, 1);
    let mut w = alloc::vec![x.mul(&x), y];
    w.extend((2..n).map(|i| Polynomial::var(ring, i)));
    let w = Ideal::new(ring, w);
    if !w.contains(&g) {
        return Err(Error::PathViolatesLocus("g must vanish on the double point".into()));
    }
    let mut images = path.clone();
    images.push(Polynomial::var(ring, t));
    if !g.substitute(&images).is_zero() {
        return Err(Error::PathViolatesLocus("g must vanish along the path".into()));
    }
    let iz = gb::intersect(&w, &moving_point(ring, &path));
    let mut gens = alloc::vec![g.clone()];
    gens.extend(iz.groebner().iter().map(|h| f.mul(h)));
    FamilyOverLine::with_kind(Ideal::new(ring, gens), FamilyKind::CaseD, false)
}

/// `(I_H(f, g), (x - c) f, (y - b) g, (y - d) f - (x - a) g)` with `x, y` the
/// first two variables and `I_H` the rest. The path must lie on the locus
/// `f(A,B) = 0`, `g(C,D) = 0`, `(B-D) g(C,B) - (C-A) f(C,B) = 0` of the plane.
pub fn case_e(ring: &RingRef, f: &Polynomial, g: &Polynomial, path: [&Polynomial; 4]) -> Result<FamilyOverLine, Error> {
    let n = ring.ngeom();
    if n < 2 {
        return Err(Error::Inconsistent("case e needs two plane coordinates".into()));
    }
    let t = ring.param_index().ok_or_else(|| Error::Inconsistent("a family needs a ring with a parameter".into()))?;
    let [a, b, c, d] = path;
    for p in path {
        if p.support_vars() & !(1 << t) != 0 {
            return Err(Error::Inconsistent("path coordinates may only involve the parameter".into()));
        }
        if !path_coeff(p, t, 0).is_zero() {
            return Err(Error::PathViolatesLocus("the path must start at the origin".into()));
        }
    }
    if a == c && b == d {
        return Err(Error::DegenerateData("(a, b) and (c, d) coincide".into()));
    }
    let f = f.embed_by_name(ring)?;
    let g = g.embed_by_name(ring)?;
    let in_plane = |p: &Polynomial, u: &Polynomial, v: &Polynomial| {
        let mut images = alloc::vec![u.clone(), v.clone()];
        images.extend((2..n).map(|_| Polynomial::zero(ring)));
        images.push(Polynomial::var(ring, t));
        p.substitute(&images)
    };
    if !in_plane(&f, a, b).is_zero() {
        return Err(Error::PathViolatesLocus("f(a, b) != 0".into()));
    }
    if !in_plane(&g, c, d).is_zero() {
        return Err(Error::PathViolatesLocus("g(c, d) != 0".into()));
    }
    let mixed = b.sub(d).mul(&in_plane(&g, c, b)).sub(&c.sub(a).mul(&in_plane(&f, c, b)));
    if !mixed.is_zero() {
        return Err(Error::PathViolatesLocus("(b - d) g(c, b) - (c - a) f(c, b) != 0".into()));
    }
    let x = Polynomial::var(ring, 0);
    let y = Polynomial::var(ring, 1);
    let mut gens = Vec::new();
    for i in 2..n {
        let z = Polynomial::var(ring, i);
        gens.push(z.mul(&f));
        gens.push(z.mul(&g));
    }
    gens.push(x.sub(c).mul(&f));
    gens.push(y.sub(b).mul(&g));
    gens.push(y.sub(d).mul(&f).sub(&x.sub(a).mul(&g)));
    FamilyOverLine::with_kind(Ideal::new(ring, gens), FamilyKind::CaseE, false)
}

/// The three support points `(a, b), (c, b), (c, d)` of the case-e fiber at `t = s`.
pub fn case_e_points(ring: &RingRef, path: [&Polynomial; 4], s: &Coeff) -> Vec<Vec<Coeff>> {
    let n = ring.ngeom();
    let k = ring.field();
    let mut at = alloc::vec![k.zero(); ring.nvars()];
    at[ring.param_index().unwrap()] = s.clone();
    let v: Vec<Coeff> = path.iter().map(|p| p.evaluate(&at)).collect();
    [(0, 1), (2, 1), (2, 3)]
        .iter()
        .map(|&(i, j)| {
            let mut p = alloc::vec![k.zero(); n];
            p[0] = v[i].clone();
            p[1] = v[j].clone();
            p
        })
        .collect()
}

/// `f · I_{Z_t}` with `Z_t = Z + shift(t)`, `shift(0) = 0`.
pub fn hypersurface(ring: &RingRef, f: &Polynomial, z: &Ideal, shift: &[Polynomial]) -> Result<FamilyOverLine, Error> {
    check_path(ring, shift)?;
    if !path_start(ring, shift).iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateData("the translation must vanish at t = 0".into()));
    }
    let t = ring.param_index().unwrap();
    let mut images: Vec<Polynomial> = (0..ring.ngeom()).map(|i| Polynomial::var(ring, i).sub(&shift[i])).collect();
    images.push(Polynomial::var(ring, t));
    let f = f.embed_by_name(ring)?;
    let zt = move_ideal(z, ring)?;
    let gens = zt.gens().iter().map(|h| f.mul(&h.substitute(&images))).collect();
    FamilyOverLine::with_kind(Ideal::new(ring, gens), FamilyKind::Hypersurface, false)
}

/// Maximal minors `(m23, -m13, m12)` of a 2x3 matrix.
pub fn signed_minors(m: &[Vec<Polynomial>]) -> [Polynomial; 3] {
    let minor = |i: usize, j: usize| m[0][i].mul(&m[1][j]).sub(&m[0][j].mul(&m[1][i]));
    [minor(1, 2), minor(0, 2).neg(), minor(0, 1)]
}

/// 2x2 minors `p_i x_j - p_j x_i`.
pub fn projective_point_ideal(ring: &RingRef, point: &[Polynomial]) -> Ideal {
    let n = point.len();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(point[i].mul(&Polynomial::var(ring, j)).sub(&point[j].mul(&Polynomial::var(ring, i))));
        }
    }
    Ideal::new(ring, gens)
}

#[derive(Clone, Debug)]
pub struct CiLimitFamily {
    pub family: FamilyOverLine,
    /// `ψ_t` over the parameter ring.
    pub psi: Vec<Vec<Polynomial>>,
    pub lift: Vec<Polynomial>,
    pub path: Vec<Polynomial>,
}

impl CiLimitFamily {
    /// Ideal of `X_s`, the maximal minors of `ψ_s`.
    pub fn base_fiber(&self, s: &Coeff) -> Ideal {
        let geom = self.family.geometric_ring();
        let t = self.family.param();
        let gens = signed_minors(&self.psi).iter().map(|m| m.specialize(t, s, &geom)).collect();
        Ideal::new(&geom, gens)
    }

    pub fn point(&self, s: &Coeff) -> Vec<Coeff> {
        let ring = self.family.ring();
        let mut at = alloc::vec![ring.field().zero(); ring.nvars()];
        at[self.family.param()] = s.clone();
        self.path.iter().map(|p| p.evaluate(&at)).collect()
    }
}

/// The kernels of `I_{X_t} -> k(p_t)` induced by the lift `(A_1, A_2, A_3)`,
/// where `X_t` has Hilbert–Burch matrix `ψ_t = (1 - t) ψ_0 + t ψ_1` and `p_t`
/// follows `path` (projective coordinates in `t`).
pub fn ci_limit_family(
    ring: &RingRef,
    psi0: &[Vec<Polynomial>],
    psi1: &[Vec<Polynomial>],
    lift: &[Polynomial],
    path: &[Polynomial],
) -> Result<CiLimitFamily, Error> {
    check_path(ring, path)?;
    let shape_ok = |m: &[Vec<Polynomial>]| m.len() == 2 && m.iter().all(|r| r.len() == 3);
    if !shape_ok(psi0) || !shape_ok(psi1) || lift.len() != 3 {
        return Err(Error::Inconsistent("expected 2x3 matrices and a lift with three entries".into()));
    }
    let t = ring.param_index().unwrap();
    let tt = Polynomial::var(ring, t);
    let one_minus_t = Polynomial::one(ring).sub(&tt);
    let emb = |p: &Polynomial| p.embed_by_name(ring);
    let mut psi = Vec::new();
    for j in 0..2 {
        let mut row = Vec::new();
        for i in 0..3 {
            row.push(one_minus_t.mul(&emb(&psi0[j][i])?).add(&tt.mul(&emb(&psi1[j][i])?)));
        }
        psi.push(row);
    }
    let psi1r: Vec<Vec<Polynomial>> = psi1.iter().map(|r| r.iter().map(emb).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?;
    let m1: Vec<Polynomial> = signed_minors(&psi1r).into_iter().collect();
    let geom = ring.drop_vars(1 << t, MonomialOrder::Grevlex);
    let zero = ring.field().zero();
    let x1 = Ideal::new(&geom, m1.iter().map(|m| m.specialize(t, &zero, &geom)).collect());
    if x1.gens().iter().all(|g| g.is_zero()) || hilbert::hilbert_polynomial(&x1, false)?.dim + 3 > geom.nvars() as i64 {
        return Err(Error::DegenerateData("the minors of psi1 share a factor".into()));
    }
    let lift: Vec<Polynomial> = lift.iter().map(emb).collect::<Result<_, _>>()?;
    let mut images: Vec<Polynomial> = path.to_vec();
    images.push(tt.clone());
    for row in &psi {
        let s = row.iter().zip(&lift).fold(Polynomial::zero(ring), |acc, (p, a)| acc.add(&p.mul(a)));
        if !s.substitute(&images).is_zero() {
            return Err(Error::NotWellDefined("the lift composed with psi_t does not vanish along the path".into()));
        }
    }
    let pi = signed_minors(&psi);
    let point = projective_point_ideal(ring, path);
    let imgs: Vec<Vector> = lift.iter().map(|a| Vector::new(alloc::vec![a.clone()])).collect();
    let rels: Vec<Vector> = point.gens().iter().map(|g| Vector::new(alloc::vec![g.clone()])).collect();
    let gens: Vec<Polynomial> = gb::module_kernel(&imgs, &rels)
        .iter()
        .map(|v| v.comps().iter().zip(&pi).fold(Polynomial::zero(ring), |acc, (a, p)| acc.add(&a.mul(p))))
        .filter(|p| !p.is_zero())
        .collect();
    let family = FamilyOverLine::with_kind(Ideal::new(ring, gens), FamilyKind::CiLimit, true)?;
    Ok(CiLimitFamily { family, psi, lift, path: path.to_vec() })
}

#[derive(Clone, Debug)]
pub struct CiFiberCheck {
    pub t: Coeff,
    pub point_off_base: bool,
    pub base: HilbertData,
    /// Saturated fiber equals `I_{X_t} ∩ I_{p_t}`.
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct CiLimitReport {
    pub limit: Ideal,
    pub limit_ok: bool,
    pub flatness: FlatnessCertificate,
    pub fibers: Vec<CiFiberCheck>,
}

impl CiLimitReport {
    pub fn passed(&self) -> bool {
        self.limit_ok && self.flatness.verdict && !self.fibers.is_empty() && self.fibers.iter().all(|c| c.point_off_base && c.matches)
    }
}

pub fn verify_ci_limit(cf: &CiLimitFamily, target: &Ideal, samples: usize, sampler: &mut Sampler) -> Result<CiLimitReport, Error> {
    let f = &cf.family;
    let geom = f.geometric_ring();
    let target = move_ideal(target, &geom)?;
    let irrelevant = Ideal::of_vars(&geom, u32::MAX >> (32 - geom.nvars()));
    let limit = gb::saturate(&flat_limit(f), &irrelevant);
    let limit_ok = limit.equals(&gb::saturate(&target, &irrelevant));
    let flatness = flatness_check(f, samples, sampler)?;
    let mut fibers = Vec::new();
    for s in &flatness.sampled_t {
        let base = cf.base_fiber(s);
        let p = cf.point(s);
        let point_off_base = base.gens().iter().any(|g| !g.evaluate(&p).is_zero());
        let coords: Vec<Polynomial> = p.iter().map(|c| Polynomial::constant(&geom, c.clone())).collect();
        let expected = gb::intersect(&base, &projective_point_ideal(&geom, &coords));
        let matches = gb::saturate(&f.fiber(s), &irrelevant).equals(&gb::saturate(&expected, &irrelevant));
        fibers.push(CiFiberCheck { t: s.clone(), point_off_base, base: hilbert::hilbert_polynomial(&base, false)?, matches });
    }
    Ok(CiLimitReport { limit, limit_ok, flatness, fibers })
}

/// Degree-`d` piece (or `≤ d` for affine families) of the limit ideal from
/// `t`-initial forms, by linear algebra on products `t^j m g`, `j ≤ tmax`.
/// Affine families use products of degree up to `d + slack`. The result is
/// always contained in the true piece.
pub fn limit_piece_oracle(f: &FamilyOverLine, d: u32, slack: u32, tmax: u32) -> (MonomialBasis, Matrix) {
    let ring = f.ring();
    let k = ring.field();
    let n = ring.ngeom();
    let t = f.param();
    let all = ((1u64 << n) - 1) as u32;
    let top = if f.projective { d } else { d + slack };
    let layer = MonomialBasis::new(if f.projective { monomials_of_degree(n, all, d) } else { monomials_up_to(n, all, top) });
    let w = layer.len();
    let gens: Vec<&Polynomial> = f.total().gens().iter().filter(|g| !g.is_zero()).collect();
    let tdeg = gens.iter().map(|g| g.var_degree(t)).max().unwrap_or(0);
    let blocks = (tmax + tdeg + 1) as usize;
    let one = k.one();
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.degree_in(all) else { continue };
        if dg > top {
            continue;
        }
        let shifts = if f.projective { monomials_of_degree(n, all, d - dg) } else { monomials_up_to(n, all, top - dg) };
        for m in &shifts {
            for j in 0..=tmax {
                let mut mm = *m;
                mm.set_exp(t, j);
                let p = g.mul_term(&mm, &one);
                let mut row = alloc::vec![k.zero(); blocks * w];
                for (mono, c) in p.terms() {
                    let mut geo = *mono;
                    geo.set_exp(t, 0);
                    let col = layer.position(&geo).expect("product inside the layer");
                    row[mono.exp(t) as usize * w + col] = c.clone();
                }
                rows.push(row);
            }
        }
    }
    let mut big = Matrix::from_rows(k, blocks * w, rows);
    let pivots = big.rref();
    let initial: Vec<Vec<Coeff>> = pivots
        .iter()
        .enumerate()
        .map(|(r, &p)| {
            let b = p / w;
            big.row(r)[b * w..(b + 1) * w].to_vec()
        })
        .collect();
    let space = Matrix::from_rows(k, w, initial).row_space();
    if f.projective {
        (layer, space)
    } else {
        let cut = truncate_rows(&layer, &space, d);
        (MonomialBasis::new(monomials_up_to(n, all, d)), cut)
    }
}

/// The oracle pieces coincide with those of [`flat_limit`] for `d ≤ dmax`.
pub fn limit_oracle_agrees(f: &FamilyOverLine, dmax: u32, slack: u32, tmax: u32) -> bool {
    let limit = flat_limit(f);
    (0..=dmax).all(|d| {
        let (_, a) = limit_piece_oracle(f, d, slack, tmax);
        let (_, b) = piece_by_groebner(&limit, d, !f.projective);
        same_row_space(&a, &b)
    })
}

/// Human-readable name of a geometric point, for reports.
pub fn render_point(ring: &RingRef, p: &[Coeff]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.render(ring.field())).collect();
    alloc::format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::structures::{closed_form_ideal, CaseData, CaseLabel};

    fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect())
    }

    fn polys(r: &RingRef, ps: &[&str]) -> Vec<Polynomial> {
        ps.iter().map(|g| parse_poly(r, g).unwrap()).collect()
    }

    fn setup(vars: &[&str]) -> (RingRef, RingRef) {
        let g = Ring::qq(vars);
        let p = param_ring(&g, "t").unwrap();
        (g, p)
    }

    #[test]
    fn constant_family() {
        let (g, p) = setup(&["x", "y", "z"]);
        let f = FamilyOverLine::new(ideal(&p, &["x", "y"]), false).unwrap();
        assert!(flat_limit(&f).equals(&ideal(&g, &["x", "y"])));
    }

    #[test]
    fn planar_triple_point_limit() {
        let (g, p) = setup(&["x", "y"]);
        let f = FamilyOverLine::new(gb::intersect(&ideal(&p, &["x^2", "y"]), &ideal(&p, &["x-t^2", "y-t"])), false).unwrap();
        assert!(flat_limit(&f).equals(&ideal(&g, &["x^2", "x*y", "y^2"])));
        let cert = flatness_check(&f, 3, &mut Sampler::new(1, 50)).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.generic.polynomial, hilbert::QPoly::from_ints(&[3]));
        assert!(limit_oracle_agrees(&f, 3, 2, 3));
    }

    #[test]
    fn stray_generator_is_saturated_away() {
        let (_, p) = setup(&["x", "y", "z", "w"]);
        let f = FamilyOverLine::new(ideal(&p, &["x", "y", "t*z", "t*w"]), true).unwrap();
        let cert = flatness_check(&f, 3, &mut Sampler::new(2, 50)).unwrap();
        assert!(cert.saturation_changed && cert.verdict);
    }

    #[test]
    fn moving_point_limits() {
        let (g, p) = setup(&["x", "y", "z"]);
        let x = ideal(&g, &["x", "y"]);
        let f = mult1_move_point(&p, &x, &polys(&p, &["t", "0", "0"])).unwrap();
        assert!(flat_limit(&f).equals(&ideal(&g, &["y", "x^2", "x*z"])));
        let y1 = ideal(&g, &["y", "x^2", "x*z"]);
        assert!(matches!(pullone(&p, &x, &y1, &polys(&p, &["t", "0", "0"])), Err(Error::DegenerateData(_))));
        let f = pullone(&p, &x, &y1, &polys(&p, &["0", "t", "0"])).unwrap();
        let target = ideal(&g, &["x^2", "x*y", "y^2", "x*z", "y*z"]);
        assert!(flat_limit(&f).equals(&target));
        // the generic fiber still carries Y1 at the origin
        let rep = verify_detachment(&f, &target, &x, 2, 3, &mut Sampler::new(3, 50)).unwrap();
        assert!(rep.passed() && !rep.fibers_isolated());
        assert_eq!(rep.fibers[0].off_x_length, Some(1));
    }

    #[test]
    fn case_e_family() {
        let (g, p) = setup(&["x", "y", "z"]);
        let f2 = parse_poly(&p, "x^2").unwrap();
        let g2 = parse_poly(&p, "y^2").unwrap();
        let path = polys(&p, &["0", "t", "t", "0"]);
        let fam = case_e(&p, &f2, &g2, [&path[0], &path[1], &path[2], &path[3]]).unwrap();
        let gx = parse_poly(&g, "x").unwrap();
        let gy = parse_poly(&g, "y").unwrap();
        let data = CaseData::DualFatPoint {
            plane: polys(&g, &["z"]),
            x: gx,
            y: gy,
            phi_f: (g.field().zero(), g.field().one()),
            phi_g: (g.field().one(), g.field().zero()),
        };
        let target = closed_form_ideal(CaseLabel::ThreeE, &parse_poly(&g, "x^2").unwrap(), &parse_poly(&g, "y^2").unwrap(), &data).unwrap();
        assert!(target.equals(&ideal(&g, &["x^3", "y^3", "x^2*y-x*y^2", "x^2*z", "y^2*z"])));
        let x = ideal(&g, &["x^2", "y^2"]);
        let rep = verify_detachment(&fam, &target, &x, 3, 2, &mut Sampler::new(4, 30)).unwrap();
        assert!(rep.passed() && rep.fibers_isolated());
        assert_eq!(rep.flatness.generic.polynomial, hilbert::QPoly::from_ints(&[3, 4]));
        let s = &rep.fibers[0].t;
        let pts = case_e_points(&p, [&path[0], &path[1], &path[2], &path[3]], s);
        for q in &pts {
            assert_eq!(local_colength(&x, &rep.fibers[0].fiber, q, &pts).unwrap(), 1);
        }
        let bad = polys(&p, &["0", "t", "2*t", "0"]);
        assert!(matches!(case_e(&p, &f2, &g2, [&bad[0], &bad[1], &bad[2], &bad[3]]), Err(Error::PathViolatesLocus(_))));
    }

    #[test]
    fn tripleline_from_twisted_cubics() {
        let (g, p) = setup(&["x", "y", "z", "w"]);
        let psi0 = alloc::vec![polys(&g, &["y", "-x", "0"]), polys(&g, &["0", "y", "-x"])];
        let psi1 = alloc::vec![polys(&g, &["x", "y", "z"]), polys(&g, &["y", "z", "w"])];
        let lift = polys(&g, &["1", "0", "0"]);
        let cf = ci_limit_family(&p, &psi0, &psi1, &lift, &polys(&p, &["0", "0", "t", "1"])).unwrap();
        let target = ideal(&g, &["x^3", "x^2*z", "x*y", "y^2"]);
        let rep = verify_ci_limit(&cf, &target, 2, &mut Sampler::new(5, 30)).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.flatness.special.polynomial, hilbert::QPoly::from_ints(&[2, 3]));
        assert_eq!(rep.fibers[0].base.polynomial, hilbert::QPoly::from_ints(&[1, 3]));
    }
}
