use detachlab_core::expr::parse_poly;
use detachlab_core::families::*;
use detachlab_core::gb::{self, Ideal};
use detachlab_core::hilbert::QPoly;
use detachlab_core::sample::Sampler;
use detachlab_core::structures::{closed_form_ideal, hypersurface_closed_form, CaseData, CaseLabel};
use detachlab_core::{Error, Polynomial, Ring, RingRef};

fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect())
}

fn polys(r: &RingRef, ps: &[&str]) -> Vec<Polynomial> {
    ps.iter().map(|g| parse_poly(r, g).unwrap()).collect()
}

fn a3() -> (RingRef, RingRef) {
    let g = Ring::qq(&["x", "y", "z"]);
    let p = param_ring(&g, "t").unwrap();
    (g, p)
}

#[test]
fn curvilinear_pair_on_the_x_axis() {
    let (g, p) = a3();
    let x = ideal(&g, &["x^2", "y^2"]);
    let paths = vec![polys(&p, &["t", "0", "0"]), polys(&p, &["-t", "0", "0"])];
    let f = curvilinear(&p, &x, &paths).unwrap();
    let target = ideal(&g, &["y^2", "x^4", "x^2*y", "x^2*z"]);
    let rep = verify_detachment(&f, &target, &x, 2, 3, &mut Sampler::new(11, 40)).unwrap();
    assert!(rep.passed() && rep.fibers_isolated(), "{:?}", rep.limit.groebner());
    assert!(limit_oracle_agrees(&f, 3, 2, 3));
}

#[test]
fn case_d_on_two_squares() {
    let (g, p) = a3();
    let fy = parse_poly(&p, "y^2").unwrap();
    let gx = parse_poly(&p, "x^2").unwrap();
    let [a, b] = [parse_poly(&p, "0").unwrap(), parse_poly(&p, "t").unwrap()];
    let f = case_d(&p, &fy, &gx, &a, &b).unwrap();
    let z = ideal(&g, &["x^2", "x*y", "y^2", "z"]);
    let target = closed_form_ideal(CaseLabel::ThreeD, &parse_poly(&g, "y^2").unwrap(), &parse_poly(&g, "x^2").unwrap(), &CaseData::Structure(z)).unwrap();
    let x = ideal(&g, &["x^2", "y^2"]);
    let rep = verify_detachment(&f, &target, &x, 3, 3, &mut Sampler::new(12, 40)).unwrap();
    assert!(rep.passed(), "{:?}", rep.limit.groebner());
    // the path must keep x^2 = 0
    let b2 = parse_poly(&p, "t^2").unwrap();
    assert!(matches!(case_d(&p, &fy, &gx, &b2, &b), Err(Error::PathViolatesLocus(_))));
}

#[test]
fn planar_triple_point_verifies() {
    let g = Ring::qq(&["x", "y"]);
    let p = param_ring(&g, "t").unwrap();
    let zero = Polynomial::zero(&p);
    let one = Polynomial::one(&p);
    let f = case_d(&p, &one, &zero, &parse_poly(&p, "t^2").unwrap(), &parse_poly(&p, "t").unwrap()).unwrap();
    let rep = verify_detachment(&f, &ideal(&g, &["x^2", "x*y", "y^2"]), &Ideal::unit(&g), 3, 3, &mut Sampler::new(13, 40)).unwrap();
    assert!(rep.passed() && rep.fibers_isolated());
    assert_eq!(rep.flatness.special.polynomial, QPoly::from_ints(&[3]));
    // tangent to y = 0 is rejected
    assert!(matches!(case_d(&p, &one, &zero, &parse_poly(&p, "t").unwrap(), &parse_poly(&p, "t^2").unwrap()), Err(Error::DegenerateData(_))));
}

#[test]
fn hypersurface_detachment() {
    let (g, p) = a3();
    let z = ideal(&g, &["x^2", "x*y", "y^2", "z"]);
    let fz = parse_poly(&g, "z").unwrap();
    let f = hypersurface(&p, &fz, &z, &polys(&p, &["0", "0", "t"])).unwrap();
    let target = hypersurface_closed_form(&fz, &z);
    let rep = verify_detachment(&f, &target, &ideal(&g, &["z"]), 3, 3, &mut Sampler::new(14, 40)).unwrap();
    assert!(rep.passed() && rep.fibers_isolated());
    assert!(limit_oracle_agrees(&f, 3, 2, 2));
}

#[test]
fn degenerate_case_e_path() {
    let (g, p) = a3();
    let f = parse_poly(&p, "x^2-x*y").unwrap();
    let gz = parse_poly(&p, "z").unwrap();
    let path = polys(&p, &["0", "t", "t", "t"]);
    let fam = case_e(&p, &f, &gz, [&path[0], &path[1], &path[2], &path[3]]).unwrap();
    let x = ideal(&g, &["x^2-x*y", "z"]);
    let limit = flat_limit(&fam);
    let data = CaseData::DualFatPoint {
        plane: polys(&g, &["z"]),
        x: parse_poly(&g, "x").unwrap(),
        y: parse_poly(&g, "y").unwrap(),
        phi_f: (g.field().zero(), g.field().one()),
        phi_g: (g.field().one(), g.field().zero()),
    };
    let target = closed_form_ideal(CaseLabel::ThreeE, &parse_poly(&g, "x^2-x*y").unwrap(), &parse_poly(&g, "z").unwrap(), &data).unwrap();
    let rep = verify_detachment(&fam, &target, &x, 3, 2, &mut Sampler::new(15, 40)).unwrap();
    assert!(rep.passed(), "{:?}", limit.groebner());
    assert!(!rep.fibers_isolated());
    let s = &rep.fibers[0].t;
    let pts = case_e_points(&p, [&path[0], &path[1], &path[2], &path[3]], s);
    let fiber = &rep.fibers[0].fiber;
    assert_eq!(local_colength(&x, fiber, &pts[0], &pts).unwrap(), 1);
    assert_eq!(local_colength(&x, fiber, &pts[1], &pts).unwrap(), 2);
}

#[test]
fn extremal_quartics_from_quadric_intersections() {
    let g = Ring::qq(&["x", "y", "z", "w"]);
    let p = param_ring(&g, "t").unwrap();
    // (xz, yz, F): three lines in z = 0 and the line x = y = 0
    let psi0 = vec![polys(&g, &["z", "x*w+y*z", "w^2"]), polys(&g, &["0", "x", "y"])];
    // a unit entry: the cubic generator becomes redundant
    let psi1 = vec![polys(&g, &["y", "z*w-y*w", "x^2+z*w"]), polys(&g, &["1", "x+z", "x-y"])];
    let lift = polys(&g, &["0", "w^2", "0"]);
    let cf = ci_limit_family(&p, &psi0, &psi1, &lift, &polys(&p, &["-t^2", "t", "t", "1"])).unwrap();
    let c0 = ideal(&g, &["x*z", "y*z", "x*y*w+y^2*z-x*w^2"]);
    assert_eq!(detachlab_core::hilbert::hilbert_polynomial(&c0, false).unwrap().polynomial, QPoly::from_ints(&[0, 4]));
    let target = ideal(&g, &["x*z", "x*y*w+y^2*z-x*w^2", "x*y*z", "y^2*z", "y*z^2"]);
    let rep = verify_ci_limit(&cf, &target, 2, &mut Sampler::new(16, 30)).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!(rep.fibers[0].base.polynomial, QPoly::from_ints(&[0, 4]));
    let quadrics = detachlab_core::tangent::minimal_generators(&cf.base_fiber(&rep.fibers[0].t)).unwrap();
    assert!(quadrics.len() == 2 && quadrics.iter().all(|q| q.degree() == Some(2)));
}

#[test]
fn lift_must_vanish_along_the_path() {
    let (g, p) = (Ring::qq(&["x", "y", "z", "w"]), param_ring(&Ring::qq(&["x", "y", "z", "w"]), "t").unwrap());
    let psi0 = vec![polys(&g, &["y", "-x", "0"]), polys(&g, &["0", "y", "-x"])];
    let psi1 = vec![polys(&g, &["x", "y", "z"]), polys(&g, &["y", "z", "w"])];
    let lift = polys(&g, &["1", "0", "0"]);
    let r = ci_limit_family(&p, &psi0, &psi1, &lift, &polys(&p, &["t", "0", "0", "1"]));
    assert!(matches!(r, Err(Error::NotWellDefined(_))));
    let flat = vec![polys(&g, &["x", "y", "0"]), polys(&g, &["x", "y", "0"])];
    let r = ci_limit_family(&p, &psi0, &flat, &lift, &polys(&p, &["0", "0", "t", "1"]));
    assert!(matches!(r, Err(Error::DegenerateData(_))));
}

#[test]
fn identical_matrices_give_a_constant_base() {
    let g = Ring::qq(&["x", "y", "z", "w"]);
    let p = param_ring(&g, "t").unwrap();
    let psi0 = vec![polys(&g, &["y", "-x", "0"]), polys(&g, &["0", "y", "-x"])];
    let lift = polys(&g, &["1", "0", "0"]);
    let cf = ci_limit_family(&p, &psi0, &psi0, &lift, &polys(&p, &["0", "0", "0", "1"])).unwrap();
    let limit = flat_limit(&cf.family);
    let target = ideal(&g, &["x^3", "x^2*z", "x*y", "y^2"]);
    let irr = Ideal::of_vars(&g, 0b1111);
    assert!(gb::saturate(&limit, &irr).equals(&target));
}
