use detachlab_core::expr::parse_poly;
use detachlab_core::gb::{self, Ideal};
use detachlab_core::graded::{piece_by_groebner, piece_by_linear_algebra};
use detachlab_core::hilbert::{colength, hilbert_polynomial, length};
use detachlab_core::structures::{kernel_ideal, standard_case, CaseLabel};
use detachlab_core::{Monomial, MonomialOrder, Polynomial, Ring, RingRef};
use proptest::prelude::*;

type Terms = Vec<(i64, [u32; 4])>;

fn term() -> impl Strategy<Value = (i64, [u32; 4])> {
    (-3i64..=3, prop::array::uniform4(0u32..=3)).prop_filter("degree at most 3", |(c, e)| *c != 0 && e.iter().sum::<u32>() <= 3)
}

fn gens_strategy() -> impl Strategy<Value = (usize, Vec<Terms>)> {
    (2usize..=4, prop::collection::vec(prop::collection::vec(term(), 1..4), 2..4))
}

fn build(ring: &RingRef, n: usize, terms: &Terms) -> Polynomial {
    let k = ring.field();
    let ts = terms
        .iter()
        .map(|(c, e)| {
            let mut m = Monomial::one();
            for (i, &x) in e.iter().enumerate().take(n) {
                m.set_exp(i, x);
            }
            (m, k.from_i64(*c))
        })
        .collect();
    Polynomial::from_terms(ring, ts)
}

fn ring_of(n: usize, order: MonomialOrder) -> RingRef {
    Ring::qq(&["a", "b", "c", "d"][..n]).with_order(order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reduced_basis_ignores_generator_order((n, gs) in gens_strategy(), seed in any::<u64>()) {
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let r = ring_of(n, order);
            let mut polys: Vec<Polynomial> = gs.iter().map(|t| build(&r, n, t)).collect();
            let first = gb::reduced_gb(&polys);
            let len = polys.len();
            polys.rotate_left((seed as usize) % len);
            if seed & 1 == 1 {
                polys.reverse();
            }
            prop_assert_eq!(&gb::reduced_gb(&polys), &first);
            prop_assert!(gb::is_groebner(&first));
            for p in &polys {
                prop_assert!(gb::normal_form(p, &first).is_zero());
            }
        }
    }

    #[test]
    fn graded_pieces_agree_with_linear_algebra((n, gs) in gens_strategy()) {
        let r = ring_of(n, MonomialOrder::Grevlex);
        let polys: Vec<Polynomial> = gs.iter().map(|t| build(&r, n, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!polys.is_empty());
        let homog: Vec<Polynomial> = polys.iter().map(|p| p.component_in(u32::MAX >> (32 - n), p.degree().unwrap())).collect();
        let i = Ideal::new(&r, homog.clone());
        for d in 0..=5 {
            let (_, a) = piece_by_linear_algebra(&r, &homog, d, false);
            let (_, b) = piece_by_groebner(&i, d, false);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn hilbert_polynomial_is_invariant_under_linear_changes((n, gs) in gens_strategy(), shear in -3i64..=3) {
        let r = ring_of(n, MonomialOrder::Grevlex);
        let polys: Vec<Polynomial> = gs.iter().map(|t| build(&r, n, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!polys.is_empty());
        let homog: Vec<Polynomial> = polys.iter().map(|p| p.component_in(u32::MAX >> (32 - n), p.degree().unwrap())).collect();
        let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&r, i)).collect();
        images[0] = images[0].add(&Polynomial::var(&r, 1).scale(&r.field().from_i64(shear)));
        images.swap(1, n - 1);
        let moved: Vec<Polynomial> = homog.iter().map(|p| p.substitute(&images)).collect();
        let a = hilbert_polynomial(&Ideal::new(&r, homog), false).unwrap();
        let b = hilbert_polynomial(&Ideal::new(&r, moved), false).unwrap();
        prop_assert_eq!(a.polynomial, b.polynomial);
    }
}

fn a3() -> RingRef {
    Ring::qq(&["x", "y", "z"])
}

fn base() -> Ideal {
    let r = a3();
    Ideal::new(&r, vec![parse_poly(&r, "x^2").unwrap(), parse_poly(&r, "y^2").unwrap()])
}

#[test]
fn colength_is_additive_over_census_structures() {
    let x = base();
    let ring = x.ring().clone();
    let p = Ideal::of_vars(&ring, 0b111);
    for case in CaseLabel::ALL {
        let (spec, _) = standard_case(case, &x).unwrap();
        let y = kernel_ideal(&spec).unwrap();
        let step = colength(&x, &y).unwrap();
        assert_eq!(step as usize, case.length(), "{case}");
        // I_Y ⊇ I_Y ∩ m^4 ⊇ I_X ∩ m^4 splits both ways
        let m4 = gb::product(&gb::product(&p, &p), &gb::product(&p, &p));
        let y4 = gb::intersect(&y, &m4);
        let x4 = gb::intersect(&x, &m4);
        assert_eq!(colength(&x4, &y4).unwrap() + colength(&x, &x4).unwrap(), colength(&x, &y).unwrap() + colength(&y, &y4).unwrap());
    }
}

#[test]
fn colength_adds_along_chains_of_fat_points() {
    let r = a3();
    let ideal = |gs: &[&str]| Ideal::new(&r, gs.iter().map(|g| parse_poly(&r, g).unwrap()).collect());
    let chain = [ideal(&["x", "y", "z"]), ideal(&["x^2", "y", "z"]), ideal(&["x^2", "x*y", "y^2", "z"]), ideal(&["x^3", "x*y", "y^2", "z"])];
    for i in 0..chain.len() {
        for j in i..chain.len() {
            for k in j..chain.len() {
                let lhs = colength(&chain[i], &chain[k]).unwrap();
                assert_eq!(lhs, colength(&chain[i], &chain[j]).unwrap() + colength(&chain[j], &chain[k]).unwrap());
            }
        }
        assert_eq!(length(&chain[i]).unwrap(), colength(&Ideal::unit(&r), &chain[i]).unwrap());
    }
}
