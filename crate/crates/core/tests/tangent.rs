use detachlab_core::expr::parse_poly;
use detachlab_core::gb::{self, Ideal};
use detachlab_core::hilbert::hilbert_function;
use detachlab_core::tangent::{hom_dim, quotient_dim, verify_hom_space};
use detachlab_core::{Ring, RingRef};

fn p3() -> RingRef {
    Ring::qq(&["x", "y", "z", "w"])
}

fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect())
}

fn saturated(i: &Ideal) -> Ideal {
    gb::saturate(i, &Ideal::of_vars(i.ring(), 0b1111))
}

#[test]
fn plane_cubic_with_isolated_point() {
    let r = p3();
    let i = ideal(&r, &["w*x", "w*y", "w*z", "x^3+y^3+z^3"]);
    let h = hom_dim(&i).unwrap();
    assert_eq!(h.dimension, 15);
    assert!(verify_hom_space(&i, &h));
}

#[test]
fn complete_intersection_of_quadrics() {
    let r = p3();
    let i = ideal(&r, &["x*y-z*w", "x^2+y^2-z^2-w^2"]);
    let h = hom_dim(&i).unwrap();
    assert_eq!(h.dimension, 16);
    // normal bundle O(2) + O(2): two copies of (S/I)_2
    let hf = hilbert_function(&i, 2).unwrap();
    assert_eq!(h.dimension as i64, 2 * i64::try_from(hf).unwrap());
    assert_eq!(quotient_dim(&i, 2), 8);
}

#[test]
fn plane_quartic_with_embedded_point() {
    let r = p3();
    for f in ["x^4+y^4", "x*w^3+y^4+x^4", "x^3*w+x*y^2*w+y^4"] {
        let i = ideal(&r, &["x*z", "y*z", "z^2", f]);
        let h = hom_dim(&i).unwrap();
        assert_eq!(h.dimension, 20, "{f}");
        assert!(verify_hom_space(&i, &h));
    }
    // λ ≠ 0 in f - λ z w^3
    let i = ideal(&r, &["x*z", "y*z", "z^2", "x*w^3+y^4+x^4-2*z*w^3"]);
    assert_eq!(hom_dim(&i).unwrap().dimension, 20);
}

#[test]
fn double_embedded_points_on_a_plane_quartic() {
    let r = p3();
    let f = "x*w^3+y^4+x^4";
    // type (a): m_p (z, F)
    let a = saturated(&ideal(&r, &["x*z", "y*z", "z^2", &format!("x*({f})"), &format!("y*({f})")]));
    let ha = hom_dim(&a).unwrap();
    // type (b): (F, z I_Z) with Z = (x, y^2, z) tangent to the quartic
    let b = saturated(&ideal(&r, &[f, "x*z", "y^2*z", "z^2"]));
    let hb = hom_dim(&b).unwrap();
    assert_eq!(hb.dimension, 23);
    assert!(ha.dimension > 23);
    // regression value
    assert_eq!(ha.dimension, 24);
}
