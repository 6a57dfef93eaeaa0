use std::sync::Arc;

use obstruct::dgcore::{quasi_iso_check, ChainMap, CochainComplex, DgAlgebra};
use obstruct::exactla::{Fp, Matrix};
use obstruct::graded::Homog;
use obstruct::groupcohom::{coresolution, CyclicEnd, CyclicGroup};
use proptest::prelude::*;

// T on k[T]/(T^r) written out by hand: ones on the subdiagonal
fn shift_matrix(f: Fp, r: usize, k: usize) -> Matrix<Fp> {
    let rows = (0..r).map(|i| (0..r).map(|j| u32::from(i == j + k)).collect()).collect();
    Matrix::from_rows(f, rows).unwrap()
}

#[test]
fn coresolution_differentials_for_order_three() {
    let g = CyclicGroup::new(3).unwrap();
    let f = g.field();
    let y = coresolution(g, 4).unwrap();
    assert_eq!(y.differential(0).unwrap(), &shift_matrix(f, 3, 1));
    assert_eq!(y.differential(1).unwrap(), &shift_matrix(f, 3, 2).scale(&2));
    assert_eq!(y.differential(2).unwrap(), &shift_matrix(f, 3, 1));
}

#[test]
fn coresolution_for_order_two_alternates_t() {
    let g = CyclicGroup::new(2).unwrap();
    let y = coresolution(g, 3).unwrap();
    let t = shift_matrix(g.field(), 2, 1);
    for p in 0..3 {
        assert_eq!(y.differential(p).unwrap(), &t);
    }
}

#[test]
fn coresolution_squares_to_zero_and_resolves_the_trivial_module() {
    for r in [2, 3, 4, 5, 9] {
        let g = CyclicGroup::new(r).unwrap();
        let y = coresolution(g, 6).unwrap();
        for p in 0..5 {
            let dd = y.differential(p + 1).unwrap().mul(y.differential(p).unwrap()).unwrap();
            assert!(dd.is_zero(), "order {r}, position {p}");
        }
        // invariants of the trivial module: kernel of d^0 is one dimensional
        assert_eq!(y.differential(0).unwrap().kernel().len(), 1);
    }
}

#[test]
fn end_algebra_cohomology_is_one_dimensional() {
    for r in [2, 3, 4, 5, 9] {
        let end = CyclicEnd::new(CyclicGroup::new(r).unwrap(), 6).unwrap();
        let h = end.dga.complex().cohomology().unwrap();
        for n in 0..=6 {
            assert_eq!(h.dim(n), 1, "order {r}, degree {n}");
        }
        assert!(end.dga.check_leibniz().is_empty());
        assert!(end.dga.check_associativity().is_empty());
        assert!(end.dga.check_unit().unwrap());
    }
}

#[test]
fn explicit_cycles_for_order_three() {
    let end = CyclicEnd::new(CyclicGroup::new(3).unwrap(), 6).unwrap();
    let a = &end.dga;
    let f = a.field();
    let (x, y, q) = (end.x().unwrap(), end.y().unwrap(), end.q().unwrap());
    assert!(a.d(&x).unwrap().is_zero());
    assert!(a.d(&y).unwrap().is_zero());
    let xx = a.mul(&x, &x).unwrap();
    let dq = a.d(&q).unwrap();
    // x^2 is null-homotopic through q, up to sign
    assert!(dq == xx || dq == xx.neg(f), "dq = {dq:?}, x^2 = {xx:?}");
    let h = a.complex().cohomology().unwrap();
    assert!(h.project(&xx).unwrap().is_zero());
    let xy = a.mul(&x, &y).unwrap();
    let yx = a.mul(&y, &x).unwrap();
    assert_eq!(h.project(&xy).unwrap(), h.project(&yx).unwrap());
    assert!(!h.project(&xy).unwrap().is_zero());
}

#[test]
fn order_two_squares_x_to_y() {
    let end = CyclicEnd::new(CyclicGroup::new(2).unwrap(), 6).unwrap();
    let x = end.x().unwrap();
    assert_eq!(end.dga.mul(&x, &x).unwrap(), end.y().unwrap());
}

#[test]
fn cone_of_identity_is_acyclic() {
    let y = coresolution(CyclicGroup::new(3).unwrap(), 4).unwrap();
    let c = y.cone_of_identity().unwrap();
    for p in c.lo..c.hi() - 1 {
        let dd = c.differential(p + 1).unwrap().mul(c.differential(p).unwrap()).unwrap();
        assert!(dd.is_zero());
    }
    // exact in the interior: rank d_{p-1} + rank d_p = dim
    for p in c.lo + 1..c.hi() {
        let dim = c.term(p).unwrap().dim;
        assert_eq!(c.differential(p - 1).unwrap().rank() + c.differential(p).unwrap().rank(), dim, "position {p}");
    }
}

#[test]
fn complex_json_round_trip() {
    let end = CyclicEnd::new(CyclicGroup::new(3).unwrap(), 3).unwrap();
    let c = end.dga.complex();
    let back = CochainComplex::from_json(&c.to_json()).unwrap();
    assert_eq!(back.to_json(), c.to_json());
    let a = DgAlgebra::from_json(&end.dga.to_json()).unwrap();
    assert_eq!(a.to_json(), end.dga.to_json());
}

#[test]
fn identity_is_a_quasi_isomorphism() {
    let end = CyclicEnd::new(CyclicGroup::new(3).unwrap(), 3).unwrap();
    let c = end.dga.complex();
    let f = c.field();
    let blocks = (c.lo()..=c.hi()).map(|n| (n, Matrix::identity(f, c.dim(n)))).collect();
    let id = ChainMap { blocks };
    id.check(c, c).unwrap();
    assert!(quasi_iso_check(&id, c, c, 0, 3).unwrap().is_quasi_iso);
}

#[test]
fn degree_zero_composition_matches_homotopy_classes() {
    // H^0 End is spanned by the identity; composing representatives
    // agrees with the product of classes
    let end = Arc::new(CyclicEnd::new(CyclicGroup::new(3).unwrap(), 4).unwrap());
    let a = &end.dga;
    let h = a.complex().cohomology().unwrap();
    let one = a.unit().clone();
    let z = h.rep(0, 0).unwrap();
    let zz = a.mul(&z, &z).unwrap();
    assert_eq!(h.project(&zz).unwrap(), h.project(&a.mul(&z, &one).unwrap()).unwrap());
    assert_eq!(h.project(&one).unwrap(), Homog { deg: 0, coeffs: vec![1] });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn leibniz_on_random_elements(seed in any::<u64>(), da in 0i64..3, db in 0i64..3) {
        use rand::{Rng, SeedableRng};
        let end = CyclicEnd::new(CyclicGroup::new(3).unwrap(), 4).unwrap();
        let a = &end.dga;
        let f = a.field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut el = |d: i64| Homog { deg: d, coeffs: (0..a.dim(d)).map(|_| rng.gen_range(0..3)).collect() };
        let (x, y) = (el(da), el(db));
        let lhs = a.d(&a.mul(&x, &y).unwrap()).unwrap();
        let mut rhs = a.mul(&a.d(&x).unwrap(), &y).unwrap();
        rhs.add_scaled(f, f.sign(da), &a.mul(&x, &a.d(&y).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.d(&a.d(&x).unwrap()).unwrap().is_zero());
    }
}
