use std::sync::Arc;

use obstruct::exactla::{Fp, Matrix};
use obstruct::graded::{
    check_associative, check_graded_commutative, mul, tensor_map, tensor_window, Basis, GradedAlgebra,
    GradedAlgebraPresentation, GradedBimodule, GradedMap, GradedRightModule, GradedVectorSpace, Homog,
    PresentationSpec, Regular, ShiftedBimodule, Tensor2,
};
use obstruct::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lambda(window: i64) -> Arc<GradedAlgebraPresentation> {
    let spec: PresentationSpec = serde_json::from_value(serde_json::json!({
        "char": 3,
        "generators": [{"name": "X", "degree": 1}, {"name": "Y", "degree": 2}],
        "relations": [["X*X", "0"], ["Y*X", "X*Y"]],
        "graded_commutative": true,
        "window": window,
    }))
    .unwrap();
    Arc::new(GradedAlgebraPresentation::from_spec(&spec).unwrap())
}

#[test]
fn truncated_polynomial_products() {
    let a = lambda(10);
    let x = a.element("X").unwrap();
    assert!(mul(a.as_ref(), &x, &x).unwrap().is_zero());
    let xy = a.element("X*Y").unwrap();
    let y = a.element("Y").unwrap();
    let p = mul(a.as_ref(), &xy, &y).unwrap();
    // oracle: the normal form word of XY^2 is X, Y, Y in declared order
    let (b, c) = p.support().next().unwrap();
    assert_eq!(p.support().count(), 1);
    assert_eq!(c, 1);
    assert_eq!(a.word(b).unwrap(), &[0, 1, 1]);
    assert_eq!(p, a.element("X*Y*Y").unwrap());
    for d in 0..=10 {
        assert_eq!(a.dim(d).unwrap(), 1, "degree {d}");
    }
}

#[test]
fn products_past_the_window_overflow() {
    let a = lambda(6);
    let y3 = a.element("Y^3").unwrap();
    let y = a.element("Y").unwrap();
    let e = mul(a.as_ref(), &y3, &y).unwrap_err();
    assert!(matches!(e, Error::WindowOverflow { .. }), "{e}");
}

#[test]
fn associative_and_graded_commutative() {
    let a = lambda(10);
    assert!(check_associative(a.as_ref(), 0, 10).unwrap().is_empty());
    assert!(check_graded_commutative(a.as_ref(), 0, 10).unwrap().is_empty());
}

#[test]
fn free_algebra_is_associative_not_commutative() {
    let spec: PresentationSpec = serde_json::from_value(serde_json::json!({
        "char": 5,
        "generators": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1}],
        "window": 5,
    }))
    .unwrap();
    let a = GradedAlgebraPresentation::from_spec(&spec).unwrap();
    assert_eq!((0..=4).map(|d| a.dim(d).unwrap()).collect::<Vec<_>>(), vec![1, 2, 4, 8, 16]);
    assert!(check_associative(&a, 0, 5).unwrap().is_empty());
    assert!(!check_graded_commutative(&a, 0, 2).unwrap().is_empty());
}

#[test]
fn presentation_json_round_trip() {
    let a = lambda(8);
    let text = serde_json::to_string(a.spec()).unwrap();
    let back: PresentationSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, a.spec());
}

#[test]
fn tensor_product_sign() {
    let a = lambda(4);
    let t = tensor_window(a.as_ref(), a.as_ref(), 0, 4).unwrap();
    let x = Basis::new(1, 0);
    let one = Basis::new(0, 0);
    let one_x = t.basis_of(one, x).unwrap();
    let x_one = t.basis_of(x, one).unwrap();
    let x_x = t.basis_of(x, x).unwrap();
    let dim = t.algebra.dim(2).unwrap();
    // (1 (x) X)(X (x) 1) = (-1)^{1*1} X (x) X
    let p = t.algebra.mul_basis(one_x, x_one).unwrap();
    assert_eq!(p, Homog::basis(x_x, dim).scaled(Fp::new(3).unwrap(), 2));
    let q = t.algebra.mul_basis(x_one, one_x).unwrap();
    assert_eq!(q, Homog::basis(x_x, dim));
}

#[test]
fn koszul_sign_on_odd_map_and_element() {
    let f = Fp::new(3).unwrap();
    let v = GradedVectorSpace::new(0, vec![1, 1, 1]);
    let mut id = GradedMap::zero(f, 0, v.clone(), v.clone());
    let mut shift = GradedMap::zero(f, 1, v.clone(), v.clone());
    for d in 0..=2 {
        id.blocks.insert(d, Matrix::identity(f, 1));
        if d < 2 {
            shift.blocks.insert(d, Matrix::identity(f, 1));
        }
    }
    let t = Tensor2 {
        left_deg: 1,
        right_deg: 0,
        coeffs: Matrix::identity(f, 1),
    };
    let out = tensor_map(&id, &shift, &t).unwrap();
    assert_eq!(*out.coeffs.get(0, 0), 2);
    let even = Tensor2 { left_deg: 0, ..t };
    assert_eq!(*tensor_map(&id, &shift, &even).unwrap().coeffs.get(0, 0), 1);
}

#[test]
fn shifted_bimodule_left_action() {
    let a = lambda(6);
    let reg: Arc<dyn GradedBimodule> = Arc::new(Regular(a.clone()));
    let x = Basis::new(1, 0);
    let y = Basis::new(2, 0);
    for shift in [1, 2] {
        let s = ShiftedBimodule {
            inner: reg.clone(),
            shift,
        };
        let one = Basis::new(-shift, 0);
        let lx = s.act_left(x, one).unwrap();
        let ly = s.act_left(y, one).unwrap();
        assert_eq!(lx.coeffs, vec![if shift == 1 { 2 } else { 1 }]);
        assert_eq!(ly.coeffs, vec![1]);
        assert_eq!(s.act_right(one, x).unwrap().coeffs, vec![1]);
    }
}

fn random_map(rng: &mut ChaCha8Rng, f: Fp, degree: i64, s: &GradedVectorSpace, t: &GradedVectorSpace) -> GradedMap {
    let mut m = GradedMap::zero(f, degree, s.clone(), t.clone());
    for d in s.lo..=s.hi() {
        let (r, c) = (t.dim(d + degree), s.dim(d));
        let rows = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..f.p())).collect()).collect::<Vec<Vec<u32>>>();
        let block = if r == 0 || c == 0 { Matrix::zeros(f, r, c) } else { Matrix::from_rows(f, rows).unwrap() };
        m.blocks.insert(d, block);
    }
    m
}

fn random_space(rng: &mut ChaCha8Rng) -> GradedVectorSpace {
    GradedVectorSpace::new(-1, (0..5).map(|_| rng.gen_range(0..3)).collect())
}

proptest! {
    #[test]
    fn tensor_map_composition(seed in any::<u64>(), degs in prop::collection::vec(-1i64..=1, 4), i in -1i64..=3, j in -1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Fp::new(5).unwrap();
        let (v0, v1, v2) = (random_space(&mut rng), random_space(&mut rng), random_space(&mut rng));
        let (w0, w1, w2) = (random_space(&mut rng), random_space(&mut rng), random_space(&mut rng));
        let ff = random_map(&mut rng, f, degs[0], &v0, &v1);
        let ff2 = random_map(&mut rng, f, degs[1], &v1, &v2);
        let g = random_map(&mut rng, f, degs[2], &w0, &w1);
        let g2 = random_map(&mut rng, f, degs[3], &w1, &w2);
        let (r, c) = (v0.dim(i), w0.dim(j));
        let rows: Vec<Vec<u32>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..5)).collect()).collect();
        let t = Tensor2 {
            left_deg: i,
            right_deg: j,
            coeffs: if r == 0 || c == 0 { Matrix::zeros(f, r, c) } else { Matrix::from_rows(f, rows).unwrap() },
        };
        let step = tensor_map(&ff, &g, &t);
        let Ok(step) = step else { return Ok(()) };
        let Ok(lhs) = tensor_map(&ff2, &g2, &step) else { return Ok(()) };
        let rhs = tensor_map(&ff2.compose(&ff).unwrap(), &g2.compose(&g).unwrap(), &t).unwrap();
        let sign = f.sign(degs[3] * degs[0]);
        prop_assert_eq!(lhs.coeffs, rhs.coeffs.scale(&sign));
    }

    #[test]
    fn multiplication_is_associative_on_random_elements(seed in any::<u64>(), da in 0i64..4, db in 0i64..4, dc in 0i64..4) {
        let a = lambda(12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = a.field();
        let mut el = |d: i64| Homog { deg: d, coeffs: (0..a.dim(d).unwrap()).map(|_| rng.gen_range(0..f.p())).collect() };
        let (x, y, z) = (el(da), el(db), el(dc));
        let l = mul(a.as_ref(), &mul(a.as_ref(), &x, &y).unwrap(), &z).unwrap();
        let r = mul(a.as_ref(), &x, &mul(a.as_ref(), &y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }
}

#[test]
fn regular_module_label_and_dim() {
    let a = lambda(6);
    let r = Regular(a.clone());
    assert_eq!(r.dim(3).unwrap(), 1);
    assert_eq!(r.label(Basis::new(0, 0)), a.label(Basis::new(0, 0)));
}
