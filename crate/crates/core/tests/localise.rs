use std::sync::Arc;

use obstruct::exactla::Matrix;
use obstruct::graded::{apply_map, basis_in, mul, GradedAlgebra, GradedAlgebraPresentation, Homog, ModuleGenerator, ModulePresentation, PresentationSpec};
use obstruct::groupcohom::{cohomology_ring, cyclic_m3, CyclicGroup};
use obstruct::hochschild::{Cochain, DecideOptions};
use obstruct::localise::{local_global_check, local_verdict, probe_prime, supported_primes, GradedPrime, LocalisedAlgebra};
use obstruct::Error;
use proptest::prelude::*;

fn presented(json: serde_json::Value) -> Arc<GradedAlgebraPresentation> {
    let spec: PresentationSpec = serde_json::from_value(json).unwrap();
    Arc::new(GradedAlgebraPresentation::from_spec(&spec).unwrap())
}

fn lambda(window: i64) -> Arc<GradedAlgebraPresentation> {
    Arc::new(cohomology_ring(CyclicGroup::new(3).unwrap(), window).unwrap())
}

fn tate(window: i64) -> (Arc<GradedAlgebraPresentation>, Arc<LocalisedAlgebra>) {
    let r = lambda(window);
    let t = Arc::new(LocalisedAlgebra::new(r.clone(), &["Y".to_string()]).unwrap());
    (r, t)
}

fn names(p: &[GradedPrime]) -> Vec<String> {
    let mut v: Vec<String> = p.iter().map(GradedPrime::label).collect();
    v.sort();
    v
}

/// The element `u` of `T_{-e}` with `u * s/1 = 1`, by scanning the basis.
fn inverse(t: &LocalisedAlgebra, s: &Homog) -> Homog {
    let f = t.field();
    let s1 = t.image(s).unwrap();
    let one = Homog::basis(t.unit(), t.dim(0).unwrap());
    let dim = t.dim(-s.deg).unwrap();
    let cols: Vec<Vec<u32>> = (0..dim)
        .map(|k| mul(t, &Homog::basis(obstruct::graded::Basis::new(-s.deg, k), dim), &s1).unwrap().coeffs)
        .collect();
    let m = Matrix::from_columns(f, one.coeffs.len(), &cols).unwrap();
    let sol = m.solve(&one.coeffs).unwrap().expect("s/1 is a unit");
    Homog { deg: -s.deg, coeffs: sol.particular }
}

#[test]
fn tate_ring_is_periodic() {
    let (_, t) = tate(16);
    for d in -10..=10 {
        assert_eq!(t.dim(d).unwrap(), 1, "degree {d}");
    }
    assert!(!t.is_zero() && !t.is_identity());
    let s = t.summary();
    assert_eq!(s.period, 2);
    assert_eq!(s.element.as_deref(), Some("Y"));
    use obstruct::graded::Basis;
    assert_eq!(t.label(Basis::new(2, 0)), "Y");
    assert_eq!(t.label(Basis::new(0, 0)), "1");
    assert_eq!(t.label(Basis::new(-2, 0)), "Y^-1");
    assert_eq!(t.label(Basis::new(-1, 0)), "X*Y^-1");
}

#[test]
fn fractions_cancel() {
    let (r, t) = tate(16);
    let y = r.element("Y").unwrap();
    let yinv = inverse(&t, &y);
    for e in ["1", "X", "Y", "X*Y", "Y^3", "X*Y^2"] {
        let a = r.element(e).unwrap();
        // (a / Y) * (Y / 1) = a / 1
        let frac = mul(t.as_ref(), &t.image(&a).unwrap(), &yinv).unwrap();
        let back = mul(t.as_ref(), &frac, &t.image(&y).unwrap()).unwrap();
        assert_eq!(back, t.image(&a).unwrap(), "{e}");
    }
    // Y^-1 * Y^-1 * Y^2 = 1
    let y2 = t.image(&r.element("Y^2").unwrap()).unwrap();
    let p = mul(t.as_ref(), &mul(t.as_ref(), &yinv, &yinv).unwrap(), &y2).unwrap();
    assert_eq!(p, Homog::basis(t.unit(), 1));
}

#[test]
fn odd_elements_are_squared() {
    let (_, t) = tate(16);
    let r = lambda(16);
    let t2 = LocalisedAlgebra::new(r, &["X*Y".to_string()]).unwrap();
    // (XY)^2 = 0, so inverting XY kills everything
    assert!(t2.is_zero());
    assert!(!t.is_zero());
}

#[test]
fn nilpotent_inversion_gives_the_zero_ring() {
    let r = presented(serde_json::json!({
        "char": 5,
        "generators": [{"name": "u", "degree": 2}],
        "relations": [["u^3", "0"]],
        "graded_commutative": true,
        "window": 12,
    }));
    let t = Arc::new(LocalisedAlgebra::new(r.clone(), &["u".to_string()]).unwrap());
    assert!(t.is_zero());
    for d in -4..=4 {
        assert_eq!(t.dim(d).unwrap(), 0);
    }
    let img = apply_map(t.can().as_ref(), &r.element("u").unwrap(), 0, r.field()).unwrap();
    assert!(img.is_zero());
}

#[test]
fn inverting_one_is_the_identity() {
    let r = lambda(8);
    for s in [vec![], vec!["1".to_string()]] {
        let t = Arc::new(LocalisedAlgebra::new(r.clone(), &s).unwrap());
        assert!(t.is_identity());
        for d in 0..=8 {
            assert_eq!(t.dim(d).unwrap(), r.dim(d).unwrap());
        }
        assert_eq!(t.dim(-1).unwrap(), 0);
        let y = r.element("X*Y").unwrap();
        assert_eq!(t.image(&y).unwrap(), y);
    }
}

#[test]
fn negative_generators_are_rejected() {
    let spec: PresentationSpec = serde_json::from_value(serde_json::json!({
        "char": 3,
        "generators": [{"name": "v", "degree": -2}],
        "window": 8,
    }))
    .unwrap();
    let e = GradedAlgebraPresentation::from_spec(&spec).err().unwrap();
    assert!(matches!(e, Error::InvalidInput(_)), "{e}");
}

/// Rank of multiplication by `s^k` out of `R_d`, for the largest `k`
/// keeping the target in the window: the part of `R_d` not killed by a
/// power of `s`.
fn surviving_rank(r: &GradedAlgebraPresentation, s: &Homog, d: i64) -> usize {
    let dim = r.dim(d).unwrap();
    if dim == 0 {
        return 0;
    }
    let mut cols: Vec<Homog> = (0..dim).map(|k| Homog::basis(obstruct::graded::Basis::new(d, k), dim)).collect();
    while cols[0].deg + s.deg <= r.window() {
        cols = cols.iter().map(|c| mul(r, c, s).unwrap()).collect();
    }
    let n = r.dim(cols[0].deg).unwrap();
    if n == 0 {
        return 0;
    }
    let cols: Vec<Vec<u32>> = cols.into_iter().map(|c| c.coeffs).collect();
    Matrix::from_columns(r.field(), n, &cols).unwrap().rank()
}

fn can_rank(t: &Arc<LocalisedAlgebra>, r: &GradedAlgebraPresentation, d: i64) -> usize {
    let dim = r.dim(d).unwrap();
    if dim == 0 {
        return 0;
    }
    let can = t.can();
    let cols: Vec<Vec<u32>> = basis_in(r, d)
        .unwrap()
        .into_iter()
        .map(|b| can.apply_basis(b).unwrap().coeffs)
        .collect();
    let n = t.dim(d).unwrap();
    if n == 0 {
        return 0;
    }
    Matrix::from_columns(r.field(), n, &cols).unwrap().rank()
}

#[test]
fn can_kills_exactly_the_torsion() {
    let r = presented(serde_json::json!({
        "char": 3,
        "generators": [{"name": "A", "degree": 2}, {"name": "B", "degree": 2}],
        "relations": [["A*B", "0"], ["B*A", "0"]],
        "graded_commutative": true,
        "window": 16,
    }));
    let t = Arc::new(LocalisedAlgebra::new(r.clone(), &["B".to_string()]).unwrap());
    let s = r.element("B").unwrap();
    for d in 0..=t.can_limit().min(8) {
        assert_eq!(can_rank(&t, &r, d), surviving_rank(&r, &s, d), "degree {d}");
    }
    assert!(t.image(&r.element("A").unwrap()).unwrap().is_zero());
    assert!(!t.image(&r.element("B").unwrap()).unwrap().is_zero());

    let (lam, tt) = tate(16);
    let y = lam.element("Y").unwrap();
    for d in 0..=tt.can_limit() {
        assert_eq!(can_rank(&tt, &lam, d), lam.dim(d).unwrap(), "degree {d}");
        assert_eq!(surviving_rank(&lam, &y, d), lam.dim(d).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn can_is_multiplicative(a in 0i64..=6, b in 0i64..=6, ca in 1u32..3, cb in 1u32..3) {
        let (r, t) = tate(16);
        let x = Homog { deg: a, coeffs: vec![ca] };
        let y = Homog { deg: b, coeffs: vec![cb] };
        let lhs = t.image(&mul(r.as_ref(), &x, &y).unwrap()).unwrap();
        let rhs = mul(t.as_ref(), &t.image(&x).unwrap(), &t.image(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let via_map = apply_map(t.can().as_ref(), &x, t.dim(a).unwrap(), r.field()).unwrap();
        prop_assert_eq!(via_map, t.image(&x).unwrap());
    }
}

#[test]
fn primes_of_the_supported_family() {
    let r = presented(serde_json::json!({
        "char": 3,
        "generators": [{"name": "X", "degree": 1}, {"name": "Y", "degree": 2}],
        "relations": [["X^2", "0"], ["Y*X", "X*Y"]],
        "graded_commutative": true,
        "window": 10,
    }));
    assert_eq!(names(&supported_primes(&r).unwrap()), vec!["(X)", "(X, Y)"]);

    let r = presented(serde_json::json!({
        "char": 2,
        "generators": [{"name": "X", "degree": 1}],
        "graded_commutative": true,
        "window": 8,
    }));
    assert_eq!(names(&supported_primes(&r).unwrap()), vec!["(0)", "(X)"]);

    let r = presented(serde_json::json!({"char": 5, "generators": [], "window": 4}));
    assert_eq!(names(&supported_primes(&r).unwrap()), vec!["(0)"]);

    let two = presented(serde_json::json!({
        "char": 3,
        "generators": [{"name": "A", "degree": 2}, {"name": "B", "degree": 2}],
        "relations": [["B*A", "A*B"]],
        "graded_commutative": true,
        "window": 6,
    }));
    assert!(matches!(supported_primes(&two), Err(Error::UnsupportedRing(_))));
}

#[test]
fn primality_probe() {
    let r = lambda(8);
    for p in supported_primes(&r).unwrap() {
        assert!(probe_prime(&r, &p, 6).unwrap().is_prime(), "{}", p.label());
    }
    let not_prime = GradedPrime { generators: vec!["Y^2".into()], maximal: false, invert: vec![] };
    let probe = probe_prime(&r, &not_prime, 6).unwrap();
    assert!(probe.proper);
    assert!(!probe.is_prime());
    let everything = GradedPrime { generators: vec!["1".into()], maximal: false, invert: vec![] };
    assert!(!probe_prime(&r, &everything, 4).unwrap().proper);
}

#[test]
fn y_torsion_module_vanishes_after_inverting_y() {
    let c = cyclic_m3(CyclicGroup::new(3).unwrap(), 16, None).unwrap();
    let x = ModulePresentation {
        generators: vec![ModuleGenerator { name: "e".into(), degree: 0 }],
        relations: vec![vec![(0, c.ring.element("Y").unwrap())]],
    };
    let mu: Arc<dyn Cochain> = Arc::new(c.m3.clone());
    let generic = GradedPrime { generators: vec!["X".into()], maximal: false, invert: vec!["Y".into()] };
    let global = obstruct::hochschild::realisability(c.ring.clone(), &x, mu.clone(), 4, DecideOptions::default()).unwrap();
    let lv = local_verdict(c.ring.clone(), &x, mu, &generic, 4, DecideOptions::default(), &global.verdict).unwrap();
    assert!(lv.zero_module);
    assert!(lv.verdict.is_trivial());
}

#[test]
fn local_global_consistency() {
    let c = cyclic_m3(CyclicGroup::new(3).unwrap(), 16, None).unwrap();
    let mu: Arc<dyn Cochain> = Arc::new(c.m3.clone());
    let x = ModulePresentation {
        generators: vec![ModuleGenerator { name: "e".into(), degree: 0 }],
        relations: vec![vec![(0, c.ring.element("X").unwrap())]],
    };
    let report = local_global_check(c.ring.clone(), &x, mu, None, 4, DecideOptions::default()).unwrap();
    assert!(report.consistent);
    assert_eq!(report.local.len(), 2);
    let labels: Vec<String> = report.local.iter().map(|l| l.prime.label()).collect();
    assert_eq!(labels, vec!["(X)", "(X, Y)"]);
    // at the maximal ideal nothing is inverted and the verdict is the global one
    let max = &report.local[1];
    assert!(max.identity);
    assert_eq!(max.verdict.verdict, report.global.verdict);
}
