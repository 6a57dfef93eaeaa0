use std::sync::Arc;

use obstruct::cli::demo::random_cochain;
use obstruct::exactla::Matrix;
use obstruct::graded::{
    Basis, GradedAlgebra, GradedAlgebraPresentation, GradedBimodule, Homog, ModuleGenerator, ModulePresentation,
    PresentationSpec, Regular,
};
use obstruct::groupcohom::{cohomology_ring, cyclic_m3, CyclicGroup};
use obstruct::hochschild::{
    bar_basis, bar_differential, coboundary_decide, delta, gamma_verdict, graded_centre, kappa_verdict, tilde_elem,
    tilde_eval, Cochain, Cup, DecideOptions, Difference, HochschildCochain, TupleWindow, Verdict,
};
use obstruct::localise::LocalisedAlgebra;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lambda(window: i64) -> Arc<dyn GradedAlgebra> {
    Arc::new(cohomology_ring(CyclicGroup::new(3).unwrap(), window).unwrap())
}

fn presented(json: serde_json::Value) -> Arc<GradedAlgebraPresentation> {
    let spec: PresentationSpec = serde_json::from_value(json).unwrap();
    Arc::new(GradedAlgebraPresentation::from_spec(&spec).unwrap())
}

fn regular(a: &Arc<dyn GradedAlgebra>) -> Arc<dyn GradedBimodule> {
    Arc::new(Regular(a.clone()))
}

fn constant(a: &Arc<dyn GradedAlgebra>, w: TupleWindow, z: Homog) -> HochschildCochain {
    let mut c = HochschildCochain::new(0, z.deg, w, regular(a));
    c.set(vec![], z).unwrap();
    c
}

/// Counts occurrences of generator `g` in each monomial: a derivation.
fn weight(a: &Arc<GradedAlgebraPresentation>, g: usize, w: TupleWindow) -> HochschildCochain {
    let alg: Arc<dyn GradedAlgebra> = a.clone();
    let f = alg.field();
    let mut c = HochschildCochain::new(1, 0, w, regular(&alg));
    for t in w.tuples(alg.as_ref(), 1, false).unwrap() {
        let k = a.word(t[0]).unwrap().iter().filter(|&&x| x == g).count();
        let v = Homog::basis(t[0], alg.dim(t[0].deg).unwrap()).scaled(f, f.reduce_i64(k as i64));
        c.set(t, v).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn delta_squares_to_zero(seed in any::<u64>(), n in 0usize..=3, t in -3i64..=3) {
        let a = lambda(10);
        let w = TupleWindow::total(6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_cochain(&mut rng, &a, n, t, w, false).unwrap();
        let d1 = delta(&phi, a.as_ref(), regular(&a), w, false).unwrap();
        let d2 = delta(&d1, a.as_ref(), regular(&a), w, false).unwrap();
        prop_assert!(d2.is_zero());
    }

    #[test]
    fn tilde_intertwines_the_differentials(seed in any::<u64>(), n in 0usize..=2, t in -2i64..=2) {
        let a = lambda(10);
        let w = TupleWindow::total(6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_cochain(&mut rng, &a, n, t, w, false).unwrap();
        let dphi = delta(&phi, a.as_ref(), regular(&a), w, false).unwrap();
        for b in bar_basis(a.as_ref(), n + 1, 6).unwrap() {
            let deg = b.iter().map(|x| x.deg).sum::<i64>() + t;
            let lhs = tilde_eval(&dphi, a.as_ref(), &b).unwrap();
            let rhs = tilde_elem(&phi, a.as_ref(), &bar_differential(a.as_ref(), &b).unwrap(), deg).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        // restricted to (1, l, 1) the translation gives back the cochain
        let u = a.unit();
        for args in w.tuples(a.as_ref(), n, false).unwrap() {
            let mut b = vec![u];
            b.extend(&args);
            b.push(u);
            prop_assert_eq!(tilde_eval(&phi, a.as_ref(), &b).unwrap(), phi.eval(&args).unwrap());
        }
    }

    #[test]
    fn cup_is_associative_and_unital(seed in any::<u64>(), n in prop::collection::vec(0usize..=1, 3), t in prop::collection::vec(-1i64..=1, 3)) {
        let a = lambda(10);
        let w = TupleWindow::total(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_cochain(&mut rng, &a, n[0], t[0], w, false).unwrap();
        let y = random_cochain(&mut rng, &a, n[1], t[1], w, false).unwrap();
        let z = random_cochain(&mut rng, &a, n[2], t[2], w, false).unwrap();
        let xy = Cup { left: &x, right: &y, alg: a.as_ref() };
        let yz = Cup { left: &y, right: &z, alg: a.as_ref() };
        let l = Cup { left: &xy, right: &z, alg: a.as_ref() };
        let r = Cup { left: &x, right: &yz, alg: a.as_ref() };
        let one = constant(&a, w, Homog::basis(a.unit(), 1));
        let xl = Cup { left: &one, right: &x, alg: a.as_ref() };
        let xr = Cup { left: &x, right: &one, alg: a.as_ref() };
        for args in w.tuples(a.as_ref(), n[0] + n[1] + n[2], false).unwrap() {
            prop_assert_eq!(l.eval(&args).unwrap(), r.eval(&args).unwrap());
        }
        for args in w.tuples(a.as_ref(), n[0], false).unwrap() {
            prop_assert_eq!(xl.eval(&args).unwrap(), x.eval(&args).unwrap());
            prop_assert_eq!(xr.eval(&args).unwrap(), x.eval(&args).unwrap());
        }
    }
}

#[test]
fn central_zero_cochains_multiply_directly() {
    let a = lambda(10);
    let w = TupleWindow::total(6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let eta = random_cochain(&mut rng, &a, 2, 1, w, false).unwrap();
    let y = Homog::basis(Basis::new(2, 0), 1);
    let z = constant(&a, w, y.clone());
    let cup = Cup { left: &z, right: &eta, alg: a.as_ref() };
    for args in w.tuples(a.as_ref(), 2, false).unwrap() {
        let direct = obstruct::graded::mul(a.as_ref(), &y, &eta.eval(&args).unwrap()).unwrap();
        assert_eq!(cup.eval(&args).unwrap(), direct);
    }
}

/// Dimension of `ker delta` on 0-cochains of degree `t`, from the matrix
/// of `delta` on a basis.
fn hh0_dim(a: &Arc<dyn GradedAlgebra>, t: i64, w: TupleWindow) -> usize {
    let f = a.field();
    let n = a.dim(t).unwrap();
    let mut cols = Vec::new();
    for k in 0..n {
        let c = constant(a, w, Homog::basis(Basis::new(t, k), n));
        let d = delta(&c, a.as_ref(), regular(a), w, false).unwrap();
        let mut col = Vec::new();
        for args in w.tuples(a.as_ref(), 1, false).unwrap() {
            col.extend(d.eval(&args).unwrap().coeffs);
        }
        cols.push(col);
    }
    if n == 0 {
        return 0;
    }
    let m = Matrix::from_columns(f, cols[0].len(), &cols).unwrap();
    n - m.rank()
}

#[test]
fn degree_zero_cohomology_is_the_graded_centre() {
    let rings: Vec<Arc<dyn GradedAlgebra>> = vec![
        lambda(10),
        presented(serde_json::json!({
            "char": 5,
            "generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 1}],
            "relations": [["y*x", "2*x*y"]],
            "window": 10,
        })),
        presented(serde_json::json!({
            "char": 3,
            "generators": [{"name": "a", "degree": 2}, {"name": "b", "degree": 2}],
            "relations": [["b*a", "0"], ["b*b", "0"]],
            "window": 10,
        })),
    ];
    for a in rings {
        for t in 0..=3 {
            let centre = graded_centre(a.as_ref(), t, 6).unwrap();
            assert_eq!(centre.len(), hh0_dim(&a, t, TupleWindow::total(6)), "degree {t}");
        }
    }
}

#[test]
fn graded_commutativity_up_to_coboundary() {
    let ring = Arc::new(cohomology_ring(CyclicGroup::new(3).unwrap(), 16).unwrap());
    let a: Arc<dyn GradedAlgebra> = ring.clone();
    let f = a.field();
    let w = TupleWindow::total(12);
    let dx = weight(&ring, 0, w);
    let dy = weight(&ring, 1, w);
    let z = constant(&a, w, ring.element("X").unwrap());
    for (zeta, eta) in [(&dx, &dy), (&dx, &z), (&dy, &dx)] {
        let (m, i, n, j) = (zeta.arity as i64, zeta.degree, eta.arity as i64, eta.degree);
        let ze = HochschildCochain::tabulate(&Cup { left: zeta, right: eta, alg: a.as_ref() }, a.as_ref(), regular(&a), w, false).unwrap();
        let ez = HochschildCochain::tabulate(&Cup { left: eta, right: zeta, alg: a.as_ref() }, a.as_ref(), regular(&a), w, false).unwrap();
        let mut ez_signed = ez.clone();
        for v in ez_signed.values.values_mut() {
            *v = v.scaled(f, f.sign(m * n + i * j));
        }
        let diff = Difference { a: &ze, b: &ez_signed, field: f };
        let v = coboundary_decide(&diff, a.as_ref(), &Regular(a.clone()), &TupleWindow::total(6), DecideOptions::default()).unwrap();
        assert!(v.is_trivial(), "{m},{i} with {n},{j}");
    }
}

#[test]
fn nontrivial_verdicts_are_stable_and_certified() {
    let c = cyclic_m3(CyclicGroup::new(3).unwrap(), 16, None).unwrap();
    let coeff = Regular(c.ring.clone());
    for d in [6, 8, 10] {
        let v = coboundary_decide(&c.m3, c.ring.as_ref(), &coeff, &TupleWindow::total(d), DecideOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Nontrivial);
        let cert = &v.certificates[0];
        assert_eq!(cert.augmented_rank, cert.rank + 1);
        assert!(cert.unknowns > 0 && cert.equations > 0);
    }
}

#[test]
fn trivial_verdicts_carry_checked_witnesses() {
    let c = cyclic_m3(CyclicGroup::new(9).unwrap(), 16, None).unwrap();
    let a: Arc<dyn GradedAlgebra> = c.ring.clone();
    let w = TupleWindow::total(8);
    let v = coboundary_decide(&c.m3, a.as_ref(), &Regular(a.clone()), &w, DecideOptions::default()).unwrap();
    assert!(v.is_trivial());
    assert_eq!(v.certificates.len(), 2);
    let wit = v.witness.unwrap();
    assert!(obstruct::hochschild::check_witness(&c.m3, &wit, a.as_ref(), regular(&a), &w).unwrap());
}

#[test]
fn gamma_of_zero_is_trivial() {
    let r = Arc::new(cohomology_ring(CyclicGroup::new(3).unwrap(), 20).unwrap());
    let t = Arc::new(LocalisedAlgebra::new(r.clone(), &["Y".to_string()]).unwrap());
    let ta: Arc<dyn GradedAlgebra> = t.clone();
    let a: Arc<dyn GradedAlgebra> = r.clone();
    let zero = HochschildCochain::new(3, -1, TupleWindow::total(12), regular(&a));
    let v = gamma_verdict(&zero, r.as_ref(), ta, t.can(), &TupleWindow::total(6), DecideOptions::default()).unwrap();
    assert!(v.is_trivial());
    assert!(v.witness.unwrap().values.values().all(|h| h.is_zero()));
}

#[test]
fn pairing_with_zero_is_trivial() {
    let r = Arc::new(cohomology_ring(CyclicGroup::new(3).unwrap(), 16).unwrap());
    let a: Arc<dyn GradedAlgebra> = r.clone();
    let zero: Arc<dyn Cochain> = Arc::new(HochschildCochain::new(3, -1, TupleWindow::total(12), regular(&a)));
    let x = ModulePresentation {
        generators: vec![ModuleGenerator { name: "e".into(), degree: 0 }],
        relations: vec![vec![(0, r.element("X").unwrap())]],
    };
    let v = kappa_verdict(a.clone(), &x, zero, 6, DecideOptions::default()).unwrap();
    assert!(v.is_trivial());
}

#[test]
fn free_module_pairing_is_trivial_unsplit() {
    let c = cyclic_m3(CyclicGroup::new(3).unwrap(), 16, None).unwrap();
    let a: Arc<dyn GradedAlgebra> = c.ring.clone();
    let free = ModulePresentation::free(vec![
        ModuleGenerator { name: "e".into(), degree: 0 },
        ModuleGenerator { name: "f".into(), degree: 1 },
    ]);
    let v = kappa_verdict(a, &free, Arc::new(c.m3.clone()), 6, DecideOptions::default()).unwrap();
    assert!(v.is_trivial());
}
