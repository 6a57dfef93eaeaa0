use obstruct::graded::{mul, GradedAlgebra, Homog, Regular};
use obstruct::groupcohom::{cohomology_ring, cyclic_m3, group_m3, CyclicGroup, GroupRef};
use obstruct::hochschild::{coboundary_decide, DecideOptions, TupleWindow, Verdict};
use obstruct::kadeishvili::KunnethSigns;

#[test]
fn group_orders() {
    assert_eq!(CyclicGroup::new(9).unwrap().prime, 3);
    assert_eq!(CyclicGroup::new(8).unwrap().field().p(), 2);
    assert!(CyclicGroup::new(6).is_err());
    assert!(CyclicGroup::new(1).is_err());
    assert!("product:2,3".parse::<GroupRef>().is_err());
    assert!("product:2".parse::<GroupRef>().is_err());
    assert!("dihedral:8".parse::<GroupRef>().is_err());
    assert_eq!("product:2,4".parse::<GroupRef>().unwrap().to_string(), "product:2,4");
}

#[test]
fn order_two_ring_is_polynomial() {
    let r = cohomology_ring(CyclicGroup::new(2).unwrap(), 8).unwrap();
    assert_eq!(r.field().p(), 2);
    assert_eq!(r.generators().len(), 1);
    let x = r.element("X").unwrap();
    let mut p = r.element("1").unwrap();
    for d in 1..=8 {
        p = mul(&r, &p, &x).unwrap();
        assert!(!p.is_zero(), "X^{d}");
    }
}

#[test]
fn odd_order_ring_is_truncated() {
    for n in [3, 4, 5, 9] {
        let r = cohomology_ring(CyclicGroup::new(n).unwrap(), 8).unwrap();
        let x = r.element("X").unwrap();
        assert!(mul(&r, &x, &x).unwrap().is_zero(), "order {n}");
        for d in 0..=8 {
            assert_eq!(r.dim(d).unwrap(), 1);
        }
    }
}

#[test]
fn transferred_ring_matches_presentation() {
    for n in [2, 3, 5] {
        let c = cyclic_m3(CyclicGroup::new(n).unwrap(), 8, None).unwrap();
        let h = c.transfer.algebra();
        for da in 0..=8 {
            for db in 0..=8 - da {
                let a = Homog::basis(obstruct::graded::Basis::new(da, 0), 1);
                let b = Homog::basis(obstruct::graded::Basis::new(db, 0), 1);
                let lhs = c.change.to_target(&mul(h.as_ref(), &a, &b).unwrap()).unwrap();
                let rhs = mul(c.ring.as_ref(), &c.change.to_target(&a).unwrap(), &c.change.to_target(&b).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "order {n}, degrees {da}, {db}");
            }
        }
    }
}

#[test]
fn periodicity_through_y() {
    let c = cyclic_m3(CyclicGroup::new(3).unwrap(), 10, None).unwrap();
    let h = c.transfer.algebra();
    let y = c.transfer.cohomology().project(&c.end.y().unwrap()).unwrap();
    for n in 0..=8 {
        let a = Homog::basis(obstruct::graded::Basis::new(n, 0), h.dim(n).unwrap());
        assert!(!mul(h.as_ref(), &a, &y).unwrap().is_zero(), "degree {n}");
    }
}

#[test]
fn class_verdicts_at_window_eight() {
    for (n, expect) in [
        (3, Verdict::Nontrivial),
        (2, Verdict::TrivialUpToWindow),
        (4, Verdict::TrivialUpToWindow),
        (9, Verdict::TrivialUpToWindow),
        (5, Verdict::TrivialUpToWindow),
    ] {
        let c = cyclic_m3(CyclicGroup::new(n).unwrap(), 12, None).unwrap();
        let v = coboundary_decide(&c.m3, c.ring.as_ref(), &Regular(c.ring.clone()), &TupleWindow::total(8), DecideOptions::default())
            .unwrap();
        assert_eq!(v.verdict, expect, "order {n}");
        assert!(!v.certificates.is_empty());
        if expect == Verdict::Nontrivial {
            assert!(v.witness.is_none());
            let cert = &v.certificates[0];
            assert!(cert.rank < cert.augmented_rank);
        }
    }
}

#[test]
fn klein_four_is_trivial() {
    let g: GroupRef = "product:2,2".parse().unwrap();
    let m = group_m3(&g, 10, KunnethSigns::Koszul).unwrap();
    assert_eq!(m.verdict(6, DecideOptions::default()).unwrap().verdict, Verdict::TrivialUpToWindow);
}
