use num_rational::BigRational;
use obstruct::exactla::{Field, Fp, Matrix, Rationals};
use proptest::prelude::*;

fn f5() -> Fp {
    Fp::new(5).unwrap()
}

// independent oracle: naive matrix-vector product mod p
fn apply(rows: &[Vec<u32>], x: &[u32], p: u32) -> Vec<u32> {
    rows.iter()
        .map(|r| (r.iter().zip(x).map(|(a, b)| *a as u64 * *b as u64).sum::<u64>() % p as u64) as u32)
        .collect()
}

#[test]
fn rref_zero_and_identity() {
    let f = Fp::new(3).unwrap();
    let z = Matrix::zeros(f, 2, 3);
    let r = z.rref();
    assert!(r.reduced.is_zero());
    assert!(r.pivots.is_empty());
    let i = Matrix::identity(f, 3);
    let r = i.rref();
    assert_eq!(r.reduced, i);
    assert_eq!(r.pivots, vec![0, 1, 2]);
}

#[test]
fn rref_rank_one_over_f5() {
    let a = Matrix::from_rows(f5(), vec![vec![1, 2], vec![2, 4]]).unwrap();
    let r = a.rref();
    assert_eq!(r.reduced, Matrix::from_rows(f5(), vec![vec![1, 2], vec![0, 0]]).unwrap());
    assert_eq!(r.pivots, vec![0]);
}

#[test]
fn solve_examples() {
    let a = Matrix::from_rows(f5(), vec![vec![1, 2], vec![2, 4]]).unwrap();
    let s = a.solve(&[1, 2]).unwrap().expect("consistent");
    assert_eq!(s.particular, vec![1, 0]);
    assert_eq!(s.kernel, vec![vec![3, 1]]);
    assert_eq!(apply(&[vec![1, 2], vec![2, 4]], &s.kernel[0], 5), vec![0, 0]);

    let f3 = Fp::new(3).unwrap();
    let s = Matrix::identity(f3, 3).solve(&[2, 0, 1]).unwrap().unwrap();
    assert_eq!(s.particular, vec![2, 0, 1]);
    assert!(s.kernel.is_empty());

    let zero = Matrix::from_rows(f3, vec![vec![0]]).unwrap();
    assert!(zero.solve(&[1]).unwrap().is_none());
    assert!(zero.solve(&[1, 1]).is_err());
}

#[test]
fn rationals_stay_reduced() {
    let q = Rationals;
    let a = BigRational::new(2.into(), (-4).into());
    assert_eq!(*a.numer(), (-1).into());
    assert_eq!(*a.denom(), 2.into());
    let b = q.mul(&a, &BigRational::new(6.into(), 9.into()));
    assert_eq!(b, BigRational::new((-1).into(), 3.into()));
    assert!(*b.denom() > 0.into());
}

fn matrix_strategy() -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..6, 1usize..6).prop_flat_map(|(p, r, c)| {
        (Just(p), prop::collection::vec(prop::collection::vec(0..p, c), r))
    })
}

proptest! {
    #[test]
    fn solutions_satisfy_the_system((p, rows) in matrix_strategy(), seed in prop::collection::vec(0u32..100, 6)) {
        let f = Fp::new(p).unwrap();
        let a = Matrix::from_rows(f, rows.clone()).unwrap();
        // b in the column space, so a solution must exist
        let x0: Vec<u32> = (0..a.cols()).map(|i| seed[i] % p).collect();
        let b = apply(&rows, &x0, p);
        let s = a.solve(&b).unwrap().expect("b is in the image");
        prop_assert_eq!(apply(&rows, &s.particular, p), b);
        for v in &s.kernel {
            prop_assert!(apply(&rows, v, p).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn rank_plus_nullity((p, rows) in matrix_strategy()) {
        let f = Fp::new(p).unwrap();
        let a = Matrix::from_rows(f, rows).unwrap();
        prop_assert_eq!(a.rank() + a.kernel().len(), a.cols());
    }

    #[test]
    fn rref_is_idempotent((p, rows) in matrix_strategy()) {
        let f = Fp::new(p).unwrap();
        let r = Matrix::from_rows(f, rows).unwrap().rref();
        let again = r.reduced.rref();
        prop_assert_eq!(&again.reduced, &r.reduced);
        prop_assert_eq!(again.pivots, r.pivots.clone());
        prop_assert!(r.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn residues_are_reduced(p in prop::sample::select(vec![2u32, 3, 5, 7, 11]), n in any::<i64>()) {
        let f = Fp::new(p).unwrap();
        prop_assert!(f.reduce_i64(n) < p);
    }
}
