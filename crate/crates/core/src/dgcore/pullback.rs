use std::collections::BTreeMap;

use super::complex::{ChainMap, CochainComplex};
use super::dga::DgAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix, Solver};
use crate::graded::{Basis, Homog};

/// `X = A x_C B`, the degreewise kernel of `[alpha | -beta]`, with the
/// componentwise product and its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub dga: DgAlgebra,
    pub p1: ChainMap,
    pub p2: ChainMap,
}

/// Builds the pullback of dg maps `alpha: A -> C` and `beta: B -> C`
/// into a common complex. Fails if the kernel is not closed under the
/// product of `A x B`.
pub fn pullback(a: &DgAlgebra, b: &DgAlgebra, alpha: &ChainMap, beta: &ChainMap, c: &CochainComplex) -> Result<Pullback> {
    let f = a.field();
    let lo = a.lo().max(b.lo());
    let hi = a.hi().min(b.hi());
    if lo > hi {
        return Err(Error::invalid("degree windows do not overlap"));
    }
    let mut bases: BTreeMap<i64, Vec<Vec<u32>>> = BTreeMap::new();
    let mut solvers: BTreeMap<i64, Solver<Fp>> = BTreeMap::new();
    for n in lo..=hi {
        let (da, db) = (a.dim(n), b.dim(n));
        let am = alpha.blocks.get(&n).ok_or_else(|| Error::dims(format!("alpha in degree {n}")))?;
        let bm = beta.blocks.get(&n).ok_or_else(|| Error::dims(format!("beta in degree {n}")))?;
        if am.cols() != da || bm.cols() != db || am.rows() != c.dim(n) || bm.rows() != c.dim(n) {
            return Err(Error::dims(format!("maps into the base in degree {n}")));
        }
        let sys = am.hstack(&bm.scale(&f.negm(1)))?;
        let ker = if da + db == 0 { Vec::new() } else { sys.kernel() };
        let cols = Matrix::from_columns(f, da + db, &ker)?;
        solvers.insert(n, Solver::new(&cols));
        bases.insert(n, ker);
    }
    let coords = |n: i64, v: &[u32]| -> Result<Vec<u32>> {
        solvers[&n]
            .solve(v)?
            .ok_or_else(|| Error::invalid(format!("element of degree {n} leaves the pullback")))
    };
    let split = |n: i64, v: &[u32]| -> (Homog, Homog) {
        let da = a.dim(n);
        (
            Homog { deg: n, coeffs: v[..da].to_vec() },
            Homog { deg: n, coeffs: v[da..].to_vec() },
        )
    };
    let dims: Vec<usize> = (lo..=hi).map(|n| bases[&n].len()).collect();
    let mut ds = Vec::new();
    for n in lo..hi {
        let mut m = Matrix::zeros(f, dims[(n + 1 - lo) as usize], dims[(n - lo) as usize]);
        for (k, v) in bases[&n].iter().enumerate() {
            let (x, y) = split(n, v);
            let mut w = a.d(&x)?.coeffs;
            w.extend(b.d(&y)?.coeffs);
            for (i, c) in coords(n + 1, &w)?.into_iter().enumerate() {
                m.set(i, k, c);
            }
        }
        ds.push(m);
    }
    let trusted = (a.complex().trusted().0.max(b.complex().trusted().0), a.complex().trusted().1.min(b.complex().trusted().1));
    let complex = CochainComplex::new(f, lo, dims, ds, (trusted.0.max(lo), trusted.1.min(hi)))?;
    let mut u = a.unit().coeffs.clone();
    u.extend(b.unit().coeffs.iter());
    let unit = Homog { deg: 0, coeffs: coords(0, &u)? };
    let mult_lo = a.mult_lo().max(b.mult_lo()).max(lo);
    let mut dga = DgAlgebra::new(complex, unit, mult_lo)?;
    for i in mult_lo..=hi {
        for j in mult_lo..=hi {
            if i + j > hi || i + j < mult_lo {
                continue;
            }
            for (ki, v) in bases[&i].iter().enumerate() {
                let (x, y) = split(i, v);
                for (kj, w) in bases[&j].iter().enumerate() {
                    let (x2, y2) = split(j, w);
                    let mut prod = a.mul(&x, &x2)?.coeffs;
                    prod.extend(b.mul(&y, &y2)?.coeffs);
                    let sparse = coords(i + j, &prod)?
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| *c != 0)
                        .collect();
                    dga.set_product(Basis::new(i, ki), Basis::new(j, kj), sparse);
                }
            }
        }
    }
    let mut p1 = BTreeMap::new();
    let mut p2 = BTreeMap::new();
    for n in lo..=hi {
        let (da, db) = (a.dim(n), b.dim(n));
        let ker = &bases[&n];
        let mut m1 = Matrix::zeros(f, da, ker.len());
        let mut m2 = Matrix::zeros(f, db, ker.len());
        for (k, v) in ker.iter().enumerate() {
            for i in 0..da {
                m1.set(i, k, v[i]);
            }
            for i in 0..db {
                m2.set(i, k, v[da + i]);
            }
        }
        p1.insert(n, m1);
        p2.insert(n, m2);
    }
    Ok(Pullback {
        dga,
        p1: ChainMap { blocks: p1 },
        p2: ChainMap { blocks: p2 },
    })
}
