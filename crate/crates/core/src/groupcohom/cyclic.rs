use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcore::{end_dga, DgAlgebra, DgModule, HomComplex, ModuleTerm};
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix};
use crate::graded::{Basis, Generator, GradedAlgebra, GradedAlgebraPresentation, Homog, PresentationSpec};
use crate::hochschild::{HochschildCochain, TupleWindow};
use crate::kadeishvili::{transport_cochain, BasisChange, Transfer, TransferOptions};

/// Cyclic group of prime power order over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicGroup {
    pub order: u32,
    pub prime: u32,
}

impl CyclicGroup {
    pub fn new(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid("cyclic group order must be at least 2"));
        }
        let prime = (2..=order).find(|d| order.is_multiple_of(*d)).expect("order >= 2");
        let mut n = order;
        while n.is_multiple_of(prime) {
            n /= prime;
        }
        if n != 1 {
            return Err(Error::invalid(format!(
                "order {order} is not a prime power; only p-groups in characteristic p are supported"
            )));
        }
        Ok(CyclicGroup { order, prime })
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.prime).expect("prime")
    }
}

/// `T^k` on `kG = k[T]/(T^r)` in the monomial basis.
fn t_power(f: Fp, r: usize, k: usize) -> Matrix<Fp> {
    let mut m = Matrix::zeros(f, r, r);
    for j in 0..r {
        if j + k < r {
            m.set(j + k, j, 1);
        }
    }
    m
}

/// The periodic complex `kG -T-> kG -(-T^{r-1})-> kG -T-> ...` on
/// positions `0..=n`, whose zeroth cohomology is the trivial module.
pub fn coresolution(g: CyclicGroup, n: i64) -> Result<DgModule> {
    let f = g.field();
    let r = g.order as usize;
    let term = ModuleTerm {
        dim: r,
        actions: vec![t_power(f, r, 1)],
    };
    let d = (0..n)
        .map(|p| {
            if p % 2 == 0 {
                t_power(f, r, 1)
            } else {
                t_power(f, r, r - 1).scale(&f.negm(1))
            }
        })
        .collect();
    DgModule::new(f, 0, vec![term; n as usize + 1], d)
}

/// Endomorphism dg algebra of the coresolution with cohomology trusted
/// on `[0, window]`.
#[derive(Clone)]
pub struct CyclicEnd {
    pub group: CyclicGroup,
    pub window: i64,
    pub cap: i64,
    pub module: DgModule,
    pub dga: DgAlgebra,
    pub hom: HomComplex,
}

impl CyclicEnd {
    pub fn new(group: CyclicGroup, window: i64) -> Result<Self> {
        if window < 1 {
            return Err(Error::invalid("window must be positive"));
        }
        let hi = window + 1;
        let cap = hi + 2;
        let module = coresolution(group, cap + 1)?;
        let (dga, hom) = end_dga(&module, -1, hi, Some(cap), (0, window))?;
        Ok(CyclicEnd {
            group,
            window,
            cap,
            module,
            dga,
            hom,
        })
    }

    fn element(&self, deg: i64, block: impl Fn(i64) -> Option<Matrix<Fp>>) -> Result<Homog> {
        let mut blocks = BTreeMap::new();
        for p in self.module.lo..=self.module.hi() {
            if p + deg <= self.cap && p + deg <= self.module.hi() {
                if let Some(b) = block(p) {
                    blocks.insert(p, b);
                }
            }
        }
        Ok(Homog {
            deg,
            coeffs: self.hom.encode(deg, &blocks)?,
        })
    }

    /// The degree one cycle: `1` out of even positions, `T^{r-2}` out of odd ones.
    pub fn x(&self) -> Result<Homog> {
        let f = self.group.field();
        let r = self.group.order as usize;
        self.element(1, |p| Some(if p % 2 == 0 { Matrix::identity(f, r) } else { t_power(f, r, r - 2) }))
    }

    /// The degree two periodicity cycle: identity blocks.
    pub fn y(&self) -> Result<Homog> {
        let f = self.group.field();
        let r = self.group.order as usize;
        self.element(2, |_| Some(Matrix::identity(f, r)))
    }

    /// Degree one cochain with `dq = x^2`: `T^{r-3}` out of odd positions.
    pub fn q(&self) -> Result<Homog> {
        let f = self.group.field();
        let r = self.group.order as usize;
        if r < 3 {
            return Err(Error::invalid("q needs order at least 3"));
        }
        self.element(1, |p| (p % 2 == 1).then(|| t_power(f, r, r - 3)))
    }

    /// `x^e y^i` as a product of cycles.
    pub fn monomial(&self, e: u32, i: u32) -> Result<Homog> {
        let mut out = self.dga.unit().clone();
        for _ in 0..e {
            out = self.dga.mul(&out, &self.x()?)?;
        }
        let y = self.y()?;
        for _ in 0..i {
            out = self.dga.mul(&out, &y)?;
        }
        Ok(out)
    }

    /// Cycle selection `f1(X^e Y^i) = x^e y^i` (`f1(X^n) = x^n` for order 2).
    pub fn monomial_selection(&self) -> Result<TransferOptions> {
        let mut opts = TransferOptions::default();
        for n in 1..=self.window {
            let z = if self.group.order == 2 {
                let mut z = self.dga.unit().clone();
                for _ in 0..n {
                    z = self.dga.mul(&z, &self.x()?)?;
                }
                z
            } else {
                self.monomial((n % 2) as u32, (n / 2) as u32)?
            };
            opts.preferred.insert(n, vec![z]);
        }
        Ok(opts)
    }

    /// `f2(X Y^i, X Y^j) = sign * q y^{i+j}` in the basis of the
    /// monomial selection.
    pub fn q_homotopy(&self, sign: u32) -> Result<BTreeMap<(Basis, Basis), Homog>> {
        let f = self.group.field();
        let q = self.q()?;
        let mut out = BTreeMap::new();
        for a in (1..=self.window).step_by(2) {
            for b in (1..=self.window - a).step_by(2) {
                let yy = self.monomial(0, ((a + b - 2) / 2) as u32)?;
                let v = self.dga.mul(&q, &yy)?.scaled(f, sign);
                out.insert((Basis::new(a, 0), Basis::new(b, 0)), v);
            }
        }
        Ok(out)
    }
}

/// `H*(Z/r; F_p)` as a presentation: `k[X]` for order 2, otherwise
/// `k[X, Y]/(X^2)` with `|X| = 1`, `|Y| = 2`.
pub fn cohomology_ring(g: CyclicGroup, window: i64) -> Result<GradedAlgebraPresentation> {
    let gen = |n: &str, d: i64| Generator {
        name: n.to_string(),
        degree: d,
    };
    let spec = if g.order == 2 {
        PresentationSpec {
            characteristic: 2,
            generators: vec![gen("X", 1)],
            relations: vec![],
            graded_commutative: true,
            window: Some(window),
        }
    } else {
        PresentationSpec {
            characteristic: g.prime,
            generators: vec![gen("X", 1), gen("Y", 2)],
            relations: vec![("X*X".into(), "0".into())],
            graded_commutative: true,
            window: Some(window),
        }
    };
    GradedAlgebraPresentation::from_spec(&spec)
}

/// The triple product of a cyclic group, computed by homotopy transfer
/// from the endomorphism algebra and moved to the presentation basis.
#[derive(Clone)]
pub struct CyclicM3 {
    pub end: Arc<CyclicEnd>,
    pub ring: Arc<GradedAlgebraPresentation>,
    pub transfer: Transfer,
    pub change: BasisChange,
    pub m3: HochschildCochain,
}

/// Runs the transfer for `g` with cohomology on `[0, window]`.
pub fn cyclic_m3(g: CyclicGroup, window: i64, opts: Option<&TransferOptions>) -> Result<CyclicM3> {
    let end = Arc::new(CyclicEnd::new(g, window)?);
    cyclic_m3_from(end, opts)
}

pub fn cyclic_m3_from(end: Arc<CyclicEnd>, opts: Option<&TransferOptions>) -> Result<CyclicM3> {
    let g = end.group;
    let window = end.window;
    let default = TransferOptions::default();
    let transfer = Transfer::compute(&end.dga, window, opts.unwrap_or(&default))?;
    let ring = Arc::new(cohomology_ring(g, window)?);
    let h = transfer.algebra();
    for n in 0..=window {
        if h.dim(n)? != ring.dim(n)? {
            return Err(Error::dims(format!(
                "cohomology has dimension {} in degree {n}, the ring {}",
                h.dim(n)?,
                ring.dim(n)?
            )));
        }
    }
    // psi(X^e Y^i) = [x]^e [y]^i
    let x = transfer.cohomology().project(&end.x()?)?;
    let y = if g.order == 2 {
        None
    } else {
        Some(transfer.cohomology().project(&end.y()?)?)
    };
    let mut backward = BTreeMap::new();
    for n in 0..=window {
        let dim = ring.dim(n)?;
        let mut cols = Vec::new();
        for k in 0..dim {
            let word = ring.word(Basis::new(n, k)).expect("basis word").to_vec();
            let mut v = crate::graded::unit_element(h.as_ref())?;
            for &gi in &word {
                let factor = if gi == 0 { &x } else { y.as_ref().expect("Y") };
                v = crate::graded::mul(h.as_ref(), &v, factor)?;
            }
            cols.push(v.coeffs);
        }
        backward.insert(n, Matrix::from_columns(g.field(), dim, &cols)?);
    }
    let inv = BasisChange::new(backward)?;
    let change = BasisChange {
        forward: inv.backward,
        backward: inv.forward,
    };
    let m3 = transport_cochain(transfer.m3(), h.as_ref(), ring.clone(), &change, TupleWindow::total(window))?;
    Ok(CyclicM3 {
        end,
        ring,
        transfer,
        change,
        m3,
    })
}
