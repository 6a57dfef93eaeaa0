use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;

use crate::dgcore::{Cohomology, DgAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Solver};
use crate::graded::{AlgebraWindow, Basis, GradedAlgebra, Homog, Regular};
use crate::hochschild::{HochschildCochain, TupleWindow};

/// Choices made during the transfer.
#[derive(Clone, Debug, Default)]
pub struct TransferOptions {
    /// Cycles preferred as class representatives, by degree. The unit is
    /// always tried first in degree zero.
    pub preferred: BTreeMap<i64, Vec<Homog>>,
    /// Prescribed values of `f2` on basis pairs of cohomology; each is
    /// checked against `d f2(a, b) = f1(ab) - f1(a) f1(b)`.
    pub f2: BTreeMap<(Basis, Basis), Homog>,
    /// Labels for the cohomology basis, by degree.
    pub labels: BTreeMap<i64, Vec<String>>,
}

/// Minimal model data up to the triple product: the cycle selection `f1`,
/// the homotopy `f2`, the induced product on `H = H*(A)` and `m3`.
#[derive(Clone)]
pub struct Transfer {
    window: i64,
    cohomology: Cohomology,
    h: Arc<AlgebraWindow>,
    f1: BTreeMap<Basis, Homog>,
    f2: HashMap<(Basis, Basis), Homog>,
    m3: HochschildCochain,
    solvers: HashMap<i64, Arc<Solver<crate::exactla::Fp>>>,
}

impl Transfer {
    /// Runs the transfer with cohomology materialised in `[0, window]`.
    pub fn compute(a: &DgAlgebra, window: i64, opts: &TransferOptions) -> Result<Self> {
        let f = a.field();
        let (tlo, thi) = a.complex().trusted();
        if tlo > 0 || thi < window || a.hi() < window + 1 {
            return Err(Error::overflow(window, tlo, thi));
        }
        if a.mult_lo() > 0 {
            return Err(Error::invalid("products must be defined from degree zero"));
        }
        let mut pref: BTreeMap<i64, Vec<Vec<u32>>> = BTreeMap::new();
        pref.entry(0).or_default().push(a.unit().coeffs.clone());
        for (&n, reps) in &opts.preferred {
            for z in reps {
                if z.deg != n || !a.d(z)?.is_zero() {
                    return Err(Error::NotACocycle(format!("preferred representative in degree {n}")));
                }
                pref.entry(n).or_default().push(z.coeffs.clone());
            }
        }
        let cohomology = a.complex().cohomology_with(&pref)?;
        let mut labels = Vec::new();
        for n in 0..=window {
            let dim = cohomology.dim(n);
            let given = opts.labels.get(&n);
            labels.push(
                (0..dim)
                    .map(|i| {
                        given
                            .and_then(|l| l.get(i).cloned())
                            .unwrap_or_else(|| if n == 0 && i == 0 { "1".to_string() } else { format!("h{n}_{i}") })
                    })
                    .collect(),
            );
        }
        let mut h = AlgebraWindow::new(f, 0, window, labels, Basis::new(0, 0))?;
        let mut f1 = BTreeMap::new();
        for n in 0..=window {
            for i in 0..cohomology.dim(n) {
                f1.insert(Basis::new(n, i), cohomology.rep(n, i)?);
            }
        }
        for da in 0..=window {
            for db in 0..=window - da {
                for i in 0..cohomology.dim(da) {
                    for j in 0..cohomology.dim(db) {
                        let (x, y) = (Basis::new(da, i), Basis::new(db, j));
                        let p = a.mul(&f1[&x], &f1[&y])?;
                        h.set_product(x, y, cohomology.project(&p)?)?;
                    }
                }
            }
        }
        let h = Arc::new(h);
        let mut t = Transfer {
            window,
            cohomology,
            h: h.clone(),
            f1,
            f2: HashMap::new(),
            m3: HochschildCochain::new(3, -1, TupleWindow::total(window), Arc::new(Regular(h.clone()))),
            solvers: HashMap::new(),
        };
        let unit = h.unit();
        for da in 0..=window {
            for db in 0..=window - da {
                for i in 0..t.cohomology.dim(da) {
                    for j in 0..t.cohomology.dim(db) {
                        let (x, y) = (Basis::new(da, i), Basis::new(db, j));
                        if x == unit || y == unit {
                            continue;
                        }
                        let defect = t.defect(a, x, y)?;
                        let v = match opts.f2.get(&(x, y)) {
                            Some(z) => {
                                if z.deg != da + db - 1 || a.d(z)? != defect {
                                    return Err(Error::invalid(format!(
                                        "prescribed f2({}, {}) does not bound the product defect",
                                        h.label(x),
                                        h.label(y)
                                    )));
                                }
                                z.clone()
                            }
                            None => t.bound(a, &defect)?.ok_or_else(|| {
                                Error::DefectNotBoundary(format!("f1({0}{1}) - f1({0})f1({1})", h.label(x), h.label(y)))
                            })?,
                        };
                        if !v.is_zero() {
                            t.f2.insert((x, y), v);
                        }
                    }
                }
            }
        }
        let tuples = TupleWindow::total(window).tuples(h.as_ref(), 3, true)?;
        for tr in tuples {
            let phi = t.phi3(a, tr[0], tr[1], tr[2])?;
            if phi.deg < 0 {
                if !phi.is_zero() {
                    return Err(Error::overflow(phi.deg, 0, window));
                }
                continue;
            }
            let v = t.cohomology.project(&phi)?;
            t.m3.set(tr, v)?;
        }
        Ok(t)
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn cohomology(&self) -> &Cohomology {
        &self.cohomology
    }

    /// `H*(A)` with the induced product.
    pub fn algebra(&self) -> Arc<AlgebraWindow> {
        self.h.clone()
    }

    pub fn f1(&self, b: Basis) -> Option<&Homog> {
        self.f1.get(&b)
    }

    /// `f1` extended linearly.
    pub fn f1_elem(&self, x: &Homog, dim: usize) -> Homog {
        let f = self.h.field();
        let mut out = Homog::zero(x.deg, dim);
        for (b, c) in x.support() {
            out.add_scaled(f, c, &self.f1[&b]).expect("same degree");
        }
        out
    }

    pub fn f2(&self, a: Basis, b: Basis, dim: usize) -> Homog {
        self.f2
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| Homog::zero(a.deg + b.deg - 1, dim))
    }

    fn f2_left(&self, x: &Homog, b: Basis, dim: usize) -> Homog {
        let f = self.h.field();
        let mut out = Homog::zero(x.deg + b.deg - 1, dim);
        for (a, c) in x.support() {
            if let Some(v) = self.f2.get(&(a, b)) {
                out.add_scaled(f, c, v).expect("same degree");
            }
        }
        out
    }

    fn f2_right(&self, a: Basis, y: &Homog, dim: usize) -> Homog {
        let f = self.h.field();
        let mut out = Homog::zero(a.deg + y.deg - 1, dim);
        for (b, c) in y.support() {
            if let Some(v) = self.f2.get(&(a, b)) {
                out.add_scaled(f, c, v).expect("same degree");
            }
        }
        out
    }

    /// The triple product on `H*(A)`, normalised, on triples of total
    /// degree at most the window.
    pub fn m3(&self) -> &HochschildCochain {
        &self.m3
    }

    /// `f1(ab) - f1(a) f1(b)`.
    pub fn defect(&self, a: &DgAlgebra, x: Basis, y: Basis) -> Result<Homog> {
        let f = a.field();
        let d = x.deg + y.deg;
        let xy = self.h.mul_basis(x, y)?;
        let mut v = self.f1_elem(&xy, a.dim(d));
        v.add_scaled(f, f.negm(1), &a.mul(&self.f1[&x], &self.f1[&y])?)?;
        Ok(v)
    }

    fn solver(&mut self, a: &DgAlgebra, n: i64) -> Option<Arc<Solver<crate::exactla::Fp>>> {
        if let Some(s) = self.solvers.get(&n) {
            return Some(s.clone());
        }
        let m = a.complex().differential(n)?;
        let s = Arc::new(Solver::new(m));
        self.solvers.insert(n, s.clone());
        Some(s)
    }

    /// Some `z` with `dz = b`, free coordinates zero.
    fn bound(&mut self, a: &DgAlgebra, b: &Homog) -> Result<Option<Homog>> {
        if b.is_zero() {
            return Ok(Some(Homog::zero(b.deg - 1, a.dim(b.deg - 1))));
        }
        let Some(s) = self.solver(a, b.deg - 1) else {
            return Ok(None);
        };
        Ok(s.solve(&b.coeffs)?.map(|c| Homog { deg: b.deg - 1, coeffs: c }))
    }

    /// `Phi3(a, b, c) = (-1)^{|a|} f1(a) f2(b, c) - f2(a, b) f1(c)
    /// - f2(ab, c) + f2(a, bc)`, a cycle of degree `|a|+|b|+|c|-1`.
    pub fn phi3(&self, a: &DgAlgebra, x: Basis, y: Basis, z: Basis) -> Result<Homog> {
        let f = a.field();
        let d = x.deg + y.deg + z.deg - 1;
        let dim = a.dim(d);
        let mut out = Homog::zero(d, dim);
        let yz = self.f2(y, z, a.dim(y.deg + z.deg - 1));
        if !yz.is_zero() {
            out.add_scaled(f, f.sign(x.deg), &a.mul(&self.f1[&x], &yz)?)?;
        }
        let xy = self.f2(x, y, a.dim(x.deg + y.deg - 1));
        if !xy.is_zero() {
            out.add_scaled(f, f.negm(1), &a.mul(&xy, &self.f1[&z])?)?;
        }
        let xy_h = self.h.mul_basis(x, y)?;
        out.add_scaled(f, f.negm(1), &self.f2_left(&xy_h, z, dim))?;
        let yz_h = self.h.mul_basis(y, z)?;
        out.add_scaled(f, 1, &self.f2_right(x, &yz_h, dim))?;
        Ok(out)
    }

    /// `f3(a, b, c)` with `d f3 = Phi3(a, b, c) - f1(m3(a, b, c))`.
    pub fn f3(&mut self, a: &DgAlgebra, x: Basis, y: Basis, z: Basis) -> Result<Homog> {
        let f = a.field();
        let mut phi = self.phi3(a, x, y, z)?;
        let m = self.m3.values.get(&vec![x, y, z]).cloned();
        if let Some(m) = m {
            phi.add_scaled(f, f.negm(1), &self.f1_elem(&m, phi.dim()))?;
        }
        self.bound(a, &phi)?
            .ok_or_else(|| Error::DefectNotBoundary("Phi3 minus f1(m3) is not a boundary".into()))
    }

    /// Whether every stored `f2` satisfies its defining equation.
    pub fn check_f2(&self, a: &DgAlgebra) -> Result<bool> {
        let unit = self.h.unit();
        for da in 0..=self.window {
            for db in 0..=self.window - da {
                for i in 0..self.cohomology.dim(da) {
                    for j in 0..self.cohomology.dim(db) {
                        let (x, y) = (Basis::new(da, i), Basis::new(db, j));
                        if x == unit || y == unit {
                            continue;
                        }
                        let z = self.f2(x, y, a.dim(da + db - 1));
                        let dz = if z.is_zero() {
                            Homog::zero(da + db, a.dim(da + db))
                        } else {
                            a.d(&z)?
                        };
                        if dz != self.defect(a, x, y)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Representatives of the chosen cohomology basis, each moved by a random
/// boundary: another valid cycle selection.
pub fn perturbed_selection(t: &Transfer, a: &DgAlgebra, rng: &mut impl Rng) -> Result<BTreeMap<i64, Vec<Homog>>> {
    let f = a.field();
    let p = f.p();
    let mut out = BTreeMap::new();
    for n in 1..=t.window() {
        let mut reps = Vec::new();
        for i in 0..t.cohomology().dim(n) {
            let mut z = t.cohomology().rep(n, i)?;
            if let Some(d) = a.complex().differential(n - 1) {
                let v: Vec<u32> = (0..d.cols()).map(|_| rng.gen_range(0..p)).collect();
                let b = d.mul_vec(&v)?;
                crate::exactla::axpy(f, &mut z.coeffs, 1, &b);
            }
            reps.push(z);
        }
        out.insert(n, reps);
    }
    Ok(out)
}

/// Per-degree change of basis between two graded algebras.
#[derive(Clone, Debug)]
pub struct BasisChange {
    pub forward: BTreeMap<i64, Matrix<crate::exactla::Fp>>,
    pub backward: BTreeMap<i64, Matrix<crate::exactla::Fp>>,
}

impl BasisChange {
    /// From the images of the source basis, one matrix per degree whose
    /// columns are the images.
    pub fn new(forward: BTreeMap<i64, Matrix<crate::exactla::Fp>>) -> Result<Self> {
        let mut backward = BTreeMap::new();
        for (&n, m) in &forward {
            if m.rows() != m.cols() {
                return Err(Error::dims(format!("change of basis in degree {n} is not square")));
            }
            let s = Solver::new(m);
            if s.rank() != m.rows() {
                return Err(Error::invalid(format!("change of basis in degree {n} is singular")));
            }
            let f = *m.field();
            let cols: Vec<Vec<u32>> = (0..m.rows())
                .map(|i| {
                    let mut e = vec![0; m.rows()];
                    e[i] = 1;
                    s.solve(&e).expect("shape").expect("invertible")
                })
                .collect();
            backward.insert(n, Matrix::from_columns(f, m.rows(), &cols)?);
        }
        Ok(BasisChange { forward, backward })
    }

    fn apply(map: &BTreeMap<i64, Matrix<crate::exactla::Fp>>, h: &Homog) -> Result<Homog> {
        let m = map.get(&h.deg).ok_or_else(|| Error::overflow(h.deg, 0, 0))?;
        Ok(Homog {
            deg: h.deg,
            coeffs: m.mul_vec(&h.coeffs)?,
        })
    }

    pub fn to_target(&self, h: &Homog) -> Result<Homog> {
        Self::apply(&self.forward, h)
    }

    pub fn to_source(&self, h: &Homog) -> Result<Homog> {
        Self::apply(&self.backward, h)
    }
}

/// Moves a normalised algebra-valued 3-cochain along an isomorphism
/// `source -> target`: `m'(x, y, z) = phi(m(phi^-1 x, phi^-1 y, phi^-1 z))`.
pub fn transport_cochain(
    m: &HochschildCochain,
    source: &dyn GradedAlgebra,
    target: Arc<dyn GradedAlgebra>,
    change: &BasisChange,
    window: TupleWindow,
) -> Result<HochschildCochain> {
    let f = target.field();
    let mut out = HochschildCochain::new(m.arity, m.degree, window, Arc::new(Regular(target.clone())));
    for t in window.tuples(target.as_ref(), m.arity, true)? {
        let pre: Vec<Homog> = t
            .iter()
            .map(|b| change.to_source(&Homog::basis(*b, target.dim(b.deg).expect("in window"))))
            .collect::<Result<_>>()?;
        let deg = t.iter().map(|b| b.deg).sum::<i64>() + m.degree;
        let mut acc = Homog::zero(deg, source.dim(deg)?);
        expand(m, &pre, 0, &mut Vec::new(), 1, &mut acc, f)?;
        out.set(t, change.to_target(&acc)?)?;
    }
    Ok(out)
}

fn expand(
    m: &HochschildCochain,
    args: &[Homog],
    i: usize,
    cur: &mut Vec<Basis>,
    c: u32,
    out: &mut Homog,
    f: crate::exactla::Fp,
) -> Result<()> {
    use crate::hochschild::Cochain;
    if i == args.len() {
        return out.add_scaled(f, c, &m.eval(cur)?);
    }
    for (b, cb) in args[i].support() {
        cur.push(b);
        expand(m, args, i + 1, cur, f.mulm(c, cb), out, f)?;
        cur.pop();
    }
    Ok(())
}
