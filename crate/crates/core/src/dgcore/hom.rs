use std::collections::BTreeMap;

use super::complex::CochainComplex;
use super::dga::DgAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix};
use crate::graded::{Basis, Homog};

/// One term of a complex of modules over a finite-dimensional algebra,
/// given by the action matrices of the algebra generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleTerm {
    pub dim: usize,
    pub actions: Vec<Matrix<Fp>>,
}

/// Cochain complex of modules `X^lo -> ... -> X^hi` with `d[k]` leaving
/// position `lo + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DgModule {
    pub field: Fp,
    pub lo: i64,
    pub terms: Vec<ModuleTerm>,
    pub d: Vec<Matrix<Fp>>,
}

impl DgModule {
    pub fn new(field: Fp, lo: i64, terms: Vec<ModuleTerm>, d: Vec<Matrix<Fp>>) -> Result<Self> {
        if terms.is_empty() || d.len() + 1 != terms.len() {
            return Err(Error::dims("one differential between consecutive terms"));
        }
        let ngens = terms[0].actions.len();
        for t in &terms {
            if t.actions.len() != ngens || t.actions.iter().any(|a| a.rows() != t.dim || a.cols() != t.dim) {
                return Err(Error::dims("action matrices"));
            }
        }
        for (k, m) in d.iter().enumerate() {
            let (s, t) = (&terms[k], &terms[k + 1]);
            if m.rows() != t.dim || m.cols() != s.dim {
                return Err(Error::dims("differential shape"));
            }
            for g in 0..ngens {
                if m.mul(&s.actions[g])? != t.actions[g].mul(m)? {
                    return Err(Error::invalid(format!("differential at position {} is not linear", lo + k as i64)));
                }
            }
            if k + 1 < d.len() && !d[k + 1].mul(m)?.is_zero() {
                return Err(Error::invalid("d o d is nonzero"));
            }
        }
        Ok(DgModule { field, lo, terms, d })
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, p: i64) -> Option<&ModuleTerm> {
        if p < self.lo || p > self.hi() {
            None
        } else {
            Some(&self.terms[(p - self.lo) as usize])
        }
    }

    pub fn differential(&self, p: i64) -> Option<&Matrix<Fp>> {
        if p < self.lo || p >= self.hi() {
            None
        } else {
            Some(&self.d[(p - self.lo) as usize])
        }
    }

    /// Direct sum of two complexes over the same algebra.
    pub fn direct_sum(&self, other: &DgModule) -> Result<DgModule> {
        let f = self.field;
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ngens = self.terms[0].actions.len();
        let zero_term = || ModuleTerm {
            dim: 0,
            actions: vec![Matrix::zeros(f, 0, 0); ngens],
        };
        let mut terms = Vec::new();
        for p in lo..=hi {
            let a = self.term(p).cloned().unwrap_or_else(zero_term);
            let b = other.term(p).cloned().unwrap_or_else(zero_term);
            let actions = (0..ngens).map(|g| block_diag(&a.actions[g], &b.actions[g])).collect();
            terms.push(ModuleTerm {
                dim: a.dim + b.dim,
                actions,
            });
        }
        let mut d = Vec::new();
        for p in lo..hi {
            let da = self
                .differential(p)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(f, self.term(p + 1).map_or(0, |t| t.dim), self.term(p).map_or(0, |t| t.dim)));
            let db = other
                .differential(p)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(f, other.term(p + 1).map_or(0, |t| t.dim), other.term(p).map_or(0, |t| t.dim)));
            d.push(block_diag(&da, &db));
        }
        DgModule::new(f, lo, terms, d)
    }
}

impl DgModule {
    /// Mapping cone of the identity: `X^{p+1} (+) X^p` in position `p`
    /// with `d(a, b) = (-d a, a + d b)`. Contractible.
    pub fn cone_of_identity(&self) -> Result<DgModule> {
        let f = self.field;
        let ngens = self.terms[0].actions.len();
        let zero_term = || ModuleTerm {
            dim: 0,
            actions: vec![Matrix::zeros(f, 0, 0); ngens],
        };
        let term = |p: i64| self.term(p).cloned().unwrap_or_else(zero_term);
        let diff = |p: i64| {
            self.differential(p)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(f, term(p + 1).dim, term(p).dim))
        };
        let lo = self.lo - 1;
        let hi = self.hi();
        let mut terms = Vec::new();
        for p in lo..=hi {
            let (a, b) = (term(p + 1), term(p));
            let actions = (0..ngens).map(|g| block_diag(&a.actions[g], &b.actions[g])).collect();
            terms.push(ModuleTerm {
                dim: a.dim + b.dim,
                actions,
            });
        }
        let mut d = Vec::new();
        for p in lo..hi {
            let (a0, b0) = (term(p + 1).dim, term(p).dim);
            let (a1, b1) = (term(p + 2).dim, term(p + 1).dim);
            let mut m = Matrix::zeros(f, a1 + b1, a0 + b0);
            let da = diff(p + 1).scale(&f.negm(1));
            let db = diff(p);
            for i in 0..a1 {
                for j in 0..a0 {
                    m.set(i, j, *da.get(i, j));
                }
            }
            for i in 0..b1 {
                m.set(a1 + i, i, 1);
                for j in 0..b0 {
                    m.set(a1 + i, a0 + j, *db.get(i, j));
                }
            }
            d.push(m);
        }
        DgModule::new(f, lo, terms, d)
    }
}

fn block_diag(a: &Matrix<Fp>, b: &Matrix<Fp>) -> Matrix<Fp> {
    let mut m = Matrix::zeros(*a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, *a.get(i, j));
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, *b.get(i, j));
        }
    }
    m
}

/// Basis of `Hom_R(X^p, Y^q)` as matrices, with coordinates read off at
/// the free columns of the defining system.
#[derive(Clone, Debug)]
pub struct Component {
    pub p: i64,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
    pub basis: Vec<Matrix<Fp>>,
    free: Vec<usize>,
}

fn linear_maps(f: Fp, x: &ModuleTerm, y: &ModuleTerm) -> Result<(Vec<Matrix<Fp>>, Vec<usize>)> {
    let (m, n) = (y.dim, x.dim);
    let ngens = x.actions.len();
    let mut sys = Matrix::zeros(f, ngens * m * n, m * n);
    for g in 0..ngens {
        let (ax, ay) = (&x.actions[g], &y.actions[g]);
        // (F ax - ay F)[i][j] as a linear form in F[r][s] = v[r*n + s]
        for i in 0..m {
            for j in 0..n {
                let row = g * m * n + i * n + j;
                for s in 0..n {
                    let c = *ax.get(s, j);
                    if c != 0 {
                        let col = i * n + s;
                        sys.set(row, col, f.addm(*sys.get(row, col), c));
                    }
                }
                for r in 0..m {
                    let c = *ay.get(i, r);
                    if c != 0 {
                        let col = r * n + j;
                        sys.set(row, col, f.subm(*sys.get(row, col), c));
                    }
                }
            }
        }
    }
    let r = sys.rref();
    let free: Vec<usize> = (0..m * n).filter(|c| !r.pivots.contains(c)).collect();
    let basis = sys
        .kernel()
        .into_iter()
        .map(|v| {
            let mut mm = Matrix::zeros(f, m, n);
            for (k, c) in v.into_iter().enumerate() {
                mm.set(k / n, k % n, c);
            }
            mm
        })
        .collect();
    Ok((basis, free))
}

/// `Hom_R(X, Y)` on degrees `[lo, hi]`, optionally keeping only the
/// components whose target position is at most `cap`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: CochainComplex,
    components: BTreeMap<i64, Vec<Component>>,
}

impl HomComplex {
    pub fn new(x: &DgModule, y: &DgModule, lo: i64, hi: i64, cap: Option<i64>, trusted: (i64, i64)) -> Result<Self> {
        let f = x.field;
        let mut cache: BTreeMap<(i64, i64), (Vec<Matrix<Fp>>, Vec<usize>)> = BTreeMap::new();
        let mut components = BTreeMap::new();
        let mut dims = Vec::new();
        for n in lo..=hi {
            let mut comps = Vec::new();
            let mut offset = 0;
            for p in x.lo..=x.hi() {
                let q = p + n;
                if q < y.lo || q > y.hi() || cap.is_some_and(|c| q > c) {
                    continue;
                }
                let key = (p, q);
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(key) {
                    e.insert(linear_maps(f, x.term(p).expect("p"), y.term(q).expect("q"))?);
                }
                let (basis, free) = cache[&key].clone();
                let len = basis.len();
                comps.push(Component {
                    p,
                    offset,
                    rows: y.term(q).expect("q").dim,
                    cols: x.term(p).expect("p").dim,
                    basis,
                    free,
                });
                offset += len;
            }
            dims.push(offset);
            components.insert(n, comps);
        }
        let mut hc = HomComplex {
            complex: CochainComplex::new(f, lo, vec![0], vec![], (lo, lo))?,
            components,
        };
        let mut ds = Vec::new();
        for n in lo..hi {
            let mut m = Matrix::zeros(f, dims[(n + 1 - lo) as usize], dims[(n - lo) as usize]);
            for c in &hc.components[&n] {
                for (k, b) in c.basis.iter().enumerate() {
                    let mut blocks = BTreeMap::new();
                    let q = c.p + n;
                    if let Some(dy) = y.differential(q) {
                        blocks.insert(c.p, dy.mul(b)?);
                    }
                    if let Some(dx) = x.differential(c.p - 1) {
                        let t = b.mul(dx)?.scale(&f.negm(f.sign(n)));
                        match blocks.get_mut(&(c.p - 1)) {
                            Some(e) => *e = e.add(&t)?,
                            None => {
                                blocks.insert(c.p - 1, t);
                            }
                        }
                    }
                    let v = hc.encode(n + 1, &blocks)?;
                    for (i, val) in v.into_iter().enumerate() {
                        m.set(i, c.offset + k, val);
                    }
                }
            }
            ds.push(m);
        }
        hc.complex = CochainComplex::new(f, lo, dims, ds, trusted)?;
        Ok(hc)
    }

    pub fn components(&self, n: i64) -> &[Component] {
        self.components.get(&n).map_or(&[], |v| v.as_slice())
    }

    /// Coordinates of a family of blocks `p -> matrix`; blocks at
    /// positions without a component are dropped.
    pub fn encode(&self, n: i64, blocks: &BTreeMap<i64, Matrix<Fp>>) -> Result<Vec<u32>> {
        let comps = self.components(n);
        let dim = comps.last().map_or(0, |c| c.offset + c.basis.len());
        let mut v = vec![0; dim];
        for c in comps {
            if let Some(b) = blocks.get(&c.p) {
                if b.rows() != c.rows || b.cols() != c.cols {
                    return Err(Error::dims("block shape"));
                }
                for (k, &fc) in c.free.iter().enumerate() {
                    let (i, j) = if c.cols == 0 { (0, 0) } else { (fc / c.cols, fc % c.cols) };
                    v[c.offset + k] = *b.get(i, j);
                }
            }
        }
        Ok(v)
    }

    pub fn decode(&self, n: i64, v: &[u32]) -> BTreeMap<i64, Matrix<Fp>> {
        let f = self.complex.field();
        let mut out = BTreeMap::new();
        for c in self.components(n) {
            let mut m = Matrix::zeros(f, c.rows, c.cols);
            let mut any = false;
            for (k, b) in c.basis.iter().enumerate() {
                let a = v[c.offset + k];
                if a != 0 {
                    m = m.add(&b.scale(&a)).expect("same shape");
                    any = true;
                }
            }
            if any {
                out.insert(c.p, m);
            }
        }
        out
    }

    /// Whether the given blocks lie in the span (R-linearity check).
    pub fn represents(&self, n: i64, blocks: &BTreeMap<i64, Matrix<Fp>>) -> Result<bool> {
        let v = self.encode(n, blocks)?;
        let back = self.decode(n, &v);
        for c in self.components(n) {
            let zero = Matrix::zeros(self.complex.field(), c.rows, c.cols);
            let a = blocks.get(&c.p).unwrap_or(&zero);
            let b = back.get(&c.p).unwrap_or(&zero);
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `End_R(X)` with composition. With a cap the complex is the quotient
/// `Hom(X, X) -> Hom(X, X_{<= cap})` and products are only defined for
/// non-negative degrees.
pub fn end_dga(x: &DgModule, lo: i64, hi: i64, cap: Option<i64>, trusted: (i64, i64)) -> Result<(DgAlgebra, HomComplex)> {
    let f = x.field;
    let hc = HomComplex::new(x, x, lo, hi, cap, trusted)?;
    let mut unit_blocks = BTreeMap::new();
    for p in x.lo..=x.hi() {
        unit_blocks.insert(p, Matrix::identity(f, x.term(p).expect("p").dim));
    }
    let unit = Homog {
        deg: 0,
        coeffs: hc.encode(0, &unit_blocks)?,
    };
    let mult_lo = if cap.is_some() { 0 } else { lo };
    let mut dga = DgAlgebra::new(hc.complex.clone(), unit, mult_lo)?;
    for i in mult_lo.max(lo)..=hi {
        for j in mult_lo.max(lo)..=hi {
            if i + j > hi || i + j < lo.max(mult_lo) {
                continue;
            }
            let target = hc.components(i + j);
            for ca in hc.components(i) {
                // b lives at position q with q + j = ca.p
                let q = ca.p - j;
                let Some(cb) = hc.components(j).iter().find(|c| c.p == q) else { continue };
                let Some(ct) = target.iter().find(|c| c.p == q) else { continue };
                for (ka, a) in ca.basis.iter().enumerate() {
                    for (kb, b) in cb.basis.iter().enumerate() {
                        let prod = a.mul(b)?;
                        let mut sparse = Vec::new();
                        for (k, &fc) in ct.free.iter().enumerate() {
                            let (r, s) = (fc / ct.cols, fc % ct.cols);
                            let val = *prod.get(r, s);
                            if val != 0 {
                                sparse.push((ct.offset + k, val));
                            }
                        }
                        dga.set_product(Basis::new(i, ca.offset + ka), Basis::new(j, cb.offset + kb), sparse);
                    }
                }
            }
        }
    }
    Ok((dga, hc))
}

/// Map of complexes of modules, one block per source position.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleChainMap {
    pub blocks: BTreeMap<i64, Matrix<Fp>>,
}

/// Post-composition `f o -` from `Hom(S, X)` to `Hom(S, Y)`.
pub fn post_compose(
    f: &ModuleChainMap,
    from: &HomComplex,
    to: &HomComplex,
) -> Result<super::complex::ChainMap> {
    let mut blocks = BTreeMap::new();
    let (lo, hi) = (from.complex.lo().max(to.complex.lo()), from.complex.hi().min(to.complex.hi()));
    for n in lo..=hi {
        let mut m = Matrix::zeros(from.complex.field(), to.complex.dim(n), from.complex.dim(n));
        for k in 0..from.complex.dim(n) {
            let mut e = vec![0; from.complex.dim(n)];
            e[k] = 1;
            let mut out = BTreeMap::new();
            for (p, b) in from.decode(n, &e) {
                if let Some(fq) = f.blocks.get(&(p + n)) {
                    out.insert(p, fq.mul(&b)?);
                }
            }
            for (i, v) in to.encode(n, &out)?.into_iter().enumerate() {
                m.set(i, k, v);
            }
        }
        blocks.insert(n, m);
    }
    Ok(super::complex::ChainMap { blocks })
}

/// Pre-composition `- o f` from `Hom(X, T)` to `Hom(S, T)` for `f: S -> X`.
pub fn pre_compose(
    f: &ModuleChainMap,
    from: &HomComplex,
    to: &HomComplex,
) -> Result<super::complex::ChainMap> {
    let mut blocks = BTreeMap::new();
    let (lo, hi) = (from.complex.lo().max(to.complex.lo()), from.complex.hi().min(to.complex.hi()));
    for n in lo..=hi {
        let mut m = Matrix::zeros(from.complex.field(), to.complex.dim(n), from.complex.dim(n));
        for k in 0..from.complex.dim(n) {
            let mut e = vec![0; from.complex.dim(n)];
            e[k] = 1;
            let mut out = BTreeMap::new();
            for (p, b) in from.decode(n, &e) {
                if let Some(fp) = f.blocks.get(&p) {
                    out.insert(p, b.mul(fp)?);
                }
            }
            for (i, v) in to.encode(n, &out)?.into_iter().enumerate() {
                m.set(i, k, v);
            }
        }
        blocks.insert(n, m);
    }
    Ok(super::complex::ChainMap { blocks })
}
