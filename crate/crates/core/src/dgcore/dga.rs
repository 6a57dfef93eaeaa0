use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix};
use crate::graded::{Basis, Homog};

pub type SparseVec = Vec<(usize, u32)>;

/// A dg algebra on a degree window. Products are stored sparsely per
/// left basis element and right degree; `mult_lo` is the lowest degree
/// in which either factor may live.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    complex: CochainComplex,
    pairs: HashMap<(Basis, Basis), SparseVec>,
    partners: HashMap<(Basis, i64), Vec<usize>>,
    unit: Homog,
    mult_lo: i64,
}

impl DgAlgebra {
    pub fn new(complex: CochainComplex, unit: Homog, mult_lo: i64) -> Result<Self> {
        if unit.deg != 0 || unit.dim() != complex.dim(0) {
            return Err(Error::dims("unit must live in degree zero"));
        }
        Ok(DgAlgebra {
            complex,
            pairs: HashMap::new(),
            partners: HashMap::new(),
            unit,
            mult_lo,
        })
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }
    pub fn field(&self) -> Fp {
        self.complex.field()
    }
    pub fn unit(&self) -> &Homog {
        &self.unit
    }
    pub fn mult_lo(&self) -> i64 {
        self.mult_lo
    }
    pub fn lo(&self) -> i64 {
        self.complex.lo()
    }
    pub fn hi(&self) -> i64 {
        self.complex.hi()
    }
    pub fn dim(&self, n: i64) -> usize {
        self.complex.dim(n)
    }

    /// Records `a * b`; zero products need not be stored.
    pub fn set_product(&mut self, a: Basis, b: Basis, value: SparseVec) {
        if value.is_empty() {
            return;
        }
        if self.pairs.insert((a, b), value).is_none() {
            self.partners.entry((a, b.deg)).or_default().push(b.idx);
        }
    }

    pub fn product_basis(&self, a: Basis, b: Basis) -> Result<Homog> {
        let d = a.deg + b.deg;
        self.check_mul(a.deg, b.deg)?;
        let mut out = Homog::zero(d, self.dim(d));
        if let Some(v) = self.pairs.get(&(a, b)) {
            for &(k, c) in v {
                out.coeffs[k] = c;
            }
        }
        Ok(out)
    }

    fn check_mul(&self, da: i64, db: i64) -> Result<()> {
        let (lo, hi) = (self.mult_lo, self.hi());
        for d in [da, db, da + db] {
            if d < lo.max(self.lo()) || d > hi {
                return Err(Error::overflow(d, lo.max(self.lo()), hi));
            }
        }
        Ok(())
    }

    pub fn mul(&self, x: &Homog, y: &Homog) -> Result<Homog> {
        self.check_mul(x.deg, y.deg)?;
        let f = self.field();
        let d = x.deg + y.deg;
        let mut out = vec![0u32; self.dim(d)];
        for (a, ca) in x.support() {
            let Some(list) = self.partners.get(&(a, y.deg)) else { continue };
            for &j in list {
                let cb = y.coeffs[j];
                if cb == 0 {
                    continue;
                }
                let v = &self.pairs[&(a, Basis::new(y.deg, j))];
                let c = f.mulm(ca, cb);
                for &(k, w) in v {
                    out[k] = f.addm(out[k], f.mulm(c, w));
                }
            }
        }
        Ok(Homog { deg: d, coeffs: out })
    }

    pub fn d(&self, x: &Homog) -> Result<Homog> {
        self.complex.apply_d(x)
    }

    fn sparse_d_columns(&self) -> HashMap<i64, Vec<SparseVec>> {
        let mut out = HashMap::new();
        for n in self.lo()..self.hi() {
            let m = self.complex.differential(n).expect("inner degree");
            let cols = (0..m.cols())
                .map(|j| {
                    (0..m.rows())
                        .filter_map(|i| {
                            let c = *m.get(i, j);
                            (c != 0).then_some((i, c))
                        })
                        .collect()
                })
                .collect();
            out.insert(n, cols);
        }
        out
    }

    fn sparse_product(&self, a: Basis, b: Basis) -> Option<&SparseVec> {
        self.pairs.get(&(a, b))
    }

    fn sparse_mul(&self, x: &[(Basis, u32)], y: &[(Basis, u32)], d: i64) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0u32; self.dim(d)];
        for &(a, ca) in x {
            for &(b, cb) in y {
                if let Some(v) = self.sparse_product(a, b) {
                    let c = f.mulm(ca, cb);
                    for &(k, w) in v {
                        out[k] = f.addm(out[k], f.mulm(c, w));
                    }
                }
            }
        }
        out
    }

    /// Basis pairs violating `d(xy) = d(x)y + (-1)^{|x|} x d(y)`, over all
    /// pairs where every term is materialised.
    pub fn check_leibniz(&self) -> Vec<(Basis, Basis)> {
        let f = self.field();
        let dcols = self.sparse_d_columns();
        let lo = self.mult_lo.max(self.lo());
        let hi = self.hi();
        let mut bad = Vec::new();
        let dsparse = |x: Basis| -> Vec<(Basis, u32)> {
            dcols[&x.deg][x.idx]
                .iter()
                .map(|&(i, c)| (Basis::new(x.deg + 1, i), c))
                .collect()
        };
        for da in lo..hi {
            for db in lo..hi {
                let d = da + db;
                if d < lo || d + 1 > hi {
                    continue;
                }
                for i in 0..self.dim(da) {
                    let x = Basis::new(da, i);
                    let dx = dsparse(x);
                    for j in 0..self.dim(db) {
                        let y = Basis::new(db, j);
                        let dy = dsparse(y);
                        let mut lhs = vec![0u32; self.dim(d + 1)];
                        if let Some(v) = self.sparse_product(x, y) {
                            for &(k, c) in v {
                                for &(r, e) in &dcols[&d][k] {
                                    lhs[r] = f.addm(lhs[r], f.mulm(c, e));
                                }
                            }
                        }
                        let t1 = self.sparse_mul(&dx, &[(y, 1)], d + 1);
                        let t2 = self.sparse_mul(&[(x, f.sign(da))], &dy, d + 1);
                        let ok = (0..lhs.len()).all(|k| lhs[k] == f.addm(t1[k], t2[k]));
                        if !ok {
                            bad.push((x, y));
                        }
                    }
                }
            }
        }
        bad
    }

    /// Basis triples violating associativity. Only triples where one side
    /// can be nonzero are visited, which covers all of them.
    pub fn check_associativity(&self) -> Vec<(Basis, Basis, Basis)> {
        let lo = self.mult_lo.max(self.lo());
        let hi = self.hi();
        // right partners of u: (z, uz); left partners of v: a with av != 0
        let mut right: HashMap<Basis, Vec<Basis>> = HashMap::new();
        let mut left: HashMap<Basis, Vec<Basis>> = HashMap::new();
        for (a, b) in self.pairs.keys() {
            right.entry(*a).or_default().push(*b);
            left.entry(*b).or_default().push(*a);
        }
        let mut seen: HashSet<(Basis, Basis, Basis)> = HashSet::new();
        let mut bad = Vec::new();
        let mut visit = |a: Basis, b: Basis, c: Basis, bad: &mut Vec<_>| {
            let d = a.deg + b.deg + c.deg;
            if d > hi || d < lo || a.deg + b.deg > hi || b.deg + c.deg > hi {
                return;
            }
            if a.deg + b.deg < lo || b.deg + c.deg < lo || !seen.insert((a, b, c)) {
                return;
            }
            let ab = self.sparse_product(a, b).cloned().unwrap_or_default();
            let bc = self.sparse_product(b, c).cloned().unwrap_or_default();
            let ab: Vec<_> = ab.iter().map(|&(k, x)| (Basis::new(a.deg + b.deg, k), x)).collect();
            let bc: Vec<_> = bc.iter().map(|&(k, x)| (Basis::new(b.deg + c.deg, k), x)).collect();
            let l = self.sparse_mul(&ab, &[(c, 1)], d);
            let r = self.sparse_mul(&[(a, 1)], &bc, d);
            if l != r {
                bad.push((a, b, c));
            }
        };
        for (&(a, b), ab) in &self.pairs {
            {
                let a = &a;
                let d = a.deg + b.deg;
                for &(k, _) in ab {
                    if let Some(zs) = right.get(&Basis::new(d, k)) {
                        for &z in zs {
                            visit(*a, b, z, &mut bad);
                        }
                    }
                }
                // the same pair as the inner product of x(bz)
                let (bb, z) = (*a, b);
                let bz_deg = bb.deg + z.deg;
                for &(k, _) in ab {
                    if let Some(xs) = left.get(&Basis::new(bz_deg, k)) {
                        for &x in xs {
                            visit(x, bb, z, &mut bad);
                        }
                    }
                }
            }
        }
        bad.sort();
        bad
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut products = Vec::new();
        for (&(a, b), v) in &self.pairs {
            products.push((a, b, v.clone()));
        }
        products.sort_by_key(|x| (x.0, x.1));
        serde_json::to_value(DgaDto {
            complex: self.complex.to_json(),
            unit: self.unit.support().map(|(b, c)| (b.idx, c)).collect(),
            mult_lo: self.mult_lo,
            products,
        })
        .expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let dto: DgaDto = serde_json::from_value(v.clone())?;
        let complex = CochainComplex::from_json(&dto.complex)?;
        let p = complex.field().p();
        let mut unit = Homog::zero(0, complex.dim(0));
        for (i, c) in dto.unit {
            *unit.coeffs.get_mut(i).ok_or_else(|| Error::dims("unit index"))? = c % p;
        }
        let mut dga = DgAlgebra::new(complex, unit, dto.mult_lo)?;
        for (a, b, v) in dto.products {
            let d = a.deg + b.deg;
            if a.idx >= dga.dim(a.deg) || b.idx >= dga.dim(b.deg) || v.iter().any(|(k, _)| *k >= dga.dim(d)) {
                return Err(Error::dims("product entry out of range"));
            }
            let v = v.into_iter().map(|(k, c)| (k, c % p)).filter(|(_, c)| *c != 0).collect();
            dga.set_product(a, b, v);
        }
        Ok(dga)
    }

    /// The dg algebra structure reduced to a plain matrix form for a
    /// degree pair: columns indexed by `(i, j)` pairs.
    pub fn product_matrix(&self, da: i64, db: i64) -> Result<Matrix<Fp>> {
        let d = da + db;
        let mut m = Matrix::zeros(self.field(), self.dim(d), self.dim(da) * self.dim(db));
        for i in 0..self.dim(da) {
            for j in 0..self.dim(db) {
                let v = self.product_basis(Basis::new(da, i), Basis::new(db, j))?;
                for (k, &c) in v.coeffs.iter().enumerate() {
                    m.set(k, i * self.dim(db) + j, c);
                }
            }
        }
        Ok(m)
    }

    /// Unit laws on all basis elements where products are defined.
    pub fn check_unit(&self) -> Result<bool> {
        for n in self.mult_lo.max(self.lo())..=self.hi() {
            for i in 0..self.dim(n) {
                let x = Homog::basis(Basis::new(n, i), self.dim(n));
                if self.mul(&self.unit, &x)? != x || self.mul(&x, &self.unit)? != x {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Serialize, Deserialize)]
struct DgaDto {
    complex: serde_json::Value,
    unit: Vec<(usize, u32)>,
    mult_lo: i64,
    products: Vec<(Basis, Basis, SparseVec)>,
}

/// Degreewise linear map between dg algebras, checked for compatibility
/// with differentials and products.
pub fn check_dg_map(
    blocks: &BTreeMap<i64, Matrix<Fp>>,
    source: &DgAlgebra,
    target: &DgAlgebra,
) -> Result<bool> {
    let map = super::complex::ChainMap { blocks: blocks.clone() };
    if map.check(source.complex(), target.complex()).is_err() {
        return Ok(false);
    }
    let lo = source.mult_lo().max(source.lo());
    for da in lo..=source.hi() {
        for db in lo..=source.hi() {
            let d = da + db;
            if d < lo || d > source.hi() {
                continue;
            }
            let (Some(fa), Some(fb), Some(fd)) = (blocks.get(&da), blocks.get(&db), blocks.get(&d)) else {
                continue;
            };
            for i in 0..source.dim(da) {
                let x = Homog::basis(Basis::new(da, i), source.dim(da));
                let fx = Homog { deg: da, coeffs: fa.mul_vec(&x.coeffs)? };
                for j in 0..source.dim(db) {
                    let y = Homog::basis(Basis::new(db, j), source.dim(db));
                    let fy = Homog { deg: db, coeffs: fb.mul_vec(&y.coeffs)? };
                    let lhs = fd.mul_vec(&source.mul(&x, &y)?.coeffs)?;
                    if lhs != target.mul(&fx, &fy)?.coeffs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
