use std::collections::{BTreeMap, HashMap};

use super::{AlgebraWindow, Basis, GradedAlgebra, Homog};
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix};

fn bounded(alg: &dyn GradedAlgebra) -> Result<(i64, i64)> {
    match alg.bounds() {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::invalid("tensor factors must be materialised on a finite window")),
    }
}

/// Basis of `(A (x) B)_d` as pairs, ordered by left degree then indices.
fn pair_basis(a: &dyn GradedAlgebra, b: &dyn GradedAlgebra, d: i64) -> Result<Vec<(Basis, Basis)>> {
    let (alo, ahi) = bounded(a)?;
    let (blo, bhi) = bounded(b)?;
    let mut out = Vec::new();
    for i in alo..=ahi {
        let j = d - i;
        if j < blo || j > bhi {
            continue;
        }
        for x in 0..a.dim(i)? {
            for y in 0..b.dim(j)? {
                out.push((Basis::new(i, x), Basis::new(j, y)));
            }
        }
    }
    Ok(out)
}

/// `A (x) B` materialised on `[lo, hi]`, keeping the factor pairs.
#[derive(Clone, Debug)]
pub struct TensorWindow {
    pub algebra: AlgebraWindow,
    lo: i64,
    pairs: Vec<Vec<(Basis, Basis)>>,
    index: HashMap<(Basis, Basis), Basis>,
}

impl TensorWindow {
    /// The factor pair behind a basis element.
    pub fn pair(&self, b: Basis) -> Option<(Basis, Basis)> {
        self.pairs.get((b.deg - self.lo) as usize)?.get(b.idx).copied()
    }

    pub fn basis_of(&self, x: Basis, y: Basis) -> Option<Basis> {
        self.index.get(&(x, y)).copied()
    }
}

/// `A (x) B` on `[lo, hi]` with `(a (x) b)(a' (x) b') = (-1)^{|a'||b|} aa' (x) bb'`.
pub fn tensor_window(a: &dyn GradedAlgebra, b: &dyn GradedAlgebra, lo: i64, hi: i64) -> Result<TensorWindow> {
    if a.field() != b.field() {
        return Err(Error::CharacteristicMismatch(a.field().p(), b.field().p()));
    }
    let f = a.field();
    let bases: Vec<Vec<(Basis, Basis)>> = (lo..=hi).map(|d| pair_basis(a, b, d)).collect::<Result<_>>()?;
    let labels = bases
        .iter()
        .map(|v| {
            v.iter()
                .map(|&(x, y)| format!("{}⊗{}", a.label(x), b.label(y)))
                .collect()
        })
        .collect();
    let mut index = HashMap::new();
    for (k, v) in bases.iter().enumerate() {
        for (i, &p) in v.iter().enumerate() {
            index.insert(p, Basis::new(lo + k as i64, i));
        }
    }
    let unit = *index
        .get(&(a.unit(), b.unit()))
        .ok_or_else(|| Error::invalid("window does not contain the unit"))?;
    let mut w = AlgebraWindow::new(f, lo, hi, labels, unit)?;
    for d1 in lo..=hi {
        for d2 in lo..=hi {
            let d = d1 + d2;
            if d < lo || d > hi {
                continue;
            }
            for (i, &(x, y)) in bases[(d1 - lo) as usize].iter().enumerate() {
                for (j, &(x2, y2)) in bases[(d2 - lo) as usize].iter().enumerate() {
                    let s = f.sign(x2.deg * y.deg);
                    let xx = a.mul_basis(x, x2)?;
                    let yy = b.mul_basis(y, y2)?;
                    let mut h = Homog::zero(d, bases[(d - lo) as usize].len());
                    for (u, cu) in xx.support() {
                        for (v, cv) in yy.support() {
                            let k = index[&(u, v)].idx;
                            h.coeffs[k] = f.addm(h.coeffs[k], f.mulm(s, f.mulm(cu, cv)));
                        }
                    }
                    w.set_product(Basis::new(d1, i), Basis::new(d2, j), h)?;
                }
            }
        }
    }
    Ok(TensorWindow {
        algebra: w,
        lo,
        pairs: bases,
        index,
    })
}

/// The opposite algebra: `a . b = (-1)^{|a||b|} b a`.
pub fn opposite(a: &dyn GradedAlgebra) -> Result<AlgebraWindow> {
    let (lo, hi) = bounded(a)?;
    let f = a.field();
    let labels = (lo..=hi)
        .map(|d| Ok((0..a.dim(d)?).map(|i| format!("{}°", a.label(Basis::new(d, i)))).collect()))
        .collect::<Result<Vec<_>>>()?;
    let mut w = AlgebraWindow::new(f, lo, hi, labels, a.unit())?;
    for d1 in lo..=hi {
        for d2 in lo..=hi {
            if d1 + d2 < lo || d1 + d2 > hi {
                continue;
            }
            for i in 0..a.dim(d1)? {
                for j in 0..a.dim(d2)? {
                    let (x, y) = (Basis::new(d1, i), Basis::new(d2, j));
                    let v = a.mul_basis(y, x)?.scaled(f, f.sign(d1 * d2));
                    w.set_product(x, y, v)?;
                }
            }
        }
    }
    Ok(w)
}

/// Enveloping algebra `A^op (x) A` on `[lo, hi]`.
pub fn enveloping(a: &dyn GradedAlgebra, lo: i64, hi: i64) -> Result<TensorWindow> {
    let op = opposite(a)?;
    tensor_window(&op, a, lo, hi)
}

/// Dimensions of a graded vector space on a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVectorSpace {
    pub lo: i64,
    pub dims: Vec<usize>,
}

impl GradedVectorSpace {
    pub fn new(lo: i64, dims: Vec<usize>) -> Self {
        GradedVectorSpace { lo, dims }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo || d > self.hi() {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }
}

/// Homogeneous linear map of a fixed degree, one block per source degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    pub field: Fp,
    pub degree: i64,
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub blocks: BTreeMap<i64, Matrix<Fp>>,
}

impl GradedMap {
    pub fn zero(field: Fp, degree: i64, source: GradedVectorSpace, target: GradedVectorSpace) -> Self {
        let blocks = (source.lo..=source.hi())
            .map(|d| (d, Matrix::zeros(field, target.dim(d + degree), source.dim(d))))
            .collect();
        GradedMap {
            field,
            degree,
            source,
            target,
            blocks,
        }
    }

    pub fn apply(&self, h: &Homog) -> Result<Homog> {
        let m = self
            .blocks
            .get(&h.deg)
            .ok_or_else(|| Error::overflow(h.deg, self.source.lo, self.source.hi()))?;
        Ok(Homog {
            deg: h.deg + self.degree,
            coeffs: m.mul_vec(&h.coeffs)?,
        })
    }

    /// `self o g`.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        let mut out = GradedMap::zero(self.field, self.degree + g.degree, g.source.clone(), self.target.clone());
        for (d, gb) in &g.blocks {
            let Some(fb) = self.blocks.get(&(d + g.degree)) else {
                continue;
            };
            out.blocks.insert(*d, fb.mul(gb)?);
        }
        Ok(out)
    }
}

/// An element of `V_i (x) W_j` as a `dim V_i x dim W_j` coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2 {
    pub left_deg: i64,
    pub right_deg: i64,
    pub coeffs: Matrix<Fp>,
}

/// `(f (x) g)(m (x) n) = (-1)^{|g||m|} f(m) (x) g(n)`.
pub fn tensor_map(f: &GradedMap, g: &GradedMap, t: &Tensor2) -> Result<Tensor2> {
    let fb = f
        .blocks
        .get(&t.left_deg)
        .ok_or_else(|| Error::overflow(t.left_deg, f.source.lo, f.source.hi()))?;
    let gb = g
        .blocks
        .get(&t.right_deg)
        .ok_or_else(|| Error::overflow(t.right_deg, g.source.lo, g.source.hi()))?;
    let field = f.field;
    let c = fb.mul(&t.coeffs)?.mul(&gb.transpose())?;
    Ok(Tensor2 {
        left_deg: t.left_deg + f.degree,
        right_deg: t.right_deg + g.degree,
        coeffs: c.scale(&field.sign(g.degree * t.left_deg)),
    })
}
